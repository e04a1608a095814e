//! Grid, quadrature, differentiation, sequences and bracketed root finding.

pub mod cumulative;
pub mod grid;
pub mod roots;
pub mod seq;

pub use cumulative::PanelRule;
pub use grid::{
    derivative, fmt17, inner, integrate, parse_csv_on_grid, parse_xy_csv, Grid, GridFn,
    DEFAULT_POINTS, MIN_POINTS,
};
pub use roots::{bracket_root, find_root_bracketed, RootBracket};
pub use seq::{ell2_tail, RealSeq};
