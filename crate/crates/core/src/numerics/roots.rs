use crate::error::{Error, Result};

/// Final bracket produced by [`bracket_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub iterations: usize,
}

/// Brent-style hybrid of bisection, secant and inverse quadratic steps.
///
/// The sign change is kept inside `[lo, hi]` at every step and bisection is
/// forced whenever the interpolated step does not shrink the bracket fast
/// enough, so convergence is guaranteed. Terminates once the bracket width
/// is at most `tol` (or `f` vanishes exactly).
pub fn bracket_root(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<RootBracket> {
    if !(tol > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bracket [{lo}, {hi}] with tol {tol}"
        )));
    }
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(RootBracket {
            root: a,
            lo: a,
            hi: a,
            f_lo: fa,
            f_hi: fa,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(RootBracket {
            root: b,
            lo: b,
            hi: b,
            f_lo: fb,
            f_hi: fb,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    // `c` is the previous iterate, used for inverse quadratic interpolation.
    let (mut c, mut fc) = (a, fa);
    let mut iterations = 0;
    let max_iter = 400;
    while (b - a).abs() > tol && iterations < max_iter {
        iterations += 1;
        let width = b - a;
        let candidate = if fc != fa && fc != fb {
            // Inverse quadratic through (a, fa), (b, fb), (c, fc).
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        // Accept the interpolated point only if it is well inside the bracket.
        let margin = 0.25 * tol.min(width);
        let mut x = if candidate.is_finite() && candidate > a + margin && candidate < b - margin {
            candidate
        } else {
            0.5 * (a + b)
        };
        // Guard against slow one-sided convergence: bisect every third step
        // if the bracket has not halved.
        if iterations % 3 == 0 && width > 0.0 {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        c = x;
        fc = fx;
        if fx == 0.0 {
            return Ok(RootBracket {
                root: x,
                lo: x,
                hi: x,
                f_lo: fx,
                f_hi: fx,
                iterations,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // Nudge a stagnant endpoint towards the root with a tol-sized step.
        if (b - a) > tol && (b - a) > 0.5 * width && iterations % 3 != 0 {
            let nudge = if fa.abs() < fb.abs() {
                a + 0.5 * tol
            } else {
                b - 0.5 * tol
            };
            if nudge > a && nudge < b {
                let fn_ = f(nudge);
                if fn_ == 0.0 {
                    return Ok(RootBracket {
                        root: nudge,
                        lo: nudge,
                        hi: nudge,
                        f_lo: 0.0,
                        f_hi: 0.0,
                        iterations,
                    });
                }
                if fn_.signum() == fa.signum() {
                    a = nudge;
                    fa = fn_;
                } else {
                    b = nudge;
                    fb = fn_;
                }
            }
        }
    }
    let root = if fa.abs() < fb.abs() { a } else { b };
    Ok(RootBracket {
        root,
        lo: a,
        hi: b,
        f_lo: fa,
        f_hi: fb,
        iterations,
    })
}

/// Root of `f` in `[lo, hi]` located to within `tol`.
pub fn find_root_bracketed(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    bracket_root(f, lo, hi, tol).map(|b| b.root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn linear_root() {
        let r = find_root_bracketed(|x| x - 2.0, 0.0, 5.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tan_equation() {
        let r = bracket_root(|w: f64| w.tan() - w, PI, 1.5 * PI - 1e-6, 1e-12).unwrap();
        assert!((r.root - 4.493_409_458).abs() < 1e-9);
        assert!(r.hi - r.lo <= 1e-12);
    }

    #[test]
    fn cosine_root() {
        let r = find_root_bracketed(f64::cos, 1.0, 2.0, 1e-13).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(matches!(
            find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn final_bracket_has_opposite_signs() {
        let f = |x: f64| (x - 0.3).powi(3) + 1e-3 * (x - 0.3);
        let b = bracket_root(f, -4.0, 7.0, 1e-10).unwrap();
        assert!(b.hi - b.lo <= 1e-10);
        assert!(f(b.lo).signum() != f(b.hi).signum() || b.lo == b.hi);
    }
}
