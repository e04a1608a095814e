use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite real sequence indexed from 1.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealSeq(Vec<f64>);

impl RealSeq {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Unit vector `e_k` of length `len` (1-based `k`).
    pub fn unit(len: usize, k: usize) -> Self {
        let mut v = vec![0.0; len];
        v[k - 1] = 1.0;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, n: usize) -> f64 {
        self.0[n - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    /// ℓ² norm of entries `from..to` (1-based, half-open).
    pub fn block_norm(&self, from: usize, to: usize) -> f64 {
        self.0[from - 1..(to - 1).min(self.0.len())]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

impl From<Vec<f64>> for RealSeq {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// `(Σ s_n²)^{1/2}`.
pub fn ell2_tail(s: &RealSeq) -> f64 {
    // Scaled accumulation to stay safe for very large or tiny entries.
    let scale = s.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * s.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell2_examples() {
        assert_eq!(ell2_tail(&RealSeq::zeros(3)), 0.0);
        assert!((ell2_tail(&RealSeq::from(vec![3.0, 4.0])) - 5.0).abs() < 1e-15);
        let harmonic = RealSeq::from((1..=100).map(|n| 1.0 / n as f64).collect::<Vec<_>>());
        // Partial sum of Σ 1/n² up to 100, square-rooted.
        let oracle: f64 = (1..=100).map(|n| 1.0 / (n * n) as f64).sum::<f64>().sqrt();
        assert!((ell2_tail(&harmonic) - oracle).abs() < 1e-14);
        assert!((ell2_tail(&harmonic) - 1.2787).abs() < 1e-3);
    }

    #[test]
    fn one_based_indexing() {
        let s = RealSeq::from(vec![1.0, 2.0, 3.0]);
        assert_eq!(s.get(1), 1.0);
        assert_eq!(s.get(3), 3.0);
        assert!((s.block_norm(2, 4) - 13f64.sqrt()).abs() < 1e-15);
        assert!(RealSeq::new(vec![1.0, f64::INFINITY]).is_err());
    }
}
