//! Quadrature rules: Gauss–Jacobi on the half line with the rank-one weight
//! folded in, symmetric axis rules, and log-spaced trapezoid grids in time.

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi};
use std::num::NonZeroUsize;

use crate::error::{DunklError, Result};

/// Nodes and weights on [-1, 1] for the weight (1-u)^alpha (1+u)^beta, sorted ascending.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let deg = NonZeroUsize::new(n).ok_or_else(|| DunklError::Domain("zero quadrature nodes".into()))?;
    let a = FiniteAboveNegOneF64::new(alpha)
        .ok_or_else(|| DunklError::Domain(format!("jacobi alpha {alpha} must exceed -1")))?;
    let b = FiniteAboveNegOneF64::new(beta)
        .ok_or_else(|| DunklError::Domain(format!("jacobi beta {beta} must exceed -1")))?;
    let rule = GaussJacobi::new(deg, a, b);
    let mut pairs: Vec<(f64, f64)> = rule.nodes().cloned().zip(rule.weights().cloned()).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}

/// Rule for `∫_0^L f(x) (√2 x)^{2κ} dx`; the weight is exact in the node weights.
pub fn half_line_weighted(n: usize, l: f64, kappa: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (u, w) = gauss_jacobi(n, 0.0, 2.0 * kappa)?;
    let half = 0.5 * l;
    let scale = 2f64.powf(kappa) * half.powf(2.0 * kappa + 1.0);
    let x = u.iter().map(|&ui| half * (1.0 + ui)).collect();
    let w = w.iter().map(|&wi| wi * scale).collect();
    Ok((x, w))
}

/// Symmetric rule on [-L, L] with weight (√2|x|)^{2κ}; `n` must be even.
///
/// The two halves are mirror images, so the grid is closed under x ↦ -x.
pub fn axis_rule(n: usize, l: f64, kappa: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 || n % 2 != 0 {
        return Err(DunklError::Domain(format!("axis node count {n} must be even and at least 2")));
    }
    if !(l > 0.0) {
        return Err(DunklError::Domain(format!("truncation radius {l} must be positive")));
    }
    let (xh, wh) = half_line_weighted(n / 2, l, kappa)?;
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in (0..xh.len()).rev() {
        x.push(-xh[i]);
        w.push(wh[i]);
    }
    x.extend_from_slice(&xh);
    w.extend_from_slice(&wh);
    Ok((x, w))
}

/// Log-spaced nodes in t with trapezoid weights for `∫ F(t) dt` (Jacobian included).
#[derive(Clone, Debug, PartialEq)]
pub struct LogGrid {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

impl LogGrid {
    pub fn new(t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min) || n < 2 {
            return Err(DunklError::Domain(format!("bad log grid [{t_min}, {t_max}] with {n} nodes")));
        }
        let (a, b) = (t_min.ln(), t_max.ln());
        let h = (b - a) / (n - 1) as f64;
        let t: Vec<f64> = (0..n).map(|i| (a + h * i as f64).exp()).collect();
        let w = t
            .iter()
            .enumerate()
            .map(|(i, &ti)| if i == 0 || i == n - 1 { 0.5 * h * ti } else { h * ti })
            .collect();
        Ok(Self { t, w })
    }

    /// Same node density (nodes per decade) as `new(t_min, t_max, n)`, stretched to cover `[lo, hi]`.
    pub fn covering(t_min: f64, t_max: f64, n: usize, lo: f64, hi: f64) -> Result<Self> {
        let per_decade = (n - 1) as f64 / (t_max / t_min).log10();
        let a = t_min.min(lo);
        let b = t_max.max(hi);
        let m = ((b / a).log10() * per_decade).ceil() as usize + 1;
        Self::new(a, b, m)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.t.iter().zip(&self.w).map(|(&t, &w)| w * f(t)).sum()
    }

    /// Every other node; the coarse level for a refinement comparison.
    pub fn coarsen(&self) -> Result<Self> {
        let n = self.len();
        Self::new(self.t[0], self.t[n - 1], n.div_ceil(2))
    }

    pub fn refine(&self) -> Result<Self> {
        let n = self.len();
        Self::new(self.t[0], self.t[n - 1], 2 * n - 1)
    }
}
