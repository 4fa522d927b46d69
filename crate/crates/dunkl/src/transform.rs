//! Discrete Dunkl transform on a tensor Gauss–Jacobi grid, generalized
//! translation (spectral and, for radial functions, through the Rösler
//! measure) and convolution.
//!
//! ℱf(ξ) = c_κ ∫ f(x) E(-ix, ξ) h_κ²(x) dx and ℱ⁻¹g(x) = c_κ ∫ g(ξ) E(ix, ξ) h_κ²(ξ) dξ.
//! Physical nodes are a·u and frequency nodes u/a for one base rule u and a
//! scale a, so both directions are the same separable contraction with the
//! per-axis kernel matrix e_κ(i u_p u_q).

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::dunkl_core::{dunkl_kernel, rank_one_imag, ScalarField};
use crate::error::{DunklError, Result};
use crate::par::map_range;
use crate::quadrature::{axis_rule, gauss_jacobi};
use crate::root_system::ReflectionGroupSpec;

/// Fraction of L² mass allowed outside 0.8·L before `forward_checked` refuses.
pub const TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug)]
pub struct QuadratureGrid {
    pub spec: ReflectionGroupSpec,
    pub n: usize,
    pub l: f64,
    /// Base nodes u per axis on [-L, L], ascending and symmetric about 0.
    pub nodes: Vec<Vec<f64>>,
    /// Base weights per axis with the axis factor of h_κ² folded in.
    pub weights: Vec<Vec<f64>>,
    /// Physical nodes are scale·u, frequency nodes u/scale.
    pub scale: f64,
    kernels: Arc<OnceLock<Vec<Vec<Complex64>>>>,
}

impl QuadratureGrid {
    pub fn new(spec: &ReflectionGroupSpec, n: usize, l: f64) -> Result<Arc<Self>> {
        let mut nodes = Vec::with_capacity(spec.d);
        let mut weights = Vec::with_capacity(spec.d);
        for &k in &spec.kappas {
            let (x, w) = axis_rule(n, l, k)?;
            nodes.push(x);
            weights.push(w);
        }
        Ok(Arc::new(Self { spec: spec.clone(), n, l, nodes, weights, scale: 1.0, kernels: Arc::new(OnceLock::new()) }))
    }

    /// Same base rule with physical nodes a·u and frequency nodes u/a; shares the kernel cache.
    pub fn with_scale(&self, a: f64) -> Result<Arc<Self>> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(DunklError::Domain(format!("grid scale {a} must be positive")));
        }
        Ok(Arc::new(Self {
            spec: self.spec.clone(),
            n: self.n,
            l: self.l,
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            scale: a,
            kernels: self.kernels.clone(),
        }))
    }

    /// Default resolution: N = 256, L = 12 in one dimension and N = 64, L = 8 per axis in two.
    pub fn reference(spec: &ReflectionGroupSpec) -> Result<Arc<Self>> {
        match spec.d {
            1 => Self::new(spec, 256, 12.0),
            2 => Self::new(spec, 64, 8.0),
            d => Err(DunklError::Domain(format!("no reference grid for d = {d}"))),
        }
    }

    /// Twice the nodes and √2 times the radius, so that the largest resolved
    /// product x·ξ doubles.
    pub fn refined(&self) -> Result<Arc<Self>> {
        Self::new(&self.spec, 2 * self.n, std::f64::consts::SQRT_2 * self.l)
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.spec.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn multi(&self, mut idx: usize) -> Vec<usize> {
        let d = self.spec.d;
        let mut out = vec![0; d];
        for a in (0..d).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    fn side_scale(&self, side: Side) -> f64 {
        match side {
            Side::Physical => self.scale,
            Side::Frequency => 1.0 / self.scale,
        }
    }

    pub fn point_on(&self, side: Side, idx: usize) -> Vec<f64> {
        let a = self.side_scale(side);
        self.multi(idx).iter().enumerate().map(|(ax, &i)| a * self.nodes[ax][i]).collect()
    }

    pub fn weight_on(&self, side: Side, idx: usize) -> f64 {
        let a = self.side_scale(side);
        let base: f64 = self.multi(idx).iter().enumerate().map(|(ax, &i)| self.weights[ax][i]).product();
        base * a.powf(self.spec.d_kappa)
    }

    /// Physical node.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.point_on(Side::Physical, idx)
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn freq_point(&self, idx: usize) -> Vec<f64> {
        self.point_on(Side::Frequency, idx)
    }

    /// Physical weight.
    pub fn weight(&self, idx: usize) -> f64 {
        self.weight_on(Side::Physical, idx)
    }

    pub fn weights_flat(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn freq_weight(&self, idx: usize) -> f64 {
        self.weight_on(Side::Frequency, idx)
    }

    /// Half-width of the box on the given side.
    pub fn extent(&self, side: Side) -> f64 {
        self.l * self.side_scale(side)
    }

    /// ∫ f h_κ² over the physical box.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        values.iter().enumerate().map(|(i, v)| v * self.weight(i)).sum()
    }

    pub fn integrate_real(&self, values: &[f64]) -> f64 {
        values.iter().enumerate().map(|(i, v)| v * self.weight(i)).sum()
    }

    /// Row-major n×n matrices e_κ(i x_p x_q), one per axis.
    fn kernels(&self) -> &Vec<Vec<Complex64>> {
        self.kernels.get_or_init(|| {
            (0..self.spec.d)
                .map(|a| {
                    let x = &self.nodes[a];
                    let k = self.spec.kappas[a];
                    let n = self.n;
                    map_range(n * n, |pq| rank_one_imag(k, x[pq / n] * x[pq % n]))
                })
                .collect()
        })
    }

    pub fn sample(self: &Arc<Self>, f: &ScalarField) -> SampledField {
        let values = map_range(self.len(), |i| f.eval(&self.point(i)));
        SampledField { grid: self.clone(), values, side: Side::Physical }
    }

    pub fn sample_frequency(self: &Arc<Self>, f: &ScalarField) -> SampledField {
        let values = map_range(self.len(), |i| f.eval(&self.freq_point(i)));
        SampledField { grid: self.clone(), values, side: Side::Frequency }
    }

    pub fn from_values(self: &Arc<Self>, values: Vec<Complex64>, side: Side) -> Result<SampledField> {
        if values.len() != self.len() {
            return Err(DunklError::Domain(format!("expected {} samples, got {}", self.len(), values.len())));
        }
        Ok(SampledField { grid: self.clone(), values, side })
    }

    /// out = c_κ · Σ_p K(p, q) w_p g_p along every axis, with K or its conjugate and
    /// the weights of the side the values live on.
    fn transform(&self, values: &[Complex64], from: Side, conj: bool) -> Vec<Complex64> {
        let n = self.n;
        let d = self.spec.d;
        let mut g: Vec<Complex64> = values.iter().enumerate().map(|(i, v)| v * self.weight_on(from, i)).collect();
        let ks = self.kernels();
        for a in 0..d {
            let stride = n.pow((d - 1 - a) as u32);
            let k = &ks[a];
            let src = &g;
            let next = map_range(g.len(), |idx| {
                let s = idx % stride;
                let q = (idx / stride) % n;
                let o = idx / (stride * n);
                let base = o * stride * n + s;
                let mut acc = Complex64::new(0.0, 0.0);
                for p in 0..n {
                    let kv = k[p * n + q];
                    let kv = if conj { kv.conj() } else { kv };
                    acc += kv * src[base + p * stride];
                }
                acc
            });
            g = next;
        }
        let c = self.spec.mehta;
        g.iter_mut().for_each(|v| *v *= c);
        g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Physical,
    Frequency,
}

#[derive(Clone, Debug)]
pub struct SampledField {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<Complex64>,
    pub side: Side,
}

impl SampledField {
    pub fn with_values(&self, values: Vec<Complex64>) -> SampledField {
        SampledField { grid: self.grid.clone(), values, side: self.side }
    }

    /// Pointwise product with a function of the node (physical or frequency, per side).
    pub fn mul_by(&self, f: impl Fn(&[f64]) -> Complex64 + Sync + Send) -> SampledField {
        let g = &self.grid;
        let values = map_range(g.len(), |i| self.values[i] * f(&g.point_on(self.side, i)));
        self.with_values(values)
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.grid.point_on(self.side, idx)
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.grid.weight_on(self.side, idx)
    }

    /// ∫ f h_κ² over the box on this field's side.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().enumerate().map(|(i, v)| v * self.weight(i)).sum()
    }

    pub fn mul(&self, other: &SampledField) -> Result<SampledField> {
        self.same_shape(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect()))
    }

    pub fn sub(&self, other: &SampledField) -> Result<SampledField> {
        self.same_shape(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: Complex64) -> SampledField {
        self.with_values(self.values.iter().map(|v| v * c).collect())
    }

    fn same_shape(&self, other: &SampledField) -> Result<()> {
        let (a, b) = (&self.grid, &other.grid);
        if !Arc::ptr_eq(a, b) && (a.n != b.n || a.l != b.l || a.scale != b.scale) {
            return Err(DunklError::Domain("fields live on different grids".into()));
        }
        if self.side != other.side {
            return Err(DunklError::Domain("fields live on different sides of the transform".into()));
        }
        Ok(())
    }

    /// (∫|f|^p h_κ²)^{1/p}; p = ∞ gives the maximum over the nodes.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        // Factoring out the max keeps ‖cf‖_p = |c|‖f‖_p exact for powers of two.
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let s: f64 = self.values.iter().enumerate().map(|(i, v)| self.weight(i) * (v.norm() / max).powf(p)).sum();
        max * s.powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    /// ‖f - g‖₂ / ‖g‖₂.
    pub fn rel_l2_diff(&self, reference: &SampledField) -> Result<f64> {
        Ok(self.sub(reference)?.l2_norm() / reference.l2_norm())
    }

    /// Share of ‖f‖₂² sitting where some coordinate exceeds 0.8·L.
    pub fn tail_fraction(&self) -> f64 {
        let cut = 0.8 * self.grid.extent(self.side);
        let mut tail = 0.0;
        let mut total = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let m = self.weight(i) * v.norm_sqr();
            total += m;
            if self.point(i).iter().any(|x| x.abs() > cut) {
                tail += m;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }
}

/// ℱf on the frequency grid.
pub fn forward(f: &SampledField) -> SampledField {
    SampledField { grid: f.grid.clone(), values: f.grid.transform(&f.values, f.side, true), side: Side::Frequency }
}

/// c_κ ∫ g(v) E(∓iu, v) h_κ²(v) dv evaluated on the opposite side, with the
/// minus sign when `conj`. `forward` and `inverse` are the two usual cases;
/// this also transforms frequency-side symbols with the forward kernel.
pub fn transform_to_other_side(g: &SampledField, conj: bool) -> SampledField {
    let side = match g.side {
        Side::Physical => Side::Frequency,
        Side::Frequency => Side::Physical,
    };
    SampledField { grid: g.grid.clone(), values: g.grid.transform(&g.values, g.side, conj), side }
}

/// `forward`, refusing inputs whose mass near the box edge would be aliased.
pub fn forward_checked(f: &SampledField) -> Result<SampledField> {
    let tail = f.tail_fraction();
    if tail > TAIL_TOLERANCE {
        return Err(DunklError::Accuracy { what: "mass near the edge of the truncation box".into(), residual: tail });
    }
    Ok(forward(f))
}

/// ℱ⁻¹g on the physical grid.
pub fn inverse(g: &SampledField) -> SampledField {
    SampledField { grid: g.grid.clone(), values: g.grid.transform(&g.values, g.side, false), side: Side::Physical }
}

/// Applies the multiplier m: ℱ⁻¹(m ℱf).
pub fn apply_multiplier(f: &SampledField, m: impl Fn(&[f64]) -> Complex64 + Sync + Send) -> SampledField {
    inverse(&forward(f).mul_by(m))
}

/// |‖ℱf‖₂ - ‖f‖₂| / ‖f‖₂.
pub fn plancherel_defect(grid: &Arc<QuadratureGrid>, f: &ScalarField) -> f64 {
    let s = grid.sample(f);
    let a = s.l2_norm();
    (forward(&s).l2_norm() - a).abs() / a
}

/// τ(x)f = ℱ⁻¹(E(ix, ·) ℱf) on the grid.
pub fn translate(f: &SampledField, x: &[f64]) -> SampledField {
    let spec = f.grid.spec.clone();
    let x = x.to_vec();
    inverse(&forward(f).mul_by(move |xi| dunkl_kernel(&spec, &x, xi)))
}

/// τ(x)f(y) at one point from the transform F = ℱf.
pub fn translate_point(transformed: &SampledField, x: &[f64], y: &[f64]) -> Complex64 {
    let g = &transformed.grid;
    let spec = &g.spec;
    let terms = map_range(g.len(), |i| {
        let xi = g.freq_point(i);
        g.freq_weight(i) * dunkl_kernel(spec, x, &xi) * dunkl_kernel(spec, y, &xi) * transformed.values[i]
    });
    spec.mehta * terms.into_iter().sum::<Complex64>()
}

/// f ∗ g = ℱ⁻¹(ℱf · ℱg).
pub fn convolve(f: &SampledField, g: &SampledField) -> Result<SampledField> {
    Ok(inverse(&forward(f).mul(&forward(g))?))
}

/// Nodes η/x ∈ [-1, 1] and probability weights of the rank-one Rösler measure,
/// density ∝ (1 + t)^κ (1 - t)^{κ-1}. For κ = 0 the measure is the point mass at t = 1.
pub fn rosler_rule(kappa: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if kappa == 0.0 {
        return Ok((vec![1.0], vec![1.0]));
    }
    let (t, w) = gauss_jacobi(n, kappa - 1.0, kappa)?;
    let total: f64 = w.iter().sum();
    Ok((t, w.into_iter().map(|v| v / total).collect()))
}

/// Product Rösler rule over the axes of a Z₂^d group.
#[derive(Clone, Debug)]
pub struct RoslerRule {
    axes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl RoslerRule {
    pub fn new(spec: &ReflectionGroupSpec, n: usize) -> Result<Self> {
        Ok(Self { axes: spec.kappas.iter().map(|&k| rosler_rule(k, n)).collect::<Result<_>>()? })
    }

    /// All tensor nodes with their product weights.
    pub fn nodes(&self) -> Vec<(Vec<f64>, f64)> {
        let mut out = vec![(Vec::new(), 1.0)];
        for (t, w) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|(p, pw)| {
                    t.iter().zip(w).map(move |(&ti, &wi)| {
                        let mut q = p.clone();
                        q.push(ti);
                        (q, pw * wi)
                    })
                })
                .collect();
        }
        out
    }

    /// Σ_j Π_a w_{a,j_a} · g(t_j).
    fn sum(&self, mut g: impl FnMut(&[f64]) -> Complex64) -> Complex64 {
        let d = self.axes.len();
        let sizes: Vec<usize> = self.axes.iter().map(|a| a.0.len()).collect();
        let total: usize = sizes.iter().product();
        let mut t = vec![0.0; d];
        let mut acc = Complex64::new(0.0, 0.0);
        for mut idx in 0..total {
            let mut w = 1.0;
            for a in (0..d).rev() {
                let i = idx % sizes[a];
                idx /= sizes[a];
                t[a] = self.axes[a].0[i];
                w *= self.axes[a].1[i];
            }
            acc += w * g(&t);
        }
        acc
    }

    /// τ(x)f(y) = ∫ f₀(√(|x|² + |y|² + 2⟨y, η⟩)) dμ_x(η) for radial f = f₀(|·|).
    pub fn translate(&self, profile: &dyn Fn(f64) -> Complex64, x: &[f64], y: &[f64]) -> Complex64 {
        let base: f64 = x.iter().chain(y).map(|v| v * v).sum();
        self.sum(|t| {
            let cross: f64 = (0..x.len()).map(|a| y[a] * x[a] * t[a]).sum();
            profile((base + 2.0 * cross).max(0.0).sqrt())
        })
    }
}

/// τ(x)f(y) for a radial field through the Rösler measure with `n` nodes per axis.
pub fn translate_radial_rosler(
    spec: &ReflectionGroupSpec,
    f: &ScalarField,
    x: &[f64],
    y: &[f64],
    n: usize,
) -> Result<Complex64> {
    let profile = f
        .profile()
        .ok_or_else(|| DunklError::Domain("Rösler translation needs a radial field".into()))?;
    Ok(RoslerRule::new(spec, n)?.translate(profile.as_ref(), x, y))
}

/// Relative L² gap allowed between Rösler and spectral translates.
pub const ROSLER_AGREEMENT: f64 = 1e-4;

/// τ(x)f on the grid through the Rösler measure, validated against the spectral
/// translate. Errors out if the two disagree.
pub fn translate_radial(grid: &Arc<QuadratureGrid>, f: &ScalarField, x: &[f64], n: usize) -> Result<SampledField> {
    let profile = f
        .profile()
        .ok_or_else(|| DunklError::Domain("Rösler translation needs a radial field".into()))?
        .clone();
    let rule = RoslerRule::new(&grid.spec, n)?;
    let values = map_range(grid.len(), |i| rule.translate(profile.as_ref(), x, &grid.point(i)));
    let rosler = grid.from_values(values, Side::Physical)?;
    let spectral = translate(&grid.sample(f), x);
    let gap = rosler.rel_l2_diff(&spectral)?;
    if !(gap <= ROSLER_AGREEMENT) {
        return Err(DunklError::Validation(format!(
            "Rösler and spectral translates differ by {gap:.3e} (relative L²)"
        )));
    }
    Ok(rosler)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosler_rule_is_a_probability_measure() {
        let (t, w) = rosler_rule(0.7, 20).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(t.iter().all(|v| v.abs() < 1.0));
    }

    #[test]
    fn grid_integrates_weight_mass() {
        let spec = ReflectionGroupSpec::rank_one(0.5).unwrap();
        let g = QuadratureGrid::new(&spec, 64, 10.0).unwrap();
        let v = g.sample(&ScalarField::gaussian(0.5));
        let mass = g.integrate(&v.values).re;
        assert!((mass * spec.mehta - 1.0).abs() < 1e-12);
    }
}
