//! Dunkl heat semigroup, its fractional powers, the square functions built on
//! them, and the associated maximal function.
//!
//! Everything acts spectrally on [`SampledField`]s: T_{t,δ} multiplies ℱf by
//! e^{-t|ξ|^{2δ}} and G_{s,δ} by |ξ|^{2s}e^{-t|ξ|^{2δ}}.

use std::sync::Arc;

use num_complex::Complex64;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::dunkl_core::dunkl_kernel;
use crate::dunkl_core::kernel::dunkl_kernel_real_scaled;
use crate::error::{DunklError, Result};
use crate::par::map_range;
use crate::quadrature::LogGrid;
use crate::root_system::ReflectionGroupSpec;
use crate::transform::{forward, inverse, translate, QuadratureGrid, RoslerRule, SampledField, Side};

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(DunklError::Domain(format!("time {t} must be positive")))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(DunklError::Domain(format!("fractional order {delta} must lie in (0, 1]")))
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(DunklError::Domain(format!("order {s} must be positive")))
    }
}

/// Orders (s, δ, k) with s/δ = k and a time grid for the t-integrals.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareFunctionProfile {
    pub s: f64,
    pub delta: f64,
    pub k: u32,
    pub time: LogGrid,
}

/// Base time grid: [1e-4, 1e4] with 161 log-spaced nodes.
pub fn base_time_grid() -> LogGrid {
    LogGrid::new(1e-4, 1e4, 161).expect("static grid")
}

impl SquareFunctionProfile {
    /// k = s and δ = 1 for integer s; otherwise k is the least integer above s and δ = s/k.
    pub fn new(s: f64) -> Result<Self> {
        check_s(s)?;
        let k = if s.fract() == 0.0 { s as u32 } else { s.ceil() as u32 };
        Self::with_delta(s, s / k as f64)
    }

    pub fn with_delta(s: f64, delta: f64) -> Result<Self> {
        check_s(s)?;
        check_delta(delta)?;
        let ratio = s / delta;
        let k = ratio.round();
        if (ratio - k).abs() > 1e-12 * ratio || k < 1.0 {
            return Err(DunklError::Domain(format!("s/δ = {ratio} is not a positive integer")));
        }
        Ok(Self { s, delta, k: k as u32, time: base_time_grid() })
    }
}

/// q_t(x) = c_κ⁻¹ (2t)^{-d_κ/2} e^{-|x|²/4t}.
pub fn heat_kernel(spec: &ReflectionGroupSpec, t: f64, x: &[f64]) -> Result<f64> {
    check_t(t)?;
    Ok(spec.mehta_inv * (2.0 * t).powf(-spec.d_kappa / 2.0) * (-norm_sq(x) / (4.0 * t)).exp())
}

/// h_t(x, y) = c_κ⁻¹ (2t)^{-d_κ/2} e^{-(|x|²+|y|²)/4t} E_κ(x/√2t, y/√2t), evaluated in
/// scaled form so that large arguments do not overflow.
pub fn heat_kernel_translated(spec: &ReflectionGroupSpec, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    let r = (2.0 * t).sqrt();
    let xs: Vec<f64> = x.iter().map(|v| v / r).collect();
    let ys: Vec<f64> = y.iter().map(|v| v / r).collect();
    let cross: f64 = xs.iter().zip(&ys).map(|(a, b)| (a * b).abs()).sum();
    let expo = -(norm_sq(x) + norm_sq(y)) / (4.0 * t) + cross;
    Ok(spec.mehta_inv * (2.0 * t).powf(-spec.d_kappa / 2.0) * expo.exp() * dunkl_kernel_real_scaled(spec, &xs, &ys))
}

/// c_κ² h_t(x, y): the kernel of T_t against h_κ²(y)dy, with unit mass.
pub fn transition_density(spec: &ReflectionGroupSpec, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(spec.mehta * spec.mehta * heat_kernel_translated(spec, t, x, y)?)
}

fn radius(xi: &[f64]) -> f64 {
    norm_sq(xi).sqrt()
}

/// T_t f = ℱ⁻¹(e^{-t|ξ|²} ℱf).
pub fn heat_apply(t: f64, f: &SampledField) -> Result<SampledField> {
    frac_apply(t, 1.0, f)
}

/// T_t f(x) = ∫ c_κ² h_t(x, y) f(y) h_κ²(y) dy by direct quadrature.
pub fn heat_apply_kernel(t: f64, f: &SampledField) -> Result<SampledField> {
    check_t(t)?;
    let g = &f.grid;
    let spec = &g.spec;
    let pts = g.points();
    let w = g.weights_flat();
    let values = map_range(g.len(), |i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..g.len() {
            let k = transition_density(spec, t, &pts[i], &pts[j]).unwrap_or(0.0);
            acc += w[j] * k * f.values[j];
        }
        acc
    });
    g.from_values(values, Side::Physical)
}

/// T_{t,δ} f = ℱ⁻¹(e^{-t|ξ|^{2δ}} ℱf).
pub fn frac_apply(t: f64, delta: f64, f: &SampledField) -> Result<SampledField> {
    check_t(t)?;
    check_delta(delta)?;
    Ok(inverse(&forward(f).mul_by(|xi| Complex64::new((-t * radius(xi).powf(2.0 * delta)).exp(), 0.0))))
}

/// One-sided stable density of order 1/2: η_t(s) = t (4π s³)^{-1/2} e^{-t²/4s}.
pub fn subordinator_density(t: f64, s: f64) -> f64 {
    t * (4.0 * std::f64::consts::PI * s * s * s).powf(-0.5) * (-t * t / (4.0 * s)).exp()
}

/// ∫₀^∞ T_s f η_t(s) ds by trapezoid quadrature in log s; the s-range covers
/// the smallest nonzero frequency on the grid.
pub fn subordinate_half(t: f64, f: &SampledField) -> Result<SampledField> {
    check_t(t)?;
    let g = &f.grid;
    let xi_min = smallest_frequency(g);
    let s_grid = LogGrid::covering(1e-6 * t * t, 1e4, 400, 1e-6 * t * t, 60.0 / (xi_min * xi_min))?;
    let weights: Vec<f64> = s_grid.t.iter().zip(&s_grid.w).map(|(&s, &w)| w * subordinator_density(t, s)).collect();
    let fh = forward(f);
    let mult = fh.mul_by(|xi| {
        let r2 = norm_sq(xi);
        let m: f64 = s_grid.t.iter().zip(&weights).map(|(&s, &w)| w * (-s * r2).exp()).sum();
        Complex64::new(m, 0.0)
    });
    Ok(inverse(&mult))
}

/// G_{s,δ}f(·, t) = ℱ⁻¹(|ξ|^{2s} e^{-t|ξ|^{2δ}} ℱf); equals (-1)^k ∂_t^k T_{t,δ} f when s = kδ.
pub fn g_field(s: f64, delta: f64, f: &SampledField, t: f64) -> Result<SampledField> {
    check_s(s)?;
    check_delta(delta)?;
    check_t(t)?;
    Ok(inverse(&g_multiplied(s, delta, &forward(f), t)))
}

fn g_multiplied(s: f64, delta: f64, fh: &SampledField, t: f64) -> SampledField {
    fh.mul_by(|xi| {
        let r = radius(xi);
        Complex64::new(r.powf(2.0 * s) * (-t * r.powf(2.0 * delta)).exp(), 0.0)
    })
}

/// G_{s,δ}f(x, t) at a single point.
pub fn g_integrand(s: f64, delta: f64, f: &SampledField, x: &[f64], t: f64) -> Result<Complex64> {
    check_s(s)?;
    check_delta(delta)?;
    check_t(t)?;
    let gh = g_multiplied(s, delta, &forward(f), t);
    Ok(inverse_at(&gh, x))
}

fn inverse_at(fh: &SampledField, x: &[f64]) -> Complex64 {
    let g = &fh.grid;
    let spec = &g.spec;
    let terms = map_range(g.len(), |i| g.freq_weight(i) * dunkl_kernel(spec, x, &g.freq_point(i)) * fh.values[i]);
    spec.mehta * terms.into_iter().sum::<Complex64>()
}

fn smallest_frequency(grid: &QuadratureGrid) -> f64 {
    let u = grid
        .nodes
        .iter()
        .map(|a| a.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min))
        .fold(f64::INFINITY, f64::min);
    u / grid.scale
}

/// Base time grid extended so that e^{-t|ξ|^{2δ}} has died out at the largest t for
/// every grid frequency, and so that the small-t end carries negligible weight.
pub fn time_grid(grid: &QuadratureGrid, s: f64, delta: f64) -> Result<LogGrid> {
    let base = base_time_grid();
    let hi = 25.0 / smallest_frequency(grid).powf(2.0 * delta);
    let lo = 1e-12f64.powf(delta / (2.0 * s)).min(1e-4);
    LogGrid::covering(base.t[0], base.t[base.len() - 1], base.len(), lo, hi)
}

/// Allowed share of the t-integral carried by the two end nodes.
pub const TIME_TAIL_TOLERANCE: f64 = 1e-6;

fn weighted_time_integral(
    s: f64,
    delta: f64,
    fh: &SampledField,
    grid: &LogGrid,
    power: f64,
    what: &str,
) -> Result<Vec<f64>> {
    let n = fh.grid.len();
    let mut acc = vec![0.0; n];
    let mut ends = vec![0.0; n];
    let last = grid.len() - 1;
    for (j, (&t, &w)) in grid.t.iter().zip(&grid.w).enumerate() {
        let gt = inverse(&g_multiplied(s, delta, fh, t));
        let scale = w * t.powf(power);
        for i in 0..n {
            let v = scale * gt.values[i].norm_sqr();
            acc[i] += v;
            if j == 0 || j == last {
                ends[i] += v;
            }
        }
    }
    let total: f64 = acc.iter().sum();
    let tail: f64 = ends.iter().sum();
    if total > 0.0 && tail > TIME_TAIL_TOLERANCE * total {
        return Err(DunklError::Accuracy { what: format!("{what}: t-grid end contributions"), residual: tail / total });
    }
    Ok(acc)
}

/// g_{s,δ}(f, x)² = ∫₀^∞ |G_{s,δ}f(x,t)|² t^{2s/δ-1} dt at every grid node.
///
/// For δ = 1 this is the classical g_s; for s = jδ it is g_{j,δ}.
pub fn g_function_values(s: f64, delta: f64, f: &SampledField) -> Result<Vec<f64>> {
    check_s(s)?;
    check_delta(delta)?;
    let tg = time_grid(&f.grid, s, delta)?;
    let fh = forward(f);
    let sq = weighted_time_integral(s, delta, &fh, &tg, 2.0 * s / delta - 1.0, "g-function")?;
    Ok(sq.into_iter().map(f64::sqrt).collect())
}

/// ‖g_{s,δ}(f)‖₂ with the x-integral done on the frequency side by Plancherel,
/// so G fields wider than the box at large t are not truncated.
pub fn g_function_l2_norm(s: f64, delta: f64, f: &SampledField) -> Result<f64> {
    check_s(s)?;
    check_delta(delta)?;
    let tg = time_grid(&f.grid, s, delta)?;
    let fh = forward(f);
    let power = 2.0 * s / delta - 1.0;
    let total: f64 = tg
        .t
        .iter()
        .zip(&tg.w)
        .map(|(&t, &w)| w * t.powf(power) * g_multiplied(s, delta, &fh, t).l2_norm().powi(2))
        .sum();
    Ok(total.sqrt())
}

/// g_{s,δ}(f, x) at one point.
pub fn g_function(s: f64, delta: f64, f: &SampledField, x: &[f64]) -> Result<f64> {
    check_s(s)?;
    check_delta(delta)?;
    let tg = time_grid(&f.grid, s, delta)?;
    let fh = forward(f);
    let power = 2.0 * s / delta - 1.0;
    let mut acc = 0.0;
    for (&t, &w) in tg.t.iter().zip(&tg.w) {
        acc += w * t.powf(power) * inverse_at(&g_multiplied(s, delta, &fh, t), x).norm_sqr();
    }
    Ok(acc.sqrt())
}

/// ‖g_{s,δ}(f)‖₂ / ‖f‖₂ predicted by Plancherel: 2^{-s/δ} √Γ(2s/δ).
pub fn g_function_l2_constant(s: f64, delta: f64) -> f64 {
    let a = 2.0 * s / delta;
    2f64.powf(-a / 2.0) * gamma(a).sqrt()
}

/// Squared distances |x|² + |y|² - 2⟨y, η⟩ and probabilities for every Rösler node,
/// per grid node y: the data needed for τ(x)w(-y) with any radial w.
struct TranslatedRadii {
    per_y: Vec<Vec<(f64, f64)>>,
}

impl TranslatedRadii {
    fn new(rule: &RoslerRule, grid: &QuadratureGrid, x: &[f64]) -> Self {
        let per_y = map_range(grid.len(), |i| {
            let y = grid.point(i);
            let base = norm_sq(x) + norm_sq(&y);
            rule.nodes()
                .into_iter()
                .map(|(t, w)| {
                    let cross: f64 = (0..x.len()).map(|a| y[a] * x[a] * t[a]).sum();
                    ((base - 2.0 * cross).max(0.0), w)
                })
                .collect()
        });
        Self { per_y }
    }

    /// τ(x)w(-y_i) for w = w₀(|·|²).
    fn apply(&self, i: usize, w0: impl Fn(f64) -> f64) -> f64 {
        self.per_y[i].iter().map(|&(r2, p)| p * w0(r2)).sum()
    }
}

/// Rösler nodes per axis used for translated weights.
pub fn rosler_nodes(d: usize) -> usize {
    if d == 1 {
        48
    } else {
        20
    }
}

/// Checks the Rösler rule against the spectral translate of a Gaussian at x.
fn validated_rule(grid: &Arc<QuadratureGrid>, x: &[f64]) -> Result<RoslerRule> {
    let rule = RoslerRule::new(&grid.spec, rosler_nodes(grid.spec.d))?;
    let gauss = |r: f64| Complex64::new((-0.5 * r * r).exp(), 0.0);
    let sampled = grid.sample(&crate::dunkl_core::ScalarField::gaussian(0.5));
    let spectral = translate(&sampled, x);
    let values = map_range(grid.len(), |i| rule.translate(&gauss, x, &grid.point(i)));
    let rosler = grid.from_values(values, Side::Physical)?;
    let gap = rosler.rel_l2_diff(&spectral)?;
    if !(gap <= crate::transform::ROSLER_AGREEMENT) {
        return Err(DunklError::Validation(format!("translated weight failed validation at {x:?}: gap {gap:.3e}")));
    }
    Ok(rule)
}

/// g*_{s,δ}(f, x)² = ∫₀^∞ ∫ |∂_t T_{t,δ}f(y)|² τ(x)(1+t^{-1/δ}|·|²)^{-s}(-y) h_κ²(y) dy t^{1-d_κ/(2δ)} dt.
pub fn g_star_values(s: f64, delta: f64, f: &SampledField, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_s(s)?;
    check_delta(delta)?;
    let g = &f.grid;
    let spec = &g.spec;
    let tg = time_grid(g, delta, delta)?;
    let fh = forward(f);
    let w = g.weights_flat();
    let power = 1.0 - spec.d_kappa / (2.0 * delta);
    let derivs: Vec<Vec<f64>> = tg
        .t
        .iter()
        .map(|&t| inverse(&g_multiplied(delta, delta, &fh, t)).values.iter().map(|v| v.norm_sqr()).collect())
        .collect();
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let rule = validated_rule(g, x)?;
        let radii = TranslatedRadii::new(&rule, g, x);
        let per_t = map_range(tg.len(), |j| {
            let t = tg.t[j];
            let scale = t.powf(-1.0 / delta);
            let inner: f64 = (0..g.len())
                .map(|i| w[i] * derivs[j][i] * radii.apply(i, |r2| (1.0 + scale * r2).powf(-s)))
                .sum();
            tg.w[j] * t.powf(power) * inner
        });
        out.push(per_t.iter().sum::<f64>().sqrt());
    }
    Ok(out)
}

/// ∫ |∂_t T_{t,δ}f(y)|² τ(x)(1+t^{-1/δ}|·|²)^{-s}(-y) h_κ²(y) dy at each of `times`,
/// the inner integral of g*_{s,δ} before the time weight.
pub fn g_star_integrands(s: f64, delta: f64, f: &SampledField, x: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    check_s(s)?;
    check_delta(delta)?;
    for &t in times {
        check_t(t)?;
    }
    let g = &f.grid;
    let fh = forward(f);
    let w = g.weights_flat();
    let rule = validated_rule(g, x)?;
    let radii = TranslatedRadii::new(&rule, g, x);
    Ok(map_range(times.len(), |j| {
        let t = times[j];
        let deriv = inverse(&g_multiplied(delta, delta, &fh, t));
        let scale = t.powf(-1.0 / delta);
        (0..g.len())
            .map(|i| w[i] * deriv.values[i].norm_sqr() * radii.apply(i, |r2| (1.0 + scale * r2).powf(-s)))
            .sum()
    }))
}

pub fn g_star(s: f64, delta: f64, f: &SampledField, x: &[f64]) -> Result<f64> {
    Ok(g_star_values(s, delta, f, &[x.to_vec()])?[0])
}

/// Time grid for the maximal function: 8 nodes per octave over [2^-24, 2^24].
pub fn maximal_time_grid() -> LogGrid {
    LogGrid::new(2f64.powi(-24), 2f64.powi(24), 385).expect("static grid")
}

/// Relative gap allowed between the grid mass of a translated weight and the
/// same mass on a grid with twice the nodes before its time scale counts as
/// resolved by the maximal function.
pub const WEIGHT_RESOLUTION: f64 = 1e-3;

fn translated_weight_masses(grid: &QuadratureGrid, rule: &RoslerRule, x: &[f64], times: &[f64], s: f64) -> Vec<f64> {
    let radii = TranslatedRadii::new(rule, grid, x);
    let w = grid.weights_flat();
    map_range(times.len(), |j| {
        let t = times[j];
        (0..grid.len()).map(|i| w[i] * radii.apply(i, |r2| (1.0 + r2 / t).powf(-s))).sum()
    })
}

/// Mf(x) = sup_t t^{-d_κ/2} ∫ |f(y)| τ(x)(1+t^{-1}|·|²)^{-s}(-y) h_κ²(y) dy.
///
/// The fractional order drops out after t ↦ t^δ, so only s enters. The sup
/// runs over times from the first one at which the translated weight is
/// resolved: its grid mass agrees with the mass on a refined grid within
/// [`WEIGHT_RESOLUTION`]. Narrower weights fall between the nodes.
pub fn maximal_values(f: &SampledField, s: f64, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_s(s)?;
    let g = &f.grid;
    let spec = &g.spec;
    let fine = QuadratureGrid::new(spec, 2 * g.n, g.l)?;
    let tg = maximal_time_grid();
    let w = g.weights_flat();
    let mass: Vec<f64> = (0..g.len()).map(|i| w[i] * f.values[i].norm()).collect();
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let rule = validated_rule(g, x)?;
        let coarse_mass = translated_weight_masses(g, &rule, x, &tg.t, s);
        let fine_mass = translated_weight_masses(&fine, &rule, x, &tg.t, s);
        let first = (0..tg.len())
            .position(|j| (coarse_mass[j] - fine_mass[j]).abs() <= WEIGHT_RESOLUTION * fine_mass[j])
            .ok_or_else(|| DunklError::Accuracy {
                what: "no resolved time scale for the maximal function".into(),
                residual: 1.0,
            })?;
        let radii = TranslatedRadii::new(&rule, g, x);
        let per_t = map_range(tg.len() - first, |j| {
            let t = tg.t[first + j];
            let inner: f64 = (0..g.len()).map(|i| mass[i] * radii.apply(i, |r2| (1.0 + r2 / t).powf(-s))).sum();
            t.powf(-spec.d_kappa / 2.0) * inner
        });
        out.push(per_t.into_iter().fold(0.0, f64::max));
    }
    Ok(out)
}

pub fn maximal(f: &SampledField, s: f64, x: &[f64]) -> Result<f64> {
    Ok(maximal_values(f, s, &[x.to_vec()])?[0])
}

/// ∫ (1+|u|²)^{-s} h_κ²(u) du = c_κ⁻¹ B(d_κ/2, s - d_κ/2) / (2^{d_κ/2} Γ(d_κ/2)), finite for s > d_κ/2.
pub fn weight_mass(spec: &ReflectionGroupSpec, s: f64) -> Result<f64> {
    let a = spec.d_kappa / 2.0;
    if s <= a {
        return Err(DunklError::Domain(format!("weight mass diverges for s = {s} ≤ d_κ/2 = {a}")));
    }
    let ln_beta = ln_gamma(a) + ln_gamma(s - a) - ln_gamma(s);
    Ok(spec.mehta_inv * (ln_beta - a * std::f64::consts::LN_2 - ln_gamma(a)).exp())
}

/// Numerical checks on the classical kernel K_s(x, t) = ∫_ℝ e^{ixξ}|ξ|^{2s}e^{-tξ²} dξ.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub s: f64,
    /// |K_s(x,t) - t^{-1/2-s}K_s(x/√t, 1)| / |K_s(x,t)| at (x, t) = (1, 2).
    pub homogeneity_residual: f64,
    pub radii: Vec<f64>,
    /// |x|² ∫|K_s(x,t)|² t^{2s-1} dt at each radius.
    pub scaled_norms: Vec<f64>,
    /// |x|⁴ ∫|∂_x K_s(x,t)|² t^{2s-1} dt at each radius.
    pub scaled_gradient_norms: Vec<f64>,
    /// max/min - 1 over the radii for the two columns above.
    pub norm_spread: f64,
    pub gradient_spread: f64,
}

struct KernelQuadrature {
    s: f64,
    u: Vec<f64>,
    w: Vec<f64>,
}

impl KernelQuadrature {
    /// Gauss–Jacobi rule on [-1, 1] carrying the factor ξ^{2s} once mapped to [0, Ξ].
    fn new(s: f64, n: usize) -> Result<Self> {
        let (u, w) = crate::quadrature::gauss_jacobi(n, 0.0, 2.0 * s)?;
        Ok(Self { s, u, w })
    }

    /// K_s(x, t) and ∂_x K_s(x, t), integrating over [0, Ξ] with Ξ = 9/√t.
    fn kernel(&self, x: f64, t: f64) -> (f64, f64) {
        let half = 4.5 / t.sqrt();
        let scale = half.powf(2.0 * self.s + 1.0);
        let mut k = 0.0;
        let mut dk = 0.0;
        for (&u, &w) in self.u.iter().zip(&self.w) {
            let xi = half * (1.0 + u);
            let e = w * scale * (-t * xi * xi).exp();
            k += e * (x * xi).cos();
            dk -= e * xi * (x * xi).sin();
        }
        (2.0 * k, 2.0 * dk)
    }
}

const KERNEL_NODES: usize = 600;

/// K_s(x, t) and ∂_x K_s(x, t) by direct quadrature (one dimension).
pub fn classical_kernel(s: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    check_s(s)?;
    check_t(t)?;
    Ok(KernelQuadrature::new(s, KERNEL_NODES)?.kernel(x, t))
}

pub fn kernel_checks(s: f64) -> Result<KernelReport> {
    check_s(s)?;
    let quad = KernelQuadrature::new(s, KERNEL_NODES)?;
    let (k12, _) = quad.kernel(1.0, 2.0);
    let (k_unit, _) = quad.kernel(1.0 / 2f64.sqrt(), 1.0);
    let predicted = 2f64.powf(-0.5 - s) * k_unit;
    let homogeneity_residual = (k12 - predicted).abs() / k12.abs();
    let radii: Vec<f64> = (0..8).map(|i| 2f64.powf(i as f64 * 3.0 / 7.0)).collect();
    let mut scaled_norms = Vec::new();
    let mut scaled_gradient_norms = Vec::new();
    for &x in &radii {
        // Oscillation x/√t must stay resolvable by the ξ-rule; below that t the
        // integrand is negligible.
        let lo = (x / 60.0).powi(2);
        let grid = LogGrid::new(lo, 1e6 * x * x, 30 * 10 + 1)?;
        let mut a = 0.0;
        let mut b = 0.0;
        for (&t, &w) in grid.t.iter().zip(&grid.w) {
            let (k, dk) = quad.kernel(x, t);
            let m = w * t.powf(2.0 * s - 1.0);
            a += m * k * k;
            b += m * dk * dk;
        }
        scaled_norms.push(x * x * a);
        scaled_gradient_norms.push(x.powi(4) * b);
    }
    let spread = |v: &[f64]| {
        let hi = v.iter().cloned().fold(f64::MIN, f64::max);
        let lo = v.iter().cloned().fold(f64::MAX, f64::min);
        hi / lo - 1.0
    };
    Ok(KernelReport {
        s,
        homogeneity_residual,
        norm_spread: spread(&scaled_norms),
        gradient_spread: spread(&scaled_gradient_norms),
        radii,
        scaled_norms,
        scaled_gradient_norms,
    })
}
