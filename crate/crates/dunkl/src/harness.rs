//! Multiplier experiments: applying 𝒯_m, L^p ratio sweeps over a function
//! battery, and the pointwise domination g_{k+1,δ}(𝒯_m f, x) ≤ C g*_{s,δ}(f, x).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dsl::{self, Expr};
use crate::dunkl_core::ScalarField;
use crate::error::{DunklError, Result};
use crate::hormander::{check_modified_hormander, default_t_grid, hormander_grid, MultiplierSpec, Verdict};
use crate::par::map_range;
use crate::quadrature::LogGrid;
use crate::root_system::{make_z2d, ReflectionGroupSpec};
use crate::semigroup::{g_function, g_integrand, g_star, g_star_integrands};
use crate::transform::{forward_checked, inverse, QuadratureGrid, RoslerRule, SampledField, Side, TAIL_TOLERANCE};

/// Environment variable that overrides the configured output directory.
pub const OUT_DIR_ENV: &str = "DUNKL_OUT_DIR";

/// Which hypotheses an experiment runs under.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// No structural assumption; domination needs κ = 0.
    #[default]
    General,
    /// m radial, any battery and p.
    RadialMultiplier,
    /// Any m, radial battery, p ≥ 2 only.
    RadialFunctions,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub d: usize,
    pub kappas: Vec<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: Option<usize>,
    pub l: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub plots: bool,
}

fn default_p_list() -> Vec<f64> {
    vec![2.0]
}

fn default_dilations() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_multiplier() -> String {
    "1".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_multiplier")]
    pub multiplier: String,
    /// DSL expressions; the entry "random" draws a seeded Gaussian-modulated polynomial.
    pub battery: Vec<String>,
    #[serde(default = "default_p_list")]
    pub p_list: Vec<f64>,
    #[serde(default = "default_dilations")]
    pub dilations: Vec<f64>,
    pub s: Option<f64>,
    pub delta: Option<f64>,
    /// Evaluation points for the domination check.
    pub points: Option<Vec<Vec<f64>>>,
    pub group: GroupConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

/// One resolved battery function.
#[derive(Clone, Debug)]
pub struct BatteryEntry {
    pub name: String,
    pub expr: Expr,
    pub field: ScalarField,
}

impl ExperimentConfig {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(src).map_err(|e| DunklError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| DunklError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&src)
    }

    pub fn spec(&self) -> Result<ReflectionGroupSpec> {
        if self.group.kappas.len() != self.group.d {
            return Err(DunklError::Config(format!(
                "group has d = {} but {} kappas",
                self.group.d,
                self.group.kappas.len()
            )));
        }
        make_z2d(self.group.d, &self.group.kappas).map_err(|e| DunklError::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<Arc<QuadratureGrid>> {
        let spec = self.spec()?;
        match (self.grid.n, self.grid.l) {
            (None, None) => QuadratureGrid::reference(&spec),
            _ => {
                let base = QuadratureGrid::reference(&spec)?;
                QuadratureGrid::new(&spec, self.grid.n.unwrap_or(base.n), self.grid.l.unwrap_or(base.l))
            }
        }
    }

    pub fn multiplier(&self) -> Result<MultiplierSpec> {
        MultiplierSpec::parse(&self.multiplier, self.group.d)
    }

    /// Output directory: the environment override, else the config, else `out`.
    pub fn output_dir(&self) -> PathBuf {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            return PathBuf::from(dir);
        }
        self.outputs.dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Battery with "random" entries replaced by seeded expressions.
    pub fn resolve_battery(&self) -> Result<Vec<BatteryEntry>> {
        let d = self.group.d;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let radial = self.mode == Mode::RadialFunctions;
        let width = (self.grid()?.l / 12.0).powi(2);
        self.battery
            .iter()
            .map(|src| {
                let text =
                    if src.trim() == "random" { random_function(d, radial, width, &mut rng) } else { src.clone() };
                let expr = dsl::parse(&text)?;
                let field = expr.to_field(d)?;
                Ok(BatteryEntry { name: text, expr, field })
            })
            .collect()
    }

    pub fn profile(&self) -> Result<(f64, f64, u32)> {
        let (s, delta) = match (self.s, self.delta) {
            (Some(s), Some(delta)) => (s, delta),
            _ => return Err(DunklError::Config("s and delta are required".into())),
        };
        let k = s / delta;
        if (k - k.round()).abs() > 1e-9 || k.round() < 1.0 {
            return Err(DunklError::Config(format!("s/δ = {k} must be a positive integer")));
        }
        Ok((s, delta, k.round() as u32))
    }

    /// Structural checks and the mode guards.
    pub fn validate(&self) -> Result<()> {
        let spec = self.spec()?;
        if !(1..=2).contains(&spec.d) {
            return Err(DunklError::Config("d must be 1 or 2".into()));
        }
        let cap = if spec.d == 1 { 256 } else { 64 };
        if let Some(n) = self.grid.n {
            if n < 8 || n > cap || n % 2 != 0 {
                return Err(DunklError::Config(format!("grid n = {n} must be even and in [8, {cap}]")));
            }
        }
        if let Some(l) = self.grid.l {
            if !(l > 0.0 && l.is_finite()) {
                return Err(DunklError::Config(format!("grid l = {l} must be positive")));
            }
        }
        if self.battery.is_empty() {
            return Err(DunklError::Config("battery is empty".into()));
        }
        if self.p_list.is_empty() || self.p_list.iter().any(|&p| !(p >= 1.0)) {
            return Err(DunklError::Config("p_list entries must be ≥ 1".into()));
        }
        if self.dilations.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(DunklError::Config("dilations must be positive".into()));
        }
        if let Some(s) = self.s {
            if !(s > 0.0) {
                return Err(DunklError::Config(format!("s = {s} must be positive")));
            }
        }
        if let Some(delta) = self.delta {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(DunklError::Config(format!("delta = {delta} must lie in (0, 1]")));
            }
        }
        if let Some(points) = &self.points {
            if points.iter().any(|x| x.len() != spec.d) {
                return Err(DunklError::Config("points must have length d".into()));
            }
        }
        let m = self.multiplier().map_err(|e| DunklError::Config(format!("multiplier: {e}")))?;
        let battery = self.resolve_battery().map_err(|e| DunklError::Config(format!("battery: {e}")))?;
        match self.mode {
            Mode::RadialFunctions => {
                if let Some(p) = self.p_list.iter().find(|&&p| p < 2.0) {
                    return Err(DunklError::Config(format!("radial-functions mode needs p ≥ 2, got {p}")));
                }
                if let Some(b) = battery.iter().find(|b| !b.field.is_radial) {
                    return Err(DunklError::Config(format!("radial-functions mode needs radial f, got {}", b.name)));
                }
            }
            Mode::RadialMultiplier => {
                if !m.is_radial() {
                    return Err(DunklError::Config(format!("radial-multiplier mode needs radial m, got {}", m.name)));
                }
            }
            Mode::General => {}
        }
        Ok(())
    }
}

/// A Gaussian-modulated polynomial whose Gaussian rate is scaled by `width`
/// = (L/12)², so f and ℱf both fit the box at every default dilation.
fn random_function(d: usize, radial: bool, width: f64, rng: &mut ChaCha8Rng) -> String {
    let b: f64 = rng.random_range(0.8..1.6) * width;
    let a0: f64 = rng.random_range(0.5..1.5);
    let mut coef = || rng.random_range(-1.0..1.0f64);
    let poly = if radial {
        format!("{a0:.4} + {:.4}*r^2", coef().abs())
    } else if d == 1 {
        format!("{a0:.4} + {:.4}*x1 + {:.4}*x1^2", coef(), coef())
    } else {
        format!("{a0:.4} + {:.4}*x1 + {:.4}*x2 + {:.4}*x1*x2", coef(), coef(), coef())
    };
    format!("({poly})*exp(-{b:.4}*r^2)")
}

/// 𝒯_m f = ℱ⁻¹(m ℱf). Both f and ℱf must be inside the box.
pub fn apply_multiplier(m: &MultiplierSpec, f: &SampledField) -> Result<SampledField> {
    if f.side != Side::Physical {
        return Err(DunklError::Domain("multipliers act on physical-side fields".into()));
    }
    let fh = forward_checked(f)?;
    let tail = fh.tail_fraction();
    if tail > TAIL_TOLERANCE {
        return Err(DunklError::Accuracy { what: "transform mass near the edge of the frequency box".into(), residual: tail });
    }
    Ok(inverse(&fh.mul_by(|xi| m.eval(xi))))
}

/// (∫|f|^p h_κ²)^{1/p} over the grid; p = ∞ gives the grid max.
pub fn lp_norm(f: &SampledField, p: f64) -> f64 {
    f.lp_norm(p)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub function: String,
    pub lambda: f64,
    pub p: f64,
    pub norm_tf: f64,
    pub norm_f: f64,
    pub ratio: f64,
}

/// Spread of the ratio over dilations for one (f, p).
#[derive(Clone, Debug, Serialize)]
pub struct DilationSpread {
    pub function: String,
    pub p: f64,
    pub min: f64,
    pub max: f64,
    /// (max - min) / min.
    pub variation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub multiplier: String,
    pub bound: f64,
    pub mode: Mode,
    pub rows: Vec<SweepRow>,
    pub dilation: Vec<DilationSpread>,
    /// max p = 2 ratio, at most ‖m‖_∞ by Plancherel.
    pub max_l2_ratio: Option<f64>,
}

/// ‖𝒯_m f_λ‖_p / ‖f_λ‖_p for every battery function, dilation f_λ(x) = f(λx) and p.
/// f_λ is sampled on the grid rescaled by 1/λ, so the nodes see the same shape at
/// every λ and only m(λ·) changes; for m homogeneous of degree 0 the ratio is then
/// λ-invariant up to rounding.
pub fn boundedness_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let m = cfg.multiplier()?;
    let battery = cfg.resolve_battery()?;
    let jobs: Vec<(usize, f64)> =
        (0..battery.len()).flat_map(|i| cfg.dilations.iter().map(move |&l| (i, l))).collect();
    let per_job: Vec<Result<Vec<SweepRow>>> = map_range(jobs.len(), |j| {
        let (i, lambda) = jobs[j];
        let f = grid.with_scale(grid.scale / lambda)?.sample(&battery[i].field.dilate(lambda));
        let tf = apply_multiplier(&m, &f)?;
        Ok(cfg
            .p_list
            .iter()
            .map(|&p| {
                let (a, b) = (lp_norm(&tf, p), lp_norm(&f, p));
                SweepRow { function: battery[i].name.clone(), lambda, p, norm_tf: a, norm_f: b, ratio: a / b }
            })
            .collect())
    });
    let mut rows = Vec::new();
    for r in per_job {
        rows.extend(r?);
    }
    let mut dilation = Vec::new();
    for b in &battery {
        for &p in &cfg.p_list {
            let ratios: Vec<f64> = rows.iter().filter(|r| r.function == b.name && r.p == p).map(|r| r.ratio).collect();
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let max = ratios.iter().copied().fold(0.0, f64::max);
            dilation.push(DilationSpread { function: b.name.clone(), p, min, max, variation: (max - min) / min });
        }
    }
    let max_l2_ratio = rows.iter().filter(|r| r.p == 2.0).map(|r| r.ratio).reduce(f64::max);
    Ok(SweepResult { multiplier: m.name.clone(), bound: m.bound, mode: cfg.mode, rows, dilation, max_l2_ratio })
}

/// One (x, t) sample of the pointwise domination quotient.
#[derive(Clone, Debug, Serialize)]
pub struct DominationSample {
    pub x: Vec<f64>,
    pub t: f64,
    /// |G_{k+1,δ}𝒯_m f(x, 2t)|² t^{2s/δ+d_κ/(2δ)}.
    pub numerator: f64,
    /// ∫|∂_t T_{t,δ}f(y)|² τ(x)(1+t^{-1/δ}|·|²)^{-s}(-y) h_κ²(y) dy.
    pub denominator: f64,
    pub quotient: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationResult {
    pub function: String,
    pub multiplier: String,
    pub s: f64,
    pub delta: f64,
    pub k: u32,
    pub n: usize,
    pub l: f64,
    pub samples: Vec<DominationSample>,
    /// max quotient over the samples.
    pub constant: f64,
    /// c_κ⁴ sup_t ∫(1+|x|²)^s|m̂|²h_κ², the constant the Cauchy–Schwarz step yields.
    pub bound: f64,
    pub hormander: Verdict,
    /// g_{k+1,δ}(𝒯_m f, x)/g*_{s,δ}(f, x) per point.
    pub integrated: Vec<f64>,
    /// 2^{k+1} √bound, the integrated form of the same constant.
    pub integrated_bound: f64,
}

/// Times at which the pointwise quotient is sampled: four per decade from 10⁻²
/// up to (L/4)^{2δ}. The time-t fields spread over |y| ~ t^{1/(2δ)}, and past a
/// quarter of the box the truncation, not the operator, sets the quotient.
pub fn domination_times(grid: &QuadratureGrid, delta: f64) -> Result<Vec<f64>> {
    let lo = 1e-2;
    let hi = (grid.l / 4.0).powf(2.0 * delta);
    if hi <= lo {
        return Err(DunklError::Domain(format!("box L = {} too small for the domination times", grid.l)));
    }
    let n = ((hi / lo).log10() * 4.0).ceil() as usize + 1;
    Ok(LogGrid::new(lo, hi, n)?.t)
}

fn quotient(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Measures the domination constant for one f. `sup_hormander` is
/// sup_t ∫(1+|x|²)^s|m̂|²h_κ² for m at this (s, δ).
#[allow(clippy::too_many_arguments)]
pub fn domination_constants(
    m: &MultiplierSpec,
    f: &BatteryEntry,
    s: f64,
    delta: f64,
    grid: &Arc<QuadratureGrid>,
    points: &[Vec<f64>],
    times: &[f64],
    sup_hormander: f64,
    hormander: Verdict,
) -> Result<DominationResult> {
    let k = (s / delta).round() as u32;
    if (s / delta - k as f64).abs() > 1e-9 || k == 0 {
        return Err(DunklError::Domain(format!("s/δ = {} must be a positive integer", s / delta)));
    }
    let spec = &grid.spec;
    let sampled = grid.sample(&f.field);
    let tf = apply_multiplier(m, &sampled)?;
    let order = (k + 1) as f64 * delta;
    let power = crate::hormander::scaling_exponent(spec, s, delta);
    let mut samples = Vec::new();
    let mut integrated = Vec::new();
    for x in points {
        let dens = g_star_integrands(s, delta, &sampled, x, times)?;
        let nums: Result<Vec<f64>> = times
            .iter()
            .map(|&t| Ok(g_integrand(order, delta, &tf, x, 2.0 * t)?.norm_sqr() * t.powf(power)))
            .collect();
        for ((&t, num), den) in times.iter().zip(nums?).zip(dens) {
            samples.push(DominationSample { x: x.clone(), t, numerator: num, denominator: den, quotient: quotient(num, den) });
        }
        integrated.push(quotient(g_function(order, delta, &tf, x)?, g_star(s, delta, &sampled, x)?));
    }
    let constant = samples.iter().map(|s| s.quotient).fold(0.0, f64::max);
    let bound = spec.mehta.powi(4) * sup_hormander;
    Ok(DominationResult {
        function: f.name.clone(),
        multiplier: m.name.clone(),
        s,
        delta,
        k,
        n: grid.n,
        l: grid.l,
        samples,
        constant,
        bound,
        hormander,
        integrated,
        integrated_bound: 2f64.powi(k as i32 + 1) * bound.sqrt(),
    })
}

/// Default evaluation points: |x| ∈ {0.5, 1, 1.5} along the diagonal.
pub fn default_points(d: usize) -> Vec<Vec<f64>> {
    [0.5, 1.0, 1.5].iter().map(|&r| vec![r / (d as f64).sqrt(); d]).collect()
}

/// Domination constants for every battery function. Radial-functions mode needs
/// radial f, radial-multiplier mode radial m, and general mode κ = 0, since the
/// translated weight is only controlled under one of these.
pub fn domination_check(cfg: &ExperimentConfig) -> Result<Vec<DominationResult>> {
    Ok(domination_runs(cfg, false)?.0)
}

/// Domination constants on the configured grid and on its refinement (2N, √2 L),
/// sampled at the same times and points.
pub fn domination_refinement(cfg: &ExperimentConfig) -> Result<(Vec<DominationResult>, Vec<DominationResult>)> {
    let (base, fine) = domination_runs(cfg, true)?;
    Ok((base, fine.unwrap_or_default()))
}

type DominationRuns = (Vec<DominationResult>, Option<Vec<DominationResult>>);

fn domination_runs(cfg: &ExperimentConfig, refine: bool) -> Result<DominationRuns> {
    cfg.validate()?;
    let (s, delta, _) = cfg.profile()?;
    let spec = cfg.spec()?;
    if cfg.mode == Mode::General && spec.kappas.iter().any(|&k| k != 0.0) {
        return Err(DunklError::Config(
            "domination with κ ≠ 0 needs radial-functions or radial-multiplier mode".into(),
        ));
    }
    let grid = cfg.grid()?;
    let m = cfg.multiplier()?;
    let report = check_modified_hormander(&m, s, delta, &default_t_grid(), &hormander_grid(&spec)?)?;
    let points = cfg.points.clone().unwrap_or_else(|| default_points(spec.d));
    let times = domination_times(&grid, delta)?;
    let battery = cfg.resolve_battery()?;
    let run = |g: &Arc<QuadratureGrid>| -> Result<Vec<DominationResult>> {
        battery
            .iter()
            .map(|f| domination_constants(&m, f, s, delta, g, &points, &times, report.sup, report.verdict))
            .collect()
    };
    let base = run(&grid)?;
    let fine = if refine { Some(run(&grid.refined()?)?) } else { None };
    Ok((base, fine))
}

/// min over pairs of τ(x)|f|²(y)·τ(x)|g|²(y) - |τ(x)(fg)(y)|² for radial f, g,
/// with the Rösler translation on `nodes` points per axis.
pub fn translation_product_slack(
    spec: &ReflectionGroupSpec,
    f: &dyn Fn(f64) -> Complex64,
    g: &dyn Fn(f64) -> Complex64,
    pairs: &[(Vec<f64>, Vec<f64>)],
    nodes: usize,
) -> Result<f64> {
    let rule = RoslerRule::new(spec, nodes)?;
    let fg = |r: f64| f(r) * g(r);
    let f2 = |r: f64| Complex64::new(f(r).norm_sqr(), 0.0);
    let g2 = |r: f64| Complex64::new(g(r).norm_sqr(), 0.0);
    let mut slack = f64::INFINITY;
    for (x, y) in pairs {
        let lhs = rule.translate(&fg, x, y).norm_sqr();
        let rhs = rule.translate(&f2, x, y).re * rule.translate(&g2, x, y).re;
        slack = slack.min(rhs - lhs);
    }
    Ok(slack)
}

/// `count` seeded (x, y) pairs with coordinates uniform in [-radius, radius].
pub fn random_pairs(d: usize, count: usize, radius: f64, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = (0..d).map(|_| rng.random_range(-radius..radius)).collect();
            let y = (0..d).map(|_| rng.random_range(-radius..radius)).collect();
            (x, y)
        })
        .collect()
}
