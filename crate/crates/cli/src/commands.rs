use std::path::{Path, PathBuf};
use std::sync::Arc;

use dunkl::dsl;
use dunkl::dunkl_core::kernel::{dunkl_kernel_real, try_dunkl_kernel};
use dunkl::harness::{
    boundedness_sweep, default_points, domination_check, domination_refinement, DominationResult, ExperimentConfig,
};
use dunkl::hormander::{check_modified_hormander, default_t_grid, hormander_grid, MultiplierSpec};
use dunkl::leibniz::{
    leibniz_expand as expand, radial_leibniz_expand, verify_alpha, verify_battery, VerifyReport, DEFAULT_MAX_ORDER,
};
use dunkl::poly::Rational;
use dunkl::quadrature::LogGrid;
use dunkl::semigroup::{
    g_function, g_function_l2_constant, g_function_l2_norm, g_star_values, maximal_values,
};
use dunkl::transform::{forward_checked, inverse, QuadratureGrid, SampledField, Side};
use dunkl::{Complex64, ReflectionGroupSpec};
use serde::Serialize;
use serde_json::json;

use crate::output::*;
use crate::{
    ConfigArgs, DominationArgs, GfuncArgs, GridArgs, HormanderArgs, KernelArgs, LeibnizExpandArgs, LeibnizVerifyArgs,
    TransformArgs,
};

/// Relative gap between the sampled L² ratio of g and its Plancherel value.
const G_L2_TOLERANCE: f64 = 1e-3;
/// Slack on the Plancherel bound ‖𝒯_m f‖₂ ≤ ‖m‖_∞‖f‖₂.
const PLANCHEREL_SLACK: f64 = 1e-6;
/// Hörmander t-grid for two dimensions, where each time costs seconds.
const T_NODES_2D: usize = 13;

fn make_grid(spec: &ReflectionGroupSpec, g: &GridArgs) -> CliResult<Arc<QuadratureGrid>> {
    let base = QuadratureGrid::reference(spec)?;
    Ok(match (g.n, g.l) {
        (None, None) => base,
        (n, l) => QuadratureGrid::new(spec, n.unwrap_or(base.n), l.unwrap_or(base.l))?,
    })
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn read_on_grid(path: &Path, grid: &Arc<QuadratureGrid>, side: Side) -> CliResult<SampledField> {
    let d = grid.d();
    let (header, rows) = read_csv(path)?;
    if header.len() != d + 2 {
        return Err(CliError::Usage(format!("{}: expected {} columns (coordinates…, re, im)", path.display(), d + 2)));
    }
    if rows.len() != grid.len() {
        return Err(CliError::Usage(format!(
            "{}: {} rows, but the grid has {} nodes",
            path.display(),
            rows.len(),
            grid.len()
        )));
    }
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let node = grid.point_on(side, i);
        if node.iter().zip(row).any(|(a, b)| (a - b).abs() > 1e-9 * (1.0 + a.abs())) {
            return Err(CliError::Usage(format!(
                "{} row {}: ({:?}) is not grid node {node:?}; samples must sit on the grid nodes",
                path.display(),
                i + 1,
                &row[..d]
            )));
        }
        values.push(Complex64::new(row[d], row[d + 1]));
    }
    Ok(grid.from_values(values, side)?)
}

fn field_rows(f: &SampledField) -> Vec<Vec<String>> {
    (0..f.values.len())
        .map(|i| {
            let v = f.values[i];
            f.point(i).into_iter().map(num).chain([num(v.re), num(v.im)]).collect()
        })
        .collect()
}

pub fn transform(a: &TransformArgs) -> CliResult<()> {
    let spec = parse_group(&a.group.group)?;
    let grid = make_grid(&spec, &a.grid)?;
    let side = if a.inverse { Side::Frequency } else { Side::Physical };
    let input = match (&a.field, &a.input) {
        (Some(src), _) => {
            let f = dsl::parse(src)?.to_field(spec.d)?;
            match side {
                Side::Physical => grid.sample(&f),
                Side::Frequency => grid.sample_frequency(&f),
            }
        }
        (None, Some(path)) => read_on_grid(path, &grid, side)?,
        (None, None) => return Err(CliError::Usage("give --input or --field".into())),
    };
    let output = match side {
        Side::Physical => forward_checked(&input)?,
        Side::Frequency => inverse(&input),
    };
    let path = match &a.out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Failed(format!("{}: {e}", dir.display())))?;
            }
            p.clone()
        }
        None => out_dir(None)?.join("transform.csv"),
    };
    write_csv(&path, &coord_header(spec.d, &["re", "im"]), &field_rows(&output))?;
    let (n_in, n_out) = (input.l2_norm(), output.l2_norm());
    let defect = (n_out - n_in).abs() / n_in;
    let summary = json!({
        "direction": if a.inverse { "inverse" } else { "forward" },
        "group": spec.config(),
        "n": grid.n,
        "l": grid.l,
        "l2_in": n_in,
        "l2_out": n_out,
        "plancherel_defect": defect,
        "tolerance": a.tolerance,
        "passed": defect <= a.tolerance,
    });
    let json_path = with_extension(&path, "json");
    write_json(&json_path, &summary)?;
    println!("wrote {} ({} nodes); relative Plancherel defect {defect:.3e}", path.display(), grid.len());
    if !(defect <= a.tolerance) {
        return Err(CliError::Failed(format!(
            "Plancherel defect {defect:.3e} exceeds {:.1e}; report at {}",
            a.tolerance,
            json_path.display()
        )));
    }
    Ok(())
}

pub fn gfunc(a: &GfuncArgs) -> CliResult<()> {
    let spec = parse_group(&a.group.group)?;
    let grid = make_grid(&spec, &a.grid)?;
    let f = grid.sample(&dsl::parse(&a.field)?.to_field(spec.d)?);
    let xs = match &a.points {
        Some(p) => parse_points(p, spec.d)?,
        None => {
            let mut xs = vec![vec![0.0; spec.d]];
            xs.extend(default_points(spec.d));
            xs
        }
    };
    let g: Vec<f64> = xs.iter().map(|x| g_function(a.s, a.delta, &f, x)).collect::<Result<_, _>>()?;
    let g_star = g_star_values(a.s, a.delta, &f, &xs)?;
    let maximal = if a.no_maximal { None } else { Some(maximal_values(&f, a.maximal_order.unwrap_or(a.s), &xs)?) };
    let dir = out_dir(None)?;
    let path = dir.join("gfunc.csv");
    let rows: Vec<Vec<String>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r: Vec<String> = x.iter().copied().map(num).collect();
            r.push(num(g[i]));
            r.push(num(g_star[i]));
            r.push(maximal.as_ref().map_or(String::new(), |m| num(m[i])));
            r
        })
        .collect();
    write_csv(&path, &coord_header(spec.d, &["g", "g_star", "maximal"]), &rows)?;
    let ratio = g_function_l2_norm(a.s, a.delta, &f)? / f.l2_norm();
    let expected = g_function_l2_constant(a.s, a.delta);
    let gap = (ratio - expected).abs() / expected;
    let summary = json!({
        "field": a.field,
        "group": spec.config(),
        "s": a.s,
        "delta": a.delta,
        "n": grid.n,
        "l": grid.l,
        "l2_ratio": ratio,
        "l2_constant": expected,
        "relative_gap": gap,
        "passed": gap <= G_L2_TOLERANCE,
    });
    let json_path = dir.join("gfunc.json");
    write_json(&json_path, &summary)?;
    println!("wrote {}; ‖g‖₂/‖f‖₂ = {ratio:.6} (Plancherel value {expected:.6})", path.display());
    if !(gap <= G_L2_TOLERANCE) {
        return Err(CliError::Failed(format!("L² ratio off by {gap:.3e}; report at {}", json_path.display())));
    }
    Ok(())
}

pub fn hormander_check(a: &HormanderArgs) -> CliResult<()> {
    let spec = parse_group(&a.group.group)?;
    let src = if a.m.trim() == "one" { "1" } else { a.m.as_str() };
    let m = MultiplierSpec::parse(src, spec.d)?;
    let s = a.s.unwrap_or((spec.d_kappa / 2.0).floor() + 1.0);
    let grid = if a.grid.n.is_none() && a.grid.l.is_none() { hormander_grid(&spec)? } else { make_grid(&spec, &a.grid)? };
    let t_grid = match (a.t_nodes, spec.d) {
        (Some(n), _) => LogGrid::new(1e-3, 1e3, n)?.t,
        (None, 1) => default_t_grid(),
        (None, _) => LogGrid::new(1e-3, 1e3, T_NODES_2D)?.t,
    };
    let report = check_modified_hormander(&m, s, a.delta, &t_grid, &grid)?;
    let dir = out_dir(None)?;
    let path = dir.join("hormander.csv");
    let rows: Vec<Vec<String>> = (0..report.t_grid.len())
        .map(|i| {
            vec![
                num(report.t_grid[i]),
                num(report.values[i]),
                num(report.scaled_values[i]),
                num(report.spectral_values[i]),
            ]
        })
        .collect();
    let header: Vec<String> = ["t", "value", "scaled_value", "spectral_value"].map(String::from).to_vec();
    write_csv(&path, &header, &rows)?;
    let json_path = dir.join("hormander.json");
    write_json(&json_path, &report)?;
    if a.plot {
        let series = |label: &str, v: &[f64]| Series {
            label: label.into(),
            points: report.t_grid.iter().copied().zip(v.iter().copied()).collect(),
        };
        line_plot(
            &dir.join("hormander.svg"),
            &format!("weighted norms for m = {}", report.multiplier),
            "t",
            &[series("direct", &report.values), series("rescaled", &report.scaled_values)],
            true,
        )?;
    }
    println!("multiplier {}  s = {s}  delta = {}", report.multiplier, a.delta);
    println!("sup constant {:.6e}  (refined {:.6e}, change {:.2e})", report.sup, report.refined_sup, report.refinement_change);
    println!(
        "route residuals: rescaled {:.2e}, spectral {:.2e}",
        report.equivalence_residual, report.spectral_residual
    );
    println!("verdict: {}", report.verdict);
    if !report.verdict.passed() {
        return Err(CliError::Failed(format!("{}; report at {}", report.note, json_path.display())));
    }
    Ok(())
}

fn rational_kappas(spec: &ReflectionGroupSpec) -> CliResult<Vec<Rational>> {
    spec.kappas
        .iter()
        .map(|&k| Rational::from_float(k).ok_or_else(|| CliError::Usage(format!("κ = {k} is not finite"))))
        .collect()
}

pub fn leibniz_expand(a: &LeibnizExpandArgs) -> CliResult<()> {
    let d = a.alpha.len();
    if !(1..=2).contains(&d) {
        return Err(CliError::Usage(format!("alpha must have 1 or 2 entries, got {d}")));
    }
    if a.radial {
        if a.group.is_some() {
            return Err(CliError::Usage("--radial prints the symbolic form; drop --group".into()));
        }
        let terms = radial_leibniz_expand(d, &a.alpha, DEFAULT_MAX_ORDER)?;
        println!("D^({}) (m g), m and g radial: {} terms", join(&a.alpha), terms.len());
        for t in terms {
            println!("  {t}");
        }
        return Ok(());
    }
    let mut exp = expand(d, &a.alpha, DEFAULT_MAX_ORDER)?;
    if let Some(g) = &a.group {
        let spec = parse_group(g)?;
        if spec.d != d {
            return Err(CliError::Usage(format!("group has d = {} but alpha has {d} entries", spec.d)));
        }
        exp = exp.specialize(&rational_kappas(&spec)?);
    }
    print!("{exp}");
    Ok(())
}

fn join(a: &[u32]) -> String {
    a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn leibniz_verify(a: &LeibnizVerifyArgs) -> CliResult<()> {
    let report = match &a.alpha {
        Some(alpha) => {
            if alpha.len() != a.d {
                return Err(CliError::Usage(format!("alpha has {} entries but d = {}", alpha.len(), a.d)));
            }
            let mut r = VerifyReport::default();
            verify_alpha(a.d, alpha, DEFAULT_MAX_ORDER, &mut r)?;
            r
        }
        None => verify_battery(a.d, a.max_order)?,
    };
    println!("{} exact comparisons, {} mismatches", report.checked, report.failures.len());
    for f in &report.failures {
        println!("  {f}");
    }
    if !report.passed() {
        return Err(CliError::Failed(format!("{} expansions differ from direct differentiation", report.failures.len())));
    }
    Ok(())
}

fn load_config(a: &ConfigArgs, seed: Option<u64>) -> CliResult<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn config_out_dir(cfg: &ExperimentConfig) -> CliResult<PathBuf> {
    out_dir(Some(cfg.output_dir()))
}

pub fn multiplier_sweep(a: &ConfigArgs, seed: Option<u64>) -> CliResult<()> {
    let cfg = load_config(a, seed)?;
    let result = boundedness_sweep(&cfg)?;
    let dir = config_out_dir(&cfg)?;
    let header: Vec<String> = ["function", "lambda", "p", "norm_tf", "norm_f", "ratio"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|r| vec![r.function.clone(), num(r.lambda), num(r.p), num(r.norm_tf), num(r.norm_f), num(r.ratio)])
        .collect();
    let path = dir.join("sweep.csv");
    write_csv(&path, &header, &rows)?;
    let spread_header: Vec<String> = ["function", "p", "min", "max", "variation"].map(String::from).to_vec();
    let spread: Vec<Vec<String>> = result
        .dilation
        .iter()
        .map(|s| vec![s.function.clone(), num(s.p), num(s.min), num(s.max), num(s.variation)])
        .collect();
    write_csv(&dir.join("dilation.csv"), &spread_header, &spread)?;
    let finite = result.rows.iter().all(|r| r.ratio.is_finite());
    let plancherel = result.max_l2_ratio.is_none_or(|r| r <= result.bound * (1.0 + PLANCHEREL_SLACK));
    let summary = json!({
        "seed": cfg.seed,
        "multiplier": result.multiplier,
        "bound": result.bound,
        "mode": result.mode,
        "max_l2_ratio": result.max_l2_ratio,
        "dilation": result.dilation,
        "verdicts": { "finite_ratios": finite, "plancherel_bound": plancherel },
        "note": "ratios bounded on this battery are evidence only; growth under refinement would falsify boundedness",
    });
    let json_path = dir.join("summary.json");
    write_json(&json_path, &summary)?;
    if cfg.outputs.plots {
        let mut series = Vec::new();
        for s in &result.dilation {
            let points = result
                .rows
                .iter()
                .filter(|r| r.function == s.function && r.p == s.p)
                .map(|r| (r.lambda, r.ratio))
                .collect();
            series.push(Series { label: format!("p = {}: {}", s.p, s.function), points });
        }
        line_plot(&dir.join("sweep.svg"), &format!("L^p ratios for m = {}", result.multiplier), "lambda", &series, true)?;
    }
    println!("wrote {} ({} rows)", path.display(), rows.len());
    if let Some(r) = result.max_l2_ratio {
        println!("max L² ratio {r:.6} against ‖m‖∞ = {:.6}", result.bound);
    }
    let worst = result.dilation.iter().map(|s| s.variation).fold(0.0, f64::max);
    println!("largest spread over dilations {worst:.3e}");
    println!("evidence only: bounded ratios on a finite battery do not prove L^p boundedness");
    if !finite || !plancherel {
        return Err(CliError::Failed(format!("sweep assertions failed; report at {}", json_path.display())));
    }
    Ok(())
}

#[derive(Serialize)]
struct DominationSummary<'a> {
    function: &'a str,
    constant: f64,
    bound: f64,
    integrated: &'a [f64],
    integrated_bound: f64,
    hormander: String,
    refined_constant: Option<f64>,
    refinement_change: Option<f64>,
    passed: bool,
}

fn domination_rows(d: usize, grid: &str, results: &[DominationResult], rows: &mut Vec<Vec<String>>) {
    for r in results {
        for s in &r.samples {
            let mut row = vec![grid.to_string(), r.function.clone()];
            row.extend(s.x.iter().take(d).copied().map(num));
            row.extend([num(s.t), num(s.numerator), num(s.denominator), num(s.quotient)]);
            rows.push(row);
        }
    }
}

pub fn domination(a: &DominationArgs, seed: Option<u64>) -> CliResult<()> {
    let cfg = load_config(&a.config, seed)?;
    let d = cfg.group.d;
    let (base, fine) = if a.refine { domination_refinement(&cfg)? } else { (domination_check(&cfg)?, Vec::new()) };
    let dir = config_out_dir(&cfg)?;
    let mut header: Vec<String> = vec!["grid".into(), "function".into()];
    header.extend(coord_header(d, &["t", "numerator", "denominator", "quotient"]));
    let mut rows = Vec::new();
    domination_rows(d, "base", &base, &mut rows);
    domination_rows(d, "refined", &fine, &mut rows);
    let path = dir.join("domination.csv");
    write_csv(&path, &header, &rows)?;
    let mut summaries = Vec::new();
    let mut all_passed = true;
    for (i, r) in base.iter().enumerate() {
        let refined = fine.get(i).map(|f| f.constant);
        let change = refined.map(|c| (c - r.constant).abs() / r.constant);
        let passed = !r.hormander.passed()
            || (r.constant.is_finite()
                && r.constant <= r.bound
                && r.integrated.iter().all(|&q| q <= r.integrated_bound)
                && change.is_none_or(|c| c <= a.refine_tolerance));
        all_passed &= passed;
        println!(
            "{}: constant {:.4e} (bound {:.4e}){}  hypothesis {}",
            r.function,
            r.constant,
            r.bound,
            change.map_or(String::new(), |c| format!(", refinement change {c:.2e}")),
            r.hormander
        );
        summaries.push(DominationSummary {
            function: &r.function,
            constant: r.constant,
            bound: r.bound,
            integrated: &r.integrated,
            integrated_bound: r.integrated_bound,
            hormander: r.hormander.to_string(),
            refined_constant: refined,
            refinement_change: change,
            passed,
        });
    }
    let json_path = dir.join("summary.json");
    write_json(&json_path, &json!({ "seed": cfg.seed, "multiplier": cfg.multiplier, "results": summaries }))?;
    println!("wrote {}", path.display());
    if !all_passed {
        return Err(CliError::Failed(format!("domination assertions failed; report at {}", json_path.display())));
    }
    Ok(())
}

pub fn kernel_eval(a: &KernelArgs) -> CliResult<()> {
    let spec = parse_group(&a.group.group)?;
    if a.x.len() != spec.d || a.y.len() != spec.d {
        return Err(CliError::Usage(format!("x and y need {} coordinates", spec.d)));
    }
    let value = if a.real {
        Complex64::new(dunkl_kernel_real(&spec, &a.x, &a.y), 0.0)
    } else {
        try_dunkl_kernel(&spec, &a.x, &a.y)?
    };
    let kind = if a.real { "E(x, y)" } else { "E(ix, y)" };
    println!("{}", json!({ "kernel": kind, "x": a.x, "y": a.y, "re": value.re, "im": value.im }));
    Ok(())
}
