use std::fs;
use std::path::{Path, PathBuf};

use dunkl::harness::OUT_DIR_ENV;
use dunkl::root_system::GroupConfig;
use dunkl::{DunklError, ReflectionGroupSpec};
use plotters::prelude::*;
use serde::Serialize;

/// Usage errors exit with 2, failed assertions and numerical failures with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl From<DunklError> for CliError {
    fn from(e: DunklError) -> Self {
        match e {
            DunklError::Domain(_) | DunklError::Config(_) | DunklError::Parse { .. } | DunklError::MaxOrder { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Failed(format!("{}: {e}", path.display()))
}

/// The environment override, else the configured directory, else `out`.
pub fn out_dir(configured: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).or(configured).unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    Ok(dir)
}

/// Reads a group config from a file, or from inline keys such as "d = 2, kappas = [0.5, 1]".
pub fn parse_group(arg: &str) -> CliResult<ReflectionGroupSpec> {
    let path = Path::new(arg);
    let cfg: GroupConfig = if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("group config {arg}: {e}")))?
    } else {
        #[derive(serde::Deserialize)]
        struct Wrapped {
            group: GroupConfig,
        }
        let w: Wrapped = toml::from_str(&format!("group = {{ {arg} }}"))
            .map_err(|e| CliError::Usage(format!("group {arg:?} is neither a file nor inline keys: {e}")))?;
        w.group
    };
    Ok(ReflectionGroupSpec::from_config(&cfg)?)
}

/// Parses "a,b;c,d" into points of dimension d.
pub fn parse_points(src: &str, d: usize) -> CliResult<Vec<Vec<f64>>> {
    src.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let x: Result<Vec<f64>, _> = p.split(',').map(|v| v.trim().parse::<f64>()).collect();
            match x {
                Ok(x) if x.len() == d => Ok(x),
                Ok(x) => Err(CliError::Usage(format!("point {p:?} has {} coordinates, expected {d}", x.len()))),
                Err(e) => Err(CliError::Usage(format!("point {p:?}: {e}"))),
            }
        })
        .collect()
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Column names x1, …, xd followed by `rest`.
pub fn coord_header(d: usize, rest: &[&str]) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).chain(rest.iter().map(|s| s.to_string())).collect()
}

pub fn read_csv(path: &Path) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let header = r.headers().map_err(|e| io_err(path, e))?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let row: Result<Vec<f64>, _> = rec.iter().map(|v| v.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| CliError::Usage(format!("{} row {}: {e}", path.display(), i + 1)))?);
    }
    Ok((header, rows))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// Shortest round-trip form; exponent notation outside [1e-4, 1e15).
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Static SVG line plot with logarithmic axes where requested.
pub fn line_plot(path: &Path, title: &str, x_label: &str, series: &[Series], log_x: bool) -> CliResult<()> {
    let pts = || series.iter().flat_map(|s| s.points.iter().copied()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1) = pts().fold((f64::MAX, f64::MIN), |(a, b), (x, _)| (a.min(x), b.max(x)));
    let (mut y0, mut y1) = pts().fold((f64::MAX, f64::MIN), |(a, b), (_, y)| (a.min(y), b.max(y)));
    if x0 > x1 {
        return Ok(());
    }
    if x0 == x1 {
        x0 *= 0.5;
        x1 = x1 * 2.0 + 1.0;
    }
    let pad = ((y1 - y0) * 0.05).max(1e-12 * y1.abs().max(1.0));
    y0 -= pad;
    y1 += pad;
    let err = |e: &dyn std::fmt::Display| io_err(path, e);
    let root = SVGBackend::new(path, (720, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(&e))?;
    let mut builder = ChartBuilder::on(&root);
    builder.caption(title, ("sans-serif", 18)).margin(12).x_label_area_size(36).y_label_area_size(72);
    let palette = [&BLUE, &RED, &GREEN, &MAGENTA, &CYAN, &BLACK];
    macro_rules! draw {
        ($chart:expr) => {{
            let mut chart = $chart;
            chart.configure_mesh().x_desc(x_label).draw().map_err(|e| err(&e))?;
            for (i, s) in series.iter().enumerate() {
                let color = palette[i % palette.len()];
                chart
                    .draw_series(LineSeries::new(s.points.iter().copied(), color))
                    .map_err(|e| err(&e))?
                    .label(s.label.clone())
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color));
            }
            chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw().map_err(|e| err(&e))?;
        }};
    }
    if log_x {
        draw!(builder.build_cartesian_2d((x0..x1).log_scale(), y0..y1).map_err(|e| err(&e))?);
    } else {
        draw!(builder.build_cartesian_2d(x0..x1, y0..y1).map_err(|e| err(&e))?);
    }
    root.present().map_err(|e| err(&e))
}
