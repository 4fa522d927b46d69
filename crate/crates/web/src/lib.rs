//! Browser bindings: kernel curves, one-dimensional transforms and multiplier ratios.

use dunkl::dsl;
use dunkl::dunkl_core::rank_one_imag;
use dunkl::harness::apply_multiplier;
use dunkl::hormander::MultiplierSpec;
use dunkl::transform::{forward_checked, QuadratureGrid};
use dunkl::ReflectionGroupSpec;
use wasm_bindgen::prelude::*;

fn js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// E_κ(ix, y) for x on [-x_max, x_max]; returns interleaved (x, re, im) triples.
#[wasm_bindgen]
pub fn kernel_curve(kappa: f64, y: f64, x_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    if !(kappa >= 0.0) || count < 2 || !(x_max > 0.0) {
        return Err(js("need κ ≥ 0, x_max > 0 and at least two points"));
    }
    let mut out = Vec::with_capacity(3 * count);
    for i in 0..count {
        let x = -x_max + 2.0 * x_max * i as f64 / (count - 1) as f64;
        let v = rank_one_imag(kappa, x * y);
        out.extend([x, v.re, v.im]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub struct Transformed {
    nodes: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    defect: f64,
}

#[wasm_bindgen]
impl Transformed {
    #[wasm_bindgen(getter)]
    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn re(&self) -> Vec<f64> {
        self.re.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn im(&self) -> Vec<f64> {
        self.im.clone()
    }

    /// |‖ℱf‖₂ - ‖f‖₂| / ‖f‖₂.
    #[wasm_bindgen(getter)]
    pub fn defect(&self) -> f64 {
        self.defect
    }
}

/// Rank-one Dunkl transform of an expression in x1 (or r) on an N-node grid over [-L, L].
#[wasm_bindgen]
pub fn transform_1d(kappa: f64, expr: &str, n: usize, l: f64) -> Result<Transformed, JsError> {
    let spec = ReflectionGroupSpec::rank_one(kappa).map_err(js)?;
    let grid = QuadratureGrid::new(&spec, n, l).map_err(js)?;
    let f = grid.sample(&dsl::parse(expr).map_err(js)?.to_field(1).map_err(js)?);
    let fh = forward_checked(&f).map_err(js)?;
    let defect = (fh.l2_norm() - f.l2_norm()).abs() / f.l2_norm();
    Ok(Transformed {
        nodes: (0..grid.len()).map(|i| fh.point(i)[0]).collect(),
        re: fh.values.iter().map(|v| v.re).collect(),
        im: fh.values.iter().map(|v| v.im).collect(),
        defect,
    })
}

/// ‖𝒯_m f‖_p / ‖f‖_p on the rank-one reference grid.
#[wasm_bindgen]
pub fn multiplier_ratio(kappa: f64, m: &str, f: &str, p: f64) -> Result<f64, JsError> {
    if !(p >= 1.0) {
        return Err(js("p must be at least 1"));
    }
    let spec = ReflectionGroupSpec::rank_one(kappa).map_err(js)?;
    let grid = QuadratureGrid::reference(&spec).map_err(js)?;
    let m = MultiplierSpec::parse(m, 1).map_err(js)?;
    let f = grid.sample(&dsl::parse(f).map_err(js)?.to_field(1).map_err(js)?);
    let tf = apply_multiplier(&m, &f).map_err(js)?;
    Ok(tf.lp_norm(p) / f.lp_norm(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_kernel_is_a_plane_wave() {
        let v = kernel_curve(0.0, 1.3, 2.0, 5).unwrap();
        for c in v.chunks(3) {
            assert!((c[1] - (1.3 * c[0]).cos()).abs() < 1e-12);
            assert!((c[2] - (1.3 * c[0]).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_transform_is_isometric() {
        let t = transform_1d(0.5, "exp(-r^2/2)", 128, 12.0).unwrap();
        assert!(t.defect < 1e-6);
        assert_eq!(t.nodes.len(), 128);
    }

    #[test]
    fn identity_multiplier_ratio_is_one() {
        let r = multiplier_ratio(0.5, "1", "exp(-x1^2)", 4.0).unwrap();
        assert!((r - 1.0).abs() < 1e-6);
    }
}
