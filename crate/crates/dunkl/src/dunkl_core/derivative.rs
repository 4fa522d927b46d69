//! Dunkl derivatives of callable fields.
//!
//! 𝒟_j f(x) = ∂_j f(x) + Σ_{λ∈R} (κ(λ)/2)⟨λ,e_j⟩ (f(x) - f(σ_λ x))/⟨λ,x⟩.
//! Polynomial fields are differentiated exactly; everything else uses
//! Richardson-extrapolated central differences.

use num_complex::Complex64;

use super::field::{NumPoly, ScalarField};
use crate::error::{DunklError, Result};
use crate::root_system::ReflectionGroupSpec;

/// Below this scaled distance to a reflecting hyperplane the difference quotient
/// is replaced by its limit.
pub const HYPERPLANE_THRESHOLD: f64 = 1e-6;

/// Relative step for the innermost derivative; outer derivatives of a nested
/// expression see noisier data and use the larger steps that follow.
const STEPS: [f64; 4] = [1e-5, 2e-3, 1e-2, 3e-2];
pub const MAX_NUMERIC_ORDER: usize = STEPS.len();

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn shifted(x: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, b)| a + t * b).collect()
}

fn central<F>(g: &F, x: &[f64], dir: &[f64], h: f64) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let d = |h: f64| -> Result<Complex64> {
        Ok((g(&shifted(x, dir, h))? - g(&shifted(x, dir, -h))?) / (2.0 * h))
    };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn one_sided<F>(g: &F, x: &[f64], dir: &[f64], h: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let g0 = g(x)?;
    let fwd = (-3.0 * g0 + 4.0 * g(&shifted(x, dir, h))? - g(&shifted(x, dir, 2.0 * h))?) / (2.0 * h);
    let bwd = (3.0 * g0 - 4.0 * g(&shifted(x, dir, -h))? + g(&shifted(x, dir, -2.0 * h))?) / (2.0 * h);
    Ok((fwd, bwd))
}

/// 𝒟_j g at x for a fallible callable g, with finite-difference step index `level`.
fn dunkl_numeric<F>(spec: &ReflectionGroupSpec, g: &F, j: usize, x: &[f64], level: usize) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let scale = 1.0 + norm(x);
    let h = STEPS[level] * scale;
    let mut e = vec![0.0; spec.d];
    e[j] = 1.0;
    let mut out = central(g, x, &e, h)?;
    let fx = g(x)?;
    for root in spec.roots() {
        let kappa = spec.kappa(&root);
        if kappa == 0.0 {
            continue;
        }
        let lam = root.vector(spec.d);
        let lam_j = lam[j];
        if lam_j == 0.0 {
            continue;
        }
        let lx: f64 = lam.iter().zip(x).map(|(a, b)| a * b).sum();
        let quotient = if lx.abs() < HYPERPLANE_THRESHOLD * scale {
            let (fwd, bwd) = one_sided(g, x, &lam, h)?;
            if (fwd - bwd).norm() > 1e-3 * (1.0 + fwd.norm()) {
                return Err(DunklError::Singular(format!(
                    "field is not differentiable across the hyperplane of root {root:?} at {x:?}"
                )));
            }
            central(g, x, &lam, h)?
        } else {
            (fx - g(&spec.reflect(&root, x))?) / lx
        };
        out += 0.5 * kappa * lam_j * quotient;
    }
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(DunklError::Singular(format!("non-finite Dunkl derivative at {x:?}")));
    }
    Ok(out)
}

fn nested(spec: &ReflectionGroupSpec, f: &ScalarField, axes: &[usize], x: &[f64]) -> Result<Complex64> {
    match axes.split_first() {
        None => Ok(f.eval(x)),
        Some((&j, rest)) => {
            let inner = |y: &[f64]| nested(spec, f, rest, y);
            dunkl_numeric(spec, &inner, j, x, rest.len())
        }
    }
}

fn axes_of(alpha: &[u32]) -> Vec<usize> {
    alpha.iter().enumerate().flat_map(|(j, &a)| std::iter::repeat_n(j, a as usize)).collect()
}

pub fn dunkl_derivative(spec: &ReflectionGroupSpec, f: &ScalarField, j: usize, x: &[f64]) -> Result<Complex64> {
    let mut alpha = vec![0; spec.d];
    alpha[j] = 1;
    dunkl_derivative_multi(spec, f, &alpha, x)
}

/// 𝒟^α f(x) = Π_j 𝒟_j^{α_j} f(x).
pub fn dunkl_derivative_multi(
    spec: &ReflectionGroupSpec,
    f: &ScalarField,
    alpha: &[u32],
    x: &[f64],
) -> Result<Complex64> {
    if alpha.len() != spec.d || x.len() != spec.d {
        return Err(DunklError::Domain("multi-index and point must have length d".into()));
    }
    if let Some(p) = f.poly() {
        let mut q: NumPoly = p.clone();
        for j in axes_of(alpha) {
            q = q.dunkl_derivative(spec, j);
        }
        return Ok(q.eval(x));
    }
    let axes = axes_of(alpha);
    if axes.len() > MAX_NUMERIC_ORDER {
        return Err(DunklError::MaxOrder { got: axes.len(), max: MAX_NUMERIC_ORDER });
    }
    nested(spec, f, &axes, x)
}

/// Δ_κ f(x) = Σ_j 𝒟_j² f(x).
pub fn dunkl_laplacian(spec: &ReflectionGroupSpec, f: &ScalarField, x: &[f64]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..spec.d {
        let mut alpha = vec![0; spec.d];
        alpha[j] = 2;
        acc += dunkl_derivative_multi(spec, f, &alpha, x)?;
    }
    Ok(acc)
}

/// Classical ∂^α by the same nested difference scheme (κ ignored).
pub fn classical_derivative_multi(f: &ScalarField, alpha: &[u32], x: &[f64]) -> Result<Complex64> {
    let flat = crate::root_system::make_z2d(alpha.len(), &vec![0.0; alpha.len()])?;
    dunkl_derivative_multi(&flat, f, alpha, x)
}
