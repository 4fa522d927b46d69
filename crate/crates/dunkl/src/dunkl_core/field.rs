use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

use super::kernel::{dunkl_kernel, dunkl_kernel_real};
use crate::error::{DunklError, Result};
use crate::root_system::ReflectionGroupSpec;

pub type FieldFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;
pub type ProfileFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Polynomial with complex coefficients, Σ c_α x^α.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NumPoly {
    pub terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumPoly {
    pub fn new(terms: Vec<(Vec<u32>, Complex64)>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| c * a.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Exact 𝒟_j. For λ = ±√2 e_a the difference quotient (p - p∘σ_λ)/⟨λ,x⟩ weighted by
    /// ⟨λ,e_j⟩ is nonzero only for a = j, and maps x^α to (1 - (-1)^{α_j}) x^{α-e_j}.
    pub fn dunkl_derivative(&self, spec: &ReflectionGroupSpec, j: usize) -> NumPoly {
        let mut out: Vec<(Vec<u32>, Complex64)> = Vec::new();
        for (a, c) in &self.terms {
            let e = a.get(j).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut reflection = 0.0;
            for root in spec.roots() {
                if root.axis != j {
                    continue;
                }
                let flip = if e % 2 == 1 { 2.0 } else { 0.0 };
                reflection += 0.5 * spec.kappa(&root) * flip;
            }
            let mut b = a.clone();
            b[j] -= 1;
            out.push((b, c * (e as f64 + reflection)));
        }
        NumPoly { terms: out }
    }
}

/// Complex-valued function on ℝ^d with structural flags.
#[derive(Clone)]
pub struct ScalarField {
    eval: FieldFn,
    pub is_radial: bool,
    pub is_polynomial: bool,
    pub is_g_invariant: bool,
    profile: Option<ProfileFn>,
    poly: Option<NumPoly>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("is_radial", &self.is_radial)
            .field("is_polynomial", &self.is_polynomial)
            .field("is_g_invariant", &self.is_g_invariant)
            .finish()
    }
}

impl ScalarField {
    pub fn new(f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            is_radial: false,
            is_polynomial: false,
            is_g_invariant: false,
            profile: None,
            poly: None,
        }
    }

    pub fn real(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |x| Complex64::new(f(x), 0.0))
    }

    pub fn radial(profile: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        let p: ProfileFn = Arc::new(profile);
        let q = p.clone();
        Self {
            eval: Arc::new(move |x| q(x.iter().map(|v| v * v).sum::<f64>().sqrt())),
            is_radial: true,
            is_polynomial: false,
            is_g_invariant: true,
            profile: Some(p),
            poly: None,
        }
    }

    pub fn polynomial(p: NumPoly) -> Self {
        let q = p.clone();
        Self {
            eval: Arc::new(move |x| q.eval(x)),
            is_radial: false,
            is_polynomial: true,
            is_g_invariant: false,
            profile: None,
            poly: Some(p),
        }
    }

    /// e^{-a|x|²}
    pub fn gaussian(a: f64) -> Self {
        Self::radial(move |r| Complex64::new((-a * r * r).exp(), 0.0))
    }

    /// x ↦ E_κ(x, y) at real arguments.
    pub fn kernel_real(spec: &ReflectionGroupSpec, y: &[f64]) -> Self {
        let s = spec.clone();
        let y = y.to_vec();
        Self::new(move |x| Complex64::new(dunkl_kernel_real(&s, x, &y), 0.0))
    }

    /// x ↦ E_κ(ix, ξ).
    pub fn kernel_imag(spec: &ReflectionGroupSpec, xi: &[f64]) -> Self {
        let s = spec.clone();
        let xi = xi.to_vec();
        Self::new(move |x| dunkl_kernel(&s, x, &xi))
    }

    pub fn with_g_invariant(mut self) -> Self {
        self.is_g_invariant = true;
        self
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        (self.eval)(x)
    }

    pub fn profile(&self) -> Option<&ProfileFn> {
        self.profile.as_ref()
    }

    pub fn poly(&self) -> Option<&NumPoly> {
        self.poly.as_ref()
    }

    pub fn scaled(&self, c: Complex64) -> ScalarField {
        let f = self.eval.clone();
        let mut out = self.clone();
        out.eval = Arc::new(move |x| c * f(x));
        out.profile = self.profile.as_ref().map(|p| {
            let p = p.clone();
            Arc::new(move |r| c * p(r)) as ProfileFn
        });
        out.poly = self.poly.as_ref().map(|p| NumPoly {
            terms: p.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        });
        out
    }

    /// f(λ·); flags are preserved.
    pub fn dilate(&self, lambda: f64) -> ScalarField {
        let f = self.eval.clone();
        let mut out = self.clone();
        out.eval = Arc::new(move |x| {
            let y: Vec<f64> = x.iter().map(|v| lambda * v).collect();
            f(&y)
        });
        out.profile = self.profile.as_ref().map(|p| {
            let p = p.clone();
            Arc::new(move |r| p(lambda * r)) as ProfileFn
        });
        out.poly = self.poly.as_ref().map(|p| NumPoly {
            terms: p
                .terms
                .iter()
                .map(|(a, v)| (a.clone(), v * lambda.powi(a.iter().sum::<u32>() as i32)))
                .collect(),
        });
        out
    }

    /// Spot-checks the declared flags on the given points.
    pub fn check_flags(&self, spec: &ReflectionGroupSpec, samples: &[Vec<f64>]) -> Result<()> {
        for x in samples {
            let v = self.eval(x);
            let tol = 1e-10 * (1.0 + v.norm());
            if self.is_radial {
                let r = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                let p = self.profile.as_ref().map(|p| p(r)).unwrap_or_else(|| {
                    let mut e = vec![0.0; x.len()];
                    e[0] = r;
                    self.eval(&e)
                });
                if (p - v).norm() > tol {
                    return Err(DunklError::Validation(format!("field flagged radial but differs at {x:?}")));
                }
            }
            if self.is_g_invariant {
                for root in spec.roots() {
                    if (self.eval(&spec.reflect(&root, x)) - v).norm() > tol {
                        return Err(DunklError::Validation(format!(
                            "field flagged G-invariant but changes under reflection at {x:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
