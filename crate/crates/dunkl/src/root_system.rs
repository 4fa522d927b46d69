//! The reflection group Z₂^d: roots ±√2 e_j, multiplicities, the weight h_κ²
//! and the Mehta constant.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::SQRT_2;

use crate::error::{DunklError, Result};
use crate::quadrature;

/// A root λ = sign·√2·e_axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub axis: usize,
    pub sign: i8,
}

impl Root {
    pub fn vector(&self, d: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[self.axis] = f64::from(self.sign) * SQRT_2;
        v
    }

    /// λ_j λ_l, always an integer for normalized axis roots.
    pub fn outer(&self, j: usize, l: usize) -> i64 {
        if j == self.axis && l == self.axis {
            2
        } else {
            0
        }
    }

    /// Entry (j, l) of the reflection matrix I - λλᵀ.
    pub fn reflection_entry(&self, j: usize, l: usize) -> i64 {
        i64::from(j == l) - self.outer(j, l)
    }

    pub fn negate(&self) -> Root {
        Root { axis: self.axis, sign: -self.sign }
    }
}

/// Structured text form used by `--group`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupConfig {
    pub d: usize,
    pub kappas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionGroupSpec {
    pub d: usize,
    pub kappas: Vec<f64>,
    pub gamma: f64,
    pub d_kappa: f64,
    /// c_κ
    pub mehta: f64,
    /// c_κ⁻¹ = ∫ e^{-|x|²/2} h_κ²(x) dx
    pub mehta_inv: f64,
}

/// One-axis Mehta integral ∫ e^{-x²/2} (√2|x|)^{2κ} dx = 2^{2κ+1/2} Γ(κ+1/2).
pub fn mehta_axis_closed(kappa: f64) -> f64 {
    ((2.0 * kappa + 0.5) * std::f64::consts::LN_2 + ln_gamma(kappa + 0.5)).exp()
}

/// Same integral by Gauss–Jacobi on [0, L] with L = 40.
pub fn mehta_axis_quadrature(kappa: f64, n: usize) -> Result<f64> {
    let (x, w) = quadrature::half_line_weighted(n, 40.0, kappa)?;
    Ok(2.0 * x.iter().zip(&w).map(|(x, w)| w * (-0.5 * x * x).exp()).sum::<f64>())
}

pub fn make_z2d(d: usize, kappas: &[f64]) -> Result<ReflectionGroupSpec> {
    if d == 0 {
        return Err(DunklError::Domain("dimension must be at least 1".into()));
    }
    if kappas.len() != d {
        return Err(DunklError::Domain(format!("expected {d} multiplicities, got {}", kappas.len())));
    }
    if let Some(k) = kappas.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        return Err(DunklError::Domain(format!("multiplicity {k} must be a finite nonnegative real")));
    }
    let gamma: f64 = kappas.iter().sum();
    let mehta_inv: f64 = kappas.iter().map(|&k| mehta_axis_closed(k)).product();
    for &k in kappas {
        let q = mehta_axis_quadrature(k, 160)?;
        let c = mehta_axis_closed(k);
        let rel = (q - c).abs() / c;
        if rel > 1e-8 {
            return Err(DunklError::Accuracy { what: format!("Mehta integral at kappa {k}"), residual: rel });
        }
    }
    Ok(ReflectionGroupSpec {
        d,
        kappas: kappas.to_vec(),
        gamma,
        d_kappa: d as f64 + 2.0 * gamma,
        mehta: 1.0 / mehta_inv,
        mehta_inv,
    })
}

impl ReflectionGroupSpec {
    pub fn rank_one(kappa: f64) -> Result<Self> {
        make_z2d(1, &[kappa])
    }

    pub fn from_config(cfg: &GroupConfig) -> Result<Self> {
        make_z2d(cfg.d, &cfg.kappas)
    }

    pub fn config(&self) -> GroupConfig {
        GroupConfig { d: self.d, kappas: self.kappas.clone() }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: GroupConfig = toml::from_str(text).map_err(|e| DunklError::Config(e.to_string()))?;
        Self::from_config(&cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.config()).expect("group config serializes")
    }

    /// All roots, ordered (+e_0, -e_0, +e_1, -e_1, ...).
    pub fn roots(&self) -> Vec<Root> {
        (0..self.d).flat_map(|a| [Root { axis: a, sign: 1 }, Root { axis: a, sign: -1 }]).collect()
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        (0..self.d).map(|a| Root { axis: a, sign: 1 }).collect()
    }

    pub fn kappa(&self, root: &Root) -> f64 {
        self.kappas[root.axis]
    }

    /// σ_λ x = x - ⟨x,λ⟩λ. For axis roots this negates one coordinate, done
    /// exactly rather than through the rounded √2·√2.
    pub fn reflect(&self, root: &Root, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        y[root.axis] = -y[root.axis];
        y
    }

    /// h_κ²(x) = Π_{λ∈R⁺} |⟨x,λ⟩|^{2κ(λ)}.
    pub fn weight(&self, x: &[f64]) -> f64 {
        self.positive_roots()
            .iter()
            .map(|r| {
                let k = self.kappa(r);
                if k == 0.0 {
                    1.0
                } else {
                    (SQRT_2 * x[r.axis].abs()).powf(2.0 * k)
                }
            })
            .product()
    }

    pub fn is_classical(&self) -> bool {
        self.kappas.iter().all(|&k| k == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_mehta() {
        let s = make_z2d(1, &[0.0]).unwrap();
        assert_eq!(s.gamma, 0.0);
        assert_eq!(s.d_kappa, 1.0);
        assert!((s.mehta_inv - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn homogeneous_dimension() {
        assert_eq!(make_z2d(2, &[1.0, 1.0]).unwrap().d_kappa, 6.0);
    }

    #[test]
    fn negative_multiplicity_rejected() {
        assert!(matches!(make_z2d(1, &[-0.1]), Err(DunklError::Domain(_))));
        assert!(make_z2d(2, &[0.5]).is_err());
        assert!(make_z2d(0, &[]).is_err());
    }

    #[test]
    fn reflections_flip_one_coordinate() {
        let s = make_z2d(1, &[0.5]).unwrap();
        let r = s.roots()[0];
        assert!((s.reflect(&r, &[3.0])[0] + 3.0).abs() < 1e-15);
        let s2 = make_z2d(2, &[0.5, 0.5]).unwrap();
        let y = s2.reflect(&Root { axis: 0, sign: 1 }, &[1.0, 2.0]);
        assert!((y[0] + 1.0).abs() < 1e-15 && (y[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn weight_direct_value() {
        let s = make_z2d(1, &[1.0]).unwrap();
        assert!((s.weight(&[2.0]) - 8.0).abs() < 1e-12);
        let s0 = make_z2d(2, &[0.0, 0.0]).unwrap();
        assert_eq!(s0.weight(&[0.3, -4.0]), 1.0);
    }

    #[test]
    fn toml_round_trip() {
        let s = make_z2d(2, &[0.5, 0.25]).unwrap();
        let back = ReflectionGroupSpec::from_toml(&s.to_toml()).unwrap();
        assert_eq!(back, s);
    }
}
