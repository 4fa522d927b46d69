//! Rank-one Dunkl kernel e_κ and its product over axes.
//!
//! The rank-one eigen-equation u' + κ(u(t) - u(-t))/t = z u has the series
//! solution e_κ(z) = Σ zⁿ/b_n with b_0 = 1 and b_n = b_{n-1}(n + 2κ·[n odd]).
//! Its even and odd parts are normalized Bessel functions:
//! e_κ(iz) = j_{κ-1/2}(z) + iz/(2κ+1)·j_{κ+1/2}(z).

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use super::dd::Dd;
use crate::error::{DunklError, Result};
use crate::root_system::ReflectionGroupSpec;

/// Above this |z| the imaginary-argument kernel switches to Bessel asymptotics.
pub const SERIES_LIMIT_IMAG: f64 = 30.0;
/// Above this |z| the real-argument kernel switches to scaled asymptotics.
pub const SERIES_LIMIT_REAL: f64 = 40.0;
const MAX_TERMS: usize = 600;

/// Series denominators b_0..b_n.
pub fn series_coefficients(kappa: f64, n: usize) -> Vec<f64> {
    let mut b = Vec::with_capacity(n + 1);
    b.push(1.0);
    for k in 1..=n {
        let odd = if k % 2 == 1 { 2.0 * kappa } else { 0.0 };
        b.push(b[k - 1] * (k as f64 + odd));
    }
    b
}

fn series_imag(kappa: f64, z: f64) -> Result<Complex64> {
    let zd = Dd::from_f64(z);
    let two_k = 2.0 * kappa;
    let mut term = Dd::ONE;
    let mut re = Dd::ONE;
    let mut im = Dd::ZERO;
    for n in 1..MAX_TERMS {
        let denom = if n % 2 == 1 { Dd::sum_exact(n as f64, two_k) } else { Dd::from_f64(n as f64) };
        term = term.mul(zd).div(denom);
        let signed = if (n / 2) % 2 == 0 { term } else { term.neg() };
        if n % 2 == 0 {
            re = re.add(signed);
        } else {
            im = im.add(signed);
        }
        if n as f64 > z.abs() && term.abs_hi() < 1e-20 {
            return Ok(Complex64::new(re.to_f64(), im.to_f64()));
        }
    }
    Err(DunklError::Accuracy { what: format!("kernel series at z={z}"), residual: term.abs_hi() })
}

/// Hankel expansion of J_ν(x) for large positive x.
fn bessel_j_large(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut a = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (8.0 * k as f64 * x);
        if a.abs() > last || a.abs() < 1e-18 {
            break;
        }
        last = a.abs();
        // even k feed P with sign (-1)^{k/2}, odd k feed Q with sign (-1)^{(k-1)/2}
        if k % 2 == 0 {
            p += if (k / 2) % 2 == 1 { -a } else { a };
        } else {
            q += if ((k - 1) / 2) % 2 == 1 { -a } else { a };
        }
    }
    let w = x - 0.5 * nu * PI - 0.25 * PI;
    (2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin())
}

/// Normalized Bessel j_α(x) = Γ(α+1)(2/x)^α J_α(x), asymptotic regime.
fn normalized_j_large(alpha: f64, x: f64) -> f64 {
    let scale = (ln_gamma(alpha + 1.0) + alpha * (2.0 / x).ln()).exp();
    scale * bessel_j_large(alpha, x)
}

/// e^{-x} I_ν(x) for large positive x.
fn bessel_i_scaled_large(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut a = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= -(mu - odd * odd) / (8.0 * k as f64 * x);
        if a.abs() > last || a.abs() < 1e-18 {
            break;
        }
        last = a.abs();
        sum += a;
    }
    sum / (2.0 * PI * x).sqrt()
}

fn normalized_i_scaled_large(alpha: f64, x: f64) -> f64 {
    let scale = (ln_gamma(alpha + 1.0) + alpha * (2.0 / x).ln()).exp();
    scale * bessel_i_scaled_large(alpha, x)
}

/// e_κ(iz), reporting non-convergence of the series.
pub fn try_rank_one_imag(kappa: f64, z: f64) -> Result<Complex64> {
    if z.abs() <= SERIES_LIMIT_IMAG {
        return series_imag(kappa, z);
    }
    let x = z.abs();
    let even = normalized_j_large(kappa - 0.5, x);
    let odd = normalized_j_large(kappa + 0.5, x) / (2.0 * kappa + 1.0);
    Ok(Complex64::new(even, z * odd))
}

/// e_κ(iz) for real z.
pub fn rank_one_imag(kappa: f64, z: f64) -> Complex64 {
    try_rank_one_imag(kappa, z).expect("kernel series converges for finite arguments")
}

/// e^{-|z|} e_κ(z) for real z.
pub fn rank_one_real_scaled(kappa: f64, z: f64) -> f64 {
    let x = z.abs();
    let sign = z.signum();
    if x <= SERIES_LIMIT_REAL {
        let mut term = 1.0;
        let mut even = 1.0;
        let mut odd = 0.0;
        for n in 1..MAX_TERMS {
            let extra = if n % 2 == 1 { 2.0 * kappa } else { 0.0 };
            term *= x / (n as f64 + extra);
            if n % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
            if n as f64 > x && term < 1e-18 * (even + odd) {
                break;
            }
        }
        return (-x).exp() * (even + sign * odd);
    }
    let even = normalized_i_scaled_large(kappa - 0.5, x);
    let odd = x * normalized_i_scaled_large(kappa + 0.5, x) / (2.0 * kappa + 1.0);
    even + sign * odd
}

/// e_κ(z) for real z; overflows to infinity beyond |z| ≈ 700.
pub fn rank_one_real(kappa: f64, z: f64) -> f64 {
    rank_one_real_scaled(kappa, z) * z.abs().exp()
}

/// E_κ(ix, y) = Π_j e_{κ_j}(i x_j y_j).
pub fn dunkl_kernel(spec: &ReflectionGroupSpec, x: &[f64], y: &[f64]) -> Complex64 {
    spec.kappas
        .iter()
        .enumerate()
        .map(|(j, &k)| rank_one_imag(k, x[j] * y[j]))
        .product()
}

/// Checked variant of [`dunkl_kernel`].
pub fn try_dunkl_kernel(spec: &ReflectionGroupSpec, x: &[f64], y: &[f64]) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &k) in spec.kappas.iter().enumerate() {
        acc *= try_rank_one_imag(k, x[j] * y[j])?;
    }
    Ok(acc)
}

/// E_κ(x, y) at real arguments.
pub fn dunkl_kernel_real(spec: &ReflectionGroupSpec, x: &[f64], y: &[f64]) -> f64 {
    spec.kappas.iter().enumerate().map(|(j, &k)| rank_one_real(k, x[j] * y[j])).product()
}

/// e^{-Σ|x_j y_j|} E_κ(x, y); stays finite for large arguments.
pub fn dunkl_kernel_real_scaled(spec: &ReflectionGroupSpec, x: &[f64], y: &[f64]) -> f64 {
    spec.kappas.iter().enumerate().map(|(j, &k)| rank_one_real_scaled(k, x[j] * y[j])).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_limit_is_exponential() {
        for &z in &[0.0, 0.3, -2.0, 7.5, 29.0, 31.0, -55.0, 144.0] {
            let e = rank_one_imag(0.0, z);
            assert!((e - Complex64::new(z.cos(), z.sin())).norm() < 1e-12, "z={z}: {e}");
        }
        for &z in &[0.5, -3.0, 20.0, 45.0, -45.0] {
            let r = rank_one_real_scaled(0.0, z);
            let want = (z - z.abs()).exp();
            assert!((r - want).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn unit_multiplicity_closed_form() {
        // κ = 1: j_{1/2}(z) = sin z / z and j_{3/2}(z) = 3(sin z - z cos z)/z³
        for &z in &[0.7, 5.0, 25.0, 35.0, 90.0] {
            let e = rank_one_imag(1.0, z);
            let j0 = z.sin() / z;
            let j1 = 3.0 * (z.sin() - z * z.cos()) / (z * z * z);
            let want = Complex64::new(j0, z / 3.0 * j1);
            assert!((e - want).norm() < 1e-12, "z={z}: {e} vs {want}");
        }
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        for &k in &[0.25, 0.5, 1.0, 2.3] {
            let a = series_imag(k, 30.5).unwrap();
            let b = try_rank_one_imag(k, 30.5).unwrap();
            assert!((a - b).norm() < 1e-12, "kappa {k}: {a} vs {b}");
            let c = rank_one_real_scaled(k, 40.5);
            let x: f64 = 40.5;
            let mut term = 1.0;
            let mut s = 1.0;
            for n in 1..400 {
                term *= x / (n as f64 + if n % 2 == 1 { 2.0 * k } else { 0.0 });
                s += term;
            }
            assert!((c - s * (-x).exp()).abs() < 1e-12 * c.abs(), "kappa {k}");
        }
    }

    #[test]
    fn coefficients_start() {
        let b = series_coefficients(0.5, 3);
        assert_eq!(b, vec![1.0, 2.0, 4.0, 16.0]);
    }
}
