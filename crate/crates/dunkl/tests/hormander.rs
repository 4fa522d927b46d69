use dunkl::hormander::{
    check_derivative_decay, check_modified_hormander, check_sobolev_form, default_t_grid, dyadic_hormander_classical,
    dyadic_psi, hormander_grid, m_hat, m_tilde, moment_routes, multi_indices, psi_periodicity_residual, split_bound,
    weighted_m_tilde_norm, MultiplierSpec, Verdict,
};
use dunkl::transform::QuadratureGrid;
use dunkl::ReflectionGroupSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(kappas: &[f64]) -> ReflectionGroupSpec {
    dunkl::root_system::make_z2d(kappas.len(), kappas).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

#[test]
fn m_hat_of_one_does_not_depend_on_t() {
    let s = spec(&[0.7]);
    let g = QuadratureGrid::reference(&s).unwrap();
    let one = MultiplierSpec::one(1);
    for x in [0.0, 0.4, 1.7] {
        let base = m_hat(&one, 1.5, 0.75, &[x], 1.0, &g).unwrap();
        for t in [0.1, 10.0] {
            let v = m_hat(&one, 1.5, 0.75, &[x], t, &g).unwrap();
            assert!((v - base).norm() < 1e-8 * base.norm().max(1.0), "x {x} t {t}");
        }
    }
}

#[test]
fn classical_m_hat_matches_gaussian_moments() {
    // ∫ e^{ixξ} e^{-ξ²} dξ = √π e^{-x²/4}, and the ξ² moment is minus its second derivative.
    let s = spec(&[0.0]);
    let g = QuadratureGrid::reference(&s).unwrap();
    let one = MultiplierSpec::one(1);
    let sp = std::f64::consts::PI.sqrt();
    for x in [0.0f64, 0.5, 1.3, 3.0] {
        let e = (-x * x / 4.0).exp();
        let v0 = m_hat(&one, 0.0, 1.0, &[x], 2.0, &g).unwrap();
        assert!((v0.re - sp * e).abs() < 1e-10 && v0.im.abs() < 1e-10);
        let v1 = m_hat(&one, 1.0, 1.0, &[x], 2.0, &g).unwrap();
        assert!((v1.re - sp * e * (0.5 - x * x / 4.0)).abs() < 1e-10, "x {x}");
        let w = m_tilde(&one, 1.0, 1.0, &[x], 1.0, &g).unwrap();
        assert!((w - v1).norm() < 1e-12);
    }
}

#[test]
fn m_tilde_is_a_rescaled_m_hat() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (kappas, src) in [(vec![0.5], "exp(-(x1-0.5)^2)"), (vec![0.3, 0.8], "exp(-r^2/2)*(1+x1*x2/4)")] {
        let s = spec(&kappas);
        let g = QuadratureGrid::reference(&s).unwrap();
        let m = MultiplierSpec::parse(src, s.d).unwrap();
        let (sv, delta) = (1.5, 0.75);
        for _ in 0..4 {
            let t: f64 = rng.random_range(0.5..2.0);
            let x: Vec<f64> = (0..s.d).map(|_| rng.random_range(-2.0..2.0)).collect();
            let a = t.powf(-1.0 / (2.0 * delta));
            let xs: Vec<f64> = x.iter().map(|v| a * v).collect();
            let want = m_hat(&m, sv, delta, &xs, t, &g).unwrap() * t.powf(-sv / delta - s.d_kappa / (2.0 * delta));
            let got = m_tilde(&m, sv, delta, &x, t, &g).unwrap();
            assert!((got - want).norm() < 1e-6 * want.norm().max(1e-3), "{src} t {t}: {got} vs {want}");
        }
    }
}

#[test]
fn three_routes_agree_in_one_dimension() {
    let s = spec(&[0.5]);
    let g = hormander_grid(&s).unwrap();
    for src in ["1", "r^(2*i)"] {
        let m = MultiplierSpec::parse(src, 1).unwrap();
        let r = check_modified_hormander(&m, 2.0, 1.0, &default_t_grid(), &g).unwrap();
        assert_eq!(r.t_grid.len(), 61);
        assert!(r.equivalence_residual < 1e-6, "{src}: {}", r.equivalence_residual);
        assert!(r.spectral_residual < 1e-6, "{src}: {}", r.spectral_residual);
        assert!(rel(r.t_slope, r.expected_slope) < 0.02, "{src}: slope {}", r.t_slope);
        assert_eq!(r.verdict, Verdict::SatisfiedUpToGridRefinement);
        assert_eq!(r.sup, r.values.iter().cloned().fold(f64::MIN, f64::max));
        if src == "1" {
            assert!(r.values.iter().all(|v| rel(*v, r.sup) < 1e-8));
        }
    }
}

#[test]
fn discontinuous_symbols_are_flagged() {
    let ts: Vec<f64> = (-3..=3).map(|k| 10f64.powi(k)).collect();
    let half_plane = MultiplierSpec::parse("(1+sign(x1))/2", 2).unwrap();
    let g = QuadratureGrid::reference(&spec(&[0.0, 0.0])).unwrap();
    let r = check_modified_hormander(&half_plane, 1.0, 1.0, &ts, &g).unwrap();
    assert_eq!(r.verdict, Verdict::FailsOrInconclusive, "{}", r.refinement_change);
    assert!(!r.note.is_empty());
    let shift = MultiplierSpec::parse("exp(i*x1)", 1).unwrap();
    let g = QuadratureGrid::reference(&spec(&[0.5])).unwrap();
    let r = check_modified_hormander(&shift, 1.0, 1.0, &ts, &g).unwrap();
    assert_eq!(r.verdict, Verdict::FailsOrInconclusive);
}

#[test]
fn condition_rejects_bad_profiles() {
    let g = QuadratureGrid::reference(&spec(&[0.5])).unwrap();
    let one = MultiplierSpec::one(1);
    assert!(check_modified_hormander(&one, 0.0, 1.0, &[1.0], &g).is_err());
    assert!(check_modified_hormander(&one, 1.0, 1.5, &[1.0], &g).is_err());
    assert!(check_modified_hormander(&one, 1.0, 1.0, &[], &g).is_err());
    // A window too wide for the box is a quadrature error, not a number.
    assert!(m_tilde(&one, 1.0, 1.0, &[0.0], 1e-3, &g).is_err());
}

#[test]
fn sobolev_form_is_the_weighted_m_tilde_integral() {
    let s = spec(&[0.5]);
    let g = QuadratureGrid::reference(&s).unwrap();
    let one = MultiplierSpec::one(1);
    let v = weighted_m_tilde_norm(&one, 1.0, 1.0, 1.0, &g).unwrap();
    let w = check_sobolev_form(&one, 1.0, 1.0, 1.0, &g).unwrap() * s.mehta_inv * s.mehta_inv;
    assert!(rel(v, w) < 1e-10);
}

#[test]
fn moment_weight_matches_dunkl_derivative_sum() {
    for (kappas, src) in [(vec![0.5], "1/(1+r^2)"), (vec![0.5], "x1/sqrt(1+r^2)"), (vec![0.4, 0.7], "exp(-x1^2)")] {
        let s = spec(&kappas);
        // The |x|^{2k} weight needs a wider 2D box than the reference one.
        let g = if s.d == 1 { QuadratureGrid::reference(&s).unwrap() } else { QuadratureGrid::new(&s, 96, 11.0).unwrap() };
        let m = MultiplierSpec::parse(src, s.d).unwrap();
        for k in [1, 2] {
            let r = moment_routes(&m, k, 1.0, &g).unwrap();
            assert!(rel(r.physical, r.derivative_sum) < 1e-5, "{src} k {k}: {r:?}");
        }
    }
}

#[test]
fn inner_ball_part_is_bounded_by_the_constant_symbol() {
    for (kappas, src) in [(vec![0.5], "r^(2*i)"), (vec![0.5], "sign(x1)"), (vec![0.5, 0.5], "x1^2/(r^2+1e-12)")] {
        let s = spec(&kappas);
        let g = QuadratureGrid::reference(&s).unwrap();
        let m = MultiplierSpec::parse(src, s.d).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let b = split_bound(&m, 2.0, 1.0, t, &g).unwrap();
            assert!(b.inner <= b.bound * (1.0 + 1e-9), "{src} t {t}: {b:?}");
        }
    }
}

#[test]
fn imaginary_power_has_exact_derivative_decay() {
    // r^j |d^j/dr^j r^{iτ}| = |Π_{i<j} (iτ - i)| for every r.
    let s = spec(&[0.5]);
    let m = MultiplierSpec::parse("r^(2*i)", 1).unwrap();
    let r = check_derivative_decay(&s, &m, 3, 1).unwrap();
    assert!(r.passes);
    let tau = num_complex::Complex64::new(0.0, 2.0);
    for j in 0..=3usize {
        let want: f64 = (0..j).map(|i| (tau - i as f64).norm()).product();
        for v in &r.shell_sups[j] {
            assert!(rel(*v, want) < 1e-9, "j {j}: {v} vs {want}");
        }
        for v in &r.averaged[j] {
            assert!(v.is_finite() && *v <= want * 2f64.powi(j as i32) + 1e-12);
        }
    }
}

#[test]
fn constant_and_smooth_symbols_pass_decay() {
    let s = spec(&[0.5, 0.3]);
    let one = MultiplierSpec::one(2);
    let r = check_derivative_decay(&s, &one, 2, 3).unwrap();
    assert!(r.passes);
    for row in &r.shell_sups[1..] {
        assert!(row.iter().all(|v| *v == 0.0));
    }
    let m = MultiplierSpec::parse("x1/sqrt(1+r^2)", 2).unwrap();
    let r = check_derivative_decay(&s, &m, 2, 3).unwrap();
    assert!(r.passes, "{r:?}");
    assert_eq!(r.alphas.len(), 6);
    let chirp = MultiplierSpec::parse("exp(i*x1)", 1).unwrap();
    assert!(!check_derivative_decay(&spec(&[0.5]), &chirp, 1, 3).unwrap().passes);
}

#[test]
fn dyadic_condition_and_psi_periodicity() {
    let g = QuadratureGrid::reference(&spec(&[0.0])).unwrap();
    let one = MultiplierSpec::one(1);
    let r = dyadic_hormander_classical(&one, 1, &g).unwrap();
    assert!(r.passes);
    assert_eq!(r.constants[1], 0.0);
    let m = MultiplierSpec::parse("r^(2*i)", 1).unwrap();
    let r = dyadic_hormander_classical(&m, 1, &g).unwrap();
    assert!(r.passes, "{:?}", r.condition.note);
    assert!(r.constants.iter().all(|c| c.is_finite() && *c > 0.0));
    assert!(r.psi_residuals.iter().all(|v| *v < 1e-3));
    assert!(dyadic_hormander_classical(&m, 1, &QuadratureGrid::reference(&spec(&[0.5])).unwrap()).is_err());
    // The series is a bounded function of t: periodic in log₂ t and positive.
    let (lo, hi) = (0..64).map(|i| dyadic_psi(2.5, 1.0 + i as f64 / 64.0)).fold((f64::MAX, 0.0f64), |a, v| (a.0.min(v), a.1.max(v)));
    assert!(lo > 0.0 && hi / lo < 2.0);
    assert!(psi_periodicity_residual(0.5) < 1e-3);
}

#[test]
fn multiplier_bounds_are_enforced() {
    let m = MultiplierSpec::parse("r^(2*i)", 2).unwrap();
    assert!((m.bound - 1.0).abs() < 1e-12);
    let f = dunkl::dunkl_core::ScalarField::real(|x: &[f64]| x[0].tanh() * 2.0);
    assert!(MultiplierSpec::new("2tanh", f.clone(), 1.0, 1).is_err());
    assert!(MultiplierSpec::new("2tanh", f, 2.0, 1).is_ok());
    assert_eq!(multi_indices(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
}
