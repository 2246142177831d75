use hermite_scaling::basis::{gaussian_coefficients, ComplexCoeffs, GaussianParams, ScaledBasis};
use hermite_scaling::fourier::TestFunction;
use hermite_scaling::operators::{balance_scaling, error_breakdown, project_complex, projection_error, residual_norm};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn catalog() -> Vec<TestFunction> {
    vec![
        TestFunction::gaussian_power(1).unwrap(),
        TestFunction::gaussian_power(2).unwrap(),
        TestFunction::gaussian_power(4).unwrap(),
        TestFunction::algebraic(0.8).unwrap(),
        TestFunction::algebraic(1.0).unwrap(),
        TestFunction::algebraic(1.5).unwrap(),
        TestFunction::algebraic(2.2).unwrap(),
        TestFunction::algebraic(3.0).unwrap(),
        TestFunction::gaussian(0.0, 0.0).unwrap(),
        TestFunction::gaussian(1.5, -1.0).unwrap(),
        TestFunction::plain_gaussian(0.5).unwrap(),
        TestFunction::plain_gaussian(2.0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_beats_any_competitor(
        which in 0usize..12,
        n in 2usize..16,
        beta in 0.4f64..3.0,
        noise in prop::collection::vec((-0.05f64..0.05, -0.05f64..0.05), 16),
    ) {
        let u = &catalog()[which];
        let basis = ScaledBasis::new(n, beta).unwrap();
        let best = project_complex(u, &basis, TOL).unwrap();
        let e_best = residual_norm(u, &best, TOL).unwrap();
        let v: Vec<Complex64> = best
            .values()
            .iter()
            .zip(&noise)
            .map(|(c, (a, b))| c + Complex64::new(*a, *b))
            .collect();
        let e_v = residual_norm(u, &ComplexCoeffs::new(basis, v).unwrap(), TOL).unwrap();
        prop_assert!(e_best <= e_v + 1e-8, "{}: {e_best} > {e_v}", u.id());
    }

    #[test]
    fn gaussian_tail_bound(k in 0.0f64..3.0, s in 0.0f64..3.0, n in 0usize..40) {
        // |c_n|² is a Poisson weight in n with mean ρ, so the tail sits below
        // the first omitted term with constant √π
        let rho = 0.5 * (k * k + s * s);
        let c = gaussian_coefficients(&GaussianParams::new(k, s).unwrap(), n + 400);
        let tail: f64 = c[n + 1..].iter().map(|v| v.norm_sqr()).sum();
        let lgamma = (1..=n + 1).map(|j| (j as f64).ln()).sum::<f64>();
        let bound = ((n + 1) as f64 * rho.ln() - lgamma).exp();
        prop_assert!(tail <= std::f64::consts::PI.sqrt() * bound * (1.0 + 1e-10) + 1e-300);
    }
}

#[test]
fn measured_gaussian_tail_respects_bound() {
    for (k, s) in [(1.0, 0.5), (0.0, 2.0), (2.5, 2.5)] {
        let u = TestFunction::gaussian(k, s).unwrap();
        let rho: f64 = 0.5 * (k * k + s * s);
        for n in [4usize, 8, 16] {
            let e = projection_error(&u, &ScaledBasis::unscaled(n).unwrap(), TOL).unwrap();
            let lgamma = (1..=n + 1).map(|j| (j as f64).ln()).sum::<f64>();
            let bound = std::f64::consts::PI.sqrt() * ((n + 1) as f64 * rho.ln() - lgamma).exp();
            assert!(
                e * e <= bound * (1.0 + 1e-6) + 1e-20,
                "k={k} s={s} N={n}: {} vs {bound}",
                e * e
            );
        }
    }
}

#[test]
fn duality_swaps_scale_and_transform() {
    for k in [1.0, 2.0] {
        let u = TestFunction::gaussian(k, 0.0).unwrap();
        // F[e^{-x²/2 + ikx}] = e^{-(ξ-k)²/2}
        let fu = TestFunction::gaussian(0.0, k).unwrap();
        for beta in [0.5, 2.0] {
            for n in [4usize, 8] {
                let a = projection_error(&u, &ScaledBasis::new(n, beta).unwrap(), TOL).unwrap();
                let b = projection_error(&fu, &ScaledBasis::new(n, 1.0 / beta).unwrap(), TOL).unwrap();
                assert!((a - b).abs() < 1e-8, "k={k} beta={beta} N={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn indicator_dominates_measured_error() {
    for u in catalog() {
        for beta in [0.5, 2.0] {
            for n in [4usize, 16, 64] {
                let basis = ScaledBasis::new(n, beta).unwrap();
                let e = projection_error(&u, &basis, TOL).unwrap();
                let total = error_breakdown(&u, &basis).unwrap().total;
                assert!(e <= 50.0 * total, "{} beta={beta} N={n}: {e} vs {total}", u.id());
            }
        }
    }
}

#[test]
fn balance_is_scale_covariant() {
    for sigma in [1.5, 3.0] {
        for n in [8usize, 32] {
            let a = balance_scaling(&TestFunction::plain_gaussian(sigma).unwrap(), n, (0.01, 50.0)).unwrap();
            // u(2x) for u = e^{-x²/(2σ²)} is the same family with σ/2
            let b = balance_scaling(&TestFunction::plain_gaussian(sigma / 2.0).unwrap(), n, (0.01, 50.0)).unwrap();
            assert!(!a.saturated && !b.saturated);
            assert!(
                (b.beta - 2.0 * a.beta).abs() < 1e-6,
                "sigma={sigma} N={n}: {} vs {}",
                b.beta,
                a.beta
            );
        }
    }
}
