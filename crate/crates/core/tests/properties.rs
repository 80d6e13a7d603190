//! Property tests over randomly drawn arguments.

use ginedge::edgelaw::{gamma_bar, EdgeLaw};
use ginedge::fredholm::{det_pair, logdet_t, nodes_for, nystrom_rule, truncation_bound, NystromSystem};
use ginedge::identities;
use ginedge::kernels::{s_shifted, t_shifted_closed, KernelSpec};
use ginedge::mc::{self, McConfig};
use ginedge::quadrature::gauss_legendre;
use ginedge::specfun::{erfc, polylog, PolylogOrder};
use ginedge::{tails, Execution};
use nalgebra::DMatrix;
use proptest::prelude::*;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

fn heavy() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

/// `u erfc(u) - exp(-u^2) / sqrt(pi)`, an antiderivative of `erfc`.
fn erfc_antiderivative(u: f64) -> f64 {
    u * erfc(u).unwrap() - FRAC_1_SQRT_PI * (-u * u).exp()
}

proptest! {
    #[test]
    fn erfc_reflection_and_order(x in -5.0..5.0f64, dx in 1e-6..1.0f64) {
        prop_assert!((erfc(x).unwrap() + erfc(-x).unwrap() - 2.0).abs() <= 1e-14);
        prop_assert!(erfc(x + dx).unwrap() < erfc(x).unwrap());
    }

    #[test]
    fn polylog_orders(x in 1e-6..0.999f64, dx in 1e-6..1e-3f64) {
        let half = polylog(PolylogOrder::Half, x).unwrap();
        let three_halves = polylog(PolylogOrder::ThreeHalves, x).unwrap();
        prop_assert!(half >= three_halves);
        for order in [PolylogOrder::Half, PolylogOrder::ThreeHalves] {
            let y = (x + dx).min(0.9999);
            prop_assert!(polylog(order, y).unwrap() > polylog(order, x).unwrap());
        }
    }

    #[test]
    fn gauss_legendre_mirror(m in 1usize..600) {
        let r = gauss_legendre(m).unwrap();
        for i in 0..m {
            prop_assert!((r.nodes()[i] + r.nodes()[m - 1 - i]).abs() <= 1e-13);
            prop_assert!((r.weights()[i] - r.weights()[m - 1 - i]).abs() <= 1e-13);
        }
    }

    #[test]
    fn gaussian_box_integral(t in -4.0..4.0f64, a in 0.2..5.0f64, b in 0.2..5.0f64, m in 40usize..80) {
        let x = gauss_legendre(m).unwrap().affine_map(0.0, a).unwrap();
        let y = gauss_legendre(m).unwrap().affine_map(0.0, b).unwrap();
        let tensor = x.integrate(|u| y.integrate(|v| (-(u + v + t).powi(2)).exp()));
        let f = erfc_antiderivative;
        let closed = 0.5 / FRAC_1_SQRT_PI * (f(a + t) - f(t) - f(a + b + t) + f(b + t));
        prop_assert!((tensor - closed).abs() <= 1e-10, "{} vs {}", tensor, closed);
    }

    #[test]
    fn t_kernel_nonnegative(t in -20.0..20.0f64, x in -10.0..30.0f64, y in -10.0..30.0f64) {
        prop_assert!(t_shifted_closed(t, x, y) >= 0.0);
    }
}

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn factorization_holds(t in -8.0..2.0f64, gamma in 0.0..=1.0f64) {
        let gb = gamma_bar(gamma).unwrap();
        let m = nodes_for(t, 50);
        let (minus, plus) = det_pair(t, gb, m).unwrap();
        let direct = logdet_t(t, gb, m).unwrap();
        prop_assert!((minus + plus - direct).abs() <= 1e-10);
    }

    #[test]
    fn node_doubling_is_stable(t in -12.0..4.0f64, gamma in 0.05..=1.0f64) {
        let gb = gamma_bar(gamma).unwrap();
        let (m1, p1) = det_pair(t, gb, nodes_for(t, 50)).unwrap();
        let (m2, p2) = det_pair(t, gb, nodes_for(t, 100)).unwrap();
        prop_assert!((m1 - m2).abs() <= 1e-9 && (p1 - p2).abs() <= 1e-9);
        let d1 = logdet_t(t, gb, nodes_for(t, 50)).unwrap();
        let d2 = logdet_t(t, gb, nodes_for(t, 100)).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-9);
    }

    #[test]
    fn s_spectrum_in_unit_interval(t in -10.0..4.0f64) {
        let rule = nystrom_rule(nodes_for(t, 50), truncation_bound(t)).unwrap();
        let (x, w) = (rule.nodes(), rule.weights());
        let n = x.len();
        let sym = DMatrix::from_fn(n, n, |i, j| (w[i] * w[j]).sqrt() * s_shifted(t, x[i], x[j]));
        // symmetric, so the spectral radius is the top singular value; nalgebra's
        // symmetric eigensolver returns NaN once entries reach ~1e-240 (t > 3)
        let top = sym.singular_values().max();
        prop_assert!(top <= 1.0 + 1e-10, "{}", top);
    }

    #[test]
    fn cdf_monotone_and_bounded(t in -10.0..5.0f64, dt in 0.01..2.0f64, gamma in 0.0..=1.0f64, dg in 0.01..0.5f64) {
        let law = EdgeLaw::default();
        let p = law.cdf(t, gamma).unwrap().cdf;
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
        prop_assert!(law.cdf(t + dt, gamma).unwrap().cdf >= p - 1e-12);
        let more = (gamma + dg).min(1.0);
        prop_assert!(law.cdf(t, more).unwrap().cdf <= p + 1e-12);
    }

    #[test]
    fn cdf_forms_agree(t in -8.0..4.0f64, gamma in 0.0..=1.0f64) {
        let law = EdgeLaw::default();
        let a = law.cdf(t, gamma).unwrap().cdf;
        let b = law.cdf_via_mu(t, gamma).unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn mu_nonnegative_and_nonincreasing(t in -10.0..4.0f64, dt in 0.01..2.0f64, gb in 0.0..1.0f64) {
        let law = EdgeLaw::default();
        let here = law.mu(t, gb).unwrap();
        prop_assert!(here >= 0.0);
        prop_assert!(law.mu(t + dt, gb).unwrap() <= here + 1e-12);
    }

    #[test]
    fn full_retention_is_single_determinant(t in -8.0..4.0f64) {
        let direct = NystromSystem::build(KernelSpec::s(t), 1.0, nodes_for(t, 50))
            .unwrap()
            .log_det()
            .unwrap()
            .exp();
        prop_assert!((EdgeLaw::default().cdf(t, 1.0).unwrap().cdf - direct).abs() <= 1e-12);
    }

    #[test]
    fn c1_nondecreasing(gamma in 0.0..1.0f64, dg in 1e-4..0.5f64) {
        let next = (gamma + dg).min(1.0);
        prop_assert!(tails::c1(next).unwrap() >= tails::c1(gamma).unwrap());
    }

    #[test]
    fn coefficients_negative_and_bounded(n in 1usize..=100_000) {
        let a = tails::series_coefficient(n).unwrap();
        prop_assert!(a < 0.0);
        prop_assert!((n as f64).sqrt() * a.abs() < 4.0);
    }

    #[test]
    fn identity_checks_pass(t in -8.0..2.0f64, gamma in 0.05..=1.0f64) {
        let mut reports = identities::check_resolvent_identities(t, gamma).unwrap();
        reports.push(identities::check_factorization(t, gamma).unwrap());
        reports.push(identities::check_tau_forms(t, gamma).unwrap());
        reports.push(identities::check_tau_product(t, gamma).unwrap());
        reports.push(identities::check_generating_function(t, gamma).unwrap());
        for r in &reports {
            prop_assert!(r.passed(), "{:?}", r);
        }
    }

    #[test]
    fn contour_symmetric(a in 0.3..4.0f64, b in 0.3..4.0f64, omega in 0.3..2.0f64) {
        let ab = identities::check_gaussian_contour(a, b, omega).unwrap();
        let ba = identities::check_gaussian_contour(b, a, omega).unwrap();
        prop_assert!(ab.passed() && ba.passed());
        prop_assert!((ab.lhs - ba.lhs).abs() <= 1e-8 * ab.lhs.abs());
    }

    #[test]
    fn eigenvalues_pair_off(seed in any::<u64>(), n in 2usize..60) {
        let (mut rng, _) = mc::sample_streams(seed, 0);
        let m = mc::sample_matrix(n, &mut rng).unwrap();
        let ev = mc::eigenvalues(&m).unwrap();
        let scale = 1.0 + m.norm();
        let mut ims: Vec<f64> = ev.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        for (lo, hi) in ims.iter().zip(ims.iter().rev()) {
            prop_assert!((lo + hi).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn run_independent_of_execution(seed in any::<u64>(), gamma in 0.0..=1.0f64) {
        let cfg = McConfig { n: 12, gamma, num_samples: 30, seed };
        prop_assert_eq!(
            mc::run(cfg, Execution::Sequential).unwrap(),
            mc::run(cfg, Execution::Parallel).unwrap()
        );
    }
}
