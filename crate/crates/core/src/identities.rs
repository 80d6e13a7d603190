//! Numerical checks of operator and integral identities behind the edge law.
//!
//! Notation, on the full line unless stated otherwise:
//!
//! * `g(x) = exp(-x^2) / sqrt(pi)`, `G(x) = int_{-inf}^x g`
//! * `T(x, y) = int_0^inf g(x + u) g(y + u) du`, so `T_t(x, y) = T(x + t, y + t)`
//! * `chi_t` restricts to `[t, inf)`
//! * `F = (1 - gb T chi_t)^{-1} g` and `R = (1 - gb T chi_t)^{-1} - 1`
//!
//! Functions supported on `[t, inf)` are solved by Nyström on the half-line in
//! shifted coordinates and continued to `x < t` through the Nyström
//! interpolant, which only needs `T` off the half-line.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::edgelaw::{gamma_bar, EdgeLaw};
use crate::error::{Error, Result};
use crate::fredholm::{det_pair, logdet_t, nodes_for, nystrom_rule, truncation_bound, NystromSystem};
use crate::kernels::{t_shifted_closed, KernelSpec};
use crate::par::{self, Execution};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::specfun::erfc_raw;

/// Base node count for the half-line solves; see [`nodes_for`].
pub const IDENTITY_NODES: usize = 60;

/// How far below the edge the off-half-line integrals are carried.
const LEFT_REACH: f64 = 14.0;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// Largest `rel_err` the check is expected to meet.
    pub tolerance: f64,
    pub params: BTreeMap<String, f64>,
}

impl IdentityReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, tolerance: f64, params: &[(&str, f64)]) -> Self {
        let abs_err = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale == 0.0 { 0.0 } else { abs_err / scale };
        IdentityReport {
            name: name.to_string(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tolerance,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.rel_err <= self.tolerance
    }
}

fn g(x: f64) -> f64 {
    FRAC_1_SQRT_PI * (-x * x).exp()
}

/// `G(x)`
fn g_cdf(x: f64) -> f64 {
    0.5 * erfc_raw(-x)
}

/// `1 - G(x)`
fn g_sf(x: f64) -> f64 {
    0.5 * erfc_raw(x)
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must be finite, got {t}")))
    }
}

/// Composite 20-point Gauss-Legendre rule on `(a, b)` with panels of width
/// at most `width`.
fn panel_rule(a: f64, b: f64, width: f64) -> Result<QuadratureRule> {
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=panels).map(|k| a + (b - a) * k as f64 / panels as f64).collect();
    gauss_legendre(20)?.composite(&breaks)
}

/// `det(1 - gb T_t)` against `det(1 - a S_t) det(1 + a S_t)`.
pub fn check_factorization(t: f64, gamma: f64) -> Result<IdentityReport> {
    check_t(t)?;
    let gb = gamma_bar(gamma)?;
    let m = nodes_for(t, IDENTITY_NODES);
    let lhs = logdet_t(t, gb, m)?.exp();
    let (minus, plus) = det_pair(t, gb, m)?;
    let rhs = (minus + plus).exp();
    Ok(IdentityReport::new(
        "factorization",
        lhs,
        rhs,
        1e-10,
        &[("t", t), ("gamma", gamma)],
    ))
}

/// Resolvent of `gb T_t` on the half-line together with the solution `F`.
struct HalfLineResolvent {
    t: f64,
    sys: NystromSystem,
    /// `F(t + x)` at the nodes
    f: Vec<f64>,
}

impl HalfLineResolvent {
    fn new(t: f64, gb: f64) -> Result<Self> {
        let sys = NystromSystem::build(KernelSpec::t(t), gb, nodes_for(t, IDENTITY_NODES))?;
        sys.log_det()?;
        let f = sys.resolvent_apply(|x| g(x + t));
        Ok(HalfLineResolvent { t, sys, f })
    }

    /// `int_t^inf w(x) F(x) dx`
    fn weighted_integral<W: Fn(f64) -> f64>(&self, weight: W) -> f64 {
        let rule = self.sys.rule();
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .zip(&self.f)
            .map(|((&x, &w), &f)| w * weight(x + self.t) * f)
            .sum()
    }

    /// `int_{-inf}^t` of a half-line solution continued below the edge.
    fn left_integral<R: Fn(f64) -> f64>(&self, values: &[f64], rhs: R) -> Result<f64> {
        let rule = panel_rule(-LEFT_REACH, 0.0, 1.0)?;
        Ok(rule.integrate(|x| self.sys.interpolate(values, x, rhs(x))))
    }
}

/// The four resolvent identities, in order:
///
/// 1. `((1 - gb T chi_t)^{-1} G)(t) = int_{-inf}^t F`
/// 2. `int_t^inf R(x, t) dx = gb int_t^inf (1 - G) F`
/// 3. `int_{-inf}^t R(x, t) dx = gb int_t^inf G F`
/// 4. `1 + int_t^inf R(x, t) dx = int F`
pub fn check_resolvent_identities(t: f64, gamma: f64) -> Result<Vec<IdentityReport>> {
    check_t(t)?;
    let gb = gamma_bar(gamma)?;
    let res = HalfLineResolvent::new(t, gb)?;
    let sys = &res.sys;
    let params = [("t", t), ("gamma", gamma)];

    // R(., t) = (1 - gb T chi_t)^{-1} gb T(., t)
    let column = |x: f64| gb * t_shifted_closed(t, x, 0.0);
    let r = sys.resolvent_apply(column);
    let r_right: f64 = sys.rule().weights().iter().zip(&r).map(|(w, v)| w * v).sum();
    let r_left = res.left_integral(&r, column)?;

    let f_left = res.left_integral(&res.f, |x| g(x + t))?;
    let f_right = res.weighted_integral(|_| 1.0);

    let h = sys.resolvent_apply(|x| g_cdf(x + t));
    let h_edge = sys.interpolate(&h, 0.0, g_cdf(t));

    Ok(vec![
        IdentityReport::new("resolvent_cdf_at_edge", h_edge, f_left, 1e-8, &params),
        IdentityReport::new(
            "resolvent_right_mass",
            r_right,
            gb * res.weighted_integral(g_sf),
            1e-8,
            &params,
        ),
        IdentityReport::new(
            "resolvent_left_mass",
            r_left,
            gb * res.weighted_integral(g_cdf),
            1e-8,
            &params,
        ),
        IdentityReport::new("resolvent_total_mass", 1.0 + r_right, f_left + f_right, 1e-8, &params),
    ])
}

/// `tau_1 = 1 + a int_t^inf [1 + a (1 - G)] F` and
/// `tau_2 = 1 - a int_t^inf [1 - a (1 - G)] F` with `a = sqrt(gb)`.
fn tau_pair(t: f64, gb: f64) -> Result<(f64, f64)> {
    if gb == 0.0 {
        return Ok((1.0, 1.0));
    }
    let res = HalfLineResolvent::new(t, gb)?;
    let a = gb.sqrt();
    let mass = res.weighted_integral(|_| 1.0);
    let tail = res.weighted_integral(g_sf);
    Ok((1.0 + a * mass + gb * tail, 1.0 - a * mass + gb * tail))
}

/// `tau_1` from the resolvent of `T` against `exp(mu)` from the two
/// `S_t` determinants. `params["product_defect"]` holds `|tau_1 tau_2 - 1|`.
pub fn check_tau_forms(t: f64, gamma: f64) -> Result<IdentityReport> {
    check_t(t)?;
    let gb = gamma_bar(gamma)?;
    let (tau1, tau2) = tau_pair(t, gb)?;
    let (minus, plus) = det_pair(t, gb, nodes_for(t, IDENTITY_NODES))?;
    let tolerance = if t > -6.0 { 1e-8 } else { 1e-7 };
    Ok(IdentityReport::new(
        "tau_forms",
        tau1,
        (plus - minus).exp(),
        tolerance,
        &[
            ("t", t),
            ("gamma", gamma),
            ("tau2", tau2),
            ("product_defect", (tau1 * tau2 - 1.0).abs()),
        ],
    ))
}

/// `tau_1 tau_2 = 1`.
pub fn check_tau_product(t: f64, gamma: f64) -> Result<IdentityReport> {
    check_t(t)?;
    let gb = gamma_bar(gamma)?;
    let (tau1, tau2) = tau_pair(t, gb)?;
    Ok(IdentityReport::new(
        "tau_product",
        tau1 * tau2,
        1.0,
        1e-10,
        &[("t", t), ("gamma", gamma)],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Interval {
    /// `(0, inf)`
    PositiveHalf,
    /// `(-inf, 0)`
    NegativeHalf,
}

/// Powers of `T chi_t` discretized on the half-line, kept as explicit dense
/// matrices.
struct KernelPowers {
    t: f64,
    upper: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `T_t(x_i, x_j) w_j`
    step: DMatrix<f64>,
}

impl KernelPowers {
    fn new(t: f64) -> Result<Self> {
        let upper = truncation_bound(t);
        let rule = nystrom_rule(nodes_for(t, IDENTITY_NODES), upper)?;
        let nodes = rule.nodes().to_vec();
        let weights = rule.weights().to_vec();
        let n = nodes.len();
        let step = DMatrix::from_fn(n, n, |i, j| t_shifted_closed(t, nodes[i], nodes[j]) * weights[j]);
        Ok(KernelPowers { t, upper, nodes, weights, step })
    }

    fn power(&self, p: usize) -> DMatrix<f64> {
        let n = self.nodes.len();
        let mut out = DMatrix::identity(n, n);
        for _ in 0..p {
            out = &out * &self.step;
        }
        out
    }

    fn column<F: Fn(f64) -> f64>(&self, f: F) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_iterator(self.nodes.len(), self.nodes.iter().map(|&x| f(x)))
    }

    /// Kernel of `(T chi_t)^k` at `(t + x, t + y)`, given `M^{k-2}`.
    fn kernel(&self, k: usize, inner: &DMatrix<f64>, x: f64, y: f64) -> f64 {
        let t = self.t;
        if k == 1 {
            return t_shifted_closed(t, x, y);
        }
        let right = self.column(|v| t_shifted_closed(t, v, y));
        let moved = inner * right;
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(moved.iter())
            .map(|((&v, &w), &c)| t_shifted_closed(t, x, v) * w * c)
            .sum()
    }
}

fn check_power(k: usize, gamma_bar: f64) -> Result<f64> {
    if !(1..=3).contains(&k) {
        return Err(Error::Parameter(format!("power k must lie in 1..=3, got {k}")));
    }
    if !(0.0..=1.0).contains(&gamma_bar) {
        return Err(Error::Domain(format!("gamma_bar must lie in [0, 1], got {gamma_bar}")));
    }
    Ok(gamma_bar.powi(k as i32))
}

/// `int_I (T chi_t)^k (x + t, t) dx = int_t^inf Phi(u) ((T chi_t)^{k-1} g)(u) du`
/// with `Phi(u) = int_I g(u + v) dv`, both sides scaled by `gb^k`.
pub fn check_power_half_line(k: usize, t: f64, gamma_bar: f64, interval: Interval) -> Result<IdentityReport> {
    check_t(t)?;
    let scale = check_power(k, gamma_bar)?;
    let ops = KernelPowers::new(t)?;
    let inner = ops.power(k.saturating_sub(2));
    let (lo, hi) = match interval {
        Interval::PositiveHalf => (0.0, ops.upper),
        Interval::NegativeHalf => (-LEFT_REACH, 0.0),
    };
    let lhs = panel_rule(lo, hi, 1.0)?.integrate(|x| ops.kernel(k, &inner, x, 0.0));

    let pushed = ops.power(k - 1) * ops.column(|x| g(x + t));
    let phi = |u: f64| match interval {
        Interval::PositiveHalf => g_sf(u),
        Interval::NegativeHalf => g_cdf(u),
    };
    let rhs: f64 = ops
        .nodes
        .iter()
        .zip(&ops.weights)
        .zip(pushed.iter())
        .map(|((&x, &w), &v)| w * phi(x + t) * v)
        .sum();
    let name = match interval {
        Interval::PositiveHalf => "power_edge_column_right",
        Interval::NegativeHalf => "power_edge_column_left",
    };
    Ok(IdentityReport::new(
        name,
        scale * lhs,
        scale * rhs,
        1e-6,
        &[("k", k as f64), ("t", t), ("gamma_bar", gamma_bar)],
    ))
}

/// `int_R ((T chi_t)^k g)(x) dx = int_0^inf (T chi_t)^k (t, u + t) du`, both
/// sides scaled by `gb^k`.
pub fn check_power_edge_row(k: usize, t: f64, gamma_bar: f64) -> Result<IdentityReport> {
    check_t(t)?;
    let scale = check_power(k, gamma_bar)?;
    let ops = KernelPowers::new(t)?;
    let pushed = ops.power(k - 1) * ops.column(|x| g(x + t));
    let lhs = panel_rule(-LEFT_REACH, ops.upper, 1.0)?.integrate(|x| {
        ops.nodes
            .iter()
            .zip(&ops.weights)
            .zip(pushed.iter())
            .map(|((&v, &w), &p)| t_shifted_closed(t, x, v) * w * p)
            .sum::<f64>()
    });
    let inner = ops.power(k.saturating_sub(2));
    let rhs = panel_rule(0.0, ops.upper, 1.0)?.integrate(|u| ops.kernel(k, &inner, 0.0, u));
    Ok(IdentityReport::new(
        "power_total_mass",
        scale * lhs,
        scale * rhs,
        1e-6,
        &[("k", k as f64), ("t", t), ("gamma_bar", gamma_bar)],
    ))
}

/// Largest node count per axis for the contour integral.
const CONTOUR_MAX_NODES: usize = 40_000;

/// `int_{R + i omega} int_R exp(-a l^2 / 2 - b s^2 / 2) / (s - l)^2 ds dl`
/// against `-2 pi sqrt(ab) / (a + b)`. The imaginary part of the quadrature
/// is reported in `params["imag"]`.
pub fn check_gaussian_contour(a: f64, b: f64, omega: f64) -> Result<IdentityReport> {
    for (name, v) in [("a", a), ("b", b), ("omega", omega)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let reach = 12.0 / a.min(b).sqrt();
    // the integrand has a pole at distance omega from the real s-line
    let width = omega.min(0.5);
    let rule = panel_rule(-reach, reach, width)?;
    if rule.len() > CONTOUR_MAX_NODES {
        return Err(Error::Parameter(format!(
            "omega = {omega} needs more than {CONTOUR_MAX_NODES} nodes per axis"
        )));
    }
    let nodes = rule.nodes();
    let weights = rule.weights();
    let s_factor: Vec<f64> = nodes.iter().zip(weights).map(|(&s, &w)| w * (-0.5 * b * s * s).exp()).collect();
    let rows = par::map(Execution::default(), nodes, |&x| {
        // 1 / (s - x - i omega)^2 = (d + i omega)^2 / |d - i omega|^4, d = s - x
        let mut re = 0.0;
        let mut im = 0.0;
        for (&s, &f) in nodes.iter().zip(&s_factor) {
            let d = s - x;
            let q = d * d + omega * omega;
            let q2 = q * q;
            re += f * (d * d - omega * omega) / q2;
            im += f * 2.0 * d * omega / q2;
        }
        // exp(-a (x + i omega)^2 / 2)
        let mag = (-0.5 * a * (x * x - omega * omega)).exp();
        let (sin, cos) = (-a * x * omega).sin_cos();
        (mag * (cos * re - sin * im), mag * (cos * im + sin * re))
    });
    let (mut re, mut im) = (0.0, 0.0);
    for (w, (r, i)) in weights.iter().zip(rows) {
        re += w * r;
        im += w * i;
    }
    let rhs = -2.0 * PI * (a * b).sqrt() / (a + b);
    Ok(IdentityReport::new(
        "gaussian_contour",
        re,
        rhs,
        1e-8,
        &[("a", a), ("b", b), ("omega", omega), ("imag", im)],
    ))
}

/// `E((t, inf); lambda)` from the determinant combination against the form
/// built from `det(1 - lb T_t)`, `mu` and the radical, `lb = lambda (2 - lambda)`.
pub fn check_generating_function(t: f64, lambda: f64) -> Result<IdentityReport> {
    let law = EdgeLaw::default();
    let lhs = law.generating_function(t, lambda)?;
    let rhs = law.cdf_via_mu(t, lambda)?;
    Ok(IdentityReport::new(
        "generating_function",
        lhs,
        rhs,
        1e-9,
        &[("t", t), ("lambda", lambda)],
    ))
}

pub const DEFAULT_T_GRID: [f64; 5] = [-8.0, -4.0, -2.0, 0.0, 2.0];
pub const DEFAULT_GAMMA_GRID: [f64; 4] = [0.2, 0.5, 0.8, 1.0];
pub const POWER_T_GRID: [f64; 3] = [-2.0, 0.0, 2.0];
pub const CONTOUR_CASES: [(f64, f64, f64); 6] = [
    (1.0, 1.0, 1.0),
    (2.0, 1.0, 0.5),
    (3.0, 0.5, 0.5),
    (1.0, 1.0, 0.25),
    (1.0, 2.0, 0.5),
    (0.5, 3.0, 1.0),
];

#[derive(Debug, Clone, Copy)]
enum Job {
    Factorization(f64, f64),
    Resolvent(f64, f64),
    Tau(f64, f64),
    TauProduct(f64, f64),
    Generating(f64, f64),
    PowerHalfLine(usize, f64, Interval),
    PowerEdgeRow(usize, f64),
    Contour(f64, f64, f64),
}

fn run_job(job: &Job) -> Result<Vec<IdentityReport>> {
    Ok(match *job {
        Job::Factorization(t, g) => vec![check_factorization(t, g)?],
        Job::Resolvent(t, g) => check_resolvent_identities(t, g)?,
        Job::Tau(t, g) => vec![check_tau_forms(t, g)?],
        Job::TauProduct(t, g) => vec![check_tau_product(t, g)?],
        Job::Generating(t, g) => vec![check_generating_function(t, g)?],
        Job::PowerHalfLine(k, t, i) => vec![check_power_half_line(k, t, 1.0, i)?],
        Job::PowerEdgeRow(k, t) => vec![check_power_edge_row(k, t, 1.0)?],
        Job::Contour(a, b, w) => vec![check_gaussian_contour(a, b, w)?],
    })
}

/// Every check over the default grid, in a fixed order.
pub fn run_default_grid(exec: Execution) -> Result<Vec<IdentityReport>> {
    let mut jobs = Vec::new();
    for &t in &DEFAULT_T_GRID {
        for &g in &DEFAULT_GAMMA_GRID {
            jobs.push(Job::Factorization(t, g));
            jobs.push(Job::Resolvent(t, g));
            jobs.push(Job::Tau(t, g));
            jobs.push(Job::TauProduct(t, g));
            jobs.push(Job::Generating(t, g));
        }
    }
    for &t in &POWER_T_GRID {
        for k in 1..=3 {
            jobs.push(Job::PowerHalfLine(k, t, Interval::PositiveHalf));
            jobs.push(Job::PowerHalfLine(k, t, Interval::NegativeHalf));
            jobs.push(Job::PowerEdgeRow(k, t));
        }
    }
    for &(a, b, w) in &CONTOUR_CASES {
        jobs.push(Job::Contour(a, b, w));
    }
    let nested = par::try_map(exec, &jobs, run_job)?;
    Ok(nested.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_pass(r: &IdentityReport, tol: f64) {
        assert!(r.rel_err <= tol, "{}: {} vs {} ({:e}) {:?}", r.name, r.lhs, r.rhs, r.rel_err, r.params);
    }

    #[test]
    fn report_errors() {
        let r = IdentityReport::new("x", 2.0, 1.5, 0.1, &[]);
        assert_eq!(r.abs_err, 0.5);
        assert_eq!(r.rel_err, 0.25);
        assert!(!r.passed());
        assert_eq!(IdentityReport::new("z", 0.0, 0.0, 0.0, &[]).rel_err, 0.0);
    }

    #[test]
    fn factorization_examples() {
        let r = check_factorization(1.0, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert_pass(&check_factorization(0.0, 1.0).unwrap(), 1e-10);
        assert_pass(&check_factorization(-6.0, 0.5).unwrap(), 1e-10);
    }

    #[test]
    fn resolvent_examples() {
        let zero = check_resolvent_identities(0.5, 0.0).unwrap();
        assert!((zero[3].rhs - 1.0).abs() < 1e-14 && zero[3].lhs == 1.0);
        for (t, g) in [(0.0, 0.8), (-4.0, 0.3)] {
            let reports = check_resolvent_identities(t, g).unwrap();
            assert_eq!(reports.len(), 4);
            for r in &reports {
                assert_pass(r, 1e-8);
            }
        }
    }

    #[test]
    fn tau_examples() {
        let r = check_tau_forms(0.0, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.params["tau2"]), (1.0, 1.0, 1.0));
        let r = check_tau_forms(0.0, 0.6).unwrap();
        assert_pass(&r, 1e-8);
        assert!(r.params["product_defect"] <= 1e-10);
        assert_pass(&check_tau_forms(-8.0, 0.9).unwrap(), 1e-7);
    }

    #[test]
    fn power_examples() {
        assert_pass(&check_power_half_line(1, 0.0, 0.7, Interval::PositiveHalf).unwrap(), 1e-6);
        assert_pass(&check_power_half_line(2, -2.0, 0.7, Interval::NegativeHalf).unwrap(), 1e-6);
        assert_pass(&check_power_edge_row(3, 0.0, 0.7).unwrap(), 1e-6);
        let r = check_power_half_line(2, 0.0, 0.0, Interval::PositiveHalf).unwrap();
        assert_eq!((r.lhs, r.rhs, r.rel_err), (0.0, 0.0, 0.0));
        assert!(matches!(check_power_half_line(4, 0.0, 0.5, Interval::PositiveHalf), Err(Error::Parameter(_))));
    }

    #[test]
    fn contour_examples() {
        let r = check_gaussian_contour(1.0, 1.0, 1.0).unwrap();
        assert!((r.rhs + PI).abs() < 1e-15);
        assert_pass(&r, 1e-8);
        let r = check_gaussian_contour(2.0, 1.0, 0.5).unwrap();
        assert!((r.rhs + 2.0 * PI * 2f64.sqrt() / 3.0).abs() < 1e-14);
        assert_pass(&r, 1e-8);
        assert!(r.params["imag"].abs() < 1e-8);
        let swapped = check_gaussian_contour(1.0, 2.0, 0.5).unwrap();
        assert!((swapped.lhs - r.lhs).abs() < 1e-8);
        assert!(matches!(check_gaussian_contour(1.0, -1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn default_grid_passes() {
        let reports = run_default_grid(Execution::default()).unwrap();
        assert_eq!(reports.len(), 20 * 8 + 27 + CONTOUR_CASES.len());
        for r in &reports {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn generating_function_example() {
        assert_pass(&check_generating_function(-1.0, 0.7).unwrap(), 1e-9);
    }
}
