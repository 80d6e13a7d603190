//! The limiting law `P(t; gamma)` of the edge-shifted largest retained real
//! eigenvalue, and quantities derived from it.
//!
//! With `gb = gamma (2 - gamma)` and `a = sqrt(gb)`,
//!
//! `P(t) = A det(1 + a S_t) + B det(1 - a S_t)`,
//! `A = sqrt((1 - a) / (2 (2 - gamma)))`, `B = sqrt((1 + a) / (2 (2 - gamma)))`,
//!
//! where the determinants are taken on `L^2(0, inf)`. `mu` is the log ratio
//! of the two determinants.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fredholm::{nodes_for, NystromSystem};
use crate::kernels::KernelSpec;
use crate::par::{self, Execution};
use crate::quadrature::{gauss_legendre, DEFAULT_NODES};
use crate::tails;

/// `gamma (2 - gamma)`.
pub fn gamma_bar(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(gamma * (2.0 - gamma))
}

/// The law and its ingredients at one `(t, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeLawPoint {
    pub t: f64,
    pub gamma: f64,
    pub gamma_bar: f64,
    /// `log det(1 - a S_t)`
    pub logdet_minus: f64,
    /// `log det(1 + a S_t)`
    pub logdet_plus: f64,
    pub mu: f64,
    pub cdf: f64,
    pub pdf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub gamma: f64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// `mu_4 / sigma^4`
    pub kurtosis: f64,
    /// `mu_4 / sigma^4 - 3`
    pub excess_kurtosis: f64,
}

/// Largest order supported by [`EdgeLaw::mth_largest_cdf`].
pub const MAX_ORDER: usize = 4;

/// Upper end of the moment integrals.
pub const MOMENT_UPPER: f64 = 8.0;

/// Left truncation of the moment integrals is where the left tail drops to
/// this level.
pub const MOMENT_TAIL_LEVEL: f64 = 1e-14;

const FIT_NODES: usize = 12;
const FIT_DEGREE: usize = 8;
const FIT_LOWER: f64 = 0.75;

/// Evaluator carrying the discretization and execution settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeLaw {
    base_nodes: usize,
    exec: Execution,
}

impl Default for EdgeLaw {
    fn default() -> Self {
        EdgeLaw {
            base_nodes: DEFAULT_NODES,
            exec: Execution::default(),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    Ok(())
}

/// `(A, B)` weights of the `+` and `-` determinants.
fn mixture_weights(gamma: f64, gb: f64) -> (f64, f64) {
    let a = gb.sqrt();
    let denom = 2.0 * (2.0 - gamma);
    (((1.0 - a) / denom).sqrt(), ((1.0 + a) / denom).sqrt())
}

impl EdgeLaw {
    /// `base_nodes` is the Nyström node count on the shortest interval; see
    /// [`nodes_for`].
    pub fn new(base_nodes: usize) -> Result<EdgeLaw> {
        if base_nodes < 4 {
            return Err(Error::Parameter(format!("need at least 4 base nodes, got {base_nodes}")));
        }
        Ok(EdgeLaw {
            base_nodes,
            exec: Execution::default(),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> EdgeLaw {
        self.exec = exec;
        self
    }

    pub fn base_nodes(&self) -> usize {
        self.base_nodes
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    fn nodes(&self, t: f64) -> usize {
        nodes_for(t, self.base_nodes)
    }

    /// Both determinants, their `t`-derivatives, and `P`, `dP/dt`.
    pub fn cdf(&self, t: f64, gamma: f64) -> Result<EdgeLawPoint> {
        check_t(t)?;
        let gb = gamma_bar(gamma)?;
        if gb == 0.0 {
            return Ok(EdgeLawPoint {
                t,
                gamma,
                gamma_bar: 0.0,
                logdet_minus: 0.0,
                logdet_plus: 0.0,
                mu: 0.0,
                cdf: 1.0,
                pdf: 0.0,
            });
        }
        let a = gb.sqrt();
        let m = self.nodes(t);
        let minus = NystromSystem::build(KernelSpec::s(t), a, m)?;
        let plus = NystromSystem::build(KernelSpec::s(t), -a, m)?;
        let (lm, lp) = (minus.log_det()?, plus.log_det()?);
        let (wp, wm) = mixture_weights(gamma, gb);
        let (ep, em) = (wp * lp.exp(), wm * lm.exp());
        Ok(EdgeLawPoint {
            t,
            gamma,
            gamma_bar: gb,
            logdet_minus: lm,
            logdet_plus: lp,
            mu: lp - lm,
            cdf: ep + em,
            pdf: ep * plus.log_det_dt() + em * minus.log_det_dt(),
        })
    }

    pub fn pdf(&self, t: f64, gamma: f64) -> Result<f64> {
        Ok(self.cdf(t, gamma)?.pdf)
    }

    /// `log det(1 + a S_t) - log det(1 - a S_t)` with `a = sqrt(gamma_bar)`.
    pub fn mu(&self, t: f64, gamma_bar: f64) -> Result<f64> {
        check_t(t)?;
        if !(0.0..=1.0).contains(&gamma_bar) {
            return Err(Error::Domain(format!("gamma_bar must lie in [0, 1], got {gamma_bar}")));
        }
        if gamma_bar == 0.0 {
            return Ok(0.0);
        }
        let (minus, plus) = crate::fredholm::det_pair(t, gamma_bar, self.nodes(t))?;
        Ok(plus - minus)
    }

    /// `log det(1 - gb T_t)` from the closed-form `T_t`.
    pub fn logdet_t(&self, t: f64, gb: f64) -> Result<f64> {
        check_t(t)?;
        crate::fredholm::logdet_t(t, gb, self.nodes(t))
    }

    /// `P` rebuilt as `sqrt(det(1 - gb T_t))` times
    /// `sqrt((gamma - 1 - cosh mu + a sinh mu) / (gamma - 2))`.
    pub fn cdf_via_mu(&self, t: f64, gamma: f64) -> Result<f64> {
        check_t(t)?;
        let gb = gamma_bar(gamma)?;
        if gb == 0.0 {
            return Ok(1.0);
        }
        let mu = self.mu(t, gb)?;
        let det_t = self.logdet_t(t, gb)?.exp();
        let radicand = (gamma - 1.0 - mu.cosh() + gb.sqrt() * mu.sinh()) / (gamma - 2.0);
        if radicand < 0.0 {
            return Err(Error::Consistency(format!(
                "negative radicand {radicand:e} at t = {t}, gamma = {gamma}"
            )));
        }
        Ok(det_t.sqrt() * radicand.sqrt())
    }

    /// `d/dt log det(1 - a T_t)`.
    fn logdet_t_dt(&self, t: f64, a: f64) -> Result<f64> {
        let sys = NystromSystem::build(KernelSpec::t(t), a, self.nodes(t))?;
        sys.log_det()?;
        Ok(sys.log_det_dt())
    }

    /// `|y(x; a)|` from `|y(t/2; a)|^2 = -4 d^2/dt^2 log det(1 - a T_t)` at
    /// `t = 2x`, with the second derivative by Richardson-extrapolated
    /// central differences of the analytic first derivative.
    pub fn y_abs(&self, x: f64, a: f64) -> Result<f64> {
        self.y_abs_with_step(x, a, 2e-3)
    }

    /// [`EdgeLaw::y_abs`] with an explicit difference step in `t`.
    pub fn y_abs_with_step(&self, x: f64, a: f64, h: f64) -> Result<f64> {
        check_t(x)?;
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::Domain(format!("a must lie in [0, 1], got {a}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parameter(format!("difference step must be positive, got {h}")));
        }
        if a == 0.0 {
            return Ok(0.0);
        }
        let t = 2.0 * x;
        let offsets = [h, -h, 0.5 * h, -0.5 * h];
        let d = par::try_map(self.exec, &offsets, |&dt| self.logdet_t_dt(t + dt, a))?;
        let coarse = (d[0] - d[1]) / (2.0 * h);
        let fine = (d[2] - d[3]) / h;
        let second = (4.0 * fine - coarse) / 3.0;
        let square = -4.0 * second;
        if square >= 0.0 {
            return Ok(square.sqrt());
        }
        // round-off in the differences
        let noise = 1e-10 * d.iter().map(|v| v.abs()).fold(0.0, f64::max) / h;
        if -square <= 4.0 * noise {
            Ok(0.0)
        } else {
            Err(Error::Consistency(format!(
                "second derivative of log det has the wrong sign ({second:e}) at t = {t}"
            )))
        }
    }

    /// `E((t, inf); lambda) = sum_m E(m; (t, inf)) (1 - lambda)^m`, which is
    /// `P(t; lambda)`.
    pub fn generating_function(&self, t: f64, lambda: f64) -> Result<f64> {
        Ok(self.cdf(t, lambda)?.cdf)
    }

    /// `lambda`-derivatives of the generating function at `lambda = 1`, orders
    /// `0..=max_order`, from a least-squares Chebyshev fit of the given degree
    /// on Chebyshev-Lobatto points in `[0.75, 1]`.
    pub fn generating_derivatives(&self, t: f64, max_order: usize, degree: usize) -> Result<Vec<f64>> {
        check_t(t)?;
        if degree + 1 > FIT_NODES || max_order > degree {
            return Err(Error::Parameter(format!(
                "fit of degree {degree} on {FIT_NODES} points cannot give order {max_order}"
            )));
        }
        let half = 0.5 * (1.0 - FIT_LOWER);
        let mid = 1.0 - half;
        let us: Vec<f64> = (0..FIT_NODES)
            .map(|j| (PI * j as f64 / (FIT_NODES - 1) as f64).cos())
            .collect();
        let values = par::try_map(self.exec, &us, |&u| self.generating_function(t, mid + half * u))?;
        let design = nalgebra::DMatrix::from_fn(FIT_NODES, degree + 1, |i, k| chebyshev(k, us[i]));
        let rhs = nalgebra::DVector::from_column_slice(&values);
        let svd = design.clone().svd(true, true);
        let coef = svd
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::Consistency(format!("generating-function fit failed: {e}")))?;
        let residual = (&design * &coef - &rhs).norm() / (FIT_NODES as f64).sqrt();
        if !(residual <= 1e-9) {
            return Err(Error::Consistency(format!(
                "generating-function fit residual {residual:e} at t = {t}"
            )));
        }
        let mut out = Vec::with_capacity(max_order + 1);
        let mut scale = 1.0;
        for k in 0..=max_order {
            let d: f64 = (0..=degree).map(|n| coef[n] * chebyshev_derivative_at_one(n, k)).sum();
            out.push(d * scale);
            scale /= half;
        }
        Ok(out)
    }

    /// `F_1(t), ..., F_m(t)`: the distribution functions of the largest
    /// through `m`-th largest retained eigenvalue at full retention.
    pub fn mth_largest_cdfs(&self, m: usize, t: f64) -> Result<Vec<f64>> {
        if !(1..=MAX_ORDER).contains(&m) {
            return Err(Error::Parameter(format!("order must lie in 1..={MAX_ORDER}, got {m}")));
        }
        let first = self.generating_function(t, 1.0)?;
        let mut out = vec![first];
        if m == 1 {
            return Ok(out);
        }
        let d = self.generating_derivatives(t, m - 1, FIT_DEGREE)?;
        let mut f = first;
        let mut factorial = 1.0;
        for (k, dk) in d.iter().enumerate().take(m).skip(1) {
            factorial *= k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            f += sign * dk / factorial;
            out.push(f.clamp(0.0, 1.0));
        }
        Ok(out)
    }

    pub fn mth_largest_cdf(&self, m: usize, t: f64) -> Result<f64> {
        Ok(*self.mth_largest_cdfs(m, t)?.last().expect("at least one order"))
    }

    /// Points of the law on a grid, in input order.
    pub fn curve(&self, ts: &[f64], gamma: f64) -> Result<Vec<EdgeLawPoint>> {
        par::try_map(self.exec, ts, |&t| self.cdf(t, gamma))
    }

    /// Lower end of the moment integrals: where `exp(c1 t + c0)` equals
    /// [`MOMENT_TAIL_LEVEL`].
    pub fn moment_lower_end(gamma: f64) -> Result<f64> {
        let c1 = tails::c1(gamma)?;
        let c0 = tails::c0(gamma)?;
        Ok(((MOMENT_TAIL_LEVEL.ln() - c0) / c1).min(-16.0))
    }

    /// Moments of `P(.; gamma)` by Gauss-Legendre panels over
    /// `[moment_lower_end, 8]`: width 2 on `[-16, 8]`, at most 16 below.
    pub fn moments(&self, gamma: f64) -> Result<MomentSummary> {
        let gb = gamma_bar(gamma)?;
        if gb == 0.0 {
            return Err(Error::Domain("gamma = 0 gives a point mass at -inf; no moments".into()));
        }
        let lower = Self::moment_lower_end(gamma)?;
        let mut breaks: Vec<f64> = Vec::new();
        let tail_panels = ((-16.0 - lower) / 16.0).ceil() as usize;
        for k in 0..tail_panels {
            breaks.push(lower + (-16.0 - lower) * k as f64 / tail_panels as f64);
        }
        let mut b = -16.0;
        while b < MOMENT_UPPER + 1e-9 {
            breaks.push(b);
            b += 2.0;
        }
        let core = gauss_legendre(16)?;
        let tail = gauss_legendre(12)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (i, pair) in breaks.windows(2).enumerate() {
            let rule = if i < tail_panels { &tail } else { &core };
            let mapped = rule.affine_map(pair[0], pair[1])?;
            nodes.extend_from_slice(mapped.nodes());
            weights.extend_from_slice(mapped.weights());
        }
        let density = par::try_map(self.exec, &nodes, |&t| self.pdf(t, gamma))?;
        let central = |center: f64, k: i32| -> f64 {
            nodes
                .iter()
                .zip(&weights)
                .zip(&density)
                .map(|((&t, &w), &p)| w * (t - center).powi(k) * p)
                .sum()
        };
        let mean = central(0.0, 1);
        let variance = central(mean, 2);
        if !(variance > 0.0) {
            return Err(Error::Consistency(format!("nonpositive variance {variance:e}")));
        }
        let sd = variance.sqrt();
        let skewness = central(mean, 3) / (sd * variance);
        let kurtosis = central(mean, 4) / (variance * variance);
        Ok(MomentSummary {
            gamma,
            mean,
            variance,
            skewness,
            kurtosis,
            excess_kurtosis: kurtosis - 3.0,
        })
    }
}

/// Chebyshev polynomial `T_n(u)`.
fn chebyshev(n: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * u * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_n^{(k)}(1) = prod_{j<k} (n^2 - j^2) / (2j + 1)`.
fn chebyshev_derivative_at_one(n: usize, k: usize) -> f64 {
    let nf = (n * n) as f64;
    (0..k).map(|j| (nf - (j * j) as f64) / (2 * j + 1) as f64).product()
}

/// [`EdgeLaw::cdf`] with default settings.
pub fn cdf(t: f64, gamma: f64) -> Result<EdgeLawPoint> {
    EdgeLaw::default().cdf(t, gamma)
}

/// [`EdgeLaw::pdf`] with default settings.
pub fn pdf(t: f64, gamma: f64) -> Result<f64> {
    EdgeLaw::default().pdf(t, gamma)
}

/// [`EdgeLaw::mu`] with default settings.
pub fn mu(t: f64, gamma_bar: f64) -> Result<f64> {
    EdgeLaw::default().mu(t, gamma_bar)
}

/// [`EdgeLaw::cdf_via_mu`] with default settings.
pub fn cdf_via_mu(t: f64, gamma: f64) -> Result<f64> {
    EdgeLaw::default().cdf_via_mu(t, gamma)
}

/// [`EdgeLaw::y_abs`] with default settings.
pub fn y_abs(x: f64, a: f64) -> Result<f64> {
    EdgeLaw::default().y_abs(x, a)
}

/// [`EdgeLaw::generating_function`] with default settings.
pub fn generating_function(t: f64, lambda: f64) -> Result<f64> {
    EdgeLaw::default().generating_function(t, lambda)
}

/// [`EdgeLaw::mth_largest_cdf`] with default settings.
pub fn mth_largest_cdf(m: usize, t: f64) -> Result<f64> {
    EdgeLaw::default().mth_largest_cdf(m, t)
}

/// [`EdgeLaw::moments`] with default settings.
pub fn moments(gamma: f64) -> Result<MomentSummary> {
    EdgeLaw::default().moments(gamma)
}
