//! Tail expansions of the edge law.
//!
//! Right tail: `P(t) = 1 - (gamma/4) erfc(t) + O(exp(-2t^2) / t)`.
//! Left tail: `P(t) ~ exp(c1 t + c0)` with
//!
//! * `c1 = Li_{3/2}(gb) / (2 sqrt(2 pi))`
//! * `c0 = ln(2 / (2 - gamma)) / 2 + (1 / 4pi) int_0^gb (Li_{1/2}(x)^2 - pi x / (1 - x)) dx / x`
//!
//! where `gb = gamma (2 - gamma)`. Expanding the integrand gives the series
//! `sum_n a_n gb^n / n` with `a_n = -pi + sum_{m=1}^{n-1} (m (n - m))^{-1/2}`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::refine_until;
use crate::specfun::{erfc, polylog, polylog_half_regular, power_tail_sum, PolylogOrder};

/// Default number of series terms.
pub const DEFAULT_SERIES_TERMS: usize = 20_000;

/// Truncation error the series must certify.
const SERIES_TOL: f64 = 1e-10;

const INTEGRAL_TOL: f64 = 1e-13;

fn check_gamma(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(gamma * (2.0 - gamma))
}

/// `1 - (gamma / 4) erfc(t)`.
pub fn right_tail(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(1.0 - 0.25 * gamma * erfc(t)?)
}

/// Slope of the log left tail.
pub fn c1(gamma: f64) -> Result<f64> {
    let gb = check_gamma(gamma)?;
    Ok(polylog(PolylogOrder::ThreeHalves, gb)? / (2.0 * (2.0 * PI).sqrt()))
}

/// Switch point between the two evaluations of the `c0` integrand.
const SPLIT: f64 = 0.8;

/// `1 / (-ln(1 - u)) - (1 - u) / u`, which tends to 1/2 at `u = 0`.
fn log_reciprocal_gap(u: f64) -> f64 {
    if u < 0.01 {
        // Gregory coefficients
        const G: [f64; 8] = [
            0.5,
            -1.0 / 12.0,
            -1.0 / 24.0,
            -19.0 / 720.0,
            -3.0 / 160.0,
            -863.0 / 60480.0,
            -275.0 / 24192.0,
            -33953.0 / 3628800.0,
        ];
        G.iter().rev().fold(0.0, |acc, g| acc * u + g)
    } else {
        1.0 / -(-u).ln_1p() - (1.0 - u) / u
    }
}

/// `(Li_{1/2}(x)^2 - pi x / (1 - x)) / x` at `x = 1 - u`, tending to `-pi`
/// at `x = 0`. Taking `u` as the argument keeps full relative precision in
/// `1 - x` near `x = 1`.
///
/// Above [`SPLIT`] the two terms both blow up like `pi / (1 - x)`; writing
/// `Li_{1/2} = sqrt(pi / -ln x) + r(x)` cancels them analytically.
fn c0_integrand(u: f64) -> Result<f64> {
    let x = 1.0 - u;
    if x < 1e-8 {
        // a_1 + a_2 x with a_2 = 1 - pi
        return Ok(-PI + (1.0 - PI) * x);
    }
    if x <= SPLIT {
        let li = polylog(PolylogOrder::Half, x)?;
        return Ok((li * li - PI * x / (1.0 - x)) / x);
    }
    let r = polylog_half_regular(x);
    let root = (-(-u).ln_1p()).sqrt();
    let gap = PI * log_reciprocal_gap(u);
    Ok((gap + 2.0 * PI.sqrt() * r / root + r * r) / x)
}

/// `c0` from the integral form.
///
/// The integrand has an inverse square root singularity at `x = 1`, so the
/// integral is taken in `s = sqrt(1 - x)`, where it is smooth. This also
/// covers `gamma = 1`.
pub fn c0_integral(gamma: f64) -> Result<f64> {
    let gb = check_gamma(gamma)?;
    if gb == 0.0 {
        return Ok(0.0);
    }
    let piece = |lo: f64, hi: f64| {
        refine_until(
            |rule| {
                let mapped = rule.affine_map(lo, hi)?;
                let mut sum = 0.0;
                for (&s, &w) in mapped.nodes().iter().zip(mapped.weights()) {
                    sum += w * 2.0 * s * c0_integrand(s * s)?;
                }
                Ok(sum)
            },
            16,
            INTEGRAL_TOL,
        )
        .map(|(v, _)| v)
    };
    let lower = (1.0 - gb).sqrt();
    let split = (1.0 - SPLIT).sqrt();
    let integral = if lower >= split {
        piece(lower, 1.0)?
    } else {
        piece(lower, split)? + piece(split, 1.0)?
    };
    Ok(0.5 * (2.0 / (2.0 - gamma)).ln() + integral / (4.0 * PI))
}

fn coefficient(n: usize) -> f64 {
    // pair m with n - m
    let nf = n as f64;
    let mut sum = 0.0;
    for m in 1..=(n - 1) / 2 {
        let mf = m as f64;
        sum += 1.0 / (mf * (nf - mf)).sqrt();
    }
    sum *= 2.0;
    if n.is_multiple_of(2) {
        sum += 2.0 / nf;
    }
    sum - PI
}

/// The single coefficient `a_n`, `n >= 1`.
pub fn series_coefficient(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Parameter("coefficients start at n = 1".into()));
    }
    Ok(coefficient(n))
}

fn compute_coefficients(n_max: usize) -> Vec<f64> {
    let indices: Vec<usize> = (1..=n_max).collect();
    crate::par::map(crate::par::Execution::default(), &indices, |&n| coefficient(n))
}

/// `a_1, ..., a_{n_max}`. The first [`DEFAULT_SERIES_TERMS`] are computed
/// once and shared; longer requests are computed on the spot.
pub fn series_coefficients(n_max: usize) -> std::borrow::Cow<'static, [f64]> {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    if n_max <= DEFAULT_SERIES_TERMS {
        let all = CACHE.get_or_init(|| compute_coefficients(DEFAULT_SERIES_TERMS));
        std::borrow::Cow::Borrowed(&all[..n_max])
    } else {
        std::borrow::Cow::Owned(compute_coefficients(n_max))
    }
}

/// Least-squares fit `a_n ~ c n^{-1/2} + d n^{-1} + e n^{-3/2}` over the
/// upper half of the available coefficients.
fn fit_coefficient_tail(a: &[f64]) -> [f64; 3] {
    let n_max = a.len();
    let rows: Vec<usize> = (n_max / 2..=n_max).collect();
    let design = nalgebra::DMatrix::from_fn(rows.len(), 3, |i, j| (rows[i] as f64).powf(-0.5 * (j as f64 + 1.0)));
    let rhs = nalgebra::DVector::from_fn(rows.len(), |i, _| a[rows[i] - 1]);
    let qr = design.clone().qr();
    let qtb = qr.q().transpose() * rhs;
    let sol = qr
        .r()
        .solve_upper_triangular(&qtb)
        .expect("power design matrix has full column rank");
    [sol[0], sol[1], sol[2]]
}

/// `c0` from the series form with `n_max` terms.
///
/// For `gb < 1` the remainder is bounded geometrically. At `gb = 1` the
/// coefficients decay only like `n^{-1/2}`; the remainder is then estimated
/// from a three-term power fit of the computed coefficients, summed in
/// closed form.
pub fn c0_series(gamma: f64, n_max: usize) -> Result<f64> {
    let gb = check_gamma(gamma)?;
    if n_max < 100 {
        return Err(Error::Parameter(format!("series needs at least 100 terms, got {n_max}")));
    }
    if gb == 0.0 {
        return Ok(0.0);
    }
    let a = series_coefficients(n_max);
    let mut sum = 0.0;
    let mut power = 1.0;
    for (i, &an) in a.iter().enumerate() {
        power *= gb;
        if power == 0.0 {
            break;
        }
        sum += an * power / (i + 1) as f64;
    }
    if gb < 1.0 {
        let nf = n_max as f64;
        let bound = PI * gb.powf(nf + 1.0) / ((nf + 1.0) * (1.0 - gb));
        if bound > SERIES_TOL {
            return Err(Error::Convergence {
                what: format!("c0 series at gamma_bar = {gb} needs more than {n_max} terms"),
                last: sum,
                previous: sum - a[n_max - 1] * gb.powf(nf) / nf,
            });
        }
    } else {
        let [c, d, e] = fit_coefficient_tail(&a);
        let from = n_max + 1;
        sum += c * power_tail_sum(1.5, from) + d * power_tail_sum(2.0, from) + e * power_tail_sum(2.5, from);
    }
    Ok(0.5 * (2.0 / (2.0 - gamma)).ln() + sum / (4.0 * PI))
}

/// `c0` by the series when it can certify its truncation, otherwise by the
/// integral.
pub fn c0(gamma: f64) -> Result<f64> {
    match c0_series(gamma, DEFAULT_SERIES_TERMS) {
        Err(Error::Convergence { .. }) => c0_integral(gamma),
        other => other,
    }
}

/// `exp(c1 t + c0)`.
pub fn left_tail(t: f64, gamma: f64) -> Result<f64> {
    Ok((c1(gamma)? * t + c0(gamma)?).exp())
}

/// Both left-tail constants with `c0` computed both ways.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TailCoefficients {
    pub gamma: f64,
    pub c1: f64,
    pub c0_integral: f64,
    pub c0_series: f64,
    pub n_terms: usize,
}

impl TailCoefficients {
    pub fn compute(gamma: f64, n_terms: usize) -> Result<TailCoefficients> {
        Ok(TailCoefficients {
            gamma,
            c1: c1(gamma)?,
            c0_integral: c0_integral(gamma)?,
            c0_series: c0_series(gamma, n_terms)?,
            n_terms,
        })
    }
}
