//! Scalar special functions used by the tail expansions.
//!
//! `erfc` follows W. J. Cody's rational Chebyshev approximations (three
//! intervals, exponential factor split to avoid cancellation in `exp(-x^2)`).
//! The polylogarithm is restricted to the two half-integer orders the left
//! tail needs and to real arguments in `[0, 1]`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

// erf on |x| <= 0.46875
const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
const ERF_B: [f64; 4] = [
    23.601_290_952_344_122,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_171,
];
// erfc on 0.46875 < x <= 4
const ERFC_C: [f64; 9] = [
    0.564_188_496_988_670_1,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_1,
    881.952_221_241_769,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_5,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const ERFC_D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_6,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];
// erfc on x > 4, in powers of 1/x^2
const ERFC_P: [f64; 6] = [
    0.305_326_634_961_232_36,
    0.360_344_899_949_804_45,
    0.125_781_726_111_229_26,
    0.016_083_785_148_742_275,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_097,
];
const ERFC_Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

const ERFC_SMALL: f64 = 0.468_75;
const ERFC_BIG: f64 = 26.543;

/// `exp(-y^2)` evaluated as a product so the rounding of `y^2` does not
/// leak into the result for large `y`.
fn exp_neg_square(y: f64) -> f64 {
    let head = (y * 16.0).trunc() / 16.0;
    (-head * head).exp() * (-(y - head) * (y + head)).exp()
}

fn erfc_nonneg(y: f64) -> f64 {
    if y <= ERFC_SMALL {
        let z = y * y;
        let num = (((ERF_A[4] * z + ERF_A[0]) * z + ERF_A[1]) * z + ERF_A[2]) * z + ERF_A[3];
        let den = (((z + ERF_B[0]) * z + ERF_B[1]) * z + ERF_B[2]) * z + ERF_B[3];
        return 1.0 - y * num / den;
    }
    if y >= ERFC_BIG {
        return 0.0;
    }
    let ratio = if y <= 4.0 {
        let mut num = ERFC_C[8] * y;
        let mut den = y;
        for k in 0..7 {
            num = (num + ERFC_C[k]) * y;
            den = (den + ERFC_D[k]) * y;
        }
        (num + ERFC_C[7]) / (den + ERFC_D[7])
    } else {
        let z = 1.0 / (y * y);
        let mut num = ERFC_P[5] * z;
        let mut den = z;
        for k in 0..4 {
            num = (num + ERFC_P[k]) * z;
            den = (den + ERFC_Q[k]) * z;
        }
        let r = z * (num + ERFC_P[4]) / (den + ERFC_Q[4]);
        (FRAC_1_SQRT_PI - r) / y
    };
    ratio * exp_neg_square(y)
}

/// Complementary error function without the finiteness check. Infinite
/// arguments map to the limits 0 and 2.
pub(crate) fn erfc_raw(x: f64) -> f64 {
    if x >= 0.0 {
        erfc_nonneg(x)
    } else {
        2.0 - erfc_nonneg(-x)
    }
}

/// `erfc(x) = (2/sqrt(pi)) * int_x^inf exp(-u^2) du`.
pub fn erfc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("erfc needs a finite argument, got {x}")));
    }
    Ok(erfc_raw(x))
}

/// Orders of the polylogarithm supported here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolylogOrder {
    /// `s = 1/2`
    Half,
    /// `s = 3/2`
    ThreeHalves,
}

impl PolylogOrder {
    pub fn value(self) -> f64 {
        match self {
            PolylogOrder::Half => 0.5,
            PolylogOrder::ThreeHalves => 1.5,
        }
    }
}

/// Bernoulli numbers B_2, B_4, ..., B_20.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `sum_{n >= n0} n^{-s}` by Euler-Maclaurin at `n0`: the integral of the
/// tail, the half endpoint term and Bernoulli corrections. For `0 < s < 1`
/// this is the analytically continued value. Needs `n0 >= 10` or so for full
/// accuracy.
pub(crate) fn power_tail_sum(s: f64, n0: usize) -> f64 {
    let n = n0 as f64;
    let mut total = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s (s+1) ... (s+2j-2), divided by (2j)!
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / factorial * rising * power;
        total += term;
        if term.abs() <= 1e-18 * total.abs() {
            break;
        }
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (s + j2 - 1.0) * (s + j2);
        factorial *= (j2 + 1.0) * (j2 + 2.0);
        power /= n * n;
    }
    total
}

/// Riemann zeta for real `s > 0`, `s != 1`.
fn zeta_positive(s: f64) -> f64 {
    const CUT: usize = 24;
    let head: f64 = (1..CUT).map(|k| (k as f64).powf(-s)).sum();
    head + power_tail_sum(s, CUT)
}

/// Gamma at a positive half-integer `k + 1/2`.
fn gamma_half_integer(k: usize) -> f64 {
    (0..k).fold(SQRT_PI, |g, j| g * (j as f64 + 0.5))
}

/// Riemann zeta at `s = 1/2 - k` for `k >= 1`, via the reflection formula.
fn zeta_negative_half(k: usize) -> f64 {
    let s = 0.5 - k as f64;
    2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma_half_integer(k) * zeta_positive(1.0 - s)
}

/// `zeta(3/2)`, computed once.
pub fn zeta_three_halves() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| zeta_positive(1.5))
}

const INVERSION_TERMS: usize = 13;
const SERIES_CUTOFF: f64 = 0.8;

/// `zeta(s - k) / k!` for `k = 0..=12`.
fn inversion_coefficients(order: PolylogOrder) -> &'static [f64; INVERSION_TERMS] {
    static HALF: OnceLock<[f64; INVERSION_TERMS]> = OnceLock::new();
    static THREE_HALVES: OnceLock<[f64; INVERSION_TERMS]> = OnceLock::new();
    let build = |shift: usize| {
        let mut out = [0.0; INVERSION_TERMS];
        let mut factorial = 1.0;
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                factorial *= k as f64;
            }
            // s - k = 1/2 - (k - shift)
            let zeta = match (k + 1).checked_sub(shift + 1) {
                Some(0) => zeta_positive(0.5),
                Some(j) => zeta_negative_half(j),
                None => zeta_three_halves(),
            };
            *slot = zeta / factorial;
        }
        out
    };
    match order {
        PolylogOrder::Half => HALF.get_or_init(|| build(0)),
        PolylogOrder::ThreeHalves => THREE_HALVES.get_or_init(|| build(1)),
    }
}

fn polylog_series(s: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut n = 1.0f64;
    loop {
        power *= x;
        let term = power * n.powf(-s);
        sum += term;
        if term <= 1e-18 * sum {
            return sum;
        }
        n += 1.0;
    }
}

fn polylog_inversion(order: PolylogOrder, x: f64) -> f64 {
    let mu = x.ln();
    let s = order.value();
    let singular = match order {
        PolylogOrder::Half => SQRT_PI / (-mu).sqrt(),
        PolylogOrder::ThreeHalves => -2.0 * SQRT_PI * (-mu).sqrt(),
    };
    debug_assert!(s > 0.0);
    let coeffs = inversion_coefficients(order);
    let regular = coeffs.iter().rev().fold(0.0, |acc, c| acc * mu + c);
    singular + regular
}

/// `Li_{1/2}(x) - sqrt(pi / -ln x)`, the part of `Li_{1/2}` that stays
/// bounded as `x -> 1`. Accurate for `x > 0.5`.
pub(crate) fn polylog_half_regular(x: f64) -> f64 {
    let mu = x.ln();
    let coeffs = inversion_coefficients(PolylogOrder::Half);
    coeffs.iter().rev().fold(0.0, |acc, c| acc * mu + c)
}

/// Polylogarithm `Li_s(x) = sum_{n>=1} x^n / n^s` on `0 <= x <= 1`.
pub fn polylog(order: PolylogOrder, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("polylog argument must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return match order {
            PolylogOrder::Half => Err(Error::Divergence("Li_1/2 diverges at x = 1".into())),
            PolylogOrder::ThreeHalves => Ok(zeta_three_halves()),
        };
    }
    if x <= SERIES_CUTOFF {
        Ok(polylog_series(order.value(), x))
    } else {
        Ok(polylog_inversion(order, x))
    }
}
