//! Integral kernels in half-line coordinates.
//!
//! The edge determinants live on `[t, inf)`. Substituting `x = t + 2u` folds
//! the edge shift into the kernel, so every operator here acts on `[0, inf)`:
//!
//! * `S_t(x, y) = exp(-(x + y + t)^2) / sqrt(pi)`
//! * `T_t(x, y) = int_0^inf S_t(x, u) S_t(u, y) du`
//!   `= exp(-(x - y)^2 / 2) erfc((x + y + 2t) / sqrt 2) / (2 sqrt(2 pi))`
//!
//! Both closed forms remain valid for negative coordinates, which the
//! integral identities need when they probe the operators off the half-line.

use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2, PI};

use crate::specfun::erfc_raw;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `S_t`
    SShifted,
    /// `T_t = S_t S_t`
    TShifted,
}

/// A kernel family together with its edge shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub t: f64,
}

impl KernelSpec {
    pub fn s(t: f64) -> Self {
        KernelSpec { kind: KernelKind::SShifted, t }
    }

    pub fn t(t: f64) -> Self {
        KernelSpec { kind: KernelKind::TShifted, t }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::SShifted => s_shifted(self.t, x, y),
            KernelKind::TShifted => t_shifted_closed(self.t, x, y),
        }
    }

    /// Partial derivative in the edge shift.
    #[inline]
    pub fn eval_dt(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::SShifted => s_shifted_dt(self.t, x, y),
            KernelKind::TShifted => t_shifted_dt(self.t, x, y),
        }
    }
}

#[inline]
pub fn s_shifted(t: f64, x: f64, y: f64) -> f64 {
    let s = x + y + t;
    FRAC_1_SQRT_PI * (-s * s).exp()
}

#[inline]
pub fn s_shifted_dt(t: f64, x: f64, y: f64) -> f64 {
    let s = x + y + t;
    -2.0 * s * FRAC_1_SQRT_PI * (-s * s).exp()
}

#[inline]
pub fn t_shifted_closed(t: f64, x: f64, y: f64) -> f64 {
    let d = x - y;
    (-0.5 * d * d).exp() * erfc_raw((x + y + 2.0 * t) * FRAC_1_SQRT_2) / (2.0 * (2.0 * PI).sqrt())
}

/// `d/dt T_t(x, y) = -S_t(x, 0) S_t(0, y)`: shifting the edge only moves the
/// lower limit of the inner integral.
#[inline]
pub fn t_shifted_dt(t: f64, x: f64, y: f64) -> f64 {
    let a = x + t;
    let b = y + t;
    -FRAC_1_PI * (-a * a - b * b).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;

    #[test]
    fn s_at_origin() {
        assert!((s_shifted(0.0, 0.0, 0.0) - 0.564_189_583_5).abs() < 1e-10);
    }

    #[test]
    fn s_peak_on_ridge() {
        assert!((s_shifted(-4.0, 2.0, 2.0) - FRAC_1_SQRT_PI).abs() < 1e-16);
    }

    #[test]
    fn symmetric_in_arguments() {
        for &(t, x, y) in &[(0.3, 0.1, 2.0), (-3.0, 4.0, 0.5), (2.0, 0.0, 1.0)] {
            assert_eq!(s_shifted(t, x, y), s_shifted(t, y, x));
            assert_eq!(t_shifted_closed(t, x, y), t_shifted_closed(t, y, x));
            assert_eq!(t_shifted_dt(t, x, y), t_shifted_dt(t, y, x));
        }
    }

    /// Brute-force `int_0^inf S_t(x,u) S_t(u,y) du` on panels.
    fn composition_by_quadrature(t: f64, x: f64, y: f64) -> f64 {
        let base = gauss_legendre(30).unwrap();
        let upper = (-t).max(0.0) + 14.0;
        let breaks: Vec<f64> = (0..=56).map(|k| upper * k as f64 / 56.0).collect();
        let rule = base.composite(&breaks).unwrap();
        rule.integrate(|u| s_shifted(t, x, u) * s_shifted(t, u, y))
    }

    #[test]
    fn t_at_origin_matches_brute_force() {
        let oracle = composition_by_quadrature(0.0, 0.0, 0.0);
        let expected = 1.0 / (2.0 * (2.0 * PI).sqrt());
        assert!((oracle - expected).abs() < 1e-14);
        assert!((t_shifted_closed(0.0, 0.0, 0.0) - 0.199_471_140_2).abs() < 1e-10);
    }

    #[test]
    fn composition_identity_on_grid() {
        for &t in &[-4.0, 0.0, 4.0] {
            for &x in &[0.0, 0.5, 1.7, 3.0, 6.0] {
                for &y in &[0.0, 0.25, 2.2, 5.0] {
                    let lhs = t_shifted_closed(t, x, y);
                    let rhs = composition_by_quadrature(t, x, y);
                    assert!((lhs - rhs).abs() <= 1e-10, "t={t} x={x} y={y}: {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn t_nonnegative_and_decays() {
        for i in 0..50 {
            for j in 0..50 {
                assert!(t_shifted_closed(-3.0, 0.2 * i as f64, 0.2 * j as f64) >= 0.0);
            }
        }
        assert!(t_shifted_closed(10.0, 3.0, 3.0) < 1e-100);
    }

    #[test]
    fn s_derivative_examples() {
        assert_eq!(s_shifted_dt(0.0, 0.0, 0.0), 0.0);
        // odd in the combined argument x + y + t
        assert!((s_shifted_dt(0.0, 0.7, 0.0) + s_shifted_dt(-0.7, 0.0, 0.0)).abs() < 1e-16);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &(t, x, y) in &[(0.0, 0.3, 0.2), (-2.0, 1.0, 0.5), (1.0, 0.1, 0.0), (-5.0, 2.0, 2.5)] {
            let fd = (s_shifted(t + h, x, y) - s_shifted(t - h, x, y)) / (2.0 * h);
            assert!((fd - s_shifted_dt(t, x, y)).abs() < 1e-8);
            let fd = (t_shifted_closed(t + h, x, y) - t_shifted_closed(t - h, x, y)) / (2.0 * h);
            assert!((fd - t_shifted_dt(t, x, y)).abs() < 1e-8);
        }
    }

    #[test]
    fn spec_dispatch() {
        let k = KernelSpec::t(-1.0);
        assert_eq!(k.eval(0.4, 0.9), t_shifted_closed(-1.0, 0.4, 0.9));
        let k = KernelSpec::s(0.5);
        assert_eq!(k.eval_dt(0.4, 0.9), s_shifted_dt(0.5, 0.4, 0.9));
    }
}
