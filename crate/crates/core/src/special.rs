//! Weight functions of the elliptic and trigonometric models.
//!
//! The elliptic weight is `f(λ) = Θ₁(iλ, τ)/2` with the odd Jacobi theta
//! series
//!
//! ```text
//! Θ₁(z) = 2 Σ_{n≥0} (−1)ⁿ p^{(n+½)²} sin((2n+1) z),   p = e^{iπτ}
//! ```
//!
//! and the trigonometric weight is `sinh(λ)`. Overall normalization of Θ₁ is
//! immaterial for everything downstream: every identity checked in this crate
//! is homogeneous in `f`.

use crate::error::{Error, Result};
use crate::C64;

/// Largest accepted nome modulus.
pub const MAX_NOME: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParams {
    pub nome: C64,
    pub series_cap: usize,
    pub term_tol: f64,
}

impl EllipticParams {
    pub fn new(nome: C64) -> Result<Self> {
        let params = EllipticParams {
            nome,
            series_cap: 200,
            term_tol: 1e-18,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let modulus = self.nome.norm();
        if modulus.is_nan() || modulus >= MAX_NOME {
            return Err(Error::NomeTooLarge(modulus));
        }
        if self.series_cap == 0 {
            return Err(Error::InvalidParams("series_cap must be at least 1"));
        }
        if self.term_tol.is_nan() || self.term_tol <= 0.0 {
            return Err(Error::InvalidParams("term_tol must be positive"));
        }
        Ok(())
    }

    /// `p^{(n+½)²}` on the principal branch of `log p`.
    fn nome_power(&self, n: usize) -> C64 {
        let e = (n as f64 + 0.5).powi(2);
        (self.nome.ln() * e).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Elliptic(EllipticParams),
    Trigonometric,
}

impl Regime {
    pub fn elliptic(nome: C64) -> Result<Self> {
        EllipticParams::new(nome).map(Regime::Elliptic)
    }

    pub fn is_trigonometric(&self) -> bool {
        matches!(self, Regime::Trigonometric)
    }
}

/// Sums `Σ (−1)ⁿ p^{(n+½)²} g(n)` until the terms are negligible and
/// decreasing.
fn theta_series(params: &EllipticParams, g: impl Fn(f64) -> C64) -> Result<C64> {
    params.validate()?;
    let mut sum = C64::new(0.0, 0.0);
    let mut acc = 0.0;
    let mut prev = f64::INFINITY;
    for n in 0..params.series_cap {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = params.nome_power(n) * g((2 * n + 1) as f64) * sign;
        let mag = term.norm();
        sum += term;
        acc += mag;
        if mag <= params.term_tol * acc && mag <= prev {
            return Ok(sum);
        }
        prev = mag;
    }
    Err(Error::NonConvergent(params.series_cap))
}

pub fn theta1(z: C64, params: &EllipticParams) -> Result<C64> {
    theta_series(params, |k| (z * k).sin()).map(|s| s * 2.0)
}

/// `Θ₁′(z)`, the term-wise derivative of the series.
pub fn theta1_prime(z: C64, params: &EllipticParams) -> Result<C64> {
    theta_series(params, |k| (z * k).cos() * k).map(|s| s * 2.0)
}

pub fn f_weight(lambda: C64, regime: &Regime) -> Result<C64> {
    match regime {
        Regime::Elliptic(params) => theta1(C64::i() * lambda, params).map(|t| t * 0.5),
        Regime::Trigonometric => Ok(lambda.sinh()),
    }
}

/// `f′(0)`; for the elliptic branch `d/dλ Θ₁(iλ)/2 = (i/2) Θ₁′(0)`.
pub fn f_weight_deriv0(regime: &Regime) -> Result<C64> {
    match regime {
        Regime::Elliptic(params) => {
            theta1_prime(C64::new(0.0, 0.0), params).map(|d| d * C64::new(0.0, 0.5))
        }
        Regime::Trigonometric => Ok(C64::new(1.0, 0.0)),
    }
}

/// Six-vertex weights `(a, b, c) = (sinh(λ+γ), sinh λ, sinh γ)`.
pub fn trig_weights(lambda: C64, gamma: C64) -> (C64, C64, C64) {
    ((lambda + gamma).sinh(), lambda.sinh(), gamma.sinh())
}

/// Ratio `f(θ+num)/f(θ+den)` of dynamical weights.
///
/// In the trigonometric regime the dynamical parameter has been sent to
/// infinity in the symmetric gauge and every such ratio is 1.
pub fn dyn_ratio(theta_num: C64, theta_den: C64, regime: &Regime) -> Result<C64> {
    match regime {
        Regime::Trigonometric => Ok(C64::new(1.0, 0.0)),
        Regime::Elliptic(_) => {
            let den = f_weight(theta_den, regime)?;
            if den.norm() < crate::POLE_FLOOR {
                return Err(Error::DynamicalPole {
                    state: 0,
                    shift: theta_den,
                });
            }
            Ok(f_weight(theta_num, regime)? / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_c(rng: &mut ChaCha8Rng, re: f64, im: f64) -> C64 {
        C64::new(rng.random_range(-re..re), rng.random_range(-im..im))
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
    }

    #[test]
    fn theta1_is_odd_and_vanishes_at_zero() {
        let params = EllipticParams::new(C64::new(0.2, 0.05)).unwrap();
        assert_eq!(
            theta1(C64::new(0.0, 0.0), &params).unwrap(),
            C64::new(0.0, 0.0)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let z = rand_c(&mut rng, 2.0, 1.0);
            let a = theta1(z, &params).unwrap();
            let b = theta1(-z, &params).unwrap();
            assert!(rel(a, -b) < 1e-13);
        }
    }

    #[test]
    fn theta1_quasi_periodicity() {
        let params = EllipticParams::new(C64::new(0.1, 0.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let z = rand_c(&mut rng, 1.5, 0.8);
            let a = theta1(z + std::f64::consts::PI, &params).unwrap();
            let b = theta1(z, &params).unwrap();
            assert!(rel(a, -b) < 1e-12);
        }
    }

    #[test]
    fn rejects_large_nome_and_bad_params() {
        assert!(matches!(
            EllipticParams::new(C64::new(0.9, 0.0)),
            Err(Error::NomeTooLarge(_))
        ));
        let mut params = EllipticParams::new(C64::new(0.2, 0.0)).unwrap();
        params.series_cap = 0;
        assert!(params.validate().is_err());
        params.series_cap = 1;
        params.term_tol = 1e-18;
        assert_eq!(
            theta1(C64::new(0.3, 0.1), &params),
            Err(Error::NonConvergent(1))
        );
    }

    #[test]
    fn f_weight_trig_is_sinh() {
        let l = C64::new(1.0, 0.3);
        let direct = ((l).exp() - (-l).exp()) * 0.5;
        assert!(rel(f_weight(l, &Regime::Trigonometric).unwrap(), direct) < 1e-15);
    }

    #[test]
    fn f_weight_odd_both_regimes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let regimes = [
            Regime::Trigonometric,
            Regime::elliptic(C64::new(0.2, 0.0)).unwrap(),
        ];
        for regime in &regimes {
            assert_eq!(f_weight(C64::new(0.0, 0.0), regime).unwrap().norm(), 0.0);
            for _ in 0..100 {
                let l = rand_c(&mut rng, 1.0, 0.4);
                let a = f_weight(l, regime).unwrap();
                let b = f_weight(-l, regime).unwrap();
                assert!(rel(a, -b) < 1e-12);
            }
        }
    }

    #[test]
    fn deriv0_matches_finite_difference() {
        assert_eq!(
            f_weight_deriv0(&Regime::Trigonometric).unwrap(),
            C64::new(1.0, 0.0)
        );
        let regime = Regime::elliptic(C64::new(0.1, 0.0)).unwrap();
        let h = 1e-6;
        let fd = (f_weight(C64::new(h, 0.0), &regime).unwrap()
            - f_weight(C64::new(-h, 0.0), &regime).unwrap())
            / (2.0 * h);
        let d = f_weight_deriv0(&regime).unwrap();
        assert!(rel(d, fd) < 1e-8, "{d} vs {fd}");
    }

    #[test]
    fn small_nome_degenerates_to_sinh() {
        let regime = Regime::elliptic(C64::new(1e-8, 0.0)).unwrap();
        let d = f_weight_deriv0(&regime).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let mut l = rand_c(&mut rng, 1.0, 1.0);
            if l.norm() > 1.0 {
                l /= l.norm();
            }
            let ratio = f_weight(l, &regime).unwrap() / d;
            assert!(rel(ratio, l.sinh()) < 1e-6);
        }
    }

    #[test]
    fn trig_weight_identities() {
        let g = C64::new(0.4, 0.1);
        let (a, b, c) = trig_weights(C64::new(0.0, 0.0), g);
        assert_eq!((a, b, c), (g.sinh(), C64::new(0.0, 0.0), g.sinh()));
        let (a, _, _) = trig_weights(C64::new(1.0, 0.0), C64::new(0.5, 0.0));
        assert!((a.re - 1.5f64.sinh()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let l = rand_c(&mut rng, 1.0, 0.4);
            let (a, b, c) = trig_weights(l, g);
            // sinh(λ+γ) = sinh λ cosh γ + cosh λ sinh γ
            assert!((a - b * g.cosh() - c * l.cosh()).norm() < 1e-14);
        }
    }
}
