use ndarray::{ArrayBase, Data, Dimension};

use crate::error::{Error, Result};
use crate::special::{f_weight, Regime};
use crate::{C64, POLE_FLOOR};

/// Largest chain supported by the dense representation (2^10 states).
pub const MAX_CHAIN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rel_tol: 1e-9,
            abs_floor: 1e-300,
        }
    }
}

impl TolerancePolicy {
    /// `‖a − b‖_max / max(‖a‖_max, ‖b‖_max, abs_floor)`.
    pub fn rho<S1, S2, D>(&self, a: &ArrayBase<S1, D>, b: &ArrayBase<S2, D>) -> f64
    where
        S1: Data<Elem = C64>,
        S2: Data<Elem = C64>,
        D: Dimension,
    {
        let diff = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, worst);
        let scale = max_norm(a.iter())
            .max(max_norm(b.iter()))
            .max(self.abs_floor);
        diff / scale
    }

    pub fn rho_scalar(&self, a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(self.abs_floor)
    }

    /// `|Σ t| / (Σ |t| + abs_floor)`: residual of a linear relation whose
    /// terms should cancel.
    pub fn cancellation(&self, terms: &[C64]) -> f64 {
        let sum: C64 = terms.iter().sum();
        let mag: f64 = terms.iter().map(|t| t.norm()).sum();
        sum.norm() / (mag + self.abs_floor)
    }

    pub fn passes(&self, residual: f64) -> bool {
        residual <= self.rel_tol
    }
}

/// Larger of two residuals, propagating NaN (unlike `f64::max`).
pub fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub(crate) fn max_norm<'a>(it: impl Iterator<Item = &'a C64>) -> f64 {
    it.map(|x| x.norm()).fold(0.0, f64::max)
}

/// Chain length, crossing parameter, inhomogeneities and weight regime.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelContext {
    pub l: usize,
    pub gamma: C64,
    pub mu: Vec<C64>,
    pub regime: Regime,
    pub tol: TolerancePolicy,
}

impl ModelContext {
    pub fn new(gamma: C64, mu: Vec<C64>, regime: Regime) -> Result<Self> {
        let ctx = Self::with_degenerate_gamma(gamma, mu, regime)?;
        if ctx.f(gamma)?.norm() < POLE_FLOOR {
            return Err(Error::InvalidModel(format!(
                "f(gamma) vanishes at gamma = {gamma}"
            )));
        }
        Ok(ctx)
    }

    /// Skips the `f(γ) ≠ 0` requirement; only meant for degeneration tests.
    pub fn with_degenerate_gamma(gamma: C64, mu: Vec<C64>, regime: Regime) -> Result<Self> {
        let l = mu.len();
        if l == 0 || l > MAX_CHAIN {
            return Err(Error::InvalidModel(format!(
                "chain length {l} outside 1..={MAX_CHAIN}"
            )));
        }
        if let Regime::Elliptic(params) = &regime {
            params.validate()?;
        }
        if !gamma.is_finite() || mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidModel("non-finite parameter".into()));
        }
        Ok(ModelContext {
            l,
            gamma,
            mu,
            regime,
            tol: TolerancePolicy::default(),
        })
    }

    pub fn with_tolerance(mut self, tol: TolerancePolicy) -> Self {
        self.tol = tol;
        self
    }

    /// Same model restricted to the trigonometric regime.
    pub fn trigonometric(&self) -> Self {
        ModelContext {
            regime: Regime::Trigonometric,
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.l
    }

    pub fn f(&self, lambda: C64) -> Result<C64> {
        f_weight(lambda, &self.regime)
    }

    /// `f(x)` for use in a denominator.
    pub(crate) fn f_den(&self, x: C64, what: &'static str) -> Result<C64> {
        let v = self.f(x)?;
        if v.norm() < POLE_FLOOR {
            return Err(Error::SingularCoefficient(what));
        }
        Ok(v)
    }

    pub(crate) fn require_trig(&self) -> Result<()> {
        if self.regime.is_trigonometric() {
            Ok(())
        } else {
            Err(Error::RegimeMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn worst_propagates_nan() {
        assert_eq!(worst(1e-3, 2e-3), 2e-3);
        assert!(worst(f64::NAN, 1.0).is_nan());
        assert!(worst(1.0, f64::NAN).is_nan());
        let a = array![C64::new(1.0, 0.0), C64::new(f64::NAN, 0.0)];
        let b = array![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!(TolerancePolicy::default().rho(&a, &b).is_nan());
    }

    #[test]
    fn rejects_bad_models() {
        let g = C64::new(0.4, 0.0);
        assert!(ModelContext::new(g, vec![], Regime::Trigonometric).is_err());
        assert!(ModelContext::new(g, vec![C64::default(); 11], Regime::Trigonometric).is_err());
        assert!(
            ModelContext::new(C64::default(), vec![C64::default()], Regime::Trigonometric).is_err()
        );
        assert!(ModelContext::with_degenerate_gamma(
            C64::default(),
            vec![C64::default()],
            Regime::Trigonometric
        )
        .is_ok());
    }

    #[test]
    fn rho_metric() {
        let tol = TolerancePolicy::default();
        let a = array![C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let b = array![C64::new(1.0, 0.0), C64::new(0.0, 2.0 + 1e-10)];
        assert!((tol.rho(&a, &b) - 0.5e-10).abs() < 1e-16);
        let z = ndarray::Array1::<C64>::zeros(2);
        assert_eq!(tol.rho(&z, &z), 0.0);
        assert!(tol.cancellation(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]) == 0.0);
    }
}
