//! Dense multivariate polynomials with a per-variable degree bound.

use ndarray::{ArrayD, Dimension, IxDyn};
use rand::Rng;

use crate::error::{Error, Result};
use crate::C64;

/// `Σ c_e z_1^{e_1} ⋯ z_n^{e_n}` with every `e_k ≤ max_deg`. Axis `k` of the
/// coefficient tensor is the exponent of `z_{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    max_deg: usize,
    coeffs: ArrayD<C64>,
}

impl MultiPoly {
    pub fn new(coeffs: ArrayD<C64>) -> Result<Self> {
        let shape = coeffs.shape().to_vec();
        let Some(&side) = shape.first() else {
            return Err(Error::InvalidParams(
                "polynomial needs at least one variable",
            ));
        };
        if side == 0 || shape.iter().any(|&s| s != side) {
            return Err(Error::InvalidParams(
                "coefficient tensor must be a non-empty hypercube",
            ));
        }
        Ok(MultiPoly {
            nvars: shape.len(),
            max_deg: side - 1,
            coeffs,
        })
    }

    pub fn zeros(nvars: usize, max_deg: usize) -> Self {
        MultiPoly {
            nvars,
            max_deg,
            coeffs: ArrayD::zeros(IxDyn(&vec![max_deg + 1; nvars])),
        }
    }

    /// Coefficients uniform in the unit square.
    pub fn random<R: Rng>(nvars: usize, max_deg: usize, rng: &mut R) -> Self {
        let mut p = Self::zeros(nvars, max_deg);
        p.coeffs
            .mapv_inplace(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn coeffs(&self) -> &ArrayD<C64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut ArrayD<C64> {
        &mut self.coeffs
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Highest exponent of `z_{var+1}` carrying a nonzero coefficient.
    pub fn degree_in(&self, var: usize) -> usize {
        self.coeffs
            .indexed_iter()
            .filter(|(_, c)| **c != C64::default())
            .map(|(idx, _)| idx[var])
            .max()
            .unwrap_or(0)
    }

    /// Multi-index of the monomial with the largest `|c_e z^e|` at `z`.
    pub fn dominant_term(&self, z: &[C64]) -> Result<Vec<usize>> {
        if z.len() != self.nvars {
            return Err(Error::SizeMismatch {
                expected: self.nvars,
                got: z.len(),
            });
        }
        let size = |idx: &[usize], c: &C64| -> f64 {
            c.norm()
                * idx
                    .iter()
                    .zip(z)
                    .map(|(&e, zi)| zi.norm().powi(e as i32))
                    .product::<f64>()
        };
        let (idx, _) = self
            .coeffs
            .indexed_iter()
            .map(|(i, c)| (i.slice().to_vec(), size(i.slice(), c)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("coefficient tensor is non-empty");
        Ok(idx)
    }

    /// Drops every monomial with an exponent above `deg`.
    pub fn truncate(&self, deg: usize) -> MultiPoly {
        let deg = deg.min(self.max_deg);
        let mut out = Self::zeros(self.nvars, deg);
        for (idx, c) in self.coeffs.indexed_iter() {
            if idx.slice().iter().all(|&e| e <= deg) {
                out.coeffs[idx.slice()] = *c;
            }
        }
        out
    }

    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        self.eval_deriv(z, 0, 0)
    }

    /// `∂^order p / ∂z_{var+1}^order` at `z`.
    pub fn eval_deriv(&self, z: &[C64], var: usize, order: usize) -> Result<C64> {
        if z.len() != self.nvars {
            return Err(Error::SizeMismatch {
                expected: self.nvars,
                got: z.len(),
            });
        }
        if var >= self.nvars {
            return Err(Error::IndexError(var));
        }
        if order > self.max_deg {
            return Ok(C64::default());
        }
        // Horner from the last axis inwards: fold one variable at a time.
        let mut cur = self.coeffs.clone();
        for axis in (0..self.nvars).rev() {
            let zi = z[axis];
            let k = if axis == var { order } else { 0 };
            let side = self.max_deg + 1;
            let mut next = ArrayD::<C64>::zeros(IxDyn(&cur.shape()[..axis]));
            for (idx, out) in next.indexed_iter_mut() {
                let mut full = idx.slice().to_vec();
                full.push(0);
                let mut acc = C64::default();
                for e in (k..side).rev() {
                    full[axis] = e;
                    acc = acc * zi + cur[full.as_slice()] * falling(e, k);
                }
                *out = acc;
            }
            cur = next;
        }
        Ok(cur[IxDyn(&[])])
    }
}

/// `e!/(e−k)!`.
fn falling(e: usize, k: usize) -> f64 {
    (e + 1 - k..=e).map(|v| v as f64).product()
}
