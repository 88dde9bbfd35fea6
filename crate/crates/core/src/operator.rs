//! Dense operators on tensor products of two-dimensional spaces.
//!
//! Site `0` is the most significant bit of a basis index; bit value `0` is
//! spin up (`h = +1`), `1` is spin down (`h = −1`).

use std::ops::Mul;

use ndarray::{s, Array1, Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::C64;

pub type Mat4 = [[C64; 4]; 4];

#[inline]
pub fn site_bit(index: usize, site: usize, n_sites: usize) -> usize {
    (index >> (n_sites - 1 - site)) & 1
}

/// Eigenvalue of `h` on `site` for the basis state `index`.
#[inline]
pub fn site_weight(index: usize, site: usize, n_sites: usize) -> i32 {
    1 - 2 * site_bit(index, site, n_sites) as i32
}

pub fn total_weight(index: usize, sites: &[usize], n_sites: usize) -> i32 {
    sites.iter().map(|&s| site_weight(index, s, n_sites)).sum()
}

/// Operator on the `2^L`-dimensional chain space.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOperator {
    mat: Array2<C64>,
}

impl ChainOperator {
    pub fn new(mat: Array2<C64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || !r.is_power_of_two() {
            return Err(Error::InvalidModel(format!("operator shape {r}x{c}")));
        }
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidModel(
                "operator has non-finite entries".into(),
            ));
        }
        Ok(ChainOperator { mat })
    }

    pub(crate) fn from_raw(mat: Array2<C64>) -> Self {
        ChainOperator { mat }
    }

    pub fn identity(dim: usize) -> Self {
        ChainOperator {
            mat: Array2::eye(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> ArrayView2<'_, C64> {
        self.mat.view()
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.mat
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.mat.dot(v)
    }

    /// Row vector `vᵀ · self` (plain transpose, no conjugation).
    pub fn apply_left(&self, v: &Array1<C64>) -> Array1<C64> {
        v.dot(&self.mat)
    }

    pub fn scaled(&self, k: C64) -> Self {
        ChainOperator { mat: &self.mat * k }
    }

    pub fn max_norm(&self) -> f64 {
        crate::model::max_norm(self.mat.iter())
    }
}

impl Mul for &ChainOperator {
    type Output = ChainOperator;

    fn mul(self, rhs: &ChainOperator) -> ChainOperator {
        ChainOperator {
            mat: self.mat.dot(&rhs.mat),
        }
    }
}

impl std::ops::Add for &ChainOperator {
    type Output = ChainOperator;

    fn add(self, rhs: &ChainOperator) -> ChainOperator {
        ChainOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &ChainOperator {
    type Output = ChainOperator;

    fn sub(self, rhs: &ChainOperator) -> ChainOperator {
        ChainOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// Product of operators in the order given (leftmost first).
pub fn ordered_product<'a>(
    dim: usize,
    ops: impl IntoIterator<Item = &'a ChainOperator>,
) -> ChainOperator {
    ops.into_iter()
        .fold(ChainOperator::identity(dim), |acc, op| &acc * op)
}

/// A two-site operator embedded in an `n`-site space, stored column by
/// column. Column entries may depend on the spectator sites, which is how
/// operator-valued dynamical shifts are realized.
#[derive(Debug, Clone)]
pub(crate) struct LocalFactor {
    dim: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl LocalFactor {
    /// `block(col)` returns the 4×4 matrix acting on `(first, second)` for
    /// the given global column; only spectator sites may influence it.
    pub fn build(
        n_sites: usize,
        first: usize,
        second: usize,
        mut block: impl FnMut(usize) -> Result<Mat4>,
    ) -> Result<Self> {
        let dim = 1usize << n_sites;
        let shift_a = n_sites - 1 - first;
        let shift_b = n_sites - 1 - second;
        let mask = !((1usize << shift_a) | (1usize << shift_b));
        let mut cols = Vec::with_capacity(dim);
        for col in 0..dim {
            let m = block(col)?;
            let local_in = (((col >> shift_a) & 1) << 1) | ((col >> shift_b) & 1);
            let base = col & mask;
            let mut entries = Vec::with_capacity(2);
            for (local_out, row) in m.iter().enumerate() {
                let v = row[local_in];
                if v != C64::new(0.0, 0.0) {
                    let global =
                        base | ((local_out >> 1) << shift_a) | ((local_out & 1) << shift_b);
                    entries.push((global, v));
                }
            }
            cols.push(entries);
        }
        Ok(LocalFactor { dim, cols })
    }

    /// `m · self`.
    pub fn right_multiply(&self, m: &Array2<C64>) -> Array2<C64> {
        let mut out = Array2::zeros((m.nrows(), self.dim));
        for (col, entries) in self.cols.iter().enumerate() {
            for &(row, v) in entries {
                let src = m.column(row);
                out.column_mut(col).scaled_add(v, &src);
            }
        }
        out
    }

    pub fn to_dense(&self) -> Array2<C64> {
        self.right_multiply(&Array2::eye(self.dim))
    }
}

pub(crate) fn product_of(factors: &[LocalFactor], dim: usize) -> Array2<C64> {
    factors
        .iter()
        .fold(Array2::eye(dim), |acc, f| f.right_multiply(&acc))
}

/// Splits an `(aux ⊗ chain)` matrix with the auxiliary space as site 0
/// into its four chain blocks `[[A, B], [C, D]]`.
pub(crate) fn aux_blocks(m: &Array2<C64>) -> [ChainOperator; 4] {
    let d = m.nrows() / 2;
    [
        ChainOperator::from_raw(m.slice(s![..d, ..d]).to_owned()),
        ChainOperator::from_raw(m.slice(s![..d, d..]).to_owned()),
        ChainOperator::from_raw(m.slice(s![d.., ..d]).to_owned()),
        ChainOperator::from_raw(m.slice(s![d.., d..]).to_owned()),
    ]
}
