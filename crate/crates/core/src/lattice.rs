//! Brute-force lattice quantities: the domain-wall partition function, the
//! off-shell scalar product, and the highest/lowest-weight actions of the
//! monodromy blocks.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::model::{worst, ModelContext};
use crate::operator::ChainOperator;
use crate::special::{dyn_ratio, trig_weights};
use crate::yb::monodromy_blocks;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetLabel {
    X,
    Y,
}

/// Ordered spectral parameters `{λ_1, …, λ_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSet {
    pub values: Vec<C64>,
    pub label: SetLabel,
}

impl SpectralSet {
    pub fn new(values: Vec<C64>, label: SetLabel) -> Self {
        SpectralSet { values, label }
    }

    pub fn x(values: Vec<C64>) -> Self {
        Self::new(values, SetLabel::X)
    }

    pub fn y(values: Vec<C64>) -> Self {
        Self::new(values, SetLabel::Y)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Drops the element at position `k`.
    pub fn remove(&self, k: usize) -> Self {
        let mut values = self.values.clone();
        values.remove(k);
        SpectralSet {
            values,
            label: self.label,
        }
    }

    /// `X^{1,n} ↦ X^{0,n}`: puts `λ_0` in front.
    pub fn prepend(&self, l0: C64) -> Self {
        let mut values = Vec::with_capacity(self.len() + 1);
        values.push(l0);
        values.extend_from_slice(&self.values);
        SpectralSet {
            values,
            label: self.label,
        }
    }

    /// `X^{0,n}_i` for `i ∈ 0..=n`, position 0 being `λ_0`.
    pub fn swap_in(&self, l0: C64, i: usize) -> Self {
        self.prepend(l0).remove(i)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        SpectralSet {
            values: perm.iter().map(|&p| self.values[p]).collect(),
            label: self.label,
        }
    }
}

/// The all-up state `|0⟩` and the all-down state `|0̄⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryVectors {
    pub ket0: Array1<C64>,
    pub ket0bar: Array1<C64>,
}

impl BoundaryVectors {
    pub fn new(l: usize) -> Self {
        let dim = 1usize << l;
        let mut ket0 = Array1::zeros(dim);
        let mut ket0bar = Array1::zeros(dim);
        ket0[0] = C64::new(1.0, 0.0);
        ket0bar[dim - 1] = C64::new(1.0, 0.0);
        BoundaryVectors { ket0, ket0bar }
    }
}

/// `⟨0̄| →∏_j ℬ(λ_j, θ + jγ) |0⟩` for any number of factors.
pub fn dwbc_contraction(lambdas: &[C64], theta: C64, ctx: &ModelContext) -> Result<C64> {
    let bv = BoundaryVectors::new(ctx.l);
    let mut v = bv.ket0;
    // rightmost factor acts first
    for (j, &l) in lambdas.iter().enumerate().rev() {
        let b = monodromy_blocks(l, theta + ctx.gamma * (j + 1) as f64, ctx)?.b;
        v = b.apply(&v);
    }
    Ok(bv.ket0bar.dot(&v))
}

/// Domain-wall partition function `Z_θ(X)`.
pub fn dwbc_partition(x: &SpectralSet, theta: C64, ctx: &ModelContext) -> Result<C64> {
    if x.len() != ctx.l {
        return Err(Error::SizeMismatch {
            expected: ctx.l,
            got: x.len(),
        });
    }
    dwbc_contraction(&x.values, theta, ctx)
}

/// Six-vertex `Z(X)` as a sum over all edge configurations of the `L×L`
/// lattice with domain-wall boundaries. Independent of the operator code;
/// trigonometric regime, `L ≤ 3`.
pub fn dwbc_partition_paths(x: &SpectralSet, ctx: &ModelContext) -> Result<C64> {
    ctx.require_trig()?;
    let l = ctx.l;
    if x.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: x.len(),
        });
    }
    if l > 3 {
        return Err(Error::InvalidModel(
            "path enumeration is limited to L <= 3".into(),
        ));
    }
    // vertex weight: (aux_out, site_out) <- (aux_in, site_in), 0 = up
    let weight = |lam: C64, ao: usize, so: usize, ai: usize, si: usize| -> C64 {
        if ao + so != ai + si {
            return C64::default();
        }
        let (a, b, c) = trig_weights(lam, ctx.gamma);
        if ao == so {
            a
        } else if ao == ai {
            b
        } else {
            c
        }
    };
    let vert_bits = (l - 1) * l;
    let horiz_bits = l * (l - 1);
    let mut total = C64::default();
    for mask in 0u64..(1u64 << (vert_bits + horiz_bits)) {
        // chain state between factors: v[0] = all down, v[L] = all up
        let vert = |j: usize, i: usize| -> usize {
            if j == 0 {
                1
            } else if j == l {
                0
            } else {
                ((mask >> ((j - 1) * l + i)) & 1) as usize
            }
        };
        // aux state along row j: h[0] = up, h[L] = down
        let horiz = |j: usize, i: usize| -> usize {
            if i == 0 {
                0
            } else if i == l {
                1
            } else {
                ((mask >> (vert_bits + j * (l - 1) + i - 1)) & 1) as usize
            }
        };
        let mut w = C64::new(1.0, 0.0);
        'rows: for j in 0..l {
            for i in 0..l {
                let v = weight(
                    x.values[j] - ctx.mu[i],
                    horiz(j, i),
                    vert(j, i),
                    horiz(j, i + 1),
                    vert(j + 1, i),
                );
                w *= v;
                if w == C64::default() {
                    break 'rows;
                }
            }
        }
        total += w;
    }
    Ok(total)
}

/// `S_n = ⟨0| ←∏ C(λ^C_i) →∏ B(λ^B_i) |0⟩` in the six-vertex limit.
pub fn scalar_product_bf(xb: &SpectralSet, yc: &SpectralSet, ctx: &ModelContext) -> Result<C64> {
    ctx.require_trig()?;
    if xb.len() != yc.len() {
        return Err(Error::SizeMismatch {
            expected: xb.len(),
            got: yc.len(),
        });
    }
    let bv = BoundaryVectors::new(ctx.l);
    let mut v = bv.ket0.clone();
    for &l in xb.values.iter().rev() {
        v = monodromy_blocks(l, C64::default(), ctx)?.b.apply(&v);
    }
    // ←∏ C = C(λ_n) ⋯ C(λ_1): C(λ_1) acts first
    for &l in yc.values.iter() {
        v = monodromy_blocks(l, C64::default(), ctx)?.c.apply(&v);
    }
    Ok(bv.ket0.dot(&v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HwResiduals {
    /// Worst `ρ` over the eight eigenvalue statements.
    pub eigen: f64,
    /// Worst `‖op·v‖_max / ‖op‖_max` over the four annihilation statements.
    pub annihilation: f64,
}

impl HwResiduals {
    pub fn max(&self) -> f64 {
        worst(self.eigen, self.annihilation)
    }
}

/// Checks the actions of `𝒜, 𝒟` (eigenvalues) and `𝒞, ℬ` (annihilation) on
/// `|0⟩, |0̄⟩` and their duals.
pub fn check_hw_actions(lambda: C64, theta: C64, ctx: &ModelContext) -> Result<HwResiduals> {
    let blocks = monodromy_blocks(lambda, theta, ctx)?;
    let bv = BoundaryVectors::new(ctx.l);
    let g = ctx.gamma;
    let lf = (ctx.l as f64 - 1.0) * g;
    let plain: C64 = ctx
        .mu
        .iter()
        .map(|&m| ctx.f(lambda - m))
        .product::<Result<C64>>()?;
    let shifted: C64 = ctx
        .mu
        .iter()
        .map(|&m| ctx.f(lambda - m + g))
        .product::<Result<C64>>()?;
    let a_low = dyn_ratio(theta - g, theta + lf, &ctx.regime)? * plain;
    let d_high = dyn_ratio(theta + g, theta - lf, &ctx.regime)? * plain;

    let (k0, kb) = (&bv.ket0, &bv.ket0bar);
    let eig_checks: [(&ChainOperator, &Array1<C64>, C64, bool); 8] = [
        (&blocks.a, kb, a_low, false),
        (&blocks.a, k0, shifted, false),
        (&blocks.d, k0, d_high, false),
        (&blocks.d, kb, shifted, false),
        (&blocks.a, kb, a_low, true),
        (&blocks.a, k0, shifted, true),
        (&blocks.d, k0, d_high, true),
        (&blocks.d, kb, shifted, true),
    ];
    let mut eigen: f64 = 0.0;
    for (op, v, val, left) in eig_checks {
        let got = if left { op.apply_left(v) } else { op.apply(v) };
        let want = v * val;
        eigen = worst(eigen, ctx.tol.rho(&got, &want));
    }
    let null_checks: [(&ChainOperator, &Array1<C64>, bool); 4] = [
        (&blocks.c, k0, false),
        (&blocks.b, kb, false),
        (&blocks.c, kb, true),
        (&blocks.b, k0, true),
    ];
    let mut annihilation: f64 = 0.0;
    for (op, v, left) in null_checks {
        let got = if left { op.apply_left(v) } else { op.apply(v) };
        let mag = got.iter().map(|x| x.norm()).fold(0.0, worst);
        annihilation = worst(annihilation, mag / op.max_norm().max(ctx.tol.abs_floor));
    }
    Ok(HwResiduals {
        eigen,
        annihilation,
    })
}
