//! Replacement operators, the polynomial form of the six-vertex partition
//! function and the differential operators annihilating it.
//!
//! Variables: `x = e^{2λ}`, `y = e^{2μ}`, `q = e^{γ}`, with
//! `ā(x, y) = x q² − y` and `b̄(x, y) = x − y`.

use ndarray::{Axis, Dimension};

use crate::error::{Error, Result};
use crate::feq::ZEvaluator;
use crate::lattice::{dwbc_contraction, SpectralSet};
use crate::model::{worst, ModelContext};
use crate::poly::MultiPoly;
use crate::special::trig_weights;
use crate::{C64, POLE_FLOOR};

/// Composition of replacement operators `D_i^α` acting on functions of
/// `z_1..z_n`. Slot `k` of the original function reads external argument
/// `map[k]` of an extended argument list `z_0, z_1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dia {
    map: Vec<usize>,
}

impl Dia {
    pub fn identity(n: usize) -> Self {
        Dia {
            map: (1..=n).collect(),
        }
    }

    /// `D_i^α` on functions of `n` variables.
    pub fn replace(n: usize, i: usize, alpha: usize) -> Result<Self> {
        Self::identity(n).then(i, alpha)
    }

    /// `D_i^α ∘ self`: every slot currently reading `z_i` reads `z_α`.
    pub fn then(mut self, i: usize, alpha: usize) -> Result<Self> {
        let n = self.map.len();
        if i == 0 || i > n {
            return Err(Error::IndexError(i));
        }
        if (1..=n).contains(&alpha) {
            return Err(Error::IndexError(alpha));
        }
        for m in &mut self.map {
            if *m == i {
                *m = alpha;
            }
        }
        Ok(self)
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Arguments handed to the original function.
    pub fn args(&self, ext: &[C64]) -> Result<Vec<C64>> {
        self.map
            .iter()
            .map(|&k| ext.get(k).copied().ok_or(Error::IndexError(k)))
            .collect()
    }

    pub fn apply<F>(self, f: F) -> impl Fn(&[C64]) -> Result<C64>
    where
        F: Fn(&[C64]) -> C64,
    {
        move |ext| Ok(f(&self.args(ext)?))
    }
}

/// `D_i^α f` as an evaluator over `(z_0, z_1, …, z_n, …)`.
pub fn dia_apply<F>(
    f: F,
    n: usize,
    i: usize,
    alpha: usize,
) -> Result<impl Fn(&[C64]) -> Result<C64>>
where
    F: Fn(&[C64]) -> C64,
{
    Ok(Dia::replace(n, i, alpha)?.apply(f))
}

/// `Σ_{k=0}^{m} (z_α − z_i)^k / k! · ∂^k p / ∂z_i^k` at `point = (z_1..z_n)`,
/// with `i` one-based.
pub fn dia_realized(p: &MultiPoly, i: usize, m: usize, z_alpha: C64, point: &[C64]) -> Result<C64> {
    if i == 0 || i > p.nvars() {
        return Err(Error::IndexError(i));
    }
    let var = i - 1;
    let actual = p.degree_in(var);
    if actual > m {
        return Err(Error::DegreeMismatch {
            declared: m,
            actual,
        });
    }
    let h = z_alpha - point.get(var).copied().ok_or(Error::IndexError(i))?;
    let mut acc = C64::default();
    let mut coef = C64::new(1.0, 0.0);
    for k in 0..=m {
        acc += coef * p.eval_deriv(point, var, k)?;
        coef *= h / (k + 1) as f64;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeVars {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub q: C64,
}

impl PdeVars {
    pub fn from_lambdas(lambdas: &[C64], ctx: &ModelContext) -> Self {
        PdeVars {
            x: lambdas.iter().map(|l| (l * 2.0).exp()).collect(),
            y: ctx.mu.iter().map(|m| (m * 2.0).exp()).collect(),
            q: ctx.gamma.exp(),
        }
    }

    fn a_bar(&self, x: C64, y: C64) -> C64 {
        x * self.q * self.q - y
    }

    fn b_bar_den(x: C64, y: C64) -> Result<C64> {
        let d = x - y;
        if d.norm() < POLE_FLOOR {
            return Err(Error::CoincidentPoints("x_i = x_j"));
        }
        Ok(d)
    }
}

/// `Z̄(x) = e^{(L−1)Σλ} Z(X)` at the given spectral parameters.
pub fn zbar_value(lambdas: &[C64], ctx: &ModelContext) -> Result<C64> {
    let s: C64 = lambdas.iter().sum();
    Ok((s * (lambdas.len() as f64 - 1.0)).exp() * dwbc_contraction(lambdas, C64::default(), ctx)?)
}

/// Interpolates `Z̄` on the tensor grid `x = e^{2λ}`, `λ ∈ nodes`, in every
/// variable. The result has `max_deg = nodes.len() − 1`.
pub fn interpolate_zbar_on(ctx: &ModelContext, nodes: &[C64]) -> Result<MultiPoly> {
    ctx.require_trig()?;
    let l = ctx.l;
    if l > 4 {
        return Err(Error::InvalidParams(
            "polynomial reconstruction limited to L <= 4",
        ));
    }
    let xs: Vec<C64> = nodes.iter().map(|v| (v * 2.0).exp()).collect();
    let mut p = MultiPoly::zeros(l, nodes.len() - 1);
    let grid = p.coeffs_mut();
    for (idx, v) in grid.indexed_iter_mut() {
        let lam: Vec<C64> = idx.slice().iter().map(|&k| nodes[k]).collect();
        *v = zbar_value(&lam, ctx)?;
    }
    for axis in 0..l {
        for mut lane in grid.lanes_mut(Axis(axis)) {
            let vals: Vec<C64> = lane.iter().copied().collect();
            let co = vandermonde_solve(&xs, &vals).map_err(|_| Error::GridDegenerate)?;
            for (dst, c) in lane.iter_mut().zip(co) {
                *dst = c;
            }
        }
    }
    Ok(p)
}

/// Nodes `λ_k = iπk/m`, so that `x_k` are the `m`-th roots of unity.
pub fn circle_nodes(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::new(0.0, std::f64::consts::PI * k as f64 / m as f64))
        .collect()
}

/// Relative size of the part of an interpolant above `deg`.
pub fn excess_degree_ratio(p: &MultiPoly, deg: usize) -> f64 {
    let top = p
        .coeffs()
        .indexed_iter()
        .filter(|(idx, _)| idx.slice().iter().any(|&e| e > deg))
        .fold(0.0f64, |m, (_, c)| m.max(c.norm()));
    top / p.max_coeff().max(f64::MIN_POSITIVE)
}

pub const DEGREE_BOUND_TOL: f64 = 1e-10;

/// `Z̄` as a polynomial of degree `L − 1` in each `x_i`. One extra node per
/// variable is used so that the degree bound is checked, not assumed.
pub fn interpolate_zbar(ctx: &ModelContext) -> Result<MultiPoly> {
    let l = ctx.l;
    let raw = interpolate_zbar_on(ctx, &circle_nodes(l + 1))?;
    if excess_degree_ratio(&raw, l - 1) > DEGREE_BOUND_TOL {
        return Err(Error::DegreeMismatch {
            declared: l - 1,
            actual: l,
        });
    }
    Ok(raw.truncate(l - 1))
}

/// Monomial coefficients of the interpolant through `(nodes, vals)`.
pub fn vandermonde_solve(nodes: &[C64], vals: &[C64]) -> Result<Vec<C64>> {
    let n = nodes.len();
    if vals.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: vals.len(),
        });
    }
    let scale = nodes.iter().fold(0.0f64, |m, x| m.max(x.norm())).max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (nodes[i] - nodes[j]).norm() < 1e-8 * scale {
                return Err(Error::InterpolationIllConditioned(
                    (nodes[i] - nodes[j]).norm(),
                ));
            }
        }
    }
    let mut a: Vec<Vec<C64>> = nodes
        .iter()
        .zip(vals)
        .map(|(&x, &v)| {
            let mut row: Vec<C64> = (0..n).map(|k| x.powi(k as i32)).collect();
            row.push(v);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))
            .unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        if d.norm() == 0.0 {
            return Err(Error::InterpolationIllConditioned(0.0));
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col] / d;
                if f != C64::default() {
                    let pivot_row = a[col].clone();
                    for (dst, v) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                        *dst -= f * v;
                    }
                }
            }
        }
    }
    Ok((0..n).map(|r| a[r][n] / a[r][r]).collect())
}

/// Normalized residual of the six-vertex functional equation written with
/// `M̄₀`, `N̄_i`.
pub fn fzt_residual(l0: C64, x: &SpectralSet, ctx: &ModelContext, z: &ZEvaluator) -> Result<f64> {
    ctx.require_trig()?;
    let l = ctx.l;
    if x.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: x.len(),
        });
    }
    let g = ctx.gamma;
    let a = |u: C64| trig_weights(u, g).0;
    let b_den = |u: C64| {
        let v = u.sinh();
        if v.norm() < POLE_FLOOR {
            Err(Error::SingularCoefficient("b(λj − λ0)"))
        } else {
            Ok(v)
        }
    };
    let mut m0a = C64::new(1.0, 0.0);
    let mut m0b = C64::new(1.0, 0.0);
    for &m in &ctx.mu {
        m0b *= (l0 - m).sinh();
        m0a *= a(l0 - m);
    }
    for &lj in &x.values {
        m0a *= a(lj - l0) / b_den(lj - l0)?;
    }
    let mut terms = vec![(m0b - m0a) * z(x, C64::default())?];
    for (i, &li) in x.values.iter().enumerate() {
        let mut n = g.sinh() / b_den(li - l0)?;
        for &m in &ctx.mu {
            n *= a(li - m);
        }
        for (j, &lj) in x.values.iter().enumerate() {
            if j != i {
                n *= a(lj - li) / b_den(lj - li)?;
            }
        }
        terms.push(n * z(&x.swap_in(l0, i + 1), C64::default())?);
    }
    Ok(ctx.tol.cancellation(&terms))
}

/// Coefficients `(Ω_k Z̄)(x)` for `k = 0..L−2`, extracted from the
/// dependence of the functional equation on `x_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaActions {
    pub coeffs: Vec<C64>,
    /// Largest individual term magnitude inside `g(x_0)` over the nodes.
    pub term_scale: f64,
    /// Worst mismatch, relative to `term_scale`, of the fitted polynomial at
    /// `x_0` nodes not used in the fit.
    pub holdout_residual: f64,
    /// Radius of the `x_0` node circle.
    pub radius: f64,
}

impl OmegaActions {
    /// Largest `|Ω_k Z̄| · R^k` relative to `term_scale`: the size of each
    /// coefficient's contribution to `g` on the node circle.
    pub fn normalized_max(&self) -> f64 {
        let mut r = 1.0;
        let mut m = 0.0f64;
        for c in &self.coeffs {
            m = worst(m, c.norm() * r);
            r *= self.radius;
        }
        m / self.term_scale
    }
}

const HOLDOUT_NODES: usize = 2;

/// The `x_0` nodes sit on the circle whose radius is the geometric mean of
/// all `|x_i|`, `|y_j|` (the problem is covariant under a common rescaling of
/// `x`, `y`, `x_0`), rotated to stay as far as possible from the poles at
/// `x_0 = x_i`.
pub fn omega_actions(zbar: &MultiPoly, point: &PdeVars) -> Result<OmegaActions> {
    let all: Vec<f64> = point.x.iter().chain(&point.y).map(|v| v.norm()).collect();
    let radius = (all.iter().map(|v| v.ln()).sum::<f64>() / all.len() as f64).exp();
    omega_actions_on_circle(zbar, point, radius)
}

const ROTATIONS: usize = 32;

/// [`omega_actions`] with the `x_0` nodes on the circle `|x_0| = radius`.
pub fn omega_actions_on_circle(
    zbar: &MultiPoly,
    point: &PdeVars,
    radius: f64,
) -> Result<OmegaActions> {
    let l = point.x.len();
    if l < 2 {
        return Err(Error::InvalidParams("operator family needs L >= 2"));
    }
    if zbar.nvars() != l || point.y.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: zbar.nvars(),
        });
    }
    let q2 = point.q * point.q;
    let lf = l as i32;
    let zx = zbar.eval(&point.x)?;

    let mut n_hat_static = Vec::with_capacity(l);
    for (i, &xi) in point.x.iter().enumerate() {
        let mut v = q2.powi(1 - lf);
        for &yj in &point.y {
            v *= point.a_bar(xi, yj);
        }
        for (j, &xj) in point.x.iter().enumerate() {
            if j != i {
                v *= point.a_bar(xj, xi) / PdeVars::b_bar_den(xj, xi)?;
            }
        }
        n_hat_static.push(v);
    }

    let total = l - 1 + HOLDOUT_NODES;
    let ring = |phase: f64| -> Vec<C64> {
        (0..total)
            .map(|k| {
                C64::from_polar(
                    radius,
                    phase + 2.0 * std::f64::consts::PI * k as f64 / total as f64,
                )
            })
            .collect()
    };
    let clearance = |nodes: &[C64]| -> f64 {
        nodes
            .iter()
            .flat_map(|&n| point.x.iter().map(move |&x| (n - x).norm()))
            .fold(f64::INFINITY, f64::min)
    };
    let nodes = (0..ROTATIONS)
        .map(|r| ring(2.0 * std::f64::consts::PI * r as f64 / (ROTATIONS * total) as f64))
        .max_by(|a, b| clearance(a).total_cmp(&clearance(b)))
        .unwrap();
    let mut term_scale = 0.0f64;
    let mut g = Vec::with_capacity(total);
    for &x0 in &nodes {
        let mut p_y = C64::new(1.0, 0.0);
        let mut p_a = q2.powi(-lf);
        for &yj in &point.y {
            p_y *= x0 - yj;
            p_a *= point.a_bar(x0, yj);
        }
        for &xj in &point.x {
            p_a *= point.a_bar(xj, x0) / PdeVars::b_bar_den(xj, x0)?;
        }
        let m_hat = (p_y - p_a) * q2 / ((q2 - 1.0) * x0);
        let mut terms = vec![m_hat * zx];
        for (i, &xi) in point.x.iter().enumerate() {
            let n_hat = n_hat_static[i] / PdeVars::b_bar_den(xi, x0)?;
            terms.push(n_hat * dia_realized(zbar, i + 1, zbar.max_deg(), x0, &point.x)?);
        }
        term_scale = terms.iter().fold(term_scale, |m, t| m.max(t.norm()));
        g.push(terms.into_iter().sum::<C64>());
    }
    let term_scale = term_scale.max(f64::MIN_POSITIVE);
    let coeffs = vandermonde_solve(&nodes[..l - 1], &g[..l - 1])?;
    let holdout_residual = nodes[l - 1..]
        .iter()
        .zip(&g[l - 1..])
        .map(|(&x0, &gv)| {
            let fit: C64 = coeffs
                .iter()
                .rev()
                .fold(C64::default(), |acc, &c| acc * x0 + c);
            (fit - gv).norm() / term_scale
        })
        .fold(0.0, worst);
    Ok(OmegaActions {
        coeffs,
        term_scale,
        holdout_residual,
        radius,
    })
}

/// Individual terms of the closed-form leading operator applied to `zbar`:
/// `[Σ_i ā(x_i, y_i)] Z̄` followed by one derivative term per `x_i`.
pub fn omega_leading_terms(zbar: &MultiPoly, point: &PdeVars) -> Result<Vec<C64>> {
    let l = point.x.len();
    if zbar.nvars() != l || point.y.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: zbar.nvars(),
        });
    }
    let diag: C64 = point
        .x
        .iter()
        .zip(&point.y)
        .map(|(&x, &y)| point.a_bar(x, y))
        .sum();
    let mut terms = vec![diag * zbar.eval(&point.x)?];
    let fact: f64 = (1..l).map(|k| k as f64).product();
    let pre = (point.q * point.q).powi(1 - l as i32) / fact;
    for (i, &xi) in point.x.iter().enumerate() {
        let mut v = pre;
        for &yj in &point.y {
            v *= point.a_bar(xi, yj);
        }
        for (j, &xj) in point.x.iter().enumerate() {
            if j != i {
                v *= point.a_bar(xj, xi) / PdeVars::b_bar_den(xj, xi)?;
            }
        }
        terms.push(-v * zbar.eval_deriv(&point.x, i, l - 1)?);
    }
    Ok(terms)
}

pub fn omega_leading_apply(zbar: &MultiPoly, point: &PdeVars) -> Result<C64> {
    Ok(omega_leading_terms(zbar, point)?.into_iter().sum())
}
