//! Functional equations obtained by projecting Yang-Baxter relations, and
//! the operator identities they are derived from.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::lattice::{BoundaryVectors, SpectralSet};
use crate::model::{worst, ModelContext};
use crate::operator::{ordered_product, ChainOperator};
use crate::special::{dyn_ratio, trig_weights};
use crate::yb::{monodromy_blocks, MonodromyBlocks};
use crate::{C64, POLE_FLOOR};

/// Evaluator for `Z_θ(X)`.
pub type ZEvaluator<'a> = dyn Fn(&SpectralSet, C64) -> Result<C64> + 'a;
/// Evaluator for `S_n(X^B | Y^C)`.
pub type SEvaluator<'a> = dyn Fn(&SpectralSet, &SpectralSet) -> Result<C64> + 'a;

/// Coefficients of
/// `M₀ Z_{θ−γ}(X^{1,L}) + Σ_{i=0}^{L} N_i Z_θ(X^{0,L}_i) = 0`.
///
/// `n0` multiplies `Z_θ(X^{1,L})`; `n[i-1]` multiplies `Z_θ(X^{0,L}_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FxCoefficients {
    pub m0: C64,
    pub n0: C64,
    pub n: Vec<C64>,
}

pub fn fx_coefficients(
    l0: C64,
    x: &SpectralSet,
    theta: C64,
    ctx: &ModelContext,
) -> Result<FxCoefficients> {
    let l = ctx.l;
    if x.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: x.len(),
        });
    }
    let g = ctx.gamma;
    let lf = l as f64;
    let mut m0 = dyn_ratio(theta, theta + g * lf, &ctx.regime)?;
    for &m in &ctx.mu {
        m0 *= ctx.f(l0 - m)?;
    }
    let fg = ctx.f(g)?;
    let all = x.prepend(l0);
    let mut coeffs = Vec::with_capacity(l + 1);
    for (i, &li) in all.values.iter().enumerate() {
        let mut v = -dyn_ratio(theta + g + l0 - li, theta + g * (lf + 1.0), &ctx.regime)? * fg
            / ctx.f_den(l0 - li + g, "f(λ0 − λi + γ)")?;
        for &m in &ctx.mu {
            v *= ctx.f(li - m + g)?;
        }
        for (k, &lk) in all.values.iter().enumerate() {
            if k != i {
                v *= ctx.f(lk - li + g)? / ctx.f_den(lk - li, "f(λ − λi)")?;
            }
        }
        coeffs.push(v);
    }
    let n0 = coeffs.remove(0);
    Ok(FxCoefficients { m0, n0, n: coeffs })
}

pub fn fx_residual(
    l0: C64,
    x: &SpectralSet,
    theta: C64,
    ctx: &ModelContext,
    z: &ZEvaluator,
) -> Result<f64> {
    let co = fx_coefficients(l0, x, theta, ctx)?;
    let mut terms = vec![co.m0 * z(x, theta - ctx.gamma)?, co.n0 * z(x, theta)?];
    for (i, &ni) in co.n.iter().enumerate() {
        terms.push(ni * z(&x.swap_in(l0, i + 1), theta)?);
    }
    Ok(ctx.tol.cancellation(&terms))
}

/// Coefficients of the A-type and D-type scalar-product equations.
#[derive(Debug, Clone, PartialEq)]
pub struct SnadCoefficients {
    pub j0: C64,
    pub jt0: C64,
    pub kb: Vec<C64>,
    pub kc: Vec<C64>,
    pub ktb: Vec<C64>,
    pub ktc: Vec<C64>,
}

pub const ALPHA_B: f64 = 1.0;
pub const ALPHA_C: f64 = -1.0;

struct TrigWeights {
    gamma: C64,
}

impl TrigWeights {
    fn a(&self, u: C64) -> C64 {
        trig_weights(u, self.gamma).0
    }

    fn b(&self, u: C64) -> C64 {
        u.sinh()
    }

    fn b_den(&self, u: C64) -> Result<C64> {
        let v = u.sinh();
        if v.norm() < POLE_FLOOR {
            return Err(Error::SingularCoefficient("b(λ − λ′)"));
        }
        Ok(v)
    }

    fn c(&self) -> C64 {
        self.gamma.sinh()
    }

    /// `a(u)/b(u)`.
    fn ratio(&self, u: C64) -> Result<C64> {
        Ok(self.a(u) / self.b_den(u)?)
    }
}

pub fn snad_coefficients(
    l0: C64,
    xb: &SpectralSet,
    yc: &SpectralSet,
    ctx: &ModelContext,
) -> Result<SnadCoefficients> {
    ctx.require_trig()?;
    if xb.len() != yc.len() {
        return Err(Error::SizeMismatch {
            expected: xb.len(),
            got: yc.len(),
        });
    }
    let w = TrigWeights { gamma: ctx.gamma };
    let pa = |v: C64| -> C64 { ctx.mu.iter().map(|&m| w.a(v - m)).product() };
    let pb = |v: C64| -> C64 { ctx.mu.iter().map(|&m| w.b(v - m)).product() };
    let prod_ratio = |set: &[C64], f: &dyn Fn(C64) -> C64| -> Result<C64> {
        set.iter().map(|&v| w.ratio(f(v))).product()
    };
    let j0 = pa(l0) * (prod_ratio(&yc.values, &|v| v - l0)? - prod_ratio(&xb.values, &|v| v - l0)?);
    let jt0 =
        pb(l0) * (prod_ratio(&yc.values, &|v| l0 - v)? - prod_ratio(&xb.values, &|v| l0 - v)?);

    let family = |set: &[C64], alpha: f64| -> Result<(Vec<C64>, Vec<C64>)> {
        let mut k = Vec::with_capacity(set.len());
        let mut kt = Vec::with_capacity(set.len());
        for (i, &li) in set.iter().enumerate() {
            let mut ka = w.c() / w.b_den(li - l0)? * pa(li) * alpha;
            let mut kd = w.c() / w.b_den(l0 - li)? * pb(li) * alpha;
            for (j, &lj) in set.iter().enumerate() {
                if j != i {
                    ka *= w.ratio(lj - li)?;
                    kd *= w.ratio(li - lj)?;
                }
            }
            k.push(ka);
            kt.push(kd);
        }
        Ok((k, kt))
    };
    let (kb, ktb) = family(&xb.values, ALPHA_B)?;
    let (kc, ktc) = family(&yc.values, ALPHA_C)?;
    Ok(SnadCoefficients {
        j0,
        jt0,
        kb,
        kc,
        ktb,
        ktc,
    })
}

/// Normalized residuals of the (A-type, D-type) scalar-product equations.
pub fn snad_residuals(
    l0: C64,
    xb: &SpectralSet,
    yc: &SpectralSet,
    ctx: &ModelContext,
    s: &SEvaluator,
) -> Result<(f64, f64)> {
    let co = snad_coefficients(l0, xb, yc, ctx)?;
    let base = s(xb, yc)?;
    let mut ta = vec![co.j0 * base];
    let mut td = vec![co.jt0 * base];
    for i in 0..xb.len() {
        let sb = s(&xb.swap_in(l0, i + 1), yc)?;
        ta.push(co.kb[i] * sb);
        td.push(co.ktb[i] * sb);
        let sc = s(xb, &yc.swap_in(l0, i + 1))?;
        ta.push(co.kc[i] * sc);
        td.push(co.ktc[i] * sc);
    }
    Ok((ctx.tol.cancellation(&ta), ctx.tol.cancellation(&td)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// `A(λ₁)B(λ₂)` exchange; the dynamical form in the elliptic regime.
    Ab,
    /// `ℬ(λ₁, θ)ℬ(λ₂, θ+γ) = ℬ(λ₂, θ)ℬ(λ₁, θ+γ)`.
    Bb,
    /// `𝒜` through a string of `n` dynamical `ℬ` operators.
    Abn(usize),
    /// `A(λ₀)` through `←∏C →∏B`, `n` of each; six-vertex only.
    Tay(usize),
    /// `D(λ₀)` through `←∏C →∏B`; six-vertex only.
    Tdy(usize),
}

/// Arguments of an identity check. `lambdas` holds `λ₁..λ_n` (the `B`
/// family), `lambdas_c` the `C` family where needed.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityPoint {
    pub l0: C64,
    pub lambdas: Vec<C64>,
    pub lambdas_c: Vec<C64>,
    pub theta: C64,
}

struct Algebra<'a> {
    ctx: &'a ModelContext,
}

impl<'a> Algebra<'a> {
    fn blocks(&self, l: C64, theta: C64) -> Result<MonodromyBlocks> {
        monodromy_blocks(l, theta, self.ctx)
    }

    /// `Y_θ(λ₁..λ_n) = →∏_j ℬ(λ_j, θ + jγ)`.
    fn y(&self, ls: &[C64], theta: C64) -> Result<ChainOperator> {
        let ops = ls
            .iter()
            .enumerate()
            .map(|(j, &l)| Ok(self.blocks(l, theta + self.ctx.gamma * (j + 1) as f64)?.b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ordered_product(self.ctx.dim(), &ops))
    }

    /// `←∏ C(λ^C) →∏ B(λ^B)` in the six-vertex limit.
    fn cb(&self, yc: &[C64], xb: &[C64]) -> Result<ChainOperator> {
        let z = C64::default();
        let mut ops = Vec::with_capacity(yc.len() + xb.len());
        for &l in yc.iter().rev() {
            ops.push(self.blocks(l, z)?.c);
        }
        for &l in xb {
            ops.push(self.blocks(l, z)?.b);
        }
        Ok(ordered_product(self.ctx.dim(), &ops))
    }

    fn f_ratio(&self, num: C64, den: C64, what: &'static str) -> Result<C64> {
        Ok(self.ctx.f(num)? / self.ctx.f_den(den, what)?)
    }
}

fn replaced(set: &[C64], i: usize, v: C64) -> Vec<C64> {
    let mut out = set.to_vec();
    out[i] = v;
    out
}

fn without(set: &[C64], i: usize, front: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(set.len());
    out.push(front);
    out.extend(
        set.iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, &v)| v),
    );
    out
}

/// `ρ(LHS, RHS)` of the selected operator identity.
pub fn verify_identity(kind: IdentityKind, p: &IdentityPoint, ctx: &ModelContext) -> Result<f64> {
    let alg = Algebra { ctx };
    let g = ctx.gamma;
    let t = p.theta;
    let need = |n: usize, got: usize| -> Result<()> {
        if got < n {
            Err(Error::SizeMismatch { expected: n, got })
        } else {
            Ok(())
        }
    };
    let (lhs, rhs) = match kind {
        IdentityKind::Ab => {
            need(1, p.lambdas.len())?;
            let (l1, l2) = (p.l0, p.lambdas[0]);
            let lhs = &alg.blocks(l1, t + g)?.a * &alg.blocks(l2, t)?.b;
            let k1 = alg.f_ratio(l2 - l1 + g, l2 - l1, "f(λ2 − λ1)")?
                * dyn_ratio(t + g, t + g * 2.0, &ctx.regime)?;
            let k2 = alg.f_ratio(g, l2 - l1, "f(λ2 − λ1)")?
                * dyn_ratio(t + g - l2 + l1, t + g * 2.0, &ctx.regime)?;
            let t1 = &alg.blocks(l2, t + g)?.b * &alg.blocks(l1, t + g * 2.0)?.a;
            let t2 = &alg.blocks(l1, t + g)?.b * &alg.blocks(l2, t + g * 2.0)?.a;
            (lhs, &t1.scaled(k1) - &t2.scaled(k2))
        }
        IdentityKind::Bb => {
            need(1, p.lambdas.len())?;
            let (l1, l2) = (p.l0, p.lambdas[0]);
            let lhs = &alg.blocks(l1, t)?.b * &alg.blocks(l2, t + g)?.b;
            let rhs = &alg.blocks(l2, t)?.b * &alg.blocks(l1, t + g)?.b;
            (lhs, rhs)
        }
        IdentityKind::Abn(n) => {
            need(n, p.lambdas.len())?;
            let ls = &p.lambdas[..n];
            let l0 = p.l0;
            let top = t + g * (n as f64 + 1.0);
            let lhs = &alg.blocks(l0, t + g)?.a * &alg.y(ls, t - g)?;
            let mut k0 = dyn_ratio(t + g, top, &ctx.regime)?;
            for &lj in ls {
                k0 *= alg.f_ratio(lj - l0 + g, lj - l0, "f(λj − λ0)")?;
            }
            let mut rhs = (&alg.y(ls, t)? * &alg.blocks(l0, top)?.a).scaled(k0);
            for (i, &li) in ls.iter().enumerate() {
                let mut ki = dyn_ratio(t + g - li + l0, top, &ctx.regime)?
                    * alg.f_ratio(g, li - l0, "f(λi − λ0)")?;
                for (j, &lj) in ls.iter().enumerate() {
                    if j != i {
                        ki *= alg.f_ratio(lj - li + g, lj - li, "f(λj − λi)")?;
                    }
                }
                let term = &alg.y(&without(ls, i, l0), t)? * &alg.blocks(li, top)?.a;
                rhs = &rhs - &term.scaled(ki);
            }
            (lhs, rhs)
        }
        IdentityKind::Tay(n) | IdentityKind::Tdy(n) => {
            ctx.require_trig()?;
            need(n, p.lambdas.len())?;
            need(n, p.lambdas_c.len())?;
            let is_a = matches!(kind, IdentityKind::Tay(_));
            let (xb, yc, l0) = (&p.lambdas[..n], &p.lambdas_c[..n], p.l0);
            let w = TrigWeights { gamma: g };
            // orientation of the spectral differences: A uses (λ − λ0), D uses (λ0 − λ)
            let d = |u: C64, v: C64| if is_a { u - v } else { v - u };
            let diag = |l: C64| -> Result<ChainOperator> {
                let bl = alg.blocks(l, C64::default())?;
                Ok(if is_a { bl.a } else { bl.d })
            };
            let side = |set: &[C64], left: bool| -> Result<ChainOperator> {
                let mut k0 = C64::new(1.0, 0.0);
                for &li in set {
                    k0 *= w.ratio(d(li, l0))?;
                }
                let core = alg.cb(yc, xb)?;
                let mut acc = if left {
                    &diag(l0)? * &core
                } else {
                    &core * &diag(l0)?
                };
                acc = acc.scaled(k0);
                for (i, &li) in set.iter().enumerate() {
                    let mut ki = w.c() / w.b_den(d(li, l0))?;
                    for (j, &lj) in set.iter().enumerate() {
                        if j != i {
                            ki *= w.ratio(d(lj, li))?;
                        }
                    }
                    let term = if left {
                        &diag(li)? * &alg.cb(&replaced(yc, i, l0), xb)?
                    } else {
                        &alg.cb(yc, &replaced(xb, i, l0))? * &diag(li)?
                    };
                    acc = &acc - &term.scaled(ki);
                }
                Ok(acc)
            };
            (side(yc, true)?, side(xb, false)?)
        }
    };
    Ok(ctx.tol.rho(&lhs.matrix(), &rhs.matrix()))
}

/// `π(F) = ⟨ψ′|F|ψ⟩` with plain-transpose duals.
pub fn project(op: &ChainOperator, bra: &Array1<C64>, ket: &Array1<C64>) -> C64 {
    bra.dot(&op.apply(ket))
}

/// Agreement between projecting the degree-`(L+1)` relation term by term
/// and the reduced scalar equation used by [`fx_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedAbn {
    /// Worst `ρ` between a projected operator term and its reduction to
    /// `Z_θ` values via the highest/lowest-weight eigenvalues.
    pub reduction: f64,
    /// Cancellation residual of the projected relation itself.
    pub projected: f64,
}

pub fn projected_abn(
    l0: C64,
    x: &SpectralSet,
    theta: C64,
    ctx: &ModelContext,
) -> Result<ProjectedAbn> {
    let l = ctx.l;
    if x.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: x.len(),
        });
    }
    let alg = Algebra { ctx };
    let bv = BoundaryVectors::new(l);
    let g = ctx.gamma;
    let top = theta + g * (l as f64 + 1.0);
    let pi = |op: &ChainOperator| project(op, &bv.ket0bar, &bv.ket0);
    let z = |ls: &[C64], t: C64| crate::lattice::dwbc_contraction(ls, t, ctx);
    let a_eig = |li: C64| -> Result<C64> { ctx.mu.iter().map(|&m| ctx.f(li - m + g)).product() };
    let co = fx_coefficients(l0, x, theta, ctx)?;

    let p_lhs = pi(&(&alg.blocks(l0, theta + g)?.a * &alg.y(&x.values, theta - g)?));
    let mut reduction = ctx.tol.rho_scalar(p_lhs, co.m0 * z(&x.values, theta - g)?);
    let all = x.prepend(l0);
    let mut terms = vec![p_lhs];
    for i in 0..=l {
        let li = all.values[i];
        let rest = all.remove(i);
        let p_i = pi(&(&alg.y(&rest.values, theta)? * &alg.blocks(li, top)?.a));
        reduction = worst(
            reduction,
            ctx.tol
                .rho_scalar(p_i, a_eig(li)? * z(&rest.values, theta)?),
        );
        let ni = if i == 0 { co.n0 } else { co.n[i - 1] };
        terms.push(p_i * ni / a_eig(li)?);
    }
    // terms[0] already carries M₀ through the lowest-weight eigenvalue
    Ok(ProjectedAbn {
        reduction,
        projected: ctx.tol.cancellation(&terms),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{dwbc_partition, scalar_product_bf};
    use crate::special::Regime;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn mus(l: usize) -> Vec<C64> {
        [c(0.1, 0.05), c(-0.2, 0.1), c(0.15, -0.1), c(-0.05, 0.0)][..l].to_vec()
    }

    fn elliptic(l: usize) -> ModelContext {
        ModelContext::new(
            c(0.41, 0.07),
            mus(l),
            Regime::elliptic(c(0.2, 0.0)).unwrap(),
        )
        .unwrap()
    }

    fn trig(l: usize) -> ModelContext {
        ModelContext::new(c(0.41, 0.07), mus(l), Regime::Trigonometric).unwrap()
    }

    const LS: [C64; 4] = [
        C64 { re: 0.3, im: 0.1 },
        C64 { re: -0.4, im: 0.2 },
        C64 { re: 0.7, im: -0.3 },
        C64 { re: -0.8, im: -0.1 },
    ];
    const L0: C64 = C64 { re: 0.05, im: 0.33 };
    const THETA: C64 = C64 { re: 0.8, im: -0.15 };

    #[test]
    fn single_site_coefficients() {
        let ctx = elliptic(1);
        let (l1, t, g, m) = (LS[0], THETA, ctx.gamma, ctx.mu[0]);
        let f = |x: C64| ctx.f(x).unwrap();
        let co = fx_coefficients(L0, &SpectralSet::x(vec![l1]), t, &ctx).unwrap();
        let m0 = f(t) / f(t + g) * f(L0 - m);
        let n1 = -(f(t + g + L0 - l1) / f(t + g * 2.0))
            * (f(g) / f(L0 - l1 + g))
            * f(l1 - m + g)
            * (f(L0 - l1 + g) / f(L0 - l1));
        assert!((co.m0 - m0).norm() < 1e-14 * m0.norm());
        assert!((co.n[0] - n1).norm() < 1e-13 * n1.norm());
    }

    #[test]
    fn coefficients_vanish_with_gamma() {
        let ctx = ModelContext::with_degenerate_gamma(
            c(1e-9, 0.0),
            mus(2),
            Regime::elliptic(c(0.2, 0.0)).unwrap(),
        )
        .unwrap();
        let co = fx_coefficients(L0, &SpectralSet::x(LS[..2].to_vec()), THETA, &ctx).unwrap();
        assert!(co.n.iter().all(|n| n.norm() < 1e-7));
    }

    #[test]
    fn fx_closes_with_bruteforce_z() {
        for ctx in [elliptic(2), trig(3)] {
            let x = SpectralSet::x(LS[..ctx.l].to_vec());
            let z = |s: &SpectralSet, t: C64| dwbc_partition(s, t, &ctx);
            let r = fx_residual(L0, &x, THETA, &ctx, &z).unwrap();
            assert!(r < 1e-9, "L={} residual {r}", ctx.l);
            let scaled = |s: &SpectralSet, t: C64| Ok(dwbc_partition(s, t, &ctx)? * 7.3);
            let r2 = fx_residual(L0, &x, THETA, &ctx, &scaled).unwrap();
            assert!((r - r2).abs() < 1e-12);
        }
    }

    #[test]
    fn snad_special_values() {
        let ctx = trig(2);
        let xb = SpectralSet::x(vec![LS[0]]);
        let yc = SpectralSet::y(vec![LS[1]]);
        let co = snad_coefficients(L0, &xb, &yc, &ctx).unwrap();
        let a = |u: C64| (u + ctx.gamma).sinh();
        let pa: C64 = ctx.mu.iter().map(|&m| a(L0 - m)).product();
        let j0 = pa * (a(LS[1] - L0) / (LS[1] - L0).sinh() - a(LS[0] - L0) / (LS[0] - L0).sinh());
        assert!((co.j0 - j0).norm() < 1e-13 * j0.norm());
        let same = snad_coefficients(L0, &xb, &SpectralSet::y(vec![LS[0]]), &ctx).unwrap();
        assert_eq!(same.j0, C64::default());
        assert_eq!(same.jt0, C64::default());
        assert!(snad_coefficients(L0, &xb, &yc, &elliptic(2)).is_err());
    }

    #[test]
    fn snad_closes_and_is_linear() {
        let ctx = trig(3);
        let xb = SpectralSet::x(LS[..2].to_vec());
        let yc = SpectralSet::y(LS[2..4].to_vec());
        let s = |a: &SpectralSet, b: &SpectralSet| scalar_product_bf(a, b, &ctx);
        let (ra, rd) = snad_residuals(L0, &xb, &yc, &ctx, &s).unwrap();
        assert!(ra < 1e-9 && rd < 1e-9, "{ra} {rd}");
        let s2 = |a: &SpectralSet, b: &SpectralSet| Ok(scalar_product_bf(a, b, &ctx)? * 2.0);
        let (ra2, rd2) = snad_residuals(L0, &xb, &yc, &ctx, &s2).unwrap();
        assert!((ra - ra2).abs() < 1e-12 && (rd - rd2).abs() < 1e-12);
    }

    #[test]
    fn operator_identities_fixed_point() {
        let p = IdentityPoint {
            l0: L0,
            lambdas: LS[..3].to_vec(),
            lambdas_c: LS[1..4].to_vec(),
            theta: THETA,
        };
        let e2 = elliptic(2);
        for kind in [IdentityKind::Ab, IdentityKind::Bb, IdentityKind::Abn(2)] {
            let r = verify_identity(kind, &p, &e2).unwrap();
            assert!(r < 1e-9, "{kind:?}: {r}");
        }
        let t3 = trig(3);
        for kind in [
            IdentityKind::Ab,
            IdentityKind::Abn(3),
            IdentityKind::Tay(2),
            IdentityKind::Tdy(2),
        ] {
            let r = verify_identity(kind, &p, &t3).unwrap();
            assert!(r < 1e-9, "{kind:?}: {r}");
        }
        assert_eq!(
            verify_identity(IdentityKind::Tay(2), &p, &e2),
            Err(Error::RegimeMismatch)
        );
    }

    #[test]
    fn projection_basics() {
        let ctx = elliptic(2);
        let bv = BoundaryVectors::new(2);
        assert_eq!(
            project(&ChainOperator::identity(4), &bv.ket0, &bv.ket0),
            c(1.0, 0.0)
        );
        let b = monodromy_blocks(LS[0], THETA, &ctx).unwrap().b;
        assert_eq!(project(&b, &bv.ket0, &bv.ket0), C64::default());
        let alg = Algebra { ctx: &ctx };
        let y = alg.y(&LS[..2], THETA).unwrap();
        let z = dwbc_partition(&SpectralSet::x(LS[..2].to_vec()), THETA, &ctx).unwrap();
        assert!((project(&y, &bv.ket0bar, &bv.ket0) - z).norm() < 1e-15 * z.norm());
    }

    #[test]
    fn projected_route_agrees() {
        for ctx in [elliptic(2), elliptic(3), trig(2)] {
            let x = SpectralSet::x(LS[..ctx.l].to_vec());
            let r = projected_abn(L0, &x, THETA, &ctx).unwrap();
            assert!(r.reduction < 1e-10 && r.projected < 1e-9, "{r:?}");
        }
    }
}
