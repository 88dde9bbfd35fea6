//! R-matrix, monodromy operators and the (dynamical) Yang-Baxter relations.
//!
//! Operator-valued dynamical arguments such as `θ − γ h₃` are realized by
//! evaluating the local 4×4 block separately on every basis column, using the
//! `h` eigenvalues of the spectator sites of that column.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::model::ModelContext;
use crate::operator::{aux_blocks, product_of, total_weight, ChainOperator, LocalFactor, Mat4};
use crate::special::{trig_weights, Regime};
use crate::{C64, POLE_FLOOR};

/// The R-matrix in the basis `(↑↑, ↑↓, ↓↑, ↓↓)`, auxiliary factor first.
///
/// Elliptic regime:
/// `a± = f(λ+γ)`, `b± = f(λ) f(θ∓γ)/f(θ)`, `c± = f(γ) f(θ∓λ)/f(θ)`.
/// Trigonometric regime: the symmetric six-vertex matrix, `θ` is ignored.
pub fn r_matrix(lambda: C64, theta: C64, ctx: &ModelContext) -> Result<Mat4> {
    let z = C64::new(0.0, 0.0);
    let g = ctx.gamma;
    let m = match ctx.regime {
        Regime::Trigonometric => {
            let (a, b, c) = trig_weights(lambda, g);
            [[a, z, z, z], [z, b, c, z], [z, c, b, z], [z, z, z, a]]
        }
        Regime::Elliptic(_) => {
            let ft = ctx.f(theta)?;
            if ft.norm() < POLE_FLOOR {
                return Err(Error::DynamicalPole {
                    state: 0,
                    shift: theta,
                });
            }
            let a = ctx.f(lambda + g)?;
            let fl = ctx.f(lambda)? / ft;
            let fg = ctx.f(g)? / ft;
            let b_plus = fl * ctx.f(theta - g)?;
            let b_minus = fl * ctx.f(theta + g)?;
            let c_plus = fg * ctx.f(theta - lambda)?;
            let c_minus = fg * ctx.f(theta + lambda)?;
            [
                [a, z, z, z],
                [z, b_plus, c_plus, z],
                [z, c_minus, b_minus, z],
                [z, z, z, a],
            ]
        }
    };
    Ok(m)
}

/// `R_{first,second}(λ, θ − γ Σ_{s∈shift_sites} h_s)` on an `n_sites` space.
pub(crate) fn dynamical_factor(
    n_sites: usize,
    first: usize,
    second: usize,
    lambda: C64,
    theta: C64,
    shift_sites: &[usize],
    ctx: &ModelContext,
) -> Result<LocalFactor> {
    let span = shift_sites.len() as i32;
    let mut cache: Vec<Option<Mat4>> = vec![None; 2 * shift_sites.len() + 1];
    LocalFactor::build(n_sites, first, second, |col| {
        let w = total_weight(col, shift_sites, n_sites);
        let slot = (w + span) as usize;
        if let Some(m) = cache[slot] {
            return Ok(m);
        }
        let shifted = theta - ctx.gamma * w as f64;
        let m = r_matrix(lambda, shifted, ctx).map_err(|e| match e {
            Error::DynamicalPole { shift, .. } => Error::DynamicalPole { state: col, shift },
            other => other,
        })?;
        cache[slot] = Some(m);
        Ok(m)
    })
}

/// Residual `ρ(LHS, RHS)` of the dynamical Yang-Baxter equation
///
/// ```text
/// R12(λ12, θ−γh3) R13(λ13, θ) R23(λ23, θ−γh1)
///     = R23(λ23, θ) R13(λ13, θ−γh2) R12(λ12, θ)
/// ```
pub fn verify_dybe(l1: C64, l2: C64, l3: C64, theta: C64, ctx: &ModelContext) -> Result<f64> {
    let r = |i: usize, j: usize, l: C64, shift: &[usize]| {
        dynamical_factor(3, i, j, l, theta, shift, ctx)
    };
    let lhs = product_of(
        &[
            r(0, 1, l1 - l2, &[2])?,
            r(0, 2, l1 - l3, &[])?,
            r(1, 2, l2 - l3, &[0])?,
        ],
        8,
    );
    let rhs = product_of(
        &[
            r(1, 2, l2 - l3, &[])?,
            r(0, 2, l1 - l3, &[1])?,
            r(0, 1, l1 - l2, &[])?,
        ],
        8,
    );
    Ok(ctx.tol.rho(&lhs, &rhs))
}

/// Ordered product `R_{a,c₁} R_{a,c₂} ⋯ R_{a,c_L}` with
/// `θ̂_i = θ − γ Σ_{k>i} h_{c_k} − γ Σ_{s∈extra} h_s`.
pub(crate) fn monodromy_matrix(
    n_sites: usize,
    aux: usize,
    chain: &[usize],
    lambda: C64,
    theta: C64,
    extra_shift: &[usize],
    ctx: &ModelContext,
) -> Result<Array2<C64>> {
    let factors = chain
        .iter()
        .enumerate()
        .map(|(i, &site)| {
            let mut shift: Vec<usize> = chain[i + 1..].to_vec();
            shift.extend_from_slice(extra_shift);
            dynamical_factor(n_sites, aux, site, lambda - ctx.mu[i], theta, &shift, ctx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(product_of(&factors, 1 << n_sites))
}

/// The four chain blocks of the monodromy matrix.
#[derive(Debug, Clone)]
pub struct MonodromyBlocks {
    pub a: ChainOperator,
    pub b: ChainOperator,
    pub c: ChainOperator,
    pub d: ChainOperator,
}

pub fn monodromy_blocks(lambda: C64, theta: C64, ctx: &ModelContext) -> Result<MonodromyBlocks> {
    let chain: Vec<usize> = (1..=ctx.l).collect();
    let m =
        monodromy_matrix(ctx.l + 1, 0, &chain, lambda, theta, &[], ctx).map_err(|e| match e {
            // report the chain state, not the aux ⊗ chain index
            Error::DynamicalPole { state, shift } => Error::DynamicalPole {
                state: state % ctx.dim(),
                shift,
            },
            other => other,
        })?;
    let [a, b, c, d] = aux_blocks(&m);
    Ok(MonodromyBlocks { a, b, c, d })
}

/// Residual of the dynamical RLL relation on `aux_a ⊗ aux_b ⊗ chain`:
///
/// ```text
/// R_ab(λ1−λ2, θ−γH) T_a(λ1, θ) T_b(λ2, θ−γh_a)
///     = T_b(λ2, θ) T_a(λ1, θ−γh_b) R_ab(λ1−λ2, θ)
/// ```
pub fn verify_rll(l1: C64, l2: C64, theta: C64, ctx: &ModelContext) -> Result<f64> {
    let n = ctx.l + 2;
    let chain: Vec<usize> = (2..n).collect();
    let dim = 1 << n;
    let r_shifted = dynamical_factor(n, 0, 1, l1 - l2, theta, &chain, ctx)?.to_dense();
    let r_plain = dynamical_factor(n, 0, 1, l1 - l2, theta, &[], ctx)?.to_dense();
    let ta = monodromy_matrix(n, 0, &chain, l1, theta, &[], ctx)?;
    let tb_shifted = monodromy_matrix(n, 1, &chain, l2, theta, &[0], ctx)?;
    let tb = monodromy_matrix(n, 1, &chain, l2, theta, &[], ctx)?;
    let ta_shifted = monodromy_matrix(n, 0, &chain, l1, theta, &[1], ctx)?;
    let lhs = r_shifted.dot(&ta).dot(&tb_shifted);
    let rhs = tb.dot(&ta_shifted).dot(&r_plain);
    debug_assert_eq!(lhs.nrows(), dim);
    Ok(ctx.tol.rho(&lhs, &rhs))
}

/// `H = Σ h_i`, diagonal with `#up − #down` per basis state.
pub fn weight_operator(ctx: &ModelContext) -> ChainOperator {
    let sites: Vec<usize> = (0..ctx.l).collect();
    let diag = (0..ctx.dim())
        .map(|i| C64::new(total_weight(i, &sites, ctx.l) as f64, 0.0))
        .collect::<Vec<_>>();
    ChainOperator::from_raw(Array2::from_diag(&ndarray::Array1::from(diag)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::total_weight;
    use crate::special::Regime;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn elliptic_ctx(mu: Vec<C64>) -> ModelContext {
        ModelContext::new(c(0.41, 0.07), mu, Regime::elliptic(c(0.2, 0.0)).unwrap()).unwrap()
    }

    #[test]
    fn gamma_zero_gives_scaled_identity() {
        let ctx = ModelContext::with_degenerate_gamma(
            C64::default(),
            vec![C64::default()],
            Regime::elliptic(c(0.2, 0.0)).unwrap(),
        )
        .unwrap();
        let l = c(0.3, 0.1);
        let m = r_matrix(l, c(0.7, -0.2), &ctx).unwrap();
        let fl = ctx.f(l).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { fl } else { C64::default() };
                assert!((v - want).norm() < 1e-12 * fl.norm());
            }
        }
    }

    #[test]
    fn weight_zero_condition() {
        let ctx = elliptic_ctx(vec![C64::default()]);
        let m = r_matrix(c(0.3, 0.2), c(0.9, 0.1), &ctx).unwrap();
        let h = [2.0, 0.0, 0.0, -2.0]; // h⊗1 + 1⊗h
        for i in 0..4 {
            for j in 0..4 {
                let comm = m[i][j] * (h[j] - h[i]);
                assert!(comm.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn trig_r_matrix_at_zero() {
        let g = c(0.41, 0.07);
        let ctx = ModelContext::new(g, vec![C64::default()], Regime::Trigonometric).unwrap();
        let m = r_matrix(C64::default(), c(5.0, 0.0), &ctx).unwrap();
        assert_eq!(m[1][1], C64::default());
        assert_eq!(m[2][2], C64::default());
        assert_eq!(m[0][0], g.sinh());
        assert_eq!(m[1][2], g.sinh());
        assert_eq!(m[2][1], g.sinh());
        assert_eq!(m[3][3], g.sinh());
    }

    #[test]
    fn dynamical_pole_reported() {
        let ctx = elliptic_ctx(vec![C64::default()]);
        assert!(matches!(
            r_matrix(c(0.3, 0.0), C64::default(), &ctx),
            Err(Error::DynamicalPole { .. })
        ));
        // θ = γ makes θ̂ vanish on columns whose spectator site is up
        let err = verify_dybe(c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), ctx.gamma, &ctx).unwrap_err();
        assert!(matches!(err, Error::DynamicalPole { .. }));
    }

    #[test]
    fn dybe_holds_at_fixed_points() {
        let ctx = elliptic_ctx(vec![C64::default()]);
        let r = verify_dybe(c(0.3, 0.1), c(-0.5, 0.2), c(0.1, -0.3), c(0.8, 0.15), &ctx).unwrap();
        assert!(r < 1e-10, "{r}");
        let trig = ctx.trigonometric();
        let r = verify_dybe(
            c(0.3, 0.1),
            c(-0.5, 0.2),
            c(0.1, -0.3),
            C64::default(),
            &trig,
        )
        .unwrap();
        assert!(r < 1e-12, "{r}");
        let r = verify_dybe(c(0.3, 0.1), c(0.3, 0.1), c(0.1, -0.3), c(0.8, 0.15), &ctx).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn single_site_b_entry() {
        let mu = c(0.05, -0.1);
        let ctx = elliptic_ctx(vec![mu]);
        let (l, t) = (c(0.3, 0.2), c(0.9, 0.1));
        let blocks = monodromy_blocks(l, t, &ctx).unwrap();
        let b = blocks.b.matrix();
        let want = ctx.f(ctx.gamma).unwrap() * ctx.f(t - l + mu).unwrap() / ctx.f(t).unwrap();
        assert!((b[[1, 0]] - want).norm() < 1e-14);
        assert_eq!(b[[0, 0]], C64::default());
        assert_eq!(b[[0, 1]], C64::default());
        assert_eq!(b[[1, 1]], C64::default());
    }

    #[test]
    fn blocks_are_weight_graded() {
        let ctx = elliptic_ctx(vec![c(0.1, 0.0), c(-0.2, 0.1), c(0.05, 0.05)]);
        let blocks = monodromy_blocks(c(0.3, 0.2), c(0.9, 0.1), &ctx).unwrap();
        let sites = [0, 1, 2];
        let w = |i: usize| total_weight(i, &sites, 3);
        for (op, delta) in [
            (&blocks.a, 0),
            (&blocks.d, 0),
            (&blocks.b, -2),
            (&blocks.c, 2),
        ] {
            let m = op.matrix();
            for i in 0..8 {
                for j in 0..8 {
                    if w(i) - w(j) != delta {
                        assert_eq!(m[[i, j]], C64::default(), "entry ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn trig_a_on_reference_state() {
        let mu = vec![c(0.1, 0.0), c(-0.2, 0.1)];
        let ctx = ModelContext::new(c(0.41, 0.07), mu.clone(), Regime::Trigonometric).unwrap();
        let l = c(0.3, 0.2);
        let blocks = monodromy_blocks(l, C64::default(), &ctx).unwrap();
        let eig: C64 = mu.iter().map(|m| (l - m + ctx.gamma).sinh()).product();
        let col = blocks.a.matrix().column(0).to_owned();
        assert!((col[0] - eig).norm() < 1e-14);
        assert!(col.iter().skip(1).all(|x| x.norm() == 0.0));
    }

    #[test]
    fn rll_small_chains() {
        let ctx = elliptic_ctx(vec![c(0.1, 0.0), c(-0.2, 0.1)]);
        let r = verify_rll(c(0.3, 0.2), c(-0.4, 0.1), c(0.9, 0.1), &ctx).unwrap();
        assert!(r < 1e-9, "{r}");
        let r = verify_rll(c(0.3, 0.2), c(0.3, 0.2), c(0.9, 0.1), &ctx).unwrap();
        assert!(r < 1e-9, "{r}");
        let trig = ModelContext::new(
            ctx.gamma,
            vec![c(0.1, 0.0), c(-0.2, 0.1), c(0.0, 0.3)],
            Regime::Trigonometric,
        )
        .unwrap();
        let r = verify_rll(c(0.3, 0.2), c(-0.4, 0.1), C64::default(), &trig).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn weight_operator_on_reference_states() {
        let ctx =
            ModelContext::new(c(0.4, 0.0), vec![C64::default()], Regime::Trigonometric).unwrap();
        let h = weight_operator(&ctx);
        assert_eq!(h.matrix()[[0, 0]], c(1.0, 0.0));
        assert_eq!(h.matrix()[[1, 1]], c(-1.0, 0.0));
        let ctx3 =
            ModelContext::new(c(0.4, 0.0), vec![C64::default(); 3], Regime::Trigonometric).unwrap();
        let h3 = weight_operator(&ctx3);
        assert_eq!(h3.matrix()[[0, 0]], c(3.0, 0.0));
        assert_eq!(h3.matrix()[[7, 7]], c(-3.0, 0.0));
    }
}
