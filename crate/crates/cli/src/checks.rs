//! Named verification checks and their per-sample evaluation.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use ybalg::feq::{fx_residual, snad_residuals, verify_identity, IdentityKind, IdentityPoint};
use ybalg::lattice::{check_hw_actions, dwbc_partition, scalar_product_bf};
use ybalg::pde::{
    dia_realized, fzt_residual, interpolate_zbar, omega_actions, omega_leading_apply,
    omega_leading_terms, Dia, PdeVars,
};
use ybalg::residue::{sn_contour, z_contour};
use ybalg::sampler::{theta_shift_range, Sampler};
use ybalg::yb::{verify_dybe, verify_rll};
use ybalg::{Error, ModelContext, MultiPoly, Result, SpectralSet, C64};

use crate::config::RunConfig;
use crate::report::{pair, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Dybe,
    Rll,
    HwActions,
    Identities,
    Fx,
    Snad,
    ZContourVsBf,
    SnContourVsBf,
    Fzt,
    PdeOmega,
    PdeLeading,
    DiaRealization,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Dybe,
        Check::Rll,
        Check::HwActions,
        Check::Identities,
        Check::Fx,
        Check::Snad,
        Check::ZContourVsBf,
        Check::SnContourVsBf,
        Check::Fzt,
        Check::PdeOmega,
        Check::PdeLeading,
        Check::DiaRealization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Dybe => "dybe",
            Check::Rll => "rll",
            Check::HwActions => "hw-actions",
            Check::Identities => "identities",
            Check::Fx => "fx",
            Check::Snad => "snad",
            Check::ZContourVsBf => "z-contour-vs-bf",
            Check::SnContourVsBf => "sn-contour-vs-bf",
            Check::Fzt => "fzt",
            Check::PdeOmega => "pde-omega",
            Check::PdeLeading => "pde-leading",
            Check::DiaRealization => "dia-realization",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::ZContourVsBf => 1e-8,
            Check::SnContourVsBf => 1e-6,
            Check::PdeOmega | Check::PdeLeading => 1e-7,
            Check::DiaRealization => 1e-11,
            _ => 1e-9,
        }
    }

    /// Checks defined only for the six-vertex model; they always run with
    /// the trigonometric weights whatever the configured regime.
    pub fn six_vertex_only(self) -> bool {
        matches!(
            self,
            Check::Snad | Check::SnContourVsBf | Check::Fzt | Check::PdeOmega | Check::PdeLeading
        )
    }

    fn index(self) -> u64 {
        Check::ALL.iter().position(|&c| c == self).unwrap() as u64
    }

    /// RNG stream of a sample: distinct per (check, sample, redraw).
    pub fn stream(self, sample_index: usize, redraw: u64) -> u64 {
        (redraw << 48) | (self.index() << 32) | sample_index as u64
    }
}

const MAX_REDRAWS: u64 = 5;

/// Evaluates one sample. `params` and `values` are filled as inputs are
/// drawn, so they are meaningful even when an error is returned.
pub fn evaluate(
    check: Check,
    cfg: &RunConfig,
    sample_index: usize,
    params: &mut Params,
    values: &mut BTreeMap<String, Value>,
) -> Result<f64> {
    let cfg = if check.six_vertex_only() {
        cfg.trigonometric()
    } else {
        cfg.clone()
    };
    let mut redraw = 0;
    loop {
        let mut s = Sampler::new(cfg.seed, check.stream(sample_index, redraw));
        let mu = match &cfg.mu {
            Some(m) => m.clone(),
            None => s.mu(cfg.l),
        };
        *params = Params::new(cfg.l, cfg.gamma, &cfg.regime, &mu);
        let ctx = ModelContext::new(cfg.gamma, mu, cfg.regime)?;
        values.clear();
        match evaluate_with(check, &ctx, sample_index, &mut s, params, values) {
            Err(Error::SingularR { .. }) if redraw < MAX_REDRAWS => {
                redraw += 1;
                values.insert("redraws".into(), json!(redraw));
            }
            other => return other,
        }
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn cval(z: C64) -> Value {
    json!(pair(z))
}

fn evaluate_with(
    check: Check,
    ctx: &ModelContext,
    idx: usize,
    s: &mut Sampler,
    params: &mut Params,
    values: &mut BTreeMap<String, Value>,
) -> Result<f64> {
    let l = ctx.l;
    match check {
        Check::Dybe => {
            let ls = s.lambdas(3, ctx, &[], false)?;
            let t = s.theta(ctx, -4..=4)?;
            params.point("lambda", &ls);
            params.point("theta", &[t]);
            verify_dybe(ls[0], ls[1], ls[2], t, ctx)
        }
        Check::Rll => {
            let ls = s.lambdas(2, ctx, &[], false)?;
            let t = s.theta(ctx, theta_shift_range(l, 2))?;
            params.point("lambda", &ls);
            params.point("theta", &[t]);
            verify_rll(ls[0], ls[1], t, ctx)
        }
        Check::HwActions => {
            let lam = s.spectral();
            let t = s.theta(ctx, theta_shift_range(l, 1))?;
            params.point("lambda", &[lam]);
            params.point("theta", &[t]);
            let h = check_hw_actions(lam, t, ctx)?;
            values.insert("eigen".into(), json!(h.eigen));
            values.insert("annihilation".into(), json!(h.annihilation));
            Ok(h.max())
        }
        Check::Identities => {
            let ls = s.lambdas(2 * l + 1, ctx, &[], false)?;
            let t = s.theta(ctx, theta_shift_range(l, l + 2))?;
            params.point("lambda", &ls);
            params.point("theta", &[t]);
            let p = IdentityPoint {
                l0: ls[0],
                lambdas: ls[1..=l].to_vec(),
                lambdas_c: ls[l + 1..].to_vec(),
                theta: t,
            };
            let trig = ctx.trigonometric();
            let n = l.min(2);
            let mut worst = 0.0f64;
            for (kind, c) in [
                (IdentityKind::Ab, ctx),
                (IdentityKind::Bb, ctx),
                (IdentityKind::Abn(l), ctx),
                (IdentityKind::Tay(n), &trig),
                (IdentityKind::Tdy(n), &trig),
            ] {
                let r = verify_identity(kind, &p, c)?;
                values.insert(format!("{kind:?}"), json!(r));
                worst = ybalg::worst(worst, r);
            }
            Ok(worst)
        }
        Check::Fx => {
            let ls = s.lambdas(l + 1, ctx, &[], false)?;
            let t = s.theta(ctx, theta_shift_range(l, l + 2))?;
            params.point("lambda0", &ls[..1]);
            params.point("lambda", &ls[1..]);
            params.point("theta", &[t]);
            let z = |x: &SpectralSet, t: C64| dwbc_partition(x, t, ctx);
            fx_residual(ls[0], &SpectralSet::x(ls[1..].to_vec()), t, ctx, &z)
        }
        Check::Snad => {
            let n = 1 + idx % l.min(3);
            let v = s.lambdas(2 * n + 1, ctx, &[], true)?;
            let (xb, yc) = (
                SpectralSet::x(v[1..=n].to_vec()),
                SpectralSet::y(v[n + 1..].to_vec()),
            );
            params.point("lambda0", &v[..1]);
            params.point("lambda_b", &xb.values);
            params.point("lambda_c", &yc.values);
            let sf = |a: &SpectralSet, b: &SpectralSet| scalar_product_bf(a, b, ctx);
            let (ra, rd) = snad_residuals(v[0], &xb, &yc, ctx, &sf)?;
            values.insert("n".into(), json!(n));
            values.insert("a_type".into(), json!(ra));
            values.insert("d_type".into(), json!(rd));
            Ok(ybalg::worst(ra, rd))
        }
        Check::ZContourVsBf => {
            let ls = s.lambdas(l, ctx, &[], false)?;
            let t = s.theta(ctx, theta_shift_range(l, l))?;
            params.point("lambda", &ls);
            params.point("theta", &[t]);
            let x = SpectralSet::x(ls);
            let bf = dwbc_partition(&x, t, ctx)?;
            let co = z_contour(&x, t, ctx)?;
            let d = rel(bf, co);
            values.insert("bruteforce".into(), cval(bf));
            values.insert("contour".into(), cval(co));
            values.insert("rel_diff".into(), json!(d));
            Ok(d)
        }
        Check::SnContourVsBf => {
            let n = 1 + idx % l.min(3);
            let v = s.lambdas(2 * n, ctx, &[], true)?;
            let (xb, yc) = (
                SpectralSet::x(v[..n].to_vec()),
                SpectralSet::y(v[n..].to_vec()),
            );
            params.point("lambda_b", &xb.values);
            params.point("lambda_c", &yc.values);
            let bf = scalar_product_bf(&xb, &yc, ctx)?;
            let co = sn_contour(&xb, &yc, ctx)?;
            let d = rel(bf, co);
            values.insert("n".into(), json!(n));
            values.insert("bruteforce".into(), cval(bf));
            values.insert("contour".into(), cval(co));
            values.insert("rel_diff".into(), json!(d));
            Ok(d)
        }
        Check::Fzt => {
            let ls = s.lambdas(l + 1, ctx, &[], false)?;
            params.point("lambda0", &ls[..1]);
            params.point("lambda", &ls[1..]);
            let z = |x: &SpectralSet, t: C64| dwbc_partition(x, t, ctx);
            fzt_residual(ls[0], &SpectralSet::x(ls[1..].to_vec()), ctx, &z)
        }
        Check::PdeOmega | Check::PdeLeading => {
            if !(2..=4).contains(&l) {
                return Err(Error::InvalidParams("PDE checks need 2 <= L <= 4"));
            }
            let ls = s.lambdas(l, ctx, &[], false)?;
            params.point("lambda", &ls);
            let pv = PdeVars::from_lambdas(&ls, ctx);
            let zb = interpolate_zbar(ctx)?;
            if check == Check::PdeOmega {
                let om = omega_actions(&zb, &pv)?;
                values.insert("normalized".into(), json!(om.normalized_max()));
                values.insert("holdout".into(), json!(om.holdout_residual));
                return Ok(ybalg::worst(om.normalized_max(), om.holdout_residual));
            }
            let terms = omega_leading_terms(&zb, &pv)?;
            let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.norm()));
            let cancel = terms.iter().sum::<C64>().norm() / scale.max(f64::MIN_POSITIVE);
            let generic = MultiPoly::random(l, l - 1, s.rng());
            let closed = omega_leading_apply(&generic, &pv)?;
            let extracted = omega_actions(&generic, &pv)?.coeffs[l - 2];
            let agree = rel(closed, extracted);
            values.insert("null".into(), json!(cancel));
            values.insert("closed_vs_extracted".into(), json!(agree));
            Ok(ybalg::worst(cancel, agree))
        }
        Check::DiaRealization => {
            let nvars = l.min(4);
            let deg = idx % 9;
            let i = 1 + idx % nvars;
            let p = MultiPoly::random(nvars, deg, s.rng());
            let z: Vec<C64> = (0..nvars).map(|_| s.complex_in(0.7, 0.7)).collect();
            let za = s.complex_in(0.7, 0.7);
            params.point("z", &z);
            params.point("z_alpha", &[za]);
            values.insert("nvars".into(), json!(nvars));
            values.insert("degree".into(), json!(deg));
            values.insert("variable".into(), json!(i));
            let got = dia_realized(&p, i, deg, za, &z)?;
            let mut ext = vec![za];
            ext.extend(&z);
            let want = p.eval(&Dia::replace(nvars, i, 0)?.args(&ext)?)?;
            Ok(rel(got, want))
        }
    }
}
