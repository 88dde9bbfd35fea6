//! Single evaluations of `Z_θ` and `S_n` by brute force and/or residue sums.

use serde_json::{json, Map, Value};
use thiserror::Error;
use ybalg::lattice::{dwbc_partition, scalar_product_bf};
use ybalg::residue::{sn_contour, z_contour};
use ybalg::sampler::{theta_shift_range, Sampler};
use ybalg::special::dyn_ratio;
use ybalg::{ModelContext, Regime, SpectralSet, C64};

use crate::report::pair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Bruteforce,
    Contour,
    Both,
}

#[derive(Debug, Error)]
pub enum ComputeError {
    #[error("invalid input `{field}`: {message}")]
    Input {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] ybalg::Error),
}

fn input(field: &'static str, message: impl Into<String>) -> ComputeError {
    ComputeError::Input {
        field,
        message: message.into(),
    }
}

/// Model parameters for a single evaluation; absent points are drawn from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputeInput {
    pub l: usize,
    pub gamma: C64,
    pub regime: Regime,
    pub mu: Option<Vec<C64>>,
    pub seed: u64,
}

impl ComputeInput {
    fn context(&self, s: &mut Sampler) -> Result<ModelContext, ComputeError> {
        let mu = match &self.mu {
            Some(m) if m.len() != self.l => {
                return Err(input(
                    "mu",
                    format!("has {} entries but L = {}", m.len(), self.l),
                ))
            }
            Some(m) => m.clone(),
            None => s.mu(self.l),
        };
        Ok(ModelContext::new(self.gamma, mu, self.regime)?)
    }

    fn echo(&self, ctx: &ModelContext) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("L".into(), json!(ctx.l));
        m.insert("gamma".into(), json!(pair(ctx.gamma)));
        match &ctx.regime {
            Regime::Trigonometric => m.insert("regime".into(), json!("trigonometric")),
            Regime::Elliptic(p) => {
                m.insert("nome".into(), json!(pair(p.nome)));
                m.insert("regime".into(), json!("elliptic"))
            }
        };
        m.insert("mu".into(), list(&ctx.mu));
        m.insert("seed".into(), json!(self.seed));
        m
    }
}

fn list(v: &[C64]) -> Value {
    json!(v.iter().map(|&z| pair(z)).collect::<Vec<_>>())
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn finish(
    out: &mut Map<String, Value>,
    method: Method,
    bf: impl FnOnce() -> ybalg::Result<C64>,
    co: impl FnOnce() -> ybalg::Result<C64>,
) -> Result<(), ComputeError> {
    let b = matches!(method, Method::Bruteforce | Method::Both)
        .then(bf)
        .transpose()?;
    let c = matches!(method, Method::Contour | Method::Both)
        .then(co)
        .transpose()?;
    if let Some(b) = b {
        out.insert("bruteforce".into(), json!(pair(b)));
    }
    if let Some(c) = c {
        out.insert("contour".into(), json!(pair(c)));
    }
    if let (Some(b), Some(c)) = (b, c) {
        out.insert("rel_diff".into(), json!(rel(b, c)));
    }
    Ok(())
}

/// `Z_θ(λ_1..λ_L)`.
pub fn compute_z(
    inp: &ComputeInput,
    method: Method,
    lambdas: Option<Vec<C64>>,
    theta: Option<C64>,
) -> Result<Value, ComputeError> {
    let mut s = Sampler::new(inp.seed, 0);
    let ctx = inp.context(&mut s)?;
    let lambdas = match lambdas {
        Some(v) if v.len() != ctx.l => {
            return Err(input(
                "lambda",
                format!("has {} entries but L = {}", v.len(), ctx.l),
            ))
        }
        Some(v) => v,
        None => s.lambdas(ctx.l, &ctx, &[], false)?,
    };
    let theta = match theta {
        Some(t) => t,
        None => s.theta(&ctx, theta_shift_range(ctx.l, ctx.l))?,
    };
    let x = SpectralSet::x(lambdas);
    let mut inputs = inp.echo(&ctx);
    inputs.insert("lambda".into(), list(&x.values));
    inputs.insert("theta".into(), json!(pair(theta)));
    let mut out = Map::new();
    out.insert("quantity".into(), json!("z"));
    out.insert("inputs".into(), Value::Object(inputs));
    finish(
        &mut out,
        method,
        || dwbc_partition(&x, theta, &ctx),
        || z_contour(&x, theta, &ctx),
    )?;
    if ctx.l == 1 {
        let g = ctx.gamma;
        let closed =
            ctx.f(g)? * dyn_ratio(theta + g - x.values[0] + ctx.mu[0], theta + g, &ctx.regime)?;
        out.insert("closed_form".into(), json!(pair(closed)));
    }
    Ok(Value::Object(out))
}

/// `S_n(λ^B | λ^C)` in the six-vertex model.
pub fn compute_sn(
    inp: &ComputeInput,
    method: Method,
    n: usize,
    lambda_b: Option<Vec<C64>>,
    lambda_c: Option<Vec<C64>>,
) -> Result<Value, ComputeError> {
    let inp = ComputeInput {
        regime: Regime::Trigonometric,
        ..inp.clone()
    };
    let mut s = Sampler::new(inp.seed, 0);
    let ctx = inp.context(&mut s)?;
    if n > ctx.l {
        return Err(input("n", format!("n = {n} exceeds L = {}", ctx.l)));
    }
    let drawn = match (&lambda_b, &lambda_c) {
        (Some(_), Some(_)) => Vec::new(),
        _ => s.lambdas(2 * n, &ctx, &[], true)?,
    };
    let pick =
        |given: Option<Vec<C64>>, field: &'static str, range: std::ops::Range<usize>| match given {
            Some(v) if v.len() != n => {
                Err(input(field, format!("has {} entries but n = {n}", v.len())))
            }
            Some(v) => Ok(v),
            None => Ok(drawn[range].to_vec()),
        };
    let xb = SpectralSet::x(pick(lambda_b, "lambda-b", 0..n)?);
    let yc = SpectralSet::y(pick(lambda_c, "lambda-c", n..2 * n)?);
    let mut inputs = inp.echo(&ctx);
    inputs.insert("n".into(), json!(n));
    inputs.insert("lambda_b".into(), list(&xb.values));
    inputs.insert("lambda_c".into(), list(&yc.values));
    let mut out = Map::new();
    out.insert("quantity".into(), json!("sn"));
    out.insert("inputs".into(), Value::Object(inputs));
    finish(
        &mut out,
        method,
        || scalar_product_bf(&xb, &yc, &ctx),
        || sn_contour(&xb, &yc, &ctx),
    )?;
    Ok(Value::Object(out))
}
