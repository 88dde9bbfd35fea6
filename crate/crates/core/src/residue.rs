//! Multiple contour integrals for `Z_θ` and `S_n`, evaluated as finite
//! sums of residues.
//!
//! Each integration variable is assigned a distinct enclosed pole; repeated
//! assignments are killed by the Vandermonde-type numerators and are never
//! enumerated, so the sums run over permutations.

use crate::error::{Error, Result};
use crate::lattice::SpectralSet;
use crate::model::ModelContext;
use crate::special::{dyn_ratio, f_weight_deriv0, trig_weights};
use crate::{C64, POLE_FLOOR};

const R_FLOOR: f64 = 1e-12;

/// Injective map from integration-variable index to pole index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueAssignment {
    pub sigma: Vec<usize>,
}

impl ResidueAssignment {
    /// All bijections of `0..n`, in lexicographic order.
    pub fn permutations(n: usize) -> Vec<ResidueAssignment> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![ResidueAssignment { sigma: cur.clone() }];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(ResidueAssignment { sigma: cur.clone() });
        }
    }

    pub fn apply(&self, poles: &[C64]) -> Vec<C64> {
        self.sigma.iter().map(|&k| poles[k]).collect()
    }
}

fn check_distinct(
    points: &[C64],
    what: &'static str,
    f: impl Fn(C64) -> Result<C64>,
) -> Result<()> {
    for i in 0..points.len() {
        for j in 0..i {
            if f(points[i] - points[j])?.norm() < POLE_FLOOR {
                return Err(Error::CoincidentPoints(what));
            }
        }
    }
    Ok(())
}

/// Individual residue contributions to `Z_θ(X)`, one per assignment, in the
/// order of [`ResidueAssignment::permutations`].
pub fn z_contour_terms(x: &SpectralSet, theta: C64, ctx: &ModelContext) -> Result<Vec<C64>> {
    let l = ctx.l;
    if x.len() != l {
        return Err(Error::SizeMismatch {
            expected: l,
            got: x.len(),
        });
    }
    let f = |u: C64| ctx.f(u);
    check_distinct(&x.values, "spectral parameters", f)?;
    let g = ctx.gamma;
    let fp0 = f_weight_deriv0(&ctx.regime)?;
    let prefactor = (fp0 * f(g)?).powi(l as i32);
    let mut terms = Vec::new();
    for asg in ResidueAssignment::permutations(l) {
        let w = asg.apply(&x.values);
        let mut t = prefactor;
        for i in 0..l {
            for j in i + 1..l {
                t *= f(w[j] - w[i] + g)? * f(w[j] - w[i])?;
            }
            for (k, &lk) in x.values.iter().enumerate() {
                if k != asg.sigma[i] {
                    t /= f(w[i] - lk)?;
                }
            }
            t /= fp0;
            let shift = theta + g * (i + 1) as f64;
            t *= dyn_ratio(shift - w[i] + ctx.mu[i], shift, &ctx.regime)?;
            for (j, &mj) in ctx.mu.iter().enumerate() {
                if j < i {
                    t *= f(mj - w[i])?;
                } else if j > i {
                    t *= f(w[i] - mj + g)?;
                }
            }
        }
        terms.push(t);
    }
    Ok(terms)
}

/// `Z_θ(X)` from its contour-integral representation.
pub fn z_contour(x: &SpectralSet, theta: C64, ctx: &ModelContext) -> Result<C64> {
    Ok(z_contour_terms(x, theta, ctx)?.into_iter().sum())
}

struct Six {
    gamma: C64,
}

impl Six {
    fn a(&self, u: C64) -> C64 {
        trig_weights(u, self.gamma).0
    }
    fn b(&self, u: C64) -> C64 {
        u.sinh()
    }
}

/// `H(w, w̄)` of the scalar-product integrand. `w` are the `C`-type
/// variables, `w̄` the `B`-type ones.
fn h_function(w: &[C64], wb: &[C64], ctx: &ModelContext) -> Result<C64> {
    let s = Six { gamma: ctx.gamma };
    let n = w.len();
    let l = ctx.l;
    let mu = &ctx.mu;
    let sign = if (l * n + n * (n + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut h = C64::from(sign) * ctx.gamma.sinh().powi(2 * n as i32);
    for i in 0..n {
        for j in i + 1..n {
            h *= (s.b(w[i] - w[j]) * s.b(wb[i] - wb[j])).powi(2)
                * s.a(w[j] - mu[i])
                * s.a(wb[j] - mu[i]);
        }
        h /= s.b(w[i] - mu[i]) * s.b(wb[i] - mu[i]);
    }
    for i in 0..n {
        let mut p = C64::new(1.0, 0.0);
        let mut pb = C64::new(1.0, 0.0);
        for k in i..n {
            p *= s.a(w[k] - mu[i]) / s.b(w[k] - mu[i]);
            pb *= s.a(wb[k] - mu[i]) / s.b(wb[k] - mu[i]);
        }
        let r = p - pb;
        if r.norm() < R_FLOOR * (p.norm() + pb.norm()) {
            return Err(Error::SingularR { index: i });
        }
        let mut l1 = C64::new(1.0, 0.0);
        let mut l2 = C64::new(1.0, 0.0);
        for &mk in &mu[i..l] {
            l1 *= s.a(wb[i] - mk) * s.b(mk - w[i]);
            l2 *= s.a(w[i] - mk) * s.b(mk - wb[i]);
        }
        for k in i + 1..n {
            l1 *= s.a(w[i] - w[k]) / s.b(w[i] - w[k]) * s.a(wb[k] - wb[i]) / s.b(wb[k] - wb[i]);
            l2 *= s.a(w[k] - w[i]) / s.b(w[k] - w[i]) * s.a(wb[i] - wb[k]) / s.b(wb[i] - wb[k]);
        }
        h *= (l1 - l2) / r;
    }
    Ok(h)
}

/// Residue contributions to `S_n(X^B | Y^C)`, one per pair of assignments
/// `(σ, σ̄)` with `σ` outer.
pub fn sn_contour_terms(
    xb: &SpectralSet,
    yc: &SpectralSet,
    ctx: &ModelContext,
) -> Result<Vec<C64>> {
    ctx.require_trig()?;
    let n = xb.len();
    if yc.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: yc.len(),
        });
    }
    if n > ctx.l {
        return Err(Error::SizeMismatch {
            expected: ctx.l,
            got: n,
        });
    }
    let sinh = |u: C64| Ok(u.sinh());
    check_distinct(&xb.values, "B-type spectral parameters", sinh)?;
    check_distinct(&yc.values, "C-type spectral parameters", sinh)?;
    for &v in xb.values.iter().chain(&yc.values) {
        if ctx.mu.iter().any(|&m| (v - m).sinh().norm() < POLE_FLOOR) {
            return Err(Error::CoincidentPoints(
                "spectral parameter on an inhomogeneity",
            ));
        }
    }
    let perms = ResidueAssignment::permutations(n);
    let mut terms = Vec::with_capacity(perms.len() * perms.len());
    for sg in &perms {
        let w = sg.apply(&yc.values);
        for sb in &perms {
            let wb = sb.apply(&xb.values);
            let mut den = C64::new(1.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    if j != sg.sigma[i] {
                        den *= (w[i] - yc.values[j]).sinh();
                    }
                    if j != sb.sigma[i] {
                        den *= (wb[i] - xb.values[j]).sinh();
                    }
                }
            }
            terms.push(h_function(&w, &wb, ctx)? / den);
        }
    }
    Ok(terms)
}

/// `S_n(X^B | Y^C)` from its contour-integral representation.
pub fn sn_contour(xb: &SpectralSet, yc: &SpectralSet, ctx: &ModelContext) -> Result<C64> {
    Ok(sn_contour_terms(xb, yc, ctx)?.into_iter().sum())
}
