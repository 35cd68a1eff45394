//! Typicality certificates: connected level sets from the Newton polygon, and the
//! one-branch-at-infinity argument.

use num_traits::{One, Zero};
use serde::Serialize;

use super::critical::{no_critical_points, CriticalSearch, NoCriticalEvidence};
use crate::edgecheck::edge_univariate;
use crate::newton::{is_convenient, newton_polygon, Direction};
use crate::polyarith::{decompose_form, jacobian_det, Monomial, Poly2, Rational, RationalInterval, UniPoly, Var};

/// One outer edge together with its edge polynomial `F`, which is squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeWitness {
    pub start: Monomial,
    pub end: Monomial,
    pub normal: Direction,
    pub uni: UniPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfEvidence {
    pub edges: Vec<EdgeWitness>,
    pub critical: NoCriticalEvidence,
}

/// A real point `[1 : t]` of the line at infinity, or `[0 : 1]` when `t` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityPoint {
    pub t: Option<RationalInterval>,
    pub multiplicity: u32,
}

/// Real points at infinity of the form `d` with their multiplicities.
pub fn infinity_real_points(d: &Poly2) -> Result<Vec<InfinityPoint>, crate::polyarith::PolyError> {
    let dec = decompose_form(d)?;
    let mut out = Vec::new();
    if dec.x_power > 0 {
        out.push(InfinityPoint {
            t: None,
            multiplicity: dec.x_power,
        });
    }
    if dec.y_power > 0 {
        out.push(InfinityPoint {
            t: Some(RationalInterval::point(Rational::zero())),
            multiplicity: dec.y_power,
        });
    }
    for (phi, k) in &dec.factors {
        let u = phi.partial_eval(Var::X, &Rational::one());
        for iv in u.isolate_real_roots()? {
            out.push(InfinityPoint {
                t: Some(iv),
                multiplicity: *k,
            });
        }
    }
    Ok(out)
}

/// Evidence that `p` has no critical points. A nonzero constant `Jac(p, partner)` is
/// tried before the full search, which can be slow in high degree.
pub(crate) fn critical_free(p: &Poly2, partner: Option<&Poly2>, depth: u32) -> Result<NoCriticalEvidence, String> {
    for var in [Var::X, Var::Y] {
        let d = p.partial(var);
        if d.is_constant() && !d.is_zero() {
            return Ok(NoCriticalEvidence::ConstantPartial {
                var,
                value: d.constant_term(),
            });
        }
    }
    if let Some(q) = partner {
        let j = jacobian_det(p, q);
        if j.is_constant() && !j.is_zero() {
            return Ok(NoCriticalEvidence::NonvanishingJacobian {
                partner: q.clone(),
                value: j.constant_term(),
            });
        }
    }
    match no_critical_points(p, depth).map_err(|e| e.to_string())? {
        CriticalSearch::None { evidence } => Ok(evidence),
        CriticalSearch::Exists { .. } => Err("has a critical point".into()),
        CriticalSearch::Undecided { reason } => Err(reason),
    }
}

/// Convenient, non-degenerate on every outer edge, and free of critical points.
pub fn inf_typical(p: &Poly2, partner: Option<&Poly2>, depth: u32) -> Result<InfEvidence, String> {
    if p.is_constant() {
        return Err("constant".into());
    }
    if !is_convenient(p) {
        return Err("not convenient".into());
    }
    let d = newton_polygon(p).map_err(|e| e.to_string())?;
    let mut edges = Vec::new();
    for e in d.outer_edges().map_err(|e| e.to_string())? {
        let (start, end) = e.endpoints().map_err(|e| e.to_string())?;
        let r = edge_univariate(p, &e).map_err(|e| e.to_string())?;
        if !r.uni.gcd(&r.uni.derivative()).is_constant() {
            return Err(format!("degenerate on the outer edge {start}-{end}"));
        }
        edges.push(EdgeWitness {
            start,
            end,
            normal: r.xi,
            uni: r.uni,
        });
    }
    let critical = critical_free(p, partner, depth)?;
    Ok(InfEvidence { edges, critical })
}

/// The leading form of `p` meets the real line at infinity in exactly one point, with
/// multiplicity one, and `p` has no critical points.
pub fn one_real_branch_at_infinity(
    p: &Poly2,
    partner: Option<&Poly2>,
    depth: u32,
) -> Result<(Poly2, InfinityPoint, NoCriticalEvidence), String> {
    if p.is_constant() {
        return Err("constant".into());
    }
    let lead = p.leading_form().map_err(|e| e.to_string())?;
    let mut pts = infinity_real_points(&lead).map_err(|e| e.to_string())?;
    if pts.len() != 1 || pts[0].multiplicity != 1 {
        return Err(format!("{} real points at infinity", pts.len()));
    }
    let critical = critical_free(p, partner, depth)?;
    Ok((lead, pts.remove(0), critical))
}
