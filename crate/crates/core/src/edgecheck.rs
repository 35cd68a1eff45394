//! Edge restrictions as univariate polynomials.
//!
//! Along an edge with primitive normal `ξ`, pick `ν` with `ξ₁ν₂ − ξ₂ν₁ = 1`. The
//! substitution `x = u^ξ₁ v^ν₁, y = u^ξ₂ v^ν₂` turns `p|_E` into `u^l v^m F(1/v)`, and
//! in the original variables `p|_E = x^a y^b F(s)` with `s = x^ξ₂ y^−ξ₁` (a Laurent
//! monomial in general).

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::newton::{symbolic_restriction, Direction, Face, NewtonError};
use crate::polyarith::{Monomial, Poly2, Rational, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EdgeError {
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error("restriction to the edge is zero")]
    ZeroRestriction,
    #[error("square factor does not divide the restriction")]
    ReconstructionFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeReduction {
    pub xi: Direction,
    pub nu: Direction,
    /// `F`, with nonzero constant term.
    pub uni: UniPoly,
    /// Powers of `u` and `v` in front of `F(1/v)`.
    pub monomial_prefactor: (i64, i64),
    /// The support point with the largest `⟨ν, ·⟩`; `p|_E = anchor · F(s)`.
    pub anchor: Monomial,
}

/// Primitive outward normal of an edge face.
pub fn primitive_outward_normal(e: &Face) -> Result<Direction, EdgeError> {
    if !e.is_edge() {
        return Err(NewtonError::VertexFace.into());
    }
    Ok(e.direction().primitive())
}

/// The `ν` of smallest norm with `ξ₁ν₂ − ξ₂ν₁ = 1`; among equal norms prefer `ν₁ ≥ 0`,
/// then `ν₂ ≥ 0`.
pub fn complementary_unimodular(xi: &Direction) -> Result<Direction, EdgeError> {
    let eg = xi.xi1.extended_gcd(&(-xi.xi2));
    if eg.gcd != 1 {
        return Err(NewtonError::NotPrimitive(*xi).into());
    }
    // xi1 * eg.x + (-xi2) * eg.y = 1
    let base = Direction::new(eg.y, eg.x);
    let norm2 = xi.xi1 * xi.xi1 + xi.xi2 * xi.xi2;
    let proj = base.xi1 * xi.xi1 + base.xi2 * xi.xi2;
    let t0 = Integer::div_floor(&(-proj), &norm2);
    let best = (t0 - 1..=t0 + 2)
        .map(|t| Direction::new(base.xi1 + t * xi.xi1, base.xi2 + t * xi.xi2))
        .min_by_key(|n| (n.xi1 * n.xi1 + n.xi2 * n.xi2, n.xi1 < 0, n.xi2 < 0))
        .expect("nonempty range");
    debug_assert_eq!(xi.xi1 * best.xi2 - xi.xi2 * best.xi1, 1);
    Ok(best)
}

pub fn edge_univariate(p: &Poly2, e: &Face) -> Result<EdgeReduction, EdgeError> {
    let xi = primitive_outward_normal(e)?;
    let restricted = symbolic_restriction(p, e);
    if restricted.is_zero() {
        return Err(EdgeError::ZeroRestriction);
    }
    reduce(&restricted, xi)
}

/// Reduction of a polynomial already supported on a line with normal `xi`.
fn reduce(restricted: &Poly2, xi: Direction) -> Result<EdgeReduction, EdgeError> {
    let nu = complementary_unimodular(&xi)?;
    let (anchor, top) = restricted
        .monomials()
        .map(|m| (*m, nu.dot(m)))
        .max_by_key(|(_, e)| *e)
        .expect("nonzero restriction");
    let l = xi.dot(&anchor);
    let mut coeffs = vec![];
    for (m, c) in restricted.terms() {
        let k = (top - nu.dot(m)) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c.clone();
    }
    Ok(EdgeReduction {
        xi,
        nu,
        uni: UniPoly::from_coeffs(coeffs),
        monomial_prefactor: (l, top),
        anchor,
    })
}

impl EdgeReduction {
    /// Rebuilds the restriction from `anchor · F(x^ξ₂ y^−ξ₁)`.
    pub fn expand(&self) -> Poly2 {
        let step = (self.xi.xi2, -self.xi.xi1);
        Poly2::from_terms(self.uni.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as i64;
            let i = self.anchor.i as i64 + k * step.0;
            let j = self.anchor.j as i64 + k * step.1;
            (Monomial::new(i as u32, j as u32), c.clone())
        }))
    }
}

/// `H(x^ξ₂ y^−ξ₁)` times the monomial that makes it a polynomial coprime to `x` and `y`.
pub fn reconstruct(h: &UniPoly, xi: &Direction) -> Poly2 {
    let exps: Vec<(usize, i64, i64)> = h
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| (k, k as i64 * xi.xi2, -(k as i64) * xi.xi1))
        .collect();
    let min_i = exps.iter().map(|e| e.1).min().unwrap_or(0);
    let min_j = exps.iter().map(|e| e.2).min().unwrap_or(0);
    Poly2::from_terms(exps.iter().map(|&(k, i, j)| {
        (
            Monomial::new((i - min_i) as u32, (j - min_j) as u32),
            h.coeff(k),
        )
    }))
}

/// Squarefree part of `gcd(F, F')` when it is nonconstant.
pub fn degeneracy_witness(p: &Poly2, e: &Face) -> Result<Option<UniPoly>, EdgeError> {
    let f = edge_univariate(p, e)?.uni;
    let g = f.gcd(&f.derivative());
    if g.is_constant() {
        return Ok(None);
    }
    Ok(Some(g.squarefree_part().expect("nonzero gcd")))
}

/// `p|_E` has a multiple factor not divisible by `x` or `y`.
pub fn is_degenerate_on_edge(p: &Poly2, e: &Face) -> Result<bool, EdgeError> {
    Ok(degeneracy_witness(p, e)?.is_some())
}

/// The largest `h`, coprime to `x` and `y`, with `h²` dividing both `f|_E` and `g|_E`.
pub fn common_square_factor(f: &Poly2, g: &Poly2, e: &Face) -> Result<Option<Poly2>, EdgeError> {
    let rf = edge_univariate(f, e)?;
    let gr = symbolic_restriction(g, e);
    let common = if gr.is_zero() {
        rf.uni.monic()
    } else {
        rf.uni.gcd(&reduce(&gr, rf.xi)?.uni)
    };
    let dec = common.squarefree_decomposition().expect("nonzero gcd");
    let hu = dec
        .factors
        .iter()
        .fold(UniPoly::one(), |acc, (c, k)| &acc * &c.pow(k / 2));
    if hu.is_constant() {
        return Ok(None);
    }
    let h = reconstruct(&hu, &rf.xi);
    let h2 = h.pow(2);
    let fr = symbolic_restriction(f, e);
    if fr.div_exact(&h2).is_none() || gr.div_exact(&h2).is_none() {
        return Err(EdgeError::ReconstructionFailed);
    }
    Ok(Some(h))
}
