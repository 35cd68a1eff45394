//! Pair-level workflows: normalization, the `h` classification, the `(5, 6)` degree
//! check, the full analysis report, and tame test pairs.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{
    certify_typical, vertex_parity_sign_change, Certificate, CertifyConfig, Verdict, VerdictTag,
};
use crate::edgecheck::{degeneracy_witness, edge_univariate};
use crate::newton::{newton_polygon, Direction, LatticePolygon};
use crate::polyarith::rational::{int, rat, serde_str, serde_str_matrix};
use crate::polyarith::{
    decompose_form, form_gcd, format_poly, jacobian_det, multiple_factor_product, Monomial, Poly2,
    PolyError, Rational, UniPoly, Var,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("Jacobian vanishes at the origin")]
    JacobianVanishesAtOrigin,
    #[error("no pencil substitution from the search set gives x, y in supp(f) and Δ_g ⊂ Δ_f")]
    NoPencilFound,
    #[error("zero leading form")]
    ZeroLeadingForm,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    F,
    G,
}

/// One step of a normalization log. Each acts on both components at once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", content = "params", rename_all = "lowercase")]
pub enum Transformation {
    /// Subtract the constants `f` and `g`.
    Shift {
        #[serde(with = "serde_str")]
        f: Rational,
        #[serde(with = "serde_str")]
        g: Rational,
    },
    /// `target += μ · other`.
    Pencil {
        target: Component,
        #[serde(with = "serde_str")]
        mu: Rational,
    },
    Swap,
    /// `p(m00 x + m01 y, m10 x + m11 y)`.
    Linear {
        #[serde(with = "serde_str_matrix")]
        matrix: [[Rational; 2]; 2],
    },
    /// `y ↦ y + b x^k` for axis `y`, `x ↦ x + b y^k` for axis `x`.
    Shear {
        #[serde(with = "serde_str")]
        b: Rational,
        k: u32,
        axis: Var,
    },
    /// `p(x + a, y + b)`.
    Translate {
        #[serde(with = "serde_str")]
        a: Rational,
        #[serde(with = "serde_str")]
        b: Rational,
    },
}

impl Transformation {
    pub fn apply(&self, f: &Poly2, g: &Poly2) -> Result<(Poly2, Poly2), PolyError> {
        Ok(match self {
            Transformation::Shift { f: cf, g: cg } => (
                f - &Poly2::constant(cf.clone()),
                g - &Poly2::constant(cg.clone()),
            ),
            Transformation::Pencil { target: Component::F, mu } => (f + &g.scale(mu), g.clone()),
            Transformation::Pencil { target: Component::G, mu } => (f.clone(), g + &f.scale(mu)),
            Transformation::Swap => (g.clone(), f.clone()),
            Transformation::Linear { matrix } => (f.linear_change(matrix)?, g.linear_change(matrix)?),
            Transformation::Shear { b, k, axis } => {
                (f.substitute_shear(b, *k, *axis)?, g.substitute_shear(b, *k, *axis)?)
            }
            Transformation::Translate { a, b } => (f.substitute_affine(a, b), g.substitute_affine(a, b)),
        })
    }
}

pub fn replay(f: &Poly2, g: &Poly2, log: &[Transformation]) -> Result<(Poly2, Poly2), PolyError> {
    log.iter().try_fold((f.clone(), g.clone()), |(a, b), t| t.apply(&a, &b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedPair {
    pub f: Poly2,
    pub g: Poly2,
    pub applied: Vec<Transformation>,
}

/// Multipliers tried for pencil substitutions.
pub fn pencil_search_set() -> Vec<Rational> {
    vec![int(1), int(-1), int(2), int(-2), rat(1, 2), rat(-1, 2), int(3)]
}

/// `x, y ∈ supp(f)` and no constant term.
pub fn condition_a(f: &Poly2) -> bool {
    f.constant_term().is_zero() && !f.coeff_of(1, 0).is_zero() && !f.coeff_of(0, 1).is_zero()
}

/// `Δ_g ⊂ Δ_f`.
pub fn condition_b(f: &Poly2, g: &Poly2) -> bool {
    match (newton_polygon(f), newton_polygon(g)) {
        (Ok(df), Ok(dg)) => df.contains_polygon(&dg),
        (Ok(_), Err(_)) => true,
        _ => false,
    }
}

pub fn normalize_pair(f: &Poly2, g: &Poly2) -> Result<NormalizedPair, PipelineError> {
    let mut applied = Vec::new();
    let (cf, cg) = (f.constant_term(), g.constant_term());
    let (f0, g0) = if cf.is_zero() && cg.is_zero() {
        (f.clone(), g.clone())
    } else {
        let t = Transformation::Shift { f: cf, g: cg };
        let out = t.apply(f, g)?;
        applied.push(t);
        out
    };
    if jacobian_det(&f0, &g0).constant_term().is_zero() {
        return Err(PipelineError::JacobianVanishesAtOrigin);
    }
    let ok = |a: &Poly2, b: &Poly2| condition_a(a) && condition_b(a, b);
    for swap in [false, true] {
        let (a, b) = if swap { (g0.clone(), f0.clone()) } else { (f0.clone(), g0.clone()) };
        let mut steps = applied.clone();
        if swap {
            steps.push(Transformation::Swap);
        }
        if ok(&a, &b) {
            return Ok(NormalizedPair { f: a, g: b, applied: steps });
        }
        for mu in pencil_search_set() {
            let t = Transformation::Pencil {
                target: Component::F,
                mu,
            };
            let (fa, gb) = t.apply(&a, &b)?;
            if ok(&fa, &gb) {
                steps.push(t);
                return Ok(NormalizedPair { f: fa, g: gb, applied: steps });
            }
        }
    }
    Err(PipelineError::NoPencilFound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HCase {
    DegH0,
    DegH2,
    DegH3,
    #[serde(rename = "DegH4_x4")]
    DegH4X4,
    #[serde(rename = "DegH4_x2y2")]
    DegH4X2Y2,
    #[serde(rename = "DegH4_irredsq")]
    DegH4IrredSq,
    DegH5,
    NonRationalFactor,
    /// `deg h > 5`, outside the degree range the case analysis covers.
    DegHAbove5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HClassification {
    pub d: Poly2,
    pub h: Poly2,
    pub case: HCase,
}

fn degree(p: &Poly2) -> u32 {
    p.total_degree().unwrap_or(0)
}

/// Square of a rational, if it is one.
fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

fn classify_degree_four(h: &Poly2) -> Result<HCase, PolyError> {
    let factors = decompose_form(h)?.all_factors();
    if factors.iter().any(|(p, k)| *k == 4 && degree(p) == 1) {
        return Ok(HCase::DegH4X4);
    }
    let quad = factors.iter().find(|(p, k)| *k == 2 && degree(p) == 2);
    let Some((q, _)) = quad else {
        // two distinct rational linear factors, each squared
        return Ok(HCase::DegH4X2Y2);
    };
    // q is coprime to x and y, so q(1, t) has degree two
    let u = q.partial_eval(Var::X, &Rational::one());
    let (c, b, a) = (u.coeff(0), u.coeff(1), u.coeff(2));
    let disc = &b * &b - int(4) * &a * &c;
    Ok(if disc.is_negative() {
        HCase::DegH4IrredSq
    } else if rational_sqrt(&disc).is_some() {
        HCase::DegH4X2Y2
    } else {
        HCase::NonRationalFactor
    })
}

/// `D = gcd(f⁺, g⁺)` and `h`, the product of its multiple factors.
pub fn leading_gcd_and_h(f: &Poly2, g: &Poly2) -> Result<HClassification, PipelineError> {
    if f.is_zero() || g.is_zero() {
        return Err(PipelineError::ZeroLeadingForm);
    }
    let d = form_gcd(&f.leading_form()?, &g.leading_form()?)?;
    let h = multiple_factor_product(&d)?;
    let case = match degree(&h) {
        0 => HCase::DegH0,
        2 => HCase::DegH2,
        3 => HCase::DegH3,
        4 => classify_degree_four(&h)?,
        5 => HCase::DegH5,
        n => {
            debug_assert!(n != 1);
            HCase::DegHAbove5
        }
    };
    Ok(HClassification { d, h, case })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum St6Outcome {
    /// `Jac` of the transformed pair changes sign.
    Excluded {
        change: Option<Transformation>,
        f: Poly2,
        g: Poly2,
        certificate: Certificate,
    },
    /// `f⁺ = c x⁵` after the change: the leading-`x⁵` theorem applies instead.
    DeferToLeadingX5 { change: Option<Transformation> },
    NotApplicable { reason: String },
}

/// A rational `t₀` with `(y − t₀ x) | d`.
fn rational_line_factor(d: &Poly2) -> Result<Option<Rational>, PolyError> {
    let dec = decompose_form(d)?;
    if dec.y_power > 0 {
        return Ok(Some(Rational::zero()));
    }
    for (phi, _) in &dec.factors {
        let u = phi.partial_eval(Var::X, &Rational::one());
        for iv in u.isolate_real_roots()? {
            if let Some(t0) = u.rational_root_in(&iv) {
                return Ok(Some(t0));
            }
        }
    }
    Ok(None)
}

/// The vertex-parity argument for `deg f = 5`, `deg g = 6`.
pub fn theorem_st6_check(f: &Poly2, g: &Poly2) -> St6Outcome {
    let na = |r: &str| St6Outcome::NotApplicable { reason: r.to_string() };
    if f.total_degree().ok() != Some(5) || g.total_degree().ok() != Some(6) {
        return na("needs deg f = 5 and deg g = 6");
    }
    let Ok(lead) = f.leading_form() else {
        return na("zero leading form");
    };
    let Ok(dec) = decompose_form(&lead) else {
        return na("leading form could not be decomposed");
    };
    let (change, f1, g1) = if dec.x_power > 0 {
        (None, f.clone(), g.clone())
    } else {
        let t0 = match rational_line_factor(&lead) {
            Ok(Some(t0)) => t0,
            _ => return na("f⁺ has no rational linear factor"),
        };
        // (x, y) ↦ (y, x + t₀ y) turns y − t₀ x into x
        let t = Transformation::Linear {
            matrix: [[Rational::zero(), Rational::one()], [Rational::one(), t0]],
        };
        match t.apply(f, g) {
            Ok((a, b)) => (Some(t), a, b),
            Err(_) => return na("linear change failed"),
        }
    };
    let lead1 = f1.leading_form().expect("nonzero");
    let k = lead1.monomials().map(|m| m.i).min().unwrap_or(0);
    if k == 0 {
        return na("x does not divide f⁺ after the change");
    }
    if k == 5 {
        return St6Outcome::DeferToLeadingX5 { change };
    }
    let alpha = Monomial::new(k, 5 - k);
    let Some(l) = g1.monomials().filter(|m| m.degree() == 6).map(|m| m.i).min() else {
        return na("g has no degree-6 terms");
    };
    let beta = Monomial::new(l, 6 - l);
    let (Ok(df), Ok(dg)) = (newton_polygon(&f1), newton_polygon(&g1)) else {
        return na("zero polynomial");
    };
    for n in 5..=64 {
        let xi = Direction::new(n, n + 1);
        let fa = df.face(&xi).map(|x| x.points().to_vec());
        let fb = dg.face(&xi).map(|x| x.points().to_vec());
        if fa == Ok(vec![alpha]) && fb == Ok(vec![beta]) {
            return match vertex_parity_sign_change(&f1, &g1, &xi) {
                Some(certificate) => St6Outcome::Excluded {
                    change,
                    f: f1,
                    g: g1,
                    certificate,
                },
                None => na("vertex parity does not apply"),
            };
        }
    }
    na("no ξ = (n, n+1) isolates the vertices")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRow {
    pub start: Monomial,
    pub end: Monomial,
    pub normal: Direction,
    pub interior_points: Vec<Monomial>,
    pub edge_polynomial: Option<UniPoly>,
    pub degenerate: bool,
    pub multiple_factor: Option<UniPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonReport {
    pub component: Component,
    pub polynomial: String,
    pub polygon: LatticePolygon,
    pub outer_edges: Vec<EdgeRow>,
}

/// Newton polygon and outer-edge degeneracy table of `p`.
pub fn polygon_report(component: Component, p: &Poly2) -> Option<PolygonReport> {
    let polygon = newton_polygon(p).ok()?;
    let mut outer_edges = Vec::new();
    for e in polygon.outer_edges().ok()? {
        let (start, end) = e.endpoints().ok()?;
        let witness = degeneracy_witness(p, &e).ok().flatten();
        outer_edges.push(EdgeRow {
            start,
            end,
            normal: e.direction(),
            interior_points: e.interior_lattice_points().unwrap_or_default(),
            edge_polynomial: edge_univariate(p, &e).ok().map(|r| r.uni),
            degenerate: witness.is_some(),
            multiple_factor: witness,
        });
    }
    Some(PolygonReport {
        component,
        polynomial: format_poly(p),
        polygon,
        outer_edges,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub f: String,
    pub g: String,
    pub jacobian: Poly2,
    pub config: CertifyConfig,
    pub verdict: Verdict,
    pub normalization: Option<NormalizedPair>,
    pub normalization_error: Option<String>,
    pub h: Option<HClassification>,
    pub st6: Option<St6Outcome>,
    pub polygons: Vec<PolygonReport>,
}

pub const REPORT_SCHEMA: u32 = 1;

pub const BO_STATEMENT: &str = "every jacobian pair (f, g) with deg f <= 4 is typical (Braun, Orefice-Okamoto)";

/// The full analysis: certification first, then the degree-based routes.
pub fn analyze_pair(f: &Poly2, g: &Poly2, cfg: &CertifyConfig) -> Report {
    let mut verdict = certify_typical(f, g, cfg);
    let (normalization, normalization_error) = match normalize_pair(f, g) {
        Ok(n) => (Some(n), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (hf, hg) = normalization.as_ref().map_or((f, g), |n| (&n.f, &n.g));
    let h = leading_gcd_and_h(hf, hg).ok();
    let mut st6 = None;
    if verdict.verdict == VerdictTag::Inconclusive {
        let (df, dg) = (degree(f), degree(g));
        if (df, dg) == (5, 6) || (df, dg) == (6, 5) {
            let out = if df == 5 { theorem_st6_check(f, g) } else { theorem_st6_check(g, f) };
            match &out {
                St6Outcome::Excluded { certificate, .. } => {
                    verdict.trace.push("deg (5, 6): vertex parity after normalization".into());
                    verdict.verdict = VerdictTag::NotAJacobianPair;
                    verdict.certificates.push(certificate.clone());
                }
                St6Outcome::DeferToLeadingX5 { .. } => {
                    verdict.trace.push("deg (5, 6): f⁺ = c x⁵, deferred to the leading-x⁵ case".into())
                }
                St6Outcome::NotApplicable { reason } => verdict.trace.push(format!("deg (5, 6): {reason}")),
            }
            st6 = Some(out);
        } else if !f.is_constant() && !g.is_constant() && df.min(dg) <= 4 {
            verdict.trace.push("degree gate: min(deg f, deg g) <= 4".into());
            verdict.verdict = VerdictTag::TypicalCertified;
            verdict.certificates.push(Certificate::TrustedFact {
                statement: BO_STATEMENT.to_string(),
            });
        }
    }
    let polygons = [(Component::F, f), (Component::G, g)]
        .into_iter()
        .filter_map(|(c, p)| polygon_report(c, p))
        .collect();
    Report {
        schema: REPORT_SCHEMA,
        f: format_poly(f),
        g: format_poly(g),
        jacobian: jacobian_det(f, g),
        config: cfg.clone(),
        verdict,
        normalization,
        normalization_error,
        h,
        st6,
        polygons,
    }
}

fn random_uni(rng: &mut ChaCha8Rng, max_degree: usize, bound: i64) -> UniPoly {
    let d = rng.gen_range(1..=max_degree);
    let mut coeffs: Vec<Rational> = (0..=d).map(|_| int(rng.gen_range(-bound..=bound))).collect();
    while coeffs[d].is_zero() {
        coeffs[d] = int(rng.gen_range(-bound..=bound));
    }
    UniPoly::from_coeffs(coeffs)
}

/// A composition of `steps` triangular maps and one invertible affine map, applied
/// to `(x, y)`. The Jacobian is a nonzero constant.
pub fn generate_tame_pair(seed: u64, steps: u32, coeff_bound: i64) -> (Poly2, Poly2) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = coeff_bound.max(1);
    let (mut f, mut g) = (Poly2::x(), Poly2::y());
    for _ in 0..steps {
        let u = random_uni(&mut rng, 2, bound);
        if rng.gen_bool(0.5) {
            f = &f + &Poly2::compose_uni(&u, &g);
        } else {
            g = &g + &Poly2::compose_uni(&u, &f);
        }
    }
    let m = loop {
        let m: Vec<Rational> = (0..4).map(|_| int(rng.gen_range(-bound..=bound))).collect();
        if !(&m[0] * &m[3] - &m[1] * &m[2]).is_zero() {
            break m;
        }
    };
    let c0 = int(rng.gen_range(-bound..=bound));
    let c1 = int(rng.gen_range(-bound..=bound));
    let nf = &(&f.scale(&m[0]) + &g.scale(&m[1])) + &Poly2::constant(c0);
    let ng = &(&f.scale(&m[2]) + &g.scale(&m[3])) + &Poly2::constant(c1);
    let j = jacobian_det(&nf, &ng);
    assert!(j.is_constant() && !j.is_zero(), "tame pair must have constant Jacobian");
    (nf, ng)
}
