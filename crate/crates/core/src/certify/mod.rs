//! Certificates for and against typicality of a pair `(f, g)`.
//!
//! Every certificate carries exact data that [`verify::verify_certificate`] re-checks
//! from scratch against the original pair.

pub mod critical;
mod driver;
mod exclusions;
mod infinity;
mod sign;
pub mod verify;

use serde::Serialize;

use crate::newton::{Direction, NewtonError};
use crate::polyarith::rational::serde_str;
use crate::polyarith::{Monomial, Poly2, PolyError, Rational, RationalInterval, UniPoly};

pub use critical::{no_critical_points, CriticalEvidence, CriticalSearch, NoCriticalEvidence};
pub use driver::certify_typical;
pub use exclusions::{
    hrc_excludes, scaled_witnesses, vertex_parity_sign_change, vertex_parity_search,
    znak0_sign_change, znak_sign_change,
};
pub use infinity::{
    inf_typical, infinity_real_points, one_real_branch_at_infinity, EdgeWitness, InfEvidence,
    InfinityPoint,
};
pub use sign::{jacobian_sign_status, sample_points, Sample, SampleSummary, SignStatus};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RationalPoint {
    #[serde(with = "serde_str")]
    pub x: Rational,
    #[serde(with = "serde_str")]
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RationalPoint { x, y }
    }

    pub fn eval(&self, p: &Poly2) -> Rational {
        p.eval(&self.x, &self.y)
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::polyarith::format_rational;
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Two points where the Jacobian is strictly positive and strictly negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignPair {
    pub positive: RationalPoint,
    pub negative: RationalPoint,
}

/// Which rearrangement of `(f, g)` a pair-level certificate is about.
///
/// Swapping or transposing changes only the sign of the Jacobian, so a sign change for
/// the variant is a sign change for the original.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PairVariant {
    Original,
    Swapped,
    Transposed,
    SwappedTransposed,
}

impl PairVariant {
    pub const ALL: [PairVariant; 4] = [
        PairVariant::Original,
        PairVariant::Swapped,
        PairVariant::Transposed,
        PairVariant::SwappedTransposed,
    ];

    pub fn apply(&self, f: &Poly2, g: &Poly2) -> (Poly2, Poly2) {
        match self {
            PairVariant::Original => (f.clone(), g.clone()),
            PairVariant::Swapped => (g.clone(), f.clone()),
            PairVariant::Transposed => (f.transpose(), g.transpose()),
            PairVariant::SwappedTransposed => (g.transpose(), f.transpose()),
        }
    }
}

/// A single polynomial derived from the pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "of", content = "mu")]
pub enum Subject {
    F,
    G,
    FTransposed,
    GTransposed,
    /// `f + μ g`.
    Pencil(#[serde(with = "serde_str")] Rational),
}

impl Subject {
    pub fn apply(&self, f: &Poly2, g: &Poly2) -> Poly2 {
        match self {
            Subject::F => f.clone(),
            Subject::G => g.clone(),
            Subject::FTransposed => f.transpose(),
            Subject::GTransposed => g.transpose(),
            Subject::Pencil(mu) => f + &g.scale(mu),
        }
    }

    /// A polynomial whose Jacobian with the subject equals `±Jac(f, g)`.
    pub fn partner(&self, f: &Poly2, g: &Poly2) -> Poly2 {
        match self {
            Subject::F | Subject::Pencil(_) => g.clone(),
            Subject::G => f.clone(),
            Subject::FTransposed => g.transpose(),
            Subject::GTransposed => f.transpose(),
        }
    }
}

impl std::fmt::Display for Subject {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Subject::F => fm.write_str("f"),
            Subject::G => fm.write_str("g"),
            Subject::FTransposed => fm.write_str("transpose(f)"),
            Subject::GTransposed => fm.write_str("transpose(g)"),
            Subject::Pencil(mu) => write!(fm, "f + ({})*g", crate::polyarith::format_rational(mu)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum DirectEvidence {
    IdenticallyZero,
    SignChange {
        positive: Sample,
        negative: Sample,
    },
    /// A real zero of the Jacobian.
    Zero { point: RationalPoint },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// Exact evaluations of `Jac(f, g)`.
    DirectWitness {
        jacobian: Poly2,
        evidence: DirectEvidence,
    },
    /// `f = x F(xy)`, `g = y G(xy)` and `FG` has a nonzero real root.
    Znak0 {
        variant: PairVariant,
        big_f: UniPoly,
        big_g: UniPoly,
        root: RationalInterval,
        witnesses: Option<SignPair>,
    },
    /// `f^ξ = a y (xy − b)²` with `b ≠ 0` and `l(Δ_g, ξ) = −1` for `ξ = (−1, 1)`.
    Znak {
        variant: PairVariant,
        #[serde(with = "serde_str")]
        a: Rational,
        #[serde(with = "serde_str")]
        b: Rational,
        witnesses: Option<SignPair>,
    },
    /// `Δ_f^ξ = {α}`, `Δ_g^ξ = {β}`, independent, `α + β` with an even coordinate.
    VertexParity {
        variant: PairVariant,
        xi: Direction,
        alpha: Monomial,
        beta: Monomial,
        witnesses: Option<SignPair>,
    },
    /// An outer edge from `(1,0)` to `(a,b)`, `a > 1`, `b > 0`, with no other lattice points.
    Hrc {
        subject: Subject,
        start: Monomial,
        end: Monomial,
        normal: Direction,
    },
    /// A critical point of a pencil member is a zero of the Jacobian.
    CriticalPoint {
        subject: Subject,
        evidence: CriticalEvidence,
    },
    /// Convenient, no critical points, non-degenerate on every outer edge.
    InfTypical {
        subject: Subject,
        polynomial: Poly2,
        evidence: InfEvidence,
    },
    /// The leading form has exactly one real point at infinity, of multiplicity one.
    OneRealBranchAtInfinity {
        subject: Subject,
        polynomial: Poly2,
        leading_form: Poly2,
        point: InfinityPoint,
        critical: NoCriticalEvidence,
    },
    /// A published result used without re-proof.
    TrustedFact { statement: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::DirectWitness { .. } => "DirectWitness",
            Certificate::Znak0 { .. } => "Znak0",
            Certificate::Znak { .. } => "Znak",
            Certificate::VertexParity { .. } => "VertexParity",
            Certificate::Hrc { .. } => "Hrc",
            Certificate::CriticalPoint { .. } => "CriticalPoint",
            Certificate::InfTypical { .. } => "InfTypical",
            Certificate::OneRealBranchAtInfinity { .. } => "OneRealBranchAtInfinity",
            Certificate::TrustedFact { .. } => "TrustedFact",
        }
    }

    /// True for certificates that rule out the Jacobian-pair property.
    pub fn is_exclusion(&self) -> bool {
        matches!(
            self,
            Certificate::DirectWitness { .. }
                | Certificate::Znak0 { .. }
                | Certificate::Znak { .. }
                | Certificate::VertexParity { .. }
                | Certificate::Hrc { .. }
                | Certificate::CriticalPoint { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictTag {
    TypicalCertified,
    NotAJacobianPair,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictTag,
    pub certificates: Vec<Certificate>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingConfig {
    /// The grid covers `[-bound, bound]²`.
    pub grid_bound: i64,
    /// Points per grid axis.
    pub grid_points: u32,
    pub random_points: usize,
    pub max_denominator: i64,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x4A4143;

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            grid_bound: 10,
            grid_points: 41,
            random_points: 200,
            max_denominator: 16,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyConfig {
    pub sampling: SamplingConfig,
    /// Pencil members `f + μ g` tried after `f` and `g`; zero is skipped.
    #[serde(serialize_with = "crate::polyarith::rational::serde_str_vec::serialize")]
    pub mu_list: Vec<Rational>,
    /// `ξ` search box for vertex parity: primitive directions with `|ξᵢ| ≤ xi_bound`.
    pub xi_bound: i64,
    /// Also try `ξ = (n, n+1)` for `n ≤ xi_family_max`.
    pub xi_family_max: i64,
    /// Bisection cap for the critical-point search.
    pub refine_depth: u32,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        use crate::polyarith::rational::{int, rat};
        CertifyConfig {
            sampling: SamplingConfig::default(),
            mu_list: vec![int(1), int(-1), int(2), int(-2), rat(1, 2), rat(-1, 2), int(3)],
            xi_bound: 12,
            xi_family_max: 12,
            refine_depth: 64,
        }
    }
}
