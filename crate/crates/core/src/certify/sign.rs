use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{RationalPoint, SamplingConfig};
use crate::polyarith::rational::{height, serde_str};
use crate::polyarith::{Poly2, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub point: RationalPoint,
    #[serde(with = "serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSummary {
    pub samples: usize,
    pub positive: usize,
    pub negative: usize,
    pub zeros: usize,
    /// Simplest sampled zero, if any. A real zero already rules out a Jacobian pair.
    pub zero_witness: Option<RationalPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum SignStatus {
    PositiveConstant,
    NegativeConstant,
    IdenticallyZero,
    SignChanges { positive: Sample, negative: Sample },
    UndecidedNonconstant { summary: SampleSummary },
}

/// Grid points first, then the seeded random points.
pub fn sample_points(cfg: &SamplingConfig) -> Vec<RationalPoint> {
    let mut out = Vec::new();
    let n = cfg.grid_points.max(1) as i64;
    let b = cfg.grid_bound;
    let coord = |k: i64| {
        if n == 1 {
            Rational::zero()
        } else {
            Rational::new(BigInt::from(-b * (n - 1) + 2 * b * k), BigInt::from(n - 1))
        }
    };
    for a in 0..n {
        for c in 0..n {
            out.push(RationalPoint::new(coord(a), coord(c)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dmax = cfg.max_denominator.max(1);
    let rand_coord = |rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(1..=dmax);
        let num = rng.gen_range(-b * d..=b * d);
        Rational::new(BigInt::from(num), BigInt::from(d))
    };
    for _ in 0..cfg.random_points {
        let x = rand_coord(&mut rng);
        let y = rand_coord(&mut rng);
        out.push(RationalPoint::new(x, y));
    }
    out
}

/// Ordering by simplicity, used to pick stable witnesses.
fn simplicity_key(p: &RationalPoint) -> impl Ord {
    let hx = height(&p.x);
    let hy = height(&p.y);
    let negs = usize::from(p.x.is_negative()) + usize::from(p.y.is_negative());
    (
        hx.clone().max(hy.clone()),
        hx + hy,
        negs,
        p.x.denom().clone(),
        p.y.denom().clone(),
        p.x.abs(),
        p.y.abs(),
        p.x.clone(),
        p.y.clone(),
    )
}

fn simpler(a: &RationalPoint, b: &RationalPoint) -> Ordering {
    simplicity_key(a).cmp(&simplicity_key(b))
}

pub fn jacobian_sign_status(j: &Poly2, cfg: &SamplingConfig) -> SignStatus {
    if j.is_zero() {
        return SignStatus::IdenticallyZero;
    }
    if j.is_constant() {
        return if j.constant_term().is_positive() {
            SignStatus::PositiveConstant
        } else {
            SignStatus::NegativeConstant
        };
    }
    let mut pos: Option<Sample> = None;
    let mut neg: Option<Sample> = None;
    let mut zero: Option<RationalPoint> = None;
    let (mut np, mut nn, mut nz) = (0, 0, 0);
    let points = sample_points(cfg);
    for p in &points {
        let v = p.eval(j);
        let slot = if v.is_positive() {
            np += 1;
            &mut pos
        } else if v.is_negative() {
            nn += 1;
            &mut neg
        } else {
            nz += 1;
            if zero.as_ref().is_none_or(|z| simpler(p, z) == Ordering::Less) {
                zero = Some(p.clone());
            }
            continue;
        };
        if slot.as_ref().is_none_or(|s| simpler(p, &s.point) == Ordering::Less) {
            *slot = Some(Sample {
                point: p.clone(),
                value: v,
            });
        }
    }
    match (pos, neg) {
        (Some(positive), Some(negative)) => SignStatus::SignChanges { positive, negative },
        _ => SignStatus::UndecidedNonconstant {
            summary: SampleSummary {
                samples: points.len(),
                positive: np,
                negative: nn,
                zeros: nz,
                zero_witness: zero,
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::parse_poly;
    use crate::polyarith::rational::{int, rat};

    #[test]
    fn constants() {
        let cfg = SamplingConfig::default();
        assert_eq!(jacobian_sign_status(&parse_poly("1").unwrap(), &cfg), SignStatus::PositiveConstant);
        assert_eq!(jacobian_sign_status(&parse_poly("-2").unwrap(), &cfg), SignStatus::NegativeConstant);
        assert_eq!(jacobian_sign_status(&Poly2::zero(), &cfg), SignStatus::IdenticallyZero);
    }

    #[test]
    fn sign_change_witnesses() {
        let j = parse_poly("3*x^2*y^2 - 4*x*y + 1").unwrap();
        match jacobian_sign_status(&j, &SamplingConfig::default()) {
            SignStatus::SignChanges { positive, negative } => {
                assert_eq!(positive.point, RationalPoint::new(int(0), int(0)));
                assert_eq!(positive.value, int(1));
                assert_eq!(negative.point, RationalPoint::new(int(1), rat(1, 2)));
                assert_eq!(negative.value, rat(-1, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn positive_nonconstant_is_undecided() {
        let j = parse_poly("x^2 + y^2 + 1").unwrap();
        match jacobian_sign_status(&j, &SamplingConfig::default()) {
            SignStatus::UndecidedNonconstant { summary } => {
                assert_eq!(summary.samples, 41 * 41 + 200);
                assert_eq!(summary.negative, 0);
                assert_eq!(summary.zero_witness, None);
            }
            other => panic!("unexpected {other:?}"),
        }
        let j = parse_poly("x^2").unwrap();
        match jacobian_sign_status(&j, &SamplingConfig::default()) {
            SignStatus::UndecidedNonconstant { summary } => {
                assert_eq!(summary.zero_witness, Some(RationalPoint::new(int(0), int(0))));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = SamplingConfig::default();
        assert_eq!(sample_points(&cfg), sample_points(&cfg));
        let pts = sample_points(&cfg);
        assert_eq!(pts[0], RationalPoint::new(int(-10), int(-10)));
        assert_eq!(pts[1], RationalPoint::new(int(-10), rat(-19, 2)));
    }
}
