use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::{format_rational, serde_str, Rational};
use super::PolyError;

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalInterval {
    #[serde(with = "serde_str")]
    lo: Rational,
    #[serde(with = "serde_str")]
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, PolyError> {
        if lo > hi {
            return Err(PolyError::EmptyInterval);
        }
        Ok(Self { lo, hi })
    }

    pub fn point(q: Rational) -> Self {
        Self {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn is_subset_of(&self, other: &RationalInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn mul(&self, other: &RationalInterval) -> RationalInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        RationalInterval { lo, hi }
    }

    /// Exact range of `t^e` over the interval.
    pub fn pow(&self, e: u32) -> RationalInterval {
        if e == 0 {
            return RationalInterval::point(Rational::one());
        }
        let pl = pow_u(&self.lo, e);
        let ph = pow_u(&self.hi, e);
        if e % 2 == 1 || !self.lo.is_negative() {
            // monotone on the interval
            if pl <= ph {
                RationalInterval { lo: pl, hi: ph }
            } else {
                RationalInterval { lo: ph, hi: pl }
            }
        } else if !self.hi.is_positive() {
            RationalInterval { lo: ph, hi: pl }
        } else {
            RationalInterval {
                lo: Rational::zero(),
                hi: pl.max(ph),
            }
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (RationalInterval, RationalInterval) {
        let m = self.midpoint();
        (
            RationalInterval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            RationalInterval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }
}

fn pow_u(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::rational::{int, rat};

    #[test]
    fn rejects_reversed_endpoints() {
        assert!(RationalInterval::new(int(2), int(1)).is_err());
    }

    #[test]
    fn even_power_straddling_zero() {
        let i = RationalInterval::new(int(-2), int(1)).unwrap();
        let p = i.pow(2);
        assert_eq!(p.lo(), &int(0));
        assert_eq!(p.hi(), &int(4));
        let q = RationalInterval::new(int(-3), int(-1)).unwrap().pow(2);
        assert_eq!((q.lo().clone(), q.hi().clone()), (int(1), int(9)));
    }

    #[test]
    fn product_sign_mix() {
        let a = RationalInterval::new(int(-1), int(2)).unwrap();
        let b = RationalInterval::new(rat(1, 2), int(3)).unwrap();
        let p = a.mul(&b);
        assert_eq!((p.lo().clone(), p.hi().clone()), (int(-3), int(6)));
    }
}
