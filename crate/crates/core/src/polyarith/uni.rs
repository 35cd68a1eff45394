use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::interval::RationalInterval;
use super::rational::{format_rational, lcm_of_denominators, Rational};
use super::PolyError;

/// Dense univariate polynomial, coefficients indexed by exponent.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

/// `lc · Π factor^multiplicity` with monic, squarefree, pairwise coprime factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub leading: Rational,
    pub factors: Vec<(UniPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.leading.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }
}

/// Where to count roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootRange {
    WholeLine,
    Interval(RationalInterval),
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        UniPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// `Π (t - r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(UniPoly::one(), |acc, r| {
            &acc * &UniPoly::from_coeffs(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_interval(&self, i: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&i.pow(k as u32).scale(c));
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// `self(other)`.
    pub fn compose(&self, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Multiplicity of `t` as a factor, i.e. the number of leading zero coefficients.
    pub fn t_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out the largest power of `t`.
    pub fn strip_t_power(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs[self.t_valuation().min(self.coeffs.len())..].to_vec())
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (idx, dc) in d.coeffs.iter().enumerate() {
                    r[k + idx] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((UniPoly::from_coeffs(q), UniPoly::from_coeffs(r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly, PolyError> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            // positive rescaling keeps the remainders from growing
            let r = a.rem(&b).expect("nonzero divisor").positive_primitive();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's algorithm.
    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomposition, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let leading = self.leading();
        let f = self.monic();
        let mut factors = Vec::new();
        if f.is_constant() {
            return Ok(SquarefreeDecomposition { leading, factors });
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut k = 1;
        loop {
            let a = b.gcd(&d);
            if !a.is_constant() {
                factors.push((a.clone(), k));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            k += 1;
        }
        Ok(SquarefreeDecomposition { leading, factors })
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(UniPoly::one());
        }
        Ok(self
            .monic()
            .div_exact(&self.gcd(&self.derivative()))
            .expect("gcd divides"))
    }

    /// Sturm chain `p, p', -rem(p, p'), ...` with every member scaled by a positive
    /// constant to a primitive integer polynomial.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.positive_primitive()];
        if self.is_constant() {
            return seq;
        }
        seq.push(self.derivative().positive_primitive());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push((-&r).positive_primitive());
        }
        seq
    }

    /// Primitive integer polynomial that is a positive multiple of `self`.
    pub fn positive_primitive(&self) -> UniPoly {
        let mut ints = self.primitive_integer();
        if self.leading().is_negative() {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        UniPoly::from_coeffs(ints.into_iter().map(Rational::from_integer).collect())
    }

    /// Sign of `self(t)`, through integers when the coefficients are integral.
    fn sign_at(&self, t: &Rational) -> i8 {
        if !self.coeffs.iter().all(|c| c.is_integer()) {
            return sign_of(&self.eval(t));
        }
        // d^deg · p(n/d) = Σ a_k n^k d^(deg-k), and d > 0
        let (n, d) = (t.numer(), t.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c.numer() * &dpow;
            dpow *= d;
        }
        if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Number of distinct real roots in the range.
    pub fn count_real_roots(&self, range: &RootRange) -> Result<usize, PolyError> {
        let s = self.squarefree_part()?;
        let chain = s.sturm_sequence();
        Ok(match range {
            RootRange::WholeLine => {
                variations_at_infinity(&chain, true) - variations_at_infinity(&chain, false)
            }
            RootRange::Interval(i) => count_in_closed(&s, &chain, i),
        })
    }

    /// Disjoint isolating intervals with non-root rational endpoints, sorted ascending.
    pub fn isolate_real_roots(&self) -> Result<Vec<RationalInterval>, PolyError> {
        let s = self.squarefree_part()?;
        if s.is_constant() {
            return Ok(Vec::new());
        }
        let chain = s.sturm_sequence();
        let b = s.cauchy_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = variations(&chain, &lo) - variations(&chain, &hi);
            match n {
                0 => {}
                1 => out.push(RationalInterval::new(lo, hi)?),
                _ => {
                    let mid = non_root_split(&s, &lo, &hi);
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort_by(|a, b| a.lo().cmp(b.lo()));
        Ok(out)
    }

    /// Shrinks an isolating interval of `self` (a single simple root, non-root endpoints)
    /// by `steps` bisections. Returns a point interval if a midpoint hits the root.
    pub fn refine_root(&self, iv: &RationalInterval, steps: usize) -> RationalInterval {
        let mut lo = iv.lo().clone();
        let mut hi = iv.hi().clone();
        let slo = self.eval(&lo).signum();
        for _ in 0..steps {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            let sm = self.eval(&mid).signum();
            if sm.is_zero() {
                return RationalInterval::point(mid);
            }
            if sm == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        RationalInterval::new(lo, hi).expect("ordered")
    }

    /// Strict bound on the absolute value of every real root.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + m
    }

    /// Integer-coefficient primitive multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        if self.is_zero() {
            return Vec::new();
        }
        let l = lcm_of_denominators(self.coeffs.iter());
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        for c in &mut ints {
            *c = &*c / &g * &sign;
        }
        ints
    }

    /// The rational root inside an isolating interval, if that root is rational.
    ///
    /// A rational root `p/q` of the primitive integer form has `q` dividing the leading
    /// coefficient `a`, so once the interval is narrower than `1/(2a)` at most one
    /// fraction with denominator `a` lies in it and that is the only candidate.
    pub fn rational_root_in(&self, iv: &RationalInterval) -> Option<Rational> {
        let s = self.squarefree_part().ok()?;
        let ints = s.primitive_integer();
        let a = ints.last()?.clone();
        let target = Rational::new(BigInt::one(), BigInt::from(2) * &a);
        let mut cur = iv.clone();
        while cur.width() >= target {
            let next = s.refine_root(&cur, 4);
            if next.is_point() {
                return Some(next.lo().clone());
            }
            cur = next;
        }
        let scaled = cur.midpoint() * Rational::from_integer(a.clone());
        let cand = Rational::new(scaled.round().to_integer(), a);
        (cur.contains(&cand) && s.eval(&cand).is_zero()).then_some(cand)
    }
}

fn sign_variations(values: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in values.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(chain: &[UniPoly], t: &Rational) -> usize {
    sign_variations(chain.iter().map(|p| p.sign_at(t)))
}

fn variations_at_infinity(chain: &[UniPoly], negative: bool) -> usize {
    sign_variations(chain.iter().map(|p| {
        let s = sign_of(&p.leading());
        let odd = p.degree().unwrap_or(0) % 2 == 1;
        if negative && odd {
            -s
        } else {
            s
        }
    }))
}

/// Roots of a squarefree `s` in `[lo, hi]`. `V(a) - V(b)` counts `(a, b]` for any `a < b`
/// because a zero of `s` contributes no variation on either side.
fn count_in_closed(s: &UniPoly, chain: &[UniPoly], i: &RationalInterval) -> usize {
    let at_lo = usize::from(s.eval(i.lo()).is_zero());
    if i.is_point() {
        return at_lo;
    }
    variations(chain, i.lo()) - variations(chain, i.hi()) + at_lo
}

fn non_root_split(s: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    for (n, d) in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)] {
        let m = lo + &w * Rational::new(BigInt::from(n), BigInt::from(d));
        if !s.eval(&m).is_zero() {
            return m;
        }
    }
    // A squarefree polynomial has at most deg(s) roots; keep trying finer fractions.
    let mut d = 7i64;
    loop {
        let m = lo + &w * Rational::new(BigInt::from(3), BigInt::from(d));
        if !s.eval(&m).is_zero() {
            return m;
        }
        d += 1;
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => f.write_str(&format_rational(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", format_rational(&a))?;
                    }
                    if k == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                out[a + b] += ca * cb;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::rational::{int, rat};

    fn u(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(u(&[-1, 0, 1]).gcd(&u(&[-1, 1])), u(&[-1, 1]));
        assert_eq!(u(&[1, 0, 1]).gcd(&u(&[-1, 1])), UniPoly::one());
        let a = &u(&[-1, 1]).pow(2) * &u(&[2, 1]);
        let b = &u(&[-1, 1]) * &u(&[3, 1]);
        assert_eq!(a.gcd(&b), u(&[-1, 1]));
        assert!(UniPoly::zero().gcd(&UniPoly::zero()).is_zero());
        assert_eq!(u(&[0, 3]).gcd(&UniPoly::zero()), UniPoly::t());
    }

    #[test]
    fn squarefree_example() {
        let p = &u(&[-1, 1]).pow(2) * &UniPoly::t();
        let d = p.squarefree_decomposition().unwrap();
        assert_eq!(d.factors, vec![(UniPoly::t(), 1), (u(&[-1, 1]), 2)]);
        assert_eq!(d.expand(), p);
        assert_eq!(
            UniPoly::zero().squarefree_decomposition(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn squarefree_with_gaps_in_multiplicity() {
        // (t+1) (t-2)^3: multiplicity 2 is absent
        let p = (&u(&[1, 1]) * &u(&[-2, 1]).pow(3)).scale(&rat(-5, 3));
        let d = p.squarefree_decomposition().unwrap();
        assert_eq!(d.leading, rat(-5, 3));
        assert_eq!(d.factors, vec![(u(&[1, 1]), 1), (u(&[-2, 1]), 3)]);
        assert_eq!(d.expand(), p);
    }

    #[test]
    fn sturm_examples() {
        let w = RootRange::WholeLine;
        assert_eq!(u(&[1, 0, 1]).count_real_roots(&w).unwrap(), 0);
        assert_eq!(u(&[-1, 0, 1]).count_real_roots(&w).unwrap(), 2);
        let p = u(&[1, -4, 3]);
        assert_eq!(p.count_real_roots(&w).unwrap(), 2);
        let roots = p.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].contains(&rat(1, 3)) && roots[1].contains(&int(1)));
        assert_eq!(UniPoly::zero().count_real_roots(&w), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn closed_interval_counts_endpoint_roots() {
        let p = u(&[-1, 0, 1]);
        let i = |a, b| RootRange::Interval(RationalInterval::new(int(a), int(b)).unwrap());
        assert_eq!(p.count_real_roots(&i(-1, 1)).unwrap(), 2);
        assert_eq!(p.count_real_roots(&i(1, 5)).unwrap(), 1);
        assert_eq!(p.count_real_roots(&i(-5, -1)).unwrap(), 1);
        assert_eq!(p.count_real_roots(&i(2, 5)).unwrap(), 0);
        assert_eq!(p.count_real_roots(&i(1, 1)).unwrap(), 1);
    }

    #[test]
    fn multiple_roots_count_once() {
        let p = &u(&[-1, 1]).pow(3) * &u(&[2, 1]).pow(2);
        assert_eq!(p.count_real_roots(&RootRange::WholeLine).unwrap(), 2);
        assert_eq!(p.isolate_real_roots().unwrap().len(), 2);
    }

    #[test]
    fn isolation_when_root_sits_on_midpoint() {
        // bound is symmetric so 0 is the first midpoint
        let p = u(&[0, -1, 0, 1]);
        let roots = p.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].hi() <= w[1].lo());
        }
        for r in &roots {
            assert!(!p.eval(r.lo()).is_zero() && !p.eval(r.hi()).is_zero());
        }
    }

    #[test]
    fn rational_root_detection() {
        let p = &u(&[-1, 3]) * &u(&[-2, 0, 1]);
        let roots = p.isolate_real_roots().unwrap();
        let found: Vec<_> = roots.iter().map(|r| p.rational_root_in(r)).collect();
        assert_eq!(found.iter().filter(|r| r.is_some()).count(), 1);
        assert!(found.contains(&Some(rat(1, 3))));
    }

    #[test]
    fn division_and_composition() {
        let (q, r) = u(&[1, 2, 3, 4]).div_rem(&u(&[1, 1])).unwrap();
        assert_eq!(&(&q * &u(&[1, 1])) + &r, u(&[1, 2, 3, 4]));
        assert_eq!(u(&[0, 0, 1]).compose(&u(&[1, 1])), u(&[1, 2, 1]));
        assert_eq!(u(&[1]).div_rem(&UniPoly::zero()), Err(PolyError::DivisionByZero));
    }
}
