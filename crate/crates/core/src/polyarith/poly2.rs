use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval::RationalInterval;
use super::rational::{format_rational, Rational};
use super::uni::UniPoly;
use super::PolyError;

/// Exponent vector `(i, j)` of `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.i <= other.i && self.j <= other.j
    }

    pub fn transpose(&self) -> Monomial {
        Monomial::new(self.j, self.i)
    }

    /// Key for the graded order used in printing and division: total degree, then x-degree.
    fn graded_key(&self) -> (u32, u32) {
        (self.i + self.j, self.i)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.i, self.j].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [i, j] = <[u32; 2]>::deserialize(d)?;
        Ok(Monomial::new(i, j))
    }
}

impl From<(u32, u32)> for Monomial {
    fn from((i, j): (u32, u32)) -> Self {
        Monomial::new(i, j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }

    fn exponent(self, m: &Monomial) -> u32 {
        match self {
            Var::X => m.i,
            Var::Y => m.j,
        }
    }

    fn monomial(self, e: u32) -> Monomial {
        match self {
            Var::X => Monomial::new(e, 0),
            Var::Y => Monomial::new(0, e),
        }
    }
}

/// Sparse bivariate polynomial with exact rational coefficients.
///
/// No stored coefficient is ever zero, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Poly2::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly2::monomial(Rational::one(), 0, 1)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Poly2::x(),
            Var::Y => Poly2::y(),
        }
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(i, j), c);
        }
        Poly2 { terms }
    }

    /// Sums the given terms, merging like monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Poly2::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn from_i64_terms(terms: &[((u32, u32), i64)]) -> Self {
        Poly2::from_terms(
            terms
                .iter()
                .map(|&((i, j), c)| (Monomial::new(i, j), Rational::from_integer(c.into()))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.i == 0 && m.j == 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, i: u32, j: u32) -> Rational {
        self.coeff(&Monomial::new(i, j))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff_of(0, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().copied().collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (Monomial::new(k.i + m.i, k.j + m.j), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut acc = Poly2::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, v: Var) -> Poly2 {
        Poly2::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = v.exponent(m);
            if e == 0 {
                return None;
            }
            let dm = match v {
                Var::X => Monomial::new(m.i - 1, m.j),
                Var::Y => Monomial::new(m.i, m.j - 1),
            };
            Some((dm, c * Rational::from_integer(e.into())))
        }))
    }

    pub fn total_degree(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| v.exponent(m)).max()
    }

    /// Homogeneous part of top total degree.
    pub fn leading_form(&self) -> Result<Poly2, PolyError> {
        let d = self.total_degree()?;
        Ok(self.restrict(|m| m.degree() == d))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Terms whose exponents satisfy the predicate.
    pub fn restrict<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn transpose(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.transpose(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, x0: &Rational, y0: &Rational) -> Rational {
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let xp = powers(x0, dx);
        let yp = powers(y0, dy);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * &xp[m.i as usize] * &yp[m.j as usize];
        }
        acc
    }

    /// Enclosure of the range over a box by naive interval arithmetic.
    pub fn eval_box(&self, bx: &RationalInterval, by: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(Rational::zero());
        for (m, c) in &self.terms {
            let t = bx.pow(m.i).mul(&by.pow(m.j)).scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes a value for one variable, leaving a polynomial in the other.
    pub fn partial_eval(&self, v: Var, value: &Rational) -> UniPoly {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let vp = powers(value, d);
        let w = v.other();
        let mut coeffs = vec![Rational::zero(); self.degree_in(w).unwrap_or(0) as usize + 1];
        for (m, c) in &self.terms {
            coeffs[w.exponent(m) as usize] += c * &vp[v.exponent(m) as usize];
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// Coefficients as polynomials in the other variable, indexed by the power of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly2> {
        let d = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Poly2::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = v.exponent(m);
            let rest = match v {
                Var::X => Monomial::new(0, m.j),
                Var::Y => Monomial::new(m.i, 0),
            };
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// `p(X, Y)` for polynomial substitutes `X`, `Y`.
    pub fn compose(&self, sx: &Poly2, sy: &Poly2) -> Poly2 {
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let mut xp = vec![Poly2::one()];
        for k in 1..=dx {
            let next = &xp[k - 1] * sx;
            xp.push(next);
        }
        let mut yp = vec![Poly2::one()];
        for k in 1..=dy {
            let next = &yp[k - 1] * sy;
            yp.push(next);
        }
        let mut acc = Poly2::zero();
        for (m, c) in &self.terms {
            let t = (&xp[m.i as usize] * &yp[m.j as usize]).scale(c);
            acc = &acc + &t;
        }
        acc
    }

    /// `p(m00 x + m01 y, m10 x + m11 y)`; the matrix must be invertible.
    pub fn linear_change(&self, m: &[[Rational; 2]; 2]) -> Result<Poly2, PolyError> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(PolyError::SingularMatrix);
        }
        let sx = Poly2::from_terms([
            (Monomial::new(1, 0), m[0][0].clone()),
            (Monomial::new(0, 1), m[0][1].clone()),
        ]);
        let sy = Poly2::from_terms([
            (Monomial::new(1, 0), m[1][0].clone()),
            (Monomial::new(0, 1), m[1][1].clone()),
        ]);
        Ok(self.compose(&sx, &sy))
    }

    /// `p(x + a, y + b)`.
    pub fn substitute_affine(&self, a: &Rational, b: &Rational) -> Poly2 {
        let sx = &Poly2::x() + &Poly2::constant(a.clone());
        let sy = &Poly2::y() + &Poly2::constant(b.clone());
        self.compose(&sx, &sy)
    }

    /// Shear `y -> y + b x^k` when `axis` is `Y`, or `x -> x + b y^k` when `axis` is `X`.
    pub fn substitute_shear(&self, b: &Rational, k: u32, axis: Var) -> Result<Poly2, PolyError> {
        if k == 0 {
            return Err(PolyError::InvalidShearPower);
        }
        let shifted = &Poly2::var(axis) + &Poly2::monomial(b.clone(), 0, 0).mul_monomial(axis.other().monomial(k));
        Ok(match axis {
            Var::Y => self.compose(&Poly2::x(), &shifted),
            Var::X => self.compose(&shifted, &Poly2::y()),
        })
    }

    fn leading_term(&self) -> Option<(Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by_key(|(m, _)| m.graded_key())
            .map(|(m, c)| (*m, c))
    }

    /// Exact quotient if `d` divides `self`, else `None`.
    pub fn div_exact(&self, d: &Poly2) -> Option<Poly2> {
        let (dm, dc) = d.leading_term()?;
        let dc = dc.clone();
        let mut r = self.clone();
        let mut q = Poly2::zero();
        while let Some((rm, rc)) = r.leading_term() {
            if !dm.divides(&rm) {
                return None;
            }
            let tm = Monomial::new(rm.i - dm.i, rm.j - dm.j);
            let tc = rc / &dc;
            let t = Poly2::monomial(tc.clone(), tm.i, tm.j);
            q.add_term(tm, tc);
            r = &r - &(&t * d);
        }
        Some(q)
    }

    /// Converts a polynomial in a single variable `v` to a `UniPoly`.
    pub fn to_uni(&self, v: Var) -> Option<UniPoly> {
        if self.terms.keys().any(|m| v.other().exponent(m) != 0) {
            return None;
        }
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); d + 1];
        for (m, c) in &self.terms {
            coeffs[v.exponent(m) as usize] = c.clone();
        }
        Some(UniPoly::from_coeffs(coeffs))
    }

    pub fn from_uni(u: &UniPoly, v: Var) -> Poly2 {
        Poly2::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (v.monomial(k as u32), c.clone())),
        )
    }

    /// `u(p)` for a univariate `u`.
    pub fn compose_uni(u: &UniPoly, p: &Poly2) -> Poly2 {
        let mut acc = Poly2::zero();
        for c in u.coeffs().iter().rev() {
            acc = &(&acc * p) + &Poly2::constant(c.clone());
        }
        acc
    }

    /// Terms sorted in canonical print order: graded lexicographic, descending.
    pub fn sorted_terms(&self) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| b.0.graded_key().cmp(&a.0.graded_key()));
        v
    }
}

fn powers(x: &Rational, d: usize) -> Vec<Rational> {
    let mut v = Vec::with_capacity(d + 1);
    v.push(Rational::one());
    for k in 1..=d {
        let next = &v[k - 1] * x;
        v.push(next);
    }
    v
}

/// `∂f/∂x ∂g/∂y − ∂f/∂y ∂g/∂x`.
pub fn jacobian_det(f: &Poly2, g: &Poly2) -> Poly2 {
    let a = &f.partial(Var::X) * &g.partial(Var::Y);
    let b = &f.partial(Var::Y) * &g.partial(Var::X);
    &a - &b
}

fn format_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("x", m.i), ("y", m.j)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Canonical text form, accepted back by [`super::parse_poly`].
pub fn format_poly(p: &Poly2) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.sorted_terms().iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mono = format_monomial(m);
        if mono.is_empty() {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rational(&a));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl Serialize for Poly2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_poly(self))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(Monomial::new(m1.i + m2.i, m1.j + m2.j), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::parse_poly;
    use crate::polyarith::rational::{int, rat};

    fn p(s: &str) -> Poly2 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&Poly2::x() + &Poly2::y(), p("x + y"));
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        assert!(Poly2::x().scale(&int(0)).is_zero());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(p("x^2*y").partial(Var::X), p("2*x*y"));
        assert!(p("x").partial(Var::Y).is_zero());
        assert_eq!(p("x^5 + x^2*y^3").partial(Var::X), p("5*x^4 + 2*x*y^3"));
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian_det(&p("x"), &p("y")), Poly2::one());
        assert_eq!(
            jacobian_det(&p("x^2*y - x"), &p("x*y^2 - y")),
            p("3*x^2*y^2 - 4*x*y + 1")
        );
        let g = p("y + x^2");
        let f = &Poly2::x() + &g.pow(2);
        assert_eq!(jacobian_det(&f, &g), Poly2::one());
    }

    #[test]
    fn degree_and_leading_form() {
        let f = p("x^5 + x^2*y^3 + y");
        assert_eq!(f.total_degree().unwrap(), 5);
        assert_eq!(f.leading_form().unwrap(), p("x^5 + x^2*y^3"));
        assert_eq!(p("7").leading_form().unwrap(), p("7"));
        assert_eq!(p("x + y + x^2").leading_form().unwrap(), p("x^2"));
        assert_eq!(Poly2::zero().total_degree(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(p("x^2").substitute_affine(&int(1), &int(0)), p("x^2 + 2*x + 1"));
        assert_eq!(
            p("y^2").substitute_shear(&int(-1), 2, Var::Y).unwrap(),
            p("y^2 - 2*x^2*y + x^4")
        );
        let swap = [[int(0), int(1)], [int(1), int(0)]];
        assert_eq!(p("x").linear_change(&swap).unwrap(), p("y"));
        let singular = [[int(1), int(2)], [int(2), int(4)]];
        assert_eq!(p("x").linear_change(&singular), Err(PolyError::SingularMatrix));
        assert_eq!(
            p("x").substitute_shear(&int(1), 0, Var::X),
            Err(PolyError::InvalidShearPower)
        );
    }

    #[test]
    fn eval_examples() {
        let j = p("3*x^2*y^2 - 4*x*y + 1");
        assert_eq!(j.eval(&int(1), &rat(1, 2)), rat(-1, 4));
        assert_eq!(j.eval(&int(0), &int(0)), int(1));
        assert_eq!(p("x").eval(&int(2), &int(3)), int(2));
    }

    #[test]
    fn exact_division() {
        let a = p("x*y - 1");
        let b = p("x^2 + 3*y");
        let prod = &a.pow(2) * &b;
        assert_eq!(prod.div_exact(&a.pow(2)), Some(b.clone()));
        assert_eq!(prod.div_exact(&p("x - 2")), None);
        assert_eq!(Poly2::zero().div_exact(&a), Some(Poly2::zero()));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(format_poly(&p("y - 2*x*y^2 + x^2*y^3")), "x^2*y^3 - 2*x*y^2 + y");
        assert_eq!(format_poly(&p("-1/2*x + 3")), "-1/2*x + 3");
        assert_eq!(format_poly(&Poly2::zero()), "0");
        assert_eq!(format_poly(&p("x*y + x^2 + y^2")), "x^2 + x*y + y^2");
    }

    #[test]
    fn box_enclosure_contains_values() {
        let f = p("x^2*y - 3*x + y^3");
        let bx = RationalInterval::new(int(-1), rat(1, 2)).unwrap();
        let by = RationalInterval::new(int(0), int(2)).unwrap();
        let enc = f.eval_box(&bx, &by);
        for a in [int(-1), rat(-1, 3), rat(1, 2)] {
            for b in [int(0), int(1), int(2)] {
                assert!(enc.contains(&f.eval(&a, &b)));
            }
        }
    }
}
