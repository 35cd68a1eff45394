//! Binary forms, handled by dehomogenizing at `x = 1`.

use num_traits::One;

use super::poly2::{Poly2, Var};
use super::rational::Rational;
use super::uni::UniPoly;
use super::PolyError;

/// `lc · x^a · y^b · Π φ_k^k` with each `φ_k` squarefree, coprime to `x` and `y`,
/// and normalized so the `y`-leading coefficient is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormDecomposition {
    pub leading: Rational,
    pub x_power: u32,
    pub y_power: u32,
    pub factors: Vec<(Poly2, u32)>,
}

impl FormDecomposition {
    pub fn expand(&self) -> Poly2 {
        let mut acc = Poly2::monomial(self.leading.clone(), self.x_power, self.y_power);
        for (f, k) in &self.factors {
            acc = &acc * &f.pow(*k);
        }
        acc
    }

    /// Factors with their multiplicities, `x` and `y` included.
    pub fn all_factors(&self) -> Vec<(Poly2, u32)> {
        let mut out = Vec::new();
        if self.x_power > 0 {
            out.push((Poly2::x(), self.x_power));
        }
        if self.y_power > 0 {
            out.push((Poly2::y(), self.y_power));
        }
        out.extend(self.factors.iter().cloned());
        out
    }
}

/// `Σ c_i t^i ↦ Σ c_i x^(k-i) y^i` with `k` the degree of `u`.
pub fn homogenize(u: &UniPoly) -> Poly2 {
    let k = u.degree().unwrap_or(0) as u32;
    Poly2::from_terms(
        u.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (((k - i as u32), i as u32).into(), c.clone())),
    )
}

fn split_form(d: &Poly2) -> Result<(u32, u32, UniPoly), PolyError> {
    if d.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !d.is_homogeneous() {
        return Err(PolyError::NotHomogeneous);
    }
    let a = d.monomials().map(|m| m.i).min().unwrap_or(0);
    let b = d.monomials().map(|m| m.j).min().unwrap_or(0);
    let phi = d.partial_eval(Var::X, &Rational::one()).strip_t_power();
    Ok((a, b, phi))
}

pub fn decompose_form(d: &Poly2) -> Result<FormDecomposition, PolyError> {
    let (a, b, phi) = split_form(d)?;
    let sq = phi.squarefree_decomposition()?;
    Ok(FormDecomposition {
        leading: sq.leading,
        x_power: a,
        y_power: b,
        factors: sq
            .factors
            .into_iter()
            .map(|(f, k)| (homogenize(&f), k))
            .collect(),
    })
}

/// Product of the factors of a form that occur with multiplicity at least two,
/// each raised to its multiplicity. Equals one when the form is squarefree.
pub fn multiple_factor_product(d: &Poly2) -> Result<Poly2, PolyError> {
    let dec = decompose_form(d)?;
    Ok(dec
        .all_factors()
        .into_iter()
        .filter(|(_, k)| *k >= 2)
        .fold(Poly2::one(), |acc, (f, k)| &acc * &f.pow(k)))
}

/// Gcd of two forms, normalized like the factors of [`decompose_form`].
pub fn form_gcd(p: &Poly2, q: &Poly2) -> Result<Poly2, PolyError> {
    let (a1, b1, phi1) = split_form(p)?;
    let (a2, b2, phi2) = split_form(q)?;
    let g = homogenize(&phi1.gcd(&phi2));
    Ok(g.mul_monomial((a1.min(a2), b1.min(b2)).into()))
}

/// `sqrt` of a form that is a square up to a constant, returned with unit leading
/// factors. `None` otherwise.
pub fn square_root_form(d: &Poly2) -> Result<Option<Poly2>, PolyError> {
    let dec = decompose_form(d)?;
    if !dec.all_factors().iter().all(|(_, k)| k % 2 == 0) {
        return Ok(None);
    }
    Ok(Some(
        dec.all_factors()
            .into_iter()
            .fold(Poly2::one(), |acc, (f, k)| &acc * &f.pow(k / 2)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::parse_poly;

    fn p(s: &str) -> Poly2 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn multiple_factor_examples() {
        assert_eq!(multiple_factor_product(&p("x^3 + x^2*y")).unwrap(), p("x^2"));
        let d = &p("x^2 + y^2").pow(2) * &p("x - y");
        assert_eq!(multiple_factor_product(&d).unwrap(), p("x^2 + y^2").pow(2));
        assert_eq!(multiple_factor_product(&p("x*y")).unwrap(), Poly2::one());
        assert_eq!(multiple_factor_product(&Poly2::zero()), Err(PolyError::ZeroPolynomial));
        assert_eq!(multiple_factor_product(&p("x + 1")), Err(PolyError::NotHomogeneous));
    }

    #[test]
    fn decomposition_round_trip() {
        let d = (&(&p("x").pow(3) * &p("y").pow(2)) * &p("2*x - 3*y").pow(2)).scale(&(-Rational::one()));
        let dec = decompose_form(&d).unwrap();
        assert_eq!(dec.x_power, 3);
        assert_eq!(dec.y_power, 2);
        assert_eq!(dec.expand(), d);
    }

    #[test]
    fn gcd_of_forms() {
        let a = &p("x^2").pow(1) * &p("x + y").pow(2);
        let b = &p("x*y") * &p("x + y");
        assert_eq!(form_gcd(&a, &b).unwrap(), p("x^2 + x*y"));
    }

    #[test]
    fn square_roots() {
        let d = p("x^2 - 2*x*y + y^2").scale(&Rational::from_integer(5.into()));
        assert_eq!(square_root_form(&d).unwrap(), Some(p("y - x")));
        assert_eq!(square_root_form(&p("x*y")).unwrap(), None);
    }
}
