//! Criteria under which `Jac(f, g)` changes sign, or `(f, g)` cannot be a Jacobian pair.

use num_traits::{Signed, Zero};

use super::{Certificate, PairVariant, RationalPoint, SignPair, Subject};
use crate::newton::{newton_polygon, quasi_leading_part, Direction, LatticePolygon};
use crate::polyarith::rational::{int, pow_i, rat};
use crate::polyarith::{jacobian_det, Monomial, Poly2, Rational, RationalInterval, UniPoly};

/// Sign-change witnesses for `j` found by pushing points along the weight `ξ`, where the
/// `ξ`-face of `j` dominates.
pub fn scaled_witnesses(j: &Poly2, xi: &Direction) -> Option<SignPair> {
    let face = quasi_leading_part(j, xi).ok()?;
    let seeds: Vec<Rational> = vec![int(1), int(-1), int(2), int(-2), rat(1, 2), rat(-1, 2), int(3), int(-3)];
    let mut found: [Option<RationalPoint>; 2] = [None, None];
    for want in [1i8, -1] {
        'seeds: for x0 in &seeds {
            for y0 in &seeds {
                let v = face.eval(x0, y0);
                if sign(&v) != want {
                    continue;
                }
                for k in 0..=64i64 {
                    let t = pow_i(&int(2), k);
                    let p = RationalPoint::new(x0 * pow_i(&t, xi.xi1), y0 * pow_i(&t, xi.xi2));
                    if sign(&p.eval(j)) == want {
                        found[usize::from(want < 0)] = Some(p);
                        break 'seeds;
                    }
                }
            }
        }
    }
    match found {
        [Some(positive), Some(negative)] => Some(SignPair { positive, negative }),
        _ => None,
    }
}

fn sign(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Points `t` where `u(t) > 0` and `u(t) < 0`, if `u` changes sign.
pub(crate) fn uni_sign_witnesses(u: &UniPoly) -> Option<(Rational, Rational)> {
    let mut cands = vec![int(0), int(1), int(-1)];
    if let Ok(roots) = u.isolate_real_roots() {
        for r in roots {
            cands.push(r.lo() - int(1));
            cands.push(r.lo().clone());
            cands.push(r.hi().clone());
            cands.push(r.hi() + int(1));
        }
    }
    let pos = cands.iter().find(|t| u.eval(t).is_positive())?.clone();
    let neg = cands.iter().find(|t| u.eval(t).is_negative())?.clone();
    Some((pos, neg))
}

/// `(F, G)` with `f = x F(xy)` and `g = y G(xy)`, if the supports allow it.
pub(crate) fn znak0_factors(f: &Poly2, g: &Poly2) -> Option<(UniPoly, UniPoly)> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let mut fc = Vec::new();
    for (m, c) in f.terms() {
        if m.i != m.j + 1 {
            return None;
        }
        let k = m.j as usize;
        if fc.len() <= k {
            fc.resize(k + 1, Rational::zero());
        }
        fc[k] = c.clone();
    }
    let mut gc = Vec::new();
    for (m, c) in g.terms() {
        if m.j != m.i + 1 {
            return None;
        }
        let k = m.i as usize;
        if gc.len() <= k {
            gc.resize(k + 1, Rational::zero());
        }
        gc[k] = c.clone();
    }
    Some((UniPoly::from_coeffs(fc), UniPoly::from_coeffs(gc)))
}

/// An isolating interval of a nonzero real root of `u` that excludes zero.
pub(crate) fn nonzero_root(u: &UniPoly) -> Option<RationalInterval> {
    let zero_is_root = u.eval(&Rational::zero()).is_zero();
    let s = u.squarefree_part().ok()?;
    for r in u.isolate_real_roots().ok()? {
        if r.contains_zero() && zero_is_root {
            continue;
        }
        let mut cur = r;
        while cur.contains_zero() {
            cur = s.refine_root(&cur, 1);
        }
        return Some(cur);
    }
    None
}

/// Applies when `f = x F(xy)`, `g = y G(xy)` and `FG` has a nonzero real root; then
/// `Jac(f, g) = H'(xy)` with `H = t F G` changes sign.
pub fn znak0_sign_change(f: &Poly2, g: &Poly2) -> Option<Certificate> {
    let (big_f, big_g) = znak0_factors(f, g)?;
    let fg = &big_f * &big_g;
    let root = nonzero_root(&fg)?;
    let h = &UniPoly::t() * &fg;
    let witnesses = uni_sign_witnesses(&h.derivative()).map(|(p, n)| SignPair {
        positive: RationalPoint::new(p, int(1)),
        negative: RationalPoint::new(n, int(1)),
    });
    Some(Certificate::Znak0 {
        variant: PairVariant::Original,
        big_f,
        big_g,
        root,
        witnesses,
    })
}

/// `(a, b)` with `p = a y (xy − b)²`, if `p` has that form.
pub(crate) fn match_y_square(p: &Poly2) -> Option<(Rational, Rational)> {
    let allowed = [Monomial::new(0, 1), Monomial::new(1, 2), Monomial::new(2, 3)];
    if p.monomials().any(|m| !allowed.contains(m)) {
        return None;
    }
    let a = p.coeff_of(2, 3);
    if a.is_zero() {
        return None;
    }
    let b = -p.coeff_of(1, 2) / (int(2) * &a);
    (p.coeff_of(0, 1) == &a * &b * &b).then_some((a, b))
}

pub const ZNAK_DIRECTION: Direction = Direction::new(-1, 1);

/// `f^ξ = a y (xy − b)²` with `b ≠ 0` and `l(Δ_g, ξ) = −1`, `ξ = (−1, 1)`.
pub fn znak_sign_change(f: &Poly2, g: &Poly2) -> Option<Certificate> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let xi = ZNAK_DIRECTION;
    let (a, b) = match_y_square(&quasi_leading_part(f, &xi).ok()?)?;
    if b.is_zero() || newton_polygon(g).ok()?.support_value(&xi) != -1 {
        return None;
    }
    let witnesses = scaled_witnesses(&jacobian_det(f, g), &xi);
    Some(Certificate::Znak {
        variant: PairVariant::Original,
        a,
        b,
        witnesses,
    })
}

/// Both faces in direction `ξ` are vertices `α`, `β`, linearly independent, and `α + β`
/// has an even coordinate.
pub fn vertex_parity_sign_change(f: &Poly2, g: &Poly2, xi: &Direction) -> Option<Certificate> {
    if xi.is_zero() {
        return None;
    }
    let (alpha, beta) = vertex_pair(&newton_polygon(f).ok()?, &newton_polygon(g).ok()?, xi)?;
    let witnesses = scaled_witnesses(&jacobian_det(f, g), xi);
    Some(Certificate::VertexParity {
        variant: PairVariant::Original,
        xi: *xi,
        alpha,
        beta,
        witnesses,
    })
}

/// The purely combinatorial part of the vertex parity criterion.
pub(crate) fn vertex_pair(df: &LatticePolygon, dg: &LatticePolygon, xi: &Direction) -> Option<(Monomial, Monomial)> {
    let fa = df.face(xi).ok()?;
    let fb = dg.face(xi).ok()?;
    let (&[alpha], &[beta]) = (fa.points(), fb.points()) else {
        return None;
    };
    let det = alpha.i as i64 * beta.j as i64 - alpha.j as i64 * beta.i as i64;
    let even = (alpha.i + beta.i) % 2 == 0 || (alpha.j + beta.j) % 2 == 0;
    (det != 0 && even).then_some((alpha, beta))
}

/// Directions tried by [`vertex_parity_search`]: `(n, n+1)` first, then every primitive
/// direction in the box ordered by size.
pub fn parity_directions(bound: i64, family_max: i64) -> Vec<Direction> {
    let mut out: Vec<Direction> = (1..=family_max).map(|n| Direction::new(n, n + 1)).collect();
    let mut rest: Vec<Direction> = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let d = Direction::new(a, b);
            if !d.is_zero() && d.is_primitive() && !out.contains(&d) {
                rest.push(d);
            }
        }
    }
    rest.sort_by_key(|d| (d.xi1.abs().max(d.xi2.abs()), d.xi1, d.xi2));
    out.extend(rest);
    out
}

pub fn vertex_parity_search(f: &Poly2, g: &Poly2, bound: i64, family_max: i64) -> Option<Certificate> {
    let df = newton_polygon(f).ok()?;
    let dg = newton_polygon(g).ok()?;
    parity_directions(bound, family_max)
        .into_iter()
        .find(|xi| vertex_pair(&df, &dg, xi).is_some())
        .and_then(|xi| vertex_parity_sign_change(f, g, &xi))
}

/// An outer edge of `Δ_f` joining `(1,0)` to `(a,b)` with `a > 1`, `b > 0` and no other
/// lattice points.
pub fn hrc_excludes(f: &Poly2) -> Option<Certificate> {
    let d = newton_polygon(f).ok()?;
    hrc_edge(&d).map(|(start, end, normal)| Certificate::Hrc {
        subject: Subject::F,
        start,
        end,
        normal,
    })
}

pub(crate) fn hrc_edge(d: &LatticePolygon) -> Option<(Monomial, Monomial, Direction)> {
    let one = Monomial::new(1, 0);
    for e in d.outer_edges().ok()? {
        let (a, b) = e.endpoints().ok()?;
        let other = if a == one {
            b
        } else if b == one {
            a
        } else {
            continue;
        };
        if other.i > 1 && other.j > 0 && e.lattice_length() == 1 {
            return Some((a, b, e.direction()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::parse_poly;

    fn p(s: &str) -> Poly2 {
        parse_poly(s).unwrap()
    }

    fn check_pair(j: &Poly2, w: &SignPair) {
        assert!(w.positive.eval(j).is_positive());
        assert!(w.negative.eval(j).is_negative());
    }

    #[test]
    fn znak0_examples() {
        let (f, g) = (p("x^2*y - x"), p("x*y^2 - y"));
        match znak0_sign_change(&f, &g) {
            Some(Certificate::Znak0 { root, witnesses, .. }) => {
                assert!(root.contains(&int(1)));
                check_pair(&jacobian_det(&f, &g), &witnesses.unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(znak0_sign_change(&p("x"), &p("y")).is_none());
        let g = p("y");
        match znak0_sign_change(&f, &g) {
            Some(Certificate::Znak0 { witnesses, .. }) => check_pair(&jacobian_det(&f, &g), &witnesses.unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn znak0_ignores_root_at_zero() {
        // FG = t(t^2 + 1) has only the root zero
        assert!(znak0_sign_change(&p("x^2*y"), &p("x^2*y^3 + y")).is_none());
    }

    #[test]
    fn znak_examples() {
        let f = p("x^2*y^3 - 2*x*y^2 + y + x");
        match znak_sign_change(&f, &p("x")) {
            Some(Certificate::Znak { a, b, witnesses, .. }) => {
                assert_eq!((a, b), (int(1), int(1)));
                check_pair(&jacobian_det(&f, &p("x")), &witnesses.unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(znak_sign_change(&p("y + x"), &p("x")).is_none());
        assert!(znak_sign_change(&f, &p("x + y")).is_none());
    }

    #[test]
    fn vertex_parity_examples() {
        let d = |v: &[(u32, u32)]| LatticePolygon::hull(v.iter().map(|&m| m.into())).unwrap();
        let xi = Direction::new(5, 6);
        let fa = d(&[(2, 3), (0, 1), (1, 0)]);
        let fb = d(&[(3, 3), (0, 1), (1, 0)]);
        assert_eq!(
            vertex_pair(&fa, &fb, &xi),
            Some((Monomial::new(2, 3), Monomial::new(3, 3)))
        );
        let f = p("x^2*y^3 + x + y");
        let g = p("x^3*y^3 + x");
        match vertex_parity_sign_change(&f, &g, &xi) {
            Some(Certificate::VertexParity { witnesses, .. }) => {
                check_pair(&jacobian_det(&f, &g), &witnesses.unwrap())
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(vertex_parity_sign_change(&p("x"), &p("y"), &Direction::new(1, 1)).is_none());
        assert!(vertex_parity_sign_change(&p("x*y"), &p("x^2*y^2"), &Direction::new(1, 1)).is_none());
    }

    #[test]
    fn hrc_examples() {
        match hrc_excludes(&p("x + x^5 + x^2*y^2")) {
            Some(Certificate::Hrc { start, end, .. }) => {
                assert_eq!((start, end), (Monomial::new(2, 2), Monomial::new(1, 0)));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(hrc_excludes(&p("x + x^5 + x^2*y")).is_some());
        assert!(hrc_excludes(&p("1 + x^2 + y^2")).is_none());
    }

    #[test]
    fn direction_list_starts_with_family() {
        let ds = parity_directions(12, 12);
        assert_eq!(ds[0], Direction::new(1, 2));
        assert_eq!(ds[11], Direction::new(12, 13));
        assert!(ds.iter().all(|d| d.is_primitive()));
    }
}
