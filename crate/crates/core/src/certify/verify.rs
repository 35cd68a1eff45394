//! Independent re-checking of certificates.
//!
//! Nothing here trusts the search code: every claim is recomputed from the pair.

use num_traits::{Signed, Zero};

use super::critical::{
    combined_gradient, common_root_on_line, eval_centered, miranda_holds, BoxReason, CriticalEvidence,
    NoCriticalEvidence,
};
use super::exclusions::{hrc_edge, match_y_square, vertex_pair, znak0_factors, ZNAK_DIRECTION};
use super::infinity::infinity_real_points;
use super::{Certificate, DirectEvidence, SignPair, Verdict, VerdictTag};
use crate::edgecheck::edge_univariate;
use crate::newton::{is_convenient, newton_polygon, quasi_leading_part};
use crate::polyarith::{jacobian_det, resultant, Poly2, RationalInterval, RootRange, UniPoly, Var};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn check_witnesses(j: &Poly2, w: &Option<SignPair>) -> Check {
    if let Some(w) = w {
        ensure(w.positive.eval(j).is_positive(), "positive witness is not positive")?;
        ensure(w.negative.eval(j).is_negative(), "negative witness is not negative")?;
    }
    Ok(())
}

fn roots_in(u: &UniPoly, iv: &RationalInterval) -> Result<usize, String> {
    u.count_real_roots(&RootRange::Interval(iv.clone())).map_err(|e| e.to_string())
}

fn no_real_roots(p: &Poly2, v: Var) -> Check {
    let u = p.to_uni(v).ok_or("not univariate")?;
    ensure(!u.is_zero(), "zero polynomial")?;
    let n = u.count_real_roots(&RootRange::WholeLine).map_err(|e| e.to_string())?;
    ensure(n == 0, format!("{n} real roots"))
}

/// Checks that the intervals isolate all real roots of `u`, one each.
fn check_isolation(u: &UniPoly, ivs: &[RationalInterval]) -> Check {
    let total = u.count_real_roots(&RootRange::WholeLine).map_err(|e| e.to_string())?;
    ensure(total == ivs.len(), "root list is incomplete")?;
    for (k, iv) in ivs.iter().enumerate() {
        ensure(roots_in(u, iv)? == 1, "interval does not isolate a root")?;
        for other in &ivs[k + 1..] {
            ensure(!iv.intersects(other), "isolating intervals overlap")?;
        }
    }
    Ok(())
}

pub fn verify_no_critical(p: &Poly2, ev: &NoCriticalEvidence) -> Check {
    let fx = p.partial(Var::X);
    let fy = p.partial(Var::Y);
    match ev {
        NoCriticalEvidence::ConstantPartial { var, value } => {
            ensure(!value.is_zero(), "zero constant")?;
            ensure(p.partial(*var) == Poly2::constant(value.clone()), "partial is not the stated constant")
        }
        NoCriticalEvidence::NonvanishingJacobian { partner, value } => {
            ensure(!value.is_zero(), "zero constant")?;
            ensure(
                jacobian_det(p, partner) == Poly2::constant(value.clone()),
                "jacobian is not the stated constant",
            )
        }
        NoCriticalEvidence::ZeroPartialNoRealRoots { zero } => {
            ensure(p.partial(*zero).is_zero(), "partial is not zero")?;
            no_real_roots(&p.partial(zero.other()), zero.other())
        }
        NoCriticalEvidence::ResultantNoRealRoots { eliminated, resultant: r } => {
            ensure(&resultant(&fx, &fy, *eliminated) == r, "resultant mismatch")?;
            no_real_roots(r, eliminated.other())
        }
        NoCriticalEvidence::BoxExclusion {
            res_x,
            res_y,
            x_roots,
            y_roots,
            boxes,
        } => {
            ensure(&resultant(&fx, &fy, Var::Y) == res_x, "x resultant mismatch")?;
            ensure(&resultant(&fx, &fy, Var::X) == res_y, "y resultant mismatch")?;
            let ux = res_x.to_uni(Var::X).ok_or("x resultant is not univariate")?;
            let uy = res_y.to_uni(Var::Y).ok_or("y resultant is not univariate")?;
            ensure(!ux.is_zero() && !uy.is_zero(), "zero resultant")?;
            check_isolation(&ux, x_roots)?;
            check_isolation(&uy, y_roots)?;
            for i in 0..x_roots.len() {
                for j in 0..y_roots.len() {
                    let b = boxes
                        .iter()
                        .find(|b| b.xi == i && b.yi == j)
                        .ok_or_else(|| format!("box ({i}, {j}) missing"))?;
                    ensure(
                        b.x.is_subset_of(&x_roots[i]) && roots_in(&ux, &b.x)? == 1,
                        "box misses the x root",
                    )?;
                    ensure(
                        b.y.is_subset_of(&y_roots[j]) && roots_in(&uy, &b.y)? == 1,
                        "box misses the y root",
                    )?;
                    match b.reason {
                        BoxReason::PartialNonzero { var } => {
                            let d = if var == Var::X { &fx } else { &fy };
                            ensure(!eval_centered(d, &b.x, &b.y).contains_zero(), "partial may vanish on box")?;
                        }
                        BoxReason::LineGcd { fixed } => {
                            let (side, other) = if fixed == Var::X { (&b.x, &b.y) } else { (&b.y, &b.x) };
                            ensure(side.is_point(), "box side is not a point")?;
                            ensure(
                                common_root_on_line(&fx, &fy, fixed, side.lo(), Some(other)).is_none(),
                                "partials share a root on the line",
                            )?;
                        }
                    }
                }
            }
            Ok(())
        }
    }
}

pub fn verify_critical_point(p: &Poly2, ev: &CriticalEvidence) -> Check {
    let fx = p.partial(Var::X);
    let fy = p.partial(Var::Y);
    match ev {
        CriticalEvidence::ExactPoint { point } => {
            ensure(point.eval(&fx).is_zero() && point.eval(&fy).is_zero(), "gradient is nonzero")
        }
        CriticalEvidence::OnLine {
            fixed,
            value,
            common,
            interval,
        } => {
            let a = fx.partial_eval(*fixed, value);
            let b = fy.partial_eval(*fixed, value);
            ensure(!common.is_constant(), "constant common factor")?;
            for q in [a, b] {
                ensure(q.is_zero() || q.rem(common).is_ok_and(|r| r.is_zero()), "factor does not divide")?;
            }
            ensure(roots_in(common, interval)? >= 1, "no root in interval")
        }
        CriticalEvidence::Miranda { x, y, combination } => {
            let a = combination;
            let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
            ensure(!det.is_zero(), "singular combination")?;
            let (g1, g2) = combined_gradient(&fx, &fy, a);
            ensure(miranda_holds(&g1, &g2, x, y), "Miranda condition fails")
        }
    }
}

/// Re-checks `cert` against the original pair.
pub fn verify_certificate(cert: &Certificate, f: &Poly2, g: &Poly2) -> Check {
    let j = jacobian_det(f, g);
    match cert {
        Certificate::DirectWitness { jacobian, evidence } => {
            ensure(jacobian == &j, "jacobian mismatch")?;
            match evidence {
                DirectEvidence::IdenticallyZero => ensure(j.is_zero(), "jacobian is not zero"),
                DirectEvidence::SignChange { positive, negative } => {
                    ensure(positive.point.eval(&j) == positive.value, "wrong value")?;
                    ensure(negative.point.eval(&j) == negative.value, "wrong value")?;
                    ensure(positive.value.is_positive() && negative.value.is_negative(), "no sign change")
                }
                DirectEvidence::Zero { point } => ensure(point.eval(&j).is_zero(), "not a zero"),
            }
        }
        Certificate::Znak0 {
            variant,
            big_f,
            big_g,
            root,
            witnesses,
        } => {
            let (a, b) = variant.apply(f, g);
            let (fa, gb) = znak0_factors(&a, &b).ok_or("supports do not fit")?;
            ensure(&fa == big_f && &gb == big_g, "factor mismatch")?;
            ensure(!root.contains_zero(), "root interval contains zero")?;
            ensure(roots_in(&(big_f * big_g), root)? >= 1, "FG has no root in interval")?;
            let h = &UniPoly::t() * &(big_f * big_g);
            let xy = Poly2::monomial(num_traits::One::one(), 1, 1);
            ensure(
                jacobian_det(&a, &b) == Poly2::compose_uni(&h.derivative(), &xy),
                "Jac is not H'(xy)",
            )?;
            check_witnesses(&jacobian_det(&a, &b), witnesses)
        }
        Certificate::Znak {
            variant,
            a,
            b,
            witnesses,
        } => {
            let (p, q) = variant.apply(f, g);
            let face = quasi_leading_part(&p, &ZNAK_DIRECTION).map_err(|e| e.to_string())?;
            ensure(match_y_square(&face) == Some((a.clone(), b.clone())), "face is not a y (xy - b)^2")?;
            ensure(!b.is_zero(), "b is zero")?;
            let dq = newton_polygon(&q).map_err(|e| e.to_string())?;
            ensure(dq.support_value(&ZNAK_DIRECTION) == -1, "support value is not -1")?;
            check_witnesses(&jacobian_det(&p, &q), witnesses)
        }
        Certificate::VertexParity {
            variant,
            xi,
            alpha,
            beta,
            witnesses,
        } => {
            let (p, q) = variant.apply(f, g);
            let dp = newton_polygon(&p).map_err(|e| e.to_string())?;
            let dq = newton_polygon(&q).map_err(|e| e.to_string())?;
            ensure(vertex_pair(&dp, &dq, xi) == Some((*alpha, *beta)), "vertex condition fails")?;
            check_witnesses(&jacobian_det(&p, &q), witnesses)
        }
        Certificate::Hrc {
            subject,
            start,
            end,
            normal,
        } => {
            let p = subject.apply(f, g);
            let d = newton_polygon(&p).map_err(|e| e.to_string())?;
            ensure(hrc_edge(&d) == Some((*start, *end, *normal)), "edge condition fails")
        }
        Certificate::CriticalPoint { subject, evidence } => verify_critical_point(&subject.apply(f, g), evidence),
        Certificate::InfTypical {
            subject,
            polynomial,
            evidence,
        } => {
            ensure(&subject.apply(f, g) == polynomial, "polynomial mismatch")?;
            ensure(!polynomial.is_constant() && is_convenient(polynomial), "not convenient")?;
            let d = newton_polygon(polynomial).map_err(|e| e.to_string())?;
            let outer = d.outer_edges().map_err(|e| e.to_string())?;
            ensure(outer.len() == evidence.edges.len(), "edge count mismatch")?;
            for (e, w) in outer.iter().zip(&evidence.edges) {
                ensure(e.endpoints().ok() == Some((w.start, w.end)), "edge mismatch")?;
                let r = edge_univariate(polynomial, e).map_err(|e| e.to_string())?;
                ensure(r.uni == w.uni && r.xi == w.normal, "edge polynomial mismatch")?;
                ensure(w.uni.gcd(&w.uni.derivative()).is_constant(), "degenerate edge")?;
            }
            verify_no_critical(polynomial, &evidence.critical)
        }
        Certificate::OneRealBranchAtInfinity {
            subject,
            polynomial,
            leading_form,
            point,
            critical,
        } => {
            ensure(&subject.apply(f, g) == polynomial, "polynomial mismatch")?;
            ensure(&polynomial.leading_form().map_err(|e| e.to_string())? == leading_form, "leading form mismatch")?;
            let pts = infinity_real_points(leading_form).map_err(|e| e.to_string())?;
            ensure(pts.len() == 1 && pts[0].multiplicity == 1, "not exactly one simple real point")?;
            ensure(point.multiplicity == 1, "multiplicity is not one")?;
            verify_no_critical(polynomial, critical)
        }
        Certificate::TrustedFact { statement } => ensure(!statement.is_empty(), "empty statement"),
    }
}

/// Checks every certificate and that the verdict carries at least one when decided.
pub fn verify_verdict(v: &Verdict, f: &Poly2, g: &Poly2) -> Check {
    if v.verdict != VerdictTag::Inconclusive {
        ensure(!v.certificates.is_empty(), "decided verdict without certificates")?;
    }
    for c in &v.certificates {
        verify_certificate(c, f, g).map_err(|e| format!("{}: {e}", c.kind()))?;
        if v.verdict == VerdictTag::TypicalCertified {
            ensure(!c.is_exclusion(), "exclusion certificate on a typical verdict")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_typical, CertifyConfig, Subject};
    use crate::polyarith::parse_expr;

    fn p(s: &str) -> Poly2 {
        parse_expr(s).unwrap()
    }

    #[test]
    fn driver_output_verifies() {
        for (f, g) in [
            ("x+(y+x^2)^2", "y+x^2"),
            ("x", "y"),
            ("x^2*y-x", "x*y^2-y"),
            ("x^3+x", "y^3+y"),
            ("x", "2*x"),
        ] {
            let (f, g) = (p(f), p(g));
            let v = certify_typical(&f, &g, &CertifyConfig::default());
            verify_verdict(&v, &f, &g).unwrap();
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let (f, g) = (p("x^2*y-x"), p("x*y^2-y"));
        let cert = crate::certify::znak0_sign_change(&f, &g).unwrap();
        verify_certificate(&cert, &f, &g).unwrap();
        assert!(verify_certificate(&cert, &g, &f).is_err());

        let f = p("y+x^2");
        let cert = Certificate::CriticalPoint {
            subject: Subject::F,
            evidence: CriticalEvidence::ExactPoint {
                point: super::super::RationalPoint::new(crate::polyarith::rational::int(0), crate::polyarith::rational::int(0)),
            },
        };
        assert!(verify_certificate(&cert, &f, &p("x")).is_err());
    }

    #[test]
    fn box_exclusion_verifies() {
        // x^3 - 3x + y^2 + xy has a critical point; x^4 + y^4 + x*y^2 + x is searched by boxes
        let f = p("x^4 + x^2*y^2 + y^4 + x + 2*y");
        if let Ok(crate::certify::CriticalSearch::None { evidence }) = crate::certify::no_critical_points(&f, 64) {
            verify_no_critical(&f, &evidence).unwrap();
        }
        let f = p("x^3 - 3*x + y^2 + x*y");
        match crate::certify::no_critical_points(&f, 64).unwrap() {
            crate::certify::CriticalSearch::Exists { evidence } => verify_critical_point(&f, &evidence).unwrap(),
            other => panic!("unexpected {other:?}"),
        }
    }
}
