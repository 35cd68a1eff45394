//! Deciding whether `∇f = 0` has a real solution.
//!
//! Cheap exact arguments go first (a constant partial, probing rational lines). After
//! that every critical point lies in a box `Iₓ × I_y` built from isolating intervals of
//! `Res_y(fₓ, f_y)` and `Res_x(fₓ, f_y)`; boxes are shrunk until a partial provably
//! avoids zero on them, or a Miranda test on a preconditioned gradient proves a zero.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{CertifyError, RationalPoint};
use crate::polyarith::rational::{int, rat, serde_str};
use crate::polyarith::{resultant, Poly2, Rational, RationalInterval, RootRange, UniPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum NoCriticalEvidence {
    /// `∂f/∂var` is a nonzero constant.
    ConstantPartial {
        var: Var,
        #[serde(with = "serde_str")]
        value: Rational,
    },
    /// `Jac(f, partner)` is a nonzero constant, so the gradient never vanishes.
    NonvanishingJacobian {
        partner: Poly2,
        #[serde(with = "serde_str")]
        value: Rational,
    },
    /// One partial is identically zero and the other, a polynomial in one variable,
    /// has no real root.
    ZeroPartialNoRealRoots { zero: Var },
    /// The resultant eliminating `eliminated` is nonzero without real roots.
    ResultantNoRealRoots { eliminated: Var, resultant: Poly2 },
    /// Every candidate box is excluded.
    BoxExclusion {
        res_x: Poly2,
        res_y: Poly2,
        x_roots: Vec<RationalInterval>,
        y_roots: Vec<RationalInterval>,
        boxes: Vec<ExcludedBox>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcludedBox {
    pub xi: usize,
    pub yi: usize,
    pub x: RationalInterval,
    pub y: RationalInterval,
    pub reason: BoxReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum BoxReason {
    /// The centered interval enclosure of `∂f/∂var` excludes zero on the box.
    PartialNonzero { var: Var },
    /// One side of the box is a single rational value and the specialized partials have
    /// no common root on the other side.
    LineGcd { fixed: Var },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum CriticalEvidence {
    ExactPoint { point: RationalPoint },
    /// On the line `fixed = value` the specialized partials share a factor with a real
    /// root in `interval`.
    OnLine {
        fixed: Var,
        #[serde(with = "serde_str")]
        value: Rational,
        common: UniPoly,
        interval: RationalInterval,
    },
    /// `G = A ∇f` has opposite strict signs on opposite faces of the box, componentwise.
    Miranda {
        x: RationalInterval,
        y: RationalInterval,
        #[serde(with = "crate::polyarith::rational::serde_str_matrix")]
        combination: [[Rational; 2]; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum CriticalSearch {
    None { evidence: NoCriticalEvidence },
    Exists { evidence: CriticalEvidence },
    Undecided { reason: String },
}

impl CriticalSearch {
    pub fn is_none(&self) -> bool {
        matches!(self, CriticalSearch::None { .. })
    }
}

/// Lines probed before the resultant search.
fn probe_values() -> Vec<Rational> {
    vec![int(0), int(1), int(-1), int(2), int(-2), rat(1, 2), rat(-1, 2)]
}

pub(crate) fn point_on_axis(fixed: Var, value: &Rational, other: &Rational) -> RationalPoint {
    match fixed {
        Var::X => RationalPoint::new(value.clone(), other.clone()),
        Var::Y => RationalPoint::new(other.clone(), value.clone()),
    }
}

/// Common real root of the partials on the line `fixed = value`, restricted to `within`.
pub(crate) fn common_root_on_line(
    fx: &Poly2,
    fy: &Poly2,
    fixed: Var,
    value: &Rational,
    within: Option<&RationalInterval>,
) -> Option<CriticalEvidence> {
    let a = fx.partial_eval(fixed, value);
    let b = fy.partial_eval(fixed, value);
    if a.is_zero() && b.is_zero() {
        let t = within.map_or_else(Rational::zero, |i| i.lo().clone());
        return Some(CriticalEvidence::ExactPoint {
            point: point_on_axis(fixed, value, &t),
        });
    }
    let common = a.gcd(&b);
    if common.is_constant() {
        return None;
    }
    let roots = common.isolate_real_roots().ok()?;
    for r in roots {
        let r = match within {
            Some(w) => {
                if !r.intersects(w) {
                    continue;
                }
                // narrow to the part inside `within`, keeping exactly this root
                let lo = r.lo().max(w.lo()).clone();
                let hi = r.hi().min(w.hi()).clone();
                let cand = RationalInterval::new(lo, hi).ok()?;
                let n = common.count_real_roots(&RootRange::Interval(cand.clone())).ok()?;
                if n == 0 {
                    continue;
                }
                cand
            }
            None => r,
        };
        if let Some(q) = common.rational_root_in(&r) {
            return Some(CriticalEvidence::ExactPoint {
                point: point_on_axis(fixed, value, &q),
            });
        }
        return Some(CriticalEvidence::OnLine {
            fixed,
            value: value.clone(),
            common,
            interval: r,
        });
    }
    None
}

/// Interval enclosure of `p` over the box using the Taylor form at the box center.
pub(crate) fn eval_centered(p: &Poly2, bx: &RationalInterval, by: &RationalInterval) -> RationalInterval {
    let cx = bx.midpoint();
    let cy = by.midpoint();
    let shifted = p.substitute_affine(&cx, &cy);
    let rx = RationalInterval::new(bx.lo() - &cx, bx.hi() - &cx).expect("ordered");
    let ry = RationalInterval::new(by.lo() - &cy, by.hi() - &cy).expect("ordered");
    shifted.eval_box(&rx, &ry)
}

fn strictly_signed(i: &RationalInterval) -> i8 {
    if i.lo() > &Rational::zero() {
        1
    } else if i.hi() < &Rational::zero() {
        -1
    } else {
        0
    }
}

/// `A ∇f` with rows of `A`.
pub(crate) fn combined_gradient(fx: &Poly2, fy: &Poly2, a: &[[Rational; 2]; 2]) -> (Poly2, Poly2) {
    let g1 = &fx.scale(&a[0][0]) + &fy.scale(&a[0][1]);
    let g2 = &fx.scale(&a[1][0]) + &fy.scale(&a[1][1]);
    (g1, g2)
}

/// Miranda's condition for `(g1, g2)` on the box.
pub(crate) fn miranda_holds(g1: &Poly2, g2: &Poly2, bx: &RationalInterval, by: &RationalInterval) -> bool {
    if bx.is_point() || by.is_point() {
        return false;
    }
    let left = RationalInterval::point(bx.lo().clone());
    let right = RationalInterval::point(bx.hi().clone());
    let bottom = RationalInterval::point(by.lo().clone());
    let top = RationalInterval::point(by.hi().clone());
    let sl = strictly_signed(&eval_centered(g1, &left, by));
    let sr = strictly_signed(&eval_centered(g1, &right, by));
    let sb = strictly_signed(&eval_centered(g2, bx, &bottom));
    let st = strictly_signed(&eval_centered(g2, bx, &top));
    sl != 0 && sr == -sl && sb != 0 && st == -sb
}

/// Inverse Hessian at the box center, if the Hessian is invertible there.
fn preconditioner(f_xx: &Poly2, f_xy: &Poly2, f_yy: &Poly2, bx: &RationalInterval, by: &RationalInterval) -> Option<[[Rational; 2]; 2]> {
    let (cx, cy) = (bx.midpoint(), by.midpoint());
    let a = f_xx.eval(&cx, &cy);
    let b = f_xy.eval(&cx, &cy);
    let d = f_yy.eval(&cx, &cy);
    let det = &a * &d - &b * &b;
    if det.is_zero() {
        return None;
    }
    let inv = det.recip();
    Some([[&d * &inv, -(&b * &inv)], [-(&b * &inv), &a * &inv]])
}

/// Semi-decision with a bisection cap of `depth`.
pub fn no_critical_points(f: &Poly2, depth: u32) -> Result<CriticalSearch, CertifyError> {
    if f.is_zero() {
        return Err(crate::polyarith::PolyError::ZeroPolynomial.into());
    }
    let fx = f.partial(Var::X);
    let fy = f.partial(Var::Y);
    for (var, d) in [(Var::X, &fx), (Var::Y, &fy)] {
        if d.is_constant() && !d.is_zero() {
            return Ok(CriticalSearch::None {
                evidence: NoCriticalEvidence::ConstantPartial {
                    var,
                    value: d.constant_term(),
                },
            });
        }
    }
    if fx.is_zero() && fy.is_zero() {
        return Ok(CriticalSearch::Exists {
            evidence: CriticalEvidence::ExactPoint {
                point: RationalPoint::new(int(0), int(0)),
            },
        });
    }
    for (zero, other) in [(Var::X, &fy), (Var::Y, &fx)] {
        let is_zero = if zero == Var::X { fx.is_zero() } else { fy.is_zero() };
        if !is_zero {
            continue;
        }
        // f depends only on the other variable
        let u = other.to_uni(zero.other()).expect("single-variable partial");
        if u.count_real_roots(&RootRange::WholeLine)? == 0 {
            return Ok(CriticalSearch::None {
                evidence: NoCriticalEvidence::ZeroPartialNoRealRoots { zero },
            });
        }
        let ev = common_root_on_line(&fx, &fy, zero, &int(0), None).expect("root exists");
        return Ok(CriticalSearch::Exists { evidence: ev });
    }
    for fixed in [Var::Y, Var::X] {
        for v in probe_values() {
            if let Some(ev) = common_root_on_line(&fx, &fy, fixed, &v, None) {
                return Ok(CriticalSearch::Exists { evidence: ev });
            }
        }
    }
    let res_x = resultant(&fx, &fy, Var::Y);
    let res_y = resultant(&fx, &fy, Var::X);
    for (eliminated, r, keep) in [(Var::Y, &res_x, Var::X), (Var::X, &res_y, Var::Y)] {
        if r.is_zero() {
            continue;
        }
        let u = r.to_uni(keep).expect("resultant is univariate");
        if u.count_real_roots(&RootRange::WholeLine)? == 0 {
            return Ok(CriticalSearch::None {
                evidence: NoCriticalEvidence::ResultantNoRealRoots {
                    eliminated,
                    resultant: r.clone(),
                },
            });
        }
    }
    if res_x.is_zero() || res_y.is_zero() {
        return Ok(CriticalSearch::Undecided {
            reason: "partials share a nonconstant factor".into(),
        });
    }
    box_search(&fx, &fy, res_x, res_y, depth)
}

fn box_search(
    fx: &Poly2,
    fy: &Poly2,
    res_x: Poly2,
    res_y: Poly2,
    depth: u32,
) -> Result<CriticalSearch, CertifyError> {
    let ux = res_x.to_uni(Var::X).expect("univariate").squarefree_part()?;
    let uy = res_y.to_uni(Var::Y).expect("univariate").squarefree_part()?;
    let x_roots = ux.isolate_real_roots()?;
    let y_roots = uy.isolate_real_roots()?;
    let f_xx = fx.partial(Var::X);
    let f_xy = fx.partial(Var::Y);
    let f_yy = fy.partial(Var::Y);

    let mut xs = x_roots.clone();
    let mut ys = y_roots.clone();
    let mut open: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
        .collect();
    let mut boxes = Vec::new();
    for round in 0..=depth {
        let mut still = Vec::new();
        for &(i, j) in &open {
            let (bx, by) = (&xs[i], &ys[j]);
            if let Some(reason) = exclude_box(fx, fy, bx, by) {
                boxes.push(ExcludedBox {
                    xi: i,
                    yi: j,
                    x: bx.clone(),
                    y: by.clone(),
                    reason,
                });
                continue;
            }
            if let Some(ev) = prove_box(fx, fy, &f_xx, &f_xy, &f_yy, bx, by) {
                return Ok(CriticalSearch::Exists { evidence: ev });
            }
            still.push((i, j));
        }
        open = still;
        if open.is_empty() {
            boxes.sort_by_key(|b| (b.xi, b.yi));
            return Ok(CriticalSearch::None {
                evidence: NoCriticalEvidence::BoxExclusion {
                    res_x,
                    res_y,
                    x_roots,
                    y_roots,
                    boxes,
                },
            });
        }
        if round == depth {
            break;
        }
        let mut touched_x: Vec<usize> = open.iter().map(|p| p.0).collect();
        touched_x.sort_unstable();
        touched_x.dedup();
        for i in touched_x {
            if !xs[i].is_point() {
                xs[i] = ux.refine_root(&xs[i], 1);
            }
        }
        let mut touched_y: Vec<usize> = open.iter().map(|p| p.1).collect();
        touched_y.sort_unstable();
        touched_y.dedup();
        for j in touched_y {
            if !ys[j].is_point() {
                ys[j] = uy.refine_root(&ys[j], 1);
            }
        }
    }
    Ok(CriticalSearch::Undecided {
        reason: format!("{} candidate boxes unresolved after {depth} bisections", open.len()),
    })
}

pub(crate) fn exclude_box(fx: &Poly2, fy: &Poly2, bx: &RationalInterval, by: &RationalInterval) -> Option<BoxReason> {
    for (var, d) in [(Var::X, fx), (Var::Y, fy)] {
        if strictly_signed(&eval_centered(d, bx, by)) != 0 {
            return Some(BoxReason::PartialNonzero { var });
        }
    }
    for (fixed, side, other) in [(Var::X, bx, by), (Var::Y, by, bx)] {
        if side.is_point() && common_root_on_line(fx, fy, fixed, side.lo(), Some(other)).is_none() {
            return Some(BoxReason::LineGcd { fixed });
        }
    }
    None
}

fn prove_box(
    fx: &Poly2,
    fy: &Poly2,
    f_xx: &Poly2,
    f_xy: &Poly2,
    f_yy: &Poly2,
    bx: &RationalInterval,
    by: &RationalInterval,
) -> Option<CriticalEvidence> {
    for (fixed, side, other) in [(Var::X, bx, by), (Var::Y, by, bx)] {
        if side.is_point() {
            return common_root_on_line(fx, fy, fixed, side.lo(), Some(other));
        }
    }
    let a = preconditioner(f_xx, f_xy, f_yy, bx, by).unwrap_or([
        [Rational::one(), Rational::zero()],
        [Rational::zero(), Rational::one()],
    ]);
    let (g1, g2) = combined_gradient(fx, fy, &a);
    if miranda_holds(&g1, &g2, bx, by) {
        return Some(CriticalEvidence::Miranda {
            x: bx.clone(),
            y: by.clone(),
            combination: a,
        });
    }
    None
}
