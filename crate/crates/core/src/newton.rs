//! Newton polygons, support functions and faces.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyarith::{Monomial, Poly2};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("face is a vertex, not an edge")]
    VertexFace,
    #[error("polygon is a single point")]
    DegeneratePolygon,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("direction {0} is not primitive")]
    NotPrimitive(Direction),
    #[error("vertices are not a strictly convex counterclockwise polygon")]
    NotConvex,
}

/// Integer covector `ξ`, paired with exponents by `⟨ξ, (i,j)⟩ = ξ₁ i + ξ₂ j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Direction {
    pub xi1: i64,
    pub xi2: i64,
}

impl From<[i64; 2]> for Direction {
    fn from([a, b]: [i64; 2]) -> Self {
        Direction::new(a, b)
    }
}

impl From<Direction> for [i64; 2] {
    fn from(d: Direction) -> Self {
        [d.xi1, d.xi2]
    }
}

impl Direction {
    pub const fn new(xi1: i64, xi2: i64) -> Self {
        Direction { xi1, xi2 }
    }

    pub fn dot(&self, m: &Monomial) -> i64 {
        self.xi1 * m.i as i64 + self.xi2 * m.j as i64
    }

    pub fn is_zero(&self) -> bool {
        self.xi1 == 0 && self.xi2 == 0
    }

    pub fn is_primitive(&self) -> bool {
        self.xi1.gcd(&self.xi2) == 1
    }

    /// Divides out the gcd of the coordinates.
    pub fn primitive(&self) -> Direction {
        let g = self.xi1.gcd(&self.xi2);
        if g == 0 {
            return *self;
        }
        Direction::new(self.xi1 / g, self.xi2 / g)
    }

    pub fn has_positive_coordinate(&self) -> bool {
        self.xi1 > 0 || self.xi2 > 0
    }

    pub fn transpose(&self) -> Direction {
        Direction::new(self.xi2, self.xi1)
    }

    pub fn neg(&self) -> Direction {
        Direction::new(-self.xi1, -self.xi2)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.xi1, self.xi2)
    }
}

/// Convex lattice polygon in the first quadrant.
///
/// Vertices run counterclockwise from the lexicographically smallest one. A segment has
/// two vertices and a point one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson")]
pub struct LatticePolygon {
    vertices: Vec<Monomial>,
}

#[derive(Deserialize)]
struct PolygonJson {
    vertices: Vec<Monomial>,
}

impl TryFrom<PolygonJson> for LatticePolygon {
    type Error = NewtonError;
    fn try_from(p: PolygonJson) -> Result<Self, NewtonError> {
        LatticePolygon::from_vertices(p.vertices)
    }
}

/// A face `Δ^ξ`: a vertex or an edge, with `value = l(Δ, ξ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Face {
    direction: Direction,
    value: i64,
    points: Vec<Monomial>,
}

fn cross(o: &Monomial, a: &Monomial, b: &Monomial) -> i64 {
    let (ox, oy) = (o.i as i64, o.j as i64);
    (a.i as i64 - ox) * (b.j as i64 - oy) - (a.j as i64 - oy) * (b.i as i64 - ox)
}

impl LatticePolygon {
    /// Convex hull (monotone chain).
    pub fn hull<I: IntoIterator<Item = Monomial>>(points: I) -> Option<LatticePolygon> {
        let pts: Vec<Monomial> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return None;
        }
        if pts.len() <= 2 {
            return Some(LatticePolygon { vertices: pts });
        }
        let mut lower: Vec<Monomial> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(*p);
        }
        let mut upper: Vec<Monomial> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(*p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Some(LatticePolygon { vertices: lower })
    }

    /// Accepts an explicit vertex list in any rotation, as long as it is already
    /// strictly convex and counterclockwise.
    pub fn from_vertices(vertices: Vec<Monomial>) -> Result<LatticePolygon, NewtonError> {
        let hull = LatticePolygon::hull(vertices.iter().copied()).ok_or(NewtonError::NotConvex)?;
        if hull.vertices.len() != vertices.len() {
            return Err(NewtonError::NotConvex);
        }
        if vertices.len() >= 3 {
            let n = vertices.len();
            let start = hull.vertices[0];
            let k = vertices.iter().position(|v| *v == start).ok_or(NewtonError::NotConvex)?;
            let rotated: Vec<Monomial> = (0..n).map(|t| vertices[(k + t) % n]).collect();
            if rotated != hull.vertices {
                return Err(NewtonError::NotConvex);
            }
        }
        Ok(hull)
    }

    pub fn vertices(&self) -> &[Monomial] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// `l(Δ, ξ)`.
    pub fn support_value(&self, xi: &Direction) -> i64 {
        self.vertices.iter().map(|v| xi.dot(v)).max().expect("nonempty polygon")
    }

    /// `Δ^ξ`. A zero `ξ` is rejected since every point would maximize it.
    pub fn face(&self, xi: &Direction) -> Result<Face, NewtonError> {
        if xi.is_zero() {
            return Err(NewtonError::ZeroDirection);
        }
        let value = self.support_value(xi);
        let n = self.vertices.len();
        let hits: Vec<usize> = (0..n).filter(|&k| xi.dot(&self.vertices[k]) == value).collect();
        let points = match hits.as_slice() {
            [k] => vec![self.vertices[*k]],
            [a, b] => {
                // counterclockwise order; the pair wraps around when it is (last, first)
                if *a == 0 && *b == n - 1 && n > 2 {
                    vec![self.vertices[*b], self.vertices[*a]]
                } else {
                    vec![self.vertices[*a], self.vertices[*b]]
                }
            }
            _ => unreachable!("a strictly convex polygon has at most two maximizing vertices"),
        };
        Ok(Face {
            direction: *xi,
            value,
            points,
        })
    }

    /// Every edge with its primitive outward normal, counterclockwise. A segment has two.
    pub fn edges(&self) -> Result<Vec<Face>, NewtonError> {
        let n = self.vertices.len();
        if n < 2 {
            return Err(NewtonError::DegeneratePolygon);
        }
        let count = if n == 2 { 2 } else { n };
        Ok((0..count)
            .map(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % n];
                let di = b.i as i64 - a.i as i64;
                let dj = b.j as i64 - a.j as i64;
                let xi = Direction::new(dj, -di).primitive();
                Face {
                    direction: xi,
                    value: xi.dot(&a),
                    points: vec![a, b],
                }
            })
            .collect())
    }

    /// Edges whose outward normal has a positive coordinate.
    pub fn outer_edges(&self) -> Result<Vec<Face>, NewtonError> {
        Ok(self
            .edges()?
            .into_iter()
            .filter(|e| e.direction.has_positive_coordinate())
            .collect())
    }

    /// Closed membership test.
    pub fn contains(&self, m: &Monomial) -> bool {
        match self.vertices.as_slice() {
            [p] => p == m,
            [a, b] => {
                cross(a, b, m) == 0
                    && a.i.min(b.i) <= m.i
                    && m.i <= a.i.max(b.i)
                    && a.j.min(b.j) <= m.j
                    && m.j <= a.j.max(b.j)
            }
            vs => {
                let n = vs.len();
                (0..n).all(|k| cross(&vs[k], &vs[(k + 1) % n], m) >= 0)
            }
        }
    }

    pub fn contains_polygon(&self, other: &LatticePolygon) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// All lattice points of the closed polygon, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Monomial> {
        let max_i = self.vertices.iter().map(|v| v.i).max().unwrap_or(0);
        let max_j = self.vertices.iter().map(|v| v.j).max().unwrap_or(0);
        let mut out = Vec::new();
        for i in 0..=max_i {
            for j in 0..=max_j {
                let m = Monomial::new(i, j);
                if self.contains(&m) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// Twice the area.
    pub fn double_area(&self) -> i64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0;
        }
        (0..n)
            .map(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % n];
                a.i as i64 * b.j as i64 - b.i as i64 * a.j as i64
            })
            .sum()
    }

    pub fn transpose(&self) -> LatticePolygon {
        LatticePolygon::hull(self.vertices.iter().map(Monomial::transpose)).expect("nonempty")
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "conv{{{}}}", parts.join(","))
    }
}

impl Face {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn points(&self) -> &[Monomial] {
        &self.points
    }

    pub fn is_edge(&self) -> bool {
        self.points.len() == 2
    }

    pub fn endpoints(&self) -> Result<(Monomial, Monomial), NewtonError> {
        match self.points.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(NewtonError::VertexFace),
        }
    }

    /// Number of lattice segments the edge splits into; zero for a vertex.
    pub fn lattice_length(&self) -> u32 {
        match self.points.as_slice() {
            [a, b] => (a.i.abs_diff(b.i)).gcd(&a.j.abs_diff(b.j)),
            _ => 0,
        }
    }

    pub fn interior_lattice_points(&self) -> Result<Vec<Monomial>, NewtonError> {
        let (a, b) = self.endpoints()?;
        let g = self.lattice_length() as i64;
        let di = (b.i as i64 - a.i as i64) / g;
        let dj = (b.j as i64 - a.j as i64) / g;
        Ok((1..g)
            .map(|t| Monomial::new((a.i as i64 + t * di) as u32, (a.j as i64 + t * dj) as u32))
            .collect())
    }

    /// Whether a lattice point lies on this face.
    pub fn contains(&self, m: &Monomial) -> bool {
        if self.direction.dot(m) != self.value {
            return false;
        }
        match self.points.as_slice() {
            [p] => p == m,
            [a, b] => {
                a.i.min(b.i) <= m.i
                    && m.i <= a.i.max(b.i)
                    && a.j.min(b.j) <= m.j
                    && m.j <= a.j.max(b.j)
            }
            _ => false,
        }
    }

    pub fn transpose(&self) -> Face {
        let mut points: Vec<Monomial> = self.points.iter().map(Monomial::transpose).collect();
        points.reverse();
        Face {
            direction: self.direction.transpose(),
            value: self.value,
            points,
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.points.as_slice() {
            [a, b] => write!(f, "{a}–{b}"),
            [a] => write!(f, "{a}"),
            _ => Ok(()),
        }
    }
}

pub fn support(p: &Poly2) -> Result<BTreeSet<Monomial>, NewtonError> {
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    Ok(p.support())
}

pub fn newton_polygon(p: &Poly2) -> Result<LatticePolygon, NewtonError> {
    LatticePolygon::hull(support(p)?).ok_or(NewtonError::ZeroPolynomial)
}

/// `p|_S`: the terms of `p` whose exponents lie on the face.
pub fn symbolic_restriction(p: &Poly2, face: &Face) -> Poly2 {
    p.restrict(|m| face.contains(m))
}

/// `p^ξ`, the restriction of `p` to its own face in direction `ξ`.
pub fn quasi_leading_part(p: &Poly2, xi: &Direction) -> Result<Poly2, NewtonError> {
    let face = newton_polygon(p)?.face(xi)?;
    Ok(symbolic_restriction(p, &face))
}

/// Some positive powers of both `x` and `y` occur in `p`.
pub fn is_convenient(p: &Poly2) -> bool {
    let s = p.support();
    s.iter().any(|m| m.j == 0 && m.i >= 1) && s.iter().any(|m| m.i == 0 && m.j >= 1)
}
