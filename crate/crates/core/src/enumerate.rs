//! Exhaustive enumeration of candidate Newton polygons and audits against a list of
//! transcribed polygons.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::newton::{Direction, LatticePolygon};
use crate::polyarith::Monomial;

/// Largest admissible region for the subset search.
pub const MAX_REGION_POINTS: usize = 24;

/// The paper's polygon figures, transcribed.
pub const PAPER_POLYGONS_JSON: &str = include_str!("../../../data/polygons.json");

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("region has {0} lattice points, more than {MAX_REGION_POINTS}")]
    RegionTooLarge(usize),
    #[error("point {0} is both required and forbidden")]
    Conflict(Monomial),
    #[error("required point {0} lies outside the region")]
    RequiredOutsideRegion(Monomial),
    #[error("malformed polygon list: {0}")]
    MalformedList(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonConstraints {
    /// Region: all `(i, j)` with `i + j ≤ max_degree`, plus `extra_points`.
    pub max_degree: u32,
    #[serde(default)]
    pub extra_points: Vec<Monomial>,
    /// Close each chosen set leftward along rows before taking the hull.
    #[serde(default)]
    pub x_saturated: bool,
    #[serde(default)]
    pub required: Vec<Monomial>,
    #[serde(default)]
    pub forbidden: Vec<Monomial>,
    /// The hull must meet the line `i + j = deg` exactly in this segment.
    #[serde(default)]
    pub top_face: Option<(Monomial, Monomial)>,
    #[serde(default)]
    pub transpose_dedupe: bool,
    #[serde(default)]
    pub no_positive_slope_outer_edge: bool,
}

impl PolygonConstraints {
    pub fn region(&self) -> Vec<Monomial> {
        let mut pts: BTreeSet<Monomial> = BTreeSet::new();
        for i in 0..=self.max_degree {
            for j in 0..=self.max_degree - i {
                pts.insert(Monomial::new(i, j));
            }
        }
        pts.extend(self.extra_points.iter().copied());
        pts.into_iter().collect()
    }

    fn validate(&self) -> Result<Vec<Monomial>, EnumerateError> {
        let region = self.region();
        if region.len() > MAX_REGION_POINTS {
            return Err(EnumerateError::RegionTooLarge(region.len()));
        }
        for r in &self.required {
            if self.forbidden.contains(r) {
                return Err(EnumerateError::Conflict(*r));
            }
            if !region.contains(r) {
                return Err(EnumerateError::RequiredOutsideRegion(*r));
            }
        }
        Ok(region)
    }
}

fn has_positive_slope_outer_edge(p: &LatticePolygon) -> bool {
    p.outer_edges()
        .map(|es| es.iter().any(|e| e.direction().xi1 * e.direction().xi2 < 0))
        .unwrap_or(false)
}

fn top_face_ok(p: &LatticePolygon, top: &(Monomial, Monomial)) -> bool {
    let diag = Direction::new(1, 1);
    let Ok(face) = p.face(&diag) else {
        return false;
    };
    if face.value() != top.0.degree() as i64 {
        return false;
    }
    let want: BTreeSet<Monomial> = [top.0, top.1].into();
    let got: BTreeSet<Monomial> = match face.endpoints() {
        Ok((a, b)) => [a, b].into(),
        Err(_) => face.points().iter().copied().collect(),
    };
    got == want
}

/// Checks every constraint on a finished polygon, independently of how it was built.
pub fn verify_constraints(p: &LatticePolygon, c: &PolygonConstraints) -> Result<(), String> {
    let region = c.region();
    for v in p.vertices() {
        if !region.contains(v) {
            return Err(format!("vertex {v} outside the region"));
        }
        if c.forbidden.contains(v) {
            return Err(format!("vertex {v} is forbidden"));
        }
        if c.x_saturated && !p.contains(&Monomial::new(0, v.j)) {
            return Err(format!("row of {v} is not saturated"));
        }
    }
    if let Some(r) = c.required.iter().find(|r| !p.contains(r)) {
        return Err(format!("required point {r} missing"));
    }
    if let Some(top) = &c.top_face {
        if !top_face_ok(p, top) {
            return Err("top face mismatch".into());
        }
    }
    if c.no_positive_slope_outer_edge && has_positive_slope_outer_edge(p) {
        return Err("outer edge of positive slope".into());
    }
    Ok(())
}

fn canonical(p: LatticePolygon, dedupe: bool) -> LatticePolygon {
    if !dedupe {
        return p;
    }
    let t = p.transpose();
    if t.vertices() < p.vertices() {
        t
    } else {
        p
    }
}

/// One representative per `{Δ, transpose(Δ)}`, the one with the smaller vertex list.
pub fn transpose_dedupe(polys: &[LatticePolygon]) -> Vec<LatticePolygon> {
    let set: BTreeMap<Vec<Monomial>, LatticePolygon> = polys
        .iter()
        .map(|p| {
            let c = canonical(p.clone(), true);
            (c.vertices().to_vec(), c)
        })
        .collect();
    set.into_values().collect()
}

/// All distinct hulls `conv(S)` allowed by the constraints, sorted by vertex list.
pub fn enumerate_polygons(c: &PolygonConstraints) -> Result<Vec<LatticePolygon>, EnumerateError> {
    let region = c.validate()?;
    let required: BTreeSet<Monomial> = c.required.iter().copied().collect();
    let forbidden: BTreeSet<Monomial> = c.forbidden.iter().copied().collect();
    let free: Vec<Monomial> = region
        .iter()
        .filter(|m| !required.contains(m) && !forbidden.contains(m))
        .copied()
        .collect();
    let admissible: BTreeSet<Monomial> = region.iter().filter(|m| !forbidden.contains(m)).copied().collect();
    let n = free.len();
    let found: BTreeSet<Vec<Monomial>> = (0u64..1u64 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let mut s: BTreeSet<Monomial> = required.clone();
            s.extend((0..n).filter(|k| mask >> k & 1 == 1).map(|k| free[k]));
            if c.x_saturated {
                let rows: Vec<Monomial> = s.iter().copied().collect();
                for m in rows {
                    for i in 0..m.i {
                        let q = Monomial::new(i, m.j);
                        if !admissible.contains(&q) {
                            return None;
                        }
                        s.insert(q);
                    }
                }
            }
            let hull = LatticePolygon::hull(s)?;
            if let Some(top) = &c.top_face {
                if !top_face_ok(&hull, top) {
                    return None;
                }
            }
            if c.no_positive_slope_outer_edge && has_positive_slope_outer_edge(&hull) {
                return None;
            }
            Some(canonical(hull, c.transpose_dedupe).vertices().to_vec())
        })
        .collect();
    let out: Vec<LatticePolygon> = found
        .into_iter()
        .map(|v| LatticePolygon::from_vertices(v).expect("hull vertices"))
        .collect();
    for p in &out {
        let ok = verify_constraints(p, c).is_ok()
            || (c.transpose_dedupe && verify_constraints(&p.transpose(), c).is_ok());
        assert!(ok, "enumerated polygon {p} violates the constraints");
    }
    Ok(out)
}

/// Every outer edge other than `except` has no interior lattice points.
pub fn lattice_point_free(p: &LatticePolygon, except: Option<&(Monomial, Monomial)>) -> bool {
    let Ok(edges) = p.outer_edges() else {
        return true;
    };
    edges.iter().all(|e| {
        let ends = e.endpoints().ok();
        let fixed = match (ends, except) {
            (Some((a, b)), Some(t)) => (a, b) == *t || (b, a) == *t,
            _ => false,
        };
        fixed || e.interior_lattice_points().map_or(true, |v| v.is_empty())
    })
}

pub const DISMISSAL_RULE: &str = "LatticePointFreeOuterEdges";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extra {
    pub polygon: LatticePolygon,
    /// `None` when no rule dismisses the polygon, which fails the audit.
    pub dismissal: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub case_id: String,
    pub enumerated: Vec<LatticePolygon>,
    pub matched: BTreeMap<String, LatticePolygon>,
    pub extras: Vec<Extra>,
    pub missing: Vec<String>,
    /// Matched paper polygons not removed by the dismissal rule.
    pub survivors: Vec<String>,
    pub undismissed: usize,
    pub passed: bool,
}

/// A constraint set with the paper polygons it is audited against. Also the format
/// of a constraints file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    #[serde(default)]
    pub id: String,
    pub constraints: PolygonConstraints,
    #[serde(default)]
    pub paper_ids: Vec<String>,
}

fn m(i: u32, j: u32) -> Monomial {
    Monomial::new(i, j)
}

fn ids(range: impl IntoIterator<Item = u32>) -> Vec<String> {
    range.into_iter().map(|k| format!("D{k}")).collect()
}

pub const CASE_IDS: [&str; 5] = ["II", "III", "IV-x4", "IV-x2y2", "THM2"];

/// The constraint sets of the case analysis for `deg f = 5`.
pub fn builtin_case(id: &str) -> Result<CaseSpec, EnumerateError> {
    let base = |required: Vec<Monomial>, forbidden: Vec<Monomial>, top: (Monomial, Monomial)| PolygonConstraints {
        max_degree: 5,
        extra_points: vec![],
        x_saturated: false,
        required,
        forbidden,
        top_face: Some(top),
        transpose_dedupe: false,
        no_positive_slope_outer_edge: false,
    };
    let (constraints, paper_ids) = match id {
        "II" => (
            base(
                vec![m(1, 0), m(0, 1), m(5, 0), m(2, 3)],
                vec![m(0, 0), m(0, 5), m(1, 4)],
                (m(2, 3), m(5, 0)),
            ),
            ids(1..=5),
        ),
        "III" => (
            base(
                vec![m(1, 0), m(0, 1), m(5, 0), m(3, 2)],
                vec![m(0, 0), m(0, 5), m(1, 4), m(2, 3)],
                (m(3, 2), m(5, 0)),
            ),
            ids(7..=15),
        ),
        "IV-x4" => (
            base(
                vec![m(1, 0), m(0, 1), m(5, 0), m(4, 1)],
                vec![m(0, 0), m(0, 5), m(1, 4), m(2, 3), m(3, 2)],
                (m(4, 1), m(5, 0)),
            ),
            ids(16..=24),
        ),
        "IV-x2y2" => {
            let mut c = base(
                vec![m(1, 0), m(0, 1), m(3, 2), m(2, 3)],
                vec![m(0, 0), m(0, 5), m(1, 4), m(4, 1), m(5, 0)],
                (m(2, 3), m(3, 2)),
            );
            c.transpose_dedupe = true;
            (c, ids((25..=31).chain(33..=36)))
        }
        "THM2" => (
            PolygonConstraints {
                max_degree: 4,
                extra_points: vec![m(5, 0)],
                x_saturated: true,
                required: vec![m(0, 0), m(5, 0)],
                forbidden: vec![m(0, 5), m(1, 4), m(2, 3), m(3, 2), m(4, 1)],
                top_face: None,
                transpose_dedupe: false,
                no_positive_slope_outer_edge: true,
            },
            ids(37..=46),
        ),
        other => return Err(EnumerateError::UnknownCase(other.to_string())),
    };
    Ok(CaseSpec {
        id: id.to_string(),
        constraints,
        paper_ids,
    })
}

fn id_number(id: &str) -> u32 {
    id.trim_start_matches(|c: char| !c.is_ascii_digit()).parse().unwrap_or(u32::MAX)
}

/// Parses `{"D1": {"vertices": [[1,0], ...]}, ...}`, sorted by figure number.
pub fn load_polygons(json: &str) -> Result<Vec<(String, LatticePolygon)>, EnumerateError> {
    let map: BTreeMap<String, LatticePolygon> =
        serde_json::from_str(json).map_err(|e| EnumerateError::MalformedList(e.to_string()))?;
    let mut out: Vec<(String, LatticePolygon)> = map.into_iter().collect();
    out.sort_by_key(|(k, _)| (id_number(k), k.clone()));
    Ok(out)
}

pub fn audit_case(case: &CaseSpec, paper: &[(String, LatticePolygon)]) -> Result<AuditReport, EnumerateError> {
    let enumerated = enumerate_polygons(&case.constraints)?;
    let dedupe = case.constraints.transpose_dedupe;
    let top = case.constraints.top_face.as_ref();
    let mut matched = BTreeMap::new();
    let mut missing = Vec::new();
    let mut used = BTreeSet::new();
    for id in &case.paper_ids {
        let Some((_, poly)) = paper.iter().find(|(k, _)| k == id) else {
            return Err(EnumerateError::MalformedList(format!("{id} not in the list")));
        };
        let key = canonical(poly.clone(), dedupe);
        match enumerated.iter().position(|e| *e == key) {
            Some(k) => {
                used.insert(k);
                matched.insert(id.clone(), poly.clone());
            }
            None => missing.push(id.clone()),
        }
    }
    let extras: Vec<Extra> = enumerated
        .iter()
        .enumerate()
        .filter(|(k, _)| !used.contains(k))
        .map(|(_, p)| Extra {
            polygon: p.clone(),
            dismissal: lattice_point_free(p, top).then(|| DISMISSAL_RULE.to_string()),
        })
        .collect();
    let mut survivors: Vec<String> = matched
        .iter()
        .filter(|(_, p)| !lattice_point_free(p, top))
        .map(|(k, _)| k.clone())
        .collect();
    survivors.sort_by_key(|k| id_number(k));
    let undismissed = extras.iter().filter(|e| e.dismissal.is_none()).count();
    Ok(AuditReport {
        case_id: case.id.clone(),
        enumerated,
        matched,
        extras,
        passed: undismissed == 0 && missing.is_empty(),
        missing,
        survivors,
        undismissed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[(u32, u32)]) -> LatticePolygon {
        LatticePolygon::hull(v.iter().map(|&p| p.into())).unwrap()
    }

    #[test]
    fn degree_one_segment() {
        let c = PolygonConstraints {
            max_degree: 1,
            extra_points: vec![],
            x_saturated: false,
            required: vec![m(1, 0), m(0, 1)],
            forbidden: vec![m(0, 0)],
            top_face: None,
            transpose_dedupe: false,
            no_positive_slope_outer_edge: false,
        };
        assert_eq!(enumerate_polygons(&c).unwrap(), vec![poly(&[(1, 0), (0, 1)])]);
    }

    #[test]
    fn errors() {
        let mut c = builtin_case("II").unwrap().constraints;
        c.forbidden.push(m(1, 0));
        assert_eq!(enumerate_polygons(&c), Err(EnumerateError::Conflict(m(1, 0))));
        c.max_degree = 6;
        assert!(matches!(enumerate_polygons(&c), Err(EnumerateError::RegionTooLarge(28))));
        assert!(builtin_case("bogus").is_err());
    }

    #[test]
    fn case_two_has_one_extra() {
        let paper = load_polygons(PAPER_POLYGONS_JSON).unwrap();
        let r = audit_case(&builtin_case("II").unwrap(), &paper).unwrap();
        assert_eq!(r.matched.len(), 5);
        assert_eq!(r.extras.len(), 1);
        assert_eq!(r.extras[0].polygon, poly(&[(1, 0), (5, 0), (2, 3), (1, 3), (0, 1)]));
        assert!(r.extras[0].dismissal.is_some());
        assert_eq!(r.survivors, vec!["D2", "D5"]);
        assert!(r.passed);
    }

    #[test]
    fn mirror_pair_dedupes() {
        let a = poly(&[(1, 0), (0, 1), (2, 0)]);
        let b = poly(&[(1, 0), (0, 1), (0, 2)]);
        assert_eq!(transpose_dedupe(&[a.clone(), b]).len(), 1);
        let s = poly(&[(1, 0), (0, 1), (2, 2)]);
        assert_eq!(transpose_dedupe(std::slice::from_ref(&s)), vec![s]);
    }

    #[test]
    fn dismissal_rule() {
        let d1 = poly(&[(1, 0), (5, 0), (2, 3), (0, 4), (0, 1)]);
        let d5 = poly(&[(1, 0), (5, 0), (2, 3), (0, 1)]);
        let top = (m(2, 3), m(5, 0));
        assert!(lattice_point_free(&d1, Some(&top)));
        assert!(!lattice_point_free(&d5, Some(&top)));
        // the top face itself has interior points (3,2), (4,1)
        assert!(!lattice_point_free(&d1, None));
    }

    #[test]
    fn paper_list_loads() {
        let paper = load_polygons(PAPER_POLYGONS_JSON).unwrap();
        assert_eq!(paper.len(), 48);
        assert_eq!(paper[0].0, "D1");
        assert!(paper.iter().all(|(k, _)| k != "D32" && k != "D47"));
        assert!(load_polygons(r#"{"D1": {"vertices": [[0,0],[2,2],[1,1]]}}"#).is_err());
    }
}
