//! JSON diagram format and structural validation.
//!
//! ```json
//! {"darts": 8, "edges": [[0,5], ...],
//!  "crossings": [{"ccw": [0,1,2,3], "over": [0,2], "sign": 1}, ...],
//!  "orient": [1,-1, ...], "free_loops": 1}
//! ```
//!
//! `orient[d]` is `1` when the strand leaves the dart's vertex through `d`.
//! Arcs whose two darts are at no crossing are crossingless circles;
//! `free_loops: k` appends `k` more of them with darts `N, N+1, ...`.
//! Optional `joints` lists bivalent pass-through vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Crossing, CrossingId, Dart, DartInfo, Diagram, DiagramError, Site};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSpec {
    pub ccw: [Dart; 4],
    pub over: [Dart; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramFile {
    pub darts: u32,
    #[serde(default)]
    pub edges: Vec<[Dart; 2]>,
    #[serde(default)]
    pub crossings: Vec<CrossingSpec>,
    #[serde(default)]
    pub orient: Vec<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub joints: Vec<[Dart; 2]>,
    #[serde(default)]
    pub free_loops: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DartOutOfRange(Dart),
    DartUnpaired(Dart),
    DartInSeveralEdges(Dart),
    SelfPairedDart(Dart),
    DartReused(Dart),
    OverNotOpposite(usize),
    DanglingArc(Dart, Dart),
    OrientLength { expected: usize, got: usize },
    OrientValue(Dart),
    OrientationInconsistent(Dart, Dart),
    SignMismatch { crossing: usize, declared: i32, derived: i32 },
    NonPlanar { component: Dart, euler: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DartOutOfRange(d) => write!(f, "dart {d} out of range"),
            Violation::DartUnpaired(d) => write!(f, "dart {d} is in no edge"),
            Violation::DartInSeveralEdges(d) => write!(f, "dart {d} is in several edges"),
            Violation::SelfPairedDart(d) => write!(f, "dart {d} is paired with itself"),
            Violation::DartReused(d) => write!(f, "dart reused: {d}"),
            Violation::OverNotOpposite(c) => {
                write!(f, "crossing {c}: over darts are not opposite")
            }
            Violation::DanglingArc(a, b) => {
                write!(f, "arc ({a},{b}) has exactly one end at a vertex")
            }
            Violation::OrientLength { expected, got } => {
                write!(f, "orient has {got} entries, expected {expected}")
            }
            Violation::OrientValue(d) => write!(f, "orient entry for dart {d} is not ±1"),
            Violation::OrientationInconsistent(a, b) => {
                write!(f, "orientation inconsistent between darts {a} and {b}")
            }
            Violation::SignMismatch { crossing, declared, derived } => write!(
                f,
                "crossing {crossing}: declared sign {declared}, orientation gives {derived}"
            ),
            Violation::NonPlanar { component, euler } => {
                write!(f, "non-planar: component of dart {component} has V-E+F = {euler}")
            }
        }
    }
}

/// Raw structural data shared by validation and loading.
struct Parsed {
    n: u32,
    mate: Vec<Option<Dart>>,
    site: Vec<Option<Site>>,
    out: Vec<bool>,
    crossings: Vec<Crossing>,
}

fn parse(file: &DiagramFile, violations: &mut Vec<Violation>) -> Parsed {
    let listed = file.darts;
    let n = listed + 2 * file.free_loops;
    let size = n as usize;
    let mut mate: Vec<Option<Dart>> = vec![None; size];
    let in_range = |d: Dart, v: &mut Vec<Violation>| {
        if d >= listed {
            v.push(Violation::DartOutOfRange(d));
            false
        } else {
            true
        }
    };
    for &[a, b] in &file.edges {
        let ok_a = in_range(a, violations);
        let ok_b = in_range(b, violations);
        if !(ok_a && ok_b) {
            continue;
        }
        if a == b {
            violations.push(Violation::SelfPairedDart(a));
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            if mate[x as usize].is_some() {
                violations.push(Violation::DartInSeveralEdges(x));
            } else {
                mate[x as usize] = Some(y);
            }
        }
    }

    let mut site: Vec<Option<Site>> = vec![None; size];
    let mut crossings = Vec::new();
    for (ci, spec) in file.crossings.iter().enumerate() {
        for (slot, &d) in spec.ccw.iter().enumerate() {
            if !in_range(d, violations) {
                continue;
            }
            if site[d as usize].is_some() {
                violations.push(Violation::DartReused(d));
            } else {
                site[d as usize] = Some(Site::Crossing { id: ci as CrossingId, slot: slot as u8 });
            }
        }
        let pos = |d: Dart| spec.ccw.iter().position(|&x| x == d);
        let over_even = match (pos(spec.over[0]), pos(spec.over[1])) {
            (Some(p), Some(q)) if (p + 2) % 4 == q => p % 2 == 0,
            _ => {
                violations.push(Violation::OverNotOpposite(ci));
                true
            }
        };
        crossings.push(Crossing { ccw: spec.ccw, over_even });
    }
    for &[p, q] in &file.joints {
        let ok = in_range(p, violations) & in_range(q, violations);
        if !ok {
            continue;
        }
        for (x, y) in [(p, q), (q, p)] {
            if site[x as usize].is_some() {
                violations.push(Violation::DartReused(x));
            } else {
                site[x as usize] = Some(Site::Joint { partner: y });
            }
        }
    }
    for d in 0..listed {
        if mate[d as usize].is_none() {
            violations.push(Violation::DartUnpaired(d));
        }
    }
    // Arcs with no vertex at either end close up into crossingless circles.
    for d in 0..listed {
        let Some(m) = mate[d as usize] else { continue };
        let (sd, sm) = (site[d as usize].is_some(), site[m as usize].is_some());
        if !sd && !sm && d < m {
            site[d as usize] = Some(Site::Joint { partner: m });
            site[m as usize] = Some(Site::Joint { partner: d });
        } else if sd != sm && d < m {
            violations.push(Violation::DanglingArc(d, m));
        }
    }
    for k in 0..file.free_loops {
        let p = listed + 2 * k;
        let q = p + 1;
        mate[p as usize] = Some(q);
        mate[q as usize] = Some(p);
        site[p as usize] = Some(Site::Joint { partner: q });
        site[q as usize] = Some(Site::Joint { partner: p });
    }

    let mut out = vec![false; size];
    if file.orient.len() != listed as usize {
        violations.push(Violation::OrientLength {
            expected: listed as usize,
            got: file.orient.len(),
        });
    } else {
        for (d, &o) in file.orient.iter().enumerate() {
            match o {
                1 => out[d] = true,
                -1 => {}
                _ => violations.push(Violation::OrientValue(d as Dart)),
            }
        }
    }
    for k in 0..file.free_loops {
        out[(listed + 2 * k) as usize] = true;
    }
    Parsed { n, mate, site, out, crossings }
}

/// Checks every diagram invariant and reports all violations found.
pub fn validate(file: &DiagramFile) -> Vec<Violation> {
    let mut violations = Vec::new();
    let parsed = parse(file, &mut violations);
    if !violations.is_empty() {
        // Orientation and genus checks need a well-formed map.
        return violations;
    }
    let d = assemble(&parsed);

    let mut seen = BTreeSet::new();
    for x in d.darts() {
        let pairs = [d.mate(x), d.straight(x)];
        for y in pairs {
            if d.is_outgoing(x) == d.is_outgoing(y) {
                let key = (x.min(y), x.max(y));
                if seen.insert(key) {
                    violations.push(Violation::OrientationInconsistent(key.0, key.1));
                }
            }
        }
    }
    if violations.is_empty() {
        for (ci, spec) in file.crossings.iter().enumerate() {
            if let Some(declared) = spec.sign {
                let derived = d.crossing_sign(ci as CrossingId);
                if declared != derived {
                    violations.push(Violation::SignMismatch { crossing: ci, declared, derived });
                }
            }
        }
    }

    violations.extend(planarity_violations(&d));
    violations
}

pub(crate) fn planarity_violations(d: &Diagram) -> Vec<Violation> {
    let comp = d.components();
    let mut stats: BTreeMap<Dart, (i64, i64, i64)> = BTreeMap::new();
    for x in d.darts() {
        let e = stats.entry(comp[&x]).or_default();
        // Each dart contributes 1/4 of a crossing or 1/2 of a joint and half an edge.
        e.1 += 1;
        match d.site(x) {
            Site::Crossing { slot: 0, .. } => e.0 += 1,
            Site::Joint { partner } if x < partner => e.0 += 1,
            _ => {}
        }
    }
    for face in d.faces() {
        stats.entry(comp[&face[0]]).or_default().2 += 1;
    }
    stats
        .into_iter()
        .filter_map(|(c, (v, darts, f))| {
            let euler = v - darts / 2 + f;
            (euler != 2).then_some(Violation::NonPlanar { component: c, euler })
        })
        .collect()
}

fn assemble(p: &Parsed) -> Diagram {
    let darts = (0..p.n as usize)
        .map(|k| {
            Some(DartInfo {
                mate: p.mate[k].expect("validated"),
                site: p.site[k].expect("validated"),
                out: p.out[k],
            })
        })
        .collect();
    Diagram {
        darts,
        crossings: p
            .crossings
            .iter()
            .enumerate()
            .map(|(k, c)| (k as CrossingId, *c))
            .collect(),
        next_crossing: p.crossings.len() as CrossingId,
    }
}

impl Diagram {
    /// Loads a diagram, rejecting it with the full violation list if invalid.
    pub fn from_file(file: &DiagramFile) -> Result<Diagram, DiagramError> {
        let violations = validate(file);
        if !violations.is_empty() {
            return Err(DiagramError::Invalid(violations));
        }
        let mut sink = Vec::new();
        Ok(assemble(&parse(file, &mut sink)))
    }

    pub fn from_json(text: &str) -> Result<Diagram, DiagramError> {
        let file: DiagramFile =
            serde_json::from_str(text).map_err(|e| DiagramError::Parse(e.to_string()))?;
        Diagram::from_file(&file)
    }

    /// Serializable form with darts and crossings renumbered densely in
    /// ascending order; the returned map sends old dart ids to new ones.
    pub fn to_file(&self) -> (DiagramFile, BTreeMap<Dart, Dart>) {
        let renum: BTreeMap<Dart, Dart> =
            self.darts().enumerate().map(|(k, d)| (d, k as Dart)).collect();
        let r = |d: Dart| renum[&d];
        let mut edges = Vec::new();
        let mut joints = Vec::new();
        for d in self.darts() {
            let m = self.mate(d);
            if d < m {
                edges.push([r(d), r(m)]);
            }
            if let Site::Joint { partner } = self.site(d) {
                // Single-arc crossingless circles are implied by their edge.
                if d < partner && self.mate(d) != partner {
                    joints.push([r(d), r(partner)]);
                }
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|(&id, c)| {
                let ccw = c.ccw.map(r);
                let over = if c.over_even { [ccw[0], ccw[2]] } else { [ccw[1], ccw[3]] };
                CrossingSpec { ccw, over, sign: Some(self.crossing_sign(id)) }
            })
            .collect();
        let orient = self
            .darts()
            .map(|d| if self.is_outgoing(d) { 1 } else { -1 })
            .collect();
        (
            DiagramFile {
                darts: renum.len() as u32,
                edges,
                crossings,
                orient,
                joints,
                free_loops: 0,
            },
            renum,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file().0).expect("diagram serializes")
    }
}
