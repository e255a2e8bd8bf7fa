//! Movies: an initial diagram and a list of events, in JSON.
//!
//! ```json
//! {"initial": "unlink_2",
//!  "events": [{"type": "r2_up", "arc_a": 0, "arc_b": 2, "over": "a"},
//!             {"type": "r2_down", "crossings": [0, 1]},
//!             {"type": "birth"}, {"type": "death", "circle": 4},
//!             {"type": "saddle", "arc_a": 0, "arc_b": 2},
//!             {"type": "isotopy", "diagram": "unlink_2"}]}
//! ```
//!
//! `initial` and the isotopy target are a fixture name or a diagram file.
//! A death names its circle by one of its darts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::build_complex;
use crate::diagram::{find_isomorphism, fixture, CrossingId, Dart, Diagram, DiagramFile, MorseEvent, Strand};

use super::map::ChainMap;
use super::morse::{isotopy_map, isotopy_map_with, morse_map, r2_down_map, r2_up_map};
use super::MovieError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiagramSource {
    Fixture(String),
    File(DiagramFile),
}

impl DiagramSource {
    pub fn load(&self) -> Result<Diagram, MovieError> {
        Ok(match self {
            DiagramSource::Fixture(name) => fixture(name)?,
            DiagramSource::File(f) => Diagram::from_file(f)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Event {
    R2Up {
        arc_a: Dart,
        arc_b: Dart,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        face: Option<usize>,
        over: Strand,
    },
    R2Down {
        crossings: [CrossingId; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        face: Option<usize>,
    },
    Birth,
    Death {
        circle: Dart,
    },
    Saddle {
        arc_a: Dart,
        arc_b: Dart,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        face: Option<usize>,
    },
    Isotopy {
        diagram: DiagramSource,
    },
}

impl Event {
    /// Applies the event, returning the next diagram and the induced map.
    pub fn apply(&self, d: &Diagram) -> Result<(Diagram, ChainMap), MovieError> {
        match self {
            Event::R2Up { arc_a, arc_b, face, over } => r2_up_map(d, *arc_a, *arc_b, *face, *over),
            Event::R2Down { crossings: [x, y], face } => {
                let (_, rec) = d.r2_down_crossings(*x, *y, *face)?;
                r2_down_map(d, rec.bigon_dart.expect("r2 record"))
            }
            Event::Birth => morse_map(d, MorseEvent::Birth),
            Event::Death { circle } => morse_map(d, MorseEvent::Death(*circle)),
            Event::Saddle { arc_a, arc_b, face } => {
                morse_map(d, MorseEvent::Saddle { a: *arc_a, b: *arc_b, face: *face })
            }
            Event::Isotopy { diagram } => {
                let to = diagram.load()?;
                let f = isotopy_map(d, &to)?;
                Ok((to, f))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Movie {
    pub initial: DiagramSource,
    #[serde(default)]
    pub events: Vec<Event>,
}

/// Diagrams after each event, and the composite map.
#[derive(Debug, Clone)]
pub struct Replay {
    pub diagrams: Vec<Diagram>,
    pub map: ChainMap,
    /// Per diagram, each dart's strand labelled by the initial strand it
    /// descends from (that strand's smallest dart), where one exists.
    pub lineage: Vec<BTreeMap<Dart, Dart>>,
}

/// Strands as dart sets, following arcs and passing straight through
/// crossings and joints.
fn strands(d: &Diagram) -> Vec<Vec<Dart>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for start in d.darts() {
        if seen.contains(&start) {
            continue;
        }
        let mut s = Vec::new();
        let mut p = start;
        while seen.insert(p) {
            let q = d.mate(p);
            seen.insert(q);
            s.extend([p, q]);
            p = d.straight(q);
        }
        s.sort_unstable();
        out.push(s);
    }
    out
}

/// Labels of `next` inherited from `prev` through `carry` (a dart of
/// `prev` to the dart of `next` it becomes).
fn inherit(prev: &BTreeMap<Dart, Dart>, next: &Diagram, carry: impl Fn(Dart) -> Option<Dart>) -> BTreeMap<Dart, Dart> {
    let mut via: BTreeMap<Dart, Dart> = BTreeMap::new();
    for (&d, &l) in prev {
        if let Some(t) = carry(d) {
            via.entry(t).and_modify(|x| *x = (*x).min(l)).or_insert(l);
        }
    }
    let mut out = BTreeMap::new();
    for s in strands(next) {
        if let Some(l) = s.iter().filter_map(|d| via.get(d)).min().copied() {
            out.extend(s.iter().map(|&d| (d, l)));
        }
    }
    out
}

impl Movie {
    pub fn from_json(text: &str) -> Result<Movie, MovieError> {
        serde_json::from_str(text).map_err(|e| MovieError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("movie serializes")
    }

    pub fn replay(&self) -> Result<Replay, MovieError> {
        let start = self.initial.load()?;
        let mut map = ChainMap::identity(&build_complex(&start)?);
        let first: BTreeMap<Dart, Dart> =
            strands(&start).into_iter().flat_map(|s| s.iter().map(|&d| (d, s[0])).collect::<Vec<_>>()).collect();
        let mut lineage = vec![first];
        let mut diagrams = vec![start];
        for ev in &self.events {
            let prev = diagrams.last().expect("nonempty");
            let (next, f) = ev.apply(prev)?;
            let labels = lineage.last().expect("nonempty");
            let labels = if let Event::Isotopy { .. } = ev {
                let iso = find_isomorphism(prev, &next).ok_or(MovieError::NotIsotopic)?;
                let loops = prev.crossingless_components();
                let next_loops = next.crossingless_components();
                inherit(labels, &next, |d| {
                    iso.dart_map.get(&d).copied().or_else(|| {
                        let l = loops.iter().find(|l| l.contains(&d))?;
                        let t = iso.loop_map[&l[0]];
                        next_loops.iter().find(|n| n.contains(&t)).map(|n| n[0])
                    })
                })
            } else {
                inherit(labels, &next, |d| next.has_dart(d).then_some(d))
            };
            map = map.then(&f);
            diagrams.push(next);
            lineage.push(labels);
        }
        Ok(Replay { diagrams, map, lineage })
    }
}

/// The composite of the per-event maps.
pub fn induced_chain_map(m: &Movie) -> Result<ChainMap, MovieError> {
    Ok(m.replay()?.map)
}

/// The composite as an endomorphism of `C(initial)`: followed by the
/// isotopy back onto the initial diagram when the final one differs, with
/// crossingless loops paired by the strand they descend from.
/// Endpoints must have zero differential, so that chains are homology.
/// The j-shift is the Euler characteristic of the surface and is kept.
pub fn induced_self_map(m: &Movie) -> Result<ChainMap, MovieError> {
    let r = m.replay()?;
    let (first, last) = (&r.diagrams[0], r.diagrams.last().expect("nonempty"));
    let map = if first == last {
        r.map
    } else {
        let labels = r.lineage.last().expect("nonempty");
        let hint: BTreeMap<Dart, Dart> = last
            .crossingless_components()
            .iter()
            .filter_map(|l| labels.get(&l[0]).map(|&x| (l[0], x)))
            .collect();
        r.map.then(&isotopy_map_with(last, first, &hint)?)
    };
    if !map.source.is_zero_differential() {
        return Err(MovieError::NonZeroDifferential);
    }
    Ok(map)
}
