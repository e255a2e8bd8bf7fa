//! Oriented link diagrams as combinatorial maps.
//!
//! A diagram is a set of darts (half-edges) paired into arcs by an
//! involution. Every dart sits either at a crossing, one of four darts listed
//! counterclockwise, or at a bivalent *joint* that simply lets the strand
//! pass. A crossingless circle is one arc whose two darts are joined to each
//! other. Joints are never removed by moves, which keeps dart identities
//! stable through a whole movie.
//!
//! Relative placement of split components is not recorded: any two darts in
//! different connected components are treated as lying on a common face.

mod build;
mod file;
mod iso;
mod moves;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use build::{braid_closure, fixture, fixture_names, random_diagram, BraidLetter};
pub use file::{validate, CrossingSpec, DiagramFile, Violation};
pub use iso::{find_isomorphism, find_isomorphism_with, Isomorphism};
pub use moves::{Bigon, MoveKind, MoveRecord, MorseEvent, Strand};

pub type Dart = u32;
pub type CrossingId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram JSON: {0}")]
    Parse(String),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown dart {0}")]
    UnknownDart(Dart),
    #[error("unknown crossing {0}")]
    UnknownCrossing(CrossingId),
    #[error("unknown face {0}")]
    UnknownFace(usize),
    #[error("marking covers {got} crossings, diagram has {expected}")]
    IncompleteMarking { expected: usize, got: usize },
    #[error("arcs at darts {0} and {1} do not share a face")]
    NotCofacial(Dart, Dart),
    #[error("arcs at darts {0} and {1} share two faces; name the face")]
    AmbiguousFace(Dart, Dart),
    #[error("darts {0} and {1} lie on the same arc")]
    SameArc(Dart, Dart),
    #[error("crossings {0} and {1} do not bound a removable bigon")]
    NotRemovableBigon(CrossingId, CrossingId),
    #[error("dart {0} is not on a bigon face")]
    NoBigonAt(Dart),
    #[error("crossings {0} and {1} bound more than one removable bigon; name the face")]
    AmbiguousBigon(CrossingId, CrossingId),
    #[error("circle at dart {0} passes through a crossing")]
    DeathThroughCrossing(Dart),
    #[error("saddle at darts {0} and {1} does not respect orientations")]
    NonOrientableSaddle(Dart, Dart),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

/// Where a dart is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    Crossing { id: CrossingId, slot: u8 },
    Joint { partner: Dart },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct DartInfo {
    pub(crate) mate: Dart,
    pub(crate) site: Site,
    /// The strand leaves the dart's vertex through this dart.
    pub(crate) out: bool,
}

/// A crossing: four darts in counterclockwise order; the overstrand is
/// either the slot pair (0, 2) or (1, 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub ccw: [Dart; 4],
    pub over_even: bool,
}

impl Crossing {
    pub fn is_over_slot(&self, slot: u8) -> bool {
        slot.is_multiple_of(2) == self.over_even
    }
}

/// Marker at a crossing; `Positive` selects Kauffman's A-smoothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    Positive,
    Negative,
}

impl Marker {
    pub fn sign(self) -> i32 {
        match self {
            Marker::Positive => 1,
            Marker::Negative => -1,
        }
    }

    pub fn flipped(self) -> Marker {
        match self {
            Marker::Positive => Marker::Negative,
            Marker::Negative => Marker::Positive,
        }
    }
}

/// Marker per crossing, aligned with [`Diagram::crossing_ids`] (ascending ids).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking(pub Vec<Marker>);

impl Marking {
    pub fn uniform(n: usize, m: Marker) -> Self {
        Marking(vec![m; n])
    }

    /// Marking whose bit `k` (of `n`) set means crossing `k` is negative.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Marking(
            (0..n)
                .map(|k| {
                    if (bits >> (n - 1 - k)) & 1 == 1 {
                        Marker::Negative
                    } else {
                        Marker::Positive
                    }
                })
                .collect(),
        )
    }

    pub fn sigma(&self) -> i32 {
        self.0.iter().map(|m| m.sign()).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Circles of a smoothed diagram, ordered by smallest dart. Each circle is
/// listed in tracing order starting from that smallest dart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub circles: Vec<Vec<Dart>>,
    circle_of: BTreeMap<Dart, usize>,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn circle_of(&self, d: Dart) -> Option<usize> {
        self.circle_of.get(&d).copied()
    }

    /// Dart sets per circle, for structural comparison between resolutions.
    pub fn dart_sets(&self) -> Vec<BTreeSet<Dart>> {
        self.circles
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub(crate) darts: Vec<Option<DartInfo>>,
    pub(crate) crossings: BTreeMap<CrossingId, Crossing>,
    pub(crate) next_crossing: CrossingId,
}

impl Default for Diagram {
    fn default() -> Self {
        Self::empty()
    }
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram {
            darts: Vec::new(),
            crossings: BTreeMap::new(),
            next_crossing: 0,
        }
    }

    /// `k` disjoint crossingless circles.
    pub fn unlink(k: usize) -> Self {
        let mut d = Diagram::empty();
        for _ in 0..k {
            d.add_free_loop();
        }
        d
    }

    pub(crate) fn info(&self, d: Dart) -> Option<&DartInfo> {
        self.darts.get(d as usize).and_then(Option::as_ref)
    }

    fn info_or_err(&self, d: Dart) -> Result<&DartInfo, DiagramError> {
        self.info(d).ok_or(DiagramError::UnknownDart(d))
    }

    pub(crate) fn fresh_dart(&mut self, info: DartInfo) -> Dart {
        self.darts.push(Some(info));
        (self.darts.len() - 1) as Dart
    }

    pub(crate) fn add_free_loop(&mut self) -> (Dart, Dart) {
        let p = self.darts.len() as Dart;
        let q = p + 1;
        self.darts.push(Some(DartInfo { mate: q, site: Site::Joint { partner: q }, out: true }));
        self.darts.push(Some(DartInfo { mate: p, site: Site::Joint { partner: p }, out: false }));
        (p, q)
    }

    pub fn has_dart(&self, d: Dart) -> bool {
        self.info(d).is_some()
    }

    /// Live darts, ascending.
    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.darts
            .iter()
            .enumerate()
            .filter(|(_, i)| i.is_some())
            .map(|(k, _)| k as Dart)
    }

    pub fn dart_count(&self) -> usize {
        self.darts.iter().filter(|i| i.is_some()).count()
    }

    /// One past the largest dart id ever allocated.
    pub fn dart_bound(&self) -> Dart {
        self.darts.len() as Dart
    }

    pub fn mate(&self, d: Dart) -> Dart {
        self.info(d).expect("live dart").mate
    }

    pub fn site(&self, d: Dart) -> Site {
        self.info(d).expect("live dart").site
    }

    pub fn is_outgoing(&self, d: Dart) -> bool {
        self.info(d).expect("live dart").out
    }

    pub fn crossing(&self, id: CrossingId) -> Option<&Crossing> {
        self.crossings.get(&id)
    }

    pub fn crossing_ids(&self) -> Vec<CrossingId> {
        self.crossings.keys().copied().collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Position of a crossing within [`Diagram::crossing_ids`].
    pub fn crossing_index(&self, id: CrossingId) -> Option<usize> {
        self.crossings.keys().position(|&c| c == id)
    }

    pub(crate) fn slot_dart(&self, id: CrossingId, slot: u8) -> Dart {
        self.crossings[&id].ccw[(slot % 4) as usize]
    }

    /// Counterclockwise successor of a dart around its vertex.
    pub fn rotate(&self, d: Dart) -> Dart {
        match self.site(d) {
            Site::Crossing { id, slot } => self.slot_dart(id, slot + 1),
            Site::Joint { partner } => partner,
        }
    }

    /// Counterclockwise predecessor.
    pub fn rotate_back(&self, d: Dart) -> Dart {
        match self.site(d) {
            Site::Crossing { id, slot } => self.slot_dart(id, slot + 3),
            Site::Joint { partner } => partner,
        }
    }

    /// The dart through which the strand continues across the vertex.
    pub fn straight(&self, d: Dart) -> Dart {
        match self.site(d) {
            Site::Crossing { id, slot } => self.slot_dart(id, slot + 2),
            Site::Joint { partner } => partner,
        }
    }

    /// First crossing dart reached by walking along the strand from `d`
    /// (which must be a crossing dart) through any joints.
    pub fn far_end(&self, d: Dart) -> Dart {
        let mut e = self.mate(d);
        while let Site::Joint { partner } = self.site(e) {
            e = self.mate(partner);
        }
        e
    }

    /// Sign of a crossing under the right-hand rule.
    pub fn crossing_sign(&self, id: CrossingId) -> i32 {
        let c = &self.crossings[&id];
        let over_slots: [u8; 2] = if c.over_even { [0, 2] } else { [1, 3] };
        let out_slot = over_slots
            .into_iter()
            .find(|&s| self.is_outgoing(c.ccw[s as usize]))
            .expect("overstrand has an outgoing dart");
        if self.is_outgoing(c.ccw[((out_slot + 1) % 4) as usize]) {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.keys().map(|&id| self.crossing_sign(id)).sum()
    }

    /// Smoothing partner of a crossing dart under the given marker.
    pub fn smoothing_partner(&self, d: Dart, marker: Marker) -> Dart {
        let Site::Crossing { id, slot } = self.site(d) else {
            panic!("dart {d} is not at a crossing");
        };
        let c = &self.crossings[&id];
        // The A-smoothing joins each overstrand dart to its counterclockwise predecessor.
        let pairs_01_23 = c.over_even != (marker == Marker::Positive);
        let partner = if pairs_01_23 { slot ^ 1 } else { 3 - slot };
        c.ccw[partner as usize]
    }

    /// Mirror image: every crossing switches which strand is over.
    pub fn mirror(&self) -> Diagram {
        let mut d = self.clone();
        for c in d.crossings.values_mut() {
            c.over_even = !c.over_even;
        }
        d
    }

    /// Smooths every crossing according to `marking` and traces circles.
    pub fn resolve(&self, marking: &Marking) -> Result<Resolution, DiagramError> {
        if marking.len() != self.crossings.len() {
            return Err(DiagramError::IncompleteMarking {
                expected: self.crossings.len(),
                got: marking.len(),
            });
        }
        let marker_of: BTreeMap<CrossingId, Marker> = self
            .crossings
            .keys()
            .copied()
            .zip(marking.0.iter().copied())
            .collect();
        let through = |d: Dart| match self.site(d) {
            Site::Crossing { id, .. } => self.smoothing_partner(d, marker_of[&id]),
            Site::Joint { partner } => partner,
        };
        let mut circle_of = BTreeMap::new();
        let mut circles = Vec::new();
        for start in self.darts() {
            if circle_of.contains_key(&start) {
                continue;
            }
            let idx = circles.len();
            let mut circle = Vec::new();
            let mut d = start;
            loop {
                circle.push(d);
                circle_of.insert(d, idx);
                let e = self.mate(d);
                circle.push(e);
                circle_of.insert(e, idx);
                d = through(e);
                if d == start {
                    break;
                }
            }
            circles.push(circle);
        }
        Ok(Resolution { circles, circle_of })
    }

    /// Faces of the rotation system as dart orbits of `d -> rotate(mate(d))`,
    /// ordered by smallest dart. A dart belongs to the face on the right when
    /// its arc is walked away from the dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for start in self.darts() {
            if !seen.insert(start) {
                continue;
            }
            let mut face = vec![start];
            let mut d = self.rotate(self.mate(start));
            while d != start {
                seen.insert(d);
                face.push(d);
                d = self.rotate(self.mate(d));
            }
            faces.push(face);
        }
        faces
    }

    pub fn face_of(&self, d: Dart) -> Option<usize> {
        self.faces().iter().position(|f| f.contains(&d))
    }

    /// Connected component label per live dart (labels are the smallest dart
    /// of each component).
    pub fn components(&self) -> BTreeMap<Dart, Dart> {
        let mut comp = BTreeMap::new();
        for start in self.darts() {
            if comp.contains_key(&start) {
                continue;
            }
            let mut stack = vec![start];
            comp.insert(start, start);
            while let Some(d) = stack.pop() {
                let mut nbrs = vec![self.mate(d)];
                match self.site(d) {
                    Site::Crossing { id, .. } => nbrs.extend(self.crossings[&id].ccw),
                    Site::Joint { partner } => nbrs.push(partner),
                }
                for n in nbrs {
                    if let std::collections::btree_map::Entry::Vacant(e) = comp.entry(n) {
                        e.insert(start);
                        stack.push(n);
                    }
                }
            }
        }
        comp
    }

    /// Whether the arcs leaving `a` and `b` can be joined across a face.
    pub fn cofacial(&self, a: Dart, b: Dart) -> bool {
        let comp = self.components();
        comp[&a] != comp[&b] || self.face_of(a) == self.face_of(b)
    }

    /// Picks, for the arcs containing darts `a` and `b`, the dart sides that
    /// face a common region. With `face` given, the sides lying on that face
    /// are used. Without it the darts are taken literally when they are on
    /// different components, otherwise the unique shared face is used.
    pub fn choose_sides(
        &self,
        a: Dart,
        b: Dart,
        face: Option<usize>,
    ) -> Result<(Dart, Dart), DiagramError> {
        let ia = self.info_or_err(a)?;
        let ib = self.info_or_err(b)?;
        if a == b || ia.mate == b {
            return Err(DiagramError::SameArc(a, b));
        }
        let faces = self.faces();
        let face_idx = |d: Dart| faces.iter().position(|f| f.contains(&d)).unwrap();
        let sides_a = [a, ia.mate];
        let sides_b = [b, ib.mate];
        if let Some(f) = face {
            if f >= faces.len() {
                return Err(DiagramError::UnknownFace(f));
            }
            let pick = |sides: [Dart; 2]| sides.into_iter().find(|&s| face_idx(s) == f);
            let comp = self.components();
            return match (pick(sides_a), pick(sides_b)) {
                (Some(x), Some(y)) => Ok((x, y)),
                (Some(x), None) if comp[&a] != comp[&b] => Ok((x, b)),
                (None, Some(y)) if comp[&a] != comp[&b] => Ok((a, y)),
                _ => Err(DiagramError::NotCofacial(a, b)),
            };
        }
        let comp = self.components();
        if comp[&a] != comp[&b] {
            return Ok((a, b));
        }
        let mut shared = Vec::new();
        for sa in sides_a {
            for sb in sides_b {
                if face_idx(sa) == face_idx(sb) {
                    shared.push((sa, sb));
                }
            }
        }
        match shared.as_slice() {
            [] => Err(DiagramError::NotCofacial(a, b)),
            [one] => Ok(*one),
            many => {
                if many.contains(&(a, b)) {
                    // Both darts name their sides on a shared face.
                    Ok((a, b))
                } else {
                    Err(DiagramError::AmbiguousFace(a, b))
                }
            }
        }
    }

    /// Darts lying on crossingless components.
    pub fn crossingless_components(&self) -> Vec<Vec<Dart>> {
        let comp = self.components();
        let mut by_comp: BTreeMap<Dart, Vec<Dart>> = BTreeMap::new();
        for (d, c) in &comp {
            by_comp.entry(*c).or_default().push(*d);
        }
        by_comp
            .into_values()
            .filter(|ds| ds.iter().all(|&d| matches!(self.site(d), Site::Joint { .. })))
            .collect()
    }

    /// All consistency violations of this in-memory diagram.
    pub fn violations(&self) -> Vec<Violation> {
        validate(&self.to_file().0)
    }
}
