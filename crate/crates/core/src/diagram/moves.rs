//! Diagram surgery: second Reidemeister moves and Morse modifications.
//!
//! Every move returns a new diagram. Surviving darts keep their ids; the
//! [`MoveRecord`] lists created and removed darts and the (identity) map on
//! survivors, so states of one diagram can be traced into the next.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Crossing, CrossingId, Dart, DartInfo, Diagram, DiagramError, Site};

/// Which of the two arcs passes over in a new bigon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strand {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    R2Up,
    R2Down,
    Birth,
    Death,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorseEvent {
    Birth,
    /// Removes the crossingless circle containing the dart.
    Death(Dart),
    Saddle { a: Dart, b: Dart, face: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// Crossings created (R2 up) or removed (R2 down).
    pub crossings: Vec<CrossingId>,
    /// A dart of the bigon face in the diagram that has the bigon.
    pub bigon_dart: Option<Dart>,
    /// Dart sides the move was applied to (R2 up, saddle).
    pub sides: Option<(Dart, Dart)>,
    pub created: Vec<Dart>,
    pub removed: Vec<Dart>,
    /// Old dart to new dart, for every surviving dart.
    pub dart_map: BTreeMap<Dart, Dart>,
}

impl MoveRecord {
    fn new(kind: MoveKind, before: &Diagram, after: &Diagram) -> Self {
        let removed: Vec<Dart> = before.darts().filter(|&d| !after.has_dart(d)).collect();
        let created: Vec<Dart> = after.darts().filter(|&d| !before.has_dart(d)).collect();
        let dart_map = before
            .darts()
            .filter(|&d| after.has_dart(d))
            .map(|d| (d, d))
            .collect();
        MoveRecord {
            kind,
            crossings: Vec::new(),
            bigon_dart: None,
            sides: None,
            created,
            removed,
            dart_map,
        }
    }
}

/// A bigon face between two crossings, identified by its dart `u` at the
/// first crossing; `v` is the face's dart at the second crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bigon {
    pub x: CrossingId,
    pub y: CrossingId,
    pub u: Dart,
    pub v: Dart,
}

impl Diagram {
    fn crossing_of(&self, d: Dart) -> Option<CrossingId> {
        match self.site(d) {
            Site::Crossing { id, .. } => Some(id),
            Site::Joint { .. } => None,
        }
    }

    fn is_over(&self, d: Dart) -> bool {
        match self.site(d) {
            Site::Crossing { id, slot } => self.crossings[&id].is_over_slot(slot),
            Site::Joint { .. } => false,
        }
    }

    /// The bigon face through crossing dart `u`, if that face (ignoring
    /// joints) has exactly two corners at distinct crossings.
    pub fn bigon_at(&self, u: Dart) -> Option<Bigon> {
        let x = self.crossing_of(u)?;
        let v = self.rotate(self.far_end(u));
        let y = self.crossing_of(v)?;
        if x == y || self.rotate(self.far_end(v)) != u {
            return None;
        }
        Some(Bigon { x, y, u, v })
    }

    /// Whether the bigon can be removed by an R2 move: one strand passes
    /// over at both corners and the crossing signs differ.
    pub fn is_removable(&self, b: &Bigon) -> bool {
        let edge_u_ok = self.is_over(b.u) == self.is_over(self.far_end(b.u));
        let edge_v_ok = self.is_over(b.v) == self.is_over(self.far_end(b.v));
        edge_u_ok && edge_v_ok && self.crossing_sign(b.x) != self.crossing_sign(b.y)
    }

    /// All removable bigons, one entry per face, ordered by their dart `u`.
    pub fn removable_bigons(&self) -> Vec<Bigon> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for d in self.darts() {
            if self.crossing_of(d).is_none() || seen.contains(&d) {
                continue;
            }
            if let Some(b) = self.bigon_at(d) {
                seen.insert(b.u);
                seen.insert(b.v);
                if self.is_removable(&b) {
                    out.push(b);
                }
            }
        }
        out
    }

    /// Slides the arc at side `a` across the face over (or under) the arc
    /// at side `b`, creating two crossings of opposite sign.
    pub fn r2_up(
        &self,
        a: Dart,
        b: Dart,
        face: Option<usize>,
        over: Strand,
    ) -> Result<(Diagram, MoveRecord), DiagramError> {
        let (a, b) = self.choose_sides(a, b, face)?;
        let mut d = self.clone();
        let a2 = self.mate(a);
        let b2 = self.mate(b);
        let oa = self.is_outgoing(a);
        let ob = self.is_outgoing(b);
        let x = d.next_crossing;
        let y = x + 1;
        d.next_crossing += 2;
        let base = d.dart_bound();
        // Slots 0..3 are east, north, west, south.
        let (xe, xn, xw, xs) = (base, base + 1, base + 2, base + 3);
        let (ye, yn, yw, ys) = (base + 4, base + 5, base + 6, base + 7);
        let mk = |mate: Dart, id: CrossingId, slot: u8, out: bool| DartInfo {
            mate,
            site: Site::Crossing { id, slot },
            out,
        };
        for info in [
            mk(yw, x, 0, !ob),
            mk(a, x, 1, !oa),
            mk(b2, x, 2, ob),
            mk(ys, x, 3, oa),
            mk(b, y, 0, !ob),
            mk(a2, y, 1, oa),
            mk(xe, y, 2, ob),
            mk(xs, y, 3, !oa),
        ] {
            d.fresh_dart(info);
        }
        d.set_mate(a, xn);
        d.set_mate(a2, yn);
        d.set_mate(b, ye);
        d.set_mate(b2, xw);
        let over_even = over == Strand::B;
        d.crossings.insert(x, Crossing { ccw: [xe, xn, xw, xs], over_even });
        d.crossings.insert(y, Crossing { ccw: [ye, yn, yw, ys], over_even });
        let mut rec = MoveRecord::new(super::MoveKind::R2Up, self, &d);
        rec.crossings = vec![x, y];
        rec.bigon_dart = Some(xe);
        rec.sides = Some((a, b));
        Ok((d, rec))
    }

    pub(crate) fn set_mate(&mut self, d: Dart, m: Dart) {
        self.darts[d as usize].as_mut().expect("live dart").mate = m;
    }

    /// Removes the bigon through crossing dart `u`.
    pub fn r2_down(&self, u: Dart) -> Result<(Diagram, MoveRecord), DiagramError> {
        if !self.has_dart(u) {
            return Err(DiagramError::UnknownDart(u));
        }
        let bigon = self.bigon_at(u).ok_or(DiagramError::NoBigonAt(u))?;
        if !self.is_removable(&bigon) {
            return Err(DiagramError::NotRemovableBigon(bigon.x, bigon.y));
        }
        // The bigon's two edges disappear, joints on them included; with
        // several bigons on the same crossings this picks the named one.
        let mut edges = BTreeSet::new();
        for start in [bigon.u, bigon.v] {
            edges.insert(start);
            let mut e = self.mate(start);
            while let Site::Joint { partner } = self.site(e) {
                edges.insert(e);
                edges.insert(partner);
                e = self.mate(partner);
            }
            edges.insert(e);
        }
        let d = self.remove_crossings(&[bigon.x, bigon.y], &edges);
        let mut rec = MoveRecord::new(MoveKind::R2Down, self, &d);
        rec.crossings = vec![bigon.x, bigon.y];
        rec.bigon_dart = Some(bigon.u);
        Ok((d, rec))
    }

    /// Removes the R2 bigon bounded by crossings `x` and `y`. When they bound
    /// several removable bigons, `face` selects one.
    pub fn r2_down_crossings(
        &self,
        x: CrossingId,
        y: CrossingId,
        face: Option<usize>,
    ) -> Result<(Diagram, MoveRecord), DiagramError> {
        for c in [x, y] {
            if !self.crossings.contains_key(&c) {
                return Err(DiagramError::UnknownCrossing(c));
            }
        }
        let faces = self.faces();
        let candidates: Vec<Bigon> = self
            .removable_bigons()
            .into_iter()
            .filter(|b| (b.x, b.y) == (x, y) || (b.x, b.y) == (y, x))
            .filter(|b| face.is_none_or(|f| faces.get(f).is_some_and(|fd| fd.contains(&b.u))))
            .collect();
        match candidates.as_slice() {
            [] => Err(DiagramError::NotRemovableBigon(x, y)),
            [b] => self.r2_down(b.u),
            _ => Err(DiagramError::AmbiguousBigon(x, y)),
        }
    }

    /// Deletes crossings, and the darts in `edges`, and reconnects the
    /// strands that passed straight through them. A strand running entirely
    /// through deleted darts becomes a crossingless circle built from one of
    /// its arcs, preferring an arc with no dart in `edges`.
    pub(crate) fn remove_crossings(&self, ids: &[CrossingId], edges: &BTreeSet<Dart>) -> Diagram {
        let avoid = edges;
        let doomed: BTreeSet<Dart> = ids
            .iter()
            .flat_map(|id| self.crossings[id].ccw)
            .chain(edges.iter().copied())
            .collect();
        let mut d = self.clone();
        let mut visited = BTreeSet::new();
        for u in self.darts() {
            if doomed.contains(&u) || !doomed.contains(&self.mate(u)) {
                continue;
            }
            let mut w = self.mate(u);
            loop {
                visited.insert(w);
                let w2 = self.straight(w);
                visited.insert(w2);
                let t = self.mate(w2);
                if !doomed.contains(&t) {
                    d.set_mate(u, t);
                    break;
                }
                w = t;
            }
        }
        let mut kept = BTreeSet::new();
        for &start in &doomed {
            if visited.contains(&start) {
                continue;
            }
            let mut arcs = Vec::new();
            let mut p = start;
            loop {
                let q = self.mate(p);
                visited.insert(p);
                visited.insert(q);
                arcs.push((p, q));
                p = self.straight(q);
                if p == start {
                    break;
                }
            }
            let (p, q) = arcs
                .iter()
                .copied()
                .find(|(p, q)| !avoid.contains(p) && !avoid.contains(q))
                .unwrap_or(arcs[0]);
            d.darts[p as usize].as_mut().unwrap().site = Site::Joint { partner: q };
            d.darts[q as usize].as_mut().unwrap().site = Site::Joint { partner: p };
            kept.insert(p);
            kept.insert(q);
        }
        for &x in &doomed {
            if !kept.contains(&x) {
                d.darts[x as usize] = None;
            }
        }
        for id in ids {
            d.crossings.remove(id);
        }
        d
    }

    /// Applies a birth, death or saddle.
    pub fn morse(&self, event: MorseEvent) -> Result<(Diagram, MoveRecord), DiagramError> {
        match event {
            MorseEvent::Birth => {
                let mut d = self.clone();
                d.add_free_loop();
                Ok((d.clone(), MoveRecord::new(MoveKind::Birth, self, &d)))
            }
            MorseEvent::Death(dart) => {
                if !self.has_dart(dart) {
                    return Err(DiagramError::UnknownDart(dart));
                }
                let comp = self.components();
                let label = comp[&dart];
                let members: Vec<Dart> =
                    comp.iter().filter(|(_, c)| **c == label).map(|(d, _)| *d).collect();
                if members.iter().any(|&m| self.crossing_of(m).is_some()) {
                    return Err(DiagramError::DeathThroughCrossing(dart));
                }
                let mut d = self.clone();
                for m in members {
                    d.darts[m as usize] = None;
                }
                Ok((d.clone(), MoveRecord::new(MoveKind::Death, self, &d)))
            }
            MorseEvent::Saddle { a, b, face } => {
                let (a, b) = self.choose_sides(a, b, face)?;
                let mut d = self.clone();
                if d.is_outgoing(a) != d.is_outgoing(b) {
                    let comp = d.components();
                    let crossingless: BTreeSet<Dart> =
                        d.crossingless_components().into_iter().flatten().collect();
                    let flip = if crossingless.contains(&b) {
                        comp[&b]
                    } else if crossingless.contains(&a) && comp[&a] != comp[&b] {
                        comp[&a]
                    } else {
                        return Err(DiagramError::NonOrientableSaddle(a, b));
                    };
                    for (x, c) in &comp {
                        if *c == flip {
                            let info = d.darts[*x as usize].as_mut().unwrap();
                            info.out = !info.out;
                        }
                    }
                }
                let a2 = d.mate(a);
                let b2 = d.mate(b);
                d.set_mate(a, b2);
                d.set_mate(b2, a);
                d.set_mate(a2, b);
                d.set_mate(b, a2);
                let mut rec = MoveRecord::new(MoveKind::Saddle, self, &d);
                rec.sides = Some((a, b));
                Ok((d, rec))
            }
        }
    }
}
