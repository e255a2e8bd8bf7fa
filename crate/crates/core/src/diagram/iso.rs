//! Planar isotopy as diagram isomorphism.
//!
//! Two diagrams are identified when their crossings correspond with the
//! rotation, over/under data and orientations preserved and strands between
//! crossings match. Joints are ignored; crossingless circles sharing a dart
//! are matched, the others in order of their smallest darts.

use std::collections::{BTreeMap, VecDeque};

use super::{CrossingId, Dart, Diagram, Resolution, Site};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub crossing_map: BTreeMap<CrossingId, CrossingId>,
    /// Crossing darts only.
    pub dart_map: BTreeMap<Dart, Dart>,
    /// Smallest dart of each crossingless component, source to target.
    pub loop_map: BTreeMap<Dart, Dart>,
}

impl Isomorphism {
    /// For each circle of `from_res` (a resolution of the source diagram),
    /// the index of the corresponding circle of `to_res` (the target diagram
    /// under the transported marking).
    pub fn circle_map(
        &self,
        source: &Diagram,
        from_res: &Resolution,
        to_res: &Resolution,
    ) -> Vec<usize> {
        let loops = source.crossingless_components();
        from_res
            .circles
            .iter()
            .map(|circle| {
                if let Some(d) = circle.iter().find(|d| self.dart_map.contains_key(d)) {
                    return to_res.circle_of(self.dart_map[d]).expect("mapped dart");
                }
                let comp = loops
                    .iter()
                    .find(|c| c.contains(&circle[0]))
                    .expect("crossingless circle");
                to_res
                    .circle_of(self.loop_map[&comp[0]])
                    .expect("mapped loop")
            })
            .collect()
    }
}

fn slot_of(d: &Diagram, x: Dart) -> (CrossingId, u8) {
    match d.site(x) {
        Site::Crossing { id, slot } => (id, slot),
        Site::Joint { .. } => unreachable!("crossing dart expected"),
    }
}

/// Tries to extend the seed `from_dart -> to_dart` to an isomorphism of the
/// connected piece containing `from_dart`.
fn extend(
    from: &Diagram,
    to: &Diagram,
    seed: (Dart, Dart),
    dart_map: &mut BTreeMap<Dart, Dart>,
    crossing_map: &mut BTreeMap<CrossingId, CrossingId>,
) -> bool {
    let mut queue = VecDeque::from([seed]);
    while let Some((u, t)) = queue.pop_front() {
        match dart_map.get(&u) {
            Some(&m) if m == t => continue,
            Some(_) => return false,
            None => {}
        }
        if dart_map.values().any(|&m| m == t) {
            return false;
        }
        let (cu, su) = slot_of(from, u);
        let (ct, st) = slot_of(to, t);
        match crossing_map.get(&cu) {
            Some(&m) if m != ct => return false,
            Some(_) => {}
            None => {
                if crossing_map.values().any(|&m| m == ct) {
                    return false;
                }
                crossing_map.insert(cu, ct);
            }
        }
        let (xu, xt) = (&from.crossings[&cu], &to.crossings[&ct]);
        for k in 0..4u8 {
            let du = xu.ccw[((su + k) % 4) as usize];
            let dt = xt.ccw[((st + k) % 4) as usize];
            if xu.is_over_slot((su + k) % 4) != xt.is_over_slot((st + k) % 4)
                || from.is_outgoing(du) != to.is_outgoing(dt)
            {
                return false;
            }
            match dart_map.get(&du) {
                Some(&m) if m != dt => return false,
                Some(_) => {}
                None => {
                    dart_map.insert(du, dt);
                    queue.push_back((from.far_end(du), to.far_end(dt)));
                }
            }
        }
    }
    true
}

/// Finds an isomorphism, preferring one that fixes dart ids shared by both
/// diagrams.
pub fn find_isomorphism(from: &Diagram, to: &Diagram) -> Option<Isomorphism> {
    find_isomorphism_with(from, to, &BTreeMap::new())
}

/// As [`find_isomorphism`], but crossingless loops are first paired by
/// `loop_hint`, which sends a dart of a loop of `from` to a dart of a loop
/// of `to`. Loops carry no structure, so their pairing is otherwise a
/// choice.
pub fn find_isomorphism_with(
    from: &Diagram,
    to: &Diagram,
    loop_hint: &BTreeMap<Dart, Dart>,
) -> Option<Isomorphism> {
    if from.crossing_count() != to.crossing_count() {
        return None;
    }
    let from_loops = from.crossingless_components();
    let to_loops = to.crossingless_components();
    if from_loops.len() != to_loops.len() {
        return None;
    }
    let crossing_darts = |d: &Diagram| -> Vec<Dart> {
        d.darts()
            .filter(|&x| matches!(d.site(x), Site::Crossing { .. }))
            .collect()
    };
    let from_darts = crossing_darts(from);
    let to_darts = crossing_darts(to);

    let mut dart_map = BTreeMap::new();
    let mut crossing_map = BTreeMap::new();
    for &u in &from_darts {
        if dart_map.contains_key(&u) {
            continue;
        }
        let mut candidates: Vec<Dart> = to_darts
            .iter()
            .copied()
            .filter(|t| !dart_map.values().any(|m| m == t))
            .collect();
        if let Some(p) = candidates.iter().position(|&t| t == u) {
            candidates.remove(p);
            candidates.insert(0, u);
        }
        let found = candidates.into_iter().find_map(|t| {
            let mut dm = dart_map.clone();
            let mut cm = crossing_map.clone();
            extend(from, to, (u, t), &mut dm, &mut cm).then_some((dm, cm))
        });
        let (dm, cm) = found?;
        dart_map = dm;
        crossing_map = cm;
    }
    // Hinted loops first, then loops sharing a dart; the rest in order.
    let mut loop_map = BTreeMap::new();
    let mut free: Vec<&Vec<Dart>> = Vec::new();
    let mut taken = vec![false; to_loops.len()];
    let hinted = |a: &Vec<Dart>| {
        a.iter()
            .find_map(|d| loop_hint.get(d))
            .and_then(|t| to_loops.iter().position(|b| b.contains(t)))
    };
    let mut rest_from = Vec::new();
    for a in &from_loops {
        match hinted(a) {
            Some(k) if !taken[k] => {
                taken[k] = true;
                loop_map.insert(a[0], to_loops[k][0]);
            }
            _ => rest_from.push(a),
        }
    }
    for a in rest_from {
        match to_loops.iter().position(|b| b.iter().any(|d| a.contains(d))) {
            Some(k) if !taken[k] => {
                taken[k] = true;
                loop_map.insert(a[0], to_loops[k][0]);
            }
            _ => free.push(a),
        }
    }
    let rest = to_loops.iter().zip(&taken).filter(|(_, t)| !**t).map(|(b, _)| b);
    for (a, b) in free.into_iter().zip(rest) {
        loop_map.insert(a[0], b[0]);
    }
    Some(Isomorphism { crossing_map, dart_map, loop_map })
}
