//! Diagram constructors: braid closures and the named fixtures.

use std::collections::BTreeMap;

use rand::Rng;

use super::{Crossing, CrossingId, Dart, DartInfo, Diagram, DiagramError, Site, Strand};

/// Braid generator `σ_gen` (1-based) or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidLetter {
    pub gen: usize,
    pub positive: bool,
}

impl BraidLetter {
    pub fn pos(gen: usize) -> Self {
        BraidLetter { gen, positive: true }
    }

    pub fn neg(gen: usize) -> Self {
        BraidLetter { gen, positive: false }
    }
}

/// Closure of a braid on `strands` upward-oriented strands.
///
/// Crossing `t` owns darts `4t..4t+4` in the order NE, NW, SW, SE. A positive
/// generator puts the SW→NE strand on top, which is a positive crossing.
/// Strand positions untouched by the word close up into crossingless circles.
pub fn braid_closure(strands: usize, word: &[BraidLetter]) -> Diagram {
    assert!(
        word.iter().all(|l| l.gen >= 1 && l.gen < strands),
        "braid generator out of range"
    );
    let mut infos: Vec<Option<DartInfo>> = Vec::new();
    let mut crossings = BTreeMap::new();
    let mut bottom: Vec<Option<Dart>> = vec![None; strands];
    let mut top: Vec<Option<Dart>> = vec![None; strands];
    let mut mates: Vec<(Dart, Dart)> = Vec::new();

    for (t, letter) in word.iter().enumerate() {
        let base = (4 * t) as Dart;
        let (ne, nw, sw, se) = (base, base + 1, base + 2, base + 3);
        for (slot, out) in [(0u8, true), (1, true), (2, false), (3, false)] {
            infos.push(Some(DartInfo {
                mate: Dart::MAX,
                site: Site::Crossing { id: t as CrossingId, slot },
                out,
            }));
        }
        crossings.insert(
            t as CrossingId,
            Crossing { ccw: [ne, nw, sw, se], over_even: letter.positive },
        );
        let (l, r) = (letter.gen - 1, letter.gen);
        for (pos, incoming) in [(l, sw), (r, se)] {
            match top[pos] {
                Some(prev) => mates.push((prev, incoming)),
                None => bottom[pos] = Some(incoming),
            }
        }
        top[l] = Some(nw);
        top[r] = Some(ne);
    }
    for pos in 0..strands {
        if let (Some(t), Some(b)) = (top[pos], bottom[pos]) {
            mates.push((t, b));
        }
    }
    for (p, q) in mates {
        infos[p as usize].as_mut().unwrap().mate = q;
        infos[q as usize].as_mut().unwrap().mate = p;
    }
    let mut d = Diagram {
        darts: infos,
        next_crossing: word.len() as CrossingId,
        crossings,
    };
    for _ in top.iter().take(strands).filter(|t| t.is_none()) {
        d.add_free_loop();
    }
    d
}

/// Names accepted by [`fixture`].
pub fn fixture_names() -> &'static [&'static str] {
    &[
        "empty",
        "unknot",
        "unknot_1",
        "unlink_2",
        "hopf_positive",
        "hopf_negative",
        "trefoil_right",
        "trefoil_left",
        "figure_eight",
    ]
}

pub fn fixture(name: &str) -> Result<Diagram, DiagramError> {
    use BraidLetter as L;
    Ok(match name {
        "empty" => Diagram::empty(),
        "unknot" => Diagram::unlink(1),
        "unknot_1" => braid_closure(2, &[L::pos(1)]),
        "unlink_2" => Diagram::unlink(2),
        "hopf_positive" => braid_closure(2, &[L::pos(1), L::pos(1)]),
        "hopf_negative" => braid_closure(2, &[L::neg(1), L::neg(1)]),
        "trefoil_right" => braid_closure(2, &[L::pos(1); 3]),
        "trefoil_left" => braid_closure(2, &[L::neg(1); 3]),
        "figure_eight" => braid_closure(3, &[L::pos(1), L::neg(2), L::pos(1), L::neg(2)]),
        other => return Err(DiagramError::UnknownFixture(other.to_string())),
    })
}

/// A random diagram with at most `max_crossings` crossings: the closure of a
/// random braid, sometimes followed by R2 moves between random arcs so that
/// non-braid-like rotation systems also appear.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, max_crossings: usize) -> Diagram {
    let strands = rng.gen_range(1..=4usize);
    let len = if strands == 1 { 0 } else { rng.gen_range(0..=max_crossings) };
    let word: Vec<BraidLetter> = (0..len)
        .map(|_| BraidLetter { gen: rng.gen_range(1..strands), positive: rng.gen() })
        .collect();
    let mut d = braid_closure(strands, &word);
    while d.crossing_count() + 2 <= max_crossings && rng.gen_bool(0.4) {
        let darts: Vec<Dart> = d.darts().collect();
        let moved = (0..20).find_map(|_| {
            let a = darts[rng.gen_range(0..darts.len())];
            let b = darts[rng.gen_range(0..darts.len())];
            let over = if rng.gen() { Strand::A } else { Strand::B };
            d.r2_up(a, b, None, over).ok()
        });
        match moved {
            Some((next, _)) => d = next,
            None => break,
        }
    }
    d
}
