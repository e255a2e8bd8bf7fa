//! Elementary cobordism maps: births, deaths, saddles, planar isotopies and
//! the R2 equivalences, each as a chain map between full complexes.

use std::collections::BTreeMap;

use crate::complex::{build_complex, transition, ChainComplex, EnhancedState, Frobenius, Label};
use crate::diagram::{find_isomorphism_with, Dart, Diagram, Marking, MorseEvent, Strand};
use crate::matrix::PolyMatrix;
use crate::poly::Poly;

use super::map::ChainMap;
use super::r2::r2_equivalence;
use super::MovieError;

/// Builds a map from per-generator images, each a list of `c^k · state`.
fn assemble<F>(source: &ChainComplex, target: &ChainComplex, j_shift: i32, mut image: F) -> Result<ChainMap, MovieError>
where
    F: FnMut(&EnhancedState) -> Result<Vec<(EnhancedState, u32)>, MovieError>,
{
    let index = target.index();
    let mut blocks: BTreeMap<i32, PolyMatrix> = BTreeMap::new();
    for (&i, gens) in &source.levels {
        if target.rank(i) == 0 {
            continue;
        }
        let mut m = PolyMatrix::zeros(target.rank(i), gens.len());
        for (col, g) in gens.iter().enumerate() {
            for (state, k) in image(&g.state)? {
                let &(ti, row) = index
                    .get(&state)
                    .ok_or_else(|| MovieError::Inconsistent(format!("image {state} is not a generator")))?;
                if ti != i {
                    return Err(MovieError::Inconsistent(format!("image {state} changes homological degree")));
                }
                m.add_at(row, col, &Poly::monomial(k as usize));
            }
        }
        blocks.insert(i, m);
    }
    let f = ChainMap { source: source.clone(), target: target.clone(), j_shift, blocks };
    if !f.is_homogeneous() {
        return Err(MovieError::Inconsistent(format!("map is not homogeneous of shift {j_shift}")));
    }
    if !f.is_chain_map() {
        return Err(MovieError::Inconsistent("map does not commute with d".into()));
    }
    Ok(f)
}

/// Labels carried from `from` to `to` by shared darts, with `None` on
/// circles of `to` that share no dart with `from`.
fn carry(from: &Diagram, to: &Diagram, s: &EnhancedState) -> Result<Vec<Option<Label>>, MovieError> {
    let (rf, rt) = (from.resolve(&s.marking)?, to.resolve(&s.marking)?);
    let mut out = vec![None; rt.len()];
    for (c, circle) in rf.circles.iter().enumerate() {
        if let Some(k) = circle.iter().find_map(|&d| rt.circle_of(d)) {
            out[k] = Some(s.labels[c]);
        }
    }
    Ok(out)
}

/// Applies a Morse event and returns the new diagram with its map.
/// Birth and death have j-shift +1, a saddle −1.
pub fn morse_map(before: &Diagram, event: MorseEvent) -> Result<(Diagram, ChainMap), MovieError> {
    let (after, rec) = before.morse(event)?;
    let (cs, ct) = (build_complex(before)?, build_complex(&after)?);
    let f = match event {
        MorseEvent::Birth => assemble(&cs, &ct, 1, |s| {
            let labels = carry(before, &after, s)?.into_iter().map(|l| l.unwrap_or(Label::One)).collect();
            Ok(vec![(EnhancedState::new(s.marking.clone(), labels), 0)])
        })?,
        MorseEvent::Death(dart) => assemble(&cs, &ct, 1, |s| {
            let dead = before.resolve(&s.marking)?.circle_of(dart).expect("dart of the dying circle");
            let k = match s.labels[dead] {
                Label::X => 0,
                Label::One => 1,
            };
            let labels: Option<Vec<Label>> = carry(before, &after, s)?.into_iter().collect();
            let labels = labels.ok_or_else(|| MovieError::Inconsistent("unmatched circle after death".into()))?;
            Ok(vec![(EnhancedState::new(s.marking.clone(), labels), k)])
        })?,
        MorseEvent::Saddle { .. } => {
            let (a, b) = rec.sides.expect("saddle record");
            let touched = [a, b, before.mate(a), before.mate(b)];
            let table = Frobenius::standard();
            assemble(&cs, &ct, -1, |s| {
                let (rf, rt) = (before.resolve(&s.marking)?, after.resolve(&s.marking)?);
                Ok(transition(&rf, &rt, &touched, &s.labels, &table)
                    .into_iter()
                    .map(|(labels, k)| (EnhancedState::new(s.marking.clone(), labels), k))
                    .collect())
            })?
        }
    };
    Ok((after, f))
}

/// The identification of complexes induced by an isomorphism of diagrams.
pub fn isotopy_map(from: &Diagram, to: &Diagram) -> Result<ChainMap, MovieError> {
    isotopy_map_with(from, to, &BTreeMap::new())
}

/// As [`isotopy_map`], with crossingless loops paired by `loop_hint`.
pub fn isotopy_map_with(
    from: &Diagram,
    to: &Diagram,
    loop_hint: &BTreeMap<Dart, Dart>,
) -> Result<ChainMap, MovieError> {
    let iso = find_isomorphism_with(from, to, loop_hint).ok_or(MovieError::NotIsotopic)?;
    let (cs, ct) = (build_complex(from)?, build_complex(to)?);
    let (from_ids, to_ids) = (from.crossing_ids(), to.crossing_ids());
    assemble(&cs, &ct, 0, |s| {
        let mut markers = vec![None; to_ids.len()];
        for (k, id) in from_ids.iter().enumerate() {
            let t = to_ids.iter().position(|x| *x == iso.crossing_map[id]).expect("mapped crossing");
            markers[t] = Some(s.marking.0[k]);
        }
        let marking = Marking(markers.into_iter().map(|m| m.expect("bijective")).collect());
        let (rf, rt) = (from.resolve(&s.marking)?, to.resolve(&marking)?);
        let mut labels = vec![Label::One; rt.len()];
        for (c, t) in iso.circle_map(from, &rf, &rt).into_iter().enumerate() {
            labels[t] = s.labels[c];
        }
        Ok(vec![(EnhancedState::new(marking, labels), 0)])
    })
}

/// R2 move creating a bigon; the map is Ψ_inv.
pub fn r2_up_map(
    before: &Diagram,
    a: Dart,
    b: Dart,
    face: Option<usize>,
    over: Strand,
) -> Result<(Diagram, ChainMap), MovieError> {
    let (after, rec) = before.r2_up(a, b, face, over)?;
    let eq = r2_equivalence(before, &after, rec.bigon_dart.expect("r2 record"))?;
    Ok((after, eq.psi_inv))
}

/// R2 move removing the bigon through crossing dart `u`; the map is Ψ.
pub fn r2_down_map(before: &Diagram, u: Dart) -> Result<(Diagram, ChainMap), MovieError> {
    let (after, _) = before.r2_down(u)?;
    let eq = r2_equivalence(&after, before, u)?;
    Ok((after, eq.psi))
}
