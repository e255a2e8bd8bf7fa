//! The sliding movie on the two-component unlink whose induced map is the
//! identity modulo c but not over Z₂[c], plus the random R2 dances and the
//! sphere used as sanity checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::build_complex;
use crate::diagram::{CrossingId, Diagram, Strand};
use crate::matrix::{MatrixDump, PolyMatrix};
use crate::poly::Poly;

use super::file::{induced_self_map, DiagramSource, Event, Movie};
use super::map::ChainMap;
use super::MovieError;

/// Events of the star sequence at crossing `c`: an R2 move across the corner
/// of `c` between slots `corner` and `corner + 1`, creating two bigons, then
/// removal of the one bounded by `c`. Returns the events and the diagram
/// after them.
pub fn star_events(d: &Diagram, c: CrossingId, corner: usize) -> Result<(Vec<Event>, Diagram), MovieError> {
    let cr = *d.crossing(c).ok_or(crate::diagram::DiagramError::UnknownCrossing(c))?;
    let (a, b) = (cr.ccw[corner % 4], cr.ccw[(corner + 1) % 4]);
    let face = d.face_of(b);
    // The strand over at `c` stays over, so the lower bigon is removable.
    let over = if cr.is_over_slot((corner % 4) as u8) { Strand::A } else { Strand::B };
    let up = Event::R2Up { arc_a: a, arc_b: b, face, over };
    let (d1, rec) = d.r2_up(a, b, face, over)?;
    let lower = d1
        .removable_bigons()
        .into_iter()
        .find(|g| (g.x == c && rec.crossings.contains(&g.y)) || (g.y == c && rec.crossings.contains(&g.x)))
        .ok_or_else(|| MovieError::Inconsistent("no lower bigon after the R2 move".into()))?;
    let down = Event::R2Down { crossings: [lower.x, lower.y], face: d1.face_of(lower.u) };
    let (d2, _) = d1.r2_down(lower.u)?;
    Ok((vec![up, down], d2))
}

/// The star sequence as a self-map of `C(d)`.
pub fn star_sequence(d: &Diagram, c: CrossingId, corner: usize) -> Result<ChainMap, MovieError> {
    let (events, _) = star_events(d, c, corner)?;
    let mut map = ChainMap::identity(&build_complex(d)?);
    let mut cur = d.clone();
    for ev in &events {
        let (next, f) = ev.apply(&cur)?;
        map = map.then(&f);
        cur = next;
    }
    Ok(map.then(&super::morse::isotopy_map(&cur, d)?))
}

/// Which crossing of the slid pair carries the star sequence, and at which
/// corner. The default is the first crossing, at the corner opposite the
/// shared bigon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub second: bool,
    pub corner: usize,
}

impl Default for Placement {
    fn default() -> Self {
        Placement { second: false, corner: 1 }
    }
}

/// The sliding movie: the left circle of the unlink slides over the right
/// one, the star sequence runs at one of the two new crossings, and the circles slide back.
pub fn sliding_movie(p: Placement) -> Result<Movie, MovieError> {
    let u2 = Diagram::unlink(2);
    let slide = Event::R2Up { arc_a: 0, arc_b: 2, face: None, over: Strand::A };
    let (d1, rec) = u2.r2_up(0, 2, None, Strand::A)?;
    let lens = rec.bigon_dart.expect("r2 record");
    let g = d1.bigon_at(lens).expect("lens");
    // Crossings change under the star sequence; the lens dart at the untouched one survives.
    let (c, keep) = if p.second { (g.y, g.u) } else { (g.x, g.v) };
    let (star, d3) = star_events(&d1, c, p.corner)?;
    let lens3 = d3
        .bigon_at(keep)
        .filter(|b| d3.is_removable(b))
        .ok_or_else(|| MovieError::Inconsistent("lens lost during the star sequence".into()))?;
    let back = Event::R2Down { crossings: [lens3.x, lens3.y], face: d3.face_of(lens3.u) };
    let mut events = vec![slide];
    events.extend(star);
    events.push(back);
    Ok(Movie { initial: DiagramSource::Fixture("unlink_2".into()), events })
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    /// Canonical generators, in the order of the matrix rows and columns.
    pub generators: Vec<String>,
    pub phi: MatrixDump,
    pub difference: MatrixDump,
    pub identity_mod_c: bool,
    pub identity: bool,
    pub divisible_by_c: bool,
    pub bidegree_preserving: bool,
    pub invertible: bool,
    #[serde(skip)]
    pub phi_matrix: PolyMatrix,
    #[serde(skip)]
    pub map: ChainMap,
}

impl CounterexampleReport {
    pub fn refutes(&self) -> bool {
        self.identity_mod_c && !self.identity
    }
}

/// Whether a square matrix over Z₂[c] is invertible: its Smith form has
/// only unit factors on the full diagonal.
fn invertible(m: &PolyMatrix) -> bool {
    let s = crate::homology::snf(m);
    m.rows() == m.cols() && s.rank() == m.rows() && s.factors.iter().all(Poly::is_unit)
}

pub fn report_for(map: ChainMap) -> CounterexampleReport {
    let phi = map.to_dense();
    let id = PolyMatrix::identity(phi.rows());
    let diff = phi.add(&id);
    let divisible_by_c = diff.nonzero_entries().all(|(_, _, p)| p.divisible_by_c());
    let generators = map
        .source
        .levels
        .values()
        .flatten()
        .map(|g| g.state.to_string())
        .collect();
    CounterexampleReport {
        generators,
        phi: phi.to_triplets(),
        difference: diff.to_triplets(),
        identity_mod_c: phi.mod_c().is_identity(),
        identity: phi.is_identity(),
        divisible_by_c,
        bidegree_preserving: map.j_shift == 0 && map.is_homogeneous(),
        invertible: invertible(&phi),
        phi_matrix: phi,
        map,
    }
}

pub fn run_counterexample_at(p: Placement) -> Result<CounterexampleReport, MovieError> {
    Ok(report_for(induced_self_map(&sliding_movie(p)?)?))
}

pub fn run_counterexample() -> Result<CounterexampleReport, MovieError> {
    run_counterexample_at(Placement::default())
}

/// A random R2-only movie on the unlink: `ups` random bigon creations, then
/// removals of random removable bigons until no crossing is left. Restarts from scratch if the removals get stuck.
pub fn random_r2_dance(seed: u64, ups: usize) -> Result<Movie, MovieError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..64 {
        let mut d = Diagram::unlink(2);
        let mut events = Vec::new();
        for _ in 0..ups {
            let darts: Vec<_> = d.darts().collect();
            let mut moved = false;
            for _ in 0..32 {
                let a = *darts.choose(&mut rng).expect("darts");
                let b = *darts.choose(&mut rng).expect("darts");
                let over = if rng.gen_bool(0.5) { Strand::A } else { Strand::B };
                let faces = d.faces();
                // Faces are only meaningful once the arcs' components touch;
                // otherwise the move is specified by the arcs alone.
                let shared: Vec<usize> = (0..faces.len())
                    .filter(|&f| faces[f].contains(&a) && faces[f].contains(&b))
                    .collect();
                let face = shared.choose(&mut rng).copied();
                if let Ok((next, _)) = d.r2_up(a, b, face, over) {
                    events.push(Event::R2Up { arc_a: a, arc_b: b, face, over });
                    d = next;
                    moved = true;
                    break;
                }
            }
            if !moved {
                continue 'attempt;
            }
        }
        while d.crossing_count() > 0 {
            let bigons = d.removable_bigons();
            let Some(g) = bigons.choose(&mut rng) else { continue 'attempt };
            events.push(Event::R2Down { crossings: [g.x, g.y], face: d.face_of(g.u) });
            d = d.r2_down(g.u)?.0;
        }
        return Ok(Movie { initial: DiagramSource::Fixture("unlink_2".into()), events });
    }
    Err(MovieError::Inconsistent(format!("no removable dance found for seed {seed}")))
}

/// The sphere: a circle born and killed on the empty diagram.
pub fn sphere_movie() -> Movie {
    let d = Diagram::empty();
    let (_, rec) = d.morse(crate::diagram::MorseEvent::Birth).expect("birth");
    Movie {
        initial: DiagramSource::Fixture("empty".into()),
        events: vec![Event::Birth, Event::Death { circle: rec.created[0] }],
    }
}
