//! Chain equivalence for a second Reidemeister move, derived by cancelling
//! the unit components created by the bigon.
//!
//! Let `D` be the diagram without the bigon and `D'` the one with it, the
//! bigon bounded by crossings `x`, `y`. At those two crossings the markers
//! select one of four corners of the cube of `D'`:
//!
//! - `circ`: both smoothings run along the bigon, leaving a small circle;
//! - `flat`: both flipped, a copy of the resolutions of `D`;
//! - `merge`: reached from `circ` by flipping its positive marker, which
//!   merges the small circle away;
//! - `split`: flipping the negative marker of `circ` back to positive,
//!   from which the small circle splits off.
//!
//! The first pass cancels each `circ` generator whose small circle is `1`
//! against its merge partner, the second each `circ` generator whose small
//! circle is `X` against its split partner. What survives is the `flat`
//! corner, identified with `C(D)` by matching circles through shared darts.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{build_complex, ChainComplex, EnhancedState, Generator, Label};
use crate::diagram::{CrossingId, Dart, Diagram, Marker, Marking};
use crate::homology::snf;
use crate::matrix::PolyMatrix;

use super::cancel::{Contraction, Reduction};
use super::map::{ChainMap, Homotopy};
use super::MovieError;

#[derive(Debug, Clone)]
pub struct R2Equivalence {
    /// `C(D)`.
    pub small: ChainComplex,
    /// `C(D')`.
    pub big: ChainComplex,
    /// Ψ: `C(D') → C(D)`.
    pub psi: ChainMap,
    /// Ψ_inv: `C(D) → C(D')`.
    pub psi_inv: ChainMap,
    /// `id − Ψ_inv ∘ Ψ = d h + h d` on `C(D')`.
    pub homotopy: Homotopy,
    pub contraction: Contraction,
}

impl R2Equivalence {
    pub fn verify(&self) -> bool {
        self.psi.is_chain_map()
            && self.psi_inv.is_chain_map()
            && self.psi.is_homogeneous()
            && self.psi_inv.is_homogeneous()
            && self.psi_inv.then(&self.psi).is_identity()
            && self.homotopy.witnesses(
                &self.big,
                &ChainMap::identity(&self.big),
                &self.psi.then(&self.psi_inv),
            )
    }

    /// The complementary summand `ker Ψ` of `C(D')`, in a homogeneous basis
    /// read off the Smith form of Ψ. Generators are labelled by the state
    /// at the matching pivot position.
    pub fn contractible_summand(&self) -> Result<ChainComplex, MovieError> {
        let mut levels = BTreeMap::new();
        let mut bases = BTreeMap::new();
        for (&i, gens) in &self.big.levels {
            let s = snf(&self.psi.block(i));
            if s.factors.iter().any(|f| !f.is_unit()) {
                return Err(MovieError::Inconsistent("Ψ is not split surjective".into()));
            }
            let kernel: Vec<usize> = (s.rank()..gens.len()).collect();
            levels.insert(
                i,
                kernel.iter().map(|&k| gens[s.col_perm[k]].clone()).collect::<Vec<Generator>>(),
            );
            bases.insert(i, (s, kernel));
        }
        let mut differentials = BTreeMap::new();
        for (&i, (s, kernel)) in &bases {
            let Some((t, tk)) = bases.get(&(i + 1)) else { continue };
            let full = t.v_inv.mul(&self.big.differential(i)).mul(&s.v);
            let leak: Vec<usize> = (0..t.rank()).collect();
            if !full.select(&leak, kernel).is_zero() {
                return Err(MovieError::Inconsistent("d does not preserve ker Ψ".into()));
            }
            differentials.insert(i, full.select(tk, kernel));
        }
        levels.retain(|_, g: &mut Vec<Generator>| !g.is_empty());
        differentials.retain(|i, m: &mut PolyMatrix| levels.contains_key(i) && m.rows() > 0);
        Ok(ChainComplex { levels, differentials })
    }
}

/// Markers at `x` and `y` for the corner whose smoothings run along the
/// bigon through crossing dart `u` (at `x`).
fn circle_corner(big: &Diagram, u: Dart) -> Result<(Marker, Marker), MovieError> {
    let b = big
        .bigon_at(u)
        .ok_or(MovieError::Diagram(crate::diagram::DiagramError::NoBigonAt(u)))?;
    let along = |d: Dart, partner: Dart| {
        [Marker::Positive, Marker::Negative]
            .into_iter()
            .find(|&m| big.smoothing_partner(d, m) == partner)
            .expect("corner darts are adjacent")
    };
    Ok((along(b.u, big.far_end(b.v)), along(b.v, big.far_end(b.u))))
}

fn marker_of(s: &EnhancedState, k: usize) -> Marker {
    s.marking.0[k]
}

/// Equivalence between `C(small)` and `C(big)`, where `big` has the
/// removable bigon through crossing dart `u` and `small` is `big` with that
/// bigon removed (or, equivalently, `big` is an R2 move applied to `small`).
/// Darts of `small` must all be darts of `big`.
pub fn r2_equivalence(small: &Diagram, big: &Diagram, u: Dart) -> Result<R2Equivalence, MovieError> {
    let bigon = big
        .bigon_at(u)
        .ok_or(MovieError::Diagram(crate::diagram::DiagramError::NoBigonAt(u)))?;
    let (x, y) = (bigon.x, bigon.y);
    let ids = big.crossing_ids();
    let kx = ids.iter().position(|&c| c == x).expect("crossing");
    let ky = ids.iter().position(|&c| c == y).expect("crossing");
    let (cx_m, cy_m) = circle_corner(big, bigon.u)?;
    let (kp, kn) = match (cx_m, cy_m) {
        (Marker::Positive, Marker::Negative) => (kx, ky),
        (Marker::Negative, Marker::Positive) => (ky, kx),
        _ => return Err(MovieError::Inconsistent("circle corner is not mixed".into())),
    };
    let in_circ = |s: &EnhancedState| marker_of(s, kx) == cx_m && marker_of(s, ky) == cy_m;

    let c_big = build_complex(big)?;
    let c_small = build_complex(small)?;

    // Label of the small circle, per marking of the circle corner.
    let mut small_circle: HashMap<Marking, usize> = HashMap::new();
    for g in c_big.levels.values().flatten() {
        if in_circ(&g.state) && !small_circle.contains_key(&g.state.marking) {
            let res = big.resolve(&g.state.marking)?;
            small_circle.insert(g.state.marking.clone(), res.circle_of(bigon.u).expect("dart"));
        }
    }
    let circ_with = |label: Label| -> Vec<EnhancedState> {
        c_big
            .levels
            .values()
            .flatten()
            .filter(|g| in_circ(&g.state) && g.state.labels[small_circle[&g.state.marking]] == label)
            .map(|g| g.state.clone())
            .collect()
    };

    let big_index = c_big.index();
    let mut red = Reduction::new(&c_big);
    for g in circ_with(Label::One) {
        let (i, a) = big_index[&g];
        let mut partner = g.marking.clone();
        partner.0[kp] = Marker::Negative;
        let b = (0..c_big.rank(i + 1))
            .find(|&r| {
                red.is_alive(i + 1, r)
                    && c_big.generators(i + 1)[r].state.marking == partner
                    && red.entry(i, r, a).is_one()
            })
            .ok_or_else(|| MovieError::Inconsistent(format!("no merge partner for {g}")))?;
        red.cancel(i, a, b)?;
    }
    for g in circ_with(Label::X) {
        let (i, b) = big_index[&g];
        let mut partner = g.marking.clone();
        partner.0[kn] = Marker::Positive;
        let a = (0..c_big.rank(i - 1))
            .find(|&c| {
                red.is_alive(i - 1, c)
                    && c_big.generators(i - 1)[c].state.marking == partner
                    && red.entry(i - 1, b, c).is_one()
            })
            .ok_or_else(|| MovieError::Inconsistent(format!("no split partner for {g}")))?;
        red.cancel(i - 1, a, b)?;
    }
    let contraction = red.contraction();
    let reduced = &contraction.small;
    let flat = (cx_m.flipped(), cy_m.flipped());
    if reduced
        .levels
        .values()
        .flatten()
        .any(|g| (marker_of(&g.state, kx), marker_of(&g.state, ky)) != flat)
    {
        return Err(MovieError::Inconsistent("cancellation left non-flat generators".into()));
    }

    // ψ⁻¹: C(D) → reduced, matching circles through shared darts.
    let small_ids = small.crossing_ids();
    let reduced_index = reduced.index();
    let mut psi_inv_blocks: BTreeMap<i32, PolyMatrix> = reduced
        .levels
        .iter()
        .map(|(&i, g)| (i, PolyMatrix::zeros(g.len(), c_small.rank(i))))
        .collect();
    let mut hit = 0;
    for (&i, gens) in &c_small.levels {
        for (col, g) in gens.iter().enumerate() {
            let marking = Marking(
                ids.iter()
                    .map(|&id| match id {
                        _ if id == x => flat.0,
                        _ if id == y => flat.1,
                        _ => {
                            let k = small_ids.iter().position(|&c| c == id).expect("shared crossing");
                            g.state.marking.0[k]
                        }
                    })
                    .collect(),
            );
            let res_small = small.resolve(&g.state.marking)?;
            let res_big = big.resolve(&marking)?;
            let mut labels: Vec<Option<Label>> = vec![None; res_big.len()];
            for (c, circle) in res_small.circles.iter().enumerate() {
                let k = res_big
                    .circle_of(circle[0])
                    .ok_or_else(|| MovieError::Inconsistent("dart missing after R2".into()))?;
                if labels[k].replace(g.state.labels[c]).is_some() {
                    return Err(MovieError::Inconsistent("circles merged by R2 identification".into()));
                }
            }
            let labels: Option<Vec<Label>> = labels.into_iter().collect();
            let labels =
                labels.ok_or_else(|| MovieError::Inconsistent("unmatched circle after R2".into()))?;
            let target = EnhancedState::new(marking, labels);
            let &(ti, row) = reduced_index
                .get(&target)
                .ok_or_else(|| MovieError::Inconsistent(format!("{target} not in reduced complex")))?;
            if ti != i {
                return Err(MovieError::Inconsistent("R2 identification shifts levels".into()));
            }
            psi_inv_blocks.get_mut(&i).expect("level").set(row, col, crate::poly::Poly::one());
            hit += 1;
        }
    }
    if hit != reduced.total_rank() {
        return Err(MovieError::Inconsistent("R2 identification is not bijective".into()));
    }
    let psi_inv_small = ChainMap {
        source: c_small.clone(),
        target: reduced.clone(),
        j_shift: 0,
        blocks: psi_inv_blocks.clone(),
    };
    if !psi_inv_small.is_chain_map() || !psi_inv_small.is_homogeneous() {
        return Err(MovieError::Inconsistent("reduced differential differs from C(D)".into()));
    }
    let psi_small = ChainMap {
        source: reduced.clone(),
        target: c_small.clone(),
        j_shift: 0,
        blocks: psi_inv_blocks.iter().map(|(&i, m)| (i, m.transpose())).collect(),
    };
    let psi = contraction.proj.then(&psi_small);
    let psi_inv = psi_inv_small.then(&contraction.incl);
    let eq = R2Equivalence {
        small: c_small,
        big: c_big,
        psi,
        psi_inv,
        homotopy: contraction.homotopy.clone(),
        contraction,
    };
    if !eq.verify() {
        return Err(MovieError::Inconsistent("R2 equivalence fails verification".into()));
    }
    Ok(eq)
}

/// Crossings of the bigon, for callers that only have them by id.
pub fn bigon_dart(big: &Diagram, x: CrossingId, y: CrossingId) -> Option<Dart> {
    big.removable_bigons()
        .into_iter()
        .find(|b| (b.x, b.y) == (x, y) || (b.x, b.y) == (y, x))
        .map(|b| b.u)
}
