//! Gaussian cancellation of unit differential components, with the chain
//! contraction it induces.
//!
//! Cancelling `a → b` (coefficient 1, `a` at level `i`) in
//!
//! ```text
//!   [a ⊕ E] --[[1, δ], [γ, ε]]--> [b ⊕ F]
//! ```
//!
//! leaves `E --(ε + γδ)--> F`. Over Z₂ the projection sends `b ↦ γ`, the
//! inclusion sends `e ↦ e + δ(e)·a`, and the homotopy is `b ↦ a`.

use std::collections::BTreeMap;

use crate::complex::ChainComplex;
use crate::matrix::PolyMatrix;
use crate::poly::Poly;

use super::map::{ChainMap, Homotopy};
use super::MovieError;

/// `proj ∘ incl = id` on `small`, and `id − incl ∘ proj = d h + h d` on `big`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub big: ChainComplex,
    pub small: ChainComplex,
    pub proj: ChainMap,
    pub incl: ChainMap,
    pub homotopy: Homotopy,
}

impl Contraction {
    pub fn verify(&self) -> bool {
        self.proj.is_chain_map()
            && self.incl.is_chain_map()
            && self.incl.then(&self.proj).is_identity()
            && self
                .homotopy
                .witnesses(&self.big, &ChainMap::identity(&self.big), &self.proj.then(&self.incl))
    }
}

/// A sequence of cancellations applied to a fixed complex, with the
/// composite contraction data kept current. Matrices stay indexed by the
/// generators of the original complex; cancelled generators are marked dead
/// and their rows and columns zeroed, and only [`Reduction::current`] and
/// [`Reduction::contraction`] compact.
#[derive(Debug, Clone)]
pub struct Reduction {
    big: ChainComplex,
    alive: BTreeMap<i32, Vec<bool>>,
    /// The current differential out of level `i`.
    d: BTreeMap<i32, PolyMatrix>,
    /// `big → current` per level; dead rows are zero.
    proj: BTreeMap<i32, PolyMatrix>,
    /// `current → big` per level; dead columns are zero.
    incl: BTreeMap<i32, PolyMatrix>,
    /// On `big`, level `i` to `i − 1`.
    homotopy: BTreeMap<i32, PolyMatrix>,
}

fn zero_row(m: &mut PolyMatrix, r: usize) {
    for c in 0..m.cols() {
        m.set(r, c, Poly::zero());
    }
}

fn zero_col(m: &mut PolyMatrix, c: usize) {
    for r in 0..m.rows() {
        m.set(r, c, Poly::zero());
    }
}

impl Reduction {
    pub fn new(cx: &ChainComplex) -> Self {
        let id: BTreeMap<i32, PolyMatrix> = cx
            .levels
            .iter()
            .map(|(&i, g)| (i, PolyMatrix::identity(g.len())))
            .collect();
        Reduction {
            alive: cx.levels.iter().map(|(&i, g)| (i, vec![true; g.len()])).collect(),
            d: cx.levels.keys().map(|&i| (i, cx.differential(i))).collect(),
            big: cx.clone(),
            proj: id.clone(),
            incl: id,
            homotopy: BTreeMap::new(),
        }
    }

    pub fn big(&self) -> &ChainComplex {
        &self.big
    }

    /// Whether generator `k` of level `i` of the original complex survives.
    pub fn is_alive(&self, i: i32, k: usize) -> bool {
        self.alive.get(&i).is_some_and(|a| a.get(k).copied().unwrap_or(false))
    }

    /// The current differential out of level `i`, indexed by original
    /// generators.
    pub fn differential(&self, i: i32) -> PolyMatrix {
        self.d.get(&i).cloned().unwrap_or_else(|| PolyMatrix::zeros(self.big.rank(i + 1), self.big.rank(i)))
    }

    /// Entry of the current differential from `col` (level `i`) to `row`.
    pub fn entry(&self, i: i32, row: usize, col: usize) -> Poly {
        self.d.get(&i).map_or_else(Poly::zero, |m| m.get(row, col).clone())
    }

    fn survivors(&self, i: i32) -> Vec<usize> {
        self.alive.get(&i).map_or_else(Vec::new, |a| (0..a.len()).filter(|&k| a[k]).collect())
    }

    /// The reduced complex, compacted.
    pub fn current(&self) -> ChainComplex {
        let levels = self
            .big
            .levels
            .iter()
            .map(|(&i, g)| (i, self.survivors(i).into_iter().map(|k| g[k].clone()).collect()))
            .collect();
        let differentials = self
            .big
            .differentials
            .keys()
            .map(|&i| (i, self.differential(i).select(&self.survivors(i + 1), &self.survivors(i))))
            .collect();
        ChainComplex { levels, differentials }
    }

    /// Cancels generator `a` at level `i` against `b` at level `i + 1`,
    /// both numbered as in the original complex.
    pub fn cancel(&mut self, i: i32, a: usize, b: usize) -> Result<(), MovieError> {
        if !self.is_alive(i, a) || !self.is_alive(i + 1, b) {
            return Err(MovieError::Inconsistent(format!("cancelling a dead generator at level {i}")));
        }
        let coeff = self.entry(i, b, a);
        if !coeff.is_one() {
            return Err(MovieError::NotUnit { level: i, from: a, to: b, coeff });
        }
        let d = self.d.get_mut(&i).expect("level");
        let gamma: Vec<(usize, Poly)> =
            (0..d.rows()).filter(|&r| r != b && !d.get(r, a).is_zero()).map(|r| (r, d.get(r, a).clone())).collect();
        let delta: Vec<(usize, Poly)> =
            (0..d.cols()).filter(|&c| c != a && !d.get(b, c).is_zero()).map(|c| (c, d.get(b, c).clone())).collect();

        // Homotopy first, from the old inclusion and projection.
        let inc_i = &self.incl[&i];
        let proj_next = &self.proj[&(i + 1)];
        let h = self
            .homotopy
            .entry(i + 1)
            .or_insert_with(|| PolyMatrix::zeros(self.big.rank(i), self.big.rank(i + 1)));
        for r in 0..inc_i.rows() {
            let x = inc_i.get(r, a);
            if x.is_zero() {
                continue;
            }
            for c in 0..proj_next.cols() {
                let y = proj_next.get(b, c);
                if !y.is_zero() {
                    h.add_at(r, c, &(x * y));
                }
            }
        }

        // Differential: ε + γδ on the survivors.
        for (r, g) in &gamma {
            d.add_row_multiple(*r, b, g);
        }
        zero_row(d, b);
        zero_col(d, a);
        if let Some(prev) = self.d.get_mut(&(i - 1)) {
            zero_row(prev, a);
        }
        if let Some(next) = self.d.get_mut(&(i + 1)) {
            zero_col(next, b);
        }

        // Projection: drop a; b ↦ γ.
        zero_row(self.proj.get_mut(&i).expect("level"), a);
        let p_next = self.proj.get_mut(&(i + 1)).expect("level");
        for (r, g) in &gamma {
            p_next.add_row_multiple(*r, b, g);
        }
        zero_row(p_next, b);

        // Inclusion: e ↦ e + δ(e)·a; drop b.
        let n_i = self.incl.get_mut(&i).expect("level");
        for (c, x) in &delta {
            n_i.add_col_multiple(*c, a, x);
        }
        zero_col(n_i, a);
        zero_col(self.incl.get_mut(&(i + 1)).expect("level"), b);

        self.alive.get_mut(&i).expect("level")[a] = false;
        self.alive.get_mut(&(i + 1)).expect("level")[b] = false;
        Ok(())
    }

    pub fn contraction(&self) -> Contraction {
        let mut small = self.current();
        small.levels.retain(|_, g| !g.is_empty());
        small.differentials.retain(|&i, m| m.rows() > 0 && m.cols() > 0 && small.levels.contains_key(&i));
        let all = |i: i32| -> Vec<usize> { (0..self.big.rank(i)).collect() };
        let nonempty = |m: &PolyMatrix| m.rows() > 0 && m.cols() > 0;
        let proj = self
            .proj
            .iter()
            .map(|(&i, m)| (i, m.select(&self.survivors(i), &all(i))))
            .filter(|(_, m)| nonempty(m))
            .collect();
        let incl = self
            .incl
            .iter()
            .map(|(&i, m)| (i, m.select(&all(i), &self.survivors(i))))
            .filter(|(_, m)| nonempty(m))
            .collect();
        let homotopy = self.homotopy.iter().filter(|(_, m)| nonempty(m)).map(|(&i, m)| (i, m.clone())).collect();
        Contraction {
            proj: ChainMap { source: self.big.clone(), target: small.clone(), j_shift: 0, blocks: proj },
            incl: ChainMap { source: small.clone(), target: self.big.clone(), j_shift: 0, blocks: incl },
            homotopy: Homotopy { blocks: homotopy },
            big: self.big.clone(),
            small,
        }
    }
}

/// Cancels the unit component from generator `a` (level `i`) to `b`
/// (level `i + 1`).
pub fn gaussian_cancel(
    cx: &ChainComplex,
    i: i32,
    a: usize,
    b: usize,
) -> Result<(ChainComplex, Contraction), MovieError> {
    let mut r = Reduction::new(cx);
    r.cancel(i, a, b)?;
    let c = r.contraction();
    Ok((c.small.clone(), c))
}
