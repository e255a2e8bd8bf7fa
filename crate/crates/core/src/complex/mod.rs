//! Bigraded chain complex over Z₂[c] generated by enhanced states.
//!
//! Generators are states with `c_exp = 0`; powers of `c` live in the matrix
//! entries. Because an entry `c^k` joins a generator at `(i, j)` to one at
//! `(i + 1, j - 2k)`, differentials are stored per homological degree `i`
//! (rows indexed by generators at `i + 1`), and every generator carries its
//! `j`. Entries are homogeneous: `j(target) + 2k = j(source)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Dart, Diagram, DiagramError, Marker, Marking, Resolution};
use crate::matrix::{MatrixDump, PolyMatrix};
use crate::poly::Poly;

#[cfg(test)]
mod tests;

pub const DEFAULT_CROSSING_BOUND: usize = 12;
/// Differentials are dense; a level pair with more entries is refused.
pub const DENSE_ENTRY_BOUND: usize = 1 << 26;

pub type Bidegree = (i32, i32);

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("differential at level {level} would have {entries} dense entries, more than {bound}")]
    TooLarge { level: i32, entries: usize, bound: usize },
    #[error("diagram has {count} crossings, more than the bound {bound}")]
    TooManyCrossings { count: usize, bound: usize },
    #[error("non-integral grading (w={writhe}, sigma={sigma}, tau={tau})")]
    Parity { writhe: i32, sigma: i32, tau: i32 },
    #[error("labels do not match the resolution ({labels} labels, {circles} circles)")]
    LabelCount { labels: usize, circles: usize },
    #[error("incidence {from} -> {to} does not preserve j")]
    NotHomogeneous { from: String, to: String },
    #[error("incident state {0} is not a generator")]
    MissingGenerator(String),
    #[error("d∘d is nonzero starting at level {0}")]
    NotAComplex(i32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    One,
    X,
}

impl Label {
    /// Contribution to τ.
    pub fn tau(self) -> i32 {
        match self {
            Label::One => -1,
            Label::X => 1,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::One => "1",
            Label::X => "X",
        })
    }
}

/// Marker assignment plus one label per circle of its resolution, in the
/// resolution's circle order (by smallest dart).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnhancedState {
    pub marking: Marking,
    pub labels: Vec<Label>,
    pub c_exp: u32,
}

impl EnhancedState {
    pub fn new(marking: Marking, labels: Vec<Label>) -> Self {
        EnhancedState { marking, labels, c_exp: 0 }
    }

    pub fn sigma(&self) -> i32 {
        self.marking.sigma()
    }

    pub fn tau(&self) -> i32 {
        self.labels.iter().map(|l| l.tau()).sum()
    }
}

/// Compact form `+-|1X`, with `c^k·` prefixed when `k > 0`.
impl fmt::Display for EnhancedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c_exp {
            0 => {}
            1 => f.write_str("c·")?,
            k => write!(f, "c^{k}·")?,
        }
        for m in &self.marking.0 {
            f.write_str(if *m == Marker::Positive { "+" } else { "-" })?;
        }
        f.write_str("|")?;
        for l in &self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Bigrading of a state with writhe `w`.
pub fn grading(w: i32, sigma: i32, tau: i32, c_exp: u32) -> Result<Bidegree, ComplexError> {
    let (a, b) = (w - sigma, sigma + 2 * tau - 3 * w);
    if a % 2 != 0 || b % 2 != 0 {
        return Err(ComplexError::Parity { writhe: w, sigma, tau });
    }
    Ok((a / 2, -b / 2 + 2 * c_exp as i32))
}

pub fn gradings(d: &Diagram, s: &EnhancedState) -> Result<Bidegree, ComplexError> {
    let circles = d.resolve(&s.marking)?.len();
    if circles != s.labels.len() {
        return Err(ComplexError::LabelCount { labels: s.labels.len(), circles });
    }
    grading(d.writhe(), s.sigma(), s.tau(), s.c_exp)
}

/// A term `c^k · label`.
pub type Term = (Label, u32);
/// A term `c^k · (left ⊗ right)`.
pub type Term2 = (Label, Label, u32);

/// Multiplication and comultiplication on Z₂[c]·{1, X}, indexed by labels.
/// Kept as data so that tests can perturb single cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frobenius {
    pub merge: [[Vec<Term>; 2]; 2],
    pub split: [Vec<Term2>; 2],
}

impl Frobenius {
    /// m(1,1)=1, m(1,X)=m(X,1)=X, m(X,X)=0,
    /// Δ(1)=1⊗X+X⊗1+c·X⊗X, Δ(X)=X⊗X.
    pub fn standard() -> Self {
        use Label::*;
        Frobenius {
            merge: [
                [vec![(One, 0)], vec![(X, 0)]],
                [vec![(X, 0)], vec![]],
            ],
            split: [
                vec![(One, X, 0), (X, One, 0), (X, X, 1)],
                vec![(X, X, 0)],
            ],
        }
    }

    pub fn merge(&self, a: Label, b: Label) -> &[Term] {
        &self.merge[a.index()][b.index()]
    }

    pub fn split(&self, a: Label) -> &[Term2] {
        &self.split[a.index()]
    }
}

/// Label vectors (with c-exponent) of the states reached from `labels` on
/// `from` when the smoothing changes to `to` at a crossing with darts
/// `crossing_darts`. The two resolutions differ only at that crossing.
pub(crate) fn transition(
    from: &Resolution,
    to: &Resolution,
    crossing_darts: &[Dart],
    labels: &[Label],
    table: &Frobenius,
) -> Vec<(Vec<Label>, u32)> {
    let mut old: Vec<usize> = crossing_darts.iter().filter_map(|&d| from.circle_of(d)).collect();
    old.sort();
    old.dedup();
    let mut new: Vec<usize> = crossing_darts.iter().filter_map(|&d| to.circle_of(d)).collect();
    new.sort();
    new.dedup();

    let mut base = vec![Label::One; to.len()];
    for (k, circle) in to.circles.iter().enumerate() {
        if !new.contains(&k) {
            base[k] = labels[from.circle_of(circle[0]).expect("dart survives")];
        }
    }
    let mut out = Vec::new();
    match (old.as_slice(), new.as_slice()) {
        (&[a, b], &[n]) => {
            for &(l, k) in table.merge(labels[a], labels[b]) {
                let mut v = base.clone();
                v[n] = l;
                out.push((v, k));
            }
        }
        (&[a], &[n1, n2]) => {
            for &(l1, l2, k) in table.split(labels[a]) {
                let mut v = base.clone();
                v[n1] = l1;
                v[n2] = l2;
                out.push((v, k));
            }
        }
        _ => unreachable!("a marker flip merges or splits"),
    }
    out
}

/// Resolutions keyed by marking, computed on demand.
pub(crate) struct Resolver<'a> {
    pub diagram: &'a Diagram,
    cache: HashMap<Marking, Resolution>,
}

impl<'a> Resolver<'a> {
    pub fn new(diagram: &'a Diagram) -> Self {
        Resolver { diagram, cache: HashMap::new() }
    }

    pub fn get(&mut self, m: &Marking) -> Result<&Resolution, DiagramError> {
        if !self.cache.contains_key(m) {
            let r = self.diagram.resolve(m)?;
            self.cache.insert(m.clone(), r);
        }
        Ok(&self.cache[m])
    }
}

fn incident_with(
    res: &mut Resolver,
    s: &EnhancedState,
    table: &Frobenius,
) -> Result<Vec<(EnhancedState, Poly)>, ComplexError> {
    let d = res.diagram;
    let from = res.get(&s.marking)?.clone();
    if from.len() != s.labels.len() {
        return Err(ComplexError::LabelCount { labels: s.labels.len(), circles: from.len() });
    }
    let ids = d.crossing_ids();
    let mut out = Vec::new();
    for (k, &m) in s.marking.0.iter().enumerate() {
        if m != Marker::Positive {
            continue;
        }
        let mut marking = s.marking.clone();
        marking.0[k] = Marker::Negative;
        let to = res.get(&marking)?;
        let darts = d.crossing(ids[k]).expect("crossing").ccw;
        for (labels, c_exp) in transition(&from, to, &darts, &s.labels, table) {
            let t = EnhancedState { marking: marking.clone(), labels, c_exp: 0 };
            out.push((t, Poly::monomial(c_exp as usize)));
        }
    }
    Ok(out)
}

/// States `T` with nonzero incidence from `s`, each with its coefficient.
pub fn incident_states(
    d: &Diagram,
    s: &EnhancedState,
) -> Result<Vec<(EnhancedState, Poly)>, ComplexError> {
    incident_with(&mut Resolver::new(d), s, &Frobenius::standard())
}

/// A basis element: a state together with its quantum grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub state: EnhancedState,
    pub j: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChainComplex {
    pub levels: BTreeMap<i32, Vec<Generator>>,
    /// `differentials[i]` maps level `i` to level `i + 1`; absent means zero.
    pub differentials: BTreeMap<i32, PolyMatrix>,
}

/// Whether `c^k` at (`target`, `source`) respects j, for every entry.
pub fn is_homogeneous(m: &PolyMatrix, target_js: &[i32], source_js: &[i32]) -> bool {
    m.nonzero_entries().all(|(r, c, p)| match p.as_monomial() {
        Some(k) => target_js[r] + 2 * k as i32 == source_js[c],
        None => false,
    })
}

impl ChainComplex {
    pub fn rank(&self, i: i32) -> usize {
        self.levels.get(&i).map_or(0, Vec::len)
    }

    pub fn generators(&self, i: i32) -> &[Generator] {
        self.levels.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn js(&self, i: i32) -> Vec<i32> {
        self.generators(i).iter().map(|g| g.j).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.levels.values().map(Vec::len).sum()
    }

    /// Number of generators per bidegree.
    pub fn bigraded_ranks(&self) -> BTreeMap<Bidegree, usize> {
        let mut out = BTreeMap::new();
        for (&i, g) in &self.levels {
            for x in g {
                *out.entry((i, x.j)).or_default() += 1;
            }
        }
        out
    }

    /// Generators at one bidegree, in level order.
    pub fn at(&self, key: Bidegree) -> Vec<&EnhancedState> {
        self.generators(key.0)
            .iter()
            .filter(|g| g.j == key.1)
            .map(|g| &g.state)
            .collect()
    }

    /// The differential out of level `i`, as a full (possibly zero) matrix.
    pub fn differential(&self, i: i32) -> PolyMatrix {
        self.differentials
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(self.rank(i + 1), self.rank(i)))
    }

    pub fn is_zero_differential(&self) -> bool {
        self.differentials.values().all(PolyMatrix::is_zero)
    }

    /// Level and position of every generator state.
    pub fn index(&self) -> HashMap<EnhancedState, (i32, usize)> {
        let mut out = HashMap::new();
        for (&i, g) in &self.levels {
            for (p, x) in g.iter().enumerate() {
                out.insert(x.state.clone(), (i, p));
            }
        }
        out
    }

    pub fn check_d_squared(&self) -> Result<(), ComplexError> {
        for (&i, d) in &self.differentials {
            if let Some(next) = self.differentials.get(&(i + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(ComplexError::NotAComplex(i));
                }
            }
        }
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.differentials
            .iter()
            .all(|(&i, d)| is_homogeneous(d, &self.js(i + 1), &self.js(i)))
    }

    /// The same complex with every generator list reversed.
    pub fn reversed(&self) -> ChainComplex {
        let levels = self
            .levels
            .iter()
            .map(|(k, g)| (*k, g.iter().rev().cloned().collect()))
            .collect();
        let differentials = self
            .differentials
            .iter()
            .map(|(k, m)| {
                let rows: Vec<usize> = (0..m.rows()).rev().collect();
                let cols: Vec<usize> = (0..m.cols()).rev().collect();
                (*k, m.select(&rows, &cols))
            })
            .collect();
        ChainComplex { levels, differentials }
    }

    pub fn dump(&self) -> ComplexDump {
        let mut groups: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        for (&i, g) in &self.levels {
            for x in g {
                groups.entry((i, x.j)).or_default().push(x.state.to_string());
            }
        }
        ComplexDump {
            groups: groups
                .into_iter()
                .map(|((i, j), generators)| GroupDump { i, j, generators })
                .collect(),
            levels: self
                .levels
                .iter()
                .map(|(&i, g)| LevelDump {
                    i,
                    generators: g.iter().map(|x| x.state.to_string()).collect(),
                    j: g.iter().map(|x| x.j).collect(),
                })
                .collect(),
            differentials: self
                .differentials
                .iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(&i, m)| DifferentialDump { i, matrix: m.to_triplets() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupDump {
    pub i: i32,
    pub j: i32,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDump {
    pub i: i32,
    pub generators: Vec<String>,
    pub j: Vec<i32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferentialDump {
    pub i: i32,
    pub matrix: MatrixDump,
}

/// Generators grouped by bidegree, plus the level-indexed matrices whose
/// row and column order is that of `levels`.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexDump {
    pub groups: Vec<GroupDump>,
    pub levels: Vec<LevelDump>,
    pub differentials: Vec<DifferentialDump>,
}

/// All enhanced states of `d` with `c_exp = 0`, in generator order:
/// lexicographic in (marking bits, labels) with `+ < -` and `1 < X`.
pub fn enumerate_states(d: &Diagram) -> Result<Vec<EnhancedState>, ComplexError> {
    let n = d.crossing_count();
    let mut out = Vec::new();
    for bits in 0..(1u64 << n) {
        let marking = Marking::from_bits(bits, n);
        let circles = d.resolve(&marking)?.len();
        for lb in 0..(1u64 << circles) {
            let labels = (0..circles)
                .map(|k| if (lb >> (circles - 1 - k)) & 1 == 1 { Label::X } else { Label::One })
                .collect();
            out.push(EnhancedState::new(marking.clone(), labels));
        }
    }
    Ok(out)
}

pub fn build_complex(d: &Diagram) -> Result<ChainComplex, ComplexError> {
    build_complex_with(d, &Frobenius::standard(), DEFAULT_CROSSING_BOUND)
}

/// The graded generators of `C(d)` with no differential, which is all the
/// Euler characteristic needs.
pub fn graded_generators(d: &Diagram, bound: usize) -> Result<ChainComplex, ComplexError> {
    let n = d.crossing_count();
    if n > bound {
        return Err(ComplexError::TooManyCrossings { count: n, bound });
    }
    let w = d.writhe();
    let mut levels: BTreeMap<i32, Vec<Generator>> = BTreeMap::new();
    for s in enumerate_states(d)? {
        let (i, j) = grading(w, s.sigma(), s.tau(), 0)?;
        levels.entry(i).or_default().push(Generator { state: s, j });
    }
    Ok(ChainComplex { levels, differentials: BTreeMap::new() })
}

pub fn build_complex_with(
    d: &Diagram,
    table: &Frobenius,
    bound: usize,
) -> Result<ChainComplex, ComplexError> {
    let mut cx = graded_generators(d, bound)?;
    let w = d.writhe();
    for (&i, g) in &cx.levels {
        let entries = g.len().saturating_mul(cx.rank(i + 1));
        if entries > DENSE_ENTRY_BOUND {
            return Err(ComplexError::TooLarge { level: i, entries, bound: DENSE_ENTRY_BOUND });
        }
    }
    let index = cx.index();
    let mut res = Resolver::new(d);
    let mut differentials = BTreeMap::new();
    for (&i, gens) in &cx.levels {
        let rows = cx.rank(i + 1);
        if rows == 0 {
            continue;
        }
        let mut m = PolyMatrix::zeros(rows, gens.len());
        for (col, g) in gens.iter().enumerate() {
            for (t, coeff) in incident_with(&mut res, &g.state, table)? {
                let k = coeff.as_monomial().expect("monomial coefficient") as u32;
                if grading(w, t.sigma(), t.tau(), k)? != (i + 1, g.j) {
                    let shifted = EnhancedState { c_exp: k, ..t };
                    return Err(ComplexError::NotHomogeneous {
                        from: g.state.to_string(),
                        to: shifted.to_string(),
                    });
                }
                let &(_, row) = index
                    .get(&t)
                    .ok_or_else(|| ComplexError::MissingGenerator(t.to_string()))?;
                m.add_at(row, col, &coeff);
            }
        }
        differentials.insert(i, m);
    }
    cx.differentials = differentials;
    Ok(cx)
}
