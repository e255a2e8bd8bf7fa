use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{is_homogeneous, ChainComplex};
use crate::matrix::{MatrixDump, PolyMatrix};

/// A degree-(0, `j_shift`) map of complexes, one block per level: rows are
/// target generators, columns source generators. Missing blocks are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub j_shift: i32,
    pub blocks: BTreeMap<i32, PolyMatrix>,
}

/// Degree −1 map on one complex: `blocks[i]` goes from level `i` to `i − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Homotopy {
    pub blocks: BTreeMap<i32, PolyMatrix>,
}

fn levels(a: &ChainComplex, b: &ChainComplex) -> Vec<i32> {
    let mut ls: Vec<i32> = a.levels.keys().chain(b.levels.keys()).copied().collect();
    ls.sort_unstable();
    ls.dedup();
    ls
}

impl ChainMap {
    pub fn zero(source: &ChainComplex, target: &ChainComplex, j_shift: i32) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            j_shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(cx: &ChainComplex) -> Self {
        let blocks = cx
            .levels
            .iter()
            .map(|(&i, g)| (i, PolyMatrix::identity(g.len())))
            .collect();
        ChainMap { source: cx.clone(), target: cx.clone(), j_shift: 0, blocks }
    }

    pub fn block(&self, i: i32) -> PolyMatrix {
        self.blocks
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(self.target.rank(i), self.source.rank(i)))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> ChainMap {
        assert_eq!(self.target, next.source, "composing maps between different complexes");
        let blocks = self
            .source
            .levels
            .keys()
            .filter(|i| next.target.rank(**i) > 0)
            .map(|&i| (i, next.block(i).mul(&self.block(i))))
            .collect();
        ChainMap {
            source: self.source.clone(),
            target: next.target.clone(),
            j_shift: self.j_shift + next.j_shift,
            blocks,
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(self.j_shift, other.j_shift);
        let blocks = levels(&self.source, &self.target)
            .into_iter()
            .map(|i| (i, self.block(i).add(&other.block(i))))
            .collect();
        ChainMap { blocks, ..self.clone() }
    }

    /// `d_target ∘ f = f ∘ d_source` at every level.
    pub fn is_chain_map(&self) -> bool {
        levels(&self.source, &self.target).into_iter().all(|i| {
            let left = self.target.differential(i).mul(&self.block(i));
            let right = self.block(i + 1).mul(&self.source.differential(i));
            left == right
        })
    }

    /// Every entry `c^k` satisfies `j(target) + 2k = j(source) + j_shift`.
    pub fn is_homogeneous(&self) -> bool {
        self.blocks.iter().all(|(&i, m)| {
            let src: Vec<i32> = self.source.js(i).iter().map(|j| j + self.j_shift).collect();
            is_homogeneous(m, &self.target.js(i), &src)
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.j_shift == 0
            && self.source.levels.keys().all(|&i| self.block(i).is_identity())
    }

    pub fn mod_c(&self) -> ChainMap {
        let blocks = self.blocks.iter().map(|(&i, m)| (i, m.mod_c())).collect();
        ChainMap { blocks, ..self.clone() }
    }

    /// All blocks as one matrix, generators in level order.
    pub fn to_dense(&self) -> PolyMatrix {
        let offsets = |cx: &ChainComplex| {
            let mut acc = 0;
            cx.levels
                .iter()
                .map(|(&i, g)| {
                    let o = acc;
                    acc += g.len();
                    (i, o)
                })
                .collect::<BTreeMap<i32, usize>>()
        };
        let (ro, co) = (offsets(&self.target), offsets(&self.source));
        let mut out = PolyMatrix::zeros(self.target.total_rank(), self.source.total_rank());
        for (&i, m) in &self.blocks {
            for (r, c, p) in m.nonzero_entries() {
                out.set(ro[&i] + r, co[&i] + c, p.clone());
            }
        }
        out
    }

    pub fn dump(&self) -> ChainMapDump {
        ChainMapDump {
            j_shift: self.j_shift,
            blocks: self
                .blocks
                .iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(&i, m)| BlockDump {
                    i,
                    sources: self.source.generators(i).iter().map(|g| g.state.to_string()).collect(),
                    targets: self.target.generators(i).iter().map(|g| g.state.to_string()).collect(),
                    matrix: m.to_triplets(),
                })
                .collect(),
        }
    }
}

impl Homotopy {
    pub fn block(&self, cx: &ChainComplex, i: i32) -> PolyMatrix {
        self.blocks
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(cx.rank(i - 1), cx.rank(i)))
    }

    /// Whether `f − g = d h + h d` on `cx` (both maps are self-maps of `cx`).
    pub fn witnesses(&self, cx: &ChainComplex, f: &ChainMap, g: &ChainMap) -> bool {
        cx.levels.keys().all(|&i| {
            let lhs = f.block(i).add(&g.block(i));
            let dh = cx.differential(i - 1).mul(&self.block(cx, i));
            let hd = self.block(cx, i + 1).mul(&cx.differential(i));
            lhs == dh.add(&hd)
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockDump {
    pub i: i32,
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub matrix: MatrixDump,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainMapDump {
    pub j_shift: i32,
    pub blocks: Vec<BlockDump>,
}
