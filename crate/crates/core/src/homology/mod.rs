//! Bigraded homology over Z₂[c], the graded Euler characteristic, and a
//! Kauffman-bracket oracle for it.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

use crate::complex::{Bidegree, ChainComplex, ComplexError, DEFAULT_CROSSING_BOUND};
use crate::diagram::{Diagram, Marking};
use crate::poly::Poly;

mod laurent;
mod snf;

pub use laurent::LaurentPoly;
pub use snf::{snf, Snf};

#[cfg(test)]
mod tests;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("invariant factor {0} is not a power of c")]
    NotMonomial(Poly),
    #[error("diagram has {count} crossings, more than the bound {bound}")]
    TooManyCrossings { count: usize, bound: usize },
    #[error("the bracket of the empty diagram is not defined")]
    EmptyDiagram,
}

/// `Z₂[c]^free ⊕ ⊕_e Z₂[c]/(c^e)` at one bidegree; torsion is sorted and
/// located at the degree of its generator.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct HomologyGroup {
    pub free: usize,
    pub torsion: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub groups: BTreeMap<Bidegree, HomologyGroup>,
}

impl HomologyTable {
    pub fn free_rank(&self, key: Bidegree) -> usize {
        self.groups.get(&key).map_or(0, |g| g.free)
    }

    pub fn torsion(&self, key: Bidegree) -> &[usize] {
        self.groups.get(&key).map_or(&[], |g| g.torsion.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }
}

/// `{"(i,j)": {"free": r, "torsion": [e, ...]}}`, in bidegree order.
impl Serialize for HomologyTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.groups.len()))?;
        for ((i, j), g) in &self.groups {
            map.serialize_entry(&format!("({i},{j})"), g)?;
        }
        map.end()
    }
}

fn exponent(p: &Poly) -> Result<usize, HomologyError> {
    p.as_monomial().ok_or_else(|| HomologyError::NotMonomial(p.clone()))
}

/// Homology level by level: the SNF of the incoming differential locates
/// image generators (and their torsion) in the basis of level `i`, the SNF
/// of the outgoing one gives a homogeneous kernel basis. Free ranks per `j`
/// are kernel degrees minus image-generator degrees.
pub fn homology(cx: &ChainComplex) -> Result<HomologyTable, HomologyError> {
    cx.check_d_squared()?;
    let mut table = HomologyTable::default();
    for &i in cx.levels.keys() {
        let js = cx.js(i);
        let mut free: BTreeMap<i32, i64> = BTreeMap::new();

        let outgoing = snf(&cx.differential(i));
        for &c in &outgoing.col_perm[outgoing.rank()..] {
            *free.entry(js[c]).or_default() += 1;
        }
        let incoming = snf(&cx.differential(i - 1));
        for (k, f) in incoming.factors.iter().enumerate() {
            let j = js[incoming.row_perm[k]];
            *free.entry(j).or_default() -= 1;
            let e = exponent(f)?;
            if e > 0 {
                table.groups.entry((i, j)).or_default().torsion.push(e);
            }
        }
        for (j, n) in free {
            assert!(n >= 0, "image larger than kernel at ({i}, {j})");
            if n > 0 {
                table.groups.entry((i, j)).or_default().free = n as usize;
            }
        }
    }
    for g in table.groups.values_mut() {
        g.torsion.sort_unstable();
    }
    Ok(table)
}

/// `Σ (-1)^i q^j` over generators.
pub fn euler_characteristic(cx: &ChainComplex) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (&i, gens) in &cx.levels {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        for g in gens {
            out.add_term(sign, g.j);
        }
    }
    out
}

/// The frozen variable correspondence `A^2 -> -q^-1`, i.e. `A^(2m)` becomes
/// `(-1)^m q^(-m)`; fixed by the unknot and the 2-unlink.
pub const BRACKET_SUBSTITUTION: (i32, i64, i32) = (2, -1, -1);

/// Writhe-normalized Kauffman bracket in the variable `A`:
/// `(-A^3)^(-w) Σ_S A^σ(S) δ^(|S|-1)` with `δ = -A^2 - A^-2`.
pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPoly, HomologyError> {
    kauffman_bracket_bounded(d, DEFAULT_CROSSING_BOUND)
}

pub fn kauffman_bracket_bounded(d: &Diagram, bound: usize) -> Result<LaurentPoly, HomologyError> {
    let n = d.crossing_count();
    if n > bound {
        return Err(HomologyError::TooManyCrossings { count: n, bound });
    }
    if d.dart_count() == 0 {
        return Err(HomologyError::EmptyDiagram);
    }
    let delta = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let mut sum = LaurentPoly::zero();
    for bits in 0..(1u64 << n) {
        let m = Marking::from_bits(bits, n);
        let circles = d.resolve(&m).map_err(ComplexError::from)?.len() as u32;
        sum = sum + &LaurentPoly::monomial(1, m.sigma()) * &delta.pow(circles - 1);
    }
    let w = d.writhe();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(&LaurentPoly::monomial(sign, -3 * w) * &sum)
}

/// The bracket in the Euler characteristic's variable: the substituted
/// normalized bracket times `q + q^-1`, and `1` for the empty diagram.
pub fn bracket_oracle(d: &Diagram) -> Result<LaurentPoly, HomologyError> {
    bracket_oracle_bounded(d, DEFAULT_CROSSING_BOUND)
}

pub fn bracket_oracle_bounded(d: &Diagram, bound: usize) -> Result<LaurentPoly, HomologyError> {
    if d.dart_count() == 0 {
        return Ok(LaurentPoly::one());
    }
    let (scale, sign, exp) = BRACKET_SUBSTITUTION;
    let b = kauffman_bracket_bounded(d, bound)?;
    let q = b.substitute(scale, sign, exp).expect("normalized bracket has even exponents");
    Ok(&q * &LaurentPoly::loop_value())
}
