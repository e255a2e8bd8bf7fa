//! Smith normal form over the Euclidean domain Z₂[c].

use crate::matrix::PolyMatrix;
use crate::poly::Poly;

/// `u · m · v = diagonal` with `factors[k] = diagonal[k][k]` nonzero for
/// `k < factors.len()`, each dividing the next; `u_inv`, `v_inv` are the
/// inverse transforms.
///
/// `row_perm[k]` / `col_perm[k]` is the original row / column that ended up
/// at position `k` after all swaps. For a homogeneous matrix the basis
/// vector at position `k` keeps the degree of that original index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub factors: Vec<Poly>,
    pub diagonal: PolyMatrix,
    pub u: PolyMatrix,
    pub v: PolyMatrix,
    pub u_inv: PolyMatrix,
    pub v_inv: PolyMatrix,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

struct Work {
    m: PolyMatrix,
    u: PolyMatrix,
    v: PolyMatrix,
    u_inv: PolyMatrix,
    v_inv: PolyMatrix,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.m.swap_rows(a, b);
            self.u.swap_rows(a, b);
            self.u_inv.swap_cols(a, b);
            self.row_perm.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            self.m.swap_cols(a, b);
            self.v.swap_cols(a, b);
            self.v_inv.swap_rows(a, b);
            self.col_perm.swap(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &Poly) {
        self.m.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
        // Over Z₂ each elementary operation is its own inverse.
        self.u_inv.add_col_multiple(src, dst, f);
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &Poly) {
        self.m.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, f);
    }

    /// Nonzero entry of least degree in the block from `t`, first in
    /// (row, column) order among ties.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for r in t..self.m.rows() {
            for c in t..self.m.cols() {
                if let Some(deg) = self.m.get(r, c).degree() {
                    if best.is_none_or(|(bd, _, _)| deg < bd) {
                        best = Some((deg, r, c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// Clears row and column `t` outside the pivot; returns false when a
    /// nonzero remainder appeared and a new pivot is needed.
    fn clear(&mut self, t: usize) -> bool {
        let p = self.m.get(t, t).clone();
        let mut clean = true;
        for r in t + 1..self.m.rows() {
            if self.m.get(r, t).is_zero() {
                continue;
            }
            let (q, rem) = self.m.get(r, t).divmod(&p).expect("nonzero pivot");
            self.add_row(r, t, &q);
            clean &= rem.is_zero();
        }
        for c in t + 1..self.m.cols() {
            if self.m.get(t, c).is_zero() {
                continue;
            }
            let (q, rem) = self.m.get(t, c).divmod(&p).expect("nonzero pivot");
            self.add_col(c, t, &q);
            clean &= rem.is_zero();
        }
        clean
    }
}

/// Pivot rule: an entry of minimal degree, ties broken by (row, column).
pub fn snf(m: &PolyMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: PolyMatrix::identity(rows),
        v: PolyMatrix::identity(cols),
        u_inv: PolyMatrix::identity(rows),
        v_inv: PolyMatrix::identity(cols),
        row_perm: (0..rows).collect(),
        col_perm: (0..cols).collect(),
    };
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((r, c)) = w.min_entry(t) else { break };
        w.swap_rows(t, r);
        w.swap_cols(t, c);
        if !w.clear(t) {
            continue;
        }
        // Divisibility: fold in a row whose entries the pivot does not divide.
        let p = w.m.get(t, t).clone();
        let bad = (t + 1..rows).find(|&r| {
            (t + 1..cols).any(|c| !w.m.get(r, c).divmod(&p).expect("nonzero").1.is_zero())
        });
        if let Some(r) = bad {
            w.add_row(t, r, &Poly::one());
            continue;
        }
        factors.push(p);
        t += 1;
    }
    Snf {
        factors,
        diagonal: w.m,
        u: w.u,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        row_perm: w.row_perm,
        col_perm: w.col_perm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(exps: &[usize]) -> Poly {
        Poly::from_exponents(exps.iter().copied())
    }

    fn check(m: &PolyMatrix) -> Snf {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.diagonal);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v_inv.mul(&s.v).is_identity());
        for r in 0..s.diagonal.rows() {
            for c in 0..s.diagonal.cols() {
                let v = s.diagonal.get(r, c);
                if r == c && r < s.rank() {
                    assert_eq!(*v, s.factors[r]);
                } else {
                    assert!(v.is_zero());
                }
            }
        }
        for w in s.factors.windows(2) {
            assert!(w[1].divmod(&w[0]).unwrap().1.is_zero());
        }
        s
    }

    #[test]
    fn diagonal_c_one() {
        let m = PolyMatrix::from_rows(vec![vec![Poly::c(), Poly::zero()], vec![Poly::zero(), Poly::one()]]);
        assert_eq!(check(&m).factors, vec![Poly::one(), Poly::c()]);
    }

    #[test]
    fn identity() {
        assert_eq!(check(&PolyMatrix::identity(3)).factors, vec![Poly::one(); 3]);
    }

    #[test]
    fn rank_one_c_block() {
        let m = PolyMatrix::from_rows(vec![vec![Poly::c(), Poly::c()], vec![Poly::c(), Poly::c()]]);
        assert_eq!(check(&m).factors, vec![Poly::c()]);
    }

    #[test]
    fn needs_gcd_steps() {
        // gcd(c^2 + 1, c + 1) = c + 1 only shows after a remainder step.
        let m = PolyMatrix::from_rows(vec![vec![p(&[2, 0]), p(&[1, 0])], vec![p(&[1]), p(&[0])]]);
        let s = check(&m);
        assert_eq!(s.factors.len(), 2);
        // Non-coprime diagonal: diag(c, c+1) has factors (1, c^2+c).
        let m = PolyMatrix::from_rows(vec![vec![p(&[1]), Poly::zero()], vec![Poly::zero(), p(&[1, 0])]]);
        assert_eq!(check(&m).factors, vec![Poly::one(), p(&[2, 1])]);
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(check(&PolyMatrix::zeros(0, 3)).rank(), 0);
        assert_eq!(check(&PolyMatrix::zeros(2, 0)).rank(), 0);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(0usize..4, 0..3).prop_map(Poly::from_exponents)
    }

    proptest! {
        #[test]
        fn snf_is_valid(rows in 0usize..4, cols in 0usize..4, seed in prop::collection::vec(arb_poly(), 16)) {
            let m = PolyMatrix::from_rows(
                (0..rows).map(|r| (0..cols).map(|c| seed[r * 4 + c].clone()).collect()).collect(),
            );
            let m = if rows == 0 { PolyMatrix::zeros(0, cols) } else { m };
            check(&m);
        }
    }
}
