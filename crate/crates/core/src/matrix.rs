//! Matrices over Z2[c].
//!
//! [`PolyMatrix`] is dense and used wherever rows and columns get combined
//! (normal forms, cancellation, chain maps). [`SparseMatrix`] stores the
//! differentials of full Khovanov complexes, which are overwhelmingly zero.

use std::fmt;

use serde::Serialize;

use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Poly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Poly) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Poly) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Specialization `c = 0`, entrywise.
    pub fn mod_c(&self) -> PolyMatrix {
        let mut out = Self::zeros(self.rows, self.cols);
        for (o, v) in out.data.iter_mut().zip(&self.data) {
            if v.constant_term() {
                *o = Poly::one();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        let support: Vec<Vec<usize>> =
            (0..rhs.rows).map(|k| (0..rhs.cols).filter(|&j| !rhs.get(k, j).is_zero()).collect()).collect();
        for i in 0..self.rows {
            for (k, js) in support.iter().enumerate() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in js {
                    out.add_at(i, j, &(a * rhs.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&rhs.data) {
            *o += v;
        }
        out
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &Poly) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c);
            if !v.is_zero() {
                let t = factor * v;
                self.add_at(dst, c, &t);
            }
        }
    }

    /// `col[dst] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &Poly) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src);
            if !v.is_zero() {
                let t = factor * v;
                self.add_at(r, dst, &t);
            }
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn to_triplets(&self) -> MatrixDump {
        MatrixDump {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .nonzero_entries()
                .map(|(r, c, v)| (r, c, v.exponents()))
                .collect(),
        }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Triplet-form matrix dump; entries are `(row, col, exponents)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Vec<usize>)>,
}

/// Column-compressed sparse matrix; each column keeps its nonzero entries
/// sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, Poly)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Adds `v` at `(r, c)`.
    pub fn accumulate(&mut self, r: usize, c: usize, v: &Poly) {
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |(row, _)| *row) {
            Ok(k) => {
                col[k].1 += v;
                if col[k].1.is_zero() {
                    col.remove(k);
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    col.insert(k, (r, v.clone()));
                }
            }
        }
    }

    pub fn column(&self, c: usize) -> &[(usize, Poly)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Poly {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |(row, _)| *row)
            .map(|k| col[k].1.clone())
            .unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Sparse product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in product");
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols());
        for (c, col) in rhs.columns.iter().enumerate() {
            for (k, b) in col {
                for (r, a) in &self.columns[*k] {
                    out.accumulate(*r, c, &(a * b));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.rows, self.cols());
        for (r, c, v) in self.entries() {
            m.set(r, c, v.clone());
        }
        m
    }

    pub fn from_dense(m: &PolyMatrix) -> SparseMatrix {
        let mut s = SparseMatrix::zeros(m.rows(), m.cols());
        for (r, c, v) in m.nonzero_entries() {
            s.columns[c].push((r, v.clone()));
        }
        for col in &mut s.columns {
            col.sort_by_key(|(r, _)| *r);
        }
        s
    }

    pub fn to_triplets(&self) -> MatrixDump {
        MatrixDump {
            rows: self.rows,
            cols: self.cols(),
            entries: self.entries().map(|(r, c, v)| (r, c, v.exponents())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&[usize]]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|e| Poly::from_exponents(e.iter().copied())).collect())
                .collect(),
        )
    }

    #[test]
    fn dense_product_and_identity() {
        let a = m(&[&[&[0], &[1]], &[&[], &[0]]]);
        let b = m(&[&[&[0], &[1]], &[&[], &[0]]]);
        // [[1,c],[0,1]]^2 = [[1,0],[0,1]] over GF(2)
        assert!(a.mul(&b).is_identity());
        assert_eq!(PolyMatrix::identity(2).mul(&a), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[&[0], &[1], &[]], &[&[2], &[], &[0, 1]]]);
        let b = m(&[&[&[1]], &[&[0]], &[&[3]]]);
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        assert_eq!(sa.mul(&sb).to_dense(), a.mul(&b));
        assert_eq!(sa.to_dense(), a);
        assert_eq!(sa.nnz(), 4);
    }

    #[test]
    fn accumulate_cancels() {
        let mut s = SparseMatrix::zeros(2, 2);
        s.accumulate(1, 0, &Poly::c());
        s.accumulate(1, 0, &Poly::c());
        assert!(s.is_zero());
    }

    #[test]
    fn reduction_mod_c() {
        let a = m(&[&[&[0, 1], &[1]], &[&[], &[0]]]);
        assert!(a.mod_c().is_identity());
    }
}
