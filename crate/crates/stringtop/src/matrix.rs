//! Dense matrices over an exact field, with the Gaussian-elimination
//! primitives every homology computation reduces to.
//!
//! Everything here is deterministic: pivots are chosen as the first nonzero
//! entry in column order, so representatives derived from these routines are
//! stable across runs.

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: std::fmt::Debug> std::fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|c| format!("{:?}", self.data[r * self.cols + c])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds from row slices. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<S>>, rows: usize) -> Self {
        let c = cols.len();
        let mut m = Matrix::zero(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.into_iter().enumerate() {
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

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: S) {
        let cur = self.get(r, c).clone();
        self.set(r, c, cur + v);
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<S>) -> Matrix<S> {
        self.add(&other.scale(&-S::one()))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_to(r, c, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() && !self.get(r, c).is_zero() {
                        acc = acc + self.get(r, c).clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form, returning the reduced matrix and the pivot
    /// column indices in order.
    pub fn rref(&self) -> (Matrix<S>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // first nonzero entry at or below `row`
            let pivot_row = (row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let pr = match pivot_row {
                Some(pr) => pr,
                None => continue,
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = S::one() / m.get(row, col).clone();
            for c in col..m.cols {
                let v = m.get(row, c).clone() * inv.clone();
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(row, c).clone();
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of `ker(self)` as column vectors, one per free column,
    /// in free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (prow, pcol) in pivots.iter().enumerate() {
                v[*pcol] = -r.get(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Columns of `self` indexed by the RREF pivots: a basis of the column
    /// space taken from the original columns.
    pub fn column_space_basis(&self) -> Vec<Vec<S>> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|c| self.column(c)).collect()
    }

    /// Solves `self * x = b` exactly, returning one solution if consistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![S::zero(); self.cols];
        for (prow, pcol) in pivots.iter().enumerate() {
            x[*pcol] = red.get(prow, self.cols).clone();
        }
        Some(x)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut m = Matrix::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::Zero;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<Rat> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    #[test]
    fn rref_and_rank() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.get(0, 0), &rat(1));
    }

    #[test]
    fn kernel_is_exact() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_nullity() {
        let a = m(vec![vec![1, 2, 0, 1], vec![0, 1, 1, 0], vec![1, 3, 1, 1]]);
        assert_eq!(a.rank() + a.kernel_basis().len(), a.cols());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(vec![vec![1, 1], vec![0, 1]]);
        let x = a.solve(&[rat(3), rat(2)]).unwrap();
        assert_eq!(a.apply(&x), vec![rat(3), rat(2)]);

        let b = m(vec![vec![1, 1], vec![2, 2]]);
        assert!(b.solve(&[rat(0), rat(1)]).is_none());
    }
}
