//! Exact linear algebra over the rationals.
//!
//! Small dense systems only: undetermined-coefficient solves for the
//! Risch-type equations and nullspace extraction for annihilator guessing.

use crate::poly::Q;
use num::{One, Zero};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    nrows: usize,
    ncols: usize,
    a: Vec<Q>,
}

impl Mat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            a: vec![Q::zero(); nrows * ncols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut a = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged matrix rows");
            a.extend(r);
        }
        Mat { nrows, ncols, a }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.a[i * self.ncols + j] = v;
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// pivot row in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row == self.nrows {
                break;
            }
            let Some(pr) = (row..self.nrows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = Q::one() / self.get(row, col).clone();
            for j in col..self.ncols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.nrows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for j in col..self.ncols {
                        let v = self.get(r, j) - &(self.get(row, j) * &factor);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.ncols {
            self.a.swap(i * self.ncols + c, j * self.ncols + c);
        }
    }

    /// Solves `self * x = b` exactly; `None` if inconsistent. With a
    /// non-trivial kernel the free variables are set to zero.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.nrows);
        let mut aug = Mat::zeros(self.nrows, self.ncols + 1);
        for (i, rhs) in b.iter().enumerate() {
            for j in 0..self.ncols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.ncols, rhs.clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.ncols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Q::zero(); self.ncols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.ncols).clone();
        }
        Some(x)
    }

    /// Basis of the right nullspace, in reduced echelon order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<usize> = pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (row, &col) in pivot_set.iter().enumerate() {
                v[col] = -m.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by fraction-ful Gaussian elimination (square matrices).
    pub fn det(&self) -> Q {
        assert_eq!(self.nrows, self.ncols);
        let mut m = self.clone();
        let n = m.nrows;
        let mut acc = Q::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Q::zero();
            };
            if pr != col {
                m.swap_rows(col, pr);
                acc = -acc;
            }
            let pivot = m.get(col, col).clone();
            acc *= &pivot;
            let inv = Q::one() / pivot;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) * &inv;
                for j in col..n {
                    let v = m.get(r, j) - &(m.get(col, j) * &factor);
                    m.set(r, j, v);
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qi;

    #[test]
    fn solve_unique() {
        let m = Mat::from_rows(vec![vec![qi(2), qi(1)], vec![qi(1), qi(-1)]]);
        let x = m.solve(&[qi(5), qi(1)]).unwrap();
        assert_eq!(x, vec![qi(2), qi(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = Mat::from_rows(vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]]);
        assert!(m.solve(&[qi(1), qi(3)]).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Mat::from_rows(vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // v = (-2, 1)
        assert_eq!(ns[0], vec![qi(-2), qi(1)]);
    }

    #[test]
    fn det_values() {
        let m = Mat::from_rows(vec![vec![qi(1), qi(2)], vec![qi(3), qi(4)]]);
        assert_eq!(m.det(), qi(-2));
        let s = Mat::from_rows(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]);
        assert_eq!(s.det(), qi(-1));
    }
}
