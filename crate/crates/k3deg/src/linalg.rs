//! Dense exact linear algebra over the rationals.
//!
//! Row reduction, rank, kernels, linear solves, determinants and the
//! signature of a symmetric form, all computed without floating point.
//! Kernel bases are normalized deterministically (denominator-cleared,
//! content one, first nonzero coordinate positive) so downstream reports
//! are byte-stable.

use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("matrix rows have unequal lengths")]
    RaggedRows,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("symmetric form is degenerate")]
    Degenerate,
}

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::RaggedRows);
        }
        Ok(QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &QMat) -> Result<QMat, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = QMat::zeros(self.rows, other.cols);
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
                    let cur = out.get(r, c).clone();
                    out.set(r, c, cur + a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, LinAlgError> {
        if self.cols != v.len() {
            return Err(LinAlgError::DimMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn add(&self, other: &QMat) -> Result<QMat, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(QMat::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        }))
    }

    pub fn sub(&self, other: &QMat) -> Result<QMat, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(QMat::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) - other.get(r, c)
        }))
    }

    pub fn scale(&self, s: &Rat) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Reduced row echelon form; returns the pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let factor = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &factor * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Exact determinant by fraction-tracking Gaussian elimination.
    pub fn det(&self) -> Result<Rat, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c) / &pivot;
                for j in c..n {
                    let v = m.get(i, j) - &factor * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Signature `(n_plus, n_minus)` of a symmetric matrix, by recursive
    /// symmetric Gaussian reduction over the rationals. Errors if the form
    /// is degenerate or the matrix is not symmetric.
    pub fn signature_symmetric(&self) -> Result<(usize, usize), LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Err(LinAlgError::RaggedRows);
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut pos = 0usize;
        let mut neg = 0usize;
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            // Find a nonzero diagonal pivot among the active indices.
            let diag = active
                .iter()
                .position(|&i| !m.get(i, i).is_zero())
                .map(|k| active[k]);
            let pivot_idx = match diag {
                Some(i) => i,
                None => {
                    // All active diagonal entries are zero; a nonzero
                    // off-diagonal entry lets us create one by the
                    // congruence row_i += row_j, col_i += col_j.
                    let mut found = None;
                    'outer: for (a, &i) in active.iter().enumerate() {
                        for &j in &active[a + 1..] {
                            if !m.get(i, j).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = found else {
                        // The active block is identically zero: degenerate.
                        return Err(LinAlgError::Degenerate);
                    };
                    for c in 0..n {
                        let v = m.get(i, c) + m.get(j, c);
                        m.set(i, c, v);
                    }
                    for r in 0..n {
                        let v = m.get(r, i) + m.get(r, j);
                        m.set(r, i, v);
                    }
                    i
                }
            };
            let d = m.get(pivot_idx, pivot_idx).clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != pivot_idx);
            // Schur complement on the remaining active block.
            for &a in &active {
                let fa = m.get(a, pivot_idx) / &d;
                if fa.is_zero() {
                    continue;
                }
                for &b in &active {
                    let v = m.get(a, b) - &fa * m.get(pivot_idx, b);
                    m.set(a, b, v);
                }
                m.set(a, pivot_idx, Rat::zero());
                m.set(pivot_idx, a, Rat::zero());
            }
        }
        Ok((pos, neg))
    }
}

/// Scales a rational vector to integer entries with content one and a
/// positive first nonzero coordinate. The zero vector is returned as-is.
pub fn normalize_primitive(v: &[Rat]) -> Vec<Rat> {
    let mut d = BigInt::one();
    for x in v {
        d = d.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(d.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| if x.is_negative() { -1 } else { 1 })
        .unwrap_or(1);
    let g = g * BigInt::from(sign);
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &g))
        .collect()
}

/// Basis of the right kernel of `m` over the rationals, one vector per free
/// column of the reduced row echelon form, in ascending free-column order.
/// Each vector is normalized by [`normalize_primitive`]. Empty iff the
/// kernel is trivial.
pub fn kernel_basis(m: &QMat) -> Vec<Vec<Rat>> {
    let mut r = m.clone();
    let pivots = r.rref_in_place();
    let pivot_set: Vec<usize> = pivots.clone();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols()];
        v[free] = Rat::one();
        for (row, &pc) in pivot_set.iter().enumerate() {
            v[pc] = -r.get(row, free).clone();
        }
        basis.push(normalize_primitive(&v));
    }
    basis
}

/// Outcome of an exact linear solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// One exact solution, with the dimension of the solution space's
    /// translation lattice (`kernel_rank == 0` iff the solution is unique).
    Solved { x: Vec<Rat>, kernel_rank: usize },
    Infeasible,
}

/// Solves `A x = b` exactly. Free variables are set to zero in the returned
/// particular solution.
pub fn solve_linear(a: &QMat, b: &[Rat]) -> Result<LinearSolution, LinAlgError> {
    if a.rows() != b.len() {
        return Err(LinAlgError::DimMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let mut aug = QMat::from_fn(a.rows(), a.cols() + 1, |r, c| {
        if c < a.cols() {
            a.get(r, c).clone()
        } else {
            b[r].clone()
        }
    });
    let pivots = aug.rref_in_place();
    if pivots.contains(&a.cols()) {
        return Ok(LinearSolution::Infeasible);
    }
    let mut x = vec![Rat::zero(); a.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(row, a.cols()).clone();
    }
    Ok(LinearSolution::Solved {
        kernel_rank: a.cols() - pivots.len(),
        x,
    })
}
