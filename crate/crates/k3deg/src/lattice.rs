//! Integer lattices with labeled bases: Gram matrices, pairings, and the
//! rank-22 K3 lattice `U^3 + E8(-1)^2`.

use crate::linalg::{LinAlgError, QMat};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("label count {labels} does not match Gram dimension {dim}")]
    LabelCount { labels: usize, dim: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("vector length {got} does not match lattice dimension {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("vectors live in different ambient lattices")]
    AmbientMismatch,
    #[error("Gram matrix is degenerate")]
    DegenerateGram,
}

/// Symmetric integer Gram matrix of a bilinear pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<BigInt>, // row-major, dim*dim
}

impl GramMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        Self::from_bigint_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(LatticeError::NotSquare);
        }
        let entries: Vec<BigInt> = rows.into_iter().flatten().collect();
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        Ok(GramMatrix { dim, entries })
    }

    /// Block-diagonal assembly.
    pub fn block_diagonal(blocks: &[GramMatrix]) -> GramMatrix {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let mut entries = vec![BigInt::zero(); dim * dim];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    entries[(off + i) * dim + (off + j)] = b.entry(i, j).clone();
                }
            }
            off += b.dim;
        }
        GramMatrix { dim, entries }
    }

    pub fn diagonal(diag: &[i64]) -> GramMatrix {
        let dim = diag.len();
        let mut entries = vec![BigInt::zero(); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = BigInt::from(d);
        }
        GramMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    /// Every diagonal entry lies in 2Z.
    pub fn is_even(&self) -> bool {
        (0..self.dim).all(|i| self.entry(i, i).is_even())
    }

    pub fn to_qmat(&self) -> QMat {
        QMat::from_fn(self.dim, self.dim, |r, c| {
            Rat::from_integer(self.entry(r, c).clone())
        })
    }

    /// Exact determinant (an integer for an integer Gram matrix).
    pub fn det(&self) -> BigInt {
        let d = self.to_qmat().det().expect("gram matrix is square");
        debug_assert!(d.is_integer());
        d.to_integer()
    }
}

/// A labeled basis together with its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeModel {
    labels: Vec<String>,
    gram: GramMatrix,
}

impl LatticeModel {
    pub fn new(labels: Vec<String>, gram: GramMatrix) -> Result<Self, LatticeError> {
        if labels.len() != gram.dim() {
            return Err(LatticeError::LabelCount {
                labels: labels.len(),
                dim: gram.dim(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        Ok(LatticeModel { labels, gram })
    }

    /// Diagonal lattice with the given labels and diagonal squares.
    pub fn diagonal(labels: Vec<String>, diag: &[i64]) -> Result<Self, LatticeError> {
        Self::new(labels, GramMatrix::diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    /// Index of a label, if present.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Wraps coordinates as a vector in this lattice.
    pub fn vector(self: &Arc<Self>, coords: Vec<Rat>) -> Result<LatticeVector, LatticeError> {
        if coords.len() != self.dim() {
            return Err(LatticeError::VectorLength {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(LatticeVector {
            coords,
            ambient: Arc::clone(self),
        })
    }

    /// The `i`-th basis vector.
    pub fn basis_vector(self: &Arc<Self>, i: usize) -> LatticeVector {
        let mut coords = vec![Rat::zero(); self.dim()];
        coords[i] = Rat::from_integer(BigInt::from(1));
        LatticeVector {
            coords,
            ambient: Arc::clone(self),
        }
    }

    /// Pairing of raw coordinate slices under this Gram matrix.
    pub fn pair_coords(&self, u: &[Rat], v: &[Rat]) -> Result<Rat, LatticeError> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(LatticeError::VectorLength {
                expected: self.dim(),
                got: if u.len() != self.dim() {
                    u.len()
                } else {
                    v.len()
                },
            });
        }
        let mut acc = Rat::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let g = self.gram.entry(i, j);
                if g.is_zero() || vj.is_zero() {
                    continue;
                }
                acc += ui * vj * Rat::from_integer(g.clone());
            }
        }
        Ok(acc)
    }
}

/// A rational coordinate vector tied to its ambient lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector {
    coords: Vec<Rat>,
    ambient: Arc<LatticeModel>,
}

impl LatticeVector {
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn ambient(&self) -> &Arc<LatticeModel> {
        &self.ambient
    }
}

/// Exact cup-product pairing `u^T G v`. Rejects vectors from different
/// ambient lattices.
pub fn pair(u: &LatticeVector, v: &LatticeVector) -> Result<Rat, LatticeError> {
    if !Arc::ptr_eq(&u.ambient, &v.ambient) && u.ambient != v.ambient {
        return Err(LatticeError::AmbientMismatch);
    }
    u.ambient.pair_coords(&u.coords, &v.coords)
}

/// Exact signature `(n_plus, n_minus)` of a lattice's Gram form.
pub fn signature(m: &LatticeModel) -> Result<(usize, usize), LatticeError> {
    m.gram().to_qmat().signature_symmetric().map_err(|e| match e {
        LinAlgError::Degenerate => LatticeError::DegenerateGram,
        _ => LatticeError::NotSquare,
    })
}

/// Gram matrix of the hyperbolic plane `U`.
pub fn hyperbolic_gram() -> GramMatrix {
    GramMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).expect("U block is symmetric")
}

/// Dynkin-diagram edges of E8 in the Bourbaki node ordering: the chain
/// 1-3-4-5-6-7-8 with node 2 attached to node 4.
pub const E8_EDGES: [(usize, usize); 7] = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

/// The even positive-definite E8 Gram matrix (Cartan matrix in the Bourbaki
/// node ordering), negated when `negate` is set.
pub fn e8_gram(negate: bool) -> GramMatrix {
    let s = if negate { -1 } else { 1 };
    let mut rows = vec![vec![0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2 * s;
    }
    for &(i, j) in &E8_EDGES {
        rows[i][j] = -s;
        rows[j][i] = -s;
    }
    GramMatrix::from_rows(rows).expect("E8 Cartan matrix is symmetric")
}

/// Builds the K3 lattice `U^3 + E8(-1)^2`: rank 22, even, unimodular, of
/// signature (3,19). Basis labels are `e1,f1,e2,f2,e3,f3` for the three
/// hyperbolic blocks followed by `a1..a8` and `b1..b8` for the two negated
/// E8 blocks (Bourbaki node ordering).
pub fn build_k3_lattice() -> Arc<LatticeModel> {
    let u = hyperbolic_gram();
    let e8m = e8_gram(true);
    let gram = GramMatrix::block_diagonal(&[u.clone(), u.clone(), u, e8m.clone(), e8m]);
    let mut labels = Vec::with_capacity(22);
    for i in 1..=3 {
        labels.push(format!("e{i}"));
        labels.push(format!("f{i}"));
    }
    for i in 1..=8 {
        labels.push(format!("a{i}"));
    }
    for i in 1..=8 {
        labels.push(format!("b{i}"));
    }
    Arc::new(LatticeModel::new(labels, gram).expect("K3 lattice construction is well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    #[test]
    fn k3_lattice_shape() {
        let l = build_k3_lattice();
        assert_eq!(l.dim(), 22);
        assert!(l.gram().is_even());
        assert_eq!(l.gram().det(), BigInt::from(-1));
    }

    #[test]
    fn k3_lattice_signature() {
        let l = build_k3_lattice();
        assert_eq!(signature(&l).unwrap(), (3, 19));
    }

    #[test]
    fn hyperbolic_pairings() {
        let l = build_k3_lattice();
        let e = l.basis_vector(0);
        let f = l.basis_vector(1);
        assert_eq!(pair(&e, &f).unwrap(), rat_i(1));
        assert_eq!(pair(&e, &e).unwrap(), rat_i(0));
    }

    #[test]
    fn e8_block_is_negative_definite() {
        let m = LatticeModel::new(
            (1..=8).map(|i| format!("a{i}")).collect(),
            e8_gram(true),
        )
        .unwrap();
        assert_eq!(signature(&m).unwrap(), (0, 8));
        assert_eq!(m.gram().det(), BigInt::from(1));
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let l1 = build_k3_lattice();
        let l2 = Arc::new(LatticeModel::diagonal(vec!["h".into()], &[4]).unwrap());
        let u = l1.basis_vector(0);
        let v = l2.basis_vector(0);
        assert_eq!(pair(&u, &v), Err(LatticeError::AmbientMismatch));
    }

    #[test]
    fn degenerate_gram_detected() {
        let m = LatticeModel::new(
            vec!["x".into(), "y".into()],
            GramMatrix::from_rows(vec![vec![2, 0], vec![0, 0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(signature(&m), Err(LatticeError::DegenerateGram));
    }

    #[test]
    fn signature_of_diag_4_m2_m2() {
        let m = LatticeModel::diagonal(
            vec!["h".into(), "v1".into(), "v2".into()],
            &[4, -2, -2],
        )
        .unwrap();
        assert_eq!(signature(&m).unwrap(), (1, 2));
    }
}
