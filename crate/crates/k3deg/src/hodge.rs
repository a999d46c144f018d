//! The working basis `(h, v_1, ..., v_s)` with `h^2 = 4` and `v_j^2 = -2`,
//! rational (1,1)-classes over it, and the node-count arithmetic that
//! drives the degeneration pipeline.
//!
//! `s` defaults to 19: the transcendental (1,1)-part of a very general
//! quartic has dimension `20 - rho` with `rho = 1`.

use crate::lattice::{LatticeError, LatticeModel, LatticeVector};
use crate::rat::{all_integral, common_denominator, l1_norm, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

/// Hard ceiling on the number of nodes a quartic degeneration may use.
pub const NODE_BOUND: usize = 10;

/// Default number of transcendental root directions.
pub const DEFAULT_S: usize = 19;

/// Largest supported working-basis size.
pub const MAX_S: usize = 21;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HodgeError {
    #[error("working basis size {0} out of range 1..={MAX_S}")]
    BasisSize(usize),
    #[error("coefficient vector length {got} does not match basis size {expected}")]
    CoefficientLength { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NodeCountError {
    /// Some transcendental coefficient is not an integer; scale the class
    /// first (see [`RationalClass::scale_to_integral`]).
    #[error("non-integral coefficients: node count requires integer a_j")]
    NonIntegral,
    /// The would-be node count exceeds the quartic bound; carries the exact
    /// value for diagnostics.
    #[error("node count {k} exceeds the bound {NODE_BOUND}")]
    OutOfRange { k: BigInt },
}

/// Orthogonal working basis `(h, v_1, ..., v_s)` with Gram
/// `diag(4, -2, ..., -2)`.
#[derive(Debug, Clone)]
pub struct WorkingBasis {
    s: usize,
    lattice: Arc<LatticeModel>,
}

impl WorkingBasis {
    pub fn new(s: usize) -> Result<Self, HodgeError> {
        if s == 0 || s > MAX_S {
            return Err(HodgeError::BasisSize(s));
        }
        let mut labels = Vec::with_capacity(1 + s);
        labels.push("h".to_string());
        for j in 1..=s {
            labels.push(format!("v{j}"));
        }
        let mut diag = vec![4i64];
        diag.extend(std::iter::repeat_n(-2, s));
        let lattice = Arc::new(LatticeModel::diagonal(labels, &diag)?);
        Ok(WorkingBasis { s, lattice })
    }

    /// The default rank-20 working basis (`s = 19`).
    pub fn default_k3() -> Self {
        Self::new(DEFAULT_S).expect("default basis size is in range")
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Ambient dimension `1 + s`.
    pub fn dim(&self) -> usize {
        1 + self.s
    }

    pub fn lattice(&self) -> &Arc<LatticeModel> {
        &self.lattice
    }

    /// The hyperplane direction `h` as a lattice vector.
    pub fn h(&self) -> LatticeVector {
        self.lattice.basis_vector(0)
    }

    /// The transcendental direction `v_j` (1-based).
    pub fn v(&self, j: usize) -> LatticeVector {
        assert!(
            (1..=self.s).contains(&j),
            "v index {j} out of range 1..={}",
            self.s
        );
        self.lattice.basis_vector(j)
    }
}

/// A rational class `a_0 h + sum_j a_j v_j` over a working basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalClass {
    a0: Rat,
    a: Vec<Rat>,
}

impl RationalClass {
    pub fn new(a0: Rat, a: Vec<Rat>) -> Self {
        RationalClass { a0, a }
    }

    /// The zero class over a basis with `s` transcendental directions.
    pub fn zero(s: usize) -> Self {
        RationalClass {
            a0: Rat::zero(),
            a: vec![Rat::zero(); s],
        }
    }

    /// Builds a class from 1-based `(index, coefficient)` pairs.
    pub fn from_sparse(
        a0: Rat,
        entries: &[(usize, Rat)],
        s: usize,
    ) -> Result<Self, HodgeError> {
        let mut a = vec![Rat::zero(); s];
        for (j, c) in entries {
            if *j == 0 || *j > s {
                return Err(HodgeError::CoefficientLength {
                    expected: s,
                    got: *j,
                });
            }
            a[j - 1] = c.clone();
        }
        Ok(RationalClass { a0, a })
    }

    pub fn a0(&self) -> &Rat {
        &self.a0
    }

    /// Transcendental coefficients, `a[j-1]` holding the coefficient of `v_j`.
    pub fn a(&self) -> &[Rat] {
        &self.a
    }

    pub fn s(&self) -> usize {
        self.a.len()
    }

    /// 1-based indices of the nonzero transcendental coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a.iter().all(Rat::is_zero)
    }

    /// Reassembles the class as a coordinate vector in the working basis.
    pub fn to_vector(&self, basis: &WorkingBasis) -> Result<LatticeVector, HodgeError> {
        if self.a.len() != basis.s() {
            return Err(HodgeError::CoefficientLength {
                expected: basis.s(),
                got: self.a.len(),
            });
        }
        let mut coords = Vec::with_capacity(basis.dim());
        coords.push(self.a0.clone());
        coords.extend(self.a.iter().cloned());
        Ok(basis.lattice().vector(coords)?)
    }

    /// Smallest positive integer `d` with all `d * a_j` integral, together
    /// with the scaled class `d * alpha`. `d = 1` for integral classes.
    pub fn scale_to_integral(&self) -> (BigInt, RationalClass) {
        let d = common_denominator(self.a.iter());
        let dr = Rat::from_integer(d.clone());
        let scaled = RationalClass {
            a0: &self.a0 * &dr,
            a: self.a.iter().map(|c| c * &dr).collect(),
        };
        (d, scaled)
    }
}

/// Decomposes a working-basis vector into `(a_0, a_j)` coefficients:
/// `a_0 = <alpha,h>/<h,h>` and `a_j = <alpha,v_j>/<v_j,v_j>`. The basis is
/// orthogonal, so reassembly reproduces the vector exactly.
pub fn decompose(basis: &WorkingBasis, alpha: &LatticeVector) -> Result<RationalClass, HodgeError> {
    if alpha.ambient().dim() != basis.dim() || *alpha.ambient() != *basis.lattice() {
        return Err(HodgeError::Lattice(LatticeError::AmbientMismatch));
    }
    let lat = basis.lattice();
    let h = basis.h();
    let hh = lat.pair_coords(h.coords(), h.coords())?;
    let a0 = crate::lattice::pair(alpha, &h)? / hh;
    let mut a = Vec::with_capacity(basis.s());
    for j in 1..=basis.s() {
        let vj = basis.v(j);
        let vv = lat.pair_coords(vj.coords(), vj.coords())?;
        a.push(crate::lattice::pair(alpha, &vj)? / vv);
    }
    Ok(RationalClass { a0, a })
}

/// The l1-size `sum_j |a_j|` (the `h` coefficient is excluded).
pub fn l1_size(class: &RationalClass) -> Rat {
    l1_norm(class.a.iter())
}

/// Node count `k = sum_j |a_j|` for an integral class, enforcing the
/// quartic bound `k <= 10`.
pub fn node_count(class: &RationalClass) -> Result<usize, NodeCountError> {
    if !all_integral(class.a.iter()) {
        return Err(NodeCountError::NonIntegral);
    }
    let k: BigInt = class.a.iter().map(|c| c.to_integer().abs()).sum();
    if k > BigInt::from(NODE_BOUND) {
        return Err(NodeCountError::OutOfRange { k });
    }
    // Fits usize: 0 <= k <= 10.
    Ok(usize::try_from(k).expect("bounded node count fits usize"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    fn class(a0: i64, entries: &[(usize, i64)], s: usize) -> RationalClass {
        RationalClass::from_sparse(
            rat_i(a0),
            &entries
                .iter()
                .map(|&(j, c)| (j, rat_i(c)))
                .collect::<Vec<_>>(),
            s,
        )
        .unwrap()
    }

    #[test]
    fn working_basis_gram() {
        let b = WorkingBasis::new(3).unwrap();
        let lat = b.lattice();
        let h = b.h();
        assert_eq!(crate::lattice::pair(&h, &h).unwrap(), rat_i(4));
        for j in 1..=3 {
            let vj = b.v(j);
            assert_eq!(crate::lattice::pair(&vj, &vj).unwrap(), rat_i(-2));
            assert_eq!(crate::lattice::pair(&h, &vj).unwrap(), rat_i(0));
        }
        assert_eq!(lat.labels(), &["h", "v1", "v2", "v3"]);
    }

    #[test]
    fn basis_size_limits() {
        assert!(WorkingBasis::new(0).is_err());
        assert!(WorkingBasis::new(MAX_S).is_ok());
        assert!(WorkingBasis::new(MAX_S + 1).is_err());
        assert_eq!(WorkingBasis::default_k3().s(), 19);
    }

    #[test]
    fn decompose_worked_example() {
        let b = WorkingBasis::default_k3();
        let alpha = class(1, &[(1, 2), (2, -5)], 19);
        let v = alpha.to_vector(&b).unwrap();
        let back = decompose(&b, &v).unwrap();
        assert_eq!(back, alpha);
        assert_eq!(back.a0(), &rat_i(1));
        assert_eq!(back.a()[0], rat_i(2));
        assert_eq!(back.a()[1], rat_i(-5));
    }

    #[test]
    fn decompose_pure_h() {
        let b = WorkingBasis::new(4).unwrap();
        let alpha = class(1, &[], 4);
        let back = decompose(&b, &alpha.to_vector(&b).unwrap()).unwrap();
        assert_eq!(back.a0(), &rat_i(1));
        assert!(back.a().iter().all(Rat::is_zero));
    }

    #[test]
    fn decompose_sparse_example() {
        let b = WorkingBasis::default_k3();
        let alpha = class(1, &[(5, 3), (13, -4), (17, 1)], 19);
        let back = decompose(&b, &alpha.to_vector(&b).unwrap()).unwrap();
        assert_eq!(back, alpha);
        assert_eq!(back.support(), vec![5, 13, 17]);
    }

    #[test]
    fn l1_sizes() {
        assert_eq!(l1_size(&class(1, &[(1, 2), (2, -5)], 19)), rat_i(7));
        assert_eq!(l1_size(&class(17, &[], 19)), rat_i(0));
        assert_eq!(
            l1_size(&class(1, &[(5, 3), (13, -4), (17, 1)], 19)),
            rat_i(8)
        );
    }

    #[test]
    fn node_counts() {
        assert_eq!(node_count(&class(1, &[(1, 2), (2, -5)], 19)), Ok(7));
        assert_eq!(node_count(&class(0, &[], 19)), Ok(0));
        assert_eq!(
            node_count(&class(1, &[(1, 8), (2, 8)], 19)),
            Err(NodeCountError::OutOfRange {
                k: BigInt::from(16)
            })
        );
    }

    #[test]
    fn node_count_rejects_non_integral() {
        let c = RationalClass::from_sparse(rat_i(1), &[(1, rat(1, 2))], 19).unwrap();
        assert_eq!(node_count(&c), Err(NodeCountError::NonIntegral));
        let (d, scaled) = c.scale_to_integral();
        assert_eq!(d, BigInt::from(2));
        assert_eq!(node_count(&scaled), Ok(1));
        assert_eq!(scaled.a0(), &rat_i(2));
    }

    #[test]
    fn fractional_a0_alone_needs_no_scaling() {
        let c = RationalClass::from_sparse(rat(1, 3), &[(2, rat_i(4))], 19).unwrap();
        assert_eq!(node_count(&c), Ok(4));
        let (d, _) = c.scale_to_integral();
        assert_eq!(d, BigInt::from(1));
    }
}
