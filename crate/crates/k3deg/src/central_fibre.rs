//! Lattice model of the resolved central fibre: the Picard lattice
//! `<h, E_1, ..., E_k>`, the Mayer-Vietoris kernel of the restriction map
//! to the double curves, and the specialization/lift maps.
//!
//! The Mayer-Vietoris source carries one coordinate `a` for `h` on the
//! quartic component and a pair `(b_i, c_i)` for the two rulings of each
//! exceptional quadric; the conic `C_i` along which the quadric meets the
//! quartic has ruling class `(1,1)`, so row `i` of the restriction matrix
//! reads `2a - (b_i + c_i)`.

use crate::hodge::{RationalClass, NODE_BOUND};
use crate::lattice::{GramMatrix, LatticeModel, LatticeVector};
use crate::linalg::{kernel_basis, solve_linear, LinearSolution, QMat};
use crate::pipeline::CycleConfiguration;
use crate::rat::{rat_i, Rat};
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CentralFibreError {
    #[error("node count {0} out of range 1..={NODE_BOUND}")]
    KOutOfRange(usize),
    #[error("multiplicity count {got} does not match node count {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("configuration pairing matrix is not invertible on the class support")]
    NonInvertibleTransport,
    #[error("multiplicities are inconsistent with the configuration")]
    InconsistentSystem,
    #[error("multiplicity count {got} does not match configuration size {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// The resolved central fibre with `k` exceptional (-2)-curves.
#[derive(Debug, Clone)]
pub struct CentralFibreModel {
    k: usize,
    pic: Arc<LatticeModel>,
    mv: QMat,
}

impl CentralFibreModel {
    fn assemble(k: usize) -> Self {
        let mut labels = vec!["h".to_string()];
        let mut diag = vec![4i64];
        for i in 1..=k {
            labels.push(format!("E{i}"));
            diag.push(-2);
        }
        let pic = Arc::new(
            LatticeModel::diagonal(labels, &diag).expect("central fibre labels are distinct"),
        );
        // Row i: 2a - b_i - c_i on coordinates (a; b_1, c_1, ..., b_k, c_k).
        let mv = QMat::from_fn(k, 1 + 2 * k, |r, c| {
            if c == 0 {
                rat_i(2)
            } else if c == 1 + 2 * r || c == 2 + 2 * r {
                rat_i(-1)
            } else {
                Rat::zero()
            }
        });
        CentralFibreModel { k, pic, mv }
    }

    /// The node-free model (`k = 0`): Picard lattice `<h>` alone.
    pub fn trivial() -> Self {
        Self::assemble(0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pic(&self) -> &Arc<LatticeModel> {
        &self.pic
    }

    /// The restriction-difference matrix of the Mayer-Vietoris model.
    pub fn mv_matrix(&self) -> &QMat {
        &self.mv
    }

    /// Gram matrix of the Mayer-Vietoris source: `h^2 = 4` on the quartic
    /// coordinate and a hyperbolic ruling block per exceptional quadric.
    pub fn mv_source_gram(&self) -> GramMatrix {
        let u = crate::lattice::hyperbolic_gram();
        let h_block = GramMatrix::diagonal(&[4]);
        let mut blocks = vec![h_block];
        blocks.extend(std::iter::repeat_n(u, self.k));
        GramMatrix::block_diagonal(&blocks)
    }

    /// The kernel element `(0; ..., b_i = 1, c_i = -1, ...)` representing
    /// the exceptional curve `E_i` (1-based), of self-pairing -2 under the
    /// ruling pairing.
    pub fn exceptional_kernel_vector(&self, i: usize) -> Vec<Rat> {
        assert!((1..=self.k).contains(&i), "node index out of range");
        let mut v = vec![Rat::zero(); 1 + 2 * self.k];
        v[2 * i - 1] = rat_i(1);
        v[2 * i] = rat_i(-1);
        v
    }

    /// The h-like kernel generator `(1; 1, 1, ..., 1, 1)`.
    pub fn hyperplane_kernel_vector(&self) -> Vec<Rat> {
        vec![rat_i(1); 1 + 2 * self.k]
    }
}

/// Builds the central fibre model for `k` nodes, `1 <= k <= 10`.
pub fn build_central_fibre(k: usize) -> Result<CentralFibreModel, CentralFibreError> {
    if k == 0 || k > NODE_BOUND {
        return Err(CentralFibreError::KOutOfRange(k));
    }
    Ok(CentralFibreModel::assemble(k))
}

/// Basis of the Mayer-Vietoris kernel, of rank `1 + k`.
pub fn mv_kernel(model: &CentralFibreModel) -> Vec<Vec<Rat>> {
    kernel_basis(model.mv_matrix())
}

/// A specialized class `m_0 h + sum_i m_i [E_i]` on the central fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedClass {
    m0: Rat,
    m: Vec<Rat>,
}

impl SpecializedClass {
    pub fn new(m0: Rat, m: Vec<Rat>) -> Self {
        SpecializedClass { m0, m }
    }

    pub fn m0(&self) -> &Rat {
        &self.m0
    }

    pub fn m(&self) -> &[Rat] {
        &self.m
    }

    pub fn to_vector(&self, model: &CentralFibreModel) -> LatticeVector {
        let mut coords = Vec::with_capacity(1 + self.m.len());
        coords.push(self.m0.clone());
        coords.extend(self.m.iter().cloned());
        model
            .pic()
            .vector(coords)
            .expect("specialized class length matches pic rank")
    }

    /// `<alpha_0, E_i>` in the Picard lattice (1-based `i`), equal to `-2 m_i`.
    pub fn pair_with_exceptional(&self, i: usize) -> Rat {
        rat_i(-2) * &self.m[i - 1]
    }

    /// `<alpha_0, h>` in the Picard lattice, equal to `4 m_0`.
    pub fn pair_with_h(&self) -> Rat {
        rat_i(4) * &self.m0
    }
}

/// Specializes a class: `m_0 = a_0` (degree preservation) with the solved
/// node multiplicities.
pub fn specialize(
    alpha: &RationalClass,
    m: &[Rat],
    model: &CentralFibreModel,
) -> Result<SpecializedClass, CentralFibreError> {
    if m.len() != model.k() {
        return Err(CentralFibreError::LengthMismatch {
            expected: model.k(),
            got: m.len(),
        });
    }
    Ok(SpecializedClass {
        m0: alpha.a0().clone(),
        m: m.to_vec(),
    })
}

/// Transports a specialized class back to the working basis by inverting
/// the pairing correspondence `E_i <-> gamma_i`, `m_i = -<alpha,gamma_i>/2`.
/// Exact round trip `lift(specialize(alpha)) = alpha` whenever the
/// configuration's pairing matrix is invertible on the support.
pub fn lift(
    alpha0: &SpecializedClass,
    config: &CycleConfiguration,
    s: usize,
) -> Result<RationalClass, LiftError> {
    let k = config.k();
    if alpha0.m().len() != k {
        return Err(LiftError::LengthMismatch {
            expected: k,
            got: alpha0.m().len(),
        });
    }
    let support = config.support();
    let mut a = vec![Rat::zero(); s];
    if support.is_empty() {
        return Ok(RationalClass::new(alpha0.m0().clone(), a));
    }
    // <alpha, gamma_i> = -2 m_i; subtract the h-contribution a0 <h, gamma_i>.
    let rhs: Vec<Rat> = (0..k)
        .map(|i| {
            rat_i(-2) * &alpha0.m()[i] - alpha0.m0() * config.h_pairing(i)
        })
        .collect();
    match solve_linear(config.pairing_matrix(), &rhs)
        .map_err(|_| LiftError::NonInvertibleTransport)?
    {
        LinearSolution::Solved { x, kernel_rank } => {
            if kernel_rank > 0 {
                return Err(LiftError::NonInvertibleTransport);
            }
            for (col, &j) in support.iter().enumerate() {
                a[j - 1] = x[col].clone();
            }
            Ok(RationalClass::new(alpha0.m0().clone(), a))
        }
        LinearSolution::Infeasible => Err(LiftError::InconsistentSystem),
    }
}
