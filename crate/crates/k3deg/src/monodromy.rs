//! Picard-Lefschetz reflections for A1 vanishing cycles, multi-node
//! composites, and the weight filtration `W2 = ker N`.
//!
//! A vanishing cycle is a (-2)-vector `gamma`; the monodromy around the
//! node acts by `T(v) = v + <v,gamma> gamma`. This is a reflection, so
//! `T^2 = Id` and `N = T - Id` satisfies `N^2 = -2N` (not `N^2 = 0`: with
//! `<gamma,gamma> = -2` the displayed operator has order two, and the
//! tests assert what the formula literally implies).

use crate::hodge::{HodgeError, RationalClass, WorkingBasis};
use crate::lattice::{pair, LatticeError, LatticeModel, LatticeVector};
use crate::linalg::{kernel_basis, QMat};
use crate::rat::Rat;
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("invalid vanishing cycle: self-pairing is {got}, expected -2")]
    InvalidCycle { got: String },
    #[error("cycles {i} and {j} are not orthogonal")]
    NonOrthogonal { i: usize, j: usize },
    #[error("no cycles given")]
    Empty,
    #[error("operator is not an isometry of the ambient Gram form")]
    NotIsometry,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A (-2)-vector labeled by its node index.
#[derive(Debug, Clone)]
pub struct VanishingCycle {
    vec: LatticeVector,
    label: usize,
}

impl VanishingCycle {
    /// Wraps a vector after checking `<gamma,gamma> = -2` exactly.
    pub fn new(vec: LatticeVector, label: usize) -> Result<Self, MonodromyError> {
        let sq = pair(&vec, &vec)?;
        if sq != crate::rat::rat_i(-2) {
            return Err(MonodromyError::InvalidCycle {
                got: sq.to_string(),
            });
        }
        Ok(VanishingCycle { vec, label })
    }

    pub fn vector(&self) -> &LatticeVector {
        &self.vec
    }

    pub fn label(&self) -> usize {
        self.label
    }
}

/// Monodromy operator `T` with its logarithm `N = T - Id`.
#[derive(Debug, Clone)]
pub struct MonodromyOperator {
    t: QMat,
    n: QMat,
    ambient: Arc<LatticeModel>,
}

impl MonodromyOperator {
    /// Wraps a matrix after verifying `T^t G T = G` exactly.
    pub fn new(t: QMat, ambient: Arc<LatticeModel>) -> Result<Self, MonodromyError> {
        let g = ambient.gram().to_qmat();
        let tgt = t
            .transpose()
            .mul(&g)
            .and_then(|m| m.mul(&t))
            .map_err(|_| MonodromyError::NotIsometry)?;
        if tgt != g {
            return Err(MonodromyError::NotIsometry);
        }
        let n = t
            .sub(&QMat::identity(ambient.dim()))
            .expect("square matrices of equal dimension");
        Ok(MonodromyOperator { t, n, ambient })
    }

    pub fn t(&self) -> &QMat {
        &self.t
    }

    pub fn n(&self) -> &QMat {
        &self.n
    }

    pub fn ambient(&self) -> &Arc<LatticeModel> {
        &self.ambient
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector, MonodromyError> {
        let coords = self
            .t
            .mul_vec(v.coords())
            .map_err(|_| MonodromyError::Lattice(LatticeError::AmbientMismatch))?;
        Ok(self.ambient.vector(coords)?)
    }
}

/// The Picard-Lefschetz reflection `v -> v + <v,gamma> gamma`.
pub fn pl_reflect(gamma: &VanishingCycle) -> MonodromyOperator {
    let ambient = Arc::clone(gamma.vector().ambient());
    let dim = ambient.dim();
    let g = ambient.gram().to_qmat();
    // w = G * gamma, so <e_i, gamma> = w_i and T = Id + gamma w^T.
    let w = g
        .mul_vec(gamma.vector().coords())
        .expect("gamma has ambient length");
    let gc = gamma.vector().coords();
    let mut t = QMat::identity(dim);
    for (r, gr) in gc.iter().enumerate() {
        if gr.is_zero() {
            continue;
        }
        for (c, wc) in w.iter().enumerate() {
            if wc.is_zero() {
                continue;
            }
            let v = t.get(r, c) + gr * wc;
            t.set(r, c, v);
        }
    }
    MonodromyOperator::new(t, ambient).expect("a PL reflection preserves the pairing")
}

/// Composite monodromy of several mutually orthogonal cycles, together
/// with the sum of the individual logarithms.
#[derive(Debug, Clone)]
pub struct CompositeMonodromy {
    pub operator: MonodromyOperator,
    /// `sum_i N_i`; equals `T - Id` when the cycles are orthogonal.
    pub n_sum: QMat,
}

/// Product `T_1 ... T_k` of the reflections of mutually orthogonal cycles.
/// Orthogonality is checked pairwise and makes the product order-free.
pub fn compose_nodes(gammas: &[VanishingCycle]) -> Result<CompositeMonodromy, MonodromyError> {
    let first = gammas.first().ok_or(MonodromyError::Empty)?;
    for (i, gi) in gammas.iter().enumerate() {
        for (j, gj) in gammas.iter().enumerate().skip(i + 1) {
            if !pair(gi.vector(), gj.vector())?.is_zero() {
                return Err(MonodromyError::NonOrthogonal { i, j });
            }
        }
    }
    let ambient = Arc::clone(first.vector().ambient());
    let dim = ambient.dim();
    let mut t = QMat::identity(dim);
    let mut n_sum = QMat::zeros(dim, dim);
    for gamma in gammas {
        let refl = pl_reflect(gamma);
        t = t.mul(refl.t()).expect("square matrices compose");
        n_sum = n_sum.add(refl.n()).expect("equal dimensions");
    }
    let operator = MonodromyOperator::new(t, ambient)?;
    Ok(CompositeMonodromy { operator, n_sum })
}

/// Weight filtration data of a monodromy operator: a basis of
/// `W2 = ker N` and the graded dimensions.
#[derive(Debug, Clone)]
pub struct WeightFiltration {
    pub w2_basis: Vec<Vec<Rat>>,
    pub gr2_dim: usize,
    pub gr3_dim: usize,
}

/// `W2 = ker N`; `gr2 = dim ker N`, `gr3 = dim - gr2`.
pub fn weight_filtration(op: &MonodromyOperator) -> WeightFiltration {
    let w2_basis = kernel_basis(op.n());
    let gr2_dim = w2_basis.len();
    let gr3_dim = op.ambient().dim() - gr2_dim;
    WeightFiltration {
        w2_basis,
        gr2_dim,
        gr3_dim,
    }
}

/// A random (-2)-cycle: a basis root rotated through a random rational
/// angle inside a random coordinate 2-plane, so its entries are genuinely
/// fractional while the square stays -2 exactly.
pub fn random_cycle(basis: &WorkingBasis, rng: &mut impl rand::Rng) -> VanishingCycle {
    let s = basis.s();
    let j1 = rng.gen_range(1..=s);
    let mut j2 = rng.gen_range(1..=s);
    while s > 1 && j2 == j1 {
        j2 = rng.gen_range(1..=s);
    }
    let (c, sn) = random_unit(rng);
    let mut coords = vec![Rat::zero(); basis.dim()];
    coords[j1] = c;
    if j2 != j1 {
        coords[j2] = sn;
    } else {
        coords[j1] = crate::rat::rat_i(1);
    }
    let v = basis
        .lattice()
        .vector(coords)
        .expect("coords match ambient");
    VanishingCycle::new(v, 0).expect("rotated root has square -2")
}

/// A random orthogonal pair of (-2)-cycles spanning a rotated coordinate
/// 2-plane.
pub fn random_orthogonal_pair(
    basis: &WorkingBasis,
    rng: &mut impl rand::Rng,
) -> (VanishingCycle, VanishingCycle) {
    let s = basis.s();
    assert!(s >= 2, "need two transcendental directions");
    let j1 = rng.gen_range(1..=s);
    let mut j2 = rng.gen_range(1..=s);
    while j2 == j1 {
        j2 = rng.gen_range(1..=s);
    }
    let (c, sn) = random_unit(rng);
    let mut g1 = vec![Rat::zero(); basis.dim()];
    let mut g2 = vec![Rat::zero(); basis.dim()];
    g1[j1] = c.clone();
    g1[j2] = sn.clone();
    g2[j1] = -sn;
    g2[j2] = c;
    let v1 = basis.lattice().vector(g1).expect("ambient length");
    let v2 = basis.lattice().vector(g2).expect("ambient length");
    (
        VanishingCycle::new(v1, 1).expect("square -2"),
        VanishingCycle::new(v2, 2).expect("square -2"),
    )
}

/// Random rational point on the unit circle via the Pythagorean
/// parametrization.
fn random_unit(rng: &mut impl rand::Rng) -> (Rat, Rat) {
    let p = rng.gen_range(-4i64..=4);
    let q = rng.gen_range(1i64..=5);
    let denom = crate::rat::rat_i(p * p + q * q);
    (
        crate::rat::rat_i(q * q - p * p) / &denom,
        crate::rat::rat_i(2 * p * q) / &denom,
    )
}

/// The pairing vector `l_i = <alpha, gamma_i>`.
pub fn pairing_vector(
    alpha: &RationalClass,
    gammas: &[VanishingCycle],
    basis: &WorkingBasis,
) -> Result<Vec<Rat>, HodgeError> {
    let av = alpha.to_vector(basis)?;
    gammas
        .iter()
        .map(|g| pair(&av, g.vector()).map_err(HodgeError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    fn wb(s: usize) -> WorkingBasis {
        WorkingBasis::new(s).unwrap()
    }

    fn cycle_v(basis: &WorkingBasis, j: usize, label: usize) -> VanishingCycle {
        VanishingCycle::new(basis.v(j), label).unwrap()
    }

    #[test]
    fn rejects_non_root() {
        let b = wb(2);
        assert!(matches!(
            VanishingCycle::new(b.h(), 0),
            Err(MonodromyError::InvalidCycle { .. })
        ));
    }

    #[test]
    fn reflection_negates_its_cycle_and_fixes_the_complement() {
        let b = wb(2);
        let gamma = cycle_v(&b, 1, 1);
        let op = pl_reflect(&gamma);
        let img = op.apply(gamma.vector()).unwrap();
        let neg: Vec<Rat> = gamma.vector().coords().iter().map(|c| -c).collect();
        assert_eq!(img.coords(), &neg[..]);
        // h and v2 pair to zero with v1, so they are fixed.
        assert_eq!(op.apply(&b.h()).unwrap(), b.h());
        assert_eq!(op.apply(&b.v(2)).unwrap(), b.v(2));
    }

    #[test]
    fn single_reflection_matrix_on_small_basis() {
        // s = 2, gamma = v1: T = diag(1, -1, 1).
        let b = wb(2);
        let op = pl_reflect(&cycle_v(&b, 1, 1));
        let mut expect = QMat::identity(3);
        expect.set(1, 1, rat_i(-1));
        assert_eq!(op.t(), &expect);
    }

    #[test]
    fn involution_and_n_squared() {
        let b = wb(3);
        let op = pl_reflect(&cycle_v(&b, 2, 1));
        let t2 = op.t().mul(op.t()).unwrap();
        assert_eq!(t2, QMat::identity(4));
        let n2 = op.n().mul(op.n()).unwrap();
        let minus_2n = QMat::from_fn(4, 4, |r, c| op.n().get(r, c) * rat_i(-2));
        assert_eq!(n2, minus_2n);
    }

    #[test]
    fn orthogonal_reflections_commute_and_annihilate() {
        let b = wb(3);
        let g1 = cycle_v(&b, 1, 1);
        let g2 = cycle_v(&b, 3, 2);
        let r1 = pl_reflect(&g1);
        let r2 = pl_reflect(&g2);
        assert_eq!(r1.t().mul(r2.t()).unwrap(), r2.t().mul(r1.t()).unwrap());
        assert!(r1.n().mul(r2.n()).unwrap().is_zero());
        assert!(r2.n().mul(r1.n()).unwrap().is_zero());
    }

    #[test]
    fn composite_is_identity_plus_n_sum() {
        let b = wb(4);
        let gammas: Vec<_> = (1..=3).map(|j| cycle_v(&b, j, j)).collect();
        let comp = compose_nodes(&gammas).unwrap();
        let id_plus = QMat::identity(5).add(&comp.n_sum).unwrap();
        assert_eq!(comp.operator.t(), &id_plus);
        assert_eq!(comp.operator.n(), &comp.n_sum);
    }

    #[test]
    fn composite_negates_the_cycle_span() {
        let b = wb(4);
        let gammas: Vec<_> = (1..=4).map(|j| cycle_v(&b, j, j)).collect();
        let comp = compose_nodes(&gammas).unwrap();
        for g in &gammas {
            let img = comp.operator.apply(g.vector()).unwrap();
            let neg: Vec<Rat> = g.vector().coords().iter().map(|c| -c).collect();
            assert_eq!(img.coords(), &neg[..]);
        }
    }

    #[test]
    fn non_orthogonal_pair_rejected() {
        let b = wb(2);
        let g1 = cycle_v(&b, 1, 1);
        let g2 = VanishingCycle::new(b.v(1), 2).unwrap();
        assert!(matches!(
            compose_nodes(&[g1, g2]),
            Err(MonodromyError::NonOrthogonal { .. })
        ));
    }

    #[test]
    fn weight_filtration_of_zero_n_is_everything() {
        let b = wb(2);
        let op = MonodromyOperator::new(QMat::identity(3), Arc::clone(b.lattice())).unwrap();
        let w = weight_filtration(&op);
        assert_eq!(w.gr2_dim, 3);
        assert_eq!(w.gr3_dim, 0);
    }

    #[test]
    fn weight_filtration_single_cycle() {
        // s = 2, gamma = v1: ker N = span(h, v2).
        let b = wb(2);
        let op = pl_reflect(&cycle_v(&b, 1, 1));
        let w = weight_filtration(&op);
        assert_eq!(w.gr2_dim, 2);
        assert_eq!(w.gr3_dim, 1);
        for v in &w.w2_basis {
            assert!(op.n().mul_vec(v).unwrap().iter().all(Rat::is_zero));
            // No v1 component survives in ker N.
            assert!(v[1].is_zero());
        }
    }

    #[test]
    fn weight_filtration_general_position() {
        let b = wb(6);
        let gammas: Vec<_> = (1..=4).map(|j| cycle_v(&b, j, j)).collect();
        let comp = compose_nodes(&gammas).unwrap();
        let w = weight_filtration(&comp.operator);
        assert_eq!(w.gr2_dim, 7 - 4);
        assert_eq!(w.gr3_dim, 4);
    }

    #[test]
    fn pairing_vector_examples() {
        let b = wb(19);
        let alpha = RationalClass::from_sparse(
            rat_i(1),
            &[(1, rat_i(2)), (2, rat_i(-5))],
            19,
        )
        .unwrap();
        let gammas = vec![cycle_v(&b, 1, 1), cycle_v(&b, 2, 2), cycle_v(&b, 3, 3)];
        let l = pairing_vector(&alpha, &gammas, &b).unwrap();
        assert_eq!(l, vec![rat_i(-4), rat_i(10), rat_i(0)]);
    }

    #[test]
    fn kernel_contains_orthogonal_complement_of_cycle_span() {
        let b = wb(5);
        let gammas: Vec<_> = [1usize, 3, 5]
            .iter()
            .map(|&j| cycle_v(&b, j, j))
            .collect();
        let comp = compose_nodes(&gammas).unwrap();
        // Rows <gamma_i, .> of the pairing against the ambient basis.
        let g = b.lattice().gram().to_qmat();
        let rows: Vec<Vec<Rat>> = gammas
            .iter()
            .map(|gm| g.mul_vec(gm.vector().coords()).unwrap())
            .collect();
        let m = QMat::from_rows(rows).unwrap();
        for w in kernel_basis(&m) {
            assert!(comp.operator.n().mul_vec(&w).unwrap().iter().all(Rat::is_zero));
        }
    }
}
