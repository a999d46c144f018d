//! Quartic surfaces over the rationals with prescribed A1 nodes.
//!
//! A node at a fixed point imposes the four linear conditions
//! `grad f(p) = 0` on the 35 quartic coefficients (`f(p) = 0` follows from
//! the Euler relation), plus the open condition that the affine 3x3
//! Hessian has rank 3. With `4k > 35` the fixed-point system is exactly
//! infeasible, which the solver reports rather than hiding.

use crate::hodge::NODE_BOUND;
use crate::linalg::{kernel_basis, QMat};
use crate::poly::{monomials_deg4, Exp4, HomPoly4, ProjPoint};
use crate::rat::{rat_i, Rat};
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NodalError {
    #[error("node count {0} out of range 1..={NODE_BOUND}")]
    KOutOfRange(usize),
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error(
        "system exactly infeasible: {conditions} linear conditions on 35 coefficients \
         have rank {rank}, solution space dimension 0"
    )]
    Infeasible { conditions: usize, rank: usize },
    #[error(
        "exactly infeasible by degeneracy: the {solution_dim}-dimensional solution space \
         ({conditions} conditions of rank {rank}) has an identically singular affine \
         Hessian at point {point}, so no element is an A1 node there"
    )]
    DegenerateOnly {
        conditions: usize,
        rank: usize,
        solution_dim: usize,
        /// 0-based index of a prescribed point at which every solution fails.
        point: usize,
    },
    #[error("no sampled solution passed the Hessian witness in {tries} tries")]
    NoWitness { tries: usize },
}

impl NodalError {
    /// True for outcomes that prove no valid nodal quartic exists for the
    /// prescription (as opposed to inconclusive sampling failure).
    pub fn is_exactly_infeasible(&self) -> bool {
        matches!(
            self,
            NodalError::Infeasible { .. } | NodalError::DegenerateOnly { .. }
        )
    }
}

/// Validation failure of a nodal family, naming the point and condition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("component counts differ: {points} points, {perturbations} perturbations, {lambdas} lambdas")]
    CountMismatch {
        points: usize,
        perturbations: usize,
        lambdas: usize,
    },
    #[error("node count {0} out of range 1..={NODE_BOUND}")]
    KOutOfRange(usize),
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("lambda[{0}] must be nonzero")]
    LambdaZero(usize),
    #[error("point {point}: {condition}")]
    NodeCondition {
        point: usize,
        condition: NodeCondition,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NodeCondition {
    #[error("gradient of f0 does not vanish")]
    GradientNotZero,
    #[error("affine Hessian rank is {0}, expected 3")]
    HessianRankDeficient(usize),
    #[error("perturbation does not vanish at the point")]
    PerturbationNotVanishing,
    #[error("perturbation gradient vanishes at the point")]
    PerturbationGradientZero,
}

/// Exact per-node witness data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeWitness {
    /// `grad f0(p_i)`; all zero for a valid family.
    pub f_gradient: [Rat; 4],
    /// Rank of the affine 3x3 Hessian of `f0` at `p_i`; 3 for an A1 node.
    pub hessian_rank: usize,
    /// `g_i(p_i)`; zero for a valid family.
    pub g_value: Rat,
    /// `grad g_i(p_i)`; nonzero for a valid family.
    pub g_gradient: [Rat; 4],
}

impl NodeWitness {
    pub fn passes(&self) -> bool {
        self.f_gradient.iter().all(Rat::is_zero)
            && self.hessian_rank == 3
            && self.g_value.is_zero()
            && self.g_gradient.iter().any(|c| !c.is_zero())
    }
}

/// A one-parameter quartic family `f0 + t sum_i lambda_i g_i` whose central
/// fibre has verified A1 nodes at the given points.
#[derive(Debug, Clone)]
pub struct NodalFamily {
    f0: HomPoly4,
    points: Vec<ProjPoint>,
    g: Vec<HomPoly4>,
    lambda: Vec<Rat>,
    witnesses: Vec<NodeWitness>,
}

impl NodalFamily {
    pub fn f0(&self) -> &HomPoly4 {
        &self.f0
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn perturbations(&self) -> &[HomPoly4] {
        &self.g
    }

    pub fn lambda(&self) -> &[Rat] {
        &self.lambda
    }

    pub fn witnesses(&self) -> &[NodeWitness] {
        &self.witnesses
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    /// The fibre `f0 + t * sum_i lambda_i g_i`.
    pub fn fiber_at(&self, t: &Rat) -> HomPoly4 {
        let mut sum = HomPoly4::zero();
        for (gi, li) in self.g.iter().zip(&self.lambda) {
            sum = sum.add(&gi.scale(li));
        }
        self.f0.add(&sum.scale(t))
    }
}

/// Computes the gradient/Hessian witness of `f` at one point.
pub fn node_witness_of(f: &HomPoly4, p: &ProjPoint, g: &HomPoly4) -> NodeWitness {
    NodeWitness {
        f_gradient: f.gradient(p.coords()),
        hessian_rank: f.affine_hessian_rank(p),
        g_value: g.eval(p.coords()),
        g_gradient: g.gradient(p.coords()),
    }
}

fn check_distinct(points: &[ProjPoint]) -> Option<(usize, usize)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Validates family data and records exact witnesses.
pub fn build_family(
    f0: HomPoly4,
    points: Vec<ProjPoint>,
    g: Vec<HomPoly4>,
    lambda: Vec<Rat>,
) -> Result<NodalFamily, FamilyError> {
    if points.len() != g.len() || points.len() != lambda.len() {
        return Err(FamilyError::CountMismatch {
            points: points.len(),
            perturbations: g.len(),
            lambdas: lambda.len(),
        });
    }
    let k = points.len();
    if k == 0 || k > NODE_BOUND {
        return Err(FamilyError::KOutOfRange(k));
    }
    if let Some((i, j)) = check_distinct(&points) {
        return Err(FamilyError::DuplicatePoints { i, j });
    }
    for (i, l) in lambda.iter().enumerate() {
        if l.is_zero() {
            return Err(FamilyError::LambdaZero(i));
        }
    }
    let mut witnesses = Vec::with_capacity(k);
    for (i, (p, gi)) in points.iter().zip(&g).enumerate() {
        let w = node_witness_of(&f0, p, gi);
        if w.f_gradient.iter().any(|c| !c.is_zero()) {
            return Err(FamilyError::NodeCondition {
                point: i,
                condition: NodeCondition::GradientNotZero,
            });
        }
        if w.hessian_rank != 3 {
            return Err(FamilyError::NodeCondition {
                point: i,
                condition: NodeCondition::HessianRankDeficient(w.hessian_rank),
            });
        }
        if !w.g_value.is_zero() {
            return Err(FamilyError::NodeCondition {
                point: i,
                condition: NodeCondition::PerturbationNotVanishing,
            });
        }
        if w.g_gradient.iter().all(Rat::is_zero) {
            return Err(FamilyError::NodeCondition {
                point: i,
                condition: NodeCondition::PerturbationGradientZero,
            });
        }
        witnesses.push(w);
    }
    Ok(NodalFamily {
        f0,
        points,
        g,
        lambda,
        witnesses,
    })
}

/// The `4k x 35` matrix of the conditions `grad f(p_i) = 0` over the
/// quartic coefficient space.
pub fn node_condition_matrix(points: &[ProjPoint]) -> QMat {
    let monos = monomials_deg4();
    QMat::from_fn(4 * points.len(), monos.len(), |r, c| {
        let p = &points[r / 4];
        let j = r % 4;
        let e = monos[c];
        if e[j] == 0 {
            return Rat::zero();
        }
        let mut de = e;
        de[j] -= 1;
        let mut acc = Rat::from_integer(e[j].into());
        for (x, &d) in p.coords().iter().zip(&de) {
            for _ in 0..d {
                acc *= x;
            }
        }
        acc
    })
}

/// Outcome data for a successful prescribed-node solve.
#[derive(Debug, Clone)]
pub struct NodalQuartic {
    pub f: HomPoly4,
    /// Dimension of the solution space the quartic was sampled from.
    pub solution_dim: usize,
    /// Rank of the linear condition system.
    pub rank: usize,
}

pub const DEFAULT_SAMPLE_TRIES: usize = 32;

/// Largest solution-space dimension for which the identically-singular
/// Hessian certificate is attempted.
const CERTIFICATE_MAX_DIM: usize = 3;

/// Looks for a prescribed point at which the affine Hessian determinant
/// vanishes identically on the solution space. The determinant is a cubic
/// form in the solution coordinates (the Hessian is linear in the quartic),
/// so vanishing on the grid `{0,1,2,3}^dim` proves it is the zero
/// polynomial: an exact certificate that no solution is an A1 node there.
fn degenerate_certificate(basis: &[Vec<Rat>], points: &[ProjPoint]) -> Option<usize> {
    let dim = basis.len();
    if dim == 0 || dim > CERTIFICATE_MAX_DIM {
        return None;
    }
    let monos = monomials_deg4();
    'points: for (pi, p) in points.iter().enumerate() {
        let minors: Vec<QMat> = basis
            .iter()
            .map(|b| {
                let f = HomPoly4::from_coeffs(
                    monos
                        .iter()
                        .zip(b)
                        .map(|(e, c)| (*e, c.clone()))
                        .collect::<Vec<(Exp4, Rat)>>(),
                )
                .expect("kernel coefficients are degree 4");
                f.affine_hessian_minor(p)
            })
            .collect();
        let mut coords = vec![0u8; dim];
        loop {
            let mut h = QMat::zeros(3, 3);
            for (c, m) in coords.iter().zip(&minors) {
                if *c != 0 {
                    h = h
                        .add(&m.scale(&rat_i(i64::from(*c))))
                        .expect("3x3 minors add");
                }
            }
            if !h.det().expect("3x3 is square").is_zero() {
                continue 'points;
            }
            // Odometer over the grid.
            let mut idx = 0;
            while idx < dim {
                coords[idx] += 1;
                if coords[idx] < 4 {
                    break;
                }
                coords[idx] = 0;
                idx += 1;
            }
            if idx == dim {
                break;
            }
        }
        return Some(pi);
    }
    None
}

/// Solves for a quartic with A1 nodes exactly at the prescribed points.
///
/// Solves the linear system `grad f(p_i) = 0`, then samples small random
/// integer combinations of the kernel basis until every affine Hessian has
/// rank 3. Infeasibility is reported exactly in two forms: an empty
/// solution space (always the case for `4k > 35` with independent
/// conditions), or a low-dimensional solution space whose Hessian is
/// provably singular at some point. At eight or nine general points the
/// latter occurs: the space consists of products of quadrics through the
/// points, which are never nodal.
pub fn nodal_quartic_through(
    points: &[ProjPoint],
    rng: &mut impl Rng,
    max_tries: usize,
) -> Result<NodalQuartic, NodalError> {
    let k = points.len();
    if k == 0 || k > NODE_BOUND {
        return Err(NodalError::KOutOfRange(k));
    }
    if let Some((i, j)) = check_distinct(points) {
        return Err(NodalError::DuplicatePoints { i, j });
    }
    let m = node_condition_matrix(points);
    let basis = kernel_basis(&m);
    let rank = m.cols() - basis.len();
    if basis.is_empty() {
        return Err(NodalError::Infeasible {
            conditions: 4 * k,
            rank,
        });
    }
    if let Some(point) = degenerate_certificate(&basis, points) {
        return Err(NodalError::DegenerateOnly {
            conditions: 4 * k,
            rank,
            solution_dim: basis.len(),
            point,
        });
    }
    let monos = monomials_deg4();
    for _ in 0..max_tries {
        let coeffs: Vec<Rat> = (0..basis.len())
            .map(|_| rat_i(rng.gen_range(-9..=9)))
            .collect();
        let mut flat = vec![Rat::zero(); monos.len()];
        for (b, c) in basis.iter().zip(&coeffs) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in flat.iter_mut().zip(b) {
                *slot += c * x;
            }
        }
        let f = HomPoly4::from_coeffs(
            monos
                .iter()
                .zip(flat)
                .map(|(e, c)| (*e, c))
                .collect::<Vec<(Exp4, Rat)>>(),
        )
        .expect("exponents come from the degree-4 census");
        if f.is_zero() {
            continue;
        }
        if points.iter().all(|p| f.affine_hessian_rank(p) == 3) {
            debug_assert!(points
                .iter()
                .all(|p| f.gradient(p.coords()).iter().all(Rat::is_zero)));
            return Ok(NodalQuartic {
                f,
                solution_dim: basis.len(),
                rank,
            });
        }
    }
    Err(NodalError::NoWitness { tries: max_tries })
}

/// A quartic vanishing simply at `p`: the product of a linear form through
/// `p` with a cubic not vanishing at `p`. Falls back to deterministic
/// choices if the random draws degenerate, so it always succeeds.
pub fn simple_vanishing_quartic(p: &ProjPoint, rng: &mut impl Rng) -> HomPoly4 {
    let coords = p.coords();
    // Basis of linear forms vanishing at p.
    let row = QMat::from_rows(vec![coords.to_vec()]).expect("one row");
    let lin_basis = kernel_basis(&row);
    debug_assert_eq!(lin_basis.len(), 3);
    let mut ell = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    for _ in 0..8 {
        let mut cand = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        for b in &lin_basis {
            let c = rat_i(rng.gen_range(-4..=4));
            for (slot, x) in cand.iter_mut().zip(b) {
                *slot += &c * x;
            }
        }
        if cand.iter().any(|c| !c.is_zero()) {
            ell = cand;
            break;
        }
    }
    if ell.iter().all(Rat::is_zero) {
        for (slot, x) in ell.iter_mut().zip(&lin_basis[0]) {
            *slot = x.clone();
        }
    }
    // Cubic with c(p) != 0, defaulting to the chart coordinate cubed.
    let mut cubic = None;
    for _ in 0..8 {
        let cand = random_cubic(rng);
        if eval_cubic(&cand, coords) != Rat::zero() {
            cubic = Some(cand);
            break;
        }
    }
    let cubic = cubic.unwrap_or_else(|| {
        let mut e = [0u8; 4];
        e[p.chart()] = 3;
        vec![(e, Rat::one())]
    });
    // g = ell * cubic.
    let mut entries: Vec<(Exp4, Rat)> = Vec::new();
    for (em, cm) in &cubic {
        for j in 0..4 {
            if ell[j].is_zero() {
                continue;
            }
            let mut e = *em;
            e[j] += 1;
            entries.push((e, &ell[j] * cm));
        }
    }
    let g = HomPoly4::from_coeffs(entries).expect("degree 1 + 3 = 4");
    debug_assert!(g.eval(coords).is_zero());
    debug_assert!(g.gradient(coords).iter().any(|c| !c.is_zero()));
    g
}

type Cubic = Vec<(Exp4, Rat)>; // exponent tuples summing to 3

fn random_cubic(rng: &mut impl Rng) -> Cubic {
    let mut monos = Vec::new();
    for d0 in 0..=3u8 {
        for d1 in 0..=3 - d0 {
            for d2 in 0..=3 - d0 - d1 {
                monos.push([d0, d1, d2, 3 - d0 - d1 - d2]);
            }
        }
    }
    (0..4)
        .map(|_| {
            let e = monos[rng.gen_range(0..monos.len())];
            (e, rat_i(rng.gen_range(-4..=4)))
        })
        .collect()
}

fn eval_cubic(c: &Cubic, x: &[Rat; 4]) -> Rat {
    let mut acc = Rat::zero();
    for (e, coeff) in c {
        let mut term = coeff.clone();
        for (xi, &d) in x.iter().zip(e) {
            for _ in 0..d {
                term *= xi;
            }
        }
        acc += term;
    }
    acc
}

/// Distinct random rational points with small integer coordinates.
pub fn random_rational_points(k: usize, rng: &mut impl Rng) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::with_capacity(k);
    while out.len() < k {
        let raw = [
            rng.gen_range(-5i64..=5),
            rng.gen_range(-5i64..=5),
            rng.gen_range(-5i64..=5),
            rng.gen_range(-5i64..=5),
        ];
        let Ok(p) = ProjPoint::from_ints(raw) else {
            continue;
        };
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Result of the probabilistic smooth-elsewhere screen. This is a screen,
/// not a certificate: it restricts the quartic to random rational lines
/// missing the prescribed nodes and checks that the restricted binary
/// quartic is squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenReport {
    pub lines: usize,
    pub passed: usize,
    /// Indices (0-based) of the failing lines.
    pub failed: Vec<usize>,
}

impl ScreenReport {
    pub fn all_passed(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Runs the line screen with `count` random lines avoiding `avoid`.
pub fn line_screen(
    f: &HomPoly4,
    avoid: &[ProjPoint],
    count: usize,
    rng: &mut impl Rng,
) -> ScreenReport {
    let mut failed = Vec::new();
    let mut done = 0;
    let mut guard = 0;
    while done < count && guard < 100 * (count + 1) {
        guard += 1;
        let a = [
            rat_i(rng.gen_range(-9i64..=9)),
            rat_i(rng.gen_range(-9i64..=9)),
            rat_i(rng.gen_range(-9i64..=9)),
            rat_i(rng.gen_range(-9i64..=9)),
        ];
        let b = [
            rat_i(rng.gen_range(-9i64..=9)),
            rat_i(rng.gen_range(-9i64..=9)),
            rat_i(rng.gen_range(-9i64..=9)),
            rat_i(rng.gen_range(-9i64..=9)),
        ];
        let span = QMat::from_rows(vec![a.to_vec(), b.to_vec()]).expect("two rows");
        if span.rank() != 2 {
            continue;
        }
        // The line must miss every prescribed node.
        let hits_node = avoid.iter().any(|p| {
            let m = QMat::from_rows(vec![a.to_vec(), b.to_vec(), p.coords().to_vec()])
                .expect("three rows");
            m.rank() == 2
        });
        if hits_node {
            continue;
        }
        let q = restrict_to_line(f, &a, &b);
        if !binary_quartic_squarefree(&q) {
            failed.push(done);
        }
        done += 1;
    }
    ScreenReport {
        lines: done,
        passed: done - failed.len(),
        failed,
    }
}

/// Coefficients `[q0..q4]` of `q(u,v) = f(uA + vB)` with
/// `q = sum_i q_i u^(4-i) v^i`.
fn restrict_to_line(f: &HomPoly4, a: &[Rat; 4], b: &[Rat; 4]) -> [Rat; 5] {
    let mut out = [
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
    ];
    for (e, c) in f.coeffs() {
        // Product of (a_j u + b_j v)^(e_j) as a binary form.
        let mut term = vec![c.clone()];
        for j in 0..4 {
            for _ in 0..e[j] {
                term = binary_mul(&term, &[a[j].clone(), b[j].clone()]);
            }
        }
        for (i, t) in term.into_iter().enumerate() {
            out[i] += t;
        }
    }
    out
}

fn binary_mul(p: &[Rat], q: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len() + q.len() - 1];
    for (i, pi) in p.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

/// A binary quartic is squarefree iff it is nonzero, has no repeated root
/// at infinity, and `gcd(p, p') = 1` for the dehomogenization `p(u) = q(u,1)`.
fn binary_quartic_squarefree(q: &[Rat; 5]) -> bool {
    if q.iter().all(Rat::is_zero) {
        return false;
    }
    // Root at [1:0] has multiplicity >= 2 iff q0 = q1 = 0.
    if q[0].is_zero() && q[1].is_zero() {
        return false;
    }
    // Descending coefficients of p(u) = q0 u^4 + ... + q4.
    let p: Vec<Rat> = q.to_vec();
    let dp = poly_derivative(&p);
    let g = poly_gcd(&p, &dp);
    poly_degree(&g) == 0
}

fn poly_degree(p: &[Rat]) -> usize {
    p.iter().position(|c| !c.is_zero()).map_or(0, |i| p.len() - 1 - i)
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    // p given by descending coefficients of degree p.len()-1.
    let n = p.len() - 1;
    (0..n)
        .map(|i| &p[i] * rat_i((n - i) as i64))
        .collect()
}

fn poly_trim(p: &[Rat]) -> Vec<Rat> {
    let start = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len());
    p[start..].to_vec()
}

/// Euclidean gcd of univariate rational polynomials in descending
/// coefficient order. Returns `[1]` for coprime inputs (up to scaling).
fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = poly_trim(a);
    let mut b = poly_trim(b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = poly_trim(&r);
    }
    if a.is_empty() {
        a.push(Rat::zero());
    }
    a
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[0];
    while r.len() > db && !r.is_empty() {
        if r[0].is_zero() {
            r.remove(0);
            continue;
        }
        let factor = &r[0] / lead;
        for (i, bc) in b.iter().enumerate() {
            let v = &r[i] - &factor * bc;
            r[i] = v;
        }
        r.remove(0);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn fermat() -> HomPoly4 {
        HomPoly4::from_coeffs([
            ([4, 0, 0, 0], rat_i(1)),
            ([0, 4, 0, 0], rat_i(1)),
            ([0, 0, 4, 0], rat_i(1)),
            ([0, 0, 0, 4], rat_i(1)),
        ])
        .unwrap()
    }

    #[test]
    fn single_prescribed_node() {
        let p = ProjPoint::from_ints([1, 0, 0, 0]).unwrap();
        let nq =
            nodal_quartic_through(std::slice::from_ref(&p), &mut rng(1), DEFAULT_SAMPLE_TRIES)
                .unwrap();
        assert!(nq.f.gradient(p.coords()).iter().all(Rat::is_zero));
        assert!(nq.f.eval(p.coords()).is_zero());
        assert_eq!(nq.f.affine_hessian_rank(&p), 3);
        assert_eq!(nq.rank, 4);
        assert_eq!(nq.solution_dim, 31);
    }

    #[test]
    fn seven_random_nodes_feasible() {
        let pts = random_rational_points(7, &mut rng(7));
        let nq = nodal_quartic_through(&pts, &mut rng(8), DEFAULT_SAMPLE_TRIES).unwrap();
        assert_eq!(nq.rank, 28);
        assert_eq!(nq.solution_dim, 7);
        for p in &pts {
            assert!(nq.f.gradient(p.coords()).iter().all(Rat::is_zero));
            assert_eq!(nq.f.affine_hessian_rank(p), 3);
        }
    }

    #[test]
    fn eight_general_nodes_are_provably_degenerate() {
        // The 3-dimensional solution space at eight general points is the
        // span of the quadric products Q1^2, Q1 Q2, Q2^2, none of which is
        // nodal; the certificate proves it exactly.
        let pts = random_rational_points(8, &mut rng(7));
        match nodal_quartic_through(&pts, &mut rng(8), DEFAULT_SAMPLE_TRIES) {
            Err(NodalError::DegenerateOnly {
                conditions,
                rank,
                solution_dim,
                ..
            }) => {
                assert_eq!(conditions, 32);
                assert_eq!(rank, 32);
                assert_eq!(solution_dim, 3);
            }
            other => panic!("expected degeneracy certificate, got {other:?}"),
        }
    }

    #[test]
    fn eight_point_kernel_is_spanned_by_quadric_products() {
        // Independent confirmation of the degeneracy: compute the pencil of
        // quadrics through the points, square it into quartics, and check
        // those products span the whole solution space.
        let pts = random_rational_points(8, &mut rng(7));
        // Degree-2 monomial census (10 of them) and the 8 x 10 value system.
        let mut monos2 = Vec::new();
        for d0 in 0..=2u8 {
            for d1 in 0..=2 - d0 {
                for d2 in 0..=2 - d0 - d1 {
                    monos2.push([d0, d1, d2, 2 - d0 - d1 - d2]);
                }
            }
        }
        let value_at = |e: &[u8; 4], p: &ProjPoint| {
            let mut acc = rat_i(1);
            for (x, &d) in p.coords().iter().zip(e) {
                for _ in 0..d {
                    acc *= x;
                }
            }
            acc
        };
        let quadric_system = QMat::from_fn(8, 10, |r, c| value_at(&monos2[c], &pts[r]));
        let pencil = crate::linalg::kernel_basis(&quadric_system);
        assert_eq!(pencil.len(), 2, "8 general points leave a pencil of quadrics");

        let monos4 = monomials_deg4();
        let index4: std::collections::BTreeMap<Exp4, usize> = monos4
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect();
        let product = |a: &[Rat], b: &[Rat]| {
            let mut out = vec![Rat::zero(); 35];
            for (i, ca) in a.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (j, cb) in b.iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    let e = [
                        monos2[i][0] + monos2[j][0],
                        monos2[i][1] + monos2[j][1],
                        monos2[i][2] + monos2[j][2],
                        monos2[i][3] + monos2[j][3],
                    ];
                    out[index4[&e]] += ca * cb;
                }
            }
            out
        };
        let products = [
            product(&pencil[0], &pencil[0]),
            product(&pencil[0], &pencil[1]),
            product(&pencil[1], &pencil[1]),
        ];
        let quartic_kernel = crate::linalg::kernel_basis(&node_condition_matrix(&pts));
        assert_eq!(quartic_kernel.len(), 3);
        // Products lie in the kernel and span it.
        let mut rows = quartic_kernel.clone();
        rows.extend(products.iter().cloned());
        assert_eq!(QMat::from_rows(rows).unwrap().rank(), 3);
        assert_eq!(
            QMat::from_rows(products.to_vec()).unwrap().rank(),
            3,
            "the three quadric products are independent"
        );
    }

    #[test]
    fn nine_prescribed_nodes_exactly_infeasible() {
        // Nine general double points are the classical interpolation
        // exception: the solution space is the square of the unique quadric
        // through the points, so the rank is 34 and the certificate fires.
        let pts = random_rational_points(9, &mut rng(3));
        match nodal_quartic_through(&pts, &mut rng(4), DEFAULT_SAMPLE_TRIES) {
            Err(NodalError::DegenerateOnly {
                conditions,
                rank,
                solution_dim,
                ..
            }) => {
                assert_eq!(conditions, 36);
                assert_eq!(rank, 34);
                assert_eq!(solution_dim, 1);
            }
            other => panic!("expected degeneracy certificate, got {other:?}"),
        }
    }

    #[test]
    fn ten_prescribed_nodes_exactly_infeasible() {
        let pts = random_rational_points(10, &mut rng(6));
        match nodal_quartic_through(&pts, &mut rng(5), DEFAULT_SAMPLE_TRIES) {
            Err(NodalError::Infeasible { conditions, rank }) => {
                assert_eq!(conditions, 40);
                assert_eq!(rank, 35);
            }
            other => panic!("expected empty solution space, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_points_rejected() {
        let p = ProjPoint::from_ints([1, 2, 3, 1]).unwrap();
        let e = nodal_quartic_through(&[p.clone(), p], &mut rng(0), 4);
        assert_eq!(e.unwrap_err(), NodalError::DuplicatePoints { i: 0, j: 1 });
    }

    #[test]
    fn simple_vanishing_quartic_witnesses() {
        let mut r = rng(5);
        for seed_pt in [[1, 0, 0, 0], [2, -1, 3, 1], [0, 0, 1, 5]] {
            let p = ProjPoint::from_ints(seed_pt).unwrap();
            let g = simple_vanishing_quartic(&p, &mut r);
            assert!(g.eval(p.coords()).is_zero());
            assert!(g.gradient(p.coords()).iter().any(|c| !c.is_zero()));
            // Euler consistency at p: sum p_j d_j g (p) = 4 g(p) = 0.
            let grad = g.gradient(p.coords());
            let euler: Rat = p
                .coords()
                .iter()
                .zip(&grad)
                .map(|(x, d)| x * d)
                .fold(Rat::zero(), |a, b| a + b);
            assert!(euler.is_zero());
        }
    }

    #[test]
    fn family_validation_and_fiber() {
        let mut r = rng(21);
        let pts = random_rational_points(2, &mut r);
        let nq = nodal_quartic_through(&pts, &mut r, DEFAULT_SAMPLE_TRIES).unwrap();
        let g: Vec<HomPoly4> = pts
            .iter()
            .map(|p| simple_vanishing_quartic(p, &mut r))
            .collect();
        let lambda = vec![rat_i(2), rat_i(-3)];
        let fam = build_family(nq.f.clone(), pts.clone(), g.clone(), lambda.clone()).unwrap();
        assert!(fam.witnesses().iter().all(NodeWitness::passes));
        assert_eq!(fam.fiber_at(&Rat::zero()), nq.f);
        // At t = 1 the fibre moves off the nodes. By gradient linearity,
        // grad fiber(p_i) = sum_j lambda_j grad g_j(p_i) (the f0 term
        // vanishes); generically nonzero, so the fibre is smooth there.
        let f1 = fam.fiber_at(&rat_i(1));
        for p in &pts {
            let grad = f1.gradient(p.coords());
            let mut expected = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
            for (gj, lj) in g.iter().zip(&lambda) {
                for (slot, d) in expected.iter_mut().zip(&gj.gradient(p.coords())) {
                    *slot += lj * d;
                }
            }
            assert_eq!(grad, expected);
            assert!(grad.iter().any(|c| !c.is_zero()));
        }
    }

    #[test]
    fn family_rejects_zero_lambda() {
        let mut r = rng(9);
        let pts = random_rational_points(1, &mut r);
        let nq = nodal_quartic_through(&pts, &mut r, DEFAULT_SAMPLE_TRIES).unwrap();
        let g = vec![simple_vanishing_quartic(&pts[0], &mut r)];
        let e = build_family(nq.f, pts, g, vec![Rat::zero()]);
        assert_eq!(e.unwrap_err(), FamilyError::LambdaZero(0));
    }

    #[test]
    fn family_rejects_non_node() {
        // Fermat quartic is smooth: no point passes the gradient condition.
        let p = ProjPoint::from_ints([1, 1, 1, 1]).unwrap();
        let mut r = rng(2);
        let g = vec![simple_vanishing_quartic(&p, &mut r)];
        let e = build_family(fermat(), vec![p], g, vec![rat_i(1)]);
        assert_eq!(
            e.unwrap_err(),
            FamilyError::NodeCondition {
                point: 0,
                condition: NodeCondition::GradientNotZero
            }
        );
    }

    #[test]
    fn smooth_quartic_passes_line_screen() {
        let report = line_screen(&fermat(), &[], 8, &mut rng(13));
        assert_eq!(report.lines, 8);
        assert!(report.all_passed(), "failures: {:?}", report.failed);
    }

    #[test]
    fn double_plane_fails_line_screen() {
        // (x0^2)^2: every line restriction is a square.
        let f = HomPoly4::monomial([4, 0, 0, 0], rat_i(1)).unwrap();
        let report = line_screen(&f, &[], 4, &mut rng(17));
        assert_eq!(report.passed, 0);
    }

    #[test]
    fn determinism_under_fixed_seed() {
        let pts = random_rational_points(3, &mut rng(40));
        let a = nodal_quartic_through(&pts, &mut rng(41), DEFAULT_SAMPLE_TRIES).unwrap();
        let b = nodal_quartic_through(&pts, &mut rng(41), DEFAULT_SAMPLE_TRIES).unwrap();
        assert_eq!(a.f, b.f);
        assert_eq!(a.f.to_json().to_string(), b.f.to_json().to_string());
    }
}
