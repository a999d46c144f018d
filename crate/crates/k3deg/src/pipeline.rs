//! End-to-end driver: decompose a class, pick vanishing cycles, solve the
//! node multiplicities, specialize to the central fibre, lift back, and
//! verify every identity along the way.

use crate::central_fibre::{build_central_fibre, mv_kernel, specialize, CentralFibreModel};
use crate::hodge::{node_count, HodgeError, NodeCountError, RationalClass, WorkingBasis};
use crate::lattice::pair;
use crate::linalg::{solve_linear, LinearSolution, QMat};
use crate::monodromy::{
    compose_nodes, pairing_vector, pl_reflect, MonodromyError, VanishingCycle,
};
use crate::nodal::{
    build_family, nodal_quartic_through, random_rational_points, simple_vanishing_quartic,
    NodalError, NodalFamily, DEFAULT_SAMPLE_TRIES,
};
use crate::rat::{rat_i, Rat};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    /// Non-integral transcendental coefficients; scaling by the carried
    /// denominator makes the class integral.
    #[error("non-integral coefficients: scale the class by {denominator} first")]
    NonIntegral { denominator: BigInt },
    #[error("node count {k} exceeds the bound {}", crate::hodge::NODE_BOUND)]
    BoundExceeded { k: BigInt },
    #[error("configuration infeasible: {needed} cycles need distinct basis directions, only {available} available")]
    ConfigInfeasible { needed: usize, available: usize },
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    CentralFibre(#[from] crate::central_fibre::CentralFibreError),
    #[error(transparent)]
    Lift(#[from] crate::central_fibre::LiftError),
}

/// `k` mutually orthogonal vanishing cycles adapted to a class, plus the
/// pairing matrix `<v_j, gamma_i>` restricted to the class support.
#[derive(Debug, Clone)]
pub struct CycleConfiguration {
    gammas: Vec<VanishingCycle>,
    /// 1-based indices of the nonzero transcendental coefficients.
    support: Vec<usize>,
    /// `k x |support|` matrix, row `i` holding `<v_j, gamma_i>` for `j` in
    /// the support. Full column rank, which is what makes the transport
    /// back from the central fibre invertible.
    pairing_matrix: QMat,
    /// `<h, gamma_i>` per cycle.
    h_pairings: Vec<Rat>,
}

impl CycleConfiguration {
    /// Validates and assembles a configuration from raw cycles.
    pub fn new(
        gammas: Vec<VanishingCycle>,
        alpha: &RationalClass,
        basis: &WorkingBasis,
    ) -> Result<Self, PipelineError> {
        for (i, gi) in gammas.iter().enumerate() {
            for (j, gj) in gammas.iter().enumerate().skip(i + 1) {
                if !pair(gi.vector(), gj.vector())
                    .map_err(HodgeError::from)?
                    .is_zero()
                {
                    return Err(PipelineError::Monodromy(MonodromyError::NonOrthogonal {
                        i,
                        j,
                    }));
                }
            }
        }
        let support = alpha.support();
        let pairing_matrix = QMat::from_fn(gammas.len(), support.len(), |r, c| {
            let vj = basis.v(support[c]);
            pair(&vj, gammas[r].vector()).expect("shared ambient")
        });
        if pairing_matrix.rank() != support.len() {
            return Err(PipelineError::ConfigInfeasible {
                needed: support.len(),
                available: pairing_matrix.rank(),
            });
        }
        let h = basis.h();
        let h_pairings = gammas
            .iter()
            .map(|g| pair(&h, g.vector()).expect("shared ambient"))
            .collect();
        Ok(CycleConfiguration {
            gammas,
            support,
            pairing_matrix,
            h_pairings,
        })
    }

    pub fn k(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[VanishingCycle] {
        &self.gammas
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn pairing_matrix(&self) -> &QMat {
        &self.pairing_matrix
    }

    pub fn h_pairing(&self, i: usize) -> &Rat {
        &self.h_pairings[i]
    }
}

/// Canonical cycle choice: one cycle `gamma = v_j` per nonzero coefficient
/// in index order, then padding cycles on fresh zero-coefficient basis
/// directions until `k` cycles exist. The pairing matrix on the support is
/// `-2 I` padded by zero rows.
pub fn choose_cycles(
    alpha: &RationalClass,
    basis: &WorkingBasis,
) -> Result<CycleConfiguration, PipelineError> {
    let k = node_count(alpha).map_err(|e| match e {
        NodeCountError::NonIntegral => PipelineError::NonIntegral {
            denominator: alpha.scale_to_integral().0,
        },
        NodeCountError::OutOfRange { k } => PipelineError::BoundExceeded { k },
    })?;
    let support = alpha.support();
    if k > basis.s() {
        return Err(PipelineError::ConfigInfeasible {
            needed: k,
            available: basis.s(),
        });
    }
    let mut gammas = Vec::with_capacity(k);
    for (label, &j) in support.iter().enumerate() {
        gammas.push(VanishingCycle::new(basis.v(j), label + 1)?);
    }
    let mut fresh = (1..=basis.s()).filter(|j| !support.contains(j));
    while gammas.len() < k {
        let j = fresh
            .next()
            .expect("k <= s guarantees enough fresh directions");
        gammas.push(VanishingCycle::new(basis.v(j), gammas.len() + 1)?);
    }
    CycleConfiguration::new(gammas, alpha, basis)
}

/// Canonical configuration stirred by random rational rotations of cycle
/// pairs. Rotations preserve squares, orthogonality, and the rank of the
/// pairing matrix, but make it genuinely non-diagonal.
pub fn choose_cycles_random(
    alpha: &RationalClass,
    basis: &WorkingBasis,
    rng: &mut impl Rng,
) -> Result<CycleConfiguration, PipelineError> {
    let canonical = choose_cycles(alpha, basis)?;
    let k = canonical.k();
    if k < 2 {
        return Ok(canonical);
    }
    let mut vectors: Vec<Vec<Rat>> = canonical
        .gammas
        .iter()
        .map(|g| g.vector().coords().to_vec())
        .collect();
    for _ in 0..3 * k {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k);
        while j == i {
            j = rng.gen_range(0..k);
        }
        // Rational point on the unit circle: c = (q^2-p^2)/(q^2+p^2),
        // s = 2pq/(q^2+p^2).
        let p = rng.gen_range(-3i64..=3);
        let q = rng.gen_range(1i64..=4);
        let denom = rat_i(p * p + q * q);
        let c = rat_i(q * q - p * p) / &denom;
        let s = rat_i(2 * p * q) / &denom;
        let (gi, gj): (Vec<Rat>, Vec<Rat>) = vectors[i]
            .iter()
            .zip(&vectors[j])
            .map(|(x, y)| (&c * x + &s * y, -&s * x + &c * y))
            .unzip();
        vectors[i] = gi;
        vectors[j] = gj;
    }
    let gammas = vectors
        .into_iter()
        .enumerate()
        .map(|(idx, coords)| {
            let v = basis
                .lattice()
                .vector(coords)
                .expect("rotation preserves length");
            VanishingCycle::new(v, idx + 1)
        })
        .collect::<Result<Vec<_>, _>>()?;
    CycleConfiguration::new(gammas, alpha, basis)
}

/// Solves `-2 m_i = <alpha, gamma_i>` through the linear solver.
pub fn solve_multiplicities(
    alpha: &RationalClass,
    config: &CycleConfiguration,
    basis: &WorkingBasis,
) -> Result<Vec<Rat>, PipelineError> {
    let l = pairing_vector(alpha, config.gammas(), basis)?;
    let k = config.k();
    let a = QMat::from_fn(k, k, |r, c| if r == c { rat_i(-2) } else { Rat::zero() });
    match solve_linear(&a, &l).expect("square system of matching size") {
        LinearSolution::Solved { x, .. } => Ok(x),
        LinearSolution::Infeasible => unreachable!("-2I is invertible"),
    }
}

/// One named verification performed during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Geometry attachment of a run.
#[derive(Debug, Clone)]
pub enum FamilyOutcome {
    Built(NodalFamily),
    /// Empty solution space: exactly infeasible.
    Infeasible { conditions: usize, rank: usize },
    /// Nonempty solution space on which some Hessian is provably singular:
    /// exactly infeasible for A1 nodes at these points.
    DegenerateOnly {
        conditions: usize,
        rank: usize,
        solution_dim: usize,
        point: usize,
    },
    NoWitness { tries: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub with_geometry: bool,
    pub random_config: bool,
}

/// Full record of a degeneration run.
#[derive(Debug, Clone)]
pub struct DegenerationRun {
    pub input: RationalClass,
    pub s: usize,
    pub k: usize,
    pub config: CycleConfiguration,
    pub pairings: Vec<Rat>,
    pub multiplicities: Vec<Rat>,
    pub alpha0: crate::central_fibre::SpecializedClass,
    pub lifted: RationalClass,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub first_failed: Option<&'static str>,
    pub options: RunOptions,
    pub family: Option<FamilyOutcome>,
}

/// Executes the degeneration pipeline on a class.
///
/// The output realizes the input class as coefficients over the central
/// fibre's Picard lattice and transports it back; it does not manufacture
/// a divisor on an actual surface, and the emitted report says so.
pub fn run(
    alpha: &RationalClass,
    basis: &WorkingBasis,
    options: RunOptions,
) -> Result<DegenerationRun, PipelineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    // Decomposition is the identity on an orthogonal basis; verify it.
    let decomposed = crate::hodge::decompose(basis, &alpha.to_vector(basis)?)?;
    debug_assert_eq!(&decomposed, alpha);
    let alpha = &decomposed;

    let config = if options.random_config {
        choose_cycles_random(alpha, basis, &mut rng)?
    } else {
        choose_cycles(alpha, basis)?
    };
    let k = config.k();
    let pairings = pairing_vector(alpha, config.gammas(), basis)?;
    let multiplicities = solve_multiplicities(alpha, &config, basis)?;
    let model = if k == 0 {
        CentralFibreModel::trivial()
    } else {
        build_central_fibre(k)?
    };
    let alpha0 = specialize(alpha, &multiplicities, &model)?;
    let lifted = crate::central_fibre::lift(&alpha0, &config, basis.s())?;

    let mut checks = Vec::new();

    let round_trip = &lifted == alpha;
    checks.push(CheckRecord {
        name: "round_trip",
        passed: round_trip,
        detail: if round_trip {
            "lift(specialize(alpha)) = alpha exactly".to_string()
        } else {
            "lifted class differs from the input".to_string()
        },
    });

    let alpha0_vec = alpha0.to_vector(&model);
    let mut pairing_ok = true;
    for i in 1..=k {
        let ei = model.pic().basis_vector(i);
        let lhs = pair(&alpha0_vec, &ei).expect("shared pic ambient");
        if lhs != pairings[i - 1] {
            pairing_ok = false;
            break;
        }
    }
    checks.push(CheckRecord {
        name: "pairing_compatibility",
        passed: pairing_ok,
        detail: format!("<alpha0,E_i> = <alpha,gamma_i> for i = 1..{k}"),
    });

    let h_pic = model.pic().basis_vector(0);
    let deg_central = pair(&alpha0_vec, &h_pic).expect("shared pic ambient");
    let h_up = basis.h();
    let deg_generic = pair(&alpha.to_vector(basis)?, &h_up).expect("shared ambient");
    let degree_ok = deg_central == deg_generic;
    checks.push(CheckRecord {
        name: "degree_preservation",
        passed: degree_ok,
        detail: format!("<alpha0,h> = <alpha,h> = {deg_generic}"),
    });

    let kernel = mv_kernel(&model);
    let mv_ok = kernel.len() == 1 + k;
    checks.push(CheckRecord {
        name: "mv_kernel_rank",
        passed: mv_ok,
        detail: format!("rank {} = 1 + {k}", kernel.len()),
    });

    if k == 0 {
        checks.push(CheckRecord {
            name: "monodromy_isometry",
            passed: true,
            detail: "vacuous (no cycles)".to_string(),
        });
        checks.push(CheckRecord {
            name: "monodromy_involution",
            passed: true,
            detail: "vacuous (no cycles)".to_string(),
        });
        checks.push(CheckRecord {
            name: "weight_filtration",
            passed: true,
            detail: format!("N = 0: gr2 = {} = ambient dimension", basis.dim()),
        });
    } else {
        let composite = compose_nodes(config.gammas())?;
        let g = basis.lattice().gram().to_qmat();
        let t = composite.operator.t();
        let iso = t
            .transpose()
            .mul(&g)
            .and_then(|m| m.mul(t))
            .map(|m| m == g)
            .unwrap_or(false);
        checks.push(CheckRecord {
            name: "monodromy_isometry",
            passed: iso,
            detail: "T^t G T = G for the composite operator".to_string(),
        });
        let dim = basis.dim();
        let id = QMat::identity(dim);
        let invol = config.gammas().iter().all(|gamma| {
            let r = pl_reflect(gamma);
            r.t().mul(r.t()).map(|sq| sq == id).unwrap_or(false)
        });
        checks.push(CheckRecord {
            name: "monodromy_involution",
            passed: invol,
            detail: format!("T_i^2 = Id for each of the {k} reflections"),
        });
        // Independent orthogonal cycles give N rank k, so W2 = ker N has
        // dimension dim - k.
        let w = crate::monodromy::weight_filtration(&composite.operator);
        let w_ok = w.gr2_dim == dim - k && w.gr3_dim == k;
        checks.push(CheckRecord {
            name: "weight_filtration",
            passed: w_ok,
            detail: format!("gr2 = {} = dim - k, gr3 = {}", w.gr2_dim, w.gr3_dim),
        });
    }

    let family = if options.with_geometry && k > 0 {
        Some(attach_geometry(k, &mut rng))
    } else {
        None
    };
    if let Some(outcome) = &family {
        let (passed, detail) = match outcome {
            FamilyOutcome::Built(fam) => (
                fam.witnesses().iter().all(|w| w.passes()),
                format!("nodal family with {} verified nodes", fam.k()),
            ),
            FamilyOutcome::Infeasible { conditions, rank } => (
                true,
                format!(
                    "prescribed-point system exactly infeasible: {conditions} conditions of rank {rank} on 35 coefficients"
                ),
            ),
            FamilyOutcome::DegenerateOnly {
                conditions,
                rank,
                solution_dim,
                point,
            } => (
                true,
                format!(
                    "exactly infeasible by degeneracy: {conditions} conditions of rank {rank} \
                     leave a {solution_dim}-dimensional space with identically singular Hessian \
                     at point {point}"
                ),
            ),
            FamilyOutcome::NoWitness { tries } => (
                false,
                format!("no sampled quartic passed the Hessian witness in {tries} tries"),
            ),
        };
        checks.push(CheckRecord {
            name: "geometry_witnesses",
            passed,
            detail,
        });
    }

    let first_failed = checks.iter().find(|c| !c.passed).map(|c| c.name);
    Ok(DegenerationRun {
        input: alpha.clone(),
        s: basis.s(),
        k,
        config,
        pairings,
        multiplicities,
        alpha0,
        lifted,
        passed: first_failed.is_none(),
        first_failed,
        checks,
        options,
        family,
    })
}

fn attach_geometry(k: usize, rng: &mut ChaCha8Rng) -> FamilyOutcome {
    let points = random_rational_points(k, rng);
    match nodal_quartic_through(&points, rng, DEFAULT_SAMPLE_TRIES) {
        Ok(nq) => {
            let g: Vec<_> = points
                .iter()
                .map(|p| simple_vanishing_quartic(p, rng))
                .collect();
            let lambda: Vec<Rat> = (0..k)
                .map(|_| {
                    let mut v = 0;
                    while v == 0 {
                        v = rng.gen_range(-9i64..=9);
                    }
                    rat_i(v)
                })
                .collect();
            match build_family(nq.f, points, g, lambda) {
                Ok(fam) => FamilyOutcome::Built(fam),
                Err(_) => FamilyOutcome::NoWitness {
                    tries: DEFAULT_SAMPLE_TRIES,
                },
            }
        }
        Err(NodalError::Infeasible { conditions, rank }) => {
            FamilyOutcome::Infeasible { conditions, rank }
        }
        Err(NodalError::DegenerateOnly {
            conditions,
            rank,
            solution_dim,
            point,
        }) => FamilyOutcome::DegenerateOnly {
            conditions,
            rank,
            solution_dim,
            point,
        },
        Err(_) => FamilyOutcome::NoWitness {
            tries: DEFAULT_SAMPLE_TRIES,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn class(a0: i64, entries: &[(usize, i64)]) -> RationalClass {
        RationalClass::from_sparse(
            rat_i(a0),
            &entries
                .iter()
                .map(|&(j, c)| (j, rat_i(c)))
                .collect::<Vec<_>>(),
            19,
        )
        .unwrap()
    }

    #[test]
    fn canonical_configuration_worked_example() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(1, 2), (2, -5)]);
        let config = choose_cycles(&alpha, &basis).unwrap();
        assert_eq!(config.k(), 7);
        assert_eq!(config.support(), &[1, 2]);
        // Matched cycles are v1, v2; the matrix on the support is -2I
        // padded by zero rows.
        for r in 0..7 {
            for c in 0..2 {
                let expect = if r == c { rat_i(-2) } else { rat_i(0) };
                assert_eq!(config.pairing_matrix().get(r, c), &expect);
            }
        }
    }

    #[test]
    fn empty_configuration_for_pure_h() {
        let basis = WorkingBasis::default_k3();
        let config = choose_cycles(&class(1, &[]), &basis).unwrap();
        assert_eq!(config.k(), 0);
        assert!(config.support().is_empty());
    }

    #[test]
    fn multiplicities_worked_example() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(1, 2), (2, -5)]);
        let config = choose_cycles(&alpha, &basis).unwrap();
        let m = solve_multiplicities(&alpha, &config, &basis).unwrap();
        assert_eq!(
            m,
            vec![
                rat_i(2),
                rat_i(-5),
                rat_i(0),
                rat_i(0),
                rat_i(0),
                rat_i(0),
                rat_i(0)
            ]
        );
    }

    #[test]
    fn run_worked_example_one() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(1, 2), (2, -5)]);
        let run = run(&alpha, &basis, RunOptions::default()).unwrap();
        assert!(run.passed, "failed check: {:?}", run.first_failed);
        assert_eq!(run.k, 7);
        assert_eq!(run.alpha0.m0(), &rat_i(1));
        assert_eq!(run.alpha0.m()[0], rat_i(2));
        assert_eq!(run.alpha0.m()[1], rat_i(-5));
        assert!(run.alpha0.m()[2..].iter().all(|m| m.is_zero()));
        assert_eq!(run.lifted, alpha);
    }

    #[test]
    fn run_worked_example_two() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(5, 3), (13, -4), (17, 1)]);
        let run = run(&alpha, &basis, RunOptions::default()).unwrap();
        assert!(run.passed);
        assert_eq!(run.k, 8);
        let nonzero: Vec<Rat> = run
            .multiplicities
            .iter()
            .filter(|m| !m.is_zero())
            .cloned()
            .collect();
        assert_eq!(nonzero, vec![rat_i(3), rat_i(-4), rat_i(1)]);
        assert_eq!(run.lifted, alpha);
    }

    #[test]
    fn bound_exceeded() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(1, 8), (2, 8)]);
        match run(&alpha, &basis, RunOptions::default()) {
            Err(PipelineError::BoundExceeded { k }) => {
                assert_eq!(k, BigInt::from(16));
            }
            other => panic!("expected bound-exceeded, got {other:?}"),
        }
    }

    #[test]
    fn zero_class_runs_vacuously() {
        let basis = WorkingBasis::default_k3();
        let run = run(&RationalClass::zero(19), &basis, RunOptions::default()).unwrap();
        assert!(run.passed);
        assert_eq!(run.k, 0);
        assert!(run.lifted.is_zero());
    }

    #[test]
    fn non_integral_class_reports_denominator() {
        let basis = WorkingBasis::default_k3();
        let alpha = RationalClass::from_sparse(rat_i(0), &[(1, rat(3, 2))], 19).unwrap();
        match run(&alpha, &basis, RunOptions::default()) {
            Err(PipelineError::NonIntegral { denominator }) => {
                assert_eq!(denominator, BigInt::from(2));
            }
            other => panic!("expected non-integral error, got {other:?}"),
        }
    }

    #[test]
    fn random_config_round_trips() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(2, &[(3, 1), (7, -2), (11, 3)]);
        for seed in 0..10u64 {
            let opts = RunOptions {
                seed,
                random_config: true,
                ..RunOptions::default()
            };
            let r = run(&alpha, &basis, opts).unwrap();
            assert!(r.passed, "seed {seed}: failed {:?}", r.first_failed);
            assert_eq!(r.lifted, alpha);
        }
    }

    #[test]
    fn random_config_is_genuinely_non_diagonal() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(1, 2), (2, -5)]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let config = choose_cycles_random(&alpha, &basis, &mut rng).unwrap();
        let m = config.pairing_matrix();
        let off_diag_nonzero = (0..config.k())
            .any(|r| (0..config.support().len()).any(|c| r != c && !m.get(r, c).is_zero()));
        assert!(off_diag_nonzero, "rotations should mix the cycles");
    }

    #[test]
    fn deterministic_given_seed() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(1, &[(2, 2), (4, -1)]);
        let opts = RunOptions {
            seed: 9,
            with_geometry: true,
            random_config: true,
        };
        let a = run(&alpha, &basis, opts).unwrap();
        let b = run(&alpha, &basis, opts).unwrap();
        assert_eq!(a.multiplicities, b.multiplicities);
        assert_eq!(a.lifted, b.lifted);
        match (&a.family, &b.family) {
            (Some(FamilyOutcome::Built(fa)), Some(FamilyOutcome::Built(fb))) => {
                assert_eq!(fa.f0(), fb.f0());
                assert_eq!(fa.lambda(), fb.lambda());
            }
            (x, y) => panic!("expected built families, got {x:?} / {y:?}"),
        }
    }

    #[test]
    fn geometry_exactly_infeasible_for_k_nine() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(0, &[(1, 5), (2, 4)]);
        let opts = RunOptions {
            seed: 3,
            with_geometry: true,
            random_config: false,
        };
        let r = run(&alpha, &basis, opts).unwrap();
        assert_eq!(r.k, 9);
        match &r.family {
            Some(FamilyOutcome::DegenerateOnly {
                conditions,
                rank,
                solution_dim,
                ..
            }) => {
                assert_eq!(*conditions, 36);
                assert_eq!(*rank, 34);
                assert_eq!(*solution_dim, 1);
            }
            other => panic!("expected degeneracy report, got {other:?}"),
        }
        // Exact infeasibility is an honest outcome, not a failed check.
        assert!(r.passed);
    }

    #[test]
    fn geometry_exactly_infeasible_for_k_ten() {
        let basis = WorkingBasis::default_k3();
        let alpha = class(0, &[(1, 5), (2, 5)]);
        let opts = RunOptions {
            seed: 4,
            with_geometry: true,
            random_config: false,
        };
        let r = run(&alpha, &basis, opts).unwrap();
        assert_eq!(r.k, 10);
        match &r.family {
            Some(FamilyOutcome::Infeasible { conditions, rank }) => {
                assert_eq!(*conditions, 40);
                assert_eq!(*rank, 35);
            }
            other => panic!("expected empty solution space, got {other:?}"),
        }
        assert!(r.passed);
    }
}
