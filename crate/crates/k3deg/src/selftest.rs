//! Fast programmatic invariant suite behind the `selftest` subcommand.
//! Prints one line per group; returns whether everything passed.

use crate::hodge::WorkingBasis;
use crate::lattice::{build_k3_lattice, pair, signature};
use crate::linalg::QMat;
use crate::monodromy::{compose_nodes, pl_reflect, random_cycle, random_orthogonal_pair};
use crate::nodal::{nodal_quartic_through, random_rational_points, NodalError};
use crate::pipeline::{run, RunOptions};
use crate::rat::{rat_i, Rat};
use crate::sample::{histogram, sample_class, SamplerConfig};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Group {
    name: &'static str,
    outcome: Result<String, String>,
}

fn lattice_group() -> Group {
    let l = build_k3_lattice();
    let mut problems = Vec::new();
    if l.dim() != 22 {
        problems.push(format!("dim {}", l.dim()));
    }
    if !l.gram().is_even() {
        problems.push("odd diagonal".to_string());
    }
    let det = l.gram().det();
    if det != BigInt::from(-1) {
        problems.push(format!("det {det}"));
    }
    match signature(&l) {
        Ok((3, 19)) => {}
        other => problems.push(format!("signature {other:?}")),
    }
    Group {
        name: "lattice",
        outcome: if problems.is_empty() {
            Ok("dim 22, even, |det| 1, signature (3,19)".to_string())
        } else {
            Err(problems.join("; "))
        },
    }
}

fn picard_lefschetz_group() -> Group {
    let basis = WorkingBasis::default_k3();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let g = basis.lattice().gram().to_qmat();
    let id = QMat::identity(basis.dim());
    for i in 0..25 {
        let gamma = random_cycle(&basis, &mut rng);
        let op = pl_reflect(&gamma);
        let tgt = op.t().transpose().mul(&g).unwrap().mul(op.t()).unwrap();
        if tgt != g {
            return fail("picard_lefschetz", format!("isometry failed at cycle {i}"));
        }
        if op.t().mul(op.t()).unwrap() != id {
            return fail("picard_lefschetz", format!("T^2 != Id at cycle {i}"));
        }
        let n2 = op.n().mul(op.n()).unwrap();
        let minus2n = QMat::from_fn(basis.dim(), basis.dim(), |r, c| {
            op.n().get(r, c) * rat_i(-2)
        });
        if n2 != minus2n {
            return fail("picard_lefschetz", format!("N^2 != -2N at cycle {i}"));
        }
    }
    for i in 0..25 {
        let (g1, g2) = random_orthogonal_pair(&basis, &mut rng);
        let r1 = pl_reflect(&g1);
        let r2 = pl_reflect(&g2);
        if r1.t().mul(r2.t()).unwrap() != r2.t().mul(r1.t()).unwrap() {
            return fail("picard_lefschetz", format!("pair {i} does not commute"));
        }
        if !r1.n().mul(r2.n()).unwrap().is_zero() {
            return fail("picard_lefschetz", format!("N_i N_j != 0 at pair {i}"));
        }
        let comp = compose_nodes(&[g1, g2]).unwrap();
        if comp.operator.n() != &comp.n_sum {
            return fail("picard_lefschetz", format!("T != Id + sum N at pair {i}"));
        }
    }
    Group {
        name: "picard_lefschetz",
        outcome: Ok("25 cycles + 25 orthogonal pairs: isometry, T^2=Id, N^2=-2N, commuting".into()),
    }
}

fn central_fibre_group() -> Group {
    for k in 1..=10usize {
        let m = match crate::central_fibre::build_central_fibre(k) {
            Ok(m) => m,
            Err(e) => return fail("central_fibre", format!("k={k}: {e}")),
        };
        if m.pic().dim() != 1 + k {
            return fail("central_fibre", format!("k={k}: pic rank {}", m.pic().dim()));
        }
        let kernel = crate::central_fibre::mv_kernel(&m);
        if kernel.len() != 1 + k {
            return fail(
                "central_fibre",
                format!("k={k}: mv kernel rank {}", kernel.len()),
            );
        }
    }
    Group {
        name: "central_fibre",
        outcome: Ok("pic rank and Mayer-Vietoris kernel rank 1+k for k=1..10".into()),
    }
}

fn round_trip_group() -> Group {
    let basis = WorkingBasis::default_k3();
    let cfg = SamplerConfig {
        coeff_bound: 5,
        max_nonzero: 2,
        count: 200,
        seed: 77,
        s: basis.s(),
    };
    for i in 0..cfg.count as u64 {
        let alpha = sample_class(&cfg, i);
        match run(&alpha, &basis, RunOptions::default()) {
            Ok(r) if r.passed && r.lifted == alpha => {}
            Ok(r) => return fail("round_trip", format!("draw {i}: {:?}", r.first_failed)),
            Err(e) => return fail("round_trip", format!("draw {i}: {e}")),
        }
    }
    Group {
        name: "round_trip",
        outcome: Ok("200 sampled classes: lift(specialize(alpha)) = alpha with all checks".into()),
    }
}

fn sampler_group() -> Group {
    let cfg = SamplerConfig {
        count: 300,
        seed: 5,
        ..SamplerConfig::default()
    };
    let a = histogram(&cfg);
    let b = histogram(&cfg);
    if a != b {
        return fail("sampler", "same seed produced different histograms".to_string());
    }
    if a.total != 300 {
        return fail("sampler", format!("conservation violated: total {}", a.total));
    }
    Group {
        name: "sampler",
        outcome: Ok("histogram deterministic and conservative over 300 draws".into()),
    }
}

fn embedding_group() -> Group {
    let basis = match WorkingBasis::new(10) {
        Ok(b) => b,
        Err(e) => return fail("embedding", e.to_string()),
    };
    match crate::embed::embed_in_k3(&basis) {
        Ok(emb) => {
            let expected = basis.lattice().gram().to_qmat();
            if emb.image_gram() == expected {
                Group {
                    name: "embedding",
                    outcome: Ok("s=10 image Gram equals diag(4,-2,...,-2) in the K3 lattice".into()),
                }
            } else {
                fail("embedding", "image Gram mismatch".to_string())
            }
        }
        Err(e) => fail("embedding", e.to_string()),
    }
}

fn quartic_group() -> Group {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let pts = random_rational_points(2, &mut rng);
    match nodal_quartic_through(&pts, &mut rng, 32) {
        Ok(nq) => {
            for p in &pts {
                if !nq.f.gradient(p.coords()).iter().all(Rat::is_zero)
                    || nq.f.affine_hessian_rank(p) != 3
                {
                    return fail("quartic", "witness failed".to_string());
                }
            }
        }
        Err(e) => return fail("quartic", format!("k=2: {e}")),
    }
    let pts9 = random_rational_points(9, &mut rng);
    match nodal_quartic_through(&pts9, &mut rng, 4) {
        Err(e) if e.is_exactly_infeasible() => {}
        other => return fail("quartic", format!("k=9 should be infeasible, got {other:?}")),
    }
    let pts10 = random_rational_points(10, &mut rng);
    match nodal_quartic_through(&pts10, &mut rng, 4) {
        Err(NodalError::Infeasible { conditions: 40, .. }) => {}
        other => return fail("quartic", format!("k=10 should be infeasible, got {other:?}")),
    }
    Group {
        name: "quartic",
        outcome: Ok(
            "k=2 nodes verified exactly; k=9,10 prescribed points exactly infeasible".into(),
        ),
    }
}

fn pairing_bilinearity_group() -> Group {
    let basis = WorkingBasis::new(6).unwrap();
    let lat = basis.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let rand_vec = |rng: &mut ChaCha8Rng| {
        let coords: Vec<Rat> = (0..basis.dim())
            .map(|_| crate::rat::rat(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=8)))
            .collect();
        lat.vector(coords).unwrap()
    };
    for i in 0..100 {
        let u = rand_vec(&mut rng);
        let v = rand_vec(&mut rng);
        let w = rand_vec(&mut rng);
        let a = crate::rat::rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5));
        let b = crate::rat::rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5));
        if pair(&u, &v).unwrap() != pair(&v, &u).unwrap() {
            return fail("pairing", format!("symmetry failed at case {i}"));
        }
        let combo: Vec<Rat> = u
            .coords()
            .iter()
            .zip(w.coords())
            .map(|(x, y)| &a * x + &b * y)
            .collect();
        let combo = lat.vector(combo).unwrap();
        let lhs = pair(&combo, &v).unwrap();
        let rhs = &a * pair(&u, &v).unwrap() + &b * pair(&w, &v).unwrap();
        if lhs != rhs {
            return fail("pairing", format!("bilinearity failed at case {i}"));
        }
    }
    Group {
        name: "pairing",
        outcome: Ok("symmetry and bilinearity over 100 random rational cases".into()),
    }
}

fn fail(name: &'static str, msg: String) -> Group {
    Group {
        name,
        outcome: Err(msg),
    }
}

/// Runs every group, printing one `ok`/`FAIL` line each.
pub fn run_selftest(out: &mut impl std::io::Write) -> std::io::Result<bool> {
    let groups = [
        lattice_group(),
        pairing_bilinearity_group(),
        picard_lefschetz_group(),
        central_fibre_group(),
        round_trip_group(),
        sampler_group(),
        embedding_group(),
        quartic_group(),
    ];
    let mut all_ok = true;
    for g in groups {
        match g.outcome {
            Ok(detail) => writeln!(out, "ok   {} - {detail}", g.name)?,
            Err(msg) => {
                all_ok = false;
                writeln!(out, "FAIL {} - {msg}", g.name)?;
            }
        }
    }
    Ok(all_ok)
}
