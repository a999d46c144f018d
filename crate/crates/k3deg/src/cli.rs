//! Command-line interface: `lattice check`, `decompose`, `run`,
//! `family build`, `sample`, and `selftest`.
//!
//! Exit codes: 0 success, 2 node-count bound exceeded, 3 validation or
//! verification failure, 64 usage errors.

use crate::hodge::{node_count, NodeCountError, WorkingBasis, DEFAULT_S};
use crate::jsonio::{
    class_from_json, class_to_json, family_to_json, histogram_to_json, points_from_json,
    rat_value, run_to_json, to_pretty_string,
};
use crate::lattice::{build_k3_lattice, signature};
use crate::nodal::{
    build_family, line_screen, nodal_quartic_through, random_rational_points,
    simple_vanishing_quartic, NodalError, DEFAULT_SAMPLE_TRIES,
};
use crate::pipeline::{run as pipeline_run, PipelineError, RunOptions};
use crate::rat::{rat_i, Rat};
use crate::sample::{histogram, SamplerConfig};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(
    name = "k3deg",
    version,
    about = "Exact-arithmetic toolkit for nodal degenerations of quartic K3 classes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice-level reports
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Decompose a class into (a0, a_j) and report its node count
    Decompose {
        /// Class as inline JSON or a path to a JSON file
        #[arg(long)]
        class: String,
        /// Working-basis size
        #[arg(long, default_value_t = DEFAULT_S)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run the degeneration pipeline on a class and emit the full report
    Run {
        /// Class as inline JSON or a path to a JSON file
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = DEFAULT_S)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attach a nodal quartic family on random points
        #[arg(long)]
        with_geometry: bool,
        /// Stir the cycle configuration by random rational rotations
        #[arg(long)]
        random_config: bool,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nodal quartic family construction
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Sample random classes and tally the node-count histogram
    Sample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Coefficient bound B: entries drawn from [-B, B]
        #[arg(long, default_value_t = 8)]
        bound: u32,
        /// Sparsity cap: at most this many nonzero transcendental entries
        #[arg(long, default_value_t = 2)]
        max_nonzero: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_S)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run the built-in invariant suite
    Selftest,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Report dim, evenness, |det|, and signature of the K3 lattice
    Check {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    /// Build a nodal family with verified witnesses
    Build {
        /// Path to a JSON array of projective points
        #[arg(long, conflicts_with = "k")]
        points: Option<PathBuf>,
        /// Number of random points to generate instead
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run the line screen with this many random lines
        #[arg(long, default_value_t = 0)]
        screen: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

/// Parses argv and dispatches; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Lattice { cmd } => match cmd {
            LatticeCmd::Check { format } => lattice_check(format),
        },
        Command::Decompose { class, s, format } => decompose_cmd(&class, s, format),
        Command::Run {
            class,
            s,
            seed,
            with_geometry,
            random_config,
            out,
        } => run_cmd(&class, s, seed, with_geometry, random_config, out),
        Command::Family { cmd } => match cmd {
            FamilyCmd::Build {
                points,
                k,
                seed,
                screen,
                out,
            } => family_build(points, k, seed, screen, out),
        },
        Command::Sample {
            count,
            bound,
            max_nonzero,
            seed,
            s,
            format,
        } => sample_cmd(count, bound, max_nonzero, seed, s, format),
        Command::Selftest => {
            let stdout = std::io::stdout();
            let ok = crate::selftest::run_selftest(&mut stdout.lock())
                .map_err(|e| Failure::validation(e.to_string()))?;
            if ok {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_VALIDATION,
                    message: String::new(),
                })
            }
        }
    }
}

fn lattice_check(format: Format) -> Result<(), Failure> {
    let l = build_k3_lattice();
    let (pos, neg) =
        signature(&l).map_err(|e| Failure::validation(format!("signature: {e}")))?;
    let det = l.gram().det();
    let abs_det = det.magnitude().to_string();
    match format {
        Format::Json => {
            let doc = json!({
                "dim": l.dim(),
                "even": l.gram().is_even(),
                "abs_det": abs_det,
                "signature": [pos, neg],
            });
            print!("{}", to_pretty_string(&doc));
        }
        Format::Table => {
            println!("dim        {}", l.dim());
            println!("even       {}", l.gram().is_even());
            println!("|det|      {abs_det}");
            println!("signature  ({pos},{neg})");
        }
    }
    Ok(())
}

/// Accepts inline JSON (starting with `{`) or a file path.
fn load_class_value(spec: &str) -> Result<Value, Failure> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| Failure::validation(format!("cannot read {spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::validation(format!("invalid JSON: {e}")))
}

fn decompose_cmd(class_spec: &str, s: usize, format: Format) -> Result<(), Failure> {
    let doc = load_class_value(class_spec)?;
    let class = class_from_json(&doc, s).map_err(|e| Failure::validation(e.to_string()))?;
    let (denom, scaled) = class.scale_to_integral();
    let l1 = crate::hodge::l1_size(&class);
    let count = node_count(&scaled);
    let (k_json, out_of_range) = match &count {
        Ok(k) => (json!(k), None),
        Err(NodeCountError::OutOfRange { k }) => (Value::Null, Some(k.to_string())),
        Err(NodeCountError::NonIntegral) => {
            unreachable!("scaled class has integral coefficients")
        }
    };
    match format {
        Format::Json => {
            let doc = json!({
                "class": class_to_json(&class),
                "l1": rat_value(&l1),
                "scaled_by": denom.to_string(),
                "k": k_json,
                "out_of_range_k": out_of_range,
            });
            print!("{}", to_pretty_string(&doc));
        }
        Format::Table => {
            println!("a0      {}", class.a0());
            for (i, c) in class.a().iter().enumerate() {
                if !c.is_zero() {
                    println!("a[{}]    {}", i + 1, c);
                }
            }
            println!("l1      {l1}");
            if !denom.is_one() {
                println!("scaled_by {denom}");
            }
            match &count {
                Ok(k) => println!("k       {k}"),
                Err(NodeCountError::OutOfRange { k }) => {
                    println!("k       {k} (exceeds the bound 10)")
                }
                Err(NodeCountError::NonIntegral) => unreachable!(),
            }
        }
    }
    if let Err(NodeCountError::OutOfRange { k }) = count {
        return Err(Failure {
            code: EXIT_BOUND,
            message: format!("node count {k} exceeds the bound 10"),
        });
    }
    Ok(())
}

fn emit(doc: &Value, out: Option<PathBuf>) -> Result<(), Failure> {
    let text = to_pretty_string(doc);
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(&path)
                .map_err(|e| Failure::validation(format!("cannot write {path:?}: {e}")))?;
            f.write_all(text.as_bytes())
                .map_err(|e| Failure::validation(e.to_string()))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run_cmd(
    class_spec: &str,
    s: usize,
    seed: u64,
    with_geometry: bool,
    random_config: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let doc = load_class_value(class_spec)?;
    let class = class_from_json(&doc, s).map_err(|e| Failure::validation(e.to_string()))?;
    let basis = WorkingBasis::new(s).map_err(|e| Failure::validation(e.to_string()))?;
    let (denom, class) = class.scale_to_integral();
    if !denom.is_one() {
        eprintln!("note: scaling class by {denom} to make the coefficients integral");
    }
    let options = RunOptions {
        seed,
        with_geometry,
        random_config,
    };
    let run = match pipeline_run(&class, &basis, options) {
        Ok(run) => run,
        Err(PipelineError::BoundExceeded { k }) => {
            return Err(Failure {
                code: EXIT_BOUND,
                message: format!("node count {k} exceeds the bound 10"),
            });
        }
        Err(e) => return Err(Failure::validation(e.to_string())),
    };
    let mut doc = run_to_json(&run);
    if !denom.is_one() {
        doc.as_object_mut()
            .expect("run document is an object")
            .insert("scaled_by".into(), Value::String(denom.to_string()));
    }
    emit(&doc, out)?;
    if !run.passed {
        return Err(Failure {
            code: EXIT_VALIDATION,
            message: format!(
                "verification failed: {}",
                run.first_failed.unwrap_or("unknown check")
            ),
        });
    }
    Ok(())
}

fn family_build(
    points_path: Option<PathBuf>,
    k: Option<usize>,
    seed: u64,
    screen: usize,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match (points_path, k) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::validation(format!("cannot read {path:?}: {e}")))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::validation(format!("invalid JSON: {e}")))?;
            points_from_json(&doc).map_err(|e| Failure::validation(e.to_string()))?
        }
        (None, Some(k)) => random_rational_points(k, &mut rng),
        (None, None) => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "family build needs --points FILE or --k N".to_string(),
            });
        }
    };
    match nodal_quartic_through(&points, &mut rng, DEFAULT_SAMPLE_TRIES) {
        Ok(nq) => {
            let g: Vec<_> = points
                .iter()
                .map(|p| simple_vanishing_quartic(p, &mut rng))
                .collect();
            let lambda: Vec<Rat> = (0..points.len())
                .map(|_| {
                    let mut v = 0;
                    while v == 0 {
                        v = rng.gen_range(-9i64..=9);
                    }
                    rat_i(v)
                })
                .collect();
            let family = build_family(nq.f, points, g, lambda)
                .map_err(|e| Failure::validation(e.to_string()))?;
            let screen_report = if screen > 0 {
                Some(line_screen(
                    family.f0(),
                    family.points(),
                    screen,
                    &mut rng,
                ))
            } else {
                None
            };
            let mut doc = family_to_json(&family, screen_report.as_ref());
            let obj = doc.as_object_mut().expect("family document is an object");
            obj.insert("status".into(), json!("built"));
            obj.insert("solution_dim".into(), json!(nq.solution_dim));
            obj.insert("rank".into(), json!(nq.rank));
            obj.insert("seed".into(), json!(seed));
            emit(&doc, out)
        }
        Err(NodalError::Infeasible { conditions, rank }) => {
            let doc = json!({
                "status": "infeasible",
                "k": points.len(),
                "conditions": conditions,
                "rank": rank,
                "solution_dim": 0,
                "seed": seed,
            });
            emit(&doc, out)
        }
        Err(NodalError::DegenerateOnly {
            conditions,
            rank,
            solution_dim,
            point,
        }) => {
            let doc = json!({
                "status": "degenerate_only",
                "k": points.len(),
                "conditions": conditions,
                "rank": rank,
                "solution_dim": solution_dim,
                "singular_hessian_at_point": point,
                "seed": seed,
            });
            emit(&doc, out)
        }
        Err(NodalError::NoWitness { tries }) => {
            let doc = json!({
                "status": "no_witness",
                "k": points.len(),
                "tries": tries,
                "seed": seed,
            });
            emit(&doc, out)?;
            Err(Failure::validation(format!(
                "no sampled quartic passed the Hessian witness in {tries} tries"
            )))
        }
        Err(e) => Err(Failure::validation(e.to_string())),
    }
}

fn sample_cmd(
    count: usize,
    bound: u32,
    max_nonzero: usize,
    seed: u64,
    s: usize,
    format: Format,
) -> Result<(), Failure> {
    if count == 0 || bound == 0 {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "sample needs --count >= 1 and --bound >= 1".to_string(),
        });
    }
    let cfg = SamplerConfig {
        coeff_bound: bound,
        max_nonzero,
        count,
        seed,
        s,
    };
    let h = histogram(&cfg);
    match format {
        Format::Json => {
            print!("{}", to_pretty_string(&histogram_to_json(&h, &cfg)));
        }
        Format::Table => {
            println!("k      count  percent");
            for (k, &c) in h.buckets.iter().enumerate() {
                println!("{k:<6} {c:<6} {}", h.percent_string(c));
            }
            println!(">10    {:<6} {}", h.overflow, h.percent_string(h.overflow));
            println!("total  {}", h.total);
            println!("mean_k {}", h.mean_k);
            println!("seed   {seed}");
        }
    }
    Ok(())
}
