//! Command-line front end. [`run`] takes its streams as arguments so the
//! binary and the tests drive the same code.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::decompose::{
    solve_in_span, FamilyTag, FpCombination, FpCombinationJson, SpanFamily, SpanSolution,
};
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::generate::{
    parse_vector, random_cylinder, random_divisible_fp, random_divisible_multiset, random_line,
    random_plane,
};
use crate::geometry::Geometry;
use crate::lift::{lift_multiset, lift_set, verify_certificate, ZCertificate, ZCertificateJson};
use crate::structure::{
    contains_full_line, determined_directions, exhaustive_scc_check, is_affine_bijection,
    is_cylinder, min_support_search, skew_lines_construction, DEFAULT_MIN_SEARCH_BUDGET,
};
use crate::weight::{line_indicator, plane_indicator, WeightFp, WeightJson, WeightZ};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cylinderlab",
    version,
    about = "p-divisible point sets in F_p^3"
)]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LiftKind {
    Set,
    Multiset,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Cylinder,
    Plane,
    Line,
    RandomDivisible,
    RandomMultiset,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plane-sum divisibility of an integer weight.
    Check {
        /// Path, inline JSON, or `-` for stdin.
        input: String,
    },
    /// Express a weight (reduced mod p) over a generator family.
    Decompose {
        #[arg(long, default_value_t = FamilyTag::ParallelDiffs)]
        family: FamilyTag,
        input: String,
    },
    /// Integer certificate for a set or multiset of size p^2.
    Lift {
        #[arg(value_enum)]
        kind: LiftKind,
        input: String,
    },
    /// Check a lift certificate or an F_p combination against its target.
    Verify { input: String },
    /// Cylinder, direction and full-line report.
    Analyze { input: String },
    /// Exhaustive check that p-divisible sets of size p^2 are cylinders.
    Scc {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Include elapsed time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate the skew-lines construction.
    Skew {
        #[arg(long)]
        p: u32,
        /// Comma-separated permutation of 0..p; identity if omitted.
        #[arg(long)]
        bijection: Option<String>,
    },
    /// Heuristic search for small line combinations without a full line.
    Minsearch {
        #[arg(long)]
        p: u32,
        /// Only supports strictly below this count qualify; default p^3.
        #[arg(long)]
        max_support: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MIN_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long, env = "CYLINDERLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timing: bool,
    },
    /// Emit a test instance.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        p: u32,
        /// Direction as `a,b,c`.
        #[arg(long)]
        dir: Option<String>,
        #[arg(long, env = "CYLINDERLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Line moves applied by `random-multiset`.
        #[arg(long, default_value_t = 3)]
        moves: usize,
    },
}

/// A failure with its exit code and a one-line diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PreconditionViolated { .. }
            | Error::SizeViolation { .. }
            | Error::NotAMultiset { .. }
            | Error::NotRepresentable { .. }
            | Error::LiftObstruction { .. }
            | Error::CertificateMismatch => EXIT_FALSE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(serde_json::Value, i32), Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = dispatch(&cli.command, stdin);
    match result {
        Ok((value, code)) => {
            let mut text = match cli.format {
                Format::Json => serde_json::to_string(&value),
                Format::Pretty => serde_json::to_string_pretty(&value),
            }
            .expect("serializable");
            text.push('\n');
            let written = match &cli.output {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_INPUT
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn read_input(spec: &str, stdin: &mut dyn Read) -> std::result::Result<String, Failure> {
    let trimmed = spec.trim_start();
    if spec == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        Ok(s)
    } else if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(spec.to_owned())
    } else {
        std::fs::read_to_string(spec).map_err(|e| Failure::input(format!("{spec}: {e}")))
    }
}

fn parse_json<T: DeserializeOwned>(text: &str) -> std::result::Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| json_failure(&e))
}

fn parse_value<T: DeserializeOwned>(v: serde_json::Value) -> std::result::Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| json_failure(&e))
}

fn json_failure<E: std::fmt::Display>(e: &serde_path_to_error::Error<E>) -> Failure {
    let path = e.path().to_string();
    if path == "." {
        Failure::input(format!("{}", e.inner()))
    } else {
        Failure::input(format!("{path}: {}", e.inner()))
    }
}

/// Names the offending field of a weight document.
fn weight_failure(prefix: &str, e: Error) -> Failure {
    let field = match &e {
        Error::NotPrime(_) => "p".to_owned(),
        Error::ResidueOutOfRange { index, .. } => format!("values[{index}]"),
        _ => "values".to_owned(),
    };
    Failure::input(format!("{prefix}{field}: {e}"))
}

fn read_weight(spec: &str, stdin: &mut dyn Read) -> std::result::Result<WeightZ, Failure> {
    let j: WeightJson = parse_json(&read_input(spec, stdin)?)?;
    WeightZ::try_from(j).map_err(|e| weight_failure("", e))
}

fn modulus(p: u32) -> std::result::Result<PrimeModulus, Failure> {
    PrimeModulus::new(p).map_err(|e| Failure::input(format!("--p: {e}")))
}

fn direction_arg(
    p: PrimeModulus,
    dir: Option<&str>,
) -> std::result::Result<Option<[u32; 3]>, Failure> {
    let Some(s) = dir else { return Ok(None) };
    let v = parse_vector(s).map_err(|e| Failure::input(format!("--dir: {e}")))?;
    if let Some(&bad) = v.iter().find(|&&c| c >= p.get()) {
        return Err(Failure::input(format!(
            "--dir: {}",
            Error::CoordinateOutOfRange {
                value: bad,
                p: p.get()
            }
        )));
    }
    if v == [0, 0, 0] {
        return Err(Failure::input(format!(
            "--dir: {}",
            Error::InvalidDirection
        )));
    }
    Ok(Some(v))
}

fn dispatch(cmd: &Command, stdin: &mut dyn Read) -> Outcome {
    match cmd {
        Command::Check { input } => {
            let w = read_weight(input, stdin)?;
            let r = w.is_p_divisible();
            let mut out = serde_json::json!({ "divisible": r.divisible });
            if let Some((h, s)) = r.witness {
                out["witness"] = serde_json::json!({ "plane": h.to_string(), "sum": s });
            }
            Ok((out, if r.divisible { EXIT_OK } else { EXIT_FALSE }))
        }
        Command::Decompose { family, input } => {
            let w = read_weight(input, stdin)?.reduce_mod_p();
            let fam = SpanFamily::get(w.modulus(), *family);
            match solve_in_span(&w, &fam)? {
                SpanSolution::InSpan(c) => Ok((to_value(&FpCombinationJson::from(&c)), EXIT_OK)),
                SpanSolution::NotInSpan { witness } => Ok((
                    serde_json::json!({
                        "in_span": false,
                        "family": family,
                        "witness": WeightJson::from(&witness),
                    }),
                    EXIT_FALSE,
                )),
            }
        }
        Command::Lift { kind, input } => {
            let w = read_weight(input, stdin)?;
            let cert = match kind {
                LiftKind::Set => lift_set(&w)?,
                LiftKind::Multiset => lift_multiset(&w)?,
            };
            Ok((to_value(&ZCertificateJson::from(&cert)), EXIT_OK))
        }
        Command::Verify { input } => {
            let v: serde_json::Value = parse_json(&read_input(input, stdin)?)?;
            let ok = if v.get("family").is_some() {
                let j: FpCombinationJson = parse_value(v)?;
                let target = j.target.clone();
                WeightFp::try_from(target).map_err(|e| weight_failure("target.", e))?;
                FpCombination::try_from(j)?.is_valid()
            } else {
                let j: ZCertificateJson = parse_value(v)?;
                let target = j.target.clone();
                WeightZ::try_from(target).map_err(|e| weight_failure("target.", e))?;
                verify_certificate(&ZCertificate::try_from(j)?)
            };
            Ok((
                serde_json::Value::Bool(ok),
                if ok { EXIT_OK } else { EXIT_FALSE },
            ))
        }
        Command::Analyze { input } => {
            let w = read_weight(input, stdin)?;
            Ok((analyze(&w)?, EXIT_OK))
        }
        Command::Scc { p, workers, timing } => {
            let m = modulus(*p)?;
            let r = exhaustive_scc_check(m, *workers)?;
            let code = if r.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_FALSE
            };
            Ok((to_value(&r.to_json(*timing)), code))
        }
        Command::Skew { p, bijection } => {
            let m = modulus(*p)?;
            let sigma: Vec<u32> = match bijection {
                None => (0..m.get()).collect(),
                Some(s) => s
                    .split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Failure::input(format!("--bijection: {e}")))?,
            };
            let w = skew_lines_construction(m, &sigma)
                .map_err(|e| Failure::input(format!("--bijection: {e}")))?;
            Ok((
                serde_json::json!({
                    "p": m.get(),
                    "bijection": sigma,
                    "affine_bijection": is_affine_bijection(m, &sigma),
                    "is_set": w.is_set(),
                    "total_weight": w.total_weight(),
                    "support_size": w.support_size(),
                    "full_line": contains_full_line(&w).map(|l| l.to_string()),
                    "weight": WeightJson::from(&w),
                }),
                EXIT_OK,
            ))
        }
        Command::Minsearch {
            p,
            max_support,
            budget,
            seed,
            timing,
        } => {
            let m = modulus(*p)?;
            let r = min_support_search(m, max_support.unwrap_or(m.cube()), *budget, *seed);
            Ok((to_value(&r.to_json(*timing)), EXIT_OK))
        }
        Command::Generate {
            kind,
            p,
            dir,
            seed,
            moves,
        } => {
            let m = modulus(*p)?;
            let dir = direction_arg(m, dir.as_deref())?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let w = match kind {
                GenKind::Cylinder => random_cylinder(m, dir, &mut rng)?,
                GenKind::Plane => plane_indicator(&random_plane(m, &mut rng)),
                GenKind::Line => line_indicator(&random_line(m, dir, &mut rng)?),
                GenKind::RandomDivisible => random_divisible_fp(m, &mut rng).lift(),
                GenKind::RandomMultiset => random_divisible_multiset(m, *moves, &mut rng),
            };
            let ok = match kind {
                GenKind::Cylinder => is_cylinder(&w)?.is_some() && w.is_p_divisible().divisible,
                GenKind::Plane | GenKind::RandomDivisible => w.is_p_divisible().divisible,
                GenKind::Line => w.is_set() && w.total_weight() == m.get() as i64,
                GenKind::RandomMultiset => {
                    w.is_multiset()
                        && w.total_weight() == m.square() as i64
                        && w.is_p_divisible().divisible
                }
            };
            if !ok {
                return Err(Failure::input(
                    "generated instance failed its own predicate",
                ));
            }
            Ok((to_value(&WeightJson::from(&w)), EXIT_OK))
        }
    }
}

fn analyze(w: &WeightZ) -> std::result::Result<serde_json::Value, Failure> {
    let p = w.modulus();
    let geo = Geometry::get(p);
    let div = w.is_p_divisible();
    let mut out = serde_json::json!({
        "p": p.get(),
        "total_weight": w.total_weight(),
        "support_size": w.support_size(),
        "is_set": w.is_set(),
        "is_multiset": w.is_multiset(),
        "divisible": div.divisible,
        "full_line": contains_full_line(w).map(|l| l.to_string()),
        "cylinder": null,
        "determined": null,
        "undetermined": null,
    });
    if w.is_set() {
        if w.total_weight() == p.square() as i64 {
            out["cylinder"] = to_value(&is_cylinder(w)?.map(|d| d.to_string()));
        }
        let r = determined_directions(w)?;
        let names = |s: &std::collections::BTreeSet<_>| -> Vec<String> {
            geo.directions
                .iter()
                .filter(|d| s.contains(*d))
                .map(|d| d.to_string())
                .collect()
        };
        out["determined"] = to_value(&names(&r.determined));
        out["undetermined"] = to_value(&names(&r.undetermined));
    }
    Ok(out)
}
