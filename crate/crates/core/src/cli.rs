//! Command-line front end. `run` parses arguments, executes one command and
//! returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, or the elements are conjugate |
//! | 1 | the elements are not conjugate |
//! | 2 | malformed input, invalid flags or configuration |
//! | 3 | a search was exhausted before a decision |
//! | 4 | a ball outgrew its element cap |

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::groups::GroupConfig;
use crate::harness::{self, ClfOptions, ClfTable, FitModel};
use crate::linalg::{int_vec, IntMatrix};
use crate::metrics::{bfs_ball, DEFAULT_CAP};
use crate::solvers::{self, SolverCaps};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONJUGATE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_CAP: i32 = 4;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "conjlen", version, about = "Conjugacy solvers and conjugacy length measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of a word.
    NormalForm {
        #[arg(long)]
        config: PathBuf,
        word: String,
    },
    /// Decide conjugacy of two words and print a JSON report.
    Conjugate {
        #[arg(long)]
        config: PathBuf,
        u: String,
        v: String,
        /// Radius of the ball searched for a shortest conjugator.
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        caps: CapsArgs,
    },
    /// Empirical conjugacy length function.
    Clf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_max: usize,
        /// Radius of the element ball; defaults to n-max.
        #[arg(long)]
        radius: Option<usize>,
        /// Largest conjugator length searched; defaults to twice n-max.
        #[arg(long)]
        conjugator_radius: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = ModelArg::Linear)]
        model: ModelArg,
        /// Number of random triples checked for consistency of the partition.
        #[arg(long, default_value_t = 0)]
        audit: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: CapsArgs,
    },
    /// Twisted conjugacy length in Z^d for a matrix given as JSON rows.
    Tclf {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = ModelArg::Linear)]
        model: ModelArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restricted conjugacy length of <a> in BS(1,m).
    Rclf {
        #[arg(long, default_value_t = 2)]
        m: i64,
        #[arg(long)]
        r_max: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = ModelArg::Linear)]
        model: ModelArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilizer lattice and its covering radius for a kernel vector and a
    /// quotient element, both given as JSON arrays.
    Rho {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        u: String,
        #[arg(long)]
        y: String,
    },
    /// Breadth-first Cayley ball as CSV.
    Ball {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact word length of a word, read from a ball.
    Wordlen {
        #[arg(long)]
        config: PathBuf,
        word: String,
        #[arg(long, default_value_t = 12)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Linear,
    Exponential,
}

impl From<ModelArg> for FitModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Linear => FitModel::Linear,
            ModelArg::Exponential => FitModel::Exponential,
        }
    }
}

#[derive(Clone, Copy, Debug, Args)]
pub struct CapsArgs {
    #[arg(long, default_value_t = SolverCaps::default().max_search_radius)]
    pub max_search_radius: u64,
    #[arg(long, default_value_t = SolverCaps::default().max_candidates)]
    pub max_candidates: u64,
    #[arg(long, default_value_t = SolverCaps::default().max_levels)]
    pub max_levels: u64,
    #[arg(long)]
    pub require_expanding: bool,
}

impl From<CapsArgs> for SolverCaps {
    fn from(a: CapsArgs) -> Self {
        SolverCaps {
            max_search_radius: a.max_search_radius,
            max_candidates: a.max_candidates,
            max_levels: a.max_levels,
            require_expanding: a.require_expanding,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::SearchExhausted | Error::BeyondRadius { .. } => EXIT_EXHAUSTED,
        _ => EXIT_INPUT,
    }
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::NormalForm { config, word } => {
            let cfg = GroupConfig::from_path(&config)?;
            writeln!(out, "{}", cfg.eval_str(&word)?)?;
            Ok(EXIT_OK)
        }
        Command::Conjugate { config, u, v, radius, cap, caps } => {
            let cfg = GroupConfig::from_path(&config)?;
            let (ue, ve) = (cfg.eval_str(&u)?, cfg.eval_str(&v)?);
            let mut report = solvers::conjugate(&cfg, &ue, &ve, &caps.into())?;
            let ball = if report.conjugate { Some(bfs_ball(&cfg, radius, cap)?) } else { None };
            if let Some(b) = &ball {
                report.minimize_in(&cfg, &ue, &ve, b);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json(&cfg, ball.as_ref()))?)?;
            Ok(if report.conjugate {
                EXIT_OK
            } else if report.search_exhausted {
                EXIT_EXHAUSTED
            } else {
                EXIT_NOT_CONJUGATE
            })
        }
        Command::Clf { config, n_max, radius, conjugator_radius, cap, model, audit, seed, out: path, caps } => {
            let cfg = GroupConfig::from_path(&config)?;
            let mut opts = ClfOptions::new(n_max);
            opts.ball_radius = radius.unwrap_or(n_max);
            opts.conjugator_radius = conjugator_radius.unwrap_or(opts.conjugator_radius);
            opts.cap = cap;
            opts.caps = caps.into();
            let table = harness::empirical_clf(&cfg, &opts)?;
            let audited = if audit > 0 { Some(audit_partition(&cfg, &opts, audit, seed)?) } else { None };
            let meta = json!({
                "kind": "clf",
                "config": cfg.doc(),
                "options": opts,
                "seed": seed,
                "audited_triples": audited,
            });
            emit(&table, model.into(), meta, path.as_deref(), out)
        }
        Command::Tclf { phi, n_max, cap, model, out: path } => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(&phi)?;
            let d = rows.len();
            if d == 0 || rows.iter().any(|r| r.len() != d) {
                return Err(Error::DomainError("phi must be a non-empty square matrix".into()));
            }
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let phi_m = IntMatrix::from_i64(&refs);
            let table = harness::empirical_tclf(d, &phi_m, n_max, cap)?;
            let meta = json!({ "kind": "tclf", "phi": rows, "n_max": n_max, "cap": cap });
            emit(&table, model.into(), meta, path.as_deref(), out)
        }
        Command::Rclf { m, r_max, cap, model, out: path } => {
            let rt = harness::empirical_rclf_bs(m, r_max, cap)?;
            let meta = json!({ "kind": "rclf", "m": m, "r_max": r_max, "horizon": rt.horizon, "cap": cap });
            emit(&rt.table, model.into(), meta, path.as_deref(), out)
        }
        Command::Rho { config, u, y } => {
            let cfg = GroupConfig::from_path(&config)?;
            if !cfg.is_semidirect() {
                return Err(Error::DomainError("rho needs a semidirect configuration".into()));
            }
            let u: Vec<i64> = serde_json::from_str(&u)?;
            let y: Vec<i64> = serde_json::from_str(&y)?;
            if u.len() != cfg.dim() || y.len() != cfg.acting_rank() {
                return Err(Error::DomainError("vector lengths do not match the configuration".into()));
            }
            let lattice = solvers::stabilizer_lattice(&cfg, &int_vec(&u), &y)?;
            let radius = solvers::stabilizer::covering_radius_l1(&lattice);
            let basis: Vec<Vec<String>> =
                lattice.basis.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            let report = json!({
                "rho": radius,
                "index": lattice.index.to_string(),
                "basis": basis,
                "orbit_orders": lattice.orbit_orders,
                "quotient_order": lattice.quotient_order.to_string(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(EXIT_OK)
        }
        Command::Ball { config, radius, cap, out: path } => {
            let cfg = GroupConfig::from_path(&config)?;
            let ball = bfs_ball(&cfg, radius, cap)?;
            let mut buf = Vec::new();
            ball.write_csv(&mut buf)?;
            match path {
                Some(p) => harness::write_atomic(&p, &buf)?,
                None => out.write_all(&buf)?,
            }
            Ok(EXIT_OK)
        }
        Command::Wordlen { config, word, radius, cap } => {
            let cfg = GroupConfig::from_path(&config)?;
            let g = cfg.eval_str(&word)?;
            let ball = bfs_ball(&cfg, radius, cap)?;
            let len = ball.word_length(&g)?;
            let geodesic = cfg.format_word(&ball.geodesic(&cfg, &g)?);
            writeln!(out, "{}", serde_json::to_string(&json!({ "length": len, "geodesic": geodesic }))?)?;
            Ok(EXIT_OK)
        }
    }
}

/// Writes the table (CSV) and its metadata (JSON, next to it) atomically, or
/// the CSV to `out` when no path is given. The fit is skipped when no row is
/// certified.
fn emit(table: &ClfTable, model: FitModel, mut meta: serde_json::Value, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let fit = match harness::fit_bound(table, model) {
        Ok(f) => Some(f),
        Err(Error::EmptyTable) => None,
        Err(e) => return Err(e),
    };
    meta["fit"] = serde_json::to_value(fit)?;
    meta["monotone"] = json!(table.is_monotone());
    meta["all_certified"] = json!(table.all_certified());
    let csv = table.to_csv_string();
    match path {
        Some(p) => {
            harness::write_atomic(p, csv.as_bytes())?;
            let meta_path = metadata_path(p);
            harness::write_atomic(&meta_path, serde_json::to_string_pretty(&meta)?.as_bytes())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&meta)?)?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// `table.csv` → `table.json`; any other name gets `.json` appended.
pub fn metadata_path(p: &Path) -> PathBuf {
    match p.extension() {
        Some(ext) if ext == "csv" => p.with_extension("json"),
        _ => {
            let mut s = p.as_os_str().to_owned();
            s.push(".json");
            PathBuf::from(s)
        }
    }
}

/// Samples triples from the ball and checks that the solver's answers are
/// reflexive, symmetric and transitive on them. Returns the number checked.
fn audit_partition(cfg: &GroupConfig, opts: &ClfOptions, triples: usize, seed: u64) -> Result<usize> {
    let ball = bfs_ball(cfg, opts.n_max, opts.cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ball.len();
    let decide = |x: usize, y: usize| -> Result<Option<bool>> {
        let r = solvers::conjugate(cfg, ball.get_index(x).expect("index").0, ball.get_index(y).expect("index").0, &opts.caps)?;
        Ok(r.decided().then_some(r.conjugate))
    };
    for _ in 0..triples {
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let fail = |what: &str| Error::DomainError(format!("partition audit failed ({what}) on ball indices {x}, {y}, {z}"));
        if decide(x, x)? == Some(false) {
            return Err(fail("reflexivity"));
        }
        let (xy, yx, yz, xz) = (decide(x, y)?, decide(y, x)?, decide(y, z)?, decide(x, z)?);
        if let (Some(a), Some(b)) = (xy, yx) {
            if a != b {
                return Err(fail("symmetry"));
            }
        }
        if xy == Some(true) && yz == Some(true) && xz == Some(false) {
            return Err(fail("transitivity"));
        }
    }
    Ok(triples)
}
