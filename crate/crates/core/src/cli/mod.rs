//! The `lrc` command line: `encode`, `decode`, `repair` and `analyze`.
//!
//! Exit codes: 0 success, 1 I/O failure or a code that is not
//! locality-optimal, 2 invalid parameters or an exhausted budget, 3 not
//! enough shards, 4 integrity failure (checksum, malformed manifest or
//! shard).

pub mod manifest;
pub mod pack;
pub mod store;

use crate::analysis::{decodability_report, decodability_report_for, DecodabilityReport};
use crate::codec::RepairPath;
use crate::construction::{
    build_generator, make_params, parse_matrix_text, write_matrix_text, AlphaPolicy, ParamError,
};
use crate::field::{linalg, BaseField};
use crate::matroid::{matroid_report, Budget, MatroidReport, DEFAULT_BUDGET};
use clap::{Args, Parser, Subcommand};
use manifest::shard_filename;
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Params(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("insufficient shards: {0}")]
    Insufficient(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Params(_) => 2,
            CliError::Insufficient(_) => 3,
            CliError::Integrity(_) => 4,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Params(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "lrc", version, about = "Locally repairable erasure codes")]
struct Cli {
    /// Log every shard read and written to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 2)]
    delta: usize,
    /// Base field: prime:<p> or gf2:<4|8|16>.
    #[arg(long, default_value = "gf2:8")]
    field: String,
}

impl CodeArgs {
    fn base(&self) -> Result<BaseField, CliError> {
        self.field.parse().map_err(|e| CliError::Params(format!("--field: {e}")))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a file into n shards plus manifest.json.
    Encode {
        input: PathBuf,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Rebuild the original file from the shards that are left.
    Decode {
        dir: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Rebuild shards from the other members of their repair group.
    Repair {
        dir: PathBuf,
        /// Shard index (0-based); may be repeated.
        #[arg(long = "shard", required = true)]
        shards: Vec<usize>,
        /// Fall back to a full decode when a group lost too many shards.
        #[arg(long)]
        allow_global: bool,
    },
    /// Report circuits, mu, distance, optimality and decodability.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Analyze a generator dump instead of building one from parameters.
    #[arg(long, conflicts_with_all = ["n", "k", "field", "write_matrix"])]
    matrix: Option<PathBuf>,
    #[arg(long, required_unless_present = "matrix")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "matrix")]
    k: Option<usize>,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 2)]
    delta: usize,
    #[arg(long)]
    field: Option<String>,
    /// Monte Carlo trials (0 to skip).
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Limit on subset and family evaluations.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Also write the generator as a text dump.
    #[arg(long)]
    write_matrix: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct AnalyzeOutput {
    verdict: &'static str,
    matroid: MatroidReport,
    decodability: Option<DecodabilityReport>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let verbose = cli.verbose;
    match cli.command {
        Command::Encode { input, out: dir, code } => {
            let params = make_params(code.n, code.k, code.r, code.delta, code.base()?, AlphaPolicy::Canonical)?;
            let res = store::encode_file(&input, &dir, &params)?;
            let m = &res.manifest;
            if verbose {
                for name in &m.shard_filenames {
                    let _ = writeln!(err, "wrote {name}");
                }
            }
            let _ = writeln!(
                out,
                "encoded {} bytes into {} shards ({} stripes) in {}",
                m.original_length,
                m.n,
                m.stripe_count,
                dir.display()
            );
            Ok(0)
        }
        Command::Decode { dir, out: path } => {
            let res = store::decode_dir(&dir, &path)?;
            if verbose {
                for &i in &res.read {
                    let _ = writeln!(err, "read {}", shard_filename(i));
                }
            }
            let _ =
                writeln!(out, "decoded {} bytes to {} (missing shards: {:?})", res.length, path.display(), res.missing);
            Ok(0)
        }
        Command::Repair { dir, shards, allow_global } => {
            for res in store::repair_shards(&dir, &shards, allow_global)? {
                if verbose {
                    for &i in &res.read {
                        let _ = writeln!(err, "read {}", shard_filename(i));
                    }
                }
                let names = |v: &[usize]| v.iter().map(|&i| shard_filename(i)).collect::<Vec<_>>().join(", ");
                let how = match res.path {
                    RepairPath::Local => "local",
                    RepairPath::Global => "global",
                };
                let _ = writeln!(out, "rebuilt {} from {} ({how})", names(&res.rebuilt), names(&res.read));
            }
            Ok(0)
        }
        Command::Analyze(args) => analyze(args, out, err),
    }
}

fn analyze(args: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mut budget = Budget::new(args.budget);
    let locality = Some((args.r, args.delta));
    let budget_err = |e: crate::matroid::MatroidError| CliError::Params(e.to_string());
    let analysis_err = |e: crate::analysis::AnalysisError| CliError::Params(e.to_string());

    let (matroid, decodability) = if let Some(path) = &args.matrix {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let (field, g) = parse_matrix_text(&text).map_err(|e| CliError::Params(format!("{}: {e}", path.display())))?;
        let report = matroid_report(&field, &g, locality, &mut budget).map_err(budget_err)?;
        let group = args.r + args.delta - 1;
        let decodability = if g.cols() % group == 0 {
            let k = linalg::rank(&field, &g);
            Some(decodability_report_for(&field, &g, k, args.r, group, args.trials, args.seed).map_err(analysis_err)?)
        } else {
            None
        };
        (report, decodability)
    } else {
        let base: BaseField =
            args.field.as_deref().unwrap_or("gf2:8").parse().map_err(|e| CliError::Params(format!("--field: {e}")))?;
        let (n, k) = (args.n.unwrap_or_default(), args.k.unwrap_or_default());
        let params = make_params(n, k, args.r, args.delta, base, AlphaPolicy::Canonical)?;
        let gm = build_generator(&params)?;
        if let Some(path) = &args.write_matrix {
            std::fs::write(path, write_matrix_text(gm.field(), gm.matrix())).map_err(|e| CliError::io(path, e))?;
        }
        let report = matroid_report(gm.field(), gm.matrix(), locality, &mut budget).map_err(budget_err)?;
        (report, Some(decodability_report(&gm, args.trials, args.seed).map_err(analysis_err)?))
    };

    let optimal = matroid.optimal_lrc.as_ref().is_some_and(|v| v.optimal);
    let output =
        AnalyzeOutput { verdict: if optimal { "optimal" } else { "not locality-optimal" }, matroid, decodability };
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&output).expect("report serializes"));
    let _ = writeln!(err, "verdict: {}", output.verdict);
    Ok(if optimal { 0 } else { 1 })
}
