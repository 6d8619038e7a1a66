//! Command-line front end.
//!
//! Exit codes: `0` verified / all checks pass, `2` inconclusive, `1` error
//! or a failed check.

pub mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, DerivedTower, DEFAULT_BUDGET};
use crate::certify::{self, PropertyResult, SpecEcho};
use crate::error::Error;
use crate::scalar::{with_field, Field, FieldSpec, FieldVisitor};
use crate::words::AlgebraSpec;

use cache::Cache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nilpow",
    version,
    about = "Lie derived powers of nil-generated associative algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension table of A_d and A^[1]_d, ..., A^[levels]_d.
    Dims {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Nilpotency index of A / id(A^[k]).
    Nilpotency {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        k: usize,
    },
    /// Certify that A^[i] is generated by its components of degree <= 2n-2.
    Certify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        i: usize,
        /// Record wall-clock timings (makes the output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Randomised and exhaustive property checks.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// f_k level; all of 1, 2, 3 when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Number of random Lie ideals for the lemma1 suite.
        #[arg(long, default_value_t = 20)]
        ideals: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Identities,
    Lemma1,
    Fk,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML file with `generators`, `nil`, `field`, `max_degree`; flags override it.
    #[arg(long = "spec")]
    pub spec_file: Option<PathBuf>,
    #[arg(long)]
    pub generators: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub nil: Option<Vec<u32>>,
    /// `fp:<p>` for an odd prime p, or `q`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "NILPOW_CACHE")]
    pub cache: Option<PathBuf>,
    /// Largest dim A_d any computation may touch.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

/// Contents of a suite file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub generators: Option<usize>,
    pub nil: Option<Vec<u32>>,
    pub field: Option<String>,
    pub max_degree: Option<usize>,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Validated configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: AlgebraSpec,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub budget: u64,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let file = match &self.spec_file {
            Some(p) => SpecFile::load(p)?,
            None => SpecFile::default(),
        };
        let nil = self
            .nil
            .clone()
            .or(file.nil)
            .ok_or("missing --nil <n1,...,nm>")?;
        if let Some(m) = self.generators.or(file.generators) {
            if m != nil.len() {
                return Err(format!(
                    "--generators {m} does not match {} nil exponents",
                    nil.len()
                ));
            }
        }
        let field = match self.field.as_ref().or(file.field.as_ref()) {
            Some(s) => s.parse::<FieldSpec>().map_err(|e| e.to_string())?,
            None => FieldSpec::default(),
        };
        let max_degree = self
            .max_degree
            .or(file.max_degree)
            .ok_or("missing --max-degree <D>")?;
        let spec = AlgebraSpec::new(nil, field, max_degree).map_err(|e| e.to_string())?;
        Ok(RunConfig {
            spec,
            seed: self.seed,
            out: self.out.clone(),
            cache: self.cache.clone(),
            budget: self.budget,
        })
    }
}

/// What a command produced: the document to write and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

#[derive(Debug, Serialize)]
struct DimsDoc {
    spec: SpecEcho,
    levels: usize,
    rows: Vec<DimsRow>,
}

#[derive(Debug, Serialize)]
struct DimsRow {
    degree: usize,
    dims: Vec<u64>,
}

#[derive(Debug, Serialize)]
struct CheckDoc {
    version: u32,
    spec: SpecEcho,
    seed: u64,
    passed: bool,
    results: Vec<PropertyResult>,
}

fn echo(spec: &AlgebraSpec) -> SpecEcho {
    SpecEcho {
        m: spec.generators(),
        nil: spec.nil().to_vec(),
        field: spec.field().to_string(),
        max_degree: spec.max_degree(),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Levels of the tower that are cached and complete.
struct TowerCache<'c> {
    cache: Option<&'c Cache>,
}

impl TowerCache<'_> {
    fn load<F: Field>(&self, tower: &mut DerivedTower<'_, F>, levels: usize) {
        let Some(cache) = self.cache else { return };
        let alg = tower.algebra();
        for level in 1..=levels {
            if let Some(s) = cache.get(alg, &format!("derived/{level}")) {
                log::info!("cache hit: A^[{level}]");
                if tower.preload(level, s).is_err() {
                    log::warn!("cache entry for A^[{level}] does not fit this algebra");
                }
            }
        }
    }

    fn store<F: Field>(&self, tower: &DerivedTower<'_, F>) {
        let Some(cache) = self.cache else { return };
        let alg = tower.algebra();
        for level in 1..=tower.depth() {
            if tower.computed_through(level) == alg.max_degree() {
                if let Err(e) = cache.put(alg, &format!("derived/{level}"), tower.level(level)) {
                    log::warn!("cannot write cache entry for A^[{level}]: {e}");
                }
            }
        }
    }
}

struct Job<'a> {
    command: &'a Command,
    config: &'a RunConfig,
    cache: Option<&'a Cache>,
}

impl FieldVisitor for Job<'_> {
    type Output = Result<Outcome, Error>;

    fn visit<F: Field>(self, field: F) -> Self::Output {
        let alg = Algebra::new(self.config.spec.clone(), field)?.with_budget(self.config.budget);
        let cached = TowerCache { cache: self.cache };
        let mut tower = DerivedTower::new(&alg);
        let seed = self.config.seed;
        let outcome = match self.command {
            Command::Dims { levels, format, .. } => {
                cached.load(&mut tower, *levels);
                dims(&mut tower, *levels, *format)?
            }
            Command::Nilpotency { k, .. } => {
                cached.load(&mut tower, *k);
                let report = certify::nilpotency_index(&mut tower, *k)?;
                let code = if report.n.is_some() { EXIT_OK } else { EXIT_INCONCLUSIVE };
                Outcome {
                    output: to_json(&report),
                    code,
                }
            }
            Command::Certify { i, timings, .. } => {
                cached.load(&mut tower, i + 1);
                let mut cert = certify::certify_generation(&mut tower, *i, seed)?;
                if !timings {
                    cert.timings_ms.clear();
                }
                if let Some(reason) = &cert.reason {
                    log::warn!("inconclusive: {reason}");
                }
                let code = if cert.is_verified() { EXIT_OK } else { EXIT_INCONCLUSIVE };
                Outcome {
                    output: cert.to_json(),
                    code,
                }
            }
            Command::Check {
                which,
                trials,
                k,
                ideals,
                ..
            } => {
                cached.load(&mut tower, 3);
                check(&mut tower, *which, *trials, *k, *ideals, seed)?
            }
        };
        cached.store(&tower);
        Ok(outcome)
    }
}

fn dims<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    levels: usize,
    format: Format,
) -> Result<Outcome, Error> {
    let alg = tower.algebra();
    let max_degree = alg.max_degree();
    for level in 0..=levels {
        tower.ensure(level, max_degree)?;
    }
    let rows: Vec<DimsRow> = (1..=max_degree)
        .map(|d| DimsRow {
            degree: d,
            dims: (0..=levels)
                .map(|l| tower.level(l).dim_at(d) as u64)
                .collect(),
        })
        .collect();
    let output = match format {
        Format::Json => to_json(&DimsDoc {
            spec: echo(alg.spec()),
            levels,
            rows,
        }),
        Format::Csv => {
            let mut s = String::from("degree,dim_A");
            for l in 1..=levels {
                let _ = write!(s, ",dim_A{l}");
            }
            s.push('\n');
            for r in rows {
                let cells: Vec<String> = r.dims.iter().map(u64::to_string).collect();
                let _ = writeln!(s, "{},{}", r.degree, cells.join(","));
            }
            s
        }
    };
    Ok(Outcome {
        output,
        code: EXIT_OK,
    })
}

fn check<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    which: CheckKind,
    trials: usize,
    k: Option<usize>,
    ideals: usize,
    seed: u64,
) -> Result<Outcome, Error> {
    let alg = tower.algebra();
    let mut results = Vec::new();
    if matches!(which, CheckKind::Identities | CheckKind::All) {
        results.extend(certify::identity_check(alg, trials, seed)?);
    }
    if matches!(which, CheckKind::Lemma1 | CheckKind::All) {
        results.extend(certify::lemma1_suite(tower, ideals, seed)?);
    }
    if matches!(which, CheckKind::Fk | CheckKind::All) {
        let ks: Vec<usize> = match k {
            Some(k) => vec![k],
            None => vec![1, 2, 3],
        };
        for k in ks {
            results.push(certify::fk_identity_check(tower, k, trials, seed)?);
        }
    }
    let passed = results.iter().all(PropertyResult::passed);
    for r in results.iter().filter(|r| !r.passed()) {
        log::error!(
            "{}: {} of {} trials failed; first: {}",
            r.property,
            r.violations,
            r.trials,
            r.counterexample.as_deref().unwrap_or("-")
        );
    }
    let doc = CheckDoc {
        version: certify::CERTIFICATE_VERSION,
        spec: echo(alg.spec()),
        seed,
        passed,
        results,
    };
    Ok(Outcome {
        output: to_json(&doc),
        code: if passed { EXIT_OK } else { EXIT_ERROR },
    })
}

fn run_args(command: &Command) -> &RunArgs {
    match command {
        Command::Dims { run, .. }
        | Command::Nilpotency { run, .. }
        | Command::Certify { run, .. }
        | Command::Check { run, .. } => run,
    }
}

/// Runs a parsed command. `Err` carries a message for exit code 1.
pub fn execute(cli: &Cli) -> Result<Outcome, String> {
    let args = run_args(&cli.command);
    let config = args.resolve()?;
    for g in config.spec.dead_generators() {
        log::warn!(
            "generator {} has nil exponent 1; it is zero and excluded from the basis",
            config.spec.letter_name(g as u8)
        );
    }
    let cache = match &config.cache {
        Some(dir) => Some(Cache::open(dir).map_err(|e| format!("cache {}: {e}", dir.display()))?),
        None => None,
    };
    let job = Job {
        command: &cli.command,
        config: &config,
        cache: cache.as_ref(),
    };
    let outcome = with_field(config.spec.field(), job).map_err(|e| e.to_string())?;
    if let Some(path) = &config.out {
        fs::write(path, &outcome.output).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(outcome)
}

/// Parses `args`, runs the command, prints results, and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let verbosity = run_args(&cli.command).verbose;
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
    match execute(&cli) {
        Ok(outcome) => {
            if run_args(&cli.command).out.is_none() {
                print!("{}", outcome.output);
            }
            outcome.code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome, String> {
        let mut full = vec!["nilpow"];
        full.extend_from_slice(args);
        execute(&Cli::try_parse_from(full).map_err(|e| e.to_string())?)
    }

    #[test]
    fn dims_table() {
        let out = run(&["dims", "--generators", "2", "--nil", "2,2", "--max-degree", "5", "--levels", "2"]).unwrap();
        assert_eq!(
            out.output,
            "degree,dim_A,dim_A1,dim_A2\n1,2,0,0\n2,2,1,0\n3,2,2,0\n4,2,1,0\n5,2,2,2\n"
        );
        let out = run(&["dims", "--generators", "1", "--nil", "3", "--max-degree", "5", "--levels", "0"]).unwrap();
        assert_eq!(out.output, "degree,dim_A\n1,1\n2,1\n3,0\n4,0\n5,0\n");
    }

    #[test]
    fn config_errors() {
        assert!(run(&["dims", "--nil", "2,2", "--field", "fp:2", "--max-degree", "4"])
            .unwrap_err()
            .contains("characteristic 2"));
        assert!(run(&["dims", "--generators", "3", "--nil", "2,2", "--max-degree", "4"]).is_err());
        assert!(run(&["dims", "--nil", "2,2"]).is_err());
        assert!(run(&["dims", "--nil", "2,0", "--max-degree", "3"]).is_err());
        assert!(run(&["dims", "--nil", "2,2", "--field", "fp:15", "--max-degree", "3"]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["nilpow", "dims", "--nil", "2,2", "--field", "fp:2", "--max-degree", "4"]), EXIT_ERROR);
        assert_eq!(main_with_args(["nilpow", "dims", "--bogus"]), EXIT_ERROR);
        let out = run(&["certify", "--i", "1", "--nil", "2,2", "--max-degree", "10"]).unwrap();
        assert_eq!(out.code, EXIT_INCONCLUSIVE);
        let out = run(&["certify", "--i", "1", "--generators", "1", "--nil", "4", "--max-degree", "8"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
    }

    #[test]
    fn spec_file_and_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.toml");
        fs::write(&path, "generators = 2\nnil = [2, 2]\nfield = \"q\"\nmax_degree = 4\n").unwrap();
        let p = path.to_str().unwrap();
        let out = run(&["dims", "--spec", p, "--levels", "1", "--format", "json"]).unwrap();
        assert!(out.output.contains("\"field\": \"q\""));
        let out = run(&["dims", "--spec", p, "--max-degree", "3", "--levels", "1"]).unwrap();
        assert_eq!(out.output.lines().count(), 4);
    }
}
