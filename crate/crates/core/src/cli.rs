//! Command-line front end.
//!
//! Exit codes: 0 for success (or a positive answer), 1 for a negative
//! domain-level answer or an invalid generator, 2 for usage and parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::examples;
use crate::format::{self, Loaded, ParseOptions};
use crate::generator::{Distribution, Generator};
use crate::morphism::check_transport;
use crate::process::{self, format_word, DEFAULT_SIZE_LIMIT};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::reduce::{self, minimal_reduction, quotient_generator, state_reduction, ReductionResult};

/// Environment variable overriding the word-table size cap.
pub const SIZE_LIMIT_ENV: &str = "GENRED_SIZE_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "genred", version, about = "Reduce finite hidden Markov generators to minimal form")]
pub struct Cli {
    /// Snap decimal probabilities to the simplest fraction within EPS, given
    /// as `--decimal-tolerance=EPS` (1/1000000000 when given bare).
    #[arg(long, global = true, value_name = "EPS", num_args = 0..=1, require_equals = true, default_missing_value = "1/1000000000")]
    pub decimal_tolerance: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Lump onto the coarsest stable partition.
    Event,
    /// Merge states with identical rows.
    State,
    /// Event reduction followed by state reduction.
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that every kernel row is a probability distribution.
    Validate { path: PathBuf },
    /// Reduce a generator.
    Reduce {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        /// Write the reduced generator (with its quotient map) here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a Graphviz graph of the reduced generator.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print all word probabilities up to a length.
    Words {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// `uniform`, `state:<name>` or `<name>=<p>,..`; defaults to the file's initial distribution.
        #[arg(long)]
        initial: Option<String>,
        /// Maximum number of table entries (overrides GENRED_SIZE_LIMIT).
        #[arg(long)]
        size_limit: Option<u128>,
    },
    /// Decide whether two generators produce the same process.
    Equiv {
        path_a: PathBuf,
        path_b: PathBuf,
        #[arg(long = "mu-a", alias = "muA")]
        mu_a: Option<String>,
        #[arg(long = "mu-b", alias = "muB")]
        mu_b: Option<String>,
    },
    /// Group states that generate the same process from a point mass.
    Causal { path: PathBuf },
    /// Print a built-in fixture, or `rotation:<q/p>`.
    Example { name: String },
    /// Draw a reproducible sample word.
    Sample {
        path: PathBuf,
        #[arg(long, short = 'n', default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        initial: Option<String>,
    },
    /// Check a morphism file `{"f": {..}, "g": {..}}` between two generators.
    Morphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
        /// Also check process transport up to this word length.
        #[arg(long, value_name = "L")]
        transport: Option<usize>,
        #[arg(long)]
        initial: Option<String>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: e.to_string() }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn options(cli: &Cli) -> Result<ParseOptions, Failure> {
    let decimal_tolerance = match &cli.decimal_tolerance {
        Some(eps) => {
            let eps: Rat = parse_rat(eps).map_err(usage)?;
            if eps < Rat::default() {
                return Err(usage("tolerance must be non-negative"));
            }
            Some(eps)
        }
        None => None,
    };
    Ok(ParseOptions { decimal_tolerance })
}

fn load(path: &Path, opts: &ParseOptions) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    format::parse_generator(&text, opts).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path, opts: &ParseOptions) -> Result<Loaded, Failure> {
    let loaded = load(path, opts)?;
    loaded.generator.ensure_valid().map_err(|e| domain(format!("{}: {e}", path.display())))?;
    Ok(loaded)
}

fn initial(loaded: &Loaded, spec: Option<&str>, opts: &ParseOptions) -> Result<Distribution, Failure> {
    match spec {
        Some(spec) => format::parse_initial(&loaded.generator, spec, opts).map_err(usage),
        None => loaded.initial_or_uniform().map_err(usage),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn size_limit(flag: Option<u128>) -> Result<u128, Failure> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var(SIZE_LIMIT_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{SIZE_LIMIT_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_SIZE_LIMIT),
    }
}

macro_rules! w {
    ($dst:expr, $($arg:tt)*) => {
        writeln!($dst, $($arg)*).map_err(|e| usage(e))?
    };
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let opts = options(cli)?;
    match &cli.command {
        Command::Validate { path } => {
            let loaded = load(path, &opts)?;
            let report = loaded.generator.validate();
            if report.is_valid() {
                w!(out, "valid");
                Ok(0)
            } else {
                w!(out, "invalid");
                for v in &report.violations {
                    w!(out, "  {v}");
                }
                Ok(1)
            }
        }
        Command::Reduce { path, mode, out: out_path, dot } => {
            let loaded = load_valid(path, &opts)?;
            let gen = &loaded.generator;
            let (event, result) = reduce_with(gen, *mode);
            let mut report = Vec::new();
            w!(report, "mode: {}", format!("{mode:?}").to_lowercase());
            w!(report, "states: {}", gen.num_states());
            if let Some(p) = &event {
                w!(report, "event partition: {}", p.display_with(gen.states()));
            }
            if *mode != Mode::Event {
                w!(report, "classes: {}", result.classes.display_with(gen.states()));
            }
            w!(report, "reduced states: {}", result.reduced.num_states());
            w!(report, "quotient:");
            for (x, c) in result.quotient_names(gen) {
                w!(report, "  {x} -> {c}");
            }

            let initial = loaded
                .initial
                .as_ref()
                .map(|d| crate::generator::pushforward(d, result.quotient_map(), result.reduced.num_states()))
                .transpose()
                .map_err(domain)?;
            let mut file = format::to_file(&result.reduced, initial.as_ref());
            file.quotient = Some(result.quotient_names(gen).map(|(a, b)| (a.to_string(), b.to_string())).collect());
            let json = format::to_json(&file);
            if let Some(dot) = dot {
                write_file(dot, &format::to_dot(&result.reduced))?;
            }
            match out_path {
                Some(p) => {
                    write_file(p, &json)?;
                    out.write_all(&report).map_err(usage)?;
                }
                None => {
                    err.write_all(&report).map_err(usage)?;
                    out.write_all(json.as_bytes()).map_err(usage)?;
                }
            }
            Ok(0)
        }
        Command::Words { path, max_len, initial: spec, size_limit: flag } => {
            let loaded = load_valid(path, &opts)?;
            let mu = initial(&loaded, spec.as_deref(), &opts)?;
            let limit = size_limit(*flag)?;
            let table =
                process::word_distribution_with_limit(&loaded.generator, &mu, *max_len, limit).map_err(domain)?;
            write!(out, "{table}").map_err(usage)?;
            Ok(0)
        }
        Command::Equiv { path_a, path_b, mu_a, mu_b } => {
            let a = load_valid(path_a, &opts)?;
            let b = load_valid(path_b, &opts)?;
            let mu_a = initial(&a, mu_a.as_deref(), &opts)?;
            let mu_b = initial(&b, mu_b.as_deref(), &opts)?;
            let witness = process::distinguishing_word(&a.generator, &mu_a, &b.generator, &mu_b).map_err(domain)?;
            match witness {
                None => {
                    w!(out, "equivalent");
                    Ok(0)
                }
                Some(word) => {
                    let pa = process::word_probability(&a.generator, &mu_a, &word).map_err(domain)?;
                    let symbols: Vec<&str> = word.iter().map(|&s| a.generator.alphabet()[s].as_str()).collect();
                    let word_b: Vec<usize> = symbols
                        .iter()
                        .map(|s| b.generator.symbol_index(s))
                        .collect::<Result<_, Error>>()
                        .map_err(domain)?;
                    let pb = process::word_probability(&b.generator, &mu_b, &word_b).map_err(domain)?;
                    w!(out, "not equivalent");
                    w!(out, "shortest distinguishing word: {}", format_word(a.generator.alphabet(), &word));
                    w!(out, "  P_A = {}", format_rat(&pa));
                    w!(out, "  P_B = {}", format_rat(&pb));
                    Ok(1)
                }
            }
        }
        Command::Causal { path } => {
            let loaded = load_valid(path, &opts)?;
            let p = process::causal_state_partition(&loaded.generator);
            w!(out, "causal states: {}", p.num_blocks());
            w!(out, "partition: {}", p.display_with(loaded.generator.states()));
            Ok(0)
        }
        Command::Example { name } => {
            let fixture = examples::resolve(name).map_err(domain)?;
            let json = format::generator_to_json(&fixture.generator, Some(&fixture.initial));
            out.write_all(json.as_bytes()).map_err(usage)?;
            Ok(0)
        }
        Command::Sample { path, n, seed, initial: spec } => {
            let loaded = load_valid(path, &opts)?;
            let mu = initial(&loaded, spec.as_deref(), &opts)?;
            let sample = process::sample(&loaded.generator, &mu, *n, *seed).map_err(domain)?;
            let text = if sample.word.is_empty() {
                String::new()
            } else {
                format_word(loaded.generator.alphabet(), &sample.word)
            };
            w!(out, "{text}");
            Ok(0)
        }
        Command::Morphism { source, target, morphism, transport, initial: spec } => {
            let src = load(source, &opts)?;
            let tgt = load(target, &opts)?;
            let text = std::fs::read_to_string(morphism).map_err(|e| usage(format!("{}: {e}", morphism.display())))?;
            let m = format::parse_morphism(&text, src.generator.clone(), tgt.generator.clone())
                .map_err(|e| usage(format!("{}: {e}", morphism.display())))?;
            if let Err(cx) = m.verify() {
                w!(out, "not transition-preserving: {cx}");
                return Ok(1);
            }
            w!(out, "transition-preserving");
            if let Some(max_len) = transport {
                let mu = initial(&src, spec.as_deref(), &opts)?;
                if check_transport(&m, &mu, *max_len).map_err(domain)? {
                    w!(out, "transport holds up to length {max_len}");
                } else {
                    w!(out, "transport fails within length {max_len}");
                    return Ok(1);
                }
            }
            Ok(0)
        }
    }
}

/// Runs a reduction, returning the event partition where one is computed.
pub fn reduce_with(gen: &Generator, mode: Mode) -> (Option<crate::partition::Partition>, ReductionResult) {
    match mode {
        Mode::Event => {
            let erg = reduce::event_reduction(gen);
            let classes = erg.partition().clone();
            let reduced = quotient_generator(gen, &classes);
            (Some(classes.clone()), ReductionResult { reduced, classes })
        }
        Mode::State => (None, state_reduction(gen)),
        Mode::Full => {
            let (erg, result) = minimal_reduction(gen);
            (Some(erg.partition().clone()), result)
        }
    }
}
