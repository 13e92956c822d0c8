//! The `hfloquet` command line: argument and config-file handling, and the
//! commands themselves.

use crate::code::report_parameters;
use crate::decoder::{DecoderConfig, Weighting};
use crate::dem::{build_detector_model_with_closure, FULL_CLOSURE};
use crate::experiment::{
    compare_honeycomb, comparison_csv, crossings_csv, estimate_threshold, sweep, sweep_csv, Code,
    ExperimentError, RunSettings, SweepRow,
};
use crate::homology::cocycle_basis;
use crate::lattice::{
    find_coloring, Color, ColoredLattice, ColoringOutcome, LatticeError, UncoloredGraph,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

const DEFAULT_SHOTS: u64 = 10_000;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_COLORING_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}, field `{field}`: {msg}")]
    Config {
        line: usize,
        field: String,
        msg: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Resource(String),
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Io { .. } => CliError::Usage(e.to_string()),
            LatticeError::BudgetExceeded(_) => CliError::Resource(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::ResourceCap(_) => CliError::Resource(e.to_string()),
            ExperimentError::Lattice(l) => l.into(),
            ExperimentError::Rate(_) | ExperimentError::NoShots | ExperimentError::TooFewCodes => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hfloquet",
    version,
    about = "Hyperbolic and honeycomb Floquet code simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a lattice file and print face statistics.
    Validate { lattice: PathBuf },
    /// Find an edge coloring of an uncolored trivalent graph.
    Color {
        graph: PathBuf,
        /// Face length; defaults to the girth declared in the file.
        #[arg(long)]
        girth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_COLORING_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print `[[n, k, d]]` and the genus as JSON.
    Params { lattice: PathBuf },
    /// Print the detector model of a lattice.
    DumpDem {
        lattice: PathBuf,
        #[arg(long)]
        p: f64,
        /// Noisy rounds; defaults to 3d.
        #[arg(long)]
        rounds: Option<usize>,
        /// Noiseless closing rounds; 0 leaves an open time boundary.
        #[arg(long, default_value_t = FULL_CLOSURE)]
        closing: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Logical error rates of one or more codes over a list of error rates.
    Sweep(RunArgs),
    /// Crossings of the logical error rate curves of codes of growing distance.
    Threshold(RunArgs),
    /// A hyperbolic code against copies of honeycomb codes.
    Compare(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WeightingArg {
    Unit,
    LogLikelihood,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Unit => Weighting::Unit,
            WeightingArg::LogLikelihood => Weighting::LogLikelihood,
        }
    }
}

/// Options of the simulation commands; each can also come from a
/// `key=value` config file, flags taking precedence.
#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    /// `key=value` file with any of the options below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Lattice files; for `compare` the first one is the hyperbolic code.
    #[arg(long, value_delimiter = ',')]
    pub lattices: Vec<PathBuf>,
    /// Honeycomb lattice files for `compare`.
    #[arg(long, value_delimiter = ',')]
    pub honeycomb: Vec<PathBuf>,
    /// Physical error rates.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noisy rounds; defaults to 3d.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub k_nearest: Option<usize>,
    #[arg(long, value_enum)]
    pub weighting: Option<WeightingArg>,
    /// CSV output; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Crossing table of `threshold`; standard output when absent.
    #[arg(long)]
    pub crossings_out: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Cap on the total number of shots.
    #[arg(long)]
    pub max_shots: Option<u64>,
    /// Wall-clock cap in seconds.
    #[arg(long)]
    pub time_limit: Option<u64>,
}

/// Fully resolved configuration, embedded in every output. The thread count
/// is left out since results do not depend on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub lattices: Vec<PathBuf>,
    pub honeycomb: Vec<PathBuf>,
    pub p: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub rounds: Option<usize>,
    pub k_nearest: usize,
    pub weighting: WeightingArg,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub crossings_out: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
    pub max_shots: Option<u64>,
    pub time_limit: Option<u64>,
}

impl RunConfig {
    pub fn settings(&self) -> RunSettings {
        RunSettings {
            shots: self.shots,
            seed: self.seed,
            rounds: self.rounds,
            decoder: DecoderConfig {
                k_nearest: self.k_nearest,
                weighting: self.weighting.into(),
            },
            max_total_shots: self.max_shots,
            time_limit: self.time_limit.map(Duration::from_secs),
        }
    }

    /// Metadata block written at the top of every output file.
    pub fn header(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        format!(
            "hfloquet {}\nconfig {json}\nnoise depolarizing p/3 per Pauli between rounds, measurement flips p; \
             rounds 3d unless overridden, honeycomb copies run for the hyperbolic code's rounds; \
             {FULL_CLOSURE} noiseless closing rounds\ndecoder minimum-weight perfect matching, \
             {:?} weights, {} nearest candidates\n",
            env!("CARGO_PKG_VERSION"),
            self.weighting,
            self.k_nearest
        )
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<RunArgs, CliError> {
    let mut args = RunArgs::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config {
                line: line_no,
                field: line.to_string(),
                msg: "expected key=value".into(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let err = |msg: String| CliError::Config {
            line: line_no,
            field: key.to_string(),
            msg,
        };
        fn num<T: std::str::FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("`{v}`: {e}"))
        }
        let paths = |v: &str| {
            v.split(',')
                .map(|s| PathBuf::from(s.trim()))
                .collect::<Vec<_>>()
        };
        match key.replace('_', "-").as_str() {
            "lattices" => args.lattices = paths(value),
            "honeycomb" => args.honeycomb = paths(value),
            "p" => {
                args.p = value
                    .split(',')
                    .map(|s| num::<f64>(s.trim()))
                    .collect::<Result<_, _>>()
                    .map_err(err)?
            }
            "shots" => args.shots = Some(num(value).map_err(err)?),
            "seed" => args.seed = Some(num(value).map_err(err)?),
            "rounds" => args.rounds = Some(num(value).map_err(err)?),
            "k-nearest" => args.k_nearest = Some(num(value).map_err(err)?),
            "weighting" => {
                args.weighting =
                    Some(WeightingArg::from_str(value, true).map_err(|e| err(e.to_string()))?)
            }
            "out" => args.out = Some(value.into()),
            "json" => args.json = Some(value.into()),
            "crossings-out" => args.crossings_out = Some(value.into()),
            "threads" => args.threads = Some(num(value).map_err(err)?),
            "max-shots" => args.max_shots = Some(num(value).map_err(err)?),
            "time-limit" => args.time_limit = Some(num(value).map_err(err)?),
            _ => return Err(err("unknown key".into())),
        }
    }
    Ok(args)
}

/// Merges flags over the config file over the defaults.
pub fn resolve(command: &str, flags: RunArgs) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(path) => parse_config(&read(path)?)?,
        None => RunArgs::default(),
    };
    let pick_vec = |a: Vec<PathBuf>, b: Vec<PathBuf>| if a.is_empty() { b } else { a };
    let config = RunConfig {
        command: command.to_string(),
        lattices: pick_vec(flags.lattices, file.lattices),
        honeycomb: pick_vec(flags.honeycomb, file.honeycomb),
        p: if flags.p.is_empty() { file.p } else { flags.p },
        shots: flags.shots.or(file.shots).unwrap_or(DEFAULT_SHOTS),
        seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        rounds: flags.rounds.or(file.rounds),
        k_nearest: flags
            .k_nearest
            .or(file.k_nearest)
            .unwrap_or(DecoderConfig::default().k_nearest),
        weighting: flags
            .weighting
            .or(file.weighting)
            .unwrap_or(WeightingArg::Unit),
        out: flags.out.or(file.out),
        json: flags.json.or(file.json),
        crossings_out: flags.crossings_out.or(file.crossings_out),
        threads: flags.threads.or(file.threads),
        max_shots: flags.max_shots.or(file.max_shots),
        time_limit: flags.time_limit.or(file.time_limit),
    };
    if config.lattices.is_empty() {
        return Err(CliError::Usage("no lattices given".into()));
    }
    if config.p.is_empty() {
        return Err(CliError::Usage("no error rates given".into()));
    }
    if config.threads == Some(0) {
        return Err(CliError::Usage("threads must be positive".into()));
    }
    Ok(config)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            msg: e.to_string(),
        }),
    }
}

fn emit_json<T: Serialize>(config: &RunConfig, results: &T) -> Result<(), CliError> {
    if let Some(path) = &config.json {
        #[derive(Serialize)]
        struct Doc<'a, T> {
            version: &'a str,
            config: &'a RunConfig,
            results: &'a T,
        }
        let doc = Doc {
            version: env!("CARGO_PKG_VERSION"),
            config,
            results,
        };
        write_file(
            path,
            &(serde_json::to_string_pretty(&doc).expect("results serialize") + "\n"),
        )?;
    }
    Ok(())
}

fn load_codes(paths: &[PathBuf]) -> Result<Vec<Code>, CliError> {
    paths
        .iter()
        .map(|p| Code::load(p).map_err(CliError::from))
        .collect()
}

fn load_lattice(path: &Path) -> Result<ColoredLattice, CliError> {
    Ok(ColoredLattice::load(path)?)
}

fn validate(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let l = load_lattice(path)?;
    let per_color: Vec<String> = Color::ALL
        .iter()
        .map(|&c| format!("{}={}", c.letter(), l.faces_of_color(c).count()))
        .collect();
    let text = format!(
        "valid: n={} girth={} edges={} faces={} ({}) genus={}\n",
        l.num_qubits(),
        l.girth(),
        l.num_edges(),
        l.num_faces(),
        per_color.join(" "),
        l.genus()
    );
    emit(None, &text, out)
}

fn color(
    graph: &Path,
    girth: Option<usize>,
    budget: u64,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (g, declared) = UncoloredGraph::parse(&read(graph)?)?;
    match find_coloring(&g, girth.unwrap_or(declared), budget)? {
        ColoringOutcome::Colored(l) => emit(path, &l.to_text(), out),
        ColoringOutcome::Uncolorable => Err(CliError::Invalid("UNCOLORABLE".into())),
    }
}

fn params(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let l = load_lattice(path)?;
    let p = report_parameters(&l).map_err(|e| CliError::Invalid(e.to_string()))?;
    let text = serde_json::to_string(&p).expect("parameters serialize") + "\n";
    emit(None, &text, out)
}

fn dump_dem(
    path: &Path,
    p: f64,
    rounds: Option<usize>,
    closing: usize,
    target: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let code = Code::load(path)?;
    let rounds = rounds.unwrap_or_else(|| code.default_rounds());
    let basis = cocycle_basis(&code.lattice).map_err(|e| CliError::Invalid(e.to_string()))?;
    let model = build_detector_model_with_closure(&code.lattice, &basis, rounds, p, closing)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(target, &model.dump(), out)
}

fn run_sweep(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let codes = load_codes(&config.lattices)?;
    let settings = config.settings();
    let mut results = Vec::with_capacity(codes.len());
    for code in &codes {
        results.push(sweep(code, &config.p, &settings)?);
    }
    let rows: Vec<SweepRow> = results
        .iter()
        .flat_map(|r| r.rows.iter().cloned())
        .collect();
    emit(
        config.out.as_deref(),
        &sweep_csv(&config.header(), &rows),
        out,
    )?;
    emit_json(config, &results)
}

fn run_threshold(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let codes = load_codes(&config.lattices)?;
    let report = estimate_threshold(&codes, &config.p, &config.settings())?;
    let rows: Vec<SweepRow> = report
        .sweeps
        .iter()
        .flat_map(|r| r.rows.iter().cloned())
        .collect();
    let header = config.header();
    if let Some(path) = &config.out {
        write_file(path, &sweep_csv(&header, &rows))?;
    }
    emit(
        config.crossings_out.as_deref(),
        &crossings_csv(&header, &report),
        out,
    )?;
    emit_json(config, &report)
}

fn run_compare(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    if config.honeycomb.is_empty() {
        return Err(CliError::Usage("compare needs --honeycomb lattices".into()));
    }
    let hyperbolic = Code::load(&config.lattices[0])?;
    let honeycombs = load_codes(&config.honeycomb)?;
    let rows = compare_honeycomb(&hyperbolic, &honeycombs, &config.p, &config.settings())?;
    emit(
        config.out.as_deref(),
        &comparison_csv(&config.header(), &rows),
        out,
    )?;
    emit_json(config, &rows)
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Resource(format!("cannot start worker threads: {e}")))?;
    pool.install(f)
}

/// Runs a parsed command, writing results to `out`.
pub fn execute(cli: Cli, out: &mut (dyn Write + Send)) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { lattice } => validate(&lattice, out),
        Command::Color {
            graph,
            girth,
            budget,
            out: path,
        } => color(&graph, girth, budget, path.as_deref(), out),
        Command::Params { lattice } => params(&lattice, out),
        Command::DumpDem {
            lattice,
            p,
            rounds,
            closing,
            out: path,
        } => dump_dem(&lattice, p, rounds, closing, path.as_deref(), out),
        Command::Sweep(args) => {
            let config = resolve("sweep", args)?;
            with_threads(config.threads, || run_sweep(&config, out))
        }
        Command::Threshold(args) => {
            let config = resolve("threshold", args)?;
            with_threads(config.threads, || run_threshold(&config, out))
        }
        Command::Compare(args) => {
            let config = resolve("compare", args)?;
            with_threads(config.threads, || run_compare(&config, out))
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_values_and_errors() {
        let a = parse_config("# sweep\nlattices = a.lat,b.lat\np=1e-3, 2e-3\nshots=500\nk_nearest=12\nweighting=log-likelihood\n")
            .unwrap();
        assert_eq!(
            a.lattices,
            vec![PathBuf::from("a.lat"), PathBuf::from("b.lat")]
        );
        assert_eq!(a.p, vec![1e-3, 2e-3]);
        assert_eq!(a.shots, Some(500));
        assert_eq!(a.k_nearest, Some(12));
        assert_eq!(a.weighting, Some(WeightingArg::LogLikelihood));
        match parse_config("shots=10\nseed=abc\n").unwrap_err() {
            CliError::Config { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "seed");
            }
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            parse_config("colour=red"),
            Err(CliError::Config { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("shots"),
            Err(CliError::Config { line: 1, .. })
        ));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "lattices=x.lat\np=0.01\nshots=100\nseed=4\n").unwrap();
        let flags = RunArgs {
            config: Some(path),
            shots: Some(7),
            ..Default::default()
        };
        let c = resolve("sweep", flags).unwrap();
        assert_eq!(c.shots, 7);
        assert_eq!(c.seed, 4);
        assert_eq!(c.p, vec![0.01]);
        assert_eq!(c.k_nearest, 30);
        assert!(matches!(
            resolve("sweep", RunArgs::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn header_omits_thread_count() {
        let mut c = resolve(
            "sweep",
            RunArgs {
                lattices: vec!["a.lat".into()],
                p: vec![0.1],
                ..Default::default()
            },
        )
        .unwrap();
        let h = c.header();
        c.threads = Some(3);
        assert_eq!(h, c.header());
        assert!(!h.contains("threads"));
    }
}
