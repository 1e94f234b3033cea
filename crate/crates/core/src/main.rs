use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hermcap::harness::{emit_histogram, gap_check, run_spectrum, write_run_log, Format, SeedSpec};
use hermcap::search::{thin_ovoid, TieMode};
use hermcap::verify::{verify_cap_file, verify_model};
use hermcap::{complete, CapFile, Error, SearchConfig, SplitMix64, StrategyKind, SurfaceModel};

#[derive(Parser)]
#[command(
    name = "hermcap",
    version,
    about = "Caps and ovoids of the Hermitian surface H(3,q²)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form counts of the surface, checked against the model.
    SurfaceInfo(QArg),
    /// Run the invariant suite (and optionally check a cap file).
    Verify {
        #[command(flatten)]
        q: QArg,
        /// Also enumerate generators and run the small-q brute-force oracles.
        #[arg(long)]
        deep: bool,
        /// Cap file to validate.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Complete a cap with one strategy.
    Complete {
        #[command(flatten)]
        q: QArg,
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Starting cap (empty if omitted).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Repeat seeded completions and report the size distribution.
    Spectrum(SpectrumArgs),
    /// Write the canonical plane-section ovoid.
    Ovoid {
        #[command(flatten)]
        q: QArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Remove q(q+1)/2 points from an ovoid without losing uniqueness of its completion.
    Thin {
        #[command(flatten)]
        q: QArg,
        /// Ovoid to thin (canonical ovoid if omitted).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the kept points.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the removed points.
        #[arg(long)]
        removed: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QArg {
    /// Order of the subfield; the surface lives in PG(3,q²).
    #[arg(long)]
    q: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Random,
    MinRelevance,
    Forward,
    Backtrack,
}

impl From<StrategyArg> for StrategyKind {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => StrategyKind::Random,
            StrategyArg::MinRelevance => StrategyKind::MinRelevance,
            StrategyArg::Forward => StrategyKind::Forward,
            StrategyArg::Backtrack => StrategyKind::Backtrack,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    MaxCount,
    MinCount,
}

#[derive(Args)]
struct StrategyArgs {
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Forward search: prefer candidates leaving the most or fewest minimal-relevance points.
    #[arg(long, value_enum, default_value = "max-count")]
    tie_mode: TieArg,
    /// Backtracking: maximum removals per attempt (default q).
    #[arg(long)]
    depth: Option<usize>,
    /// Forward search: subsample candidates down to this many.
    #[arg(long)]
    candidate_cap: Option<usize>,
}

impl StrategyArgs {
    fn config(&self, seed: u64) -> SearchConfig {
        SearchConfig {
            forward_tie_mode: match self.tie_mode {
                TieArg::MaxCount => TieMode::MaxCount,
                TieArg::MinCount => TieMode::MinCount,
            },
            backtrack_max_depth: self.depth,
            candidate_cap: self.candidate_cap,
            ..SearchConfig::new(self.strategy.into(), seed)
        }
    }
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("seeding").required(true).args(["seed_size", "empty", "input"])))]
struct SpectrumArgs {
    #[command(flatten)]
    q: QArg,
    #[command(flatten)]
    strategy: StrategyArgs,
    #[arg(long)]
    runs: u64,
    /// Seed every run with a fresh random subset of this size of the canonical ovoid.
    #[arg(long)]
    seed_size: Option<usize>,
    /// Start every run from the empty cap.
    #[arg(long)]
    empty: bool,
    /// Start every run from this cap file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    master: u64,
    #[arg(long, env = "HERMCAP_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Histogram destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON-lines run log destination.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Include wall-clock times in the run log.
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedField(_) | Error::Argument(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::SurfaceInfo(q) => surface_info(q.q),
        Command::Verify { q, deep, input } => verify(q.q, deep, input.as_deref()),
        Command::Complete {
            q,
            strategy,
            input,
            seed,
            output,
        } => {
            let model = SurfaceModel::for_q(q.q)?;
            let seed_cap = match &input {
                Some(path) => CapFile::read(path)?.cap_points(&model)?,
                None => Vec::new(),
            };
            let outcome = complete(&model, &seed_cap, &strategy.config(seed))?;
            write_cap(&model, &outcome.final_cap, output.as_deref())?;
            println!("size={} is_ovoid={}", outcome.size(), outcome.is_ovoid);
            Ok(())
        }
        Command::Spectrum(args) => spectrum(args),
        Command::Ovoid { q, output } => {
            let model = SurfaceModel::for_q(q.q)?;
            let ovoid = model.canonical_ovoid();
            write_cap(&model, &ovoid, output.as_deref())?;
            eprintln!("ovoid size={}", ovoid.len());
            Ok(())
        }
        Command::Thin {
            q,
            input,
            seed,
            output,
            removed,
        } => {
            let model = SurfaceModel::for_q(q.q)?;
            let ovoid = match &input {
                Some(path) => CapFile::read(path)?.cap_points(&model)?,
                None => model.canonical_ovoid(),
            };
            let thinned = thin_ovoid(&model, &ovoid, &mut SplitMix64::new(seed))?;
            write_cap(&model, &thinned.kept, output.as_deref())?;
            if let Some(path) = removed {
                CapFile::from_points(&model, &thinned.removed).write(&path)?;
            }
            eprintln!(
                "kept={} removed={}",
                thinned.kept.len(),
                thinned.removed.len()
            );
            Ok(())
        }
    }
}

fn surface_info(q: u32) -> CliResult {
    let model = SurfaceModel::for_q(q)?;
    let gens = model.generators();
    let through = model.generators_through();
    let per_point = through[0].len();
    if through.iter().any(|g| g.len() != per_point) {
        return Err(Failure::Domain(
            "generators per point is not constant".into(),
        ));
    }
    println!(
        "points={} gx={} generators={} per_point={} ovoid={}",
        model.len(),
        model.gx_len(),
        gens.len(),
        per_point,
        model.canonical_ovoid().len()
    );
    Ok(())
}

fn verify(q: u32, deep: bool, input: Option<&Path>) -> CliResult {
    let model = SurfaceModel::for_q(q)?;
    let mut passed =
        verify_model(&model, deep).map_err(|f| Failure::Domain(format!("FAIL {f}")))?;
    if let Some(path) = input {
        let text = fs::read_to_string(path).map_err(Error::from)?;
        passed.extend(
            verify_cap_file(&model, &text).map_err(|f| Failure::Domain(format!("FAIL {f}")))?,
        );
    }
    for name in &passed {
        println!("ok {name}");
    }
    println!("all {} checks passed", passed.len());
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> CliResult {
    let format: Format = args.format.parse()?;
    if args.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let model = SurfaceModel::for_q(args.q.q)?;
    let seed_spec = if let Some(n) = args.seed_size {
        SeedSpec::SubOvoid(n)
    } else if let Some(path) = &args.input {
        SeedSpec::FromFile {
            path: path.display().to_string(),
            points: CapFile::read(path)?.cap_points(&model)?,
        }
    } else {
        SeedSpec::Empty
    };
    let template = args.strategy.config(0);
    let (histogram, records) = run_spectrum(
        &model,
        &seed_spec,
        &template,
        args.runs,
        args.master,
        args.jobs,
    )?;

    let bytes = emit_histogram(&histogram, format)?;
    match &args.out {
        Some(path) => fs::write(path, bytes).map_err(Error::from)?,
        None => std::io::stdout().write_all(&bytes).map_err(Error::from)?,
    }
    if let Some(path) = &args.log {
        let file = fs::File::create(path).map_err(Error::from)?;
        write_run_log(&records, args.timings, std::io::BufWriter::new(file))?;
    }
    let gap = gap_check(model.q(), &records);
    eprintln!(
        "runs={} mean={:.2} ovoid_rate={:.3} gap_violations={}",
        histogram.total_runs,
        histogram.mean(),
        histogram.ovoid_rate(),
        gap.violations.len()
    );
    Ok(())
}

fn write_cap(
    model: &SurfaceModel,
    points: &[hermcap::PointId],
    output: Option<&Path>,
) -> CliResult {
    let file = CapFile::from_points(model, points);
    match output {
        Some(path) => file.write(path)?,
        None => print!("{}", file.to_json()),
    }
    Ok(())
}
