use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use discrimlab_cli::config::read_config_file;
use discrimlab_cli::report::emit;
use discrimlab_cli::{run, CommandKind, RunConfig};

#[derive(Parser)]
#[command(
    name = "discrimlab",
    version,
    about = "Two-copy discriminability game: evaluators, bounds and certifications"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed form, exact and sampled game score, fidelity equivalence
    Discrim(Flags),
    /// Direct noncontextual bound, its attainment and quantum saturation (`--mode qstar` for q*)
    OnticBound(Flags),
    /// Grid search over noncontextual models
    OnticSearch(Flags),
    /// Separation parameters and CHSH bound for given scenarios
    BellVerify(Flags),
    /// CHSH sweeps over entanglement or symmetric discriminability
    BellSweep(Flags),
    /// Repeated seeded sampling runs with 3σ coverage
    Sample(Flags),
}

/// Numeric flags take a value, a comma list `a,b,c` or a range `start:stop:count`.
#[derive(Args)]
struct Flags {
    /// Flat `key = value` file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    eta1: Option<String>,
    /// Squared overlap |γ|²
    #[arg(long)]
    gamma2: Option<String>,
    #[arg(long)]
    phase: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    sharp: Option<String>,
    /// Number of ontic states
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    /// JSON scenario file
    #[arg(long)]
    scenario: Option<String>,
    /// theta or symmetric-d
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    starts: Option<String>,
    #[arg(long)]
    tol: Option<String>,
}

impl Flags {
    fn values(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("out", &self.out),
            ("format", &self.format),
            ("eta1", &self.eta1),
            ("gamma2", &self.gamma2),
            ("phase", &self.phase),
            ("q", &self.q),
            ("c", &self.c),
            ("theta", &self.theta),
            ("resolution", &self.resolution),
            ("sharp", &self.sharp),
            ("n", &self.n),
            ("budget", &self.budget),
            ("mode", &self.mode),
            ("scenario", &self.scenario),
            ("sweep", &self.sweep),
            ("points", &self.points),
            ("runs", &self.runs),
            ("starts", &self.starts),
            ("tol", &self.tol),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn execute(kind: CommandKind, flags: &Flags) -> discrimlab_cli::Result<bool> {
    let file = match &flags.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::merge(kind, file, flags.values())?;
    let started = Instant::now();
    let outcome = run(&cfg)?;
    emit(&outcome.report, cfg.format, cfg.output.as_deref())?;
    for note in &outcome.notes {
        eprintln!("{}: {note}", kind.name());
    }
    eprintln!("{}: finished in {:.3} s", kind.name(), started.elapsed().as_secs_f64());
    Ok(outcome.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match &cli.command {
        Command::Discrim(f) => (CommandKind::Discrim, f),
        Command::OnticBound(f) => (CommandKind::OnticBound, f),
        Command::OnticSearch(f) => (CommandKind::OnticSearch, f),
        Command::BellVerify(f) => (CommandKind::BellVerify, f),
        Command::BellSweep(f) => (CommandKind::BellSweep, f),
        Command::Sample(f) => (CommandKind::Sample, f),
    };
    match execute(kind, flags) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("{}: certification failed", kind.name());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
