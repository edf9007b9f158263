//! `idpart`: JSON reports for the identical-particle checks and scenarios.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or the
//! computation cannot complete (overflow, solver failure), 2 on usage or
//! input errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use idpart::permutation::SymmetryClass;

#[derive(Parser)]
#[command(name = "idpart", version, about = "Identical-particle verifications and scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Permutator and projector identities on C^d ⊗ C^d.
    Axioms(AxiomsArgs),
    /// Identical vs different expectation values for random orthogonal pairs.
    Equivalence(EquivalenceArgs),
    /// Scaling of the equivalence deviation with the one-particle overlap.
    Fapp(FappArgs),
    /// Exact microstate counts on a level file or the hydrogen-pair demo.
    Count(CountArgs),
    /// Overlap of two Gaussian wave packets.
    Gaussian(GaussianArgs),
    /// Symmetric double square well: tunneling doublet and localized states.
    Doublewell(DoubleWellArgs),
    /// Boltzmann entropies and the N! correction.
    Entropy(EntropyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Stats {
    Bose,
    Fermi,
}

impl From<Stats> for SymmetryClass {
    fn from(s: Stats) -> Self {
        match s {
            Stats::Bose => SymmetryClass::Boson,
            Stats::Fermi => SymmetryClass::Fermion,
        }
    }
}

#[derive(Args)]
struct AxiomsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=8))]
    dim: u64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..=100_000))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EquivalenceArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=12))]
    dim: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "bose")]
    stats: Stats,
}

#[derive(Args)]
struct FappArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=12))]
    dim: u64,
    /// Comma-separated overlap parameters s in (0, 0.5].
    #[arg(long, value_delimiter = ',', required = true)]
    overlaps: Vec<f64>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..=100_000))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "bose")]
    stats: Stats,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Hydrogen,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["levels", "demo"])))]
struct CountArgs {
    /// JSON level file: {"energies": [...], "labels": [...]}.
    #[arg(long)]
    levels: Option<PathBuf>,
    #[arg(long, value_enum)]
    demo: Option<Demo>,
    /// Hydrogen demo with equal internal levels n = m.
    #[arg(long, requires = "demo")]
    equal_internal: bool,
    #[arg(long, required_unless_present = "demo", conflicts_with = "demo")]
    particles: Option<usize>,
    /// Exact total energy: integer, decimal or p/q.
    #[arg(long, required_unless_present = "demo", conflicts_with = "demo")]
    energy: Option<String>,
}

#[derive(Args)]
struct GaussianArgs {
    #[arg(long)]
    sep: f64,
    #[arg(long)]
    width: f64,
    #[arg(long, default_value_t = idpart::observables::DEFAULT_FAPP_THRESHOLD)]
    threshold: f64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["preset", "config"])))]
struct DoubleWellArgs {
    #[arg(long, value_parser = ["none", "medium", "high"])]
    preset: Option<String>,
    /// JSON WellSpec file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long)]
    levels: PathBuf,
    #[arg(long)]
    particles: usize,
    #[arg(long)]
    energy: String,
    /// Also compare two disjoint copies against the single system.
    #[arg(long)]
    extensivity: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Axioms(a) => commands::axioms(a.dim as usize, a.trials as usize, a.seed),
        Command::Equivalence(a) => {
            commands::equivalence(a.dim as usize, a.trials as usize, a.seed, a.stats.into())
        }
        Command::Fapp(a) => commands::fapp(
            a.dim as usize,
            &a.overlaps,
            a.trials as usize,
            a.seed,
            a.stats.into(),
        ),
        Command::Count(a) => match (a.demo, a.levels) {
            (Some(Demo::Hydrogen), _) => commands::hydrogen(a.equal_internal),
            (None, Some(path)) => commands::count_levels(
                &path,
                a.particles.expect("required by clap"),
                a.energy.as_deref().expect("required by clap"),
            ),
            (None, None) => unreachable!("clap requires a source"),
        },
        Command::Gaussian(a) => commands::gaussian(a.sep, a.width, a.threshold),
        Command::Doublewell(a) => match (a.preset, a.config) {
            (Some(p), _) => commands::double_well_preset(&p),
            (None, Some(path)) => commands::double_well_config(&path),
            (None, None) => unreachable!("clap requires a source"),
        },
        Command::Entropy(a) => commands::entropy(&a.levels, a.particles, &a.energy, a.extensivity),
    };
    match outcome {
        Ok(envelope) => {
            let mut text = report::render(&envelope);
            text.push('\n');
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(if envelope.pass { 0 } else { 1 })
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
