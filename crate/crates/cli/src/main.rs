//! `qutrit`: evaluate entanglement measures, sweep state families, run the
//! decomposition minimizer and the self-check suites.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qutrit_core::decomp::{minimize_decomposition, MinimizeOptions, CONJECTURE_TOL};
use qutrit_core::measures::{
    cereceda_concurrence_of, concurrence_mixed, concurrence_pure, negativity,
};
use qutrit_core::state_file::{parse_state, to_document, StateSpec};
use qutrit_core::states::{
    embedded_qubit_werner, random_density, random_pure, schmidt_state, werner, Dims, SchmidtCoeffs,
};
use qutrit_core::sweep::{self, Family};
use qutrit_core::verify::{self, Suite};

#[derive(Parser)]
#[command(
    name = "qutrit",
    version,
    about = "Generalized concurrence for two qutrits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate entanglement measures of a state file.
    Measure {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureKind::All)]
        measure: MeasureKind,
    },
    /// Tabulate the measures over a one-parameter family as CSV.
    Sweep(SweepArgs),
    /// Minimize the average concurrence over ensemble decompositions.
    Minimize(MinimizeArgs),
    /// Run the built-in self-check suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Write a state file.
    State(StateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    C3,
    Negativity,
    Robustness,
    Cereceda,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Werner,
    PureFig1,
    EmbeddedWerner,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Werner => Family::Werner,
            FamilyArg::PureFig1 => Family::PureFig1,
            FamilyArg::EmbeddedWerner => Family::EmbeddedWerner,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Operators,
    Reduction,
    Werner,
    LuExperiment,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Operators => Suite::Operators,
            SuiteArg::Reduction => Suite::Reduction,
            SuiteArg::Werner => Suite::Werner,
            SuiteArg::LuExperiment => Suite::LuExperiment,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 1.0)]
    to: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinimizeArgs {
    file: PathBuf,
    /// Ensemble size (defaults to the rank of the state).
    #[arg(long)]
    members: Option<usize>,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Coordinate sweeps per restart.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, env = "QUTRIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateFamily {
    Werner,
    EmbeddedWerner,
    PureFig1,
    Schmidt,
    RandomPure,
    RandomDensity,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_enum)]
    family: StateFamily,
    /// Family parameter for werner, embedded-werner and pure-fig1.
    #[arg(long)]
    x: Option<f64>,
    /// Schmidt coefficients, comma separated.
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    #[arg(long, env = "QUTRIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 9)]
    rank: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Input(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Input(m) => write!(f, "invalid input: {m}"),
            Failure::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<qutrit_core::Error> for Failure {
    fn from(e: qutrit_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<StateSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn measure(file: &Path, kind: MeasureKind) -> Result<(), Failure> {
    let state = read(file)?;
    let rho = state.density();
    let wants = |k| kind == k || kind == MeasureKind::All;
    if wants(MeasureKind::C3) {
        let c3 = match &state {
            StateSpec::Pure(psi) => concurrence_pure(psi)?,
            StateSpec::Density(d) => concurrence_mixed(d)?,
        };
        println!("c3={c3}");
    }
    if wants(MeasureKind::Negativity) || wants(MeasureKind::Robustness) {
        let n = negativity(&rho)?;
        if wants(MeasureKind::Negativity) {
            println!("negativity={n}");
        }
        if wants(MeasureKind::Robustness) {
            println!("robustness={}", 2.0 * n);
        }
    }
    match (&state, kind) {
        (StateSpec::Pure(psi), MeasureKind::Cereceda | MeasureKind::All) => {
            println!("cereceda={}", cereceda_concurrence_of(psi)?);
        }
        (StateSpec::Density(_), MeasureKind::Cereceda) => {
            return Err(Failure::Input(
                "cereceda concurrence is defined for pure states only".into(),
            ));
        }
        _ => {}
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let family = Family::from(args.family);
    let xs = sweep::grid(args.from, args.to, args.step)?;
    let rows = sweep::sweep(family, &xs)?;
    emit(args.out.as_deref(), &sweep::to_csv(family, &rows))
}

fn minimize(args: &MinimizeArgs) -> Result<(), Failure> {
    let rho = read(&args.file)?.density();
    let options = MinimizeOptions {
        members: args.members,
        restarts: args.restarts,
        budget: args.budget,
        seed: args.seed,
    };
    let report = minimize_decomposition(&rho, &options)?.report;
    println!("min_value={:.6}", report.min_value);
    println!("closed_form={:.6}", report.closed_form);
    // Rounding-level gaps would otherwise print as -0.000000.
    let shown_gap = if report.gap.abs() < 5e-7 {
        0.0
    } else {
        report.gap
    };
    println!("gap={shown_gap:.6}");
    println!(
        "members={} rank={} restarts={} budget={} seed={}",
        report.m, report.rank, report.restarts, report.budget, report.seed
    );
    if report.finding {
        println!(
            "FINDING: minimum {:.12} lies below the closed form {:.12} by {:.3e} (tolerance {CONJECTURE_TOL:.0e})",
            report.min_value, report.closed_form, -report.gap
        );
    }
    if let Some(path) = &args.report {
        let mut doc = serde_json::to_string_pretty(&report).expect("report serializes");
        doc.push('\n');
        write(path, &doc)?;
    }
    Ok(())
}

fn run_verify(suite: Suite) -> Result<(), Failure> {
    let reports = verify::run(suite)?;
    let mut first_failure = None;
    for report in &reports {
        for check in &report.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            println!(
                "{status} [{}] {} ({})",
                report.suite, check.name, check.detail
            );
        }
        if let Some(lu) = &report.lu {
            println!(
                "INFO [{}] beta = ({:.6}, {:.6}, {:.6})",
                report.suite, lu.beta[0], lu.beta[1], lu.beta[2]
            );
            for (label, s) in [
                ("random local unitaries", &lu.local_unitaries),
                ("phase orbit", &lu.phase_orbit),
            ] {
                println!(
                    "INFO [{}] {label}: n={} min={:.6} median={:.6} max={:.6} spread={:.6}",
                    report.suite,
                    s.samples,
                    s.min,
                    s.median,
                    s.max,
                    s.max - s.min
                );
            }
        }
        if first_failure.is_none() {
            first_failure = report
                .first_failure()
                .map(|c| format!("[{}] {}", report.suite, c.name));
        }
    }
    match first_failure {
        Some(name) => Err(Failure::Verification(name)),
        None => Ok(()),
    }
}

fn make_state(args: &StateArgs) -> Result<(), Failure> {
    let x = || {
        args.x
            .ok_or_else(|| Failure::Input("--x is required for this family".into()))
    };
    let state = match args.family {
        StateFamily::Werner => StateSpec::Density(werner(x()?)?),
        StateFamily::EmbeddedWerner => StateSpec::Density(embedded_qubit_werner(x()?)?),
        StateFamily::PureFig1 => StateSpec::Pure(schmidt_state(&SchmidtCoeffs::fig1_family(x()?)?)),
        StateFamily::Schmidt => {
            let beta: [f64; 3] = args
                .beta
                .as_slice()
                .try_into()
                .map_err(|_| Failure::Input("--beta needs three values".into()))?;
            StateSpec::Pure(schmidt_state(&SchmidtCoeffs::new(beta)?))
        }
        StateFamily::RandomPure => StateSpec::Pure(random_pure(args.seed, Dims::QUTRITS)),
        StateFamily::RandomDensity => {
            StateSpec::Density(random_density(args.seed, Dims::QUTRITS, args.rank)?)
        }
    };
    emit(args.out.as_deref(), &to_document(&state))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure {
            file,
            measure: kind,
        } => measure(file, *kind),
        Command::Sweep(args) => run_sweep(args),
        Command::Minimize(args) => minimize(args),
        Command::Verify { suite } => run_verify((*suite).into()),
        Command::State(args) => make_state(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("qutrit: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
