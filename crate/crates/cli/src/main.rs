//! `qent`: entanglement measures from the command line.
//!
//! Exit codes: 0 success, 1 a property check failed, 2 unreadable or
//! malformed input (including bad flags), 3 a well-formed but invalid or
//! unsupported state, 4 the solver stopped above the gap tolerance.

mod format;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use format::sig;
use qent::io::{measure_result_json, parse_state_file};
use qent::measures::{fidelity, mutual_information, von_neumann_entropy};
use qent::separable::{bell_diagonal_ree, realize};
use qent::solver::{bures_entanglement, quantum_classical_split, ree, MeasureResult, SolverConfig};
use qent::states::bell_diagonal;
use qent::suites::{run_suite, Suite, SuiteOptions, SuiteReport};
use qent::{BellDiagonalSpec, DensityMatrix, Error};

const CSV_HEADER: [&str; 5] = ["lambda1", "closed_form", "numerical", "gap", "abs_err"];

#[derive(Debug, Parser)]
#[command(name = "qent", version, about = "Distance-based entanglement measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed for the solver and the property suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Frank–Wolfe gap tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Emit JSON at full precision instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output (or the per-trial log for `check`) to a file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also report entropic quantities in bits.
    #[arg(long, global = true)]
    bits: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropies, mutual information and fidelity to the maximally mixed state.
    Measures { state: PathBuf },
    /// Distance to the separable set.
    Ree {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = DistanceArg::Relent)]
        distance: DistanceArg,
    },
    /// Closed form against the solver along the Bell-diagonal family, as CSV.
    BellSweep {
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
    },
    /// Run the property suites.
    Check {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Trials per check; each suite has its own default.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Quantum and classical parts of the correlations of a bipartite state.
    Split { state: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistanceArg {
    Relent,
    Bures,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Axioms,
    Monotonicity,
    PureConjecture,
    All,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidConfig(_) => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let config = SolverConfig {
        gap_tolerance: cli.tol,
        seed: cli.seed,
        ..SolverConfig::default()
    };
    config.validate()?;
    match &cli.command {
        Command::Measures { state } => measures(cli, &load(state)?),
        Command::Ree { state, distance } => distance_to_separable(cli, &config, &load(state)?, *distance),
        Command::BellSweep { steps } => bell_sweep(cli, &config, *steps as usize),
        Command::Check { suite, trials } => check(cli, &config, *suite, *trials),
        Command::Split { state } => split(cli, &config, &load(state)?),
    }
}

fn load(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_state_file(&text).map(|(rho, _)| rho).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

/// Snaps round-off around zero so exact zeros print as `0`.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

/// `value nats`, plus bits on request.
fn nats(cli: &Cli, x: f64) -> String {
    let x = snap(x);
    if cli.bits {
        format!("{} nats ({} bits)", sig(x), sig(x / std::f64::consts::LN_2))
    } else {
        format!("{} nats", sig(x))
    }
}

fn measures(cli: &Cli, rho: &DensityMatrix) -> Outcome {
    let entropy = von_neumann_entropy(rho);
    let marginals = (0..rho.subsystems())
        .map(|k| rho.marginal(&[k]).map(|m| von_neumann_entropy(&m)))
        .collect::<Result<Vec<_>, _>>()?;
    let mi = match rho.subsystems() {
        2 => Some(mutual_information(rho)?),
        _ => None,
    };
    let mixed_fidelity = fidelity(rho, &DensityMatrix::maximally_mixed(rho.dims()))?;

    let text = if cli.json {
        let v = json!({
            "dims": rho.dims(),
            "entropy": entropy,
            "marginal_entropies": marginals,
            "mutual_information": mi,
            "fidelity_to_maximally_mixed": mixed_fidelity,
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("plain JSON"))
    } else {
        let mut s = String::new();
        writeln!(s, "dims: {:?}", rho.dims()).unwrap();
        writeln!(s, "entropy: {}", nats(cli, entropy)).unwrap();
        for (k, m) in marginals.iter().enumerate() {
            writeln!(s, "entropy of subsystem {k}: {}", nats(cli, *m)).unwrap();
        }
        if let Some(mi) = mi {
            writeln!(s, "mutual information: {}", nats(cli, mi)).unwrap();
        }
        writeln!(s, "fidelity to maximally mixed: {}", sig(mixed_fidelity)).unwrap();
        s
    };
    emit(cli, &text)?;
    Ok(0)
}

fn describe_result(cli: &Cli, r: &MeasureResult, entropic: bool) -> String {
    let value = |x: f64| if entropic { nats(cli, x) } else { sig(snap(x)) };
    let mut s = String::new();
    writeln!(s, "value: {}", value(r.value)).unwrap();
    writeln!(s, "gap: {} ({:?})", sig(r.gap), r.certificate).unwrap();
    match r.lower_bound() {
        Some(lb) => writeln!(s, "bounds: [{}, {}]", sig(snap(lb)), sig(snap(r.value))).unwrap(),
        None => writeln!(s, "bounds: (-, {}]", sig(snap(r.value))).unwrap(),
    }
    writeln!(s, "iterations: {}", r.iterations).unwrap();
    writeln!(s, "converged: {}", if r.converged { "yes" } else { "no" }).unwrap();
    writeln!(s, "minimizer ({} terms, weight then factors):", r.minimizer.len()).unwrap();
    s.push_str(&format::ensemble(&r.minimizer, "  "));
    s
}

fn convergence_code(r: &MeasureResult) -> u8 {
    if r.converged {
        0
    } else {
        eprintln!(
            "warning: gap {} above tolerance after {} iterations",
            sig(r.gap),
            r.iterations
        );
        4
    }
}

fn distance_to_separable(cli: &Cli, config: &SolverConfig, rho: &DensityMatrix, distance: DistanceArg) -> Outcome {
    let (r, entropic) = match distance {
        DistanceArg::Relent => (ree(rho, config)?, true),
        DistanceArg::Bures => (bures_entanglement(rho, config)?, false),
    };
    let text = if cli.json {
        format!("{}\n", measure_result_json(&r))
    } else {
        let name = if entropic { "relative entropy" } else { "Bures" };
        format!("distance: {name}\n{}", describe_result(cli, &r, entropic))
    };
    emit(cli, &text)?;
    Ok(convergence_code(&r))
}

fn bell_sweep(cli: &Cli, config: &SolverConfig, steps: usize) -> Outcome {
    let scale = if cli.bits { std::f64::consts::LN_2 } else { 1.0 };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory CSV");
    let mut code = 0;
    for k in 0..steps {
        let lambda1 = 0.25 + 0.75 * k as f64 / (steps - 1) as f64;
        let spec = BellDiagonalSpec::dominant(lambda1)?;
        let (closed_form, _) = bell_diagonal_ree(&spec);
        let r = ree(&bell_diagonal(&spec), config)?;
        if !r.converged {
            code = convergence_code(&r);
        }
        let row = [
            lambda1,
            snap(closed_form) / scale,
            snap(r.value) / scale,
            r.gap / scale,
            (r.value - closed_form).abs() / scale,
        ];
        w.write_record(row.map(sig)).expect("in-memory CSV");
    }
    let bytes = w.into_inner().expect("in-memory CSV");
    emit(cli, std::str::from_utf8(&bytes).expect("ASCII CSV"))?;
    Ok(code)
}

fn check(cli: &Cli, config: &SolverConfig, suite: SuiteArg, trials: Option<usize>) -> Outcome {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Axioms => vec![Suite::Axioms],
        SuiteArg::Monotonicity => vec![Suite::Monotonicity],
        SuiteArg::PureConjecture => vec![Suite::PureConjecture],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let options = SuiteOptions {
        trials,
        seed: cli.seed,
        config: config.clone(),
    };
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, &options))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(SuiteReport::passed);

    if let Some(path) = &cli.out {
        fs::write(path, trial_log(&reports)).map_err(|e| io_failure(path, e))?;
    }
    let text = if cli.json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&reports).expect("reports serialize")
        )
    } else {
        let mut s = String::new();
        for r in &reports {
            s.push_str(&describe_report(r));
        }
        writeln!(s, "result: {}", if passed { "PASS" } else { "FAIL" }).unwrap();
        s
    };
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
    Ok(if passed { 0 } else { 1 })
}

fn describe_report(r: &SuiteReport) -> String {
    let mut s = String::new();
    writeln!(s, "{}: {} trials", r.suite.name(), r.trials).unwrap();
    let mut checks: Vec<&str> = Vec::new();
    for rec in &r.records {
        if !checks.contains(&rec.check) {
            checks.push(rec.check);
        }
    }
    for c in checks {
        let recs: Vec<_> = r.records.iter().filter(|x| x.check == c).collect();
        let ok = recs.iter().filter(|x| x.passed).count();
        let status = if ok == recs.len() { "ok" } else { "FAIL" };
        writeln!(s, "  {c}: {ok}/{} passed  {status}", recs.len()).unwrap();
        for x in recs.iter().filter(|x| !x.passed) {
            writeln!(
                s,
                "    trial {} seed {}: measured {} threshold {} ({})",
                x.trial,
                x.seed,
                sig(x.measured),
                sig(x.threshold),
                x.detail
            )
            .unwrap();
            if let Some(state) = &x.state {
                for line in state.lines() {
                    writeln!(s, "      {line}").unwrap();
                }
            }
        }
    }
    for n in &r.notes {
        writeln!(s, "  note: {n}").unwrap();
    }
    s
}

fn trial_log(reports: &[SuiteReport]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "suite",
        "check",
        "trial",
        "seed",
        "measured",
        "threshold",
        "passed",
        "detail",
    ])
    .expect("in-memory CSV");
    for x in reports.iter().flat_map(|r| r.records.iter().chain(&r.observations)) {
        w.write_record([
            x.suite.to_string(),
            x.check.to_string(),
            x.trial.to_string(),
            x.seed.to_string(),
            sig(x.measured),
            sig(x.threshold),
            x.passed.to_string(),
            x.detail.clone(),
        ])
        .expect("in-memory CSV");
    }
    w.into_inner().expect("in-memory CSV")
}

fn split(cli: &Cli, config: &SolverConfig, rho: &DensityMatrix) -> Outcome {
    let split = quantum_classical_split(rho, config)?;
    let r = &split.result;
    let text = if cli.json {
        format!("{}\n", serde_json::to_string_pretty(&split).expect("split serializes"))
    } else {
        let mut s = String::new();
        writeln!(s, "quantum: {}", nats(cli, split.quantum)).unwrap();
        writeln!(s, "classical: {}", nats(cli, split.classical)).unwrap();
        writeln!(s, "closest separable state:").unwrap();
        s.push_str(&format::matrix(realize(&r.minimizer).matrix(), "  "));
        s.push_str(&describe_result(cli, r, true));
        s
    };
    emit(cli, &text)?;
    Ok(convergence_code(r))
}
