//! Command-line front end: tables, the feasibility solver, simplex sweeps,
//! seeded simulations and the facts-space plot.
//!
//! Exit codes: 0 success (and feasible/satisfied verdicts), 1 infeasible or
//! inequality-violation verdicts, 2 usage or I/O errors.

mod fmt;
mod svg;

use bellfacts::montecarlo::{
    simulate_quantum, simulate_quantum_logged, simulate_students, simulate_students_logged,
    RunRecord, SimConfig, SimReport,
};
use bellfacts::quantum::{
    closed_form_coincidence, facts_born, FactsTriple, MeasurementProtocol, NamedState,
};
use bellfacts::strategies::{
    classical_inequality, solve_mixture_for_facts, FeasibilityResult, MixturePoint,
};
use bellfacts::sweep::{sweep_facts, GridSpec, PlaneRestriction, SweepRecord};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bellfacts",
    version,
    about = "Two-photon coincidence facts versus exhaustive classical strategy search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    /// Closed-form coincidence kernels with numeric spot checks.
    Coincidence,
    /// Computed facts (F1, F2, F3) of the six reference states.
    Facts,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimKind {
    /// The classical question game driven by a strategy mixture.
    Students,
    /// Born-rule outcome sampling of a reference state.
    Quantum,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coincidence kernels or the reference-state facts.
    Table {
        which: TableKind,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Analyzer angles in degrees (default 0,30,60).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        angles: Option<Vec<f64>>,
    },
    /// Solve the disagreement system for a facts target (F2, F3).
    Solve {
        f2: f64,
        f3: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the strategy simplex and map every mixture into facts space.
    Sweep {
        /// Inverse grid step; the grid has C(p+3,3) points.
        #[arg(long, default_value_t = 25)]
        p: u32,
        /// Restrict to one simplex face: alpha=0, beta=0, gamma=0 or delta=0.
        #[arg(long)]
        plane: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded game or quantum sampling simulation.
    Simulate {
        kind: SimKind,
        /// Strategy-class weights "a,b,c,d" (students only).
        #[arg(long)]
        mixture: Option<String>,
        /// Reference state tag: phi+, phi-, psi+, psi-, rhomax, rho (quantum only).
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        angles: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the full run log as CSV to this path.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Render the facts-space scatter (classical cloud, boundary lines,
    /// reference states) as SVG.
    Plot {
        #[arg(long, default_value_t = 25)]
        p: u32,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        angles: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve and inequality-check the facts of a reference state.
    Check {
        #[arg(long)]
        state: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        angles: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<bellfacts::Error> for CliError {
    fn from(err: bellfacts::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

type CliResult = Result<u8, CliError>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Table { which, format, out, angles } => cmd_table(which, format, &out, angles),
        Command::Solve { f2, f3, format, out } => cmd_solve(f2, f3, format, &out),
        Command::Sweep { p, plane, format, out } => cmd_sweep(p, plane.as_deref(), format, &out),
        Command::Simulate { kind, mixture, state, runs, seed, angles, format, out, log } => {
            cmd_simulate(kind, mixture, state, runs, seed, angles, format, &out, &log)
        }
        Command::Plot { p, angles, out } => cmd_plot(p, angles, &out),
        Command::Check { state, angles, format, out } => cmd_check(&state, angles, format, &out),
    }
}

fn protocol_from(angles: Option<Vec<f64>>) -> Result<MeasurementProtocol, CliError> {
    match angles {
        None => Ok(MeasurementProtocol::default()),
        Some(list) => Ok(MeasurementProtocol::new(list)?),
    }
}

fn parse_state(tag: &str) -> Result<NamedState, CliError> {
    NamedState::from_tag(tag).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown state tag '{tag}' (expected phi+, phi-, psi+, psi-, rhomax or rho)"
        ))
    })
}

fn parse_mixture(text: &str) -> Result<MixturePoint, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "mixture must be four comma-separated weights, got '{text}'"
        )));
    }
    let mut w = [0.0f64; 4];
    for (slot, part) in w.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid mixture component '{part}'")))?;
    }
    Ok(MixturePoint::new(w[0], w[1], w[2], w[3])?)
}

fn parse_plane(text: &str) -> Result<PlaneRestriction, CliError> {
    match text.trim().trim_end_matches("=0") {
        "alpha" => Ok(PlaneRestriction::AlphaZero),
        "beta" => Ok(PlaneRestriction::BetaZero),
        "gamma" => Ok(PlaneRestriction::GammaZero),
        "delta" => Ok(PlaneRestriction::DeltaZero),
        other => Err(CliError::Usage(format!(
            "unknown plane '{other}' (expected alpha=0, beta=0, gamma=0 or delta=0)"
        ))),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => write_file(path, content),
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

// --- table ---------------------------------------------------------------

fn cmd_table(
    which: TableKind,
    format: Format,
    out: &Option<PathBuf>,
    angles: Option<Vec<f64>>,
) -> CliResult {
    let protocol = protocol_from(angles)?;
    let content = match which {
        TableKind::Facts => {
            let rows: Vec<(NamedState, FactsTriple)> = NamedState::ALL
                .iter()
                .map(|&s| Ok((s, facts_born(&s.state(), &protocol)?)))
                .collect::<Result<_, bellfacts::Error>>()?;
            match format {
                Format::Text => {
                    let mut t = String::from("state    F1        F2        F3\n");
                    for (state, f) in &rows {
                        writeln!(
                            t,
                            "{:<8} {:<9} {:<9} {}",
                            state.tag(),
                            fmt::sig6(f.f1),
                            fmt::sig6(f.f2),
                            fmt::sig6(f.f3)
                        )
                        .unwrap();
                    }
                    t
                }
                Format::Csv => {
                    let mut t = String::from("state,F1,F2,F3\n");
                    for (state, f) in &rows {
                        writeln!(
                            t,
                            "{},{},{},{}",
                            state.tag(),
                            fmt::sig12(f.f1),
                            fmt::sig12(f.f2),
                            fmt::sig12(f.f3)
                        )
                        .unwrap();
                    }
                    t
                }
                Format::Json => {
                    let mut obj = Map::new();
                    for (state, f) in &rows {
                        obj.insert(
                            state.tag().to_string(),
                            json!({
                                "f1": fmt::round12(f.f1),
                                "f2": fmt::round12(f.f2),
                                "f3": fmt::round12(f.f3),
                            }),
                        );
                    }
                    pretty(Value::Object(obj))
                }
            }
        }
        TableKind::Coincidence => {
            let samples = [(0.0, 0.0), (0.0, 30.0), (0.0, 60.0)];
            match format {
                Format::Text => {
                    let mut t = String::from(
                        "state    coincidence(theta_s, theta_i)             c(0,0)    c(0,30)   c(0,60)\n",
                    );
                    for state in NamedState::ALL {
                        writeln!(
                            t,
                            "{:<8} {:<42} {:<9} {:<9} {}",
                            state.tag(),
                            state.coincidence_formula(),
                            fmt::sig6(closed_form_coincidence(state, 0.0, 0.0)),
                            fmt::sig6(closed_form_coincidence(state, 0.0, 30.0)),
                            fmt::sig6(closed_form_coincidence(state, 0.0, 60.0)),
                        )
                        .unwrap();
                    }
                    t
                }
                Format::Csv => {
                    let mut t = String::from("state,formula,c_0_0,c_0_30,c_0_60\n");
                    for state in NamedState::ALL {
                        writeln!(
                            t,
                            "{},\"{}\",{},{},{}",
                            state.tag(),
                            state.coincidence_formula(),
                            fmt::sig12(closed_form_coincidence(state, 0.0, 0.0)),
                            fmt::sig12(closed_form_coincidence(state, 0.0, 30.0)),
                            fmt::sig12(closed_form_coincidence(state, 0.0, 60.0)),
                        )
                        .unwrap();
                    }
                    t
                }
                Format::Json => {
                    let mut obj = Map::new();
                    for state in NamedState::ALL {
                        let mut checks = Map::new();
                        for (ts, ti) in samples {
                            checks.insert(
                                format!("{ts},{ti}"),
                                json!(fmt::round12(closed_form_coincidence(state, ts, ti))),
                            );
                        }
                        obj.insert(
                            state.tag().to_string(),
                            json!({
                                "formula": state.coincidence_formula(),
                                "spot_checks": Value::Object(checks),
                            }),
                        );
                    }
                    pretty(Value::Object(obj))
                }
            }
        }
    };
    write_output(out, &content)?;
    Ok(0)
}

// --- solve ---------------------------------------------------------------

fn solution_json(solved: &FeasibilityResult) -> Value {
    json!({
        "alpha": fmt::round12(solved.alpha),
        "beta": fmt::round12(solved.beta),
        "gamma": fmt::round12(solved.gamma),
        "delta": fmt::round12(solved.delta),
        "feasible": solved.feasible,
    })
}

fn solution_text(solved: &FeasibilityResult) -> String {
    let mut t = String::new();
    writeln!(
        t,
        "solution: alpha = {}, beta = {}, gamma = {}, delta = {}",
        fmt::sig6(solved.alpha),
        fmt::sig6(solved.beta),
        fmt::sig6(solved.gamma),
        fmt::sig6(solved.delta)
    )
    .unwrap();
    if solved.feasible {
        writeln!(t, "verdict: feasible").unwrap();
    } else {
        let negatives: Vec<&str> = ["alpha", "beta", "gamma", "delta"]
            .iter()
            .zip(solved.components())
            .filter(|(_, w)| *w < 0.0)
            .map(|(name, _)| *name)
            .collect();
        writeln!(t, "verdict: infeasible ({} < 0)", negatives.join(", ")).unwrap();
    }
    t
}

fn cmd_solve(f2: f64, f3: f64, format: Format, out: &Option<PathBuf>) -> CliResult {
    let solved = solve_mixture_for_facts(f2, f3)?;
    let content = match format {
        Format::Text => {
            format!("target: F2 = {}, F3 = {}\n{}", fmt::sig6(f2), fmt::sig6(f3), solution_text(&solved))
        }
        Format::Csv => format!(
            "alpha,beta,gamma,delta,feasible\n{},{},{},{},{}\n",
            fmt::sig12(solved.alpha),
            fmt::sig12(solved.beta),
            fmt::sig12(solved.gamma),
            fmt::sig12(solved.delta),
            solved.feasible
        ),
        Format::Json => pretty(json!({
            "f2": fmt::round12(f2),
            "f3": fmt::round12(f3),
            "solution": solution_json(&solved),
        })),
    };
    write_output(out, &content)?;
    Ok(if solved.feasible { 0 } else { 1 })
}

// --- sweep ---------------------------------------------------------------

fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut t = String::from("alpha,beta,gamma,delta,F1,F2,F3,margin\n");
    for r in records {
        writeln!(
            t,
            "{},{},{},{},{},{},{},{}",
            fmt::sig12(r.mixture.alpha),
            fmt::sig12(r.mixture.beta),
            fmt::sig12(r.mixture.gamma),
            fmt::sig12(r.mixture.delta),
            fmt::sig12(r.facts.f1),
            fmt::sig12(r.facts.f2),
            fmt::sig12(r.facts.f3),
            fmt::sig12(r.margin)
        )
        .unwrap();
    }
    t
}

fn cmd_sweep(p: u32, plane: Option<&str>, format: Format, out: &Option<PathBuf>) -> CliResult {
    let spec = match plane {
        None => GridSpec::new(p)?,
        Some(text) => GridSpec::restricted(p, parse_plane(text)?)?,
    };
    let records = sweep_facts(spec)?;
    let worst = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let content = match format {
        Format::Text | Format::Csv => sweep_csv(&records),
        Format::Json => {
            let rows: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "alpha": fmt::round12(r.mixture.alpha),
                        "beta": fmt::round12(r.mixture.beta),
                        "gamma": fmt::round12(r.mixture.gamma),
                        "delta": fmt::round12(r.mixture.delta),
                        "f1": fmt::round12(r.facts.f1),
                        "f2": fmt::round12(r.facts.f2),
                        "f3": fmt::round12(r.facts.f3),
                        "margin": fmt::round12(r.margin),
                    })
                })
                .collect();
            pretty(Value::Array(rows))
        }
    };
    write_output(out, &content)?;
    eprintln!("sweep: {} points, worst margin {}", records.len(), fmt::sig12(worst));
    Ok(0)
}

// --- simulate ------------------------------------------------------------

fn report_text(kind: &str, report: &SimReport) -> String {
    let mut t = format!(
        "simulate {kind}: seed = {}, runs = {}\n", report.seed, report.total_runs
    );
    t.push_str("offset  runs      agreements  empirical  std_error\n");
    for c in &report.classes {
        let (emp, se) = match (c.empirical(), c.std_error()) {
            (Some(f), Some(s)) => (fmt::sig6(f), fmt::sig6(s)),
            _ => ("undefined".into(), "undefined".into()),
        };
        writeln!(t, "{:<7} {:<9} {:<11} {:<10} {}", c.offset_deg, c.runs, c.agreements, emp, se)
            .unwrap();
    }
    t
}

fn report_csv(report: &SimReport) -> String {
    let mut t = String::from("offset,runs,agreements,empirical,std_error\n");
    for c in &report.classes {
        let (emp, se) = match (c.empirical(), c.std_error()) {
            (Some(f), Some(s)) => (fmt::sig12(f), fmt::sig12(s)),
            _ => (String::new(), String::new()),
        };
        writeln!(t, "{},{},{},{emp},{se}", c.offset_deg, c.runs, c.agreements).unwrap();
    }
    t
}

fn report_json(kind: &str, report: &SimReport) -> String {
    let classes: Vec<Value> = report
        .classes
        .iter()
        .map(|c| {
            json!({
                "offset": c.offset_deg,
                "runs": c.runs,
                "agreements": c.agreements,
                "empirical": c.empirical().map(fmt::round12),
                "std_error": c.std_error().map(fmt::round12),
            })
        })
        .collect();
    pretty(json!({
        "kind": kind,
        "seed": report.seed,
        "runs": report.total_runs,
        "classes": classes,
    }))
}

fn run_log_csv(records: &[RunRecord]) -> String {
    let mut t = String::from("run,theta_a,theta_b,r_a,r_b\n");
    for (i, r) in records.iter().enumerate() {
        writeln!(t, "{i},{},{},{},{}", r.theta_a_deg, r.theta_b_deg, r.r_a, r.r_b).unwrap();
    }
    t
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    kind: SimKind,
    mixture: Option<String>,
    state: Option<String>,
    runs: u64,
    seed: u64,
    angles: Option<Vec<f64>>,
    format: Format,
    out: &Option<PathBuf>,
    log: &Option<PathBuf>,
) -> CliResult {
    let config = SimConfig { runs, seed, protocol: protocol_from(angles)? };
    let (kind_name, report, records) = match kind {
        SimKind::Students => {
            let text = mixture.ok_or_else(|| {
                CliError::Usage("simulate students requires --mixture a,b,c,d".into())
            })?;
            if state.is_some() {
                return Err(CliError::Usage("--state is only valid for simulate quantum".into()));
            }
            let point = parse_mixture(&text)?;
            if log.is_some() {
                let (report, records) = simulate_students_logged(&point, &config)?;
                ("students", report, Some(records))
            } else {
                ("students", simulate_students(&point, &config)?, None)
            }
        }
        SimKind::Quantum => {
            let tag = state.ok_or_else(|| {
                CliError::Usage("simulate quantum requires --state TAG".into())
            })?;
            if mixture.is_some() {
                return Err(CliError::Usage(
                    "--mixture is only valid for simulate students".into(),
                ));
            }
            let concrete = parse_state(&tag)?.state();
            if log.is_some() {
                let (report, records) = simulate_quantum_logged(&concrete, &config)?;
                ("quantum", report, Some(records))
            } else {
                ("quantum", simulate_quantum(&concrete, &config)?, None)
            }
        }
    };

    if let (Some(path), Some(records)) = (log, &records) {
        write_file(path, &run_log_csv(records))?;
    }

    let content = match format {
        Format::Text => report_text(kind_name, &report),
        Format::Csv => report_csv(&report),
        Format::Json => report_json(kind_name, &report),
    };
    write_output(out, &content)?;
    Ok(0)
}

// --- plot ----------------------------------------------------------------

fn cmd_plot(p: u32, angles: Option<Vec<f64>>, out: &Option<PathBuf>) -> CliResult {
    let protocol = protocol_from(angles)?;
    let records = sweep_facts(GridSpec::new(p)?)?;
    let states: Vec<(String, FactsTriple)> = NamedState::ALL
        .iter()
        .map(|&s| Ok((s.tag().to_string(), facts_born(&s.state(), &protocol)?)))
        .collect::<Result<_, bellfacts::Error>>()?;
    write_output(out, &svg::render(&records, &states))?;
    Ok(0)
}

// --- check ---------------------------------------------------------------

fn cmd_check(
    tag: &str,
    angles: Option<Vec<f64>>,
    format: Format,
    out: &Option<PathBuf>,
) -> CliResult {
    let state = parse_state(tag)?;
    let protocol = protocol_from(angles)?;
    let facts = facts_born(&state.state(), &protocol)?;
    let solved = solve_mixture_for_facts(facts.f2, facts.f3)?;
    let check = classical_inequality(facts.f2, facts.f3);

    let content = match format {
        Format::Text => {
            let mut t = format!(
                "state {}: F1 = {}, F2 = {}, F3 = {}\n",
                state.tag(),
                fmt::sig6(facts.f1),
                fmt::sig6(facts.f2),
                fmt::sig6(facts.f3)
            );
            t.push_str(&solution_text(&solved));
            writeln!(
                t,
                "inequality |2 F2 - 1| <= F3: {} (margin {})",
                if check.satisfied { "satisfied" } else { "violated" },
                fmt::sig6(check.margin)
            )
            .unwrap();
            t
        }
        Format::Csv => format!(
            "state,F1,F2,F3,alpha,beta,gamma,delta,feasible,satisfied,margin\n{},{},{},{},{},{},{},{},{},{},{}\n",
            state.tag(),
            fmt::sig12(facts.f1),
            fmt::sig12(facts.f2),
            fmt::sig12(facts.f3),
            fmt::sig12(solved.alpha),
            fmt::sig12(solved.beta),
            fmt::sig12(solved.gamma),
            fmt::sig12(solved.delta),
            solved.feasible,
            check.satisfied,
            fmt::sig12(check.margin)
        ),
        Format::Json => pretty(json!({
            "state": state.tag(),
            "facts": {
                "f1": fmt::round12(facts.f1),
                "f2": fmt::round12(facts.f2),
                "f3": fmt::round12(facts.f3),
            },
            "solution": solution_json(&solved),
            "inequality": {
                "satisfied": check.satisfied,
                "margin": fmt::round12(check.margin),
            },
        })),
    };
    write_output(out, &content)?;
    Ok(if solved.feasible && check.satisfied { 0 } else { 1 })
}

fn pretty(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("JSON serialization");
    text.push('\n');
    text
}
