//! Command-line front end: emits machine-readable spectrum, expectation,
//! density and propagation data, runs grid-convergence studies and the
//! verification suite.
//!
//! Exit codes: 0 success, 1 validation error, 2 verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use pdm_well::error::Error;
use pdm_well::evolution::{propagate, stable_dt};
use pdm_well::grid::Grid;
use pdm_well::observables::{density_2d, expectation_x};
use pdm_well::operators::build_hamiltonian_nonhermitian;
use pdm_well::params::PhysicalParams;
use pdm_well::solver::{solve_well_refined, solve_well_xgrid, well_hamiltonian_tridiagonal};
use pdm_well::verify::{run_all, run_check, CheckResult, VerifyOptions, CHECK_NAMES};
use pdm_well::wavefunction::WaveFunction;
use pdm_well::well::{eigenfunction, energy, reference_energy_ref3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Spectrum,
    Wavefunction,
    Density2d,
    Expectation,
    Evolve,
    Verify,
    Convergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OperatorKind {
    Hermitian,
    Nonhermitian,
}

#[derive(Debug, Parser)]
#[command(
    name = "pdmwell",
    about = "Deformed-translation quantum well: spectra, densities, expectation values and self-checks",
    disable_help_flag = false
)]
struct Cli {
    /// What to compute.
    #[arg(long, value_enum)]
    command: Command,

    /// Dimensionless deformation γ̃ = γL.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma_tilde: f64,

    /// Sweep γ̃ over start:stop:steps instead of a single value.
    #[arg(long, allow_hyphen_values = true)]
    gamma_sweep: Option<String>,

    /// Quantum number(s); repeatable.
    #[arg(long = "n")]
    n: Vec<u32>,

    /// Grid points / per-axis resolution (odd, >= 65). Per-command default
    /// when omitted.
    #[arg(long)]
    grid_points: Option<usize>,

    #[arg(long, default_value_t = 1.0)]
    hbar: f64,

    #[arg(long, default_value_t = 1.0)]
    mass: f64,

    #[arg(long, default_value_t = 1.0)]
    length: f64,

    /// Absolute γ override (takes precedence over --gamma-tilde).
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run a single named verification check.
    #[arg(long)]
    check: Option<String>,

    /// Ordering exponents for `verify --check vonroos`.
    #[arg(long, default_value_t = -0.25, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = -0.25, allow_hyphen_values = true)]
    gamma_order: f64,

    /// Time step for `evolve` (defaults to 0.1·ħ/‖H‖).
    #[arg(long)]
    dt: Option<f64>,

    /// Step count for `evolve`.
    #[arg(long, default_value_t = 1000)]
    steps: usize,

    /// Hamiltonian variant for `evolve`.
    #[arg(long, value_enum, default_value_t = OperatorKind::Hermitian)]
    operator: OperatorKind,
}

enum CliError {
    Validation(String),
    VerificationFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not validation failures
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::VerificationFailed) => ExitCode::from(2),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let gammas = gamma_values(cli)?;
    match cli.command {
        Command::Spectrum => cmd_spectrum(cli, &gammas),
        Command::Expectation => cmd_expectation(cli, &gammas),
        Command::Wavefunction => cmd_wavefunction(cli, &gammas),
        Command::Density2d => cmd_density2d(cli, &gammas),
        Command::Evolve => cmd_evolve(cli, &gammas),
        Command::Convergence => cmd_convergence(cli, &gammas),
        Command::Verify => cmd_verify(cli, &gammas),
    }
}

/// γ̃ list from --gamma-sweep or the single --gamma-tilde / --gamma.
fn gamma_values(cli: &Cli) -> Result<Vec<f64>, CliError> {
    if let Some(sweep) = &cli.gamma_sweep {
        let parts: Vec<&str> = sweep.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Validation(format!(
                "--gamma-sweep expects start:stop:steps, got '{sweep}'"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::Validation(format!("bad sweep start '{}'", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Validation(format!("bad sweep stop '{}'", parts[1])))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|_| CliError::Validation(format!("bad sweep steps '{}'", parts[2])))?;
        if steps < 2 {
            return Err(CliError::Validation("sweep needs at least 2 steps".into()));
        }
        let dg = (stop - start) / (steps - 1) as f64;
        Ok((0..steps).map(|i| start + i as f64 * dg).collect())
    } else if let Some(g) = cli.gamma {
        Ok(vec![g * cli.length])
    } else {
        Ok(vec![cli.gamma_tilde])
    }
}

fn params_for(cli: &Cli, gamma_tilde: f64) -> Result<PhysicalParams, CliError> {
    Ok(PhysicalParams::new(cli.hbar, cli.mass, cli.length, gamma_tilde / cli.length)?)
}

fn grid_points_for(cli: &Cli, default: usize) -> Result<usize, CliError> {
    let n = cli.grid_points.unwrap_or(default);
    if n < 65 || n.is_multiple_of(2) {
        return Err(CliError::Validation(format!("--grid-points must be odd and >= 65, got {n}")));
    }
    Ok(n)
}

fn n_list(cli: &Cli, default: &[u32]) -> Result<Vec<u32>, CliError> {
    let ns = if cli.n.is_empty() { default.to_vec() } else { cli.n.clone() };
    if ns.is_empty() || ns.iter().any(|&n| n < 1) {
        return Err(CliError::Validation("quantum numbers must be >= 1".into()));
    }
    Ok(ns)
}

/// Full-precision decimal rendering (17 significant digits round-trips f64).
fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Number(n) if n.is_f64() => fmt_full(n.as_f64().unwrap()),
                    Value::Number(n) => n.to_string(),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (c, v) in self.columns.iter().zip(row) {
                        obj.insert((*c).to_string(), v.clone());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn config_json(cli: &Cli, gammas: &[f64], extra: &[(&str, Value)]) -> Value {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(format!("{:?}", cli.command).to_lowercase()));
    if gammas.len() == 1 {
        obj.insert("gamma_tilde".into(), json!(gammas[0]));
    } else {
        obj.insert("gamma_tilde_sweep".into(), json!(gammas));
    }
    obj.insert("hbar".into(), json!(cli.hbar));
    obj.insert("mass".into(), json!(cli.mass));
    obj.insert("length".into(), json!(cli.length));
    for (k, v) in extra {
        obj.insert((*k).to_string(), v.clone());
    }
    Value::Object(obj)
}

fn emit(cli: &Cli, config: Value, table: &Table) -> Result<(), CliError> {
    let text = match cli.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let doc = json!({ "config": config, "rows": table.to_json_rows() });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::Validation(format!("json encoding failed: {e}")))?;
            s.push('\n');
            s
        }
    };
    write_output(cli, &text)
}

fn write_output(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => {
            use std::io::Write;
            if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return Ok(());
                }
                return Err(e.into());
            }
        }
    }
    Ok(())
}

fn cmd_spectrum(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    let ns = n_list(cli, &[1, 2, 3])?;
    let n_points = grid_points_for(cli, 8001)?;
    let k_max = *ns.iter().max().unwrap() as usize;
    let mut table = Table::new(vec![
        "gamma_tilde",
        "n",
        "e_analytic",
        "e_ref3",
        "e_numeric",
        "e_over_e0",
        "rel_err",
    ]);
    for &gt in gammas {
        let p = params_for(cli, gt)?;
        let sol = solve_well_refined(&p, n_points, k_max)?;
        let refined = sol.richardson_estimate.as_ref().expect("refined energies");
        let e0 = p.classical_ground_energy();
        for &n in &ns {
            let e_analytic = energy(n, &p)?;
            let e_ref3 = reference_energy_ref3(n, &p)?;
            let e_numeric = refined[(n - 1) as usize];
            let rel_err = ((e_numeric - e_analytic) / e_analytic).abs();
            table.push(vec![
                json!(gt),
                json!(n),
                json!(e_analytic),
                json!(e_ref3),
                json!(e_numeric),
                json!(e_analytic / e0),
                json!(rel_err),
            ]);
        }
    }
    let config = config_json(cli, gammas, &[("n", json!(ns)), ("grid_points", json!(n_points))]);
    emit(cli, config, &table)
}

fn cmd_expectation(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    let ns = n_list(cli, &[1, 2, 3, 20])?;
    let mut table = Table::new(vec!["gamma_tilde", "n", "x_expect_over_l"]);
    for &gt in gammas {
        let p = params_for(cli, gt)?;
        for &n in &ns {
            let v = expectation_x(n, &p)?;
            table.push(vec![json!(gt), json!(n), json!(v / p.length)]);
        }
    }
    let config = config_json(cli, gammas, &[("n", json!(ns))]);
    emit(cli, config, &table)
}

fn cmd_wavefunction(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    let ns = n_list(cli, &[1])?;
    let n = ns[0];
    let n_points = grid_points_for(cli, 2001)?;
    let mut table = Table::new(vec!["gamma_tilde", "x", "phi", "density"]);
    for &gt in gammas {
        let p = params_for(cli, gt)?;
        let grid = Grid::physical(&p, n_points)?;
        for &x in grid.points() {
            let v = eigenfunction(n, x, &p)?;
            table.push(vec![json!(gt), json!(x), json!(v), json!(v * v)]);
        }
    }
    let config = config_json(cli, gammas, &[("n", json!(n)), ("grid_points", json!(n_points))]);
    emit(cli, config, &table)
}

fn cmd_density2d(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    let ns = n_list(cli, &[1, 1])?;
    let (n1, n2) = (ns[0], *ns.get(1).unwrap_or(&ns[0]));
    let resolution = grid_points_for(cli, 257)?;
    if gammas.len() != 1 {
        return Err(CliError::Validation(
            "density2d expects a single gamma_tilde, not a sweep".into(),
        ));
    }
    let p = params_for(cli, gammas[0])?;
    let d = density_2d(n1, n2, &p, resolution)?;
    let config = config_json(
        cli,
        gammas,
        &[("n1", json!(n1)), ("n2", json!(n2)), ("resolution", json!(resolution))],
    );
    match cli.format {
        Format::Csv => {
            let mut table = Table::new(vec!["x", "y", "density"]);
            for (i, &x) in d.axis().points().iter().enumerate() {
                for (j, &y) in d.axis().points().iter().enumerate() {
                    table.push(vec![json!(x), json!(y), json!(d.values()[i][j])]);
                }
            }
            emit(cli, config, &table)
        }
        Format::Json => {
            let doc = json!({
                "config": config,
                "x": d.axis().points(),
                "y": d.axis().points(),
                "density": d.values(),
            });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::Validation(format!("json encoding failed: {e}")))?;
            s.push('\n');
            write_output(cli, &s)
        }
    }
}

fn cmd_evolve(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    if gammas.len() != 1 {
        return Err(CliError::Validation("evolve expects a single gamma_tilde".into()));
    }
    let p = params_for(cli, gammas[0])?;
    let ns = n_list(cli, &[1, 2])?;
    let n_points = grid_points_for(cli, 257)?;
    let grid = Grid::physical(&p, n_points)?;
    let v0 = vec![0.0; grid.n_interior()];
    let h_op = match cli.operator {
        OperatorKind::Hermitian => well_hamiltonian_tridiagonal(&p, &grid)?,
        OperatorKind::Nonhermitian => build_hamiltonian_nonhermitian(&grid, &p, &v0)?,
    };
    // equal-weight superposition of the requested numeric levels
    let k_max = *ns.iter().max().unwrap() as usize;
    let sol = solve_well_xgrid(&p, n_points, k_max)?;
    let mut samples = vec![num_complex::Complex64::new(0.0, 0.0); grid.n_points()];
    for &n in &ns {
        for (s, v) in samples.iter_mut().zip(sol.states[(n - 1) as usize].samples()) {
            *s += v;
        }
    }
    let psi0 = WaveFunction::new(samples, grid)?;
    let dt = match cli.dt {
        Some(v) => v,
        None => stable_dt(&h_op, &p, 0.1),
    };
    let run = propagate(&psi0, &h_op, &p, dt, cli.steps)?;
    let mut table = Table::new(vec!["step", "time", "norm", "energy", "x_expect"]);
    for i in 0..run.norm_history.len() {
        table.push(vec![
            json!(i),
            json!(i as f64 * dt),
            json!(run.norm_history[i]),
            json!(run.energy_history[i]),
            json!(run.position_history[i]),
        ]);
    }
    let config = config_json(
        cli,
        gammas,
        &[
            ("n", json!(ns)),
            ("grid_points", json!(n_points)),
            ("dt", json!(dt)),
            ("steps", json!(cli.steps)),
            ("operator", json!(format!("{:?}", cli.operator).to_lowercase())),
        ],
    );
    emit(cli, config, &table)
}

fn cmd_convergence(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    let ns = n_list(cli, &[1, 2, 3])?;
    let n_max = grid_points_for(cli, 8001)?;
    let k_max = *ns.iter().max().unwrap() as usize;
    // doubling ladder ending at n_max
    let mut ladder = vec![n_max];
    while *ladder.last().unwrap() > 1001 && ladder.len() < 4 {
        let prev = ladder.last().unwrap();
        ladder.push((prev - 1) / 2 + 1);
    }
    ladder.reverse();
    let mut table = Table::new(vec![
        "gamma_tilde",
        "n",
        "n_points",
        "e_numeric",
        "e_refined",
        "e_reference",
        "rel_err_refined",
        "empirical_order",
    ]);
    for &gt in gammas {
        let p = params_for(cli, gt)?;
        for &npts in &ladder {
            let sol = solve_well_refined(&p, npts, k_max)?;
            let refined = sol.richardson_estimate.as_ref().unwrap();
            for &n in &ns {
                let i = (n - 1) as usize;
                let reference = reference_energy_ref3(n, &p)?;
                let rel = ((refined[i] - reference) / reference).abs();
                table.push(vec![
                    json!(gt),
                    json!(n),
                    json!(npts),
                    json!(sol.energies[i]),
                    json!(refined[i]),
                    json!(reference),
                    json!(rel),
                    json!(sol.convergence_order.unwrap()),
                ]);
            }
        }
    }
    let config = config_json(cli, gammas, &[("n", json!(ns)), ("grid_points", json!(n_max))]);
    emit(cli, config, &table)
}

fn cmd_verify(cli: &Cli, gammas: &[f64]) -> Result<(), CliError> {
    if gammas.len() != 1 {
        return Err(CliError::Validation("verify expects a single gamma_tilde".into()));
    }
    let p = params_for(cli, gammas[0])?;
    let opts = VerifyOptions { ordering: (cli.alpha, cli.beta, cli.gamma_order) };
    let results: Vec<CheckResult> = match &cli.check {
        Some(name) => match run_check(name, &p, &opts)? {
            Some(r) => vec![r],
            None => {
                return Err(CliError::Validation(format!(
                    "unknown check '{name}'; available: {}",
                    CHECK_NAMES.join(", ")
                )))
            }
        },
        None => run_all(&p, &opts)?,
    };
    let mut out = String::new();
    let _ = writeln!(out, "{:<16} {:<6} detail", "check", "status");
    let mut all_passed = true;
    for r in &results {
        all_passed &= r.passed;
        let _ = writeln!(
            out,
            "{:<16} {:<6} {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    write_output(cli, &out)?;
    if all_passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}
