//! The `bqaoa` command line.
//!
//! Exit codes: 0 success, 1 usage, parse or I/O error, 2 solver error
//! (no time found), 3 budget too tight.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain_model::{ChainConfig, FrequencySet, PhaseTarget, PulseSchedule};
use crate::compiler::{
    cluster_state, compile, emit_plan, parse_circuit, parse_plan, run_plan, verify, BroadcastCircuit,
    CompilationReport, CompileOptions, PlanStep,
};
use crate::error::{Error, Result};
use crate::evolution::{init_basis, init_uniform, state_fidelity, StateVector};
use crate::gate_synthesis::{SolverChoice, Strategy, SynthOptions};
use crate::phase_align::{alignment_distance, find_time_grid, find_time_lattice, AlignmentResult};

/// Chain length used to turn sweep residuals into an operator distance.
pub const SWEEP_QUBITS: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "bqaoa",
    version,
    about = "Compile and simulate broadcast pulse schedules on a qubit chain"
)]
struct Cli {
    /// File with the four coupling frequencies (ω_A ω_B γ_AB γ_BA).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for every random choice (measurements, random targets).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a duration whose four wrapped phases hit a target.
    Align(AlignArgs),
    /// Compile a circuit file to a pulse plan.
    Compile(CompileArgs),
    /// Run a schedule or plan file on a statevector.
    Simulate(SimulateArgs),
    /// Compare a plan file against a circuit file.
    Verify(VerifyArgs),
    /// Solve many random targets for a list of budgets and emit CSV.
    Sweep(SweepArgs),
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Grid,
    Lattice,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Combined,
    PerTerm,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Uniform,
    Zero,
}

#[derive(Args, Debug)]
struct AlignArgs {
    /// Target phases on H_A, H_B, H_AB, H_BA in radians.
    #[arg(long, value_parser = parse_four, allow_hyphen_values = true)]
    target: [f64; 4],
    /// Phase budget: every residual must be below eps/4.
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value = "lattice")]
    solver: SolverArg,
    #[arg(long, default_value_t = 1e6)]
    t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
}

#[derive(Args, Debug, Clone, Copy)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "lattice")]
    solver: SolverArg,
    #[arg(long, value_enum, default_value = "combined")]
    strategy: StrategyArg,
    /// Search limit for the grid solver.
    #[arg(long, default_value_t = 1e7)]
    t_max: f64,
    /// Lower Hadamard layers through rotations instead of the native pulse.
    #[arg(long)]
    synth_hadamard: bool,
}

impl SynthArgs {
    fn options(&self) -> CompileOptions {
        CompileOptions {
            synth: SynthOptions {
                strategy: match self.strategy {
                    StrategyArg::Combined => Strategy::Combined,
                    StrategyArg::PerTerm => Strategy::PerTerm,
                },
                solver: match self.solver {
                    SolverArg::Lattice => SolverChoice::Lattice,
                    SolverArg::Grid => SolverChoice::Grid {
                        t_max: self.t_max,
                        dt: None,
                    },
                },
            },
            synthesize_hadamard: self.synth_hadamard,
        }
    }
}

#[derive(Args, Debug)]
struct CompileArgs {
    /// Circuit file.
    circuit: PathBuf,
    /// Total operator-distance budget for the whole circuit.
    #[arg(long)]
    eps: f64,
    /// Where to write the compiled plan.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Check the result against the ideal circuit and report the fidelity.
    #[arg(long)]
    verify: bool,
    /// Compile for this many qubits regardless of the circuit file.
    #[arg(long, value_name = "N")]
    qubits_override: Option<usize>,
    #[command(flatten)]
    synth: SynthArgs,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("output").args(["dump_state", "probs"])))]
struct SimulateArgs {
    /// Schedule or plan file.
    schedule: PathBuf,
    #[arg(long)]
    qubits: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    init: InitArg,
    /// Print one `re im` line per amplitude (the default).
    #[arg(long)]
    dump_state: bool,
    /// Print one probability per line.
    #[arg(long)]
    probs: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Circuit file.
    circuit: PathBuf,
    /// Plan file to check, as written by `compile --out`.
    plan: PathBuf,
    #[arg(long, value_name = "N")]
    qubits_override: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated phase budgets.
    #[arg(long, value_delimiter = ',', required = true)]
    eps_list: Vec<f64>,
    /// `random:<count>:<seed>`.
    #[arg(long, value_parser = parse_targets, default_value = "random:20:0")]
    targets: TargetSpec,
    #[arg(long, value_enum, default_value = "lattice")]
    solver: SolverArg,
    #[arg(long, default_value_t = 1e8)]
    t_max: f64,
    /// Grid step shared by every budget; defaults to 90% of the safe step
    /// for the smallest budget.
    #[arg(long)]
    dt: Option<f64>,
    /// Write the rows here instead of standard output.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Add a wall-clock column (makes the CSV run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Compile the 1-D cluster-state circuit and compare with the exact state.
    Cluster {
        #[arg(long, default_value_t = 6)]
        qubits: usize,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        synth: SynthArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct TargetSpec {
    count: usize,
    seed: u64,
}

fn parse_four(s: &str) -> std::result::Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}'")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated values, got {}", v.len()))
}

fn parse_targets(s: &str) -> std::result::Result<TargetSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["random", k, seed] => Ok(TargetSpec {
            count: k.parse().map_err(|_| format!("bad target count '{k}'"))?,
            seed: seed.parse().map_err(|_| format!("bad target seed '{seed}'"))?,
        }),
        _ => Err(format!("expected random:<count>:<seed>, got '{s}'")),
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSolutionInRange { .. } | Error::SolverFailure(..) => 2,
        Error::BudgetTooTight { .. } => 3,
        Error::Layer { source, .. } => exit_code(source),
        _ => 1,
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let freqs = match &cli.config {
        Some(path) => FrequencySet::parse(&read(path)?)?,
        None => FrequencySet::default(),
    };
    match &cli.command {
        Command::Align(a) => cmd_align(&freqs, a, out),
        Command::Compile(a) => cmd_compile(&freqs, cli.seed, a, out),
        Command::Simulate(a) => cmd_simulate(&freqs, cli.seed, a, out),
        Command::Verify(a) => cmd_verify(&freqs, cli.seed, a, out),
        Command::Sweep(a) => cmd_sweep(&freqs, a, out),
        Command::Demo {
            demo:
                Demo::Cluster {
                    qubits,
                    eps,
                    out: path,
                    synth,
                },
        } => cmd_demo_cluster(&freqs, cli.seed, *qubits, *eps, path.as_deref(), synth, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
}

fn solve(
    freqs: &FrequencySet,
    target: &PhaseTarget,
    solver: SolverArg,
    t_max: f64,
    dt: f64,
) -> Result<AlignmentResult> {
    match solver {
        SolverArg::Grid => find_time_grid(freqs, target, t_max, dt),
        SolverArg::Lattice => find_time_lattice(freqs, target),
    }
}

fn cmd_align(freqs: &FrequencySet, a: &AlignArgs, out: &mut dyn Write) -> Result<()> {
    let target = PhaseTarget::new(a.target, a.eps)?;
    let result = solve(freqs, &target, a.solver, a.t_max, a.dt)?;
    emit(out, &format!("{result}\n"))
}

fn load_circuit(path: &Path, qubits_override: Option<usize>) -> Result<BroadcastCircuit> {
    let mut circuit = parse_circuit(&read(path)?, qubits_override)?;
    if let Some(n) = qubits_override {
        // Every layer is translation invariant, so the same circuit makes
        // sense on any even chain length.
        circuit = BroadcastCircuit { n_qubits: n, ..circuit };
        BroadcastCircuit::new(n)?;
    }
    Ok(circuit)
}

fn cmd_compile(freqs: &FrequencySet, seed: u64, a: &CompileArgs, out: &mut dyn Write) -> Result<()> {
    let circuit = load_circuit(&a.circuit, a.qubits_override)?;
    let config = ChainConfig::new(circuit.n_qubits, *freqs)?;
    let mut report = compile(&circuit, &config, a.eps, &a.synth.options())?;
    if let Some(path) = &a.out {
        write_file(path, &emit_plan(&report.plan))?;
    }
    if a.verify {
        verify(&mut report, &circuit, &config, seed)?;
    }
    emit(out, &report.to_text())
}

fn cmd_simulate(freqs: &FrequencySet, seed: u64, a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let plan = parse_plan(&read(&a.schedule)?)?;
    let config = ChainConfig::new(a.qubits, *freqs)?;
    let mut state = match a.init {
        InitArg::Uniform => init_uniform(a.qubits)?,
        InitArg::Zero => init_basis(a.qubits, &vec![false; a.qubits])?,
    };
    let outcomes = run_plan(&mut state, &config, &plan, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let mut text = String::new();
    if !outcomes.is_empty() {
        let bits: Vec<&str> = outcomes.iter().map(|&b| if b { "1" } else { "0" }).collect();
        text.push_str(&format!("# outcomes {}\n", bits.join(",")));
    }
    if a.probs {
        for p in state.probabilities() {
            text.push_str(&format!("{p}\n"));
        }
    } else {
        for z in state.amplitudes() {
            text.push_str(&format!("{} {}\n", z.re, z.im));
        }
    }
    emit(out, &text)
}

fn cmd_verify(freqs: &FrequencySet, seed: u64, a: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let circuit = load_circuit(&a.circuit, a.qubits_override)?;
    let config = ChainConfig::new(circuit.n_qubits, *freqs)?;
    let plan = parse_plan(&read(&a.plan)?)?;
    let mut schedule = PulseSchedule::new();
    for step in &plan {
        if let PlanStep::Pulses(p) = step {
            schedule.extend(p);
        }
    }
    let mut report = CompilationReport {
        n_qubits: circuit.n_qubits,
        schedule,
        plan,
        alignments: Vec::new(),
        epsilon_per_pulse: 0.0,
        eps_total: 0.0,
        measured_fidelity: None,
    };
    let f = verify(&mut report, &circuit, &config, seed)?;
    emit(out, &format!("fidelity={f}\n"))
}

/// One solved (budget, target) pair of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub solver: &'static str,
    pub target: usize,
    /// `None` when the solver found no time.
    pub time: Option<f64>,
    pub residual_max: Option<f64>,
    pub pulse_count: usize,
    pub fidelity: Option<f64>,
    pub wall_seconds: f64,
}

/// Column names of the sweep CSV, without the optional timing column.
pub const SWEEP_HEADER: [&str; 7] = [
    "epsilon",
    "solver",
    "target",
    "t",
    "residual_max",
    "pulse_count",
    "fidelity",
];

/// `count` phase vectors drawn uniformly from `[0, 2π)^4`.
pub fn random_targets(count: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

/// Least-squares slope of `ln y` against `ln(1/x)`.
pub fn growth_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (-x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn cmd_sweep(freqs: &FrequencySet, a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    for &e in &a.eps_list {
        if !(e.is_finite() && e > 0.0) {
            return Err(Error::input(format!("epsilon must be positive, got {e}")));
        }
    }
    let targets = random_targets(a.targets.count, a.targets.seed);
    let eps_min = a.eps_list.iter().copied().fold(f64::INFINITY, f64::min);
    let dt = a.dt.unwrap_or(0.9 * (eps_min / 4.0) / freqs.max());
    let config = ChainConfig::new(SWEEP_QUBITS, *freqs)?;
    let solver_tag = match a.solver {
        SolverArg::Grid => "GRID",
        SolverArg::Lattice => "LATTICE",
    };

    let jobs: Vec<(f64, usize)> = a
        .eps_list
        .iter()
        .flat_map(|&e| (0..targets.len()).map(move |k| (e, k)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(eps, k)| -> Result<SweepRow> {
            let target = PhaseTarget::new(targets[k], eps)?;
            let start = Instant::now();
            let solved = match solve(freqs, &target, a.solver, a.t_max, dt) {
                Ok(r) => Some(r),
                Err(Error::NoSolutionInRange { .. } | Error::SolverFailure(..)) => None,
                Err(e) => return Err(e),
            };
            let wall_seconds = start.elapsed().as_secs_f64();
            let fidelity = match &solved {
                Some(r) => Some(1.0 - alignment_distance(&config, r.time, &target.phases())?),
                None => None,
            };
            Ok(SweepRow {
                epsilon: eps,
                solver: solver_tag,
                target: k,
                time: solved.as_ref().map(|r| r.time),
                residual_max: solved.as_ref().map(|r| r.max_residual()),
                pulse_count: usize::from(solved.is_some()),
                fidelity,
                wall_seconds,
            })
        })
        .collect::<Result<_>>()?;

    let csv_text = sweep_csv(&rows, a.timing)?;
    match &a.csv {
        Some(path) => write_file(path, &csv_text)?,
        None => emit(out, &csv_text)?,
    }

    let mut summary = String::new();
    let mut medians = Vec::new();
    for &e in &a.eps_list {
        let times: Vec<f64> = rows.iter().filter(|r| r.epsilon == e).filter_map(|r| r.time).collect();
        let solved = times.len();
        match median(times) {
            Some(m) => {
                summary.push_str(&format!("# eps={e} median_t={m} solved={solved}/{}\n", targets.len()));
                medians.push((e, m));
            }
            None => summary.push_str(&format!("# eps={e} median_t=none solved=0/{}\n", targets.len())),
        }
    }
    match growth_exponent(&medians) {
        Some(p) => summary.push_str(&format!("# growth_exponent={p}\n")),
        None => summary.push_str("# growth_exponent=none\n"),
    }
    emit(out, &summary)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders sweep rows as CSV.
pub fn sweep_csv(rows: &[SweepRow], timing: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if timing {
        header.push("wall_seconds");
    }
    w.write_record(&header).map_err(io)?;
    for r in rows {
        let mut rec = vec![
            r.epsilon.to_string(),
            r.solver.to_string(),
            r.target.to_string(),
            opt(r.time),
            opt(r.residual_max),
            r.pulse_count.to_string(),
            opt(r.fidelity),
        ];
        if timing {
            rec.push(r.wall_seconds.to_string());
        }
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn cmd_demo_cluster(
    freqs: &FrequencySet,
    seed: u64,
    n: usize,
    eps: f64,
    path: Option<&Path>,
    synth: &SynthArgs,
    out: &mut dyn Write,
) -> Result<()> {
    let circuit = BroadcastCircuit::cluster(n)?;
    let config = ChainConfig::new(n, *freqs)?;
    let report = compile(&circuit, &config, eps, &synth.options())?;
    if let Some(path) = path {
        write_file(path, &emit_plan(&report.plan))?;
    }
    let mut state: StateVector = init_basis(n, &vec![false; n])?;
    run_plan(&mut state, &config, &report.plan, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let f = state_fidelity(&cluster_state(n)?, &state)?;
    let mut report = report;
    report.measured_fidelity = Some(f);
    emit(out, &report.to_text())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["bqaoa"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn trivial_alignment() {
        let (code, out, _) = call(&["align", "--target", "0,0,0,0", "--eps", "0.4"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("t=0 "), "{out}");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["align", "--eps", "0.4"]).0, 1);
        assert_eq!(call(&["align", "--target", "1,2,3", "--eps", "0.4"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn grid_miss_exits_two() {
        let (code, _, err) = call(&[
            "align",
            "--target",
            "3.14159,0,0,0",
            "--eps",
            "0.05",
            "--solver",
            "grid",
            "--t-max",
            "10",
        ]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn target_spec_parsing() {
        assert_eq!(parse_targets("random:3:9"), Ok(TargetSpec { count: 3, seed: 9 }));
        assert!(parse_targets("fixed:3").is_err());
        assert!(parse_four("1,2,3,x").is_err());
    }

    #[test]
    fn exponent_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [0.8, 0.4, 0.2].iter().map(|&e: &f64| (e, 3.0 * e.powi(-4))).collect();
        assert!((growth_exponent(&pts).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(growth_exponent(&pts[..1]), None);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(Vec::new()), None);
    }

    #[test]
    fn exit_codes_unwrap_layers() {
        let e = Error::Layer {
            index: 3,
            source: Box::new(Error::BudgetTooTight {
                per_pulse: 1e-9,
                floor: 1e-4,
                pulses: 1,
            }),
        };
        assert_eq!(exit_code(&e), 3);
        assert_eq!(exit_code(&Error::input("x")), 1);
    }
}
