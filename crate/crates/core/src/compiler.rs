//! Whole-circuit compilation.
//!
//! A [`BroadcastCircuit`] is a list of translation-invariant layers with
//! optional boundary measurement and preparation in between. Compilation
//! plans every layer exactly, fuses neighbouring rotations across layer
//! boundaries, splits the error budget evenly over the remaining aligned
//! pulses, and lowers each rotation independently. Boundary actions split
//! the program into an execution plan of pulse segments and runtime actions.

use std::fmt::Write as _;

use nalgebra::{Matrix2, Matrix4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain_model::{tokens, ChainConfig, Pulse, PulseSchedule};
use crate::error::{Error, Result};
use crate::evolution::{
    apply_schedule, init_basis, init_uniform, measure_boundary_with, prepare_boundary_with, state_fidelity,
    unitary_distance, StateVector, C64, MAX_DENSE_QUBITS,
};
use crate::gate_synthesis::{
    aligned_pulse_count, apply_ideal_layer, dense_from_columns, lower_layers, merge_tagged, plan_layer, split_budget,
    DiagonalLayerSpec, LayerGate, Parity, RotationLayer, Sublattice, SynthOptions,
};
use crate::phase_align::AlignmentResult;

/// Largest chain verified through full statevectors.
pub const MAX_STATE_VERIFY_QUBITS: usize = 20;

/// Placeholder budget stored in parsed diagonal layers; compilation replaces
/// it with the per-pulse share of the circuit budget.
const UNSET_EPSILON: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitialState {
    /// `2^{-n/2} Σ_j |j⟩`.
    #[default]
    Uniform,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum CircuitElement {
    Layer(LayerGate),
    MeasureBoundary,
    PrepareBoundary(bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastCircuit {
    pub n_qubits: usize,
    pub init: InitialState,
    pub elements: Vec<CircuitElement>,
}

impl BroadcastCircuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits < 2 || !n_qubits.is_multiple_of(2) {
            return Err(Error::input(format!(
                "qubit count must be even and >= 2, got {n_qubits}"
            )));
        }
        Ok(BroadcastCircuit {
            n_qubits,
            init: InitialState::default(),
            elements: Vec::new(),
        })
    }

    pub fn layer(mut self, gate: LayerGate) -> Self {
        self.elements.push(CircuitElement::Layer(gate));
        self
    }

    pub fn has_boundary_actions(&self) -> bool {
        self.elements.iter().any(|e| !matches!(e, CircuitElement::Layer(_)))
    }

    /// `H` on every qubit, then CZ on every AB pair and every BA pair,
    /// starting from `|0…0⟩`.
    pub fn cluster(n_qubits: usize) -> Result<Self> {
        let mut c = BroadcastCircuit::new(n_qubits)?
            .layer(LayerGate::HadamardAll)
            .layer(LayerGate::cz(Parity::AB))
            .layer(LayerGate::cz(Parity::BA));
        c.init = InitialState::Zero;
        Ok(c)
    }

    /// Serializes to the circuit file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n_qubits);
        s.push_str(match self.init {
            InitialState::Uniform => "init uniform\n",
            InitialState::Zero => "init zero\n",
        });
        for e in &self.elements {
            match e {
                CircuitElement::MeasureBoundary => s.push_str("measure\n"),
                CircuitElement::PrepareBoundary(b) => {
                    let _ = writeln!(s, "prepare {}", u8::from(*b));
                }
                CircuitElement::Layer(g) => {
                    s.push_str("layer ");
                    match g {
                        LayerGate::HadamardAll => s.push_str("had_all"),
                        LayerGate::ZDiagonal(d) | LayerGate::YDiagonal(d) => {
                            let kw = if matches!(g, LayerGate::ZDiagonal(_)) {
                                "zdiag"
                            } else {
                                "ydiag"
                            };
                            let _ = write!(s, "{kw} {} {} {} {}", d.parity, d.phi_a, d.phi_b, d.phi_pair);
                        }
                        LayerGate::SingleQubit { sublattice, unitary } => {
                            let _ = write!(s, "sq {sublattice}");
                            write_entries(&mut s, unitary.transpose().iter());
                        }
                        LayerGate::TwoQubit { parity, .. } if *g == LayerGate::cz(*parity) => {
                            let _ = write!(s, "cz {parity}");
                        }
                        LayerGate::TwoQubit { parity, unitary } => {
                            let _ = write!(s, "tq {parity}");
                            write_entries(&mut s, unitary.transpose().iter());
                        }
                    }
                    s.push('\n');
                }
            }
        }
        s
    }
}

fn write_entries<'a>(s: &mut String, entries: impl Iterator<Item = &'a C64>) {
    for z in entries {
        let _ = write!(s, " {} {}", z.re, z.im);
    }
}

struct Cursor<'a, I: Iterator<Item = (usize, &'a str)>> {
    toks: I,
    line: usize,
    end_col: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Cursor<'a, I> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.toks.next() {
            Some((col, tok)) => {
                self.end_col = col + tok.len();
                Ok((col, tok))
            }
            None => Err(Error::syntax(self.line, self.end_col, format!("expected {what}"))),
        }
    }

    fn number(&mut self, what: &str) -> Result<f64> {
        let (col, tok) = self.next(what)?;
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::syntax(self.line, col, format!("bad {what} '{tok}'"))),
        }
    }

    fn parsed<T: std::str::FromStr<Err = Error>>(&mut self, what: &str) -> Result<T> {
        let (col, tok) = self.next(what)?;
        tok.parse::<T>()
            .map_err(|e| Error::syntax(self.line, col, e.to_string()))
    }

    fn finish(&mut self) -> Result<()> {
        match self.toks.next() {
            Some((col, tok)) => Err(Error::syntax(self.line, col, format!("unexpected token '{tok}'"))),
            None => Ok(()),
        }
    }

    fn complex_entries(&mut self, count: usize) -> Result<Vec<C64>> {
        (0..count)
            .map(|i| {
                let re = self.number(&format!("real part of entry {}", i + 1))?;
                let im = self.number(&format!("imaginary part of entry {}", i + 1))?;
                Ok(C64::new(re, im))
            })
            .collect()
    }
}

/// Parses the circuit file format. `default_qubits` is used when the text
/// has no `qubits` line; otherwise that line is required.
pub fn parse_circuit(text: &str, default_qubits: Option<usize>) -> Result<BroadcastCircuit> {
    let mut n_qubits: Option<usize> = None;
    let mut init = InitialState::default();
    let mut elements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            toks: tokens(body),
            line,
            end_col: 1,
        };
        let Some((col, kw)) = cur.toks.next() else {
            continue;
        };
        cur.end_col = col + kw.len();
        match kw {
            "qubits" => {
                let (c, tok) = cur.next("qubit count")?;
                let n: usize = tok
                    .parse()
                    .map_err(|_| Error::syntax(line, c, format!("bad qubit count '{tok}'")))?;
                if n < 2 || !n.is_multiple_of(2) {
                    return Err(Error::syntax(
                        line,
                        c,
                        format!("qubit count must be even and >= 2, got {n}"),
                    ));
                }
                if n_qubits.replace(n).is_some() {
                    return Err(Error::syntax(line, col, "duplicate qubits line"));
                }
            }
            "init" => {
                let (c, tok) = cur.next("initial state")?;
                init = match tok {
                    "uniform" => InitialState::Uniform,
                    "zero" => InitialState::Zero,
                    _ => return Err(Error::syntax(line, c, format!("unknown initial state '{tok}'"))),
                };
            }
            "measure" => elements.push(CircuitElement::MeasureBoundary),
            "prepare" => {
                let (c, tok) = cur.next("bit")?;
                let bit = match tok {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::syntax(line, c, format!("prepare expects 0 or 1, got '{tok}'"))),
                };
                elements.push(CircuitElement::PrepareBoundary(bit));
            }
            "layer" => {
                let (kc, kind) = cur.next("layer kind")?;
                let gate = match kind {
                    "had_all" => LayerGate::HadamardAll,
                    "cz" => LayerGate::cz(cur.parsed::<Parity>("parity")?),
                    "zdiag" | "ydiag" => {
                        let parity = cur.parsed::<Parity>("parity")?;
                        let a = cur.number("phi_a")?;
                        let b = cur.number("phi_b")?;
                        let p = cur.number("phi_pair")?;
                        let spec = DiagonalLayerSpec::new(parity, a, b, p, UNSET_EPSILON)?;
                        if kind == "zdiag" {
                            LayerGate::ZDiagonal(spec)
                        } else {
                            LayerGate::YDiagonal(spec)
                        }
                    }
                    "sq" => {
                        let sub = cur.parsed::<Sublattice>("sublattice")?;
                        let e = cur.complex_entries(4)?;
                        LayerGate::single_qubit(sub, Matrix2::from_row_slice(&e))
                            .map_err(|err| Error::syntax(line, kc, err.to_string()))?
                    }
                    "tq" => {
                        let parity = cur.parsed::<Parity>("parity")?;
                        let e = cur.complex_entries(16)?;
                        LayerGate::two_qubit(parity, Matrix4::from_row_slice(&e))
                            .map_err(|err| Error::syntax(line, kc, err.to_string()))?
                    }
                    other => return Err(Error::syntax(line, kc, format!("unknown layer '{other}'"))),
                };
                elements.push(CircuitElement::Layer(gate));
            }
            other => return Err(Error::syntax(line, col, format!("unknown directive '{other}'"))),
        }
        cur.finish()?;
    }
    let n_qubits = n_qubits
        .or(default_qubits)
        .ok_or_else(|| Error::syntax(1, 1, "missing 'qubits <n>' line"))?;
    let mut c = BroadcastCircuit::new(n_qubits)?;
    c.init = init;
    c.elements = elements;
    Ok(c)
}

/// One step of a compiled program.
#[derive(Clone, Debug, PartialEq)]
pub enum PlanStep {
    Pulses(PulseSchedule),
    MeasureBoundary,
    PrepareBoundary(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CompileOptions {
    pub synth: SynthOptions,
    /// Build Hadamard layers from rotations instead of native pulses.
    pub synthesize_hadamard: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompilationReport {
    pub n_qubits: usize,
    /// All pulse segments concatenated.
    pub schedule: PulseSchedule,
    pub plan: Vec<PlanStep>,
    pub alignments: Vec<AlignmentResult>,
    pub epsilon_per_pulse: f64,
    pub eps_total: f64,
    pub measured_fidelity: Option<f64>,
}

impl CompilationReport {
    pub fn pulse_count(&self) -> usize {
        self.schedule.len()
    }

    pub fn aligned_pulses(&self) -> usize {
        self.alignments.len()
    }

    pub fn total_evolution_time(&self) -> f64 {
        self.schedule.total_time()
    }

    /// Sum of the per-pulse budgets actually spent.
    pub fn predicted_error(&self) -> f64 {
        self.alignments.len() as f64 * self.epsilon_per_pulse
    }

    /// Flat `key=value` text block.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "qubits={}", self.n_qubits);
        let _ = writeln!(s, "eps_total={}", self.eps_total);
        let _ = writeln!(s, "pulse_count={}", self.pulse_count());
        let _ = writeln!(s, "aligned_pulses={}", self.aligned_pulses());
        let _ = writeln!(s, "epsilon_per_pulse={}", self.epsilon_per_pulse);
        let _ = writeln!(s, "total_evolution_time={}", self.total_evolution_time());
        let _ = writeln!(s, "predicted_error={}", self.predicted_error());
        let actions = self.plan.iter().filter(|p| !matches!(p, PlanStep::Pulses(_))).count();
        let _ = writeln!(s, "boundary_actions={actions}");
        if let Some(f) = self.measured_fidelity {
            let _ = writeln!(s, "measured_fidelity={f}");
        }
        for (i, a) in self.alignments.iter().enumerate() {
            let r = a.residuals;
            let _ = writeln!(s, "residuals.{i}={},{},{},{}", r[0], r[1], r[2], r[3]);
        }
        s
    }
}

enum Item {
    Rotation(usize, RotationLayer),
    Native(Pulse),
    Boundary(PlanStep),
}

/// Compiles a circuit with a total operator-distance budget `eps_total`.
pub fn compile(
    circuit: &BroadcastCircuit,
    config: &ChainConfig,
    eps_total: f64,
    opts: &CompileOptions,
) -> Result<CompilationReport> {
    if !(eps_total > 0.0 && eps_total < 1.0) {
        return Err(Error::input(format!("eps_total must lie in (0, 1), got {eps_total}")));
    }
    if circuit.n_qubits != config.n_qubits() {
        return Err(Error::input(format!(
            "circuit has {} qubits, chain has {}",
            circuit.n_qubits,
            config.n_qubits()
        )));
    }

    // Pass 1: exact plans, fused within each run of rotations.
    let mut items = Vec::new();
    let mut run: Vec<(usize, RotationLayer)> = Vec::new();
    let flush = |run: &mut Vec<(usize, RotationLayer)>, items: &mut Vec<Item>| {
        items.extend(merge_tagged(run).into_iter().map(|(i, l)| Item::Rotation(i, l)));
        run.clear();
    };
    for (index, element) in circuit.elements.iter().enumerate() {
        match element {
            CircuitElement::Layer(LayerGate::HadamardAll) if !opts.synthesize_hadamard => {
                flush(&mut run, &mut items);
                items.push(Item::Native(Pulse::hadamard()));
            }
            CircuitElement::Layer(gate) => {
                let plan = plan_layer(config, gate).map_err(|e| Error::Layer {
                    index,
                    source: Box::new(e),
                })?;
                run.extend(plan.into_iter().map(|l| (index, l)));
            }
            CircuitElement::MeasureBoundary => {
                flush(&mut run, &mut items);
                items.push(Item::Boundary(PlanStep::MeasureBoundary));
            }
            CircuitElement::PrepareBoundary(b) => {
                flush(&mut run, &mut items);
                items.push(Item::Boundary(PlanStep::PrepareBoundary(*b)));
            }
        }
    }
    flush(&mut run, &mut items);

    let rotations: Vec<RotationLayer> = items
        .iter()
        .filter_map(|it| match it {
            Item::Rotation(_, l) => Some(*l),
            _ => None,
        })
        .collect();
    let count = aligned_pulse_count(&rotations, opts.synth.strategy);
    let per_pulse = split_budget(eps_total, count)?;

    // Pass 2: lower every rotation independently.
    let lowered: Vec<Option<crate::gate_synthesis::Synthesis>> = items
        .par_iter()
        .map(|it| match it {
            Item::Rotation(index, layer) => lower_layers(config, std::slice::from_ref(layer), per_pulse, &opts.synth)
                .map(Some)
                .map_err(|e| Error::Layer {
                    index: *index,
                    source: Box::new(e),
                }),
            _ => Ok(None),
        })
        .collect::<Result<_>>()?;

    let mut plan = Vec::new();
    let mut segment: Vec<Pulse> = Vec::new();
    let mut alignments = Vec::new();
    let close = |segment: &mut Vec<Pulse>, plan: &mut Vec<PlanStep>| -> Result<()> {
        let s = PulseSchedule::from_pulses(std::mem::take(segment))?.simplified();
        if !s.is_empty() {
            plan.push(PlanStep::Pulses(s));
        }
        Ok(())
    };
    for (item, low) in items.into_iter().zip(lowered) {
        match item {
            Item::Rotation(..) => {
                let synth = low.expect("rotation lowered");
                segment.extend(synth.schedule.iter().copied());
                alignments.extend(synth.alignments);
            }
            Item::Native(p) => segment.push(p),
            Item::Boundary(step) => {
                close(&mut segment, &mut plan)?;
                plan.push(step);
            }
        }
    }
    close(&mut segment, &mut plan)?;

    let mut schedule = PulseSchedule::new();
    for step in &plan {
        if let PlanStep::Pulses(s) = step {
            schedule.extend(s);
        }
    }
    Ok(CompilationReport {
        n_qubits: circuit.n_qubits,
        schedule,
        plan,
        alignments,
        epsilon_per_pulse: per_pulse,
        eps_total,
        measured_fidelity: None,
    })
}

/// `[Z t₁, HAD, Z t₂, HAD, …]`: alternating diagonal evolutions and native
/// Hadamard layers. No alignment is involved, so the schedule is exact.
pub fn compile_iqp(times: &[f64], config: &ChainConfig) -> Result<PulseSchedule> {
    let _ = config;
    let mut pulses = Vec::with_capacity(2 * times.len());
    for &t in times {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::input(format!(
                "IQP times must be finite and non-negative, got {t}"
            )));
        }
        pulses.push(Pulse::z(t));
        pulses.push(Pulse::hadamard());
    }
    PulseSchedule::from_pulses(pulses)
}

fn initial_state(circuit: &BroadcastCircuit) -> Result<StateVector> {
    match circuit.init {
        InitialState::Uniform => init_uniform(circuit.n_qubits),
        InitialState::Zero => init_basis(circuit.n_qubits, &vec![false; circuit.n_qubits]),
    }
}

/// Runs the compiled plan on `state`, drawing measurement outcomes from `rng`.
pub fn run_plan(
    state: &mut StateVector,
    config: &ChainConfig,
    plan: &[PlanStep],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<bool>> {
    let mut outcomes = Vec::new();
    for step in plan {
        match step {
            PlanStep::Pulses(s) => apply_schedule(state, config, s)?,
            PlanStep::MeasureBoundary => outcomes.push(measure_boundary_with(state, rng)),
            PlanStep::PrepareBoundary(b) => prepare_boundary_with(state, *b, rng),
        }
    }
    Ok(outcomes)
}

/// Runs the ideal circuit on `state`.
pub fn run_ideal(state: &mut StateVector, circuit: &BroadcastCircuit, rng: &mut ChaCha8Rng) -> Result<Vec<bool>> {
    let mut outcomes = Vec::new();
    for (index, e) in circuit.elements.iter().enumerate() {
        match e {
            CircuitElement::Layer(g) => apply_ideal_layer(state, g).map_err(|e| Error::Layer {
                index,
                source: Box::new(e),
            })?,
            CircuitElement::MeasureBoundary => outcomes.push(measure_boundary_with(state, rng)),
            CircuitElement::PrepareBoundary(b) => prepare_boundary_with(state, *b, rng),
        }
    }
    Ok(outcomes)
}

/// Compares the compiled program against the ideal circuit and stores the
/// result in the report.
///
/// Without boundary actions and for `n ≤ 10` this is `1 − d` with `d` the
/// global-phase-invariant operator distance between the two unitaries.
/// Otherwise both are run from the circuit's initial state (`n ≤ 20`) and
/// the overlap `|⟨ideal|compiled⟩|²` is returned; measurements draw from two
/// identically seeded generators, so both sides follow the same branch
/// whenever their Born probabilities agree closely.
pub fn verify(
    report: &mut CompilationReport,
    circuit: &BroadcastCircuit,
    config: &ChainConfig,
    seed: u64,
) -> Result<f64> {
    let n = circuit.n_qubits;
    if n != config.n_qubits() || n != report.n_qubits {
        return Err(Error::input("circuit, chain and report disagree on the qubit count"));
    }
    let fidelity = if !circuit.has_boundary_actions() && n <= MAX_DENSE_QUBITS {
        let compiled = dense_from_columns(n, |s| apply_schedule(s, config, &report.schedule))?;
        let ideal = dense_from_columns(n, |s| {
            run_ideal(s, circuit, &mut ChaCha8Rng::seed_from_u64(seed)).map(|_| ())
        })?;
        1.0 - unitary_distance(&compiled, &ideal)?
    } else {
        if n > MAX_STATE_VERIFY_QUBITS {
            return Err(Error::input(format!(
                "state-level verification is capped at {MAX_STATE_VERIFY_QUBITS} qubits, got {n}"
            )));
        }
        let mut compiled = initial_state(circuit)?;
        run_plan(
            &mut compiled,
            config,
            &report.plan,
            &mut ChaCha8Rng::seed_from_u64(seed),
        )?;
        let mut ideal = initial_state(circuit)?;
        run_ideal(&mut ideal, circuit, &mut ChaCha8Rng::seed_from_u64(seed))?;
        state_fidelity(&ideal, &compiled)?
    };
    report.measured_fidelity = Some(fidelity);
    Ok(fidelity)
}

/// Schedule file text.
pub fn emit_schedule(schedule: &PulseSchedule) -> String {
    schedule.to_text()
}

/// Execution-plan text: the schedule format plus `MEASURE` and
/// `PREPARE <0|1>` lines between segments. Identical to
/// [`emit_schedule`] when there are no boundary actions.
pub fn emit_plan(plan: &[PlanStep]) -> String {
    let mut s = String::new();
    for step in plan {
        match step {
            PlanStep::Pulses(p) => s.push_str(&p.to_text()),
            PlanStep::MeasureBoundary => s.push_str("MEASURE\n"),
            PlanStep::PrepareBoundary(b) => {
                let _ = writeln!(s, "PREPARE {}", u8::from(*b));
            }
        }
    }
    s
}

/// Parses [`emit_plan`] output (and therefore any plain schedule file).
pub fn parse_plan(text: &str) -> Result<Vec<PlanStep>> {
    let mut plan = Vec::new();
    let mut chunk = String::new();
    let mut chunk_start = 1;
    let flush = |chunk: &mut String, start: usize, plan: &mut Vec<PlanStep>| -> Result<()> {
        if chunk.trim().is_empty() {
            chunk.clear();
            return Ok(());
        }
        let s = PulseSchedule::parse(chunk).map_err(|e| match e {
            Error::Syntax { line, column, message } => Error::Syntax {
                line: line + start - 1,
                column,
                message,
            },
            other => other,
        })?;
        chunk.clear();
        plan.push(PlanStep::Pulses(s));
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = tokens(body);
        match toks.next() {
            Some((_, "MEASURE")) => {
                flush(&mut chunk, chunk_start, &mut plan)?;
                plan.push(PlanStep::MeasureBoundary);
            }
            Some((col, "PREPARE")) => {
                flush(&mut chunk, chunk_start, &mut plan)?;
                let bit = match toks.next() {
                    Some((_, "0")) => false,
                    Some((_, "1")) => true,
                    Some((c, t)) => return Err(Error::syntax(line, c, format!("PREPARE expects 0 or 1, got '{t}'"))),
                    None => return Err(Error::syntax(line, col + 7, "PREPARE needs a bit")),
                };
                plan.push(PlanStep::PrepareBoundary(bit));
            }
            _ => {
                if chunk.is_empty() {
                    chunk_start = line;
                }
                chunk.push_str(raw);
                chunk.push('\n');
                continue;
            }
        }
        if let Some((c, t)) = toks.next() {
            return Err(Error::syntax(line, c, format!("unexpected token '{t}'")));
        }
    }
    flush(&mut chunk, chunk_start, &mut plan)?;
    Ok(plan)
}

/// The 1-D cluster state, from its closed form
/// `2^{-n/2} Σ_z (−1)^{Σ_j z_j z_{j+1}} |z⟩`.
pub fn cluster_state(n: usize) -> Result<StateVector> {
    let dim = 1usize << n;
    let amp = 1.0 / (dim as f64).sqrt();
    let amplitudes = (0..dim)
        .map(|z| {
            let bonds = (z & (z >> 1) & ((1 << (n - 1)) - 1)).count_ones();
            C64::new(if bonds.is_multiple_of(2) { amp } else { -amp }, 0.0)
        })
        .collect();
    StateVector::from_amplitudes(n, amplitudes)
}
