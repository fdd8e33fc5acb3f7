//! Lowering of translation-invariant gate layers to Z/X pulse schedules.
//!
//! A layer is first rewritten exactly as a short list of rotation layers
//! (see [`plan`]), each of which becomes one aligned Z pulse, wrapped in the
//! X-pulse conjugation `X(5π/4) · Z · X(3π/4)` when it lives in the Y basis.
//! The only approximation is the time alignment of each Z pulse, so a layer
//! built from `m` aligned pulses, each within `ε_p` in operator distance,
//! is within `m·ε_p` of the ideal layer.
//!
//! Single-qubit factors use the Z–Y–Z Euler angles. Two-qubit gates use the
//! canonical decomposition: its local factors become sublattice rotations,
//! the ZZ core is a coupling phase, and the XX and YY cores are the same
//! coupling phase seen through exact basis changes.

pub mod euler;
pub mod kak;
pub mod plan;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Matrix4};

use crate::chain_model::{index_bits, ChainConfig, PhaseTarget, Pulse, PulseSchedule, Term};
use crate::dd;
use crate::error::{Error, Result};
use crate::evolution::{
    apply_hadamard_layer, apply_single_qubit, apply_two_qubit, init_basis, StateVector, C64, MAX_DENSE_QUBITS,
};
use crate::phase_align::{find_time_grid, find_time_lattice, AlignmentResult};

pub use plan::{merge_layers, merge_tagged, plan_layer, Basis, RotationLayer};

/// X-pulse durations that turn a Z evolution into the Y-basis evolution:
/// `e^{-i(3π/4)X} e^{-itH_Z} e^{-i(5π/4)X} = e^{-itH_Y}`. The right-hand
/// factor acts first, so the entry pulse is the 5π/4 one.
pub const Y_ENTRY: f64 = 5.0 * PI / 4.0;
pub const Y_EXIT: f64 = 3.0 * PI / 4.0;

/// Smallest per-pulse budget accepted by the layer and circuit compilers.
pub const SOLVER_FLOOR: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Pairs `(2j, 2j+1)`.
    AB,
    /// Pairs `(2j+1, 2j+2)`.
    BA,
}

impl Parity {
    pub fn pair_term(self) -> Term {
        match self {
            Parity::AB => Term::AB,
            Parity::BA => Term::BA,
        }
    }

    /// `(first, second)` qubit of every pair of this parity in an
    /// `n`-qubit chain.
    pub fn pairs(self, n: usize) -> impl Iterator<Item = (usize, usize)> {
        let start = match self {
            Parity::AB => 0,
            Parity::BA => 1,
        };
        (start..n.saturating_sub(1)).step_by(2).map(|j| (j, j + 1))
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::AB => "ab",
            Parity::BA => "ba",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(Parity::AB),
            "ba" => Ok(Parity::BA),
            _ => Err(Error::input(format!("unknown parity '{s}' (expected ab or ba)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sublattice {
    Even,
    Odd,
}

impl Sublattice {
    pub fn qubits(self, n: usize) -> impl Iterator<Item = usize> {
        let start = match self {
            Sublattice::Even => 0,
            Sublattice::Odd => 1,
        };
        (start..n).step_by(2)
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sublattice::Even => "even",
            Sublattice::Odd => "odd",
        })
    }
}

impl FromStr for Sublattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Sublattice::Even),
            "odd" => Ok(Sublattice::Odd),
            _ => Err(Error::input(format!("unknown sublattice '{s}' (expected even or odd)"))),
        }
    }
}

/// `e^{-i(φ_A H_A + φ_B H_B + φ_pair H_pair)}` with `H_pair` the coupling of
/// the given parity. The terms act on whole sublattices, chain ends included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalLayerSpec {
    pub parity: Parity,
    pub phi_a: f64,
    pub phi_b: f64,
    pub phi_pair: f64,
    /// Operator-distance budget for each aligned pulse.
    pub epsilon: f64,
}

impl DiagonalLayerSpec {
    pub fn new(parity: Parity, phi_a: f64, phi_b: f64, phi_pair: f64, epsilon: f64) -> Result<Self> {
        for (name, v) in [("phi_a", phi_a), ("phi_b", phi_b), ("phi_pair", phi_pair)] {
            if !v.is_finite() {
                return Err(Error::input(format!("{name} must be finite, got {v}")));
            }
        }
        check_epsilon(epsilon)?;
        Ok(DiagonalLayerSpec {
            parity,
            phi_a: dd::wrap_positive(phi_a),
            phi_b: dd::wrap_positive(phi_b),
            phi_pair: dd::wrap_positive(phi_pair),
            epsilon,
        })
    }

    /// Phases on `H_A, H_B, H_AB, H_BA`.
    pub fn phases(&self) -> [f64; 4] {
        let mut p = [self.phi_a, self.phi_b, 0.0, 0.0];
        p[self.parity.pair_term().index()] = self.phi_pair;
        p
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::input(format!("epsilon must be positive, got {eps}")));
    }
    Ok(())
}

/// A translation-invariant gate layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LayerGate {
    /// The same single-qubit gate on every qubit of a sublattice.
    SingleQubit {
        sublattice: Sublattice,
        unitary: Matrix2<C64>,
    },
    /// The same two-qubit gate on every pair of a parity; qubits not in any
    /// pair are left alone.
    TwoQubit {
        parity: Parity,
        unitary: Matrix4<C64>,
    },
    HadamardAll,
    ZDiagonal(DiagonalLayerSpec),
    YDiagonal(DiagonalLayerSpec),
}

const UNITARY_TOL: f64 = 1e-8;

macro_rules! special_unitary_fn {
    ($name:ident, $mat:ty, $dim:expr) => {
        /// Checks unitarity to 1e-8, then snaps to the nearest unitary
        /// (polar factor) with determinant 1.
        fn $name(m: &$mat) -> Result<$mat> {
            let err = (m.adjoint() * m - <$mat>::identity()).map(|z| z.norm()).max();
            if !err.is_finite() || err > UNITARY_TOL {
                return Err(Error::input(format!("matrix is not unitary (deviation {err:e})")));
            }
            let svd = m.svd(true, true);
            let u = svd.u.unwrap() * svd.v_t.unwrap();
            let det = u.determinant();
            Ok(u * C64::from_polar(1.0, -det.arg() / $dim))
        }
    };
}

special_unitary_fn!(special_unitary_2, Matrix2<C64>, 2.0);
special_unitary_fn!(special_unitary_4, Matrix4<C64>, 4.0);

impl LayerGate {
    pub fn single_qubit(sublattice: Sublattice, unitary: Matrix2<C64>) -> Result<Self> {
        Ok(LayerGate::SingleQubit {
            sublattice,
            unitary: special_unitary_2(&unitary)?,
        })
    }

    pub fn two_qubit(parity: Parity, unitary: Matrix4<C64>) -> Result<Self> {
        Ok(LayerGate::TwoQubit {
            parity,
            unitary: special_unitary_4(&unitary)?,
        })
    }

    /// Controlled-Z on every pair of the parity.
    pub fn cz(parity: Parity) -> Self {
        let one = C64::new(1.0, 0.0);
        let cz = Matrix4::from_diagonal(&nalgebra::Vector4::new(one, one, one, -one));
        LayerGate::two_qubit(parity, cz).expect("CZ is unitary")
    }

    pub fn is_hadamard(&self) -> bool {
        matches!(self, LayerGate::HadamardAll)
    }
}

fn z_phase(phi: f64) -> Matrix2<C64> {
    Matrix2::new(
        C64::from_polar(1.0, -phi),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::from_polar(1.0, phi),
    )
}

fn y_phase(phi: f64) -> Matrix2<C64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
}

/// `e^{-iφ P⊗P}` for P = Z or Y.
fn pair_phase(basis: Basis, phi: f64) -> Matrix4<C64> {
    let p = match basis {
        Basis::Z => kak::pauli2('Z'),
        Basis::Y => kak::pauli2('Y'),
    };
    let pp = kak::kron2(&p, &p);
    Matrix4::identity() * C64::new(phi.cos(), 0.0) - pp * C64::new(0.0, phi.sin())
}

/// Applies a rotation layer exactly, gate by gate.
pub fn apply_rotation_layer(state: &mut StateVector, layer: &RotationLayer) -> Result<()> {
    let n = state.n_qubits();
    let single = match layer.basis {
        Basis::Z => z_phase,
        Basis::Y => y_phase,
    };
    for (slot, sub) in [(0, Sublattice::Even), (1, Sublattice::Odd)] {
        let m = single(layer.phases[slot]);
        for q in sub.qubits(n) {
            apply_single_qubit(state, q, &m)?;
        }
    }
    for (slot, parity) in [(2, Parity::AB), (3, Parity::BA)] {
        let m = pair_phase(layer.basis, layer.phases[slot]);
        for (a, b) in parity.pairs(n) {
            apply_two_qubit(state, a, b, &m)?;
        }
    }
    Ok(())
}

/// Applies the ideal layer, gate by gate.
pub fn apply_ideal_layer(state: &mut StateVector, gate: &LayerGate) -> Result<()> {
    let n = state.n_qubits();
    match gate {
        LayerGate::HadamardAll => apply_hadamard_layer(state),
        LayerGate::SingleQubit { sublattice, unitary } => {
            for q in sublattice.qubits(n) {
                apply_single_qubit(state, q, unitary)?;
            }
        }
        LayerGate::TwoQubit { parity, unitary } => {
            for (a, b) in parity.pairs(n) {
                apply_two_qubit(state, a, b, unitary)?;
            }
        }
        LayerGate::ZDiagonal(spec) => apply_rotation_layer(state, &RotationLayer::z(spec.phases()))?,
        LayerGate::YDiagonal(spec) => apply_rotation_layer(state, &RotationLayer::y(spec.phases()))?,
    }
    Ok(())
}

/// Dense unitary of a sequence of state maps, built column by column.
pub(crate) fn dense_from_columns<F>(n: usize, mut apply: F) -> Result<DMatrix<C64>>
where
    F: FnMut(&mut StateVector) -> Result<()>,
{
    if n > MAX_DENSE_QUBITS {
        return Err(Error::input(format!(
            "dense matrices are capped at {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for col in 0..dim {
        let mut s = init_basis(n, &index_bits(n, col))?;
        apply(&mut s)?;
        out.set_column(col, &nalgebra::DVector::from_column_slice(s.amplitudes()));
    }
    Ok(out)
}

/// Dense ideal unitary of one layer on an `n`-qubit chain (`n ≤ 10`).
pub fn ideal_layer_unitary(n: usize, gate: &LayerGate) -> Result<DMatrix<C64>> {
    dense_from_columns(n, |s| apply_ideal_layer(s, gate))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    /// One aligned pulse per rotation layer, hitting all its phases at once.
    #[default]
    Combined,
    /// One aligned pulse per active term, isolating it.
    PerTerm,
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum SolverChoice {
    #[default]
    Lattice,
    /// Earliest-time scan; `dt` defaults to 90% of the largest safe step.
    Grid { t_max: f64, dt: Option<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SynthOptions {
    pub strategy: Strategy,
    pub solver: SolverChoice,
}

/// A lowered schedule together with its error accounting.
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis {
    pub schedule: PulseSchedule,
    /// One entry per aligned Z pulse, in schedule order.
    pub alignments: Vec<AlignmentResult>,
    pub epsilon_per_pulse: f64,
}

impl Synthesis {
    pub fn aligned_pulses(&self) -> usize {
        self.alignments.len()
    }

    /// Upper bound on the operator distance to the ideal layer.
    pub fn predicted_error(&self) -> f64 {
        self.alignments.len() as f64 * self.epsilon_per_pulse
    }
}

/// Phase tolerance handed to the aligner so that the pulse is within
/// `eps_pulse` of its target in operator distance.
///
/// A residual `δ_k` on term `k` shifts the phase of a basis state by
/// `δ_k·T_k`, and `Σ_k |T_k| ≤ 2n − 1`; with `|δ_k| < ε/4` the mismatch is
/// at most `(ε/4)(2n − 1)`.
pub fn alignment_epsilon(config: &ChainConfig, eps_pulse: f64) -> f64 {
    let weight: u32 = config.term_bounds().iter().sum();
    (4.0 * eps_pulse / weight as f64).min(3.0)
}

pub fn aligned_pulse_count(layers: &[RotationLayer], strategy: Strategy) -> usize {
    layers
        .iter()
        .map(|l| match strategy {
            Strategy::Combined => usize::from(!l.is_trivial()),
            Strategy::PerTerm => l.active_terms().count(),
        })
        .sum()
}

/// Even split of a layer or circuit budget across its aligned pulses.
pub fn split_budget(eps_total: f64, pulses: usize) -> Result<f64> {
    check_epsilon(eps_total)?;
    if pulses == 0 {
        return Ok(eps_total);
    }
    let per_pulse = eps_total / pulses as f64;
    if per_pulse < SOLVER_FLOOR {
        return Err(Error::BudgetTooTight {
            per_pulse,
            floor: SOLVER_FLOOR,
            pulses,
        });
    }
    Ok(per_pulse)
}

fn align(config: &ChainConfig, target: &PhaseTarget, solver: SolverChoice) -> Result<AlignmentResult> {
    match solver {
        SolverChoice::Lattice => find_time_lattice(&config.couplings, target),
        SolverChoice::Grid { t_max, dt } => {
            let dt = dt.unwrap_or(0.9 * target.tolerance() / config.couplings.max());
            find_time_grid(&config.couplings, target, t_max, dt)
        }
    }
}

/// Lowers rotation layers to pulses with the given per-pulse budget.
pub fn lower_layers(
    config: &ChainConfig,
    layers: &[RotationLayer],
    eps_pulse: f64,
    opts: &SynthOptions,
) -> Result<Synthesis> {
    check_epsilon(eps_pulse)?;
    let eps_align = alignment_epsilon(config, eps_pulse);
    let mut pulses = Vec::new();
    let mut alignments = Vec::new();
    for layer in layers {
        if layer.is_trivial() {
            continue;
        }
        let targets: Vec<PhaseTarget> = match opts.strategy {
            Strategy::Combined => vec![PhaseTarget::new(layer.phases, eps_align)?],
            Strategy::PerTerm => layer
                .active_terms()
                .map(|t| PhaseTarget::isolating(t, layer.phases[t.index()], eps_align))
                .collect::<Result<_>>()?,
        };
        if layer.basis == Basis::Y {
            pulses.push(Pulse::x(Y_ENTRY));
        }
        for target in &targets {
            let hit = align(config, target, opts.solver)?;
            pulses.push(Pulse::z(hit.time));
            alignments.push(hit);
        }
        if layer.basis == Basis::Y {
            pulses.push(Pulse::x(Y_EXIT));
        }
    }
    Ok(Synthesis {
        schedule: PulseSchedule::from_pulses(pulses)?.simplified(),
        alignments,
        epsilon_per_pulse: eps_pulse,
    })
}

/// `e^{-i(φ_A H_A + φ_B H_B + φ_pair H_pair)}` as aligned Z pulses, each
/// within `spec.epsilon`.
pub fn synth_z_diag_layer(config: &ChainConfig, spec: &DiagonalLayerSpec, opts: &SynthOptions) -> Result<Synthesis> {
    lower_layers(
        config,
        &merge_layers(&[RotationLayer::z(spec.phases())]),
        spec.epsilon,
        opts,
    )
}

/// The Y-basis version of [`synth_z_diag_layer`]; the conjugation is exact.
pub fn synth_y_diag_layer(config: &ChainConfig, spec: &DiagonalLayerSpec, opts: &SynthOptions) -> Result<Synthesis> {
    lower_layers(
        config,
        &merge_layers(&[RotationLayer::y(spec.phases())]),
        spec.epsilon,
        opts,
    )
}

/// `u` on every qubit of a sublattice, at most three aligned pulses each
/// within `eps_pulse`.
pub fn synth_single_qubit_layer(
    config: &ChainConfig,
    u: &Matrix2<C64>,
    sublattice: Sublattice,
    eps_pulse: f64,
    opts: &SynthOptions,
) -> Result<Synthesis> {
    let gate = LayerGate::single_qubit(sublattice, *u)?;
    let layers = merge_layers(&plan_layer(config, &gate)?);
    lower_layers(config, &layers, eps_pulse, opts)
}

/// `u` on every pair of a parity, with `eps_total` split evenly over the
/// aligned pulses.
pub fn synth_two_qubit_layer(
    config: &ChainConfig,
    u: &Matrix4<C64>,
    parity: Parity,
    eps_total: f64,
    opts: &SynthOptions,
) -> Result<Synthesis> {
    synth_layer(config, &LayerGate::two_qubit(parity, *u)?, eps_total, opts)
}

/// Any layer, with `eps_total` split evenly over its aligned pulses.
pub fn synth_layer(config: &ChainConfig, gate: &LayerGate, eps_total: f64, opts: &SynthOptions) -> Result<Synthesis> {
    let layers = merge_layers(&plan_layer(config, gate)?);
    let per_pulse = split_budget(eps_total, aligned_pulse_count(&layers, opts.strategy))?;
    lower_layers(config, &layers, per_pulse, opts)
}
