//! Exact rotation plans.
//!
//! A [`RotationLayer`] is `e^{-i Σ_k φ_k H_k}` with every `H_k` written in
//! either the Z or the Y basis. Z layers are single aligned Z pulses; Y layers
//! add the exact X-pulse conjugation around one. Every supported gate layer
//! is first turned into a short list of rotation layers with no
//! approximation, then neighbouring layers of the same basis are fused.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix2, Matrix4};

use super::euler::{euler_zyz, EulerZyz};
use super::kak::kak;
use super::{LayerGate, Parity, Sublattice};
use crate::chain_model::{ChainConfig, Term};
use crate::dd;
use crate::error::Result;
use crate::evolution::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationLayer {
    pub basis: Basis,
    /// Phases on `H_A, H_B, H_AB, H_BA`, kept in `[0, 2π)`.
    pub phases: [f64; 4],
}

const PHASE_TOL: f64 = 1e-12;

/// True if `x` is a multiple of π. Every term has eigenvalues of a fixed
/// parity, so a phase of π on it is a global phase.
pub(crate) fn is_global_phase(x: f64) -> bool {
    let r = x.rem_euclid(PI);
    r < PHASE_TOL || PI - r < PHASE_TOL
}

impl RotationLayer {
    pub fn new(basis: Basis, phases: [f64; 4]) -> Self {
        RotationLayer {
            basis,
            phases: phases.map(dd::wrap_positive),
        }
    }

    pub fn z(phases: [f64; 4]) -> Self {
        Self::new(Basis::Z, phases)
    }

    pub fn y(phases: [f64; 4]) -> Self {
        Self::new(Basis::Y, phases)
    }

    /// Identity up to a global phase.
    pub fn is_trivial(&self) -> bool {
        self.phases.iter().all(|&p| is_global_phase(p))
    }

    /// Terms carrying a phase that is not a global phase.
    pub fn active_terms(&self) -> impl Iterator<Item = Term> + '_ {
        Term::ALL
            .into_iter()
            .filter(|t| !is_global_phase(self.phases[t.index()]))
    }

    fn fused(&self, other: &RotationLayer) -> RotationLayer {
        let mut p = self.phases;
        for (a, b) in p.iter_mut().zip(other.phases) {
            *a += b;
        }
        RotationLayer::new(self.basis, p)
    }
}

/// Fuses neighbouring layers of the same basis and drops trivial ones.
pub fn merge_layers(layers: &[RotationLayer]) -> Vec<RotationLayer> {
    let tagged: Vec<((), RotationLayer)> = layers.iter().map(|l| ((), *l)).collect();
    merge_tagged(&tagged).into_iter().map(|(_, l)| l).collect()
}

/// [`merge_layers`] for layers carrying a tag; a fused layer keeps the tag
/// of its earliest contributor.
pub fn merge_tagged<T: Copy>(layers: &[(T, RotationLayer)]) -> Vec<(T, RotationLayer)> {
    let mut out: Vec<(T, RotationLayer)> = Vec::with_capacity(layers.len());
    for &(tag, layer) in layers {
        if layer.is_trivial() {
            continue;
        }
        match out.last_mut() {
            Some((_, last)) if last.basis == layer.basis => {
                *last = last.fused(&layer);
                if last.is_trivial() {
                    out.pop();
                }
            }
            _ => out.push((tag, layer)),
        }
    }
    out
}

fn slot_index(s: Sublattice) -> usize {
    match s {
        Sublattice::Even => 0,
        Sublattice::Odd => 1,
    }
}

/// Slots of the pair's first and second qubit, and of its coupling.
fn pair_slots(parity: Parity) -> (usize, usize, usize) {
    match parity {
        Parity::AB => (0, 1, 2),
        Parity::BA => (1, 0, 3),
    }
}

/// Z, Y, Z layers realizing simultaneous Euler rotations on the given slots.
fn euler_layers(rotations: &[(usize, EulerZyz)]) -> [RotationLayer; 3] {
    let mut first = [0.0; 4];
    let mut middle = [0.0; 4];
    let mut last = [0.0; 4];
    for &(slot, e) in rotations {
        first[slot] += e.gamma / 2.0;
        middle[slot] += e.beta / 2.0;
        last[slot] += e.alpha / 2.0;
    }
    [
        RotationLayer::z(first),
        RotationLayer::y(middle),
        RotationLayer::z(last),
    ]
}

fn single_qubit_plan(u: &Matrix2<C64>, sub: Sublattice) -> Vec<RotationLayer> {
    euler_layers(&[(slot_index(sub), euler_zyz(u))]).to_vec()
}

/// Diagonal two-qubit gates map directly onto one Z layer:
/// `diag(u) = e^{ig} e^{-i(φ₁ Z₁ + φ₂ Z₂ + φ_p Z₁Z₂)}`.
fn diagonal_phases(u: &Matrix4<C64>) -> Option<[f64; 3]> {
    for r in 0..4 {
        for s in 0..4 {
            if r != s && u[(r, s)].norm() > 1e-12 {
                return None;
            }
        }
    }
    let theta: [f64; 4] = [0, 1, 2, 3].map(|j| u[(j, j)].arg());
    let spin = |bit: usize| if bit == 0 { 1.0 } else { -1.0 };
    let mut phi = [0.0; 3];
    for (j, th) in theta.iter().enumerate() {
        let (s1, s2) = (spin(j >> 1), spin(j & 1));
        phi[0] -= s1 * th / 4.0;
        phi[1] -= s2 * th / 4.0;
        phi[2] -= s1 * s2 * th / 4.0;
    }
    Some(phi)
}

fn two_qubit_plan(u: &Matrix4<C64>, parity: Parity) -> Result<Vec<RotationLayer>> {
    let (first, second, pair) = pair_slots(parity);
    if let Some(phi) = diagonal_phases(u) {
        let mut p = [0.0; 4];
        p[first] = phi[0];
        p[second] = phi[1];
        p[pair] = phi[2];
        return Ok(vec![RotationLayer::z(p)]);
    }
    let k = kak(u)?;
    let mut plan = Vec::with_capacity(9);
    plan.extend(euler_layers(&[(first, euler_zyz(&k.b1)), (second, euler_zyz(&k.b2))]));
    // XX core: Ry(−π/2) maps Z to X under conjugation.
    let mut to_x = [0.0; 4];
    to_x[first] = -FRAC_PI_4;
    to_x[second] = -FRAC_PI_4;
    plan.push(RotationLayer::y(to_x));
    let mut zz = [0.0; 4];
    zz[pair] = k.cx;
    plan.push(RotationLayer::z(zz));
    plan.push(RotationLayer::y(to_x.map(|x| -x)));
    let mut yy = [0.0; 4];
    yy[pair] = k.cy;
    plan.push(RotationLayer::y(yy));
    let mut zz = [0.0; 4];
    zz[pair] = k.cz;
    plan.push(RotationLayer::z(zz));
    plan.extend(euler_layers(&[(first, euler_zyz(&k.a1)), (second, euler_zyz(&k.a2))]));
    Ok(plan)
}

fn layer_rotation(basis: Basis, phi: f64) -> Matrix2<C64> {
    let (s, c) = phi.sin_cos();
    match basis {
        Basis::Z => Matrix2::new(
            C64::from_polar(1.0, -phi),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(1.0, phi),
        ),
        Basis::Y => Matrix2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)),
    }
}

/// Net single-qubit operators the plan leaves on qubit 0 (sublattice A) and
/// on qubit n−1 (sublattice B). Valid only for plans without AB couplings,
/// which never touch either end of the chain otherwise.
fn boundary_residuals(plan: &[RotationLayer]) -> [Matrix2<C64>; 2] {
    let mut out = [Matrix2::identity(), Matrix2::identity()];
    for layer in plan {
        debug_assert!(is_global_phase(layer.phases[2]));
        for (slot, acc) in out.iter_mut().enumerate() {
            *acc = layer_rotation(layer.basis, layer.phases[slot]) * *acc;
        }
    }
    out
}

/// Layers that rotate only qubits 0 and n−1: `e^{-i2θ_A P₀} e^{-i2θ_B P_{n−1}}`.
///
/// Sandwiching the sublattice rotation between two copies of a flip
/// proportional to `Q₀Q_{n−1}` (all bonds at phase π/2, so interior
/// operators cancel pairwise) negates it on the two end qubits only. The
/// rotation followed by its flipped inverse leaves twice the rotation on the
/// ends and nothing in the interior.
fn boundary_block(basis: Basis, theta: [f64; 2]) -> [RotationLayer; 4] {
    let flip_basis = match basis {
        Basis::Z => Basis::Y,
        Basis::Y => Basis::Z,
    };
    let flip = RotationLayer::new(flip_basis, [0.0, 0.0, FRAC_PI_2, FRAC_PI_2]);
    [
        RotationLayer::new(basis, [theta[0], theta[1], 0.0, 0.0]),
        flip,
        RotationLayer::new(basis, [-theta[0], -theta[1], 0.0, 0.0]),
        flip,
    ]
}

fn boundary_correction(plan: &[RotationLayer]) -> Vec<RotationLayer> {
    let residual = boundary_residuals(plan);
    let fix = residual.map(|m| euler_zyz(&m.adjoint()));
    let mut out = Vec::new();
    let steps = [
        (Basis::Z, [fix[0].gamma, fix[1].gamma]),
        (Basis::Y, [fix[0].beta, fix[1].beta]),
        (Basis::Z, [fix[0].alpha, fix[1].alpha]),
    ];
    for (basis, angles) in steps {
        // R(θ) = e^{-iθP/2} needs 2θ_block = θ/2.
        let theta = angles.map(|a| a / 4.0);
        if theta.iter().all(|t| is_global_phase(2.0 * t)) {
            continue;
        }
        out.extend(boundary_block(basis, theta));
    }
    out
}

/// Exact rotation plan for one gate layer, in application order, unmerged.
/// Hadamard layers are included in their synthesized form `Rz(π)` then
/// `Ry(π/2)`.
pub fn plan_layer(config: &ChainConfig, gate: &LayerGate) -> Result<Vec<RotationLayer>> {
    let n = config.n_qubits();
    let plan = match gate {
        LayerGate::ZDiagonal(spec) => vec![RotationLayer::z(spec.phases())],
        LayerGate::YDiagonal(spec) => vec![RotationLayer::y(spec.phases())],
        LayerGate::HadamardAll => vec![
            RotationLayer::z([FRAC_PI_2, FRAC_PI_2, 0.0, 0.0]),
            RotationLayer::y([FRAC_PI_4, FRAC_PI_4, 0.0, 0.0]),
        ],
        LayerGate::SingleQubit { sublattice, unitary } => single_qubit_plan(unitary, *sublattice),
        LayerGate::TwoQubit { parity: Parity::BA, .. } if n == 2 => Vec::new(),
        LayerGate::TwoQubit { parity, unitary } => {
            let mut plan = two_qubit_plan(unitary, *parity)?;
            if *parity == Parity::BA {
                // The ideal layer leaves both chain ends untouched, but the
                // sublattice rotations reach them; undo that there.
                let merged = merge_layers(&plan);
                plan = merged.clone();
                plan.extend(boundary_correction(&merged));
            }
            plan
        }
    };
    Ok(plan)
}
