//! Exact statevector execution of pulse schedules, plus dense-matrix
//! references used for verification.
//!
//! Qubit `j` is bit `j` of the basis index, so qubit 0 (the boundary qubit)
//! is the least significant bit.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain_model::{index_bits, term_energy, ChainConfig, Generator, Pulse, PulseSchedule, Term, TermMasks};
use crate::dd;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest chain a [`StateVector`] may hold.
pub const MAX_STATE_QUBITS: usize = 24;
/// Largest chain for which dense `2^n × 2^n` matrices are built.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Below this many amplitudes the kernels stay on one thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) || n > MAX_STATE_QUBITS {
        return Err(Error::input(format!(
            "qubit count must be even and in [2, {MAX_STATE_QUBITS}], got {n}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// Wraps raw amplitudes; the vector must have length `2^n` and unit norm
    /// to within 1e-8.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_size(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::input(format!(
                "expected {} amplitudes for {n_qubits} qubits, got {}",
                1usize << n_qubits,
                amplitudes.len()
            )));
        }
        let s = StateVector { n_qubits, amplitudes };
        if (s.norm_sqr() - 1.0).abs() > 1e-8 {
            return Err(Error::input(format!("state norm² is {}, not 1", s.norm_sqr())));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that qubit `q` reads 1.
    pub fn probability_one(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn is_large(&self) -> bool {
        self.amplitudes.len() >= PARALLEL_THRESHOLD
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::input(format!(
                "qubit {q} out of range for a {}-qubit state",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

/// `2^{-n/2} Σ_j |j⟩`.
pub fn init_uniform(n: usize) -> Result<StateVector> {
    check_size(n)?;
    let dim = 1usize << n;
    let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(StateVector {
        n_qubits: n,
        amplitudes: vec![a; dim],
    })
}

/// The computational basis state with qubit `j` set to `bits[j]`.
pub fn init_basis(n: usize, bits: &[bool]) -> Result<StateVector> {
    check_size(n)?;
    if bits.len() != n {
        return Err(Error::input(format!(
            "bit string has length {}, expected {n}",
            bits.len()
        )));
    }
    let mut amplitudes = vec![ZERO; 1 << n];
    amplitudes[crate::chain_model::bits_index(bits)] = ONE;
    Ok(StateVector {
        n_qubits: n,
        amplitudes,
    })
}

fn check_config(state: &StateVector, config: &ChainConfig) -> Result<()> {
    if state.n_qubits != config.n_qubits() {
        return Err(Error::input(format!(
            "state has {} qubits, chain has {}",
            state.n_qubits,
            config.n_qubits()
        )));
    }
    Ok(())
}

/// Per-term phase tables: `tables[k][c]` is `e^{-i r_k (bound_k - 2c)}`
/// where `r_k` is `c_k t` reduced mod 2π and `c` the flipped count.
fn z_phase_tables(config: &ChainConfig, t: f64) -> [Vec<C64>; 4] {
    let c = config.couplings.as_array();
    let bounds = config.term_bounds();
    std::array::from_fn(|k| {
        let r = dd::reduce_product(c[k], t);
        let b = bounds[k] as i64;
        (0..=b)
            .map(|cnt| {
                let v = (b - 2 * cnt) as f64;
                C64::from_polar(1.0, -dd::wrap(r * v))
            })
            .collect()
    })
}

/// Multiplies each amplitude by `e^{-itE(z)}`.
pub fn apply_z_evolution(state: &mut StateVector, config: &ChainConfig, t: f64) -> Result<()> {
    check_config(state, config)?;
    if !t.is_finite() {
        return Err(Error::input(format!("duration must be finite, got {t}")));
    }
    let tables = z_phase_tables(config, t);
    let masks = TermMasks::new(state.n_qubits);
    let kernel = |(i, a): (usize, &mut C64)| {
        let cnt = masks.counts(i);
        let phase = tables[0][cnt[0] as usize]
            * tables[1][cnt[1] as usize]
            * tables[2][cnt[2] as usize]
            * tables[3][cnt[3] as usize];
        *a *= phase;
    };
    if state.is_large() {
        state.amplitudes.par_iter_mut().enumerate().for_each(kernel);
    } else {
        state.amplitudes.iter_mut().enumerate().for_each(kernel);
    }
    Ok(())
}

/// Applies `m` to every `(a, b)` pair of amplitudes that differ only in bit
/// `q`, with `a` the bit-0 member.
fn pair_kernel(state: &mut StateVector, q: usize, m: [[C64; 2]; 2]) {
    let stride = 1usize << q;
    let block = |chunk: &mut [C64]| {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    };
    if state.is_large() {
        state.amplitudes.par_chunks_mut(2 * stride).for_each(block);
    } else {
        state.amplitudes.chunks_mut(2 * stride).for_each(block);
    }
}

/// Applies `e^{-iτX}` to every qubit.
pub fn apply_x_evolution(state: &mut StateVector, tau: f64) -> Result<()> {
    if !tau.is_finite() {
        return Err(Error::input(format!("duration must be finite, got {tau}")));
    }
    let r = dd::wrap(tau);
    let (s, c) = r.sin_cos();
    let m = [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ];
    for q in 0..state.n_qubits {
        pair_kernel(state, q, m);
    }
    Ok(())
}

pub fn apply_hadamard_layer(state: &mut StateVector) {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let m = [[h, h], [h, -h]];
    for q in 0..state.n_qubits {
        pair_kernel(state, q, m);
    }
}

/// Applies a 2×2 unitary to qubit `q`.
pub fn apply_single_qubit(state: &mut StateVector, q: usize, u: &Matrix2<C64>) -> Result<()> {
    state.check_qubit(q)?;
    pair_kernel(state, q, [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]);
    Ok(())
}

/// Applies a 4×4 unitary to qubits `(first, second)`; the matrix index is
/// `2·bit(first) + bit(second)`.
pub fn apply_two_qubit(state: &mut StateVector, first: usize, second: usize, u: &Matrix4<C64>) -> Result<()> {
    state.check_qubit(first)?;
    state.check_qubit(second)?;
    if first == second {
        return Err(Error::input("two-qubit gate needs distinct qubits"));
    }
    let (bf, bs) = (1usize << first, 1usize << second);
    let dim = state.amplitudes.len();
    let amps = &mut state.amplitudes;
    for base in 0..dim {
        if base & (bf | bs) != 0 {
            continue;
        }
        let idx = [base, base | bs, base | bf, base | bf | bs];
        let v = idx.map(|i| amps[i]);
        for r in 0..4 {
            amps[idx[r]] = (0..4).map(|c| u[(r, c)] * v[c]).sum();
        }
    }
    Ok(())
}

pub fn apply_pulse(state: &mut StateVector, config: &ChainConfig, pulse: &Pulse) -> Result<()> {
    match pulse.generator {
        Generator::ZEvolution => apply_z_evolution(state, config, pulse.duration),
        Generator::XEvolution => apply_x_evolution(state, pulse.duration),
        Generator::HadamardLayer => {
            apply_hadamard_layer(state);
            Ok(())
        }
    }
}

/// Applies the pulses in list order.
pub fn apply_schedule(state: &mut StateVector, config: &ChainConfig, schedule: &PulseSchedule) -> Result<()> {
    check_config(state, config)?;
    for p in schedule.iter() {
        apply_pulse(state, config, p)?;
    }
    Ok(())
}

fn check_dense(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::input(format!(
            "dense matrices are capped at {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

/// Dense matrix of one pulse, built entry by entry from closed forms.
pub fn pulse_unitary(config: &ChainConfig, pulse: &Pulse) -> Result<DMatrix<C64>> {
    let n = config.n_qubits();
    check_dense(n)?;
    let dim = 1usize << n;
    let m = match pulse.generator {
        Generator::ZEvolution => {
            let c = config.couplings.as_array();
            let reduced: Vec<f64> = c.iter().map(|&ck| dd::reduce_product(ck, pulse.duration)).collect();
            let mut diag = Vec::with_capacity(dim);
            for z in 0..dim {
                let bits = index_bits(n, z);
                let mut phase = 0.0;
                for term in Term::ALL {
                    let v = term_energy(config, term, &bits)? as f64;
                    phase += reduced[term.index()] * v;
                }
                diag.push(C64::from_polar(1.0, -phase));
            }
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
        }
        Generator::XEvolution => {
            let (s, c) = dd::wrap(pulse.duration).sin_cos();
            let off = C64::new(0.0, -s);
            DMatrix::from_fn(dim, dim, |a, b| {
                let h = (a ^ b).count_ones() as i32;
                C64::new(c.powi(n as i32 - h), 0.0) * off.powi(h)
            })
        }
        Generator::HadamardLayer => {
            let scale = FRAC_1_SQRT_2.powi(n as i32);
            DMatrix::from_fn(dim, dim, |a, b| {
                let sign = if (a & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                C64::new(sign * scale, 0.0)
            })
        }
    };
    Ok(m)
}

/// Full matrix product of a schedule (`n ≤ 10`).
pub fn schedule_unitary(config: &ChainConfig, schedule: &PulseSchedule) -> Result<DMatrix<C64>> {
    let n = config.n_qubits();
    check_dense(n)?;
    let dim = 1usize << n;
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for p in schedule.iter() {
        let m = pulse_unitary(config, p)?;
        u = if p.generator == Generator::ZEvolution {
            // Diagonal: scale rows instead of a full product.
            let mut out = u;
            for (r, mut row) in out.row_iter_mut().enumerate() {
                row *= m[(r, r)];
            }
            out
        } else {
            m * u
        };
    }
    Ok(u)
}

/// Projective Z-measurement of qubit 0 with a seeded generator. The state
/// collapses in place; the outcome is returned.
pub fn measure_boundary(state: &mut StateVector, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_boundary_with(state, &mut rng)
}

/// As [`measure_boundary`], drawing from a caller-supplied generator.
pub fn measure_boundary_with<R: Rng + ?Sized>(state: &mut StateVector, rng: &mut R) -> bool {
    let p1 = state.probability_one(0);
    let u: f64 = rng.random();
    let outcome = u < p1;
    let keep = if outcome { p1 } else { 1.0 - p1 };
    let scale = 1.0 / keep.sqrt();
    for (i, a) in state.amplitudes.iter_mut().enumerate() {
        if (i & 1 == 1) == outcome {
            *a *= scale;
        } else {
            *a = ZERO;
        }
    }
    outcome
}

/// Measures qubit 0 and flips it if the outcome differs from `bit`.
pub fn prepare_boundary(state: &mut StateVector, bit: bool, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    prepare_boundary_with(state, bit, &mut rng);
}

pub fn prepare_boundary_with<R: Rng + ?Sized>(state: &mut StateVector, bit: bool, rng: &mut R) {
    if measure_boundary_with(state, rng) != bit {
        pair_kernel(state, 0, [[ZERO, ONE], [ONE, ZERO]]);
    }
}

/// `|⟨a|b⟩|²`.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.amplitudes.len() != b.amplitudes.len() {
        return Err(Error::input("states have different dimensions"));
    }
    let overlap: C64 = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm_sqr().min(1.0))
}

/// `min_θ ‖U − e^{iθ}V‖` in the operator norm.
///
/// With `W = V†U` (unitary), the norm equals `max_j |λ_j − e^{iθ}|` over the
/// eigenvalues of `W`. The optimal `θ` sits in the middle of the shortest arc
/// of the unit circle that covers every eigenphase; for an arc of length `L`
/// the distance is `2 sin(L/4)`.
pub fn unitary_distance(u: &DMatrix<C64>, v: &DMatrix<C64>) -> Result<f64> {
    if u.shape() != v.shape() || u.nrows() != u.ncols() {
        return Err(Error::input(format!(
            "cannot compare {:?} with {:?}",
            u.shape(),
            v.shape()
        )));
    }
    let w = v.adjoint() * u;
    // A pair of distinct eigenphases can collide in one Hermitian
    // combination but not in all three; a collision only ever shrinks the
    // covering arc, so the largest arc is the true one.
    let arc = [0.5f64, 1.7, 2.9]
        .iter()
        .map(|&angle| covering_arc(&unitary_eigenphases(&w, angle)))
        .fold(0.0, f64::max);
    Ok(2.0 * (arc / 4.0).sin())
}

/// Eigenphases of a unitary `w`. Unitaries are normal, so the eigenvectors
/// of the Hermitian matrix `cos a·(W+W†)/2 + sin a·(W−W†)/2i` also
/// diagonalize `W`; each phase is read back as a Rayleigh quotient.
fn unitary_eigenphases(w: &DMatrix<C64>, angle: f64) -> Vec<f64> {
    let wd = w.adjoint();
    let re = (w + &wd) * C64::new(0.5, 0.0);
    let im = (w - &wd) * C64::new(0.0, -0.5);
    let h = re * C64::new(angle.cos(), 0.0) + im * C64::new(angle.sin(), 0.0);
    let vecs = h.symmetric_eigen().eigenvectors;
    vecs.column_iter()
        .map(|col| (col.adjoint() * w * col)[(0, 0)].arg())
        .collect()
}

/// Length of the shortest arc of the unit circle containing every phase.
fn covering_arc(phases: &[f64]) -> f64 {
    let mut phases = phases.to_vec();
    phases.sort_by(f64::total_cmp);
    let tau = std::f64::consts::TAU;
    let mut largest_gap = phases[0] + tau - phases[phases.len() - 1];
    for pair in phases.windows(2) {
        largest_gap = largest_gap.max(pair[1] - pair[0]);
    }
    (tau - largest_gap).max(0.0)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::chain_model::FrequencySet;
    use rand::Rng;
    use std::f64::consts::PI;

    pub(crate) fn pauli(which: char) -> DMatrix<C64> {
        let (a, b, c, d) = match which {
            'I' => (ONE, ZERO, ZERO, ONE),
            'X' => (ZERO, ONE, ONE, ZERO),
            'Y' => (ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO),
            'Z' => (ONE, ZERO, ZERO, -ONE),
            _ => unreachable!(),
        };
        DMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    /// Tensor product with qubit 0 as the rightmost factor, matching the
    /// bit convention: `ops[j]` acts on qubit `j`.
    pub(crate) fn kron_all(ops: &[DMatrix<C64>]) -> DMatrix<C64> {
        let mut out = DMatrix::<C64>::identity(1, 1);
        for op in ops.iter().rev() {
            out = out.kronecker(op);
        }
        out
    }

    pub(crate) fn pauli_string(n: usize, sites: &[(usize, char)]) -> DMatrix<C64> {
        let ops: Vec<_> = (0..n)
            .map(|j| {
                let c = sites.iter().find(|s| s.0 == j).map(|s| s.1).unwrap_or('I');
                pauli(c)
            })
            .collect();
        kron_all(&ops)
    }

    /// `H_Z` (or its Y-basis version) built from explicit Pauli products.
    pub(crate) fn dense_chain_hamiltonian(config: &ChainConfig, p: char) -> DMatrix<C64> {
        let n = config.n_qubits();
        let c = config.couplings;
        let dim = 1 << n;
        let mut h = DMatrix::<C64>::zeros(dim, dim);
        for j in 0..n {
            let w = if j.is_multiple_of(2) { c.omega_a } else { c.omega_b };
            h += pauli_string(n, &[(j, p)]) * C64::new(w, 0.0);
            if j + 1 < n {
                let g = if j.is_multiple_of(2) { c.gamma_ab } else { c.gamma_ba };
                h += pauli_string(n, &[(j, p), (j + 1, p)]) * C64::new(g, 0.0);
            }
        }
        h
    }

    /// `e^{-itH}` for Hermitian `H`, via its eigendecomposition.
    pub(crate) fn expm_minus_i(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
        let eig = h.clone().symmetric_eigen();
        let phases = eig.eigenvalues.map(|l| C64::from_polar(1.0, -t * l));
        &eig.eigenvectors * DMatrix::from_diagonal(&phases) * eig.eigenvectors.adjoint()
    }

    fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
        let mut v: Vec<C64> = (0..1 << n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        StateVector::from_amplitudes(n, v).unwrap()
    }

    fn max_dev(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn apply_dense(m: &DMatrix<C64>, s: &StateVector) -> Vec<C64> {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        (m * v).iter().copied().collect()
    }

    #[test]
    fn init_examples() {
        let s = init_uniform(2).unwrap();
        assert!(s.amplitudes().iter().all(|a| (*a - C64::new(0.5, 0.0)).norm() < 1e-15));
        let s = init_uniform(4).unwrap();
        assert!(s.amplitudes().iter().all(|a| (*a - C64::new(0.25, 0.0)).norm() < 1e-15));
        assert!(init_uniform(3).is_err());
        assert!(init_uniform(26).is_err());

        assert_eq!(init_basis(2, &[false, false]).unwrap().amplitudes()[0], ONE);
        // qubit 1 set → index 2
        assert_eq!(init_basis(2, &[false, true]).unwrap().amplitudes()[2], ONE);
        assert_eq!(init_basis(4, &[false; 4]).unwrap().amplitudes()[0], ONE);
        assert!(init_basis(2, &[false]).is_err());
    }

    #[test]
    fn z_evolution_examples() {
        let cfg = ChainConfig::with_defaults(2).unwrap();
        let mut s = init_uniform(2).unwrap();
        let before = s.clone();
        apply_z_evolution(&mut s, &cfg, 0.0).unwrap();
        assert!(max_dev(s.amplitudes(), before.amplitudes()) < 1e-15);

        let mut s = init_basis(2, &[false, false]).unwrap();
        apply_z_evolution(&mut s, &cfg, 1.0).unwrap();
        let e = 1.0 + 2f64.sqrt() + 3f64.sqrt();
        assert!((s.amplitudes()[0] - C64::from_polar(1.0, -e)).norm() < 1e-14);

        let cfg4 = ChainConfig::with_defaults(4).unwrap();
        let mut s = init_uniform(4).unwrap();
        let reference = apply_dense(&expm_minus_i(&dense_chain_hamiltonian(&cfg4, 'Z'), 0.7), &s);
        apply_z_evolution(&mut s, &cfg4, 0.7).unwrap();
        assert!(max_dev(s.amplitudes(), &reference) < 1e-10);

        let cfg6 = ChainConfig::with_defaults(6).unwrap();
        assert!(apply_z_evolution(&mut s, &cfg6, 1.0).is_err());
    }

    #[test]
    fn z_evolution_composes() {
        let cfg = ChainConfig::new(4, FrequencySet::from_array([0.9, 1.3, 2.1, 0.4]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s0 = random_state(4, &mut rng);
        let mut a = s0.clone();
        apply_z_evolution(&mut a, &cfg, 1.25).unwrap();
        apply_z_evolution(&mut a, &cfg, 3.5e7).unwrap();
        let mut b = s0;
        apply_z_evolution(&mut b, &cfg, 1.25 + 3.5e7).unwrap();
        assert!(max_dev(a.amplitudes(), b.amplitudes()) < 1e-8);
    }

    #[test]
    fn x_evolution_examples() {
        let mut s = init_basis(2, &[false, false]).unwrap();
        apply_x_evolution(&mut s, PI / 2.0).unwrap();
        assert!((s.amplitudes()[3] + ONE).norm() < 1e-15);

        let cfg = ChainConfig::with_defaults(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut s = random_state(4, &mut rng);
        let mut hx = DMatrix::<C64>::zeros(16, 16);
        for j in 0..4 {
            hx += pauli_string(4, &[(j, 'X')]);
        }
        let reference = apply_dense(&expm_minus_i(&hx, 0.3), &s);
        apply_x_evolution(&mut s, 0.3).unwrap();
        assert!(max_dev(s.amplitudes(), &reference) < 1e-10);

        // τ = π is −I on each qubit: identity up to phase.
        let period = schedule_unitary(&cfg, &PulseSchedule::from_pulses(vec![Pulse::x(PI)]).unwrap()).unwrap();
        let id = DMatrix::<C64>::identity(16, 16);
        assert!(unitary_distance(&period, &id).unwrap() < 1e-10);
    }

    #[test]
    fn hadamard_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s0 = random_state(4, &mut rng);
        let mut s = s0.clone();
        apply_hadamard_layer(&mut s);
        apply_hadamard_layer(&mut s);
        assert!(max_dev(s.amplitudes(), s0.amplitudes()) < 1e-12);

        let mut s = init_basis(2, &[false, false]).unwrap();
        apply_hadamard_layer(&mut s);
        assert!(max_dev(s.amplitudes(), init_uniform(2).unwrap().amplitudes()) < 1e-15);

        let mut s = init_uniform(4).unwrap();
        apply_hadamard_layer(&mut s);
        assert!(max_dev(s.amplitudes(), init_basis(4, &[false; 4]).unwrap().amplitudes()) < 1e-15);
    }

    #[test]
    fn schedule_unitary_examples() {
        let cfg = ChainConfig::with_defaults(2).unwrap();
        let id = schedule_unitary(&cfg, &PulseSchedule::new()).unwrap();
        assert_eq!(id, DMatrix::identity(4, 4));

        let had = schedule_unitary(&cfg, &PulseSchedule::from_pulses(vec![Pulse::hadamard()]).unwrap()).unwrap();
        let h1 = DMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]) * C64::new(FRAC_1_SQRT_2, 0.0);
        assert!((had - h1.kronecker(&h1)).norm() < 1e-15);

        assert!(schedule_unitary(&ChainConfig::with_defaults(12).unwrap(), &PulseSchedule::new()).is_err());
    }

    #[test]
    fn alternating_schedule_matches_matrix_exponentials() {
        let cfg = ChainConfig::with_defaults(4).unwrap();
        let hz = dense_chain_hamiltonian(&cfg, 'Z');
        let mut hx = DMatrix::<C64>::zeros(16, 16);
        for j in 0..4 {
            hx += pauli_string(4, &[(j, 'X')]);
        }
        let (t1, tau1, t2, tau2) = (0.4, 1.1, 2.3, 0.7);
        let sched =
            PulseSchedule::from_pulses(vec![Pulse::z(t1), Pulse::x(tau1), Pulse::z(t2), Pulse::x(tau2)]).unwrap();
        let reference =
            expm_minus_i(&hx, tau2) * expm_minus_i(&hz, t2) * expm_minus_i(&hx, tau1) * expm_minus_i(&hz, t1);
        let mut s = init_uniform(4).unwrap();
        let expected = apply_dense(&reference, &s);
        apply_schedule(&mut s, &cfg, &sched).unwrap();
        assert!(max_dev(s.amplitudes(), &expected) < 1e-10);
        let u = schedule_unitary(&cfg, &sched).unwrap();
        assert!((u - reference).norm() < 1e-10);
    }

    #[test]
    fn y_conjugation_is_exact() {
        for n in [2, 4] {
            let cfg = ChainConfig::with_defaults(n).unwrap();
            let hy = dense_chain_hamiltonian(&cfg, 'Y');
            for t in [0.3, 1.7, 10.0] {
                let sched =
                    PulseSchedule::from_pulses(vec![Pulse::x(5.0 * PI / 4.0), Pulse::z(t), Pulse::x(3.0 * PI / 4.0)])
                        .unwrap();
                let u = schedule_unitary(&cfg, &sched).unwrap();
                let d = unitary_distance(&u, &expm_minus_i(&hy, t)).unwrap();
                assert!(d < 1e-10, "n={n} t={t} d={d}");
            }
        }
    }

    #[test]
    fn columns_match_statevector_path() {
        let cfg = ChainConfig::with_defaults(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pulses: Vec<Pulse> = (0..10)
            .map(|_| match rng.random_range(0..3) {
                0 => Pulse::z(rng.random_range(0.0..5.0)),
                1 => Pulse::x(rng.random_range(0.0..5.0)),
                _ => Pulse::hadamard(),
            })
            .collect();
        let sched = PulseSchedule::from_pulses(pulses).unwrap();
        let u = schedule_unitary(&cfg, &sched).unwrap();
        for col in 0..16 {
            let mut s = init_basis(4, &index_bits(4, col)).unwrap();
            apply_schedule(&mut s, &cfg, &sched).unwrap();
            let column: Vec<C64> = u.column(col).iter().copied().collect();
            assert!(max_dev(s.amplitudes(), &column) < 1e-10);
        }
    }

    #[test]
    fn norm_is_preserved() {
        let cfg = ChainConfig::with_defaults(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut s = init_uniform(6).unwrap();
        for _ in 0..100 {
            let p = match rng.random_range(0..3) {
                0 => Pulse::z(rng.random_range(0.0..1e8)),
                1 => Pulse::x(rng.random_range(0.0..10.0)),
                _ => Pulse::hadamard(),
            };
            apply_pulse(&mut s, &cfg, &p).unwrap();
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gate_kernels_match_kronecker_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let s0 = random_state(4, &mut rng);
        let rx = Matrix2::new(
            C64::new(0.6, 0.0),
            C64::new(0.0, -0.8),
            C64::new(0.0, -0.8),
            C64::new(0.6, 0.0),
        );
        let mut s = s0.clone();
        apply_single_qubit(&mut s, 2, &rx).unwrap();
        let dense_rx = DMatrix::from_iterator(2, 2, rx.iter().copied());
        let ops: Vec<_> = (0..4)
            .map(|j| if j == 2 { dense_rx.clone() } else { pauli('I') })
            .collect();
        assert!(max_dev(s.amplitudes(), &apply_dense(&kron_all(&ops), &s0)) < 1e-14);

        // CNOT with control = first (qubit 3), target = second (qubit 0).
        let mut cnot = Matrix4::<C64>::zeros();
        for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(r, c)] = ONE;
        }
        let mut s = s0.clone();
        apply_two_qubit(&mut s, 3, 0, &cnot).unwrap();
        for i in 0..16 {
            let src = if i & 8 != 0 { i ^ 1 } else { i };
            assert!((s.amplitudes()[i] - s0.amplitudes()[src]).norm() < 1e-15);
        }
        assert!(apply_two_qubit(&mut s, 1, 1, &cnot).is_err());
    }

    #[test]
    fn boundary_measurement() {
        let mut s = init_basis(2, &[false, false]).unwrap();
        for seed in 0..20 {
            assert!(!measure_boundary(&mut s, seed));
        }
        assert_eq!(s.amplitudes()[0], ONE);

        let mut ones = 0;
        for seed in 0..10_000 {
            let mut s = init_uniform(2).unwrap();
            if measure_boundary(&mut s, seed) {
                ones += 1;
                assert!(s.probability_one(0) > 1.0 - 1e-12);
            }
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        let frac = ones as f64 / 10_000.0;
        assert!((frac - 0.5).abs() < 0.02, "{frac}");

        let mut s = StateVector::from_amplitudes(2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        for seed in 0..20 {
            assert!(measure_boundary(&mut s, seed));
        }
    }

    #[test]
    fn boundary_preparation() {
        let mut s = init_basis(2, &[false, false]).unwrap();
        prepare_boundary(&mut s, false, 1);
        assert_eq!(s, init_basis(2, &[false, false]).unwrap());
        prepare_boundary(&mut s, true, 1);
        assert_eq!(s.amplitudes()[1], ONE);

        for seed in 0..50 {
            let mut s = init_uniform(2).unwrap();
            prepare_boundary(&mut s, false, seed);
            assert!(s.probability_one(0) < 1e-12);
        }
    }

    /// Brute-force `min_θ ‖U − e^{iθ}V‖`: coarse θ scan, then ternary
    /// refinement around the best grid point.
    fn brute_distance(u: &DMatrix<C64>, v: &DMatrix<C64>) -> f64 {
        let f = |theta: f64| (u - v * C64::from_polar(1.0, theta)).singular_values().max();
        let steps = 2000;
        let h = std::f64::consts::TAU / steps as f64;
        let best = (0..steps)
            .map(|k| k as f64 * h)
            .min_by(|a, b| f(*a).total_cmp(&f(*b)))
            .unwrap();
        let (mut lo, mut hi) = (best - h, best + h);
        for _ in 0..100 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        f(0.5 * (lo + hi)).min(f(best))
    }

    #[test]
    fn distance_metrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_state(4, &mut rng);
        assert!((state_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);

        let cfg = ChainConfig::with_defaults(2).unwrap();
        let u = schedule_unitary(
            &cfg,
            &PulseSchedule::from_pulses(vec![Pulse::z(0.9), Pulse::x(0.4), Pulse::hadamard()]).unwrap(),
        )
        .unwrap();
        let phased = &u * C64::from_polar(1.0, PI / 7.0);
        assert!(unitary_distance(&u, &phased).unwrap() < 1e-10);

        // Brute-force definition: scan θ, operator norm via singular values.
        let id = DMatrix::<C64>::identity(4, 4);
        let x_on_1 = pauli_string(2, &[(1, 'X')]);
        let brute = brute_distance(&id, &x_on_1);
        let d = unitary_distance(&id, &x_on_1).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        assert!((d - brute).abs() < 1e-9);

        assert!(unitary_distance(&id, &DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn distance_agrees_with_brute_force_on_random_pairs() {
        let cfg = ChainConfig::with_defaults(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let mk = |rng: &mut ChaCha8Rng| {
                let p: Vec<Pulse> = (0..6)
                    .map(|i| {
                        if i % 2 == 0 {
                            Pulse::z(rng.random_range(0.0..3.0))
                        } else {
                            Pulse::x(rng.random_range(0.0..3.0))
                        }
                    })
                    .collect();
                schedule_unitary(&cfg, &PulseSchedule::from_pulses(p).unwrap()).unwrap()
            };
            let (u, v) = (mk(&mut rng), mk(&mut rng));
            let brute = brute_distance(&u, &v);
            let d = unitary_distance(&u, &v).unwrap();
            assert!((d - brute).abs() < 1e-9, "{d} vs {brute}");
        }
    }
}
