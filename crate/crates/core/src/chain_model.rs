//! The qubit chain, its diagonal Hamiltonian, and the pulse records shared by
//! every other module.
//!
//! Conventions used throughout the crate:
//!
//! * qubit `j` is bit `j` of a basis index (qubit 0 is least significant and
//!   is the boundary qubit of the chain);
//! * even qubits form sublattice A, odd qubits sublattice B;
//! * spin `s_j = +1` for bit 0 and `-1` for bit 1 (`Z|0⟩ = |0⟩`);
//! * the chain is open: the coupling `Z_{n-1} Z_0` does not exist.
//!
//! The diagonal Hamiltonian is
//!
//! ```text
//! H_Z = ω_A H_A + ω_B H_B + γ_AB H_AB + γ_BA H_BA
//! H_A  = Σ_j Z_{2j}            H_AB = Σ_j Z_{2j} Z_{2j+1}
//! H_B  = Σ_j Z_{2j+1}          H_BA = Σ_j Z_{2j+1} Z_{2j+2}
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The four coupling frequencies of the diagonal Hamiltonian, in radians per
/// unit time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencySet {
    pub omega_a: f64,
    pub omega_b: f64,
    pub gamma_ab: f64,
    pub gamma_ba: f64,
}

impl Default for FrequencySet {
    /// 1, √2, √3, √5: square roots of distinct square-free integers, so every
    /// ratio is irrational.
    fn default() -> Self {
        FrequencySet {
            omega_a: 1.0,
            omega_b: 2f64.sqrt(),
            gamma_ab: 3f64.sqrt(),
            gamma_ba: 5f64.sqrt(),
        }
    }
}

impl FrequencySet {
    pub fn new(omega_a: f64, omega_b: f64, gamma_ab: f64, gamma_ba: f64) -> Result<Self> {
        Self::from_array([omega_a, omega_b, gamma_ab, gamma_ba])
    }

    pub fn from_array(values: [f64; 4]) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Error::input(format!(
                    "frequency {} must be finite and positive, got {v}",
                    Term::ALL[i]
                )));
            }
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if values[i] == values[j] {
                    return Err(Error::input(format!(
                        "frequencies {} and {} coincide ({})",
                        Term::ALL[i],
                        Term::ALL[j],
                        values[i]
                    )));
                }
            }
        }
        Ok(FrequencySet {
            omega_a: values[0],
            omega_b: values[1],
            gamma_ab: values[2],
            gamma_ba: values[3],
        })
    }

    /// Frequencies in `(ω_A, ω_B, γ_AB, γ_BA)` order.
    pub fn as_array(&self) -> [f64; 4] {
        [self.omega_a, self.omega_b, self.gamma_ab, self.gamma_ba]
    }

    pub fn get(&self, term: Term) -> f64 {
        self.as_array()[term.index()]
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }

    /// Parses four decimals separated by commas and/or whitespace; `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: f64 = tok
                    .parse()
                    .map_err(|_| Error::syntax(lineno + 1, 1, format!("bad frequency literal '{tok}'")))?;
                values.push(v);
            }
        }
        let arr: [f64; 4] = values
            .try_into()
            .map_err(|v: Vec<f64>| Error::input(format!("expected 4 frequencies, found {}", v.len())))?;
        Self::from_array(arr)
    }
}

/// One of the four unweighted generators of the diagonal Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    A,
    B,
    AB,
    BA,
}

impl Term {
    pub const ALL: [Term; 4] = [Term::A, Term::B, Term::AB, Term::BA];

    pub fn index(self) -> usize {
        match self {
            Term::A => 0,
            Term::B => 1,
            Term::AB => 2,
            Term::BA => 3,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Term::A => "A",
            Term::B => "B",
            Term::AB => "AB",
            Term::BA => "BA",
        };
        f.write_str(s)
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Term::A),
            "B" => Ok(Term::B),
            "AB" => Ok(Term::AB),
            "BA" => Ok(Term::BA),
            _ => Err(Error::input(format!("unknown term '{s}'"))),
        }
    }
}

/// An open chain of an even number of qubits with homogeneous couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainConfig {
    n_qubits: usize,
    pub couplings: FrequencySet,
}

impl ChainConfig {
    pub fn new(n_qubits: usize, couplings: FrequencySet) -> Result<Self> {
        if n_qubits < 2 || !n_qubits.is_multiple_of(2) {
            return Err(Error::input(format!(
                "chain length must be even and >= 2, got {n_qubits}"
            )));
        }
        if n_qubits > 62 {
            return Err(Error::input(format!("chain length {n_qubits} exceeds 62")));
        }
        Ok(ChainConfig { n_qubits, couplings })
    }

    pub fn with_defaults(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, FrequencySet::default())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Largest `|eigenvalue|` of each unweighted term: `n/2` for A, B and AB,
    /// `n/2 - 1` for BA on the open chain.
    pub fn term_bounds(&self) -> [u32; 4] {
        let h = (self.n_qubits / 2) as u32;
        [h, h, h, h - 1]
    }
}

fn check_bits(config: &ChainConfig, bits: &[bool]) -> Result<()> {
    if bits.len() != config.n_qubits {
        return Err(Error::input(format!(
            "bit string has length {}, chain has {} qubits",
            bits.len(),
            config.n_qubits
        )));
    }
    Ok(())
}

#[inline]
fn spin(bit: bool) -> i32 {
    if bit {
        -1
    } else {
        1
    }
}

/// Eigenvalue of the unweighted generator `term` on the basis state `bits`
/// (`bits[j]` is qubit `j`).
pub fn term_energy(config: &ChainConfig, term: Term, bits: &[bool]) -> Result<i32> {
    check_bits(config, bits)?;
    let n = bits.len();
    let value = match term {
        Term::A => (0..n).step_by(2).map(|j| spin(bits[j])).sum(),
        Term::B => (1..n).step_by(2).map(|j| spin(bits[j])).sum(),
        Term::AB => (0..n).step_by(2).map(|j| spin(bits[j]) * spin(bits[j + 1])).sum(),
        Term::BA => (1..n.saturating_sub(1))
            .step_by(2)
            .map(|j| spin(bits[j]) * spin(bits[j + 1]))
            .sum(),
    };
    Ok(value)
}

/// Eigenvalue of `H_Z` on the basis state `bits`.
pub fn diagonal_energy(config: &ChainConfig, bits: &[bool]) -> Result<f64> {
    check_bits(config, bits)?;
    let c = &config.couplings;
    let n = bits.len();
    let mut energy = 0.0;
    for j in (0..n).step_by(2) {
        let s0 = spin(bits[j]) as f64;
        let s1 = spin(bits[j + 1]) as f64;
        energy += c.omega_a * s0 + c.omega_b * s1 + c.gamma_ab * s0 * s1;
        if j + 2 < n {
            let s2 = spin(bits[j + 2]) as f64;
            energy += c.gamma_ba * s1 * s2;
        }
    }
    Ok(energy)
}

/// Bits of a basis index, qubit 0 first.
pub fn index_bits(n_qubits: usize, index: usize) -> Vec<bool> {
    (0..n_qubits).map(|j| (index >> j) & 1 == 1).collect()
}

/// Basis index of a bit assignment, qubit 0 first.
pub fn bits_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | ((b as usize) << j))
}

/// Precomputed bit masks for evaluating the four term eigenvalues of a basis
/// index with popcounts.
#[derive(Clone, Copy, Debug)]
pub struct TermMasks {
    half: u32,
    even: u64,
    odd: u64,
    /// Bit `j` set for every BA bond `(j, j+1)`.
    ba_bonds: u64,
}

impl TermMasks {
    pub fn new(n_qubits: usize) -> Self {
        let mut even = 0u64;
        let mut odd = 0u64;
        let mut ba = 0u64;
        for j in 0..n_qubits {
            if j.is_multiple_of(2) {
                even |= 1 << j;
            } else {
                odd |= 1 << j;
                if j + 1 < n_qubits {
                    ba |= 1 << j;
                }
            }
        }
        TermMasks {
            half: (n_qubits / 2) as u32,
            even,
            odd,
            ba_bonds: ba,
        }
    }

    /// Number of "flipped" contributions per term: set bits on A and B, and
    /// anti-aligned bonds for AB and BA. Eigenvalue = bound - 2 * count.
    #[inline]
    pub fn counts(&self, index: usize) -> [u32; 4] {
        let z = index as u64;
        let diff = z ^ (z >> 1);
        [
            (z & self.even).count_ones(),
            (z & self.odd).count_ones(),
            (diff & self.even).count_ones(),
            (diff & self.ba_bonds).count_ones(),
        ]
    }

    #[inline]
    pub fn values(&self, index: usize) -> [i32; 4] {
        let c = self.counts(index);
        let h = self.half as i32;
        [
            h - 2 * c[0] as i32,
            h - 2 * c[1] as i32,
            h - 2 * c[2] as i32,
            (h - 1) - 2 * c[3] as i32,
        ]
    }
}

/// Which Hamiltonian a pulse switches on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `e^{-i t H_Z}`
    ZEvolution,
    /// `e^{-i τ Σ_j X_j}`
    XEvolution,
    /// `H ⊗ H ⊗ … ⊗ H`; carries no duration.
    HadamardLayer,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pulse {
    pub generator: Generator,
    pub duration: f64,
}

impl Pulse {
    pub fn z(duration: f64) -> Self {
        Pulse {
            generator: Generator::ZEvolution,
            duration,
        }
    }

    pub fn x(duration: f64) -> Self {
        Pulse {
            generator: Generator::XEvolution,
            duration,
        }
    }

    pub fn hadamard() -> Self {
        Pulse {
            generator: Generator::HadamardLayer,
            duration: 0.0,
        }
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{}` on f64 prints the shortest literal that parses back exactly.
        match self.generator {
            Generator::ZEvolution => write!(f, "Z {}", self.duration),
            Generator::XEvolution => write!(f, "X {}", self.duration),
            Generator::HadamardLayer => f.write_str("HAD"),
        }
    }
}

/// An ordered pulse program; the first pulse acts first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSchedule {
    pulses: Vec<Pulse>,
}

impl PulseSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pulses(pulses: Vec<Pulse>) -> Result<Self> {
        let mut s = PulseSchedule::new();
        for p in pulses {
            s.push(p)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, pulse: Pulse) -> Result<()> {
        if !pulse.duration.is_finite() || pulse.duration < 0.0 {
            return Err(Error::input(format!(
                "pulse duration must be finite and non-negative, got {}",
                pulse.duration
            )));
        }
        if pulse.generator == Generator::HadamardLayer && pulse.duration != 0.0 {
            return Err(Error::input("Hadamard layers carry no duration"));
        }
        self.pulses.push(pulse);
        Ok(())
    }

    pub fn extend(&mut self, other: &PulseSchedule) {
        self.pulses.extend_from_slice(&other.pulses);
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pulse> {
        self.pulses.iter()
    }

    /// Sum of all durations.
    pub fn total_time(&self) -> f64 {
        self.pulses.iter().map(|p| p.duration).sum()
    }

    /// Peephole cleanup that preserves the operator exactly: drops
    /// zero-length pulses, fuses neighbouring X pulses and removes X pulses
    /// whose length is a whole multiple of 2π (`e^{-i2πX} = I`).
    pub fn simplified(&self) -> PulseSchedule {
        let two_pi = 2.0 * PI;
        let mut out: Vec<Pulse> = Vec::with_capacity(self.pulses.len());
        for p in &self.pulses {
            match p.generator {
                Generator::HadamardLayer => out.push(*p),
                _ if p.duration == 0.0 => {}
                Generator::XEvolution => {
                    if let Some(last) = out.last_mut() {
                        if last.generator == Generator::XEvolution {
                            last.duration += p.duration;
                            continue;
                        }
                    }
                    out.push(*p);
                }
                Generator::ZEvolution => out.push(*p),
            }
        }
        out.retain_mut(|p| {
            if p.generator != Generator::XEvolution {
                return true;
            }
            let r = p.duration % two_pi;
            if r.min(two_pi - r) < 1e-12 {
                return false;
            }
            if p.duration >= two_pi {
                p.duration = r;
            }
            true
        });
        PulseSchedule { pulses: out }
    }

    /// Serializes to the line-oriented schedule format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.pulses {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the line-oriented schedule format: `Z <duration>`,
    /// `X <duration>`, `HAD`, with `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut schedule = PulseSchedule::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let mut toks = tokens(line);
            let Some((col, kw)) = toks.next() else {
                continue;
            };
            let pulse = match kw {
                "Z" | "X" => {
                    let (dcol, lit) = toks
                        .next()
                        .ok_or_else(|| Error::syntax(lineno, col + kw.len(), format!("{kw} pulse needs a duration")))?;
                    let d: f64 = lit
                        .parse()
                        .map_err(|_| Error::syntax(lineno, dcol, format!("bad duration literal '{lit}'")))?;
                    if !d.is_finite() || d < 0.0 {
                        return Err(Error::syntax(
                            lineno,
                            dcol,
                            format!("duration must be finite and non-negative, got '{lit}'"),
                        ));
                    }
                    if kw == "Z" {
                        Pulse::z(d)
                    } else {
                        Pulse::x(d)
                    }
                }
                "HAD" => Pulse::hadamard(),
                other => return Err(Error::syntax(lineno, col, format!("unknown pulse '{other}'"))),
            };
            if let Some((c, extra)) = toks.next() {
                return Err(Error::syntax(lineno, c, format!("unexpected token '{extra}'")));
            }
            schedule.pulses.push(pulse);
        }
        Ok(schedule)
    }
}

/// Whitespace-separated tokens with 1-based column numbers.
pub(crate) fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        let offset = tok.as_ptr() as usize - line.as_ptr() as usize;
        (offset + 1, tok)
    })
}

/// Four target phases in `[0, 2π)` (ordered like [`FrequencySet::as_array`])
/// and the alignment tolerance ε. A solution must bring every residual below
/// `ε / 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseTarget {
    phases: [f64; 4],
    epsilon: f64,
}

impl PhaseTarget {
    /// Phases are wrapped into `[0, 2π)`; ε must lie in `(0, π)`.
    pub fn new(phases: [f64; 4], epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < PI) {
            return Err(Error::input(format!("epsilon must lie in (0, π), got {epsilon}")));
        }
        let mut wrapped = [0.0; 4];
        for (w, p) in wrapped.iter_mut().zip(phases) {
            if !p.is_finite() {
                return Err(Error::input(format!("target phase must be finite, got {p}")));
            }
            *w = crate::dd::wrap_positive(p);
        }
        Ok(PhaseTarget {
            phases: wrapped,
            epsilon,
        })
    }

    /// Target `phi` on one term and zero on the other three.
    pub fn isolating(term: Term, phi: f64, epsilon: f64) -> Result<Self> {
        let mut phases = [0.0; 4];
        phases[term.index()] = phi;
        Self::new(phases, epsilon)
    }

    pub fn phases(&self) -> [f64; 4] {
        self.phases
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Per-frequency residual tolerance, `ε / 4`.
    pub fn tolerance(&self) -> f64 {
        self.epsilon / 4.0
    }
}
