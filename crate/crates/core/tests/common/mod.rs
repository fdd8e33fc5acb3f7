//! Dense reference constructions built directly from Pauli strings, shared
//! by the integration tests and the acceptance harness. Nothing here calls
//! the crate's own evolution kernels.

#![allow(dead_code)]

use broadcast_qaoa::chain_model::{ChainConfig, Generator, Pulse, PulseSchedule};
use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ZERO: C = C { re: 0.0, im: 0.0 };
pub const ONE: C = C { re: 1.0, im: 0.0 };

pub fn pauli(which: char) -> Matrix2<C> {
    let i = C::new(0.0, 1.0);
    match which {
        'I' => Matrix2::new(ONE, ZERO, ZERO, ONE),
        'X' => Matrix2::new(ZERO, ONE, ONE, ZERO),
        'Y' => Matrix2::new(ZERO, -i, i, ZERO),
        'Z' => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("unknown Pauli {which}"),
    }
}

/// `⊗_q m_q` with qubit `q` on bit `q` of the index.
pub fn kron_sites(n: usize, site: impl Fn(usize) -> Matrix2<C>) -> DMatrix<C> {
    let mats: Vec<Matrix2<C>> = (0..n).map(site).collect();
    DMatrix::from_fn(1 << n, 1 << n, |r, c| {
        (0..n).fold(ONE, |acc, q| acc * mats[q][((r >> q) & 1, (c >> q) & 1)])
    })
}

pub fn pauli_on(n: usize, p: char, sites: &[usize]) -> DMatrix<C> {
    kron_sites(n, |q| if sites.contains(&q) { pauli(p) } else { pauli('I') })
}

/// The chain Hamiltonian with every single-site and bond operator `p`.
pub fn chain_hamiltonian(config: &ChainConfig, p: char) -> DMatrix<C> {
    let n = config.n_qubits();
    let c = config.couplings;
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for q in 0..n {
        let w = if q % 2 == 0 { c.omega_a } else { c.omega_b };
        h += pauli_on(n, p, &[q]) * C::new(w, 0.0);
    }
    for q in 0..n - 1 {
        let w = if q % 2 == 0 { c.gamma_ab } else { c.gamma_ba };
        h += pauli_on(n, p, &[q, q + 1]) * C::new(w, 0.0);
    }
    h
}

/// `e^{-itH}` for Hermitian `H`, through the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]` whose spectrum is that of `H`, doubled.
pub fn expm_minus_i(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let n = h.nrows();
    let real = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let eig = SymmetricEigen::new(real);
    let mut u = DMatrix::zeros(n, n);
    for k in 0..2 * n {
        let v = eig.eigenvectors.column(k);
        let w = DVector::from_fn(n, |i, _| C::new(v[i], v[i + n]));
        u += &w * w.adjoint() * C::from_polar(0.5, -eig.eigenvalues[k] * t);
    }
    u
}

pub fn hadamard_all(n: usize) -> DMatrix<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = Matrix2::new(C::new(s, 0.0), C::new(s, 0.0), C::new(s, 0.0), C::new(-s, 0.0));
    kron_sites(n, |_| h)
}

/// Dense unitary of one pulse, with the first pulse of a schedule acting first.
pub fn pulse_dense(config: &ChainConfig, p: &Pulse) -> DMatrix<C> {
    let n = config.n_qubits();
    match p.generator {
        Generator::ZEvolution => {
            // H_Z is diagonal. The phase t·E is formed in plain doubles, so
            // this oracle is meant for moderate durations.
            let h = chain_hamiltonian(config, 'Z');
            DMatrix::from_fn(1 << n, 1 << n, |r, c| {
                if r == c {
                    C::from_polar(1.0, -p.duration * h[(r, r)].re)
                } else {
                    ZERO
                }
            })
        }
        Generator::XEvolution => {
            let (s, c) = p.duration.sin_cos();
            let rx = Matrix2::new(C::new(c, 0.0), C::new(0.0, -s), C::new(0.0, -s), C::new(c, 0.0));
            kron_sites(n, |_| rx)
        }
        Generator::HadamardLayer => hadamard_all(n),
    }
}

pub fn schedule_dense(config: &ChainConfig, s: &PulseSchedule) -> DMatrix<C> {
    let dim = 1 << config.n_qubits();
    s.iter()
        .fold(DMatrix::identity(dim, dim), |acc, p| pulse_dense(config, p) * acc)
}

/// `‖U − e^{iθ}V‖_F` at the phase `θ = arg tr(V†U)`; zero exactly when
/// `U` and `V` agree up to a global phase.
pub fn phase_aligned_frobenius(u: &DMatrix<C>, v: &DMatrix<C>) -> f64 {
    let tr = (v.adjoint() * u).trace();
    let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { ONE };
    (u - v * ph).norm()
}

/// The same two-qubit gate on each `(j, j+1)` pair listed.
pub fn pair_layer(n: usize, pairs: &[(usize, usize)], g: &Matrix4<C>) -> DMatrix<C> {
    let dim = 1 << n;
    let mut u = DMatrix::identity(dim, dim);
    for &(a, b) in pairs {
        let layer = DMatrix::from_fn(dim, dim, |r, c| {
            let rest = !((1 << a) | (1 << b));
            if r & rest != c & rest {
                return ZERO;
            }
            let ir = 2 * ((r >> a) & 1) + ((r >> b) & 1);
            let ic = 2 * ((c >> a) & 1) + ((c >> b) & 1);
            g[(ir, ic)]
        });
        u = layer * u;
    }
    u
}

pub fn random_unitary4(rng: &mut ChaCha8Rng) -> Matrix4<C> {
    let m = Matrix4::from_fn(|_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let q = m.qr().q();
    q * C::from_polar(1.0, -q.determinant().arg() / 4.0)
}

pub fn random_unitary2(rng: &mut ChaCha8Rng) -> Matrix2<C> {
    let m = Matrix2::from_fn(|_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    m.qr().q()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `2^{-n/2} Σ|z⟩`.
pub fn uniform(n: usize) -> DVector<C> {
    DVector::from_element(1 << n, C::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0))
}
