//! The Y-basis evolution is the Z evolution wrapped in two global X pulses;
//! compare the pulse sequence with the dense exponential of H_Y.

use broadcast_qaoa::chain_model::{ChainConfig, Pulse, PulseSchedule};
use broadcast_qaoa::evolution::{schedule_unitary, unitary_distance, C64};
use broadcast_qaoa::gate_synthesis::{Y_ENTRY, Y_EXIT};
use nalgebra::{DMatrix, SymmetricEigen};

/// Dense `H_Y`: the diagonal chain Hamiltonian with every Z replaced by Y.
fn h_y(config: &ChainConfig) -> DMatrix<C64> {
    let n = config.n_qubits();
    let y = [
        [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ];
    let string = |sites: &[usize]| {
        DMatrix::from_fn(1 << n, 1 << n, |r, c| {
            (0..n).fold(C64::new(1.0, 0.0), |acc, q| {
                let (br, bc) = ((r >> q) & 1, (c >> q) & 1);
                acc * if sites.contains(&q) {
                    y[br][bc]
                } else if br == bc {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
    };
    let c = config.couplings;
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for q in 0..n {
        h += string(&[q]) * C64::new(if q % 2 == 0 { c.omega_a } else { c.omega_b }, 0.0);
    }
    for q in 0..n - 1 {
        h += string(&[q, q + 1]) * C64::new(if q % 2 == 0 { c.gamma_ab } else { c.gamma_ba }, 0.0);
    }
    h
}

fn expm_minus_i(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    // H = R + iI is Hermitian, so [[R, -I], [I, R]] is real symmetric with
    // the same spectrum, each eigenvalue doubled.
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
    // Each eigenvalue appears twice in the embedding; halve the sum.
    for k in 0..2 * n {
        let v = eig.eigenvectors.column(k);
        let w: Vec<C64> = (0..n).map(|i| C64::new(v[i], v[i + n])).collect();
        let phase = C64::from_polar(0.5, -eig.eigenvalues[k] * t);
        for r in 0..n {
            for c in 0..n {
                u[(r, c)] += phase * w[r] * w[c].conj();
            }
        }
    }
    u
}

fn main() -> broadcast_qaoa::Result<()> {
    for n in [2, 4] {
        let config = ChainConfig::with_defaults(n)?;
        let h = h_y(&config);
        for t in [0.3, 1.7, 10.0] {
            let schedule = PulseSchedule::from_pulses(vec![Pulse::x(Y_ENTRY), Pulse::z(t), Pulse::x(Y_EXIT)])?;
            let d = unitary_distance(&schedule_unitary(&config, &schedule)?, &expm_minus_i(&h, t))?;
            println!("n={n} t={t}: distance {d:.2e}");
        }
    }
    Ok(())
}
