//! Boundary-qubit measurement statistics and state preparation.

use broadcast_qaoa::evolution::{init_uniform, measure_boundary_with, prepare_boundary, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> broadcast_qaoa::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let shots = 10_000;
    let ones = (0..shots)
        .filter(|_| {
            let mut s = init_uniform(2).unwrap();
            measure_boundary_with(&mut s, &mut rng)
        })
        .count();
    println!("P(1) over {shots} shots: {:.4}", ones as f64 / shots as f64);

    let mut s = init_uniform(4)?;
    prepare_boundary(&mut s, true, 5);
    // Reduced density matrix of qubit 0.
    let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
    let a = s.amplitudes();
    for i in (0..a.len()).step_by(2) {
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            rho[r][c] += a[i | r] * a[i | c].conj();
        }
    }
    let purity: f64 = rho.iter().flatten().map(|z| z.norm_sqr()).sum();
    println!(
        "after preparing |1>: P(1)={:.6}, purity={purity:.12}",
        s.probability_one(0)
    );
    Ok(())
}
