//! Canonical decomposition of a random two-qubit gate, and the lowered
//! layer that applies it to every AB pair.

use broadcast_qaoa::chain_model::ChainConfig;
use broadcast_qaoa::evolution::{schedule_unitary, unitary_distance, C64};
use broadcast_qaoa::gate_synthesis::kak::kak;
use broadcast_qaoa::gate_synthesis::{ideal_layer_unitary, synth_layer, LayerGate, Parity, SynthOptions};
use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> broadcast_qaoa::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let m = Matrix4::from_fn(|_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let u = m.qr().q();

    let k = kak(&u)?;
    println!("core coefficients: cx={:.4} cy={:.4} cz={:.4}", k.cx, k.cy, k.cz);
    println!("reconstruction error: {:.2e}", (k.reconstruct() - u).norm());

    let config = ChainConfig::with_defaults(4)?;
    let gate = LayerGate::two_qubit(Parity::AB, u)?;
    let s = synth_layer(&config, &gate, 0.2, &SynthOptions::default())?;
    let d = unitary_distance(
        &schedule_unitary(&config, &s.schedule)?,
        &ideal_layer_unitary(4, &gate)?,
    )?;
    println!("{} aligned pulses, fidelity {:.4}", s.aligned_pulses(), 1.0 - d);
    Ok(())
}
