//! Prepare the 1-D cluster state with H, CZ(ab), CZ(ba) and compare with its
//! closed form.

use broadcast_qaoa::chain_model::ChainConfig;
use broadcast_qaoa::compiler::{cluster_state, compile, run_plan, BroadcastCircuit, CompileOptions};
use broadcast_qaoa::evolution::{init_basis, state_fidelity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> broadcast_qaoa::Result<()> {
    let n = 6;
    let circuit = BroadcastCircuit::cluster(n)?;
    print!("{}", circuit.to_text());
    let config = ChainConfig::with_defaults(n)?;
    let report = compile(&circuit, &config, 0.05, &CompileOptions::default())?;
    let mut state = init_basis(n, &[false; 6])?;
    run_plan(&mut state, &config, &report.plan, &mut ChaCha8Rng::seed_from_u64(0))?;
    println!("pulses: {}, aligned: {}", report.pulse_count(), report.aligned_pulses());
    println!(
        "fidelity with the cluster state: {:.6}",
        state_fidelity(&cluster_state(n)?, &state)?
    );
    Ok(())
}
