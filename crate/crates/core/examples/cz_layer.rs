//! Lower controlled-Z layers of both parities and check them against the
//! ideal layer.

use broadcast_qaoa::chain_model::ChainConfig;
use broadcast_qaoa::evolution::{schedule_unitary, unitary_distance};
use broadcast_qaoa::gate_synthesis::{ideal_layer_unitary, synth_layer, LayerGate, Parity, SynthOptions};

fn main() -> broadcast_qaoa::Result<()> {
    let config = ChainConfig::with_defaults(4)?;
    for parity in [Parity::AB, Parity::BA] {
        let gate = LayerGate::cz(parity);
        let s = synth_layer(&config, &gate, 0.1, &SynthOptions::default())?;
        let d = unitary_distance(
            &schedule_unitary(&config, &s.schedule)?,
            &ideal_layer_unitary(4, &gate)?,
        )?;
        println!(
            "cz {parity}: {} pulses, {} aligned, predicted error {:.3}, fidelity {:.4}",
            s.schedule.len(),
            s.aligned_pulses(),
            s.predicted_error(),
            1.0 - d
        );
    }
    Ok(())
}
