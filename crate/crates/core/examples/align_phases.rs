//! Solve one phase target with both aligners and compare the durations.

use broadcast_qaoa::chain_model::{FrequencySet, PhaseTarget};
use broadcast_qaoa::phase_align::{find_time_grid, find_time_lattice};

fn main() -> broadcast_qaoa::Result<()> {
    let freqs = FrequencySet::default();
    let target = PhaseTarget::new([1.0, 2.0, 0.5, 4.0], 0.4)?;
    let grid = find_time_grid(&freqs, &target, 1e7, 0.9 * target.tolerance() / freqs.max())?;
    let lattice = find_time_lattice(&freqs, &target)?;
    println!("{grid}");
    println!("{lattice}");
    println!("tolerance per residual: {}", target.tolerance());
    Ok(())
}
