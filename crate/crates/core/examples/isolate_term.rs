//! Pick a duration at which only the H_A term carries a phase, then measure
//! how far the resulting Z evolution is from the isolated rotation.

use std::f64::consts::FRAC_PI_2;

use broadcast_qaoa::chain_model::{ChainConfig, PhaseTarget, Term};
use broadcast_qaoa::phase_align::{find_time_lattice, verify_isolation};

fn main() -> broadcast_qaoa::Result<()> {
    let config = ChainConfig::with_defaults(4)?;
    for eps in [0.4, 0.2, 0.1] {
        let target = PhaseTarget::isolating(Term::A, FRAC_PI_2, eps)?;
        let result = find_time_lattice(&config.couplings, &target)?;
        let d = verify_isolation(&config, &result, Term::A, FRAC_PI_2)?;
        println!("eps={eps} t={} operator distance={d:.4}", result.time);
    }
    Ok(())
}
