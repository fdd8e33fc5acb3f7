//! IQP-style schedules need no alignment: every Z duration is used as is.

use broadcast_qaoa::chain_model::ChainConfig;
use broadcast_qaoa::compiler::compile_iqp;
use broadcast_qaoa::evolution::{apply_schedule, init_uniform, schedule_unitary};

fn main() -> broadcast_qaoa::Result<()> {
    let config = ChainConfig::with_defaults(4)?;
    let schedule = compile_iqp(&[0.7, 2.3, 5.1], &config)?;
    print!("{}", schedule.to_text());

    let mut state = init_uniform(4)?;
    apply_schedule(&mut state, &config, &schedule)?;
    let dense = schedule_unitary(&config, &schedule)?;
    let start = init_uniform(4)?;
    let worst = (0..16)
        .map(|r| {
            let v: num_complex::Complex64 = (0..16).map(|c| dense[(r, c)] * start.amplitudes()[c]).sum();
            (v - state.amplitudes()[r]).norm()
        })
        .fold(0.0, f64::max);
    println!("statevector vs dense deviation: {worst:.2e}");
    Ok(())
}
