//! How the earliest aligned duration grows as the phase budget shrinks.

use broadcast_qaoa::chain_model::{FrequencySet, PhaseTarget};
use broadcast_qaoa::cli::{growth_exponent, random_targets};
use broadcast_qaoa::phase_align::find_time_grid;
use rayon::prelude::*;

fn main() -> broadcast_qaoa::Result<()> {
    let freqs = FrequencySet::default();
    let targets = random_targets(20, 7);
    let dt = 0.01;
    let mut medians = Vec::new();
    for eps in [0.8, 0.4, 0.2] {
        let mut times = targets
            .par_iter()
            .map(|&p| find_time_grid(&freqs, &PhaseTarget::new(p, eps)?, 1e8, dt).map(|r| r.time))
            .collect::<broadcast_qaoa::Result<Vec<f64>>>()?;
        times.sort_by(f64::total_cmp);
        let median = 0.5 * (times[9] + times[10]);
        println!("eps={eps}: median t = {median:.1}");
        medians.push((eps, median));
    }
    println!(
        "fitted growth exponent: {:.2}",
        growth_exponent(&medians).unwrap_or(f64::NAN)
    );
    Ok(())
}
