//! Time selection: find a single evolution time at which every coupling has
//! wrapped around to a chosen phase.
//!
//! For frequencies `c_k` and targets `φ_k` we need `t ≥ 0` with
//! `min_n |c_k t − 2πn − φ_k| < ε/4` for all four `k`. Because the couplings
//! are incommensurate such times exist for every target, but they are sparse:
//! the fraction of the phase torus that qualifies shrinks like `ε⁴`.
//!
//! Two solvers are provided. [`find_time_grid`] scans `t = 0, dt, 2dt, …` and
//! returns the earliest hit; it is the ground truth for coarse ε.
//! [`find_time_lattice`] turns the problem into a closest-vector search and
//! handles ε down to about 10⁻³.

mod lattice;

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::chain_model::{ChainConfig, FrequencySet, PhaseTarget, Term, TermMasks};
use crate::dd::{self, DoubleDouble};
use crate::error::{Error, Result};

use lattice::{Coeffs, Vector, DIM};

/// Largest chain accepted by [`verify_isolation`] and [`alignment_distance`].
pub const MAX_ISOLATION_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Grid,
    Lattice,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Grid => "GRID",
            SolverKind::Lattice => "LATTICE",
        })
    }
}

/// A solved pulse time with its wrapped phase residuals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlignmentResult {
    pub time: f64,
    /// Distances to the targets, radians, each in `[0, π]`.
    pub residuals: [f64; 4],
    pub solver: SolverKind,
}

impl AlignmentResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

impl fmt::Display for AlignmentResult {
    /// `t=<decimal> residuals=<r1>,<r2>,<r3>,<r4> solver=<GRID|LATTICE>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.residuals;
        write!(
            f,
            "t={} residuals={},{},{},{} solver={}",
            self.time, r[0], r[1], r[2], r[3], self.solver
        )
    }
}

/// Wrapped distance between each accumulated phase `c_k t` and its target.
pub fn residuals(freqs: &FrequencySet, t: f64, target: &PhaseTarget) -> Result<[f64; 4]> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::input(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(residuals_unchecked(freqs, t, &target.phases()))
}

fn residuals_unchecked(freqs: &FrequencySet, t: f64, phases: &[f64; 4]) -> [f64; 4] {
    let c = freqs.as_array();
    let mut out = [0.0; 4];
    for k in 0..4 {
        let acc = dd::reduce_product(c[k], t);
        out[k] = dd::wrap(acc - phases[k]).abs();
    }
    out
}

fn qualifies(res: &[f64; 4], tol: f64) -> bool {
    res.iter().all(|&r| r < tol)
}

/// Scans `t = k·dt` for `k = 0, 1, …` up to `t_max` and returns the first
/// time whose residuals are all below `ε/4`.
///
/// `dt` must be smaller than `ε / (4 · max frequency)` so that no qualifying
/// window can be stepped over.
pub fn find_time_grid(freqs: &FrequencySet, target: &PhaseTarget, t_max: f64, dt: f64) -> Result<AlignmentResult> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::input(format!("t_max must be positive, got {t_max}")));
    }
    let tol = target.tolerance();
    let dt_limit = tol / freqs.max();
    if !(dt.is_finite() && dt > 0.0 && dt < dt_limit) {
        return Err(Error::input(format!(
            "dt must lie in (0, {dt_limit}) for epsilon {}, got {dt}",
            target.epsilon()
        )));
    }
    let steps = (t_max / dt).floor();
    if steps > (1u64 << 52) as f64 {
        return Err(Error::input(format!("grid of {steps} steps is too large")));
    }
    let last = steps as usize;

    // Check the fastest frequency first: it rejects the most candidates.
    let c = freqs.as_array();
    let phases = target.phases();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| c[b].total_cmp(&c[a]));
    let two_pi = 2.0 * PI;
    let inv_two_pi = 1.0 / two_pi;
    // The coarse filter runs in plain doubles; widen it by more than the
    // worst rounding error at t_max so that no true solution is filtered out.
    let slack = tol + 1e-6 + 8.0 * f64::EPSILON * freqs.max() * t_max;

    let hit = (0..=last).into_par_iter().find_first(|&k| {
        let t = k as f64 * dt;
        for &i in &order {
            let x = c[i] * t - phases[i];
            let r = x - two_pi * (x * inv_two_pi).round();
            if r.abs() >= slack {
                return false;
            }
        }
        qualifies(&residuals_unchecked(freqs, t, &phases), tol)
    });

    match hit {
        Some(k) => {
            let t = k as f64 * dt;
            Ok(AlignmentResult {
                time: t,
                residuals: residuals_unchecked(freqs, t, &phases),
                solver: SolverKind::Grid,
            })
        }
        None => Err(Error::NoSolutionInRange {
            t_max,
            epsilon: target.epsilon(),
        }),
    }
}

/// Scale multipliers tried in turn by the lattice solver; each step
/// quadruples the searched range of times.
const LATTICE_SCALES: [f64; 10] = [1.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0, 16384.0, 65536.0, 262144.0];

/// Largest winding count considered; beyond it the duration itself can no
/// longer be represented finely enough in a double.
const MAX_WINDINGS: f64 = 4.0e15;

/// Finds some `t ≥ 0` (not necessarily the smallest) with all residuals below
/// `ε/4`, via a closest-vector search.
///
/// The fastest coupling `c_r` is used as the clock: `t = (2πm + φ_r)/c_r` for
/// a winding count `m`. The remaining three conditions become
/// `‖α_i m + β_i‖ < δ` with `α_i = c_i/c_r`, an inhomogeneous simultaneous
/// Diophantine approximation. It is embedded in the lattice generated by
/// `(w, Sα_1, Sα_2, Sα_3)` and `S·e_i`, reduced with LLL, and the target
/// `(w m_c, −Sβ)` is rounded with Babai's nearest-plane step. The windings
/// around that point are enumerated and each candidate time is certified
/// with [`residuals`]. The range of `m` grows by 4× until a certificate is
/// found.
pub fn find_time_lattice(freqs: &FrequencySet, target: &PhaseTarget) -> Result<AlignmentResult> {
    let tol = target.tolerance();
    let phases = target.phases();
    let zero = residuals_unchecked(freqs, 0.0, &phases);
    if qualifies(&zero, tol) {
        return Ok(AlignmentResult {
            time: 0.0,
            residuals: zero,
            solver: SolverKind::Lattice,
        });
    }

    let c = freqs.as_array();
    let r = (0..4).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap();
    let others: Vec<usize> = (0..4).filter(|&k| k != r).collect();
    let alpha: Vec<DoubleDouble> = others
        .iter()
        .map(|&k| DoubleDouble::from_f64(c[k]).div_f64(c[r]))
        .collect();
    let beta: Vec<f64> = others
        .iter()
        .zip(&alpha)
        .map(|(&k, a)| (a.to_f64() * phases[r] - phases[k]) / (2.0 * PI))
        .collect();

    // Residual scale: a cycle error of delta maps to one lattice unit.
    let delta = 0.9 * tol / (2.0 * PI);
    let scale = 1.0 / delta;

    let mut best: Option<AlignmentResult> = None;
    for &kappa in &LATTICE_SCALES {
        // Expected number of qualifying windings in [0, 2 m_half] is ~kappa.
        let m_half = (kappa * scale.powi(3) / 16.0).max(4.0).round();
        if 2.0 * m_half > MAX_WINDINGS {
            break;
        }
        let weight = 1.0 / m_half;
        let embed = |v: &Coeffs| -> Vector {
            let m = v[0] as f64;
            let mut out = [0.0; DIM];
            out[0] = weight * m;
            for i in 0..3 {
                let frac = alpha[i].mul_f64(m).add_f64(-(v[i + 1] as f64));
                out[i + 1] = scale * frac.to_f64();
            }
            out
        };
        let identity = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        let basis = lattice::lll(identity, embed, 0.99);
        let goal: Vector = [weight * m_half, -scale * beta[0], -scale * beta[1], -scale * beta[2]];
        let centre = basis.nearest_plane(&goal);

        let mut seen = std::collections::HashSet::new();
        for offset in neighbourhood(2) {
            let mut w = centre;
            for i in 0..DIM {
                w[i] += offset[i];
            }
            let m = basis.combine(&w)[0];
            if m < 0 || m as f64 > MAX_WINDINGS || !seen.insert(m) {
                continue;
            }
            for t in candidate_times(&c, &phases, r, m) {
                if !(t.is_finite() && t >= 0.0) {
                    continue;
                }
                let res = residuals_unchecked(freqs, t, &phases);
                let score = res.iter().copied().fold(0.0, f64::max);
                if best.is_none_or(|b| score < b.max_residual()) {
                    best = Some(AlignmentResult {
                        time: t,
                        residuals: res,
                        solver: SolverKind::Lattice,
                    });
                }
            }
        }
        if let Some(b) = best {
            if qualifies(&b.residuals, tol) {
                return Ok(b);
            }
        }
    }
    Err(Error::SolverFailure(format!(
        "lattice search could not certify residuals below {tol:e} (best {:e})",
        best.map(|b| b.max_residual()).unwrap_or(f64::INFINITY)
    )))
}

/// All offsets in `{-radius..=radius}^DIM`.
fn neighbourhood(radius: i128) -> impl Iterator<Item = [i128; DIM]> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(DIM as u32);
    (0..total).map(move |mut idx| {
        let mut out = [0i128; DIM];
        for o in out.iter_mut() {
            *o = (idx % side) as i128 - radius;
            idx /= side;
        }
        out
    })
}

/// Two candidate durations for winding count `m` of the clock coupling `r`:
/// the exact clock time, and the least-squares time over all four couplings
/// once their nearest windings are fixed.
fn candidate_times(c: &[f64; 4], phases: &[f64; 4], r: usize, m: i128) -> [f64; 2] {
    let m = m as f64;
    let clock = dd::two_pi_multiple(m).add_f64(phases[r]).div_f64(c[r]);

    let mut num = DoubleDouble::ZERO;
    let mut den = DoubleDouble::ZERO;
    for k in 0..4 {
        let n_k = if k == r {
            m
        } else {
            (clock.mul_f64(c[k]).add_f64(-phases[k]) / DoubleDouble::TWO_PI).round()
        };
        let aim = dd::two_pi_multiple(n_k).add_f64(phases[k]);
        num = num + aim.mul_f64(c[k]);
        den = den + DoubleDouble::product(c[k], c[k]);
    }
    let ls = num / den;
    [clock.to_f64(), ls.to_f64()]
}

/// Operator distance between `e^{-itH_Z}` and `e^{-i Σ_k φ_k H_k}`:
/// the largest `|e^{-itE(z)} − e^{-iΣφ_k T_k(z)}|` over basis states `z`.
///
/// Both operators are diagonal, so this is exact. Phases are combined from
/// per-term reductions of `c_k t`, never from the raw product `t·E(z)`.
pub fn alignment_distance(config: &ChainConfig, time: f64, phases: &[f64; 4]) -> Result<f64> {
    let n = config.n_qubits();
    if n > MAX_ISOLATION_QUBITS {
        return Err(Error::input(format!(
            "isolation check is capped at {MAX_ISOLATION_QUBITS} qubits, got {n}"
        )));
    }
    if !time.is_finite() || time < 0.0 {
        return Err(Error::input(format!(
            "time must be finite and non-negative, got {time}"
        )));
    }
    let c = config.couplings.as_array();
    let mut mismatch = [0.0; 4];
    for k in 0..4 {
        mismatch[k] = dd::wrap(dd::reduce_product(c[k], time) - dd::wrap(phases[k]));
    }
    let masks = TermMasks::new(n);
    let mut worst: f64 = 0.0;
    for z in 0..(1usize << n) {
        let v = masks.values(z);
        let diff: f64 = (0..4).map(|k| mismatch[k] * v[k] as f64).sum();
        worst = worst.max(2.0 * (0.5 * diff).sin().abs());
    }
    Ok(worst)
}

/// How far `e^{-itH_Z}` at the solved time is from `e^{-iφ H_active}`.
pub fn verify_isolation(config: &ChainConfig, result: &AlignmentResult, active: Term, phi: f64) -> Result<f64> {
    let mut phases = [0.0; 4];
    phases[active.index()] = phi;
    alignment_distance(config, result.time, &phases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> FrequencySet {
        FrequencySet::default()
    }

    #[test]
    fn residual_examples() {
        let f = defaults();
        let t0 = PhaseTarget::new([0.0; 4], 0.4).unwrap();
        assert_eq!(residuals(&f, 0.0, &t0).unwrap(), [0.0; 4]);

        let r = residuals(&f, 2.0 * PI, &t0).unwrap();
        assert!(r[0] < 1e-12);
        let expected_b = 2.0 * PI * (2f64.sqrt() - 1.0);
        assert!((r[1] - expected_b).abs() < 1e-9);
        assert!((r[1] - 2.60258).abs() < 1e-5);
        assert!(residuals(&f, -1.0, &t0).is_err());
    }

    #[test]
    fn residuals_lie_in_zero_pi() {
        let f = defaults();
        let t = PhaseTarget::new([1.0, 2.0, 3.0, 4.0], 0.4).unwrap();
        for k in 0..200 {
            let time = k as f64 * 12.345 + 1e9 * (k % 3) as f64;
            for r in residuals(&f, time, &t).unwrap() {
                assert!((0.0..=PI).contains(&r));
            }
        }
    }

    #[test]
    fn grid_zero_target_returns_zero() {
        let f = defaults();
        let t = PhaseTarget::new([0.0; 4], 0.4).unwrap();
        let r = find_time_grid(&f, &t, 100.0, 1e-3).unwrap();
        assert_eq!(r.time, 0.0);
        assert_eq!(r.residuals, [0.0; 4]);
        assert_eq!(r.solver, SolverKind::Grid);
    }

    #[test]
    fn grid_rejects_coarse_step() {
        let f = defaults();
        let t = PhaseTarget::new([0.0; 4], 0.4).unwrap();
        // 0.4 / (4 * sqrt 5) = 0.0447
        assert!(matches!(
            find_time_grid(&f, &t, 10.0, 0.05),
            Err(Error::InvalidInput(_))
        ));
        assert!(find_time_grid(&f, &t, 0.0, 1e-3).is_err());
    }

    #[test]
    fn grid_tight_epsilon_runs_out_of_range() {
        let f = defaults();
        let t = PhaseTarget::new([PI, 0.0, 0.0, 0.0], 0.05).unwrap();
        let err = find_time_grid(&f, &t, 10.0, 1e-3).unwrap_err();
        assert!(matches!(err, Error::NoSolutionInRange { .. }));
        // Independent confirmation by a plain sequential scan.
        for k in 0..=10_000 {
            let time = k as f64 * 1e-3;
            let r = residuals(&f, time, &t).unwrap();
            assert!(!qualifies(&r, 0.0125));
        }
    }

    #[test]
    fn grid_result_is_earliest() {
        let f = defaults();
        let target = PhaseTarget::new([PI, 0.0, 0.0, 0.0], 0.8).unwrap();
        let dt = 1e-2;
        let r = find_time_grid(&f, &target, 1e6, dt).unwrap();
        assert!(r.max_residual() < 0.2);
        let k_hit = (r.time / dt).round() as usize;
        for k in 0..k_hit {
            let res = residuals(&f, k as f64 * dt, &target).unwrap();
            assert!(!qualifies(&res, 0.2), "earlier hit at k={k}");
        }
    }

    #[test]
    fn lattice_zero_target() {
        let f = defaults();
        for eps in [0.4, 0.01] {
            let t = PhaseTarget::new([0.0; 4], eps).unwrap();
            let r = find_time_lattice(&f, &t).unwrap();
            assert_eq!(r.time, 0.0);
            assert_eq!(r.solver, SolverKind::Lattice);
        }
    }

    #[test]
    fn lattice_meets_residual_contract() {
        let f = defaults();
        let t = PhaseTarget::new([PI / 4.0, PI / 3.0, 0.0, 0.0], 0.1).unwrap();
        let r = find_time_lattice(&f, &t).unwrap();
        let check = residuals(&f, r.time, &t).unwrap();
        assert_eq!(check, r.residuals);
        assert!(check.iter().all(|&x| x < 0.025), "{check:?}");
    }

    #[test]
    fn lattice_handles_fine_epsilon() {
        let f = defaults();
        let t = PhaseTarget::new([1.0, 2.0, 3.0, 4.0], 0.004).unwrap();
        let r = find_time_lattice(&f, &t).unwrap();
        assert!(r.max_residual() < 0.001, "{r}");
    }

    #[test]
    fn isolation_identity() {
        let cfg = ChainConfig::with_defaults(2).unwrap();
        let res = AlignmentResult {
            time: 0.0,
            residuals: [0.0; 4],
            solver: SolverKind::Grid,
        };
        assert_eq!(verify_isolation(&cfg, &res, Term::A, 0.0).unwrap(), 0.0);
        let big = ChainConfig::with_defaults(16).unwrap();
        assert!(verify_isolation(&big, &res, Term::A, 0.0).is_err());
    }

    #[test]
    fn isolation_mismatch_is_near_maximal() {
        let f = defaults();
        let cfg = ChainConfig::with_defaults(2).unwrap();
        let target = PhaseTarget::isolating(Term::A, PI, 0.4).unwrap();
        let r = find_time_grid(&f, &target, 1e6, 1e-2).unwrap();
        let d = verify_isolation(&cfg, &r, Term::A, 0.0).unwrap();
        // Exact: max over z of 2|sin(Σ_k δ_k T_k / 2)| where the A-phase is ≈ π.
        let mut expected: f64 = 0.0;
        for z in 0..4usize {
            let bits = crate::chain_model::index_bits(2, z);
            let mut phase = 0.0;
            for term in Term::ALL {
                let tv = crate::chain_model::term_energy(&cfg, term, &bits).unwrap() as f64;
                phase += dd::reduce_product(f.get(term), r.time) * tv;
            }
            expected = expected.max(2.0 * (phase / 2.0).sin().abs());
        }
        assert!((d - expected).abs() < 1e-12);
        assert!(d > 1.95, "{d}");
    }

    #[test]
    fn display_format() {
        let r = AlignmentResult {
            time: 1.5,
            residuals: [0.0, 0.25, 0.5, 1.0],
            solver: SolverKind::Lattice,
        };
        assert_eq!(r.to_string(), "t=1.5 residuals=0,0.25,0.5,1 solver=LATTICE");
    }
}
