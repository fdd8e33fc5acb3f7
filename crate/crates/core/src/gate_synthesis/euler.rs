//! Single-qubit rotations and the Z–Y–Z Euler decomposition.
//!
//! Rotations follow `R_P(θ) = e^{-iθP/2}`.

use nalgebra::Matrix2;

use crate::evolution::C64;

pub fn rz(theta: f64) -> Matrix2<C64> {
    Matrix2::new(
        C64::from_polar(1.0, -theta / 2.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::from_polar(1.0, theta / 2.0),
    )
}

pub fn ry(theta: f64) -> Matrix2<C64> {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
}

/// `U = e^{i·phase} · Rz(alpha) · Ry(beta) · Rz(gamma)`, so `Rz(gamma)` acts
/// first. `beta` lies in `[0, π]`; when `beta` is 0 the whole Z rotation is
/// carried by `alpha` and `gamma` is 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerZyz {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub phase: f64,
}

impl EulerZyz {
    pub fn matrix(&self) -> Matrix2<C64> {
        rz(self.alpha) * ry(self.beta) * rz(self.gamma) * C64::from_polar(1.0, self.phase)
    }
}

const DEGENERATE: f64 = 1e-12;

pub fn euler_zyz(u: &Matrix2<C64>) -> EulerZyz {
    let phase = u.determinant().arg() / 2.0;
    let v = u * C64::from_polar(1.0, -phase);
    // v = [[a, -b*], [b, a*]] with a = e^{-i(α+γ)/2} cos(β/2) and
    // b = e^{i(α-γ)/2} sin(β/2).
    let (a, b) = (v[(0, 0)], v[(1, 0)]);
    let beta = 2.0 * b.norm().atan2(a.norm());
    let (alpha, gamma) = if b.norm() < DEGENERATE {
        (-2.0 * a.arg(), 0.0)
    } else if a.norm() < DEGENERATE {
        (2.0 * b.arg(), 0.0)
    } else {
        let sum = -2.0 * a.arg();
        let diff = 2.0 * b.arg();
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    EulerZyz {
        alpha,
        beta,
        gamma,
        phase,
    }
}
