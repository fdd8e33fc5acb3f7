//! Canonical decomposition of two-qubit gates:
//! `U = e^{ig} (A₁⊗A₂) · exp(−i(c_x XX + c_y YY + c_z ZZ)) · (B₁⊗B₂)`.
//!
//! The first tensor factor acts on the pair's first qubit, i.e. matrix index
//! `2·bit(first) + bit(second)`.
//!
//! In the magic basis, local gates `SU(2)⊗SU(2)` become real rotations
//! `SO(4)` and the three Pauli products become real diagonal matrices. For
//! `U' = B†UB` the symmetric unitary `U'ᵀU'` therefore has real and imaginary
//! parts that commute and share a real orthogonal eigenbasis, which exposes
//! the core.

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evolution::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn magic_basis() -> Matrix4<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let o = c(0.0, 0.0);
    Matrix4::new(
        c(r, 0.0),
        c(0.0, r),
        o,
        o,
        o,
        o,
        c(0.0, r),
        c(r, 0.0),
        o,
        o,
        c(0.0, r),
        c(-r, 0.0),
        c(r, 0.0),
        c(0.0, -r),
        o,
        o,
    )
}

pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

pub fn pauli2(which: char) -> Matrix2<C64> {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match which {
        'X' => Matrix2::new(o, l, l, o),
        'Y' => Matrix2::new(o, -i, i, o),
        'Z' => Matrix2::new(l, o, o, -l),
        _ => Matrix2::identity(),
    }
}

/// Diagonals of `B†(P⊗P)B` for P = X, Y, Z; entries are ±1.
fn magic_diagonals() -> [[f64; 4]; 3] {
    let b = magic_basis();
    ['X', 'Y', 'Z'].map(|p| {
        let d = b.adjoint() * kron2(&pauli2(p), &pauli2(p)) * b;
        [0, 1, 2, 3].map(|j| d[(j, j)].re.round())
    })
}

/// `exp(−i(c_x XX + c_y YY + c_z ZZ))`.
pub fn core(cx: f64, cy: f64, cz: f64) -> Matrix4<C64> {
    let b = magic_basis();
    let d = magic_diagonals();
    let diag = Matrix4::from_diagonal(&Vector4::from_fn(|j, _| {
        C64::from_polar(1.0, -(cx * d[0][j] + cy * d[1][j] + cz * d[2][j]))
    }));
    b * diag * b.adjoint()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kak {
    pub global_phase: f64,
    /// Applied last, on the first and second qubit.
    pub a1: Matrix2<C64>,
    pub a2: Matrix2<C64>,
    /// Applied first.
    pub b1: Matrix2<C64>,
    pub b2: Matrix2<C64>,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl Kak {
    pub fn reconstruct(&self) -> Matrix4<C64> {
        kron2(&self.a1, &self.a2)
            * core(self.cx, self.cy, self.cz)
            * kron2(&self.b1, &self.b2)
            * C64::from_polar(1.0, self.global_phase)
    }
}

/// Splits a 4×4 matrix of the form `L⊗R` with `R` normalized to `det R = 1`.
pub fn factor_local(m: &Matrix4<C64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let block = |a: usize, col: usize| Matrix2::from_fn(|r, s| m[(2 * a + r, 2 * col + s)]);
    let (mut best, mut best_norm) = ((0, 0), -1.0);
    for a in 0..2 {
        for col in 0..2 {
            let n = block(a, col).norm();
            if n > best_norm {
                best = (a, col);
                best_norm = n;
            }
        }
    }
    let blk = block(best.0, best.1);
    let right = blk / blk.determinant().sqrt();
    let left = Matrix2::from_fn(|a, col| (right.adjoint() * block(a, col)).trace() / 2.0);
    (left, right)
}

/// Canonical decomposition of a 4×4 unitary (any determinant).
pub fn kak(u: &Matrix4<C64>) -> Result<Kak> {
    let det = u.determinant();
    if (det.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::input("two-qubit gate is not unitary"));
    }
    let phase0 = det.arg() / 4.0;
    let u = u * C64::from_polar(1.0, -phase0);
    let b = magic_basis();
    let up = b.adjoint() * u * b;
    let m2 = up.transpose() * up;
    let m2 = (m2 + m2.transpose()) * c(0.5, 0.0);
    let re = m2.map(|z| z.re);
    let im = m2.map(|z| z.im);

    let mut rng = ChaCha8Rng::seed_from_u64(0x6b616b);
    let mut found = None;
    for _ in 0..64 {
        let (wa, wb): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let h = re * wa + im * wb;
        let mut p = h.symmetric_eigen().eigenvectors;
        if p.determinant() < 0.0 {
            p.column_mut(0).neg_mut();
        }
        let pc = p.map(|x| c(x, 0.0));
        let d = pc.transpose() * m2 * pc;
        let off: f64 = (0..4)
            .flat_map(|r| (0..4).map(move |s| (r, s)))
            .filter(|(r, s)| r != s)
            .map(|(r, s)| d[(r, s)].norm())
            .fold(0.0, f64::max);
        if off < 1e-10 {
            found = Some((pc, d));
            break;
        }
    }
    let (p, d) = found.ok_or_else(|| Error::SolverFailure("could not diagonalize two-qubit gate".into()))?;

    let mut half: [f64; 4] = [0, 1, 2, 3].map(|j| d[(j, j)].arg() / 2.0);
    let prod: C64 = half.iter().map(|&h| C64::from_polar(1.0, h)).product();
    if prod.re < 0.0 {
        half[0] += std::f64::consts::PI;
    }
    let dsqrt_inv = Matrix4::from_diagonal(&Vector4::from_fn(|j, _| C64::from_polar(1.0, -half[j])));
    let k1 = (up * p * dsqrt_inv).map(|z| c(z.re, 0.0));
    let k2 = p.transpose();

    let (a1, a2) = factor_local(&(b * k1 * b.adjoint()));
    let (b1, b2) = factor_local(&(b * k2 * b.adjoint()));

    // half_j = g − Σ_P c_P d_P[j]
    let dg = magic_diagonals();
    let sys = nalgebra::Matrix4::<f64>::from_fn(|j, col| if col == 0 { 1.0 } else { -dg[col - 1][j] });
    let rhs = Vector4::from_fn(|j, _| half[j]);
    let sol = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SolverFailure("singular canonical-coordinate system".into()))?;

    Ok(Kak {
        global_phase: sol[0] + phase0,
        a1,
        a2,
        b1,
        b2,
        cx: sol[1],
        cy: sol[2],
        cz: sol[3],
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn random_su4(rng: &mut ChaCha8Rng) -> Matrix4<C64> {
        let m = Matrix4::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let q = m.qr().q();
        let det = q.determinant();
        q * C64::from_polar(1.0, -det.arg() / 4.0)
    }

    fn random_su2(rng: &mut ChaCha8Rng) -> Matrix2<C64> {
        let m = Matrix2::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let q = m.qr().q();
        q * C64::from_polar(1.0, -q.determinant().arg() / 2.0)
    }

    #[test]
    fn magic_basis_properties() {
        let b = magic_basis();
        assert!((b.adjoint() * b - Matrix4::identity()).norm() < 1e-15);
        for p in ['X', 'Y', 'Z'] {
            let d = b.adjoint() * kron2(&pauli2(p), &pauli2(p)) * b;
            for r in 0..4 {
                for s in 0..4 {
                    let expect = if r == s { d[(r, r)].re.signum() } else { 0.0 };
                    assert!((d[(r, s)] - c(expect, 0.0)).norm() < 1e-15);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let local = kron2(&random_su2(&mut rng), &random_su2(&mut rng));
        let m = b.adjoint() * local * b;
        assert!(m.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn core_matches_pauli_exponentials() {
        let xx = kron2(&pauli2('X'), &pauli2('X'));
        let yy = kron2(&pauli2('Y'), &pauli2('Y'));
        let zz = kron2(&pauli2('Z'), &pauli2('Z'));
        let (cx, cy, cz) = (0.3, -0.7, 1.1);
        let expo = |p: &Matrix4<C64>, t: f64| Matrix4::<C64>::identity() * c(t.cos(), 0.0) - p * c(0.0, t.sin());
        let direct = expo(&xx, cx) * expo(&yy, cy) * expo(&zz, cz);
        assert!((core(cx, cy, cz) - direct).norm() < 1e-14);
    }

    #[test]
    fn local_factor_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (l, r) = (random_su2(&mut rng), random_su2(&mut rng));
            let (l2, r2) = factor_local(&kron2(&l, &r));
            assert!((kron2(&l2, &r2) - kron2(&l, &r)).norm() < 1e-13);
            assert!((r2.determinant() - c(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn random_gates_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let u = random_su4(&mut rng);
            let k = kak(&u).unwrap();
            assert!((k.reconstruct() - u).norm() < 1e-9);
            for m in [k.a1, k.a2, k.b1, k.b2] {
                assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-9);
                assert!((m.adjoint() * m - Matrix2::identity()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn structured_gates_reconstruct() {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let cz = Matrix4::from_diagonal(&Vector4::new(l, l, l, -l));
        let mut cnot = Matrix4::zeros();
        for (r, s) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(r, s)] = l;
        }
        let mut swap = Matrix4::zeros();
        for (r, s) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(r, s)] = l;
        }
        let _ = o;
        for u in [
            Matrix4::identity(),
            cz,
            cnot,
            swap,
            core(0.2, 0.2, 0.2),
            kron2(&pauli2('X'), &pauli2('Y')),
        ] {
            let k = kak(&u).unwrap();
            assert!((k.reconstruct() - u).norm() < 1e-9, "{u}");
        }
    }

    /// Canonical coordinates folded into the Weyl-chamber-like fundamental
    /// region (each mod π/2, folded to [0, π/4], sorted).
    fn folded(k: &Kak) -> [f64; 3] {
        let f = |x: f64| {
            let r = x.rem_euclid(PI / 2.0);
            r.min(PI / 2.0 - r)
        };
        let mut v = [f(k.cx), f(k.cy), f(k.cz)];
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn cz_is_locally_a_quarter_turn_core() {
        let l = c(1.0, 0.0);
        let cz = Matrix4::from_diagonal(&Vector4::new(l, l, l, -l));
        let k = kak(&cz).unwrap();
        let v = folded(&k);
        assert!(
            v[0].abs() < 1e-9 && v[1].abs() < 1e-9 && (v[2] - PI / 4.0).abs() < 1e-9,
            "{v:?}"
        );

        // Oracle: the core alone, dressed with the CZ-equivalent locals, is
        // CZ. Independently, exp(−iπ/4 ZZ) equals CZ up to Z rotations.
        let zz = core(0.0, 0.0, PI / 4.0);
        let z_half = |s: f64| {
            Matrix2::new(
                C64::from_polar(1.0, s),
                c(0.0, 0.0),
                c(0.0, 0.0),
                C64::from_polar(1.0, -s),
            )
        };
        let dressed = kron2(&z_half(PI / 4.0), &z_half(PI / 4.0)) * zz;
        let phase = cz[(0, 0)] / dressed[(0, 0)];
        assert!((dressed * phase - cz).norm() < 1e-12);
    }
}
