//! Floating-point LLL and nearest-plane rounding for small lattices whose
//! points are given by an exact embedding of integer coefficient vectors.
//!
//! Basis vectors are never updated by floating subtraction. Every change is
//! applied to the integer coefficients and the vector is re-embedded, so the
//! coordinates stay accurate even when the coefficients reach 10¹².

pub(crate) const DIM: usize = 4;

pub(crate) type Coeffs = [i128; DIM];
pub(crate) type Vector = [f64; DIM];

fn dot(a: &Vector, b: &Vector) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct GramSchmidt {
    /// Orthogonalized vectors.
    star: [Vector; DIM],
    /// Squared norms of `star`.
    norms: [f64; DIM],
    mu: [[f64; DIM]; DIM],
}

fn gram_schmidt(b: &[Vector; DIM]) -> GramSchmidt {
    let mut star = [[0.0; DIM]; DIM];
    let mut norms = [0.0; DIM];
    let mut mu = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        let mut v = b[i];
        for j in 0..i {
            let m = if norms[j] > 0.0 {
                dot(&b[i], &star[j]) / norms[j]
            } else {
                0.0
            };
            mu[i][j] = m;
            for k in 0..DIM {
                v[k] -= m * star[j][k];
            }
        }
        norms[i] = dot(&v, &v);
        star[i] = v;
    }
    GramSchmidt { star, norms, mu }
}

/// A reduced basis: `vectors[i] = embed(coeffs[i])`.
pub(crate) struct ReducedBasis {
    pub coeffs: [Coeffs; DIM],
    pub vectors: [Vector; DIM],
}

fn sub_scaled(a: &Coeffs, q: i128, b: &Coeffs) -> Coeffs {
    let mut out = *a;
    for k in 0..DIM {
        out[k] -= q * b[k];
    }
    out
}

/// LLL-reduces the lattice spanned by `coeffs` (under `embed`) with
/// Lovász parameter `delta`.
pub(crate) fn lll<F>(mut coeffs: [Coeffs; DIM], embed: F, delta: f64) -> ReducedBasis
where
    F: Fn(&Coeffs) -> Vector,
{
    let mut vectors: [Vector; DIM] = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        vectors[i] = embed(&coeffs[i]);
    }
    let mut k = 1;
    let mut iterations = 0;
    while k < DIM && iterations < 10_000 {
        iterations += 1;
        for j in (0..k).rev() {
            let gs = gram_schmidt(&vectors);
            let q = gs.mu[k][j].round();
            if q != 0.0 && q.is_finite() {
                coeffs[k] = sub_scaled(&coeffs[k], q as i128, &coeffs[j]);
                vectors[k] = embed(&coeffs[k]);
            }
        }
        let gs = gram_schmidt(&vectors);
        let m = gs.mu[k][k - 1];
        if gs.norms[k] >= (delta - m * m) * gs.norms[k - 1] {
            k += 1;
        } else {
            coeffs.swap(k, k - 1);
            vectors.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    ReducedBasis { coeffs, vectors }
}

impl ReducedBasis {
    /// Babai's nearest-plane rounding: integer weights `w` such that
    /// `Σ w_i vectors[i]` is close to `target`.
    pub fn nearest_plane(&self, target: &Vector) -> [i128; DIM] {
        let gs = gram_schmidt(&self.vectors);
        let mut residual = *target;
        let mut weights = [0i128; DIM];
        for i in (0..DIM).rev() {
            if gs.norms[i] <= 0.0 {
                continue;
            }
            let c = (dot(&residual, &gs.star[i]) / gs.norms[i]).round();
            weights[i] = c as i128;
            for (r, v) in residual.iter_mut().zip(&self.vectors[i]) {
                *r -= c * v;
            }
        }
        weights
    }

    /// Integer coefficient vector of `Σ w_i basis_i`.
    pub fn combine(&self, weights: &[i128; DIM]) -> Coeffs {
        let mut out = [0i128; DIM];
        for (w, c) in weights.iter().zip(&self.coeffs) {
            for k in 0..DIM {
                out[k] += w * c[k];
            }
        }
        out
    }
}
