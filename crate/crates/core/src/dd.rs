//! Double-double arithmetic and argument reduction modulo 2π.
//!
//! Pulse durations for well-aligned phases routinely reach 10⁹–10¹²; at that
//! magnitude a plain `c * t` keeps only a few digits of the wrapped phase.
//! Every phase in the crate goes through [`reduce_product`], which forms the
//! product exactly and subtracts the nearest multiple of 2π with ~106 bits.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// 2π split into three non-overlapping doubles.
const TWO_PI_HI: f64 = TAU;
const TWO_PI_MID: f64 = 2.449_293_598_294_706_4e-16;
const TWO_PI_LO: f64 = -5.989_539_619_436_679e-33;

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const TWO_PI: DoubleDouble = DoubleDouble {
        hi: TWO_PI_HI,
        lo: TWO_PI_MID,
    };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = quick_two_sum(p, e + self.lo * x);
        DoubleDouble { hi, lo }
    }

    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let r = self - DoubleDouble::product(q1, x);
        let q2 = r.hi / x;
        let r = r - DoubleDouble::product(q2, x);
        let q3 = r.hi / x;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }.add_f64(q3)
    }

    /// Nearest integer, returned as a double (exact below 2⁵³).
    pub fn round(self) -> f64 {
        let r = self.hi.round();
        let frac = self.add_f64(-r).to_f64();
        if frac > 0.5 {
            r + 1.0
        } else if frac < -0.5 {
            r - 1.0
        } else {
            r
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, other: DoubleDouble) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, other: DoubleDouble) -> Self {
        self + (-other)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, other: DoubleDouble) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    fn div(self, other: DoubleDouble) -> Self {
        let q1 = self.hi / other.hi;
        let r = self - other.mul_f64(q1);
        let q2 = r.hi / other.hi;
        let r = r - other.mul_f64(q2);
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }.add_f64(q3)
    }
}

/// `k · 2π` for an integral `k`, to about 150 bits.
pub fn two_pi_multiple(k: f64) -> DoubleDouble {
    let (a, b) = two_prod(k, TWO_PI_HI);
    let (c, d) = two_prod(k, TWO_PI_MID);
    (DoubleDouble { hi: a, lo: b } + DoubleDouble { hi: c, lo: d }).add_f64(k * TWO_PI_LO)
}

/// Reduces `x` into `(-π, π]` using extended-precision arithmetic.
pub fn reduce(x: DoubleDouble) -> f64 {
    let k = x.hi / TWO_PI_HI;
    let k = k.round();
    let r = (x - two_pi_multiple(k)).to_f64();
    wrap(r)
}

/// Wraps `c · t` into `(-π, π]`, forming the product exactly.
pub fn reduce_product(c: f64, t: f64) -> f64 {
    reduce(DoubleDouble::product(c, t))
}

/// Wraps an ordinary double into `(-π, π]`.
pub fn wrap(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let k = (x / TWO_PI_HI).round();
    let mut r = (DoubleDouble::from_f64(x) - two_pi_multiple(k)).to_f64();
    // PI is 1.2e-16 short of π, so values within an ulp of ±π land on PI.
    if r <= -PI {
        r = if r > -PI - 1e-15 { PI } else { r + TWO_PI_HI };
    } else if r > PI {
        r = if r < PI + 1e-15 { PI } else { r - TWO_PI_HI };
    }
    r
}

/// Wraps into `[0, 2π)`. Values already in range are returned unchanged.
pub fn wrap_positive(x: f64) -> f64 {
    if (0.0..TWO_PI_HI).contains(&x) {
        return x;
    }
    let r = wrap(x);
    let r = if r < 0.0 { r + TWO_PI_HI } else { r };
    if r >= TWO_PI_HI {
        0.0
    } else {
        r
    }
}
