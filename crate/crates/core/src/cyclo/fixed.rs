//! Fixed-point enclosures of `cos(2πj/d)`.
//!
//! Values are big integers scaled by `2^w`. Every routine here truncates,
//! and the accumulated error stays far below `2^GUARD_BITS` units in the
//! last place for any working precision up to 2^17 bits, so callers treat
//! a result computed at `prec + GUARD_BITS` bits as correct to within
//! `2^-prec`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) const GUARD_BITS: u32 = 64;

fn atan_inv(x: u64, w: u32) -> BigInt {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w) / &x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// π scaled by `2^w` (Machin's formula).
pub(crate) fn pi_fixed(w: u32) -> BigInt {
    let a = atan_inv(5, w);
    let b = atan_inv(239, w);
    a * 16 - b * 4
}

/// `cos(x)` for `0 <= x <= π/2`, both scaled by `2^w`.
fn cos_small(x: &BigInt, w: u32) -> BigInt {
    let x2 = (x * x) >> w;
    let mut term = BigInt::one() << w;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = (&term * &x2) >> w;
        term /= BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

/// Table of `cos(2π j / d)` for `j` in `0..d`, scaled by `2^w`.
pub(crate) struct CosTable {
    pub(crate) w: u32,
    values: Vec<BigInt>,
}

impl CosTable {
    pub(crate) fn new(d: u64, w: u32) -> Self {
        let pi = pi_fixed(w);
        let values = (0..d).map(|j| cos_turn(&pi, j, d, w)).collect();
        CosTable { w, values }
    }

    pub(crate) fn get(&self, j: u64) -> &BigInt {
        &self.values[(j % self.values.len() as u64) as usize]
    }
}

/// `cos(2πj/d)` using the symmetries of cosine so the Taylor series only
/// ever sees arguments in `[0, π/2]`.
fn cos_turn(pi: &BigInt, j: u64, d: u64, w: u32) -> BigInt {
    let j = j % d;
    // angle = 2πj/d folded into [0, π]: use min(j, d - j)
    let j = j.min(d - j);
    // 4j vs d decides whether the angle exceeds π/2
    if 4 * j == d {
        return BigInt::zero();
    }
    if 4 * j < d {
        let x = (pi * BigInt::from(2 * j)).div_floor(&BigInt::from(d));
        cos_small(&x, w)
    } else {
        // cos(θ) = -cos(π - θ), π - θ = π (d - 2j) / d
        let x = (pi * BigInt::from(d - 2 * j)).div_floor(&BigInt::from(d));
        -cos_small(&x, w)
    }
}

/// Absolute value helper kept here so callers do not need `Signed`.
pub(crate) fn abs(x: &BigInt) -> BigInt {
    x.abs()
}
