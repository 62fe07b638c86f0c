use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_prime::nt_funcs::is_prime64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Result, WittError};

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            _ => s
                .parse()
                .map(Place::Prime)
                .map_err(|e| format!("bad place {s:?}: {e}")),
        }
    }
}

/// Hilbert symbol `(a, b)_q` over the completion of `Q` at `q`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, q: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(WittError::ZeroArgument);
    }
    // a and a·den² share a square class
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    let p = match q {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            })
        }
        Place::Prime(p) if is_prime64(p) => p,
        Place::Prime(p) => return Err(WittError::NotPrime(p)),
    };
    let pb = BigInt::from(p);
    let (alpha, u) = split(&a, &pb);
    let (beta, v) = split(&b, &pb);
    if p == 2 {
        let eps = |x: &BigInt| -> u64 { ((x.mod_floor(&8.into())).to_u64().unwrap() - 1) / 2 % 2 };
        let omega = |x: &BigInt| -> u64 {
            let r = x.mod_floor(&8.into()).to_u64().unwrap();
            ((r * r - 1) / 8) % 2
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut sign = if alpha * beta % 2 == 1 && (p - 1) / 2 % 2 == 1 {
        -1
    } else {
        1
    };
    if beta % 2 == 1 {
        sign *= legendre(&u, &pb);
    }
    if alpha % 2 == 1 {
        sign *= legendre(&v, &pb);
    }
    Ok(sign)
}

fn split(x: &BigInt, p: &BigInt) -> (u64, BigInt) {
    let mut x = x.clone();
    let mut k = 0;
    while (&x % p).is_zero() {
        x /= p;
        k += 1;
    }
    (k, x)
}

/// Euler's criterion; `u` must be prime to the odd prime `p`.
fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let r = u.mod_floor(p).modpow(&((p - 1) / 2), p);
    if r.is_one() {
        1
    } else {
        -1
    }
}
