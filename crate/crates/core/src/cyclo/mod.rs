//! Exact arithmetic in cyclotomic fields `Q(ζ_d)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^(φ(d)-1)` reduced
//! modulo the cyclotomic polynomial `Φ_d`, as an integer numerator vector
//! over a positive common denominator. The representation is canonical, so
//! equality and zero-testing are syntactic.
//!
//! Sign determination of real elements at a complex embedding
//! `ζ ↦ exp(2πis/d)` goes through [`certified_sign`], which refines a
//! fixed-point enclosure until it excludes zero.

mod fixed;
pub mod matrix;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use fixed::{CosTable, GUARD_BITS};

/// Starting precision of the sign refinement loop, in bits.
pub const START_PRECISION_BITS: u32 = 64;
/// Hard cap on the sign refinement loop, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("operands live in different fields: Q(zeta_{0}) and Q(zeta_{1})")]
    FieldMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not fixed by the involution, so it has no sign")]
    NotReal,
    #[error("embedding exponent {s} is not coprime to the order {d}")]
    BadEmbedding { d: u64, s: i64 },
    #[error("sign could not be certified within {0} bits of precision")]
    PrecisionExhausted(u32),
}

/// Precision settings for certified sign evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            max_bits: DEFAULT_PRECISION_CAP,
        }
    }
}

/// The field `Q(ζ_d)` together with its defining polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    d: u64,
    /// Monic `Φ_d`, lowest degree first.
    phi: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(d: u64) -> Result<Arc<Self>, CycloError> {
        if d == 0 {
            return Err(CycloError::ZeroOrder);
        }
        Ok(Arc::new(CyclotomicField {
            d,
            phi: cyclotomic_polynomial(d),
        }))
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    /// Degree `φ(d)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi_coefficients(&self) -> &[BigInt] {
        &self.phi
    }

    /// Reduce an exponent-indexed coefficient vector modulo `x^d - 1` and `Φ_d`.
    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.d as usize;
        if v.len() > d {
            let extra = v.split_off(d);
            for (i, c) in extra.into_iter().enumerate() {
                v[i % d] += c;
            }
        }
        let n = self.degree();
        for k in (n..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[k]);
            for i in 0..n {
                if !self.phi[i].is_zero() {
                    v[k - n + i] -= &c * &self.phi[i];
                }
            }
        }
        v.resize(n, BigInt::zero());
        v
    }
}

/// Integer coefficients of the `d`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(d: u64) -> Vec<BigInt> {
    // Φ_d = Π_{e | d} (x^e - 1)^{μ(d/e)}
    let divisors: Vec<u64> = (1..=d).filter(|e| d % e == 0).collect();
    let mut num = vec![BigInt::one()];
    let mut dens: Vec<u64> = Vec::new();
    for &e in &divisors {
        match mobius(d / e) {
            1 => num = mul_x_pow_minus_one(&num, e as usize),
            -1 => dens.push(e),
            _ => {}
        }
    }
    for e in dens {
        num = div_x_pow_minus_one(&num, e as usize);
    }
    while num.len() > 1 && num.last().is_some_and(|c| c.is_zero()) {
        num.pop();
    }
    num
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn mul_x_pow_minus_one(p: &[BigInt], e: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + e];
    for (i, c) in p.iter().enumerate() {
        out[i + e] += c;
        out[i] -= c;
    }
    out
}

fn div_x_pow_minus_one(p: &[BigInt], e: usize) -> Vec<BigInt> {
    // p = q (x^e - 1); recover q from the top down: q_{i} = p_{i+e} + q_{i+e}
    let n = p.len() - e;
    let mut q = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let upper = if i + e < n {
            q[i + e].clone()
        } else {
            BigInt::zero()
        };
        q[i] = &p[i + e] + upper;
    }
    q
}

/// Euler's totient.
pub fn totient(d: u64) -> u64 {
    (1..=d).filter(|k| k.gcd(&d) == 1).count() as u64
}

/// Returns `(p, a)` when `d = p^a` with `a >= 1`.
pub fn prime_power(d: u64) -> Option<(u64, u32)> {
    if d < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= d && d % p != 0 {
        p += 1;
    }
    if d % p != 0 {
        p = d;
    }
    let mut rest = d;
    let mut a = 0;
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

/// An element of `Q(ζ_d)` in canonical power-basis form.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.d == other.field.d && self.den == other.den && self.num == other.num
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = BigRational::new(c.clone(), self.den.clone());
            terms.push(match k {
                0 => format!("{coeff}"),
                1 => format!("{coeff}*z"),
                _ => format!("{coeff}*z^{k}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl CyclotomicNumber {
    fn from_parts(field: Arc<CyclotomicField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let num = field.reduce(num);
        let mut x = CyclotomicNumber { field, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        let n = field.degree();
        CyclotomicNumber {
            field: field.clone(),
            num: vec![BigInt::zero(); n],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, n: impl Into<BigInt>) -> Self {
        Self::from_parts(field.clone(), vec![n.into()], BigInt::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: &BigRational) -> Self {
        Self::from_parts(field.clone(), vec![q.numer().clone()], q.denom().clone())
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let e = k.rem_euclid(field.d as i64) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        Self::from_parts(field.clone(), v, BigInt::one())
    }

    /// Build from rational coefficients on powers of ζ (any length).
    pub fn from_power_coefficients(field: &Arc<CyclotomicField>, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(field.clone(), num, den)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.d
    }

    /// Power-basis coefficients as exact rationals (length `φ(d)`).
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_field(&self, other: &Self) -> Result<(), CycloError> {
        if self.field.d == other.field.d {
            Ok(())
        } else {
            Err(CycloError::FieldMismatch(self.field.d, other.field.d))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_field(other)?;
        let den = &self.den * &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        let mut x = CyclotomicNumber {
            field: self.field.clone(),
            num,
            den,
        };
        x.normalize();
        Ok(x)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let n = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_parts(
            self.field.clone(),
            prod,
            &self.den * &other.den,
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_field(other)?;
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    fn neg_ref(&self) -> Self {
        CyclotomicNumber {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_parts(
            self.field.clone(),
            self.num.iter().map(|c| c * q.numer()).collect(),
            &self.den * q.denom(),
        )
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_d`.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &q.recip()));
        }
        let to_q = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        let mut r0 = trim(to_q(&self.field.phi));
        let mut r1 = trim(to_q(&self.num));
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant c, and s1 * num ≡ c (mod Φ)
        let c = r1[0].clone();
        let scale = BigRational::from_integer(self.den.clone()) / c;
        let coeffs: Vec<BigRational> = s1.iter().map(|x| x * &scale).collect();
        Ok(Self::from_power_coefficients(&self.field, &coeffs))
    }

    /// The involution `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The automorphism `ζ ↦ ζ^t` (t coprime to d); non-coprime `t` gives a
    /// ring map into the same field only when used on rational elements.
    pub fn galois(&self, t: i64) -> Self {
        let d = self.field.d as i64;
        let mut v = vec![BigInt::zero(); self.field.d as usize];
        for (k, c) in self.num.iter().enumerate() {
            let e = (k as i64 * t).rem_euclid(d) as usize;
            v[e] += c;
        }
        Self::from_parts(self.field.clone(), v, self.den.clone())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Fixed-point enclosure of the real part at the embedding `ζ ↦ e^{2πis/d}`:
    /// returns the centre scaled by `2^w` and the radius in the same units.
    fn real_part_enclosure(&self, s: i64, prec: u32) -> (BigInt, BigInt, u32) {
        let w = prec + GUARD_BITS;
        let d = self.field.d;
        let table = CosTable::new(d, w);
        let mut centre = BigInt::zero();
        let mut weight = BigInt::zero();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = (k as i64 * s).rem_euclid(d as i64) as u64;
            centre += c * table.get(j);
            weight += fixed::abs(c);
        }
        // each cosine is within 2^-prec = 2^GUARD_BITS units of scale 2^-w
        let radius = weight << GUARD_BITS;
        (centre, radius, table.w)
    }

    /// Rational enclosure `[lo, hi]` of the real part at embedding `s`,
    /// of width at most `2^(1-prec) * Σ|coefficients|`.
    pub fn enclose(&self, s: i64, prec: u32) -> (BigRational, BigRational) {
        let (centre, radius, w) = self.real_part_enclosure(s, prec);
        let scale = BigInt::one() << w;
        let den = &scale * &self.den;
        (
            BigRational::new(&centre - &radius, den.clone()),
            BigRational::new(&centre + &radius, den),
        )
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigRational::zero());
    }
    v
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRational::zero()], trim(r));
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = &b[db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = &r[k] / lead;
        for i in 0..=db {
            let t = &c * &b[i];
            r[k - db + i] -= t;
        }
        q[k - db] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

/// Certified sign of a real element at the embedding `ζ ↦ e^{2πis/d}`.
pub fn certified_sign(x: &CyclotomicNumber, s: i64) -> Result<i8, CycloError> {
    certified_sign_with(x, s, Precision::default())
}

/// [`certified_sign`] with an explicit precision cap.
pub fn certified_sign_with(
    x: &CyclotomicNumber,
    s: i64,
    prec: Precision,
) -> Result<i8, CycloError> {
    let d = x.order();
    if (s.unsigned_abs()).gcd(&d) != 1 {
        return Err(CycloError::BadEmbedding { d, s });
    }
    if !x.is_real() {
        return Err(CycloError::NotReal);
    }
    sign_unchecked(x, s, prec)
}

/// Sign of the real part at embedding `s`, skipping the reality and
/// coprimality checks. Used where the caller has established both.
pub(crate) fn sign_unchecked(
    x: &CyclotomicNumber,
    s: i64,
    prec: Precision,
) -> Result<i8, CycloError> {
    if x.is_zero() {
        return Ok(0);
    }
    if let Some(q) = x.as_rational() {
        return Ok(if q.is_positive() { 1 } else { -1 });
    }
    let mut bits = START_PRECISION_BITS;
    while bits <= prec.max_bits {
        let (centre, radius, _) = x.real_part_enclosure(s, bits);
        if centre.abs() > radius {
            return Ok(if centre.is_positive() { 1 } else { -1 });
        }
        bits = bits.saturating_mul(2);
    }
    Err(CycloError::PrecisionExhausted(prec.max_bits))
}

/// Floating-point value of the real part at embedding `s` (reporting only).
pub fn approx_real(x: &CyclotomicNumber, s: i64) -> f64 {
    let d = x.order() as f64;
    x.coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.to_f64().unwrap_or(f64::NAN)
                * (2.0 * std::f64::consts::PI * (k as f64) * (s as f64) / d).cos()
        })
        .sum()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs)
                    .expect("cyclotomic operands from different fields")
            }
        }
        impl std::ops::$tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self)
                    .$checked(&rhs)
                    .expect("cyclotomic operands from different fields")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.neg_ref()
    }
}

impl std::ops::Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests;

impl serde::Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
