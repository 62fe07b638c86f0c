use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs::factorize;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{diagonalize, HermitianForm, Result, WittError};
use crate::cyclo::{sign_unchecked, CyclotomicField, CyclotomicNumber, Precision};

/// Discriminant class modulo norms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Disc {
    /// Over `Q`: a square-free integer.
    Rational { value: BigInt },
    /// Over `Q(i)`: sign and the primes `≡ 3 mod 4` of odd exponent. The parity
    /// of the exponent of 2 is kept for reference; 2 is itself a norm.
    Gaussian(GaussianDisc),
    /// Other orders: the unreduced element of the real subfield.
    Field { value: CyclotomicNumber },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaussianDisc {
    pub negative: bool,
    pub primes: Vec<u64>,
    pub two_odd: bool,
}

impl Disc {
    fn from_element(x: &CyclotomicNumber) -> Disc {
        let d = x.order();
        match (d, x.as_rational()) {
            (1 | 2, Some(q)) => Disc::Rational {
                value: squarefree(&q),
            },
            (4, Some(q)) => Disc::Gaussian(gaussian(&q)),
            // rational squares are norms from the real subfield
            (_, Some(q)) => Disc::Field {
                value: CyclotomicNumber::from_integer(x.field(), squarefree(&q)),
            },
            _ => Disc::Field { value: x.clone() },
        }
    }

    /// Whether the class is visibly trivial (a norm). For unreduced classes
    /// only the literal value 1 is recognised.
    pub fn is_norm(&self) -> bool {
        match self {
            Disc::Rational { value } => value.is_one(),
            Disc::Gaussian(g) => !g.negative && g.primes.is_empty(),
            Disc::Field { value } => value.is_one(),
        }
    }

    /// A rational representative, when the class has one.
    pub fn rational(&self) -> Option<BigRational> {
        match self {
            Disc::Rational { value } => Some(BigRational::from_integer(value.clone())),
            Disc::Gaussian(g) => {
                let mut v: BigInt = g.primes.iter().map(|&p| BigInt::from(p)).product();
                if g.two_odd {
                    v *= 2;
                }
                if g.negative {
                    v = -v;
                }
                Some(BigRational::from_integer(v))
            }
            Disc::Field { value } => value.as_rational(),
        }
    }
}

fn odd_primes(q: &BigRational) -> BTreeMap<BigUint, usize> {
    let mut out = BTreeMap::new();
    for part in [q.numer(), q.denom()] {
        for (p, e) in factorize(part.magnitude().clone()) {
            *out.entry(p).or_insert(0) += e;
        }
    }
    out.retain(|_, e| *e % 2 == 1);
    out
}

fn squarefree(q: &BigRational) -> BigInt {
    let v: BigUint = odd_primes(q).into_keys().product();
    BigInt::from_biguint(
        if q.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        },
        v,
    )
}

fn gaussian(q: &BigRational) -> GaussianDisc {
    let odd = odd_primes(q);
    let two = BigUint::from(2u32);
    let four = BigUint::from(4u32);
    GaussianDisc {
        negative: q.is_negative(),
        two_odd: odd.contains_key(&two),
        primes: odd
            .keys()
            .filter(|p| (*p % &four) == BigUint::from(3u32))
            .map(|p| p.try_into().expect("prime fits in u64"))
            .collect(),
    }
}

/// Invariant tuple of a Witt class. `rank`, `disc` and `diagonal` are absent
/// for classes assembled from signatures alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WittClass {
    pub d: u64,
    pub rank_mod_2: Option<u8>,
    pub rank: Option<usize>,
    pub signatures: BTreeMap<i64, i64>,
    pub disc: Option<Disc>,
    pub diagonal: Option<Vec<CyclotomicNumber>>,
}

/// Embeddings, one per conjugate pair.
pub(crate) fn embeddings(d: u64) -> Vec<i64> {
    (1..=(d / 2).max(1))
        .filter(|s| s.gcd(&d) == 1)
        .map(|s| s as i64)
        .collect()
}

impl WittClass {
    pub fn zero(d: u64) -> Self {
        WittClass {
            d,
            rank_mod_2: Some(0),
            rank: Some(0),
            signatures: embeddings(d).into_iter().map(|s| (s, 0)).collect(),
            disc: Some(Disc::from_element(&CyclotomicNumber::one(
                &CyclotomicField::new(d.max(1)).expect("positive order"),
            ))),
            diagonal: Some(vec![]),
        }
    }

    /// A class known only through its signatures.
    pub fn from_signatures(d: u64, signatures: BTreeMap<i64, i64>) -> Self {
        WittClass {
            d,
            rank_mod_2: None,
            rank: None,
            signatures,
            disc: None,
            diagonal: None,
        }
    }

    pub fn from_diagonal(
        field: &std::sync::Arc<CyclotomicField>,
        diagonal: Vec<CyclotomicNumber>,
        prec: Precision,
    ) -> Result<Self> {
        let d = field.order();
        let mut signatures = BTreeMap::new();
        for s in embeddings(d) {
            let mut total = 0;
            for x in &diagonal {
                total += sign_unchecked(x, s, prec)? as i64;
            }
            signatures.insert(s, total);
        }
        // <a> ⊕ <-a> is hyperbolic; dropping such pairs leaves the disc class alone
        let mut kept: Vec<&CyclotomicNumber> = Vec::with_capacity(diagonal.len());
        for e in &diagonal {
            let neg = -e;
            match kept.iter().position(|z| **z == neg) {
                Some(i) => {
                    kept.remove(i);
                }
                None => kept.push(e),
            }
        }
        let k = diagonal.len();
        let kk = kept.len();
        let mut det = CyclotomicNumber::one(field);
        for x in kept {
            det = &det * x;
        }
        if (kk * kk.saturating_sub(1) / 2) % 2 == 1 {
            det = -det;
        }
        Ok(WittClass {
            d,
            rank_mod_2: Some((k % 2) as u8),
            rank: Some(k),
            signatures,
            disc: Some(Disc::from_element(&det)),
            diagonal: Some(diagonal),
        })
    }

    /// Signature at the standard embedding `ζ_d ↦ e^{2πi/d}`.
    pub fn signature(&self) -> i64 {
        self.signatures.get(&1).copied().unwrap_or(0)
    }

    pub fn disc(&self) -> Result<&Disc> {
        self.disc.as_ref().ok_or(WittError::DiscUnavailable)
    }

    /// All recorded invariants vanish.
    pub fn is_trivial(&self) -> bool {
        self.signatures.values().all(|&v| v == 0)
            && self.rank_mod_2.unwrap_or(0) == 0
            && self.disc.as_ref().map_or(true, Disc::is_norm)
    }
}

pub fn witt_invariants(form: &HermitianForm) -> Result<WittClass> {
    witt_invariants_with(form, Precision::default())
}

pub fn witt_invariants_with(form: &HermitianForm, prec: Precision) -> Result<WittClass> {
    let diag = diagonalize(form);
    WittClass::from_diagonal(form.field(), diag.diagonal, prec)
}

/// Orthogonal sum. Diagonal pairs `a, -a` are hyperbolic and cancel.
pub fn witt_add(x: &WittClass, y: &WittClass) -> Result<WittClass> {
    if x.d != y.d {
        return Err(WittError::OrderMismatch(x.d, y.d));
    }
    if let (Some(a), Some(b)) = (&x.diagonal, &y.diagonal) {
        let mut out: Vec<CyclotomicNumber> = Vec::with_capacity(a.len() + b.len());
        for e in a.iter().chain(b) {
            let neg = -e;
            match out.iter().position(|z| *z == neg) {
                Some(i) => {
                    out.remove(i);
                }
                None => out.push(e.clone()),
            }
        }
        let field = CyclotomicField::new(x.d)?;
        let mut signatures = x.signatures.clone();
        let fresh = WittClass::from_diagonal(&field, out, Precision::default())?;
        for (s, v) in &mut signatures {
            *v += y.signatures.get(s).copied().unwrap_or(0);
        }
        debug_assert_eq!(signatures, fresh.signatures);
        return Ok(fresh);
    }
    let mut signatures = x.signatures.clone();
    for (s, v) in &y.signatures {
        *signatures.entry(*s).or_insert(0) += v;
    }
    Ok(WittClass::from_signatures(x.d, signatures))
}

pub fn witt_neg(x: &WittClass) -> WittClass {
    let signatures = x.signatures.iter().map(|(s, v)| (*s, -v)).collect();
    match &x.diagonal {
        Some(diag) => {
            let field = CyclotomicField::new(x.d).expect("positive order");
            let neg: Vec<CyclotomicNumber> = diag.iter().map(|e| -e).collect();
            let mut out = WittClass::from_diagonal(&field, neg, Precision::default())
                .expect("negation keeps signs certifiable");
            out.signatures = signatures;
            out
        }
        None => WittClass::from_signatures(x.d, signatures),
    }
}
