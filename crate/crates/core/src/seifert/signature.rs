use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Result, SeifertError, SeifertMatrix};
use crate::cyclo::matrix::{inertia_from_charpoly, CMatrix};
use crate::cyclo::{CyclotomicField, CyclotomicNumber, Precision};

/// Signature of `M(ω) = (1-ω)A + (1-ω̄)Aᵀ` on its nonsingular part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSignature {
    pub value: i64,
    pub nullity: usize,
}

impl OmegaSignature {
    pub fn singular(&self) -> bool {
        self.nullity > 0
    }
}

/// Reduces `ζ_d^s` to a primitive root: `(order, exponent)`.
pub(crate) fn primitive(d: u64, s: i64) -> Result<(u64, i64)> {
    if d == 0 {
        return Err(SeifertError::InvalidRoot { d, s });
    }
    let e = s.rem_euclid(d as i64) as u64;
    let g = e.gcd(&d);
    Ok((d / g, (e / g) as i64))
}

pub(crate) fn hermitian_matrix(a: &SeifertMatrix, d: u64) -> Result<CMatrix> {
    let field = CyclotomicField::new(d)?;
    let one = CyclotomicNumber::one(&field);
    let w = CyclotomicNumber::zeta_pow(&field, 1);
    let p = &one - &w;
    let q = p.conj();
    Ok(CMatrix::from_fn(a.size(), |i, j| {
        p.scale_int(a.entry(i, j)) + q.scale_int(a.entry(j, i))
    }))
}

pub fn omega_signature(a: &SeifertMatrix, d: u64, s: i64) -> Result<OmegaSignature> {
    omega_signature_with(a, d, s, Precision::default())
}

pub fn omega_signature_with(
    a: &SeifertMatrix,
    d: u64,
    s: i64,
    prec: Precision,
) -> Result<OmegaSignature> {
    let (d, s) = primitive(d, s)?;
    if d == 1 || a.size() == 0 {
        return Ok(OmegaSignature {
            value: 0,
            nullity: if d == 1 { a.size() } else { 0 },
        });
    }
    let cp = hermitian_matrix(a, d)?.charpoly();
    let inertia = inertia_from_charpoly(&cp, s, prec)?;
    Ok(OmegaSignature {
        value: inertia.signature(),
        nullity: inertia.nullity,
    })
}

/// Readings at every `ζ_d^e`, `e = 0..d`. The characteristic polynomial is
/// built once per primitive order and evaluated at each embedding.
pub fn omega_signature_table(
    a: &SeifertMatrix,
    d: u64,
    prec: Precision,
) -> Result<Vec<OmegaSignature>> {
    if d == 0 {
        return Err(SeifertError::InvalidRoot { d, s: 0 });
    }
    let mut out = vec![
        OmegaSignature {
            value: 0,
            nullity: 0
        };
        d as usize
    ];
    out[0].nullity = a.size();
    if a.size() == 0 {
        return Ok(out);
    }
    for dp in (2..=d).filter(|k| d % k == 0) {
        let cp = hermitian_matrix(a, dp)?.charpoly();
        let step = d / dp;
        for sp in (1..dp).filter(|k| k.gcd(&dp) == 1) {
            let inertia = inertia_from_charpoly(&cp, sp as i64, prec)?;
            out[(step * sp) as usize] = OmegaSignature {
                value: inertia.signature(),
                nullity: inertia.nullity,
            };
        }
    }
    Ok(out)
}
