//! Hermitian forms over `Q(ζ_d)` and their Witt-class invariants.

mod block;
mod class;
mod hilbert;

use std::sync::Arc;

use thiserror::Error;

use crate::cyclo::matrix::CMatrix;
use crate::cyclo::{CycloError, CyclotomicField, CyclotomicNumber};

pub use block::lambda_block;
pub use class::{
    witt_add, witt_invariants, witt_invariants_with, witt_neg, Disc, GaussianDisc, WittClass,
};
pub use hilbert::{hilbert_symbol, Place};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error("matrix is not conjugate-symmetric")]
    NotHermitian,
    #[error("forms over Q(zeta_{0}) and Q(zeta_{1}) cannot be combined")]
    OrderMismatch(u64, u64),
    #[error("Hilbert symbol needs nonzero arguments")]
    ZeroArgument,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("discriminant unavailable: the class was computed from signatures only")]
    DiscUnavailable,
    #[error("cable parameter must be positive")]
    BadCable,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, WittError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    field: Arc<CyclotomicField>,
    matrix: CMatrix,
}

impl HermitianForm {
    pub fn new(field: &Arc<CyclotomicField>, matrix: CMatrix) -> Result<Self> {
        if matrix.size() > 0 && matrix.get(0, 0).order() != field.order() {
            return Err(WittError::OrderMismatch(
                field.order(),
                matrix.get(0, 0).order(),
            ));
        }
        if !matrix.is_hermitian() {
            return Err(WittError::NotHermitian);
        }
        Ok(HermitianForm {
            field: field.clone(),
            matrix,
        })
    }

    pub fn from_rows(
        field: &Arc<CyclotomicField>,
        rows: Vec<Vec<CyclotomicNumber>>,
    ) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(WittError::NotHermitian);
        }
        Self::new(field, CMatrix::from_fn(n, |i, j| rows[i][j].clone()))
    }

    pub fn diagonal(field: &Arc<CyclotomicField>, entries: &[CyclotomicNumber]) -> Result<Self> {
        let zero = CyclotomicNumber::zero(field);
        let m = CMatrix::from_fn(entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                zero.clone()
            }
        });
        Self::new(field, m)
    }

    /// `[[0, 1], [1, 0]]`.
    pub fn hyperbolic(field: &Arc<CyclotomicField>) -> Self {
        let (z, o) = (CyclotomicNumber::zero(field), CyclotomicNumber::one(field));
        HermitianForm {
            field: field.clone(),
            matrix: CMatrix::from_fn(2, |i, j| if i == j { z.clone() } else { o.clone() }),
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn orthogonal_sum(&self, other: &HermitianForm) -> Result<Self> {
        if self.order() != other.order() {
            return Err(WittError::OrderMismatch(self.order(), other.order()));
        }
        let (a, b) = (self.size(), other.size());
        let zero = CyclotomicNumber::zero(&self.field);
        let m = CMatrix::from_fn(a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.matrix.get(i, j).clone(),
            (false, false) => other.matrix.get(i - a, j - a).clone(),
            _ => zero.clone(),
        });
        Ok(HermitianForm {
            field: self.field.clone(),
            matrix: m,
        })
    }
}

/// Congruence diagonalization: `T* F T = diag(diagonal, 0, …, 0)` with
/// `radical` trailing zeros.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub diagonal: Vec<CyclotomicNumber>,
    pub radical: usize,
    pub transform: CMatrix,
}

pub fn diagonalize(form: &HermitianForm) -> Diagonalization {
    let n = form.size();
    let field = &form.field;
    let mut m = form.matrix.clone();
    let mut t = CMatrix::identity(field, n);
    let mut k = 0;
    while k < n {
        let pivot = (k..n).find(|&i| !m.get(i, i).is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !m.get(i, j).is_zero())
                else {
                    break;
                };
                // e_i + c e_j with c = conj(m_ij) has value 2|m_ij|² ≠ 0
                let c = m.get(i, j).conj();
                add_multiple(&mut m, &mut t, i, j, &c);
                i
            }
        };
        swap(&mut m, &mut t, k, pivot);
        let p = m.get(k, k).clone();
        let p_inv = p.inverse().expect("nonzero pivot");
        for i in k + 1..n {
            if m.get(i, k).is_zero() {
                continue;
            }
            let f = -(m.get(i, k) * &p_inv);
            add_multiple(&mut m, &mut t, i, k, &f.conj());
        }
        k += 1;
    }
    Diagonalization {
        diagonal: (0..k).map(|i| m.get(i, i).clone()).collect(),
        radical: n - k,
        transform: t,
    }
}

/// Column `i += c·column j`, row `i += c̄·row j`, mirrored in `t`.
fn add_multiple(m: &mut CMatrix, t: &mut CMatrix, i: usize, j: usize, c: &CyclotomicNumber) {
    let n = m.size();
    let cb = c.conj();
    for r in 0..n {
        let v = m.get(r, i) + &(m.get(r, j) * c);
        m.set(r, i, v);
        let v = t.get(r, i) + &(t.get(r, j) * c);
        t.set(r, i, v);
    }
    for col in 0..n {
        let v = m.get(i, col) + &(m.get(j, col) * &cb);
        m.set(i, col, v);
    }
}

fn swap(m: &mut CMatrix, t: &mut CMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = m.size();
    for r in 0..n {
        let (x, y) = (m.get(r, a).clone(), m.get(r, b).clone());
        m.set(r, a, y);
        m.set(r, b, x);
        let (x, y) = (t.get(r, a).clone(), t.get(r, b).clone());
        t.set(r, a, y);
        t.set(r, b, x);
    }
    for c in 0..n {
        let (x, y) = (m.get(a, c).clone(), m.get(b, c).clone());
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

#[cfg(test)]
mod tests;
