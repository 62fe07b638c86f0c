//! Seifert matrices, Levine-Tristram signatures, Arf invariants and formal
//! knots.

mod formal;
mod profile;
mod signature;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CycloError;

pub use formal::{
    arf, sigma, sigma_table, sigma_with, Atom, FormalKnot, JumpPolicy, SigmaOptions, SigmaValue,
};
pub(crate) use profile::cmp_arccos_turn;
pub use profile::{
    integral_sigma, signature_profile, FormalIntegral, Jump, JumpData, SignatureProfile,
};
pub use signature::{omega_signature, omega_signature_table, omega_signature_with, OmegaSignature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("det(A - A^T) = {0}, expected +1 or -1")]
    NotSeifert(BigInt),
    #[error("invalid root of unity: order {d}, exponent {s}")]
    InvalidRoot { d: u64, s: i64 },
    #[error("cable parameter must be positive")]
    BadCable,
    #[error("atom sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("atom needs exactly one of `n` or `matrix`")]
    BadAtomSpec,
    #[error("M(omega) is singular at the prime-power root zeta_{d}^{s}; no jump may occur there")]
    SingularAtPrimePower { d: u64, s: i64 },
    #[error("omega = zeta_{d}^{s} is a jump point of the signature function")]
    AtJump { d: u64, s: i64 },
    #[error("no closed-form jump data for a {0}x{0} base matrix; use the matrix signature path")]
    UnsupportedBase(usize),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, SeifertError>;

/// Integer Seifert matrix of a knot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct SeifertMatrix {
    rows: Vec<Vec<i64>>,
}

impl SeifertMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let g = rows.len();
        if rows.iter().any(|r| r.len() != g) {
            return Err(SeifertError::NotSquare);
        }
        let m = Self { rows };
        let skew: Vec<Vec<BigInt>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| BigInt::from(m.rows[i][j] - m.rows[j][i]))
                    .collect()
            })
            .collect();
        let det = bareiss_det(skew);
        if det.abs() != BigInt::one() {
            return Err(SeifertError::NotSeifert(det));
        }
        Ok(m)
    }

    /// The unknot, as the empty matrix.
    pub fn unknot() -> Self {
        Self { rows: vec![] }
    }

    /// `[[-1, 1], [0, -n]]`; `n = 1` is the trefoil.
    pub fn twist(n: i64) -> Self {
        Self {
            rows: vec![vec![-1, 1], vec![0, -n]],
        }
    }

    pub fn trefoil() -> Self {
        Self::twist(1)
    }

    /// The twist parameter if this is exactly a twist-family matrix.
    pub fn twist_parameter(&self) -> Option<i64> {
        match self.rows.as_slice() {
            [a, b] if a == &[-1, 1] && b[0] == 0 => Some(-b[1]),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    /// Seifert matrix of the mirror image, `-A^T`.
    pub fn mirror(&self) -> Self {
        let g = self.size();
        Self {
            rows: (0..g)
                .map(|i| (0..g).map(|j| -self.rows[j][i]).collect())
                .collect(),
        }
    }

    pub fn block_sum(&self, other: &Self) -> Self {
        let (g, h) = (self.size(), other.size());
        let mut rows = vec![vec![0; g + h]; g + h];
        for i in 0..g {
            rows[i][..g].copy_from_slice(&self.rows[i]);
        }
        for i in 0..h {
            rows[g + i][g..].copy_from_slice(&other.rows[i]);
        }
        Self { rows }
    }

    /// `det(A - t A^T)` evaluated at an integer `t`.
    pub fn alexander_at(&self, t: i64) -> BigInt {
        let g = self.size();
        let m = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| BigInt::from(self.rows[i][j] - t * self.rows[j][i]))
                    .collect()
            })
            .collect();
        bareiss_det(m)
    }

    pub fn det(&self) -> BigInt {
        bareiss_det(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }
}

impl TryFrom<Vec<Vec<i64>>> for SeifertMatrix {
    type Error = SeifertError;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<SeifertMatrix> for Vec<Vec<i64>> {
    fn from(m: SeifertMatrix) -> Self {
        m.rows
    }
}

/// Fraction-free determinant.
pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
