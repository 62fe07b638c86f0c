use super::{HermitianForm, Result, WittError};
use crate::cyclo::matrix::CMatrix;
use crate::cyclo::{CyclotomicField, CyclotomicNumber};
use crate::seifert::SeifertMatrix;

/// The `r×r` block form `λ_r(A, ω)` with `ω = ζ_d^t`.
pub fn lambda_block(a: &SeifertMatrix, r: usize, d: u64, t: i64) -> Result<HermitianForm> {
    if r == 0 {
        return Err(WittError::BadCable);
    }
    let field = CyclotomicField::new(d)?;
    let g = a.size();
    let one = CyclotomicNumber::one(&field);
    let w = CyclotomicNumber::zeta_pow(&field, t);
    let wi = w.conj();
    let int = |k: i64| CyclotomicNumber::from_integer(&field, k);
    let at = |i: usize, j: usize| a.entry(i, j);
    let entry = |bi: usize, bj: usize, i: usize, j: usize| -> CyclotomicNumber {
        let sym = int(at(i, j) + at(j, i));
        match r {
            1 => (&one - &w).scale_int(at(i, j)) + (&one - &wi).scale_int(at(j, i)),
            2 => match (bi, bj) {
                (0, 1) => -(int(at(i, j)) + wi.scale_int(at(j, i))),
                (1, 0) => -(int(at(j, i)) + w.scale_int(at(i, j))),
                _ => sym,
            },
            _ => {
                if bi == bj {
                    sym
                } else if bj == bi + 1 {
                    int(-at(i, j))
                } else if bi == bj + 1 {
                    int(-at(j, i))
                } else if (bi, bj) == (0, r - 1) {
                    -wi.scale_int(at(j, i))
                } else if (bi, bj) == (r - 1, 0) {
                    -w.scale_int(at(i, j))
                } else {
                    int(0)
                }
            }
        }
    };
    let m = CMatrix::from_fn(r * g, |x, y| entry(x / g, y / g, x % g, y % g));
    HermitianForm::new(&field, m)
}
