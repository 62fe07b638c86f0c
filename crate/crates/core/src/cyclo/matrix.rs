//! Dense square matrices over `Q(ζ_d)`.

use std::sync::Arc;

use super::{sign_unchecked, CycloError, CyclotomicField, CyclotomicNumber, Precision};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    n: usize,
    entries: Vec<CyclotomicNumber>,
}

impl CMatrix {
    pub fn zeros(field: &Arc<CyclotomicField>, n: usize) -> Self {
        CMatrix {
            n,
            entries: vec![CyclotomicNumber::zero(field); n * n],
        }
    }

    pub fn identity(field: &Arc<CyclotomicField>, n: usize) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.set(i, i, CyclotomicNumber::one(field));
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> CyclotomicNumber) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        CMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CyclotomicNumber) {
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<CyclotomicNumber>> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| *self.get(j, i) == self.get(i, j).conj()))
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = CyclotomicNumber::zero(self.get(0, 0).field());
            for k in 0..n {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Characteristic polynomial `det(xI - M)`, highest degree first, by
    /// Berkowitz's division-free algorithm.
    pub fn charpoly(&self) -> Vec<CyclotomicNumber> {
        let n = self.n;
        if n == 0 {
            return vec![];
        }
        let field = self.get(0, 0).field().clone();
        let zero = CyclotomicNumber::zero(&field);
        let mut v = vec![CyclotomicNumber::one(&field)];
        for r in 0..n {
            // Toeplitz column: 1, -a, -R C, -R S C, ..., -R S^{r-1} C
            let mut t = Vec::with_capacity(r + 2);
            t.push(CyclotomicNumber::one(&field));
            t.push(-self.get(r, r));
            let mut col: Vec<CyclotomicNumber> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rc = (0..r).fold(zero.clone(), |acc, k| {
                    let a = self.get(r, k);
                    if a.is_zero() || col[k].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &col[k])
                    }
                });
                t.push(-rc);
                col = (0..r)
                    .map(|i| {
                        (0..r).fold(zero.clone(), |acc, k| {
                            let a = self.get(i, k);
                            if a.is_zero() || col[k].is_zero() {
                                acc
                            } else {
                                &acc + &(a * &col[k])
                            }
                        })
                    })
                    .collect();
            }
            let next: Vec<CyclotomicNumber> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(zero.clone(), |acc, j| {
                        if t[i - j].is_zero() || v[j].is_zero() {
                            acc
                        } else {
                            &acc + &(&t[i - j] * &v[j])
                        }
                    })
                })
                .collect();
            v = next;
        }
        v
    }
}

/// Inertia of a hermitian matrix read off its characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub nullity: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia at the embedding `ζ ↦ e^{2πis/d}` from the characteristic
/// polynomial (highest degree first). The polynomial of a hermitian matrix
/// is real-rooted, so Descartes' rule of signs counts roots exactly.
pub fn inertia_from_charpoly(
    charpoly: &[CyclotomicNumber],
    s: i64,
    prec: Precision,
) -> Result<Inertia, CycloError> {
    let n = charpoly.len().saturating_sub(1);
    let mut signs = Vec::with_capacity(charpoly.len());
    for c in charpoly {
        signs.push(sign_unchecked(c, s, prec)?);
    }
    // coefficient of x^k sits at index n - k
    let nullity = (0..=n).take_while(|&k| signs[n - k] == 0).count();
    let variations = |flip: bool| {
        let mut last = 0i8;
        let mut count = 0;
        for (idx, &sg) in signs.iter().enumerate() {
            if sg == 0 {
                continue;
            }
            let k = n - idx;
            let sg = if flip && k % 2 == 1 { -sg } else { sg };
            if last != 0 && sg != last {
                count += 1;
            }
            last = sg;
        }
        count
    };
    Ok(Inertia {
        positive: variations(false),
        negative: variations(true),
        nullity: nullity.min(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_two_by_two() {
        let f = CyclotomicField::new(4).unwrap();
        let int = |k: i64| CyclotomicNumber::from_integer(&f, k);
        let m = CMatrix::from_fn(2, |i, j| int([[1, 2], [3, 4]][i][j]));
        let cp = m.charpoly();
        assert_eq!(cp, vec![int(1), int(-5), int(-2)]);
    }

    #[test]
    fn inertia_counts_roots() {
        let f = CyclotomicField::new(1).unwrap();
        let int = |k: i64| CyclotomicNumber::from_integer(&f, k);
        // diag(2, -3, 0, 5)
        let m = CMatrix::from_fn(4, |i, j| {
            if i == j {
                int([2, -3, 0, 5][i])
            } else {
                int(0)
            }
        });
        let inertia = inertia_from_charpoly(&m.charpoly(), 1, Precision::default()).unwrap();
        assert_eq!(
            inertia,
            Inertia {
                positive: 2,
                negative: 1,
                nullity: 1
            }
        );
    }
}
