use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CoverError;

/// A letter `x_gen^exp` with `exp = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// Freely reduced word in the free group on `x_0, x_1, …`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word {
            letters: vec![Letter::new(i, false)],
        }
    }

    /// Builds a word, freely reducing it.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, r: usize) -> Self {
        Word::from_letters((0..r).flat_map(|_| self.letters.iter().copied()))
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Self {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Exponent sum of each generator.
    pub fn abelianization(&self, m: usize) -> Vec<i64> {
        let mut v = vec![0; m];
        for l in &self.letters {
            v[l.gen] += if l.inverse { -1 } else { 1 };
        }
        v
    }
}

/// `α_0 = x_0`, `α_{k+1} = (α_k, β_k)`.
pub fn alpha_word(n: usize) -> Word {
    alpha_beta(n).0
}

/// `β_0 = x_1`, `β_{k+1} = α_k (α_k, β_k) α_k⁻¹`.
pub fn beta_word(n: usize) -> Word {
    alpha_beta(n).1
}

fn alpha_beta(n: usize) -> (Word, Word) {
    let (mut a, mut b) = (Word::generator(0), Word::generator(1));
    for _ in 0..n {
        let c = Word::commutator(&a, &b);
        let nb = a.concat(&c).concat(&a.inverse());
        a = c;
        b = nb;
    }
    (a, b)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("x{}^-1", l.gen)
                } else {
                    format!("x{}", l.gen)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Accepts `x0 x1^-1`, `x0 X1` (capital for inverse), with or without spaces.
impl FromStr for Word {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self, CoverError> {
        let bad = || CoverError::BadWord(s.to_string());
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut letters = Vec::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '.' {
                i += 1;
                continue;
            }
            let capital = match c {
                'x' => false,
                'X' => true,
                _ => return Err(bad()),
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(bad());
            }
            let gen: usize = chars[start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| bad())?;
            let mut inverse = capital;
            if chars[i..].starts_with(&['^', '-', '1']) {
                inverse = !inverse;
                i += 3;
            } else if chars[i..].starts_with(&['^', '1']) {
                i += 2;
            }
            letters.push(Letter::new(gen, inverse));
        }
        Ok(Word::from_letters(letters))
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = CoverError;
    fn try_from(s: String) -> Result<Self, CoverError> {
        s.parse()
    }
}
