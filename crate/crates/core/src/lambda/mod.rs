//! λ_T of string links obtained from the trivial string link by infection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::covers::{
    character_f, enumerate_lifts, evaluate_lifts, CoverError, EdgeCocycle, Tower, Word,
};
use crate::cyclo::{prime_power, Precision};
use crate::seifert::{sigma_with, FormalKnot, SeifertError, SigmaOptions};
use crate::witt::{lambda_block, witt_add, witt_invariants_with, witt_neg, WittClass, WittError};


#[derive(Debug, Error)]
pub enum LambdaError {
    #[error("d = {d} is not a power of the tower prime {p}")]
    BadOrder { d: u64, p: u64 },
    #[error("character has {got} values, the top level has {expected} edges")]
    CocycleSize { expected: usize, got: usize },
    #[error("string link has {link} components, the tower has {tower} generators")]
    ComponentMismatch { link: usize, tower: usize },
    #[error("infection word uses x{0}, beyond the string link")]
    WordOutOfRange(usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

pub type Result<T> = std::result::Result<T, LambdaError>;

/// A tower with a `Z_d`-valued character on the top level.
#[derive(Debug, Clone)]
pub struct PStructure {
    tower: Tower,
    theta: EdgeCocycle,
    d: u64,
}

impl PStructure {
    pub fn new(tower: Tower, theta: EdgeCocycle, d: u64) -> Result<Self> {
        let (p, _) = prime_power(tower.q()).expect("tower order is a prime power");
        if !matches!(prime_power(d), Some((b, _)) if b == p) {
            return Err(LambdaError::BadOrder { d, p });
        }
        let expected = tower.top().edge_count();
        if theta.values().len() != expected {
            return Err(LambdaError::CocycleSize {
                expected,
                got: theta.values().len(),
            });
        }
        let theta = theta.reduce(d);
        Ok(PStructure { tower, theta, d })
    }

    /// `θ = f mod d`.
    pub fn f_mod(tower: Tower, d: u64) -> Result<Self> {
        let f = character_f(&tower)?;
        Self::new(tower, f, d)
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn theta(&self) -> &EdgeCocycle {
        &self.theta
    }

    pub fn d(&self) -> u64 {
        self.d
    }
}

/// The trivial `m`-component string link infected along `infection_word` by `knot`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct InfectedStringLink {
    pub m: usize,
    pub infection_word: Word,
    pub knot: FormalKnot,
}

impl InfectedStringLink {
    pub fn new(m: usize, infection_word: Word, knot: FormalKnot) -> Result<Self> {
        if let Some(x) = infection_word.max_generator().filter(|&x| x >= m) {
            return Err(LambdaError::WordOutOfRange(x));
        }
        Ok(InfectedStringLink {
            m,
            infection_word,
            knot,
        })
    }
}

/// One lift `α̃_j` and its term `[λ_r(A, ζ_d^θ)] - [λ_r(A, 1)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftContribution {
    pub start: usize,
    pub r: usize,
    pub theta: i64,
    pub present: bool,
    pub signature: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaResult {
    pub witt: WittClass,
    pub per_lift: Vec<LiftContribution>,
    /// Number of lifts with `θ ≡ ±1 (mod d)`.
    pub constant_c: i64,
    /// Lifts with opposite θ-values and equal `r` had equal signatures.
    pub conjugate_pairs_agree: bool,
}

/// Signatures of `λ_r(K, ζ_d^θ) - λ_r(K, 1)` at every embedding, from
/// `sign λ_r(K, ω) = Σ_{ξ^r = ω} σ_K(ξ)`.
fn signature_term(
    k: &FormalKnot,
    r: usize,
    d: u64,
    theta: i64,
    prec: Precision,
) -> Result<BTreeMap<i64, i64>> {
    let opts = SigmaOptions {
        precision: prec,
        ..Default::default()
    };
    let dr = d * r as u64;
    let sum_over_roots = |e: i64| -> Result<i64> {
        // ξ = ζ_{dr}^{e + d·k}
        let mut total = 0;
        for j in 0..r as i64 {
            total += sigma_with(k, dr, e + d as i64 * j, &opts)?.value;
        }
        Ok(total)
    };
    let base = sum_over_roots(0)?;
    WittClass::zero(d)
        .signatures
        .keys()
        .map(|&s| Ok((s, sum_over_roots(s * theta)? - base)))
        .collect()
}

fn contribution(
    k: &FormalKnot,
    r: usize,
    d: u64,
    theta: i64,
    prec: Precision,
) -> Result<WittClass> {
    if theta == 0 || k.is_empty() {
        return Ok(WittClass::zero(d));
    }
    match k.seifert_matrix() {
        Some(a) => {
            let at = witt_invariants_with(&lambda_block(&a, r, d, theta)?, prec)?;
            let at_one = witt_invariants_with(&lambda_block(&a, r, d, 0)?, prec)?;
            Ok(witt_add(&at, &witt_neg(&at_one))?)
        }
        None => Ok(WittClass::from_signatures(
            d,
            signature_term(k, r, d, theta, prec)?,
        )),
    }
}

pub fn lambda_t(t: &PStructure, l: &InfectedStringLink) -> Result<LambdaResult> {
    lambda_t_with(t, l, Precision::default())
}

/// Sums the per-lift terms over every lift of the infection curve to the
/// top of the tower. Cabled atoms only reach the result through
/// signatures, so the class then has no discriminant.
pub fn lambda_t_with(
    t: &PStructure,
    l: &InfectedStringLink,
    prec: Precision,
) -> Result<LambdaResult> {
    let tower = t.tower();
    if l.m != tower.generators() {
        return Err(LambdaError::ComponentMismatch {
            link: l.m,
            tower: tower.generators(),
        });
    }
    let d = t.d;
    let lifts = enumerate_lifts(tower, &l.infection_word)?;
    let values = evaluate_lifts(tower, &lifts, &t.theta);
    let terms: Vec<(usize, i64)> = lifts
        .components
        .iter()
        .zip(&values)
        .map(|(c, v)| (c.degree, v.rem_euclid(d as i64)))
        .collect();
    let classes: Vec<WittClass> = terms
        .par_iter()
        .map(|&(r, theta)| contribution(&l.knot, r, d, theta, prec))
        .collect::<Result<_>>()?;

    let mut witt = WittClass::zero(d);
    for c in &classes {
        witt = witt_add(&witt, c)?;
    }
    let per_lift: Vec<LiftContribution> = lifts
        .components
        .iter()
        .zip(&terms)
        .zip(&classes)
        .map(|((comp, &(r, theta)), class)| LiftContribution {
            start: comp.start,
            r,
            theta,
            present: theta != 0 && !l.knot.is_empty(),
            signature: class.signature(),
        })
        .collect();
    let di = d as i64;
    let constant_c = terms
        .iter()
        .filter(|(_, th)| *th == 1 % di || *th == di - 1)
        .count() as i64;
    let conjugate_pairs_agree = per_lift.iter().all(|a| {
        per_lift
            .iter()
            .filter(|b| b.r == a.r && (a.theta + b.theta) % di == 0)
            .all(|b| b.signature == a.signature)
    });
    Ok(LambdaResult {
        witt,
        per_lift,
        constant_c,
        conjugate_pairs_agree,
    })
}

/// `Σ a_i λ_T(L_i)` with the individual results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaSum {
    pub witt: WittClass,
    pub terms: Vec<(i64, LambdaResult)>,
}

pub fn lambda_t_sum(t: &PStructure, links: &[(i64, InfectedStringLink)]) -> Result<LambdaSum> {
    let mut witt = WittClass::zero(t.d);
    let mut terms = Vec::with_capacity(links.len());
    for (a, l) in links {
        let res = lambda_t(t, l)?;
        let unit = if *a < 0 {
            witt_neg(&res.witt)
        } else {
            res.witt.clone()
        };
        for _ in 0..a.unsigned_abs() {
            witt = witt_add(&witt, &unit)?;
        }
        terms.push((*a, res));
    }
    Ok(LambdaSum { witt, terms })
}
