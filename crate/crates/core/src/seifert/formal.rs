use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signature::{omega_signature_table, omega_signature_with, primitive, OmegaSignature};
use super::{Result, SeifertError, SeifertMatrix};
use crate::cyclo::{prime_power, Precision};

/// A signed `(r,1)`-cable of a base knot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub base: SeifertMatrix,
    pub cable: u32,
    pub sign: i8,
}

/// Connected sum of signed cabled atoms, tracked through σ and Arf only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<AtomSpec>", into = "Vec<AtomSpec>")]
pub struct FormalKnot {
    atoms: Vec<Atom>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct AtomSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<SeifertMatrix>,
    #[serde(default = "one_u32")]
    r: u32,
    #[serde(default = "one_i64")]
    sign: i64,
}

fn one_u32() -> u32 {
    1
}
fn one_i64() -> i64 {
    1
}

impl TryFrom<Vec<AtomSpec>> for FormalKnot {
    type Error = SeifertError;
    fn try_from(specs: Vec<AtomSpec>) -> Result<Self> {
        let mut atoms = Vec::with_capacity(specs.len());
        for spec in specs {
            let base = match (spec.n, spec.matrix) {
                (Some(n), None) => SeifertMatrix::twist(n),
                (None, Some(m)) => m,
                _ => return Err(SeifertError::BadAtomSpec),
            };
            atoms.push(Atom::new(base, spec.r, spec.sign)?);
        }
        Ok(FormalKnot { atoms })
    }
}

impl From<FormalKnot> for Vec<AtomSpec> {
    fn from(k: FormalKnot) -> Self {
        k.atoms
            .into_iter()
            .map(|a| {
                let n = a.base.twist_parameter();
                AtomSpec {
                    n,
                    matrix: if n.is_some() { None } else { Some(a.base) },
                    r: a.cable,
                    sign: a.sign as i64,
                }
            })
            .collect()
    }
}

impl Atom {
    pub fn new(base: SeifertMatrix, cable: u32, sign: i64) -> Result<Self> {
        if cable == 0 {
            return Err(SeifertError::BadCable);
        }
        if sign != 1 && sign != -1 {
            return Err(SeifertError::BadSign(sign));
        }
        Ok(Atom {
            base,
            cable,
            sign: sign as i8,
        })
    }
}

impl FormalKnot {
    pub fn unknot() -> Self {
        Self::default()
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        FormalKnot { atoms }
    }

    pub fn from_matrix(base: SeifertMatrix) -> Self {
        FormalKnot {
            atoms: vec![Atom {
                base,
                cable: 1,
                sign: 1,
            }],
        }
    }

    pub fn twist(n: i64) -> Self {
        Self::from_matrix(SeifertMatrix::twist(n))
    }

    pub fn trefoil() -> Self {
        Self::twist(1)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn connected_sum(&self, other: &FormalKnot) -> FormalKnot {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        FormalKnot { atoms }
    }

    pub fn mirror(&self) -> FormalKnot {
        FormalKnot {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    sign: -a.sign,
                    ..a.clone()
                })
                .collect(),
        }
    }

    /// The `(r,1)`-cable.
    pub fn cable(&self, r: u32) -> Result<FormalKnot> {
        if r == 0 {
            return Err(SeifertError::BadCable);
        }
        Ok(FormalKnot {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    cable: a.cable * r,
                    ..a.clone()
                })
                .collect(),
        })
    }

    /// `K # K`.
    pub fn doubled(&self) -> FormalKnot {
        self.connected_sum(self)
    }

    /// Block-diagonal Seifert matrix, available when no atom is cabled.
    pub fn seifert_matrix(&self) -> Option<SeifertMatrix> {
        self.atoms
            .iter()
            .try_fold(SeifertMatrix::unknot(), |acc, a| {
                if a.cable != 1 {
                    return None;
                }
                let m = if a.sign > 0 {
                    a.base.clone()
                } else {
                    a.base.mirror()
                };
                Some(acc.block_sum(&m))
            })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JumpPolicy {
    /// Mean of the one-sided limits, flagged.
    #[default]
    Average,
    Reject,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SigmaOptions {
    pub policy: JumpPolicy,
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaValue {
    pub value: i64,
    pub at_jump: bool,
}

/// σ_K(ζ_d^s) through reparametrized matrix signatures.
pub fn sigma(k: &FormalKnot, d: u64, s: i64) -> Result<SigmaValue> {
    sigma_with(k, d, s, &SigmaOptions::default())
}

pub fn sigma_with(k: &FormalKnot, d: u64, s: i64, opts: &SigmaOptions) -> Result<SigmaValue> {
    primitive(d, s)?;
    let mut readings = Vec::with_capacity(k.atoms.len());
    for a in &k.atoms {
        let e = s.rem_euclid(d as i64) * a.cable as i64;
        readings.push((a, e, omega_signature_with(&a.base, d, e, opts.precision)?));
    }
    combine(d, s, readings, opts.policy)
}

fn combine<'a>(
    d: u64,
    s: i64,
    readings: impl IntoIterator<Item = (&'a Atom, i64, OmegaSignature)>,
    policy: JumpPolicy,
) -> Result<SigmaValue> {
    let mut value = 0;
    let mut at_jump = false;
    for (a, e, r) in readings {
        let (order, _) = primitive(d, e)?;
        if r.singular() && order > 1 {
            if prime_power(order).is_some() {
                return Err(SeifertError::SingularAtPrimePower { d, s });
            }
            at_jump = true;
        }
        value += a.sign as i64 * r.value;
    }
    if at_jump && policy == JumpPolicy::Reject {
        return Err(SeifertError::AtJump { d, s });
    }
    Ok(SigmaValue { value, at_jump })
}

/// σ_K(ζ_d^s) for every `s = 0..d`.
pub fn sigma_table(k: &FormalKnot, d: u64, opts: &SigmaOptions) -> Result<Vec<SigmaValue>> {
    primitive(d, 0)?;
    let mut bases: Vec<&SeifertMatrix> = Vec::new();
    for a in &k.atoms {
        if !bases.contains(&&a.base) {
            bases.push(&a.base);
        }
    }
    let tables: Vec<Vec<OmegaSignature>> = bases
        .par_iter()
        .map(|b| omega_signature_table(b, d, opts.precision))
        .collect::<Result<_>>()?;
    let lookup: HashMap<&SeifertMatrix, &Vec<OmegaSignature>> =
        bases.iter().copied().zip(tables.iter()).collect();
    (0..d as i64)
        .map(|s| {
            let readings = k.atoms.iter().map(|a| {
                let e = (s * a.cable as i64).rem_euclid(d as i64);
                (a, e, lookup[&a.base][e as usize])
            });
            combine(d, s, readings, opts.policy)
        })
        .collect()
}

/// Arf invariant from `Δ(-1) mod 8`, additive over atoms. A cabled atom uses
/// `Δ_base(t^r)`, so even cables contribute zero.
pub fn arf(k: &FormalKnot) -> u8 {
    k.atoms.iter().fold(0, |acc, a| {
        let t = if a.cable % 2 == 0 { 1 } else { -1 };
        let v = a.base.alexander_at(t);
        let m = (v % 8u32 + 8u32) % 8u32;
        let bit = if m == 3u32.into() || m == 5u32.into() {
            1
        } else {
            0
        };
        acc ^ bit
    })
}
