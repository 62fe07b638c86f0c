use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::formal::{FormalKnot, JumpPolicy, SigmaOptions, SigmaValue};
use super::signature::primitive;
use super::{Result, SeifertError, SeifertMatrix};
use crate::cyclo::{certified_sign_with, CyclotomicField, CyclotomicNumber, Precision};

/// Closed-form jump of a genus-one base: σ jumps by `height` at
/// `arccos(cos)` and back at `2π - arccos(cos)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpData {
    pub cos: BigRational,
    pub height: i64,
}

impl JumpData {
    /// For a 2×2 Seifert matrix `Δ(t) = D t² - (2D-1) t + D` with `D = det A`,
    /// so there is a jump exactly when `D ≥ 1`.
    pub fn of(base: &SeifertMatrix) -> Result<Option<JumpData>> {
        match base.size() {
            0 => Ok(None),
            2 => {
                let d = base.det();
                if d < BigInt::one() {
                    return Ok(None);
                }
                // A + Aᵀ is definite since det = 4D - 1 > 0
                let height = if base.entry(0, 0) > 0 { 2 } else { -2 };
                let two_d = BigInt::from(2) * d;
                Ok(Some(JumpData {
                    cos: BigRational::new(&two_d - 1, two_d),
                    height,
                }))
            }
            g => Err(SeifertError::UnsupportedBase(g)),
        }
    }

    pub fn angle_f64(&self) -> f64 {
        self.cos.to_f64().unwrap_or(f64::NAN).acos()
    }
}

/// One jump of a cabled atom, at `(θ* + 2πk)/r` on the rising branch or
/// `(2π(k+1) - θ*)/r` on the falling one, where `θ* = arccos(cos)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jump {
    pub cos: BigRational,
    pub cable: u32,
    pub branch: u32,
    pub falling: bool,
    pub height: i64,
}

impl Jump {
    pub fn angle_f64(&self) -> f64 {
        let t = self.cos.to_f64().unwrap_or(f64::NAN).acos();
        let k = self.branch as f64;
        let a = if self.falling {
            2.0 * PI * (k + 1.0) - t
        } else {
            t + 2.0 * PI * k
        };
        a / self.cable as f64
    }

    /// Exact comparison of the jump angle with `2π·turn`.
    pub fn cmp_turn(&self, turn: &BigRational, prec: Precision) -> Result<Ordering> {
        let r = BigRational::from_integer(self.cable.into());
        let k = BigRational::from_integer(self.branch.into());
        if self.falling {
            let u = k + BigRational::one() - r * turn;
            Ok(cmp_arccos_turn(&self.cos, &u, prec)?.reverse())
        } else {
            cmp_arccos_turn(&self.cos, &(r * turn - k), prec)
        }
    }
}

/// Compares `arccos(c)` (for `|c| < 1`) with `2πu`.
pub(crate) fn cmp_arccos_turn(
    c: &BigRational,
    u: &BigRational,
    prec: Precision,
) -> Result<Ordering> {
    if !u.is_positive() {
        return Ok(Ordering::Greater);
    }
    if *u >= BigRational::new(1.into(), 2.into()) {
        return Ok(Ordering::Less);
    }
    let b = u
        .denom()
        .to_u64()
        .ok_or(SeifertError::InvalidRoot { d: 0, s: 0 })?;
    let a = u
        .numer()
        .to_i64()
        .ok_or(SeifertError::InvalidRoot { d: b, s: 0 })?;
    let field = CyclotomicField::new(b)?;
    let half = BigRational::new(1.into(), 2.into());
    let cos = (CyclotomicNumber::zeta_pow(&field, 1) + CyclotomicNumber::zeta_pow(&field, -1))
        .scale(&half);
    let x = CyclotomicNumber::from_rational(&field, c) - cos;
    if x.is_zero() {
        return Ok(Ordering::Equal);
    }
    // arccos is decreasing: θ* < 2πu iff c > cos(2πu)
    Ok(if certified_sign_with(&x, a, prec)? > 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignatureProfile {
    jumps: Vec<Jump>,
}

pub fn signature_profile(k: &FormalKnot) -> Result<SignatureProfile> {
    let mut jumps = Vec::new();
    for a in k.atoms() {
        let Some(data) = JumpData::of(&a.base)? else {
            continue;
        };
        let h = a.sign as i64 * data.height;
        for branch in 0..a.cable {
            for falling in [false, true] {
                jumps.push(Jump {
                    cos: data.cos.clone(),
                    cable: a.cable,
                    branch,
                    falling,
                    height: if falling { -h } else { h },
                });
            }
        }
    }
    jumps.sort_by(|x, y| x.angle_f64().total_cmp(&y.angle_f64()));
    Ok(SignatureProfile { jumps })
}

impl SignatureProfile {
    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn evaluate(&self, d: u64, s: i64) -> Result<SigmaValue> {
        self.evaluate_with(d, s, &SigmaOptions::default())
    }

    pub fn evaluate_with(&self, d: u64, s: i64, opts: &SigmaOptions) -> Result<SigmaValue> {
        let (dp, sp) = primitive(d, s)?;
        let v = self.evaluate_turn(&BigRational::new(sp.into(), dp.into()), opts.precision)?;
        if v.at_jump && opts.policy == JumpPolicy::Reject {
            return Err(SeifertError::AtJump { d, s });
        }
        Ok(v)
    }

    /// σ at `e^{2πi·turn}`, `turn ∈ [0, 1)`, averaging at jumps.
    pub fn evaluate_turn(&self, turn: &BigRational, prec: Precision) -> Result<SigmaValue> {
        let mut twice = 0;
        let mut at_jump = false;
        for j in &self.jumps {
            match j.cmp_turn(turn, prec)? {
                Ordering::Less => twice += 2 * j.height,
                Ordering::Equal => {
                    twice += j.height;
                    at_jump = true;
                }
                Ordering::Greater => {}
            }
        }
        Ok(SigmaValue {
            value: twice / 2,
            at_jump,
        })
    }
}

/// `π·pi + Σ coeff·arccos(c)`, kept formal so that cancellation is exact.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalIntegral {
    pub pi: BigRational,
    pub arccos: BTreeMap<BigRational, BigInt>,
}

impl FormalIntegral {
    pub fn is_zero(&self) -> bool {
        self.pi.is_zero() && self.arccos.is_empty()
    }

    /// The coefficient of π when no arccos terms remain.
    pub fn as_pi_multiple(&self) -> Option<&BigRational> {
        self.arccos.is_empty().then_some(&self.pi)
    }

    pub fn approx(&self) -> f64 {
        self.pi.to_f64().unwrap_or(f64::NAN) * PI
            + self
                .arccos
                .iter()
                .map(|(c, k)| {
                    k.to_f64().unwrap_or(f64::NAN) * c.to_f64().unwrap_or(f64::NAN).acos()
                })
                .sum::<f64>()
    }

    fn add_arccos(&mut self, c: &BigRational, k: BigInt) {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let folded = [(q(1, 2), q(1, 3)), (q(0, 1), q(1, 2)), (q(-1, 2), q(2, 3))];
        if let Some((_, m)) = folded.iter().find(|(x, _)| x == c) {
            self.pi += m * BigRational::from_integer(k);
            return;
        }
        let e = self.arccos.entry(c.clone()).or_default();
        *e += k;
        if e.is_zero() {
            self.arccos.remove(c);
        }
    }
}

impl fmt::Display for FormalIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        if !self.pi.is_zero() {
            terms.push(format!("{}*pi", self.pi));
        }
        for (c, k) in &self.arccos {
            terms.push(format!("{k}*arccos({c})"));
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// `∫_0^{2π} σ_K(e^{iθ}) dθ`. Cabling does not change the integral.
pub fn integral_sigma(k: &FormalKnot) -> Result<FormalIntegral> {
    let mut out = FormalIntegral::default();
    for a in k.atoms() {
        let Some(data) = JumpData::of(&a.base)? else {
            continue;
        };
        let h = BigInt::from(2 * a.sign as i64 * data.height);
        out.pi += BigRational::from_integer(h.clone());
        out.add_arccos(&data.cos, -h);
    }
    Ok(out)
}
