//! Constructive search for bump knots and independent signature families.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{prime_power, Precision};
use crate::seifert::{
    arf, cmp_arccos_turn, integral_sigma, sigma_table, signature_profile, Atom, FormalKnot,
    SeifertError, SeifertMatrix, SigmaOptions, SignatureProfile,
};

#[cfg(test)]
mod tests;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("invalid window: {0}")]
    BadWindow(String),
    #[error("target ζ_{d}^{s} is not inside the usable part of the window")]
    TargetOutsideWindow { d: u64, s: i64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("d_1 = {0} must be a power of p and at least 4")]
    BadSeed(u64),
    #[error("search exhausted for {target}: tried n in 1..={n_max}, r in 1..={r_max} ({reason})")]
    Exhausted {
        target: String,
        n_max: i64,
        r_max: u32,
        reason: String,
    },
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

pub type Result<T> = std::result::Result<T, ForgeError>;

/// Limits of the twist/cable lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub n_max: i64,
    pub r_max: u32,
}

impl Default for SearchBounds {
    // 2048 puts arccos((2n-1)/2n) below 2π/192, deep enough for d = 64.
    fn default() -> Self {
        SearchBounds {
            n_max: 2048,
            r_max: 64,
        }
    }
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Angles are stored as multiples of π.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BumpSpec {
    theta0: BigRational,
    theta1: BigRational,
}

impl BumpSpec {
    /// `θ₀ = π·theta0`, `θ₁ = π·theta1`, requiring `0 < θ₁ < θ₀ < π/2`.
    pub fn new(theta0: BigRational, theta1: BigRational) -> Result<Self> {
        if !theta1.is_positive() || theta1 >= theta0 || theta0 >= q(1, 2) {
            return Err(ForgeError::BadWindow(format!(
                "need 0 < θ₁ < θ₀ < π/2, got θ₀ = {theta0}π, θ₁ = {theta1}π"
            )));
        }
        Ok(BumpSpec { theta0, theta1 })
    }

    /// The window for family member `i` with predecessor order `prev` and own order `d`.
    pub fn for_family(prev: u64, d: u64) -> Result<Self> {
        Self::new(q(2, 3 * prev as i64), q(2, d as i64))
    }

    pub fn theta0(&self) -> &BigRational {
        &self.theta0
    }

    pub fn theta1(&self) -> &BigRational {
        &self.theta1
    }

    /// `I = (θ₁/3, θ₀)` and its images under `ω ↦ -ω, ω̄, -ω̄`, in turns.
    pub fn orbit_turns(&self) -> [(BigRational, BigRational); 4] {
        let lo = &self.theta1 / q(6, 1);
        let hi = &self.theta0 / q(2, 1);
        let half = q(1, 2);
        let one = BigRational::one();
        [
            (lo.clone(), hi.clone()),
            (&half - &hi, &half - &lo),
            (&half + &lo, &half + &hi),
            (&one - &hi, &one - &lo),
        ]
    }

    /// The radius ε (as a multiple of π) used around target angle `t`,
    /// with the chain `θ₁/3 < t/2 - ε/2 < t + ε < θ₀` verified exactly.
    /// At `t = θ₁` this is half of `min(θ₀ - θ₁, θ₁/3)`.
    pub fn epsilon(&self, t: &BigRational) -> Option<BigRational> {
        let a = &self.theta0 - t;
        let b = t - &self.theta1 * q(2, 3);
        let eps = a.min(b) / q(2, 1);
        let chain_ok = eps.is_positive()
            && &self.theta1 / q(3, 1) < (t - &eps) / q(2, 1)
            && (t - &eps) / q(2, 1) < t + &eps
            && t + &eps < self.theta0;
        chain_ok.then_some(eps)
    }
}

fn twist_cos(n: i64) -> BigRational {
    q(2 * n - 1, 2 * n)
}

/// Smallest `n ≤ n_max` whose twist jump angle lies strictly below `2π·turn`.
fn first_twist_below(turn: &BigRational, n_max: i64, prec: Precision) -> Result<Option<i64>> {
    let below = |n: i64| -> Result<bool> {
        Ok(cmp_arccos_turn(&twist_cos(n), turn, prec)? == Ordering::Less)
    };
    if n_max < 1 || !below(n_max)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1, n_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

fn atom(n: i64, r: u32, sign: i64) -> Result<Atom> {
    Ok(Atom::new(SeifertMatrix::twist(n), r, sign)?)
}

/// Whether every jump of `k` lies in the open orbit of the window and σ
/// vanishes on each gap between orbit intervals.
pub fn support_in_window(k: &FormalKnot, spec: &BumpSpec, prec: Precision) -> Result<bool> {
    let profile = signature_profile(k)?;
    let orbit = spec.orbit_turns();
    for j in profile.jumps() {
        let mut inside = false;
        for (lo, hi) in &orbit {
            if j.cmp_turn(lo, prec)? == Ordering::Greater && j.cmp_turn(hi, prec)? == Ordering::Less
            {
                inside = true;
                break;
            }
        }
        if !inside {
            return Ok(false);
        }
    }
    // σ is constant on each gap; the gaps contain 0, 1/4, 1/2 and 3/4
    for t in [q(0, 1), q(1, 4), q(1, 2), q(3, 4)] {
        if profile.evaluate_turn(&t, prec)?.value != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `K = J # -J'`, `J' = (2,1)`-cable of a twist pair-bump `J` around the
/// target. Oriented so that `σ_K(ζ_d^s) > 0`.
pub fn make_bump(spec: &BumpSpec, d: u64, s: i64, bounds: SearchBounds) -> Result<FormalKnot> {
    make_bump_with(spec, d, s, bounds, Precision::default())
}

pub fn make_bump_with(
    spec: &BumpSpec,
    d: u64,
    s: i64,
    bounds: SearchBounds,
    prec: Precision,
) -> Result<FormalKnot> {
    if d == 0 {
        return Err(ForgeError::TargetOutsideWindow { d, s });
    }
    let t = q(2 * s.rem_euclid(d as i64), d as i64);
    if t <= &spec.theta1 / q(3, 1) || t >= spec.theta0 {
        return Err(ForgeError::TargetOutsideWindow { d, s });
    }
    let eps = spec
        .epsilon(&t)
        .ok_or(ForgeError::TargetOutsideWindow { d, s })?;
    let exhausted = |reason: &str| ForgeError::Exhausted {
        target: format!("ζ_{d}^{s}"),
        n_max: bounds.n_max,
        r_max: 1,
        reason: reason.to_string(),
    };
    let half = q(1, 2);
    // the pair (n_out, n_in) has jumps in (t, t+ε) and (t-ε, t)
    let n_out = first_twist_below(&((&t + &eps) * &half), bounds.n_max, prec)?
        .ok_or_else(|| exhausted("no twist jump below t + ε"))?;
    if cmp_arccos_turn(&twist_cos(n_out), &(&t * &half), prec)? != Ordering::Greater {
        return Err(exhausted("no twist jump inside (t, t + ε)"));
    }
    let n_in = first_twist_below(&(&t * &half), bounds.n_max, prec)?
        .ok_or_else(|| exhausted("no twist jump below t"))?;
    if cmp_arccos_turn(&twist_cos(n_in), &((&t - &eps) * &half), prec)? != Ordering::Greater {
        return Err(exhausted("no twist jump inside (t - ε, t)"));
    }
    let j = FormalKnot::from_atoms(vec![atom(n_in, 1, 1)?, atom(n_out, 1, -1)?]);
    let mut k = j.connected_sum(&j.cable(2)?.mirror());
    let profile = signature_profile(&k)?;
    let v = profile.evaluate_turn(&(&t * &half), prec)?.value;
    match v.signum() {
        0 => return Err(exhausted("bump vanishes at the target")),
        -1 => k = k.mirror(),
        _ => {}
    }
    if !support_in_window(&k, spec, prec)? {
        return Err(exhausted("support audit failed"));
    }
    Ok(k)
}

fn sign_condition(
    profile: &SignatureProfile,
    d: u64,
    all_nonneg: bool,
    prec: Precision,
) -> Result<bool> {
    let opts = SigmaOptions {
        precision: prec,
        ..Default::default()
    };
    if profile.evaluate_with(d, 1, &opts)?.value <= 0 {
        return Ok(false);
    }
    if all_nonneg {
        for s in 0..d as i64 {
            if profile.evaluate_with(d, s, &opts)?.value < 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `±(cable_{r1}(T_n) # -cable_{r2}(T_n))` with positive σ at `ζ_d` (and
/// nonnegative at every `ζ_d^s` when `all_nonneg`). Differences of two
/// cables of one knot always have zero integral.
pub fn seed_knot(
    d: u64,
    all_nonneg: bool,
    bounds: SearchBounds,
    prec: Precision,
) -> Result<FormalKnot> {
    for n in 1..=bounds.n_max {
        for r2 in 2..=bounds.r_max {
            for r1 in 1..r2 {
                let k = FormalKnot::from_atoms(vec![atom(n, r1, 1)?, atom(n, r2, -1)?]);
                for cand in [k.clone(), k.mirror()] {
                    if sign_condition(&signature_profile(&cand)?, d, all_nonneg, prec)? {
                        return Ok(cand);
                    }
                }
            }
        }
    }
    Err(ForgeError::Exhausted {
        target: format!("seed at ζ_{d}"),
        n_max: bounds.n_max,
        r_max: bounds.r_max,
        reason: "no cable difference has the required signs".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub knot: FormalKnot,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotFamily {
    pub p: u64,
    pub entries: Vec<FamilyEntry>,
}

impl KnotFamily {
    pub fn empty(p: u64) -> Self {
        KnotFamily {
            p,
            entries: Vec::new(),
        }
    }

    pub fn orders(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.d).collect()
    }
}

fn is_power_of(d: u64, p: u64) -> bool {
    matches!(prime_power(d), Some((b, _)) if b == p)
}

fn is_prime(p: u64) -> bool {
    matches!(prime_power(p), Some((b, 1)) if b == p)
}

/// Smallest power of `p` exceeding `3d`.
pub fn next_order(p: u64, d: u64) -> u64 {
    let mut e = p;
    while e <= 3 * d {
        e *= p;
    }
    e
}

/// Orders `d_1 = d_seed`, `d_{i+1}` = least power of `p` above `3 d_i`.
pub fn family_orders(p: u64, count: usize, d_seed: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(ForgeError::NotPrime(p));
    }
    if d_seed < 4 || !is_power_of(d_seed, p) {
        return Err(ForgeError::BadSeed(d_seed));
    }
    let mut out = Vec::with_capacity(count);
    let mut d = d_seed;
    for _ in 0..count {
        out.push(d);
        d = next_order(p, d);
    }
    Ok(out)
}

pub fn build_family(p: u64, count: usize, d_seed: u64) -> Result<KnotFamily> {
    build_family_with(
        p,
        count,
        d_seed,
        SearchBounds::default(),
        Precision::default(),
    )
}

pub fn build_family_with(
    p: u64,
    count: usize,
    d_seed: u64,
    bounds: SearchBounds,
    prec: Precision,
) -> Result<KnotFamily> {
    let orders = family_orders(p, count, d_seed)?;
    let knots: Vec<FormalKnot> = orders
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            let k = if i == 0 {
                seed_knot(d, p == 2, bounds, prec)?
            } else {
                make_bump_with(&BumpSpec::for_family(orders[i - 1], d)?, d, 1, bounds, prec)?
            };
            Ok(if arf(&k) != 0 { k.doubled() } else { k })
        })
        .collect::<Result<_>>()?;
    Ok(KnotFamily {
        p,
        entries: knots
            .into_iter()
            .zip(orders)
            .map(|(knot, d)| FamilyEntry { knot, d })
            .collect(),
    })
}

/// One evaluation of `σ_{K_knot}(ζ_d^s)` by both routes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub knot: usize,
    pub d: u64,
    pub s: i64,
    pub matrix: i64,
    pub profile: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Orders,
    DualOracle,
    Positivity,
    Vanishing,
    Integral,
    Arf,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::Orders => "orders",
            Property::DualOracle => "dual-oracle",
            Property::Positivity => "positivity",
            Property::Vanishing => "vanishing",
            Property::Integral => "integral",
            Property::Arf => "arf",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub property: Property,
    pub knot: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub passed: bool,
    pub table: Vec<Evaluation>,
    pub checks: Vec<Check>,
}

impl CertificateReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(
    property: Property,
    knot: Option<usize>,
    passed: bool,
    detail: impl Into<String>,
) -> Check {
    Check {
        property,
        knot,
        passed,
        detail: detail.into(),
    }
}

fn evaluate_pair(
    k: &FormalKnot,
    j: usize,
    d: u64,
    prec: Precision,
) -> std::result::Result<Vec<Evaluation>, String> {
    let opts = SigmaOptions {
        precision: prec,
        ..Default::default()
    };
    let table = sigma_table(k, d, &opts).map_err(|e| e.to_string())?;
    let profile = signature_profile(k).map_err(|e| e.to_string())?;
    table
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let p = profile
                .evaluate_with(d, s as i64, &opts)
                .map_err(|e| e.to_string())?;
            Ok(Evaluation {
                knot: j,
                d,
                s: s as i64,
                matrix: m.value,
                profile: p.value,
            })
        })
        .collect()
}

/// Evaluates every `σ_{K_j}(ζ_{d_i}^s)` by both σ routes and checks the
/// four family properties. Failures become report entries.
pub fn verify_family(family: &KnotFamily) -> CertificateReport {
    verify_family_with(family, Precision::default())
}

pub fn verify_family_with(family: &KnotFamily, prec: Precision) -> CertificateReport {
    let p = family.p;
    let orders = family.orders();
    let mut checks = Vec::new();

    let mut order_problems = Vec::new();
    if !is_prime(p) {
        order_problems.push(format!("p = {p} is not prime"));
    }
    for (i, &d) in orders.iter().enumerate() {
        if !is_power_of(d, p) {
            order_problems.push(format!("d_{i} = {d} is not a power of {p}"));
        }
        if i == 0 && d < 4 {
            order_problems.push(format!("d_0 = {d} < 4"));
        }
        if i > 0 && d <= 3 * orders[i - 1] {
            order_problems.push(format!("d_{i} = {d} <= 3 d_{}", i - 1));
        }
    }
    checks.push(check(
        Property::Orders,
        None,
        order_problems.is_empty(),
        order_problems.join("; "),
    ));

    let pairs: Vec<(usize, usize)> = (0..orders.len())
        .flat_map(|j| (0..orders.len()).map(move |i| (j, i)))
        .collect();
    let blocks: Vec<std::result::Result<Vec<Evaluation>, String>> = pairs
        .par_iter()
        .map(|&(j, i)| evaluate_pair(&family.entries[j].knot, j, orders[i], prec))
        .collect();
    let mut table = Vec::new();
    for ((j, i), block) in pairs.iter().zip(blocks) {
        match block {
            Ok(rows) => table.extend(rows),
            Err(e) => checks.push(check(
                Property::DualOracle,
                Some(*j),
                false,
                format!("evaluation at d = {} failed: {e}", orders[*i]),
            )),
        }
    }

    let disagreements: Vec<String> = table
        .iter()
        .filter(|e| e.matrix != e.profile)
        .map(|e| {
            format!(
                "K_{} at ζ_{}^{}: {} vs {}",
                e.knot, e.d, e.s, e.matrix, e.profile
            )
        })
        .collect();
    checks.push(check(
        Property::DualOracle,
        None,
        disagreements.is_empty(),
        disagreements.join("; "),
    ));

    let value = |j: usize, d: u64, s: i64| {
        table
            .iter()
            .find(|e| e.knot == j && e.d == d && e.s == s)
            .map(|e| e.matrix)
    };
    for (i, entry) in family.entries.iter().enumerate() {
        let d = entry.d;
        let own: Vec<i64> = (0..d as i64).filter_map(|s| value(i, d, s)).collect();
        let first = value(i, d, 1);
        let pos = first.is_some_and(|v| v > 0)
            && own.len() == d as usize
            && (p != 2 || own.iter().all(|&v| v >= 0));
        checks.push(check(
            Property::Positivity,
            Some(i),
            pos,
            format!(
                "σ(ζ_{d}) = {:?}, min over s = {:?}",
                first,
                own.iter().min()
            ),
        ));

        for (i2, &d2) in orders.iter().enumerate().take(i) {
            let vals: Vec<i64> = (0..d2 as i64).filter_map(|s| value(i, d2, s)).collect();
            let ok = vals.len() == d2 as usize && vals.iter().all(|&v| v == 0);
            checks.push(check(
                Property::Vanishing,
                Some(i),
                ok,
                format!(
                    "against d_{i2} = {d2}: nonzero at {} roots",
                    vals.iter().filter(|&&v| v != 0).count()
                ),
            ));
        }

        match integral_sigma(&entry.knot) {
            Ok(int) => checks.push(check(
                Property::Integral,
                Some(i),
                int.is_zero(),
                int.to_string(),
            )),
            Err(e) => checks.push(check(Property::Integral, Some(i), false, e.to_string())),
        }
        let a = arf(&entry.knot);
        checks.push(check(Property::Arf, Some(i), a == 0, a.to_string()));
    }

    CertificateReport {
        passed: checks.iter().all(|c| c.passed),
        table,
        checks,
    }
}
