//! Small textual formats accepted on the command line.

use num_rational::BigRational;
use strlink::covers::{alpha_word, beta_word, CellRule, Word};
use strlink::seifert::{FormalKnot, SeifertMatrix};

use crate::error::{CliError, Context, Result};

/// Inline JSON, or `@path` to read it from a file.
pub fn json_arg(field: &str, s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(field, format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

pub fn matrix(field: &str, s: &str) -> Result<SeifertMatrix> {
    let text = json_arg(field, s)?;
    let rows: Vec<Vec<i64>> = serde_json::from_str(&text).field(field)?;
    SeifertMatrix::new(rows).field(field)
}

/// `trefoil`, `figure8`, `unknot`, `twist(n)`, optionally wrapped in
/// `mirror(..)`, `cable(r, ..)` or `double(..)`; or a JSON atom list.
pub fn knot(field: &str, s: &str) -> Result<FormalKnot> {
    let s = s.trim();
    if s.starts_with('[') || s.starts_with('@') {
        let text = json_arg(field, s)?;
        return serde_json::from_str(&text).field(field);
    }
    let bad = || CliError::invalid(field, format!("unknown knot {s:?}"));
    match s {
        "unknot" => return Ok(FormalKnot::unknot()),
        "trefoil" => return Ok(FormalKnot::trefoil()),
        "figure8" => return Ok(FormalKnot::twist(-1)),
        _ => {}
    }
    let (head, inner) = s
        .strip_suffix(')')
        .and_then(|t| t.split_once('('))
        .ok_or_else(bad)?;
    match head.trim() {
        "twist" => {
            let n: i64 = inner.trim().parse().map_err(|_| bad())?;
            Ok(FormalKnot::twist(n))
        }
        "mirror" => Ok(knot(field, inner)?.mirror()),
        "double" => Ok(knot(field, inner)?.doubled()),
        "cable" => {
            let (r, rest) = inner.split_once(',').ok_or_else(bad)?;
            let r: u32 = r.trim().parse().map_err(|_| bad())?;
            knot(field, rest)?.cable(r).field(field)
        }
        _ => Err(bad()),
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// A word in `x0 x1^-1 ..` form, `comm(u, v)`, `alpha(k)` or `beta(k)`.
/// Plain `alpha`/`beta` use `default_n`.
pub fn word(field: &str, s: &str, default_n: usize) -> Result<Word> {
    let s = s.trim();
    let bad = |m: &str| CliError::invalid(field, format!("{s:?}: {m}"));
    match s {
        "alpha" => return Ok(alpha_word(default_n)),
        "beta" => return Ok(beta_word(default_n)),
        _ => {}
    }
    if let Some((head, inner)) = s.strip_suffix(')').and_then(|t| t.split_once('(')) {
        return match head.trim() {
            "comm" => {
                let (a, b) = split_top_comma(inner).ok_or_else(|| bad("comm takes two words"))?;
                Ok(Word::commutator(
                    &word(field, a, default_n)?,
                    &word(field, b, default_n)?,
                ))
            }
            "alpha" => Ok(alpha_word(
                inner.trim().parse().map_err(|_| bad("bad index"))?,
            )),
            "beta" => Ok(beta_word(
                inner.trim().parse().map_err(|_| bad("bad index"))?,
            )),
            _ => Err(bad("unknown word function")),
        };
    }
    s.parse::<Word>().field(field)
}

pub struct TowerSpec {
    pub m: usize,
    pub n: usize,
    pub q: u64,
    pub rule: CellRule,
}

/// `n=1,q=4[,m=2][,rule=c-cell]`.
pub fn tower(field: &str, s: &str) -> Result<TowerSpec> {
    let mut spec = TowerSpec {
        m: 2,
        n: 1,
        q: 4,
        rule: CellRule::default(),
    };
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::invalid(field, format!("expected key=value, got {part:?}")))?;
        let num = |v: &str| {
            v.parse::<u64>()
                .map_err(|e| CliError::invalid(&format!("{field}.{k}"), e))
        };
        match k {
            "m" => spec.m = num(v)? as usize,
            "n" => spec.n = num(v)? as usize,
            "q" => spec.q = num(v)?,
            "rule" => spec.rule = rule(&format!("{field}.rule"), v)?,
            _ => return Err(CliError::invalid(field, format!("unknown key {k:?}"))),
        }
    }
    Ok(spec)
}

pub fn rule(field: &str, s: &str) -> Result<CellRule> {
    match s {
        "d-cell" => Ok(CellRule::DCell),
        "c-cell" => Ok(CellRule::CCell),
        _ => Err(CliError::invalid(
            field,
            format!("expected d-cell or c-cell, got {s:?}"),
        )),
    }
}

pub enum ThetaSpec {
    FMod(u64),
    Zero(u64),
    Values { d: u64, values: Vec<i64> },
}

/// `f-mod-D`, `zero-mod-D`, or JSON `{"d": D, "values": [..]}` (inline or `@file`).
pub fn theta(field: &str, s: &str) -> Result<ThetaSpec> {
    let s = s.trim();
    let d = |v: &str| v.parse::<u64>().map_err(|e| CliError::invalid(field, e));
    if let Some(v) = s.strip_prefix("f-mod-") {
        return Ok(ThetaSpec::FMod(d(v)?));
    }
    if let Some(v) = s.strip_prefix("zero-mod-") {
        return Ok(ThetaSpec::Zero(d(v)?));
    }
    #[derive(serde::Deserialize)]
    struct Raw {
        d: u64,
        values: Vec<i64>,
    }
    let raw: Raw = serde_json::from_str(&json_arg(field, s)?).field(field)?;
    Ok(ThetaSpec::Values {
        d: raw.d,
        values: raw.values,
    })
}

pub fn rational(field: &str, s: &str) -> Result<BigRational> {
    s.trim()
        .parse()
        .map_err(|_| CliError::invalid(field, format!("not a rational: {s:?}")))
}

pub fn rationals(field: &str, s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| rational(field, p))
        .collect()
}
