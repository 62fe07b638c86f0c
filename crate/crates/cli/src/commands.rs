use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};
use strlink::covers::{
    alpha_word, character_f, enumerate_lifts, evaluate_lifts, is_locally_trivial,
    verify_lift_behaviour, CoverGraph, EdgeCocycle, Tower, Word,
};
use strlink::cyclo::{CyclotomicField, CyclotomicNumber, Precision};
use strlink::lambda::{lambda_t_with, InfectedStringLink, PStructure};
use strlink::seifert::{arf, sigma_table, sigma_with, FormalKnot, JumpPolicy, SigmaOptions};
use strlink::witt::{hilbert_symbol, lambda_block, witt_invariants_with, HermitianForm, Place};

use crate::error::{CliError, Context, Result};
use crate::output::{certificate, to_value, Kind, Report};
use crate::parse;
use crate::Globals;

#[derive(Args, Debug)]
pub struct KnotInput {
    /// Seifert matrix as JSON rows.
    #[arg(long, conflicts_with = "knot")]
    pub matrix: Option<String>,
    /// Named knot, `twist(n)`, `mirror(..)`, `cable(r, ..)`, or a JSON atom list.
    #[arg(long)]
    pub knot: Option<String>,
}

impl KnotInput {
    pub fn resolve(&self) -> Result<FormalKnot> {
        match (&self.matrix, &self.knot) {
            (Some(m), None) => Ok(FormalKnot::from_matrix(parse::matrix("--matrix", m)?)),
            (None, Some(k)) => parse::knot("--knot", k),
            _ => Err(CliError::invalid("--matrix/--knot", "give exactly one")),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Policy {
    Average,
    Reject,
}

#[derive(Args, Debug)]
pub struct SigArgs {
    #[command(flatten)]
    pub input: KnotInput,
    #[arg(long)]
    pub d: u64,
    /// Omit for the whole table `s = 0..d`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<i64>,
    #[arg(long, value_enum, default_value_t = Policy::Average)]
    pub policy: Policy,
}

pub fn sig(args: &SigArgs, g: &Globals) -> Result<Report> {
    let k = args.input.resolve()?;
    let opts = SigmaOptions {
        policy: match args.policy {
            Policy::Average => JumpPolicy::Average,
            Policy::Reject => JumpPolicy::Reject,
        },
        precision: g.precision(),
    };
    let rows: Vec<Value> = match args.s {
        Some(s) => {
            let v = sigma_with(&k, args.d, s, &opts).field("--d/--s")?;
            vec![json!({"d": args.d, "s": s, "sigma": v.value, "at_jump": v.at_jump})]
        }
        None => sigma_table(&k, args.d, &opts)
            .field("--d")?
            .iter()
            .enumerate()
            .map(|(s, v)| json!({"d": args.d, "s": s, "sigma": v.value, "at_jump": v.at_jump}))
            .collect(),
    };
    let doc = if args.s.is_some() {
        rows[0].clone()
    } else {
        Value::Array(rows.clone())
    };
    Ok(Report::new(doc, rows))
}

pub fn arf_cmd(input: &KnotInput) -> Result<Report> {
    let k = input.resolve()?;
    let row = json!({"arf": arf(&k)});
    Ok(Report::new(row.clone(), vec![row]))
}

#[derive(Args, Debug)]
pub struct WittArgs {
    #[arg(long, default_value_t = 4)]
    pub d: u64,
    /// Rational diagonal entries, comma separated.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix")]
    pub diag: Option<String>,
    /// Seifert matrix for the block form `λ_r(A, ζ_d^t)`.
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub t: i64,
}

pub fn witt(args: &WittArgs, g: &Globals) -> Result<Report> {
    let field = CyclotomicField::new(args.d).field("--d")?;
    let form = match (&args.diag, &args.matrix) {
        (Some(diag), None) => {
            let entries: Vec<CyclotomicNumber> = parse::rationals("--diag", diag)?
                .iter()
                .map(|q| CyclotomicNumber::from_rational(&field, q))
                .collect();
            HermitianForm::diagonal(&field, &entries).field("--diag")?
        }
        (None, Some(m)) => {
            let a = parse::matrix("--matrix", m)?;
            lambda_block(&a, args.r, args.d, args.t).field("--matrix")?
        }
        _ => return Err(CliError::invalid("--diag/--matrix", "give exactly one")),
    };
    let class = witt_invariants_with(&form, g.precision()).field("form")?;
    let rows = class
        .signatures
        .iter()
        .map(|(s, v)| json!({"embedding": s, "signature": v}))
        .collect();
    Ok(Report::new(class, rows))
}

#[derive(Args, Debug)]
pub struct HilbertArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// A prime, or `inf`.
    #[arg(long)]
    pub place: String,
}

pub fn hilbert(args: &HilbertArgs) -> Result<Report> {
    let a = parse::rational("--a", &args.a)?;
    let b = parse::rational("--b", &args.b)?;
    let place: Place = args
        .place
        .parse()
        .map_err(|e: String| CliError::invalid("--place", e))?;
    let v = hilbert_symbol(&a, &b, place).field("--place")?;
    let row =
        json!({"a": a.to_string(), "b": b.to_string(), "place": place.to_string(), "symbol": v});
    Ok(Report::new(row.clone(), vec![row]))
}

#[derive(Args, Debug, Clone)]
pub struct TowerParams {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub q: u64,
    /// `d-cell` (default) or `c-cell`.
    #[arg(long, default_value = "d-cell")]
    pub rule: String,
}

impl TowerParams {
    pub fn build(&self, g: &Globals) -> Result<Tower> {
        let rule = parse::rule("--rule", &self.rule)?;
        Tower::build_with(self.m, self.n, self.q, g.cap_edges, rule).field("tower")
    }

    pub fn echo(&self) -> Value {
        json!({"m": self.m, "n": self.n, "q": self.q, "rule": self.rule})
    }
}

#[derive(Subcommand, Debug)]
pub enum TowerCmd {
    /// Level sizes and Betti numbers.
    Build {
        #[command(flatten)]
        params: TowerParams,
        /// Also list every edge of the top level.
        #[arg(long)]
        edges: bool,
    },
    /// Components of the pre-image of a word in the top level.
    Lift {
        #[command(flatten)]
        params: TowerParams,
        #[arg(long)]
        word: String,
        /// Also evaluate `f` (or `f mod d`) on each closed lift.
        #[arg(long)]
        with_f: bool,
    },
    /// Covering, Betti, lift-behaviour and character audits.
    Verify {
        #[command(flatten)]
        params: TowerParams,
        /// Orders for the local-triviality check.
        #[arg(long, value_delimiter = ',', default_value = "4,8")]
        d: Vec<u64>,
    },
}

fn level_rows(t: &Tower) -> Vec<Value> {
    t.levels()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let g = &l.graph;
            json!({
                "level": k,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "betti1": g.betti1(),
                "connected": g.is_connected(),
            })
        })
        .collect()
}

pub fn tower(cmd: &TowerCmd, g: &Globals) -> Result<Report> {
    match cmd {
        TowerCmd::Build { params, edges } => {
            let t = params.build(g)?;
            let rows = level_rows(&t);
            let mut doc = json!({"inputs": params.echo(), "levels": rows});
            if *edges {
                doc["top_edges"] = to_value(t.top().edges());
            }
            Ok(Report::new(doc, rows))
        }
        TowerCmd::Lift {
            params,
            word,
            with_f,
        } => {
            let t = params.build(g)?;
            let w = parse::word("--word", word, params.n)?;
            let lifts = enumerate_lifts(&t, &w).field("--word")?;
            let f = if *with_f {
                Some(evaluate_lifts(&t, &lifts, &character_f(&t).field("tower")?))
            } else {
                None
            };
            let rows: Vec<Value> = lifts
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut row = json!({"start": c.start, "end": c.end, "degree": c.degree, "is_loop": c.is_loop});
                    if let Some(f) = &f {
                        row["f"] = json!(f[i]);
                    }
                    row
                })
                .collect();
            let doc = json!({"inputs": params.echo(), "word": w.to_string(), "components": rows});
            Ok(Report::new(doc, rows))
        }
        TowerCmd::Verify { params, d } => tower_audit(params, d, g),
    }
}

/// Every vertex has exactly one outgoing and one incoming edge per label.
pub fn covering_condition(g: &CoverGraph) -> bool {
    let m = g.generators();
    let mut out = vec![0u32; g.vertex_count() * m];
    let mut inc = vec![0u32; g.vertex_count() * m];
    for e in g.edges() {
        out[e.src * m + e.label] += 1;
        inc[e.dst * m + e.label] += 1;
    }
    out.iter().chain(&inc).all(|&c| c == 1)
}

fn tower_audit(params: &TowerParams, ds: &[u64], g: &Globals) -> Result<Report> {
    let t = params.build(g)?;
    let mut table = Vec::new();
    let mut passed = true;
    let base_edges = t.generators();
    for (k, l) in t.levels().iter().enumerate() {
        let gr = &l.graph;
        let cover = covering_condition(gr);
        let betti = gr.betti1() - 1 == gr.vertex_count() * (base_edges - 1);
        let mut row = json!({
            "check": "level",
            "level": k,
            "vertices": gr.vertex_count(),
            "edges": gr.edge_count(),
            "betti1": gr.betti1(),
            "covering": cover,
            "betti_formula": betti,
        });
        let mut ok = cover && betti && gr.is_connected();
        if k >= 1 {
            let rep = verify_lift_behaviour(&t, k).field("tower")?;
            row["lift_mismatches"] = json!(rep.mismatches.len());
            row["special_vertices"] = json!(rep.special_vertices);
            ok &= rep.passed();
        }
        row["passed"] = json!(ok);
        passed &= ok;
        table.push(row);
    }

    let mut result = json!({});
    if t.height() >= 1 {
        let f = character_f(&t).field("tower")?;
        let alpha = enumerate_lifts(&t, &alpha_word(t.height())).field("tower")?;
        let values = evaluate_lifts(&t, &alpha, &f);
        let in_range = values.iter().all(|v| (-1..=1).contains(v));
        let hits_one = values.contains(&1);
        let loops = alpha.components.iter().all(|c| c.is_loop);
        let mut gen_zero = true;
        for x in 0..t.generators() {
            let lifts = enumerate_lifts(&t, &Word::generator(x)).field("tower")?;
            gen_zero &= evaluate_lifts(&t, &lifts, &f).iter().all(|&v| v == 0);
        }
        let c = values.iter().filter(|v| v.abs() == 1).count();
        table.push(json!({
            "check": "character",
            "alpha_lifts": values.len(),
            "all_loops": loops,
            "f_in_range": in_range,
            "f_hits_one": hits_one,
            "generator_lifts_zero": gen_zero,
            "c": c,
            "passed": in_range && hits_one && loops && gen_zero,
        }));
        passed &= in_range && hits_one && loops && gen_zero;
        for &d in ds {
            let lt = is_locally_trivial(&t, &f, d).field("--d")?;
            table.push(json!({"check": "locally-trivial", "d": d, "loops_checked": lt.loops_checked, "passed": lt.trivial}));
            passed &= lt.trivial;
        }
        result = json!({"c": c, "f_values": values});
    }
    let inputs = json!({"tower": params.echo(), "d": ds, "cap_edges": g.cap_edges});
    Ok(certificate(
        Kind::TowerAudit,
        inputs,
        table,
        result,
        passed,
        g.seed,
    ))
}

#[derive(Args, Debug)]
pub struct LambdaArgs {
    /// `n=1,q=4[,m=2][,rule=d-cell]`.
    #[arg(long, default_value = "n=1,q=4")]
    pub tower: String,
    /// `f-mod-D`, `zero-mod-D`, or JSON `{"d":D,"values":[..]}`.
    #[arg(long, default_value = "f-mod-4")]
    pub theta: String,
    /// Infection curve: `alpha`, `comm(x0,x1)`, `x0 x1^-1`, ...
    #[arg(long, default_value = "alpha")]
    pub word: String,
    #[arg(long)]
    pub knot: String,
}

pub fn structure(tower: &str, theta: &str, g: &Globals) -> Result<(PStructure, parse::TowerSpec)> {
    let spec = parse::tower("--tower", tower)?;
    let t = Tower::build_with(spec.m, spec.n, spec.q, g.cap_edges, spec.rule).field("--tower")?;
    let edges = t.top().edge_count();
    let ps = match parse::theta("--theta", theta)? {
        parse::ThetaSpec::FMod(d) => PStructure::f_mod(t, d),
        parse::ThetaSpec::Zero(d) => PStructure::new(t, EdgeCocycle::zero(edges), d),
        parse::ThetaSpec::Values { d, values } => PStructure::new(t, EdgeCocycle::new(values), d),
    }
    .field("--theta")?;
    Ok((ps, spec))
}

pub fn lambda(args: &LambdaArgs, g: &Globals) -> Result<Report> {
    let (ps, spec) = structure(&args.tower, &args.theta, g)?;
    let w = parse::word("--word", &args.word, spec.n)?;
    let k = parse::knot("--knot", &args.knot)?;
    let link = InfectedStringLink::new(spec.m, w, k).field("--word")?;
    let res = lambda_t_with(&ps, &link, g.precision()).field("lambda")?;
    let rows = res.per_lift.iter().map(to_value).collect();
    Ok(Report::new(
        json!({"link": link, "d": ps.d(), "result": res}),
        rows,
    ))
}

impl Globals {
    pub fn precision(&self) -> Precision {
        Precision {
            max_bits: self.precision_cap,
        }
    }
}
