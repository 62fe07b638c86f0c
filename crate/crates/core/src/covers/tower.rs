use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::graph::{CoverGraph, Edge, Path, Step};
use super::word::{alpha_word, beta_word, Word};
use super::{CoverError, Result};

/// Default cap on the number of edges of the top level.
pub const DEFAULT_EDGE_CAP: usize = 10_000_000;

/// Element `(a, b)` of `Γ = Z_q ⊕ Z_q`.
pub type GammaElement = (u64, u64);

/// How `c_{k+1}` is chosen; `d_{k+1}` is always `c_k(1,1)` reversed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellRule {
    /// `c_{k+1} = d_k(0,0)` reversed. The lift of `α_k` at the basepoint
    /// crosses it once and no lift of `β_k` at the basepoint does, so the
    /// collapsed lift normal forms persist to every level.
    #[default]
    DCell,
    /// `c_{k+1} = c_k(0,0)`. The lift of `β_k` at the basepoint crosses this
    /// cell twice, and from level 2 on the collapsed normal forms at the
    /// special vertices no longer match.
    CCell,
}

/// One level `X_k` with its distinguished cells `c_k`, `d_k`.
#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub graph: CoverGraph,
    pub c: Step,
    pub d: Step,
}

/// The iterated `Z_q ⊕ Z_q` tower over the wedge of `m` circles.
#[derive(Debug, Clone, Serialize)]
pub struct Tower {
    m: usize,
    q: u64,
    rule: CellRule,
    levels: Vec<Level>,
}

impl Tower {
    pub fn build(m: usize, n: usize, q: u64) -> Result<Self> {
        Self::build_capped(m, n, q, DEFAULT_EDGE_CAP)
    }

    pub fn build_capped(m: usize, n: usize, q: u64, cap: usize) -> Result<Self> {
        Self::build_with(m, n, q, cap, CellRule::default())
    }

    pub fn build_with(m: usize, n: usize, q: u64, cap: usize, rule: CellRule) -> Result<Self> {
        if m < 2 {
            return Err(CoverError::TooFewGenerators(m));
        }
        if q <= 2 || crate::cyclo::prime_power(q).is_none() {
            return Err(CoverError::BadOrder(q));
        }
        let q2 = (q * q) as usize;
        let top_edges = (0..n).try_fold(m, |e, _| e.checked_mul(q2));
        match top_edges {
            Some(e) if e <= cap => {}
            _ => return Err(CoverError::ResourceCap { cap, levels: n, q }),
        }
        let x0 = CoverGraph::wedge(m);
        let mut levels = vec![Level {
            graph: x0,
            c: Step {
                edge: 0,
                forward: true,
            },
            d: Step {
                edge: 1,
                forward: true,
            },
        }];
        for _ in 0..n {
            let next = next_level(levels.last().unwrap(), q, rule)?;
            levels.push(next);
        }
        Ok(Tower { m, q, rule, levels })
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn cell_rule(&self) -> CellRule {
        self.rule
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &Level {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn top(&self) -> &CoverGraph {
        &self.levels.last().unwrap().graph
    }

    /// Image of a vertex of `X_from` in `X_to`, `to ≤ from`.
    pub fn project_vertex(&self, v: usize, to: usize) -> usize {
        v % self.levels[to].graph.vertex_count()
    }

    pub fn project_step(&self, s: Step, to: usize) -> Step {
        Step {
            edge: s.edge % self.levels[to].graph.edge_count(),
            forward: s.forward,
        }
    }

    /// The copy `g` with `v ∈ Y_{k-1}(g) ⊂ X_k`, for `k ≥ 1`.
    pub fn copy_of(&self, k: usize, v: usize) -> GammaElement {
        let below = self.levels[k - 1].graph.vertex_count();
        decode(self.q, (v / below) % (self.q * self.q) as usize)
    }
}

fn encode(q: u64, g: GammaElement) -> usize {
    ((g.0 % q) + q * (g.1 % q)) as usize
}

fn decode(q: u64, i: usize) -> GammaElement {
    (i as u64 % q, i as u64 / q)
}

fn shift(q: u64, g: GammaElement, by: GammaElement) -> GammaElement {
    ((g.0 + by.0) % q, (g.1 + by.1) % q)
}

fn negate(q: u64, g: GammaElement) -> GammaElement {
    ((q - g.0 % q) % q, (q - g.1 % q) % q)
}

/// The lift `cell(g)` of a distinguished cell of value `value` to the next level.
fn cell_lift(cell: Step, value: GammaElement, g: GammaElement, q: u64, edges: usize) -> Step {
    let copy = if cell.forward { g } else { shift(q, g, value) };
    Step {
        edge: encode(q, copy) * edges + cell.edge,
        forward: cell.forward,
    }
}

fn next_level(level: &Level, q: u64, rule: CellRule) -> Result<Level> {
    let x = &level.graph;
    let (nv, ne) = (x.vertex_count(), x.edge_count());
    let q2 = (q * q) as usize;
    let value = |e: usize| -> GammaElement {
        let mut g = (0, 0);
        for (cell, unit) in [(level.c, (1, 0)), (level.d, (0, 1))] {
            if cell.edge == e {
                let v = if cell.forward { unit } else { negate(q, unit) };
                g = shift(q, g, v);
            }
        }
        g
    };
    let values: Vec<GammaElement> = (0..ne).map(value).collect();
    let mut edges = Vec::with_capacity(ne * q2);
    for gi in 0..q2 {
        let g = decode(q, gi);
        for (e, edge) in x.edges().iter().enumerate() {
            let h = shift(q, g, values[e]);
            edges.push(Edge {
                src: gi * nv + edge.src,
                dst: encode(q, h) * nv + edge.dst,
                label: edge.label,
            });
        }
    }
    let graph = CoverGraph::new(x.generators(), nv * q2, edges)?;
    let c = match rule {
        CellRule::DCell => cell_lift(level.d, (0, 1), (0, 0), q, ne).reversed(),
        CellRule::CCell => cell_lift(level.c, (1, 0), (0, 0), q, ne),
    };
    let d = cell_lift(level.c, (1, 0), (1, 1), q, ne).reversed();
    Ok(Level { graph, c, d })
}

/// Integer weights on the edges of a level, summed along paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCocycle {
    values: Vec<i64>,
}

impl EdgeCocycle {
    pub fn new(values: Vec<i64>) -> Self {
        EdgeCocycle { values }
    }

    pub fn zero(edges: usize) -> Self {
        EdgeCocycle {
            values: vec![0; edges],
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn evaluate(&self, path: &Path) -> i64 {
        path.steps.iter().map(|s| self.step_value(*s)).sum()
    }

    fn step_value(&self, s: Step) -> i64 {
        if s.forward {
            self.values[s.edge]
        } else {
            -self.values[s.edge]
        }
    }

    /// Values reduced into `0..d`.
    pub fn reduce(&self, d: u64) -> EdgeCocycle {
        EdgeCocycle {
            values: self.values.iter().map(|v| v.rem_euclid(d as i64)).collect(),
        }
    }
}

/// The weight `f` on the top level: `+1` on `c_{n-1}(0,0)`, `-1` on
/// `c_{n-1}(1,0)`.
pub fn character_f(t: &Tower) -> Result<EdgeCocycle> {
    let n = t.height();
    if n == 0 {
        return Err(CoverError::HeightZero);
    }
    let below = &t.levels[n - 1];
    let ne = below.graph.edge_count();
    let mut f = EdgeCocycle::zero(t.top().edge_count());
    for (g, w) in [((0, 0), 1), ((1, 0), -1)] {
        let s = cell_lift(below.c, (1, 0), g, t.q, ne);
        f.values[s.edge] += if s.forward { w } else { -w };
    }
    Ok(f)
}

/// A component of the pre-image of a based loop in the top level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftComponent {
    pub start: usize,
    pub end: usize,
    pub is_loop: bool,
    pub degree: usize,
    pub vertices: Vec<usize>,
}

impl LiftComponent {
    /// The closed lift of `w^degree` from `start`.
    pub fn path(&self, g: &CoverGraph, w: &Word) -> Path {
        g.lift_unchecked(&w.pow(self.degree), self.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftClass {
    pub word: Word,
    pub components: Vec<LiftComponent>,
}

impl LiftClass {
    pub fn total_degree(&self) -> usize {
        self.components.iter().map(|c| c.degree).sum()
    }
}

/// Partitions the top-level vertices into orbits of `v ↦ end of the lift of
/// w at v`; each orbit is one component, of degree its length.
pub fn enumerate_lifts(t: &Tower, w: &Word) -> Result<LiftClass> {
    let g = t.top();
    if let Some(x) = w.max_generator().filter(|&x| x >= g.generators()) {
        return Err(CoverError::UnknownGenerator(x));
    }
    let perm: Vec<usize> = (0..g.vertex_count())
        .into_par_iter()
        .map(|v| g.endpoint(w, v))
        .collect();
    let mut seen = vec![false; perm.len()];
    let mut components = Vec::new();
    for v in 0..perm.len() {
        if seen[v] {
            continue;
        }
        let mut orbit = vec![v];
        seen[v] = true;
        let mut u = perm[v];
        while u != v {
            seen[u] = true;
            orbit.push(u);
            u = perm[u];
        }
        components.push(LiftComponent {
            start: v,
            end: perm[v],
            is_loop: orbit.len() == 1,
            degree: orbit.len(),
            vertices: orbit,
        });
    }
    Ok(LiftClass {
        word: w.clone(),
        components,
    })
}

/// Values of a cocycle on the closed lifts `w^{r_j}` of every component.
pub fn evaluate_lifts(t: &Tower, lifts: &LiftClass, theta: &EdgeCocycle) -> Vec<i64> {
    let g = t.top();
    lifts
        .components
        .par_iter()
        .map(|c| {
            let mut v = c.start;
            let mut total = 0;
            for _ in 0..c.degree {
                for &l in lifts.word.letters() {
                    let (s, next) = g.step(v, l);
                    total += theta.step_value(s);
                    v = next;
                }
            }
            total
        })
        .collect()
}

/// A loop on which a character fails to vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalWitness {
    pub generator: usize,
    pub degree: usize,
    pub value: i64,
    pub path: Path,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalTriviality {
    pub trivial: bool,
    pub loops_checked: usize,
    pub witness: Option<LocalWitness>,
}

/// Checks that `θ` (mod `d`) kills every closed lift of every power of
/// every generator.
pub fn is_locally_trivial(t: &Tower, theta: &EdgeCocycle, d: u64) -> Result<LocalTriviality> {
    let g = t.top();
    if theta.values.len() != g.edge_count() {
        return Err(CoverError::CocycleSize {
            expected: g.edge_count(),
            got: theta.values.len(),
        });
    }
    let mut checked = 0;
    for x in 0..g.generators() {
        let lifts = enumerate_lifts(t, &Word::generator(x))?;
        let values = evaluate_lifts(t, &lifts, theta);
        checked += values.len();
        if let Some(i) = values.iter().position(|v| v.rem_euclid(d as i64) != 0) {
            let c = &lifts.components[i];
            return Ok(LocalTriviality {
                trivial: false,
                loops_checked: checked,
                witness: Some(LocalWitness {
                    generator: x,
                    degree: c.degree,
                    value: values[i].rem_euclid(d as i64),
                    path: c.path(g, &lifts.word),
                }),
            });
        }
    }
    Ok(LocalTriviality {
        trivial: true,
        loops_checked: checked,
        witness: None,
    })
}

/// A distinguished cell `c(g)` or `d(g)` of a collapsed level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellLetter {
    pub cell: char,
    pub copy: GammaElement,
    pub inverse: bool,
}

fn reduce_cells(letters: impl IntoIterator<Item = CellLetter>) -> Vec<CellLetter> {
    let mut out: Vec<CellLetter> = Vec::new();
    for l in letters {
        match out.last() {
            Some(p) if p.cell == l.cell && p.copy == l.copy && p.inverse != l.inverse => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

struct CellWord<'a>(&'a [CellLetter]);

impl fmt::Display for CellWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let inv = if l.inverse { "^-1" } else { "" };
                format!("{}({},{}){inv}", l.cell, l.copy.0, l.copy.1)
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftMismatch {
    pub vertex: usize,
    pub word: &'static str,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftBehaviourReport {
    pub level: usize,
    pub vertices_checked: usize,
    pub special_vertices: usize,
    pub mismatches: Vec<LiftMismatch>,
}

impl LiftBehaviourReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Lifts `α_k`, `β_k` from every vertex of `X_k`, collapses each
/// `Y_{k-1}(g)` to a point, and compares with the expected normal forms.
pub fn verify_lift_behaviour(t: &Tower, k: usize) -> Result<LiftBehaviourReport> {
    if k == 0 || k > t.height() {
        return Err(CoverError::BadLevel {
            level: k,
            height: t.height(),
        });
    }
    let q = t.q;
    let x = &t.levels[k].graph;
    let below = &t.levels[k - 1];
    let (nv, ne) = (below.graph.vertex_count(), below.graph.edge_count());
    let collapse = |p: &Path| -> Vec<CellLetter> {
        reduce_cells(p.steps.iter().filter_map(|s| {
            let base = s.edge % ne;
            let copy = decode(q, s.edge / ne);
            [('c', below.c, (1, 0)), ('d', below.d, (0, 1))]
                .into_iter()
                .find_map(|(name, cell, unit)| {
                    (cell.edge == base).then(|| {
                        if cell.forward {
                            CellLetter {
                                cell: name,
                                copy,
                                inverse: !s.forward,
                            }
                        } else {
                            CellLetter {
                                cell: name,
                                copy: shift(q, copy, negate(q, unit)),
                                inverse: s.forward,
                            }
                        }
                    })
                })
        }))
    };
    let cl = |cell: char, g: GammaElement, by: GammaElement, inverse: bool| CellLetter {
        cell,
        copy: shift(q, g, by),
        inverse,
    };
    let (alpha, beta) = (alpha_word(k), beta_word(k));
    let mismatches: Vec<LiftMismatch> = (0..x.vertex_count())
        .into_par_iter()
        .flat_map_iter(|v| {
            let special = v % nv == 0;
            let g = t.copy_of(k, v);
            let (ea, eb) = if special {
                (
                    vec![
                        cl('c', g, (0, 0), false),
                        cl('d', g, (1, 0), false),
                        cl('c', g, (0, 1), true),
                        cl('d', g, (0, 0), true),
                    ],
                    vec![
                        cl('c', g, (0, 0), false),
                        cl('c', g, (1, 0), false),
                        cl('d', g, (2, 0), false),
                        cl('c', g, (1, 1), true),
                        cl('d', g, (1, 0), true),
                        cl('c', g, (0, 0), true),
                    ],
                )
            } else {
                (vec![], vec![])
            };
            let mut out = Vec::new();
            for (name, w, expected) in [("alpha", &alpha, ea), ("beta", &beta, eb)] {
                let found = collapse(&x.lift_unchecked(w, v));
                if found != expected {
                    out.push(LiftMismatch {
                        vertex: v,
                        word: name,
                        expected: CellWord(&expected).to_string(),
                        found: CellWord(&found).to_string(),
                    });
                }
            }
            out
        })
        .collect();
    Ok(LiftBehaviourReport {
        level: k,
        vertices_checked: x.vertex_count(),
        special_vertices: x.vertex_count() / nv,
        mismatches,
    })
}
