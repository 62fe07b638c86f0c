use serde::Serialize;

use super::{CoverError, Letter, Result, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: usize,
}

/// A signed edge traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn reversed(self) -> Step {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<Step>,
}

/// Finite cover of the wedge of `m` circles, as a labelled graph.
#[derive(Debug, Clone, Serialize)]
pub struct CoverGraph {
    m: usize,
    vertices: usize,
    edges: Vec<Edge>,
    #[serde(skip)]
    out: Vec<usize>,
    #[serde(skip)]
    into: Vec<usize>,
}

impl CoverGraph {
    /// Checks the covering condition: one outgoing and one incoming edge per
    /// vertex and label.
    pub fn new(m: usize, vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut out = vec![usize::MAX; vertices * m];
        let mut into = vec![usize::MAX; vertices * m];
        for (i, e) in edges.iter().enumerate() {
            if e.label >= m || e.src >= vertices || e.dst >= vertices {
                return Err(CoverError::NotACover(format!("edge {i} out of range")));
            }
            for (slot, v) in [(&mut out, e.src), (&mut into, e.dst)] {
                let k = v * m + e.label;
                if slot[k] != usize::MAX {
                    return Err(CoverError::NotACover(format!(
                        "vertex {v} has two edges labelled x{}",
                        e.label
                    )));
                }
                slot[k] = i;
            }
        }
        if let Some(k) = out.iter().chain(&into).position(|&e| e == usize::MAX) {
            let k = k % (vertices * m);
            return Err(CoverError::NotACover(format!(
                "vertex {} lacks an edge labelled x{}",
                k / m,
                k % m
            )));
        }
        Ok(CoverGraph {
            m,
            vertices,
            edges,
            out,
            into,
        })
    }

    /// The wedge itself.
    pub fn wedge(m: usize) -> Self {
        let edges = (0..m)
            .map(|label| Edge {
                src: 0,
                dst: 0,
                label,
            })
            .collect();
        CoverGraph::new(m, 1, edges).expect("wedge is a cover")
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    pub fn out_edge(&self, v: usize, label: usize) -> usize {
        self.out[v * self.m + label]
    }

    pub fn in_edge(&self, v: usize, label: usize) -> usize {
        self.into[v * self.m + label]
    }

    pub fn step(&self, v: usize, l: Letter) -> (Step, usize) {
        if l.inverse {
            let e = self.in_edge(v, l.gen);
            (
                Step {
                    edge: e,
                    forward: false,
                },
                self.edges[e].src,
            )
        } else {
            let e = self.out_edge(v, l.gen);
            (
                Step {
                    edge: e,
                    forward: true,
                },
                self.edges[e].dst,
            )
        }
    }

    /// Unique lift of `w` starting at `start`.
    pub fn lift_word(&self, w: &Word, start: usize) -> Result<Path> {
        if let Some(g) = w.max_generator().filter(|&g| g >= self.m) {
            return Err(CoverError::UnknownGenerator(g));
        }
        if start >= self.vertices {
            return Err(CoverError::NoSuchVertex(start));
        }
        Ok(self.lift_unchecked(w, start))
    }

    pub(crate) fn lift_unchecked(&self, w: &Word, start: usize) -> Path {
        let mut v = start;
        let mut steps = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let (s, next) = self.step(v, l);
            steps.push(s);
            v = next;
        }
        Path {
            start,
            end: v,
            steps,
        }
    }

    /// Endpoint of the lift without recording the path.
    pub(crate) fn endpoint(&self, w: &Word, start: usize) -> usize {
        w.letters().iter().fold(start, |v, &l| self.step(v, l).1)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for label in 0..self.m {
                for w in [
                    self.edges[self.out_edge(v, label)].dst,
                    self.edges[self.in_edge(v, label)].src,
                ] {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
        }
        count == self.vertices
    }

    /// First Betti number of the (connected) graph.
    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// `β₁ - 1 = degree · (m - 1)`.
    pub fn betti_audit(&self) -> bool {
        self.betti1() - 1 == self.vertices * (self.m - 1)
    }
}
