//! Finite covers of a wedge of circles and the iterated `Z_q ⊕ Z_q` tower.

mod graph;
mod tower;
mod word;

use thiserror::Error;

pub use graph::{CoverGraph, Edge, Path, Step};
pub use tower::{
    character_f, enumerate_lifts, evaluate_lifts, is_locally_trivial, verify_lift_behaviour,
    CellLetter, CellRule, EdgeCocycle, GammaElement, Level, LiftBehaviourReport, LiftClass,
    LiftComponent, LiftMismatch, LocalTriviality, LocalWitness, Tower, DEFAULT_EDGE_CAP,
};
pub use word::{alpha_word, beta_word, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("need at least two generators, got {0}")]
    TooFewGenerators(usize),
    #[error("q = {0} must be a prime power greater than 2")]
    BadOrder(u64),
    #[error("a tower of height {levels} with q = {q} exceeds the cap of {cap} edges")]
    ResourceCap { cap: usize, levels: usize, q: u64 },
    #[error("not a covering graph: {0}")]
    NotACover(String),
    #[error("word uses generator x{0} beyond the graph")]
    UnknownGenerator(usize),
    #[error("no vertex {0}")]
    NoSuchVertex(usize),
    #[error("tower of height 0 has no distinguished top cells")]
    HeightZero,
    #[error("level {level} outside 1..={height}")]
    BadLevel { level: usize, height: usize },
    #[error("cocycle has {got} values, the graph has {expected} edges")]
    CocycleSize { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, CoverError>;
