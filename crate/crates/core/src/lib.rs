//! Expected-distance measures on finite metric probability spaces, and a
//! decision procedure for the logic of linear expected-distance formulas.
//!
//! The crate is organised bottom-up:
//!
//! * [`space`]: frames, 1-bounded pseudometrics, probability, `ed` and its duals
//! * [`evidence`]: mass functions, belief/doubt/plausibility, Möbius inversion
//! * [`product`]: the probabilistic-sum product pseudometric and independence
//! * [`logic`]: formula syntax, parser, printer, DNF and atom decomposition
//! * [`linarith`]: exact rational feasibility with strict inequalities
//! * [`decision`]: semantics, consistency/entailment and witness models
//!
//! All arithmetic is exact ([`Rational`]).

pub mod decision;
pub mod evidence;
pub mod json;
pub mod linarith;
pub mod logic;
mod par;
pub mod product;
pub mod rational;
pub mod sample;
pub mod space;

pub use rational::Rational;

/// Resource caps shared across modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest frame whose full powerset is tabulated.
    pub powerset_frame_cap: usize,
    /// Largest product frame `build_product` will expand.
    pub product_frame_cap: usize,
    /// Product frames up to this size get the cubic triangle check.
    pub product_triangle_check_cap: usize,
    /// Maximum total literal count of a DNF expansion.
    pub dnf_literal_cap: usize,
    /// Maximum number of distinct primitive propositions.
    pub atom_budget: usize,
    /// Maximum number of points in a constructed witness model.
    pub model_point_cap: usize,
    /// Simplex pivot budget per solve.
    pub pivot_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            powerset_frame_cap: 16,
            product_frame_cap: 4096,
            product_triangle_check_cap: 256,
            dnf_literal_cap: 4096,
            atom_budget: 3,
            model_point_cap: 10_000,
            pivot_limit: 100_000,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Space(#[from] space::SpaceError),
    #[error(transparent)]
    Evidence(#[from] evidence::EvidenceError),
    #[error(transparent)]
    Product(#[from] product::ProductError),
    #[error(transparent)]
    Syntax(#[from] logic::SyntaxError),
    #[error(transparent)]
    Logic(#[from] logic::LogicError),
    #[error(transparent)]
    Linarith(#[from] linarith::LinarithError),
    #[error(transparent)]
    Decision(#[from] decision::DecisionError),
    #[error(transparent)]
    Format(#[from] json::FormatError),
}
