//! Syntax of the expected-distance language: AST, parser, printer, DNF and
//! the decomposition of propositional arguments into atoms.

mod ast;
mod atoms;
mod dnf;
mod parser;

pub use ast::{BasicEdFormula, EdFormula, EdTerm, PropFormula, Relation, Summand};
pub use atoms::{atom_basis, prop_to_atom_set, AtomBasis, AtomMask, MAX_PROPS};
pub use dnf::{from_dnf, negate_basic, to_dnf, Conjunct};
pub use parser::{parse, parse_lines, parse_prop, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("DNF expansion needs {literals} literals, over the cap of {cap}")]
    DnfTooLarge { literals: usize, cap: usize },
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("{count} propositions exceed the supported maximum of {max}")]
    TooManyPropositions { count: usize, max: usize },
}
