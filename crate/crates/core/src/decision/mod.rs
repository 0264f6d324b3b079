//! Semantics and the consistency/entailment decision procedure.
//!
//! A formula is put in DNF; each conjunct becomes a linear system over mass
//! variables (see [`translate_conjunct`]); the first feasible conjunct yields
//! expected distances `e_I` for every set of atoms and, when small enough, an
//! explicit witness model realizing them.

mod model;
mod translate;

pub use model::{
    atom_union, build_model, e_values, ed_of, extension, reproduces_e, satisfies, term_values,
    witness_frame_size, Model,
};
pub use translate::{translate_conjunct, translate_conjunct_direct, DIRECT_ENCODING_MAX_PROPS};

use serde_json::{json, Map, Value};

use crate::json;
use crate::linarith::{self, FeasibilityResult, LinarithError};
use crate::logic::{atom_basis, to_dnf, AtomBasis, EdFormula, LogicError};
use crate::rational::{self, Rational};
use crate::space::SpaceError;
use crate::{par, Limits};

/// Hard ceiling on propositions per solve, whatever the configured budget.
/// Four propositions would mean 65536 mass variables, each with a dense
/// nonnegativity row.
pub const MAX_SOLVER_PROPS: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecisionError {
    #[error("{k} propositions exceed the atom budget of {budget}")]
    AtomBudgetExceeded { k: usize, budget: usize },
    #[error("witness model needs {points} points, over the cap of {cap}")]
    ModelBudgetExceeded { points: usize, cap: usize },
    #[error("invalid mass assignment: {0}")]
    InvalidMass(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("witness verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Logic(LogicError),
    #[error(transparent)]
    Linarith(#[from] LinarithError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl From<LogicError> for DecisionError {
    fn from(e: LogicError) -> Self {
        match e {
            LogicError::UnknownProposition(p) => DecisionError::UnknownProposition(p),
            other => DecisionError::Logic(other),
        }
    }
}

/// Evidence that a formula is satisfiable.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub basis: AtomBasis,
    /// Index of the satisfied DNF conjunct.
    pub conjunct: usize,
    /// Mass per atom set, indexed by mask.
    pub mass: Vec<Rational>,
    /// `e_I` per atom set, indexed by mask.
    pub e: Vec<Rational>,
    pub model: Option<Model>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SatResult {
    Consistent(Box<Witness>),
    Inconsistent,
}

impl SatResult {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SatResult::Consistent(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SatResult::Consistent(w) => Some(w),
            SatResult::Inconsistent => None,
        }
    }

    /// `{"verdict": "inconsistent"}` or the witness object.
    pub fn to_value(&self) -> Value {
        match self {
            SatResult::Consistent(w) => w.to_value(),
            SatResult::Inconsistent => json!({ "verdict": "inconsistent" }),
        }
    }
}

impl Witness {
    /// Label of atom set `mask` with 1-based atom indices, e.g. `{1,3}`.
    pub fn set_label(mask: usize) -> String {
        model::index_label(mask as u64)
    }

    pub fn to_value(&self) -> Value {
        let table = |values: &[Rational]| {
            let mut m = Map::new();
            for (mask, v) in values.iter().enumerate() {
                m.insert(Self::set_label(mask), rational::to_json(v));
            }
            Value::Object(m)
        };
        let mut atoms = Map::new();
        for a in 0..self.basis.n() {
            atoms.insert((a + 1).to_string(), json!(self.basis.true_props(a)));
        }
        let mut out = Map::new();
        out.insert("verdict".into(), json!("consistent"));
        out.insert("propositions".into(), json!(self.basis.props()));
        out.insert("atoms".into(), Value::Object(atoms));
        out.insert("conjunct".into(), json!(self.conjunct));
        out.insert("e".into(), table(&self.e));
        out.insert("mass".into(), table(&self.mass));
        if let Some(m) = &self.model {
            out.insert("model".into(), m.to_value());
        }
        Value::Object(out)
    }

    pub fn to_json(&self) -> String {
        json::to_pretty(&self.to_value())
    }
}

fn budget_check(f: &EdFormula, limits: &Limits) -> Result<AtomBasis, DecisionError> {
    let k = f.props().len();
    let budget = limits.atom_budget.min(MAX_SOLVER_PROPS);
    if k > budget {
        return Err(DecisionError::AtomBudgetExceeded { k, budget });
    }
    Ok(atom_basis(f)?)
}

/// Decides whether `f` has a model.
///
/// Conjuncts are solved in parallel and the lowest-indexed feasible one
/// wins. A witness model is attached when its frame fits
/// `limits.model_point_cap`, and is checked against `f` before returning.
pub fn check_consistency(f: &EdFormula, limits: &Limits) -> Result<SatResult, DecisionError> {
    let basis = budget_check(f, limits)?;
    let conjuncts = to_dnf(f, limits.dnf_literal_cap)?;
    let found = par::find_map_first(conjuncts.len(), |c| {
        let solve = || -> Result<Option<Vec<Rational>>, DecisionError> {
            let sys = translate_conjunct(&conjuncts[c], &basis)?;
            Ok(match linarith::feasible_with_limit(&sys, limits.pivot_limit)? {
                FeasibilityResult::Feasible(x) => Some(x),
                FeasibilityResult::Infeasible => None,
            })
        };
        match solve() {
            Ok(Some(mass)) => Some(Ok((c, mass))),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    });
    let (conjunct, mass) = match found {
        None => return Ok(SatResult::Inconsistent),
        Some(r) => r?,
    };
    let n = basis.n();
    let e = e_values(&mass, n);
    let model = if witness_frame_size(n) <= limits.model_point_cap {
        let m = build_model(&mass, &basis, limits.model_point_cap)?;
        if !satisfies(&m, f)? {
            return Err(DecisionError::Verification(
                "constructed model does not satisfy the formula".into(),
            ));
        }
        Some(m)
    } else {
        None
    };
    Ok(SatResult::Consistent(Box::new(Witness {
        basis,
        conjunct,
        mass,
        e,
        model,
    })))
}

/// The formula whose inconsistency means `premises` entail `goal`.
pub fn entailment_query(premises: &[EdFormula], goal: &EdFormula) -> EdFormula {
    let negated = goal.clone().not();
    match EdFormula::conjoin(premises.iter().cloned()) {
        Some(p) => p.and(negated),
        None => negated,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entailment {
    Entailed,
    /// Premises hold and the goal fails in this witness.
    Countermodel(Box<Witness>),
}

/// Decides entailment, returning a countermodel when it fails.
pub fn entailment(premises: &[EdFormula], goal: &EdFormula, limits: &Limits) -> Result<Entailment, DecisionError> {
    Ok(match check_consistency(&entailment_query(premises, goal), limits)? {
        SatResult::Inconsistent => Entailment::Entailed,
        SatResult::Consistent(w) => Entailment::Countermodel(w),
    })
}

/// True iff every model of `premises` satisfies `goal`.
pub fn entails(premises: &[EdFormula], goal: &EdFormula, limits: &Limits) -> Result<bool, DecisionError> {
    Ok(entailment(premises, goal, limits)? == Entailment::Entailed)
}
