use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::LogicError;
use crate::rational::{Decimalish, Rational};

/// Propositional formula over named primitive propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PropFormula {
    True,
    False,
    Atom(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        PropFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        PropFormula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        PropFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        PropFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Atom(p) => {
                out.insert(p.clone());
            }
            PropFormula::Not(a) => a.collect_props(out),
            PropFormula::And(a, b) | PropFormula::Or(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    /// Evaluates under `truth`, which returns `None` for unknown names.
    pub fn eval<F>(&self, truth: &F) -> Result<bool, LogicError>
    where
        F: Fn(&str) -> Option<bool>,
    {
        Ok(match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Atom(p) => {
                truth(p).ok_or_else(|| LogicError::UnknownProposition(p.clone()))?
            }
            PropFormula::Not(a) => !a.eval(truth)?,
            PropFormula::And(a, b) => a.eval(truth)? && b.eval(truth)?,
            PropFormula::Or(a, b) => a.eval(truth)? || b.eval(truth)?,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            PropFormula::Or(..) => 1,
            PropFormula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::True => f.write_str("true"),
            PropFormula::False => f.write_str("false"),
            PropFormula::Atom(p) => f.write_str(p),
            PropFormula::Not(a) => {
                f.write_str("!")?;
                a.fmt_child(f, a.prec() < 3)
            }
            PropFormula::And(a, b) | PropFormula::Or(a, b) => {
                let p = self.prec();
                a.fmt_child(f, a.prec() < p)?;
                f.write_str(if p == 1 { " | " } else { " & " })?;
                b.fmt_child(f, b.prec() <= p)
            }
        }
    }
}

/// One `coeff * ED(arg)` summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Summand {
    pub coeff: Rational,
    pub arg: PropFormula,
}

/// `a_1 ED(φ_1) + … + a_n ED(φ_n)`; never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdTerm {
    pub summands: Vec<Summand>,
}

impl EdTerm {
    pub fn single(arg: PropFormula) -> Self {
        EdTerm {
            summands: vec![Summand {
                coeff: Rational::one(),
                arg,
            }],
        }
    }

    /// Value of the term given the value of each ED argument.
    pub fn evaluate<F, E>(&self, mut ed: F) -> Result<Rational, E>
    where
        F: FnMut(&PropFormula) -> Result<Rational, E>,
    {
        let mut total = Rational::zero();
        for s in &self.summands {
            total += &s.coeff * ed(&s.arg)?;
        }
        Ok(total)
    }
}

impl fmt::Display for EdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            let magnitude = if i == 0 {
                if s.coeff.is_negative() {
                    f.write_str("-")?;
                }
                s.coeff.abs()
            } else {
                f.write_str(if s.coeff.is_negative() { " - " } else { " + " })?;
                s.coeff.abs()
            };
            if !magnitude.is_one() {
                write!(f, "{}*", Decimalish(&magnitude))?;
            }
            write!(f, "ED({})", s.arg)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        }
    }
}

/// `term relation bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicEdFormula {
    pub term: EdTerm,
    pub relation: Relation,
    pub bound: Rational,
}

impl BasicEdFormula {
    pub fn new(term: EdTerm, relation: Relation, bound: Rational) -> Self {
        BasicEdFormula {
            term,
            relation,
            bound,
        }
    }
}

impl fmt::Display for BasicEdFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.term,
            self.relation.symbol(),
            Decimalish(&self.bound)
        )
    }
}

/// Boolean combination of basic expected-distance formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdFormula {
    Basic(BasicEdFormula),
    Not(Box<EdFormula>),
    And(Box<EdFormula>, Box<EdFormula>),
    Or(Box<EdFormula>, Box<EdFormula>),
}

impl EdFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        EdFormula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        EdFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        EdFormula::Or(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjoin<I: IntoIterator<Item = EdFormula>>(items: I) -> Option<Self> {
        items.into_iter().reduce(EdFormula::and)
    }

    /// Distinct primitive propositions, sorted.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_basic(&mut |b| {
            for s in &b.term.summands {
                s.arg.collect_props(&mut out);
            }
        });
        out
    }

    pub fn visit_basic<F: FnMut(&BasicEdFormula)>(&self, f: &mut F) {
        match self {
            EdFormula::Basic(b) => f(b),
            EdFormula::Not(a) => a.visit_basic(f),
            EdFormula::And(a, b) | EdFormula::Or(a, b) => {
                a.visit_basic(f);
                b.visit_basic(f);
            }
        }
    }

    /// Boolean evaluation given a decision for each basic formula.
    pub fn eval_with<F, E>(&self, basic: &mut F) -> Result<bool, E>
    where
        F: FnMut(&BasicEdFormula) -> Result<bool, E>,
    {
        Ok(match self {
            EdFormula::Basic(b) => basic(b)?,
            EdFormula::Not(a) => !a.eval_with(basic)?,
            EdFormula::And(a, b) => a.eval_with(basic)? && b.eval_with(basic)?,
            EdFormula::Or(a, b) => a.eval_with(basic)? || b.eval_with(basic)?,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            EdFormula::Or(..) => 1,
            EdFormula::And(..) => 2,
            EdFormula::Not(..) => 3,
            // basic formulas contain spaces and a relation; parenthesize
            // them under negation
            EdFormula::Basic(..) => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl From<BasicEdFormula> for EdFormula {
    fn from(b: BasicEdFormula) -> Self {
        EdFormula::Basic(b)
    }
}

impl fmt::Display for EdFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdFormula::Basic(b) => write!(f, "{b}"),
            EdFormula::Not(a) => {
                f.write_str("!")?;
                a.fmt_child(f, a.prec() != 3)
            }
            EdFormula::And(a, b) | EdFormula::Or(a, b) => {
                let p = self.prec();
                a.fmt_child(f, a.prec() < p)?;
                f.write_str(if p == 1 { " | " } else { " & " })?;
                b.fmt_child(f, b.prec() <= p)
            }
        }
    }
}
