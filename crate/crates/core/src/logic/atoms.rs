use std::collections::BTreeSet;

use super::ast::{EdFormula, PropFormula};
use super::LogicError;

/// Bitmask over atom indices (bit `a` is atom `a`, 0-based).
pub type AtomMask = u64;

/// Largest proposition count whose atoms fit an [`AtomMask`].
pub const MAX_PROPS: usize = 6;

/// The `2^k` complete sign patterns over `k` sorted propositions.
///
/// Atom `a` makes proposition `t` true iff bit `k - 1 - t` of `a` is set, so
/// atoms run in binary order with the first proposition most significant:
/// atom 0 is all-false and atom `2^k - 1` all-true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomBasis {
    props: Vec<String>,
}

impl AtomBasis {
    /// Sorts and deduplicates `props`.
    pub fn new<I, S>(props: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = props.into_iter().map(Into::into).collect();
        if set.len() > MAX_PROPS {
            return Err(LogicError::TooManyPropositions {
                count: set.len(),
                max: MAX_PROPS,
            });
        }
        Ok(AtomBasis {
            props: set.into_iter().collect(),
        })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn k(&self) -> usize {
        self.props.len()
    }

    /// Number of atoms, `2^k`.
    pub fn n(&self) -> usize {
        1 << self.props.len()
    }

    pub fn all_atoms(&self) -> AtomMask {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1 << self.n()) - 1
        }
    }

    pub fn truth(&self, atom: usize, prop: usize) -> bool {
        atom >> (self.k() - 1 - prop) & 1 == 1
    }

    /// Propositions true at `atom`.
    pub fn true_props(&self, atom: usize) -> Vec<String> {
        (0..self.k())
            .filter(|&t| self.truth(atom, t))
            .map(|t| self.props[t].clone())
            .collect()
    }

    /// The atom as a conjunction of literals; `true` when `k = 0`.
    pub fn atom_formula(&self, atom: usize) -> PropFormula {
        (0..self.k())
            .map(|t| {
                let p = PropFormula::atom(self.props[t].clone());
                if self.truth(atom, t) {
                    p
                } else {
                    p.not()
                }
            })
            .reduce(PropFormula::and)
            .unwrap_or(PropFormula::True)
    }

    fn lookup(&self, atom: usize, name: &str) -> Option<bool> {
        self.props
            .binary_search_by(|p| p.as_str().cmp(name))
            .ok()
            .map(|t| self.truth(atom, t))
    }
}

/// Atom basis of every proposition occurring in `f`.
pub fn atom_basis(f: &EdFormula) -> Result<AtomBasis, LogicError> {
    AtomBasis::new(f.props())
}

/// The atoms whose assignment satisfies `psi`.
pub fn prop_to_atom_set(psi: &PropFormula, basis: &AtomBasis) -> Result<AtomMask, LogicError> {
    let mut mask = 0;
    for atom in 0..basis.n() {
        if psi.eval(&|name: &str| basis.lookup(atom, name))? {
            mask |= 1 << atom;
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, parse_prop};

    #[test]
    fn basis_of_formulas() {
        let b = atom_basis(&parse("ED(P & Q) + ED(!Q | P) >= 0.2").unwrap()).unwrap();
        assert_eq!(b.k(), 2);
        assert_eq!(b.n(), 4);
        let b0 = atom_basis(&parse("ED(true) = 0").unwrap()).unwrap();
        assert_eq!(b0.k(), 0);
        assert_eq!(b0.n(), 1);
        assert_eq!(b0.atom_formula(0), PropFormula::True);
        let dup = atom_basis(&parse("ED(p) + ED(p & p) >= 0 & ED(!p) < 1").unwrap()).unwrap();
        assert_eq!(dup.props(), ["p"]);
    }

    #[test]
    fn atom_sets() {
        let b = AtomBasis::new(["P", "Q"]).unwrap();
        assert_eq!(prop_to_atom_set(&PropFormula::True, &b).unwrap(), 0b1111);
        assert_eq!(prop_to_atom_set(&PropFormula::False, &b).unwrap(), 0);
        let pq = prop_to_atom_set(&parse_prop("P & Q").unwrap(), &b).unwrap();
        assert_eq!(pq, 0b1000);
        assert_eq!(b.true_props(3), ["P", "Q"]);
        assert_eq!(b.true_props(2), ["P"]);
        assert!(matches!(
            prop_to_atom_set(&parse_prop("R").unwrap(), &b),
            Err(LogicError::UnknownProposition(_))
        ));
    }

    #[test]
    fn atoms_are_their_own_sets() {
        let b = AtomBasis::new(["a", "b", "c"]).unwrap();
        for atom in 0..b.n() {
            assert_eq!(prop_to_atom_set(&b.atom_formula(atom), &b).unwrap(), 1 << atom);
        }
    }
}
