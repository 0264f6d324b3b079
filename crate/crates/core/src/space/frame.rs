use indexmap::IndexSet;
use std::fmt;

use super::SpaceError;

/// Bitmask encoding of a subset of a small frame; bit `i` is point `i`.
pub type Mask = u64;

/// Ordered, duplicate-free list of point identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    points: IndexSet<String>,
}

impl Frame {
    pub fn new<I, S>(points: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = IndexSet::new();
        for p in points {
            let p = p.into();
            if set.contains(&p) {
                return Err(SpaceError::DuplicatePoint(p));
            }
            set.insert(p);
        }
        if set.is_empty() {
            return Err(SpaceError::EmptyFrame);
        }
        Ok(Frame { points: set })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.get_index_of(name)
    }

    pub fn point(&self, name: &str) -> Result<usize, SpaceError> {
        self.index_of(name)
            .ok_or_else(|| SpaceError::UnknownPoint(name.to_string()))
    }

    pub fn name(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.points.iter().map(String::as_str)
    }

    /// Resolves identifiers to a point set, rejecting unknown names.
    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet, SpaceError> {
        names
            .iter()
            .map(|n| self.point(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(PointSet::from_indices)
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// Checks that every member of `set` indexes into this frame.
    pub fn check(&self, set: &PointSet) -> Result<(), SpaceError> {
        match set.iter().find(|&i| i >= self.len()) {
            Some(i) => Err(SpaceError::UnknownPoint(format!("#{i}"))),
            None => Ok(()),
        }
    }

    pub fn set_names(&self, set: &PointSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }
}

/// A set of point indices, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn empty() -> Self {
        PointSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        PointSet((0..n).collect())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }

    pub fn from_mask(mask: Mask) -> Self {
        PointSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    /// Panics if a member does not fit in a 64-bit mask.
    pub fn to_mask(&self) -> Mask {
        self.0.iter().fold(0, |m, &i| {
            assert!(i < 64, "point index {i} does not fit a mask");
            m | 1 << i
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn complement(&self, n: usize) -> Self {
        PointSet((0..n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        PointSet::from_indices(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        PointSet(self.iter().filter(|&i| other.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Membership table of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut v = vec![false; n];
        for i in self.iter().filter(|&i| i < n) {
            v[i] = true;
        }
        v
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::from_indices(iter)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
