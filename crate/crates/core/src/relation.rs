//! Finite relations: sets of tuples over one domain.

use std::collections::BTreeSet;
use std::fmt;

use crate::domain::{DomainSize, Point};
use crate::error::{Error, Result};

/// An `arity`-ary relation on a finite domain. Tuples are kept in a sorted
/// set, so iteration is always in big-endian encoding order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    arity: usize,
    dom: DomainSize,
    tuples: BTreeSet<Point>,
}

impl Relation {
    pub fn new(
        arity: usize,
        dom: DomainSize,
        tuples: impl IntoIterator<Item = Point>,
    ) -> Result<Self> {
        let mut relation = Relation::empty(arity, dom)?;
        for tuple in tuples {
            relation.insert(tuple)?;
        }
        Ok(relation)
    }

    pub fn empty(arity: usize, dom: DomainSize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(Relation {
            arity,
            dom,
            tuples: BTreeSet::new(),
        })
    }

    /// The full relation `dom^arity`.
    pub fn full(arity: usize, dom: DomainSize) -> Result<Self> {
        let count = dom.point_count(arity)?;
        let mut tuples = BTreeSet::new();
        for index in 0..count {
            tuples.insert(Point::decode(index, arity, dom)?);
        }
        Ok(Relation { arity, dom, tuples })
    }

    /// Parses tuples given as comma-separated digit strings, e.g. `"00,01,11"`.
    pub fn from_digits(arity: usize, dom: DomainSize, tuples: &str) -> Result<Self> {
        let mut relation = Relation::empty(arity, dom)?;
        for part in tuples.split(',').filter(|p| !p.is_empty()) {
            relation.insert(Point::from_digits(part, dom)?)?;
        }
        Ok(relation)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dom(&self) -> DomainSize {
        self.dom
    }

    pub fn insert(&mut self, tuple: Point) -> Result<bool> {
        if tuple.arity() != self.arity || tuple.base() != self.dom {
            return Err(Error::ShapeMismatch(format!(
                "tuple {tuple} does not fit a {}-ary relation over {} elements",
                self.arity, self.dom
            )));
        }
        Ok(self.tuples.insert(tuple))
    }

    pub fn contains(&self, tuple: &Point) -> bool {
        self.tuples.contains(tuple)
    }

    /// Tuples in canonical (encoding) order.
    pub fn tuples(&self) -> impl Iterator<Item = &Point> {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Set inclusion of tuple sets; shapes are the caller's concern.
    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.tuples.is_subset(&other.tuples)
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        if self.arity != other.arity || self.dom != other.dom {
            return Err(Error::ShapeMismatch(format!(
                "cannot intersect a {}-ary relation over {} elements with a {}-ary one over {}",
                self.arity, self.dom, other.arity, other.dom
            )));
        }
        Ok(Relation {
            arity: self.arity,
            dom: self.dom,
            tuples: self.tuples.intersection(&other.tuples).cloned().collect(),
        })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if self.arity != other.arity || self.dom != other.dom {
            return Err(Error::ShapeMismatch(format!(
                "cannot join a {}-ary relation over {} elements with a {}-ary one over {}",
                self.arity, self.dom, other.arity, other.dom
            )));
        }
        Ok(Relation {
            arity: self.arity,
            dom: self.dom,
            tuples: self.tuples.union(&other.tuples).cloned().collect(),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, tuple) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{tuple}")?;
        }
        write!(f, "}}")
    }
}
