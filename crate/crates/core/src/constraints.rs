//! Relational constraints: antecedent/consequent pairs, satisfaction,
//! special constraints, relaxations and intersecting consequents.

use std::collections::BTreeSet;
use std::fmt;

use crate::classes::{CloneSpec, FunctionClass};
use crate::domain::{DomainSize, Point};
use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::invariants::is_invariant;
use crate::relation::Relation;
use crate::util::IndexTuples;

/// A constraint `(R, S)`: an antecedent relation over one domain and a
/// consequent relation of the same arity over another.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    antecedent: Relation,
    consequent: Relation,
}

impl Constraint {
    pub fn new(antecedent: Relation, consequent: Relation) -> Result<Self> {
        if antecedent.arity() != consequent.arity() {
            return Err(Error::ShapeMismatch(format!(
                "antecedent arity {} differs from consequent arity {}",
                antecedent.arity(),
                consequent.arity()
            )));
        }
        Ok(Constraint {
            antecedent,
            consequent,
        })
    }

    pub fn antecedent(&self) -> &Relation {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Relation {
        &self.consequent
    }

    pub fn arity(&self) -> usize {
        self.antecedent.arity()
    }

    /// Domain of the antecedent side.
    pub fn dom(&self) -> DomainSize {
        self.antecedent.dom()
    }

    /// Domain of the consequent side.
    pub fn cod(&self) -> DomainSize {
        self.consequent.dom()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.antecedent, self.consequent)
    }
}

/// The binary equality constraint: both sides are the diagonal.
pub fn make_equality(dom: DomainSize, cod: DomainSize) -> Constraint {
    let diagonal = |d: DomainSize| {
        let tuples = d
            .elements()
            .map(|x| Point::new(vec![x, x], d).expect("diagonal tuple"));
        Relation::new(2, d, tuples).expect("diagonal relation")
    };
    Constraint {
        antecedent: diagonal(dom),
        consequent: diagonal(cod),
    }
}

/// The empty constraint of a given arity: both sides empty.
pub fn make_empty(dom: DomainSize, cod: DomainSize, arity: usize) -> Result<Constraint> {
    Constraint::new(
        Relation::empty(arity, dom)?,
        Relation::empty(arity, cod)?,
    )
}

/// The trivial constraint of a given arity: both sides full.
pub fn make_trivial(dom: DomainSize, cod: DomainSize, arity: usize) -> Result<Constraint> {
    Constraint::new(Relation::full(arity, dom)?, Relation::full(arity, cod)?)
}

/// Whether `f` satisfies the constraint: every componentwise value of `f` on
/// rows of the antecedent (repetitions allowed) lies in the consequent.
pub fn satisfies(f: &FiniteFunction, constraint: &Constraint) -> Result<bool> {
    if f.dom() != constraint.dom() || f.cod() != constraint.cod() {
        return Err(Error::ShapeMismatch(format!(
            "function {f} does not map the antecedent domain {} into the consequent domain {}",
            constraint.dom(),
            constraint.cod()
        )));
    }
    let rows: Vec<&Point> = constraint.antecedent.tuples().collect();
    let mut odo = IndexTuples::new(f.arity(), rows.len());
    let mut args: Vec<&Point> = Vec::new();
    while let Some(pick) = odo.next() {
        args.clear();
        args.extend(pick.iter().map(|&i| rows[i]));
        if !constraint.consequent.contains(&f.apply_componentwise(&args)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every member of `class` satisfies the constraint.
pub fn class_satisfies(class: &FunctionClass, constraint: &Constraint) -> Result<bool> {
    if class.dom() != constraint.dom() || class.cod() != constraint.cod() {
        return Err(Error::ShapeMismatch(format!(
            "class over ({},{}) checked against a constraint over ({},{})",
            class.dom(),
            class.cod(),
            constraint.dom(),
            constraint.cod()
        )));
    }
    for f in class.members() {
        if !satisfies(f, constraint)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `c` is a relaxation of `c0`: antecedent shrank, consequent grew.
/// Constraints of different arities are unrelated (false), but a different
/// domain pair is an error.
pub fn is_relaxation(c: &Constraint, c0: &Constraint) -> Result<bool> {
    if c.dom() != c0.dom() || c.cod() != c0.cod() {
        return Err(Error::DomainMismatch(format!(
            "relaxation compared across domain pairs ({},{}) and ({},{})",
            c.dom(),
            c.cod(),
            c0.dom(),
            c0.cod()
        )));
    }
    if c.arity() != c0.arity() {
        return Ok(false);
    }
    Ok(c.antecedent.is_subset_of(&c0.antecedent) && c0.consequent.is_subset_of(&c.consequent))
}

/// Intersects the consequents of a family sharing one antecedent.
pub fn intersect_consequents(family: &[Constraint]) -> Result<Constraint> {
    let first = family
        .first()
        .ok_or(Error::EmptyFamily("intersect_consequents"))?;
    let mut consequent = first.consequent.clone();
    for c in &family[1..] {
        if c.antecedent != first.antecedent {
            return Err(Error::DomainMismatch(
                "intersecting consequents requires identical antecedents".into(),
            ));
        }
        consequent = consequent.intersection(&c.consequent)?;
    }
    Ok(Constraint {
        antecedent: first.antecedent.clone(),
        consequent,
    })
}

/// Whether the antecedent is invariant under `c1` and the consequent under
/// `c2`, i.e. the constraint is an invariant pair for the two clones.
pub fn is_invariant_constraint(
    constraint: &Constraint,
    c1: &CloneSpec,
    c2: &CloneSpec,
) -> Result<bool> {
    Ok(is_invariant(c1, &constraint.antecedent)? && is_invariant(c2, &constraint.consequent)?)
}

/// Relaxation that stays an invariant pair for the two clones.
pub fn is_cc_relaxation(
    c: &Constraint,
    c0: &Constraint,
    c1: &CloneSpec,
    c2: &CloneSpec,
) -> Result<bool> {
    Ok(is_relaxation(c, c0)? && is_invariant_constraint(c, c1, c2)?)
}

/// A set of constraints over one domain pair, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    dom: DomainSize,
    cod: DomainSize,
    members: BTreeSet<Constraint>,
}

impl ConstraintSet {
    pub fn new(dom: DomainSize, cod: DomainSize) -> Self {
        ConstraintSet {
            dom,
            cod,
            members: BTreeSet::new(),
        }
    }

    pub fn from_members(
        dom: DomainSize,
        cod: DomainSize,
        members: impl IntoIterator<Item = Constraint>,
    ) -> Result<Self> {
        let mut set = ConstraintSet::new(dom, cod);
        for c in members {
            set.insert(c)?;
        }
        Ok(set)
    }

    pub fn dom(&self) -> DomainSize {
        self.dom
    }

    pub fn cod(&self) -> DomainSize {
        self.cod
    }

    pub fn insert(&mut self, c: Constraint) -> Result<bool> {
        if c.dom() != self.dom || c.cod() != self.cod {
            return Err(Error::DomainMismatch(format!(
                "constraint {c} is not over the domain pair ({},{})",
                self.dom, self.cod
            )));
        }
        Ok(self.members.insert(c))
    }

    /// Members in canonical order.
    pub fn members(&self) -> impl Iterator<Item = &Constraint> {
        self.members.iter()
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.members.contains(c)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &ConstraintSet) -> bool {
        self.members.is_subset(&other.members)
    }
}
