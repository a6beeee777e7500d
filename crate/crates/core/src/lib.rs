//! clonecraft-core: a finite-domain calculus for function classes, clones,
//! invariant relations and relational constraints.
//!
//! The crate provides the kernel types (domains, tuples, tabulated functions,
//! relations), class composition and clone generation by fixpoint, images and
//! generated invariants, relational constraints with their special forms and
//! relaxations, conjunctive minors via formation schemes, and the two closure
//! operators connecting classes of functions with the constraint sets they
//! satisfy. Everything is brute-force at desk scale: enumerations are guarded
//! by explicit budgets and truncated at explicit arity caps, and every
//! operation is deterministic (canonical ordering throughout).

pub mod classes;
pub mod constraints;
pub mod domain;
mod error;
pub mod function;
pub mod galois;
pub mod invariants;
pub mod minors;
pub mod relation;
mod util;

pub use classes::{
    clone_levels, clone_member, compose, generate_clone_level, is_stable_left, is_stable_right,
    projections, stability_closure, ArityCaps, CloneSpec, FunctionClass,
};
pub use constraints::{
    class_satisfies, intersect_consequents, is_cc_relaxation, is_invariant_constraint,
    is_relaxation, make_empty, make_equality, make_trivial, satisfies, Constraint, ConstraintSet,
};
pub use domain::{DomainSize, Point};
pub use error::{Error, Result};
pub use function::FiniteFunction;
pub use galois::{
    canonical_constraint, closure_of_class, closure_of_constraints, constraints_satisfied,
    functions_satisfying, separating_constraint, verify_lemma4_equivalence, ClosureReport,
    Separation,
};
pub use invariants::{enumerate_invariants, generate_invariant, image, is_invariant, preserves};
pub use minors::{
    apply_scheme_row, is_conjunctive_minor, is_extensive, is_restrictive, tight_minor,
    tight_minor_constraint, Scheme, SchemeSlot, SkolemMap,
};
pub use relation::Relation;

/// Enumeration budgets. Subset-style enumerations (relation subsets, function
/// tables, point spaces, invariant-pair scans) refuse to run past
/// `max_subsets`; Skolem-map searches refuse to run past `max_skolem`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub max_subsets: u64,
    pub max_skolem: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_subsets: 1 << 16,
            max_skolem: 729,
        }
    }
}

impl Budgets {
    pub(crate) fn check_subsets(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_subsets as u128 {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed,
                budget: self.max_subsets as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_skolem(&self, needed: u128) -> Result<()> {
        if needed > self.max_skolem as u128 {
            return Err(Error::BudgetExceeded {
                what: "skolem assignments".to_string(),
                needed,
                budget: self.max_skolem as u128,
            });
        }
        Ok(())
    }
}
