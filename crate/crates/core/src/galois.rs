//! The two closure operators connecting function classes with the constraint
//! sets they satisfy, and the constructive separating-constraint machinery.
//!
//! On a finite domain every restriction of a function to its full argument
//! space is the function itself, so the local-closure hypothesis of the
//! infinite theory holds automatically for every capped class; what remains
//! is stability under the two compositions, decided here by explicit
//! fixpoints, and the constraint side, decided by brute-force enumeration
//! under explicit budgets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classes::{stability_closure, ArityCaps, CloneSpec, FunctionClass};
use crate::constraints::{
    class_satisfies, is_invariant_constraint, is_relaxation, satisfies, Constraint, ConstraintSet,
};
use crate::domain::Point;
use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::invariants::{enumerate_invariants, generate_invariant};
use crate::minors::{tight_minor_constraint, Scheme, SchemeSlot};
use crate::relation::Relation;
use crate::Budgets;

/// Result envelope for a closure query. `exact_within_caps` records whether
/// the caps met the threshold under which the computed set is provably the
/// full Galois double dual and not just a truncation of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport<T> {
    pub closed: T,
    pub caps: ArityCaps,
    pub exact_within_caps: bool,
}

/// Outcome of a separation query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    /// A constraint satisfied by the whole (closed) class but not by the
    /// queried function. `closure_applied` reports that the input class was
    /// not stability-closed and was closed first.
    Separated {
        constraint: Constraint,
        closure_applied: bool,
    },
    /// The queried function lies in the closure; no invariant constraint can
    /// tell it apart from the class.
    NotSeparable { closure_applied: bool },
}

impl Separation {
    pub fn constraint(&self) -> Option<&Constraint> {
        match self {
            Separation::Separated { constraint, .. } => Some(constraint),
            Separation::NotSeparable { .. } => None,
        }
    }

    pub fn closure_applied(&self) -> bool {
        match self {
            Separation::Separated {
                closure_applied, ..
            }
            | Separation::NotSeparable { closure_applied } => *closure_applied,
        }
    }
}

/// The canonical constraint of a class at arity `n`: the antecedent is the
/// invariant generated by the `n` coordinate columns of the enumeration of
/// the full argument space, the consequent is the exact image of those
/// columns under the `n`-ary members of the class.
///
/// Applied to a stability-closed class this is the universal separator: an
/// `n`-ary function satisfies it exactly when its own value column appears in
/// the consequent, i.e. when it is an `n`-ary member of the class.
pub fn canonical_constraint(
    class: &FunctionClass,
    arity: usize,
    c1: &CloneSpec,
    budgets: &Budgets,
) -> Result<Constraint> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    if class.dom() != c1.dom() {
        return Err(Error::DomainMismatch(format!(
            "class maps from {} elements but the antecedent clone lives on {}",
            class.dom(),
            c1.dom()
        )));
    }
    let dom = class.dom();
    let m = dom.pow(arity);
    budgets.check_subsets(
        &format!("canonical constraint point space {dom}^{dom}^{arity}"),
        // the antecedent closure explores tuples inside dom^m
        if m >= 128 { u128::MAX } else { dom.pow(m as usize) },
    )?;
    let m = m as usize;

    // the j-th column lists the j-th coordinate of every point of dom^arity
    let mut columns: Vec<Point> = Vec::with_capacity(arity);
    for j in 0..arity {
        let mut entries = Vec::with_capacity(m);
        for index in 0..m {
            entries.push(Point::decode(index, arity, dom)?.entry(j));
        }
        columns.push(Point::new(entries, dom)?);
    }
    let base = Relation::new(m, dom, columns.clone())?;
    let antecedent = generate_invariant(c1, &base)?;

    let mut consequent = Relation::empty(m, class.cod())?;
    let column_refs: Vec<&Point> = columns.iter().collect();
    for f in class.at_arity(arity) {
        consequent.insert(f.apply_componentwise(&column_refs)?)?;
    }
    Constraint::new(antecedent, consequent)
}

/// Searches for an invariant constraint satisfied by all of `class` but not
/// by `g`. The class is stability-closed first when it is not already closed
/// (the construction presumes stability); the canonical constraint at `g`'s
/// arity then decides separability.
pub fn separating_constraint(
    class: &FunctionClass,
    g: &FiniteFunction,
    c1: &CloneSpec,
    c2: &CloneSpec,
    caps: &ArityCaps,
    budgets: &Budgets,
) -> Result<Separation> {
    if g.dom() != class.dom() || g.cod() != class.cod() {
        return Err(Error::DomainMismatch(format!(
            "function {g} is not over the class's domain pair ({},{})",
            class.dom(),
            class.cod()
        )));
    }
    if g.arity() > caps.fn_arity_cap {
        return Err(Error::ShapeMismatch(format!(
            "function arity {} exceeds the arity cap {}",
            g.arity(),
            caps.fn_arity_cap
        )));
    }
    let closed = stability_closure(class, c1, c2, caps)?;
    let closure_applied = closed != *class;
    let constraint = canonical_constraint(&closed, g.arity(), c1, budgets)?;
    if satisfies(g, &constraint)? {
        Ok(Separation::NotSeparable { closure_applied })
    } else {
        debug_assert!(class_satisfies(&closed, &constraint)?);
        Ok(Separation::Separated {
            constraint,
            closure_applied,
        })
    }
}

/// The class of every function (within the arity cap) that no invariant
/// constraint separates from `class`: the double dual of the definability
/// correspondence, computed through the constraint side. Equals the
/// stability closure whenever the relation arity cap admits the canonical
/// constraints, which `exact_within_caps` records.
pub fn closure_of_class(
    class: &FunctionClass,
    c1: &CloneSpec,
    c2: &CloneSpec,
    caps: &ArityCaps,
    budgets: &Budgets,
) -> Result<ClosureReport<FunctionClass>> {
    let closed = stability_closure(class, c1, c2, caps)?;
    let dom = class.dom();
    let cod = class.cod();
    let mut result = FunctionClass::new(dom, cod);
    if !closed.is_empty() {
        for arity in 1..=caps.fn_arity_cap {
            let constraint = canonical_constraint(&closed, arity, c1, budgets)?;
            let space = dom.pow(arity);
            let count = if space >= 128 {
                u128::MAX
            } else {
                cod.pow(space as usize)
            };
            budgets.check_subsets(&format!("function tables {cod}^{dom}^{arity}"), count)?;
            let space = space as usize;
            let survivors = (0..count as u64)
                .into_par_iter()
                .map(|index| {
                    let table = Point::decode(index as usize, space, cod)?;
                    let f = FiniteFunction::new(arity, dom, cod, table.entries().to_vec())?;
                    Ok(satisfies(&f, &constraint)?.then_some(f))
                })
                .filter_map(|r: Result<Option<FiniteFunction>>| r.transpose())
                .collect::<Result<Vec<_>>>()?;
            for f in survivors {
                result.insert_unchecked(f);
            }
        }
    }
    let exact = (caps.rel_arity_cap as u128) >= dom.pow(caps.fn_arity_cap);
    Ok(ClosureReport {
        closed: result,
        caps: *caps,
        exact_within_caps: exact,
    })
}

/// All invariant constraint pairs (arities within the relation cap) that
/// every member of `class` satisfies.
pub fn constraints_satisfied(
    class: &FunctionClass,
    c1: &CloneSpec,
    c2: &CloneSpec,
    caps: &ArityCaps,
    budgets: &Budgets,
) -> Result<ConstraintSet> {
    if class.dom() != c1.dom() || class.cod() != c2.dom() {
        return Err(Error::DomainMismatch(
            "clone domains do not match the class's domain pair".into(),
        ));
    }
    let mut result = ConstraintSet::new(class.dom(), class.cod());
    for arity in 1..=caps.rel_arity_cap {
        let antecedents = enumerate_invariants(c1, arity, budgets)?;
        let consequents = enumerate_invariants(c2, arity, budgets)?;
        let pairs = (antecedents.len() as u128) * (consequents.len() as u128);
        budgets.check_subsets(&format!("invariant constraint pairs at arity {arity}"), pairs)?;
        let kept = antecedents
            .par_iter()
            .flat_map(|r| consequents.par_iter().map(move |s| (r, s)))
            .map(|(r, s)| {
                let c = Constraint::new(r.clone(), s.clone())?;
                Ok(class_satisfies(class, &c)?.then_some(c))
            })
            .filter_map(|r: Result<Option<Constraint>>| r.transpose())
            .collect::<Result<Vec<_>>>()?;
        for c in kept {
            result.insert(c)?;
        }
    }
    Ok(result)
}

/// All functions (arities within the function cap) satisfying every member
/// of `set`.
pub fn functions_satisfying(
    set: &ConstraintSet,
    caps: &ArityCaps,
    budgets: &Budgets,
) -> Result<FunctionClass> {
    let dom = set.dom();
    let cod = set.cod();
    let mut result = FunctionClass::new(dom, cod);
    for arity in 1..=caps.fn_arity_cap {
        let space = dom.pow(arity);
        let count = if space >= 128 {
            u128::MAX
        } else {
            cod.pow(space as usize)
        };
        budgets.check_subsets(&format!("function tables {cod}^{dom}^{arity}"), count)?;
        let space = space as usize;
        let survivors = (0..count as u64)
            .into_par_iter()
            .map(|index| {
                let table = Point::decode(index as usize, space, cod)?;
                let f = FiniteFunction::new(arity, dom, cod, table.entries().to_vec())?;
                for c in set.members() {
                    if !satisfies(&f, c)? {
                        return Ok(None);
                    }
                }
                Ok(Some(f))
            })
            .filter_map(|r: Result<Option<FiniteFunction>>| r.transpose())
            .collect::<Result<Vec<_>>>()?;
        for f in survivors {
            result.insert_unchecked(f);
        }
    }
    Ok(result)
}

/// The closure of a set of invariant constraints: every invariant constraint
/// (within the relation cap) satisfied by every function (within the function
/// cap) that satisfies all of `set`. Always contains the input, the equality
/// constraint and the empty constraints at enumerated arities.
pub fn closure_of_constraints(
    set: &ConstraintSet,
    c1: &CloneSpec,
    c2: &CloneSpec,
    caps: &ArityCaps,
    budgets: &Budgets,
) -> Result<ClosureReport<ConstraintSet>> {
    for c in set.members() {
        if !is_invariant_constraint(c, c1, c2)? {
            return Err(Error::NotInvariantConstraint {
                constraint: c.to_string(),
                reason: "antecedent or consequent is not invariant under the given clones".into(),
            });
        }
        if c.arity() > caps.rel_arity_cap {
            return Err(Error::ShapeMismatch(format!(
                "constraint {c} has arity {} above the relation cap {}",
                c.arity(),
                caps.rel_arity_cap
            )));
        }
    }
    let satisfying = functions_satisfying(set, caps, budgets)?;
    let closed = constraints_satisfied(&satisfying, c1, c2, caps, budgets)?;
    // dual of the class-side threshold: separating functions need arities up
    // to the largest enumerated antecedent
    let exact = (caps.fn_arity_cap as u128) >= set.dom().pow(caps.rel_arity_cap);
    Ok(ClosureReport {
        closed,
        caps: *caps,
        exact_within_caps: exact,
    })
}

/// Seeded spot-check of the relaxation-closure equivalence: a set of
/// invariant constraints is closed under invariant conjunctive minors exactly
/// when its full relaxation set is closed under all conjunctive minors. Runs
/// `samples` random family/scheme probes on both sides and reports whether
/// every sampled minor landed back in the respective set. A harness entry
/// point, not a decision procedure.
pub fn verify_lemma4_equivalence(
    set: &ConstraintSet,
    c1: &CloneSpec,
    c2: &CloneSpec,
    caps: &ArityCaps,
    budgets: &Budgets,
    seed: u64,
    samples: u64,
) -> Result<bool> {
    for c in set.members() {
        if !is_invariant_constraint(c, c1, c2)? {
            return Err(Error::NotInvariantConstraint {
                constraint: c.to_string(),
                reason: "antecedent or consequent is not invariant under the given clones".into(),
            });
        }
    }
    if set.is_empty() {
        return Ok(true);
    }
    let members: Vec<&Constraint> = set.members().collect();
    let in_relaxation_set = |c: &Constraint| -> Result<bool> {
        for c0 in &members {
            if c.arity() == c0.arity() && is_relaxation(c, c0)? {
                return Ok(true);
            }
        }
        Ok(false)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let family_size = rng.gen_range(1..=3usize);
        let picks: Vec<&Constraint> = (0..family_size)
            .map(|_| members[rng.gen_range(0..members.len())])
            .collect();

        // invariant side: family straight from the set
        let family: Vec<Constraint> = picks.iter().map(|&c| c.clone()).collect();
        let scheme = random_scheme(&mut rng, &family, caps)?;
        let tight = tight_minor_constraint(&family, &scheme, budgets)?;
        for candidate in candidate_minors(&mut rng, &tight)? {
            if candidate.arity() <= caps.rel_arity_cap
                && is_invariant_constraint(&candidate, c1, c2)?
                && !set.contains(&candidate)
            {
                return Ok(false);
            }
        }

        // relaxation side: family of random relaxations of set members
        let family: Vec<Constraint> = picks
            .iter()
            .map(|&c| random_relaxation(&mut rng, c))
            .collect::<Result<_>>()?;
        let scheme = random_scheme(&mut rng, &family, caps)?;
        let tight = tight_minor_constraint(&family, &scheme, budgets)?;
        for candidate in candidate_minors(&mut rng, &tight)? {
            if candidate.arity() <= caps.rel_arity_cap && !in_relaxation_set(&candidate)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn random_scheme(
    rng: &mut ChaCha8Rng,
    family: &[Constraint],
    caps: &ArityCaps,
) -> Result<Scheme> {
    let target = rng.gen_range(1..=caps.rel_arity_cap.min(2));
    let vars = rng.gen_range(0..=2usize);
    let maps = family
        .iter()
        .map(|c| {
            (0..c.arity())
                .map(|_| {
                    if vars > 0 && rng.gen_bool(0.3) {
                        SchemeSlot::Var(rng.gen_range(0..vars))
                    } else {
                        SchemeSlot::Target(rng.gen_range(0..target))
                    }
                })
                .collect()
        })
        .collect();
    Scheme::new(target, vars, maps)
}

/// The tight minor plus a few random relaxations of it; conjunctive minors of
/// a family are exactly the relaxations of its tight minor.
fn candidate_minors(rng: &mut ChaCha8Rng, tight: &Constraint) -> Result<Vec<Constraint>> {
    let mut candidates = vec![tight.clone()];
    for _ in 0..3 {
        candidates.push(random_relaxation(rng, tight)?);
    }
    Ok(candidates)
}

fn random_relaxation(rng: &mut ChaCha8Rng, c: &Constraint) -> Result<Constraint> {
    let mut antecedent = Relation::empty(c.arity(), c.dom())?;
    for t in c.antecedent().tuples() {
        if rng.gen_bool(0.7) {
            antecedent.insert(t.clone())?;
        }
    }
    let mut consequent = c.consequent().clone();
    let full = Relation::full(c.arity(), c.cod())?;
    for t in full.tuples() {
        if !consequent.contains(t) && rng.gen_bool(0.3) {
            consequent.insert(t.clone())?;
        }
    }
    Constraint::new(antecedent, consequent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{clone_levels, projections};
    use crate::constraints::{make_empty, make_equality};
    use crate::domain::DomainSize;

    fn dom(n: usize) -> DomainSize {
        DomainSize::new(n).unwrap()
    }

    fn bool_fn(arity: usize, digits: &str) -> FiniteFunction {
        FiniteFunction::from_digits(arity, dom(2), dom(2), digits).unwrap()
    }

    fn bool_class(specs: &[(usize, &str)]) -> FunctionClass {
        FunctionClass::from_members(dom(2), dom(2), specs.iter().map(|&(n, t)| bool_fn(n, t)))
            .unwrap()
    }

    fn rel(arity: usize, tuples: &str) -> Relation {
        Relation::from_digits(arity, dom(2), tuples).unwrap()
    }

    fn p() -> CloneSpec {
        CloneSpec::projection_clone(dom(2))
    }

    fn caps(fn_cap: usize, rel_cap: usize) -> ArityCaps {
        ArityCaps::new(fn_cap, rel_cap).unwrap()
    }

    fn budgets() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn canonical_constraint_unary_monotone() {
        let class = bool_class(&[(1, "01"), (1, "00"), (1, "11")]);
        let c = canonical_constraint(&class, 1, &p(), &budgets()).unwrap();
        assert_eq!(c.antecedent(), &rel(2, "01"));
        assert_eq!(c.consequent(), &rel(2, "00,01,11"));
    }

    #[test]
    fn canonical_constraint_all_unary() {
        let class = bool_class(&[(1, "00"), (1, "01"), (1, "10"), (1, "11")]);
        let c = canonical_constraint(&class, 1, &p(), &budgets()).unwrap();
        assert_eq!(c.antecedent(), &rel(2, "01"));
        assert_eq!(c.consequent(), &rel(2, "00,01,10,11"));
    }

    #[test]
    fn canonical_constraint_empty_image() {
        // no member of the requested arity: the consequent is empty
        let class = bool_class(&[(2, "0001")]);
        let c = canonical_constraint(&class, 1, &p(), &budgets()).unwrap();
        assert_eq!(c.antecedent(), &rel(2, "01"));
        assert!(c.consequent().is_empty());
    }

    #[test]
    fn separating_unary_monotone_from_negation() {
        let class = bool_class(&[(1, "01"), (1, "00"), (1, "11")]);
        let sep = separating_constraint(
            &class,
            &bool_fn(1, "10"),
            &p(),
            &p(),
            &caps(2, 4),
            &budgets(),
        )
        .unwrap();
        match &sep {
            Separation::Separated {
                constraint,
                closure_applied,
            } => {
                // the class is not closed at cap 2 (binary paddings missing)
                assert!(*closure_applied);
                assert_eq!(constraint.antecedent(), &rel(2, "01"));
                assert_eq!(constraint.consequent(), &rel(2, "00,01,11"));
                assert!(!satisfies(&bool_fn(1, "10"), constraint).unwrap());
            }
            other => panic!("expected separation, got {other:?}"),
        }
    }

    #[test]
    fn member_is_not_separable() {
        let class = bool_class(&[(1, "01"), (1, "00"), (1, "11")]);
        let sep = separating_constraint(
            &class,
            &bool_fn(1, "00"),
            &p(),
            &p(),
            &caps(2, 4),
            &budgets(),
        )
        .unwrap();
        assert!(matches!(sep, Separation::NotSeparable { .. }));
    }

    #[test]
    fn separating_parity_from_the_meet_join_closure() {
        // the closure of {∧,∨} at cap 2; its binary members are the four
        // monotone tables fixing both constants, so the consequent collects
        // exactly their four value columns
        let class = bool_class(&[(2, "0001"), (2, "0111")]);
        let xor = bool_fn(2, "0110");
        let sep =
            separating_constraint(&class, &xor, &p(), &p(), &caps(2, 4), &budgets()).unwrap();
        match &sep {
            Separation::Separated { constraint, .. } => {
                assert_eq!(constraint.arity(), 4);
                assert_eq!(constraint.antecedent(), &rel(4, "0011,0101"));
                assert_eq!(
                    constraint.consequent(),
                    &rel(4, "0001,0011,0101,0111")
                );
                assert!(!satisfies(&xor, constraint).unwrap());
                let closed = stability_closure(&class, &p(), &p(), &caps(2, 4)).unwrap();
                assert!(class_satisfies(&closed, constraint).unwrap());
                assert!(is_invariant_constraint(constraint, &p(), &p()).unwrap());
            }
            other => panic!("expected separation, got {other:?}"),
        }
    }

    #[test]
    fn closure_of_closed_class_is_itself() {
        let four = bool_class(&[(2, "0011"), (2, "0101"), (2, "0001"), (2, "0111")]);
        let closed = stability_closure(&four, &p(), &p(), &caps(2, 4)).unwrap();
        let report = closure_of_class(&closed, &p(), &p(), &caps(2, 4), &budgets()).unwrap();
        assert_eq!(report.closed, closed);
        assert!(report.exact_within_caps);
    }

    #[test]
    fn closure_of_conjunction_matches_stability_closure() {
        let report = closure_of_class(
            &bool_class(&[(2, "0001")]),
            &p(),
            &p(),
            &caps(2, 4),
            &budgets(),
        )
        .unwrap();
        assert_eq!(
            report.closed,
            bool_class(&[(1, "01"), (2, "0001"), (2, "0011"), (2, "0101")])
        );
    }

    #[test]
    fn closure_of_empty_class_is_empty() {
        let empty = FunctionClass::new(dom(2), dom(2));
        let report = closure_of_class(&empty, &p(), &p(), &caps(2, 4), &budgets()).unwrap();
        assert!(report.closed.is_empty());
    }

    #[test]
    fn exactness_flag_depends_on_relation_cap() {
        let k = bool_class(&[(1, "01")]);
        let exact = closure_of_class(&k, &p(), &p(), &caps(2, 4), &budgets()).unwrap();
        assert!(exact.exact_within_caps);
        let truncated = closure_of_class(&k, &p(), &p(), &caps(2, 3), &budgets()).unwrap();
        assert!(!truncated.exact_within_caps);
    }

    #[test]
    fn constraints_satisfied_examples() {
        let leq = Constraint::new(rel(2, "00,01,11"), rel(2, "00,01,11")).unwrap();
        let and_or = bool_class(&[(2, "0001"), (2, "0111")]);
        let sat = constraints_satisfied(&and_or, &p(), &p(), &caps(2, 2), &budgets()).unwrap();
        assert!(sat.contains(&leq));

        // the empty class satisfies every enumerated pair: 4*4 + 16*16
        let empty = FunctionClass::new(dom(2), dom(2));
        let all = constraints_satisfied(&empty, &p(), &p(), &caps(2, 2), &budgets()).unwrap();
        assert_eq!(all.len(), 272);

        // constraints satisfied by every function are still present
        let every = functions_satisfying(
            &ConstraintSet::new(dom(2), dom(2)),
            &caps(2, 2),
            &budgets(),
        )
        .unwrap();
        let common = constraints_satisfied(&every, &p(), &p(), &caps(2, 2), &budgets()).unwrap();
        assert!(common.contains(&make_equality(dom(2), dom(2))));
        assert!(common.contains(&make_empty(dom(2), dom(2), 1).unwrap()));
        assert!(common.contains(&make_empty(dom(2), dom(2), 2).unwrap()));
        assert!(common.is_subset_of(&all));
    }

    #[test]
    fn functions_satisfying_examples() {
        // the equality constraint excludes nothing
        let eq_only = ConstraintSet::from_members(
            dom(2),
            dom(2),
            [make_equality(dom(2), dom(2))],
        )
        .unwrap();
        let all = functions_satisfying(&eq_only, &caps(2, 2), &budgets()).unwrap();
        assert_eq!(all.len(), 20);

        // the order constraint keeps exactly the monotone functions
        let leq = Constraint::new(rel(2, "00,01,11"), rel(2, "00,01,11")).unwrap();
        let set = ConstraintSet::from_members(dom(2), dom(2), [leq]).unwrap();
        let monotone = functions_satisfying(&set, &caps(2, 2), &budgets()).unwrap();
        assert_eq!(monotone.len(), 9);
        assert_eq!(monotone.at_arity(1).count(), 3);
        assert_eq!(monotone.at_arity(2).count(), 6);

        // an unsatisfiable constraint empties the class
        let impossible =
            Constraint::new(rel(1, "0,1"), Relation::empty(1, dom(2)).unwrap()).unwrap();
        let set = ConstraintSet::from_members(dom(2), dom(2), [impossible]).unwrap();
        assert!(functions_satisfying(&set, &caps(2, 2), &budgets())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn closure_of_constraints_laws() {
        let leq = Constraint::new(rel(2, "00,01,11"), rel(2, "00,01,11")).unwrap();
        let t0 = ConstraintSet::from_members(dom(2), dom(2), [leq.clone()]).unwrap();
        let closed = closure_of_constraints(&t0, &p(), &p(), &caps(2, 2), &budgets()).unwrap();

        assert!(t0.is_subset_of(&closed.closed));
        assert!(closed.closed.contains(&make_equality(dom(2), dom(2))));
        assert!(closed.closed.contains(&make_empty(dom(2), dom(2), 1).unwrap()));
        assert!(closed.closed.contains(&make_empty(dom(2), dom(2), 2).unwrap()));

        // idempotent
        let again =
            closure_of_constraints(&closed.closed, &p(), &p(), &caps(2, 2), &budgets()).unwrap();
        assert_eq!(again.closed, closed.closed);

        // relaxation-closed within invariants
        let relaxed = Constraint::new(rel(2, "01"), Relation::full(2, dom(2)).unwrap()).unwrap();
        assert!(is_relaxation(&relaxed, &leq).unwrap());
        assert!(closed.closed.contains(&relaxed));
    }

    #[test]
    fn closure_of_constraints_rejects_non_invariants() {
        let neg = CloneSpec::new(
            dom(2),
            FunctionClass::from_members(dom(2), dom(2), [bool_fn(1, "10")]).unwrap(),
        )
        .unwrap();
        let zero = Constraint::new(rel(1, "0"), rel(1, "0")).unwrap();
        let t0 = ConstraintSet::from_members(dom(2), dom(2), [zero]).unwrap();
        assert!(matches!(
            closure_of_constraints(&t0, &neg, &neg, &caps(2, 2), &budgets()),
            Err(Error::NotInvariantConstraint { .. })
        ));
    }

    #[test]
    fn lemma4_spot_checks() {
        // a closed set passes
        let leq = Constraint::new(rel(2, "00,01,11"), rel(2, "00,01,11")).unwrap();
        let t0 = ConstraintSet::from_members(dom(2), dom(2), [leq.clone()]).unwrap();
        let closed = closure_of_constraints(&t0, &p(), &p(), &caps(2, 2), &budgets())
            .unwrap()
            .closed;
        assert!(verify_lemma4_equivalence(
            &closed,
            &p(),
            &p(),
            &caps(2, 2),
            &budgets(),
            11,
            60
        )
        .unwrap());

        // the singleton {(≤,≤)} is not minor-closed
        assert!(!verify_lemma4_equivalence(
            &t0,
            &p(),
            &p(),
            &caps(2, 2),
            &budgets(),
            11,
            60
        )
        .unwrap());

        // the full enumerated set is closed
        let every = functions_satisfying(
            &ConstraintSet::new(dom(2), dom(2)),
            &caps(2, 2),
            &budgets(),
        )
        .unwrap();
        let all = constraints_satisfied(
            &FunctionClass::new(dom(2), dom(2)),
            &p(),
            &p(),
            &caps(2, 2),
            &budgets(),
        )
        .unwrap();
        assert_eq!(every.len(), 20);
        assert!(verify_lemma4_equivalence(
            &all,
            &p(),
            &p(),
            &caps(2, 2),
            &budgets(),
            11,
            60
        )
        .unwrap());
    }

    #[test]
    fn l01_closure_fixes_exactly_the_two_sided_stable_classes() {
        let l01 = CloneSpec::new(
            dom(2),
            FunctionClass::from_members(dom(2), dom(2), [bool_fn(3, "01101001")]).unwrap(),
        )
        .unwrap();
        let levels = clone_levels(&l01, 3).unwrap();
        let caps3 = caps(3, 8);

        let candidates = [
            bool_class(&[(1, "01")]),
            bool_class(&[(1, "10")]),
            bool_class(&[(2, "0110"), (1, "01")]),
            stability_closure(&bool_class(&[(2, "0001")]), &l01, &l01, &caps3).unwrap(),
            stability_closure(&bool_class(&[(1, "10")]), &l01, &l01, &caps3).unwrap(),
        ];
        for k in &candidates {
            let fixed = closure_of_class(k, &l01, &l01, &caps3, &budgets())
                .unwrap()
                .closed
                == *k;
            let stable = crate::classes::is_stable_right(k, &levels, &caps3).unwrap()
                && crate::classes::is_stable_left(k, &levels, &caps3).unwrap();
            assert_eq!(fixed, stable, "disagreement for {k}");
        }
    }

    #[test]
    fn theorem1_round_trip_at_cap_two() {
        // every stability-closed class over the projections is fixed by the
        // constraint-side closure, and everything outside is separated
        let all_functions = {
            let mut class = FunctionClass::new(dom(2), dom(2));
            for i in 0..4u32 {
                class
                    .insert(FiniteFunction::new(
                        1,
                        dom(2),
                        dom(2),
                        (0..2).map(|b| ((i >> (1 - b)) & 1) as usize).collect(),
                    )
                    .unwrap())
                    .unwrap();
            }
            for i in 0..16u32 {
                class
                    .insert(FiniteFunction::new(
                        2,
                        dom(2),
                        dom(2),
                        (0..4).map(|b| ((i >> (3 - b)) & 1) as usize).collect(),
                    )
                    .unwrap())
                    .unwrap();
            }
            class
        };
        // the triple-sum clone truncated to cap 2: its low levels are just
        // the projections, since binary substitutions into x+y+z collapse
        let l01_truncated = clone_levels(
            &CloneSpec::new(
                dom(2),
                FunctionClass::from_members(dom(2), dom(2), [bool_fn(3, "01101001")]).unwrap(),
            )
            .unwrap(),
            2,
        )
        .unwrap();
        let curated = [
            projections(dom(2), 1)
                .unwrap()
                .union(&projections(dom(2), 2).unwrap())
                .unwrap(),
            stability_closure(&bool_class(&[(2, "0001")]), &p(), &p(), &caps(2, 4)).unwrap(),
            l01_truncated,
            all_functions.clone(),
        ];
        for k in &curated {
            let report = closure_of_class(k, &p(), &p(), &caps(2, 4), &budgets()).unwrap();
            assert_eq!(&report.closed, k);
            assert!(report.exact_within_caps);
            for g in all_functions.members() {
                if k.contains(g) {
                    continue;
                }
                let sep =
                    separating_constraint(k, g, &p(), &p(), &caps(2, 4), &budgets()).unwrap();
                match sep {
                    Separation::Separated { constraint, .. } => {
                        assert!(class_satisfies(k, &constraint).unwrap());
                        assert!(!satisfies(g, &constraint).unwrap());
                        assert!(is_invariant_constraint(&constraint, &p(), &p()).unwrap());
                    }
                    Separation::NotSeparable { .. } => {
                        panic!("{g} should be separable from {k}")
                    }
                }
            }
        }
    }
}
