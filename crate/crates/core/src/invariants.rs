//! Preservation, invariance, and generated invariants.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::classes::{CloneSpec, FunctionClass};
use crate::domain::Point;
use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::relation::Relation;
use crate::util::IndexTuples;
use crate::Budgets;

/// The image `FR` of a relation under a class: every componentwise value of
/// an `n`-ary member on `n` rows of `R`, repetitions allowed. The class may
/// map into a different codomain; the result is a relation over it.
pub fn image(class: &FunctionClass, relation: &Relation) -> Result<Relation> {
    if class.dom() != relation.dom() {
        return Err(Error::DomainMismatch(format!(
            "class over {} elements applied to a relation over {}",
            class.dom(),
            relation.dom()
        )));
    }
    let rows: Vec<&Point> = relation.tuples().collect();
    let mut result = Relation::empty(relation.arity(), class.cod())?;
    let mut args: Vec<&Point> = Vec::new();
    for f in class.members() {
        let mut odo = IndexTuples::new(f.arity(), rows.len());
        while let Some(pick) = odo.next() {
            args.clear();
            args.extend(pick.iter().map(|&i| rows[i]));
            let row = f.apply_componentwise(&args)?;
            result.insert(row)?;
        }
    }
    Ok(result)
}

/// Whether an endofunction maps every row combination of `relation` back
/// into it.
pub fn preserves(f: &FiniteFunction, relation: &Relation) -> Result<bool> {
    if !f.is_endofunction() || f.dom() != relation.dom() {
        return Err(Error::DomainMismatch(format!(
            "function {f} is not an endofunction on a {} element domain",
            relation.dom()
        )));
    }
    let rows: Vec<&Point> = relation.tuples().collect();
    let mut odo = IndexTuples::new(f.arity(), rows.len());
    let mut args: Vec<&Point> = Vec::new();
    while let Some(pick) = odo.next() {
        args.clear();
        args.extend(pick.iter().map(|&i| rows[i]));
        if !relation.contains(&f.apply_componentwise(&args)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `relation` is an invariant of the clone generated by `spec`.
/// Checking the generators suffices: every clone member is a term in the
/// generators and projections, and term application cannot leave a relation
/// preserved by each step.
pub fn is_invariant(spec: &CloneSpec, relation: &Relation) -> Result<bool> {
    if spec.dom() != relation.dom() {
        return Err(Error::DomainMismatch(format!(
            "clone on {} elements asked about a relation over {}",
            spec.dom(),
            relation.dom()
        )));
    }
    for g in spec.generators().members() {
        if !preserves(g, relation)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The least invariant of `spec` containing `relation`: the fixpoint of
/// adding generator images of already reached rows.
pub fn generate_invariant(spec: &CloneSpec, relation: &Relation) -> Result<Relation> {
    if spec.dom() != relation.dom() {
        return Err(Error::DomainMismatch(format!(
            "clone on {} elements asked to close a relation over {}",
            spec.dom(),
            relation.dom()
        )));
    }
    let mut closed = relation.clone();
    let mut frontier: BTreeSet<Point> = relation.tuples().cloned().collect();
    while !frontier.is_empty() {
        let rows: Vec<Point> = closed.tuples().cloned().collect();
        let fresh: Vec<bool> = rows.iter().map(|r| frontier.contains(r)).collect();
        let mut added: BTreeSet<Point> = BTreeSet::new();
        let mut args: Vec<&Point> = Vec::new();
        for g in spec.generators().members() {
            let mut odo = IndexTuples::new(g.arity(), rows.len());
            while let Some(pick) = odo.next() {
                if !pick.iter().any(|&i| fresh[i]) {
                    continue;
                }
                args.clear();
                args.extend(pick.iter().map(|&i| &rows[i]));
                let row = g.apply_componentwise(&args)?;
                if !closed.contains(&row) {
                    added.insert(row);
                }
            }
        }
        for row in &added {
            closed.insert(row.clone())?;
        }
        frontier = added;
    }
    Ok(closed)
}

/// All `arity`-ary invariants of `spec`, by brute-force subset filtering, in
/// canonical relation order. Includes the empty and the full relation.
pub fn enumerate_invariants(
    spec: &CloneSpec,
    arity: usize,
    budgets: &Budgets,
) -> Result<Vec<Relation>> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    let space = spec.dom().pow(arity);
    let subsets = if space >= 64 {
        u128::MAX
    } else {
        1u128 << space
    };
    budgets.check_subsets(
        &format!("subsets of a {arity}-ary point space over {} elements", spec.dom()),
        subsets,
    )?;
    let space = space as usize;
    let points: Vec<Point> = (0..space)
        .map(|i| Point::decode(i, arity, spec.dom()))
        .collect::<Result<_>>()?;

    let mut invariants = (0..subsets as u64)
        .into_par_iter()
        .map(|mask| {
            let tuples = points
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone());
            let relation = Relation::new(arity, spec.dom(), tuples)?;
            Ok(is_invariant(spec, &relation)?.then_some(relation))
        })
        .filter_map(|r: Result<Option<Relation>>| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    invariants.sort();
    Ok(invariants)
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn clone_of(specs: &[(usize, &str)]) -> CloneSpec {
        CloneSpec::new(dom(2), bool_class(specs)).unwrap()
    }

    #[test]
    fn image_examples() {
        let neg = bool_class(&[(1, "10")]);
        assert_eq!(image(&neg, &rel(2, "00,01")).unwrap(), rel(2, "11,10"));

        // parity keeps the two odd rows: the triple-sum image of {01,10} is itself
        let xor3 = bool_class(&[(3, "01101001")]);
        assert_eq!(image(&xor3, &rel(2, "01,10")).unwrap(), rel(2, "01,10"));

        let empty = FunctionClass::new(dom(2), dom(2));
        assert!(image(&empty, &rel(2, "00,01")).unwrap().is_empty());
    }

    #[test]
    fn image_allows_changing_codomain() {
        let to3 = FiniteFunction::from_digits(1, dom(2), dom(3), "21").unwrap();
        let class = FunctionClass::from_members(dom(2), dom(3), [to3]).unwrap();
        let img = image(&class, &rel(1, "0,1")).unwrap();
        assert_eq!(img.dom(), dom(3));
        assert_eq!(img.to_string(), "{1,2}");
    }

    #[test]
    fn preserves_examples() {
        let neg = bool_fn(1, "10");
        assert!(preserves(&neg, &rel(2, "01,10")).unwrap());
        assert!(!preserves(&neg, &rel(2, "00")).unwrap());
        let and = bool_fn(2, "0001");
        assert!(preserves(&and, &rel(2, "00,01,11")).unwrap());
    }

    #[test]
    fn invariance_examples() {
        assert!(is_invariant(&clone_of(&[(1, "10")]), &rel(2, "01,10")).unwrap());
        assert!(is_invariant(
            &clone_of(&[(2, "0001"), (2, "0111")]),
            &rel(2, "00,01,11")
        )
        .unwrap());
        assert!(!is_invariant(&clone_of(&[(1, "10")]), &rel(2, "00")).unwrap());
    }

    #[test]
    fn generated_invariant_examples() {
        // projections alone never add rows
        let p = CloneSpec::projection_clone(dom(2));
        let r = rel(2, "01,10");
        assert_eq!(generate_invariant(&p, &r).unwrap(), r);

        // constants produce 00 and 11; meet and join then add nothing new
        let monotone = clone_of(&[(2, "0001"), (2, "0111"), (1, "00"), (1, "11")]);
        assert_eq!(
            generate_invariant(&monotone, &rel(2, "01")).unwrap(),
            rel(2, "00,01,11")
        );

        // one negation step then closed
        assert_eq!(
            generate_invariant(&clone_of(&[(1, "10")]), &rel(2, "00")).unwrap(),
            rel(2, "00,11")
        );
    }

    #[test]
    fn enumerate_invariants_examples() {
        let budgets = Budgets::default();

        let p = CloneSpec::projection_clone(dom(2));
        assert_eq!(enumerate_invariants(&p, 1, &budgets).unwrap().len(), 4);

        let neg = clone_of(&[(1, "10")]);
        let inv = enumerate_invariants(&neg, 1, &budgets).unwrap();
        assert_eq!(inv, vec![rel(1, ""), rel(1, "0,1")]);

        let monotone = clone_of(&[(2, "0001"), (2, "0111"), (1, "00"), (1, "11")]);
        let inv = enumerate_invariants(&monotone, 2, &budgets).unwrap();
        assert!(inv.contains(&rel(2, "00,01,11")));
    }

    #[test]
    fn enumerate_invariants_budget() {
        let p = CloneSpec::projection_clone(dom(2));
        let tiny = Budgets {
            max_subsets: 8,
            max_skolem: 1,
        };
        match enumerate_invariants(&p, 2, &tiny) {
            Err(Error::BudgetExceeded { needed, budget, .. }) => {
                assert_eq!(needed, 16);
                assert_eq!(budget, 8);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn invariant_laws_small() {
        let spec = clone_of(&[(2, "0001"), (1, "10")]);
        for mask in 0..16u32 {
            let r = Relation::new(
                2,
                dom(2),
                (0..4).filter(|i| mask >> i & 1 == 1).map(|i| {
                    Point::decode(i, 2, dom(2)).unwrap()
                }),
            )
            .unwrap();
            let closed = generate_invariant(&spec, &r).unwrap();
            // extensive, sound, idempotent
            assert!(r.is_subset_of(&closed));
            assert!(is_invariant(&spec, &closed).unwrap());
            assert_eq!(generate_invariant(&spec, &closed).unwrap(), closed);
        }
    }

    #[test]
    fn generator_sufficiency_oracle() {
        // the generators-only invariance check must agree with checking
        // preservation by every generated clone member at arities <= 3
        use crate::classes::generate_clone_level;
        let pool = [
            clone_of(&[(2, "0001")]),
            clone_of(&[(1, "10"), (2, "0111")]),
            clone_of(&[(3, "01101001")]),
            clone_of(&[(2, "0110"), (1, "00")]),
        ];
        for spec in &pool {
            for arity in 1..=2usize {
                let space = 1usize << (1 << arity);
                for mask in 0..space {
                    let r = Relation::new(
                        arity,
                        dom(2),
                        (0..(1 << arity))
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| Point::decode(i, arity, dom(2)).unwrap()),
                    )
                    .unwrap();
                    let fast = is_invariant(spec, &r).unwrap();
                    let mut slow = true;
                    'outer: for n in 1..=3usize {
                        for member in generate_clone_level(spec, n).unwrap().members() {
                            if !preserves(member, &r).unwrap() {
                                slow = false;
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(fast, slow, "disagreement on {r} for {spec:?}");
                }
            }
        }
    }

    #[test]
    fn intersection_of_invariants_is_invariant() {
        let spec = clone_of(&[(2, "0001"), (2, "0111")]);
        let budgets = Budgets::default();
        let invariants = enumerate_invariants(&spec, 2, &budgets).unwrap();
        for a in &invariants {
            for b in &invariants {
                let meet = a.intersection(b).unwrap();
                assert!(is_invariant(&spec, &meet).unwrap());
            }
        }
    }
}
