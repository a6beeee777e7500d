//! Minor formation schemes, Skolem maps, and conjunctive minors of relations
//! and constraints.

use rayon::prelude::*;

use crate::constraints::Constraint;
use crate::domain::{DomainSize, Point};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::Budgets;

/// One slot of a scheme map: either a coordinate of the target tuple or an
/// existentially quantified indeterminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeSlot {
    Target(usize),
    Var(usize),
}

/// A minor formation scheme: a target arity, a set of indeterminates (indexed
/// `0..vars`), and a nonempty family of maps from source positions to
/// targets-or-indeterminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    target: usize,
    vars: usize,
    maps: Vec<Vec<SchemeSlot>>,
}

impl Scheme {
    pub fn new(target: usize, vars: usize, maps: Vec<Vec<SchemeSlot>>) -> Result<Self> {
        if target == 0 {
            return Err(Error::ZeroArity);
        }
        if maps.is_empty() {
            return Err(Error::EmptyFamily("scheme maps"));
        }
        for map in &maps {
            if map.is_empty() {
                return Err(Error::ZeroArity);
            }
            for slot in map {
                match *slot {
                    SchemeSlot::Target(i) if i >= target => {
                        return Err(Error::IndexOutOfRange {
                            index: i,
                            count: target as u128,
                        })
                    }
                    SchemeSlot::Var(v) if v >= vars => {
                        return Err(Error::IndexOutOfRange {
                            index: v,
                            count: vars as u128,
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Scheme { target, vars, maps })
    }

    /// The scheme with a single map that is the identity on `target`
    /// coordinates and quantifies nothing.
    pub fn identity(target: usize) -> Result<Self> {
        Scheme::new(
            target,
            0,
            vec![(0..target).map(SchemeSlot::Target).collect()],
        )
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn maps(&self) -> &[Vec<SchemeSlot>] {
        &self.maps
    }

    /// Source arity of the `j`-th map.
    pub fn source_arity(&self, j: usize) -> usize {
        self.maps[j].len()
    }
}

/// A total assignment of domain elements to the indeterminates of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemMap {
    values: Vec<usize>,
    base: DomainSize,
}

impl SkolemMap {
    pub fn new(values: Vec<usize>, base: DomainSize) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= base.get()) {
            return Err(Error::ShapeMismatch(format!(
                "skolem value {v} is not an element of a {base}-element domain"
            )));
        }
        Ok(SkolemMap { values, base })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn base(&self) -> DomainSize {
        self.base
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// The `index`-th assignment of `vars` indeterminates over `base`, in
    /// big-endian order.
    fn decode(index: usize, vars: usize, base: DomainSize) -> Self {
        let b = base.get();
        let mut values = vec![0usize; vars];
        let mut rest = index;
        for slot in values.iter_mut().rev() {
            *slot = rest % b;
            rest /= b;
        }
        SkolemMap { values, base }
    }
}

/// The source tuple induced by one scheme map: target slots read from the
/// tuple `a`, indeterminate slots from the Skolem assignment.
pub fn apply_scheme_row(map: &[SchemeSlot], a: &Point, sigma: &SkolemMap) -> Result<Point> {
    if sigma.base() != a.base() {
        return Err(Error::DomainMismatch(format!(
            "skolem map over {} elements combined with a tuple over {}",
            sigma.base(),
            a.base()
        )));
    }
    let entries = map
        .iter()
        .map(|slot| match *slot {
            SchemeSlot::Target(i) => {
                if i >= a.arity() {
                    Err(Error::ShapeMismatch(format!(
                        "target index {i} exceeds tuple arity {}",
                        a.arity()
                    )))
                } else {
                    Ok(a.entry(i))
                }
            }
            SchemeSlot::Var(v) => {
                if v >= sigma.len() {
                    Err(Error::ShapeMismatch(format!(
                        "indeterminate {v} has no value in a skolem map of {} entries",
                        sigma.len()
                    )))
                } else {
                    Ok(sigma.values()[v])
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Point::new(entries, a.base())
}

fn validate_family(family: &[Relation], scheme: &Scheme) -> Result<DomainSize> {
    if family.is_empty() {
        return Err(Error::EmptyFamily("relation family"));
    }
    if family.len() != scheme.maps().len() {
        return Err(Error::ShapeMismatch(format!(
            "family of {} relations does not fit a scheme with {} maps",
            family.len(),
            scheme.maps().len()
        )));
    }
    let dom = family[0].dom();
    for (j, r) in family.iter().enumerate() {
        if r.dom() != dom {
            return Err(Error::DomainMismatch(
                "family members live over different domains".into(),
            ));
        }
        if r.arity() != scheme.source_arity(j) {
            return Err(Error::ShapeMismatch(format!(
                "family member {j} has arity {} but the scheme map expects {}",
                r.arity(),
                scheme.source_arity(j)
            )));
        }
    }
    Ok(dom)
}

/// The unique tight conjunctive minor of a relation family via a scheme: all
/// target tuples for which some Skolem assignment sends every scheme map into
/// its relation. Skolem assignments are searched in canonical order with
/// early exit on the first witness.
pub fn tight_minor(family: &[Relation], scheme: &Scheme, budgets: &Budgets) -> Result<Relation> {
    let dom = validate_family(family, scheme)?;
    budgets.check_skolem(dom.pow(scheme.vars()))?;
    budgets.check_subsets(
        &format!("target space {}^{}", dom, scheme.target()),
        dom.pow(scheme.target()),
    )?;
    let target_count = dom.point_count(scheme.target())?;
    let skolem_count = dom.point_count(scheme.vars())?;

    let selected = (0..target_count)
        .into_par_iter()
        .map(|index| {
            let a = Point::decode(index, scheme.target(), dom)?;
            for s in 0..skolem_count {
                let sigma = SkolemMap::decode(s, scheme.vars(), dom);
                let mut all = true;
                for (j, map) in scheme.maps().iter().enumerate() {
                    if !family[j].contains(&apply_scheme_row(map, &a, &sigma)?) {
                        all = false;
                        break;
                    }
                }
                if all {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        })
        .filter_map(|r: Result<Option<Point>>| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    Relation::new(scheme.target(), dom, selected)
}

/// Whether `relation` is a restrictive conjunctive minor of the family: every
/// tuple of `relation` admits a Skolem witness, i.e. it is contained in the
/// tight minor.
pub fn is_restrictive(
    relation: &Relation,
    family: &[Relation],
    scheme: &Scheme,
    budgets: &Budgets,
) -> Result<bool> {
    let tight = tight_minor(family, scheme, budgets)?;
    check_target_shape(relation, &tight)?;
    Ok(relation.is_subset_of(&tight))
}

/// Whether `relation` is an extensive conjunctive minor of the family: it
/// contains every tuple with a Skolem witness, i.e. the tight minor.
pub fn is_extensive(
    relation: &Relation,
    family: &[Relation],
    scheme: &Scheme,
    budgets: &Budgets,
) -> Result<bool> {
    let tight = tight_minor(family, scheme, budgets)?;
    check_target_shape(relation, &tight)?;
    Ok(tight.is_subset_of(relation))
}

fn check_target_shape(relation: &Relation, tight: &Relation) -> Result<()> {
    if relation.arity() != tight.arity() || relation.dom() != tight.dom() {
        return Err(Error::ShapeMismatch(format!(
            "relation of arity {} over {} elements compared against a minor of arity {} over {}",
            relation.arity(),
            relation.dom(),
            tight.arity(),
            tight.dom()
        )));
    }
    Ok(())
}

/// The tight conjunctive minor of a constraint family: the tight minor of the
/// antecedents over the antecedent domain paired with the tight minor of the
/// consequents over the consequent domain, via one shared scheme.
pub fn tight_minor_constraint(
    family: &[Constraint],
    scheme: &Scheme,
    budgets: &Budgets,
) -> Result<Constraint> {
    if family.is_empty() {
        return Err(Error::EmptyFamily("constraint family"));
    }
    let antecedents: Vec<Relation> = family.iter().map(|c| c.antecedent().clone()).collect();
    let consequents: Vec<Relation> = family.iter().map(|c| c.consequent().clone()).collect();
    Constraint::new(
        tight_minor(&antecedents, scheme, budgets)?,
        tight_minor(&consequents, scheme, budgets)?,
    )
}

/// Whether `constraint` is a conjunctive minor of the family: restrictive on
/// the antecedent side and extensive on the consequent side.
pub fn is_conjunctive_minor(
    constraint: &Constraint,
    family: &[Constraint],
    scheme: &Scheme,
    budgets: &Budgets,
) -> Result<bool> {
    if family.is_empty() {
        return Err(Error::EmptyFamily("constraint family"));
    }
    let antecedents: Vec<Relation> = family.iter().map(|c| c.antecedent().clone()).collect();
    let consequents: Vec<Relation> = family.iter().map(|c| c.consequent().clone()).collect();
    Ok(
        is_restrictive(constraint.antecedent(), &antecedents, scheme, budgets)?
            && is_extensive(constraint.consequent(), &consequents, scheme, budgets)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dom(n: usize) -> DomainSize {
        DomainSize::new(n).unwrap()
    }

    fn rel(arity: usize, tuples: &str) -> Relation {
        Relation::from_digits(arity, dom(2), tuples).unwrap()
    }

    fn budgets() -> Budgets {
        Budgets::default()
    }

    fn exists_scheme() -> Scheme {
        // target arity 1, one indeterminate, single binary map (t0, v0)
        Scheme::new(1, 1, vec![vec![SchemeSlot::Target(0), SchemeSlot::Var(0)]]).unwrap()
    }

    #[test]
    fn scheme_validation() {
        assert!(Scheme::new(0, 0, vec![vec![SchemeSlot::Target(0)]]).is_err());
        assert!(Scheme::new(1, 0, vec![]).is_err());
        assert!(Scheme::new(1, 0, vec![vec![]]).is_err());
        assert!(Scheme::new(1, 0, vec![vec![SchemeSlot::Target(1)]]).is_err());
        assert!(Scheme::new(1, 0, vec![vec![SchemeSlot::Var(0)]]).is_err());
    }

    #[test]
    fn apply_scheme_row_examples() {
        let a = rel(2, "01").tuples().next().unwrap().clone();
        let sigma = SkolemMap::new(vec![], dom(2)).unwrap();
        let identity = Scheme::identity(2).unwrap();
        assert_eq!(
            apply_scheme_row(&identity.maps()[0], &a, &sigma).unwrap(),
            a
        );

        // substitution: h(0) = v0, h(1) = target 0 on a = (1) with sigma(v0) = 0
        let a1 = Point::new(vec![1], dom(2)).unwrap();
        let sigma0 = SkolemMap::new(vec![0], dom(2)).unwrap();
        let map = vec![SchemeSlot::Var(0), SchemeSlot::Target(0)];
        assert_eq!(
            apply_scheme_row(&map, &a1, &sigma0).unwrap(),
            Point::new(vec![0, 1], dom(2)).unwrap()
        );

        // diagonal repetition
        let a01 = Point::new(vec![0, 1], dom(2)).unwrap();
        let diag = vec![SchemeSlot::Target(1), SchemeSlot::Target(1)];
        assert_eq!(
            apply_scheme_row(&diag, &a01, &sigma).unwrap(),
            Point::new(vec![1, 1], dom(2)).unwrap()
        );

        // partial skolem map
        let needs_var = vec![SchemeSlot::Var(0)];
        assert!(apply_scheme_row(&needs_var, &a01, &sigma).is_err());
    }

    #[test]
    fn tight_minor_identity_scheme() {
        let r = rel(2, "00,01,11");
        let tight = tight_minor(&[r.clone()], &Scheme::identity(2).unwrap(), &budgets()).unwrap();
        assert_eq!(tight, r);
    }

    #[test]
    fn tight_minor_intersection() {
        // two identity maps with no indeterminates conjoin the family
        let scheme = Scheme::new(
            2,
            0,
            vec![
                vec![SchemeSlot::Target(0), SchemeSlot::Target(1)],
                vec![SchemeSlot::Target(0), SchemeSlot::Target(1)],
            ],
        )
        .unwrap();
        let r1 = rel(2, "00,01,11");
        let r2 = rel(2, "00,11");
        assert_eq!(
            tight_minor(&[r1.clone(), r2.clone()], &scheme, &budgets()).unwrap(),
            r1.intersection(&r2).unwrap()
        );
    }

    #[test]
    fn tight_minor_existential_projection() {
        // ∃b (a,b) ∈ ≤ holds for both elements
        let leq = rel(2, "00,01,11");
        assert_eq!(
            tight_minor(&[leq], &exists_scheme(), &budgets()).unwrap(),
            rel(1, "0,1")
        );
    }

    #[test]
    fn restrictive_and_extensive() {
        let leq = rel(2, "00,01,11");
        let scheme = exists_scheme();
        let tight = tight_minor(&[leq.clone()], &scheme, &budgets()).unwrap();

        assert!(is_restrictive(&tight, &[leq.clone()], &scheme, &budgets()).unwrap());
        assert!(is_extensive(&tight, &[leq.clone()], &scheme, &budgets()).unwrap());
        assert!(is_restrictive(&rel(1, ""), &[leq.clone()], &scheme, &budgets()).unwrap());
        assert!(is_extensive(&rel(1, "0,1"), &[leq.clone()], &scheme, &budgets()).unwrap());

        // with an empty family member the tight minor is empty
        let empty = rel(2, "");
        assert!(!is_restrictive(&rel(1, "0,1"), &[empty.clone()], &scheme, &budgets()).unwrap());
        assert!(!is_extensive(&rel(1, ""), &[rel(2, "00,01,10,11")], &scheme, &budgets()).unwrap());
    }

    #[test]
    fn tight_minor_constraint_examples() {
        let leq_leq = Constraint::new(rel(2, "00,01,11"), rel(2, "00,01,11")).unwrap();
        let identity = Scheme::identity(2).unwrap();
        assert_eq!(
            tight_minor_constraint(&[leq_leq.clone()], &identity, &budgets()).unwrap(),
            leq_leq
        );

        // conjunction case: both sides intersect
        let scheme = Scheme::new(
            2,
            0,
            vec![
                vec![SchemeSlot::Target(0), SchemeSlot::Target(1)],
                vec![SchemeSlot::Target(0), SchemeSlot::Target(1)],
            ],
        )
        .unwrap();
        let c1 = Constraint::new(rel(2, "00,01"), rel(2, "00,01,10")).unwrap();
        let c2 = Constraint::new(rel(2, "01,11"), rel(2, "01,11")).unwrap();
        let tight = tight_minor_constraint(&[c1, c2], &scheme, &budgets()).unwrap();
        assert_eq!(tight.antecedent(), &rel(2, "01"));
        assert_eq!(tight.consequent(), &rel(2, "01"));

        // the existential projection saturates both sides
        let both = tight_minor_constraint(&[leq_leq], &exists_scheme(), &budgets()).unwrap();
        assert_eq!(both.antecedent(), &rel(1, "0,1"));
        assert_eq!(both.consequent(), &rel(1, "0,1"));
    }

    #[test]
    fn conjunctive_minor_checks() {
        let leq_leq = Constraint::new(rel(2, "00,01,11"), rel(2, "00,01,11")).unwrap();
        let scheme = exists_scheme();
        let tight = tight_minor_constraint(&[leq_leq.clone()], &scheme, &budgets()).unwrap();
        assert!(is_conjunctive_minor(&tight, &[leq_leq.clone()], &scheme, &budgets()).unwrap());

        // relaxations of the tight minor stay conjunctive minors
        let relaxed = Constraint::new(rel(1, "0"), tight.consequent().clone()).unwrap();
        assert!(is_conjunctive_minor(&relaxed, &[leq_leq.clone()], &scheme, &budgets()).unwrap());

        // an antecedent beyond the tight one fails; use a family whose tight
        // antecedent is proper
        let single = Constraint::new(rel(2, "00"), rel(2, "00")).unwrap();
        let tight_single =
            tight_minor_constraint(&[single.clone()], &scheme, &budgets()).unwrap();
        assert_eq!(tight_single.antecedent(), &rel(1, "0"));
        let too_big = Constraint::new(rel(1, "0,1"), tight_single.consequent().clone()).unwrap();
        assert!(!is_conjunctive_minor(&too_big, &[single], &scheme, &budgets()).unwrap());
    }

    #[test]
    fn family_shape_errors() {
        let leq = rel(2, "00,01,11");
        let scheme = exists_scheme();
        assert!(tight_minor(&[], &Scheme::identity(1).unwrap(), &budgets()).is_err());
        assert!(tight_minor(&[leq.clone(), leq.clone()], &scheme, &budgets()).is_err());
        assert!(tight_minor(&[rel(1, "0")], &scheme, &budgets()).is_err());
    }

    #[test]
    fn skolem_budget() {
        let tiny = Budgets {
            max_subsets: 65536,
            max_skolem: 3,
        };
        let scheme = Scheme::new(
            1,
            2,
            vec![vec![SchemeSlot::Target(0), SchemeSlot::Var(0), SchemeSlot::Var(1)]],
        )
        .unwrap();
        let r = Relation::full(3, dom(2)).unwrap();
        assert!(matches!(
            tight_minor(&[r], &scheme, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn identity_scheme_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let arity = rng.gen_range(1..=3);
            let space = 1usize << arity;
            let mask: u32 = rng.gen_range(0..(1 << space));
            let r = Relation::new(
                arity,
                dom(2),
                (0..space)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| Point::decode(i, arity, dom(2)).unwrap()),
            )
            .unwrap();
            let scheme = Scheme::identity(arity).unwrap();
            assert_eq!(tight_minor(&[r.clone()], &scheme, &budgets()).unwrap(), r);
        }
    }
}
