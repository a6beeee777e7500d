//! Function classes, class composition, stability, and clone generation.

use std::collections::BTreeSet;
use std::fmt;

use crate::domain::DomainSize;
use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::util::IndexTuples;

/// A set of functions sharing one domain/codomain pair, of mixed arities.
/// Members are kept sorted by `(arity, table)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionClass {
    dom: DomainSize,
    cod: DomainSize,
    members: BTreeSet<FiniteFunction>,
}

impl FunctionClass {
    pub fn new(dom: DomainSize, cod: DomainSize) -> Self {
        FunctionClass {
            dom,
            cod,
            members: BTreeSet::new(),
        }
    }

    pub fn from_members(
        dom: DomainSize,
        cod: DomainSize,
        members: impl IntoIterator<Item = FiniteFunction>,
    ) -> Result<Self> {
        let mut class = FunctionClass::new(dom, cod);
        for f in members {
            class.insert(f)?;
        }
        Ok(class)
    }

    pub fn dom(&self) -> DomainSize {
        self.dom
    }

    pub fn cod(&self) -> DomainSize {
        self.cod
    }

    pub fn insert(&mut self, f: FiniteFunction) -> Result<bool> {
        if f.dom() != self.dom || f.cod() != self.cod {
            return Err(Error::DomainMismatch(format!(
                "function {f} is not a map from {} to {} elements",
                self.dom, self.cod
            )));
        }
        Ok(self.members.insert(f))
    }

    pub(crate) fn insert_unchecked(&mut self, f: FiniteFunction) -> bool {
        debug_assert!(f.dom() == self.dom && f.cod() == self.cod);
        self.members.insert(f)
    }

    /// Members in canonical order: by arity, then by table.
    pub fn members(&self) -> impl Iterator<Item = &FiniteFunction> {
        self.members.iter()
    }

    pub fn at_arity(&self, arity: usize) -> impl Iterator<Item = &FiniteFunction> {
        self.members.iter().filter(move |f| f.arity() == arity)
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.members.iter().map(|f| f.arity()).collect()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.members.iter().map(|f| f.arity()).max()
    }

    pub fn contains(&self, f: &FiniteFunction) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subclass_of(&self, other: &FunctionClass) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &FunctionClass) -> Result<FunctionClass> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::DomainMismatch(
                "cannot join classes over different domains".into(),
            ));
        }
        Ok(FunctionClass {
            dom: self.dom,
            cod: self.cod,
            members: self.members.union(&other.members).cloned().collect(),
        })
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

/// A clone presented by a finite set of generating endofunctions. Projections
/// are implicit members and are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CloneSpec {
    dom: DomainSize,
    generators: FunctionClass,
}

impl CloneSpec {
    pub fn new(dom: DomainSize, generators: FunctionClass) -> Result<Self> {
        if generators.dom() != dom || generators.cod() != dom {
            return Err(Error::DomainMismatch(format!(
                "clone generators must be endofunctions on a {dom}-element domain"
            )));
        }
        Ok(CloneSpec { dom, generators })
    }

    /// The clone of projections: no generators at all.
    pub fn projection_clone(dom: DomainSize) -> Self {
        CloneSpec {
            dom,
            generators: FunctionClass::new(dom, dom),
        }
    }

    pub fn dom(&self) -> DomainSize {
        self.dom
    }

    pub fn generators(&self) -> &FunctionClass {
        &self.generators
    }
}

/// Truncation parameters for every enumeration over arities. All stability
/// and closure verdicts are relative to these caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArityCaps {
    pub fn_arity_cap: usize,
    pub rel_arity_cap: usize,
}

impl ArityCaps {
    pub fn new(fn_arity_cap: usize, rel_arity_cap: usize) -> Result<Self> {
        if fn_arity_cap == 0 || rel_arity_cap == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(ArityCaps {
            fn_arity_cap,
            rel_arity_cap,
        })
    }
}

impl Default for ArityCaps {
    fn default() -> Self {
        ArityCaps {
            fn_arity_cap: 3,
            rel_arity_cap: 4,
        }
    }
}

/// All `arity` projection maps on `dom`.
pub fn projections(dom: DomainSize, arity: usize) -> Result<FunctionClass> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    let mut class = FunctionClass::new(dom, dom);
    for coord in 0..arity {
        class.insert_unchecked(FiniteFunction::projection(dom, arity, coord)?);
    }
    Ok(class)
}

/// Composition of function classes: every `f(g_1, ..., g_n)` with `f` an
/// `n`-ary member of `outer` and the `g_i` members of `inner` sharing one
/// arity. The result's arities are exactly the arities occurring in `inner`.
pub fn compose(outer: &FunctionClass, inner: &FunctionClass) -> Result<FunctionClass> {
    if outer.dom() != inner.cod() {
        return Err(Error::CompositionUndefined {
            expected: outer.dom().get(),
            found: inner.cod().get(),
        });
    }
    let mut result = FunctionClass::new(inner.dom(), outer.cod());
    compose_into(outer, inner, None, &mut result)?;
    Ok(result)
}

/// Composition kernel. When `touched` is given, only argument tuples that
/// pick at least one touched inner member are enumerated; this is the
/// frontier filter used by the fixpoint closures.
fn compose_into(
    outer: &FunctionClass,
    inner: &FunctionClass,
    touched: Option<&BTreeSet<FiniteFunction>>,
    result: &mut FunctionClass,
) -> Result<()> {
    let base = outer.dom().get();
    for arity in inner.arities() {
        let choices: Vec<&FiniteFunction> = inner.at_arity(arity).collect();
        let in_frontier: Vec<bool> = match touched {
            Some(set) => choices.iter().map(|g| set.contains(g)).collect(),
            None => vec![true; choices.len()],
        };
        let points = inner.dom().point_count(arity)?;
        for f in outer.members() {
            let mut odo = IndexTuples::new(f.arity(), choices.len());
            while let Some(pick) = odo.next() {
                if !pick.iter().any(|&c| in_frontier[c]) {
                    continue;
                }
                let mut table = Vec::with_capacity(points);
                for i in 0..points {
                    let mut idx = 0usize;
                    for &c in pick {
                        idx = idx * base + choices[c].table()[i];
                    }
                    table.push(f.table()[idx]);
                }
                result.insert_unchecked(FiniteFunction::new_unchecked(
                    arity,
                    inner.dom(),
                    outer.cod(),
                    table,
                ));
            }
        }
    }
    Ok(())
}

fn restrict_to_cap(class: &FunctionClass, cap: usize) -> FunctionClass {
    let mut restricted = FunctionClass::new(class.dom(), class.cod());
    for f in class.members().filter(|f| f.arity() <= cap) {
        restricted.insert_unchecked(f.clone());
    }
    restricted
}

/// Whether `class` absorbs right composition with `with`, restricted to
/// arities within `caps`. Requires `with` to consist of endofunctions on the
/// class's domain so that the verdict is meaningful.
pub fn is_stable_right(
    class: &FunctionClass,
    with: &FunctionClass,
    caps: &ArityCaps,
) -> Result<bool> {
    if with.dom() != with.cod() || with.cod() != class.dom() {
        return Err(Error::CompositionUndefined {
            expected: class.dom().get(),
            found: with.cod().get(),
        });
    }
    let composed = compose(class, &restrict_to_cap(with, caps.fn_arity_cap))?;
    let contained = composed.members().all(|f| class.contains(f));
    Ok(contained)
}

/// Whether `class` absorbs left composition with `with` (the `JI ⊆ I`
/// variant), restricted to arities within `caps`.
pub fn is_stable_left(
    class: &FunctionClass,
    with: &FunctionClass,
    caps: &ArityCaps,
) -> Result<bool> {
    if with.dom() != with.cod() || with.dom() != class.cod() {
        return Err(Error::CompositionUndefined {
            expected: with.dom().get(),
            found: class.cod().get(),
        });
    }
    let composed = compose(&restrict_to_cap(with, caps.fn_arity_cap), class)?;
    let contained = composed.members().all(|f| class.contains(f));
    Ok(contained)
}

/// The `arity`-ary level of the clone generated by `spec`: the least fixpoint
/// of applying generators to previously reached `arity`-ary functions,
/// seeded with the projections. Every `arity`-ary clone member is a term in
/// `arity` variables, so no intermediate arity above `arity` is needed.
pub fn generate_clone_level(spec: &CloneSpec, arity: usize) -> Result<FunctionClass> {
    let mut level = projections(spec.dom(), arity)?;
    if spec.generators().is_empty() {
        return Ok(level);
    }
    let points = spec.dom().point_count(arity)?;
    let base = spec.dom().get();
    let mut frontier: BTreeSet<FiniteFunction> = level.members().cloned().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<FiniteFunction> = level.members().cloned().collect();
        let fresh: Vec<bool> = snapshot.iter().map(|f| frontier.contains(f)).collect();
        let mut added: BTreeSet<FiniteFunction> = BTreeSet::new();
        for g in spec.generators().members() {
            let mut odo = IndexTuples::new(g.arity(), snapshot.len());
            while let Some(pick) = odo.next() {
                if !pick.iter().any(|&c| fresh[c]) {
                    continue;
                }
                let mut table = Vec::with_capacity(points);
                for i in 0..points {
                    let mut idx = 0usize;
                    for &c in pick {
                        idx = idx * base + snapshot[c].table()[i];
                    }
                    table.push(g.table()[idx]);
                }
                let candidate =
                    FiniteFunction::new_unchecked(arity, spec.dom(), spec.dom(), table);
                if !level.contains(&candidate) {
                    added.insert(candidate);
                }
            }
        }
        for f in &added {
            level.insert_unchecked(f.clone());
        }
        frontier = added;
    }
    Ok(level)
}

/// Union of the clone levels of `spec` for every arity up to `cap`.
pub fn clone_levels(spec: &CloneSpec, cap: usize) -> Result<FunctionClass> {
    let mut levels = FunctionClass::new(spec.dom(), spec.dom());
    for arity in 1..=cap {
        for f in generate_clone_level(spec, arity)?.members() {
            levels.insert_unchecked(f.clone());
        }
    }
    Ok(levels)
}

/// Membership of `f` in the clone generated by `spec`, decided on the level
/// of `f`'s own arity.
pub fn clone_member(spec: &CloneSpec, f: &FiniteFunction) -> Result<bool> {
    if f.dom() != spec.dom() || f.cod() != spec.dom() {
        return Err(Error::DomainMismatch(format!(
            "function {f} is not an endofunction on a {} element domain",
            spec.dom()
        )));
    }
    Ok(generate_clone_level(spec, f.arity())?.contains(f))
}

/// The least superset of `class` (within the arity cap) stable under right
/// composition with `right` and left composition with `left`, where clone
/// levels are taken at arities up to the cap. Verdicts above the cap are out
/// of reach of this truncated representation.
pub fn stability_closure(
    class: &FunctionClass,
    right: &CloneSpec,
    left: &CloneSpec,
    caps: &ArityCaps,
) -> Result<FunctionClass> {
    if right.dom() != class.dom() {
        return Err(Error::DomainMismatch(format!(
            "right clone lives on {} elements but the class maps from {}",
            right.dom(),
            class.dom()
        )));
    }
    if left.dom() != class.cod() {
        return Err(Error::DomainMismatch(format!(
            "left clone lives on {} elements but the class maps to {}",
            left.dom(),
            class.cod()
        )));
    }
    let cap = caps.fn_arity_cap;
    if let Some(f) = class.members().find(|f| f.arity() > cap) {
        return Err(Error::ShapeMismatch(format!(
            "class member {f} exceeds the arity cap {cap}"
        )));
    }
    if class.is_empty() {
        return Ok(class.clone());
    }
    let right_levels = clone_levels(right, cap)?;
    let left_levels = clone_levels(left, cap)?;

    let mut closed = class.clone();
    let mut frontier: BTreeSet<FiniteFunction> = class.members().cloned().collect();
    while !frontier.is_empty() {
        let mut reached = FunctionClass::new(class.dom(), class.cod());
        // right composition: only new outer members can produce new results
        let frontier_class = FunctionClass {
            dom: class.dom(),
            cod: class.cod(),
            members: frontier.clone(),
        };
        compose_into(&frontier_class, &right_levels, None, &mut reached)?;
        // left composition: only argument tuples touching a new member matter
        compose_into(&left_levels, &closed, Some(&frontier), &mut reached)?;

        let mut added = BTreeSet::new();
        for f in reached.members() {
            if !closed.contains(f) {
                added.insert(f.clone());
            }
        }
        for f in &added {
            closed.insert_unchecked(f.clone());
        }
        frontier = added;
    }
    Ok(closed)
}
