//! Named verification suites: seeded property batteries that drive the
//! library's algebraic laws end to end and report counterexamples as text.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clonecraft_core::{
    class_satisfies, clone_levels, closure_of_class, closure_of_constraints, compose,
    generate_invariant, image, intersect_consequents, is_invariant, is_relaxation, is_stable_left,
    is_stable_right, make_empty, make_equality, projections, satisfies, separating_constraint,
    stability_closure, tight_minor, tight_minor_constraint, verify_lemma4_equivalence, ArityCaps,
    Budgets, CloneSpec, Constraint, ConstraintSet, DomainSize, Error, FiniteFunction,
    FunctionClass, Point, Relation, Scheme, SchemeSlot, Separation,
};

/// Outcome of one suite run. `counterexamples` empty means pass.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: u64,
    pub counterexamples: Vec<String>,
    pub wall: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// The known suite names.
pub const SUITES: &[&str] = &[
    "assoc",
    "lemma1",
    "minors",
    "szabo",
    "relaxation",
    "theorem1",
    "theorem3",
    "L01",
];

pub fn default_cases(suite: &str) -> u64 {
    match suite {
        "theorem3" => 5,
        "L01" => 10,
        _ => 500,
    }
}

/// Runs a named suite. Returns `None` for an unknown suite name. Each suite
/// fixes its own arity regime (the caps the underlying laws are exact at);
/// `budgets` guards the enumerations throughout.
pub fn run_suite(
    suite: &str,
    seed: u64,
    cases: Option<u64>,
    budgets: &Budgets,
) -> Option<Result<SuiteResult, Error>> {
    let canonical = SUITES
        .iter()
        .find(|s| s.eq_ignore_ascii_case(suite))?;
    let cases = cases.unwrap_or_else(|| default_cases(canonical));
    let start = Instant::now();
    let outcome = match *canonical {
        "assoc" => run_assoc(seed, cases),
        "lemma1" => run_lemma1(seed, cases),
        "minors" => run_minors(seed, cases, budgets),
        "szabo" => run_szabo(seed, cases, budgets),
        "relaxation" => run_relaxation(),
        "theorem1" => run_theorem1(budgets),
        "theorem3" => run_theorem3(seed, cases, budgets),
        "L01" => run_l01(seed, cases, budgets),
        _ => unreachable!(),
    };
    Some(outcome.map(|(cases, counterexamples)| SuiteResult {
        suite: canonical.to_string(),
        cases,
        counterexamples,
        wall: start.elapsed(),
    }))
}

type SuiteOutcome = Result<(u64, Vec<String>), Error>;

fn two() -> DomainSize {
    DomainSize::new(2).expect("two-element domain")
}

fn random_function(rng: &mut ChaCha8Rng, arity: usize) -> FiniteFunction {
    let table = (0..(1usize << arity)).map(|_| rng.gen_range(0..2)).collect();
    FiniteFunction::new(arity, two(), two(), table).expect("random table")
}

fn random_class(
    rng: &mut ChaCha8Rng,
    max_per_arity: usize,
    arities: std::ops::RangeInclusive<usize>,
) -> FunctionClass {
    let mut class = FunctionClass::new(two(), two());
    for arity in arities {
        for _ in 0..rng.gen_range(0..=max_per_arity) {
            class
                .insert(random_function(rng, arity))
                .expect("matching domains");
        }
    }
    class
}

fn random_relation(rng: &mut ChaCha8Rng, arity: usize, max_tuples: usize) -> Relation {
    let space = 1usize << arity;
    let mut relation = Relation::empty(arity, two()).expect("positive arity");
    for _ in 0..rng.gen_range(0..=max_tuples) {
        let index = rng.gen_range(0..space);
        relation
            .insert(Point::decode(index, arity, two()).expect("index in range"))
            .expect("matching shape");
    }
    relation
}

fn generator_pool() -> Vec<FiniteFunction> {
    let f = |arity, digits| {
        FiniteFunction::from_digits(arity, two(), two(), digits).expect("pool table")
    };
    vec![
        f(2, "0001"),
        f(2, "0111"),
        f(1, "10"),
        f(2, "0110"),
        f(1, "00"),
        f(1, "11"),
        f(3, "01101001"),
        f(3, "00010111"),
    ]
}

fn random_clone(rng: &mut ChaCha8Rng) -> CloneSpec {
    let pool = generator_pool();
    let mut generators = FunctionClass::new(two(), two());
    for _ in 0..rng.gen_range(0..=2usize) {
        generators
            .insert(pool[rng.gen_range(0..pool.len())].clone())
            .expect("matching domains");
    }
    CloneSpec::new(two(), generators).expect("endofunctions")
}

fn random_scheme(
    rng: &mut ChaCha8Rng,
    source_arities: &[usize],
    max_target: usize,
    max_vars: usize,
) -> Scheme {
    let target = rng.gen_range(1..=max_target);
    let vars = rng.gen_range(0..=max_vars);
    let maps = source_arities
        .iter()
        .map(|&n| {
            (0..n)
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
    Scheme::new(target, vars, maps).expect("valid random scheme")
}

fn random_relaxation(rng: &mut ChaCha8Rng, c: &Constraint) -> Constraint {
    let mut antecedent = Relation::empty(c.arity(), c.dom()).expect("positive arity");
    for t in c.antecedent().tuples() {
        if rng.gen_bool(0.7) {
            antecedent.insert(t.clone()).expect("matching shape");
        }
    }
    let mut consequent = c.consequent().clone();
    for t in Relation::full(c.arity(), c.cod()).expect("full relation").tuples() {
        if !consequent.contains(t) && rng.gen_bool(0.3) {
            consequent.insert(t.clone()).expect("matching shape");
        }
    }
    Constraint::new(antecedent, consequent).expect("equal arities")
}

/// Composition associativity: `(IJ)K ⊆ I(JK)` for random triples, with
/// equality when `J` is a generated clone level set. The equality case draws
/// `K` with at most two members per arity: a clone level set truncated at
/// arity 2 only provides the variable paddings for that many distinct inner
/// arguments, and beyond it equality genuinely fails.
fn run_assoc(seed: u64, cases: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let i = random_class(&mut rng, 3, 1..=2);
        let k = random_class(&mut rng, 2, 1..=2);
        let clone_level_case = case % 2 == 1;
        let j = if clone_level_case {
            clone_levels(&random_clone(&mut rng), 2)?
        } else {
            random_class(&mut rng, 3, 1..=2)
        };
        let left = compose(&compose(&i, &j)?, &k)?;
        let right = compose(&i, &compose(&j, &k)?)?;
        if !left.is_subclass_of(&right) {
            bad.push(format!(
                "case {case}: (IJ)K not within I(JK) for I={i} J={j} K={k}"
            ));
        } else if clone_level_case && left != right {
            bad.push(format!(
                "case {case}: clone-level J gave strict inclusion for I={i} J={j} K={k}"
            ));
        }
    }
    Ok((cases, bad))
}

/// Composition against a generated invariant: `f` satisfies `(CR, S)` exactly
/// when every member of `f ∘ C` (levels up to the antecedent size) satisfies
/// `(R, S)`. With at most two antecedent rows the level-2 compositions
/// exhaust all paddings, so the equivalence is exact; for larger antecedents
/// only the forward direction is asserted.
fn run_lemma1(seed: u64, cases: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let spec = random_clone(&mut rng);
        let arity = rng.gen_range(1..=2usize);
        let f = random_function(&mut rng, arity);
        let m = rng.gen_range(1..=2usize);
        let exact = case % 4 != 3;
        let r = random_relation(&mut rng, m, if exact { 2 } else { 4 });
        let exact = exact || r.len() <= 2;
        let s = random_relation(&mut rng, m, 4);

        let generated = generate_invariant(&spec, &r)?;
        let closed_constraint = Constraint::new(generated, s.clone())?;
        let lhs = satisfies(&f, &closed_constraint)?;

        let singleton = FunctionClass::from_members(two(), two(), [f.clone()])?;
        let compositions = compose(&singleton, &clone_levels(&spec, 2)?)?;
        let plain_constraint = Constraint::new(r.clone(), s.clone())?;
        let mut rhs = true;
        for g in compositions.members() {
            if !satisfies(g, &plain_constraint)? {
                rhs = false;
                break;
            }
        }

        let ok = if exact { lhs == rhs } else { !lhs || rhs };
        if !ok {
            bad.push(format!(
                "case {case}: f={f} R={r} S={s} spec={} lhs={lhs} rhs={rhs}",
                spec.generators()
            ));
        }
    }
    Ok((cases, bad))
}

/// Minor satisfaction: a function satisfying every member of a constraint
/// family satisfies every conjunctive minor of it, probed through the tight
/// minor and random relaxations of it.
fn run_minors(seed: u64, cases: u64, budgets: &Budgets) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let arity = rng.gen_range(1..=2usize);
        let f = random_function(&mut rng, arity);
        let singleton = FunctionClass::from_members(two(), two(), [f.clone()])?;
        let family_size = rng.gen_range(1..=3usize);
        let forced = case % 2 == 0;
        let mut family = Vec::new();
        let mut arities = Vec::new();
        for _ in 0..family_size {
            let n = rng.gen_range(1..=2usize);
            let r = random_relation(&mut rng, n, 4);
            let s = if forced {
                // build the consequent over the image so f satisfies it
                image(&singleton, &r)?.union(&random_relation(&mut rng, n, 2))?
            } else {
                random_relation(&mut rng, n, 4)
            };
            family.push(Constraint::new(r, s)?);
            arities.push(n);
        }
        let mut all_satisfied = true;
        for c in &family {
            if !satisfies(&f, c)? {
                all_satisfied = false;
                break;
            }
        }
        if !all_satisfied {
            continue;
        }
        let scheme = random_scheme(&mut rng, &arities, 2, 2);
        let tight = tight_minor_constraint(&family, &scheme, budgets)?;
        if !satisfies(&f, &tight)? {
            bad.push(format!(
                "case {case}: f={f} fails the tight minor {tight} of a satisfied family"
            ));
            continue;
        }
        for _ in 0..3 {
            let relaxed = random_relaxation(&mut rng, &tight);
            if !satisfies(&f, &relaxed)? {
                bad.push(format!(
                    "case {case}: f={f} fails the conjunctive minor {relaxed}"
                ));
            }
        }
    }
    Ok((cases, bad))
}

/// Invariance of tight minors: a tight conjunctive minor of invariants of a
/// clone is again an invariant of that clone.
fn run_szabo(seed: u64, cases: u64, budgets: &Budgets) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let spec = random_clone(&mut rng);
        let family_size = rng.gen_range(1..=3usize);
        let mut family = Vec::new();
        let mut arities = Vec::new();
        for _ in 0..family_size {
            let n = rng.gen_range(1..=2usize);
            family.push(generate_invariant(&spec, &random_relation(&mut rng, n, 4))?);
            arities.push(n);
        }
        let scheme = random_scheme(&mut rng, &arities, 2, 2);
        let tight = tight_minor(&family, &scheme, budgets)?;
        if !is_invariant(&spec, &tight)? {
            bad.push(format!(
                "case {case}: tight minor {tight} escapes the invariants of {}",
                spec.generators()
            ));
        }
    }
    Ok((cases, bad))
}

fn all_functions_up_to_two() -> Vec<FiniteFunction> {
    let mut functions = Vec::new();
    for arity in 1..=2usize {
        let space = 1usize << arity;
        for index in 0..(1usize << space) {
            let table = (0..space).map(|b| (index >> (space - 1 - b)) & 1).collect();
            functions.push(FiniteFunction::new(arity, two(), two(), table).expect("table"));
        }
    }
    functions
}

fn all_relations(arity: usize) -> Vec<Relation> {
    let space = 1usize << arity;
    (0..(1u32 << space))
        .map(|mask| {
            Relation::new(
                arity,
                two(),
                (0..space)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| Point::decode(i, arity, two()).expect("index in range")),
            )
            .expect("relation")
        })
        .collect()
}

/// Exhaustive relaxation battery at desk scale: relaxation monotonicity of
/// satisfaction, the intersecting-consequents equivalence, and the partial
/// order laws of relaxation itself.
fn run_relaxation() -> SuiteOutcome {
    let mut cases = 0u64;
    let mut bad = Vec::new();
    let functions = all_functions_up_to_two();

    for arity in 1..=2usize {
        let relations = all_relations(arity);
        for r0 in &relations {
            for s0 in &relations {
                let c0 = Constraint::new(r0.clone(), s0.clone())?;
                for r in relations.iter().filter(|r| r.is_subset_of(r0)) {
                    for s in relations.iter().filter(|s| s0.is_subset_of(s)) {
                        let c = Constraint::new(r.clone(), s.clone())?;
                        for f in &functions {
                            cases += 1;
                            if satisfies(f, &c0)? && !satisfies(f, &c)? {
                                bad.push(format!(
                                    "satisfaction of {c0} by {f} does not carry to {c}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    // intersecting consequents: satisfaction of the intersection is exactly
    // satisfaction of every member
    let binary = all_relations(2);
    let antecedent = Relation::from_digits(2, two(), "01,10").expect("antecedent");
    for s1 in &binary {
        for s2 in &binary {
            let family = [
                Constraint::new(antecedent.clone(), s1.clone())?,
                Constraint::new(antecedent.clone(), s2.clone())?,
            ];
            let intersected = intersect_consequents(&family)?;
            for f in &functions {
                cases += 1;
                let each = satisfies(f, &family[0])? && satisfies(f, &family[1])?;
                if satisfies(f, &intersected)? != each {
                    bad.push(format!(
                        "intersection mismatch for {f} on {} and {}",
                        family[0], family[1]
                    ));
                }
            }
        }
    }

    // relaxation is a partial order on constraints of one arity
    let unary: Vec<Constraint> = {
        let relations = all_relations(1);
        let mut all = Vec::new();
        for r in &relations {
            for s in &relations {
                all.push(Constraint::new(r.clone(), s.clone())?);
            }
        }
        all
    };
    for x in &unary {
        cases += 1;
        if !is_relaxation(x, x)? {
            bad.push(format!("{x} does not relax itself"));
        }
        for y in &unary {
            cases += 1;
            if is_relaxation(x, y)? && is_relaxation(y, x)? && x != y {
                bad.push(format!("antisymmetry broken by {x} and {y}"));
            }
            for z in &unary {
                cases += 1;
                if is_relaxation(x, y)? && is_relaxation(y, z)? && !is_relaxation(x, z)? {
                    bad.push(format!("transitivity broken by {x}, {y}, {z}"));
                }
            }
        }
    }
    let binary_constraints: Vec<Constraint> = {
        let mut all = Vec::new();
        for r in &binary {
            for s in &binary {
                all.push(Constraint::new(r.clone(), s.clone())?);
            }
        }
        all
    };
    for x in &binary_constraints {
        for y in &binary_constraints {
            cases += 1;
            if is_relaxation(x, y)? && is_relaxation(y, x)? && x != y {
                bad.push(format!("antisymmetry broken by {x} and {y}"));
            }
        }
    }
    Ok((cases, bad))
}

/// The exact round trip at the two-element, cap-2 regime over projections:
/// the constraint-side closure fixes each curated stability-closed class, and
/// the canonical construction separates every outside function.
fn run_theorem1(budgets: &Budgets) -> SuiteOutcome {
    let caps = ArityCaps::new(2, 4)?;
    let p = CloneSpec::projection_clone(two());
    let mut cases = 0u64;
    let mut bad = Vec::new();

    let all_functions = FunctionClass::from_members(two(), two(), all_functions_up_to_two())?;
    let meet = FiniteFunction::from_digits(2, two(), two(), "0001").expect("meet");
    let triple_sum = FiniteFunction::from_digits(3, two(), two(), "01101001").expect("sum");
    let curated: Vec<(&str, FunctionClass)> = vec![
        (
            "projections",
            projections(two(), 1)?.union(&projections(two(), 2)?)?,
        ),
        (
            "meet closure",
            stability_closure(
                &FunctionClass::from_members(two(), two(), [meet])?,
                &p,
                &p,
                &caps,
            )?,
        ),
        (
            "triple-sum levels",
            clone_levels(
                &CloneSpec::new(
                    two(),
                    FunctionClass::from_members(two(), two(), [triple_sum])?,
                )?,
                2,
            )?,
        ),
        ("all functions", all_functions.clone()),
    ];

    for (name, class) in &curated {
        cases += 1;
        let report = closure_of_class(class, &p, &p, &caps, budgets)?;
        if !report.exact_within_caps {
            bad.push(format!("{name}: caps unexpectedly inexact"));
        }
        if &report.closed != class {
            bad.push(format!(
                "{name}: constraint-side closure differs: {}",
                report.closed
            ));
            continue;
        }
        for g in all_functions.members() {
            if class.contains(g) {
                continue;
            }
            cases += 1;
            match separating_constraint(class, g, &p, &p, &caps, budgets)? {
                Separation::Separated { constraint, .. } => {
                    if !class_satisfies(class, &constraint)? {
                        bad.push(format!("{name}: separator {constraint} rejected by the class"));
                    }
                    if satisfies(g, &constraint)? {
                        bad.push(format!("{name}: {g} satisfies its own separator {constraint}"));
                    }
                    if !clonecraft_core::is_invariant_constraint(&constraint, &p, &p)? {
                        bad.push(format!("{name}: separator {constraint} is not invariant"));
                    }
                }
                Separation::NotSeparable { .. } => {
                    bad.push(format!("{name}: {g} was not separated"));
                }
            }
        }
    }
    Ok((cases, bad))
}

/// Closure laws on the constraint side at the cap-2 regime over projections:
/// idempotence, containment of the input and of the equality and empty
/// constraints, and the sampled relaxation-closure equivalence.
fn run_theorem3(seed: u64, cases: u64, budgets: &Budgets) -> SuiteOutcome {
    let caps = ArityCaps::new(2, 2)?;
    let p = CloneSpec::projection_clone(two());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0u64;
    let mut bad = Vec::new();
    for case in 0..cases {
        let mut t0 = ConstraintSet::new(two(), two());
        for _ in 0..rng.gen_range(0..=3usize) {
            let m = rng.gen_range(1..=2usize);
            t0.insert(Constraint::new(
                random_relation(&mut rng, m, 4),
                random_relation(&mut rng, m, 4),
            )?)?;
        }
        let closed = closure_of_constraints(&t0, &p, &p, &caps, budgets)?.closed;

        checks += 1;
        if !t0.is_subset_of(&closed) {
            bad.push(format!("case {case}: closure lost part of its input"));
        }
        checks += 1;
        if !closed.contains(&make_equality(two(), two())) {
            bad.push(format!("case {case}: closure misses the equality constraint"));
        }
        checks += 1;
        if !closed.contains(&make_empty(two(), two(), 1)?)
            || !closed.contains(&make_empty(two(), two(), 2)?)
        {
            bad.push(format!("case {case}: closure misses an empty constraint"));
        }
        checks += 1;
        let again = closure_of_constraints(&closed, &p, &p, &caps, budgets)?.closed;
        if again != closed {
            bad.push(format!("case {case}: closure is not idempotent"));
        }
        checks += 1;
        if !verify_lemma4_equivalence(&closed, &p, &p, &caps, budgets, seed ^ case, 40)? {
            bad.push(format!(
                "case {case}: closed set fails the relaxation-closure equivalence"
            ));
        }
    }
    Ok((checks, bad))
}

/// The affine specialization: with both clones the one generated by the
/// Boolean triple sum, the constraint-side closure fixes a class exactly when
/// the class is stable under composition with the triple-sum levels on both
/// sides.
fn run_l01(seed: u64, cases: u64, budgets: &Budgets) -> SuiteOutcome {
    let caps = ArityCaps::new(3, 8)?;
    let triple_sum = FiniteFunction::from_digits(3, two(), two(), "01101001").expect("sum");
    let l01 = CloneSpec::new(
        two(),
        FunctionClass::from_members(two(), two(), [triple_sum])?,
    )?;
    let levels = clone_levels(&l01, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let raw = random_class(&mut rng, 2, 1..=3);
        let class = if case % 2 == 1 {
            stability_closure(&raw, &l01, &l01, &caps)?
        } else {
            raw
        };
        let fixed = closure_of_class(&class, &l01, &l01, &caps, budgets)?.closed == class;
        let stable =
            is_stable_right(&class, &levels, &caps)? && is_stable_left(&class, &levels, &caps)?;
        if fixed != stable {
            bad.push(format!(
                "case {case}: closure fixed={fixed} but stability={stable} for {class}"
            ));
        }
    }
    Ok((cases, bad))
}
