//! Seeded end-to-end checks against the oracles. Each returns `Err` with a
//! description of the first mismatch.

#![allow(dead_code)]

use assocarray::io::{random_array_in, random_relation, relation_cell, CellKind, RelationSpec, Rng, ValueDist};
use assocarray::relational::{self as rel, Aggregator, CompareOp, RowFunction, RowPairPredicate, RowPredicate};
use assocarray::rewrite::fuzz::{random_array_plan, random_relational_plan};
use assocarray::rewrite::{check_property_with, estimate_cost, reorder, simplify_traced, Carrier};
use assocarray::{AssociativeArray, Key, Plan, Relation, Semiring};

use crate::oracle::{self, Agg, Op};

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn tag(what: &str, seed: u64, r: Check) -> Check {
    r.map_err(|e| format!("{what}, seed {seed}: {e}"))
}

fn lib<T>(r: assocarray::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub const LAWS: [&str; 12] = [
    "ew-add-commute",
    "ew-mult-commute",
    "ew-add-assoc",
    "ew-mult-assoc",
    "mult-assoc",
    "mult-distribute",
    "ew-mult-distribute",
    "add-identity",
    "mult-identity",
    "array-mult-identity",
    "mult-annihilator",
    "transpose-product",
];

/// Every array law under plus-times and max-plus, integer and real carriers.
pub fn law_suite(trials: usize, seed: u64) -> Check {
    for s in [Semiring::plus_times(), Semiring::max_plus()] {
        for carrier in [Carrier::Int, Carrier::Real] {
            for law in LAWS {
                let r = lib(check_property_with(law, &s, trials, seed, carrier))?;
                ensure(r.passed(), || format!("{law} under {} ({carrier:?}): {:?}", s.name(), r.failures.first()))?;
            }
        }
    }
    Ok(())
}

fn dense_pair(seed: u64, s: &Semiring) -> Result<(AssociativeArray, AssociativeArray), String> {
    let mut rng = Rng::new(seed);
    let dist = ValueDist::UniformInt { lo: -6, hi: 6 };
    let (d1, d2) = (1.0 + 6.0 * rng.unit(), 1.0 + 6.0 * rng.unit());
    let a = lib(random_array_in(oracle::N, d1, rng.next_u64(), &dist, s))?;
    let b = lib(random_array_in(oracle::N, d2, rng.next_u64(), &dist, s))?;
    Ok((a, b))
}

/// Kernels over keys 1..=16 against dense 16×16 loops.
pub fn dense_oracle(seeds: u64) -> Check {
    let s = Semiring::plus_times();
    for seed in 0..seeds {
        let (a, b) = dense_pair(seed, &s)?;
        let (da, db) = (oracle::to_dense(&a), oracle::to_dense(&b));
        let c = oracle::to_dense(&lib(a.array_mult(&b, &s))?);
        ensure(c == oracle::dense_mult(&da, &db), || format!("array_mult, seed {seed}"))?;
        let c = oracle::to_dense(&lib(a.ew_add(&b, &s))?);
        ensure(c == oracle::dense_add(&da, &db), || format!("ew_add, seed {seed}"))?;
        let c = oracle::to_dense(&lib(a.ew_mult(&b, &s))?);
        ensure(c == oracle::dense_hadamard(&da, &db), || format!("ew_mult, seed {seed}"))?;
    }
    let s = Semiring::max_plus();
    for seed in 0..seeds {
        let (a, b) = dense_pair(seed, &s)?;
        let c = oracle::to_tropical(&lib(a.array_mult(&b, &s))?);
        let want = oracle::tropical_mult(&oracle::to_tropical(&a), &oracle::to_tropical(&b));
        ensure(c == want, || format!("max-plus array_mult, seed {seed}"))?;
    }
    Ok(())
}

pub struct Case {
    pub a: Relation,
    pub b: Relation,
    pub kind: CellKind,
    pub cols: Vec<Key>,
    pub rng: Rng,
}

/// Two relations with the same columns: up to 64 rows, 1 to 6 columns,
/// small alphabets and optional holes.
pub fn case(seed: u64) -> Case {
    let mut rng = Rng::new(seed);
    let kind = if rng.below(2) == 0 { CellKind::Str } else { CellKind::Int };
    let ncols = 1 + rng.below(6) as usize;
    let alphabet = 2 + rng.below(3) as usize;
    let holes = if rng.below(3) == 0 { 0.0 } else { 0.2 };
    let spec = |rows| RelationSpec { rows, cols: ncols, kind, alphabet, holes, ..RelationSpec::default() };
    let a = random_relation(&spec(1 + rng.below(64) as usize), rng.next_u64()).unwrap();
    let b = random_relation(&spec(1 + rng.below(64) as usize), rng.next_u64()).unwrap();
    let cols = (0..ncols).map(|c| Key::Str(format!("c{c}"))).collect();
    Case { a, b, kind, cols, rng }
}

fn pick_op(rng: &mut Rng) -> (Op, CompareOp) {
    match rng.below(4) {
        0 => (Op::Eq, CompareOp::Eq),
        1 => (Op::Neq, CompareOp::Neq),
        2 => (Op::Lt, CompareOp::Lt),
        _ => (Op::Gt, CompareOp::Gt),
    }
}

fn pick<'a>(rng: &mut Rng, cols: &'a [Key]) -> &'a Key {
    &cols[rng.below(cols.len() as u64) as usize]
}

pub fn set_operations(seed: u64) -> Check {
    let Case { a, b, .. } = case(seed);
    let (ta, tb) = (oracle::tuples(&a), oracle::tuples(&b));
    tag("union", seed, oracle::same_bag(&lib(rel::union(&a, &b))?, &oracle::union(&ta, &tb)))?;
    tag("intersection", seed, oracle::same_bag(&lib(rel::intersection(&a, &b))?, &oracle::intersection(&ta, &tb)))?;
    tag("difference", seed, oracle::same_bag(&lib(rel::difference(&a, &b))?, &oracle::difference(&ta, &tb)))
}

pub fn project_rename_select(seed: u64) -> Check {
    let Case { a, kind, cols, mut rng, .. } = case(seed);
    let ta = oracle::tuples(&a);

    let keep: Vec<Key> = cols.iter().filter(|_| rng.below(2) == 0).cloned().collect();
    tag("project", seed, oracle::same_bag(&lib(rel::project(&a, &keep))?, &oracle::project(&ta, &keep)))?;

    let shift = rng.below(cols.len() as u64) as usize;
    let mut to: Vec<Key> = cols.iter().cycle().skip(shift).take(cols.len()).cloned().collect();
    if rng.below(2) == 0 {
        to = (0..cols.len()).map(|c| Key::Str(format!("n{c}"))).collect();
    }
    tag("rename", seed, oracle::same_bag(&lib(rel::rename(&a, &cols, &to))?, &oracle::rename(&ta, &cols, &to)))?;

    let col = pick(&mut rng, &cols).clone();
    let (o, c) = pick_op(&mut rng);
    let lit = relation_cell(kind, rng.below(3) as usize);
    let got = lib(rel::select(&a, std::slice::from_ref(&col), &RowPredicate::compare(c, lit.clone())))?;
    tag("select", seed, oracle::same_bag(&got, &oracle::select(&ta, &col, o, &lit)))
}

/// Pair-expanded join against nested loops; the literal join against the
/// nested-loop result collapsed per left row.
pub fn joins(seed: u64) -> Check {
    let Case { a, b, cols, mut rng, .. } = case(seed);
    let (ta, tb) = (oracle::tuples(&a), oracle::tuples(&b));
    let acol = pick(&mut rng, &cols).clone();
    let bcol = pick(&mut rng, &cols).clone();
    let (o, c) = pick_op(&mut rng);
    let theta = RowPairPredicate::compare(c);
    let (ja, jb) = (std::slice::from_ref(&acol), std::slice::from_ref(&bcol));

    let pairs = lib(rel::theta_join_pairs(&a, &b, ja, jb, &theta))?;
    tag("pair join", seed, oracle::same_bag(&pairs, &oracle::join_pairs(&ta, &tb, &acol, o, &bcol)))?;
    let literal = lib(rel::theta_join(&a, &b, ja, jb, &theta))?;
    tag("literal join", seed, oracle::same_bag(&literal, &oracle::join_collapsed(&ta, &tb, &acol, o, &bcol)))
}

pub fn extend_and_aggregate(seed: u64) -> Check {
    let Case { a, kind, cols, mut rng, .. } = case(seed);
    let ta = oracle::tuples(&a);
    let out = Key::from("out");
    let sel: Vec<Key> = cols.iter().filter(|_| rng.below(2) == 0).cloned().collect();
    let (f, want) = match kind {
        CellKind::Str => (RowFunction::concat("/"), oracle::extend_concat(&ta, &sel, &out)),
        CellKind::Int => (RowFunction::sum(), oracle::extend_sum(&ta, &sel, &out)),
    };
    tag("extended projection", seed, oracle::same_bag(&lib(rel::extended_projection(&a, &sel, &out, &f))?, &want))?;

    if cols.len() < 2 {
        return Ok(());
    }
    let keyed = oracle::rows_of(&a);
    let g = rng.below(cols.len() as u64) as usize;
    let v = (g + 1 + rng.below(cols.len() as u64 - 1) as usize) % cols.len();
    for (agg, f) in [
        (Agg::Count, Aggregator::count()),
        (Agg::Min, Aggregator::min()),
        (Agg::Max, Aggregator::max()),
        (Agg::First, Aggregator::first()),
    ] {
        let got = lib(rel::aggregate(&a, &cols[g], &cols[v], &f))?;
        tag(f.name(), seed, oracle::same_bag(&got, &oracle::aggregate(&keyed, &cols[g], &cols[v], agg)))?;
    }
    Ok(())
}

/// Every relational operator against the tuple-list oracle.
pub fn relational_oracle(seeds: u64) -> Check {
    for seed in 0..seeds {
        set_operations(seed)?;
        project_rename_select(seed)?;
        joins(seed)?;
        extend_and_aggregate(seed)?;
    }
    Ok(())
}

/// `rename(A ∪ B) ~ rename(A) ∪ rename(B)`, likewise for `∩`.
pub fn rename_distributes(seeds: u64) -> Check {
    for seed in 0..seeds {
        let Case { a, b, cols, .. } = case(seed);
        let to: Vec<Key> = (0..cols.len()).map(|c| Key::Str(format!("n{c}"))).collect();
        let r = |x: &Relation| lib(rel::rename(x, &cols, &to));

        let lhs = r(&lib(rel::union(&a, &b))?)?;
        let rhs = lib(rel::union(&r(&a)?, &r(&b)?))?;
        ensure(rel::equivalent(&lhs, &rhs, true), || format!("union, seed {seed}"))?;
        tag("union oracle", seed, oracle::same_bag(&lhs, &oracle::tuples(&rhs)))?;

        let lhs = r(&lib(rel::intersection(&a, &b))?)?;
        let rhs = lib(rel::intersection(&r(&a)?, &r(&b)?))?;
        ensure(rel::equivalent(&lhs, &rhs, false), || format!("intersection, seed {seed}"))?;
        tag("intersection oracle", seed, oracle::same_set(&lhs, &oracle::tuples(&rhs)))?;
    }
    Ok(())
}

/// Alternating array and relational plans with at most 8 leaves.
pub fn fuzzed_plans(count: u64) -> Vec<(Plan, bool)> {
    let s = Semiring::plus_times();
    (0..count)
        .map(|seed| {
            if seed % 2 == 0 {
                (random_array_plan(seed, 8, &s).unwrap(), true)
            } else {
                (random_relational_plan(seed, 8).unwrap(), false)
            }
        })
        .collect()
}

/// Equal for array plans, strictly `~` for relational ones.
fn same_result(x: &Plan, y: &Plan, array: bool) -> Result<bool, String> {
    let s = Semiring::plus_times();
    let (a, b) = (lib(x.evaluate(&s))?, lib(y.evaluate(&s))?);
    Ok(if array { a.equal_exact(&b) } else { rel::equivalent(&a, &b, true) })
}

/// Every simplify step evaluates the same and shrinks; returns the number
/// of rule applications.
pub fn simplify_soundness(count: u64) -> Result<usize, String> {
    let mut fired = 0;
    for (i, (p, array)) in fuzzed_plans(count).into_iter().enumerate() {
        let (q, steps) = simplify_traced(&p);
        for st in &steps {
            ensure(st.size_after < st.size_before, || format!("plan {i}: {} did not shrink", st.rule))?;
            ensure(st.after.node_count() <= st.before.node_count(), || format!("plan {i}: {} grew", st.rule))?;
            ensure(same_result(&st.before, &st.after, array)?, || format!("plan {i}: {} changed {}", st.rule, st.before))?;
        }
        ensure(same_result(&p, &q, array)?, || format!("plan {i}: {p} vs {q}"))?;
        fired += steps.len();
    }
    Ok(fired)
}

/// Reordering evaluates the same and never raises the estimate; returns
/// the number of plans changed.
pub fn reorder_soundness(count: u64) -> Result<usize, String> {
    let mut changed = 0;
    for (i, (p, array)) in fuzzed_plans(count).into_iter().enumerate() {
        ensure(p.leaf_count() <= 8, || format!("plan {i} has {} leaves", p.leaf_count()))?;
        let q = lib(reorder(&p))?;
        let (cp, cq) = (lib(estimate_cost(&p))?, lib(estimate_cost(&q))?);
        ensure(cq <= cp, || format!("plan {i}: cost {cp} -> {cq}"))?;
        ensure(same_result(&p, &q, array)?, || format!("plan {i}: {p} vs {q}"))?;
        changed += (q != p) as usize;
    }
    Ok(changed)
}
