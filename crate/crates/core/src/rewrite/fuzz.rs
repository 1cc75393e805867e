//! Seeded random plans for exercising the rewriters.
//!
//! Array plans combine integer-valued random arrays over keys `1..=16` with
//! the array-level operators; relational plans combine small random
//! relations with the relational operators. Both sprinkle in `𝟘`, `𝕀`,
//! constant predicates and self-differences so that simplification rules
//! actually fire.

use super::Plan;
use crate::error::Result;
use crate::io::{random_array_in, random_relation, CellKind, RelationSpec, Rng, ValueDist};
use crate::relational::{Aggregator, CompareOp, RowFunction, RowPairPredicate, RowPredicate};
use crate::semiring::Semiring;
use crate::value::{Key, Value};

pub const ARRAY_KEYS: i64 = 16;

struct Gen {
    rng: Rng,
    leaves: usize,
    /// Leaf occurrences still available for duplicated subtrees.
    slack: usize,
}

impl Gen {
    fn coin(&mut self, num: u64, den: u64) -> bool {
        self.rng.below(den) < num
    }

    fn name(&mut self) -> String {
        self.leaves += 1;
        format!("L{}", self.leaves - 1)
    }
}

/// Random array-level plan with at most `max_leaves` data leaves (≥ 1).
pub fn random_array_plan(seed: u64, max_leaves: usize, s: &Semiring) -> Result<Plan> {
    let mut g = Gen { rng: Rng::new(seed), leaves: 0, slack: 0 };
    let budget = 1 + g.rng.below(max_leaves.max(1) as u64) as usize;
    array_node(&mut g, budget, s)
}

fn array_leaf(g: &mut Gen, s: &Semiring) -> Result<Plan> {
    let n = 4 + g.rng.below(ARRAY_KEYS as u64 - 3) as usize;
    let d = 1.0 + 3.0 * g.rng.unit();
    let seed = g.rng.next_u64();
    let a = random_array_in(n, d, seed, &ValueDist::UniformInt { lo: -5, hi: 5 }, s)?;
    let name = g.name();
    Ok(Plan::leaf(name, a))
}

fn array_node(g: &mut Gen, leaves: usize, s: &Semiring) -> Result<Plan> {
    if leaves <= 1 {
        let base = array_leaf(g, s)?;
        return Ok(match g.rng.below(10) {
            0 => Plan::transpose(base),
            1 => Plan::ew_add(base, Plan::Empty),
            2 => Plan::array_mult(base, Plan::Identity((1..=ARRAY_KEYS).map(Key::Int).collect())),
            _ => base,
        });
    }
    let left = 1 + g.rng.below(leaves as u64 - 1) as usize;
    let (x, y) = (array_node(g, left, s)?, array_node(g, leaves - left, s)?);
    Ok(match g.rng.below(8) {
        0 | 1 => Plan::ew_add(x, y),
        2 => Plan::ew_mult(x, y),
        3..=5 => Plan::array_mult(x, y),
        6 => Plan::transpose(Plan::ew_add(x, y)),
        _ => Plan::ew_add(Plan::array_mult(x, y), Plan::ew_mult(Plan::Empty, Plan::Empty)),
    })
}

fn cols(n: usize) -> Vec<Key> {
    (0..n).map(|c| Key::Str(format!("c{c}"))).collect()
}

const REL_COLS: usize = 3;

/// Random relational plan with at most `max_leaves` leaf occurrences (≥ 1).
/// Every leaf has the string columns `c0..c2`.
pub fn random_relational_plan(seed: u64, max_leaves: usize) -> Result<Plan> {
    let max_leaves = max_leaves.max(1);
    let mut g = Gen { rng: Rng::new(seed), leaves: 0, slack: 0 };
    let budget = 1 + g.rng.below(max_leaves as u64) as usize;
    g.slack = max_leaves - budget;
    rel_node(&mut g, budget)
}

fn rel_leaf(g: &mut Gen) -> Result<Plan> {
    let spec = RelationSpec {
        rows: 2 + g.rng.below(14) as usize,
        cols: REL_COLS,
        kind: if g.coin(1, 4) { CellKind::Int } else { CellKind::Str },
        alphabet: 2 + g.rng.below(2) as usize,
        holes: if g.coin(1, 2) { 0.0 } else { 0.15 },
        ..RelationSpec::default()
    };
    let seed = g.rng.next_u64();
    let a = random_relation(&spec, seed)?;
    let name = g.name();
    Ok(Plan::leaf(name, a))
}

fn rel_unary(g: &mut Gen, x: Plan, at_leaf: bool) -> Plan {
    let all = cols(REL_COLS);
    match g.rng.below(12) {
        0 => Plan::project(x, all),
        1 => Plan::project(x, vec![Key::from("c0"), Key::from("c2")]),
        2 => Plan::rename(x, all.clone(), all),
        3 => Plan::rename(x, all, vec![Key::from("c1"), Key::from("c2"), Key::from("c0")]),
        4 => Plan::select(x, vec![Key::from("c0")], RowPredicate::constant(true)),
        5 => Plan::select(x, vec![Key::from("c0")], RowPredicate::constant(false)),
        6 => Plan::select(x, vec![Key::from("c1")], RowPredicate::compare(CompareOp::Neq, Value::str("a"))),
        7 => Plan::union(x, Plan::Empty),
        8 if at_leaf && g.slack > 0 => {
            g.slack -= 1;
            Plan::difference(x.clone(), x)
        }
        _ => x,
    }
}

fn rel_leaf_op(g: &mut Gen) -> Result<Plan> {
    let x = rel_leaf(g)?;
    let c = |s: &str| Key::from(s);
    Ok(match g.rng.below(8) {
        0 => Plan::extended_projection(x, vec![c("c1")], c("c1"), RowFunction::pass_through()),
        1 => Plan::extended_projection(x, vec![c("c0"), c("c1")], c("c0"), RowFunction::concat("/")),
        2 => Plan::aggregate(x, c("c0"), c("c1"), Aggregator::count()),
        3 => Plan::aggregate(x, c("c0"), c("c2"), Aggregator::first()),
        _ => x,
    })
}

fn rel_node(g: &mut Gen, leaves: usize) -> Result<Plan> {
    if leaves <= 1 {
        let x = rel_leaf_op(g)?;
        return Ok(rel_unary(g, x, true));
    }
    let left = 1 + g.rng.below(leaves as u64 - 1) as usize;
    let (x, y) = (rel_node(g, left)?, rel_node(g, leaves - left)?);
    let node = match g.rng.below(9) {
        0 | 1 => Plan::union(x, y),
        2 | 3 => Plan::intersection(x, y),
        4 => Plan::difference(x, y),
        5 => Plan::intersection(x, Plan::Empty),
        6 => {
            let right = Plan::rename(y, cols(REL_COLS), (0..REL_COLS).map(|c| Key::Str(format!("d{c}"))).collect());
            let joined = Plan::theta_join(
                x,
                right,
                vec![Key::from("c0")],
                vec![Key::from("d0")],
                RowPairPredicate::compare(CompareOp::Eq),
                true,
            );
            Plan::project(joined, cols(REL_COLS))
        }
        7 => Plan::theta_join(
            x,
            y,
            vec![Key::from("c0")],
            vec![Key::from("c0")],
            RowPairPredicate::compare(CompareOp::Lt),
            g.coin(1, 2),
        ),
        _ => Plan::union(Plan::Empty, Plan::intersection(x, y)),
    };
    Ok(rel_unary(g, node, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_deterministic_and_evaluate() {
        let s = Semiring::plus_times();
        for seed in 0..20 {
            let p = random_array_plan(seed, 6, &s).unwrap();
            assert_eq!(p.fingerprint(), random_array_plan(seed, 6, &s).unwrap().fingerprint());
            assert!(p.leaf_count() <= 6);
            p.evaluate(&s).unwrap();
            let r = random_relational_plan(seed, 6).unwrap();
            assert!(r.leaf_count() <= 6);
            r.evaluate(&s).unwrap();
        }
    }
}
