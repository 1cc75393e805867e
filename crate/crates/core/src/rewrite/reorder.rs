//! Cost-driven reordering by commutativity, associativity and
//! distributivity.
//!
//! Plans with at most [`ReorderLimits::exhaustive_leaves`] leaves are
//! searched breadth-first over every reachable rewrite (deduplicated by
//! fingerprint, bounded by a plan budget and a node-count cap); larger plans
//! take greedy improving steps. The input of an aggregation is never
//! rewritten, because grouped reductions observe row multiplicities and row
//! keys that the relational rewrites only preserve up to `~`.

use std::collections::VecDeque;
use std::sync::Arc;

use rustc_hash::FxHashSet;

use super::cost::estimate_cost;
use super::Plan;
use crate::error::Result;

#[derive(Clone, Copy, Debug)]
pub struct ReorderLimits {
    pub exhaustive_leaves: usize,
    /// Maximum number of distinct plans visited, counting those rejected
    /// by the growth cap.
    pub budget: usize,
    /// Rewritten plans may have at most this multiple of the original node
    /// count.
    pub growth: usize,
}

impl Default for ReorderLimits {
    fn default() -> Self {
        ReorderLimits { exhaustive_leaves: 8, budget: 20_000, growth: 2 }
    }
}

pub fn reorder(p: &Plan) -> Result<Plan> {
    reorder_with(p, ReorderLimits::default())
}

pub fn reorder_with(p: &Plan, limits: ReorderLimits) -> Result<Plan> {
    let cap = limits.growth * p.node_count().max(1);
    let mut best = (estimate_cost(p)?, p.clone());
    if p.leaf_count() > limits.exhaustive_leaves {
        let mut current = best.clone();
        for _ in 0..limits.budget {
            let mut step: Option<(f64, Plan)> = None;
            for q in rewrites(&current.1) {
                if q.node_count() > cap {
                    continue;
                }
                let c = estimate_cost(&q)?;
                if c < step.as_ref().map_or(current.0, |s| s.0) {
                    step = Some((c, q));
                }
            }
            match step {
                Some(next) => current = next,
                None => break,
            }
        }
        return Ok(current.1);
    }

    let mut seen: FxHashSet<Plan> = FxHashSet::default();
    seen.insert(p.clone());
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(q) = queue.pop_front() {
        for r in rewrites(&q) {
            if seen.len() >= limits.budget {
                queue.clear();
                break;
            }
            if !seen.insert(r.clone()) || r.node_count() > cap {
                continue;
            }
            let c = estimate_cost(&r)?;
            if c < best.0 {
                best = (c, r.clone());
            }
            queue.push_back(r);
        }
    }
    Ok(best.1)
}

/// Every plan one rule application away from `p`.
pub(crate) fn rewrites(p: &Plan) -> Vec<Plan> {
    let mut out = root_rewrites(p);
    if matches!(p, Plan::Aggregate { .. }) {
        return out;
    }
    for (i, child) in p.children().enumerate() {
        for alt in rewrites(child) {
            let mut q = p.clone();
            *q.children_mut()[i] = Arc::new(alt);
            out.push(q);
        }
    }
    out
}

fn same(a: &Plan, b: &Plan) -> bool {
    a == b
}

fn root_rewrites(p: &Plan) -> Vec<Plan> {
    use Plan::*;
    let mut out = Vec::new();
    // Commutativity.
    match p {
        EwAdd(x, y) => out.push(EwAdd(y.clone(), x.clone())),
        EwMult(x, y) => out.push(EwMult(y.clone(), x.clone())),
        Union(x, y) => out.push(Union(y.clone(), x.clone())),
        Intersection(x, y) => out.push(Intersection(y.clone(), x.clone())),
        ThetaJoin { left, right, cols_left, cols_right, theta, pairs: true } => {
            if let (Some(l), Some(r)) = (left.col_bound(), right.col_bound()) {
                if l.is_disjoint(&r) {
                    out.push(ThetaJoin {
                        left: right.clone(),
                        right: left.clone(),
                        cols_left: cols_right.clone(),
                        cols_right: cols_left.clone(),
                        theta: theta.swapped(),
                        pairs: true,
                    });
                }
            }
        }
        _ => {}
    }
    // Associativity, both directions.
    macro_rules! assoc {
        ($op:ident) => {
            if let $op(x, y) = p {
                if let $op(a, b) = &**x {
                    out.push($op(a.clone(), Arc::new($op(b.clone(), y.clone()))));
                }
                if let $op(b, c) = &**y {
                    out.push($op(Arc::new($op(x.clone(), b.clone())), c.clone()));
                }
            }
        };
    }
    assoc!(EwAdd);
    assoc!(EwMult);
    assoc!(ArrayMult);
    assoc!(Union);
    assoc!(Intersection);
    // Distributivity: expand and factor, for (product, sum) operator pairs.
    macro_rules! distribute {
        ($mul:ident, $add:ident, $both_sides:expr) => {
            if let $mul(x, y) = p {
                if let $add(b, c) = &**y {
                    out.push($add(Arc::new($mul(x.clone(), b.clone())), Arc::new($mul(x.clone(), c.clone()))));
                }
                if $both_sides {
                    if let $add(b, c) = &**x {
                        out.push($add(Arc::new($mul(b.clone(), y.clone())), Arc::new($mul(c.clone(), y.clone()))));
                    }
                }
            }
            if let $add(x, y) = p {
                if let ($mul(a1, b), $mul(a2, c)) = (&**x, &**y) {
                    if same(a1, a2) {
                        out.push($mul(a1.clone(), Arc::new($add(b.clone(), c.clone()))));
                    }
                    if $both_sides && same(b, c) {
                        out.push($mul(Arc::new($add(a1.clone(), a2.clone())), b.clone()));
                    }
                }
            }
        };
    }
    distribute!(ArrayMult, EwAdd, true);
    distribute!(Union, Intersection, false);
    distribute!(Intersection, Union, false);
    out
}
