//! Identity, annihilator and inverse rules, applied bottom-up to a fixpoint.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::Plan;
use crate::value::Key;

/// One rule application.
#[derive(Clone, Debug)]
pub struct Step {
    pub rule: &'static str,
    /// The subtree the rule matched, and its replacement.
    pub before: Plan,
    pub after: Plan,
    pub size_before: usize,
    pub size_after: usize,
}

pub fn simplify(p: &Plan) -> Plan {
    simplify_traced(p).0
}

/// [`simplify`] plus the list of rules applied, innermost first.
pub fn simplify_traced(p: &Plan) -> (Plan, Vec<Step>) {
    let mut steps = Vec::new();
    let out = walk(p.clone(), &mut steps);
    (out, steps)
}

fn walk(mut p: Plan, steps: &mut Vec<Step>) -> Plan {
    for child in p.children_mut() {
        let c = std::mem::replace(child, Arc::new(Plan::Empty));
        *child = Arc::new(walk(Arc::unwrap_or_clone(c), steps));
    }
    loop {
        match rule(&p) {
            Some((name, next)) => {
                steps.push(Step {
                    rule: name,
                    size_before: p.size(),
                    size_after: next.size(),
                    before: p,
                    after: next.clone(),
                });
                p = next;
            }
            None => return p,
        }
    }
}

fn covers(bound: Option<BTreeSet<Key>>, keys: &[Key]) -> bool {
    bound.is_some_and(|b| b.iter().all(|k| keys.contains(k)))
}

/// The first rule matching at the root of `p`, with the rewritten node.
/// Children are assumed already simplified.
fn rule(p: &Plan) -> Option<(&'static str, Plan)> {
    use Plan::*;
    let empty = |x: &Plan| matches!(x, Empty);
    Some(match p {
        Union(x, y) if empty(y) => ("union-identity", (**x).clone()),
        Union(x, y) if empty(x) => ("union-identity", (**y).clone()),
        Intersection(x, y) if empty(x) || empty(y) => ("intersection-annihilator", Empty),
        Difference(x, y) if empty(y) => ("difference-identity", (**x).clone()),
        Difference(x, _) if empty(x) => ("difference-annihilator", Empty),
        Difference(x, y) if x.fingerprint() == y.fingerprint() => ("difference-inverse", Empty),
        Select { pred, input, .. } if pred.constant_value() == Some(true) => ("select-identity", (**input).clone()),
        Select { pred, .. } if pred.constant_value() == Some(false) => ("select-annihilator", Empty),
        Project { input, cols } if covers(input.col_bound(), cols) => ("project-identity", (**input).clone()),
        Rename { input, from, to } if from == to && covers(input.col_bound(), from) => {
            ("rename-identity", (**input).clone())
        }
        ThetaJoin { left, right, .. } if empty(left) || empty(right) => ("theta-join-annihilator", Empty),
        ExtendedProjection { input, cols, out, f } if cols.len() == 1 && cols[0] == *out && f.is_pass_through() => {
            ("extended-projection-identity", Plan::project((**input).clone(), cols.clone()))
        }
        Aggregate { input, group, value, f } if Plan::aggregate_is_projection(input, group, value, f) => {
            ("aggregate-identity", Plan::project((**input).clone(), vec![group.clone(), value.clone()]))
        }
        EwAdd(x, y) if empty(y) => ("ew-add-identity", (**x).clone()),
        EwAdd(x, y) if empty(x) => ("ew-add-identity", (**y).clone()),
        EwMult(x, y) if empty(x) || empty(y) => ("ew-mult-annihilator", Empty),
        ArrayMult(x, y) if empty(x) || empty(y) => ("array-mult-annihilator", Empty),
        ArrayMult(x, y) if matches!(&**y, Identity(k) if covers(x.col_bound(), k)) => {
            ("array-mult-identity", (**x).clone())
        }
        ArrayMult(x, y) if matches!(&**x, Identity(k) if covers(y.row_bound(), k)) => {
            ("array-mult-identity", (**y).clone())
        }
        Transpose(x) if empty(x) => ("transpose-empty", Empty),
        Transpose(x) if matches!(&**x, Transpose(_)) => {
            let Transpose(inner) = &**x else { unreachable!() };
            ("transpose-involution", (**inner).clone())
        }
        Project { input, .. }
        | Rename { input, .. }
        | Select { input, .. }
        | ExtendedProjection { input, .. }
        | Aggregate { input, .. }
            if empty(input) =>
        {
            ("unary-of-empty", Empty)
        }
        _ => return None,
    })
}
