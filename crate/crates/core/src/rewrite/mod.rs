//! Expression plans over arrays and relations, with identity/annihilator
//! simplification, cost-driven reordering and a law checker.

mod check;
mod cost;
pub mod fuzz;
mod reorder;
mod simplify;

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::array::{ArrayStats, AssociativeArray};
use crate::error::{Error, Result};
use crate::relational::{self, Aggregator, RowFunction, RowPairPredicate, RowPredicate, ZeroLaw};
use crate::semiring::Semiring;
use crate::value::Key;

pub use check::{
    check_property, check_property_with, replay, Carrier, Failure, PropertyReport, PROPERTY_NAMES,
};
pub use cost::{estimate, estimate_cost, Estimate};
pub use reorder::{reorder, reorder_with, ReorderLimits};
pub use simplify::{simplify, simplify_traced, Step};

/// Per-key entry counts of a data leaf, used for exact product costs.
#[derive(Debug)]
pub(crate) struct Profile {
    pub(crate) row_counts: Vec<(Key, usize)>,
    pub(crate) col_counts: Vec<(Key, usize)>,
}

#[derive(Debug)]
pub struct Leaf {
    name: String,
    data: Option<AssociativeArray>,
    stats: Option<ArrayStats>,
    profile: OnceLock<Profile>,
}

impl Leaf {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data(&self) -> Option<&AssociativeArray> {
        self.data.as_ref()
    }

    pub fn stats(&self) -> Option<ArrayStats> {
        self.stats.or_else(|| self.data.as_ref().map(|a| a.stats()))
    }

    pub(crate) fn profile(&self) -> Option<&Profile> {
        let a = self.data.as_ref()?;
        Some(self.profile.get_or_init(|| {
            let row_counts = (0..a.row_keys().len()).map(|r| (a.row_keys()[r].clone(), a.row(r).count())).collect();
            let t = a.transpose();
            let col_counts = (0..t.row_keys().len()).map(|r| (t.row_keys()[r].clone(), t.row(r).count())).collect();
            Profile { row_counts, col_counts }
        }))
    }
}

/// An expression tree. Leaves are identified by name; two leaves with the
/// same name are assumed to hold the same data.
#[derive(Clone, Debug)]
pub enum Plan {
    Leaf(Arc<Leaf>),
    /// The empty array `𝟘`.
    Empty,
    /// `𝕀(K)` under the evaluating semiring.
    Identity(Vec<Key>),
    EwAdd(Arc<Plan>, Arc<Plan>),
    EwMult(Arc<Plan>, Arc<Plan>),
    ArrayMult(Arc<Plan>, Arc<Plan>),
    Transpose(Arc<Plan>),
    Project {
        input: Arc<Plan>,
        cols: Vec<Key>,
    },
    Rename {
        input: Arc<Plan>,
        from: Vec<Key>,
        to: Vec<Key>,
    },
    Union(Arc<Plan>, Arc<Plan>),
    Intersection(Arc<Plan>, Arc<Plan>),
    Difference(Arc<Plan>, Arc<Plan>),
    Select {
        input: Arc<Plan>,
        cols: Vec<Key>,
        pred: RowPredicate,
    },
    ThetaJoin {
        left: Arc<Plan>,
        right: Arc<Plan>,
        cols_left: Vec<Key>,
        cols_right: Vec<Key>,
        theta: RowPairPredicate,
        /// One output row per matching pair instead of one per left row.
        pairs: bool,
    },
    ExtendedProjection {
        input: Arc<Plan>,
        cols: Vec<Key>,
        out: Key,
        f: RowFunction,
    },
    Aggregate {
        input: Arc<Plan>,
        group: Key,
        value: Key,
        f: Aggregator,
    },
}

fn b(p: Plan) -> Arc<Plan> {
    Arc::new(p)
}

impl Plan {
    pub fn leaf(name: impl Into<String>, data: AssociativeArray) -> Plan {
        Plan::Leaf(Arc::new(Leaf { name: name.into(), data: Some(data), stats: None, profile: OnceLock::new() }))
    }

    /// A leaf known only by its statistics; such plans can be costed and
    /// rewritten but not evaluated.
    pub fn stub(name: impl Into<String>, stats: ArrayStats) -> Plan {
        Plan::Leaf(Arc::new(Leaf { name: name.into(), data: None, stats: Some(stats), profile: OnceLock::new() }))
    }

    pub fn ew_add(a: Plan, c: Plan) -> Plan {
        Plan::EwAdd(b(a), b(c))
    }

    pub fn ew_mult(a: Plan, c: Plan) -> Plan {
        Plan::EwMult(b(a), b(c))
    }

    pub fn array_mult(a: Plan, c: Plan) -> Plan {
        Plan::ArrayMult(b(a), b(c))
    }

    pub fn transpose(a: Plan) -> Plan {
        Plan::Transpose(b(a))
    }

    pub fn union(a: Plan, c: Plan) -> Plan {
        Plan::Union(b(a), b(c))
    }

    pub fn intersection(a: Plan, c: Plan) -> Plan {
        Plan::Intersection(b(a), b(c))
    }

    pub fn difference(a: Plan, c: Plan) -> Plan {
        Plan::Difference(b(a), b(c))
    }

    pub fn project(input: Plan, cols: Vec<Key>) -> Plan {
        Plan::Project { input: b(input), cols }
    }

    pub fn rename(input: Plan, from: Vec<Key>, to: Vec<Key>) -> Plan {
        Plan::Rename { input: b(input), from, to }
    }

    pub fn select(input: Plan, cols: Vec<Key>, pred: RowPredicate) -> Plan {
        Plan::Select { input: b(input), cols, pred }
    }

    pub fn theta_join(
        left: Plan,
        right: Plan,
        cols_left: Vec<Key>,
        cols_right: Vec<Key>,
        theta: RowPairPredicate,
        pairs: bool,
    ) -> Plan {
        Plan::ThetaJoin { left: b(left), right: b(right), cols_left, cols_right, theta, pairs }
    }

    pub fn extended_projection(input: Plan, cols: Vec<Key>, out: Key, f: RowFunction) -> Plan {
        Plan::ExtendedProjection { input: b(input), cols, out, f }
    }

    pub fn aggregate(input: Plan, group: Key, value: Key, f: Aggregator) -> Plan {
        Plan::Aggregate { input: b(input), group, value, f }
    }

    fn pair(&self) -> [Option<&Arc<Plan>>; 2] {
        match self {
            Plan::Leaf(_) | Plan::Empty | Plan::Identity(_) => [None, None],
            Plan::EwAdd(x, y)
            | Plan::EwMult(x, y)
            | Plan::ArrayMult(x, y)
            | Plan::Union(x, y)
            | Plan::Intersection(x, y)
            | Plan::Difference(x, y) => [Some(x), Some(y)],
            Plan::ThetaJoin { left, right, .. } => [Some(left), Some(right)],
            Plan::Transpose(x)
            | Plan::Project { input: x, .. }
            | Plan::Rename { input: x, .. }
            | Plan::Select { input: x, .. }
            | Plan::ExtendedProjection { input: x, .. }
            | Plan::Aggregate { input: x, .. } => [Some(x), None],
        }
    }

    pub fn children(&self) -> impl Iterator<Item = &Plan> + '_ {
        self.pair().into_iter().flatten().map(|c| &**c)
    }

    pub(crate) fn children_mut(&mut self) -> Vec<&mut Arc<Plan>> {
        match self {
            Plan::Leaf(_) | Plan::Empty | Plan::Identity(_) => vec![],
            Plan::EwAdd(x, y)
            | Plan::EwMult(x, y)
            | Plan::ArrayMult(x, y)
            | Plan::Union(x, y)
            | Plan::Intersection(x, y)
            | Plan::Difference(x, y) => vec![x, y],
            Plan::ThetaJoin { left, right, .. } => vec![left, right],
            Plan::Transpose(x)
            | Plan::Project { input: x, .. }
            | Plan::Rename { input: x, .. }
            | Plan::Select { input: x, .. }
            | Plan::ExtendedProjection { input: x, .. }
            | Plan::Aggregate { input: x, .. } => vec![x],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().map(|c| c.node_count()).sum::<usize>()
    }

    /// Node count with extended projection and aggregation weighted 2; the
    /// simplifier strictly decreases this measure with every rule.
    pub fn size(&self) -> usize {
        let own = match self {
            Plan::ExtendedProjection { .. } | Plan::Aggregate { .. } => 2,
            _ => 1,
        };
        own + self.children().map(|c| c.size()).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Plan::Leaf(_) => 1,
            _ => self.children().map(|c| c.leaf_count()).sum(),
        }
    }

    /// Canonical text of the plan; equal fingerprints mean equal plans.
    pub fn fingerprint(&self) -> String {
        self.to_string()
    }

    /// Is every node an array-level operation (no relational nodes)?
    pub fn is_array_plan(&self) -> bool {
        let own = matches!(
            self,
            Plan::Leaf(_)
                | Plan::Empty
                | Plan::Identity(_)
                | Plan::EwAdd(..)
                | Plan::EwMult(..)
                | Plan::ArrayMult(..)
                | Plan::Transpose(_)
        );
        own && self.children().all(|c| c.is_array_plan())
    }

    /// Evaluate with `s` as the semiring of the array-level nodes. Relational
    /// nodes use their own fixed semantics.
    pub fn evaluate(&self, s: &Semiring) -> Result<Cow<'_, AssociativeArray>> {
        let owned = |r: Result<AssociativeArray>| r.map(Cow::Owned);
        match self {
            Plan::Leaf(l) => l.data.as_ref().map(Cow::Borrowed).ok_or_else(|| Error::MissingData(l.name.clone())),
            Plan::Empty => Ok(Cow::Owned(AssociativeArray::empty())),
            Plan::Identity(k) => owned(AssociativeArray::identity(k, k, s)),
            Plan::EwAdd(x, y) => owned(x.evaluate(s)?.ew_add(&*y.evaluate(s)?, s)),
            Plan::EwMult(x, y) => owned(x.evaluate(s)?.ew_mult(&*y.evaluate(s)?, s)),
            Plan::ArrayMult(x, y) => owned(x.evaluate(s)?.array_mult(&*y.evaluate(s)?, s)),
            Plan::Transpose(x) => Ok(Cow::Owned(x.evaluate(s)?.transpose())),
            Plan::Project { input, cols } => owned(relational::project(&*input.evaluate(s)?, cols)),
            Plan::Rename { input, from, to } => owned(relational::rename(&*input.evaluate(s)?, from, to)),
            Plan::Union(x, y) => owned(relational::union(&*x.evaluate(s)?, &*y.evaluate(s)?)),
            Plan::Intersection(x, y) => owned(relational::intersection(&*x.evaluate(s)?, &*y.evaluate(s)?)),
            Plan::Difference(x, y) => owned(relational::difference(&*x.evaluate(s)?, &*y.evaluate(s)?)),
            Plan::Select { input, cols, pred } => owned(relational::select(&*input.evaluate(s)?, cols, pred)),
            Plan::ThetaJoin { left, right, cols_left, cols_right, theta, pairs } => {
                let (l, r) = (left.evaluate(s)?, right.evaluate(s)?);
                if *pairs {
                    owned(relational::theta_join_pairs(&l, &r, cols_left, cols_right, theta))
                } else {
                    owned(relational::theta_join(&l, &r, cols_left, cols_right, theta))
                }
            }
            Plan::ExtendedProjection { input, cols, out, f } => {
                owned(relational::extended_projection(&*input.evaluate(s)?, cols, out, f))
            }
            Plan::Aggregate { input, group, value, f } => {
                owned(relational::aggregate(&*input.evaluate(s)?, group, value, f))
            }
        }
    }

    /// A superset of the row keys the plan can produce, when known.
    pub fn row_bound(&self) -> Option<BTreeSet<Key>> {
        match self {
            Plan::Leaf(l) => l.data.as_ref().map(|a| a.row_keys().iter().cloned().collect()),
            Plan::Empty => Some(BTreeSet::new()),
            Plan::Identity(k) => Some(k.iter().cloned().collect()),
            Plan::EwAdd(x, y) => Some(&x.row_bound()? | &y.row_bound()?),
            Plan::EwMult(x, y) => meet(x.row_bound(), y.row_bound()),
            Plan::ArrayMult(x, _) => x.row_bound(),
            Plan::Transpose(x) => x.col_bound(),
            Plan::Union(..) => None,
            Plan::Intersection(x, _) | Plan::Difference(x, _) => x.row_bound(),
            Plan::ThetaJoin { left, pairs: false, .. } => left.row_bound(),
            Plan::ThetaJoin { pairs: true, .. } => None,
            Plan::Project { input, .. }
            | Plan::Rename { input, .. }
            | Plan::Select { input, .. }
            | Plan::ExtendedProjection { input, .. }
            | Plan::Aggregate { input, .. } => input.row_bound(),
        }
    }

    /// A superset of the column keys the plan can produce, when known.
    pub fn col_bound(&self) -> Option<BTreeSet<Key>> {
        match self {
            Plan::Leaf(l) => l.data.as_ref().map(|a| a.col_keys().iter().cloned().collect()),
            Plan::Empty => Some(BTreeSet::new()),
            Plan::Identity(k) => Some(k.iter().cloned().collect()),
            Plan::EwAdd(x, y) | Plan::Union(x, y) => Some(&x.col_bound()? | &y.col_bound()?),
            Plan::EwMult(x, y) => meet(x.col_bound(), y.col_bound()),
            Plan::ArrayMult(_, y) => y.col_bound(),
            Plan::Transpose(x) => x.row_bound(),
            Plan::Intersection(x, y) => meet(x.col_bound(), y.col_bound()),
            Plan::Difference(x, _) | Plan::Select { input: x, .. } => x.col_bound(),
            Plan::Project { input, cols } => {
                let j: BTreeSet<Key> = cols.iter().cloned().collect();
                Some(match input.col_bound() {
                    Some(c) => &c & &j,
                    None => j,
                })
            }
            Plan::Rename { to, .. } => Some(to.iter().cloned().collect()),
            Plan::ThetaJoin { left, right, .. } => {
                let (l, r) = (left.col_bound()?, right.col_bound()?);
                let mut out = l.clone();
                for c in r {
                    out.insert(match (&c, l.contains(&c)) {
                        (Key::Str(name), true) => Key::Str(format!("{name}#B")),
                        _ => c,
                    });
                }
                Some(out)
            }
            Plan::ExtendedProjection { out, .. } => Some(BTreeSet::from([out.clone()])),
            Plan::Aggregate { group, value, .. } => Some(BTreeSet::from([group.clone(), value.clone()])),
        }
    }

    /// Does the aggregation identity `f(0, v) = v` on a unique group column
    /// apply, so that the node is a plain projection? Only decidable when the
    /// input is a data leaf.
    pub(crate) fn aggregate_is_projection(input: &Plan, group: &Key, value: &Key, f: &Aggregator) -> bool {
        if *f.law() != ZeroLaw::Identity || group == value {
            return false;
        }
        let Plan::Leaf(l) = input else { return false };
        let Some(a) = l.data() else { return false };
        let mut seen = std::collections::HashSet::new();
        for r in 0..a.row_keys().len() {
            let (g, v) = (a.cell(r, group), a.cell(r, value));
            match (g, v) {
                (None, None) => {}
                (Some(g), Some(v)) if !v.is_numeric_zero() => {
                    if !seen.insert(g) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

fn meet(a: Option<BTreeSet<Key>>, b: Option<BTreeSet<Key>>) -> Option<BTreeSet<Key>> {
    match (a, b) {
        (Some(x), Some(y)) => Some(&x & &y),
        (x, None) => x,
        (None, y) => y,
    }
}

fn keys(k: &[Key]) -> String {
    k.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

/// Structural equality with the same meaning as equal fingerprints: leaves
/// compare by name, callables by their names.
impl PartialEq for Plan {
    fn eq(&self, other: &Plan) -> bool {
        use Plan::*;
        let same = |a: &Arc<Plan>, b: &Arc<Plan>| Arc::ptr_eq(a, b) || a == b;
        match (self, other) {
            (Leaf(a), Leaf(b)) => a.name == b.name,
            (Empty, Empty) => true,
            (Identity(a), Identity(b)) => a == b,
            (EwAdd(a, b), EwAdd(c, d))
            | (EwMult(a, b), EwMult(c, d))
            | (ArrayMult(a, b), ArrayMult(c, d))
            | (Union(a, b), Union(c, d))
            | (Intersection(a, b), Intersection(c, d))
            | (Difference(a, b), Difference(c, d)) => same(a, c) && same(b, d),
            (Transpose(a), Transpose(b)) => same(a, b),
            (Project { input: a, cols: x }, Project { input: b, cols: y }) => x == y && same(a, b),
            (Rename { input: a, from: f1, to: t1 }, Rename { input: b, from: f2, to: t2 }) => {
                f1 == f2 && t1 == t2 && same(a, b)
            }
            (Select { input: a, cols: x, pred: p }, Select { input: b, cols: y, pred: q }) => {
                x == y && p.name() == q.name() && same(a, b)
            }
            (
                ThetaJoin { left: l1, right: r1, cols_left: a1, cols_right: b1, theta: t1, pairs: p1 },
                ThetaJoin { left: l2, right: r2, cols_left: a2, cols_right: b2, theta: t2, pairs: p2 },
            ) => p1 == p2 && a1 == a2 && b1 == b2 && t1.name() == t2.name() && same(l1, l2) && same(r1, r2),
            (
                ExtendedProjection { input: a, cols: x, out: o1, f: f1 },
                ExtendedProjection { input: b, cols: y, out: o2, f: f2 },
            ) => x == y && o1 == o2 && f1.name() == f2.name() && same(a, b),
            (
                Aggregate { input: a, group: g1, value: v1, f: f1 },
                Aggregate { input: b, group: g2, value: v2, f: f2 },
            ) => g1 == g2 && v1 == v2 && f1.name() == f2.name() && same(a, b),
            _ => false,
        }
    }
}

impl Eq for Plan {}

/// Hashes the operator skeleton and leaf names only; plans that differ just
/// in column lists or callables collide and are told apart by `Eq`.
impl Hash for Plan {
    fn hash<H: Hasher>(&self, h: &mut H) {
        std::mem::discriminant(self).hash(h);
        if let Plan::Leaf(l) = self {
            l.name.hash(h);
        }
        for c in self.children() {
            c.hash(h);
        }
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Leaf(l) => f.write_str(&l.name),
            Plan::Empty => f.write_str("0"),
            Plan::Identity(k) => write!(f, "I[{}]", keys(k)),
            Plan::EwAdd(x, y) => write!(f, "({x} + {y})"),
            Plan::EwMult(x, y) => write!(f, "({x} .* {y})"),
            Plan::ArrayMult(x, y) => write!(f, "({x} {y})"),
            Plan::Transpose(x) => write!(f, "{x}'"),
            Plan::Project { input, cols } => write!(f, "project({input}; {})", keys(cols)),
            Plan::Rename { input, from, to } => write!(f, "rename({input}; {} -> {})", keys(from), keys(to)),
            Plan::Union(x, y) => write!(f, "union({x}, {y})"),
            Plan::Intersection(x, y) => write!(f, "intersect({x}, {y})"),
            Plan::Difference(x, y) => write!(f, "except({x}, {y})"),
            Plan::Select { input, cols, pred } => write!(f, "select({input}; {}; {})", keys(cols), pred.name()),
            Plan::ThetaJoin { left, right, cols_left, cols_right, theta, pairs } => write!(
                f,
                "{}({left}, {right}; {}; {}; {})",
                if *pairs { "joinpairs" } else { "join" },
                keys(cols_left),
                keys(cols_right),
                theta.name()
            ),
            Plan::ExtendedProjection { input, cols, out, f: phi } => {
                write!(f, "extend({input}; {}; {out}; {})", keys(cols), phi.name())
            }
            Plan::Aggregate { input, group, value, f: agg } => {
                write!(f, "agg({input}; {group}; {value}; {})", agg.name())
            }
        }
    }
}
