//! Relations as associative arrays: rows are tuples, columns are attributes,
//! row keys are arbitrary but distinct.
//!
//! Every operation here is assembled from array-core kernels. Values are moved
//! through array products with the max-min semiring, whose one (`+∞`) leaves
//! any value unchanged under `⊗`, so string-valued relations need no special
//! casing. Permutation arrays carry `true` at stored positions and are
//! re-weighted with the operative semiring's one when multiplied.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::array::AssociativeArray;
use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::value::{Key, Value};

pub type Relation = AssociativeArray;

/// Boolean array relating rows of two arrays; rows are keyed by the first
/// array's row keys, columns by the second's.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationArray(AssociativeArray);

impl PermutationArray {
    pub(crate) fn from_pairs(pairs: Vec<(Key, Key)>) -> Result<Self> {
        let (i, j): (Vec<Key>, Vec<Key>) = pairs.into_iter().unzip();
        let v = vec![Value::Bool(true); i.len()];
        AssociativeArray::construct(&i, &j, &v, &Semiring::and_or()).map(PermutationArray)
    }

    pub fn array(&self) -> &AssociativeArray {
        &self.0
    }

    pub fn into_array(self) -> AssociativeArray {
        self.0
    }

    pub fn transpose(&self) -> PermutationArray {
        PermutationArray(self.0.transpose())
    }

    /// The same support weighted by `s.one()`, ready to multiply under `s`.
    pub fn weighted(&self, s: &Semiring) -> AssociativeArray {
        self.0.pattern(s.one())
    }

    pub fn contains(&self, a: &Key, b: &Key) -> bool {
        self.0.get(a, b).is_some()
    }
}

/// Kronecker delta row test `δ(A(i,:), B(i',:))` as a hashable signature: the
/// stored `(column, value)` pairs in column order. Absent cells are simply
/// missing, so rows with different supports never compare equal.
fn row_signature(a: &AssociativeArray, r: usize) -> Vec<(&Key, &Value)> {
    a.row(r).collect()
}

/// `P = 𝕀_A (A &.= Bᵀ) 𝕀_B`, evaluated by hashing row signatures.
pub fn equiv_perm(a: &AssociativeArray, b: &AssociativeArray) -> Result<PermutationArray> {
    let mut by_sig: HashMap<Vec<(&Key, &Value)>, Vec<usize>> = HashMap::new();
    for r in 0..b.row_keys().len() {
        by_sig.entry(row_signature(b, r)).or_default().push(r);
    }
    let mut pairs = Vec::new();
    for r in 0..a.row_keys().len() {
        if let Some(matches) = by_sig.get(&row_signature(a, r)) {
            for &q in matches {
                pairs.push((a.row_keys()[r].clone(), b.row_keys()[q].clone()));
            }
        }
    }
    PermutationArray::from_pairs(pairs)
}

fn row_multiset(a: &AssociativeArray) -> HashMap<Vec<(&Key, &Value)>, usize> {
    let mut out = HashMap::new();
    for r in 0..a.row_keys().len() {
        *out.entry(row_signature(a, r)).or_insert(0) += 1;
    }
    out
}

/// Relational equivalence `A ~ B`. Weak: every row of each side has an
/// identical row on the other side. Strict: identical rows also occur the
/// same number of times.
pub fn equivalent(a: &AssociativeArray, b: &AssociativeArray, strict: bool) -> bool {
    let (ma, mb) = (row_multiset(a), row_multiset(b));
    if strict {
        ma == mb
    } else {
        ma.len() == mb.len() && ma.keys().all(|k| mb.contains_key(k))
    }
}

fn dedup_keys(keys: &[Key]) -> Vec<Key> {
    let mut seen = HashSet::new();
    keys.iter().filter(|k| seen.insert(*k)).cloned().collect()
}

/// `A 𝕀(J)`: keep the columns `J`.
pub fn project(a: &Relation, cols: &[Key]) -> Result<Relation> {
    let s = Semiring::max_min();
    let j = dedup_keys(cols);
    a.array_mult(&AssociativeArray::identity(&j, &j, &s)?, &s)
}

/// `A 𝕀(J, J2)`: columns `J` reappear under the names `J2`; other columns
/// are dropped.
pub fn rename(a: &Relation, from: &[Key], to: &[Key]) -> Result<Relation> {
    let s = Semiring::max_min();
    a.array_mult(&AssociativeArray::identity(from, to, &s)?, &s)
}

/// Fresh keys for the rows of `b` that collide with row keys of `a`.
fn freshen(a: &[Key], b: &[Key]) -> Vec<Key> {
    let taken: HashSet<&Key> = a.iter().chain(b).collect();
    let mut issued: HashSet<Key> = HashSet::new();
    let mut next_int = a.iter().chain(b).filter_map(|k| if let Key::Int(i) = k { Some(*i) } else { None }).max();
    let mut next_real =
        a.iter().chain(b).filter_map(|k| if let Key::Real(x) = k { Some(*x) } else { None }).fold(None, |m: Option<f64>, x| {
            Some(m.map_or(x, |m| m.max(x)))
        });
    let in_a: HashSet<&Key> = a.iter().collect();
    b.iter()
        .map(|k| {
            if !in_a.contains(k) {
                return k.clone();
            }
            let fresh = match k {
                Key::Str(s) => (0u64..)
                    .map(|n| Key::Str(format!("{s}#u{n}")))
                    .find(|c| !taken.contains(c) && !issued.contains(c))
                    .expect("unbounded counter"),
                Key::Int(_) => {
                    let n = next_int.map_or(0, |m| m.wrapping_add(1));
                    next_int = Some(n);
                    Key::Int(n)
                }
                Key::Real(_) => {
                    let x = next_real.map_or(0.0, |m| (m + 1.0).floor());
                    next_real = Some(x);
                    Key::Real(x)
                }
            };
            issued.insert(fresh.clone());
            fresh
        })
        .collect()
}

/// `A ⊕ B` after making B's row keys distinct from A's. String keys get the
/// suffix `#u<k>` with the smallest free counter `k`; numeric keys continue
/// past the largest key of either input.
pub fn union(a: &Relation, b: &Relation) -> Result<Relation> {
    let s = Semiring::max_min();
    let keys = freshen(a.row_keys(), b.row_keys());
    let b = if keys.as_slice() == b.row_keys() { b.clone() } else { b.with_row_keys(keys)? };
    a.ew_add(&b, &s)
}

/// `P B` with `P = equiv_perm(A, B)`: the rows of A that have an identical
/// row in B, keyed by A's row keys.
pub fn intersection(a: &Relation, b: &Relation) -> Result<Relation> {
    let s = Semiring::max_min();
    let p = equiv_perm(a, b)?;
    p.weighted(&s).array_mult(b, &s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DifferenceStrategy {
    /// Drop rows of A whose row of P is nonempty.
    #[default]
    Mask,
    /// `A ⊕ −P B`; needs an additive inverse.
    Algebraic,
}

/// Rows of A with no identical row in B.
pub fn difference(a: &Relation, b: &Relation) -> Result<Relation> {
    difference_with(a, b, DifferenceStrategy::Mask, &Semiring::plus_times())
}

/// Set difference by either strategy. `s` is only used by the algebraic
/// strategy and must have an additive inverse.
///
/// For the algebraic form each row of A keeps only its least-keyed match in
/// B, so `P B` reproduces A's matched rows exactly once even when B holds
/// duplicate rows.
pub fn difference_with(a: &Relation, b: &Relation, strategy: DifferenceStrategy, s: &Semiring) -> Result<Relation> {
    let p = equiv_perm(a, b)?;
    match strategy {
        DifferenceStrategy::Mask => {
            let keep: Vec<Key> =
                a.row_keys().iter().filter(|k| p.array().row_index(k).is_none()).cloned().collect();
            a.select_sub(Some(&keep), None)
        }
        DifferenceStrategy::Algebraic => {
            if !s.has_plus_inverse() {
                return Err(Error::Capability { semiring: s.name().to_owned(), what: "additive inverse" });
            }
            let pa = p.array();
            let first: Vec<(Key, Key)> = (0..pa.row_keys().len())
                .map(|r| (pa.row_keys()[r].clone(), pa.row(r).next().expect("stored row").0.clone()))
                .collect();
            let p1 = PermutationArray::from_pairs(first)?;
            let matched = p1.weighted(s).array_mult(b, s)?;
            a.ew_add(&matched.negate(s)?, s)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Neq,
    Lt,
    Gt,
    Contains,
}

impl CompareOp {
    pub fn parse(text: &str) -> Option<CompareOp> {
        Some(match text {
            "eq" | "==" | "=" => CompareOp::Eq,
            "neq" | "!=" => CompareOp::Neq,
            "lt" | "<" => CompareOp::Lt,
            "gt" | ">" => CompareOp::Gt,
            "contains" => CompareOp::Contains,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            CompareOp::Eq => "eq",
            CompareOp::Neq => "neq",
            CompareOp::Lt => "lt",
            CompareOp::Gt => "gt",
            CompareOp::Contains => "contains",
        }
    }

    /// Numbers compare numerically across int/real; everything else by the
    /// total value order.
    pub fn holds(self, a: &Value, b: &Value) -> bool {
        match self {
            CompareOp::Contains => match a {
                Value::Str(s) => s.contains(&b.to_string()),
                _ => false,
            },
            _ => {
                let ord = compare_values(a, b);
                match self {
                    CompareOp::Eq => ord == Ordering::Equal,
                    CompareOp::Neq => ord != Ordering::Equal,
                    CompareOp::Lt => ord == Ordering::Less,
                    CompareOp::Gt => ord == Ordering::Greater,
                    CompareOp::Contains => unreachable!(),
                }
            }
        }
    }
}

pub fn compare_values(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x.cmp(y),
        (Value::Int(_) | Value::Real(_), Value::Int(_) | Value::Real(_)) => {
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            x.partial_cmp(&y).unwrap_or(Ordering::Equal)
        }
        _ => a.total_cmp(b),
    }
}

/// Cells of one row restricted to a column list; `None` marks a non-stored
/// cell.
pub type Cells<'a> = [Option<&'a Value>];

type PredFn = dyn for<'a> Fn(&Cells<'a>) -> Value + Send + Sync;
type PairFn = dyn for<'a, 'b> Fn(&Cells<'a>, &Cells<'b>) -> Value + Send + Sync;
type MapFn = dyn for<'a> Fn(&Cells<'a>) -> Result<Option<Value>> + Send + Sync;
type FoldFn = dyn Fn(&Value, &Value) -> Result<Value> + Send + Sync;

fn truth(name: &str, v: Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(b),
        Value::Int(0) => Ok(false),
        Value::Int(1) => Ok(true),
        other => Err(Error::PredicateContract { name: name.to_owned(), got: format!("{other:?}") }),
    }
}

/// `φ`: a row test over the selected columns. Results other than 0/1 (or
/// false/true) are contract violations.
#[derive(Clone)]
pub struct RowPredicate {
    name: String,
    constant: Option<bool>,
    f: Arc<PredFn>,
}

impl RowPredicate {
    pub fn new(name: impl Into<String>, f: impl for<'a> Fn(&Cells<'a>) -> Value + Send + Sync + 'static) -> Self {
        RowPredicate { name: name.into(), constant: None, f: Arc::new(f) }
    }

    pub fn constant(value: bool) -> Self {
        RowPredicate {
            name: if value { "true".into() } else { "false".into() },
            constant: Some(value),
            f: Arc::new(move |_| Value::Int(value as i64)),
        }
    }

    /// Holds when every selected cell is stored and `cell op literal`.
    pub fn compare(op: CompareOp, literal: Value) -> Self {
        let name = format!("{} {}", op.name(), literal);
        RowPredicate::new(name, move |cells| {
            let ok = !cells.is_empty() && cells.iter().all(|c| c.is_some_and(|v| op.holds(v, &literal)));
            Value::Int(ok as i64)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `Some(b)` when the predicate is known to be the constant `b`.
    pub fn constant_value(&self) -> Option<bool> {
        self.constant
    }

    pub fn eval(&self, cells: &Cells<'_>) -> Result<bool> {
        truth(&self.name, (self.f)(cells))
    }
}

impl fmt::Debug for RowPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RowPredicate({})", self.name)
    }
}

/// `θ`: a test over the selected columns of an A row and a B row.
#[derive(Clone)]
pub struct RowPairPredicate {
    name: String,
    constant: Option<bool>,
    symmetric: bool,
    flipped: bool,
    f: Arc<PairFn>,
}

impl RowPairPredicate {
    pub fn new(
        name: impl Into<String>,
        f: impl for<'a, 'b> Fn(&Cells<'a>, &Cells<'b>) -> Value + Send + Sync + 'static,
    ) -> Self {
        RowPairPredicate { name: name.into(), constant: None, symmetric: false, flipped: false, f: Arc::new(f) }
    }

    pub fn constant(value: bool) -> Self {
        RowPairPredicate {
            name: if value { "true".into() } else { "false".into() },
            constant: Some(value),
            symmetric: true,
            flipped: false,
            f: Arc::new(move |_, _| Value::Int(value as i64)),
        }
    }

    /// Holds when the paired cells are all stored and `a[p] op b[p]` for
    /// every position.
    pub fn compare(op: CompareOp) -> Self {
        let mut p = RowPairPredicate::new(op.name(), move |a, b| {
            let ok = !a.is_empty()
                && a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => op.holds(x, y),
                    _ => false,
                });
            Value::Int(ok as i64)
        });
        p.symmetric = matches!(op, CompareOp::Eq | CompareOp::Neq);
        p
    }

    /// The same test with its arguments exchanged. Swapping twice gives back
    /// the original predicate.
    pub fn swapped(&self) -> Self {
        RowPairPredicate { flipped: !self.flipped && !self.symmetric, ..self.clone() }
    }

    pub fn name(&self) -> String {
        if self.flipped {
            format!("swap({})", self.name)
        } else {
            self.name.clone()
        }
    }

    pub fn constant_value(&self) -> Option<bool> {
        self.constant
    }

    pub fn eval(&self, a: &Cells<'_>, b: &Cells<'_>) -> Result<bool> {
        let v = if self.flipped { (self.f)(b, a) } else { (self.f)(a, b) };
        truth(&self.name, v)
    }
}

impl fmt::Debug for RowPairPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RowPairPredicate({})", self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputKind {
    Any,
    Numeric,
    Str,
}

impl OutputKind {
    fn admits(self, v: &Value) -> bool {
        let finite = match v {
            Value::Real(x) => x.is_finite(),
            Value::NegInf | Value::PosInf => false,
            _ => true,
        };
        finite
            && match self {
                OutputKind::Any => true,
                OutputKind::Numeric => v.is_numeric(),
                OutputKind::Str => matches!(v, Value::Str(_)),
            }
    }
}

/// A per-row function for extended projection. `None` is the non-stored
/// element.
#[derive(Clone)]
pub struct RowFunction {
    name: String,
    output: OutputKind,
    pass_through: bool,
    f: Arc<MapFn>,
}

impl RowFunction {
    pub fn new(
        name: impl Into<String>,
        output: OutputKind,
        f: impl for<'a> Fn(&Cells<'a>) -> Result<Option<Value>> + Send + Sync + 'static,
    ) -> Self {
        RowFunction { name: name.into(), output, pass_through: false, f: Arc::new(f) }
    }

    /// The first selected cell, unchanged.
    pub fn pass_through() -> Self {
        RowFunction { pass_through: true, ..RowFunction::new("pass", OutputKind::Any, |c| Ok(c.first().copied().flatten().cloned())) }
    }

    /// The constant non-stored element.
    pub fn zero() -> Self {
        RowFunction::new("zero", OutputKind::Any, |_| Ok(None))
    }

    /// Stored cells rendered as text and joined with `sep`.
    pub fn concat(sep: &str) -> Self {
        let sep = sep.to_owned();
        RowFunction::new("concat", OutputKind::Str, move |cells| {
            let parts: Vec<String> = cells.iter().flatten().map(|v| v.to_string()).collect();
            Ok((!parts.is_empty()).then(|| Value::Str(parts.join(&sep))))
        })
    }

    pub fn sum() -> Self {
        RowFunction::new("sum", OutputKind::Numeric, |cells| {
            let s = Semiring::plus_times();
            let mut acc: Option<Value> = None;
            for v in cells.iter().flatten() {
                acc = Some(match acc {
                    None => {
                        s.check(v)?;
                        (*v).clone()
                    }
                    Some(a) => s.plus(&a, v)?,
                });
            }
            Ok(acc)
        })
    }

    pub fn min() -> Self {
        RowFunction::new("min", OutputKind::Any, |cells| {
            Ok(cells.iter().flatten().min_by(|a, b| compare_values(a, b)).map(|v| (*v).clone()))
        })
    }

    pub fn max() -> Self {
        RowFunction::new("max", OutputKind::Any, |cells| {
            Ok(cells.iter().flatten().max_by(|a, b| compare_values(a, b)).map(|v| (*v).clone()))
        })
    }

    pub fn count() -> Self {
        RowFunction::new("count", OutputKind::Numeric, |cells| {
            Ok(Some(Value::Int(cells.iter().flatten().count() as i64)))
        })
    }

    pub fn first() -> Self {
        RowFunction::new("first", OutputKind::Any, |cells| Ok(cells.iter().flatten().next().map(|v| (*v).clone())))
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "pass" => RowFunction::pass_through(),
            "concat" => RowFunction::concat("/"),
            "sum" => RowFunction::sum(),
            "min" => RowFunction::min(),
            "max" => RowFunction::max(),
            "count" => RowFunction::count(),
            "first" => RowFunction::first(),
            _ => return None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_pass_through(&self) -> bool {
        self.pass_through
    }

    pub fn eval(&self, cells: &Cells<'_>) -> Result<Option<Value>> {
        match (self.f)(cells)? {
            None => Ok(None),
            Some(v) if v.is_numeric_zero() => Ok(None),
            Some(v) if self.output.admits(&v) => Ok(Some(v)),
            Some(v) => Err(Error::FunctionOutput { name: self.name.clone(), got: format!("{v:?}") }),
        }
    }
}

impl fmt::Debug for RowFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RowFunction({})", self.name)
    }
}

/// Declared behaviour of `f(0, v)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroLaw {
    /// `f(0, v) = v`
    Identity,
    /// `f(0, v) = 0`
    Annihilator,
    /// `f(0, v) = c`
    Constant(Value),
}

#[derive(Clone)]
enum AggKind {
    Fold(Arc<FoldFn>),
    Count,
    First,
}

/// `f`: a commutative reduction applied to one column per group. The
/// reduction starts from the non-stored element, so a group reduces to
/// `f(…f(f(0, v1), v2)…, vn)` with `f(0, ·)` given by the declared law.
#[derive(Clone)]
pub struct Aggregator {
    name: String,
    law: ZeroLaw,
    kind: AggKind,
}

impl Aggregator {
    pub fn new(
        name: impl Into<String>,
        law: ZeroLaw,
        f: impl Fn(&Value, &Value) -> Result<Value> + Send + Sync + 'static,
    ) -> Self {
        Aggregator { name: name.into(), law, kind: AggKind::Fold(Arc::new(f)) }
    }

    pub fn sum() -> Self {
        Aggregator::new("sum", ZeroLaw::Identity, |a, b| Semiring::plus_times().plus(a, b))
    }

    pub fn min() -> Self {
        Aggregator::new("min", ZeroLaw::Identity, |a, b| {
            Ok(if compare_values(b, a) == Ordering::Less { b.clone() } else { a.clone() })
        })
    }

    pub fn max() -> Self {
        Aggregator::new("max", ZeroLaw::Identity, |a, b| {
            Ok(if compare_values(b, a) == Ordering::Greater { b.clone() } else { a.clone() })
        })
    }

    /// Number of stored values in the group.
    pub fn count() -> Self {
        Aggregator { name: "count".into(), law: ZeroLaw::Constant(Value::Int(1)), kind: AggKind::Count }
    }

    /// Value of the least row key in the group.
    pub fn first() -> Self {
        Aggregator { name: "first".into(), law: ZeroLaw::Identity, kind: AggKind::First }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "sum" => Aggregator::sum(),
            "min" => Aggregator::min(),
            "max" => Aggregator::max(),
            "count" => Aggregator::count(),
            "first" => Aggregator::first(),
            _ => return None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn law(&self) -> &ZeroLaw {
        &self.law
    }

    fn contract(&self, reason: impl Into<String>) -> Error {
        Error::AggregatorContract { name: self.name.clone(), reason: reason.into() }
    }

    /// Reduce the stored values of one group, given in row-key order.
    pub fn reduce(&self, values: &[&Value]) -> Result<Option<Value>> {
        let Some((&v1, rest)) = values.split_first() else { return Ok(None) };
        match &self.kind {
            AggKind::Count => Ok(Some(Value::Int(values.len() as i64))),
            AggKind::First => Ok(Some(v1.clone())),
            AggKind::Fold(f) => {
                for w in values.windows(2).take(8) {
                    if f(w[0], w[1])? != f(w[1], w[0])? {
                        return Err(self.contract(format!("not commutative on ({}, {})", w[0], w[1])));
                    }
                }
                let mut acc = match &self.law {
                    ZeroLaw::Identity => v1.clone(),
                    ZeroLaw::Annihilator => return Ok(None),
                    ZeroLaw::Constant(c) => c.clone(),
                };
                for v in rest {
                    acc = f(&acc, v)?;
                }
                Ok(Some(acc))
            }
        }
    }
}

impl fmt::Debug for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aggregator({})", self.name)
    }
}

fn cells_of<'a>(a: &'a AssociativeArray, r: usize, cols: &[Key]) -> Vec<Option<&'a Value>> {
    cols.iter().map(|c| a.cell(r, c)).collect()
}

/// `P A` with `P = 𝕀(φ(A(:, J)))`.
pub fn select(a: &Relation, cols: &[Key], phi: &RowPredicate) -> Result<Relation> {
    let s = Semiring::max_min();
    let mut keep = Vec::new();
    for r in 0..a.row_keys().len() {
        if phi.eval(&cells_of(a, r, cols))? {
            keep.push(a.row_keys()[r].clone());
        }
    }
    let p = PermutationArray::from_pairs(keep.iter().map(|k| (k.clone(), k.clone())).collect())?;
    p.weighted(&s).array_mult(a, &s)
}

/// `P(i_A, i_B) = θ(A(i_A, J), B(i_B, J2))`.
pub fn theta_perm(
    a: &Relation,
    b: &Relation,
    cols_a: &[Key],
    cols_b: &[Key],
    theta: &RowPairPredicate,
) -> Result<PermutationArray> {
    if theta.constant_value() == Some(false) {
        return Ok(PermutationArray(AssociativeArray::empty()));
    }
    let b_cells: Vec<Vec<Option<&Value>>> = (0..b.row_keys().len()).map(|r| cells_of(b, r, cols_b)).collect();
    let mut pairs = Vec::new();
    for ra in 0..a.row_keys().len() {
        let ca = cells_of(a, ra, cols_a);
        for (rb, cb) in b_cells.iter().enumerate() {
            if theta.eval(&ca, cb)? {
                pairs.push((a.row_keys()[ra].clone(), b.row_keys()[rb].clone()));
            }
        }
    }
    PermutationArray::from_pairs(pairs)
}

/// B with every column that also names a column of A renamed `<name>#B`.
pub fn disambiguate_columns(a: &Relation, b: &Relation) -> Result<Relation> {
    let clashes: Vec<&Key> = b.col_keys().iter().filter(|c| a.col_index(c).is_some()).collect();
    if clashes.is_empty() {
        return Ok(b.clone());
    }
    let mut from = Vec::with_capacity(b.col_keys().len());
    let mut to = Vec::with_capacity(b.col_keys().len());
    for c in b.col_keys() {
        from.push(c.clone());
        if a.col_index(c).is_none() {
            to.push(c.clone());
            continue;
        }
        let Key::Str(name) = c else { return Err(Error::ColumnCollision(c.to_string())) };
        let renamed = Key::Str(format!("{name}#B"));
        if a.col_index(&renamed).is_some() || b.col_index(&renamed).is_some() {
            return Err(Error::ColumnCollision(renamed.to_string()));
        }
        to.push(renamed);
    }
    rename(b, &from, &to)
}

/// `P B ⊕ (P Pᵀ ∘ 𝕀_A) A`: one row per A row with at least one match,
/// carrying A's attributes and the `⊕`-collapse (max-min) of the matching
/// B rows. `P Pᵀ` is masked with the diagonal `𝕀_A`, so each surviving A row
/// is reproduced once rather than mixed with other A rows sharing a match.
pub fn theta_join(
    a: &Relation,
    b: &Relation,
    cols_a: &[Key],
    cols_b: &[Key],
    theta: &RowPairPredicate,
) -> Result<Relation> {
    let s = Semiring::max_min();
    let p = theta_perm(a, b, cols_a, cols_b, theta)?.weighted(&s);
    let b2 = disambiguate_columns(a, b)?;
    let pb = p.array_mult(&b2, &s)?;
    let ppt = p.array_mult(&p.transpose(), &s)?;
    let diag = AssociativeArray::identity(a.row_keys(), a.row_keys(), &s)?;
    let ppa = ppt.ew_mult(&diag, &s)?.array_mult(a, &s)?;
    pb.ew_add(&ppa, &s)
}

/// One output row per matching pair, keyed `"<iA>|<iB>"`.
pub fn theta_join_pairs(
    a: &Relation,
    b: &Relation,
    cols_a: &[Key],
    cols_b: &[Key],
    theta: &RowPairPredicate,
) -> Result<Relation> {
    let p = theta_perm(a, b, cols_a, cols_b, theta)?;
    let b2 = disambiguate_columns(a, b)?;
    let mut triples: Vec<(Key, Key, Value)> = Vec::new();
    for (ka, kb, _) in p.array().iter() {
        let key = Key::Str(format!("{ka}|{kb}"));
        let ra = a.row_index(ka).expect("P row is an A row");
        let rb = b2.row_index(kb).expect("P column is a B row");
        for (c, v) in a.row(ra).chain(b2.row(rb)) {
            triples.push((key.clone(), c.clone(), v.clone()));
        }
    }
    AssociativeArray::from_triples(triples, &Semiring::max_min())
}

/// One output column `j2` holding `φ(A(i, J))` for each row.
pub fn extended_projection(a: &Relation, cols: &[Key], out: &Key, phi: &RowFunction) -> Result<Relation> {
    let mut triples = Vec::new();
    for r in 0..a.row_keys().len() {
        if let Some(v) = phi.eval(&cells_of(a, r, cols))? {
            triples.push((a.row_keys()[r].clone(), out.clone(), v));
        }
    }
    AssociativeArray::from_triples(triples, &Semiring::max_min())
}

/// Grouping array for column `j`: `P(i, i')` stored iff `A(i, j) = A(i', j)`.
/// Same support as `A(:, j) &.= A(:, j)ᵀ`.
pub fn group_perm(a: &Relation, j: &Key) -> Result<PermutationArray> {
    let groups = groups_by(a, j);
    let mut pairs = Vec::new();
    for rows in groups.values() {
        for &x in rows {
            for &y in rows {
                pairs.push((a.row_keys()[x].clone(), a.row_keys()[y].clone()));
            }
        }
    }
    PermutationArray::from_pairs(pairs)
}

/// Row ranks grouped by their value in column `j`; rows without a value are
/// in no group. Ranks inside a group are ascending, so the first is the
/// least row key.
fn groups_by<'a>(a: &'a Relation, j: &Key) -> HashMap<&'a Value, Vec<usize>> {
    let mut groups: HashMap<&Value, Vec<usize>> = HashMap::new();
    for r in 0..a.row_keys().len() {
        if let Some(v) = a.cell(r, j) {
            groups.entry(v).or_default().push(r);
        }
    }
    groups
}

/// Group rows by `A(:, j)` and reduce `A(:, j2)` within each group. The
/// output row of a group is keyed by its least row key and holds the group
/// value under `j` and the reduction under `j2`; groups reducing to the
/// non-stored element are dropped.
pub fn aggregate(a: &Relation, j: &Key, j2: &Key, f: &Aggregator) -> Result<Relation> {
    if j == j2 {
        return Err(Error::InvalidArgument(format!("aggregate group and value columns are both `{j}`")));
    }
    let groups = groups_by(a, j);
    let mut ordered: BTreeMap<usize, (&Value, &Vec<usize>)> = BTreeMap::new();
    for (v, rows) in &groups {
        ordered.insert(rows[0], (*v, rows));
    }
    let mut triples = Vec::new();
    for (rep, (gv, rows)) in ordered {
        let values: Vec<&Value> = rows.iter().filter_map(|&r| a.cell(r, j2)).collect();
        let Some(red) = f.reduce(&values)? else { continue };
        if red.is_numeric_zero() {
            continue;
        }
        let key = a.row_keys()[rep].clone();
        triples.push((key.clone(), j.clone(), gv.clone()));
        triples.push((key, j2.clone(), red));
    }
    AssociativeArray::from_triples(triples, &Semiring::max_min())
}
