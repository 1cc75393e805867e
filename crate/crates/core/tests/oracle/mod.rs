//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's kernels; arrays are only read through
//! their row iterators.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use assocarray::{AssociativeArray, Key, Value};

pub const N: usize = 16;

/// Dense 16×16 integer matrix over keys 1..=16; 0 means non-stored.
pub type Dense = [[i64; N]; N];

fn key_index(k: &Key) -> usize {
    match k {
        Key::Int(i) if (1..=N as i64).contains(i) => (*i - 1) as usize,
        other => panic!("key {other:?} outside 1..=16"),
    }
}

pub fn to_dense(a: &AssociativeArray) -> Dense {
    let mut d = [[0i64; N]; N];
    for (r, c, v) in a.iter() {
        let Value::Int(x) = v else { panic!("non-integer value {v:?}") };
        assert_ne!(*x, 0, "stored zero at ({r}, {c})");
        d[key_index(r)][key_index(c)] = *x;
    }
    d
}

pub fn dense_add(a: &Dense, b: &Dense) -> Dense {
    let mut d = [[0i64; N]; N];
    for i in 0..N {
        for j in 0..N {
            d[i][j] = a[i][j].wrapping_add(b[i][j]);
        }
    }
    d
}

pub fn dense_hadamard(a: &Dense, b: &Dense) -> Dense {
    let mut d = [[0i64; N]; N];
    for i in 0..N {
        for j in 0..N {
            d[i][j] = a[i][j].wrapping_mul(b[i][j]);
        }
    }
    d
}

pub fn dense_mult(a: &Dense, b: &Dense) -> Dense {
    let mut d = [[0i64; N]; N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                d[i][j] = d[i][j].wrapping_add(a[i][k].wrapping_mul(b[k][j]));
            }
        }
    }
    d
}

/// Max-plus counterpart with `None` as −∞.
pub type Tropical = [[Option<i64>; N]; N];

pub fn to_tropical(a: &AssociativeArray) -> Tropical {
    let mut d = [[None; N]; N];
    for (r, c, v) in a.iter() {
        let Value::Int(x) = v else { panic!("non-integer value {v:?}") };
        d[key_index(r)][key_index(c)] = Some(*x);
    }
    d
}

pub fn tropical_mult(a: &Tropical, b: &Tropical) -> Tropical {
    let mut d = [[None; N]; N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                if let (Some(x), Some(y)) = (a[i][k], b[k][j]) {
                    d[i][j] = Some(d[i][j].map_or(x + y, |z: i64| z.max(x + y)));
                }
            }
        }
    }
    d
}

pub type Row = BTreeMap<Key, Value>;

pub fn rows_of(a: &AssociativeArray) -> Vec<(Key, Row)> {
    a.row_keys()
        .iter()
        .enumerate()
        .map(|(r, k)| (k.clone(), a.row(r).map(|(c, v)| (c.clone(), v.clone())).collect()))
        .collect()
}

pub fn tuples(a: &AssociativeArray) -> Vec<Row> {
    rows_of(a).into_iter().map(|(_, r)| r).collect()
}

type Canon = Vec<(Key, String)>;

fn canon(row: &Row) -> Canon {
    row.iter().map(|(k, v)| (k.clone(), format!("{v:?}"))).collect()
}

fn bag<'a>(rows: impl IntoIterator<Item = &'a Row>) -> Vec<Canon> {
    let mut out: Vec<Canon> = rows.into_iter().filter(|r| !r.is_empty()).map(canon).collect();
    out.sort();
    out
}

/// Row multisets equal, ignoring row keys and empty oracle rows.
pub fn same_bag(a: &AssociativeArray, expected: &[Row]) -> std::result::Result<(), String> {
    let (got, want) = (bag(&tuples(a)), bag(expected));
    if got == want {
        Ok(())
    } else {
        Err(format!("got {} rows {got:?}\nwant {} rows {want:?}", got.len(), want.len()))
    }
}

/// Row sets equal, ignoring multiplicities.
pub fn same_set(a: &AssociativeArray, expected: &[Row]) -> std::result::Result<(), String> {
    let got: BTreeSet<Canon> = bag(&tuples(a)).into_iter().collect();
    let want: BTreeSet<Canon> = bag(expected).into_iter().collect();
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got:?}\nwant {want:?}"))
    }
}

/// Ordering of cells within a single-kind relation.
pub fn cmp(a: &Value, b: &Value) -> Option<Ordering> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Some(x.cmp(y)),
        (Value::Str(x), Value::Str(y)) => Some(x.as_bytes().cmp(y.as_bytes())),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Op {
    Eq,
    Neq,
    Lt,
    Gt,
}

impl Op {
    pub fn holds(self, a: &Value, b: &Value) -> bool {
        let Some(o) = cmp(a, b) else { return false };
        match self {
            Op::Eq => o == Ordering::Equal,
            Op::Neq => o != Ordering::Equal,
            Op::Lt => o == Ordering::Less,
            Op::Gt => o == Ordering::Greater,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Eq => "eq",
            Op::Neq => "neq",
            Op::Lt => "lt",
            Op::Gt => "gt",
        }
    }
}

pub fn project(rows: &[Row], cols: &[Key]) -> Vec<Row> {
    rows.iter().map(|r| r.iter().filter(|(k, _)| cols.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect()).collect()
}

pub fn rename(rows: &[Row], from: &[Key], to: &[Key]) -> Vec<Row> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|(k, v)| {
                    let k2 = from.iter().position(|f| f == k).map_or_else(|| k.clone(), |i| to[i].clone());
                    (k2, v.clone())
                })
                .collect()
        })
        .collect()
}

pub fn union(a: &[Row], b: &[Row]) -> Vec<Row> {
    a.iter().chain(b).cloned().collect()
}

pub fn intersection(a: &[Row], b: &[Row]) -> Vec<Row> {
    a.iter().filter(|r| b.contains(r)).cloned().collect()
}

pub fn difference(a: &[Row], b: &[Row]) -> Vec<Row> {
    a.iter().filter(|r| !b.contains(r)).cloned().collect()
}

pub fn select(rows: &[Row], col: &Key, op: Op, literal: &Value) -> Vec<Row> {
    rows.iter().filter(|r| r.get(col).is_some_and(|v| op.holds(v, literal))).cloned().collect()
}

/// Columns of `b` that clash with a column of `a` get the suffix `#B`.
pub fn disambiguate(a: &[Row], b: &[Row]) -> Vec<Row> {
    let a_cols: BTreeSet<&Key> = a.iter().flat_map(|r| r.keys()).collect();
    b.iter()
        .map(|r| {
            r.iter()
                .map(|(k, v)| {
                    let k2 = match k {
                        Key::Str(s) if a_cols.contains(k) => Key::Str(format!("{s}#B")),
                        _ => k.clone(),
                    };
                    (k2, v.clone())
                })
                .collect()
        })
        .collect()
}

fn matching<'a>(ra: &Row, b: &'a [Row], acol: &Key, op: Op, bcol: &Key) -> Vec<usize> {
    let Some(x) = ra.get(acol) else { return vec![] };
    (0..b.len()).filter(|&i| b[i].get(bcol).is_some_and(|y| op.holds(x, y))).collect()
}

/// Nested-loop join, one output row per matching pair.
pub fn join_pairs(a: &[Row], b: &[Row], acol: &Key, op: Op, bcol: &Key) -> Vec<Row> {
    let b2 = disambiguate(a, b);
    let mut out = Vec::new();
    for ra in a {
        for i in matching(ra, b, acol, op, bcol) {
            let mut row = ra.clone();
            row.extend(b2[i].iter().map(|(k, v)| (k.clone(), v.clone())));
            out.push(row);
        }
    }
    out
}

/// Join collapsed per left row: matching right rows are merged cell-wise by
/// maximum.
pub fn join_collapsed(a: &[Row], b: &[Row], acol: &Key, op: Op, bcol: &Key) -> Vec<Row> {
    let b2 = disambiguate(a, b);
    let mut out = Vec::new();
    for ra in a {
        let hits = matching(ra, b, acol, op, bcol);
        if hits.is_empty() {
            continue;
        }
        let mut row = ra.clone();
        for i in hits {
            for (k, v) in &b2[i] {
                match row.get(k) {
                    Some(w) if cmp(w, v) != Some(Ordering::Less) => {}
                    _ => {
                        row.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        out.push(row);
    }
    out
}

fn render(v: &Value) -> String {
    match v {
        Value::Str(s) => s.clone(),
        Value::Int(i) => i.to_string(),
        other => panic!("unexpected cell {other:?}"),
    }
}

/// Per-row `/`-joined rendering of the listed columns, in list order.
pub fn extend_concat(rows: &[Row], cols: &[Key], out: &Key) -> Vec<Row> {
    rows.iter()
        .filter_map(|r| {
            let parts: Vec<String> = cols.iter().filter_map(|c| r.get(c)).map(render).collect();
            (!parts.is_empty()).then(|| Row::from([(out.clone(), Value::Str(parts.join("/")))]))
        })
        .collect()
}

/// Per-row integer sum of the listed columns; zero sums are non-stored.
pub fn extend_sum(rows: &[Row], cols: &[Key], out: &Key) -> Vec<Row> {
    rows.iter()
        .filter_map(|r| {
            let vals: Vec<i64> = cols
                .iter()
                .filter_map(|c| r.get(c))
                .map(|v| match v {
                    Value::Int(i) => *i,
                    other => panic!("sum over {other:?}"),
                })
                .collect();
            let s: i64 = vals.iter().sum();
            (!vals.is_empty() && s != 0).then(|| Row::from([(out.clone(), Value::Int(s))]))
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub enum Agg {
    Count,
    Min,
    Max,
    First,
}

/// Group keyed rows by `group`, reduce `value`. Groups with no stored value
/// are dropped.
pub fn aggregate(rows: &[(Key, Row)], group: &Key, value: &Key, f: Agg) -> Vec<Row> {
    let mut groups: Vec<(Value, Vec<(Key, Option<Value>)>)> = Vec::new();
    for (k, r) in rows {
        let Some(g) = r.get(group) else { continue };
        let entry = (k.clone(), r.get(value).cloned());
        match groups.iter_mut().find(|(gv, _)| gv == g) {
            Some((_, members)) => members.push(entry),
            None => groups.push((g.clone(), vec![entry])),
        }
    }
    let mut out = Vec::new();
    for (g, mut members) in groups {
        members.sort_by(|x, y| x.0.cmp(&y.0));
        let vals: Vec<Value> = members.into_iter().filter_map(|(_, v)| v).collect();
        if vals.is_empty() {
            continue;
        }
        let least = |a: &Value, b: &Value| cmp(a, b).expect("single-kind column");
        let red = match f {
            Agg::Count => Value::Int(vals.len() as i64),
            Agg::Min => vals.iter().min_by(|a, b| least(a, b)).unwrap().clone(),
            Agg::Max => vals.iter().max_by(|a, b| least(a, b)).unwrap().clone(),
            Agg::First => vals[0].clone(),
        };
        out.push(Row::from([(group.clone(), g), (value.clone(), red)]));
    }
    out
}
