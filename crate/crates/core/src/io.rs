//! Deterministic generators and the tab-separated file formats.
//!
//! Triple files:
//!
//! ```text
//! row<TAB>col<TAB>val
//! r1<TAB>c1<TAB>5
//! ```
//!
//! Table files: the first line is an empty cell followed by the column keys,
//! every following line is a row key followed by one cell per column. An
//! empty cell is a non-stored entry. Both formats are UTF-8 with LF endings,
//! and tabs or line breaks inside keys and values are rejected.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::array::AssociativeArray;
use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::value::{Key, Value};

pub const TRIPLE_HEADER: &str = "row\tcol\tval";

/// The song table used throughout the tests and examples.
pub const SONGS_TSV: &str = include_str!("../data/songs.tsv");

/// SplitMix64. Identical seeds give identical streams on every platform.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` by multiply-high; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Seed for the `index`-th independent sub-stream of `seed`.
    pub fn derive(seed: u64, index: u64) -> u64 {
        let mut r = Rng::new(seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
        r.next_u64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValueDist {
    Constant(Value),
    /// Integers uniform in `lo..=hi`.
    UniformInt { lo: i64, hi: i64 },
    /// Reals uniform in `[lo, hi)`.
    UniformReal { lo: f64, hi: f64 },
}

impl Default for ValueDist {
    fn default() -> Self {
        ValueDist::Constant(Value::Int(1))
    }
}

impl ValueDist {
    pub fn sample(&self, rng: &mut Rng) -> Value {
        match self {
            ValueDist::Constant(v) => v.clone(),
            ValueDist::UniformInt { lo, hi } => {
                let span = (hi - lo) as u64 + 1;
                Value::Int(lo + rng.below(span) as i64)
            }
            ValueDist::UniformReal { lo, hi } => Value::Real(lo + (hi - lo) * rng.unit()),
        }
    }
}

/// `n × n` array over integer keys `1..=n` from `round(n·d)` uniform draws;
/// colliding draws are combined with `⊕` of `s`.
pub fn random_array_in(n: usize, d: f64, seed: u64, values: &ValueDist, s: &Semiring) -> Result<AssociativeArray> {
    if n == 0 {
        return Err(Error::InvalidArgument("random_array needs n >= 1".into()));
    }
    if !(d >= 0.0) {
        return Err(Error::InvalidArgument("random_array needs d >= 0".into()));
    }
    let draws = (n as f64 * d).round() as usize;
    let mut rng = Rng::new(seed);
    let (mut i, mut j, mut v) = (Vec::with_capacity(draws), Vec::with_capacity(draws), Vec::with_capacity(draws));
    for _ in 0..draws {
        i.push(Key::Int(rng.below(n as u64) as i64 + 1));
        j.push(Key::Int(rng.below(n as u64) as i64 + 1));
        v.push(values.sample(&mut rng));
    }
    AssociativeArray::construct(&i, &j, &v, s)
}

/// [`random_array_in`] under plus-times.
pub fn random_array(n: usize, d: f64, seed: u64, values: &ValueDist) -> Result<AssociativeArray> {
    random_array_in(n, d, seed, values, &Semiring::plus_times())
}

/// Expected stored entries of [`random_array`] with nonzero constant values:
/// `n²·(1 − (1 − 1/n²)^(n·d))`.
pub fn expected_random_nnz(n: usize, d: f64) -> f64 {
    let cells = (n as f64) * (n as f64);
    let draws = (n as f64 * d).round();
    cells * (1.0 - (1.0 - 1.0 / cells).powf(draws))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Str,
    Int,
}

/// Shape of a generated relation.
#[derive(Clone, Debug)]
pub struct RelationSpec {
    pub rows: usize,
    pub cols: usize,
    pub kind: CellKind,
    /// Number of distinct values per column; small alphabets force
    /// duplicate rows and cross-relation matches.
    pub alphabet: usize,
    /// Probability that a cell is left empty.
    pub holes: f64,
    /// Column key prefix (`c` gives `c0`, `c1`, ...).
    pub col_prefix: String,
    /// Row key prefix.
    pub row_prefix: String,
}

impl Default for RelationSpec {
    fn default() -> Self {
        RelationSpec {
            rows: 8,
            cols: 3,
            kind: CellKind::Str,
            alphabet: 3,
            holes: 0.0,
            col_prefix: "c".into(),
            row_prefix: "r".into(),
        }
    }
}

pub fn relation_cell(kind: CellKind, index: usize) -> Value {
    match kind {
        CellKind::Str => Value::Str(((b'a' + (index % 26) as u8) as char).to_string()),
        CellKind::Int => Value::Int(index as i64 + 1),
    }
}

/// Random relation with string row keys `<prefix>000..` and column keys
/// `<prefix>0..`. Rows that come out entirely empty are not stored.
pub fn random_relation(spec: &RelationSpec, seed: u64) -> Result<AssociativeArray> {
    let mut rng = Rng::new(seed);
    let mut triples = Vec::with_capacity(spec.rows * spec.cols);
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            if spec.holes > 0.0 && rng.unit() < spec.holes {
                continue;
            }
            let v = relation_cell(spec.kind, rng.below(spec.alphabet.max(1) as u64) as usize);
            triples.push((format!("{}{r:03}", spec.row_prefix), format!("{}{c}", spec.col_prefix), v));
        }
    }
    AssociativeArray::from_triples(triples, &Semiring::max_min())
}

/// A cell is numeric iff it parses completely as an integer or as a finite
/// decimal/float literal; everything else stays a string.
pub fn parse_value(text: &str) -> Value {
    if let Ok(i) = text.parse::<i64>() {
        return Value::Int(i);
    }
    if looks_like_float(text) {
        if let Ok(x) = text.parse::<f64>() {
            if x.is_finite() {
                return Value::Real(x);
            }
        }
    }
    Value::Str(text.to_owned())
}

pub fn parse_key(text: &str) -> Key {
    match parse_value(text) {
        Value::Int(i) => Key::Int(i),
        Value::Real(x) => Key::Real(if x == 0.0 { 0.0 } else { x }),
        _ => Key::Str(text.to_owned()),
    }
}

fn looks_like_float(text: &str) -> bool {
    text.bytes().any(|b| b.is_ascii_digit())
        && text.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'))
}

fn check_field(text: &str, line: usize) -> Result<()> {
    if text.contains(['\t', '\n', '\r']) {
        return Err(Error::Parse { line, msg: format!("tab or line break inside `{}`", text.escape_debug()) });
    }
    Ok(())
}

/// Accumulates cells for the readers: numeric duplicates add, string
/// duplicates keep the last value.
struct CellSink {
    order: Vec<(Key, Key)>,
    cells: HashMap<(Key, Key), Value>,
}

impl CellSink {
    fn new() -> Self {
        CellSink { order: Vec::new(), cells: HashMap::new() }
    }

    fn put(&mut self, row: Key, col: Key, v: Value, line: usize) -> Result<()> {
        let key = (row, col);
        match self.cells.get_mut(&key) {
            None => {
                self.order.push(key.clone());
                self.cells.insert(key, v);
            }
            Some(old) => {
                if old.is_numeric() && v.is_numeric() {
                    *old = Semiring::plus_times().plus(old, &v)?;
                } else {
                    log::warn!("line {line}: duplicate cell ({}, {}); keeping the last value", key.0, key.1);
                    *old = v;
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<AssociativeArray> {
        let (mut i, mut j, mut v) = (Vec::new(), Vec::new(), Vec::new());
        let CellSink { order, mut cells } = self;
        for key in order {
            let val = cells.remove(&key).expect("recorded cell");
            // 0 is the non-stored element
            if val.is_numeric_zero() {
                continue;
            }
            i.push(key.0);
            j.push(key.1);
            v.push(val);
        }
        AssociativeArray::construct(&i, &j, &v, &Semiring::max_min())
    }
}

pub fn parse_triples(text: &str) -> Result<AssociativeArray> {
    let mut lines = text.split('\n').enumerate();
    match lines.next() {
        Some((_, h)) if h == TRIPLE_HEADER => {}
        _ => return Err(Error::Parse { line: 1, msg: format!("expected header `{}`", TRIPLE_HEADER.escape_debug()) }),
    }
    let mut sink = CellSink::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: lineno, msg: format!("expected 3 fields, found {}", fields.len()) });
        }
        sink.put(parse_key(fields[0]), parse_key(fields[1]), parse_value(fields[2]), lineno)?;
    }
    sink.finish().map_err(|e| match e {
        Error::MixedKeyTags { .. } => Error::Parse { line: 0, msg: e.to_string() },
        other => other,
    })
}

pub fn format_triples(a: &AssociativeArray) -> Result<String> {
    let mut out = String::with_capacity(16 * a.nnz() + 16);
    out.push_str(TRIPLE_HEADER);
    out.push('\n');
    for (r, c, v) in a.iter() {
        let (r, c, v) = (r.to_string(), c.to_string(), v.to_string());
        for field in [&r, &c, &v] {
            check_field(field, 0)?;
        }
        let _ = writeln!(out, "{r}\t{c}\t{v}");
    }
    Ok(out)
}

pub fn read_triples(path: impl AsRef<Path>) -> Result<AssociativeArray> {
    parse_triples(&fs::read_to_string(path)?)
}

pub fn write_triples(a: &AssociativeArray, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_triples(a)?)?;
    Ok(())
}

pub fn parse_table(text: &str) -> Result<AssociativeArray> {
    let mut lines = text.split('\n').enumerate();
    let Some((_, header)) = lines.next() else {
        return Ok(AssociativeArray::empty());
    };
    let mut head = header.split('\t');
    if head.next() != Some("") {
        return Err(Error::Parse { line: 1, msg: "header must start with an empty cell".into() });
    }
    let cols: Vec<Key> = head.map(parse_key).collect();
    let mut sorted = cols.clone();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Parse { line: 1, msg: format!("duplicate column key `{}`", w[0]) });
    }
    let mut seen_rows = std::collections::HashSet::new();
    let mut sink = CellSink::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != cols.len() + 1 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("ragged row: expected {} cells, found {}", cols.len(), fields.len() - 1),
            });
        }
        let row = parse_key(fields[0]);
        if !seen_rows.insert(row.clone()) {
            return Err(Error::Parse { line: lineno, msg: format!("duplicate row key `{row}`") });
        }
        for (col, cell) in cols.iter().zip(&fields[1..]) {
            if !cell.is_empty() {
                sink.put(row.clone(), col.clone(), parse_value(cell), lineno)?;
            }
        }
    }
    sink.finish()
}

pub fn format_table(a: &AssociativeArray) -> Result<String> {
    let mut out = String::new();
    for c in a.col_keys() {
        let c = c.to_string();
        check_field(&c, 0)?;
        out.push('\t');
        out.push_str(&c);
    }
    out.push('\n');
    for (r, key) in a.row_keys().iter().enumerate() {
        let key = key.to_string();
        check_field(&key, 0)?;
        out.push_str(&key);
        let mut cells = a.row(r).peekable();
        for c in a.col_keys() {
            out.push('\t');
            if let Some((ck, v)) = cells.peek() {
                if *ck == c {
                    let v = v.to_string();
                    check_field(&v, 0)?;
                    out.push_str(&v);
                    cells.next();
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_table(path: impl AsRef<Path>) -> Result<AssociativeArray> {
    parse_table(&fs::read_to_string(path)?)
}

pub fn write_table(a: &AssociativeArray, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_table(a)?)?;
    Ok(())
}

/// The song table, parsed.
pub fn songs() -> AssociativeArray {
    parse_table(SONGS_TSV).expect("bundled song table parses")
}
