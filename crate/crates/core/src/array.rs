//! Sparse associative arrays over arbitrary ordered keys.
//!
//! Storage is CSR over key ranks: sorted unique row keys, sorted unique column
//! keys, per-row offsets, and per-entry column ranks sorted within each row.
//! The representation is canonical, so structural equality is exact equality.
//!
//! Invariants, re-established by every constructor:
//! - no stored value is the zero of the semiring that produced the array;
//! - every row key and every column key has at least one entry;
//! - each axis holds keys of a single tag.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::value::{Key, KeyTag, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ArrayStats {
    pub m: usize,
    pub n: usize,
    pub nnz: usize,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct AssociativeArray {
    rows: Vec<Key>,
    cols: Vec<Key>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<Value>,
}

/// Builds an array row by row over a sorted column universe, then drops
/// columns that ended up unused.
pub(crate) struct Assembler {
    universe: Vec<Key>,
    used: Vec<bool>,
    rows: Vec<Key>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<Value>,
}

impl Assembler {
    pub(crate) fn new(universe: Vec<Key>) -> Self {
        let used = vec![false; universe.len()];
        Assembler {
            universe,
            used,
            rows: Vec::new(),
            row_ptr: vec![0],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Entries must arrive with strictly increasing universe rank.
    pub(crate) fn push(&mut self, col: u32, val: Value) {
        self.used[col as usize] = true;
        self.col_idx.push(col);
        self.vals.push(val);
    }

    /// Close the current row under `key`; an empty row is discarded.
    pub(crate) fn end_row(&mut self, key: &Key) {
        if self.col_idx.len() > *self.row_ptr.last().unwrap() {
            self.rows.push(key.clone());
            self.row_ptr.push(self.col_idx.len());
        }
    }

    pub(crate) fn finish(self) -> AssociativeArray {
        let Assembler { universe, used, rows, row_ptr, mut col_idx, vals } = self;
        let mut remap = vec![u32::MAX; universe.len()];
        let mut cols = Vec::with_capacity(universe.len());
        for (i, key) in universe.into_iter().enumerate() {
            if used[i] {
                remap[i] = cols.len() as u32;
                cols.push(key);
            }
        }
        if cols.len() < remap.len() {
            for c in col_idx.iter_mut() {
                *c = remap[*c as usize];
            }
        }
        AssociativeArray { rows, cols, row_ptr, col_idx, vals }
    }
}

/// Merge two sorted unique key lists; returns the union and the rank of each
/// input key inside it.
fn merge_keys(a: &[Key], b: &[Key]) -> (Vec<Key>, Vec<u32>, Vec<u32>) {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let mut map_a = Vec::with_capacity(a.len());
    let mut map_b = Vec::with_capacity(b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        let rank = out.len() as u32;
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                map_a.push(rank);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                map_b.push(rank);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                map_a.push(rank);
                map_b.push(rank);
                i += 1;
                j += 1;
            }
        }
    }
    (out, map_a, map_b)
}

/// For each key of `a`, its rank in `b` when present.
fn match_keys(a: &[Key], b: &[Key]) -> Vec<Option<u32>> {
    if a.len() * ((usize::BITS - b.len().leading_zeros()) as usize) < b.len() {
        return a.iter().map(|k| b.binary_search(k).ok().map(|j| j as u32)).collect();
    }
    let mut out = vec![None; a.len()];
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out[i] = Some(j as u32);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn homogeneous_tag(keys: &[Key], axis: &'static str) -> Result<Option<KeyTag>> {
    let mut tag = None;
    for k in keys {
        k.validate()?;
        match tag {
            None => tag = Some(k.tag()),
            Some(t) if t != k.tag() => {
                return Err(Error::MixedKeyTags { axis, first: t.name(), second: k.tag().name() });
            }
            _ => {}
        }
    }
    Ok(tag)
}

fn compatible_axes(a: &[Key], b: &[Key], axis: &'static str) -> Result<()> {
    if let (Some(x), Some(y)) = (a.first(), b.first()) {
        if x.tag() != y.tag() {
            return Err(Error::MixedKeyTags { axis, first: x.tag().name(), second: y.tag().name() });
        }
    }
    Ok(())
}

impl AssociativeArray {
    pub fn empty() -> Self {
        AssociativeArray { row_ptr: vec![0], ..Default::default() }
    }

    /// `A = A(I, J, V)`: duplicate `(i, j)` pairs are combined with `⊕` in
    /// input order and results equal to the semiring zero are dropped.
    pub fn construct(i: &[Key], j: &[Key], v: &[Value], s: &Semiring) -> Result<Self> {
        if i.len() != j.len() {
            return Err(Error::LengthMismatch { what: "construct I/J", left: i.len(), right: j.len() });
        }
        if i.len() != v.len() {
            return Err(Error::LengthMismatch { what: "construct I/V", left: i.len(), right: v.len() });
        }
        homogeneous_tag(i, "row")?;
        homogeneous_tag(j, "column")?;
        for val in v {
            s.check(val)?;
        }

        let mut order: Vec<usize> = (0..i.len()).collect();
        order.sort_by(|&x, &y| i[x].cmp(&i[y]).then_with(|| j[x].cmp(&j[y])));

        let mut cols: Vec<Key> = j.to_vec();
        cols.sort_unstable();
        cols.dedup();

        let mut asm = Assembler::new(cols);
        let mut p = 0;
        while p < order.len() {
            let row = &i[order[p]];
            while p < order.len() && i[order[p]] == *row {
                let col = &j[order[p]];
                let mut acc = v[order[p]].clone();
                p += 1;
                while p < order.len() && i[order[p]] == *row && j[order[p]] == *col {
                    acc = s.plus(&acc, &v[order[p]])?;
                    p += 1;
                }
                if !s.is_zero(&acc) {
                    let rank = asm.universe.binary_search(col).expect("column in universe");
                    asm.push(rank as u32, acc);
                }
            }
            asm.end_row(row);
        }
        Ok(asm.finish())
    }

    /// Build from `(row, col, value)` triples.
    pub fn from_triples<R, C, V>(triples: impl IntoIterator<Item = (R, C, V)>, s: &Semiring) -> Result<Self>
    where
        R: Into<Key>,
        C: Into<Key>,
        V: Into<Value>,
    {
        let (mut i, mut j, mut v) = (Vec::new(), Vec::new(), Vec::new());
        for (r, c, x) in triples {
            i.push(r.into());
            j.push(c.into());
            v.push(x.into());
        }
        Self::construct(&i, &j, &v, s)
    }

    /// `𝕀(J, J2)`: entries `(J[p], J2[p]) → 1` for each position `p`.
    pub fn identity(j: &[Key], j2: &[Key], s: &Semiring) -> Result<Self> {
        if j.len() != j2.len() {
            return Err(Error::LengthMismatch { what: "identity keys", left: j.len(), right: j2.len() });
        }
        for list in [j, j2] {
            let mut sorted = list.to_vec();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateKey(w[0].to_string()));
            }
        }
        let ones = vec![s.one().clone(); j.len()];
        Self::construct(j, j2, &ones, s)
    }

    pub fn stats(&self) -> ArrayStats {
        ArrayStats { m: self.rows.len(), n: self.cols.len(), nnz: self.vals.len() }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// Sorted nonzero row keys `I_A`.
    pub fn row_keys(&self) -> &[Key] {
        &self.rows
    }

    pub fn col_keys(&self) -> &[Key] {
        &self.cols
    }

    pub fn row_index(&self, key: &Key) -> Option<usize> {
        self.rows.binary_search(key).ok()
    }

    pub fn col_index(&self, key: &Key) -> Option<usize> {
        self.cols.binary_search(key).ok()
    }

    pub(crate) fn row_range(&self, r: usize) -> Range<usize> {
        self.row_ptr[r]..self.row_ptr[r + 1]
    }

    /// Stored `(column key, value)` pairs of row `r`, in column order.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (&Key, &Value)> + '_ {
        self.row_range(r).map(move |p| (&self.cols[self.col_idx[p] as usize], &self.vals[p]))
    }

    pub(crate) fn row_ranks(&self, r: usize) -> impl Iterator<Item = (u32, &Value)> + '_ {
        self.row_range(r).map(move |p| (self.col_idx[p], &self.vals[p]))
    }

    pub fn get(&self, row: &Key, col: &Key) -> Option<&Value> {
        let r = self.row_index(row)?;
        let c = self.col_index(col)? as u32;
        let range = self.row_range(r);
        let pos = self.col_idx[range.clone()].binary_search(&c).ok()?;
        Some(&self.vals[range.start + pos])
    }

    /// Value at `(row rank, column key)`.
    pub fn cell(&self, r: usize, col: &Key) -> Option<&Value> {
        let c = self.col_index(col)? as u32;
        let range = self.row_range(r);
        let pos = self.col_idx[range.clone()].binary_search(&c).ok()?;
        Some(&self.vals[range.start + pos])
    }

    /// Row-major iteration over stored entries.
    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Key, &Value)> + '_ {
        (0..self.rows.len()).flat_map(move |r| self.row(r).map(move |(c, v)| (&self.rows[r], c, v)))
    }

    /// The triple vectors `(I, J, V)` in row-major order.
    pub fn triples(&self) -> (Vec<Key>, Vec<Key>, Vec<Value>) {
        let mut i = Vec::with_capacity(self.nnz());
        let mut j = Vec::with_capacity(self.nnz());
        for (r, c, _) in self.iter() {
            i.push(r.clone());
            j.push(c.clone());
        }
        (i, j, self.vals.clone())
    }

    pub fn values(&self) -> &[Value] {
        &self.vals
    }

    /// Exact equality: identical key sets and identical entries.
    pub fn equal_exact(&self, other: &AssociativeArray) -> bool {
        self == other
    }

    /// Same structure, numeric values within `rel_tol` relative deviation.
    /// Returns the largest relative deviation, or `None` if the key
    /// structure or any non-numeric value differs.
    pub fn max_deviation(&self, other: &AssociativeArray) -> Option<f64> {
        if self.rows != other.rows
            || self.cols != other.cols
            || self.row_ptr != other.row_ptr
            || self.col_idx != other.col_idx
        {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.vals.iter().zip(&other.vals) {
            match (a, b) {
                (Value::Real(_), _) | (_, Value::Real(_)) => {
                    let (x, y) = (a.as_f64()?, b.as_f64()?);
                    let dev = (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
                    worst = worst.max(dev);
                }
                _ if a == b => {}
                _ => return None,
            }
        }
        Some(worst)
    }

    pub fn transpose(&self) -> AssociativeArray {
        let n = self.cols.len();
        let mut ptr = vec![0usize; n + 1];
        for &c in &self.col_idx {
            ptr[c as usize + 1] += 1;
        }
        for c in 0..n {
            ptr[c + 1] += ptr[c];
        }
        let mut next = ptr.clone();
        let mut idx = vec![0u32; self.nnz()];
        let mut slots: Vec<Option<Value>> = vec![None; self.nnz()];
        for r in 0..self.rows.len() {
            for p in self.row_range(r) {
                let c = self.col_idx[p] as usize;
                idx[next[c]] = r as u32;
                slots[next[c]] = Some(self.vals[p].clone());
                next[c] += 1;
            }
        }
        AssociativeArray {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            row_ptr: ptr,
            col_idx: idx,
            vals: slots.into_iter().map(|v| v.expect("every slot filled")).collect(),
        }
    }

    fn check_carrier(&self, s: &Semiring) -> Result<()> {
        self.vals.iter().try_for_each(|v| s.check(v))
    }

    /// `C = A ⊕ B`; absent entries act as zero, key sets are unioned.
    pub fn ew_add(&self, other: &AssociativeArray, s: &Semiring) -> Result<AssociativeArray> {
        compatible_axes(&self.rows, &other.rows, "row")?;
        compatible_axes(&self.cols, &other.cols, "column")?;
        self.check_carrier(s)?;
        other.check_carrier(s)?;

        let (cols, map_a, map_b) = merge_keys(&self.cols, &other.cols);
        let mut asm = Assembler::new(cols);
        let (a, b) = (self, other);
        let (mut ra, mut rb) = (0, 0);
        while ra < a.rows.len() || rb < b.rows.len() {
            let ord = match (a.rows.get(ra), b.rows.get(rb)) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    for (c, v) in a.row_ranks(ra) {
                        if !s.is_zero(v) {
                            asm.push(map_a[c as usize], v.clone());
                        }
                    }
                    asm.end_row(&a.rows[ra]);
                    ra += 1;
                }
                Ordering::Greater => {
                    for (c, v) in b.row_ranks(rb) {
                        if !s.is_zero(v) {
                            asm.push(map_b[c as usize], v.clone());
                        }
                    }
                    asm.end_row(&b.rows[rb]);
                    rb += 1;
                }
                Ordering::Equal => {
                    let (ia, ib) = (a.row_range(ra), b.row_range(rb));
                    let (mut p, mut q) = (ia.start, ib.start);
                    while p < ia.end || q < ib.end {
                        let ca = (p < ia.end).then(|| map_a[a.col_idx[p] as usize]);
                        let cb = (q < ib.end).then(|| map_b[b.col_idx[q] as usize]);
                        match (ca, cb) {
                            (Some(x), Some(y)) if x == y => {
                                let sum = s.plus(&a.vals[p], &b.vals[q])?;
                                if !s.is_zero(&sum) {
                                    asm.push(x, sum);
                                }
                                p += 1;
                                q += 1;
                            }
                            (Some(x), Some(y)) if x < y => {
                                if !s.is_zero(&a.vals[p]) {
                                    asm.push(x, a.vals[p].clone());
                                }
                                p += 1;
                            }
                            (Some(x), None) => {
                                if !s.is_zero(&a.vals[p]) {
                                    asm.push(x, a.vals[p].clone());
                                }
                                p += 1;
                            }
                            (_, Some(y)) => {
                                if !s.is_zero(&b.vals[q]) {
                                    asm.push(y, b.vals[q].clone());
                                }
                                q += 1;
                            }
                            (None, None) => unreachable!(),
                        }
                    }
                    asm.end_row(&a.rows[ra]);
                    ra += 1;
                    rb += 1;
                }
            }
        }
        Ok(asm.finish())
    }

    /// `C = A ⊗ B`; the support is the intersection of supports.
    pub fn ew_mult(&self, other: &AssociativeArray, s: &Semiring) -> Result<AssociativeArray> {
        let (cols, map_a, map_b) = merge_keys(&self.cols, &other.cols);
        let row_match = match_keys(&self.rows, &other.rows);
        let mut asm = Assembler::new(cols);
        for (ra, rb) in row_match.iter().enumerate() {
            let Some(rb) = rb else { continue };
            let (ia, ib) = (self.row_range(ra), other.row_range(*rb as usize));
            let (mut p, mut q) = (ia.start, ib.start);
            while p < ia.end && q < ib.end {
                let x = map_a[self.col_idx[p] as usize];
                let y = map_b[other.col_idx[q] as usize];
                match x.cmp(&y) {
                    Ordering::Less => p += 1,
                    Ordering::Greater => q += 1,
                    Ordering::Equal => {
                        let prod = s.times(&self.vals[p], &other.vals[q])?;
                        if !s.is_zero(&prod) {
                            asm.push(x, prod);
                        }
                        p += 1;
                        q += 1;
                    }
                }
            }
            asm.end_row(&self.rows[ra]);
        }
        Ok(asm.finish())
    }

    /// `C = A ⊕.⊗ B`, `C(i, j) = ⊕_k A(i, k) ⊗ B(k, j)` over inner keys
    /// present in both arrays. Row-by-row (Gustavson) with a dense
    /// accumulator over B's columns; the first product seeds each sum.
    pub fn array_mult(&self, other: &AssociativeArray, s: &Semiring) -> Result<AssociativeArray> {
        let inner = match_keys(&self.cols, &other.rows);
        let mut acc: Vec<Option<Value>> = vec![None; other.cols.len()];
        let mut touched: Vec<u32> = Vec::new();
        let mut asm = Assembler::new(other.cols.clone());
        for r in 0..self.rows.len() {
            for p in self.row_range(r) {
                let Some(k) = inner[self.col_idx[p] as usize] else { continue };
                let av = &self.vals[p];
                for q in other.row_range(k as usize) {
                    let j = other.col_idx[q];
                    let prod = s.times(av, &other.vals[q])?;
                    let slot = &mut acc[j as usize];
                    *slot = Some(match slot.take() {
                        None => {
                            touched.push(j);
                            prod
                        }
                        Some(sum) => s.plus(&sum, &prod)?,
                    });
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                let v = acc[j as usize].take().expect("touched slot");
                if !s.is_zero(&v) {
                    asm.push(j, v);
                }
            }
            touched.clear();
            asm.end_row(&self.rows[r]);
        }
        Ok(asm.finish())
    }

    /// Restriction `A(I, J)`; `None` selects everything on that axis. Keys
    /// not present in the array are ignored.
    pub fn select_sub(&self, rows: Option<&[Key]>, cols: Option<&[Key]>) -> Result<AssociativeArray> {
        let row_keep = match rows {
            None => None,
            Some(sel) => {
                homogeneous_tag(sel, "row selector")?;
                let mut keep = vec![false; self.rows.len()];
                for k in sel {
                    if let Some(r) = self.row_index(k) {
                        keep[r] = true;
                    }
                }
                Some(keep)
            }
        };
        let col_keep = match cols {
            None => None,
            Some(sel) => {
                homogeneous_tag(sel, "column selector")?;
                let mut keep = vec![false; self.cols.len()];
                for k in sel {
                    if let Some(c) = self.col_index(k) {
                        keep[c] = true;
                    }
                }
                Some(keep)
            }
        };
        let mut asm = Assembler::new(self.cols.clone());
        for r in 0..self.rows.len() {
            if row_keep.as_ref().is_some_and(|k| !k[r]) {
                continue;
            }
            for (c, v) in self.row_ranks(r) {
                if col_keep.as_ref().is_none_or(|k| k[c as usize]) {
                    asm.push(c, v.clone());
                }
            }
            asm.end_row(&self.rows[r]);
        }
        Ok(asm.finish())
    }

    /// Same support, every stored value replaced by `v`.
    pub fn pattern(&self, v: &Value) -> AssociativeArray {
        AssociativeArray { vals: vec![v.clone(); self.nnz()], ..self.clone() }
    }

    /// Apply `f` to each stored value, dropping results equal to `s`'s zero.
    pub fn map_values(
        &self,
        s: &Semiring,
        mut f: impl FnMut(&Value) -> Result<Value>,
    ) -> Result<AssociativeArray> {
        let mut asm = Assembler::new(self.cols.clone());
        for r in 0..self.rows.len() {
            for (c, v) in self.row_ranks(r) {
                let out = f(v)?;
                if !s.is_zero(&out) {
                    asm.push(c, out);
                }
            }
            asm.end_row(&self.rows[r]);
        }
        Ok(asm.finish())
    }

    /// Element-wise additive inverse.
    pub fn negate(&self, s: &Semiring) -> Result<AssociativeArray> {
        self.map_values(s, |v| s.neg(v))
    }

    /// Relabel rows: row `r` gets `keys[r]`. Rows are re-sorted under the new
    /// keys, which must be unique and of one tag.
    pub fn with_row_keys(&self, keys: Vec<Key>) -> Result<AssociativeArray> {
        if keys.len() != self.rows.len() {
            return Err(Error::LengthMismatch { what: "row relabel", left: keys.len(), right: self.rows.len() });
        }
        homogeneous_tag(&keys, "row")?;
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        if let Some(w) = order.windows(2).find(|w| keys[w[0]] == keys[w[1]]) {
            return Err(Error::DuplicateKey(keys[w[0]].to_string()));
        }
        let mut asm = Assembler::new(self.cols.clone());
        for &r in &order {
            for (c, v) in self.row_ranks(r) {
                asm.push(c, v.clone());
            }
            asm.end_row(&keys[r]);
        }
        Ok(asm.finish())
    }

    /// Check the stored-form invariants against `s`.
    pub fn validate(&self, s: &Semiring) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidArgument(msg.to_owned()));
        if self.rows.windows(2).any(|w| w[0] >= w[1]) {
            return fail("row keys not strictly sorted");
        }
        if self.cols.windows(2).any(|w| w[0] >= w[1]) {
            return fail("column keys not strictly sorted");
        }
        homogeneous_tag(&self.rows, "row")?;
        homogeneous_tag(&self.cols, "column")?;
        let mut col_used = vec![false; self.cols.len()];
        for r in 0..self.rows.len() {
            let range = self.row_range(r);
            if range.is_empty() {
                return fail("empty stored row");
            }
            if self.col_idx[range.clone()].windows(2).any(|w| w[0] >= w[1]) {
                return fail("row entries not sorted");
            }
            for p in range {
                col_used[self.col_idx[p] as usize] = true;
                if s.is_zero(&self.vals[p]) {
                    return fail("stored zero");
                }
            }
        }
        if col_used.iter().any(|u| !u) {
            return fail("empty stored column");
        }
        Ok(())
    }
}

impl fmt::Display for AssociativeArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cols {
            write!(f, "\t{c}")?;
        }
        writeln!(f)?;
        for r in 0..self.rows.len() {
            write!(f, "{}", self.rows[r])?;
            let mut p = self.row_range(r).peekable();
            for c in 0..self.cols.len() {
                f.write_str("\t")?;
                if let Some(&q) = p.peek() {
                    if self.col_idx[q] as usize == c {
                        write!(f, "{}", self.vals[q])?;
                        p.next();
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::get_semiring;

    fn pt() -> Semiring {
        get_semiring("plus-times").unwrap()
    }

    fn keys(names: &[&str]) -> Vec<Key> {
        names.iter().map(|s| Key::from(*s)).collect()
    }

    #[test]
    fn construct_combines_duplicates_with_plus() {
        let a = AssociativeArray::from_triples([("r1", "c1", 2i64), ("r1", "c1", 3)], &pt()).unwrap();
        assert_eq!(a.stats(), ArrayStats { m: 1, n: 1, nnz: 1 });
        assert_eq!(a.get(&"r1".into(), &"c1".into()), Some(&Value::Int(5)));
    }

    #[test]
    fn construct_drops_zero_rows_and_columns() {
        let a = AssociativeArray::from_triples([("r1", "c1", 1i64), ("r2", "c2", 0)], &pt()).unwrap();
        assert_eq!(a.row_keys(), keys(&["r1"]).as_slice());
        assert_eq!(a.col_keys(), keys(&["c1"]).as_slice());
        a.validate(&pt()).unwrap();
    }

    #[test]
    fn construct_errors() {
        let s = pt();
        let e = AssociativeArray::construct(&keys(&["a"]), &[], &[], &s);
        assert!(matches!(e, Err(Error::LengthMismatch { .. })));
        let e = AssociativeArray::construct(
            &[Key::from("a"), Key::Int(1)],
            &keys(&["x", "y"]),
            &[Value::Int(1), Value::Int(1)],
            &s,
        );
        assert!(matches!(e, Err(Error::MixedKeyTags { .. })));
        let e = AssociativeArray::construct(&keys(&["a"]), &keys(&["x"]), &[Value::str("s")], &s);
        assert!(matches!(e, Err(Error::Carrier { .. })));
        let e = AssociativeArray::construct(&[Key::Real(f64::NAN)], &keys(&["x"]), &[Value::Int(1)], &s);
        assert!(matches!(e, Err(Error::InvalidKey(_))));
    }

    #[test]
    fn empty_array_stats() {
        let e = AssociativeArray::empty();
        assert_eq!(e.stats(), ArrayStats::default());
        assert!(e.row_keys().is_empty());
        assert_eq!(e.transpose(), e);
    }

    #[test]
    fn transpose_swaps_entries() {
        let a = AssociativeArray::from_triples([("a", "b", 7i64)], &pt()).unwrap();
        let t = a.transpose();
        assert_eq!(t.get(&"b".into(), &"a".into()), Some(&Value::Int(7)));
        assert_eq!(t.transpose(), a);
    }

    #[test]
    fn ew_add_examples() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "c", 2i64)], &s).unwrap();
        assert_eq!(a.ew_add(&AssociativeArray::empty(), &s).unwrap(), a);
        let b = AssociativeArray::from_triples([("r", "c", -2i64)], &s).unwrap();
        assert!(a.ew_add(&b, &s).unwrap().is_empty());
        let d = AssociativeArray::from_triples([("q", "d", 4i64)], &s).unwrap();
        let u = a.ew_add(&d, &s).unwrap();
        assert_eq!(u.nnz(), 2);
        assert_eq!(u.get(&"q".into(), &"d".into()), Some(&Value::Int(4)));
    }

    #[test]
    fn ew_add_rejects_mixed_axis_tags() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "c", 2i64)], &s).unwrap();
        let b = AssociativeArray::from_triples([(1i64, "c", 2i64)], &s).unwrap();
        assert!(matches!(a.ew_add(&b, &s), Err(Error::MixedKeyTags { .. })));
    }

    #[test]
    fn ew_mult_examples() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "c", 2i64)], &s).unwrap();
        let b = AssociativeArray::from_triples([("r", "c", 3i64)], &s).unwrap();
        assert_eq!(a.ew_mult(&AssociativeArray::empty(), &s).unwrap(), AssociativeArray::empty());
        assert_eq!(a.ew_mult(&b, &s).unwrap().get(&"r".into(), &"c".into()), Some(&Value::Int(6)));
        let d = AssociativeArray::from_triples([("r", "d", 3i64)], &s).unwrap();
        assert!(a.ew_mult(&d, &s).unwrap().is_empty());
    }

    #[test]
    fn array_mult_sums_over_shared_inner_keys() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "k1", 1i64), ("r", "k2", 2)], &s).unwrap();
        let b = AssociativeArray::from_triples([("k1", "c", 3i64), ("k2", "c", 4)], &s).unwrap();
        let c = a.array_mult(&b, &s).unwrap();
        assert_eq!(c.stats(), ArrayStats { m: 1, n: 1, nnz: 1 });
        assert_eq!(c.get(&"r".into(), &"c".into()), Some(&Value::Int(11)));
    }

    #[test]
    fn array_mult_by_identity_is_identity() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "x", 5i64), ("q", "y", 6)], &s).unwrap();
        let i = AssociativeArray::identity(a.col_keys(), a.col_keys(), &s).unwrap();
        assert_eq!(a.array_mult(&i, &s).unwrap(), a);
    }

    #[test]
    fn and_eq_product_of_equal_rows() {
        let s = get_semiring("and-eq").unwrap();
        let a = AssociativeArray::from_triples([("rA", "x", "u"), ("rA", "y", "v")], &s).unwrap();
        let b = AssociativeArray::from_triples([("rB", "x", "u"), ("rB", "y", "v")], &s).unwrap();
        let p = a.array_mult(&b.transpose(), &s).unwrap();
        assert_eq!(p.get(&"rA".into(), &"rB".into()), Some(&Value::Bool(true)));
        assert_eq!(p.nnz(), 1);
        let c = AssociativeArray::from_triples([("rC", "x", "u"), ("rC", "y", "w")], &s).unwrap();
        assert!(a.array_mult(&c.transpose(), &s).unwrap().is_empty());
    }

    #[test]
    fn identity_examples() {
        let s = pt();
        let i = AssociativeArray::identity(&keys(&["a", "b"]), &keys(&["a", "b"]), &s).unwrap();
        assert_eq!(i.nnz(), 2);
        assert_eq!(i.get(&"b".into(), &"b".into()), Some(&Value::Int(1)));
        let r = AssociativeArray::identity(&keys(&["Artist"]), &keys(&["Performer"]), &s).unwrap();
        assert_eq!(r.get(&"Artist".into(), &"Performer".into()), Some(&Value::Int(1)));

        let j = keys(&["a", "b", "c"]);
        let j2 = keys(&["z", "y", "x"]);
        let fwd = AssociativeArray::identity(&j, &j2, &s).unwrap();
        let back = AssociativeArray::identity(&j2, &j, &s).unwrap();
        let id = AssociativeArray::identity(&j, &j, &s).unwrap();
        assert_eq!(fwd.array_mult(&back, &s).unwrap(), id);

        assert!(matches!(
            AssociativeArray::identity(&keys(&["a"]), &keys(&["a", "b"]), &s),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            AssociativeArray::identity(&keys(&["a", "a"]), &keys(&["x", "y"]), &s),
            Err(Error::DuplicateKey(_))
        ));
    }

    #[test]
    fn select_sub_examples() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "x", 1i64), ("q", "y", 2)], &s).unwrap();
        assert_eq!(a.select_sub(None, Some(a.col_keys())).unwrap(), a);
        assert!(a.select_sub(None, Some(&keys(&["absent"]))).unwrap().is_empty());
        let only_x = a.select_sub(None, Some(&keys(&["x"]))).unwrap();
        assert_eq!(only_x.row_keys(), keys(&["r"]).as_slice());
        let mixed = [Key::from("x"), Key::Int(1)];
        assert!(a.select_sub(None, Some(&mixed)).is_err());
    }

    #[test]
    fn equal_exact_is_key_sensitive() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "x", 1i64), ("q", "y", 2)], &s).unwrap();
        assert!(a.equal_exact(&a.clone()));
        let b = AssociativeArray::from_triples([("r", "x", 1i64), ("q", "y", 3)], &s).unwrap();
        assert!(!a.equal_exact(&b));
        let relabelled = a.with_row_keys(keys(&["p", "s"])).unwrap();
        assert!(!a.equal_exact(&relabelled));
    }

    #[test]
    fn nonzero_rows_drop_after_cancellation() {
        let s = pt();
        let a = AssociativeArray::from_triples([("r", "x", 1i64), ("q", "y", 2)], &s).unwrap();
        let kill = AssociativeArray::from_triples([("q", "y", -2i64)], &s).unwrap();
        let b = a.ew_add(&kill, &s).unwrap();
        assert_eq!(b.row_keys(), keys(&["r"]).as_slice());
        assert_eq!(b.col_keys(), keys(&["x"]).as_slice());
    }
}
