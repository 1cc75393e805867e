//! Seeded law checks over random arrays and relations.

use std::fmt;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::array::AssociativeArray;
use crate::error::{Error, Result};
use crate::io::{random_array_in, random_relation, CellKind, RelationSpec, Rng, ValueDist};
use crate::relational::{equivalent, intersection, rename, union};
use crate::semiring::{Semiring, ValueKind};
use crate::value::{Key, Value};

pub const PROPERTY_NAMES: [&str; 15] = [
    "ew-add-commute",
    "ew-mult-commute",
    "ew-add-assoc",
    "ew-mult-assoc",
    "mult-assoc",
    "mult-distribute",
    "ew-mult-distribute",
    "transpose-product",
    "add-identity",
    "mult-identity",
    "array-mult-identity",
    "mult-annihilator",
    "add-inverse",
    "rename-distributes-union",
    "rename-distributes-intersection",
];

/// Value domain of the generated arrays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    /// Small integers; results must match exactly.
    Int,
    /// Reals in `[0.5, 2)`; results must match within `1e-9` relative.
    Real,
}

pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    /// Trial seed; `replay` with it reproduces the failure.
    pub seed: u64,
    pub lhs: String,
    pub rhs: String,
    /// Largest relative deviation for real carriers, `None` when the key
    /// structure differs or the trial errored.
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub name: String,
    pub semiring: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `name<TAB>semiring<TAB>trials<TAB>failures[<TAB>note]`
impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.name, self.semiring, self.trials, self.failures.len())?;
        if let Some(n) = &self.note {
            write!(f, "\t{n}")?;
        }
        Ok(())
    }
}

fn digest(a: &AssociativeArray) -> String {
    let h = Sha256::digest(a.to_string().as_bytes());
    h.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn values_for(s: &Semiring, carrier: Carrier) -> ValueDist {
    match (s.value_kind(), carrier) {
        (ValueKind::Boolean, _) => ValueDist::Constant(Value::Bool(true)),
        (_, Carrier::Int) => ValueDist::UniformInt { lo: -9, hi: 9 },
        (_, Carrier::Real) => ValueDist::UniformReal { lo: 0.5, hi: 2.0 },
    }
}

struct Trial<'a> {
    rng: Rng,
    s: &'a Semiring,
    values: ValueDist,
}

impl Trial<'_> {
    /// Random array over integer keys `1..=n`, `8 ≤ n ≤ 64`, 8 entries per
    /// row on average.
    fn array(&mut self) -> Result<AssociativeArray> {
        let n = 8 + self.rng.below(57) as usize;
        let seed = self.rng.next_u64();
        random_array_in(n, 8.0, seed, &self.values, self.s)
    }

    fn relation(&mut self, cols: usize) -> Result<AssociativeArray> {
        let spec = RelationSpec {
            rows: 1 + self.rng.below(32) as usize,
            cols,
            kind: if self.rng.below(2) == 0 { CellKind::Str } else { CellKind::Int },
            alphabet: 2 + self.rng.below(3) as usize,
            holes: 0.1,
            ..RelationSpec::default()
        };
        let seed = self.rng.next_u64();
        random_relation(&spec, seed)
    }
}

enum Outcome {
    Arrays(AssociativeArray, AssociativeArray),
    Relations { lhs: AssociativeArray, rhs: AssociativeArray, strict: bool },
}

fn run_law(name: &str, t: &mut Trial<'_>) -> Result<Vec<Outcome>> {
    let s = t.s;
    let arrays = |l: AssociativeArray, r: AssociativeArray| Ok(vec![Outcome::Arrays(l, r)]);
    match name {
        "ew-add-commute" => {
            let (a, b) = (t.array()?, t.array()?);
            arrays(a.ew_add(&b, s)?, b.ew_add(&a, s)?)
        }
        "ew-mult-commute" => {
            let (a, b) = (t.array()?, t.array()?);
            arrays(a.ew_mult(&b, s)?, b.ew_mult(&a, s)?)
        }
        "ew-add-assoc" => {
            let (a, b, c) = (t.array()?, t.array()?, t.array()?);
            arrays(a.ew_add(&b, s)?.ew_add(&c, s)?, a.ew_add(&b.ew_add(&c, s)?, s)?)
        }
        "ew-mult-assoc" => {
            let (a, b, c) = (t.array()?, t.array()?, t.array()?);
            arrays(a.ew_mult(&b, s)?.ew_mult(&c, s)?, a.ew_mult(&b.ew_mult(&c, s)?, s)?)
        }
        "mult-assoc" => {
            let (a, b, c) = (t.array()?, t.array()?, t.array()?);
            arrays(a.array_mult(&b, s)?.array_mult(&c, s)?, a.array_mult(&b.array_mult(&c, s)?, s)?)
        }
        "mult-distribute" => {
            let (a, b, c) = (t.array()?, t.array()?, t.array()?);
            let bc = b.ew_add(&c, s)?;
            Ok(vec![
                Outcome::Arrays(a.array_mult(&bc, s)?, a.array_mult(&b, s)?.ew_add(&a.array_mult(&c, s)?, s)?),
                Outcome::Arrays(bc.array_mult(&a, s)?, b.array_mult(&a, s)?.ew_add(&c.array_mult(&a, s)?, s)?),
            ])
        }
        "ew-mult-distribute" => {
            let (a, b, c) = (t.array()?, t.array()?, t.array()?);
            arrays(a.ew_mult(&b.ew_add(&c, s)?, s)?, a.ew_mult(&b, s)?.ew_add(&a.ew_mult(&c, s)?, s)?)
        }
        "transpose-product" => {
            let (a, b) = (t.array()?, t.array()?);
            arrays(a.array_mult(&b, s)?.transpose(), b.transpose().array_mult(&a.transpose(), s)?)
        }
        "add-identity" => {
            let a = t.array()?;
            arrays(a.ew_add(&AssociativeArray::empty(), s)?, a)
        }
        "mult-identity" => {
            let a = t.array()?;
            arrays(a.ew_mult(&a.pattern(s.one()), s)?, a)
        }
        "array-mult-identity" => {
            let a = t.array()?;
            let right = AssociativeArray::identity(a.col_keys(), a.col_keys(), s)?;
            let left = AssociativeArray::identity(a.row_keys(), a.row_keys(), s)?;
            Ok(vec![
                Outcome::Arrays(a.array_mult(&right, s)?, a.clone()),
                Outcome::Arrays(left.array_mult(&a, s)?, a),
            ])
        }
        "mult-annihilator" => {
            let a = t.array()?;
            let e = AssociativeArray::empty();
            Ok(vec![
                Outcome::Arrays(a.ew_mult(&e, s)?, e.clone()),
                Outcome::Arrays(a.array_mult(&e, s)?, e.clone()),
                Outcome::Arrays(e.array_mult(&a, s)?, e),
            ])
        }
        "add-inverse" => {
            let a = t.array()?;
            arrays(a.ew_add(&a.negate(s)?, s)?, AssociativeArray::empty())
        }
        "rename-distributes-union" | "rename-distributes-intersection" => {
            let cols = 1 + t.rng.below(6) as usize;
            let (a, b) = (t.relation(cols)?, t.relation(cols)?);
            let from: Vec<Key> = (0..cols).map(|c| Key::Str(format!("c{c}"))).collect();
            let mut to: Vec<Key> = (0..cols).map(|c| Key::Str(format!("n{c}"))).collect();
            for i in (1..to.len()).rev() {
                let j = t.rng.below(i as u64 + 1) as usize;
                to.swap(i, j);
            }
            let r = |x: &AssociativeArray| rename(x, &from, &to);
            let (lhs, rhs, strict) = if name == "rename-distributes-union" {
                (r(&union(&a, &b)?)?, union(&r(&a)?, &r(&b)?)?, true)
            } else {
                (r(&intersection(&a, &b)?)?, intersection(&r(&a)?, &r(&b)?)?, false)
            };
            Ok(vec![Outcome::Relations { lhs, rhs, strict }])
        }
        other => Err(Error::UnknownProperty(other.to_owned())),
    }
}

fn judge(seed: u64, outcomes: Vec<Outcome>, carrier: Carrier) -> Option<Failure> {
    for o in outcomes {
        let (l, r, ok, dev) = match o {
            Outcome::Arrays(l, r) => match carrier {
                Carrier::Int => {
                    let ok = l.equal_exact(&r);
                    (l, r, ok, None)
                }
                Carrier::Real => {
                    let dev = l.max_deviation(&r);
                    (l, r, dev.is_some_and(|d| d <= REAL_TOLERANCE), dev)
                }
            },
            Outcome::Relations { lhs, rhs, strict } => {
                let ok = equivalent(&lhs, &rhs, strict);
                (lhs, rhs, ok, None)
            }
        };
        if !ok {
            return Some(Failure { seed, lhs: digest(&l), rhs: digest(&r), max_deviation: dev });
        }
    }
    None
}

fn trial(name: &str, s: &Semiring, seed: u64, carrier: Carrier) -> Option<Failure> {
    let mut t = Trial { rng: Rng::new(seed), s, values: values_for(s, carrier) };
    match run_law(name, &mut t) {
        Ok(outcomes) => judge(seed, outcomes, carrier),
        Err(e) => Some(Failure { seed, lhs: format!("error: {e}"), rhs: String::new(), max_deviation: None }),
    }
}

/// Re-run a single trial by its seed.
pub fn replay(name: &str, s: &Semiring, seed: u64, carrier: Carrier) -> Result<Option<Failure>> {
    if !PROPERTY_NAMES.contains(&name) {
        return Err(Error::UnknownProperty(name.to_owned()));
    }
    Ok(trial(name, s, seed, carrier))
}

/// [`check_property_with`] on the integer carrier.
pub fn check_property(name: &str, s: &Semiring, trials: usize, seed: u64) -> Result<PropertyReport> {
    check_property_with(name, s, trials, seed, Carrier::Int)
}

/// Run `trials` independent trials of a law. Trial `t` uses the seed
/// derived from `(seed, t)`, so results do not depend on scheduling.
pub fn check_property_with(
    name: &str,
    s: &Semiring,
    trials: usize,
    seed: u64,
    carrier: Carrier,
) -> Result<PropertyReport> {
    if !PROPERTY_NAMES.contains(&name) {
        return Err(Error::UnknownProperty(name.to_owned()));
    }
    let mut report = PropertyReport {
        name: name.to_owned(),
        semiring: s.name().to_owned(),
        trials,
        failures: Vec::new(),
        note: None,
    };
    if name == "add-inverse" && !s.has_plus_inverse() {
        report.note = Some(format!("capability: {} has no additive inverse", s.name()));
        return Ok(report);
    }
    if carrier == Carrier::Real && s.value_kind() == ValueKind::Boolean {
        report.note = Some("boolean carrier; real trials skipped".into());
        return Ok(report);
    }
    report.failures = (0..trials as u64)
        .into_par_iter()
        .filter_map(|t| trial(name, s, Rng::derive(seed, t), carrier))
        .collect();
    Ok(report)
}
