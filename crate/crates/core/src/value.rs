//! Row/column keys and stored values.
//!
//! Keys are drawn from one of three strictly ordered domains. Each axis of an
//! array uses a single domain; the cross-tag ordering below only exists so
//! that `Key` can implement `Ord`.
//!
//! Values are a tagged scalar. `NegInf`/`PosInf` are the sentinels used by
//! the tropical and lattice semirings; they coincide with those semirings'
//! zero and are never stored in an array under them.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyTag {
    Int,
    Real,
    Str,
}

impl KeyTag {
    pub fn name(self) -> &'static str {
        match self {
            KeyTag::Int => "int",
            KeyTag::Real => "real",
            KeyTag::Str => "string",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Key {
    Int(i64),
    Real(f64),
    Str(String),
}

impl Key {
    pub fn tag(&self) -> KeyTag {
        match self {
            Key::Int(_) => KeyTag::Int,
            Key::Real(_) => KeyTag::Real,
            Key::Str(_) => KeyTag::Str,
        }
    }

    /// Real key with NaN rejected and `-0.0` folded onto `0.0`.
    pub fn real(x: f64) -> Result<Key> {
        if x.is_nan() {
            return Err(Error::InvalidKey("NaN is not an orderable key".into()));
        }
        Ok(Key::Real(if x == 0.0 { 0.0 } else { x }))
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Key::Str(s) => Some(s),
            _ => None,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Key::Real(x) if x.is_nan() => {
                Err(Error::InvalidKey("NaN is not an orderable key".into()))
            }
            _ => Ok(()),
        }
    }
}

impl From<&str> for Key {
    fn from(s: &str) -> Self {
        Key::Str(s.to_owned())
    }
}

impl From<String> for Key {
    fn from(s: String) -> Self {
        Key::Str(s)
    }
}

impl From<i64> for Key {
    fn from(i: i64) -> Self {
        Key::Int(i)
    }
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Key::Int(a), Key::Int(b)) => a.cmp(b),
            (Key::Real(a), Key::Real(b)) => real_cmp(*a, *b),
            // byte order of UTF-8 equals code point order
            (Key::Str(a), Key::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

impl Hash for Key {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Key::Int(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Key::Real(x) => {
                1u8.hash(state);
                real_bits(*x).hash(state);
            }
            Key::Str(s) => {
                2u8.hash(state);
                s.hash(state);
            }
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Int(i) => write!(f, "{i}"),
            Key::Real(x) => write!(f, "{x:?}"),
            Key::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueTag {
    Bool,
    Int,
    Real,
    Str,
    NegInf,
    PosInf,
}

#[derive(Clone, Debug)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    NegInf,
    PosInf,
}

impl Value {
    pub fn tag(&self) -> ValueTag {
        match self {
            Value::Bool(_) => ValueTag::Bool,
            Value::Int(_) => ValueTag::Int,
            Value::Real(_) => ValueTag::Real,
            Value::Str(_) => ValueTag::Str,
            Value::NegInf => ValueTag::NegInf,
            Value::PosInf => ValueTag::PosInf,
        }
    }

    pub fn str(s: impl Into<String>) -> Value {
        Value::Str(s.into())
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Real(_))
    }

    pub fn is_numeric_zero(&self) -> bool {
        match self {
            Value::Int(i) => *i == 0,
            Value::Real(x) => *x == 0.0,
            _ => false,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Real(x) => Some(*x),
            Value::NegInf => Some(f64::NEG_INFINITY),
            Value::PosInf => Some(f64::INFINITY),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::NegInf => 0,
            Value::Bool(_) => 1,
            Value::Int(_) | Value::Real(_) => 2,
            Value::Str(_) => 3,
            Value::PosInf => 4,
        }
    }

    /// Total order over every value: `NegInf < bools < numbers < strings < PosInf`.
    /// Integers and reals compare numerically, with the integer first on a tie.
    pub fn total_cmp(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Real(a), Value::Real(b)) => real_cmp(*a, *b),
            (Value::Int(a), Value::Real(b)) => {
                real_cmp(*a as f64, *b).then(Ordering::Less)
            }
            (Value::Real(a), Value::Int(b)) => {
                real_cmp(*a, *b as f64).then(Ordering::Greater)
            }
            (Value::Str(a), Value::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Real(a), Value::Real(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::NegInf, Value::NegInf) | (Value::PosInf, Value::PosInf) => true,
            _ => false,
        }
    }
}

// Stored values never hold NaN, so `==` on reals is reflexive here.
impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Value::Bool(b) => b.hash(state),
            Value::Int(i) => i.hash(state),
            Value::Real(x) => real_bits(*x).hash(state),
            Value::Str(s) => s.hash(state),
            Value::NegInf | Value::PosInf => {}
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(x) => write!(f, "{x:?}"),
            Value::Str(s) => f.write_str(s),
            Value::NegInf => f.write_str("-inf"),
            Value::PosInf => f.write_str("+inf"),
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}

fn real_cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or_else(|| a.total_cmp(&b))
}

fn real_bits(x: f64) -> u64 {
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}
