//! Value algebras `(V, ⊕, ⊗, 0, 1)` that parameterize every array operation.
//!
//! Arrays never carry a semiring; each operation takes one explicitly, so the
//! same data can be combined with `+.×` for counting and `&.=` for row
//! comparison.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::value::Value;

/// Names accepted by [`get_semiring`].
pub const SEMIRING_NAMES: [&str; 6] = ["plus-times", "max-plus", "min-plus", "and-or", "and-eq", "max-min"];

pub type BinaryOp = fn(&Value, &Value) -> Result<Value>;
pub type UnaryOp = fn(&Value) -> Result<Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Numeric,
    Boolean,
    StringCapable,
}

#[derive(Clone)]
enum Ops {
    PlusTimes,
    MaxPlus,
    MinPlus,
    OrAnd,
    AndEq,
    MaxMin,
    Custom {
        plus: BinaryOp,
        times: BinaryOp,
        neg: Option<UnaryOp>,
        accepts: fn(&Value) -> bool,
    },
}

#[derive(Clone)]
pub struct Semiring {
    name: Cow<'static, str>,
    ops: Ops,
    zero: Value,
    one: Value,
    has_plus_inverse: bool,
    has_times_inverse: bool,
    value_kind: ValueKind,
}

impl fmt::Debug for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semiring")
            .field("name", &self.name)
            .field("zero", &self.zero)
            .field("one", &self.one)
            .field("has_plus_inverse", &self.has_plus_inverse)
            .finish()
    }
}

/// Look up a registered semiring by name.
pub fn get_semiring(name: &str) -> Result<Semiring> {
    match name {
        "plus-times" => Ok(Semiring::plus_times()),
        "max-plus" => Ok(Semiring::max_plus()),
        "min-plus" => Ok(Semiring::min_plus()),
        "and-or" => Ok(Semiring::and_or()),
        "and-eq" => Ok(Semiring::and_eq()),
        "max-min" => Ok(Semiring::max_min()),
        other => Err(Error::UnknownSemiring(other.to_owned())),
    }
}

impl Semiring {
    /// `(+, ×, 0, 1)` over 64-bit integers (wrapping) and reals.
    pub fn plus_times() -> Semiring {
        Semiring {
            name: Cow::Borrowed("plus-times"),
            ops: Ops::PlusTimes,
            zero: Value::Int(0),
            one: Value::Int(1),
            has_plus_inverse: true,
            has_times_inverse: false,
            value_kind: ValueKind::Numeric,
        }
    }

    /// `(max, +, −∞, 0)`.
    pub fn max_plus() -> Semiring {
        Semiring {
            name: Cow::Borrowed("max-plus"),
            ops: Ops::MaxPlus,
            zero: Value::NegInf,
            one: Value::Int(0),
            has_plus_inverse: false,
            has_times_inverse: true,
            value_kind: ValueKind::Numeric,
        }
    }

    /// `(min, +, +∞, 0)`.
    pub fn min_plus() -> Semiring {
        Semiring {
            name: Cow::Borrowed("min-plus"),
            ops: Ops::MinPlus,
            zero: Value::PosInf,
            one: Value::Int(0),
            has_plus_inverse: false,
            has_times_inverse: true,
            value_kind: ValueKind::Numeric,
        }
    }

    /// `(|, &, false, true)` over booleans.
    pub fn and_or() -> Semiring {
        Semiring {
            name: Cow::Borrowed("and-or"),
            ops: Ops::OrAnd,
            zero: Value::Bool(false),
            one: Value::Bool(true),
            has_plus_inverse: false,
            has_times_inverse: false,
            value_kind: ValueKind::Boolean,
        }
    }

    /// Row comparison: `⊕` is logical and, `⊗` is an equality test over any
    /// two values (mixed tags compare unequal). Zero is `false`, one `true`.
    ///
    /// This pair is not a semiring in the strict sense (`false` is not an
    /// identity for `&`), so it is excluded from law sampling.
    pub fn and_eq() -> Semiring {
        Semiring {
            name: Cow::Borrowed("and-eq"),
            ops: Ops::AndEq,
            zero: Value::Bool(false),
            one: Value::Bool(true),
            has_plus_inverse: false,
            has_times_inverse: false,
            value_kind: ValueKind::StringCapable,
        }
    }

    /// `(max, min, −∞, +∞)` over the total order of all values. Multiplying
    /// by a pattern whose entries are `+∞` selects values unchanged, which is
    /// how the relational layer moves strings through array products.
    pub fn max_min() -> Semiring {
        Semiring {
            name: Cow::Borrowed("max-min"),
            ops: Ops::MaxMin,
            zero: Value::NegInf,
            one: Value::PosInf,
            has_plus_inverse: false,
            has_times_inverse: false,
            value_kind: ValueKind::StringCapable,
        }
    }

    /// A caller-defined instance. Laws are not verified on construction; use
    /// the property checker for that.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        name: impl Into<String>,
        plus: BinaryOp,
        times: BinaryOp,
        zero: Value,
        one: Value,
        neg: Option<UnaryOp>,
        accepts: fn(&Value) -> bool,
        value_kind: ValueKind,
    ) -> Semiring {
        Semiring {
            name: Cow::Owned(name.into()),
            has_plus_inverse: neg.is_some(),
            ops: Ops::Custom { plus, times, neg, accepts },
            zero,
            one,
            has_times_inverse: false,
            value_kind,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn zero(&self) -> &Value {
        &self.zero
    }

    pub fn one(&self) -> &Value {
        &self.one
    }

    pub fn has_plus_inverse(&self) -> bool {
        self.has_plus_inverse
    }

    pub fn has_times_inverse(&self) -> bool {
        self.has_times_inverse
    }

    pub fn value_kind(&self) -> ValueKind {
        self.value_kind
    }

    /// Whether the algebraic laws are expected to hold for this instance.
    pub fn is_lawful(&self) -> bool {
        !matches!(self.ops, Ops::AndEq)
    }

    /// Is `v` in this semiring's carrier?
    pub fn accepts(&self, v: &Value) -> bool {
        match &self.ops {
            Ops::PlusTimes => v.is_numeric(),
            Ops::MaxPlus => v.is_numeric() || matches!(v, Value::NegInf),
            Ops::MinPlus => v.is_numeric() || matches!(v, Value::PosInf),
            Ops::OrAnd => matches!(v, Value::Bool(_)),
            Ops::AndEq | Ops::MaxMin => match v {
                Value::Real(x) => !x.is_nan(),
                _ => true,
            },
            Ops::Custom { accepts, .. } => accepts(v),
        }
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.accepts(v) {
            Ok(())
        } else {
            Err(self.carrier_error(v))
        }
    }

    fn carrier_error(&self, v: &Value) -> Error {
        Error::Carrier {
            semiring: self.name.to_string(),
            value: format!("{v:?}"),
        }
    }

    /// True when `v` is the non-stored element of this semiring.
    pub fn is_zero(&self, v: &Value) -> bool {
        match self.ops {
            Ops::PlusTimes => v.is_numeric_zero(),
            _ => *v == self.zero,
        }
    }

    pub fn plus(&self, v: &Value, w: &Value) -> Result<Value> {
        match &self.ops {
            Ops::PlusTimes => self.arith(v, w, i64::wrapping_add, |a, b| a + b),
            Ops::MaxPlus => {
                self.check(v)?;
                self.check(w)?;
                Ok(max_value(v, w).clone())
            }
            Ops::MinPlus => {
                self.check(v)?;
                self.check(w)?;
                Ok(min_value(v, w).clone())
            }
            Ops::OrAnd => Ok(Value::Bool(self.boolean(v)? | self.boolean(w)?)),
            Ops::AndEq => Ok(Value::Bool(self.boolean(v)? & self.boolean(w)?)),
            Ops::MaxMin => {
                self.check(v)?;
                self.check(w)?;
                Ok(max_value(v, w).clone())
            }
            Ops::Custom { plus, accepts, .. } => {
                if !accepts(v) {
                    return Err(self.carrier_error(v));
                }
                if !accepts(w) {
                    return Err(self.carrier_error(w));
                }
                plus(v, w)
            }
        }
    }

    pub fn times(&self, v: &Value, w: &Value) -> Result<Value> {
        match &self.ops {
            Ops::PlusTimes => self.arith(v, w, i64::wrapping_mul, |a, b| a * b),
            Ops::MaxPlus => match (v, w) {
                (Value::NegInf, x) | (x, Value::NegInf) => {
                    self.check(x)?;
                    Ok(Value::NegInf)
                }
                _ => self.arith(v, w, i64::wrapping_add, |a, b| a + b),
            },
            Ops::MinPlus => match (v, w) {
                (Value::PosInf, x) | (x, Value::PosInf) => {
                    self.check(x)?;
                    Ok(Value::PosInf)
                }
                _ => self.arith(v, w, i64::wrapping_add, |a, b| a + b),
            },
            Ops::OrAnd => Ok(Value::Bool(self.boolean(v)? & self.boolean(w)?)),
            Ops::AndEq => Ok(Value::Bool(v == w)),
            Ops::MaxMin => {
                self.check(v)?;
                self.check(w)?;
                Ok(min_value(v, w).clone())
            }
            Ops::Custom { times, accepts, .. } => {
                if !accepts(v) {
                    return Err(self.carrier_error(v));
                }
                if !accepts(w) {
                    return Err(self.carrier_error(w));
                }
                times(v, w)
            }
        }
    }

    /// Additive inverse: `plus(v, neg(v)) == zero`.
    pub fn neg(&self, v: &Value) -> Result<Value> {
        match &self.ops {
            Ops::PlusTimes => match v {
                Value::Int(i) => Ok(Value::Int(i.wrapping_neg())),
                Value::Real(x) => Ok(Value::Real(-x)),
                other => Err(self.carrier_error(other)),
            },
            Ops::Custom { neg: Some(neg), .. } => neg(v),
            _ => Err(Error::Capability {
                semiring: self.name.to_string(),
                what: "additive inverse",
            }),
        }
    }

    fn arith(
        &self,
        v: &Value,
        w: &Value,
        int_op: fn(i64, i64) -> i64,
        real_op: fn(f64, f64) -> f64,
    ) -> Result<Value> {
        match (v, w) {
            (Value::Int(a), Value::Int(b)) => Ok(Value::Int(int_op(*a, *b))),
            (Value::Int(a), Value::Real(b)) => Ok(Value::Real(real_op(*a as f64, *b))),
            (Value::Real(a), Value::Int(b)) => Ok(Value::Real(real_op(*a, *b as f64))),
            (Value::Real(a), Value::Real(b)) => Ok(Value::Real(real_op(*a, *b))),
            (a, _) if !a.is_numeric() => Err(self.carrier_error(a)),
            (_, b) => Err(self.carrier_error(b)),
        }
    }

    fn boolean(&self, v: &Value) -> Result<bool> {
        match v {
            Value::Bool(b) => Ok(*b),
            other => Err(self.carrier_error(other)),
        }
    }
}

fn max_value<'a>(v: &'a Value, w: &'a Value) -> &'a Value {
    if v.total_cmp(w) == Ordering::Less {
        w
    } else {
        v
    }
}

fn min_value<'a>(v: &'a Value, w: &'a Value) -> &'a Value {
    if w.total_cmp(v) == Ordering::Less {
        w
    } else {
        v
    }
}

pub fn sr_plus(s: &Semiring, v: &Value, w: &Value) -> Result<Value> {
    s.plus(v, w)
}

pub fn sr_times(s: &Semiring, v: &Value, w: &Value) -> Result<Value> {
    s.times(v, w)
}

pub fn sr_neg(s: &Semiring, v: &Value) -> Result<Value> {
    s.neg(v)
}
