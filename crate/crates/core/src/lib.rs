//! Semiring-generic sparse associative arrays.
//!
//! An [`AssociativeArray`] maps pairs of ordered keys (strings, integers or
//! reals) to values, storing only entries that differ from the zero of the
//! semiring in use. On top of the array kernels sit a relational layer
//! ([`relational`]) where every operator is an array expression, and a plan
//! rewriter ([`rewrite`]) that simplifies and reorders such expressions.
//!
//! ```
//! use assocarray::{AssociativeArray, Semiring};
//!
//! let s = Semiring::plus_times();
//! let a = AssociativeArray::from_triples([("r", "k1", 1i64), ("r", "k2", 2)], &s).unwrap();
//! let b = AssociativeArray::from_triples([("k1", "c", 3i64), ("k2", "c", 4)], &s).unwrap();
//! let c = a.array_mult(&b, &s).unwrap();
//! assert_eq!(c.get(&"r".into(), &"c".into()), Some(&11i64.into()));
//! ```

pub mod array;
pub mod error;
pub mod io;
pub mod relational;
pub mod rewrite;
pub mod semiring;
pub mod value;

pub use array::{ArrayStats, AssociativeArray};
pub use error::{Error, Result};
pub use relational::{PermutationArray, Relation};
pub use rewrite::Plan;
pub use semiring::{get_semiring, sr_neg, sr_plus, sr_times, Semiring, ValueKind};
pub use value::{Key, KeyTag, Value, ValueTag};

pub fn construct(i: &[Key], j: &[Key], v: &[Value], s: &Semiring) -> Result<AssociativeArray> {
    AssociativeArray::construct(i, j, v, s)
}

pub fn stats(a: &AssociativeArray) -> ArrayStats {
    a.stats()
}

pub fn transpose(a: &AssociativeArray) -> AssociativeArray {
    a.transpose()
}

pub fn ew_add(a: &AssociativeArray, b: &AssociativeArray, s: &Semiring) -> Result<AssociativeArray> {
    a.ew_add(b, s)
}

pub fn ew_mult(a: &AssociativeArray, b: &AssociativeArray, s: &Semiring) -> Result<AssociativeArray> {
    a.ew_mult(b, s)
}

pub fn array_mult(a: &AssociativeArray, b: &AssociativeArray, s: &Semiring) -> Result<AssociativeArray> {
    a.array_mult(b, s)
}

pub fn select_sub(a: &AssociativeArray, rows: Option<&[Key]>, cols: Option<&[Key]>) -> Result<AssociativeArray> {
    a.select_sub(rows, cols)
}

pub fn identity_array(j: &[Key], j2: &[Key], s: &Semiring) -> Result<AssociativeArray> {
    AssociativeArray::identity(j, j2, s)
}

pub fn nonzero_rows(a: &AssociativeArray) -> Vec<Key> {
    a.row_keys().to_vec()
}

pub fn equal_exact(a: &AssociativeArray, b: &AssociativeArray) -> bool {
    a.equal_exact(b)
}
