mod oracle;
mod suite;

use assocarray::{AssociativeArray, Semiring};

#[test]
fn kernels_match_dense_oracle() {
    suite::dense_oracle(100).unwrap();
}

#[test]
fn cancelling_sum_stores_nothing() {
    let s = Semiring::plus_times();
    let a = AssociativeArray::from_triples([(1i64, 1i64, 3i64), (2, 2, 4)], &s).unwrap();
    let b = AssociativeArray::from_triples([(1i64, 1i64, -3i64)], &s).unwrap();
    let c = a.ew_add(&b, &s).unwrap();
    assert_eq!(c.nnz(), 1);
    assert_eq!(c.row_keys().len(), 1);
}
