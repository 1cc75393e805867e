mod oracle;

use assocarray::io::{format_table, format_triples, parse_table, parse_triples};
use assocarray::relational::{equiv_perm, equivalent, union};
use assocarray::rewrite::simplify;
use assocarray::rewrite::fuzz::random_array_plan;
use assocarray::{AssociativeArray, Key, Semiring, Value};
use proptest::prelude::*;

fn triples() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((1i64..=16, 1i64..=16, -4i64..=4), 0..60)
}

fn build(t: &[(i64, i64, i64)]) -> AssociativeArray {
    AssociativeArray::from_triples(t.iter().copied(), &Semiring::plus_times()).unwrap()
}

fn no_stored_zero(a: &AssociativeArray) -> bool {
    a.values().iter().all(|v| !v.is_numeric_zero())
}

fn string_cells() -> impl Strategy<Value = Vec<(String, String, String)>> {
    prop::collection::vec(("[a-e]{1,3}", "[x-z][0-9]?", "[a-z ,:.-]{1,6}"), 0..30)
}

proptest! {
    #[test]
    fn construction_sums_duplicates(t in triples()) {
        let a = build(&t);
        let mut want = [[0i64; 16]; 16];
        for &(r, c, v) in &t {
            want[(r - 1) as usize][(c - 1) as usize] += v;
        }
        prop_assert_eq!(oracle::to_dense(&a), want);
    }

    #[test]
    fn kernels_never_store_zero(x in triples(), y in triples()) {
        let s = Semiring::plus_times();
        let (a, b) = (build(&x), build(&y));
        prop_assert!(no_stored_zero(&a.ew_add(&b, &s).unwrap()));
        prop_assert!(no_stored_zero(&a.ew_mult(&b, &s).unwrap()));
        prop_assert!(no_stored_zero(&a.array_mult(&b, &s).unwrap()));
    }

    #[test]
    fn transpose_is_an_involution(t in triples()) {
        let a = build(&t);
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        let st = a.transpose().stats();
        prop_assert_eq!((st.m, st.n, st.nnz), (a.stats().n, a.stats().m, a.nnz()));
    }

    #[test]
    fn stats_are_consistent(t in triples()) {
        let a = build(&t);
        let st = a.stats();
        prop_assert!(st.nnz <= st.m * st.n);
        prop_assert_eq!(st.m, a.row_keys().len());
        prop_assert_eq!(st.nnz, a.iter().count());
        prop_assert!(a.row_keys().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.validate(&Semiring::plus_times()).is_ok());
    }

    #[test]
    fn triples_round_trip(t in triples()) {
        let a = build(&t);
        let text = format_triples(&a).unwrap();
        let b = parse_triples(&text).unwrap();
        prop_assert!(a.equal_exact(&b));
        prop_assert_eq!(format_triples(&b).unwrap(), text);
    }

    #[test]
    fn tables_round_trip(cells in string_cells()) {
        let t: Vec<(&str, &str, Value)> =
            cells.iter().map(|(r, c, v)| (r.as_str(), c.as_str(), Value::str(v.clone()))).collect();
        let a = AssociativeArray::from_triples(t, &Semiring::max_min()).unwrap();
        let text = format_table(&a).unwrap();
        let b = parse_table(&text).unwrap();
        prop_assert!(a.equal_exact(&b));
        prop_assert_eq!(format_table(&b).unwrap(), text);
    }

    #[test]
    fn equivalence_is_symmetric(x in string_cells(), y in string_cells()) {
        let s = Semiring::max_min();
        let rel = |c: &[(String, String, String)]| {
            let t: Vec<(String, String, Value)> = c.iter().map(|(r, k, v)| (r.clone(), k.clone(), Value::str(v.clone()))).collect();
            AssociativeArray::from_triples(t, &s).unwrap()
        };
        let (a, b) = (rel(&x), rel(&y));
        prop_assert_eq!(equiv_perm(&a, &b).unwrap().transpose(), equiv_perm(&b, &a).unwrap());
        prop_assert_eq!(equivalent(&a, &b, true), equivalent(&b, &a, true));
        prop_assert!(equivalent(&a, &a, true));
        let u = union(&a, &AssociativeArray::empty()).unwrap();
        prop_assert!(equivalent(&u, &a, true));
    }

    #[test]
    fn simplify_is_idempotent_and_never_grows(seed in any::<u64>()) {
        let p = random_array_plan(seed, 6, &Semiring::plus_times()).unwrap();
        let q = simplify(&p);
        prop_assert!(q.size() <= p.size());
        prop_assert_eq!(simplify(&q).fingerprint(), q.fingerprint());
    }
}

#[test]
fn union_keys_are_fresh() {
    let s = Semiring::max_min();
    let a = AssociativeArray::from_triples([("r", "c", "x")], &s).unwrap();
    let u = union(&a, &a).unwrap();
    assert_eq!(u.row_keys().len(), 2);
    assert!(u.row_keys().contains(&Key::from("r")));
}
