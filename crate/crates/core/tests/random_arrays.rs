use assocarray::io::{random_array, ValueDist};

/// Distinct cells hit by `k` uniform draws over `n²` cells.
fn collision_oracle(n: usize, d: f64) -> f64 {
    let cells = (n * n) as f64;
    let k = (n as f64 * d).round() as i32;
    cells * (1.0 - ((cells - 1.0) / cells).powi(k))
}

#[test]
fn mean_nnz_matches_collision_oracle() {
    for (n, d) in [(256, 8.0), (300, 40.0), (512, 2.0)] {
        let mean = (0..50u64)
            .map(|seed| random_array(n, d, seed, &ValueDist::default()).unwrap().nnz() as f64)
            .sum::<f64>()
            / 50.0;
        let want = collision_oracle(n, d);
        assert!((mean - want).abs() <= 0.05 * want, "n={n} d={d}: mean {mean}, oracle {want}");
        assert!(mean <= n as f64 * d);
    }
}

#[test]
fn paper_scale_count_is_just_under_draws() {
    let a = random_array(4096, 8.0, 1, &ValueDist::default()).unwrap();
    let want = collision_oracle(4096, 8.0);
    assert!(a.nnz() < 32768);
    assert!((a.nnz() as f64 - want).abs() < 0.01 * want);
}

#[test]
fn generation_is_deterministic() {
    let dist = ValueDist::UniformReal { lo: 0.5, hi: 2.0 };
    let a = random_array(200, 3.0, 42, &dist).unwrap();
    let b = random_array(200, 3.0, 42, &dist).unwrap();
    assert!(a.equal_exact(&b));
    assert!(!a.equal_exact(&random_array(200, 3.0, 43, &dist).unwrap()));
}

#[test]
fn zero_density_is_empty_and_bad_arguments_error() {
    assert!(random_array(10, 0.0, 1, &ValueDist::default()).unwrap().is_empty());
    assert!(random_array(0, 1.0, 1, &ValueDist::default()).is_err());
    assert!(random_array(10, -1.0, 1, &ValueDist::default()).is_err());
}
