//! Wall-clock comparison of two evaluation orders of the same product.
//!
//! `distributivity` times `A(B ⊕ C)` against `(A B) ⊕ (A C)`;
//! `associativity` times `A(B C)` against `(A B) C`. `A` is `nA × nA`, `B`
//! and `C` are `s × s`, all with about `d` entries per row over integer keys
//! starting at 1.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use assocarray::io::{random_array_in, Rng, ValueDist};
use assocarray::{AssociativeArray, Semiring};

use crate::{usage, CliError};

pub const CSV_HEADER: &str = "mode,nA,s,d,seed,time_fused_s,time_rewritten_s,ratio";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Distributivity,
    Associativity,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distributivity" => Ok(Mode::Distributivity),
            "associativity" => Ok(Mode::Associativity),
            other => Err(format!("unknown mode `{other}` (expected distributivity or associativity)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Distributivity => "distributivity",
            Mode::Associativity => "associativity",
        })
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub mode: Mode,
    pub n_a: usize,
    pub sizes: Vec<usize>,
    pub d: f64,
    pub seeds: Vec<u64>,
    /// Timed repetitions per order; the median is reported.
    pub reps: usize,
    pub semiring: Semiring,
}

impl BenchConfig {
    pub fn new(mode: Mode) -> Self {
        BenchConfig {
            mode,
            n_a: 1024,
            sizes: vec![256, 1024, 4096, 16384],
            d: 8.0,
            seeds: vec![1],
            reps: 3,
            semiring: Semiring::plus_times(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub mode: Mode,
    pub n_a: usize,
    pub s: usize,
    pub d: f64,
    pub seed: u64,
    pub time_fused: f64,
    pub time_rewritten: f64,
    pub ratio: f64,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.4}",
            self.mode, self.n_a, self.s, self.d, self.seed, self.time_fused, self.time_rewritten, self.ratio
        )
    }
}

pub struct Operands {
    pub a: AssociativeArray,
    pub b: AssociativeArray,
    pub c: AssociativeArray,
}

/// `A`, `B`, `C` for one trial; each draws from its own stream derived from
/// `seed`.
pub fn operands(n_a: usize, s: usize, d: f64, seed: u64, sr: &Semiring) -> Result<Operands, CliError> {
    let gen = |n, i| random_array_in(n, d, Rng::derive(seed, i), &ValueDist::default(), sr).map_err(usage);
    Ok(Operands { a: gen(n_a, 0)?, b: gen(s, 1)?, c: gen(s, 2)? })
}

/// The fused and rewritten evaluation orders of `mode`.
pub fn evaluate(mode: Mode, o: &Operands, sr: &Semiring) -> assocarray::Result<(AssociativeArray, AssociativeArray)> {
    Ok((fused(mode, o, sr)?, rewritten(mode, o, sr)?))
}

fn fused(mode: Mode, o: &Operands, sr: &Semiring) -> assocarray::Result<AssociativeArray> {
    match mode {
        Mode::Distributivity => o.a.array_mult(&o.b.ew_add(&o.c, sr)?, sr),
        Mode::Associativity => o.a.array_mult(&o.b.array_mult(&o.c, sr)?, sr),
    }
}

fn rewritten(mode: Mode, o: &Operands, sr: &Semiring) -> assocarray::Result<AssociativeArray> {
    match mode {
        Mode::Distributivity => o.a.array_mult(&o.b, sr)?.ew_add(&o.a.array_mult(&o.c, sr)?, sr),
        Mode::Associativity => o.a.array_mult(&o.b, sr)?.array_mult(&o.c, sr),
    }
}

fn median_time(reps: usize, mut f: impl FnMut() -> assocarray::Result<AssociativeArray>) -> Result<f64, CliError> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let r = black_box(f().map_err(usage)?);
        times.push(start.elapsed().as_secs_f64().max(1e-9));
        drop(r);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}

/// One size and seed: generate, cross-check both orders, then time them.
pub fn bench_one(cfg: &BenchConfig, s: usize, seed: u64) -> Result<BenchRow, CliError> {
    if cfg.n_a == 0 || s == 0 {
        return Err(usage("sizes must be positive"));
    }
    let sr = &cfg.semiring;
    let o = operands(cfg.n_a, s, cfg.d, seed, sr)?;
    let (x, y) = evaluate(cfg.mode, &o, sr).map_err(usage)?;
    if !x.equal_exact(&y) {
        return Err(CliError::Validation(format!(
            "{} orders disagree at nA={}, s={s}, seed={seed}",
            cfg.mode, cfg.n_a
        )));
    }
    drop((x, y));
    let time_fused = median_time(cfg.reps, || fused(cfg.mode, &o, sr))?;
    let time_rewritten = median_time(cfg.reps, || rewritten(cfg.mode, &o, sr))?;
    Ok(BenchRow {
        mode: cfg.mode,
        n_a: cfg.n_a,
        s,
        d: cfg.d,
        seed,
        time_fused,
        time_rewritten,
        ratio: time_fused / time_rewritten,
    })
}

/// Every size × seed, in order; `each` sees rows as they complete.
pub fn run_bench(cfg: &BenchConfig, mut each: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>, CliError> {
    if cfg.sizes.is_empty() || cfg.seeds.is_empty() {
        return Err(usage("need at least one size and one seed"));
    }
    if !(cfg.d >= 0.0) {
        return Err(usage("d must be non-negative"));
    }
    let mut rows = Vec::new();
    for &s in &cfg.sizes {
        for &seed in &cfg.seeds {
            let row = bench_one(cfg, s, seed)?;
            each(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}
