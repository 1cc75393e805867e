//! nnz-based cost model.
//!
//! Element-wise work is `nnz(A) + nnz(B)`. A product costs its number of
//! scalar multiplications: exactly `Σₖ nnz(A(:,k))·nnz(B(k,:))` when both
//! operands are data leaves, otherwise `nnz(A)·nnz(B) / max(inner keys, 1)`
//! assuming independent sparsity patterns. Result sizes propagate upward
//! with the same formulas capped by `m·n`.

use super::{Leaf, Plan};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub m: f64,
    pub n: f64,
    pub nnz: f64,
    /// Accumulated work of the subtree.
    pub cost: f64,
}

pub fn estimate_cost(p: &Plan) -> Result<f64> {
    Ok(estimate(p)?.cost)
}

fn exact_flops(a: &Leaf, b: &Leaf) -> Option<f64> {
    let (pa, pb) = (a.profile()?, b.profile()?);
    let (mut i, mut j, mut total) = (0, 0, 0.0);
    let (cols, rows) = (&pa.col_counts, &pb.row_counts);
    while i < cols.len() && j < rows.len() {
        match cols[i].0.cmp(&rows[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                total += cols[i].1 as f64 * rows[j].1 as f64;
                i += 1;
                j += 1;
            }
        }
    }
    Some(total)
}

pub fn estimate(p: &Plan) -> Result<Estimate> {
    let est = |m: f64, n: f64, nnz: f64, cost: f64| Estimate { m, n, nnz: nnz.min(m * n), cost };
    Ok(match p {
        Plan::Leaf(l) => {
            let s = l.stats().ok_or_else(|| Error::MissingStats(l.name().to_owned()))?;
            est(s.m as f64, s.n as f64, s.nnz as f64, 0.0)
        }
        Plan::Empty => est(0.0, 0.0, 0.0, 0.0),
        Plan::Identity(k) => {
            let n = k.len() as f64;
            est(n, n, n, n)
        }
        Plan::EwAdd(x, y) | Plan::Union(x, y) => {
            let (a, b) = (estimate(x)?, estimate(y)?);
            let m = if matches!(p, Plan::Union(..)) { a.m + b.m } else { a.m.max(b.m) };
            est(m, a.n.max(b.n), a.nnz + b.nnz, a.cost + b.cost + a.nnz + b.nnz)
        }
        Plan::EwMult(x, y) => {
            let (a, b) = (estimate(x)?, estimate(y)?);
            let space = (a.m.max(b.m) * a.n.max(b.n)).max(1.0);
            let nnz = (a.nnz * b.nnz / space).min(a.nnz.min(b.nnz));
            est(a.m.min(b.m), a.n.min(b.n), nnz, a.cost + b.cost + a.nnz + b.nnz)
        }
        Plan::ArrayMult(x, y) => {
            let (a, b) = (estimate(x)?, estimate(y)?);
            let flops = match (&**x, &**y) {
                (Plan::Leaf(l), Plan::Leaf(r)) => exact_flops(l, r),
                _ => None,
            }
            .unwrap_or_else(|| a.nnz * b.nnz / a.n.max(b.m).max(1.0));
            est(a.m, b.n, flops, a.cost + b.cost + flops)
        }
        Plan::Transpose(x) => {
            let a = estimate(x)?;
            est(a.n, a.m, a.nnz, a.cost + a.nnz)
        }
        Plan::Project { input, cols: k } | Plan::Rename { input, from: k, .. } => {
            let a = estimate(input)?;
            let n = a.n.min(k.len() as f64);
            let nnz = if a.n > 0.0 { a.nnz * n / a.n } else { 0.0 };
            est(a.m, n, nnz, a.cost + a.nnz)
        }
        Plan::Intersection(x, y) | Plan::Difference(x, y) => {
            let (a, b) = (estimate(x)?, estimate(y)?);
            est(a.m, a.n, a.nnz, a.cost + b.cost + a.nnz + b.nnz)
        }
        Plan::Select { input, .. } => {
            let a = estimate(input)?;
            est(a.m, a.n, a.nnz, a.cost + a.nnz)
        }
        Plan::ThetaJoin { left, right, pairs, .. } => {
            let (a, b) = (estimate(left)?, estimate(right)?);
            let m = if *pairs { a.m * b.m } else { a.m };
            let per_row = if a.m > 0.0 { a.nnz / a.m } else { 0.0 } + if b.m > 0.0 { b.nnz / b.m } else { 0.0 };
            est(m, a.n + b.n, m * per_row, a.cost + b.cost + a.m * b.m + a.nnz + b.nnz)
        }
        Plan::ExtendedProjection { input, .. } => {
            let a = estimate(input)?;
            est(a.m, 1.0, a.m, a.cost + a.nnz)
        }
        Plan::Aggregate { input, .. } => {
            let a = estimate(input)?;
            est(a.m, 2.0, 2.0 * a.m, a.cost + a.nnz)
        }
    })
}
