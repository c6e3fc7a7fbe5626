use std::time::Instant;

use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::par::{self, Execution};

use super::min_waring_number_with;

pub const CSV_HEADER: &str = "p,m,q,n,k,max_terms,classes_checked,elapsed_ms";

/// Grid of `(p, m, n, k)` cells. Cells whose field does not exist or whose
/// matrix space exceeds the enumeration guard are reported, not fatal.
#[derive(Clone, Debug, Default)]
pub struct CensusSpec {
    pub primes: Vec<u64>,
    pub degrees: Vec<usize>,
    pub sizes: Vec<usize>,
    pub exponents: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusCell {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub k: u64,
    /// `(q, max_terms, classes_checked, elapsed_ms)` or the reason the cell
    /// was skipped.
    pub outcome: Result<(u64, u32, usize, u128)>,
}

impl CensusSpec {
    fn cells(&self) -> Vec<(u64, usize, usize, u64)> {
        let mut cells = Vec::new();
        for &p in &self.primes {
            for &m in &self.degrees {
                for &n in &self.sizes {
                    for &k in &self.exponents {
                        cells.push((p, m, n, k));
                    }
                }
            }
        }
        cells.sort_unstable();
        cells.dedup();
        cells
    }
}

/// Runs every cell, in the sorted `(p, m, n, k)` order.
pub fn census(spec: &CensusSpec, exec: Execution) -> Vec<CensusCell> {
    par::map(exec, &spec.cells(), |&(p, m, n, k)| CensusCell {
        p,
        m,
        n,
        k,
        outcome: run_cell(p, m, n, k, exec),
    })
}

fn run_cell(p: u64, m: usize, n: usize, k: u64, exec: Execution) -> Result<(u64, u32, usize, u128)> {
    if k == 0 || n == 0 {
        return Err(Error::ShapeMismatch("n and k must be positive".into()));
    }
    let ctx = FieldCtx::new(p, m, None)?;
    let start = Instant::now();
    let (worst, classes) = min_waring_number_with(&ctx, n, k, exec)?;
    Ok((ctx.q(), worst, classes, start.elapsed().as_millis()))
}

/// CSV of the successful cells; skipped cells are left out.
pub fn render_csv(cells: &[CensusCell]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        if let Ok((q, worst, classes, ms)) = &c.outcome {
            out.push_str(&format!("{},{},{},{},{},{},{},{}\n", c.p, c.m, q, c.n, c.k, worst, classes, ms));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_census() {
        let spec = CensusSpec {
            primes: vec![3, 2],
            degrees: vec![1],
            sizes: vec![1, 2],
            exponents: vec![2],
        };
        let cells = census(&spec, Execution::Sequential);
        let keys: Vec<_> = cells.iter().map(|c| (c.p, c.n)).collect();
        assert_eq!(keys, vec![(2, 1), (2, 2), (3, 1), (3, 2)]);
        assert!(cells.iter().all(|c| c.outcome.is_ok()));
        let csv = render_csv(&cells);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn oversized_cells_are_reported() {
        let spec = CensusSpec {
            primes: vec![101, 4],
            degrees: vec![1],
            sizes: vec![2],
            exponents: vec![2],
        };
        let cells = census(&spec, Execution::Sequential);
        assert!(matches!(cells[0].outcome, Err(Error::NotPrime(4))));
        assert!(matches!(cells[1].outcome, Err(Error::TooLarge(_))));
        assert_eq!(render_csv(&cells).lines().count(), 1);
    }
}
