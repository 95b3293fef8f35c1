use rayon::prelude::*;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Domains are always cut into this many pieces, whatever the worker count, so
/// merged results never depend on scheduling.
const CHUNKS: u64 = 64;

/// Enumeration budget plus the worker pool every parallel loop runs on.
#[derive(Clone)]
pub struct Ctx {
    budget: u64,
    workers: usize,
    pool: Arc<rayon::ThreadPool>,
}

impl std::fmt::Debug for Ctx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ctx")
            .field("budget", &self.budget)
            .field("workers", &self.workers)
            .finish()
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(DEFAULT_BUDGET, 1)
    }
}

impl Ctx {
    pub fn new(budget: u64, workers: usize) -> Self {
        let workers = workers.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        Ctx {
            budget,
            workers,
            pool: Arc::new(pool),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn with_budget(&self, budget: u64) -> Self {
        Ctx {
            budget,
            workers: self.workers,
            pool: self.pool.clone(),
        }
    }

    /// Refuses when the estimated cost is above the budget.
    pub fn check(&self, cost: u128, what: &str) -> Result<()> {
        if cost > self.budget as u128 {
            Err(Error::BudgetExceeded {
                cost,
                budget: self.budget,
                context: None,
            }
            .with_context(what))
        } else {
            Ok(())
        }
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    /// Folds `0..total` in fixed chunks, then merges chunk results in chunk order.
    pub fn fold_range<T, F, M>(&self, total: u64, init: impl Fn() -> T + Sync, fold: F, merge: M) -> T
    where
        T: Send,
        F: Fn(&mut T, std::ops::Range<u64>) + Sync,
        M: Fn(&mut T, T),
    {
        let chunks = CHUNKS.min(total.max(1));
        let size = total.div_ceil(chunks);
        let parts: Vec<T> = self.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let lo = (c * size).min(total);
                    let hi = ((c + 1) * size).min(total);
                    let mut acc = init();
                    fold(&mut acc, lo..hi);
                    acc
                })
                .collect()
        });
        let mut it = parts.into_iter();
        let mut acc = it.next().unwrap_or_else(&init);
        for part in it {
            merge(&mut acc, part);
        }
        acc
    }

    /// Per-chunk integer histograms with `bins` cells, merged by addition.
    pub fn histogram<F>(&self, total: u64, bins: usize, f: F) -> Vec<u64>
    where
        F: Fn(std::ops::Range<u64>, &mut [u64]) + Sync,
    {
        self.fold_range(
            total,
            || vec![0u64; bins],
            |h, r| f(r, h),
            |a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            },
        )
    }

    pub fn par_map<T: Sync, U: Send>(&self, items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
        self.install(|| items.par_iter().map(f).collect())
    }
}

/// `base^exp`, saturating at `u128::MAX`, for cost estimates.
pub fn pow_cost(base: u128, exp: usize) -> u128 {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)).unwrap_or(u128::MAX)
}

/// Saturating product of cost factors.
pub fn mul_cost(factors: &[u128]) -> u128 {
    factors.iter().fold(1u128, |a, &b| a.saturating_mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_is_schedule_independent() {
        let f = |r: std::ops::Range<u64>, h: &mut [u64]| {
            for i in r {
                h[((i * i + 3 * i) % 7) as usize] += 1;
            }
        };
        let a = Ctx::new(1000, 1).histogram(10_000, 7, f);
        let b = Ctx::new(1000, 8).histogram(10_000, 7, f);
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 10_000);
    }

    #[test]
    fn budget_refusal() {
        let c = Ctx::new(100, 1);
        assert!(c.check(100, "x").is_ok());
        let e = c.check(101, "x").unwrap_err();
        assert!(e.is_budget());
    }

    #[test]
    fn fold_range_empty_and_small() {
        let c = Ctx::new(10, 4);
        let s = c.fold_range(0, || 0u64, |a, r| *a += r.count() as u64, |a, b| *a += b);
        assert_eq!(s, 0);
        let s = c.fold_range(3, || 0u64, |a, r| *a += r.sum::<u64>(), |a, b| *a += b);
        assert_eq!(s, 3);
    }
}
