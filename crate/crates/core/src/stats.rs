//! Streaming moments and sharded Monte Carlo estimation.

use crate::exec::{self, Execution};
use crate::rng::{RngStream, StreamRng};

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination; `self` is taken to come first.
    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        let w = other.count as f64 / n;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.count as f64 * w;
        self.count += other.count;
    }

    /// Unbiased sample variance, 0 below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Element-wise [`Welford`] over fixed-length vectors, e.g. per-round regret.
#[derive(Debug, Clone, PartialEq)]
pub struct WelfordVec {
    cells: Vec<Welford>,
}

impl WelfordVec {
    pub fn new(len: usize) -> Self {
        Self {
            cells: vec![Welford::new(); len],
        }
    }

    pub fn push(&mut self, xs: &[f64]) {
        assert_eq!(xs.len(), self.cells.len());
        for (c, &x) in self.cells.iter_mut().zip(xs) {
            c.push(x);
        }
    }

    pub fn merge(&mut self, other: &WelfordVec) {
        for (c, o) in self.cells.iter_mut().zip(&other.cells) {
            c.merge(o);
        }
    }

    pub fn count(&self) -> u64 {
        self.cells.first().map_or(0, |c| c.count)
    }

    pub fn cells(&self) -> &[Welford] {
        &self.cells
    }

    pub fn means(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.mean).collect()
    }

    pub fn std_errors(&self) -> Vec<f64> {
        self.cells.iter().map(Welford::std_error).collect()
    }
}

/// Samples per Monte Carlo shard. Shard `i` always draws from substream `i`,
/// so estimates depend only on the stream and sample count.
pub const SHARD_SIZE: usize = 8192;

/// Estimates the means of `width` jointly sampled quantities. `f` fills one
/// sample into the output slice.
pub fn mc_estimate<F>(stream: &RngStream, samples: usize, width: usize, execution: Execution, f: F) -> Vec<Welford>
where
    F: Fn(&mut StreamRng, &mut [f64]) + Sync,
{
    let shards = samples.div_ceil(SHARD_SIZE);
    let partials = exec::map_indexed(execution, shards, |s| {
        let mut rng = stream.substream(s as u64).rng();
        let len = SHARD_SIZE.min(samples - s * SHARD_SIZE);
        let mut acc = vec![Welford::new(); width];
        let mut out = vec![0.0; width];
        for _ in 0..len {
            f(&mut rng, &mut out);
            for (a, &x) in acc.iter_mut().zip(&out) {
                a.push(x);
            }
        }
        acc
    });
    let mut total = vec![Welford::new(); width];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total
}
