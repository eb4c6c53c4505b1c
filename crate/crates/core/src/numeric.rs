//! Small numerical helpers shared by the modules.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        if self.sum.is_infinite() {
            return self.sum;
        }
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct LegendreRule {
    pairs: Vec<(f64, f64)>,
}

impl LegendreRule {
    pub fn new(degree: usize) -> Self {
        let degree = NonZeroUsize::new(degree.max(1)).expect("degree is at least one");
        let rule = GaussLegendre::new(degree);
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        compensated_sum(self.mapped(a, b).map(|(x, w)| w * f(x)))
    }
}

/// `(hi^x - lo^x) / x` for `0 <= lo < hi`, stable as `x -> 0`.
///
/// Returns `+inf` when `lo == 0` and `x <= 0`.
pub fn power_increment(lo: f64, hi: f64, x: f64) -> f64 {
    if lo <= 0.0 {
        return if x > 0.0 { hi.powf(x) / x } else { f64::INFINITY };
    }
    let span = (hi / lo).ln();
    if x == 0.0 {
        return span;
    }
    lo.powf(x) * (x * span).exp_m1() / x
}

/// `n` points log-spaced on `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Relative difference `|a - b| / max(|a|, |b|)`, with `0` when both vanish
/// and when both are the same infinity.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let scale = a.abs().max(b.abs());
    if !scale.is_finite() {
        return f64::INFINITY;
    }
    (a - b).abs() / scale
}
