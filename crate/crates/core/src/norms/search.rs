//! One-dimensional optimization over the shift parameter `ε`.
//!
//! The objective is sampled on a log-spaced grid (plus caller-supplied seeds),
//! the best few local optima are polished by golden-section search, and the
//! whole procedure is repeated on the even-indexed half of the grid. The
//! difference between the two answers is reported as the search gap.

use serde::{Deserialize, Serialize};

use crate::error::{GrandNetError, Result};
use crate::numeric::log_space;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EpsilonSearch {
    /// Smallest grid value of `ε`.
    pub eps_floor: f64,
    /// Number of log-spaced grid points.
    pub grid_points: usize,
    /// How many local optima of the grid get golden-section refinement.
    pub refine_rounds: usize,
    /// Relative tolerance the grid-halving gap must meet.
    pub rel_tol: f64,
    /// Gauss-Legendre nodes per non-step profile piece.
    pub quad_nodes: usize,
}

impl Default for EpsilonSearch {
    fn default() -> Self {
        Self {
            eps_floor: 1e-6,
            grid_points: 512,
            refine_rounds: 3,
            rel_tol: 1e-8,
            quad_nodes: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    pub value: f64,
    pub argopt: f64,
    pub gap: f64,
}

impl EpsilonSearch {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_floor > 0.0) || self.grid_points < 2 || !(self.rel_tol > 0.0) || self.quad_nodes == 0 {
            return Err(GrandNetError::invalid(format!("bad epsilon search settings: {self:?}")));
        }
        Ok(())
    }

    pub fn with_doubled_grid(mut self) -> Self {
        self.grid_points *= 2;
        self
    }

    pub fn with_doubled_quadrature(mut self) -> Self {
        self.quad_nodes *= 2;
        self
    }

    pub fn maximize(&self, f: impl Fn(f64) -> f64, upper: f64, seeds: &[f64]) -> SearchOutcome {
        self.optimize(f, upper, Goal::Maximize, seeds)
    }

    pub fn minimize(&self, f: impl Fn(f64) -> f64, upper: f64, seeds: &[f64]) -> SearchOutcome {
        self.optimize(f, upper, Goal::Minimize, seeds)
    }

    /// Optimize `f` over `ε ∈ (0, upper]`.
    pub fn optimize(&self, f: impl Fn(f64) -> f64, upper: f64, goal: Goal, seeds: &[f64]) -> SearchOutcome {
        let score = |x: f64| {
            let v = f(x);
            let s = match goal {
                Goal::Maximize => v,
                Goal::Minimize => -v,
            };
            if s.is_nan() {
                f64::NEG_INFINITY
            } else {
                s
            }
        };
        let floor = self.eps_floor.min(upper);
        let grid = log_space(floor, upper, self.grid_points);
        let seeds: Vec<f64> = seeds
            .iter()
            .copied()
            .filter(|s| s.is_finite() && *s > 0.0 && *s <= upper)
            .collect();

        let full: Vec<(f64, f64)> = sample(grid.iter().chain(&seeds).copied(), &score);
        let coarse: Vec<(f64, f64)> = {
            let mut half: Vec<f64> = grid.iter().step_by(2).copied().collect();
            if half.last() != Some(&upper) {
                half.push(upper);
            }
            let keep = |x: &f64| half.binary_search_by(|h| h.total_cmp(x)).is_ok() || seeds.contains(x);
            full.iter().copied().filter(|(x, _)| keep(x)).collect()
        };

        let (best_x, best_s) = self.refine(&full, &score);
        let (_, coarse_s) = self.refine(&coarse, &score);
        let to_value = |s: f64| match goal {
            Goal::Maximize => s,
            Goal::Minimize => -s,
        };
        let (value, coarse_value) = (to_value(best_s), to_value(coarse_s));
        let gap = if value == coarse_value { 0.0 } else { (value - coarse_value).abs() };
        SearchOutcome { value, argopt: best_x, gap }
    }

    /// Best point after golden refinement of the top local maxima of `pts`.
    fn refine(&self, pts: &[(f64, f64)], score: &impl Fn(f64) -> f64) -> (f64, f64) {
        let mut best = pts
            .iter()
            .copied()
            .fold((f64::NAN, f64::NEG_INFINITY), |b, p| if p.1 > b.1 || b.0.is_nan() { p } else { b });
        if best.1 == f64::INFINITY || pts.len() < 2 {
            return best;
        }
        let mut peaks: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                let left = i == 0 || pts[i].1 >= pts[i - 1].1;
                let right = i + 1 == pts.len() || pts[i].1 >= pts[i + 1].1;
                left && right && pts[i].1.is_finite()
            })
            .collect();
        peaks.sort_by(|&a, &b| pts[b].1.total_cmp(&pts[a].1));
        peaks.dedup_by(|a, b| pts[*a].1 == pts[*b].1 && a.abs_diff(*b) == 1);
        for &i in peaks.iter().take(self.refine_rounds.max(1)) {
            let lo = pts[i.saturating_sub(1)].0;
            let hi = pts[(i + 1).min(pts.len() - 1)].0;
            if hi > lo {
                let cand = golden_max(score, lo, hi);
                if cand.1 > best.1 {
                    best = cand;
                }
            }
        }
        best
    }
}

fn sample(xs: impl Iterator<Item = f64>, score: &impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = xs.collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter().map(|x| (x, score(x))).collect()
}

/// Golden-section maximization on `[a, b]`; returns the best point evaluated.
pub(crate) fn golden_max(score: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..GOLDEN_MAX_ITERS {
        if (b - a) <= 4.0 * f64::EPSILON * c.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}
