//! Nonincreasing rearrangement `f*` and its running average `f**`.

use serde::Serialize;

use crate::error::{GrandNetError, Result};
use crate::grid::GridFunction;
use crate::numeric::CompensatedSum;
use crate::profile::{Piece, Profile};

/// `|f|` sorted nonincreasingly, with exact prefix integrals at cell
/// boundaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rearrangement {
    sorted_values: Vec<f64>,
    /// `prefix[k] = ∫_0^{k/n} f*`, `k = 0..=n`.
    prefix: Vec<f64>,
}

impl Rearrangement {
    pub fn new(f: &GridFunction) -> Self {
        let mut sorted: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        sorted.sort_by(|a, b| b.total_cmp(a));
        Self::from_sorted(sorted)
    }

    fn from_sorted(sorted_values: Vec<f64>) -> Self {
        let prefix = signed_prefix(&sorted_values);
        Self { sorted_values, prefix }
    }

    pub fn n(&self) -> usize {
        self.sorted_values.len()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted_values
    }

    /// `f*(t)` as the step value at `t` (right-continuous); zero for `t >= 1`.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.n();
        if t < 0.0 {
            return self.sorted_values[0];
        }
        let k = (t * n as f64).floor() as usize;
        self.sorted_values.get(k).copied().unwrap_or(0.0)
    }

    /// `∫_0^t f*(s) ds` for `0 <= t <= 1`.
    pub fn integral_to(&self, t: f64) -> f64 {
        prefix_at(&self.sorted_values, &self.prefix, t)
    }

    /// `f**(t) = (1/t) ∫_0^t f*`, `0 < t <= 1`.
    pub fn maximal_average(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(GrandNetError::domain(format!("f** needs t in (0, 1], got {t}")));
        }
        Ok(self.integral_to(t) / t)
    }

    /// `f*` as a step profile.
    pub fn star_profile(&self) -> Profile {
        let n = self.n() as f64;
        let mut pieces: Vec<Piece> = Vec::new();
        for (k, &v) in self.sorted_values.iter().enumerate() {
            let hi = (k + 1) as f64 / n;
            match pieces.last_mut() {
                Some(last) if last.alpha == v => last.hi = hi,
                _ => pieces.push(Piece::step(k as f64 / n, hi, v)),
            }
        }
        Profile::from_pieces_unchecked(pieces)
    }

    /// `f**` as a profile of pieces `s_k + (P_k - k s_k / n) / t`.
    pub fn double_star_profile(&self) -> Profile {
        Profile::from_pieces_unchecked(average_pieces(&self.sorted_values, &self.prefix))
    }

    /// Cell boundaries `k/n`, `k = 1..=n`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let n = self.n();
        (1..=n).map(|k| k as f64 / n as f64).collect()
    }
}

pub fn decreasing_rearrangement(f: &GridFunction) -> Rearrangement {
    Rearrangement::new(f)
}

pub fn maximal_average(f: &GridFunction, t: f64) -> Result<f64> {
    Rearrangement::new(f).maximal_average(t)
}

/// Prefix integrals `P_k = (1/n) Σ_{i<k} v_i` with compensated accumulation.
pub(crate) fn signed_prefix(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mut acc = CompensatedSum::new();
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(0.0);
    for &v in values {
        acc.add(v);
        out.push(acc.value() / n);
    }
    out
}

/// `∫_0^t v` for the step function with cell values `v` and prefixes `prefix`.
pub(crate) fn prefix_at(values: &[f64], prefix: &[f64], t: f64) -> f64 {
    let n = values.len();
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return prefix[n];
    }
    let k = ((t * n as f64).floor() as usize).min(n - 1);
    prefix[k] + (t - k as f64 / n as f64) * values[k]
}

/// Pieces of `t ↦ (1/t) ∫_0^t v` with runs of equal cell values merged.
pub(crate) fn average_pieces(values: &[f64], prefix: &[f64]) -> Vec<Piece> {
    let n = values.len() as f64;
    let mut pieces: Vec<Piece> = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        let lo = k as f64 / n;
        let hi = (k + 1) as f64 / n;
        match pieces.last_mut() {
            Some(last) if last.alpha == v => last.hi = hi,
            _ => {
                let beta = if k == 0 { 0.0 } else { prefix[k] - lo * v };
                pieces.push(Piece { lo, hi, alpha: v, beta });
            }
        }
    }
    pieces
}
