//! Nonnegative profiles on `(0, 1]` made of pieces `alpha + beta / t`.
//!
//! Every function of `t` the toolkit integrates has this shape: `f*` and
//! net-average profiles are steps (`beta = 0`), while `f**` and the full-net
//! average `f̄(t, M*)` are quotients of a piecewise-linear prefix integral by
//! `t`. Pieces touching `t = 0` are always steps, so Gauss-Legendre on the
//! remaining pieces integrates analytic functions away from the origin.

use serde::Serialize;

use crate::error::{GrandNetError, Result};
use crate::numeric::{compensated_sum, power_increment, CompensatedSum, LegendreRule};

/// `alpha + beta / t` on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Piece {
    pub fn step(lo: f64, hi: f64, value: f64) -> Self {
        Self { lo, hi, alpha: value, beta: 0.0 }
    }

    pub fn is_step(&self) -> bool {
        self.beta == 0.0
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.beta == 0.0 {
            self.alpha
        } else {
            (self.alpha + self.beta / t).max(0.0)
        }
    }

    /// Value approached as `t -> hi` from the left.
    pub fn left_limit_at_hi(&self) -> f64 {
        self.eval(self.hi)
    }

    /// `sup_{lo < t < hi} t^c (alpha + beta / t)` for `c >= 0`.
    pub fn sup_power(&self, c: f64) -> f64 {
        if self.is_step() {
            return if c == 0.0 { self.alpha } else { self.alpha * self.hi.powf(c) };
        }
        let h = |t: f64| t.powf(c) * self.eval(t);
        let mut best = h(self.lo).max(h(self.hi));
        // interior stationary point of alpha t^c + beta t^(c-1)
        if self.beta != 0.0 && self.alpha != 0.0 && c > 0.0 {
            let ts = (1.0 - c) * self.beta / (c * self.alpha);
            if ts > self.lo && ts < self.hi {
                best = best.max(h(ts));
            }
        }
        best
    }
}

/// Contiguous pieces starting at `t = 0`; zero beyond the last piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pieces: Vec<Piece>,
}

impl Profile {
    pub fn zero() -> Self {
        Self { pieces: Vec::new() }
    }

    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let mut prev = 0.0;
        for (i, p) in pieces.iter().enumerate() {
            if p.lo != prev || !(p.hi > p.lo) || p.hi > 1.0 {
                return Err(GrandNetError::invalid(format!(
                    "piece {i} spans [{}, {}) after {prev}",
                    p.lo, p.hi
                )));
            }
            if p.lo == 0.0 && p.beta != 0.0 {
                return Err(GrandNetError::invalid("the piece at t = 0 must be a step"));
            }
            if !p.alpha.is_finite() || !p.beta.is_finite() {
                return Err(GrandNetError::invalid(format!("piece {i} is not finite")));
            }
            prev = p.hi;
        }
        Ok(Self { pieces })
    }

    pub(crate) fn from_pieces_unchecked(pieces: Vec<Piece>) -> Self {
        debug_assert!(Self::new(pieces.clone()).is_ok());
        Self { pieces }
    }

    /// Step profile from `(upper breakpoint, value)` pairs.
    pub fn from_steps(steps: &[(f64, f64)]) -> Result<Self> {
        let mut lo = 0.0;
        let mut pieces = Vec::with_capacity(steps.len());
        for &(hi, v) in steps {
            pieces.push(Piece::step(lo, hi, v));
            lo = hi;
        }
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_step(&self) -> bool {
        self.pieces.iter().all(Piece::is_step)
    }

    /// Upper end of the support.
    pub fn support_end(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.hi)
    }

    /// Interior piece boundaries and the support end.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.hi).collect()
    }

    /// Right-continuous evaluation; zero at and beyond the support end.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.pieces.first().map_or(0.0, |p| p.alpha);
        }
        let idx = self.pieces.partition_point(|p| p.hi <= t);
        self.pieces.get(idx).map_or(0.0, |p| p.eval(t))
    }

    /// Value just left of `t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        let idx = self.pieces.partition_point(|p| p.hi < t);
        match self.pieces.get(idx) {
            Some(p) if p.lo < t => p.eval(t),
            _ => 0.0,
        }
    }

    /// `sup_{0 < t < 1} t^c g(t)`, `c >= 0`.
    pub fn sup_power(&self, c: f64) -> f64 {
        self.pieces.iter().fold(0.0, |m, p| m.max(p.sup_power(c)))
    }

    /// `∫_0^1 g(t) dt`.
    pub fn integral(&self, rule: &LegendreRule) -> f64 {
        compensated_sum(self.pieces.iter().map(|p| {
            if p.is_step() {
                p.alpha * (p.hi - p.lo)
            } else {
                rule.integrate(p.lo, p.hi, |t| p.eval(t))
            }
        }))
    }

    /// Exact `∫_0^1 g(t) h(t) dt` for two profiles.
    pub fn product_integral(&self, other: &Profile) -> f64 {
        let mut acc = CompensatedSum::new();
        let (a, b) = (&self.pieces, &other.pieces);
        let (mut i, mut j) = (0, 0);
        let mut lo = 0.0;
        while i < a.len() && j < b.len() {
            let hi = a[i].hi.min(b[j].hi);
            let (p, r) = (a[i], b[j]);
            if hi > lo {
                acc.add(p.alpha * r.alpha * (hi - lo));
                let cross = p.alpha * r.beta + r.alpha * p.beta;
                if cross != 0.0 {
                    acc.add(cross * (hi / lo).ln());
                }
                let quad = p.beta * r.beta;
                if quad != 0.0 {
                    acc.add(quad * (1.0 / lo - 1.0 / hi));
                }
            }
            lo = hi;
            if a[i].hi <= hi {
                i += 1;
            }
            if b[j].hi <= hi {
                j += 1;
            }
        }
        acc.value()
    }

    /// Precompute the data needed to evaluate `∫_0^1 t^(cq-1) g^q dt` quickly
    /// for many exponents `c`.
    pub fn prepare(&self, q: f64, rule: &LegendreRule) -> PreparedProfile {
        let mut steps = Vec::new();
        let mut nodes = Vec::new();
        if q.is_finite() {
            for p in &self.pieces {
                if p.is_step() {
                    if p.alpha > 0.0 {
                        steps.push((p.alpha.powf(q), p.lo, p.hi));
                    }
                } else {
                    for (t, w) in rule.mapped(p.lo, p.hi) {
                        let g = p.eval(t);
                        if g > 0.0 {
                            nodes.push((t.ln(), w * g.powf(q)));
                        }
                    }
                }
            }
        }
        PreparedProfile { q, steps, nodes, profile: self.clone() }
    }
}

/// A profile bound to one exponent `q`, ready for repeated evaluation of
/// `(∫_0^1 (t^c g)^q dt/t)^(1/q)` (or `sup_t t^c g` when `q = inf`).
#[derive(Debug, Clone)]
pub struct PreparedProfile {
    q: f64,
    steps: Vec<(f64, f64, f64)>,
    nodes: Vec<(f64, f64)>,
    profile: Profile,
}

impl PreparedProfile {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// `∫_0^1 t^(cq - 1) g(t)^q dt`; `+inf` when divergent.
    pub fn power_integral(&self, c: f64) -> f64 {
        let x = c * self.q;
        let mut acc = CompensatedSum::new();
        for &(coef, lo, hi) in &self.steps {
            acc.add(coef * power_increment(lo, hi, x));
        }
        for &(lnt, w) in &self.nodes {
            acc.add(w * ((x - 1.0) * lnt).exp());
        }
        acc.value()
    }

    /// `(∫_0^1 (t^c g)^q dt/t)^(1/q)`, or `sup_{0<t<1} t^c g(t)` for `q = inf`.
    pub fn weighted_norm(&self, c: f64) -> f64 {
        if self.q.is_infinite() {
            self.profile.sup_power(c)
        } else {
            self.power_integral(c).powf(1.0 / self.q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyperbolic() -> Profile {
        // 4 on [0, 1/4), 1/t on [1/4, 1)
        Profile::new(vec![
            Piece::step(0.0, 0.25, 4.0),
            Piece { lo: 0.25, hi: 1.0, alpha: 0.0, beta: 1.0 },
        ])
        .unwrap()
    }

    #[test]
    fn rejects_malformed_pieces() {
        assert!(Profile::new(vec![Piece::step(0.1, 0.5, 1.0)]).is_err());
        assert!(Profile::new(vec![Piece::step(0.0, 1.5, 1.0)]).is_err());
        assert!(Profile::new(vec![Piece { lo: 0.0, hi: 0.5, alpha: 1.0, beta: 1.0 }]).is_err());
        assert!(Profile::new(vec![Piece::step(0.0, 0.5, 1.0), Piece::step(0.6, 1.0, 1.0)]).is_err());
    }

    #[test]
    fn evaluation_is_right_continuous() {
        let p = Profile::from_steps(&[(0.25, 4.0), (1.0, 1.0)]).unwrap();
        assert_eq!(p.eval(0.25), 1.0);
        assert_eq!(p.eval_left(0.25), 4.0);
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(p.eval_left(1.0), 1.0);
        assert_eq!(p.eval(0.1), 4.0);
    }

    #[test]
    fn product_integral_of_hyperbolic_profile() {
        // ∫ min(4, 1/t)^2 = 4 + 3
        let p = hyperbolic();
        assert!((p.product_integral(&p) - 7.0).abs() < 1e-14);
    }

    #[test]
    fn power_integral_matches_quadrature() {
        let p = hyperbolic();
        let rule = LegendreRule::new(16);
        let prep = p.prepare(2.0, &rule);
        // c = 1: ∫ t g^2 dt = 16 * 1/32 + ∫_{1/4}^1 t^{-1} = 0.5 + ln 4
        let v = prep.power_integral(1.0);
        assert!((v - (0.5 + 4f64.ln())).abs() < 1e-13, "{v}");
    }

    #[test]
    fn sup_power_of_hyperbola() {
        let p = hyperbolic();
        // t^c / t on [1/4, 1) with c = 1 is constant 1, step part 4 t <= 1
        assert!((p.sup_power(1.0) - 1.0).abs() < 1e-15);
        // c = 0.5: sup of t^{-1/2} on [1/4,1) is 2 at 1/4, step part 4 * (1/4)^0.5 = 2
        assert!((p.sup_power(0.5) - 2.0).abs() < 1e-15);
        assert_eq!(p.sup_power(0.0), 4.0);
    }
}
