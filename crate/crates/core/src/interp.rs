//! Upper bounds on the K-functional of a pair of grand net spaces and on the
//! real-interpolation norm built from it.
//!
//! `K(t, f) = inf_{f = f0 + f1} ‖f0‖_0 + t ‖f1‖_1` is bounded from above by
//! restricting the decompositions to a finite family. Each decomposition
//! contributes a line `a + t b`, so the bound is the lower envelope of
//! finitely many lines: nondecreasing, concave and exactly computable.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GrandNetError, Result};
use crate::grid::{GridFunction, Net, SpaceParams};
use crate::norms::{grand_net_norm, EpsilonSearch};
use crate::numeric::{log_space, CompensatedSum, LegendreRule};

const SEGMENT_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `f1 = clamp(f, -λ, λ)`, `f0 = f - f1`.
    Truncation,
    /// `f0 = λ f`, `f1 = (1 - λ) f`.
    Scaling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KFuncConfig {
    /// Truncation levels, log-spaced over the range of `|f|`; `0` and `inf`
    /// are always added.
    pub lambda_points: usize,
    /// Scaling weights, uniform on `[0, 1]`.
    pub scaling_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub families: Vec<Family>,
    pub search: EpsilonSearch,
}

impl Default for KFuncConfig {
    fn default() -> Self {
        Self {
            lambda_points: 64,
            scaling_points: 17,
            t_min: 1e-6,
            t_max: 1e6,
            t_points: 256,
            families: vec![Family::Truncation, Family::Scaling],
            search: EpsilonSearch::default(),
        }
    }
}

impl KFuncConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambda_points == 0 || self.t_points < 2 || self.families.is_empty() {
            return Err(GrandNetError::invalid("K-functional grids and families must be nonempty"));
        }
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(GrandNetError::invalid(format!("bad t range [{}, {}]", self.t_min, self.t_max)));
        }
        self.search.validate()
    }

    /// Halved `t` and `λ` spacing; the refined grids contain the old ones.
    pub fn refined(&self) -> Self {
        Self {
            lambda_points: (self.lambda_points * 2).saturating_sub(1).max(1),
            scaling_points: (self.scaling_points * 2).saturating_sub(1),
            t_points: (self.t_points * 2).saturating_sub(1),
            ..self.clone()
        }
    }

    pub fn t_grid(&self) -> Vec<f64> {
        log_space(self.t_min, self.t_max, self.t_points)
    }
}

/// The line `t ↦ a + t b` contributed by one decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionCost {
    /// `‖f0‖_0`
    pub a: f64,
    /// `‖f1‖_1`
    pub b: f64,
}

/// Lower envelope of decomposition lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KUpper {
    /// `‖f‖_0`, the cost of `(f, 0)`.
    pub norm0: f64,
    /// `‖f‖_1`, the cost of `(0, f)`.
    pub norm1: f64,
    pub lines: Vec<DecompositionCost>,
}

impl KUpper {
    pub fn eval(&self, t: f64) -> f64 {
        self.lines.iter().fold(f64::INFINITY, |m, l| m.min(line_at(l, t)))
    }

    /// Points in `(lo, hi)` where the envelope may change slope.
    fn kinks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for (i, l) in self.lines.iter().enumerate() {
            for m in &self.lines[i + 1..] {
                let db = l.b - m.b;
                if db != 0.0 && l.a.is_finite() && m.a.is_finite() && l.b.is_finite() && m.b.is_finite() {
                    let t = (m.a - l.a) / db;
                    if t > lo && t < hi {
                        let v = line_at(l, t);
                        if v <= self.eval(t) * (1.0 + 1e-12) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out
    }
}

fn line_at(l: &DecompositionCost, t: f64) -> f64 {
    if l.b == 0.0 {
        l.a
    } else {
        l.a + t * l.b
    }
}

fn endpoint_norm(f: &GridFunction, params: &SpaceParams, net: &Net, search: &EpsilonSearch) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    Ok(grand_net_norm(f, net, params, search)?.value)
}

/// All decomposition lines of `f` for the configured families.
pub fn decomposition_lines(
    f: &GridFunction,
    p0: &SpaceParams,
    p1: &SpaceParams,
    net: &Net,
    cfg: &KFuncConfig,
) -> Result<KUpper> {
    cfg.validate()?;
    let norm0 = endpoint_norm(f, p0, net, &cfg.search)?;
    let norm1 = endpoint_norm(f, p1, net, &cfg.search)?;
    let mut lines = vec![DecompositionCost { a: norm0, b: 0.0 }, DecompositionCost { a: 0.0, b: norm1 }];

    if cfg.families.contains(&Family::Scaling) {
        let m = cfg.scaling_points.max(2);
        for k in 1..m - 1 {
            let lam = k as f64 / (m - 1) as f64;
            lines.push(DecompositionCost { a: lam * norm0, b: (1.0 - lam) * norm1 });
        }
    }

    if cfg.families.contains(&Family::Truncation) && !f.is_zero() {
        let levels = truncation_levels(f, cfg.lambda_points);
        let truncated: Vec<Result<DecompositionCost>> = levels
            .par_iter()
            .map(|&lam| {
                let f1 = f.map(|v| v.clamp(-lam, lam))?;
                let f0 = f.map(|v| v - v.clamp(-lam, lam))?;
                Ok(DecompositionCost {
                    a: endpoint_norm(&f0, p0, net, &cfg.search)?,
                    b: endpoint_norm(&f1, p1, net, &cfg.search)?,
                })
            })
            .collect();
        for l in truncated {
            lines.push(l?);
        }
    }
    Ok(KUpper { norm0, norm1, lines })
}

/// Interior truncation levels: log-spaced between the smallest and largest
/// nonzero `|f|`, deduplicated.
fn truncation_levels(f: &GridFunction, points: usize) -> Vec<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in f.values().iter().map(|v| v.abs()).filter(|&v| v > 0.0) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(hi > 0.0) {
        return Vec::new();
    }
    let mut levels = if hi > lo { log_space(lo, hi, points) } else { vec![hi] };
    levels.dedup();
    levels
}

/// Upper bound on `K(t, f; X0, X1)` with `Xi = GN^θi_{pi,qi}(net)`.
pub fn k_functional_upper(
    f: &GridFunction,
    t: f64,
    p0: &SpaceParams,
    p1: &SpaceParams,
    net: &Net,
    cfg: &KFuncConfig,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(GrandNetError::domain(format!("K-functional needs t > 0, got {t}")));
    }
    Ok(decomposition_lines(f, p0, p1, net, cfg)?.eval(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpParams {
    pub eta: f64,
    pub q: f64,
    pub p0: SpaceParams,
    pub p1: SpaceParams,
    /// Target exponent with `1/p = (1 - η)/p0 + η/p1`.
    pub p: f64,
}

impl InterpParams {
    /// Parameters with `p` derived from the endpoints.
    pub fn new(eta: f64, q: f64, p0: SpaceParams, p1: SpaceParams) -> Result<Self> {
        let inv = (1.0 - eta) / p0.p + eta / p1.p;
        let me = Self { eta, q, p0, p1, p: 1.0 / inv };
        me.validate()?;
        Ok(me)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(GrandNetError::invalid(format!("eta must lie in (0, 1), got {}", self.eta)));
        }
        if !(self.q >= 1.0 && self.q.is_finite()) {
            return Err(GrandNetError::invalid(format!("interpolation q must lie in [1, inf), got {}", self.q)));
        }
        self.p0.validate()?;
        self.p1.validate()?;
        let inv = (1.0 - self.eta) / self.p0.p + self.eta / self.p1.p;
        if !(self.p > 0.0) || ((1.0 / self.p) - inv).abs() > 1e-12 * inv {
            return Err(GrandNetError::invalid(format!(
                "1/p = {} does not match (1 - eta)/p0 + eta/p1 = {inv}",
                1.0 / self.p
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationBound {
    /// Integral over `(0, inf)`.
    pub value: f64,
    /// Integral over `(0, 1)` only.
    pub unit_window: f64,
}

/// Upper bound on `(∫_0^inf (t^-η K(t, f))^q dt/t)^(1/q)`.
pub fn interpolation_norm_upper(
    f: &GridFunction,
    params: &InterpParams,
    net: &Net,
    cfg: &KFuncConfig,
) -> Result<InterpolationBound> {
    params.validate()?;
    let k = decomposition_lines(f, &params.p0, &params.p1, net, cfg)?;
    Ok(integrate_envelope(&k, params.eta, params.q, cfg))
}

/// `∫ (t^-η K(t))^q dt/t` over `(0, inf)` and `(0, 1)`, then `^(1/q)`.
pub fn integrate_envelope(k: &KUpper, eta: f64, q: f64, cfg: &KFuncConfig) -> InterpolationBound {
    let (a, b) = (k.norm0, k.norm1);
    if a.is_infinite() || b.is_infinite() {
        return InterpolationBound { value: f64::INFINITY, unit_window: f64::INFINITY };
    }
    if a == 0.0 && b == 0.0 {
        return InterpolationBound { value: 0.0, unit_window: 0.0 };
    }
    let rule = LegendreRule::new(SEGMENT_NODES);
    let mut knots = cfg.t_grid();
    knots.push(1.0);
    knots.extend(k.kinks(cfg.t_min, cfg.t_max));
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let integrand = |u: f64| {
        let t = u.exp();
        (t.powf(-eta) * k.eval(t)).powf(q)
    };
    let mut total = CompensatedSum::new();
    let mut window = CompensatedSum::new();
    let head = b.powf(q) * cfg.t_min.powf((1.0 - eta) * q) / ((1.0 - eta) * q);
    total.add(head);
    window.add(head);
    for w in knots.windows(2) {
        let v = rule.integrate(w[0].ln(), w[1].ln(), integrand);
        total.add(v);
        if w[1] <= 1.0 {
            window.add(v);
        }
    }
    total.add(a.powf(q) * cfg.t_max.powf(-eta * q) / (eta * q));
    InterpolationBound {
        value: total.value().powf(1.0 / q),
        unit_window: window.value().powf(1.0 / q),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingReport {
    /// `‖f‖_{GN^θ_{p,q}}`
    pub lhs: f64,
    pub rhs_upper: f64,
    pub rhs_upper_unit_window: f64,
    /// `lhs / rhs_upper`, zero for `f = 0`.
    pub ratio: f64,
}

/// Compare `‖f‖_{GN^θ_{p,q}}` with the interpolation-norm upper bound of the
/// endpoint pair `GN^θ_{p0,q0}`, `GN^θ_{p1,q1}`.
pub fn check_interpolation_embedding(
    f: &GridFunction,
    params: &InterpParams,
    net: &Net,
    cfg: &KFuncConfig,
) -> Result<EmbeddingReport> {
    params.validate()?;
    let theta = params.p0.theta;
    if !(theta > 0.0) || params.p1.theta != theta {
        return Err(GrandNetError::invalid("embedding check needs a common theta > 0 at both endpoints"));
    }
    if !(params.p0.p < params.p1.p && params.p1.p.is_finite()) {
        return Err(GrandNetError::invalid("embedding check needs p0 < p1 < inf"));
    }
    let target = SpaceParams::with_weight(theta, params.p, params.q, params.p0.weight)?;
    let lhs = endpoint_norm(f, &target, net, &cfg.search)?;
    let rhs = interpolation_norm_upper(f, params, net, cfg)?;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs.value };
    Ok(EmbeddingReport {
        lhs,
        rhs_upper: rhs.value,
        rhs_upper_unit_window: rhs.unit_window,
        ratio,
    })
}
