//! Net norms, grand net norms, grand Lorentz norms and their log-weight
//! equivalents.
//!
//! With `g` a profile (`f̄(·, M)`, `f*` or `f**`) and
//! `J_q(c) = (∫_0^1 (t^c g(t))^q dt/t)^(1/q)` (a supremum over `t` when
//! `q = inf`), the grand norms are
//!
//! ```text
//! θ >= 0, p < inf:  sup_{0<ε<=1}   ε^θ J_q(1/p + ε)
//! θ <  0, p < inf:  inf_{0<ε<=1/p} ε^θ J_q(1/p - ε)
//! θ >= 0, p = inf:  sup_{0<ε<=1}   ε^θ J_q(ε)
//! ```
//!
//! and `θ = 0` is evaluated directly as `J_q(1/p)`.

mod search;

pub use search::{EpsilonSearch, Goal, SearchOutcome};

use serde::{Serialize, Serializer};

use crate::error::{GrandNetError, Result};
use crate::grid::{GridFunction, Net, SpaceParams, WeightVariant};
use crate::netavg::net_average_profile;
use crate::numeric::LegendreRule;
use crate::profile::{Piece, Profile};
use crate::rearrange::Rearrangement;

/// Which definition branch produced a norm value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `θ = 0`: the classical net or Lorentz norm.
    Classical,
    /// `θ > 0`, `p < inf`.
    SupShift,
    /// `θ < 0`, `p < inf`.
    InfShift,
    /// `θ > 0`, `p = inf`.
    SupPowerOnly,
    /// Closed-form logarithmic weight.
    LogWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    /// `null` in JSON when the norm is infinite.
    #[serde(serialize_with = "finite_or_null")]
    pub value: f64,
    pub infinite: bool,
    /// Optimal `ε`, when an `ε`-optimization ran.
    pub epsilon: Option<f64>,
    /// `|optimum on the full grid - optimum on the half grid|`.
    pub gap: f64,
    pub branch: Branch,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

impl NormResult {
    fn direct(value: f64, branch: Branch) -> Self {
        Self {
            value,
            infinite: value.is_infinite(),
            epsilon: None,
            gap: 0.0,
            branch,
        }
    }

    /// Whether the search gap meets `rel_tol`.
    pub fn converged(&self, rel_tol: f64) -> bool {
        self.infinite || self.gap <= rel_tol * self.value.abs().max(f64::MIN_POSITIVE)
    }
}

/// Grand Lorentz norm variants: built on `f*` or on `f**`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LorentzVariant {
    Star,
    DoubleStar,
}

/// Extra controls for [`grand_norm_of_profile`].
#[derive(Debug, Clone, Default)]
pub struct ShiftOptions {
    /// Restrict `ε` to `(0, eps_max]` instead of `(0, 1]` or `(0, 1/p]`.
    pub eps_max: Option<f64>,
    /// Additional candidate `ε` values for the optimizer.
    pub seeds: Vec<f64>,
}

impl ShiftOptions {
    pub fn restricted(eps_max: f64) -> Self {
        Self { eps_max: Some(eps_max), seeds: Vec::new() }
    }

    pub fn seeded(seeds: Vec<f64>) -> Self {
        Self { eps_max: None, seeds }
    }
}

/// Default upper end of the `ε` range for `params`.
pub fn default_eps_upper(params: &SpaceParams) -> f64 {
    if params.theta < 0.0 {
        1.0 / params.p
    } else {
        1.0
    }
}

/// Grand norm of an arbitrary profile.
pub fn grand_norm_of_profile(
    profile: &Profile,
    params: &SpaceParams,
    search: &EpsilonSearch,
    opts: &ShiftOptions,
) -> Result<NormResult> {
    params.validate()?;
    search.validate()?;
    let rule = LegendreRule::new(search.quad_nodes);
    let prepared = profile.prepare(params.q, &rule);
    let base = if params.p.is_infinite() { 0.0 } else { 1.0 / params.p };
    let theta = params.theta;

    let upper_default = default_eps_upper(params);
    let upper = match opts.eps_max {
        None => upper_default,
        Some(d) if d > 0.0 && d <= upper_default => d,
        Some(d) => {
            return Err(GrandNetError::invalid(format!(
                "epsilon restriction {d} outside (0, {upper_default}]"
            )))
        }
    };

    if theta == 0.0 {
        return Ok(NormResult::direct(prepared.weighted_norm(base), Branch::Classical));
    }

    let mut seeds: Vec<f64> = profile
        .breakpoints()
        .into_iter()
        .filter(|&b| b > 0.0 && b < 1.0)
        .map(|b| (theta.abs() / b.ln().abs()).min(upper))
        .collect();
    seeds.push(upper);
    seeds.extend(opts.seeds.iter().copied());

    // p = inf, q < inf: near ε = 0 the objective behaves like
    // g(0+) q^{-1/q} ε^{θ - 1/q}, which the grid cannot reach
    let mut small_eps_limit = 0.0;
    if theta > 0.0 && params.p.is_infinite() && params.q.is_finite() {
        let g0 = profile.eval(0.0).abs();
        if g0 > 0.0 {
            let r = theta - 1.0 / params.q;
            if r < 0.0 {
                return Ok(NormResult {
                    value: f64::INFINITY,
                    infinite: true,
                    epsilon: None,
                    gap: 0.0,
                    branch: Branch::SupPowerOnly,
                });
            }
            if r == 0.0 {
                small_eps_limit = g0 * params.q.powf(-1.0 / params.q);
            }
        }
    }

    let (outcome, branch) = if theta > 0.0 {
        let branch = if params.p.is_infinite() { Branch::SupPowerOnly } else { Branch::SupShift };
        let obj = |e: f64| e.powf(theta) * prepared.weighted_norm(base + e);
        let mut outcome = search.maximize(obj, upper, &seeds);
        outcome.value = outcome.value.max(small_eps_limit);
        (outcome, branch)
    } else {
        let obj = |e: f64| e.powf(theta) * prepared.weighted_norm(base - e);
        (search.minimize(obj, upper, &seeds), Branch::InfShift)
    };
    Ok(NormResult {
        value: outcome.value,
        infinite: outcome.value.is_infinite(),
        epsilon: Some(outcome.argopt),
        gap: outcome.gap,
        branch,
    })
}

/// Classical net norm `‖f‖_{N_{p,q}(M)}`.
pub fn net_norm(f: &GridFunction, net: &Net, p: f64, q: f64) -> Result<f64> {
    let params = SpaceParams::new(0.0, p, q)?;
    let profile = net_average_profile(f, net)?.profile;
    Ok(grand_norm_of_profile(&profile, &params, &EpsilonSearch::default(), &ShiftOptions::default())?.value)
}

/// `‖f‖_{GN^θ_{p,q}(M)}`.
pub fn grand_net_norm(f: &GridFunction, net: &Net, params: &SpaceParams, search: &EpsilonSearch) -> Result<NormResult> {
    let profile = net_average_profile(f, net)?.profile;
    grand_norm_of_profile(&profile, params, search, &ShiftOptions::default())
}

/// Grand Lorentz norm on `f*` (`GL`) or on `f**` (`𝒢ℒ`).
pub fn grand_lorentz_norm(
    f: &GridFunction,
    params: &SpaceParams,
    variant: LorentzVariant,
    search: &EpsilonSearch,
) -> Result<NormResult> {
    grand_norm_of_profile(&lorentz_profile(f, variant), params, search, &ShiftOptions::default())
}

pub fn lorentz_profile(f: &GridFunction, variant: LorentzVariant) -> Profile {
    let r = Rearrangement::new(f);
    match variant {
        LorentzVariant::Star => r.star_profile(),
        LorentzVariant::DoubleStar => r.double_star_profile(),
    }
}

/// Stationary point `|θ| / |ln t|` of `ε ↦ ε^θ t^(1/p + ε sign θ)`, capped.
pub fn critical_epsilon(theta: f64, t: f64, cap: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(GrandNetError::domain(format!("critical epsilon needs t in (0, 1), got {t}")));
    }
    if theta == 0.0 || !(cap > 0.0) {
        return Err(GrandNetError::invalid("critical epsilon needs theta != 0 and cap > 0"));
    }
    Ok((theta.abs() / t.ln().abs()).min(cap))
}

/// `sup_{0<ε<=1} ε^θ t^ε` found by the optimizer.
pub fn log_kernel_sup(theta: f64, t: f64, search: &EpsilonSearch) -> f64 {
    search.maximize(|e| e.powf(theta) * t.powf(e), 1.0, &[]).value
}

/// `inf_{0<ε<=δ} ε^{-θ} t^{-ε}` found by the optimizer.
pub fn log_kernel_inf(theta: f64, t: f64, delta: f64, search: &EpsilonSearch) -> f64 {
    search.minimize(|e| e.powf(-theta) * t.powf(-e), delta, &[]).value
}

/// `(θ/e)^θ |ln t|^{-θ}`, the value of `sup_ε ε^θ t^ε` when `|ln t| >= θ`.
pub fn log_kernel_closed_form(theta: f64, t: f64) -> f64 {
    (theta / std::f64::consts::E).powf(theta) * t.ln().abs().powf(-theta)
}

/// Range `[r_min, r_max]` of `sup_{0<ε<=1} ε^θ t^ε · (1 + |ln t|)^θ` over
/// `t ∈ (0, 1)`, for `θ > 0`.
///
/// With `L = |ln t|` the ratio is `e^{-L} (1 + L)^θ` for `L < θ` and
/// `(θ/e)^θ (1 + 1/L)^θ` for `L >= θ`; the extremes come from `L -> 0`,
/// `L -> inf`, `L = θ` and the interior stationary point `L = θ - 1`.
pub fn uniform_weight_bounds(theta: f64) -> (f64, f64) {
    let e = std::f64::consts::E;
    let at_infinity = (theta / e).powf(theta);
    let at_switch = ((1.0 + theta) / e).powf(theta);
    let mut lo = 1.0f64.min(at_infinity).min(at_switch);
    let mut hi = 1.0f64.max(at_infinity).max(at_switch);
    if theta > 1.0 {
        let interior = (1.0 - theta).exp() * theta.powf(theta);
        lo = lo.min(interior);
        hi = hi.max(interior);
    }
    (lo, hi)
}

/// `sup_{lo < t < min(hi, 1)} t^a w(t)^power` in closed form, `a > 0`.
///
/// In `u = ln t` the log of the map has derivative `a - power / w`, so it
/// increases up to `w(u*) = power / a` and decreases afterwards.
pub fn log_weight_sup(a: f64, power: f64, weight: WeightVariant, lo: f64, hi: f64) -> f64 {
    let hi = hi.min(1.0);
    let u_hi = hi.ln();
    let u = if power <= 0.0 {
        u_hi
    } else {
        let target = power / a;
        let u_star = match weight {
            WeightVariant::Paper => -target,
            WeightVariant::Uniform => 1.0 - target,
        };
        u_star.clamp(if lo > 0.0 { lo.ln() } else { f64::NEG_INFINITY }, u_hi)
    };
    if power == 0.0 {
        return (a * u).exp();
    }
    (a * u).exp() * weight.weight_at_log(u).powf(power)
}

/// Theorem-style closed-form equivalents with a logarithmic weight:
/// `sup_t t^{1/p} w(t)^{-θ} f̄(t, M)` for `q = inf` and
/// `(∫_0^1 (t^{1/p} w(t)^{-θ} f̄(t, M))^q dt/t)^{1/q}` otherwise.
pub fn equivalent_log_norm(f: &GridFunction, net: &Net, params: &SpaceParams) -> Result<NormResult> {
    params.validate()?;
    if params.theta == 0.0 || params.p.is_infinite() {
        return Err(GrandNetError::invalid("log-weight equivalents need theta != 0 and p < inf"));
    }
    let profile = net_average_profile(f, net)?.profile;
    let value = log_weighted_norm(&profile, 1.0 / params.p, -params.theta, params.q, params.weight);
    Ok(NormResult::direct(value, Branch::LogWeight))
}

/// `‖t^a w(t)^power g(t)‖` in `L^q(dt/t)` on `(0, 1)`, or its supremum form.
pub fn log_weighted_norm(profile: &Profile, a: f64, power: f64, q: f64, weight: WeightVariant) -> f64 {
    let pieces = profile.pieces();
    let Some(last) = pieces.last() else { return 0.0 };
    let scale = pieces.iter().fold(0.0f64, |m, p| m.max(p.eval(p.lo.max(1e-300))));
    if scale == 0.0 {
        return 0.0;
    }

    // behaviour at t -> 1, where the paper weight vanishes
    let mut end_limit = None;
    if weight == WeightVariant::Paper && last.hi == 1.0 && power < 0.0 {
        let g1 = last.left_limit_at_hi();
        // order of vanishing of g at t = 1
        let order = if g1 > 1e-14 * scale { 0.0 } else { 1.0 };
        if q.is_infinite() {
            let exponent = order + power;
            if exponent < 0.0 {
                return f64::INFINITY;
            }
            if exponent == 0.0 {
                end_limit = Some(if order == 0.0 { g1 } else { last.beta.abs() });
            }
        } else if q * (order + power) <= -1.0 {
            return f64::INFINITY;
        }
    }

    let weight_fn = |t: f64| t.powf(a) * weight.weight(t).powf(power);
    if q.is_infinite() {
        let mut best = end_limit.unwrap_or(0.0);
        for p in pieces {
            let v = if p.is_step() {
                p.alpha * log_weight_sup(a, power, weight, p.lo, p.hi)
            } else {
                piece_sup(p, &|t| weight_fn(t) * p.eval(t))
            };
            best = best.max(v);
        }
        best
    } else {
        let total: f64 = pieces
            .iter()
            .map(|p| {
                let integrand = |t: f64| {
                    if t <= 0.0 || t >= 1.0 {
                        return 0.0;
                    }
                    (weight_fn(t) * p.eval(t)).powf(q) / t
                };
                quadrature::integrate(integrand, p.lo, p.hi, 1e-13).integral
            })
            .sum();
        total.powf(1.0 / q)
    }
}

/// Numerical supremum over one non-step piece, sampled in `ln t`.
fn piece_sup(p: &Piece, h: &dyn Fn(f64) -> f64) -> f64 {
    const SAMPLES: usize = 48;
    let (ua, ub) = (p.lo.ln(), p.hi.ln());
    let at = |u: f64| {
        let t = u.exp();
        if t >= 1.0 {
            h(1.0 - f64::EPSILON)
        } else {
            h(t)
        }
    };
    let pts: Vec<(f64, f64)> = (0..=SAMPLES)
        .map(|i| {
            let u = ua + (ub - ua) * i as f64 / SAMPLES as f64;
            (u, at(u))
        })
        .collect();
    let (imax, &(_, vmax)) = pts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("samples are nonempty");
    let lo = pts[imax.saturating_sub(1)].0;
    let hi = pts[(imax + 1).min(SAMPLES)].0;
    let (_, refined) = search::golden_max(&at, lo, hi);
    vmax.max(refined)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> GridFunction {
        GridFunction::constant(4, 1.0).unwrap()
    }

    fn s() -> EpsilonSearch {
        EpsilonSearch::default()
    }

    fn gn(theta: f64, p: f64, q: f64) -> NormResult {
        grand_net_norm(&one(), &Net::Full, &SpaceParams::new(theta, p, q).unwrap(), &s()).unwrap()
    }

    #[test]
    fn net_norm_examples() {
        assert!((net_norm(&one(), &Net::Full, 2.0, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((net_norm(&one(), &Net::Full, 2.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let zero = GridFunction::constant(3, 0.0).unwrap();
        assert_eq!(net_norm(&zero, &Net::GridIntervals, 2.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn grand_net_norm_examples() {
        let r = gn(1.0, 1.0, 1.0);
        assert!((r.value - 0.5).abs() < 1e-12);
        assert_eq!(r.epsilon, Some(1.0));
        assert_eq!(r.branch, Branch::SupShift);

        let r = gn(-1.0, 2.0, f64::INFINITY);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.branch, Branch::InfShift);

        let r = gn(1.0, 2.0, 2.0);
        assert!((r.value - 3f64.powf(-0.5)).abs() < 1e-12);

        let r = gn(-1.0, 2.0, 2.0);
        assert!((r.value - 27f64.sqrt()).abs() < 1e-9, "{}", r.value);
        assert!((r.epsilon.unwrap() - 1.0 / 3.0).abs() < 1e-6);
        assert!(r.converged(1e-8));
    }

    #[test]
    fn p_infinite_branch() {
        // f = 1, θ = 1, q = inf: sup_ε ε sup_t t^ε = 1
        let r = gn(1.0, f64::INFINITY, f64::INFINITY);
        assert_eq!(r.branch, Branch::SupPowerOnly);
        assert!((r.value - 1.0).abs() < 1e-12);
        // q = 1: sup_ε ε ∫ t^{ε-1} = 1
        assert!((gn(1.0, f64::INFINITY, 1.0).value - 1.0).abs() < 1e-12);
        // θ = 0, p = inf, q finite diverges
        assert!(gn(0.0, f64::INFINITY, 2.0).infinite);
        // θ < 1/q: ε^{θ - 1/q} q^{-1/q} blows up as ε -> 0
        assert!(gn(0.5, f64::INFINITY, 1.0).infinite);
        // θ = 1/q = 1/2: the supremum is the limit 2^{-1/2} at ε -> 0
        assert!((gn(0.5, f64::INFINITY, 2.0).value - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unsupported_branch() {
        let params = SpaceParams { theta: -1.0, p: f64::INFINITY, q: 2.0, weight: WeightVariant::Uniform };
        let err = grand_net_norm(&one(), &Net::Full, &params, &s()).unwrap_err();
        assert!(matches!(err, GrandNetError::UnsupportedBranch(_)));
    }

    #[test]
    fn grand_lorentz_examples() {
        let p = SpaceParams::new(0.0, 2.0, 2.0).unwrap();
        assert!((grand_lorentz_norm(&one(), &p, LorentzVariant::Star, &s()).unwrap().value - 1.0).abs() < 1e-15);
        let spike = GridFunction::new(vec![4.0, 0.0, 0.0, 0.0]).unwrap();
        let p = SpaceParams::new(0.0, 1.0, f64::INFINITY).unwrap();
        assert!((grand_lorentz_norm(&spike, &p, LorentzVariant::Star, &s()).unwrap().value - 1.0).abs() < 1e-15);
        let p = SpaceParams::new(0.5, 2.0, 2.0).unwrap();
        let f = GridFunction::new(vec![0.5, -2.0, 1.0, 3.0, 0.0]).unwrap();
        let a = grand_lorentz_norm(&f, &p, LorentzVariant::Star, &s()).unwrap().value;
        let b = grand_lorentz_norm(&f, &p, LorentzVariant::DoubleStar, &s()).unwrap().value;
        assert!(a <= b);
    }

    #[test]
    fn restricted_search_is_validated() {
        let p = SpaceParams::new(1.0, 2.0, 2.0).unwrap();
        let prof = lorentz_profile(&one(), LorentzVariant::Star);
        assert!(grand_norm_of_profile(&prof, &p, &s(), &ShiftOptions::restricted(1.5)).is_err());
        let full = grand_norm_of_profile(&prof, &p, &s(), &ShiftOptions::default()).unwrap().value;
        let half = grand_norm_of_profile(&prof, &p, &s(), &ShiftOptions::restricted(0.5)).unwrap().value;
        // ε (1 + 2ε)^{-1/2} is increasing
        assert!((half - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        assert!(half <= full);
    }

    #[test]
    fn critical_epsilon_examples() {
        let e = std::f64::consts::E;
        assert!((critical_epsilon(1.0, e.powi(-2), 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(critical_epsilon(2.0, e.powi(-1), 1.0).unwrap(), 1.0);
        assert!((critical_epsilon(-1.0, e.powi(-4), 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(critical_epsilon(1.0, 1.0, 1.0), Err(GrandNetError::OutOfDomain(_))));
        assert!(critical_epsilon(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn log_kernel_identity_at_sample_point() {
        let e = std::f64::consts::E;
        let t = e.powi(-2);
        let sup = log_kernel_sup(1.0, t, &s());
        assert!((sup - 0.5 / e).abs() < 1e-15);
        assert!((log_kernel_closed_form(1.0, t) - 0.5 / e).abs() < 1e-15);
        // inf_{ε<=1/2} ε^{-1} t^{-ε} with |ln t| = 4: ε* = 1/4, value e * 4
        let inf = log_kernel_inf(1.0, e.powi(-4), 0.5, &s());
        assert!((inf - 4.0 * e).abs() < 1e-12);
    }

    #[test]
    fn equivalent_log_norm_examples() {
        let uni = SpaceParams::with_weight(1.0, 1.0, f64::INFINITY, WeightVariant::Uniform).unwrap();
        let r = equivalent_log_norm(&one(), &Net::Full, &uni).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        let paper = SpaceParams { weight: WeightVariant::Paper, ..uni };
        assert!(equivalent_log_norm(&one(), &Net::Full, &paper).unwrap().infinite);
        // θ < 0, paper weight: sup t |ln t| = 1/e
        let neg = SpaceParams::with_weight(-1.0, 1.0, f64::INFINITY, WeightVariant::Paper).unwrap();
        let r = equivalent_log_norm(&one(), &Net::Full, &neg).unwrap();
        assert!((r.value - (-1f64).exp()).abs() < 1e-12);
        assert!(equivalent_log_norm(&one(), &Net::Full, &SpaceParams::new(0.0, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn equivalent_log_norm_integral_form() {
        // f = 1, θ = 1, p = 1, s = 2, uniform: ∫_0^1 t (1 + |ln t|)^{-2} dt = ∫_0^∞ e^{-2u} (1+u)^{-2} du
        let p = SpaceParams::with_weight(1.0, 1.0, 2.0, WeightVariant::Uniform).unwrap();
        let got = equivalent_log_norm(&one(), &Net::Full, &p).unwrap().value;
        let rule = LegendreRule::new(64);
        let want: f64 = (0..200)
            .map(|k| rule.integrate(k as f64 * 0.25, (k + 1) as f64 * 0.25, |u| (-2.0 * u).exp() / (1.0 + u).powi(2)))
            .sum();
        assert!((got - want.sqrt()).abs() < 1e-10, "{got} vs {}", want.sqrt());
        // paper weight with θ s >= 1 diverges at t = 1
        let p = SpaceParams::with_weight(1.0, 1.0, 2.0, WeightVariant::Paper).unwrap();
        assert!(equivalent_log_norm(&one(), &Net::Full, &p).unwrap().infinite);
        // θ s < 1 converges
        let p = SpaceParams::with_weight(0.25, 1.0, 2.0, WeightVariant::Paper).unwrap();
        assert!(equivalent_log_norm(&one(), &Net::Full, &p).unwrap().value.is_finite());
    }

    #[test]
    fn weight_sup_closed_form() {
        // t^{1/2} (1 + |ln t|)^{-1} is increasing on (0, 1)
        assert!((log_weight_sup(0.5, -1.0, WeightVariant::Uniform, 0.0, 1.0) - 1.0).abs() < 1e-15);
        // t |ln t| peaks at 1/e
        assert!((log_weight_sup(1.0, 1.0, WeightVariant::Paper, 0.0, 1.0) - (-1f64).exp()).abs() < 1e-15);
        // restricted below the peak
        let v = log_weight_sup(1.0, 1.0, WeightVariant::Paper, 0.0, 0.1);
        assert!((v - 0.1 * 10f64.ln()).abs() < 1e-15);
        assert!(log_weight_sup(0.5, -1.0, WeightVariant::Paper, 0.0, 1.0).is_infinite());
    }

    #[test]
    fn uniform_bounds() {
        let (lo, hi) = uniform_weight_bounds(1.0);
        assert!((lo - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(hi, 1.0);
        let (lo, hi) = uniform_weight_bounds(0.5);
        assert!((lo - (0.5 / std::f64::consts::E).sqrt()).abs() < 1e-15);
        assert_eq!(hi, 1.0);
        let (_, hi) = uniform_weight_bounds(2.0);
        assert!((hi - 4.0 * (-1f64).exp()).abs() < 1e-15);
    }
}
