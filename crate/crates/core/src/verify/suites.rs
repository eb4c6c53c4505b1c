//! Case expansion and evaluation for every suite.
//!
//! Where a check compares two optimized quantities, the optimizer of one
//! side is seeded with the optimum of the other. Each inequality then holds
//! between the computed values themselves, so the constant-1 checks cannot
//! fail through search error.

use serde::{Deserialize, Serialize};

use super::{case_hash, check_passes, random_kernels, CaseResult, SuiteConfig, SuiteId};
use crate::error::{GrandNetError, Result};
use crate::grid::{extended_real, GridFunction, Net, SpaceParams, WeightVariant};
use crate::interp::{check_interpolation_embedding, InterpParams};
use crate::netavg::{full_net_average, holder_pairing, net_average_profile};
use crate::norms::{
    grand_norm_of_profile, log_kernel_closed_form, log_kernel_inf, log_kernel_sup, lorentz_profile,
    uniform_weight_bounds, LorentzVariant, NormResult, ShiftOptions,
};
use crate::opkernel::{boundedness_criterion, empirical_operator_norm, AssociateNorm, Kernel, TargetForm, TargetNorm};
use crate::profile::Profile;
use crate::rearrange::Rearrangement;

/// Self-contained input of one suite case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CaseInput {
    Embedding {
        f: GridFunction,
        net: Net,
        theta: f64,
        p: f64,
        #[serde(with = "extended_real")]
        q: f64,
    },
    NetMonotone {
        f: GridFunction,
        small: Net,
        large: Net,
        theta: f64,
        p: f64,
        #[serde(with = "extended_real")]
        q: f64,
    },
    ThetaMonotone {
        f: GridFunction,
        net: Net,
        theta: f64,
        theta1: f64,
        p: f64,
        #[serde(with = "extended_real")]
        q: f64,
    },
    Restriction {
        f: GridFunction,
        net: Net,
        theta: f64,
        p: f64,
        #[serde(with = "extended_real")]
        q: f64,
        delta: f64,
    },
    QShift {
        f: GridFunction,
        net: Net,
        theta: f64,
        p: f64,
        q: f64,
        q1: f64,
    },
    Holder {
        f: GridFunction,
        g: GridFunction,
        net: Net,
        theta: f64,
        p1: f64,
        #[serde(with = "extended_real")]
        s1: f64,
    },
    Sandwich {
        f: GridFunction,
        t: Vec<f64>,
    },
    Lorentz {
        f: GridFunction,
        theta: f64,
        p: f64,
        #[serde(with = "extended_real")]
        q: f64,
    },
    Kernel {
        theta: f64,
        t: f64,
        /// `None` for the supremum identity, `Some(δ)` for the infimum one.
        delta: Option<f64>,
    },
    Interp {
        f: GridFunction,
        net: Net,
        params: InterpParams,
    },
    Operator {
        kernel: Kernel,
        net: Net,
        q: f64,
        theta: f64,
        weight: WeightVariant,
        form: TargetForm,
    },
    QMonotone {
        f: GridFunction,
        net: Net,
        theta: f64,
        p: f64,
        s: f64,
        #[serde(with = "extended_real")]
        s1: f64,
    },
    PqMonotone {
        f: GridFunction,
        net: Net,
        theta: f64,
        p: f64,
        p1: f64,
        s: f64,
        #[serde(with = "extended_real")]
        s1: f64,
    },
}

/// `(2p')^(θ+1)`: bound on `𝒢ℒ / GL` for `θ >= 0`, `q >= 1`.
pub fn holder_lorentz_bound(p: f64, theta: f64) -> f64 {
    let pp = p / (p - 1.0);
    (2.0 * pp).powf(theta + 1.0)
}

/// Lower bound on `GN(M*) / 𝒢ℒ`: `1 / (4 · 3^c)` with `c` the largest
/// exponent `1/p + ε` the norm can use.
pub fn net_lorentz_lower_bound(p: f64, theta: f64) -> f64 {
    let c = if theta == 0.0 { 1.0 / p } else { 1.0 / p + 1.0 };
    1.0 / (4.0 * 3f64.powf(c))
}

/// `2^θ (2r)^r` with `r = 1/q - 1/q1`.
pub fn q_shift_constant(theta: f64, q: f64, q1: f64) -> f64 {
    let r = 1.0 / q - 1.0 / q1;
    2f64.powf(theta) * (2.0 * r).powf(r)
}

struct Check {
    label: String,
    lhs: f64,
    rhs: f64,
    constant: f64,
    abs_tol: f64,
}

fn check(label: impl Into<String>, lhs: f64, rhs: f64, constant: f64, abs_tol: f64) -> Check {
    Check { label: label.into(), lhs, rhs, constant, abs_tol }
}

fn norm(profile: &Profile, theta: f64, p: f64, q: f64, cfg: &SuiteConfig, opts: &ShiftOptions) -> Result<NormResult> {
    grand_norm_of_profile(profile, &SpaceParams::new(theta, p, q)?, &cfg.search, opts)
}

fn seeded(r: &NormResult) -> ShiftOptions {
    ShiftOptions::seeded(r.epsilon.into_iter().collect())
}

fn profile(f: &GridFunction, net: &Net) -> Result<Profile> {
    Ok(net_average_profile(f, net)?.profile)
}

/// Evaluate one case.
pub fn replay_case(input: &CaseInput, cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let tol = cfg.abs_tol;
    let none = ShiftOptions::default();
    let checks = match input {
        CaseInput::Embedding { f, net, theta, p, q } => {
            let g = profile(f, net)?;
            let plus = norm(&g, *theta, *p, *q, cfg, &none)?.value;
            let classical = norm(&g, 0.0, *p, *q, cfg, &none)?.value;
            let minus = norm(&g, -theta, *p, *q, cfg, &none)?.value;
            vec![
                check("GN^theta <= N", plus, classical, 1.0, tol),
                check("N <= GN^-theta", classical, minus, 1.0, tol),
            ]
        }
        CaseInput::NetMonotone { f, small, large, theta, p, q } => {
            let (gs, gl) = (profile(f, small)?, profile(f, large)?);
            let (lhs, rhs) = if *theta >= 0.0 {
                let s = norm(&gs, *theta, *p, *q, cfg, &none)?;
                (s.value, norm(&gl, *theta, *p, *q, cfg, &seeded(&s))?.value)
            } else {
                let l = norm(&gl, *theta, *p, *q, cfg, &none)?;
                (norm(&gs, *theta, *p, *q, cfg, &seeded(&l))?.value, l.value)
            };
            vec![check("small net <= large net", lhs, rhs, 1.0, tol)]
        }
        CaseInput::ThetaMonotone { f, net, theta, theta1, p, q } => {
            let g = profile(f, net)?;
            let (lhs, rhs) = if *theta >= 0.0 {
                let l = norm(&g, *theta1, *p, *q, cfg, &none)?;
                (l.value, norm(&g, *theta, *p, *q, cfg, &seeded(&l))?.value)
            } else {
                let r = norm(&g, *theta, *p, *q, cfg, &none)?;
                (norm(&g, *theta1, *p, *q, cfg, &seeded(&r))?.value, r.value)
            };
            vec![check("GN^theta1 <= GN^theta", lhs, rhs, 1.0, tol)]
        }
        CaseInput::Restriction { f, net, theta, p, q, delta } => restriction(f, net, *theta, *p, *q, *delta, cfg)?,
        CaseInput::QShift { f, net, theta, p, q, q1 } => {
            let g = profile(f, net)?;
            let theta1 = theta + 1.0 / q - 1.0 / q1;
            let l = norm(&g, theta1, *p, *q, cfg, &none)?;
            let seeds = ShiftOptions::seeded(l.epsilon.map(|e| vec![e / 2.0]).unwrap_or_default());
            let r = norm(&g, *theta, *p, *q1, cfg, &seeds)?;
            vec![check("GN^theta1_{p,q} <= C GN^theta_{p,q1}", l.value, r.value, q_shift_constant(*theta, *q, *q1), tol)]
        }
        CaseInput::Holder { f, g, net, theta, p1, s1 } => {
            let p2 = p1 / (p1 - 1.0);
            let s2 = if s1.is_infinite() { 1.0 } else if *s1 == 1.0 { f64::INFINITY } else { s1 / (s1 - 1.0) };
            let (pf, pg) = (profile(f, net)?, profile(g, net)?);
            let lhs = holder_pairing(f, g, net)?;
            let ng = norm(&pg, -theta, p2, s2, cfg, &none)?;
            let nf = norm(&pf, *theta, *p1, *s1, cfg, &seeded(&ng))?;
            vec![check("int fbar gbar <= GN^theta(f) GN^-theta(g)", lhs, nf.value * ng.value, 1.0, tol)]
        }
        CaseInput::Sandwich { f, t } => {
            let r = Rearrangement::new(f);
            let mut out = Vec::with_capacity(2 * t.len());
            for &t in t {
                let bar = full_net_average(f, t)?;
                let dstar = r.maximal_average(t)?;
                let third = full_net_average(f, t / 3.0)?;
                out.push(check(format!("fbar <= f** at t={t}"), bar, dstar, 1.0, tol));
                out.push(check(format!("f** <= 4 fbar(t/3) at t={t}"), dstar, third, 4.0, tol));
            }
            out
        }
        CaseInput::Lorentz { f, theta, p, q } => {
            let star = lorentz_profile(f, LorentzVariant::Star);
            let dstar = lorentz_profile(f, LorentzVariant::DoubleStar);
            let full = profile(f, &Net::Full)?;
            let gl = norm(&star, *theta, *p, *q, cfg, &none)?;
            let gll = norm(&dstar, *theta, *p, *q, cfg, &seeded(&gl))?;
            let gn = norm(&full, *theta, *p, *q, cfg, &seeded(&gll))?;
            let gll = if gn.value > gll.value {
                norm(&dstar, *theta, *p, *q, cfg, &ShiftOptions::seeded(gl.epsilon.into_iter().chain(gn.epsilon).collect()))?
            } else {
                gll
            };
            vec![
                check("GL <= GL**", gl.value, gll.value, 1.0, tol),
                check("GL** <= (2p')^(theta+1) GL", gll.value, gl.value, holder_lorentz_bound(*p, *theta), tol),
                check("GN(full) <= GL**", gn.value, gll.value, 1.0, tol),
                check("GL** <= GN(full) / L", gll.value, gn.value, 1.0 / net_lorentz_lower_bound(*p, *theta), tol),
            ]
        }
        CaseInput::Kernel { theta, t, delta } => {
            let (computed, closed) = match delta {
                None => (log_kernel_sup(*theta, *t, &cfg.search), log_kernel_closed_form(*theta, *t)),
                Some(d) => (log_kernel_inf(*theta, *t, *d, &cfg.search), 1.0 / log_kernel_closed_form(*theta, *t)),
            };
            let label = if delta.is_some() { "inf identity" } else { "sup identity" };
            vec![check(label, (computed - closed).abs(), closed.max(1.0), cfg.rel_tol, 0.0)]
        }
        CaseInput::Interp { f, net, params } => {
            let r = check_interpolation_embedding(f, params, net, &cfg.kfunc)?;
            vec![check("GN^theta_{p,q} / interpolation upper bound", r.ratio, 1.0, f64::INFINITY, 0.0)]
        }
        CaseInput::Operator { kernel, net, q, theta, weight, form } => operator(kernel, net, *q, *theta, *weight, *form, cfg)?,
        CaseInput::QMonotone { f, net, theta, p, s, s1 } => {
            let g = profile(f, net)?;
            let lhs = norm(&g, *theta, *p, *s1, cfg, &none)?.value;
            let rhs = norm(&g, *theta, *p, *s, cfg, &none)?.value;
            vec![check("GN_{p,s1} against GN_{p,s}", lhs, rhs, f64::INFINITY, 0.0)]
        }
        CaseInput::PqMonotone { f, net, theta, p, p1, s, s1 } => {
            let g = profile(f, net)?;
            let lhs = norm(&g, *theta, *p, *s, cfg, &none)?.value;
            let rhs = norm(&g, *theta, *p1, *s1, cfg, &none)?.value;
            vec![check("GN_{p,s} against GN_{p1,s1}", lhs, rhs, f64::INFINITY, 0.0)]
        }
    };
    Ok(checks
        .into_iter()
        .map(|c| CaseResult {
            hash: case_hash(input, &c.label),
            pass: check_passes(c.lhs, c.rhs, c.constant, c.abs_tol),
            label: c.label,
            lhs: c.lhs,
            rhs: c.rhs,
            constant: c.constant,
            abs_tol: c.abs_tol,
            replay: input.clone(),
        })
        .collect())
}

fn restriction(f: &GridFunction, net: &Net, theta: f64, p: f64, q: f64, delta: f64, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let g = profile(f, net)?;
    let tol = cfg.restriction_tol;
    let none = ShiftOptions::default();
    let mut out = Vec::new();

    // sup branch: δ^θ full <= restricted <= full
    let full = norm(&g, theta, p, q, cfg, &none)?;
    let seeds = full.epsilon.map(|e| vec![delta * e]).unwrap_or_default();
    let restricted = norm(&g, theta, p, q, cfg, &ShiftOptions { eps_max: Some(delta), seeds })?;
    let full = norm(&g, theta, p, q, cfg, &seeded(&restricted))?.value.max(full.value);
    out.push(check("sup: restricted <= full", restricted.value, full, 1.0, tol));
    out.push(check("sup: full <= delta^-theta restricted", full, restricted.value, delta.powf(-theta), tol));

    // inf branch: full <= restricted <= δ^-θ full, for δ < 1/p
    if delta < 1.0 / p {
        let full = norm(&g, -theta, p, q, cfg, &none)?;
        let seeds = full.epsilon.map(|e| vec![e * p * delta]).unwrap_or_default();
        let restricted = norm(&g, -theta, p, q, cfg, &ShiftOptions { eps_max: Some(delta), seeds })?;
        let full = norm(&g, -theta, p, q, cfg, &seeded(&restricted))?.value.min(full.value);
        out.push(check("inf: full <= restricted", full, restricted.value, 1.0, tol));
        out.push(check("inf: restricted <= delta^-theta full", restricted.value, full, delta.powf(-theta), tol));
    }
    Ok(out)
}

fn operator(
    kernel: &Kernel,
    net: &Net,
    q: f64,
    theta: f64,
    weight: WeightVariant,
    form: TargetForm,
    cfg: &SuiteConfig,
) -> Result<Vec<Check>> {
    let assoc = AssociateNorm::LpDual { p_prime: 2.0 };
    let target = TargetNorm { net: net.clone(), q, theta, weight, form };
    let criterion = boundedness_criterion(kernel, net, q, theta, &assoc, weight, &cfg.search)?;
    let empirical = empirical_operator_norm(kernel, &assoc.source(), &target, &[], &cfg.search)?.value;
    let slack = cfg.rel_tol * criterion.abs();
    Ok(match form {
        TargetForm::WeightedSup => vec![
            check("empirical <= criterion", empirical, criterion, 1.0, slack),
            check("criterion <= empirical", criterion, empirical, 1.0, slack),
        ],
        TargetForm::Grand => {
            let (lo, hi) = uniform_weight_bounds(theta);
            vec![
                check("empirical <= r_max criterion", empirical, criterion, hi, slack),
                check("criterion <= empirical / r_min", criterion, empirical, 1.0 / lo, slack),
            ]
        }
    })
}

fn signed_thetas(cfg: &SuiteConfig) -> Vec<f64> {
    let mut out: Vec<f64> = cfg.sweep.theta.iter().flat_map(|&t| [t, -t]).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn positive_thetas(cfg: &SuiteConfig) -> Vec<f64> {
    cfg.sweep.theta.iter().copied().filter(|&t| t > 0.0).collect()
}

fn finite_p(cfg: &SuiteConfig) -> Vec<f64> {
    cfg.sweep.p.iter().copied().filter(|p| p.is_finite()).collect()
}

/// Ordered pairs `a < b` of sweep values that are at least 1.
fn increasing_pairs(values: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &a in values.iter().filter(|&&a| a >= 1.0) {
        for &b in values {
            if a < b {
                out.push((a, b));
            }
        }
    }
    out
}

/// Build the inputs of suite `id`.
pub(super) fn expand(id: SuiteId, corpus: &[GridFunction], seed: u64, cfg: &SuiteConfig) -> Result<Vec<CaseInput>> {
    let sw = &cfg.sweep;
    if sw.p.iter().any(|&p| !(p >= 1.0)) {
        return Err(GrandNetError::invalid("suite sweeps need p >= 1"));
    }
    let mut out = Vec::new();
    match id {
        SuiteId::S1 => {
            for f in corpus {
                for net in &sw.nets {
                    for &theta in &positive_thetas(cfg) {
                        for &p in &finite_p(cfg) {
                            for &q in &sw.q {
                                out.push(CaseInput::Embedding { f: f.clone(), net: net.clone(), theta, p, q });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S2 => {
            for f in corpus {
                let mut chain = Vec::new();
                if f.n().is_power_of_two() {
                    chain.push((Net::Dyadic, Net::GridIntervals));
                }
                chain.push((Net::GridIntervals, Net::Full));
                for (small, large) in chain {
                    for &theta in &signed_thetas(cfg) {
                        for &p in &finite_p(cfg) {
                            for &q in &sw.q {
                                out.push(CaseInput::NetMonotone {
                                    f: f.clone(),
                                    small: small.clone(),
                                    large: large.clone(),
                                    theta,
                                    p,
                                    q,
                                });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S3 => {
            let thetas = signed_thetas(cfg);
            for f in corpus {
                for net in &sw.nets {
                    for w in thetas.windows(2) {
                        for &p in &finite_p(cfg) {
                            for &q in &sw.q {
                                out.push(CaseInput::ThetaMonotone {
                                    f: f.clone(),
                                    net: net.clone(),
                                    theta: w[0],
                                    theta1: w[1],
                                    p,
                                    q,
                                });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S4 => {
            for f in corpus {
                for net in &sw.nets {
                    for &theta in &positive_thetas(cfg) {
                        for &p in &finite_p(cfg) {
                            for &q in &sw.q {
                                for &delta in &sw.delta {
                                    out.push(CaseInput::Restriction { f: f.clone(), net: net.clone(), theta, p, q, delta });
                                }
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S5 => {
            let finite_q: Vec<f64> = sw.q.iter().copied().filter(|q| q.is_finite()).collect();
            let mut pairs = increasing_pairs(&finite_q);
            for &q in &finite_q {
                if !pairs.contains(&(q, 2.0 * q)) {
                    pairs.push((q, 2.0 * q));
                }
            }
            for f in corpus {
                for net in &sw.nets {
                    for &theta in &positive_thetas(cfg) {
                        for &p in &finite_p(cfg) {
                            for &(q, q1) in &pairs {
                                out.push(CaseInput::QShift { f: f.clone(), net: net.clone(), theta, p, q, q1 });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S6 => {
            for (i, f) in corpus.iter().enumerate() {
                let g = holder_partner(corpus, i)?;
                for net in &sw.nets {
                    for &theta in sw.theta.iter().filter(|&&t| t >= 0.0) {
                        for &p1 in finite_p(cfg).iter().filter(|&&p| p > 1.0) {
                            for &s1 in sw.q.iter().filter(|&&s| s >= 1.0) {
                                out.push(CaseInput::Holder { f: f.clone(), g: g.clone(), net: net.clone(), theta, p1, s1 });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S7 => {
            let m = cfg.sandwich_points.max(1);
            let t: Vec<f64> = (1..=m).map(|k| 0.74 * k as f64 / m as f64).collect();
            out.extend(corpus.iter().map(|f| CaseInput::Sandwich { f: f.clone(), t: t.clone() }));
        }
        SuiteId::S8 => {
            for f in corpus {
                for &theta in sw.theta.iter().filter(|&&t| t >= 0.0) {
                    for &p in finite_p(cfg).iter().filter(|&&p| p > 1.0) {
                        for &q in sw.q.iter().filter(|&&q| q >= 1.0) {
                            out.push(CaseInput::Lorentz { f: f.clone(), theta, p, q });
                        }
                    }
                }
            }
        }
        SuiteId::S9 => {
            let m = cfg.kernel_points.max(2);
            for &theta in &positive_thetas(cfg) {
                for k in 0..m {
                    let l = theta + 20.0 * k as f64 / (m - 1) as f64;
                    out.push(CaseInput::Kernel { theta, t: (-l).exp(), delta: None });
                }
                for &delta in &sw.delta {
                    for k in 0..m {
                        let l = theta / delta + 20.0 * k as f64 / (m - 1) as f64;
                        out.push(CaseInput::Kernel { theta, t: (-l).exp(), delta: Some(delta) });
                    }
                }
            }
        }
        SuiteId::S10 => {
            let p0 = SpaceParams::with_weight(1.0, 1.0, 2.0, cfg.weight)?;
            let p1 = SpaceParams::with_weight(1.0, 2.0, 2.0, cfg.weight)?;
            let params = InterpParams::new(0.5, 2.0, p0, p1)?;
            let net = sw.nets.first().cloned().unwrap_or(Net::GridIntervals);
            out.extend(corpus.iter().map(|f| CaseInput::Interp { f: f.clone(), net: net.clone(), params }));
        }
        SuiteId::S11 => {
            let nets: Vec<Net> = sw.nets.iter().filter(|n| n.is_enumerable()).cloned().collect();
            let qs: Vec<f64> = sw.q.iter().copied().filter(|&q| q > 1.0 && q.is_finite()).collect();
            for kernel in random_kernels(cfg.kernel_count, cfg.kernel_n, seed)? {
                for net in &nets {
                    for &q in &qs {
                        for &theta in sw.theta.iter().filter(|&&t| t >= 0.0) {
                            let mut forms = vec![TargetForm::WeightedSup];
                            if theta > 0.0 {
                                forms.push(TargetForm::Grand);
                            }
                            for form in forms {
                                out.push(CaseInput::Operator {
                                    kernel: kernel.clone(),
                                    net: net.clone(),
                                    q,
                                    theta,
                                    weight: cfg.weight,
                                    form,
                                });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S12 => {
            let pairs = increasing_pairs(&sw.q);
            for f in corpus {
                for net in &sw.nets {
                    for &theta in &signed_thetas(cfg) {
                        for &p in &finite_p(cfg) {
                            for &(s, s1) in &pairs {
                                out.push(CaseInput::QMonotone { f: f.clone(), net: net.clone(), theta, p, s, s1 });
                            }
                        }
                    }
                }
            }
        }
        SuiteId::S13 => {
            let qpairs = increasing_pairs(&sw.q);
            let ppairs = increasing_pairs(&finite_p(cfg));
            for f in corpus {
                for net in &sw.nets {
                    for &theta in &signed_thetas(cfg) {
                        for &(p, p1) in &ppairs {
                            for &(s, s1) in &qpairs {
                                out.push(CaseInput::PqMonotone { f: f.clone(), net: net.clone(), theta, p, p1, s, s1 });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Partner of `corpus[i]` in the Hölder suite: the next function with the
/// same resolution, or `f` reversed when there is none.
fn holder_partner(corpus: &[GridFunction], i: usize) -> Result<GridFunction> {
    let f = &corpus[i];
    let len = corpus.len();
    if let Some(g) = (1..len).map(|k| &corpus[(i + k) % len]).find(|g| g.n() == f.n()) {
        return Ok(g.clone());
    }
    GridFunction::new(f.values().iter().rev().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SuiteConfig {
        SuiteConfig::default()
    }

    fn one() -> GridFunction {
        GridFunction::constant(4, 1.0).unwrap()
    }

    #[test]
    fn holder_example() {
        // f = g = 1, full net, p1 = s1 = 2, θ = 1: 1 <= 3^{-1/2} · 3√3 = 3
        let input = CaseInput::Holder { f: one(), g: one(), net: Net::Full, theta: 1.0, p1: 2.0, s1: 2.0 };
        let r = replay_case(&input, &cfg()).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].lhs - 1.0).abs() < 1e-14);
        assert!((r[0].rhs - 3.0).abs() < 1e-9, "{}", r[0].rhs);
        assert!(r[0].pass);
    }

    #[test]
    fn sandwich_example() {
        let f = GridFunction::new(vec![1.0, 1.0, -1.0, -1.0]).unwrap();
        let r = replay_case(&CaseInput::Sandwich { f, t: vec![0.2] }, &cfg()).unwrap();
        assert!((r[0].lhs - 1.0).abs() < 1e-15 && (r[0].rhs - 1.0).abs() < 1e-15);
        assert!((r[1].lhs - 1.0).abs() < 1e-15 && (r[1].rhs - 1.0).abs() < 1e-15);
        assert!(r.iter().all(|c| c.pass));
    }

    #[test]
    fn theta_monotone_is_structural() {
        let f = GridFunction::new(vec![0.3, -1.2, 2.0, 0.0, 0.7, -0.1]).unwrap();
        for net in [Net::Full, Net::GridIntervals] {
            let input = CaseInput::ThetaMonotone { f: f.clone(), net, theta: 0.5, theta1: 1.0, p: 2.0, q: 2.0 };
            let r = replay_case(&input, &cfg()).unwrap();
            assert!(r[0].pass && r[0].lhs <= r[0].rhs);
        }
    }

    #[test]
    fn replay_is_bit_identical() {
        let f = GridFunction::new(vec![0.3, -1.2, 2.0, 0.5]).unwrap();
        let input = CaseInput::Lorentz { f, theta: 0.5, p: 2.0, q: 1.0 };
        let a = replay_case(&input, &cfg()).unwrap();
        let json = serde_json::to_string(&a[0].replay).unwrap();
        let back: CaseInput = serde_json::from_str(&json).unwrap();
        assert_eq!(replay_case(&back, &cfg()).unwrap(), a);
    }

    #[test]
    fn derived_constants() {
        assert!((holder_lorentz_bound(2.0, 0.0) - 4.0).abs() < 1e-15);
        assert!((holder_lorentz_bound(2.0, 1.0) - 16.0).abs() < 1e-15);
        assert!((net_lorentz_lower_bound(1.0, 0.0) - 1.0 / 12.0).abs() < 1e-15);
        assert!((net_lorentz_lower_bound(1.0, 1.0) - 1.0 / 36.0).abs() < 1e-15);
        // q = 1, q1 = 2: r = 1/2, 2^θ · 1
        assert!((q_shift_constant(1.0, 1.0, 2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn expansion_sizes() {
        let corpus = vec![one(), GridFunction::constant(3, 2.0).unwrap()];
        let c = cfg();
        // 2 functions × 2 nets × 3 θ × 3 p × 3 q
        assert_eq!(expand(SuiteId::S1, &corpus, 1, &c).unwrap().len(), 108);
        // n = 4 gets the dyadic pair too
        assert_eq!(expand(SuiteId::S2, &corpus, 1, &c).unwrap().len(), 3 * 7 * 9);
        assert_eq!(expand(SuiteId::S9, &corpus, 1, &c).unwrap().len(), 3 * 3 * 50);
    }
}
