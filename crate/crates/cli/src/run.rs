use std::path::Path;

use grandnet::interp::{check_interpolation_embedding, decomposition_lines, InterpParams, KFuncConfig};
use grandnet::netavg::net_average_profile;
use grandnet::norms::{grand_norm_of_profile, lorentz_profile, LorentzVariant, ShiftOptions};
use grandnet::opkernel::{certify, AssociateNorm, Kernel, TargetForm, TargetNorm};
use grandnet::verify::{generate_corpus, run_suite, CorpusSpec, SuiteConfig, SuiteId, SuiteReport};
use grandnet::{EpsilonSearch, Net, Rearrangement, SpaceParams, WeightVariant};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::io::{emit, load_corpus, load_function, parse_json, read_text, to_csv, to_json};
use crate::CliError;

fn required<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("missing required option --{name}")))
}

fn function(a: &FunctionArgs) -> Result<grandnet::GridFunction, CliError> {
    load_function(a.values.as_deref(), a.input.as_deref())
}

fn weight(w: Option<WeightArg>) -> WeightVariant {
    w.map(Into::into).unwrap_or_default()
}

fn kfunc_config(g: &GridArgs, search: EpsilonSearch) -> KFuncConfig {
    let d = KFuncConfig::default();
    KFuncConfig {
        lambda_points: g.lambda_points.unwrap_or(d.lambda_points),
        scaling_points: g.scaling_points.unwrap_or(d.scaling_points),
        t_min: g.t_min.unwrap_or(d.t_min),
        t_max: g.t_max.unwrap_or(d.t_max),
        t_points: g.t_points.unwrap_or(d.t_points),
        search,
        ..d
    }
}

pub fn norm(a: &NormArgs, out: Option<&Path>) -> Result<(), CliError> {
    let f = function(&a.function)?;
    let space = a.space.unwrap_or(Space::Gn);
    let theta = a.theta.unwrap_or(0.0);
    if space == Space::Net && theta != 0.0 {
        return Err(CliError::Input("space `net` has no theta; drop --theta or use --space gn".into()));
    }
    let params = SpaceParams::with_weight(theta, required(a.p, "p")?, required(a.q, "q")?, weight(a.weight))?;
    let search = a.search.build();
    let net: Net = a.net.unwrap_or(NetArg::Full).into();
    let profile = match space {
        Space::Gn | Space::Net => net_average_profile(&f, &net)?.profile,
        Space::GlStar => lorentz_profile(&f, LorentzVariant::Star),
        Space::GlDstar => lorentz_profile(&f, LorentzVariant::DoubleStar),
    };
    let opts = ShiftOptions { eps_max: a.eps_max, seeds: Vec::new() };
    let result = grand_norm_of_profile(&profile, &params, &search, &opts)?;
    let net_label = matches!(space, Space::Gn | Space::Net).then(|| net.label());
    let report = json!({
        "space": space,
        "net": net_label,
        "n": f.n(),
        "params": params,
        "eps_max": a.eps_max,
        "search": search,
        "weight_variant": params.weight,
        "converged": result.converged(search.rel_tol),
        "result": result,
    });
    emit(out, &to_json(&report))
}

pub fn avg(a: &AvgArgs, out: Option<&Path>) -> Result<(), CliError> {
    let f = function(&a.function)?;
    let net: Net = a.net.unwrap_or(NetArg::Full).into();
    let profile = net_average_profile(&f, &net)?;
    let rows = profile
        .segments(a.subdivisions.unwrap_or(16))
        .into_iter()
        .map(|(lo, hi, v)| vec![lo, hi, v]);
    emit(out, &to_csv(&["t_lo", "t_hi", "value"], rows))
}

pub fn rearrange(a: &RearrangeArgs, out: Option<&Path>) -> Result<(), CliError> {
    let f = function(&a.function)?;
    let r = Rearrangement::new(&f);
    let rows = r
        .breakpoints()
        .into_iter()
        .zip(r.sorted_values())
        .map(|(t, &star)| Ok(vec![t, star, r.maximal_average(t)?]))
        .collect::<Result<Vec<_>, CliError>>()?;
    emit(out, &to_csv(&["t", "f_star", "f_double_star"], rows))
}

fn endpoint(theta: Option<f64>, p: Option<f64>, q: Option<f64>, which: &str, w: WeightVariant) -> Result<SpaceParams, CliError> {
    Ok(SpaceParams::with_weight(
        theta.unwrap_or(0.0),
        required(p, &format!("p{which}"))?,
        required(q, &format!("q{which}"))?,
        w,
    )?)
}

pub fn kfunc(a: &KfuncArgs, out: Option<&Path>) -> Result<(), CliError> {
    let f = function(&a.function)?;
    let w = weight(a.weight);
    let e = &a.endpoints;
    let p0 = endpoint(e.theta0, e.p0, e.q0, "0", w)?;
    let p1 = endpoint(e.theta1, e.p1, e.q1, "1", w)?;
    let cfg = kfunc_config(&a.grid, a.search.build());
    let net: Net = a.net.unwrap_or(NetArg::GridIntervals).into();
    let k = decomposition_lines(&f, &p0, &p1, &net, &cfg)?;
    let rows = cfg.t_grid().into_iter().map(|t| vec![t, k.eval(t)]);
    emit(out, &to_csv(&["t", "k_upper"], rows))
}

pub fn interp_check(a: &InterpArgs, out: Option<&Path>) -> Result<(), CliError> {
    let f = function(&a.function)?;
    let w = weight(a.weight);
    let theta = required(a.theta, "theta")?;
    let p0 = endpoint(Some(theta), a.p0, a.q0, "0", w)?;
    let p1 = endpoint(Some(theta), a.p1, a.q1, "1", w)?;
    let params = InterpParams::new(required(a.eta, "eta")?, required(a.q, "q")?, p0, p1)?;
    let cfg = kfunc_config(&a.grid, a.search.build());
    let net: Net = a.net.unwrap_or(NetArg::GridIntervals).into();
    let report = check_interpolation_embedding(&f, &params, &net, &cfg)?;
    let body = json!({
        "net": net.label(),
        "n": f.n(),
        "params": params,
        "kfunc": cfg,
        "weight_variant": w,
        "report": report,
    });
    emit(out, &to_json(&body))
}

pub fn certify_cmd(a: &CertifyArgs, out: Option<&Path>) -> Result<(), CliError> {
    let path = required(a.kernel.as_deref(), "kernel")?;
    let kernel: Kernel = parse_json(path, &read_text(path)?)?;
    let corpus = match &a.corpus {
        Some(p) => load_corpus(p)?,
        None => Vec::new(),
    };
    let p_prime = a.p_prime.unwrap_or(2.0);
    let associate = match a.associate.unwrap_or(AssociateArg::LpDual) {
        AssociateArg::LpDual => AssociateNorm::LpDual { p_prime },
        AssociateArg::GlWeak => AssociateNorm::GlWeak { theta1: a.theta1.unwrap_or(0.0), p_prime },
    };
    let target = TargetNorm {
        net: a.net.unwrap_or(NetArg::GridIntervals).into(),
        q: required(a.q, "q")?,
        theta: a.theta.unwrap_or(0.0),
        weight: weight(a.weight),
        form: match a.target_form.unwrap_or(TargetFormArg::WeightedSup) {
            TargetFormArg::WeightedSup => TargetForm::WeightedSup,
            TargetFormArg::Grand => TargetForm::Grand,
        },
    };
    target.validate()?;
    let cert = certify(&kernel, &target, &associate, &corpus, &a.search.build())?;
    emit(out, &to_json(&cert))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    passed: bool,
    seed: u64,
    corpus: &'a CorpusSpec,
    config: &'a SuiteConfig,
    suites: Vec<SuiteReport>,
}

/// Returns whether every suite passed.
pub fn verify(a: &VerifyArgs, out: Option<&Path>) -> Result<bool, CliError> {
    let ids = parse_suites(a.suite.as_deref().unwrap_or("all"))?;
    let seed = a.seed.unwrap_or(1);
    let d = CorpusSpec::default();
    let spec = CorpusSpec {
        count: a.count.unwrap_or(d.count),
        n_min: a.n_min.unwrap_or(d.n_min),
        n_max: a.n_max.unwrap_or(d.n_max),
        seed,
        ..d
    };
    let mut config = a.settings.clone().unwrap_or_default();
    if let Some(w) = a.weight {
        config.weight = w.into();
    }
    let s = &a.search;
    if s.eps_floor.or(s.rel_tol).is_some() || s.grid_points.or(s.refine_rounds).or(s.quad_nodes).is_some() {
        config.search = s.build();
    }
    let corpus = generate_corpus(&spec)?;
    let mut suites = Vec::with_capacity(ids.len());
    for id in ids {
        let mut r = run_suite(id, &corpus, seed, &config)?;
        eprintln!(
            "{} {} cases={} failures={} worst_constant={:.6}",
            id.name(),
            if r.passed { "PASS" } else { "FAIL" },
            r.case_count,
            r.failures.len(),
            r.worst_constant
        );
        if !a.all_cases.unwrap_or(false) {
            let worst = r.worst_case.clone();
            r.cases.retain(|c| !c.pass || Some(&c.hash) == worst.as_ref());
        }
        suites.push(r);
    }
    let passed = suites.iter().all(|r| r.passed);
    let report = VerifyReport { passed, seed, corpus: &spec, config: &config, suites };
    emit(out, &to_json(&report))?;
    Ok(passed)
}

fn parse_suites(s: &str) -> Result<Vec<SuiteId>, CliError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(SuiteId::ALL.to_vec());
    }
    s.split(',').map(|t| SuiteId::parse(t.trim()).map_err(CliError::from)).collect()
}
