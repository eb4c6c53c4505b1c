//! Integral operators `Tf(y) = ∫ K(x, y) f(x) dx` with cell-averaged kernels,
//! the column-average boundedness criterion, the double-average criterion
//! for quasi weak type, and duality-based lower bounds on `‖T‖`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GrandNetError, Result};
use crate::grid::{net_members, GridFunction, Net, NetMember, SpaceParams, WeightVariant};
use crate::netavg::net_average_profile;
use crate::norms::{grand_lorentz_norm, grand_net_norm, log_weight_sup, log_weighted_norm, EpsilonSearch, LorentzVariant};
use crate::numeric::CompensatedSum;

/// Cell averages of `K` on an `nx × ny` product grid; row `i` is x-cell `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKernel", into = "RawKernel")]
pub struct Kernel {
    nx: usize,
    ny: usize,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    nx: usize,
    ny: usize,
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawKernel> for Kernel {
    type Error = GrandNetError;

    fn try_from(raw: RawKernel) -> Result<Self> {
        if raw.values.len() != raw.nx {
            return Err(GrandNetError::invalid(format!("nx = {} but {} rows given", raw.nx, raw.values.len())));
        }
        for (i, row) in raw.values.iter().enumerate() {
            if row.len() != raw.ny {
                return Err(GrandNetError::invalid(format!("row {i} has {} entries, expected ny = {}", row.len(), raw.ny)));
            }
        }
        Kernel::new(raw.values)
    }
}

impl From<Kernel> for RawKernel {
    fn from(k: Kernel) -> Self {
        RawKernel { nx: k.nx, ny: k.ny, values: k.values }
    }
}

impl Kernel {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let nx = values.len();
        let ny = values.first().map_or(0, Vec::len);
        if nx == 0 || ny == 0 {
            return Err(GrandNetError::invalid("kernel must have at least one cell"));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != ny {
                return Err(GrandNetError::invalid(format!("kernel row {i} is ragged")));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(GrandNetError::invalid(format!("kernel entry ({i}, {j}) is not finite")));
            }
        }
        Ok(Self { nx, ny, values })
    }

    pub fn from_fn(nx: usize, ny: usize, k: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new((0..nx).map(|i| (0..ny).map(|j| k(i, j)).collect()).collect())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// `g_j = (1/nx) Σ_i K(i, j) f_i`.
pub fn apply_operator(k: &Kernel, f: &GridFunction) -> Result<GridFunction> {
    if f.n() != k.nx {
        return Err(GrandNetError::invalid(format!("function has n = {}, kernel has nx = {}", f.n(), k.nx)));
    }
    let nx = k.nx as f64;
    let g = (0..k.ny)
        .map(|j| {
            let s: CompensatedSum = k.values.iter().zip(f.values()).map(|(row, &fi)| row[j] * fi).collect();
            s.value() / nx
        })
        .collect();
    GridFunction::new(g)
}

/// `h(i) = (1/|ω|) Σ_{j∈ω} K(i, j) / ny`, the mean of row `i` over `ω`.
pub fn column_average(k: &Kernel, cells: &[usize]) -> Result<GridFunction> {
    if cells.is_empty() {
        return Err(GrandNetError::invalid("column average over an empty set"));
    }
    if let Some(&j) = cells.iter().find(|&&j| j >= k.ny) {
        return Err(GrandNetError::invalid(format!("cell {j} outside the y-grid of size {}", k.ny)));
    }
    let m = cells.len() as f64;
    let h = k
        .values
        .iter()
        .map(|row| {
            let s: CompensatedSum = cells.iter().map(|&j| row[j]).collect();
            s.value() / m
        })
        .collect();
    GridFunction::new(h)
}

/// Norm of the associate space used in the boundedness criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AssociateNorm {
    /// `L^{p'}`, associate of `L^p`.
    LpDual { p_prime: f64 },
    /// `GL^{-θ1}_{p',inf}`, associate of `GL^{θ1}_{p,1}`.
    GlWeak { theta1: f64, p_prime: f64 },
}

impl AssociateNorm {
    pub fn validate(&self) -> Result<()> {
        let (pp, theta1) = match *self {
            AssociateNorm::LpDual { p_prime } => (p_prime, 0.0),
            AssociateNorm::GlWeak { theta1, p_prime } => (p_prime, theta1),
        };
        if !(pp > 1.0 && pp.is_finite()) {
            return Err(GrandNetError::invalid(format!("p' must lie in (1, inf), got {pp}")));
        }
        if !(theta1 >= 0.0 && theta1.is_finite()) {
            return Err(GrandNetError::invalid(format!("theta1 must be finite and >= 0, got {theta1}")));
        }
        Ok(())
    }

    pub fn p_prime(&self) -> f64 {
        match *self {
            AssociateNorm::LpDual { p_prime } | AssociateNorm::GlWeak { p_prime, .. } => p_prime,
        }
    }

    /// The space this norm is associate to.
    pub fn source(&self) -> SourceNorm {
        let p = SpaceParams::conjugate(self.p_prime()).unwrap_or(f64::INFINITY);
        match *self {
            AssociateNorm::LpDual { .. } => SourceNorm::Lp { p },
            AssociateNorm::GlWeak { theta1, .. } => SourceNorm::GlStrong { theta1, p },
        }
    }
}

pub fn associate_norm(h: &GridFunction, a: &AssociateNorm, search: &EpsilonSearch) -> Result<f64> {
    a.validate()?;
    match *a {
        AssociateNorm::LpDual { p_prime } => Ok(h.lp_norm(p_prime)),
        AssociateNorm::GlWeak { theta1, p_prime } => {
            let params = SpaceParams::new(-theta1, p_prime, f64::INFINITY)?;
            Ok(grand_lorentz_norm(h, &params, LorentzVariant::Star, search)?.value)
        }
    }
}

/// Norm on the domain of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceNorm {
    Lp { p: f64 },
    /// `GL^{θ1}_{p,1}` built on `f*`.
    GlStrong { theta1: f64, p: f64 },
}

pub fn source_norm(f: &GridFunction, s: &SourceNorm, search: &EpsilonSearch) -> Result<f64> {
    match *s {
        SourceNorm::Lp { p } => Ok(f.lp_norm(p)),
        SourceNorm::GlStrong { theta1, p } => {
            let params = SpaceParams::new(theta1, p, 1.0)?;
            Ok(grand_lorentz_norm(f, &params, LorentzVariant::Star, search)?.value)
        }
    }
}

/// How `‖Tf‖` is measured on the y-side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetForm {
    /// `sup_t t^{1/q} w(t)^{-θ} f̄(t, M)`.
    WeightedSup,
    /// `‖·‖_{GN^θ_{q,inf}(M)}` through its `ε` definition.
    Grand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetNorm {
    pub net: Net,
    pub q: f64,
    pub theta: f64,
    pub weight: WeightVariant,
    pub form: TargetForm,
}

impl TargetNorm {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 1.0 && self.q.is_finite()) {
            return Err(GrandNetError::invalid(format!("target q must lie in (1, inf), got {}", self.q)));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(GrandNetError::invalid(format!("target theta must be >= 0, got {}", self.theta)));
        }
        Ok(())
    }
}

pub fn target_norm(g: &GridFunction, target: &TargetNorm, search: &EpsilonSearch) -> Result<f64> {
    match target.form {
        TargetForm::WeightedSup => {
            let profile = net_average_profile(g, &target.net)?.profile;
            Ok(log_weighted_norm(&profile, 1.0 / target.q, -target.theta, f64::INFINITY, target.weight))
        }
        TargetForm::Grand => {
            let params = SpaceParams::with_weight(target.theta, target.q, f64::INFINITY, target.weight)?;
            Ok(grand_net_norm(g, &target.net, &params, search)?.value)
        }
    }
}

fn enumerable_members(net: &Net, n: usize) -> Result<Vec<NetMember>> {
    if !net.is_enumerable() {
        return Err(GrandNetError::UnsupportedEnumeration(
            "operator criteria need an enumerable net".into(),
        ));
    }
    net_members(net, n)
}

/// `sup_{0<t<|ω|} t^a w(t)^power`.
fn measure_weight(a: f64, power: f64, weight: WeightVariant, measure: f64) -> f64 {
    log_weight_sup(a, power, weight, 0.0, measure)
}

/// `max_ω [sup_{t<|ω|} t^{1/q} w(t)^{-θ}] ‖h_ω‖_{X*}`.
pub fn boundedness_criterion(
    k: &Kernel,
    net: &Net,
    q: f64,
    theta: f64,
    a: &AssociateNorm,
    weight: WeightVariant,
    search: &EpsilonSearch,
) -> Result<f64> {
    a.validate()?;
    if !(q > 1.0) || !(theta >= 0.0) {
        return Err(GrandNetError::invalid("boundedness criterion needs q > 1 and theta >= 0"));
    }
    let members = enumerable_members(net, k.ny)?;
    let values = members
        .par_iter()
        .map(|m| {
            let w = measure_weight(1.0 / q, -theta, weight, m.measure);
            if w == 0.0 {
                return Ok(0.0);
            }
            let h = column_average(k, &m.cells)?;
            let hn = associate_norm(&h, a, search)?;
            Ok(if hn == 0.0 { 0.0 } else { w * hn })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// `max_{w,e} [sup_{t1<|w|} t1^{1/p'} w(t1)^{θ1}] [sup_{t2<|e|} t2^{1/q} w(t2)^{-θ2}]
/// |(1/|w||e|) ∫_w ∫_e K|`.
#[allow(clippy::too_many_arguments)]
pub fn quasi_weak_criterion(
    k: &Kernel,
    p: f64,
    q: f64,
    theta1: f64,
    theta2: f64,
    x_net: &Net,
    y_net: &Net,
    weight: WeightVariant,
) -> Result<f64> {
    if !(p > 1.0 && p.is_finite() && q > 1.0 && q.is_finite()) {
        return Err(GrandNetError::invalid("quasi weak criterion needs 1 < p, q < inf"));
    }
    if !(theta1 >= 0.0 && theta2 >= 0.0) {
        return Err(GrandNetError::invalid("quasi weak criterion needs theta1, theta2 >= 0"));
    }
    let pp = SpaceParams::conjugate(p)?;
    let xs = enumerable_members(x_net, k.nx)?;
    let ys = enumerable_members(y_net, k.ny)?;
    // row sums restricted to each y-member, so each pair costs O(|w|)
    let best = ys
        .par_iter()
        .map(|e| {
            let we = measure_weight(1.0 / q, -theta2, weight, e.measure);
            let row_means: Vec<f64> = k
                .values
                .iter()
                .map(|row| e.cells.iter().map(|&j| row[j]).sum::<f64>() / e.cells.len() as f64)
                .collect();
            xs.iter().fold(0.0f64, |m, w| {
                let avg = w.cells.iter().map(|&i| row_means[i]).sum::<f64>() / w.cells.len() as f64;
                if avg == 0.0 {
                    return m;
                }
                let ww = measure_weight(1.0 / pp, theta1, weight, w.measure);
                m.max(ww * we * avg.abs())
            })
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// `f ∝ |h|^{p'-1} sign h`, normalized to unit source norm; `None` for `h = 0`.
pub fn duality_extremal(h: &GridFunction, source: &SourceNorm, search: &EpsilonSearch) -> Result<Option<GridFunction>> {
    if h.is_zero() {
        return Ok(None);
    }
    let p = match *source {
        SourceNorm::Lp { p } | SourceNorm::GlStrong { p, .. } => p,
    };
    let pp = SpaceParams::conjugate(p)?;
    let f = h.map(|v| v.signum() * v.abs().powf(pp - 1.0))?;
    let norm = source_norm(&f, source, search)?;
    if !(norm > 0.0 && norm.is_finite()) {
        return Ok(None);
    }
    Ok(Some(f.scaled(1.0 / norm)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalNorm {
    pub value: f64,
    /// Index into the corpus, or `corpus.len() + k` for the `k`-th extremal.
    pub argmax: usize,
    pub candidates: usize,
}

/// `max ‖Tf‖_target / ‖f‖_source` over the corpus and the duality extremals
/// `|h_ω|^{p'-1} sign h_ω` of the target net: a lower bound on `‖T‖`.
pub fn empirical_operator_norm(
    k: &Kernel,
    source: &SourceNorm,
    target: &TargetNorm,
    corpus: &[GridFunction],
    search: &EpsilonSearch,
) -> Result<EmpiricalNorm> {
    target.validate()?;
    let members = enumerable_members(&target.net, k.ny)?;
    let mut candidates: Vec<(GridFunction, f64)> = Vec::with_capacity(corpus.len() + members.len());
    for (i, f) in corpus.iter().enumerate() {
        let n = source_norm(f, source, search)?;
        if !(n > 0.0 && n.is_finite()) {
            return Err(GrandNetError::invalid(format!("corpus entry {i} has source norm {n}")));
        }
        candidates.push((f.clone(), n));
    }
    let extremals = members
        .par_iter()
        .map(|m| duality_extremal(&column_average(k, &m.cells)?, source, search))
        .collect::<Result<Vec<_>>>()?;
    let extremal_base = candidates.len();
    let mut extremal_index = Vec::new();
    for (j, e) in extremals.into_iter().enumerate() {
        if let Some(f) = e {
            candidates.push((f, 1.0));
            extremal_index.push(extremal_base + j);
        }
    }
    if candidates.is_empty() {
        return Ok(EmpiricalNorm { value: 0.0, argmax: 0, candidates: 0 });
    }
    let ratios = candidates
        .par_iter()
        .map(|(f, n)| Ok(target_norm(&apply_operator(k, f)?, target, search)? / n))
        .collect::<Result<Vec<f64>>>()?;
    let (best, value) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, v)| if v > b.1 { (i, v) } else { b });
    let argmax = if best < extremal_base { best } else { extremal_index[best - extremal_base] };
    Ok(EmpiricalNorm { value, argmax, candidates: candidates.len() })
}

/// Output of the `certify` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub criterion: f64,
    pub empirical_lower_bound: f64,
    /// `empirical / criterion`, `1` when both vanish.
    pub ratio: f64,
    pub weight_variant: WeightVariant,
    pub parameters: CertificateParameters,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateParameters {
    pub q: f64,
    pub theta: f64,
    pub net: Net,
    pub associate: AssociateNorm,
    pub target_form: TargetForm,
    pub corpus_size: usize,
    pub search: EpsilonSearch,
}

pub fn certify(
    k: &Kernel,
    target: &TargetNorm,
    associate: &AssociateNorm,
    corpus: &[GridFunction],
    search: &EpsilonSearch,
) -> Result<Certificate> {
    let criterion = boundedness_criterion(k, &target.net, target.q, target.theta, associate, target.weight, search)?;
    let empirical = empirical_operator_norm(k, &associate.source(), target, corpus, search)?.value;
    let ratio = if criterion == 0.0 && empirical == 0.0 { 1.0 } else { empirical / criterion };
    Ok(Certificate {
        criterion,
        empirical_lower_bound: empirical,
        ratio,
        weight_variant: target.weight,
        parameters: CertificateParameters {
            q: target.q,
            theta: target.theta,
            net: target.net.clone(),
            associate: *associate,
            target_form: target.form,
            corpus_size: corpus.len(),
            search: *search,
        },
    })
}
