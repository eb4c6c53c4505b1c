//! Seeded corpora and the inequality suites.
//!
//! Every suite expands a corpus and a parameter sweep into [`CaseInput`]s.
//! Each input is self-contained, so any case in a report can be replayed
//! bit-for-bit with [`replay_case`]. A check passes when
//! `lhs <= constant * rhs + abs_tol`; suites with an infinite constant only
//! report the observed ratio and pass whenever `lhs` is finite.

mod corpus;
mod suites;

pub use corpus::{generate, generate_corpus, CorpusSpec, Generator};
pub use suites::{
    holder_lorentz_bound, net_lorentz_lower_bound, q_shift_constant, replay_case, CaseInput,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{GrandNetError, Result};
use crate::grid::{GridFunction, Net, WeightVariant};
use crate::interp::KFuncConfig;
use crate::norms::EpsilonSearch;
use crate::opkernel::Kernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SuiteId {
    /// `GN^θ <= N <= GN^-θ`.
    S1,
    /// Net monotonicity.
    S2,
    /// Monotonicity in `θ`.
    S3,
    /// Restricting `ε` to `(0, δ]`.
    S4,
    /// Trading `q` for `θ`.
    S5,
    /// Hölder inequality for net averages.
    S6,
    /// Pointwise sandwich `f̄(t) <= f**(t) <= 4 f̄(t/3)` on the full net.
    S7,
    /// `GL` against `𝒢ℒ` and the full-net norm against `𝒢ℒ`.
    S8,
    /// Closed forms of `sup ε^θ t^ε` and `inf ε^-θ t^-ε`.
    S9,
    /// Interpolation norm upper bound against the target norm.
    S10,
    /// Operator criterion against empirical operator norms.
    S11,
    /// Growing the outer exponent `q` (report only).
    S12,
    /// Growing both `p` and `q` (report only).
    S13,
}

impl SuiteId {
    pub const ALL: [SuiteId; 13] = [
        SuiteId::S1,
        SuiteId::S2,
        SuiteId::S3,
        SuiteId::S4,
        SuiteId::S5,
        SuiteId::S6,
        SuiteId::S7,
        SuiteId::S8,
        SuiteId::S9,
        SuiteId::S10,
        SuiteId::S11,
        SuiteId::S12,
        SuiteId::S13,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| GrandNetError::invalid(format!("unknown suite `{s}`")))
    }

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::S1 => "S1",
            SuiteId::S2 => "S2",
            SuiteId::S3 => "S3",
            SuiteId::S4 => "S4",
            SuiteId::S5 => "S5",
            SuiteId::S6 => "S6",
            SuiteId::S7 => "S7",
            SuiteId::S8 => "S8",
            SuiteId::S9 => "S9",
            SuiteId::S10 => "S10",
            SuiteId::S11 => "S11",
            SuiteId::S12 => "S12",
            SuiteId::S13 => "S13",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SuiteId::S1 => "GN^theta_{p,q} <= N_{p,q} <= GN^-theta_{p,q}, constant 1",
            SuiteId::S2 => "M1 subset of M2 gives norm over M1 <= norm over M2, constant 1",
            SuiteId::S3 => "theta <= theta1 gives GN^theta1 <= GN^theta, constant 1",
            SuiteId::S4 => "restricted epsilon range within delta^theta of the full range",
            SuiteId::S5 => "GN^theta1_{p,q} <= C GN^theta_{p,q1} with theta1 - 1/q = theta - 1/q1",
            SuiteId::S6 => "int_0^1 fbar gbar <= GN^theta_{p1,s1}(f) GN^-theta_{p2,s2}(g), constant 1",
            SuiteId::S7 => "fbar(t) <= f**(t) <= 4 fbar(t/3) on the full net",
            SuiteId::S8 => "GL <= GL** <= (2p')^(theta+1) GL and L GL** <= GN(full) <= GL**",
            SuiteId::S9 => "sup_eps eps^theta t^eps and inf_eps eps^-theta t^-eps closed forms",
            SuiteId::S10 => "target norm over interpolation norm upper bound is finite",
            SuiteId::S11 => "operator criterion equals empirical norm at theta = 0, bounded ratio otherwise",
            SuiteId::S12 => "GN^theta_{p,s1} against GN^theta_{p,s}, s < s1 (observed constant)",
            SuiteId::S13 => "GN^theta_{p,s} against GN^theta_{p1,s1}, p < p1, s < s1 (observed constant)",
        }
    }

    pub fn report_only(self) -> bool {
        matches!(self, SuiteId::S10 | SuiteId::S12 | SuiteId::S13)
    }
}

/// Parameter sweep shared by the suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub p: Vec<f64>,
    /// Outer exponents; `"inf"` allowed.
    #[serde(with = "extended_vec")]
    pub q: Vec<f64>,
    /// Nonnegative values; negatives are added where a branch exists.
    pub theta: Vec<f64>,
    pub delta: Vec<f64>,
    pub nets: Vec<Net>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            p: vec![1.25, 2.0, 4.0],
            q: vec![1.0, 2.0, f64::INFINITY],
            theta: vec![0.0, 0.5, 1.0, 2.0],
            delta: vec![0.1, 0.5],
            nets: vec![Net::GridIntervals, Net::Full],
        }
    }
}

mod extended_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            if x.is_infinite() {
                seq.serialize_element("inf")?;
            } else {
                seq.serialize_element(x)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::grid::extended_real")] f64);
        Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// Tolerances and numerical settings of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub sweep: SweepSpec,
    pub search: EpsilonSearch,
    /// Additive slack of every check.
    pub abs_tol: f64,
    /// Additive slack of the restriction suite.
    pub restriction_tol: f64,
    /// Relative tolerance of the closed-form and equality checks.
    pub rel_tol: f64,
    /// Points of `t` in `(0, 0.74]` for the sandwich suite.
    pub sandwich_points: usize,
    /// Points of `t` per `θ` for the kernel identities.
    pub kernel_points: usize,
    pub kernel_count: usize,
    pub kernel_n: usize,
    pub weight: WeightVariant,
    pub kfunc: KFuncConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            sweep: SweepSpec::default(),
            search: EpsilonSearch::default(),
            abs_tol: 1e-9,
            restriction_tol: 1e-8,
            rel_tol: 1e-9,
            sandwich_points: 37,
            kernel_points: 50,
            kernel_count: 20,
            kernel_n: 8,
            weight: WeightVariant::Uniform,
            kfunc: KFuncConfig::default(),
        }
    }
}

/// One evaluated inequality `lhs <= constant * rhs + abs_tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub hash: String,
    pub label: String,
    #[serde(serialize_with = "finite_or_null")]
    pub lhs: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub rhs: f64,
    /// `null` for report-only checks.
    #[serde(serialize_with = "finite_or_null")]
    pub constant: f64,
    pub abs_tol: f64,
    pub pass: bool,
    pub replay: CaseInput,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

impl CaseResult {
    /// `lhs / rhs`, the smallest constant that would make the check pass.
    pub fn observed_constant(&self) -> Option<f64> {
        (self.rhs > 0.0 && self.rhs.is_finite() && self.lhs.is_finite()).then(|| self.lhs / self.rhs)
    }
}

pub(crate) fn check_passes(lhs: f64, rhs: f64, constant: f64, abs_tol: f64) -> bool {
    if constant.is_infinite() {
        return lhs.is_finite();
    }
    if lhs.is_nan() || rhs.is_nan() {
        return false;
    }
    if rhs.is_infinite() {
        return true;
    }
    lhs <= constant * rhs + abs_tol
}

pub(crate) fn case_hash(input: &CaseInput, label: &str) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(input).expect("case inputs serialize"));
    h.update(label.as_bytes());
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub description: &'static str,
    pub report_only: bool,
    pub passed: bool,
    pub case_count: usize,
    /// Largest `lhs / rhs` over all cases.
    #[serde(serialize_with = "finite_or_null")]
    pub worst_constant: f64,
    /// Hash of the case attaining `worst_constant`.
    pub worst_case: Option<String>,
    /// Hashes of failing cases.
    pub failures: Vec<String>,
    pub weight_variant: WeightVariant,
    pub abs_tol: f64,
    pub restriction_tol: f64,
    pub rel_tol: f64,
    pub search: EpsilonSearch,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn failing_cases(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// Kernels for the operator suite: entries uniform in `[-1, 1]`.
pub fn random_kernels(count: usize, n: usize, seed: u64) -> Result<Vec<Kernel>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Kernel::new((0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()))
        .collect()
}

/// Run one suite over `corpus`; `seed` drives the kernel draws of `S11`.
pub fn run_suite(id: SuiteId, corpus: &[GridFunction], seed: u64, config: &SuiteConfig) -> Result<SuiteReport> {
    config.search.validate()?;
    if corpus.is_empty() {
        return Err(GrandNetError::invalid("suites need a nonempty corpus"));
    }
    let inputs = suites::expand(id, corpus, seed, config)?;
    let mut cases: Vec<CaseResult> = inputs
        .par_iter()
        .map(|input| replay_case(input, config))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    cases.sort_by(|a, b| a.hash.cmp(&b.hash).then_with(|| a.label.cmp(&b.label)));

    let mut worst = (f64::NEG_INFINITY, None);
    for c in &cases {
        if let Some(r) = c.observed_constant() {
            if r > worst.0 {
                worst = (r, Some(c.hash.clone()));
            }
        }
    }
    let failures: Vec<String> = cases.iter().filter(|c| !c.pass).map(|c| c.hash.clone()).collect();
    Ok(SuiteReport {
        suite: id,
        description: id.description(),
        report_only: id.report_only(),
        passed: failures.is_empty(),
        case_count: cases.len(),
        worst_constant: if worst.0.is_finite() { worst.0 } else { 0.0 },
        worst_case: worst.1,
        failures,
        weight_variant: config.weight,
        abs_tol: config.abs_tol,
        restriction_tol: config.restriction_tol,
        rel_tol: config.rel_tol,
        search: config.search,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_ids_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(SuiteId::parse(id.name()).unwrap(), id);
        }
        assert!(SuiteId::parse("S99").is_err());
        assert_eq!(SuiteId::parse("s6").unwrap(), SuiteId::S6);
    }

    #[test]
    fn pass_rule() {
        assert!(check_passes(1.0, 1.0, 1.0, 0.0));
        assert!(!check_passes(1.0 + 1e-8, 1.0, 1.0, 1e-9));
        assert!(check_passes(5.0, 0.0, f64::INFINITY, 0.0));
        assert!(!check_passes(f64::INFINITY, 1.0, f64::INFINITY, 0.0));
        assert!(check_passes(3.0, f64::INFINITY, 1.0, 0.0));
        assert!(!check_passes(f64::NAN, 1.0, 1.0, 0.0));
    }

    #[test]
    fn sweep_json_accepts_inf() {
        let s: SweepSpec = serde_json::from_str(r#"{"q": [1, "inf"]}"#).unwrap();
        assert_eq!(s.q, vec![1.0, f64::INFINITY]);
        let back = serde_json::to_string(&s).unwrap();
        assert!(back.contains("\"inf\""));
        assert!(serde_json::from_str::<SweepSpec>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn kernels_are_seeded() {
        let a = random_kernels(3, 4, 7).unwrap();
        assert_eq!(a, random_kernels(3, 4, 7).unwrap());
        assert_ne!(a, random_kernels(3, 4, 8).unwrap());
    }
}
