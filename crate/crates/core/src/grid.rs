//! Grid functions on `[0, 1]`, nets of cell unions, and space parameters.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GrandNetError, Result};
use crate::numeric::compensated_sum;

/// Piecewise-constant function on `n` uniform cells of `[0, 1]`.
///
/// Cell `k` is `[k/n, (k+1)/n)`; the domain has measure exactly one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridFunction", into = "RawGridFunction")]
pub struct GridFunction {
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGridFunction {
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<RawGridFunction> for GridFunction {
    type Error = GrandNetError;

    fn try_from(raw: RawGridFunction) -> Result<Self> {
        if raw.n != raw.values.len() {
            return Err(GrandNetError::invalid(format!(
                "field `n` is {} but `values` has {} entries",
                raw.n,
                raw.values.len()
            )));
        }
        GridFunction::new(raw.values)
    }
}

impl From<GridFunction> for RawGridFunction {
    fn from(f: GridFunction) -> Self {
        RawGridFunction {
            n: f.values.len(),
            values: f.values,
        }
    }
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GrandNetError::invalid("grid function needs at least one cell"));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(GrandNetError::invalid(format!("value at cell {k} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_width(&self) -> f64 {
        1.0 / self.n() as f64
    }

    pub fn integral(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) / self.n() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| op(v)).collect())
    }

    /// Lebesgue `L^p` norm, `p in (0, inf]`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.max_abs();
        }
        let s = compensated_sum(self.values.iter().map(|v| v.abs().powf(p))) / self.n() as f64;
        s.powf(1.0 / p)
    }

    /// Signed mean of `f` over a set of cells.
    pub(crate) fn mean_over(&self, cells: &[usize]) -> f64 {
        compensated_sum(cells.iter().map(|&k| self.values[k])) / cells.len() as f64
    }
}

/// A family of unions of grid cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Net {
    /// Every measurable subset of `[0, 1]` with positive measure.
    Full,
    /// Dyadic intervals `[j 2^-k, (j+1) 2^-k)` down to single cells.
    Dyadic,
    /// Every interval made of consecutive cells.
    GridIntervals,
    /// Explicit cell-index sets.
    Explicit(Vec<Vec<usize>>),
}

impl Net {
    pub fn label(&self) -> &'static str {
        match self {
            Net::Full => "full",
            Net::Dyadic => "dyadic",
            Net::GridIntervals => "grid_intervals",
            Net::Explicit(_) => "explicit",
        }
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self, Net::Full)
    }
}

/// One member `ω` of an enumerable net.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetMember {
    pub id: usize,
    /// Number of cells in the member; `measure = cell_count / n`.
    pub cell_count: usize,
    pub measure: f64,
    pub cells: Vec<usize>,
}

/// Enumerate the members of `net` at resolution `n`.
///
/// Grid intervals are listed by length, then by start; dyadic intervals from
/// the finest level to the whole domain. Explicit members are normalized
/// (sorted, deduplicated) and duplicate members are dropped.
pub fn net_members(net: &Net, n: usize) -> Result<Vec<NetMember>> {
    if n == 0 {
        return Err(GrandNetError::invalid("resolution must be positive"));
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    match net {
        Net::Full => return Err(GrandNetError::UnsupportedEnumeration("full".into())),
        Net::GridIntervals => {
            for len in 1..=n {
                for start in 0..=(n - len) {
                    sets.push((start..start + len).collect());
                }
            }
        }
        Net::Dyadic => {
            if !n.is_power_of_two() {
                return Err(GrandNetError::invalid(format!(
                    "dyadic net needs a power-of-two resolution, got {n}"
                )));
            }
            let mut len = 1;
            while len <= n {
                for start in (0..n).step_by(len) {
                    sets.push((start..start + len).collect());
                }
                len *= 2;
            }
        }
        Net::Explicit(members) => {
            if members.is_empty() {
                return Err(GrandNetError::invalid("explicit net has no members"));
            }
            for (i, m) in members.iter().enumerate() {
                if m.is_empty() {
                    return Err(GrandNetError::invalid(format!("explicit member {i} is empty")));
                }
                if let Some(&k) = m.iter().find(|&&k| k >= n) {
                    return Err(GrandNetError::invalid(format!(
                        "explicit member {i} names cell {k} but the grid has {n} cells"
                    )));
                }
                let mut cells = m.clone();
                cells.sort_unstable();
                cells.dedup();
                if !sets.contains(&cells) {
                    sets.push(cells);
                }
            }
        }
    }
    Ok(sets
        .into_iter()
        .enumerate()
        .map(|(id, cells)| NetMember {
            id,
            cell_count: cells.len(),
            measure: cells.len() as f64 / n as f64,
            cells,
        })
        .collect())
}

/// Which logarithmic weight the closed-form equivalents use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightVariant {
    /// `w(t) = |ln t|`.
    Paper,
    /// `w(t) = 1 + |ln t|`.
    #[default]
    Uniform,
}

impl WeightVariant {
    pub fn weight(self, t: f64) -> f64 {
        self.weight_at_log(t.ln())
    }

    /// `w` as a function of `u = ln t`, `u <= 0`.
    pub fn weight_at_log(self, u: f64) -> f64 {
        match self {
            // `0 - u` keeps w(1) = +0, so negative powers give +inf
            WeightVariant::Paper => 0.0 - u,
            WeightVariant::Uniform => 1.0 - u,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WeightVariant::Paper => "paper",
            WeightVariant::Uniform => "uniform",
        }
    }
}

/// `(θ, p, q, weight)` selecting one grand-space norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceParams {
    pub theta: f64,
    #[serde(with = "extended_real")]
    pub p: f64,
    #[serde(with = "extended_real")]
    pub q: f64,
    #[serde(default)]
    pub weight: WeightVariant,
}

impl SpaceParams {
    pub fn new(theta: f64, p: f64, q: f64) -> Result<Self> {
        Self::with_weight(theta, p, q, WeightVariant::default())
    }

    pub fn with_weight(theta: f64, p: f64, q: f64, weight: WeightVariant) -> Result<Self> {
        let params = Self { theta, p, q, weight };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(GrandNetError::invalid("theta must be finite"));
        }
        if !(self.p > 0.0) || !(self.q > 0.0) {
            return Err(GrandNetError::invalid(format!(
                "p and q must lie in (0, inf], got p={} q={}",
                self.p, self.q
            )));
        }
        if self.theta < 0.0 && self.p.is_infinite() {
            return Err(GrandNetError::UnsupportedBranch(
                "theta < 0 is undefined for p = inf".into(),
            ));
        }
        Ok(())
    }

    /// Hölder conjugate `p' = p / (p - 1)` for `p in (1, inf)`.
    pub fn conjugate(p: f64) -> Result<f64> {
        if !(p > 1.0) || p.is_infinite() {
            return Err(GrandNetError::invalid(format!("conjugate needs p in (1, inf), got {p}")));
        }
        Ok(p / (p - 1.0))
    }
}

/// Serde adapter writing infinite reals as the string `"inf"`.
pub mod extended_real {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => parse(&t).map_err(serde::de::Error::custom),
        }
    }

    pub fn parse(t: &str) -> std::result::Result<f64, String> {
        match t.trim() {
            "inf" | "infinity" | "Inf" | "INF" => Ok(f64::INFINITY),
            other => other.parse::<f64>().map_err(|e| format!("bad real `{other}`: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let f = GridFunction::new(vec![1.0; 4]).unwrap();
        assert_eq!(f.n(), 4);
        assert_eq!(f.integral(), 1.0);
        let g = GridFunction::new(vec![4.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(g.integral(), 1.0);
        assert!(matches!(GridFunction::new(vec![]), Err(GrandNetError::InvalidInput(_))));
        assert!(GridFunction::new(vec![1.0, f64::NAN]).is_err());
        assert!(GridFunction::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f: GridFunction = serde_json::from_str(r#"{"n": 2, "values": [1.5, -2]}"#).unwrap();
        assert_eq!(f.values(), &[1.5, -2.0]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"n":2,"values":[1.5,-2.0]}"#);
        assert!(serde_json::from_str::<GridFunction>(r#"{"n": 3, "values": [1]}"#).is_err());
        assert!(serde_json::from_str::<GridFunction>(r#"{"n": 0, "values": []}"#).is_err());
        assert!(serde_json::from_str::<GridFunction>(r#"{"n":1,"values":[1],"x":0}"#).is_err());
    }

    #[test]
    fn grid_intervals_small() {
        let m = net_members(&Net::GridIntervals, 2).unwrap();
        let cells: Vec<_> = m.iter().map(|x| x.cells.clone()).collect();
        assert_eq!(cells, vec![vec![0], vec![1], vec![0, 1]]);
        let measures: Vec<_> = m.iter().map(|x| x.measure).collect();
        assert_eq!(measures, vec![0.5, 0.5, 1.0]);
        for n in 1..12 {
            assert_eq!(net_members(&Net::GridIntervals, n).unwrap().len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn dyadic_counts() {
        assert_eq!(net_members(&Net::Dyadic, 4).unwrap().len(), 7);
        assert_eq!(net_members(&Net::Dyadic, 1).unwrap().len(), 1);
        assert!(matches!(net_members(&Net::Dyadic, 3), Err(GrandNetError::InvalidInput(_))));
    }

    #[test]
    fn full_net_is_not_enumerable() {
        assert!(matches!(
            net_members(&Net::Full, 4),
            Err(GrandNetError::UnsupportedEnumeration(_))
        ));
    }

    #[test]
    fn explicit_members_are_validated_and_deduplicated() {
        let net = Net::Explicit(vec![vec![1, 0], vec![0, 1, 1], vec![3]]);
        let m = net_members(&net, 4).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].cells, vec![0, 1]);
        assert_eq!(m[1].measure, 0.25);
        assert!(net_members(&Net::Explicit(vec![vec![]]), 4).is_err());
        assert!(net_members(&Net::Explicit(vec![vec![4]]), 4).is_err());
    }

    #[test]
    fn enumeration_is_deterministic() {
        assert_eq!(
            net_members(&Net::GridIntervals, 7).unwrap(),
            net_members(&Net::GridIntervals, 7).unwrap()
        );
    }

    #[test]
    fn params_validation() {
        assert!(SpaceParams::new(-1.0, f64::INFINITY, 2.0).is_err());
        assert!(SpaceParams::new(1.0, f64::INFINITY, 2.0).is_ok());
        assert!(SpaceParams::new(0.0, 0.0, 2.0).is_err());
        assert!(SpaceParams::new(0.0, 2.0, f64::NAN).is_err());
        let p: SpaceParams =
            serde_json::from_str(r#"{"theta":1,"p":2,"q":"inf","weight":"paper"}"#).unwrap();
        assert!(p.q.is_infinite());
        assert_eq!(p.weight, WeightVariant::Paper);
        assert!(serde_json::to_string(&p).unwrap().contains(r#""q":"inf""#));
        assert!((SpaceParams::conjugate(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(SpaceParams::conjugate(1.0).is_err());
    }
}
