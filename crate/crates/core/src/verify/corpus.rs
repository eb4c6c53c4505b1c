//! Seeded corpora of grid functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GrandNetError, Result};
use crate::grid::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// Uniform values in `[-1, 1]` times a random scale.
    RandomSigned,
    /// Uniform values in `[0, 1]` times a random scale.
    RandomNonnegative,
    /// Cell averages of `t^-α`.
    Power,
    /// Indicator of one random block of cells.
    IndicatorBlocks,
    /// Blocks of alternating sign with random lengths and magnitudes.
    AlternatingBlocks,
    /// A random constant, possibly negative.
    Constant,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::RandomSigned,
        Generator::RandomNonnegative,
        Generator::Power,
        Generator::IndicatorBlocks,
        Generator::AlternatingBlocks,
        Generator::Constant,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusSpec {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Restrict `n` to powers of two inside `[n_min, n_max]`.
    pub power_of_two: bool,
    /// Generators, used round-robin.
    pub mix: Vec<Generator>,
    /// Exponent of the power generator; keep below `1/p` for the largest `p`
    /// of interest.
    pub alpha: f64,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            count: 50,
            n_min: 4,
            n_max: 16,
            power_of_two: true,
            mix: Generator::ALL.to_vec(),
            alpha: 0.4,
            seed: 1,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 || self.mix.is_empty() {
            return Err(GrandNetError::invalid("corpus needs count >= 1 and a nonempty generator mix"));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(GrandNetError::invalid(format!("bad n range [{}, {}]", self.n_min, self.n_max)));
        }
        if self.power_of_two && self.sizes().is_empty() {
            return Err(GrandNetError::invalid("no power of two inside the n range"));
        }
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return Err(GrandNetError::invalid(format!("alpha must lie in [0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    fn sizes(&self) -> Vec<usize> {
        if self.power_of_two {
            (0..usize::BITS)
                .map(|k| 1usize << k)
                .filter(|&n| n >= self.n_min && n <= self.n_max)
                .collect()
        } else {
            (self.n_min..=self.n_max).collect()
        }
    }
}

/// Deterministic corpus: the `k`-th function uses generator `mix[k % len]`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<GridFunction>> {
    spec.validate()?;
    let sizes = spec.sizes();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count)
        .map(|k| {
            let n = sizes[rng.gen_range(0..sizes.len())];
            generate(spec.mix[k % spec.mix.len()], n, spec.alpha, &mut rng)
        })
        .collect()
}

pub fn generate(generator: Generator, n: usize, alpha: f64, rng: &mut impl Rng) -> Result<GridFunction> {
    let scale = 0.25 + 3.75 * rng.gen::<f64>();
    let values: Vec<f64> = match generator {
        Generator::RandomSigned => (0..n).map(|_| scale * rng.gen_range(-1.0..=1.0)).collect(),
        Generator::RandomNonnegative => (0..n).map(|_| scale * rng.gen::<f64>()).collect(),
        Generator::Power => power_cells(n, alpha).into_iter().map(|v| scale * v).collect(),
        Generator::IndicatorBlocks => {
            let len = rng.gen_range(1..=n);
            let start = rng.gen_range(0..=n - len);
            (0..n).map(|k| if k >= start && k < start + len { scale } else { 0.0 }).collect()
        }
        Generator::AlternatingBlocks => {
            let mut out = Vec::with_capacity(n);
            let mut sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            while out.len() < n {
                let len = rng.gen_range(1..=(n / 2).max(1)).min(n - out.len());
                let mag = scale * (0.25 + rng.gen::<f64>());
                out.extend(std::iter::repeat_n(sign * mag, len));
                sign = -sign;
            }
            out
        }
        Generator::Constant => {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            vec![sign * scale; n]
        }
    };
    GridFunction::new(values)
}

/// `n ∫_{k/n}^{(k+1)/n} t^-α dt`.
fn power_cells(n: usize, alpha: f64) -> Vec<f64> {
    let nf = n as f64;
    let e = 1.0 - alpha;
    (0..n)
        .map(|k| nf * (((k + 1) as f64 / nf).powf(e) - (k as f64 / nf).powf(e)) / e)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = CorpusSpec { count: 3, ..Default::default() };
        assert_eq!(generate_corpus(&spec).unwrap(), generate_corpus(&spec).unwrap());
        let other = CorpusSpec { seed: 2, ..spec.clone() };
        assert_ne!(generate_corpus(&spec).unwrap(), generate_corpus(&other).unwrap());
    }

    #[test]
    fn constants_only() {
        let spec = CorpusSpec { count: 7, mix: vec![Generator::Constant], ..Default::default() };
        for f in generate_corpus(&spec).unwrap() {
            assert!(f.values().iter().all(|&v| v == f.values()[0]));
        }
    }

    #[test]
    fn default_mix_covers_constant_and_alternating() {
        let corpus = generate_corpus(&CorpusSpec { count: 6, ..Default::default() }).unwrap();
        assert!(corpus.iter().any(|f| f.values().iter().all(|&v| v == f.values()[0])));
        assert!(corpus.iter().any(|f| f.values().iter().any(|&v| v > 0.0) && f.values().iter().any(|&v| v < 0.0)));
    }

    #[test]
    fn power_cells_average_the_density() {
        // total integral of t^-α over (0,1) is 1/(1-α)
        let cells = power_cells(16, 0.4);
        let total: f64 = cells.iter().sum::<f64>() / 16.0;
        assert!((total - 1.0 / 0.6).abs() < 1e-12);
        assert!(cells.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn sizes_respect_range() {
        let spec = CorpusSpec { count: 40, n_min: 3, n_max: 20, ..Default::default() };
        for f in generate_corpus(&spec).unwrap() {
            assert!([4, 8, 16].contains(&f.n()));
        }
        assert!(CorpusSpec { n_min: 5, n_max: 7, ..Default::default() }.validate().is_err());
        let free = CorpusSpec { count: 40, n_min: 3, n_max: 5, power_of_two: false, ..Default::default() };
        assert!(generate_corpus(&free).unwrap().iter().all(|f| (3..=5).contains(&f.n())));
    }
}
