//! The average function `f̄(t, M) = sup_{ω ∈ M, |ω| > t} |∫_ω f| / |ω|`.
//!
//! For enumerable nets the profile is a step function whose jumps sit at the
//! distinct member measures. For the full net `M*` the supremum over sets of
//! measure `s` is attained by taking the largest (or smallest) signed values
//! first, so with `D(s)` and `A(s)` the prefix integrals of the descending and
//! ascending signed sorts,
//!
//! ```text
//! f̄(t, M*) = max(D(t), -A(t)) / t,
//! ```
//!
//! using that `D(s)/s` and `-A(s)/s` are nonincreasing. Each cell then
//! contributes at most two pieces of the form `alpha + beta / t`.

use serde::Serialize;

use crate::error::{GrandNetError, Result};
use crate::grid::{net_members, GridFunction, Net};
use crate::profile::{Piece, Profile};
use crate::rearrange::{average_pieces, prefix_at, signed_prefix};

/// `t ↦ f̄(t, M)` for one function and one net.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvgProfile {
    pub net: String,
    pub profile: Profile,
}

impl AvgProfile {
    pub fn eval(&self, t: f64) -> f64 {
        self.profile.eval(t)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.profile.breakpoints()
    }

    /// `(t_lo, t_hi, value)` rows. Step pieces are emitted as is; other pieces
    /// are cut into `subdivisions` parts carrying the value at their left end,
    /// which is the supremum on that part since the profile is nonincreasing.
    pub fn segments(&self, subdivisions: usize) -> Vec<(f64, f64, f64)> {
        let mut rows = Vec::new();
        for p in self.profile.pieces() {
            if p.is_step() {
                rows.push((p.lo, p.hi, p.alpha));
            } else {
                let k = subdivisions.max(1);
                for i in 0..k {
                    let lo = p.lo + (p.hi - p.lo) * i as f64 / k as f64;
                    let hi = if i + 1 == k { p.hi } else { p.lo + (p.hi - p.lo) * (i + 1) as f64 / k as f64 };
                    rows.push((lo, hi, p.eval(lo)));
                }
            }
        }
        rows
    }
}

/// Sorted signed data needed for the full net.
struct FullNetData {
    desc: Vec<f64>,
    desc_prefix: Vec<f64>,
    asc: Vec<f64>,
    asc_prefix: Vec<f64>,
}

impl FullNetData {
    fn new(f: &GridFunction) -> Self {
        let mut desc = f.values().to_vec();
        desc.sort_by(|a, b| b.total_cmp(a));
        let asc: Vec<f64> = desc.iter().rev().copied().collect();
        Self {
            desc_prefix: signed_prefix(&desc),
            asc_prefix: signed_prefix(&asc),
            desc,
            asc,
        }
    }

    fn value(&self, t: f64) -> f64 {
        let d = prefix_at(&self.desc, &self.desc_prefix, t);
        let a = prefix_at(&self.asc, &self.asc_prefix, t);
        d.max(-a).max(0.0) / t
    }
}

/// `f̄(t, M*)` for `0 < t < 1`: the supremum of `|∫_ω f| / |ω|` over all
/// measurable `ω ⊆ [0, 1]` with `|ω| > t`.
pub fn full_net_average(f: &GridFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(GrandNetError::domain(format!("full-net average needs t in (0, 1), got {t}")));
    }
    Ok(FullNetData::new(f).value(t))
}

fn full_net_profile(f: &GridFunction) -> Profile {
    let data = FullNetData::new(f);
    let upper = average_pieces(&data.desc, &data.desc_prefix);
    let neg_asc: Vec<f64> = data.asc.iter().map(|v| -v).collect();
    let neg_prefix: Vec<f64> = data.asc_prefix.iter().map(|v| -v).collect();
    let lower = average_pieces(&neg_asc, &neg_prefix);

    // both piece lists are unions of whole cells; walk their common refinement
    let mut pieces: Vec<Piece> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut lo = 0.0;
    while i < upper.len() && j < lower.len() {
        let (a, b) = (upper[i], lower[j]);
        let hi = a.hi.min(b.hi);
        for piece in max_of_hyperbolas(lo, hi, a, b) {
            push_merged(&mut pieces, piece);
        }
        lo = hi;
        if a.hi <= hi {
            i += 1;
        }
        if b.hi <= hi {
            j += 1;
        }
    }
    Profile::from_pieces_unchecked(pieces)
}

/// Pointwise maximum of two hyperbolas on `[lo, hi)`; they cross at most once.
fn max_of_hyperbolas(lo: f64, hi: f64, a: Piece, b: Piece) -> Vec<Piece> {
    let make = |lo: f64, hi: f64, p: Piece| {
        let beta = if lo == 0.0 { 0.0 } else { p.beta };
        Piece { lo, hi, alpha: p.alpha, beta }
    };
    let da = a.alpha - b.alpha;
    let db = a.beta - b.beta;
    // a - b = da + db / t vanishes at t = -db / da
    if da != 0.0 && db != 0.0 {
        let tc = -db / da;
        if tc > lo && tc < hi {
            let (first, second) = if da + db / (0.5 * (lo + tc)) >= 0.0 { (a, b) } else { (b, a) };
            return vec![make(lo, tc, first), make(tc, hi, second)];
        }
    }
    let mid = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
    let pick = if a.eval(mid) >= b.eval(mid) { a } else { b };
    vec![make(lo, hi, pick)]
}

fn push_merged(pieces: &mut Vec<Piece>, p: Piece) {
    match pieces.last_mut() {
        Some(last) if last.alpha == p.alpha && last.beta == p.beta && last.hi == p.lo => last.hi = p.hi,
        _ => pieces.push(p),
    }
}

fn enumerable_profile(f: &GridFunction, net: &Net) -> Result<Profile> {
    let n = f.n();
    let members = net_members(net, n)?;
    // best |average| per cell count
    let mut best = vec![None::<f64>; n + 1];
    for m in &members {
        let v = f.mean_over(&m.cells).abs();
        let slot = &mut best[m.cell_count];
        *slot = Some(slot.map_or(v, |b: f64| b.max(v)));
    }
    let counts: Vec<usize> = (1..=n).filter(|&c| best[c].is_some()).collect();
    // suffix maxima over members at least as large
    let mut steps = Vec::with_capacity(counts.len());
    let mut running = 0.0f64;
    for &c in counts.iter().rev() {
        running = running.max(best[c].unwrap_or(0.0));
        steps.push((c, running));
    }
    steps.reverse();
    let mut pieces: Vec<Piece> = Vec::new();
    let mut lo = 0.0;
    for (c, v) in steps {
        let hi = c as f64 / n as f64;
        push_merged(&mut pieces, Piece::step(lo, hi, v));
        lo = hi;
    }
    Ok(Profile::from_pieces_unchecked(pieces))
}

/// The average profile `t ↦ f̄(t, M)` on `(0, 1)`.
pub fn net_average_profile(f: &GridFunction, net: &Net) -> Result<AvgProfile> {
    let profile = match net {
        Net::Full => full_net_profile(f),
        other => enumerable_profile(f, other)?,
    };
    Ok(AvgProfile {
        net: net.label().to_string(),
        profile,
    })
}

/// `∫_0^1 f̄(t, M) ḡ(t, M) dt`.
pub fn holder_pairing(f: &GridFunction, g: &GridFunction, net: &Net) -> Result<f64> {
    if net.is_enumerable() && f.n() != g.n() {
        return Err(GrandNetError::invalid(format!(
            "net {} is bound to one resolution but the functions have {} and {} cells",
            net.label(),
            f.n(),
            g.n()
        )));
    }
    let pf = net_average_profile(f, net)?;
    let pg = net_average_profile(g, net)?;
    Ok(pf.profile.product_integral(&pg.profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::Rearrangement;

    fn gf(v: &[f64]) -> GridFunction {
        GridFunction::new(v.to_vec()).unwrap()
    }

    /// Supremum over unions of whole cells plus one partially covered cell.
    fn brute_force(f: &GridFunction, t: f64) -> f64 {
        let n = f.n();
        let v = f.values();
        let w = 1.0 / n as f64;
        let mut best = 0.0f64;
        let ratio = |s: f64, m: f64| if m > 0.0 { (s / m).abs() } else { 0.0 };
        for mask in 0u32..(1 << n) {
            let (mut s, mut m) = (0.0, 0.0);
            for (k, &vk) in v.iter().enumerate().take(n) {
                if mask >> k & 1 == 1 {
                    s += vk * w;
                    m += w;
                }
            }
            if mask != 0 && m > t {
                best = best.max(ratio(s, m));
            }
            for c in (0..n).filter(|c| mask >> c & 1 == 0) {
                // add a fraction lam of cell c; the ratio is monotone in lam
                let lam_min = ((t - m) / w).max(0.0);
                if lam_min < 1.0 {
                    for lam in [lam_min, 1.0] {
                        best = best.max(ratio(s + lam * v[c] * w, m + lam * w));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn full_net_examples() {
        assert!((full_net_average(&gf(&[1.0; 5]), 0.37).unwrap() - 1.0).abs() < 1e-15);
        assert!((full_net_average(&gf(&[4.0, 0.0, 0.0, 0.0]), 0.5).unwrap() - 2.0).abs() < 1e-15);
        let v = full_net_average(&gf(&[1.0, 1.0, -1.0, -1.0]), 0.75).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert!(full_net_average(&gf(&[1.0]), 1.0).is_err());
        assert!(full_net_average(&gf(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn full_net_matches_brute_force_on_small_grids() {
        let cases: [&[f64]; 4] = [
            &[1.0, 1.0, -1.0, -1.0],
            &[4.0, 0.0, 0.0, 0.0],
            &[0.3, -2.0, 1.5, 0.0, -0.7],
            &[-1.0, -2.0, -0.5],
        ];
        for v in cases {
            let f = gf(v);
            for i in 1..10 {
                let t = i as f64 / 10.0;
                let want = brute_force(&f, t);
                let got = full_net_average(&f, t).unwrap();
                assert!((got - want).abs() <= 1e-12 * want.max(1.0), "{v:?} t={t}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn full_net_profile_closed_form() {
        let p = net_average_profile(&gf(&[1.0, 1.0, -1.0, -1.0]), &Net::Full).unwrap();
        for i in 1..100 {
            let t = i as f64 / 100.0;
            let want = if t <= 0.5 { 1.0 } else { (1.0 - t) / t };
            assert!((p.eval(t) - want).abs() < 1e-14, "t={t}");
        }
        assert_eq!(p.eval(1.0), 0.0);
    }

    #[test]
    fn enumerable_profiles() {
        let p = net_average_profile(&gf(&[1.0; 4]), &Net::GridIntervals).unwrap();
        assert_eq!(p.profile.pieces().len(), 1);
        assert_eq!(p.eval(0.999), 1.0);
        assert_eq!(p.eval(1.0), 0.0);

        let p = net_average_profile(&gf(&[4.0, 0.0, 0.0, 0.0]), &Net::Explicit(vec![vec![0]])).unwrap();
        assert_eq!(p.eval(0.2), 4.0);
        assert_eq!(p.eval(0.25), 0.0);
        assert_eq!(p.eval(0.6), 0.0);
    }

    #[test]
    fn profile_at_boundary_excludes_equal_measure() {
        // members: cells {0} (avg 3) and {0,1} (avg 1)
        let f = gf(&[3.0, -1.0]);
        let p = net_average_profile(&f, &Net::GridIntervals).unwrap();
        assert_eq!(p.eval(0.25), 3.0);
        assert_eq!(p.eval(0.5), 1.0);
    }

    #[test]
    fn nonnegative_full_net_equals_maximal_function() {
        let f = gf(&[0.2, 3.0, 0.0, 1.1, 1.1, 5.0, 0.4]);
        let p = net_average_profile(&f, &Net::Full).unwrap();
        let r = Rearrangement::new(&f);
        for i in 1..300 {
            let t = i as f64 / 300.0;
            let a = p.eval(t);
            let b = r.maximal_average(t).unwrap();
            assert!((a - b).abs() <= 1e-13 * b, "t={t}");
        }
    }

    #[test]
    fn nets_are_monotone() {
        let f = gf(&[0.3, -1.0, 2.0, 0.5, -0.1, 0.0, 1.0, -2.0]);
        let dy = net_average_profile(&f, &Net::Dyadic).unwrap();
        let gi = net_average_profile(&f, &Net::GridIntervals).unwrap();
        let full = net_average_profile(&f, &Net::Full).unwrap();
        for i in 1..400 {
            let t = i as f64 / 400.0;
            assert!(dy.eval(t) <= gi.eval(t) + 1e-15);
            assert!(gi.eval(t) <= full.eval(t) + 1e-14);
        }
    }

    #[test]
    fn holder_pairing_examples() {
        let one = gf(&[1.0; 4]);
        assert!((holder_pairing(&one, &one, &Net::Full).unwrap() - 1.0).abs() < 1e-15);
        let g = gf(&[1.0, -1.0, 2.0, -2.0]);
        let whole = Net::Explicit(vec![vec![0, 1, 2, 3]]);
        assert_eq!(holder_pairing(&one, &g, &whole).unwrap(), 0.0);
        let spike = gf(&[4.0, 0.0, 0.0, 0.0]);
        assert!((holder_pairing(&spike, &spike, &Net::Full).unwrap() - 7.0).abs() < 1e-14);
        assert!(holder_pairing(&one, &gf(&[1.0; 2]), &Net::GridIntervals).is_err());
    }

    #[test]
    fn segments_cover_support() {
        let p = net_average_profile(&gf(&[4.0, 0.0, 0.0, 0.0]), &Net::Full).unwrap();
        let rows = p.segments(4);
        assert_eq!(rows.first().unwrap().0, 0.0);
        assert_eq!(rows.last().unwrap().1, 1.0);
        assert!(rows.windows(2).all(|w| w[0].1 == w[1].0 && w[0].2 >= w[1].2));
    }
}
