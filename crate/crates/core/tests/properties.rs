use grandnet::interp::{decomposition_lines, KFuncConfig};
use grandnet::netavg::{full_net_average, net_average_profile};
use grandnet::norms::grand_net_norm;
use grandnet::opkernel::{apply_operator, Kernel};
use grandnet::{EpsilonSearch, GridFunction, Net, Rearrangement, SpaceParams};
use proptest::prelude::*;

fn grid_fn(max_n: usize) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(-4.0f64..4.0, 1..=max_n).prop_map(|v| GridFunction::new(v).unwrap())
}

fn pow2_fn() -> impl Strategy<Value = GridFunction> {
    (0u32..=4)
        .prop_flat_map(|k| prop::collection::vec(-4.0f64..4.0, 1usize << k))
        .prop_map(|v| GridFunction::new(v).unwrap())
}

fn ts() -> Vec<f64> {
    (1..100).map(|k| k as f64 / 100.0).collect()
}

fn cheap_kfunc() -> KFuncConfig {
    KFuncConfig {
        lambda_points: 4,
        scaling_points: 3,
        search: EpsilonSearch { grid_points: 64, ..Default::default() },
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn double_star_dominates_and_decreases(f in grid_fn(24)) {
        let r = Rearrangement::new(&f);
        let mut prev = f64::INFINITY;
        for t in ts() {
            let dstar = r.maximal_average(t).unwrap();
            prop_assert!(dstar <= prev * (1.0 + 1e-12));
            prop_assert!(dstar >= r.value_at(t) * (1.0 - 1e-12));
            prev = dstar;
        }
    }

    #[test]
    fn t_times_double_star_is_concave(f in grid_fn(24)) {
        let r = Rearrangement::new(&f);
        let g: Vec<f64> = ts().iter().map(|&t| t * r.maximal_average(t).unwrap()).collect();
        for w in g.windows(3) {
            prop_assert!(w[1] >= (w[0] + w[2]) / 2.0 - 1e-12 * (1.0 + w[1].abs()));
        }
    }

    #[test]
    fn net_profiles_are_nonincreasing(f in pow2_fn()) {
        for net in [Net::Dyadic, Net::GridIntervals, Net::Full] {
            let profile = net_average_profile(&f, &net).unwrap();
            let mut prev = f64::INFINITY;
            for t in ts() {
                let v = profile.eval(t);
                prop_assert!(v <= prev * (1.0 + 1e-12) + 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn larger_nets_give_larger_averages(f in pow2_fn()) {
        let dyadic = net_average_profile(&f, &Net::Dyadic).unwrap();
        let intervals = net_average_profile(&f, &Net::GridIntervals).unwrap();
        for t in ts() {
            let full = full_net_average(&f, t).unwrap();
            prop_assert!(dyadic.eval(t) <= intervals.eval(t) + 1e-12);
            prop_assert!(intervals.eval(t) <= full + 1e-12);
        }
    }

    #[test]
    fn operator_is_linear(
        k in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 6), 5),
        f in prop::collection::vec(-3.0f64..3.0, 5),
        g in prop::collection::vec(-3.0f64..3.0, 5),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let kernel = Kernel::new(k).unwrap();
        let (f, g) = (GridFunction::new(f).unwrap(), GridFunction::new(g).unwrap());
        let combo = GridFunction::new(f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let lhs = apply_operator(&kernel, &combo).unwrap();
        let (tf, tg) = (apply_operator(&kernel, &f).unwrap(), apply_operator(&kernel, &g).unwrap());
        for ((l, x), y) in lhs.values().iter().zip(tf.values()).zip(tg.values()) {
            prop_assert!((l - (a * x + b * y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn grand_norm_is_homogeneous(f in grid_fn(8), c in -5.0f64..5.0, theta in -1.0f64..1.0) {
        let search = EpsilonSearch { grid_points: 64, ..Default::default() };
        let params = SpaceParams::new(theta, 2.0, 2.0).unwrap();
        let base = grand_net_norm(&f, &Net::GridIntervals, &params, &search).unwrap().value;
        let scaled = grand_net_norm(&f.scaled(c), &Net::GridIntervals, &params, &search).unwrap().value;
        prop_assert!((scaled - c.abs() * base).abs() <= 1e-12 * (1.0 + c.abs() * base));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn k_upper_envelope_properties(f in grid_fn(6), c in 0.1f64..5.0) {
        let p0 = SpaceParams::new(1.0, 1.0, 2.0).unwrap();
        let p1 = SpaceParams::new(1.0, 2.0, 2.0).unwrap();
        let cfg = cheap_kfunc();
        let k = decomposition_lines(&f, &p0, &p1, &Net::GridIntervals, &cfg).unwrap();
        let fine = decomposition_lines(&f, &p0, &p1, &Net::GridIntervals, &cfg.refined()).unwrap();
        let scaled = decomposition_lines(&f.scaled(c), &p0, &p1, &Net::GridIntervals, &cfg).unwrap();
        let t_grid: Vec<f64> = (-12..=12).map(|j| 2f64.powi(j)).collect();
        let values: Vec<f64> = t_grid.iter().map(|&t| k.eval(t)).collect();
        for (&t, &v) in t_grid.iter().zip(&values) {
            prop_assert!(v <= k.norm0.min(t * k.norm1) * (1.0 + 1e-12));
            prop_assert!(fine.eval(t) <= v * (1.0 + 1e-12) + 1e-300);
            prop_assert!((scaled.eval(t) - c * v).abs() <= 1e-9 * (1.0 + c * v));
        }
        // concave in t: chord below the graph at midpoints
        for w in t_grid.windows(3).step_by(2) {
            let mid = k.eval((w[0] + w[2]) / 2.0);
            prop_assert!(mid >= (k.eval(w[0]) + k.eval(w[2])) / 2.0 * (1.0 - 1e-12));
        }
    }
}
