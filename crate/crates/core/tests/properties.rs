use nalgebra::DMatrix;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiered_gc::numeric::{aggregate, finished_sets};
use tiered_gc::sim::{run_trial, tiered_timeline, trial_rng, StragglerModel};
use tiered_gc::supports::build_for_params;
use tiered_gc::verify::{check_span_tiered, check_support_condition};
use tiered_gc::{computation_fraction, decode, instantiate, plain_fraction, Construction, TieredParams};

fn small_params(max_n2: usize) -> impl Strategy<Value = TieredParams> {
    (2usize..=7)
        .prop_flat_map(move |k| (Just(k), 1..k, k..=max_n2))
        .prop_flat_map(move |(k, c, n1)| (Just(k), Just(c), Just(n1), n1..=max_n2))
        .prop_map(|(k, c, n1, n2)| TieredParams::new(n1, n2, k, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn never_worse_than_plain(p in small_params(30)) {
        let f = computation_fraction(&p).unwrap();
        prop_assert!(f <= plain_fraction(p.n2, p.k));
        prop_assert!(f > Ratio::from_integer(0));
        if p.n1 == p.n2 {
            prop_assert_eq!(f, plain_fraction(p.n2, p.k));
        }
    }

    #[test]
    fn non_decreasing_in_pool_size(n2 in 4usize..=26, k in 2usize..=8) {
        prop_assume!(k <= n2);
        let mut last = Ratio::from_integer(0);
        for n1 in k..=n2 {
            let f = computation_fraction(&TieredParams::new(n1, n2, k, 1).unwrap()).unwrap();
            prop_assert!(f >= last, "n1={} n2={} k={}", n1, n2, k);
            last = f;
        }
    }

    #[test]
    fn built_support_matches_plan(p in small_params(16)) {
        let ts = build_for_params(&p).unwrap();
        prop_assert_eq!(ts.f.rows() + ts.b_rows(), p.n2);
        prop_assert!(ts.f.all_rows_nonempty());
        let mut weight = ts.f.max_row_weight();
        for m in finished_sets(p.n1, p.c) {
            let b = ts.b_support(&m).unwrap();
            prop_assert!(b.all_rows_nonempty());
            weight = weight.max(b.max_row_weight());
        }
        prop_assert_eq!(Ratio::new(weight as i64, ts.q() as i64), computation_fraction(&p).unwrap());
    }

    #[test]
    fn cyclic_b_rows_cover_what_finished_rows_miss(p in small_params(16)) {
        let ts = build_for_params(&p).unwrap();
        prop_assume!(matches!(
            ts.plan.construction,
            Construction::CyclicBase | Construction::CStarTemplate | Construction::CyclicMulti
        ));
        for m in finished_sets(p.n1, p.c) {
            let b = ts.b_support(&m).unwrap();
            let covered: u128 = m.iter().fold(0, |acc, &s| acc | ts.f.row_mask(s - 1));
            for j in 0..b.rows() {
                let missing = !covered & ((1u128 << ts.q()) - 1);
                prop_assert_eq!(missing & !b.row_mask(j), 0, "M={:?} row {}", m, j);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn support_pass_implies_span_pass(p in small_params(11), seed in any::<u64>()) {
        let ts = build_for_params(&p).unwrap();
        let sup = check_support_condition(&ts).unwrap();
        if sup.passed {
            let code = instantiate(&ts, seed, 1e-8).unwrap();
            let span = check_span_tiered(&code).unwrap();
            prop_assert!(span.passed, "{} seed {}: {}", p, seed, span.summary());
        }
    }

    #[test]
    fn decoding_recovers_the_sum(p in small_params(11), seed in any::<u64>()) {
        let ts = build_for_params(&p).unwrap();
        prop_assume!(check_support_condition(&ts).unwrap().passed);
        let code = instantiate(&ts, seed, 1e-8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(code.q(), 4, |_, _| rng.gen_range(-1.0..1.0));
        let direct = g.row_sum().transpose();
        let m = finished_sets(p.n1, p.c).swap_remove(rng.gen_range(0..p.finished_set_count() as usize));
        let mut rest: Vec<usize> = (1..=p.n2).filter(|s| !m.contains(s)).collect();
        for i in 0..rest.len() {
            let j = rng.gen_range(i..rest.len());
            rest.swap(i, j);
        }
        rest.truncate(p.k - p.c);
        let i1: Vec<usize> = rest.iter().copied().filter(|&s| s <= p.n1).collect();
        let i2: Vec<usize> = rest.iter().copied().filter(|&s| s > p.n1).map(|s| s - p.n1).collect();
        let out = decode(&code, &m, &i1, &i2).unwrap();
        let got = aggregate(&code, &out, &g).unwrap();
        prop_assert!((got - &direct).norm() <= 1e-6 * direct.norm().max(1.0));
    }
}

proptest! {
    #[test]
    fn trial_invariants(p in small_params(15), t in 0u64..1000) {
        let ft = computation_fraction(&p).unwrap();
        let fg = plain_fraction(p.n2, p.k);
        for model in [StragglerModel::se1(), StragglerModel::se2(), StragglerModel::pareto()] {
            let (a, b) = run_trial(&p, ft, fg, &model, &mut trial_rng(17, t)).unwrap();
            for o in [&a, &b] {
                prop_assert!(o.suc >= o.sct);
                prop_assert!(o.sct >= o.phase2_launch && o.phase2_launch >= 0.0);
            }
            if p.n1 == p.n2 {
                prop_assert_eq!(&a, &b);
            }
        }
    }

    #[test]
    fn launch_is_monotone_in_each_phase_one_time(
        d in prop::collection::vec(0.1f64..10.0, 8),
        i in 0usize..5,
        bump in 0.0f64..5.0,
    ) {
        let base = tiered_timeline(&d, 5, 3, 2).phase2_launch;
        let mut up = d.clone();
        up[i] += bump;
        prop_assert!(tiered_timeline(&up, 5, 3, 2).phase2_launch >= base);
    }
}
