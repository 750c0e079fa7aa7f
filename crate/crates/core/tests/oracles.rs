//! Independent oracles for the span and support checks.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use tiered_gc::codeplan::{binomial, plan};
use tiered_gc::numeric::{finished_sets, instantiate};
use tiered_gc::supports::{build_for_params, cyclic_support, SupportMatrix, TieredSupport};
use tiered_gc::verify::{
    check_base_code, check_span_tiered, check_support_condition, for_each_combination, BaseCode,
    FailureDetail,
};
use tiered_gc::{decode, TieredCode, TieredParams};

fn params(n1: usize, n2: usize, k: usize, c: usize) -> TieredParams {
    TieredParams::new(n1, n2, k, c).unwrap()
}

/// Least-squares residual of `a . rows = 1` through a full SVD.
fn svd_residual(rows: &[Vec<f64>]) -> f64 {
    let q = rows[0].len();
    let at = DMatrix::from_fn(q, rows.len(), |i, j| rows[j][i]);
    let ones = DVector::from_element(q, 1.0);
    let svd = at.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd.solve(&ones, 1e-10 * smax).unwrap();
    (at * x - ones).norm()
}

/// Every `(M, slots)` tuple, slots 1-based over `n2`, with its rows.
fn tuples(code: &TieredCode) -> Vec<(Vec<usize>, Vec<usize>, Vec<Vec<f64>>)> {
    let p = code.params();
    let mut out = Vec::new();
    for m in finished_sets(p.n1, p.c) {
        let rows = code.slot_rows(&m).unwrap();
        let rest: Vec<usize> = (1..=p.n2).filter(|s| !m.contains(s)).collect();
        for_each_combination(rest.len(), p.k - p.c, |sub| {
            let slots: Vec<usize> = sub.iter().map(|&i| rest[i]).collect();
            let picked = m.iter().chain(&slots).map(|&s| rows[s - 1].clone()).collect();
            out.push((m.clone(), slots, picked));
        });
    }
    out
}

#[test]
fn span_check_agrees_with_svd_oracle() {
    for (n1, n2, k, c) in [(9, 12, 3, 1), (9, 11, 4, 2), (7, 10, 5, 1), (6, 7, 3, 1)] {
        let p = params(n1, n2, k, c);
        let code = instantiate(&build_for_params(&p).unwrap(), 3, 1e-8).unwrap();
        let rep = check_span_tiered(&code).unwrap();
        let oracle_fail = tuples(&code).iter().filter(|t| svd_residual(&t.2) > 1e-8).count();
        assert_eq!(rep.failure_count as usize, oracle_fail, "{p}");
        assert!(rep.passed, "{p}: {}", rep.summary());
    }
}

/// Code for (9,12,3,1) whose first B_M row misses a partition that only
/// F rows of `M` and one other server lack.
fn broken_example_code() -> (TieredCode, usize, usize) {
    let p = params(9, 12, 3, 1);
    let code = instantiate(&build_for_params(&p).unwrap(), 5, 1e-8).unwrap();
    let f = code.f.clone();
    // F row of server 1 lacks two partitions; pick the first
    let r = (0..code.q()).find(|&j| f[(0, j)] == 0.0).unwrap();
    let partner = (1..f.nrows()).find(|&i| f[(i, r)] == 0.0).unwrap() + 1;
    let mut b = BTreeMap::new();
    for m in finished_sets(9, 1) {
        let mut mat = code.b_for(&m).unwrap().clone();
        if m == [1] {
            mat[(0, r)] = 0.0;
        }
        b.insert(m, mat);
    }
    let broken = TieredCode::from_parts(p, f, b, 1e-8).unwrap();
    (broken, r, partner)
}

#[test]
fn zeroed_mandatory_coordinate_is_caught() {
    let (code, _r, partner) = broken_example_code();
    let rep = check_span_tiered(&code).unwrap();
    assert!(!rep.passed);
    assert!(
        rep.failures.iter().any(|f| f.m == vec![1] && f.i1 == vec![partner] && f.i2 == vec![1]),
        "{}",
        rep.summary()
    );
    // the SVD oracle sees exactly the same failures
    let oracle: BTreeSet<(Vec<usize>, Vec<usize>)> = tuples(&code)
        .into_iter()
        .filter(|t| svd_residual(&t.2) > 1e-8)
        .map(|t| (t.0, t.1))
        .collect();
    assert_eq!(oracle.len() as u64, rep.failure_count);
    for f in &rep.failures {
        let slots: Vec<usize> = f.i1.iter().copied().chain(f.i2.iter().map(|j| j + 9)).collect();
        assert!(oracle.contains(&(f.m.clone(), slots)));
    }
    assert!(decode(&code, &[1], &[partner], &[1]).is_err());
}

/// Subset enumeration of the support condition with plain sets.
fn support_oracle(ts: &TieredSupport) -> u64 {
    let p = ts.params();
    let v = ts.f.rows();
    let base = v as i64 - p.k as i64;
    let mut fails = 0;
    for m in finished_sets(p.n1, p.c) {
        let b = ts.b_support(&m).unwrap();
        let sets: Vec<BTreeSet<usize>> = (1..=p.n2)
            .map(|s| {
                let row = if s <= v { ts.f.row_support(s - 1) } else { b.row_support(s - v - 1) };
                row.into_iter().collect()
            })
            .collect();
        let rest: Vec<usize> = (1..=p.n2).filter(|s| !m.contains(s)).collect();
        for m_bits in 0..(1u32 << p.c) {
            let from_m: Vec<usize> =
                m.iter().enumerate().filter(|(i, _)| m_bits >> i & 1 == 1).map(|(_, &s)| s).collect();
            for size in 0..=(p.k - p.c) {
                for_each_combination(rest.len(), size, |sub| {
                    let chosen: Vec<usize> =
                        from_m.iter().copied().chain(sub.iter().map(|&i| rest[i])).collect();
                    if chosen.is_empty() {
                        return;
                    }
                    let union: BTreeSet<usize> =
                        chosen.iter().flat_map(|&s| sets[s - 1].iter().copied()).collect();
                    if (union.len() as i64) < base + chosen.len() as i64 {
                        fails += 1;
                    }
                });
            }
        }
    }
    fails
}

#[test]
fn support_check_agrees_with_set_oracle() {
    for (n1, n2, k, c) in [(9, 12, 3, 1), (9, 11, 4, 2), (12, 14, 5, 1), (7, 10, 5, 1), (8, 9, 4, 1)] {
        let ts = build_for_params(&params(n1, n2, k, c)).unwrap();
        let rep = check_support_condition(&ts).unwrap();
        assert_eq!(rep.failure_count, support_oracle(&ts), "({n1},{n2},{k},{c})");
    }
}

#[test]
fn broken_support_fails_both_checks() {
    // cyclic (9,3) pool with one fixed B row that misses partition 0
    let p = params(9, 10, 3, 1);
    let mut pl = plan(&p).unwrap();
    pl.virtual_pool = 9;
    pl.q_partitions = 9;
    let mut row = vec![true; 9];
    row[0] = false;
    let b = SupportMatrix::from_rows(9, &[row]).unwrap();
    let ts = TieredSupport::with_fixed_b(pl, cyclic_support(9, 3).unwrap(), b).unwrap();
    let sup = check_support_condition(&ts).unwrap();
    assert!(!sup.passed);
    assert_eq!(sup.failure_count, support_oracle(&ts));
    let code = instantiate(&ts, 1, 1e-8).unwrap();
    assert!(!check_span_tiered(&code).unwrap().passed);
}

#[test]
fn tuple_count_matches_closed_form() {
    for (n1, n2, k, c) in [(9, 12, 3, 1), (9, 11, 4, 2), (10, 10, 4, 2), (8, 15, 5, 3), (7, 10, 5, 1)] {
        let p = params(n1, n2, k, c);
        let split: u128 = (0..=(k - c))
            .map(|a| binomial(n1 - c, a) * binomial(n2 - n1, k - c - a))
            .sum();
        let closed = binomial(n1, c) * split;
        assert_eq!(p.tuple_count(), closed);
        let ts = build_for_params(&p).unwrap();
        let code = instantiate(&ts, 0, 1e-8).unwrap();
        assert_eq!(check_span_tiered(&code).unwrap().checked as u128, closed);
        assert_eq!(check_support_condition(&ts).unwrap().checked as u128, closed);
    }
    assert_eq!(params(9, 12, 3, 1).tuple_count(), 495);
}

#[test]
fn four_server_cyclic_code() {
    let s = cyclic_support(4, 2).unwrap();
    assert_eq!(s.row_support(0), vec![0, 1, 2]);
    assert!(check_base_code(BaseCode::Support(&s), 2, 1e-8).unwrap().passed);

    let code = instantiate(&build_for_params(&params(4, 4, 2, 1)).unwrap(), 11, 1e-8).unwrap();
    assert!(check_span_tiered(&code).unwrap().passed);
    let out = decode(&code, &[1], &[2], &[]).unwrap();
    let g = DMatrix::from_row_slice(4, 1, &[1.0, 2.0, 4.0, 8.0]);
    let sum = tiered_gc::numeric::aggregate(&code, &out, &g).unwrap();
    assert!((sum[0] - 15.0).abs() < 1e-9);
}

/// Three partitions, three phase-one servers, one phase-two server whose
/// rows depend on which server finished first.
fn three_partition_code() -> TieredCode {
    let f = DMatrix::from_row_slice(3, 3, &[0.5, 1.0, 0.0, 0.0, 1.0, -1.0, 0.5, 0.0, 1.0]);
    let mut b = BTreeMap::new();
    b.insert(vec![1], DMatrix::from_row_slice(1, 3, &[0.5, 0.0, 1.0]));
    b.insert(vec![2], DMatrix::from_row_slice(1, 3, &[0.5, 1.0, 0.0]));
    b.insert(vec![3], DMatrix::from_row_slice(1, 3, &[0.0, 1.0, -1.0]));
    TieredCode::from_parts(params(3, 4, 2, 1), f, b, 1e-9).unwrap()
}

#[test]
fn three_partition_tiered_code() {
    let code = three_partition_code();
    assert!(check_span_tiered(&code).unwrap().passed);
    // W1 then W4: (g1/2 + g2) + (g1/2 + g3)
    let out = decode(&code, &[1], &[], &[1]).unwrap();
    assert!((out.a[0] - 1.0).abs() < 1e-12 && (out.a[3] - 1.0).abs() < 1e-12);
    assert_eq!(out.finished, vec![1, 4]);
    assert_eq!(plan(&params(3, 4, 2, 1)).unwrap().fraction, num_rational::Ratio::new(2, 3));
}

#[test]
fn fraction_matches_max_row_weight() {
    for (n1, n2, k, c) in [
        (7, 10, 5, 1),
        (9, 12, 3, 1),
        (9, 11, 4, 2),
        (9, 12, 4, 2),
        (10, 10, 5, 1),
        (12, 19, 5, 1),
        (13, 16, 5, 1),
        (8, 15, 5, 3),
    ] {
        let p = params(n1, n2, k, c);
        let ts = build_for_params(&p).unwrap();
        let mut weight = ts.f.max_row_weight();
        for m in finished_sets(n1, c) {
            weight = weight.max(ts.b_support(&m).unwrap().max_row_weight());
        }
        let frac = num_rational::Ratio::new(weight as i64, ts.q() as i64);
        assert_eq!(frac, plan(&p).unwrap().fraction, "{p}");
    }
}

#[test]
fn failure_details_name_ranks() {
    let (code, _, _) = broken_example_code();
    let rep = check_span_tiered(&code).unwrap();
    for f in &rep.failures {
        match f.detail {
            FailureDetail::Span { rank_rows, rank_augmented, .. } => {
                assert!(rank_augmented > rank_rows)
            }
            _ => panic!("span check produced a support failure"),
        }
    }
}
