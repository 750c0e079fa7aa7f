//! Exhaustive checks of the span condition and the support conditions.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::codeplan::{binomial, TieredParams};
use crate::error::{Error, Result};
use crate::numeric::linalg::OnesSolver;
use crate::numeric::{finished_sets, TieredCode};
use crate::supports::{SupportMatrix, TieredSupport};

/// Largest number of tuples a single check will enumerate.
pub const TUPLE_LIMIT: u128 = 10_000_000;

/// Failures kept in a report; the total is always counted.
pub const FAILURE_CAP: usize = 1000;

/// Calls `f` with every `r`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - r {
            return;
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureDetail {
    Span { residual: f64, rank_rows: usize, rank_augmented: usize },
    Support { union: usize, needed: usize },
}

/// A failing tuple. For support failures `m` lists the finished servers
/// used and `i1`/`i2` the rest of the subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub m: Vec<usize>,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
    pub detail: FailureDetail,
}

impl Failure {
    fn line(&self) -> String {
        let head = format!("M={:?} I1={:?} I2={:?}", self.m, self.i1, self.i2);
        match &self.detail {
            FailureDetail::Span { residual, rank_rows, rank_augmented } => format!(
                "{head} residual={residual:.3e} rank={rank_rows} rank_with_ones={rank_augmented}"
            ),
            FailureDetail::Support { union, needed } => {
                format!("{head} union={union} needed={needed}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    /// Tuples (or subsets, for base-code checks) examined.
    pub checked: u64,
    pub failure_count: u64,
    /// The first [`FAILURE_CAP`] failures in enumeration order.
    pub failures: Vec<Failure>,
    pub passed: bool,
}

impl VerificationReport {
    fn from_parts(parts: Vec<(u64, u64, Vec<Failure>)>) -> Self {
        let mut r = VerificationReport::default();
        for (checked, count, fails) in parts {
            r.checked += checked;
            r.failure_count += count;
            let room = FAILURE_CAP - r.failures.len();
            r.failures.extend(fails.into_iter().take(room));
        }
        r.passed = r.failure_count == 0;
        r
    }

    /// One line per failure after a three-line header.
    pub fn to_log(&self) -> String {
        let mut s = self.summary_header();
        for f in &self.failures {
            let _ = writeln!(s, "FAIL {}", f.line());
        }
        s
    }

    /// Counts plus the first 100 failures.
    pub fn summary(&self) -> String {
        let mut s = self.summary_header();
        for f in self.failures.iter().take(100) {
            let _ = writeln!(s, "FAIL {}", f.line());
        }
        s
    }

    fn summary_header(&self) -> String {
        format!(
            "checked {}\nfailures {}\npassed {}\n",
            self.checked, self.failure_count, self.passed
        )
    }
}

fn guard(tuples: u128) -> Result<()> {
    if tuples > TUPLE_LIMIT {
        return Err(Error::GuardExceeded { tuples, limit: TUPLE_LIMIT });
    }
    Ok(())
}

/// Slots available after `M` finishes: unfinished phase-one servers, then
/// the phase-two servers.
fn remaining_slots(params: &TieredParams, m: &[usize]) -> Vec<usize> {
    (1..=params.n2).filter(|s| !m.contains(s)).collect()
}

fn split_slots(params: &TieredParams, slots: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let i1 = slots.iter().copied().filter(|&s| s <= params.n1).collect();
    let i2 = slots.iter().copied().filter(|&s| s > params.n1).map(|s| s - params.n1).collect();
    (i1, i2)
}

/// Checks that the all-ones row lies in the span of the rows of every
/// `(M, I1, I2)` with `|I1| + |I2| = k - c`.
pub fn check_span_tiered(code: &TieredCode) -> Result<VerificationReport> {
    let params = code.params();
    guard(params.tuple_count())?;
    let tol = code.tol;
    let sets = finished_sets(params.n1, params.c);
    let parts: Vec<(u64, u64, Vec<Failure>)> = sets
        .par_iter()
        .map(|m| -> Result<(u64, u64, Vec<Failure>)> {
            let rows = code.slot_rows(m)?;
            let rest = remaining_slots(&params, m);
            let mut solver = OnesSolver::new();
            let mut picked: Vec<&[f64]> = Vec::with_capacity(params.k);
            let (mut checked, mut count, mut fails) = (0u64, 0u64, Vec::new());
            for_each_combination(rest.len(), params.k - params.c, |sub| {
                picked.clear();
                picked.extend(m.iter().map(|&s| rows[s - 1].as_slice()));
                picked.extend(sub.iter().map(|&i| rows[rest[i] - 1].as_slice()));
                let sol = solver.solve(&picked);
                checked += 1;
                if !sol.in_span(tol) {
                    count += 1;
                    if fails.len() < FAILURE_CAP {
                        let slots: Vec<usize> = sub.iter().map(|&i| rest[i]).collect();
                        let (i1, i2) = split_slots(&params, &slots);
                        fails.push(Failure {
                            m: m.clone(),
                            i1,
                            i2,
                            detail: FailureDetail::Span {
                                residual: sol.residual,
                                rank_rows: sol.rank_rows,
                                rank_augmented: sol.rank_augmented,
                            },
                        });
                    }
                }
            });
            Ok((checked, count, fails))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_parts(parts))
}

/// Checks the combinatorial support condition: for every finished set `M`
/// and every subset `T` of rows drawn from `M` and at most `k - c` other
/// servers, the union of the supports has at least `(V - k) + |T|`
/// partitions, where `V` is the number of F rows.
///
/// `checked` counts `(M, I1, I2)` tuples; every subset `T` appears inside
/// some tuple, so checking all such `T` per `M` covers every tuple.
pub fn check_support_condition(ts: &TieredSupport) -> Result<VerificationReport> {
    let params = ts.params();
    guard(params.tuple_count())?;
    if ts.q() > 128 {
        return Err(Error::Dimension("support checks need Q <= 128".into()));
    }
    let base = ts.f.rows() as i64 - params.k as i64;
    let sets = finished_sets(params.n1, params.c);
    let per_set = binomial(params.n2 - params.c, params.k - params.c) as u64;
    let parts: Vec<(u64, u64, Vec<Failure>)> = sets
        .par_iter()
        .map(|m| -> Result<(u64, u64, Vec<Failure>)> {
            let b = ts.b_support(m)?;
            let v = ts.f.rows();
            let masks: Vec<u128> = (1..=params.n2)
                .map(|s| if s <= v { ts.f.row_mask(s - 1) } else { b.row_mask(s - v - 1) })
                .collect();
            let rest = remaining_slots(&params, m);
            let mut count = 0u64;
            let mut fails = Vec::new();
            let mut chosen_rest: Vec<usize> = Vec::new();
            for m_bits in 0u32..(1 << params.c) {
                let mut u_m = 0u128;
                let mut from_m = Vec::new();
                for (i, &s) in m.iter().enumerate() {
                    if m_bits >> i & 1 == 1 {
                        u_m |= masks[s - 1];
                        from_m.push(s);
                    }
                }
                subsets_upto(&rest, &masks, params.k - params.c, u_m, &mut chosen_rest, &mut |chosen, union| {
                    let l = from_m.len() + chosen.len();
                    if l == 0 {
                        return;
                    }
                    let needed = base + l as i64;
                    let got = union.count_ones() as i64;
                    if got < needed {
                        count += 1;
                        if fails.len() < FAILURE_CAP {
                            let (i1, i2) = split_slots(&params, chosen);
                            fails.push(Failure {
                                m: from_m.clone(),
                                i1,
                                i2,
                                detail: FailureDetail::Support { union: got as usize, needed: needed as usize },
                            });
                        }
                    }
                });
            }
            Ok((per_set, count, fails))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_parts(parts))
}

/// Depth-first enumeration of subsets of `items` with at most `max` members,
/// passing the chosen slots and the running union.
fn subsets_upto(
    items: &[usize],
    masks: &[u128],
    max: usize,
    union: u128,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize], u128),
) {
    fn rec(
        items: &[usize],
        masks: &[u128],
        start: usize,
        max: usize,
        union: u128,
        chosen: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize], u128),
    ) {
        f(chosen, union);
        if chosen.len() == max {
            return;
        }
        for i in start..items.len() {
            chosen.push(items[i]);
            rec(items, masks, i + 1, max, union | masks[items[i] - 1], chosen, f);
            chosen.pop();
        }
    }
    rec(items, masks, 0, max, union, chosen, f);
}

/// A plain gradient code to check, by support or by real rows.
pub enum BaseCode<'a> {
    Support(&'a SupportMatrix),
    Real(&'a DMatrix<f64>),
}

/// Checks an `(n, k)` gradient code: every `k` rows span the all-ones row
/// (real case), or every `l <= k` rows cover `(n - k) + l` partitions
/// (support case).
pub fn check_base_code(code: BaseCode<'_>, k: usize, tol: f64) -> Result<VerificationReport> {
    let n = match &code {
        BaseCode::Support(s) => s.rows(),
        BaseCode::Real(m) => m.nrows(),
    };
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("base code needs 1 <= k <= n (n={n}, k={k})")));
    }
    guard(binomial(n, k))?;
    let mut checked = 0u64;
    let mut count = 0u64;
    let mut fails = Vec::new();
    let record = |rows: &[usize], detail: FailureDetail, count: &mut u64, fails: &mut Vec<Failure>| {
        *count += 1;
        if fails.len() < FAILURE_CAP {
            fails.push(Failure { m: vec![], i1: rows.iter().map(|r| r + 1).collect(), i2: vec![], detail });
        }
    };
    match code {
        BaseCode::Real(m) => {
            let rows: Vec<Vec<f64>> = (0..n).map(|r| m.row(r).iter().copied().collect()).collect();
            let mut solver = OnesSolver::new();
            for_each_combination(n, k, |sub| {
                let picked: Vec<&[f64]> = sub.iter().map(|&r| rows[r].as_slice()).collect();
                let sol = solver.solve(&picked);
                checked += 1;
                if !sol.in_span(tol) {
                    let detail = FailureDetail::Span {
                        residual: sol.residual,
                        rank_rows: sol.rank_rows,
                        rank_augmented: sol.rank_augmented,
                    };
                    record(sub, detail, &mut count, &mut fails);
                }
            });
        }
        BaseCode::Support(s) => {
            if s.q() > 128 {
                return Err(Error::Dimension("support checks need Q <= 128".into()));
            }
            let masks: Vec<u128> = (0..n).map(|r| s.row_mask(r)).collect();
            let items: Vec<usize> = (1..=n).collect();
            checked = binomial(n, k) as u64;
            let mut chosen = Vec::new();
            subsets_upto(&items, &masks, k, 0, &mut chosen, &mut |c, union| {
                if c.is_empty() {
                    return;
                }
                let needed = (n - k + c.len()) as u32;
                if union.count_ones() < needed {
                    let zero_based: Vec<usize> = c.iter().map(|r| r - 1).collect();
                    let detail = FailureDetail::Support { union: union.count_ones() as usize, needed: needed as usize };
                    record(&zero_based, detail, &mut count, &mut fails);
                }
            });
        }
    }
    Ok(VerificationReport::from_parts(vec![(checked, count, fails)]))
}
