//! Lookup of C*, the boosted phase-two row count for pools with
//! `n1 = 3(k-1) + p` and `k >= p + 4`.
//!
//! The case table is keyed by the parity of `p` and by `p' = k - p - 4`.
//! Rows are predicates evaluated top-down. A row only counts as a match when
//! its row template can actually be expanded (see
//! [`crate::supports::pattern::cstar_rows`]); if rows with different values
//! still match, the lookup reports the ambiguity instead of picking one.

use crate::error::{Error, Result};
use crate::supports::pattern;

fn fdiv(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn cdiv(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// One predicate row of the case table.
#[derive(Clone, Copy)]
pub struct CaseRow {
    pub value: usize,
    pub tag: &'static str,
    pred: fn(i64, i64) -> bool,
}

const EVEN_ROWS: &[CaseRow] = &[
    CaseRow { value: 2, tag: "even-p-zero", pred: |p, _| p == 0 },
    CaseRow { value: 2, tag: "even-large-p'", pred: |p, q| q > 3 * p },
    CaseRow { value: 3, tag: "even-mid", pred: |p, q| 3 * p <= 2 * q && q <= 3 * p },
    CaseRow {
        value: 4,
        tag: "even-1mod3",
        pred: |p, q| q % 3 == 1 && (3 * fdiv(p, 4) - 1).max(0) < q && 2 * q < 3 * p,
    },
    CaseRow {
        value: 4,
        tag: "even-02mod3-low",
        pred: |p, q| matches!(q % 3, 0 | 2) && 2 < q && q <= cdiv(p - 1, 2),
    },
    CaseRow {
        value: 4,
        tag: "even-02mod3-high",
        pred: |p, q| matches!(q % 3, 0 | 2) && 3 * cdiv(p, 4) - 1 < q && 2 * q < 3 * p,
    },
    CaseRow {
        value: 5,
        tag: "even-0mod3",
        pred: |p, q| q % 3 == 0 && cdiv(p - 1, 2) < q && 2 * q < 3 * p,
    },
    CaseRow {
        value: 6,
        tag: "even-2mod3",
        pred: |p, q| q % 3 == 2 && cdiv(p - 1, 2) < q && 2 * q < 3 * p,
    },
    CaseRow {
        value: 6,
        tag: "even-0mod3-small",
        pred: |p, q| q % 3 == 0 && 0 < q && q < (3 * fdiv(p, 4) - 1).max(0),
    },
];

const ODD_ROWS: &[CaseRow] = &[
    CaseRow { value: 2, tag: "odd-large-p'", pred: |p, q| 2 * q > 3 * (p + 1) },
    CaseRow {
        value: 3,
        tag: "odd-mid",
        pred: |p, q| 3 * (p - 1) <= 2 * q && 2 * q <= 3 * (p + 1),
    },
    CaseRow {
        value: 4,
        tag: "odd-1mod3",
        pred: |p, q| q % 3 == 1 && 3 * fdiv(p - 1, 4) < q && 2 * q <= 3 * (p - 1),
    },
    CaseRow {
        value: 4,
        tag: "odd-2mod3",
        pred: |p, q| {
            q % 3 == 2 && 2 <= q && q <= cdiv(3 * (p - 1), 2) && q != 3 * fdiv(p - 1, 4) - 1
        },
    },
    CaseRow {
        value: 4,
        tag: "odd-2mod3-7mod8",
        pred: |p, q| q % 3 == 2 && q % 8 == 7 && 4 * q > 3 * (p - 7) && 2 * q < 3 * (p - 1),
    },
    CaseRow {
        value: 4,
        tag: "odd-2mod3-not7mod8",
        pred: |p, q| q % 3 == 2 && q % 8 != 7 && 6 * fdiv(p, 8) - 3 < q && 2 * q < 3 * (p - 1),
    },
    CaseRow {
        value: 5,
        tag: "odd-1mod3",
        pred: |p, q| q % 3 == 1 && 3 * cdiv(p - 2, 6) < q && q <= 3 * fdiv(p - 1, 4),
    },
    CaseRow {
        value: 5,
        tag: "odd-2mod3",
        pred: |p, q| {
            q % 3 == 2 && 2 <= q && q <= cdiv(3 * (p - 1), 2) && q == 3 * fdiv(p - 1, 4) - 1
        },
    },
    CaseRow {
        value: 5,
        tag: "odd-0mod3-7mod8",
        pred: |p, q| q % 3 == 0 && q % 8 == 7 && 0 < q && 4 * q <= 3 * (p - 7),
    },
    CaseRow { value: 5, tag: "odd-small", pred: |p, q| 0 < q && q <= 6 * fdiv(p, 8) - 3 },
    CaseRow {
        value: 6,
        tag: "odd-1mod3-small",
        pred: |p, q| q % 3 == 1 && 0 < q && q <= 3 * cdiv(p - 2, 6),
    },
];

/// Every table row whose predicate holds at `(p, p')`, ignoring whether its
/// template expands.
pub fn raw_matches(p: usize, p_prime: usize) -> Vec<CaseRow> {
    let rows = if p % 2 == 0 { EVEN_ROWS } else { ODD_ROWS };
    rows.iter()
        .filter(|r| (r.pred)(p as i64, p_prime as i64))
        .copied()
        .collect()
}

/// Rows whose predicate holds and whose template expands for `(p, p')`.
pub fn buildable_matches(p: usize, p_prime: usize) -> Vec<CaseRow> {
    raw_matches(p, p_prime)
        .into_iter()
        .filter(|r| r.value == 2 || pattern::cstar_rows(p, p_prime, r.value).is_ok())
        .collect()
}

/// C* for `(p, p')`: 0 when nothing matches, an error when buildable rows
/// disagree.
pub fn cstar_for(p: usize, p_prime: usize) -> Result<usize> {
    let mut values: Vec<usize> = buildable_matches(p, p_prime).iter().map(|r| r.value).collect();
    values.sort_unstable();
    values.dedup();
    match values.len() {
        0 => Ok(0),
        1 => Ok(values[0]),
        _ => Err(Error::AmbiguousCStar { p, p_prime, values }),
    }
}

/// C* for a pool of `n1` servers with straggler tolerance `k`.
///
/// Returns 0 when `n1 - 3(k-1) > k - 4`, i.e. outside the boosted range.
pub fn cstar_lookup(n1: usize, k: usize) -> Result<usize> {
    if k < 2 || n1 < 3 * (k - 1) {
        return Err(Error::OutOfRegime(format!(
            "C* requires n1 >= 3(k-1); got n1={n1}, k={k}"
        )));
    }
    let p = n1 - 3 * (k - 1);
    if k < p + 4 {
        return Ok(0);
    }
    cstar_for(p, k - p - 4)
}
