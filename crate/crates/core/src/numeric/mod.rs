//! Real-valued instantiation of supports, decoding and aggregation.

pub mod dump;
pub mod linalg;

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::codeplan::{plan, CodePlan, Construction, TieredParams};
use crate::error::{Error, Result};
use crate::supports::{normalize_finished, SupportMatrix, TieredSupport};
use linalg::{OnesSolver, RANK_CUTOFF};

/// Default decode residual threshold.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `budget x q` Gaussian matrix whose columns sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityMatrix {
    pub h: DMatrix<f64>,
    pub seed: u64,
}

/// Draws the first `q - 1` columns i.i.d. standard normal (column by column)
/// and sets the last column to minus their sum.
pub fn sample_parity(q: usize, budget: usize, seed: u64) -> Result<ParityMatrix> {
    if budget >= q {
        return Err(Error::InvalidParams(format!("parity budget {budget} must be below Q={q}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = DMatrix::<f64>::zeros(budget, q);
    for col in 0..q.saturating_sub(1) {
        for row in 0..budget {
            h[(row, col)] = StandardNormal.sample(&mut rng);
        }
    }
    for row in 0..budget {
        let mut s = 0.0;
        for col in 0..q - 1 {
            s += h[(row, col)];
        }
        h[(row, q - 1)] = -s;
    }
    Ok(ParityMatrix { h, seed })
}

/// A row supported on `support` with `H(:, L) f|_L = 0`, scaled to unit
/// max-abs entry (largest entry positive).
///
/// Within the nullspace the projection of the all-ones vector is used; if
/// that vanishes, the first basis vector is used instead.
pub fn solve_row(support: &[usize], h: &ParityMatrix) -> Result<Vec<f64>> {
    let q = h.h.ncols();
    let budget = h.h.nrows();
    let l = support.len();
    if l == 0 || support.iter().any(|&j| j >= q) {
        return Err(Error::Dimension(format!("support {support:?} invalid for Q={q}")));
    }
    let n = budget.max(l);
    let mut sub = DMatrix::<f64>::zeros(n, l);
    for (c, &j) in support.iter().enumerate() {
        for r in 0..budget {
            sub[(r, c)] = h.h[(r, j)];
        }
    }
    let svd = sub.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_CUTOFF * smax;
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(i, _)| vt.row(i).transpose())
        .collect();
    if null.is_empty() {
        return Err(Error::RankDeficient { support: support.to_vec() });
    }
    let ones = DVector::<f64>::from_element(l, 1.0);
    let mut x = DVector::<f64>::zeros(l);
    for v in &null {
        x += v * v.dot(&ones);
    }
    if x.norm() <= 1e-8 * (l as f64).sqrt() {
        x = null[0].clone();
    }
    let vmax = x.iter().fold(0.0f64, |acc, v| if v.abs() > acc.abs() { *v } else { acc });
    let mut row = vec![0.0; q];
    for (c, &j) in support.iter().enumerate() {
        row[j] = x[c] / vmax;
    }
    Ok(row)
}

/// `||H row||` relative to `||row||`.
pub fn parity_residual(row: &[f64], h: &ParityMatrix) -> f64 {
    let v = DVector::from_column_slice(row);
    let norm = v.norm();
    if norm == 0.0 || h.h.nrows() == 0 {
        return 0.0;
    }
    (&h.h * v).norm() / norm
}

/// An instantiated tiered code.
#[derive(Debug, Clone, PartialEq)]
pub struct TieredCode {
    pub plan: CodePlan,
    /// `virtual_pool x Q`.
    pub f: DMatrix<f64>,
    b_mats: Vec<DMatrix<f64>>,
    b_index: BTreeMap<Vec<usize>, usize>,
    pub h: Option<ParityMatrix>,
    pub tol: f64,
}

fn dense_row(support: &SupportMatrix, r: usize) -> Vec<f64> {
    support.row(r).iter().map(|b| if *b { 1.0 } else { 0.0 }).collect()
}

fn rows_to_matrix(q: usize, rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), q, |i, j| rows[i][j])
}

/// Every `c`-subset of `1..=n`, in lexicographic order.
pub fn finished_sets(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    crate::verify::for_each_combination(n, c, |s| out.push(s.iter().map(|i| i + 1).collect()));
    out
}

/// Solves every F row and every distinct `B_M` support against one parity
/// matrix.
///
/// Fractional supports use exact ones. Stride-window supports use 1 on each
/// server's unique partition and 1/2 on the partitions it shares, so the F
/// rows sum to the all-ones row; their phase-two row is all ones.
pub fn instantiate(ts: &TieredSupport, seed: u64, tol: f64) -> Result<TieredCode> {
    let q = ts.q();
    let params = ts.params();
    let construction = ts.plan.construction;
    let h = match construction {
        Construction::Fractional | Construction::EvenKStride => None,
        _ => {
            let budget = ts.f.max_row_weight().saturating_sub(1);
            Some(sample_parity(q, budget, seed)?)
        }
    };
    let owners: Vec<usize> = (0..q).map(|j| (0..ts.f.rows()).filter(|&r| ts.f.get(r, j)).count()).collect();
    let solve = |support: &SupportMatrix, r: usize, is_f: bool| -> Result<Vec<f64>> {
        match &h {
            None if construction == Construction::EvenKStride && is_f => Ok(support
                .row(r)
                .iter()
                .zip(&owners)
                .map(|(b, &o)| if !*b { 0.0 } else if o == 1 { 1.0 } else { 0.5 })
                .collect()),
            None => Ok(dense_row(support, r)),
            Some(h) => {
                let row = solve_row(&support.row_support(r), h)?;
                let res = parity_residual(&row, h);
                if res > tol {
                    return Err(Error::RankDeficient { support: support.row_support(r) });
                }
                Ok(row)
            }
        }
    };
    let f_rows: Vec<Vec<f64>> = (0..ts.f.rows()).map(|r| solve(&ts.f, r, true)).collect::<Result<_>>()?;
    let f = rows_to_matrix(q, &f_rows);

    let mut b_mats = Vec::new();
    let mut b_index = BTreeMap::new();
    let mut cache: HashMap<SupportMatrix, usize> = HashMap::new();
    if ts.b_rows() > 0 {
        for m in finished_sets(params.n1, params.c) {
            let bs = ts.b_support(&m)?;
            let idx = match cache.get(&bs) {
                Some(&i) => i,
                None => {
                    let rows: Vec<Vec<f64>> =
                        (0..bs.rows()).map(|r| solve(&bs, r, false)).collect::<Result<_>>()?;
                    b_mats.push(rows_to_matrix(q, &rows));
                    cache.insert(bs, b_mats.len() - 1);
                    b_mats.len() - 1
                }
            };
            b_index.insert(m, idx);
        }
    } else {
        b_mats.push(DMatrix::zeros(0, q));
        for m in finished_sets(params.n1, params.c) {
            b_index.insert(m, 0);
        }
    }
    Ok(TieredCode { plan: ts.plan.clone(), f, b_mats, b_index, h, tol })
}

impl TieredCode {
    /// Assembles a code from explicit matrices. `b` maps each finished set
    /// to its phase-two rows; an `M`-independent B may be given once under
    /// the key `[]`.
    pub fn from_parts(
        params: TieredParams,
        f: DMatrix<f64>,
        b: BTreeMap<Vec<usize>, DMatrix<f64>>,
        tol: f64,
    ) -> Result<Self> {
        let mut pl = plan(&params)?;
        pl.q_partitions = f.ncols();
        pl.virtual_pool = f.nrows();
        if f.nrows() < params.n1 || f.nrows() > params.n2 {
            return Err(Error::Dimension(format!(
                "F has {} rows; expected between n1={} and n2={}",
                f.nrows(),
                params.n1,
                params.n2
            )));
        }
        let need = params.n2 - f.nrows();
        let mut b_mats = Vec::new();
        let mut b_index = BTreeMap::new();
        let shared = b.get(&Vec::new()).cloned();
        for m in finished_sets(params.n1, params.c) {
            let mat = match b.get(&m).cloned().or_else(|| shared.clone()) {
                Some(mat) => mat,
                None if need == 0 => DMatrix::zeros(0, f.ncols()),
                None => return Err(Error::Dimension(format!("no phase-two rows for M={m:?}"))),
            };
            if mat.nrows() != need || mat.ncols() != f.ncols() {
                return Err(Error::Dimension(format!(
                    "B for M={m:?} is {}x{}, expected {need}x{}",
                    mat.nrows(),
                    mat.ncols(),
                    f.ncols()
                )));
            }
            b_mats.push(mat);
            b_index.insert(m, b_mats.len() - 1);
        }
        Ok(Self { plan: pl, f, b_mats, b_index, h: None, tol })
    }

    pub fn params(&self) -> TieredParams {
        self.plan.params
    }

    pub fn q(&self) -> usize {
        self.f.ncols()
    }

    /// `B_M` for a finished set.
    pub fn b_for(&self, m: &[usize]) -> Result<&DMatrix<f64>> {
        let key = normalize_finished(&self.params(), m)?;
        match self.b_index.get(&key) {
            Some(&i) => Ok(&self.b_mats[i]),
            None => Err(Error::InvalidParams(format!("no phase-two rows stored for M={key:?}"))),
        }
    }

    /// Row transmitted from server slot `slot` (1-based) given `M`.
    pub fn slot_row(&self, b: &DMatrix<f64>, slot: usize) -> Vec<f64> {
        let v = self.f.nrows();
        if slot <= v {
            self.f.row(slot - 1).iter().copied().collect()
        } else {
            b.row(slot - v - 1).iter().copied().collect()
        }
    }

    /// Rows of all `n2` slots given `M`, flattened row-major.
    pub fn slot_rows(&self, m: &[usize]) -> Result<Vec<Vec<f64>>> {
        let b = self.b_for(m)?;
        Ok((1..=self.params().n2).map(|s| self.slot_row(b, s)).collect())
    }

    /// Whether the nonzero entries of `F` and every `B_M` coincide exactly
    /// with the supports.
    pub fn matches_support(&self, ts: &TieredSupport) -> Result<bool> {
        let exact = |mat: &DMatrix<f64>, s: &SupportMatrix| {
            mat.nrows() == s.rows()
                && mat.ncols() == s.q()
                && (0..s.rows()).all(|r| (0..s.q()).all(|c| (mat[(r, c)] != 0.0) == s.get(r, c)))
        };
        if !exact(&self.f, &ts.f) {
            return Ok(false);
        }
        for (m, &i) in &self.b_index {
            if !exact(&self.b_mats[i], &ts.b_support(m)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn finished_sets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.b_index.keys()
    }
}

/// Decoding coefficients over the `n2` server slots.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderOutput {
    pub m: Vec<usize>,
    /// One coefficient per slot `1..=n2` (index `s - 1`); zero off `finished`.
    pub a: Vec<f64>,
    /// Slots whose rows were used, ascending.
    pub finished: Vec<usize>,
    pub residual: f64,
}

/// Finds `a` with `a . rows = 1` over the rows of `M`, `I1` (phase-one
/// servers) and `I2` (phase-two servers numbered `1..=n2-n1`).
pub fn decode(code: &TieredCode, m: &[usize], i1: &[usize], i2: &[usize]) -> Result<DecoderOutput> {
    let params = code.params();
    let m = normalize_finished(&params, m)?;
    let mut slots: Vec<usize> = m.clone();
    for &s in i1 {
        if s == 0 || s > params.n1 || m.contains(&s) {
            return Err(Error::InvalidParams(format!("I1 server {s} is not an unfinished phase-one server")));
        }
        slots.push(s);
    }
    for &j in i2 {
        if j == 0 || j > params.extra() {
            return Err(Error::InvalidParams(format!("I2 server {j} outside 1..={}", params.extra())));
        }
        slots.push(params.n1 + j);
    }
    slots.sort_unstable();
    let before = slots.len();
    slots.dedup();
    if slots.len() != before {
        return Err(Error::InvalidParams("repeated server in finished sets".into()));
    }
    if slots.len() < params.k {
        return Err(Error::InvalidParams(format!(
            "{} finished servers, need at least k={}",
            slots.len(),
            params.k
        )));
    }
    let b = code.b_for(&m)?;
    let rows: Vec<Vec<f64>> = slots.iter().map(|&s| code.slot_row(b, s)).collect();
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    let sol = OnesSolver::new().solve(&refs);
    let span_err = |residual: f64| Error::SpanViolation {
        finished: m.clone(),
        i1: i1.to_vec(),
        i2: i2.to_vec(),
        residual,
    };
    if !sol.in_span(code.tol) {
        return Err(span_err(sol.residual));
    }
    // basic solution: dependent rows get zero weight
    let coeffs = sol.coeffs.clone();
    let mut a = vec![0.0; params.n2];
    for (i, &s) in slots.iter().enumerate() {
        a[s - 1] = coeffs[i];
    }
    let residual = ones_residual(&rows, &coeffs);
    if residual > code.tol {
        return Err(span_err(residual));
    }
    Ok(DecoderOutput { m, a, finished: slots, residual })
}

fn ones_residual(rows: &[Vec<f64>], coeffs: &[f64]) -> f64 {
    let q = rows.first().map_or(0, |r| r.len());
    (0..q)
        .map(|c| {
            let s: f64 = rows.iter().zip(coeffs).map(|(r, a)| a * r[c]).sum::<f64>() - 1.0;
            s * s
        })
        .sum::<f64>()
        .sqrt()
}

/// Combines the transmissions of the decoded servers. `partials` is
/// `Q x p`; row `j` is the partial gradient of partition `j`.
pub fn aggregate(code: &TieredCode, out: &DecoderOutput, partials: &DMatrix<f64>) -> Result<DVector<f64>> {
    if partials.nrows() != code.q() {
        return Err(Error::Dimension(format!(
            "partials have {} rows, expected Q={}",
            partials.nrows(),
            code.q()
        )));
    }
    if out.a.len() != code.params().n2 {
        return Err(Error::Dimension("decoder output does not match this code".into()));
    }
    let b = code.b_for(&out.m)?;
    let mut acc = DVector::<f64>::zeros(partials.ncols());
    for &s in &out.finished {
        let row = DVector::from_vec(code.slot_row(b, s));
        let transmission = partials.transpose() * row;
        acc += transmission * out.a[s - 1];
    }
    Ok(acc)
}
