//! Support structures of F and the phase-two matrices `B_M`.

mod matrix;
pub mod pattern;

pub use matrix::SupportMatrix;

use num_rational::Ratio;

use crate::codeplan::{
    c_rows, c_rows_multi, cstar_lookup, plan, plain_fraction, CodePlan, Construction, Regime,
    TieredParams,
};
use crate::error::{Error, Result};

/// Rule producing `B_M` for a finished set `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum BRule {
    None,
    /// All rows cover the right half when `M` lies inside the first
    /// `first_group` servers, otherwise the left half.
    Fractional { first_group: usize },
    /// Stride windows: the single row holds the unique partition of every
    /// server outside `M`.
    EvenKStride,
    /// Rows built for `M = {1}`, rotated right by `m - 1` for `M = {m}`.
    Rotating(SupportMatrix),
    /// Gap-shifted circulant blocks built per `M`.
    Circulant,
    /// Same rows regardless of `M`.
    Fixed(SupportMatrix),
}

/// Supports of a tiered code: the cyclic (or block) F rows and the rule
/// yielding `B_M`.
///
/// F has `plan.virtual_pool` rows. Servers `1..=n1` launch in phase one;
/// phase-two servers take F rows `n1+1..=virtual_pool` first, then the
/// `plan.b_rows()` rows of `B_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieredSupport {
    pub plan: CodePlan,
    pub f: SupportMatrix,
    rule: BRule,
}

impl TieredSupport {
    pub fn params(&self) -> TieredParams {
        self.plan.params
    }

    pub fn q(&self) -> usize {
        self.f.q()
    }

    pub fn b_rows(&self) -> usize {
        self.plan.b_rows()
    }

    /// Support of `B_M` for the finished set `m` (1-based, any order).
    pub fn b_support(&self, m: &[usize]) -> Result<SupportMatrix> {
        relabel_for_finished(self, m)
    }

    /// Whether `B_M` depends on `M`.
    pub fn b_depends_on_finished(&self) -> bool {
        !matches!(self.rule, BRule::None | BRule::Fixed(_))
    }

    /// Supports with an explicit, `M`-independent B.
    pub fn with_fixed_b(plan: CodePlan, f: SupportMatrix, b: SupportMatrix) -> Result<Self> {
        if f.q() != b.q() || b.rows() != plan.b_rows() || f.rows() != plan.virtual_pool {
            return Err(Error::Dimension("supports do not match the plan".into()));
        }
        Ok(Self { plan, f, rule: BRule::Fixed(b) })
    }

    fn retarget(mut self, plan: &CodePlan) -> Self {
        self.plan = plan.clone();
        self
    }
}

/// Sorted, deduplicated finished set after range checks.
pub fn normalize_finished(params: &TieredParams, m: &[usize]) -> Result<Vec<usize>> {
    let mut v = m.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != params.c {
        return Err(Error::InvalidParams(format!(
            "finished set {m:?} must hold {} distinct servers",
            params.c
        )));
    }
    if v.iter().any(|&s| s == 0 || s > params.n1) {
        return Err(Error::InvalidParams(format!(
            "finished set {m:?} must lie in 1..={}",
            params.n1
        )));
    }
    Ok(v)
}

/// `n` rows over `Q = n`; row `i` covers the window `[i-1, i+n-k-1] mod n`.
pub fn cyclic_support(n: usize, k: usize) -> Result<SupportMatrix> {
    if k == 0 || n < k {
        return Err(Error::InvalidParams(format!("cyclic support needs n >= k >= 1 (n={n}, k={k})")));
    }
    let w = n - k + 1;
    let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..w).map(|d| (i + d) % n).collect()).collect();
    SupportMatrix::from_supports(n, &rows)
}

/// Block-diagonal all-ones blocks of size `n2 - k + 1`.
pub fn fractional_support(n2: usize, k: usize) -> Result<SupportMatrix> {
    if k == 0 || n2 < k {
        return Err(Error::InvalidParams(format!("fractional support needs n2 >= k >= 1 (n2={n2}, k={k})")));
    }
    let b = n2 - k + 1;
    if n2 % b != 0 {
        return Err(Error::InvalidParams(format!("block size {b} does not divide n2={n2}")));
    }
    let rows: Vec<Vec<usize>> = (0..n2).map(|i| ((i / b) * b..(i / b + 1) * b).collect()).collect();
    SupportMatrix::from_supports(n2, &rows)
}

/// Two fractional blocks over `Q = 2(k-1)` for `k <= n1 <= 2(k-1) < n2`.
pub fn tiered_fractional(params: &TieredParams) -> Result<TieredSupport> {
    let TieredParams { n1, n2, k, .. } = *params;
    let half = k.saturating_sub(1);
    if k < 2 || n1 > 2 * half || n2 <= 2 * half {
        return Err(Error::OutOfRegime(format!("{params}: needs k <= n1 <= 2(k-1) < n2")));
    }
    let q = 2 * half;
    let first = n1.div_ceil(2);
    let rows: Vec<Vec<usize>> = (0..n1)
        .map(|i| if i < first { (0..half).collect() } else { (half..q).collect() })
        .collect();
    let plan = CodePlan {
        params: *params,
        regime: if params.c == 1 { Regime::FractionalSplit } else { Regime::FractionalSplitMulti },
        q_partitions: q,
        virtual_pool: n1,
        gain: 0,
        gain_source: None,
        fraction: Ratio::new(1, 2),
        construction: Construction::Fractional,
    };
    Ok(TieredSupport {
        plan,
        f: SupportMatrix::from_supports(q, &rows)?,
        rule: BRule::Fractional { first_group: first },
    })
}

/// Cyclic pool of `n1 >= 3(k-1)` servers with `C_{n1}` phase-two rows,
/// built for the finished set `{1}`.
pub fn tiered_cyclic_base(n1: usize, k: usize) -> Result<TieredSupport> {
    if k < 2 || n1 < 3 * (k - 1) {
        return Err(Error::OutOfRegime(format!("cyclic base needs k >= 2, n1 >= 3(k-1) (n1={n1}, k={k})")));
    }
    let rows = c_rows(n1, k);
    let b = if rows == 1 {
        single_row_fill(n1, k)?
    } else {
        circulant_rows(n1, k, 1, &[1])?
    };
    cyclic_tiered(n1, k, 1, rows, Construction::CyclicBase, BRule::Rotating(b))
}

fn cyclic_tiered(
    n1: usize,
    k: usize,
    c: usize,
    rows: usize,
    construction: Construction,
    rule: BRule,
) -> Result<TieredSupport> {
    let params = TieredParams::new(n1, n1 + rows, k, c)?;
    let regime = if c == 1 { Regime::CyclicPadded } else { Regime::CyclicMulti };
    let plan = CodePlan {
        params,
        regime,
        q_partitions: n1,
        virtual_pool: n1,
        gain: rows,
        gain_source: None,
        fraction: Ratio::new((n1 - k + 1) as i64, n1 as i64),
        construction,
    };
    Ok(TieredSupport { plan, f: cyclic_support(n1, k)?, rule })
}

/// The single phase-two row used when only one row fits (`C = 1`, `c = 1`):
/// the gap `[n-k+1, n-1]` plus `n - 2(k-1)` partitions of `L_1`, even
/// positions first, then the highest unused odd positions.
pub fn single_row_fill(n: usize, k: usize) -> Result<SupportMatrix> {
    if k < 2 || n < 2 * (k - 1) {
        return Err(Error::OutOfRegime(format!("single-row fill needs n >= 2(k-1) (n={n}, k={k})")));
    }
    let mut row = vec![false; n];
    for slot in row.iter_mut().skip(n - k + 1) {
        *slot = true;
    }
    let mut quota = n - 2 * (k - 1);
    let l1_end = n - k; // L_1 = [0, n-k]
    let evens = (0..=l1_end).step_by(2);
    let odds = (1..=l1_end).rev().filter(|i| i % 2 == 1);
    for i in evens.chain(odds) {
        if quota == 0 {
            break;
        }
        row[i] = true;
        quota -= 1;
    }
    SupportMatrix::from_rows(n, &[row])
}

/// Phase-two rows for a cyclic pool of `n` servers and finished set `m`:
/// `C'` rows, each with one zero in each of `k - 1` blocks of width `C'`,
/// followed by a mandatory all-ones window covering the gap left by `M`,
/// all shifted so that window lands on the gap.
pub fn circulant_rows(n: usize, k: usize, c: usize, m: &[usize]) -> Result<SupportMatrix> {
    let w = c_rows_multi(n, k, c);
    if w == 0 {
        return Err(Error::OutOfRegime(format!("pool {n} supports no phase-two rows for k={k}, c={c}")));
    }
    let span = n - k + 1;
    let mut covered = vec![false; n];
    for &s in m {
        for d in 0..span {
            covered[(s - 1 + d) % n] = true;
        }
    }
    // start of the uncovered arc; 0 when M covers everything
    let t = (0..n)
        .find(|&j| !covered[j] && covered[(j + n - 1) % n])
        .unwrap_or(0);
    let l = (n + c - k) - (k - 1) * w;
    let tail = l + k - c;
    let tail_start = n - tail;
    let window_start = (t + n - l % n) % n;
    let y = (tail_start + n - window_start) % n;

    let mut rows = Vec::with_capacity(w);
    for i in 1..=w {
        let zero = (i + w + w - 3) % w; // (i + C' - 3) mod C', kept nonnegative
        let mut star = vec![true; n];
        for block in 0..(k - 1) {
            star[block * w + zero] = false;
        }
        let row: Vec<bool> = (0..n).map(|j| star[(j + y) % n]).collect();
        rows.push(row);
    }
    SupportMatrix::from_rows(n, &rows)
}

/// Stride-window code for even `k`, `n1 = k`, `n2 = k + 1`, `c = 1`.
///
/// `Q = k^2/2`; row `i` covers `k - 1` partitions starting at `(i-1)k/2`.
pub fn tiered_n1k_even(k: usize) -> Result<TieredSupport> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::OutOfRegime(format!("stride-window code needs even k >= 2 (k={k})")));
    }
    let q = k * k / 2;
    let s = k / 2;
    let t = k - 1;
    let rows: Vec<Vec<usize>> =
        (0..k).map(|i| (0..t).map(|d| (i * s + d) % q).collect()).collect();
    let params = TieredParams::new(k, k + 1, k, 1)?;
    let plan = CodePlan {
        params,
        regime: Regime::EvenKMinimal,
        q_partitions: q,
        virtual_pool: k,
        gain: 0,
        gain_source: None,
        fraction: Ratio::new(2 * (k as i64 - 1), (k * k) as i64),
        construction: Construction::EvenKStride,
    };
    Ok(TieredSupport { plan, f: SupportMatrix::from_supports(q, &rows)?, rule: BRule::EvenKStride })
}

/// Partition touched only by server `i` in the stride-window code.
pub fn even_k_unique_partition(k: usize, i: usize) -> usize {
    ((i - 1) * (k / 2) + (k - 1) / 2) % (k * k / 2)
}

fn even_k_row(k: usize, m: usize) -> Result<SupportMatrix> {
    let q = k * k / 2;
    let z: Vec<usize> = (1..=k).filter(|&i| i != m).map(|i| even_k_unique_partition(k, i)).collect();
    SupportMatrix::from_supports(q, &[z])
}

/// Cyclic pool with `C*` phase-two rows from the row templates, built for
/// the finished set `{1}`. Uses the circulant rows when `C* = 2`.
pub fn tiered_cstar(n1: usize, k: usize) -> Result<TieredSupport> {
    if k < 4 || n1 < 3 * (k - 1) || n1 > 3 * (k - 1) + (k - 4) {
        return Err(Error::OutOfRegime(format!(
            "C* templates need k >= 4 and n1 in [3(k-1), 3(k-1)+(k-4)] (n1={n1}, k={k})"
        )));
    }
    let cs = cstar_lookup(n1, k)?;
    let p = n1 - 3 * (k - 1);
    let b = match cs {
        0 => {
            return Err(Error::OutOfRegime(format!("no boosted rows for n1={n1}, k={k}")));
        }
        2 => circulant_rows(n1, k, 1, &[1])?,
        _ => SupportMatrix::from_rows(n1, &pattern::cstar_rows(p, k - p - 4, cs)?)?,
    };
    check_consecutive(&b, 1)?;
    cyclic_tiered(n1, k, 1, cs, Construction::CStarTemplate, BRule::Rotating(b))
}

/// Cyclic pool of `n1 >= 2(k-1) + (k-c)` servers with `C'_{n1}` phase-two
/// rows for `c > 1`; `B_M` is built per finished set.
pub fn tiered_c_general(n1: usize, k: usize, c: usize) -> Result<TieredSupport> {
    if c < 2 || c >= k || n1 < 2 * (k - 1) + (k - c) {
        return Err(Error::OutOfRegime(format!(
            "multi-finisher cyclic code needs 1 < c < k and n1 >= 2(k-1)+(k-c) (n1={n1}, k={k}, c={c})"
        )));
    }
    let rows = c_rows_multi(n1, k, c);
    cyclic_tiered(n1, k, c, rows, Construction::CyclicMulti, BRule::Circulant)
}

/// Every window of `c + 1` cyclically consecutive partitions meets each row.
pub fn has_consecutive_property(b: &SupportMatrix, c: usize) -> bool {
    let q = b.q();
    (0..b.rows()).all(|r| (0..q).all(|j| (0..=c).any(|d| b.get(r, (j + d) % q))))
}

fn check_consecutive(b: &SupportMatrix, c: usize) -> Result<()> {
    if has_consecutive_property(b, c) {
        Ok(())
    } else {
        Err(Error::Pattern("phase-two row misses a window of consecutive partitions".into()))
    }
}

/// Keeps the first `rows_needed` rows of every `B_M`; `n2` shrinks to match.
pub fn truncate_b(ts: &TieredSupport, rows_needed: usize) -> Result<TieredSupport> {
    let have = ts.b_rows();
    if rows_needed == 0 || rows_needed > have {
        return Err(Error::InvalidParams(format!("cannot keep {rows_needed} of {have} phase-two rows")));
    }
    let mut out = ts.clone();
    out.plan.params.n2 -= have - rows_needed;
    if out.plan.gain > 0 {
        out.plan.gain = rows_needed;
    }
    if let BRule::Rotating(b) | BRule::Fixed(b) = &mut out.rule {
        *b = b.take_rows(rows_needed);
    }
    Ok(out)
}

/// `B_M` for an arbitrary finished set.
///
/// For `c = 1` the rows built for `{1}` are rotated right by `m - 1`; for
/// `c > 1` the circulant rows are built for `M` directly. Fractional and
/// stride-window rules take `M` as input.
pub fn relabel_for_finished(ts: &TieredSupport, actual: &[usize]) -> Result<SupportMatrix> {
    let params = ts.params();
    let m = normalize_finished(&params, actual)?;
    let q = ts.q();
    let rows = ts.b_rows();
    Ok(match &ts.rule {
        BRule::None => SupportMatrix::zeros(0, q),
        BRule::Fixed(b) => b.clone(),
        BRule::Fractional { first_group } => {
            let half = q / 2;
            let cols: Vec<usize> =
                if m.iter().all(|&s| s <= *first_group) { (half..q).collect() } else { (0..half).collect() };
            SupportMatrix::from_supports(q, &vec![cols; rows])?
        }
        BRule::EvenKStride => even_k_row(params.k, m[0])?.take_rows(rows),
        BRule::Rotating(b) => b.rotate((m[0] - 1) % q),
        BRule::Circulant => circulant_rows(q, params.k, params.c, &m)?.take_rows(rows),
    })
}

/// Builds the supports realising `plan`.
pub fn build_support(plan: &CodePlan) -> Result<TieredSupport> {
    let p = plan.params;
    let v = plan.virtual_pool;
    let g = plan.gain;
    let ts = match plan.construction {
        Construction::Plain => TieredSupport {
            plan: plan.clone(),
            f: cyclic_support(p.n2, p.k)?,
            rule: BRule::None,
        },
        Construction::Fractional => tiered_fractional(&p)?.retarget(plan),
        Construction::EvenKStride => tiered_n1k_even(p.k)?.retarget(plan),
        Construction::CyclicBase => truncate_b(&tiered_cyclic_base(v, p.k)?, g)?.retarget(plan),
        Construction::CStarTemplate => truncate_b(&tiered_cstar(v, p.k)?, g)?.retarget(plan),
        Construction::CyclicMulti => truncate_b(&tiered_c_general(v, p.k, p.c)?, g)?.retarget(plan),
    };
    Ok(ts)
}

/// Plans and builds the supports for `params`.
pub fn build_for_params(params: &TieredParams) -> Result<TieredSupport> {
    build_support(&plan(params)?)
}

/// Plain `(n2, k)` cyclic code wrapped as a tiered support with no tier.
pub fn plain_tiered(n2: usize, k: usize) -> Result<TieredSupport> {
    let params = TieredParams::new(n2, n2, k, 1)?;
    let plan = CodePlan {
        params,
        regime: Regime::Degenerate,
        q_partitions: n2,
        virtual_pool: n2,
        gain: 0,
        gain_source: None,
        fraction: plain_fraction(n2, k),
        construction: Construction::Plain,
    };
    build_support(&plan)
}
