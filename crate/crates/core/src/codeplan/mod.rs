//! Regime classification and computation-per-server planning.

mod cstar;

pub use cstar::{buildable_matches, cstar_for, cstar_lookup, raw_matches, CaseRow};

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// The tuple `(n1, n2, k, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TieredParams {
    pub n1: usize,
    pub n2: usize,
    pub k: usize,
    pub c: usize,
}

impl TieredParams {
    pub fn new(n1: usize, n2: usize, k: usize, c: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if k == 0 {
            return bad("k must be at least 1".into());
        }
        if n1 < k {
            return bad(format!("n1 < k ({n1} < {k})"));
        }
        if n2 < n1 {
            return bad(format!("n2 < n1 ({n2} < {n1})"));
        }
        if c == 0 {
            return bad("c must be at least 1".into());
        }
        if c >= k {
            return bad(format!("c >= k ({c} >= {k})"));
        }
        Ok(Self { n1, n2, k, c })
    }

    /// Number of phase-two servers.
    pub fn extra(&self) -> usize {
        self.n2 - self.n1
    }

    /// Number of finished sets `M`, i.e. `C(n1, c)`.
    pub fn finished_set_count(&self) -> u128 {
        binomial(self.n1, self.c)
    }

    /// Number of `(M, I1, I2)` tuples with `|I1| + |I2| = k - c`.
    pub fn tuple_count(&self) -> u128 {
        binomial(self.n1, self.c) * binomial(self.n2 - self.c, self.k - self.c)
    }
}

impl fmt::Display for TieredParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n1={}, n2={}, k={}, c={})", self.n1, self.n2, self.k, self.c)
    }
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Which planning regime a tuple falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `n1 = n2`: no second phase.
    Degenerate,
    /// `c = 1`, `n1 = k` even, `n2 = k + 1`: stride-shifted windows.
    EvenKMinimal,
    /// `c = 1`, `n1 <= 2(k-1) < n2`: two fractional blocks.
    FractionalSplit,
    /// `c = 1`, `n1 >= 3(k-1)`: cyclic code over a padded pool.
    CyclicPadded,
    /// `c = 1`, `2(k-1) < n1 < 3(k-1) <= n2`.
    CyclicMidRange,
    /// `c > 1`, `n1 <= 2(k-1) < n2`: two fractional blocks.
    FractionalSplitMulti,
    /// `c > 1`, `n1 >= 2(k-1) + (k-c)`.
    CyclicMulti,
    /// `c > 1`, `2(k-1) < n1 < 2(k-1) + (k-c) <= n2`.
    CyclicMultiMidRange,
    /// No tiered construction applies; the plain `(n2, k)` cyclic code is used.
    PlainFallback,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Degenerate => "degenerate",
            Regime::EvenKMinimal => "even-k-minimal",
            Regime::FractionalSplit => "fractional-split",
            Regime::CyclicPadded => "cyclic-padded",
            Regime::CyclicMidRange => "cyclic-mid-range",
            Regime::FractionalSplitMulti => "fractional-split-multi",
            Regime::CyclicMulti => "cyclic-multi",
            Regime::CyclicMultiMidRange => "cyclic-multi-mid-range",
            Regime::PlainFallback => "plain-fallback",
        }
    }
}

/// The support family that realises a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Plain `(n2, k)` cyclic repetition code, no phase-two rows.
    Plain,
    /// Two all-ones blocks over `Q = 2(k-1)`.
    Fractional,
    /// Stride-shifted windows over `Q = k^2/2` with one phase-two row.
    EvenKStride,
    /// Cyclic pool with circulant phase-two blocks (`c = 1`).
    CyclicBase,
    /// Cyclic pool with phase-two rows from the C* templates (`c = 1`).
    CStarTemplate,
    /// Cyclic pool with gap-shifted circulant blocks (`c > 1`).
    CyclicMulti,
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::Plain => "plain-cyclic",
            Construction::Fractional => "fractional",
            Construction::EvenKStride => "even-k-stride",
            Construction::CyclicBase => "cyclic-base",
            Construction::CStarTemplate => "cstar-template",
            Construction::CyclicMulti => "cyclic-multi",
        }
    }
}

/// Which candidate produced the gain of a cyclic plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GainSource {
    /// Pool padded by the minimal `p*`.
    Padded,
    /// Pool with the largest C* near `n2`.
    Boosted,
    /// Smallest pool whose C* reaches `n2`.
    Minimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePlan {
    pub params: TieredParams,
    pub regime: Regime,
    /// Number of data partitions `Q`.
    pub q_partitions: usize,
    /// Number of cyclic F rows actually instantiated. Servers `1..=virtual_pool`
    /// take F rows; the remaining `n2 - virtual_pool` servers take B rows.
    pub virtual_pool: usize,
    /// Phase-two rows gained over the plain code (`G`); 0 for non-cyclic plans.
    pub gain: usize,
    pub gain_source: Option<GainSource>,
    /// Fraction of the data each server processes.
    pub fraction: Ratio<i64>,
    pub construction: Construction,
}

impl CodePlan {
    /// Number of B rows per finished set.
    pub fn b_rows(&self) -> usize {
        self.params.n2 - self.virtual_pool
    }
}

/// `(n2 - k + 1) / n2`, the load of the plain gradient code.
pub fn plain_fraction(n2: usize, k: usize) -> Ratio<i64> {
    Ratio::new((n2 - k + 1) as i64, n2 as i64)
}

/// `C_n = floor((n - k + 1) / (k - 1))`.
pub fn c_rows(n: usize, k: usize) -> usize {
    if k < 2 || n + 1 < k {
        return 0;
    }
    (n + 1 - k) / (k - 1)
}

/// `C'_n = floor((n - k + c) / (k - 1))`.
pub fn c_rows_multi(n: usize, k: usize, c: usize) -> usize {
    if k < 2 || n + c < k {
        return 0;
    }
    (n + c - k) / (k - 1)
}

/// C* with ambiguous or out-of-range entries read as 0.
fn cstar_or_zero(n: usize, k: usize) -> usize {
    cstar_lookup(n, k).unwrap_or(0)
}

/// Rows a cyclic pool of size `v` can support in phase two.
pub fn rows_available(v: usize, k: usize, c: usize) -> usize {
    if c > 1 {
        c_rows_multi(v, k, c)
    } else {
        c_rows(v, k).max(cstar_or_zero(v, k))
    }
}

/// Minimal padding `p* = max(0, ceil(n2 - n1 - (n2 - k + c)/k))`.
pub fn min_padding(params: &TieredParams) -> usize {
    let TieredParams { n1, n2, k, c } = *params;
    let num = (k * (n2 - n1)) as i64 - (n2 + c - k) as i64;
    let v = -(-num).div_euclid(k as i64);
    v.max(0) as usize
}

pub fn computation_fraction(params: &TieredParams) -> Result<Ratio<i64>> {
    Ok(plan(params)?.fraction)
}

/// Chooses a regime and construction for `params`.
pub fn plan(params: &TieredParams) -> Result<CodePlan> {
    let p = TieredParams::new(params.n1, params.n2, params.k, params.c)?;
    let TieredParams { n1, n2, k, c } = p;
    if n1 == n2 {
        return Ok(plain_plan(p, Regime::Degenerate));
    }
    if c == 1 && n1 == k && n2 == k + 1 && k % 2 == 0 {
        return Ok(CodePlan {
            params: p,
            regime: Regime::EvenKMinimal,
            q_partitions: k * k / 2,
            virtual_pool: n1,
            gain: 0,
            gain_source: None,
            fraction: Ratio::new(2 * (k as i64 - 1), (k * k) as i64),
            construction: Construction::EvenKStride,
        });
    }
    let two = 2 * (k - 1);
    if n1 <= two && n2 > two {
        return Ok(CodePlan {
            params: p,
            regime: if c == 1 { Regime::FractionalSplit } else { Regime::FractionalSplitMulti },
            q_partitions: two,
            virtual_pool: n1,
            gain: 0,
            gain_source: None,
            fraction: Ratio::new(1, 2),
            construction: Construction::Fractional,
        });
    }
    if c == 1 {
        let thr = 3 * (k - 1);
        if n1 >= thr || (n1 > two && n2 >= thr) {
            return plan_general_c1(&p);
        }
    } else {
        let thr = two + (k - c);
        if n1 >= thr || (n1 > two && n2 >= thr) {
            return plan_general_cgt1(&p);
        }
    }
    Ok(plain_plan(p, Regime::PlainFallback))
}

fn plain_plan(p: TieredParams, regime: Regime) -> CodePlan {
    CodePlan {
        params: p,
        regime,
        q_partitions: p.n2,
        virtual_pool: p.n2,
        gain: 0,
        gain_source: None,
        fraction: plain_fraction(p.n2, p.k),
        construction: Construction::Plain,
    }
}

/// Picks the largest buildable candidate; earlier candidates win ties.
fn pick(p: TieredParams, regime: Regime, thr: usize, cands: &[(usize, GainSource)]) -> CodePlan {
    let TieredParams { n1, n2, k, c } = p;
    let mut best: Option<(usize, GainSource)> = None;
    for &(g, src) in cands {
        if g > n2 {
            continue;
        }
        let v = n2 - g;
        if v < n1.max(thr) || rows_available(v, k, c) < g {
            continue;
        }
        if best.map_or(true, |(bg, _)| g > bg) {
            best = Some((g, src));
        }
    }
    let Some((g, src)) = best.filter(|(g, _)| *g > 0) else {
        let mut plan = plain_plan(p, regime);
        plan.gain_source = None;
        return plan;
    };
    let v = n2 - g;
    let construction = if c > 1 {
        Construction::CyclicMulti
    } else if c_rows(v, k) >= g {
        Construction::CyclicBase
    } else {
        Construction::CStarTemplate
    };
    CodePlan {
        params: p,
        regime,
        q_partitions: v,
        virtual_pool: v,
        gain: g,
        gain_source: Some(src),
        fraction: Ratio::new((v - k + 1) as i64, v as i64),
        construction,
    }
}

/// Plans a `c = 1` tuple with `n1 > 2(k-1)` and `n2 >= 3(k-1)`.
///
/// Three candidate gains are evaluated: the padded pool `n1 + p*`, the pool
/// near `n2` with the largest C*, and the smallest pool whose C* reaches
/// `n2`. Candidates whose pool cannot carry the claimed rows are discarded.
pub fn plan_general_c1(params: &TieredParams) -> Result<CodePlan> {
    let p = *params;
    let TieredParams { n1, n2, k, c } = p;
    let thr = 3 * (k - 1);
    if c != 1 || k < 2 || n1 <= 2 * (k - 1) || n2 < thr || n1 == n2 {
        return Err(Error::OutOfRegime(format!(
            "{p}: needs c = 1, n1 > 2(k-1), n2 >= 3(k-1), n1 < n2"
        )));
    }
    let regime = if n1 >= thr { Regime::CyclicPadded } else { Regime::CyclicMidRange };
    let lo = n1.max(thr);
    let mut pad = min_padding(&p);
    if n1 < thr {
        pad = pad.max(thr - n1);
    }
    let padded = n1 + pad;
    let g1 = n2.saturating_sub(padded).min(c_rows(padded, k));
    let mut cands = vec![(g1, GainSource::Padded)];

    let from = lo.max(n2.saturating_sub(6));
    let window: Vec<(usize, usize)> = (from..n2).map(|n| (n, cstar_or_zero(n, k))).collect();
    if let Some(max_cs) = window.iter().map(|w| w.1).max() {
        let n_plus = window.iter().find(|w| w.1 == max_cs).unwrap().0;
        cands.push(((n2 - n_plus).min(max_cs), GainSource::Boosted));
        if let Some(&(n_min, _)) = window.iter().find(|(n, cs)| n2 <= n + cs) {
            cands.push((n2 - n_min, GainSource::Minimal));
        }
    }
    Ok(pick(p, regime, thr, &cands))
}

/// Plans a `c > 1` tuple with `n1 > 2(k-1)` and `n2 >= 2(k-1) + (k-c)`.
pub fn plan_general_cgt1(params: &TieredParams) -> Result<CodePlan> {
    let p = *params;
    let TieredParams { n1, n2, k, c } = p;
    if c < 2 || n1 <= 2 * (k - 1) || n1 == n2 {
        return Err(Error::OutOfRegime(format!("{p}: needs c > 1, n1 > 2(k-1), n1 < n2")));
    }
    let thr = 2 * (k - 1) + (k - c);
    if n2 < thr {
        return Err(Error::OutOfRegime(format!("{p}: needs n2 >= 2(k-1) + (k-c)")));
    }
    let regime = if n1 >= thr { Regime::CyclicMulti } else { Regime::CyclicMultiMidRange };
    let mut pad = min_padding(&p);
    if n1 < thr {
        pad = pad.max(thr - n1);
    }
    let padded = n1 + pad;
    let rows = c_rows_multi(padded, k, c);
    let mut cands = vec![(n2.saturating_sub(padded).min(rows), GainSource::Padded)];
    if n1 < thr {
        cands.push(((n2 - thr).min(rows), GainSource::Minimal));
    }
    Ok(pick(p, regime, thr, &cands))
}
