//! Two-phase straggler simulation.
//!
//! Each trial draws one uniform per server and maps it through the task-time
//! quantile function, so the tiered and plain schemes see the same server
//! speeds. Trial `t` uses a ChaCha stream `t` under the configured seed, which
//! makes results independent of how trials are scheduled across threads.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codeplan::{computation_fraction, plain_fraction, TieredParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Shifted exponential, shift proportional to the task size.
    Se1,
    /// Shifted exponential with a fixed shift.
    Se2,
    Pareto,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Se1 => "se1",
            ModelKind::Se2 => "se2",
            ModelKind::Pareto => "pa",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "se1" => Ok(ModelKind::Se1),
            "se2" => Ok(ModelKind::Se2),
            "pa" | "pareto" => Ok(ModelKind::Pareto),
            other => Err(Error::Parse(format!("unknown model '{other}'"))),
        }
    }
}

/// How `mu_factor` and the task fraction set the exponential component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MuSemantics {
    /// Exponential mean is `mu_factor * fraction`.
    #[default]
    Mean,
    /// Exponential mean is `fraction / mu_factor`.
    InverseMean,
    /// Exponential rate is `mu_factor * fraction`.
    Rate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StragglerModel {
    pub kind: ModelKind,
    pub mu_factor: f64,
    pub shift_factor: f64,
    pub fixed_shift: f64,
    pub alpha: f64,
    pub xm_factor: f64,
    pub mu: MuSemantics,
}

impl StragglerModel {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            mu_factor: 0.1,
            shift_factor: 5.0,
            fixed_shift: 100.0,
            alpha: 1.5,
            xm_factor: 1.0,
            mu: MuSemantics::Mean,
        }
    }

    pub fn se1() -> Self {
        Self::new(ModelKind::Se1)
    }

    pub fn se2() -> Self {
        Self::new(ModelKind::Se2)
    }

    pub fn pareto() -> Self {
        Self::new(ModelKind::Pareto)
    }

    pub fn with_mu(mut self, mu: MuSemantics) -> Self {
        self.mu = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mu_factor", self.mu_factor),
            ("shift_factor", self.shift_factor),
            ("fixed_shift", self.fixed_shift),
            ("xm_factor", self.xm_factor),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha.is_finite() && self.alpha > 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must exceed 1, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    fn exp_mean(&self, fraction: f64) -> f64 {
        match self.mu {
            MuSemantics::Mean => self.mu_factor * fraction,
            MuSemantics::InverseMean => fraction / self.mu_factor,
            MuSemantics::Rate => 1.0 / (self.mu_factor * fraction),
        }
    }

    /// Task time at quantile `u` in `[0, 1)`.
    pub fn quantile(&self, fraction: f64, u: f64) -> f64 {
        // -ln(1 - u) >= 0, and (1 - u) in (0, 1]
        let tail = 1.0 - u;
        match self.kind {
            ModelKind::Se1 => self.shift_factor * fraction - self.exp_mean(fraction) * tail.ln(),
            ModelKind::Se2 => self.fixed_shift - self.exp_mean(fraction) * tail.ln(),
            ModelKind::Pareto => self.xm_factor * fraction * tail.powf(-1.0 / self.alpha),
        }
    }

    /// Lower end of the support.
    pub fn floor(&self, fraction: f64) -> f64 {
        match self.kind {
            ModelKind::Se1 => self.shift_factor * fraction,
            ModelKind::Se2 => self.fixed_shift,
            ModelKind::Pareto => self.xm_factor * fraction,
        }
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "task fraction must lie in (0, 1], got {fraction}"
        )))
    }
}

pub fn sample_task_time<R: Rng + ?Sized>(
    model: &StragglerModel,
    task_fraction: f64,
    rng: &mut R,
) -> Result<f64> {
    check_fraction(task_fraction)?;
    Ok(model.quantile(task_fraction, rng.gen::<f64>()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub sct: f64,
    pub suc: f64,
    pub phase2_launch: f64,
    /// 1-based server ids in completion order (ties broken by id).
    pub finisher_order: Vec<usize>,
}

/// Timeline of a tiered run given each server's task duration.
///
/// `durations[i]` is the duration for server `i + 1`; the first `n1` entries
/// are phase-one servers.
pub fn tiered_timeline(durations: &[f64], n1: usize, k: usize, c: usize) -> TrialOutcome {
    let n2 = durations.len();
    assert!(k >= 1 && c <= k && k <= n2 && n1 <= n2 && c <= n1);

    let mut phase1: Vec<f64> = durations[..n1].to_vec();
    phase1.sort_by(f64::total_cmp);
    let launch = if n1 == n2 { 0.0 } else { phase1[c - 1] };

    let launches: Vec<f64> = (0..n2).map(|i| if i < n1 { 0.0 } else { launch }).collect();
    let finish: Vec<f64> = (0..n2).map(|i| launches[i] + durations[i]).collect();

    let mut order: Vec<usize> = (0..n2).collect();
    order.sort_by(|&a, &b| finish[a].total_cmp(&finish[b]).then(a.cmp(&b)));
    let sct = finish[order[k - 1]];

    let suc = (0..n2).map(|i| finish[i].min(sct) - launches[i]).sum();

    TrialOutcome {
        sct,
        suc,
        phase2_launch: launch,
        finisher_order: order.into_iter().map(|i| i + 1).collect(),
    }
}

/// Runs one coupled trial of both schemes.
pub fn run_trial<R: Rng + ?Sized>(
    params: &TieredParams,
    frac_tiered: Ratio<i64>,
    frac_gc: Ratio<i64>,
    model: &StragglerModel,
    rng: &mut R,
) -> Result<(TrialOutcome, TrialOutcome)> {
    let ft = ratio_f64(frac_tiered);
    let fg = ratio_f64(frac_gc);
    check_fraction(ft)?;
    check_fraction(fg)?;
    let uniforms: Vec<f64> = (0..params.n2).map(|_| rng.gen::<f64>()).collect();
    Ok(trial_from_uniforms(params, ft, fg, model, &uniforms))
}

fn trial_from_uniforms(
    params: &TieredParams,
    ft: f64,
    fg: f64,
    model: &StragglerModel,
    uniforms: &[f64],
) -> (TrialOutcome, TrialOutcome) {
    let tiered: Vec<f64> = uniforms.iter().map(|&u| model.quantile(ft, u)).collect();
    let plain: Vec<f64> = uniforms.iter().map(|&u| model.quantile(fg, u)).collect();
    let n2 = params.n2;
    (
        tiered_timeline(&tiered, params.n1, params.k, params.c),
        tiered_timeline(&plain, n2, params.k, params.c),
    )
}

pub(crate) fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schemes {
    Tiered,
    Gradient,
    #[default]
    Both,
}

impl Schemes {
    fn tiered(self) -> bool {
        matches!(self, Schemes::Tiered | Schemes::Both)
    }

    fn gradient(self) -> bool {
        matches!(self, Schemes::Gradient | Schemes::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: TieredParams,
    pub model: StragglerModel,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Schemes,
}

impl SimConfig {
    pub fn new(params: TieredParams, model: StragglerModel) -> Self {
        Self {
            params,
            model,
            trials: 10_000,
            seed: 42,
            schemes: Schemes::Both,
        }
    }
}

/// Per-scheme statistics plus the raw per-trial samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeStats {
    pub frac: Ratio<i64>,
    pub mean_sct: f64,
    pub se_sct: f64,
    pub mean_suc: f64,
    pub se_suc: f64,
    pub sct: Vec<f64>,
    pub suc: Vec<f64>,
}

impl SchemeStats {
    fn from_samples(frac: Ratio<i64>, sct: Vec<f64>, suc: Vec<f64>) -> Self {
        let (mean_sct, se_sct) = mean_se(&sct);
        let (mean_suc, se_suc) = mean_se(&suc);
        Self {
            frac,
            mean_sct,
            se_sct,
            mean_suc,
            se_suc,
            sct,
            suc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub params: TieredParams,
    pub model: StragglerModel,
    pub trials: usize,
    pub seed: u64,
    pub tiered: Option<SchemeStats>,
    pub gradient: Option<SchemeStats>,
}

pub const CSV_HEADER: &str =
    "scheme,n1,n2,k,c,model,frac,mean_sct,se_sct,mean_suc,se_suc,trials,seed";

impl SimResult {
    /// CSV rows (no header), tiered first.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        if let Some(s) = &self.tiered {
            rows.push(self.csv_row("tiered", s));
        }
        if let Some(s) = &self.gradient {
            rows.push(self.csv_row("gradient", s));
        }
        rows
    }

    pub fn csv_row(&self, scheme: &str, s: &SchemeStats) -> String {
        let p = &self.params;
        // the plain code never waits, so its row reports n1 = n2
        let n1 = if scheme == "gradient" { p.n2 } else { p.n1 };
        format!(
            "{scheme},{n1},{},{},{},{},{}/{},{:.6},{:.6},{:.6},{:.6},{},{}",
            p.n2,
            p.k,
            p.c,
            self.model.kind,
            s.frac.numer(),
            s.frac.denom(),
            s.mean_sct,
            s.se_sct,
            s.mean_suc,
            s.se_suc,
            self.trials,
            self.seed
        )
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn monte_carlo(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    cfg.model.validate()?;
    let params = cfg.params;
    let frac_t = computation_fraction(&params)?;
    let frac_g = plain_fraction(params.n2, params.k);
    let ft = ratio_f64(frac_t);
    let fg = ratio_f64(frac_g);

    let outcomes: Vec<(TrialOutcome, TrialOutcome)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let uniforms: Vec<f64> = (0..params.n2).map(|_| rng.gen::<f64>()).collect();
            trial_from_uniforms(&params, ft, fg, &cfg.model, &uniforms)
        })
        .collect();

    let stats = |pick: fn(&(TrialOutcome, TrialOutcome)) -> &TrialOutcome, frac| {
        let sct = outcomes.iter().map(|o| pick(o).sct).collect();
        let suc = outcomes.iter().map(|o| pick(o).suc).collect();
        SchemeStats::from_samples(frac, sct, suc)
    };

    Ok(SimResult {
        params,
        model: cfg.model,
        trials: cfg.trials,
        seed: cfg.seed,
        tiered: cfg.schemes.tiered().then(|| stats(|o| &o.0, frac_t)),
        gradient: cfg.schemes.gradient().then(|| stats(|o| &o.1, frac_g)),
    })
}

/// Bootstrap standard error of the sample mean.
pub fn bootstrap_se(samples: &[f64], resamples: usize, seed: u64) -> f64 {
    let n = samples.len();
    if n < 2 || resamples < 2 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| samples[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    mean_se(&means).1 * (resamples as f64).sqrt()
}

/// Sweeps `n1` over `[k, n2]`. Returns one result per `n1`; only the last
/// (`n1 = n2`) carries the gradient-code statistics.
pub fn sweep_n1(
    n2: usize,
    k: usize,
    c: usize,
    model: StragglerModel,
    trials: usize,
    seed: u64,
) -> Result<Vec<SimResult>> {
    let mut out = Vec::new();
    for n1 in k..=n2 {
        let params = TieredParams::new(n1, n2, k, c)?;
        let schemes = if n1 == n2 { Schemes::Both } else { Schemes::Tiered };
        out.push(monte_carlo(&SimConfig {
            params,
            model,
            trials,
            seed,
            schemes,
        })?);
    }
    Ok(out)
}

/// Sweeps `c` over `[1, k - 1]`; the first result also carries the
/// gradient-code statistics.
pub fn sweep_c(
    n1: usize,
    n2: usize,
    k: usize,
    model: StragglerModel,
    trials: usize,
    seed: u64,
) -> Result<Vec<SimResult>> {
    if k < 2 {
        return Err(Error::InvalidParams("a c sweep needs k >= 2".into()));
    }
    let mut out = Vec::new();
    for c in 1..k {
        let params = TieredParams::new(n1, n2, k, c)?;
        let schemes = if c == 1 { Schemes::Both } else { Schemes::Tiered };
        out.push(monte_carlo(&SimConfig {
            params,
            model,
            trials,
            seed,
            schemes,
        })?);
    }
    Ok(out)
}

/// CSV text for a list of results: header, tiered rows, then gradient rows.
pub fn sweep_csv(results: &[SimResult]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in results {
        if let Some(t) = &r.tiered {
            s += &r.csv_row("tiered", t);
            s.push('\n');
        }
    }
    for r in results {
        if let Some(g) = &r.gradient {
            s += &r.csv_row("gradient", g);
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n1: usize, n2: usize, k: usize, c: usize) -> TieredParams {
        TieredParams::new(n1, n2, k, c).unwrap()
    }

    #[test]
    fn se2_never_below_shift() {
        let m = StragglerModel::se2();
        let mut rng = trial_rng(1, 0);
        for _ in 0..10_000 {
            assert!(sample_task_time(&m, 0.3, &mut rng).unwrap() >= 100.0);
        }
    }

    #[test]
    fn pareto_mean_matches_closed_form() {
        let m = StragglerModel::pareto();
        let frac = 0.5;
        let mut rng = trial_rng(7, 0);
        let n = 1_000_000;
        let total: f64 = (0..n).map(|_| sample_task_time(&m, frac, &mut rng).unwrap()).sum();
        let expected = m.xm_factor * frac * m.alpha / (m.alpha - 1.0);
        let mean = total / n as f64;
        assert!((mean - expected).abs() / expected < 0.05, "{mean} vs {expected}");
    }

    #[test]
    fn exponential_mean_follows_semantics() {
        let frac = 0.5;
        let n = 200_000;
        for (mu, expected) in [
            (MuSemantics::Mean, 0.1 * frac),
            (MuSemantics::InverseMean, frac / 0.1),
            (MuSemantics::Rate, 1.0 / (0.1 * frac)),
        ] {
            let m = StragglerModel::se1().with_mu(mu);
            let mut rng = trial_rng(3, 0);
            let total: f64 = (0..n)
                .map(|_| sample_task_time(&m, frac, &mut rng).unwrap() - 5.0 * frac)
                .sum();
            let mean = total / n as f64;
            assert!((mean - expected).abs() / expected < 0.02, "{mu:?}: {mean}");
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let m = StragglerModel::se1();
        let a = sample_task_time(&m, 0.4, &mut trial_rng(9, 3)).unwrap();
        let b = sample_task_time(&m, 0.4, &mut trial_rng(9, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_fraction() {
        let m = StragglerModel::se1();
        let mut rng = trial_rng(0, 0);
        assert!(sample_task_time(&m, 0.0, &mut rng).is_err());
        assert!(sample_task_time(&m, 1.5, &mut rng).is_err());
        assert!(sample_task_time(&m, 1.0, &mut rng).is_ok());
    }

    #[test]
    fn model_validation() {
        let mut m = StragglerModel::pareto();
        m.alpha = 1.0;
        assert!(m.validate().is_err());
        let mut m = StragglerModel::se1();
        m.mu_factor = 0.0;
        assert!(m.validate().is_err());
        assert!(StragglerModel::se2().validate().is_ok());
    }

    #[test]
    fn deterministic_timeline_small_case() {
        // mu -> 0 under mean semantics collapses SE1 to its shift
        let mut m = StragglerModel::se1();
        m.mu_factor = 1e-12;
        let params = p(3, 4, 2, 1);
        let ft = computation_fraction(&params).unwrap();
        assert_eq!(ft, Ratio::new(2, 3));
        let fg = plain_fraction(4, 2);
        let (t, g) = run_trial(&params, ft, fg, &m, &mut trial_rng(5, 0)).unwrap();

        // all phase-one servers finish at d1 = 5 * 2/3; k = 2 <= n1 - c
        let d1 = 5.0 * 2.0 / 3.0;
        assert!((t.sct - d1).abs() < 1e-9);
        assert!((t.phase2_launch - d1).abs() < 1e-9);
        // three phase-one servers run d1 each; the phase-two server is released at once
        assert!((t.suc - 3.0 * d1).abs() < 1e-9);

        let dg = 5.0 * 3.0 / 4.0;
        assert!((g.sct - dg).abs() < 1e-9);
        assert!((g.suc - 4.0 * dg).abs() < 1e-9);
    }

    #[test]
    fn timeline_hand_example() {
        // servers 1..3 phase one, 4..5 phase two, k = 3, c = 1
        let d = [4.0, 2.0, 9.0, 1.0, 5.0];
        let o = tiered_timeline(&d, 3, 3, 1);
        assert_eq!(o.phase2_launch, 2.0);
        // finishes: 4, 2, 9, 3, 7
        assert_eq!(o.finisher_order, vec![2, 4, 1, 5, 3]);
        assert_eq!(o.sct, 4.0);
        // 4 + 2 + 4 + 1 + 2
        assert_eq!(o.suc, 13.0);
    }

    #[test]
    fn degenerate_n1_equals_n2_matches_gradient() {
        let params = p(6, 6, 4, 3);
        let ft = computation_fraction(&params).unwrap();
        let fg = plain_fraction(6, 4);
        assert_eq!(ft, fg);
        for model in [StragglerModel::se1(), StragglerModel::se2(), StragglerModel::pareto()] {
            for t in 0..50 {
                let (a, b) = run_trial(&params, ft, fg, &model, &mut trial_rng(11, t)).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.phase2_launch, 0.0);
            }
        }
    }

    #[test]
    fn suc_at_least_sct_and_order_is_permutation() {
        let params = p(8, 15, 5, 2);
        let ft = computation_fraction(&params).unwrap();
        let fg = plain_fraction(15, 5);
        let m = StragglerModel::pareto();
        for t in 0..200 {
            let (a, b) = run_trial(&params, ft, fg, &m, &mut trial_rng(2, t)).unwrap();
            for o in [&a, &b] {
                assert!(o.suc >= o.sct);
                assert!(o.sct >= o.phase2_launch && o.phase2_launch >= 0.0);
                let mut ids = o.finisher_order.clone();
                ids.sort();
                assert_eq!(ids, (1..=15).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn launch_time_monotone_in_phase_one_times() {
        let m = StragglerModel::se2();
        let mut rng = trial_rng(4, 0);
        for _ in 0..200 {
            let d: Vec<f64> = (0..12).map(|_| sample_task_time(&m, 0.5, &mut rng).unwrap()).collect();
            let base = tiered_timeline(&d, 7, 4, 2).phase2_launch;
            for i in 0..7 {
                let mut up = d.clone();
                up[i] += 3.0;
                let mut down = d.clone();
                down[i] = 100.0;
                assert!(tiered_timeline(&up, 7, 4, 2).phase2_launch >= base);
                assert!(tiered_timeline(&down, 7, 4, 2).phase2_launch <= base);
            }
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let mut cfg = SimConfig::new(p(8, 15, 5, 1), StragglerModel::se2());
        cfg.trials = 1;
        assert_eq!(monte_carlo(&cfg).unwrap(), monte_carlo(&cfg).unwrap());
        cfg.trials = 500;
        let a = monte_carlo(&cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| monte_carlo(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn monte_carlo_rejects_zero_trials() {
        let mut cfg = SimConfig::new(p(8, 15, 5, 1), StragglerModel::se2());
        cfg.trials = 0;
        assert!(monte_carlo(&cfg).is_err());
    }

    #[test]
    fn bootstrap_tracks_analytic_se() {
        let mut rng = trial_rng(8, 0);
        let xs: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let analytic = mean_se(&xs).1;
        let boot = bootstrap_se(&xs, 400, 1);
        assert!((boot - analytic).abs() / analytic < 0.15, "{boot} vs {analytic}");
    }

    #[test]
    fn sweep_row_counts() {
        let rows = sweep_n1(8, 3, 1, StragglerModel::se2(), 20, 1).unwrap();
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        // n1 in 3..=8 plus one gradient row
        assert_eq!(lines.len(), 1 + 6 + 1);
        assert!(lines.last().unwrap().starts_with("gradient,8,8,3,1,se2,3/4,"));

        let rows = sweep_c(8, 15, 5, StragglerModel::se2(), 20, 1).unwrap();
        assert_eq!(sweep_csv(&rows).lines().count(), 1 + 4 + 1);
    }

    #[test]
    fn model_names_parse() {
        assert_eq!("SE1".parse::<ModelKind>().unwrap(), ModelKind::Se1);
        assert_eq!("pa".parse::<ModelKind>().unwrap(), ModelKind::Pareto);
        assert!("weibull".parse::<ModelKind>().is_err());
    }
}
