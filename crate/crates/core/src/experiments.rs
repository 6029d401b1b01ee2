//! Seeded Monte Carlo runs over random stabilizer ensembles, compared with
//! analytic bounds.
//!
//! Every trial draws from its own ChaCha stream `(seed, trial index)`, so the
//! report does not depend on how trials are scheduled across threads. All
//! exponentials and logarithms in bounds are base 2.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordElement;
use crate::entanglement::{ghz_count, mixed_bound_details, pure_bipartite_entanglement};
use crate::error::{Error, Result};
use crate::gf2::{subspace_intersection_dim, subspace_sum_dim};
use crate::oracle;
use crate::pauli::PauliOperator;
use crate::stabilizer::{Partition, StabilizerGroup};

pub const SCHEMA_VERSION: u32 = 1;
const BASE_NOTE: &str = "all exp and log in bounds are base 2";
/// Width, in standard errors, of the tolerance on mean comparisons.
const MEAN_SIGMAS: f64 = 3.0;
/// `z` of the reported Wilson upper limit.
const WILSON_Z: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    PureBipartite,
    Purity,
    GhzTripartite,
    GhzMultipartite,
    MixedBipartite,
    Concentration,
    Lipschitz,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::PureBipartite,
        Self::Purity,
        Self::GhzTripartite,
        Self::GhzMultipartite,
        Self::MixedBipartite,
        Self::Concentration,
        Self::Lipschitz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::PureBipartite => "pure-bipartite",
            Self::Purity => "purity",
            Self::GhzTripartite => "ghz-tripartite",
            Self::GhzMultipartite => "ghz-multipartite",
            Self::MixedBipartite => "mixed-bipartite",
            Self::Concentration => "concentration",
            Self::Lipschitz => "lipschitz",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind {s:?}")))
    }
}

/// Parameters of one run. Fields that a kind does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub na: usize,
    pub nb: usize,
    pub nc: usize,
    /// Party size (multipartite), `n_B` (mixed), total qubits (lipschitz).
    pub n: usize,
    /// Number of parties (multipartite, lipschitz).
    pub m: usize,
    /// Overrides `k = round(β n)` in mixed runs.
    pub k: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub delta_grid: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// Enumerate every state instead of sampling (at most 3 qubits).
    pub exhaustive: bool,
    /// Replace the random ensemble by one fixed state, given as generators.
    pub fixed_state: Option<Vec<String>>,
    /// Worker threads; does not affect results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            na: 4,
            nb: 4,
            nc: 4,
            n: 16,
            m: 3,
            k: None,
            trials: 1000,
            seed: 0,
            epsilon: 0.25,
            delta_grid: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            alpha: 0.0,
            beta: 1.0,
            exhaustive: false,
            fixed_state: None,
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 && !self.exhaustive {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.delta_grid.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Config("delta grid entries must be finite and nonnegative".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Bound on the mean of the statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanBound {
    pub name: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub applicable: bool,
    pub passed: bool,
}

/// Empirical tail probability against an analytic bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub form: String,
    pub delta: f64,
    /// Event threshold on the statistic.
    pub threshold: f64,
    pub count: u64,
    pub empirical: f64,
    pub wilson_upper: f64,
    pub bound: f64,
    pub applicable: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub note: String,
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    pub invocation: Option<String>,
    pub seed: u64,
    /// Derived sizes actually used, e.g. rounded `n_A` and `k`.
    pub realized: BTreeMap<String, f64>,
    pub trials: usize,
    pub statistic: String,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub standard_error: f64,
    /// Mean as an exact fraction, when the ensemble was enumerated.
    pub exact_mean: Option<String>,
    pub histogram_variable: String,
    pub histogram: BTreeMap<i64, u64>,
    pub analytic_mean_bounds: Vec<MeanBound>,
    pub tail_table: Vec<TailRow>,
    pub extra: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub pass_flags: BTreeMap<String, bool>,
    pub passed: bool,
    pub runtime_seconds: f64,
}

impl ExperimentReport {
    /// The report with the wall-clock field zeroed, for comparing runs.
    pub fn without_runtime(&self) -> ExperimentReport {
        ExperimentReport {
            runtime_seconds: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Tail table and histogram in one CSV, told apart by the `table` column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            table: &'a str,
            form: &'a str,
            key: Option<i64>,
            delta: Option<f64>,
            threshold: Option<f64>,
            count: u64,
            empirical: Option<f64>,
            wilson_upper: Option<f64>,
            bound: Option<f64>,
            applicable: Option<bool>,
            passed: Option<bool>,
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        for t in &self.tail_table {
            w.serialize(Row {
                table: "tail",
                form: &t.form,
                key: None,
                delta: Some(t.delta),
                threshold: Some(t.threshold),
                count: t.count,
                empirical: Some(t.empirical),
                wilson_upper: Some(t.wilson_upper),
                bound: Some(t.bound),
                applicable: Some(t.applicable),
                passed: Some(t.passed),
            })
            .map_err(io)?;
        }
        for (&key, &count) in &self.histogram {
            w.serialize(Row {
                table: "histogram",
                form: &self.histogram_variable,
                key: Some(key),
                delta: None,
                threshold: None,
                count,
                empirical: Some(count as f64 / self.trials as f64),
                wilson_upper: None,
                bound: None,
                applicable: None,
                passed: None,
            })
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Identifies one analytic bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TheoremId {
    /// `𝔼 S(ψ_A) ≥ n_B − 2^{n_B}/2^{n_A}` with `n_A ≥ n_B`.
    PureMeanLower { na: usize, nb: usize },
    /// `𝔼 Tr ψ_A² = (2^{n_A} + 2^{n_B}) / (2^{n_A+n_B} + 1)`.
    PurityMean { na: usize, nb: usize },
    /// `P(S < 𝔼S − δ) ≤ exp[−δ²/(64(n_A+n_B))]`.
    PureDeviation { na: usize, nb: usize, delta: f64 },
    /// `P(S < n(1−ε)) ≤ exp[−nε²/512 · 2n/(2n + α log n)]`, needs `n ≥ 2/ε`.
    PureFraction { n: usize, epsilon: f64, alpha: f64 },
    /// `𝔼Δ ≤ Σ n_C / 2^{n_A+n_B−n_C}` over the three parties.
    ThreeGhzMean { na: usize, nb: usize, nc: usize },
    /// `P(Δ^m > εn)` for the full `m`-party split.
    MultipartiteFull { m: usize, n: usize, epsilon: f64 },
    /// `P(Δ^{m'} > εn) ≤ exp[−nε²/(64 m)]` for coarser splits.
    MultipartiteCoarse { m: usize, n: usize, epsilon: f64 },
    /// `(1 − β/2) n − n^α/2^k − 1/n^α`, with `(1 − β/2) n` read as `n − k/2`.
    MixedMeanLower { n: usize, k: usize, alpha: f64, beta: f64 },
    /// `(1 − β/2) n + (α/2) log n`.
    MixedMeanUpper { n: usize, k: usize, alpha: f64, beta: f64 },
    /// Two-sided `P(E ∉ (1 ± ε)(n − k/2))`.
    MixedTail { n: usize, epsilon: f64, alpha: f64, beta: f64 },
    /// `P(|F − 𝔼F| > δ) < 2 exp[−δ²/(64 n)]`.
    CliffordConcentration { n: usize, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    /// False when the parameters fall outside the range where the bound is proved.
    pub applicable: bool,
}

fn exp2(x: f64) -> f64 {
    x.exp2()
}

fn log2(x: f64) -> f64 {
    x.log2()
}

pub fn bound_value(id: TheoremId) -> BoundValue {
    let ok = |value: f64| BoundValue {
        value,
        applicable: true,
    };
    match id {
        TheoremId::PureMeanLower { na, nb } => {
            let (big, small) = (na.max(nb) as f64, na.min(nb) as f64);
            ok(small - exp2(small - big))
        }
        TheoremId::PurityMean { na, nb } => {
            ok((exp2(na as f64) + exp2(nb as f64)) / (exp2((na + nb) as f64) + 1.0))
        }
        TheoremId::PureDeviation { na, nb, delta } => {
            ok(exp2(-delta * delta / (64.0 * (na + nb) as f64)))
        }
        TheoremId::PureFraction { n, epsilon, alpha } => {
            let nf = n as f64;
            let shape = 2.0 * nf / (2.0 * nf + alpha * log2(nf));
            BoundValue {
                value: exp2(-nf * epsilon * epsilon / 512.0 * shape),
                applicable: n > 0 && nf >= 2.0 / epsilon,
            }
        }
        TheoremId::ThreeGhzMean { na, nb, nc } => {
            let (a, b, c) = (na as f64, nb as f64, nc as f64);
            BoundValue {
                value: c / exp2(a + b - c) + b / exp2(a + c - b) + a / exp2(b + c - a),
                applicable: na + nb >= nc && nb + nc >= na && na + nc >= nb,
            }
        }
        TheoremId::MultipartiteFull { m, n, epsilon } => {
            let h = (m / 2) as f64;
            let mf = m as f64;
            let e = h * n as f64 * epsilon * epsilon / 512.0 * (1.0 - 1.0 / h).powi(2) * (1.0 - 1.0 / mf);
            BoundValue {
                value: exp2(-e),
                applicable: m >= 4,
            }
        }
        TheoremId::MultipartiteCoarse { m, n, epsilon } => BoundValue {
            value: exp2(-(n as f64) * epsilon * epsilon / 64.0 / m as f64),
            applicable: m >= 4,
        },
        TheoremId::MixedMeanLower { n, k, alpha, beta } => {
            let nf = n as f64;
            BoundValue {
                value: nf - k as f64 / 2.0 - nf.powf(alpha) / exp2(k as f64) - 1.0 / nf.powf(alpha),
                applicable: beta > 0.0 && beta <= 2.0,
            }
        }
        TheoremId::MixedMeanUpper { n, k, alpha, beta } => {
            let nf = n as f64;
            BoundValue {
                value: nf - k as f64 / 2.0 + alpha / 2.0 * log2(nf),
                applicable: beta > 0.0 && beta <= 2.0,
            }
        }
        TheoremId::MixedTail { n, epsilon, alpha, beta } => {
            let nf = n as f64;
            let g = 1.0 - beta / 2.0;
            let shape = 2.0 * nf / (2.0 * nf + alpha * log2(nf));
            let value = 2.0 * exp2(-nf * epsilon * epsilon * g * g / (25.0 * 128.0) * shape);
            let in_range = beta > 0.0 && beta <= 2.0 && g > 0.0;
            let applicable = in_range && {
                let t = 4.0 / (epsilon * g);
                let n_over_log = if n > 1 { nf / log2(nf) } else { f64::INFINITY };
                nf >= t.max(log2(t) / (2.0 * beta))
                    && n_over_log >= ((alpha - 1.0) / (2.0 * beta)).max(alpha / (epsilon * g))
            };
            BoundValue { value, applicable }
        }
        TheoremId::CliffordConcentration { n, delta } => {
            ok(2.0 * exp2(-delta * delta / (64.0 * n as f64)))
        }
    }
}

/// Per-trial generator: stream `trial` of the ChaCha generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_parallel<T, F>(cfg: &ExperimentConfig, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync + Send,
{
    let work = || {
        (0..count)
            .into_par_iter()
            .map(|i| f(i, &mut trial_rng(cfg.seed, i)))
            .collect::<Result<Vec<T>>>()
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Mean, sample variance and standard error, summed in trial order.
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var, (var / n).sqrt())
}

/// Upper end of the Wilson score interval.
pub fn wilson_upper(successes: u64, trials: usize, z: f64) -> f64 {
    if trials == 0 {
        return 1.0;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre + spread) / (1.0 + z2 / n)).min(1.0)
}

fn histogram(keys: impl IntoIterator<Item = i64>) -> BTreeMap<i64, u64> {
    let mut h = BTreeMap::new();
    for k in keys {
        *h.entry(k).or_insert(0) += 1;
    }
    h
}

struct Builder {
    report: ExperimentReport,
}

impl Builder {
    fn new(cfg: &ExperimentConfig, statistic: &str, values: &[f64], hist_var: &str, hist: BTreeMap<i64, u64>) -> Self {
        let (mean, var, se) = summarize(values);
        Self {
            report: ExperimentReport {
                schema_version: SCHEMA_VERSION,
                note: BASE_NOTE.to_string(),
                kind: cfg.kind,
                config: cfg.clone(),
                invocation: None,
                seed: cfg.seed,
                realized: BTreeMap::new(),
                trials: values.len(),
                statistic: statistic.to_string(),
                empirical_mean: mean,
                empirical_variance: var,
                standard_error: se,
                exact_mean: None,
                histogram_variable: hist_var.to_string(),
                histogram: hist,
                analytic_mean_bounds: Vec::new(),
                tail_table: Vec::new(),
                extra: BTreeMap::new(),
                checks: Vec::new(),
                pass_flags: BTreeMap::new(),
                passed: true,
                runtime_seconds: 0.0,
            },
        }
    }

    fn realized(&mut self, key: &str, v: f64) {
        self.report.realized.insert(key.to_string(), v);
    }

    fn extra(&mut self, key: &str, v: f64) {
        self.report.extra.insert(key.to_string(), v);
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.report.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    /// Lower/upper comparison with a tolerance of three standard errors.
    fn mean_bound(&mut self, name: &str, lower: Option<BoundValue>, upper: Option<BoundValue>) {
        let mean = self.report.empirical_mean;
        let slack = MEAN_SIGMAS * self.report.standard_error;
        let lo_ok = lower.is_none_or(|b| mean >= b.value - slack);
        let hi_ok = upper.is_none_or(|b| mean <= b.value + slack);
        let applicable = lower.is_none_or(|b| b.applicable) && upper.is_none_or(|b| b.applicable);
        let passed = lo_ok && hi_ok;
        self.report.analytic_mean_bounds.push(MeanBound {
            name: name.to_string(),
            lower: lower.map(|b| b.value),
            upper: upper.map(|b| b.value),
            applicable,
            passed,
        });
        if applicable {
            let detail = format!(
                "mean {:.6} ± {:.6} (3 SE) vs [{}, {}]",
                mean,
                slack,
                lower.map_or("-inf".into(), |b| format!("{:.6}", b.value)),
                upper.map_or("inf".into(), |b| format!("{:.6}", b.value)),
            );
            self.check(name, passed, detail);
        }
    }

    /// Adds a tail row; `count` trials hit the event out of `trials`.
    fn tail(&mut self, form: &str, delta: f64, threshold: f64, count: u64, bound: BoundValue) {
        let n = self.report.trials;
        let empirical = count as f64 / n as f64;
        let passed = empirical <= bound.value;
        self.report.tail_table.push(TailRow {
            form: form.to_string(),
            delta,
            threshold,
            count,
            empirical,
            wilson_upper: wilson_upper(count, n, WILSON_Z),
            bound: bound.value,
            applicable: bound.applicable,
            passed,
        });
    }

    fn finish(mut self, started: Instant) -> ExperimentReport {
        let tails_ok = self
            .report
            .tail_table
            .iter()
            .filter(|t| t.applicable)
            .all(|t| t.passed);
        if !self.report.tail_table.is_empty() {
            let failed: Vec<String> = self
                .report
                .tail_table
                .iter()
                .filter(|t| t.applicable && !t.passed)
                .map(|t| format!("{} δ={}", t.form, t.delta))
                .collect();
            let detail = if failed.is_empty() {
                format!("{} applicable rows", self.report.tail_table.iter().filter(|t| t.applicable).count())
            } else {
                format!("exceeded: {}", failed.join(", "))
            };
            self.check("tails within bounds", tails_ok, detail);
        }
        self.report.pass_flags = self
            .report
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.passed))
            .collect();
        self.report.passed = self.report.checks.iter().all(|c| c.passed);
        self.report.runtime_seconds = started.elapsed().as_secs_f64();
        self.report
    }
}

fn fixed_group(cfg: &ExperimentConfig, n: usize) -> Result<Option<StabilizerGroup>> {
    let Some(gens) = &cfg.fixed_state else {
        return Ok(None);
    };
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    let s = StabilizerGroup::from_strs(&refs)?;
    if s.num_qubits() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: s.num_qubits(),
        });
    }
    Ok(Some(s))
}

/// The pure states the bipartite kinds run over: every state when
/// exhaustive, otherwise `trials` uniform samples or one fixed state.
fn pure_values<T, F>(cfg: &ExperimentConfig, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&StabilizerGroup) -> Result<T> + Sync + Send,
{
    if cfg.exhaustive {
        let states = oracle::enumerate_stabilizer_states(n)
            .map_err(|_| Error::Config(format!("exhaustive runs need at most 3 qubits, got {n}")))?;
        return states.iter().map(&f).collect();
    }
    if let Some(s) = fixed_group(cfg, n)? {
        return (0..cfg.trials).map(|_| f(&s)).collect();
    }
    run_parallel(cfg, cfg.trials, |_, rng| f(&StabilizerGroup::sample_uniform(n, 0, rng)))
}

fn require_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Config(format!("{name} must be positive")));
    }
    Ok(())
}

/// Bipartite entanglement of uniform pure states against the mean bound and
/// both tail forms.
pub fn run_pure_bipartite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    require_positive("na", cfg.na)?;
    require_positive("nb", cfg.nb)?;
    let started = Instant::now();
    let (na, nb) = (cfg.na, cfg.nb);
    let cut = Partition::from_sizes(&[na, nb])?;
    let es = pure_values(cfg, na + nb, |s| pure_bipartite_entanglement(s, &cut))?;
    let values: Vec<f64> = es.iter().map(|&e| e as f64).collect();
    let mut b = Builder::new(cfg, "entanglement", &values, "entanglement", histogram(es.iter().map(|&e| e as i64)));
    if cfg.exhaustive {
        let total: usize = es.iter().sum();
        b.report.exact_mean = Some(Ratio::new(total as i128, es.len() as i128).to_string());
    }
    bipartite_checks(&mut b, cfg, &es, na, nb);
    Ok(b.finish(started))
}

fn bipartite_checks(b: &mut Builder, cfg: &ExperimentConfig, es: &[usize], na: usize, nb: usize) {
    let cap = na.min(nb);
    let out = es.iter().filter(|&&e| e > cap).count();
    b.check("support within [0, min(nA, nB)]", out == 0, format!("{out} values above {cap}"));
    b.mean_bound(
        "mean entanglement lower bound",
        Some(bound_value(TheoremId::PureMeanLower { na, nb })),
        None,
    );
    let mean = b.report.empirical_mean;
    for &delta in &cfg.delta_grid {
        let threshold = mean - delta;
        let count = es.iter().filter(|&&e| (e as f64) < threshold).count() as u64;
        b.tail("below mean by delta", delta, threshold, count, bound_value(TheoremId::PureDeviation { na, nb, delta }));
    }
    // The fraction form assumes n_A = n + α log n ≥ n_B = n.
    let n = cap;
    let alpha = if n > 1 { (na.max(nb) - n) as f64 / log2(n as f64) } else { 0.0 };
    let threshold = n as f64 * (1.0 - cfg.epsilon);
    let count = es.iter().filter(|&&e| (e as f64) < threshold).count() as u64;
    let mut bound = bound_value(TheoremId::PureFraction {
        n,
        epsilon: cfg.epsilon,
        alpha,
    });
    bound.applicable &= n > 1 || na == nb;
    b.tail("below n(1-epsilon)", cfg.epsilon, threshold, count, bound);
}

/// Reduced purity `2^{−E}` against its exact expectation.
pub fn run_purity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    require_positive("na", cfg.na)?;
    require_positive("nb", cfg.nb)?;
    let started = Instant::now();
    let (na, nb) = (cfg.na, cfg.nb);
    let cut = Partition::from_sizes(&[na, nb])?;
    let es = pure_values(cfg, na + nb, |s| pure_bipartite_entanglement(s, &cut))?;
    let values: Vec<f64> = es.iter().map(|&e| exp2(-(e as f64))).collect();
    let mut b = Builder::new(cfg, "purity", &values, "entanglement", histogram(es.iter().map(|&e| e as i64)));
    let analytic = bound_value(TheoremId::PurityMean { na, nb });
    let exact_analytic = Ratio::new((1i128 << na) + (1i128 << nb), (1i128 << (na + nb)) + 1);
    b.extra("analytic_mean", analytic.value);
    let out = values.iter().filter(|&&p| !(p > 0.0 && p <= 1.0)).count();
    b.check("purity in (0, 1]", out == 0, format!("{out} values outside"));
    if cfg.exhaustive {
        // Σ 2^{−E} over all states, with denominators 2^{min(nA, nB)}.
        let cap = na.min(nb);
        let num: i128 = es.iter().map(|&e| 1i128 << (cap - e)).sum();
        let exact = Ratio::new(num, (es.len() as i128) << cap);
        b.report.exact_mean = Some(exact.to_string());
        b.check(
            "exact mean equals analytic value",
            exact == exact_analytic,
            format!("{exact} vs {exact_analytic}"),
        );
    } else {
        b.mean_bound("mean purity", Some(analytic), Some(analytic));
    }
    Ok(b.finish(started))
}

fn parse_triangle(cfg: &ExperimentConfig) -> Result<(usize, usize, usize)> {
    let (a, b, c) = (cfg.na, cfg.nb, cfg.nc);
    require_positive("na", a)?;
    require_positive("nb", b)?;
    require_positive("nc", c)?;
    if a + b < c || b + c < a || a + c < b {
        return Err(Error::Config(format!(
            "party sizes {a}, {b}, {c} violate the triangle condition"
        )));
    }
    Ok((a, b, c))
}

struct TripartiteTrial {
    delta: usize,
    sum_trivial_dims: usize,
    pairwise_intersections: usize,
    dim_local: usize,
}

/// GHZ count of uniform tripartite states against the mean bound, with the
/// per-sample subspace relations of its derivation.
pub fn run_ghz_tripartite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let (na, nb, nc) = parse_triangle(cfg)?;
    let started = Instant::now();
    let n = na + nb + nc;
    let parts = Partition::from_sizes(&[na, nb, nc])?;
    let trial = |s: &StabilizerGroup| -> Result<TripartiteTrial> {
        let subs = parts
            .parties()
            .iter()
            .map(|p| s.subgroup_trivial_on(&p.qubits))
            .collect::<Result<Vec<_>>>()?;
        let dim_local = subspace_sum_dim(&[&subs[0], &subs[1], &subs[2]]);
        let pairwise = subspace_intersection_dim(&subs[0], &subs[1])
            + subspace_intersection_dim(&subs[0], &subs[2])
            + subspace_intersection_dim(&subs[1], &subs[2]);
        let delta = ghz_count(s, &parts)?;
        Ok(TripartiteTrial {
            delta,
            sum_trivial_dims: subs.iter().map(|m| m.nrows()).sum(),
            pairwise_intersections: pairwise,
            dim_local,
        })
    };
    let trials = pure_values(cfg, n, trial)?;
    let values: Vec<f64> = trials.iter().map(|t| t.delta as f64).collect();
    let mut b = Builder::new(cfg, "ghz_count", &values, "ghz_count", histogram(trials.iter().map(|t| t.delta as i64)));

    let cap = na.min(nb).min(nc);
    let out = trials.iter().filter(|t| t.delta > cap).count();
    b.check("support within [0, min party]", out == 0, format!("{out} values above {cap}"));
    b.mean_bound("mean GHZ count upper bound", None, Some(bound_value(TheoremId::ThreeGhzMean { na, nb, nc })));

    let sum_low = trials.iter().filter(|t| t.sum_trivial_dims < n).count();
    b.check(
        "sum of trivial-subgroup dims at least n",
        sum_low == 0,
        format!("{sum_low} samples below {n}"),
    );
    // Three-term inclusion–exclusion is only an upper bound for subspaces.
    let above = trials
        .iter()
        .filter(|t| t.dim_local > t.sum_trivial_dims - t.pairwise_intersections)
        .count();
    let strict = trials
        .iter()
        .filter(|t| t.dim_local < t.sum_trivial_dims - t.pairwise_intersections)
        .count();
    b.check(
        "inclusion-exclusion bounds dim S_loc from above",
        above == 0,
        format!("{above} samples above; equality fails in {strict}"),
    );
    b.extra("inclusion_exclusion_strict", strict as f64);
    b.extra("mean_pairwise_intersection_dim", summarize(&trials.iter().map(|t| t.pairwise_intersections as f64).collect::<Vec<_>>()).0);
    Ok(b.finish(started))
}

/// Contiguous merge of `m` parties into `groups` groups of near-equal size.
fn coarse_groups(m: usize, groups: usize) -> Vec<Vec<usize>> {
    (0..groups)
        .map(|g| (g * m / groups..(g + 1) * m / groups).collect())
        .collect()
}

/// GHZ counts of `m`-party uniform states, for the full split and every
/// coarser split into `4 ≤ m' < m` groups, against both tail bounds.
pub fn run_ghz_multipartite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let (m, n) = (cfg.m, cfg.n);
    if m < 4 {
        return Err(Error::Config(format!("multipartite runs need m >= 4, got {m}")));
    }
    require_positive("n", n)?;
    let started = Instant::now();
    let parts = Partition::from_sizes(&vec![n; m])?;
    let coarse: Vec<(usize, Partition)> = (4..m)
        .map(|g| Ok((g, parts.merge(&coarse_groups(m, g))?)))
        .collect::<Result<_>>()?;
    let rows = run_parallel(cfg, cfg.trials, |_, rng| {
        let s = StabilizerGroup::sample_uniform(n * m, 0, rng);
        let full = ghz_count(&s, &parts)?;
        let others = coarse
            .iter()
            .map(|(_, p)| ghz_count(&s, p))
            .collect::<Result<Vec<_>>>()?;
        Ok((full, others))
    })?;
    let values: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let mut b = Builder::new(cfg, "ghz_count", &values, "ghz_count", histogram(rows.iter().map(|r| r.0 as i64)));
    b.realized("parties", m as f64);
    let out = rows.iter().filter(|r| r.0 > n || r.1.iter().any(|&d| d > n)).count();
    b.check("GHZ count at most n", out == 0, format!("{out} samples above {n}"));
    let threshold = cfg.epsilon * n as f64;
    let count = rows.iter().filter(|r| r.0 as f64 > threshold).count() as u64;
    b.tail(
        &format!("ghz count above epsilon n, m'={m}"),
        cfg.epsilon,
        threshold,
        count,
        bound_value(TheoremId::MultipartiteFull { m, n, epsilon: cfg.epsilon }),
    );
    for (i, (g, _)) in coarse.iter().enumerate() {
        let count = rows.iter().filter(|r| r.1[i] as f64 > threshold).count() as u64;
        b.tail(
            &format!("ghz count above epsilon n, m'={g}"),
            cfg.epsilon,
            threshold,
            count,
            bound_value(TheoremId::MultipartiteCoarse { m, n, epsilon: cfg.epsilon }),
        );
    }
    Ok(b.finish(started))
}

/// Mixed-state EPR bound for uniform codes of rank `2^k` against the mean
/// sandwich and the two-sided tail bound.
pub fn run_mixed(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let n = cfg.n;
    require_positive("n", n)?;
    if !(0.0..=2.0).contains(&cfg.beta) {
        return Err(Error::Config(format!("beta must lie in [0, 2], got {}", cfg.beta)));
    }
    if !cfg.alpha.is_finite() || cfg.alpha < 0.0 {
        return Err(Error::Config(format!("alpha must be nonnegative, got {}", cfg.alpha)));
    }
    let started = Instant::now();
    let na_req = n as f64 + cfg.alpha * log2(n as f64);
    let na = na_req.round() as usize;
    let nb = n;
    let k_req = cfg.beta * n as f64;
    let k = cfg.k.unwrap_or(k_req.round() as usize);
    if k > na + nb {
        return Err(Error::Config(format!("k = {k} exceeds n_A + n_B = {}", na + nb)));
    }
    let cut = Partition::from_sizes(&[na, nb])?;
    let rows = run_parallel(cfg, cfg.trials, |_, rng| {
        let s = StabilizerGroup::sample_uniform(na + nb, k, rng);
        mixed_bound_details(&s, &cut)
    })?;
    let values: Vec<f64> = rows.iter().map(|r| r.clamped as f64).collect();
    let mut b = Builder::new(cfg, "mixed_epr_lower_bound", &values, "mixed_epr_lower_bound", histogram(rows.iter().map(|r| r.clamped as i64)));
    b.realized("na_requested", na_req);
    b.realized("na", na as f64);
    b.realized("nb", nb as f64);
    b.realized("k_requested", k_req);
    b.realized("k", k as f64);
    let raw: Vec<f64> = rows.iter().map(|r| r.raw()).collect();
    b.extra("raw_mean", summarize(&raw).0);
    b.extra("clamped_trials", rows.iter().filter(|r| r.raw_halves < 0).count() as f64);
    b.extra("half_integer_trials", rows.iter().filter(|r| r.raw_halves % 2 != 0).count() as f64);

    let cap = na.min(nb);
    let out = rows.iter().filter(|r| r.clamped > cap).count();
    b.check("support within [0, min(nA, nB)]", out == 0, format!("{out} values above {cap}"));
    if k == na + nb {
        let nonzero = rows.iter().filter(|r| r.clamped != 0).count();
        b.check("maximally mixed state has no entanglement", nonzero == 0, format!("{nonzero} nonzero"));
    }
    let (alpha, beta) = (cfg.alpha, cfg.beta);
    b.mean_bound(
        "mean mixed EPR sandwich",
        Some(bound_value(TheoremId::MixedMeanLower { n, k, alpha, beta })),
        Some(bound_value(TheoremId::MixedMeanUpper { n, k, alpha, beta })),
    );
    let centre = n as f64 - k as f64 / 2.0;
    let bound = bound_value(TheoremId::MixedTail {
        n,
        epsilon: cfg.epsilon,
        alpha,
        beta,
    });
    let (lo, hi) = ((1.0 - cfg.epsilon) * centre, (1.0 + cfg.epsilon) * centre);
    let count = values.iter().filter(|&&v| v < lo || v > hi).count() as u64;
    b.tail("outside (1 +- epsilon)(n - k/2)", cfg.epsilon, centre, count, bound);
    Ok(b.finish(started))
}

/// Entanglement of `c|0…0⟩` for uniform Clifford `c`, two-sided tails
/// against the concentration bound.
pub fn run_concentration(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    require_positive("na", cfg.na)?;
    require_positive("nb", cfg.nb)?;
    let started = Instant::now();
    let (na, nb) = (cfg.na, cfg.nb);
    let n = na + nb;
    let cut = Partition::from_sizes(&[na, nb])?;
    let es = run_parallel(cfg, cfg.trials, |_, rng| {
        let c = CliffordElement::sample_uniform(n, rng);
        pure_bipartite_entanglement(&c.stabilizer_of_zero_state(), &cut)
    })?;
    let values: Vec<f64> = es.iter().map(|&e| e as f64).collect();
    let mut b = Builder::new(cfg, "entanglement", &values, "entanglement", histogram(es.iter().map(|&e| e as i64)));
    b.mean_bound(
        "mean entanglement lower bound",
        Some(bound_value(TheoremId::PureMeanLower { na, nb })),
        None,
    );
    let mean = b.report.empirical_mean;
    for &delta in &cfg.delta_grid {
        let count = values.iter().filter(|&&v| (v - mean).abs() > delta).count() as u64;
        b.tail("two-sided deviation", delta, delta, count, bound_value(TheoremId::CliffordConcentration { n, delta }));
    }
    Ok(b.finish(started))
}

/// Random Clifford pairs: half independent, half a few transvections apart.
/// Counts violations of the 1- and m-Lipschitz properties.
pub fn run_lipschitz(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let (n, m) = (cfg.n, cfg.m);
    if n < 2 {
        return Err(Error::Config(format!("lipschitz runs need n >= 2, got {n}")));
    }
    if m > n {
        return Err(Error::Config(format!("cannot split {n} qubits among {m} parties")));
    }
    let started = Instant::now();
    let cut = Partition::from_sizes(&[n / 2, n - n / 2])?;
    let multi = if m >= 3 {
        let sizes: Vec<usize> = (0..m).map(|i| (i + 1) * n / m - i * n / m).collect();
        Some(Partition::from_sizes(&sizes)?)
    } else {
        None
    };
    let base = StabilizerGroup::zero_state(n);
    let rows = run_parallel(cfg, cfg.trials, |i, rng| {
        let c1 = CliffordElement::sample_uniform(n, rng);
        let c2 = if i % 2 == 0 {
            CliffordElement::sample_uniform(n, rng)
        } else {
            let mut c = c1.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let h = loop {
                    let v = crate::gf2::BitVector::random(2 * n, rng);
                    if !v.is_zero() {
                        break PauliOperator::from_symplectic(&v, false);
                    }
                };
                c = CliffordElement::transvection(&h)?.compose(&c)?;
            }
            c
        };
        let d = c1.distance(&c2)?;
        let s1 = base.conjugated_by(&c1)?;
        let s2 = base.conjugated_by(&c2)?;
        let de = pure_bipartite_entanglement(&s1, &cut)?.abs_diff(pure_bipartite_entanglement(&s2, &cut)?);
        let dg = match &multi {
            Some(p) => Some(ghz_count(&s1, p)?.abs_diff(ghz_count(&s2, p)?)),
            None => None,
        };
        Ok((d, de, dg))
    })?;
    let values: Vec<f64> = rows.iter().map(|r| r.1 as f64).collect();
    let mut b = Builder::new(cfg, "entanglement_difference", &values, "distance", histogram(rows.iter().map(|r| r.0 as i64)));
    let e_viol = rows.iter().filter(|r| r.1 > r.0).count();
    b.check("entanglement is 1-Lipschitz", e_viol == 0, format!("{e_viol} violations"));
    let ratio = rows
        .iter()
        .filter(|r| r.0 > 0)
        .map(|r| r.1 as f64 / r.0 as f64)
        .fold(0.0, f64::max);
    b.extra("max_entanglement_ratio", ratio);
    b.extra("entanglement_violations", e_viol as f64);
    if multi.is_some() {
        let g_viol = rows.iter().filter(|r| r.2.unwrap() > m * r.0).count();
        b.check("GHZ count is m-Lipschitz", g_viol == 0, format!("{g_viol} violations"));
        let g_ratio = rows
            .iter()
            .filter(|r| r.0 > 0)
            .map(|r| r.2.unwrap() as f64 / r.0 as f64)
            .fold(0.0, f64::max);
        b.extra("max_ghz_ratio", g_ratio);
        b.extra("ghz_violations", g_viol as f64);
    }
    Ok(b.finish(started))
}

/// Dispatches on `cfg.kind`.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.kind {
        ExperimentKind::PureBipartite => run_pure_bipartite(cfg),
        ExperimentKind::Purity => run_purity(cfg),
        ExperimentKind::GhzTripartite => run_ghz_tripartite(cfg),
        ExperimentKind::GhzMultipartite => run_ghz_multipartite(cfg),
        ExperimentKind::MixedBipartite => run_mixed(cfg),
        ExperimentKind::Concentration => run_concentration(cfg),
        ExperimentKind::Lipschitz => run_lipschitz(cfg),
    }
}
