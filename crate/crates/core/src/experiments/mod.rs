//! Seeded Monte Carlo sweeps: vector and matrix phase transitions, Wendel's formula, and
//! support sizes of random null-space vectors.
//!
//! Every trial draws from its own stream `seed.substream([experiment, grid value, trial])`, so
//! results do not depend on scheduling and identical configurations give identical CSV bytes.
//! Trials of one grid point run in parallel; rows are aggregated in trial order.

mod config;
mod plot;

use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

pub use config::{ExperimentConfig, ExperimentKind, Grid, Profile};
pub use plot::{emit_plot, plot_script};

use crate::ensembles::{bernoulli01, gaussian_matrix, gaussian_sym_operator, NullSpaceSampler, Seed};
use crate::error::{Error, Result};
use crate::linalg::text::format_number;
use crate::psd::{exact_singleton_psd, probe_singleton_psd, random_psd, PsdProbeOptions, PsdVerdictKind};
use crate::records::Record;
use crate::sdp::SdpSolver;
use crate::vector::{exact_singleton, l1_recover, mplus_membership, probe_singleton, wendel_probability, L1Recovery};

/// Entrywise tolerance for counting an L1 reconstruction as exact.
pub const L1_SUCCESS_TOL: f64 = 1e-5;
/// Largest `n` for which `exact` runs the deterministic vector check (2n LPs per trial).
pub const EXACT_VECTOR_LIMIT: usize = 400;
/// Largest matrix dimension for which `exact` runs the deterministic PSD check.
pub const EXACT_MATRIX_LIMIT: usize = 8;

/// Header, column names and rows of an experiment CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Record,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(header: Record, columns: &[&str]) -> Self {
        Self { header, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// `# key=value` header lines, a column-name row, then the data rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header.fields() {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parses text produced by [`CsvTable::to_csv`]; every data field must be numeric.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = Record::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix('#') {
                let (k, v) = rest.trim().split_once('=').ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: format!("header line `{t}` is not `# key=value`"),
                })?;
                header.push(k.trim(), v.trim());
                continue;
            }
            let fields: Vec<String> = t.split(',').map(|f| f.trim().to_string()).collect();
            match &columns {
                None => columns = Some(fields),
                Some(cols) => {
                    if fields.len() != cols.len() {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("{} fields, expected {}", fields.len(), cols.len()),
                        });
                    }
                    if let Some(f) = fields.iter().find(|f| f.parse::<f64>().is_err()) {
                        return Err(Error::Parse { line: lineno, msg: format!("non-numeric field `{f}`") });
                    }
                    rows.push(fields);
                }
            }
        }
        let columns = columns.ok_or(Error::Parse { line: text.lines().count(), msg: "no column row".into() })?;
        Ok(Self { header, columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].parse().unwrap_or(f64::NAN)).collect())
    }
}

fn num(v: f64) -> String {
    // Adding zero folds -0.0 into 0.0.
    format_number(v + 0.0)
}

/// Aggregate of one grid point of a phase sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseRow {
    /// Sparsity `k` or rank `r`.
    pub grid: usize,
    pub trials: usize,
    /// Trials judged singleton by the randomized probe.
    pub singleton: usize,
    /// Trials where L1 minimization reproduced `x₀` (vector sweeps only).
    pub l1_success: Option<usize>,
    /// Trials certified by the deterministic check (when enabled).
    pub exact_singleton: Option<usize>,
    /// Trials with a non-converged SDP and no refutation (matrix sweeps only).
    pub inconclusive: Option<usize>,
    /// Trials lost to solver errors.
    pub failures: usize,
    /// Mean of the finite probe spreads.
    pub mean_gap: f64,
}

impl PhaseRow {
    pub fn singleton_fraction(&self) -> f64 {
        self.singleton as f64 / self.trials as f64
    }

    pub fn l1_fraction(&self) -> Option<f64> {
        self.l1_success.map(|s| s as f64 / self.trials as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseResult {
    pub config: ExperimentConfig,
    pub rows: Vec<PhaseRow>,
}

impl PhaseResult {
    /// Grid value where the singleton fraction first falls below `level`, linearly
    /// interpolated from the preceding grid point. `None` if it never does; the first grid
    /// value if it starts below.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        crossing(&self.rows.iter().map(|r| (r.grid as f64, r.singleton_fraction())).collect::<Vec<_>>(), level)
    }

    pub fn table(&self) -> CsvTable {
        let vector = self.config.kind == ExperimentKind::VectorPhase;
        let grid_name = if vector { "k" } else { "rank" };
        let mut cols = vec![grid_name, "trials", "singleton_fraction"];
        if vector {
            cols.push("l1_fraction");
        } else {
            cols.push("inconclusive");
        }
        cols.extend(["mean_gap", "failures"]);
        let exact = self.rows.iter().any(|r| r.exact_singleton.is_some());
        if exact {
            cols.push("exact_singleton_fraction");
        }
        let mut table = CsvTable::new(self.config.to_record(), &cols);
        for r in &self.rows {
            let mut row = vec![r.grid.to_string(), r.trials.to_string(), num(r.singleton_fraction())];
            if vector {
                row.push(num(r.l1_fraction().unwrap_or(f64::NAN)));
            } else {
                row.push(r.inconclusive.unwrap_or(0).to_string());
            }
            row.push(num(r.mean_gap));
            row.push(r.failures.to_string());
            if exact {
                row.push(num(r.exact_singleton.map_or(f64::NAN, |e| e as f64 / r.trials as f64)));
            }
            table.rows.push(row);
        }
        table
    }
}

/// See [`PhaseResult::crossing`].
pub fn crossing(points: &[(f64, f64)], level: f64) -> Option<f64> {
    let idx = points.iter().position(|&(_, f)| f < level)?;
    if idx == 0 {
        return Some(points[0].0);
    }
    let (x0, f0) = points[idx - 1];
    let (x1, f1) = points[idx];
    Some(x0 + (f0 - level) / (f0 - f1) * (x1 - x0))
}

/// Outcome of one trial; `None` marks a solver error.
struct TrialOutcome {
    singleton: bool,
    l1: bool,
    exact: Option<bool>,
    inconclusive: bool,
    gap: f64,
}

fn aggregate(grid: usize, outcomes: Vec<Option<TrialOutcome>>, vector: bool) -> PhaseRow {
    let trials = outcomes.len();
    let done: Vec<&TrialOutcome> = outcomes.iter().flatten().collect();
    let gaps: Vec<f64> = done.iter().map(|o| o.gap).filter(|g| g.is_finite()).collect();
    let mean_gap = if gaps.is_empty() { 0.0 } else { gaps.iter().sum::<f64>() / gaps.len() as f64 };
    let exact_any = done.iter().any(|o| o.exact.is_some());
    PhaseRow {
        grid,
        trials,
        singleton: done.iter().filter(|o| o.singleton).count(),
        l1_success: vector.then(|| done.iter().filter(|o| o.l1).count()),
        exact_singleton: exact_any.then(|| done.iter().filter(|o| o.exact == Some(true)).count()),
        inconclusive: (!vector).then(|| done.iter().filter(|o| o.inconclusive).count()),
        failures: trials - done.len(),
        mean_gap,
    }
}

fn check_budget(cfg: &ExperimentConfig, rows: &[PhaseRow]) -> Result<()> {
    let failures: usize = rows.iter().map(|r| r.failures).sum();
    let total: usize = rows.iter().map(|r| r.trials).sum();
    let budget = (cfg.failure_budget * total as f64).floor() as usize;
    if failures > budget {
        return Err(Error::FailureBudget { failures, budget });
    }
    Ok(())
}

fn require_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::Config(format!("configuration is for {}, not {kind}", cfg.kind)));
    }
    cfg.validate()
}

const VECTOR_TAG: u64 = 1;
const MATRIX_TAG: u64 = 2;
const WENDEL_TAG: u64 = 3;
const SUPPORT_TAG: u64 = 4;

fn vector_trial(cfg: &ExperimentConfig, k: usize, seed: Seed) -> Result<TrialOutcome> {
    let a = bernoulli01(cfg.m, cfg.n, cfg.density, cfg.ones_row, seed.substream(&[0]))?;
    let mut rng = seed.substream(&[1]).rng();
    let mut x0 = vec![0.0; cfg.n];
    for j in index::sample(&mut rng, cfg.n, k) {
        x0[j] = rng.random::<f64>();
    }
    let verdict = probe_singleton(&a, &x0, cfg.probes, seed.substream(&[2]))?;
    let l1 = match l1_recover(&a, &a.matvec(&x0), seed.substream(&[3]))? {
        L1Recovery::Recovered { x, .. } => x.iter().zip(&x0).all(|(a, b)| (a - b).abs() <= L1_SUCCESS_TOL),
        L1Recovery::Infeasible => false,
    };
    let exact = if cfg.exact && cfg.n <= EXACT_VECTOR_LIMIT {
        Some(exact_singleton(&a, &x0)?.kind.is_singleton())
    } else {
        None
    };
    Ok(TrialOutcome { singleton: verdict.kind.is_singleton(), l1, exact, inconclusive: false, gap: verdict.gap })
}

/// Vector phase sweep over sparsity `k`: random 0-1 matrix, uniform random support of size `k`
/// with uniform(0,1) entries, randomized singleton probe and L1 recovery per trial.
pub fn run_vector_phase(cfg: &ExperimentConfig) -> Result<PhaseResult> {
    require_kind(cfg, ExperimentKind::VectorPhase)?;
    let root = Seed::new(cfg.seed, VECTOR_TAG);
    let rows: Vec<PhaseRow> = cfg
        .grid
        .values()
        .into_iter()
        .map(|k| {
            let outcomes = (0..cfg.trials)
                .into_par_iter()
                .map(|t| vector_trial(cfg, k, root.substream(&[k as u64, t as u64])).ok())
                .collect();
            aggregate(k, outcomes, true)
        })
        .collect();
    check_budget(cfg, &rows)?;
    Ok(PhaseResult { config: cfg.clone(), rows })
}

fn matrix_trial(cfg: &ExperimentConfig, r: usize, seed: Seed, opts: &PsdProbeOptions) -> Result<TrialOutcome> {
    let solver = SdpSolver::new(gaussian_sym_operator(cfg.n, cfg.m, seed.substream(&[0])));
    let x0 = random_psd(cfg.n, r, &mut seed.substream(&[1]).rng());
    let verdict = probe_singleton_psd(&solver, &x0, cfg.probes, seed.substream(&[2]), opts)?;
    let exact = if cfg.exact && cfg.n <= EXACT_MATRIX_LIMIT {
        Some(exact_singleton_psd(&solver, &x0, opts)?.kind.is_singleton())
    } else {
        None
    };
    Ok(TrialOutcome {
        singleton: verdict.kind.is_singleton(),
        l1: false,
        exact,
        inconclusive: verdict.kind == PsdVerdictKind::Inconclusive,
        gap: verdict.gap,
    })
}

/// Matrix phase sweep over rank `r`: Gaussian symmetric operator, `X₀ = B Bᵀ` with an `n × r`
/// Gaussian factor, randomized SDP probes per trial.
pub fn run_matrix_phase(cfg: &ExperimentConfig) -> Result<PhaseResult> {
    require_kind(cfg, ExperimentKind::MatrixPhase)?;
    let root = Seed::new(cfg.seed, MATRIX_TAG);
    let opts = PsdProbeOptions::default();
    let rows: Vec<PhaseRow> = cfg
        .grid
        .values()
        .into_iter()
        .map(|r| {
            let outcomes = (0..cfg.trials)
                .into_par_iter()
                .map(|t| matrix_trial(cfg, r, root.substream(&[r as u64, t as u64]), &opts).ok())
                .collect();
            aggregate(r, outcomes, false)
        })
        .collect();
    check_budget(cfg, &rows)?;
    Ok(PhaseResult { config: cfg.clone(), rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WendelRow {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    /// Draws whose columns contain the origin in their convex hull.
    pub hits: usize,
    pub formula: f64,
}

impl WendelRow {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// Binomial z-score of the frequency against the formula; 0 or ±∞ when the formula is 0 or 1.
    pub fn z_score(&self) -> f64 {
        let p = self.formula;
        let diff = self.frequency() - p;
        let var = p * (1.0 - p) / self.trials as f64;
        if var > 0.0 {
            diff / var.sqrt()
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

/// Monte Carlo check of Wendel's formula: `0 ∈ conv(columns)` of an `m × n` Gaussian matrix,
/// decided by the membership LP.
pub fn run_wendel_mc(cfg: &ExperimentConfig) -> Result<Vec<WendelRow>> {
    require_kind(cfg, ExperimentKind::WendelMc)?;
    let root = Seed::new(cfg.seed, WENDEL_TAG);
    cfg.pairs
        .iter()
        .map(|&(m, n)| {
            let results: Vec<Result<bool>> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let a = gaussian_matrix(m, n, root.substream(&[m as u64, n as u64, t as u64]));
                    Ok(!mplus_membership(&a)?.is_member())
                })
                .collect();
            let failures = results.iter().filter(|r| r.is_err()).count();
            let budget = (cfg.failure_budget * cfg.trials as f64).floor() as usize;
            if failures > budget {
                return Err(Error::FailureBudget { failures, budget });
            }
            let hits = results.iter().filter(|r| matches!(r, Ok(true))).count();
            Ok(WendelRow { m, n, trials: cfg.trials - failures, hits, formula: wendel_probability(m, n)? })
        })
        .collect()
}

pub fn wendel_table(cfg: &ExperimentConfig, rows: &[WendelRow]) -> CsvTable {
    let mut t = CsvTable::new(cfg.to_record(), &["m", "n", "trials", "frequency", "formula", "z"]);
    for r in rows {
        t.rows.push(vec![
            r.m.to_string(),
            r.n.to_string(),
            r.trials.to_string(),
            num(r.frequency()),
            num(r.formula),
            num(r.z_score()),
        ]);
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportRow {
    pub n: usize,
    pub m: usize,
    /// Null vectors examined across all matrix draws.
    pub samples: usize,
    /// Smallest positive / negative support seen; `None` when every draw had a trivial null space.
    pub min_positive: Option<usize>,
    pub min_negative: Option<usize>,
}

impl SupportRow {
    pub fn is_vacuous(&self) -> bool {
        self.min_positive.is_none()
    }
}

/// Support sizes of random null-space vectors of Bernoulli matrices, one row per row count
/// `m` in the grid. Entries count as nonzero above `1e−9 ‖w‖_∞`.
pub fn run_nullspace_support(cfg: &ExperimentConfig) -> Result<Vec<SupportRow>> {
    require_kind(cfg, ExperimentKind::NullspaceSupport)?;
    let root = Seed::new(cfg.seed, SUPPORT_TAG);
    let mut rows = Vec::new();
    for m in cfg.grid.values() {
        let draws: Vec<Result<Option<(usize, usize, usize)>>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = root.substream(&[m as u64, t as u64]);
                let a = bernoulli01(m, cfg.n, cfg.density, cfg.ones_row, seed.substream(&[0]))?;
                let sampler = match NullSpaceSampler::new(&a) {
                    Ok(s) => s,
                    Err(Error::EmptyNullSpace) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let mut rng = seed.substream(&[1]).rng();
                let (mut pos, mut neg) = (usize::MAX, usize::MAX);
                for _ in 0..cfg.samples {
                    let w = sampler.sample(&mut rng)?;
                    let thr = 1e-9 * crate::linalg::norm_inf(&w);
                    pos = pos.min(w.iter().filter(|&&v| v > thr).count());
                    neg = neg.min(w.iter().filter(|&&v| v < -thr).count());
                }
                Ok(Some((cfg.samples, pos, neg)))
            })
            .collect();
        let mut row = SupportRow { n: cfg.n, m, samples: 0, min_positive: None, min_negative: None };
        for d in draws {
            if let Some((s, p, q)) = d? {
                row.samples += s;
                row.min_positive = Some(row.min_positive.map_or(p, |x| x.min(p)));
                row.min_negative = Some(row.min_negative.map_or(q, |x| x.min(q)));
            }
        }
        if row.is_vacuous() {
            eprintln!("nullspace-support: m = {m}, n = {}: trivial null space in every draw", cfg.n);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn support_table(cfg: &ExperimentConfig, rows: &[SupportRow]) -> CsvTable {
    let mut t = CsvTable::new(
        cfg.to_record(),
        &["n", "m", "samples", "min_positive", "min_negative", "min_positive_fraction", "min_negative_fraction", "vacuous"],
    );
    for r in rows {
        let frac = |v: Option<usize>| v.map_or(f64::NAN, |c| c as f64 / r.n as f64);
        t.rows.push(vec![
            r.n.to_string(),
            r.m.to_string(),
            r.samples.to_string(),
            r.min_positive.map_or("nan".into(), |v| v.to_string()),
            r.min_negative.map_or("nan".into(), |v| v.to_string()),
            num(frac(r.min_positive)),
            num(frac(r.min_negative)),
            u8::from(r.is_vacuous()).to_string(),
        ]);
    }
    t
}

/// Runs the configured experiment and returns its CSV table.
pub fn run(cfg: &ExperimentConfig) -> Result<CsvTable> {
    Ok(match cfg.kind {
        ExperimentKind::VectorPhase => run_vector_phase(cfg)?.table(),
        ExperimentKind::MatrixPhase => run_matrix_phase(cfg)?.table(),
        ExperimentKind::WendelMc => wendel_table(cfg, &run_wendel_mc(cfg)?),
        ExperimentKind::NullspaceSupport => support_table(cfg, &run_nullspace_support(cfg)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_interpolates() {
        let pts = [(1.0, 1.0), (2.0, 0.8), (3.0, 0.2), (4.0, 0.0)];
        assert!((crossing(&pts, 0.5).unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(crossing(&pts, 1.5), Some(1.0));
        assert_eq!(crossing(&pts, -0.1), None);
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let mut t = CsvTable::new(Record::new().with("kind", "vector-phase"), &["k", "x"]);
        t.rows.push(vec!["1".into(), "0.5".into()]);
        let back = CsvTable::parse(&t.to_csv()).unwrap();
        assert_eq!(back, t);
        assert!(matches!(CsvTable::parse("# kind=x\nk,x\n1,2\n3\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(CsvTable::parse("k,x\n1,abc\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn small_vector_sweep_shape_and_determinism() {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::VectorPhase, Profile::Desk);
        cfg.n = 30;
        cfg.m = 15;
        cfg.grid = Grid::new(1, 6, 1).unwrap();
        cfg.trials = 4;
        cfg.exact = true;
        let a = run(&cfg).unwrap();
        assert_eq!(a.rows.len(), 6);
        assert_eq!(a.to_csv(), run(&cfg).unwrap().to_csv());
        let mut other = cfg.clone();
        other.kind = ExperimentKind::MatrixPhase;
        assert!(run_vector_phase(&other).is_err());
    }

    #[test]
    fn wendel_degenerate_pair() {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::WendelMc, Profile::Desk);
        cfg.pairs = vec![(2, 2)];
        cfg.trials = 200;
        let rows = run_wendel_mc(&cfg).unwrap();
        assert_eq!(rows[0].hits, 0);
        assert_eq!(rows[0].z_score(), 0.0);
    }

    #[test]
    fn support_sweep_flags_vacuous_rows() {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::NullspaceSupport, Profile::Desk);
        cfg.n = 10;
        cfg.grid = Grid::new(12, 12, 1).unwrap();
        cfg.trials = 2;
        cfg.samples = 5;
        cfg.ones_row = false;
        let rows = run_nullspace_support(&cfg).unwrap();
        assert!(rows[0].is_vacuous());
    }
}
