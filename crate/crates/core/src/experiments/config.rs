use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::records::Record;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    VectorPhase,
    MatrixPhase,
    WendelMc,
    NullspaceSupport,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 4] = [Self::VectorPhase, Self::MatrixPhase, Self::WendelMc, Self::NullspaceSupport];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::VectorPhase => "vector-phase",
            Self::MatrixPhase => "matrix-phase",
            Self::WendelMc => "wendel-mc",
            Self::NullspaceSupport => "nullspace-support",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind `{s}`")))
    }
}

/// Default sizes: `desk` runs in minutes on one core, `paper` matches the published scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Desk,
    Paper,
}

impl Profile {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Desk => "desk",
            Self::Paper => "paper",
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Self::Desk),
            "paper" => Ok(Self::Paper),
            _ => Err(Error::Config(format!("unknown profile `{s}` (expected desk or paper)"))),
        }
    }
}

/// Inclusive integer range `lo:hi[:step]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub lo: usize,
    pub hi: usize,
    pub step: usize,
}

impl Grid {
    pub fn new(lo: usize, hi: usize, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::Config("grid step must be positive".into()));
        }
        if lo > hi {
            return Err(Error::Config(format!("empty grid {lo}:{hi}")));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn values(&self) -> Vec<usize> {
        (self.lo..=self.hi).step_by(self.step).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad grid bound `{p}` in `{s}`")));
        match parts.as_slice() {
            [lo, hi] => Self::new(num(lo)?, num(hi)?, 1),
            [lo, hi, step] => Self::new(num(lo)?, num(hi)?, num(step)?),
            _ => Err(Error::Config(format!("grid `{s}` is not lo:hi[:step]"))),
        }
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|p| {
            let (m, n) = p
                .trim()
                .split_once('x')
                .ok_or_else(|| Error::Config(format!("pair `{p}` is not MxN")))?;
            let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad pair `{p}`")));
            Ok((parse(m)?, parse(n)?))
        })
        .collect()
}

fn format_pairs(pairs: &[(usize, usize)]) -> String {
    pairs.iter().map(|(m, n)| format!("{m}x{n}")).collect::<Vec<_>>().join(",")
}

/// One experiment run. Build with [`ExperimentConfig::defaults`] and override fields, or
/// parse a flat `key=value` file with [`ExperimentConfig::from_record`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub profile: Profile,
    /// Columns (vector and support experiments) or matrix dimension (matrix experiment).
    pub n: usize,
    /// Rows or number of measurement matrices.
    pub m: usize,
    /// Bernoulli density of the 0-1 ensembles.
    pub density: f64,
    pub ones_row: bool,
    /// Sparsity (vector), rank (matrix) or row count (support) values.
    pub grid: Grid,
    pub trials: usize,
    pub probes: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Also run the deterministic singleton check when the instance is small enough.
    pub exact: bool,
    /// `(m, n)` pairs of the Wendel experiment.
    pub pairs: Vec<(usize, usize)>,
    /// Null-space samples per matrix draw in the support experiment.
    pub samples: usize,
    /// Fraction of trials allowed to end in a solver error before the run is aborted.
    pub failure_budget: f64,
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind, profile: Profile) -> Self {
        let base = Self {
            kind,
            profile,
            n: 200,
            m: 50,
            density: 0.2,
            ones_row: false,
            grid: Grid { lo: 1, hi: 40, step: 1 },
            trials: 200,
            probes: crate::vector::DEFAULT_PROBES,
            seed: 2024,
            out: None,
            exact: false,
            pairs: Vec::new(),
            samples: 1000,
            failure_budget: 0.05,
        };
        match (kind, profile) {
            (ExperimentKind::VectorPhase, _) => base,
            (ExperimentKind::MatrixPhase, Profile::Desk) => {
                Self { n: 16, m: 83, grid: Grid { lo: 0, hi: 6, step: 1 }, trials: 50, ..base }
            }
            (ExperimentKind::MatrixPhase, Profile::Paper) => {
                Self { n: 40, m: 500, grid: Grid { lo: 0, hi: 16, step: 1 }, trials: 200, ..base }
            }
            (ExperimentKind::WendelMc, _) => Self {
                n: 2,
                m: 1,
                grid: Grid { lo: 2, hi: 2, step: 1 },
                trials: 10_000,
                pairs: vec![(1, 2), (2, 4), (4, 10), (5, 11)],
                ..base
            },
            (ExperimentKind::NullspaceSupport, _) => Self {
                n: 100,
                m: 50,
                density: 0.5,
                ones_row: true,
                grid: Grid { lo: 50, hi: 50, step: 1 },
                trials: 10,
                ..base
            },
        }
    }

    /// Builds a configuration from `key=value` fields. `kind` is required; `profile` selects
    /// the defaults that the remaining keys override.
    pub fn from_record(rec: &Record) -> Result<Self> {
        let kind: ExperimentKind = rec.get("kind").ok_or_else(|| Error::Config("missing `kind`".into()))?.parse()?;
        let profile = match rec.get("profile") {
            Some(p) => p.parse()?,
            None => Profile::Desk,
        };
        let mut cfg = Self::defaults(kind, profile);
        cfg.apply(rec)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Overrides fields present in `rec`. Unknown keys are rejected.
    pub fn apply(&mut self, rec: &Record) -> Result<()> {
        fn parsed<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("cannot parse `{v}` for `{key}`")))
        }
        for (key, v) in rec.fields() {
            match key.as_str() {
                "kind" | "profile" => {}
                "n" => self.n = parsed(key, v)?,
                "m" => self.m = parsed(key, v)?,
                "density" => self.density = parsed(key, v)?,
                "ones_row" => self.ones_row = parsed(key, v)?,
                "grid" => self.grid = v.parse()?,
                "trials" => self.trials = parsed(key, v)?,
                "probes" => self.probes = parsed(key, v)?,
                "seed" => self.seed = parsed(key, v)?,
                "out" => self.out = Some(PathBuf::from(v)),
                "exact" => self.exact = parsed(key, v)?,
                "pairs" => self.pairs = parse_pairs(v)?,
                "samples" => self.samples = parsed(key, v)?,
                "failure_budget" => self.failure_budget = parsed(key, v)?,
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.failure_budget) {
            return bad(format!("failure_budget {} must lie in [0, 1]", self.failure_budget));
        }
        match self.kind {
            ExperimentKind::VectorPhase | ExperimentKind::NullspaceSupport => {
                if !(self.density > 0.0 && self.density < 1.0) {
                    return bad(format!("density {} must lie in (0, 1)", self.density));
                }
                if self.n == 0 {
                    return bad("n must be positive".into());
                }
            }
            ExperimentKind::MatrixPhase => {
                if self.n == 0 {
                    return bad("n must be positive".into());
                }
            }
            ExperimentKind::WendelMc => {
                if self.pairs.is_empty() {
                    return bad("wendel-mc needs at least one m x n pair".into());
                }
                if let Some(p) = self.pairs.iter().find(|(m, n)| *m == 0 || *n == 0) {
                    return bad(format!("pair {}x{} has a zero dimension", p.0, p.1));
                }
            }
        }
        match self.kind {
            ExperimentKind::VectorPhase => {
                if self.m == 0 {
                    return bad("m must be positive".into());
                }
                if self.grid.hi > self.n {
                    return bad(format!("sparsity {} exceeds n = {}", self.grid.hi, self.n));
                }
                if self.probes == 0 {
                    return bad("probes must be at least 1".into());
                }
            }
            ExperimentKind::MatrixPhase => {
                if self.grid.hi > self.n {
                    return bad(format!("rank {} exceeds n = {}", self.grid.hi, self.n));
                }
                if self.probes == 0 {
                    return bad("probes must be at least 1".into());
                }
            }
            ExperimentKind::NullspaceSupport => {
                if self.grid.lo == 0 {
                    return bad("row counts must be positive".into());
                }
                if self.samples == 0 {
                    return bad("samples must be at least 1".into());
                }
            }
            ExperimentKind::WendelMc => {}
        }
        Ok(())
    }

    /// The fields that shape the output, as written into CSV headers.
    pub fn to_record(&self) -> Record {
        let mut rec = Record::new().with("kind", self.kind).with("profile", self.profile.as_str());
        match self.kind {
            ExperimentKind::WendelMc => {
                rec.push("pairs", format_pairs(&self.pairs));
            }
            _ => {
                rec.push("n", self.n);
                if self.kind != ExperimentKind::NullspaceSupport {
                    rec.push("m", self.m);
                }
                rec.push("grid", self.grid);
            }
        }
        match self.kind {
            ExperimentKind::VectorPhase | ExperimentKind::NullspaceSupport => {
                rec.push("density", self.density);
                rec.push("ones_row", self.ones_row);
            }
            _ => {}
        }
        rec.push("trials", self.trials);
        match self.kind {
            ExperimentKind::VectorPhase | ExperimentKind::MatrixPhase => {
                rec.push("probes", self.probes);
                rec.push("exact", self.exact);
            }
            ExperimentKind::NullspaceSupport => rec.push("samples", self.samples),
            ExperimentKind::WendelMc => {}
        }
        rec.push("seed", self.seed);
        rec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!("1:60".parse::<Grid>().unwrap().values().len(), 60);
        assert_eq!("0:6:2".parse::<Grid>().unwrap().values(), vec![0, 2, 4, 6]);
        assert!("5:1".parse::<Grid>().is_err());
        assert!("1:4:0".parse::<Grid>().is_err());
        assert!("1".parse::<Grid>().is_err());
    }

    #[test]
    fn record_overrides_profile_defaults() {
        let rec = Record::parse("kind=matrix-phase\nprofile=paper\nm=600\n").unwrap();
        let cfg = ExperimentConfig::from_record(&rec).unwrap();
        assert_eq!((cfg.n, cfg.m, cfg.trials), (40, 600, 200));
        assert!(ExperimentConfig::from_record(&Record::parse("kind=vector-phase\nbogus=1").unwrap()).is_err());
        assert!(ExperimentConfig::from_record(&Record::parse("kind=vector-phase\ntrials=0").unwrap()).is_err());
        assert!(ExperimentConfig::from_record(&Record::parse("n=3").unwrap()).is_err());
    }

    #[test]
    fn header_roundtrip() {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::WendelMc, Profile::Desk);
        cfg.pairs = vec![(3, 7)];
        let back = ExperimentConfig::from_record(&cfg.to_record()).unwrap();
        assert_eq!(back.pairs, vec![(3, 7)]);
    }
}
