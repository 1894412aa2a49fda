//! Bipartite-graph view of 0-1 measurement matrices.
//!
//! Column `j` of an `m × n` 0-1 matrix is left node `j`; its ones mark the right neighbours.
//! A graph is an `(α, δ)` expander when every left set `S` with `|S| ≤ αn` satisfies
//! `|Γ(S)| ≥ δ|E(S)|`, where `Γ(S)` is the neighbourhood and `E(S)` the edge set of `S`.

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::ensembles::Seed;
use crate::error::{contract, Error, Result};
use crate::linalg::DenseMatrix;
use crate::records::{join_indices, Record};
use crate::subsets::{binomial, guard};

/// `(√5 − 1)/2`: the product `δρ` must exceed this for the sparsity threshold to apply.
pub const GOLDEN_THRESHOLD: f64 = 0.618_033_988_749_894_9;

/// Minimum and maximum left degree and their ratio `ρ = d_l / d_u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeProfile {
    pub d_l: usize,
    pub d_u: usize,
    pub rho: f64,
}

pub fn degree_profile(a: &DenseMatrix) -> Result<DegreeProfile> {
    if !a.is_binary() {
        return Err(contract("adjacency matrix must be 0-1"));
    }
    if a.cols() == 0 {
        return Err(Error::DegenerateGraph("graph has no left nodes".into()));
    }
    let degrees = left_degrees(a);
    if let Some(j) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::DegenerateGraph(format!("left node {j} has no neighbours")));
    }
    let d_l = *degrees.iter().min().unwrap();
    let d_u = *degrees.iter().max().unwrap();
    Ok(DegreeProfile { d_l, d_u, rho: d_l as f64 / d_u as f64 })
}

fn left_degrees(a: &DenseMatrix) -> Vec<usize> {
    (0..a.cols()).map(|j| (0..a.rows()).filter(|&i| a[(i, j)] != 0.0).count()).collect()
}

/// Neighbourhoods as bitsets over the right nodes, for fast unions.
struct Neighbourhoods {
    words: usize,
    bits: Vec<u64>,
    degrees: Vec<usize>,
}

impl Neighbourhoods {
    fn new(a: &DenseMatrix) -> Self {
        let words = a.rows().div_ceil(64).max(1);
        let mut bits = vec![0u64; words * a.cols()];
        for j in 0..a.cols() {
            for i in 0..a.rows() {
                if a[(i, j)] != 0.0 {
                    bits[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Self { words, bits, degrees: left_degrees(a) }
    }

    /// `(|Γ(S)|, |E(S)|)`
    fn expansion(&self, set: &[usize], scratch: &mut [u64]) -> (usize, usize) {
        scratch.fill(0);
        let mut edges = 0;
        for &j in set {
            edges += self.degrees[j];
            for (s, b) in scratch.iter_mut().zip(&self.bits[j * self.words..(j + 1) * self.words]) {
                *s |= b;
            }
        }
        (scratch.iter().map(|w| w.count_ones() as usize).sum(), edges)
    }

    fn violates(&self, set: &[usize], delta: f64, scratch: &mut [u64]) -> bool {
        let (gamma, edges) = self.expansion(set, scratch);
        (gamma as f64) < delta * edges as f64
    }
}

/// Largest left-set size covered by `α`: `⌊αn⌋`, guarded against round-off just below an integer.
pub fn max_set_size(alpha: f64, n: usize) -> usize {
    ((alpha * n as f64) + 1e-9).floor().min(n as f64) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    Exhaustive,
    /// Uniform random subsets: a uniform size in `1..=⌊αn⌋`, then a uniform subset of that size.
    Sampled { count: usize, seed: Seed },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionVerdict {
    /// Every set up to the size limit expands (exhaustive mode only).
    Certified,
    Violated { set: Vec<usize>, neighbours: usize, edges: usize },
    /// Sampled mode found nothing; this is not a certificate.
    NoViolationFound { samples: usize },
}

impl ExpansionVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified)
    }

    pub fn violating_set(&self) -> Option<&[usize]> {
        match self {
            Self::Violated { set, .. } => Some(set),
            _ => None,
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(contract(format!("{name} = {v} must lie in (0, 1]")));
    }
    Ok(())
}

/// Checks `|Γ(S)| ≥ δ|E(S)|` for left sets with `|S| ≤ ⌊αn⌋`.
///
/// Exhaustive mode walks sizes in increasing order and returns the first violation in that
/// order; it is guarded at [`crate::subsets::SUBSET_LIMIT`] subsets in total.
pub fn verify_expansion(a: &DenseMatrix, alpha: f64, delta: f64, mode: ExpansionMode) -> Result<ExpansionVerdict> {
    check_unit("alpha", alpha)?;
    check_unit("delta", delta)?;
    degree_profile(a)?;
    let n = a.cols();
    let s_max = max_set_size(alpha, n);
    let graph = Neighbourhoods::new(a);
    let witness = |set: Vec<usize>, scratch: &mut [u64]| {
        let (neighbours, edges) = graph.expansion(&set, scratch);
        ExpansionVerdict::Violated { set, neighbours, edges }
    };
    match mode {
        ExpansionMode::Exhaustive => {
            let total: u128 = (1..=s_max).map(|s| binomial(n, s)).fold(0u128, u128::saturating_add);
            guard(total)?;
            let found = (1..=s_max).into_par_iter().find_map_first(|s| {
                let mut scratch = vec![0u64; graph.words];
                (0..n).combinations(s).find(|set| graph.violates(set, delta, &mut scratch))
            });
            Ok(match found {
                Some(set) => witness(set, &mut vec![0u64; graph.words]),
                None => ExpansionVerdict::Certified,
            })
        }
        ExpansionMode::Sampled { count, seed } => {
            let mut scratch = vec![0u64; graph.words];
            if s_max == 0 {
                return Ok(ExpansionVerdict::NoViolationFound { samples: 0 });
            }
            let mut rng = seed.rng();
            for _ in 0..count {
                let s = rng.random_range(1..=s_max);
                let mut set = index::sample(&mut rng, n, s).into_vec();
                set.sort_unstable();
                if graph.violates(&set, delta, &mut scratch) {
                    return Ok(witness(set, &mut scratch));
                }
            }
            Ok(ExpansionVerdict::NoViolationFound { samples: count })
        }
    }
}

/// The largest `δ` for which exhaustive verification at `α` succeeds:
/// `min |Γ(S)| / |E(S)|` over nonempty `S` with `|S| ≤ ⌊αn⌋` (1 when no such set exists).
pub fn best_delta(a: &DenseMatrix, alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    degree_profile(a)?;
    let n = a.cols();
    let s_max = max_set_size(alpha, n);
    let total: u128 = (1..=s_max).map(|s| binomial(n, s)).fold(0u128, u128::saturating_add);
    guard(total)?;
    let graph = Neighbourhoods::new(a);
    let best = (1..=s_max)
        .into_par_iter()
        .map(|s| {
            let mut scratch = vec![0u64; graph.words];
            (0..n)
                .combinations(s)
                .map(|set| {
                    let (g, e) = graph.expansion(&set, &mut scratch);
                    g as f64 / e as f64
                })
                .fold(1.0_f64, f64::min)
        })
        .reduce(|| 1.0, f64::min);
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    /// Every nonnegative vector with at most this many nonzeros is the unique nonnegative solution.
    Sparsity(usize),
    /// `δρ` does not exceed [`GOLDEN_THRESHOLD`].
    ConditionNotMet { product: f64 },
}

impl Threshold {
    pub fn sparsity(self) -> Option<usize> {
        match self {
            Self::Sparsity(k) => Some(k),
            Self::ConditionNotMet { .. } => None,
        }
    }
}

/// `k = ⌊αn / (1 + δρ)⌋` when `δρ > (√5 − 1)/2`.
pub fn uniqueness_threshold(alpha: f64, delta: f64, rho: f64, n: usize) -> Result<Threshold> {
    check_unit("alpha", alpha)?;
    check_unit("delta", delta)?;
    check_unit("rho", rho)?;
    if n == 0 {
        return Err(contract("n must be at least 1"));
    }
    let product = delta * rho;
    if product <= GOLDEN_THRESHOLD {
        return Ok(Threshold::ConditionNotMet { product });
    }
    let k = (alpha * n as f64 / (1.0 + product) + 1e-9).floor() as usize;
    Ok(Threshold::Sparsity(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpanderReport {
    pub d_l: usize,
    pub d_u: usize,
    pub rho: f64,
    pub alpha: f64,
    pub delta: f64,
    pub certified: bool,
    pub violating_set: Option<Vec<usize>>,
    pub threshold_k: Option<usize>,
}

impl ExpanderReport {
    /// Degree profile, expansion check at `(α, δ)` and the resulting threshold.
    pub fn build(a: &DenseMatrix, alpha: f64, delta: f64, mode: ExpansionMode) -> Result<Self> {
        let profile = degree_profile(a)?;
        let verdict = verify_expansion(a, alpha, delta, mode)?;
        let threshold = uniqueness_threshold(alpha, delta, profile.rho, a.cols())?;
        Ok(Self {
            d_l: profile.d_l,
            d_u: profile.d_u,
            rho: profile.rho,
            alpha,
            delta,
            certified: verdict.is_certified(),
            violating_set: verdict.violating_set().map(<[usize]>::to_vec),
            threshold_k: threshold.sparsity(),
        })
    }

    pub fn to_record(&self) -> Record {
        let mut rec = Record::new()
            .with("d_l", self.d_l)
            .with("d_u", self.d_u)
            .with("rho", self.rho)
            .with("alpha", self.alpha)
            .with("delta", self.delta)
            .with("certified", self.certified);
        if let Some(s) = &self.violating_set {
            rec.push("violating_set", join_indices(s));
        }
        if let Some(k) = self.threshold_k {
            rec.push("threshold_k", k);
        }
        rec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::random_bipartite;

    fn routing_example() -> DenseMatrix {
        DenseMatrix::from_rows(&[
            vec![1.0, 1.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_profile(&routing_example()).unwrap(), DegreeProfile { d_l: 1, d_u: 2, rho: 0.5 });
        let ones = DenseMatrix::from_fn(3, 5, |_, _| 1.0);
        assert_eq!(degree_profile(&ones).unwrap(), DegreeProfile { d_l: 3, d_u: 3, rho: 1.0 });
        assert_eq!(degree_profile(&DenseMatrix::identity(4)).unwrap().rho, 1.0);
        let zero_col = DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
        assert!(matches!(degree_profile(&zero_col), Err(Error::DegenerateGraph(_))));
        let non_binary = DenseMatrix::from_rows(&[vec![2.0]]).unwrap();
        assert!(degree_profile(&non_binary).is_err());
    }

    #[test]
    fn expansion_examples() {
        let id = DenseMatrix::identity(6);
        for alpha in [0.2, 0.5, 1.0] {
            assert!(verify_expansion(&id, alpha, 1.0, ExpansionMode::Exhaustive).unwrap().is_certified());
        }
        let shared = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let v = verify_expansion(&shared, 1.0, 1.0, ExpansionMode::Exhaustive).unwrap();
        assert_eq!(v, ExpansionVerdict::Violated { set: vec![0, 1], neighbours: 1, edges: 2 });
        let sampled = ExpansionMode::Sampled { count: 100, seed: Seed::new(1, 0) };
        assert!(matches!(
            verify_expansion(&id, 1.0, 1.0, sampled).unwrap(),
            ExpansionVerdict::NoViolationFound { samples: 100 }
        ));
        assert!(verify_expansion(&shared, 1.0, 1.0, sampled).unwrap().violating_set().is_some());
    }

    #[test]
    fn best_delta_is_the_certification_boundary() {
        let a = random_bipartite(8, 6, 2, Seed::new(11, 0)).unwrap();
        let d = best_delta(&a, 0.25).unwrap();
        assert!(d > 0.0);
        assert!(verify_expansion(&a, 0.25, d, ExpansionMode::Exhaustive).unwrap().is_certified());
        if d < 1.0 {
            let above = (d + 1e-6).min(1.0);
            assert!(!verify_expansion(&a, 0.25, above, ExpansionMode::Exhaustive).unwrap().is_certified());
        }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(uniqueness_threshold(0.1, 0.9, 1.0, 100).unwrap(), Threshold::Sparsity(5));
        assert!(matches!(uniqueness_threshold(0.5, 0.5, 1.0, 100).unwrap(), Threshold::ConditionNotMet { .. }));
        assert!(matches!(uniqueness_threshold(0.2, 0.7, 0.5, 50).unwrap(), Threshold::ConditionNotMet { .. }));
        assert!(uniqueness_threshold(0.0, 0.9, 1.0, 10).is_err());
    }

    #[test]
    fn report_fields() {
        let r = ExpanderReport::build(&DenseMatrix::identity(10), 0.3, 1.0, ExpansionMode::Exhaustive).unwrap();
        assert!(r.certified && r.violating_set.is_none());
        assert_eq!(r.threshold_k, Some(1));
        assert_eq!(Record::parse(&r.to_record().to_string()).unwrap().get("threshold_k"), Some("1"));
    }
}
