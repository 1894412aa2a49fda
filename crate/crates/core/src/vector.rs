//! Uniqueness of nonnegative solutions: is `{x : A x = A x₀, x ≥ 0}` a single point?
//!
//! Exact LP certificates ([`exact_singleton`], [`mplus_membership`]), the randomized min/max
//! probe ([`probe_singleton`]), the three equivalent k-sparse characterizations
//! (all-supports singleton, [`null_space_support_property`], [`neighborliness_check`]),
//! nonnegative L1 recovery, the row-count bound, Wendel's formula and a brute-force RIP
//! estimate.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::ensembles::{normal_vec, Seed};
use crate::error::{contract, Error, Result};
use crate::linalg::{dot, numerical_rank, null_space_basis, sym_eigs, DenseMatrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::lp::{check_feasible, LpOutcome, Sense, SignConstraint, SimplexOptions, StandardForm};
use crate::records::{join_indices, join_numbers, Record};
use crate::subsets::{binomial, guard};

/// Default number of random objectives per probe.
pub const DEFAULT_PROBES: usize = 5;
/// Relative spread `|max − min| / (1 + |min|)` above which an objective is not constant.
pub const SPREAD_TOL: f64 = 1e-6;
/// Minimum ∞-norm distance between a refuting witness and `x₀`.
pub const WITNESS_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    CertifiedSingleton,
    Refuted,
    ProbableSingleton,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CertifiedSingleton => "certified-singleton",
            Self::Refuted => "refuted",
            Self::ProbableSingleton => "probable-singleton",
        }
    }

    /// Certified or probable singleton.
    pub fn is_singleton(self) -> bool {
        !matches!(self, Self::Refuted)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingletonVerdict {
    pub kind: VerdictKind,
    /// A second feasible point, present exactly when refuted.
    pub witness: Option<Vec<f64>>,
    /// Probes (or LP objectives, for the exact check) evaluated.
    pub probes_used: usize,
    /// Largest objective spread observed.
    pub gap: f64,
}

impl SingletonVerdict {
    pub fn to_record(&self) -> Record {
        let mut rec = Record::new()
            .with("kind", self.kind.as_str())
            .with("probes_used", self.probes_used)
            .with("gap", self.gap);
        if let Some(w) = &self.witness {
            rec.push("witness", join_numbers(w));
        }
        rec
    }
}

/// Whether the row span of `A` meets the positive orthant, with the certificate for either answer.
#[derive(Clone, Debug, PartialEq)]
pub enum MPlusCertificate {
    /// `hᵀA ≥ 1` entrywise.
    Member { h: Vec<f64> },
    /// `λ ≥ 0`, `1ᵀλ = 1`, `Aλ = 0`: the origin lies in the convex hull of the columns.
    NonMember { lambda: Vec<f64> },
}

impl MPlusCertificate {
    pub fn is_member(&self) -> bool {
        matches!(self, Self::Member { .. })
    }

    pub fn to_record(&self) -> Record {
        match self {
            Self::Member { h } => Record::new().with("member", true).with("h", join_numbers(h)),
            Self::NonMember { lambda } => Record::new().with("member", false).with("lambda", join_numbers(lambda)),
        }
    }
}

fn check_nonempty(a: &DenseMatrix) -> Result<()> {
    if a.rows() == 0 || a.cols() == 0 || a.max_abs() == 0.0 {
        return Err(contract("matrix must be nonempty and not identically zero"));
    }
    Ok(())
}

/// Decides `A ∈ M⁺` with the margin LP `max t  s.t. hᵀa_i ≥ t, t ≤ 1` (h free).
///
/// The optimum is 1 for members (with `h` scaled so that `min hᵀa_i ≥ 1`) and 0 otherwise; for
/// non-members a convex combination of the columns summing to zero is produced.
pub fn mplus_membership(a: &DenseMatrix) -> Result<MPlusCertificate> {
    check_nonempty(a)?;
    let (m, n) = a.shape();
    // variables: h⁺ (m), h⁻ (m), t⁺, t⁻, s (n), r
    let cols = 2 * m + 2 + n + 1;
    let mut cons = DenseMatrix::zeros(n + 1, cols);
    let mut rhs = vec![0.0; n + 1];
    for i in 0..n {
        // hᵀa_i − t − s_i = 0
        for k in 0..m {
            cons[(i, k)] = a[(k, i)];
            cons[(i, m + k)] = -a[(k, i)];
        }
        cons[(i, 2 * m)] = -1.0;
        cons[(i, 2 * m + 1)] = 1.0;
        cons[(i, 2 * m + 2 + i)] = -1.0;
    }
    // t + r = 1
    cons[(n, 2 * m)] = 1.0;
    cons[(n, 2 * m + 1)] = -1.0;
    cons[(n, cols - 1)] = 1.0;
    rhs[n] = 1.0;
    let mut obj = vec![0.0; cols];
    obj[2 * m] = 1.0;
    obj[2 * m + 1] = -1.0;
    let mut sf = StandardForm::new(&cons, &rhs, SimplexOptions::default())?
        .ok_or(Error::Numerical { what: "M+ margin LP", residual: f64::INFINITY })?;
    let out = sf.optimize(&obj, Sense::Maximize)?;
    let LpOutcome::Optimal { x, value } = out else {
        return Err(Error::Numerical { what: "M+ margin LP", residual: f64::INFINITY });
    };
    if value > 0.5 {
        let h: Vec<f64> = (0..m).map(|k| (x[k] - x[m + k]) / value).collect();
        return Ok(MPlusCertificate::Member { h });
    }
    // 0 ∈ conv(columns): λ ≥ 0, Aλ = 0, 1ᵀλ = 1
    let mut sys = a.clone();
    sys.push_row(&vec![1.0; n]);
    let mut b = vec![0.0; m];
    b.push(1.0);
    let lambda = check_feasible(&sys, &b, &vec![SignConstraint::Nonneg; n])?
        .ok_or(Error::Numerical { what: "convex-hull certificate", residual: value })?;
    Ok(MPlusCertificate::NonMember { lambda })
}

fn feasible_region(a: &DenseMatrix, x0: &[f64]) -> Result<StandardForm> {
    if x0.len() != a.cols() {
        return Err(Error::Dimension(format!("x0 has {} entries for {} columns", x0.len(), a.cols())));
    }
    if x0.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(contract("x0 must be finite and nonnegative"));
    }
    let b = a.matvec(x0);
    StandardForm::new(a, &b, SimplexOptions::default())?
        .ok_or(Error::Numerical { what: "phase one at a known feasible point", residual: f64::INFINITY })
}

fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// A feasible point on the ray, far enough from `x0` to count as a witness.
fn ray_witness(point: &[f64], ray: &[f64], x0: &[f64]) -> Vec<f64> {
    let mut t = 1.0;
    loop {
        let w: Vec<f64> = point.iter().zip(ray).map(|(p, r)| p + t * r).collect();
        if dist_inf(&w, x0) >= WITNESS_TOL || t > 1e6 {
            return w;
        }
        t *= 10.0;
    }
}

enum Extremes {
    Spread { lo: Vec<f64>, hi: Vec<f64>, spread: f64 },
    Unbounded(Vec<f64>),
}

fn extremes(sf: &mut StandardForm, d: &[f64], x0: &[f64]) -> Result<Extremes> {
    let lo = match sf.optimize(d, Sense::Minimize)? {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Unbounded { point, ray } => return Ok(Extremes::Unbounded(ray_witness(&point, &ray, x0))),
        LpOutcome::Infeasible => unreachable!("reoptimization keeps a feasible basis"),
    };
    let hi = match sf.optimize(d, Sense::Maximize)? {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Unbounded { point, ray } => return Ok(Extremes::Unbounded(ray_witness(&point, &ray, x0))),
        LpOutcome::Infeasible => unreachable!("reoptimization keeps a feasible basis"),
    };
    let (vlo, vhi) = (dot(d, &lo), dot(d, &hi));
    let spread = (vhi - vlo) / (1.0 + vlo.abs());
    Ok(Extremes::Spread { lo, hi, spread })
}

/// The optimizer farther from `x0`, when it is a genuine second point.
fn distinct_witness(lo: Vec<f64>, hi: Vec<f64>, x0: &[f64]) -> Option<Vec<f64>> {
    let (dlo, dhi) = (dist_inf(&lo, x0), dist_inf(&hi, x0));
    let (w, d) = if dlo >= dhi { (lo, dlo) } else { (hi, dhi) };
    (d >= WITNESS_TOL).then_some(w)
}

/// Randomized singleton test: minimize and maximize `dᵀx` over the feasible set for `probes`
/// Gaussian objectives `d`. A nonzero spread refutes; constant objectives throughout give a
/// probable singleton (a non-singleton set survives one probe with probability zero).
pub fn probe_singleton(a: &DenseMatrix, x0: &[f64], probes: usize, seed: Seed) -> Result<SingletonVerdict> {
    let mut sf = feasible_region(a, x0)?;
    let mut rng = seed.rng();
    let mut gap = 0.0_f64;
    for p in 0..probes {
        let d = normal_vec(&mut rng, a.cols());
        match extremes(&mut sf, &d, x0)? {
            Extremes::Unbounded(w) => {
                return Ok(SingletonVerdict { kind: VerdictKind::Refuted, witness: Some(w), probes_used: p + 1, gap: f64::INFINITY });
            }
            Extremes::Spread { lo, hi, spread } => {
                gap = gap.max(spread);
                if spread > SPREAD_TOL {
                    if let Some(w) = distinct_witness(lo, hi, x0) {
                        return Ok(SingletonVerdict { kind: VerdictKind::Refuted, witness: Some(w), probes_used: p + 1, gap });
                    }
                }
            }
        }
    }
    Ok(SingletonVerdict { kind: VerdictKind::ProbableSingleton, witness: None, probes_used: probes, gap })
}

/// Deterministic singleton test: minimize and maximize every coordinate (up to `2n` LPs).
///
/// Any optimizer that differs from `x₀` is returned as the witness. If every coordinate is
/// constant on a convex set, the set is a point.
pub fn exact_singleton(a: &DenseMatrix, x0: &[f64]) -> Result<SingletonVerdict> {
    let mut sf = feasible_region(a, x0)?;
    let n = a.cols();
    let mut gap = 0.0_f64;
    let mut used = 0;
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        used += 2;
        match extremes(&mut sf, &e, x0)? {
            Extremes::Unbounded(w) => {
                return Ok(SingletonVerdict { kind: VerdictKind::Refuted, witness: Some(w), probes_used: used, gap: f64::INFINITY });
            }
            Extremes::Spread { lo, hi, spread } => {
                gap = gap.max(spread);
                if let Some(w) = distinct_witness(lo, hi, x0) {
                    return Ok(SingletonVerdict { kind: VerdictKind::Refuted, witness: Some(w), probes_used: used, gap });
                }
            }
        }
    }
    Ok(SingletonVerdict { kind: VerdictKind::CertifiedSingleton, witness: None, probes_used: used, gap })
}

/// Whether every nonnegative `x₀` supported on a `k`-subset is the unique point of its
/// feasible set, checked with [`exact_singleton`] over all supports.
///
/// Uniqueness depends only on the support of `x₀`, and shrinking the support preserves it, so
/// supports of size exactly `min(k, n)` with entries `1` suffice. Returns the first failing
/// support.
pub fn all_k_sparse_singleton(a: &DenseMatrix, k: usize) -> Result<Option<Vec<usize>>> {
    let n = a.cols();
    let k = k.min(n);
    guard(binomial(n, k))?;
    for support in (0..n).combinations(k) {
        let mut x0 = vec![0.0; n];
        for &j in &support {
            x0[j] = 1.0;
        }
        if exact_singleton(a, &x0)?.kind == VerdictKind::Refuted {
            return Ok(Some(support));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub enum L1Recovery {
    Recovered { x: Vec<f64>, value: f64, unique_minimizer: bool },
    Infeasible,
}

/// `min 1ᵀx  s.t. A x = y, x ≥ 0`, plus a uniqueness check of the minimizer: with the optimal
/// value fixed, a random objective is minimized and maximized over the optimal face.
pub fn l1_recover(a: &DenseMatrix, y: &[f64], seed: Seed) -> Result<L1Recovery> {
    let n = a.cols();
    let Some(mut sf) = StandardForm::new(a, y, SimplexOptions::default())? else {
        return Ok(L1Recovery::Infeasible);
    };
    let ones = vec![1.0; n];
    let (x, value) = match sf.optimize(&ones, Sense::Minimize)? {
        LpOutcome::Optimal { x, value } => (x, value),
        // 1ᵀx ≥ 0 on the feasible set, so the minimum is always attained
        other => return Err(Error::Numerical { what: "L1 recovery", residual: matches!(other, LpOutcome::Unbounded { .. }) as u8 as f64 }),
    };
    let mut face = a.clone();
    face.push_row(&ones);
    let mut rhs = y.to_vec();
    rhs.push(value);
    let unique_minimizer = match StandardForm::new(&face, &rhs, SimplexOptions::default())? {
        None => true,
        Some(mut fsf) => {
            let d = normal_vec(&mut seed.rng(), n);
            match extremes(&mut fsf, &d, &x)? {
                Extremes::Unbounded(_) => false,
                Extremes::Spread { spread, .. } => spread <= SPREAD_TOL,
            }
        }
    };
    Ok(L1Recovery::Recovered { x, value, unique_minimizer })
}

/// Outcome of an exhaustive k-sparse property check.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub holds: bool,
    pub violating_set: Option<Vec<usize>>,
    /// For the null-space property: a null vector whose positive support lies in the violating set.
    pub witness: Option<Vec<f64>>,
}

impl PropertyReport {
    fn holds() -> Self {
        Self { holds: true, violating_set: None, witness: None }
    }

    pub fn to_record(&self) -> Record {
        let mut rec = Record::new().with("holds", self.holds);
        if let Some(s) = &self.violating_set {
            rec.push("violating_set", join_indices(s));
        }
        if let Some(w) = &self.witness {
            rec.push("witness", join_numbers(w));
        }
        rec
    }
}

/// Null-space support property: every nonzero `w` with `A w = 0` has positive and negative
/// supports of size at least `k + 1`.
///
/// For each `P` with `|P| = min(k, n)` the check looks for a nonzero null vector that is
/// nonpositive off `P`, i.e. whose positive support lies in `P`: either `A_P` has dependent
/// columns, or `{A w = 0, w_j ≤ 0 (j ∉ P), Σ_{j∉P} w_j = −1}` is feasible. Null vectors come in
/// ± pairs, so the same search covers negative supports.
pub fn null_space_support_property(a: &DenseMatrix, k: usize) -> Result<PropertyReport> {
    let (m, n) = a.shape();
    let k = k.min(n);
    guard(binomial(n, k))?;
    for p in (0..n).combinations(k) {
        let mut inside = vec![false; n];
        for &j in &p {
            inside[j] = true;
        }
        let sub = a.select_columns(&p);
        if !p.is_empty() && numerical_rank(&sub) < p.len() {
            let z = null_space_basis(&sub, DEFAULT_RANK_TOL);
            let mut w = vec![0.0; n];
            for (idx, &j) in p.iter().enumerate() {
                w[j] = z[(idx, 0)];
            }
            return Ok(PropertyReport { holds: false, violating_set: Some(p), witness: Some(w) });
        }
        if k == n {
            continue;
        }
        let mut sys = a.clone();
        let norm_row: Vec<f64> = (0..n).map(|j| if inside[j] { 0.0 } else { 1.0 }).collect();
        sys.push_row(&norm_row);
        let mut b = vec![0.0; m];
        b.push(-1.0);
        let signs: Vec<SignConstraint> =
            (0..n).map(|j| if inside[j] { SignConstraint::Free } else { SignConstraint::Nonpos }).collect();
        if let Some(w) = check_feasible(&sys, &b, &signs)? {
            return Ok(PropertyReport { holds: false, violating_set: Some(p), witness: Some(w) });
        }
    }
    Ok(PropertyReport::holds())
}

/// Columns rescaled onto the hyperplane `hᵀx = 1` when `A ∈ M⁺`; the raw columns otherwise.
///
/// For members the cone over the columns carries the singleton property; its faces are the
/// faces of this section, which is the polytope the neighborliness check examines.
pub fn polytope_columns(a: &DenseMatrix) -> Result<DenseMatrix> {
    match mplus_membership(a)? {
        MPlusCertificate::Member { h } => {
            let beta = a.tmatvec(&h);
            Ok(a.scale_columns(&beta.iter().map(|b| 1.0 / b).collect::<Vec<_>>()))
        }
        MPlusCertificate::NonMember { .. } => Ok(a.clone()),
    }
}

/// Is `I` exactly the vertex set of a face of `conv(columns)`? Solves
/// `{αᵀa_i = c (i ∈ I), αᵀa_j ≤ c − 1 (j ∉ I)}`, the margin form of the strict face inequalities
/// (the system is homogeneous in `(α, c)`).
fn spans_face(cols: &DenseMatrix, set: &[usize]) -> Result<bool> {
    let (m, n) = cols.shape();
    let mut inside = vec![false; n];
    for &i in set {
        inside[i] = true;
    }
    let outside = n - set.len();
    // variables: α (m, free), c (free), slack per outside column (nonneg)
    let nv = m + 1 + outside;
    let mut sys = DenseMatrix::zeros(n, nv);
    let mut b = vec![0.0; n];
    let mut slack = m + 1;
    for j in 0..n {
        for k in 0..m {
            sys[(j, k)] = cols[(k, j)];
        }
        sys[(j, m)] = -1.0;
        if !inside[j] {
            sys[(j, slack)] = 1.0;
            slack += 1;
            b[j] = -1.0;
        }
    }
    let mut signs = vec![SignConstraint::Free; m + 1];
    signs.extend(std::iter::repeat_n(SignConstraint::Nonneg, outside));
    Ok(check_feasible(&sys, &b, &signs)?.is_some())
}

/// Neighborliness of the column polytope (see [`polytope_columns`]): all `n` columns are
/// vertices and every `k` of them span a face containing no other column.
///
/// For `k = 0` the requirement is that the apex of the cone over the columns is a face, which
/// holds exactly when `A ∈ M⁺`; vertex counts play no role there.
pub fn neighborliness_check(a: &DenseMatrix, k: usize) -> Result<PropertyReport> {
    let n = a.cols();
    if k == 0 {
        return Ok(if mplus_membership(a)?.is_member() {
            PropertyReport::holds()
        } else {
            PropertyReport { holds: false, violating_set: Some(Vec::new()), witness: None }
        });
    }
    guard(binomial(n, k.min(n)) + n as u128)?;
    let cols = polytope_columns(a)?;
    for i in 0..n {
        if !spans_face(&cols, &[i])? {
            return Ok(PropertyReport { holds: false, violating_set: Some(vec![i]), witness: None });
        }
    }
    if k >= 2 {
        for set in (0..n).combinations(k.min(n)) {
            if !spans_face(&cols, &set)? {
                return Ok(PropertyReport { holds: false, violating_set: Some(set), witness: None });
            }
        }
    }
    Ok(PropertyReport::holds())
}

/// Fewest rows a matrix can have while keeping every nonnegative `p`-sparse vector unique.
pub fn min_rows_bound(p: usize) -> usize {
    2 * p + 1
}

/// Probability that the origin lies in the convex hull of `n` i.i.d. Gaussian points in `ℝᵐ`:
/// `1 − 2^{−(n−1)} Σ_{k<m} C(n−1, k)`, evaluated in exact integer arithmetic.
pub fn wendel_probability(m: usize, n: usize) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(contract("Wendel probability needs m ≥ 1 and n ≥ 1"));
    }
    let total = BigUint::one() << (n - 1);
    let mut sum = BigUint::zero();
    let mut c = BigUint::one();
    for k in 0..m.min(n) {
        sum += &c;
        // C(n−1, k+1) = C(n−1, k) (n−1−k) / (k+1)
        c = c * BigUint::from(n - 1 - k) / BigUint::from(k + 1);
    }
    let inside = if sum >= total { BigUint::zero() } else { &total - &sum };
    Ok(big_ratio(&inside, &total).clamp(0.0, 1.0))
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(900);
    let (num, den) = (num >> shift, den >> shift);
    num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RipEstimate {
    pub delta: f64,
    pub worst_support: Vec<usize>,
}

/// Restricted isometry constant over supports of size `q` under the `√m` normalization:
/// `max_T max(1 − σ_min(A_T)/√m, σ_max(A_T)/√m − 1)`.
pub fn rip_constant_brute(a: &DenseMatrix, q: usize) -> Result<RipEstimate> {
    let (m, n) = a.shape();
    if q == 0 || q > n {
        return Err(contract(format!("support size {q} must lie in 1..={n}")));
    }
    guard(binomial(n, q))?;
    let root_m = (m as f64).sqrt();
    let mut best = RipEstimate { delta: f64::NEG_INFINITY, worst_support: Vec::new() };
    for t in (0..n).combinations(q) {
        let at = a.select_columns(&t);
        let gram = SymMatrix::gram(&at.transpose());
        let eig = sym_eigs(&gram)?;
        let smin = eig.min_value().max(0.0).sqrt();
        let smax = eig.max_value().max(0.0).sqrt();
        let delta = (1.0 - smin / root_m).max(smax / root_m - 1.0);
        if delta > best.delta {
            best = RipEstimate { delta, worst_support: t };
        }
    }
    Ok(best)
}
