//! Uniqueness of positive semidefinite solutions: is `{X ⪰ 0 : A(X) = A(X₀)}` a single point?
//!
//! SDP counterparts of the vector checks ([`probe_singleton_psd`], [`exact_singleton_psd`]),
//! the null-space eigenvalue condition ([`eig_condition_sample`]) with its constructive
//! converse ([`construct_second_solution`]), and the semicircle quantile that predicts the
//! spectrum of Gaussian null-space elements.

use rand::Rng;

use crate::ensembles::{normal_vec, gaussian_symmetric, standard_normal, Seed};
use crate::error::{contract, Error, Result};
use crate::linalg::{isometric_smat, norm2, null_space_basis, svec_len, sym_eigs, DenseMatrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::lp::Sense;
use crate::records::{join_numbers, Record};
use crate::sdp::{SdpOptions, SdpSolver, SdpStatus, SymOperator};

/// `b_i = trace(X A_i)`.
pub fn apply_operator(op: &SymOperator, x: &SymMatrix) -> Result<Vec<f64>> {
    op.apply(x)
}

/// Orthonormal basis of the operator's null space, in isometric svec coordinates.
///
/// In these coordinates the Euclidean inner product is the trace inner product, so the basis
/// matrices `Y_k` satisfy `⟨Y_j, Y_k⟩ = δ_jk` and Gaussian combinations of them are
/// rotation-invariant within the null space.
#[derive(Clone, Debug, PartialEq)]
pub struct NullBasis {
    n: usize,
    columns: DenseMatrix,
}

impl NullBasis {
    pub fn dimension(&self) -> usize {
        self.columns.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dimension() == 0
    }

    pub fn columns(&self) -> &DenseMatrix {
        &self.columns
    }

    pub fn element(&self, k: usize) -> SymMatrix {
        isometric_smat(self.n, &self.columns.column(k))
    }

    /// `Σ coeffs_k Y_k`
    pub fn combine(&self, coeffs: &[f64]) -> SymMatrix {
        isometric_smat(self.n, &self.columns.matvec(coeffs))
    }

    /// Gaussian combination normalized to unit Frobenius norm.
    pub fn sample_unit(&self, rng: &mut impl Rng) -> Option<SymMatrix> {
        if self.is_trivial() {
            return None;
        }
        loop {
            let v = self.columns.matvec(&normal_vec(rng, self.dimension()));
            let norm = norm2(&v);
            if norm > 0.0 {
                return Some(isometric_smat(self.n, &v.iter().map(|x| x / norm).collect::<Vec<_>>()));
            }
        }
    }
}

pub fn operator_null_basis(op: &SymOperator) -> NullBasis {
    let constraint = op.isometric_constraint_matrix();
    let columns = if op.is_empty() {
        DenseMatrix::identity(svec_len(op.dim()))
    } else {
        null_space_basis(&constraint, DEFAULT_RANK_TOL)
    };
    NullBasis { n: op.dim(), columns }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdVerdictKind {
    CertifiedSingleton,
    Refuted,
    ProbableSingleton,
    /// Some SDP did not converge and nothing was refuted; never read as a singleton.
    Inconclusive,
}

impl PsdVerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CertifiedSingleton => "certified-singleton",
            Self::Refuted => "refuted",
            Self::ProbableSingleton => "probable-singleton",
            Self::Inconclusive => "inconclusive",
        }
    }

    pub fn is_singleton(self) -> bool {
        matches!(self, Self::CertifiedSingleton | Self::ProbableSingleton)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdSingletonVerdict {
    pub kind: PsdVerdictKind,
    pub witness: Option<SymMatrix>,
    pub probes_used: usize,
    /// Probes (or directions) whose SDPs did not converge.
    pub inconclusive: usize,
    /// Largest objective spread seen among converged probes.
    pub gap: f64,
    /// Canonical directions fully examined (exact mode; 0 for random probes and for decisions
    /// reached without an SDP).
    pub basis_directions_checked: usize,
}

impl PsdSingletonVerdict {
    pub fn to_record(&self) -> Record {
        let mut rec = Record::new()
            .with("kind", self.kind.as_str())
            .with("probes_used", self.probes_used)
            .with("inconclusive", self.inconclusive)
            .with("gap", self.gap)
            .with("basis_directions_checked", self.basis_directions_checked);
        if let Some(w) = &self.witness {
            rec.push("witness_n", w.dim());
            rec.push("witness", join_numbers(w.as_slice()));
        }
        rec
    }
}

/// Tolerances for the SDP-based singleton checks.
#[derive(Clone, Debug)]
pub struct PsdProbeOptions {
    /// An objective is non-constant when `max − min > spread_tol · ‖D‖_F · (1 + ‖X₀‖_F)`.
    pub spread_tol: f64,
    /// A witness must lie at least this far from `X₀` in Frobenius norm.
    pub witness_tol: f64,
    pub sdp: SdpOptions,
}

impl Default for PsdProbeOptions {
    fn default() -> Self {
        Self { spread_tol: 1e-4, witness_tol: 1e-5, sdp: SdpOptions::default() }
    }
}

fn check_start(solver: &SdpSolver, x0: &SymMatrix) -> Result<Vec<f64>> {
    let op = solver.operator();
    if x0.dim() != op.dim() {
        return Err(Error::Dimension(format!("X0 is {0}x{0}, operator acts on n = {1}", x0.dim(), op.dim())));
    }
    let lmin = sym_eigs(x0)?.min_value();
    if lmin < -1e-8 * (1.0 + x0.frobenius_norm()) {
        return Err(contract(format!("X0 must be positive semidefinite (smallest eigenvalue {lmin})")));
    }
    op.apply(x0)
}

enum Probe {
    Spread { spread: f64, witness: Option<SymMatrix> },
    Unbounded(SymMatrix),
    Inconclusive,
}

/// A feasible point with trace `trace(X₀) + 1`, which exists whenever the feasible set is
/// unbounded (it contains `X₀` plus a PSD null direction). Found by a separate, bounded SDP so the
/// witness is a converged solution rather than a point on a diverging run.
fn unbounded_witness(solver: &SdpSolver, x0: &SymMatrix, b: &[f64], ray: Option<&SymMatrix>, opts: &PsdProbeOptions) -> Result<Option<SymMatrix>> {
    let n = x0.dim();
    let mut mats = solver.operator().matrices().to_vec();
    mats.push(SymMatrix::identity(n));
    let bounded = SdpSolver::new(SymOperator::new(n, mats)?);
    let mut rhs = b.to_vec();
    rhs.push(x0.trace() + 1.0);
    let warm = ray.and_then(|r| {
        let clipped = sym_eigs(r).ok()?.map_spectrum(|l| l.max(0.0));
        let t = clipped.trace();
        (t > 0.0).then(|| x0.add(&clipped.scaled(1.0 / t)))
    });
    let out = bounded.solve(&SymMatrix::zeros(n), &rhs, Sense::Minimize, &opts.sdp, Some(warm.as_ref().unwrap_or(x0)))?;
    let ok = out.status == SdpStatus::Optimal && out.solution.sub(x0).frobenius_norm() >= opts.witness_tol;
    Ok(ok.then_some(out.solution))
}

fn probe_direction(solver: &SdpSolver, d: &SymMatrix, x0: &SymMatrix, b: &[f64], opts: &PsdProbeOptions) -> Result<Probe> {
    let mut ends = Vec::with_capacity(2);
    for sense in [Sense::Minimize, Sense::Maximize] {
        let out = solver.solve(d, b, sense, &opts.sdp, Some(x0))?;
        match out.status {
            SdpStatus::Optimal => ends.push(out),
            SdpStatus::Unbounded => match unbounded_witness(solver, x0, b, out.ray.as_ref(), opts)? {
                Some(w) => return Ok(Probe::Unbounded(w)),
                None => return Ok(Probe::Inconclusive),
            },
            SdpStatus::Infeasible | SdpStatus::MaxIterations => return Ok(Probe::Inconclusive),
        }
    }
    let (lo, hi) = (&ends[0], &ends[1]);
    let scale = d.frobenius_norm() * (1.0 + x0.frobenius_norm());
    let spread = (hi.value - lo.value) / scale.max(f64::MIN_POSITIVE);
    if spread <= opts.spread_tol {
        return Ok(Probe::Spread { spread, witness: None });
    }
    let (dlo, dhi) = (lo.solution.sub(x0).frobenius_norm(), hi.solution.sub(x0).frobenius_norm());
    let (w, dist) = if dlo >= dhi { (&lo.solution, dlo) } else { (&hi.solution, dhi) };
    let witness = (dist >= opts.witness_tol).then(|| w.clone());
    Ok(Probe::Spread { spread, witness })
}

/// Randomized singleton test: for each of `probes` symmetrized Gaussian objectives `D`,
/// minimize and maximize `⟨D, X⟩` over the feasible set.
pub fn probe_singleton_psd(
    solver: &SdpSolver,
    x0: &SymMatrix,
    probes: usize,
    seed: Seed,
    opts: &PsdProbeOptions,
) -> Result<PsdSingletonVerdict> {
    let b = check_start(solver, x0)?;
    let mut rng = seed.rng();
    let mut verdict = PsdSingletonVerdict {
        kind: PsdVerdictKind::ProbableSingleton,
        witness: None,
        probes_used: 0,
        inconclusive: 0,
        gap: 0.0,
        basis_directions_checked: 0,
    };
    for _ in 0..probes {
        let d = gaussian_symmetric(x0.dim(), &mut rng);
        verdict.probes_used += 1;
        match probe_direction(solver, &d, x0, &b, opts)? {
            Probe::Unbounded(w) => {
                verdict.kind = PsdVerdictKind::Refuted;
                verdict.witness = Some(w);
                verdict.gap = f64::INFINITY;
                return Ok(verdict);
            }
            Probe::Spread { spread, witness } => {
                verdict.gap = verdict.gap.max(spread);
                if witness.is_some() {
                    verdict.kind = PsdVerdictKind::Refuted;
                    verdict.witness = witness;
                    return Ok(verdict);
                }
            }
            Probe::Inconclusive => verdict.inconclusive += 1,
        }
    }
    if verdict.inconclusive > 0 {
        verdict.kind = PsdVerdictKind::Inconclusive;
    }
    Ok(verdict)
}

/// Steps along the lines `X₀ ± tY` for the null-basis elements `Y` (unit Frobenius norm),
/// halving `t` from `max(1, ‖X₀‖_F)` down to the witness tolerance, and returns the first point
/// whose smallest eigenvalue clears `−1e−10 (1 + ‖X₀‖_F)`.
fn null_line_witness(basis: &NullBasis, x0: &SymMatrix, opts: &PsdProbeOptions) -> Result<Option<SymMatrix>> {
    let scale = x0.frobenius_norm();
    let floor = -1e-10 * (1.0 + scale);
    for k in 0..basis.dimension() {
        let y = basis.element(k);
        for sign in [1.0, -1.0] {
            let mut t = scale.max(1.0);
            while t >= opts.witness_tol {
                let candidate = x0.add(&y.scaled(sign * t));
                if sym_eigs(&candidate)?.min_value() >= floor {
                    return Ok(Some(candidate));
                }
                t *= 0.5;
            }
        }
    }
    Ok(None)
}

/// Deterministic singleton test: minimize and maximize `⟨E, X⟩` for every element `E` of the
/// canonical basis of symmetric matrices. A convex set on which every such functional is
/// constant is a point.
///
/// Before any SDP is solved, the segments `X₀ ± tY` along each null-basis element `Y` are
/// searched for a PSD point. On thin feasible sets, such as the segment left by a
/// one-dimensional null space, the SDPs may not converge while this search decides directly.
pub fn exact_singleton_psd(solver: &SdpSolver, x0: &SymMatrix, opts: &PsdProbeOptions) -> Result<PsdSingletonVerdict> {
    let b = check_start(solver, x0)?;
    let n = x0.dim();
    let mut verdict = PsdSingletonVerdict {
        kind: PsdVerdictKind::CertifiedSingleton,
        witness: None,
        probes_used: 0,
        inconclusive: 0,
        gap: 0.0,
        basis_directions_checked: 0,
    };
    let basis = operator_null_basis(solver.operator());
    if basis.is_trivial() {
        return Ok(verdict);
    }
    if let Some(w) = null_line_witness(&basis, x0, opts)? {
        verdict.kind = PsdVerdictKind::Refuted;
        verdict.witness = Some(w);
        return Ok(verdict);
    }
    for i in 0..n {
        for j in i..n {
            let e = SymMatrix::unit(n, i, j);
            verdict.probes_used += 1;
            match probe_direction(solver, &e, x0, &b, opts)? {
                Probe::Unbounded(w) => {
                    verdict.kind = PsdVerdictKind::Refuted;
                    verdict.witness = Some(w);
                    verdict.gap = f64::INFINITY;
                    return Ok(verdict);
                }
                Probe::Spread { spread, witness } => {
                    verdict.gap = verdict.gap.max(spread);
                    verdict.basis_directions_checked += 1;
                    if witness.is_some() {
                        verdict.kind = PsdVerdictKind::Refuted;
                        verdict.witness = witness;
                        return Ok(verdict);
                    }
                }
                Probe::Inconclusive => verdict.inconclusive += 1,
            }
        }
    }
    if verdict.inconclusive > 0 {
        verdict.kind = PsdVerdictKind::Inconclusive;
    }
    Ok(verdict)
}

/// Relative tolerance below which an eigenvalue of a null-space element does not count as negative.
pub const EIG_TOL: f64 = 1e-8;

fn negative_count(y: &SymMatrix) -> Result<usize> {
    Ok(sym_eigs(y)?.count_below(-EIG_TOL * y.frobenius_norm()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigConditionReport {
    pub r: usize,
    pub samples: usize,
    /// Fewest negative eigenvalues seen; `None` when the null space is trivial.
    pub min_negative_count: Option<usize>,
    /// A unit-norm null-space element with at most `r` negative eigenvalues.
    pub refuting_matrix: Option<SymMatrix>,
}

impl EigConditionReport {
    /// The null space is trivial, so the condition holds for every `r`.
    pub fn is_vacuous(&self) -> bool {
        self.min_negative_count.is_none()
    }

    /// No refuter was found. For a nontrivial null space this is evidence, not proof.
    pub fn no_refuter_found(&self) -> bool {
        self.refuting_matrix.is_none()
    }

    pub fn to_record(&self) -> Record {
        let mut rec = Record::new().with("r", self.r).with("samples", self.samples);
        match self.min_negative_count {
            Some(c) => rec.push("min_negative_count", c),
            None => rec.push("vacuous", true),
        }
        rec.push("refuted", self.refuting_matrix.is_some());
        rec.push("certifies", false);
        rec
    }
}

/// Samples unit-norm null-space elements and counts their negative eigenvalues (those below
/// `−EIG_TOL·‖Y‖_F`). Any sample with at most `r` negatives refutes the condition that every
/// nonzero null-space element has at least `r + 1` of them; sampling can never establish it.
pub fn eig_condition_sample(op: &SymOperator, r: usize, samples: usize, seed: Seed) -> Result<EigConditionReport> {
    let basis = operator_null_basis(op);
    if basis.is_trivial() {
        return Ok(EigConditionReport { r, samples: 0, min_negative_count: None, refuting_matrix: None });
    }
    let mut rng = seed.rng();
    let mut min_count = usize::MAX;
    let mut refuter = None;
    for _ in 0..samples {
        let y = basis.sample_unit(&mut rng).expect("nontrivial basis");
        let count = negative_count(&y)?;
        if count < min_count {
            min_count = count;
            if count <= r {
                refuter = Some(y);
            }
        }
    }
    let min_negative_count = (samples > 0).then_some(min_count);
    Ok(EigConditionReport { r, samples, min_negative_count, refuting_matrix: refuter })
}

/// From a null-space direction `Y` with at most `r` negative eigenvalues, builds a PSD `X` of
/// rank at most `r` such that `X + Y` is PSD too: with `Y = U Λ Uᵀ`, `X = U Λ' Uᵀ` where
/// `Λ'_ii = 1 − λ_i` for negative `λ_i` and 0 otherwise.
pub fn construct_second_solution(y: &SymMatrix, r: usize) -> Result<(SymMatrix, SymMatrix)> {
    let norm = y.frobenius_norm();
    if norm == 0.0 {
        return Err(contract("Y must be nonzero"));
    }
    let eig = sym_eigs(y)?;
    let cut = -EIG_TOL * norm;
    let negatives = eig.count_below(cut);
    if negatives > r {
        return Err(contract(format!("Y has {negatives} negative eigenvalues, more than r = {r}")));
    }
    let x = eig.map_spectrum(|l| if l < cut { 1.0 - l } else { 0.0 });
    let xy = x.add(y);
    Ok((x, xy))
}

/// Random PSD matrix `B Bᵀ` of rank `r` (almost surely) with an `n × r` Gaussian factor.
pub fn random_psd(n: usize, r: usize, rng: &mut impl Rng) -> SymMatrix {
    let b = DenseMatrix::from_fn(n, r, |_, _| standard_normal(rng));
    SymMatrix::gram(&b)
}

/// Mass of the semicircle law of radius `√2` below `c`:
/// `α₁(c) = (1/π) ∫_{−√2}^{c} √(2 − x²) dx`.
pub fn semicircle_alpha(c: f64) -> f64 {
    let r = std::f64::consts::SQRT_2;
    if c.is_nan() {
        return f64::NAN;
    }
    if c <= -r {
        return 0.0;
    }
    if c >= r {
        return 1.0;
    }
    // symmetric density: integrate from the centre outwards
    let half = adaptive_simpson(&semicircle_density, 0.0, c.abs(), 1e-13, 60);
    if c >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}

fn semicircle_density(x: f64) -> f64 {
    (2.0 - x * x).max(0.0).sqrt() / std::f64::consts::PI
}

/// Inverse of [`semicircle_alpha`] by bisection to width `1e−10`.
pub fn semicircle_c(alpha1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha1) {
        return Err(contract(format!("quantile level {alpha1} must lie in [0, 1]")));
    }
    let r = std::f64::consts::SQRT_2;
    let (mut lo, mut hi) = (-r, r);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if semicircle_alpha(mid) < alpha1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::gaussian_sym_operator;

    fn e(n: usize, i: usize, j: usize) -> SymMatrix {
        SymMatrix::unit(n, i, j)
    }

    #[test]
    fn apply_examples() {
        let op = SymOperator::new(3, vec![SymMatrix::identity(3)]).unwrap();
        let x = SymMatrix::from_upper_fn(3, |i, j| (i + 2 * j) as f64);
        assert_eq!(apply_operator(&op, &x).unwrap(), vec![x.trace()]);
        assert_eq!(apply_operator(&op, &SymMatrix::zeros(3)).unwrap(), vec![0.0]);
        assert!(apply_operator(&op, &SymMatrix::zeros(2)).is_err());
    }

    #[test]
    fn null_basis_dimensions() {
        let empty = SymOperator::new(3, vec![]).unwrap();
        assert_eq!(operator_null_basis(&empty).dimension(), 6);
        let op = gaussian_sym_operator(6, 10, Seed::new(5, 0));
        let basis = operator_null_basis(&op);
        assert_eq!(basis.dimension(), 11);
        for k in 0..basis.dimension() {
            let y = basis.element(k);
            assert!((y.frobenius_norm() - 1.0).abs() < 1e-10);
            assert!(norm2(&op.apply(&y).unwrap()) < 1e-10);
        }
        let full = gaussian_sym_operator(3, 6, Seed::new(5, 1));
        assert!(operator_null_basis(&full).is_trivial());
    }

    #[test]
    fn probe_examples() {
        let opts = PsdProbeOptions::default();
        let trace_op = SdpSolver::new(SymOperator::new(3, vec![SymMatrix::identity(3)]).unwrap());
        let v = probe_singleton_psd(&trace_op, &SymMatrix::zeros(3), 3, Seed::new(1, 0), &opts).unwrap();
        assert_eq!(v.kind, PsdVerdictKind::ProbableSingleton, "{v:?}");

        let corner = SdpSolver::new(SymOperator::new(2, vec![e(2, 0, 0)]).unwrap());
        let x0 = e(2, 0, 0);
        let v = probe_singleton_psd(&corner, &x0, 3, Seed::new(1, 0), &opts).unwrap();
        assert_eq!(v.kind, PsdVerdictKind::Refuted, "{v:?}");
        let w = v.witness.unwrap();
        assert!((w.get(0, 0) - 1.0).abs() < 1e-5);
        assert!(sym_eigs(&w).unwrap().min_value() > -1e-8);

        let v = exact_singleton_psd(&corner, &x0, &opts).unwrap();
        assert_eq!(v.kind, PsdVerdictKind::Refuted);
    }

    #[test]
    fn full_measurement_certifies() {
        let op = gaussian_sym_operator(3, 6, Seed::new(9, 0));
        let solver = SdpSolver::new(op);
        let x0 = random_psd(3, 2, &mut Seed::new(9, 1).rng());
        let v = exact_singleton_psd(&solver, &x0, &PsdProbeOptions::default()).unwrap();
        assert_eq!(v.kind, PsdVerdictKind::CertifiedSingleton, "{v:?}");
        // an injective operator needs no SDP
        assert_eq!(v.basis_directions_checked, 0);
    }

    #[test]
    fn eig_condition_examples() {
        let full = gaussian_sym_operator(3, 6, Seed::new(2, 0));
        let rep = eig_condition_sample(&full, 2, 10, Seed::new(2, 1)).unwrap();
        assert!(rep.is_vacuous() && rep.no_refuter_found());
        let empty = SymOperator::new(2, vec![]).unwrap();
        let rep = eig_condition_sample(&empty, 0, 200, Seed::new(2, 2)).unwrap();
        assert_eq!(rep.min_negative_count, Some(0));
        let y = rep.refuting_matrix.unwrap();
        assert!((y.frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_solution_examples() {
        let y = SymMatrix::diag(&[-1.0, 2.0]);
        let (x, xy) = construct_second_solution(&y, 1).unwrap();
        assert!(x.sub(&SymMatrix::diag(&[2.0, 0.0])).frobenius_norm() < 1e-12);
        assert!(xy.sub(&SymMatrix::diag(&[1.0, 2.0])).frobenius_norm() < 1e-12);
        let psd = SymMatrix::diag(&[1.0, 3.0]);
        let (x, xy) = construct_second_solution(&psd, 0).unwrap();
        assert_eq!(x.frobenius_norm(), 0.0);
        assert_eq!(xy, psd);
        assert!(construct_second_solution(&y, 0).is_err());
        assert!(construct_second_solution(&SymMatrix::zeros(2), 1).is_err());
    }

    #[test]
    fn semicircle_values() {
        assert_eq!(semicircle_alpha(0.0), 0.5);
        assert_eq!(semicircle_alpha(-2.0), 0.0);
        assert_eq!(semicircle_alpha(1.5), 1.0);
        assert!((semicircle_alpha(-1.0) - 0.09085).abs() < 1e-4);
        for c in [-1.3, -0.4, 0.2, 1.1] {
            assert!((semicircle_c(semicircle_alpha(c)).unwrap() - c).abs() < 1e-8);
        }
        assert!(semicircle_c(1.5).is_err());
    }
}
