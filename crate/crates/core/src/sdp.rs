//! Small dense semidefinite programs `min ⟨D, X⟩ s.t. A(X) = b, X ⪰ 0`.
//!
//! Operator splitting (ADMM) between the affine set and the PSD cone, in isometric svec
//! coordinates where the trace inner product is the Euclidean one. The affine projection
//! reuses one QR of the constraint matrix per operator, so [`SdpSolver`] is built once per
//! operator and then solves any number of objectives and right-hand sides.
//!
//! Convergence requires a small affine residual, a small dual residual, a small duality
//! gap and a stationary objective over a window of iterations. The cone iterate is always
//! exactly PSD.

use crate::error::{Error, Result};
use crate::linalg::{
    dot, isometric_smat, isometric_svec, norm2, row_space_factor, sym_eigs, sym_eigs_warm, DenseMatrix,
    RowSpaceFactor, SymMatrix, DEFAULT_RANK_TOL,
};
use crate::lp::Sense;

/// Linear map `X ↦ (⟨A_1, X⟩, …, ⟨A_m, X⟩)` on `n × n` symmetric matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SymOperator {
    n: usize,
    mats: Vec<SymMatrix>,
}

impl SymOperator {
    pub fn new(n: usize, mats: Vec<SymMatrix>) -> Result<Self> {
        if let Some(bad) = mats.iter().find(|a| a.dim() != n) {
            return Err(Error::Dimension(format!("coefficient of size {} in an operator on n = {n}", bad.dim())));
        }
        Ok(Self { n, mats })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of measurements `m`.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrices(&self) -> &[SymMatrix] {
        &self.mats
    }

    /// True when `m` exceeds `n(n+1)/2`, i.e. the system cannot be underdetermined.
    pub fn is_overdetermined(&self) -> bool {
        self.mats.len() > crate::linalg::svec_len(self.n)
    }

    /// `b_i = trace(X A_i)`
    pub fn apply(&self, x: &SymMatrix) -> Result<Vec<f64>> {
        if x.dim() != self.n {
            return Err(Error::Dimension(format!("operator on n = {} applied to a {}x{} matrix", self.n, x.dim(), x.dim())));
        }
        Ok(self.mats.iter().map(|a| a.inner(x)).collect())
    }

    /// `Σ y_i A_i`
    pub fn adjoint(&self, y: &[f64]) -> SymMatrix {
        assert_eq!(y.len(), self.mats.len(), "adjoint length");
        let mut out = SymMatrix::zeros(self.n);
        for (a, &yi) in self.mats.iter().zip(y) {
            out.add_assign_scaled(yi, a);
        }
        out
    }

    /// Constraint matrix on plain svec coordinates: diagonal slots hold `(A_i)_jj`, off-diagonal
    /// slots `2 (A_i)_jk`, so that `row_i · svec(X) = trace(X A_i)`.
    pub fn svec_constraint_matrix(&self) -> DenseMatrix {
        let n = self.n;
        let cols = crate::linalg::svec_len(n);
        let mut m = DenseMatrix::zeros(self.mats.len(), cols);
        for (r, a) in self.mats.iter().enumerate() {
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    m[(r, k)] = if i == j { a.get(i, i) } else { 2.0 * a.get(i, j) };
                    k += 1;
                }
            }
        }
        m
    }

    /// Constraint matrix on isometric svec coordinates.
    pub fn isometric_constraint_matrix(&self) -> DenseMatrix {
        let rows: Vec<Vec<f64>> = self.mats.iter().map(isometric_svec).collect();
        let cols = crate::linalg::svec_len(self.n);
        DenseMatrix::from_vec(rows.len(), cols, rows.concat()).expect("finite operator")
    }
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to zero.
pub fn project_psd(s: &SymMatrix) -> Result<SymMatrix> {
    Ok(sym_eigs(s)?.map_spectrum(|l| l.max(0.0)))
}

#[derive(Clone, Debug)]
pub struct SdpOptions {
    /// Relative affine and dual residual tolerance.
    pub tol_residual: f64,
    /// Relative objective change allowed across `window` iterations.
    pub tol_objective: f64,
    /// Relative duality gap tolerance.
    pub tol_gap: f64,
    pub window: usize,
    pub max_iterations: usize,
    /// Objective level below which a feasible iterate is taken as proof of unboundedness.
    pub unbounded_threshold: f64,
    pub over_relaxation: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tol_residual: 1e-6,
            tol_objective: 1e-7,
            tol_gap: 1e-6,
            window: 50,
            max_iterations: 50_000,
            unbounded_threshold: -1e10,
            over_relaxation: 1.6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
}

#[derive(Clone, Debug)]
pub struct SdpOutcome {
    pub status: SdpStatus,
    /// Final PSD iterate (best available iterate unless `status` is `Optimal`).
    pub solution: SymMatrix,
    /// Objective at `solution`, in the caller's sense.
    pub value: f64,
    /// `‖A(X) − b‖₂` at `solution`.
    pub affine_residual: f64,
    pub min_eigenvalue: f64,
    pub iterations: usize,
    /// For `Unbounded`: a unit null-space direction of the operator along which the iterates
    /// diverge and the objective improves. It is PSD up to the accuracy of the iterates.
    pub ray: Option<SymMatrix>,
}

/// ADMM context bound to one operator.
#[derive(Clone, Debug)]
pub struct SdpSolver {
    op: SymOperator,
    constraint: DenseMatrix,
    factor: RowSpaceFactor,
}

/// Minimizes `⟨D, X⟩` over `{A(X) = b, X ⪰ 0}`.
pub fn solve_sdp(d: &SymMatrix, op: &SymOperator, b: &[f64], opts: &SdpOptions) -> Result<SdpOutcome> {
    SdpSolver::new(op.clone()).solve(d, b, Sense::Minimize, opts, None)
}

impl SdpSolver {
    pub fn new(op: SymOperator) -> Self {
        let constraint = op.isometric_constraint_matrix();
        let factor = row_space_factor(&constraint, DEFAULT_RANK_TOL);
        Self { op, constraint, factor }
    }

    pub fn operator(&self) -> &SymOperator {
        &self.op
    }

    /// Orthonormal basis (isometric coordinates, as columns) of the operator's null space.
    pub fn null_basis(&self) -> &DenseMatrix {
        &self.factor.null
    }

    pub fn rank(&self) -> usize {
        self.factor.rank()
    }

    /// Solves with an optional warm start (any symmetric matrix; typically a known feasible point).
    pub fn solve(
        &self,
        d: &SymMatrix,
        b: &[f64],
        sense: Sense,
        opts: &SdpOptions,
        warm: Option<&SymMatrix>,
    ) -> Result<SdpOutcome> {
        let n = self.op.dim();
        if d.dim() != n {
            return Err(Error::Dimension(format!("objective is {0}x{0}, operator acts on n = {n}", d.dim())));
        }
        if b.len() != self.op.len() {
            return Err(Error::Dimension(format!("{} measurements for an operator with m = {}", b.len(), self.op.len())));
        }
        if let Some(w) = warm {
            if w.dim() != n {
                return Err(Error::Dimension("warm start has the wrong size".into()));
            }
        }
        let sign = match sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let c: Vec<f64> = isometric_svec(d).into_iter().map(|v| sign * v).collect();
        let state = Admm::new(self, &c, b, opts, warm);
        let mut out = state.run()?;
        out.value *= sign;
        Ok(out)
    }

    fn affine_residual(&self, z: &[f64], b: &[f64]) -> f64 {
        let mz = self.constraint.matvec(z);
        mz.iter().zip(b).map(|(l, r)| (l - r) * (l - r)).sum::<f64>().sqrt()
    }

    /// Component of `v` orthogonal to the row space of the constraints.
    fn null_component(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        self.factor.project(&mut out, &vec![0.0; self.factor.rank()]);
        out
    }
}

struct Admm<'a> {
    solver: &'a SdpSolver,
    c: &'a [f64],
    b: &'a [f64],
    opts: &'a SdpOptions,
    g: Vec<f64>,
    x: Vec<f64>,
    z: Vec<f64>,
    u: Vec<f64>,
    rho: f64,
    basis: DenseMatrix,
    /// Recent improving divergence directions; a ray is reported once they agree for long enough.
    ray_streak: Vec<Vec<f64>>,
}

impl<'a> Admm<'a> {
    fn new(solver: &'a SdpSolver, c: &'a [f64], b: &'a [f64], opts: &'a SdpOptions, warm: Option<&SymMatrix>) -> Self {
        let n = solver.op.dim();
        let big_n = c.len();
        let g = solver.factor.range_coords(b);
        let z = warm.map(isometric_svec).unwrap_or_else(|| vec![0.0; big_n]);
        let scale_z = norm2(&z).max(1.0);
        let rho = (norm2(c) / scale_z).clamp(1e-3, 1e3);
        Self {
            solver,
            c,
            b,
            opts,
            g,
            x: z.clone(),
            z,
            u: vec![0.0; big_n],
            rho,
            basis: DenseMatrix::identity(n),
            ray_streak: Vec::new(),
        }
    }

    fn cone_step(&mut self, w: &[f64]) -> Result<(Vec<f64>, f64)> {
        let n = self.solver.op.dim();
        let wm = isometric_smat(n, w);
        let eig = match sym_eigs_warm(&wm, &self.basis) {
            Ok(e) => e,
            Err(_) => sym_eigs(&wm)?,
        };
        let z = isometric_svec(&eig.map_spectrum(|l| l.max(0.0)));
        let lmin = eig.min_value();
        self.basis = eig.vectors;
        Ok((z, lmin))
    }

    fn run(mut self) -> Result<SdpOutcome> {
        let opts = self.opts;
        let big_n = self.c.len();
        let alpha = opts.over_relaxation;
        let norm_b = norm2(self.b);
        let norm_c = norm2(self.c);
        let window = opts.window.max(1);
        let mut history: Vec<f64> = Vec::new();
        let mut stalled_primal: Vec<f64> = Vec::new();
        let mut v = vec![0.0; big_n];

        // initial cone point
        let (z0, _) = self.cone_step(&self.z.clone())?;
        self.z = z0;

        for iter in 1..=opts.max_iterations {
            for k in 0..big_n {
                v[k] = self.z[k] - self.u[k] - self.c[k] / self.rho;
            }
            self.solver.factor.project(&mut v, &self.g);
            self.x.copy_from_slice(&v);
            let xh: Vec<f64> = (0..big_n).map(|k| alpha * self.x[k] + (1.0 - alpha) * self.z[k]).collect();
            let w: Vec<f64> = (0..big_n).map(|k| xh[k] + self.u[k]).collect();
            let z_prev = std::mem::take(&mut self.z);
            let (z, _) = self.cone_step(&w)?;
            self.z = z;
            for k in 0..big_n {
                self.u[k] += xh[k] - self.z[k];
            }

            let objective = dot(self.c, &self.z);
            history.push(objective);

            if iter % 10 != 0 {
                continue;
            }

            let primal = norm2(&sub(&self.x, &self.z));
            let dual = self.rho * norm2(&sub(&self.z, &z_prev));
            // residual balancing
            let p_rel = primal / norm2(&self.x).max(norm2(&self.z)).max(1e-12);
            let d_rel = dual / (self.rho * norm2(&self.u)).max(1e-12);
            if p_rel > 10.0 * d_rel {
                self.rho *= 2.0;
                self.u.iter_mut().for_each(|v| *v *= 0.5);
            } else if d_rel > 10.0 * p_rel {
                self.rho *= 0.5;
                self.u.iter_mut().for_each(|v| *v *= 2.0);
            }

            let aff = self.solver.affine_residual(&self.z, self.b);
            if objective < opts.unbounded_threshold && aff <= opts.tol_residual * (1.0 + norm_b) {
                return Ok(self.finish(SdpStatus::Unbounded, iter, None));
            }

            if let Some(ray) = self.detect_ray(&z_prev, norm_c) {
                return Ok(self.finish(SdpStatus::Unbounded, iter, Some(ray)));
            }

            stalled_primal.push(aff / (1.0 + norm_b));
            if stalled_primal.len() >= 200 {
                let len = stalled_primal.len();
                let now = stalled_primal[len - 1];
                let then = stalled_primal[len - 100];
                if now > 1e-3 && now > 0.99 * then {
                    return Ok(self.finish(SdpStatus::Infeasible, iter, None));
                }
            }

            if aff > opts.tol_residual * (1.0 + norm_b) || history.len() <= window {
                continue;
            }
            let old = history[history.len() - 1 - window];
            if (objective - old).abs() > opts.tol_objective * (1.0 + objective.abs()) {
                continue;
            }
            // dual certificate: S = −ρu ⪰ 0 by construction; c − S must lie in the row space
            let s: Vec<f64> = self.u.iter().map(|v| -self.rho * v).collect();
            let c_minus_s = sub(self.c, &s);
            let dual_res = norm2(&self.solver.null_component(&c_minus_s));
            if dual_res > opts.tol_residual * (1.0 + norm_c) {
                continue;
            }
            let mut feasible = self.z.clone();
            self.solver.factor.project(&mut feasible, &self.g);
            let range_part = sub(&c_minus_s, &self.solver.null_component(&c_minus_s));
            let dual_obj = dot(&range_part, &feasible);
            if (objective - dual_obj).abs() > opts.tol_gap * (1.0 + objective.abs()) {
                continue;
            }
            return Ok(self.finish(SdpStatus::Optimal, iter, None));
        }
        Ok(self.finish(SdpStatus::MaxIterations, opts.max_iterations, None))
    }

    /// Divergence along an improving direction: once the iterates run off to infinity, the
    /// step `z_k − z_{k−1}` aligns with a PSD null direction `d` of the operator with `⟨c, d⟩ < 0`.
    /// The direction must persist over several checks before a ray is reported.
    fn detect_ray(&mut self, z_prev: &[f64], norm_c: f64) -> Option<SymMatrix> {
        const STREAK: usize = 5;
        let candidate = self.ray_candidate(z_prev, norm_c);
        let Some(dir) = candidate else {
            self.ray_streak.clear();
            return None;
        };
        if let Some(last) = self.ray_streak.last() {
            if dot(last, &dir) < 0.99 {
                self.ray_streak.clear();
            }
        }
        self.ray_streak.push(dir);
        if self.ray_streak.len() < STREAK {
            return None;
        }
        let n = self.solver.op.dim();
        Some(isometric_smat(n, self.ray_streak.last().unwrap()))
    }

    fn ray_candidate(&self, z_prev: &[f64], norm_c: f64) -> Option<Vec<f64>> {
        if norm_c == 0.0 {
            return None;
        }
        let step = sub(&self.z, z_prev);
        let len = norm2(&step);
        if len < 1e-3 * norm2(&self.z).max(1.0) {
            return None;
        }
        let mut dir = self.solver.null_component(&step);
        let dn = norm2(&dir);
        if dn < 0.999 * len {
            return None;
        }
        dir.iter_mut().for_each(|v| *v /= dn);
        if dot(self.c, &dir) >= -1e-6 * norm_c {
            return None;
        }
        let n = self.solver.op.dim();
        let lmin = sym_eigs(&isometric_smat(n, &dir)).ok()?.min_value();
        (lmin >= -0.05).then_some(dir)
    }

    fn finish(self, status: SdpStatus, iterations: usize, ray: Option<SymMatrix>) -> SdpOutcome {
        let n = self.solver.op.dim();
        let solution = isometric_smat(n, &self.z);
        let min_eigenvalue = sym_eigs(&solution).map(|e| e.min_value()).unwrap_or(f64::NAN);
        SdpOutcome {
            status,
            value: dot(self.c, &self.z),
            affine_residual: self.solver.affine_residual(&self.z, self.b),
            min_eigenvalue,
            solution,
            iterations,
            ray,
        }
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
