//! Two-phase revised simplex for standard-form linear programs
//! `min/max cᵀx  s.t.  A x = b, x ≥ 0`.
//!
//! The basis inverse is kept explicitly and refactorized periodically. Pricing uses devex
//! reference weights. Nondegenerate steps use a Harris ratio test (largest pivot within the
//! feasibility tolerance). Degenerate steps dominate on the 0-1 systems used by the
//! experiments; there a zero-level artificial leaves first if one is eligible, and otherwise
//! the leaving row is the lexicographic minimum of the rows of `B⁻¹`, restricted to pivots
//! that are not tiny. Artificials never re-enter once they have left.
//!
//! [`StandardForm`] keeps the feasible basis found by phase one, so a caller can optimize
//! several objectives over the same polyhedron without repeating it.

use crate::error::{Error, Result};
use crate::linalg::{dot, invert, DenseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: DenseMatrix,
    pub rhs: Vec<f64>,
    pub sense: Sense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    /// `point` is feasible and `point + t·ray` stays feasible for all `t ≥ 0` while the
    /// objective improves without bound.
    Unbounded { point: Vec<f64>, ray: Vec<f64> },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            Self::Optimal { .. } => LpStatus::Optimal,
            Self::Infeasible => LpStatus::Infeasible,
            Self::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[f64]> {
        match self {
            Self::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// Degenerate leaving rows must have a pivot at least this fraction of the largest one.
const DEGENERATE_PIVOT_RATIO: f64 = 1e-3;
/// Devex reference weights are reset once any of them exceeds this.
const DEVEX_RESET: f64 = 1e6;

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    /// Absolute feasibility / optimality tolerance.
    pub tol: f64,
    /// Smallest pivot element accepted by the ratio test.
    pub pivot_tol: f64,
    pub max_iterations: usize,
    pub refactor_every: usize,
    /// Dumps each pivot to stderr.
    pub verbose: bool,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            pivot_tol: 1e-9,
            max_iterations: 100_000,
            refactor_every: 64,
            verbose: false,
        }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    solve_lp_with(lp, &SimplexOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpOutcome> {
    if lp.objective.len() != lp.constraints.cols() || lp.rhs.len() != lp.constraints.rows() {
        return Err(Error::Dimension(format!(
            "objective {} / rhs {} incompatible with a {}x{} constraint matrix",
            lp.objective.len(),
            lp.rhs.len(),
            lp.constraints.rows(),
            lp.constraints.cols()
        )));
    }
    match StandardForm::new(&lp.constraints, &lp.rhs, opts.clone())? {
        Some(mut sf) => sf.optimize(&lp.objective, lp.sense),
        None => Ok(LpOutcome::Infeasible),
    }
}

/// Sign restriction of one variable in [`check_feasible`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConstraint {
    Nonneg,
    Nonpos,
    Free,
}

/// Feasibility of `{x : A x = b}` under per-variable sign restrictions.
/// Returns a witness point when feasible.
pub fn check_feasible(a: &DenseMatrix, b: &[f64], signs: &[SignConstraint]) -> Result<Option<Vec<f64>>> {
    check_feasible_with(a, b, signs, &SimplexOptions::default())
}

pub fn check_feasible_with(
    a: &DenseMatrix,
    b: &[f64],
    signs: &[SignConstraint],
    opts: &SimplexOptions,
) -> Result<Option<Vec<f64>>> {
    if signs.len() != a.cols() || b.len() != a.rows() {
        return Err(Error::Dimension("sign pattern or rhs does not match the matrix".into()));
    }
    // x_j = +y, −y, or y⁺ − y⁻
    let mut cols: Vec<(usize, f64)> = Vec::with_capacity(a.cols() * 2);
    for (j, s) in signs.iter().enumerate() {
        match s {
            SignConstraint::Nonneg => cols.push((j, 1.0)),
            SignConstraint::Nonpos => cols.push((j, -1.0)),
            SignConstraint::Free => {
                cols.push((j, 1.0));
                cols.push((j, -1.0));
            }
        }
    }
    let expanded = DenseMatrix::from_fn(a.rows(), cols.len(), |i, k| cols[k].1 * a[(i, cols[k].0)]);
    let Some(sf) = StandardForm::new(&expanded, b, opts.clone())? else {
        return Ok(None);
    };
    let y = sf.point();
    let mut x = vec![0.0; a.cols()];
    for (k, &(j, sign)) in cols.iter().enumerate() {
        x[j] += sign * y[k];
    }
    Ok(Some(x))
}

enum StepResult {
    Optimal,
    Unbounded { entering: usize, direction: Vec<f64> },
}

/// A standard-form polyhedron `{x ≥ 0 : A x = b}` with a feasible basis.
///
/// Columns `n..n+m` are phase-one artificials; after phase one they never re-enter the basis.
/// Artificials left basic at level zero correspond to redundant rows.
#[derive(Clone, Debug)]
pub struct StandardForm {
    a: DenseMatrix,
    b: Vec<f64>,
    m: usize,
    n: usize,
    basis: Vec<usize>,
    position: Vec<Option<usize>>,
    binv: DenseMatrix,
    xb: Vec<f64>,
    opts: SimplexOptions,
    pivots_since_refactor: usize,
    iterations: usize,
}

impl StandardForm {
    /// Runs phase one. `Ok(None)` means the polyhedron is empty.
    pub fn new(a: &DenseMatrix, b: &[f64], opts: SimplexOptions) -> Result<Option<Self>> {
        let (m, n) = a.shape();
        if b.len() != m {
            return Err(Error::Dimension(format!("rhs has {} entries for {m} rows", b.len())));
        }
        if let Some(bad) = b.iter().find(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("rhs entry {bad} is not finite")));
        }
        // flip rows so that b ≥ 0 and the artificial basis is feasible
        let mut a = a.clone();
        let mut b = b.to_vec();
        for i in 0..m {
            if b[i] < 0.0 {
                b[i] = -b[i];
                for v in a.row_mut(i) {
                    *v = -*v;
                }
            }
        }
        let mut position = vec![None; n + m];
        for i in 0..m {
            position[n + i] = Some(i);
        }
        let mut sf = Self {
            a,
            xb: b.clone(),
            b,
            m,
            n,
            basis: (n..n + m).collect(),
            position,
            binv: DenseMatrix::identity(m),
            opts,
            pivots_since_refactor: 0,
            iterations: 0,
        };
        if m == 0 {
            return Ok(Some(sf));
        }
        let mut cost = vec![0.0; n + m];
        for c in cost.iter_mut().skip(n) {
            *c = 1.0;
        }
        match sf.run(&cost)? {
            StepResult::Optimal => {}
            StepResult::Unbounded { .. } => {
                // phase one is bounded below by zero; only numerical breakdown gets here
                return Err(Error::Numerical { what: "simplex phase one", residual: f64::INFINITY });
            }
        }
        let infeasibility: f64 = sf
            .basis
            .iter()
            .zip(&sf.xb)
            .filter(|(&j, _)| j >= n)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        let scale = 1.0 + sf.b.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if infeasibility > sf.opts.tol * scale {
            return Ok(None);
        }
        sf.drive_out_artificials()?;
        Ok(Some(sf))
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// The current basic feasible point.
    pub fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (&j, &v) in self.basis.iter().zip(&self.xb) {
            if j < self.n {
                x[j] = v.max(0.0);
            }
        }
        x
    }

    /// Optimizes `c` over the polyhedron starting from the current basis, which is kept for
    /// the next call.
    pub fn optimize(&mut self, c: &[f64], sense: Sense) -> Result<LpOutcome> {
        if c.len() != self.n {
            return Err(Error::Dimension(format!("objective has {} entries for {} columns", c.len(), self.n)));
        }
        let sign = match sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; self.n + self.m];
        for (k, &v) in c.iter().enumerate() {
            cost[k] = sign * v;
        }
        match self.run(&cost)? {
            StepResult::Optimal => {
                let x = self.point();
                let value = dot(c, &x);
                Ok(LpOutcome::Optimal { x, value })
            }
            StepResult::Unbounded { entering, direction } => {
                let mut ray = vec![0.0; self.n];
                ray[entering] = 1.0;
                for (&j, &u) in self.basis.iter().zip(&direction) {
                    if j < self.n {
                        ray[j] = -u;
                    }
                }
                let norm = crate::linalg::norm2(&ray);
                for r in ray.iter_mut() {
                    *r /= norm;
                }
                Ok(LpOutcome::Unbounded { point: self.point(), ray })
            }
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        if j < self.n {
            self.a.column(j)
        } else {
            let mut e = vec![0.0; self.m];
            e[j - self.n] = 1.0;
            e
        }
    }

    /// `B⁻¹ a_j`
    fn ftran(&self, j: usize) -> Vec<f64> {
        if j >= self.n {
            return self.binv.column(j - self.n);
        }
        let col = self.a.column(j);
        self.binv.matvec(&col)
    }

    fn refactor(&mut self) -> Result<()> {
        let cols: Vec<Vec<f64>> = self.basis.iter().map(|&j| self.column(j)).collect();
        let b = DenseMatrix::from_columns(self.m, &cols);
        self.binv = invert(&b)?;
        self.xb = self.binv.matvec(&self.b);
        for v in self.xb.iter_mut() {
            if *v < 0.0 && *v > -self.opts.tol {
                *v = 0.0;
            }
        }
        self.pivots_since_refactor = 0;
        Ok(())
    }

    fn pivot(&mut self, row: usize, entering: usize, u: &[f64]) {
        let m = self.m;
        let leaving = self.basis[row];
        let piv = u[row];
        let theta = self.xb[row] / piv;
        for i in 0..m {
            if i != row {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[row] = theta;
        {
            let data = self.binv.as_mut_slice();
            for k in 0..m {
                data[row * m + k] /= piv;
            }
            let (before, rest) = data.split_at_mut(row * m);
            let (pivot_row, after) = rest.split_at_mut(m);
            for (i, chunk) in before.chunks_mut(m).enumerate() {
                let f = u[i];
                if f != 0.0 {
                    crate::linalg::axpy(-f, pivot_row, chunk);
                }
            }
            for (off, chunk) in after.chunks_mut(m).enumerate() {
                let f = u[row + 1 + off];
                if f != 0.0 {
                    crate::linalg::axpy(-f, pivot_row, chunk);
                }
            }
        }
        self.basis[row] = entering;
        self.position[leaving] = None;
        self.position[entering] = Some(row);
        self.pivots_since_refactor += 1;
        if self.opts.verbose {
            eprintln!("pivot: enter {entering} leave {leaving} row {row} theta {theta:.3e}");
        }
    }

    fn run(&mut self, cost: &[f64]) -> Result<StepResult> {
        let (m, n) = (self.m, self.n);
        let cmax = cost.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let dual_tol = self.opts.tol * 0.1 * (1.0 + cmax);
        let mut y = vec![0.0; m];
        let mut weights = vec![1.0; n + m];
        let mut local_iters = 0usize;
        loop {
            if local_iters >= self.opts.max_iterations {
                return Err(Error::Numerical { what: "simplex iteration limit", residual: f64::NAN });
            }
            local_iters += 1;
            self.iterations += 1;
            if self.pivots_since_refactor >= self.opts.refactor_every {
                self.refactor()?;
            }
            // y = B⁻ᵀ c_B
            for v in y.iter_mut() {
                *v = 0.0;
            }
            for (k, &j) in self.basis.iter().enumerate() {
                let cb = cost[j];
                if cb != 0.0 {
                    crate::linalg::axpy(cb, self.binv.row(k), &mut y);
                }
            }
            let ya = self.a.tmatvec(&y);
            // artificials that have left the basis never return
            let limit = n;
            let mut entering = None;
            let mut best = -1.0;
            for j in 0..limit {
                if self.position[j].is_some() {
                    continue;
                }
                let d = if j < n { cost[j] - ya[j] } else { cost[j] - y[j - n] };
                if d < -dual_tol {
                    let score = d * d / weights[j];
                    if score > best {
                        best = score;
                        entering = Some(j);
                    }
                }
            }
            let Some(q) = entering else {
                return Ok(StepResult::Optimal);
            };
            let u = self.ftran(q);
            let leave = self.ratio_test(&u);
            let Some(row) = leave else {
                // a direction along which the objective decreases without bound
                if self.pivots_since_refactor > 0 {
                    self.refactor()?;
                    continue;
                }
                return Ok(StepResult::Unbounded { entering: q, direction: u });
            };
            // devex reference weights, updated from the pivot row
            let brow = self.binv.row(row).to_vec();
            let alpha = self.a.tmatvec(&brow);
            let (wq, ur) = (weights[q], u[row]);
            for j in 0..limit {
                if j == q || self.position[j].is_some() {
                    continue;
                }
                let a = if j < n { alpha[j] } else { brow[j - n] } / ur;
                weights[j] = weights[j].max(a * a * wq);
            }
            weights[self.basis[row]] = (wq / (ur * ur)).max(1.0);
            if weights.iter().any(|&w| w > DEVEX_RESET) {
                weights.fill(1.0);
            }
            self.pivot(row, q, &u);
        }
    }

    /// Leaving row for entering column `u = B⁻¹a_q`, or `None` when the step is unbounded.
    fn ratio_test(&self, u: &[f64]) -> Option<usize> {
        let umax = u.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let thresh = self.opts.pivot_tol * umax.max(1.0);
        let eligible: Vec<usize> = (0..self.m).filter(|&i| u[i] > thresh).collect();
        if eligible.is_empty() {
            return None;
        }
        let tol = self.opts.tol;
        let mut degenerate: Vec<usize> = eligible.iter().copied().filter(|&i| self.xb[i] <= tol).collect();
        if !degenerate.is_empty() {
            // every degenerate row is a valid choice, so small pivots can be avoided for free
            let big = degenerate.iter().fold(0.0_f64, |acc, &i| acc.max(u[i]));
            degenerate.retain(|&i| u[i] >= DEGENERATE_PIVOT_RATIO * big);
            // zero-level artificials leave first; this can happen at most m times
            let artificial = degenerate.iter().copied().filter(|&i| self.basis[i] >= self.n).fold(None, |acc: Option<usize>, i| {
                match acc {
                    Some(r) if u[r] >= u[i] => Some(r),
                    _ => Some(i),
                }
            });
            if let Some(i) = artificial {
                return Some(i);
            }
            return Some(self.lexicographic_min(&degenerate, u));
        }
        // Harris: bound the step with relaxed basic values, then take the largest pivot under it
        let bound = eligible.iter().map(|&i| (self.xb[i] + tol) / u[i]).fold(f64::INFINITY, f64::min);
        eligible
            .into_iter()
            .filter(|&i| self.xb[i] / u[i] <= bound)
            .fold(None, |acc: Option<usize>, i| match acc {
                Some(r) if u[r] >= u[i] => Some(r),
                _ => Some(i),
            })
    }

    /// Row minimizing `B⁻¹[i, ·] / u_i` lexicographically among degenerate candidates.
    fn lexicographic_min(&self, rows: &[usize], u: &[f64]) -> usize {
        let mut best = rows[0];
        for &i in &rows[1..] {
            let ord = (0..self.m)
                .map(|k| {
                    let (a, b) = (self.binv[(i, k)] / u[i], self.binv[(best, k)] / u[best]);
                    let scale = a.abs().max(b.abs()).max(1.0);
                    if (a - b).abs() <= 1e-11 * scale {
                        std::cmp::Ordering::Equal
                    } else {
                        a.total_cmp(&b)
                    }
                })
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal);
            let take = match ord {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => u[i] > u[best],
                std::cmp::Ordering::Greater => false,
            };
            if take {
                best = i;
            }
        }
        best
    }

    /// Pivots zero-level artificials out of the basis where a structural column allows it.
    fn drive_out_artificials(&mut self) -> Result<()> {
        for row in 0..self.m {
            if self.basis[row] < self.n {
                continue;
            }
            let brow = self.binv.row(row).to_vec();
            let alpha = self.a.tmatvec(&brow);
            let scale = self.a.max_abs().max(1.0);
            let candidate = (0..self.n)
                .filter(|&j| self.position[j].is_none())
                .map(|j| (j, alpha[j].abs()))
                .fold(None, |acc: Option<(usize, f64)>, c| match acc {
                    Some(best) if best.1 >= c.1 => Some(best),
                    _ => Some(c),
                });
            if let Some((j, mag)) = candidate {
                if mag > 1e-7 * scale {
                    let u = self.ftran(j);
                    self.pivot(row, j, &u);
                }
            }
        }
        self.refactor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(obj: &[f64], rows: &[Vec<f64>], rhs: &[f64], sense: Sense) -> LinearProgram {
        LinearProgram {
            objective: obj.to_vec(),
            constraints: DenseMatrix::from_rows(rows).unwrap(),
            rhs: rhs.to_vec(),
            sense,
        }
    }

    #[test]
    fn minimal_examples() {
        let out = solve_lp(&lp(&[1.0, 0.0], &[vec![1.0, 1.0]], &[1.0], Sense::Minimize)).unwrap();
        assert_eq!(out.value(), Some(0.0));
        assert_eq!(out.solution().unwrap(), &[0.0, 1.0]);

        let out = solve_lp(&lp(&[0.0], &[vec![1.0]], &[-1.0], Sense::Minimize)).unwrap();
        assert_eq!(out, LpOutcome::Infeasible);

        let out = solve_lp(&lp(&[1.0, 0.0], &[vec![1.0, -1.0]], &[0.0], Sense::Maximize)).unwrap();
        assert_eq!(out.status(), LpStatus::Unbounded);
        if let LpOutcome::Unbounded { ray, .. } = out {
            assert!(ray[0] > 0.0 && (ray[0] - ray[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let out = solve_lp(&lp(
            &[1.0, 2.0, 3.0],
            &[vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0], vec![1.0, 0.0, -1.0]],
            &[1.0, 2.0, 0.0],
            Sense::Minimize,
        ))
        .unwrap();
        let v = out.value().unwrap();
        // x1 = x3, x1 + x2 + x3 = 1: minimum of 4 x1 + 2 x2 over the segment is 2 at x2 = 1
        assert!((v - 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn mixed_sign_feasibility() {
        use SignConstraint::*;
        // x1 + x2 = 0 with both nonneg and normalization x1 + x2 = 1 → infeasible
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(check_feasible(&a, &[0.0, 1.0], &[Nonneg, Nonneg]).unwrap().is_none());
        // x1 − x2 = 0, x1 = 1 → (1, 1)
        let a = DenseMatrix::from_rows(&[vec![1.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let w = check_feasible(&a, &[0.0, 1.0], &[Nonneg, Nonneg]).unwrap().unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 1.0).abs() < 1e-12);
        // x1 + x2 = −1 with x1 free, x2 nonpos: witness maps back through the split
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let w = check_feasible(&a, &[-1.0], &[Free, Nonpos]).unwrap().unwrap();
        assert!((w[0] + w[1] + 1.0).abs() < 1e-12 && w[1] <= 0.0);
    }

    #[test]
    fn reoptimizing_keeps_feasibility() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0, 1.0, 0.0], vec![0.0, 1.0, 2.0, 1.0]]).unwrap();
        let mut sf = StandardForm::new(&a, &[2.0, 3.0], SimplexOptions::default()).unwrap().unwrap();
        let lo = sf.optimize(&[1.0, 0.0, 0.0, 0.0], Sense::Minimize).unwrap();
        let hi = sf.optimize(&[1.0, 0.0, 0.0, 0.0], Sense::Maximize).unwrap();
        assert!((lo.value().unwrap() - 0.0).abs() < 1e-12);
        assert!((hi.value().unwrap() - 2.0).abs() < 1e-12);
    }
}
