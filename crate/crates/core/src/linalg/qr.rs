use super::{dot, DenseMatrix};

/// Relative pivot threshold for numerical rank decisions: a pivot counts as zero when it is
/// below `DEFAULT_RANK_TOL × max(rows, cols) × |largest pivot|`.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Householder QR with column pivoting, `M P = Q R`.
struct PivotedQr {
    /// Full orthogonal factor, `rows × rows`.
    q: DenseMatrix,
    /// Upper-trapezoidal factor, `min(rows, cols) × cols`, columns in pivoted order.
    r: DenseMatrix,
    perm: Vec<usize>,
}

fn pivoted_qr(m: &DenseMatrix) -> PivotedQr {
    let (rows, cols) = m.shape();
    let steps = rows.min(cols);
    let mut w = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut reflectors: Vec<(usize, Vec<f64>)> = Vec::with_capacity(steps);

    for k in 0..steps {
        // pivot on the largest remaining column norm (recomputed: sizes here are small)
        let (best, _) = (k..cols)
            .map(|j| (j, (k..rows).map(|i| w[(i, j)] * w[(i, j)]).sum::<f64>()))
            .fold((k, -1.0), |acc, (j, nrm)| if nrm > acc.1 { (j, nrm) } else { acc });
        if best != k {
            for i in 0..rows {
                let tmp = w[(i, k)];
                w[(i, k)] = w[(i, best)];
                w[(i, best)] = tmp;
            }
            perm.swap(k, best);
        }
        let x: Vec<f64> = (k..rows).map(|i| w[(i, k)]).collect();
        let alpha = super::norm2(&x);
        if alpha == 0.0 {
            continue;
        }
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x;
        v[0] += sign * alpha;
        let vnorm = super::norm2(&v);
        for vi in v.iter_mut() {
            *vi /= vnorm;
        }
        for j in k..cols {
            let s: f64 = (k..rows).map(|i| v[i - k] * w[(i, j)]).sum();
            for i in k..rows {
                w[(i, j)] -= 2.0 * v[i - k] * s;
            }
        }
        reflectors.push((k, v));
    }

    // Q = H_0 H_1 … applied to the identity, right to left
    let mut q = DenseMatrix::identity(rows);
    for (k, v) in reflectors.iter().rev() {
        for j in 0..rows {
            let s: f64 = (*k..rows).map(|i| v[i - k] * q[(i, j)]).sum();
            if s != 0.0 {
                for i in *k..rows {
                    q[(i, j)] -= 2.0 * v[i - k] * s;
                }
            }
        }
    }
    let r = DenseMatrix::from_fn(steps, cols, |i, j| if j >= i { w[(i, j)] } else { 0.0 });
    PivotedQr { q, r, perm }
}

fn rank_of(r: &DenseMatrix, rows: usize, cols: usize, tol: f64) -> usize {
    let steps = r.rows();
    if steps == 0 {
        return 0;
    }
    let lead = r[(0, 0)].abs();
    if lead == 0.0 {
        return 0;
    }
    let cutoff = tol * rows.max(cols) as f64 * lead;
    (0..steps).take_while(|&k| r[(k, k)].abs() > cutoff).count()
}

/// Numerical rank with the relative pivot rule of [`DEFAULT_RANK_TOL`].
pub fn numerical_rank(a: &DenseMatrix) -> usize {
    let qr = pivoted_qr(&a.transpose());
    rank_of(&qr.r, a.cols(), a.rows(), DEFAULT_RANK_TOL)
}

/// Orthonormal basis (as columns) of `{w : A w = 0}`.
///
/// `tol` is the relative pivot threshold; pass [`DEFAULT_RANK_TOL`] for the standard rule.
/// A matrix with trivial null space yields a `cols × 0` result.
pub fn null_space_basis(a: &DenseMatrix, tol: f64) -> DenseMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return DenseMatrix::identity(n);
    }
    let qr = pivoted_qr(&a.transpose());
    let rank = rank_of(&qr.r, n, a.rows(), tol);
    let idx: Vec<usize> = (rank..n).collect();
    qr.q.select_columns(&idx)
}

/// Factorization of the row space of a constraint matrix `M` (`m × N`), used to project onto
/// `{x : M x = b}` repeatedly with one up-front QR.
#[derive(Clone, Debug)]
pub struct RowSpaceFactor {
    /// Orthonormal basis of the row space, `N × rank`.
    pub range: DenseMatrix,
    /// Orthonormal basis of the null space, `N × (N − rank)`.
    pub null: DenseMatrix,
    r: DenseMatrix,
    perm: Vec<usize>,
}

pub fn row_space_factor(m: &DenseMatrix, tol: f64) -> RowSpaceFactor {
    let big_n = m.cols();
    if m.rows() == 0 {
        return RowSpaceFactor {
            range: DenseMatrix::zeros(big_n, 0),
            null: DenseMatrix::identity(big_n),
            r: DenseMatrix::zeros(0, 0),
            perm: Vec::new(),
        };
    }
    let qr = pivoted_qr(&m.transpose());
    let rank = rank_of(&qr.r, big_n, m.rows(), tol);
    let range = qr.q.select_columns(&(0..rank).collect::<Vec<_>>());
    let null = qr.q.select_columns(&(rank..big_n).collect::<Vec<_>>());
    RowSpaceFactor { range, null, r: qr.r, perm: qr.perm }
}

impl RowSpaceFactor {
    pub fn rank(&self) -> usize {
        self.range.cols()
    }

    /// Coordinates `g = Qᵀx` shared by every solution of `M x = b` (rows beyond the rank are
    /// assumed consistent).
    pub fn range_coords(&self, b: &[f64]) -> Vec<f64> {
        let rank = self.rank();
        let mut g = vec![0.0; rank];
        for k in 0..rank {
            let mut s = b[self.perm[k]];
            for (l, gl) in g.iter().enumerate().take(k) {
                s -= self.r[(l, k)] * gl;
            }
            g[k] = s / self.r[(k, k)];
        }
        g
    }

    /// Euclidean projection of `x` onto `{x : Qᵀ x = g}`, in place.
    pub fn project(&self, x: &mut [f64], g: &[f64]) {
        let rank = self.rank();
        let big_n = self.range.rows();
        let mut coef = vec![0.0; rank];
        for i in 0..big_n {
            let row = self.range.row(i);
            for k in 0..rank {
                coef[k] += row[k] * x[i];
            }
        }
        for k in 0..rank {
            coef[k] -= g[k];
        }
        for (i, xi) in x.iter_mut().enumerate() {
            *xi -= dot(self.range.row(i), &coef);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_ones_row() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let z = null_space_basis(&a, DEFAULT_RANK_TOL);
        assert_eq!(z.shape(), (2, 1));
        let w = z.column(0);
        assert!((w[0] + w[1]).abs() < 1e-15);
        assert!((w[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn identity_has_trivial_null_space() {
        let z = null_space_basis(&DenseMatrix::identity(2), DEFAULT_RANK_TOL);
        assert_eq!(z.cols(), 0);
        assert_eq!(numerical_rank(&DenseMatrix::identity(3)), 3);
    }

    #[test]
    fn rank_deficient_rows_are_detected() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(numerical_rank(&a), 2);
        assert_eq!(null_space_basis(&a, DEFAULT_RANK_TOL).cols(), 1);
    }

    #[test]
    fn affine_projection_lands_on_the_constraint_set() {
        let m = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 1.0, 2.0],
            vec![0.0, 1.0, -1.0, 0.5],
            vec![1.0, 1.0, 0.0, 2.5],
        ])
        .unwrap();
        let b = [1.0, 2.0, 3.0];
        let f = row_space_factor(&m, DEFAULT_RANK_TOL);
        assert_eq!(f.rank(), 2);
        let g = f.range_coords(&b);
        let mut x = vec![5.0, -3.0, 0.25, 7.0];
        f.project(&mut x, &g);
        let mx = m.matvec(&x);
        for (l, r) in mx.iter().zip(b) {
            assert!((l - r).abs() < 1e-12, "{mx:?}");
        }
    }
}
