use super::{DenseMatrix, SymMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `S = V diag(values) Vᵀ`, values ascending,
/// eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl SymEigen {
    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn count_below(&self, threshold: f64) -> usize {
        self.values.iter().filter(|&&v| v < threshold).count()
    }

    pub fn reconstruct(&self) -> SymMatrix {
        SymMatrix::from_spectrum(&self.values, &self.vectors)
    }

    /// Applies `f` to the spectrum: `V diag(f(λ)) Vᵀ`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_spectrum(&mapped, &self.vectors)
    }
}

/// Full eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eigs(s: &SymMatrix) -> Result<SymEigen> {
    let n = s.dim();
    let mut a = s.as_slice().to_vec();
    let mut v = DenseMatrix::identity(n);
    jacobi(n, &mut a, Some(v.as_mut_slice()))?;
    Ok(sorted(n, &a, v))
}

/// Eigenvalues only (ascending). Skips the eigenvector accumulation.
pub fn sym_eigvals(s: &SymMatrix) -> Result<Vec<f64>> {
    let n = s.dim();
    let mut a = s.as_slice().to_vec();
    jacobi(n, &mut a, None)?;
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigendecomposition started from an approximate eigenbasis `basis` (orthogonal columns).
///
/// `S` is first rotated into `basis`, where it is close to diagonal when `basis` comes from a
/// nearby matrix, so only a sweep or two of rotations remain.
pub fn sym_eigs_warm(s: &SymMatrix, basis: &DenseMatrix) -> Result<SymEigen> {
    let n = s.dim();
    assert_eq!(basis.shape(), (n, n), "warm-start basis shape");
    // a = Bᵀ S B
    let sb = s.to_dense().matmul(basis)?;
    let mut a = basis.transpose().matmul(&sb)?.into_vec();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    let mut w = DenseMatrix::identity(n);
    jacobi(n, &mut a, Some(w.as_mut_slice()))?;
    let v = basis.matmul(&w)?;
    Ok(sorted(n, &a, v))
}

fn sorted(n: usize, a: &[f64], v: DenseMatrix) -> SymEigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.select_columns(&order);
    SymEigen { values, vectors }
}

fn off_diagonal_sq(n: usize, a: &[f64]) -> f64 {
    let mut off = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            off += a[i * n + j] * a[i * n + j];
        }
    }
    2.0 * off
}

/// In-place cyclic Jacobi on the row-major symmetric array `a`; accumulates rotations into `v`.
fn jacobi(n: usize, a: &mut [f64], mut v: Option<&mut [f64]>) -> Result<()> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    if total == 0.0 || n < 2 {
        return Ok(());
    }
    let target = (n as f64) * (f64::EPSILON * f64::EPSILON) * total;
    for sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_sq(n, a);
        if off <= target {
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                // entries below the diagonals' resolution are dropped once the early sweeps are done
                let g = 100.0 * apq.abs();
                if sweep > 3
                    && a[p * n + p].abs() + g == a[p * n + p].abs()
                    && a[q * n + q].abs() + g == a[q * n + q].abs()
                {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let off = off_diagonal_sq(n, a);
    if off <= 1e4 * target {
        return Ok(());
    }
    Err(Error::Numerical { what: "Jacobi eigensolver", residual: off.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn small_closed_forms() {
        let e = sym_eigs(&SymMatrix::identity(3)).unwrap();
        assert_close(&e.values, &[1.0, 1.0, 1.0], 1e-15);
        let e = sym_eigs(&SymMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_close(&e.values, &[1.0, 2.0, 3.0], 1e-15);
        let e = sym_eigs(&SymMatrix::unit(2, 0, 1)).unwrap();
        assert_close(&e.values, &[-1.0, 1.0], 1e-14);
    }

    #[test]
    fn zero_and_scalar_matrices() {
        assert_eq!(sym_eigs(&SymMatrix::zeros(4)).unwrap().values, vec![0.0; 4]);
        assert_eq!(sym_eigvals(&SymMatrix::diag(&[-2.0])).unwrap(), vec![-2.0]);
    }

    #[test]
    fn warm_start_matches_cold() {
        let s = SymMatrix::from_upper_fn(5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let cold = sym_eigs(&s).unwrap();
        let nudged = s.add(&SymMatrix::diag(&[1e-3, 0.0, -1e-3, 0.0, 2e-3]));
        let warm = sym_eigs_warm(&nudged, &cold.vectors).unwrap();
        let direct = sym_eigs(&nudged).unwrap();
        assert_close(&warm.values, &direct.values, 1e-12);
        let err = warm.reconstruct().sub(&nudged).frobenius_norm();
        assert!(err < 1e-12, "{err}");
    }
}
