use super::DenseMatrix;
use crate::error::{Error, Result};

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn invert(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(format!("cannot invert a {}x{} matrix", n, a.cols())));
    }
    let mut w = a.clone();
    let mut inv = DenseMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, w[(i, k)].abs()))
            .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if pmax <= 1e-14 * scale {
            return Err(Error::Numerical { what: "matrix inversion", residual: pmax });
        }
        if p != k {
            swap_rows(&mut w, p, k);
            swap_rows(&mut inv, p, k);
        }
        let piv = w[(k, k)];
        for j in 0..n {
            w[(k, j)] /= piv;
            inv[(k, j)] /= piv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = w[(i, k)];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                w[(i, j)] -= f * w[(k, j)];
                inv[(i, j)] -= f * inv[(k, j)];
            }
        }
    }
    Ok(inv)
}

pub fn solve_square(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    Ok(invert(a)?.matvec(b))
}

fn swap_rows(m: &mut DenseMatrix, i: usize, j: usize) {
    let cols = m.cols();
    let data = m.as_mut_slice();
    for c in 0..cols {
        data.swap(i * cols + c, j * cols + c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_a_permuted_matrix() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![4.0, 1.0]]).unwrap();
        let inv = invert(&a).unwrap();
        let prod = a.matmul(&inv).unwrap();
        let id = DenseMatrix::identity(2);
        for (x, y) in prod.as_slice().iter().zip(id.as_slice()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_matrix_is_an_error() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(invert(&a).is_err());
    }
}
