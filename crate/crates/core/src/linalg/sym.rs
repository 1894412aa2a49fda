use std::fmt;
use std::ops::Index;

use super::{dot, DenseMatrix};
use crate::error::{contract, Error, Result};

/// Real symmetric `n × n` matrix. Entries are stored in full and are exactly symmetric:
/// every constructor mirrors or averages the two triangles.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut s = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            s.data[i * n + i] = v;
        }
        s
    }

    /// Matrix with a one at `(i, j)` and `(j, i)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut s = Self::zeros(n);
        s.set(i, j, 1.0);
        s
    }

    /// Builds from the upper triangle of `f`, mirroring it into the lower triangle.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// Symmetrizes a square matrix as `(M + Mᵀ) / 2`.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        if m.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(contract("symmetric matrix entries must be finite"));
        }
        let n = m.rows();
        Ok(Self::from_upper_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    /// Accepts a row-major array that must already be exactly symmetric.
    pub fn from_full(n: usize, data: Vec<f64>) -> Result<Self> {
        let m = DenseMatrix::from_vec(n, n, data)?;
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(contract(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self { n, data: m.into_vec() })
    }

    /// `B Bᵀ` for an `n × r` factor.
    pub fn gram(b: &DenseMatrix) -> Self {
        let n = b.rows();
        Self::from_upper_fn(n, |i, j| dot(b.row(i), b.row(j)))
    }

    /// `V diag(values) Vᵀ` with `V` holding the vectors as columns.
    pub fn from_spectrum(values: &[f64], vectors: &DenseMatrix) -> Self {
        let n = vectors.rows();
        Self::from_upper_fn(n, |i, j| {
            let (ri, rj) = (vectors.row(i), vectors.row(j));
            values.iter().enumerate().map(|(k, &l)| l * ri[k] * rj[k]).sum()
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_vec(self.n, self.n, self.data.clone()).expect("finite by construction")
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Trace inner product `⟨A, B⟩ = trace(A B)`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "inner product dimension");
        dot(&self.data, &other.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| alpha * v).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lincomb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lincomb(1.0, other, -1.0)
    }

    /// `a * self + b * other`
    pub fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n, other.n, "lincomb dimension");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, alpha: f64, other: &Self) {
        super::axpy(alpha, &other.data, &mut self.data);
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix {} [", self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.data[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "]")
    }
}

/// Upper-triangle coordinates of a symmetric matrix, row-major:
/// `(0,0), (0,1), …, (0,n−1), (1,1), …, (n−1,n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvecCoords {
    pub dim: usize,
    pub coords: Vec<f64>,
}

#[inline]
pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Flat position of `(i, j)` with `i ≤ j` in the upper-triangle ordering.
pub fn svec_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i > j || j >= n {
        return Err(contract(format!("svec index ({i},{j}) invalid for n = {n}")));
    }
    Ok(i * n - i * i.saturating_sub(1) / 2 + (j - i))
}

pub fn svec(s: &SymMatrix) -> SvecCoords {
    let n = s.dim();
    let mut coords = Vec::with_capacity(svec_len(n));
    for i in 0..n {
        for j in i..n {
            coords.push(s.get(i, j));
        }
    }
    SvecCoords { dim: n, coords }
}

pub fn smat(v: &SvecCoords) -> Result<SymMatrix> {
    let n = v.dim;
    if v.coords.len() != svec_len(n) {
        return Err(Error::Dimension(format!(
            "{} coordinates supplied for n = {n}",
            v.coords.len()
        )));
    }
    let mut it = v.coords.iter();
    Ok(SymMatrix::from_upper_fn(n, |_, _| *it.next().expect("length checked")))
}

/// Upper-triangle coordinates with off-diagonal entries scaled by √2, so that the Euclidean
/// dot product of two coordinate vectors equals the trace inner product of the matrices.
pub fn isometric_svec(s: &SymMatrix) -> Vec<f64> {
    let n = s.dim();
    let mut out = Vec::with_capacity(svec_len(n));
    for i in 0..n {
        out.push(s.get(i, i));
        for j in i + 1..n {
            out.push(std::f64::consts::SQRT_2 * s.get(i, j));
        }
    }
    out
}

/// Inverse of [`isometric_svec`]. Uses the same `(0,0), (0,1), …` ordering as [`svec`].
pub fn isometric_smat(n: usize, v: &[f64]) -> SymMatrix {
    assert_eq!(v.len(), svec_len(n), "isometric_smat length");
    let mut s = SymMatrix::zeros(n);
    let mut k = 0;
    for i in 0..n {
        s.set(i, i, v[k]);
        k += 1;
        for j in i + 1..n {
            s.set(i, j, v[k] * std::f64::consts::FRAC_1_SQRT_2);
            k += 1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svec_index_examples() {
        assert_eq!(svec_index(0, 0, 3).unwrap(), 0);
        assert_eq!(svec_index(0, 2, 3).unwrap(), 2);
        assert_eq!(svec_index(1, 1, 3).unwrap(), 3);
        assert_eq!(svec_index(2, 2, 3).unwrap(), 5);
        assert!(svec_index(2, 1, 3).is_err());
        assert!(svec_index(0, 3, 3).is_err());
    }

    #[test]
    fn svec_index_is_a_bijection() {
        for n in 1..9 {
            let mut seen = Vec::new();
            for i in 0..n {
                for j in i..n {
                    seen.push(svec_index(i, j, n).unwrap());
                }
            }
            assert_eq!(seen, (0..svec_len(n)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn isometric_coordinates_preserve_inner_products() {
        let a = SymMatrix::from_upper_fn(4, |i, j| (i as f64 - 1.5) * (j as f64 + 0.5));
        let b = SymMatrix::from_upper_fn(4, |i, j| ((i + j) % 3) as f64 - 1.0);
        let (va, vb) = (isometric_svec(&a), isometric_svec(&b));
        assert!((dot(&va, &vb) - a.inner(&b)).abs() < 1e-12);
        assert!(isometric_smat(4, &va).sub(&a).frobenius_norm() < 1e-14);
    }

    #[test]
    fn from_full_requires_exact_symmetry() {
        assert!(SymMatrix::from_full(2, vec![1.0, 2.0, 2.0, 1.0]).is_ok());
        assert!(SymMatrix::from_full(2, vec![1.0, 2.0, 2.0 + 1e-15, 1.0]).is_err());
    }
}
