//! Dense real linear algebra used throughout the crate.

mod dense;
mod eigen;
mod qr;
mod solve;
mod sym;
pub mod text;

pub use dense::DenseMatrix;
pub use eigen::{sym_eigs, sym_eigs_warm, sym_eigvals, SymEigen};
pub use qr::{null_space_basis, numerical_rank, row_space_factor, RowSpaceFactor, DEFAULT_RANK_TOL};
pub use solve::{invert, solve_square};
pub use sym::{isometric_smat, isometric_svec, smat, svec, svec_index, svec_len, SvecCoords, SymMatrix};

/// Euclidean dot product.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
