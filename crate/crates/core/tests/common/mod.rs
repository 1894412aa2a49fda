//! Independent oracles and instance generators shared by the integration tests.
//!
//! Oracles use nalgebra and brute force, never the crate's own LP, QR or eigen routines.

#![allow(dead_code)]

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use singleton_core::ensembles::{normal_vec, standard_normal, SeededRng};
use singleton_core::{DenseMatrix, SymMatrix};

pub fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn sym_to_na(s: &SymMatrix) -> DMatrix<f64> {
    let n = s.dim();
    DMatrix::from_row_slice(n, n, s.as_slice())
}

/// Ascending eigenvalues from nalgebra.
pub fn na_eigvals(s: &SymMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(sym_to_na(s)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn random_sym(n: usize, rng: &mut SeededRng) -> SymMatrix {
    SymMatrix::from_upper_fn(n, |_, _| standard_normal(rng))
}

pub fn gaussian(m: usize, n: usize, rng: &mut SeededRng) -> DenseMatrix {
    DenseMatrix::from_fn(m, n, |_, _| standard_normal(rng))
}

/// Indices of a maximal set of linearly independent rows.
pub fn independent_rows(a: &DMatrix<f64>) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..a.nrows() {
        let mut trial = keep.clone();
        trial.push(i);
        let sub = a.select_rows(&trial);
        if sub.rank(1e-9 * (1.0 + a.amax())) == trial.len() {
            keep = trial;
        }
    }
    keep
}

/// Vertices of `{x ≥ 0 : A x = b}` by enumerating every basis of the independent rows.
/// Vertices closer than `1e-7` in the max norm are merged.
pub fn polyhedron_vertices(a: &DenseMatrix, b: &[f64]) -> Vec<Vec<f64>> {
    let full = to_na(a);
    let rows = independent_rows(&full);
    let a = full.select_rows(&rows);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|&i| b[i]));
    let (r, n) = a.shape();
    let scale = 1.0 + b.amax();
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for cols in (0..n).combinations(r) {
        let basis = a.select_columns(&cols);
        let Some(lu) = Some(basis.lu()).filter(|lu| lu.determinant().abs() > 1e-10) else {
            continue;
        };
        let Some(xb) = lu.solve(&b) else { continue };
        if xb.iter().any(|&v| v < -1e-9 * scale) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (k, &j) in cols.iter().enumerate() {
            x[j] = xb[k].max(0.0);
        }
        if !verts.iter().any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-7 * scale)) {
            verts.push(x);
        }
    }
    verts
}

/// `min cᵀx` over `{x ≥ 0 : A x = b}` by vertex enumeration. Only meaningful when the minimum
/// is attained, which the generators below guarantee.
pub fn lp_vertex_min(a: &DenseMatrix, b: &[f64], c: &[f64]) -> Option<f64> {
    polyhedron_vertices(a, b)
        .iter()
        .map(|x| x.iter().zip(c).map(|(p, q)| p * q).sum::<f64>())
        .min_by(f64::total_cmp)
}

/// A random standard-form LP with feasible primal and dual, so an optimum exists:
/// `b = A x̄` with `x̄ ≥ 0` and `c = Aᵀȳ + s̄` with `s̄ ≥ 0`.
pub fn random_bounded_lp(m: usize, n: usize, rng: &mut SeededRng) -> (DenseMatrix, Vec<f64>, Vec<f64>) {
    let a = gaussian(m, n, rng);
    let xbar: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < 0.5 { 0.0 } else { rng.random::<f64>() }).collect();
    let b = a.matvec(&xbar);
    let ybar = normal_vec(rng, m);
    let c: Vec<f64> = a.tmatvec(&ybar).iter().map(|v| v + rng.random::<f64>()).collect();
    (a, b, c)
}

/// Orthonormal basis of `{X : ⟨A_i, X⟩ = 0}` as symmetric matrices, from nalgebra's SVD of the
/// full `m × n²` constraint matrix (symmetric part taken afterwards).
pub fn sdp_null_basis(mats: &[SymMatrix], n: usize) -> Vec<DMatrix<f64>> {
    // coordinates: upper triangle with √2 off the diagonal, so the inner product is Frobenius
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let d = pairs.len();
    let coord = |s: &DMatrix<f64>, (i, j): (usize, usize)| if i == j { s[(i, i)] } else { s[(i, j)] * 2f64.sqrt() };
    let mut c = DMatrix::zeros(mats.len().max(1), d);
    for (r, a) in mats.iter().enumerate() {
        let an = sym_to_na(a);
        for (k, &p) in pairs.iter().enumerate() {
            c[(r, k)] = coord(&an, p);
        }
    }
    let svd = c.svd(true, true);
    let vt = svd.v_t.expect("V requested");
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10).count();
    // Gram–Schmidt over the row-space directions followed by the unit vectors; whatever
    // survives after the row space is an orthonormal null basis
    let candidates = (0..rank).map(|i| vt.row(i).transpose()).chain((0..d).map(|i| DVector::from_fn(d, |k, _| f64::from(u8::from(k == i)))));
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut null = Vec::new();
    for (idx, mut v) in candidates.enumerate() {
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= norm;
            if idx >= rank {
                null.push(v.clone());
            }
            basis.push(v);
        }
    }
    null.into_iter()
        .map(|v| {
            let mut s = DMatrix::zeros(n, n);
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if i == j {
                    s[(i, i)] = v[k];
                } else {
                    s[(i, j)] = v[k] / 2f64.sqrt();
                    s[(j, i)] = v[k] / 2f64.sqrt();
                }
            }
            s
        })
        .collect()
}

/// Log-barrier interior-point oracle for `min ⟨C, X⟩ s.t. 𝒜(X) = 𝒜(X₀), X ⪰ 0`, started at a
/// strictly positive definite `X₀`. The feasible set must be bounded. Returns the optimal value
/// to roughly `1e-8` relative accuracy.
pub fn barrier_sdp_min(c: &SymMatrix, mats: &[SymMatrix], x0: &SymMatrix) -> f64 {
    let n = x0.dim();
    let cn = sym_to_na(c);
    let basis = sdp_null_basis(mats, n);
    let p = basis.len();
    let mut x = sym_to_na(x0);
    if p == 0 {
        return cn.dot(&x);
    }
    let cb: Vec<f64> = basis.iter().map(|b| cn.dot(b)).collect();
    let mut t = 1.0;
    while (n as f64) / t > 1e-10 {
        for _ in 0..200 {
            let xinv = x.clone().try_inverse().expect("iterate stays positive definite");
            let xb: Vec<DMatrix<f64>> = basis.iter().map(|b| &xinv * b).collect();
            let g = DVector::from_iterator(p, (0..p).map(|k| t * cb[k] - xb[k].trace()));
            let h = DMatrix::from_fn(p, p, |k, l| (&xb[k] * &xb[l]).trace());
            let step = h.clone().cholesky().map(|ch| -ch.solve(&g)).unwrap_or_else(|| -g.clone());
            let dec = -g.dot(&step);
            if dec < 1e-14 {
                break;
            }
            let dir = basis.iter().zip(step.iter()).fold(DMatrix::zeros(n, n), |acc, (b, &s)| acc + b * s);
            let phi = |y: &DMatrix<f64>| t * cn.dot(y) - y.clone().cholesky().map(|ch| 2.0 * ch.l().diagonal().map(f64::ln).sum()).unwrap_or(f64::NAN);
            let f0 = phi(&x);
            let mut alpha = 1.0;
            loop {
                let y = &x + &dir * alpha;
                let fy = phi(&y);
                if fy.is_finite() && fy <= f0 - 0.25 * alpha * dec {
                    x = y;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-16 {
                    break;
                }
            }
            if alpha < 1e-16 {
                break;
            }
        }
        t *= 8.0;
    }
    cn.dot(&x)
}

/// Optimum of the dual `max bᵀy s.t. Aᵀy ≤ c`, solved as a standard-form LP in `(y⁺, y⁻, slack)`.
pub fn lp_dual_value(a: &DenseMatrix, b: &[f64], c: &[f64]) -> f64 {
    use singleton_core::lp::{solve_lp, LinearProgram, LpOutcome, Sense};
    let (m, n) = a.shape();
    let cons = DenseMatrix::from_fn(n, 2 * m + n, |i, j| {
        if j < m {
            a[(j, i)]
        } else if j < 2 * m {
            -a[(j - m, i)]
        } else {
            f64::from(u8::from(j - 2 * m == i))
        }
    });
    let obj: Vec<f64> = b.iter().copied().chain(b.iter().map(|v| -v)).chain(std::iter::repeat_n(0.0, n)).collect();
    let lp = LinearProgram { objective: obj, constraints: cons, rhs: c.to_vec(), sense: Sense::Maximize };
    match solve_lp(&lp).unwrap() {
        LpOutcome::Optimal { value, .. } => value,
        other => panic!("dual not optimal: {other:?}"),
    }
}
