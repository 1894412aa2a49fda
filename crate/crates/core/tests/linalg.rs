mod common;

use common::{na_eigvals, random_sym, sym_to_na, to_na};
use proptest::prelude::*;
use singleton_core::ensembles::Seed;
use singleton_core::linalg::{
    invert, isometric_smat, isometric_svec, null_space_basis, numerical_rank, smat, svec, sym_eigs, sym_eigvals,
    DEFAULT_RANK_TOL,
};
use singleton_core::{DenseMatrix, SymMatrix};

fn rng(seed: u64) -> singleton_core::ensembles::SeededRng {
    Seed::new(seed, 77).rng()
}

fn sorted_distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(n in 1usize..12, seed in any::<u64>()) {
        let s = random_sym(n, &mut rng(seed));
        let e = sym_eigs(&s).unwrap();
        let back = SymMatrix::from_spectrum(&e.values, &e.vectors);
        prop_assert!(back.sub(&s).frobenius_norm() <= 1e-9 * (1.0 + s.frobenius_norm()));
        // columns orthonormal
        let v = to_na(&e.vectors);
        let gram = v.transpose() * &v;
        prop_assert!((gram - nalgebra::DMatrix::identity(n, n)).amax() < 1e-10);
    }

    #[test]
    fn eigenvalues_match_nalgebra(n in 1usize..15, seed in any::<u64>()) {
        let s = random_sym(n, &mut rng(seed));
        let ours = sym_eigvals(&s).unwrap();
        let theirs = na_eigvals(&s);
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn hoffman_wielandt(n in 1usize..21, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_sym(n, &mut r);
        let b = random_sym(n, &mut r).scaled(0.1).add(&a);
        let lhs = sorted_distance_sq(&sym_eigvals(&a).unwrap(), &sym_eigvals(&b).unwrap());
        let rhs = a.sub(&b).frobenius_norm().powi(2);
        prop_assert!(lhs <= rhs * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn cauchy_interlacing(n in 2usize..12, drop in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let s = random_sym(n, &mut rng(seed));
        let k = drop.index(n);
        let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        let sub = SymMatrix::from_upper_fn(n - 1, |i, j| s.get(keep[i], keep[j]));
        let full = sym_eigvals(&s).unwrap();
        let part = sym_eigvals(&sub).unwrap();
        for i in 0..n - 1 {
            prop_assert!(full[i] <= part[i] + 1e-10 && part[i] <= full[i + 1] + 1e-10);
        }
    }

    #[test]
    fn svec_roundtrips_and_isometry(n in 1usize..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_sym(n, &mut r);
        let t = random_sym(n, &mut r);
        prop_assert_eq!(smat(&svec(&s)).unwrap(), s.clone());
        let back = isometric_smat(n, &isometric_svec(&s));
        prop_assert!(back.sub(&s).frobenius_norm() < 1e-12);
        let ip: f64 = isometric_svec(&s).iter().zip(isometric_svec(&t)).map(|(a, b)| a * b).sum();
        prop_assert!((ip - s.inner(&t)).abs() <= 1e-10 * (1.0 + ip.abs()));
    }

    #[test]
    fn null_space_is_orthonormal_and_annihilated(m in 1usize..8, extra in 0usize..6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = m + extra;
        let a = common::gaussian(m, n, &mut r);
        let z = null_space_basis(&a, DEFAULT_RANK_TOL);
        prop_assert_eq!(z.cols(), n - m);
        prop_assert_eq!(numerical_rank(&a), m);
        if z.cols() > 0 {
            let az = to_na(&a) * to_na(&z);
            prop_assert!(az.amax() < 1e-10);
            let g = to_na(&z).transpose() * to_na(&z);
            prop_assert!((g - nalgebra::DMatrix::identity(n - m, n - m)).amax() < 1e-10);
        }
    }

    #[test]
    fn inverse_matches_nalgebra(n in 1usize..10, seed in any::<u64>()) {
        let a = common::gaussian(n, n, &mut rng(seed));
        let ours = to_na(&invert(&a).unwrap());
        let theirs = to_na(&a).try_inverse().unwrap();
        prop_assert!((ours - &theirs).amax() <= 1e-8 * (1.0 + theirs.amax()));
    }
}

#[test]
fn rank_deficient_null_space() {
    // third row is the sum of the first two
    let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 1.0, 1.0], vec![1.0, 1.0, 2.0, 1.0]]).unwrap();
    assert_eq!(numerical_rank(&a), 2);
    let z = null_space_basis(&a, DEFAULT_RANK_TOL);
    assert_eq!(z.cols(), 2);
    assert!((to_na(&a) * to_na(&z)).amax() < 1e-12);
}

#[test]
fn psd_projection_agrees_with_spectrum() {
    let s = random_sym(7, &mut rng(5));
    let p = singleton_core::sdp::project_psd(&s).unwrap();
    let vals = na_eigvals(&p);
    assert!(vals[0] > -1e-10);
    // distance to the PSD cone is the norm of the negative eigenvalues
    let neg: f64 = na_eigvals(&s).iter().filter(|&&v| v < 0.0).map(|v| v * v).sum();
    assert!((sym_to_na(&s.sub(&p)).norm().powi(2) - neg).abs() < 1e-9);
}
