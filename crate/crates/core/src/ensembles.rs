//! Seeded random measurement models.
//!
//! Every generator takes a [`Seed`]: a master seed plus a stream id. Draws come from ChaCha8
//! with the master seed expanded into the key and the stream id selecting the ChaCha stream,
//! so `(seed, stream)` pins the output bit for bit and distinct streams do not overlap.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{contract, Error, Result};
use crate::linalg::{null_space_basis, DenseMatrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::sdp::SymOperator;

pub type SeededRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    pub fn rng(&self) -> SeededRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }

    /// Child seed for a labelled sub-task, e.g. `(grid point, trial)`.
    /// The master seed is kept; the stream id is hashed together with the labels.
    pub fn substream(&self, labels: &[u64]) -> Seed {
        let mut h = splitmix64(self.stream ^ 0x5EED_0F_5EED);
        for &l in labels {
            h = splitmix64(h ^ splitmix64(l.wrapping_add(0x9E37_79B9_7F4A_7C15)));
        }
        Seed { master: self.master, stream: h }
    }
}

/// SplitMix64 finalizer (Steele, Lea & Flood), used only to derive stream ids.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn normal_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| standard_normal(rng)).collect()
}

/// `m × n` i.i.d. Bernoulli(p) 0-1 matrix; with `append_ones_row` an all-ones row is added
/// below, giving `m + 1` rows.
pub fn bernoulli01(m: usize, n: usize, p: f64, append_ones_row: bool, seed: Seed) -> Result<DenseMatrix> {
    if !(p > 0.0 && p < 1.0) {
        return Err(contract(format!("Bernoulli density {p} must lie in (0, 1)")));
    }
    let mut rng = seed.rng();
    let mut a = DenseMatrix::from_fn(m, n, |_, _| if rng.random::<f64>() < p { 1.0 } else { 0.0 });
    if append_ones_row {
        a.push_row(&vec![1.0; n]);
    }
    Ok(a)
}

/// `m × n` matrix of i.i.d. standard normals.
pub fn gaussian_matrix(m: usize, n: usize, seed: Seed) -> DenseMatrix {
    let mut rng = seed.rng();
    DenseMatrix::from_fn(m, n, |_, _| standard_normal(&mut rng))
}

/// `(G + Gᵀ)/2` for `G` with i.i.d. N(0,1) entries: N(0,1) diagonal, N(0,1/2) off-diagonal.
pub fn gaussian_symmetric(n: usize, rng: &mut impl Rng) -> SymMatrix {
    let g = DenseMatrix::from_fn(n, n, |_, _| standard_normal(rng));
    SymMatrix::from_upper_fn(n, |i, j| if i == j { g[(i, i)] } else { 0.5 * (g[(i, j)] + g[(j, i)]) })
}

/// `m` independent Gaussian symmetric coefficient matrices of size `n`.
pub fn gaussian_sym_operator(n: usize, m: usize, seed: Seed) -> SymOperator {
    let mut rng = seed.rng();
    let mats = (0..m).map(|_| gaussian_symmetric(n, &mut rng)).collect();
    SymOperator::new(n, mats).expect("generated matrices have matching dimension")
}

/// Adjacency matrix (`m_right × n_left`) of a random bipartite graph in which every left node
/// picks exactly `d` distinct right neighbours uniformly.
pub fn random_bipartite(n_left: usize, m_right: usize, d: usize, seed: Seed) -> Result<DenseMatrix> {
    if d > m_right {
        return Err(contract(format!("left degree {d} exceeds the {m_right} right nodes")));
    }
    let mut rng = seed.rng();
    let mut a = DenseMatrix::zeros(m_right, n_left);
    for j in 0..n_left {
        for i in index::sample(&mut rng, m_right, d) {
            a[(i, j)] = 1.0;
        }
    }
    Ok(a)
}

/// Uniform unit vector in the null space of `A`: Gaussian coefficients on an orthonormal null
/// basis, normalized.
pub fn sample_null_vector(a: &DenseMatrix, seed: Seed) -> Result<Vec<f64>> {
    NullSpaceSampler::new(a)?.sample(&mut seed.rng())
}

/// Reuses one null-space basis for many draws.
#[derive(Clone, Debug)]
pub struct NullSpaceSampler {
    basis: DenseMatrix,
}

impl NullSpaceSampler {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let basis = null_space_basis(a, DEFAULT_RANK_TOL);
        if basis.cols() == 0 {
            return Err(Error::EmptyNullSpace);
        }
        Ok(Self { basis })
    }

    pub fn dimension(&self) -> usize {
        self.basis.cols()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        loop {
            let g = normal_vec(rng, self.basis.cols());
            let mut w = self.basis.matvec(&g);
            let norm = crate::linalg::norm2(&w);
            if norm > 0.0 {
                for v in w.iter_mut() {
                    *v /= norm;
                }
                return Ok(w);
            }
        }
    }
}
