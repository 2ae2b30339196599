//! Seeded random matrices for tests, property suites and generic choices
//! inside the deciders.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{op_norm, RealMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.transpose()) * 0.5
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// diagonal sign fix).
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    random_isometry(n, n, rng)
}

/// `rows×cols` matrix with orthonormal columns, `cols ≤ rows`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RealMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let qr = gaussian_matrix(rows, cols, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Random skew-symmetric matrix with operator norm `norm`.
pub fn random_skew_with_norm<R: Rng + ?Sized>(n: usize, norm: f64, rng: &mut R) -> RealMatrix {
    let g = gaussian_matrix(n, n, rng);
    let s = &g - g.transpose();
    let current = op_norm(&s);
    if current == 0.0 {
        return s;
    }
    s * (norm / current)
}

/// Random contractive skew-symmetric matrix with norm drawn from `(0, 1]`.
pub fn random_skew_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let norm: f64 = rng.random_range(0.05..=1.0);
    random_skew_with_norm(n, norm, rng)
}

/// `count` Kraus operators `K_j : R^m → R^n` with `Σ K_jᵀK_j = I_m`.
/// Needs `n·count ≥ m`.
pub fn random_kraus<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    count: usize,
    rng: &mut R,
) -> Vec<RealMatrix> {
    assert!(
        n * count >= m,
        "need n * count >= m for a unital Kraus family"
    );
    let raw: Vec<RealMatrix> = (0..count).map(|_| gaussian_matrix(n, m, rng)).collect();
    let mut s = RealMatrix::zeros(m, m);
    for k in &raw {
        s += k.transpose() * k;
    }
    let eig = nalgebra::SymmetricEigen::new(s);
    let inv_sqrt = RealMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()));
    let w = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    raw.into_iter().map(|k| k * &w).collect()
}
