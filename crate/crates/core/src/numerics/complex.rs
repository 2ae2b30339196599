//! Complex counterparts of the real routines, used only by the
//! complexification probe.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{checked_svd, RealMatrix, Tolerance};
use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

pub fn from_real(a: &RealMatrix) -> ComplexMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

pub fn from_parts(re: &RealMatrix, im: &RealMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    })
}

pub fn real_part(a: &ComplexMatrix) -> RealMatrix {
    a.map(|z| z.re)
}

pub fn imag_part(a: &ComplexMatrix) -> RealMatrix {
    a.map(|z| z.im)
}

pub fn op_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    checked_svd(a.clone()).map_or(f64::NAN, |d| d.singular_values.max())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eig(a: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEig> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape("hermitian_eig input must be square".into()));
    }
    if n == 0 {
        return Ok(HermitianEig {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let deviation = op_norm(&(a - a.adjoint()));
    if deviation > tol.at_scale(op_norm(a)) {
        return Err(Error::NotSymmetric { deviation });
    }
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    normalize_phases(&mut vectors, tol.atol.max(1e-8));
    Ok(HermitianEig { values, vectors })
}

/// Rotate each column so that its first significant entry is real positive.
pub fn normalize_phases(q: &mut ComplexMatrix, threshold: f64) {
    for mut col in q.column_iter_mut() {
        if let Some(&lead) = col.iter().find(|z| z.norm() > threshold) {
            let phase = lead.conj() / lead.norm();
            col.scale_mut(1.0);
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }
}

/// Orthonormal basis of the kernel of `a`, as columns.
pub fn complex_nullspace(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if rows == 0 {
        return ComplexMatrix::identity(cols, cols);
    }
    let reduced = if rows > 2 * cols {
        a.clone().qr().r()
    } else if rows < cols {
        let mut padded = ComplexMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let dec = checked_svd(reduced).expect("kernel input is finite");
    let v = dec.v_t.expect("v requested").adjoint();
    let sigma = &dec.singular_values;
    let cutoff = tol.at_scale(sigma.max());
    let kernel: Vec<usize> = (0..cols)
        .filter(|&i| i >= sigma.len() || sigma[i] <= cutoff)
        .collect();
    let mut basis = ComplexMatrix::zeros(cols, kernel.len());
    for (dst, &src) in kernel.iter().enumerate() {
        basis.set_column(dst, &v.column(src));
    }
    normalize_phases(&mut basis, tol.atol.max(1e-8));
    basis
}

pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sigma = checked_svd(a.clone()).expect("rank input is finite").singular_values;
    let cutoff = tol.at_scale(sigma.max());
    sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Real `2n×2n` encoding `[[A, −B], [B, A]]` of `A + iB`.
pub fn realify(a: &ComplexMatrix) -> RealMatrix {
    let (re, im) = (real_part(a), imag_part(a));
    let (r, c) = a.shape();
    let mut out = RealMatrix::zeros(2 * r, 2 * c);
    out.view_mut((0, 0), (r, c)).copy_from(&re);
    out.view_mut((0, c), (r, c)).copy_from(&(-&im));
    out.view_mut((r, 0), (r, c)).copy_from(&im);
    out.view_mut((r, c), (r, c)).copy_from(&re);
    out
}
