//! Dense real linear algebra with an explicit tolerance policy.
//!
//! Everything here is deterministic: eigen- and singular-value solvers come
//! from `nalgebra`, results are sorted in descending order, and eigenvector
//! signs are normalised so that repeated runs produce identical output.

pub mod complex;

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

/// Dense real matrix. Storage is column-major; serialisation layers are
/// responsible for presenting it row-major.
pub type RealMatrix = DMatrix<f64>;

/// Absolute/relative tolerance pair. The effective tolerance for a matrix
/// `A` is `atol + rtol * ‖A‖₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Self {
        Self {
            atol: atol.max(0.0),
            rtol: rtol.max(0.0),
        }
    }

    /// Tolerance for a quantity whose natural scale is `scale`.
    pub fn at_scale(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale.abs()
    }

    /// Effective tolerance for `a`.
    pub fn effective(&self, a: &RealMatrix) -> f64 {
        self.at_scale(op_norm(a))
    }

    /// Both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.atol * factor, self.rtol * factor)
    }

    /// `‖a − b‖₂` within the effective tolerance of the larger operand.
    pub fn close(&self, a: &RealMatrix, b: &RealMatrix) -> bool {
        if a.shape() != b.shape() {
            return false;
        }
        let scale = op_norm(a).max(op_norm(b));
        op_norm(&(a - b)) <= self.at_scale(scale)
    }
}

/// Largest singular value; zero for empty matrices and NaN when an entry
/// is not finite.
pub fn op_norm(a: &RealMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    checked_svd(a.clone()).map_or(f64::NAN, |d| d.singular_values.max())
}

type Decomposition<T> = SVD<T, nalgebra::Dyn, nalgebra::Dyn>;

/// On some finite inputs with many exact zeros nalgebra's iteration breeds
/// NaNs and never stops; the first attempt is capped so such a variant is
/// abandoned quickly.
const FIRST_ATTEMPT_ITERATIONS: usize = 10_000;
const RETRY_ITERATIONS: usize = 100_000;

/// nalgebra's default stopping rule can leave a visible residual on some
/// clustered spectra; retry with tighter thresholds until `U·Σ·V*`
/// reproduces the input. If the iteration breaks down on `a`, the
/// transpose and the column-reversed matrix are tried, and the factors are
/// mapped back. `None` for non-finite input or when every variant fails.
pub(crate) fn checked_svd<T: ComplexField<RealField = f64>>(a: DMatrix<T>) -> Option<Decomposition<T>> {
    let norm = a.norm();
    if !norm.is_finite() {
        return None;
    }
    let target = 1e-13 * norm.max(f64::MIN_POSITIVE) * (a.nrows().max(a.ncols()) as f64).sqrt();
    let reverse = |m: &DMatrix<T>| DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, m.ncols() - 1 - j)].clone());
    let mut best: Option<(f64, Decomposition<T>)> = None;
    for variant in 0..3 {
        let m = match variant {
            0 => a.clone(),
            1 => a.adjoint(),
            _ => reverse(&a),
        };
        let Some((r, d)) = refined_svd(m, target) else {
            continue;
        };
        let (u, v_t) = (d.u.expect("u requested"), d.v_t.expect("v requested"));
        // a = U Σ Vᵀ from the factors of aᵀ = U' Σ V'ᵀ or of a·P.
        let (u, v_t) = match variant {
            0 => (u, v_t),
            1 => (v_t.adjoint(), u.adjoint()),
            _ => (u, reverse(&v_t)),
        };
        let d = SVD {
            u: Some(u),
            v_t: Some(v_t),
            singular_values: d.singular_values,
        };
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, d));
        }
        if r <= target {
            break;
        }
    }
    best.map(|(_, d)| d)
}

/// SVD of `m` with the tightest reconstruction among a few thresholds.
fn refined_svd<T: ComplexField<RealField = f64>>(m: DMatrix<T>, target: f64) -> Option<(f64, Decomposition<T>)> {
    let residual = |d: &Decomposition<T>| (d.clone().recompose().expect("u and v computed") - &m).norm();
    let first = SVD::try_new(m.clone(), true, true, 5.0 * f64::EPSILON, FIRST_ATTEMPT_ITERATIONS)?;
    let mut best = (residual(&first), first);
    for eps in [1e-18, 1e-22, 1e-30] {
        if best.0 <= target {
            break;
        }
        if let Some(d) = SVD::try_new(m.clone(), true, true, eps, RETRY_ITERATIONS) {
            let r = residual(&d);
            if r < best.0 {
                best = (r, d);
            }
        }
    }
    Some(best)
}

pub fn frobenius_inner(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn ensure_square(a: &RealMatrix, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

pub fn ensure_finite(a: &RealMatrix) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Flip each column so its first entry of magnitude above `threshold` is
/// positive.
pub fn normalize_column_signs(q: &mut RealMatrix, threshold: f64) {
    for mut col in q.column_iter_mut() {
        if let Some(&lead) = col.iter().find(|x| x.abs() > threshold) {
            if lead < 0.0 {
                col.neg_mut();
            }
        }
    }
}

fn sign_threshold(tol: &Tolerance) -> f64 {
    tol.atol.max(1e-8)
}

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    /// Orthogonal matrix whose columns are the eigenvectors.
    pub vectors: RealMatrix,
}

impl SymEig {
    pub fn reconstruct(&self) -> RealMatrix {
        let d = DMatrix::from_diagonal(&DVector::from_column_slice(&self.values));
        &self.vectors * d * self.vectors.transpose()
    }
}

pub fn sym_eig(a: &RealMatrix, tol: &Tolerance) -> Result<SymEig> {
    let n = ensure_square(a, "sym_eig input")?;
    ensure_finite(a)?;
    if n == 0 {
        return Ok(SymEig {
            values: vec![],
            vectors: RealMatrix::zeros(0, 0),
        });
    }
    let deviation = op_norm(&(a - a.transpose()));
    if deviation > tol.effective(a) {
        return Err(Error::NotSymmetric { deviation });
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    normalize_column_signs(&mut vectors, sign_threshold(tol));
    Ok(SymEig { values, vectors })
}

/// Thin singular value decomposition `a = U·diag(σ)·Vᵀ` with `σ`
/// descending; `U` is `m×r`, `V` is `n×r` where `r = min(m, n)`. Both are
/// orthogonal when `a` is square.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: RealMatrix,
    pub sigma: Vec<f64>,
    pub v: RealMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> RealMatrix {
        let d = DMatrix::from_diagonal(&DVector::from_column_slice(&self.sigma));
        &self.u * d * self.v.transpose()
    }
}

pub fn svd(a: &RealMatrix) -> Result<Svd> {
    ensure_finite(a)?;
    let (m, n) = a.shape();
    let r = m.min(n);
    if r == 0 {
        return Ok(Svd {
            u: RealMatrix::zeros(m, 0),
            sigma: vec![],
            v: RealMatrix::zeros(n, 0),
        });
    }
    let dec = checked_svd(a.clone()).ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = dec.u.expect("u requested");
    let v = dec.v_t.expect("v requested").transpose();
    Ok(Svd {
        u,
        sigma: dec.singular_values.iter().copied().collect(),
        v,
    })
}

/// Polar factors `a = q·p` with `q` orthogonal and `p = (aᵀa)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub q: RealMatrix,
    pub p: RealMatrix,
}

pub fn polar(a: &RealMatrix, tol: &Tolerance) -> Result<Polar> {
    ensure_square(a, "polar input")?;
    let dec = svd(a)?;
    let sigma_min = dec.sigma.last().copied().unwrap_or(0.0);
    let sigma_max = dec.sigma.first().copied().unwrap_or(0.0);
    if a.nrows() == 0 || sigma_min <= tol.at_scale(sigma_max) {
        return Err(Error::Singular { sigma_min });
    }
    let q = &dec.u * dec.v.transpose();
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(&dec.sigma));
    let p = &dec.v * d * dec.v.transpose();
    Ok(Polar { q, p })
}

/// Singular values of `a`, descending. Tall systems are first reduced to
/// their triangular QR factor.
fn singular_system(a: &RealMatrix) -> (Vec<f64>, RealMatrix) {
    let (rows, cols) = a.shape();
    let reduced = if rows > 2 * cols {
        a.clone().qr().r()
    } else if rows < cols {
        let mut padded = RealMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let dec = checked_svd(reduced).expect("kernel input is finite");
    let v = dec.v_t.expect("v requested").transpose();
    (dec.singular_values.iter().copied().collect(), v)
}

/// Orthonormal basis (as columns) of the numerical kernel of `a`.
///
/// The rank cutoff is `atol + rtol·σ_max`.
pub fn nullspace(a: &RealMatrix, tol: &Tolerance) -> RealMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return RealMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return RealMatrix::identity(cols, cols);
    }
    let (sigma, v) = singular_system(a);
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.at_scale(sigma_max);
    let kernel: Vec<usize> = (0..cols)
        .filter(|&i| sigma.get(i).is_none_or(|&s| s <= cutoff))
        .collect();
    let mut basis = RealMatrix::zeros(cols, kernel.len());
    for (dst, &src) in kernel.iter().enumerate() {
        basis.set_column(dst, &v.column(src));
    }
    normalize_column_signs(&mut basis, sign_threshold(tol));
    basis
}

/// Numerical rank with the same cutoff as [`nullspace`].
pub fn rank(a: &RealMatrix, tol: &Tolerance) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sigma = checked_svd(a.clone()).expect("rank input is finite").singular_values;
    let cutoff = tol.at_scale(sigma.max());
    sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis (Frobenius pairing) of the span of `vectors`, built by
/// Gram–Schmidt with re-orthogonalisation in input order.
pub fn span_basis(vectors: &[RealMatrix], tol: &Tolerance) -> Result<Vec<RealMatrix>> {
    let Some(first) = vectors.first() else {
        return Ok(vec![]);
    };
    let shape = first.shape();
    if let Some(bad) = vectors.iter().find(|v| v.shape() != shape) {
        return Err(Error::Shape(format!(
            "span_basis expects {}x{} inputs, got {}x{}",
            shape.0,
            shape.1,
            bad.nrows(),
            bad.ncols()
        )));
    }
    let max_norm = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let threshold = tol.at_scale(max_norm);
    let mut basis: Vec<RealMatrix> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = frobenius_inner(b, &r);
                r -= b * c;
            }
        }
        let norm = r.norm();
        if norm > threshold {
            basis.push(r / norm);
        }
    }
    Ok(basis)
}

/// Residual of projecting `m` onto the span of an orthonormal `basis`.
pub fn span_residual(basis: &[RealMatrix], m: &RealMatrix) -> f64 {
    let mut r = m.clone();
    for b in basis {
        let c = frobenius_inner(b, &r);
        r -= b * c;
    }
    r.norm()
}

pub fn is_symmetric(a: &RealMatrix, tol: &Tolerance) -> bool {
    a.is_square() && op_norm(&(a - a.transpose())) <= tol.effective(a)
}

pub fn is_psd(a: &RealMatrix, tol: &Tolerance) -> Result<bool> {
    ensure_square(a, "is_psd input")?;
    if a.nrows() == 0 {
        return Ok(true);
    }
    if !is_symmetric(a, tol) {
        return Ok(false);
    }
    let eig = sym_eig(a, tol)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    Ok(min >= -tol.effective(a))
}

/// Most negative eigenvalue and its eigenvector of the symmetric part of `a`.
pub fn min_eigenpair(a: &RealMatrix, tol: &Tolerance) -> Result<(f64, DVector<f64>)> {
    let n = ensure_square(a, "min_eigenpair input")?;
    if n == 0 {
        return Ok((0.0, DVector::zeros(0)));
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym_eig(&sym, tol)?;
    Ok((eig.values[n - 1], eig.vectors.column(n - 1).into_owned()))
}

/// Square root of a PSD matrix; small negative eigenvalues are clipped.
pub fn psd_sqrt(a: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
    let eig = sym_eig(a, tol)?;
    let d: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(&eig.vectors * DMatrix::from_diagonal(&DVector::from_vec(d)) * eig.vectors.transpose())
}

/// Inverse square root of a positive definite matrix.
pub fn pd_inv_sqrt(a: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
    let eig = sym_eig(a, tol)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min <= tol.effective(a) {
        return Err(Error::Singular { sigma_min: min });
    }
    let d: Vec<f64> = eig.values.iter().map(|&x| 1.0 / x.sqrt()).collect();
    Ok(&eig.vectors * DMatrix::from_diagonal(&DVector::from_vec(d)) * eig.vectors.transpose())
}

pub fn block_diag(blocks: &[RealMatrix]) -> RealMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = RealMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn is_orthogonal(q: &RealMatrix, tol: &Tolerance) -> bool {
    q.is_square() && is_isometry(q, tol)
}

/// `qᵀq = I` within tolerance.
pub fn is_isometry(q: &RealMatrix, tol: &Tolerance) -> bool {
    let n = q.ncols();
    op_norm(&(q.transpose() * q - RealMatrix::identity(n, n))) <= tol.at_scale(1.0)
}

/// Orthogonal projection onto the column span of an isometry.
pub fn range_projection(isometry: &RealMatrix) -> RealMatrix {
    isometry * isometry.transpose()
}

/// Matrix with `rows` rows from a row-major slice.
pub fn from_rows(rows: usize, cols: usize, data: &[f64]) -> RealMatrix {
    RealMatrix::from_row_slice(rows, cols, data)
}
