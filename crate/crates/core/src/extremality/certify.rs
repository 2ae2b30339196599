use std::sync::Arc;

use crate::algebra::ConcreteAlgebra;
use crate::cpmaps::{direct_sum, pi_map, rho_map, UcpMap};
use crate::error::{Error, Result};
use crate::numerics::{
    block_diag, is_psd, op_norm, pd_inv_sqrt, psd_sqrt, svd, RealMatrix, Tolerance,
};
use crate::stinespring::StinespringTriple;

fn commutes_with(t: &RealMatrix, reps: &[RealMatrix], tol: &Tolerance) -> bool {
    let scale = op_norm(t).max(1.0);
    reps.iter()
        .all(|r| op_norm(&(t * r - r * t)) <= tol.at_scale(scale * op_norm(r).max(1.0)))
}

fn is_invertible(a: &RealMatrix, tol: &Tolerance) -> Result<bool> {
    if a.is_empty() {
        return Ok(true);
    }
    let dec = svd(a)?;
    let smax = dec.sigma[0];
    Ok(dec.sigma.len() == a.ncols() && *dec.sigma.last().unwrap() > tol.at_scale(smax).max(1e-12))
}

/// Checks `S ∈ π(A)′`, `SᵀS = D`, `SVVᵀ = VVᵀSVVᵀ` and `VᵀSV` invertible.
///
/// Errors when `D` is not a positive element of the commutant with `VᵀDV`
/// invertible.
pub fn verify_cstar_certificate(
    triple: &StinespringTriple,
    d: &RealMatrix,
    s: &RealMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    let k = triple.kdim;
    if d.shape() != (k, k) || s.shape() != (k, k) {
        return Err(Error::Shape(format!(
            "certificate operators must be {k}x{k}"
        )));
    }
    let check = tol.scaled(1e3);
    if !is_psd(d, &check)? {
        return Err(Error::Precondition("D is not positive semidefinite".into()));
    }
    if !commutes_with(d, &triple.rep_values, &check) {
        return Err(Error::Precondition(
            "D does not commute with the representation".into(),
        ));
    }
    let v = &triple.isometry;
    if !is_invertible(&(v.transpose() * d * v), &check)? {
        return Err(Error::Precondition("VᵀDV is not invertible".into()));
    }
    if !commutes_with(s, &triple.rep_values, &check) {
        return Ok(false);
    }
    let scale = op_norm(d).max(1.0);
    if op_norm(&(s.transpose() * s - d)) > check.at_scale(scale) {
        return Ok(false);
    }
    let p = v * v.transpose();
    if op_norm(&(s * &p - &p * s * &p)) > check.at_scale(op_norm(s).max(1.0)) {
        return Ok(false);
    }
    is_invertible(&(v.transpose() * s * v), &check)
}

/// `S` with `Sπ(a)Vh = π(a)VZh`, built as `[π(b_i)VZ]·[π(b_i)V]⁺`.
///
/// When `Ψ = VᵀDπ(·)V = Ad_Z ∘ Φ` this `S` certifies `D`.
pub fn certificate_from_similarity(
    triple: &StinespringTriple,
    z: &RealMatrix,
) -> Result<RealMatrix> {
    let k = triple.kdim;
    let m = triple.isometry.ncols();
    if z.shape() != (m, m) {
        return Err(Error::Shape(format!("similarity must be {m}x{m}")));
    }
    let d = triple.rep_values.len();
    let mut span = RealMatrix::zeros(k, d * m);
    let mut image = RealMatrix::zeros(k, d * m);
    for (i, r) in triple.rep_values.iter().enumerate() {
        let rv = r * &triple.isometry;
        image.columns_mut(i * m, m).copy_from(&(&rv * z));
        span.columns_mut(i * m, m).copy_from(&rv);
    }
    let dec = svd(&span)?;
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let mut pinv = RealMatrix::zeros(d * m, k);
    for (j, &s) in dec.sigma.iter().enumerate() {
        if s > 1e-12 * smax.max(1.0) {
            pinv += dec.v.column(j) * dec.u.column(j).transpose() / s;
        }
    }
    Ok(image * pinv)
}

/// `(I ⊗ Π_w) ⊕ ρ_w` with `pairs` copies of `Π_w`, together with its
/// minimal dilation `π = I ⊗ Π_w` on `R^{2·pairs+2}` and
/// `V = I_{2·pairs} ⊕ e₁`.
pub fn type_w_dilation(
    domain: Arc<ConcreteAlgebra>,
    w: usize,
    pairs: usize,
    tol: &Tolerance,
) -> Result<(UcpMap, StinespringTriple)> {
    let pi = pi_map(domain.clone(), w)?;
    let rho = rho_map(domain, w)?;
    let mut parts = vec![pi.clone(); pairs];
    parts.push(rho);
    let phi = direct_sum(&parts, tol)?;
    let n = 2 * pairs + 1;
    let rep_values = (0..pi.values().len())
        .map(|i| block_diag(&vec![pi.values()[i].clone(); pairs + 1]))
        .collect();
    let mut v = RealMatrix::zeros(n + 1, n);
    for i in 0..n {
        v[(i, i)] = 1.0;
    }
    Ok((
        phi,
        StinespringTriple {
            kdim: n + 1,
            rep_values,
            isometry: v,
        },
    ))
}

/// The invertible `X = [[Y^{1/2}, Y^{-1/2}WV₀], [0, β]]` with
/// `Ψ = VᵀDπ(·)V = XᵀΦX`, for `D = [[Y, W], [Wᵀ, αI₂]]` in the commutant of
/// the dilation from [`type_w_dilation`].
pub fn type_w_similarity(d: &RealMatrix, pairs: usize, tol: &Tolerance) -> Result<RealMatrix> {
    let n = 2 * pairs + 1;
    if d.shape() != (n + 1, n + 1) {
        return Err(Error::Shape(format!("density must be {0}x{0}", n + 1)));
    }
    let alpha = d[(n - 1, n - 1)];
    let mut x = RealMatrix::zeros(n, n);
    if pairs == 0 {
        if alpha <= tol.at_scale(1.0) {
            return Err(Error::Precondition("VᵀDV is not invertible".into()));
        }
        x[(0, 0)] = alpha.sqrt();
        return Ok(x);
    }
    let y = d.view((0, 0), (n - 1, n - 1)).into_owned();
    let wv0 = d.view((0, n - 1), (n - 1, 1)).into_owned();
    let y_inv_sqrt =
        pd_inv_sqrt(&y, tol).map_err(|_| Error::Precondition("VᵀDV is not invertible".into()))?;
    let r = &y_inv_sqrt * &wv0;
    let beta_sq = alpha - r.norm_squared();
    if beta_sq <= tol.at_scale(1.0) {
        return Err(Error::Precondition("VᵀDV is not invertible".into()));
    }
    x.view_mut((0, 0), (n - 1, n - 1))
        .copy_from(&psd_sqrt(&y, tol)?);
    x.view_mut((0, n - 1), (n - 1, 1)).copy_from(&r);
    x[(n - 1, n - 1)] = beta_sq.sqrt();
    Ok(x)
}
