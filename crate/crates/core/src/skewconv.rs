//! Contractive skew-symmetric matrices `{S : Sᵀ = −S, ‖S‖ ≤ 1}` and their
//! extreme points, through the maps `Φ_S(λ) = Re λ·I + Im λ·S`.

use crate::cpmaps::phi_from_skew;
use crate::error::{Error, Result};
use crate::extremality::{is_cstar_extreme, is_linear_extreme, ExtremalityOptions, Verdict};
use crate::numerics::{block_diag, nullspace, op_norm, svd, sym_eig, RealMatrix, Tolerance};

/// Singular values within this distance of 1 (or of 0) count as 1 (or 0).
pub const SPECTRAL_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct SkewContraction {
    n: usize,
    s: RealMatrix,
}

impl SkewContraction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.s
    }

    pub fn norm(&self) -> f64 {
        op_norm(&self.s)
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(svd(&self.s)?.sigma)
    }
}

pub fn validate(s: &RealMatrix, tol: &Tolerance) -> Result<SkewContraction> {
    let n = crate::numerics::ensure_square(s, "skew matrix")?;
    crate::numerics::ensure_finite(s)?;
    let deviation = op_norm(&(s + s.transpose()));
    if deviation > tol.effective(s) {
        return Err(Error::NotSkew { deviation });
    }
    let norm = op_norm(s);
    if norm > 1.0 + tol.at_scale(1.0) {
        return Err(Error::NotContractive { norm });
    }
    Ok(SkewContraction { n, s: s.clone() })
}

/// `Oᵀ S O = 0_k ⊕ t₁J ⊕ … ⊕ t_pJ` with `J = [[0,1],[−1,0]]` and
/// `t₁ ≥ … ≥ t_p > 0`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub orthogonal: RealMatrix,
    pub zero_block: usize,
    pub pairs: Vec<f64>,
}

impl CanonicalForm {
    pub fn block_matrix(&self) -> RealMatrix {
        let mut blocks = vec![RealMatrix::zeros(self.zero_block, self.zero_block)];
        blocks.extend(
            self.pairs
                .iter()
                .map(|&t| crate::algebra::rotation_generator() * t),
        );
        block_diag(&blocks)
    }
}

/// Peels off 2-planes spanned by a top eigenvector `x` of `SᵀS` and
/// `y = −Sx/t`, restricting to the orthogonal complement each round.
pub fn canonical_form(sc: &SkewContraction, tol: &Tolerance) -> Result<CanonicalForm> {
    let s = &sc.s;
    let n = sc.n;
    let cutoff = tol.effective(s).max(1e-12);
    let mut rest = RealMatrix::identity(n, n);
    let mut planes: Vec<(f64, RealMatrix)> = Vec::new();
    while rest.ncols() >= 2 {
        let r = rest.ncols();
        let local = rest.transpose() * s * &rest;
        let eig = sym_eig(&(local.transpose() * &local), tol)?;
        let x = eig.vectors.column(0).into_owned();
        let sx = &local * &x;
        let t = sx.norm();
        if t <= cutoff {
            break;
        }
        let y = -sx / t;
        let mut pair = RealMatrix::zeros(r, 2);
        pair.set_column(0, &x);
        pair.set_column(1, &y);
        planes.push((t, &rest * &pair));
        let complement = nullspace(&pair.transpose(), tol);
        rest = &rest * complement;
    }
    planes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let zero_block = rest.ncols();
    let mut orthogonal = RealMatrix::zeros(n, n);
    orthogonal.columns_mut(0, zero_block).copy_from(&rest);
    for (i, (_, p)) in planes.iter().enumerate() {
        orthogonal.columns_mut(zero_block + 2 * i, 2).copy_from(p);
    }
    let form = CanonicalForm {
        orthogonal,
        zero_block,
        pairs: planes.iter().map(|(t, _)| *t).collect(),
    };
    let o = &form.orthogonal;
    let err = op_norm(&(o.transpose() * s * o - form.block_matrix()));
    let orth = op_norm(&(o.transpose() * o - RealMatrix::identity(n, n)));
    if err > 1e-8 * sc.norm().max(1.0) || orth > 1e-8 {
        return Err(Error::Numerical(format!(
            "canonical form residual {err:.3e}, orthogonality defect {orth:.3e}"
        )));
    }
    Ok(form)
}

/// Every singular value is 1, except one 0 when `n` is odd.
pub fn is_cstar_extreme_skew(sc: &SkewContraction) -> bool {
    let Ok(sigma) = sc.singular_values() else {
        return false;
    };
    let ones = sc.n - sc.n % 2;
    sigma[..ones]
        .iter()
        .all(|s| (s - 1.0).abs() <= SPECTRAL_THRESHOLD)
        && sigma[ones..].iter().all(|&s| s <= SPECTRAL_THRESHOLD)
}

pub fn is_linear_extreme_skew(sc: &SkewContraction, opts: &ExtremalityOptions) -> Result<bool> {
    is_linear_extreme(&phi_from_skew(&sc.s, &opts.tol)?, opts)
}

/// The general decider applied to `Φ_S` on the two-point encoding of `C`.
pub fn cstar_verdict_via_map(sc: &SkewContraction, opts: &ExtremalityOptions) -> Result<Verdict> {
    Ok(is_cstar_extreme(&phi_from_skew(&sc.s, &opts.tol)?, opts)?.is_cstar_extreme)
}
