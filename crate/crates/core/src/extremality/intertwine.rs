use rand::Rng;
use rand_distr::StandardNormal;

use super::ExtremalityOptions;
use crate::algebra::intertwiners;
use crate::cpmaps::UcpMap;
use crate::error::Result;
use crate::numerics::{op_norm, polar, svd, RealMatrix, Tolerance};
use crate::sampling::rng;
use crate::stinespring::minimal_stinespring;

/// Basis of `{T : T·f1[i] = f2[i]·T}`, Frobenius-orthonormal.
pub fn intertwiner_space(
    k1: usize,
    f1: &[RealMatrix],
    k2: usize,
    f2: &[RealMatrix],
    tol: &Tolerance,
) -> Result<Vec<RealMatrix>> {
    intertwiners(k1, f1, k2, f2, tol)
}

/// Disjointness of the minimal dilations.
pub fn are_disjoint(phi1: &UcpMap, phi2: &UcpMap, tol: &Tolerance) -> Result<bool> {
    if !phi1.same_domain(phi2, tol) {
        return Err(crate::Error::DomainMismatch(
            "maps have different domains".into(),
        ));
    }
    let t1 = minimal_stinespring(phi1, tol)?;
    let t2 = minimal_stinespring(phi2, tol)?;
    Ok(intertwiners(t1.kdim, &t1.rep_values, t2.kdim, &t2.rep_values, tol)?.is_empty())
}

/// Orthogonal `U` with `Φ₁ = Ad_U ∘ Φ₂`, i.e. `UΦ₁(·) = Φ₂(·)U`.
pub fn find_unitary_equivalence(
    phi1: &UcpMap,
    phi2: &UcpMap,
    opts: &ExtremalityOptions,
) -> Result<Option<RealMatrix>> {
    if !phi1.same_domain(phi2, &opts.tol) {
        return Err(crate::Error::DomainMismatch(
            "maps have different domains".into(),
        ));
    }
    if phi1.codomain_dim() != phi2.codomain_dim() {
        return Ok(None);
    }
    orthogonal_intertwiner(phi1.codomain_dim(), phi1.values(), phi2.values(), opts)
}

/// Orthogonal `U` with `U·f1[i] = f2[i]·U` for `*`-closed families of
/// `k×k` matrices.
///
/// Any invertible intertwiner has an intertwining polar factor, so the
/// search scans the intertwiner space for an invertible element: single
/// basis elements, then `B_s + λB_{s+1}` for `λ = 0..=d`, then 32 seeded
/// Gaussian combinations. A returned `U` is always verified; `None` after
/// the scan is numerical evidence, not proof.
pub fn orthogonal_intertwiner(
    k: usize,
    f1: &[RealMatrix],
    f2: &[RealMatrix],
    opts: &ExtremalityOptions,
) -> Result<Option<RealMatrix>> {
    let tol = &opts.tol;
    let basis = intertwiners(k, f1, k, f2, tol)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let d = basis.len();
    let attempt = |s: &RealMatrix| -> Option<RealMatrix> {
        let dec = svd(s).ok()?;
        let smax = dec.sigma.first().copied()?;
        let smin = dec.sigma.last().copied()?;
        if smax == 0.0 || smin < 1e-6 * smax {
            return None;
        }
        let u = polar(s, tol).ok()?.q;
        verify_intertwiner(&u, f1, f2, tol).then_some(u)
    };
    for b in &basis {
        if let Some(u) = attempt(b) {
            return Ok(Some(u));
        }
    }
    for s in 0..d.saturating_sub(1) {
        for lambda in 0..=d {
            if let Some(u) = attempt(&(&basis[s] + &basis[s + 1] * lambda as f64)) {
                return Ok(Some(u));
            }
        }
    }
    let mut g = rng(opts.seed);
    for _ in 0..32 {
        let mut s = RealMatrix::zeros(k, k);
        for b in &basis {
            let c: f64 = g.sample(StandardNormal);
            s += b * c;
        }
        if let Some(u) = attempt(&s) {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

pub(crate) fn verify_intertwiner(
    u: &RealMatrix,
    f1: &[RealMatrix],
    f2: &[RealMatrix],
    tol: &Tolerance,
) -> bool {
    let k = u.nrows();
    let check = tol.scaled(1e3);
    if op_norm(&(u.transpose() * u - RealMatrix::identity(k, k))) > check.at_scale(1.0) {
        return false;
    }
    f1.iter().zip(f2).all(|(a, b)| {
        let scale = op_norm(a).max(op_norm(b));
        op_norm(&(u * a - b * u)) <= check.at_scale(scale)
    })
}
