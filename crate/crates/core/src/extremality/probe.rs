use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ExtremalityOptions;
use crate::algebra::{commutant, AlgebraKind};
use crate::cpmaps::UcpMap;
use crate::error::{Error, Result};
use crate::numerics::complex::{self, from_real, hermitian_eig, ComplexMatrix};
use crate::numerics::RealMatrix;
use crate::sampling::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// `Φ_c` is C*-extreme, hence so is `Φ`.
    Yes,
    /// The complexification gives no information.
    NoInference,
}

/// Sufficient test on `M_n(R)`: `Φ` is C*-extreme when `Φ_c` is a direct sum
/// of compressions `Ad_{W_j}` of the identity representation of `M_n(C)`
/// with nested ranges. Never concludes non-extremality.
pub fn complexification_extremality_probe(
    phi: &UcpMap,
    opts: &ExtremalityOptions,
) -> Result<ProbeOutcome> {
    let AlgebraKind::Matrix(n) = *phi.kind() else {
        return Err(Error::WrongDomain { expected: "matrix" });
    };
    phi.validate_ucp(&opts.tol)?;
    for attempt in 0..2u64 {
        if certify_complex_nesting(phi, n, opts, opts.seed.wrapping_add(attempt))? {
            return Ok(ProbeOutcome::Yes);
        }
    }
    Ok(ProbeOutcome::NoInference)
}

fn certify_complex_nesting(
    phi: &UcpMap,
    n: usize,
    opts: &ExtremalityOptions,
    seed: u64,
) -> Result<bool> {
    let tol = &opts.tol;
    let m = phi.codomain_dim();
    // The complex commutant of a real family is the complexified real
    // commutant, so `A + iB` with `A` symmetric and `B` antisymmetric parts
    // of real commutant elements is a generic Hermitian element of it.
    let comm = commutant(m, phi.values(), tol)?;
    let mut g = rng(seed);
    let mut a = RealMatrix::zeros(m, m);
    let mut b = RealMatrix::zeros(m, m);
    for c in &comm.basis {
        let x: f64 = g.sample(StandardNormal);
        let y: f64 = g.sample(StandardNormal);
        a += (c + c.transpose()) * (0.5 * x);
        b += (c - c.transpose()) * (0.5 * y);
    }
    let h = complex::from_parts(&a, &b);
    let eig = hermitian_eig(&h, tol)?;
    let spread = eig.values[0] - eig.values[m - 1];
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..m {
        if eig.values[i - 1] - eig.values[i] > 1e-6 * spread {
            groups.push((start, i - start));
            start = i;
        }
    }
    groups.push((start, m - start));

    let check = tol.scaled(1e3);
    let values: Vec<ComplexMatrix> = phi.values().iter().map(from_real).collect();
    let q = &eig.vectors;
    for v in &values {
        let inner = q.adjoint() * v * q;
        for &(s1, l1) in &groups {
            for &(s2, l2) in &groups {
                if s1 != s2
                    && complex::op_norm(&inner.view((s1, s2), (l1, l2)).into_owned())
                        > check.at_scale(1.0)
                {
                    return Ok(false);
                }
            }
        }
    }

    let mut projections = Vec::with_capacity(groups.len());
    for &(s, k) in &groups {
        let qj = q.columns(s, k).into_owned();
        let dim = n * k;
        let mut choi = ComplexMatrix::zeros(dim, dim);
        for i in 0..n {
            for j in 0..n {
                let block = qj.adjoint() * &values[i * n + j] * &qj;
                choi.view_mut((i * k, j * k), (k, k)).copy_from(&block);
            }
        }
        if complex::rank(&choi, &check) != 1 {
            return Ok(false);
        }
        let ce = hermitian_eig(&choi, &check)?;
        let lambda = ce.values[0];
        // Choi[(i,p),(j,q)] = conj(W_ip)·W_jq for Φ_j = Ad_W.
        let u = ce.vectors.column(0) * Complex64::new(lambda.sqrt(), 0.0);
        let w = ComplexMatrix::from_fn(n, k, |i, p| u[i * k + p].conj());
        projections.push(&w * w.adjoint());
    }
    projections.sort_by_key(|p| std::cmp::Reverse(p.trace().re.round() as i64));
    let nest = check.at_scale(1.0).max(1e-8);
    Ok(projections
        .windows(2)
        .all(|p| complex::op_norm(&(&p[0] * &p[1] - &p[1])) <= nest))
}
