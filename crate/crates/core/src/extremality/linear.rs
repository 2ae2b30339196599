use super::{find_unitary_equivalence, ExtremalityOptions};
use crate::algebra::{commutant, symmetric_part};
use crate::cpmaps::{cstar_combine, CStarCombination, UcpMap};
use crate::error::Result;
use crate::numerics::{nullspace, op_norm, RealMatrix};
use crate::stinespring::{minimal_stinespring, StinespringTriple};

/// A proper C*-convex decomposition of `Φ` with a term that is not
/// unitarily equivalent to `Φ`.
#[derive(Debug, Clone)]
pub struct NonExtremalityWitness {
    pub combination: CStarCombination,
    pub inequivalent_index: usize,
}

/// Symmetric elements `T` of `π(A)′` with `VᵀTV = 0`, normalised to unit
/// operator norm.
pub fn linear_kernel(
    triple: &StinespringTriple,
    opts: &ExtremalityOptions,
) -> Result<Vec<RealMatrix>> {
    let tol = &opts.tol;
    let comm = commutant(triple.kdim, &triple.rep_values, tol)?;
    let sym = symmetric_part(&comm.basis, tol)?;
    let m = triple.isometry.ncols();
    let v = &triple.isometry;
    let mut system = RealMatrix::zeros(m * m, sym.len());
    for (s, t) in sym.iter().enumerate() {
        let c = v.transpose() * t * v;
        system.column_mut(s).copy_from_slice(c.as_slice());
    }
    let kernel = nullspace(&system, tol);
    Ok(kernel
        .column_iter()
        .map(|coeffs| {
            let t = coeffs.iter().zip(&sym).fold(
                RealMatrix::zeros(triple.kdim, triple.kdim),
                |acc, (c, b)| acc + b * *c,
            );
            let n = op_norm(&t);
            t / n
        })
        .collect())
}

/// Linear extremality: `T ↦ VᵀTV` is injective on the symmetric part of
/// the commutant of the minimal dilation.
pub fn is_linear_extreme(phi: &UcpMap, opts: &ExtremalityOptions) -> Result<bool> {
    phi.validate_ucp(&opts.tol)?;
    let triple = minimal_stinespring(phi, &opts.tol)?;
    Ok(linear_kernel(&triple, opts)?.is_empty())
}

/// `Φ = ½Φ₊ + ½Φ₋` with `Φ± = Vᵀ(I ± εT)π(·)V` for a kernel element `T`.
/// `None` when `Φ` is linear-extreme or no scale `ε` yields a term
/// inequivalent to `Φ`.
pub fn linear_nonextremality_witness(
    phi: &UcpMap,
    opts: &ExtremalityOptions,
) -> Result<Option<NonExtremalityWitness>> {
    phi.validate_ucp(&opts.tol)?;
    let triple = minimal_stinespring(phi, &opts.tol)?;
    let kernel = linear_kernel(&triple, opts)?;
    let m = phi.codomain_dim();
    let k = triple.kdim;
    let half = RealMatrix::identity(m, m) * std::f64::consts::FRAC_1_SQRT_2;
    for t in &kernel {
        for eps in [0.5, 0.25, 0.9] {
            let mut terms = Vec::with_capacity(2);
            for sign in [1.0, -1.0] {
                let d = RealMatrix::identity(k, k) + t * (sign * eps);
                let values = (0..triple.rep_values.len())
                    .map(|i| triple.compress_with(&d, i))
                    .collect();
                terms.push((half.clone(), UcpMap::new(phi.domain().clone(), m, values)?));
            }
            let comb = CStarCombination::new(terms, &opts.tol)?;
            for idx in 0..2 {
                let w = NonExtremalityWitness {
                    combination: comb.clone(),
                    inequivalent_index: idx,
                };
                if verify_nonextremality_witness(phi, &w, opts)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// The combination is proper, made of UCP maps, reproduces `Φ`, and the
/// named term admits no orthogonal equivalence with `Φ`.
pub fn verify_nonextremality_witness(
    phi: &UcpMap,
    witness: &NonExtremalityWitness,
    opts: &ExtremalityOptions,
) -> Result<bool> {
    let tol = &opts.tol;
    let comb = &witness.combination;
    let Some((_, named)) = comb.terms().get(witness.inequivalent_index) else {
        return Err(crate::Error::InvalidCombination(format!(
            "index {} is out of range",
            witness.inequivalent_index
        )));
    };
    if comb.codomain_dim() != phi.codomain_dim() || !comb.is_proper(tol) {
        return Ok(false);
    }
    if comb
        .terms()
        .iter()
        .any(|(_, p)| p.validate_ucp(tol).is_err())
    {
        return Ok(false);
    }
    let Ok(combined) = cstar_combine(comb, tol) else {
        return Ok(false);
    };
    if !combined.approx_eq(phi, &tol.scaled(100.0)) {
        return Ok(false);
    }
    Ok(find_unitary_equivalence(phi, named, opts)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_as_real, matrix_algebra, quaternion_algebra, quaternion_units};
    use crate::cpmaps::{direct_sum, inflation, kraus_map, phi_from_skew, pi_map};
    use crate::numerics::{block_diag, from_rows};
    use crate::sampling::{random_isometry, rng};
    use std::sync::Arc;

    fn opts() -> ExtremalityOptions {
        ExtremalityOptions::default()
    }

    fn half() -> RealMatrix {
        RealMatrix::identity(2, 2) * std::f64::consts::FRAC_1_SQRT_2
    }

    #[test]
    fn complex_state_inflation() {
        let o = opts();
        let c = Arc::new(complex_as_real());
        let phi = inflation(c.clone(), &[1.0, 0.0], 2, &o.tol).unwrap();
        assert!(!is_linear_extreme(&phi, &o).unwrap());
        let p1 = pi_map(c.clone(), 0).unwrap();
        let p2 = pi_map(c, 1).unwrap();
        let comb = CStarCombination::new(vec![(half(), p1), (half(), p2)], &o.tol).unwrap();
        let w = NonExtremalityWitness {
            combination: comb,
            inequivalent_index: 0,
        };
        assert!(verify_nonextremality_witness(&phi, &w, &o).unwrap());
        assert!(linear_nonextremality_witness(&phi, &o).unwrap().is_some());
    }

    fn quaternion_halves() -> (UcpMap, UcpMap) {
        let h = Arc::new(quaternion_algebra());
        let one = RealMatrix::identity(2, 2);
        let j = crate::algebra::rotation_generator();
        let zero = RealMatrix::zeros(2, 2);
        // α + βi + γj + δk ↦ [[α, ±β], [∓β, α]]
        let p1 = UcpMap::new(
            h.clone(),
            2,
            vec![one.clone(), j.clone(), zero.clone(), zero.clone()],
        )
        .unwrap();
        let p2 = UcpMap::new(h, 2, vec![one, -j, zero.clone(), zero]).unwrap();
        (p1, p2)
    }

    #[test]
    fn quaternion_state_inflation() {
        let o = opts();
        let h = Arc::new(quaternion_algebra());
        let phi = inflation(h, &[1.0, 0.0, 0.0, 0.0], 2, &o.tol).unwrap();
        assert!(!is_linear_extreme(&phi, &o).unwrap());
        let (p1, p2) = quaternion_halves();
        let comb = CStarCombination::new(vec![(half(), p1), (half(), p2)], &o.tol).unwrap();
        let w = NonExtremalityWitness {
            combination: comb,
            inequivalent_index: 0,
        };
        assert!(verify_nonextremality_witness(&phi, &w, &o).unwrap());
    }

    #[test]
    fn quaternion_block_sum() {
        let o = opts();
        let h = Arc::new(quaternion_algebra());
        let [e, i, j, k] = quaternion_units();
        let pi = UcpMap::new(
            h.clone(),
            4,
            vec![e.clone(), i.clone(), j.clone(), k.clone()],
        )
        .unwrap();
        // Φ(α+βi+γj+δk) = [[α,−β],[β,α]] ⊕ [[α,−β],[β,α]]
        let blk = |m: &RealMatrix| {
            block_diag(&[
                m.view((0, 0), (2, 2)).into_owned(),
                m.view((0, 0), (2, 2)).into_owned(),
            ])
        };
        let phi = UcpMap::new(
            h.clone(),
            4,
            vec![
                blk(&e),
                blk(&i),
                RealMatrix::zeros(4, 4),
                RealMatrix::zeros(4, 4),
            ],
        )
        .unwrap();
        let second = from_rows(
            4,
            4,
            &[
                1., 0., 0., 0., //
                0., 1., 0., 0., //
                0., 0., -1., 0., //
                0., 0., 0., -1.,
            ],
        );
        // Φ₂(q) displayed: conjugation of π by diag(1,1,−1,−1).
        let p2 = UcpMap::new(
            h,
            4,
            pi.values().iter().map(|v| &second * v * &second).collect(),
        )
        .unwrap();
        let h4 = RealMatrix::identity(4, 4) * std::f64::consts::FRAC_1_SQRT_2;
        let comb = CStarCombination::new(vec![(h4.clone(), pi), (h4, p2)], &o.tol).unwrap();
        let w = NonExtremalityWitness {
            combination: comb,
            inequivalent_index: 0,
        };
        assert!(verify_nonextremality_witness(&phi, &w, &o).unwrap());
        assert!(!is_linear_extreme(&phi, &o).unwrap());
    }

    #[test]
    fn unbalanced_coefficients_are_rejected() {
        let o = opts();
        let c = Arc::new(complex_as_real());
        let p1 = pi_map(c.clone(), 0).unwrap();
        let p2 = pi_map(c, 1).unwrap();
        let comb =
            CStarCombination::new(vec![(RealMatrix::identity(2, 2), p1), (half(), p2)], &o.tol);
        assert!(comb.is_err());
    }

    #[test]
    fn linear_extreme_examples() {
        let o = opts();
        let c = Arc::new(complex_as_real());
        assert!(is_linear_extreme(&pi_map(c, 0).unwrap(), &o).unwrap());
        let dom = Arc::new(matrix_algebra(3).unwrap());
        let v = random_isometry(3, 2, &mut rng(1));
        assert!(is_linear_extreme(&kraus_map(dom, &[v]).unwrap(), &o).unwrap());
        // ‖S‖ < 1 is never extreme.
        let s = crate::algebra::rotation_generator() * 0.5;
        let phi = phi_from_skew(&s, &o.tol).unwrap();
        assert!(!is_linear_extreme(&phi, &o).unwrap());
        let w = linear_nonextremality_witness(&phi, &o).unwrap().unwrap();
        assert!(verify_nonextremality_witness(&phi, &w, &o).unwrap());
        let sum = direct_sum(&[phi.clone(), phi], &o.tol).unwrap();
        assert!(!is_linear_extreme(&sum, &o).unwrap());
    }
}
