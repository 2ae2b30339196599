use rand::Rng;
use rand_distr::StandardNormal;

use super::ExtremalityOptions;
use crate::algebra::{commutant, symmetric_part};
use crate::cpmaps::UcpMap;
use crate::error::{Error, Result};
use crate::numerics::{sym_eig, RealMatrix};
use crate::sampling::{rng, SeededRng};

/// `Ad_Q ∘ Φ = ⊕ summands` with `Q = block_unitary`.
#[derive(Debug, Clone)]
pub struct IrreducibleDecomposition {
    pub block_unitary: RealMatrix,
    pub summands: Vec<UcpMap>,
    pub dims: Vec<usize>,
}

impl IrreducibleDecomposition {
    /// Column offset of each summand in `block_unitary`.
    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect()
    }

    /// The columns of `block_unitary` carrying summand `j`.
    pub fn block(&self, j: usize) -> RealMatrix {
        let o = self.offsets()[j];
        self.block_unitary.columns(o, self.dims[j]).into_owned()
    }
}

/// Splits `Φ` along spectral projections of generic symmetric elements of
/// the commutant of its values until every block is irreducible.
pub fn decompose_irreducible(
    phi: &UcpMap,
    opts: &ExtremalityOptions,
) -> Result<IrreducibleDecomposition> {
    let m = phi.codomain_dim();
    let mut g = rng(opts.seed);
    let mut leaves = Vec::new();
    let mut budget = m;
    split(
        phi.values(),
        RealMatrix::identity(m, m),
        opts,
        &mut g,
        &mut leaves,
        &mut budget,
    )?;
    let dims: Vec<usize> = leaves.iter().map(|q| q.ncols()).collect();
    let mut block_unitary = RealMatrix::zeros(m, m);
    let mut offset = 0;
    let mut summands = Vec::with_capacity(leaves.len());
    for q in &leaves {
        block_unitary.columns_mut(offset, q.ncols()).copy_from(q);
        offset += q.ncols();
        let values = phi.values().iter().map(|v| q.transpose() * v * q).collect();
        summands.push(UcpMap::new(phi.domain().clone(), q.ncols(), values)?);
    }
    Ok(IrreducibleDecomposition {
        block_unitary,
        summands,
        dims,
    })
}

fn split(
    values: &[RealMatrix],
    q: RealMatrix,
    opts: &ExtremalityOptions,
    g: &mut SeededRng,
    leaves: &mut Vec<RealMatrix>,
    budget: &mut usize,
) -> Result<()> {
    let tol = &opts.tol;
    let k = q.ncols();
    let family: Vec<RealMatrix> = values.iter().map(|v| q.transpose() * v * &q).collect();
    let comm = commutant(k, &family, tol)?;
    let sym = symmetric_part(&comm.basis, tol)?;
    if sym.len() <= 1 {
        leaves.push(q);
        return Ok(());
    }
    if *budget == 0 {
        return Err(Error::Numerical(
            "decomposition exceeded the number of possible splits".into(),
        ));
    }
    *budget -= 1;
    for _attempt in 0..2 {
        let mut c = RealMatrix::zeros(k, k);
        for s in &sym {
            let x: f64 = g.sample(StandardNormal);
            c += s * x;
        }
        let eig = sym_eig(&c, tol)?;
        let spread = eig.values[0] - eig.values[k - 1];
        let gap = 1e-6 * spread;
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..k {
            if eig.values[i - 1] - eig.values[i] > gap {
                groups.push((start, i - start));
                start = i;
            }
        }
        groups.push((start, k - start));
        if spread > tol.at_scale(1.0) && groups.len() > 1 {
            for (s, len) in groups {
                let sub = &q * eig.vectors.columns(s, len);
                split(values, sub, opts, g, leaves, budget)?;
            }
            return Ok(());
        }
    }
    Err(Error::Numerical(
        "generic commutant element has no spectral gap after a reseeded retry".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        commutative_algebra, complex_as_real, is_irreducible, InvolutiveFiniteSpace,
    };
    use crate::cpmaps::{ad_conjugate, direct_sum, inflation, pi_map, rho_map};
    use crate::numerics::{block_diag, is_orthogonal, op_norm};
    use crate::sampling::random_orthogonal;
    use std::sync::Arc;

    fn check(phi: &UcpMap, dec: &IrreducibleDecomposition, o: &ExtremalityOptions) {
        assert!(is_orthogonal(&dec.block_unitary, &o.tol.scaled(100.0)));
        assert_eq!(dec.dims.iter().sum::<usize>(), phi.codomain_dim());
        for (i, v) in phi.values().iter().enumerate() {
            let lhs = dec.block_unitary.transpose() * v * &dec.block_unitary;
            let rhs = block_diag(
                &dec.summands
                    .iter()
                    .map(|s| s.values()[i].clone())
                    .collect::<Vec<_>>(),
            );
            assert!(op_norm(&(lhs - rhs)) < 1e-9);
        }
        for s in &dec.summands {
            assert!(is_irreducible(s.codomain_dim(), s.values(), &o.tol).unwrap());
        }
    }

    #[test]
    fn decomposition_examples() {
        let o = ExtremalityOptions::default();
        let space = InvolutiveFiniteSpace::new(vec!["1".into(), "2".into()], vec![1, 0]).unwrap();
        let dom = Arc::new(commutative_algebra(space).unwrap());
        let pr = direct_sum(
            &[
                pi_map(dom.clone(), 0).unwrap(),
                rho_map(dom.clone(), 0).unwrap(),
            ],
            &o.tol,
        )
        .unwrap();
        let conj = ad_conjugate(&pr, &random_orthogonal(3, &mut rng(4))).unwrap();
        for phi in [&pr, &conj] {
            let dec = decompose_irreducible(phi, &o).unwrap();
            let mut dims = dec.dims.clone();
            dims.sort_unstable();
            assert_eq!(dims, vec![1, 2]);
            check(phi, &dec, &o);
        }

        let pi = pi_map(dom, 1).unwrap();
        let dec = decompose_irreducible(&pi, &o).unwrap();
        assert_eq!(dec.dims, vec![2]);

        let c = Arc::new(complex_as_real());
        let re = inflation(c, &[1.0, 0.0], 2, &o.tol).unwrap();
        let dec = decompose_irreducible(&re, &o).unwrap();
        assert_eq!(dec.dims, vec![1, 1]);
        check(&re, &dec, &o);
    }
}
