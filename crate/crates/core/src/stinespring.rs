//! Minimal Stinespring dilations by the GNS construction, domination and
//! Radon–Nikodym densities.

use nalgebra::DVector;

use crate::algebra::{classify_type, commutant, is_irreducible, RepresentationType};
use crate::cpmaps::UcpMap;
use crate::error::{Error, Result};
use crate::numerics::{op_norm, rank, svd, sym_eig, RealMatrix, Tolerance};

/// `(k, π, V)` with `Φ(b_i) = Vᵀ π(b_i) V`.
#[derive(Debug, Clone)]
pub struct StinespringTriple {
    pub kdim: usize,
    /// `π(b_i)` for each domain basis element.
    pub rep_values: Vec<RealMatrix>,
    /// `k×m` isometry.
    pub isometry: RealMatrix,
}

impl StinespringTriple {
    /// `Vᵀ π(b_i) V`.
    pub fn compress(&self, i: usize) -> RealMatrix {
        self.isometry.transpose() * &self.rep_values[i] * &self.isometry
    }

    /// `Vᵀ T π(b_i) V` for an operator `T` on the dilation space.
    pub fn compress_with(&self, t: &RealMatrix, i: usize) -> RealMatrix {
        self.isometry.transpose() * t * &self.rep_values[i] * &self.isometry
    }

    pub fn representation_type(&self, tol: &Tolerance) -> Result<RepresentationType> {
        Ok(commutant(self.kdim, &self.rep_values, tol)?.type_tag)
    }
}

/// Minimal dilation of a CP map.
///
/// The Gram matrix `G[(i,p),(j,q)] = ⟨e_p, Φ(b_iᵀb_j) e_q⟩` is factored as
/// `XᵀX` with `X = Λ^{1/2}Uᵀ` over its positive spectrum, so the class of
/// `b_j ⊗ e_q` has coordinates `X[:, (j,q)]` in an orthonormal frame.
pub fn minimal_stinespring(phi: &UcpMap, tol: &Tolerance) -> Result<StinespringTriple> {
    phi.validate_cp(tol).map_err(|e| match e {
        Error::NotCompletelyPositive { .. } | Error::NotSelfAdjoint { .. } => e,
        other => Error::Precondition(other.to_string()),
    })?;
    let dom = phi.domain();
    let d = dom.dimension();
    let m = phi.codomain_dim();
    let gram = phi.block_gram();
    let eig = sym_eig(&gram, tol)?;
    let cutoff = tol.at_scale(eig.values.first().copied().unwrap_or(0.0));
    let k = eig.values.iter().take_while(|&&x| x > cutoff).count();
    if k == 0 {
        return Err(Error::Precondition(
            "map is zero; there is nothing to dilate".into(),
        ));
    }
    let u = eig.vectors.columns(0, k).into_owned();
    let sqrt = DVector::from_iterator(k, eig.values[..k].iter().map(|x| x.sqrt()));
    let x = RealMatrix::from_diagonal(&sqrt) * u.transpose();
    let x_pinv = &u * RealMatrix::from_diagonal(&sqrt.map(|s| 1.0 / s));

    let mut rep_values = Vec::with_capacity(d);
    for i in 0..d {
        let mut left = RealMatrix::zeros(d * m, d * m);
        for j in 0..d {
            let c = dom.product_coords(i, j);
            for (l, &coef) in c.iter().enumerate() {
                if coef == 0.0 {
                    continue;
                }
                for q in 0..m {
                    left[(l * m + q, j * m + q)] = coef;
                }
            }
        }
        let pi = &x * left * &x_pinv;
        rep_values.push(pi);
    }

    let unit = dom.unit_coords();
    let mut v = RealMatrix::zeros(k, m);
    for p in 0..m {
        for (l, &coef) in unit.iter().enumerate() {
            if coef != 0.0 {
                let col = x.column(l * m + p) * coef;
                let mut target = v.column_mut(p);
                target += col;
            }
        }
    }
    Ok(StinespringTriple {
        kdim: k,
        rep_values,
        isometry: v,
    })
}

/// Violated triple invariants, empty when the triple is a minimal
/// Stinespring dilation of `phi`.
pub fn triple_violations(phi: &UcpMap, triple: &StinespringTriple, tol: &Tolerance) -> Vec<String> {
    let mut out = Vec::new();
    let k = triple.kdim;
    let m = phi.codomain_dim();
    let dom = phi.domain();
    let d = dom.dimension();
    if triple.isometry.shape() != (k, m)
        || triple.rep_values.len() != d
        || triple.rep_values.iter().any(|r| r.shape() != (k, k))
    {
        out.push("shapes are inconsistent".into());
        return out;
    }
    let check = tol.scaled(1e3);
    let scale = phi.scale();
    let v = &triple.isometry;
    let dev = op_norm(&(v.transpose() * v - RealMatrix::identity(m, m)));
    if dev > check.at_scale(1.0) {
        out.push(format!("V is not an isometry (deviation {dev:.3e})"));
    }
    let pi = |c: &[f64]| {
        c.iter()
            .zip(&triple.rep_values)
            .fold(RealMatrix::zeros(k, k), |acc, (x, r)| acc + r * *x)
    };
    let dev = op_norm(&(pi(dom.unit_coords()) - RealMatrix::identity(k, k)));
    if dev > check.at_scale(1.0) {
        out.push(format!("π is not unital (deviation {dev:.3e})"));
    }
    let rep_scale = triple.rep_values.iter().map(op_norm).fold(1.0, f64::max);
    let mut mult: f64 = 0.0;
    let mut adj: f64 = 0.0;
    for i in 0..d {
        adj = adj.max(op_norm(
            &(pi(dom.adjoint_coords(i)) - triple.rep_values[i].transpose()),
        ));
        for j in 0..d {
            let lhs = &triple.rep_values[i] * &triple.rep_values[j];
            mult = mult.max(op_norm(&(lhs - pi(dom.product_coords(i, j)))));
        }
    }
    if mult > check.at_scale(rep_scale * rep_scale) {
        out.push(format!("π is not multiplicative (deviation {mult:.3e})"));
    }
    if adj > check.at_scale(rep_scale) {
        out.push(format!(
            "π does not preserve transposes (deviation {adj:.3e})"
        ));
    }
    let recon = (0..d)
        .map(|i| op_norm(&(triple.compress(i) - &phi.values()[i])))
        .fold(0.0, f64::max);
    if recon > check.at_scale(scale) {
        out.push(format!(
            "VᵀπV does not reproduce the map (deviation {recon:.3e})"
        ));
    }
    let mut span = RealMatrix::zeros(k, d * m);
    for i in 0..d {
        span.view_mut((0, i * m), (k, m))
            .copy_from(&(&triple.rep_values[i] * v));
    }
    let r = rank(&span, &check);
    if r != k {
        out.push(format!(
            "dilation is not minimal (span has dimension {r} < {k})"
        ));
    }
    out
}

pub fn verify_triple(phi: &UcpMap, triple: &StinespringTriple, tol: &Tolerance) -> bool {
    triple_violations(phi, triple, tol).is_empty()
}

/// Purity: the minimal dilation is irreducible.
pub fn is_pure(phi: &UcpMap, tol: &Tolerance) -> Result<bool> {
    let t = minimal_stinespring(phi, tol)?;
    is_irreducible(t.kdim, &t.rep_values, tol)
}

/// Type of the minimal dilation of a pure map.
pub fn pure_type(phi: &UcpMap, tol: &Tolerance) -> Result<RepresentationType> {
    let t = minimal_stinespring(phi, tol)?;
    classify_type(t.kdim, &t.rep_values, tol)
}

/// `Ψ ≤_cp Φ`, i.e. `Φ − Ψ` is completely positive.
pub fn is_dominated(psi: &UcpMap, phi: &UcpMap, tol: &Tolerance) -> Result<bool> {
    let diff = phi.difference(psi, tol)?;
    Ok(diff.validate_cp(tol).is_ok())
}

/// The density `D ∈ π(A)′`, `0 ⪯ D ⪯ I`, with `Ψ = Vᵀ D π(·) V`.
#[derive(Debug, Clone)]
pub struct RadonNikodymDensity {
    pub d: RealMatrix,
}

/// Solves `Vᵀ D π(b_i) V = Ψ(b_i)` over the commutant of `π` as one
/// stacked least-squares system.
pub fn radon_nikodym(
    psi: &UcpMap,
    phi: &UcpMap,
    triple: &StinespringTriple,
    tol: &Tolerance,
) -> Result<RadonNikodymDensity> {
    if !is_dominated(psi, phi, tol)? {
        return Err(Error::NotDominated(
            "Φ − Ψ is not completely positive".into(),
        ));
    }
    let k = triple.kdim;
    let m = phi.codomain_dim();
    let d = phi.values().len();
    let comm = commutant(k, &triple.rep_values, tol)?;
    let cols = comm.basis.len();
    let mut system = RealMatrix::zeros(d * m * m, cols);
    let mut rhs = DVector::zeros(d * m * m);
    for i in 0..d {
        for (s, c) in comm.basis.iter().enumerate() {
            let block = triple.compress_with(c, i);
            for (r, x) in block.iter().enumerate() {
                system[(i * m * m + r, s)] = *x;
            }
        }
        for (r, x) in psi.values()[i].iter().enumerate() {
            rhs[i * m * m + r] = *x;
        }
    }
    let dec = svd(&system)?;
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let smin = dec.sigma.last().copied().unwrap_or(0.0);
    if dec.sigma.len() < cols || smin <= tol.at_scale(smax) {
        return Err(Error::Numerical(
            "density equations do not determine D uniquely".into(),
        ));
    }
    let utb = dec.u.transpose() * &rhs;
    let scaled = DVector::from_iterator(cols, utb.iter().zip(&dec.sigma).map(|(x, s)| x / s));
    let coeffs = &dec.v * scaled;
    let residual = (&system * &coeffs - &rhs).norm();
    if residual > tol.scaled(1e3).at_scale(phi.scale()) {
        return Err(Error::Numerical(format!(
            "density equations are inconsistent (residual {residual:.3e})"
        )));
    }
    let mut dens = RealMatrix::zeros(k, k);
    for (x, c) in coeffs.iter().zip(&comm.basis) {
        dens += c * *x;
    }
    let dens = (&dens + dens.transpose()) * 0.5;
    let eig = sym_eig(&dens, tol)?;
    let slack = tol.scaled(1e3).at_scale(1.0);
    if eig.values[k - 1] < -slack || eig.values[0] > 1.0 + slack {
        return Err(Error::Numerical(format!(
            "density has spectrum [{:.3e}, {:.3e}] outside [0, 1]",
            eig.values[k - 1],
            eig.values[0]
        )));
    }
    Ok(RadonNikodymDensity { d: dens })
}

/// Whether `Φ_c` is pure: the commutant of the dilation is `R·I`.
pub fn complexification_is_pure(phi: &UcpMap, tol: &Tolerance) -> Result<bool> {
    let t = minimal_stinespring(phi, tol)?;
    Ok(commutant(t.kdim, &t.rep_values, tol)?.dimension == 1)
}
