//! Finite-dimensional real C*-algebras as unital, transpose-closed spans of
//! matrices, plus commutants, intertwiners and representation types.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{
    frobenius_inner, nullspace, op_norm, span_basis, span_residual, sym_eig, RealMatrix, Tolerance,
};

/// A finite set with an involution `w ↦ w̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutiveFiniteSpace {
    points: Vec<String>,
    involution: Vec<usize>,
}

/// Orbit of the involution: a fixed point, or a pair `(w, w̄)` with `w < w̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbit {
    Fixed(usize),
    Pair(usize, usize),
}

impl Orbit {
    pub fn representative(&self) -> usize {
        match *self {
            Orbit::Fixed(w) | Orbit::Pair(w, _) => w,
        }
    }

    pub fn contains(&self, w: usize) -> bool {
        match *self {
            Orbit::Fixed(a) => a == w,
            Orbit::Pair(a, b) => a == w || b == w,
        }
    }

    pub fn block_size(&self) -> usize {
        match self {
            Orbit::Fixed(_) => 1,
            Orbit::Pair(..) => 2,
        }
    }
}

impl InvolutiveFiniteSpace {
    pub fn new(points: Vec<String>, involution: Vec<usize>) -> Result<Self> {
        if points.len() != involution.len() {
            return Err(Error::InvalidSpace(format!(
                "{} points but involution has {} entries",
                points.len(),
                involution.len()
            )));
        }
        if points.is_empty() {
            return Err(Error::InvalidSpace("space has no points".into()));
        }
        for (i, &j) in involution.iter().enumerate() {
            if j >= points.len() {
                return Err(Error::InvalidSpace(format!(
                    "involution maps {i} to {j}, out of range"
                )));
            }
            if involution[j] != i {
                return Err(Error::InvalidSpace(format!(
                    "involution is not of period 2 at point {i}"
                )));
            }
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidSpace(format!("duplicate point label {p:?}")));
            }
        }
        Ok(Self { points, involution })
    }

    /// Space whose involution is the identity.
    pub fn trivial(labels: &[&str]) -> Result<Self> {
        Self::new(
            labels.iter().map(|s| s.to_string()).collect(),
            (0..labels.len()).collect(),
        )
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn conj(&self, w: usize) -> usize {
        self.involution[w]
    }

    pub fn is_fixed(&self, w: usize) -> bool {
        self.involution[w] == w
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    /// Orbits ordered by their representative (the lower index).
    pub fn orbits(&self) -> Vec<Orbit> {
        (0..self.len())
            .filter_map(|w| {
                let v = self.involution[w];
                if v == w {
                    Some(Orbit::Fixed(w))
                } else if w < v {
                    Some(Orbit::Pair(w, v))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn orbit_of(&self, w: usize) -> Orbit {
        let v = self.involution[w];
        if v == w {
            Orbit::Fixed(w)
        } else {
            Orbit::Pair(w.min(v), w.max(v))
        }
    }
}

/// Position of one orbit inside the block-diagonal ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBlock {
    pub orbit: Orbit,
    /// First ambient row/column of the block.
    pub offset: usize,
    /// Basis index of the block's first element; pairs also own the next one.
    pub basis_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutativeLayout {
    pub space: InvolutiveFiniteSpace,
    pub blocks: Vec<OrbitBlock>,
}

impl CommutativeLayout {
    pub fn block_of_point(&self, w: usize) -> &OrbitBlock {
        self.blocks
            .iter()
            .find(|b| b.orbit.contains(w))
            .expect("every point lies in an orbit")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraKind {
    /// `M_n(R)` with the matrix units `E_ij` as basis, in row-major order.
    Matrix(usize),
    /// `C(Ω, −)` for a finite involutive space.
    Commutative(CommutativeLayout),
    General,
}

/// A unital `*`-closed span of `N×N` matrices with cached structure
/// constants.
#[derive(Clone)]
pub struct ConcreteAlgebra {
    ambient_dim: usize,
    basis: Vec<RealMatrix>,
    generators: Vec<RealMatrix>,
    label: String,
    kind: AlgebraKind,
    gram_inv: RealMatrix,
    unit: Vec<f64>,
    adjoints: Vec<Vec<f64>>,
    products: Vec<Vec<f64>>,
    adjoint_products: Vec<Vec<f64>>,
}

impl fmt::Debug for ConcreteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcreteAlgebra")
            .field("label", &self.label)
            .field("ambient_dim", &self.ambient_dim)
            .field("dimension", &self.basis.len())
            .field("kind", &self.kind)
            .finish()
    }
}

impl ConcreteAlgebra {
    /// Validates `basis` (independent, contains `I`, closed under transpose
    /// and products) and caches structure constants.
    pub fn from_basis(
        basis: Vec<RealMatrix>,
        generators: Vec<RealMatrix>,
        label: impl Into<String>,
        kind: AlgebraKind,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = check_family(&basis)?;
        if basis.is_empty() {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        let d = basis.len();
        let gram = RealMatrix::from_fn(d, d, |i, j| frobenius_inner(&basis[i], &basis[j]));
        let eig = sym_eig(&gram, tol)?;
        let min = *eig.values.last().unwrap();
        if min <= tol.at_scale(eig.values[0]) {
            return Err(Error::InvalidAlgebra(format!(
                "basis is linearly dependent (Gram eigenvalue {min:.3e})"
            )));
        }
        let gram_inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidAlgebra("singular basis Gram matrix".into()))?;
        let mut alg = Self {
            ambient_dim: n,
            basis,
            generators,
            label: label.into(),
            kind,
            gram_inv,
            unit: vec![],
            adjoints: vec![],
            products: vec![],
            adjoint_products: vec![],
        };
        let check_tol = tol.scaled(100.0);
        let expand = |alg: &Self, m: &RealMatrix, what: &str| -> Result<Vec<f64>> {
            let c = alg.coords(m);
            let residual = op_norm(&(m - alg.element(&c)));
            if residual > check_tol.at_scale(op_norm(m).max(1.0)) {
                return Err(Error::InvalidAlgebra(format!(
                    "{what} is not in the span (residual {residual:.3e})"
                )));
            }
            Ok(c)
        };
        alg.unit = expand(&alg, &RealMatrix::identity(n, n), "the identity")?;
        alg.adjoints = (0..d)
            .map(|i| expand(&alg, &alg.basis[i].transpose(), "a transpose"))
            .collect::<Result<_>>()?;
        let mut products = Vec::with_capacity(d * d);
        let mut adjoint_products = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                products.push(expand(&alg, &(&alg.basis[i] * &alg.basis[j]), "a product")?);
                adjoint_products.push(expand(
                    &alg,
                    &(alg.basis[i].transpose() * &alg.basis[j]),
                    "a product",
                )?);
            }
        }
        alg.products = products;
        alg.adjoint_products = adjoint_products;
        Ok(alg)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RealMatrix] {
        &self.basis
    }

    pub fn generators(&self) -> &[RealMatrix] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn commutative_layout(&self) -> Option<&CommutativeLayout> {
        match &self.kind {
            AlgebraKind::Commutative(layout) => Some(layout),
            _ => None,
        }
    }

    /// Least-squares coordinates of `m` in the basis.
    pub fn coords(&self, m: &RealMatrix) -> Vec<f64> {
        let rhs = nalgebra::DVector::from_iterator(
            self.basis.len(),
            self.basis.iter().map(|b| frobenius_inner(b, m)),
        );
        (&self.gram_inv * rhs).iter().copied().collect()
    }

    pub fn element(&self, coeffs: &[f64]) -> RealMatrix {
        let mut out = RealMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0.0 {
                out += b * *c;
            }
        }
        out
    }

    /// Coordinates of the identity.
    pub fn unit_coords(&self) -> &[f64] {
        &self.unit
    }

    /// Coordinates of `b_iᵀ`.
    pub fn adjoint_coords(&self, i: usize) -> &[f64] {
        &self.adjoints[i]
    }

    /// Coordinates of `b_i b_j`.
    pub fn product_coords(&self, i: usize, j: usize) -> &[f64] {
        &self.products[i * self.basis.len() + j]
    }

    /// Coordinates of `b_iᵀ b_j`.
    pub fn adjoint_product_coords(&self, i: usize, j: usize) -> &[f64] {
        &self.adjoint_products[i * self.basis.len() + j]
    }

    /// Same ambient dimension and the same basis matrices.
    pub fn same_as(&self, other: &Self, tol: &Tolerance) -> bool {
        std::ptr::eq(self, other)
            || (self.ambient_dim == other.ambient_dim
                && self.basis.len() == other.basis.len()
                && self
                    .basis
                    .iter()
                    .zip(&other.basis)
                    .all(|(a, b)| tol.close(a, b)))
    }
}

fn check_family(family: &[RealMatrix]) -> Result<usize> {
    let n = family.first().map_or(0, |m| m.nrows());
    for m in family {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Shape(format!(
                "expected {n}x{n} matrices, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        crate::numerics::ensure_finite(m)?;
    }
    Ok(n)
}

/// Smallest unital `*`-closed algebra containing `generators`.
pub fn close_under_products(
    generators: &[RealMatrix],
    cap: usize,
    tol: &Tolerance,
) -> Result<ConcreteAlgebra> {
    let n = check_family(generators)?;
    if generators.is_empty() {
        return Err(Error::InvalidAlgebra("no generators".into()));
    }
    let mut seed = vec![RealMatrix::identity(n, n)];
    for g in generators {
        seed.push(g.clone());
        seed.push(g.transpose());
    }
    let mut basis = span_basis(&seed, tol)?;
    for _ in 0..cap.max(1) {
        let mut candidates = basis.clone();
        for a in &basis {
            for b in &basis {
                candidates.push(a * b);
            }
        }
        let next = span_basis(&candidates, tol)?;
        if next.len() == basis.len() {
            return ConcreteAlgebra::from_basis(
                next,
                generators.to_vec(),
                "C*(S)",
                AlgebraKind::General,
                tol,
            );
        }
        basis = next;
    }
    Err(Error::NonConvergence { rounds: cap })
}

fn matrix_unit(n: usize, i: usize, j: usize) -> RealMatrix {
    let mut e = RealMatrix::zeros(n, n);
    e[(i, j)] = 1.0;
    e
}

/// `M_n(R)` with basis `E_ij`, index `i·n + j`.
pub fn matrix_algebra(n: usize) -> Result<ConcreteAlgebra> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("matrix algebra needs n >= 1".into()));
    }
    let basis: Vec<RealMatrix> = (0..n * n).map(|k| matrix_unit(n, k / n, k % n)).collect();
    ConcreteAlgebra::from_basis(
        basis.clone(),
        basis,
        format!("M_{n}(R)"),
        AlgebraKind::Matrix(n),
        &Tolerance::default(),
    )
}

/// `J = [[0, 1], [−1, 0]]`.
pub fn rotation_generator() -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

/// `C(Ω, −)` as a block-diagonal algebra: a `1×1` block per fixed point and
/// a `2×2` block `Re f(w)·I + Im f(w)·J` per pair, keyed by the lower index.
pub fn commutative_algebra(space: InvolutiveFiniteSpace) -> Result<ConcreteAlgebra> {
    let orbits = space.orbits();
    let ambient: usize = orbits.iter().map(Orbit::block_size).sum();
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for orbit in orbits {
        blocks.push(OrbitBlock {
            orbit,
            offset,
            basis_index: basis.len(),
        });
        match orbit {
            Orbit::Fixed(_) => {
                basis.push(matrix_unit(ambient, offset, offset));
            }
            Orbit::Pair(..) => {
                let mut re = RealMatrix::zeros(ambient, ambient);
                re.view_mut((offset, offset), (2, 2))
                    .copy_from(&RealMatrix::identity(2, 2));
                let mut im = RealMatrix::zeros(ambient, ambient);
                im.view_mut((offset, offset), (2, 2))
                    .copy_from(&rotation_generator());
                basis.push(re);
                basis.push(im);
            }
        }
        offset += orbit.block_size();
    }
    let label = format!("C(Omega) on {} points", space.len());
    ConcreteAlgebra::from_basis(
        basis.clone(),
        basis,
        label,
        AlgebraKind::Commutative(CommutativeLayout { space, blocks }),
        &Tolerance::default(),
    )
}

/// The complex numbers as `span{I, J}`: `C(Ω, −)` on two swapped points.
pub fn complex_as_real() -> ConcreteAlgebra {
    let space = InvolutiveFiniteSpace::new(vec!["1".into(), "2".into()], vec![1, 0])
        .expect("swap is an involution");
    let mut alg = commutative_algebra(space).expect("two-point space is valid");
    alg.label = "C".into();
    alg
}

/// Images of `1, i, j, k` under the left-regular representation of `H` on
/// `R^4`.
pub fn quaternion_units() -> [RealMatrix; 4] {
    let i = RealMatrix::from_row_slice(
        4,
        4,
        &[
            0., -1., 0., 0., //
            1., 0., 0., 0., //
            0., 0., 0., -1., //
            0., 0., 1., 0.,
        ],
    );
    let j = RealMatrix::from_row_slice(
        4,
        4,
        &[
            0., 0., -1., 0., //
            0., 0., 0., 1., //
            1., 0., 0., 0., //
            0., -1., 0., 0.,
        ],
    );
    let k = RealMatrix::from_row_slice(
        4,
        4,
        &[
            0., 0., 0., -1., //
            0., 0., -1., 0., //
            0., 1., 0., 0., //
            1., 0., 0., 0.,
        ],
    );
    [RealMatrix::identity(4, 4), i, j, k]
}

pub fn quaternion_algebra() -> ConcreteAlgebra {
    let basis = quaternion_units().to_vec();
    ConcreteAlgebra::from_basis(
        basis.clone(),
        basis,
        "H",
        AlgebraKind::General,
        &Tolerance::default(),
    )
    .expect("quaternion units span a *-algebra")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationType {
    Real,
    Complex,
    Quaternion,
    NotFactor,
}

impl RepresentationType {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Real => "Real",
            Self::Complex => "Complex",
            Self::Quaternion => "Quaternion",
            Self::NotFactor => "NotFactor",
        }
    }
}

impl fmt::Display for RepresentationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct CommutantDescription {
    /// Frobenius-orthonormal basis of the commutant.
    pub basis: Vec<RealMatrix>,
    pub dimension: usize,
    pub type_tag: RepresentationType,
}

/// Vectorised `vec(T·a) − vec(b·T)` for `T: R^{k1} → R^{k2}`.
fn intertwining_rows(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let (k1, k2) = (a.nrows(), b.nrows());
    a.transpose().kronecker(&RealMatrix::identity(k2, k2))
        - RealMatrix::identity(k1, k1).kronecker(b)
}

/// Basis of `{T ∈ M_{k2×k1} : T·f1[i] = f2[i]·T ∀i}`, with transposed pairs
/// appended. The basis is orthonormal in the Frobenius pairing.
pub fn intertwiners(
    k1: usize,
    f1: &[RealMatrix],
    k2: usize,
    f2: &[RealMatrix],
    tol: &Tolerance,
) -> Result<Vec<RealMatrix>> {
    if f1.len() != f2.len() {
        return Err(Error::Shape(format!(
            "families have {} and {} members",
            f1.len(),
            f2.len()
        )));
    }
    for (a, b) in f1.iter().zip(f2) {
        if a.shape() != (k1, k1) || b.shape() != (k2, k2) {
            return Err(Error::Shape("family member has the wrong size".into()));
        }
    }
    let cols = k1 * k2;
    if cols == 0 {
        return Ok(vec![]);
    }
    let block = cols;
    let mut system = RealMatrix::zeros(2 * f1.len() * block, cols);
    for (idx, (a, b)) in f1.iter().zip(f2).enumerate() {
        system
            .view_mut((2 * idx * block, 0), (block, cols))
            .copy_from(&intertwining_rows(a, b));
        system
            .view_mut(((2 * idx + 1) * block, 0), (block, cols))
            .copy_from(&intertwining_rows(&a.transpose(), &b.transpose()));
    }
    let kernel = nullspace(&system, tol);
    Ok(kernel
        .column_iter()
        .map(|c| RealMatrix::from_column_slice(k2, k1, c.as_slice()))
        .collect())
}

/// Commutant of a family of `n×n` matrices, closed under transposes first.
pub fn commutant(n: usize, family: &[RealMatrix], tol: &Tolerance) -> Result<CommutantDescription> {
    let reduced = star_span(n, family, tol)?;
    let basis = intertwiners(n, &reduced, n, &reduced, tol)?;
    let mut desc = CommutantDescription {
        dimension: basis.len(),
        basis,
        type_tag: RepresentationType::NotFactor,
    };
    if symmetric_part(&desc.basis, tol)?.len() == 1 {
        desc.type_tag = classify_commutant(n, &desc.basis, tol)?;
    }
    Ok(desc)
}

/// Orthonormal basis of `span(family ∪ familyᵀ)`; keeps the linear systems
/// small without changing the commutant.
fn star_span(n: usize, family: &[RealMatrix], tol: &Tolerance) -> Result<Vec<RealMatrix>> {
    let got = check_family(family)?;
    if !family.is_empty() && got != n {
        return Err(Error::Shape(format!(
            "expected {n}x{n} family, got {got}x{got}"
        )));
    }
    let mut all = Vec::with_capacity(2 * family.len());
    for m in family {
        all.push(m.clone());
        all.push(m.transpose());
    }
    span_basis(&all, tol)
}

/// Orthonormal basis of the symmetric parts of `basis`.
pub fn symmetric_part(basis: &[RealMatrix], tol: &Tolerance) -> Result<Vec<RealMatrix>> {
    let sym: Vec<RealMatrix> = basis.iter().map(|t| (t + t.transpose()) * 0.5).collect();
    span_basis(&sym, tol)
}

pub fn is_irreducible(n: usize, family: &[RealMatrix], tol: &Tolerance) -> Result<bool> {
    let reduced = star_span(n, family, tol)?;
    let basis = intertwiners(n, &reduced, n, &reduced, tol)?;
    Ok(symmetric_part(&basis, tol)?.len() == 1)
}

/// Type of an irreducible family: `R`, `C` or `H` according to its
/// commutant.
pub fn classify_type(
    n: usize,
    family: &[RealMatrix],
    tol: &Tolerance,
) -> Result<RepresentationType> {
    let reduced = star_span(n, family, tol)?;
    let basis = intertwiners(n, &reduced, n, &reduced, tol)?;
    if symmetric_part(&basis, tol)?.len() != 1 {
        return Err(Error::Precondition("family is not irreducible".into()));
    }
    classify_commutant(n, &basis, tol)
}

fn classify_commutant(
    n: usize,
    basis: &[RealMatrix],
    tol: &Tolerance,
) -> Result<RepresentationType> {
    let check = tol.scaled(1e3);
    let identity = RealMatrix::identity(n, n);
    let traceless: Vec<RealMatrix> = basis
        .iter()
        .map(|b| b - &identity * (b.trace() / n as f64))
        .collect();
    let units = span_basis(&traceless, tol)?;
    let is_negative_scalar = |u: &RealMatrix| {
        let sq = u * u;
        let c = -sq.trace() / n as f64;
        c > 0.0 && op_norm(&(sq + &identity * c)) <= check.at_scale(c)
    };
    match (basis.len(), units.len()) {
        (1, 0) => Ok(RepresentationType::Real),
        (2, 1) if is_negative_scalar(&units[0]) => Ok(RepresentationType::Complex),
        (4, 3) => {
            let anticommute = (0..3).all(|a| {
                (a + 1..3).all(|b| {
                    let ac = &units[a] * &units[b] + &units[b] * &units[a];
                    op_norm(&ac) <= check.at_scale(op_norm(&units[a]).powi(2))
                })
            });
            if units.iter().all(is_negative_scalar) && anticommute {
                Ok(RepresentationType::Quaternion)
            } else {
                Err(Error::Classification(
                    "four-dimensional commutant fails the quaternion relations".into(),
                ))
            }
        }
        (d, _) => Err(Error::Classification(format!(
            "irreducible commutant of dimension {d} is not R, C or H"
        ))),
    }
}

/// `‖m − proj_span(basis) m‖` for a Frobenius-orthonormal `basis`.
pub fn distance_to_span(basis: &[RealMatrix], m: &RealMatrix) -> f64 {
    span_residual(basis, m)
}
