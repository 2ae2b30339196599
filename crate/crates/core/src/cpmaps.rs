//! Linear maps from a [`ConcreteAlgebra`] into `M_m(R)`, stored by their
//! values on the algebra basis.

use std::sync::Arc;

use nalgebra::DVector;

use crate::algebra::{AlgebraKind, ConcreteAlgebra, Orbit};
use crate::error::{Error, Result};
use crate::numerics::{block_diag, is_psd, min_eigenpair, op_norm, sym_eig, RealMatrix, Tolerance};

/// A linear map `Φ: A → M_m(R)`. Unitality and complete positivity are
/// properties to be checked, not construction invariants, so that
/// dominated and difference maps can share the type.
#[derive(Debug, Clone)]
pub struct UcpMap {
    domain: Arc<ConcreteAlgebra>,
    codomain_dim: usize,
    values: Vec<RealMatrix>,
}

impl UcpMap {
    pub fn new(
        domain: Arc<ConcreteAlgebra>,
        codomain_dim: usize,
        values: Vec<RealMatrix>,
    ) -> Result<Self> {
        if values.len() != domain.dimension() {
            return Err(Error::Shape(format!(
                "domain has {} basis elements but {} values were given",
                domain.dimension(),
                values.len()
            )));
        }
        for v in &values {
            if v.shape() != (codomain_dim, codomain_dim) {
                return Err(Error::Shape(format!(
                    "value is {}x{}, expected {codomain_dim}x{codomain_dim}",
                    v.nrows(),
                    v.ncols()
                )));
            }
            crate::numerics::ensure_finite(v)?;
        }
        Ok(Self {
            domain,
            codomain_dim,
            values,
        })
    }

    /// Map defined by its action on each basis matrix.
    pub fn from_fn(
        domain: Arc<ConcreteAlgebra>,
        codomain_dim: usize,
        f: impl Fn(&RealMatrix) -> RealMatrix,
    ) -> Result<Self> {
        let values = domain.basis().iter().map(f).collect();
        Self::new(domain, codomain_dim, values)
    }

    /// The defining representation `a ↦ a`.
    pub fn identity(domain: Arc<ConcreteAlgebra>) -> Self {
        let m = domain.ambient_dim();
        let values = domain.basis().to_vec();
        Self {
            domain,
            codomain_dim: m,
            values,
        }
    }

    pub fn domain(&self) -> &Arc<ConcreteAlgebra> {
        &self.domain
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn values(&self) -> &[RealMatrix] {
        &self.values
    }

    pub fn kind(&self) -> &AlgebraKind {
        self.domain.kind()
    }

    /// `Σ c_i Φ(b_i)`.
    pub fn evaluate(&self, coeffs: &[f64]) -> Result<RealMatrix> {
        if coeffs.len() != self.values.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                self.values.len(),
                coeffs.len()
            )));
        }
        let mut out = RealMatrix::zeros(self.codomain_dim, self.codomain_dim);
        for (c, v) in coeffs.iter().zip(&self.values) {
            if *c != 0.0 {
                out += v * *c;
            }
        }
        Ok(out)
    }

    /// `Φ(a)` for a matrix `a` in the domain span.
    pub fn apply(&self, a: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
        let n = self.domain.ambient_dim();
        if a.shape() != (n, n) {
            return Err(Error::Shape(format!("argument must be {n}x{n}")));
        }
        let c = self.domain.coords(a);
        let residual = op_norm(&(a - self.domain.element(&c)));
        if residual > tol.scaled(100.0).at_scale(op_norm(a).max(1.0)) {
            return Err(Error::DomainMismatch(format!(
                "argument is not in the domain algebra (residual {residual:.3e})"
            )));
        }
        self.evaluate(&c)
    }

    pub fn unit_value(&self) -> RealMatrix {
        self.evaluate(self.domain.unit_coords())
            .expect("unit coordinates fit")
    }

    pub fn unitality_deviation(&self) -> f64 {
        let m = self.codomain_dim;
        op_norm(&(self.unit_value() - RealMatrix::identity(m, m)))
    }

    pub fn is_unital(&self, tol: &Tolerance) -> bool {
        self.unitality_deviation() <= tol.at_scale(1.0)
    }

    /// `max_i ‖Φ(b_iᵀ) − Φ(b_i)ᵀ‖`.
    pub fn self_adjoint_deviation(&self) -> f64 {
        (0..self.values.len())
            .map(|i| {
                let lhs = self
                    .evaluate(self.domain.adjoint_coords(i))
                    .expect("coords fit");
                op_norm(&(lhs - self.values[i].transpose()))
            })
            .fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, tol: &Tolerance) -> bool {
        self.self_adjoint_deviation() <= tol.at_scale(self.scale())
    }

    /// `max_{i,j} ‖Φ(b_i b_j) − Φ(b_i)Φ(b_j)‖`.
    pub fn multiplicativity_deviation(&self) -> f64 {
        let d = self.values.len();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = self
                    .evaluate(self.domain.product_coords(i, j))
                    .expect("coords fit");
                let rhs = &self.values[i] * &self.values[j];
                worst = worst.max(op_norm(&(lhs - rhs)));
            }
        }
        worst
    }

    pub fn is_multiplicative(&self, tol: &Tolerance) -> bool {
        self.multiplicativity_deviation() <= tol.scaled(10.0).at_scale(self.scale().powi(2))
    }

    /// Largest value norm, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.values.iter().map(op_norm).fold(1.0, f64::max)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            domain: self.domain.clone(),
            codomain_dim: self.codomain_dim,
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    /// `self − other`.
    pub fn difference(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        self.check_compatible(other, tol)?;
        Ok(Self {
            domain: self.domain.clone(),
            codomain_dim: self.codomain_dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn check_compatible(&self, other: &Self, tol: &Tolerance) -> Result<()> {
        if !self.same_domain(other, tol) {
            return Err(Error::DomainMismatch("maps have different domains".into()));
        }
        if self.codomain_dim != other.codomain_dim {
            return Err(Error::Shape(format!(
                "codomain dimensions {} and {} differ",
                self.codomain_dim, other.codomain_dim
            )));
        }
        Ok(())
    }

    pub fn same_domain(&self, other: &Self, tol: &Tolerance) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || self.domain.same_as(&other.domain, tol)
    }

    /// Values agree within tolerance (domains must match).
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.check_compatible(other, tol).is_ok()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| op_norm(&(a - b)) <= tol.at_scale(self.scale().max(other.scale())))
    }

    /// Block matrix `[Φ(b_iᵀ b_j)]_{ij}`, with row index `i·m + p`.
    pub fn block_gram(&self) -> RealMatrix {
        let d = self.values.len();
        let m = self.codomain_dim;
        let mut g = RealMatrix::zeros(d * m, d * m);
        for i in 0..d {
            for j in 0..d {
                let block = self
                    .evaluate(self.domain.adjoint_product_coords(i, j))
                    .expect("coords fit");
                g.view_mut((i * m, j * m), (m, m)).copy_from(&block);
            }
        }
        g
    }

    /// Fails with the first violated property among unitality,
    /// self-adjointness and complete positivity.
    pub fn validate_ucp(&self, tol: &Tolerance) -> Result<()> {
        let deviation = self.unitality_deviation();
        if deviation > tol.scaled(10.0).at_scale(1.0) {
            return Err(Error::NotUnital { deviation });
        }
        self.validate_cp(tol)
    }

    /// Self-adjointness and complete positivity.
    pub fn validate_cp(&self, tol: &Tolerance) -> Result<()> {
        let deviation = self.self_adjoint_deviation();
        if deviation > tol.scaled(10.0).at_scale(self.scale()) {
            return Err(Error::NotSelfAdjoint { deviation });
        }
        let verdict = is_completely_positive(self, tol)?;
        if !verdict.is_cp {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: verdict.min_eigenvalue,
                witness: verdict.witness.unwrap_or_default(),
            });
        }
        Ok(())
    }
}

/// Outcome of the complete-positivity test.
#[derive(Debug, Clone)]
pub struct CpVerdict {
    pub is_cp: bool,
    /// Smallest eigenvalue of the block Gram matrix.
    pub min_eigenvalue: f64,
    /// Eigenvector for `min_eigenvalue` when the test fails.
    pub witness: Option<Vec<f64>>,
    /// Smallest Choi eigenvalue, for matrix domains.
    pub choi_min_eigenvalue: Option<f64>,
}

/// PSD test of the block Gram matrix. For `M_n(R)` domains the Choi test is
/// run as well and the two verdicts must agree.
pub fn is_completely_positive(phi: &UcpMap, tol: &Tolerance) -> Result<CpVerdict> {
    let gram = phi.block_gram();
    let gram_psd = is_psd(&gram, tol)?;
    let (min_eigenvalue, vector) = min_eigenpair(&gram, tol)?;
    let choi_min_eigenvalue = match phi.kind() {
        AlgebraKind::Matrix(_) => {
            let choi = choi_matrix(phi)?;
            let choi_psd = is_psd(&choi.matrix, tol)?;
            if choi_psd != gram_psd {
                return Err(Error::Numerical(
                    "Choi and block Gram positivity tests disagree".into(),
                ));
            }
            Some(min_eigenpair(&choi.matrix, tol)?.0)
        }
        _ => None,
    };
    Ok(CpVerdict {
        is_cp: gram_psd,
        min_eigenvalue,
        witness: (!gram_psd).then(|| vector.iter().copied().collect()),
        choi_min_eigenvalue,
    })
}

/// Choi matrix `Σ E_ij ⊗ Φ(E_ij)` of a map on `M_n(R)`.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub n: usize,
    pub m: usize,
    pub matrix: RealMatrix,
}

pub fn choi_matrix(phi: &UcpMap) -> Result<ChoiMatrix> {
    let AlgebraKind::Matrix(n) = *phi.kind() else {
        return Err(Error::WrongDomain { expected: "matrix" });
    };
    let m = phi.codomain_dim();
    let mut c = RealMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            c.view_mut((i * m, j * m), (m, m))
                .copy_from(&phi.values()[i * n + j]);
        }
    }
    Ok(ChoiMatrix { n, m, matrix: c })
}

/// Kraus operators `K_k` (`n×m`) with `Φ(a) = Σ K_kᵀ a K_k`, one per Choi
/// eigenvalue above the rank cutoff.
pub fn kraus_operators(phi: &UcpMap, tol: &Tolerance) -> Result<Vec<RealMatrix>> {
    let choi = choi_matrix(phi)?;
    let eig = sym_eig(&choi.matrix, tol)?;
    let cutoff = tol.at_scale(eig.values.first().copied().unwrap_or(0.0));
    let mut out = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= cutoff {
            break;
        }
        let v = eig.vectors.column(k) * lambda.sqrt();
        out.push(RealMatrix::from_row_slice(choi.n, choi.m, v.as_slice()));
    }
    Ok(out)
}

/// `a ↦ Σ K_kᵀ a K_k` on `M_n(R)`.
pub fn kraus_map(domain: Arc<ConcreteAlgebra>, kraus: &[RealMatrix]) -> Result<UcpMap> {
    let AlgebraKind::Matrix(n) = *domain.kind() else {
        return Err(Error::WrongDomain { expected: "matrix" });
    };
    let Some(first) = kraus.first() else {
        return Err(Error::Shape("no Kraus operators".into()));
    };
    let m = first.ncols();
    if kraus.iter().any(|k| k.shape() != (n, m)) {
        return Err(Error::Shape(format!("Kraus operators must be {n}x{m}")));
    }
    UcpMap::from_fn(domain, m, |a| {
        kraus.iter().fold(RealMatrix::zeros(m, m), |acc, k| {
            acc + k.transpose() * a * k
        })
    })
}

/// `a ↦ Vᵀ a V` on `M_n(R)` for an `n×m` matrix `V`.
pub fn compression(domain: Arc<ConcreteAlgebra>, v: &RealMatrix) -> Result<UcpMap> {
    kraus_map(domain, std::slice::from_ref(v))
}

/// The complexification `Φ_c(f + î g) = Φ(f) + î Φ(g)`, with complex
/// matrices carried as (real part, imaginary part).
#[derive(Debug, Clone)]
pub struct Complexified {
    pub map: UcpMap,
}

pub fn complexify_map(phi: &UcpMap) -> Complexified {
    Complexified { map: phi.clone() }
}

impl Complexified {
    /// `Φ_c(f + î g)` for basis coordinates `f`, `g`.
    pub fn apply(&self, f: &[f64], g: &[f64]) -> Result<(RealMatrix, RealMatrix)> {
        Ok((self.map.evaluate(f)?, self.map.evaluate(g)?))
    }

    /// Real `2m×2m` encoding `[[A, −B], [B, A]]` of `Φ_c(f + î g) = A + iB`.
    pub fn apply_encoded(&self, f: &[f64], g: &[f64]) -> Result<RealMatrix> {
        let (a, b) = self.apply(f, g)?;
        Ok(encode_complex(&a, &b))
    }
}

pub fn encode_complex(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let (r, c) = a.shape();
    let mut out = RealMatrix::zeros(2 * r, 2 * c);
    out.view_mut((0, 0), (r, c)).copy_from(a);
    out.view_mut((0, c), (r, c)).copy_from(&(-b));
    out.view_mut((r, 0), (r, c)).copy_from(b);
    out.view_mut((r, c), (r, c)).copy_from(a);
    out
}

/// Complex Choi matrix `Σ_{ij} E_ij ⊗ Φ_c(E_ij)` of the complexification of
/// a map on `M_n(R)`, in the real `2nm×2nm` encoding. The matrix units of
/// `M_n(C)` are taken in a rotated complex basis `F_ij = u E_ij u*`, with
/// `u` the diagonal unitary of phases `e^{ik}`, so that the imaginary parts
/// are exercised.
pub fn complex_choi_encoded(phi: &UcpMap) -> Result<RealMatrix> {
    let AlgebraKind::Matrix(n) = *phi.kind() else {
        return Err(Error::WrongDomain { expected: "matrix" });
    };
    let m = phi.codomain_dim();
    let cx = complexify_map(phi);
    let dim = n * m;
    let (mut re, mut im) = (RealMatrix::zeros(dim, dim), RealMatrix::zeros(dim, dim));
    for i in 0..n {
        for j in 0..n {
            // F_ij = e^{i(θ_i − θ_j)} E_ij with θ_k = k.
            let angle = i as f64 - j as f64;
            let mut f = vec![0.0; n * n];
            let mut g = vec![0.0; n * n];
            f[i * n + j] = angle.cos();
            g[i * n + j] = angle.sin();
            let (a, b) = cx.apply(&f, &g)?;
            re.view_mut((i * m, j * m), (m, m)).copy_from(&a);
            im.view_mut((i * m, j * m), (m, m)).copy_from(&b);
        }
    }
    Ok(encode_complex(&re, &im))
}

/// `⊕_j Φ_j`, block diagonal in the order given.
pub fn direct_sum(phis: &[UcpMap], tol: &Tolerance) -> Result<UcpMap> {
    let Some(first) = phis.first() else {
        return Err(Error::Shape("direct sum of no maps".into()));
    };
    for p in &phis[1..] {
        if !first.same_domain(p, tol) {
            return Err(Error::DomainMismatch(
                "summands have different domains".into(),
            ));
        }
    }
    let m = phis.iter().map(UcpMap::codomain_dim).sum();
    let values = (0..first.values().len())
        .map(|i| {
            block_diag(
                &phis
                    .iter()
                    .map(|p| p.values()[i].clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    UcpMap::new(first.domain().clone(), m, values)
}

/// `a ↦ tᵀΦ(a)t` for an `m×k` matrix `t`.
pub fn ad_conjugate(phi: &UcpMap, t: &RealMatrix) -> Result<UcpMap> {
    if t.nrows() != phi.codomain_dim() {
        return Err(Error::Shape(format!(
            "conjugating matrix has {} rows, map codomain is {}",
            t.nrows(),
            phi.codomain_dim()
        )));
    }
    let values = phi.values().iter().map(|v| t.transpose() * v * t).collect();
    UcpMap::new(phi.domain().clone(), t.ncols(), values)
}

/// Terms `(T_j, Φ_j)` of `Σ Ad_{T_j} ∘ Φ_j` with `Σ T_jᵀT_j = I`.
#[derive(Debug, Clone)]
pub struct CStarCombination {
    terms: Vec<(RealMatrix, UcpMap)>,
}

impl CStarCombination {
    pub fn new(terms: Vec<(RealMatrix, UcpMap)>, tol: &Tolerance) -> Result<Self> {
        let Some((t0, p0)) = terms.first() else {
            return Err(Error::InvalidCombination("no terms".into()));
        };
        let m = t0.ncols();
        let mut sum = RealMatrix::zeros(m, m);
        for (t, p) in &terms {
            if t.ncols() != m || t.nrows() != p.codomain_dim() {
                return Err(Error::InvalidCombination(format!(
                    "coefficient {}x{} does not fit a map into M_{} with output size {m}",
                    t.nrows(),
                    t.ncols(),
                    p.codomain_dim()
                )));
            }
            if !p0.same_domain(p, tol) {
                return Err(Error::InvalidCombination(
                    "terms have different domains".into(),
                ));
            }
            sum += t.transpose() * t;
        }
        let deviation = op_norm(&(sum - RealMatrix::identity(m, m)));
        if deviation > tol.scaled(10.0).at_scale(1.0) {
            return Err(Error::InvalidCombination(format!(
                "coefficients satisfy sum TᵀT = I only up to {deviation:.3e}"
            )));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(RealMatrix, UcpMap)] {
        &self.terms
    }

    pub fn codomain_dim(&self) -> usize {
        self.terms[0].0.ncols()
    }

    /// Every coefficient is square and invertible.
    pub fn is_proper(&self, tol: &Tolerance) -> bool {
        self.terms.iter().all(|(t, _)| {
            t.is_square()
                && crate::numerics::svd(t).is_ok_and(|d| {
                    d.sigma
                        .last()
                        .is_some_and(|&lo| lo > tol.at_scale(d.sigma[0]))
                })
        })
    }
}

/// `Σ T_jᵀ Φ_j(·) T_j`, checked to be UCP.
pub fn cstar_combine(comb: &CStarCombination, tol: &Tolerance) -> Result<UcpMap> {
    let (t0, p0) = &comb.terms[0];
    let m = t0.ncols();
    let mut values = vec![RealMatrix::zeros(m, m); p0.values().len()];
    for (t, p) in &comb.terms {
        for (acc, v) in values.iter_mut().zip(p.values()) {
            *acc += t.transpose() * v * t;
        }
    }
    let out = UcpMap::new(p0.domain().clone(), m, values)?;
    out.validate_ucp(tol)?;
    Ok(out)
}

/// `a ↦ φ(a)·I_m` for a state given by its basis values.
pub fn inflation(
    domain: Arc<ConcreteAlgebra>,
    state_values: &[f64],
    m: usize,
    tol: &Tolerance,
) -> Result<UcpMap> {
    let state = UcpMap::new(
        domain.clone(),
        1,
        state_values
            .iter()
            .map(|&x| RealMatrix::from_element(1, 1, x))
            .collect(),
    )?;
    state
        .validate_ucp(tol)
        .map_err(|e| Error::NotAState(e.to_string()))?;
    UcpMap::new(
        domain,
        m,
        state_values
            .iter()
            .map(|&x| RealMatrix::identity(m, m) * x)
            .collect(),
    )
}

fn commutative_block(domain: &ConcreteAlgebra, w: usize) -> Result<(Orbit, usize)> {
    let layout = domain.commutative_layout().ok_or(Error::WrongDomain {
        expected: "commutative",
    })?;
    if w >= layout.space.len() {
        return Err(Error::Point(w.to_string(), "is not a point of the space"));
    }
    let block = layout.block_of_point(w);
    Ok((block.orbit, block.basis_index))
}

/// `ρ_w(f) = Re f(w)`.
pub fn rho_map(domain: Arc<ConcreteAlgebra>, w: usize) -> Result<UcpMap> {
    let (orbit, index) = commutative_block(&domain, w)?;
    let mut values = vec![RealMatrix::zeros(1, 1); domain.dimension()];
    values[index][(0, 0)] = 1.0;
    let _ = orbit;
    UcpMap::new(domain, 1, values)
}

/// `Π_w(f) = [[Re f(w), Im f(w)], [−Im f(w), Re f(w)]]` for `w ≠ w̄`.
pub fn pi_map(domain: Arc<ConcreteAlgebra>, w: usize) -> Result<UcpMap> {
    let (orbit, index) = commutative_block(&domain, w)?;
    let Orbit::Pair(rep, _) = orbit else {
        let label = domain.commutative_layout().unwrap().space.points()[w].clone();
        return Err(Error::Point(label, "is a fixed point of the involution"));
    };
    let sign = if w == rep { 1.0 } else { -1.0 };
    let mut values = vec![RealMatrix::zeros(2, 2); domain.dimension()];
    values[index] = RealMatrix::identity(2, 2);
    values[index + 1] = crate::algebra::rotation_generator() * sign;
    UcpMap::new(domain, 2, values)
}

/// `Φ_S(λ) = Re(λ)·I_n + Im(λ)·S` on the complex numbers.
pub fn phi_from_skew(s: &RealMatrix, tol: &Tolerance) -> Result<UcpMap> {
    let n = crate::numerics::ensure_square(s, "skew matrix")?;
    let deviation = op_norm(&(s + s.transpose()));
    if deviation > tol.effective(s) {
        return Err(Error::NotSkew { deviation });
    }
    let domain = Arc::new(crate::algebra::complex_as_real());
    UcpMap::new(domain, n, vec![RealMatrix::identity(n, n), s.clone()])
}

/// Point-mass data of a map on `C(Ω, −)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PointBlock {
    /// `P_w = Φ(δ_w)` for a fixed point.
    Fixed { point: usize, p: RealMatrix },
    /// `Q_w = X + iY` for a pair representative, so that
    /// `Φ(f) ∋ 2(Re f(w)·X − Im f(w)·Y)`.
    Pair {
        point: usize,
        x: RealMatrix,
        y: RealMatrix,
    },
}

pub fn point_blocks(phi: &UcpMap) -> Result<Vec<PointBlock>> {
    let layout = phi
        .domain()
        .commutative_layout()
        .ok_or(Error::WrongDomain {
            expected: "commutative",
        })?;
    Ok(layout
        .blocks
        .iter()
        .map(|b| match b.orbit {
            Orbit::Fixed(w) => PointBlock::Fixed {
                point: w,
                p: phi.values()[b.basis_index].clone(),
            },
            Orbit::Pair(w, _) => PointBlock::Pair {
                point: w,
                x: &phi.values()[b.basis_index] * 0.5,
                y: &phi.values()[b.basis_index + 1] * -0.5,
            },
        })
        .collect())
}

/// Inverse of [`point_blocks`]; `blocks` must list every orbit in order.
pub fn from_point_blocks(
    domain: Arc<ConcreteAlgebra>,
    m: usize,
    blocks: &[PointBlock],
) -> Result<UcpMap> {
    let layout = domain.commutative_layout().ok_or(Error::WrongDomain {
        expected: "commutative",
    })?;
    if layout.blocks.len() != blocks.len() {
        return Err(Error::Shape(format!(
            "expected {} point blocks, got {}",
            layout.blocks.len(),
            blocks.len()
        )));
    }
    let mut values = vec![RealMatrix::zeros(m, m); domain.dimension()];
    for (slot, block) in layout.blocks.iter().zip(blocks) {
        match (slot.orbit, block) {
            (Orbit::Fixed(w), PointBlock::Fixed { point, p }) if w == *point => {
                values[slot.basis_index] = p.clone();
            }
            (Orbit::Pair(w, _), PointBlock::Pair { point, x, y }) if w == *point => {
                values[slot.basis_index] = x * 2.0;
                values[slot.basis_index + 1] = y * -2.0;
            }
            _ => {
                return Err(Error::Point(
                    layout.space.points()[slot.orbit.representative()].clone(),
                    "block does not match the orbit structure",
                ))
            }
        }
    }
    UcpMap::new(domain, m, values)
}

/// Per-point positivity: `P_w ⪰ 0` and `[[X, −Y], [Y, X]] ⪰ 0`.
pub fn point_blocks_positive(blocks: &[PointBlock], tol: &Tolerance) -> Result<bool> {
    for b in blocks {
        let ok = match b {
            PointBlock::Fixed { p, .. } => is_psd(p, tol)?,
            PointBlock::Pair { x, y, .. } => is_psd(&encode_complex(x, y), tol)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Column vector helper used in tests and witnesses.
pub fn basis_vector(len: usize, k: usize) -> DVector<f64> {
    let mut v = DVector::zeros(len);
    v[k] = 1.0;
    v
}
