use super::{
    decompose_irreducible, find_unitary_equivalence, linear_kernel, linear_nonextremality_witness,
    verify_nonextremality_witness, ExtremalityOptions, IrreducibleDecomposition,
    NonExtremalityWitness, Verdict,
};
use crate::algebra::{
    classify_type, intertwiners, is_irreducible, AlgebraKind, Orbit, RepresentationType,
};
use crate::cpmaps::{pi_map, rho_map, CStarCombination, UcpMap};
use crate::error::{Error, Result};
use crate::numerics::{op_norm, polar, range_projection, RealMatrix};
use crate::stinespring::{minimal_stinespring, StinespringTriple};

/// One summand's canonical range inside the reference representation
/// space of its equivalence group.
#[derive(Debug, Clone)]
pub struct RangeEntry {
    pub summand: usize,
    pub group: usize,
    /// Isometry onto the range, in reference coordinates.
    pub isometry: RealMatrix,
}

impl RangeEntry {
    pub fn dim(&self) -> usize {
        self.isometry.ncols()
    }

    pub fn projection(&self) -> RealMatrix {
        range_projection(&self.isometry)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummandKind {
    Rho,
    Pi,
}

/// Pure summands attached to one orbit of the involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTally {
    pub orbit: Orbit,
    pub label: String,
    pub rho: usize,
    pub pi: usize,
}

#[derive(Debug, Clone)]
pub enum Certificate {
    /// Ranges of compressions, nested within each group (largest first).
    NestedRanges(Vec<RangeEntry>),
    /// Two summands of one group whose ranges are not nested.
    IncomparableRanges {
        first: RangeEntry,
        second: RangeEntry,
    },
    /// Count of `ρ_w` and `Π_w` summands per orbit.
    TypeTally(Vec<OrbitTally>),
    /// An irreducible summand that is not pure.
    NonPureSummand { index: usize, dim: usize },
    /// The map is pure or a `*`-homomorphism.
    PureOrMultiplicative,
}

#[derive(Debug, Clone)]
pub struct ExtremalityReport {
    pub is_pure: bool,
    pub is_linear_extreme: bool,
    pub is_cstar_extreme: Verdict,
    pub certificate: Option<Certificate>,
    pub witness: Option<NonExtremalityWitness>,
    pub decomposition: Option<IrreducibleDecomposition>,
    pub notes: Vec<String>,
}

/// C*-extremality decision.
///
/// Matrix domains decide by nested ranges inside the identity
/// representation; commutative domains by the `ρ_w`/`Π_w` tally per orbit.
/// On other domains the verdict is `Yes` for pure or multiplicative maps,
/// `No` when a necessary condition fails, a nesting decision when every
/// summand is pure of real type, and `Undecided` otherwise.
pub fn is_cstar_extreme(phi: &UcpMap, opts: &ExtremalityOptions) -> Result<ExtremalityReport> {
    let tol = &opts.tol;
    phi.validate_ucp(tol)?;
    let triple = minimal_stinespring(phi, tol)?;
    let is_pure = is_irreducible(triple.kdim, &triple.rep_values, tol)?;
    let is_linear_extreme = linear_kernel(&triple, opts)?.is_empty();
    let mut report = ExtremalityReport {
        is_pure,
        is_linear_extreme,
        is_cstar_extreme: Verdict::Undecided,
        certificate: None,
        witness: None,
        decomposition: None,
        notes: Vec::new(),
    };
    let multiplicative = phi.is_multiplicative(tol);
    if is_pure || multiplicative {
        report.is_cstar_extreme = Verdict::Yes;
        report.certificate = Some(Certificate::PureOrMultiplicative);
        report.notes.push(
            if is_pure {
                "map is pure"
            } else {
                "map is a *-homomorphism"
            }
            .to_string(),
        );
        return finish(report);
    }
    if !is_linear_extreme {
        report.is_cstar_extreme = Verdict::No;
        report
            .notes
            .push("map is not a linear extreme point".into());
        report.witness = linear_nonextremality_witness(phi, opts)?;
        report.decomposition = Some(decompose_irreducible(phi, opts)?);
        return finish(report);
    }

    let dec = decompose_irreducible(phi, opts)?;
    let mut triples = Vec::with_capacity(dec.summands.len());
    for (j, s) in dec.summands.iter().enumerate() {
        let t = minimal_stinespring(s, tol)?;
        if !is_irreducible(t.kdim, &t.rep_values, tol)? {
            report.is_cstar_extreme = Verdict::No;
            report.notes.push(format!(
                "irreducible summand {j} of size {} is not pure",
                dec.dims[j]
            ));
            if report.certificate.is_none() {
                report.certificate = Some(Certificate::NonPureSummand {
                    index: j,
                    dim: dec.dims[j],
                });
            }
        }
        triples.push(t);
    }
    if report.is_cstar_extreme == Verdict::No {
        report.decomposition = Some(dec);
        return finish(report);
    }

    match phi.kind().clone() {
        AlgebraKind::Matrix(n) => {
            let reference = phi.domain().basis().to_vec();
            decide_by_nesting(&mut report, &triples, Some((n, reference)), opts)?;
        }
        AlgebraKind::Commutative(_) => decide_commutative(&mut report, phi, &dec, opts)?,
        AlgebraKind::General => {
            let mut all_real = true;
            for t in &triples {
                if classify_type(t.kdim, &t.rep_values, tol)? != RepresentationType::Real {
                    all_real = false;
                }
            }
            if all_real {
                report
                    .notes
                    .push("all pure summands are of real type".into());
                decide_by_nesting(&mut report, &triples, None, opts)?;
            } else {
                report.notes.push(
                    "pure summands of complex or quaternionic type; no decision procedure applies"
                        .into(),
                );
            }
        }
    }
    report.decomposition = Some(dec);
    finish(report)
}

fn finish(report: ExtremalityReport) -> Result<ExtremalityReport> {
    if report.is_cstar_extreme == Verdict::Yes && !report.is_linear_extreme {
        return Err(Error::Numerical(
            "C*-extreme verdict contradicts the linear extremality test".into(),
        ));
    }
    Ok(report)
}

/// Groups real-type pure summands by equivalence of their dilations and
/// maps each summand's range into its group's reference space. The range
/// is canonical because the intertwiner is unique up to sign.
fn decide_by_nesting(
    report: &mut ExtremalityReport,
    triples: &[StinespringTriple],
    fixed_reference: Option<(usize, Vec<RealMatrix>)>,
    opts: &ExtremalityOptions,
) -> Result<()> {
    let tol = &opts.tol;
    let mut references: Vec<(usize, Vec<RealMatrix>)> = fixed_reference.into_iter().collect();
    let fixed = !references.is_empty();
    let mut entries = Vec::with_capacity(triples.len());
    for (j, t) in triples.iter().enumerate() {
        let mut placed = None;
        for (g, (k, reps)) in references.iter().enumerate() {
            let ints = intertwiners(t.kdim, &t.rep_values, *k, reps, tol)?;
            if ints.is_empty() {
                continue;
            }
            if ints.len() != 1 || *k != t.kdim {
                return Err(Error::Numerical(format!(
                    "summand {j} has a {}-dimensional intertwiner space with its reference",
                    ints.len()
                )));
            }
            let o = polar(&ints[0], tol)?.q;
            placed = Some((g, &o * &t.isometry));
            break;
        }
        let (group, isometry) = match placed {
            Some(p) => p,
            None if fixed => {
                return Err(Error::Numerical(format!(
                    "pure summand {j} is not equivalent to the identity representation"
                )))
            }
            None => {
                references.push((t.kdim, t.rep_values.clone()));
                (references.len() - 1, t.isometry.clone())
            }
        };
        entries.push(RangeEntry {
            summand: j,
            group,
            isometry,
        });
    }
    entries.sort_by(|a, b| {
        a.group
            .cmp(&b.group)
            .then(b.dim().cmp(&a.dim()))
            .then(a.summand.cmp(&b.summand))
    });
    let nest_tol = tol.scaled(1e3).at_scale(1.0).max(1e-8);
    for pair in entries.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.group != b.group {
            continue;
        }
        let (pa, pb) = (a.projection(), b.projection());
        if op_norm(&(&pa * &pb - &pb)) > nest_tol {
            report.is_cstar_extreme = Verdict::No;
            report.notes.push(format!(
                "ranges of summands {} and {} are not nested",
                a.summand, b.summand
            ));
            report.certificate = Some(Certificate::IncomparableRanges {
                first: a.clone(),
                second: b.clone(),
            });
            return Ok(());
        }
    }
    report.is_cstar_extreme = Verdict::Yes;
    report.notes.push(format!(
        "{} summands form nested compressions in {} group(s)",
        entries.len(),
        references.len()
    ));
    report.certificate = Some(Certificate::NestedRanges(entries));
    Ok(())
}

fn decide_commutative(
    report: &mut ExtremalityReport,
    phi: &UcpMap,
    dec: &IrreducibleDecomposition,
    opts: &ExtremalityOptions,
) -> Result<()> {
    let tol = &opts.tol;
    let domain = phi.domain().clone();
    let layout = domain
        .commutative_layout()
        .expect("commutative domain")
        .clone();
    let mut tallies: Vec<OrbitTally> = layout
        .blocks
        .iter()
        .map(|b| OrbitTally {
            orbit: b.orbit,
            label: layout.space.points()[b.orbit.representative()].clone(),
            rho: 0,
            pi: 0,
        })
        .collect();
    let mut rho_slots: Vec<Vec<usize>> = vec![Vec::new(); tallies.len()];
    let offsets = dec.offsets();
    let check = tol.scaled(1e3);
    for (j, s) in dec.summands.iter().enumerate() {
        let mut found = None;
        for (o, b) in layout.blocks.iter().enumerate() {
            let rep = b.orbit.representative();
            let kind = match s.codomain_dim() {
                1 if rho_map(domain.clone(), rep)?.approx_eq(s, &check) => Some(SummandKind::Rho),
                2 if matches!(b.orbit, Orbit::Pair(..))
                    && find_unitary_equivalence(s, &pi_map(domain.clone(), rep)?, opts)?
                        .is_some() =>
                {
                    Some(SummandKind::Pi)
                }
                _ => None,
            };
            if let Some(k) = kind {
                found = Some((o, k));
                break;
            }
        }
        let Some((o, kind)) = found else {
            return Err(Error::Numerical(format!(
                "pure summand {j} matches no rho_w or Pi_w"
            )));
        };
        match kind {
            SummandKind::Rho => {
                tallies[o].rho += 1;
                rho_slots[o].push(offsets[j]);
            }
            SummandKind::Pi => tallies[o].pi += 1,
        }
    }
    let offending = tallies
        .iter()
        .position(|t| matches!(t.orbit, Orbit::Pair(..)) && t.rho > 1);
    match offending {
        None => {
            report.is_cstar_extreme = Verdict::Yes;
            report
                .notes
                .push("every non-fixed orbit carries at most one rho_w".into());
        }
        Some(o) => {
            report.is_cstar_extreme = Verdict::No;
            report.notes.push(format!(
                "orbit of {} carries {} copies of rho_w",
                tallies[o].label, tallies[o].rho
            ));
            let rep = tallies[o].orbit.representative();
            let w = double_rho_witness(phi, dec, rep, rho_slots[o][0], rho_slots[o][1], opts)?;
            if verify_nonextremality_witness(phi, &w, opts)? {
                report.witness = Some(w);
            } else {
                report
                    .notes
                    .push("constructed witness failed verification".into());
            }
        }
    }
    report.certificate = Some(Certificate::TypeTally(tallies));
    Ok(())
}

/// `ρ_w ⊕ ρ_w = ½Π_w + ½Π_w̄` on the two slots, other summands unchanged,
/// conjugated back to the original frame.
fn double_rho_witness(
    phi: &UcpMap,
    dec: &IrreducibleDecomposition,
    rep: usize,
    o1: usize,
    o2: usize,
    opts: &ExtremalityOptions,
) -> Result<NonExtremalityWitness> {
    let domain = phi.domain().clone();
    let m = phi.codomain_dim();
    let q = &dec.block_unitary;
    let conj = domain.commutative_layout().unwrap().space.conj(rep);
    let mut terms = Vec::with_capacity(2);
    for w in [rep, conj] {
        let pi = pi_map(domain.clone(), w)?;
        let values = phi
            .values()
            .iter()
            .zip(pi.values())
            .map(|(v, p)| {
                let mut inner = q.transpose() * v * q;
                let slots = [o1, o2];
                for (a, &ra) in slots.iter().enumerate() {
                    for (b, &rb) in slots.iter().enumerate() {
                        inner[(ra, rb)] = p[(a, b)];
                    }
                }
                q * inner * q.transpose()
            })
            .collect();
        terms.push((
            RealMatrix::identity(m, m) * std::f64::consts::FRAC_1_SQRT_2,
            UcpMap::new(domain.clone(), m, values)?,
        ));
    }
    Ok(NonExtremalityWitness {
        combination: CStarCombination::new(terms, &opts.tol)?,
        inequivalent_index: 0,
    })
}
