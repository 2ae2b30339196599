//! Acceptance suite: worked examples reproduced exactly, plus seeded
//! property sweeps. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

use std::process::Command;
use std::sync::Arc;

use rand::Rng;
use realucp::algebra::{
    commutative_algebra, complex_as_real, matrix_algebra, quaternion_algebra, rotation_generator,
    ConcreteAlgebra, InvolutiveFiniteSpace, RepresentationType,
};
use realucp::cpmaps::{
    ad_conjugate, direct_sum, inflation, is_completely_positive, kraus_map, phi_from_skew, pi_map,
    rho_map, CStarCombination, UcpMap,
};
use realucp::extremality::{
    are_disjoint, complexification_extremality_probe, find_unitary_equivalence, is_cstar_extreme,
    is_linear_extreme, verify_nonextremality_witness, ExtremalityOptions, NonExtremalityWitness,
    ProbeOutcome, Verdict,
};
use realucp::numerics::{RealMatrix, Tolerance};
use realucp::sampling::{
    gaussian_vector, random_isometry, random_kraus, random_orthogonal, random_skew_contraction,
    rng, SeededRng,
};
use realucp::skewconv::{
    cstar_verdict_via_map, is_cstar_extreme_skew, is_linear_extreme_skew, validate,
};
use realucp::stinespring::{is_pure, minimal_stinespring, radon_nikodym};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn opts() -> ExtremalityOptions {
    ExtremalityOptions::default()
}

fn half(n: usize) -> RealMatrix {
    RealMatrix::identity(n, n) * std::f64::consts::FRAC_1_SQRT_2
}

fn rows(r: usize, c: usize, data: &[f64]) -> RealMatrix {
    RealMatrix::from_row_slice(r, c, data)
}

fn two_points() -> Arc<ConcreteAlgebra> {
    let space = InvolutiveFiniteSpace::new(vec!["1".into(), "2".into()], vec![1, 0]).unwrap();
    Arc::new(commutative_algebra(space).unwrap())
}

/// `a` fixed, `b ↔ c`, `d ↔ e`.
fn five_points() -> Arc<ConcreteAlgebra> {
    let labels = ["a", "b", "c", "d", "e"].map(String::from).to_vec();
    let space = InvolutiveFiniteSpace::new(labels, vec![0, 2, 1, 4, 3]).unwrap();
    Arc::new(commutative_algebra(space).unwrap())
}

fn conjugated(phi: &UcpMap, g: &mut SeededRng) -> UcpMap {
    ad_conjugate(phi, &random_orthogonal(phi.codomain_dim(), g)).unwrap()
}

/// Inflation of `λ ↦ Re λ` to `R²`, against the two displayed
/// `*`-homomorphisms.
fn real_part_inflation() -> Check {
    let o = ExtremalityOptions {
        tol: Tolerance::new(1e-8, Tolerance::default().rtol),
        ..opts()
    };
    let c = Arc::new(complex_as_real());
    let phi = inflation(c.clone(), &[1.0, 0.0], 2, &o.tol).map_err(e)?;
    phi.validate_ucp(&o.tol).map_err(e)?;
    ensure(
        !is_linear_extreme(&phi, &o).map_err(e)?,
        "inflation reported linear-extreme",
    )?;

    // Φ₁(λ) = [[Re λ, Im λ], [−Im λ, Re λ]], Φ₂ its conjugate.
    let j = rows(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let phi1 = UcpMap::new(c.clone(), 2, vec![RealMatrix::identity(2, 2), j.clone()]).map_err(e)?;
    let phi2 = UcpMap::new(c.clone(), 2, vec![RealMatrix::identity(2, 2), -j]).map_err(e)?;
    let witness = NonExtremalityWitness {
        combination: CStarCombination::new(vec![(half(2), phi1.clone()), (half(2), phi2)], &o.tol)
            .map_err(e)?,
        inequivalent_index: 0,
    };
    ensure(
        verify_nonextremality_witness(&phi, &witness, &o).map_err(e)?,
        "displayed witness rejected",
    )?;

    let state = inflation(c.clone(), &[1.0, 0.0], 1, &o.tol).map_err(e)?;
    let t = minimal_stinespring(&state, &o.tol).map_err(e)?;
    ensure(t.kdim == 2, format!("kdim {}", t.kdim))?;
    let kind = t.representation_type(&o.tol).map_err(e)?;
    ensure(
        kind == RepresentationType::Complex,
        format!("type {}", kind.as_str()),
    )?;
    let rep = UcpMap::new(c, 2, t.rep_values.clone()).map_err(e)?;
    ensure(
        find_unitary_equivalence(&rep, &phi1, &o)
            .map_err(e)?
            .is_some(),
        "dilation is not equivalent to the displayed representation",
    )?;
    Ok("linear=false, witness verified, kdim=2, type=Complex".into())
}

/// Inflation of the real-part state of `H` to `R²`.
fn quaternion_inflation() -> Check {
    let o = opts();
    let h = Arc::new(quaternion_algebra());
    let phi = inflation(h.clone(), &[1.0, 0.0, 0.0, 0.0], 2, &o.tol).map_err(e)?;
    phi.validate_ucp(&o.tol).map_err(e)?;
    ensure(
        !is_linear_extreme(&phi, &o).map_err(e)?,
        "inflation reported linear-extreme",
    )?;

    // Φ±(α + βi + γj + δk) = [[α, ±β], [∓β, α]].
    let j = rows(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let z = RealMatrix::zeros(2, 2);
    let one = RealMatrix::identity(2, 2);
    let plus = UcpMap::new(
        h.clone(),
        2,
        vec![one.clone(), j.clone(), z.clone(), z.clone()],
    )
    .map_err(e)?;
    let minus = UcpMap::new(h.clone(), 2, vec![one, -j, z.clone(), z]).map_err(e)?;
    let witness = NonExtremalityWitness {
        combination: CStarCombination::new(vec![(half(2), plus), (half(2), minus)], &o.tol)
            .map_err(e)?,
        inequivalent_index: 0,
    };
    ensure(
        verify_nonextremality_witness(&phi, &witness, &o).map_err(e)?,
        "displayed witness rejected",
    )?;

    let state = inflation(h.clone(), &[1.0, 0.0, 0.0, 0.0], 1, &o.tol).map_err(e)?;
    let t = minimal_stinespring(&state, &o.tol).map_err(e)?;
    ensure(t.kdim == 4, format!("kdim {}", t.kdim))?;
    let kind = t.representation_type(&o.tol).map_err(e)?;
    ensure(
        kind == RepresentationType::Quaternion,
        format!("type {}", kind.as_str()),
    )?;

    // The regular representation as displayed, written out entry by entry.
    let displayed = vec![
        RealMatrix::identity(4, 4),
        rows(
            4,
            4,
            &[
                0., -1., 0., 0., 1., 0., 0., 0., 0., 0., 0., -1., 0., 0., 1., 0.,
            ],
        ),
        rows(
            4,
            4,
            &[
                0., 0., -1., 0., 0., 0., 0., 1., 1., 0., 0., 0., 0., -1., 0., 0.,
            ],
        ),
        rows(
            4,
            4,
            &[
                0., 0., 0., -1., 0., 0., -1., 0., 0., 1., 0., 0., 1., 0., 0., 0.,
            ],
        ),
    ];
    let displayed = UcpMap::new(h.clone(), 4, displayed).map_err(e)?;
    let rep = UcpMap::new(h, 4, t.rep_values.clone()).map_err(e)?;
    let u = find_unitary_equivalence(&rep, &displayed, &o)
        .map_err(e)?
        .ok_or("dilation is not orthogonally equivalent to the displayed representation")?;
    ensure(
        ad_conjugate(&displayed, &u)
            .map_err(e)?
            .approx_eq(&rep, &o.tol.scaled(100.0)),
        "Ad_U mismatch",
    )?;
    Ok("linear=false, witness verified, kdim=4, type=Quaternion, rep matches".into())
}

/// A pure state of `M_2(R)` inflated to `R³`.
fn pure_state_inflation() -> Check {
    let o = opts();
    let dom = Arc::new(matrix_algebra(2).map_err(e)?);
    let x = [0.6, 0.8];
    let state: Vec<f64> = (0..4).map(|k| x[k / 2] * x[k % 2]).collect();
    let phi = inflation(dom, &state, 3, &o.tol).map_err(e)?;
    let probe = complexification_extremality_probe(&phi, &o).map_err(e)?;
    ensure(probe == ProbeOutcome::Yes, format!("probe {probe:?}"))?;
    let verdict = is_cstar_extreme(&phi, &o).map_err(e)?.is_cstar_extreme;
    ensure(verdict == Verdict::Yes, format!("decider {verdict}"))?;
    Ok("probe=yes, decider=yes".into())
}

/// `ρ_w` and `Π_w` combinations on two conjugate points.
fn two_point_cases() -> Check {
    let o = opts();
    let dom = two_points();
    let cases = [
        (2, 0, Verdict::No),
        (0, 1, Verdict::Yes),
        (1, 1, Verdict::Yes),
        (0, 2, Verdict::Yes),
        (2, 1, Verdict::No),
    ];
    let mut line = Vec::new();
    for (rho, pi, expected) in cases {
        let mut parts = vec![pi_map(dom.clone(), 0).map_err(e)?; pi];
        parts.extend(vec![rho_map(dom.clone(), 0).map_err(e)?; rho]);
        let phi = direct_sum(&parts, &o.tol).map_err(e)?;
        let report = is_cstar_extreme(&phi, &o).map_err(e)?;
        let name = format!("{}rho+{}pi", rho, pi);
        ensure(
            report.is_cstar_extreme == expected,
            format!("{name}: got {}", report.is_cstar_extreme),
        )?;
        if expected == Verdict::No {
            let w = report
                .witness
                .as_ref()
                .ok_or(format!("{name}: no witness"))?;
            ensure(
                verify_nonextremality_witness(&phi, w, &o).map_err(e)?,
                format!("{name}: witness rejected"),
            )?;
        }
        line.push(format!("{name}={}", report.is_cstar_extreme));
    }
    Ok(line.join(" "))
}

fn orthonormal_columns(r: usize, c: usize, data: &[f64]) -> RealMatrix {
    rows(r, c, data).qr().q().columns(0, c).into_owned()
}

/// Nested versus incomparable compressions on `M_3(R)`, each under 20
/// random orthogonal conjugations.
fn matrix_nesting() -> Check {
    let o = opts();
    let dom = Arc::new(matrix_algebra(3).map_err(e)?);
    let v1 = orthonormal_columns(3, 2, &[1.0, 0.2, 0.3, 1.0, -0.4, 0.5]);
    let v2 = &v1 * orthonormal_columns(2, 1, &[0.8, -0.6]);
    let nested = direct_sum(
        &[
            kraus_map(dom.clone(), &[v1]).map_err(e)?,
            kraus_map(dom.clone(), &[v2]).map_err(e)?,
        ],
        &o.tol,
    )
    .map_err(e)?;
    let w1 = orthonormal_columns(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    let w2 = orthonormal_columns(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    let apart = direct_sum(
        &[
            kraus_map(dom.clone(), &[w1]).map_err(e)?,
            kraus_map(dom, &[w2]).map_err(e)?,
        ],
        &o.tol,
    )
    .map_err(e)?;
    let mut g = rng(0x0c0ffee);
    for (phi, expected, name) in [
        (&nested, Verdict::Yes, "nested"),
        (&apart, Verdict::No, "incomparable"),
    ] {
        let v = is_cstar_extreme(phi, &o).map_err(e)?.is_cstar_extreme;
        ensure(v == expected, format!("{name}: got {v}"))?;
        for k in 0..20 {
            let psi = conjugated(phi, &mut g);
            let v = is_cstar_extreme(&psi, &o).map_err(e)?.is_cstar_extreme;
            ensure(v == expected, format!("{name}, conjugation {k}: got {v}"))?;
        }
    }
    Ok("nested=yes, incomparable=no, stable under 20 conjugations each".into())
}

fn skew3(a: f64, b: f64, c: f64) -> RealMatrix {
    rows(3, 3, &[0.0, a, b, -a, 0.0, c, -b, -c, 0.0])
}

/// Skew-symmetric contractions: the n = 2 grid and a sample of the n = 3
/// unit sphere.
fn skew_suite() -> Check {
    let o = opts();
    let mut extreme_t = Vec::new();
    for k in -10i32..=10 {
        let t = f64::from(k) / 10.0;
        let sc = validate(&(rotation_generator() * t), &o.tol).map_err(e)?;
        if is_cstar_extreme_skew(&sc) {
            extreme_t.push(k);
        }
    }
    ensure(
        extreme_t == [-10, 10],
        format!("n=2 extreme points at t/10 = {extreme_t:?}"),
    )?;

    // Six axis points, then 44 Gaussian directions.
    let mut points: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut g = rng(2024);
    while points.len() < 50 {
        let v = gaussian_vector(3, &mut g);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            points.push([v[0] / n, v[1] / n, v[2] / n]);
        }
    }
    let mut extreme = 0;
    for p in &points {
        let sc = validate(&skew3(p[0], p[1], p[2]), &o.tol).map_err(e)?;
        ensure(
            is_linear_extreme_skew(&sc, &o).map_err(e)?,
            format!("{p:?} not linear-extreme"),
        )?;
        // A 3×3 skew matrix of the vector v has singular values |v|, |v|, 0.
        let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sv_test = [r, r, 0.0]
            .iter()
            .zip([1.0, 1.0, 0.0])
            .all(|(s, t)| (s - t).abs() <= 1e-7);
        let cstar = is_cstar_extreme_skew(&sc);
        ensure(
            cstar == sv_test,
            format!("{p:?}: cstar {cstar}, singular-value test {sv_test}"),
        )?;
        let via_map = cstar_verdict_via_map(&sc, &o).map_err(e)?;
        ensure(
            (via_map == Verdict::Yes) == cstar,
            format!("{p:?}: map decider says {via_map}"),
        )?;
        extreme += usize::from(cstar);
    }
    ensure(
        extreme == 50,
        format!("{extreme}/50 sphere points C*-extreme"),
    )?;
    let diag = validate(&skew3(0.5f64.sqrt(), 0.5f64.sqrt(), 0.0), &o.tol).map_err(e)?;
    ensure(
        is_cstar_extreme_skew(&diag),
        "(1/√2, 1/√2, 0) not C*-extreme",
    )?;
    Ok(
        "n=2 extreme exactly at t=±1; 50/50 sphere points linear and C*-extreme; bridge agrees"
            .into(),
    )
}

/// Minimum eigenvalue of a symmetric matrix.
fn min_eig(m: &RealMatrix) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.min()
}

/// Choi matrix `Σ E_ij ⊗ Φ(E_ij)` and block Gram `[Φ(E_abᵀ E_cd)]`
/// assembled from the values on matrix units.
fn choi_and_gram(n: usize, m: usize, values: &[RealMatrix]) -> (RealMatrix, RealMatrix) {
    let mut choi = RealMatrix::zeros(n * m, n * m);
    let mut gram = RealMatrix::zeros(n * n * m, n * n * m);
    for i in 0..n {
        for j in 0..n {
            choi.view_mut((i * m, j * m), (m, m))
                .copy_from(&values[i * n + j]);
        }
    }
    // E_abᵀ E_cd = δ_ac E_bd.
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let (r, c) = ((a * n + b) * m, (a * n + d) * m);
                gram.view_mut((r, c), (m, m)).copy_from(&values[b * n + d]);
            }
        }
    }
    (choi, gram)
}

fn cp_agreement(instances: usize) -> Result<usize, String> {
    let t = Tolerance::default();
    let mut g = rng(7);
    let mut counted = 0;
    let (mut cp, mut not_cp) = (0, 0);
    while counted < instances {
        let n = g.random_range(2..4);
        let m = g.random_range(1..=n);
        let dom = Arc::new(matrix_algebra(n).map_err(e)?);
        let kraus = kraus_map(
            dom.clone(),
            &random_kraus(n, m, g.random_range(1..4), &mut g),
        )
        .map_err(e)?;
        // Mixing in a transpose compression breaks complete positivity
        // for large enough weight.
        let w = random_isometry(n, m, &mut g);
        let p: f64 = if g.random_bool(0.5) {
            0.0
        } else {
            g.random_range(0.0..1.0)
        };
        let values: Vec<RealMatrix> = (0..n * n)
            .map(|k| {
                let unit = RealMatrix::from_fn(n, n, |r, c| f64::from(u8::from(r * n + c == k)));
                &kraus.values()[k] * (1.0 - p) + w.transpose() * unit.transpose() * &w * p
            })
            .collect();
        let phi = UcpMap::new(dom, m, values.clone()).map_err(e)?;
        let (choi, gram) = choi_and_gram(n, m, &values);
        let (lc, lg) = (min_eig(&choi), min_eig(&gram));
        let scale = choi.norm().max(1.0);
        // Instances inside the tolerance band carry no information.
        if (-1e-6 * scale..-1e-9 * scale).contains(&lc)
            || (-1e-6 * scale..-1e-9 * scale).contains(&lg)
        {
            continue;
        }
        let choi_psd = lc >= -1e-9 * scale;
        let gram_psd = lg >= -1e-9 * scale;
        let verdict = is_completely_positive(&phi, &t).map_err(e)?;
        ensure(
            choi_psd == gram_psd && verdict.is_cp == choi_psd,
            format!(
                "n={n} m={m} p={p}: choi {lc:.3e}, gram {lg:.3e}, library says {}",
                verdict.is_cp
            ),
        )?;
        if choi_psd {
            cp += 1;
        } else {
            not_cp += 1;
        }
        counted += 1;
    }
    ensure(
        cp >= 20 && not_cp >= 20,
        format!("unbalanced sample: {cp} CP, {not_cp} not"),
    )?;
    Ok(counted)
}

/// Pure pieces attached to one point: `ρ_w` copies, then `Π_w` copies.
fn orbit_pieces(dom: &Arc<ConcreteAlgebra>, w: usize, rho: usize, pi: usize) -> Vec<UcpMap> {
    let mut out = vec![rho_map(dom.clone(), w).unwrap(); rho];
    if pi > 0 {
        out.extend(std::iter::repeat_n(pi_map(dom.clone(), w).unwrap(), pi));
    }
    out
}

/// Random UCP maps over matrix, commutative, quaternion and skew-derived
/// domains.
fn corpus_sample(g: &mut SeededRng) -> UcpMap {
    let t = Tolerance::default();
    match g.random_range(0..4) {
        0 => {
            let dom = five_points();
            let mut parts = orbit_pieces(&dom, 0, g.random_range(0..3), 0);
            for w in [1, 3] {
                parts.extend(orbit_pieces(
                    &dom,
                    w,
                    g.random_range(0..3),
                    g.random_range(0..2),
                ));
            }
            if parts.is_empty() {
                parts.push(rho_map(dom, 0).unwrap());
            }
            conjugated(&direct_sum(&parts, &t).unwrap(), g)
        }
        1 => {
            let n = g.random_range(2..4);
            let dom = Arc::new(matrix_algebra(n).unwrap());
            if g.random_bool(0.5) {
                kraus_map(
                    dom,
                    &random_kraus(n, g.random_range(1..4), g.random_range(1..4), g),
                )
                .unwrap()
            } else {
                let v1 = random_isometry(n, g.random_range(1..=n), g);
                let v2 = random_isometry(n, 1, g);
                let sum = direct_sum(
                    &[
                        kraus_map(dom.clone(), &[v1]).unwrap(),
                        kraus_map(dom, &[v2]).unwrap(),
                    ],
                    &t,
                );
                conjugated(&sum.unwrap(), g)
            }
        }
        2 => phi_from_skew(&random_skew_contraction(g.random_range(1..5), g), &t).unwrap(),
        _ => inflation(
            Arc::new(quaternion_algebra()),
            &[1.0, 0.0, 0.0, 0.0],
            g.random_range(1..3),
            &t,
        )
        .unwrap(),
    }
}

fn radon_nikodym_round_trip(instances: usize) -> Result<f64, String> {
    let t = Tolerance::default();
    let mut g = rng(11);
    let mut worst: f64 = 0.0;
    for k in 0..instances {
        let phi = corpus_sample(&mut g);
        let triple = minimal_stinespring(&phi, &t).map_err(e)?;
        let d = radon_nikodym(&phi, &phi, &triple, &t)
            .map_err(|err| format!("instance {k}: {err}"))?
            .d;
        let dev = (d - RealMatrix::identity(triple.kdim, triple.kdim)).norm();
        ensure(dev <= 1e-8, format!("instance {k}: ‖D − I‖ = {dev:.3e}"))?;
        worst = worst.max(dev);
    }
    Ok(worst)
}

fn implication_chain(instances: usize) -> Result<[usize; 3], String> {
    let o = opts();
    let mut g = rng(13);
    let mut counts = [0; 3];
    for k in 0..instances {
        let phi = corpus_sample(&mut g);
        let report = is_cstar_extreme(&phi, &o).map_err(e)?;
        let linear = is_linear_extreme(&phi, &o).map_err(e)?;
        ensure(
            report.is_pure == is_pure(&phi, &o.tol).map_err(e)?,
            format!("instance {k}: purity mismatch"),
        )?;
        ensure(
            !report.is_pure || report.is_cstar_extreme == Verdict::Yes,
            format!("instance {k}: pure but not C*-extreme"),
        )?;
        ensure(
            report.is_cstar_extreme != Verdict::Yes || linear,
            format!("instance {k}: C*-extreme but not linear-extreme"),
        )?;
        counts[0] += usize::from(report.is_pure);
        counts[1] += usize::from(report.is_cstar_extreme == Verdict::Yes);
        counts[2] += usize::from(linear);
    }
    Ok(counts)
}

fn disjoint_sums(instances: usize) -> Result<usize, String> {
    let o = opts();
    let mut g = rng(17);
    let dom = five_points();
    let (mut counted, mut extreme) = (0, 0);
    while counted < instances {
        let mut summands = Vec::new();
        for w in [0usize, 1, 3] {
            if g.random_bool(0.3) {
                continue;
            }
            let pi = if w == 0 { 0 } else { g.random_range(0..2) };
            let rho = g.random_range(usize::from(pi == 0)..3);
            summands.push(conjugated(
                &direct_sum(&orbit_pieces(&dom, w, rho, pi), &o.tol).map_err(e)?,
                &mut g,
            ));
        }
        if summands.len() < 2 {
            continue;
        }
        for i in 0..summands.len() {
            for j in i + 1..summands.len() {
                ensure(
                    are_disjoint(&summands[i], &summands[j], &o.tol).map_err(e)?,
                    "summands not disjoint",
                )?;
            }
        }
        let mut each = true;
        for s in &summands {
            each &= is_cstar_extreme(s, &o).map_err(e)?.is_cstar_extreme == Verdict::Yes;
        }
        let whole = is_cstar_extreme(&direct_sum(&summands, &o.tol).map_err(e)?, &o).map_err(e)?;
        ensure(
            (whole.is_cstar_extreme == Verdict::Yes) == each,
            format!(
                "instance {counted}: sum {} but summands extreme = {each}",
                whole.is_cstar_extreme
            ),
        )?;
        extreme += usize::from(each);
        counted += 1;
    }
    ensure(
        extreme > 0 && extreme < counted,
        "sample lacks one of the two outcomes",
    )?;
    Ok(counted)
}

fn property_suites() -> Check {
    let cp = cp_agreement(120)?;
    let worst = radon_nikodym_round_trip(100)?;
    let [pure, cstar, linear] = implication_chain(100)?;
    let sums = disjoint_sums(100)?;
    Ok(format!(
        "CP agreement on {cp}; RN worst ‖D−I‖ {worst:.1e} on 100; chain pure {pure} ⊆ C* {cstar} ⊆ linear {linear} of 100; {sums} disjoint sums"
    ))
}

fn gallery_is_deterministic() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_realucp"))
            .args(["gallery", "--json", "--seed", "42"])
            .env_remove("REALUCP_SEED")
            .output()
            .map_err(e)
    };
    let (a, b) = (run()?, run()?);
    ensure(
        a.status.success(),
        format!("gallery exited with {:?}", a.status.code()),
    )?;
    ensure(
        !a.stdout.is_empty() && a.stdout == b.stdout,
        "gallery JSON differs between runs",
    )?;
    Ok(format!("{} identical bytes, all rows pass", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("real-part state inflation", real_part_inflation),
        ("quaternion state inflation", quaternion_inflation),
        ("pure-state inflation on M_2", pure_state_inflation),
        ("rho/Pi cases on two points", two_point_cases),
        ("matrix-domain nesting", matrix_nesting),
        ("skew-symmetric contractions", skew_suite),
        ("property suites", property_suites),
        ("gallery determinism", gallery_is_deterministic),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
