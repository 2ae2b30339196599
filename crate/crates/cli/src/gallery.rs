//! Built-in corpus of worked examples with their known answers.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use realucp::algebra::{
    commutative_algebra, complex_as_real, matrix_algebra, quaternion_algebra, quaternion_units,
    rotation_generator, InvolutiveFiniteSpace,
};
use realucp::cpmaps::{
    direct_sum, inflation, kraus_map, pi_map, rho_map, CStarCombination, UcpMap,
};
use realucp::extremality::{
    complexification_extremality_probe, is_cstar_extreme, is_linear_extreme,
    verify_nonextremality_witness, ExtremalityOptions, NonExtremalityWitness, ProbeOutcome,
};
use realucp::numerics::{block_diag, RealMatrix};
use realucp::skewconv::{is_cstar_extreme_skew, is_linear_extreme_skew, validate};
use realucp::stinespring::{complexification_is_pure, minimal_stinespring};
use realucp::Result;

use crate::commands::RunOptions;
use crate::report::{header, GalleryReport, GalleryRow, ToleranceReport};

struct Case {
    name: &'static str,
    group: &'static str,
    expected: &'static str,
    run: fn(&ExtremalityOptions) -> Result<String>,
}

const CASES: &[Case] = &[
    Case {
        name: "real_part_state_inflation",
        group: "inflation",
        expected: "linear=false witness=verified kdim=2 type=Complex cstar=no",
        run: real_part_inflation,
    },
    Case {
        name: "real_part_state_complexification",
        group: "inflation",
        expected: "cstar=yes complexification_pure=false",
        run: real_part_complexification,
    },
    Case {
        name: "quaternion_state_inflation",
        group: "inflation",
        expected: "linear=false witness=verified kdim=4 type=Quaternion cstar=no",
        run: quaternion_inflation,
    },
    Case {
        name: "quaternion_block_sum",
        group: "inflation",
        expected: "linear=false witness=verified cstar=no",
        run: quaternion_block_sum,
    },
    Case {
        name: "pure_state_inflation_m2_r3",
        group: "matrix",
        expected: "probe=yes cstar=yes",
        run: pure_state_inflation,
    },
    Case {
        name: "nested_compressions",
        group: "matrix",
        expected: "cstar=yes",
        run: nested_compressions,
    },
    Case {
        name: "incomparable_compressions",
        group: "matrix",
        expected: "cstar=no",
        run: incomparable_compressions,
    },
    Case {
        name: "rho_rho",
        group: "commutative",
        expected: "cstar=no witness=verified",
        run: |o| commutative_case(o, 2, 0),
    },
    Case {
        name: "pi",
        group: "commutative",
        expected: "cstar=yes",
        run: |o| commutative_case(o, 0, 1),
    },
    Case {
        name: "pi_rho",
        group: "commutative",
        expected: "cstar=yes",
        run: |o| commutative_case(o, 1, 1),
    },
    Case {
        name: "pi_pi",
        group: "commutative",
        expected: "cstar=yes",
        run: |o| commutative_case(o, 0, 2),
    },
    Case {
        name: "pi_rho_rho",
        group: "commutative",
        expected: "cstar=no witness=verified",
        run: |o| commutative_case(o, 2, 1),
    },
    Case {
        name: "skew_n2_grid",
        group: "skew",
        expected: "cstar_extreme_t=[-1,1] linear_extreme_t=[-1,1]",
        run: skew_grid,
    },
    Case {
        name: "skew_n3_axis",
        group: "skew",
        expected: "cstar=true linear=true",
        run: |o| skew_sphere(o, 1.0, 0.0, 0.0),
    },
    Case {
        name: "skew_n3_diagonal",
        group: "skew",
        expected: "cstar=true linear=true",
        run: |o| skew_sphere(o, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0),
    },
    Case {
        name: "skew_n3_interior",
        group: "skew",
        expected: "cstar=false linear=false",
        run: |o| skew_sphere(o, 0.5, 0.5, 0.0),
    },
];

/// Runs every case whose name or group contains `filter`.
pub fn run_gallery(opts: &RunOptions, filter: Option<&str>) -> GalleryReport {
    let eopts = opts.extremality();
    let rows: Vec<GalleryRow> = CASES
        .iter()
        .filter(|c| filter.is_none_or(|f| c.name.contains(f) || c.group.contains(f)))
        .map(|c| {
            let computed = (c.run)(&eopts).unwrap_or_else(|e| format!("error: {e}"));
            GalleryRow {
                name: c.name.to_string(),
                group: c.group.to_string(),
                expected: c.expected.to_string(),
                pass: computed == c.expected,
                computed,
            }
        })
        .collect();
    let (schema_version, command) = header("gallery");
    GalleryReport {
        schema_version,
        command,
        seed: opts.seed,
        tolerance: ToleranceReport::from(&opts.tol),
        all_pass: rows.iter().all(|r| r.pass),
        rows,
    }
}

pub fn render_gallery(r: &GalleryReport) -> String {
    let width = r
        .rows
        .iter()
        .map(|x| x.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut out = vec![format!(
        "{:<width$}  {:<11}  {:<4}  computed",
        "case", "group", "pass"
    )];
    for row in &r.rows {
        out.push(format!(
            "{:<width$}  {:<11}  {:<4}  {}",
            row.name,
            row.group,
            if row.pass { "ok" } else { "FAIL" },
            row.computed
        ));
        if !row.pass {
            out.push(format!(
                "{:<width$}  {:<11}  {:<4}  expected {}",
                "", "", "", row.expected
            ));
        }
    }
    let passed = r.rows.iter().filter(|x| x.pass).count();
    out.push(format!("{passed}/{} cases pass", r.rows.len()));
    out.join("\n")
}

fn half(n: usize) -> RealMatrix {
    RealMatrix::identity(n, n) * FRAC_1_SQRT_2
}

fn witness_word(
    phi: &UcpMap,
    terms: Vec<(RealMatrix, UcpMap)>,
    o: &ExtremalityOptions,
) -> Result<&'static str> {
    let w = NonExtremalityWitness {
        combination: CStarCombination::new(terms, &o.tol)?,
        inequivalent_index: 0,
    };
    Ok(if verify_nonextremality_witness(phi, &w, o)? {
        "verified"
    } else {
        "rejected"
    })
}

fn cstar_word(phi: &UcpMap, o: &ExtremalityOptions) -> Result<String> {
    Ok(is_cstar_extreme(phi, o)?
        .is_cstar_extreme
        .as_str()
        .to_string())
}

/// `φ(λ) = Re λ` inflated to `R²`, against `½Π + ½Π̄`. The dilation is
/// that of the state itself.
fn real_part_inflation(o: &ExtremalityOptions) -> Result<String> {
    let c = Arc::new(complex_as_real());
    let phi = inflation(c.clone(), &[1.0, 0.0], 2, &o.tol)?;
    let terms = vec![
        (half(2), pi_map(c.clone(), 0)?),
        (half(2), pi_map(c.clone(), 1)?),
    ];
    let triple = minimal_stinespring(&inflation(c, &[1.0, 0.0], 1, &o.tol)?, &o.tol)?;
    Ok(format!(
        "linear={} witness={} kdim={} type={} cstar={}",
        is_linear_extreme(&phi, o)?,
        witness_word(&phi, terms, o)?,
        triple.kdim,
        triple.representation_type(&o.tol)?,
        cstar_word(&phi, o)?
    ))
}

/// The real part state itself is C*-extreme, its complexification is not
/// pure.
fn real_part_complexification(o: &ExtremalityOptions) -> Result<String> {
    let phi = inflation(Arc::new(complex_as_real()), &[1.0, 0.0], 1, &o.tol)?;
    Ok(format!(
        "cstar={} complexification_pure={}",
        cstar_word(&phi, o)?,
        complexification_is_pure(&phi, &o.tol)?
    ))
}

/// `α + βi ↦ [[α, ±β], [∓β, α]]` on the quaternions.
fn quaternion_halves() -> Result<(UcpMap, UcpMap)> {
    let h = Arc::new(quaternion_algebra());
    let one = RealMatrix::identity(2, 2);
    let j = rotation_generator();
    let zero = RealMatrix::zeros(2, 2);
    Ok((
        UcpMap::new(
            h.clone(),
            2,
            vec![one.clone(), j.clone(), zero.clone(), zero.clone()],
        )?,
        UcpMap::new(h, 2, vec![one, -j, zero.clone(), zero])?,
    ))
}

fn quaternion_inflation(o: &ExtremalityOptions) -> Result<String> {
    let h = Arc::new(quaternion_algebra());
    let phi = inflation(h.clone(), &[1.0, 0.0, 0.0, 0.0], 2, &o.tol)?;
    let (p1, p2) = quaternion_halves()?;
    let triple = minimal_stinespring(&inflation(h, &[1.0, 0.0, 0.0, 0.0], 1, &o.tol)?, &o.tol)?;
    Ok(format!(
        "linear={} witness={} kdim={} type={} cstar={}",
        is_linear_extreme(&phi, o)?,
        witness_word(&phi, vec![(half(2), p1), (half(2), p2)], o)?,
        triple.kdim,
        triple.representation_type(&o.tol)?,
        cstar_word(&phi, o)?
    ))
}

/// Two copies of the upper-left compression of the regular representation
/// of the quaternions, against `½π + ½π'` with `π' = Ad_D π`,
/// `D = diag(1, 1, −1, −1)`.
fn quaternion_block_sum(o: &ExtremalityOptions) -> Result<String> {
    let h = Arc::new(quaternion_algebra());
    let units = quaternion_units();
    let corner = |m: &RealMatrix| {
        let c = m.view((0, 0), (2, 2)).into_owned();
        block_diag(&[c.clone(), c])
    };
    let phi = UcpMap::new(h.clone(), 4, units.iter().map(corner).collect())?;
    let pi = UcpMap::new(h.clone(), 4, units.to_vec())?;
    let d = RealMatrix::from_fn(4, 4, |i, j| match (i == j, i < 2) {
        (false, _) => 0.0,
        (true, true) => 1.0,
        (true, false) => -1.0,
    });
    let flipped = UcpMap::new(h, 4, units.iter().map(|u| &d * u * &d).collect())?;
    Ok(format!(
        "linear={} witness={} cstar={}",
        is_linear_extreme(&phi, o)?,
        witness_word(&phi, vec![(half(4), pi), (half(4), flipped)], o)?,
        cstar_word(&phi, o)?
    ))
}

/// `a ↦ ⟨x, a x⟩·I₃` on `M_2(R)` with `x = (0.6, 0.8)`.
fn pure_state_inflation(o: &ExtremalityOptions) -> Result<String> {
    let dom = Arc::new(matrix_algebra(2)?);
    let x = [0.6, 0.8];
    let state: Vec<f64> = (0..4).map(|k| x[k / 2] * x[k % 2]).collect();
    let phi = inflation(dom, &state, 3, &o.tol)?;
    let probe = match complexification_extremality_probe(&phi, o)? {
        ProbeOutcome::Yes => "yes",
        ProbeOutcome::NoInference => "no_inference",
    };
    Ok(format!("probe={probe} cstar={}", cstar_word(&phi, o)?))
}

fn isometry(rows: usize, cols: usize, data: &[f64]) -> RealMatrix {
    let v = RealMatrix::from_row_slice(rows, cols, data);
    let q = v.clone().qr().q();
    q.columns(0, cols).into_owned()
}

/// `Ad_{V₁} ⊕ Ad_{V₂}` on `M_3(R)` with `ran V₂ ⊂ ran V₁`.
fn nested_compressions(o: &ExtremalityOptions) -> Result<String> {
    let dom = Arc::new(matrix_algebra(3)?);
    let v1 = isometry(3, 2, &[1.0, 0.2, 0.3, 1.0, -0.4, 0.5]);
    let v2 = &v1 * isometry(2, 1, &[0.8, -0.6]);
    let phi = direct_sum(
        &[kraus_map(dom.clone(), &[v1])?, kraus_map(dom, &[v2])?],
        &o.tol,
    )?;
    Ok(format!("cstar={}", cstar_word(&phi, o)?))
}

/// `Ad_{V₁} ⊕ Ad_{V₂}` on `M_3(R)` with distinct two-dimensional ranges.
fn incomparable_compressions(o: &ExtremalityOptions) -> Result<String> {
    let dom = Arc::new(matrix_algebra(3)?);
    let v1 = isometry(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    let v2 = isometry(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    let phi = direct_sum(
        &[kraus_map(dom.clone(), &[v1])?, kraus_map(dom, &[v2])?],
        &o.tol,
    )?;
    Ok(format!("cstar={}", cstar_word(&phi, o)?))
}

/// `ρ_w^{⊕rho} ⊕ Π_w^{⊕pi}` on the two-point space with the swap.
fn commutative_case(o: &ExtremalityOptions, rho: usize, pi: usize) -> Result<String> {
    let space = InvolutiveFiniteSpace::new(vec!["1".into(), "2".into()], vec![1, 0])?;
    let dom = Arc::new(commutative_algebra(space)?);
    let mut parts = vec![pi_map(dom.clone(), 0)?; pi];
    parts.extend(vec![rho_map(dom, 0)?; rho]);
    let phi = direct_sum(&parts, &o.tol)?;
    let report = is_cstar_extreme(&phi, o)?;
    let mut out = format!("cstar={}", report.is_cstar_extreme);
    if let Some(w) = &report.witness {
        let ok = verify_nonextremality_witness(&phi, w, o)?;
        out.push_str(if ok {
            " witness=verified"
        } else {
            " witness=rejected"
        });
    }
    Ok(out)
}

fn skew_grid(o: &ExtremalityOptions) -> Result<String> {
    let mut cstar = Vec::new();
    let mut linear = Vec::new();
    for k in -10i32..=10 {
        let sc = validate(&(rotation_generator() * (f64::from(k) / 10.0)), &o.tol)?;
        let t = if k % 10 == 0 {
            format!("{}", k / 10)
        } else {
            format!("{:.1}", f64::from(k) / 10.0)
        };
        if is_cstar_extreme_skew(&sc) {
            cstar.push(t.clone());
        }
        if is_linear_extreme_skew(&sc, o)? {
            linear.push(t);
        }
    }
    Ok(format!(
        "cstar_extreme_t=[{}] linear_extreme_t=[{}]",
        cstar.join(","),
        linear.join(",")
    ))
}

fn skew_sphere(o: &ExtremalityOptions, a: f64, b: f64, c: f64) -> Result<String> {
    let s = RealMatrix::from_row_slice(3, 3, &[0.0, a, b, -a, 0.0, c, -b, -c, 0.0]);
    let sc = validate(&s, &o.tol)?;
    Ok(format!(
        "cstar={} linear={}",
        is_cstar_extreme_skew(&sc),
        is_linear_extreme_skew(&sc, o)?
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_passes() {
        let r = run_gallery(&RunOptions::default(), None);
        for row in &r.rows {
            assert!(
                row.pass,
                "{}: expected {:?}, computed {:?}",
                row.name, row.expected, row.computed
            );
        }
        assert_eq!(r.rows.len(), CASES.len());
    }

    #[test]
    fn filter_selects_by_name_or_group() {
        let r = run_gallery(&RunOptions::default(), Some("skew"));
        assert_eq!(r.rows.len(), 4);
        let r = run_gallery(&RunOptions::default(), Some("pi_rho"));
        assert_eq!(
            r.rows.iter().map(|x| x.name.as_str()).collect::<Vec<_>>(),
            ["pi_rho", "pi_rho_rho"]
        );
        assert!(run_gallery(&RunOptions::default(), Some("nothing"))
            .rows
            .is_empty());
    }
}
