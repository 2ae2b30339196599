use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use realucp::algebra::{is_irreducible, AlgebraKind};
use realucp::extremality::{
    complexification_extremality_probe, is_cstar_extreme, verify_nonextremality_witness,
    ExtremalityOptions, ProbeOutcome, Verdict,
};
use realucp::numerics::{RealMatrix, Tolerance};
use realucp::skewconv::{self, canonical_form, is_cstar_extreme_skew, is_linear_extreme_skew};
use realucp::stinespring::{minimal_stinespring, triple_violations};
use serde_json::Value;

use crate::document::{to_rows, DocumentError, MapDocument, SkewDocument};
use crate::report::{
    header, CanonicalReport, CertificateReport, CheckReport, Outcome, SkewReport,
    StinespringReport, ToleranceReport, Verdicts, WitnessReport,
};

/// Shared flags of every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub tol: Tolerance,
    pub seed: u64,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            seed: realucp::extremality::DEFAULT_SEED,
            timings: false,
        }
    }
}

impl RunOptions {
    pub fn extremality(&self) -> ExtremalityOptions {
        ExtremalityOptions {
            tol: self.tol,
            seed: self.seed,
        }
    }
}

/// Stage timer; records nothing unless timings were requested.
struct Clock {
    start: Instant,
    marks: Option<BTreeMap<String, f64>>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Self {
            start: Instant::now(),
            marks: enabled.then(BTreeMap::new),
        }
    }

    fn mark(&mut self, stage: &str) {
        if let Some(m) = self.marks.as_mut() {
            m.insert(stage.to_string(), self.start.elapsed().as_secs_f64() * 1e3);
            self.start = Instant::now();
        }
    }
}

pub fn check_value(v: Value, opts: &RunOptions) -> Result<CheckReport, DocumentError> {
    let mut clock = Clock::new(opts.timings);
    let doc = MapDocument::from_value(v)?;
    let phi = doc.build(&opts.tol)?;
    clock.mark("load");
    let eopts = opts.extremality();
    let report = is_cstar_extreme(&phi, &eopts)?;
    clock.mark("decide");
    let mut notes = report.notes.clone();
    let probe = match phi.kind() {
        AlgebraKind::Matrix(_) => {
            let outcome = complexification_extremality_probe(&phi, &eopts)?;
            if outcome == ProbeOutcome::Yes && report.is_cstar_extreme != Verdict::Yes {
                notes.push("complexification probe and decider disagree".into());
            }
            clock.mark("probe");
            Some(match outcome {
                ProbeOutcome::Yes => "yes".to_string(),
                ProbeOutcome::NoInference => "no_inference".to_string(),
            })
        }
        _ => None,
    };
    let witness = match &report.witness {
        Some(w) => Some(WitnessReport::new(
            w,
            verify_nonextremality_witness(&phi, w, &eopts)?,
        )),
        None => None,
    };
    clock.mark("witness");
    let (schema_version, command) = header("check");
    Ok(CheckReport {
        schema_version,
        command,
        metadata: doc.metadata,
        domain: phi.domain().label().to_string(),
        codomain_dim: phi.codomain_dim(),
        seed: opts.seed,
        tolerance: ToleranceReport::from(&opts.tol),
        verdicts: Verdicts {
            pure: report.is_pure,
            linear_extreme: report.is_linear_extreme,
            cstar_extreme: report.is_cstar_extreme.as_str().to_string(),
            complexification_probe: probe,
        },
        certificate: report.certificate.as_ref().map(CertificateReport::from),
        witness,
        notes,
        timings_ms: clock.marks,
    })
}

pub fn stinespring_value(v: Value, opts: &RunOptions) -> Result<StinespringReport, DocumentError> {
    let mut clock = Clock::new(opts.timings);
    let doc = MapDocument::from_value(v)?;
    let phi = doc.build(&opts.tol)?;
    clock.mark("load");
    let triple = minimal_stinespring(&phi, &opts.tol)?;
    clock.mark("dilate");
    let irreducible = is_irreducible(triple.kdim, &triple.rep_values, &opts.tol)?;
    let representation_type = if irreducible {
        Some(triple.representation_type(&opts.tol)?.as_str().to_string())
    } else {
        None
    };
    let violations = triple_violations(&phi, &triple, &opts.tol);
    clock.mark("verify");
    let (schema_version, command) = header("stinespring");
    Ok(StinespringReport {
        schema_version,
        command,
        metadata: doc.metadata,
        domain: phi.domain().label().to_string(),
        codomain_dim: phi.codomain_dim(),
        tolerance: ToleranceReport::from(&opts.tol),
        kdim: triple.kdim,
        irreducible,
        representation_type,
        rep_values: triple.rep_values.iter().map(to_rows).collect(),
        isometry: to_rows(&triple.isometry),
        violations,
        timings_ms: clock.marks,
    })
}

pub fn skew_value(v: Value, opts: &RunOptions) -> Result<SkewReport, DocumentError> {
    let doc = SkewDocument::from_value(v)?;
    skew_matrix(&doc.matrix()?, doc.metadata, opts)
}

pub fn skew_matrix(
    s: &RealMatrix,
    metadata: Option<String>,
    opts: &RunOptions,
) -> Result<SkewReport, DocumentError> {
    let mut clock = Clock::new(opts.timings);
    let sc = skewconv::validate(s, &opts.tol)?;
    let form = canonical_form(&sc, &opts.tol)?;
    clock.mark("canonical_form");
    let eopts = opts.extremality();
    let linear = is_linear_extreme_skew(&sc, &eopts)?;
    let map_verdict = skewconv::cstar_verdict_via_map(&sc, &eopts)?;
    clock.mark("decide");
    let (schema_version, command) = header("skew");
    Ok(SkewReport {
        schema_version,
        command,
        metadata,
        n: sc.n(),
        seed: opts.seed,
        tolerance: ToleranceReport::from(&opts.tol),
        norm: sc.norm(),
        singular_values: sc.singular_values()?,
        canonical_form: CanonicalReport {
            zero_block: form.zero_block,
            pairs: form.pairs.clone(),
            orthogonal: to_rows(&form.orthogonal),
        },
        cstar_extreme: is_cstar_extreme_skew(&sc),
        linear_extreme: linear,
        map_verdict: map_verdict.as_str().to_string(),
        timings_ms: clock.marks,
    })
}

/// Runs `f` on every entry in parallel; the output keeps input order.
pub fn run_batch<T, F>(items: Vec<Value>, opts: &RunOptions, f: F) -> Vec<Outcome<T>>
where
    T: Send,
    F: Fn(Value, &RunOptions) -> Result<T, DocumentError> + Sync,
{
    items
        .into_par_iter()
        .enumerate()
        .map(|(index, v)| match f(v, opts) {
            Ok(r) => Outcome::Ok(r),
            Err(e) => Outcome::Invalid {
                index,
                error: e.to_string(),
            },
        })
        .collect()
}

/// 2 if any entry was invalid, else 1 if any entry failed `ok`, else 0.
pub fn batch_exit_code<T>(outcomes: &[Outcome<T>], ok: impl Fn(&T) -> bool) -> u8 {
    let mut code = 0;
    for o in outcomes {
        match o {
            Outcome::Invalid { .. } => return 2,
            Outcome::Ok(r) if !ok(r) => code = 1,
            Outcome::Ok(_) => {}
        }
    }
    code
}

pub fn render_check(r: &CheckReport) -> String {
    let mut out = vec![
        format!("domain {}  codomain M_{}(R)", r.domain, r.codomain_dim),
        format!("pure: {}", r.verdicts.pure),
        format!("linear extreme: {}", r.verdicts.linear_extreme),
        format!("C*-extreme: {}", r.verdicts.cstar_extreme),
    ];
    if let Some(p) = &r.verdicts.complexification_probe {
        out.push(format!("complexification probe: {p}"));
    }
    if let Some(c) = &r.certificate {
        out.push(format!("certificate: {}", certificate_summary(c)));
    }
    if let Some(w) = &r.witness {
        out.push(format!(
            "witness: {} terms, term {} inequivalent, verified {}",
            w.terms.len(),
            w.inequivalent_index,
            w.verified
        ));
    }
    out.extend(r.notes.iter().map(|n| format!("note: {n}")));
    out.join("\n")
}

fn certificate_summary(c: &CertificateReport) -> String {
    match c {
        CertificateReport::NestedRanges { ranges } => {
            let dims: Vec<String> = ranges.iter().map(|r| r.dim.to_string()).collect();
            format!("nested ranges of dimensions {}", dims.join(" > "))
        }
        CertificateReport::IncomparableRanges { first, second } => format!(
            "ranges of summands {} and {} are not nested",
            first.summand, second.summand
        ),
        CertificateReport::TypeTally { orbits } => orbits
            .iter()
            .map(|o| format!("{}: rho x{} pi x{}", o.point, o.rho, o.pi))
            .collect::<Vec<_>>()
            .join(", "),
        CertificateReport::NonPureSummand { index, dim } => {
            format!("summand {index} (dimension {dim}) is not pure")
        }
        CertificateReport::PureOrMultiplicative => "pure or multiplicative".into(),
    }
}

pub fn render_stinespring(r: &StinespringReport) -> String {
    let mut out = vec![
        format!("domain {}  codomain M_{}(R)", r.domain, r.codomain_dim),
        format!("dilation dimension: {}", r.kdim),
        format!(
            "representation: {}",
            r.representation_type.as_deref().unwrap_or("reducible")
        ),
        format!("V =\n{}", render_rows(&r.isometry)),
    ];
    out.extend(r.violations.iter().map(|v| format!("violation: {v}")));
    out.join("\n")
}

pub fn render_skew(r: &SkewReport) -> String {
    let sv: Vec<String> = r
        .singular_values
        .iter()
        .map(|s| format!("{s:.6}"))
        .collect();
    let pairs: Vec<String> = r
        .canonical_form
        .pairs
        .iter()
        .map(|t| format!("{t:.6}"))
        .collect();
    [
        format!("n = {}  norm = {:.6}", r.n, r.norm),
        format!("singular values: [{}]", sv.join(", ")),
        format!(
            "canonical form: zero block {}, pairs [{}]",
            r.canonical_form.zero_block,
            pairs.join(", ")
        ),
        format!("C*-extreme: {}", r.cstar_extreme),
        format!("linear extreme: {}", r.linear_extreme),
        format!("map decider: {}", r.map_verdict),
    ]
    .join("\n")
}

fn render_rows(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>10.6}")).collect();
            format!("  [{}]", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rho_rho() -> Value {
        json!({
            "schema_version": "1",
            "domain": {"kind": "commutative", "points": ["1", "2"], "involution": ["2", "1"]},
            "codomain_dim": 2,
            "values": [[[1, 0], [0, 1]], [[0, 0], [0, 0]]]
        })
    }

    #[test]
    fn double_rho_reports_a_verified_witness() {
        let r = check_value(rho_rho(), &RunOptions::default()).unwrap();
        assert_eq!(r.verdicts.cstar_extreme, "no");
        assert!(r.witness.as_ref().unwrap().verified);
        assert!(r.timings_ms.is_none());
        let text = serde_json::to_string(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn batches_keep_order_and_isolate_failures() {
        let items = vec![rho_rho(), json!({"schema_version": "1"}), rho_rho()];
        let out = run_batch(items, &RunOptions::default(), check_value);
        assert!(matches!(out[0], Outcome::Ok(_)));
        assert!(matches!(out[1], Outcome::Invalid { index: 1, .. }));
        assert!(matches!(out[2], Outcome::Ok(_)));
        assert_eq!(
            batch_exit_code(&out, |r| r.verdicts.cstar_extreme == "yes"),
            2
        );
        let text = serde_json::to_string(&out).unwrap();
        let back: Vec<Outcome<CheckReport>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, out);
    }

    #[test]
    fn timings_only_on_request() {
        let opts = RunOptions {
            timings: true,
            ..RunOptions::default()
        };
        let r = check_value(rho_rho(), &opts).unwrap();
        assert!(r.timings_ms.unwrap().contains_key("decide"));
    }
}
