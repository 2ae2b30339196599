//! JSON reports. Floats are written in shortest round-trip form, so a
//! report parses back to identical values.

use std::collections::BTreeMap;

use realucp::algebra::Orbit;
use realucp::extremality::{Certificate, NonExtremalityWitness, RangeEntry};
use realucp::numerics::Tolerance;
use serde::{Deserialize, Serialize};

use crate::document::{to_rows, Rows, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceReport {
    pub atol: f64,
    pub rtol: f64,
}

impl From<&Tolerance> for ToleranceReport {
    fn from(t: &Tolerance) -> Self {
        Self {
            atol: t.atol,
            rtol: t.rtol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub pure: bool,
    pub linear_extreme: bool,
    pub cstar_extreme: String,
    /// Matrix domains only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexification_probe: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub summand: usize,
    pub group: usize,
    pub dim: usize,
    pub projection: Rows,
}

impl From<&RangeEntry> for RangeReport {
    fn from(e: &RangeEntry) -> Self {
        Self {
            summand: e.summand,
            group: e.group,
            dim: e.dim(),
            projection: to_rows(&e.projection()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyReport {
    pub point: String,
    pub orbit: String,
    pub rho: usize,
    pub pi: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateReport {
    NestedRanges {
        ranges: Vec<RangeReport>,
    },
    IncomparableRanges {
        first: RangeReport,
        second: RangeReport,
    },
    TypeTally {
        orbits: Vec<TallyReport>,
    },
    NonPureSummand {
        index: usize,
        dim: usize,
    },
    PureOrMultiplicative,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::NestedRanges(entries) => Self::NestedRanges {
                ranges: entries.iter().map(RangeReport::from).collect(),
            },
            Certificate::IncomparableRanges { first, second } => Self::IncomparableRanges {
                first: first.into(),
                second: second.into(),
            },
            Certificate::TypeTally(tallies) => Self::TypeTally {
                orbits: tallies
                    .iter()
                    .map(|t| TallyReport {
                        point: t.label.clone(),
                        orbit: match t.orbit {
                            Orbit::Fixed(_) => "fixed".into(),
                            Orbit::Pair(..) => "pair".into(),
                        },
                        rho: t.rho,
                        pi: t.pi,
                    })
                    .collect(),
            },
            Certificate::NonPureSummand { index, dim } => Self::NonPureSummand {
                index: *index,
                dim: *dim,
            },
            Certificate::PureOrMultiplicative => Self::PureOrMultiplicative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    pub coefficient: Rows,
    /// Values of the term on the domain basis.
    pub values: Vec<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub inequivalent_index: usize,
    pub verified: bool,
    pub terms: Vec<TermReport>,
}

impl WitnessReport {
    pub fn new(w: &NonExtremalityWitness, verified: bool) -> Self {
        Self {
            inequivalent_index: w.inequivalent_index,
            verified,
            terms: w
                .combination
                .terms()
                .iter()
                .map(|(t, phi)| TermReport {
                    coefficient: to_rows(t),
                    values: phi.values().iter().map(to_rows).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
    pub domain: String,
    pub codomain_dim: usize,
    pub seed: u64,
    pub tolerance: ToleranceReport,
    pub verdicts: Verdicts,
    pub certificate: Option<CertificateReport>,
    pub witness: Option<WitnessReport>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StinespringReport {
    pub schema_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
    pub domain: String,
    pub codomain_dim: usize,
    pub tolerance: ToleranceReport,
    pub kdim: usize,
    pub irreducible: bool,
    /// Type of the representation when it is irreducible.
    pub representation_type: Option<String>,
    pub rep_values: Vec<Rows>,
    pub isometry: Rows,
    /// Failed checks of the triple; empty for a valid minimal dilation.
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub zero_block: usize,
    pub pairs: Vec<f64>,
    pub orthogonal: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewReport {
    pub schema_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
    pub n: usize,
    pub seed: u64,
    pub tolerance: ToleranceReport,
    pub norm: f64,
    pub singular_values: Vec<f64>,
    pub canonical_form: CanonicalReport,
    pub cstar_extreme: bool,
    pub linear_extreme: bool,
    /// The general decider's verdict on the map `λ ↦ Re λ·I + Im λ·S`.
    pub map_verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryRow {
    pub name: String,
    pub group: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryReport {
    pub schema_version: String,
    pub command: String,
    pub seed: u64,
    pub tolerance: ToleranceReport,
    pub rows: Vec<GalleryRow>,
    pub all_pass: bool,
}

/// Entry of a report array: either a report or the reason the input was
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Ok(T),
    Invalid { index: usize, error: String },
}

pub fn header(command: &str) -> (String, String) {
    (SCHEMA_VERSION.to_string(), command.to_string())
}
