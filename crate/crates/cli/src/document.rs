//! Input documents: one JSON object per map, or an array of them.

use std::sync::{Arc, LazyLock};

use realucp::algebra::{
    commutative_algebra, complex_as_real, matrix_algebra, quaternion_algebra, AlgebraKind,
    ConcreteAlgebra, InvolutiveFiniteSpace, Orbit,
};
use realucp::cpmaps::{from_point_blocks, PointBlock, UcpMap};
use realucp::numerics::{RealMatrix, Tolerance};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

pub const MAP_SCHEMA: &str = include_str!("../../../docs/schemas/map-document.schema.json");
pub const SKEW_SCHEMA: &str = include_str!("../../../docs/schemas/skew-document.schema.json");
pub const REPORT_SCHEMA: &str = include_str!("../../../docs/schemas/report.schema.json");

static MAP_VALIDATOR: LazyLock<jsonschema::Validator> = LazyLock::new(|| compile(MAP_SCHEMA));
static SKEW_VALIDATOR: LazyLock<jsonschema::Validator> = LazyLock::new(|| compile(SKEW_SCHEMA));

/// Compiles one of the bundled schemas; they are fixed at build time.
pub fn compile(schema: &str) -> jsonschema::Validator {
    let v: Value = serde_json::from_str(schema).expect("bundled schema is JSON");
    jsonschema::validator_for(&v).expect("bundled schema compiles")
}

/// First few schema violations, joined.
fn validate(validator: &jsonschema::Validator, v: &Value) -> Result<(), DocumentError> {
    let errors: Vec<String> = validator
        .iter_errors(v)
        .take(3)
        .map(|e| {
            let at = e.instance_path().to_string();
            if at.is_empty() {
                e.to_string()
            } else {
                format!("{at}: {e}")
            }
        })
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(DocumentError::Schema(errors.join("; ")))
    }
}

/// Row-major matrix: a list of rows.
pub type Rows = Vec<Vec<f64>>;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid map: {0}")]
    Map(#[from] realucp::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Matrix {
        n: usize,
    },
    /// `involution[i]` is the label of the conjugate of `points[i]`.
    Commutative {
        points: Vec<String>,
        involution: Vec<String>,
    },
    Complex,
    Quaternion,
    /// A basis of a unital `*`-closed span; values are listed against it.
    Custom {
        basis: Vec<Rows>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

/// `p` for a fixed point, `x` and `y` (with `Q_w = X + iY`) for a point
/// moved by the involution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub point: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub schema_version: String,
    pub domain: DomainSpec,
    pub codomain_dim: usize,
    /// One matrix per domain basis element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Rows>>,
    /// Commutative domains only: one block per orbit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewDocument {
    pub schema_version: String,
    pub matrix: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
}

pub fn to_matrix(rows: &Rows, r: usize, c: usize, what: &str) -> Result<RealMatrix, DocumentError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(DocumentError::Schema(format!("{what} must be {r}x{c}")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(DocumentError::Schema(format!(
            "{what} has a non-finite entry"
        )));
    }
    Ok(RealMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn to_rows(m: &RealMatrix) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Any square shape; used where the size is not known up front.
pub fn square_matrix(rows: &Rows, what: &str) -> Result<RealMatrix, DocumentError> {
    to_matrix(rows, rows.len(), rows.len(), what)
}

fn check_version(v: &str) -> Result<(), DocumentError> {
    if v != SCHEMA_VERSION {
        return Err(DocumentError::Schema(format!(
            "unsupported schema_version {v:?} (expected {SCHEMA_VERSION:?})"
        )));
    }
    Ok(())
}

/// Reports an unsupported version before the schema, which pins it, does.
fn check_version_field(v: &Value) -> Result<(), DocumentError> {
    match v.get("schema_version").and_then(Value::as_str) {
        Some(version) => check_version(version),
        None => Ok(()),
    }
}

impl DomainSpec {
    pub fn build(&self, tol: &Tolerance) -> Result<ConcreteAlgebra, DocumentError> {
        Ok(match self {
            DomainSpec::Matrix { n } => {
                if *n == 0 {
                    return Err(DocumentError::Schema("matrix domain needs n >= 1".into()));
                }
                matrix_algebra(*n)?
            }
            DomainSpec::Commutative { points, involution } => {
                if points.len() != involution.len() {
                    return Err(DocumentError::Schema(
                        "involution must list one label per point".into(),
                    ));
                }
                let index = |label: &String| {
                    points.iter().position(|p| p == label).ok_or_else(|| {
                        DocumentError::Schema(format!("unknown point {label:?} in involution"))
                    })
                };
                let map = involution
                    .iter()
                    .map(index)
                    .collect::<Result<Vec<_>, _>>()?;
                commutative_algebra(InvolutiveFiniteSpace::new(points.clone(), map)?)?
            }
            DomainSpec::Complex => complex_as_real(),
            DomainSpec::Quaternion => quaternion_algebra(),
            DomainSpec::Custom { basis, label } => {
                let Some(first) = basis.first() else {
                    return Err(DocumentError::Schema("custom domain needs a basis".into()));
                };
                let n = first.len();
                let mats = basis
                    .iter()
                    .enumerate()
                    .map(|(i, b)| to_matrix(b, n, n, &format!("basis element {i}")))
                    .collect::<Result<Vec<_>, _>>()?;
                ConcreteAlgebra::from_basis(
                    mats.clone(),
                    mats,
                    label.clone().unwrap_or_else(|| "custom".into()),
                    AlgebraKind::General,
                    tol,
                )?
            }
        })
    }
}

impl MapDocument {
    pub fn from_value(v: Value) -> Result<Self, DocumentError> {
        check_version_field(&v)?;
        validate(&MAP_VALIDATOR, &v)?;
        let doc: Self = serde_json::from_value(v)?;
        check_version(&doc.schema_version)?;
        Ok(doc)
    }

    /// Builds the map and checks unitality, self-adjointness and complete
    /// positivity; the error names the first violated property.
    pub fn build(&self, tol: &Tolerance) -> Result<UcpMap, DocumentError> {
        let domain = Arc::new(self.domain.build(tol)?);
        let m = self.codomain_dim;
        if m == 0 {
            return Err(DocumentError::Schema(
                "codomain_dim must be at least 1".into(),
            ));
        }
        let phi = match (&self.values, &self.blocks) {
            (Some(values), None) => {
                if values.len() != domain.dimension() {
                    return Err(DocumentError::Schema(format!(
                        "expected {} value matrices (one per basis element), got {}",
                        domain.dimension(),
                        values.len()
                    )));
                }
                let mats = values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| to_matrix(v, m, m, &format!("value {i}")))
                    .collect::<Result<Vec<_>, _>>()?;
                UcpMap::new(domain, m, mats)?
            }
            (None, Some(blocks)) => build_from_blocks(domain, m, blocks)?,
            _ => {
                return Err(DocumentError::Schema(
                    "exactly one of `values` and `blocks` must be given".into(),
                ))
            }
        };
        phi.validate_ucp(tol)?;
        Ok(phi)
    }
}

fn build_from_blocks(
    domain: Arc<ConcreteAlgebra>,
    m: usize,
    blocks: &[BlockSpec],
) -> Result<UcpMap, DocumentError> {
    let layout = domain
        .commutative_layout()
        .ok_or_else(|| DocumentError::Schema("`blocks` need a commutative domain".into()))?;
    let space = &layout.space;
    let mut ordered: Vec<Option<PointBlock>> = vec![None; layout.blocks.len()];
    for b in blocks {
        let w = space
            .index_of(&b.point)
            .ok_or_else(|| DocumentError::Schema(format!("unknown point {:?}", b.point)))?;
        let slot = layout
            .blocks
            .iter()
            .position(|s| s.orbit.contains(w))
            .expect("every point lies in an orbit");
        if ordered[slot].is_some() {
            return Err(DocumentError::Schema(format!(
                "orbit of {:?} given twice",
                b.point
            )));
        }
        let what = format!("block of {:?}", b.point);
        let block = match (layout.blocks[slot].orbit, &b.p, &b.x, &b.y) {
            (Orbit::Fixed(_), Some(p), None, None) => PointBlock::Fixed {
                point: w,
                p: to_matrix(p, m, m, &what)?,
            },
            (Orbit::Pair(rep, _), None, Some(x), Some(y)) => {
                let x = to_matrix(x, m, m, &what)?;
                let y = to_matrix(y, m, m, &what)?;
                // Q at the conjugate point is the complex conjugate.
                let y = if w == rep { y } else { -y };
                PointBlock::Pair { point: rep, x, y }
            }
            (Orbit::Fixed(_), ..) => {
                return Err(DocumentError::Schema(format!(
                    "{what}: a fixed point takes only `p`"
                )))
            }
            (Orbit::Pair(..), ..) => {
                return Err(DocumentError::Schema(format!(
                    "{what}: a moved point takes `x` and `y`"
                )))
            }
        };
        ordered[slot] = Some(block);
    }
    let blocks = ordered
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| {
                let w = layout.blocks[i].orbit.representative();
                DocumentError::Schema(format!("no block for the orbit of {:?}", space.points()[w]))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(from_point_blocks(domain, m, &blocks)?)
}

impl SkewDocument {
    pub fn from_value(v: Value) -> Result<Self, DocumentError> {
        check_version_field(&v)?;
        validate(&SKEW_VALIDATOR, &v)?;
        let doc: Self = serde_json::from_value(v)?;
        check_version(&doc.schema_version)?;
        Ok(doc)
    }

    pub fn matrix(&self) -> Result<RealMatrix, DocumentError> {
        square_matrix(&self.matrix, "matrix")
    }
}

/// A file holds one document or an array of them.
pub fn split_batch(v: Value) -> (bool, Vec<Value>) {
    match v {
        Value::Array(items) => (true, items),
        other => (false, vec![other]),
    }
}

pub fn read_json(path: &std::path::Path) -> Result<Value, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}
