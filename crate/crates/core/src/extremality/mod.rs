//! Linear and C*-extremality: decisions, certificates and witnesses.

mod certify;
mod decide;
mod decompose;
mod intertwine;
mod linear;
mod probe;

pub use certify::{
    certificate_from_similarity, type_w_dilation, type_w_similarity, verify_cstar_certificate,
};
pub use decide::{
    is_cstar_extreme, Certificate, ExtremalityReport, OrbitTally, RangeEntry, SummandKind,
};
pub use decompose::{decompose_irreducible, IrreducibleDecomposition};
pub use intertwine::{
    are_disjoint, find_unitary_equivalence, intertwiner_space, orthogonal_intertwiner,
};
pub use linear::{
    is_linear_extreme, linear_kernel, linear_nonextremality_witness, verify_nonextremality_witness,
    NonExtremalityWitness,
};
pub use probe::{complexification_extremality_probe, ProbeOutcome};

use crate::numerics::Tolerance;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalityOptions {
    pub tol: Tolerance,
    /// Seed for every generic choice (splitting elements, intertwiner
    /// probes).
    pub seed: u64,
}

impl Default for ExtremalityOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            seed: DEFAULT_SEED,
        }
    }
}

impl ExtremalityOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
