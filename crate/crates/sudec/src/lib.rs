//! Finite-group dynamical decoupling and symmetry-based codes for qudits.
//!
//! The crate covers the whole pipeline: SU(d) irrep bookkeeping, closure of
//! finite matrix groups and their accessibility scans, orientation of groups
//! inside SU(3), Cayley-graph pulse sequences, a Monte-Carlo simulator for
//! random qutrit Hamiltonians, and Knill-Laflamme checks on group-invariant
//! codespaces.

#![forbid(unsafe_code)]

pub mod cayley;
pub mod group;
pub mod lie;
pub mod mat;
pub mod orientation;
pub mod presets;
pub mod qecc;
pub mod sim;

pub use mat::{ComplexMatrix, C64};

/// Failure modes shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input is not Hermitian (deviation {0:.3e})")]
    NonHermitianInput(f64),
    #[error("input is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),
    #[error("invalid irrep label: {0}")]
    InvalidLabel(String),
    #[error("unknown group: {0}")]
    UnknownGroup(String),
    #[error("closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("group does not contain the center")]
    NoCenter,
    #[error("multiplicity is not an integer (residual {0:.3e})")]
    NonIntegerMultiplicity(f64),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("generators do not reach every vertex")]
    NotGenerating,
    #[error("search budget of {0} steps exhausted")]
    BudgetExhausted(u64),
    #[error("orientation catalog is empty")]
    EmptyCatalog,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("projector is not idempotent (deviation {0:.3e})")]
    NonIdempotent(f64),
    #[error("no refinement: {0}")]
    NoRefinement(String),
    #[error("fit window is degenerate: {0}")]
    DegenerateWindow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Guide chapters, compiled so their code blocks run as doc-tests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/labels.md")]
    pub mod labels {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    pub mod sequences {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    pub mod simulation {}
    #[doc = include_str!("../../../book/src/codes.md")]
    pub mod codes {}
}
