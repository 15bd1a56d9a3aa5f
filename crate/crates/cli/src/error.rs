use std::io;
use std::path::PathBuf;

use pihier_core::acceptance::FixtureError;
use pihier_core::diffpoly::DiffPolyError;
use pihier_core::gfun::GfunError;
use pihier_core::kdvlab::KdvError;
use pihier_core::painleve::PainleveError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{failed} of {total} acceptance criteria failed")]
    CriteriaFailed { failed: usize, total: usize },
    #[error(transparent)]
    DiffPoly(#[from] DiffPolyError),
    #[error(transparent)]
    Gfun(#[from] GfunError),
    #[error(transparent)]
    Painleve(#[from] PainleveError),
    #[error(transparent)]
    Kdv(#[from] KdvError),
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> Self {
        match e {
            FixtureError::Io { path, source } => CliError::Io { path, source },
            FixtureError::Parse { path, source } => {
                let detail = match source {
                    DiffPolyError::Schema(d) => d,
                    other => other.to_string(),
                };
                CliError::SchemaViolation(format!("{}: {detail}", path.display()))
            }
        }
    }
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::SchemaViolation(msg.into())
}

pub const EXIT_CRITERIA: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

/// Machine-readable description of a failure, written to stderr as JSON.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    /// `module/Name`, unique per error kind.
    pub code: String,
    pub message: String,
    pub exit: u8,
}

fn painleve_kind(e: &PainleveError) -> (&'static str, &'static str, u8) {
    use PainleveError::*;
    match e {
        ConfigInvalid(_) => ("painleve", "ConfigInvalid", EXIT_VALIDATION),
        OddOrderRequested(_) => ("painleve", "OddOrderRequested", EXIT_VALIDATION),
        OutOfDomain { .. } => ("painleve", "OutOfDomain", EXIT_VALIDATION),
        NewtonDiverged { .. } => ("painleve", "NewtonDiverged", EXIT_SOLVER),
        JacobianSingular { .. } => ("painleve", "JacobianSingular", EXIT_SOLVER),
        WindowTooSmall { .. } => ("painleve", "WindowTooSmall", EXIT_SOLVER),
        Symbolic(d) => diffpoly_kind(d),
    }
}

fn diffpoly_kind(e: &DiffPolyError) -> (&'static str, &'static str, u8) {
    use DiffPolyError::*;
    match e {
        NotATotalDerivative => ("diffpoly", "NotATotalDerivative", EXIT_SOLVER),
        OddOrderRequested(_) => ("diffpoly", "OddOrderRequested", EXIT_VALIDATION),
        MissingAssignment(_) => ("diffpoly", "MissingAssignment", EXIT_VALIDATION),
        InvalidOrder(_) => ("diffpoly", "InvalidOrder", EXIT_VALIDATION),
        Schema(_) => ("diffpoly", "SchemaViolation", EXIT_VALIDATION),
    }
}

impl CliError {
    fn kind(&self) -> (&'static str, &'static str, u8) {
        match self {
            CliError::SchemaViolation(_) => ("cli", "SchemaViolation", EXIT_VALIDATION),
            CliError::Io { .. } => ("cli", "Io", EXIT_VALIDATION),
            CliError::CriteriaFailed { .. } => ("cli", "CriteriaFailed", EXIT_CRITERIA),
            CliError::DiffPoly(e) => diffpoly_kind(e),
            CliError::Gfun(e) => match e {
                GfunError::OddOrderRequested(_) => ("gfun", "OddOrderRequested", EXIT_VALIDATION),
                GfunError::OrderTooSmall(_) => ("gfun", "OrderTooSmall", EXIT_VALIDATION),
                GfunError::InvalidSign(_) => ("gfun", "InvalidSign", EXIT_VALIDATION),
                GfunError::BranchViolation { .. } => ("gfun", "BranchViolation", EXIT_SOLVER),
            },
            CliError::Painleve(e) => painleve_kind(e),
            CliError::Kdv(e) => {
                use KdvError::*;
                match e {
                    InvalidOrder(_) => ("kdvlab", "InvalidOrder", EXIT_VALIDATION),
                    InvalidParameter(_) => ("kdvlab", "InvalidParameter", EXIT_VALIDATION),
                    MonotonicityLost { .. } => ("kdvlab", "MonotonicityLost", EXIT_VALIDATION),
                    ConstraintSingular => ("kdvlab", "ConstraintSingular", EXIT_VALIDATION),
                    MultivaluedRegion { .. } => ("kdvlab", "MultivaluedRegion", EXIT_VALIDATION),
                    WindowOutsideSolutionDomain(_) => {
                        ("kdvlab", "WindowOutsideSolutionDomain", EXIT_VALIDATION)
                    }
                    NoBracket { .. } => ("kdvlab", "NoBracket", EXIT_SOLVER),
                    MaximizerNotUnique { .. } => ("kdvlab", "MaximizerNotUnique", EXIT_SOLVER),
                    DerivativeChainBroken { .. } => {
                        ("kdvlab", "DerivativeChainBroken", EXIT_SOLVER)
                    }
                    ResolutionInsufficient { .. } => {
                        ("kdvlab", "ResolutionInsufficient", EXIT_SOLVER)
                    }
                    Blowup { .. } => ("kdvlab", "Blowup", EXIT_SOLVER),
                    Painleve(p) => painleve_kind(p),
                }
            }
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.kind().2
    }

    pub fn record(&self) -> ErrorRecord {
        let (module, name, exit) = self.kind();
        ErrorRecord {
            error: name,
            code: format!("{module}/{name}"),
            message: self.to_string(),
            exit,
        }
    }
}
