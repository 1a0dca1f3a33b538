use std::fmt;

use pottslab::graph::GraphError;
use pottslab::montecarlo::McError;
use pottslab::potts::PottsError;
use pottslab::thermo::ThermoError;
use pottslab::tutte::TutteError;
use pottslab::zeros::ZerosError;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CEILING: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files.
    Usage(String),
    /// A configured resource ceiling refused the job.
    Ceiling(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Ceiling(_) => EXIT_CEILING,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Ceiling(m) => write!(f, "resource ceiling: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

pub fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<TutteError> for CliError {
    fn from(e: TutteError) -> Self {
        match e {
            TutteError::TooManyEdges { .. } | TutteError::SubsetBound { .. } => {
                CliError::Ceiling(e.to_string())
            }
            TutteError::InvalidSpec(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PottsError> for CliError {
    fn from(e: PottsError) -> Self {
        match e {
            PottsError::Tutte(inner) => inner.into(),
            PottsError::TooManyStates { .. } => CliError::Ceiling(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ThermoError> for CliError {
    fn from(e: ThermoError) -> Self {
        match e {
            ThermoError::Potts(inner) => inner.into(),
            ThermoError::Tutte(inner) => inner.into(),
            ThermoError::Graph(inner) => inner.into(),
            ThermoError::NonPositivePartition => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ZerosError> for CliError {
    fn from(e: ZerosError) -> Self {
        match e {
            ZerosError::Tutte(inner) => inner.into(),
            ZerosError::Potts(inner) => inner.into(),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        match e {
            McError::Invalid(_) => CliError::Usage(e.to_string()),
            McError::Drift { .. } => CliError::Failure(e.to_string()),
        }
    }
}
