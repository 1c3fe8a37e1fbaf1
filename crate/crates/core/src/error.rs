use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::GeomError;
use crate::model::ValidationReport;

/// Pipeline stage a warning or error originates from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Input,
    Validation,
    Graph,
    Classification,
    Tsp,
    Coverage,
    Avoidance,
    Assembly,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Input => "input",
            Stage::Validation => "validation",
            Stage::Graph => "graph",
            Stage::Classification => "classification",
            Stage::Tsp => "tsp",
            Stage::Coverage => "coverage",
            Stage::Avoidance => "avoidance",
            Stage::Assembly => "assembly",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub stage: Stage,
    pub message: String,
}

impl Warning {
    pub fn new(stage: Stage, message: impl Into<String>) -> Self {
        Self {
            stage,
            message: message.into(),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning [{}]: {}", self.stage, self.message)
    }
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("invalid instance:\n{0}")]
    Invalid(ValidationReport),
    #[error("{stage}: {source}")]
    Geometry {
        stage: Stage,
        #[source]
        source: GeomError,
    },
    #[error("{stage}: {message}")]
    Stage { stage: Stage, message: String },
}

impl PlanError {
    pub fn stage(stage: Stage, message: impl Into<String>) -> Self {
        PlanError::Stage {
            stage,
            message: message.into(),
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(self, PlanError::Invalid(_))
    }
}
