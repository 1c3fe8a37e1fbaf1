//! Route planning for spot spraying: patch visiting order, headland-first
//! coverage of large patches, obstacle avoidance and the mission report.

pub mod assemble;
pub mod avoid;
pub mod coverage;
pub mod error;
pub mod geom;
pub mod io;
pub mod model;
pub mod tsp;

pub use assemble::{plan_mission, MissionOutcome, MissionPath, MissionReport, PatchLengths, SegmentTag};
pub use error::{PlanError, Stage, Warning};
pub use geom::{Point2, Polygon, Polyline};
pub use model::{
    validate_instance, Avoidance, CoverageMethod, ExitTransition, Heuristic, PlannerConfig, ProblemInstance,
    RawFeature, RawInstance, TspInit,
};
