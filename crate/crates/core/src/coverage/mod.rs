//! Per-patch coverage planning with a headland loop, and coverage metrics.

mod lanes;
mod metrics;
mod plan;
mod reference;

pub use lanes::{candidate_orientations, generate_lanes, select_orientation_for, Lane, LaneSet};
pub use metrics::{coverage_metrics, raster_cell_size, CoverageMetrics};
pub use plan::{plan_classic, plan_optimised, plan_with_layout, CycleGraph};
pub use reference::plan_boustrophedon_reference;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{offset_inward, Point2, Polygon, Polyline, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMethod {
    Classic,
    Optimised,
    /// Headland-free zigzag, only used to measure coverage gaps.
    Boustrophedon,
}

impl fmt::Display for PlanMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanMethod::Classic => "classic",
            PlanMethod::Optimised => "optimised",
            PlanMethod::Boustrophedon => "boustrophedon",
        })
    }
}

impl From<crate::model::CoverageMethod> for PlanMethod {
    fn from(m: crate::model::CoverageMethod) -> Self {
        match m {
            crate::model::CoverageMethod::Classic => PlanMethod::Classic,
            crate::model::CoverageMethod::Optimised => PlanMethod::Optimised,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CoverageError {
    #[error("patch is too thin for a headland at offset {offset} m")]
    NoHeadland { offset: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveragePlan {
    pub patch_index: usize,
    pub method: PlanMethod,
    pub entry: Point2,
    /// Starts and ends at `entry` for the headland planners.
    pub path: Polyline,
    pub length: f64,
    pub lane_count: usize,
    /// Closed headland loops, one per component.
    pub headland: Vec<Polyline>,
    pub lanes: Vec<LaneSet>,
}

impl CoveragePlan {
    pub fn with_index(mut self, patch_index: usize) -> Self {
        self.patch_index = patch_index;
        self
    }
}

/// Inward offset of the patch contour by `w/2`, one polygon per component.
pub fn headland_path(patch: &Polygon, w: f64) -> Vec<Polygon> {
    offset_inward(patch, 0.5 * w)
}

/// Orientation of the lanes for `patch` (radians in `[0, π)`).
pub fn select_orientation(patch: &Polygon, w: f64) -> f64 {
    select_orientation_for(patch, &headland_path(patch, w), w)
}

/// Headland components of a patch with their lanes, all sharing one
/// orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchLayout {
    pub width: f64,
    pub orientation: f64,
    pub headland: Vec<Polygon>,
    pub rings: Vec<Ring>,
    pub lane_sets: Vec<LaneSet>,
}

impl PatchLayout {
    pub fn new(patch: &Polygon, w: f64) -> Result<Self, CoverageError> {
        let headland = headland_path(patch, w);
        if headland.is_empty() {
            return Err(CoverageError::NoHeadland { offset: 0.5 * w });
        }
        let orientation = select_orientation_for(patch, &headland, w);
        Ok(Self::with_orientation(headland, w, orientation))
    }

    /// Layout with a fixed lane orientation.
    pub fn with_orientation(headland: Vec<Polygon>, w: f64, orientation: f64) -> Self {
        let rings = headland.iter().map(Ring::new).collect();
        let lane_sets = headland.iter().map(|h| generate_lanes(h, w, orientation)).collect();
        Self {
            width: w,
            orientation,
            headland,
            rings,
            lane_sets,
        }
    }

    pub fn lane_count(&self) -> usize {
        self.lane_sets.iter().map(|s| s.lanes.len()).sum()
    }

    /// Components in visiting order from `entry`: nearest attach point first.
    pub fn component_order(&self, entry: Point2) -> Vec<usize> {
        let mut order: Vec<(f64, usize)> = self
            .rings
            .iter()
            .enumerate()
            .map(|(k, r)| (r.project(entry).2, k))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        order.into_iter().map(|(_, k)| k).collect()
    }
}
