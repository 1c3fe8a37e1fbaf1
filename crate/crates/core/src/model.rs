//! Problem instances, validation, the transition graph and patch
//! classification.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Stage, Warning};
use crate::geom::{
    closest_boundary_points, closest_point_on_boundary, difference, intersection, min_width,
    point_in_polygon, Containment, GeomError, Point2, Polygon,
};

/// Patches may stick out of the field by at most this much (m) before the
/// excursion is treated as an error instead of being clipped away.
pub const MAX_PATCH_EXCURSION: f64 = 0.5;

/// Smallest admissible transition cost (m).
pub const MIN_TRANSITION_COST: f64 = 1e-6;

const AREA_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TspInit {
    Nn,
    Denn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    H1,
    H2,
    H3,
    H4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverageMethod {
    Classic,
    Optimised,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitTransition {
    Straight,
    Headland,
}

/// How transit segments get around obstacles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Avoidance {
    /// Shorter hull chain between the tangent points.
    Tangent,
    /// Follow the hull contour until the target is in line of sight.
    ContourFollowing,
}

macro_rules! display_lower {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }
    };
}

display_lower!(TspInit { Nn => "nn", Denn => "denn" });
display_lower!(Heuristic { H1 => "h1", H2 => "h2", H3 => "h3", H4 => "h4" });
display_lower!(CoverageMethod { Classic => "classic", Optimised => "optimised" });
display_lower!(ExitTransition { Straight => "straight", Headland => "headland" });
display_lower!(Avoidance { Tangent => "tangent", ContourFollowing => "contour_following" });

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Operating (swath) width W in meters.
    pub width: f64,
    /// Wall-clock budget of each sampling heuristic, seconds.
    pub time_limit: f64,
    pub rng_seed: u64,
    pub tsp_init: TspInit,
    pub tsp_refine: Vec<Heuristic>,
    pub coverage_method: CoverageMethod,
    pub exit_transition: ExitTransition,
    /// Replaces the wall-clock budget by a move count, for reproducible runs.
    pub move_budget: Option<u64>,
    pub avoidance: Avoidance,
    /// Safety margin added around obstacle hulls (m).
    pub obstacle_inflation: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            width: 2.0,
            time_limit: 10.0,
            rng_seed: 0,
            tsp_init: TspInit::Nn,
            tsp_refine: vec![Heuristic::H4],
            coverage_method: CoverageMethod::Optimised,
            exit_transition: ExitTransition::Straight,
            move_budget: None,
            avoidance: Avoidance::Tangent,
            obstacle_inflation: 0.0,
        }
    }
}

impl PlannerConfig {
    pub fn time_budget(&self) -> Duration {
        Duration::from_secs_f64(self.time_limit)
    }

    pub fn check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.width.is_finite() && self.width > 0.0) {
            out.push(Violation::config(format!(
                "operating width must satisfy W > 0, got W = {}",
                self.width
            )));
        }
        if !(self.time_limit.is_finite() && self.time_limit > 0.0) {
            out.push(Violation::config(format!(
                "time limit must satisfy T_limit > 0, got {} s",
                self.time_limit
            )));
        }
        if !(self.obstacle_inflation.is_finite() && self.obstacle_inflation >= 0.0) {
            out.push(Violation::config(format!(
                "obstacle inflation must be >= 0, got {}",
                self.obstacle_inflation
            )));
        }
        out
    }
}

/// An unvalidated polygon feature as read from an input document.
#[derive(Clone, Debug, PartialEq)]
pub struct RawFeature {
    pub id: String,
    pub ring: Vec<Point2>,
}

impl RawFeature {
    pub fn new(id: impl Into<String>, ring: Vec<Point2>) -> Self {
        Self { id: id.into(), ring }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawInstance {
    pub field: RawFeature,
    pub entrance: Point2,
    pub obstacles: Vec<RawFeature>,
    pub patches: Vec<RawFeature>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Config,
    Geometry,
    SelfIntersection,
    OutsideField,
    Overlap,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub feature: String,
    pub kind: ViolationKind,
    pub at: Option<Point2>,
    pub message: String,
}

impl Violation {
    fn config(message: String) -> Self {
        Self {
            feature: "config".into(),
            kind: ViolationKind::Config,
            at: None,
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.feature, self.message)?;
        if let Some(p) = self.at {
            write!(f, " at ({:.3}, {:.3})", p.x, p.y)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "  {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub field: Polygon,
    pub obstacles: Vec<Polygon>,
    pub patches: Vec<Polygon>,
    pub entrance: Point2,
    pub config: PlannerConfig,
    /// Feature identifiers, parallel to `obstacles` and `patches`.
    pub obstacle_ids: Vec<String>,
    pub patch_ids: Vec<String>,
}

impl ProblemInstance {
    pub fn n_patches(&self) -> usize {
        self.patches.len()
    }
}

fn geometry_violation(feature: &str, err: GeomError) -> Violation {
    let (kind, at) = match &err {
        GeomError::SelfIntersection { at } => (ViolationKind::SelfIntersection, Some(*at)),
        GeomError::NonFinite(_) | GeomError::TooFewVertices(_) | GeomError::Degenerate(_) => {
            (ViolationKind::Geometry, None)
        }
        GeomError::Overlap => (ViolationKind::Overlap, None),
    };
    Violation {
        feature: feature.to_string(),
        kind,
        at,
        message: err.to_string(),
    }
}

fn total_area(parts: &[Polygon]) -> f64 {
    parts.iter().map(Polygon::area).sum()
}

/// Largest distance from the field boundary over the parts of a patch that
/// lie outside the field, and the point where it is attained. The maximum
/// sits on the boundary of an outside component, which is sampled densely.
fn excursion(outside: &[Polygon], field: &Polygon) -> (f64, Point2) {
    let mut best = (0.0, Point2::default());
    for part in outside {
        for (a, b) in part.edges() {
            let steps = ((a.dist(b) / 0.01).ceil() as usize).clamp(1, 10_000);
            for k in 0..=steps {
                let p = a.lerp(b, k as f64 / steps as f64);
                let d = field.boundary_distance(p);
                if d > best.0 {
                    best = (d, p);
                }
            }
        }
    }
    best
}

fn overlap_violation(kind: &str, a: &str, b: &str, pa: &Polygon, pb: &Polygon) -> Option<Violation> {
    match closest_boundary_points(pa, pb) {
        Ok(_) => None,
        Err(_) => {
            let shared = intersection(pa, pb);
            let at = shared
                .first()
                .map(Polygon::centroid)
                .or_else(|| pa.vertices().iter().copied().find(|&v| pb.boundary_distance(v) < 1e-6));
            Some(Violation {
                feature: format!("{a}, {b}"),
                kind: ViolationKind::Overlap,
                at,
                message: format!("{kind} '{a}' overlaps or touches '{b}'"),
            })
        }
    }
}

/// Normalizes raw geometry into a [`ProblemInstance`], or lists every
/// violation found. Patches sticking out of the field by at most
/// [`MAX_PATCH_EXCURSION`] are clipped to the field with a warning.
pub fn validate_instance(
    raw: &RawInstance,
    config: PlannerConfig,
) -> Result<(ProblemInstance, Vec<Warning>), ValidationReport> {
    let mut violations = config.check();
    let mut warnings = Vec::new();

    let field = match Polygon::new(raw.field.ring.clone()) {
        Ok(f) => Some(f),
        Err(e) => {
            violations.push(geometry_violation(&raw.field.id, e));
            None
        }
    };

    if !raw.entrance.is_finite() {
        violations.push(Violation {
            feature: "entrance".into(),
            kind: ViolationKind::Geometry,
            at: None,
            message: "entrance has non-finite coordinates".into(),
        });
    } else if let Some(field) = &field {
        if point_in_polygon(raw.entrance, field) == Containment::Outside {
            violations.push(Violation {
                feature: "entrance".into(),
                kind: ViolationKind::OutsideField,
                at: Some(raw.entrance),
                message: "entrance lies outside the field".into(),
            });
        }
    }

    let mut obstacles: Vec<(String, Polygon)> = Vec::new();
    for feat in &raw.obstacles {
        match Polygon::new(feat.ring.clone()) {
            Err(e) => violations.push(geometry_violation(&feat.id, e)),
            Ok(poly) => {
                if let Some(field) = &field {
                    let outside = difference(&poly, field);
                    if total_area(&outside) > AREA_TOL {
                        let (_, at) = excursion(&outside, field);
                        violations.push(Violation {
                            feature: feat.id.clone(),
                            kind: ViolationKind::OutsideField,
                            at: Some(at),
                            message: format!("obstacle '{}' extends beyond the field", feat.id),
                        });
                        continue;
                    }
                }
                if point_in_polygon(raw.entrance, &poly) == Containment::Inside {
                    violations.push(Violation {
                        feature: feat.id.clone(),
                        kind: ViolationKind::Overlap,
                        at: Some(raw.entrance),
                        message: format!("entrance lies inside obstacle '{}'", feat.id),
                    });
                }
                obstacles.push((feat.id.clone(), poly));
            }
        }
    }

    let mut patches: Vec<(String, Polygon)> = Vec::new();
    for feat in &raw.patches {
        let poly = match Polygon::new(feat.ring.clone()) {
            Ok(p) => p,
            Err(e) => {
                violations.push(geometry_violation(&feat.id, e));
                continue;
            }
        };
        let Some(field) = &field else {
            patches.push((feat.id.clone(), poly));
            continue;
        };
        let outside = difference(&poly, field);
        if total_area(&outside) <= AREA_TOL {
            patches.push((feat.id.clone(), poly));
            continue;
        }
        let (depth, at) = excursion(&outside, field);
        if depth > MAX_PATCH_EXCURSION {
            violations.push(Violation {
                feature: feat.id.clone(),
                kind: ViolationKind::OutsideField,
                at: Some(at),
                message: format!(
                    "patch '{}' exceeds the field contour by {depth:.3} m (limit {MAX_PATCH_EXCURSION} m)",
                    feat.id
                ),
            });
            continue;
        }
        let inside = intersection(&poly, field);
        match inside
            .into_iter()
            .max_by(|a, b| a.area().total_cmp(&b.area()))
        {
            Some(clipped) => {
                warnings.push(Warning::new(
                    Stage::Validation,
                    format!(
                        "patch '{}' exceeds the field contour by {depth:.3} m; clipped to the field ({:.3} m² removed)",
                        feat.id,
                        poly.area() - clipped.area()
                    ),
                ));
                patches.push((feat.id.clone(), clipped));
            }
            None => violations.push(Violation {
                feature: feat.id.clone(),
                kind: ViolationKind::OutsideField,
                at: Some(at),
                message: format!("patch '{}' lies outside the field", feat.id),
            }),
        }
    }

    for (oid, o) in &obstacles {
        for (pid, p) in &patches {
            if let Some(v) = overlap_violation("obstacle", oid, pid, o, p) {
                violations.push(v);
            }
        }
    }
    for i in 0..patches.len() {
        for j in (i + 1)..patches.len() {
            let ((a, pa), (b, pb)) = (&patches[i], &patches[j]);
            if let Some(v) = overlap_violation("patch", a, b, pa, pb) {
                violations.push(v);
            }
        }
    }

    if raw.patches.is_empty() {
        violations.push(Violation {
            feature: "patch".into(),
            kind: ViolationKind::Missing,
            at: None,
            message: "instance contains no patch".into(),
        });
    }

    for (pid, p) in &patches {
        if point_in_polygon(raw.entrance, p) != Containment::Outside {
            warnings.push(Warning::new(
                Stage::Validation,
                format!("entrance lies inside or on patch '{pid}'"),
            ));
        }
    }

    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }
    let (obstacle_ids, obstacles) = obstacles.into_iter().unzip();
    let (patch_ids, patches) = patches.into_iter().unzip();
    Ok((
        ProblemInstance {
            field: field.expect("field validated"),
            obstacles,
            patches,
            entrance: raw.entrance,
            config,
            obstacle_ids,
            patch_ids,
        },
        warnings,
    ))
}

/// Complete graph over the entrance (node 0) and the patches (nodes 1..=N).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionGraph {
    n: usize,
    cost: Vec<Vec<f64>>,
    /// `contact[i][j]` is the point on node `i` realizing `cost[i][j]`.
    contact: Vec<Vec<Point2>>,
}

impl TransitionGraph {
    /// Graph over point-like nodes; node 0 is the first point.
    pub fn from_points(points: &[Point2]) -> Self {
        let n = points.len();
        let mut cost = vec![vec![0.0; n]; n];
        let mut contact = vec![vec![Point2::default(); n]; n];
        for i in 0..n {
            for j in 0..n {
                contact[i][j] = points[i];
                if i != j {
                    cost[i][j] = points[i].dist(points[j]).max(MIN_TRANSITION_COST);
                }
            }
        }
        Self { n, cost, contact }
    }

    /// Graph from an explicit symmetric cost matrix. Nodes have no planar
    /// position; every contact point is the origin.
    pub fn from_matrix(cost: Vec<Vec<f64>>) -> Self {
        let n = cost.len();
        assert!(cost.iter().all(|row| row.len() == n), "cost matrix must be square");
        Self {
            n,
            contact: vec![vec![Point2::default(); n]; n],
            cost,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i][j]
    }

    pub fn costs(&self) -> &[Vec<f64>] {
        &self.cost
    }

    /// Point on node `i` where the transition towards node `j` starts.
    pub fn contact(&self, i: usize, j: usize) -> Point2 {
        self.contact[i][j]
    }
}

/// Costs are closest boundary-to-boundary distances; the entrance acts as
/// a degenerate point patch. Obstacles are ignored here and handled once
/// the tour is fixed.
pub fn build_transition_graph(instance: &ProblemInstance) -> (TransitionGraph, Vec<Warning>) {
    let n = instance.patches.len() + 1;
    let mut cost = vec![vec![0.0; n]; n];
    let mut contact = vec![vec![instance.entrance; n]; n];
    let mut warnings = Vec::new();
    let mut set = |i: usize, j: usize, a: Point2, b: Point2, d: f64, warnings: &mut Vec<Warning>| {
        let d = if d < MIN_TRANSITION_COST {
            warnings.push(Warning::new(
                Stage::Graph,
                format!("transition cost between nodes {i} and {j} is {d:.3e} m; clamped to {MIN_TRANSITION_COST} m"),
            ));
            MIN_TRANSITION_COST
        } else {
            d
        };
        cost[i][j] = d;
        cost[j][i] = d;
        contact[i][j] = a;
        contact[j][i] = b;
    };
    for (k, patch) in instance.patches.iter().enumerate() {
        let (q, d) = closest_point_on_boundary(instance.entrance, patch);
        set(0, k + 1, instance.entrance, q, d, &mut warnings);
    }
    for i in 0..instance.patches.len() {
        for j in (i + 1)..instance.patches.len() {
            let c = closest_boundary_points(&instance.patches[i], &instance.patches[j])
                .expect("validated patches are disjoint");
            set(i + 1, j + 1, c.on_a, c.on_b, c.distance, &mut warnings);
        }
    }
    (TransitionGraph { n, cost, contact }, warnings)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchClassification {
    /// Indexed by patch (0-based, i.e. node - 1).
    pub needs_coverage: Vec<bool>,
    pub n_covg: usize,
}

/// A patch needs a coverage plan iff the minimum width of its convex hull
/// exceeds the operating width; narrower patches are sprayed by one pass.
pub fn classify_patches(instance: &ProblemInstance) -> PatchClassification {
    let w = instance.config.width;
    let needs_coverage: Vec<bool> = instance.patches.iter().map(|p| min_width(p) > w).collect();
    let n_covg = needs_coverage.iter().filter(|&&b| b).count();
    PatchClassification {
        needs_coverage,
        n_covg,
    }
}
