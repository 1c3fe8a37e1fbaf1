//! End-to-end mission planning: tour, coverage plans, transitions,
//! obstacle correction and the length report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::avoid::{build_hulls, contain_in_field, detour_segment, AvoidError, ObstacleHull};
use crate::coverage::{plan_with_layout, CoverageError, CoveragePlan, PatchLayout, PlanMethod};
use crate::error::{PlanError, Stage, Warning};
use crate::geom::{Point2, Polyline, WAYPOINT_MERGE_TOL};
use crate::model::{
    build_transition_graph, classify_patches, CoverageMethod, ExitTransition, PatchClassification,
    ProblemInstance, TransitionGraph, TspInit,
};
use crate::tsp::{init_denn, init_nn, refine_pipeline, Budget, TspTour};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentTag {
    Transit,
    Detour,
    /// Coverage path of the patch with this 0-based index.
    Coverage(usize),
}

impl fmt::Display for SegmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentTag::Transit => f.write_str("transit"),
            SegmentTag::Detour => f.write_str("detour"),
            SegmentTag::Coverage(i) => write!(f, "coverage:{i}"),
        }
    }
}

impl FromStr for SegmentTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "transit" => Ok(SegmentTag::Transit),
            "detour" => Ok(SegmentTag::Detour),
            _ => s
                .strip_prefix("coverage:")
                .and_then(|i| i.parse().ok())
                .map(SegmentTag::Coverage)
                .ok_or_else(|| format!("unknown segment tag '{s}'")),
        }
    }
}

impl Serialize for SegmentTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SegmentTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissionPath {
    pub waypoints: Polyline,
    /// One tag per segment.
    pub segment_tags: Vec<SegmentTag>,
    pub total_length: f64,
    pub visit_order: TspTour,
}

impl MissionPath {
    /// Summed length of the segments whose tag satisfies `pred`.
    pub fn length_where(&self, pred: impl Fn(SegmentTag) -> bool) -> f64 {
        self.waypoints
            .segments()
            .zip(&self.segment_tags)
            .filter(|(_, &t)| pred(t))
            .map(|((a, b), _)| a.dist(b))
            .sum()
    }

    pub fn transit_length(&self) -> f64 {
        self.length_where(|t| !matches!(t, SegmentTag::Coverage(_)))
    }

    pub fn coverage_length(&self) -> f64 {
        self.length_where(|t| matches!(t, SegmentTag::Coverage(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchLengths {
    /// 0-based patch index.
    pub patch: usize,
    pub classic_m: f64,
    pub optim_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissionReport {
    pub tsp_init: String,
    pub tsp_refine: String,
    pub coverage_method: String,
    pub exit_transition: String,
    pub runtime_init_s: f64,
    pub runtime_refine_s: f64,
    pub runtime_total_s: f64,
    pub l_tsp_m: f64,
    pub transit_m: f64,
    pub per_patch: Vec<PatchLengths>,
    pub sum_classic_m: f64,
    pub sum_optim_m: f64,
    pub savings_m: f64,
    /// `(Σ classic − Σ optimised) / Σ classic`; positive when optimised
    /// plans are shorter.
    pub savings_pct: f64,
    pub l_total_classic_m: f64,
    pub l_total_optim_m: f64,
    pub total_savings_m: f64,
    pub total_savings_pct: f64,
    pub coverage_share_classic: f64,
    pub coverage_share_optim: f64,
    pub n_patches_all: usize,
    pub n_patches_covg: usize,
    /// Total length for `coverage_method`.
    pub l_total_m: f64,
    /// Coverage share `Σ L_i / L_total` for `coverage_method`.
    pub coverage_share: f64,
}

impl MissionReport {
    /// The same report with the headline fields taken from `method`.
    pub fn for_method(&self, method: CoverageMethod) -> MissionReport {
        let mut r = self.clone();
        r.coverage_method = method.to_string();
        let (total, share) = match method {
            CoverageMethod::Classic => (r.l_total_classic_m, r.coverage_share_classic),
            CoverageMethod::Optimised => (r.l_total_optim_m, r.coverage_share_optim),
        };
        r.l_total_m = total;
        r.coverage_share = share;
        r
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Everything computed for one instance.
#[derive(Clone, Debug)]
pub struct MissionOutcome {
    /// Path with the configured coverage method.
    pub path: MissionPath,
    /// Same tour and transitions with the other coverage method.
    pub alternate_path: MissionPath,
    pub report: MissionReport,
    /// Plans of the configured method, indexed like the patches; `None`
    /// for patches sprayed by a single pass.
    pub coverage_plans: Vec<Option<CoveragePlan>>,
    pub warnings: Vec<Warning>,
    pub graph: TransitionGraph,
    pub classification: PatchClassification,
}

/// Transition from the patch entry to its exit point after coverage.
/// `None` when the two points coincide.
pub fn exit_transition(
    layout: Option<&PatchLayout>,
    entry: Point2,
    exit: Point2,
    mode: ExitTransition,
) -> Option<Polyline> {
    if entry.dist(exit) <= WAYPOINT_MERGE_TOL {
        return None;
    }
    let straight = || Polyline::new([entry, exit]).ok();
    let Some(layout) = layout.filter(|_| mode == ExitTransition::Headland) else {
        return straight();
    };
    let nearest = |p: Point2| {
        layout
            .rings
            .iter()
            .enumerate()
            .map(|(k, r)| (k, r.project(p)))
            .min_by(|a, b| a.1 .2.total_cmp(&b.1 .2))
            .expect("layout has a headland")
    };
    let (ka, (sa, pa, _)) = nearest(entry);
    let (kb, (sb, pb, _)) = nearest(exit);
    if ka != kb {
        return straight();
    }
    let ring = &layout.rings[ka];
    let (len, fwd) = ring.shorter_arc(sa, sb);
    let mut pts = vec![entry, pa];
    let walk = ring.walk(sa, len, fwd);
    if !walk.is_empty() {
        pts.extend(&walk[..walk.len() - 1]);
    }
    pts.extend([pb, exit]);
    Polyline::new(pts).ok()
}

struct Builder {
    pts: Vec<Point2>,
    tags: Vec<SegmentTag>,
}

impl Builder {
    fn new(start: Point2) -> Self {
        Self {
            pts: vec![start],
            tags: Vec::new(),
        }
    }

    fn extend(&mut self, piece: &[Point2], tag: SegmentTag) {
        for &p in piece {
            let last = *self.pts.last().expect("non-empty");
            if last.dist(p) > WAYPOINT_MERGE_TOL {
                self.pts.push(p);
                self.tags.push(tag);
            }
        }
    }

    fn finish(self, visit_order: TspTour) -> MissionPath {
        let waypoints = Polyline::new(self.pts).expect("mission visits at least one patch");
        let total_length = waypoints.length();
        MissionPath {
            waypoints,
            segment_tags: self.tags,
            total_length,
            visit_order,
        }
    }
}

/// Per-patch data fixed before the coverage method is chosen.
struct Visit {
    patch: usize,
    entry: Point2,
    exit: Point2,
    plans: Option<(CoveragePlan, CoveragePlan)>,
    exit_path: Option<Polyline>,
}

fn correct_transit(
    p: Point2,
    q: Point2,
    hulls: &[ObstacleHull],
    instance: &ProblemInstance,
    warnings: &mut Vec<Warning>,
) -> Result<(Vec<Point2>, SegmentTag), PlanError> {
    if p.dist(q) <= WAYPOINT_MERGE_TOL {
        return Ok((vec![q], SegmentTag::Transit));
    }
    let avoided = match detour_segment(p, q, hulls, instance.config.avoidance) {
        Ok(path) => path,
        Err(AvoidError::NotConverged { iterations, path }) => {
            warnings.push(Warning::new(
                Stage::Avoidance,
                format!(
                    "detour from ({:.2}, {:.2}) to ({:.2}, {:.2}) still crosses an obstacle after {iterations} reroutes",
                    p.x, p.y, q.x, q.y
                ),
            ));
            path
        }
        Err(e) => return Err(PlanError::stage(Stage::Avoidance, e.to_string())),
    };
    let contained = contain_in_field(&avoided, &instance.field)
        .map_err(|e| PlanError::stage(Stage::Avoidance, e.to_string()))?;
    let tag = if contained.waypoints().len() > 2 {
        SegmentTag::Detour
    } else {
        SegmentTag::Transit
    };
    Ok((contained.into_waypoints(), tag))
}

/// Runs the whole pipeline on a validated instance.
pub fn plan_mission(instance: &ProblemInstance) -> Result<MissionOutcome, PlanError> {
    let cfg = &instance.config;
    let mut warnings = Vec::new();

    let (graph, w) = build_transition_graph(instance);
    warnings.extend(w);
    let mut classification = classify_patches(instance);

    let started = Instant::now();
    let init = match cfg.tsp_init {
        TspInit::Nn => init_nn(&graph),
        TspInit::Denn => init_denn(&graph),
    };
    let runtime_init = started.elapsed();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let budget = match cfg.move_budget {
        Some(m) => Budget::Moves(m),
        None => Budget::WallClock(cfg.time_budget()),
    };
    let refined = refine_pipeline(&graph, &init, &cfg.tsp_refine, &mut rng, budget);
    let tour = refined.tour.clone();
    let seq = tour.sequence();

    let mut visits = Vec::with_capacity(instance.n_patches());
    for k in 1..seq.len() - 1 {
        let node = seq[k];
        let patch = node - 1;
        let entry = graph.contact(node, seq[k - 1]);
        let exit = graph.contact(node, seq[k + 1]);
        let mut layout = None;
        if classification.needs_coverage[patch] {
            match PatchLayout::new(&instance.patches[patch], cfg.width) {
                Ok(l) => layout = Some(l),
                Err(CoverageError::NoHeadland { .. }) => {
                    classification.needs_coverage[patch] = false;
                    classification.n_covg -= 1;
                    warnings.push(Warning::new(
                        Stage::Coverage,
                        format!(
                            "patch '{}' has no headland at W/2; treated as a single-pass patch",
                            instance.patch_ids[patch]
                        ),
                    ));
                }
            }
        }
        if let Some(l) = &layout {
            if l.headland.len() > 1 {
                warnings.push(Warning::new(
                    Stage::Coverage,
                    format!(
                        "headland of patch '{}' splits into {} components, joined at the entry point",
                        instance.patch_ids[patch],
                        l.headland.len()
                    ),
                ));
            }
        }
        let plans = layout.as_ref().map(|l| {
            (
                plan_with_layout(l, entry, PlanMethod::Classic).with_index(patch),
                plan_with_layout(l, entry, PlanMethod::Optimised).with_index(patch),
            )
        });
        let exit_path = exit_transition(layout.as_ref(), entry, exit, cfg.exit_transition);
        visits.push(Visit {
            patch,
            entry,
            exit,
            plans,
            exit_path,
        });
    }

    let hulls = build_hulls(&instance.obstacles, cfg.obstacle_inflation);
    let mut transits = Vec::with_capacity(visits.len() + 1);
    let mut from = instance.entrance;
    for v in &visits {
        transits.push(correct_transit(from, v.entry, &hulls, instance, &mut warnings)?);
        from = v.exit;
    }
    transits.push(correct_transit(from, instance.entrance, &hulls, instance, &mut warnings)?);

    let assemble = |method: PlanMethod| {
        let mut b = Builder::new(instance.entrance);
        for (v, (transit, tag)) in visits.iter().zip(&transits) {
            b.extend(transit, *tag);
            if let Some((classic, optim)) = &v.plans {
                let plan = if method == PlanMethod::Classic { classic } else { optim };
                b.extend(plan.path.waypoints(), SegmentTag::Coverage(v.patch));
            }
            match &v.exit_path {
                Some(p) => b.extend(p.waypoints(), SegmentTag::Transit),
                None => b.extend(&[v.exit], SegmentTag::Transit),
            }
        }
        let (last, tag) = transits.last().expect("return transit");
        b.extend(last, *tag);
        b.finish(tour.clone())
    };
    let classic_path = assemble(PlanMethod::Classic);
    let optim_path = assemble(PlanMethod::Optimised);

    let per_patch: Vec<PatchLengths> = {
        let mut rows: Vec<PatchLengths> = visits
            .iter()
            .filter_map(|v| {
                v.plans.as_ref().map(|(c, o)| PatchLengths {
                    patch: v.patch,
                    classic_m: c.length,
                    optim_m: o.length,
                })
            })
            .collect();
        rows.sort_by_key(|r| r.patch);
        rows
    };
    let sum_classic: f64 = per_patch.iter().map(|r| r.classic_m).sum();
    let sum_optim: f64 = per_patch.iter().map(|r| r.optim_m).sum();
    let transit = optim_path.transit_length();
    let l_total_classic = transit + sum_classic;
    let l_total_optim = transit + sum_optim;
    let refine_names: Vec<String> = cfg.tsp_refine.iter().map(|h| h.to_string()).collect();
    let report = MissionReport {
        tsp_init: cfg.tsp_init.to_string(),
        tsp_refine: refine_names.join("+"),
        coverage_method: String::new(),
        exit_transition: cfg.exit_transition.to_string(),
        runtime_init_s: runtime_init.as_secs_f64(),
        runtime_refine_s: refined.runtime.as_secs_f64(),
        runtime_total_s: runtime_init.as_secs_f64() + refined.runtime.as_secs_f64(),
        l_tsp_m: tour.cost(),
        transit_m: transit,
        per_patch,
        sum_classic_m: sum_classic,
        sum_optim_m: sum_optim,
        savings_m: sum_classic - sum_optim,
        savings_pct: ratio(sum_classic - sum_optim, sum_classic),
        l_total_classic_m: l_total_classic,
        l_total_optim_m: l_total_optim,
        total_savings_m: l_total_classic - l_total_optim,
        total_savings_pct: ratio(l_total_classic - l_total_optim, l_total_classic),
        coverage_share_classic: ratio(sum_classic, l_total_classic),
        coverage_share_optim: ratio(sum_optim, l_total_optim),
        n_patches_all: instance.n_patches(),
        n_patches_covg: classification.n_covg,
        l_total_m: 0.0,
        coverage_share: 0.0,
    }
    .for_method(cfg.coverage_method);

    let mut coverage_plans = vec![None; instance.n_patches()];
    for v in visits {
        if let Some((c, o)) = v.plans {
            coverage_plans[v.patch] = Some(match cfg.coverage_method {
                CoverageMethod::Classic => c,
                CoverageMethod::Optimised => o,
            });
        }
    }
    let (path, alternate_path) = match cfg.coverage_method {
        CoverageMethod::Classic => (classic_path, optim_path),
        CoverageMethod::Optimised => (optim_path, classic_path),
    };
    Ok(MissionOutcome {
        path,
        alternate_path,
        report,
        coverage_plans,
        warnings,
        graph,
        classification,
    })
}
