use super::lanes::{chords, direction};
use super::{CoveragePlan, LaneSet, Lane, PlanMethod};
use crate::geom::{Point2, Polygon, Polyline};

/// Plain zigzag over the raw patch without a headland loop, lanes parallel
/// to the x axis. Lanes sit `w/2` inside the extent, spaced `w`; a leftover
/// strip gets one more lane flush with the far side, and a patch narrower
/// than `w` gets a single centered lane. Connectors are straight.
///
/// Only used to quantify the coverage gaps a headland avoids.
pub fn plan_boustrophedon_reference(patch: &Polygon, w: f64) -> CoveragePlan {
    let orientation = 0.0;
    let (u, v) = direction(orientation);
    let (lo, hi) = patch
        .vertices()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(v.dot(*p)), hi.max(v.dot(*p)))
        });
    let mut offsets = Vec::new();
    if hi - lo <= w {
        offsets.push(0.5 * (lo + hi));
    } else {
        let mut o = lo + 0.5 * w;
        while o <= hi - 0.5 * w + 1e-9 {
            offsets.push(o);
            o += w;
        }
        if hi - 0.5 * w - offsets[offsets.len() - 1] > 1e-9 {
            offsets.push(hi - 0.5 * w);
        }
    }
    let mut lanes = Vec::new();
    for &offset in &offsets {
        for (a, b) in chords(patch, u, v, offset) {
            lanes.push(Lane { a, b, offset });
        }
    }
    let mut pts: Vec<Point2> = Vec::new();
    for (k, lane) in lanes.iter().enumerate() {
        if k % 2 == 0 {
            pts.extend([lane.a, lane.b]);
        } else {
            pts.extend([lane.b, lane.a]);
        }
    }
    let path = Polyline::new(pts).expect("at least one lane");
    CoveragePlan {
        patch_index: 0,
        method: PlanMethod::Boustrophedon,
        entry: path.start(),
        length: path.length(),
        lane_count: lanes.len(),
        path,
        headland: Vec::new(),
        lanes: vec![LaneSet { orientation, lanes }],
    }
}
