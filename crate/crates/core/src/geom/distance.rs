use super::point::{project_on_segment, Point2};
use super::polygon::Polygon;
use super::predicates::{point_in_polygon, segments_intersect, Containment};
use super::GeomError;

/// Distances within this many meters are considered tied.
const TIE_TOL: f64 = 1e-9;

/// Pair of boundary points realizing the boundary-to-boundary distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryContact {
    pub on_a: Point2,
    pub on_b: Point2,
    pub distance: f64,
}

struct Candidate {
    d: f64,
    ta: f64,
    tb: f64,
    pa: Point2,
    pb: Point2,
}

/// Closest points between two non-intersecting segments, ties broken by
/// the lowest parameter on `a`, then on `b`.
fn segment_pair_closest(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> Candidate {
    let mut cands = Vec::with_capacity(4);
    for (ta, pa) in [(0.0, a0), (1.0, a1)] {
        let (tb, pb) = project_on_segment(pa, b0, b1);
        cands.push(Candidate { d: pa.dist(pb), ta, tb, pa, pb });
    }
    for (tb, pb) in [(0.0, b0), (1.0, b1)] {
        let (ta, pa) = project_on_segment(pb, a0, a1);
        cands.push(Candidate { d: pa.dist(pb), ta, tb, pa, pb });
    }
    let mut best = cands.swap_remove(0);
    for c in cands {
        let better = c.d < best.d - TIE_TOL
            || ((c.d - best.d).abs() <= TIE_TOL
                && (c.ta < best.ta || (c.ta == best.ta && c.tb < best.tb)));
        if better {
            best = c;
        }
    }
    best
}

fn closest_between_edges(a: &[(Point2, Point2)], b: &[(Point2, Point2)]) -> BoundaryContact {
    let mut best: Option<Candidate> = None;
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            let c = segment_pair_closest(a0, a1, b0, b1);
            if best.as_ref().is_none_or(|cur| c.d < cur.d - TIE_TOL) {
                best = Some(c);
            }
        }
    }
    let best = best.expect("non-empty edge lists");
    BoundaryContact {
        on_a: best.pa,
        on_b: best.pb,
        distance: best.d,
    }
}

/// Points on the boundaries of two disjoint polygons that achieve the
/// minimum boundary-to-boundary distance. Ties go to the lowest edge index
/// of `a`, then of `b`, then to the lowest parameter along the edge.
pub fn closest_boundary_points(a: &Polygon, b: &Polygon) -> Result<BoundaryContact, GeomError> {
    let ea: Vec<_> = a.edges().collect();
    let eb: Vec<_> = b.edges().collect();
    for &(a0, a1) in &ea {
        for &(b0, b1) in &eb {
            if segments_intersect(a0, a1, b0, b1) {
                return Err(GeomError::Overlap);
            }
        }
    }
    if point_in_polygon(a.vertices()[0], b) != Containment::Outside
        || point_in_polygon(b.vertices()[0], a) != Containment::Outside
    {
        return Err(GeomError::Overlap);
    }
    Ok(closest_between_edges(&ea, &eb))
}

/// Closest point on the boundary of `poly` to `p`, with the same tie rule.
pub fn closest_point_on_boundary(p: Point2, poly: &Polygon) -> (Point2, f64) {
    let ea: Vec<_> = poly.edges().collect();
    let c = closest_between_edges(&ea, &[(p, p)]);
    (c.on_a, c.distance)
}
