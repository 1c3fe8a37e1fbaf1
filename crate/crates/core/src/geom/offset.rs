//! Polygon offsetting and boolean operations, backed by `i_overlay`.

use i_overlay::core::fill_rule::FillRule;
use i_overlay::core::overlay_rule::OverlayRule;
use i_overlay::float::single::SingleFloatOverlay;
use i_overlay::mesh::outline::offset::OutlineOffset;
use i_overlay::mesh::style::{LineJoin, OutlineStyle};

use super::point::Point2;
use super::polygon::Polygon;

/// Arc approximation for rounded joins: max chord length over radius.
const ROUND_JOIN_RATIO: f64 = 0.05;

/// Components smaller than this (m²) are treated as numerical debris.
const MIN_COMPONENT_AREA: f64 = 1e-9;

fn to_contour(poly: &Polygon) -> Vec<[f64; 2]> {
    poly.vertices().iter().map(|p| [p.x, p.y]).collect()
}

fn outer_contours(shapes: Vec<Vec<Vec<[f64; 2]>>>) -> Vec<Polygon> {
    let mut out: Vec<Polygon> = shapes
        .into_iter()
        .filter_map(|shape| shape.into_iter().next())
        .filter_map(|contour| {
            Polygon::new(contour.into_iter().map(|[x, y]| Point2::new(x, y)).collect()).ok()
        })
        .filter(|p| p.area() > MIN_COMPONENT_AREA)
        .collect();
    // Deterministic component order: lowest-left vertex first.
    out.sort_by(|a, b| {
        let (la, _) = a.bbox();
        let (lb, _) = b.bbox();
        la.x.total_cmp(&lb.x).then(la.y.total_cmp(&lb.y))
    });
    out
}

/// Inward offset of `poly` by distance `d > 0`.
///
/// Convex corners are mitered (the exact erosion), reflex corners are
/// rounded. The result is empty when the polygon is thinner than `2d`
/// everywhere, and has several components when the offset disconnects a
/// non-convex polygon.
pub fn offset_inward(poly: &Polygon, d: f64) -> Vec<Polygon> {
    assert!(d > 0.0, "offset distance must be positive");
    let style = OutlineStyle::new(-d).line_join(LineJoin::Round(ROUND_JOIN_RATIO));
    outer_contours(to_contour(poly).outline(&style))
}

/// Outward offset (dilation) by `d > 0` with rounded corners.
pub fn offset_outward(poly: &Polygon, d: f64) -> Vec<Polygon> {
    assert!(d > 0.0, "offset distance must be positive");
    let style = OutlineStyle::new(d).line_join(LineJoin::Round(ROUND_JOIN_RATIO));
    outer_contours(to_contour(poly).outline(&style))
}

/// Components of `a ∩ b`.
pub fn intersection(a: &Polygon, b: &Polygon) -> Vec<Polygon> {
    outer_contours(to_contour(a).overlay(&to_contour(b), OverlayRule::Intersect, FillRule::NonZero))
}

/// Components of `a \ b`, outer boundaries only.
pub fn difference(a: &Polygon, b: &Polygon) -> Vec<Polygon> {
    outer_contours(to_contour(a).overlay(&to_contour(b), OverlayRule::Difference, FillRule::NonZero))
}
