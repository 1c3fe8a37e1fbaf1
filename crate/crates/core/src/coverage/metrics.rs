use serde::{Deserialize, Serialize};

use crate::geom::{Point2, Polygon};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageMetrics {
    pub covered_area: f64,
    pub gap_area: f64,
    pub overlap_area: f64,
    pub gap_fraction: f64,
    /// Raster cell edge used for the estimate (m).
    pub cell_size: f64,
}

/// Cell edge of the coverage raster for operating width `w`.
pub fn raster_cell_size(w: f64) -> f64 {
    (w / 20.0).min(0.1)
}

struct Grid {
    origin: Point2,
    h: f64,
    cols: usize,
    rows: usize,
    inside: Vec<bool>,
}

impl Grid {
    /// Cells whose centers lie inside `poly`, found by scanline crossings.
    fn new(poly: &Polygon, h: f64) -> Self {
        let (lo, hi) = poly.bbox();
        let cols = ((hi.x - lo.x) / h).ceil() as usize + 1;
        let rows = ((hi.y - lo.y) / h).ceil() as usize + 1;
        let mut inside = vec![false; cols * rows];
        let mut xs = Vec::new();
        for r in 0..rows {
            let y = lo.y + (r as f64 + 0.5) * h;
            xs.clear();
            for (a, b) in poly.edges() {
                if (a.y > y) != (b.y > y) {
                    xs.push(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
            xs.sort_by(f64::total_cmp);
            for pair in xs.chunks_exact(2) {
                let c0 = ((pair[0] - lo.x) / h - 0.5).ceil().max(0.0) as usize;
                let c1 = ((pair[1] - lo.x) / h - 0.5).floor();
                if c1 < 0.0 {
                    continue;
                }
                for c in c0..=(c1 as usize).min(cols - 1) {
                    inside[r * cols + c] = true;
                }
            }
        }
        Self {
            origin: lo,
            h,
            cols,
            rows,
            inside,
        }
    }

    fn center(&self, r: usize, c: usize) -> Point2 {
        Point2::new(
            self.origin.x + (c as f64 + 0.5) * self.h,
            self.origin.y + (r as f64 + 0.5) * self.h,
        )
    }
}

/// Parameter interval of segment `a + t·d`, `t ∈ [0, 1]`, within distance
/// `r` of `c`.
fn segment_interval(a: Point2, d: Point2, c: Point2, r: f64) -> Option<(f64, f64)> {
    let f = a - c;
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - r * r;
    if qa == 0.0 {
        return (qc <= 0.0).then_some((0.0, 0.0));
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    (t0 <= t1).then_some((t0, t1))
}

/// Coverage of `patch` by the swath of width `w` around `path` (the path
/// buffered by `w/2` with round ends), estimated on a raster.
///
/// A cell counts once per pass: a pass is a maximal stretch of path
/// arc length during which the cell center stays inside the swath. Cells
/// visited by two or more passes make up the overlap.
pub fn coverage_metrics(path: &[Point2], patch: &Polygon, w: f64) -> CoverageMetrics {
    let h = raster_cell_size(w);
    let grid = Grid::new(patch, h);
    let r = 0.5 * w;
    let n = grid.cols * grid.rows;
    let mut passes = vec![0u32; n];
    let mut last_end = vec![f64::NEG_INFINITY; n];
    let mut s = 0.0;
    let mut visit = |a: Point2, b: Point2, s: f64| {
        let d = b - a;
        let len = d.norm();
        let (lo_x, hi_x) = (a.x.min(b.x) - r, a.x.max(b.x) + r);
        let (lo_y, hi_y) = (a.y.min(b.y) - r, a.y.max(b.y) + r);
        let c0 = ((lo_x - grid.origin.x) / h - 0.5).ceil().max(0.0) as usize;
        let r0 = ((lo_y - grid.origin.y) / h - 0.5).ceil().max(0.0) as usize;
        let c1 = ((hi_x - grid.origin.x) / h - 0.5).floor();
        let r1 = ((hi_y - grid.origin.y) / h - 0.5).floor();
        if c1 < 0.0 || r1 < 0.0 {
            return;
        }
        let c1 = (c1 as usize).min(grid.cols - 1);
        let r1 = (r1 as usize).min(grid.rows - 1);
        for row in r0..=r1 {
            for col in c0..=c1 {
                let idx = row * grid.cols + col;
                if !grid.inside[idx] {
                    continue;
                }
                if let Some((t0, t1)) = segment_interval(a, d, grid.center(row, col), r) {
                    let (start, end) = (s + t0 * len, s + t1 * len);
                    if start > last_end[idx] + 1e-9 {
                        passes[idx] += 1;
                    }
                    last_end[idx] = last_end[idx].max(end);
                }
            }
        }
    };
    match path {
        [] => {}
        [p] => visit(*p, *p, 0.0),
        _ => {
            for seg in path.windows(2) {
                visit(seg[0], seg[1], s);
                s += seg[0].dist(seg[1]);
            }
        }
    }
    let inside = grid.inside.iter().filter(|&&b| b).count();
    let covered = passes.iter().filter(|&&p| p >= 1).count();
    let overlapped = passes.iter().filter(|&&p| p >= 2).count();
    let area = patch.area();
    let frac = |k: usize| if inside == 0 { 0.0 } else { k as f64 / inside as f64 };
    let covered_area = area * frac(covered);
    CoverageMetrics {
        covered_area,
        gap_area: area - covered_area,
        overlap_area: area * frac(overlapped),
        gap_fraction: 1.0 - frac(covered),
        cell_size: h,
    }
}
