//! Seeded instance generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spotspray::model::TransitionGraph;
use spotspray::{validate_instance, PlannerConfig, Point2, Polygon, ProblemInstance, RawFeature, RawInstance};

/// Transition graph over `n` random point patches plus the entrance in a
/// `side` × `side` square.
pub fn point_graph(n: usize, side: f64, seed: u64) -> TransitionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point2> = (0..=n)
        .map(|_| Point2::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect();
    TransitionGraph::from_points(&pts)
}

/// Rectangle `w` × `h` rotated by `angle` about its corner.
pub fn rotated_rect(w: f64, h: f64, angle: f64) -> Polygon {
    Polygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(w, 0.0),
        Point2::new(w, h),
        Point2::new(0.0, h),
    ])
    .expect("rectangle is valid")
    .rotated(angle, Point2::new(0.0, 0.0))
}

/// Square field with `n` non-overlapping square patches on a jittered grid;
/// roughly a third of them large enough to need coverage.
pub fn grid_field(n: usize, seed: u64, config: PlannerConfig) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = (n as f64).sqrt().ceil() as usize;
    let cell = 40.0;
    let side = cols as f64 * cell + 20.0;
    let square = |x: f64, y: f64, s: f64| {
        vec![Point2::new(x, y), Point2::new(x + s, y), Point2::new(x + s, y + s), Point2::new(x, y + s)]
    };
    let patches = (0..n)
        .map(|k| {
            let s = if rng.random_bool(0.35) { rng.random_range(8.0..25.0) } else { rng.random_range(0.5..1.8) };
            let x = 10.0 + (k % cols) as f64 * cell + rng.random_range(2.0..(cell - s - 2.0));
            let y = 10.0 + (k / cols) as f64 * cell + rng.random_range(2.0..(cell - s - 2.0));
            RawFeature::new(format!("p{k}"), square(x, y, s))
        })
        .collect();
    let raw = RawInstance {
        field: RawFeature::new("field", square(0.0, 0.0, side)),
        entrance: Point2::new(0.0, side / 2.0),
        obstacles: Vec::new(),
        patches,
    };
    validate_instance(&raw, config).expect("generated instance is valid").0
}
