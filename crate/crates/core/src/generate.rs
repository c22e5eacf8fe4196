//! Standard center sets: regular simplices, cubes, moment-curve points and
//! random point sets in convex position.

use rand::Rng;

use crate::bounds::{equally_spaced_taus, moment_curve_points};
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerance};
use crate::hull::convex_hull;

/// Vertices of a regular d-simplex with the given edge length.
pub fn regular_simplex(d: usize, edge: f64) -> Vec<Point> {
    let mut verts = vec![Point::origin(d)];
    for k in 1..=d {
        // apex over the centroid of the current (k-1)-simplex
        let m = (k - 1) as f64;
        let base_radius_sq = m / (2.0 * (m + 1.0));
        let height = (1.0 - base_radius_sq).sqrt();
        let mut apex = Point::centroid(&verts).into_coords();
        apex[k - 1] = height;
        verts.push(Point::new(apex));
    }
    verts.iter().map(|v| v * edge).collect()
}

/// The 2^d vertices of `[0,1]^d`; vertex i has coordinate k equal to bit k of i.
pub fn unit_cube(d: usize) -> Vec<Point> {
    (0..1usize << d)
        .map(|i| Point::new((0..d).map(|k| ((i >> k) & 1) as f64).collect()))
        .collect()
}

/// `n` moment-curve points with parameters equally spaced in `[-1, 1]`.
pub fn moment_points(n: usize, d: usize) -> Result<Vec<Point>> {
    moment_curve_points(&equally_spaced_taus(n), d)
}

/// `n` random points in convex position, drawn one at a time from the shell
/// `0.85 <= |x| <= 1` and kept only if every point so far stays a hull vertex.
pub fn random_convex_position<R: Rng>(n: usize, d: usize, rng: &mut R, tol: Tolerance) -> Result<Vec<Point>> {
    if d < 2 || n < d + 1 {
        return Err(Error::InvalidParameters(format!("need d >= 2 and n >= d+1, got n={n}, d={d}")));
    }
    const MAX_DRAWS: usize = 100_000;
    let mut points: Vec<Point> = Vec::with_capacity(n);
    for _ in 0..MAX_DRAWS {
        if points.len() == n {
            break;
        }
        let candidate = random_shell_point(d, rng);
        let mut trial = points.clone();
        trial.push(candidate);
        if trial.len() <= d {
            points = trial;
            continue;
        }
        match convex_hull(&trial, d, tol) {
            Ok(hull) if hull.non_vertices().is_empty() => points = trial,
            _ => {}
        }
    }
    if points.len() < n {
        return Err(Error::InvalidParameters(format!(
            "could not place {n} points in convex position in dimension {d}"
        )));
    }
    Ok(points)
}

fn random_shell_point<R: Rng>(d: usize, rng: &mut R) -> Point {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = Point::new(v);
        let n = p.norm();
        if n > 0.1 && n <= 1.0 {
            let radius = rng.gen_range(0.85..=1.0);
            return &p * (radius / n);
        }
    }
}
