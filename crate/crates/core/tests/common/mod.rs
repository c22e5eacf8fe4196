//! Independent oracles and a deterministic instance corpus shared by the
//! integration tests.
#![allow(dead_code)]

use bpoly_core::ballpoly::{min_basic_radius, BasicBallPolyhedron, CenterPolytope};
use bpoly_core::generate::{moment_points, random_convex_position, regular_simplex, unit_cube};
use bpoly_core::{Point, Tolerance};
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect()
}

/// Sphere through `pts` with center in their affine hull, by normal
/// equations on the difference vectors. `None` when they are dependent.
pub fn sphere_through(pts: &[&Point]) -> Option<(Point, f64)> {
    let p0 = pts[0];
    if pts.len() == 1 {
        return Some((p0.clone(), 0.0));
    }
    let d = p0.dim();
    let k = pts.len() - 1;
    let a = DMatrix::from_fn(d, k, |i, j| pts[j + 1][i] - p0[i]);
    let gram = a.transpose() * &a;
    let rhs = DVector::from_fn(k, |j, _| 0.5 * gram[(j, j)]);
    let sv = a.clone().svd(false, false).singular_values;
    if sv.min() < 1e-9 * sv.max() {
        return None;
    }
    let lambda = gram.lu().solve(&rhs)?;
    let center = p0.to_vector() + a * lambda;
    let c = Point::from_vector(&center);
    let radius = c.dist(p0);
    Some((c, radius))
}

/// Smallest ball over all support subsets of size at most d+1.
pub fn brute_force_meb(points: &[Point]) -> (Point, f64) {
    let d = points[0].dim();
    let mut best: Option<(Point, f64)> = None;
    for size in 1..=(d + 1).min(points.len()) {
        for subset in points.iter().combinations(size) {
            let Some((c, rad)) = sphere_through(&subset) else {
                continue;
            };
            let encloses = points.iter().all(|p| c.dist(p) <= rad * (1.0 + 1e-12) + 1e-12);
            if encloses && best.as_ref().is_none_or(|(_, b)| rad < *b) {
                best = Some((c, rad));
            }
        }
    }
    best.expect("some subset encloses")
}

/// Wedge angle of the two tangent half-spaces at a generic point of the
/// intersection circle of two radius-r spheres whose centers are w apart.
pub fn tangent_hyperplane_angle(w: f64, r: f64, phase: f64) -> f64 {
    let ci = Point::new(vec![0.0, 0.0, 0.0]);
    let cj = Point::new(vec![w, 0.0, 0.0]);
    let h = (r * r - w * w / 4.0).sqrt();
    let p = Point::new(vec![w / 2.0, h * phase.cos(), h * phase.sin()]);
    // inward normals of the two balls at p
    let ni = (&ci - &p).normalized().unwrap();
    let nj = (&cj - &p).normalized().unwrap();
    // wedge angle of {x: <ni, x-p> >= 0} and {x: <nj, x-p> >= 0}
    std::f64::consts::PI - ni.dot(&nj).clamp(-1.0, 1.0).acos()
}

/// A random rotation (possibly improper) from QR of a Gaussian-ish matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize, allow_reflection: bool) -> DMatrix<f64> {
    let m = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let q = m.qr().q();
    if !allow_reflection && q.determinant() < 0.0 {
        let mut q = q;
        q.column_mut(0).neg_mut();
        return q;
    }
    q
}

pub fn transform(points: &[Point], m: &DMatrix<f64>, t: &DVector<f64>) -> Vec<Point> {
    points
        .iter()
        .map(|p| Point::from_vector(&(m * p.to_vector() + t)))
        .collect()
}

/// Random centers in convex position with radius 1.1 times the minimal admissible one.
pub fn random_instance(seed: u64, n: usize, d: usize) -> (Vec<Point>, f64) {
    let tol = Tolerance::default();
    let pts = random_convex_position(n, d, &mut rng(seed), tol).expect("convex position");
    let r = 1.1 * min_basic_radius(&pts, tol).expect("admissible radius").r_star;
    (pts, r)
}

pub fn basic(points: Vec<Point>, r: f64) -> BasicBallPolyhedron {
    BasicBallPolyhedron::new(CenterPolytope::new(points, r, Tolerance::default()).unwrap()).unwrap()
}

pub struct CorpusInstance {
    pub name: String,
    pub points: Vec<Point>,
    pub r: f64,
}

/// The regression corpus: named standard instances plus seeded random ones in d = 2, 3, 4.
pub fn corpus() -> Vec<CorpusInstance> {
    let mut out = vec![
        CorpusInstance {
            name: "tetrahedron".into(),
            points: regular_simplex(3, 1.0),
            r: 1.0,
        },
        CorpusInstance {
            name: "cube".into(),
            points: unit_cube(3),
            r: 1.0,
        },
        CorpusInstance {
            name: "square".into(),
            points: unit_cube(2),
            r: 1.0,
        },
        CorpusInstance {
            name: "tesseract".into(),
            points: unit_cube(4),
            r: 1.2,
        },
    ];
    for (n, d) in [(6, 3), (7, 4), (5, 2)] {
        let points = moment_points(n, d).unwrap();
        let r = 1.1 * min_basic_radius(&points, Tolerance::default()).unwrap().r_star;
        out.push(CorpusInstance {
            name: format!("moment-{n}-{d}"),
            points,
            r,
        });
    }
    for (seed, n, d) in [(11, 7, 2), (12, 9, 3), (13, 10, 3), (14, 8, 4)] {
        let (points, r) = random_instance(seed, n, d);
        out.push(CorpusInstance {
            name: format!("random-{seed}-{n}-{d}"),
            points,
            r,
        });
    }
    out
}
