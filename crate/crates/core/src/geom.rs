//! Dimension-generic points, flats, balls and the shared tolerance policy.
//!
//! Every predicate in the crate compares lengths against `Tolerance::eps`,
//! which is the relative tolerance scaled by the bounding-box diameter of the
//! input it was built for.

use std::ops::{Add, Index, Mul, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A point (or direction vector) of d-dimensional Euclidean space.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    /// The i-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Point(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    /// Scaled accumulate: `self + s * v`.
    pub fn add_scaled(&self, s: f64, v: &Point) -> Point {
        Point(self.0.iter().zip(&v.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn from_vector(v: &DVector<f64>) -> Point {
        Point(v.iter().copied().collect())
    }

    /// Arithmetic mean of a nonempty point list.
    pub fn centroid(points: &[Point]) -> Point {
        let d = points[0].dim();
        let mut acc = vec![0.0; d];
        for p in points {
            for (a, x) in acc.iter_mut().zip(&p.0) {
                *a += x;
            }
        }
        let n = points.len() as f64;
        Point(acc.into_iter().map(|a| a / n).collect())
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }
}

/// Relative comparison policy: lengths below `tol * scale` count as zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub tol: f64,
    pub scale: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            tol: 1e-9,
            scale: 1.0,
        }
    }
}

impl Tolerance {
    pub fn new(tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        Tolerance { tol, scale: 1.0 }
    }

    /// Same relative tolerance, scaled to the bounding-box diameter of `points`.
    pub fn scaled_to(&self, points: &[Point]) -> Self {
        let diam = bbox_diameter(points);
        Tolerance {
            tol: self.tol,
            scale: if diam > 0.0 { diam } else { 1.0 },
        }
    }

    pub fn for_points(tol: f64, points: &[Point]) -> Self {
        Tolerance::new(tol).scaled_to(points)
    }

    /// Absolute length threshold.
    pub fn eps(&self) -> f64 {
        self.tol * self.scale
    }
}

/// Diameter of the axis-aligned bounding box.
pub fn bbox_diameter(points: &[Point]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    let d = first.dim();
    (0..d)
        .map(|k| {
            let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[k]), hi.max(p[k]))
            });
            (hi - lo) * (hi - lo)
        })
        .sum::<f64>()
        .sqrt()
}

/// Orthonormal basis of span(vectors) by Gram-Schmidt with pivoting on the
/// largest residual. Residuals of length `<= eps` are treated as dependent.
///
/// Returns the basis and, for each basis vector, the index of the input
/// vector it was pivoted from.
pub fn orthonormal_basis(vectors: &[Point], eps: f64) -> (Vec<Point>, Vec<usize>) {
    let mut residuals: Vec<Point> = vectors.to_vec();
    let mut used = vec![false; vectors.len()];
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    loop {
        let best = residuals
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, r)| (i, r.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((i, len)) = best else { break };
        if len <= eps {
            break;
        }
        used[i] = true;
        let q = &residuals[i] * (1.0 / len);
        for (j, r) in residuals.iter_mut().enumerate() {
            if !used[j] {
                let c = r.dot(&q);
                *r = r.add_scaled(-c, &q);
            }
        }
        // one reorthogonalization pass against earlier vectors keeps q unit and orthogonal
        let mut q = q;
        for b in &basis {
            let c = q.dot(b);
            q = q.add_scaled(-c, b);
        }
        let q = q.normalized().expect("pivot residual above eps");
        basis.push(q);
        pivots.push(i);
    }
    (basis, pivots)
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub fn affine_rank(points: &[Point], eps: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Point> = points[1..].iter().map(|p| p - &points[0]).collect();
    orthonormal_basis(&diffs, eps).0.len()
}

/// Indices of a maximal affinely independent subset, chosen greedily by pivoting.
pub fn independent_subset(points: &[Point], eps: f64) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let diffs: Vec<Point> = points[1..].iter().map(|p| p - &points[0]).collect();
    let (_, pivots) = orthonormal_basis(&diffs, eps);
    let mut idx = vec![0];
    idx.extend(pivots.into_iter().map(|i| i + 1));
    idx
}

/// An affine subspace given by a base point and an orthonormal direction basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Flat {
    pub base: Point,
    pub basis: Vec<Point>,
}

impl Flat {
    /// Affine hull of a nonempty point list.
    pub fn through(points: &[Point], eps: f64) -> Flat {
        let base = points[0].clone();
        let diffs: Vec<Point> = points[1..].iter().map(|p| p - &base).collect();
        let (basis, _) = orthonormal_basis(&diffs, eps);
        Flat { base, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    /// Orthonormal basis of the orthogonal complement of the direction space.
    pub fn normal_basis(&self) -> Vec<Point> {
        let d = self.ambient_dim();
        let residuals: Vec<Point> = (0..d)
            .map(|i| {
                self.basis.iter().fold(Point::unit(d, i), |v, b| {
                    let c = v.dot(b);
                    v.add_scaled(-c, b)
                })
            })
            .collect();
        // the residuals span exactly the complement; pivoting picks the best-conditioned ones
        let (mut out, _) = orthonormal_basis(&residuals, 1e-12);
        out.truncate(d - self.dim());
        out
    }

    /// Coordinates of `p - base` in the flat's basis.
    pub fn local_coords(&self, p: &Point) -> Vec<f64> {
        let v = p - &self.base;
        self.basis.iter().map(|b| v.dot(b)).collect()
    }

    pub fn from_local(&self, coords: &[f64]) -> Point {
        self.basis
            .iter()
            .zip(coords)
            .fold(self.base.clone(), |acc, (b, &c)| acc.add_scaled(c, b))
    }
}

/// Orthogonal projection of `p` onto `flat`.
pub fn project_to_flat(p: &Point, flat: &Flat) -> Point {
    flat.from_local(&flat.local_coords(p))
}

/// A closed Euclidean ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &Point, slack: f64) -> bool {
        self.center.dist(p) <= self.radius + slack
    }
}

/// Center and radius of the sphere through `points` whose center lies in
/// their affine hull.
pub fn circumcenter(points: &[Point], eps: f64) -> Result<(Point, f64)> {
    let Some(p0) = points.first() else {
        return Err(Error::EmptyInput);
    };
    let d = p0.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.dim(),
        });
    }
    if points.len() == 1 {
        return Ok((p0.clone(), 0.0));
    }
    let diffs: Vec<Point> = points[1..].iter().map(|p| p - p0).collect();
    let (basis, _) = orthonormal_basis(&diffs, eps);
    let k = diffs.len();
    if basis.len() < k {
        return Err(Error::AffinelyDependent {
            rank: basis.len(),
            expected: k,
        });
    }
    // <c - p0, v_j> = |v_j|^2 / 2 with c - p0 = Q y
    let a = DMatrix::from_fn(k, k, |j, i| diffs[j].dot(&basis[i]));
    let rhs = DVector::from_iterator(k, diffs.iter().map(|v| 0.5 * v.norm_sq()));
    let y = a
        .col_piv_qr()
        .solve(&rhs)
        .ok_or(Error::AffinelyDependent { rank: k - 1, expected: k })?;
    let center = basis
        .iter()
        .zip(y.iter())
        .fold(p0.clone(), |acc, (q, &c)| acc.add_scaled(c, q));
    let radius = points
        .iter()
        .map(|p| center.dist(p))
        .fold(0.0, f64::max);
    Ok((center, radius))
}

/// Smallest ball with every point of `boundary` on its sphere and center in
/// their affine hull. Affinely dependent boundary sets (numerical leftovers)
/// fall back to a maximal independent subset.
fn ball_on_boundary(boundary: &[Point], eps: f64) -> Option<Ball> {
    if boundary.is_empty() {
        return None;
    }
    let (center, radius) = match circumcenter(boundary, eps) {
        Ok(cr) => cr,
        Err(_) => {
            let idx = independent_subset(boundary, eps);
            let sub: Vec<Point> = idx.iter().map(|&i| boundary[i].clone()).collect();
            let (c, _) = circumcenter(&sub, eps).ok()?;
            let r = boundary.iter().map(|p| c.dist(p)).fold(0.0, f64::max);
            (c, r)
        }
    };
    Some(Ball { center, radius })
}

fn welzl(points: &[Point], n: usize, boundary: &mut Vec<Point>, dim: usize, eps: f64) -> Option<Ball> {
    let mut ball = ball_on_boundary(boundary, eps);
    if boundary.len() == dim + 1 {
        return ball;
    }
    for i in 0..n {
        let inside = ball.as_ref().is_some_and(|b| b.contains(&points[i], eps));
        if !inside {
            boundary.push(points[i].clone());
            ball = welzl(points, i, boundary, dim, eps);
            boundary.pop();
        }
    }
    ball
}

/// Minimum enclosing ball (Welzl's recursion over support sets).
pub fn min_enclosing_ball(points: &[Point], tol: Tolerance) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = points[0].dim();
    let eps = tol.scaled_to(points).eps();
    let mut boundary = Vec::with_capacity(dim + 1);
    welzl(points, points.len(), &mut boundary, dim, eps).ok_or(Error::EmptyInput)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec())
    }

    #[test]
    fn circumcenter_of_segment_is_midpoint() {
        let (c, r) = circumcenter(&[p(&[0.0, 0.0]), p(&[2.0, 0.0])], 1e-12).unwrap();
        assert_relative_eq!(c[0], 1.0);
        assert_relative_eq!(c[1], 0.0);
        assert_relative_eq!(r, 1.0);
    }

    #[test]
    fn circumcenter_of_equilateral_triangle() {
        // hand-solved 2x2 system: center (1, 1/sqrt(3)), radius 2/sqrt(3)
        let pts = [p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[1.0, 3f64.sqrt()])];
        let (c, r) = circumcenter(&pts, 1e-12).unwrap();
        assert_relative_eq!(c[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(c[1], 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(r, 1.1547005383792515, epsilon = 1e-12);
    }

    #[test]
    fn circumcenter_of_right_triangle() {
        let pts = [p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])];
        let (c, r) = circumcenter(&pts, 1e-12).unwrap();
        assert_relative_eq!(c[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(c[1], 0.5, epsilon = 1e-12);
        assert_relative_eq!(r, 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn circumcenter_lies_in_affine_hull() {
        let pts = [p(&[0.0, 0.0, 1.0]), p(&[2.0, 0.0, 1.0]), p(&[0.0, 2.0, 1.0])];
        let (c, r) = circumcenter(&pts, 1e-12).unwrap();
        assert_relative_eq!(c[2], 1.0, epsilon = 1e-12);
        assert_relative_eq!(r, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn circumcenter_rejects_collinear() {
        let pts = [p(&[0.0, 0.0]), p(&[1.0, 1.0]), p(&[2.0, 2.0])];
        assert!(matches!(
            circumcenter(&pts, 1e-9),
            Err(Error::AffinelyDependent { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn meb_examples() {
        let tol = Tolerance::default();
        let b = min_enclosing_ball(&[p(&[0.0, 0.0]), p(&[2.0, 0.0])], tol).unwrap();
        assert_relative_eq!(b.center[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(b.radius, 1.0, epsilon = 1e-12);

        let b = min_enclosing_ball(&[p(&[0.0, 0.0]), p(&[4.0, 0.0]), p(&[1.0, 1.0])], tol).unwrap();
        assert_relative_eq!(b.center[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(b.center[1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(b.radius, 2.0, epsilon = 1e-12);

        let b = min_enclosing_ball(&[p(&[3.0, -1.0, 2.0])], tol).unwrap();
        assert_eq!(b.center, p(&[3.0, -1.0, 2.0]));
        assert_eq!(b.radius, 0.0);

        assert_eq!(min_enclosing_ball(&[], tol), Err(Error::EmptyInput));
    }

    #[test]
    fn projection_examples() {
        let plane = Flat::through(&[p(&[0.0, 0.0, 0.0]), p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0])], 1e-12);
        assert_eq!(project_to_flat(&p(&[0.0, 0.0, 1.0]), &plane), p(&[0.0, 0.0, 0.0]));
        let q = p(&[0.3, -2.0, 0.0]);
        let r = project_to_flat(&q, &plane);
        assert_relative_eq!(r.dist(&q), 0.0, epsilon = 1e-15);

        let axis = Flat::through(&[p(&[0.0, 0.0]), p(&[5.0, 0.0])], 1e-12);
        assert_eq!(project_to_flat(&p(&[1.0, 1.0]), &axis), p(&[1.0, 0.0]));
    }

    #[test]
    fn normal_basis_completes_the_space() {
        let line = Flat::through(&[p(&[0.0, 0.0, 0.0]), p(&[1.0, 1.0, 1.0])], 1e-12);
        let normals = line.normal_basis();
        assert_eq!(normals.len(), 2);
        for n in &normals {
            assert_relative_eq!(n.norm(), 1.0, epsilon = 1e-12);
            assert!(n.dot(&line.basis[0]).abs() < 1e-12);
        }
        assert!(normals[0].dot(&normals[1]).abs() < 1e-12);
    }

    #[test]
    fn affine_rank_counts_dimension() {
        let eps = 1e-9;
        assert_eq!(affine_rank(&[p(&[1.0, 2.0])], eps), 0);
        assert_eq!(affine_rank(&[p(&[0.0, 0.0]), p(&[1.0, 1.0]), p(&[2.0, 2.0])], eps), 1);
        let square = [p(&[0.0, 0.0, 0.0]), p(&[1.0, 0.0, 0.0]), p(&[1.0, 1.0, 0.0]), p(&[0.0, 1.0, 0.0])];
        assert_eq!(affine_rank(&square, eps), 2);
    }

    #[test]
    fn tolerance_scales_with_diameter() {
        let t = Tolerance::for_points(1e-9, &[p(&[0.0, 0.0]), p(&[3.0, 4.0])]);
        assert_relative_eq!(t.eps(), 5e-9);
    }
}
