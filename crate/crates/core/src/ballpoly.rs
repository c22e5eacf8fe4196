//! Basic r-ball polyhedra: admissibility checks, the face lattice obtained by
//! duality with the boundary farthest-point Delaunay complex, vertex
//! realization and inner dihedral angles.

use std::f64::consts::PI;

use itertools::Itertools;

use crate::bounds::alternating_sum;
use crate::error::{Error, Result};
use crate::fvoronoi::{boundary_delaunay, farthest_delaunay, voronoi_vertices, FarthestDelaunayComplex};
use crate::geom::{bbox_diameter, circumcenter, independent_subset, min_enclosing_ball, Flat, Point, Tolerance};
use crate::hull::{convex_hull, is_subset, PolytopeComplex};

/// Outcome of an open-condition test certified with margin `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// Within tolerance of the boundary of the condition.
    Indeterminate,
}

impl Verdict {
    /// Classify a signed margin: positive beyond `eps` holds, negative beyond `eps` fails.
    pub fn from_margin(margin: f64, eps: f64) -> Verdict {
        if margin > eps {
            Verdict::Holds
        } else if margin < -eps {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
            _ => Verdict::Holds,
        }
    }
}

/// The labeled centers, their convex hull and the generating radius.
#[derive(Clone, Debug)]
pub struct CenterPolytope {
    points: Vec<Point>,
    hull: PolytopeComplex,
    r: f64,
    tol: Tolerance,
}

impl CenterPolytope {
    /// Builds the hull of `points`. Whether the points are hull vertices and
    /// whether `r` is admissible are checked by `validate_basic`, not here.
    pub fn new(points: Vec<Point>, r: f64, tol: Tolerance) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameters(format!("radius {r} must be positive")));
        }
        let d = points.first().ok_or(Error::EmptyInput)?.dim();
        if d < 2 {
            return Err(Error::InvalidParameters(format!("dimension {d} < 2")));
        }
        let tol = tol.scaled_to(&points);
        let hull = convex_hull(&points, d, tol)?;
        Ok(CenterPolytope { points, hull, r, tol })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn hull(&self) -> &PolytopeComplex {
        &self.hull
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Tolerance scaled to this point set.
    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn diameter(&self) -> f64 {
        bbox_diameter(&self.points)
    }

    /// Same centers with another generating radius.
    pub fn with_radius(&self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameters(format!("radius {r} must be positive")));
        }
        Ok(CenterPolytope { r, ..self.clone() })
    }

    pub fn delaunay(&self) -> Result<FarthestDelaunayComplex> {
        farthest_delaunay(&self.points, &self.hull, self.tol)
    }
}

/// Precomputed sphere intersections `∩ S(t, r)` over subsets T of the centers.
struct SphereFamily {
    members: Vec<usize>,
    /// circumcenter of T
    center: Point,
    rho: f64,
    /// orthonormal directions of aff(T)
    directions: Vec<Point>,
    /// unit normal of aff(T) when |T| = d; the intersection sphere is then two points
    axis: Option<Point>,
}

/// The intersection of equal-radius balls around a fixed center set, queried
/// for farthest points at varying radius.
pub struct BallIntersection {
    centers: Vec<Point>,
    families: Vec<SphereFamily>,
    meb_radius: f64,
    eps: f64,
}

impl BallIntersection {
    pub fn new(centers: &[Point], tol: Tolerance) -> Result<Self> {
        let meb = min_enclosing_ball(centers, tol)?;
        let tol = tol.scaled_to(centers);
        let eps = tol.eps();
        let d = centers[0].dim();
        let mut families = Vec::new();
        for size in 1..=d.min(centers.len()) {
            for members in (0..centers.len()).combinations(size) {
                let pts: Vec<Point> = members.iter().map(|&i| centers[i].clone()).collect();
                let Ok((center, rho)) = circumcenter(&pts, eps) else {
                    continue;
                };
                let flat = Flat::through(&pts, eps);
                let axis = (flat.dim() + 1 == d).then(|| flat.normal_basis().remove(0));
                families.push(SphereFamily {
                    members,
                    center,
                    rho,
                    directions: flat.basis,
                    axis,
                });
            }
        }
        Ok(BallIntersection {
            centers: centers.to_vec(),
            families,
            meb_radius: meb.radius,
            eps,
        })
    }

    pub fn meb_radius(&self) -> f64 {
        self.meb_radius
    }

    /// Point of `∩ B[c, r]` farthest from `q`, and its distance from `q`.
    ///
    /// Every maximizer is a critical point of the distance on some intersection
    /// sphere of at most d generating spheres: the farthest point from `q` on a
    /// sphere of positive dimension, or either point of a 0-sphere. The best
    /// feasible candidate wins.
    pub fn farthest_from(&self, q: &Point, r: f64) -> Result<(Point, f64)> {
        if self.meb_radius > r + self.eps {
            return Err(Error::EmptyIntersection);
        }
        match self.scan(q, q, r, self.eps)? {
            Scan::Resolved(x) => {
                let dist = q.dist(&x);
                Ok((x, dist))
            }
            Scan::Unresolved => {
                // q lies in aff(T) of an unresolved family; nudge it off once
                let d = q.dim();
                let dir = Point::new((1..=d).map(|k| (k as f64).sqrt()).collect())
                    .normalized()
                    .expect("nonzero direction");
                let nudged = q.add_scaled(4.0 * self.eps, &dir);
                match self.scan(&nudged, q, r, 0.0)? {
                    Scan::Resolved(x) => {
                        let dist = q.dist(&x);
                        Ok((x, dist))
                    }
                    Scan::Unresolved => Err(Error::DegenerateDirection),
                }
            }
        }
    }

    fn scan(&self, q: &Point, original: &Point, r: f64, degenerate_below: f64) -> Result<Scan> {
        let slack = self.eps;
        let mut best: Option<(Point, f64)> = None;
        let mut worst_unresolved = f64::NEG_INFINITY;
        for fam in &self.families {
            if fam.rho > r + slack {
                continue;
            }
            let s = (r * r - fam.rho * fam.rho).max(0.0).sqrt();
            let candidates = match &fam.axis {
                // a 0-sphere: both points are critical
                Some(axis) => vec![fam.center.add_scaled(s, axis), fam.center.add_scaled(-s, axis)],
                None => {
                    let rel = q - &fam.center;
                    let offset = fam
                        .directions
                        .iter()
                        .fold(rel.clone(), |v, b| v.add_scaled(-rel.dot(b), b));
                    let len = offset.norm();
                    if len <= degenerate_below || len == 0.0 {
                        // the whole sphere is equidistant from q
                        worst_unresolved = worst_unresolved.max((rel.norm_sq() + s * s).sqrt());
                        continue;
                    }
                    vec![fam.center.add_scaled(-s / len, &offset)]
                }
            };
            for x in candidates {
                let feasible = self
                    .centers
                    .iter()
                    .enumerate()
                    .all(|(i, c)| fam.members.contains(&i) || c.dist(&x) <= r + slack);
                if !feasible {
                    continue;
                }
                let dist = original.dist(&x);
                if best.as_ref().is_none_or(|(_, b)| dist > *b) {
                    best = Some((x, dist));
                }
            }
        }
        match best {
            Some((x, dist)) if worst_unresolved <= dist + slack => Ok(Scan::Resolved(x)),
            _ if worst_unresolved > f64::NEG_INFINITY => Ok(Scan::Unresolved),
            Some((x, _)) => Ok(Scan::Resolved(x)),
            None => Err(Error::EmptyIntersection),
        }
    }
}

enum Scan {
    Resolved(Point),
    Unresolved,
}

/// Point of `∩ B[c, r]` farthest from `q` and its distance.
pub fn farthest_point_in_ball_intersection(
    centers: &[Point],
    r: f64,
    q: &Point,
    tol: Tolerance,
) -> Result<(Point, f64)> {
    BallIntersection::new(centers, tol)?.farthest_from(q, r)
}

/// Result of the r-convex position test.
#[derive(Clone, Debug, PartialEq)]
pub struct RConvexity {
    pub verdict: Verdict,
    /// Index of the center with the smallest margin when the test does not hold.
    pub witness: Option<usize>,
    pub meb_radius: f64,
    /// Per center: farthest distance from `c_i` over `∩_{j≠i} B[c_j, r]`, minus r.
    pub margins: Vec<f64>,
}

/// Reusable r-convexity test for a fixed center set and varying radius.
pub struct RConvexityOracle {
    without: Vec<BallIntersection>,
    points: Vec<Point>,
    meb_radius: f64,
    eps: f64,
}

impl RConvexityOracle {
    pub fn new(points: &[Point], tol: Tolerance) -> Result<Self> {
        let tol = tol.scaled_to(points);
        let meb_radius = min_enclosing_ball(points, tol)?.radius;
        let without = (0..points.len())
            .map(|i| {
                let others: Vec<Point> = points
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                BallIntersection::new(&others, tol)
            })
            .collect::<Result<_>>()?;
        Ok(RConvexityOracle {
            without,
            points: points.to_vec(),
            meb_radius,
            eps: tol.eps(),
        })
    }

    pub fn evaluate(&self, r: f64) -> Result<RConvexity> {
        let contained = Verdict::from_margin(r - self.meb_radius, self.eps);
        if contained == Verdict::Fails {
            return Ok(RConvexity {
                verdict: Verdict::Fails,
                witness: None,
                meb_radius: self.meb_radius,
                margins: Vec::new(),
            });
        }
        let mut margins = Vec::with_capacity(self.points.len());
        for (i, inter) in self.without.iter().enumerate() {
            let (_, dist) = inter.farthest_from(&self.points[i], r)?;
            margins.push(dist - r);
        }
        let verdict = margins
            .iter()
            .fold(contained, |acc, &m| acc.and(Verdict::from_margin(m, self.eps)));
        let witness = (!verdict.holds())
            .then(|| margins.iter().position_min_by(|a, b| a.total_cmp(b)))
            .flatten();
        Ok(RConvexity {
            verdict,
            witness,
            meb_radius: self.meb_radius,
            margins,
        })
    }
}

/// Whether the centers lie in r-convex position: they fit in an open r-ball
/// and no center lies in the r-convex hull of the others.
pub fn is_r_convex_position(cp: &CenterPolytope) -> Result<RConvexity> {
    RConvexityOracle::new(cp.points(), cp.tolerance())?.evaluate(cp.r())
}

/// Flags of the admissibility conditions for a basic r-ball polyhedron.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub hull_vertices_ok: bool,
    pub r_convex_position: Verdict,
    pub r_convex_witness: Option<usize>,
    pub voronoi_vertices_interior: Verdict,
    /// Largest circumradius over the farthest-point Voronoi vertices.
    pub worst_circumradius: Option<f64>,
    pub is_basic: bool,
}

impl ValidationReport {
    pub fn r_convex_position_ok(&self) -> bool {
        self.r_convex_position.holds()
    }

    pub fn voronoi_vertices_interior_ok(&self) -> bool {
        self.voronoi_vertices_interior.holds()
    }
}

/// Check the admissibility conditions; failures are reported, not raised.
pub fn validate_basic(cp: &CenterPolytope) -> ValidationReport {
    let hull_vertices_ok = cp.hull().non_vertices().is_empty();
    let eps = cp.tolerance().eps();
    let (r_convex_position, r_convex_witness) = match is_r_convex_position(cp) {
        Ok(rc) => (rc.verdict, rc.witness),
        Err(_) => (Verdict::Fails, None),
    };
    let worst_circumradius = if hull_vertices_ok {
        cp.delaunay().ok().map(|dc| {
            voronoi_vertices(&dc)
                .iter()
                .map(|v| v.circumradius)
                .fold(0.0, f64::max)
        })
    } else {
        None
    };
    let voronoi_vertices_interior = match worst_circumradius {
        Some(w) => Verdict::from_margin(cp.r() - w, eps),
        None => Verdict::Fails,
    };
    ValidationReport {
        hull_vertices_ok,
        r_convex_position,
        r_convex_witness,
        voronoi_vertices_interior,
        worst_circumradius,
        is_basic: hull_vertices_ok && r_convex_position.holds() && voronoi_vertices_interior.holds(),
    }
}

/// Which admissibility condition determines the minimal radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BindingConstraint {
    VoronoiVertices,
    RConvexPosition,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinBasicRadius {
    pub r_star: f64,
    pub binding: BindingConstraint,
    pub worst_circumradius: f64,
}

const BISECTION_STEPS: usize = 60;
const MAX_BRACKET_WIDENINGS: usize = 20;

/// Smallest admissible generating radius (up to bisection accuracy): the
/// larger of the worst Voronoi circumradius and the r-convexity threshold.
pub fn min_basic_radius(points: &[Point], tol: Tolerance) -> Result<MinBasicRadius> {
    let d = points.first().ok_or(Error::EmptyInput)?.dim();
    if points.len() < d + 1 {
        return Err(Error::TooFewPoints {
            needed: d + 1,
            got: points.len(),
        });
    }
    let cp = CenterPolytope::new(points.to_vec(), 1.0, tol)?;
    if !cp.hull().non_vertices().is_empty() {
        return Err(Error::InvalidParameters(format!(
            "points {:?} are not hull vertices",
            cp.hull().non_vertices()
        )));
    }
    let dc = cp.delaunay()?;
    let worst = voronoi_vertices(&dc)
        .iter()
        .map(|v| v.circumradius)
        .fold(0.0, f64::max);
    let oracle = RConvexityOracle::new(points, cp.tolerance())?;
    let holds = |r: f64| -> Result<bool> { Ok(oracle.evaluate(r)?.verdict.holds()) };

    let mut lo = worst;
    let mut hi = 4.0 * cp.diameter();
    if holds(lo)? {
        return Ok(MinBasicRadius {
            r_star: worst,
            binding: BindingConstraint::VoronoiVertices,
            worst_circumradius: worst,
        });
    }
    // nearly flat configurations need radii far beyond the initial bracket
    let mut widenings = 0;
    while !holds(hi)? {
        if widenings == MAX_BRACKET_WIDENINGS {
            return Err(Error::NonMonotoneBracket { holds: f64::NAN, fails: hi });
        }
        lo = hi;
        hi *= 4.0;
        widenings += 1;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // spot-check monotonicity above the threshold
    for k in 1..=4 {
        let r = hi * (1.0 + 0.05 * k as f64);
        if !holds(r)? {
            return Err(Error::NonMonotoneBracket { holds: hi, fails: r });
        }
    }
    Ok(MinBasicRadius {
        r_star: hi,
        binding: BindingConstraint::RConvexPosition,
        worst_circumradius: worst,
    })
}

/// Graded face lattice of a basic r-ball polyhedron.
///
/// A face of dimension k is stored by its defining center set S: the centers
/// whose spheres contain it. Grade k faces correspond to boundary Delaunay
/// cells of dimension d-1-k, and inclusion of faces is reverse inclusion of
/// their center sets.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPolyFaceLattice {
    dim: usize,
    n: usize,
    faces: Vec<Vec<Vec<usize>>>,
    up: Vec<Vec<Vec<usize>>>,
}

impl BallPolyFaceLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of facets (= number of centers).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Center sets of the k-dimensional faces.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        &self.faces[k]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Indices of the (k+1)-faces containing face `i` of dimension `k`.
    pub fn covers(&self, k: usize, i: usize) -> &[usize] {
        &self.up[k][i]
    }

    /// Whether face (j, a) is contained in face (k, b).
    pub fn contains(&self, j: usize, a: usize, k: usize, b: usize) -> bool {
        j <= k && is_subset(&self.faces[k][b], &self.faces[j][a])
    }

    /// The intersection of two closed faces: the largest face below both, or
    /// `None` when they are disjoint.
    pub fn meet(&self, a: (usize, usize), b: (usize, usize)) -> Option<(usize, usize)> {
        let sa = &self.faces[a.0][a.1];
        let sb = &self.faces[b.0][b.1];
        let union: Vec<usize> = sa.iter().chain(sb).copied().sorted().dedup().collect();
        (0..=a.0.min(b.0)).rev().find_map(|k| {
            self.faces[k]
                .iter()
                .position(|s| is_subset(&union, s))
                .map(|i| (k, i))
        })
    }
}

/// Face lattice of P_{C,r} by order duality with the boundary Delaunay complex.
pub fn build_face_lattice(cp: &CenterPolytope) -> Result<BallPolyFaceLattice> {
    if !validate_basic(cp).is_basic {
        return Err(Error::NotBasic);
    }
    let dc = cp.delaunay()?;
    Ok(lattice_from_complex(&dc, cp))
}

fn lattice_from_complex(dc: &FarthestDelaunayComplex, cp: &CenterPolytope) -> BallPolyFaceLattice {
    let d = cp.dim();
    let boundary = boundary_delaunay(dc, cp.hull());
    let faces: Vec<Vec<Vec<usize>>> = (0..d).map(|k| boundary.cells(d - 1 - k).to_vec()).collect();
    let up = (0..d)
        .map(|k| {
            faces[k]
                .iter()
                .map(|s| match faces.get(k + 1) {
                    Some(next) => next
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| is_subset(t, s))
                        .map(|(j, _)| j)
                        .collect(),
                    None => Vec::new(),
                })
                .collect()
        })
        .collect();
    BallPolyFaceLattice {
        dim: d,
        n: cp.n(),
        faces,
        up,
    }
}

/// A validated basic r-ball polyhedron with its face lattice.
#[derive(Clone, Debug)]
pub struct BasicBallPolyhedron {
    pub centers: CenterPolytope,
    pub lattice: BallPolyFaceLattice,
    pub report: ValidationReport,
}

impl BasicBallPolyhedron {
    pub fn new(centers: CenterPolytope) -> Result<Self> {
        let report = validate_basic(&centers);
        if !report.is_basic {
            return Err(Error::NotBasic);
        }
        let dc = centers.delaunay()?;
        let lattice = lattice_from_complex(&dc, &centers);
        Ok(BasicBallPolyhedron {
            centers,
            lattice,
            report,
        })
    }

    pub fn dim(&self) -> usize {
        self.centers.dim()
    }

    pub fn r(&self) -> f64 {
        self.centers.r()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.lattice.f_vector()
    }

    pub fn dihedral_angles(&self) -> Result<Vec<DihedralAngle>> {
        dihedral_angles(&self.centers, &self.lattice)
    }

    pub fn vertices(&self) -> Result<Vec<Point>> {
        realize_vertices(&self.centers, &self.lattice)
    }
}

/// The vertex of P on the Voronoi face of a (d-1)-dimensional boundary cell.
///
/// `cell` spans a hyperplane with outward unit normal `outward`; the vertex is
/// the circumcenter pushed inward until it sits at distance r from the cell.
pub fn realize_vertex(cell: &[Point], outward: &Point, r: f64, tol: Tolerance) -> Result<Point> {
    let eps = tol.scaled_to(cell).eps();
    let basis: Vec<Point> = independent_subset(cell, eps)
        .into_iter()
        .map(|i| cell[i].clone())
        .collect();
    let (center, _) = circumcenter(&basis, eps)?;
    let rho = cell.iter().map(|p| center.dist(p)).fold(0.0, f64::max);
    if rho >= r {
        return Err(Error::RadiusTooSmall { rho, r });
    }
    Ok(center.add_scaled(-(r * r - rho * rho).sqrt(), outward))
}

/// Coordinates of every vertex of P, aligned with `lattice.faces(0)`.
pub fn realize_vertices(cp: &CenterPolytope, lattice: &BallPolyFaceLattice) -> Result<Vec<Point>> {
    lattice
        .faces(0)
        .iter()
        .map(|s| {
            let facets = cp.hull().supporting_facets_of(s)?;
            let facet = *facets.first().ok_or(Error::NotOnBoundary)?;
            let pts: Vec<Point> = s.iter().map(|&i| cp.points()[i].clone()).collect();
            realize_vertex(&pts, &cp.hull().facet_supports()[facet].normal, cp.r(), cp.tolerance())
        })
        .collect()
}

/// Inner dihedral angle along the (d-2)-face shared by two generating spheres.
#[derive(Clone, Debug, PartialEq)]
pub struct DihedralAngle {
    pub pair: (usize, usize),
    pub theta: f64,
}

const PAIR_REL_TOL: f64 = 1e-9;

/// Wedge angle `pi - arccos(1 - w^2 / (2 r^2))` of two radius-r balls whose
/// centers are `w` apart.
pub fn dihedral_angle(ci: &Point, cj: &Point, r: f64) -> Result<f64> {
    let w = ci.dist(cj);
    if w <= PAIR_REL_TOL * r || w >= 2.0 * r * (1.0 - PAIR_REL_TOL) {
        return Err(Error::DegeneratePair { w, r });
    }
    Ok(PI - (1.0 - w * w / (2.0 * r * r)).clamp(-1.0, 1.0).acos())
}

/// Center distance producing wedge angle `theta` at radius r.
pub fn edge_length_from_angle(theta: f64, r: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::AngleOutOfRange(theta));
    }
    Ok(2.0 * r * (theta / 2.0).cos())
}

/// Dihedral angles along all (d-2)-faces.
pub fn dihedral_angles(cp: &CenterPolytope, lattice: &BallPolyFaceLattice) -> Result<Vec<DihedralAngle>> {
    let d = lattice.dim();
    lattice
        .faces(d - 2)
        .iter()
        .map(|s| {
            let (i, j) = (s[0], s[1]);
            let theta = dihedral_angle(&cp.points()[i], &cp.points()[j], cp.r())?;
            Ok(DihedralAngle { pair: (i, j), theta })
        })
        .collect()
}

/// Euler-Poincare relation `sum (-1)^i f_i = 1 + (-1)^(d+1)`.
pub fn euler_check(f: &[usize], d: usize) -> bool {
    f.len() == d && alternating_sum(f) == euler_target(d)
}

pub fn euler_target(d: usize) -> i64 {
    if d % 2 == 1 {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{regular_simplex, unit_cube};
    use approx::assert_relative_eq;

    fn cube(r: f64) -> CenterPolytope {
        CenterPolytope::new(unit_cube(3), r, Tolerance::default()).unwrap()
    }

    fn pts(raw: &[&[f64]]) -> Vec<Point> {
        raw.iter().map(|c| Point::new(c.to_vec())).collect()
    }

    /// Dense grid search over the lens ∩ B[c, r] in the plane.
    fn grid_farthest(centers: &[Point], r: f64, q: &Point, steps: usize) -> f64 {
        let (lo, hi) = (-3.0, 3.0);
        let h = (hi - lo) / steps as f64;
        let mut best = f64::NEG_INFINITY;
        for a in 0..=steps {
            for b in 0..=steps {
                let x = Point::new(vec![lo + a as f64 * h, lo + b as f64 * h]);
                if centers.iter().all(|c| c.dist(&x) <= r) {
                    best = best.max(x.dist(q));
                }
            }
        }
        best
    }

    #[test]
    fn single_ball_farthest_point() {
        let c = Point::new(vec![1.0, 2.0, 0.0]);
        let q = Point::new(vec![0.0, 0.0, 0.0]);
        let (x, dist) = farthest_point_in_ball_intersection(std::slice::from_ref(&c), 0.5, &q, Tolerance::default()).unwrap();
        let expected = c.add_scaled(0.5 / c.norm(), &c);
        assert!(x.dist(&expected) < 1e-12);
        assert_relative_eq!(dist, c.norm() + 0.5, epsilon = 1e-12);
    }

    #[test]
    fn lens_farthest_point_matches_grid() {
        let centers = pts(&[&[-1.0, 0.0], &[1.0, 0.0]]);
        let q = Point::new(vec![0.0, 0.0]);
        let (x, dist) = farthest_point_in_ball_intersection(&centers, 2.0, &q, Tolerance::default()).unwrap();
        assert_relative_eq!(dist, 3f64.sqrt(), epsilon = 1e-7);
        assert!(x[0].abs() < 1e-7 && (x[1].abs() - 3f64.sqrt()).abs() < 1e-7);
        let grid = grid_farthest(&centers, 2.0, &q, 1200);
        assert!((grid - dist).abs() < 1e-2);
    }

    #[test]
    fn off_axis_query_matches_grid() {
        let centers = pts(&[&[-1.0, 0.0], &[1.0, 0.2], &[0.1, 1.0]]);
        let q = Point::new(vec![0.3, -0.4]);
        let (_, dist) = farthest_point_in_ball_intersection(&centers, 1.6, &q, Tolerance::default()).unwrap();
        let grid = grid_farthest(&centers, 1.6, &q, 1500);
        assert!((grid - dist).abs() < 1e-2, "grid {grid} closed form {dist}");
        assert!(grid <= dist + 1e-12);
    }

    #[test]
    fn query_inside_small_hull_is_contained() {
        let centers = pts(&[&[0.0, 0.0], &[0.1, 0.0], &[0.0, 0.1]]);
        let q = Point::new(vec![0.03, 0.03]);
        let (_, dist) = farthest_point_in_ball_intersection(&centers, 1.0, &q, Tolerance::default()).unwrap();
        assert!(dist < 1.0);
    }

    #[test]
    fn empty_intersection_is_an_error() {
        let centers = pts(&[&[-3.0, 0.0], &[3.0, 0.0]]);
        let q = Point::new(vec![0.0, 0.0]);
        assert_eq!(
            farthest_point_in_ball_intersection(&centers, 1.0, &q, Tolerance::default()).unwrap_err(),
            Error::EmptyIntersection
        );
    }

    #[test]
    fn r_convex_examples() {
        let tri = CenterPolytope::new(regular_simplex(2, 1.0), 10.0, Tolerance::default()).unwrap();
        assert_eq!(is_r_convex_position(&tri).unwrap().verdict, Verdict::Holds);
        assert_eq!(is_r_convex_position(&cube(1.0)).unwrap().verdict, Verdict::Holds);
        // cube does not fit in an open ball of radius 0.8
        let rc = is_r_convex_position(&cube(0.8)).unwrap();
        assert_eq!(rc.verdict, Verdict::Fails);

        let mut dup = unit_cube(3);
        dup.push(dup[3].clone());
        assert_eq!(
            CenterPolytope::new(dup, 1.0, Tolerance::default()).unwrap_err(),
            Error::DuplicatePoints(3, 8)
        );
    }

    #[test]
    fn validation_examples() {
        let ok = validate_basic(&cube(1.0));
        assert!(ok.is_basic);
        assert_relative_eq!(ok.worst_circumradius.unwrap(), 3f64.sqrt() / 2.0, epsilon = 1e-12);

        let small = validate_basic(&cube(0.8));
        assert!(!small.is_basic);
        assert_eq!(small.voronoi_vertices_interior, Verdict::Fails);

        let tet = CenterPolytope::new(regular_simplex(3, 1.0), 1.0, Tolerance::default()).unwrap();
        assert!(validate_basic(&tet).is_basic);
    }

    #[test]
    fn radius_at_voronoi_boundary_is_indeterminate() {
        let report = validate_basic(&cube(3f64.sqrt() / 2.0));
        assert_eq!(report.voronoi_vertices_interior, Verdict::Indeterminate);
        assert!(!report.is_basic);
    }

    #[test]
    fn interior_center_fails_hull_check() {
        let mut p = unit_cube(3);
        p.push(Point::new(vec![0.5, 0.5, 0.5]));
        let cp = CenterPolytope::new(p, 1.0, Tolerance::default()).unwrap();
        let report = validate_basic(&cp);
        assert!(!report.hull_vertices_ok);
        assert!(!report.is_basic);
    }

    #[test]
    fn cube_min_radius_is_bound_by_r_convexity() {
        let m = min_basic_radius(&unit_cube(3), Tolerance::default()).unwrap();
        assert_eq!(m.binding, BindingConstraint::RConvexPosition);
        assert!(m.r_star > 3f64.sqrt() / 2.0 && m.r_star < 1.0, "r* = {}", m.r_star);
        let above = cube(m.r_star * (1.0 + 1e-6));
        assert!(validate_basic(&above).is_basic);
        let below = cube(m.r_star * (1.0 - 1e-6));
        assert!(!validate_basic(&below).is_basic);
    }

    #[test]
    fn simplex_min_radius_exceeds_circumradius() {
        let m = min_basic_radius(&regular_simplex(3, 1.0), Tolerance::default()).unwrap();
        assert!(m.r_star >= 6f64.sqrt() / 4.0);
        let cp = CenterPolytope::new(regular_simplex(3, 1.0), m.r_star * (1.0 + 1e-6), Tolerance::default()).unwrap();
        assert!(validate_basic(&cp).is_basic);
    }

    #[test]
    fn min_radius_needs_enough_points() {
        let two = pts(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert!(matches!(
            min_basic_radius(&two, Tolerance::default()),
            Err(Error::TooFewPoints { needed: 4, got: 2 })
        ));
    }

    #[test]
    fn lattice_examples() {
        let tet = CenterPolytope::new(regular_simplex(3, 1.0), 1.0, Tolerance::default()).unwrap();
        assert_eq!(build_face_lattice(&tet).unwrap().f_vector(), vec![4, 6, 4]);
        let l = build_face_lattice(&cube(1.0)).unwrap();
        assert_eq!(l.f_vector(), vec![6, 12, 8]);
        assert!(l.faces(2).iter().all(|s| s.len() == 1));
        assert_eq!(build_face_lattice(&cube(0.8)), Err(Error::NotBasic));
    }

    #[test]
    fn cube_lattice_meets() {
        let l = build_face_lattice(&cube(1.0)).unwrap();
        // two facets sharing an edge meet in that edge; opposite facets are disjoint
        let f = |i: usize| (2, l.faces(2).iter().position(|s| s == &vec![i]).unwrap());
        let m = l.meet(f(0), f(1)).unwrap();
        assert_eq!(m.0, 1);
        assert_eq!(l.faces(1)[m.1], vec![0, 1]);
        assert_eq!(l.meet(f(0), f(7)), None);
        let v = l.meet(f(0), f(3)).unwrap();
        assert_eq!(v.0, 0);
        assert!(l.contains(v.0, v.1, 2, f(0).1));
    }

    #[test]
    fn cube_vertex_realization() {
        let c = unit_cube(3);
        let bottom: Vec<Point> = [0, 1, 2, 3].iter().map(|&i| c[i].clone()).collect();
        let u = Point::new(vec![0.0, 0.0, -1.0]);
        let p = realize_vertex(&bottom, &u, 1.0, Tolerance::default()).unwrap();
        assert!(p.dist(&Point::new(vec![0.5, 0.5, 0.5f64.sqrt()])) < 1e-12);
        for q in &bottom {
            assert_relative_eq!(p.dist(q), 1.0, epsilon = 1e-12);
        }
        for i in 4..8 {
            let d = p.dist(&c[i]);
            assert!(d < 1.0);
            assert_relative_eq!(d, 0.7653668647301795, epsilon = 1e-9);
        }
    }

    #[test]
    fn planar_vertex_realization() {
        let w = 1.2;
        let r = 2.0;
        let seg = pts(&[&[-w / 2.0, 0.0], &[w / 2.0, 0.0]]);
        let p = realize_vertex(&seg, &Point::new(vec![0.0, -1.0]), r, Tolerance::default()).unwrap();
        assert!(p[0].abs() < 1e-12);
        assert_relative_eq!(p[1], (r * r - w * w / 4.0).sqrt(), epsilon = 1e-12);
        assert!(matches!(
            realize_vertex(&seg, &Point::new(vec![0.0, -1.0]), 0.6, Tolerance::default()),
            Err(Error::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn realized_cube_vertices() {
        let cp = cube(1.0);
        let l = build_face_lattice(&cp).unwrap();
        let verts = realize_vertices(&cp, &l).unwrap();
        assert_eq!(verts.len(), 6);
        for (s, p) in l.faces(0).iter().zip(&verts) {
            for (i, c) in cp.points().iter().enumerate() {
                let d = p.dist(c);
                if s.contains(&i) {
                    assert_relative_eq!(d, 1.0, epsilon = 1e-12);
                } else {
                    assert!(d < 1.0 - 1e-8);
                }
            }
        }
    }

    /// Wedge angle of the supporting half-spaces at a point of the intersection sphere.
    fn tangent_oracle(w: f64, r: f64) -> f64 {
        let ci = Point::new(vec![0.0, 0.0, 0.0]);
        let cj = Point::new(vec![w, 0.0, 0.0]);
        let h = (r * r - w * w / 4.0).sqrt();
        let p = Point::new(vec![w / 2.0, h * 0.6, h * 0.8]);
        let ni = &(&p - &ci) * (1.0 / r);
        let nj = &(&p - &cj) * (1.0 / r);
        PI - ni.dot(&nj).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn dihedral_examples() {
        let o = Point::new(vec![0.0, 0.0]);
        let near = dihedral_angle(&o, &Point::new(vec![1e-6, 0.0]), 1.0).unwrap();
        assert!((PI - near) < 2e-6);
        let right = dihedral_angle(&o, &Point::new(vec![2f64.sqrt(), 0.0]), 1.0).unwrap();
        assert_relative_eq!(right, PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(tangent_oracle(2f64.sqrt(), 1.0), PI / 2.0, epsilon = 1e-12);
        let unit = dihedral_angle(&o, &Point::new(vec![1.0, 0.0]), 1.0).unwrap();
        assert_relative_eq!(unit, 2.0 * PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(tangent_oracle(1.0, 1.0), 2.0 * PI / 3.0, epsilon = 1e-12);
        assert!(matches!(dihedral_angle(&o, &o, 1.0), Err(Error::DegeneratePair { .. })));
        assert!(matches!(
            dihedral_angle(&o, &Point::new(vec![2.0, 0.0]), 1.0),
            Err(Error::DegeneratePair { .. })
        ));
    }

    #[test]
    fn edge_length_examples() {
        assert!(edge_length_from_angle(PI, 1.0).unwrap().abs() < 1e-15);
        assert_relative_eq!(edge_length_from_angle(PI / 2.0, 1.0).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
        let o = Point::new(vec![0.0, 0.0]);
        let theta = dihedral_angle(&o, &Point::new(vec![0.3, 0.0]), 1.0).unwrap();
        assert_relative_eq!(edge_length_from_angle(theta, 1.0).unwrap(), 0.3, max_relative = 1e-12);
        assert!(matches!(edge_length_from_angle(-0.1, 1.0), Err(Error::AngleOutOfRange(_))));
    }

    #[test]
    fn dihedral_is_monotone_decreasing() {
        let o = Point::new(vec![0.0, 0.0]);
        let mut prev = PI;
        for k in 1..40 {
            let w = 0.05 * k as f64;
            let t = dihedral_angle(&o, &Point::new(vec![w, 0.0]), 1.0).unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn cube_dihedrals_are_two_thirds_pi() {
        let cp = cube(1.0);
        let l = build_face_lattice(&cp).unwrap();
        let angles = dihedral_angles(&cp, &l).unwrap();
        assert_eq!(angles.len(), 12);
        for a in angles {
            assert_relative_eq!(a.theta, 2.0 * PI / 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn euler_examples() {
        assert!(euler_check(&[4, 6, 4], 3));
        assert!(euler_check(&[6, 12, 8], 3));
        assert!(euler_check(&[14, 28, 21, 7], 4));
        assert!(!euler_check(&[6, 12, 7], 3));
        assert!(!euler_check(&[4, 6, 4], 4));
    }
}
