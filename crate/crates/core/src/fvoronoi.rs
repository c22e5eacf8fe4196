//! Farthest-point Delaunay complex via the paraboloid lifting, its boundary
//! subcomplex, farthest-point Voronoi vertices and recession cones.

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geom::{affine_rank, circumcenter, independent_subset, orthonormal_basis, Point, Tolerance};
use crate::hull::{convex_hull, is_subset, PolytopeComplex};

/// Lift `(x_1..x_d)` to `(x_1..x_d, |x|^2)`.
pub fn lift(points: &[Point]) -> Vec<Point> {
    points
        .iter()
        .map(|p| {
            let mut c = p.coords().to_vec();
            c.push(p.norm_sq());
            Point::new(c)
        })
        .collect()
}

/// Indices of the points of `points` at maximal distance from `x`, within `eps`.
pub fn farthest_set(points: &[Point], x: &Point, eps: f64) -> Vec<usize> {
    let dists: Vec<f64> = points.iter().map(|p| p.dist(x)).collect();
    let max = dists.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..points.len()).filter(|&i| dists[i] >= max - eps).collect()
}

/// Cells `conv(S)` of the farthest-point Delaunay complex, keyed by sorted
/// vertex-index sets, per dimension `0..=d`.
#[derive(Clone, Debug)]
pub struct FarthestDelaunayComplex {
    dim: usize,
    cells: Vec<Vec<Vec<usize>>>,
    circumdata: Vec<(Point, f64)>,
    cofaces: Vec<Vec<Vec<usize>>>,
    boundary: Vec<Vec<bool>>,
    index: HashMap<Vec<usize>, (usize, usize)>,
    cospherical: bool,
}

impl FarthestDelaunayComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells of dimension `k` (0..=d).
    pub fn cells(&self, k: usize) -> &[Vec<usize>] {
        &self.cells[k]
    }

    pub fn top_cells(&self) -> &[Vec<usize>] {
        &self.cells[self.dim]
    }

    /// Circumcenter and circumradius of each top cell, aligned with `top_cells()`.
    pub fn circumdata(&self) -> &[(Point, f64)] {
        &self.circumdata
    }

    /// Indices of the (k+1)-cells containing cell `i` of dimension `k`.
    pub fn cofaces(&self, k: usize, i: usize) -> &[usize] {
        &self.cofaces[k][i]
    }

    pub fn is_boundary(&self, k: usize, i: usize) -> bool {
        self.boundary[k][i]
    }

    pub fn find_cell(&self, vertices: &[usize]) -> Option<(usize, usize)> {
        self.index.get(vertices).copied()
    }

    /// True when all centers are cospherical and the complex is the single cell conv(C).
    pub fn is_cospherical(&self) -> bool {
        self.cospherical
    }

    /// Cell counts per dimension `0..=d`.
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

/// The boundary subcomplex: cells lying in a facet of the center polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryComplex {
    dim: usize,
    cells: Vec<Vec<Vec<usize>>>,
}

impl BoundaryComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Boundary cells of dimension `k` (0..d-1).
    pub fn cells(&self, k: usize) -> &[Vec<usize>] {
        &self.cells[k]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

/// Farthest-point Delaunay complex of the vertices of a full-dimensional polytope.
pub fn farthest_delaunay(
    points: &[Point],
    hull: &PolytopeComplex,
    tol: Tolerance,
) -> Result<FarthestDelaunayComplex> {
    let d = hull.dim();
    if !hull.non_vertices().is_empty() || hull.vertex_indices().len() != points.len() {
        return Err(Error::InvalidParameters(
            "every center must be a vertex of the center polytope".into(),
        ));
    }
    let lifted = lift(points);
    let lift_tol = tol.scaled_to(&lifted);
    let rank = affine_rank(&lifted, lift_tol.eps());

    let (mut cells, cospherical) = if rank < d + 1 {
        // all centers on one sphere: the single cell conv(C) with its faces
        let mut cells: Vec<Vec<Vec<usize>>> =
            (0..d).map(|k| hull.faces_of_dim(k).map(<[_]>::to_vec)).collect::<Result<_>>()?;
        cells.push(vec![hull.vertex_indices().to_vec()]);
        (cells, true)
    } else {
        let lifted_hull = convex_hull(&lifted, d + 1, tol)?;
        let top: Vec<Vec<usize>> = lifted_hull
            .facets()
            .iter()
            .zip(lifted_hull.facet_supports())
            .filter(|(_, s)| s.normal[d] > tol.tol)
            .map(|(f, _)| f.clone())
            .collect();
        let mut cells: Vec<Vec<Vec<usize>>> = (0..d)
            .map(|k| {
                lifted_hull.faces_of_dim(k).map(|faces| {
                    faces
                        .iter()
                        .filter(|f| top.iter().any(|t| is_subset(f, t)))
                        .cloned()
                        .collect()
                })
            })
            .collect::<Result<_>>()?;
        cells.push(top);
        (cells, false)
    };
    for level in &mut cells {
        level.sort();
    }

    let eps = tol.scaled_to(points).eps();
    let circumdata = cells[d]
        .iter()
        .map(|cell| {
            let pts: Vec<Point> = cell.iter().map(|&i| points[i].clone()).collect();
            let basis: Vec<Point> = independent_subset(&pts, eps).into_iter().map(|i| pts[i].clone()).collect();
            let (center, _) = circumcenter(&basis, eps)?;
            let radius = pts.iter().map(|p| center.dist(p)).fold(0.0, f64::max);
            Ok((center, radius))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut index = HashMap::new();
    for (k, level) in cells.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            index.insert(c.clone(), (k, i));
        }
    }
    let cofaces = (0..=d)
        .map(|k| {
            cells[k]
                .iter()
                .map(|c| match cells.get(k + 1) {
                    Some(up) => up
                        .iter()
                        .enumerate()
                        .filter(|(_, g)| is_subset(c, g))
                        .map(|(j, _)| j)
                        .collect(),
                    None => Vec::new(),
                })
                .collect()
        })
        .collect();
    let boundary = cells
        .iter()
        .map(|level| level.iter().map(|c| hull.on_boundary(c)).collect())
        .collect();

    Ok(FarthestDelaunayComplex {
        dim: d,
        cells,
        circumdata,
        cofaces,
        boundary,
        index,
        cospherical,
    })
}

/// Cells of `dc` contained in the boundary of the center polytope `hull`.
pub fn boundary_delaunay(dc: &FarthestDelaunayComplex, hull: &PolytopeComplex) -> BoundaryComplex {
    let d = dc.dim();
    let cells = (0..d)
        .map(|k| {
            dc.cells(k)
                .iter()
                .filter(|c| hull.on_boundary(c))
                .cloned()
                .collect()
        })
        .collect();
    BoundaryComplex { dim: d, cells }
}

/// A vertex of the farthest-point Voronoi diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiVertex {
    pub location: Point,
    pub farthest_set: Vec<usize>,
    pub circumradius: f64,
}

/// One Voronoi vertex per top-dimensional Delaunay cell.
pub fn voronoi_vertices(dc: &FarthestDelaunayComplex) -> Vec<VoronoiVertex> {
    dc.top_cells()
        .iter()
        .zip(dc.circumdata())
        .map(|(cell, (center, radius))| VoronoiVertex {
            location: center.clone(),
            farthest_set: cell.clone(),
            circumradius: *radius,
        })
        .collect()
}

/// A polyhedral cone with apex at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    pub generators: Vec<Point>,
}

impl Cone {
    /// Dimension of the linear span of the generators.
    pub fn dim(&self) -> usize {
        orthonormal_basis(&self.generators, 1e-9).0.len()
    }

    /// No line through the origin lies in the cone, i.e. the origin is not a
    /// convex combination of the normalized generators.
    pub fn is_pointed(&self) -> bool {
        let unit: Vec<Point> = self.generators.iter().filter_map(Point::normalized).collect();
        if unit.is_empty() {
            return true;
        }
        min_norm_in_hull(&unit) > 1e-9
    }
}

/// Distance from the origin to the convex hull of `points`, by enumerating
/// affinely independent supports of size at most d+1.
fn min_norm_in_hull(points: &[Point]) -> f64 {
    let d = points[0].dim();
    let mut best = f64::INFINITY;
    for size in 1..=points.len().min(d + 1) {
        for subset in (0..points.len()).combinations(size) {
            let pts: Vec<&Point> = subset.iter().map(|&i| &points[i]).collect();
            if let Some(norm) = min_norm_on_affine_simplex(&pts) {
                best = best.min(norm);
            }
        }
    }
    best
}

/// Norm of the projection of the origin onto aff(pts), if that projection
/// lies in conv(pts) and pts are affinely independent.
fn min_norm_on_affine_simplex(pts: &[&Point]) -> Option<f64> {
    let base = pts[0];
    let k = pts.len() - 1;
    if k == 0 {
        return Some(base.norm());
    }
    let d = base.dim();
    let diffs = DMatrix::from_fn(d, k, |r, c| pts[c + 1][r] - base[r]);
    let gram = diffs.transpose() * &diffs;
    let rhs = -(diffs.transpose() * base.to_vector());
    let mu: DVector<f64> = gram.lu().solve(&rhs)?;
    let lambda0 = 1.0 - mu.sum();
    if lambda0 < -1e-12 || mu.iter().any(|&m| m < -1e-12) {
        return None;
    }
    Some((base.to_vector() + diffs * mu).norm())
}

/// Recession cone of the Voronoi face of boundary cell `subset`: the negated
/// normal cone of the center polytope at the smallest face containing it.
pub fn recession_cone(hull: &PolytopeComplex, subset: &[usize]) -> Result<Cone> {
    let facets = hull.supporting_facets_of(subset)?;
    if facets.is_empty() {
        return Err(Error::NotOnBoundary);
    }
    Ok(Cone {
        generators: facets
            .iter()
            .map(|&i| &hull.facet_supports()[i].normal * -1.0)
            .collect(),
    })
}
