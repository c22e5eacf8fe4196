//! Convex hulls in d dimensions with merged (possibly non-simplicial) facets
//! and the full graded face lattice.
//!
//! Construction is beneath-beyond over a shuffled insertion order. The
//! simplicial facets it produces are merged by hyperplane, and lower faces
//! are the nonempty intersections of facet vertex sets, graded by affine rank.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{affine_rank, independent_subset, Flat, Point, Tolerance};

/// Outward supporting hyperplane `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceSupport {
    pub normal: Point,
    pub offset: f64,
}

impl HalfspaceSupport {
    /// Signed distance of `p` beyond the hyperplane (positive outside).
    pub fn excess(&self, p: &Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Face lattice of the convex hull of a labeled point set.
///
/// Faces are sorted vertex-index sets referring to the input labels.
#[derive(Clone, Debug)]
pub struct PolytopeComplex {
    dim: usize,
    vertex_indices: Vec<usize>,
    non_vertices: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<Vec<usize>>>,
    facet_supports: Vec<HalfspaceSupport>,
    index: HashMap<Vec<usize>, (usize, usize)>,
}

impl PolytopeComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Input labels of the extreme points.
    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }

    /// Input labels that are not extreme points (interior or on the boundary).
    pub fn non_vertices(&self) -> &[usize] {
        &self.non_vertices
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn faces_of_dim(&self, k: usize) -> Result<&[Vec<usize>]> {
        self.faces
            .get(k)
            .map(Vec::as_slice)
            .ok_or(Error::DimensionOutOfRange { k, max: self.dim - 1 })
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.faces[self.dim - 1]
    }

    /// Supports aligned with `facets()`.
    pub fn facet_supports(&self) -> &[HalfspaceSupport] {
        &self.facet_supports
    }

    /// Indices of the (k+1)-faces containing face `i` of dimension `k`.
    pub fn cofaces(&self, k: usize, i: usize) -> &[usize] {
        &self.cofaces[k][i]
    }

    /// `(dimension, position)` of a face given by its sorted vertex set.
    pub fn find_face(&self, vertices: &[usize]) -> Option<(usize, usize)> {
        self.index.get(vertices).copied()
    }

    /// All facets whose vertex set contains `subset`.
    pub fn supporting_facets_of(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if let Some(&bad) = subset
            .iter()
            .find(|i| self.vertex_indices.binary_search(i).is_err())
        {
            return Err(Error::UnknownIndex(bad));
        }
        Ok(self
            .facets()
            .iter()
            .enumerate()
            .filter(|(_, f)| is_subset(subset, f))
            .map(|(i, _)| i)
            .collect())
    }

    /// Whether `subset` lies in a common facet, i.e. on the boundary.
    pub fn on_boundary(&self, subset: &[usize]) -> bool {
        self.facets().iter().any(|f| is_subset(subset, f))
    }
}

/// `a ⊆ b` for sorted index slices.
pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

struct SimplicialFacet {
    vertices: Vec<usize>,
    support: HalfspaceSupport,
}

/// Hyperplane through `pts`, oriented so that `interior` is on the inner side.
fn oriented_hyperplane(pts: &[Point], interior: &Point, eps: f64) -> Option<HalfspaceSupport> {
    let d = interior.dim();
    let flat = Flat::through(pts, eps);
    if flat.dim() != d - 1 {
        return None;
    }
    let mut normal = flat.normal_basis().pop()?;
    let mut offset = normal.dot(&flat.base);
    if normal.dot(interior) > offset {
        normal = &normal * -1.0;
        offset = -offset;
    }
    Some(HalfspaceSupport { normal, offset })
}

fn beneath_beyond(points: &[Point], eps: f64, seed: u64) -> Option<Vec<SimplicialFacet>> {
    let d = points[0].dim();
    let start = independent_subset(points, eps);
    if start.len() != d + 1 {
        return None;
    }
    let simplex: Vec<Point> = start.iter().map(|&i| points[i].clone()).collect();
    let interior = Point::centroid(&simplex);

    let make = |verts: Vec<usize>| -> Option<SimplicialFacet> {
        let pts: Vec<Point> = verts.iter().map(|&i| points[i].clone()).collect();
        let support = oriented_hyperplane(&pts, &interior, eps)?;
        Some(SimplicialFacet { vertices: verts, support })
    };

    let mut facets = Vec::new();
    for skip in 0..=d {
        let mut verts: Vec<usize> = start
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, &i)| i)
            .collect();
        verts.sort_unstable();
        facets.push(make(verts)?);
    }

    let in_start: HashSet<usize> = start.iter().copied().collect();
    let mut order: Vec<usize> = (0..points.len()).filter(|i| !in_start.contains(i)).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    for p in order {
        let (visible, kept): (Vec<_>, Vec<_>) = facets
            .into_iter()
            .partition(|f| f.support.excess(&points[p]) > eps);
        facets = kept;
        if visible.is_empty() {
            continue;
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &visible {
            for skip in 0..d {
                let ridge: Vec<usize> = f
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridge_count.entry(ridge).or_default() += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridge_count
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        for mut ridge in horizon {
            ridge.push(p);
            ridge.sort_unstable();
            facets.push(make(ridge)?);
        }
    }
    Some(facets)
}

/// Merged facets as (vertex set over all on-hyperplane inputs, support).
fn merge_facets(
    points: &[Point],
    simplicial: &[SimplicialFacet],
    interior: &Point,
    eps: f64,
) -> Option<Vec<(Vec<usize>, HalfspaceSupport)>> {
    let d = points[0].dim();
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in simplicial {
        let on: Vec<usize> = (0..points.len())
            .filter(|&i| f.support.excess(&points[i]).abs() <= eps)
            .collect();
        sets.insert(on);
    }
    let sets: Vec<Vec<usize>> = sets.into_iter().collect();
    let maximal: Vec<&Vec<usize>> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
        .collect();

    let mut out = Vec::with_capacity(maximal.len());
    for set in maximal {
        let pts: Vec<Point> = set.iter().map(|&i| points[i].clone()).collect();
        if affine_rank(&pts, eps) != d - 1 {
            return None;
        }
        let mut support = oriented_hyperplane(&pts, interior, eps)?;
        support.offset = pts
            .iter()
            .map(|p| support.normal.dot(p))
            .fold(f64::NEG_INFINITY, f64::max);
        out.push((set.clone(), support));
    }
    Some(out)
}

fn hull_is_valid(points: &[Point], facets: &[(Vec<usize>, HalfspaceSupport)], eps: f64) -> bool {
    facets
        .iter()
        .all(|(_, s)| points.iter().all(|p| s.excess(p) <= eps))
}

fn check_input(points: &[Point], d: usize, eps: f64) -> Result<()> {
    if points.len() < d + 1 {
        return Err(Error::TooFewPoints {
            needed: d + 1,
            got: points.len(),
        });
    }
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        if !p.is_finite() {
            return Err(Error::InvalidParameters("non-finite coordinate".into()));
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].dist(&points[j]) <= eps {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    let rank = affine_rank(points, eps);
    if rank != d {
        return Err(Error::DegenerateDimension {
            expected: d,
            found: rank,
        });
    }
    Ok(())
}

const INSERTION_SEEDS: [u64; 6] = [0x5eed, 1, 2, 3, 5, 8];

/// Convex hull of `points` in dimension `d` with its full face lattice.
pub fn convex_hull(points: &[Point], d: usize, tol: Tolerance) -> Result<PolytopeComplex> {
    if d < 1 {
        return Err(Error::InvalidParameters("dimension must be positive".into()));
    }
    let eps = tol.scaled_to(points).eps();
    check_input(points, d, eps)?;

    let interior = {
        let start = independent_subset(points, eps);
        let simplex: Vec<Point> = start.iter().map(|&i| points[i].clone()).collect();
        Point::centroid(&simplex)
    };

    let merged = INSERTION_SEEDS
        .iter()
        .filter_map(|&seed| {
            let simplicial = beneath_beyond(points, eps, seed)?;
            let merged = merge_facets(points, &simplicial, &interior, eps)?;
            hull_is_valid(points, &merged, eps).then_some(merged)
        })
        .next()
        .ok_or_else(|| Error::Numerical("no insertion order produced a consistent hull".into()))?;

    // extreme points: the facets through p meet only in p
    let n = points.len();
    let mut vertex_indices = Vec::new();
    for p in 0..n {
        let mut through = merged.iter().filter(|(s, _)| s.binary_search(&p).is_ok());
        let Some((first, _)) = through.next() else { continue };
        let meet = through.fold(first.clone(), |acc, (s, _)| intersect_sorted(&acc, s));
        if meet == [p] {
            vertex_indices.push(p);
        }
    }
    let non_vertices: Vec<usize> = (0..n)
        .filter(|i| vertex_indices.binary_search(i).is_err())
        .collect();

    let mut facets: Vec<(Vec<usize>, HalfspaceSupport)> = merged
        .into_iter()
        .map(|(s, sup)| (intersect_sorted(&s, &vertex_indices), sup))
        .collect();
    facets.sort_by(|a, b| a.0.cmp(&b.0));
    let (facet_sets, facet_supports): (Vec<_>, Vec<_>) = facets.into_iter().unzip();

    let faces = face_closure(points, &facet_sets, d, eps)?;
    Ok(assemble(d, vertex_indices, non_vertices, faces, facet_supports))
}

/// All nonempty intersections of facet vertex sets, graded by affine rank.
fn face_closure(
    points: &[Point],
    facet_sets: &[Vec<usize>],
    d: usize,
    eps: f64,
) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut seen: HashSet<Vec<usize>> = facet_sets.iter().cloned().collect();
    let mut queue: Vec<Vec<usize>> = facet_sets.to_vec();
    while let Some(face) = queue.pop() {
        for facet in facet_sets {
            let meet = intersect_sorted(&face, facet);
            if !meet.is_empty() && meet.len() < face.len() && seen.insert(meet.clone()) {
                queue.push(meet);
            }
        }
    }
    let mut faces = vec![Vec::new(); d];
    for face in seen {
        let pts: Vec<Point> = face.iter().map(|&i| points[i].clone()).collect();
        let k = affine_rank(&pts, eps);
        if k >= d {
            return Err(Error::Numerical(format!("face {face:?} is full-dimensional")));
        }
        faces[k].push(face);
    }
    for level in &mut faces {
        level.sort();
    }
    Ok(faces)
}

fn assemble(
    dim: usize,
    vertex_indices: Vec<usize>,
    non_vertices: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
    facet_supports: Vec<HalfspaceSupport>,
) -> PolytopeComplex {
    let mut index = HashMap::new();
    for (k, level) in faces.iter().enumerate() {
        for (i, f) in level.iter().enumerate() {
            index.insert(f.clone(), (k, i));
        }
    }
    let cofaces = (0..dim)
        .map(|k| {
            faces[k]
                .iter()
                .map(|f| match faces.get(k + 1) {
                    Some(up) => up
                        .iter()
                        .enumerate()
                        .filter(|(_, g)| is_subset(f, g))
                        .map(|(j, _)| j)
                        .collect(),
                    None => Vec::new(),
                })
                .collect()
        })
        .collect();
    PolytopeComplex {
        dim,
        vertex_indices,
        non_vertices,
        faces,
        cofaces,
        facet_supports,
        index,
    }
}
