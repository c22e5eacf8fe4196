//! Sampled boundary geometry of a three-dimensional ball polyhedron: edges as
//! circular-arc polylines, facets as triangulated spherical patches.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::ballpoly::BasicBallPolyhedron;
use crate::error::{Error, Result};
use crate::geom::Point;

/// An edge of P sampled along the circle shared by two generating spheres.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledArc {
    pub centers: (usize, usize),
    /// Indices into `SurfaceSample::points`, from one vertex of P to the other.
    pub polyline: Vec<usize>,
}

/// A facet of P triangulated on the sphere around one center.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPatch {
    pub center: usize,
    /// Counterclockwise seen from outside P.
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSample {
    /// The first `vertex_count` points are the vertices of P, in lattice order.
    pub points: Vec<Point>,
    pub vertex_count: usize,
    pub arcs: Vec<SampledArc>,
    pub patches: Vec<SampledPatch>,
}

fn cross(a: &Point, b: &Point) -> Point {
    Point::new(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

fn on_sphere(center: &Point, r: f64, p: &Point) -> Point {
    let dir = (p - center).normalized().unwrap_or_else(|| Point::unit(3, 0));
    center.add_scaled(r, &dir)
}

/// Sample the boundary of a basic r-ball polyhedron in R^3.
///
/// Every edge becomes `segments` chords; every facet is fanned from a point
/// near its middle and each fan triangle is split into `4^depth` pieces.
pub fn sample_surface(p: &BasicBallPolyhedron, segments: usize, depth: u32) -> Result<SurfaceSample> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: p.dim(),
        });
    }
    if segments == 0 {
        return Err(Error::InvalidParameters("an arc needs at least one segment".into()));
    }
    let centers = p.centers.points();
    let r = p.r();
    let eps = p.centers.tolerance().eps();
    let vertex_sets = p.lattice.faces(0);
    let mut points = p.vertices()?;
    let vertex_count = points.len();

    let mut arcs = Vec::new();
    for s in p.lattice.faces(1) {
        let (i, j) = (s[0], s[1]);
        let ends: Vec<usize> = vertex_sets
            .iter()
            .enumerate()
            .filter(|(_, v)| v.contains(&i) && v.contains(&j))
            .map(|(k, _)| k)
            .collect();
        if ends.len() != 2 {
            return Err(Error::Numerical(format!("edge {{{i},{j}}} has {} endpoints", ends.len())));
        }
        let angles = arc_angles(&centers[i], &centers[j], r, &points[ends[0]], &points[ends[1]], centers, eps)?;
        let mut polyline = vec![ends[0]];
        for k in 1..segments {
            let t = k as f64 / segments as f64;
            polyline.push(points.len());
            points.push(angles.at(t));
        }
        polyline.push(ends[1]);
        arcs.push(SampledArc {
            centers: (i, j),
            polyline,
        });
    }

    let mut patches = Vec::new();
    for (facet, s) in p.lattice.faces(2).iter().enumerate() {
        let c = s[0];
        let boundary = boundary_loop(&arcs, c)
            .ok_or_else(|| Error::Numerical(format!("boundary of facet {facet} is not a single cycle")))?;
        let triangles = fan_patch(&mut points, &boundary, &centers[c], r, depth);
        patches.push(SampledPatch { center: c, triangles });
    }

    Ok(SurfaceSample {
        points,
        vertex_count,
        arcs,
        patches,
    })
}

struct ArcFrame {
    mid: Point,
    radius: f64,
    u: Point,
    v: Point,
    sweep: f64,
}

impl ArcFrame {
    fn at(&self, t: f64) -> Point {
        let a = t * self.sweep;
        self.mid
            .add_scaled(self.radius * a.cos(), &self.u)
            .add_scaled(self.radius * a.sin(), &self.v)
    }
}

/// Parametrize the arc from `a` to `b` on the circle of the two spheres that
/// stays inside all balls.
fn arc_angles(ci: &Point, cj: &Point, r: f64, a: &Point, b: &Point, all: &[Point], eps: f64) -> Result<ArcFrame> {
    let axis = (cj - ci).normalized().ok_or(Error::DegeneratePair { w: 0.0, r })?;
    let mid = Point::centroid(&[ci.clone(), cj.clone()]);
    let half = ci.dist(cj) / 2.0;
    if half >= r {
        return Err(Error::DegeneratePair { w: 2.0 * half, r });
    }
    let radius = (r * r - half * half).sqrt();
    let u = (a - &mid).normalized().ok_or(Error::Numerical("arc endpoint at circle center".into()))?;
    let v = cross(&axis, &u);
    let rel = b - &mid;
    let phi = rel.dot(&v).atan2(rel.dot(&u));
    let other = if phi >= 0.0 { phi - 2.0 * PI } else { phi + 2.0 * PI };
    let excess = |sweep: f64| {
        let frame = ArcFrame {
            mid: mid.clone(),
            radius,
            u: u.clone(),
            v: v.clone(),
            sweep,
        };
        let m = frame.at(0.5);
        all.iter().map(|c| m.dist(c) - r).fold(f64::NEG_INFINITY, f64::max)
    };
    let sweep = if excess(phi) <= excess(other) { phi } else { other };
    if excess(sweep) > eps.max(1e-9 * r) {
        return Err(Error::Numerical("no edge arc stays inside the polyhedron".into()));
    }
    Ok(ArcFrame {
        mid,
        radius,
        u,
        v,
        sweep,
    })
}

/// Chain the arcs of one facet into a closed loop of point indices.
fn boundary_loop(arcs: &[SampledArc], center: usize) -> Option<Vec<usize>> {
    let mine: Vec<&SampledArc> = arcs
        .iter()
        .filter(|a| a.centers.0 == center || a.centers.1 == center)
        .collect();
    let first = mine.first()?;
    let mut used = vec![false; mine.len()];
    used[0] = true;
    let mut out: Vec<usize> = first.polyline[..first.polyline.len() - 1].to_vec();
    let start = first.polyline[0];
    let mut at = *first.polyline.last()?;
    while at != start {
        let (k, arc) = mine
            .iter()
            .enumerate()
            .find(|(k, a)| !used[*k] && (a.polyline[0] == at || *a.polyline.last().unwrap() == at))?;
        used[k] = true;
        let mut line = arc.polyline.clone();
        if line[0] != at {
            line.reverse();
        }
        out.extend_from_slice(&line[..line.len() - 1]);
        at = *line.last()?;
    }
    used.iter().all(|&u| u).then_some(out)
}

fn fan_patch(points: &mut Vec<Point>, boundary: &[usize], center: &Point, r: f64, depth: u32) -> Vec<[usize; 3]> {
    let loop_pts: Vec<Point> = boundary.iter().map(|&i| points[i].clone()).collect();
    let apex = on_sphere(center, r, &Point::centroid(&loop_pts));
    let outward = (&apex - center).normalized().unwrap_or_else(|| Point::unit(3, 0));
    let apex_idx = points.len();
    points.push(apex);

    let m = 1usize << depth;
    let mut spokes: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triangles = Vec::new();
    for w in 0..boundary.len() {
        let b = boundary[w];
        let c = boundary[(w + 1) % boundary.len()];
        let mut grid: HashMap<(usize, usize), usize> = HashMap::new();
        for i in 0..=m {
            for j in 0..=m - i {
                let idx = if i + j == 0 {
                    apex_idx
                } else if j == 0 && i == m {
                    b
                } else if i == 0 && j == m {
                    c
                } else if j == 0 {
                    spoke_point(points, &mut spokes, b, i, apex_idx, m, center, r)
                } else if i == 0 {
                    spoke_point(points, &mut spokes, c, j, apex_idx, m, center, r)
                } else {
                    let (wb, wc) = (i as f64 / m as f64, j as f64 / m as f64);
                    let p = (&points[apex_idx] * (1.0 - wb - wc))
                        .add_scaled(wb, &points[b])
                        .add_scaled(wc, &points[c]);
                    points.push(on_sphere(center, r, &p));
                    points.len() - 1
                };
                grid.insert((i, j), idx);
            }
        }
        for i in 0..m {
            for j in 0..m - i {
                triangles.push([grid[&(i, j)], grid[&(i + 1, j)], grid[&(i, j + 1)]]);
                if i + j + 1 < m {
                    triangles.push([grid[&(i + 1, j)], grid[&(i + 1, j + 1)], grid[&(i, j + 1)]]);
                }
            }
        }
    }
    for t in triangles.iter_mut() {
        let n = cross(&(&points[t[1]] - &points[t[0]]), &(&points[t[2]] - &points[t[0]]));
        if n.dot(&outward) < 0.0 {
            t.swap(1, 2);
        }
    }
    triangles
}

#[allow(clippy::too_many_arguments)]
fn spoke_point(
    points: &mut Vec<Point>,
    spokes: &mut HashMap<(usize, usize), usize>,
    rim: usize,
    step: usize,
    apex: usize,
    m: usize,
    center: &Point,
    r: f64,
) -> usize {
    *spokes.entry((rim, step)).or_insert_with(|| {
        let t = step as f64 / m as f64;
        let p = &(&points[apex] * (1.0 - t)) + &(&points[rim] * t);
        points.push(on_sphere(center, r, &p));
        points.len() - 1
    })
}
