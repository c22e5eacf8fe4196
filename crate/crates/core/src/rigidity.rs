//! Dihedral-angle rigidity checks: face-lattice isomorphisms, angle
//! comparison, least-squares congruence and inscribed-cell congruence.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::ballpoly::{dihedral_angle, BallPolyFaceLattice, BasicBallPolyhedron};
use crate::error::{Error, Result};
use crate::geom::{affine_rank, circumcenter, independent_subset, Point, Tolerance};
use crate::hull::PolytopeComplex;

/// A graded family of finite sets over a ground set of atoms.
///
/// Ball-polyhedron lattices use the centers (facets) as atoms; polytope
/// complexes use their vertices.
pub trait GradedSetFamily {
    /// Sorted atom labels.
    fn atoms(&self) -> Vec<usize>;
    fn grades(&self) -> usize;
    fn sets(&self, grade: usize) -> &[Vec<usize>];
}

impl GradedSetFamily for BallPolyFaceLattice {
    fn atoms(&self) -> Vec<usize> {
        (0..self.n()).collect()
    }

    fn grades(&self) -> usize {
        self.dim()
    }

    fn sets(&self, grade: usize) -> &[Vec<usize>] {
        self.faces(grade)
    }
}

impl GradedSetFamily for PolytopeComplex {
    fn atoms(&self) -> Vec<usize> {
        self.vertex_indices().to_vec()
    }

    fn grades(&self) -> usize {
        self.dim()
    }

    fn sets(&self, grade: usize) -> &[Vec<usize>] {
        self.faces_of_dim(grade).expect("grade below dimension")
    }
}

/// A grade-preserving bijection of face lattices, determined by its action on atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeIsomorphism {
    /// `facet_map[i]` is the image of the i-th atom of the first lattice.
    pub facet_map: Vec<usize>,
    atoms: Vec<usize>,
}

impl LatticeIsomorphism {
    /// Image of an atom label.
    pub fn map_atom(&self, a: usize) -> usize {
        let i = self.atoms.binary_search(&a).expect("atom of the source lattice");
        self.facet_map[i]
    }

    /// Image of a face given by its atom set.
    pub fn map_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&a| self.map_atom(a)).collect();
        out.sort_unstable();
        out
    }

    pub fn is_identity(&self) -> bool {
        self.atoms.iter().zip(&self.facet_map).all(|(a, b)| a == b)
    }
}

/// Lazy backtracking enumeration of lattice isomorphisms in lexicographic
/// order of `facet_map`.
pub struct LatticeIsomorphisms {
    atoms1: Vec<usize>,
    atoms2: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    /// sets of the first family (as atom positions) completed at each depth, with grade
    closing: Vec<Vec<(usize, Vec<usize>)>>,
    targets: Vec<HashSet<Vec<usize>>>,
    assignment: Vec<usize>,
    cursor: Vec<usize>,
    used: Vec<bool>,
    done: bool,
}

impl LatticeIsomorphisms {
    fn empty() -> Self {
        LatticeIsomorphisms {
            atoms1: Vec::new(),
            atoms2: Vec::new(),
            candidates: Vec::new(),
            closing: Vec::new(),
            targets: Vec::new(),
            assignment: Vec::new(),
            cursor: Vec::new(),
            used: Vec::new(),
            done: true,
        }
    }

    fn consistent(&self, depth: usize) -> bool {
        self.closing[depth].iter().all(|(grade, set)| {
            let mut image: Vec<usize> = set.iter().map(|&p| self.atoms2[self.assignment[p]]).collect();
            image.sort_unstable();
            self.targets[*grade].contains(&image)
        })
    }
}

impl Iterator for LatticeIsomorphisms {
    type Item = LatticeIsomorphism;

    fn next(&mut self) -> Option<LatticeIsomorphism> {
        if self.done {
            return None;
        }
        let n = self.atoms1.len();
        if n == 0 {
            self.done = true;
            return None;
        }
        loop {
            let depth = self.assignment.len();
            if depth == n {
                let iso = LatticeIsomorphism {
                    facet_map: self.assignment.iter().map(|&j| self.atoms2[j]).collect(),
                    atoms: self.atoms1.clone(),
                };
                // backtrack one level so the next call resumes the search
                let last = self.assignment.pop().expect("nonempty");
                self.used[last] = false;
                return Some(iso);
            }
            let cands = &self.candidates[depth];
            let mut advanced = false;
            while self.cursor[depth] < cands.len() {
                let j = cands[self.cursor[depth]];
                self.cursor[depth] += 1;
                if self.used[j] {
                    continue;
                }
                self.assignment.push(j);
                if self.consistent(depth) {
                    self.used[j] = true;
                    if depth + 1 < n {
                        self.cursor[depth + 1] = 0;
                    }
                    advanced = true;
                    break;
                }
                self.assignment.pop();
            }
            if !advanced {
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                let last = self.assignment.pop().expect("nonempty");
                self.used[last] = false;
            }
        }
    }
}

/// Per-atom signature: how many sets of each grade contain it.
fn degree_signature<L: GradedSetFamily>(family: &L, atoms: &[usize]) -> Vec<Vec<usize>> {
    let mut sig = vec![vec![0; family.grades()]; atoms.len()];
    for g in 0..family.grades() {
        for set in family.sets(g) {
            for a in set {
                if let Ok(i) = atoms.binary_search(a) {
                    sig[i][g] += 1;
                }
            }
        }
    }
    sig
}

/// All grade-preserving order isomorphisms between two graded set families,
/// by backtracking over atom correspondences pruned by degree signatures.
pub fn lattice_isomorphisms<L: GradedSetFamily>(first: &L, second: &L) -> LatticeIsomorphisms {
    let atoms1 = first.atoms();
    let atoms2 = second.atoms();
    let grades = first.grades();
    let same_shape = atoms1.len() == atoms2.len()
        && grades == second.grades()
        && (0..grades).all(|g| first.sets(g).len() == second.sets(g).len());
    if !same_shape {
        return LatticeIsomorphisms::empty();
    }
    let sig1 = degree_signature(first, &atoms1);
    let sig2 = degree_signature(second, &atoms2);
    let candidates: Vec<Vec<usize>> = sig1
        .iter()
        .map(|s| (0..atoms2.len()).filter(|&j| &sig2[j] == s).collect())
        .collect();

    let n = atoms1.len();
    let mut closing = vec![Vec::new(); n];
    for g in 0..grades {
        for set in first.sets(g) {
            let positions: Vec<usize> = set
                .iter()
                .map(|a| atoms1.binary_search(a).expect("face atoms are atoms"))
                .collect();
            if let Some(&last) = positions.iter().max() {
                closing[last].push((g, positions));
            }
        }
    }
    let targets = (0..grades)
        .map(|g| second.sets(g).iter().cloned().collect())
        .collect();
    LatticeIsomorphisms {
        atoms1,
        atoms2,
        candidates,
        closing,
        targets,
        assignment: Vec::with_capacity(n),
        cursor: vec![0; n],
        used: vec![false; n],
        done: false,
    }
}

/// Largest dihedral-angle difference under an isomorphism, with the pair of
/// the first polyhedron where it occurs.
#[derive(Clone, Debug, PartialEq)]
pub struct DihedralDeviation {
    pub max: f64,
    pub pair: Option<(usize, usize)>,
}

/// Compare inner dihedral angles along corresponding (d-2)-faces.
pub fn compare_dihedrals(
    p1: &BasicBallPolyhedron,
    p2: &BasicBallPolyhedron,
    iso: &LatticeIsomorphism,
) -> Result<DihedralDeviation> {
    let d = p1.dim();
    let c1 = p1.centers.points();
    let c2 = p2.centers.points();
    let mut out = DihedralDeviation { max: 0.0, pair: None };
    for s in p1.lattice.faces(d - 2) {
        let (i, j) = (s[0], s[1]);
        let t1 = dihedral_angle(&c1[i], &c1[j], p1.r())?;
        let t2 = dihedral_angle(&c2[iso.map_atom(i)], &c2[iso.map_atom(j)], p2.r())?;
        let dev = (t1 - t2).abs();
        if out.pair.is_none() || dev > out.max {
            out = DihedralDeviation { max: dev, pair: Some((i, j)) };
        }
    }
    Ok(out)
}

/// An orthogonal map plus translation `x -> linear * x + translation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    pub linear: DMatrix<f64>,
    pub translation: DVector<f64>,
    /// Root-mean-square alignment error over the corresponded points.
    pub residual: f64,
}

impl Isometry {
    pub fn apply(&self, p: &Point) -> Point {
        Point::from_vector(&(&self.linear * p.to_vector() + &self.translation))
    }

    /// Orientation preserving (determinant +1).
    pub fn is_proper(&self) -> bool {
        self.linear.determinant() > 0.0
    }
}

/// Singular vectors `(U, V^T)` of `m`. The default dynamic SVD can stop
/// early on rank-deficient input and return orthogonal factors that do not
/// reconstruct `m`, so the transposed and a strictly converged run are also
/// tried and the most accurate decomposition wins.
fn checked_svd(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let error = |u: &DMatrix<f64>, sv: &DVector<f64>, v_t: &DMatrix<f64>| {
        (u * DMatrix::from_diagonal(sv) * v_t - m).norm()
    };
    let mut candidates = Vec::new();
    if let Some(s) = m.clone().try_svd(true, true, f64::EPSILON, 0) {
        candidates.push((s.u.expect("u requested"), s.singular_values, s.v_t.expect("v_t requested")));
    }
    if let Some(s) = m.transpose().try_svd(true, true, f64::EPSILON, 0) {
        let u = s.v_t.expect("v_t requested").transpose();
        let v_t = s.u.expect("u requested").transpose();
        candidates.push((u, s.singular_values, v_t));
    }
    if let Some(s) = m.clone().try_svd(true, true, 0.0, 10_000) {
        candidates.push((s.u.expect("u requested"), s.singular_values, s.v_t.expect("v_t requested")));
    }
    let (u, _, v_t) = candidates
        .into_iter()
        .min_by(|a, b| error(&a.0, &a.1, &a.2).total_cmp(&error(&b.0, &b.1, &b.2)))
        .expect("a dense SVD always converges within the iteration cap");
    (u, v_t)
}

fn procrustes(src: &[&Point], dst: &[&Point]) -> Isometry {
    let d = src[0].dim();
    let n = src.len() as f64;
    let mean = |pts: &[&Point]| {
        pts.iter()
            .fold(DVector::zeros(d), |acc: DVector<f64>, p| acc + p.to_vector())
            / n
    };
    let (ms, mt) = (mean(src), mean(dst));
    let mut cov = DMatrix::zeros(d, d);
    for (s, t) in src.iter().zip(dst) {
        cov += (s.to_vector() - &ms) * (t.to_vector() - &mt).transpose();
    }
    let (u, v_t) = checked_svd(&cov);
    // reflections allowed: no determinant correction
    let linear = v_t.transpose() * u.transpose();
    let translation = &mt - &linear * &ms;
    let sq: f64 = src
        .iter()
        .zip(dst)
        .map(|(s, t)| (&linear * s.to_vector() + &translation - t.to_vector()).norm_squared())
        .sum();
    Isometry {
        linear,
        translation,
        residual: (sq / n).sqrt(),
    }
}

/// Least-squares isometry (reflections included) taking `src[i]` to
/// `dst[correspondence[i]]`.
pub fn best_isometry(src: &[Point], dst: &[Point], correspondence: &[usize], tol: Tolerance) -> Result<Isometry> {
    if src.len() != dst.len() || correspondence.len() != src.len() {
        return Err(Error::InvalidParameters("point lists of different length".into()));
    }
    let d = src.first().ok_or(Error::EmptyInput)?.dim();
    if src.len() < d + 1 {
        return Err(Error::TooFewPoints {
            needed: d + 1,
            got: src.len(),
        });
    }
    if let Some(&bad) = correspondence.iter().find(|&&j| j >= dst.len()) {
        return Err(Error::UnknownIndex(bad));
    }
    let matched: Vec<&Point> = correspondence.iter().map(|&j| &dst[j]).collect();
    if matched.iter().any(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: matched.iter().map(|p| p.dim()).find(|&k| k != d).unwrap_or(d),
        });
    }
    let eps_src = tol.scaled_to(src).eps();
    let eps_dst = tol.scaled_to(dst).eps();
    if affine_rank(src, eps_src) < d || affine_rank(dst, eps_dst) < d {
        return Err(Error::RankDeficient);
    }
    let src_refs: Vec<&Point> = src.iter().collect();
    Ok(procrustes(&src_refs, &matched))
}

/// Check that two corresponded polytopes, each inscribed in a sphere, with
/// equal corresponding edge lengths are congruent.
///
/// Point `i` of `first` corresponds to point `i` of `second`; `edges` lists
/// the edges of their common face lattice.
pub fn inscribed_cell_congruence(
    first: &[Point],
    second: &[Point],
    edges: &[(usize, usize)],
    tol: Tolerance,
) -> Result<bool> {
    if first.len() != second.len() || first.is_empty() {
        return Err(Error::InvalidParameters("cells must have the same number of vertices".into()));
    }
    for cell in [first, second] {
        check_inscribed(cell, tol)?;
    }
    let eps = tol.scaled_to(first).eps().max(tol.scaled_to(second).eps());
    let edges_match = edges
        .iter()
        .all(|&(i, j)| (first[i].dist(&first[j]) - second[i].dist(&second[j])).abs() <= eps);
    let a: Vec<&Point> = first.iter().collect();
    let b: Vec<&Point> = second.iter().collect();
    let iso = procrustes(&a, &b);
    Ok(edges_match && iso.residual <= eps)
}

fn check_inscribed(cell: &[Point], tol: Tolerance) -> Result<()> {
    let eps = tol.scaled_to(cell).eps();
    let basis: Vec<Point> = independent_subset(cell, eps)
        .into_iter()
        .map(|i| cell[i].clone())
        .collect();
    let (center, radius) = circumcenter(&basis, eps)?;
    if cell.iter().all(|p| (center.dist(p) - radius).abs() <= eps) {
        Ok(())
    } else {
        Err(Error::NotInscribed((0..cell.len()).collect()))
    }
}

/// Tolerances for `rigidity_compare`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidityOptions {
    /// Largest dihedral-angle difference (radians) still counted as equal.
    pub angle_tol: f64,
    /// Congruence accepted when the alignment residual is at most
    /// `congruence_tol` times the bounding-box diameter.
    pub congruence_tol: f64,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        RigidityOptions {
            angle_tol: 1e-7,
            congruence_tol: 1e-9,
        }
    }
}

/// Outcome of comparing two basic r-ball polyhedra.
#[derive(Clone, Debug, PartialEq)]
pub enum RigidityVerdict {
    Congruent {
        isometry: Isometry,
        facet_map: Vec<usize>,
    },
    LatticeMismatch,
    /// Every lattice isomorphism changes some dihedral angle.
    AngleMismatch {
        max_deviation: f64,
        pair: (usize, usize),
    },
    /// Generating radii differ, so equal angles would not mean equal edges.
    RadiusMismatch { r1: f64, r2: f64 },
    /// Angles match under some isomorphism but no alignment succeeds; a
    /// potential counterexample to rigidity.
    AlignmentFailure {
        facet_map: Vec<usize>,
        residual: f64,
    },
}

impl RigidityVerdict {
    pub fn is_congruent(&self) -> bool {
        matches!(self, RigidityVerdict::Congruent { .. })
    }
}

/// Decide whether two basic r-ball polyhedra with isomorphic lattices and
/// equal dihedral angles are congruent. The first isomorphism in
/// lexicographic order that aligns is reported.
pub fn rigidity_compare(
    p1: &BasicBallPolyhedron,
    p2: &BasicBallPolyhedron,
    opts: RigidityOptions,
) -> Result<RigidityVerdict> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    if (p1.r() - p2.r()).abs() > 1e-12 * p1.r().max(p2.r()) {
        return Ok(RigidityVerdict::RadiusMismatch { r1: p1.r(), r2: p2.r() });
    }
    let diameter = p1.centers.diameter().max(p2.centers.diameter());
    let mut any_iso = false;
    let mut best_angle: Option<DihedralDeviation> = None;
    let mut best_alignment: Option<(Vec<usize>, f64)> = None;
    for iso in lattice_isomorphisms(&p1.lattice, &p2.lattice) {
        any_iso = true;
        let dev = compare_dihedrals(p1, p2, &iso)?;
        if dev.max > opts.angle_tol {
            if best_angle.as_ref().is_none_or(|b| dev.max < b.max) {
                best_angle = Some(dev);
            }
            continue;
        }
        let corr: Vec<usize> = iso.facet_map.clone();
        let isometry = best_isometry(
            p1.centers.points(),
            p2.centers.points(),
            &corr,
            p1.centers.tolerance(),
        )?;
        if isometry.residual <= opts.congruence_tol * diameter {
            return Ok(RigidityVerdict::Congruent {
                isometry,
                facet_map: iso.facet_map,
            });
        }
        if best_alignment.as_ref().is_none_or(|(_, r)| isometry.residual < *r) {
            best_alignment = Some((iso.facet_map, isometry.residual));
        }
    }
    if !any_iso {
        return Ok(RigidityVerdict::LatticeMismatch);
    }
    if let Some((facet_map, residual)) = best_alignment {
        return Ok(RigidityVerdict::AlignmentFailure { facet_map, residual });
    }
    let dev = best_angle.expect("some isomorphism was rejected on angles");
    Ok(RigidityVerdict::AngleMismatch {
        max_deviation: dev.max,
        pair: dev.pair.unwrap_or((0, 0)),
    })
}

/// The convex polygon inscribed in a circle with the given side lengths in
/// cyclic order, found by bisection on the circumradius. Vertex 0 is placed
/// at angle 0 and the vertices run counterclockwise.
pub fn cyclic_polygon_from_sides(sides: &[f64]) -> Result<Vec<Point>> {
    if sides.len() < 3 || sides.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidParameters("need at least three positive sides".into()));
    }
    let (longest, &s_max) = sides
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    if 2.0 * s_max >= sides.iter().sum::<f64>() {
        return Err(Error::InvalidParameters("sides violate the polygon inequality".into()));
    }
    let half_angle = |s: f64, r: f64| (s / (2.0 * r)).clamp(-1.0, 1.0).asin();
    let r_min = s_max / 2.0;
    let total_at_min: f64 = sides.iter().map(|&s| 2.0 * half_angle(s, r_min)).sum();
    // center inside: all central angles are 2 asin(s/2R) and sum to 2 pi;
    // otherwise the longest side subtends 2 pi minus its short-arc angle
    let center_inside = total_at_min >= 2.0 * PI;
    let excess = |r: f64| -> f64 {
        let others: f64 = sides
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != longest)
            .map(|(_, &s)| 2.0 * half_angle(s, r))
            .sum();
        let long = 2.0 * half_angle(s_max, r);
        if center_inside {
            others + long - 2.0 * PI
        } else {
            others - long
        }
    };
    let (mut lo, mut hi) = (r_min, r_min * 2.0);
    while (excess(hi) > 0.0) == center_inside {
        hi *= 2.0;
        if hi > r_min * 1e12 {
            return Err(Error::Numerical("circumradius bracket diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0) == center_inside {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let mut angle = 0.0f64;
    let mut out = Vec::with_capacity(sides.len());
    for (i, &s) in sides.iter().enumerate() {
        out.push(Point::new(vec![r * angle.cos(), r * angle.sin()]));
        let step = if !center_inside && i == longest {
            2.0 * PI - 2.0 * half_angle(s, r)
        } else {
            2.0 * half_angle(s, r)
        };
        angle += step;
    }
    Ok(out)
}
