//! Cyclic polytopes and the face-number upper bounds for basic r-ball polyhedra.

use itertools::Itertools;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geom::Point;

/// Face numbers `c_0(n,d), ..., c_{d-1}(n,d)` of the cyclic polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFaceNumbers {
    pub n: usize,
    pub d: usize,
    pub c: Vec<usize>,
}

impl CyclicFaceNumbers {
    /// Alternating sum `sum (-1)^i c_i`.
    pub fn euler_sum(&self) -> i64 {
        alternating_sum(&self.c)
    }
}

pub(crate) fn alternating_sum(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// `n` equally spaced parameters on `[-1, 1]`.
pub fn equally_spaced_taus(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Points `(t, t^2, ..., t^d)` on the moment curve.
pub fn moment_curve_points(taus: &[f64], d: usize) -> Result<Vec<Point>> {
    if d < 2 {
        return Err(Error::InvalidParameters(format!("dimension {d} < 2")));
    }
    if taus.len() < d + 1 {
        return Err(Error::TooFewPoints {
            needed: d + 1,
            got: taus.len(),
        });
    }
    if taus.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::NonDistinctTaus);
    }
    Ok(taus
        .iter()
        .map(|&t| Point::new((1..=d as i32).map(|k| t.powi(k)).collect()))
        .collect())
}

/// Facets of the cyclic polytope with `n` vertices in dimension `d`, as
/// sorted 0-based vertex sets, by the Gale evenness condition: a d-set S is a
/// facet iff every two non-members are separated by an even number of members.
pub fn gale_evenness_facets(n: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    if d < 2 || n <= d {
        return Err(Error::InvalidParameters(format!("need n > d >= 2, got n={n}, d={d}")));
    }
    Ok((0..n)
        .combinations(d)
        .filter(|s| satisfies_gale_evenness(s, n))
        .collect())
}

fn satisfies_gale_evenness(set: &[usize], n: usize) -> bool {
    let outside: Vec<usize> = (0..n).filter(|i| set.binary_search(i).is_err()).collect();
    outside.windows(2).all(|w| {
        let between = set.iter().filter(|&&s| w[0] < s && s < w[1]).count();
        between % 2 == 0
    })
}

/// Face numbers of the (simplicial) cyclic polytope, counting the distinct
/// `(i+1)`-subsets of Gale facets.
pub fn cyclic_face_numbers(n: usize, d: usize) -> Result<CyclicFaceNumbers> {
    let facets = gale_evenness_facets(n, d)?;
    let c = (1..=d)
        .map(|size| {
            let faces: BTreeSet<Vec<usize>> = facets
                .iter()
                .flat_map(|f| f.iter().copied().combinations(size))
                .collect();
            faces.len()
        })
        .collect();
    Ok(CyclicFaceNumbers { n, d, c })
}

/// Outcome of the upper-bound comparison `f_{k-1}(P) <= c_{d-k}(n,d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UbtReport {
    pub holds: bool,
    /// `margins[k-1] = c_{d-k}(n,d) - f_{k-1}`, for k = 1..=d.
    pub margins: Vec<i64>,
    pub bounds: Vec<usize>,
}

impl UbtReport {
    /// Smallest k (1-based) at which the bound fails, if any.
    pub fn first_violation(&self) -> Option<usize> {
        self.margins.iter().position(|&m| m < 0).map(|i| i + 1)
    }
}

/// Check the face numbers `f = (f_0, ..., f_{d-1})` of a basic r-ball
/// polyhedron with `n` facets against the cyclic-polytope bounds.
pub fn ubt_check(f: &[usize], n: usize, d: usize) -> Result<UbtReport> {
    if f.len() != d {
        return Err(Error::InvalidParameters(format!(
            "f-vector has {} entries, expected {d}",
            f.len()
        )));
    }
    if f[d - 1] != n {
        return Err(Error::FacetCountMismatch {
            expected: n,
            found: f[d - 1],
        });
    }
    let cyc = cyclic_face_numbers(n, d)?;
    let bounds: Vec<usize> = (1..=d).map(|k| cyc.c[d - k]).collect();
    let margins: Vec<i64> = f
        .iter()
        .zip(&bounds)
        .map(|(&fk, &ck)| ck as i64 - fk as i64)
        .collect();
    Ok(UbtReport {
        holds: margins.iter().all(|&m| m >= 0),
        margins,
        bounds,
    })
}
