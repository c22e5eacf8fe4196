//! Basic r-ball polyhedra in d dimensions.
//!
//! A basic r-ball polyhedron is the intersection of n congruent closed balls
//! whose centers are the vertices of a convex polytope in r-convex position,
//! with every farthest-point Voronoi vertex strictly inside the intersection.
//! Its face lattice is the order dual of the boundary part of the
//! farthest-point Delaunay complex of the centers. This crate builds that
//! complex, extracts the lattice, and checks the combinatorial upper bounds
//! and dihedral-angle rigidity numerically.

pub mod ballpoly;
pub mod bounds;
pub mod error;
pub mod fvoronoi;
pub mod generate;
pub mod geom;
pub mod hull;
pub mod rigidity;
pub mod surface;

pub use error::{Error, Result};
pub use geom::{Ball, Flat, Point, Tolerance};
