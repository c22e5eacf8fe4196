//! OBJ and JSON geometry export.

use std::fmt::Write as _;

use bpoly_core::ballpoly::BasicBallPolyhedron;
use bpoly_core::surface::SurfaceSample;
use serde_json::{json, Map, Value};

use crate::instance::InstanceFile;

/// Wavefront OBJ with the vertices of P first, then arc polylines (`l`) and
/// patch triangles (`f`).
pub fn to_obj(sample: &SurfaceSample) -> String {
    let triangles: usize = sample.patches.iter().map(|p| p.triangles.len()).sum();
    let mut out = String::new();
    let _ = writeln!(out, "# ball polyhedron surface");
    let _ = writeln!(
        out,
        "# vertices {} edges {} facets {} points {} triangles {}",
        sample.vertex_count,
        sample.arcs.len(),
        sample.patches.len(),
        sample.points.len(),
        triangles
    );
    for p in &sample.points {
        let _ = writeln!(out, "v {:.12} {:.12} {:.12}", p[0], p[1], p[2]);
    }
    for arc in &sample.arcs {
        let idx: Vec<String> = arc.polyline.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "l {}", idx.join(" "));
    }
    for patch in &sample.patches {
        for t in &patch.triangles {
            let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
    }
    out
}

/// Face lattice with center-label sets, vertex coordinates and a per-facet summary.
pub fn to_json(inst: &InstanceFile, p: &BasicBallPolyhedron) -> Result<Value, bpoly_core::Error> {
    let d = p.dim();
    let vertices = p.vertices()?;
    let labels = |s: &[usize]| -> Vec<String> { s.iter().map(|&i| inst.label(i)).collect() };
    let mut faces = Vec::with_capacity(d);
    for k in 0..d {
        let list: Vec<Value> = p
            .lattice
            .faces(k)
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut face = Map::new();
                face.insert("centers".into(), json!(labels(s)));
                if k == 0 {
                    face.insert("point".into(), json!(vertices[i].coords()));
                }
                Value::Object(face)
            })
            .collect();
        faces.push(json!({ "dim": k, "faces": list }));
    }
    let mut facets = Map::new();
    for (i, s) in p.lattice.faces(d - 1).iter().enumerate() {
        let c = s[0];
        let on_facet: Vec<usize> = p
            .lattice
            .faces(0)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.contains(&c))
            .map(|(j, _)| j)
            .collect();
        facets.insert(
            inst.label(c),
            json!({
                "index": i,
                "center": p.centers.points()[c].coords(),
                "vertices": on_facet,
            }),
        );
    }
    Ok(json!({
        "dim": d,
        "r": p.r(),
        "f_vector": p.f_vector(),
        "faces": faces,
        "facets": facets,
    }))
}
