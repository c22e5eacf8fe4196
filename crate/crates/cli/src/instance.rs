//! Instance files: `{"dim", "r", "points", "labels"}` in that key order.

use std::fmt::Write as _;
use std::path::Path;

use bpoly_core::Point;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dim: usize,
    pub r: f64,
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl InstanceFile {
    pub fn new(r: f64, points: Vec<Point>) -> Self {
        let dim = points.first().map_or(0, Point::dim);
        InstanceFile {
            dim,
            r,
            points: points.into_iter().map(Point::into_coords).collect(),
            labels: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        inst.check()?;
        Ok(inst)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn check(&self) -> Result<(), CliError> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(CliError::Parse(format!("r must be positive, got {}", self.r)));
        }
        if let Some(k) = self.points.iter().position(|p| p.len() != self.dim) {
            return Err(CliError::Parse(format!(
                "point {k} has {} coordinates, expected {}",
                self.points[k].len(),
                self.dim
            )));
        }
        if self.points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Parse("coordinates must be finite".into()));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.points.len() {
                return Err(CliError::Parse(format!(
                    "{} labels for {} points",
                    labels.len(),
                    self.points.len()
                )));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<Point> {
        self.points.iter().cloned().map(Point::new).collect()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("c{i}"),
        }
    }

    /// Canonical text: fixed key order, one point per line, 17 significant digits.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"dim\": {},", self.dim);
        let _ = writeln!(out, "  \"r\": {},", fmt_float(self.r));
        out.push_str("  \"points\": [");
        for (k, p) in self.points.iter().enumerate() {
            out.push_str(if k == 0 { "\n" } else { ",\n" });
            let coords: Vec<String> = p.iter().map(|&x| fmt_float(x)).collect();
            let _ = write!(out, "    [{}]", coords.join(", "));
        }
        out.push_str(if self.points.is_empty() { "]" } else { "\n  ]" });
        if let Some(labels) = &self.labels {
            out.push_str(",\n  \"labels\": [");
            let quoted: Vec<String> = labels
                .iter()
                .map(|l| serde_json::to_string(l).expect("strings serialize"))
                .collect();
            out.push_str(&quoted.join(", "));
            out.push(']');
        }
        out.push_str("\n}\n");
        out
    }
}

pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
