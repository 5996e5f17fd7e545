//! Sampled-field files (CSV and JSON), evaluation grids, and legacy-VTK
//! export for visualization.
//!
//! All writers are deterministic: fixed field order and shortest
//! round-trip float formatting, so identical inputs give byte-identical
//! files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ballquad::BallQuadrature;
use crate::geometry::{cartesian_to_spherical, SphericalVec};
use crate::{Error, Result};

/// A vector field given by Cartesian samples inside the closed ball.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub radius: f64,
    pub points: Vec<[f64; 3]>,
    pub values: Vec<[f64; 3]>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct FieldEnvelope {
    version: u32,
    radius: f64,
    points: Vec<[f64; 3]>,
    values: Vec<[f64; 3]>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

const BALL_SLACK: f64 = 1e-12;

impl SampledField {
    pub fn new(
        radius: f64,
        points: Vec<[f64; 3]>,
        values: Vec<[f64; 3]>,
        metadata: BTreeMap<String, String>,
    ) -> Result<SampledField> {
        if points.len() != values.len() {
            return Err(Error::InvalidIndex(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let f = SampledField {
            radius,
            points,
            values,
            metadata,
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        for (p, v) in self.points.iter().zip(&self.values) {
            for x in p.iter().chain(v.iter()) {
                if !x.is_finite() {
                    return Err(Error::InvalidIndex(format!(
                        "non-finite sample at point ({}, {}, {})",
                        p[0], p[1], p[2]
                    )));
                }
            }
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if r > self.radius * (1.0 + BALL_SLACK) {
                return Err(Error::OutsideBall {
                    x: p[0],
                    y: p[1],
                    z: p[2],
                    radius: self.radius,
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Evaluation grids for sampling and export.
#[derive(Clone, Copy, Debug)]
pub enum GridSpec {
    /// Uniform box covering `[-R, R]³` (VTK point order: x fastest).
    CartesianBox {
        nx: usize,
        ny: usize,
        nz: usize,
        radius: f64,
    },
    /// The tensor quadrature node set of [`BallQuadrature`]; row-major in
    /// `(r, θ, φ)`, spanning r ∈ (0, R), θ ∈ (0, π), φ ∈ [0, 2π).
    SphericalProduct {
        nr: usize,
        ntheta: usize,
        nphi: usize,
        radius: f64,
    },
}

impl GridSpec {
    pub fn points(&self) -> Vec<[f64; 3]> {
        match *self {
            GridSpec::CartesianBox { nx, ny, nz, radius } => {
                assert!(nx >= 1 && ny >= 1 && nz >= 1);
                let axis = |n: usize, i: usize| {
                    if n == 1 {
                        0.0
                    } else {
                        -radius + 2.0 * radius * i as f64 / (n - 1) as f64
                    }
                };
                let mut pts = Vec::with_capacity(nx * ny * nz);
                for iz in 0..nz {
                    for iy in 0..ny {
                        for ix in 0..nx {
                            pts.push([axis(nx, ix), axis(ny, iy), axis(nz, iz)]);
                        }
                    }
                }
                pts
            }
            GridSpec::SphericalProduct {
                nr,
                ntheta,
                nphi,
                radius,
            } => {
                let q = BallQuadrature::build(radius, nr, ntheta, nphi);
                q.nodes()
                    .map(|n| crate::geometry::spherical_to_cartesian(n.r, n.theta, n.phi))
                    .collect()
            }
        }
    }
}

fn fmt_row(p: &[f64; 3], v: &[f64; 3]) -> String {
    format!(
        "{},{},{},{},{},{}",
        p[0], p[1], p[2], v[0], v[1], v[2]
    )
}

/// Writes the field; `.json` paths get the JSON envelope, anything else the
/// CSV form `x,y,z,vx,vy,vz`.
pub fn write_field(field: &SampledField, path: &Path) -> Result<()> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        let env = FieldEnvelope {
            version: 1,
            radius: field.radius,
            points: field.points.clone(),
            values: field.values.clone(),
            metadata: field.metadata.clone(),
        };
        serde_json::to_string_pretty(&env).expect("field serializes")
    } else {
        let mut s = String::from("x,y,z,vx,vy,vz\n");
        for (p, v) in field.points.iter().zip(&field.values) {
            let _ = writeln!(s, "{}", fmt_row(p, v));
        }
        s
    };
    std::fs::write(path, body)?;
    Ok(())
}

/// Reads a field file (format detected from the content). CSV files carry
/// no radius; the smallest enclosing ball (max |point|) is recorded.
pub fn read_field(path: &Path) -> Result<SampledField> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let env: FieldEnvelope = serde_json::from_str(&text)?;
        SampledField::new(env.radius, env.points, env.values, env.metadata)
    } else {
        read_csv(&text, path)
    }
}

fn read_csv(text: &str, path: &Path) -> Result<SampledField> {
    let path_s = path.display().to_string();
    let err = |line: usize, msg: String| Error::Malformed {
        path: path_s.clone(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty file".into()))?;
    if header.trim() != "x,y,z,vx,vy,vz" {
        return Err(err(
            1,
            format!("expected header 'x,y,z,vx,vy,vz', got '{}'", header.trim()),
        ));
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(err(lineno, format!("expected 6 columns, got {}", cols.len())));
        }
        let mut nums = [0.0f64; 6];
        for (j, c) in cols.iter().enumerate() {
            let v: f64 = c
                .trim()
                .parse()
                .map_err(|_| err(lineno, format!("column {} is not a number: '{c}'", j + 1)))?;
            if !v.is_finite() {
                return Err(err(lineno, format!("non-finite value in column {}", j + 1)));
            }
            nums[j] = v;
        }
        points.push([nums[0], nums[1], nums[2]]);
        values.push([nums[3], nums[4], nums[5]]);
    }
    let radius = points
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt())
        .fold(0.0, f64::max);
    SampledField::new(radius, points, values, BTreeMap::new())
}

/// Reorders a field sampled on the [`GridSpec::SphericalProduct`] grid of
/// `q` into spherical-frame samples consumable by
/// [`crate::spectral::analyze_samples`]; the points must match the grid
/// nodes (same order) to 1e-9·R.
pub fn to_quadrature_samples(
    field: &SampledField,
    q: &BallQuadrature,
) -> Result<Vec<SphericalVec>> {
    if field.len() != q.node_count() {
        return Err(Error::InvalidIndex(format!(
            "field has {} samples but the quadrature grid has {} nodes",
            field.len(),
            q.node_count()
        )));
    }
    let tol = 1e-9 * q.radius;
    let mut out = Vec::with_capacity(field.len());
    for (node, (p, v)) in q.nodes().zip(field.points.iter().zip(&field.values)) {
        let want = crate::geometry::spherical_to_cartesian(node.r, node.theta, node.phi);
        let d2 = (0..3).map(|i| (p[i] - want[i]).powi(2)).sum::<f64>();
        if d2.sqrt() > tol {
            return Err(Error::InvalidIndex(format!(
                "sample point ({}, {}, {}) is not on the quadrature grid",
                p[0], p[1], p[2]
            )));
        }
        let (_, theta, phi) = cartesian_to_spherical(*p);
        out.push(SphericalVec::from_cartesian(*v, theta, phi));
    }
    Ok(out)
}

/// Writes a legacy-VTK STRUCTURED_POINTS file of the evaluator on a
/// Cartesian box; points outside the ball get zero vectors and mask 0.
pub fn export_vtk<F: FnMut([f64; 3]) -> [f64; 3]>(
    grid: GridSpec,
    mut eval: F,
    path: &Path,
) -> Result<()> {
    let GridSpec::CartesianBox { nx, ny, nz, radius } = grid else {
        return Err(Error::InvalidIndex(
            "VTK export requires a Cartesian box grid".into(),
        ));
    };
    let pts = grid.points();
    let spacing = |n: usize| {
        if n == 1 {
            1.0
        } else {
            2.0 * radius / (n - 1) as f64
        }
    };
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    s.push_str("vector field on a ball\n");
    s.push_str("ASCII\n");
    s.push_str("DATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {nx} {ny} {nz}");
    let _ = writeln!(s, "ORIGIN {} {} {}", -radius, -radius, -radius);
    let _ = writeln!(s, "SPACING {} {} {}", spacing(nx), spacing(ny), spacing(nz));
    let _ = writeln!(s, "POINT_DATA {}", pts.len());
    s.push_str("VECTORS field float\n");
    let mut mask = String::new();
    for p in &pts {
        let inside =
            (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() <= radius * (1.0 + BALL_SLACK);
        let v = if inside { eval(*p) } else { [0.0; 3] };
        let _ = writeln!(s, "{} {} {}", v[0], v[1], v[2]);
        let _ = writeln!(mask, "{}", if inside { 1.0 } else { 0.0 });
    }
    s.push_str("SCALARS mask float 1\n");
    s.push_str("LOOKUP_TABLE default\n");
    s.push_str(&mask);
    std::fs::write(path, s)?;
    Ok(())
}
