use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::{DirectConfig, KernelNodes, SphericalMeans};
use crate::error::{Error, Result};
use crate::geometry::{Dim, Point, Vec3};
use crate::quadrature::{BoundaryGrid, SpectralGrid};
use crate::sampling::SampledFunction;

/// `f̂(λ_k, b_j)` on a spectral × boundary grid. Rows are indexed by `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformField {
    pub dim: Dim,
    pub spectral: SpectralGrid,
    pub boundary: BoundaryGrid,
    pub values: Vec<Vec<Complex64>>,
    pub provenance: String,
}

/// `(H_{x_m} f)(λ_k)` on a spectral grid × point list. Rows are indexed by `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct JeftField {
    pub dim: Dim,
    pub spectral: SpectralGrid,
    pub points: Vec<Point>,
    pub values: Vec<Vec<Complex64>>,
    pub provenance: String,
}

pub fn helgason_field(
    f: &SampledFunction,
    spectral: &SpectralGrid,
    boundary: &BoundaryGrid,
    provenance: &str,
) -> Result<TransformField> {
    if f.dim() != boundary.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: boundary.dim(),
        });
    }
    let nodes = KernelNodes::new(f);
    let mut values = vec![Vec::with_capacity(boundary.len()); spectral.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); spectral.len()];
    for b in boundary.points() {
        nodes.sum_many(b.coords(), &spectral.nodes, f.dim().rho(), &mut buf);
        for (row, v) in values.iter_mut().zip(&buf) {
            row.push(*v);
        }
    }
    Ok(TransformField {
        dim: f.dim(),
        spectral: spectral.clone(),
        boundary: boundary.clone(),
        values,
        provenance: provenance.to_string(),
    })
}

/// JEFT values through spherical means about each point; requires an
/// analytic descriptor.
pub fn jeft_field(
    f: &SampledFunction,
    spectral: &SpectralGrid,
    points: &[Point],
    cfg: &DirectConfig,
    provenance: &str,
) -> Result<JeftField> {
    let mut values = vec![Vec::with_capacity(points.len()); spectral.len()];
    for x in points {
        let means = SphericalMeans::new(f, x, cfg, spectral.lambda_max)?;
        for (row, l) in values.iter_mut().zip(&spectral.nodes) {
            row.push(means.jeft(Complex64::new(*l, 0.0)));
        }
    }
    Ok(JeftField {
        dim: f.dim(),
        spectral: spectral.clone(),
        points: points.to_vec(),
        values,
        provenance: provenance.to_string(),
    })
}

fn write_rows<W: Write>(
    out: W,
    index_name: &str,
    lambdas: &[f64],
    values: &[Vec<Complex64>],
) -> Result<()> {
    let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", index_name, "re", "im"])
        .map_err(io)?;
    for (l, row) in lambdas.iter().zip(values) {
        for (j, v) in row.iter().enumerate() {
            w.write_record([
                l.to_string(),
                j.to_string(),
                v.re.to_string(),
                v.im.to_string(),
            ])
            .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Error::Config(format!("csv write failed: {e}")))
}

#[derive(Serialize)]
struct FieldDoc<'a, P: Serialize> {
    dim: usize,
    provenance: &'a str,
    lambdas: &'a [f64],
    lambda_weights: &'a [f64],
    #[serde(flatten)]
    support: P,
    values: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct BoundaryPart<'a> {
    boundary: Vec<&'a Vec3>,
    boundary_weights: &'a [f64],
}

#[derive(Serialize)]
struct PointPart<'a> {
    points: Vec<&'a Vec3>,
}

fn pairs(values: &[Vec<Complex64>]) -> Vec<Vec<[f64; 2]>> {
    values
        .iter()
        .map(|row| row.iter().map(|v| [v.re, v.im]).collect())
        .collect()
}

impl TransformField {
    /// RFC 4180 CSV with header `lambda,b_index,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(out, "b_index", &self.spectral.nodes, &self.values)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = FieldDoc {
            dim: self.dim.as_usize(),
            provenance: &self.provenance,
            lambdas: &self.spectral.nodes,
            lambda_weights: &self.spectral.weights,
            support: BoundaryPart {
                boundary: self.boundary.points().iter().map(|b| b.coords()).collect(),
                boundary_weights: self.boundary.weights(),
            },
            values: pairs(&self.values),
        };
        serde_json::to_value(doc).expect("field serializes")
    }
}

impl JeftField {
    /// RFC 4180 CSV with header `lambda,x_index,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(out, "x_index", &self.spectral.nodes, &self.values)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = FieldDoc {
            dim: self.dim.as_usize(),
            provenance: &self.provenance,
            lambdas: &self.spectral.nodes,
            lambda_weights: &self.spectral.weights,
            support: PointPart {
                points: self.points.iter().map(|p| p.coords()).collect(),
            },
            values: pairs(&self.values),
        };
        serde_json::to_value(doc).expect("field serializes")
    }
}
