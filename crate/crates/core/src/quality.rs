//! Volume-ratio and normalized Joe–Liu quality metrics, and the
//! refinement / distortion study tables built from them.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::domains::{ellipsoid, fourlobe, sphere, BoundaryFn};
use crate::error::{Error, Result};
use crate::geom::{self, Point3};
use crate::lattice::OctantSet;
use crate::mesh_builder::{build, TetMesh};

/// `2 · 3^(5/6)`, which makes the Joe–Liu parameter 1 for a regular tetrahedron.
fn joe_liu_scale() -> f64 {
    2.0 * 3f64.powf(5.0 / 6.0)
}

/// Signed volume: one sixth of the triple product of the edges from `p0`.
pub fn tet_volume(p0: Point3, p1: Point3, p2: Point3, p3: Point3) -> f64 {
    geom::det3(geom::sub(p1, p0), geom::sub(p2, p0), geom::sub(p3, p0)) / 6.0
}

/// Normalized Joe–Liu parameter `2·3^(5/6)·|V|^(1/3) / (Σ|e_i|²)^(1/2)`.
///
/// Returns 0 for a degenerate element.
pub fn joe_liu(t: &[Point3; 4]) -> f64 {
    let v = tet_volume(t[0], t[1], t[2], t[3]).abs();
    let mut edges2 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            edges2 += geom::norm2(geom::sub(t[a], t[b]));
        }
    }
    if v == 0.0 || edges2 == 0.0 {
        return 0.0;
    }
    joe_liu_scale() * v.cbrt() / edges2.sqrt()
}

fn volume_extremes(mesh: &TetMesh) -> Result<(f64, f64, usize)> {
    if mesh.tets.is_empty() {
        return Err(Error::invalid("mesh has no elements"));
    }
    let (min, max, min_at) = (0..mesh.tets.len())
        .into_par_iter()
        .map(|t| {
            let v = mesh.signed_volume(t).abs();
            (v, v, t)
        })
        .reduce(
            || (f64::INFINITY, 0.0, usize::MAX),
            |a, b| {
                let (lo, at) = if b.0 < a.0 || (b.0 == a.0 && b.2 < a.2) { (b.0, b.2) } else { (a.0, a.2) };
                (lo, a.1.max(b.1), at)
            },
        );
    Ok((min, max, min_at))
}

/// `(min |V| / max |V|)^(1/3)`.
pub fn volume_ratio(mesh: &TetMesh) -> Result<f64> {
    let (min, max, at) = volume_extremes(mesh)?;
    if min == 0.0 {
        return Err(Error::ZeroVolume { element: at });
    }
    Ok((min / max).cbrt())
}

/// Minimum of [`joe_liu`] over the elements.
pub fn min_joe_liu(mesh: &TetMesh) -> Result<f64> {
    if mesh.tets.is_empty() {
        return Err(Error::invalid("mesh has no elements"));
    }
    Ok((0..mesh.tets.len())
        .into_par_iter()
        .map(|t| joe_liu(&mesh.tet_points(t)))
        .reduce(|| f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Serialize)]
pub struct QualityReport {
    pub domain: String,
    pub p: u32,
    pub octants: String,
    pub r_vr: f64,
    pub r_jl: f64,
    pub tet_count: usize,
    pub vertex_count: usize,
    pub min_volume: f64,
    pub max_volume: f64,
    pub negative_volume_count: usize,
}

pub fn quality_report(mesh: &TetMesh) -> Result<QualityReport> {
    let (min, max, _) = volume_extremes(mesh)?;
    Ok(QualityReport {
        domain: mesh.description.clone(),
        p: mesh.p,
        octants: mesh.octants.to_string(),
        r_vr: volume_ratio(mesh)?,
        r_jl: min_joe_liu(mesh)?,
        tet_count: mesh.tets.len(),
        vertex_count: mesh.vertices.len(),
        min_volume: min,
        max_volume: max,
        negative_volume_count: mesh.inverted.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// Sphere under refinement.
    Refinement = 1,
    /// Ellipsoids of decreasing aspect ratio.
    Ellipsoids = 2,
    /// The four-lobed concave family.
    Concave = 3,
}

impl TryFrom<u8> for TableId {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(TableId::Refinement),
            2 => Ok(TableId::Ellipsoids),
            3 => Ok(TableId::Concave),
            _ => Err(Error::invalid(format!("table id must be 1, 2 or 3, got {id}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Count(usize),
    Value(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

/// A study table: one column per parameter value, one row per measure.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn row(&self, label: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn value(&self, label: &str, column: usize) -> Option<f64> {
        match self.row(label)?.cells.get(column)? {
            Cell::Value(v) => Some(*v),
            Cell::Count(c) => Some(*c as f64),
        }
    }

    /// Comma-separated, header row first, six decimals, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.parameter);
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.label);
            for cell in &row.cells {
                match cell {
                    Cell::Count(c) => write!(out, ",{c}").unwrap(),
                    Cell::Value(v) => write!(out, ",{v:.6}").unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn octant_metrics(f: &BoundaryFn, p: u32) -> Result<(f64, f64)> {
    let mesh = build(f, p, OctantSet::NU)?;
    Ok((volume_ratio(&mesh)?, min_joe_liu(&mesh)?))
}

/// Family study at `p ∈ {10, 50}`: one column per domain.
fn family_table(parameter: &str, columns: Vec<String>, domains: Vec<BoundaryFn>) -> Result<Table> {
    let mut coarse = Vec::new();
    let mut fine = Vec::new();
    for f in &domains {
        coarse.push(octant_metrics(f, 10)?);
        fine.push(octant_metrics(f, 50)?);
    }
    let row = |label: &str, data: &[(f64, f64)], jl: bool| Row {
        label: label.to_string(),
        cells: data.iter().map(|&(vr, j)| Cell::Value(if jl { j } else { vr })).collect(),
    };
    Ok(Table {
        parameter: parameter.to_string(),
        columns,
        rows: vec![
            row("r_vr p=10", &coarse, false),
            row("r_vr p=50", &fine, false),
            row("r_jl p=10", &coarse, true),
            row("r_jl p=50", &fine, true),
        ],
    })
}

pub const TABLE1_P: [u32; 5] = [10, 20, 30, 40, 50];
pub const TABLE2_A: [f64; 6] = [1.0, 0.8, 0.6, 0.4, 0.2, 0.1];
pub const TABLE3_B: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.4];

/// Recomputes one of the three study tables on the positive octant.
pub fn replicate_table(id: TableId) -> Result<Table> {
    match id {
        TableId::Refinement => {
            let mut vr = Vec::new();
            let mut jl = Vec::new();
            let mut counts = Vec::new();
            for p in TABLE1_P {
                let mesh = build(&sphere(), p, OctantSet::NU)?;
                counts.push(Cell::Count(mesh.tets.len()));
                vr.push(Cell::Value(volume_ratio(&mesh)?));
                jl.push(Cell::Value(min_joe_liu(&mesh)?));
            }
            Ok(Table {
                parameter: "p".into(),
                columns: TABLE1_P.iter().map(|p| p.to_string()).collect(),
                rows: vec![
                    Row { label: "6p^3".into(), cells: counts },
                    Row { label: "r_vr".into(), cells: vr },
                    Row { label: "r_jl".into(), cells: jl },
                ],
            })
        }
        TableId::Ellipsoids => family_table(
            "a",
            TABLE2_A.iter().map(|a| format!("{a:.1}")).collect(),
            TABLE2_A.iter().map(|&a| ellipsoid(a)).collect::<Result<_>>()?,
        ),
        TableId::Concave => family_table(
            "b",
            TABLE3_B.iter().map(|b| format!("{b:.1}")).collect(),
            TABLE3_B.iter().map(|&b| fourlobe(b)).collect::<Result<_>>()?,
        ),
    }
}
