//! Text exporters: legacy VTK, OBJ surfaces, JSON reports and CSV tables.
//!
//! Floats are written in the shortest form that round-trips, so output is
//! byte-stable and lossless.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::mesh_builder::{TetMesh, TriMesh};
use crate::quality::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    VtkLegacy,
    ObjSurface,
    ReportJson,
    TableCsv,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::VtkLegacy => "vtk",
            ExportFormat::ObjSurface => "obj",
            ExportFormat::ReportJson => "json",
            ExportFormat::TableCsv => "csv",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::VtkLegacy => "vtk-legacy",
            ExportFormat::ObjSurface => "obj-surface",
            ExportFormat::ReportJson => "report-json",
            ExportFormat::TableCsv => "table-csv",
        })
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vtk" | "vtk-legacy" => Ok(ExportFormat::VtkLegacy),
            "obj" | "obj-surface" => Ok(ExportFormat::ObjSurface),
            "json" | "report-json" => Ok(ExportFormat::ReportJson),
            "csv" | "table-csv" => Ok(ExportFormat::TableCsv),
            _ => Err(format!("unknown export format `{s}`")),
        }
    }
}

fn point<W: Write>(out: &mut W, v: &[f64; 3]) -> io::Result<()> {
    writeln!(out, "{:?} {:?} {:?}", v[0], v[1], v[2])
}

/// Legacy ASCII unstructured grid with the macro-tetrahedron code and the
/// octant ordinal as cell scalars.
pub fn write_vtk<W: Write>(mesh: &TetMesh, sink: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(sink);
    let n = mesh.tets.len();
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "{} p={}", mesh.description, mesh.p)?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.vertices.len())?;
    for v in &mesh.vertices {
        point(&mut out, v)?;
    }
    writeln!(out, "CELLS {} {}", n, 5 * n)?;
    for t in &mesh.tets {
        let [a, b, c, d] = t.vertices;
        writeln!(out, "4 {a} {b} {c} {d}")?;
    }
    writeln!(out, "CELL_TYPES {n}")?;
    for _ in 0..n {
        writeln!(out, "10")?;
    }
    writeln!(out, "CELL_DATA {n}")?;
    writeln!(out, "SCALARS macro_tet int 1")?;
    writeln!(out, "LOOKUP_TABLE default")?;
    for t in &mesh.tets {
        writeln!(out, "{}", t.macro_tet.code())?;
    }
    writeln!(out, "SCALARS octant int 1")?;
    writeln!(out, "LOOKUP_TABLE default")?;
    for t in &mesh.tets {
        writeln!(out, "{}", t.octant.ordinal())?;
    }
    out.flush()
}

/// `v` lines then `f` lines with 1-based indices.
pub fn write_obj_surface<W: Write>(surface: &TriMesh, sink: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(sink);
    for v in &surface.vertices {
        writeln!(out, "v {:?} {:?} {:?}", v[0], v[1], v[2])?;
    }
    for [a, b, c] in &surface.triangles {
        writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1)?;
    }
    out.flush()
}

/// Pretty JSON in field declaration order, newline terminated.
pub fn write_json<T: Serialize, W: Write>(value: &T, sink: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(sink);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

pub fn write_csv<W: Write>(table: &Table, mut sink: W) -> io::Result<()> {
    sink.write_all(table.to_csv().as_bytes())?;
    sink.flush()
}
