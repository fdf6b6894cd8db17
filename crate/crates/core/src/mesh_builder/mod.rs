//! Maps the reference cube partition onto a star-shaped domain.
//!
//! Each lattice vertex `(l, m, n)` of macro-tetrahedron `(μ, α)` is placed
//! on the shell `(l/p)·∂Ω` along a direction obtained by two equal-angle
//! subdivisions between the three anchor directions of the macro
//! tetrahedron: the axis `x_{α1}`, the bisector of the `(x_{α1}, x_{α2})`
//! quadrant, and the octant diagonal. Connectivity is copied verbatim from
//! the cube partition.

mod topology;

use rayon::prelude::*;

pub use topology::{
    conformity, extract_surface, interface_trace, trace_faces_of, BadFace, ConformityReport, FaceDefect,
    InterfaceSector, Provenance, SectorPlane, TriMesh,
};

use crate::angle_solver::{dir_to_angles, subdivide, Direction};
use crate::domains::BoundaryFn;
use crate::error::{Error, Result};
use crate::geom::{self, Point3};
use crate::lattice::{
    self, cube_connectivity, decompose, index_from_number, lattice_coords, Decomposition,
    LatticeIndex, Octant, OctantSet, Permutation, VertexNumber,
};

const NO_VERTEX: u32 = u32::MAX;

/// One tetrahedron, referencing contiguous vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tet {
    pub vertices: [u32; 4],
    pub octant: Octant,
    pub macro_tet: Permutation,
}

#[derive(Debug, Clone)]
pub struct TetMesh {
    pub p: u32,
    pub octants: OctantSet,
    pub description: String,
    pub vertices: Vec<Point3>,
    /// Structured number of each vertex, ascending.
    pub numbers: Vec<VertexNumber>,
    pub tets: Vec<Tet>,
    /// Elements whose mapped signed volume is not positive.
    pub inverted: Vec<usize>,
    id_of_number: Vec<u32>,
}

impl TetMesh {
    pub fn vertex_id(&self, k: VertexNumber) -> Option<u32> {
        let slot = k.0.checked_sub(1)? as usize;
        self.id_of_number.get(slot).copied().filter(|&id| id != NO_VERTEX)
    }

    pub fn lattice_index(&self, id: u32) -> LatticeIndex {
        index_from_number(self.numbers[id as usize], self.p).expect("stored number is valid")
    }

    pub fn tet_points(&self, t: usize) -> [Point3; 4] {
        self.tets[t].vertices.map(|v| self.vertices[v as usize])
    }

    pub fn signed_volume(&self, t: usize) -> f64 {
        let [a, b, c, d] = self.tet_points(t);
        geom::det3(geom::sub(b, a), geom::sub(c, a), geom::sub(d, a)) / 6.0
    }
}

/// Axis, quadrant-bisector and octant-diagonal directions of `τ_{μα}`.
pub fn anchor_directions(octant: Octant, perm: Permutation) -> [Direction; 3] {
    let sigma = octant.signs().map(f64::from);
    let (a1, a2) = (perm.axis(0), perm.axis(1));
    let mut d1 = [0.0; 3];
    d1[a1] = sigma[a1];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut d2 = [0.0; 3];
    d2[a1] = sigma[a1] * h;
    d2[a2] = sigma[a2] * h;
    let s = 1.0 / 3f64.sqrt();
    let d3 = geom::scale(sigma, s);
    [Direction::from_unit(d1), Direction::from_unit(d2), Direction::from_unit(d3)]
}

/// Unit direction of the vertex `(l, m, n)` within its macro-tetrahedron.
fn vertex_direction(dec: &Decomposition) -> Result<Direction> {
    let [d1, d2, d3] = anchor_directions(dec.octant, dec.perm);
    let along_face = subdivide(d1, d2, dec.m, dec.l)?;
    if dec.m == 0 {
        return Ok(along_face);
    }
    let along_diagonal = subdivide(d1, d3, dec.m, dec.l)?;
    subdivide(along_face, along_diagonal, dec.n, dec.m)
}

/// Position of a decomposed vertex in the domain bounded by `f`.
pub fn vertex_position(dec: &Decomposition, p: u32, f: &BoundaryFn) -> Result<Point3> {
    if p == 0 || !dec.is_valid(p) {
        return Err(Error::invalid(format!(
            "decomposition (l,m,n)=({},{},{}) invalid for p={p}",
            dec.l, dec.m, dec.n
        )));
    }
    if dec.l == 0 {
        return Ok([0.0; 3]);
    }
    let u = vertex_direction(dec)?;
    let a = dir_to_angles(u);
    let rho = f.eval(a.theta, a.phi);
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain { theta: a.theta, phi: a.phi, value: rho });
    }
    Ok(geom::scale(u.as_array(), dec.l as f64 / p as f64 * rho))
}

enum Mapping<'a> {
    UnitCube,
    Domain(&'a BoundaryFn),
}

/// Meshes the domain bounded by `f` over the selected octants.
pub fn build(f: &BoundaryFn, p: u32, octants: OctantSet) -> Result<TetMesh> {
    assemble(Mapping::Domain(f), p, octants)
}

/// The reference cube partition itself, with vertices at their lattice
/// coordinates.
pub fn build_unit_cube(p: u32, octants: OctantSet) -> Result<TetMesh> {
    assemble(Mapping::UnitCube, p, octants)
}

fn assemble(mapping: Mapping<'_>, p: u32, octants: OctantSet) -> Result<TetMesh> {
    let cube = cube_connectivity(p, octants)?;

    let total = lattice::vertex_count(p) as usize;
    let mut id_of_number = vec![NO_VERTEX; total];
    for t in &cube {
        for k in t.vertices {
            id_of_number[k.0 as usize - 1] = 0;
        }
    }
    let mut numbers = Vec::new();
    for (slot, id) in id_of_number.iter_mut().enumerate() {
        if *id != NO_VERTEX {
            *id = numbers.len() as u32;
            numbers.push(VertexNumber(slot as u64 + 1));
        }
    }

    let vertices = numbers
        .par_iter()
        .map(|&k| {
            let dec = decompose(k, p)?;
            match &mapping {
                Mapping::UnitCube => lattice_coords(&dec, p),
                Mapping::Domain(f) => vertex_position(&dec, p, f),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let tets: Vec<Tet> = cube
        .iter()
        .map(|t| Tet {
            vertices: t.vertices.map(|k| id_of_number[k.0 as usize - 1]),
            octant: t.octant,
            macro_tet: t.macro_tet,
        })
        .collect();

    let description = match &mapping {
        Mapping::UnitCube => "unit cube".to_string(),
        Mapping::Domain(f) => f.description(),
    };
    let mut mesh = TetMesh {
        p,
        octants,
        description,
        vertices,
        numbers,
        tets,
        inverted: Vec::new(),
        id_of_number,
    };
    mesh.inverted = (0..mesh.tets.len())
        .into_par_iter()
        .filter(|&t| mesh.signed_volume(t) <= 0.0)
        .collect();
    if !mesh.inverted.is_empty() {
        log::warn!(
            "{} of {} elements are inverted (domain '{}', p={p})",
            mesh.inverted.len(),
            mesh.tets.len(),
            mesh.description
        );
    }
    Ok(mesh)
}
