use std::collections::BTreeSet;

use serde::Serialize;

use super::TetMesh;
use crate::error::{Error, Result};
use crate::geom::{self, Point3};
use crate::lattice::{LatticeIndex, Octant, Permutation};

/// Local vertex positions of the four faces, each listed so that the
/// omitted vertex is the last entry.
const FACES: [[usize; 4]; 4] = [[1, 2, 3, 0], [0, 2, 3, 1], [0, 1, 3, 2], [0, 1, 2, 3]];

fn sorted3(mut f: [u32; 3]) -> [u32; 3] {
    f.sort_unstable();
    f
}

/// Face incidences sorted by face key: `(face, tet, local face)`.
fn face_incidences(mesh: &TetMesh) -> Vec<([u32; 3], u32, u8)> {
    let mut all = Vec::with_capacity(mesh.tets.len() * 4);
    for (t, tet) in mesh.tets.iter().enumerate() {
        for (lf, f) in FACES.iter().enumerate() {
            let key = sorted3([tet.vertices[f[0]], tet.vertices[f[1]], tet.vertices[f[2]]]);
            all.push((key, t as u32, lf as u8));
        }
    }
    all.sort_unstable();
    all
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceDefect {
    /// Shared by more than two elements.
    Overshared,
    /// Owned by a single element but not on the domain boundary.
    Unmatched,
    /// Repeats a vertex.
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct BadFace {
    pub vertices: [u32; 3],
    pub tets: Vec<usize>,
    pub defect: FaceDefect,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformityReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub tets: usize,
    pub boundary_faces: usize,
    pub interior_faces: usize,
    /// Boundary faces on the outer shell `l = p`.
    pub curved_boundary_faces: usize,
    /// Boundary faces on coordinate planes cut by a partial octant set.
    pub flat_boundary_faces: usize,
    pub bad_faces: Vec<BadFace>,
    pub passed: bool,
}

impl ConformityReport {
    /// `V − E + F − T`; 1 for a mesh of a ball.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 - self.tets as i64
    }
}

/// True when all three vertices lie on one face `x_j = ±1/2` of the
/// reference cube, i.e. the face sits on the outer shell.
fn on_outer_shell(mesh: &TetMesh, face: &[u32; 3]) -> bool {
    let p = mesh.p as i32;
    let idx: Vec<LatticeIndex> = face.iter().map(|&v| mesh.lattice_index(v)).collect();
    (0..3).any(|j| idx.iter().all(|i| i.0[j] == p) || idx.iter().all(|i| i.0[j] == -p))
}

/// True when the face lies on a coordinate plane that bounds a partial
/// octant selection.
fn on_octant_cut(mesh: &TetMesh, face: &[u32; 3]) -> bool {
    if mesh.octants.is_all() {
        return false;
    }
    let idx: Vec<LatticeIndex> = face.iter().map(|&v| mesh.lattice_index(v)).collect();
    (0..3).any(|j| idx.iter().all(|i| i.0[j] == 0))
}

/// Classifies every triangular face by the number of incident elements.
pub fn conformity(mesh: &TetMesh) -> ConformityReport {
    let inc = face_incidences(mesh);
    let mut faces = 0;
    let mut boundary = 0;
    let mut interior = 0;
    let mut curved = 0;
    let mut bad_faces = Vec::new();
    let mut i = 0;
    while i < inc.len() {
        let key = inc[i].0;
        let mut j = i;
        while j < inc.len() && inc[j].0 == key {
            j += 1;
        }
        faces += 1;
        let tets = || inc[i..j].iter().map(|e| e.1 as usize).collect();
        if key[0] == key[1] || key[1] == key[2] {
            bad_faces.push(BadFace { vertices: key, tets: tets(), defect: FaceDefect::Degenerate });
        } else {
            match j - i {
                1 => {
                    boundary += 1;
                    if on_outer_shell(mesh, &key) {
                        curved += 1;
                    } else if !on_octant_cut(mesh, &key) {
                        bad_faces.push(BadFace { vertices: key, tets: tets(), defect: FaceDefect::Unmatched });
                    }
                }
                2 => interior += 1,
                _ => bad_faces.push(BadFace { vertices: key, tets: tets(), defect: FaceDefect::Overshared }),
            }
        }
        i = j;
    }

    let mut edges: Vec<[u32; 2]> = Vec::with_capacity(mesh.tets.len() * 6);
    for tet in &mesh.tets {
        let v = tet.vertices;
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push([v[a].min(v[b]), v[a].max(v[b])]);
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();

    ConformityReport {
        vertices: mesh.vertices.len(),
        edges: edges.len(),
        faces,
        tets: mesh.tets.len(),
        boundary_faces: boundary,
        interior_faces: interior,
        curved_boundary_faces: curved,
        flat_boundary_faces: boundary - curved,
        passed: bad_faces.is_empty(),
        bad_faces,
    }
}

/// Where a triangulation was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    BoundaryShell,
    Interface(InterfaceSector),
}

/// A triangle mesh with compacted vertices that remember their source ids.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Point3>,
    /// Vertex id in the originating [`TetMesh`] for each vertex.
    pub source_ids: Vec<u32>,
    pub triangles: Vec<[u32; 3]>,
    pub provenance: Provenance,
}

impl TriMesh {
    fn from_source(mesh: &TetMesh, faces: &[[u32; 3]], provenance: Provenance) -> Self {
        let used: BTreeSet<u32> = faces.iter().flatten().copied().collect();
        let source_ids: Vec<u32> = used.into_iter().collect();
        let local = |v: u32| source_ids.binary_search(&v).unwrap() as u32;
        let triangles = faces.iter().map(|f| f.map(local)).collect();
        TriMesh {
            vertices: source_ids.iter().map(|&v| mesh.vertices[v as usize]).collect(),
            source_ids,
            triangles,
            provenance,
        }
    }

    pub fn normal(&self, t: usize) -> Point3 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v as usize]);
        geom::cross(geom::sub(b, a), geom::sub(c, a))
    }

    pub fn centroid(&self, t: usize) -> Point3 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v as usize]);
        geom::scale(geom::add(geom::add(a, b), c), 1.0 / 3.0)
    }

    /// Triangles as ids into the originating tetrahedral mesh.
    pub fn source_triangles(&self) -> Vec<[u32; 3]> {
        self.triangles.iter().map(|t| t.map(|v| self.source_ids[v as usize])).collect()
    }
}

/// The triangulation of the curved boundary `∂Ω`, oriented outward.
pub fn extract_surface(mesh: &TetMesh) -> TriMesh {
    let inc = face_incidences(mesh);
    let mut faces = Vec::new();
    let mut i = 0;
    while i < inc.len() {
        let key = inc[i].0;
        let single = i + 1 == inc.len() || inc[i + 1].0 != key;
        if single && on_outer_shell(mesh, &key) {
            let (_, t, lf) = inc[i];
            let tet = mesh.tets[t as usize].vertices;
            let f = FACES[lf as usize];
            let mut tri = [tet[f[0]], tet[f[1]], tet[f[2]]];
            let x = tri.map(|v| mesh.vertices[v as usize]);
            let opposite = mesh.vertices[tet[f[3]] as usize];
            let n = geom::cross(geom::sub(x[1], x[0]), geom::sub(x[2], x[0]));
            if geom::dot(n, geom::sub(x[0], opposite)) < 0.0 {
                tri.swap(1, 2);
            }
            faces.push(tri);
        }
        while i < inc.len() && inc[i].0 == key {
            i += 1;
        }
    }
    TriMesh::from_source(mesh, &faces, Provenance::BoundaryShell)
}

/// Which planar face of `τ_{μα}` an interface sector is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorPlane {
    /// `x_{α3} = 0`, shared with the mirrored octant.
    Coordinate,
    /// `|x_{α1}| = |x_{α2}|`, containing the quadrant bisector and the diagonal.
    QuadrantBisector,
    /// `|x_{α2}| = |x_{α3}|`, containing the axis and the diagonal.
    AxisDiagonal,
}

/// A plane face of a macro-tetrahedron, shared with a neighbouring one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InterfaceSector {
    pub octant: Octant,
    pub perm: Permutation,
    pub plane: SectorPlane,
}

impl InterfaceSector {
    /// The two macro-tetrahedra `(μ, α)` meeting on this sector.
    pub fn sides(&self) -> [(Octant, Permutation); 2] {
        let other = match self.plane {
            SectorPlane::Coordinate => (self.octant.flipped(self.perm.axis(2)), self.perm),
            SectorPlane::QuadrantBisector => (self.octant, self.perm.swapped(0, 1)),
            SectorPlane::AxisDiagonal => (self.octant, self.perm.swapped(1, 2)),
        };
        [(self.octant, self.perm), other]
    }

    /// Whether the lattice point lies in the closed sector.
    pub fn contains(&self, idx: LatticeIndex) -> bool {
        let signed_ok = (0..3).all(|j| idx.0[j] * self.octant.sign(j) >= 0);
        let mag = idx.0.map(|i| i.unsigned_abs());
        let [a1, a2, a3] = self.perm.axes();
        let ordered = mag[a1] >= mag[a2] && mag[a2] >= mag[a3];
        let on_plane = match self.plane {
            SectorPlane::Coordinate => mag[a3] == 0,
            SectorPlane::QuadrantBisector => mag[a1] == mag[a2],
            SectorPlane::AxisDiagonal => mag[a2] == mag[a3],
        };
        signed_ok && ordered && on_plane
    }

    /// Sector-local `(l, m)` of a lattice point: the two nonzero-free
    /// coordinates that parametrize the plane.
    pub fn local_coords(&self, idx: LatticeIndex) -> (u32, u32) {
        let mag = idx.0.map(|i| i.unsigned_abs());
        let [a1, a2, a3] = self.perm.axes();
        match self.plane {
            SectorPlane::Coordinate => (mag[a1], mag[a2]),
            SectorPlane::QuadrantBisector => (mag[a1], mag[a3]),
            SectorPlane::AxisDiagonal => (mag[a1], mag[a2]),
        }
    }
}

fn sector_faces<'a>(
    mesh: &'a TetMesh,
    sector: &'a InterfaceSector,
    owner: Option<(Octant, Permutation)>,
) -> impl Iterator<Item = [u32; 3]> + 'a {
    mesh.tets
        .iter()
        .filter(move |t| owner.is_none_or(|(o, p)| t.octant == o && t.macro_tet == p))
        .flat_map(|t| FACES.iter().map(move |f| [t.vertices[f[0]], t.vertices[f[1]], t.vertices[f[2]]]))
        .filter(move |f| f.iter().all(|&v| sector.contains(mesh.lattice_index(v))))
        .map(sorted3)
}

/// The faces lying in `sector` contributed by the elements of one
/// macro-tetrahedron, as sorted vertex-id triples.
pub fn trace_faces_of(
    mesh: &TetMesh,
    sector: &InterfaceSector,
    owner: (Octant, Permutation),
) -> BTreeSet<[u32; 3]> {
    sector_faces(mesh, sector, Some(owner)).collect()
}

/// The trace of the mesh on a macro-tetrahedron interface.
pub fn interface_trace(mesh: &TetMesh, sector: &InterfaceSector) -> Result<TriMesh> {
    if !mesh.octants.contains(sector.octant) {
        return Err(Error::invalid(format!(
            "interface sector in octant {} is not part of the mesh",
            sector.octant
        )));
    }
    let faces: Vec<[u32; 3]> = sector_faces(mesh, sector, None)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(TriMesh::from_source(mesh, &faces, Provenance::Interface(*sector)))
}
