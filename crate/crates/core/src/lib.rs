//! Structured tetrahedral meshes of star-shaped domains.
//!
//! A single refinement parameter `p` fixes the mesh: the cube `[-1, 1]³`
//! is split into `8p³` small cubes, each cut into six tetrahedra, and every
//! lattice vertex is mapped onto a homothetic copy of the domain boundary
//! `ρ = f(θ, φ)` along a direction found by equal-angle subdivision.
//!
//! ```
//! use spheromesh::{build, fourlobe, quality_report, OctantSet};
//!
//! let f = fourlobe(0.2).unwrap();
//! let mesh = build(&f, 4, OctantSet::NU).unwrap();
//! assert_eq!(mesh.tets.len(), 6 * 4 * 4 * 4);
//! let q = quality_report(&mesh).unwrap();
//! assert!(q.r_jl > 0.0 && q.r_jl <= 1.0);
//! ```

pub mod angle_solver;
pub mod cli;
pub mod domains;
pub mod error;
pub mod geom;
pub mod io;
pub mod lattice;
pub mod mesh_builder;
pub mod quality;

pub use angle_solver::{subdivide, Direction, SphericalAngles};
pub use domains::{ellipsoid, fourlobe, from_spec, sphere, BoundaryFn};
pub use error::{Error, Result};
pub use lattice::{Decomposition, LatticeIndex, Octant, OctantSet, Permutation, VertexNumber};
pub use mesh_builder::{build, build_unit_cube, conformity, extract_surface, TetMesh, TriMesh};
pub use quality::{joe_liu, min_joe_liu, quality_report, volume_ratio, QualityReport};
