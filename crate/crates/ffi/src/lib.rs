//! C interface to the mesher.
//!
//! Domains and meshes are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`SmStatus`]; on failure a message is kept per thread and can be read
//! with [`sm_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spheromesh::io::{write_obj_surface, write_vtk};
use spheromesh::{BoundaryFn, Error, OctantSet, TetMesh};

/// Octant mask selecting the whole domain.
pub const SM_OCTANTS_ALL: u8 = 0xff;
/// Octant mask selecting the positive octant only.
pub const SM_OCTANT_POSITIVE: u8 = 0x80;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    DomainError = 4,
    DegenerateGeometry = 5,
    IoError = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A boundary function `ρ = f(θ, φ)`.
pub struct SmDomain(BoundaryFn);

/// A generated tetrahedral mesh.
pub struct SmMesh(TetMesh);

/// Mesh quality summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SmQuality {
    /// Cube root of the smallest over the largest element volume.
    pub r_vr: f64,
    /// Smallest normalized Joe–Liu shape parameter.
    pub r_jl: f64,
    pub min_volume: f64,
    pub max_volume: f64,
    pub tet_count: usize,
    pub vertex_count: usize,
    pub negative_volume_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SmStatus, msg: impl Into<String>) -> SmStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> SmStatus {
    let status = match &e {
        Error::InvalidArgument(_) => SmStatus::InvalidArgument,
        Error::Parse(_) => SmStatus::ParseError,
        Error::Domain { .. } => SmStatus::DomainError,
        Error::DegenerateAngle(..) | Error::ZeroVolume { .. } => SmStatus::DegenerateGeometry,
        Error::Io(_) => SmStatus::IoError,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics into [`SmStatus::Panic`].
fn guard(f: impl FnOnce() -> SmStatus) -> SmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SmStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, SmStatus> {
    if s.is_null() {
        return Err(fail(SmStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SmStatus::InvalidArgument, "string argument is not valid UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> SmStatus {
    *out = Box::into_raw(Box::new(value));
    SmStatus::Ok
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(SmStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message for the last failed call on this thread, or null if it
/// succeeded. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a domain from a spec: `sphere`, `ellipsoid:a=<x>`,
/// `fourlobe:b=<x>` or `expr:<expression in theta and phi>`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_domain_parse(spec: *const c_char, out: *mut *mut SmDomain) -> SmStatus {
    guard(|| {
        nonnull!(out);
        *out = ptr::null_mut();
        let spec = match text(spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spheromesh::from_spec(spec) {
            Ok(f) => put(out, SmDomain(f)),
            Err(e) => from_error(e),
        }
    })
}

/// Evaluates the boundary radius at azimuth `theta` and colatitude `phi`.
///
/// # Safety
/// `domain` must come from [`sm_domain_parse`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_domain_eval(domain: *const SmDomain, theta: f64, phi: f64, out: *mut f64) -> SmStatus {
    guard(|| {
        nonnull!(domain, out);
        *out = (*domain).0.eval(theta, phi);
        SmStatus::Ok
    })
}

/// # Safety
/// `domain` must be null or come from [`sm_domain_parse`], and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn sm_domain_free(domain: *mut SmDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

fn octants(mask: u8) -> Result<OctantSet, SmStatus> {
    OctantSet::from_mask(mask).map_err(from_error)
}

/// Meshes `domain` with refinement `p` over the octants in `octant_mask`
/// (bit `4μ1 + 2μ2 + μ3` selects octant `μ`).
///
/// # Safety
/// `domain` must come from [`sm_domain_parse`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_build(
    domain: *const SmDomain,
    p: u32,
    octant_mask: u8,
    out: *mut *mut SmMesh,
) -> SmStatus {
    guard(|| {
        nonnull!(domain, out);
        *out = ptr::null_mut();
        let set = match octants(octant_mask) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spheromesh::build(&(*domain).0, p, set) {
            Ok(m) => put(out, SmMesh(m)),
            Err(e) => from_error(e),
        }
    })
}

/// The reference cube partition without the curved mapping.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_unit_cube(p: u32, octant_mask: u8, out: *mut *mut SmMesh) -> SmStatus {
    guard(|| {
        nonnull!(out);
        *out = ptr::null_mut();
        let set = match octants(octant_mask) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spheromesh::build_unit_cube(p, set) {
            Ok(m) => put(out, SmMesh(m)),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `mesh` must be null or come from a mesh constructor, and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_free(mesh: *mut SmMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// # Safety
/// `mesh` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_counts(mesh: *const SmMesh, vertices: *mut usize, tets: *mut usize) -> SmStatus {
    guard(|| {
        nonnull!(mesh, vertices, tets);
        *vertices = (*mesh).0.vertices.len();
        *tets = (*mesh).0.tets.len();
        SmStatus::Ok
    })
}

/// Copies vertex coordinates as `x y z` triples; `len` counts doubles and
/// must be at least three times the vertex count.
///
/// # Safety
/// `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_copy_vertices(mesh: *const SmMesh, buf: *mut f64, len: usize) -> SmStatus {
    guard(|| {
        nonnull!(mesh, buf);
        let v = &(*mesh).0.vertices;
        if len < 3 * v.len() {
            return fail(SmStatus::BufferTooSmall, format!("need {} doubles, got {len}", 3 * v.len()));
        }
        ptr::copy_nonoverlapping(v.as_ptr().cast::<f64>(), buf, 3 * v.len());
        SmStatus::Ok
    })
}

/// Copies 0-based vertex indices, four per tetrahedron, positively
/// oriented; `len` must be at least four times the tetrahedron count.
///
/// # Safety
/// `buf` must be writable for `len` integers.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_copy_tets(mesh: *const SmMesh, buf: *mut u32, len: usize) -> SmStatus {
    guard(|| {
        nonnull!(mesh, buf);
        let tets = &(*mesh).0.tets;
        if len < 4 * tets.len() {
            return fail(SmStatus::BufferTooSmall, format!("need {} indices, got {len}", 4 * tets.len()));
        }
        let out = std::slice::from_raw_parts_mut(buf, 4 * tets.len());
        for (chunk, t) in out.chunks_exact_mut(4).zip(tets) {
            chunk.copy_from_slice(&t.vertices);
        }
        SmStatus::Ok
    })
}

/// # Safety
/// `mesh` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_quality(mesh: *const SmMesh, out: *mut SmQuality) -> SmStatus {
    guard(|| {
        nonnull!(mesh, out);
        match spheromesh::quality_report(&(*mesh).0) {
            Ok(q) => {
                *out = SmQuality {
                    r_vr: q.r_vr,
                    r_jl: q.r_jl,
                    min_volume: q.min_volume,
                    max_volume: q.max_volume,
                    tet_count: q.tet_count,
                    vertex_count: q.vertex_count,
                    negative_volume_count: q.negative_volume_count,
                };
                SmStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

unsafe fn write_file(
    mesh: *const SmMesh,
    path: *const c_char,
    write: impl FnOnce(&TetMesh, File) -> std::io::Result<()>,
) -> SmStatus {
    guard(|| {
        nonnull!(mesh);
        let path = match text(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let result = File::create(path).and_then(|f| write(&(*mesh).0, f));
        match result {
            Ok(()) => SmStatus::Ok,
            Err(e) => fail(SmStatus::IoError, format!("{path}: {e}")),
        }
    })
}

/// Writes the mesh as a legacy ASCII VTK file.
///
/// # Safety
/// `mesh` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_write_vtk(mesh: *const SmMesh, path: *const c_char) -> SmStatus {
    write_file(mesh, path, write_vtk)
}

/// Writes the boundary surface as a Wavefront OBJ file.
///
/// # Safety
/// `mesh` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_mesh_write_surface_obj(mesh: *const SmMesh, path: *const c_char) -> SmStatus {
    write_file(mesh, path, |m, f| write_obj_surface(&spheromesh::extract_surface(m), f))
}
