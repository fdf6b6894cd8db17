#ifndef SPHEROMESH_H
#define SPHEROMESH_H

#include <stddef.h>
#include <stdint.h>

// Octant mask selecting the whole domain.
#define SM_OCTANTS_ALL 255

// Octant mask selecting the positive octant only.
#define SM_OCTANT_POSITIVE 128

typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_INVALID_ARGUMENT = 2,
  SM_STATUS_PARSE_ERROR = 3,
  SM_STATUS_DOMAIN_ERROR = 4,
  SM_STATUS_DEGENERATE_GEOMETRY = 5,
  SM_STATUS_IO_ERROR = 6,
  SM_STATUS_BUFFER_TOO_SMALL = 7,
  SM_STATUS_PANIC = 8,
} SmStatus;

// A boundary function `ρ = f(θ, φ)`.
typedef struct SmDomain SmDomain;

// A generated tetrahedral mesh.
typedef struct SmMesh SmMesh;

// Mesh quality summary.
typedef struct SmQuality {
  // Cube root of the smallest over the largest element volume.
  double r_vr;
  // Smallest normalized Joe–Liu shape parameter.
  double r_jl;
  double min_volume;
  double max_volume;
  size_t tet_count;
  size_t vertex_count;
  size_t negative_volume_count;
} SmQuality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null if it
// succeeded. The pointer stays valid until the next call on this thread.
const char *sm_last_error_message(void);

// Builds a domain from a spec: `sphere`, `ellipsoid:a=<x>`,
// `fourlobe:b=<x>` or `expr:<expression in theta and phi>`.
//
// # Safety
// `spec` must be a nul-terminated string; `out` must be writable.
enum SmStatus sm_domain_parse(const char *spec, struct SmDomain **out);

// Evaluates the boundary radius at azimuth `theta` and colatitude `phi`.
//
// # Safety
// `domain` must come from [`sm_domain_parse`]; `out` must be writable.
enum SmStatus sm_domain_eval(const struct SmDomain *domain, double theta, double phi, double *out);

// # Safety
// `domain` must be null or come from [`sm_domain_parse`], and not be
// freed twice.
void sm_domain_free(struct SmDomain *domain);

// Meshes `domain` with refinement `p` over the octants in `octant_mask`
// (bit `4μ1 + 2μ2 + μ3` selects octant `μ`).
//
// # Safety
// `domain` must come from [`sm_domain_parse`]; `out` must be writable.
enum SmStatus sm_mesh_build(const struct SmDomain *domain,
                            uint32_t p,
                            uint8_t octant_mask,
                            struct SmMesh **out);

// The reference cube partition without the curved mapping.
//
// # Safety
// `out` must be writable.
enum SmStatus sm_mesh_unit_cube(uint32_t p, uint8_t octant_mask, struct SmMesh **out);

// # Safety
// `mesh` must be null or come from a mesh constructor, and not be freed
// twice.
void sm_mesh_free(struct SmMesh *mesh);

// # Safety
// `mesh` must be a live handle; both outputs must be writable.
enum SmStatus sm_mesh_counts(const struct SmMesh *mesh, size_t *vertices, size_t *tets);

// Copies vertex coordinates as `x y z` triples; `len` counts doubles and
// must be at least three times the vertex count.
//
// # Safety
// `buf` must be writable for `len` doubles.
enum SmStatus sm_mesh_copy_vertices(const struct SmMesh *mesh, double *buf, size_t len);

// Copies 0-based vertex indices, four per tetrahedron, positively
// oriented; `len` must be at least four times the tetrahedron count.
//
// # Safety
// `buf` must be writable for `len` integers.
enum SmStatus sm_mesh_copy_tets(const struct SmMesh *mesh, uint32_t *buf, size_t len);

// # Safety
// `mesh` must be a live handle; `out` must be writable.
enum SmStatus sm_mesh_quality(const struct SmMesh *mesh, struct SmQuality *out);

// Writes the mesh as a legacy ASCII VTK file.
//
// # Safety
// `mesh` must be a live handle; `path` a nul-terminated string.
enum SmStatus sm_mesh_write_vtk(const struct SmMesh *mesh, const char *path);

// Writes the boundary surface as a Wavefront OBJ file.
//
// # Safety
// `mesh` must be a live handle; `path` a nul-terminated string.
enum SmStatus sm_mesh_write_surface_obj(const struct SmMesh *mesh, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHEROMESH_H */
