//! Equal-angle subdivision on the unit direction sphere.
//!
//! The subdividing direction `U` of the angle between `M` and `N` is the
//! unit vector lying on two cones: the cone of axis `M` with half-aperture
//! `r β / q` and the cone of axis `N` with half-aperture `(q − r) β / q`.
//! Eliminating two unknowns with the two linear cone equations leaves a
//! quadratic in the third whose discriminant vanishes, so its root is read
//! off as `−b / (2a)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{self, Point3};

/// Below this `|M × N|` the two directions are treated as parallel.
const PARALLEL_EPS: f64 = 1e-14;

/// A unit 3-vector `(u, v, w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    pub const X: Direction = Direction([1.0, 0.0, 0.0]);
    pub const Y: Direction = Direction([0.0, 1.0, 0.0]);
    pub const Z: Direction = Direction([0.0, 0.0, 1.0]);

    /// Normalizes `v`; `None` for a zero or non-finite vector.
    pub fn new(v: Point3) -> Option<Self> {
        let n = geom::norm(v);
        if n > 0.0 && n.is_finite() {
            Some(Direction(geom::scale(v, 1.0 / n)))
        } else {
            None
        }
    }

    /// Wraps a vector already known to be unit length.
    pub fn from_unit(v: Point3) -> Self {
        debug_assert!((geom::norm2(v) - 1.0).abs() < 1e-12, "not unit: {v:?}");
        Direction(v)
    }

    pub fn as_array(&self) -> Point3 {
        self.0
    }

    pub fn u(&self) -> f64 {
        self.0[0]
    }

    pub fn v(&self) -> f64 {
        self.0[1]
    }

    pub fn w(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        geom::dot(self.0, other.0)
    }

    /// Angle to `other` in `[0, π]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let c = geom::cross(self.0, other.0);
        geom::norm(c).atan2(self.dot(other))
    }
}

/// Azimuth `theta ∈ [0, 2π)` and colatitude `phi ∈ [0, π]`, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngles {
    pub theta: f64,
    pub phi: f64,
}

pub fn angles_to_dir(a: SphericalAngles) -> Direction {
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    Direction([sp * ct, sp * st, cp])
}

/// Inverse of [`angles_to_dir`]; the azimuth is 0 on the `x3` axis.
pub fn dir_to_angles(d: Direction) -> SphericalAngles {
    let [u, v, w] = d.0;
    let rho = u.hypot(v);
    let phi = rho.atan2(w);
    if u == 0.0 && v == 0.0 {
        return SphericalAngles { theta: 0.0, phi };
    }
    let mut theta = v.atan2(u);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    if theta >= 2.0 * PI {
        theta = 0.0;
    }
    SphericalAngles { theta, phi }
}

/// The direction splitting the angle `MON` into `r β / q` next to `M` and
/// `(q − r) β / q` next to `N`.
pub fn subdivide(m: Direction, n: Direction, r: u32, q: u32) -> Result<Direction> {
    if q == 0 || r > q {
        return Err(Error::invalid(format!("subdivision index r={r} of q={q} out of range")));
    }
    if r == 0 {
        return Ok(m);
    }
    if r == q {
        return Ok(n);
    }
    let (mv, nv) = (m.0, n.0);
    let axis = geom::cross(mv, nv);
    let sin_beta = geom::norm(axis);
    let cos_beta = geom::dot(mv, nv);
    if sin_beta <= PARALLEL_EPS {
        if cos_beta > 0.0 {
            return Ok(m);
        }
        return Err(Error::DegenerateAngle(mv, nv));
    }
    let beta = sin_beta.atan2(cos_beta);
    let beta_m = r as f64 * beta / q as f64;
    let beta_n = (q - r) as f64 * beta / q as f64;
    let (dm, dn) = (beta_m.cos(), beta_n.cos());

    // The free unknown t is the component whose 2x2 elimination minor,
    // (M × N)_k, is largest.
    let k = (0..3)
        .max_by(|&a, &b| axis[a].abs().total_cmp(&axis[b].abs()))
        .unwrap();
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let pivot = axis[k];

    // x_i = c_i + s_i t and x_j = c_j + s_j t from the two cone equations.
    let c_i = (dm * nv[j] - dn * mv[j]) / pivot;
    let c_j = (mv[i] * dn - nv[i] * dm) / pivot;
    let s_i = axis[i] / pivot;
    let s_j = axis[j] / pivot;

    // a t² + b t + c = 0 with a double root.
    let a = s_i * s_i + s_j * s_j + 1.0;
    let b = 2.0 * (c_i * s_i + c_j * s_j);
    let t = -b / (2.0 * a);

    let mut u = [0.0; 3];
    u[k] = t;
    u[i] = c_i + s_i * t;
    u[j] = c_j + s_j * t;
    Direction::new(u).ok_or(Error::DegenerateAngle(mv, nv))
}
