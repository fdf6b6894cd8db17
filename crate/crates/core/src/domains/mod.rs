//! Boundary functions `ρ = f(θ, φ)` of star-shaped domains.
//!
//! `θ` is the azimuth in `[0, 2π)` and `φ` the colatitude in `[0, π]`.

mod expr;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use expr::{parse_expr, BinOp, Constant, Expr, Func, ParseError, Var};

use crate::error::{Error, Result};

type CustomFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

#[derive(Clone)]
enum Shape {
    Sphere,
    Ellipsoid { a: f64 },
    FourLobe { b: f64 },
    Expr { source: String, tree: Arc<Expr> },
    Custom { name: String, f: Arc<CustomFn> },
}

/// An immutable, thread-safe boundary radius function.
#[derive(Clone)]
pub struct BoundaryFn {
    shape: Shape,
    scale: f64,
}

impl fmt::Debug for BoundaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BoundaryFn").field(&self.description()).finish()
    }
}

impl BoundaryFn {
    fn new(shape: Shape) -> Self {
        BoundaryFn { shape, scale: 1.0 }
    }

    #[inline]
    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        let rho = match &self.shape {
            Shape::Sphere => 1.0,
            Shape::Ellipsoid { a } => {
                let (s, c) = phi.sin_cos();
                (s * s / (a * a) + c * c).powf(-0.5)
            }
            Shape::FourLobe { b } => (1.0 + b * (4.0 * theta).cos()) * (1.0 + b * (4.0 * phi).cos()),
            Shape::Expr { tree, .. } => tree.eval(theta, phi),
            Shape::Custom { f, .. } => f(theta, phi),
        };
        if self.scale == 1.0 {
            rho
        } else {
            self.scale * rho
        }
    }

    pub fn description(&self) -> String {
        let base = match &self.shape {
            Shape::Sphere => "sphere".to_string(),
            Shape::Ellipsoid { a } => format!("ellipsoid a={a}"),
            Shape::FourLobe { b } => format!("fourlobe b={b}"),
            Shape::Expr { source, .. } => format!("expr {}", source.trim()),
            Shape::Custom { name, .. } => name.clone(),
        };
        if self.scale == 1.0 {
            base
        } else {
            format!("{} * ({base})", self.scale)
        }
    }

    /// `c · f`, for `c > 0`.
    pub fn scaled(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!("scale factor must be positive, got {c}")));
        }
        self.scale *= c;
        Ok(self)
    }

    /// The parsed tree, for expression-backed functions.
    pub fn expr(&self) -> Option<&Expr> {
        match &self.shape {
            Shape::Expr { tree, .. } => Some(tree),
            _ => None,
        }
    }
}

/// `f ≡ 1`.
pub fn sphere() -> BoundaryFn {
    BoundaryFn::new(Shape::Sphere)
}

/// `x1²/a² + x2²/a² + x3² ≤ 1`.
pub fn ellipsoid(a: f64) -> Result<BoundaryFn> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid(format!("nonpositive semi-axis a={a}; the ellipsoid semi-axis must be positive")));
    }
    Ok(BoundaryFn::new(Shape::Ellipsoid { a }))
}

/// `(1 + b cos 4θ)(1 + b cos 4φ)`.
pub fn fourlobe(b: f64) -> Result<BoundaryFn> {
    if !b.is_finite() || b.abs() >= 1.0 {
        return Err(Error::invalid(format!(
            "fourlobe parameter must satisfy |b| < 1 for a positive radius, got {b}"
        )));
    }
    if !(0.0..=0.4).contains(&b) {
        log::warn!("fourlobe b={b} is outside the tested range [0, 0.4]");
    }
    Ok(BoundaryFn::new(Shape::FourLobe { b }))
}

/// Parses an expression in `theta` and `phi`.
pub fn parse(source: &str) -> Result<BoundaryFn> {
    let tree = parse_expr(source)?;
    Ok(BoundaryFn::new(Shape::Expr { source: source.to_string(), tree: Arc::new(tree) }))
}

/// Wraps an arbitrary closure.
pub fn custom<F>(name: impl Into<String>, f: F) -> BoundaryFn
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    BoundaryFn::new(Shape::Custom { name: name.into(), f: Arc::new(f) })
}

/// Parses a command-line domain spec: `sphere`, `ellipsoid:a=<x>`,
/// `fourlobe:b=<x>` or `expr:<expression>`.
pub fn from_spec(spec: &str) -> Result<BoundaryFn> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k.trim(), Some(r)),
        None => (spec.trim(), None),
    };
    let param = |name: &str| -> Result<f64> {
        let rest = rest.ok_or_else(|| Error::invalid(format!("domain '{kind}' needs {name}=<value>")))?;
        let (key, value) = rest
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("expected {name}=<value>, got '{rest}'")))?;
        if key.trim() != name {
            return Err(Error::invalid(format!("unknown parameter '{}' for domain '{kind}'", key.trim())));
        }
        value
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("parameter {name} is not a number: '{}'", value.trim())))
    };
    match kind {
        "sphere" if rest.is_none() => Ok(sphere()),
        "ellipsoid" => ellipsoid(param("a")?),
        "fourlobe" => fourlobe(param("b")?),
        "expr" => parse(rest.unwrap_or("")),
        _ => Err(Error::invalid(format!(
            "unknown domain '{spec}' (expected sphere, ellipsoid:a=<x>, fourlobe:b=<x> or expr:<expression>)"
        ))),
    }
}

/// Sampled range and sanity of a boundary function.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub description: String,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
    pub nonpositive_count: usize,
    /// False when `f` at a pole varies with `θ` by more than `1e-9` relative.
    /// Meshing is unaffected because pole vertices are evaluated at `θ = 0`.
    pub pole_consistent: bool,
    pub passed: bool,
    pub issues: Vec<String>,
}

/// Evaluates `f` on a `samples × (samples + 1)` grid covering
/// `θ ∈ [0, 2π)` and `φ ∈ [0, π]`, poles included.
pub fn validate(f: &BoundaryFn, samples: usize) -> Result<ValidationReport> {
    if samples == 0 {
        return Err(Error::invalid("validation needs at least one sample"));
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut nonpositive = 0usize;
    let mut first_bad = None;
    let mut pole_range = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    for i in 0..samples {
        let theta = 2.0 * PI * i as f64 / samples as f64;
        for j in 0..=samples {
            let phi = PI * j as f64 / samples as f64;
            let rho = f.eval(theta, phi);
            if !rho.is_finite() {
                return Err(Error::Domain { theta, phi, value: rho });
            }
            min = min.min(rho);
            max = max.max(rho);
            if rho <= 0.0 {
                nonpositive += 1;
                first_bad.get_or_insert((theta, phi, rho));
            }
            let pole = if j == 0 { Some(0) } else if j == samples { Some(1) } else { None };
            if let Some(k) = pole {
                pole_range[k].0 = pole_range[k].0.min(rho);
                pole_range[k].1 = pole_range[k].1.max(rho);
            }
        }
    }
    let pole_consistent = pole_range
        .iter()
        .all(|&(lo, hi)| hi - lo <= 1e-9 * lo.abs().max(hi.abs()));
    let mut issues = Vec::new();
    if let Some((theta, phi, rho)) = first_bad {
        issues.push(format!(
            "nonpositive values detected ({nonpositive} samples, first at theta={theta:.6}, phi={phi:.6}: {rho})"
        ));
    }
    if !pole_consistent {
        issues.push("radius at a pole depends on theta; pole vertices use theta=0".to_string());
    }
    Ok(ValidationReport {
        description: f.description(),
        samples: samples * (samples + 1),
        min,
        max,
        nonpositive_count: nonpositive,
        pole_consistent,
        passed: nonpositive == 0,
        issues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_angles(n: usize) -> Vec<(f64, f64)> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        (0..n).map(|_| (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..=PI))).collect()
    }

    #[test]
    fn sphere_is_one() {
        let f = sphere();
        assert_eq!(f.eval(0.3, 1.1), 1.0);
        assert_eq!(f.eval(0.0, 0.0), 1.0);
        assert_eq!(f.eval(PI / 4.0, (3f64.sqrt() / 3.0).acos()), 1.0);
    }

    #[test]
    fn ellipsoid_values() {
        let one = ellipsoid(1.0).unwrap();
        for (t, p) in random_angles(50) {
            assert!((one.eval(t, p) - 1.0).abs() < 1e-15);
        }
        let f = ellipsoid(0.4).unwrap();
        assert!((f.eval(0.7, PI / 2.0) - 0.4).abs() < 1e-15);
        assert_eq!(f.eval(0.7, 0.0), 1.0);
        assert!(matches!(ellipsoid(0.0), Err(Error::InvalidArgument(_))));
        assert!(ellipsoid(-1.0).is_err());
        assert!(ellipsoid(f64::NAN).is_err());
    }

    #[test]
    fn ellipsoid_matches_its_closed_form_on_the_surface() {
        // ρ(θ,φ)·(sinφ cosθ, sinφ sinθ, cosφ) must satisfy x1²/a² + x2²/a² + x3² = 1
        let a = 0.3;
        let f = ellipsoid(a).unwrap();
        for (t, p) in random_angles(200) {
            let r = f.eval(t, p);
            let x = [r * p.sin() * t.cos(), r * p.sin() * t.sin(), r * p.cos()];
            let lhs = (x[0] * x[0] + x[1] * x[1]) / (a * a) + x[2] * x[2];
            assert!((lhs - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn fourlobe_values() {
        let f = fourlobe(0.0).unwrap();
        assert_eq!(f.eval(1.0, 2.0), 1.0);
        let f = fourlobe(0.2).unwrap();
        assert!((f.eval(PI / 4.0, PI / 4.0) - 0.64).abs() < 1e-15);
        assert!(fourlobe(1.0).is_err());
        assert!(fourlobe(-1.5).is_err());
    }

    #[test]
    fn fourlobe_range() {
        let r = validate(&fourlobe(0.4).unwrap(), 200).unwrap();
        assert!(r.passed);
        assert!((r.min - 0.36).abs() < 1e-12, "{}", r.min);
        assert!((r.max - 1.96).abs() < 1e-12, "{}", r.max);
        assert!(!r.pole_consistent);
    }

    #[test]
    fn parsed_fourlobe_matches_builtin() {
        let parsed = parse("(1+0.2*cos(4*theta))*(1+0.2*cos(4*phi))").unwrap();
        let builtin = fourlobe(0.2).unwrap();
        for (t, p) in random_angles(1000) {
            assert!((parsed.eval(t, p) - builtin.eval(t, p)).abs() <= 1e-15);
        }
    }

    #[test]
    fn parsed_ellipsoid_matches_builtin() {
        for a in [1.0, 0.8, 0.4, 0.1] {
            let parsed = parse(&format!("(sin(phi)^2/{a}^2 + cos(phi)^2)^(-0.5)")).unwrap();
            let builtin = ellipsoid(a).unwrap();
            for (t, p) in random_angles(500) {
                assert!((parsed.eval(t, p) - builtin.eval(t, p)).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn validate_reports() {
        let r = validate(&sphere(), 100).unwrap();
        assert!(r.passed && r.pole_consistent);
        assert_eq!((r.min, r.max), (1.0, 1.0));

        let r = validate(&parse("cos(theta)").unwrap(), 100).unwrap();
        assert!(!r.passed);
        assert!(r.issues[0].contains("nonpositive"));

        assert!(matches!(validate(&parse("1/0 - 1/0").unwrap(), 10), Err(Error::Domain { .. })));
        assert!(validate(&sphere(), 0).is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(from_spec("sphere").unwrap().description(), "sphere");
        assert_eq!(from_spec("ellipsoid:a=0.4").unwrap().eval(0.0, PI / 2.0), 0.4);
        assert!((from_spec("fourlobe:b=0.2").unwrap().eval(PI / 4.0, PI / 4.0) - 0.64).abs() < 1e-15);
        assert_eq!(from_spec("expr:1+phi").unwrap().eval(0.0, 2.0), 3.0);
        assert!(from_spec("ellipsoid:a=0").is_err());
        assert!(from_spec("ellipsoid").is_err());
        assert!(from_spec("ellipsoid:b=1").is_err());
        assert!(from_spec("cube").is_err());
        assert!(matches!(from_spec("expr:1+"), Err(Error::Parse(_))));
    }

    #[test]
    fn scaling() {
        let f = fourlobe(0.1).unwrap().scaled(2.5).unwrap();
        let g = fourlobe(0.1).unwrap();
        assert_eq!(f.eval(0.3, 0.4), 2.5 * g.eval(0.3, 0.4));
        assert!(sphere().scaled(0.0).is_err());
    }
}
