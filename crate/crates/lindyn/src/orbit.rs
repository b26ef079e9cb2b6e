//! Orbits, scaled orbits, group-coupled orbits, and epsilon-net coverage.
//!
//! Density claims are never made: coverage of a finite seeded net at a given
//! epsilon is the falsifiable surrogate, and every report carries the
//! `(epsilon, net size, seed)` triple needed to re-run it.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::OperatorModel;
use crate::torus::TorusPoint;
use crate::vector::{ScalarField, Vector};

/// Which universality notion the coverage metric matches.
///
/// Plain coverage probes the orbit `{T^n x}` itself, the projective mode
/// probes `{s T^n x : s in K}`, and the ray mode probes scaling by positive
/// reals only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageMode {
    Plain,
    ProjectiveComplex,
    RayPositive,
}

/// One orbit entry: unit direction plus natural-log norm.
pub type OrbitEntry = (Vector, f64);

/// The orbit `x, Tx, ..., T^n x`, each entry factored as unit and log norm.
pub fn orbit(model: &OperatorModel, x: &Vector, n: u64) -> Result<Vec<OrbitEntry>> {
    if x.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.dim(),
        });
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let (mut unit, mut lognorm) = x.factor();
    out.push((unit.clone(), lognorm));
    for _ in 0..n {
        if lognorm == f64::NEG_INFINITY {
            out.push((unit.clone(), lognorm));
            continue;
        }
        let next = model.apply(&unit)?;
        let (u, dl) = next.factor();
        unit = u;
        lognorm += dl;
        out.push((unit.clone(), lognorm));
    }
    Ok(out)
}

/// Distance between vectors in the metric of the chosen mode.
///
/// Projective distance has the closed form `sqrt(2 - 2|<x,y>|)` on unit
/// vectors: the optimal unimodular scalar aligns the inner product's phase.
pub fn distance(x: &Vector, y: &Vector, mode: CoverageMode) -> Result<f64> {
    match mode {
        CoverageMode::Plain => Ok(x.sub(y)?.norm()),
        CoverageMode::ProjectiveComplex => {
            let (nx, ny) = (x.norm(), y.norm());
            if nx == 0.0 || ny == 0.0 {
                return Err(Error::ZeroVector(
                    "projective distance needs nonzero vectors".into(),
                ));
            }
            let inner = x.dot(y)?.norm() / (nx * ny);
            Ok((2.0 - 2.0 * inner.min(1.0)).max(0.0).sqrt())
        }
        CoverageMode::RayPositive => {
            let (nx, ny) = (x.norm(), y.norm());
            if nx == 0.0 || ny == 0.0 {
                return Err(Error::ZeroVector(
                    "ray distance needs nonzero vectors".into(),
                ));
            }
            x.scale(Complex64::new(1.0 / nx, 0.0))
                .sub(&y.scale(Complex64::new(1.0 / ny, 0.0)))
                .map(|d| d.norm())
        }
    }
}

/// Seeded pseudo-uniform unit vectors (normalized Gaussian draws).
pub fn sphere_net(field: ScalarField, dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coords: Vec<Complex64> = (0..dim)
            .map(|_| match field {
                ScalarField::Real => Complex64::new(normal.sample(&mut rng), 0.0),
                ScalarField::Complex => {
                    Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
                }
            })
            .collect();
        let v = Vector { field, coords };
        let n = v.norm();
        if n > 1e-12 {
            out.push(v.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageReport {
    pub mode: CoverageMode,
    pub epsilon: f64,
    pub net_size: usize,
    pub seed: u64,
    /// Fraction of the net within epsilon of some orbit point.
    pub fraction: f64,
    /// Coverage after each orbit prefix; nondecreasing.
    pub curve: Vec<f64>,
    /// Orbit entries skipped because the zero vector has no image in a
    /// quotient mode.
    pub skipped_zero: usize,
}

/// Fraction of net points within `epsilon` of the orbit, under `mode`.
pub fn coverage(
    orbit: &[OrbitEntry],
    net: &[Vector],
    epsilon: f64,
    mode: CoverageMode,
    seed: u64,
) -> Result<CoverageReport> {
    if epsilon <= 0.0 {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if orbit.is_empty() || net.is_empty() {
        return Err(Error::EmptyInput("coverage needs an orbit and a net".into()));
    }
    let skipped_zero = if mode == CoverageMode::Plain {
        0
    } else {
        orbit
            .iter()
            .filter(|(_, ln)| *ln == f64::NEG_INFINITY)
            .count()
    };
    // reconstructed points for the plain mode; units otherwise
    let points: Vec<Option<Vector>> = orbit
        .iter()
        .map(|(u, ln)| match mode {
            CoverageMode::Plain => {
                if *ln == f64::NEG_INFINITY {
                    Some(Vector::zero(u.field, u.dim()))
                } else {
                    Some(u.scale(Complex64::new(ln.exp(), 0.0)))
                }
            }
            _ => {
                if *ln == f64::NEG_INFINITY {
                    None
                } else {
                    Some(u.clone())
                }
            }
        })
        .collect();
    // first orbit index covering each net point
    let mut first_cover: Vec<Option<usize>> = Vec::with_capacity(net.len());
    for y in net {
        let mut found = None;
        for (k, p) in points.iter().enumerate() {
            if let Some(p) = p {
                if distance(p, y, mode)? <= epsilon {
                    found = Some(k);
                    break;
                }
            }
        }
        first_cover.push(found);
    }
    let mut counts = vec![0usize; orbit.len()];
    for f in first_cover.iter().flatten() {
        counts[*f] += 1;
    }
    let mut curve = Vec::with_capacity(orbit.len());
    let mut acc = 0usize;
    for c in counts {
        acc += c;
        curve.push(acc as f64 / net.len() as f64);
    }
    Ok(CoverageReport {
        mode,
        epsilon,
        net_size: net.len(),
        seed,
        fraction: *curve.last().unwrap(),
        curve,
        skipped_zero,
    })
}

/// The coupled orbit `(T^k x, g^k)`, the group part exact when `g` is.
pub fn coupled_orbit(
    model: &OperatorModel,
    x: &Vector,
    g: &TorusPoint,
    n: u64,
) -> Result<Vec<(OrbitEntry, TorusPoint)>> {
    let base = orbit(model, x, n)?;
    let mut out = Vec::with_capacity(base.len());
    let mut gk = TorusPoint::identity(g.dim());
    for entry in base {
        out.push((entry, gk.clone()));
        gk = gk.add(g);
    }
    Ok(out)
}

/// Product metric on `X x G`: max of the mode distance and the torus
/// distance (in turns).
pub fn coupled_distance(
    a: &(OrbitEntry, TorusPoint),
    b: &(OrbitEntry, TorusPoint),
    mode: CoverageMode,
) -> Result<f64> {
    let dv = distance(&a.0 .0, &b.0 .0, mode)?;
    let dg = a.1.distance(&b.1);
    Ok(dv.max(dg))
}
