//! The operator catalogue: weighted shifts, Volterra and composition
//! quadratures, rotations, direct sums, the rank-one `S_u` extension, and
//! matrix exponentials, all acting on finite coordinate vectors.
//!
//! Truncation semantics: a shift on `K^N` reads coordinates beyond `N` as
//! zero, so the model is a window onto the infinite-dimensional operator.
//! Orbit quantities that depend on mass leaking past the window must report
//! the leaked fraction separately (see the orbit engine).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::vector::{ScalarField, Vector};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Positive weight sequences for shift operators, `n` starting at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weights {
    /// `w_n = e^{-2n}`.
    Exp2Decay,
    Constant { value: f64 },
    Explicit { values: Vec<f64> },
}

impl Weights {
    pub fn weight(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        match self {
            Weights::Exp2Decay => (-2.0 * n as f64).exp(),
            Weights::Constant { value } => *value,
            Weights::Explicit { values } => values.get(n - 1).copied().unwrap_or(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorModel {
    Identity {
        dim: usize,
    },
    Dense {
        rows: Vec<Vec<Complex64>>,
    },
    /// `(Tx)_j = w_{j+1} x_{j+1}`, with `x_N` read as zero.
    BackwardShift {
        weights: Weights,
        dim: usize,
    },
    /// Adjoint of the backward shift: `(Tx)_j = w_j x_{j-1}`, `(Tx)_0 = 0`.
    ForwardShift {
        weights: Weights,
        dim: usize,
    },
    IdentityPlus {
        inner: Box<OperatorModel>,
    },
    /// Left-endpoint quadrature of `Vf(t) = ∫_0^t f`, on the midpoint grid
    /// `t_i = (2i+1)/(2m)`. Strictly lower triangular, hence nilpotent.
    Volterra {
        grid: usize,
    },
    /// `Jf(x) = f((1-x)/2)` with linear interpolation on the midpoint grid.
    CompositionJ {
        grid: usize,
    },
    /// Rows `(cos 2πt, sin 2πt; -sin 2πt, cos 2πt)`.
    Rotation2D {
        turns: f64,
    },
    ScalarMultiple {
        scalar: Complex64,
        inner: Box<OperatorModel>,
    },
    DirectSum {
        parts: Vec<OperatorModel>,
    },
    /// `S_u(y, t) = (Sy + tu, t)` on `dim(S) + 1` coordinates.
    ExtensionSu {
        inner: Box<OperatorModel>,
        u: Vector,
    },
    /// `e^{tS}` for the materialized generator.
    MatrixExponential {
        generator: Box<OperatorModel>,
        time: f64,
    },
    Power {
        inner: Box<OperatorModel>,
        exponent: u32,
    },
}

impl OperatorModel {
    pub fn dense(rows: Vec<Vec<Complex64>>) -> OperatorModel {
        OperatorModel::Dense { rows }
    }

    pub fn dense_real(rows: &[&[f64]]) -> OperatorModel {
        OperatorModel::Dense {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| c(x)).collect())
                .collect(),
        }
    }

    pub fn scalar_multiple(z: Complex64, inner: OperatorModel) -> OperatorModel {
        OperatorModel::ScalarMultiple {
            scalar: z,
            inner: Box::new(inner),
        }
    }

    pub fn power(inner: OperatorModel, exponent: u32) -> OperatorModel {
        OperatorModel::Power {
            inner: Box::new(inner),
            exponent,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorModel::Identity { dim } => *dim,
            OperatorModel::Dense { rows } => rows.len(),
            OperatorModel::BackwardShift { dim, .. } => *dim,
            OperatorModel::ForwardShift { dim, .. } => *dim,
            OperatorModel::IdentityPlus { inner } => inner.dim(),
            OperatorModel::Volterra { grid } => *grid,
            OperatorModel::CompositionJ { grid } => *grid,
            OperatorModel::Rotation2D { .. } => 2,
            OperatorModel::ScalarMultiple { inner, .. } => inner.dim(),
            OperatorModel::DirectSum { parts } => parts.iter().map(|p| p.dim()).sum(),
            OperatorModel::ExtensionSu { inner, .. } => inner.dim() + 1,
            OperatorModel::MatrixExponential { generator, .. } => generator.dim(),
            OperatorModel::Power { inner, .. } => inner.dim(),
        }
    }

    pub fn field(&self) -> ScalarField {
        match self {
            OperatorModel::Dense { rows } => {
                if rows.iter().flatten().all(|z| z.im == 0.0) {
                    ScalarField::Real
                } else {
                    ScalarField::Complex
                }
            }
            OperatorModel::ScalarMultiple { scalar, inner } => {
                if scalar.im == 0.0 {
                    inner.field()
                } else {
                    ScalarField::Complex
                }
            }
            OperatorModel::IdentityPlus { inner } => inner.field(),
            OperatorModel::DirectSum { parts } => parts
                .iter()
                .fold(ScalarField::Real, |f, p| f.join(p.field())),
            OperatorModel::ExtensionSu { inner, u } => inner.field().join(u.field),
            OperatorModel::MatrixExponential { generator, .. } => generator.field(),
            OperatorModel::Power { inner, .. } => inner.field(),
            _ => ScalarField::Real,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// Exact application of the variant's defining formula. No hidden
    /// normalization anywhere.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        let out_field = self.field().join(x.field);
        let coords = match self {
            OperatorModel::Identity { .. } => x.coords.clone(),
            OperatorModel::Dense { rows } => rows
                .iter()
                .map(|r| r.iter().zip(&x.coords).map(|(a, b)| a * b).sum())
                .collect(),
            OperatorModel::BackwardShift { weights, dim } => (0..*dim)
                .map(|j| {
                    if j + 1 < *dim {
                        c(weights.weight(j + 1)) * x.coords[j + 1]
                    } else {
                        c(0.0)
                    }
                })
                .collect(),
            OperatorModel::ForwardShift { weights, dim } => (0..*dim)
                .map(|j| {
                    if j == 0 {
                        c(0.0)
                    } else {
                        c(weights.weight(j)) * x.coords[j - 1]
                    }
                })
                .collect(),
            OperatorModel::IdentityPlus { inner } => {
                let t = inner.apply(x)?;
                return x.add(&t);
            }
            OperatorModel::Volterra { grid } => {
                let h = 1.0 / *grid as f64;
                let mut acc = c(0.0);
                let mut out = Vec::with_capacity(*grid);
                for j in 0..*grid {
                    out.push(acc * c(h));
                    acc += x.coords[j];
                }
                out
            }
            OperatorModel::CompositionJ { grid } => {
                let m = *grid as f64;
                (0..*grid)
                    .map(|i| {
                        let t = (2.0 * i as f64 + 1.0) / (2.0 * m);
                        let s = (1.0 - t) / 2.0;
                        // position of s in the midpoint grid
                        let pos = s * m - 0.5;
                        if pos <= 0.0 {
                            x.coords[0]
                        } else if pos >= m - 1.0 {
                            x.coords[*grid - 1]
                        } else {
                            let j = pos.floor() as usize;
                            let frac = pos - j as f64;
                            x.coords[j] * c(1.0 - frac) + x.coords[j + 1] * c(frac)
                        }
                    })
                    .collect()
            }
            OperatorModel::Rotation2D { turns } => {
                let (s, co) = (2.0 * std::f64::consts::PI * turns).sin_cos();
                vec![
                    c(co) * x.coords[0] + c(s) * x.coords[1],
                    -c(s) * x.coords[0] + c(co) * x.coords[1],
                ]
            }
            OperatorModel::ScalarMultiple { scalar, inner } => {
                return Ok(inner.apply(x)?.scale(*scalar));
            }
            OperatorModel::DirectSum { parts } => {
                let mut out = Vec::with_capacity(self.dim());
                let mut offset = 0;
                for p in parts {
                    let d = p.dim();
                    let block = Vector {
                        field: x.field,
                        coords: x.coords[offset..offset + d].to_vec(),
                    };
                    out.extend(p.apply(&block)?.coords);
                    offset += d;
                }
                out
            }
            OperatorModel::ExtensionSu { inner, u } => {
                let d = inner.dim();
                let y = Vector {
                    field: x.field,
                    coords: x.coords[..d].to_vec(),
                };
                let t = x.coords[d];
                let mut out = inner.apply(&y)?.add(&u.scale(t))?.coords;
                out.push(t);
                out
            }
            OperatorModel::MatrixExponential { generator, time } => {
                return exp_apply(generator, *time, x);
            }
            OperatorModel::Power { inner, exponent } => {
                let mut v = x.clone();
                for _ in 0..*exponent {
                    v = inner.apply(&v)?;
                }
                v.coords
            }
        };
        Ok(Vector {
            field: out_field,
            coords,
        })
    }

    /// Dense matrix `M` with `M e_j = apply(e_j)` for every basis vector.
    pub fn materialize(&self) -> Result<Matrix> {
        let d = self.dim();
        if d.saturating_mul(d) > 64_000_000 {
            return Err(Error::Capacity(format!(
                "materializing a {d}x{d} matrix exceeds the capacity limit"
            )));
        }
        match self {
            OperatorModel::Dense { rows } => {
                let mut m = Matrix::zeros(d, d);
                for (i, r) in rows.iter().enumerate() {
                    for (j, z) in r.iter().enumerate() {
                        m[(i, j)] = *z;
                    }
                }
                Ok(m)
            }
            _ => {
                let mut m = Matrix::zeros(d, d);
                for j in 0..d {
                    let col = self.apply(&Vector::basis(self.field(), d, j))?;
                    for i in 0..d {
                        m[(i, j)] = col.coords[i];
                    }
                }
                Ok(m)
            }
        }
    }

    /// Conjugate-transpose semantics; symbolic variants keep a symbolic
    /// form where one exists.
    pub fn adjoint(&self) -> Result<OperatorModel> {
        Ok(match self {
            OperatorModel::Identity { dim } => OperatorModel::Identity { dim: *dim },
            OperatorModel::BackwardShift { weights, dim } => OperatorModel::ForwardShift {
                weights: weights.clone(),
                dim: *dim,
            },
            OperatorModel::ForwardShift { weights, dim } => OperatorModel::BackwardShift {
                weights: weights.clone(),
                dim: *dim,
            },
            OperatorModel::IdentityPlus { inner } => OperatorModel::IdentityPlus {
                inner: Box::new(inner.adjoint()?),
            },
            OperatorModel::Rotation2D { turns } => OperatorModel::Rotation2D { turns: -turns },
            OperatorModel::ScalarMultiple { scalar, inner } => OperatorModel::ScalarMultiple {
                scalar: scalar.conj(),
                inner: Box::new(inner.adjoint()?),
            },
            OperatorModel::DirectSum { parts } => OperatorModel::DirectSum {
                parts: parts.iter().map(|p| p.adjoint()).collect::<Result<_>>()?,
            },
            OperatorModel::Power { inner, exponent } => OperatorModel::Power {
                inner: Box::new(inner.adjoint()?),
                exponent: *exponent,
            },
            _ => {
                let m = self.materialize()?.conj_transpose();
                OperatorModel::Dense {
                    rows: (0..m.rows)
                        .map(|i| (0..m.cols).map(|j| m[(i, j)]).collect())
                        .collect(),
                }
            }
        })
    }

    /// Structurally nilpotent variants (exact terminating exponential series).
    pub fn is_nilpotent(&self) -> bool {
        match self {
            OperatorModel::BackwardShift { .. }
            | OperatorModel::ForwardShift { .. }
            | OperatorModel::Volterra { .. } => true,
            OperatorModel::ScalarMultiple { inner, .. } => inner.is_nilpotent(),
            OperatorModel::Power { inner, .. } => inner.is_nilpotent(),
            OperatorModel::DirectSum { parts } => parts.iter().all(|p| p.is_nilpotent()),
            _ => false,
        }
    }
}

/// `T^n x` factored as a unit vector and the natural log of the norm.
///
/// Renormalizes at every step, so expanding models never overflow; a log
/// norm of `-inf` signals the zero vector.
pub fn apply_power(model: &OperatorModel, n: u64, x: &Vector) -> Result<(Vector, f64)> {
    let (mut unit, mut lognorm) = x.factor();
    for _ in 0..n {
        if lognorm == f64::NEG_INFINITY {
            return Ok((unit, lognorm));
        }
        let next = model.apply(&unit)?;
        let (u, dl) = next.factor();
        unit = u;
        lognorm += dl;
    }
    Ok((unit, lognorm))
}

/// `e^{tS} x`: exact terminating series for nilpotent generators, otherwise
/// scaling-and-squaring on the materialized generator.
pub fn exp_apply(generator: &OperatorModel, t: f64, x: &Vector) -> Result<Vector> {
    generator.check_dim(x)?;
    if generator.is_nilpotent() {
        // series terminates after at most dim terms
        let mut acc = x.clone();
        let mut term = x.clone();
        for k in 1..=generator.dim() {
            term = generator.apply(&term)?.scale(c(t / k as f64));
            if term.norm() == 0.0 {
                break;
            }
            acc = acc.add(&term)?;
        }
        return Ok(acc);
    }
    let a = generator.materialize()?.scale(c(t));
    let e = expm(&a);
    e.apply(x)
}

/// Matrix exponential by scaling-and-squaring, Taylor series of order 13,
/// scaling chosen from the 1-norm.
pub fn expm(a: &Matrix) -> Matrix {
    assert_eq!(a.rows, a.cols);
    let eta = a.norm_1();
    let s = if eta > 0.5 {
        (eta / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a.scale(c(1.0 / (1u64 << s) as f64));
    let mut term = Matrix::identity(a.rows);
    let mut acc = Matrix::identity(a.rows);
    for k in 1..=13u32 {
        term = term.matmul(&b).scale(c(1.0 / k as f64));
        acc = acc.add(&term);
    }
    for _ in 0..s {
        acc = acc.matmul(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(dim: usize) -> Vector {
        Vector::real(vec![1.0; dim])
    }

    #[test]
    fn backward_shift_on_e1() {
        let t = OperatorModel::BackwardShift {
            weights: Weights::Explicit {
                values: vec![0.5, 0.25, 0.125],
            },
            dim: 3,
        };
        let y = t.apply(&Vector::basis(ScalarField::Real, 3, 1)).unwrap();
        assert_eq!(y.coords[0], c(0.5));
        assert_eq!(y.coords[1], c(0.0));
        assert_eq!(y.coords[2], c(0.0));
    }

    #[test]
    fn rotation_quarter_turn() {
        let r = OperatorModel::Rotation2D { turns: 0.25 };
        let y = r.apply(&Vector::real(vec![1.0, 0.0])).unwrap();
        assert!((y.coords[0]).norm() < 1e-15);
        assert!((y.coords[1] - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn volterra_integrates_constant_one() {
        // V(1)(t) = t, left-endpoint rule is O(1/m)
        let m = 400;
        let v = OperatorModel::Volterra { grid: m };
        let y = v.apply(&ones(m)).unwrap();
        for i in 0..m {
            let t = (2.0 * i as f64 + 1.0) / (2.0 * m as f64);
            assert!(
                (y.coords[i].re - t).abs() < 1.0 / m as f64,
                "quadrature error too large at i={i}"
            );
        }
    }

    #[test]
    fn scalar_multiple_materializes_to_diagonal() {
        let m = OperatorModel::scalar_multiple(c(2.0), OperatorModel::Identity { dim: 2 })
            .materialize()
            .unwrap();
        assert_eq!(m[(0, 0)], c(2.0));
        assert_eq!(m[(1, 1)], c(2.0));
        assert_eq!(m[(0, 1)], c(0.0));
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let a = OperatorModel::dense_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = OperatorModel::dense_real(&[&[5.0]]);
        let s = OperatorModel::DirectSum {
            parts: vec![a.clone(), b.clone()],
        };
        let m = s.materialize().unwrap();
        let expected = Matrix::block_diag(&[a.materialize().unwrap(), b.materialize().unwrap()]);
        assert_eq!(m, expected);
    }

    #[test]
    fn extension_su_over_zero_operator() {
        // S = 0 on one coordinate, u = (1): rows (0,1; 0,1)
        let s = OperatorModel::ExtensionSu {
            inner: Box::new(OperatorModel::dense_real(&[&[0.0]])),
            u: Vector::real(vec![1.0]),
        };
        let m = s.materialize().unwrap();
        assert_eq!(m[(0, 0)], c(0.0));
        assert_eq!(m[(0, 1)], c(1.0));
        assert_eq!(m[(1, 0)], c(0.0));
        assert_eq!(m[(1, 1)], c(1.0));
    }

    #[test]
    fn adjoint_is_involution_on_dense() {
        let m = OperatorModel::Dense {
            rows: vec![
                vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)],
                vec![Complex64::new(0.0, -1.0), Complex64::new(4.0, 0.0)],
            ],
        };
        let back = m.adjoint().unwrap().adjoint().unwrap();
        assert_eq!(
            m.materialize().unwrap().data,
            back.materialize().unwrap().data
        );
    }

    #[test]
    fn adjoint_of_backward_shift_is_forward() {
        let t = OperatorModel::BackwardShift {
            weights: Weights::Explicit {
                values: vec![0.5, 0.25],
            },
            dim: 3,
        };
        let y = t
            .adjoint()
            .unwrap()
            .apply(&Vector::basis(ScalarField::Real, 3, 0))
            .unwrap();
        assert_eq!(y.coords[1], c(0.5));
        assert_eq!(y.coords[0], c(0.0));
    }

    #[test]
    fn adjoint_of_volterra_matches_upper_limit_integral() {
        // V*g(x) = integral from x to 1 of g; compare on g = 1
        let m = 400;
        let vstar = OperatorModel::Volterra { grid: m }.adjoint().unwrap();
        let y = vstar.apply(&ones(m)).unwrap();
        for i in 0..m {
            let t = (2.0 * i as f64 + 1.0) / (2.0 * m as f64);
            assert!(
                (y.coords[i].re - (1.0 - t)).abs() < 2.0 / m as f64,
                "adjoint quadrature error at i={i}: {} vs {}",
                y.coords[i].re,
                1.0 - t
            );
        }
    }

    #[test]
    fn apply_power_of_scalar_doubling() {
        let t = OperatorModel::scalar_multiple(c(2.0), OperatorModel::Identity { dim: 3 });
        let x = Vector::real(vec![1.0, 0.0, 0.0]);
        let (unit, lognorm) = apply_power(&t, 10, &x).unwrap();
        assert!((lognorm - 10.0 * 2f64.ln()).abs() < 1e-12);
        assert!((unit.coords[0] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn apply_power_of_rotation_is_isometric() {
        let r = OperatorModel::Rotation2D {
            turns: std::f64::consts::SQRT_2 / 2.0,
        };
        let x = Vector::real(vec![0.6, 0.8]);
        for n in [0u64, 1, 5, 50] {
            let (_, lognorm) = apply_power(&r, n, &x).unwrap();
            assert!(lognorm.abs() < 1e-12, "rotation changed the norm at n={n}");
        }
    }

    #[test]
    fn exp_apply_at_zero_is_identity() {
        let g = OperatorModel::dense_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let x = Vector::real(vec![0.3, -0.7]);
        let y = exp_apply(&g, 0.0, &x).unwrap();
        assert!((y.sub(&x).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn exp_apply_nilpotent_terminates_exactly() {
        // 2x2 shift with weight w1: e^N e_1 = e_1 + w1 e_0
        let g = OperatorModel::BackwardShift {
            weights: Weights::Explicit { values: vec![0.3] },
            dim: 2,
        };
        let y = g_exp(&g);
        assert!((y.coords[0] - c(0.3)).norm() < 1e-15);
        assert!((y.coords[1] - c(1.0)).norm() < 1e-15);
    }

    fn g_exp(g: &OperatorModel) -> Vector {
        exp_apply(g, 1.0, &Vector::basis(ScalarField::Real, 2, 1)).unwrap()
    }

    #[test]
    fn exp_semigroup_law() {
        // e^{t} e^{s} = e^{t+s} on a random-ish 6x6
        let n = 6;
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| c(((i * 13 + j * 7) % 11) as f64 / 11.0 - 0.4))
                    .collect()
            })
            .collect();
        let g = OperatorModel::Dense { rows };
        let x = Vector::real((0..n).map(|i| (i as f64 + 1.0) / n as f64).collect());
        let (t, s) = (0.7, 0.4);
        let one = exp_apply(&g, s, &x).unwrap();
        let two = exp_apply(&g, t, &one).unwrap();
        let direct = exp_apply(&g, t + s, &x).unwrap();
        assert!(two.sub(&direct).unwrap().norm() <= 1e-10 * direct.norm().max(1.0));
    }

    #[test]
    fn materialize_apply_consistency_all_variants() {
        let variants: Vec<OperatorModel> = vec![
            OperatorModel::Identity { dim: 4 },
            OperatorModel::dense_real(&[&[1.0, -2.0], &[0.5, 3.0]]),
            OperatorModel::BackwardShift {
                weights: Weights::Exp2Decay,
                dim: 5,
            },
            OperatorModel::ForwardShift {
                weights: Weights::Constant { value: 2.0 },
                dim: 5,
            },
            OperatorModel::IdentityPlus {
                inner: Box::new(OperatorModel::BackwardShift {
                    weights: Weights::Exp2Decay,
                    dim: 4,
                }),
            },
            OperatorModel::Volterra { grid: 8 },
            OperatorModel::CompositionJ { grid: 8 },
            OperatorModel::Rotation2D { turns: 0.3 },
            OperatorModel::scalar_multiple(
                Complex64::new(0.0, 1.0),
                OperatorModel::Identity { dim: 3 },
            ),
            OperatorModel::DirectSum {
                parts: vec![
                    OperatorModel::Rotation2D { turns: 0.1 },
                    OperatorModel::Identity { dim: 2 },
                ],
            },
            OperatorModel::ExtensionSu {
                inner: Box::new(OperatorModel::dense_real(&[&[0.5, 0.1], &[0.0, 0.5]])),
                u: Vector::real(vec![1.0, -1.0]),
            },
            OperatorModel::MatrixExponential {
                generator: Box::new(OperatorModel::dense_real(&[&[0.0, 1.0], &[-1.0, 0.0]])),
                time: 0.5,
            },
            OperatorModel::power(OperatorModel::Rotation2D { turns: 0.2 }, 3),
        ];
        for v in &variants {
            let m = v.materialize().unwrap();
            let d = v.dim();
            for j in 0..d {
                let e = Vector::basis(v.field(), d, j);
                let direct = v.apply(&e).unwrap();
                let via_matrix = m.apply(&e).unwrap();
                let err = direct.sub(&via_matrix).unwrap().norm();
                assert!(
                    err <= 1e-12 * direct.norm().max(1.0),
                    "materialize/apply mismatch for {v:?} on e_{j}: {err}"
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let t = OperatorModel::Identity { dim: 3 };
        let err = t.apply(&Vector::real(vec![1.0])).unwrap_err();
        assert!(matches!(
            err,
            crate::error::Error::DimensionMismatch { expected: 3, got: 1 }
        ));
    }
}
