//! Scalar fields and finite coordinate vectors.
//!
//! Everything here is a finite truncation: vectors live in `K^n` with `K`
//! either the reals or the complexes. Real vectors are stored with complex
//! coordinates whose imaginary parts are zero, so a complex experiment can
//! absorb real inputs without conversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    /// Smallest field containing both operands (real embeds into complex).
    pub fn join(self, other: ScalarField) -> ScalarField {
        if self == ScalarField::Real && other == ScalarField::Real {
            ScalarField::Real
        } else {
            ScalarField::Complex
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    pub field: ScalarField,
    pub coords: Vec<Complex64>,
}

impl Vector {
    pub fn real(coords: Vec<f64>) -> Vector {
        Vector {
            field: ScalarField::Real,
            coords: coords.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn complex(coords: Vec<Complex64>) -> Vector {
        Vector {
            field: ScalarField::Complex,
            coords,
        }
    }

    pub fn zero(field: ScalarField, dim: usize) -> Vector {
        Vector {
            field,
            coords: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector `e_j`.
    pub fn basis(field: ScalarField, dim: usize, j: usize) -> Vector {
        let mut v = Vector::zero(field, dim);
        v.coords[j] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian inner product `⟨self, other⟩ = Σ x_i ȳ_i`.
    pub fn dot(&self, other: &Vector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn scale(&self, z: Complex64) -> Vector {
        Vector {
            field: if z.im == 0.0 {
                self.field
            } else {
                ScalarField::Complex
            },
            coords: self.coords.iter().map(|c| c * z).collect(),
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Vector {
            field: self.field.join(other.field),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Factor into a unit vector and the natural log of the norm.
    ///
    /// The zero vector maps to `(0, -inf)` so that repeated renormalization
    /// never divides by zero.
    pub fn factor(&self) -> (Vector, f64) {
        let n = self.norm();
        if n == 0.0 {
            (self.clone(), f64::NEG_INFINITY)
        } else {
            (self.scale(Complex64::new(1.0 / n, 0.0)), n.ln())
        }
    }

    /// Concatenate blocks into a direct-sum vector.
    pub fn direct_sum(parts: &[Vector]) -> Vector {
        let field = parts
            .iter()
            .fold(ScalarField::Real, |f, p| f.join(p.field));
        let coords = parts.iter().flat_map(|p| p.coords.iter().copied()).collect();
        Vector { field, coords }
    }
}
