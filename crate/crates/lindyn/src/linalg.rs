//! Dense complex linear algebra: just enough for desk-scale experiments.
//!
//! Matrices are row-major over `Complex64`. The eigenvalue solver is a
//! single-shift complex QR iteration on a Hessenberg reduction; it is meant
//! for matrices of dimension a few dozen, not for performance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vector::{ScalarField, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![c(0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Matrix {
        let r = rows.len();
        let cl = rows[0].len();
        Matrix::from_fn(r, cl, |i, j| c(rows[i][j]))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![c(0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = c(0.0);
            for j in 0..self.cols {
                acc += self.data[i * self.cols + j] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.dim(),
            });
        }
        let coords = self.matvec(&x.coords);
        let field = if self.is_real() {
            x.field
        } else {
            ScalarField::Complex
        };
        Ok(Vector { field, coords })
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == c(0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= z;
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Spectral norm estimate by power iteration on A^H A.
    ///
    /// Deterministic start vector; 60 iterations are far more than enough
    /// for the residual comparisons this crate makes.
    pub fn norm_2(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        let mut v: Vec<Complex64> = (0..self.cols)
            .map(|j| c(1.0 + (j as f64) / (self.cols as f64 + 1.0)))
            .collect();
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= nv;
        }
        let at = self.conj_transpose();
        let mut sigma = 0.0;
        for _ in 0..60 {
            let w = self.matvec(&v);
            let u = at.matvec(&w);
            let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nu == 0.0 {
                return 0.0;
            }
            sigma = nu.sqrt();
            v = u.into_iter().map(|z| z / nu).collect();
        }
        sigma
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of a set of column vectors by pivoted modified Gram-Schmidt.
///
/// Returns the rank and the ordered pivot magnitudes (residual norms at the
/// moment each column was selected). Columns whose residual drops below
/// `tol * leading_pivot` count as dependent.
pub fn rank_with_pivots(columns: &[Vec<Complex64>], tol: f64) -> (usize, Vec<f64>) {
    let mut work: Vec<Vec<Complex64>> = columns.to_vec();
    let mut alive: Vec<usize> = (0..work.len()).collect();
    let mut pivots = Vec::new();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    loop {
        // pick the remaining column with the largest residual norm
        let best = alive
            .iter()
            .copied()
            .map(|i| {
                let n = work[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                (i, n)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((idx, norm)) = best else { break };
        let threshold = pivots.first().map_or(0.0, |p0: &f64| tol * p0);
        if norm <= threshold || norm == 0.0 {
            break;
        }
        pivots.push(norm);
        let q: Vec<Complex64> = work[idx].iter().map(|z| z / norm).collect();
        alive.retain(|&i| i != idx);
        // orthogonalize survivors against the new basis vector
        for &i in &alive {
            let coeff: Complex64 = work[i]
                .iter()
                .zip(&q)
                .map(|(a, b)| a * b.conj())
                .sum();
            for (a, b) in work[i].iter_mut().zip(&q) {
                *a -= coeff * b;
            }
        }
        basis.push(q);
    }
    (pivots.len(), pivots)
}

/// Squared norm of the component of `v` orthogonal to the span of `columns`.
///
/// Used for least-squares residuals against possibly rank-deficient systems.
pub fn residual_outside_span(columns: &[Vec<Complex64>], v: &[Complex64], tol: f64) -> f64 {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut lead = 0.0f64;
    for col in columns {
        let mut w = col.clone();
        for q in &basis {
            let coeff: Complex64 = w.iter().zip(q).map(|(a, b)| a * b.conj()).sum();
            for (a, b) in w.iter_mut().zip(q) {
                *a -= coeff * b;
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if basis.is_empty() {
            lead = n;
        }
        if n > tol * lead && n > 0.0 {
            basis.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    let mut r = v.to_vec();
    for q in &basis {
        let coeff: Complex64 = r.iter().zip(q).map(|(a, b)| a * b.conj()).sum();
        for (a, b) in r.iter_mut().zip(q) {
            *a -= coeff * b;
        }
    }
    r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// LU solve with partial pivoting. Errors on an exactly singular pivot.
pub fn lu_solve(a: &Matrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut x = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (piv, mag) = (k..n)
            .map(|i| (i, m[(i, k)].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if mag == 0.0 {
            return Err(Error::Precondition("singular matrix in lu_solve".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            x.swap(k, piv);
            perm.swap(k, piv);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            m[(i, k)] = f;
            for j in k + 1..n {
                let mkj = m[(k, j)];
                m[(i, j)] -= f * mkj;
            }
            x[i] = x[i] - f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    Ok(x)
}

/// Reduce to upper Hessenberg form by Householder reflections (similarity).
fn hessenberg(a: &Matrix) -> Matrix {
    let n = a.rows;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // build the reflector annihilating h[k+2.., k]
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x[0];
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if alpha.norm() == 0.0 {
            c(1.0)
        } else {
            alpha / alpha.norm()
        };
        let v0 = alpha + phase * xnorm;
        x[0] = v0;
        let vnorm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H = I - 2 v v^H / |v|^2 applied on both sides
        // left: rows k+1..n
        for j in 0..n {
            let dot: Complex64 = (0..x.len()).map(|i| x[i].conj() * h[(k + 1 + i, j)]).sum();
            let f = dot * c(2.0 / vnorm2);
            for i in 0..x.len() {
                let xi = x[i];
                h[(k + 1 + i, j)] -= xi * f;
            }
        }
        // right: cols k+1..n
        for i in 0..n {
            let dot: Complex64 = (0..x.len()).map(|j| h[(i, k + 1 + j)] * x[j]).sum();
            let f = dot * c(2.0 / vnorm2);
            for j in 0..x.len() {
                let xj = x[j].conj();
                h[(i, k + 1 + j)] -= f * xj;
            }
        }
    }
    h
}

fn eig_2x2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * cc;
    let disc = (tr * tr - det * c(4.0)).sqrt();
    let l1 = (tr + disc) * c(0.5);
    let l2 = (tr - disc) * c(0.5);
    (l1, l2)
}

/// Eigenvalues of a square complex matrix by shifted QR iteration.
pub fn eigenvalues(a: &Matrix) -> Vec<Complex64> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[(0, 0)]];
    }
    let mut h = hessenberg(a);
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iters = 0usize;
    let scale = a.frobenius_norm().max(1.0);
    let eps = 1e-14 * scale;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // deflate a converged trailing eigenvalue
        let sub = h[(hi - 1, hi - 2)].norm();
        let local = h[(hi - 1, hi - 1)].norm() + h[(hi - 2, hi - 2)].norm();
        if sub <= 1e-14 * local.max(scale) || sub <= eps * 1e-2 {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iters = 0;
            continue;
        }
        if hi == 2 {
            let (l1, l2) = eig_2x2(h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
            eigs.push(l1);
            eigs.push(l2);
            break;
        }
        // Wilkinson shift from the trailing 2x2 block
        let (l1, l2) = eig_2x2(
            h[(hi - 2, hi - 2)],
            h[(hi - 2, hi - 1)],
            h[(hi - 1, hi - 2)],
            h[(hi - 1, hi - 1)],
        );
        let target = h[(hi - 1, hi - 1)];
        let mut mu = if (l1 - target).norm() <= (l2 - target).norm() {
            l1
        } else {
            l2
        };
        iters += 1;
        if iters % 30 == 0 {
            // exceptional shift to break rare cycling
            mu = target + c(1.5) * h[(hi - 1, hi - 2)];
        }
        // implicit single-shift QR step via Givens rotations on 0..hi
        let mut rotations = Vec::with_capacity(hi - 1);
        for i in 0..hi {
            h[(i, i)] -= mu;
        }
        for k in 0..hi - 1 {
            let (aa, bb) = (h[(k, k)], h[(k + 1, k)]);
            let r = (aa.norm_sqr() + bb.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 {
                (1.0f64, c(0.0))
            } else {
                ((aa.norm() / r), {
                    let phase = if aa.norm() == 0.0 { c(1.0) } else { aa / aa.norm() };
                    phase.conj() * bb / r
                })
            };
            // apply G^H on the left to rows k, k+1
            for j in k..hi {
                let t1 = h[(k, j)];
                let t2 = h[(k + 1, j)];
                h[(k, j)] = c(cs) * t1 + sn.conj() * t2;
                h[(k + 1, j)] = -sn * t1 + c(cs) * t2;
            }
            rotations.push((cs, sn));
        }
        for (k, (cs, sn)) in rotations.into_iter().enumerate() {
            // apply G on the right to cols k, k+1
            for i in 0..(k + 2).min(hi) {
                let t1 = h[(i, k)];
                let t2 = h[(i, k + 1)];
                h[(i, k)] = c(cs) * t1 + sn * t2;
                h[(i, k + 1)] = -sn.conj() * t1 + c(cs) * t2;
            }
        }
        for i in 0..hi {
            h[(i, i)] += mu;
        }
    }
    eigs
}

/// One eigenvector for a given (approximate) eigenvalue, by inverse iteration.
pub fn eigenvector(a: &Matrix, lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = a.rows;
    let shift = lambda + c(1e-10 * a.frobenius_norm().max(1.0));
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= shift;
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| c(1.0 + (i as f64) * 0.37))
        .collect();
    for _ in 0..4 {
        let w = lu_solve(&m, &v)?;
        let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nw == 0.0 {
            return Err(Error::Precondition("inverse iteration collapsed".into()));
        }
        v = w.into_iter().map(|z| z / nw).collect();
    }
    Ok(v)
}
