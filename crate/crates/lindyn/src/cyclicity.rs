//! Cyclicity at desk scale: Krylov rank checks, Vandermonde span
//! verification, direct-sum cyclicity via the eigenvalue-product criterion,
//! the exact ratio structure of scaled direct-sum orbits, and the discrete
//! Volterra intertwining identity with its annihilating functional.
//!
//! In finite dimensions density of a span is just full rank, so cyclicity
//! is tested as the rank of the Krylov family with a relative pivot
//! tolerance; the tolerance is the only calibration point and is carried in
//! every report.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, eigenvector, lu_solve, rank_with_pivots, Matrix};
use crate::operators::OperatorModel;
use crate::vector::Vector;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrylovReport {
    pub dim: usize,
    pub rank: usize,
    pub tolerance: f64,
    /// Residual norms of the selected pivot columns, in selection order.
    /// Criterion-derived reports (no orthogonalization run) leave this
    /// empty.
    pub pivots: Vec<f64>,
    /// `rank == dim`.
    pub cyclic: bool,
}

/// Rank of the Krylov family `x, Mx, ..., M^{d-1}x`.
///
/// Columns are renormalized before the pivoted orthogonalization, so the
/// rank decision is immune to orbit growth or decay.
pub fn krylov_rank(model: &OperatorModel, x: &Vector, tol: f64) -> Result<KrylovReport> {
    if x.norm() == 0.0 {
        return Err(Error::ZeroVector("krylov_rank start vector".into()));
    }
    let d = model.dim();
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    let (mut unit, _) = x.factor();
    for _ in 0..d {
        columns.push(unit.coords.clone());
        let next = model.apply(&unit)?;
        let (u, ln) = next.factor();
        if ln == f64::NEG_INFINITY {
            // orbit hit zero; remaining columns are zero and add no rank
            break;
        }
        unit = u;
    }
    let (rank, pivots) = rank_with_pivots(&columns, tol);
    Ok(KrylovReport {
        dim: d,
        rank,
        tolerance: tol,
        pivots,
        cyclic: rank == d,
    })
}

/// Do the vectors `(z_1^k a, ..., z_n^k a)` for `k = 0..n-1` and `a` over a
/// basis of `K^d` span the full `n*d`-dimensional product?
///
/// True exactly when the `z_i` are pairwise distinct (Vandermonde tensor
/// identity); a repeated scalar shows up as rank deficiency, not an error.
pub fn vandermonde_span_check(zs: &[Complex64], d: usize) -> Result<bool> {
    let n = zs.len();
    if n == 0 || d == 0 {
        return Err(Error::EmptyInput("vandermonde_span_check needs n, d >= 1".into()));
    }
    if zs.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Precondition("scalars must be nonzero".into()));
    }
    let mut columns = Vec::with_capacity(n * d);
    for k in 0..n as i32 {
        for a in 0..d {
            let mut v = vec![c(0.0); n * d];
            for (i, z) in zs.iter().enumerate() {
                v[i * d + a] = z.powi(k);
            }
            columns.push(v);
        }
    }
    let (rank, _) = rank_with_pivots(&columns, 1e-8);
    Ok(rank == n * d)
}

/// Exact ratio structure of the orbit of `S = ⊕ z_i T` started at
/// `(u, ..., u)`: block `i` of `S^k x` equals `(z_i / z_1)^k` times block 1.
///
/// Returns the maximum relative residual over `k <= n_max`, computed with
/// renormalized powers so that growth never overflows.
pub fn ratio_structure_check(
    t: &OperatorModel,
    zs: &[Complex64],
    u: &Vector,
    n_max: u64,
) -> Result<f64> {
    if zs.is_empty() {
        return Err(Error::EmptyInput("ratio_structure_check needs scalars".into()));
    }
    if zs[0].norm() == 0.0 {
        return Err(Error::Precondition("z_1 must be nonzero".into()));
    }
    if u.norm() == 0.0 {
        return Err(Error::ZeroVector("ratio_structure_check start block".into()));
    }
    let n = zs.len();
    let d = t.dim();
    let s = OperatorModel::DirectSum {
        parts: zs
            .iter()
            .map(|&z| OperatorModel::scalar_multiple(z, t.clone()))
            .collect(),
    };
    let x = Vector::direct_sum(&vec![u.clone(); n]);
    let mut worst = 0.0f64;
    let (mut unit, mut lognorm) = x.factor();
    for k in 0..=n_max {
        if lognorm == f64::NEG_INFINITY {
            break;
        }
        let first: Vec<Complex64> = unit.coords[..d].to_vec();
        let first_norm = first.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 1..n {
            let ratio = (zs[i] / zs[0]).powi(k as i32);
            let block = &unit.coords[i * d..(i + 1) * d];
            let block_norm = block.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let resid: f64 = block
                .iter()
                .zip(&first)
                .map(|(b, f)| (b - ratio * f).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let scale = block_norm.max(ratio.norm() * first_norm).max(1e-300);
            worst = worst.max(resid / scale);
        }
        let next = s.apply(&unit)?;
        let (v, dl) = next.factor();
        unit = v;
        lognorm += dl;
    }
    Ok(worst)
}

/// Cyclicity of `⊕ z_i T` with start `(u, ..., u)` by the eigenvalue-product
/// criterion: cyclic exactly when all products `z_i λ_j` are pairwise
/// distinct, with rank predicted as the number of distinct products.
///
/// Requires `T` diagonalizable with distinct eigenvalues and `u` supported
/// on every eigendirection; both are validated numerically. The returned
/// report is criterion-derived (no orthogonalization), so its pivot list is
/// empty — the brute-force oracle is [`krylov_rank`] on the same data.
pub fn direct_sum_cyclicity(
    t: &OperatorModel,
    zs: &[Complex64],
    u: &Vector,
    collision_tol: f64,
) -> Result<KrylovReport> {
    if zs.is_empty() {
        return Err(Error::EmptyInput("direct_sum_cyclicity needs scalars".into()));
    }
    let d = t.dim();
    let m = t.materialize()?;
    let lambdas = eigenvalues(&m);
    let scale = lambdas.iter().map(|l| l.norm()).fold(1.0, f64::max);
    for i in 0..d {
        for j in i + 1..d {
            if (lambdas[i] - lambdas[j]).norm() <= collision_tol * scale {
                return Err(Error::Precondition(format!(
                    "eigenvalues of T must be distinct: {} vs {}",
                    lambdas[i], lambdas[j]
                )));
            }
        }
    }
    // eigen-support of u: solve the eigenvector matrix against u
    let mut vmat = Matrix::zeros(d, d);
    for (j, l) in lambdas.iter().enumerate() {
        let v = eigenvector(&m, *l)?;
        for i in 0..d {
            vmat[(i, j)] = v[i];
        }
    }
    let coeffs = lu_solve(&vmat, &u.coords)?;
    let cmax = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if coeffs.iter().any(|z| z.norm() <= 1e-8 * cmax.max(1.0)) {
        return Err(Error::Precondition(
            "u has a (numerically) vanishing eigencomponent".into(),
        ));
    }
    // distinct products z_i * lambda_j
    let mut products: Vec<Complex64> = Vec::with_capacity(zs.len() * d);
    for z in zs {
        for l in &lambdas {
            products.push(z * l);
        }
    }
    let pscale = products.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let mut distinct: Vec<Complex64> = Vec::new();
    for p in &products {
        if !distinct.iter().any(|q| (p - q).norm() <= collision_tol * pscale) {
            distinct.push(*p);
        }
    }
    let total = zs.len() * d;
    Ok(KrylovReport {
        dim: total,
        rank: distinct.len(),
        tolerance: collision_tol,
        pivots: Vec::new(),
        cyclic: distinct.len() == total,
    })
}

/// Defect of the discrete intertwining identity `2 J V = V' J`, where `V`
/// is the left-endpoint Volterra quadrature, `J` the composition with
/// `(1-x)/2`, and `'` the transpose (the adjoint for the bilinear pairing
/// `⟨x,y⟩ = (1/m) Σ x_i y_i`). First-order in the grid.
pub fn volterra_intertwine_residual(m: usize) -> Result<f64> {
    let v = OperatorModel::Volterra { grid: m }.materialize()?;
    let j = OperatorModel::CompositionJ { grid: m }.materialize()?;
    let defect = j.matmul(&v).scale(c(2.0)).sub(&v.transpose().matmul(&j));
    Ok(defect.norm_2())
}

/// Evaluate `Φ(u, v) = ⟨u, Jg⟩ - ⟨v, J'f⟩` along the orbit
/// `(V ⊕ 2V)^n (f, g)` and return the maximum absolute value.
///
/// The continuum identity `2JV = V'J` makes Φ vanish identically along this
/// orbit, so the measured values are pure discretization error, `O(1/m)`.
pub fn phi_annihilation_check(f: &Vector, g: &Vector, m: usize, n_max: u64) -> Result<f64> {
    if f.dim() != m || g.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: f.dim().max(g.dim()),
        });
    }
    let j = OperatorModel::CompositionJ { grid: m }.materialize()?;
    let jg = j.apply(g)?;
    let jtf = j.transpose().apply(f)?;
    let pair = |a: &Vector, b: &Vector| -> Complex64 {
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x * y)
            .sum::<Complex64>()
            * c(1.0 / m as f64)
    };
    let v = OperatorModel::Volterra { grid: m };
    let two_v = OperatorModel::scalar_multiple(c(2.0), v.clone());
    let mut un = f.clone();
    let mut vn = g.clone();
    let mut worst = 0.0f64;
    for _ in 0..=n_max {
        let phi = pair(&un, &jg) - pair(&vn, &jtf);
        worst = worst.max(phi.norm());
        un = v.apply(&un)?;
        vn = two_v.apply(&vn)?;
    }
    Ok(worst)
}

/// One trial of the open-question search: does a small matrix `T` with
/// `T ⊕ T` cyclic but `T^2` not cyclic exist?
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Q4SearchReport {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    /// Trial indices where `T ⊕ T` looked cyclic while `T^2` did not. No
    /// claim is attached to an empty list; this is a search harness only.
    pub candidates: Vec<u64>,
}

/// Seeded random search over small real matrices for candidates to the open
/// question "`T ⊕ T` cyclic ⇒ `T^2` cyclic?". Asserts nothing.
pub fn q4_search(dim: usize, trials: u64, seed: u64) -> Result<Q4SearchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = Vec::new();
    let starts = 4usize; // cyclicity probed as max Krylov rank over starts
    for trial in 0..trials {
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| c(rng.random_range(-1.0..1.0))).collect())
            .collect();
        let t = OperatorModel::Dense { rows };
        let t_sum = OperatorModel::DirectSum {
            parts: vec![t.clone(), t.clone()],
        };
        let t_sq = OperatorModel::power(t.clone(), 2);
        let max_rank = |model: &OperatorModel, d: usize, rng: &mut ChaCha8Rng| -> Result<usize> {
            let mut best = 0;
            for _ in 0..starts {
                let x = Vector::real((0..d).map(|_| rng.random_range(-1.0..1.0)).collect());
                best = best.max(krylov_rank(model, &x, 1e-8)?.rank);
            }
            Ok(best)
        };
        let sum_cyclic = max_rank(&t_sum, 2 * dim, &mut rng)? == 2 * dim;
        let sq_cyclic = max_rank(&t_sq, dim, &mut rng)? == dim;
        if sum_cyclic && !sq_cyclic {
            candidates.push(trial);
        }
    }
    Ok(Q4SearchReport {
        dim,
        trials,
        seed,
        candidates,
    })
}
