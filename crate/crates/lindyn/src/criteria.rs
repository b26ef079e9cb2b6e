//! Machine-checkable criterion machinery: residual curves for the
//! supercyclicity criterion, witness combination for direct sums, the
//! positive-ray classification dichotomy, the finite-ray obstruction, and
//! the algebra of the rank-one extension `S_u`.
//!
//! Supercyclicity itself is never inferred from finite truncations (real
//! dimension above 2 admits none); it enters as an assumption flag with
//! provenance, and the checks here verify the algebra around it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{residual_outside_span, Matrix};
use crate::operators::OperatorModel;
use crate::torus::{circle_distance, is_generator, Angle, Certainty};
use crate::vector::Vector;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Witness data for the criterion: an index sequence `n_k`, positive
/// scalars per component, finite test sets, and a right-inverse rule per
/// index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionWitness {
    /// Strictly increasing indices `n_k`.
    pub indices: Vec<u64>,
    /// `scalars[k][i]` is the positive scalar for component `i` at index
    /// `k`; plain witnesses have a single component.
    pub scalars: Vec<Vec<f64>>,
    /// Test set `E` (the vectors sent to zero under `s_k T^{n_k}`).
    pub set_e: Vec<Vector>,
    /// Test set `F` (the vectors recovered by `T^{n_k} S_k`).
    pub set_f: Vec<Vector>,
    /// Right inverse `S_k` per index.
    pub right_inverses: Vec<OperatorModel>,
    /// Block dimensions of the component structure.
    pub component_dims: Vec<usize>,
}

impl CriterionWitness {
    pub fn simple(
        indices: Vec<u64>,
        scalars: Vec<f64>,
        set_e: Vec<Vector>,
        set_f: Vec<Vector>,
        right_inverses: Vec<OperatorModel>,
        dim: usize,
    ) -> Result<CriterionWitness> {
        let w = CriterionWitness {
            scalars: scalars.into_iter().map(|s| vec![s]).collect(),
            indices,
            set_e,
            set_f,
            right_inverses,
            component_dims: vec![dim],
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.set_e.is_empty() || self.set_f.is_empty() {
            return Err(Error::EmptyInput("witness test sets must be nonempty".into()));
        }
        if self.indices.len() != self.scalars.len()
            || self.indices.len() != self.right_inverses.len()
        {
            return Err(Error::Precondition(
                "indices, scalars and right inverses must have equal length".into(),
            ));
        }
        for w in self.indices.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Precondition("n_k must be strictly increasing".into()));
            }
        }
        if self
            .scalars
            .iter()
            .any(|sk| sk.len() != self.component_dims.len() || sk.iter().any(|&s| s <= 0.0))
        {
            return Err(Error::Precondition(
                "scalars must be positive, one per component".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.component_dims.iter().sum()
    }
}

/// Residual curves of the criterion check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    /// `max_{y in F} || T^{n_k} S_k y - y ||` per index.
    pub r1: Vec<f64>,
    /// `max_{x in E} || s_k T^{n_k} x ||` per index.
    pub r2: Vec<f64>,
    /// `max_{y in F} || s_k^{-1} S_k y ||` per index.
    pub r3: Vec<f64>,
    pub tail_start: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Split a vector into the witness's component blocks.
fn blocks<'a>(v: &'a Vector, dims: &[usize]) -> Vec<&'a [Complex64]> {
    let mut out = Vec::with_capacity(dims.len());
    let mut off = 0;
    for &d in dims {
        out.push(&v.coords[off..off + d]);
        off += d;
    }
    out
}

fn block_norm(part: &[Complex64]) -> f64 {
    part.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Norm used for residuals: max over component blocks of the Euclidean
/// block norm, with a per-block scalar weight. This makes the combined
/// residuals of a direct-sum witness equal the componentwise maxima
/// exactly.
fn weighted_block_max(v: &Vector, dims: &[usize], weights: &[f64]) -> f64 {
    blocks(v, dims)
        .iter()
        .zip(weights)
        .map(|(b, w)| w * block_norm(b))
        .fold(0.0, f64::max)
}

/// Evaluate the three residual curves of the criterion.
pub fn verify_criterion(
    model: &OperatorModel,
    witness: &CriterionWitness,
    tail_start: usize,
    tol: f64,
) -> Result<CriterionReport> {
    witness.validate()?;
    let d = witness.dim();
    if model.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: model.dim(),
        });
    }
    if tail_start >= witness.indices.len() {
        return Err(Error::Precondition("empty tail: tail_start beyond n_k".into()));
    }
    let dims = &witness.component_dims;
    let ones = vec![1.0; dims.len()];
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    let mut r3 = Vec::new();
    for (k, &nk) in witness.indices.iter().enumerate() {
        let sk = &witness.right_inverses[k];
        let scalars = &witness.scalars[k];
        let inv_scalars: Vec<f64> = scalars.iter().map(|s| 1.0 / s).collect();
        let mut worst1 = 0.0f64;
        let mut worst3 = 0.0f64;
        for y in &witness.set_f {
            let mut v = sk.apply(y)?;
            worst3 = worst3.max(weighted_block_max(&v, dims, &inv_scalars));
            for _ in 0..nk {
                v = model.apply(&v)?;
            }
            worst1 = worst1.max(weighted_block_max(&v.sub(y)?, dims, &ones));
        }
        let mut worst2 = 0.0f64;
        for x in &witness.set_e {
            let mut v = x.clone();
            for _ in 0..nk {
                v = model.apply(&v)?;
            }
            worst2 = worst2.max(weighted_block_max(&v, dims, scalars));
        }
        r1.push(worst1);
        r2.push(worst2);
        r3.push(worst3);
    }
    let pass = (tail_start..witness.indices.len())
        .all(|k| r1[k] <= tol && r2[k] <= tol && r3[k] <= tol);
    Ok(CriterionReport {
        r1,
        r2,
        r3,
        tail_start,
        tolerance: tol,
        pass,
    })
}

/// Combine witnesses sharing one index sequence into a witness for the
/// direct sum, with per-component scalars retained and product test sets.
pub fn combine_witnesses(witnesses: &[CriterionWitness]) -> Result<CriterionWitness> {
    if witnesses.is_empty() {
        return Err(Error::EmptyInput("no witnesses to combine".into()));
    }
    let indices = witnesses[0].indices.clone();
    for w in witnesses {
        if w.indices != indices {
            return Err(Error::Precondition(
                "witnesses must share the index sequence n_k".into(),
            ));
        }
    }
    let component_dims: Vec<usize> = witnesses
        .iter()
        .flat_map(|w| w.component_dims.iter().copied())
        .collect();
    let scalars: Vec<Vec<f64>> = (0..indices.len())
        .map(|k| {
            witnesses
                .iter()
                .flat_map(|w| w.scalars[k].iter().copied())
                .collect()
        })
        .collect();
    let right_inverses: Vec<OperatorModel> = (0..indices.len())
        .map(|k| OperatorModel::DirectSum {
            parts: witnesses.iter().map(|w| w.right_inverses[k].clone()).collect(),
        })
        .collect();
    // cartesian products of the component test sets
    let product_set = |pick: fn(&CriterionWitness) -> &Vec<Vector>| -> Vec<Vector> {
        let mut acc: Vec<Vec<Vector>> = vec![Vec::new()];
        for w in witnesses {
            let mut next = Vec::new();
            for prefix in &acc {
                for v in pick(w) {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                }
            }
            acc = next;
        }
        acc.iter().map(|parts| Vector::direct_sum(parts)).collect()
    };
    let out = CriterionWitness {
        indices,
        scalars,
        set_e: product_set(|w| &w.set_e),
        set_f: product_set(|w| &w.set_f),
        right_inverses,
        component_dims,
    };
    out.validate()?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumKind {
    Empty,
    Singleton { z: Complex64 },
    FullNumeric { eigenvalues: Vec<Complex64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    SymbolicFact,
    DenseEigensolve,
}

/// Point spectrum of the dual operator, with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDescriptor {
    pub kind: SpectrumKind,
    pub provenance: Provenance,
    /// Set whenever the value comes from a finite truncation whose spectrum
    /// does not reflect the infinite-dimensional operator.
    pub truncation_unreliable: bool,
}

/// Symbolic facts table for the known families, numeric fallback otherwise.
pub fn spectrum_of_adjoint(model: &OperatorModel) -> Result<SpectrumDescriptor> {
    let symbolic = |kind| SpectrumDescriptor {
        kind,
        provenance: Provenance::SymbolicFact,
        truncation_unreliable: false,
    };
    Ok(match model {
        // forward shifts (the adjoints of backward weighted shifts on l2)
        // have no eigenvalues at all
        OperatorModel::BackwardShift { .. } => symbolic(SpectrumKind::Empty),
        OperatorModel::Volterra { .. } => symbolic(SpectrumKind::Empty),
        OperatorModel::IdentityPlus { inner } => {
            let inner_spec = spectrum_of_adjoint(inner)?;
            match inner_spec.kind {
                SpectrumKind::Empty if inner_spec.provenance == Provenance::SymbolicFact => {
                    symbolic(SpectrumKind::Empty)
                }
                SpectrumKind::Singleton { z }
                    if inner_spec.provenance == Provenance::SymbolicFact =>
                {
                    symbolic(SpectrumKind::Singleton { z: z + c(1.0) })
                }
                _ => numeric_spectrum(model)?,
            }
        }
        OperatorModel::ScalarMultiple { scalar, inner } if scalar.norm() > 0.0 => {
            let inner_spec = spectrum_of_adjoint(inner)?;
            if inner_spec.provenance == Provenance::SymbolicFact {
                match inner_spec.kind {
                    SpectrumKind::Empty => symbolic(SpectrumKind::Empty),
                    SpectrumKind::Singleton { z } => {
                        symbolic(SpectrumKind::Singleton { z: z * scalar })
                    }
                    _ => numeric_spectrum(model)?,
                }
            } else {
                numeric_spectrum(model)?
            }
        }
        // the extension picks up exactly the functional (y, t) -> t as an
        // eigenvector of the dual at 1, provided the inner dual has no
        // eigenvalue there
        OperatorModel::ExtensionSu { inner, .. } => {
            let inner_spec = spectrum_of_adjoint(inner)?;
            if inner_spec.kind == SpectrumKind::Empty
                && inner_spec.provenance == Provenance::SymbolicFact
            {
                symbolic(SpectrumKind::Singleton { z: c(1.0) })
            } else {
                numeric_spectrum(model)?
            }
        }
        _ => numeric_spectrum(model)?,
    })
}

fn numeric_spectrum(model: &OperatorModel) -> Result<SpectrumDescriptor> {
    let eigs = crate::linalg::eigenvalues(&model.materialize()?);
    Ok(SpectrumDescriptor {
        kind: SpectrumKind::FullNumeric {
            eigenvalues: eigs.into_iter().map(|z| z.conj()).collect(),
        },
        provenance: Provenance::DenseEigensolve,
        truncation_unreliable: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RPlusDecision {
    RplusSupercyclic,
    NotRplus,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RPlusVerdict {
    pub verdict: RPlusDecision,
    pub reason: String,
    pub supercyclic_assumed: bool,
    pub spectrum: SpectrumDescriptor,
    pub certainty: Option<Certainty>,
}

/// The dichotomy: a supercyclic operator is positive-ray supercyclic iff
/// the dual point spectrum is empty or its single eigenvalue has a phase of
/// infinite order in the circle group.
///
/// `phase` may supply the eigenvalue's phase exactly (in turns); otherwise
/// it is taken from the numeric argument and every finite-order finding is
/// only as certain as the denominator search bound.
pub fn classify_rplus(
    supercyclic_assumed: bool,
    spectrum: &SpectrumDescriptor,
    phase: Option<Angle>,
    max_denominator: u64,
) -> RPlusVerdict {
    let base = |verdict, reason: String, certainty| RPlusVerdict {
        verdict,
        reason,
        supercyclic_assumed,
        spectrum: spectrum.clone(),
        certainty,
    };
    if !supercyclic_assumed {
        return base(
            RPlusDecision::Indeterminate,
            "supercyclicity not established; the dichotomy assumes it".into(),
            None,
        );
    }
    if spectrum.truncation_unreliable {
        return base(
            RPlusDecision::Indeterminate,
            "spectrum comes from a finite truncation; not reliable".into(),
            None,
        );
    }
    match &spectrum.kind {
        SpectrumKind::Empty => base(
            RPlusDecision::RplusSupercyclic,
            "dual point spectrum empty".into(),
            Some(Certainty::Exact),
        ),
        SpectrumKind::FullNumeric { .. } => base(
            RPlusDecision::Indeterminate,
            "full numeric spectrum has no dichotomy branch".into(),
            None,
        ),
        SpectrumKind::Singleton { z } => {
            if z.norm() == 0.0 {
                return base(
                    RPlusDecision::Indeterminate,
                    "singleton eigenvalue must be nonzero".into(),
                    None,
                );
            }
            let angle = phase.unwrap_or_else(|| {
                Angle::approx(z.arg() / (2.0 * std::f64::consts::PI))
            });
            let v = is_generator(&angle, max_denominator);
            match (v.is_generator, v.certainty) {
                (true, cert) => base(
                    RPlusDecision::RplusSupercyclic,
                    "phase of the eigenvalue has infinite order".into(),
                    Some(cert),
                ),
                (false, Certainty::Exact) => base(
                    RPlusDecision::NotRplus,
                    format!(
                        "phase has exact finite order {}",
                        v.order.unwrap_or_default()
                    ),
                    Some(Certainty::Exact),
                ),
                (false, cert) => base(
                    RPlusDecision::Indeterminate,
                    format!(
                        "phase is numerically rational (order {}) but not exact",
                        v.order.unwrap_or_default()
                    ),
                    Some(cert),
                ),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayObstructionReport {
    /// Distinct phase values (in turns) of `f(T^n x)`, clustered at 1e-9.
    pub distinct_phases: usize,
    /// Exact order of the phase of `z`, when it has one.
    pub order: Option<u64>,
    /// Set when the phase has exact finite order q and at most q phases
    /// were observed: the orbit functional values live on finitely many
    /// rays.
    pub obstruction_confirmed: bool,
    /// Set for infinite-order phases, where no finite-ray obstruction
    /// applies.
    pub not_applicable: bool,
}

/// Track the phases of `f(T^n x)` along the orbit. With `T* f = z̄ f` the
/// values are `z^n f(x)`, so an exact order-q phase confines them to at
/// most q rays.
pub fn ray_obstruction_check(
    model: &OperatorModel,
    f: &Vector,
    z_phase: &Angle,
    z_magnitude: f64,
    x: &Vector,
    n_max: u64,
) -> Result<RayObstructionReport> {
    let a = model.materialize()?;
    let z = Complex64::from_polar(
        z_magnitude,
        2.0 * std::f64::consts::PI * z_phase.value(),
    );
    // eigenpair residual: adjoint action must send f to z̄ f
    let f_img = a.conj_transpose().apply(f)?;
    let resid = f_img.sub(&f.scale(z.conj()))?.norm();
    if resid > 1e-10 * f.norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "eigenpair residual {resid} too large for the adjoint action"
        )));
    }
    let fx = x.dot(f)?;
    if fx.norm() == 0.0 {
        return Err(Error::Precondition("f(x) must be nonzero".into()));
    }
    let mut phases: Vec<f64> = Vec::new();
    let (mut unit, mut lognorm) = x.factor();
    for _ in 0..=n_max {
        let val = unit.dot(f)?;
        if val.norm() > 1e-13 {
            let phase = (val.arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0);
            if !phases.iter().any(|&p| circle_distance(p, phase) <= 1e-9) {
                phases.push(phase);
            }
        }
        let next = model.apply(&unit)?;
        let (u, dl) = next.factor();
        unit = u;
        lognorm += dl;
        if lognorm == f64::NEG_INFINITY {
            break;
        }
    }
    let order = match z_phase {
        Angle::Exact { turns } => Some(*turns.denom() as u64),
        Angle::Approx { .. } => None,
    };
    Ok(RayObstructionReport {
        distinct_phases: phases.len(),
        order,
        obstruction_confirmed: order.is_some_and(|q| phases.len() as u64 <= q),
        not_applicable: order.is_none(),
    })
}

/// `p_n(S) v = v + Sv + ... + S^{n-1} v`, accumulated stably.
pub fn pn_apply(s: &OperatorModel, n: u64, v: &Vector) -> Result<Vector> {
    if n == 0 {
        return Err(Error::Precondition("p_n needs n >= 1".into()));
    }
    let mut acc = v.clone();
    let mut power = v.clone();
    for _ in 1..n {
        power = s.apply(&power)?;
        acc = acc.add(&power)?;
    }
    Ok(acc)
}

/// Residual of the telescoping identity `p_n(S)(I-S)x = x - S^n x`.
pub fn telescoping_check(s: &OperatorModel, x: &Vector, n: u64) -> Result<f64> {
    let sx = s.apply(x)?;
    let lhs = pn_apply(s, n, &x.sub(&sx)?)?;
    let snx = apply_n(s, n, x)?;
    let rhs = x.sub(&snx)?;
    let scale = x.norm().max(snx.norm()).max(1.0);
    Ok(lhs.sub(&rhs)?.norm() / scale)
}

fn apply_n(s: &OperatorModel, n: u64, x: &Vector) -> Result<Vector> {
    let mut v = x.clone();
    for _ in 0..n {
        v = s.apply(&v)?;
    }
    Ok(v)
}

/// Residual of the orbit identity
/// `S_u^n(y, 1) = (y + p_n(S)(u - (I-S)y), 1)`.
pub fn su_orbit_identity_check(
    s: &OperatorModel,
    u: &Vector,
    y: &Vector,
    n: u64,
) -> Result<f64> {
    let su = OperatorModel::ExtensionSu {
        inner: Box::new(s.clone()),
        u: u.clone(),
    };
    let mut point = y.clone();
    point.coords.push(c(1.0));
    let lhs = apply_n(&su, n, &point)?;
    let rhs_head = if n == 0 {
        y.clone()
    } else {
        let w = u.sub(&y.sub(&s.apply(y)?)?)?;
        y.add(&pn_apply(s, n, &w)?)?
    };
    let mut rhs = rhs_head;
    rhs.coords.push(c(1.0));
    let scale = lhs.norm().max(rhs.norm()).max(1.0);
    Ok(lhs.sub(&rhs)?.norm() / scale)
}

/// Residual of the similarity `Lambda^{-1} S_u Lambda = S + I` for
/// `u = (I-S)v`, where `Lambda(x, s) = (x + sv, s)`.
pub fn su_similarity_check(s: &OperatorModel, v: &Vector) -> Result<f64> {
    let d = s.dim();
    let sm = s.materialize()?;
    let u = v.sub(&sm.apply(v)?)?;
    let su = OperatorModel::ExtensionSu {
        inner: Box::new(s.clone()),
        u,
    }
    .materialize()?;
    let lambda = affine_shear(d, v, 1.0);
    let lambda_inv = affine_shear(d, v, -1.0);
    let s0 = Matrix::block_diag(&[sm, Matrix::identity(1)]);
    let diff = lambda_inv.matmul(&su).matmul(&lambda).sub(&s0);
    Ok(diff.frobenius_norm())
}

fn affine_shear(d: usize, v: &Vector, sign: f64) -> Matrix {
    let mut m = Matrix::identity(d + 1);
    for i in 0..d {
        m[(i, d)] = v.coords[i] * c(sign);
    }
    m
}

/// Best achievable similarity residual over all choices of `v`.
///
/// `Lambda_v^{-1} S_u Lambda_v - (S + I)` has the single nonzero column
/// `u - (I-S)v`, so the optimum is the least-squares distance of `u` from
/// the range of `I - S`. Strictly positive exactly when `u` is outside
/// that range.
pub fn su_best_similarity_residual(s: &OperatorModel, u: &Vector) -> Result<f64> {
    let d = s.dim();
    let sm = s.materialize()?;
    let columns: Vec<Vec<Complex64>> = (0..d)
        .map(|j| {
            let e = Vector::basis(s.field(), d, j);
            let col = e.sub(&sm.apply(&e).unwrap()).unwrap();
            col.coords
        })
        .collect();
    Ok(residual_outside_span(&columns, &u.coords, 1e-10))
}
