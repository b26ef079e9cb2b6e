//! Winding numbers of sampled circle-valued paths.
//!
//! A path is a finite list of samples with a hard resolution guarantee:
//! adjacent angular steps must stay strictly below half a turn, otherwise the
//! unwrap would be ambiguous and the computation refuses rather than guesses.
//! Angles are kept in turns so that integer snapping of closed paths is
//! exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::circle_distance;

/// Steps at least this close to half a turn are treated as ambiguous.
const STEP_GUARD: f64 = 0.5 - 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledPath {
    /// Strictly increasing sample times.
    pub times: Vec<f64>,
    /// Values on the circle, as angles in turns.
    pub angles: Vec<f64>,
    pub closed: bool,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, angles: Vec<f64>, closed: bool) -> Result<SampledPath> {
        if times.len() < 2 || times.len() != angles.len() {
            return Err(Error::Precondition(
                "a sampled path needs matching times and angles, at least two samples".into(),
            ));
        }
        for (i, w) in times.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NonMonotone { index: i + 1 });
            }
        }
        Ok(SampledPath {
            times,
            angles: angles.into_iter().map(|a| a.rem_euclid(1.0)).collect(),
            closed,
        })
    }

    /// Uniform samples of `t -> angle_fn(t)` on `[0, 1]`.
    pub fn from_fn(samples: usize, closed: bool, angle_fn: impl Fn(f64) -> f64) -> Result<SampledPath> {
        let times: Vec<f64> = (0..samples)
            .map(|i| i as f64 / (samples - 1) as f64)
            .collect();
        let angles = times.iter().map(|&t| angle_fn(t)).collect();
        SampledPath::new(times, angles, closed)
    }

    fn steps(&self) -> Result<Vec<f64>> {
        self.angles
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let mut d = (w[1] - w[0]).rem_euclid(1.0);
                if d > 0.5 {
                    d -= 1.0;
                }
                if d.abs() >= STEP_GUARD {
                    Err(Error::InsufficientSampling { index: i, step: d })
                } else {
                    Ok(d)
                }
            })
            .collect()
    }

    /// Continuous phase lift at the sample times, starting at the first
    /// stored angle.
    pub fn lift(&self) -> Result<Vec<f64>> {
        let steps = self.steps()?;
        let mut phi = Vec::with_capacity(self.angles.len());
        let mut acc = self.angles[0];
        phi.push(acc);
        for d in steps {
            acc += d;
            phi.push(acc);
        }
        Ok(phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    /// Total turn count `phi(b) - phi(a)` of the unwrapped phase.
    pub turns: f64,
    /// Set when a closed path's winding was snapped to the nearest integer.
    pub snapped: bool,
}

/// Phase-unwrapped winding number, in turns.
///
/// Closed paths must return to their start value within 1e-12 and produce a
/// value within 1e-9 of an integer, which is then snapped.
pub fn winding(p: &SampledPath) -> Result<Winding> {
    let total: f64 = p.steps()?.iter().sum();
    if p.closed {
        let gap = circle_distance(p.angles[0], *p.angles.last().unwrap());
        if gap > 1e-12 {
            return Err(Error::EndpointMismatch { gap });
        }
        let nearest = total.round();
        if (total - nearest).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "closed path winding {total} is not within 1e-9 of an integer"
            )));
        }
        return Ok(Winding {
            turns: nearest,
            snapped: true,
        });
    }
    Ok(Winding {
        turns: total,
        snapped: false,
    })
}

/// Concatenation; requires the end value of `p` to match the start of `q`.
/// Windings add exactly at the sample level.
pub fn concatenate(p: &SampledPath, q: &SampledPath) -> Result<SampledPath> {
    let gap = circle_distance(*p.angles.last().unwrap(), q.angles[0]);
    if gap > 1e-12 {
        return Err(Error::EndpointMismatch { gap });
    }
    let t_shift = p.times.last().unwrap() - q.times[0];
    let mut times = p.times.clone();
    let mut angles = p.angles.clone();
    // skip q's duplicated first sample; give it a strictly increasing time
    for (t, a) in q.times.iter().zip(&q.angles).skip(1) {
        times.push(t + t_shift);
        angles.push(*a);
    }
    let closed = circle_distance(angles[0], *angles.last().unwrap()) <= 1e-12;
    SampledPath::new(times, angles, closed)
}

/// Resample along a monotone, endpoint-preserving parameter map. The new
/// samples read the linearly interpolated phase lift, so the winding is
/// unchanged.
pub fn reparametrize(p: &SampledPath, new_params: &[f64]) -> Result<SampledPath> {
    if new_params.len() < 2 {
        return Err(Error::Precondition("need at least two parameters".into()));
    }
    for (i, w) in new_params.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NonMonotone { index: i + 1 });
        }
    }
    let (t0, t1) = (p.times[0], *p.times.last().unwrap());
    if (new_params[0] - t0).abs() > 1e-12 || (new_params.last().unwrap() - t1).abs() > 1e-12 {
        return Err(Error::Precondition(
            "reparametrization must preserve endpoints".into(),
        ));
    }
    let phi = p.lift()?;
    let mut angles = Vec::with_capacity(new_params.len());
    for &s in new_params {
        // locate s in the original time grid
        let j = match p.times.binary_search_by(|t| t.total_cmp(&s)) {
            Ok(j) => j.min(p.times.len() - 2),
            Err(j) => j.saturating_sub(1).min(p.times.len() - 2),
        };
        let frac = (s - p.times[j]) / (p.times[j + 1] - p.times[j]);
        angles.push(phi[j] + frac.clamp(0.0, 1.0) * (phi[j + 1] - phi[j]));
    }
    // force exact endpoint angles so closed paths stay closed
    angles[0] = p.angles[0];
    *angles.last_mut().unwrap() = *p.angles.last().unwrap();
    SampledPath::new(new_params.to_vec(), angles, p.closed)
}

/// Pointwise multiplication by a fixed unimodular scalar, given as an angle
/// in turns. Leaves the winding unchanged up to the rounding of one angle
/// addition per sample (residual below 1e-12).
pub fn scale(u_turns: f64, p: &SampledPath) -> SampledPath {
    SampledPath {
        times: p.times.clone(),
        angles: p.angles.iter().map(|a| (a + u_turns).rem_euclid(1.0)).collect(),
        closed: p.closed,
    }
}

/// Property oracle for non-surjective paths: a path that omits a point of
/// the circle has |winding| < 1.
///
/// All samples must keep at least `margin` turns of circular distance from
/// the omitted point.
pub fn omit_point_bound_check(p: &SampledPath, omitted_turns: f64, margin: f64) -> Result<bool> {
    for (i, a) in p.angles.iter().enumerate() {
        if circle_distance(*a, omitted_turns) < margin {
            return Err(Error::Precondition(format!(
                "sample {i} is within the margin of the omitted point"
            )));
        }
    }
    Ok(winding(p)?.turns.abs() < 1.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaMapReport {
    /// Winding of the normalized segment from 1 to z.
    pub w_beta: f64,
    /// Sum of the middle-section windings: m copies of w_beta.
    pub sum_mid: f64,
    /// Whether |sum_mid| exceeds 2, the quantitative contradiction bound.
    pub bound_ok: bool,
}

/// Quantitative core of the path construction: the image of the segment
/// `[1, z]` under `v -> v/|v|` winds by `arg(z)` turns, and `m` concatenated
/// scaled copies wind by `m * arg(z)`, which must exceed 2 in absolute value.
///
/// `z` is given by its argument in turns. The antipodal case `z = -1` uses
/// the counterclockwise arc, the limit of the segment construction.
pub fn lemma_map_demo(z_turns: f64, m: u32, samples: usize) -> Result<LemmaMapReport> {
    let theta = {
        let mut t = z_turns.rem_euclid(1.0);
        if t > 0.5 {
            t -= 1.0;
        }
        t
    };
    if theta == 0.0 {
        return Err(Error::Precondition("z = 1 has no winding segment".into()));
    }
    let beta = if (theta.abs() - 0.5).abs() < 1e-12 {
        SampledPath::from_fn(samples, false, |t| 0.5 * t)?
    } else {
        SampledPath::from_fn(samples, false, |t| {
            let phase = 2.0 * std::f64::consts::PI * theta;
            let re = (1.0 - t) + t * phase.cos();
            let im = t * phase.sin();
            im.atan2(re) / (2.0 * std::f64::consts::PI)
        })?
    };
    let w_beta = winding(&beta)?.turns;
    if m as f64 * w_beta.abs() <= 2.0 {
        return Err(Error::Precondition(format!(
            "m = {m} is too small: m * |w(beta)| = {} <= 2",
            m as f64 * w_beta.abs()
        )));
    }
    // middle sections are unimodular multiples of beta; each winds by
    // w_beta ((w3)), and the windings add ((w1))
    let mut sum_mid = 0.0;
    for j in 0..m {
        let section = scale((j as f64 * theta).rem_euclid(1.0), &beta);
        sum_mid += winding(&section)?.turns;
    }
    Ok(LemmaMapReport {
        w_beta,
        sum_mid,
        bound_ok: sum_mid.abs() > 2.0,
    })
}

// ---------------------------------------------------------------------------
// Seeded path generators for the property suites
// ---------------------------------------------------------------------------

/// Random open path: a bounded-step angular walk.
pub fn random_open_path(seed: u64, samples: usize) -> SampledPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angle: f64 = rng.random_range(0.0..1.0);
    let mut angles = Vec::with_capacity(samples);
    for _ in 0..samples {
        angles.push(angle.rem_euclid(1.0));
        angle += rng.random_range(-0.35..0.35);
    }
    let times = (0..samples).map(|i| i as f64).collect();
    SampledPath::new(times, angles, false).expect("generated path is valid")
}

/// Random closed path with a known integer winding, returned alongside.
pub fn random_closed_path(seed: u64, samples: usize) -> (SampledPath, i64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: i64 = rng.random_range(-3..=3);
    // smooth perturbation vanishing at both endpoints
    let a1: f64 = rng.random_range(-0.1..0.1);
    let a2: f64 = rng.random_range(-0.05..0.05);
    let base: f64 = rng.random_range(0.0..1.0);
    let path = SampledPath::from_fn(samples.max(16 * (w.unsigned_abs() as usize + 1)), true, |t| {
        let tau = 2.0 * std::f64::consts::PI * t;
        base + w as f64 * t + a1 * tau.sin() + a2 * (2.0 * tau).sin()
    })
    .expect("generated closed path is valid");
    (path, w)
}

/// Random walk on the circle reflected away from the omitted point, staying
/// at least `margin` turns from it.
pub fn random_avoiding_path(seed: u64, samples: usize, omitted_turns: f64, margin: f64) -> SampledPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // walk in the lift coordinate relative to the omitted point; the
    // reachable band is (margin, 1 - margin)
    let mut rel: f64 = rng.random_range(margin + 0.05..0.95 - margin);
    let mut angles = Vec::with_capacity(samples);
    for _ in 0..samples {
        angles.push((omitted_turns + rel).rem_euclid(1.0));
        let step: f64 = rng.random_range(-0.3..0.3);
        rel += step;
        // reflect off the forbidden margins
        if rel < margin {
            rel = 2.0 * margin - rel;
        }
        if rel > 1.0 - margin {
            rel = 2.0 * (1.0 - margin) - rel;
        }
        rel = rel.clamp(margin, 1.0 - margin);
    }
    let times = (0..samples).map(|i| i as f64).collect();
    SampledPath::new(times, angles, false).expect("generated path is valid")
}
