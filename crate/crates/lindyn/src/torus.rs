//! Points on the torus `T^k`, closed subgroups generated by powers, and the
//! empirical coset structure of coupled orbits over a finite cyclic group.
//!
//! Angles are stored in turns. Rational angles use exact `i64` fractions so
//! that finite-order claims are decided exactly, never by tolerance.
//! Irrationality is undecidable from floats, so every verdict about an
//! approximate angle carries the search bounds it was established under.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Tolerance for accepting an integer relation among approximate angles.
const RELATION_TOL: f64 = 1e-9;

/// One angle in turns, in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Angle {
    Exact { turns: Rational64 },
    Approx { turns: f64 },
}

fn wrap_rational(r: Rational64) -> Rational64 {
    let f = r.floor();
    r - f
}

/// Circular distance in turns, in `[0, 1/2]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl Angle {
    pub fn exact(num: i64, den: i64) -> Angle {
        Angle::Exact {
            turns: wrap_rational(Rational64::new(num, den)),
        }
    }

    pub fn approx(turns: f64) -> Angle {
        Angle::Approx {
            turns: turns.rem_euclid(1.0),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Angle::Exact { turns } => *turns.numer() as f64 / *turns.denom() as f64,
            Angle::Approx { turns } => *turns,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact { .. })
    }

    /// Coordinatewise group operation: addition mod 1, exact on rationals.
    pub fn add(&self, other: &Angle) -> Angle {
        match (self, other) {
            (Angle::Exact { turns: a }, Angle::Exact { turns: b }) => Angle::Exact {
                turns: wrap_rational(a + b),
            },
            _ => Angle::approx(self.value() + other.value()),
        }
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::Exact { turns } => Angle::Exact {
                turns: wrap_rational(-turns),
            },
            Angle::Approx { turns } => Angle::approx(-turns),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Angle::Exact { turns } => turns.is_zero(),
            Angle::Approx { turns } => *turns == 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub coords: Vec<Angle>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Angle>) -> TorusPoint {
        TorusPoint { coords }
    }

    pub fn identity(k: usize) -> TorusPoint {
        TorusPoint {
            coords: vec![Angle::exact(0, 1); k],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(|a| a.is_exact())
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|a| a.is_zero())
    }

    /// Max over coordinates of the circular distance in turns.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| circle_distance(a.value(), b.value()))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certainty {
    /// Established by exact rational arithmetic.
    Exact,
    /// Holds up to the stated search bounds; a relation with a larger
    /// denominator would not have been found.
    UpToBounds { max_denominator: u64, relation_bound: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "finite", rename_all = "snake_case")]
pub enum SubgroupDescriptor {
    #[serde(rename = "true")]
    Finite {
        order: u64,
        generator: TorusPoint,
        certainty: Certainty,
    },
    #[serde(rename = "false")]
    Infinite {
        /// Integer vectors `m` with `m . theta` an integer.
        relations: Vec<Vec<i64>>,
        identity_component_dim: usize,
        certainty: Certainty,
    },
}

impl SubgroupDescriptor {
    /// Membership test: exact for finite descriptors, relation-residual
    /// based for infinite ones.
    pub fn contains(&self, p: &TorusPoint) -> bool {
        match self {
            SubgroupDescriptor::Finite { order, generator, .. } => {
                let mut g = TorusPoint::identity(generator.dim());
                for _ in 0..*order {
                    if if p.is_exact() && g.is_exact() {
                        g == *p
                    } else {
                        g.distance(p) <= RELATION_TOL
                    } {
                        return true;
                    }
                    g = g.add(generator);
                }
                false
            }
            SubgroupDescriptor::Infinite { relations, .. } => relations.iter().all(|m| {
                let s: f64 = m
                    .iter()
                    .zip(&p.coords)
                    .map(|(&mi, a)| mi as f64 * a.value())
                    .sum();
                circle_distance(s, 0.0) <= 1e-6
            }),
        }
    }
}

/// Best rational approximation `p/q` of `x` with `q <= max_den`, by
/// continued-fraction convergents.
pub fn best_rational(x: f64, max_den: u64) -> (i64, u64) {
    let mut frac = x;
    let (mut p0, mut q0): (i64, u64) = (1, 0);
    let (mut p1, mut q1): (i64, u64) = (x.floor() as i64, 1);
    frac -= x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a < 0.0 || a > 1e18 {
            break;
        }
        let ai = a as i64;
        let p2 = ai * p1 + p0;
        let q2 = (ai as u64).saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        frac = inv - a;
    }
    (p1, q1)
}

/// The closed subgroup of `T^k` generated by the powers of `z`.
///
/// All-rational input is handled exactly: the group is finite cyclic of
/// order lcm of the reduced denominators. Approximate input is probed for
/// integer relations (continued fractions for `k = 1`, exhaustive search
/// with `|m| <= relation_bound` for `k <= 4`) and the verdict is flagged
/// with the bounds it holds up to.
pub fn closure_of_powers(
    z: &TorusPoint,
    max_denominator: u64,
    relation_bound: i64,
) -> Result<SubgroupDescriptor> {
    let k = z.dim();
    if z.is_exact() {
        let mut order: i64 = 1;
        for a in &z.coords {
            if let Angle::Exact { turns } = a {
                order = order.lcm(turns.denom());
            }
        }
        return Ok(SubgroupDescriptor::Finite {
            order: order as u64,
            generator: z.clone(),
            certainty: Certainty::Exact,
        });
    }
    if k > 4 {
        return Err(Error::RelationSearchDim { max: 4, got: k });
    }
    let certainty = Certainty::UpToBounds {
        max_denominator,
        relation_bound,
    };
    if k == 1 {
        let x = z.coords[0].value();
        let (p, q) = best_rational(x, max_denominator);
        // a true rational rounded to f64 leaves |q*x - p| of order q*eps;
        // a generic irrational's best convergent leaves order 1/max_den
        if q > 0 && (q as f64 * x - p as f64).abs() <= 1e-10 {
            return Ok(SubgroupDescriptor::Finite {
                order: q,
                generator: z.clone(),
                certainty,
            });
        }
        return Ok(SubgroupDescriptor::Infinite {
            relations: Vec::new(),
            identity_component_dim: 1,
            certainty,
        });
    }
    // exhaustive relation search, |m|_inf <= relation_bound
    let theta: Vec<f64> = z.coords.iter().map(|a| a.value()).collect();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut counters = vec![-relation_bound; k];
    'outer: loop {
        let m = counters.clone();
        if m.iter().any(|&mi| mi != 0) {
            let s: f64 = m.iter().zip(&theta).map(|(&mi, &t)| mi as f64 * t).sum();
            if circle_distance(s, 0.0) <= RELATION_TOL {
                relations.push(m);
            }
        }
        for i in 0..k {
            counters[i] += 1;
            if counters[i] <= relation_bound {
                continue 'outer;
            }
            counters[i] = -relation_bound;
        }
        break;
    }
    let basis = integer_row_basis(&relations);
    let rank = basis.len();
    if rank == k {
        // full-rank relations force every coordinate rational; recover the
        // order from per-coordinate denominators
        let mut order: u64 = 1;
        for &t in &theta {
            let (_, q) = best_rational(t, max_denominator);
            order = order.lcm(&q.max(1));
        }
        return Ok(SubgroupDescriptor::Finite {
            order,
            generator: z.clone(),
            certainty,
        });
    }
    Ok(SubgroupDescriptor::Infinite {
        relations: basis,
        identity_component_dim: k - rank,
        certainty,
    })
}

/// Reduce a set of integer vectors to an independent subset by fraction-free
/// Gaussian elimination.
fn integer_row_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for row in rows {
        let mut v: Vec<f64> = row.iter().map(|&x| x as f64).collect();
        for b in &basis {
            let pivot_idx = b.iter().position(|&x| x.abs() > 1e-9).unwrap();
            let f = v[pivot_idx] / b[pivot_idx];
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= f * bi;
            }
        }
        if v.iter().any(|&x| x.abs() > 1e-6) {
            basis.push(v);
            kept.push(row.clone());
        }
    }
    kept
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorVerdict {
    pub is_generator: bool,
    pub order: Option<u64>,
    pub certainty: Certainty,
}

/// Does `z` generate `T` (is `{z^n}` dense in the circle)?
pub fn is_generator(z: &Angle, max_denominator: u64) -> GeneratorVerdict {
    match z {
        Angle::Exact { turns } => GeneratorVerdict {
            is_generator: false,
            order: Some(*turns.denom() as u64),
            certainty: Certainty::Exact,
        },
        Angle::Approx { turns } => {
            let (p, q) = best_rational(*turns, max_denominator);
            let rational = q > 0 && (q as f64 * turns - p as f64).abs() <= 1e-10;
            GeneratorVerdict {
                is_generator: !rational,
                order: if rational { Some(q) } else { None },
                certainty: Certainty::UpToBounds {
                    max_denominator,
                    relation_bound: 0,
                },
            }
        }
    }
}

/// Result of the empirical coset recovery for a finite cyclic group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetReport {
    /// For each net point, the residues `a` (with `h = g^a`) reached within
    /// epsilon. Finite sampling under-approximates the true sets.
    pub sets: Vec<Vec<u64>>,
    /// Residues of the common subgroup `H`, when all nonempty sets are
    /// cosets of a single subgroup.
    pub common_subgroup: Option<Vec<u64>>,
    pub consistent: bool,
}

/// For each net point `y`, collect `{h in G : some sample (v, h) lies within
/// epsilon of y}` and check whether the nonempty sets are cosets of one
/// common subgroup of the cyclic group of order `q`.
pub fn estimate_cosets(
    samples: &[(Vector, TorusPoint)],
    net: &[Vector],
    epsilon: f64,
    group: &SubgroupDescriptor,
) -> Result<CosetReport> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("estimate_cosets needs samples".into()));
    }
    let SubgroupDescriptor::Finite { order, generator, .. } = group else {
        return Err(Error::Precondition(
            "estimate_cosets requires a finite group".into(),
        ));
    };
    let q = *order;
    // residue lookup table: powers of the generator
    let mut powers = Vec::with_capacity(q as usize);
    let mut g = TorusPoint::identity(generator.dim());
    for _ in 0..q {
        powers.push(g.clone());
        g = g.add(generator);
    }
    let residue_of = |h: &TorusPoint| -> Result<u64> {
        powers
            .iter()
            .position(|p| if p.is_exact() && h.is_exact() {
                p == h
            } else {
                p.distance(h) <= RELATION_TOL
            })
            .map(|i| i as u64)
            .ok_or_else(|| Error::Precondition("sample group element not in G".into()))
    };
    let residues: Vec<u64> = samples
        .iter()
        .map(|(_, h)| residue_of(h))
        .collect::<Result<_>>()?;
    let mut sets: Vec<Vec<u64>> = Vec::with_capacity(net.len());
    for y in net {
        let mut hit = vec![false; q as usize];
        for ((v, _), &a) in samples.iter().zip(&residues) {
            if !hit[a as usize] && v.sub(y)?.norm() <= epsilon {
                hit[a as usize] = true;
            }
        }
        sets.push(
            (0..q)
                .filter(|&a| hit[a as usize])
                .collect(),
        );
    }
    // coset consistency: S is a coset of H iff S - s0 is a subgroup, and all
    // nonempty sets must yield the same H
    let mut common: Option<Vec<u64>> = None;
    let mut consistent = true;
    for s in sets.iter().filter(|s| !s.is_empty()) {
        let s0 = s[0];
        let mut diff: Vec<u64> = s.iter().map(|&a| (a + q - s0) % q).collect();
        diff.sort_unstable();
        if !is_subgroup_of_cyclic(&diff, q) {
            consistent = false;
            break;
        }
        match &common {
            None => common = Some(diff),
            Some(h) => {
                if *h != diff {
                    consistent = false;
                    break;
                }
            }
        }
    }
    Ok(CosetReport {
        sets,
        common_subgroup: if consistent { common } else { None },
        consistent,
    })
}

fn is_subgroup_of_cyclic(elements: &[u64], q: u64) -> bool {
    if !elements.contains(&0) {
        return false;
    }
    for &a in elements {
        for &b in elements {
            let s = (a + q - b) % q;
            if !elements.contains(&s) {
                return false;
            }
        }
    }
    true
}
