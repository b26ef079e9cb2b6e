//! Acceptance gate: nine numbered criteria, one per test, each ending in a
//! single printed pass line. Criteria 1-8 exercise the library directly;
//! criterion 9 drives the compiled binary.

use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lindyn::asymptotics::{a_n, b_n, log_binomial};
use lindyn::criteria::{
    classify_rplus, combine_witnesses, ray_obstruction_check, su_orbit_identity_check,
    su_similarity_check, telescoping_check, verify_criterion, CriterionWitness, Provenance,
    RPlusDecision, SpectrumDescriptor, SpectrumKind,
};
use lindyn::cyclicity::{
    direct_sum_cyclicity, krylov_rank, ratio_structure_check, vandermonde_span_check,
    volterra_intertwine_residual, phi_annihilation_check,
};
use lindyn::operators::{OperatorModel, Weights};
use lindyn::orbit::{coverage, orbit, sphere_net, CoverageMode};
use lindyn::torus::{closure_of_powers, Angle, Certainty, SubgroupDescriptor, TorusPoint};
use lindyn::vector::{ScalarField, Vector};
use lindyn::winding::{
    concatenate, omit_point_bound_check, random_avoiding_path, random_closed_path,
    random_open_path, reparametrize, scale, winding,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_dense(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> OperatorModel {
    OperatorModel::Dense {
        rows: (0..dim)
            .map(|_| (0..dim).map(|_| c(rng.random_range(-1.0..1.0) * scale)).collect())
            .collect(),
    }
}

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::real((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
}

#[test]
fn criterion_1_winding_suite() {
    let samples = 100;
    for seed in 0..1000u64 {
        let p = random_open_path(seed, samples);
        // (w1) concatenation additivity after aligning endpoints
        let q0 = random_open_path(seed.wrapping_add(0x9e37), samples);
        let delta = (p.angles.last().unwrap() - q0.angles[0]).rem_euclid(1.0);
        let q = scale(delta, &q0);
        let joined = concatenate(&p, &q).unwrap();
        let w1 = (winding(&joined).unwrap().turns
            - winding(&p).unwrap().turns
            - winding(&q).unwrap().turns)
            .abs();
        assert!(w1 <= 1e-12, "w1 residual {w1} at seed {seed}");
        // (w2) reparametrization invariance under a square-law time map
        let (t0, t1) = (p.times[0], *p.times.last().unwrap());
        let params: Vec<f64> = (0..2 * samples)
            .map(|k| {
                let t = k as f64 / (2 * samples - 1) as f64;
                t0 + (t1 - t0) * t * t
            })
            .collect();
        let rep = reparametrize(&p, &params).unwrap();
        let w2 = (winding(&rep).unwrap().turns - winding(&p).unwrap().turns).abs();
        assert!(w2 <= 1e-12, "w2 residual {w2} at seed {seed}");
        // (w3) unimodular scaling invariance
        let u = (seed % 97) as f64 / 97.0;
        let w3 = (winding(&scale(u, &p)).unwrap().turns - winding(&p).unwrap().turns).abs();
        assert!(w3 <= 1e-12, "w3 residual {w3} at seed {seed}");
        // closed paths snap to the constructed integer
        let (cp, expect) = random_closed_path(seed, 128);
        let got = winding(&cp).unwrap();
        assert!(got.snapped && got.turns == expect as f64, "snap at seed {seed}");
        // non-surjective paths have |w| < 1
        let avoid = random_avoiding_path(seed, 2 * samples, 0.3, 0.05);
        assert!(omit_point_bound_check(&avoid, 0.3, 0.049).unwrap(), "omit at {seed}");
    }
    println!("criterion 1: pass (winding suite, 1000 seeded paths, residuals <= 1e-12)");
}

#[test]
fn criterion_2_exact_identity_suite() {
    let mut worst: f64 = 0.0;
    // telescoping p_n(S)(I-S)x = x - S^n x
    for seed in 0..200u64 {
        let mut rng = rng_for(seed);
        let dim = rng.random_range(2..=20usize);
        let s = rand_dense(&mut rng, dim, 0.5 / dim as f64);
        let x = rand_vec(&mut rng, dim);
        let n = rng.random_range(1..=50u64);
        worst = worst.max(telescoping_check(&s, &x, n).unwrap());
    }
    // extension orbit identity S_u^n(y,1) = (y + p_n(S)(u - (I-S)y), 1)
    for seed in 200..400u64 {
        let mut rng = rng_for(seed);
        let dim = rng.random_range(2..=19usize);
        let s = rand_dense(&mut rng, dim, 0.5 / dim as f64);
        let u = rand_vec(&mut rng, dim);
        let y = rand_vec(&mut rng, dim);
        let n = rng.random_range(1..=50u64);
        worst = worst.max(su_orbit_identity_check(&s, &u, &y, n).unwrap());
    }
    // similarity conjugation for reachable u = (I-S)v
    for seed in 400..600u64 {
        let mut rng = rng_for(seed);
        let dim = rng.random_range(2..=19usize);
        let s = rand_dense(&mut rng, dim, 0.5 / dim as f64);
        let v = rand_vec(&mut rng, dim);
        worst = worst.max(su_similarity_check(&s, &v).unwrap());
    }
    // ratio structure of direct sums of scalar multiples
    for seed in 600..800u64 {
        let mut rng = rng_for(seed);
        let d = rng.random_range(2..=6usize);
        let t = rand_dense(&mut rng, d, 1.0);
        let u = rand_vec(&mut rng, d);
        let zs = [c(1.0), Complex64::new(0.0, 1.0), c(2.0)];
        worst = worst.max(ratio_structure_check(&t, &zs, &u, 50).unwrap());
    }
    // orbit shift: orbit(T, Tx) is orbit(T, x) without its head
    for seed in 800..1000u64 {
        let mut rng = rng_for(seed);
        let dim = rng.random_range(2..=20usize);
        let t = rand_dense(&mut rng, dim, 2.0 / dim as f64);
        let x = rand_vec(&mut rng, dim);
        let tx = t.apply(&x).unwrap();
        if tx.norm() < 1e-12 {
            continue;
        }
        let shifted = orbit(&t, &tx, 49).unwrap();
        let full = orbit(&t, &x, 50).unwrap();
        for (k, ((u_s, l_s), (u_f, l_f))) in shifted.iter().zip(full.iter().skip(1)).enumerate() {
            let du = u_s.sub(u_f).unwrap().norm();
            let dl = (l_s - l_f).abs() / l_f.abs().max(1.0);
            worst = worst.max(du).max(dl);
            if du > 1e-9 || dl > 1e-9 {
                panic!("orbit shift mismatch du {du}, dl {dl} at seed {seed} step {k}");
            }
        }
    }
    assert!(worst <= 1e-9, "max relative residual {worst}");
    println!("criterion 2: pass (exact identities, 200 instances each, max residual {worst:.2e})");
}

#[test]
fn criterion_3_vandermonde_and_direct_sum_cyclicity() {
    // full rank for distinct unimodular tuples
    let mut rng = rng_for(3);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.random_range(2..=8usize);
        let d = rng.random_range(1..=6usize);
        let zs: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..6.283)))
            .collect();
        let gap = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .map(|(a, b)| (zs[a] - zs[b]).norm())
            .fold(f64::INFINITY, f64::min);
        if gap < 1e-3 {
            continue;
        }
        assert!(vandermonde_span_check(&zs, d).unwrap(), "rank deficient at {checked}");
        checked += 1;
    }
    // criterion verdict against the brute-force Krylov oracle, products on a
    // root-of-unity grid so collisions are exact and the oracle conditioned
    const GRID: i64 = 32;
    let root = |e: i64| {
        Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * e.rem_euclid(GRID) as f64 / GRID as f64,
        )
    };
    let mut collisions = 0;
    for trial in 0..500u64 {
        let mut rng = rng_for(0x5eed ^ trial);
        let d = rng.random_range(1..=5usize);
        let n = rng.random_range(1..=4usize);
        let mut lam_exp: Vec<i64> = Vec::new();
        while lam_exp.len() < d {
            let e = rng.random_range(0..GRID);
            if !lam_exp.contains(&e) {
                lam_exp.push(e);
            }
        }
        let t = OperatorModel::Dense {
            rows: (0..d)
                .map(|a| (0..d).map(|b| if a == b { root(lam_exp[a]) } else { c(0.0) }).collect())
                .collect(),
        };
        let mut z_exp: Vec<i64> = (0..n).map(|_| rng.random_range(0..GRID)).collect();
        if trial % 5 == 0 && d >= 2 && n >= 2 {
            z_exp[1] = z_exp[0] + lam_exp[0] - lam_exp[1];
            collisions += 1;
        }
        let zs: Vec<Complex64> = z_exp.iter().map(|&e| root(e)).collect();
        let u = Vector::real(vec![1.0; d]);
        let report = direct_sum_cyclicity(&t, &zs, &u, 1e-8).unwrap();
        let s = OperatorModel::DirectSum {
            parts: zs
                .iter()
                .map(|&z| OperatorModel::scalar_multiple(z, t.clone()))
                .collect(),
        };
        let x = Vector::direct_sum(&vec![u; n]);
        let oracle = krylov_rank(&s, &x, 1e-8).unwrap();
        assert_eq!(report.cyclic, oracle.cyclic, "verdict mismatch at trial {trial}");
        assert_eq!(report.rank, oracle.rank, "rank mismatch at trial {trial}");
    }
    println!(
        "criterion 3: pass (100 Vandermonde tuples full rank; 500 direct-sum instances match the oracle, {collisions} engineered collisions)"
    );
}

#[test]
fn criterion_4_volterra_intertwining_and_annihilation() {
    let r40 = volterra_intertwine_residual(40).unwrap();
    let r320 = volterra_intertwine_residual(320).unwrap();
    let order = (r40 / r320).ln() / (320.0f64 / 40.0).ln();
    assert!(order >= 0.9, "measured order {order}");
    let m = 200;
    let ones = Vector::real(vec![1.0; m]);
    let single_step = phi_annihilation_check(&ones, &ones, m, 1).unwrap();
    let phi_max = phi_annihilation_check(&ones, &ones, m, 30).unwrap();
    assert!(
        phi_max <= 10.0 * single_step,
        "phi max {phi_max} vs single-step defect {single_step}"
    );
    println!(
        "criterion 4: pass (intertwining order {order:.3}; phi max {phi_max:.2e} <= 10x single-step defect {single_step:.2e})"
    );
}

#[test]
fn criterion_5_asymptotics() {
    // exact anchors
    assert_eq!(a_n(0).ln, 0.0, "A_0 = 1 exactly");
    assert_eq!(b_n(0).ln, -2.0, "B_0 = e^-2 exactly");
    // sweep n <= 1e5: A_n strictly increasing, B_n/A_n <= e^-2, normalized
    // exponent increasing from 100 on
    let mut prev_a = a_n(1).ln;
    let mut prev_norm = f64::NEG_INFINITY;
    let mut decade_ratios = Vec::new();
    for n in 2..=100_000u64 {
        let a = a_n(n).ln;
        assert!(a > prev_a, "A_n not strictly increasing at n = {n}");
        prev_a = a;
        let b = b_n(n).ln;
        let ratio = b - a;
        assert!(ratio <= -2.0 + 1e-12, "B_n/A_n above e^-2 at n = {n}");
        if [10, 100, 1_000, 10_000, 100_000].contains(&n) {
            decade_ratios.push(ratio);
        }
        if n >= 100 {
            let norm = a / (n as f64).ln().powi(2);
            assert!(norm > prev_norm, "normalized exponent not increasing at n = {n}");
            assert!(norm < 0.25, "normalized exponent {norm} >= 0.25 at n = {n}");
            prev_norm = norm;
        }
    }
    assert!(
        decade_ratios.windows(2).all(|w| w[1] < w[0]),
        "B_n/A_n not strictly decreasing across decades: {decade_ratios:?}"
    );
    // continue the normalized exponent up to 1e6 on a geometric grid
    let mut n = 100_000u64;
    while n < 1_000_000 {
        let next = ((n as f64 * 1.02) as u64).max(n + 1).min(1_000_000);
        let norm = a_n(next).ln / (next as f64).ln().powi(2);
        assert!(norm > prev_norm && norm < 0.25, "normalized exponent at n = {next}");
        prev_norm = norm;
        n = next;
    }
    // log_binomial against a big-integer oracle
    for (n, k) in [(1_000_000u64, 500u64), (100_000, 317), (1_000, 500), (50, 25)] {
        let got = log_binomial(n, k).unwrap();
        let want = big_ln_binomial(n, k);
        let rel = (got - want).abs() / want.abs().max(1.0);
        assert!(rel <= 1e-10, "log_binomial({n},{k}): rel err {rel}");
    }
    println!("criterion 5: pass (anchors exact; monotonicity and ratio bounds on n <= 1e6; big-integer binomial spot checks <= 1e-10)");
}

/// Natural log of C(n, k) through exact big-integer arithmetic.
fn big_ln_binomial(n: u64, k: u64) -> f64 {
    use num_bigint::BigUint;
    let mut b = BigUint::from(1u32);
    for i in 0..k {
        b = b * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    let bits = b.bits();
    if bits <= 53 {
        let v: f64 = b.to_string().parse().unwrap();
        return v.ln();
    }
    let top: BigUint = b >> (bits - 53);
    let m: f64 = top.to_string().parse().unwrap();
    m.ln() + (bits - 53) as f64 * std::f64::consts::LN_2
}

#[test]
fn criterion_6_torus() {
    let mut rng = rng_for(6);
    for case in 0..100 {
        let k = rng.random_range(1..=3usize);
        let coords: Vec<Angle> = (0..k)
            .map(|_| {
                let den = rng.random_range(1..=30i64);
                Angle::exact(rng.random_range(0..den.max(2)), den)
            })
            .collect();
        let z = TorusPoint::new(coords);
        let descriptor = closure_of_powers(&z, 1_000_000, 10).unwrap();
        // brute-force power enumeration
        let mut count = 1u64;
        let mut g = z.clone();
        while !g.is_identity() {
            g = g.add(&z);
            count += 1;
        }
        match descriptor {
            SubgroupDescriptor::Finite { order, certainty, .. } => {
                assert_eq!(order, count, "order mismatch at case {case}");
                assert_eq!(certainty, Certainty::Exact);
            }
            _ => panic!("rational tuple must close to a finite group"),
        }
    }
    // irrational rotation covers the circle
    let model = OperatorModel::Rotation2D { turns: 0.618_033_988_749_894_9 };
    let x = Vector::real(vec![1.0, 0.0]);
    let entries = orbit(&model, &x, 100_000).unwrap();
    let net = sphere_net(ScalarField::Real, 2, 1000, 6);
    let report = coverage(&entries, &net, 1e-3, CoverageMode::Plain, 6).unwrap();
    assert!(report.fraction >= 0.999, "coverage fraction {}", report.fraction);
    println!(
        "criterion 6: pass (100 rational closures match enumeration; irrational coverage {:.4})",
        report.fraction
    );
}

fn shift_witness(z: f64, dim: usize, indices: &[u64], scalars: Vec<f64>, deep_e: bool) -> CriterionWitness {
    let set = vec![
        Vector::basis(ScalarField::Real, dim, 0),
        Vector::basis(ScalarField::Real, dim, 1),
    ];
    let set_e = if deep_e {
        vec![Vector::basis(ScalarField::Real, dim, dim - 1)]
    } else {
        set.clone()
    };
    CriterionWitness::simple(
        indices.to_vec(),
        scalars,
        set_e,
        set,
        indices
            .iter()
            .map(|&n| {
                OperatorModel::power(
                    OperatorModel::scalar_multiple(
                        c(1.0 / z),
                        OperatorModel::ForwardShift {
                            weights: Weights::Constant { value: 1.0 },
                            dim,
                        },
                    ),
                    n as u32,
                )
            })
            .collect(),
        dim,
    )
    .unwrap()
}

#[test]
fn criterion_7_criterion_machinery() {
    let dim = 40;
    let indices: Vec<u64> = (1..=8).map(|k| 4 * k).collect();
    let t2 = OperatorModel::scalar_multiple(
        c(2.0),
        OperatorModel::BackwardShift {
            weights: Weights::Constant { value: 1.0 },
            dim,
        },
    );
    let w = shift_witness(2.0, dim, &indices, vec![1.0; indices.len()], false);
    let report = verify_criterion(&t2, &w, 4, 1e-6).unwrap();
    assert!(report.pass);
    assert!(report.r1.iter().all(|&r| r == 0.0), "r1 not exactly zero: {:?}", report.r1);

    // combined residuals are the componentwise maxima, exactly
    let dim_c = 24;
    let idx: Vec<u64> = (1..=5).map(|k| 4 * k).collect();
    let wa = shift_witness(2.0, dim_c, &idx, vec![1.0; idx.len()], false);
    let wb = shift_witness(3.0, dim_c, &idx, vec![1.0; idx.len()], false);
    let combined = combine_witnesses(&[wa.clone(), wb.clone()]).unwrap();
    let ta = OperatorModel::scalar_multiple(
        c(2.0),
        OperatorModel::BackwardShift {
            weights: Weights::Constant { value: 1.0 },
            dim: dim_c,
        },
    );
    let tb = OperatorModel::scalar_multiple(
        c(3.0),
        OperatorModel::BackwardShift {
            weights: Weights::Constant { value: 1.0 },
            dim: dim_c,
        },
    );
    let sum = OperatorModel::DirectSum { parts: vec![ta.clone(), tb.clone()] };
    let rc = verify_criterion(&sum, &combined, 4, 1e-6).unwrap();
    let ra = verify_criterion(&ta, &wa, 4, 1e-6).unwrap();
    let rb = verify_criterion(&tb, &wb, 4, 1e-6).unwrap();
    for k in 0..idx.len() {
        assert_eq!(rc.r1[k], ra.r1[k].max(rb.r1[k]));
        assert_eq!(rc.r2[k], ra.r2[k].max(rb.r2[k]));
        assert_eq!(rc.r3[k], ra.r3[k].max(rb.r3[k]));
    }
    assert!(rc.pass);

    // unbalanced scalars s_k = 4^{n_k} blow up r2 on a deep test vector
    let scalars: Vec<f64> = indices.iter().map(|&n| 4.0f64.powi(n as i32)).collect();
    let wu = shift_witness(2.0, dim, &indices, scalars, true);
    let ru = verify_criterion(&t2, &wu, 4, 1e-6).unwrap();
    assert!(!ru.pass, "unbalanced witness must fail");
    assert!(ru.r2.windows(2).all(|w| w[1] > w[0]), "r2 must grow");
    println!("criterion 7: pass (2B witness r1 = 0 exactly; combined maxima exact; unbalanced witness fails)");
}

#[test]
fn criterion_8_classifier_table() {
    let symbolic = |kind: SpectrumKind| SpectrumDescriptor {
        kind,
        provenance: Provenance::SymbolicFact,
        truncation_unreliable: false,
    };
    let turn = |t: f64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
    let cases: Vec<(SpectrumDescriptor, Option<Angle>, RPlusDecision)> = vec![
        (symbolic(SpectrumKind::Empty), None, RPlusDecision::RplusSupercyclic),
        (
            symbolic(SpectrumKind::Singleton { z: c(-1.0) }),
            Some(Angle::exact(1, 2)),
            RPlusDecision::NotRplus,
        ),
        (
            symbolic(SpectrumKind::Singleton { z: Complex64::new(0.0, 1.0) }),
            Some(Angle::exact(1, 4)),
            RPlusDecision::NotRplus,
        ),
        (
            symbolic(SpectrumKind::Singleton { z: turn(3.0 / 7.0) }),
            Some(Angle::exact(3, 7)),
            RPlusDecision::NotRplus,
        ),
        (
            symbolic(SpectrumKind::Singleton { z: turn(0.618_033_988_749_894_9) }),
            None,
            RPlusDecision::RplusSupercyclic,
        ),
    ];
    for (i, (spec, phase, expected)) in cases.iter().enumerate() {
        let verdict = classify_rplus(true, spec, phase.clone(), 1_000_000);
        assert_eq!(verdict.verdict, *expected, "fixture {i}");
        if i == cases.len() - 1 {
            assert!(
                matches!(verdict.certainty, Some(Certainty::UpToBounds { .. })),
                "irrational verdict must carry its bounds"
            );
        }
    }
    // at most q distinct phases for every exact order-q fixture
    for q in [2i64, 3, 4, 7] {
        let angle = Angle::exact(1, q);
        let z = turn(angle.value());
        let t = OperatorModel::scalar_multiple(z, OperatorModel::Identity { dim: 2 });
        let f = Vector::complex(vec![c(1.0), c(0.0)]);
        let x = Vector::complex(vec![c(1.0), c(0.3)]);
        let r = ray_obstruction_check(&t, &f, &angle, 1.0, &x, 100).unwrap();
        assert!(r.obstruction_confirmed, "order {q}");
        assert!(r.distinct_phases as i64 <= q, "order {q}: {} phases", r.distinct_phases);
    }
    println!("criterion 8: pass (dichotomy fixture table; <= q phases for each exact order-q fixture)");
}

#[test]
fn criterion_9_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_lindyn");
    // byte-identical reports across 1 and 8 workers
    let d1 = tempfile::tempdir().unwrap();
    let d8 = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&d1, "1"), (&d8, "8")] {
        let out = Command::new(bin)
            .args(["direct-sum-cyclicity", "--seed", "13", "--jobs", jobs, "--out-dir"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(d1.path().join("direct-sum-cyclicity.json")).unwrap();
    let b = std::fs::read(d8.path().join("direct-sum-cyclicity.json")).unwrap();
    assert_eq!(a, b, "reports differ across worker counts");
    // schema validation over a sample of subcommand outputs
    let dir = tempfile::tempdir().unwrap();
    for sub in ["krylov", "asymptotics", "rplus-classify", "torus-closure"] {
        let out = Command::new(bin)
            .args([sub, "--out-dir"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{sub} failed");
        let check = Command::new(bin)
            .args(["validate-report", "--file"])
            .arg(dir.path().join(format!("{sub}.json")))
            .output()
            .unwrap();
        assert!(check.status.success(), "{sub} schema");
    }
    // exit codes: pass -> 0 (above), failing check -> 1, config error -> 2
    let cfg = dir.path().join("short.toml");
    std::fs::write(&cfg, "[params]\nn = 50\n").unwrap();
    let fail = Command::new(bin)
        .args(["orbit-coverage", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = \"zero\"\n").unwrap();
    let usage = Command::new(bin)
        .args(["krylov", "--config"])
        .arg(&bad)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    println!("criterion 9: pass (deterministic reports, schema-valid outputs, exit-code contract)");
}
