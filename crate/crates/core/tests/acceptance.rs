//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::time::{Duration, Instant};

use bilinear_control::analysis::{
    decide_controllability, transversality_with, Certificate, Conclusion, DecideConfig,
    NormDirection,
};
use bilinear_control::foliation::{
    arc_family, phi_constancy, FirstReturnConfig, RadialDistribution,
};
use bilinear_control::matlie::{default_depth_cap, lie_closure, so3_generators, Matrix, Vector};
use bilinear_control::model::{
    builtin_corpus, hyperbolic_d, project_sphere, random_system, rotation_j, ControlSchedule,
    MatrixFamily, SystemSpec,
};
use bilinear_control::reach::{
    approx_reach_test, coverage, endpoint, explore_attainable, sample_attainable,
    simulate_bilinear, simulate_bilinear_sampled, simulate_smooth, CoverageGrid, ExploreConfig,
    SamplerConfig,
};
use bilinear_control::sphere::{rng_for, seeded_unit_points};
use nalgebra::DMatrix;
use num::{BigInt, BigRational, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn v(x: &[f64]) -> Vector {
    Vector::from_column_slice(x)
}

// ---------- exact closure oracle ----------

type Q = BigRational;

fn q(i: i64) -> Q {
    Q::from_integer(BigInt::from(i))
}

fn exact(m: &Matrix) -> Vec<Vec<Q>> {
    m.row_iter()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    assert_eq!(x, x.round(), "oracle takes integer matrices");
                    q(x as i64)
                })
                .collect()
        })
        .collect()
}

fn qmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Q::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn qbracket(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let ab = qmul(a, b);
    let ba = qmul(b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

/// Reduces `v` against an echelon basis; returns the residual.
fn reduce(echelon: &[(usize, Vec<Q>)], mut v: Vec<Q>) -> Vec<Q> {
    for (pivot, row) in echelon {
        if !v[*pivot].is_zero() {
            let f = v[*pivot].clone() / &row[*pivot];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
    }
    v
}

/// Brute-force closure: bracket every pair of the current spanning set until
/// exact elimination admits nothing new.
fn exact_closure_dim(gens: &[Matrix]) -> usize {
    let mut span: Vec<Vec<Vec<Q>>> = Vec::new();
    let mut echelon: Vec<(usize, Vec<Q>)> = Vec::new();
    let admit =
        |m: Vec<Vec<Q>>, span: &mut Vec<Vec<Vec<Q>>>, echelon: &mut Vec<(usize, Vec<Q>)>| {
            let flat: Vec<Q> = m.iter().flatten().cloned().collect();
            let r = reduce(echelon, flat);
            if let Some(p) = r.iter().position(|x| !x.is_zero()) {
                echelon.push((p, r));
                span.push(m);
                true
            } else {
                false
            }
        };
    for g in gens {
        admit(exact(g), &mut span, &mut echelon);
    }
    loop {
        let mut grew = false;
        let current = span.clone();
        for a in &current {
            for b in &current {
                grew |= admit(qbracket(a, b), &mut span, &mut echelon);
            }
        }
        if !grew {
            return span.len();
        }
    }
}

fn e12() -> Matrix {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

fn e21() -> Matrix {
    DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0])
}

fn ac1() -> Outcome {
    let cases: Vec<(&str, Vec<Matrix>, usize)> = vec![
        ("{E12,E21}", vec![e12(), e21()], 3),
        ("so(3)", so3_generators().to_vec(), 3),
        ("{J}", vec![rotation_j()], 1),
        ("{J,D}", vec![rotation_j(), hyperbolic_d()], 3),
        (
            "{I+J,I+D}",
            builtin_corpus("expanding_pair")
                .unwrap()
                .family()
                .unwrap()
                .matrices()
                .to_vec(),
            4,
        ),
    ];
    let mut parts = Vec::new();
    for (name, gens, expected) in cases {
        let n = gens[0].nrows();
        let basis = lie_closure(&gens, 1e-9, default_depth_cap(n)).map_err(|e| e.to_string())?;
        let oracle = exact_closure_dim(&gens);
        ensure(
            basis.dim() == oracle && oracle == expected && basis.converged(),
            || {
                format!(
                    "{name}: closure {} oracle {oracle} expected {expected}",
                    basis.dim()
                )
            },
        )?;
        ensure(basis.closure_defect() <= 10.0 * 1e-9, || {
            format!("{name}: defect {}", basis.closure_defect())
        })?;
        parts.push(format!("{name}={}", basis.dim()));
    }
    Ok(parts.join(" "))
}

// ---------- duality of transversality and projected rank ----------

fn float_closure(gens: &[Matrix]) -> Vec<Matrix> {
    // plain Gram-Schmidt brute force, independent of the library routine
    let mut basis: Vec<Matrix> = Vec::new();
    let push = |m: &Matrix, basis: &mut Vec<Matrix>| {
        let mut r = m.clone();
        for _ in 0..2 {
            for b in basis.iter() {
                let c = r.dot(b);
                r -= b * c;
            }
        }
        if r.norm() > 1e-9 * m.norm().max(1.0) {
            let nr = r.norm();
            basis.push(r / nr);
            true
        } else {
            false
        }
    };
    for g in gens {
        push(g, &mut basis);
    }
    loop {
        let mut grew = false;
        let current = basis.clone();
        for a in &current {
            for b in &current {
                grew |= push(&(a * b - b * a), &mut basis);
            }
        }
        if !grew {
            return basis;
        }
    }
}

fn randn(rng: &mut impl Rng, n: usize) -> Matrix {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Twenty 3×3 pairs of five structures: generic, skew, conjugated skew,
/// diagonal, and identity plus skew.
fn duality_systems() -> Vec<(String, MatrixFamily)> {
    (0..20u64)
        .map(|s| {
            let mut rng = rng_for(1000 + s, 0);
            let a = randn(&mut rng, 3);
            let b = randn(&mut rng, 3);
            let skew = |m: &Matrix| m - m.transpose();
            let (kind, mats) = match s % 5 {
                0 => ("generic", vec![a, b]),
                1 => ("skew", vec![skew(&a), skew(&b)]),
                2 => {
                    let g = randn(&mut rng, 3) + Matrix::identity(3, 3) * 3.0;
                    let gi = g.clone().try_inverse().unwrap();
                    (
                        "conjugated_skew",
                        vec![&g * skew(&a) * &gi, &g * skew(&b) * &gi],
                    )
                }
                3 => (
                    "diagonal",
                    vec![
                        Matrix::from_diagonal(&a.diagonal()),
                        Matrix::from_diagonal(&b.diagonal()),
                    ],
                ),
                _ => ("identity_skew", vec![Matrix::identity(3, 3), skew(&a)]),
            };
            (format!("{kind}{s}"), MatrixFamily::new(mats, None).unwrap())
        })
        .collect()
}

fn ac2() -> Outcome {
    let tol = 1e-9;
    let (mut agree, mut total, mut transversal) = (0, 0, 0);
    for (name, fam) in duality_systems() {
        let basis =
            lie_closure(fam.matrices(), tol, default_depth_cap(3)).map_err(|e| e.to_string())?;
        let oracle_basis = float_closure(fam.matrices());
        for x in seeded_unit_points(3, 50, 77) {
            let lib = transversality_with(&basis, &x).map_err(|e| e.to_string())?;
            let mut proj = DMatrix::zeros(3, oracle_basis.len());
            for (k, l) in oracle_basis.iter().enumerate() {
                proj.set_column(k, &project_sphere(l, &x).map_err(|e| e.to_string())?);
            }
            let svd = proj.svd(false, false);
            let top = svd.singular_values.max().max(1.0);
            let rank = svd
                .singular_values
                .iter()
                .filter(|&&s| s > tol * top)
                .count();
            let oracle = rank == 2;
            total += 1;
            transversal += usize::from(lib);
            if lib == oracle {
                agree += 1;
            } else {
                return Err(format!("{name}: disagreement at {:?}", x.as_slice()));
            }
        }
    }
    ensure(total == 1000 && agree == total, || {
        format!("{agree}/{total}")
    })?;
    Ok(format!("{agree}/{total} agree ({transversal} transversal)"))
}

// ---------- certificates ----------

fn quick_decide() -> DecideConfig {
    DecideConfig {
        samples: 1000,
        ..DecideConfig::default()
    }
}

fn ac3() -> Outcome {
    let tol = 1e-9;
    let so3 = builtin_corpus("so3").unwrap();
    let verdict = decide_controllability(&so3, &quick_decide()).map_err(|e| e.to_string())?;
    let sigma = match &verdict.conclusion {
        Conclusion::NotControllable {
            certificate: Certificate::LarcFailure { x, dim, .. },
        } => {
            ensure(*dim < 3, || format!("so3 witness dim {dim}"))?;
            // re-verify with an independent closure
            let basis = float_closure(so3.family().unwrap().matrices());
            let xv = v(x);
            let mut m = DMatrix::zeros(3, basis.len());
            for (k, l) in basis.iter().enumerate() {
                m.set_column(k, &(l * &xv));
            }
            let mut s: Vec<f64> = m
                .svd(false, false)
                .singular_values
                .iter()
                .copied()
                .collect();
            s.sort_by(|a, b| b.total_cmp(a));
            ensure(s[2] <= tol * s[0], || {
                format!("so3 sigma_3 {} vs sigma_1 {}", s[2], s[0])
            })?;
            s[2] / s[0]
        }
        other => return Err(format!("so3: {other:?}")),
    };

    let ep = builtin_corpus("expanding_pair").unwrap();
    let verdict = decide_controllability(&ep, &quick_decide()).map_err(|e| e.to_string())?;
    ensure(
        matches!(
            verdict.conclusion,
            Conclusion::NotControllable {
                certificate: Certificate::MonotoneNorm {
                    direction: NormDirection::Nondecreasing,
                    ..
                }
            }
        ),
        || format!("expanding_pair: {:?}", verdict.conclusion),
    )?;
    let x0 = v(&[1.0, 0.0]);
    let cloud = sample_attainable(&ep, &x0, 10_000, 0, &SamplerConfig::default())
        .map_err(|e| e.to_string())?;
    let worst = cloud
        .points
        .iter()
        .map(|p| p.norm())
        .fold(f64::INFINITY, f64::min);
    ensure(cloud.points.len() == 10_000 && worst >= 1.0 - 1e-9, || {
        format!("{} endpoints, smallest norm {worst}", cloud.points.len())
    })?;

    let id = builtin_corpus("identity_only").unwrap();
    let verdict = decide_controllability(&id, &quick_decide()).map_err(|e| e.to_string())?;
    ensure(
        matches!(verdict.conclusion, Conclusion::NotControllable { .. }),
        || format!("identity_only: {:?}", verdict.conclusion),
    )?;
    Ok(format!(
        "so3 LARC witness sigma_3/sigma_1={sigma:.1e}; expanding_pair min |x|={worst:.6} over 1e4; identity_only refuted"
    ))
}

// ---------- empirical controllability ----------

fn ac4() -> Outcome {
    let jd = builtin_corpus("planar_jd").unwrap();
    let x0 = v(&[1.0, 0.0]);
    let grid = CoverageGrid::default_annulus(2, false).map_err(|e| e.to_string())?;
    let sampler = SamplerConfig::default();
    let explored = explore_attainable(
        &jd,
        &x0,
        100_000,
        0,
        &sampler,
        &grid,
        &ExploreConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let guided = coverage(&explored.cloud, &grid).fraction;
    let independent = coverage(
        &sample_attainable(&jd, &x0, 100_000, 0, &sampler).map_err(|e| e.to_string())?,
        &grid,
    )
    .fraction;
    ensure(guided >= 0.99, || format!("coverage {guided}"))?;

    let target = v(&[0.0, 2.0]);
    let test = approx_reach_test(&jd, &x0, &target, 1e-2, 10_000, 0, &sampler)
        .map_err(|e| e.to_string())?;
    let witness = test.witness.ok_or("no witness")?;
    let replay =
        simulate_bilinear(jd.family().unwrap(), &witness, &x0).map_err(|e| e.to_string())?;
    let miss = (replay.endpoint() - &target).norm();
    ensure(test.hit && miss <= 1e-2, || {
        format!("witness replays {miss} away")
    })?;

    let hand = ControlSchedule::attainable([(1, LN_2), (0, FRAC_PI_2)]);
    let hand_end =
        simulate_bilinear(jd.family().unwrap(), &hand, &x0).map_err(|e| e.to_string())?;
    let hand_miss = (hand_end.endpoint() - &target).norm();
    ensure(hand_miss <= 1e-10, || {
        format!("hand schedule misses by {hand_miss}")
    })?;
    Ok(format!(
        "coverage {guided:.4} (guided; independent sampler {independent:.4}); witness miss {miss:.1e}; hand miss {hand_miss:.1e}"
    ))
}

// ---------- consistency harness ----------

fn ac5() -> Outcome {
    let mut systems: Vec<SystemSpec> = [
        "so3",
        "planar_jd",
        "expanding_pair",
        "identity_only",
        "example1",
    ]
    .iter()
    .map(|n| builtin_corpus(n).unwrap())
    .collect();
    for s in 0..50u64 {
        let n = 2 + (s % 2) as usize;
        let m = 1 + (s % 3) as usize;
        systems.push(random_system(n, m, s).unwrap());
    }
    let config = DecideConfig {
        samples: 500,
        always_sample: true,
        ..DecideConfig::default()
    };
    let (mut refuted, mut covered, mut undetermined) = (0, 0, 0);
    for spec in &systems {
        let verdict =
            decide_controllability(spec, &config).map_err(|e| format!("{}: {e}", spec.name()))?;
        let high = verdict
            .coverage_fraction()
            .is_some_and(|f| f >= config.coverage_threshold);
        let certified = matches!(verdict.conclusion, Conclusion::NotControllable { .. });
        ensure(!(certified && high), || {
            format!(
                "{}: certificate and coverage {:?}",
                spec.name(),
                verdict.coverage_fraction()
            )
        })?;
        if high && spec.family().is_some() {
            ensure(
                verdict.orbit_dim_profile.iter().all(|&d| d == spec.n()),
                || format!("{}: covered but orbit profile not constant n", spec.name()),
            )?;
        }
        refuted += usize::from(certified);
        covered += usize::from(high);
        undetermined += usize::from(matches!(
            verdict.conclusion,
            Conclusion::Undetermined { .. }
        ));
    }
    Ok(format!(
        "{} systems: {refuted} certified, {covered} covered, {undetermined} undetermined, 0 conflicts",
        systems.len()
    ))
}

// ---------- first-return mechanism ----------

fn ac6() -> Outcome {
    let cfg = FirstReturnConfig::default();
    let sphere = RadialDistribution::sphere(3).map_err(|e| e.to_string())?;
    let phi = phi_constancy(&sphere, 64, 0, 1e-6, &cfg).map_err(|e| e.to_string())?;
    let arcs = arc_family(&sphere, 64, 0, 65, &cfg).map_err(|e| e.to_string())?;
    let to_pole = (v(&arcs.return_point) - v(&[0.0, 0.0, -1.0])).norm();
    ensure(
        phi.constant && phi.max_deviation <= 1e-6 && to_pole <= 1e-6,
        || {
            format!(
                "sphere deviation {} return offset {to_pole}",
                phi.max_deviation
            )
        },
    )?;

    let graph = RadialDistribution::radial_graph(3, 0.3).map_err(|e| e.to_string())?;
    let phi_g = phi_constancy(&graph, 64, 0, 1e-6, &cfg).map_err(|e| e.to_string())?;
    let arcs_g = arc_family(&graph, 64, 0, 65, &cfg).map_err(|e| e.to_string())?;
    let closed_form = (-0.6f64).exp();
    let err = phi_g
        .values
        .iter()
        .map(|s| (s - closed_form).abs())
        .fold(0.0, f64::max);
    ensure(phi_g.constant && err <= 1e-5, || {
        format!("radial graph |p_theta| error {err}")
    })?;
    let tangency = arcs.tangency_residual.max(arcs_g.tangency_residual);
    ensure(tangency <= 1e-8, || format!("tangency {tangency}"))?;
    // points stay on the leaf log|x| - 0.3 x3/|x| = -0.3 through the pole
    let leaf = arcs_g
        .arcs
        .iter()
        .flatten()
        .map(|x| {
            let r = v(x).norm();
            (r.ln() - 0.3 * x[2] / r + 0.3).abs()
        })
        .fold(0.0, f64::max);
    ensure(leaf <= 1e-5, || format!("leaf residual {leaf}"))?;
    Ok(format!(
        "sphere dev {:.1e}; radial graph |p_theta| err {err:.1e} (mean {:.6}); tangency {tangency:.1e}; leaf {leaf:.1e}",
        phi.max_deviation, phi_g.mean
    ))
}

// ---------- example 1 ----------

fn ac7() -> Outcome {
    let spec = builtin_corpus("example1").unwrap();
    let sampler = SamplerConfig::default();
    let cloud = sample_attainable(&spec, &v(&[0.0, -1.0]), 10_000, 0, &sampler)
        .map_err(|e| e.to_string())?;
    let target = v(&[0.0, -2.0]);
    let closest = cloud
        .points
        .iter()
        .map(|p| (p - &target).norm())
        .fold(f64::INFINITY, f64::min);
    ensure(closest >= 0.5, || {
        format!("came within {closest} of (0,-2)")
    })?;

    let mut drift: f64 = 0.0;
    for y in [-1e-3, -0.25, -1.0, -3.0] {
        for field in [2, 3] {
            let start = v(&[0.0, y]);
            let traj = simulate_smooth(
                &spec,
                &ControlSchedule::attainable([(field, 5.0)]),
                &start,
                1e-10,
            )
            .map_err(|e| e.to_string())?;
            drift = drift.max((traj.endpoint() - &start).norm());
        }
    }
    ensure(drift <= 1e-8, || {
        format!("f3 flow moved a fixed point by {drift}")
    })?;

    let grid = CoverageGrid::new(2, 32, 1, 0.5, 2.0, false, 0).map_err(|e| e.to_string())?;
    let upper = sample_attainable(&spec, &v(&[0.0, 1.0]), 10_000, 0, &sampler)
        .map_err(|e| e.to_string())?;
    let frac = coverage(&upper, &grid).fraction;
    ensure(frac >= 0.5, || format!("angular coverage {frac}"))?;
    Ok(format!(
        "closest to (0,-2): {closest:.3}; fixed-point drift {drift:.1e}; unit-annulus angular coverage {frac:.3}"
    ))
}

// ---------- simulation exactness ----------

fn rot2(t: f64) -> Matrix {
    DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

fn axis_rotation(axis: usize, t: f64) -> Matrix {
    let (c, s) = (t.cos(), t.sin());
    let (i, j) = [(1, 2), (2, 0), (0, 1)][axis];
    let mut m = Matrix::identity(3, 3);
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m
}

fn ac8() -> Outcome {
    let jd = builtin_corpus("planar_jd").unwrap();
    let so3 = builtin_corpus("so3").unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let mut rng = rng_for(seed, 9);
        let k = rng.random_range(1..=10);
        let segs: Vec<(usize, f64)> = (0..k)
            .map(|_| (rng.random_range(0..2), rng.random_range(0.0..2.0)))
            .collect();
        let mut closed = v(&[1.0, 0.5]);
        for &(f, t) in &segs {
            closed = if f == 0 {
                rot2(t) * closed
            } else {
                Matrix::from_diagonal(&v(&[t.exp(), (-t).exp()])) * closed
            };
        }
        let got = endpoint(
            &jd,
            &ControlSchedule::attainable(segs),
            &v(&[1.0, 0.5]),
            1e-8,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max((got - &closed).norm() / closed.norm());

        let segs: Vec<(usize, f64)> = (0..k)
            .map(|_| (rng.random_range(0..3), rng.random_range(0.0..5.0)))
            .collect();
        let start = v(&[0.3, -0.4, 1.2]);
        let mut closed = start.clone();
        for &(f, t) in &segs {
            closed = axis_rotation(f, t) * closed;
        }
        let got = endpoint(&so3, &ControlSchedule::attainable(segs), &start, 1e-8)
            .map_err(|e| e.to_string())?;
        worst = worst.max((got - &closed).norm() / closed.norm());
    }
    ensure(worst <= 1e-12, || format!("closed-form mismatch {worst}"))?;

    // norm conservation for skew families over total time 100
    let mut rng = rng_for(42, 0);
    let skew4: Vec<Matrix> = (0..3)
        .map(|_| {
            let a = randn(&mut rng, 4);
            &a - a.transpose()
        })
        .collect();
    let families = [
        so3.family().unwrap().clone(),
        MatrixFamily::new(skew4, None).map_err(|e| e.to_string())?,
    ];
    let mut drift: f64 = 0.0;
    for fam in &families {
        for seed in 0..20u64 {
            let mut rng = rng_for(seed, 3);
            let raw: Vec<(usize, f64)> = (0..40)
                .map(|_| (rng.random_range(0..fam.len()), rng.random::<f64>()))
                .collect();
            let total: f64 = raw.iter().map(|s| s.1).sum();
            let sched =
                ControlSchedule::attainable(raw.into_iter().map(|(f, t)| (f, t * 100.0 / total)));
            let mut x0 = Vector::from_fn(fam.n(), |i, _| (i as f64 + 1.0).sin());
            x0 /= x0.norm();
            let traj = simulate_bilinear_sampled(fam, &sched, &x0, Some(0.25))
                .map_err(|e| e.to_string())?;
            for x in &traj.states {
                drift = drift.max((x.norm() - 1.0).abs());
            }
        }
    }
    ensure(drift <= 1e-9, || format!("norm drift {drift}"))?;
    Ok(format!(
        "closed-form rel err {worst:.1e}; skew norm drift {drift:.1e} over T=100"
    ))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome, Duration); 8] = [
        (
            "AC1",
            "Lie closure vs exact oracle",
            ac1,
            Duration::from_secs(1),
        ),
        (
            "AC2",
            "transversality/projected-rank duality",
            ac2,
            Duration::from_secs(10),
        ),
        ("AC3", "certificate soundness", ac3, Duration::from_secs(30)),
        (
            "AC4",
            "empirical controllability of planar_jd",
            ac4,
            Duration::from_secs(60),
        ),
        (
            "AC5",
            "certificate/coverage consistency",
            ac5,
            Duration::from_secs(600),
        ),
        (
            "AC6",
            "first-return map constancy",
            ac6,
            Duration::from_secs(60),
        ),
        ("AC7", "example1 behaviour", ac7, Duration::from_secs(120)),
        ("AC8", "simulation exactness", ac8, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (id, title, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{id} {status} {title} [{:.2}s] {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
