//! End-to-end acceptance run: eight criteria, each printed as PASS/FAIL with
//! its runtime. Runs without the test harness so the lines always show.

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symdisc::dilation::{build_dilation, central_gamma_unitary_check, compression_residual, verify_dilation};
use symdisc::geometry::{
    boundary_margin, in_b_gamma, in_gamma, in_gamma_minus_b, in_half_gamma, BoundaryMethod, GammaMethod, PointPair,
};
use symdisc::linalg::{c64, identity, numerical_radius, op_norm, rmat};
use symdisc::pair::{
    fundamental_operator, is_gamma_contraction, is_gamma_contraction_strict, is_gamma_unitary, OperatorPair,
    UnitaryMethod, Verdict,
};
use symdisc::repro::{self, CommuteParams, NormalParams, Report};
use symdisc::sample;
use symdisc::symmetrization::{decompose, embed_and_split, factorization_search, symmetrize_ops, DecompositionStatus};
use symdisc::{ComplexMatrix, Tolerances};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report_ok(r: &Report) -> Outcome {
    let failed: Vec<_> = r.failed_checks().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    ensure(r.passed && failed.is_empty(), || format!("{}: {}", r.example, failed.join("; ")))
}

fn pair(s: ComplexMatrix, p: ComplexMatrix) -> OperatorPair {
    OperatorPair::new(s, p, Tolerances::default()).unwrap()
}

fn zeros2() -> ComplexMatrix {
    ComplexMatrix::zeros(2, 2)
}

/// Symmetrization of random commuting contractions that certifies; the
/// number of rejected draws is returned alongside.
fn certified_pairs(
    rng: &mut ChaCha8Rng,
    count: usize,
    dims: std::ops::RangeInclusive<usize>,
) -> (Vec<OperatorPair>, usize) {
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < count {
        let n = rng.random_range(dims.clone());
        let (t1, t2) = sample::commuting_contractions(rng, n);
        let pr = symmetrize_ops(&t1, &t2, &Tolerances::default()).unwrap();
        if is_gamma_contraction(&pr).unwrap().is_certified() {
            out.push(pr);
        } else {
            rejected += 1;
        }
    }
    (out, rejected)
}

/// `{S, 0}` only, as unordered factor pairs.
fn only_trivial_factors(pr: &OperatorPair, seed: u64) -> Outcome {
    let found = factorization_search(pr, 500, seed).map_err(|e| e.to_string())?;
    let n = pr.dim();
    let near = |a: &ComplexMatrix, b: &ComplexMatrix| (a - b).norm() <= 1e-6;
    let ok = found.len() == 2
        && found.iter().any(|(t1, _)| near(t1, &pr.s))
        && found.iter().any(|(t1, _)| near(t1, &ComplexMatrix::zeros(n, n)));
    ensure(ok, || format!("search found {} factorizations", found.len()))
}

fn criterion_1() -> Outcome {
    // ω([[ε, ε], [0, 0]]) = ε(√2+1)/2: the field of values is an elliptical
    // disc with foci 0, ε and minor axis ε.
    for eps in [0.01, 0.3, 1.0 / 1.3, 1.0, 1.7] {
        let omega = numerical_radius(&repro::s_epsilon(eps));
        ensure((omega - eps * (SQRT_2 + 1.0) / 2.0).abs() <= 1e-8, || format!("ω(S_{eps}) = {omega}"))?;
    }
    ensure((numerical_radius(&repro::s_epsilon(1.0)) - 1.207).abs() < 5e-4, || "ω(S_1) ≉ 1.207".into())?;

    let eps = 1.0 / 1.3;
    let pr = pair(repro::s_epsilon(eps), zeros2());
    let omega = numerical_radius(&pr.s);
    let norm = op_norm(&pr.s);
    ensure(omega < 1.0, || format!("ω = {omega}"))?;
    ensure((norm - SQRT_2 / 1.3).abs() <= 1e-10 && norm > 1.0, || format!("‖S‖ = {norm}"))?;
    ensure((norm - 1.0879).abs() < 5e-5, || format!("‖S‖ = {norm} ≉ 1.0879"))?;

    let strict = is_gamma_contraction_strict(&pr).map_err(|e| e.to_string())?;
    ensure(strict.holds, || format!("strict criterion value {}", strict.value))?;
    let f = fundamental_operator(&pr).map_err(|e| e.to_string())?;
    ensure(f.omega <= 1.0 + 1e-8 && f.residual <= 1e-8, || format!("ω(F) = {}", f.omega))?;
    let report = is_gamma_contraction(&pr).map_err(|e| e.to_string())?;
    ensure(report.overall == Verdict::CertifiedContraction, || format!("{:?}", report.overall))?;

    let dec = decompose(&pr, true);
    ensure(dec.status == DecompositionStatus::NormBoundFail, || format!("{:?}", dec.status))?;
    only_trivial_factors(&pr, 0)?;
    report_ok(&repro::repro_example_3_3(eps, 0).map_err(|e| e.to_string())?)
}

fn criterion_2() -> Outcome {
    for r in [0.001, 0.005, 0.009] {
        let pr = pair(repro::s_r(r), zeros2());
        let omega = numerical_radius(&pr.s);
        ensure(omega <= (2.0 + r * r - r) / 2.0 + 1e-8, || format!("r = {r}: ω = {omega}"))?;
        let norm = op_norm(&pr.s);
        ensure(norm > 2.0 - r - 1e-10 && norm <= 2.0, || format!("r = {r}: ‖S_r‖ = {norm}"))?;
        let report = is_gamma_contraction(&pr).map_err(|e| e.to_string())?;
        ensure(report.is_certified(), || format!("r = {r}: {:?}", report.overall))?;
        only_trivial_factors(&pr, 0).map_err(|e| format!("r = {r}: {e}"))?;
    }
    let (r_hat, norm) = repro::delta_chase(0.01).map_err(|e| e.to_string())?;
    ensure(norm > 2.0 - 0.01 && norm <= 2.0, || format!("r̂ = {r_hat}: ‖S_r̂‖ = {norm}"))?;
    ensure((op_norm(&repro::s_r(r_hat)) - norm).abs() == 0.0, || "δ-chase norm not reproducible".into())?;
    report_ok(&repro::repro_example_3_5(0.005, 0.01, 0).map_err(|e| e.to_string())?)
}

fn check_embedding(pr: &OperatorPair, label: &str) -> Outcome {
    let e = embed_and_split(pr).map_err(|e| format!("{label}: {e}"))?;
    let n = pr.dim();
    let s2 = symdisc::linalg::direct_sum(&pr.s, &pr.s);
    let p2 = symdisc::linalg::direct_sum(&pr.p, &pr.p);
    let sum = op_norm(&(&e.t1 + &e.t2 - &s2));
    let prod = op_norm(&(&e.t1 * &e.t2 - &p2)).max(op_norm(&(&e.t2 * &e.t1 - &p2)));
    ensure(sum <= 1e-10 && prod <= 1e-10, || format!("{label}: residuals {sum:e}, {prod:e}"))?;
    let (n1, n2) = (op_norm(&e.t1), op_norm(&e.t2));
    ensure(n1 <= 2.0 + 1e-8 && n2 <= 2.0 + 1e-8, || format!("{label}: norms {n1}, {n2}"))?;
    // Compressing to the first copy of H gives back (S, P).
    let top = |m: ComplexMatrix| m.view((0, 0), (n, n)).into_owned();
    ensure(op_norm(&(top(&e.t1 + &e.t2) - &pr.s)) <= 1e-14, || format!("{label}: compression"))?;
    // embed_and_split errors unless the doubled pair certifies again.
    ensure(e.sum_residual <= 1e-10 && e.product_residual <= 1e-10, || format!("{label}: reported residuals"))
}

fn criterion_3() -> Outcome {
    check_embedding(&pair(repro::s_epsilon(1.0 / 1.3), zeros2()), "S_ε")?;
    for r in [0.001, 0.005, 0.009] {
        check_embedding(&pair(repro::s_r(r), zeros2()), &format!("S_{r}"))?;
    }
    check_embedding(&pair(zeros2(), zeros2()), "(0, 0)")?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xe3b);
    let (pairs, rejected) = certified_pairs(&mut rng, 100, 1..=6);
    ensure(rejected <= 10, || format!("{rejected} random draws not certified"))?;
    for (i, pr) in pairs.iter().enumerate() {
        check_embedding(pr, &format!("random #{i}"))?;
    }
    Ok(())
}

/// Independent membership oracle: both roots of `z² − sz + p` in the
/// closed disc of radius `radius`, via the textbook quadratic formula.
fn oracle(s: Complex64, p: Complex64, radius: f64) -> bool {
    let d = (s * s - p * 4.0).sqrt();
    let (z1, z2) = ((s + d) / 2.0, (s - d) / 2.0);
    z1.norm().max(z2.norm()) <= radius
}

fn random_point(rng: &mut ChaCha8Rng) -> PointPair {
    match rng.random_range(0..4) {
        // Symmetrization of the closed bidisc, some points pushed out.
        0 => {
            let z1 = sample::disc_point(rng, 1.05);
            let z2 = sample::disc_point(rng, 1.05);
            PointPair::new(z1 + z2, z1 * z2)
        }
        1 => {
            let z1 = sample::circle_point(rng) * rng.random_range(0.9..1.1);
            let z2 = sample::circle_point(rng) * rng.random_range(0.0..1.1);
            PointPair::new(z1 + z2, z1 * z2)
        }
        _ => PointPair::new(sample::disc_point(rng, 2.5), sample::disc_point(rng, 1.3)),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1a2);
    let mut compared = 0usize;
    for _ in 0..100_000 {
        let pt = random_point(&mut rng);
        let margin = boundary_margin(pt);
        let truth = oracle(pt.s, pt.p, 1.0);
        if margin > 1e-7 {
            compared += 1;
            for m in GammaMethod::ALL {
                ensure(in_gamma(pt, m) == truth, || format!("{} disagrees at {pt:?}", m.name()))?;
            }
            let expected = truth && (pt.p.norm() - 1.0).abs() > 1e-7;
            ensure(in_gamma_minus_b(pt) == expected, || format!("Γ∖bΓ at {pt:?}"))?;
            ensure(!in_b_gamma(pt, BoundaryMethod::Modulus) && !in_b_gamma(pt, BoundaryMethod::NewLemma), || {
                format!("bΓ away from |p| = 1 at {pt:?}")
            })?;
        }
        // Scaling identity for the half-bidisc, exactly.
        let scaled = PointPair::new(pt.s * 2.0, pt.p * 4.0);
        ensure(in_half_gamma(pt) == in_gamma(scaled, GammaMethod::Roots), || format!("half scaling at {pt:?}"))?;
        if boundary_margin(scaled) > 1e-7 {
            ensure(in_half_gamma(pt) == oracle(pt.s, pt.p, 0.5), || format!("half oracle at {pt:?}"))?;
        }
    }
    ensure(compared > 90_000, || format!("only {compared} points outside the band"))?;

    // Distinguished boundary: images of the torus, and both tests agree.
    for _ in 0..20_000 {
        let z1 = sample::circle_point(&mut rng);
        let z2 = sample::circle_point(&mut rng);
        let pt = PointPair::new(z1 + z2, z1 * z2);
        let a = in_b_gamma(pt, BoundaryMethod::Modulus);
        let b = in_b_gamma(pt, BoundaryMethod::NewLemma);
        ensure(a && b, || format!("torus point {pt:?}: {a} {b}"))?;
        ensure(in_gamma(pt, GammaMethod::Roots) && !in_gamma_minus_b(pt), || format!("partition at {pt:?}"))?;
    }
    Ok(())
}

fn check_fundamental(pr: &OperatorPair, label: &str) -> Outcome {
    let f = fundamental_operator(pr).map_err(|e| format!("{label}: {e}"))?;
    // Residual recomputed from scratch; D_P squared must give I − P*P.
    let n = pr.dim();
    let dp2 = identity(n) - pr.p.adjoint() * &pr.p;
    ensure(op_norm(&(&f.dp * &f.dp - &dp2)) <= 1e-10, || format!("{label}: D_P² ≠ I − P*P"))?;
    let c = &pr.s - pr.s.adjoint() * &pr.p;
    let residual = op_norm(&(&f.dp * f.full() * &f.dp - c));
    ensure(residual <= 1e-8, || format!("{label}: residual {residual:e}"))?;
    if f.defect_dim() > 0 {
        let omega = numerical_radius(&f.f);
        ensure(omega <= 1.0 + 1e-8, || format!("{label}: ω(F) = {omega}"))?;
    }
    ensure(f.path_gap <= 1e-7, || format!("{label}: solve paths differ by {:e}", f.path_gap))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
    let mut done = 0;
    while done < 200 {
        let n = rng.random_range(1..=5);
        let (t1, t2) = sample::commuting_contractions(&mut rng, n);
        let pr = symmetrize_ops(&t1, &t2, &Tolerances::default()).map_err(|e| e.to_string())?;
        check_fundamental(&pr, &format!("pair #{done}"))?;
        check_fundamental(&pr.adjoint(), &format!("adjoint #{done}"))?;
        done += 1;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd11a);
    let (pairs, _) = certified_pairs(&mut rng, 20, 1..=3);
    for (i, pr) in pairs.iter().enumerate() {
        let trunc = build_dilation(pr, 8).map_err(|e| e.to_string())?;
        let residual = compression_residual(&trunc, &pr.s, &pr.p, 6);
        ensure(residual <= 1e-8, || format!("#{i}: compression residual {residual:e}"))?;
        for blocks in [7, 9, 12] {
            let other = verify_dilation(pr, blocks, 6).map_err(|e| e.to_string())?;
            ensure((other - residual).abs() <= 1e-10, || format!("#{i}: N = {blocks} changes residual"))?;
        }
        let check = central_gamma_unitary_check(&trunc);
        ensure(check.max_violation <= 1e-8, || format!("#{i}: {check:?}"))?;
        ensure(check.t0_norm <= 2.1 && check.u0_norm <= 1.1, || format!("#{i}: {check:?}"))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let first = repro::repro_counterexample_noncommuting_f(&CommuteParams::default()).map_err(|e| e.to_string())?;
    report_ok(&first)?;
    ensure(first.scalars["comm_f_f1"] > 0.01, || "‖[F, F₁]‖ too small".into())?;
    for key in ["comm_s_p", "comm_s1_p", "comm_s_s1"] {
        ensure(first.scalars[key] <= 1e-10, || format!("{key} = {}", first.scalars[key]))?;
    }
    let second = repro::repro_counterexample_nonnormal_f(&NormalParams::default()).map_err(|e| e.to_string())?;
    report_ok(&second)?;
    ensure(second.scalars["max_commutator"] <= 1e-10, || "second example does not commute".into())?;
    ensure(second.scalars["self_commutator_f"] <= 1e-8, || "F not normal".into())?;
    ensure(second.scalars["self_commutator_f1"] > 0.01, || "F₁ normal".into())?;
    for r in [&first, &second] {
        for key in ["gamma_contraction_s", "gamma_contraction_s1"] {
            ensure(r.verdicts[key] == "CERTIFIED_CONTRACTION", || format!("{}: {key}", r.example))?;
        }
    }
    // In the second example F is A ⊕ 0 and F₁ is B ⊕ 0.
    let params = NormalParams::default();
    let t = &params.t;
    let s = symdisc::linalg::block2(&params.a, &params.a.adjoint(), &(params.a.adjoint() * t), &params.a);
    let p = symdisc::linalg::block2(&zeros2(), &identity(2), t, &zeros2());
    let f = fundamental_operator(&pair(s, p)).map_err(|e| e.to_string())?;
    let expected = symdisc::linalg::direct_sum(&params.a, &zeros2());
    ensure(op_norm(&(f.full() - expected)) <= 1e-8, || "F ≠ A ⊕ 0".into())?;
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8u64);
    for i in 0..200 {
        let n = rng.random_range(1..=4);
        let (u1, u2) = sample::commuting_unitaries(&mut rng, n);
        let pr = symmetrize_ops(&u1, &u2, &Tolerances::default()).map_err(|e| e.to_string())?;
        let a = is_gamma_unitary(&pr, UnitaryMethod::Algebraic);
        let b = is_gamma_unitary(&pr, UnitaryMethod::NewChar);
        ensure(a && b, || format!("unitary #{i}: {a} {b}"))?;
    }
    for i in 0..200 {
        let n = rng.random_range(1..=4);
        let (t1, t2) = sample::commuting_contractions(&mut rng, n);
        // Shrink so that P is far from unitary.
        let (t1, t2) = (t1 * c64(0.9, 0.0), t2 * c64(0.9, 0.0));
        let pr = symmetrize_ops(&t1, &t2, &Tolerances::default()).map_err(|e| e.to_string())?;
        let a = is_gamma_unitary(&pr, UnitaryMethod::Algebraic);
        let b = is_gamma_unitary(&pr, UnitaryMethod::NewChar);
        ensure(!a && !b, || format!("non-unitary #{i}: {a} {b}"))?;
    }
    // Mixed: unitary on one summand only.
    let mixed = pair(rmat(2, 2, &[0.0, 0.0, 0.0, 0.5]), rmat(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    let a = is_gamma_unitary(&mixed, UnitaryMethod::Algebraic);
    let b = is_gamma_unitary(&mixed, UnitaryMethod::NewChar);
    ensure(a == b && !a, || format!("mixed pair: {a} {b}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 S_ε example numbers", 5, criterion_1),
        ("2 S_r family", 10, criterion_2),
        ("3 H ⊕ H embedding", 30, criterion_3),
        ("4 scalar characterizations", 10, criterion_4),
        ("5 fundamental operator", 60, criterion_5),
        ("6 dilation compression", 120, criterion_6),
        ("7 fundamental operator counterexamples", 10, criterion_7),
        ("8 Γ-unitary characterizations", 20, criterion_8),
    ];
    let mut failures = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(limit), || format!("took {elapsed:.2?}, limit {limit} s"))
        });
        match &outcome {
            Ok(()) => println!("PASS criterion {name} ({:.2} s)", elapsed.as_secs_f64()),
            Err(why) => {
                println!("FAIL criterion {name} ({:.2} s): {why}", elapsed.as_secs_f64());
                failures.push(name);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed: {failures:?}");
        std::process::exit(1);
    }
}
