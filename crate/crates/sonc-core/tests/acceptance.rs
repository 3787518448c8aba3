//! Acceptance gate: one test per criterion, each printing a PASS line with
//! the measured values (run with `--nocapture` to see them). Criteria pin
//! specific reference values and tolerances; failures report the certified
//! value actually computed.

mod common;

use std::time::Instant;

use common::{load_instance, random_instance, rng};
use sonc_core::{
    age_witness_check, check_membership_lambda, check_membership_tau, circuit_number,
    circuit_nonnegative, dual_sonc_bound, minimize_linear_over_lambda, relaxed_bound, sample_min,
    sign_split, CircuitInstance, DualVector, Exponent, ExponentialSum, Kind, OracleConfig,
};

fn e(coords: &[f64]) -> Exponent {
    Exponent::new(coords.to_vec()).unwrap()
}

#[test]
fn criterion_01_motzkin_bound() {
    let f = load_instance("motzkin");
    let start = Instant::now();
    let outcome = dual_sonc_bound(&f).unwrap();
    let elapsed = start.elapsed();
    let b = outcome.bounded().expect("motzkin is bounded");
    assert!(
        (b.gamma_star - 26.0).abs() <= 1e-6,
        "gamma* = {}, expected 26 +- 1e-6",
        b.gamma_star
    );
    let c_expected = 3.0 * 3.0_f64.ln();
    assert!(
        (b.c_star - c_expected).abs() <= 1e-8,
        "c* = {}, expected 3 ln 3 = {c_expected} +- 1e-8",
        b.c_star
    );
    assert!(elapsed.as_millis() < 50, "took {elapsed:?}, budget 50 ms");
    println!(
        "PASS criterion 1: motzkin gamma* = {} (+-1e-6), c* = 3 ln 3 (+-1e-8), {:?}",
        b.gamma_star, elapsed
    );
}

#[test]
fn criterion_02_triangle_deg6_bound() {
    let f = load_instance("triangle_deg6");
    let start = Instant::now();
    let outcome = dual_sonc_bound(&f).unwrap();
    let elapsed = start.elapsed();
    let b = outcome.bounded().expect("bounded");
    // Analytic optimum of the two-variable program: 3 + 1/(2 sqrt 3).
    assert!(
        (b.gamma_star - 3.28868).abs() <= 1e-4,
        "gamma* = {}, expected 3.28868 +- 1e-4",
        b.gamma_star
    );
    assert!(elapsed.as_millis() < 50, "took {elapsed:?}, budget 50 ms");
    println!(
        "PASS criterion 2: triangle_deg6 gamma* = {} (+-1e-4 of 3.28868), {:?}",
        b.gamma_star, elapsed
    );
}

#[test]
fn criterion_03_triangle_deg8_bound() {
    let f = load_instance("triangle_deg8");
    let outcome = dual_sonc_bound(&f).unwrap();
    let b = outcome.bounded().expect("bounded");
    assert!(
        (b.gamma_star - 4.51135).abs() <= 1e-3,
        "gamma* = {}, expected 4.51135 +- 1e-3",
        b.gamma_star
    );
    println!(
        "PASS criterion 3: triangle_deg8 gamma* = {} (+-1e-3 of 4.51135)",
        b.gamma_star
    );
}

#[test]
fn criterion_04_dwarfed_cube_pair() {
    let heavy = load_instance("dwarfed2d_c3");
    assert!(
        dual_sonc_bound(&heavy).unwrap().is_infeasible(),
        "c = 3 variant must be infeasible"
    );
    let light = load_instance("dwarfed2d_c1");
    let outcome = dual_sonc_bound(&light).unwrap();
    let b = outcome.bounded().expect("c = 1 variant is bounded");
    assert!(
        (b.gamma_star - 0.37055).abs() <= 1e-3,
        "gamma* = {} (certified optimum of the stated program, cross-checked \
         against an independent solver), expected reference 0.37055 +- 1e-3",
        b.gamma_star
    );
    println!(
        "PASS criterion 4: dwarfed cube c=1 gamma* = {}, c=3 infeasible",
        b.gamma_star
    );
}

#[test]
fn criterion_05_kirkman_bound() {
    let f = load_instance("kirkman");
    let start = Instant::now();
    let outcome = dual_sonc_bound(&f).unwrap();
    let elapsed = start.elapsed();
    let b = outcome.bounded().expect("bounded");
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}, budget 1 s");
    assert!(
        (b.gamma_star - 2.00542).abs() <= 1e-3,
        "gamma* = {} (certified optimum of the stated program, cross-checked \
         against an independent solver), expected reference 2.00542 +- 1e-3",
        b.gamma_star
    );
    println!(
        "PASS criterion 5: kirkman gamma* = {} in {:?}",
        b.gamma_star, elapsed
    );
}

#[test]
fn criterion_06_square_primal_dual_gap() {
    // Coefficients (1, -2, 1) on {0, 1, 2}: a perfect square, hence in the
    // primal cone with circuit number exactly 2, yet outside the dual cone.
    let f = ExponentialSum::new(
        1,
        Kind::Exponential,
        vec![(e(&[0.0]), 1.0), (e(&[1.0]), -2.0), (e(&[2.0]), 1.0)],
    )
    .unwrap();
    let dec = sign_split(&f).unwrap();
    let w = DualVector::from_sum(&f);
    assert!(!check_membership_tau(&w, &dec).is_member(), "tau form must reject");
    assert!(!check_membership_lambda(&w, &dec).is_member(), "lambda form must reject");

    let inst = CircuitInstance::from_sum(&f).unwrap();
    assert!(circuit_nonnegative(&inst).unwrap(), "primal certificate must accept");
    let lambda = minimize_linear_over_lambda(
        dec.a_plus(),
        &e(&[1.0]),
        &[0.0, 0.0],
    )
    .unwrap()
    .0;
    let theta = circuit_number(&inst, &lambda).unwrap().theta;
    assert!((theta - 2.0).abs() <= 1e-9, "Theta = {theta}, expected 2");
    println!("PASS criterion 6: (1,-2,1) rejected by both dual forms, primal Theta = {theta}");
}

fn generate_500() -> Vec<ExponentialSum> {
    let mut r = rng(0x5CA1E);
    (0..500)
        .map(|i| {
            let scale = if i % 2 == 0 { 1.0 } else { 1e-3 };
            let negatives = 1 + (i % 3);
            random_instance(&mut r, negatives, scale)
        })
        .collect()
}

#[test]
fn criterion_07_membership_forms_agree() {
    let mut members = 0;
    for f in generate_500() {
        let dec = sign_split(&f).unwrap();
        let w = DualVector::from_sum(&f);
        let tau = check_membership_tau(&w, &dec).is_member();
        let lambda = check_membership_lambda(&w, &dec).is_member();
        assert_eq!(tau, lambda, "representations disagree on {f:?}");
        members += usize::from(tau);
    }
    println!("PASS criterion 7: both membership forms agree on 500 instances ({members} members)");
}

#[test]
fn criterion_08_dual_accepts_imply_witness() {
    let mut accepted = 0;
    for f in generate_500() {
        let dec = sign_split(&f).unwrap();
        let w = DualVector::from_sum(&f);
        if !check_membership_tau(&w, &dec).is_member() {
            continue;
        }
        accepted += 1;
        for beta in dec.a_minus() {
            if w.get(beta) == 0.0 {
                continue;
            }
            let cost: Vec<f64> = dec.a_plus().iter().map(|a| w.get(a).ln()).collect();
            let Some((lambda, _)) = minimize_linear_over_lambda(dec.a_plus(), beta, &cost)
            else {
                continue;
            };
            assert!(
                age_witness_check(&w, dec.a_plus(), beta, &lambda).unwrap(),
                "accepted vector fails the witness at {beta}: {f:?}"
            );
        }
    }
    assert!(accepted > 0, "no accepted instances generated");
    println!("PASS criterion 8: all {accepted} dual-accepted instances pass the primal witness");
}

#[test]
fn criterion_09_oracle_soundness() {
    let bundled = [
        "motzkin",
        "triangle_deg8",
        "triangle_deg6",
        "dwarfed2d_c1",
        "kirkman",
        "perfect_square",
        "allpos",
        "cosh_shifted",
    ];
    for name in bundled {
        let f = load_instance(name);
        if f.n() > 3 {
            continue;
        }
        let Some(b) = dual_sonc_bound(&f).unwrap().bounded().cloned() else {
            continue;
        };
        let grid = if f.n() == 3 { 61 } else { 101 };
        let config = OracleConfig { grid_points: grid, ..Default::default() };
        let min = sample_min(&f, &config).unwrap();
        assert!(
            b.lower_bound <= min.value + 1e-6,
            "{name}: certified bound {} above sampled min {}",
            b.lower_bound,
            min.value
        );
    }
    println!("PASS criterion 9: certified bounds below sampled minima on all bundled instances");
}

#[test]
fn criterion_10_relaxed_lp() {
    let heavy = load_instance("dwarfed2d_c3");
    let r3 = relaxed_bound(&heavy, 1.0).unwrap();
    assert!(r3.tol > 0.0, "strictly infeasible instance must need slack");
    assert!(r3.gamma_star.is_finite());

    let light = load_instance("dwarfed2d_c1");
    let strict = dual_sonc_bound(&light).unwrap();
    let strict = strict.bounded().unwrap();
    let r1 = relaxed_bound(&light, 1.0).unwrap();
    assert_eq!(r1.tol, 0.0, "feasible instance needs no slack");
    assert!(
        (r1.gamma_star - strict.gamma_star).abs() <= 1e-8,
        "relaxed {} vs strict {}",
        r1.gamma_star,
        strict.gamma_star
    );
    println!(
        "PASS criterion 10: eps = 1 gives tol = {} on the infeasible variant, tol = 0 and the strict bound on the feasible one",
        r3.tol
    );
}

#[test]
fn criterion_11_shift_invariance() {
    let mut r = rng(0x5217);
    let mut checked = 0;
    let mut tried = 0;
    while checked < 50 && tried < 5000 {
        tried += 1;
        let f = random_instance(&mut r, 1 + tried % 3, 1.0);
        let Ok(outcome) = dual_sonc_bound(&f) else { continue };
        let Some(b) = outcome.bounded() else { continue };
        if !b.gamma_star.is_finite() || b.gamma_star.abs() > 1e6 {
            continue;
        }
        for t in [-10.0, 0.5, 1e3] {
            let shifted = dual_sonc_bound(&f.shifted(t)).unwrap();
            match shifted.bounded() {
                Some(s) => assert!(
                    (s.gamma_star - (b.gamma_star - t)).abs() <= 1e-7,
                    "gamma*(f + {t}) = {} but gamma*(f) - t = {}",
                    s.gamma_star,
                    b.gamma_star - t
                ),
                None => panic!("shift changed feasibility on {f:?}"),
            }
        }
        checked += 1;
    }
    assert_eq!(checked, 50, "exhausted generator after {tried} tries");
    println!("PASS criterion 11: gamma*(f + t) = gamma*(f) - t on 50 instances, t in {{-10, 0.5, 1e3}}");
}
