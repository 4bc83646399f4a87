//! Acceptance suite: one test per criterion, each printing a pass/fail line.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use degspec::checks::{spectral_gap_report, threefold_duality_check, Verdict, DEFAULT_BAND};
use degspec::dynamics::{
    conjugation_invariance_check, degree_inequalities, degree_sequence, fekete_estimate,
    stability_check, StabilityResult,
};
use degspec::maps::{MapDescriptor, MonomialMap, PolyMap};
use degspec::model::{make_model, ModelSpec, VarietyModel};
use degspec::rational::{rat_int, Rational};
use degspec::spectrum::spectral_radius_default;
use degspec::QMatrix;

fn report(criterion: usize, description: &str, pass: bool) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {description}");
    assert!(pass, "criterion {criterion} failed: {description}");
}

fn model(spec: &str) -> VarietyModel {
    make_model(ModelSpec::parse(spec).unwrap()).unwrap()
}

fn random_class(model: &VarietyModel, codim: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..model.ranks[codim]).map(|_| rng.gen_range(-9..=9)).collect()
}

#[test]
fn criterion_01_blowup_identity_suite() {
    let x = model("BlP3line");
    let target_w = x.center_class().unwrap();
    let e = x.exceptional_class().unwrap();
    let f = x.fiber_class().unwrap();
    let ee = x.cup(&e, &e).unwrap();

    // push(E.E) = -W
    let push_ee = x.blowdown_pushforward(&ee).unwrap();
    let minus_w: Vec<Rational> = target_w.coords.iter().map(|c| -c.clone()).collect();
    let mut ok = push_ee.coords == minus_w;

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let alpha = x.class_i64(1, &random_class(&x, 1, &mut rng)).unwrap();
        let af = x.degree0(&x.cup(&alpha, &f).unwrap()).unwrap();

        // pull(push(alpha)) = alpha + (alpha.F) E
        let round_trip = x
            .blowup_pullback(&x.blowdown_pushforward(&alpha).unwrap())
            .unwrap();
        let expected: Vec<Rational> = alpha
            .coords
            .iter()
            .zip(&e.coords)
            .map(|(a, ei)| a + &af * ei)
            .collect();
        ok &= round_trip.coords == expected;

        // push(alpha.E) = (alpha.F) W
        let push_ae = x
            .blowdown_pushforward(&x.cup(&alpha, &e).unwrap())
            .unwrap();
        let scaled_w: Vec<Rational> = target_w.coords.iter().map(|c| &af * c).collect();
        ok &= push_ae.coords == scaled_w;

        // push(alpha).push(beta) - push(alpha.beta) = (alpha.F)(beta.F) W
        let beta = x.class_i64(1, &random_class(&x, 1, &mut rng)).unwrap();
        let bf = x.degree0(&x.cup(&beta, &f).unwrap()).unwrap();
        let pa = x.blowdown_pushforward(&alpha).unwrap();
        let pb = x.blowdown_pushforward(&beta).unwrap();
        let target = &x.blowdown_data().unwrap().target;
        let prod_of_pushes = target.cup(&pa, &pb).unwrap();
        let push_of_prod = x
            .blowdown_pushforward(&x.cup(&alpha, &beta).unwrap())
            .unwrap();
        let diff: Vec<Rational> = prod_of_pushes
            .coords
            .iter()
            .zip(&push_of_prod.coords)
            .map(|(a, b)| a - b)
            .collect();
        let expected_w: Vec<Rational> = target_w.coords.iter().map(|c| &af * &bf * c).collect();
        ok &= diff == expected_w;
    }

    // codimension-3 center: push(E.E) = 0 on BlP3pt
    let y = model("BlP3pt");
    let ey = y.exceptional_class().unwrap();
    let push_eey = y
        .blowdown_pushforward(&y.cup(&ey, &ey).unwrap())
        .unwrap();
    ok &= push_eey.coords.iter().all(|c| c.is_zero());

    report(1, "blowup pull-push identities exact on 100 random classes", ok);
}

#[test]
fn criterion_02_hodge_signatures() {
    let mut ok = true;
    for spec in ["P3", "(P1)^3", "BlP2(3)", "BlP3pt", "BlP3line"] {
        let m = model(spec);
        let sig = m.hodge_signature(&m.ample_class()).unwrap();
        ok &= sig == (1, m.ranks[1] - 1, 0);
    }
    report(2, "signature (1, rho-1, 0) on all five built-in models", ok);
}

#[test]
fn criterion_03_product_difference_class() {
    let m = model("(P1)^2");
    let f = MonomialMap::new(&[vec![2, 1], vec![1, 1]]).unwrap();
    let m1 = f.action_p1k(1).unwrap();
    let m2 = f.action_p1k(2).unwrap();
    let h1 = m.basis_class(1, 0).unwrap();
    let h2 = m.basis_class(1, 1).unwrap();
    let pull_h1 = m.class(1, m1.apply(&h1.coords).unwrap()).unwrap();
    let pull_h2 = m.class(1, m1.apply(&h2.coords).unwrap()).unwrap();
    let prod = m.cup(&pull_h1, &pull_h2).unwrap();
    let h1h2 = m.cup(&h1, &h2).unwrap();
    let pull_h1h2 = m.class(2, m2.apply(&h1h2.coords).unwrap()).unwrap();
    let diff: Vec<Rational> = prod
        .coords
        .iter()
        .zip(&pull_h1h2.coords)
        .map(|(a, b)| a - b)
        .collect();
    let ok = diff == vec![rat_int(2)]
        && m.cone_contains(&m.class(2, diff).unwrap()).unwrap();
    report(3, "f*(h1).f*(h2) - f*(h1 h2) = 2 h1h2, effective", ok);
}

#[test]
fn criterion_04_cremona_periodicity() {
    let sigma = MapDescriptor::Polynomial(PolyMap::cremona());
    let seq = degree_sequence(&sigma, 1, 8).unwrap();
    let expected: Vec<Rational> = [2, 1, 2, 1, 2, 1, 2, 1].iter().map(|&d| rat_int(d)).collect();
    report(4, "Cremona degree sequence [2,1,2,1,2,1,2,1]", seq.values == expected);
}

fn random_nonneg_monomial(rng: &mut ChaCha8Rng, n: usize) -> MonomialMap {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect())
            .collect();
        if let Ok(f) = MonomialMap::new(&rows) {
            return f;
        }
    }
}

#[test]
fn criterion_05_fekete_vs_eigenvalue_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut ok = true;
    for trial in 0..10 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let f = random_nonneg_monomial(&mut rng, n);
        let desc = MapDescriptor::Monomial(f.clone());
        let seq = degree_sequence(&desc, 1, 25).unwrap();
        let est = fekete_estimate(&seq).unwrap();
        let rho = spectral_radius_default(&f.action_p1k(1).unwrap()).unwrap();
        ok &= (est.window_slope - rho).abs() / rho.max(1.0) < 0.01;
        ok &= est.upper_inf >= est.window_slope - 1e-9;
        ok &= est.violations.is_empty();
    }
    report(5, "window slopes match spectral radii within 1% for 10 random maps", ok);
}

#[test]
fn criterion_06_instability_detection() {
    let rot = MapDescriptor::Monomial(MonomialMap::new(&[vec![1, -1], vec![1, 1]]).unwrap());
    let first = stability_check(&rot, 1, 30).unwrap();
    let mut ok = first == StabilityResult::FirstFailure(2);
    let seq = degree_sequence(&rot, 1, 30).unwrap();
    let est = fekete_estimate(&seq).unwrap();
    let target = 2f64.sqrt();
    ok &= (est.window_slope - target).abs() / target < 0.02;
    report(6, "rotation map: first failure at n=2, slope near sqrt(2)", ok);
}

#[test]
fn criterion_07_theorem_verdicts() {
    let fib = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
    let rep = spectral_gap_report(&fib, 1.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
    let mut ok = rep.verdict == Verdict::Pass
        && (rep.r1 - 2.618034).abs() < 1e-6
        && rep.spectrum[0].multiplicity == 1
        && (rep.spectrum[1].modulus - 0.381966).abs() < 1e-6;

    let double = QMatrix::from_i64(&[vec![2, 0], vec![0, 2]]);
    ok &= spectral_gap_report(&double, 1.0, DEFAULT_BAND, BTreeMap::new())
        .unwrap()
        .verdict
        == Verdict::ConclusionViolated;

    let rot = QMatrix::from_i64(&[vec![1, -1], vec![1, 1]]);
    ok &= spectral_gap_report(&rot, 2.0, DEFAULT_BAND, BTreeMap::new())
        .unwrap()
        .verdict
        == Verdict::NotApplicable;

    report(7, "spectral gap verdicts PASS / CONCLUSION_VIOLATED / NOT_APPLICABLE", ok);
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> MonomialMap {
    // random elementary row operations starting from the identity
    let mut rows = vec![vec![1i64, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
    for _ in 0..8 {
        let i = rng.gen_range(0..3);
        let mut j = rng.gen_range(0..3);
        while j == i {
            j = rng.gen_range(0..3);
        }
        match rng.gen_range(0..3) {
            0 => {
                let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                for c in 0..3 {
                    rows[j][c] += s * rows[i][c];
                }
            }
            1 => rows.swap(i, j),
            _ => {
                for c in 0..3 {
                    rows[i][c] = -rows[i][c];
                }
            }
        }
    }
    MonomialMap::new(&rows).unwrap()
}

#[test]
fn criterion_08_threefold_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut ok = true;
    for _ in 0..25 {
        let f = random_unimodular(&mut rng);
        let rep = threefold_duality_check(&f, 1e-5).unwrap();
        ok &= rep.duality_error <= 1e-5;
        if rep.lambda1_f > 1.0 + 1e-6 {
            ok &= rep.dichotomy == Some(true);
        }
    }
    report(8, "duality and dichotomy for 25 random unimodular 3x3 maps", ok);
}

#[test]
fn criterion_09_degree_inequalities() {
    let tol = 1e-6;
    let mut ok = true;
    let surfaces = [
        MonomialMap::new(&[vec![2, 1], vec![1, 1]]).unwrap(),
        MonomialMap::new(&[vec![1, -1], vec![1, 1]]).unwrap(),
        MonomialMap::new(&[vec![1, 0], vec![0, 1]]).unwrap(),
    ];
    for f in &surfaces {
        let rep = degree_inequalities(&MapDescriptor::Monomial(f.clone()), 20, tol).unwrap();
        ok &= rep.all_hold;
        ok &= rep.class_inequality == Some(true);
    }
    let threefolds = [
        MonomialMap::new(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]).unwrap(),
        MonomialMap::new(&[vec![2, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]).unwrap(),
    ];
    for f in &threefolds {
        let rep = degree_inequalities(&MapDescriptor::Monomial(f.clone()), 20, tol).unwrap();
        ok &= rep.all_hold;
    }
    report(9, "lambda_1 lambda_p >= lambda_{p+1} and the class inequality", ok);
}

#[test]
fn criterion_10_conjugation_invariance() {
    let sigma = PolyMap::cremona();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut ok = true;
    let mut done = 0;
    while done < 5 {
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let g = match PolyMap::linear(&rows) {
            Ok(g) if g.linear_inverse().is_ok() => g,
            _ => continue,
        };
        let rep = conjugation_invariance_check(&sigma, &g, 8).unwrap();
        ok &= rep.pass;
        done += 1;
    }
    report(10, "slope agreement within 2% under 5 random linear conjugations", ok);
}
