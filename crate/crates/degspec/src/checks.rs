//! Mechanical verification of the spectral-gap theorems: simplicity of the
//! first spectral radius under a gap, cone-preservation consequences, and the
//! threefold duality for birational monomial maps.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::maps::{MatrixAction, MonomialMap};
use crate::matrix::QMatrix;
use crate::model::CycleClass;
use crate::rational::format_decimal;
use crate::spectrum::{eigen_spectrum, spectral_radius, SpectrumEntry};

/// Relative width of the band around each numeric threshold inside which no
/// PASS/FAIL call is made.
pub const DEFAULT_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    ConclusionViolated,
    NotApplicable,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::ConclusionViolated => "CONCLUSION_VIOLATED",
            Verdict::NotApplicable => "NOT_APPLICABLE",
            Verdict::Indeterminate => "INDETERMINATE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisStatus {
    Asserted,
    Verified,
    Failed,
    Unchecked,
}

impl fmt::Display for HypothesisStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HypothesisStatus::Asserted => "asserted",
            HypothesisStatus::Verified => "verified",
            HypothesisStatus::Failed => "failed",
            HypothesisStatus::Unchecked => "unchecked",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub r1: f64,
    pub spectrum: Vec<SpectrumEntry>,
    pub r2: f64,
    pub sqrt_r2: f64,
    pub hypotheses: BTreeMap<String, HypothesisStatus>,
    pub verdict: Verdict,
    pub details: String,
}

impl SpectralReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "r1": dec(self.r1),
            "spectrum": self.spectrum.iter().map(|e| json!({
                "modulus": dec(e.modulus),
                "multiplicity": e.multiplicity,
            })).collect::<Vec<_>>(),
            "r2": dec(self.r2),
            "sqrt_r2": dec(self.sqrt_r2),
            "hypotheses": self.hypotheses.iter()
                .map(|(k, v)| (k.clone(), json!(v.to_string())))
                .collect::<serde_json::Map<_, _>>(),
            "verdict": self.verdict.to_string(),
            "details": self.details,
        })
    }
}

fn dec(x: f64) -> serde_json::Value {
    json!(format_decimal(x))
}

fn within_band(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Verdict on the conclusion "r1 is a simple eigenvalue and the only one of
/// modulus above sqrt(r2)", given the action on N^1 and the value of r2.
///
/// Simplicity is decided exactly from square-free multiplicities; every
/// modulus comparison within `tol` (relative) of its threshold yields
/// INDETERMINATE rather than a call either way.
pub fn spectral_gap_report(
    m1: &QMatrix,
    r2: f64,
    tol: f64,
    hypotheses: BTreeMap<String, HypothesisStatus>,
) -> Result<SpectralReport> {
    if r2 < 0.0 {
        return Err(Error::Parameter("r2 must be nonnegative".into()));
    }
    let spectrum = eigen_spectrum(m1, crate::spectrum::DEFAULT_TOL)?;
    let r1 = spectrum.first().map_or(0.0, |e| e.modulus);
    let sqrt_r2 = r2.sqrt();
    let mut report = SpectralReport {
        r1,
        spectrum,
        r2,
        sqrt_r2,
        hypotheses,
        verdict: Verdict::Indeterminate,
        details: String::new(),
    };

    // gap hypothesis r1^2 > r2 first
    if r1 * r1 <= r2 + tol * r2.abs().max(1.0) {
        report.verdict = Verdict::NotApplicable;
        report.details = format!(
            "gap hypothesis fails: r1^2 = {} <= r2 = {}",
            format_decimal(r1 * r1),
            format_decimal(r2)
        );
        report
            .hypotheses
            .insert("gap_r1_squared_gt_r2".into(), HypothesisStatus::Failed);
        return Ok(report);
    }
    report
        .hypotheses
        .insert("gap_r1_squared_gt_r2".into(), HypothesisStatus::Verified);

    // exact simplicity of the dominant modulus
    let dominant = &report.spectrum[0];
    if dominant.multiplicity > 1 {
        report.verdict = Verdict::ConclusionViolated;
        report.details = format!(
            "dominant modulus {} has exact multiplicity {}; the hypotheses cannot all hold for any map with this action",
            format_decimal(r1),
            dominant.multiplicity
        );
        return Ok(report);
    }

    // numerical coin-flip guard: anything near r1 or near sqrt(r2)
    for (i, e) in report.spectrum.iter().enumerate() {
        if i > 0 && within_band(e.modulus, r1, tol) {
            report.verdict = Verdict::Indeterminate;
            report.details = format!(
                "a second eigenvalue modulus {} lies within the tolerance band of r1 = {}",
                format_decimal(e.modulus),
                format_decimal(r1)
            );
            return Ok(report);
        }
        if within_band(e.modulus, sqrt_r2, tol) {
            report.verdict = Verdict::Indeterminate;
            report.details = format!(
                "eigenvalue modulus {} lies within the tolerance band of sqrt(r2) = {}",
                format_decimal(e.modulus),
                format_decimal(sqrt_r2)
            );
            return Ok(report);
        }
    }

    let above: usize = report
        .spectrum
        .iter()
        .filter(|e| e.modulus > sqrt_r2)
        .map(|e| e.multiplicity)
        .sum();
    if above == 1 {
        report.verdict = Verdict::Pass;
        report.details = format!(
            "r1 = {} is a simple eigenvalue and the only modulus above sqrt(r2) = {}",
            format_decimal(r1),
            format_decimal(sqrt_r2)
        );
    } else {
        report.verdict = Verdict::ConclusionViolated;
        report.details = format!(
            "{above} eigenvalues (with multiplicity) have modulus above sqrt(r2) = {}",
            format_decimal(sqrt_r2)
        );
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub enum ConeCheck {
    Verified,
    Failed { generator: CycleClass },
}

/// Does M_p map every listed effective-cone generator back into the cone?
/// Decided by exact LP; the first violating generator is the witness.
pub fn cone_preservation_check(action: &MatrixAction, p: usize) -> Result<ConeCheck> {
    let m = action.matrix(p)?;
    let model = &action.model;
    if p > model.dim {
        return Err(Error::Parameter(format!("codimension {p} exceeds the dimension")));
    }
    let gens = model.cone_generators.get(p).cloned().unwrap_or_default();
    if gens.is_empty() {
        return Err(Error::Capability(format!(
            "no effective-cone generators listed for N^{p} of {}",
            model.name
        )));
    }
    for g in gens {
        let cls = model.class(p, g)?;
        let image = model.class(p, m.apply(&cls.coords)?)?;
        if !model.cone_contains(&image)? {
            return Ok(ConeCheck::Failed { generator: cls });
        }
    }
    Ok(ConeCheck::Verified)
}

#[derive(Debug, Clone)]
pub struct GapInequalityReport {
    pub r1: f64,
    pub r2: f64,
    pub cone_ok: bool,
    pub verdict: Verdict,
    pub details: String,
}

impl GapInequalityReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "r1": dec(self.r1),
            "r2": dec(self.r2),
            "cone_preserving": self.cone_ok,
            "verdict": self.verdict.to_string(),
            "details": self.details,
        })
    }
}

/// r1^2 >= r2 whenever the action preserves the psef cones.
pub fn r1_squared_vs_r2(
    m1: &QMatrix,
    m2: &QMatrix,
    cone_ok: bool,
    tol: f64,
) -> Result<GapInequalityReport> {
    let r1 = spectral_radius(m1, crate::spectrum::DEFAULT_TOL)?;
    let r2 = spectral_radius(m2, crate::spectrum::DEFAULT_TOL)?;
    let (verdict, details) = if !cone_ok {
        (
            Verdict::NotApplicable,
            "cone preservation not established; the inequality is not asserted".to_string(),
        )
    } else if within_band(r1 * r1, r2, tol) {
        (
            Verdict::Indeterminate,
            format!(
                "r1^2 = {} within the tolerance band of r2 = {}",
                format_decimal(r1 * r1),
                format_decimal(r2)
            ),
        )
    } else if r1 * r1 >= r2 {
        (
            Verdict::Pass,
            format!(
                "r1^2 = {} >= r2 = {}",
                format_decimal(r1 * r1),
                format_decimal(r2)
            ),
        )
    } else {
        (
            Verdict::ConclusionViolated,
            format!(
                "r1^2 = {} < r2 = {}: the cone-preservation assertion is inconsistent",
                format_decimal(r1 * r1),
                format_decimal(r2)
            ),
        )
    };
    Ok(GapInequalityReport {
        r1,
        r2,
        cone_ok,
        verdict,
        details,
    })
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub lambda1_f: f64,
    pub lambda2_f: f64,
    pub lambda1_inv: f64,
    pub lambda2_inv: f64,
    pub duality_error: f64,
    pub duality_holds: bool,
    /// None when lambda1 <= 1 (the dichotomy is vacuous)
    pub dichotomy: Option<bool>,
    pub verdict: Verdict,
}

impl DualityReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lambda1_f": dec(self.lambda1_f),
            "lambda2_f": dec(self.lambda2_f),
            "lambda1_inv": dec(self.lambda1_inv),
            "lambda2_inv": dec(self.lambda2_inv),
            "duality_error": dec(self.duality_error),
            "duality_holds": self.duality_holds,
            "dichotomy": self.dichotomy,
            "verdict": self.verdict.to_string(),
        })
    }
}

/// For a birational monomial map of a threefold: lambda_1(f^{-1}) must equal
/// lambda_2(f) (computed via the second compound matrix), and when
/// lambda_1 > 1 at least one of f, f^{-1} must satisfy lambda_1^2 > lambda_2.
pub fn threefold_duality_check(f: &MonomialMap, tol: f64) -> Result<DualityReport> {
    if f.dim() != 3 {
        return Err(Error::Parameter("duality check needs a 3x3 exponent matrix".into()));
    }
    let a = f.exponent_matrix();
    let inv = f.inverse()?; // enforces |det A| = 1
    let ai = inv.exponent_matrix();
    let t = crate::spectrum::DEFAULT_TOL;
    let lambda1_f = spectral_radius(a, t)?;
    let lambda2_f = spectral_radius(&a.compound(2)?, t)?;
    let lambda1_inv = spectral_radius(ai, t)?;
    let lambda2_inv = spectral_radius(&ai.compound(2)?, t)?;
    let duality_error = (lambda1_inv - lambda2_f).abs() / lambda2_f.abs().max(1.0);
    let duality_holds = duality_error <= tol;
    let dichotomy = if lambda1_f > 1.0 + tol {
        Some(
            lambda1_f * lambda1_f > lambda2_f + tol
                || lambda1_inv * lambda1_inv > lambda2_inv + tol,
        )
    } else {
        None
    };
    let verdict = if duality_holds && dichotomy != Some(false) {
        Verdict::Pass
    } else {
        Verdict::ConclusionViolated
    };
    Ok(DualityReport {
        lambda1_f,
        lambda2_f,
        lambda1_inv,
        lambda2_inv,
        duality_error,
        duality_holds,
        dichotomy,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{map_from_json, MapDescriptor};

    fn qm(rows: usize, cols: usize, v: &[i64]) -> QMatrix {
        let data: Vec<Vec<i64>> = v.chunks(cols).map(|c| c.to_vec()).collect();
        assert_eq!(data.len(), rows);
        QMatrix::from_i64(&data)
    }

    #[test]
    fn fibonacci_action_passes() {
        let m1 = qm(2, 2, &[2, 1, 1, 1]);
        let rep = spectral_gap_report(&m1, 1.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!((rep.r1 - 2.618033988).abs() < 1e-6);
        assert_eq!(rep.spectrum[0].multiplicity, 1);
        assert!((rep.spectrum[1].modulus - 0.381966011).abs() < 1e-6);
    }

    #[test]
    fn double_eigenvalue_violates() {
        let m1 = qm(2, 2, &[2, 0, 0, 2]);
        let rep = spectral_gap_report(&m1, 1.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        assert_eq!(rep.verdict, Verdict::ConclusionViolated);
        assert_eq!(rep.spectrum[0].multiplicity, 2);
    }

    #[test]
    fn missing_gap_is_not_applicable() {
        let m1 = qm(2, 2, &[1, -1, 1, 1]);
        let rep = spectral_gap_report(&m1, 2.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotApplicable);
        assert_eq!(
            rep.hypotheses.get("gap_r1_squared_gt_r2"),
            Some(&HypothesisStatus::Failed)
        );
    }

    #[test]
    fn near_threshold_is_indeterminate() {
        // moduli 2 and 1, sqrt(r2) right at the smaller modulus
        let m1 = qm(2, 2, &[2, 0, 0, 1]);
        let rep = spectral_gap_report(&m1, 1.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        assert_eq!(rep.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn verdict_stable_under_scaling() {
        let m1 = qm(2, 2, &[2, 1, 1, 1]);
        let scaled = m1.scale(&crate::rational::rat_int(3));
        let rep1 = spectral_gap_report(&m1, 1.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        let rep2 = spectral_gap_report(&scaled, 9.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        assert_eq!(rep1.verdict, rep2.verdict);
    }

    fn product_action(m1: &[i64], m2: i64) -> MatrixAction {
        let json = format!(
            r#"{{"type":"matrix_action","model":"(P1)^2",
                "M":{{"1":[["{}","{}"],["{}","{}"]],"2":[["{}"]]}}}}"#,
            m1[0], m1[1], m1[2], m1[3], m2
        );
        match map_from_json(&json).unwrap() {
            MapDescriptor::Matrix(a) => *a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn cone_preservation_on_product() {
        let good = product_action(&[2, 1, 1, 1], 1);
        assert!(matches!(cone_preservation_check(&good, 1).unwrap(), ConeCheck::Verified));
        assert!(matches!(cone_preservation_check(&good, 2).unwrap(), ConeCheck::Verified));
        let bad = product_action(&[2, 1, 1, 1], -1);
        match cone_preservation_check(&bad, 2).unwrap() {
            ConeCheck::Failed { generator } => assert_eq!(generator.codim, 2),
            ConeCheck::Verified => panic!("sign flip must fail"),
        }
    }

    #[test]
    fn gap_inequality_reports() {
        let rep = r1_squared_vs_r2(
            &qm(2, 2, &[2, 1, 1, 1]),
            &qm(1, 1, &[1]),
            true,
            DEFAULT_BAND,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.r1 * rep.r1 > 6.8);

        let eq = r1_squared_vs_r2(&QMatrix::identity(2), &QMatrix::identity(1), true, DEFAULT_BAND)
            .unwrap();
        assert_eq!(eq.verdict, Verdict::Indeterminate);

        let bad = r1_squared_vs_r2(
            &qm(2, 2, &[0, 1, 1, 0]),
            &qm(1, 1, &[4]),
            true,
            DEFAULT_BAND,
        )
        .unwrap();
        assert_eq!(bad.verdict, Verdict::ConclusionViolated);
    }

    #[test]
    fn duality_on_companion_of_lehmerish_cubic() {
        // companion of t^3 - t - 1
        let f = MonomialMap::new(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]).unwrap();
        let rep = threefold_duality_check(&f, 1e-5).unwrap();
        assert!(rep.duality_holds, "error {}", rep.duality_error);
        assert!((rep.lambda1_f - 1.3247179572).abs() < 1e-6);
        assert!((rep.lambda2_f - 1.1509639253).abs() < 1e-4);
        assert_eq!(rep.dichotomy, Some(true));
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn duality_trivial_cases() {
        let id = MonomialMap::new(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let rep = threefold_duality_check(&id, 1e-5).unwrap();
        assert!(rep.duality_holds);
        assert_eq!(rep.dichotomy, None);
        let perm = MonomialMap::new(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        let rep = threefold_duality_check(&perm, 1e-5).unwrap();
        assert!(rep.duality_holds);
        assert_eq!(rep.dichotomy, None);
    }

    #[test]
    fn duality_requires_unimodular() {
        let f = MonomialMap::new(&[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(threefold_duality_check(&f, 1e-5).is_err());
        let surface = MonomialMap::new(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(threefold_duality_check(&surface, 1e-5).is_err());
    }

    #[test]
    fn report_json_shape() {
        let m1 = qm(2, 2, &[2, 1, 1, 1]);
        let rep = spectral_gap_report(&m1, 1.0, DEFAULT_BAND, BTreeMap::new()).unwrap();
        let v = rep.to_json();
        assert_eq!(v["verdict"], "PASS");
        assert!(v["r1"].as_str().unwrap().starts_with("2.618"));
        assert_eq!(v["spectrum"].as_array().unwrap().len(), 2);
        assert_eq!(v["hypotheses"]["gap_r1_squared_gt_r2"], "verified");
    }
}
