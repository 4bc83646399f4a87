//! Eigenvalue moduli with exact multiplicities.
//!
//! Multiplicities come from the square-free decomposition of the
//! characteristic polynomial over the rationals, so simplicity questions are
//! decided exactly. Only the root values themselves are numerical, refined to
//! the requested tolerance.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::poly::QPolynomial;
use crate::rational::rational_to_f64;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub modulus: f64,
    /// Exact algebraic multiplicity.
    pub multiplicity: usize,
    pub is_real: bool,
    pub approx_value: Complex64,
    pub modulus_error_bound: f64,
}

/// All eigenvalues of a square matrix, sorted by modulus descending.
/// The sum of multiplicities equals the matrix dimension.
pub fn eigen_spectrum(m: &QMatrix, tol: f64) -> Result<Vec<SpectrumEntry>> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tol must be positive, got {tol}")));
    }
    if !m.is_square() {
        return Err(Error::Dimension("eigen_spectrum requires a square matrix".into()));
    }
    let cp = m.charpoly()?;
    let mut entries = Vec::new();
    for (factor, mult) in cp.square_free_decomposition() {
        for root in roots_of_square_free(&factor, tol) {
            let is_real = root.im.abs() <= tol * (1.0 + root.norm());
            entries.push(SpectrumEntry {
                modulus: root.norm(),
                multiplicity: mult,
                is_real,
                approx_value: root,
                modulus_error_bound: tol * (1.0 + root.norm()),
            });
        }
    }
    entries.sort_by(|a, b| b.modulus.partial_cmp(&a.modulus).unwrap());
    debug_assert_eq!(
        entries.iter().map(|e| e.multiplicity).sum::<usize>(),
        m.rows()
    );
    Ok(entries)
}

/// Largest eigenvalue modulus; 0 for the zero-dimensional or nilpotent case.
pub fn spectral_radius(m: &QMatrix, tol: f64) -> Result<f64> {
    let spec = eigen_spectrum(m, tol)?;
    Ok(spec.first().map_or(0.0, |e| e.modulus))
}

/// Complex roots of a square-free rational polynomial, via Aberth-Ehrlich
/// iteration followed by Newton refinement.
fn roots_of_square_free(p: &QPolynomial, tol: f64) -> Vec<Complex64> {
    let p = p.monic();
    let d = p.degree();
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        let c0 = rational_to_f64(&p.coeffs()[0]);
        return vec![Complex64::new(-c0, 0.0)];
    }
    let coeffs: Vec<f64> = p.coeffs().iter().map(rational_to_f64).collect();
    // Cauchy bound for the root moduli
    let bound = 1.0 + coeffs[..d].iter().map(|c| c.abs()).fold(0.0, f64::max);

    let eval = |z: Complex64| p.eval_complex(z);
    let dp = p.derivative();
    let eval_d = |z: Complex64| dp.eval_complex(z);

    let mut zs: Vec<Complex64> = (0..d)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(bound * 0.7, angle)
        })
        .collect();

    for _ in 0..300 {
        let mut max_step = 0.0f64;
        for j in 0..d {
            let fz = eval(zs[j]);
            let dz = eval_d(zs[j]);
            if dz.norm() == 0.0 {
                zs[j] += Complex64::new(tol, tol);
                max_step = f64::MAX;
                continue;
            }
            let w = fz / dz;
            let mut sum = Complex64::new(0.0, 0.0);
            for l in 0..d {
                if l != j {
                    sum += 1.0 / (zs[j] - zs[l]);
                }
            }
            let denom = 1.0 - w * sum;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            zs[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + zs[j].norm()));
        }
        if max_step < tol * 1e-3 {
            break;
        }
    }
    // Newton polish
    for z in zs.iter_mut() {
        for _ in 0..50 {
            let fz = eval(*z);
            let dz = eval_d(*z);
            if dz.norm() == 0.0 {
                break;
            }
            let step = fz / dz;
            *z -= step;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
        // snap nearly-real roots onto the axis
        if z.im.abs() < 1e-12 * (1.0 + z.norm()) {
            z.im = 0.0;
        }
    }
    zs
}

/// Convenience: spectral radius of a matrix known to have nonnegative integer
/// entries, with the default tolerance.
pub fn spectral_radius_default(m: &QMatrix) -> Result<f64> {
    spectral_radius(m, DEFAULT_TOL)
}

#[allow(dead_code)]
fn is_zero_poly(p: &QPolynomial) -> bool {
    p.coeffs().iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QMatrix;

    const TOL: f64 = 1e-9;

    #[test]
    fn spectrum_of_fibonacci_like() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let spec = eigen_spectrum(&m, TOL).unwrap();
        assert_eq!(spec.len(), 2);
        // roots (3 +- sqrt 5)/2 of t^2 - 3t + 1
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((spec[0].modulus - phi2).abs() < 1e-8);
        assert!((spec[1].modulus - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-8);
        assert_eq!(spec[0].multiplicity, 1);
        assert_eq!(spec[1].multiplicity, 1);
        assert!(spec[0].is_real);
    }

    #[test]
    fn spectrum_of_identity() {
        let spec = eigen_spectrum(&QMatrix::identity(3), TOL).unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec[0].multiplicity, 3);
        assert!((spec[0].modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_conjugate_pair() {
        let m = QMatrix::from_i64(&[vec![1, -1], vec![1, 1]]);
        let spec = eigen_spectrum(&m, TOL).unwrap();
        assert_eq!(spec.len(), 2);
        // roots 1 +- i of t^2 - 2t + 2
        assert!((spec[0].modulus - 2f64.sqrt()).abs() < 1e-8);
        assert!((spec[1].modulus - 2f64.sqrt()).abs() < 1e-8);
        assert!(!spec[0].is_real);
        assert_eq!(spec[0].multiplicity, 1);
    }

    #[test]
    fn spectral_radius_values() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let r = spectral_radius(&m, TOL).unwrap();
        assert!((r - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-8);
        assert_eq!(spectral_radius(&QMatrix::zero(2, 2), TOL).unwrap(), 0.0);
        let m = QMatrix::from_i64(&[vec![1, -1], vec![1, 1]]);
        assert!((spectral_radius(&m, TOL).unwrap() - 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_tol() {
        assert!(eigen_spectrum(&QMatrix::identity(2), 0.0).is_err());
        assert!(eigen_spectrum(&QMatrix::identity(2), -1.0).is_err());
    }
}
