//! Univariate polynomials over the rationals.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::{rational_to_f64, Rational};

/// Coefficient index = degree of the monomial. Leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    coeffs: Vec<Rational>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPolynomial {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(rational_to_f64(c), 0.0);
        }
        acc
    }

    pub fn derivative(&self) -> QPolynomial {
        if self.coeffs.len() <= 1 {
            return QPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        QPolynomial::new(coeffs)
    }

    pub fn add(&self, other: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        QPolynomial::new(coeffs)
    }

    pub fn sub(&self, other: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        QPolynomial::new(coeffs)
    }

    pub fn mul(&self, other: &QPolynomial) -> QPolynomial {
        if self.is_zero() || other.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::new(coeffs)
    }

    /// Euclidean division: returns (quotient, remainder). Panics on zero divisor.
    pub fn div_rem(&self, divisor: &QPolynomial) -> (QPolynomial, QPolynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (QPolynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.leading().unwrap();
        let dd = divisor.degree();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / dl;
            quot[shift] = factor.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let sub = &factor * c;
                rem[shift + i] -= sub;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (QPolynomial::new(quot), QPolynomial::new(rem))
    }

    /// Make monic (leading coefficient 1). Zero polynomial stays zero.
    pub fn monic(&self) -> QPolynomial {
        match self.leading() {
            None => QPolynomial::zero(),
            Some(l) => {
                let coeffs = self.coeffs.iter().map(|c| c / l).collect();
                QPolynomial::new(coeffs)
            }
        }
    }

    /// Monic gcd over the rationals.
    pub fn gcd(&self, other: &QPolynomial) -> QPolynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition by Yun's algorithm. Returns the list of
    /// (square-free factor, multiplicity) pairs with nontrivial factors, so
    /// that the product of factor^multiplicity equals the monic form of self.
    pub fn square_free_decomposition(&self) -> Vec<(QPolynomial, usize)> {
        let p = self.monic();
        if p.is_zero() || p.degree() == 0 {
            return vec![];
        }
        let dp = p.derivative();
        let g = p.gcd(&dp);
        let mut out = Vec::new();
        // w = p / g carries each distinct root once
        let (mut w, r) = p.div_rem(&g);
        debug_assert!(r.is_zero());
        let (mut y, r) = dp.div_rem(&g);
        debug_assert!(r.is_zero());
        let mut i = 1usize;
        loop {
            // z = y - w'
            let z = y.sub(&w.derivative());
            if z.is_zero() {
                if w.degree() > 0 {
                    out.push((w.monic(), i));
                }
                break;
            }
            let f = w.gcd(&z);
            if f.degree() > 0 {
                out.push((f.clone(), i));
            }
            let (w2, r) = w.div_rem(&f);
            debug_assert!(r.is_zero());
            let (y2, r) = z.div_rem(&f);
            debug_assert!(r.is_zero());
            w = w2;
            y = y2;
            i += 1;
        }
        out
    }
}
