//! Sparse multivariate polynomials over the integers.
//!
//! Exponent vectors are compared lexicographically. Used for homogeneous map
//! components: composition, content extraction, and exact gcd (primitive
//! pseudo-remainder sequences with a divide-back check).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    /// exponent vector -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<Self> {
        let mut p = MultiPoly::zero(nvars);
        for (exps, coef) in terms {
            if exps.len() != nvars {
                return Err(Error::Input(format!(
                    "exponent tuple length {} != number of variables {nvars}",
                    exps.len()
                )));
            }
            if coef.is_zero() {
                continue;
            }
            let entry = p.terms.entry(exps).or_insert_with(BigInt::zero);
            *entry += coef;
            if entry.is_zero() {
                // re-fetch key to remove; easiest via retain afterwards
            }
        }
        p.terms.retain(|_, c| !c.is_zero());
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(exps).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul_scalar(&self, s: &BigInt) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, BigInt::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `args[i]` for variable i. All args must share a variable
    /// count; the result lives in that ring.
    pub fn substitute(&self, args: &[MultiPoly]) -> Result<MultiPoly> {
        if args.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "substitution needs {} arguments, got {}",
                self.nvars,
                args.len()
            )));
        }
        let out_vars = args.first().map_or(self.nvars, |a| a.nvars);
        // cache powers of each argument
        let mut powers: Vec<Vec<MultiPoly>> = args
            .iter()
            .map(|a| vec![MultiPoly::constant(out_vars, BigInt::one()), a.clone()])
            .collect();
        let mut out = MultiPoly::zero(out_vars);
        for (exps, coef) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, coef.clone());
            for (var, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[var];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&args[var]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// gcd of all integer coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    /// Coordinatewise minimum exponent vector over all terms: the largest
    /// monomial dividing the polynomial.
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut min: Option<Vec<u32>> = None;
        for e in self.terms.keys() {
            min = Some(match min {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(&a, &b)| a.min(b)).collect(),
            });
        }
        min.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn divide_by_monomial(&self, exps: &[u32]) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(&a, &b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    fn leading_term(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact division: Some(q) with self = q * divisor, or None when the
    /// division does not come out exactly over the integers.
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() {
            return None;
        }
        let (dexp, dcoef) = divisor.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((rexp, rcoef)) = rem.leading_term() {
            if rexp.iter().zip(&dexp).any(|(a, b)| a < b) {
                return None;
            }
            let (q, r) = rcoef.div_rem(&dcoef);
            if !r.is_zero() {
                return None;
            }
            let texp: Vec<u32> = rexp.iter().zip(&dexp).map(|(a, b)| a - b).collect();
            let mut t = MultiPoly::zero(self.nvars);
            t.terms.insert(texp, q);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Normalize sign so the lexicographically leading coefficient is positive.
    pub fn normalize_sign(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Primitive part: divide out integer content, positive leading sign.
    pub fn primitive(&self) -> MultiPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.normalize_sign();
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, co)| (e.clone(), co / &c))
                .collect(),
        }
        .normalize_sign()
    }

    /// Exact gcd over Z[x_1..x_n], computed by recursive primitive
    /// pseudo-remainder sequences.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        let g = gcd_inner(self, other);
        g.normalize_sign()
    }
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    // pick the last variable appearing in either operand as the main one
    let nvars = a.nvars;
    let main = (0..nvars)
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0);
    let main = match main {
        Some(v) => v,
        None => {
            // both constant
            let ca = a.content();
            let cb = b.content();
            return MultiPoly::constant(nvars, ca.gcd(&cb));
        }
    };
    let fa = as_univariate(a, main);
    let fb = as_univariate(b, main);
    let cont_a = coeff_gcd(&fa);
    let cont_b = coeff_gcd(&fb);
    let prim_a = divide_coeffs(&fa, &cont_a);
    let prim_b = divide_coeffs(&fb, &cont_b);
    let mut r0 = prim_a;
    let mut r1 = prim_b;
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_empty() {
        let r = pseudo_rem(&r0, &r1);
        r0 = r1;
        let cont = coeff_gcd(&r);
        r1 = if cont.is_zero() { r } else { divide_coeffs(&r, &cont) };
    }
    let prim_gcd = from_univariate(&r0, main, nvars);
    let cont_gcd = gcd_inner(&cont_a, &cont_b);
    prim_gcd.mul(&cont_gcd)
}

/// Coefficient vector in the main variable; index = degree. Coefficients are
/// polynomials with exponent 0 in the main variable.
fn as_univariate(p: &MultiPoly, main: usize) -> Vec<MultiPoly> {
    let d = p.degree_in(main) as usize;
    let mut coeffs = vec![MultiPoly::zero(p.nvars); d + 1];
    for (e, c) in p.terms() {
        let deg = e[main] as usize;
        let mut stripped = e.clone();
        stripped[main] = 0;
        let entry = coeffs[deg].terms.entry(stripped).or_insert_with(BigInt::zero);
        *entry += c;
    }
    for c in &mut coeffs {
        c.terms.retain(|_, v| !v.is_zero());
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn from_univariate(coeffs: &[MultiPoly], main: usize, nvars: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(nvars);
    for (deg, c) in coeffs.iter().enumerate() {
        for (e, co) in c.terms() {
            let mut exps = e.clone();
            exps[main] = deg as u32;
            out.terms.insert(exps, co.clone());
        }
    }
    out
}

fn coeff_gcd(coeffs: &[MultiPoly]) -> MultiPoly {
    let nvars = coeffs.first().map_or(0, |c| c.nvars);
    let mut g = MultiPoly::zero(nvars);
    for c in coeffs {
        g = gcd_inner(&g, c).primitive_keep_content();
    }
    g
}

impl MultiPoly {
    // content must be kept while folding gcds of coefficients (the integer
    // content of the gcd matters), so only normalize the sign here
    fn primitive_keep_content(&self) -> MultiPoly {
        self.normalize_sign()
    }
}

fn divide_coeffs(coeffs: &[MultiPoly], d: &MultiPoly) -> Vec<MultiPoly> {
    coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                c.clone()
            } else {
                c.divide_exact(d).expect("content division is exact")
            }
        })
        .collect()
}

/// Pseudo-remainder of coefficient vectors in the main variable: repeatedly
/// scales by the leading coefficient of `b`, so the result is the classical
/// pseudo-remainder up to that factor (harmless, we take primitive parts).
fn pseudo_rem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r = lcb * r - lr * x^{dr-db} * b
        let shift = dr - db;
        let mut next = vec![MultiPoly::zero(lcb.nvars); dr];
        #[allow(clippy::needless_range_loop)]
        for j in 0..dr {
            let mut term = r[j].mul(lcb);
            if j >= shift && j - shift <= db {
                term = term.sub(&lr.mul(&b[j - shift]));
            }
            next[j] = term;
        }
        // top coefficient cancels by construction
        r = next;
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}
