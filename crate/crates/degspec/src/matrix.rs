//! Dense exact rational matrices.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::QPolynomial;
use crate::rational::{rat_int, Rational};

/// Dense row-major matrix over the rationals. Every operation is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(QMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| rat_int(x))).collect();
        QMatrix::new(r, c, entries).expect("ragged i64 matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(l, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix addition shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        QMatrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("matrix power requires a square matrix".into()));
        }
        let mut acc = QMatrix::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact determinant by rational Gaussian elimination.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant requires a square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.entries.clone();
        let at = |m: &Vec<Rational>, i: usize, j: usize| m[i * n + j].clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot_row = match (col..n).find(|&r| !m[r * n + col].is_zero()) {
                Some(r) => r,
                None => return Ok(Rational::zero()),
            };
            if pivot_row != col {
                for j in 0..n {
                    m.swap(pivot_row * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = at(&m, col, col);
            det *= &pivot;
            for r in (col + 1)..n {
                let factor = &at(&m, r, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = &factor * &at(&m, col, j);
                    m[r * n + j] -= sub;
                }
            }
        }
        Ok(det)
    }

    pub fn trace(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Dimension("trace requires a square matrix".into()));
        }
        let mut t = Rational::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        Ok(t)
    }

    /// Monic characteristic polynomial det(tI - M), by the Faddeev-LeVerrier
    /// recurrence (division-controlled, exact over the rationals).
    pub fn charpoly(&self) -> Result<QPolynomial> {
        if !self.is_square() {
            return Err(Error::Dimension("charpoly requires a square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(QPolynomial::one());
        }
        // coeffs[i] is the coefficient of t^i; coeffs[n] = 1
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut aux = QMatrix::identity(n);
        for k in 1..=n {
            let am = self.mul(&aux)?;
            let c = -(am.trace()? / rat_int(k as i64));
            coeffs[n - k] = c.clone();
            if k < n {
                aux = am;
                for i in 0..n {
                    aux[(i, i)] += &c;
                }
            }
        }
        Ok(QPolynomial::new(coeffs))
    }

    /// Evaluate a polynomial at this matrix (Horner over matrices).
    pub fn substitute(&self, p: &QPolynomial) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("matrix substitution requires a square matrix".into()));
        }
        let n = self.rows;
        let mut acc = QMatrix::zero(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }

    /// The p-th compound matrix: (k choose p)-dimensional matrix of p x p
    /// minors, rows and columns indexed by sorted index subsets in
    /// lexicographic order. Eigenvalues are the p-fold products of the
    /// eigenvalues of `self`.
    pub fn compound(&self, p: usize) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("compound requires a square matrix".into()));
        }
        let k = self.rows;
        if p == 0 || p > k {
            return Err(Error::Parameter(format!(
                "compound order p={p} out of range 1..={k}"
            )));
        }
        let subsets = index_subsets(k, p);
        let dim = subsets.len();
        let mut out = QMatrix::zero(dim, dim);
        for (i, rows) in subsets.iter().enumerate() {
            for (j, cols) in subsets.iter().enumerate() {
                out[(i, j)] = self.minor(rows, cols)?;
            }
        }
        Ok(out)
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        let p = rows.len();
        let mut entries = Vec::with_capacity(p * p);
        for &r in rows {
            for &c in cols {
                entries.push(self[(r, c)].clone());
            }
        }
        QMatrix::new(p, p, entries)?.det()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

/// All p-element subsets of 0..k in lexicographic order.
pub fn index_subsets(k: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(p);
    fn rec(start: usize, k: usize, p: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == p {
            out.push(current.clone());
            return;
        }
        for i in start..k {
            current.push(i);
            rec(i + 1, k, p, current, out);
            current.pop();
        }
    }
    rec(0, k, p, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn charpoly_identity() {
        let p = QMatrix::identity(2).charpoly().unwrap();
        // t^2 - 2t + 1
        assert_eq!(p.coeffs(), &[rat_int(1), rat_int(-2), rat_int(1)]);
    }

    #[test]
    fn charpoly_fibonacci_like() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let p = m.charpoly().unwrap();
        // t^2 - 3t + 1, by cofactor expansion
        assert_eq!(p.coeffs(), &[rat_int(1), rat_int(-3), rat_int(1)]);
    }

    #[test]
    fn charpoly_companion() {
        // companion matrix of t^3 - t - 1
        let m = QMatrix::from_i64(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]);
        let p = m.charpoly().unwrap();
        assert_eq!(p.coeffs(), &[rat_int(-1), rat_int(-1), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn charpoly_rejects_non_square() {
        let m = QMatrix::zero(2, 3);
        assert!(m.charpoly().is_err());
    }

    #[test]
    fn det_exact() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det().unwrap(), rat_int(1));
        let m = QMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.det().unwrap(), rat_int(0));
        let m = QMatrix::new(2, 2, vec![rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 5)]).unwrap();
        assert_eq!(m.det().unwrap(), rat(1, 60));
    }

    #[test]
    fn compound_top_is_det() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let c = m.compound(2).unwrap();
        assert_eq!(c.rows(), 1);
        assert_eq!(c[(0, 0)], rat_int(1));
    }

    #[test]
    fn compound_of_diagonal() {
        let m = QMatrix::from_i64(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        let c = m.compound(2).unwrap();
        assert_eq!(c.rows(), 3);
        assert_eq!(c[(0, 0)], rat_int(6));
        assert_eq!(c[(1, 1)], rat_int(10));
        assert_eq!(c[(2, 2)], rat_int(15));
        assert!(c[(0, 1)].is_zero());
    }

    #[test]
    fn compound_out_of_range() {
        let m = QMatrix::identity(2);
        assert!(m.compound(0).is_err());
        assert!(m.compound(3).is_err());
    }

    #[test]
    fn cayley_hamilton_small() {
        let m = QMatrix::from_i64(&[vec![2, 1, 0], vec![1, 1, -3], vec![0, 4, 1]]);
        let p = m.charpoly().unwrap();
        assert!(m.substitute(&p).unwrap().is_zero());
    }
}
