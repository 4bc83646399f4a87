//! Finite-rank models of the numerical cycle groups N^p(X).
//!
//! A `VarietyModel` carries ranks, intersection tensors, the degree
//! functional, an ample class, effective-cone generators, and (for the blowup
//! models) blowdown pull/push data. All products and degrees are exact.
//!
//! Effective cones are model data, not computed: each built-in ships the
//! standard generator list for its codimension groups.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::matrix::QMatrix;
use crate::rational::{rat_int, Rational};

/// A coordinate vector in N^p of a named model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    pub model: String,
    pub codim: usize,
    pub coords: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct BlowdownData {
    pub target: Box<VarietyModel>,
    /// pushforward[p]: N^p(source) -> N^p(target)
    pub pushforward: Vec<QMatrix>,
    /// pullback[p]: N^p(target) -> N^p(source)
    pub pullback: Vec<QMatrix>,
    /// exceptional divisor class in N^1(source)
    pub exceptional: Vec<Rational>,
    /// class of a general fiber of the exceptional divisor, in N^{k-1}(source)
    pub fiber: Vec<Rational>,
    /// class of the blowup center in N^2(target); zero when the center has
    /// codimension at least 3
    pub center: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct VarietyModel {
    pub name: String,
    pub dim: usize,
    /// ranks r_0..r_k
    pub ranks: Vec<usize>,
    pub basis_labels: Vec<Vec<String>>,
    /// (p,q) -> tensor[i][j] = coordinates of basis_i(N^p).basis_j(N^q) in N^{p+q}
    pub mult_tensor: BTreeMap<(usize, usize), Vec<Vec<Vec<Rational>>>>,
    /// degree of each basis element of N^k
    pub degree_functional: Vec<Rational>,
    /// ample class coordinates in N^1
    pub ample: Vec<Rational>,
    /// per codimension, effective-cone generator coordinate vectors
    pub cone_generators: Vec<Vec<Vec<Rational>>>,
    pub blowdown: Option<BlowdownData>,
}

impl VarietyModel {
    pub fn class(&self, codim: usize, coords: Vec<Rational>) -> Result<CycleClass> {
        if codim > self.dim {
            return Err(Error::Dimension(format!(
                "codimension {codim} exceeds dim {}",
                self.dim
            )));
        }
        if coords.len() != self.ranks[codim] {
            return Err(Error::Dimension(format!(
                "N^{codim} of {} has rank {}, got {} coordinates",
                self.name, self.ranks[codim], coords.len()
            )));
        }
        Ok(CycleClass {
            model: self.name.clone(),
            codim,
            coords,
        })
    }

    pub fn class_i64(&self, codim: usize, coords: &[i64]) -> Result<CycleClass> {
        self.class(codim, coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn basis_class(&self, codim: usize, index: usize) -> Result<CycleClass> {
        let mut coords = vec![Rational::zero(); self.ranks[codim]];
        coords[index] = Rational::one();
        self.class(codim, coords)
    }

    pub fn unit(&self) -> CycleClass {
        self.class(0, vec![Rational::one()]).expect("rank of N^0 is 1")
    }

    pub fn ample_class(&self) -> CycleClass {
        self.class(1, self.ample.clone()).expect("ample class matches rank")
    }

    fn check_class(&self, u: &CycleClass) -> Result<()> {
        if u.model != self.name {
            return Err(Error::Dimension(format!(
                "class belongs to model {} but was used with {}",
                u.model, self.name
            )));
        }
        if u.codim > self.dim || u.coords.len() != self.ranks[u.codim] {
            return Err(Error::Dimension("class coordinates inconsistent with model".into()));
        }
        Ok(())
    }

    /// Exact cup product, the bilinear extension of the multiplication tensor.
    pub fn cup(&self, u: &CycleClass, v: &CycleClass) -> Result<CycleClass> {
        self.check_class(u)?;
        self.check_class(v)?;
        let (p, q) = (u.codim, v.codim);
        if p + q > self.dim {
            return Err(Error::Dimension(format!(
                "cup product overflows: {p} + {q} > dim {}",
                self.dim
            )));
        }
        let tensor = self
            .mult_tensor
            .get(&(p, q))
            .ok_or_else(|| Error::ModelData(format!("missing mult tensor ({p},{q})")))?;
        let mut out = vec![Rational::zero(); self.ranks[p + q]];
        for (i, a) in u.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (l, c) in tensor[i][j].iter().enumerate() {
                    out[l] += &ab * c;
                }
            }
        }
        self.class(p + q, out)
    }

    /// Degree functional on N^k.
    pub fn degree0(&self, u: &CycleClass) -> Result<Rational> {
        self.check_class(u)?;
        if u.codim != self.dim {
            return Err(Error::Dimension(format!(
                "degree0 needs a top-codimension class, got codim {}",
                u.codim
            )));
        }
        let mut d = Rational::zero();
        for (c, w) in u.coords.iter().zip(&self.degree_functional) {
            d += c * w;
        }
        Ok(d)
    }

    /// ample^p as a class in N^p.
    pub fn ample_power(&self, p: usize) -> Result<CycleClass> {
        let mut acc = self.unit();
        let ample = self.ample_class();
        for _ in 0..p {
            acc = self.cup(&acc, &ample)?;
        }
        Ok(acc)
    }

    /// deg(u) = deg0(u . ample^{k-p}), the degree of a codimension-p class
    /// against powers of the ample class.
    pub fn deg(&self, u: &CycleClass) -> Result<Rational> {
        let comp = self.ample_power(self.dim - u.codim)?;
        self.degree0(&self.cup(u, &comp)?)
    }

    pub fn blowdown_data(&self) -> Result<&BlowdownData> {
        self.blowdown
            .as_ref()
            .ok_or_else(|| Error::Capability(format!("model {} has no blowdown data", self.name)))
    }

    pub fn blowdown_pushforward(&self, u: &CycleClass) -> Result<CycleClass> {
        self.check_class(u)?;
        let bd = self.blowdown_data()?;
        let coords = bd.pushforward[u.codim].apply(&u.coords)?;
        bd.target.class(u.codim, coords)
    }

    pub fn blowup_pullback(&self, v: &CycleClass) -> Result<CycleClass> {
        let bd = self.blowdown_data()?;
        bd.target.check_class(v)?;
        let coords = bd.pullback[v.codim].apply(&v.coords)?;
        self.class(v.codim, coords)
    }

    pub fn exceptional_class(&self) -> Result<CycleClass> {
        let bd = self.blowdown_data()?;
        self.class(1, bd.exceptional.clone())
    }

    pub fn fiber_class(&self) -> Result<CycleClass> {
        let bd = self.blowdown_data()?;
        self.class(self.dim - 1, bd.fiber.clone())
    }

    pub fn center_class(&self) -> Result<CycleClass> {
        let bd = self.blowdown_data()?;
        bd.target.class(2, bd.center.clone())
    }

    /// Exact signature (n_plus, n_minus, n_zero) of the quadratic form
    /// (u,v) -> deg(u.v.w^{k-2}) on N^1, by rational symmetric diagonalization.
    pub fn hodge_signature(&self, w: &CycleClass) -> Result<(usize, usize, usize)> {
        self.check_class(w)?;
        if w.codim != 1 {
            return Err(Error::Dimension("hodge_signature expects a class in N^1".into()));
        }
        let wk = {
            let mut acc = self.unit();
            for _ in 0..self.dim {
                acc = self.cup(&acc, w)?;
            }
            acc
        };
        if self.degree0(&wk)? <= Rational::zero() {
            return Err(Error::NotAmple(format!(
                "deg(w^{}) is not positive",
                self.dim
            )));
        }
        let wpow = {
            let mut acc = self.unit();
            for _ in 0..self.dim.saturating_sub(2) {
                acc = self.cup(&acc, w)?;
            }
            acc
        };
        let r = self.ranks[1];
        let mut gram = QMatrix::zero(r, r);
        for i in 0..r {
            for j in 0..r {
                let bi = self.basis_class(1, i)?;
                let bj = self.basis_class(1, j)?;
                let prod = self.cup(&self.cup(&bi, &bj)?, &wpow)?;
                gram[(i, j)] = self.degree0(&prod)?;
            }
        }
        Ok(symmetric_signature(&gram))
    }

    /// Exact effective-cone membership: is u a nonnegative combination of the
    /// listed generators of N^p? Decided by rational-simplex feasibility.
    pub fn cone_contains(&self, u: &CycleClass) -> Result<bool> {
        self.check_class(u)?;
        let generators = self.cone_generator_matrix(u.codim)?;
        Ok(lp::feasible(&generators, &u.coords)?.is_some())
    }

    fn cone_generator_matrix(&self, p: usize) -> Result<QMatrix> {
        let gens = &self.cone_generators[p];
        if gens.is_empty() {
            return Err(Error::Capability(format!(
                "no effective-cone generators listed for N^{p} of {}",
                self.name
            )));
        }
        let rows = self.ranks[p];
        let mut m = QMatrix::zero(rows, gens.len());
        for (j, g) in gens.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = g[i].clone();
            }
        }
        Ok(m)
    }

    /// The degree norm: exact minimum of deg(v1) + deg(v2) over decompositions
    /// u = v1 - v2 with v1, v2 in the generated cone.
    pub fn norm1(&self, u: &CycleClass) -> Result<Rational> {
        self.check_class(u)?;
        let p = u.codim;
        let generators = self.cone_generator_matrix(p)?;
        let m = generators.cols();
        // decision variables: generator coefficients of v1 then of v2
        let mut a = QMatrix::zero(self.ranks[p], 2 * m);
        for i in 0..self.ranks[p] {
            for j in 0..m {
                a[(i, j)] = generators[(i, j)].clone();
                a[(i, m + j)] = -generators[(i, j)].clone();
            }
        }
        let mut cost = Vec::with_capacity(2 * m);
        for j in 0..m {
            let g = self.class(p, self.cone_generators[p][j].clone())?;
            cost.push(self.deg(&g)?);
        }
        cost.extend_from_slice(&cost.clone());
        match lp::minimize(&cost, &a, &u.coords)? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible => Err(Error::ModelData(format!(
                "norm1 infeasible: generators of N^{p} of {} do not span",
                self.name
            ))),
            LpOutcome::Unbounded => Err(Error::ModelData(
                "norm1 LP unbounded: a listed generator has negative degree".into(),
            )),
        }
    }

    /// push(a).push(a) - push(a.a) for a class a in N^1 of a blowup model.
    /// Verifies the exact identity with (a.F)^2 W, then checks effectiveness
    /// in N^2 of the target. Returns the difference and the cone verdict.
    pub fn psef_difference(&self, alpha: &CycleClass) -> Result<(CycleClass, bool)> {
        self.check_class(alpha)?;
        if alpha.codim != 1 {
            return Err(Error::Dimension("psef_difference expects a class in N^1".into()));
        }
        let bd = self.blowdown_data()?;
        let push_a = self.blowdown_pushforward(alpha)?;
        let square_then_push = self.blowdown_pushforward(&self.cup(alpha, alpha)?)?;
        let push_square = bd.target.cup(&push_a, &push_a)?;
        let diff = bd.target.class(
            2,
            push_square
                .coords
                .iter()
                .zip(&square_then_push.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )?;
        // exact identity: diff = (alpha . F)^2 W
        let af = self.degree0(&self.cup(alpha, &self.fiber_class()?)?)?;
        let expected: Vec<Rational> = bd.center.iter().map(|c| &af * &af * c).collect();
        if diff.coords != expected {
            return Err(Error::ModelData(format!(
                "pull-push identity failed on {} for class {:?}",
                self.name, alpha.coords
            )));
        }
        let effective = bd.target.cone_contains(&diff)?;
        Ok((diff, effective))
    }

    /// Consistency checks for model data: boundary ranks, commutativity and
    /// associativity of the product on basis elements, positivity of the
    /// ample self-intersection, and the projection-formula / section
    /// identities for blowdown data.
    pub fn validate(&self) -> Result<()> {
        let k = self.dim;
        if self.ranks.len() != k + 1 || self.ranks[0] != 1 || self.ranks[k] != 1 {
            return Err(Error::ModelData("ranks must run r_0..r_k with r_0 = r_k = 1".into()));
        }
        // commutativity
        for p in 0..=k {
            for q in 0..=(k - p) {
                for i in 0..self.ranks[p] {
                    for j in 0..self.ranks[q] {
                        let a = self.cup(&self.basis_class(p, i)?, &self.basis_class(q, j)?)?;
                        let b = self.cup(&self.basis_class(q, j)?, &self.basis_class(p, i)?)?;
                        if a != b {
                            return Err(Error::ModelData(format!(
                                "product not commutative at ({p},{i})x({q},{j})"
                            )));
                        }
                    }
                }
            }
        }
        // associativity on basis triples
        for p in 0..=k {
            for q in 0..=(k - p) {
                for s in 0..=(k - p - q) {
                    for i in 0..self.ranks[p] {
                        for j in 0..self.ranks[q] {
                            for l in 0..self.ranks[s] {
                                let bi = self.basis_class(p, i)?;
                                let bj = self.basis_class(q, j)?;
                                let bl = self.basis_class(s, l)?;
                                let left = self.cup(&self.cup(&bi, &bj)?, &bl)?;
                                let right = self.cup(&bi, &self.cup(&bj, &bl)?)?;
                                if left != right {
                                    return Err(Error::ModelData(format!(
                                        "product not associative at ({p},{i}),({q},{j}),({s},{l})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        // ample positivity
        let topdeg = self.degree0(&self.ample_power(k)?)?;
        if topdeg <= Rational::zero() {
            return Err(Error::ModelData("deg(ample^k) must be positive".into()));
        }
        // blowdown identities
        if let Some(bd) = &self.blowdown {
            bd.target.validate()?;
            for p in 0..=k {
                // P_p U_p = identity on N^p(target)
                let pu = bd.pushforward[p].mul(&bd.pullback[p])?;
                if pu != QMatrix::identity(bd.target.ranks[p]) {
                    return Err(Error::ModelData(format!(
                        "pushforward . pullback is not the identity on N^{p}"
                    )));
                }
                // projection formula
                let q = k - p;
                for i in 0..self.ranks[p] {
                    for j in 0..bd.target.ranks[q] {
                        let u = self.basis_class(p, i)?;
                        let v = bd.target.basis_class(q, j)?;
                        let lhs = bd
                            .target
                            .degree0(&bd.target.cup(&self.blowdown_pushforward(&u)?, &v)?)?;
                        let rhs = self.degree0(&self.cup(&u, &self.blowup_pullback(&v)?)?)?;
                        if lhs != rhs {
                            return Err(Error::ModelData(format!(
                                "projection formula failed at N^{p} basis {i}, N^{q} basis {j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact signature of a rational symmetric matrix via congruence
/// diagonalization.
pub fn symmetric_signature(g: &QMatrix) -> (usize, usize, usize) {
    let n = g.rows();
    let mut m = g.clone();
    let mut plus = 0;
    let mut minus = 0;
    let mut zero = 0;
    let mut start = 0;
    while start < n {
        // find a nonzero diagonal entry at or after `start`
        let diag = (start..n).find(|&i| !m[(i, i)].is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                // all diagonal entries zero: look for an off-diagonal entry
                let mut found = None;
                'outer: for i in start..n {
                    for j in (i + 1)..n {
                        if !m[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match found {
                    None => {
                        zero += n - start;
                        break;
                    }
                    Some((i, j)) => {
                        // congruence: add row/col j into row/col i to expose a
                        // nonzero diagonal entry
                        for l in 0..n {
                            let add = m[(j, l)].clone();
                            m[(i, l)] += add;
                        }
                        for l in 0..n {
                            let add = m[(l, j)].clone();
                            m[(l, i)] += add;
                        }
                        i
                    }
                }
            }
        };
        if pivot != start {
            // symmetric swap of rows/cols pivot <-> start
            for l in 0..n {
                let a = m[(pivot, l)].clone();
                let b = m[(start, l)].clone();
                m[(pivot, l)] = b;
                m[(start, l)] = a;
            }
            for l in 0..n {
                let a = m[(l, pivot)].clone();
                let b = m[(l, start)].clone();
                m[(l, pivot)] = b;
                m[(l, start)] = a;
            }
        }
        let d = m[(start, start)].clone();
        if d > Rational::zero() {
            plus += 1;
        } else {
            minus += 1;
        }
        // clear row/column `start` below the pivot by congruence
        for i in (start + 1)..n {
            if m[(i, start)].is_zero() {
                continue;
            }
            let f = &m[(i, start)] / &d;
            for l in 0..n {
                let sub = &f * &m[(start, l)];
                m[(i, l)] -= sub;
            }
            for l in 0..n {
                let sub = &f * &m[(l, start)];
                m[(l, i)] -= sub;
            }
        }
        start += 1;
    }
    (plus, minus, zero)
}

mod builtins;
mod json;

pub use builtins::{make_model, ModelSpec};
pub use json::{model_from_json, model_to_json};
