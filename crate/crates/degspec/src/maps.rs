//! Rational self-map descriptors: monomial maps (integer exponent matrices),
//! polynomial maps on projective space, and user-supplied matrix actions on a
//! model's cycle lattices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::model::{make_model, model_from_json, ModelSpec, VarietyModel};
use crate::multipoly::MultiPoly;
use crate::rational::{rat_int, Rational};

/// Torus map x_i -> x^{A row i} on (P^1)^k or P^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    k: usize,
    a: QMatrix,
}

impl MonomialMap {
    pub fn new(rows: &[Vec<i64>]) -> Result<MonomialMap> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::Input("exponent matrix must be square and nonempty".into()));
        }
        let a = QMatrix::from_i64(rows);
        if a.det()?.is_zero() {
            return Err(Error::NonDominant(
                "exponent matrix is singular, the monomial map is not dominant".into(),
            ));
        }
        Ok(MonomialMap { k, a })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn exponent_matrix(&self) -> &QMatrix {
        &self.a
    }

    /// Inverse monomial map; requires |det A| = 1 so A^{-1} is integral.
    pub fn inverse(&self) -> Result<MonomialMap> {
        let d = self.a.det()?;
        if d.numer().abs() != BigInt::from(1) {
            return Err(Error::Capability(format!(
                "monomial inverse needs |det A| = 1, got det = {}",
                d
            )));
        }
        let mut rows = vec![vec![0i64; self.k]; self.k];
        let inv = invert_integer_matrix(&self.a)?;
        for i in 0..self.k {
            for j in 0..self.k {
                rows[i][j] = inv[(i, j)]
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Input("inverse entry out of i64 range".into()))?;
            }
        }
        MonomialMap::new(&rows)
    }

    /// Action f*_p on N^p of (P^1)^k for p = 1 or p = k.
    pub fn action_p1k(&self, p: usize) -> Result<QMatrix> {
        monomial_action_p1k(&self.a, p)
    }

    /// Action of the n-th iterate: the action of the monomial map of A^n.
    pub fn iterate_action(&self, n: u32, p: usize) -> Result<QMatrix> {
        if n == 0 {
            return Err(Error::Parameter("iterate index must be >= 1".into()));
        }
        monomial_action_p1k(&self.a.pow(n)?, p)
    }

    /// Degree of the homogenized map on P^k.
    pub fn degree_pk(&self) -> Result<Rational> {
        monomial_degree_pk(&self.a)
    }

    /// Degree of the n-th iterate on P^k, via the exponent matrix power.
    pub fn iterate_degree_pk(&self, n: u32) -> Result<Rational> {
        if n == 0 {
            return Err(Error::Parameter("iterate index must be >= 1".into()));
        }
        monomial_degree_pk(&self.a.pow(n)?)
    }
}

/// Entrywise absolute value for p=1 (each factor x^m has degree |m| on the
/// line), topological degree |det A| for p=k.
pub fn monomial_action_p1k(a: &QMatrix, p: usize) -> Result<QMatrix> {
    let k = a.rows();
    if a.det()?.is_zero() {
        return Err(Error::NonDominant("singular exponent matrix".into()));
    }
    if p == 1 {
        let mut m = QMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                // basis h_j pulls back to sum_i |A_ij| h_i: column convention,
                // the action matrix applied to coordinate vectors
                m[(i, j)] = abs_rat(&a[(i, j)]);
            }
        }
        Ok(m)
    } else if p == k {
        QMatrix::new(1, 1, vec![abs_rat(&a.det()?)])
    } else {
        Err(Error::Capability(format!(
            "monomial actions for intermediate codimension p={p} are not supported (only p=1 and p=k)"
        )))
    }
}

/// Homogenization degree of the monomial map of A on P^k.
///
/// Exponent vectors b_0 = 0 and b_i = (-sum_j A_ij, A_i1..A_ik) in Z^{k+1};
/// shift by the minimal m >= 0 making everything nonnegative, strip the common
/// monomial factor g, return sum_j (m_j - g_j).
pub fn monomial_degree_pk(a: &QMatrix) -> Result<Rational> {
    let k = a.rows();
    if a.det()?.is_zero() {
        return Err(Error::NonDominant("singular exponent matrix".into()));
    }
    let mut b: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k + 1]];
    for i in 0..k {
        let mut row = Vec::with_capacity(k + 1);
        let mut s = Rational::zero();
        for j in 0..k {
            s += &a[(i, j)];
        }
        row.push(-s);
        for j in 0..k {
            row.push(a[(i, j)].clone());
        }
        b.push(row);
    }
    let mut degree = Rational::zero();
    for j in 0..=k {
        let min = b.iter().map(|r| r[j].clone()).min().unwrap();
        let m = if min < Rational::zero() { -min } else { Rational::zero() };
        let g = b.iter().map(|r| r[j].clone() + &m).min().unwrap();
        degree += m - g;
    }
    Ok(degree)
}

fn abs_rat(x: &Rational) -> Rational {
    if x < &Rational::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

fn invert_integer_matrix(a: &QMatrix) -> Result<QMatrix> {
    let n = a.rows();
    let mut aug = QMatrix::zero(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n + i)] = rat_int(1);
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[(r, col)].is_zero())
            .ok_or_else(|| Error::NonDominant("singular matrix".into()))?;
        if pivot != col {
            for j in 0..2 * n {
                let tmp = aug[(pivot, j)].clone();
                aug[(pivot, j)] = aug[(col, j)].clone();
                aug[(col, j)] = tmp;
            }
        }
        let p = aug[(col, col)].clone();
        for j in 0..2 * n {
            aug[(col, j)] = &aug[(col, j)] / &p;
        }
        for r in 0..n {
            if r == col || aug[(r, col)].is_zero() {
                continue;
            }
            let f = aug[(r, col)].clone();
            for j in 0..2 * n {
                let v = &aug[(col, j)] * &f;
                aug[(r, j)] = &aug[(r, j)] - &v;
            }
        }
    }
    let mut inv = QMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Ok(inv)
}

/// Homogeneous self-map of P^k given by k+1 components of equal degree with
/// no common factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    k: usize,
    components: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(k: usize, components: Vec<MultiPoly>) -> Result<PolyMap> {
        if components.len() != k + 1 {
            return Err(Error::Input(format!(
                "a self-map of P^{k} needs {} components, got {}",
                k + 1,
                components.len()
            )));
        }
        if components.iter().any(|c| c.nvars() != k + 1) {
            return Err(Error::Input(format!(
                "components must be polynomials in {} variables",
                k + 1
            )));
        }
        let map = PolyMap { k, components };
        map.reduced()
    }

    pub fn identity(k: usize) -> PolyMap {
        let components = (0..=k).map(|i| MultiPoly::variable(k + 1, i)).collect();
        PolyMap { k, components }
    }

    /// Linear map from an integer (k+1)x(k+1) matrix acting on coordinates.
    pub fn linear(rows: &[Vec<i64>]) -> Result<PolyMap> {
        let n = rows.len();
        if n < 2 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("linear map matrix must be square, size >= 2".into()));
        }
        let k = n - 1;
        let components = rows
            .iter()
            .map(|row| {
                MultiPoly::from_terms(
                    n,
                    row.iter().enumerate().map(|(j, &c)| {
                        let mut e = vec![0u32; n];
                        e[j] = 1;
                        (e, BigInt::from(c))
                    }),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(k, components)
    }

    /// The standard Cremona involution (yz, xz, xy) on P^2.
    pub fn cremona() -> PolyMap {
        let term = |e: [u32; 3]| {
            MultiPoly::from_terms(3, [(e.to_vec(), BigInt::from(1))]).unwrap()
        };
        PolyMap {
            k: 2,
            components: vec![term([0, 1, 1]), term([1, 0, 1]), term([1, 1, 0])],
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .map(|c| c.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn reduced(&self) -> Result<PolyMap> {
        if self.components.iter().any(|c| c.is_zero()) {
            return Err(Error::NonDominant(
                "a component is identically zero, the map is not dominant".into(),
            ));
        }
        let degs: Vec<u32> = self.components.iter().map(|c| c.total_degree()).collect();
        if degs.iter().any(|&d| d != degs[0]) {
            return Err(Error::Input(format!(
                "components must share a common degree, got {degs:?}"
            )));
        }
        if self.components.iter().any(|c| !c.is_homogeneous()) {
            return Err(Error::Input("components must be homogeneous".into()));
        }
        let mut components = self.components.clone();
        // common monomial factor first
        let mut mono = components[0].monomial_content();
        for c in &components[1..] {
            let mc = c.monomial_content();
            for (a, b) in mono.iter_mut().zip(mc) {
                *a = (*a).min(b);
            }
        }
        if mono.iter().any(|&e| e > 0) {
            components = components.iter().map(|c| c.divide_by_monomial(&mono)).collect();
        }
        // then the full polynomial gcd
        let mut g = MultiPoly::zero(self.k + 1);
        for c in &components {
            g = g.gcd(c);
        }
        if g.total_degree() > 0 {
            components = components
                .iter()
                .map(|c| {
                    c.divide_exact(&g).ok_or_else(|| {
                        Error::Input("gcd divide-back verification failed".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        }
        // integer content
        let mut ic = BigInt::zero();
        for c in &components {
            ic = num_integer::Integer::gcd(&ic, &c.content());
        }
        if !ic.is_zero() && ic != BigInt::from(1) {
            components = components
                .iter()
                .map(|c| c.divide_exact(&MultiPoly::constant(self.k + 1, ic.clone())).unwrap())
                .collect();
        }
        if components.iter().all(|c| c.total_degree() == 0) {
            return Err(Error::NonDominant(
                "all components reduced to constants, the map is not dominant".into(),
            ));
        }
        Ok(PolyMap {
            k: self.k,
            components,
        })
    }

    /// Inverse of an invertible linear map, as the adjugate matrix (the
    /// projective inverse, integral whenever the map is).
    pub fn linear_inverse(&self) -> Result<PolyMap> {
        if self.degree() != 1 {
            return Err(Error::Parameter("linear_inverse needs a linear map".into()));
        }
        let n = self.k + 1;
        let mut m = QMatrix::zero(n, n);
        for (i, c) in self.components.iter().enumerate() {
            for (e, coef) in c.terms() {
                let j = e
                    .iter()
                    .position(|&x| x == 1)
                    .ok_or_else(|| Error::Parameter("non-linear term in linear map".into()))?;
                m[(i, j)] = Rational::from_integer(coef.clone());
            }
        }
        let det = m.det()?;
        if det.is_zero() {
            return Err(Error::Parameter("linear map is not invertible".into()));
        }
        let adj = invert_integer_matrix(&m)?.scale(&det);
        let components = (0..n)
            .map(|i| {
                MultiPoly::from_terms(
                    n,
                    (0..n).map(|j| {
                        let mut e = vec![0u32; n];
                        e[j] = 1;
                        (e, adj[(i, j)].to_integer())
                    }),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(self.k, components)
    }

    /// self after g: substitute g's components into self's variables, then
    /// strip the common factor.
    pub fn compose(&self, g: &PolyMap) -> Result<PolyMap> {
        if self.k != g.k {
            return Err(Error::Dimension(format!(
                "cannot compose maps of P^{} and P^{}",
                self.k, g.k
            )));
        }
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&g.components))
            .collect::<Result<Vec<_>>>()?;
        PolyMap {
            k: self.k,
            components,
        }
        .reduced()
    }
}

/// Asserted matrices of f* on a model's lattices, with the user's stability
/// and cone-preservation claims carried along unverified.
#[derive(Debug, Clone)]
pub struct MatrixAction {
    pub model: VarietyModel,
    pub matrices: BTreeMap<usize, QMatrix>,
    pub asserted_1_stable: bool,
    pub asserted_cone_preserving: BTreeMap<usize, bool>,
}

impl MatrixAction {
    pub fn new(
        model: VarietyModel,
        matrices: BTreeMap<usize, QMatrix>,
        asserted_1_stable: bool,
        asserted_cone_preserving: BTreeMap<usize, bool>,
    ) -> Result<MatrixAction> {
        for (&p, m) in &matrices {
            if p == 0 || p > model.dim {
                return Err(Error::Parameter(format!(
                    "codimension {p} out of range for a {}-dimensional model",
                    model.dim
                )));
            }
            let r = model.ranks[p];
            if m.rows() != r || m.cols() != r {
                return Err(Error::Dimension(format!(
                    "matrix for p={p} is {}x{}, model rank is {r}",
                    m.rows(), m.cols()
                )));
            }
        }
        Ok(MatrixAction {
            model,
            matrices,
            asserted_1_stable,
            asserted_cone_preserving,
        })
    }

    pub fn matrix(&self, p: usize) -> Result<&QMatrix> {
        self.matrices.get(&p).ok_or_else(|| {
            Error::Capability(format!("no action matrix supplied for codimension {p}"))
        })
    }
}

#[derive(Debug, Clone)]
pub enum MapDescriptor {
    Monomial(MonomialMap),
    Polynomial(PolyMap),
    Matrix(Box<MatrixAction>),
}

#[derive(Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    coef: i64,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum MapJson {
    Monomial {
        #[serde(rename = "A")]
        a: Vec<Vec<i64>>,
    },
    Polynomial {
        vars: usize,
        components: Vec<Vec<TermJson>>,
    },
    MatrixAction {
        model: serde_json::Value,
        #[serde(rename = "M")]
        m: BTreeMap<String, Vec<Vec<String>>>,
        #[serde(default)]
        asserted_1_stable: bool,
        #[serde(default)]
        asserted_cone_preserving: BTreeMap<String, bool>,
    },
}

fn model_from_value(v: &serde_json::Value) -> Result<VarietyModel> {
    match v {
        serde_json::Value::String(s) => make_model(ModelSpec::parse(s)?),
        other => model_from_json(&other.to_string()),
    }
}

pub fn map_from_json(s: &str) -> Result<MapDescriptor> {
    let parsed: MapJson =
        serde_json::from_str(s).map_err(|e| Error::Input(format!("malformed map JSON: {e}")))?;
    match parsed {
        MapJson::Monomial { a } => Ok(MapDescriptor::Monomial(MonomialMap::new(&a)?)),
        MapJson::Polynomial { vars, components } => {
            if vars < 2 {
                return Err(Error::Input("polynomial map needs at least 2 variables".into()));
            }
            let k = vars - 1;
            let comps = components
                .into_iter()
                .map(|terms| {
                    MultiPoly::from_terms(
                        vars,
                        terms.into_iter().map(|t| (t.exps, BigInt::from(t.coef))),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MapDescriptor::Polynomial(PolyMap::new(k, comps)?))
        }
        MapJson::MatrixAction {
            model,
            m,
            asserted_1_stable,
            asserted_cone_preserving,
        } => {
            let model = model_from_value(&model)?;
            let mut matrices = BTreeMap::new();
            for (key, rows) in m {
                let p: usize = key
                    .parse()
                    .map_err(|_| Error::Input(format!("bad codimension key {key:?}")))?;
                let r = rows.len();
                let cols = rows.first().map_or(0, |row| row.len());
                if rows.iter().any(|row| row.len() != cols) {
                    return Err(Error::Input("ragged action matrix".into()));
                }
                let mut entries = Vec::with_capacity(r * cols);
                for row in &rows {
                    for cell in row {
                        entries.push(crate::rational::parse_rational(cell)?);
                    }
                }
                matrices.insert(p, QMatrix::new(r, cols, entries)?);
            }
            let mut cone_flags = BTreeMap::new();
            for (key, flag) in asserted_cone_preserving {
                let p: usize = key
                    .parse()
                    .map_err(|_| Error::Input(format!("bad codimension key {key:?}")))?;
                cone_flags.insert(p, flag);
            }
            Ok(MapDescriptor::Matrix(Box::new(MatrixAction::new(
                model,
                matrices,
                asserted_1_stable,
                cone_flags,
            )?)))
        }
    }
}

pub fn load_matrix_action(model: VarietyModel, json: &str) -> Result<MatrixAction> {
    let desc = map_from_json(json)?;
    match desc {
        MapDescriptor::Matrix(mut ma) => {
            if ma.model.ranks != model.ranks {
                return Err(Error::Dimension("model ranks do not match".into()));
            }
            ma.model = model;
            Ok(*ma)
        }
        _ => Err(Error::Input("JSON does not describe a matrix action".into())),
    }
}
