//! The built-in variety models.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{index_subsets, QMatrix};
use crate::rational::{rat_int, Rational};

use super::{BlowdownData, VarietyModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSpec {
    /// P^k, k <= 4
    Projective(usize),
    /// (P1)^k, k <= 4
    ProductP1(usize),
    /// plane blown up at r <= 3 general points
    BlownUpPlane(usize),
    /// 3-space blown up at a point
    BlownUpSpacePoint,
    /// 3-space blown up along a line
    BlownUpSpaceLine,
}

impl ModelSpec {
    /// Accepts "P(2)", "P2", "(P1)^3", "P1^3", "P1xP1", "BlP2(2)", "BlP3pt",
    /// "BlP3line".
    pub fn parse(s: &str) -> Result<ModelSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::ModelSpec(s.to_string());
        if t == "BlP3pt" {
            return Ok(ModelSpec::BlownUpSpacePoint);
        }
        if t == "BlP3line" {
            return Ok(ModelSpec::BlownUpSpaceLine);
        }
        if let Some(r) = t.strip_prefix("BlP2(").and_then(|r| r.strip_suffix(')')) {
            let r: usize = r.parse().map_err(|_| unknown())?;
            if (1..=3).contains(&r) {
                return Ok(ModelSpec::BlownUpPlane(r));
            }
            return Err(unknown());
        }
        let product_k = if let Some(k) = t.strip_prefix("(P1)^") {
            k.parse::<usize>().ok()
        } else if let Some(k) = t.strip_prefix("P1^") {
            k.parse::<usize>().ok()
        } else if t.starts_with("P1x") && t.split('x').all(|part| part == "P1") {
            Some(t.split('x').count())
        } else {
            None
        };
        if let Some(k) = product_k {
            if (1..=4).contains(&k) {
                return Ok(ModelSpec::ProductP1(k));
            }
            return Err(unknown());
        }
        let proj_k = if let Some(k) = t.strip_prefix("P(").and_then(|k| k.strip_suffix(')')) {
            k.parse::<usize>().ok()
        } else if let Some(k) = t.strip_prefix('P') {
            k.parse::<usize>().ok()
        } else {
            None
        };
        if let Some(k) = proj_k {
            if (1..=4).contains(&k) {
                return Ok(ModelSpec::Projective(k));
            }
        }
        Err(unknown())
    }
}

/// Instantiate a built-in model; the result satisfies every model invariant.
pub fn make_model(spec: ModelSpec) -> Result<VarietyModel> {
    let model = match spec {
        ModelSpec::Projective(k) => projective(k),
        ModelSpec::ProductP1(k) => product_p1(k),
        ModelSpec::BlownUpPlane(r) => blown_up_plane(r),
        ModelSpec::BlownUpSpacePoint => blown_up_space_point(),
        ModelSpec::BlownUpSpaceLine => blown_up_space_line(),
    };
    model.validate()?;
    Ok(model)
}

fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

/// Fill the full (p,q) tensor table from a product rule on basis elements.
fn build_tensor(
    dim: usize,
    ranks: &[usize],
    product: impl Fn(usize, usize, usize, usize) -> Vec<Rational>,
) -> BTreeMap<(usize, usize), Vec<Vec<Vec<Rational>>>> {
    let mut out = BTreeMap::new();
    for p in 0..=dim {
        for q in 0..=(dim - p) {
            let mut tensor = Vec::with_capacity(ranks[p]);
            for i in 0..ranks[p] {
                let mut row = Vec::with_capacity(ranks[q]);
                for j in 0..ranks[q] {
                    row.push(product(p, i, q, j));
                }
                tensor.push(row);
            }
            out.insert((p, q), tensor);
        }
    }
    out
}

fn unit_vec(len: usize, index: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[index] = Rational::one();
    v
}

fn projective(k: usize) -> VarietyModel {
    let ranks = vec![1usize; k + 1];
    let labels = (0..=k)
        .map(|p| {
            vec![match p {
                0 => "1".to_string(),
                1 => "h".to_string(),
                _ => format!("h^{p}"),
            }]
        })
        .collect();
    let mult = build_tensor(k, &ranks, |_, _, _, _| vec![Rational::one()]);
    VarietyModel {
        name: format!("P({k})"),
        dim: k,
        ranks,
        basis_labels: labels,
        mult_tensor: mult,
        degree_functional: vec![Rational::one()],
        ample: vec![Rational::one()],
        cone_generators: (0..=k).map(|_| vec![vec![Rational::one()]]).collect(),
        blowdown: None,
    }
}

fn product_p1(k: usize) -> VarietyModel {
    let subsets: Vec<Vec<Vec<usize>>> = (0..=k).map(|p| index_subsets(k, p)).collect();
    let ranks: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
    let labels = subsets
        .iter()
        .map(|per_p| {
            per_p
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        "1".to_string()
                    } else {
                        s.iter().map(|i| format!("h{}", i + 1)).collect::<String>()
                    }
                })
                .collect()
        })
        .collect();
    let subsets_for_mult = subsets.clone();
    let mult = build_tensor(k, &ranks, move |p, i, q, j| {
        let a = &subsets_for_mult[p][i];
        let b = &subsets_for_mult[q][j];
        let mut merged: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        merged.sort_unstable();
        let len = subsets_for_mult[p + q].len();
        if merged.windows(2).any(|w| w[0] == w[1]) {
            return vec![Rational::zero(); len];
        }
        let idx = subsets_for_mult[p + q]
            .iter()
            .position(|s| s == &merged)
            .expect("merged subset present");
        unit_vec(len, idx)
    });
    let cone_generators = ranks
        .iter()
        .map(|&r| (0..r).map(|i| unit_vec(r, i)).collect())
        .collect();
    VarietyModel {
        name: format!("(P1)^{k}"),
        dim: k,
        ranks: ranks.clone(),
        basis_labels: labels,
        mult_tensor: mult,
        degree_functional: vec![Rational::one()],
        ample: vec![Rational::one(); ranks[1]],
        cone_generators,
        blowdown: None,
    }
}

fn blown_up_plane(r: usize) -> VarietyModel {
    let ranks = vec![1, 1 + r, 1];
    let mut n1_labels = vec!["H".to_string()];
    for i in 1..=r {
        n1_labels.push(format!("E{i}"));
    }
    let labels = vec![vec!["1".to_string()], n1_labels, vec!["pt".to_string()]];
    let mult = build_tensor(2, &ranks, move |p, i, q, j| {
        match (p, q) {
            (0, _) => unit_vec(ranks_of_plane(r)[q], j),
            (_, 0) => unit_vec(ranks_of_plane(r)[p], i),
            (1, 1) => {
                // H.H = pt, H.E_i = 0, E_i.E_j = -delta_ij pt
                let v = if i == 0 && j == 0 {
                    1
                } else if i == j {
                    -1
                } else {
                    0
                };
                rats(&[v])
            }
            _ => unreachable!("codimension overflow in plane model"),
        }
    });
    let mut n1_gens: Vec<Vec<Rational>> = Vec::new();
    for i in 1..=r {
        n1_gens.push(unit_vec(1 + r, i));
    }
    if r == 1 {
        n1_gens.push(rats(&[1, -1])); // H - E1
    } else {
        for i in 1..=r {
            for j in (i + 1)..=r {
                let mut g = vec![Rational::zero(); 1 + r];
                g[0] = Rational::one();
                g[i] = -Rational::one();
                g[j] = -Rational::one();
                n1_gens.push(g); // H - E_i - E_j
            }
        }
    }
    let mut ample = vec![rat_int(3)];
    ample.extend(vec![rat_int(-1); r]);
    // blowdown contracts the last exceptional curve
    let target = if r == 1 {
        projective(2)
    } else {
        blown_up_plane(r - 1)
    };
    let tr = target.ranks[1];
    let mut push1 = QMatrix::zero(tr, 1 + r);
    let mut pull1 = QMatrix::zero(1 + r, tr);
    for i in 0..tr {
        push1[(i, i)] = Rational::one();
        pull1[(i, i)] = Rational::one();
    }
    let blowdown = BlowdownData {
        target: Box::new(target),
        pushforward: vec![QMatrix::identity(1), push1, QMatrix::identity(1)],
        pullback: vec![QMatrix::identity(1), pull1, QMatrix::identity(1)],
        exceptional: unit_vec(1 + r, r),
        // on a surface a fiber of E over the blown-up point is E itself
        fiber: unit_vec(1 + r, r),
        center: vec![Rational::one()],
    };
    VarietyModel {
        name: format!("BlP2({r})"),
        dim: 2,
        ranks: vec![1, 1 + r, 1],
        basis_labels: labels,
        mult_tensor: mult,
        degree_functional: vec![Rational::one()],
        ample,
        cone_generators: vec![
            vec![vec![Rational::one()]],
            n1_gens,
            vec![vec![Rational::one()]],
        ],
        blowdown: Some(blowdown),
    }
}

fn ranks_of_plane(r: usize) -> [usize; 3] {
    [1, 1 + r, 1]
}

/// Shared scaffolding for the two blowups of P^3 (both have N^1 = <H, E> and
/// N^2 of rank 2).
fn blown_up_space(
    name: &str,
    n2_labels: [&str; 2],
    ee_in_n2: [i64; 2],
    numbers_1_2: [[i64; 2]; 2],
    he_in_n2: [i64; 2],
    n2_cone: Vec<Vec<Rational>>,
    fiber: Vec<Rational>,
    center: Vec<Rational>,
) -> VarietyModel {
    let ranks = vec![1, 2, 2, 1];
    let labels = vec![
        vec!["1".to_string()],
        vec!["H".to_string(), "E".to_string()],
        vec![n2_labels[0].to_string(), n2_labels[1].to_string()],
        vec!["pt".to_string()],
    ];
    let mult = build_tensor(3, &ranks, move |p, i, q, j| match (p, q) {
        (0, _) => unit_vec([1, 2, 2, 1][q], j),
        (_, 0) => unit_vec([1, 2, 2, 1][p], i),
        (1, 1) => {
            if i == 0 && j == 0 {
                rats(&[1, 0]) // H.H = H2
            } else if i == 1 && j == 1 {
                rats(&ee_in_n2)
            } else {
                rats(&he_in_n2)
            }
        }
        (1, 2) => rats(&[numbers_1_2[i][j]]),
        (2, 1) => rats(&[numbers_1_2[j][i]]),
        _ => unreachable!("codimension overflow in 3-fold model"),
    });
    let target = projective(3);
    let push = QMatrix::from_i64(&[vec![1, 0]]);
    let pull = QMatrix::from_i64(&[vec![1], vec![0]]);
    let blowdown = BlowdownData {
        target: Box::new(target),
        pushforward: vec![
            QMatrix::identity(1),
            push.clone(),
            push,
            QMatrix::identity(1),
        ],
        pullback: vec![
            QMatrix::identity(1),
            pull.clone(),
            pull,
            QMatrix::identity(1),
        ],
        exceptional: rats(&[0, 1]),
        fiber,
        center,
    };
    VarietyModel {
        name: name.to_string(),
        dim: 3,
        ranks,
        basis_labels: labels,
        mult_tensor: mult,
        degree_functional: vec![Rational::one()],
        ample: rats(&[2, -1]),
        cone_generators: vec![
            vec![vec![Rational::one()]],
            vec![rats(&[0, 1]), rats(&[1, -1])], // E, H - E
            n2_cone,
            vec![vec![Rational::one()]],
        ],
        blowdown: Some(blowdown),
    }
}

fn blown_up_space_point() -> VarietyModel {
    // N^2 basis: H2 (pullback of a line), l (line in the exceptional plane).
    // E.E = -l; intersection numbers H.H2 = 1, H.l = 0, E.H2 = 0, E.l = -1.
    blown_up_space(
        "BlP3pt",
        ["H2", "l"],
        [0, -1],
        [[1, 0], [0, -1]],
        [0, 0], // H.E = 0
        vec![rats(&[0, 1]), rats(&[1, 0])], // l, H2
        rats(&[0, 1]),
        // the center is a point (codimension 3): no class in N^2 of the target
        rats(&[0]),
    )
}

fn blown_up_space_line() -> VarietyModel {
    // N^2 basis: H2, F (fiber of E over the blown-up line).
    // H.E = F, E.E = -H2 + 2F; numbers H.H2 = 1, H.F = 0, E.H2 = 0, E.F = -1.
    blown_up_space(
        "BlP3line",
        ["H2", "F"],
        [-1, 2],
        [[1, 0], [0, -1]],
        [0, 1], // H.E = F
        vec![rats(&[0, 1]), rats(&[1, -1])], // F, H2 - F
        rats(&[0, 1]),
        rats(&[1]), // the center is a line: class h^2 in P^3
    )
}
