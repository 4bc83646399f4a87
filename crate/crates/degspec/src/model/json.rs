//! JSON interchange for variety models. Rationals travel as "num/den"
//! strings so the format stays exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{format_rational, parse_rational, Rational};

use super::{BlowdownData, VarietyModel};

#[derive(Debug, Serialize, Deserialize)]
struct ModelJson {
    name: String,
    dim: usize,
    ranks: Vec<usize>,
    basis_labels: Vec<Vec<String>>,
    /// keyed by "p,q"
    mult_tensor: BTreeMap<String, Vec<Vec<Vec<String>>>>,
    degree_functional: Vec<String>,
    ample: Vec<String>,
    cone_generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blowdown: Option<Box<BlowdownJson>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BlowdownJson {
    target: ModelJson,
    pushforward: Vec<Vec<Vec<String>>>,
    pullback: Vec<Vec<Vec<String>>>,
    exceptional: Vec<String>,
    fiber: Vec<String>,
    center: Vec<String>,
}

fn vec_to_json(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn vec_from_json(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn matrix_to_json(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<String>], expect_rows: usize, expect_cols: usize) -> Result<QMatrix> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::Input(format!(
            "expected a {expect_rows}x{expect_cols} matrix in model JSON"
        )));
    }
    let mut entries = Vec::with_capacity(expect_rows * expect_cols);
    for row in rows {
        for s in row {
            entries.push(parse_rational(s)?);
        }
    }
    QMatrix::new(expect_rows, expect_cols, entries)
}

fn to_json(model: &VarietyModel) -> ModelJson {
    let mult_tensor = model
        .mult_tensor
        .iter()
        .map(|((p, q), t)| {
            let key = format!("{p},{q}");
            let val = t
                .iter()
                .map(|row| row.iter().map(|c| vec_to_json(c)).collect())
                .collect();
            (key, val)
        })
        .collect();
    ModelJson {
        name: model.name.clone(),
        dim: model.dim,
        ranks: model.ranks.clone(),
        basis_labels: model.basis_labels.clone(),
        mult_tensor,
        degree_functional: vec_to_json(&model.degree_functional),
        ample: vec_to_json(&model.ample),
        cone_generators: model
            .cone_generators
            .iter()
            .map(|per_p| per_p.iter().map(|g| vec_to_json(g)).collect())
            .collect(),
        blowdown: model.blowdown.as_ref().map(|bd| {
            Box::new(BlowdownJson {
                target: to_json(&bd.target),
                pushforward: bd.pushforward.iter().map(matrix_to_json).collect(),
                pullback: bd.pullback.iter().map(matrix_to_json).collect(),
                exceptional: vec_to_json(&bd.exceptional),
                fiber: vec_to_json(&bd.fiber),
                center: vec_to_json(&bd.center),
            })
        }),
    }
}

fn from_json(j: &ModelJson) -> Result<VarietyModel> {
    let k = j.dim;
    if j.ranks.len() != k + 1 {
        return Err(Error::Input("ranks must have dim+1 entries".into()));
    }
    let mut mult_tensor = BTreeMap::new();
    for (key, t) in &j.mult_tensor {
        let (p, q) = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| Error::Input(format!("bad mult_tensor key '{key}'")))?;
        if p + q > k {
            return Err(Error::Input(format!("mult_tensor key '{key}' overflows dim")));
        }
        if t.len() != j.ranks[p] || t.iter().any(|row| row.len() != j.ranks[q]) {
            return Err(Error::Input(format!("mult_tensor '{key}' has wrong shape")));
        }
        let mut tensor = Vec::with_capacity(t.len());
        for row in t {
            let mut out_row = Vec::with_capacity(row.len());
            for coords in row {
                if coords.len() != j.ranks[p + q] {
                    return Err(Error::Input(format!(
                        "mult_tensor '{key}' product has wrong coordinate count"
                    )));
                }
                out_row.push(vec_from_json(coords)?);
            }
            tensor.push(out_row);
        }
        mult_tensor.insert((p, q), tensor);
    }
    let blowdown = match &j.blowdown {
        None => None,
        Some(bd) => {
            let target = from_json(&bd.target)?;
            if bd.pushforward.len() != k + 1 || bd.pullback.len() != k + 1 {
                return Err(Error::Input("blowdown needs dim+1 pushforward/pullback matrices".into()));
            }
            let mut pushforward = Vec::new();
            let mut pullback = Vec::new();
            for p in 0..=k {
                pushforward.push(matrix_from_json(&bd.pushforward[p], target.ranks[p], j.ranks[p])?);
                pullback.push(matrix_from_json(&bd.pullback[p], j.ranks[p], target.ranks[p])?);
            }
            Some(BlowdownData {
                target: Box::new(target),
                pushforward,
                pullback,
                exceptional: vec_from_json(&bd.exceptional)?,
                fiber: vec_from_json(&bd.fiber)?,
                center: vec_from_json(&bd.center)?,
            })
        }
    };
    let model = VarietyModel {
        name: j.name.clone(),
        dim: k,
        ranks: j.ranks.clone(),
        basis_labels: j.basis_labels.clone(),
        mult_tensor,
        degree_functional: vec_from_json(&j.degree_functional)?,
        ample: vec_from_json(&j.ample)?,
        cone_generators: j
            .cone_generators
            .iter()
            .map(|per_p| per_p.iter().map(|g| vec_from_json(g)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
        blowdown,
    };
    model.validate()?;
    Ok(model)
}

pub fn model_to_json(model: &VarietyModel) -> String {
    serde_json::to_string_pretty(&to_json(model)).expect("model serialization cannot fail")
}

pub fn model_from_json(s: &str) -> Result<VarietyModel> {
    let j: ModelJson =
        serde_json::from_str(s).map_err(|e| Error::Input(format!("model JSON: {e}")))?;
    from_json(&j)
}
