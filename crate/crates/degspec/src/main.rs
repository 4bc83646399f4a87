use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use degspec::checks::{
    cone_preservation_check, r1_squared_vs_r2, spectral_gap_report, threefold_duality_check,
    ConeCheck, HypothesisStatus, Verdict, DEFAULT_BAND,
};
use degspec::dynamics::{
    conjugation_invariance_check, default_n_max, degree_inequalities, degree_sequence,
    fekete_estimate, stability_check, DegreeSequence, StabilityResult,
};
use degspec::error::{Error, Result};
use degspec::maps::{map_from_json, MapDescriptor, MatrixAction};
use degspec::model::{make_model, model_from_json, ModelSpec, VarietyModel};
use degspec::rational::{format_decimal, format_rational, rational_to_f64};
use degspec::spectrum::spectral_radius_default;

#[derive(Parser)]
#[command(name = "degspec", version, about = "Degree growth and spectral gaps of rational self-maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses of a request file or of inline flags
    Run {
        /// Request JSON file; optional when --map and --check are given
        request: Option<PathBuf>,
        /// Model spec ("P2", "(P1)^3", "BlP3line", ...) or inline model JSON
        #[arg(long)]
        model: Option<String>,
        /// Inline map JSON
        #[arg(long)]
        map: Option<String>,
        /// Codimension for sequence analyses
        #[arg(long)]
        p: Option<usize>,
        /// Number of iterates
        #[arg(long)]
        nmax: Option<u32>,
        /// Numerical tolerance band
        #[arg(long)]
        tol: Option<f64>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write degree-sequence CSV files with this base path
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Comma-separated analysis kinds, replacing the request's list
        #[arg(long, value_delimiter = ',')]
        check: Vec<String>,
    },
    /// List the built-in variety models
    Models,
    /// Check a request file without running it
    Validate { request: PathBuf },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestJson {
    model: Option<serde_json::Value>,
    map: Option<serde_json::Value>,
    analyses: Vec<AnalysisJson>,
}

#[derive(Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct AnalysisJson {
    kind: String,
    p: Option<usize>,
    n_max: Option<u32>,
    tol: Option<f64>,
}

const KINDS: &[&str] = &[
    "degrees",
    "stability",
    "fekete",
    "theorem1",
    "theorem2",
    "duality",
    "hodge",
    "cone",
    "inequalities",
    "conjugation",
];

struct Request {
    model: Option<VarietyModel>,
    map: Option<MapDescriptor>,
    analyses: Vec<AnalysisJson>,
}

fn load_request(
    file: Option<&Path>,
    model_flag: Option<&str>,
    map_flag: Option<&str>,
    p: Option<usize>,
    nmax: Option<u32>,
    tol: Option<f64>,
    check: &[String],
) -> Result<Request> {
    let mut model_val: Option<serde_json::Value> = None;
    let mut map_val: Option<serde_json::Value> = None;
    let mut analyses: Vec<AnalysisJson> = Vec::new();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let parsed: RequestJson = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("{}:{}: {e}", path.display(), e.line())))?;
        model_val = parsed.model;
        map_val = parsed.map;
        analyses = parsed.analyses;
    }
    if let Some(m) = model_flag {
        model_val = Some(serde_json::from_str(m).unwrap_or(serde_json::Value::String(m.into())));
    }
    if let Some(m) = map_flag {
        map_val = Some(
            serde_json::from_str(m).map_err(|e| Error::Input(format!("--map: {e}")))?,
        );
    }
    if !check.is_empty() {
        analyses = check
            .iter()
            .map(|kind| AnalysisJson {
                kind: kind.clone(),
                p: None,
                n_max: None,
                tol: None,
            })
            .collect();
    }
    for a in &mut analyses {
        if a.p.is_none() {
            a.p = p;
        }
        if a.n_max.is_none() {
            a.n_max = nmax;
        }
        if a.tol.is_none() {
            a.tol = tol;
        }
    }
    if analyses.is_empty() {
        return Err(Error::Input("no analyses requested".into()));
    }
    for a in &analyses {
        if !KINDS.contains(&a.kind.as_str()) {
            return Err(Error::Input(format!(
                "unknown analysis kind {:?}; expected one of {}",
                a.kind,
                KINDS.join("|")
            )));
        }
    }
    let model = match model_val {
        Some(serde_json::Value::String(s)) => Some(make_model(ModelSpec::parse(&s)?)),
        Some(other) => Some(model_from_json(&other.to_string())),
        None => None,
    }
    .transpose()?;
    let map = map_val
        .map(|v| map_from_json(&v.to_string()))
        .transpose()?;
    for a in &analyses {
        let needs_map = a.kind != "hodge";
        if needs_map && map.is_none() {
            return Err(Error::Input(format!("analysis {:?} needs a map", a.kind)));
        }
        if a.kind == "hodge" && model.is_none() {
            return Err(Error::Input("analysis \"hodge\" needs a model".into()));
        }
    }
    Ok(Request {
        model,
        map,
        analyses,
    })
}

/// Best-available matrix action for spectral analyses of the map.
fn action_for(map: &MapDescriptor) -> Result<MatrixAction> {
    match map {
        MapDescriptor::Matrix(a) => Ok((**a).clone()),
        MapDescriptor::Monomial(f) => {
            let k = f.dim();
            let model = make_model(ModelSpec::ProductP1(k))?;
            let mut matrices = BTreeMap::new();
            matrices.insert(1, f.action_p1k(1)?);
            matrices.insert(k, f.action_p1k(k)?);
            MatrixAction::new(model, matrices, true, BTreeMap::new())
        }
        MapDescriptor::Polynomial(_) => Err(Error::Capability(
            "polynomial maps carry no lattice action; use a monomial map or a matrix action".into(),
        )),
    }
}

fn seq_json(seq: &DegreeSequence) -> serde_json::Value {
    json!({
        "p": seq.p,
        "source": seq.source,
        "values": seq.values.iter().map(format_rational).collect::<Vec<_>>(),
        "roots": seq.values.iter().enumerate()
            .map(|(i, v)| format_decimal(rational_to_f64(v).powf(1.0 / (i + 1) as f64)))
            .collect::<Vec<_>>(),
    })
}

struct Outcome {
    body: serde_json::Value,
    verdicts: Vec<Verdict>,
    sequences: Vec<DegreeSequence>,
}

fn run_analysis(req: &Request, a: &AnalysisJson) -> Result<Outcome> {
    let tol = a.tol.unwrap_or(DEFAULT_BAND);
    let map = req.map.as_ref();
    let mut verdicts = Vec::new();
    let mut sequences = Vec::new();
    let body = match a.kind.as_str() {
        "degrees" => {
            let map = map.unwrap();
            let p = a.p.unwrap_or(1);
            let n_max = a.n_max.unwrap_or_else(|| default_n_max(map));
            let seq = degree_sequence(map, p, n_max)?;
            let v = seq_json(&seq);
            sequences.push(seq);
            v
        }
        "stability" => {
            let map = map.unwrap();
            let p = a.p.unwrap_or(1);
            let n_max = a.n_max.unwrap_or_else(|| default_n_max(map));
            match stability_check(map, p, n_max)? {
                StabilityResult::StableUpTo(n) => json!({"p": p, "stable_up_to": n}),
                StabilityResult::FirstFailure(n) => json!({"p": p, "first_failure": n}),
            }
        }
        "fekete" => {
            let map = map.unwrap();
            let p = a.p.unwrap_or(1);
            let n_max = a.n_max.unwrap_or_else(|| default_n_max(map));
            let seq = degree_sequence(map, p, n_max)?;
            let est = fekete_estimate(&seq)?;
            if !est.violations.is_empty() {
                verdicts.push(Verdict::ConclusionViolated);
            }
            let v = json!({
                "p": p,
                "upper_inf": format_decimal(est.upper_inf),
                "last_root": format_decimal(est.last_root),
                "window_slope": format_decimal(est.window_slope),
                "violations": est.violations,
            });
            sequences.push(seq);
            v
        }
        "theorem1" => {
            let map = map.unwrap();
            let action = action_for(map)?;
            let m1 = action.matrix(1)?.clone();
            let k = action.model.dim;
            let (r2, r2_origin) = match map {
                MapDescriptor::Monomial(f) if k == 2 => (
                    rational_to_f64(&f.action_p1k(2)?[(0, 0)]),
                    "topological degree |det A|",
                ),
                MapDescriptor::Monomial(f) => (
                    spectral_radius_default(&f.exponent_matrix().compound(2)?)?,
                    "compound-matrix oracle for lambda_2",
                ),
                _ => match action.matrix(2) {
                    Ok(m2) => (spectral_radius_default(m2)?, "spectral radius of M_2"),
                    Err(_) => {
                        return Err(Error::Capability(
                            "theorem1 needs a value for lambda_2 (an M_2 matrix)".into(),
                        ))
                    }
                },
            };
            let mut hypotheses = BTreeMap::new();
            match map {
                MapDescriptor::Monomial(_) => {
                    let n_max = a.n_max.unwrap_or(20);
                    match stability_check(map, 1, n_max)? {
                        StabilityResult::StableUpTo(_) => {
                            hypotheses.insert("one_stability".into(), HypothesisStatus::Verified);
                        }
                        StabilityResult::FirstFailure(n) => {
                            hypotheses.insert("one_stability".into(), HypothesisStatus::Failed);
                            verdicts.push(Verdict::NotApplicable);
                            let v = json!({
                                "verdict": Verdict::NotApplicable.to_string(),
                                "details": format!(
                                    "not 1-stable: (f^n)* differs from (f*)^n first at n = {n}"
                                ),
                                "hypotheses": {"one_stability": "failed"},
                            });
                            return Ok(Outcome { body: v, verdicts, sequences });
                        }
                    }
                }
                MapDescriptor::Matrix(ma) => {
                    hypotheses.insert(
                        "one_stability".into(),
                        if ma.asserted_1_stable {
                            HypothesisStatus::Asserted
                        } else {
                            HypothesisStatus::Unchecked
                        },
                    );
                }
                MapDescriptor::Polynomial(_) => unreachable!(),
            }
            let rep = spectral_gap_report(&m1, r2, tol, hypotheses)?;
            verdicts.push(rep.verdict);
            let mut v = rep.to_json();
            v["r2_origin"] = json!(r2_origin);
            v
        }
        "theorem2" => {
            let map = map.unwrap();
            let action = action_for(map)?;
            let m1 = action.matrix(1)?.clone();
            let m2 = action.matrix(2).cloned().map_err(|_| {
                Error::Capability("theorem2 needs the action on N^2 (an M_2 matrix)".into())
            })?;
            let mut cone_ok = true;
            let mut cones = serde_json::Map::new();
            for p in [1usize, 2] {
                match cone_preservation_check(&action, p)? {
                    ConeCheck::Verified => {
                        cones.insert(format!("p{p}"), json!("verified"));
                    }
                    ConeCheck::Failed { generator } => {
                        cone_ok = false;
                        cones.insert(
                            format!("p{p}"),
                            json!({
                                "failed_generator":
                                    generator.coords.iter().map(format_rational).collect::<Vec<_>>()
                            }),
                        );
                    }
                }
            }
            let rep = r1_squared_vs_r2(&m1, &m2, cone_ok, tol)?;
            verdicts.push(rep.verdict);
            if !cone_ok {
                verdicts.push(Verdict::NotApplicable);
            }
            let mut v = rep.to_json();
            v["cone_checks"] = serde_json::Value::Object(cones);
            v
        }
        "duality" => {
            let f = match map.unwrap() {
                MapDescriptor::Monomial(f) => f,
                _ => {
                    return Err(Error::Capability(
                        "duality checks apply to monomial maps of threefolds".into(),
                    ))
                }
            };
            let rep = threefold_duality_check(f, if a.tol.is_some() { tol } else { 1e-5 })?;
            verdicts.push(rep.verdict);
            rep.to_json()
        }
        "hodge" => {
            let model = req.model.as_ref().unwrap();
            let sig = model.hodge_signature(&model.ample_class())?;
            let rho = model.ranks[1];
            let ok = sig == (1, rho - 1, 0);
            verdicts.push(if ok { Verdict::Pass } else { Verdict::ConclusionViolated });
            json!({
                "model": model.name,
                "signature": [sig.0, sig.1, sig.2],
                "expected": [1, rho - 1, 0],
                "verdict": if ok { "PASS" } else { "CONCLUSION_VIOLATED" },
            })
        }
        "cone" => {
            let action = action_for(map.unwrap())?;
            let mut body = serde_json::Map::new();
            for (&p, _) in &action.matrices {
                match cone_preservation_check(&action, p)? {
                    ConeCheck::Verified => {
                        body.insert(format!("p{p}"), json!("verified"));
                    }
                    ConeCheck::Failed { generator } => {
                        verdicts.push(Verdict::ConclusionViolated);
                        body.insert(
                            format!("p{p}"),
                            json!({
                                "failed_generator":
                                    generator.coords.iter().map(format_rational).collect::<Vec<_>>()
                            }),
                        );
                    }
                }
            }
            serde_json::Value::Object(body)
        }
        "inequalities" => {
            let map = map.unwrap();
            let n_max = a.n_max.unwrap_or_else(|| default_n_max(map));
            let rep = degree_inequalities(map, n_max, tol)?;
            if !rep.all_hold {
                verdicts.push(Verdict::ConclusionViolated);
            }
            json!({
                "checks": rep.checks.iter().map(|c| json!({
                    "p": c.p,
                    "lambda_1": format_decimal(c.lambda_1),
                    "lambda_p": format_decimal(c.lambda_p),
                    "lambda_p_plus_1": format_decimal(c.lambda_p1),
                    "holds": c.holds,
                })).collect::<Vec<_>>(),
                "class_inequality": rep.class_inequality,
                "all_hold": rep.all_hold,
            })
        }
        "conjugation" => {
            let (f, g) = match map.unwrap() {
                MapDescriptor::Polynomial(f) => {
                    // conjugate by a fixed generic linear map unless the user
                    // supplies their own pair elsewhere
                    let g = degspec::maps::PolyMap::linear(&[
                        vec![1, 1, 0],
                        vec![0, 1, 1],
                        vec![1, 0, 1],
                    ])?;
                    (f.clone(), g)
                }
                _ => {
                    return Err(Error::Capability(
                        "conjugation checks apply to polynomial maps".into(),
                    ))
                }
            };
            let n_max = a.n_max.unwrap_or(8);
            let rep = conjugation_invariance_check(&f, &g, n_max)?;
            if !rep.pass {
                verdicts.push(Verdict::ConclusionViolated);
            }
            json!({
                "slope_original": format_decimal(rep.slope_original),
                "slope_conjugated": format_decimal(rep.slope_conjugated),
                "relative_disagreement": format_decimal(rep.relative_disagreement),
                "pass": rep.pass,
            })
        }
        other => return Err(Error::Input(format!("unknown analysis kind {other:?}"))),
    };
    Ok(Outcome {
        body,
        verdicts,
        sequences,
    })
}

fn csv_path(base: &Path, index: usize) -> PathBuf {
    if index == 0 {
        base.to_path_buf()
    } else {
        let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("sequence");
        let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
        base.with_file_name(format!("{stem}.{}.{ext}", index + 1))
    }
}

fn run(req: &Request, out: Option<&Path>, csv: Option<&Path>) -> Result<ExitCode> {
    let mut results = Vec::new();
    let mut all_verdicts = Vec::new();
    let mut all_sequences = Vec::new();
    for a in &req.analyses {
        let outcome = run_analysis(req, a)?;
        results.push(json!({"kind": a.kind, "result": outcome.body}));
        all_verdicts.extend(outcome.verdicts);
        all_sequences.extend(outcome.sequences);
    }
    let report = json!({"analyses": results});
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    if let Some(base) = csv {
        for (i, seq) in all_sequences.iter().enumerate() {
            let path = csv_path(base, i);
            std::fs::write(&path, seq.to_csv())
                .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        }
    }
    if all_verdicts.contains(&Verdict::ConclusionViolated) {
        Ok(ExitCode::from(2))
    } else if all_verdicts.contains(&Verdict::Indeterminate) {
        Ok(ExitCode::from(3))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn list_models() {
    let specs = [
        ("P2", "projective plane"),
        ("P3", "projective 3-space"),
        ("P4", "projective 4-space"),
        ("(P1)^2", "product of two lines"),
        ("(P1)^3", "product of three lines"),
        ("(P1)^4", "product of four lines"),
        ("BlP2(1)", "plane blown up in 1 point"),
        ("BlP2(2)", "plane blown up in 2 points"),
        ("BlP2(3)", "plane blown up in 3 points"),
        ("BlP3pt", "3-space blown up in a point"),
        ("BlP3line", "3-space blown up along a line"),
    ];
    for (name, desc) in specs {
        let model = make_model(ModelSpec::parse(name).expect("builtin parses"))
            .expect("builtin validates");
        let ranks: Vec<String> = model.ranks.iter().map(|r| r.to_string()).collect();
        println!("{name:10} dim {}  ranks [{}]  {desc}", model.dim, ranks.join(","));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            request,
            model,
            map,
            p,
            nmax,
            tol,
            out,
            csv,
            check,
        } => load_request(
            request.as_deref(),
            model.as_deref(),
            map.as_deref(),
            p,
            nmax,
            tol,
            &check,
        )
        .and_then(|req| run(&req, out.as_deref(), csv.as_deref())),
        Command::Models => {
            list_models();
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { request } => {
            match load_request(Some(&request), None, None, None, None, None, &[]) {
                Ok(_) => {
                    println!("ok: {}", request.display());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e),
            }
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
