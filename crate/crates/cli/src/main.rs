//! `nangle`: JSON lines on stdout, one per check, then a summary object; a
//! short human summary on stderr.
//!
//! Exit codes: 0 pass, 1 check failure, 2 budget exhausted, 3 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use nangle_core::algcore::{build_algebra, nakayama_permutation, parse_presentation};
use nangle_core::angulation::heller::heller_orbit_check;
use nangle_core::angulation::{verify_axioms, FunctorCategory, Mor, Status};
use nangle_core::standardcons::{calabi_yau_report, load_scenario, Scenario};
use nangle_core::Error;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const BUDGET: u8 = 2;
const INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "nangle", version, about = "Exact computations with n-angulated categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect an algebra presentation.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Check (F1)-(F4) and exactness on sampled members.
    Verify {
        scenario: PathBuf,
        /// Comma-separated subset of F1a,F1b,F1c,F2,F3,F4,exactness.
        #[arg(long, value_delimiter = ',')]
        axioms: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Order of the suspension on the summands of T.
    SuspensionOrder { scenario: PathBuf },
    /// Calabi-Yau dimension of the stable category of E.
    Cy { scenario: PathBuf },
    /// Heller parametrization check by exhaustive enumeration.
    Heller { scenario: PathBuf },
    /// Rigidity, stability and witness orthogonality of T.
    ClusterTilting { scenario: PathBuf },
    /// Build angles by the standard construction.
    Angle {
        #[command(subcommand)]
        command: AngleCommand,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    Info {
        file: PathBuf,
        /// Replace the field of the presentation.
        #[arg(long)]
        field: Option<u32>,
    },
}

#[derive(Subcommand)]
enum AngleCommand {
    Construct {
        scenario: PathBuf,
        /// First map as JSON `{"source": [..], "target": [..], "blocks": ..}`,
        /// or `@file`.
        #[arg(long)]
        from: String,
    },
}

/// Outcome of a command: JSON lines, a summary and an exit code.
struct Outcome {
    lines: Vec<Value>,
    summary: Value,
    human: String,
    code: u8,
}

fn input_error(e: Error) -> Outcome {
    fail_with(INPUT, e.to_string())
}

fn fail_with(code: u8, message: String) -> Outcome {
    Outcome {
        lines: Vec::new(),
        summary: json!({ "error": message }),
        human: format!("error: {message}"),
        code,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let out = match cli.command {
        Command::Algebra {
            command: AlgebraCommand::Info { file, field },
        } => algebra_info(&file, field),
        Command::Verify { scenario, axioms, seed } => verify(&scenario, axioms, seed),
        Command::SuspensionOrder { scenario } => suspension_order(&scenario),
        Command::Cy { scenario } => cy(&scenario),
        Command::Heller { scenario } => heller(&scenario),
        Command::ClusterTilting { scenario } => cluster_tilting(&scenario),
        Command::Angle {
            command: AngleCommand::Construct { scenario, from },
        } => construct(&scenario, &from),
    };
    for line in &out.lines {
        println!("{line}");
    }
    let mut summary = out.summary;
    if let Value::Object(map) = &mut summary {
        map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        map.insert("exit_code".into(), out.code.into());
        map.insert("elapsed_ms".into(), (start.elapsed().as_millis() as u64).into());
    }
    println!("{summary}");
    eprintln!("{}", out.human);
    ExitCode::from(out.code)
}

fn algebra_info(file: &Path, field: Option<u32>) -> Outcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return input_error(e.into()),
    };
    let text = match field {
        None => text,
        Some(p) => match serde_json::from_str::<Value>(&text) {
            Ok(mut v) => {
                v["field"] = p.into();
                v.to_string()
            }
            Err(e) => return input_error(e.into()),
        },
    };
    let mut pres = match parse_presentation(&text) {
        Ok(p) => p,
        Err(e) => return input_error(e),
    };
    let alg = match build_algebra(&pres) {
        Ok(a) => Arc::new(a),
        Err(e) => return input_error(e),
    };
    // A potential's closure must not grow when the degree bound does.
    pres.degree_bound += 1;
    let stable = build_algebra(&pres).map(|b| b.dim() == alg.dim()).unwrap_or(false);
    let mut by_degree: Vec<usize> = Vec::new();
    for b in &alg.basis {
        let deg = b.word.len();
        if by_degree.len() <= deg {
            by_degree.resize(deg + 1, 0);
        }
        by_degree[deg] += 1;
    }
    let nakayama = nakayama_permutation(&alg).ok();
    let projective_dims: Vec<Vec<usize>> = alg.cartan_matrix();
    let report = json!({
        "check": "algebra-info",
        "file": file.display().to_string(),
        "field": alg.field.p(),
        "vertices": alg.vertex_labels,
        "dim": alg.dim(),
        "basis_by_degree": by_degree,
        "stable_under_larger_bound": stable,
        "selfinjective": nakayama.is_some(),
        "nakayama": nakayama,
        "projective_dims": projective_dims,
        "gabriel_quiver": alg.gabriel_quiver(),
    });
    let human = format!(
        "{}: dim {}, self-injective: {}, nakayama {:?}",
        file.display(),
        alg.dim(),
        nakayama.is_some(),
        nakayama
    );
    Outcome {
        lines: vec![report],
        summary: json!({ "command": "algebra-info", "passed": true }),
        human,
        code: PASS,
    }
}

fn load(path: &Path) -> Result<Scenario, Outcome> {
    load_scenario(path).map_err(input_error)
}

fn verify(path: &Path, axioms: Option<Vec<String>>, seed: Option<u64>) -> Outcome {
    let sc = match load(path) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let mut budget = sc.budget().clone();
    if let Some(s) = seed {
        budget.seed = s;
    }
    let oracle = match sc.oracle() {
        Ok(o) => o,
        Err(e) => return fail_with(FAIL, format!("{}: no oracle: {e}", sc.name())),
    };
    let reports = match verify_axioms(&oracle, &budget, sc.faults(), axioms.as_deref()) {
        Ok(r) => r,
        Err(e) => return fail_with(FAIL, format!("{}: {e}", sc.name())),
    };
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.axiom.as_str())
        .collect();
    let short: Vec<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Budget)
        .map(|r| r.axiom.as_str())
        .collect();
    let code = if !failed.is_empty() {
        FAIL
    } else if !short.is_empty() {
        BUDGET
    } else {
        PASS
    };
    let lines = reports
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("serializable");
            v["check"] = "axiom".into();
            v
        })
        .collect();
    let human = reports
        .iter()
        .map(|r| format!("{:<10} {:?} ({} samples)", r.axiom, r.status, r.samples))
        .collect::<Vec<_>>()
        .join("\n");
    Outcome {
        lines,
        summary: json!({
            "command": "verify",
            "scenario": sc.name(),
            "seed": budget.seed,
            "faults": sc.faults(),
            "failed": failed,
            "budget_exhausted": short,
            "passed": code == PASS,
        }),
        human: format!("{}\n{human}", sc.name()),
        code,
    }
}

/// Compares a computed value with the scenario's expectation, if any.
fn expectation(found: Option<usize>, expected: Option<usize>) -> (bool, Value) {
    let matches = expected.is_none_or(|e| found == Some(e));
    (matches, json!({ "found": found, "expected": expected, "matches": matches }))
}

fn suspension_order(path: &Path) -> Outcome {
    let sc = match load(path) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let Scenario::Standard { ctd, .. } = &sc else {
        return fail_with(INPUT, "suspension-order needs a scenario with summands".into());
    };
    let order = ctd.suspension_order();
    let (matches, cmp) = expectation(order, sc.expected().suspension_order);
    let passed = order.is_some() && matches;
    Outcome {
        lines: vec![json!({
            "check": "suspension-order",
            "permutation": ctd.perm,
            "order": cmp,
        })],
        summary: json!({ "command": "suspension-order", "scenario": sc.name(), "passed": passed }),
        human: format!("{}: suspension order {:?}", sc.name(), order),
        code: if passed { PASS } else { FAIL },
    }
}

fn cy(path: &Path) -> Outcome {
    let sc = match load(path) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let Scenario::Standard { ctd, spec, .. } = &sc else {
        return fail_with(INPUT, "cy needs a scenario with summands".into());
    };
    let report = match calabi_yau_report(ctd, spec.reps_cap) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                lines: vec![json!({ "check": "calabi-yau", "error": e.to_string() })],
                summary: json!({ "command": "cy", "scenario": sc.name(), "passed": false }),
                human: format!("{}: {e}", sc.name()),
                code: FAIL,
            }
        }
    };
    let (matches, cmp) = expectation(report.cy_dimension, sc.expected().cy_dimension);
    let passed = report.passed && matches;
    let mut line = serde_json::to_value(&report).expect("serializable");
    line["check"] = "calabi-yau".into();
    line["expected"] = cmp;
    Outcome {
        lines: vec![line],
        summary: json!({ "command": "cy", "scenario": sc.name(), "passed": passed }),
        human: format!(
            "{}: {}-Calabi-Yau {:?}, {} modules checked, {} mismatches{}",
            sc.name(),
            report.n,
            report.cy_dimension,
            report.modules_checked,
            report.mismatches.len(),
            if report.degenerate { " (degenerate)" } else { "" }
        ),
        code: if passed { PASS } else { FAIL },
    }
}

fn heller(path: &Path) -> Outcome {
    let sc = match load(path) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let Scenario::Heller { spec, cat } = &sc else {
        return fail_with(INPUT, "heller needs a heller scenario".into());
    };
    let run = || -> nangle_core::Result<_> {
        let fc = FunctorCategory::new(cat.clone())?;
        let (reps, _) = fc.frob.nonprojective_closure(spec.reps_cap)?;
        heller_orbit_check(&fc, &reps, spec.n, spec.max_rank)
    };
    let report = match run() {
        Ok(r) => r,
        Err(e) => return fail_with(FAIL, format!("{}: {e}", sc.name())),
    };
    let (matches, cmp) = expectation(Some(report.valid_thetas), spec.expected.valid_thetas);
    let passed = report.passed() && matches;
    let mut line = serde_json::to_value(&report).expect("serializable");
    line["check"] = "heller".into();
    line["expected_valid_thetas"] = cmp;
    Outcome {
        lines: vec![line],
        summary: json!({ "command": "heller", "scenario": sc.name(), "passed": passed }),
        human: format!(
            "{}: {} sequences, {} valid Theta, classes {:?}, free {}, transitive {}",
            sc.name(),
            report.sequences,
            report.valid_thetas,
            report.class_sizes,
            report.action_free,
            report.action_transitive
        ),
        code: if passed { PASS } else { FAIL },
    }
}

fn cluster_tilting(path: &Path) -> Outcome {
    let sc = match load(path) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let Scenario::Standard { ctd, witnesses, .. } = &sc else {
        return fail_with(INPUT, "cluster-tilting needs a scenario with summands".into());
    };
    let report = match ctd.check_cluster_tilting(witnesses) {
        Ok(r) => r,
        Err(e) => return fail_with(FAIL, format!("{}: {e}", sc.name())),
    };
    let mut line = serde_json::to_value(&report).expect("serializable");
    line["check"] = "cluster-tilting".into();
    Outcome {
        lines: vec![line],
        summary: json!({ "command": "cluster-tilting", "scenario": sc.name(), "passed": report.passed }),
        human: format!(
            "{}: rigid {}, stable {}, {} witnesses",
            sc.name(),
            report.rigid,
            report.stable,
            report.witnesses.len()
        ),
        code: if report.passed { PASS } else { FAIL },
    }
}

fn construct(path: &Path, from: &str) -> Outcome {
    let sc = match load(path) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let Scenario::Standard { ctd, .. } = &sc else {
        return fail_with(INPUT, "angle construct needs a scenario with summands".into());
    };
    let text = match from.strip_prefix('@') {
        Some(file) => match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => return input_error(e.into()),
        },
        None => from.to_string(),
    };
    let alpha: Mor = match serde_json::from_str(&text) {
        Ok(m) => m,
        Err(e) => return input_error(e.into()),
    };
    let cat = match ctd.category() {
        Ok(c) => c,
        Err(e) => return fail_with(FAIL, e.to_string()),
    };
    if alpha.source.iter().chain(&alpha.target).any(|&a| a >= cat.num_objects())
        || alpha != Mor::from_flat(&cat, &alpha.source, &alpha.target, &alpha.flatten())
    {
        return fail_with(INPUT, "map does not fit the summands of T".into());
    }
    let angle = match ctd.construct_angle(&alpha) {
        Ok(a) => a,
        Err(e) => return fail_with(FAIL, e.to_string()),
    };
    let exact = angle.sequence.is_exact(&cat);
    let vanishing = ctd.check_tower_vanishing(&angle.tower);
    let halves: Vec<&Vec<usize>> = angle.tower.halves.iter().map(|m| &m.dims).collect();
    let passed = exact && vanishing.is_empty();
    Outcome {
        lines: vec![json!({
            "check": "construct-angle",
            "sequence": angle.sequence,
            "half_dims": halves,
            "exact": exact,
            "vanishing_failures": vanishing,
        })],
        summary: json!({ "command": "angle-construct", "scenario": sc.name(), "passed": passed }),
        human: format!("{}: objects {:?}, exact {exact}", sc.name(), angle.sequence.objects),
        code: if passed { PASS } else { FAIL },
    }
}
