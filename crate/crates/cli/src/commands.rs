use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use jordan2::classify::{explain, explain_error, ClassifyDiagnostics};
use jordan2::effects::{check_seq, explain_seq, SeqDiagnostics};
use jordan2::linearize::check_jte_with_tol;
use jordan2::proofcheck::{run_identity_suite, IdentityReport};
use jordan2::{
    classify_jte_with, classify_seq_with, Branch, ClassifyOptions, Effect2, JteKind, Mat2, Pd2,
    SeqKind, Tolerances,
};
use serde_json::{json, Value};

use crate::args::{Cli, Command, GenForm, TolArgs};
use crate::output::{num, to_json};
use crate::spec::{matrix_input, parse_matrix, FormSpec, Input, MatrixJson, Model};
use crate::{CliError, EXIT_OK, EXIT_VIOLATION};

/// Lookup for environment variables, injectable for tests.
pub type Env<'a> = dyn Fn(&str) -> Option<String> + 'a;

pub fn dispatch(cli: &Cli, env: &Env, out: &mut dyn Write) -> Result<i32, CliError> {
    let tol = tolerances(&cli.tol, env)?;
    let text = match &cli.command {
        Command::Classify { input, json, seed } => {
            classify(&load_model(input, &tol)?, &tol, *seed, *json)?
        }
        Command::Verify {
            input,
            trials,
            corrupt,
            json,
            seed,
        } => {
            let (code, text) = verify(
                &load_model(input, &tol)?,
                &tol,
                *trials,
                *corrupt,
                *seed,
                *json,
            )?;
            write_out(out, &text)?;
            return Ok(code);
        }
        Command::Identities { trials, json, seed } => {
            let report = run_identity_suite(*trials, *seed).map_err(CliError::from_core)?;
            let text = if *json {
                identities_json(&report)
            } else {
                identities_text(&report)
            };
            write_out(out, &text)?;
            return Ok(if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            });
        }
        Command::Gen { form, seed } => to_json(&generate(*form, *seed)),
        Command::Apply { input, matrix } => {
            let model = load_model(input, &tol)?;
            let m = parse_matrix(&read(matrix)?)?;
            to_json(&apply(&model, &m, &tol)?)
        }
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::domain(format!("cannot write output: {e}")))
}

/// Defaults, overridden by `JT_TOL_*`, overridden by flags.
pub fn tolerances(flags: &TolArgs, env: &Env) -> Result<Tolerances, CliError> {
    let pick = |flag: Option<f64>, var: &str, default: f64| -> Result<f64, CliError> {
        if let Some(x) = flag {
            return Ok(x);
        }
        match env(var) {
            Some(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::domain(format!("{var} is not a number: {s:?}"))),
            None => Ok(default),
        }
    };
    let d = Tolerances::DEFAULT;
    let tol = Tolerances {
        class: pick(flags.tol_class, "JT_TOL_CLASS", d.class)?,
        eq: pick(flags.tol_eq, "JT_TOL_EQ", d.eq)?,
        ..d
    };
    tol.validate().map_err(CliError::from_core)?;
    Ok(tol)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn load_model(path: &Path, tol: &Tolerances) -> Result<Model, CliError> {
    FormSpec::parse(&read(path)?)?.to_model(tol)
}

fn cone_map(forms: &[jordan2::JteForm], corrupt: bool) -> impl Fn(&Pd2) -> Mat2 + '_ {
    move |a| {
        let m = *Model::eval_jte(forms, a).mat();
        if corrupt {
            m * m
        } else {
            m
        }
    }
}

fn effect_map(forms: &[jordan2::SeqForm], corrupt: bool) -> impl Fn(&Effect2) -> Mat2 + '_ {
    move |a| {
        let m = *Model::eval_seq(forms, a).mat();
        if corrupt {
            m * m
        } else {
            m
        }
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::NonScalar => "non_scalar",
        Branch::DegenerateBlock => "degenerate_block",
        Branch::DetPositive => "det_positive",
        Branch::DetNegative => "det_negative",
    }
}

fn jte_family(k: JteKind) -> &'static str {
    match k {
        JteKind::B1 => "B1",
        JteKind::B2 => "B2",
        JteKind::B3 => "B3",
    }
}

fn seq_family(k: SeqKind) -> &'static str {
    match k {
        SeqKind::Zero => "Zero",
        SeqKind::D1 => "D1",
        SeqKind::D2 => "D2",
        SeqKind::D3 => "D3",
        SeqKind::D4 => "D4",
        SeqKind::RankOneImage => "RankOneImage",
    }
}

fn jte_diagnostics(d: &ClassifyDiagnostics) -> Value {
    json!({
        "branch": branch_name(d.branch),
        "v": d.v,
        "f_identity_eigenvalues": [d.f_identity_eigenvalues.0, d.f_identity_eigenvalues.1],
        "m": d.m,
        "p": d.p,
        "det_m_sign": d.det_m_sign,
        "consistency": d.consistency,
        "jte_residual": d.jte_residual,
        "linearity_residual": d.linearity_residual,
        "residual": d.residual,
        "f": d.f.0,
    })
}

fn seq_diagnostics(d: &SeqDiagnostics) -> Value {
    json!({
        "seq_residual": d.seq_residual,
        "projection_defect": d.projection_defect,
        "rank": d.rank,
        "boundary_residual": d.boundary_residual,
        "residual": d.residual,
        "cone": d.jte.as_ref().map(|r| json!({
            "family": jte_family(r.form.kind()),
            "diagnostics": jte_diagnostics(&r.diagnostics),
        })),
    })
}

fn rejected(err: jordan2::Error) -> CliError {
    let mut e = CliError::from_core(err.clone());
    if e.code == EXIT_VIOLATION {
        e.message = explain_error(&err);
    }
    e
}

fn unitary_text(m: &Mat2) -> String {
    let (re, im) = (m.re(), m.im());
    let mut s = String::new();
    for i in 0..2 {
        let row: Vec<String> = (0..2)
            .map(|j| format!("({}, {})", num(re[i][j]), num(im[i][j])))
            .collect();
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    s
}

pub fn classify(
    model: &Model,
    tol: &Tolerances,
    seed: u64,
    as_json: bool,
) -> Result<String, CliError> {
    let opts = ClassifyOptions {
        seed,
        ..ClassifyOptions::with_tol(*tol)
    };
    match model {
        Model::Jte(forms) => {
            let r = classify_jte_with(&cone_map(forms, false), &opts).map_err(rejected)?;
            let family = jte_family(r.form.kind());
            if as_json {
                return Ok(to_json(&json!({
                    "kind": "jte",
                    "family": family,
                    "form": FormSpec::from_jte(&r.form),
                    "branch": branch_name(r.diagnostics.branch),
                    "diagnostics": jte_diagnostics(&r.diagnostics),
                })));
            }
            let mut s = format!("family: {family}\n");
            s.push_str(&explain(&r));
            s.push_str("unitary:\n");
            s.push_str(&unitary_text(r.form.unitary().mat()));
            Ok(s)
        }
        Model::Seq(forms) => {
            let r = classify_seq_with(&effect_map(forms, false), &opts).map_err(rejected)?;
            let family = seq_family(r.form.kind());
            if as_json {
                return Ok(to_json(&json!({
                    "kind": "seq",
                    "family": family,
                    "form": FormSpec::from_seq(&r.form),
                    "branch": r.diagnostics.jte.as_ref().map(|j| branch_name(j.diagnostics.branch)),
                    "diagnostics": seq_diagnostics(&r.diagnostics),
                })));
            }
            let mut s = format!("family: {family}\n");
            s.push_str(&explain_seq(&r));
            s.push_str(&format!("parameters: {}\n", seq_params(&r.form)));
            Ok(s)
        }
    }
}

fn seq_params(form: &jordan2::SeqForm) -> String {
    use jordan2::SeqForm::*;
    match *form {
        Zero | D2 { .. } => "none".into(),
        D1 { c, .. } | RankOneImage { c, .. } => format!("c = {}", num(c)),
        D3 { d, .. } => format!("d = {}", num(d)),
        D4 { c1, c2, .. } => format!("c1 = {}, c2 = {}", num(c1), num(c2)),
    }
}

/// Returns the exit code along with the report.
pub fn verify(
    model: &Model,
    tol: &Tolerances,
    trials: usize,
    corrupt: bool,
    seed: u64,
    as_json: bool,
) -> Result<(i32, String), CliError> {
    let mut rng = jordan2::sample::rng_from_seed(seed);
    let (law, residual) = match model {
        Model::Jte(forms) => (
            "jordan_triple",
            check_jte_with_tol(&cone_map(forms, corrupt), trials, &mut rng, tol),
        ),
        Model::Seq(forms) => (
            "sequential",
            check_seq(&effect_map(forms, corrupt), trials, &mut rng, tol),
        ),
    };
    let residual = residual.map_err(CliError::from_core)?;
    let pass = residual <= tol.class;
    let text = if as_json {
        to_json(&json!({
            "law": law,
            "trials": trials,
            "residual": residual,
            "threshold": tol.class,
            "pass": pass,
        }))
    } else {
        format!(
            "{law}: max relative residual {} over {trials} pairs (threshold {}) {}\n",
            num(residual),
            num(tol.class),
            if pass { "PASS" } else { "FAIL" }
        )
    };
    Ok((if pass { EXIT_OK } else { EXIT_VIOLATION }, text))
}

fn identities_text(r: &IdentityReport) -> String {
    let mut s = format!("gh_det = {}\n", num(r.gh_det));
    let _ = writeln!(s, "trials = {}, seed = {}", r.trials, r.seed);
    for e in &r.entries {
        let verdict = match (e.pass, e.informational) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (true, true) => "pass (informational)",
            (false, true) => "fail (informational)",
        };
        let _ = write!(
            s,
            "{}: value {} residual {} threshold {} {verdict}",
            e.name,
            num(e.value),
            num(e.residual),
            num(e.threshold)
        );
        if !e.note.is_empty() {
            let _ = write!(s, " ({})", e.note);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "overall: {}", if r.all_pass() { "PASS" } else { "FAIL" });
    s
}

fn identities_json(r: &IdentityReport) -> String {
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "value": e.value,
                "residual": e.residual,
                "threshold": e.threshold,
                "pass": e.pass,
                "informational": e.informational,
                "note": e.note,
            })
        })
        .collect();
    to_json(&json!({
        "trials": r.trials,
        "seed": r.seed,
        "gh_det": r.gh_det,
        "all_pass": r.all_pass(),
        "identities": entries,
    }))
}

pub fn generate(form: GenForm, seed: u64) -> FormSpec {
    use jordan2::sample::{jte_form, rng_from_seed, seq_form};
    let mut rng = rng_from_seed(seed);
    match form {
        GenForm::B1 => FormSpec::from_jte(&jte_form(&mut rng, JteKind::B1)),
        GenForm::B2 => FormSpec::from_jte(&jte_form(&mut rng, JteKind::B2)),
        GenForm::B3 => FormSpec::from_jte(&jte_form(&mut rng, JteKind::B3)),
        GenForm::Zero => FormSpec::from_seq(&seq_form(&mut rng, SeqKind::Zero)),
        GenForm::D1 => FormSpec::from_seq(&seq_form(&mut rng, SeqKind::D1)),
        GenForm::D2 => FormSpec::from_seq(&seq_form(&mut rng, SeqKind::D2)),
        GenForm::D3 => FormSpec::from_seq(&seq_form(&mut rng, SeqKind::D3)),
        GenForm::D4 => FormSpec::from_seq(&seq_form(&mut rng, SeqKind::D4)),
        GenForm::Rank1 => FormSpec::from_seq(&seq_form(&mut rng, SeqKind::RankOneImage)),
    }
}

pub fn apply(model: &Model, m: &MatrixJson, tol: &Tolerances) -> Result<MatrixJson, CliError> {
    let out = match (model, matrix_input(m, model, tol)?) {
        (Model::Jte(forms), Input::Cone(a)) => *Model::eval_jte(forms, &a).mat(),
        (Model::Seq(forms), Input::Effect(a)) => *Model::eval_seq(forms, &a).mat(),
        _ => unreachable!("matrix_input follows the model kind"),
    };
    Ok(MatrixJson::from(&out))
}
