//! `enriques-nd`: verify isotropic-sequence certificates, compute cnd over a
//! curve set, expand curve orbits and replay the case-145 exclusion proof.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use enriques_nd::action::{expand_orbit, GeneratorSet};
use enriques_nd::certificates::{
    verify_certificate, verify_corpus, CaseStatus, Certificate, CertificateReport,
};
use enriques_nd::curves::CurveSystem;
use enriques_nd::data_io::{load_case, load_certificates, load_snapshot};
use enriques_nd::half_fibers::build_hf_set;
use enriques_nd::proof::{exclusion_proof, ProofError, ProofReport, Representatives};
use enriques_nd::solver::{compute_cnd, SequenceReport};
use enriques_nd::{bundled, notation, EnumerateOptions};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "enriques-nd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check certificates: integrality, configuration types and products.
    Verify(RunArgs),
    /// Longest isotropic sequence of half-fibers supported on a curve set.
    Cnd(RunArgs),
    /// Replay the argument bounding case 145 by four.
    #[command(name = "case145-proof")]
    Case145Proof(RunArgs),
    /// Expand a curve set by the generator action and list it.
    Orbit(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Case snapshot file, a directory of `<id>.json` snapshots, or the id of
    /// a bundled case.
    #[arg(long)]
    case: Option<String>,
    /// Certificate file. Defaults to the bundled certificates.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Orbit expansion radius.
    #[arg(long, default_value_t = 0)]
    radius: usize,
    /// Largest configuration support to search.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u8).range(2..=10))]
    max_support: u8,
    /// Disable inertia pruning in the configuration search.
    #[arg(long)]
    no_prune: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Result of a run that got as far as checking a claim.
enum Outcome {
    Ok,
    ClaimFailed,
}

enum CaseSource {
    File(PathBuf),
    Dir(PathBuf),
    Bundled(u32),
}

fn case_source(arg: Option<&str>, default: Option<u32>) -> Result<CaseSource> {
    let Some(arg) = arg else {
        return match default {
            Some(id) => Ok(CaseSource::Bundled(id)),
            None => bail!("--case is required"),
        };
    };
    let path = Path::new(arg);
    if path.is_dir() {
        return Ok(CaseSource::Dir(path.into()));
    }
    if !path.exists() {
        if let Ok(id) = arg.parse::<u32>() {
            if bundled::case_json(id).is_some() {
                return Ok(CaseSource::Bundled(id));
            }
        }
    }
    Ok(CaseSource::File(path.into()))
}

fn load(src: &CaseSource) -> Result<(u32, CurveSystem, GeneratorSet)> {
    match src {
        CaseSource::Bundled(id) => {
            let (s, g) = bundled::case(*id).expect("checked bundled id");
            Ok((*id, s, g))
        }
        CaseSource::File(p) => {
            let id = load_snapshot(p)?.case_id;
            let (s, g) = load_case(p)?;
            Ok((id, s, g))
        }
        CaseSource::Dir(p) => bail!(
            "{} is a directory; this command needs one case file",
            p.display()
        ),
    }
}

fn options(args: &RunArgs) -> EnumerateOptions {
    EnumerateOptions {
        max_support: args.max_support as usize,
        prune: !args.no_prune,
    }
}

fn emit(format: Format, text: String, mut doc: Value) {
    let out = match format {
        Format::Text => text,
        Format::Json => {
            doc["schema_version"] = json!(SCHEMA_VERSION);
            serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
        }
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

/// Error chain, stopping once a message already ends with its cause.
fn describe(e: &anyhow::Error) -> String {
    let msgs: Vec<String> = e.chain().map(|c| c.to_string()).collect();
    let keep = msgs
        .windows(2)
        .position(|w| w[0].ends_with(w[1].as_str()))
        .map_or(msgs.len(), |i| i + 1);
    msgs[..keep].join(": ")
}

fn matrix_text(seq: &SequenceReport) -> String {
    let mut out = String::new();
    for row in &seq.products {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        out.push_str(&format!("  {}\n", cells.join("")));
    }
    out
}

fn matrix_json(seq: &SequenceReport) -> Value {
    json!(seq
        .products
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn report_text(r: &CertificateReport) -> String {
    let n = r.entries.len();
    let mut out = format!("case {}: claimed length {}\n", r.case_id, r.claimed_bound);
    for (i, e) in r.entries.iter().enumerate() {
        let what = match &e.configuration {
            Ok(_) => e.type_label().unwrap_or_default(),
            Err(err) => format!("not a configuration: {err}"),
        };
        let mut flags = Vec::new();
        if !e.integral {
            flags.push("not integral");
        }
        if e.integral && !e.indivisible {
            flags.push("2-divisible");
        }
        let flags = if flags.is_empty() {
            String::new()
        } else {
            format!(" [{}]", flags.join(", "))
        };
        out.push_str(&format!(
            "  F{} = {}  {}{}\n",
            i + 1,
            e.notation,
            what,
            flags
        ));
    }
    out.push_str("products:\n");
    out.push_str(&matrix_text(&r.sequence));
    out.push_str(&format!(
        "F G F^T {} 1_{n} - I_{n}\n",
        if r.sequence.products_ok { "=" } else { "!=" }
    ));
    if !r.length_matches {
        out.push_str(&format!("length {} does not match the claim\n", n));
    }
    out.push_str(&format!("{}\n", if r.passed() { "PASS" } else { "FAIL" }));
    out
}

fn report_json(r: &CertificateReport) -> Value {
    json!({
        "case_id": r.case_id,
        "claimed_bound": r.claimed_bound,
        "passed": r.passed(),
        "length_matches": r.length_matches,
        "products_ok": r.sequence.products_ok,
        "products": matrix_json(&r.sequence),
        "entries": r.entries.iter().map(|e| json!({
            "notation": e.notation,
            "type": e.type_label(),
            "error": e.configuration.as_ref().err().map(|x| x.to_string()),
            "integral": e.integral,
            "indivisible": e.indivisible,
        })).collect::<Vec<_>>(),
    })
}

fn certificates_for(cert: Option<&Path>) -> Result<Vec<Certificate>> {
    Ok(match cert {
        Some(p) => load_certificates(p)?,
        None => bundled::corpus(),
    })
}

fn cmd_verify(args: &RunArgs) -> Result<Outcome> {
    let src = case_source(args.case.as_deref(), None)?;
    let certs = certificates_for(args.cert.as_deref())?;
    if let CaseSource::Dir(dir) = &src {
        let summary = verify_corpus(&certs, |id| {
            let p = dir.join(format!("{id}.json"));
            p.exists().then(|| load_case(&p))
        });
        let mut text = String::new();
        for row in summary
            .rows
            .iter()
            .filter(|r| !matches!(r.status, CaseStatus::Skipped(_)))
        {
            text.push_str(&format!("case {:>3}: {}\n", row.case_id, row.status));
        }
        text.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            summary.passed(),
            summary.failed(),
            summary.skipped()
        ));
        let doc = json!({
            "command": "verify",
            "mode": "corpus",
            "rows": summary.rows.iter().map(|r| json!({
                "case_id": r.case_id,
                "status": match &r.status {
                    CaseStatus::Pass => "pass",
                    CaseStatus::Fail(_) => "fail",
                    CaseStatus::Skipped(_) => "skipped",
                },
                "detail": r.status.to_string(),
            })).collect::<Vec<_>>(),
            "passed": summary.passed(),
            "failed": summary.failed(),
            "skipped": summary.skipped(),
        });
        emit(args.format, text, doc);
        return Ok(if summary.failed() == 0 && summary.passed() > 0 {
            Outcome::Ok
        } else {
            Outcome::ClaimFailed
        });
    }

    let (id, system, gens) = load(&src)?;
    let mine: Vec<&Certificate> = certs.iter().filter(|c| c.case_id == id).collect();
    if mine.is_empty() {
        bail!("no certificate for case {id}");
    }
    let mut reports = Vec::new();
    for c in mine {
        reports.push(verify_certificate(c, &system, &gens).with_context(|| format!("case {id}"))?);
    }
    let text: String = reports.iter().map(report_text).collect();
    let ok = reports.iter().all(CertificateReport::passed);
    let doc = json!({
        "command": "verify",
        "mode": "case",
        "passed": ok,
        "certificates": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    emit(args.format, text, doc);
    Ok(if ok {
        Outcome::Ok
    } else {
        Outcome::ClaimFailed
    })
}

fn cmd_cnd(args: &RunArgs) -> Result<Outcome> {
    let (id, system, gens) = load(&case_source(args.case.as_deref(), None)?)?;
    let system = expand_orbit(&system, &gens, args.radius)?;
    let (configs, hf) = build_hf_set(&system, options(args))?;
    let res = match compute_cnd(&hf) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(Outcome::ClaimFailed);
        }
    };
    let witness: Vec<(String, String)> = res
        .witness
        .iter()
        .map(|&i| {
            let h = &hf[i];
            (notation::half_fiber(&system, &configs, h), h.type_label())
        })
        .collect();
    let mut text = format!(
        "case {id}, radius {}: {} curves, {} configurations, {} half-fiber classes\ncnd = {}\n",
        args.radius,
        system.len(),
        configs.len(),
        hf.len(),
        res.length
    );
    for (i, (n, t)) in witness.iter().enumerate() {
        text.push_str(&format!("  F{} = {n}  {t}\n", i + 1));
    }
    let doc = json!({
        "command": "cnd",
        "case_id": id,
        "radius": args.radius,
        "curves": system.len(),
        "configurations": configs.len(),
        "half_fibers": hf.len(),
        "cnd": res.length,
        "witness": witness.iter().map(|(n, t)| json!({"notation": n, "type": t})).collect::<Vec<_>>(),
    });
    emit(args.format, text, doc);
    Ok(Outcome::Ok)
}

fn proof_json(r: &ProofReport) -> Value {
    json!({
        "steps": r.steps.iter().map(|s| json!({
            "id": s.id,
            "title": s.title,
            "passed": s.passed(),
            "identities": s.identities.iter().map(|i| json!({
                "statement": i.statement,
                "fitted": i.fitted.as_ref().map(|p| p.to_string()),
                "solutions": i.solutions.as_ref().map(|(_, s)| s.clone()),
                "holds": i.holds,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "assumptions": r.assumptions,
        "conclusion": r.conclusion,
    })
}

fn cmd_case145_proof(args: &RunArgs) -> Result<Outcome> {
    let (id, system, gens) = load(&case_source(args.case.as_deref(), Some(145))?)?;
    if id != 145 {
        bail!("this proof is specific to case 145, got case {id}");
    }
    let reps = Representatives::standard(&system, &gens)?;
    match exclusion_proof(&system, &gens, &reps) {
        Ok(r) => {
            let mut doc = proof_json(&r);
            doc["command"] = json!("case145-proof");
            doc["passed"] = json!(true);
            emit(args.format, r.render(), doc);
            Ok(Outcome::Ok)
        }
        Err(ProofError::ProofStepFailed {
            step,
            detail,
            report,
        }) => {
            let mut doc = proof_json(&report);
            doc["command"] = json!("case145-proof");
            doc["passed"] = json!(false);
            doc["failed_step"] = json!(step);
            emit(
                args.format,
                format!("{}proof step {step} failed: {detail}\n", report.render()),
                doc,
            );
            Ok(Outcome::ClaimFailed)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_orbit(args: &RunArgs) -> Result<Outcome> {
    let (id, system, gens) = load(&case_source(args.case.as_deref(), None)?)?;
    if args.radius > 0 && gens.is_empty() {
        bail!("case {id} has no generators to expand by");
    }
    let out = expand_orbit(&system, &gens, args.radius)?;
    let mut text = format!("case {id}, radius {}: {} curves\n", args.radius, out.len());
    let mut rows = Vec::new();
    for (i, (v, l)) in out.curves().iter().zip(out.labels()).enumerate() {
        text.push_str(&format!("{i:>4}  {l:<24} {v}\n"));
        rows.push(json!({"index": i, "label": l, "vector": v.coords()}));
    }
    let doc = json!({
        "command": "orbit",
        "case_id": id,
        "radius": args.radius,
        "curves": rows,
    });
    emit(args.format, text, doc);
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Cnd(a) => cmd_cnd(a),
        Command::Case145Proof(a) => cmd_case145_proof(a),
        Command::Orbit(a) => cmd_orbit(a),
    };
    match run {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ClaimFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(2)
        }
    }
}
