//! Command-line front end: instance generation, embedding, suite runs and
//! certificate reports.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 bad configuration, 3 inconclusive.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use theta_hyper::field::{Field, PrimeField};
use theta_hyper::hyperelliptic::{embed, generate_instance, Instance, InstanceJson};
use theta_hyper::par::Exec;
use theta_hyper::proj::span;
use theta_hyper::suites::{run_suite, Certificate, FieldChoice, Status, Suite, SuiteConfig};
use theta_hyper::{Error, Result};

#[derive(Parser)]
#[command(name = "theta-hyper", version, about = "Exact checks for theta maps of hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance (curve, D, N) and print it as JSON.
    Gen(GenArgs),
    /// Embed an instance by |K + 2D| and print the images of D and N.
    Embed(EmbedArgs),
    /// Run verification suites and write their certificates.
    Verify(VerifyArgs),
    /// Summarize certificate files.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Q,
    Fp,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long, value_enum, default_value = "fp")]
    field: FieldArg,
    #[arg(long, default_value_t = theta_hyper::field::DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = theta_hyper::linsys::DEFAULT_MARGIN)]
    margin: usize,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    common: Common,
    /// Instance JSON from `gen`; generated from --genus/--seed when absent.
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Suite name (repeatable), or `all`.
    #[arg(long = "suite", required_unless_present = "replay")]
    suites: Vec<String>,
    /// Re-run the suite recorded in a certificate with its seed and prime.
    #[arg(long, conflicts_with = "suites")]
    replay: Option<PathBuf>,
    /// Run suites one after another.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ReportArgs {
    files: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(&a),
        Command::Embed(a) => embed_cmd(&a),
        Command::Verify(a) => verify(&a),
        Command::Report(a) => report(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Config(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_)) {
                2
            } else {
                1
            })
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn prime_field(c: &Common) -> Result<PrimeField> {
    if matches!(c.field, FieldArg::Q) {
        return Err(Error::Config("instances are generated over a prime field; use --field fp".into()));
    }
    PrimeField::new(c.prime)
}

fn genus(c: &Common) -> Result<usize> {
    let g = c.genus.unwrap_or(3);
    if g < 3 {
        return Err(Error::Config(format!("genus {g} below 3")));
    }
    Ok(g)
}

fn gen(a: &GenArgs) -> Result<u8> {
    let field = prime_field(&a.common)?;
    let inst = generate_instance(&field, genus(&a.common)?, a.common.seed, Exec::default())?;
    let text = serde_json::to_string_pretty(&inst.to_json(&field))? + "\n";
    write_out(a.common.out.as_deref(), &text)?;
    Ok(0)
}

fn load_instance(path: &Path) -> Result<(PrimeField, Instance<PrimeField>)> {
    let json: InstanceJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    let field = match json.field {
        theta_hyper::FieldTag::Prime(p) => PrimeField::new(p)?,
        theta_hyper::FieldTag::Rationals => return Err(Error::Config("instance files are over a prime field".into())),
    };
    let inst = Instance::from_json(&field, &json)?;
    Ok((field, inst))
}

fn embed_cmd(a: &EmbedArgs) -> Result<u8> {
    let (field, inst) = match &a.instance {
        Some(p) => load_instance(p)?,
        None => {
            let field = prime_field(&a.common)?;
            let inst = generate_instance(&field, genus(&a.common)?, a.common.seed, Exec::default())?;
            (field, inst)
        }
    };
    inst.verify(&field)?;
    let image = |pts: &[theta_hyper::hyperelliptic::CurvePoint<PrimeField>]| -> Result<Vec<Vec<String>>> {
        pts.iter()
            .map(|p| {
                let q = embed(&field, &inst.curve, &inst.embedding, p)?;
                Ok(q.coords().iter().map(|x| field.format(x)).collect())
            })
            .collect()
    };
    let n_embedded = inst.embedded_n(&field)?;
    let text = serde_json::to_string_pretty(&json!({
        "field": field.tag(),
        "genus": inst.genus(),
        "ambient": inst.embedding.dim() - 1,
        "d": image(&inst.d)?,
        "n": image(&inst.n)?,
        "span_of_n": span(&field, &n_embedded)?.dim(),
    }))? + "\n";
    write_out(a.common.out.as_deref(), &text)?;
    Ok(0)
}

fn verify(a: &VerifyArgs) -> Result<u8> {
    let (suites, cfg) = match &a.replay {
        Some(path) => {
            let cert = Certificate::from_json(&fs::read_to_string(path)?)?;
            (vec![cert.suite], cert.config())
        }
        None => {
            let c = &a.common;
            let mut suites = Vec::new();
            for s in &a.suites {
                if s == "all" {
                    suites.extend(Suite::ALL);
                } else {
                    suites.push(s.parse::<Suite>()?);
                }
            }
            let cfg = SuiteConfig {
                genus: c.genus,
                field: match c.field {
                    FieldArg::Q => FieldChoice::Q,
                    FieldArg::Fp => FieldChoice::Fp,
                },
                prime: c.prime,
                seed: c.seed,
                margin: c.margin,
            };
            (suites, cfg)
        }
    };
    // reject bad configurations before any work
    for s in &suites {
        cfg.genus_for(*s)?;
        if cfg.field == FieldChoice::Fp {
            PrimeField::new(cfg.prime)?;
        }
    }
    let exec = if a.sequential { Exec::Sequential } else { Exec::default() };
    let certs: Vec<Result<Certificate>> = exec.map(&suites, |s| run_suite(*s, &cfg, Exec::default()));
    let certs = certs.into_iter().collect::<Result<Vec<_>>>()?;
    let text = if certs.len() == 1 {
        certs[0].to_json()?
    } else {
        serde_json::to_string_pretty(&certs)? + "\n"
    };
    write_out(a.common.out.as_deref(), &text)?;
    for c in &certs {
        eprintln!("{:<15} {:?}", c.suite.name(), c.status);
    }
    Ok(combined(certs.iter().map(|c| c.status)))
}

fn combined(statuses: impl Iterator<Item = Status>) -> u8 {
    let mut code = 0;
    for s in statuses {
        code = match (code, s) {
            (_, Status::Fail) | (1, _) => 1,
            (_, Status::Inconclusive) => 3,
            (c, Status::Pass) => c,
        };
    }
    code
}

fn report(a: &ReportArgs) -> Result<u8> {
    if a.files.is_empty() {
        return Err(Error::Config("no certificate files given".into()));
    }
    let mut statuses = Vec::new();
    for path in &a.files {
        let text = fs::read_to_string(path)?;
        let certs: Vec<Certificate> = match serde_json::from_str::<Vec<Certificate>>(&text) {
            Ok(v) => v,
            Err(_) => vec![Certificate::from_json(&text)?],
        };
        for c in certs {
            let passed = c.checks.iter().filter(|k| k.passed).count();
            println!(
                "{:<15} genus {} {} seed {:<6} {:<12} {passed}/{} checks",
                c.suite.name(),
                c.genus,
                c.field,
                c.seed,
                format!("{:?}", c.status).to_lowercase(),
                c.checks.len()
            );
            for k in c.checks.iter().filter(|k| !k.passed) {
                println!("    failed: {} {}", k.name, k.detail);
            }
            statuses.push(c.status);
        }
    }
    Ok(combined(statuses.into_iter()))
}
