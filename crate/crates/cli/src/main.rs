//! `setrisk`: evaluate set-valued risk measures, check their laws, build
//! decompositions and certificates.

mod inputs;
mod render;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use setrisk::demo;
use setrisk::io;
use setrisk::laws::{
    check_acceptance_law, check_correspondence, check_measure_law, check_star_at, AccLaw, Direction, LawReport,
    MeasureLaw, SampleBudget, Subject,
};
use setrisk::measures::{accepts, eval_acceptance, eval_measure, AccExpr, MeasureExpr};
use setrisk::represent::{
    decompose, dual_certificate, family_value, hull_family, reconstruct_check, star_link, validate_certificate,
    Theorem,
};
use setrisk::Error;

#[derive(Parser)]
#[command(name = "setrisk", version, about = "Exact evaluation and law checking for set-valued risk measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(long, global = true, env = "SETRISK_SEED", default_value_t = 7)]
    seed: u64,

    /// Number of sampled trials per law.
    #[arg(long, global = true, env = "SETRISK_BUDGET", default_value_t = 200)]
    budget: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
    CsvVertices,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SubjectArgs {
    /// `wc`, `var-strong:<level>`, `var-weak:<level>`, inline JSON or a file.
    #[arg(long)]
    measure: Option<String>,

    /// Acceptance-set expression, inline JSON or a file.
    #[arg(long)]
    acceptance: Option<String>,
}

enum Operand {
    Measure(MeasureExpr),
    Acceptance(AccExpr),
}

impl SubjectArgs {
    fn resolve(&self) -> Result<Operand, Error> {
        match (&self.measure, &self.acceptance) {
            (Some(m), _) => Ok(Operand::Measure(inputs::measure(m)?)),
            (None, Some(a)) => Ok(Operand::Acceptance(inputs::acceptance(a)?)),
            (None, None) => Err(Error::MalformedDocument("no measure or acceptance set given".into())),
        }
    }
}

impl Operand {
    fn subject(&self) -> Subject<'_> {
        match self {
            Operand::Measure(r) => Subject::Measure(r),
            Operand::Acceptance(a) => Subject::Acceptance(a),
        }
    }

    fn as_measure(&self) -> MeasureExpr {
        match self {
            Operand::Measure(r) => r.clone(),
            Operand::Acceptance(a) => MeasureExpr::of_acceptance(a.clone()),
        }
    }

    fn as_acceptance(&self) -> AccExpr {
        match self {
            Operand::Measure(r) => AccExpr::of_measure(r.clone()),
            Operand::Acceptance(a) => a.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure (or the measure of an acceptance set) at a position.
    Eval {
        /// Fixture name (mkt-a, mkt-b, mkt-1d), inline JSON or a file.
        #[arg(long)]
        market: String,
        #[command(flatten)]
        subject: SubjectArgs,
        /// Fixture name (x1, x2, var-x), inline JSON or a file.
        #[arg(long)]
        position: String,
    },
    /// Check laws; exits 1 when any law fails.
    Check {
        #[arg(long)]
        market: String,
        #[command(flatten)]
        subject: SubjectArgs,
        /// Law ids (R1..R6, A2, R_eq_RAR, star_at, ...) or `all`.
        #[arg(long = "law", required = true, num_args = 1..)]
        laws: Vec<String>,
        /// Base positions for `star_at`.
        #[arg(long = "base")]
        base: Vec<String>,
    },
    /// Build an anchored decomposition family and check its reconstruction.
    Decompose {
        #[arg(long)]
        market: String,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        position: String,
        /// monetary, star_normalized, coherent or hull.
        #[arg(long, default_value = "monetary")]
        theorem: String,
        /// The common point of a hull family.
        #[arg(long)]
        y: Option<String>,
        /// Additional anchors sampled from the acceptance set.
        #[arg(long, default_value_t = 0)]
        extra: usize,
    },
    /// Certify that an eligible portfolio lies outside the worst-case value.
    Certify {
        #[arg(long)]
        market: String,
        #[arg(long)]
        position: String,
        /// Portfolio in R^d, as `1,0` or a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Link a family of convex acceptance sets to a star-shaped measure.
    Link {
        #[arg(long)]
        market: String,
        #[arg(long = "member", required = true, num_args = 1..)]
        members: Vec<String>,
        #[arg(long)]
        y: String,
    },
    /// Run a named reproduction: remark52, example51 or var_fixture.
    Demo { name: String },
}

/// Result of a command: the document to print and whether it reports success.
struct Output {
    text: String,
    json: Value,
    csv: Option<String>,
    ok: bool,
}

#[derive(Serialize)]
struct CheckDocument {
    seed: u64,
    budget: usize,
    passed: bool,
    reports: Vec<Value>,
}

enum LawId {
    Measure(MeasureLaw),
    Acceptance(AccLaw),
    Correspondence(Direction),
    StarAt,
}

fn law_ids(raw: &[String], operand: &Operand) -> Result<Vec<LawId>, Error> {
    let mut out = Vec::new();
    for name in raw {
        if name == "all" {
            match operand {
                Operand::Measure(_) => out.extend(MeasureLaw::ALL.into_iter().map(LawId::Measure)),
                Operand::Acceptance(_) => out.extend(AccLaw::ALL.into_iter().map(LawId::Acceptance)),
            }
        } else if name == "star_at" {
            out.push(LawId::StarAt);
        } else if let Ok(l) = MeasureLaw::from_str(name) {
            out.push(LawId::Measure(l));
        } else if let Ok(l) = AccLaw::from_str(name) {
            out.push(LawId::Acceptance(l));
        } else if let Ok(d) = Direction::from_str(name) {
            out.push(LawId::Correspondence(d));
        } else {
            return Err(Error::UnknownLaw(name.clone()));
        }
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budget = SampleBudget::new(cli.budget, cli.seed);
    match &cli.command {
        Command::Eval {
            market,
            subject,
            position,
        } => {
            let market = inputs::market(market)?;
            let x = inputs::position(position, &market)?;
            let value = match subject.resolve()? {
                Operand::Measure(r) => eval_measure(&market, &r, &x)?,
                Operand::Acceptance(a) => eval_acceptance(&market, &a, &x)?,
            };
            let csv = if cli.format == Format::CsvVertices {
                Some(io::csv_vertices(&value)?)
            } else {
                None
            };
            Ok(Output {
                text: render::upper_set(&value),
                json: io::upper_set_value(&value),
                csv,
                ok: true,
            })
        }
        Command::Check {
            market,
            subject,
            laws,
            base,
        } => {
            let market = inputs::market(market)?;
            let operand = subject.resolve()?;
            let mut reports: Vec<LawReport> = Vec::new();
            for id in law_ids(laws, &operand)? {
                reports.push(match id {
                    LawId::Measure(l) => check_measure_law(&market, &operand.as_measure(), l, &budget)?,
                    LawId::Acceptance(l) => check_acceptance_law(&market, &operand.as_acceptance(), l, &budget)?,
                    LawId::Correspondence(d) => check_correspondence(&market, operand.subject(), d, &budget)?,
                    LawId::StarAt => {
                        let base = base
                            .iter()
                            .map(|b| inputs::position(b, &market))
                            .collect::<Result<Vec<_>, _>>()?;
                        check_star_at(&market, &operand.as_acceptance(), &base, &budget)?
                    }
                });
            }
            let passed = reports.iter().all(LawReport::passed);
            let doc = CheckDocument {
                seed: cli.seed,
                budget: cli.budget,
                passed,
                reports: reports.iter().map(LawReport::to_value).collect(),
            };
            Ok(Output {
                text: reports.iter().map(render::report).collect(),
                json: serde_json::to_value(doc).expect("plain document"),
                csv: None,
                ok: passed,
            })
        }
        Command::Decompose {
            market,
            measure,
            position,
            theorem,
            y,
            extra,
        } => {
            let market = inputs::market(market)?;
            let r = inputs::measure(measure)?;
            let x = inputs::position(position, &market)?;
            let family = if theorem == "hull" {
                let y = y
                    .as_ref()
                    .ok_or_else(|| Error::MalformedDocument("a hull family needs --y".into()))?;
                hull_family(&market, &r, &inputs::position(y, &market)?, &x)?
            } else {
                let theorem = Theorem::from_str(theorem)?;
                decompose(&market, &r, theorem, &x, *extra, &budget)?
            };
            let report = reconstruct_check(&market, &r, &family, &x)?;
            let union = family_value(&market, &family, &x)?;
            let member_values = family
                .members
                .iter()
                .map(|a| eval_acceptance(&market, a, &x).map(|v| io::upper_set_value(&v)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut text = format!("{} family, {} members\n", family.kind, family.members.len());
            for (i, z) in family.anchors.iter().enumerate() {
                let accepted = accepts(&market, &family.members[i], z)?;
                text.push_str(&format!("  member {i}: anchor {} (accepts its anchor: {accepted})\n", render::rows(z.rows())));
            }
            text.push_str("union of member values:\n");
            text.push_str(&render::upper_set(&union));
            text.push_str(&render::report(&report));
            let mut json = family.to_value();
            json["member_values"] = Value::Array(member_values);
            json["reconstruction"] = report.to_value();
            Ok(Output {
                text,
                json,
                csv: None,
                ok: report.passed(),
            })
        }
        Command::Certify { market, position, u } => {
            let market = inputs::market(market)?;
            let y_vec = inputs::position(position, &market)?;
            let u = inputs::vector(u)?;
            let (text, json) = match dual_certificate(&market, &y_vec, &u)? {
                None => (
                    "u lies in the worst-case value; nothing to certify\n".to_string(),
                    json!({ "inside": true, "certificate": null }),
                ),
                Some(cert) => {
                    let valid = validate_certificate(&market, &y_vec, &cert);
                    let text = format!(
                        "u excluded: Q concentrated on scenario {}, y = {}, valid: {valid}\n",
                        cert.scenario + 1,
                        render::rows(std::slice::from_ref(&cert.y)),
                    );
                    (text, json!({ "inside": false, "certificate": cert.to_value(), "valid": valid }))
                }
            };
            Ok(Output {
                text,
                json,
                csv: None,
                ok: true,
            })
        }
        Command::Link { market, members, y } => {
            let market = inputs::market(market)?;
            let members = members
                .iter()
                .map(|m| inputs::acceptance(m))
                .collect::<Result<Vec<_>, _>>()?;
            let y = inputs::position(y, &market)?;
            let (measure, report) = star_link(&market, &members, &y, &budget)?;
            Ok(Output {
                text: format!("linked measure: {}\n{}", io::measure_value(&measure), render::report(&report)),
                json: json!({ "measure": io::measure_value(&measure), "report": report.to_value() }),
                csv: None,
                ok: report.passed(),
            })
        }
        Command::Demo { name } => {
            let outcome = demo::run(name, &budget)?;
            let mut text = format!("{}\n", outcome.name);
            for line in &outcome.lines {
                text.push_str(&format!("  {line}\n"));
            }
            Ok(Output {
                text,
                json: serde_json::to_value(&outcome).expect("plain document"),
                csv: None,
                ok: outcome.passed,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format == Format::CsvVertices && !matches!(cli.command, Command::Eval { .. }) {
        let e = Error::MalformedDocument("--format csv-vertices applies to eval only".into());
        eprintln!("{}", serde_json::to_string_pretty(&io::error_value(&e)).unwrap());
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).unwrap()),
                Format::CsvVertices => print!("{}", out.csv.unwrap_or_default()),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&io::error_value(&e)).unwrap());
            ExitCode::from(if e.is_degenerate() { 3 } else { 2 })
        }
    }
}
