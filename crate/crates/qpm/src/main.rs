//! `qpm`: command-line access to the qpoly toolkit.
//!
//! Exit status is 0 on success, 1 when a computed identity or verification
//! fails, and 2 on usage or input errors.

mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use qpoly::charpoly::{char_poly, weight_enumerator};
use qpoly::designs::{am_check, am_check_code, designs_from_qpm, verify_design, DesignCertificate, Theta, WeightedDesign};
use qpoly::duality::DualityContext;
use qpoly::io::{code_to_json, parse_subspace_arg, qpm_to_json, read_input, read_json, Input};
use qpoly::poly::{bigint_json, IntPoly};
use qpoly::search::{run_search, SearchConfig};

#[derive(Parser)]
#[command(name = "qpm", version, about = "Exact computations with q-polymatroids and rank-metric codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Characteristic polynomial.
    Charpoly(InArg),
    /// Weight enumerators of M and M*, evaluated at --theta when given (a code's own field size by default).
    Weights {
        #[command(flatten)]
        input: InArg,
        #[arg(long)]
        theta: Option<u64>,
    },
    /// Contraction by a subspace given as comma-separated rows, e.g. `1000,0100`.
    Contract {
        #[command(flatten)]
        input: InArg,
        #[arg(long)]
        space: String,
        /// Write the contracted q-polymatroid here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual q-polymatroid, or dual code for code input.
    Dual {
        #[command(flatten)]
        input: InArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both sides of the MacWilliams identity for each s.
    Macwilliams {
        #[command(flatten)]
        input: InArg,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Design criteria and verified design certificates.
    AmCheck {
        #[command(flatten)]
        input: InArg,
        #[arg(long)]
        t: usize,
        /// An integer, or `symbolic`. Defaults to the field size for codes and `symbolic` otherwise.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Checks a weighted design file; exits 1 when it is not a design.
    DesignVerify(InArg),
    /// Random search for systematic codes passing the design screen.
    Search(SearchArgs),
    /// Recomputes the reference values and reports each one.
    Selftest,
}

#[derive(Args)]
struct InArg {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    /// JSON file with any of the fields below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    no_dedupe: bool,
    #[arg(long)]
    cross_validate: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qpm: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn write_or_print(v: &Value, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, serde_json::to_string_pretty(v)? + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            print(v);
            Ok(())
        }
    }
}

fn poly_json(p: &IntPoly) -> Value {
    json!({ "coefficients": p, "display": p.to_string() })
}

fn load(arg: &InArg) -> Result<Input> {
    Ok(read_input(&arg.input)?)
}

fn run(cmd: Cmd) -> Result<Status> {
    match cmd {
        Cmd::Charpoly(input) => {
            let m = load(&input)?.qpm()?;
            print(&json!({ "charpoly": poly_json(&char_poly(&m)?) }));
            Ok(Status::Ok)
        }
        Cmd::Weights { input, theta } => weights(&input, theta),
        Cmd::Contract { input, space, out } => {
            let m = load(&input)?.qpm()?;
            let t = parse_subspace_arg(m.chart(), &space)?;
            let c = m.contract(&t)?;
            let body = json!({
                "space": m.chart().format_subspace(&t),
                "dim": c.dim(),
                "charpoly": poly_json(&char_poly(&c)?),
            });
            print(&body);
            if let Some(p) = out {
                write_or_print(&qpm_to_json(&c)?, Some(&p))?;
            }
            Ok(Status::Ok)
        }
        Cmd::Dual { input, out } => {
            let body = match load(&input)? {
                Input::Code(c) => code_to_json(&c.dual()),
                Input::Qpm(m) => qpm_to_json(&m.dual())?,
            };
            write_or_print(&body, out.as_deref())?;
            Ok(Status::Ok)
        }
        Cmd::Macwilliams { input, s } => {
            let m = load(&input)?.qpm()?;
            let ctx = DualityContext::new(&m)?;
            let n = m.dim();
            let checks: Vec<(usize, _)> = match s {
                Some(s) if s > n => bail!("s = {s} exceeds n = {n}"),
                Some(s) => vec![(s, ctx.macwilliams(s))],
                None => ctx.macwilliams_all().into_iter().enumerate().collect(),
            };
            let holds = checks.iter().all(|(_, c)| c.holds);
            let rows: Vec<Value> = checks
                .iter()
                .map(|(s, c)| json!({ "s": s, "lhs": poly_json(&c.lhs), "rhs": poly_json(&c.rhs), "shift": c.shift, "holds": c.holds }))
                .collect();
            print(&json!({ "n": n, "checks": rows, "holds": holds }));
            Ok(if holds { Status::Ok } else { Status::Mismatch })
        }
        Cmd::AmCheck { input, t, theta } => am(&input, t, theta.as_deref()),
        Cmd::DesignVerify(input) => {
            let v = read_json(&input.input)?;
            let d = WeightedDesign::from_json(&v)?;
            let verdict = verify_design(&d)?;
            print(&json!({ "t": d.t(), "k": d.k(), "blocks": d.len(), "verdict": verdict.to_json(d.ambient()) }));
            Ok(if verdict.is_verified() { Status::Ok } else { Status::Mismatch })
        }
        Cmd::Search(args) => search(args),
        Cmd::Selftest => Ok(if selftest::run() { Status::Ok } else { Status::Mismatch }),
    }
}

fn weights(input: &InArg, theta: Option<u64>) -> Result<Status> {
    let loaded = load(input)?;
    let m = loaded.qpm()?;
    let primal = weight_enumerator(&m)?;
    let dual = weight_enumerator(&m.dual())?;
    let polys = |w: &qpoly::charpoly::WeightEnumerator| (0..w.len()).map(|i| poly_json(&w.get(i))).collect::<Vec<_>>();
    let mut body = json!({ "enumerator": polys(&primal), "dual_enumerator": polys(&dual) });
    let theta = theta.map(BigInt::from).or_else(|| loaded.code().map(qpoly::codes::Code::theta));
    let mut status = Status::Ok;
    if let Some(th) = theta {
        let values = |w: &qpoly::charpoly::WeightEnumerator| w.eval(&th).iter().map(bigint_json).collect::<Vec<_>>();
        body["theta"] = bigint_json(&th);
        body["distribution"] = json!(values(&primal));
        body["dual_distribution"] = json!(values(&dual));
        if let Some(c) = loaded.code() {
            let direct = c.weight_distribution()?;
            let agrees = direct == primal.eval(&th);
            body["enumerated_distribution"] = json!(direct.iter().map(bigint_json).collect::<Vec<_>>());
            body["agrees"] = json!(agrees);
            if !agrees {
                status = Status::Mismatch;
            }
        }
    }
    print(&body);
    Ok(status)
}

fn certificates_json(certs: &[DesignCertificate]) -> (Value, bool) {
    let ok = certs.iter().all(DesignCertificate::is_verified);
    (json!(certs.iter().map(DesignCertificate::to_json).collect::<Vec<_>>()), ok)
}

fn am(input: &InArg, t: usize, theta: Option<&str>) -> Result<Status> {
    let loaded = load(input)?;
    let m = loaded.qpm()?;
    let theta: Theta = match (theta, loaded.code()) {
        (Some(s), _) => s.parse().map_err(anyhow::Error::msg)?,
        (None, Some(c)) => Theta::Value(c.theta()),
        (None, None) => Theta::Symbolic,
    };
    let report = am_check(&m, t, &theta)?;
    let mut all_verified = true;
    let mut body = json!({ "report": report });
    if report.range_applies {
        let (_, certs) = designs_from_qpm(&m, t, &theta)?;
        let (v, ok) = certificates_json(&certs);
        all_verified &= ok;
        body["certificates"] = v;
    } else {
        body["certificates"] = json!([]);
    }
    if let Some(c) = loaded.code() {
        let cr = am_check_code(c, t)?;
        all_verified &= cr.certificates.iter().all(DesignCertificate::is_verified);
        body["code_report"] = cr.to_json();
    }
    print(&body);
    Ok(if all_verified { Status::Ok } else { Status::Mismatch })
}

fn search(a: SearchArgs) -> Result<Status> {
    let mut base: serde_json::Map<String, Value> = match &a.config {
        Some(p) => match read_json(p)? {
            Value::Object(o) => o,
            _ => bail!("{} must hold a JSON object", p.display()),
        },
        None => serde_json::Map::new(),
    };
    let mut set = |key: &str, v: Option<Value>| {
        if let Some(v) = v {
            base.insert(key.to_string(), v);
        }
    };
    set("q", a.q.map(Value::from));
    set("m", a.m.map(Value::from));
    set("n", a.n.map(Value::from));
    set("k", a.k.map(Value::from));
    set("t", a.t.map(Value::from));
    set("count", a.count.map(Value::from));
    set("seed", a.seed.map(Value::from));
    set("workers", a.workers.map(Value::from));
    set("cross_validate", a.cross_validate.map(Value::from));
    set("out", a.out.map(|p| Value::from(p.to_string_lossy().into_owned())));
    if a.no_dedupe {
        set("dedupe", Some(Value::Bool(false)));
    }
    base.entry("out").or_insert_with(|| Value::from("qpm-search"));
    let cfg: SearchConfig = serde_json::from_value(Value::Object(base)).context("search needs m, n, k, t, count and seed")?;
    let summary = run_search(&cfg)?;
    print(&json!({ "out": cfg.out, "summary": summary }));
    Ok(if summary.cross_mismatches == 0 { Status::Ok } else { Status::Mismatch })
}
