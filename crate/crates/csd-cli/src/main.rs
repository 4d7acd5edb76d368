//! `csd`: command-line front end for the rank-2 scattering engine.
//!
//! Subcommands: `verify` (named identities or an explicit `--lhs/--rhs`
//! pair), `scatter` (consistency completion of an initial product),
//! `reduce` (script replay with per-step value checks), and `parse`
//! (expression dump). Exit codes: 0 when everything verifies, 1 when a
//! verification reports a discrepancy, 2 on usage, parse, or configuration
//! errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use csd_core::rat::{format_rat, parse_rat};
use csd_core::{
    build, complete, enumerate_random_instances, parse_product, parse_script, parse_vector,
    print_product, replay, Context, EqualityReport, Error, IdentityId, IdentityParams,
    LatticeVector, LieSeries, ProductExpr, Rat,
};

#[derive(Parser)]
#[command(
    name = "csd",
    version,
    about = "Exact wall-crossing identities for rank-2 scattering diagrams"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Truncation degree (default 12)
    #[arg(long, global = true)]
    degree: Option<u32>,

    /// Skew form value {e1,e2} as an exact rational (default -1)
    #[arg(long, global = true, value_name = "P/Q")]
    lambda: Option<String>,

    /// Seed for randomized instance draws (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format (default text)
    #[arg(long, global = true, value_enum)]
    output: Option<OutputKind>,

    /// TOML file with keys `degree`, `lambda`, `output`; explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check identities from the catalog, or an explicit pair of products
    Verify(VerifyArgs),
    /// Complete an initial product into a consistent diagram
    Scatter(ScatterArgs),
    /// Replay a rewrite script against an initial product
    Reduce(ReduceArgs),
    /// Parse a product expression and dump its structure
    Parse(ParseArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Catalog identity to check; repeatable, verified in the given order
    #[arg(long = "identity", value_name = "NAME", value_parser = parse_identity)]
    identities: Vec<IdentityId>,

    /// Left product (requires --rhs, excludes --identity)
    #[arg(long, conflicts_with = "identities", requires = "rhs")]
    lhs: Option<String>,

    /// Right product
    #[arg(long, conflicts_with = "identities", requires = "lhs")]
    rhs: Option<String>,

    /// Pin the identity's vector parameter, e.g. "[1,0]"
    #[arg(long, value_parser = parse_vector_arg)]
    n: Option<LatticeVector>,

    /// Pin the identity's second vector parameter
    #[arg(long, value_parser = parse_vector_arg)]
    nprime: Option<LatticeVector>,

    /// Pin the identity's exponent parameter
    #[arg(long, value_name = "P/Q", value_parser = parse_rat_arg)]
    c: Option<Rat>,

    /// Pin the identity's ladder level
    #[arg(long)]
    level: Option<u32>,

    /// Random instances per parametric identity when no parameter is pinned
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Args)]
struct ScatterArgs {
    /// Initial (anti-ordered) product of walls
    #[arg(long, value_name = "PRODUCT")]
    walls: String,
}

#[derive(Args)]
struct ReduceArgs {
    /// Rewrite script file, one step per line
    #[arg(long, value_name = "FILE")]
    script: PathBuf,

    /// Initial product the script applies to
    #[arg(value_name = "PRODUCT")]
    initial: String,
}

#[derive(Args)]
struct ParseArgs {
    /// Product expression
    #[arg(value_name = "PRODUCT")]
    text: String,
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse::<IdentityId>().map_err(|e| e.to_string())
}

fn parse_vector_arg(s: &str) -> Result<LatticeVector, String> {
    parse_vector(s).map_err(|e| e.to_string())
}

fn parse_rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// Flags, then config file, then defaults.
struct Settings {
    ctx: Context,
    seed: u64,
    output: OutputKind,
}

fn resolve_settings(global: &GlobalArgs) -> Result<Settings, String> {
    let mut degree = global.degree;
    let mut lambda = match &global.lambda {
        Some(text) => Some(parse_rat(text).map_err(|e| e.to_string())?),
        None => None,
    };
    let mut output = global.output;

    if let Some(path) = &global.config {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| format!("{}: {e}", path.display()))?;
        for (key, value) in &table {
            match key.as_str() {
                "degree" => {
                    let d = value
                        .as_integer()
                        .and_then(|d| u32::try_from(d).ok())
                        .ok_or_else(|| format!("config key `degree`: expected a small integer, got {value}"))?;
                    degree = degree.or(Some(d));
                }
                "lambda" => {
                    let r = match value {
                        toml::Value::Integer(k) => Rat::from_integer((*k).into()),
                        toml::Value::String(s) => parse_rat(s).map_err(|e| e.to_string())?,
                        other => return Err(format!("config key `lambda`: expected an integer or \"p/q\", got {other}")),
                    };
                    lambda = lambda.or(Some(r));
                }
                "output" => {
                    let s = value
                        .as_str()
                        .ok_or_else(|| format!("config key `output`: expected a string, got {value}"))?;
                    let kind = OutputKind::from_str(s, true)
                        .map_err(|_| format!("config key `output`: expected \"text\" or \"json\", got {s:?}"))?;
                    output = output.or(Some(kind));
                }
                other => return Err(format!("config key `{other}` is not recognized")),
            }
        }
    }

    let degree = degree.unwrap_or(12);
    let lambda = lambda.unwrap_or_else(|| -Rat::from_integer(1.into()));
    let ctx = Context::new(degree, lambda).map_err(|e| e.to_string())?;
    Ok(Settings {
        ctx,
        seed: global.seed.unwrap_or(0),
        output: output.unwrap_or(OutputKind::Text),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match resolve_settings(&cli.global) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Verify(args) => run_verify(&args, &settings),
        Command::Scatter(args) => run_scatter(&args, &settings),
        Command::Reduce(args) => run_reduce(&args, &settings),
        Command::Parse(args) => run_parse(&args, &settings),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// One verification: a labelled pair of products to compare.
struct Job {
    label: String,
    lhs: ProductExpr,
    rhs: ProductExpr,
}

impl Job {
    fn run(&self, ctx: &Context) -> Result<EqualityReport, Error> {
        let lhs = self.lhs.eval(ctx)?;
        let rhs = self.rhs.eval(ctx)?;
        Ok(lhs.compare(&rhs))
    }
}

fn run_verify(args: &VerifyArgs, settings: &Settings) -> Result<bool, String> {
    let ctx = &settings.ctx;
    let mut jobs: Vec<Job> = Vec::new();

    if let (Some(lhs), Some(rhs)) = (&args.lhs, &args.rhs) {
        jobs.push(Job {
            label: "lhs = rhs".to_string(),
            lhs: parse_product(lhs).map_err(|e| e.to_string())?,
            rhs: parse_product(rhs).map_err(|e| e.to_string())?,
        });
    } else {
        if args.identities.is_empty() {
            return Err("nothing to verify: pass --identity NAME or --lhs/--rhs".to_string());
        }
        let pinned = IdentityParams {
            n: args.n,
            nprime: args.nprime,
            c: args.c.clone(),
            l: args.level,
        };
        let has_pins = pinned != IdentityParams::default();
        for &id in &args.identities {
            if id.is_fixed() || has_pins {
                let inst = build(id, &pinned, ctx).map_err(|e| e.to_string())?;
                jobs.push(Job {
                    label: id.name().to_string(),
                    lhs: inst.lhs,
                    rhs: inst.rhs,
                });
            } else {
                let draws = enumerate_random_instances(id, args.count, settings.seed, &ctx.form);
                for (k, params) in draws.iter().enumerate() {
                    let inst = build(id, params, ctx).map_err(|e| e.to_string())?;
                    let label = if args.count == 1 {
                        id.name().to_string()
                    } else {
                        format!("{}#{k}", id.name())
                    };
                    jobs.push(Job {
                        label,
                        lhs: inst.lhs,
                        rhs: inst.rhs,
                    });
                }
            }
        }
    }

    // independent checks run concurrently; reports print in input order
    let reports: Vec<Result<EqualityReport, Error>> = if jobs.len() == 1 {
        vec![jobs[0].run(ctx)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|job| scope.spawn(move || job.run(ctx)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification panicked"))
                .collect()
        })
    };

    let mut all_equal = true;
    for (job, report) in jobs.iter().zip(reports) {
        let report = report.map_err(|e| format!("{}: {e}", job.label))?;
        all_equal &= report.is_equal();
        match settings.output {
            OutputKind::Json => println!("{}", report.to_json()),
            OutputKind::Text => match &report {
                EqualityReport::Equal => {
                    println!("pass: {} (degree {})", job.label, ctx.degree());
                }
                EqualityReport::Differs {
                    point,
                    degree,
                    coefficient,
                } => {
                    println!(
                        "fail: {} at ray {point} degree {degree}, coefficient {}",
                        job.label,
                        format_rat(coefficient)
                    );
                }
            },
        }
    }
    Ok(all_equal)
}

fn series_text(series: &LieSeries) -> String {
    let mut out = String::new();
    for (n, c) in series.iter() {
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let _ = write!(out, "{}*X{n}", format_rat(c));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn run_scatter(args: &ScatterArgs, settings: &Settings) -> Result<bool, String> {
    let ctx = &settings.ctx;
    let walls = parse_product(&args.walls).map_err(|e| e.to_string())?;
    let diagram = complete(&walls, ctx).map_err(|e| e.to_string())?;
    match settings.output {
        OutputKind::Json => println!("{}", diagram.to_json()),
        OutputKind::Text => {
            println!(
                "cutoff {}, lambda {}",
                ctx.degree(),
                format_rat(ctx.form.lambda())
            );
            println!("incoming: {}", print_product(diagram.incoming()));
            for (primitive, series) in diagram.rays() {
                println!("ray {primitive}: {}", series_text(series));
            }
        }
    }
    Ok(true)
}

fn factors_json(factors: &[(LatticeVector, Rat)]) -> Value {
    Value::Array(
        factors
            .iter()
            .map(|(n, c)| json!({"vector": [n.a1(), n.a2()], "exponent": format_rat(c)}))
            .collect(),
    )
}

fn factors_text(factors: &[(LatticeVector, Rat)]) -> String {
    if factors.is_empty() {
        return "(empty product)".to_string();
    }
    print_product(&ProductExpr::explicit(factors.to_vec()))
}

fn run_reduce(args: &ReduceArgs, settings: &Settings) -> Result<bool, String> {
    let ctx = &settings.ctx;
    let text = fs::read_to_string(&args.script)
        .map_err(|e| format!("{}: {e}", args.script.display()))?;
    let script = parse_script(&text).map_err(|e| e.to_string())?;
    let initial = parse_product(&args.initial)
        .and_then(|expr| expr.expand(ctx.degree()))
        .map_err(|e| e.to_string())?;

    match replay(&initial, &script, ctx) {
        Ok(trace) => {
            match settings.output {
                OutputKind::Json => {
                    let steps: Vec<Value> =
                        script.iter().map(|s| Value::String(s.format_line())).collect();
                    let stages: Vec<Value> =
                        trace.iter().map(|stage| factors_json(stage)).collect();
                    println!(
                        "{}",
                        json!({
                            "cutoff": ctx.degree(),
                            "lambda": format_rat(ctx.form.lambda()),
                            "steps": steps,
                            "trace": stages,
                        })
                    );
                }
                OutputKind::Text => {
                    println!("{}", factors_text(&trace[0]));
                    for (step, stage) in script.iter().zip(trace.iter().skip(1)) {
                        println!("  {:<14} -> {}", step.format_line(), factors_text(stage));
                    }
                }
            }
            Ok(true)
        }
        Err(Error::UnsoundStep {
            index,
            point,
            degree,
            coefficient,
        }) => {
            match settings.output {
                OutputKind::Json => println!(
                    "{}",
                    json!({
                        "status": "fail",
                        "step": index,
                        "ray": [point.0, point.1],
                        "degree": degree,
                        "coefficient": coefficient,
                    })
                ),
                OutputKind::Text => println!(
                    "fail: step {index} broke value preservation at ray [{},{}] degree {degree}, coefficient {coefficient}",
                    point.0, point.1
                ),
            }
            Ok(false)
        }
        Err(other) => Err(other.to_string()),
    }
}

fn run_parse(args: &ParseArgs, settings: &Settings) -> Result<bool, String> {
    let expr = parse_product(&args.text).map_err(|e| e.to_string())?;
    match settings.output {
        OutputKind::Json => println!(
            "{}",
            json!({"canonical": print_product(&expr), "factors": expr.to_json()})
        ),
        OutputKind::Text => {
            println!("canonical: {}", print_product(&expr));
            println!("{expr:#?}");
        }
    }
    Ok(true)
}
