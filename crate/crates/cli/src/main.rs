use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lrc_core::estimator::{estimate_lrc_with, EstimateOptions, EstimatePath};
use lrc_core::experiments::{
    inscribed_ball_check, logconcavity_check, shifted_fraction_experiment, volume_ratio_check,
};
use lrc_core::geometry::{positivity, rounding_for};
use lrc_core::sampling::{sample_uniform, sample_uniform_traced, WalkParams};
use lrc_core::volume::{estimate_volume, exact_volume_oracle, VolumeParams};
use lrc_core::{
    build_rhombus_system, exact_count, parse_partition, ratio, Body, Error, HPolytope, PartitionTriple,
};

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "lrc", version, about = "Littlewood-Richardson coefficients through hives")]
struct Cli {
    /// Emit the JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Master seed, or `random` to draw one from the OS.
    #[arg(long, global = true, value_parser = parse_seed)]
    seed: Option<Seed>,
    /// Drop timing fields so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for multi-chain sampling.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy)]
enum Seed {
    Fixed(u64),
    Random,
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    if s == "random" {
        return Ok(Seed::Random);
    }
    s.parse().map(Seed::Fixed).map_err(|_| format!("expected an unsigned integer or `random`, got {s:?}"))
}

#[derive(Args, Clone)]
struct TripleArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
}

impl TripleArgs {
    fn triple(&self) -> lrc_core::Result<PartitionTriple> {
        PartitionTriple::new(parse_partition(&self.lambda)?, parse_partition(&self.mu)?, parse_partition(&self.nu)?)
    }
}

#[derive(Args, Clone)]
struct BodySource {
    #[arg(long, allow_hyphen_values = true, requires_all = ["mu", "nu"], conflicts_with = "body")]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Polytope JSON `{"rows", "b", "slack"}`.
    #[arg(long)]
    body: Option<PathBuf>,
    /// Which hive body of the triple.
    #[arg(long, value_enum, default_value_t = Kind::Q)]
    kind: Kind,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Hive polytope, slack 0.
    P,
    /// Relaxed outer body, slack +2.
    Q,
    /// Inner body, slack -2.
    O,
}

impl BodySource {
    fn load(&self) -> lrc_core::Result<HPolytope> {
        if let Some(path) = &self.body {
            let text = std::fs::read_to_string(path)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidBody(e.to_string()))?;
            return HPolytope::from_json(&value);
        }
        let (Some(lambda), Some(mu), Some(nu)) = (&self.lambda, &self.mu, &self.nu) else {
            return Err(Error::InvalidBody("give --lambda/--mu/--nu or --body".to_string()));
        };
        let t = TripleArgs { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone() }.triple()?;
        let body = match self.kind {
            Kind::P => Body::Hive,
            Kind::Q => Body::Outer,
            Kind::O => Body::Inner,
        };
        Ok(HPolytope::for_triple(&t, body).deduplicated())
    }

    fn describe(&self) -> Value {
        match &self.body {
            Some(p) => json!({ "body": p.display().to_string() }),
            None => json!({
                "lambda": self.lambda, "mu": self.mu, "nu": self.nu,
                "kind": self.kind_name(),
            }),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::P => "P",
            Kind::Q => "Q",
            Kind::O => "O",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count integer hives exactly.
    Exact {
        #[command(flatten)]
        triple: TripleArgs,
        /// Search-node budget.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Decide whether the coefficient is positive.
    Positivity {
        #[command(flatten)]
        triple: TripleArgs,
    },
    /// Randomized estimate of the coefficient.
    Estimate {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        chains: usize,
        /// Node budget for the attached exact count; 0 disables it.
        #[arg(long)]
        exact_budget: Option<u64>,
    },
    /// Multiphase volume estimate of a hive body or a polytope file.
    Volume {
        #[command(flatten)]
        source: BodySource,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Also run the box rejection oracle with this many samples.
        #[arg(long)]
        oracle: Option<u64>,
    },
    /// Dikin-walk samples, one CSV row per point.
    Sample {
        #[command(flatten)]
        source: BodySource,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        chains: usize,
        /// Write every walk step to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Minkowski containment and count inequality for a θ-combination.
    Logconcavity {
        /// First triple as `L;M;N`.
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        /// Weight of `t1`, as `p/q` or a decimal.
        #[arg(long, default_value = "1/2")]
        theta: String,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
    /// Fraction of random positive triples inside the shifted cone.
    Fraction {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_attempts: u64,
        /// Write the kept triples to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Inscribed ball of the shifted hive polytope.
    Ballcheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        eps_inv: String,
    },
    /// Exact lattice count of P against the estimated volume of Q.
    Volratio {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
}

/// What a subcommand hands back to the printer.
struct Outcome {
    input: Value,
    result: Value,
    diagnostics: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn new(input: Value, result: Value, text: String) -> Self {
        Outcome { input, result, diagnostics: Value::Null, text, code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 4,
        Error::Infeasible | Error::FlatBody { .. } | Error::DegenerateBody => 2,
        Error::OnBoundary { .. }
        | Error::NotPositiveDefinite
        | Error::RoundingFailure(_)
        | Error::SamplingStarved { .. }
        | Error::Unbounded => 3,
        _ => 1,
    }
}

fn parse_triple_spec(s: &str) -> lrc_core::Result<PartitionTriple> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 3 {
        return Err(Error::ParseFailure { what: "triple `L;M;N`", input: s.to_string() });
    }
    PartitionTriple::new(parse_partition(parts[0])?, parse_partition(parts[1])?, parse_partition(parts[2])?)
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn triple_input(t: &TripleArgs) -> Value {
    json!({ "lambda": t.lambda, "mu": t.mu, "nu": t.nu })
}

fn create(path: &PathBuf) -> lrc_core::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: &Cli, seed: u64) -> lrc_core::Result<Outcome> {
    match &cli.command {
        Command::Exact { triple, budget } => {
            let t = triple.triple()?;
            let count = exact_count(&t, *budget)?;
            let system = build_rhombus_system(&t);
            let mut input = triple_input(triple);
            input["budget"] = json!(budget);
            let mut out = Outcome::new(input, json!({ "count": count }), count.to_string());
            out.diagnostics = json!({ "dim": system.dim(), "rows": system.num_rows() });
            Ok(out)
        }
        Command::Positivity { triple } => {
            let positive = positivity(&triple.triple()?);
            Ok(Outcome::new(triple_input(triple), json!({ "positive": positive }), positive.to_string()))
        }
        Command::Estimate { triple, eps, delta, chains, exact_budget } => {
            let t = triple.triple()?;
            let mut opts = EstimateOptions::new(*eps, *delta, seed);
            opts.chains = *chains;
            opts.threads = cli.threads;
            if let Some(b) = exact_budget {
                opts.exact_budget = *b;
            }
            let report = estimate_lrc_with(&t, &opts)?;
            let d = &report.diagnostics;
            let mut text = format!(
                "estimate   {:.6}\nvolume_Q   {:.6}\nf          {:.6}\ns          {}\napplicable {}\npath       {}",
                report.estimate,
                report.volume_q,
                report.f,
                report.s,
                report.applicable,
                json!(d.path).as_str().unwrap_or_default()
            );
            if let Some(c) = d.exact_count {
                text.push_str(&format!("\nexact      {c}"));
            }
            if !cli.no_timing {
                text.push_str(&format!("\nelapsed_ms {}", report.elapsed_ms));
            }
            let mut input = triple_input(triple);
            input["eps"] = json!(eps);
            input["delta"] = json!(delta);
            input["chains"] = json!(chains);
            let mut out = Outcome::new(input, report.to_json(), text);
            out.diagnostics = report.diagnostics_json();
            if matches!(d.path, EstimatePath::Infeasible | EstimatePath::Flat) {
                out.code = 2;
            }
            Ok(out)
        }
        Command::Volume { source, eps, delta, oracle } => {
            let body = source.load()?;
            let rounding = rounding_for(&body)?;
            let est = estimate_volume(&body, &rounding, &VolumeParams::new(*eps, *delta, seed))?;
            let mut text = format!(
                "volume     {:.6}\nstd_error  {:.6}\nphases     {}\nalarms     {:?}",
                est.volume,
                est.std_error(),
                est.phases.len(),
                est.alarms()
            );
            let mut input = source.describe();
            input["eps"] = json!(eps);
            input["delta"] = json!(delta);
            let mut diagnostics = json!({ "dim": body.dim(), "rows": body.num_rows() });
            if let Some(samples) = oracle {
                let o = exact_volume_oracle(&body, *samples, lrc_core::rng::derive(seed, 1))?;
                text.push_str(&format!("\noracle     {:.6} ± {:.6}", o.volume, o.std_error));
                diagnostics["oracle"] = serde_json::to_value(&o).expect("oracle serializes");
                input["oracle"] = json!(samples);
            }
            let mut out = Outcome::new(input, est.to_json(), text);
            out.diagnostics = diagnostics;
            Ok(out)
        }
        Command::Sample { source, count, chains, trace } => {
            let body = source.load()?;
            let start = lrc_core::geometry::facet_center(&body)?;
            let start: Vec<f64> = start.iter().map(ratio::to_f64).collect();
            let params = WalkParams { chains: *chains, threads: cli.threads, ..WalkParams::for_body(&body, seed) };
            let walk = match trace {
                Some(path) => {
                    let mut w = create(path)?;
                    let walk = sample_uniform_traced(&body, *count, &params, &start, &mut w)?;
                    w.flush()?;
                    walk
                }
                None => sample_uniform(&body, *count, &params, &start)?,
            };
            let mut text = String::new();
            for p in &walk.points {
                let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text.pop();
            let mut input = source.describe();
            input["count"] = json!(count);
            input["chains"] = json!(chains);
            let mut out = Outcome::new(input, json!({ "points": walk.points }), text);
            out.diagnostics = json!({
                "radius": params.radius,
                "burn_in": params.burn_in,
                "thinning": params.thinning,
                "steps": walk.steps,
                "acceptance_rate": walk.acceptance_rate(),
            });
            Ok(out)
        }
        Command::Logconcavity { t1, t2, theta, pairs } => {
            let a = parse_triple_spec(t1)?;
            let b = parse_triple_spec(t2)?;
            let th = ratio::parse_rational(theta)?;
            let r = logconcavity_check(&a, &b, &th, *pairs, seed)?;
            let mut text = format!(
                "midpoint             {}\ncontainment failures {}/{}",
                r.midpoint, r.containment_failures, r.pairs
            );
            if let Some([c1, c2, cm]) = r.counts {
                text.push_str(&format!("\ncounts               {c1} {c2} {cm}"));
            }
            if let (Some(m), Some(l)) = (&r.midpoint_form, &r.literal_form) {
                text.push_str(&format!("\nmidpoint form holds  {}\nliteral form holds   {}", m.holds, l.holds));
            }
            let input = json!({ "t1": t1, "t2": t2, "theta": theta, "pairs": pairs });
            Ok(Outcome::new(input, r.to_json(), text))
        }
        Command::Fraction { n, gamma, trials, max_attempts, csv } => {
            let r = match csv {
                Some(path) => {
                    let mut w = create(path)?;
                    let r = shifted_fraction_experiment(*n, *gamma, *trials, seed, *max_attempts, Some(&mut w))?;
                    w.flush()?;
                    r
                }
                None => shifted_fraction_experiment(*n, *gamma, *trials, seed, *max_attempts, None)?,
            };
            let text = format!(
                "fraction   {:.4} ± {:.4}\naccepted   {}\napplicable {}\nattempts   {}",
                r.fraction, r.std_error, r.accepted, r.applicable, r.attempts
            );
            let input = json!({ "n": n, "gamma": gamma, "trials": trials, "max_attempts": max_attempts });
            Ok(Outcome::new(input, r.to_json(), text))
        }
        Command::Ballcheck { n, eps_inv } => {
            let k = ratio::parse_rational(eps_inv)?;
            let r = inscribed_ball_check(*n, &k)?;
            let text = format!(
                "inradius        {:.6}\nclaimed radius  {:.6}\nratio           {:.6}\nquadratic slack {}",
                r.inradius, r.claimed_radius, r.ratio, r.quadratic_min_slack
            );
            Ok(Outcome::new(json!({ "n": n, "eps_inv": eps_inv }), r.to_json(), text))
        }
        Command::Volratio { triple, eps, delta } => {
            let r = volume_ratio_check(&triple.triple()?, *eps, *delta, seed)?;
            let text = format!(
                "count  {}\nvolume {:.6} ± {:.6}\nratio  {:.6} (bound {:.3})",
                r.exact_count, r.volume, r.volume_std_error, r.ratio, r.upper_bound
            );
            let mut input = triple_input(triple);
            input["eps"] = json!(eps);
            input["delta"] = json!(delta);
            Ok(Outcome::new(input, r.to_json(), text))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Exact { .. } => "exact",
        Command::Positivity { .. } => "positivity",
        Command::Estimate { .. } => "estimate",
        Command::Volume { .. } => "volume",
        Command::Sample { .. } => "sample",
        Command::Logconcavity { .. } => "logconcavity",
        Command::Fraction { .. } => "fraction",
        Command::Ballcheck { .. } => "ballcheck",
        Command::Volratio { .. } => "volratio",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = match cli.seed {
        Some(Seed::Fixed(s)) => s,
        Some(Seed::Random) => rand::random(),
        None => DEFAULT_SEED,
    };
    let mut out = match run(&cli, seed) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            if cli.json {
                let envelope = json!({ "command": command_name(&cli.command), "error": e.to_string() });
                println!("{envelope}");
            }
            return ExitCode::from(exit_code(&e));
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let printed = if cli.json {
        if cli.no_timing {
            strip_timing(&mut out.result);
            strip_timing(&mut out.diagnostics);
        }
        out.input["seed"] = json!(seed);
        let envelope = json!({
            "command": command_name(&cli.command),
            "input": out.input,
            "result": out.result,
            "diagnostics": out.diagnostics,
        });
        serde_json::to_writer_pretty(&mut lock, &envelope).map_err(io::Error::from).and_then(|_| writeln!(lock))
    } else {
        writeln!(lock, "{}", out.text)
    };
    if printed.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(out.code)
}
