//! Thin command-line front end over the library. Reproducible by
//! construction: the same argv and seed print the same bytes.

use carshare::adversaries::{
    exhaustive_worst, theorem6, theorem7, theorem8, theorem9, AdversaryError, AdversaryOutcome,
    ExhaustiveError, Theorem, DEFAULT_COIN_LIMIT,
};
use carshare::fixtures;
use carshare::harness::{
    evaluate, exact_expectation, monte_carlo, sweep_csv_header, sweep_row_csv, EvalError, EvalReport,
    SweepRow,
};
use carshare::model::Instance;
use carshare::oracle::opt_dp;
use carshare::policies::{Policy, PolicyId};
use carshare::rat::{format_rat, parse_rat, rat, rat_to_f64, Rat};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const POLICY_HELP: &str = "Policies: gba (stage, deterministic), argba (request, deterministic), \
prgba (stage, randomized), prargba (request, randomized), agba (stage, randomized, load-adaptive).";

const THEOREM_HELP: &str = "Adversaries: 6 = stage flood vs deterministic stage policies; \
7 = request flood vs deterministic request policies; 8 = expectation-branching request flood \
(any request policy); 9 = load-bounded stage flood with parameter R (any stage policy).";

#[derive(Parser)]
#[command(
    name = "carshare",
    about = "Two-location car-sharing scheduling lab",
    long_about = format!("Two-location car-sharing scheduling lab.\n\n{POLICY_HELP}\n\n{THEOREM_HELP}"),
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one policy on an instance file and print the evaluation report.
    Run(RunArgs),
    /// Print the offline optimum of an instance file.
    Opt(OptArgs),
    /// Play an adversary construction against a policy.
    Adversary(AdversaryArgs),
    /// Brute-force the worst stage-count instance for a policy.
    Exhaustive(ExhaustiveArgs),
    /// Tabulate adversary ratios over a range of k (and R).
    Sweep(SweepArgs),
    /// Run the acceptance battery, or one targeted Monte Carlo coherence
    /// check when --alg/--k/--trials/--seed are given.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Policy id (see --help for the list)
    #[arg(long)]
    alg: String,
    /// Path to an instance JSON file
    #[arg(long)]
    instance: PathBuf,
    /// Seed for randomized policies (required for prgba/prargba/agba)
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate the exact expectation over all coin outcomes instead of one
    /// realized run (no seed needed)
    #[arg(long)]
    expected: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct OptArgs {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Which construction to play: 6, 7, 8 or 9
    #[arg(long)]
    theorem: u8,
    #[arg(long)]
    alg: String,
    #[arg(long)]
    k: u64,
    /// Load bound for --theorem 9, as p/q or a decimal (exact), in [1, 2]
    #[arg(long = "R")]
    r: Option<String>,
    /// Accepted for interface symmetry; adversary profits are exact
    /// expectations and consume no seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ExhaustiveArgs {
    #[arg(long)]
    alg: String,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    stages: usize,
    /// Per-direction demand cap of the searched instances
    #[arg(long)]
    cap: u64,
    /// Refuse the search when (cap+1)^(2*stages) exceeds this
    #[arg(long)]
    budget: u128,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    alg: String,
    #[arg(long)]
    theorem: u8,
    #[arg(long, default_value_t = 2)]
    k_min: u64,
    #[arg(long)]
    k_max: u64,
    /// Load bounds for --theorem 9 (repeatable); defaults to 1, 3/2, 2.
    /// Pairs where R*k is not an integer are skipped with a note.
    #[arg(long = "R")]
    r: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    alg: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    fn budget(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Run(args) => run(args),
        Cmd::Opt(args) => opt(args),
        Cmd::Adversary(args) => adversary(args),
        Cmd::Exhaustive(args) => exhaustive(args),
        Cmd::Sweep(args) => sweep(args),
        Cmd::Verify(args) => verify(args),
    }
}

fn parse_policy(s: &str) -> Result<PolicyId, CliError> {
    s.parse::<PolicyId>().map_err(|e| CliError::validation(e.to_string()))
}

fn load_instance(path: &PathBuf) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read instance file {}: {e}", path.display())))?;
    Instance::from_json(&text).map_err(|e| CliError::validation(e.to_string()))
}

fn print_report(report: &EvalReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            println!("{}", EvalReport::csv_header());
            println!("{}", report.to_csv_row());
        }
    }
    if let Some(note) = &report.note {
        eprintln!("note: {note}");
    }
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let policy = parse_policy(&args.alg)?;
    let instance = load_instance(&args.instance)?;
    let report = if args.expected {
        exact_expectation(policy, &instance, DEFAULT_COIN_LIMIT)
            .map_err(|e| CliError::budget(e.to_string()))?
    } else {
        evaluate(policy, &instance, args.seed).map_err(|e| match e {
            EvalError::MissingSeed(_) => CliError::validation(e.to_string()),
            EvalError::CoinBudget(_) => CliError::budget(e.to_string()),
        })?
    };
    print_report(&report, args.format);
    Ok(())
}

fn opt(args: OptArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let res = opt_dp(&instance);
    let stages: Vec<_> = res.per_stage().iter().map(|(ol, or, of)| json!({"ol": ol, "or": or, "of": of})).collect();
    let out = json!({
        "k": instance.k(),
        "digest": instance.digest(),
        "profit": res.profit,
        "schedule": stages,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("opt result serializes"));
    Ok(())
}

fn adversary_to_json(out: &AdversaryOutcome, theorem: u8, alg: PolicyId, r: Option<&Rat>) -> serde_json::Value {
    json!({
        "theorem": theorem,
        "policy": alg.name(),
        "k": out.instance.k(),
        "R": r.map(format_rat),
        "instance": serde_json::from_str::<serde_json::Value>(&out.instance.to_json()).unwrap(),
        "alg": format_rat(&out.alg_profit),
        "opt": out.opt_profit,
        "ratio": format_rat(&out.ratio),
        "ratio_decimal": rat_to_f64(&out.ratio),
    })
}

fn print_adversary(out: &AdversaryOutcome, theorem: u8, alg: PolicyId, r: Option<&Rat>, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&adversary_to_json(out, theorem, alg, r)).unwrap())
        }
        Format::Csv => {
            println!("theorem,policy,k,R,alg,opt,ratio,ratio_decimal");
            println!(
                "{},{},{},{},{},{},{},{}",
                theorem,
                alg.name(),
                out.instance.k(),
                r.map(format_rat).unwrap_or_default(),
                format_rat(&out.alg_profit),
                out.opt_profit,
                format_rat(&out.ratio),
                rat_to_f64(&out.ratio),
            );
        }
    }
}

fn map_adversary_err(e: AdversaryError) -> CliError {
    match e {
        AdversaryError::CoinBudget(_) => CliError::budget(e.to_string()),
        _ => CliError::validation(e.to_string()),
    }
}

fn adversary(args: AdversaryArgs) -> Result<(), CliError> {
    let policy_id = parse_policy(&args.alg)?;
    if args.k < 2 {
        return Err(CliError::validation(format!("--k must be at least 2, got {}", args.k)));
    }
    let theorem = Theorem::from_number(args.theorem)
        .ok_or_else(|| CliError::validation(format!("--theorem must be 6, 7, 8 or 9, got {}", args.theorem)))?;
    let built = policy_id.build();
    let r = args
        .r
        .as_deref()
        .map(|s| parse_rat(s).map_err(|e| CliError::validation(format!("--R: {e}"))))
        .transpose()?;
    let outcome = match (theorem, &built) {
        (Theorem::T6, Policy::Stage(p)) => theorem6(p.as_ref(), args.k).map_err(map_adversary_err)?,
        (Theorem::T7, Policy::Request(p)) => theorem7(p.as_ref(), args.k).map_err(map_adversary_err)?,
        (Theorem::T8, Policy::Request(p)) => {
            theorem8(p.as_ref(), args.k, DEFAULT_COIN_LIMIT).map_err(map_adversary_err)?
        }
        (Theorem::T9, Policy::Stage(p)) => {
            let r = r.clone().unwrap_or_else(|| rat(2, 1));
            theorem9(p.as_ref(), args.k, &r, DEFAULT_COIN_LIMIT).map_err(map_adversary_err)?
        }
        (Theorem::T6 | Theorem::T9, Policy::Request(_)) => {
            return Err(CliError::validation(format!(
                "theorem {} drives stage policies; `{}` answers per request (try --theorem 7 or 8)",
                theorem.number(),
                policy_id
            )))
        }
        (Theorem::T7 | Theorem::T8, Policy::Stage(_)) => {
            return Err(CliError::validation(format!(
                "theorem {} drives request policies; `{}` decides whole stages (try --theorem 6 or 9)",
                theorem.number(),
                policy_id
            )))
        }
    };
    let r_for_output = if theorem == Theorem::T9 { Some(r.unwrap_or_else(|| rat(2, 1))) } else { None };
    print_adversary(&outcome, theorem.number(), policy_id, r_for_output.as_ref(), args.format);
    Ok(())
}

fn exhaustive(args: ExhaustiveArgs) -> Result<(), CliError> {
    let policy_id = parse_policy(&args.alg)?;
    if args.stages == 0 {
        return Err(CliError::validation("--stages must be positive"));
    }
    if args.budget == 0 {
        return Err(CliError::validation("--budget must be positive"));
    }
    let built = policy_id.build();
    let out = exhaustive_worst(&built, args.k, args.stages, args.cap, args.budget, DEFAULT_COIN_LIMIT)
        .map_err(|e| match e {
            ExhaustiveError::Budget(b) => CliError::budget(b.to_string()),
            ExhaustiveError::CoinBudget(c) => CliError::budget(c.to_string()),
        })?;
    print_adversary(&out, 0, policy_id, None, args.format);
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let policy_id = parse_policy(&args.alg)?;
    if args.k_min < 2 || args.k_max < args.k_min {
        return Err(CliError::validation(format!(
            "need 2 <= --k-min <= --k-max, got {}..{}",
            args.k_min, args.k_max
        )));
    }
    let theorem = Theorem::from_number(args.theorem)
        .ok_or_else(|| CliError::validation(format!("--theorem must be 6, 7, 8 or 9, got {}", args.theorem)))?;
    let rs: Vec<Rat> = if args.r.is_empty() {
        vec![rat(1, 1), rat(3, 2), rat(2, 1)]
    } else {
        args.r
            .iter()
            .map(|s| parse_rat(s).map_err(|e| CliError::validation(format!("--R: {e}"))))
            .collect::<Result<_, _>>()?
    };
    let built = policy_id.build();
    let mut rows: Vec<SweepRow> = Vec::new();
    for k in args.k_min..=args.k_max {
        match (theorem, &built) {
            (Theorem::T6, Policy::Stage(p)) => {
                let out = theorem6(p.as_ref(), k).map_err(map_adversary_err)?;
                rows.push(SweepRow { policy: policy_id, k, r: None, ratio: out.ratio });
            }
            (Theorem::T7, Policy::Request(p)) => {
                let out = theorem7(p.as_ref(), k).map_err(map_adversary_err)?;
                rows.push(SweepRow { policy: policy_id, k, r: None, ratio: out.ratio });
            }
            (Theorem::T8, Policy::Request(p)) => {
                let out = theorem8(p.as_ref(), k, DEFAULT_COIN_LIMIT).map_err(map_adversary_err)?;
                rows.push(SweepRow { policy: policy_id, k, r: None, ratio: out.ratio });
            }
            (Theorem::T9, Policy::Stage(p)) => {
                for r in &rs {
                    if !(r * carshare::rat::rat_u64(k)).is_integer() {
                        eprintln!("note: skipping k={k}, R={} (R*k not an integer)", format_rat(r));
                        continue;
                    }
                    let out = theorem9(p.as_ref(), k, r, DEFAULT_COIN_LIMIT).map_err(map_adversary_err)?;
                    rows.push(SweepRow { policy: policy_id, k, r: Some(r.clone()), ratio: out.ratio });
                }
            }
            _ => {
                return Err(CliError::validation(format!(
                    "theorem {} does not drive policy `{}`",
                    theorem.number(),
                    policy_id
                )))
            }
        }
    }
    match args.format {
        Format::Csv => {
            println!("{}", sweep_csv_header());
            for row in &rows {
                println!("{}", sweep_row_csv(row));
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "policy": row.policy.name(),
                        "k": row.k,
                        "R": row.r.as_ref().map(format_rat),
                        "ratio": format_rat(&row.ratio),
                        "ratio_decimal": rat_to_f64(&row.ratio),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    match (args.alg, args.k) {
        (None, None) => {
            let outcomes = carshare::acceptance::run_all();
            let mut ok = true;
            for o in &outcomes {
                println!("{}", o.line());
                ok &= o.passed;
            }
            if ok {
                println!("all {} criteria passed", outcomes.len());
                Ok(())
            } else {
                Err(CliError::validation("acceptance criteria failed"))
            }
        }
        (Some(alg), Some(k)) => {
            let policy = parse_policy(&alg)?;
            if !policy.is_randomized() {
                return Err(CliError::validation(format!(
                    "`{policy}` is deterministic; the targeted check needs a randomized policy"
                )));
            }
            let trials = args.trials.unwrap_or(100_000);
            let seed = args
                .seed
                .ok_or_else(|| CliError::validation(format!("policy `{policy}` is randomized: --seed is required")))?;
            let name = fixtures::fixture_for(policy, k).ok_or_else(|| {
                CliError::validation(format!("no bundled fixture for policy `{policy}` with k={k}"))
            })?;
            let instance = fixtures::load(name).expect("registry names resolve");
            let exact = exact_expectation(policy, &instance, DEFAULT_COIN_LIMIT)
                .map_err(|e| CliError::budget(e.to_string()))?;
            let exact_mean = rat_to_f64(&parse_rat(&exact.alg).unwrap());
            let mc = monte_carlo(policy, &instance, trials, seed);
            let within_se = (mc.mean - exact_mean).abs() <= 3.0 * mc.std_error;
            let within_ci = mc.ci99_lo <= exact_mean && exact_mean <= mc.ci99_hi;
            let out = json!({
                "policy": policy.name(),
                "fixture": name,
                "trials": trials,
                "seed": seed,
                "exact": exact.alg,
                "exact_decimal": exact_mean,
                "mean": mc.mean,
                "std_error": mc.std_error,
                "ci99": [mc.ci99_lo, mc.ci99_hi],
                "within_3se": within_se,
                "within_ci99": within_ci,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            if within_se {
                Ok(())
            } else {
                Err(CliError::validation("Monte Carlo mean outside 3 standard errors of the exact expectation"))
            }
        }
        _ => Err(CliError::validation("targeted verify needs both --alg and --k (or neither for the full battery)")),
    }
}
