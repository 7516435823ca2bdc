mod output;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use fairgame::arith::classify_odd;
use fairgame::games::{simulate_game, win_probability};
use fairgame::ternary::{
    c3_contains, c3_density, c3_list, count_f3_ellipsoid, count_lorentz, count_max_coordinate,
    count_s3_ellipsoid, from_lorentz, games_with_max_coordinate, to_lorentz, LorentzPoint,
};
use fairgame::tree::{self, EnumerationBound};
use fairgame::verify::{self, Suite, SuiteConfig};
use fairgame::{Exec, GameBag, SolutionVector};
use num_bigint::BigInt;
use serde_json::{json, Value};

use output::{ints, Format, Sink};

#[derive(Parser)]
#[command(
    name = "fairgame",
    version,
    about = "Fair matching games: trees, roots and counts"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads; without it everything runs on one thread.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Breadth-first walk of a solution tree.
    Enumerate(EnumerateArgs),
    /// Roots extending a tuple `a` of n - 3 coordinates.
    Roots {
        #[arg(long)]
        n: usize,
        /// Comma-separated tail, e.g. `2` or `-1,3`.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<IntList>,
    },
    /// Membership, listing and density of C_3.
    #[command(subcommand)]
    C3(C3Command),
    /// Number of 3-color games with a given largest coordinate.
    CountMax { c: u64 },
    /// The Lorentzian lattice W.
    #[command(subcommand)]
    Lorentz(LorentzCommand),
    /// Monte Carlo estimate of the win probability of a bag.
    Simulate {
        /// Comma-separated ball counts.
        bag: IntList,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run an invariant suite; exits 1 on the first counterexample.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Start vertex; defaults to the zero game.
    #[arg(long, allow_hyphen_values = true)]
    root: Option<IntList>,
    #[arg(long, group = "bound")]
    depth: Option<u32>,
    #[arg(long, group = "bound")]
    height: Option<u64>,
    #[arg(long, group = "bound")]
    norm: Option<u64>,
}

#[derive(Subcommand)]
enum C3Command {
    Check { c: u64 },
    List { limit: u64 },
    Density { limit: u64 },
}

#[derive(Subcommand)]
enum LorentzCommand {
    /// |W(k)| and the corresponding solution counts.
    Count { k: u64 },
    /// Image of a 3-color solution.
    Map {
        #[arg(allow_hyphen_values = true)]
        x: IntList,
    },
    /// Solution class of a point of W with odd second coordinate.
    Inverse {
        #[arg(allow_hyphen_values = true)]
        w: IntList,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    #[arg(long, default_value_t = 10_000)]
    height: u64,
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long, default_value_t = 3)]
    radius: i64,
    #[arg(long, default_value = "3,4,5")]
    colors: IntList,
}

#[derive(Clone, Debug)]
struct IntList(Vec<BigInt>);

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().is_empty() {
            return Ok(IntList(Vec::new()));
        }
        s.split(',')
            .map(|p| BigInt::from_str(p.trim()).map_err(|_| format!("not an integer: {p:?}")))
            .collect::<Result<_, _>>()
            .map(IntList)
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<fairgame::Error> for Failure {
    fn from(e: fairgame::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn vertex_record(node: &tree::Node) -> Value {
    let v = &node.vector;
    json!({
        "kind": "vertex",
        "coords": ints(v.coords()),
        "depth": node.depth.to_string(),
        "height": v.height().to_string(),
        "norm_sq": v.norm_sq().to_string(),
        "fair": v.is_fair(),
        "sign": v.sign().as_str(),
    })
}

fn enumerate(args: &EnumerateArgs, exec: Exec, out: &mut Sink) -> Outcome {
    if args.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let root = match &args.root {
        None => SolutionVector::zero(args.n),
        Some(IntList(coords)) => {
            if coords.len() != args.n {
                return Err(usage(format!(
                    "root has {} coordinates, expected {}",
                    coords.len(),
                    args.n
                )));
            }
            SolutionVector::new(coords.clone())?
        }
    };
    let bound = match (args.depth, args.height, args.norm) {
        (Some(d), None, None) => EnumerationBound::max_depth(d),
        (None, Some(h), None) => EnumerationBound::max_height(h),
        (None, None, Some(k)) => EnumerationBound::max_norm(k),
        _ => {
            return Err(usage(
                "exactly one of --depth, --height, --norm is required",
            ))
        }
    };
    if exec == Exec::Parallel {
        for node in tree::collect_component(&root, &bound, exec) {
            out.emit(vertex_record(&node))?;
        }
    } else {
        for node in tree::enumerate_component(&root, bound) {
            out.emit(vertex_record(&node))?;
        }
    }
    Ok(())
}

fn roots(n: usize, a: Option<&IntList>, out: &mut Sink) -> Outcome {
    if n < 3 {
        return Err(usage("root scans need --n at least 3"));
    }
    let a = a.map(|l| l.0.clone()).unwrap_or_default();
    if a.len() != n - 3 {
        return Err(usage(format!("--a must have n - 3 = {} entries", n - 3)));
    }
    for r in tree::find_roots_extending(&a) {
        let w = &r.witness;
        out.emit(json!({
            "kind": "root",
            "coords": ints(r.root.coords()),
            "sign": r.root.sign().as_str(),
            "height": r.root.height().to_string(),
            "m": w.m.to_string(),
            "b": w.b.to_string(),
            "c": w.c.to_string(),
            "form": w.form.to_string(),
        }))?;
    }
    Ok(())
}

fn c3(cmd: &C3Command, exec: Exec, out: &mut Sink) -> Outcome {
    match *cmd {
        C3Command::Check { c } => {
            let n = c
                .checked_mul(2)
                .and_then(|d| d.checked_add(1))
                .ok_or_else(|| usage("c too large"))?;
            let class = classify_odd(n)?;
            out.emit(json!({
                "kind": "c3_check",
                "c": c.to_string(),
                "member": c3_contains(c),
                "modulus": n.to_string(),
                "class": class.class.as_str(),
            }))
        }
        C3Command::List { limit } => {
            for c in c3_list(limit, exec) {
                out.emit(json!({"kind": "c3_member", "c": c.to_string()}))?;
            }
            Ok(())
        }
        C3Command::Density { limit } => {
            let d = c3_density(limit, exec)?;
            out.emit(json!({
                "kind": "c3_density",
                "limit": limit.to_string(),
                "count": d.numer().to_string(),
                "density": format!("{}/{}", d.numer(), d.denom()),
                "approx": format!("{:.6}", *d.numer() as f64 / *d.denom() as f64),
            }))
        }
    }
}

fn count_max(c: u64, out: &mut Sink) -> Outcome {
    let formula = count_max_coordinate(c)?;
    let games = games_with_max_coordinate(c)?;
    out.emit(json!({
        "kind": "count_max",
        "c": c.to_string(),
        "formula": formula.to_string(),
        "listed": games.len().to_string(),
        "games": games.iter().map(|g| ints(g.triple())).collect::<Vec<_>>(),
    }))
}

fn triple(list: &IntList, what: &str) -> Result<[BigInt; 3], Failure> {
    <[BigInt; 3]>::try_from(list.0.clone())
        .map_err(|_| usage(format!("{what} needs exactly three integers")))
}

fn lorentz(cmd: &LorentzCommand, exec: Exec, out: &mut Sink) -> Outcome {
    match cmd {
        LorentzCommand::Count { k } => out.emit(json!({
            "kind": "lorentz_count",
            "k": k.to_string(),
            "points": count_lorentz(*k, exec).to_string(),
            "s3": count_s3_ellipsoid(*k, exec).to_string(),
            "f3": count_f3_ellipsoid(*k, exec).to_string(),
        })),
        LorentzCommand::Map { x } => {
            let v = SolutionVector::new(triple(x, "map")?.to_vec())?;
            let w = to_lorentz(&v)?;
            out.emit(json!({
                "kind": "lorentz_point",
                "x": ints(v.coords()),
                "w": ints(w.coords()),
                "norm_sq": w.norm_sq().to_string(),
            }))
        }
        LorentzCommand::Inverse { w } => {
            let w = LorentzPoint::new(triple(w, "inverse")?)?;
            let v = from_lorentz(&w)?;
            out.emit(json!({
                "kind": "lorentz_point",
                "x": ints(v.coords()),
                "w": ints(w.coords()),
                "norm_sq": w.norm_sq().to_string(),
            }))
        }
    }
}

fn simulate(bag: &IntList, trials: u64, seed: u64, exec: Exec, out: &mut Sink) -> Outcome {
    let bag = GameBag::from_ints(&bag.0)?;
    let exact = win_probability(&bag)?;
    let sim = simulate_game(&bag, trials, seed, exec)?;
    out.emit(json!({
        "kind": "simulation",
        "bag": bag.counts().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "trials": sim.trials.to_string(),
        "wins": sim.wins.to_string(),
        "seed": seed.to_string(),
        "rate": format!("{:.6}", sim.rate()),
        "exact": exact.to_string(),
    }))
}

fn verify_cmd(args: &VerifyArgs, exec: Exec, out: &mut Sink) -> Outcome {
    let suites = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse::<Suite>().map_err(Failure::Usage)?]
    };
    let colors = args
        .colors
        .0
        .iter()
        .map(|c| usize::try_from(c).ok().filter(|&n| n >= 3))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| usage("--colors entries must be at least 3"))?;
    let config = SuiteConfig {
        height: args.height,
        colors,
        radius: args.radius,
        limit: args.limit,
    };
    let mut failed = false;
    for suite in suites {
        let start = std::time::Instant::now();
        let report = verify::run(suite, &config, exec)?;
        log::info!(
            "{suite}: {} checks in {:?}",
            report.checked,
            start.elapsed()
        );
        let mut rec = json!({
            "kind": "verify",
            "suite": suite.name(),
            "checked": report.checked.to_string(),
            "passed": report.passed(),
        });
        if let Some(v) = &report.violation {
            rec["subject"] = json!(v.subject);
            rec["detail"] = json!(v.detail);
            failed = true;
        }
        out.emit(rec)?;
        if failed {
            break;
        }
    }
    if failed {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn run(cli: &Cli, exec: Exec) -> Outcome {
    let mut out = Sink::new(cli.format);
    let result = match &cli.command {
        Command::Enumerate(args) => enumerate(args, exec, &mut out),
        Command::Roots { n, a } => roots(*n, a.as_ref(), &mut out),
        Command::C3(cmd) => c3(cmd, exec, &mut out),
        Command::CountMax { c } => count_max(*c, &mut out),
        Command::Lorentz(cmd) => lorentz(cmd, exec, &mut out),
        Command::Simulate { bag, trials, seed } => simulate(bag, *trials, *seed, exec, &mut out),
        Command::Verify(args) => verify_cmd(args, exec, &mut out),
    };
    out.finish()?;
    result
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("FAIRGAME_LOG")).init();
    let cli = Cli::parse();
    let outcome = match cli.jobs {
        None => run(&cli, Exec::Sequential),
        Some(0) => Err(usage("--jobs must be positive")),
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| run(&cli, Exec::Parallel)),
            Err(e) => Err(usage(format!("cannot start {jobs} workers: {e}"))),
        },
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
