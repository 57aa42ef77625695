//! `semiconv`: weighted matching, engine benchmarks, polynomial and series
//! utilities, image convolution and the self-test runner.
//!
//! Exit codes: 0 on success, 1 when a check or computation fails, 2 for
//! usage and input errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use semiconv::algebra::{BoolRing, NatCount, Rational, Real64, Scalar};
use semiconv::bench::{run_bench, BenchConfig, BenchError};
use semiconv::conv::{conv2d_with, load_pgm, save_pgm, StandardKernel};
use semiconv::gen::DEFAULT_SEED;
use semiconv::par::Exec;
use semiconv::poly::{ode_series, parse_poly};
use semiconv::regexp::{
    bench_fixtures, index_str, mk_examples, parse_program, reinterpret, RegExp,
};
use semiconv::selftest::{self, SelftestConfig, SUITES};
use semiconv::trie::Trie;

#[derive(Parser)]
#[command(
    name = "semiconv",
    version,
    about = "Generalized convolution over semirings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight of a word in a language.
    Match(MatchArgs),
    /// Time both matching engines on the fixture languages; TSV to stdout.
    Bench(BenchArgs),
    /// Polynomial arithmetic.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Coefficients of an ODE-defined power series as `index<TAB>coefficient`.
    Series(SeriesArgs),
    /// Convolve a PGM image with a standard kernel.
    Image(ImageArgs),
    /// Run the oracle and property suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SemiringArg {
    Bool,
    Nat,
    Real,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Regexp,
    Trie,
}

#[derive(clap::Args)]
#[command(group(clap::ArgGroup::new("language").required(true).args(["expr", "fixture"])))]
struct MatchArgs {
    /// Expression text, e.g. "'a'^* * 'a'^*" or "s = 1 + 'a' * s * 'b'; s".
    #[arg(long)]
    expr: Option<String>,
    /// Named language: a, b, atoz, fishy, anbn, dyck, or a bench fixture.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, value_enum, default_value = "bool")]
    semiring: SemiringArg,
    #[arg(long, value_enum, default_value = "trie")]
    engine: EngineArg,
    /// After matching, print forced trie nodes down to this depth.
    #[arg(long, value_name = "DEPTH")]
    dump_trie: Option<usize>,
    /// The word to weigh (may be empty).
    word: String,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Comma-separated fixture names; all when omitted.
    #[arg(long, value_delimiter = ',')]
    fixtures: Vec<String>,
    #[arg(long, default_value_t = 100)]
    length: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Per-cell limit; slower cells are reported as TIMEOUT.
    #[arg(long, default_value_t = 60_000)]
    timeout_ms: u64,
    /// Run fixture cells concurrently (each timed query stays sequential).
    #[arg(long)]
    parallel: bool,
}

#[derive(Subcommand)]
enum PolyCommand {
    /// Expand `p^n`.
    Pow {
        #[arg(long)]
        p: String,
        #[arg(long)]
        n: u64,
    },
    /// Evaluate a polynomial at rational points, e.g. `--at x=1,y=1/2`.
    Eval {
        #[arg(long)]
        p: String,
        #[arg(long, value_delimiter = ',')]
        at: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesName {
    Sin,
    Cos,
    Exp,
}

#[derive(clap::Args)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    name: SeriesName,
    #[arg(long, default_value_t = 16)]
    count: usize,
}

#[derive(clap::Args)]
struct ImageArgs {
    /// identity, blur, sharpen or edge.
    #[arg(long)]
    kernel: String,
    /// Compute rows on one thread.
    #[arg(long)]
    sequential: bool,
    input: PathBuf,
    output: PathBuf,
}

#[derive(clap::Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random cases per law suite.
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Run only these suites (repeatable).
    #[arg(long)]
    suite: Vec<String>,
    /// Run suites one after another.
    #[arg(long)]
    sequential: bool,
    /// List suite names and exit.
    #[arg(long)]
    list: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn failed(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Match(a) => match a.semiring {
            SemiringArg::Bool => cmd_match::<BoolRing>(&a),
            SemiringArg::Nat => cmd_match::<NatCount>(&a),
            SemiringArg::Real => cmd_match::<Real64>(&a),
            SemiringArg::Rational => cmd_match::<Rational>(&a),
        },
        Command::Bench(a) => cmd_bench(&a),
        Command::Poly(p) => cmd_poly(&p),
        Command::Series(a) => cmd_series(&a),
        Command::Image(a) => cmd_image(&a),
        Command::Selftest(a) => cmd_selftest(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("semiconv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn lookup_fixture<B: Scalar>(name: &str) -> Option<RegExp<B>> {
    let ex = mk_examples::<B>();
    let named = match name {
        "a" => Some(ex.a),
        "b" => Some(ex.b),
        "atoz" => Some(ex.atoz),
        "fishy" => Some(ex.fishy),
        "anbn" => Some(ex.anbn),
        "dyck" => Some(ex.dyck),
        _ => None,
    };
    named.or_else(|| {
        bench_fixtures::<B>()
            .into_iter()
            .find(|f| f.name == name)
            .map(|f| f.expr)
    })
}

fn cmd_match<B: Scalar>(a: &MatchArgs) -> Result<(), Failure> {
    let expr: RegExp<B> = match (&a.expr, &a.fixture) {
        (Some(src), _) => parse_program(src).map_err(usage)?,
        (None, Some(name)) => {
            lookup_fixture(name).ok_or_else(|| usage(format!("unknown fixture {name:?}")))?
        }
        (None, None) => return Err(usage("one of --expr or --fixture is required")),
    };
    match a.engine {
        EngineArg::Regexp => {
            let w = index_str(&expr, &a.word).map_err(failed)?;
            println!("{w}");
        }
        EngineArg::Trie => {
            let t: Trie<B> = reinterpret(&expr).map_err(failed)?;
            let w = t.index_str(&a.word).map_err(failed)?;
            println!("{w}");
            if let Some(depth) = a.dump_trie {
                print!("{}", t.dump(depth));
            }
        }
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    let cfg = BenchConfig {
        fixtures: a.fixtures.clone(),
        length: a.length,
        reps: a.reps,
        timeout: Duration::from_millis(a.timeout_ms),
        exec: if a.parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        },
    };
    let report = run_bench(&cfg).map_err(|e| match e {
        BenchError::UnknownFixture(_) => usage(e),
        _ => failed(e),
    })?;
    print!("{}", report.to_tsv());
    Ok(())
}

fn cmd_poly(cmd: &PolyCommand) -> Result<(), Failure> {
    match cmd {
        PolyCommand::Pow { p, n } => {
            let p = parse_poly::<Rational>(p).map_err(usage)?;
            println!("{}", p.pow(*n));
        }
        PolyCommand::Eval { p, at } => {
            let p = parse_poly::<Rational>(p).map_err(usage)?;
            let mut env = BTreeMap::new();
            for binding in at {
                let (name, value) = binding
                    .split_once('=')
                    .ok_or_else(|| usage(format!("expected name=value, got {binding:?}")))?;
                let v = Rational::parse_scalar(value).map_err(usage)?;
                env.insert(name.trim().to_string(), v);
            }
            println!("{}", p.eval(&env).map_err(usage)?);
        }
    }
    Ok(())
}

fn cmd_series(a: &SeriesArgs) -> Result<(), Failure> {
    let ode = ode_series::<Rational>();
    let s = match a.name {
        SeriesName::Sin => ode.sin,
        SeriesName::Cos => ode.cos,
        SeriesName::Exp => ode.exp,
    };
    print!("{}", s.dump(a.count).map_err(failed)?);
    Ok(())
}

fn cmd_image(a: &ImageArgs) -> Result<(), Failure> {
    let kernel = StandardKernel::by_name(&a.kernel)
        .ok_or_else(|| usage(format!("unknown kernel {:?}", a.kernel)))?;
    let img = load_pgm(&a.input).map_err(failed)?;
    let exec = if a.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let out = conv2d_with(exec, &img, &kernel.kernel()).map_err(failed)?;
    save_pgm(&a.output, &out).map_err(failed)?;
    Ok(())
}

fn cmd_selftest(a: &SelftestArgs) -> Result<(), Failure> {
    if a.list {
        for (name, _) in SUITES {
            println!("{name}");
        }
        return Ok(());
    }
    for s in &a.suite {
        if !SUITES.iter().any(|(n, _)| n == s) {
            return Err(usage(format!("unknown suite {s:?}")));
        }
    }
    let only: Vec<&str> = a.suite.iter().map(String::as_str).collect();
    let cfg = SelftestConfig {
        seed: a.seed,
        cases: a.cases,
    };
    let exec = if a.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let reports = selftest::run(cfg, exec, &only);
    let mut bad = 0;
    for r in &reports {
        println!("{r}");
        for f in &r.failures {
            println!("\t{f}");
        }
        if !r.passed() {
            bad += 1;
        }
    }
    println!(
        "seed {}: {} of {} suites passed",
        a.seed,
        reports.len() - bad,
        reports.len()
    );
    if bad > 0 {
        return Err(failed(format!("{bad} suite(s) failed")));
    }
    Ok(())
}
