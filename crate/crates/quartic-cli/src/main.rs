//! Command-line front end: residue-symbol calculator, representation
//! finder, Lucas evaluator, and the theorem-scan driver.
//!
//! Exit codes: 0 = success with zero counterexamples; 1 = usage or input
//! error; 2 = a scan found a counterexample (an applicable, non-explore
//! record whose congruence failed).

use std::io::Write;

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use quartic::gaussian::{GaussInt, OddGauss, COORD_LIMIT};
use quartic::modular::lucas_uv_mod;
use quartic::represent::{quad_reps, two_squares};
use quartic::symbols::{jacobi2, quartic_jacobi};
use quartic::verify::{run_suite, CheckId, RunConfig};

#[derive(Parser)]
#[command(
    name = "quartic",
    version,
    about = "Quartic/quadratic residue symbols, prime representations, Lucas sequences, and residuacity-criterion scans"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a residue symbol.
    Symbol {
        #[command(subcommand)]
        which: SymbolCmd,
    },
    /// Normalized representations of a prime by quadratic forms.
    Represent {
        #[command(subcommand)]
        which: RepresentCmd,
    },
    /// Lucas pair U_n, V_n of U(b,c), V(b,c) modulo an odd prime.
    #[command(allow_negative_numbers = true)]
    Lucas { b: i64, c: i64, n: u64, p: i64 },
    /// Scan residuacity checks over a range of primes.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Quartic Jacobi symbol ((are + aim i) / (bre + bim i))_4, printed as i^k.
    #[command(allow_negative_numbers = true)]
    Quartic { are: i64, aim: i64, bre: i64, bim: i64 },
    /// Quadratic Jacobi symbol (a / m) for odd m, printed as -1, 0, or 1.
    #[command(allow_negative_numbers = true)]
    Quadratic { a: i64, m: i64 },
}

#[derive(Subcommand)]
enum RepresentCmd {
    /// p = c^2 + d^2 with c = 1 (mod 4), d = 2^r d0, d0 = 1 (mod 4).
    TwoSquares { p: i64 },
    /// All p = x^2 + q y^2 with the odd part of y = 1 (mod 4); both signs of x.
    Form { p: i64, q: i64 },
}

#[derive(Args)]
struct VerifyArgs {
    /// Check ids to run (repeatable); `all` selects every check.
    #[arg(long = "check", required = true, num_args = 1..)]
    check: Vec<String>,
    /// Upper end of the prime range (inclusive).
    #[arg(long)]
    pmax: i64,
    /// Lower end of the prime range (inclusive).
    #[arg(long, default_value_t = 5)]
    pmin: i64,
    /// Override the form parameters q for q-parameterized checks.
    #[arg(long, num_args = 1..)]
    q: Option<Vec<i64>>,
    /// Override the odd parameters b (q = b^2 + 4^alpha families).
    #[arg(long, num_args = 1..)]
    b: Option<Vec<i64>>,
    /// Override the parameters a (q = a^2 + b^2 and q = 4a^2 + 1 families).
    #[arg(long, num_args = 1..)]
    a: Option<Vec<i64>>,
    /// Override the exponents alpha (q = b^2 + 4^alpha families).
    #[arg(long, num_args = 1..)]
    alpha: Option<Vec<u32>>,
    /// Also evaluate instances whose coprimality hypothesis fails,
    /// reporting them separately (never as counterexamples).
    #[arg(long)]
    explore: bool,
    /// Number of worker threads; output order is unaffected.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Emit one JSON object per record on stdout; summary goes to stderr.
    #[arg(long)]
    json: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::Symbol { which } => cmd_symbol(which),
        Cmd::Represent { which } => cmd_represent(which),
        Cmd::Lucas { b, c, n, p } => cmd_lucas(b, c, n, p),
        Cmd::Verify(args) => return cmd_verify(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Build a Gaussian integer from command-line coordinates, turning the
/// library's out-of-range panic into a reportable error.
fn gauss_arg(re: i64, im: i64) -> Result<GaussInt> {
    if re.unsigned_abs() > COORD_LIMIT as u64 || im.unsigned_abs() > COORD_LIMIT as u64 {
        return Err(anyhow!(
            "coordinate out of range: ({re}, {im}) has a component exceeding 2^62 in absolute value"
        ));
    }
    Ok(GaussInt::new(re, im))
}

fn cmd_symbol(which: SymbolCmd) -> Result<()> {
    match which {
        SymbolCmd::Quartic { are, aim, bre, bim } => {
            let beta = OddGauss::new(gauss_arg(bre, bim)?)
                .map_err(|e| anyhow!("{e}"))
                .context("denominator must have odd norm")?;
            let s = quartic_jacobi(gauss_arg(are, aim)?, beta).map_err(|e| anyhow!("{e}"))?;
            println!("{s}");
        }
        SymbolCmd::Quadratic { a, m } => {
            let s = jacobi2(a, m).map_err(|e| anyhow!("{e}"))?;
            println!("{s}");
        }
    }
    Ok(())
}

fn cmd_represent(which: RepresentCmd) -> Result<()> {
    match which {
        RepresentCmd::TwoSquares { p } => {
            let t = two_squares(p).map_err(|e| anyhow!("{e}"))?;
            println!("p={} c={} d={} r={} d0={}", t.p, t.c, t.d, t.r, t.d0);
        }
        RepresentCmd::Form { p, q } => {
            let reps = quad_reps(p, q).map_err(|e| anyhow!("{e}"))?;
            for r in reps {
                println!(
                    "p={} q={} x={} y={} t={} y0={} s={} x0={}",
                    r.p, r.q, r.x, r.y, r.t, r.y0, r.s, r.x0
                );
            }
        }
    }
    Ok(())
}

fn cmd_lucas(b: i64, c: i64, n: u64, p: i64) -> Result<()> {
    let pair = lucas_uv_mod(b, c, n, p).map_err(|e| anyhow!("{e}"))?;
    println!("U={} V={}", pair.u, pair.v);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> i32 {
    match verify_inner(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn verify_inner(args: VerifyArgs) -> Result<i32> {
    let mut checks = Vec::new();
    for name in &args.check {
        if name == "all" {
            checks.extend(CheckId::ALL);
        } else {
            checks.push(name.parse::<CheckId>().map_err(|e| anyhow!("{e}"))?);
        }
    }
    if args.pmin > args.pmax {
        return Err(anyhow!("--pmin {} exceeds --pmax {}", args.pmin, args.pmax));
    }
    if args.jobs < 1 {
        return Err(anyhow!("--jobs must be at least 1"));
    }
    let mut cfg = RunConfig::new(checks, args.pmax);
    cfg.p_min = args.pmin;
    cfg.q = args.q;
    cfg.b = args.b;
    cfg.a = args.a;
    cfg.alpha = args.alpha;
    cfg.explore = args.explore;
    cfg.jobs = args.jobs;

    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let summary = if args.json {
        run_suite(&cfg, |r| {
            writeln!(out, "{}", r.json_line()).expect("stdout write failed");
        })
        .map_err(|e| anyhow!("{e}"))?
    } else {
        run_suite(&cfg, |_| {}).map_err(|e| anyhow!("{e}"))?
    };
    out.flush().expect("stdout flush failed");

    if args.json {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
        for r in &summary.counterexamples {
            println!("counterexample: {}", r.json_line());
        }
    }
    Ok(if summary.counterexample_count > 0 { 2 } else { 0 })
}
