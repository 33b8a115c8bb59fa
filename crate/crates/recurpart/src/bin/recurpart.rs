//! Thin command-line shell over the recurpart library: every subcommand
//! parses arguments, calls library operations, and formats their output.
//! No numeric logic lives here.
//!
//! Exit codes: 0 success, 1 failed verification criteria, 2 validation
//! error, 3 numeric failure (bracket/convergence), 64 usage error.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use recurpart::asymp;
use recurpart::bigcount;
use recurpart::genlog;
use recurpart::hp::{Cx, Prec};
use recurpart::report::Report;
use recurpart::saddle::SaddleCtx;
use recurpart::seqkit::{self, RecurrenceSpec};
use recurpart::verify::{self, Tier};
use recurpart::zetarec;
use recurpart::{Error, Result};
use rug::Float;
use std::cmp::Ordering;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "recurpart",
    version,
    about = "Exact and asymptotic partition counting over Fibonacci numbers and dominant-root linear recurrences"
)]
struct Cli {
    /// Decimal working precision (overrides RECURPART_DIGITS; default 64, minimum 32)
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Theorem,
    Ck,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact partition count p(n) and its natural log
    Count {
        #[arg(long)]
        n: u64,
        /// JSON recurrence file {"label", "coeffs", "initial"}; Fibonacci when absent
        #[arg(long)]
        recurrence: Option<PathBuf>,
    },
    /// Emit n,count,log_count rows up to nmax
    Table {
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        recurrence: Option<PathBuf>,
    },
    /// Asymptotic estimate of log p(n)
    Estimate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        recurrence: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
    },
    /// Exact-vs-estimate comparison grid (CSV)
    Compare {
        #[arg(long)]
        nmax: u64,
        /// Grid at powers of ten only
        #[arg(long)]
        decades: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        recurrence: Option<PathBuf>,
    },
    /// Recurrence zeta value at z, or a pole/residue table
    Zeta {
        /// Complex point, e.g. "2", "-1", "0.5+2i"
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Emit the pole table for 0 <= k <= KMAX, |n| <= NMAX
        #[arg(long, num_args = 2, value_names = ["KMAX", "NMAX"])]
        poles: Option<Vec<u32>>,
        #[arg(long)]
        recurrence: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assembled log generating function at s
    Loggen {
        #[arg(long)]
        s: String,
        /// Also evaluate the direct-summation oracle and the difference
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        recurrence: Option<PathBuf>,
    },
    /// Saddle point at n: numeric solve vs closed-form estimate
    Saddle {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        recurrence: Option<PathBuf>,
    },
    /// Emit a psi table (phase,value) as CSV
    Psi {
        /// 0 for the inversion exponent table, 1 for the oscillation table
        #[arg(long)]
        which: u8,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        recurrence: Option<PathBuf>,
    },
    /// Print the named constants of the expansion
    Constants,
    /// Run the acceptance harness
    Verify {
        /// Count grids up to 1e4 (default)
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// Count grids up to 1e6
        #[arg(long)]
        full: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(64);
        }
    };
    let prec = match cli.digits {
        Some(d) => Prec::new(d),
        None => recurpart::default_prec(),
    };
    match run(cli.cmd, prec) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn load_spec(path: &Option<PathBuf>, prec: Prec) -> Result<RecurrenceSpec> {
    match path {
        Some(p) => seqkit::load_recurrence(p, prec),
        None => Ok(seqkit::make_fibonacci(prec)),
    }
}

fn count_symbol(spec: &RecurrenceSpec) -> &'static str {
    if spec.is_fibonacci() {
        "p_F"
    } else {
        "p_P"
    }
}

fn usage_error(msg: &str) -> Error {
    Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, msg.to_string()))
}

fn base_report(prec: Prec, columns: Vec<&str>) -> Report {
    let mut r = Report::new(columns);
    r.meta("precision_digits", prec.digits().to_string());
    r.meta("package", format!("recurpart {}", env!("CARGO_PKG_VERSION")));
    if let Ok(t) = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        r.meta("timestamp_unix", t.as_secs().to_string());
    }
    r.meta(
        "truncation",
        format!(
            "g_nmax={} h_kmax={} h_nmax={}",
            genlog::G_NMAX_DEFAULT,
            genlog::H_KMAX_DEFAULT,
            genlog::H_NMAX_DEFAULT
        ),
    );
    r
}

fn run(cmd: Cmd, prec: Prec) -> Result<i32> {
    match cmd {
        Cmd::Count { n, recurrence } => {
            let spec = load_spec(&recurrence, prec)?;
            let parts = spec.parts_up_to(&rug::Integer::from(n.max(1)));
            if parts.is_empty() {
                eprintln!("warning: no parts at or below {n} (empty part set)");
            }
            let table = bigcount::count_table_for(&spec, n)?;
            let count = table.count(n);
            let sym = count_symbol(&spec);
            println!("{sym}({n}) = {count}");
            if count.cmp0() == Ordering::Equal {
                println!("log {sym}({n}) undefined (count is zero)");
            } else {
                println!("log {sym}({n}) = {}", bigcount::log_count(count, prec)?);
            }
            Ok(0)
        }
        Cmd::Table {
            nmax,
            out,
            recurrence,
        } => {
            let spec = load_spec(&recurrence, prec)?;
            let table = bigcount::count_table_for(&spec, nmax)?;
            let mut report = base_report(prec, vec!["n", "count", "log_count"]);
            for n in 0..=nmax {
                let c = table.count(n);
                let log = if c.cmp0() == Ordering::Equal {
                    "-inf".to_string()
                } else {
                    bigcount::log_count(c, prec)?.to_string()
                };
                report.push(vec![n.to_string(), c.to_string(), log]);
            }
            report.emit_csv_path(&out)?;
            eprintln!("wrote {} rows to {}", nmax + 1, out.display());
            Ok(0)
        }
        Cmd::Estimate {
            n,
            recurrence,
            route,
        } => {
            let spec = load_spec(&recurrence, prec)?;
            if spec.is_fibonacci() {
                let ctx = SaddleCtx::fibonacci(prec);
                if route != Route::Ck {
                    let psi0 = ctx.build_psi0()?;
                    let psi1 = ctx.build_psi1()?;
                    let est = asymp::theorem11_estimate(n, &psi0, &psi1, prec)?;
                    println!("log estimate (theorem route) = {}", est.log_value);
                    println!("  B(n) = {}", est.b);
                    println!("  C(n) = {}", est.c);
                    println!("  log A = {}", est.components[0].1);
                }
                if route != Route::Theorem {
                    let nf = prec.float(n);
                    let alpha = ctx.solve_alpha(&nf)?;
                    let ck = asymp::ck_assemble(&nf, &alpha, prec)?;
                    println!("log estimate (ck route) = {ck}");
                    println!("  saddle alpha = {alpha}");
                }
            } else {
                let ctx = SaddleCtx::general(&spec, prec)?;
                let psi3 = ctx.build_psi0()?;
                let psi4 = ctx.build_psi1()?;
                let est = asymp::theorem12_estimate(&spec, n, &psi3, &psi4, prec)?;
                println!("log estimate (ck route) = {}", est.log_value);
                for (k, v) in &est.components {
                    println!("  {k} = {v}");
                }
            }
            println!(
                "leading order = {}",
                asymp::leading_log_spec(&spec, &prec.float(n), prec)
            );
            Ok(0)
        }
        Cmd::Compare {
            nmax,
            decades,
            out,
            recurrence,
        } => {
            let spec = load_spec(&recurrence, prec)?;
            let grid = comparison_grid(nmax, decades);
            let table = bigcount::count_table_for(&spec, nmax)?;
            let mut report = base_report(
                prec,
                vec![
                    "n",
                    "log_exact",
                    "log_estimate",
                    "leading",
                    "abs_err",
                    "normalized_err",
                ],
            );
            let fib = spec.is_fibonacci();
            let fctx = SaddleCtx::fibonacci(prec);
            let gctx;
            let (psi_a, psi_b) = if fib {
                (fctx.build_psi0()?, fctx.build_psi1()?)
            } else {
                gctx = SaddleCtx::general(&spec, prec)?;
                (gctx.build_psi0()?, gctx.build_psi1()?)
            };
            for n in grid {
                let exact = bigcount::log_count(table.count(n), prec)?;
                let est = if fib {
                    prec.float(&asymp::theorem11_estimate(n, &psi_a, &psi_b, prec)?.log_value)
                } else {
                    prec.float(
                        &asymp::theorem12_estimate(&spec, n, &psi_a, &psi_b, prec)?.log_value,
                    )
                };
                let leading = asymp::leading_log_spec(&spec, &prec.float(n), prec);
                let abs_err = (est.clone() - exact.clone()).abs();
                let l = prec.float(n).ln();
                let ll = l.clone().ln();
                let normalized = abs_err.clone() * l / ll.square();
                report.push(vec![
                    n.to_string(),
                    exact.to_string(),
                    est.to_string(),
                    leading.to_string(),
                    abs_err.to_string(),
                    normalized.to_string(),
                ]);
            }
            match out {
                Some(path) => {
                    report.emit_csv_path(&path)?;
                    eprintln!("wrote {}", path.display());
                }
                None => report.emit_csv(std::io::stdout().lock())?,
            }
            Ok(0)
        }
        Cmd::Zeta {
            z,
            poles,
            recurrence,
            out,
        } => {
            let spec = load_spec(&recurrence, prec)?;
            if let Some(bounds) = poles {
                let (kmax, nmax) = (bounds[0], bounds[1] as i64);
                let list = if spec.is_fibonacci() {
                    zetarec::fib_poles(kmax, nmax, prec)
                } else {
                    zetarec::rec_poles(&spec, kmax, nmax, prec)?
                };
                let mut report =
                    base_report(prec, vec!["k", "n", "re_loc", "im_loc", "re_res", "im_res"]);
                for ps in list {
                    report.push(vec![
                        ps.kvec[0].to_string(),
                        ps.n.to_string(),
                        ps.location.re.to_string(),
                        ps.location.im.to_string(),
                        ps.residue.re.to_string(),
                        ps.residue.im.to_string(),
                    ]);
                }
                match out {
                    Some(path) => {
                        report.emit_csv_path(&path)?;
                        eprintln!("wrote {}", path.display());
                    }
                    None => report.emit_csv(std::io::stdout().lock())?,
                }
                return Ok(0);
            }
            let zs = z.ok_or_else(|| usage_error("provide --z or --poles"))?;
            let zv = parse_complex(&zs, prec)
                .ok_or_else(|| usage_error(&format!("cannot parse complex number {zs:?}")))?;
            let cont = zetarec::zeta_rec_continued(&spec, &zv, prec)?;
            println!("zeta[{}]({zs}) = {cont}", spec.label());
            if zv.re >= 0.05 {
                let direct = zetarec::zeta_rec_series(&spec, &zv, prec)?;
                println!("direct series  = {direct}");
                println!("difference     = {}", (&cont - &direct).abs());
            }
            Ok(0)
        }
        Cmd::Loggen {
            s,
            oracle,
            recurrence,
        } => {
            let spec = load_spec(&recurrence, prec)?;
            let sv = prec.parse(&s);
            let assembled = if spec.is_fibonacci() {
                genlog::log_gen_f2(&sv, prec)?
            } else {
                genlog::log_gen_p(&spec, &sv, prec)?
            };
            println!("assembled log F(e^-s) = {assembled}");
            if oracle {
                let direct = genlog::log_gen_direct_spec(&spec, &sv, prec);
                println!("direct oracle         = {direct}");
                println!("difference            = {}", assembled - direct);
            }
            Ok(0)
        }
        Cmd::Saddle { n, recurrence } => {
            let spec = load_spec(&recurrence, prec)?;
            let fib = spec.is_fibonacci();
            let fctx = SaddleCtx::fibonacci(prec);
            let gctx;
            let ctx = if fib {
                &fctx
            } else {
                gctx = SaddleCtx::general(&spec, prec)?;
                &gctx
            };
            let nf = prec.float(n);
            let solved = ctx.solve_alpha(&nf)?;
            let psi0 = ctx.build_psi0()?;
            let estimate = ctx.alpha_estimate(&nf, &psi0)?;
            let gap = ((estimate.clone() - solved.clone()) / solved.clone()).abs();
            println!("solve_alpha({n})    = {solved}");
            println!("alpha_estimate({n}) = {estimate}");
            println!("relative gap       = {gap}");
            Ok(0)
        }
        Cmd::Psi {
            which,
            out,
            recurrence,
        } => {
            if which > 1 {
                return Err(usage_error("--which must be 0 or 1"));
            }
            let spec = load_spec(&recurrence, prec)?;
            let fib = spec.is_fibonacci();
            let fctx = SaddleCtx::fibonacci(prec);
            let gctx;
            let ctx = if fib {
                &fctx
            } else {
                gctx = SaddleCtx::general(&spec, prec)?;
                &gctx
            };
            let table = if which == 0 {
                ctx.build_psi0()?
            } else {
                ctx.build_psi1()?
            };
            let mut report = base_report(prec, vec!["phase", "value"]);
            report.meta("generation_m", table.generation_m.to_string());
            report.meta("stabilization", format!("{:e}", table.stabilization));
            for (phase, value) in &table.samples {
                report.push(vec![phase.to_string(), value.to_string()]);
            }
            report.emit_csv_path(&out)?;
            eprintln!("wrote {} samples to {}", table.samples.len(), out.display());
            Ok(0)
        }
        Cmd::Constants => {
            let fib = seqkit::make_fibonacci(prec);
            let exp = genlog::f2_expansion(prec);
            println!("gamma   = {}", prec.euler_gamma());
            println!("gamma_1 = {}", recurpart::special::stieltjes_gamma1(prec));
            println!("phi     = {}", prec.float(fib.beta()));
            println!("log phi = {}", fib.log_beta(prec));
            println!("c_1     = {}", zetarec::c1_series(prec));
            println!("c_2     = {}", genlog::c2(prec));
            println!("c_3     = {}", genlog::c3(prec));
            println!("c_2 (assembled expansion constant)  = {}", exp.const_term);
            println!(
                "c_3 (assembled, gamma-free variant) = {}",
                (prec.float(1) - prec.float(&exp.lin_coeff)) * fib.log_beta(prec)
            );
            Ok(0)
        }
        Cmd::Verify { quick: _, full } => {
            let tier = if full { Tier::Full } else { Tier::Quick };
            let outcomes = verify::run_all(tier, prec)?;
            print!("{}", verify::render(&outcomes, true));
            Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { 1 })
        }
    }
}

fn comparison_grid(nmax: u64, decades: bool) -> Vec<u64> {
    let mut grid = Vec::new();
    if decades {
        let mut n = 100u64;
        while n <= nmax {
            grid.push(n);
            n = n.saturating_mul(10);
        }
    } else {
        let lo = 100f64.ln();
        let hi = (nmax as f64).ln();
        for i in 0..=16 {
            let v = (lo + (hi - lo) * i as f64 / 16.0).exp().round() as u64;
            grid.push(v.clamp(100, nmax));
        }
        grid.dedup();
    }
    grid
}

fn parse_float(s: &str, prec: Prec) -> Option<Float> {
    Float::parse(s).ok().map(|p| prec.float(p))
}

/// Parse "RE", "IMi", or "RE±IMi" into a complex number.
fn parse_complex(s: &str, prec: Prec) -> Option<Cx> {
    let s = s.trim().replace(' ', "");
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                let (re, im) = (&body[..i], &body[i..]);
                let im = match im {
                    "+" => "1",
                    "-" => "-1",
                    other => other,
                };
                return Some(Cx::new(parse_float(re, prec)?, parse_float(im, prec)?));
            }
        }
        let im = match body {
            "" => "1",
            "-" => "-1",
            other => other,
        };
        return Some(Cx::new(prec.zero(), parse_float(im, prec)?));
    }
    Some(Cx::from_real(parse_float(&s, prec)?))
}
