//! Command-line front end. `run` parses argv, dispatches to the library and
//! returns the process exit code: 0 on success, 1 on a domain error, 2 on a
//! usage error (including a malformed eta-quotient).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::charclass::classify;
use crate::dims::{dimension, table, table_csv, table_over, two_k_of, DimQuery, DimStatus};
use crate::eisenstein::{verify_identity, EisParams};
use crate::error::Error;
use crate::etaquot::{exponents_from_orders, parse_rational, CuspOrders, EtaQuotient};
use crate::gamma0::invariants;
use crate::hecke::{eigen_report, HeckeContext};
use crate::ntheory::divisors;
use crate::qseries::expand;
use crate::search::{search_admissible, summary_csv, TypeFilter};

#[derive(Parser, Debug)]
#[command(name = "etaq", version, about = "Eta-quotients on Gamma0(N)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON (the default for every command except where noted).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV where the command supports it.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Cap the worker pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the payload to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Index, elliptic points, cusps and genus of X0(N).
    Invariants { n: u64 },
    /// Delta-sequence and number of eta-characters at level N.
    Classify {
        n: u64,
        #[arg(long, value_enum, default_value = "asc")]
        ordering: Ordering,
        /// Comma-separated B_N ordering, used with `--ordering given`.
        #[arg(long)]
        b: Option<String>,
    },
    /// Convert between exponents r_n and cusp orders x_c.
    Orders(OrdersArgs),
    /// Dimension of M_k(N, chi) for the character of an eta-quotient.
    Dim {
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, default_value_t = 0)]
        t: u64,
        /// View the quotient on this multiple of its level.
        #[arg(long)]
        level: Option<u64>,
    },
    /// Dimension table at weight k with t = 0.
    Table {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        levels: Option<String>,
    },
    /// q-expansion up to q^{offset + terms}.
    Qexp {
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// c_{T_l f}(n) = c_l c_f(n) for l in L_f up to lmax.
    HeckeCheck {
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, default_value_t = 25)]
        lmax: u64,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
    },
    /// Admissible eta-quotients, one JSON record per line.
    Search {
        #[arg(long)]
        levels: Option<String>,
        #[arg(long = "type", value_enum, ignore_case = true, default_value = "I")]
        kind: KindArg,
    },
    /// Level-4 eta-quotient against its Eisenstein series.
    EisCheck {
        #[arg(long, allow_hyphen_values = true)]
        r2: String,
        #[arg(long, allow_hyphen_values = true)]
        r4: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 2000)]
        cmax: u64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
}

#[derive(Args, Debug)]
pub struct OrdersArgs {
    #[arg(long, conflicts_with = "to_r")]
    pub to_x: bool,
    #[arg(long)]
    pub to_r: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Cusp orders aligned with the divisors of N, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long)]
    pub level: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Ordering {
    Asc,
    Given,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    Both,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

type Out = std::result::Result<(String, bool), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_eta(s: &str, level: Option<u64>) -> std::result::Result<EtaQuotient, Failure> {
    let f = EtaQuotient::parse(s)?;
    match level {
        Some(n) => Ok(f.with_level(n)?),
        None => Ok(f),
    }
}

fn parse_levels(s: &str) -> std::result::Result<Vec<u64>, Failure> {
    let bad = || usage(format!("bad level range `{s}`; expected a..b or a,b,c"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a == 0 || a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn rat_i64(s: &str) -> std::result::Result<Ratio<i64>, Failure> {
    let r = parse_rational(s).ok_or_else(|| usage(format!("bad rational `{s}`")))?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(p), Some(q)) => Ok(Ratio::new(p, q)),
        _ => Err(usage(format!("rational `{s}` out of range"))),
    }
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

/// Renders nonzero exponents only, in divisor order.
fn render_eta(f: &EtaQuotient) -> String {
    let parts: Vec<String> = f
        .exponents()
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(n, e)| format!("{n}^{e}"))
        .collect();
    parts.join(" ")
}

fn execute(cli: &Cli) -> Out {
    let csv = cli.csv;
    match &cli.command {
        Command::Invariants { n } => {
            if *n == 0 {
                return Err(Failure::Domain("level must be positive".into()));
            }
            Ok((json_line(&serde_json::to_value(invariants(*n)).unwrap()), true))
        }
        Command::Classify { n, ordering, b } => {
            if *n == 0 {
                return Err(Failure::Domain("level must be positive".into()));
            }
            let given: Option<Vec<u64>> = match (ordering, b) {
                (Ordering::Asc, None) => None,
                (Ordering::Given, Some(b)) => Some(
                    b.split(',')
                        .map(|t| t.trim().parse().map_err(|_| usage(format!("bad B_N entry `{t}`"))))
                        .collect::<std::result::Result<_, _>>()?,
                ),
                (Ordering::Given, None) => return Err(usage("--ordering given needs --b")),
                (Ordering::Asc, Some(_)) => return Err(usage("--b needs --ordering given")),
            };
            let c = classify(*n, given.as_deref())?;
            Ok((json_line(&serde_json::to_value(c).unwrap()), true))
        }
        Command::Orders(a) => orders(a),
        Command::Dim { eta, t, level } => {
            let f = parse_eta(eta, *level)?;
            let q = DimQuery::new(f.clone(), *t);
            let d = dimension(&q);
            let v = json!({
                "status": match d.status {
                    DimStatus::Exact => "exact",
                    DimStatus::LowerBoundOnly => "lower_bound_only",
                },
                "dim": d.value,
                "upper_bound": d.upper_bound,
                "cusp_dim": d.cusp_dim,
                "N": f.level(),
                "k": q.weight().to_string(),
            });
            Ok((json_line(&v), true))
        }
        Command::Table { weight, levels } => {
            let k = parse_rational(weight).ok_or_else(|| usage(format!("bad weight `{weight}`")))?;
            let two_k = two_k_of(&k).ok_or_else(|| usage("weight must be a half-integer"))?;
            let rows = match levels {
                Some(s) => table_over(two_k, &parse_levels(s)?),
                None => table(two_k),
            };
            if csv {
                Ok((table_csv(&rows), true))
            } else {
                let body: String = rows
                    .iter()
                    .map(|r| json_line(&serde_json::to_value(r).unwrap()))
                    .collect();
                Ok((body, true))
            }
        }
        Command::Qexp { eta, terms } => {
            let f = parse_eta(eta, None)?;
            let s = expand(&f, *terms);
            if csv {
                let mut w = String::from("exponent,coefficient\n");
                for (j, c) in s.coeffs().iter().enumerate() {
                    let e = s.offset() + BigRational::from_integer(BigInt::from(j));
                    w.push_str(&format!("{e},{c}\n"));
                }
                Ok((w, true))
            } else {
                Ok((json_line(&s.to_json()), true))
            }
        }
        Command::HeckeCheck { eta, lmax, nmax } => {
            let f = parse_eta(eta, None)?;
            let ctx = HeckeContext::new(&f)?;
            let coeffs = expand(&f, ctx.terms_needed(*lmax, *nmax));
            let rows = eigen_report(&ctx, &coeffs, *lmax, *nmax)?;
            let ok = rows.iter().all(|r| r.equal);
            let body = rows
                .iter()
                .map(|r| json_line(&serde_json::to_value(r).unwrap()))
                .collect();
            Ok((body, ok))
        }
        Command::Search { levels, kind } => {
            let types = match kind {
                KindArg::I => TypeFilter::I,
                KindArg::II => TypeFilter::II,
                KindArg::Both => TypeFilter::BOTH,
            };
            let levels = match levels {
                Some(s) => parse_levels(s)?,
                None => (1..=if types.type_ii { 400 } else { 36 }).collect(),
            };
            let recs = search_admissible(&levels, types);
            if csv {
                Ok((summary_csv(&recs), true))
            } else {
                Ok((recs.iter().map(|r| json_line(&r.to_json())).collect(), true))
            }
        }
        Command::EisCheck { r2, r4, nmax, cmax, tol } => {
            let p = EisParams::new(rat_i64(r2)?, rat_i64(r4)?)?;
            let rep = verify_identity(&p, *nmax, *cmax, *tol)?;
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|r| json!({"n": r.n, "series_value": r.series_value, "eis_value": r.eis_value, "abs_err": r.abs_err}))
                .collect();
            let v = json!({"rows": rows, "max_err": rep.max_err, "tol": tol, "pass": rep.pass});
            Ok((json_line(&v), rep.pass))
        }
    }
}

fn orders(a: &OrdersArgs) -> Out {
    if a.to_r {
        let n = a.level.ok_or_else(|| usage("--to-r needs --level"))?;
        let xs = a.x.as_deref().ok_or_else(|| usage("--to-r needs --x"))?;
        let x: Vec<BigRational> = xs
            .split(',')
            .map(|t| parse_rational(t).ok_or_else(|| usage(format!("bad order `{t}`"))))
            .collect::<std::result::Result<_, _>>()?;
        let orders = CuspOrders::new(n, x)?;
        let r = exponents_from_orders(&orders);
        let f = EtaQuotient::new(n, divisors(n).into_iter().zip(r))?;
        let v = json!({"N": n, "eta": render_eta(&f), "r": f.to_json()["r"]});
        Ok((json_line(&v), true))
    } else if a.to_x {
        let eta = a.eta.as_deref().ok_or_else(|| usage("--to-x needs --eta"))?;
        let f = parse_eta(eta, a.level)?;
        let x = f.cusp_orders();
        let v = json!({
            "N": f.level(),
            "divisors": divisors(f.level()),
            "x": x.x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        });
        Ok((json_line(&v), true))
    } else {
        Err(usage("orders needs --to-x or --to-r"))
    }
}

/// Runs the CLI on argv and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // A second initialization only happens in-process (tests); ignore it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match execute(&cli) {
        Ok((body, ok)) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &body),
                None => std::io::stdout().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("{}", json!({"error": "io", "message": e.to_string()}));
                return 1;
            }
            if ok {
                0
            } else {
                eprintln!("{}", json!({"error": "check_failed", "message": "at least one comparison failed"}));
                1
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("{}", json!({"error": "usage", "message": m}));
            eprintln!("run `etaq --help` for usage");
            2
        }
        Err(Failure::Domain(m)) => {
            eprintln!("{}", json!({"error": "domain", "message": m}));
            1
        }
    }
}
