//! `hglcorr`: exact n-point correlation functions from the command line.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hglcorr::formulas::{f_bo, npoint_kostka, npoint_level, qdim};
use hglcorr::qseries::{format_rational, parse_rational, DEN};
use hglcorr::symfunc::cached_kostka_table;
use hglcorr::verify::{compare_routes, verify, IdentityId, VerifyParams};
use hglcorr::{oracle_npoint, Error, GenPartition, QSeries, TPoint};
use num_integer::Integer;
use serde_json::{json, Value};

const AFTER_HELP: &str = "Points are given by s = t^(1/2), so t = s^2: `--s 2` means t = 4. \
Rationals are written as integers or a/b.";

#[derive(Parser)]
#[command(name = "hglcorr", version, about = "Exact n-point correlation functions at level l", after_help = AFTER_HELP)]
struct Cli {
    /// Truncation order in powers of q: results are exact below q^ORDER.
    #[arg(long, global = true, default_value_t = 8)]
    order: i64,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Label {
    /// Level l (number of tensor factors).
    #[arg(long, default_value_t = 1)]
    level: usize,
    /// Generalized partition, weakly decreasing, comma separated (default all zeros).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Args, Clone)]
struct Points {
    /// Points s_1,...,s_n with t_i = s_i^2, comma separated.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    s: String,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Method {
    Theta,
    Kostka,
    Oracle,
    All,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Theta => "theta",
            Method::Kostka => "kostka",
            Method::Oracle => "oracle",
            Method::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Level-l n-point function of the module labelled lambda.
    Npoint {
        #[command(flatten)]
        label: Label,
        #[command(flatten)]
        pts: Points,
        #[arg(long, value_enum, default_value = "theta")]
        method: Method,
    },
    /// q-dimension (the n = 0 function).
    Qdim {
        #[command(flatten)]
        label: Label,
    },
    /// Level-1 vacuum function F_BO.
    Bo {
        #[command(flatten)]
        pts: Points,
    },
    /// Fock-space trace, restricted to the component labelled lambda.
    Oracle {
        #[command(flatten)]
        label: Label,
        #[command(flatten)]
        pts: Points,
    },
    /// Kostka matrix (or its inverse) on generalized partitions of a size.
    Kostka {
        #[arg(long, allow_hyphen_values = true)]
        size: i64,
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Smallest allowed entry (default: a box holding every label of that size near zero).
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<i64>,
        /// Print the inverse matrix (coefficient of s_lambda in m_mu).
        #[arg(long)]
        inverse: bool,
    },
    /// Identity checks: jacobi, cor33, lemma35, cor36, cor37, cor42, cor43, ok-shift, or all.
    Verify {
        #[arg(long, default_value = "all")]
        id: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "2")]
        s: String,
        /// Charge for ok-shift.
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        k: i64,
    },
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn precondition(field: &str, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: format!("{field}: {e}"),
    }
}

fn field_of(e: &Error) -> &'static str {
    match e {
        Error::ZeroS | Error::InvalidTPoint(_) | Error::SubsetProductOne(_) => "s",
        Error::LengthMismatch { .. } | Error::NotDecreasing(_) => "lambda",
        Error::ZeroLevel => "level",
        Error::BadOrder(_) | Error::CutoffTooSmall { .. } => "order",
        Error::OutOfTableBounds { .. } => "lo/hi",
        Error::UnknownIdentity(_) => "id",
        Error::InvalidParameter { field, .. } => field,
        _ => "input",
    }
}

fn lib(e: Error) -> Failure {
    let field = field_of(&e);
    let message = match &e {
        Error::SubsetProductOne(idx) => format!("subset product of t equals 1 (points {idx:?})"),
        _ => e.to_string(),
    };
    precondition(field, message)
}

fn parse_points(s: &str) -> Result<Vec<TPoint>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            let r = parse_rational(x)
                .ok_or_else(|| precondition("s", format!("`{x}` is not an integer or a/b")))?;
            TPoint::new(r).map_err(|e| precondition("s", e))
        })
        .collect()
}

fn parse_label(level: usize, lambda: Option<&str>) -> Result<GenPartition, Failure> {
    if level == 0 {
        return Err(precondition("level", "must be at least 1"));
    }
    let entries: Vec<i64> = match lambda {
        None => vec![0; level],
        Some(s) => s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| precondition("lambda", format!("`{x}` is not an integer")))
            })
            .collect::<Result<_, _>>()?,
    };
    if entries.len() != level {
        return Err(precondition(
            "lambda",
            format!("has {} entries but level is {level}", entries.len()),
        ));
    }
    GenPartition::new(entries).map_err(|e| precondition("lambda", e))
}

enum Format {
    Plain,
    Json,
    Csv,
}

fn exponent(e8: i64) -> String {
    let g = e8.gcd(&DEN);
    if g == DEN {
        (e8 / DEN).to_string()
    } else {
        format!("{}/{}", e8 / g, DEN / g)
    }
}

fn series_csv(s: &QSeries) -> String {
    let mut out = String::from("exponent,coefficient\n");
    for (e, c) in s.terms() {
        out.push_str(&format!("{},{}\n", exponent(e), format_rational(c)));
    }
    out
}

struct Envelope<'a> {
    method: &'a str,
    level: Option<usize>,
    lambda: Option<&'a GenPartition>,
    pts: &'a [TPoint],
    order: i64,
}

impl Envelope<'_> {
    fn json(&self) -> Value {
        json!({
            "method": self.method,
            "level": self.level,
            "lambda": self.lambda.map(|l| l.entries().to_vec()),
            "s": self.pts.iter().map(|p| format_rational(p.s())).collect::<Vec<_>>(),
            "order": self.order,
        })
    }
}

fn emit_series(env: &Envelope, s: &QSeries, fmt: &Format) -> String {
    match fmt {
        Format::Plain => format!("{s}\n"),
        Format::Csv => series_csv(s),
        Format::Json => {
            let mut v = env.json();
            v["series"] = s.to_json();
            format!("{}\n", serde_json::to_string(&v).unwrap())
        }
    }
}

fn verdict(a: &str, b: &str, x: &QSeries, y: &QSeries) -> (bool, String) {
    match x.first_difference(y) {
        None => (true, format!("{a} vs {b}: equal")),
        Some(e) => (false, format!("{a} vs {b}: differ at q^{}", exponent(e))),
    }
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    if cli.order <= 0 {
        return Err(precondition(
            "order",
            format!("must be positive, got {}", cli.order),
        ));
    }
    let order8 = cli.order * DEN;
    let fmt = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Plain
    };
    match cli.command {
        Command::Npoint { label, pts, method } => {
            let lam = parse_label(label.level, label.lambda.as_deref())?;
            let pts = parse_points(&pts.s)?;
            let env = Envelope {
                method: method.name(),
                level: Some(label.level),
                lambda: Some(&lam),
                pts: &pts,
                order: cli.order,
            };
            let one = |f: fn(usize, &GenPartition, &[TPoint], i64) -> hglcorr::Result<QSeries>| {
                f(label.level, &lam, &pts, order8).map_err(lib)
            };
            match method {
                Method::Theta => Ok((emit_series(&env, &one(npoint_level)?, &fmt), 0)),
                Method::Kostka => Ok((emit_series(&env, &one(npoint_kostka)?, &fmt), 0)),
                Method::Oracle => Ok((emit_series(&env, &one(oracle_npoint)?, &fmt), 0)),
                Method::All => {
                    let r = compare_routes(label.level, &lam, &pts, order8).map_err(lib)?;
                    let verdicts = [
                        verdict("theta", "kostka", &r.theta, &r.kostka),
                        verdict("theta", "oracle", &r.theta, &r.oracle),
                        verdict("kostka", "oracle", &r.kostka, &r.oracle),
                    ];
                    let code = if verdicts.iter().all(|v| v.0) { 0 } else { 3 };
                    let out = match fmt {
                        Format::Json => {
                            let mut v = env.json();
                            v["series"] = json!({
                                "theta": r.theta.to_json(),
                                "kostka": r.kostka.to_json(),
                                "oracle": r.oracle.to_json(),
                            });
                            v["verdicts"] =
                                json!(verdicts.iter().map(|v| &v.1).collect::<Vec<_>>());
                            format!("{}\n", serde_json::to_string(&v).unwrap())
                        }
                        Format::Csv => {
                            let mut out = String::from("method,exponent,coefficient\n");
                            for (m, s) in [
                                ("theta", &r.theta),
                                ("kostka", &r.kostka),
                                ("oracle", &r.oracle),
                            ] {
                                for (e, c) in s.terms() {
                                    out.push_str(&format!(
                                        "{m},{},{}\n",
                                        exponent(e),
                                        format_rational(c)
                                    ));
                                }
                            }
                            out
                        }
                        Format::Plain => {
                            let mut out = format!(
                                "theta:  {}\nkostka: {}\noracle: {}\n",
                                r.theta, r.kostka, r.oracle
                            );
                            for v in &verdicts {
                                out.push_str(&v.1);
                                out.push('\n');
                            }
                            out
                        }
                    };
                    Ok((out, code))
                }
            }
        }
        Command::Qdim { label } => {
            let lam = parse_label(label.level, label.lambda.as_deref())?;
            let s = qdim(label.level, &lam, order8).map_err(lib)?;
            let env = Envelope {
                method: "qdim",
                level: Some(label.level),
                lambda: Some(&lam),
                pts: &[],
                order: cli.order,
            };
            Ok((emit_series(&env, &s, &fmt), 0))
        }
        Command::Bo { pts } => {
            let pts = parse_points(&pts.s)?;
            let s = f_bo(&pts, order8).map_err(lib)?;
            let env = Envelope {
                method: "bo",
                level: Some(1),
                lambda: None,
                pts: &pts,
                order: cli.order,
            };
            Ok((emit_series(&env, &s, &fmt), 0))
        }
        Command::Oracle { label, pts } => {
            let lam = parse_label(label.level, label.lambda.as_deref())?;
            let pts = parse_points(&pts.s)?;
            let s = oracle_npoint(label.level, &lam, &pts, order8).map_err(lib)?;
            let env = Envelope {
                method: "oracle",
                level: Some(label.level),
                lambda: Some(&lam),
                pts: &pts,
                order: cli.order,
            };
            Ok((emit_series(&env, &s, &fmt), 0))
        }
        Command::Kostka {
            size,
            level,
            lo,
            hi,
            inverse,
        } => {
            if level == 0 {
                return Err(precondition("level", "must be at least 1"));
            }
            let reach = size.abs() + 1;
            let lo = lo.unwrap_or(-reach);
            let hi = hi.unwrap_or(reach);
            let t = cached_kostka_table(size, level, lo, hi).map_err(lib)?;
            let out = match fmt {
                Format::Csv => t.to_csv(inverse),
                Format::Json => {
                    let m = if inverse {
                        t.kinv_matrix()
                    } else {
                        t.k_matrix()
                    };
                    let v = json!({
                        "size": size,
                        "level": level,
                        "lo": lo,
                        "hi": hi,
                        "inverse": inverse,
                        "index": t.index().iter().map(|p| p.entries().to_vec()).collect::<Vec<_>>(),
                        "matrix": m,
                    });
                    format!("{}\n", serde_json::to_string(&v).unwrap())
                }
                Format::Plain => {
                    let m = if inverse {
                        t.kinv_matrix()
                    } else {
                        t.k_matrix()
                    };
                    let labels: Vec<String> = t.index().iter().map(|p| p.to_string()).collect();
                    let w = labels.iter().map(String::len).max().unwrap_or(0);
                    let mut out = String::new();
                    for (l, row) in labels.iter().zip(m) {
                        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
                        out.push_str(&format!("{l:>w$} {}\n", cells.join("")));
                    }
                    out
                }
            };
            Ok((out, 0))
        }
        Command::Verify {
            id,
            level,
            lambda,
            s,
            k,
        } => {
            let ids: Vec<IdentityId> = if id == "all" {
                IdentityId::ALL.to_vec()
            } else {
                vec![id.parse().map_err(lib)?]
            };
            let lam = parse_label(level, lambda.as_deref())?;
            let params = VerifyParams {
                level,
                lambda: Some(lam.clone()),
                pts: parse_points(&s)?,
                k,
            };
            let mut reports = Vec::new();
            let mut skipped = Vec::new();
            for i in ids {
                if i == IdentityId::Cor43 && !lam.is_ordinary() && id == "all" {
                    skipped.push(format!(
                        "cor43 skipped: lambda {lam} is not an ordinary partition"
                    ));
                    continue;
                }
                reports.push(verify(i, &params, order8).map_err(lib)?);
            }
            let code = if reports.iter().all(|r| r.equal) {
                0
            } else {
                3
            };
            let out = match fmt {
                Format::Json => {
                    let v = json!({ "reports": reports, "skipped": skipped });
                    format!("{}\n", serde_json::to_string(&v).unwrap())
                }
                Format::Csv => {
                    let mut out = String::from(
                        "name,equal,order8,left_digest,right_digest,first_discrepancy8\n",
                    );
                    for r in &reports {
                        out.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            r.name,
                            r.equal,
                            r.order8,
                            r.left_digest,
                            r.right_digest,
                            r.first_discrepancy
                                .map(|e| e.to_string())
                                .unwrap_or_default()
                        ));
                    }
                    out
                }
                Format::Plain => {
                    let mut out = String::new();
                    for r in &reports {
                        out.push_str(&format!("{r}\n"));
                    }
                    for s in &skipped {
                        out.push_str(&format!("{s}\n"));
                    }
                    out
                }
            };
            Ok((out, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("threads: must be at least 1");
            return ExitCode::from(1);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let out_path = cli.out.clone();
    match run(cli) {
        Ok((text, code)) => {
            match out_path {
                Some(p) => {
                    if let Err(e) = fs::write(&p, text) {
                        eprintln!("out: cannot write {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
