use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use conifold_mirror::algebra::io::{to_json, to_tsv};
use conifold_mirror::algebra::series::Series;
use conifold_mirror::algebra::{parse_rational, Rational};
use conifold_mirror::amodel::{disk_potential_a, j_coefficient, mirror_map, r_matrix_limit, OrbifoldChartData};
use conifold_mirror::checks::{check_annulus_q0, check_disk, check_graphsum, check_rmatrix, CheckReport};
use conifold_mirror::curve::genus0::ConifoldCurve;
use conifold_mirror::curve::mirror::{w01_series, MirrorCurve, Orders};
use conifold_mirror::curve::spectral::with_escalation;
use conifold_mirror::curve::theta::{r_check_local_prec, r_check_matrix, FormExpander};
use conifold_mirror::curve::{KnotParams, VRoute};
use conifold_mirror::recursion::eo::{eo_local_prec, EoSolver};
use conifold_mirror::Error;

#[derive(Parser)]
#[command(
    name = "conifold-mirror",
    version,
    about = "Exact checks of open mirror symmetry for orbifold conifolds"
)]
struct Cli {
    /// Output format: json or text for reports, tsv or json for dumps.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Tsv,
}

#[derive(Args, Clone)]
struct Knot {
    #[arg(long, default_value_t = 1)]
    p: i64,
    #[arg(long, default_value_t = 1)]
    r: i64,
    #[arg(long, default_value_t = 1)]
    s: i64,
}

impl Knot {
    fn params(&self) -> Result<KnotParams, Error> {
        KnotParams::new(self.p, self.r, self.s)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Disk potential against -r h(W_{0,1}).
    CheckDisk {
        #[command(flatten)]
        knot: Knot,
        #[arg(long, default_value_t = 3)]
        q_order: u32,
        #[arg(long, default_value_t = 3)]
        x_order: u32,
    },
    /// Graph sum against the recursion on the p = 1 curve.
    CheckGraphsum {
        g: u32,
        n: usize,
        #[command(flatten)]
        knot: Knot,
        #[arg(long, alias = "q", default_value = "1/7")]
        q_value: String,
    },
    /// Unitarity of the R-matrix limit, and for p = 1 its match with R-check at q = 0.
    CheckRmatrix {
        #[command(flatten)]
        knot: Knot,
        #[arg(long, default_value_t = 4)]
        z_order: u32,
    },
    /// Annulus potential at q = 0 (p = 1).
    CheckAnnulusQ0 {
        #[command(flatten)]
        knot: Knot,
        /// One order for both variables, or two.
        #[arg(long, num_args = 1..=2, default_values_t = [3u32])]
        x_order: Vec<u32>,
    },
    /// Write a series or matrix.
    Dump {
        selector: Selector,
        /// `g n` for `omega`.
        rest: Vec<usize>,
        #[command(flatten)]
        knot: Knot,
        #[arg(long, default_value_t = 3)]
        q_order: u32,
        /// X-order; eta-order is r times this.
        #[arg(long, default_value_t = 3)]
        x_order: u32,
        #[arg(long, default_value_t = 4)]
        z_order: u32,
        #[arg(long, alias = "q", default_value = "1/7")]
        q_value: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Selector {
    V,
    W01,
    Tau,
    #[value(name = "J")]
    J,
    #[value(name = "F01")]
    F01,
    Omega,
    Rcheck,
    Rlimit,
}

enum Failure {
    Usage(String),
    Mismatch,
    Degenerate(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Parse(_) | Error::Unsupported(_) | Error::Unstable(..) => {
                Failure::Usage(e.to_string())
            }
            Error::Degenerate(_) => Failure::Degenerate(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Other(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(cli: &Cli, r: CheckReport) -> Result<(), Failure> {
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&r).expect("plain data") + "\n",
        Format::Text => r.summary() + "\n",
        Format::Tsv => return Err(Failure::Usage("reports are json or text".into())),
    };
    emit(&cli.out, &text)?;
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn series_text(fmt: Format, s: &Series<Rational>) -> Result<String, Failure> {
    match fmt {
        Format::Tsv => Ok(to_tsv(s)),
        Format::Json => Ok(serde_json::to_string_pretty(&to_json(s)).expect("plain data") + "\n"),
        Format::Text => Ok(format!("{s}\n")),
    }
}

fn json_only(fmt: Option<Format>, v: serde_json::Value) -> Result<String, Failure> {
    match fmt {
        None | Some(Format::Json) => Ok(serde_json::to_string_pretty(&v).expect("plain data") + "\n"),
        Some(_) => Err(Failure::Usage("this selector is written as json".into())),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::CheckDisk { knot, q_order, x_order } => report(cli, check_disk(&knot.params()?, *q_order, *x_order)?),
        Cmd::CheckGraphsum { g, n, knot, q_value } => {
            let q = parse_rational(q_value)?;
            report(cli, check_graphsum(&knot.params()?, *g, *n, &q)?)
        }
        Cmd::CheckRmatrix { knot, z_order } => report(cli, check_rmatrix(&knot.params()?, *z_order)?),
        Cmd::CheckAnnulusQ0 { knot, x_order } => {
            let params = knot.params()?;
            if params.p != 1 {
                return Err(Failure::Usage("the q = 0 annulus check needs p = 1".into()));
            }
            let (o1, o2) = (x_order[0], *x_order.get(1).unwrap_or(&x_order[0]));
            report(cli, check_annulus_q0(&params, o1, o2)?)
        }
        Cmd::Dump {
            selector,
            rest,
            knot,
            q_order,
            x_order,
            z_order,
            q_value,
        } => {
            let params = knot.params()?;
            let fmt = cli.format;
            let series_fmt = fmt.unwrap_or(Format::Tsv);
            let orders = Orders {
                q: *q_order,
                eta: params.r as u32 * x_order,
            };
            match selector {
                Selector::V => {
                    let phi = MirrorCurve::new(params).solve_v_series(orders, VRoute::Newton)?;
                    emit(&cli.out, &series_text(series_fmt, &phi)?)
                }
                Selector::W01 => {
                    let phi = MirrorCurve::new(params).solve_v_series(orders, VRoute::Newton)?;
                    emit(&cli.out, &series_text(series_fmt, &w01_series(&phi)?)?)
                }
                Selector::F01 => emit(
                    &cli.out,
                    &series_text(series_fmt, &disk_potential_a(&params, *q_order, *x_order))?,
                ),
                Selector::Tau => {
                    let taus = mirror_map(&params, *q_order);
                    match &cli.out {
                        Some(base) => {
                            for (i, t) in taus.iter().enumerate() {
                                let mut name = base.clone().into_os_string();
                                name.push(format!("_tau{}", i + 2));
                                emit(&Some(PathBuf::from(name)), &series_text(series_fmt, t)?)?;
                            }
                            Ok(())
                        }
                        None => {
                            for (i, t) in taus.iter().enumerate() {
                                println!("# tau_{}", i + 2);
                                print!("{}", series_text(series_fmt, t)?);
                            }
                            Ok(())
                        }
                    }
                }
                Selector::J => {
                    let js = (0..params.p as usize)
                        .map(|j| j_coefficient(&params, j, *q_order))
                        .collect::<Result<Vec<_>, _>>()?;
                    let v = serde_json::json!({ "variable": "u = v/z", "sectors": js });
                    emit(&cli.out, &json_only(fmt, v)?)
                }
                Selector::Rlimit => {
                    let rl = r_matrix_limit(&OrbifoldChartData::new(&params), *z_order)?;
                    emit(
                        &cli.out,
                        &json_only(fmt, serde_json::to_value(rl.to_json()).expect("plain data"))?,
                    )
                }
                Selector::Omega => {
                    let [g, n] = rest[..] else {
                        return Err(Failure::Usage("dump omega needs g and n".into()));
                    };
                    let q = parse_rational(q_value)?;
                    let curve = ConifoldCurve::new(params, q)?;
                    let w = with_escalation(eo_local_prec(g as u32, n), 8 * eo_local_prec(g as u32, n), |prec| {
                        EoSolver::new(&curve.model(prec)?).omega(g as u32, n)?.to_theta()
                    })?;
                    emit(&cli.out, &json_only(fmt, w.to_json())?)
                }
                Selector::Rcheck => {
                    let q = parse_rational(q_value)?;
                    let curve = ConifoldCurve::new(params, q)?;
                    let order = *z_order as usize + 1;
                    let start = r_check_local_prec(order) + 4;
                    let rc = with_escalation(start, 8 * start, |prec| {
                        r_check_matrix(&FormExpander::new(&curve.model(prec)?), order)
                    })?;
                    let entries: Vec<Vec<Vec<String>>> = rc
                        .entries
                        .iter()
                        .map(|row| row.iter().map(|e| e.iter().map(|c| c.to_string()).collect()).collect())
                        .collect();
                    let v = serde_json::json!({ "order": rc.order, "index": "entries[lower][upper][j]", "entries": entries });
                    emit(&cli.out, &json_only(fmt, v)?)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("MIRROR_RECURSION_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Degenerate(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
