use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use eiscurve::analyzer::{
    analyze_point, scan, write_json_lines, ScanConfig, DEFAULT_PRECISION, DEFAULT_TERMS,
};
use eiscurve::exec::Execution;
use eiscurve::kubota_leopoldt::{lp_interpolation, lp_series, lp_series_at_integer};
use eiscurve::padic::{parse, PadicContext};
use eiscurve::qexp::{eisenstein_critical, eisenstein_ordinary};
use eiscurve::weight::{check_admissible, TwinConvention, WeightPoint};
use eiscurve::{Error, Result};

#[derive(Parser)]
#[command(name = "eiscurve", version, about = "Critical Eisenstein points and the Kubota-Leopoldt zeta function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Crit,
    Ord,
    Twin,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Series,
    Interpolation,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one critical point z^k omega^i.
    Analyze {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        eps_exponent: i64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        qexp_terms: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Scan ranges of primes and weights, writing JSON lines.
    Scan {
        #[arg(long)]
        p_from: u64,
        #[arg(long)]
        p_to: u64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        k_from: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        k_to: i64,
        /// Only report irregular branches, no points.
        #[arg(long)]
        irregular_only: bool,
        /// Choose i so that zeta_p(w*) lies on this branch.
        #[arg(long)]
        twin_branch: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        qexp_terms: usize,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate L_p(s, omega^j): a JSON line, then the value in base p.
    Lp {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        branch: i64,
        /// An integer, or a p-adic expansion such as "1 + 3*5 + O(5^10)".
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, value_enum, default_value = "series")]
        route: RouteArg,
    },
    /// Dump a q-expansion, one coefficient per line.
    Qexp {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        eps_exponent: i64,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, value_enum)]
        which: Which,
    },
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze {
            p,
            k,
            eps_exponent,
            precision,
            qexp_terms,
            format,
        } => {
            let report = analyze_point(p, k, eps_exponent, precision, qexp_terms)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                Format::Text => write!(out, "{}", report.render_text())?,
            }
        }
        Command::Scan {
            p_from,
            p_to,
            k_from,
            k_to,
            irregular_only,
            twin_branch,
            precision,
            qexp_terms,
            sequential,
            out: path,
        } => {
            let cfg = ScanConfig {
                p_from,
                p_to,
                k_from,
                k_to,
                irregular_only,
                twin_branch,
                precision,
                terms: qexp_terms,
                execution: if sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
            };
            let file = File::create(&path)?;
            let records = scan(&cfg)?;
            write_json_lines(&records, BufWriter::new(file))?;
        }
        Command::Lp {
            p,
            branch,
            s,
            precision,
            route,
        } => {
            let ctx = PadicContext::new(p, precision)?;
            let value = match (s.trim().parse::<i64>(), route) {
                (Ok(n), RouteArg::Series) => lp_series_at_integer(n, branch, ctx)?,
                (Ok(n), RouteArg::Interpolation) => {
                    if n > 0 {
                        return Err(Error::Domain(format!(
                            "the interpolation route needs s <= 0, got {n}"
                        )));
                    }
                    lp_interpolation((1 - n) as u32, branch, ctx)?
                }
                (Err(_), RouteArg::Series) => lp_series(&parse(&s, ctx)?, branch, ctx)?,
                (Err(_), RouteArg::Interpolation) => {
                    return Err(Error::Domain("the interpolation route needs an integer s".into()))
                }
            };
            serde_json::to_writer(&mut out, &value)?;
            writeln!(out)?;
            writeln!(out, "{}", value.value)?;
        }
        Command::Qexp {
            p,
            k,
            eps_exponent,
            terms,
            precision,
            which,
        } => {
            let ctx = PadicContext::new(p, precision)?;
            check_admissible(p, k, eps_exponent)?;
            let w = WeightPoint::classical(k, eps_exponent, ctx)?;
            let series = match which {
                Which::Crit => eisenstein_critical(k, eps_exponent, terms, ctx)?,
                Which::Ord => eisenstein_ordinary(&w, terms, ctx)?.series,
                Which::Twin => {
                    let twin = w
                        .twin(TwinConvention::InverseCharacter)
                        .ok_or_else(|| Error::InternalCheck("twin weight is not classical".into()))?;
                    eisenstein_ordinary(&twin, terms, ctx)?.series
                }
            };
            write!(out, "{}", series.dump())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
