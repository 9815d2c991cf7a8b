use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use realgrass::fqcount::{grass_points_closed, oracle_count, PrimePower};
use realgrass::homology::{cohomology_of, homology};
use realgrass::incidence::build_graph;
use realgrass::kpflow::{blowup_scan, center_path, dominance_grid, SpectralData, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use realgrass::qpoly::{p_from_graph, p_poly, p_star_poly, poincare, poincare_twisted};
use realgrass::schubert::{enum_symbols, symbol_to_word, young_diagram, SchubertSymbol};
use realgrass::signs::Coefficients;
use realgrass::verify::{run_suite, DEFAULT_MAX_N};
use realgrass::Error;

mod render;

use render::{Envelope, Format};

#[derive(Parser)]
#[command(name = "realgrass", version, about = "Integral cohomology of real Grassmannians and KP blow-ups")]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Pair {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Closed,
    Graph,
}

#[derive(Subcommand)]
enum Command {
    /// Schubert cells with dimension, reduced word and Young diagram.
    Cells {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Weak Bruhat graph with single/double edge tags and η.
    Graph {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        twisted: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Integral cohomology, one group per degree.
    Cohomology {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        twisted: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Integral homology through duality.
    Homology {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rational Poincaré polynomial.
    Poincare {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        twisted: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The alternating η polynomial p(q).
    Ppoly {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        twisted: bool,
        #[arg(long, value_enum, default_value = "closed")]
        source: Source,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Point count over F_q, optionally checked by enumeration.
    Fq {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, requires = "q")]
        oracle: bool,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sign changes of τ along straight segments between cell centers.
    KpScan {
        #[command(flatten)]
        pair: Pair,
        /// Cells separated by ';', entries by ',', e.g. "1,2;1,3".
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        /// Override the sign vector, e.g. "+,+,+,+".
        #[arg(long)]
        signs: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Dominant cell and τ sign over an (x, y) grid.
    KpGrid {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        t3: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        signs: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Everything that ends a run early, with its exit code.
enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A computation or verification failed: exit 1.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_)
            | Error::InvalidWord { .. }
            | Error::Unsupported(_)
            | Error::Resource(_)
            | Error::Precondition(_) => Failure::Usage(e.to_string()),
            Error::Consistency(_) | Error::Construction(_) | Error::NoCenter { .. } => Failure::Failed(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(format!("write failed: {e}"))
    }
}

fn coefficients(twisted: bool) -> Coefficients {
    if twisted {
        Coefficients::Twisted
    } else {
        Coefficients::Trivial
    }
}

fn parse_cells(spec: &str, n: usize) -> Result<Vec<SchubertSymbol>, Failure> {
    spec.split(';')
        .map(|cell| {
            let entries = cell
                .split(',')
                .map(|e| e.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("cannot read cell '{cell}'")))?;
            Ok(SchubertSymbol::new(&entries, n)?)
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::Usage(format!("range '{s}' is not of the form A:B"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_signs(s: &str) -> Result<Vec<i8>, Failure> {
    s.split(',')
        .map(|t| match t.trim() {
            "+" | "1" | "+1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(Failure::Usage(format!("bad sign '{other}'"))),
        })
        .collect()
}

fn spectral(k: usize, n: usize, signs: Option<&str>) -> Result<SpectralData<f64>, Failure> {
    let data = SpectralData::default_for(k, n)?;
    Ok(match signs {
        Some(s) => data.with_signs(&parse_signs(s)?)?,
        None => data,
    })
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Cells { pair, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            let cells = enum_symbols(pair.k, pair.n)?;
            let rows: Vec<render::CellRow> = cells
                .iter()
                .map(|s| render::CellRow {
                    symbol: s.clone(),
                    dimension: s.dimension(),
                    word: symbol_to_word(s).to_string(),
                    young: young_diagram(s),
                })
                .collect();
            render::cells(out, format, pair.k, pair.n, &rows)?;
        }
        Command::Graph { pair, twisted, format } => {
            format.allow(&[Format::Json, Format::Dot])?;
            let g = build_graph(pair.k, pair.n, coefficients(twisted))?;
            render::graph(out, format, &g)?;
        }
        Command::Cohomology { pair, twisted, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            let t = cohomology_of(pair.k, pair.n, coefficients(twisted))?;
            render::table(out, format, &t)?;
        }
        Command::Homology { pair, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            render::table(out, format, &homology(pair.k, pair.n)?)?;
        }
        Command::Poincare { pair, twisted, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            let p = if twisted {
                poincare_twisted(pair.k, pair.n)?
            } else {
                poincare(pair.k, pair.n)?
            };
            render::polynomial(out, format, &Envelope::new(pair, coefficients(twisted)), None, &p)?;
        }
        Command::Ppoly { pair, twisted, source, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            let p = match (source, twisted) {
                (Source::Closed, false) => p_poly(pair.k, pair.n)?,
                (Source::Closed, true) => p_star_poly(pair.k, pair.n)?,
                (Source::Graph, t) => p_from_graph(&build_graph(pair.k, pair.n, coefficients(t))?),
            };
            let src = match source {
                Source::Closed => "closed",
                Source::Graph => "graph",
            };
            render::polynomial(out, format, &Envelope::new(pair, coefficients(twisted)), Some(src), &p)?;
        }
        Command::Fq { pair, oracle, q, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            let closed = grass_points_closed(pair.k, pair.n)?;
            let mut report = render::FqReport {
                schema: render::SCHEMA,
                k: pair.k,
                n: pair.n,
                polynomial: closed.clone(),
                q: None,
                closed: None,
                oracle: None,
                model: None,
                r#match: None,
            };
            if let Some(q) = q {
                let pp = PrimePower::new(q)?;
                let value = closed.eval(&BigInt::from(q));
                report.q = Some(q);
                report.closed = Some(
                    u128::try_from(&value).map_err(|_| Failure::Usage(format!("count {value} exceeds u128")))?,
                );
                if oracle {
                    let o = oracle_count(pair.k, pair.n, &pp)?;
                    report.oracle = Some(o.count);
                    report.model = Some(o.model);
                    report.r#match = Some(o.matches);
                }
            }
            render::fq(out, format, &report)?;
            if report.r#match == Some(false) {
                return Err(Failure::Failed("oracle count disagrees with the closed form".into()));
            }
        }
        Command::KpScan {
            pair,
            path,
            samples,
            radius,
            signs,
            format,
        } => {
            format.allow(&[Format::Json, Format::Text])?;
            let data = spectral(pair.k, pair.n, signs.as_deref())?;
            let cells = parse_cells(&path, pair.n)?;
            if cells.iter().any(|c| c.k() != pair.k) {
                return Err(Failure::Usage(format!("every cell on the path needs {} entries", pair.k)));
            }
            let waypoints = center_path(&cells, &data, radius)?;
            let crossings = blowup_scan(pair.k, &data, &waypoints, samples)?;
            render::scan(out, format, pair, &data, &cells, samples, &crossings)?;
        }
        Command::KpGrid {
            pair,
            t3,
            x,
            y,
            step,
            signs,
            format,
        } => {
            format.allow(&[Format::Csv, Format::Json])?;
            let data = spectral(pair.k, pair.n, signs.as_deref())?;
            let grid = dominance_grid(pair.k, &data, t3, parse_range(&x)?, parse_range(&y)?, step)?;
            render::grid(out, format, &grid)?;
        }
        Command::Verify { max_n, format } => {
            format.allow(&[Format::Json, Format::Text])?;
            let report = run_suite(max_n)?;
            render::verify(out, format, &report)?;
            if !report.all_passed() {
                return Err(Failure::Failed("verification failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot set up {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
