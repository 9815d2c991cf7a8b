//! Output encodings. JSON documents carry `"schema": 1` at the top level.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use realgrass::fqcount::OracleModel;
use realgrass::homology::CohomologyTable;
use realgrass::incidence::{EdgeKind, IncidenceGraph};
use realgrass::kpflow::{CrossingEvent, DominanceGrid, SpectralData};
use realgrass::schubert::SchubertSymbol;
use realgrass::signs::Coefficients;
use realgrass::verify::VerifyReport;
use realgrass::IntPolynomial;

use crate::{Failure, Pair};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
    Csv,
}

impl Format {
    pub fn allow(self, ok: &[Format]) -> Result<(), Failure> {
        if ok.contains(&self) {
            Ok(())
        } else {
            let names: Vec<String> = ok
                .iter()
                .map(|f| f.to_possible_value().expect("no skipped variants").get_name().to_string())
                .collect();
            Err(Failure::Usage(format!(
                "format not available for this command; use one of {}",
                names.join(", ")
            )))
        }
    }
}

fn json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
pub struct Envelope {
    schema: u32,
    k: usize,
    n: usize,
    coefficients: Coefficients,
}

impl Envelope {
    pub fn new(pair: Pair, coefficients: Coefficients) -> Self {
        Self {
            schema: SCHEMA,
            k: pair.k,
            n: pair.n,
            coefficients,
        }
    }
}

#[derive(Serialize)]
pub struct CellRow {
    pub symbol: SchubertSymbol,
    pub dimension: usize,
    pub word: String,
    pub young: Vec<usize>,
}

pub fn cells(out: &mut impl Write, format: Format, k: usize, n: usize, rows: &[CellRow]) -> Result<(), Failure> {
    if format == Format::Text {
        for r in rows {
            writeln!(out, "{}\tdim={}\tword={}\tyoung={:?}", r.symbol, r.dimension, r.word, r.young)?;
        }
        return Ok(());
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        k: usize,
        n: usize,
        cells: &'a [CellRow],
    }
    json(out, &Doc { schema: SCHEMA, k, n, cells: rows })
}

fn kind_name(kind: EdgeKind) -> &'static str {
    match kind {
        EdgeKind::Single => "single",
        EdgeKind::Double => "double",
    }
}

pub fn graph(out: &mut impl Write, format: Format, g: &IncidenceGraph) -> Result<(), Failure> {
    let amb = g.ambient();
    if format == Format::Dot {
        let name = match g.coefficients() {
            Coefficients::Trivial => format!("G_{}_{}", amb.k(), amb.n()),
            Coefficients::Twisted => format!("G_{}_{}_twisted", amb.k(), amb.n()),
        };
        writeln!(out, "digraph {name} {{")?;
        writeln!(out, "  rankdir=TB;")?;
        for (s, h) in g.vertices().iter().zip(g.eta()) {
            writeln!(out, "  \"{s}\" [label=\"{s} | dim={} | eta={h}\"];", s.dimension())?;
        }
        for e in g.edges() {
            let style = match e.kind {
                EdgeKind::Double => "bold",
                EdgeKind::Single => "dashed",
            };
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"s{}\", style={style}];",
                g.vertices()[e.from],
                g.vertices()[e.to],
                e.reflection
            )?;
        }
        writeln!(out, "}}")?;
        return Ok(());
    }
    #[derive(Serialize)]
    struct Vertex<'a> {
        symbol: &'a SchubertSymbol,
        dimension: usize,
        eta: usize,
    }
    #[derive(Serialize)]
    struct Edge<'a> {
        from: &'a SchubertSymbol,
        to: &'a SchubertSymbol,
        reflection: usize,
        kind: &'static str,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        k: usize,
        n: usize,
        coefficients: Coefficients,
        signs: &'a [i8],
        vertices: Vec<Vertex<'a>>,
        edges: Vec<Edge<'a>>,
    }
    json(
        out,
        &Doc {
            schema: SCHEMA,
            k: amb.k(),
            n: amb.n(),
            coefficients: g.coefficients(),
            signs: g.signs().signs(),
            vertices: g
                .vertices()
                .iter()
                .zip(g.eta())
                .map(|(s, &eta)| Vertex {
                    symbol: s,
                    dimension: s.dimension(),
                    eta,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| Edge {
                    from: &g.vertices()[e.from],
                    to: &g.vertices()[e.to],
                    reflection: e.reflection,
                    kind: kind_name(e.kind),
                })
                .collect(),
        },
    )
}

pub fn table(out: &mut impl Write, format: Format, t: &CohomologyTable) -> Result<(), Failure> {
    if format == Format::Text {
        write!(out, "{t}")?;
        return Ok(());
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        #[serde(flatten)]
        table: &'a CohomologyTable,
    }
    json(out, &Doc { schema: SCHEMA, table: t })
}

pub fn polynomial(
    out: &mut impl Write,
    format: Format,
    env: &Envelope,
    source: Option<&str>,
    p: &IntPolynomial,
) -> Result<(), Failure> {
    if format == Format::Text {
        writeln!(out, "{p}")?;
        return Ok(());
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        env: &'a Envelope,
        #[serde(skip_serializing_if = "Option::is_none")]
        source: Option<&'a str>,
        polynomial: &'a IntPolynomial,
    }
    json(out, &Doc { env, source, polynomial: p })
}

#[derive(Serialize)]
pub struct FqReport {
    pub schema: u32,
    pub k: usize,
    pub n: usize,
    pub polynomial: IntPolynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<OracleModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r#match: Option<bool>,
}

pub fn fq(out: &mut impl Write, format: Format, r: &FqReport) -> Result<(), Failure> {
    if format == Format::Json {
        return json(out, r);
    }
    writeln!(out, "|Gr({},{})(F_q)| = {}", r.k, r.n, r.polynomial)?;
    if let (Some(q), Some(c)) = (r.q, r.closed) {
        writeln!(out, "q = {q}: closed {c}")?;
    }
    if let (Some(o), Some(m)) = (r.oracle, r.r#match) {
        writeln!(out, "oracle {o}, match {m}")?;
    }
    Ok(())
}

pub fn scan(
    out: &mut impl Write,
    format: Format,
    pair: Pair,
    data: &SpectralData<f64>,
    path: &[SchubertSymbol],
    samples: usize,
    crossings: &[CrossingEvent<f64>],
) -> Result<(), Failure> {
    if format == Format::Text {
        for c in crossings {
            writeln!(
                out,
                "segment {} s in [{:.6}, {:.6}]: {} -> {}",
                c.segment, c.s_interval[0], c.s_interval[1], c.from_cell, c.to_cell
            )?;
        }
        writeln!(out, "{} crossings", crossings.len())?;
        return Ok(());
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        k: usize,
        n: usize,
        lambdas: &'a [f64],
        signs: &'a [i8],
        path: &'a [SchubertSymbol],
        samples: usize,
        crossings: &'a [CrossingEvent<f64>],
    }
    json(
        out,
        &Doc {
            schema: SCHEMA,
            k: pair.k,
            n: pair.n,
            lambdas: data.lambdas(),
            signs: data.epsilon(),
            path,
            samples,
            crossings,
        },
    )
}

pub fn grid(out: &mut impl Write, format: Format, g: &DominanceGrid<f64>) -> Result<(), Failure> {
    if format == Format::Json {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: u32,
            #[serde(flatten)]
            grid: &'a DominanceGrid<f64>,
        }
        return json(out, &Doc { schema: SCHEMA, grid: g });
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Failure::Failed(e.to_string());
    w.write_record(["x", "y", "cell", "tau_sign"]).map_err(csv_err)?;
    for p in &g.points {
        w.write_record([p.x.to_string(), p.y.to_string(), p.cell.dashed(), p.tau_sign.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn verify(out: &mut impl Write, format: Format, r: &VerifyReport) -> Result<(), Failure> {
    if format == Format::Json {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: u32,
            passed: bool,
            #[serde(flatten)]
            report: &'a VerifyReport,
        }
        return json(
            out,
            &Doc {
                schema: SCHEMA,
                passed: r.all_passed(),
                report: r,
            },
        );
    }
    write!(out, "{r}")?;
    Ok(())
}
