//! Text formats and the command-line front end.
//!
//! Surface files:
//!
//! ```text
//! ideal-triangulation v1
//! tri 0: 1.0 1.1 1.2
//! tri 1: 0.0 0.1 0.2
//! ```
//!
//! Experiment files:
//!
//! ```text
//! experiment v1
//! surface: once_punctured_torus
//! shears: e0=0.5 e1=0.3 e2=-0.8
//! curves:
//!   A = 0.0>1 1.1>0
//!   B = @0 e2 e0
//! grid: 0 12 0.5
//! ```
//!
//! `surface: inline` is followed by `tri` lines. Curves are corner words
//! (`triangle.entry>exit`) or, after `@<triangle>`, the edges crossed in
//! order. Optional `tolerances:` and `precision:` lines override defaults.
//! Blank lines and lines starting with `#` are ignored.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{check_complete, curve_log_length, stretch, GeometryError, Precision, ShearPoint};
use crate::harness::{self, Grid, HarnessError, NamedCurve, StretchExperiment, SurfaceSource, Tolerances};
use crate::horogeodesic::{sandwich_check, singular_graph, HorogeodesicError};
use crate::numeric::format_real;
use crate::topology::{
    standard_surface, CurveWord, EdgeId, IdealTriangulation, Slot, StandardSurface, Step, TopologyError,
};

const SURFACE_HEADER: &str = "ideal-triangulation v1";
const EXPERIMENT_HEADER: &str = "experiment v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid triangulation: {0}")]
    Validation(TopologyError),
    #[error("line {line}: curve `{name}`: {source}")]
    InvalidCurve {
        line: usize,
        name: String,
        source: TopologyError,
    },
    #[error("line {line}: unknown edge {name}")]
    UnknownEdge { line: usize, name: String },
    #[error("structure is incomplete at cusp {cusp} (shear sum {residual})")]
    IncompleteStructure { cusp: usize, residual: f64 },
    #[error(transparent)]
    Geometry(GeometryError),
    #[error(transparent)]
    Harness(HarnessError),
}

fn parse_err(line: usize, reason: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        reason: reason.into(),
    }
}

impl From<GeometryError> for IoError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::IncompleteStructure { cusp, residual } => IoError::IncompleteStructure { cusp, residual },
            other => IoError::Geometry(other),
        }
    }
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_real(line: usize, s: &str) -> Result<f64, IoError> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(parse_err(line, format!("`{s}` is not a finite number"))),
    }
}

fn parse_tri_line(line: usize, l: &str, expected: usize) -> Result<[Slot; 3], IoError> {
    let rest = l
        .strip_prefix("tri ")
        .ok_or_else(|| parse_err(line, "expected `tri <i>: <t>.<s> <t>.<s> <t>.<s>`"))?;
    let (index, sides) = rest
        .split_once(':')
        .ok_or_else(|| parse_err(line, "missing `:` after the triangle index"))?;
    let index: usize = index
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad triangle index `{}`", index.trim())))?;
    if index != expected {
        return Err(parse_err(line, format!("expected triangle {expected}, found {index}")));
    }
    let slots: Vec<Slot> = sides
        .split_whitespace()
        .map(|tok| {
            let bad = || parse_err(line, format!("bad side `{tok}`"));
            let (t, s) = tok.split_once('.').ok_or_else(bad)?;
            Ok(Slot::new(t.parse().map_err(|_| bad())?, s.parse().map_err(|_| bad())?))
        })
        .collect::<Result<_, IoError>>()?;
    slots
        .try_into()
        .map_err(|v: Vec<Slot>| parse_err(line, format!("expected 3 sides, found {}", v.len())))
}

pub fn parse_surface(text: &str) -> Result<IdealTriangulation, IoError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, SURFACE_HEADER)) => {}
        Some((n, _)) => return Err(parse_err(n, format!("expected header `{SURFACE_HEADER}`"))),
        None => return Err(parse_err(1, "empty file")),
    }
    let mut gluing = Vec::new();
    for (n, l) in lines {
        gluing.push(parse_tri_line(n, l, gluing.len())?);
    }
    IdealTriangulation::new(gluing).map_err(IoError::Validation)
}

fn print_tri_lines(tri: &IdealTriangulation, out: &mut String) {
    for (t, sides) in tri.gluing_table().iter().enumerate() {
        out.push_str(&format!("tri {t}: {} {} {}\n", sides[0], sides[1], sides[2]));
    }
}

pub fn print_surface(tri: &IdealTriangulation) -> String {
    let mut out = format!("{SURFACE_HEADER}\n");
    print_tri_lines(tri, &mut out);
    out
}

fn parse_edge(line: usize, tok: &str, tri: &IdealTriangulation) -> Result<EdgeId, IoError> {
    let k: usize = tok
        .strip_prefix('e')
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| parse_err(line, format!("bad edge name `{tok}`")))?;
    if k >= tri.edge_count() {
        return Err(IoError::UnknownEdge {
            line,
            name: tok.to_string(),
        });
    }
    Ok(EdgeId(k))
}

fn parse_curve(line: usize, name: &str, body: &str, tri: &IdealTriangulation) -> Result<CurveWord, IoError> {
    let invalid = |source| IoError::InvalidCurve {
        line,
        name: name.to_string(),
        source,
    };
    let mut toks = body.split_whitespace().peekable();
    if let Some(start) = toks.peek().and_then(|t| t.strip_prefix('@')) {
        let start: usize = start
            .parse()
            .map_err(|_| parse_err(line, format!("bad start triangle `@{start}`")))?;
        toks.next();
        let edges = toks.map(|t| parse_edge(line, t, tri)).collect::<Result<Vec<_>, _>>()?;
        return CurveWord::from_edge_path(tri, start, &edges).map_err(invalid);
    }
    let steps = toks
        .map(|tok| {
            let bad = || parse_err(line, format!("bad step `{tok}`, expected `t.entry>exit`"));
            let (t, rest) = tok.split_once('.').ok_or_else(bad)?;
            let (a, b) = rest.split_once('>').ok_or_else(bad)?;
            Ok(Step::new(
                t.parse().map_err(|_| bad())?,
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
            ))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    CurveWord::new(tri, steps).map_err(invalid)
}

fn parse_tolerances(line: usize, body: &str, tol: &mut Tolerances) -> Result<(), IoError> {
    for tok in body.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected key=value, found `{tok}`")))?;
        let v = parse_real(line, v)?;
        match k {
            "epsilon_i" => tol.epsilon_i = v,
            "epsilon_length" => tol.epsilon_length = v,
            "slope_min" => tol.slope_min = v,
            "slope_max" => tol.slope_max = v,
            "bounded_ratio" => tol.bounded_ratio = v,
            other => return Err(parse_err(line, format!("unknown tolerance `{other}`"))),
        }
    }
    Ok(())
}

pub fn parse_grid(s: &str) -> Result<Grid, HarnessError> {
    let parts: Vec<&str> = s
        .split(|c: char| c == ':' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| HarnessError::BadGrid(format!("`{s}` is not `t0 t1 step`")))?;
    match nums.as_slice() {
        [t0, t1, step] => Grid::new(*t0, *t1, *step),
        _ => Err(HarnessError::BadGrid(format!("`{s}` is not `t0 t1 step`"))),
    }
}

pub fn parse_experiment(text: &str) -> Result<StretchExperiment, IoError> {
    let mut lines = content_lines(text).peekable();
    match lines.next() {
        Some((_, EXPERIMENT_HEADER)) => {}
        Some((n, _)) => return Err(parse_err(n, format!("expected header `{EXPERIMENT_HEADER}`"))),
        None => return Err(parse_err(1, "empty file")),
    }
    let mut surface: Option<(SurfaceSource, Arc<IdealTriangulation>)> = None;
    let mut shears: Option<(usize, Vec<f64>)> = None;
    let mut curves: Vec<NamedCurve> = Vec::new();
    let mut grid = Grid::default();
    let mut tolerances = Tolerances::default();
    let mut precision = Precision::default();
    let need_surface = |s: &Option<(SurfaceSource, Arc<IdealTriangulation>)>, n: usize| {
        s.as_ref()
            .map(|(_, t)| t.clone())
            .ok_or_else(|| parse_err(n, "`surface:` must come first"))
    };
    while let Some((n, l)) = lines.next() {
        let (key, body) = l
            .split_once(':')
            .ok_or_else(|| parse_err(n, format!("expected `key: value`, found `{l}`")))?;
        let body = body.trim();
        match key.trim() {
            "surface" if surface.is_some() => return Err(parse_err(n, "duplicate `surface:`")),
            "surface" if body == "inline" => {
                let mut gluing = Vec::new();
                while let Some(&(m, tl)) = lines.peek() {
                    if !tl.starts_with("tri ") {
                        break;
                    }
                    gluing.push(parse_tri_line(m, tl, gluing.len())?);
                    lines.next();
                }
                let tri = IdealTriangulation::new(gluing).map_err(IoError::Validation)?;
                surface = Some((SurfaceSource::Inline, Arc::new(tri)));
            }
            "surface" => {
                let kind: StandardSurface = body
                    .parse()
                    .map_err(|_| parse_err(n, format!("unknown surface `{body}`")))?;
                surface = Some((SurfaceSource::Standard(kind), Arc::new(standard_surface(kind))));
            }
            "shears" => {
                let tri = need_surface(&surface, n)?;
                let mut values: Vec<Option<f64>> = vec![None; tri.edge_count()];
                for tok in body.split_whitespace() {
                    let (e, v) = tok
                        .split_once('=')
                        .ok_or_else(|| parse_err(n, format!("expected e<k>=<real>, found `{tok}`")))?;
                    let e = parse_edge(n, e, &tri)?;
                    if values[e.0].replace(parse_real(n, v)?).is_some() {
                        return Err(parse_err(n, format!("{e} given twice")));
                    }
                }
                let values = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v.ok_or_else(|| parse_err(n, format!("no shear for e{k}"))))
                    .collect::<Result<_, _>>()?;
                shears = Some((n, values));
            }
            "curves" => {
                let tri = need_surface(&surface, n)?;
                if !body.is_empty() {
                    return Err(parse_err(n, "curves go on the following lines"));
                }
                while let Some(&(m, cl)) = lines.peek() {
                    let Some((name, word)) = cl.split_once('=') else { break };
                    let name = name.trim();
                    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
                        return Err(parse_err(m, format!("bad curve name `{name}`")));
                    }
                    if curves.iter().any(|c| c.name == name) {
                        return Err(parse_err(m, format!("duplicate curve `{name}`")));
                    }
                    curves.push(NamedCurve {
                        name: name.to_string(),
                        word: parse_curve(m, name, word, &tri)?,
                    });
                    lines.next();
                }
            }
            "grid" => grid = parse_grid(body).map_err(|e| parse_err(n, e.to_string()))?,
            "tolerances" => parse_tolerances(n, body, &mut tolerances)?,
            "precision" => precision = body.parse().map_err(|e: String| parse_err(n, e))?,
            other => return Err(parse_err(n, format!("unknown key `{other}`"))),
        }
    }
    let (source, tri) = surface.ok_or_else(|| parse_err(1, "missing `surface:`"))?;
    let (_, shears) = shears.ok_or_else(|| parse_err(1, "missing `shears:`"))?;
    let base = ShearPoint::new(tri, shears)?;
    check_complete(&base)?;
    let mut e = StretchExperiment::new(source, base, curves).map_err(|e| match e {
        HarnessError::Geometry(g) => IoError::from(g),
        other => IoError::Harness(other),
    })?;
    e.grid = grid;
    e.tolerances = tolerances;
    e.precision = precision;
    Ok(e)
}

pub fn print_experiment(e: &StretchExperiment) -> String {
    let mut out = format!("{EXPERIMENT_HEADER}\n");
    match e.source {
        SurfaceSource::Standard(kind) => out.push_str(&format!("surface: {}\n", kind.name())),
        SurfaceSource::Inline => {
            out.push_str("surface: inline\n");
            print_tri_lines(e.triangulation(), &mut out);
        }
    }
    let shears: Vec<String> = e
        .base
        .shears()
        .iter()
        .enumerate()
        .map(|(k, x)| format!("e{k}={}", format_real(*x)))
        .collect();
    out.push_str(&format!("shears: {}\n", shears.join(" ")));
    out.push_str("curves:\n");
    for c in &e.curves {
        out.push_str(&format!("  {} = {}\n", c.name, c.word));
    }
    let g = e.grid;
    out.push_str(&format!(
        "grid: {} {} {}\n",
        format_real(g.t0),
        format_real(g.t1),
        format_real(g.step)
    ));
    let t = e.tolerances;
    out.push_str(&format!(
        "tolerances: epsilon_i={} epsilon_length={} slope_min={} slope_max={} bounded_ratio={}\n",
        format_real(t.epsilon_i),
        format_real(t.epsilon_length),
        format_real(t.slope_min),
        format_real(t.slope_max),
        format_real(t.bounded_ratio)
    ));
    out.push_str(match e.precision {
        Precision::Double => "precision: double\n",
        Precision::Extended => "precision: extended\n",
    });
    out
}

#[derive(Parser)]
#[command(name = "horostretch", version, about = "Lengths of curves along stretch rays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Surface files
    Surface {
        #[command(subcommand)]
        action: SurfaceAction,
    },
    /// Curve lengths at one point of the ray
    Curve {
        #[command(subcommand)]
        action: CurveAction,
    },
    /// Stretch-ray experiments
    Stretch {
        #[command(subcommand)]
        action: StretchAction,
    },
    /// Intersection/length sandwich
    Sandwich {
        #[command(subcommand)]
        action: SandwichAction,
    },
    /// Leaves of the horocyclic foliation through distinguished points
    SingularGraph(Common),
}

#[derive(Subcommand)]
enum SurfaceAction {
    Validate(Common),
}

#[derive(Subcommand)]
enum CurveAction {
    Length(Common),
}

#[derive(Subcommand)]
enum StretchAction {
    Run(Common),
}

#[derive(Subcommand)]
enum SandwichAction {
    Check(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stretch time
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// t0:t1:step
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    precision: Option<Precision>,
}

enum CliError {
    Io(String),
    Input(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn read_input(c: &Common) -> Result<String, CliError> {
    std::fs::read_to_string(&c.input).map_err(|e| CliError::Io(format!("{}: {e}", c.input.display())))
}

fn load_experiment(c: &Common) -> Result<StretchExperiment, CliError> {
    let mut e = parse_experiment(&read_input(c)?)?;
    if let Some(p) = c.precision {
        e.precision = p;
    }
    if let Some(g) = &c.grid {
        e.grid = parse_grid(g).map_err(|err| CliError::Input(err.to_string()))?;
    }
    Ok(e)
}

fn emit(c: &Common, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn surface_validate(c: &Common, stdout: &mut dyn Write) -> Result<(), CliError> {
    let tri = parse_surface(&read_input(c)?)?;
    #[derive(Serialize)]
    struct Summary {
        triangles: usize,
        edges: usize,
        euler_characteristic: i64,
        cusps: Vec<usize>,
    }
    let s = Summary {
        triangles: tri.triangle_count(),
        edges: tri.edge_count(),
        euler_characteristic: tri.euler_characteristic(),
        cusps: tri.cusps().iter().map(|k| k.len()).collect(),
    };
    let text = match c.format {
        Format::Json => to_json(&s),
        Format::Csv => format!(
            "triangles,edges,euler_characteristic,cusps\n{},{},{},{}\n",
            s.triangles,
            s.edges,
            s.euler_characteristic,
            s.cusps.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
        ),
    };
    emit(c, &text, stdout)
}

fn curve_length_cmd(c: &Common, stdout: &mut dyn Write) -> Result<(), CliError> {
    let e = load_experiment(c)?;
    let t = c.t.unwrap_or(0.0);
    let h = stretch(&e.base, t);
    #[derive(Serialize)]
    struct Row<'a> {
        curve_id: &'a str,
        t: f64,
        length: f64,
        log_length: f64,
        peripheral: bool,
    }
    let mut rows = Vec::new();
    for curve in &e.curves {
        let (log_length, peripheral) = match curve_log_length(&h, &curve.word, e.precision) {
            Ok(v) => (v, false),
            Err(GeometryError::PeripheralOrTrivial { .. }) if curve.word.is_peripheral() => (f64::NEG_INFINITY, true),
            Err(err) => return Err(numerical(format!("{}: {err}", curve.name))),
        };
        rows.push(Row {
            curve_id: &curve.name,
            t,
            length: log_length.exp(),
            log_length,
            peripheral,
        });
    }
    let text = match c.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("curve_id,t,length,log_length,peripheral\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.curve_id,
                    format_real(r.t),
                    format_real(r.length),
                    format_real(r.log_length),
                    r.peripheral
                ));
            }
            s
        }
    };
    emit(c, &text, stdout)
}

fn stretch_run(c: &Common, stdout: &mut dyn Write) -> Result<(), CliError> {
    let e = load_experiment(c)?;
    let report = harness::run(&e);
    match (c.format, &c.out) {
        (Format::Csv, Some(path)) => {
            harness::export(&report, path).map_err(|err| CliError::Io(err.to_string()))?;
        }
        (Format::Csv, None) => emit(c, &harness::to_csv(&report), stdout)?,
        (Format::Json, _) => emit(c, &to_json(&report), stdout)?,
    }
    let failures: Vec<String> = report
        .curves
        .iter()
        .filter_map(|k| k.error.as_ref().map(|m| format!("{}: {m}", k.name)))
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(failures.join("\n")))
    }
}

fn sandwich_cmd(c: &Common, stdout: &mut dyn Write) -> Result<(), CliError> {
    let e = load_experiment(c)?;
    let t = c.t.unwrap_or(0.0);
    let h = stretch(&e.base, t);
    #[derive(Serialize)]
    struct Row<'a> {
        curve_id: &'a str,
        t: f64,
        i: f64,
        length: f64,
        l: f64,
        ok: bool,
    }
    let mut rows = Vec::new();
    for curve in e.curves.iter().filter(|k| !k.word.is_peripheral()) {
        let r = sandwich_check(&h, &curve.word).map_err(|err| match err {
            HorogeodesicError::Geometry(g) => numerical(format!("{}: {g}", curve.name)),
            other => numerical(format!("{}: {other}", curve.name)),
        })?;
        rows.push(Row {
            curve_id: &curve.name,
            t,
            i: r.i,
            length: r.length,
            l: r.l,
            ok: r.ok,
        });
    }
    let text = match c.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("curve_id,t,i,length,L,ok\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.curve_id,
                    format_real(r.t),
                    format_real(r.i),
                    format_real(r.length),
                    format_real(r.l),
                    r.ok
                ));
            }
            s
        }
    };
    emit(c, &text, stdout)?;
    let bad: Vec<&str> = rows.iter().filter(|r| !r.ok).map(|r| r.curve_id).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(numerical(format!("sandwich fails for {}", bad.join(", "))))
    }
}

fn singular_graph_cmd(c: &Common, stdout: &mut dyn Write) -> Result<(), CliError> {
    let e = load_experiment(c)?;
    let g = singular_graph(&stretch(&e.base, c.t.unwrap_or(0.0)));
    let text = match c.format {
        Format::Json => to_json(&g),
        Format::Csv => {
            let mut s = String::from("vertices,edges,leaves,capped_leaves,crossing_cap,essential_cycles\n");
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                g.vertices.len(),
                g.edges.len(),
                g.leaf_count(),
                g.capped_leaves,
                g.crossing_cap,
                g.essential_cycles.len()
            ));
            s
        }
    };
    emit(c, &text, stdout)
}

/// Runs the command line; returns the process exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Surface {
            action: SurfaceAction::Validate(c),
        } => surface_validate(c, stdout),
        Command::Curve {
            action: CurveAction::Length(c),
        } => curve_length_cmd(c, stdout),
        Command::Stretch {
            action: StretchAction::Run(c),
        } => stretch_run(c, stdout),
        Command::Sandwich {
            action: SandwichAction::Check(c),
        } => sandwich_cmd(c, stdout),
        Command::SingularGraph(c) => singular_graph_cmd(c, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}
