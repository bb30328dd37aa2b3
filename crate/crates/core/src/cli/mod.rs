//! Command-line front end.
//!
//! Sites are addressed by name or by 1-based label. Exit codes: 0 success,
//! 1 failed verification or a numerical breakdown, 2 invalid request (with a
//! JSON error object on stderr), 3 quadrature did not converge (the value is
//! still printed).

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gridohm::catalog;
use gridohm::document;
use gridohm::mappings::{self, MappedLattice, ReferenceResistances};
use gridohm::spectral::{self, QuadratureConfig};
use gridohm::torus::{self, TorusConfig};
use gridohm::verify::{self, Tolerances, Verifier};
use gridohm::{Error, LatticeSpec, ResistanceQuery, Result};

use format::{csv_number, csv_table, json_number, pretty, text_number, text_table};

const FORMAT_VERSION: u32 = 1;
const THREADS_VAR: &str = "GRIDOHM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gridohm", version, about = "Two-point resistance of infinite periodic resistor networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Resistance between two nodes.
    Compute(ComputeArgs),
    /// Resistances for every site pair and every offset up to a bound.
    Table(TableArgs),
    /// Spectral orders and torus sizes side by side.
    Converge(ConvergeArgs),
    /// Reproduce published resistance values.
    Verify(VerifyArgs),
    /// Built-in lattices.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Spectral,
    Torus,
    Mapping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TorusMethod {
    Kspace,
    Realspace,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    /// Catalog name or path to a lattice document.
    #[arg(long)]
    lattice: String,
    /// Bond resistance parameters for catalog lattices (chain2 takes R1,R2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    resistance: Vec<f64>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Source site (name or 1-based label).
    #[arg(long)]
    from: String,
    /// Sink site (name or 1-based label).
    #[arg(long)]
    to: String,
    /// Cell offset of the sink, comma separated; zeros if omitted.
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<String>,
}

#[derive(Debug, Args)]
struct QuadratureArgs {
    /// Initial nodes per axis (even).
    #[arg(long)]
    order: Option<usize>,
    /// Maximum number of order doublings.
    #[arg(long)]
    refinements: Option<usize>,
    /// Target relative error.
    #[arg(long)]
    target: Option<f64>,
}

impl QuadratureArgs {
    fn config(&self, d: usize) -> Result<QuadratureConfig> {
        let mut cfg = QuadratureConfig::for_dimension(d);
        if let Some(o) = self.order {
            cfg.order = o;
        }
        if let Some(r) = self.refinements {
            cfg.max_refinements = r;
        }
        if let Some(t) = self.target {
            cfg.target_rel_error = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value = "spectral")]
    engine: Engine,
    #[command(flatten)]
    quadrature: QuadratureArgs,
    /// Torus cells per direction: one size for all, or comma separated.
    #[arg(long, default_value = "16")]
    torus_size: String,
    #[arg(long, value_enum, default_value = "kspace")]
    torus_method: TorusMethod,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Include wall-clock time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Largest |n_i| of the cell offsets.
    #[arg(long, default_value_t = 0)]
    max_offset: i64,
    #[command(flatten)]
    quadrature: QuadratureArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    query: QueryArgs,
    /// Strictly ascending quadrature orders.
    #[arg(long, value_delimiter = ',')]
    orders: Vec<usize>,
    /// Ascending torus sizes (cells per direction).
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Restrict to one or more groups.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Relative tolerance against 4-digit published values.
    #[arg(long, default_value_t = Tolerances::default().numeric)]
    numeric_tol: f64,
    /// Relative tolerance against closed forms.
    #[arg(long, default_value_t = Tolerances::default().exact)]
    exact_tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Names, dimensions and site counts.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Canonical lattice document of a catalog entry.
    Export {
        name: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        resistance: Vec<f64>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// What a command printed and how the process should exit.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            let object = json!({
                "format": FORMAT_VERSION,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            eprint!("{}", pretty(&object));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } => 3,
        Error::SingularPoint { .. } => 1,
        _ => 2,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Compute(a) => compute(a),
        Command::Table(a) => table(a),
        Command::Converge(a) => converge(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Catalog(c) => catalog_cmd(c),
    }
}

/// A lattice loaded from the catalog or a document.
struct Loaded {
    label: String,
    catalog_name: Option<&'static str>,
    params: Vec<f64>,
    spec: LatticeSpec,
}

fn load(args: &LatticeArgs) -> Result<Loaded> {
    if let Some(info) = catalog::list_catalog().into_iter().find(|i| i.name == args.lattice) {
        let entry = catalog::builtin(info.name, &args.resistance)?;
        return Ok(Loaded {
            label: info.name.to_string(),
            catalog_name: Some(info.name),
            params: args.resistance.clone(),
            spec: entry.spec,
        });
    }
    let path = Path::new(&args.lattice);
    if !path.exists() {
        return Err(Error::UnknownLattice(format!(
            "`{}` is neither a catalog name nor a file",
            args.lattice
        )));
    }
    if !args.resistance.is_empty() {
        return Err(Error::InvalidArgument(
            "--resistance applies to catalog lattices only".into(),
        ));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
    Ok(Loaded {
        label: args.lattice.clone(),
        catalog_name: None,
        params: Vec::new(),
        spec: document::from_json(&text)?,
    })
}

fn parse_site(spec: &LatticeSpec, s: &str) -> Result<usize> {
    if let Some(i) = spec.site_index(s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(label) if (1..=spec.num_sites()).contains(&label) => Ok(label - 1),
        _ => Err(Error::UnknownSite(s.to_string())),
    }
}

fn parse_offset(spec: &LatticeSpec, s: Option<&str>) -> Result<Vec<i64>> {
    let Some(s) = s else {
        return Ok(vec![0; spec.dimension()]);
    };
    let offset = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("offset component `{t}` is not an integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    if offset.len() != spec.dimension() {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension(),
            found: offset.len(),
        });
    }
    Ok(offset)
}

fn parse_query(spec: &LatticeSpec, q: &QueryArgs) -> Result<ResistanceQuery> {
    Ok(ResistanceQuery::new(
        parse_site(spec, &q.from)?,
        parse_site(spec, &q.to)?,
        parse_offset(spec, q.offset.as_deref())?,
    ))
}

fn parse_sizes(s: &str, d: usize) -> Result<TorusConfig> {
    let sizes = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidTorus(format!("size `{t}` is not a positive integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    match sizes.as_slice() {
        [n] => TorusConfig::cubic(*n, d),
        _ => TorusConfig::new(sizes),
    }
}

fn site_label(spec: &LatticeSpec, i: usize) -> Value {
    let name = &spec.sites()[i];
    if *name == (i + 1).to_string() {
        json!(i + 1)
    } else {
        json!(name)
    }
}

fn offset_text(offset: &[i64]) -> String {
    let parts: Vec<String> = offset.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

struct Computed {
    engine: &'static str,
    value: f64,
    error_estimate: Option<f64>,
    order: Option<usize>,
    evaluations: Option<u64>,
    converged: bool,
    extra: Vec<(&'static str, Value)>,
    elapsed: std::time::Duration,
}

fn compute(a: ComputeArgs) -> Result<Outcome> {
    let lat = load(&a.lattice)?;
    let spec = &lat.spec;
    let q = parse_query(spec, &a.query)?;
    q.validate(spec)?;
    let start = std::time::Instant::now();
    let c = match a.engine {
        Engine::Spectral => {
            let cfg = a.quadrature.config(spec.dimension())?;
            let r = spectral::resistance(spec, &q, &cfg)?;
            Computed {
                engine: "spectral",
                value: r.value,
                error_estimate: Some(r.error_estimate),
                order: Some(r.order_used),
                evaluations: Some(r.evaluations),
                converged: r.converged,
                extra: Vec::new(),
                elapsed: r.elapsed,
            }
        }
        Engine::Torus => {
            let t = parse_sizes(&a.torus_size, spec.dimension())?;
            let (method, value) = match a.torus_method {
                TorusMethod::Kspace => ("kspace", torus::torus_resistance_kspace(spec, &q, &t)?),
                TorusMethod::Realspace => ("realspace", torus::torus_resistance_realspace(spec, &q, &t)?),
            };
            Computed {
                engine: "torus",
                value,
                error_estimate: None,
                order: None,
                evaluations: None,
                converged: true,
                extra: vec![("torus_size", json!(t.sizes())), ("torus_method", json!(method))],
                elapsed: start.elapsed(),
            }
        }
        Engine::Mapping => {
            let mapped = lat
                .catalog_name
                .and_then(MappedLattice::from_name)
                .ok_or_else(|| {
                    Error::Mapping(format!(
                        "closed-form mappings exist for the kagome, dice and decorated catalog lattices, not `{}`",
                        lat.label
                    ))
                })?;
            let bond_r = lat.params.first().copied().unwrap_or(1.0);
            let cfg = a.quadrature.config(2)?;
            let reference = ReferenceResistances::new(mapped.reference(), bond_r, cfg)?;
            let r = mappings::mapped_resistance(mapped, q.from, q.to, q.offset[0], q.offset[1], &reference)?;
            let terms: Vec<Value> = r
                .terms
                .iter()
                .map(|&((m, n), c)| json!({"offset": [m, n], "coefficient": json_number(c)}))
                .collect();
            let converged = r.error_estimate <= reference_target(&a.quadrature) * r.value.abs();
            Computed {
                engine: "mapping",
                value: r.value,
                error_estimate: Some(r.error_estimate),
                order: None,
                evaluations: None,
                converged,
                extra: vec![
                    ("reference", json!(mapped.reference().catalog_name())),
                    ("constant", json_number(r.constant)),
                    ("terms", Value::Array(terms)),
                ],
                elapsed: start.elapsed(),
            }
        }
    };
    let code = if c.converged { 0 } else { 3 };
    let stdout = render_compute(&lat, &q, &c, a.format, a.timing);
    Ok(Outcome { stdout, code })
}

fn reference_target(q: &QuadratureArgs) -> f64 {
    q.target.unwrap_or(QuadratureConfig::for_dimension(2).target_rel_error)
}

fn render_compute(lat: &Loaded, q: &ResistanceQuery, c: &Computed, format: OutputFormat, timing: bool) -> String {
    let spec = &lat.spec;
    match format {
        OutputFormat::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("format".into(), json!(FORMAT_VERSION));
            obj.insert("lattice".into(), json!(lat.label));
            obj.insert("from".into(), site_label(spec, q.from));
            obj.insert("to".into(), site_label(spec, q.to));
            obj.insert("offset".into(), json!(q.offset));
            obj.insert("engine".into(), json!(c.engine));
            obj.insert("value".into(), json_number(c.value));
            obj.insert("error_estimate".into(), c.error_estimate.map_or(Value::Null, json_number));
            obj.insert("order".into(), json!(c.order));
            obj.insert("evaluations".into(), json!(c.evaluations));
            obj.insert("converged".into(), json!(c.converged));
            for (k, v) in &c.extra {
                obj.insert((*k).into(), v.clone());
            }
            if timing {
                obj.insert("elapsed_seconds".into(), json!(c.elapsed.as_secs_f64()));
            }
            pretty(&Value::Object(obj))
        }
        OutputFormat::Csv => {
            let mut header = vec!["lattice", "from", "to"];
            let axes: Vec<String> = (1..=spec.dimension()).map(|k| format!("n{k}")).collect();
            header.extend(axes.iter().map(String::as_str));
            header.extend(["engine", "value", "error_estimate", "order", "converged"]);
            if timing {
                header.push("elapsed_seconds");
            }
            let mut row = vec![lat.label.clone(), spec.sites()[q.from].clone(), spec.sites()[q.to].clone()];
            row.extend(q.offset.iter().map(i64::to_string));
            row.extend([
                c.engine.to_string(),
                csv_number(c.value),
                c.error_estimate.map_or(String::new(), csv_number),
                c.order.map_or(String::new(), |o| o.to_string()),
                c.converged.to_string(),
            ]);
            if timing {
                row.push(c.elapsed.as_secs_f64().to_string());
            }
            csv_table(&header, &[row])
        }
        OutputFormat::Text => {
            let mut rows = vec![
                vec!["lattice".into(), lat.label.clone()],
                vec!["from".into(), spec.sites()[q.from].clone()],
                vec!["to".into(), spec.sites()[q.to].clone()],
                vec!["offset".into(), offset_text(&q.offset)],
                vec!["engine".into(), c.engine.into()],
                vec!["value".into(), text_number(c.value)],
            ];
            if let Some(e) = c.error_estimate {
                rows.push(vec!["error estimate".into(), text_number(e)]);
            }
            if let Some(o) = c.order {
                rows.push(vec!["order".into(), o.to_string()]);
            }
            rows.push(vec!["converged".into(), if c.converged { "yes" } else { "no" }.into()]);
            if timing {
                rows.push(vec!["elapsed".into(), format!("{:.3} s", c.elapsed.as_secs_f64())]);
            }
            let mut s = String::new();
            for r in rows {
                s.push_str(&format!("{:<16}{}\n", r[0], r[1]));
            }
            s
        }
    }
}

/// All cell offsets with every component in `-k..=k`, lexicographic.
fn offsets_up_to(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-k..=k).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn table(a: TableArgs) -> Result<Outcome> {
    let lat = load(&a.lattice)?;
    let spec = &lat.spec;
    if a.max_offset < 0 {
        return Err(Error::InvalidArgument("--max-offset must be non-negative".into()));
    }
    let cfg = a.quadrature.config(spec.dimension())?;
    let p = spec.num_sites();
    let mut queries = Vec::new();
    for offset in offsets_up_to(spec.dimension(), a.max_offset) {
        for from in 0..p {
            for to in 0..p {
                queries.push(ResistanceQuery::new(from, to, offset.clone()));
            }
        }
    }
    let results = spectral::resistance_batch(spec, &queries, &cfg)?;
    let converged = results.iter().all(|r| r.converged);
    let order = results.iter().map(|r| r.order_used).max().unwrap_or(0);

    let stdout = match a.format {
        OutputFormat::Json => {
            let entries: Vec<Value> = queries
                .iter()
                .zip(&results)
                .map(|(q, r)| {
                    json!({
                        "from": site_label(spec, q.from),
                        "to": site_label(spec, q.to),
                        "offset": q.offset,
                        "value": json_number(r.value),
                        "error_estimate": json_number(r.error_estimate),
                    })
                })
                .collect();
            pretty(&json!({
                "format": FORMAT_VERSION,
                "lattice": lat.label,
                "max_offset": a.max_offset,
                "order": order,
                "converged": converged,
                "entries": entries,
            }))
        }
        OutputFormat::Csv | OutputFormat::Text => {
            let axes: Vec<String> = (1..=spec.dimension()).map(|k| format!("n{k}")).collect();
            let mut header = vec!["from", "to"];
            header.extend(axes.iter().map(String::as_str));
            header.extend(["value", "error_estimate"]);
            let number = if a.format == OutputFormat::Csv { csv_number } else { text_number };
            let rows: Vec<Vec<String>> = queries
                .iter()
                .zip(&results)
                .map(|(q, r)| {
                    let mut row = vec![spec.sites()[q.from].clone(), spec.sites()[q.to].clone()];
                    row.extend(q.offset.iter().map(i64::to_string));
                    row.push(number(r.value));
                    row.push(number(r.error_estimate));
                    row
                })
                .collect();
            if a.format == OutputFormat::Csv {
                csv_table(&header, &rows)
            } else {
                text_table(&header, &rows)
            }
        }
    };
    Ok(Outcome {
        stdout,
        code: if converged { 0 } else { 3 },
    })
}

fn converge(a: ConvergeArgs) -> Result<Outcome> {
    let lat = load(&a.lattice)?;
    let spec = &lat.spec;
    let q = parse_query(spec, &a.query)?;
    let d = spec.dimension();
    let orders = if a.orders.is_empty() {
        match d {
            1 => vec![16, 32, 64, 128],
            2 => vec![32, 64, 128, 256],
            _ => vec![8, 16, 32, 64],
        }
    } else {
        a.orders.clone()
    };
    let sizes = if a.sizes.is_empty() {
        match d {
            1 | 2 => vec![8, 16, 32, 64],
            _ => vec![4, 8, 16],
        }
    } else {
        a.sizes.clone()
    };
    let spectral_rows = spectral::convergence_study(spec, &q, &orders)?;
    let tori = sizes
        .iter()
        .map(|&n| TorusConfig::cubic(n, d))
        .collect::<Result<Vec<_>>>()?;
    let torus_rows = torus::convergence_to_infinite(spec, &q, &tori)?;
    let closed_form = match lat.catalog_name {
        Some("chain2") => {
            let r1 = lat.params.first().copied().unwrap_or(1.0);
            let r2 = lat.params.get(1).copied().unwrap_or(r1);
            Some(mappings::chain_resistance(q.from, q.to, q.offset[0], r1, r2)?)
        }
        _ => None,
    };

    let stdout = match a.format {
        OutputFormat::Json => {
            let spectral_json: Vec<Value> = spectral_rows
                .iter()
                .map(|&(m, v)| json!({"order": m, "value": json_number(v)}))
                .collect();
            let torus_json: Vec<Value> = torus_rows
                .iter()
                .map(|(t, v)| json!({"size": t.sizes(), "value": json_number(*v)}))
                .collect();
            let mut obj = json!({
                "format": FORMAT_VERSION,
                "lattice": lat.label,
                "from": site_label(spec, q.from),
                "to": site_label(spec, q.to),
                "offset": q.offset,
                "spectral": spectral_json,
                "torus": torus_json,
            });
            if let Some(v) = closed_form {
                obj["closed_form"] = json_number(v);
            }
            pretty(&obj)
        }
        OutputFormat::Csv => {
            let mut rows: Vec<Vec<String>> = spectral_rows
                .iter()
                .map(|&(m, v)| vec!["spectral".into(), m.to_string(), csv_number(v)])
                .collect();
            rows.extend(
                torus_rows
                    .iter()
                    .map(|(t, v)| vec!["torus".into(), t.sizes()[0].to_string(), csv_number(*v)]),
            );
            if let Some(v) = closed_form {
                rows.push(vec!["closed_form".into(), String::new(), csv_number(v)]);
            }
            csv_table(&["method", "parameter", "value"], &rows)
        }
        OutputFormat::Text => {
            let n = spectral_rows.len().max(torus_rows.len());
            let cell = |o: Option<String>| o.unwrap_or_default();
            let rows: Vec<Vec<String>> = (0..n)
                .map(|i| {
                    vec![
                        cell(spectral_rows.get(i).map(|r| r.0.to_string())),
                        cell(spectral_rows.get(i).map(|r| text_number(r.1))),
                        cell(torus_rows.get(i).map(|r| r.0.sizes()[0].to_string())),
                        cell(torus_rows.get(i).map(|r| text_number(r.1))),
                    ]
                })
                .collect();
            let mut s = text_table(&["order", "spectral", "N", "torus"], &rows);
            if let Some(v) = closed_form {
                s.push_str(&format!("closed form: {}\n", text_number(v)));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn verify_cmd(a: VerifyArgs) -> Result<Outcome> {
    let tolerances = Tolerances {
        numeric: a.numeric_tol,
        exact: a.exact_tol,
    };
    if !(tolerances.numeric > 0.0 && tolerances.exact > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    let results = Verifier::new(tolerances).run(&a.only)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    let stdout = match a.format {
        OutputFormat::Json => {
            let checks: Vec<Value> = results
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("check results serialize");
                    for key in ["expected", "computed", "error_estimate", "tolerance"] {
                        if let Some(x) = v[key].as_f64() {
                            v[key] = json_number(x);
                        }
                    }
                    v
                })
                .collect();
            pretty(&json!({
                "format": FORMAT_VERSION,
                "total": results.len(),
                "published_values": verify::published_value_count(&results),
                "passed": results.len() - failed,
                "failed": failed,
                "checks": checks,
            }))
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        r.group.to_string(),
                        r.expected.map_or(String::new(), csv_number),
                        r.computed.map_or(String::new(), csv_number),
                        csv_number(r.tolerance),
                        r.passed.to_string(),
                    ]
                })
                .collect();
            csv_table(&["id", "group", "expected", "computed", "tolerance", "passed"], &rows)
        }
        OutputFormat::Text => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        if r.passed { "PASS" } else { "FAIL" }.to_string(),
                        r.id.clone(),
                        r.expected.map_or(String::new(), text_number),
                        r.computed.map_or(String::new(), text_number),
                        r.message.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let mut s = text_table(&["status", "check", "expected", "computed", "note"], &rows);
            s.push_str(&format!("{} passed, {} failed\n", results.len() - failed, failed));
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: if failed == 0 { 0 } else { 1 },
    })
}

fn catalog_cmd(c: CatalogCommand) -> Result<Outcome> {
    match c {
        CatalogCommand::List { format } => {
            let infos = catalog::list_catalog();
            let stdout = match format {
                OutputFormat::Json => pretty(&json!({
                    "format": FORMAT_VERSION,
                    "lattices": infos
                        .iter()
                        .map(|i| json!({
                            "name": i.name,
                            "dimension": i.dimension,
                            "sites": i.sites,
                            "description": i.description,
                        }))
                        .collect::<Vec<_>>(),
                })),
                OutputFormat::Csv | OutputFormat::Text => {
                    let rows: Vec<Vec<String>> = infos
                        .iter()
                        .map(|i| {
                            vec![
                                i.name.to_string(),
                                i.dimension.to_string(),
                                i.sites.to_string(),
                                i.description.to_string(),
                            ]
                        })
                        .collect();
                    let header = ["name", "dimension", "sites", "description"];
                    if format == OutputFormat::Csv {
                        let quoted: Vec<Vec<String>> = rows
                            .into_iter()
                            .map(|mut r| {
                                r[3] = format!("\"{}\"", r[3].replace('"', "\"\""));
                                r
                            })
                            .collect();
                        csv_table(&header, &quoted)
                    } else {
                        text_table(&header, &rows)
                    }
                }
            };
            Ok(Outcome::ok(stdout))
        }
        CatalogCommand::Export {
            name,
            resistance,
            output,
        } => {
            let entry = catalog::builtin(&name, &resistance)?;
            let text = document::to_json(&entry.spec);
            match output {
                Some(path) => {
                    std::fs::write(&path, text)
                        .map_err(|e| Error::Document(format!("cannot write {}: {e}", path.display())))?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
    }
}
