//! Report construction and rendering behind the `spchain` binary.
//!
//! Every report is rendered to a `String` on one thread so the same run
//! configuration always produces identical bytes, whatever the worker count.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use num_bigint::BigInt;
use serde_json::{json, Value};
use spchain_core::cache::DiskCache;
use spchain_core::chain::{ChainDimTable, Engine, PairingMode};
use spchain_core::euler::{extract_out_euler, verify_congruence, ChiTable, Congruence, EulerTable};
use spchain_core::Error;

pub const JSON_SCHEMA_VERSION: &str = "1";

/// Rational Euler characteristics `χ(Out F_n)` for n = 2..=11 as published
/// by Smillie and Vogtmann, to two decimals. Display only.
pub const LITERATURE_RATIONAL_CHI: [(u32, &str); 10] = [
    (2, "-0.04"),
    (3, "-0.02"),
    (4, "-0.02"),
    (5, "-0.06"),
    (6, "-0.20"),
    (7, "-0.87"),
    (8, "-4.58"),
    (9, "-28.52"),
    (10, "-205.83"),
    (11, "-1690.70"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FusedPairing {
    On,
    Off,
    Check,
}

impl From<FusedPairing> for PairingMode {
    fn from(f: FusedPairing) -> Self {
        match f {
            FusedPairing::On => PairingMode::Fused,
            FusedPairing::Off => PairingMode::Exact,
            FusedPairing::Check => PairingMode::Check,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub pairing: FusedPairing,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { threads: 1, cache_dir: None, format: OutputFormat::Table, pairing: FusedPairing::On }
    }
}

/// Failure classes, mapped to process exit codes by the binary.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Computation(Error),
    #[error("{0}")]
    BadInput(String),
    #[error("verification failed: {0} check(s) did not pass")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Computation(_) => 1,
            CliError::Verification(_) => 2,
            CliError::BadInput(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::MissingWeights(_) | Error::InvalidArgument(_) => {
                CliError::BadInput(e.to_string())
            }
            other => CliError::Computation(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn build_engine(cfg: &RunConfig) -> CliResult<Engine> {
    let engine = Engine::new(cfg.pairing.into());
    match &cfg.cache_dir {
        Some(dir) => Ok(engine.with_cache(DiskCache::open(dir)?)),
        None => Ok(engine),
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    if threads == 0 {
        return Err(CliError::BadInput("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::BadInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// One-line summary of work done, for stderr.
pub fn stats_line(engine: &Engine, elapsed: Duration) -> String {
    let s = engine.stats();
    let mut line = format!(
        "stats: elapsed={:.2}s plethysms computed={} loaded={} terms computed={} loaded={}",
        elapsed.as_secs_f64(),
        s.plethysms_computed,
        s.plethysms_loaded,
        s.terms_computed,
        s.terms_loaded
    );
    if let Some(c) = engine.cache() {
        let c = c.counts();
        let _ = write!(line, " cache hits={} misses={} writes={} discarded={}", c.hits, c.misses, c.writes, c.discarded);
    }
    let slow: Vec<String> = engine
        .timings()
        .into_iter()
        .filter(|t| !t.from_cache)
        .take(3)
        .map(|t| format!("{}(deg {}) {:.3}s", t.label, t.sf_degree, t.elapsed.as_secs_f64()))
        .collect();
    if !slow.is_empty() {
        let _ = write!(line, " slowest: {}", slow.join(", "));
    }
    line
}

fn check_even_weight(w: u32, flag: &str) -> CliResult<()> {
    if w < 2 || w % 2 == 1 {
        return Err(CliError::BadInput(format!("{flag} must be an even integer >= 2, got {w}")));
    }
    Ok(())
}

// ---------------------------------------------------------------- chi

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiReport {
    pub chi: ChiTable,
}

pub fn compute_chi(cfg: &RunConfig, max_weight: u32) -> CliResult<(ChiReport, String)> {
    check_even_weight(max_weight, "--max-weight")?;
    let engine = build_engine(cfg)?;
    let start = std::time::Instant::now();
    let chi = with_pool(cfg.threads, || -> CliResult<ChiTable> {
        let mut chi = ChiTable::new();
        for w in (2..=max_weight).step_by(2) {
            let t = engine.chain_dims(w)?;
            chi.insert(w, t.euler)?;
        }
        Ok(chi)
    })??;
    let stats = stats_line(&engine, start.elapsed());
    Ok((ChiReport { chi }, stats))
}

pub fn render_chi(report: &ChiReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => report.chi.to_csv(),
        OutputFormat::Json => {
            let rows: Vec<Value> =
                report.chi.iter().map(|(w, c)| json!({"w": w.to_string(), "chi": c.to_string()})).collect();
            json_doc("chi", json!({ "rows": rows }))
        }
        OutputFormat::Table => {
            let cols: Vec<(String, String)> = report.chi.iter().map(|(w, c)| (w.to_string(), c.to_string())).collect();
            render_grid(&[("w", cols.iter().map(|c| c.0.clone()).collect()), ("chi", cols.iter().map(|c| c.1.clone()).collect())])
        }
    }
}

// ---------------------------------------------------------------- dims

pub fn compute_dims(cfg: &RunConfig, weight: u32) -> CliResult<(ChainDimTable, String)> {
    if weight == 0 {
        return Err(CliError::BadInput("--weight must be at least 1".into()));
    }
    let engine = build_engine(cfg)?;
    let start = std::time::Instant::now();
    let table = with_pool(cfg.threads, || engine.chain_dims(weight))??;
    Ok((table, stats_line(&engine, start.elapsed())))
}

/// Dimensions for a subset of homological degrees only; the total and χ
/// rows are omitted since they need every degree.
pub fn compute_dims_for_degrees(cfg: &RunConfig, weight: u32, degrees: &[u32]) -> CliResult<(Vec<(u32, BigInt)>, String)> {
    if weight == 0 {
        return Err(CliError::BadInput("--weight must be at least 1".into()));
    }
    if let Some(bad) = degrees.iter().find(|&&i| i == 0 || i > weight) {
        return Err(CliError::BadInput(format!("degree {bad} outside 1..={weight}")));
    }
    let engine = build_engine(cfg)?;
    let start = std::time::Instant::now();
    let rows = with_pool(cfg.threads, || engine.chain_dims_for_degrees(weight, degrees))??;
    Ok((rows.into_iter().collect(), stats_line(&engine, start.elapsed())))
}

pub fn render_dims(table: &ChainDimTable, format: OutputFormat) -> String {
    let rows: Vec<(String, String)> = table.dims.iter().map(|(i, d)| (format!("C_{i}"), d.to_string())).collect();
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("row,dimension\n");
            for (r, d) in &rows {
                let _ = writeln!(out, "{r},{d}");
            }
            let _ = writeln!(out, "total,{}", table.total);
            let _ = writeln!(out, "chi,{}", table.euler);
            out
        }
        OutputFormat::Json => {
            let dims: Vec<Value> =
                table.dims.iter().map(|(i, d)| json!({"i": i.to_string(), "dim": d.to_string()})).collect();
            json_doc(
                "dims",
                json!({
                    "weight": table.weight.to_string(),
                    "dims": dims,
                    "total": table.total.to_string(),
                    "chi": table.euler.to_string(),
                }),
            )
        }
        OutputFormat::Table => {
            let mut all = rows;
            all.push(("total".into(), table.total.to_string()));
            all.push(("chi".into(), table.euler.to_string()));
            render_two_columns(&format!("weight {}", table.weight), "dimension", &all)
        }
    }
}

pub fn render_partial_dims(weight: u32, rows: &[(u32, BigInt)], format: OutputFormat) -> String {
    let named: Vec<(String, String)> = rows.iter().map(|(i, d)| (format!("C_{i}"), d.to_string())).collect();
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("row,dimension\n");
            for (r, d) in &named {
                let _ = writeln!(out, "{r},{d}");
            }
            out
        }
        OutputFormat::Json => {
            let dims: Vec<Value> = rows.iter().map(|(i, d)| json!({"i": i.to_string(), "dim": d.to_string()})).collect();
            json_doc("dims", json!({ "weight": weight.to_string(), "dims": dims }))
        }
        OutputFormat::Table => render_two_columns(&format!("weight {weight}"), "dimension", &named),
    }
}

// ---------------------------------------------------------------- out-euler

#[derive(Clone, Debug)]
pub struct OutEulerReport {
    pub chi: ChiTable,
    pub table: EulerTable,
    pub congruence: Congruence,
}

/// Extracts `e(Out F_n)`; χ comes from `chi_file` when given, otherwise it is
/// computed.
pub fn compute_out_euler(
    cfg: &RunConfig,
    max_weight: u32,
    chi_file: Option<&std::path::Path>,
) -> CliResult<(OutEulerReport, Option<String>)> {
    check_even_weight(max_weight, "--max-weight")?;
    let (chi, stats) = match chi_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::BadInput(format!("reading {}: {e}", path.display())))?;
            (ChiTable::from_csv(&text)?, None)
        }
        None => {
            let (report, stats) = compute_chi(cfg, max_weight)?;
            (report.chi, Some(stats))
        }
    };
    let missing = chi.missing_weights(max_weight);
    if !missing.is_empty() {
        return Err(Error::MissingWeights(missing).into());
    }
    let chi = chi.truncated(max_weight);
    let table = extract_out_euler(&chi)?;
    let congruence = verify_congruence(&chi, &table);
    Ok((OutEulerReport { chi, table, congruence }, stats))
}

pub fn render_out_euler(report: &OutEulerReport, format: OutputFormat) -> String {
    let rows = &report.table.rows;
    let literature = |n: u32| LITERATURE_RATIONAL_CHI.iter().find(|(m, _)| *m == n).map(|(_, v)| *v);
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("w,n,chi,lower,primitive\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{},{},{}", r.weight, r.n, r.chi, r.lower, r.e);
            }
            out
        }
        OutputFormat::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "w": r.weight.to_string(),
                        "n": r.n.to_string(),
                        "chi": r.chi.to_string(),
                        "lower": r.lower.to_string(),
                        "primitive": r.e.to_string(),
                        "literature_rational_chi": literature(r.n),
                    })
                })
                .collect();
            json_doc(
                "out-euler",
                json!({
                    "rows": body,
                    "congruence": {
                        "through_degree": report.congruence.max_weight.to_string(),
                        "holds": report.congruence.holds(),
                    },
                }),
            )
        }
        OutputFormat::Table => {
            let col = |f: &dyn Fn(&spchain_core::euler::EulerRow) -> String| rows.iter().map(f).collect::<Vec<_>>();
            let mut out = String::from("New generators per weight\n");
            out.push_str(&render_grid(&[
                ("w", col(&|r| r.weight.to_string())),
                ("chi", col(&|r| r.chi.to_string())),
                ("chi of lower terms", col(&|r| r.lower.to_string())),
                ("chi of primitive part", col(&|r| r.e.to_string())),
            ]));
            out.push_str("\nRational vs integral Euler characteristic of Out(F_n)\n");
            out.push_str(&render_grid(&[
                ("n", col(&|r| r.n.to_string())),
                ("chi (literature)", col(&|r| literature(r.n).unwrap_or("?").to_string())),
                ("e", col(&|r| r.e.to_string())),
            ]));
            let _ = writeln!(
                out,
                "\ncongruence through t^{}: {}",
                report.congruence.max_weight,
                match report.congruence.first_mismatch {
                    None => "holds".to_string(),
                    Some(d) => format!("FAILS first at degree {d}"),
                }
            );
            out
        }
    }
}

// ---------------------------------------------------------------- helpers

fn json_doc(kind: &str, mut body: Value) -> String {
    body["schema"] = json!(format!("spchain.{kind}"));
    body["version"] = json!(JSON_SCHEMA_VERSION);
    let mut s = serde_json::to_string_pretty(&body).expect("serializable");
    s.push('\n');
    s
}

/// Row-labelled grid with right-aligned cells.
fn render_grid(rows: &[(&str, Vec<String>)]) -> String {
    let label_w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let ncols = rows.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|j| rows.iter().filter_map(|(_, c)| c.get(j)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (label, cells) in rows {
        let _ = write!(out, "{label:<label_w$}");
        for (j, c) in cells.iter().enumerate() {
            let _ = write!(out, "  {c:>w$}", w = widths[j]);
        }
        out.push('\n');
    }
    out
}

fn render_two_columns(head_left: &str, head_right: &str, rows: &[(String, String)]) -> String {
    let lw = rows.iter().map(|r| r.0.len()).chain([head_left.len()]).max().unwrap_or(0);
    let rw = rows.iter().map(|r| r.1.len()).chain([head_right.len()]).max().unwrap_or(0);
    let mut out = format!("{head_left:<lw$}  {head_right:>rw$}\n");
    for (l, r) in rows {
        let _ = writeln!(out, "{l:<lw$}  {r:>rw$}");
    }
    out
}
