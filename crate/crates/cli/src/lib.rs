//! Argument parsing and command dispatch for the `secondaries` binary.
//!
//! Exit codes: 0 on success, 1 on an internal consistency failure (a JSON
//! error report goes to standard output), 2 on bad input.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{ArgAction, Parser, ValueEnum};
use serde_json::{json, Value};

use specht_invariants::combinatorics::{partitions, standard_tableaux};
use specht_invariants::multiplicity::{
    hilbert_consistency, molien_series, multiplicity_table, numerator_from_table, series_json, ConventionBridge,
};
use specht_invariants::permgroup::{edge_action_group, parity_doubled_group, PermutationGroup};
use specht_invariants::secondary_engine::{
    secondary_invariants, EngineOptions, FixedSpaceMethod, JsonOptions, SecondaryResult, TranslationStrategy,
    DEFAULT_EXPANSION_CAP,
};
use specht_invariants::specht_poly::{higher_specht_with, YoungSymmetrizer};
use specht_invariants::sym_characters::character_table_cached;
use specht_invariants::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONSISTENCY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable naming the character-table cache directory.
pub const CACHE_DIR_ENV: &str = "SPECHT_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Multiplicities,
    Numerator,
    Molien,
    Secondaries,
    Chartable,
    SpechtTable,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "secondaries",
    version,
    about = "Secondary invariants of permutation groups via higher Specht polynomials"
)]
struct Args {
    /// Number of variables n; the group acts on {1..n}.
    #[arg(long)]
    degree: Option<usize>,

    /// Generators in cycle notation separated by `;`, e.g. "(1,2)(3,4);(1,4)(2,3)".
    #[arg(long, default_value = "")]
    generators: String,

    /// Use S_m acting on the edges of K_m; sets the degree to m(m-1)/2.
    #[arg(long, value_name = "M", conflicts_with_all = ["generators", "parity_doubled"])]
    edge_group: Option<usize>,

    /// Use S_m acting on {1..m} x {even, odd} by (i, s) -> (g(i), s * sign g); sets the degree to 2m.
    #[arg(long, value_name = "M", conflicts_with = "generators")]
    parity_doubled: Option<usize>,

    #[arg(long, value_enum, default_value_t = Command::Secondaries)]
    command: Command,

    /// Expand every invariant into monomials.
    #[arg(long)]
    expand: bool,

    /// Expand and check every invariant against every generator.
    #[arg(long)]
    verify: bool,

    /// Series truncation order for `molien`.
    #[arg(long, default_value_t = 20)]
    order: usize,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,

    /// Character-table cache directory.
    #[arg(long, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Report per-shape and total wall time (stderr for text, JSON fields otherwise).
    #[arg(long)]
    timings: bool,

    /// JSON output without the invariant list.
    #[arg(long)]
    report_only: bool,

    /// Append the invariant list to the text report.
    #[arg(long, action = ArgAction::SetTrue)]
    list: bool,

    /// auto, concrete, polytabloid or seminormal-direct.
    #[arg(long, default_value = "auto")]
    strategy: TranslationStrategy,

    /// auto, kernel or projection.
    #[arg(long, default_value = "auto")]
    fixed_space: FixedSpaceMethod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Generators(String),
    EdgeGroup(usize),
    ParityDoubled(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub degree: usize,
    pub group: GroupSpec,
    pub command: Command,
    pub engine: EngineOptions,
    pub order: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub timings: bool,
    pub report_only: bool,
    pub list: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ArgError {
    /// Includes `--help` and `--version`, which exit 0.
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Invalid(String),
}

impl ArgError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ArgError::Clap(e) if !e.use_stderr() => EXIT_OK,
            _ => EXIT_INPUT,
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, ArgError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let (group, implied) = match (args.edge_group, args.parity_doubled) {
        (Some(m), _) => (GroupSpec::EdgeGroup(m), Some(m * m.saturating_sub(1) / 2)),
        (None, Some(m)) => (GroupSpec::ParityDoubled(m), Some(2 * m)),
        (None, None) => (GroupSpec::Generators(args.generators.clone()), None),
    };
    let degree = match (args.degree, implied) {
        (Some(d), Some(i)) if d != i => {
            return Err(ArgError::Invalid(format!("--degree {d} contradicts the implied degree {i}")))
        }
        (_, Some(i)) => i,
        (Some(d), None) => d,
        (None, None) => {
            return Err(ArgError::Invalid(
                "--degree is required unless --edge-group or --parity-doubled is given".into(),
            ))
        }
    };
    if degree == 0 {
        return Err(ArgError::Invalid("--degree must be at least 1".into()));
    }
    Ok(RunConfig {
        degree,
        group,
        command: args.command,
        engine: EngineOptions {
            expand: args.expand,
            verify: args.verify,
            workers: args.workers as usize,
            strategy: args.strategy,
            fixed_space: args.fixed_space,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        },
        order: args.order,
        cache_dir: args.cache_dir,
        format: args.format,
        timings: args.timings,
        report_only: args.report_only,
        list: args.list,
    })
}

fn build_group(config: &RunConfig) -> Result<PermutationGroup, Error> {
    match &config.group {
        GroupSpec::Generators(text) => PermutationGroup::parse(config.degree, text),
        GroupSpec::EdgeGroup(m) => edge_action_group(*m),
        GroupSpec::ParityDoubled(m) => parity_doubled_group(*m),
    }
}

/// Emitted text or JSON plus an exit code of 0 or 1.
struct Output {
    body: String,
    /// Set when a check in the command itself failed.
    failed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, failed: false }
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn multiplicities(config: &RunConfig) -> Result<Output, Error> {
    let table = multiplicity_table(&build_group(config)?)?;
    Ok(Output::ok(match config.format {
        Format::Text => format!("{table}\n"),
        Format::Json => render_json(&serde_json::to_value(&table).expect("table serializes")),
    }))
}

fn numerator(config: &RunConfig) -> Result<Output, Error> {
    let table = multiplicity_table(&build_group(config)?)?;
    let num = numerator_from_table(&table, ConventionBridge::default())?;
    Ok(Output::ok(match config.format {
        Format::Text => format!("{num}\n"),
        Format::Json => render_json(&json!({
            "degree": table.degree,
            "group_order": table.group_order,
            "numerator": series_json(&num),
            "value_at_one": table.expected_total() as u64,
        })),
    }))
}

fn molien(config: &RunConfig) -> Result<Output, Error> {
    let group = build_group(config)?;
    let series = molien_series(&group, config.order)?;
    let report = hilbert_consistency(&group, config.order)?;
    let body = match config.format {
        Format::Text => {
            let mut s = format!(
                "molien :  {series}\nnumerator / prod(1 - z^i) :  {}\nmatch :  {}\n",
                report.lhs, report.matches
            );
            if let Some(d) = report.first_mismatch_degree {
                s.push_str(&format!("first mismatch in degree :  {d}\n"));
            }
            s
        }
        Format::Json => {
            let mut v = report.to_json();
            v["molien"] = series_json(&series);
            render_json(&v)
        }
    };
    Ok(Output { body, failed: !report.matches })
}

fn invariant_listing(result: &SecondaryResult) -> String {
    let mut out = String::new();
    for inv in &result.invariants {
        let terms: Vec<String> = inv.combination.iter().map(|(t, c)| format!("({c})*F{t}")).collect();
        out.push_str(&format!("{} S = {} degree {} :  {}\n", inv.shape, inv.s, inv.degree, terms.join(" + ")));
        if let Some(p) = &inv.expanded {
            out.push_str(&format!("  = {p}\n"));
        }
    }
    out
}

fn secondaries(config: &RunConfig, err: &mut dyn Write) -> Result<Output, Error> {
    let group = build_group(config)?;
    let result = secondary_invariants(&group, &config.engine)?;
    let body = match config.format {
        Format::Text => {
            let mut s = result.report.trace_text();
            if config.list {
                s.push('\n');
                s.push_str(&invariant_listing(&result));
            }
            if config.timings {
                let _ = err.write_all(result.report.timing_text().as_bytes());
            }
            s
        }
        Format::Json => {
            let opts = JsonOptions { timings: config.timings, invariants: !config.report_only };
            let mut s = serde_json::to_string(&result.to_json(opts)).expect("JSON value serializes");
            s.push('\n');
            s
        }
    };
    Ok(Output::ok(body))
}

fn chartable(config: &RunConfig) -> Result<Output, Error> {
    let table = character_table_cached(config.degree, config.cache_dir.as_deref())?;
    Ok(Output::ok(match config.format {
        Format::Text => {
            let labels: Vec<String> = table.partitions().iter().map(ToString::to_string).collect();
            let mut s = format!("classes :  {}\n", labels.join("  "));
            for (label, row) in labels.iter().zip(table.values()) {
                let cells: Vec<String> = row.iter().map(i64::to_string).collect();
                s.push_str(&format!("{label} :  {}\n", cells.join(" ")));
            }
            s
        }
        Format::Json => render_json(&json!({
            "degree": table.degree(),
            "partitions": table.partitions(),
            "values": table.values(),
        })),
    }))
}

fn specht_table(config: &RunConfig) -> Result<Output, Error> {
    let n = config.degree;
    if n > config.engine.expansion_cap {
        return Err(Error::ResourceLimit {
            what: format!("higher Specht table in degree {n}"),
            cap: config.engine.expansion_cap,
        });
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for shape in partitions(n)? {
        let tabs = standard_tableaux(&shape);
        for t in &tabs {
            let eps = YoungSymmetrizer::new(t);
            for s in &tabs {
                let f = higher_specht_with(s, &eps)?;
                match config.format {
                    Format::Text => text.push_str(&format!("S = {s}  T = {t} :  {f}\n")),
                    Format::Json => rows.push(json!({ "shape": shape, "S": s, "T": t, "polynomial": f })),
                }
            }
        }
    }
    Ok(Output::ok(match config.format {
        Format::Text => text,
        Format::Json => render_json(&Value::Array(rows)),
    }))
}

fn error_report(e: &Error) -> Value {
    let kind = match e {
        Error::Verification { .. } => "verification",
        Error::Io(_) => "io",
        _ => "consistency",
    };
    let mut v = json!({ "error": { "kind": kind, "message": e.to_string() } });
    if let Error::Verification { shape, tableau, generator } = e {
        v["error"]["shape"] = json!(shape);
        v["error"]["S"] = json!(tableau);
        v["error"]["generator"] = json!(generator);
    }
    v
}

/// Executes `config`, writing results to `out` and diagnostics to `err`; returns the exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match config.command {
        Command::Multiplicities => multiplicities(config),
        Command::Numerator => numerator(config),
        Command::Molien => molien(config),
        Command::Secondaries => secondaries(config, err),
        Command::Chartable => chartable(config),
        Command::SpechtTable => specht_table(config),
    };
    match result {
        Ok(output) => {
            if out.write_all(output.body.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_CONSISTENCY;
            }
            if output.failed {
                let _ = writeln!(err, "error: consistency check failed");
                EXIT_CONSISTENCY
            } else {
                EXIT_OK
            }
        }
        Err(e) if e.is_input_error() => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = out.write_all(render_json(&error_report(&e)).as_bytes());
            EXIT_CONSISTENCY
        }
    }
}

/// Parses `argv` and runs it; the whole binary minus process plumbing.
pub fn main_with_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config, out, err),
        Err(e @ ArgError::Clap(_)) => {
            let code = e.exit_code();
            let ArgError::Clap(e) = e else { unreachable!() };
            let rendered = e.render().to_string();
            let _ =
                if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn main_from_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
