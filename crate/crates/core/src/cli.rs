//! The `hinted-search` command line: `eval`, `frontier`, `verify`, `partition`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 horizon error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::bounds::{self, HintClass};
use crate::error::Error;
use crate::hints::{self, EvalOptions, Family, FamilyDescriptor, HintedStrategy, DEFAULT_HORIZON};
use crate::model::{make_geometric, Branch, Hint, Strategy};
use crate::ratio::{self, TargetGrid};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HORIZON: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hinted-search", version, about = "Linear search with untrusted hints")]
pub struct Cli {
    /// TOML file with defaults for the shared options; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Segments per strategy prefix [default: 64].
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Tolerance for verification verdicts [default: 1e-9].
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Competitive ratio of a strategy, or consistency/robustness of a family.
    Eval(EvalArgs),
    /// Consistency-vs-robustness curves as CSV.
    Frontier(FrontierArgs),
    /// Run the inequality and oracle suites.
    Verify(VerifyArgs),
    /// Which k-bit member a trusted hint picks, per interval of the line.
    Partition(PartitionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["geometric", "family", "descriptor", "file", "strategy"])))]
pub struct EvalArgs {
    /// Geometric strategy, e.g. `b=2 n=64` (optional `scale=`, `branch=`).
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub geometric: Option<Vec<String>>,
    /// Family name: position, direction or kbit.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameters, e.g. `b=2,delta=1` or `r=9,k=2`.
    #[arg(long = "r-params", num_args = 1.., value_delimiter = ',')]
    pub r_params: Vec<String>,
    /// Family descriptor JSON file.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
    /// Strategy JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Inline strategy JSON.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Largest position hint sampled for position families.
    #[arg(long)]
    pub max_distance: Option<f64>,
    /// Grid density (points per decade) for position hints.
    #[arg(long)]
    pub per_decade: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: EvalFormat,
    /// Also write the evaluated strategy (for families: the member for the
    /// default hint) as strategy JSON.
    #[arg(long)]
    pub emit_strategy: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Position,
    Direction,
    Onebit,
    Kbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    #[arg(long = "class", value_enum)]
    pub class: ClassArg,
    /// Robustness range `start:stop:step` (inclusive) or a single value.
    #[arg(long = "r")]
    pub r: String,
    /// Hint size for `--class kbit`.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma,
    Corollary,
    Oracle,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long = "r")]
    pub r: f64,
    #[arg(long)]
    pub k: u32,
    /// Largest distance to label.
    #[arg(long = "max")]
    pub max: f64,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    /// Write the partition JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the flat `branch,lo,hi,label` CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Optional config file; keys mirror the long flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub horizon: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub max_distance: Option<f64>,
    pub per_decade: Option<usize>,
}

/// Settings shared by every command after merging flags over the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub horizon: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub count: usize,
    pub max_distance: f64,
    pub per_decade: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: DEFAULT_HORIZON,
            tolerance: bounds::MARGIN_TOLERANCE,
            seed: 7,
            count: 200,
            max_distance: 2f64.powi(40),
            per_decade: 128,
        }
    }
}

impl RunConfig {
    fn validate(self) -> Result<Self, CliError> {
        if self.horizon < 2 {
            return Err(CliError::input("horizon", "must be at least 2"));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(CliError::input("tolerance", "must be a non-negative number"));
        }
        if !(self.max_distance.is_finite() && self.max_distance >= 1.0) {
            return Err(CliError::input("max-distance", "must be finite and >= 1"));
        }
        if self.per_decade == 0 {
            return Err(CliError::input("per-decade", "must be at least 1"));
        }
        Ok(self)
    }
}

/// An error with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(field: &str, reason: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: format!("invalid `{field}`: {reason}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HorizonTooShort { .. } => EXIT_HORIZON,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError {
        code: EXIT_INPUT,
        message: format!("malformed {what}: {e}"),
    })
}

/// Parses `key=value` pairs into a map of numbers.
fn parse_params(pairs: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for pair in pairs.iter().flat_map(|p| p.split_whitespace()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::input(pair, "expected key=value"))?;
        let v: f64 = value
            .parse()
            .map_err(|_| CliError::input(key, format!("not a number: {value:?}")))?;
        map.insert(key.to_string(), v);
    }
    Ok(map)
}

fn take_param(map: &mut BTreeMap<String, f64>, key: &str) -> Option<f64> {
    map.remove(key)
}

fn reject_leftovers(map: &BTreeMap<String, f64>) -> Result<(), CliError> {
    match map.keys().next() {
        Some(k) => Err(CliError::input(k, "unknown parameter")),
        None => Ok(()),
    }
}

fn as_count(field: &str, v: f64) -> Result<usize, CliError> {
    if v.fract() != 0.0 || v < 1.0 {
        return Err(CliError::input(field, format!("must be a positive integer, got {v}")));
    }
    Ok(v as usize)
}

/// Parses `start:stop:step` (inclusive) or a single value.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::input("r", format!("not a number: {s:?}")))
    };
    let (start, stop, step) = match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            (v, v, 1.0)
        }
        [a, b] => (num(a)?, num(b)?, 1.0),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(CliError::input("r", format!("expected start:stop:step, got {text:?}"))),
    };
    if start < 9.0 {
        return Err(CliError::input("r", format!("range must lie in [9, inf), starts at {start}")));
    }
    if stop < start {
        return Err(CliError::input("r", format!("stop {stop} is below start {start}")));
    }
    if !(step > 0.0) {
        return Err(CliError::input("r", format!("step must be positive, got {step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + step * i as f64).collect())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn load_config(cli: &Cli) -> Result<ConfigFile, CliError> {
    match &cli.config {
        None => Ok(ConfigFile::default()),
        Some(path) => toml::from_str(&read_file(path)?).map_err(|e| CliError {
            code: EXIT_INPUT,
            message: format!("malformed config {}: {e}", path.display()),
        }),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = load_config(&cli)?;
    let defaults = RunConfig::default();
    let mut cfg = RunConfig {
        horizon: cli.horizon.or(file.horizon).unwrap_or(defaults.horizon),
        tolerance: cli.tolerance.or(file.tolerance).unwrap_or(defaults.tolerance),
        seed: file.seed.unwrap_or(defaults.seed),
        count: file.count.unwrap_or(defaults.count),
        max_distance: file.max_distance.unwrap_or(defaults.max_distance),
        per_decade: file.per_decade.unwrap_or(defaults.per_decade),
    };
    match cli.command {
        Command::Eval(args) => {
            cfg.max_distance = args.max_distance.unwrap_or(cfg.max_distance);
            cfg.per_decade = args.per_decade.unwrap_or(cfg.per_decade);
            cmd_eval(&args, &cfg.validate()?, out)
        }
        Command::Frontier(args) => cmd_frontier(&args, out),
        Command::Verify(args) => {
            cfg.seed = args.seed.unwrap_or(cfg.seed);
            cfg.count = args.count.unwrap_or(cfg.count);
            cmd_verify(args.suite, &cfg.validate()?, out)
        }
        Command::Partition(args) => cmd_partition(&args, &cfg.validate()?, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError {
            code: EXIT_INPUT,
            message: format!("stdout: {e}"),
        }),
    }
}

fn family_from_args(args: &EvalArgs) -> Result<Option<Family>, CliError> {
    if let Some(path) = &args.descriptor {
        let d: FamilyDescriptor = parse_json("family descriptor", &read_file(path)?)?;
        return Ok(Some(d.to_family()?));
    }
    let Some(name) = &args.family else {
        return Ok(None);
    };
    let mut params = parse_params(&args.r_params)?;
    let mut d = FamilyDescriptor {
        family: name.clone(),
        r: take_param(&mut params, "r"),
        b: take_param(&mut params, "b"),
        delta: take_param(&mut params, "delta"),
        k: None,
    };
    if let Some(k) = take_param(&mut params, "k") {
        d.k = Some(as_count("k", k)? as u32);
    }
    reject_leftovers(&params)?;
    Ok(Some(d.to_family()?))
}

fn strategy_from_args(args: &EvalArgs, cfg: &RunConfig) -> Result<Strategy, CliError> {
    if let Some(pairs) = &args.geometric {
        let mut p = parse_params(pairs)?;
        let b = take_param(&mut p, "b").ok_or_else(|| CliError::input("b", "required by --geometric"))?;
        let n = match take_param(&mut p, "n") {
            Some(n) => as_count("n", n)?,
            None => cfg.horizon,
        };
        let scale = take_param(&mut p, "scale").unwrap_or(1.0);
        let branch = match take_param(&mut p, "branch") {
            None => Branch::Zero,
            Some(0.0) => Branch::Zero,
            Some(1.0) => Branch::One,
            Some(v) => return Err(CliError::input("branch", format!("expected 0 or 1, got {v}"))),
        };
        reject_leftovers(&p)?;
        return Ok(make_geometric(b, n, branch, scale)?);
    }
    if let Some(path) = &args.file {
        return parse_json("strategy", &read_file(path)?);
    }
    if let Some(text) = &args.strategy {
        return parse_json("strategy", text);
    }
    Err(CliError::input("source", "no strategy given"))
}

fn default_hint(family: Family) -> Result<Hint, Error> {
    match family {
        Family::Position { .. } => Hint::position(1.0, Branch::Zero),
        Family::Direction { .. } => Ok(Hint::Direction { branch: Branch::Zero }),
        Family::KBit { k, .. } => Hint::bit_string(0, k),
    }
}

fn cmd_eval(args: &EvalArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(family) = family_from_args(args)? {
        let hs = HintedStrategy::new(family, cfg.horizon)?;
        let opts = EvalOptions {
            hint_max_distance: cfg.max_distance,
            hints_per_decade: cfg.per_decade,
            ..EvalOptions::default()
        };
        let point = hs.evaluate(&opts)?;
        if let Some(path) = &args.emit_strategy {
            let member = hs.select(&default_hint(family)?)?;
            write_file(path, &to_json(&member)?)?;
        }
        let text = match args.format {
            EvalFormat::Text => format!(
                "consistency={:.6} robustness={:.6} ({})\n",
                point.consistency,
                point.robustness,
                if point.converged { "converged" } else { "not converged" }
            ),
            EvalFormat::Json => to_json(&point)? + "\n",
        };
        emit(out, args.output.as_deref(), &text)?;
        return Ok(EXIT_OK);
    }

    let s = strategy_from_args(args, cfg)?;
    let sup = ratio::competitive_ratio_sup(&s);
    let measured = ratio::competitive_ratio_measured(&s, &TargetGrid::for_strategy(&s))?;
    if let Some(path) = &args.emit_strategy {
        write_file(path, &to_json(&s)?)?;
    }
    let text = match args.format {
        EvalFormat::Text => format!(
            "cr={:.6} ({})\nmeasured={:.6}\n",
            sup.value,
            if sup.converged { "converged" } else { "not converged" },
            measured
        ),
        EvalFormat::Json => {
            let v = serde_json::json!({
                "cr": sup.value,
                "measured": measured,
                "converged": sup.converged,
            });
            v.to_string() + "\n"
        }
    };
    emit(out, args.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string(v).map_err(|e| CliError {
        code: EXIT_INPUT,
        message: format!("serialization failed: {e}"),
    })
}

fn cmd_frontier(args: &FrontierArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let rs = parse_range(&args.r)?;
    let curve = match args.class {
        ClassArg::Direction => bounds::direction_frontier(&rs)?,
        ClassArg::Position | ClassArg::Onebit | ClassArg::Kbit => {
            let (class, ks) = match args.class {
                ClassArg::Position => (HintClass::Position, vec![]),
                ClassArg::Onebit => (HintClass::Onebit, vec![]),
                _ => (HintClass::Kbit(args.k), vec![args.k]),
            };
            bounds::build_frontiers(&rs, &ks)?
                .into_iter()
                .find(|c| c.hint_class == class)
                .expect("every class is built")
        }
    };
    let text = match args.format {
        TableFormat::Csv => {
            let mut buf = Vec::new();
            bounds::write_frontier_csv(std::slice::from_ref(&curve), &mut buf)
                .expect("writing to memory");
            String::from_utf8(buf).expect("csv is utf-8")
        }
        TableFormat::Json => to_json(&curve)? + "\n",
    };
    emit(out, args.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_verify(suite: Suite, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut outcomes = Vec::new();
    if matches!(suite, Suite::Lemma | Suite::All) {
        outcomes.push(verify::lemma_suite(cfg.tolerance)?);
    }
    if matches!(suite, Suite::Corollary | Suite::All) {
        outcomes.push(verify::corollary_suite(cfg.tolerance)?);
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        // closed form vs measured differ by the epsilon offset, far above 1e-9
        let tol = cfg.tolerance.max(1e-6);
        outcomes.push(verify::oracle_suite(cfg.seed, cfg.count, cfg.horizon, tol)?);
    }
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.summary());
        text.push('\n');
    }
    emit(out, None, &text)?;
    Ok(if outcomes.iter().all(|o| o.holds) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_partition(args: &PartitionArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = hints::preferred_partition(args.r, args.k, args.max, cfg.horizon)?;
    let json = to_json(&p)? + "\n";
    let csv = p.to_csv();
    if let Some(path) = &args.json {
        write_file(path, &json)?;
    }
    if let Some(path) = &args.csv {
        write_file(path, &csv)?;
    }
    let text = match args.format {
        TableFormat::Json => json,
        TableFormat::Csv => csv,
    };
    emit(out, None, &text)?;
    Ok(EXIT_OK)
}
