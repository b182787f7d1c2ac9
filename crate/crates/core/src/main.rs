//! Command-line front end: every computation as a subcommand with
//! machine-readable, byte-reproducible output.
//!
//! Conventions shared by all subcommands:
//! - Configuration comes from flags, optionally overlaid on a JSON config
//!   file (`--config`); flags win. The merged effective configuration is
//!   echoed into every artifact — as `#` comment lines in CSV, as a
//!   top-level `"config"` object in JSON — so each output is
//!   self-describing.
//! - Doubles are printed in scientific notation with 17 significant digits
//!   (round-trip exact); identical configuration yields byte-identical
//!   output, including between serial and parallel execution.
//! - Exit code 0 for success (including a not-found search status), 2 for
//!   validation errors (diagnostic on stderr names the violated invariant),
//!   3 for computation-level outcomes like persistent all-preclusion.
//! - No randomness anywhere: exact enumeration and deterministic scans only.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use preclusion::output::{sci, CsvDoc, JsonValue};
use preclusion::{
    build_ensemble, exists, exists_log, find_nb, predict_surprise, run_lineages,
    survivor_report, sweep_nb, train_device, FrequencyBinning, Lineage, PreclusionRule,
    Projector, QubitPreparation, StateVector, SweepStatus,
};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

// ---------------------------------------------------------------------------
// Argument declarations
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "preclusion",
    version,
    about = "Branch weights, preclusion rules, and relative-frequency thresholds \
             for repeated two-state measurements",
    after_help = "Flags override values from the JSON file given with --config. \
                  Outputs embed the effective configuration (CSV '#' comments / \
                  JSON \"config\" object) and are byte-identical for identical \
                  configurations."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight of a projector outcome on a state, with its existence verdict
    Weight(WeightArgs),
    /// Per-bin branch weights for n repeated measurements
    Bins(BinsArgs),
    /// Surviving bins (or surviving counts) under a rule at one n
    Survivors(SurvivorsArgs),
    /// Smallest n_b from which only the Born-closest bins survive
    Nb(NbArgs),
    /// n_b as a function of the preclusion threshold eps
    Sweep(SweepArgs),
    /// Trained-device, surprise, and lineage-selection models
    Learn(LearnArgs),
}

#[derive(Args)]
struct PrepArgs {
    /// Born weight p = |c1|^2 of outcome "1" (alternative: the c1/c2 components)
    #[arg(long, value_name = "REAL")]
    p: Option<f64>,
    /// Re(c1) of the preparation c1|1> + c2|2>
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    c1_re: Option<f64>,
    /// Im(c1)
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    c1_im: Option<f64>,
    /// Re(c2)
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    c2_re: Option<f64>,
    /// Im(c2)
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    c2_im: Option<f64>,
}

#[derive(Args)]
struct RuleArgs {
    /// Existence rule to apply
    #[arg(long, value_enum, value_name = "KIND")]
    rule: Option<RuleKind>,
    /// Positive-rule threshold eps, 0 < eps < 1 (exactly one of --eps / --log10-eps)
    #[arg(long, value_name = "REAL")]
    eps: Option<f64>,
    /// Positive-rule threshold as log10(eps), for thresholds below ~1e-308
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    log10_eps: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the artifact here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format (default depends on the subcommand)
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<Format>,
    /// JSON file with default values for the other flags
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct WeightArgs {
    /// JSON file {"dim": d, "state": [[re, im], ...], "projector": [[[re, im], ...], ...]}
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BinsArgs {
    #[command(flatten)]
    prep: PrepArgs,
    /// Number of repeated measurements
    #[arg(long, value_name = "INT")]
    n: Option<u64>,
    /// Number of equal-width frequency bins
    #[arg(long, value_name = "INT")]
    bins: Option<u64>,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SurvivorsArgs {
    #[command(flatten)]
    prep: PrepArgs,
    /// Number of repeated measurements
    #[arg(long, value_name = "INT")]
    n: Option<u64>,
    /// Number of equal-width frequency bins (bin granularity only)
    #[arg(long, value_name = "INT")]
    bins: Option<u64>,
    /// Preclude frequency bins (the observable resolution) or raw counts
    #[arg(long, value_enum, value_name = "UNIT")]
    granularity: Option<Granularity>,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NbArgs {
    #[command(flatten)]
    prep: PrepArgs,
    /// Number of equal-width frequency bins
    #[arg(long, value_name = "INT")]
    bins: Option<u64>,
    #[command(flatten)]
    rule: RuleArgs,
    /// Largest candidate n_b to consider [default: 10000]
    #[arg(long, value_name = "INT")]
    n_max: Option<u64>,
    /// Consecutive repetition counts the state must hold for [default: 32]
    #[arg(long, value_name = "INT")]
    window: Option<u64>,
    /// Evaluate scan chunks across threads (output is identical either way)
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    parallel: Option<bool>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    prep: PrepArgs,
    /// Number of equal-width frequency bins
    #[arg(long, value_name = "INT")]
    bins: Option<u64>,
    /// Comma-separated eps values, e.g. 1e-2,1e-3,1e-4
    #[arg(long, value_name = "LIST")]
    eps_list: Option<String>,
    /// Largest candidate n_b to consider [default: 10000]
    #[arg(long, value_name = "INT")]
    n_max: Option<u64>,
    /// Consecutive repetition counts the state must hold for [default: 32]
    #[arg(long, value_name = "INT")]
    window: Option<u64>,
    /// Evaluate scan chunks across threads (output is identical either way)
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    parallel: Option<bool>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LearnArgs {
    /// Which model to run
    #[arg(long, value_enum, value_name = "MODE")]
    mode: Option<LearnMode>,
    #[command(flatten)]
    prep: PrepArgs,
    /// train: number of training measurements
    #[arg(long, value_name = "INT")]
    n: Option<u64>,
    /// train: number of equal-width frequency bins
    #[arg(long, value_name = "INT")]
    bins: Option<u64>,
    /// surprise: the device's expectation
    #[arg(long, value_name = "REAL")]
    p_hat: Option<f64>,
    /// surprise: size of the follow-up experiment
    #[arg(long, value_name = "INT")]
    n_prime: Option<u64>,
    /// lineages: comma-separated expectations, one lineage each
    #[arg(long, value_name = "LIST")]
    p_hat_list: Option<String>,
    /// lineages: tolerance tau for "expectations met", 0 < tau <= 1
    #[arg(long, value_name = "REAL")]
    tau: Option<f64>,
    /// lineages: measurements per generation
    #[arg(long, value_name = "INT")]
    n_g: Option<u64>,
    /// lineages: number of generations
    #[arg(long, value_name = "INT")]
    generations: Option<u64>,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RuleKind {
    Zero,
    Positive,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Granularity {
    Bin,
    Branch,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LearnMode {
    Train,
    Surprise,
    Lineages,
}

// ---------------------------------------------------------------------------
// Errors and config handling
// ---------------------------------------------------------------------------

struct CliError {
    code: i32,
    message: String,
}

fn bad(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

impl From<preclusion::Error> for CliError {
    fn from(e: preclusion::Error) -> Self {
        CliError { code: if e.is_computational() { 3 } else { 2 }, message: e.to_string() }
    }
}

/// The parsed `--config` JSON object (empty when no file was given).
struct ConfigFile {
    map: serde_json::Map<String, serde_json::Value>,
}

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self { map: serde_json::Map::new() });
        };
        let text = fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config file {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| bad(format!("config file {} is not valid JSON: {e}", path.display())))?;
        match value {
            serde_json::Value::Object(map) => Ok(Self { map }),
            _ => Err(bad(format!("config file {} must hold a JSON object", path.display()))),
        }
    }

    fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| bad(format!("config key \"{key}\" must be a number"))),
        }
    }

    fn get_u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| bad(format!("config key \"{key}\" must be a non-negative integer"))),
        }
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_bool()
                .map(Some)
                .ok_or_else(|| bad(format!("config key \"{key}\" must be a boolean"))),
        }
    }

    fn get_str(&self, key: &str) -> Result<Option<&str>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| bad(format!("config key \"{key}\" must be a string"))),
        }
    }

    fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_f64()
                        .ok_or_else(|| bad(format!("config key \"{key}\" must hold numbers")))
                })
                .collect::<Result<Vec<f64>, CliError>>()
                .map(Some),
            Some(_) => Err(bad(format!("config key \"{key}\" must be an array of numbers"))),
        }
    }

}

fn parse_enum_key<T: ValueEnum>(key: &str, s: &str) -> Result<T, CliError> {
    T::from_str(s, false).map_err(|_| {
        let names: Vec<&str> = T::value_variants()
            .iter()
            .filter_map(|v| v.to_possible_value())
            .map(|pv| pv.get_name().to_string().leak() as &str)
            .collect();
        bad(format!("config key \"{key}\" must be one of: {}", names.join(", ")))
    })
}

fn parse_real_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(bad(format!("{flag} has an empty entry")));
        }
        values.push(
            part.parse::<f64>()
                .map_err(|_| bad(format!("{flag} entry \"{part}\" is not a number")))?,
        );
    }
    Ok(values)
}

// ---------------------------------------------------------------------------
// Effective-config echo
// ---------------------------------------------------------------------------

/// One value of the effective configuration, echoed into every artifact.
enum Echo {
    Real(f64),
    UInt(u64),
    Str(String),
    RealList(Vec<f64>),
}

type EchoList = Vec<(&'static str, Echo)>;

impl Echo {
    fn csv(&self) -> String {
        match self {
            Echo::Real(x) => sci(*x),
            Echo::UInt(u) => u.to_string(),
            Echo::Str(s) => s.clone(),
            Echo::RealList(xs) => {
                xs.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(",")
            }
        }
    }

    fn json(&self) -> JsonValue {
        match self {
            Echo::Real(x) => JsonValue::Real(*x),
            Echo::UInt(u) => JsonValue::UInt(*u),
            Echo::Str(s) => JsonValue::Str(s.clone()),
            Echo::RealList(xs) => {
                JsonValue::Array(xs.iter().map(|x| JsonValue::Real(*x)).collect())
            }
        }
    }
}

fn echo_comments(doc: &mut CsvDoc, echo: &EchoList) {
    for (key, value) in echo {
        doc.comment(key, &value.csv());
    }
}

fn echo_json(echo: &EchoList) -> JsonValue {
    JsonValue::Object(echo.iter().map(|(k, v)| (k.to_string(), v.json())).collect())
}

// ---------------------------------------------------------------------------
// Flag/config resolution
// ---------------------------------------------------------------------------

/// Merge preparation flags over config keys. Flags and config are merged
/// group-wise: any preparation flag on the command line hides all
/// preparation keys in the config file, so the two sources cannot mix into
/// a contradictory preparation.
fn resolve_prep(args: &PrepArgs, cfg: &ConfigFile) -> Result<(QubitPreparation, EchoList), CliError> {
    let flags_given = args.p.is_some()
        || args.c1_re.is_some()
        || args.c1_im.is_some()
        || args.c2_re.is_some()
        || args.c2_im.is_some();
    let (p, c): (Option<f64>, [Option<f64>; 4]) = if flags_given {
        (args.p, [args.c1_re, args.c1_im, args.c2_re, args.c2_im])
    } else {
        (
            cfg.get_f64("p")?,
            [
                cfg.get_f64("c1_re")?,
                cfg.get_f64("c1_im")?,
                cfg.get_f64("c2_re")?,
                cfg.get_f64("c2_im")?,
            ],
        )
    };
    let any_c = c.iter().any(Option::is_some);
    match (p, any_c) {
        (Some(_), true) => Err(bad(
            "give either --p or amplitude components (--c1-re/--c1-im/--c2-re/--c2-im), not both",
        )),
        (Some(p), false) => {
            let prep = QubitPreparation::from_born_probability(p)?;
            Ok((prep, vec![("p", Echo::Real(p))]))
        }
        (None, true) => {
            let [c1_re, c1_im, c2_re, c2_im] = c.map(|x| x.unwrap_or(0.0));
            let prep = QubitPreparation::new(
                Complex64::new(c1_re, c1_im),
                Complex64::new(c2_re, c2_im),
            )?;
            Ok((
                prep,
                vec![
                    ("c1_re", Echo::Real(c1_re)),
                    ("c1_im", Echo::Real(c1_im)),
                    ("c2_re", Echo::Real(c2_re)),
                    ("c2_im", Echo::Real(c2_im)),
                ],
            ))
        }
        (None, false) => Err(bad(
            "a preparation is required: --p or --c1-re/--c1-im/--c2-re/--c2-im (or config keys)",
        )),
    }
}

/// Merge rule flags over config keys (group-wise, like the preparation).
/// The positive rule requires exactly one of eps / log10_eps; the zero rule
/// forbids both.
fn resolve_rule(
    args: &RuleArgs,
    cfg: &ConfigFile,
    default_kind: RuleKind,
) -> Result<(PreclusionRule, EchoList), CliError> {
    let flags_given = args.rule.is_some() || args.eps.is_some() || args.log10_eps.is_some();
    let (kind, eps, log10_eps) = if flags_given {
        (args.rule, args.eps, args.log10_eps)
    } else {
        let kind = match cfg.get_str("rule")? {
            Some(s) => Some(parse_enum_key::<RuleKind>("rule", s)?),
            None => None,
        };
        (kind, cfg.get_f64("eps")?, cfg.get_f64("log10_eps")?)
    };
    let kind = kind.unwrap_or(default_kind);
    match kind {
        RuleKind::Zero => {
            if eps.is_some() || log10_eps.is_some() {
                return Err(bad("--eps and --log10-eps apply only to --rule positive"));
            }
            Ok((PreclusionRule::zero(), vec![("rule", Echo::Str("zero".into()))]))
        }
        RuleKind::Positive => match (eps, log10_eps) {
            (Some(eps), None) => Ok((
                PreclusionRule::positive(eps)?,
                vec![("rule", Echo::Str("positive".into())), ("eps", Echo::Real(eps))],
            )),
            (None, Some(l10)) => Ok((
                PreclusionRule::positive_log10(l10)?,
                vec![
                    ("rule", Echo::Str("positive".into())),
                    ("log10_eps", Echo::Real(l10)),
                ],
            )),
            (None, None) => {
                Err(bad("the positive rule needs a threshold: --eps or --log10-eps"))
            }
            (Some(_), Some(_)) => {
                Err(bad("give exactly one of --eps and --log10-eps, not both"))
            }
        },
    }
}

fn resolve_u64(
    flag_value: Option<u64>,
    cfg: &ConfigFile,
    key: &str,
    flag: &str,
) -> Result<u64, CliError> {
    flag_value
        .or(cfg.get_u64(key)?)
        .ok_or_else(|| bad(format!("{flag} is required (or config key \"{key}\")")))
}

fn resolve_format(args: &OutputArgs, cfg: &ConfigFile, default: Format) -> Result<Format, CliError> {
    if let Some(f) = args.format {
        return Ok(f);
    }
    match cfg.get_str("format")? {
        Some(s) => parse_enum_key::<Format>("format", s),
        None => Ok(default),
    }
}

fn format_echo(format: Format) -> (&'static str, Echo) {
    let name = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    ("format", Echo::Str(name.into()))
}

fn emit(args: &OutputArgs, content: &str) -> Result<(), CliError> {
    match &args.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => fs::write(path, content)
            .map_err(|e| bad(format!("cannot write {}: {e}", path.display()))),
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Weight(args) => cmd_weight(args),
        Cmd::Bins(args) => cmd_bins(args),
        Cmd::Survivors(args) => cmd_survivors(args),
        Cmd::Nb(args) => cmd_nb(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Learn(args) => cmd_learn(args),
    }
}

// ---------------------------------------------------------------------------
// weight
// ---------------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct WeightInput {
    dim: usize,
    state: Vec<[f64; 2]>,
    projector: Vec<Vec<[f64; 2]>>,
}

fn cmd_weight(args: WeightArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.output.config.as_deref())?;
    let input_path = match &args.input {
        Some(p) => p.clone(),
        None => PathBuf::from(
            cfg.get_str("input")?
                .ok_or_else(|| bad("--input is required (or config key \"input\")"))?,
        ),
    };
    let (rule, rule_echo) = resolve_rule(&args.rule, &cfg, RuleKind::Zero)?;
    let format = resolve_format(&args.output, &cfg, Format::Json)?;

    let text = fs::read_to_string(&input_path)
        .map_err(|e| bad(format!("cannot read input file {}: {e}", input_path.display())))?;
    let input: WeightInput = serde_json::from_str(&text).map_err(|e| {
        bad(format!("input file {} does not match the expected schema: {e}", input_path.display()))
    })?;
    if input.state.len() != input.dim {
        return Err(bad(format!(
            "dimension mismatch: \"dim\" is {} but the state has {} entries",
            input.dim,
            input.state.len()
        )));
    }
    if input.projector.len() != input.dim
        || input.projector.iter().any(|row| row.len() != input.dim)
    {
        return Err(bad(format!(
            "dimension mismatch: the projector must be {dim} x {dim}",
            dim = input.dim
        )));
    }
    let amps: Vec<Complex64> =
        input.state.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    let state = StateVector::new(amps)?;
    let flat: Vec<Complex64> = input
        .projector
        .iter()
        .flat_map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)))
        .collect();
    let matrix = ndarray::Array2::from_shape_vec((input.dim, input.dim), flat)
        .expect("dimensions checked above");
    let projector = Projector::new(matrix)?;
    let w = preclusion::weight(&state, &projector)?;
    let verdict = exists(w, &rule)?;

    let mut echo: EchoList = vec![
        ("command", Echo::Str("weight".into())),
        ("input", Echo::Str(input_path.display().to_string())),
    ];
    echo.extend(rule_echo);
    echo.push(format_echo(format));

    let content = match format {
        Format::Json => JsonValue::object(vec![
            ("config", echo_json(&echo)),
            ("dim", JsonValue::UInt(input.dim as u64)),
            ("weight", JsonValue::Real(verdict.weight)),
            ("log_weight", JsonValue::Real(verdict.log_weight)),
            ("exists", JsonValue::Int(i64::from(verdict.exists))),
            (
                "indistinguishable_from_zero",
                JsonValue::Bool(verdict.indistinguishable_from_zero),
            ),
        ])
        .render(),
        Format::Csv => {
            let mut doc = CsvDoc::new();
            echo_comments(&mut doc, &echo);
            doc.header(&["weight", "log_weight", "exists", "indistinguishable_from_zero"]);
            doc.row(&[
                sci(verdict.weight),
                sci(verdict.log_weight),
                u8::from(verdict.exists).to_string(),
                u8::from(verdict.indistinguishable_from_zero).to_string(),
            ]);
            doc.finish()
        }
    };
    emit(&args.output, &content)
}

// ---------------------------------------------------------------------------
// bins
// ---------------------------------------------------------------------------

fn cmd_bins(args: BinsArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.output.config.as_deref())?;
    let (prep, prep_echo) = resolve_prep(&args.prep, &cfg)?;
    let n = resolve_u64(args.n, &cfg, "n", "--n")?;
    let m = resolve_u64(args.bins, &cfg, "bins", "--bins")?;
    let binning = FrequencyBinning::new(m)?;
    let (rule, rule_echo) = resolve_rule(&args.rule, &cfg, RuleKind::Zero)?;
    let format = resolve_format(&args.output, &cfg, Format::Csv)?;

    let report = survivor_report(&prep, n, &binning, &rule)?;

    let mut echo: EchoList = vec![("command", Echo::Str("bins".into()))];
    echo.extend(prep_echo);
    echo.push(("n", Echo::UInt(n)));
    echo.push(("bins", Echo::UInt(m)));
    echo.extend(rule_echo);
    echo.push(format_echo(format));

    let survives = |j: usize| report.surviving_bins.binary_search(&j).is_ok();
    let content = match format {
        Format::Csv => {
            let mut doc = CsvDoc::new();
            echo_comments(&mut doc, &echo);
            doc.header(&["bin_index", "midpoint", "log_weight", "weight", "survives"]);
            for (j, &lw) in report.bin_log_weights.iter().enumerate() {
                doc.row(&[
                    j.to_string(),
                    sci(binning.midpoint(j)),
                    sci(lw),
                    sci(lw.exp().min(1.0)),
                    u8::from(survives(j)).to_string(),
                ]);
            }
            doc.finish()
        }
        Format::Json => {
            let rows: Vec<JsonValue> = report
                .bin_log_weights
                .iter()
                .enumerate()
                .map(|(j, &lw)| {
                    JsonValue::object(vec![
                        ("bin_index", JsonValue::UInt(j as u64)),
                        ("midpoint", JsonValue::Real(binning.midpoint(j))),
                        ("log_weight", JsonValue::Real(lw)),
                        ("weight", JsonValue::Real(lw.exp().min(1.0))),
                        ("survives", JsonValue::Bool(survives(j))),
                    ])
                })
                .collect();
            JsonValue::object(vec![
                ("config", echo_json(&echo)),
                ("rows", JsonValue::Array(rows)),
            ])
            .render()
        }
    };
    emit(&args.output, &content)
}

// ---------------------------------------------------------------------------
// survivors
// ---------------------------------------------------------------------------

fn cmd_survivors(args: SurvivorsArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.output.config.as_deref())?;
    let (prep, prep_echo) = resolve_prep(&args.prep, &cfg)?;
    let n = resolve_u64(args.n, &cfg, "n", "--n")?;
    let granularity = match args.granularity {
        Some(g) => g,
        None => match cfg.get_str("granularity")? {
            Some(s) => parse_enum_key::<Granularity>("granularity", s)?,
            None => Granularity::Bin,
        },
    };
    let (rule, rule_echo) = resolve_rule(&args.rule, &cfg, RuleKind::Zero)?;
    let format = resolve_format(&args.output, &cfg, Format::Json)?;

    let mut echo: EchoList = vec![("command", Echo::Str("survivors".into()))];
    echo.extend(prep_echo);
    echo.push(("n", Echo::UInt(n)));

    let content = match granularity {
        Granularity::Bin => {
            let m = resolve_u64(args.bins, &cfg, "bins", "--bins")?;
            let binning = FrequencyBinning::new(m)?;
            let report = survivor_report(&prep, n, &binning, &rule)?;
            echo.push(("bins", Echo::UInt(m)));
            echo.push(("granularity", Echo::Str("bin".into())));
            echo.extend(rule_echo);
            echo.push(format_echo(format));
            match format {
                Format::Json => JsonValue::object(vec![
                    ("config", echo_json(&echo)),
                    (
                        "born_bins",
                        JsonValue::Array(
                            report.born_bins.iter().map(|&j| JsonValue::UInt(j as u64)).collect(),
                        ),
                    ),
                    ("born_on_boundary", JsonValue::Bool(report.born_bins.len() > 1)),
                    (
                        "surviving_bins",
                        JsonValue::Array(
                            report
                                .surviving_bins
                                .iter()
                                .map(|&j| JsonValue::UInt(j as u64))
                                .collect(),
                        ),
                    ),
                    ("survivor_count", JsonValue::UInt(report.surviving_bins.len() as u64)),
                    ("is_theorem_state", JsonValue::Bool(report.is_theorem_state)),
                ])
                .render(),
                Format::Csv => {
                    let mut doc = CsvDoc::new();
                    echo_comments(&mut doc, &echo);
                    doc.comment(
                        "born_bins",
                        &report
                            .born_bins
                            .iter()
                            .map(|j| j.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                    doc.comment(
                        "born_on_boundary",
                        if report.born_bins.len() > 1 { "1" } else { "0" },
                    );
                    doc.comment("is_theorem_state", if report.is_theorem_state { "1" } else { "0" });
                    doc.comment("survivor_count", &report.surviving_bins.len().to_string());
                    doc.header(&["bin_index", "midpoint", "log_weight", "weight"]);
                    for &j in &report.surviving_bins {
                        let lw = report.bin_log_weights[j];
                        doc.row(&[
                            j.to_string(),
                            sci(binning.midpoint(j)),
                            sci(lw),
                            sci(lw.exp().min(1.0)),
                        ]);
                    }
                    doc.finish()
                }
            }
        }
        Granularity::Branch => {
            let ensemble = build_ensemble(&prep, n)?;
            let mut surviving: Vec<(u64, f64)> = Vec::new();
            for (k, &lw) in ensemble.log_weights().iter().enumerate() {
                if exists_log(lw, &rule)?.exists {
                    surviving.push((k as u64, lw));
                }
            }
            echo.push(("granularity", Echo::Str("branch".into())));
            echo.extend(rule_echo);
            echo.push(format_echo(format));
            match format {
                Format::Json => JsonValue::object(vec![
                    ("config", echo_json(&echo)),
                    (
                        "surviving_counts",
                        JsonValue::Array(surviving.iter().map(|&(k, _)| JsonValue::UInt(k)).collect()),
                    ),
                    ("survivor_count", JsonValue::UInt(surviving.len() as u64)),
                ])
                .render(),
                Format::Csv => {
                    let mut doc = CsvDoc::new();
                    echo_comments(&mut doc, &echo);
                    doc.comment("survivor_count", &surviving.len().to_string());
                    doc.header(&["k", "frequency", "log_weight", "weight"]);
                    for &(k, lw) in &surviving {
                        doc.row(&[
                            k.to_string(),
                            sci(k as f64 / n as f64),
                            sci(lw),
                            sci(lw.exp().min(1.0)),
                        ]);
                    }
                    doc.finish()
                }
            }
        }
    };
    emit(&args.output, &content)
}

// ---------------------------------------------------------------------------
// nb
// ---------------------------------------------------------------------------

const DEFAULT_N_MAX: u64 = 10_000;
const DEFAULT_WINDOW: u64 = 32;

fn cmd_nb(args: NbArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.output.config.as_deref())?;
    let (prep, prep_echo) = resolve_prep(&args.prep, &cfg)?;
    let m = resolve_u64(args.bins, &cfg, "bins", "--bins")?;
    let binning = FrequencyBinning::new(m)?;
    let (rule, rule_echo) = resolve_rule(&args.rule, &cfg, RuleKind::Positive)?;
    let n_max = args.n_max.or(cfg.get_u64("n_max")?).unwrap_or(DEFAULT_N_MAX);
    let window = args.window.or(cfg.get_u64("window")?).unwrap_or(DEFAULT_WINDOW);
    // Execution mode, not configuration: deliberately absent from the echo
    // so serial and parallel runs emit identical bytes.
    let parallel = args.parallel.or(cfg.get_bool("parallel")?).unwrap_or(false);
    let format = resolve_format(&args.output, &cfg, Format::Json)?;

    let result = find_nb(&prep, &binning, &rule, n_max, window, parallel)?;
    let scanned_up_to = result.scan_log.last().map(|e| e.n).unwrap_or(0);
    let status = if result.n_b.is_some() { "found" } else { "not-found" };

    let mut echo: EchoList = vec![("command", Echo::Str("nb".into()))];
    echo.extend(prep_echo);
    echo.push(("bins", Echo::UInt(m)));
    echo.extend(rule_echo);
    echo.push(("n_max", Echo::UInt(n_max)));
    echo.push(("window", Echo::UInt(window)));
    echo.push(format_echo(format));

    let content = match format {
        Format::Json => JsonValue::object(vec![
            ("config", echo_json(&echo)),
            ("status", JsonValue::Str(status.into())),
            (
                "n_b",
                match result.n_b {
                    Some(n_b) => JsonValue::UInt(n_b),
                    None => JsonValue::Null,
                },
            ),
            (
                "born_bins",
                JsonValue::Array(
                    result.born_bins.iter().map(|&j| JsonValue::UInt(j as u64)).collect(),
                ),
            ),
            ("born_on_boundary", JsonValue::Bool(result.born_on_boundary)),
            ("scanned_up_to", JsonValue::UInt(scanned_up_to)),
        ])
        .render(),
        Format::Csv => {
            // Long-format scan log: every scanned n, every bin. Re-derived
            // with the same per-n report the scan itself used, so the table
            // matches the verdict bit for bit.
            let mut doc = CsvDoc::new();
            echo_comments(&mut doc, &echo);
            doc.comment("status", status);
            doc.comment(
                "n_b",
                &result.n_b.map(|n| n.to_string()).unwrap_or_default(),
            );
            doc.comment(
                "born_bins",
                &result
                    .born_bins
                    .iter()
                    .map(|j| j.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            doc.comment("born_on_boundary", if result.born_on_boundary { "1" } else { "0" });
            doc.comment("scanned_up_to", &scanned_up_to.to_string());
            doc.header(&["n", "bin_index", "bin_midpoint", "log_weight", "survives"]);
            for entry in &result.scan_log {
                let report = survivor_report(&prep, entry.n, &binning, &rule)?;
                for (j, &lw) in report.bin_log_weights.iter().enumerate() {
                    doc.row(&[
                        entry.n.to_string(),
                        j.to_string(),
                        sci(binning.midpoint(j)),
                        sci(lw),
                        u8::from(report.surviving_bins.binary_search(&j).is_ok()).to_string(),
                    ]);
                }
            }
            doc.finish()
        }
    };
    emit(&args.output, &content)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.output.config.as_deref())?;
    let (prep, prep_echo) = resolve_prep(&args.prep, &cfg)?;
    let m = resolve_u64(args.bins, &cfg, "bins", "--bins")?;
    let binning = FrequencyBinning::new(m)?;
    let eps_list = match &args.eps_list {
        Some(text) => parse_real_list("--eps-list", text)?,
        None => cfg
            .get_f64_list("eps_list")?
            .ok_or_else(|| bad("--eps-list is required (or config key \"eps_list\")"))?,
    };
    let n_max = args.n_max.or(cfg.get_u64("n_max")?).unwrap_or(DEFAULT_N_MAX);
    let window = args.window.or(cfg.get_u64("window")?).unwrap_or(DEFAULT_WINDOW);
    let parallel = args.parallel.or(cfg.get_bool("parallel")?).unwrap_or(false);
    let format = resolve_format(&args.output, &cfg, Format::Csv)?;

    let rows = sweep_nb(&prep, &binning, &eps_list, n_max, window, parallel)?;

    let mut echo: EchoList = vec![("command", Echo::Str("sweep".into()))];
    echo.extend(prep_echo);
    echo.push(("bins", Echo::UInt(m)));
    echo.push(("eps_list", Echo::RealList(eps_list)));
    echo.push(("n_max", Echo::UInt(n_max)));
    echo.push(("window", Echo::UInt(window)));
    echo.push(format_echo(format));

    let status_name = |s: SweepStatus| match s {
        SweepStatus::Found => "found",
        SweepStatus::NotFound => "not-found",
        SweepStatus::AllPrecludedPersistent => "all-precluded-persistent",
        SweepStatus::InvalidEps => "invalid-eps",
    };

    let content = match format {
        Format::Csv => {
            let mut doc = CsvDoc::new();
            echo_comments(&mut doc, &echo);
            doc.header(&["eps", "n_b", "status", "born_on_boundary"]);
            for row in &rows {
                doc.row(&[
                    sci(row.eps),
                    row.n_b.map(|n| n.to_string()).unwrap_or_default(),
                    status_name(row.status).to_string(),
                    u8::from(row.born_on_boundary).to_string(),
                ]);
            }
            doc.finish()
        }
        Format::Json => {
            let rows: Vec<JsonValue> = rows
                .iter()
                .map(|row| {
                    JsonValue::object(vec![
                        ("eps", JsonValue::Real(row.eps)),
                        (
                            "n_b",
                            match row.n_b {
                                Some(n) => JsonValue::UInt(n),
                                None => JsonValue::Null,
                            },
                        ),
                        ("status", JsonValue::Str(status_name(row.status).into())),
                        ("born_on_boundary", JsonValue::Bool(row.born_on_boundary)),
                    ])
                })
                .collect();
            JsonValue::object(vec![
                ("config", echo_json(&echo)),
                ("rows", JsonValue::Array(rows)),
            ])
            .render()
        }
    };
    emit(&args.output, &content)
}

// ---------------------------------------------------------------------------
// learn
// ---------------------------------------------------------------------------

fn cmd_learn(args: LearnArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.output.config.as_deref())?;
    let mode = match args.mode {
        Some(m) => m,
        None => match cfg.get_str("mode")? {
            Some(s) => parse_enum_key::<LearnMode>("mode", s)?,
            None => return Err(bad("--mode is required: train, surprise, or lineages")),
        },
    };
    let (prep, prep_echo) = resolve_prep(&args.prep, &cfg)?;
    let (rule, rule_echo) = resolve_rule(&args.rule, &cfg, RuleKind::Zero)?;
    let format = resolve_format(&args.output, &cfg, Format::Csv)?;

    let mode_name = match mode {
        LearnMode::Train => "train",
        LearnMode::Surprise => "surprise",
        LearnMode::Lineages => "lineages",
    };
    let mut echo: EchoList = vec![
        ("command", Echo::Str("learn".into())),
        ("mode", Echo::Str(mode_name.into())),
    ];
    echo.extend(prep_echo);

    let content = match mode {
        LearnMode::Train => {
            let n_train = resolve_u64(args.n, &cfg, "n", "--n")?;
            let m = resolve_u64(args.bins, &cfg, "bins", "--bins")?;
            let binning = FrequencyBinning::new(m)?;
            let devices = train_device(&prep, n_train, &binning, &rule)?;
            echo.push(("n", Echo::UInt(n_train)));
            echo.push(("bins", Echo::UInt(m)));
            echo.extend(rule_echo);
            echo.push(format_echo(format));
            match format {
                Format::Csv => {
                    let mut doc = CsvDoc::new();
                    echo_comments(&mut doc, &echo);
                    doc.comment(
                        "surviving_bins",
                        &devices[0]
                            .surviving_copies
                            .iter()
                            .map(|j| j.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                    doc.header(&["device_id", "bin_index", "p_hat"]);
                    for (id, device) in devices.iter().enumerate() {
                        doc.row(&[
                            id.to_string(),
                            device.bin_index.to_string(),
                            sci(device.p_hat),
                        ]);
                    }
                    doc.finish()
                }
                Format::Json => {
                    let rows: Vec<JsonValue> = devices
                        .iter()
                        .enumerate()
                        .map(|(id, device)| {
                            JsonValue::object(vec![
                                ("device_id", JsonValue::UInt(id as u64)),
                                ("bin_index", JsonValue::UInt(device.bin_index as u64)),
                                ("p_hat", JsonValue::Real(device.p_hat)),
                            ])
                        })
                        .collect();
                    JsonValue::object(vec![
                        ("config", echo_json(&echo)),
                        (
                            "surviving_bins",
                            JsonValue::Array(
                                devices[0]
                                    .surviving_copies
                                    .iter()
                                    .map(|&j| JsonValue::UInt(j as u64))
                                    .collect(),
                            ),
                        ),
                        ("devices", JsonValue::Array(rows)),
                    ])
                    .render()
                }
            }
        }
        LearnMode::Surprise => {
            let p_hat = args
                .p_hat
                .or(cfg.get_f64("p_hat")?)
                .ok_or_else(|| bad("--p-hat is required (or config key \"p_hat\")"))?;
            let n_prime = resolve_u64(args.n_prime, &cfg, "n_prime", "--n-prime")?;
            let dist = predict_surprise(p_hat, &prep, n_prime, &rule)?;
            echo.push(("p_hat", Echo::Real(p_hat)));
            echo.push(("n_prime", Echo::UInt(n_prime)));
            echo.extend(rule_echo);
            echo.push(format_echo(format));
            match format {
                Format::Csv => {
                    let mut doc = CsvDoc::new();
                    echo_comments(&mut doc, &echo);
                    doc.comment("weighted_mean_surprise", &sci(dist.weighted_mean_surprise));
                    doc.comment("surviving_log_mass", &sci(dist.surviving_log_mass));
                    doc.comment("precluded_log_mass", &sci(dist.precluded_log_mass));
                    doc.header(&["k", "observed_frequency", "log_weight", "weight", "surprise"]);
                    for e in &dist.entries {
                        doc.row(&[
                            e.k.to_string(),
                            sci(e.observed_frequency),
                            sci(e.log_weight),
                            sci(e.log_weight.exp().min(1.0)),
                            sci(e.surprise),
                        ]);
                    }
                    doc.finish()
                }
                Format::Json => {
                    let rows: Vec<JsonValue> = dist
                        .entries
                        .iter()
                        .map(|e| {
                            JsonValue::object(vec![
                                ("k", JsonValue::UInt(e.k)),
                                ("observed_frequency", JsonValue::Real(e.observed_frequency)),
                                ("log_weight", JsonValue::Real(e.log_weight)),
                                ("weight", JsonValue::Real(e.log_weight.exp().min(1.0))),
                                ("surprise", JsonValue::Real(e.surprise)),
                            ])
                        })
                        .collect();
                    JsonValue::object(vec![
                        ("config", echo_json(&echo)),
                        ("entries", JsonValue::Array(rows)),
                        (
                            "weighted_mean_surprise",
                            JsonValue::Real(dist.weighted_mean_surprise),
                        ),
                        ("surviving_log_mass", JsonValue::Real(dist.surviving_log_mass)),
                        ("precluded_log_mass", JsonValue::Real(dist.precluded_log_mass)),
                    ])
                    .render()
                }
            }
        }
        LearnMode::Lineages => {
            let p_hats = match &args.p_hat_list {
                Some(text) => parse_real_list("--p-hat-list", text)?,
                None => cfg.get_f64_list("p_hat_list")?.ok_or_else(|| {
                    bad("--p-hat-list is required (or config key \"p_hat_list\")")
                })?,
            };
            if p_hats.is_empty() {
                return Err(bad("--p-hat-list must name at least one lineage"));
            }
            let tau = args
                .tau
                .or(cfg.get_f64("tau")?)
                .ok_or_else(|| bad("--tau is required (or config key \"tau\")"))?;
            let n_g = resolve_u64(args.n_g, &cfg, "n_g", "--n-g")?;
            let generations = resolve_u64(args.generations, &cfg, "generations", "--generations")?;
            let lineages: Vec<Lineage> = p_hats
                .iter()
                .map(|&p_hat| Lineage::new(p_hat, tau, n_g))
                .collect::<Result<_, _>>()?;
            let outcomes = run_lineages(&prep, &lineages, generations, &rule)?;
            echo.push(("p_hat_list", Echo::RealList(p_hats)));
            echo.push(("tau", Echo::Real(tau)));
            echo.push(("n_g", Echo::UInt(n_g)));
            echo.push(("generations", Echo::UInt(generations)));
            echo.extend(rule_echo);
            echo.push(format_echo(format));
            match format {
                Format::Csv => {
                    let mut doc = CsvDoc::new();
                    echo_comments(&mut doc, &echo);
                    doc.header(&["lineage_id", "p_hat", "generation", "log_weight", "precluded"]);
                    for (id, outcome) in outcomes.iter().enumerate() {
                        for (i, &lw) in outcome.log_weight_trace.iter().enumerate() {
                            let g = (i + 1) as u64;
                            let precluded =
                                outcome.generation_precluded.is_some_and(|gp| g >= gp);
                            doc.row(&[
                                id.to_string(),
                                sci(outcome.lineage.p_hat()),
                                g.to_string(),
                                sci(lw),
                                u8::from(precluded).to_string(),
                            ]);
                        }
                    }
                    doc.finish()
                }
                Format::Json => {
                    let rows: Vec<JsonValue> = outcomes
                        .iter()
                        .enumerate()
                        .map(|(id, outcome)| {
                            JsonValue::object(vec![
                                ("lineage_id", JsonValue::UInt(id as u64)),
                                ("p_hat", JsonValue::Real(outcome.lineage.p_hat())),
                                (
                                    "expectation_met_counts",
                                    JsonValue::Array(
                                        outcome
                                            .expectation_met_counts
                                            .iter()
                                            .map(|&m| JsonValue::UInt(m))
                                            .collect(),
                                    ),
                                ),
                                (
                                    "per_generation_log_mass",
                                    JsonValue::Real(outcome.per_generation_log_mass),
                                ),
                                (
                                    "generation_precluded",
                                    match outcome.generation_precluded {
                                        Some(g) => JsonValue::UInt(g),
                                        None => JsonValue::Null,
                                    },
                                ),
                                (
                                    "log_weight_trace",
                                    JsonValue::Array(
                                        outcome
                                            .log_weight_trace
                                            .iter()
                                            .map(|&lw| JsonValue::Real(lw))
                                            .collect(),
                                    ),
                                ),
                            ])
                        })
                        .collect();
                    JsonValue::object(vec![
                        ("config", echo_json(&echo)),
                        ("lineages", JsonValue::Array(rows)),
                    ])
                    .render()
                }
            }
        }
    };
    emit(&args.output, &content)
}
