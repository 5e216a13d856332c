//! The `mischief` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, rejected before
//! any I/O), 2 for data and format errors. Diagnostics go to stderr; JSON
//! results go to stdout or to the requested file.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::AnalysisError;
use crate::bpe::{train, MergeTable, WordCounts};
use crate::collision::{empirical_collision_rate, CollisionResult};
use crate::corpus::{read_corpus, CorpusError, CorpusFormat, CorpusReader, CorpusWriter, Record};
use crate::divergence::{divergence_of, divergence_report, SweepEntry};
use crate::gra::{ConfigError, PerturbConfig, DEFAULT_MIN_LENGTH};
use crate::manifest::RunManifest;
use crate::mischief::{mischief_corpus_parallel, perturb_record};
use crate::rng::Stream;
use crate::stats::StatsAccumulator;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

const PARALLEL_BATCH: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "mischief", version, about = "Scramble word interiors in text corpora, reproducibly")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Perturb a corpus.
    Perturb(PerturbArgs),
    /// Collision probability of two independent scrambles.
    Collide(CollideArgs),
    /// Train or apply a BPE merge table.
    Bpe {
        #[command(subcommand)]
        command: BpeCommand,
    },
    /// Subword divergence between a corpus and its perturbed twin.
    Divergence(DivergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatKind {
    Txt,
    Tsv,
}

#[derive(Debug, Args)]
struct FormatArgs {
    #[arg(long, value_enum, default_value = "txt")]
    format: FormatKind,
    /// Columns to perturb (tsv only): names or 0-based indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    columns: Vec<String>,
    /// The tsv file starts with a header row.
    #[arg(long)]
    header: bool,
}

impl FormatArgs {
    fn to_format(&self) -> Result<CorpusFormat, CliError> {
        match self.format {
            FormatKind::Txt => {
                if !self.columns.is_empty() {
                    return Err(CliError::Usage("--columns only applies to --format tsv".into()));
                }
                let mut f = CorpusFormat::plain();
                f.has_header = self.header;
                Ok(f)
            }
            FormatKind::Tsv => CorpusFormat::tsv(self.header, &self.columns).map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

#[derive(Debug, Args)]
struct PerturbArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    format: FormatArgs,
    /// Probability that a line is selected.
    #[arg(long)]
    p: f64,
    /// Probability that an eligible word in a selected line is scrambled.
    #[arg(long)]
    r: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_LENGTH)]
    min_len: usize,
    #[arg(long)]
    force_nonidentity: bool,
    /// Where to write the run manifest [default: <output>.manifest.json].
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["n", "word"]))]
struct CollideArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum BpeCommand {
    Train(BpeTrainArgs),
    Apply(BpeApplyArgs),
}

#[derive(Debug, Args)]
struct BpeTrainArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    vocab_size: usize,
    #[arg(long)]
    output_table: PathBuf,
    #[command(flatten)]
    format: FormatArgs,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BpeApplyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    table: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    format: FormatArgs,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VocabSource {
    Clean,
    Perturbed,
}

#[derive(Debug, Args)]
struct DivergenceArgs {
    #[arg(long)]
    original: PathBuf,
    #[arg(long, conflicts_with = "sweep")]
    perturbed: Option<PathBuf>,
    /// Generate perturbed corpora internally for every (p, r, seed).
    #[arg(long)]
    sweep: bool,
    #[arg(long = "p", value_delimiter = ',', default_value = "1")]
    p_values: Vec<f64>,
    #[arg(long = "r", value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
    r_values: Vec<f64>,
    #[arg(long = "seed", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_MIN_LENGTH)]
    min_len: usize,
    /// Existing merge table.
    #[arg(long, conflicts_with = "vocab_size")]
    table: Option<PathBuf>,
    /// Train a table of this size instead of loading one.
    #[arg(long)]
    vocab_size: Option<usize>,
    /// Which side the trained table learns from.
    #[arg(long, value_enum, default_value = "clean")]
    vocab_from: VocabSource,
    /// Include word-length statistics of the original corpus.
    #[arg(long)]
    stats: bool,
    #[command(flatten)]
    format: FormatArgs,
    #[arg(long)]
    output_report: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn with_path<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let command_line: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match cli.command {
        Command::Perturb(a) => cmd_perturb(a, command_line),
        Command::Collide(a) => cmd_collide(a),
        Command::Bpe {
            command: BpeCommand::Train(a),
        } => cmd_bpe_train(a, command_line),
        Command::Bpe {
            command: BpeCommand::Apply(a),
        } => cmd_bpe_apply(a, command_line),
        Command::Divergence(a) => cmd_divergence(a, command_line),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("mischief: {e}");
            e.code()
        }
    }
}

fn open_input(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(with_path(path))
}

fn open_corpus(path: &Path, format: &CorpusFormat) -> Result<CorpusReader<BufReader<File>>, CliError> {
    read_corpus(open_input(path)?, format.clone()).map_err(with_path(path))
}

fn reject_same_file(input: &Path, output: &Path) -> Result<(), CliError> {
    if let (Ok(a), Ok(b)) = (input.canonicalize(), output.canonicalize()) {
        if a == b {
            return Err(CliError::Usage(format!(
                "output {} would overwrite the input",
                output.display()
            )));
        }
    }
    Ok(())
}

fn default_manifest(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(OsString::from).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(with_path(p)),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_perturb(args: PerturbArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let format = args.format.to_format()?;
    let config = PerturbConfig::new(args.p, args.r, args.seed)?
        .with_min_length(args.min_len)?
        .with_force_nonidentity(args.force_nonidentity);
    reject_same_file(&args.input, &args.output)?;

    let reader = open_corpus(&args.input, &format)?;
    let header = reader.header().map(<[String]>::to_vec);
    let sink = File::create(&args.output).map_err(with_path(&args.output))?;
    let mut writer = CorpusWriter::new(BufWriter::new(sink), header.as_deref())?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Data(e.to_string()))?;
    pool.install(|| -> Result<(), CliError> {
        for record in mischief_corpus_parallel(reader, &config, PARALLEL_BATCH) {
            let record = record.map_err(with_path(&args.input))?;
            writer.write(&record)?;
        }
        Ok(())
    })?;
    writer.finish()?;

    let manifest_path = args.manifest.unwrap_or_else(|| default_manifest(&args.output));
    RunManifest::new(
        command_line,
        json!({ "perturb": config, "format": format }),
    )
    .input(&args.input)?
    .output(&args.output)?
    .write(&manifest_path)
    .map_err(with_path(&manifest_path))?;
    Ok(())
}

/// A word of `n` distinct letters, for sampling by length alone.
fn synthetic_word(n: usize) -> Option<String> {
    let letters = ('a'..='z').chain('α'..='ω').filter(|c| c.is_alphabetic());
    let word: String = letters.take(n).collect();
    (word.chars().count() == n).then_some(word)
}

fn cmd_collide(args: CollideArgs) -> Result<(), CliError> {
    let mut stream = Stream::from_seed(args.seed);
    let result = match (args.n, &args.word) {
        (Some(n), None) => match args.trials {
            None => CollisionResult::exact_only(n)?,
            Some(trials) => {
                CollisionResult::exact_only(n)?;
                let word = synthetic_word(n)
                    .ok_or_else(|| CliError::Data(format!("no synthetic word of length {n}")))?;
                empirical_collision_rate(&word, trials, &mut stream)?
            }
        },
        (None, Some(word)) => empirical_collision_rate(word, args.trials.unwrap_or(10_000), &mut stream)?,
        _ => return Err(CliError::Usage("give exactly one of --n and --word".into())),
    };
    emit_json(&result, None)
}

fn cmd_bpe_train(args: BpeTrainArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let format = args.format.to_format()?;
    if args.vocab_size == 0 {
        return Err(CliError::Usage("--vocab-size must be positive".into()));
    }
    let mut counts = WordCounts::new();
    for record in open_corpus(&args.input, &format)? {
        counts.add_record(&record.map_err(with_path(&args.input))?);
    }
    let training = train(&counts, args.vocab_size).map_err(with_path(&args.input))?;
    std::fs::write(&args.output_table, training.table.to_text()).map_err(with_path(&args.output_table))?;

    let manifest_path = args.manifest.unwrap_or_else(|| default_manifest(&args.output_table));
    RunManifest::new(
        command_line,
        json!({ "vocab_size": args.vocab_size, "merges": training.table.merges().len(), "format": format }),
    )
    .input(&args.input)?
    .output(&args.output_table)?
    .write(&manifest_path)
    .map_err(with_path(&manifest_path))?;
    Ok(())
}

fn load_table(path: &Path) -> Result<MergeTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(with_path(path))?;
    MergeTable::from_text(&text).map_err(with_path(path))
}

fn cmd_bpe_apply(args: BpeApplyArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let format = args.format.to_format()?;
    reject_same_file(&args.input, &args.output)?;
    let table = load_table(&args.table)?;
    let reader = open_corpus(&args.input, &format)?;
    let header = reader.header().map(<[String]>::to_vec);
    let sink = File::create(&args.output).map_err(with_path(&args.output))?;
    let mut writer = CorpusWriter::new(BufWriter::new(sink), header.as_deref())?;
    for record in reader {
        let mut record = record.map_err(with_path(&args.input))?;
        for (field, &masked) in record.fields.iter_mut().zip(&record.perturbable) {
            if masked {
                *field = table.tokenize(field).join(" ");
            }
        }
        writer.write(&record)?;
    }
    writer.finish()?;

    let manifest_path = args.manifest.unwrap_or_else(|| default_manifest(&args.output));
    RunManifest::new(command_line, json!({ "format": format }))
        .input(&args.input)?
        .input(&args.table)?
        .output(&args.output)?
        .write(&manifest_path)
        .map_err(with_path(&manifest_path))?;
    Ok(())
}

#[derive(Serialize)]
struct DivergenceOutput {
    vocabulary: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<crate::stats::CorpusStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<crate::divergence::DivergenceReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    sweep: Vec<SweepEntry>,
}

fn train_on(records: &[Record], vocab_size: usize) -> Result<MergeTable, CliError> {
    Ok(train(&records.iter().collect(), vocab_size)?.table)
}

fn cmd_divergence(args: DivergenceArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let format = args.format.to_format()?;
    let comparing = args.sweep || args.perturbed.is_some();
    if comparing && args.table.is_none() && args.vocab_size.is_none() {
        return Err(CliError::Usage("need --table or --vocab-size to compare corpora".into()));
    }
    if !comparing && !args.stats {
        return Err(CliError::Usage("need --perturbed, --sweep or --stats".into()));
    }
    if args.sweep && args.seeds.is_empty() {
        return Err(CliError::Usage("--sweep needs explicit --seed values".into()));
    }
    if args.vocab_from == VocabSource::Perturbed && args.table.is_some() {
        return Err(CliError::Usage("--vocab-from only applies with --vocab-size".into()));
    }
    if args.min_len == 0 {
        return Err(CliError::Usage("--min-len must be positive".into()));
    }
    let mut configs = Vec::new();
    if args.sweep {
        for &p in &args.p_values {
            for &r in &args.r_values {
                for &seed in &args.seeds {
                    configs.push(PerturbConfig::new(p, r, seed)?.with_min_length(args.min_len)?);
                }
            }
        }
    }

    let external = args.table.as_deref().map(load_table).transpose()?;
    let vocabulary = match (&args.table, args.vocab_size) {
        (Some(p), _) => json!({ "source": "table", "path": p.display().to_string() }),
        (None, Some(n)) => json!({ "source": args.vocab_from, "vocab_size": n }),
        (None, None) => serde_json::Value::Null,
    };
    let mut output = DivergenceOutput {
        vocabulary,
        stats: None,
        report: None,
        sweep: Vec::new(),
    };

    let needs_memory = args.sweep || args.vocab_size.is_some();
    let original: Option<Vec<Record>> = if needs_memory || args.stats {
        Some(
            open_corpus(&args.original, &format)?
                .collect::<Result<_, _>>()
                .map_err(with_path(&args.original))?,
        )
    } else {
        None
    };

    if args.stats {
        let mut acc = StatsAccumulator::default();
        for r in original.as_deref().unwrap_or_default() {
            acc.add_record(r, args.min_len);
        }
        output.stats = Some(acc.finish(args.min_len).map_err(with_path(&args.original))?);
    }

    if let Some(perturbed_path) = &args.perturbed {
        let report = match (&external, original.as_deref()) {
            (Some(table), _) => divergence_report(
                open_corpus(&args.original, &format)?,
                open_corpus(perturbed_path, &format)?,
                table,
            )?,
            (None, Some(orig)) => {
                let pert: Vec<Record> = open_corpus(perturbed_path, &format)?
                    .collect::<Result<_, _>>()
                    .map_err(with_path(perturbed_path))?;
                let vocab_size = args.vocab_size.expect("checked above");
                let table = match args.vocab_from {
                    VocabSource::Clean => train_on(orig, vocab_size)?,
                    VocabSource::Perturbed => train_on(&pert, vocab_size)?,
                };
                divergence_of(orig, &pert, &table)?
            }
            (None, None) => unreachable!("original is loaded whenever no table is given"),
        };
        output.report = Some(report);
    }

    if args.sweep {
        let orig = original.as_deref().expect("loaded for sweeps");
        let clean_table = match (&external, args.vocab_from) {
            (Some(t), _) => Some(t.clone()),
            (None, VocabSource::Clean) => Some(train_on(orig, args.vocab_size.expect("checked above"))?),
            (None, VocabSource::Perturbed) => None,
        };
        for config in &configs {
            let pert: Vec<Record> = orig.iter().cloned().map(|r| perturb_record(r, config)).collect();
            let report = match &clean_table {
                Some(t) => divergence_of(orig, &pert, t)?,
                None => divergence_of(orig, &pert, &train_on(&pert, args.vocab_size.expect("checked above"))?)?,
            };
            output.sweep.push(SweepEntry {
                p: config.p(),
                r: config.r(),
                seed: config.seed(),
                report,
            });
        }
    }

    emit_json(&output, args.output_report.as_deref())?;

    if let Some(report_path) = &args.output_report {
        let manifest_path = args.manifest.clone().unwrap_or_else(|| default_manifest(report_path));
        let mut manifest = RunManifest::new(
            command_line,
            json!({
                "format": format,
                "sweep": configs,
                "min_len": args.min_len,
                "vocab_from": args.vocab_from,
            }),
        )
        .input(&args.original)?;
        if let Some(p) = &args.perturbed {
            manifest = manifest.input(p)?;
        }
        if let Some(t) = &args.table {
            manifest = manifest.input(t)?;
        }
        manifest
            .output(report_path)?
            .write(&manifest_path)
            .map_err(with_path(&manifest_path))?;
    }
    Ok(())
}
