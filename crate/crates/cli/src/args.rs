use std::fs;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgMatches, Args, CommandFactory, Parser, Subcommand};
use lungct::pipeline::PipelineConfig;

use crate::exit::{self, Failure};

/// Tumour detection on lung CT series.
///
/// Settings are read from built-in defaults, then `--config`, then the
/// per-key flags listed under "Pipeline settings".
#[derive(Debug, Parser)]
#[command(name = "lungct", version)]
pub struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect tumours in one series and write a per-patient result folder.
    Analyze(AnalyzeArgs),
    /// Train a classifier from a features CSV.
    Train(TrainArgs),
    /// Segment series and write one feature row per candidate region.
    ExtractFeatures(ExtractArgs),
    /// Score predictions against labels.
    Eval(EvalArgs),
    /// Write a synthetic series with known tumour slices.
    Phantom(PhantomArgs),
    /// Write a synthetic labelled features CSV.
    Corpus(CorpusArgs),
    /// Print the effective settings in config-file syntax.
    Config,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Directory of DICOM (or PGM) slices from one series.
    pub series: PathBuf,
    /// Trained model file.
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Features CSV with labels 0/1; rows labelled -1 are ignored.
    pub features: PathBuf,
    /// Where to write the model.
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// One or more series directories.
    #[arg(required = true)]
    pub series: Vec<PathBuf>,
    /// Labels file: `patient_id: i,j,k` per line.
    #[arg(long, value_name = "FILE")]
    pub labels: Option<PathBuf>,
    /// Output CSV; stdout when omitted.
    #[arg(long, short = 'o', value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// CSV with `patient_id,slice_index,prediction`.
    #[arg(long, value_name = "FILE", requires = "labels", conflicts_with_all = ["model", "features"])]
    pub predictions: Option<PathBuf>,
    /// CSV with `patient_id,slice_index,label` (a features CSV works).
    #[arg(long, value_name = "FILE")]
    pub labels: Option<PathBuf>,
    /// Model to run over `--features`.
    #[arg(long, value_name = "FILE", requires = "features")]
    pub model: Option<PathBuf>,
    /// Labelled features CSV scored row by row with `--model`.
    #[arg(long, value_name = "FILE", requires = "model")]
    pub features: Option<PathBuf>,
    /// Also write the per-row predictions of `--model` here.
    #[arg(long, value_name = "FILE", requires = "model")]
    pub write_predictions: Option<PathBuf>,
    /// Print the metrics as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PhantomArgs {
    /// Output directory for the slices.
    pub dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub phantom_seed: u64,
    #[arg(long, default_value_t = 80)]
    pub slices: usize,
    /// Tumour slice indices, comma separated; empty for a tumour-free series.
    #[arg(long, default_value = "30,31,32,33,34", value_parser = slice_list)]
    pub tumour_slices: SliceList,
    #[arg(long, default_value = "PHANTOM-0001")]
    pub patient_id: String,
    /// Leave out the trachea, particles and wall plaques.
    #[arg(long)]
    pub no_distractors: bool,
    /// Write 8-bit PGM instead of DICOM.
    #[arg(long)]
    pub pgm: bool,
    /// Also write a labels file with the tumour slices.
    #[arg(long, value_name = "FILE")]
    pub labels_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Output CSV.
    pub output: PathBuf,
    #[arg(long, default_value_t = 500)]
    pub rows: usize,
    #[arg(long, default_value_t = 2024)]
    pub corpus_seed: u64,
}

#[derive(Debug, Clone)]
pub struct SliceList(pub Vec<usize>);

fn slice_list(s: &str) -> Result<SliceList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("{t:?} is not a slice index")))
        .collect::<Result<_, _>>()
        .map(SliceList)
}

fn flag(key: &str) -> String {
    key.replace('_', "-")
}

/// The derived parser plus one global flag per config key.
pub fn command() -> clap::Command {
    let mut cmd = Cli::command();
    for (key, default) in PipelineConfig::KEYS {
        let mut arg = Arg::new(key)
            .long(flag(key))
            .global(true)
            .value_name("VALUE")
            .allow_negative_numbers(true)
            .help_heading("Pipeline settings")
            .help(format!("default {default}"));
        if key == "output_dir" {
            arg = arg.visible_alias("out");
        }
        cmd = cmd.arg(arg);
    }
    cmd
}

/// Defaults, then the config file, then per-key flags.
pub fn load_config(file: Option<&Path>, matches: &ArgMatches) -> Result<PipelineConfig, Failure> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::msg(exit::OTHER, format!("reading config {}: {e}", path.display())))?;
        cfg.apply_text(&text)
            .map_err(|e| Failure::msg(exit::OTHER, format!("config {}: {e}", path.display())))?;
    }
    let sub = matches.subcommand().map(|(_, m)| m);
    for (key, _) in PipelineConfig::KEYS {
        let value = sub
            .and_then(|m| m.get_one::<String>(key))
            .or_else(|| matches.get_one::<String>(key));
        if let Some(v) = value {
            cfg.set(key, v)
                .map_err(|e| Failure::msg(exit::OTHER, format!("--{}: {e}", flag(key))))?;
        }
    }
    cfg.validate().map_err(|e| Failure::msg(exit::OTHER, e))?;
    Ok(cfg)
}
