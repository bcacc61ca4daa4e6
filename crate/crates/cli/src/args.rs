use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slanglex::slangclass::ScoreType;

#[derive(Debug, Parser)]
#[command(name = "slanglex", version, about = "Analyze slang lexicons and emit CSV reports")]
pub struct Cli {
    /// Flat `key = value` file; keys are long flag names. Flags win over it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a lexicon, apply the vote filter and persist it.
    Ingest(IngestArgs),
    /// Phoneme odds ratios and first/final manner comparison.
    Phonology(PhonologyArgs),
    /// Train MDL segmenters and report affix distributions.
    Morphology(MorphologyArgs),
    /// Slang-class classifier.
    #[command(subcommand)]
    Classes(ClassesCommand),
    /// Train skip-gram embeddings on usage examples.
    Embed(EmbedArgs),
    /// Nearest-neighbour subject classification.
    Subjects(SubjectsArgs),
    /// Embedding bias metrics.
    #[command(subcommand)]
    Bias(BiasCommand),
    /// Run every analysis end to end.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IngestFormat {
    SlangJsonl,
    StandardTsv,
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = IngestFormat::SlangJsonl)]
    pub format: IngestFormat,
    #[arg(long, default_value_t = 100)]
    pub min_votes: u64,
    /// Slang: `.jsonl` writes JSON lines, anything else the binary container.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PhonologyArgs {
    /// Slang corpus, binary container or JSON lines.
    #[arg(long)]
    pub slang: PathBuf,
    #[arg(long)]
    pub standard: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    pub smoothing: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// CMU-format pronouncing table replacing the bundled subset.
    #[arg(long)]
    pub pronouncing_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SegmenterArgs {
    #[arg(long, default_value_t = 0.0)]
    pub split_penalty: f64,
    #[arg(long, default_value_t = 10)]
    pub max_iters: usize,
    /// Treat hyphens like any other character instead of forcing a split.
    #[arg(long)]
    pub keep_hyphens: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MorphologyArgs {
    #[arg(long)]
    pub slang: PathBuf,
    /// Optional standard lexicon for the comparison side.
    #[arg(long)]
    pub standard: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 25)]
    pub top_k: usize,
    #[command(flatten)]
    pub segmenter: SegmenterArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Features {
    Char,
    Morph,
}

#[derive(Debug, Clone, Args)]
pub struct LogRegArgs {
    #[arg(long, default_value_t = 200)]
    pub cap: usize,
    #[arg(long, default_value_t = 1.0)]
    pub l2: f64,
    #[arg(long, default_value_t = 500)]
    pub max_epochs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RejectArgs {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub delta: f64,
    /// maxprob or negentropy
    #[arg(long, default_value = "maxprob")]
    pub score: ScoreType,
}

#[derive(Debug, Subcommand)]
pub enum ClassesCommand {
    /// Fit a classifier on gold records and save it.
    Train(ClassesTrainArgs),
    /// Label words, rejecting low-confidence ones.
    Predict(ClassesPredictArgs),
    /// Held-out comparison, open-set confusion, cross-class validation and
    /// pattern statistics.
    Eval(ClassesEvalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ClassesTrainArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, value_enum, default_value_t = Features::Char)]
    pub features: Features,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub logreg: LogRegArgs,
    #[command(flatten)]
    pub segmenter: SegmenterArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClassesPredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// One word per line.
    #[arg(long, conflicts_with = "slang")]
    pub words: Option<PathBuf>,
    /// Predict every headword of a slang corpus instead.
    #[arg(long)]
    pub slang: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub reject: RejectArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClassesEvalArgs {
    #[arg(long, required_unless_present = "synthetic")]
    pub gold: Option<PathBuf>,
    /// Generate this many gold words per class instead of reading a file.
    #[arg(long, conflicts_with = "gold")]
    pub synthetic: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub test_fraction: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub logreg: LogRegArgs,
    #[command(flatten)]
    pub reject: RejectArgs,
    #[command(flatten)]
    pub segmenter: SegmenterArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub slang: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub dimension: usize,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    pub lr: f64,
    #[arg(long, default_value_t = 5)]
    pub min_count: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub subsample: f64,
    /// Comma-separated tokens whose nearest neighbours are reported.
    #[arg(long, value_delimiter = ',')]
    pub neighbours: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub neighbours_k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Cosine,
    Euclidean,
}

#[derive(Debug, Clone, Args)]
pub struct SubjectsArgs {
    /// Corpus whose subject-labeled headwords are the references.
    #[arg(long)]
    pub slang: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    /// `word<TAB>subject` test set; these words are never references.
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Metric::Cosine)]
    pub metric: Metric,
}

#[derive(Debug, Clone, Args)]
pub struct BiasCommon {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub lexicons: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum BiasCommand {
    /// Gender direction, DirectBias and occupation projections.
    Gender(BiasGenderArgs),
    /// Sexual-prejudice scores of female and male names.
    Sexprej(BiasSexprejArgs),
    /// Standardized religion × prejudice similarity matrix.
    Religion(BiasReligionArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BiasGenderArgs {
    #[command(flatten)]
    pub common: BiasCommon,
    /// Strictness exponent of DirectBias.
    #[arg(long, default_value_t = 1.0)]
    pub strictness: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BiasSexprejArgs {
    #[command(flatten)]
    pub common: BiasCommon,
    #[arg(long, default_value_t = 10_000)]
    pub permutations: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BiasReligionArgs {
    #[command(flatten)]
    pub common: BiasCommon,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Use the bundled mini-corpus; it is copied to `<out>/inputs`.
    #[arg(long, conflicts_with_all = ["slang", "standard", "gold", "subjects_test", "lexicons"])]
    pub fixtures: bool,
    #[arg(long, required_unless_present = "fixtures")]
    pub slang: Option<PathBuf>,
    #[arg(long, required_unless_present = "fixtures")]
    pub standard: Option<PathBuf>,
    #[arg(long, required_unless_present = "fixtures")]
    pub gold: Option<PathBuf>,
    #[arg(long, required_unless_present = "fixtures")]
    pub subjects_test: Option<PathBuf>,
    #[arg(long, required_unless_present = "fixtures")]
    pub lexicons: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub min_votes: u64,
    #[arg(long, default_value_t = 100)]
    pub synthetic: usize,
    #[arg(long, default_value_t = 50)]
    pub dimension: usize,
    #[arg(long, default_value_t = 2)]
    pub min_count: u64,
    /// The fixture corpus is tiny, so it takes many passes to spread out.
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 10_000)]
    pub permutations: u64,
    #[command(flatten)]
    pub logreg: LogRegArgs,
    #[command(flatten)]
    pub reject: RejectArgs,
}
