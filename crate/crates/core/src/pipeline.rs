//! End-to-end orchestration: dedup, split, extract, train, eval and analyze
//! stages driven by a TOML config, with a reproducibility manifest.
//!
//! Every stage is deterministic given the config and inputs: splits and
//! weight initialization derive from the config seed, serialized maps are
//! ordered, and the manifest records input hashes instead of timestamps, so
//! two identical runs produce byte-identical outputs.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::analysis::{chi_square, contingency_table, heatmap_rows, heatmap_table};
use crate::classifier::{
    build_mlp, load_model, save_model, train, ClassWeightMode, FeatureSpec, MlpModel, TrainConfig,
};
use crate::dataset::{deduplicate, load_dataset, random_split, save_dataset, temporal_split};
use crate::dataset::{Dataset, DatasetSplit, Label};
use crate::features::{
    dual_emotion_features, emocred_features, emoratio, ClassifierAdapter, ExtractConfig,
    SentimentScorer,
};
use crate::metrics::{metrics, Metrics, Regime};
use crate::resources::{load_resources, Language, ResourceBundle};
use crate::textproc::{strip_emoticons, tokenize};

pub const RESOURCE_FILES: [&str; 8] = [
    "emotions.txt",
    "lexicon.tsv",
    "intensity.tsv",
    "sentiment.tsv",
    "negation.txt",
    "degree.tsv",
    "emoticons.tsv",
    "pronouns.tsv",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathsConfig {
    pub dataset: PathBuf,
    pub resources: PathBuf,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptionsConfig {
    pub language: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_comments_limit")]
    pub comments_limit: usize,
    /// "lexicon_vote" or "precomputed"
    #[serde(default = "default_adapter")]
    pub adapter: String,
    /// Category coordinate names for the precomputed adapter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category_names: Option<Vec<String>>,
    /// "lexicon" or "fourway"; defaults by language (en fourway, zh lexicon).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StagesConfig {
    pub run: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DedupConfig {
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_dedup_label")]
    pub label: String,
}

impl Default for DedupConfig {
    fn default() -> Self {
        DedupConfig {
            threshold: default_threshold(),
            label: default_dedup_label(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitConfig {
    #[serde(default = "default_split_mode")]
    pub mode: String,
    #[serde(default = "default_ratios")]
    pub ratios: String,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            mode: default_split_mode(),
            ratios: default_ratios(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainStageConfig {
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_class_weights")]
    pub class_weights: String,
    #[serde(default = "default_patience")]
    pub patience: usize,
    #[serde(default = "default_features")]
    pub features: String,
    #[serde(default = "default_hidden_dims")]
    pub hidden_dims: Vec<usize>,
}

impl Default for TrainStageConfig {
    fn default() -> Self {
        TrainStageConfig {
            epochs: default_epochs(),
            learning_rate: default_lr(),
            batch_size: default_batch_size(),
            class_weights: default_class_weights(),
            patience: default_patience(),
            features: default_features(),
            hidden_dims: default_hidden_dims(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub whitelist: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub paths: PathsConfig,
    pub options: OptionsConfig,
    pub stages: StagesConfig,
    #[serde(default)]
    pub dedup: DedupConfig,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub train: TrainStageConfig,
    #[serde(default)]
    pub analyze: AnalyzeConfig,
}

fn default_seed() -> u64 {
    42
}
fn default_window() -> usize {
    2
}
fn default_comments_limit() -> usize {
    100
}
fn default_adapter() -> String {
    "lexicon_vote".to_string()
}
fn default_threshold() -> f64 {
    0.8
}
fn default_dedup_label() -> String {
    "fake".to_string()
}
fn default_split_mode() -> String {
    "random".to_string()
}
fn default_ratios() -> String {
    "3:1:1".to_string()
}
fn default_epochs() -> usize {
    100
}
fn default_lr() -> f64 {
    0.05
}
fn default_batch_size() -> usize {
    32
}
fn default_class_weights() -> String {
    "inverse".to_string()
}
fn default_patience() -> usize {
    10
}
fn default_features() -> String {
    "dual".to_string()
}
fn default_hidden_dims() -> Vec<usize> {
    vec![256, 128, 64, 32]
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<PipelineConfig, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| {
            PipelineError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn language(&self) -> Result<Language, PipelineError> {
        Language::parse(&self.options.language)
            .ok_or_else(|| PipelineError::Config(format!("unknown language '{}'", self.options.language)))
    }
}

/// One extracted piece in the features JSONL file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FeatureRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    pub dual: Vec<f64>,
    pub segments: FeatureSegments,
    pub baselines: BaselineFeatures,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_embedding: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FeatureSegments {
    pub publisher: Vec<f64>,
    pub social_mean: Vec<f64>,
    pub social_max: Vec<f64>,
    pub gap_mean: Vec<f64>,
    pub gap_max: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BaselineFeatures {
    pub emoratio: f64,
    pub emocred: Vec<f64>,
}

/// Feature subset used for training, selecting segments of the stored
/// dual vector or one of the baseline feature sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSelection {
    Dual,
    Publisher,
    Social,
    Gap,
    Emoratio,
    Emocred,
}

impl FeatureSelection {
    pub fn parse(s: &str) -> Option<FeatureSelection> {
        match s {
            "dual" => Some(FeatureSelection::Dual),
            "publisher" => Some(FeatureSelection::Publisher),
            "social" => Some(FeatureSelection::Social),
            "gap" => Some(FeatureSelection::Gap),
            "emoratio" => Some(FeatureSelection::Emoratio),
            "emocred" => Some(FeatureSelection::Emocred),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureSelection::Dual => "dual",
            FeatureSelection::Publisher => "publisher",
            FeatureSelection::Social => "social",
            FeatureSelection::Gap => "gap",
            FeatureSelection::Emoratio => "emoratio",
            FeatureSelection::Emocred => "emocred",
        }
    }

    pub fn select(&self, record: &FeatureRecord) -> Vec<f64> {
        match self {
            FeatureSelection::Dual => record.dual.clone(),
            FeatureSelection::Publisher => record.segments.publisher.clone(),
            FeatureSelection::Social => {
                let mut v = record.segments.social_mean.clone();
                v.extend_from_slice(&record.segments.social_max);
                v
            }
            FeatureSelection::Gap => {
                let mut v = record.segments.gap_mean.clone();
                v.extend_from_slice(&record.segments.gap_max);
                v
            }
            FeatureSelection::Emoratio => vec![record.baselines.emoratio],
            FeatureSelection::Emocred => record.baselines.emocred.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub seed: u64,
    pub language: String,
    pub stages: Vec<String>,
    /// Input file path -> sha256 hex digest.
    pub input_hashes: BTreeMap<String, String>,
    /// Stage name -> files it wrote (relative to out_dir).
    pub outputs: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("stage '{stage}' failed: {message}")]
    Stage { stage: String, message: String },
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn stage_err(stage: &str, message: impl ToString) -> PipelineError {
    PipelineError::Stage {
        stage: stage.to_string(),
        message: message.to_string(),
    }
}

pub fn label_index(label: Label) -> usize {
    match label {
        Label::Fake => 0,
        Label::Real => 1,
        Label::Unverified => 2,
    }
}

pub fn index_label(index: usize) -> Label {
    match index {
        0 => Label::Fake,
        1 => Label::Real,
        _ => Label::Unverified,
    }
}

/// Extract one feature record per piece.
pub fn extract_features(
    dataset: &Dataset,
    bundle: &ResourceBundle,
    adapter: &ClassifierAdapter,
    config: &ExtractConfig,
) -> Result<Vec<FeatureRecord>, crate::features::FeatureError> {
    let mut records = Vec::with_capacity(dataset.len());
    for piece in &dataset.pieces {
        let dual = dual_emotion_features(piece, bundle, adapter, config)?;
        let cleaned = strip_emoticons(&piece.content, bundle);
        let tokens = tokenize(&cleaned, bundle.language, bundle);
        let d = dual.publisher.len();
        records.push(FeatureRecord {
            id: piece.id.clone(),
            label: piece.label,
            dual: dual.flat(),
            segments: FeatureSegments {
                publisher: dual.publisher.values.clone(),
                social_mean: dual.social.mean_pool.clone(),
                social_max: dual.social.max_pool.clone(),
                gap_mean: dual.gap[..d].to_vec(),
                gap_max: dual.gap[d..].to_vec(),
            },
            baselines: BaselineFeatures {
                emoratio: emoratio(&tokens, bundle),
                emocred: emocred_features(&tokens, bundle),
            },
            detector_embedding: piece.detector_embedding.clone(),
        });
    }
    Ok(records)
}

pub fn write_feature_records(records: &[FeatureRecord], path: &Path) -> Result<(), PipelineError> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_feature_records(path: &Path) -> Result<Vec<FeatureRecord>, PipelineError> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| {
            PipelineError::Config(format!("{}:{}: {e}", path.display(), i + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Build the classifier adapter named in the options, inferring the
/// precomputed dimension from the dataset when no names are configured.
pub fn build_adapter(
    options: &OptionsConfig,
    bundle: &ResourceBundle,
    dataset: &Dataset,
) -> Result<ClassifierAdapter, PipelineError> {
    match options.adapter.as_str() {
        "lexicon_vote" => Ok(ClassifierAdapter::lexicon_vote(bundle)),
        "precomputed" => {
            if let Some(names) = &options.category_names {
                return Ok(ClassifierAdapter::precomputed(names.clone()));
            }
            let d_f = dataset
                .pieces
                .iter()
                .find_map(|p| p.publisher_emotion_probs.as_ref().map(|v| v.len()))
                .ok_or_else(|| {
                    PipelineError::Config(
                        "precomputed adapter needs category_names or pieces with probabilities".into(),
                    )
                })?;
            Ok(ClassifierAdapter::precomputed_dim(d_f))
        }
        other => Err(PipelineError::Config(format!("unknown adapter '{other}'"))),
    }
}

pub fn build_extract_config(
    options: &OptionsConfig,
    language: Language,
) -> Result<ExtractConfig, PipelineError> {
    let mut config = ExtractConfig::for_language(language);
    config.window = options.window;
    config.comments_limit = options.comments_limit;
    if let Some(s) = &options.sentiment {
        config.sentiment = SentimentScorer::parse(s)
            .ok_or_else(|| PipelineError::Config(format!("unknown sentiment scorer '{s}'")))?;
    }
    Ok(config)
}

pub fn parse_ratios(s: &str) -> Result<(u64, u64, u64), PipelineError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(PipelineError::Config(format!("ratios must be a:b:c, got '{s}'")));
    }
    let parse = |p: &str| {
        p.trim()
            .parse::<u64>()
            .map_err(|_| PipelineError::Config(format!("bad ratio component '{p}'")))
    };
    Ok((parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
}

fn sha256_file(path: &Path) -> Result<String, PipelineError> {
    let bytes = fs::read(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Labeled (input, class) pairs for the given split ids. Detector embeddings
/// are concatenated when every labeled piece carries one of equal length;
/// otherwise they are ignored.
pub struct TrainingData {
    pub sets: [Vec<(Vec<f64>, usize)>; 3],
    pub feature_spec: FeatureSpec,
    pub classes: usize,
}

pub fn assemble_training_data(
    records: &[FeatureRecord],
    split: &DatasetSplit,
    selection: FeatureSelection,
) -> Result<TrainingData, PipelineError> {
    let by_id: BTreeMap<&str, &FeatureRecord> =
        records.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut labeled: Vec<(&FeatureRecord, usize)> = Vec::new();
    let id_sets = [&split.train, &split.validation, &split.test];
    for ids in id_sets {
        for id in ids.iter() {
            let record = by_id
                .get(id.as_str())
                .ok_or_else(|| PipelineError::Config(format!("split id '{id}' missing from features")))?;
            if let Some(label) = record.label {
                labeled.push((record, label_index(label)));
            }
        }
    }
    if labeled.is_empty() {
        return Err(PipelineError::Config("no labeled pieces in split".into()));
    }

    let feature_len = selection.select(labeled[0].0).len();
    let detector_len = labeled
        .iter()
        .map(|(r, _)| r.detector_embedding.as_ref().map(|v| v.len()))
        .reduce(|a, b| if a == b { a } else { None })
        .flatten();
    let feature_spec = FeatureSpec {
        feature_len,
        detector_len,
    };

    let classes = if labeled.iter().any(|(_, l)| *l == 2) { 3 } else { 2 };

    let mut sets: [Vec<(Vec<f64>, usize)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (k, ids) in id_sets.iter().enumerate() {
        for id in ids.iter() {
            let record = by_id[id.as_str()];
            let Some(label) = record.label else { continue };
            let features = selection.select(record);
            if features.len() != feature_len {
                return Err(PipelineError::Config(format!(
                    "record '{id}' has {} features, expected {feature_len}",
                    features.len()
                )));
            }
            let detector = record.detector_embedding.as_deref();
            let input = feature_spec
                .assemble(&features, detector.filter(|_| detector_len.is_some()))
                .map_err(|e| PipelineError::Config(format!("record '{id}': {e}")))?;
            sets[k].push((input, label_index(label)));
        }
    }
    Ok(TrainingData {
        sets,
        feature_spec,
        classes,
    })
}

/// Evaluate a model on the test portion of a split.
pub fn evaluate_split(
    model: &MlpModel,
    records: &[FeatureRecord],
    split: &DatasetSplit,
    selection: FeatureSelection,
) -> Result<Metrics, PipelineError> {
    let by_id: BTreeMap<&str, &FeatureRecord> =
        records.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut predictions = Vec::new();
    let mut gold = Vec::new();
    for id in &split.test {
        let record = by_id
            .get(id.as_str())
            .ok_or_else(|| PipelineError::Config(format!("split id '{id}' missing from features")))?;
        let Some(label) = record.label else { continue };
        let features = selection.select(record);
        let detector = record
            .detector_embedding
            .as_deref()
            .filter(|_| model.feature_spec.detector_len.is_some());
        let probs = model
            .predict(&features, detector)
            .map_err(|e| PipelineError::Config(format!("record '{id}': {e}")))?;
        let (best, confidence) = probs
            .iter()
            .enumerate()
            .fold((0, 0.0), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        predictions.push((index_label(best), confidence));
        gold.push(label);
    }
    let regime = if model.classes() == 3 {
        Regime::ThreeClass
    } else {
        Regime::TwoClass
    };
    metrics(&predictions, &gold, regime).map_err(|e| PipelineError::Config(e.to_string()))
}

struct PipelineState {
    dataset: Dataset,
    bundle: ResourceBundle,
    adapter: ClassifierAdapter,
    extract_config: ExtractConfig,
    split: Option<DatasetSplit>,
    records: Option<Vec<FeatureRecord>>,
    model: Option<MlpModel>,
}

const STAGE_ORDER: [&str; 6] = ["dedup", "split", "extract", "train", "eval", "analyze"];

/// Run the declared stages in canonical order and write a manifest.
///
/// Paths are validated before any stage runs. A failing stage removes its
/// partial outputs and aborts with the stage named.
pub fn run_pipeline(config: &PipelineConfig) -> Result<Manifest, PipelineError> {
    let language = config.language()?;
    if !config.paths.dataset.is_file() {
        return Err(PipelineError::Config(format!(
            "dataset not found: {}",
            config.paths.dataset.display()
        )));
    }
    if !config.paths.resources.is_dir() {
        return Err(PipelineError::Config(format!(
            "resources directory not found: {}",
            config.paths.resources.display()
        )));
    }
    for stage in &config.stages.run {
        if !STAGE_ORDER.contains(&stage.as_str()) {
            return Err(PipelineError::Config(format!("unknown stage '{stage}'")));
        }
    }
    let out_dir = &config.paths.out_dir;
    fs::create_dir_all(out_dir).map_err(|source| PipelineError::Io {
        path: out_dir.clone(),
        source,
    })?;

    let mut input_hashes = BTreeMap::new();
    input_hashes.insert(
        config.paths.dataset.display().to_string(),
        sha256_file(&config.paths.dataset)?,
    );
    for name in RESOURCE_FILES {
        let path = config.paths.resources.join(name);
        input_hashes.insert(path.display().to_string(), sha256_file(&path)?);
    }

    let bundle = load_resources(&config.paths.resources, language)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let dataset =
        load_dataset(&config.paths.dataset).map_err(|e| PipelineError::Config(e.to_string()))?;
    let adapter = build_adapter(&config.options, &bundle, &dataset)?;
    let extract_config = build_extract_config(&config.options, language)?;

    let mut state = PipelineState {
        dataset,
        bundle,
        adapter,
        extract_config,
        split: None,
        records: None,
        model: None,
    };

    let stages: Vec<&str> = STAGE_ORDER
        .iter()
        .copied()
        .filter(|s| config.stages.run.iter().any(|r| r == s))
        .collect();

    let mut manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.options.seed,
        language: language.as_str().to_string(),
        stages: stages.iter().map(|s| s.to_string()).collect(),
        input_hashes,
        outputs: BTreeMap::new(),
    };

    for stage in stages {
        let files = match stage {
            "dedup" => run_dedup(config, &mut state),
            "split" => run_split(config, &mut state),
            "extract" => run_extract(config, &mut state),
            "train" => run_train(config, &mut state),
            "eval" => run_eval(config, &mut state),
            "analyze" => run_analyze(config, &mut state),
            _ => unreachable!(),
        };
        match files {
            Ok(files) => {
                manifest.outputs.insert(stage.to_string(), files);
            }
            Err(e) => {
                for name in stage_outputs(stage) {
                    let _ = fs::remove_file(out_dir.join(name));
                }
                return Err(e);
            }
        }
    }

    let manifest_path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, json).map_err(|source| PipelineError::Io {
        path: manifest_path,
        source,
    })?;
    Ok(manifest)
}

fn stage_outputs(stage: &str) -> Vec<&'static str> {
    match stage {
        "dedup" => vec!["deduped.jsonl", "dedup_report.json"],
        "split" => vec!["split.json"],
        "extract" => vec!["features.jsonl"],
        "train" => vec!["model.json", "history.json"],
        "eval" => vec!["metrics.json"],
        "analyze" => vec!["chisq.json", "heatmap_fake.csv", "heatmap_real.csv"],
        _ => vec![],
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path, stage: &str) -> Result<(), PipelineError> {
    let json = serde_json::to_string_pretty(value).expect("serializes");
    fs::write(path, json).map_err(|e| stage_err(stage, e))
}

fn run_dedup(config: &PipelineConfig, state: &mut PipelineState) -> Result<Vec<String>, PipelineError> {
    let label = Label::parse(&config.dedup.label)
        .ok_or_else(|| stage_err("dedup", format!("unknown label '{}'", config.dedup.label)))?;
    let (dataset, report) = deduplicate(&state.dataset, label, config.dedup.threshold)
        .map_err(|e| stage_err("dedup", e))?;
    state.dataset = dataset;
    let out = &config.paths.out_dir;
    save_dataset(&state.dataset, &out.join("deduped.jsonl")).map_err(|e| stage_err("dedup", e))?;
    write_json(&report, &out.join("dedup_report.json"), "dedup")?;
    Ok(vec!["deduped.jsonl".into(), "dedup_report.json".into()])
}

fn run_split(config: &PipelineConfig, state: &mut PipelineState) -> Result<Vec<String>, PipelineError> {
    let split = match config.split.mode.as_str() {
        "random" => {
            let ratios = parse_ratios(&config.split.ratios)?;
            random_split(&state.dataset, ratios, config.options.seed)
                .map_err(|e| stage_err("split", e))?
        }
        "temporal" => temporal_split(&state.dataset).map_err(|e| stage_err("split", e))?,
        other => return Err(stage_err("split", format!("unknown split mode '{other}'"))),
    };
    write_json(&split, &config.paths.out_dir.join("split.json"), "split")?;
    state.split = Some(split);
    Ok(vec!["split.json".into()])
}

fn run_extract(config: &PipelineConfig, state: &mut PipelineState) -> Result<Vec<String>, PipelineError> {
    let records = extract_features(&state.dataset, &state.bundle, &state.adapter, &state.extract_config)
        .map_err(|e| stage_err("extract", e))?;
    write_feature_records(&records, &config.paths.out_dir.join("features.jsonl"))
        .map_err(|e| stage_err("extract", e))?;
    state.records = Some(records);
    Ok(vec!["features.jsonl".into()])
}

fn require_split(config: &PipelineConfig, state: &mut PipelineState, stage: &str) -> Result<(), PipelineError> {
    if state.split.is_none() {
        let path = config.paths.out_dir.join("split.json");
        let text = fs::read_to_string(&path)
            .map_err(|_| stage_err(stage, "no split available; run the split stage first"))?;
        state.split =
            Some(serde_json::from_str(&text).map_err(|e| stage_err(stage, e))?);
    }
    Ok(())
}

fn require_records(config: &PipelineConfig, state: &mut PipelineState, stage: &str) -> Result<(), PipelineError> {
    if state.records.is_none() {
        let path = config.paths.out_dir.join("features.jsonl");
        if !path.is_file() {
            return Err(stage_err(stage, "no features available; run the extract stage first"));
        }
        state.records = Some(read_feature_records(&path)?);
    }
    Ok(())
}

fn run_train(config: &PipelineConfig, state: &mut PipelineState) -> Result<Vec<String>, PipelineError> {
    require_split(config, state, "train")?;
    require_records(config, state, "train")?;
    let selection = FeatureSelection::parse(&config.train.features)
        .ok_or_else(|| stage_err("train", format!("unknown feature selection '{}'", config.train.features)))?;
    let data = assemble_training_data(
        state.records.as_ref().unwrap(),
        state.split.as_ref().unwrap(),
        selection,
    )?;
    let class_weights = ClassWeightMode::parse(&config.train.class_weights)
        .ok_or_else(|| stage_err("train", format!("unknown class weights '{}'", config.train.class_weights)))?;
    let model = build_mlp(
        data.feature_spec,
        &config.train.hidden_dims,
        data.classes,
        config.options.seed,
    )
    .map_err(|e| stage_err("train", e))?;
    let train_config = TrainConfig {
        epochs: config.train.epochs,
        learning_rate: config.train.learning_rate,
        batch_size: config.train.batch_size,
        class_weights,
        patience: config.train.patience,
        seed: config.options.seed,
    };
    let [train_set, val_set, _] = &data.sets;
    let (model, history) =
        train(model, train_set, val_set, &train_config).map_err(|e| stage_err("train", e))?;
    let out = &config.paths.out_dir;
    save_model(&model, &out.join("model.json")).map_err(|e| stage_err("train", e))?;
    write_json(&history, &out.join("history.json"), "train")?;
    state.model = Some(model);
    Ok(vec!["model.json".into(), "history.json".into()])
}

fn run_eval(config: &PipelineConfig, state: &mut PipelineState) -> Result<Vec<String>, PipelineError> {
    require_split(config, state, "eval")?;
    require_records(config, state, "eval")?;
    if state.model.is_none() {
        let path = config.paths.out_dir.join("model.json");
        state.model = Some(load_model(&path).map_err(|e| stage_err("eval", e))?);
    }
    let selection = FeatureSelection::parse(&config.train.features)
        .ok_or_else(|| stage_err("eval", format!("unknown feature selection '{}'", config.train.features)))?;
    let result = evaluate_split(
        state.model.as_ref().unwrap(),
        state.records.as_ref().unwrap(),
        state.split.as_ref().unwrap(),
        selection,
    )?;
    write_json(&result, &config.paths.out_dir.join("metrics.json"), "eval")?;
    Ok(vec!["metrics.json".into()])
}

/// CSV with a header row of social emotions, one row per publisher emotion,
/// percentage cells with one decimal.
pub fn format_heatmap_csv(rows: &crate::analysis::HeatmapData) -> String {
    let mut out = String::from("publisher");
    for col in &rows.col_labels {
        out.push(',');
        out.push_str(col);
    }
    out.push('\n');
    for (label, row) in rows.row_labels.iter().zip(&rows.rows) {
        out.push_str(label);
        for cell in row {
            out.push_str(&format!(",{cell:.1}"));
        }
        out.push('\n');
    }
    out
}

fn run_analyze(config: &PipelineConfig, state: &mut PipelineState) -> Result<Vec<String>, PipelineError> {
    let whitelist = config
        .analyze
        .whitelist
        .as_ref()
        .map(|w| w.iter().cloned().collect::<std::collections::HashSet<_>>());
    let table = contingency_table(&state.dataset, &state.adapter, &state.bundle, whitelist.as_ref())
        .map_err(|e| stage_err("analyze", e))?;
    let result = chi_square(&table).map_err(|e| stage_err("analyze", e))?;
    let out = &config.paths.out_dir;
    write_json(&result, &out.join("chisq.json"), "analyze")?;

    let mut files = vec!["chisq.json".to_string()];
    for label in [Label::Fake, Label::Real] {
        let table = heatmap_table(&state.dataset, &state.adapter, &state.bundle, label, whitelist.as_ref())
            .map_err(|e| stage_err("analyze", e))?;
        let heatmap = heatmap_rows(&table);
        let name = format!("heatmap_{label}.csv");
        fs::write(out.join(&name), format_heatmap_csv(&heatmap)).map_err(|e| stage_err("analyze", e))?;
        files.push(name);
    }
    Ok(files)
}
