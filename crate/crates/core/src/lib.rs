//! Dual emotion features for fake news detection.
//!
//! The library extracts a publisher emotion vector from a news text, pools
//! the emotions of its comment stream into a social emotion vector, and
//! models their agreement as an emotion gap; the three concatenate into the
//! dual feature vector consumed by a feedforward veracity classifier.
//! Supporting pieces cover resource loading, corpus handling (splits and
//! near-duplicate removal), the dual-emotion-category chi-square analysis,
//! evaluation metrics and a reproducible end-to-end pipeline.

pub mod analysis;
pub mod classifier;
pub mod dataset;
pub mod features;
pub mod metrics;
pub mod pipeline;
pub mod resources;
pub mod textproc;

pub use analysis::{
    chi_square, contingency_table, dual_emotion_category, heatmap_rows, heatmap_table,
    ChiSquareResult, ContingencyTable, DualEmotionCategory, HeatmapData,
};
pub use classifier::{
    build_mlp, gradient_check, load_model, save_model, train, ClassWeightMode, FeatureSpec,
    MlpModel, TrainConfig, DEFAULT_HIDDEN_DIMS,
};
pub use dataset::{
    deduplicate, load_dataset, random_split, save_dataset, temporal_split, ClusterReport, Comment,
    Dataset, DatasetSplit, Label, NewsPiece,
};
pub use features::{
    auxiliary_features, dual_emotion_features, emocred_features, emoratio, emotion_category,
    emotion_gap, external_sentiment, intensity_features, lexicon_features, publisher_emotion,
    sentiment_score, social_emotion, word_emotion_score, ClassifierAdapter, DualEmotionVector,
    EmotionVector, ExtractConfig, FeatureDims, SentimentScorer, SocialEmotionVector,
};
pub use metrics::{metrics, Metrics, Regime};
pub use pipeline::{
    extract_features, run_pipeline, FeatureRecord, FeatureSelection, Manifest, PipelineConfig,
};
pub use resources::{load_resources, validate_resources, Language, ResourceBundle};
pub use textproc::{scan_surface, strip_emoticons, tokenize, SurfaceStats, TokenSequence};
