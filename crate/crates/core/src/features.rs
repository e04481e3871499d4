//! Dual emotion feature extraction.
//!
//! The publisher emotion vector of a text concatenates five blocks in fixed
//! order: emotion category (`d_f`), lexicon scores (`d_e`), intensity scores
//! (`d_e`), sentiment (`d_s`) and auxiliary surface features (`d_a`), for a
//! total dimension `d = d_f + 2*d_e + d_s + d_a`. The social emotion of a
//! comment stream is the mean and max pooling of per-comment vectors over
//! the earliest `comments_limit` comments, and the emotion gap is the
//! elementwise difference between the publisher vector and each pool. The
//! flat dual vector is `publisher | social_mean | social_max | gap_mean |
//! gap_max` of length `5d`.
//!
//! Word-level lexicon scores weigh each dictionary hit by the product of
//! negation and degree values over a left context window and divide by the
//! token count, so "i am not very joyful today" scores -1/3 for the emotion
//! containing "joyful" when not = -1 and very = 2.

use thiserror::Error;

use crate::dataset::{Comment, NewsPiece};
use crate::resources::{Language, Polarity, ResourceBundle};
use crate::textproc::{scan_surface, strip_emoticons, tokenize, SurfaceStats, TokenSequence};

/// Number of auxiliary features: 5 emoticon classes, 3 punctuation marks,
/// 4 word families, 3 pronoun persons, plus uppercase frequency for English.
pub fn aux_dim(language: Language) -> usize {
    match language {
        Language::En => 16,
        Language::Zh => 15,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureDims {
    pub d_f: usize,
    pub d_e: usize,
    pub d_s: usize,
    pub d_a: usize,
}

impl FeatureDims {
    /// Full publisher dimension `d = d_f + 2*d_e + d_s + d_a`.
    pub fn d(&self) -> usize {
        self.d_f + 2 * self.d_e + self.d_s + self.d_a
    }

    pub fn for_extraction(
        bundle: &ResourceBundle,
        adapter: &ClassifierAdapter,
        config: &ExtractConfig,
    ) -> FeatureDims {
        FeatureDims {
            d_f: adapter.output_dim(),
            d_e: bundle.emotion_count(),
            d_s: config.sentiment.dim(),
            d_a: aux_dim(bundle.language),
        }
    }
}

/// Publisher emotion vector with its block layout.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionVector {
    pub values: Vec<f64>,
    pub dims: FeatureDims,
}

impl EmotionVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn category(&self) -> &[f64] {
        &self.values[..self.dims.d_f]
    }

    pub fn lexicon(&self) -> &[f64] {
        let s = self.dims.d_f;
        &self.values[s..s + self.dims.d_e]
    }

    pub fn intensity(&self) -> &[f64] {
        let s = self.dims.d_f + self.dims.d_e;
        &self.values[s..s + self.dims.d_e]
    }

    pub fn sentiment(&self) -> &[f64] {
        let s = self.dims.d_f + 2 * self.dims.d_e;
        &self.values[s..s + self.dims.d_s]
    }

    pub fn auxiliary(&self) -> &[f64] {
        let s = self.dims.d_f + 2 * self.dims.d_e + self.dims.d_s;
        &self.values[s..s + self.dims.d_a]
    }
}

/// Mean and max pooling of per-comment emotion vectors, each of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialEmotionVector {
    pub mean_pool: Vec<f64>,
    pub max_pool: Vec<f64>,
}

/// Publisher (`d`) | social (`2d`) | gap (`2d`), flat length `5d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualEmotionVector {
    pub publisher: EmotionVector,
    pub social: SocialEmotionVector,
    pub gap: Vec<f64>,
}

impl DualEmotionVector {
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(5 * self.publisher.len());
        out.extend_from_slice(&self.publisher.values);
        out.extend_from_slice(&self.social.mean_pool);
        out.extend_from_slice(&self.social.max_pool);
        out.extend_from_slice(&self.gap);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdapterMode {
    Precomputed,
    LexiconVote,
}

/// Source of emotion category probabilities.
///
/// Precomputed mode passes through stored classifier outputs (normalized to
/// sum 1); lexicon-vote mode derives `d_e + 1` probabilities from dictionary
/// hit counts with a trailing "none" coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierAdapter {
    pub mode: AdapterMode,
    pub category_names: Vec<String>,
}

impl ClassifierAdapter {
    pub fn precomputed(category_names: Vec<String>) -> ClassifierAdapter {
        ClassifierAdapter {
            mode: AdapterMode::Precomputed,
            category_names,
        }
    }

    /// Precomputed adapter with placeholder category names `c0..c{d_f-1}`.
    pub fn precomputed_dim(d_f: usize) -> ClassifierAdapter {
        ClassifierAdapter {
            mode: AdapterMode::Precomputed,
            category_names: (0..d_f).map(|i| format!("c{i}")).collect(),
        }
    }

    pub fn lexicon_vote(bundle: &ResourceBundle) -> ClassifierAdapter {
        let mut names = bundle.emotions.clone();
        names.push("none".to_string());
        ClassifierAdapter {
            mode: AdapterMode::LexiconVote,
            category_names: names,
        }
    }

    /// Output dimension `d_f`.
    pub fn output_dim(&self) -> usize {
        self.category_names.len()
    }

    /// Coordinate used for "no emotion": the one named "none" when present,
    /// else the last coordinate.
    pub fn none_index(&self) -> usize {
        self.category_names
            .iter()
            .position(|n| n == "none")
            .unwrap_or(self.category_names.len().saturating_sub(1))
    }
}

/// Sentiment block scorer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentimentScorer {
    /// One dimension: sum of matched sentiment word scores over token count.
    LexiconSum,
    /// Four dimensions: positive, negative and neutral token proportions
    /// plus the length-normalized score sum.
    FourWay,
}

impl SentimentScorer {
    pub fn dim(&self) -> usize {
        match self {
            SentimentScorer::LexiconSum => 1,
            SentimentScorer::FourWay => 4,
        }
    }

    pub fn parse(s: &str) -> Option<SentimentScorer> {
        match s {
            "lexicon" => Some(SentimentScorer::LexiconSum),
            "fourway" => Some(SentimentScorer::FourWay),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SentimentScorer::LexiconSum => "lexicon",
            SentimentScorer::FourWay => "fourway",
        }
    }
}

/// Extraction parameters. The left-context window defaults to 2 and the
/// comment limit to the earliest 100 comments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractConfig {
    pub window: usize,
    pub comments_limit: usize,
    pub sentiment: SentimentScorer,
}

impl ExtractConfig {
    /// Language defaults: English uses the four-way sentiment block
    /// (`d_s = 4`), Chinese the single-score block (`d_s = 1`).
    pub fn for_language(language: Language) -> ExtractConfig {
        ExtractConfig {
            window: 2,
            comments_limit: 100,
            sentiment: match language {
                Language::En => SentimentScorer::FourWay,
                Language::Zh => SentimentScorer::LexiconSum,
            },
        }
    }
}

impl Default for ExtractConfig {
    fn default() -> ExtractConfig {
        ExtractConfig {
            window: 2,
            comments_limit: 100,
            sentiment: SentimentScorer::LexiconSum,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("token index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected vector of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("missing precomputed probability vector")]
    MissingProbabilities,
    #[error("probability vector has negative entry at {index}")]
    NegativeProbability { index: usize },
    #[error("probability vector sums to zero")]
    ZeroProbabilitySum,
    #[error("publisher dimension {publisher} does not match social dimension {social}")]
    GapDimensionMismatch { publisher: usize, social: usize },
    #[error("piece '{id}': {probs} comment probability vectors for {comments} comments")]
    MisalignedCommentProbs {
        id: String,
        comments: usize,
        probs: usize,
    },
}

/// Word-level lexicon score for token `index` and emotion `emotion` (an index
/// into the bundle's emotion list):
/// indicator(word in lexicon) * neg(window) * deg(window) / L,
/// where the negation and degree products run over the `window` tokens
/// immediately to the left (truncated at text start), with value 1 for words
/// absent from either table.
pub fn word_emotion_score(
    tokens: &TokenSequence,
    index: usize,
    emotion: usize,
    bundle: &ResourceBundle,
    window: usize,
) -> Result<f64, FeatureError> {
    let len = tokens.len();
    if index >= len {
        return Err(FeatureError::IndexOutOfRange { index, len });
    }
    if !bundle.in_lexicon(&tokens.tokens[index], emotion) {
        return Ok(0.0);
    }
    let mut neg = 1.0;
    let mut deg = 1.0;
    for j in index.saturating_sub(window)..index {
        neg *= bundle.negation_value(&tokens.tokens[j]);
        deg *= bundle.degree_value(&tokens.tokens[j]);
    }
    Ok(neg * deg / len as f64)
}

/// Text-level lexicon scores, one coordinate per bundle emotion.
pub fn lexicon_features(tokens: &TokenSequence, bundle: &ResourceBundle, window: usize) -> Vec<f64> {
    let d_e = bundle.emotion_count();
    let mut out = vec![0.0; d_e];
    for (e, slot) in out.iter_mut().enumerate() {
        for i in 0..tokens.len() {
            *slot += word_emotion_score(tokens, i, e, bundle, window).expect("index in range");
        }
    }
    out
}

/// Intensity-weighted text-level scores; out-of-dictionary words weigh 0.
pub fn intensity_features(tokens: &TokenSequence, bundle: &ResourceBundle, window: usize) -> Vec<f64> {
    let d_e = bundle.emotion_count();
    let mut out = vec![0.0; d_e];
    for (e, slot) in out.iter_mut().enumerate() {
        for i in 0..tokens.len() {
            let s = word_emotion_score(tokens, i, e, bundle, window).expect("index in range");
            *slot += bundle.intensity_of(&tokens.tokens[i], e) * s;
        }
    }
    out
}

/// Built-in sentiment block. Empty text gives the zero vector.
pub fn sentiment_score(tokens: &TokenSequence, bundle: &ResourceBundle, scorer: &SentimentScorer) -> Vec<f64> {
    let len = tokens.len();
    if len == 0 {
        return vec![0.0; scorer.dim()];
    }
    let l = len as f64;
    let mut sum = 0.0;
    let mut pos = 0usize;
    let mut neg = 0usize;
    for t in &tokens.tokens {
        if let Some(score) = bundle.sentiment_scores.get(t) {
            sum += score;
        }
        match bundle.sentiment_words.get(t) {
            Some(Polarity::Positive) => pos += 1,
            Some(Polarity::Negative) => neg += 1,
            None => {}
        }
    }
    match scorer {
        SentimentScorer::LexiconSum => vec![sum / l],
        SentimentScorer::FourWay => vec![
            pos as f64 / l,
            neg as f64 / l,
            (len - pos - neg) as f64 / l,
            sum / l,
        ],
    }
}

/// Pass an externally computed sentiment vector through after a dimension check.
pub fn external_sentiment(values: &[f64], d_s: usize) -> Result<Vec<f64>, FeatureError> {
    if values.len() != d_s {
        return Err(FeatureError::DimensionMismatch {
            expected: d_s,
            got: values.len(),
        });
    }
    Ok(values.to_vec())
}

/// Auxiliary surface features in fixed order: 5 emoticon-class frequencies,
/// exclamation/question/ellipsis frequencies, positive/negative/degree/
/// negation word frequencies, first/second/third pronoun frequencies, and
/// (English only) the uppercase letter frequency. Symbol counts normalize by
/// the non-whitespace character count, word counts by the token count.
pub fn auxiliary_features(
    tokens: &TokenSequence,
    surface: &SurfaceStats,
    bundle: &ResourceBundle,
) -> Vec<f64> {
    let d_a = aux_dim(bundle.language);
    let mut out = Vec::with_capacity(d_a);

    let chars = surface.char_count as f64;
    let by_chars = |count: usize| if surface.char_count == 0 { 0.0 } else { count as f64 / chars };
    for count in surface.emoticon_counts {
        out.push(by_chars(count));
    }
    out.push(by_chars(surface.exclamation));
    out.push(by_chars(surface.question));
    out.push(by_chars(surface.ellipsis));

    let l = tokens.len() as f64;
    let by_tokens = |count: usize| if tokens.is_empty() { 0.0 } else { count as f64 / l };
    let mut pos = 0;
    let mut neg = 0;
    let mut degree = 0;
    let mut negation = 0;
    let mut pron = [0usize; 3];
    for t in &tokens.tokens {
        match bundle.sentiment_words.get(t) {
            Some(Polarity::Positive) => pos += 1,
            Some(Polarity::Negative) => neg += 1,
            None => {}
        }
        if bundle.degree_words.contains_key(t) {
            degree += 1;
        }
        if bundle.negation_words.contains_key(t) {
            negation += 1;
        }
        for (k, set) in bundle.pronouns.iter().enumerate() {
            if set.contains(t) {
                pron[k] += 1;
            }
        }
    }
    out.push(by_tokens(pos));
    out.push(by_tokens(neg));
    out.push(by_tokens(degree));
    out.push(by_tokens(negation));
    for count in pron {
        out.push(by_tokens(count));
    }
    if bundle.language == Language::En {
        out.push(by_chars(surface.uppercase_letters));
    }
    debug_assert_eq!(out.len(), d_a);
    out
}

/// Emotion category probabilities of dimension `d_f`.
///
/// Precomputed mode validates and normalizes the supplied vector (warning
/// when the raw sum strays more than 1e-6 from 1). Lexicon-vote mode counts
/// dictionary hits per emotion, normalizes them, and sets the trailing
/// "none" coordinate to 1 when nothing matched.
pub fn emotion_category(
    tokens: &TokenSequence,
    bundle: &ResourceBundle,
    adapter: &ClassifierAdapter,
    precomputed: Option<&[f64]>,
) -> Result<Vec<f64>, FeatureError> {
    match adapter.mode {
        AdapterMode::Precomputed => {
            let probs = precomputed.ok_or(FeatureError::MissingProbabilities)?;
            if probs.len() != adapter.output_dim() {
                return Err(FeatureError::DimensionMismatch {
                    expected: adapter.output_dim(),
                    got: probs.len(),
                });
            }
            if let Some(index) = probs.iter().position(|&p| p < 0.0) {
                return Err(FeatureError::NegativeProbability { index });
            }
            let sum: f64 = probs.iter().sum();
            if sum == 0.0 {
                return Err(FeatureError::ZeroProbabilitySum);
            }
            if sum == 1.0 {
                return Ok(probs.to_vec());
            }
            if (sum - 1.0).abs() > 1e-6 {
                log::warn!("probability vector sums to {sum}, normalizing");
            }
            Ok(probs.iter().map(|p| p / sum).collect())
        }
        AdapterMode::LexiconVote => {
            let d_e = bundle.emotion_count();
            let mut hits = vec![0.0; d_e + 1];
            let mut total = 0.0;
            for t in &tokens.tokens {
                for e in 0..d_e {
                    if bundle.in_lexicon(t, e) {
                        hits[e] += 1.0;
                        total += 1.0;
                    }
                }
            }
            if total == 0.0 {
                hits[d_e] = 1.0;
            } else {
                for h in hits.iter_mut().take(d_e) {
                    *h /= total;
                }
            }
            Ok(hits)
        }
    }
}

/// Publisher emotion vector of `text`: category | lexicon | intensity |
/// sentiment | auxiliary. Emoticons are counted first, then removed from the
/// text before tokenization so they never reach the dictionaries.
pub fn publisher_emotion(
    text: &str,
    precomputed: Option<&[f64]>,
    bundle: &ResourceBundle,
    adapter: &ClassifierAdapter,
    config: &ExtractConfig,
) -> Result<EmotionVector, FeatureError> {
    let surface = scan_surface(text, bundle);
    let cleaned = strip_emoticons(text, bundle);
    let tokens = tokenize(&cleaned, bundle.language, bundle);

    let dims = FeatureDims::for_extraction(bundle, adapter, config);
    let mut values = Vec::with_capacity(dims.d());
    values.extend(emotion_category(&tokens, bundle, adapter, precomputed)?);
    values.extend(lexicon_features(&tokens, bundle, config.window));
    values.extend(intensity_features(&tokens, bundle, config.window));
    values.extend(sentiment_score(&tokens, bundle, &config.sentiment));
    values.extend(auxiliary_features(&tokens, &surface, bundle));
    debug_assert_eq!(values.len(), dims.d());
    Ok(EmotionVector { values, dims })
}

/// Indices of the earliest `limit` comments, stable-sorted by timestamp so
/// ties keep input order.
fn select_earliest(comments: &[Comment], limit: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..comments.len()).collect();
    order.sort_by_key(|&i| comments[i].timestamp);
    order.truncate(limit);
    order
}

/// Left-to-right streaming mean (exact for identical inputs) and max fold.
pub(crate) fn pool_vectors<'a, I>(vectors: I, dim: usize) -> (Vec<f64>, Vec<f64>)
where
    I: Iterator<Item = &'a [f64]>,
{
    let mut mean = vec![0.0; dim];
    let mut max = vec![f64::NEG_INFINITY; dim];
    let mut n = 0.0;
    for v in vectors {
        n += 1.0;
        for (m, &x) in mean.iter_mut().zip(v) {
            *m += (x - *m) / n;
        }
        for (mx, &x) in max.iter_mut().zip(v) {
            if x > *mx {
                *mx = x;
            }
        }
    }
    if n == 0.0 {
        return (vec![0.0; dim], vec![0.0; dim]);
    }
    (mean, max)
}

/// Social emotion pools over the earliest `comments_limit` comments. An
/// empty comment list yields zero pools of the full dimension `d`.
pub fn social_emotion(
    comments: &[Comment],
    comment_probs: Option<&[Vec<f64>]>,
    bundle: &ResourceBundle,
    adapter: &ClassifierAdapter,
    config: &ExtractConfig,
) -> Result<SocialEmotionVector, FeatureError> {
    if let Some(probs) = comment_probs {
        if probs.len() != comments.len() {
            return Err(FeatureError::MisalignedCommentProbs {
                id: String::new(),
                comments: comments.len(),
                probs: probs.len(),
            });
        }
    }
    let dims = FeatureDims::for_extraction(bundle, adapter, config);
    let selected = select_earliest(comments, config.comments_limit);
    let mut vectors = Vec::with_capacity(selected.len());
    for &i in &selected {
        let probs = comment_probs.map(|p| p[i].as_slice());
        vectors.push(publisher_emotion(&comments[i].text, probs, bundle, adapter, config)?);
    }
    let (mean_pool, max_pool) = pool_vectors(vectors.iter().map(|v| v.values.as_slice()), dims.d());
    Ok(SocialEmotionVector { mean_pool, max_pool })
}

/// Emotion gap `(publisher - mean_pool) | (publisher - max_pool)`, length `2d`.
pub fn emotion_gap(
    publisher: &EmotionVector,
    social: &SocialEmotionVector,
) -> Result<Vec<f64>, FeatureError> {
    let d = publisher.len();
    if social.mean_pool.len() != d || social.max_pool.len() != d {
        return Err(FeatureError::GapDimensionMismatch {
            publisher: d,
            social: social.mean_pool.len(),
        });
    }
    let mut gap = Vec::with_capacity(2 * d);
    gap.extend(publisher.values.iter().zip(&social.mean_pool).map(|(p, s)| p - s));
    gap.extend(publisher.values.iter().zip(&social.max_pool).map(|(p, s)| p - s));
    Ok(gap)
}

/// Full dual emotion features of one piece.
pub fn dual_emotion_features(
    piece: &NewsPiece,
    bundle: &ResourceBundle,
    adapter: &ClassifierAdapter,
    config: &ExtractConfig,
) -> Result<DualEmotionVector, FeatureError> {
    let publisher = publisher_emotion(
        &piece.content,
        piece.publisher_emotion_probs.as_deref(),
        bundle,
        adapter,
        config,
    )?;
    let social = social_emotion(
        &piece.comments,
        piece.comment_emotion_probs.as_deref(),
        bundle,
        adapter,
        config,
    )
    .map_err(|e| match e {
        FeatureError::MisalignedCommentProbs { comments, probs, .. } => {
            FeatureError::MisalignedCommentProbs {
                id: piece.id.clone(),
                comments,
                probs,
            }
        }
        other => other,
    })?;
    let gap = emotion_gap(&publisher, &social)?;
    Ok(DualEmotionVector { publisher, social, gap })
}

/// Smoothed ratio of negative to positive sentiment word counts:
/// `(negative + 1) / (positive + 1)`.
pub fn emoratio(tokens: &TokenSequence, bundle: &ResourceBundle) -> f64 {
    let mut pos = 0usize;
    let mut neg = 0usize;
    for t in &tokens.tokens {
        match bundle.sentiment_words.get(t) {
            Some(Polarity::Positive) => pos += 1,
            Some(Polarity::Negative) => neg += 1,
            None => {}
        }
    }
    (neg as f64 + 1.0) / (pos as f64 + 1.0)
}

/// Modifier-free per-emotion occurrence frequency concatenated with the
/// intensity-weighted frequency, length `2*d_e`.
pub fn emocred_features(tokens: &TokenSequence, bundle: &ResourceBundle) -> Vec<f64> {
    let d_e = bundle.emotion_count();
    let mut freq = vec![0.0; d_e];
    let mut intensity = vec![0.0; d_e];
    if !tokens.is_empty() {
        let l = tokens.len() as f64;
        for t in &tokens.tokens {
            for e in 0..d_e {
                if bundle.in_lexicon(t, e) {
                    freq[e] += 1.0 / l;
                    intensity[e] += bundle.intensity_of(t, e) / l;
                }
            }
        }
    }
    freq.extend(intensity);
    freq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::load_resources;
    use proptest::prelude::*;
    use std::collections::HashSet;
    use std::path::Path;

    fn en_bundle() -> ResourceBundle {
        load_resources(
            &Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/resources/en"),
            Language::En,
        )
        .unwrap()
    }

    fn zh_bundle() -> ResourceBundle {
        load_resources(
            &Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/resources/zh"),
            Language::Zh,
        )
        .unwrap()
    }

    fn seq(words: &[&str]) -> TokenSequence {
        TokenSequence {
            tokens: words.iter().map(|w| w.to_string()).collect(),
        }
    }

    /// Two-emotion bundle: good/great in happy, mad in angry, not = -1, very = 2.
    fn toy_bundle() -> ResourceBundle {
        let mut b = ResourceBundle::empty(Language::En);
        b.emotions = vec!["happy".into(), "angry".into()];
        b.lexicon = vec![
            HashSet::from(["good".to_string(), "great".to_string()]),
            HashSet::from(["mad".to_string()]),
        ];
        b.intensity.insert("good".into(), vec![(0, 0.6)]);
        b.negation_words.insert("not".into(), -1.0);
        b.degree_words.insert("very".into(), 2.0);
        b.sentiment_words.insert("good".into(), Polarity::Positive);
        b.sentiment_words.insert("great".into(), Polarity::Positive);
        b.sentiment_words.insert("mad".into(), Polarity::Negative);
        b.sentiment_scores.insert("good".into(), 1.0);
        b.sentiment_scores.insert("great".into(), 1.0);
        b.sentiment_scores.insert("mad".into(), -1.0);
        b.reindex();
        b
    }

    #[test]
    fn worked_example_scores_minus_one_third() {
        let bundle = en_bundle();
        let tokens = seq(&["i", "am", "not", "very", "joyful", "today"]);
        let joy = bundle.emotion_index("joy").unwrap();
        let s = word_emotion_score(&tokens, 4, joy, &bundle, 2).unwrap();
        assert!((s - (-1.0 / 3.0)).abs() < 1e-12, "{s}");
    }

    #[test]
    fn non_lexicon_word_scores_zero() {
        let bundle = en_bundle();
        let tokens = seq(&["nothing", "matches", "here"]);
        let joy = bundle.emotion_index("joy").unwrap();
        assert_eq!(word_emotion_score(&tokens, 1, joy, &bundle, 2).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_index_errors() {
        let bundle = en_bundle();
        let tokens = seq(&["word"]);
        let err = word_emotion_score(&tokens, 1, 0, &bundle, 2).unwrap_err();
        assert!(matches!(err, FeatureError::IndexOutOfRange { .. }));
    }

    #[test]
    fn window_truncates_at_text_start() {
        let bundle = en_bundle();
        let tokens = seq(&["joyful", "day"]);
        let joy = bundle.emotion_index("joy").unwrap();
        let s = word_emotion_score(&tokens, 0, joy, &bundle, 2).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lexicon_features_sum_per_position() {
        let bundle = toy_bundle();
        assert_eq!(lexicon_features(&seq(&[]), &bundle, 2), vec![0.0, 0.0]);

        let tokens = seq(&["good", "good", "x", "y"]);
        let v = lexicon_features(&tokens, &bundle, 2);
        assert!((v[0] - 0.5).abs() < 1e-12, "two hits of 1/4 each");
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn intensity_on_worked_example() {
        let bundle = en_bundle();
        let tokens = seq(&["i", "am", "not", "very", "joyful", "today"]);
        let joy = bundle.emotion_index("joy").unwrap();
        let v = intensity_features(&tokens, &bundle, 2);
        assert!((v[joy] - 0.6 * (-1.0 / 3.0)).abs() < 1e-12, "{}", v[joy]);
    }

    #[test]
    fn intensity_zero_without_dictionary_words() {
        let bundle = en_bundle();
        let tokens = seq(&["celebrate", "the", "day"]); // in lexicon, not in intensity
        let v = intensity_features(&tokens, &bundle, 2);
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn sentiment_examples() {
        let bundle = toy_bundle();
        assert_eq!(
            sentiment_score(&seq(&[]), &bundle, &SentimentScorer::LexiconSum),
            vec![0.0]
        );
        // 2 positive, 1 negative among 6 tokens
        let tokens = seq(&["good", "great", "mad", "x", "y", "z"]);
        let v = sentiment_score(&tokens, &bundle, &SentimentScorer::LexiconSum);
        assert!((v[0] - 1.0 / 6.0).abs() < 1e-12);

        let v = sentiment_score(&tokens, &bundle, &SentimentScorer::FourWay);
        assert!((v[0] - 2.0 / 6.0).abs() < 1e-12);
        assert!((v[1] - 1.0 / 6.0).abs() < 1e-12);
        assert!((v[2] - 3.0 / 6.0).abs() < 1e-12);
        assert!((v[3] - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn external_sentiment_passes_through() {
        let v = external_sentiment(&[0.1, 0.2, 0.6, 0.3], 4).unwrap();
        assert_eq!(v, vec![0.1, 0.2, 0.6, 0.3]);
        let err = external_sentiment(&[0.1, 0.2], 4).unwrap_err();
        assert!(matches!(err, FeatureError::DimensionMismatch { .. }));
    }

    #[test]
    fn auxiliary_empty_text_is_zero_vector() {
        let bundle = en_bundle();
        let tokens = seq(&[]);
        let surface = scan_surface("", &bundle);
        let v = auxiliary_features(&tokens, &surface, &bundle);
        assert_eq!(v.len(), 16);
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn auxiliary_why_sad_fixture() {
        let bundle = en_bundle();
        let text = "WHY? :(";
        let surface = scan_surface(text, &bundle);
        let cleaned = strip_emoticons(text, &bundle);
        let tokens = tokenize(&cleaned, Language::En, &bundle);
        let v = auxiliary_features(&tokens, &surface, &bundle);
        assert!(v[3] > 0.0, "sad emoticon coordinate");
        assert!(v[6] > 0.0, "question coordinate");
        assert!(v[8..12].iter().all(|&x| x == 0.0), "no word family hits");
        assert!(v[15] > 0.0, "uppercase coordinate");
    }

    #[test]
    fn chinese_auxiliary_has_fifteen_coordinates() {
        let bundle = zh_bundle();
        let tokens = tokenize("我很生气！", Language::Zh, &bundle);
        let surface = scan_surface("我很生气！", &bundle);
        let v = auxiliary_features(&tokens, &surface, &bundle);
        assert_eq!(v.len(), 15);
    }

    #[test]
    fn precomputed_category_kept_when_sum_is_one() {
        let adapter = ClassifierAdapter::precomputed(vec![
            "angry".into(),
            "disgusting".into(),
            "happy".into(),
            "none".into(),
        ]);
        let bundle = en_bundle();
        let tokens = seq(&[]);
        let v = emotion_category(&tokens, &bundle, &adapter, Some(&[0.3, 0.1, 0.0, 0.6])).unwrap();
        assert_eq!(v, vec![0.3, 0.1, 0.0, 0.6]);
    }

    #[test]
    fn precomputed_category_normalizes_and_validates() {
        let adapter = ClassifierAdapter::precomputed_dim(2);
        let bundle = en_bundle();
        let tokens = seq(&[]);
        let v = emotion_category(&tokens, &bundle, &adapter, Some(&[1.0, 3.0])).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-12 && (v[1] - 0.75).abs() < 1e-12);

        assert!(matches!(
            emotion_category(&tokens, &bundle, &adapter, None),
            Err(FeatureError::MissingProbabilities)
        ));
        assert!(matches!(
            emotion_category(&tokens, &bundle, &adapter, Some(&[0.1, 0.2, 0.7])),
            Err(FeatureError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            emotion_category(&tokens, &bundle, &adapter, Some(&[-0.1, 1.1])),
            Err(FeatureError::NegativeProbability { .. })
        ));
        assert!(matches!(
            emotion_category(&tokens, &bundle, &adapter, Some(&[0.0, 0.0])),
            Err(FeatureError::ZeroProbabilitySum)
        ));
    }

    #[test]
    fn lexicon_vote_categories() {
        let bundle = toy_bundle();
        let adapter = ClassifierAdapter::lexicon_vote(&bundle);
        assert_eq!(adapter.output_dim(), 3);
        assert_eq!(adapter.none_index(), 2);

        let tokens = seq(&["plain", "words"]);
        let v = emotion_category(&tokens, &bundle, &adapter, None).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 1.0]);

        let tokens = seq(&["good", "great", "mad"]);
        let v = emotion_category(&tokens, &bundle, &adapter, None).unwrap();
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((v[1] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(v[2], 0.0);
    }

    #[test]
    fn publisher_dimensions_match_language_setups() {
        let en = en_bundle();
        let cfg = ExtractConfig::for_language(Language::En);
        let adapter = ClassifierAdapter::precomputed_dim(16);
        let probs: Vec<f64> = vec![1.0 / 16.0; 16];
        let v = publisher_emotion("a test sentence", Some(&probs), &en, &adapter, &cfg).unwrap();
        assert_eq!(v.len(), 52);

        let zh = zh_bundle();
        let cfg = ExtractConfig::for_language(Language::Zh);
        let adapter = ClassifierAdapter::precomputed_dim(8);
        let probs: Vec<f64> = vec![0.125; 8];
        let v = publisher_emotion("我很生气", Some(&probs), &zh, &adapter, &cfg).unwrap();
        assert_eq!(v.len(), 66);
    }

    #[test]
    fn empty_text_with_lexicon_vote_is_zero_except_none() {
        let bundle = en_bundle();
        let adapter = ClassifierAdapter::lexicon_vote(&bundle);
        let cfg = ExtractConfig::for_language(Language::En);
        let v = publisher_emotion("", None, &bundle, &adapter, &cfg).unwrap();
        let none = adapter.none_index();
        for (i, &x) in v.values.iter().enumerate() {
            if i == none {
                assert_eq!(x, 1.0);
            } else {
                assert_eq!(x, 0.0, "coordinate {i}");
            }
        }
    }

    #[test]
    fn pooling_mean_and_max() {
        let vecs = [vec![0.0, 1.0], vec![1.0, 0.0]];
        let (mean, max) = pool_vectors(vecs.iter().map(|v| v.as_slice()), 2);
        assert_eq!(mean, vec![0.5, 0.5]);
        assert_eq!(max, vec![1.0, 1.0]);

        let (mean, max) = pool_vectors(std::iter::empty(), 2);
        assert_eq!(mean, vec![0.0, 0.0]);
        assert_eq!(max, vec![0.0, 0.0]);
    }

    #[test]
    fn single_comment_pools_equal_its_vector() {
        let bundle = en_bundle();
        let adapter = ClassifierAdapter::lexicon_vote(&bundle);
        let cfg = ExtractConfig::for_language(Language::En);
        let comments = vec![Comment {
            text: "so very joyful :)".into(),
            timestamp: 5,
        }];
        let social = social_emotion(&comments, None, &bundle, &adapter, &cfg).unwrap();
        let direct = publisher_emotion("so very joyful :)", None, &bundle, &adapter, &cfg).unwrap();
        assert_eq!(social.mean_pool, direct.values);
        assert_eq!(social.max_pool, direct.values);
    }

    #[test]
    fn selection_takes_earliest_hundred() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let bundle = en_bundle();
        let adapter = ClassifierAdapter::lexicon_vote(&bundle);
        let cfg = ExtractConfig::for_language(Language::En);

        let words = ["joyful", "angry", "sad", "great", "nothing", "very", "not"];
        let comments: Vec<Comment> = (0..150)
            .map(|_| {
                let k = rng.gen_range(1..6);
                let text = (0..k).map(|_| words[rng.gen_range(0..words.len())]).collect::<Vec<_>>().join(" ");
                Comment {
                    text,
                    timestamp: rng.gen_range(0..10_000),
                }
            })
            .collect();

        let social = social_emotion(&comments, None, &bundle, &adapter, &cfg).unwrap();

        // naive oracle: sort, take 100, plain sum mean and max
        let mut sorted: Vec<(usize, &Comment)> = comments.iter().enumerate().collect();
        sorted.sort_by_key(|(i, c)| (c.timestamp, *i));
        let dims = FeatureDims::for_extraction(&bundle, &adapter, &cfg);
        let mut sum = vec![0.0; dims.d()];
        let mut max = vec![f64::NEG_INFINITY; dims.d()];
        for (_, c) in sorted.iter().take(100) {
            let v = publisher_emotion(&c.text, None, &bundle, &adapter, &cfg).unwrap();
            for (s, x) in sum.iter_mut().zip(&v.values) {
                *s += x;
            }
            for (m, &x) in max.iter_mut().zip(&v.values) {
                if x > *m {
                    *m = x;
                }
            }
        }
        for k in 0..dims.d() {
            assert!((social.mean_pool[k] - sum[k] / 100.0).abs() < 1e-12);
            assert_eq!(social.max_pool[k], max[k]);
        }
    }

    #[test]
    fn gap_arithmetic() {
        let dims = FeatureDims { d_f: 1, d_e: 0, d_s: 1, d_a: 0 };
        let publisher = EmotionVector {
            values: vec![1.0, 2.0],
            dims,
        };
        let social = SocialEmotionVector {
            mean_pool: vec![0.5, 0.5],
            max_pool: vec![1.0, 1.0],
        };
        let gap = emotion_gap(&publisher, &social).unwrap();
        assert_eq!(gap, vec![0.5, 1.5, 0.0, 1.0]);

        let bad = SocialEmotionVector {
            mean_pool: vec![0.5],
            max_pool: vec![1.0],
        };
        assert!(emotion_gap(&publisher, &bad).is_err());
    }

    #[test]
    fn identical_comments_give_exact_zero_gap() {
        let bundle = en_bundle();
        let adapter = ClassifierAdapter::lexicon_vote(&bundle);
        let cfg = ExtractConfig::for_language(Language::En);
        let content = "I am not very joyful today :(";
        for n in [1usize, 2, 3, 5, 7] {
            let piece = NewsPiece {
                id: "x".into(),
                content: content.into(),
                language: Language::En,
                label: None,
                timestamp: 0,
                comments: (0..n)
                    .map(|k| Comment {
                        text: content.into(),
                        timestamp: k as i64,
                    })
                    .collect(),
                publisher_emotion_probs: None,
                comment_emotion_probs: None,
                detector_embedding: None,
            };
            let dual = dual_emotion_features(&piece, &bundle, &adapter, &cfg).unwrap();
            assert!(
                dual.gap.iter().all(|&x| x == 0.0),
                "gap must vanish for {n} identical comments"
            );
        }
    }

    #[test]
    fn zero_comments_copy_publisher_into_gap() {
        let bundle = en_bundle();
        let adapter = ClassifierAdapter::lexicon_vote(&bundle);
        let cfg = ExtractConfig::for_language(Language::En);
        let piece = NewsPiece {
            id: "x".into(),
            content: "joyful and great".into(),
            language: Language::En,
            label: None,
            timestamp: 0,
            comments: vec![],
            publisher_emotion_probs: None,
            comment_emotion_probs: None,
            detector_embedding: None,
        };
        let dual = dual_emotion_features(&piece, &bundle, &adapter, &cfg).unwrap();
        let d = dual.publisher.len();
        assert!(dual.social.mean_pool.iter().all(|&x| x == 0.0));
        assert!(dual.social.max_pool.iter().all(|&x| x == 0.0));
        assert_eq!(&dual.gap[..d], &dual.publisher.values[..]);
        assert_eq!(&dual.gap[d..], &dual.publisher.values[..]);
    }

    #[test]
    fn flat_length_is_five_d() {
        let bundle = en_bundle();
        let adapter = ClassifierAdapter::precomputed_dim(16);
        let cfg = ExtractConfig::for_language(Language::En);
        let probs = vec![1.0 / 16.0; 16];
        let piece = NewsPiece {
            id: "x".into(),
            content: "joyful and great".into(),
            language: Language::En,
            label: None,
            timestamp: 0,
            comments: vec![Comment {
                text: "angry reply".into(),
                timestamp: 1,
            }],
            publisher_emotion_probs: Some(probs.clone()),
            comment_emotion_probs: Some(vec![probs]),
            detector_embedding: None,
        };
        let dual = dual_emotion_features(&piece, &bundle, &adapter, &cfg).unwrap();
        assert_eq!(dual.flat().len(), 260);
    }

    #[test]
    fn emoratio_examples() {
        let bundle = toy_bundle();
        assert_eq!(emoratio(&seq(&["x", "y"]), &bundle), 1.0);
        // 3 negative, 1 positive
        let tokens = seq(&["mad", "mad", "mad", "good"]);
        assert_eq!(emoratio(&tokens, &bundle), 2.0);
    }

    #[test]
    fn emocred_examples() {
        let bundle = toy_bundle();
        assert!(emocred_features(&seq(&[]), &bundle).iter().all(|&x| x == 0.0));

        let v = emocred_features(&seq(&["good"]), &bundle);
        assert_eq!(v.len(), 4);
        assert!((v[0] - 1.0).abs() < 1e-12, "happy frequency");
        assert_eq!(v[1], 0.0);
        assert!((v[2] - 0.6).abs() < 1e-12, "happy intensity frequency");
        assert_eq!(v[3], 0.0);
    }

    /// Brute-force re-evaluation of the word/text level formulas, written
    /// directly from the definitions and independent of the library path.
    mod oracle {
        use crate::resources::{Polarity, ResourceBundle};

        pub fn word_score(words: &[String], i: usize, emotion: usize, b: &ResourceBundle, w: usize) -> f64 {
            let indicator = if b.lexicon[emotion].contains(&words[i]) { 1.0 } else { 0.0 };
            let mut neg = 1.0;
            let mut deg = 1.0;
            let lo = i.saturating_sub(w);
            for j in lo..i {
                neg *= b.negation_words.get(&words[j]).copied().unwrap_or(1.0);
                deg *= b.degree_words.get(&words[j]).copied().unwrap_or(1.0);
            }
            indicator * neg * deg / words.len() as f64
        }

        pub fn lexicon(words: &[String], b: &ResourceBundle, w: usize) -> Vec<f64> {
            (0..b.emotions.len())
                .map(|e| (0..words.len()).map(|i| word_score(words, i, e, b, w)).sum())
                .collect()
        }

        pub fn intensity(words: &[String], b: &ResourceBundle, w: usize) -> Vec<f64> {
            (0..b.emotions.len())
                .map(|e| {
                    (0..words.len())
                        .map(|i| {
                            let int = b
                                .intensity
                                .get(&words[i])
                                .and_then(|v| v.iter().find(|(k, _)| *k == e))
                                .map(|(_, s)| *s)
                                .unwrap_or(0.0);
                            int * word_score(words, i, e, b, w)
                        })
                        .sum()
                })
                .collect()
        }

        pub fn emoratio(words: &[String], b: &ResourceBundle) -> f64 {
            let pos = words.iter().filter(|t| b.sentiment_words.get(*t) == Some(&Polarity::Positive)).count();
            let neg = words.iter().filter(|t| b.sentiment_words.get(*t) == Some(&Polarity::Negative)).count();
            (neg as f64 + 1.0) / (pos as f64 + 1.0)
        }

        pub fn emocred(words: &[String], b: &ResourceBundle) -> Vec<f64> {
            let d_e = b.emotions.len();
            let mut out = vec![0.0; 2 * d_e];
            if words.is_empty() {
                return out;
            }
            let l = words.len() as f64;
            for e in 0..d_e {
                for t in words {
                    if b.lexicon[e].contains(t) {
                        out[e] += 1.0 / l;
                        out[d_e + e] += b
                            .intensity
                            .get(t)
                            .and_then(|v| v.iter().find(|(k, _)| *k == e))
                            .map(|(_, s)| *s)
                            .unwrap_or(0.0)
                            / l;
                    }
                }
            }
            out
        }
    }

    fn en_word_pool(bundle: &ResourceBundle) -> Vec<String> {
        let mut pool: Vec<String> = Vec::new();
        for set in &bundle.lexicon {
            pool.extend(set.iter().cloned());
        }
        pool.extend(bundle.negation_words.keys().cloned());
        pool.extend(bundle.degree_words.keys().cloned());
        pool.extend(bundle.sentiment_words.keys().cloned());
        pool.extend(["the", "a", "story", "plain", "word"].map(String::from));
        pool.sort();
        pool.dedup();
        pool
    }

    proptest! {
        #[test]
        fn random_texts_match_brute_force_oracle(
            picks in proptest::collection::vec(0usize..1000, 1..20),
            window in 0usize..4,
        ) {
            let bundle = en_bundle();
            let pool = en_word_pool(&bundle);
            let words: Vec<String> = picks.iter().map(|&p| pool[p % pool.len()].clone()).collect();
            let tokens = TokenSequence { tokens: words.clone() };

            for i in 0..words.len() {
                for e in 0..bundle.emotion_count() {
                    let got = word_emotion_score(&tokens, i, e, &bundle, window).unwrap();
                    let want = oracle::word_score(&words, i, e, &bundle, window);
                    prop_assert!((got - want).abs() < 1e-12);
                }
            }
            let got = lexicon_features(&tokens, &bundle, window);
            let want = oracle::lexicon(&words, &bundle, window);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-12);
            }
            let got = intensity_features(&tokens, &bundle, window);
            let want = oracle::intensity(&words, &bundle, window);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-12);
            }
            prop_assert!((emoratio(&tokens, &bundle) - oracle::emoratio(&words, &bundle)).abs() < 1e-12);
            let got = emocred_features(&tokens, &bundle);
            let want = oracle::emocred(&words, &bundle);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-12);
            }
        }

        #[test]
        fn max_pool_dominates_mean_pool(
            picks in proptest::collection::vec(0usize..1000, 1..8),
        ) {
            let bundle = en_bundle();
            let adapter = ClassifierAdapter::lexicon_vote(&bundle);
            let cfg = ExtractConfig::for_language(Language::En);
            let pool = en_word_pool(&bundle);
            let comments: Vec<Comment> = picks
                .iter()
                .enumerate()
                .map(|(k, &p)| Comment {
                    text: format!("{} {}", pool[p % pool.len()], pool[(p / 7) % pool.len()]),
                    timestamp: k as i64,
                })
                .collect();
            let social = social_emotion(&comments, None, &bundle, &adapter, &cfg).unwrap();
            for (mean, max) in social.mean_pool.iter().zip(&social.max_pool) {
                prop_assert!(max >= mean);
            }
        }

        #[test]
        fn pools_ignore_input_order_with_distinct_timestamps(
            picks in proptest::collection::vec(0usize..1000, 1..8),
        ) {
            let bundle = en_bundle();
            let adapter = ClassifierAdapter::lexicon_vote(&bundle);
            let cfg = ExtractConfig::for_language(Language::En);
            let pool = en_word_pool(&bundle);
            let comments: Vec<Comment> = picks
                .iter()
                .enumerate()
                .map(|(k, &p)| Comment {
                    text: pool[p % pool.len()].clone(),
                    timestamp: k as i64,
                })
                .collect();
            let mut reversed = comments.clone();
            reversed.reverse();
            let a = social_emotion(&comments, None, &bundle, &adapter, &cfg).unwrap();
            let b = social_emotion(&reversed, None, &bundle, &adapter, &cfg).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn gap_reconstructs_from_segments(
            picks in proptest::collection::vec(0usize..1000, 0..6),
        ) {
            let bundle = en_bundle();
            let adapter = ClassifierAdapter::lexicon_vote(&bundle);
            let cfg = ExtractConfig::for_language(Language::En);
            let pool = en_word_pool(&bundle);
            let piece = NewsPiece {
                id: "p".into(),
                content: "not very joyful today".into(),
                language: Language::En,
                label: None,
                timestamp: 0,
                comments: picks
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| Comment {
                        text: pool[p % pool.len()].clone(),
                        timestamp: k as i64,
                    })
                    .collect(),
                publisher_emotion_probs: None,
                comment_emotion_probs: None,
                detector_embedding: None,
            };
            let dual = dual_emotion_features(&piece, &bundle, &adapter, &cfg).unwrap();
            let d = dual.publisher.len();
            for k in 0..d {
                prop_assert_eq!(dual.gap[k], dual.publisher.values[k] - dual.social.mean_pool[k]);
                prop_assert_eq!(dual.gap[d + k], dual.publisher.values[k] - dual.social.max_pool[k]);
            }
        }

        #[test]
        fn self_concatenation_preserves_frequencies(
            picks in proptest::collection::vec(0usize..1000, 1..10),
        ) {
            let bundle = en_bundle();
            let pool = en_word_pool(&bundle);
            let mut words: Vec<String> = picks.iter().map(|&p| pool[p % pool.len()].clone()).collect();
            // keep the seam clean: no negation or degree word may end the text
            words.retain(|w| !bundle.negation_words.contains_key(w) && !bundle.degree_words.contains_key(w));
            prop_assume!(!words.is_empty());

            let text = words.join(" ");
            let doubled = format!("{text} {text}");

            let cfg = ExtractConfig::for_language(Language::En);
            let t1 = tokenize(&text, Language::En, &bundle);
            let t2 = tokenize(&doubled, Language::En, &bundle);
            let s1 = scan_surface(&text, &bundle);
            let s2 = scan_surface(&doubled, &bundle);

            for (a, b) in lexicon_features(&t1, &bundle, cfg.window)
                .iter()
                .zip(&lexicon_features(&t2, &bundle, cfg.window))
            {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for (a, b) in intensity_features(&t1, &bundle, cfg.window)
                .iter()
                .zip(&intensity_features(&t2, &bundle, cfg.window))
            {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for (a, b) in auxiliary_features(&t1, &s1, &bundle)
                .iter()
                .zip(&auxiliary_features(&t2, &s2, &bundle))
            {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
