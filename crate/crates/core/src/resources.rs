//! Loading and validation of language-specific emotion resources.
//!
//! A [`ResourceBundle`] holds every lookup table the feature extractor needs:
//! the emotion inventory (which fixes vector coordinate order), per-emotion
//! word lists, intensity scores, sentiment words, negation/degree modifiers,
//! emoticons and personal pronouns. Bundles are immutable after load and can
//! be shared freely across threads.

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Zh,
}

impl Language {
    pub fn as_str(&self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Zh => "zh",
        }
    }

    pub fn parse(s: &str) -> Option<Language> {
        match s {
            "en" => Some(Language::En),
            "zh" => Some(Language::Zh),
            _ => None,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Emoticon classes in the fixed order used by the auxiliary feature block.
pub const EMOTICON_CLASSES: [EmoticonClass; 5] = [
    EmoticonClass::Happy,
    EmoticonClass::Angry,
    EmoticonClass::Surprised,
    EmoticonClass::Sad,
    EmoticonClass::Neutral,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmoticonClass {
    Happy,
    Angry,
    Surprised,
    Sad,
    Neutral,
}

impl EmoticonClass {
    pub fn index(&self) -> usize {
        match self {
            EmoticonClass::Happy => 0,
            EmoticonClass::Angry => 1,
            EmoticonClass::Surprised => 2,
            EmoticonClass::Sad => 3,
            EmoticonClass::Neutral => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PronounPerson {
    First,
    Second,
    Third,
}

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("{label} not found: {path}")]
    MissingFile { label: &'static str, path: PathBuf },
    #[error("{file}:{line}: {message}")]
    MalformedRow {
        file: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: duplicate emotion name '{name}'")]
    DuplicateEmotion {
        file: PathBuf,
        line: usize,
        name: String,
    },
    #[error("{file}:{line}: intensity word '{word}' absent from '{emotion}' lexicon")]
    IntensityWordUnknown {
        file: PathBuf,
        line: usize,
        word: String,
        emotion: String,
    },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// All emotion resources for one language, immutable after load.
///
/// `emotions` fixes the coordinate order of every `d_e`-dimensional vector
/// produced downstream.
#[derive(Debug, Clone)]
pub struct ResourceBundle {
    pub language: Language,
    pub emotions: Vec<String>,
    emotion_index: HashMap<String, usize>,
    /// Per-emotion word sets, indexed like `emotions`.
    pub lexicon: Vec<HashSet<String>>,
    /// word -> (emotion index, intensity score in [0,1])
    pub intensity: HashMap<String, Vec<(usize, f64)>>,
    /// word -> polarity
    pub sentiment_words: HashMap<String, Polarity>,
    /// word -> signed score (defaults +1 / -1 by polarity)
    pub sentiment_scores: HashMap<String, f64>,
    /// word -> negation value (nonzero, typically -1)
    pub negation_words: HashMap<String, f64>,
    /// word -> degree multiplier (> 0)
    pub degree_words: HashMap<String, f64>,
    /// Emoticon table sorted longest-first for greedy matching.
    pub emoticons: Vec<(String, EmoticonClass)>,
    /// Pronoun sets indexed first/second/third.
    pub pronouns: [HashSet<String>; 3],
    /// Union of every word known to the bundle, for lexicon-driven segmentation.
    vocabulary: HashSet<String>,
    max_word_chars: usize,
}

impl ResourceBundle {
    /// Number of emotions `d_e`.
    pub fn emotion_count(&self) -> usize {
        self.emotions.len()
    }

    pub fn emotion_index(&self, name: &str) -> Option<usize> {
        self.emotion_index.get(name).copied()
    }

    pub fn in_lexicon(&self, word: &str, emotion: usize) -> bool {
        self.lexicon.get(emotion).is_some_and(|s| s.contains(word))
    }

    /// Intensity score of `word` for `emotion`, 0 when absent from the dictionary.
    pub fn intensity_of(&self, word: &str, emotion: usize) -> f64 {
        self.intensity
            .get(word)
            .and_then(|v| v.iter().find(|(e, _)| *e == emotion))
            .map(|(_, s)| *s)
            .unwrap_or(0.0)
    }

    pub fn negation_value(&self, word: &str) -> f64 {
        self.negation_words.get(word).copied().unwrap_or(1.0)
    }

    pub fn degree_value(&self, word: &str) -> f64 {
        self.degree_words.get(word).copied().unwrap_or(1.0)
    }

    pub fn is_known_word(&self, word: &str) -> bool {
        self.vocabulary.contains(word)
    }

    pub fn max_word_chars(&self) -> usize {
        self.max_word_chars
    }

    /// Rebuild the derived lookup structures after direct field edits.
    /// Only needed when constructing bundles by hand (tests, adapters).
    pub fn reindex(&mut self) {
        self.emotion_index = self
            .emotions
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        self.emoticons
            .sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then(a.0.cmp(&b.0)));
        let mut vocab = HashSet::new();
        for set in &self.lexicon {
            vocab.extend(set.iter().cloned());
        }
        vocab.extend(self.intensity.keys().cloned());
        vocab.extend(self.sentiment_words.keys().cloned());
        vocab.extend(self.negation_words.keys().cloned());
        vocab.extend(self.degree_words.keys().cloned());
        for set in &self.pronouns {
            vocab.extend(set.iter().cloned());
        }
        self.max_word_chars = vocab.iter().map(|w| w.chars().count()).max().unwrap_or(0);
        self.vocabulary = vocab;
    }

    /// Empty bundle skeleton; used by tests that build bundles by hand.
    pub fn empty(language: Language) -> ResourceBundle {
        ResourceBundle {
            language,
            emotions: Vec::new(),
            emotion_index: HashMap::new(),
            lexicon: Vec::new(),
            intensity: HashMap::new(),
            sentiment_words: HashMap::new(),
            sentiment_scores: HashMap::new(),
            negation_words: HashMap::new(),
            degree_words: HashMap::new(),
            emoticons: Vec::new(),
            pronouns: [HashSet::new(), HashSet::new(), HashSet::new()],
            vocabulary: HashSet::new(),
            max_word_chars: 0,
        }
    }
}

/// Invariant violations found by [`validate_resources`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

fn fold_case(word: &str, language: Language) -> String {
    match language {
        Language::En => word.to_lowercase(),
        Language::Zh => word.to_string(),
    }
}

struct FileRows {
    path: PathBuf,
    /// (line number, content) with comments and blank lines dropped
    rows: Vec<(usize, String)>,
}

fn read_rows(dir: &Path, name: &str, label: &'static str) -> Result<FileRows, ResourceError> {
    let path = dir.join(name);
    if !path.is_file() {
        return Err(ResourceError::MissingFile { label, path });
    }
    let text = fs::read_to_string(&path).map_err(|source| ResourceError::Io {
        path: path.clone(),
        source,
    })?;
    let rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').to_string()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    Ok(FileRows { path, rows })
}

fn malformed(file: &Path, line: usize, message: impl Into<String>) -> ResourceError {
    ResourceError::MalformedRow {
        file: file.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Load and validate a [`ResourceBundle`] from a per-language directory.
///
/// The directory must contain `emotions.txt`, `lexicon.tsv`, `intensity.tsv`,
/// `sentiment.tsv`, `negation.txt`, `degree.tsv`, `emoticons.tsv` and
/// `pronouns.tsv`. All files are UTF-8 with `#` comment lines ignored.
/// English entries are case-folded on load.
pub fn load_resources(dir: &Path, language: Language) -> Result<ResourceBundle, ResourceError> {
    let mut bundle = ResourceBundle::empty(language);

    // emotions.txt fixes coordinate order
    let f = read_rows(dir, "emotions.txt", "emotion list")?;
    for (ln, row) in &f.rows {
        let name = fold_case(row.trim(), language);
        if bundle.emotion_index.contains_key(&name) {
            return Err(ResourceError::DuplicateEmotion {
                file: f.path.clone(),
                line: *ln,
                name,
            });
        }
        bundle.emotion_index.insert(name.clone(), bundle.emotions.len());
        bundle.emotions.push(name);
        bundle.lexicon.push(HashSet::new());
    }
    if bundle.emotions.is_empty() {
        return Err(malformed(&f.path, 0, "emotion list is empty"));
    }

    let f = read_rows(dir, "lexicon.tsv", "emotion lexicon")?;
    for (ln, row) in &f.rows {
        let mut parts = row.splitn(2, '\t');
        let (emo, word) = match (parts.next(), parts.next()) {
            (Some(e), Some(w)) if !e.trim().is_empty() && !w.trim().is_empty() => (e, w),
            _ => return Err(malformed(&f.path, *ln, "expected emotion<TAB>word")),
        };
        let emo = fold_case(emo.trim(), language);
        let idx = *bundle
            .emotion_index
            .get(&emo)
            .ok_or_else(|| malformed(&f.path, *ln, format!("unknown emotion '{emo}'")))?;
        bundle.lexicon[idx].insert(fold_case(word.trim(), language));
    }

    let f = read_rows(dir, "intensity.tsv", "intensity lexicon")?;
    for (ln, row) in &f.rows {
        let parts: Vec<&str> = row.split('\t').collect();
        if parts.len() != 3 {
            return Err(malformed(&f.path, *ln, "expected word<TAB>emotion<TAB>score"));
        }
        let word = fold_case(parts[0].trim(), language);
        let emo = fold_case(parts[1].trim(), language);
        let score: f64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| malformed(&f.path, *ln, format!("bad score '{}'", parts[2])))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(malformed(&f.path, *ln, format!("score {score} outside [0,1]")));
        }
        let idx = *bundle
            .emotion_index
            .get(&emo)
            .ok_or_else(|| malformed(&f.path, *ln, format!("unknown emotion '{emo}'")))?;
        if !bundle.lexicon[idx].contains(&word) {
            return Err(ResourceError::IntensityWordUnknown {
                file: f.path.clone(),
                line: *ln,
                word,
                emotion: emo,
            });
        }
        bundle.intensity.entry(word).or_default().push((idx, score));
    }

    let f = read_rows(dir, "sentiment.tsv", "sentiment lexicon")?;
    for (ln, row) in &f.rows {
        let parts: Vec<&str> = row.split('\t').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(malformed(&f.path, *ln, "expected word<TAB>pos|neg[<TAB>score]"));
        }
        let word = fold_case(parts[0].trim(), language);
        let polarity = match parts[1].trim() {
            "pos" => Polarity::Positive,
            "neg" => Polarity::Negative,
            other => return Err(malformed(&f.path, *ln, format!("bad polarity '{other}'"))),
        };
        let score = if parts.len() == 3 {
            parts[2]
                .trim()
                .parse()
                .map_err(|_| malformed(&f.path, *ln, format!("bad score '{}'", parts[2])))?
        } else {
            match polarity {
                Polarity::Positive => 1.0,
                Polarity::Negative => -1.0,
            }
        };
        bundle.sentiment_words.insert(word.clone(), polarity);
        bundle.sentiment_scores.insert(word, score);
    }

    let f = read_rows(dir, "negation.txt", "negation word list")?;
    for (ln, row) in &f.rows {
        let parts: Vec<&str> = row.split('\t').collect();
        let (word, value) = match parts.len() {
            1 => (parts[0], -1.0),
            2 => (
                parts[0],
                parts[1]
                    .trim()
                    .parse()
                    .map_err(|_| malformed(&f.path, *ln, format!("bad value '{}'", parts[1])))?,
            ),
            _ => return Err(malformed(&f.path, *ln, "expected word[<TAB>value]")),
        };
        if value == 0.0 {
            return Err(malformed(&f.path, *ln, "negation value must be nonzero"));
        }
        bundle.negation_words.insert(fold_case(word.trim(), language), value);
    }

    let f = read_rows(dir, "degree.tsv", "degree word list")?;
    for (ln, row) in &f.rows {
        let parts: Vec<&str> = row.split('\t').collect();
        if parts.len() != 2 {
            return Err(malformed(&f.path, *ln, "expected word<TAB>multiplier"));
        }
        let mult: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| malformed(&f.path, *ln, format!("bad multiplier '{}'", parts[1])))?;
        if mult <= 0.0 {
            return Err(malformed(&f.path, *ln, "degree multiplier must be > 0"));
        }
        bundle.degree_words.insert(fold_case(parts[0].trim(), language), mult);
    }

    let f = read_rows(dir, "emoticons.tsv", "emoticon table")?;
    for (ln, row) in &f.rows {
        let parts: Vec<&str> = row.split('\t').collect();
        if parts.len() != 2 {
            return Err(malformed(&f.path, *ln, "expected emoticon<TAB>class"));
        }
        let class = match parts[1].trim() {
            "happy" => EmoticonClass::Happy,
            "angry" => EmoticonClass::Angry,
            "surprised" => EmoticonClass::Surprised,
            "sad" => EmoticonClass::Sad,
            "neutral" => EmoticonClass::Neutral,
            other => return Err(malformed(&f.path, *ln, format!("bad emoticon class '{other}'"))),
        };
        // Raw, not case-folded: ":D" and ":d" are different emoticons.
        bundle.emoticons.push((parts[0].to_string(), class));
    }

    let f = read_rows(dir, "pronouns.tsv", "pronoun table")?;
    for (ln, row) in &f.rows {
        let parts: Vec<&str> = row.split('\t').collect();
        if parts.len() != 2 {
            return Err(malformed(&f.path, *ln, "expected word<TAB>person"));
        }
        let slot = match parts[1].trim() {
            "first" => 0,
            "second" => 1,
            "third" => 2,
            other => return Err(malformed(&f.path, *ln, format!("bad person '{other}'"))),
        };
        bundle.pronouns[slot].insert(fold_case(parts[0].trim(), language));
    }

    bundle.reindex();
    Ok(bundle)
}

/// Check every bundle invariant and list violations; an empty report means
/// the bundle is sound. Intended for bundles assembled programmatically —
/// [`load_resources`] already rejects these problems at parse time.
pub fn validate_resources(bundle: &ResourceBundle) -> ValidationReport {
    let mut report = ValidationReport::default();
    if bundle.emotions.is_empty() {
        report.violations.push("emotion list is empty".to_string());
    }
    let mut seen = HashSet::new();
    for name in &bundle.emotions {
        if !seen.insert(name) {
            report.violations.push(format!("duplicate emotion name '{name}'"));
        }
    }
    if bundle.lexicon.len() != bundle.emotions.len() {
        report.violations.push(format!(
            "lexicon has {} emotion slots, expected {}",
            bundle.lexicon.len(),
            bundle.emotions.len()
        ));
    }
    for (word, entries) in &bundle.intensity {
        for (idx, score) in entries {
            match bundle.lexicon.get(*idx) {
                Some(set) if set.contains(word) => {}
                _ => report.violations.push(format!(
                    "intensity word '{word}' absent from lexicon of emotion #{idx}"
                )),
            }
            if !(0.0..=1.0).contains(score) {
                report
                    .violations
                    .push(format!("intensity score {score} for '{word}' outside [0,1]"));
            }
        }
    }
    for (word, mult) in &bundle.degree_words {
        if *mult <= 0.0 {
            report
                .violations
                .push(format!("degree multiplier {mult} for '{word}' not strictly positive"));
        }
    }
    for (word, value) in &bundle.negation_words {
        if *value == 0.0 {
            report.violations.push(format!("negation value for '{word}' is zero"));
        }
    }
    report
}
