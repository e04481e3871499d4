//! Corpus ingestion, train/validation/test splits and near-duplicate removal.
//!
//! Datasets are JSON Lines files with one [`NewsPiece`] per line. Splits are
//! deterministic: the random split is driven by a seeded generator and the
//! temporal split by timestamps with id tie-breaks. Deduplication clusters
//! near-identical contents by character 3-gram Jaccard similarity and keeps
//! the earliest piece of every cluster.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::resources::Language;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Fake,
    Real,
    Unverified,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Fake => "fake",
            Label::Real => "real",
            Label::Unverified => "unverified",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "fake" => Some(Label::Fake),
            "real" => Some(Label::Real),
            "unverified" => Some(Label::Unverified),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Comment {
    pub text: String,
    pub timestamp: i64,
}

/// One news post: content text plus its timestamped comment stream, with
/// optional precomputed emotion probabilities and an optional detector
/// embedding consumed at classification time.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NewsPiece {
    pub id: String,
    pub content: String,
    pub language: Language,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    pub timestamp: i64,
    #[serde(default)]
    pub comments: Vec<Comment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub publisher_emotion_probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment_emotion_probs: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_embedding: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub pieces: Vec<NewsPiece>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&NewsPiece> {
        self.pieces.iter().find(|p| p.id == id)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterReport {
    /// Every cluster of the filtered subset, singletons included; members in
    /// input order, clusters ordered by their first member.
    pub clusters: Vec<Vec<String>>,
    pub removed: usize,
    pub retained: usize,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("duplicate piece id '{id}'")]
    DuplicateId { id: String },
    #[error("piece '{id}': {probs} comment probability vectors for {comments} comments")]
    MisalignedProbs {
        id: String,
        comments: usize,
        probs: usize,
    },
    #[error("piece '{id}': negative timestamp")]
    NegativeTimestamp { id: String },
    #[error("dataset is empty")]
    Empty,
    #[error("split ratios must all be positive")]
    BadRatios,
    #[error("dedup threshold must be in (0, 1], got {0}")]
    BadThreshold(f64),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn validate_piece(piece: &NewsPiece) -> Result<(), DatasetError> {
    if piece.timestamp < 0 || piece.comments.iter().any(|c| c.timestamp < 0) {
        return Err(DatasetError::NegativeTimestamp {
            id: piece.id.clone(),
        });
    }
    if let Some(probs) = &piece.comment_emotion_probs {
        if probs.len() != piece.comments.len() {
            return Err(DatasetError::MisalignedProbs {
                id: piece.id.clone(),
                comments: piece.comments.len(),
                probs: probs.len(),
            });
        }
    }
    Ok(())
}

/// Load a JSON Lines dataset, one piece per line. Rejects duplicate ids,
/// negative timestamps and misaligned comment probability lists.
pub fn load_dataset(path: &Path) -> Result<Dataset, DatasetError> {
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut pieces = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let piece: NewsPiece = serde_json::from_str(line).map_err(|e| DatasetError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        if !seen.insert(piece.id.clone()) {
            return Err(DatasetError::DuplicateId { id: piece.id });
        }
        validate_piece(&piece)?;
        pieces.push(piece);
    }
    Ok(Dataset { pieces })
}

/// Write a dataset back out as JSON Lines (one piece per line, stable field order).
pub fn save_dataset(dataset: &Dataset, path: &Path) -> Result<(), DatasetError> {
    let mut out = String::new();
    for piece in &dataset.pieces {
        out.push_str(&serde_json::to_string(piece).expect("piece serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Deterministic shuffled split. Sizes follow `ratios` with the remainder
/// assigned to train.
pub fn random_split(
    dataset: &Dataset,
    ratios: (u64, u64, u64),
    seed: u64,
) -> Result<DatasetSplit, DatasetError> {
    if dataset.is_empty() {
        return Err(DatasetError::Empty);
    }
    let (a, b, c) = ratios;
    if a == 0 || b == 0 || c == 0 {
        return Err(DatasetError::BadRatios);
    }
    let n = dataset.len() as u64;
    let total = a + b + c;
    let n_val = (n * b / total) as usize;
    let n_test = (n * c / total) as usize;
    let n_train = dataset.len() - n_val - n_test;

    let mut ids: Vec<String> = dataset.pieces.iter().map(|p| p.id.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let test = ids.split_off(n_train + n_val);
    let validation = ids.split_off(n_train);
    Ok(DatasetSplit {
        train: ids,
        validation,
        test,
    })
}

/// Chronological split: the most recent 20% of pieces become the test set,
/// and the most recent 25% of the remainder becomes validation. Ties on the
/// timestamp are broken by id before cutting, so the result is independent
/// of input order.
pub fn temporal_split(dataset: &Dataset) -> Result<DatasetSplit, DatasetError> {
    if dataset.is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut order: Vec<(i64, &str)> = dataset
        .pieces
        .iter()
        .map(|p| (p.timestamp, p.id.as_str()))
        .collect();
    order.sort();

    let n = order.len();
    let n_test = n / 5;
    let rest = n - n_test;
    let n_val = rest / 4;
    let n_train = rest - n_val;

    let ids: Vec<String> = order.into_iter().map(|(_, id)| id.to_string()).collect();
    Ok(DatasetSplit {
        train: ids[..n_train].to_vec(),
        validation: ids[n_train..n_train + n_val].to_vec(),
        test: ids[n_train + n_val..].to_vec(),
    })
}

fn char_trigrams(content: &str) -> HashSet<String> {
    let chars: Vec<char> = content.chars().collect();
    if chars.len() < 3 {
        let mut set = HashSet::new();
        set.insert(content.to_string());
        return set;
    }
    chars.windows(3).map(|w| w.iter().collect()).collect()
}

fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        return 1.0;
    }
    inter as f64 / union as f64
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Remove near-duplicate pieces among those carrying `label_filter`.
///
/// Similarity is character 3-gram Jaccard on the content; pieces connected
/// by pairs with similarity `>= threshold` form one cluster (single link)
/// and only the earliest-timestamped piece of each cluster survives, ties
/// broken by id. Pieces with other labels pass through untouched.
pub fn deduplicate(
    dataset: &Dataset,
    label_filter: Label,
    threshold: f64,
) -> Result<(Dataset, ClusterReport), DatasetError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(DatasetError::BadThreshold(threshold));
    }
    let filtered: Vec<usize> = dataset
        .pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| p.label == Some(label_filter))
        .map(|(i, _)| i)
        .collect();

    let grams: Vec<HashSet<String>> = filtered
        .iter()
        .map(|&i| char_trigrams(&dataset.pieces[i].content))
        .collect();

    let mut uf = UnionFind::new(filtered.len());
    for i in 0..filtered.len() {
        for j in (i + 1)..filtered.len() {
            if jaccard(&grams[i], &grams[j]) >= threshold {
                uf.union(i, j);
            }
        }
    }

    // group members by root, clusters ordered by first member
    let mut cluster_of_root: HashMap<usize, usize> = HashMap::new();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in 0..filtered.len() {
        let root = uf.find(k);
        let slot = *cluster_of_root.entry(root).or_insert_with(|| {
            clusters.push(Vec::new());
            clusters.len() - 1
        });
        clusters[slot].push(filtered[k]);
    }

    let mut keep: HashSet<usize> = (0..dataset.len()).collect();
    let mut report_clusters = Vec::with_capacity(clusters.len());
    let mut removed = 0;
    for members in &clusters {
        let keeper = *members
            .iter()
            .min_by_key(|&&i| (dataset.pieces[i].timestamp, &dataset.pieces[i].id))
            .expect("cluster is nonempty");
        for &m in members {
            if m != keeper {
                keep.remove(&m);
                removed += 1;
            }
        }
        report_clusters.push(members.iter().map(|&i| dataset.pieces[i].id.clone()).collect());
    }

    let pieces: Vec<NewsPiece> = dataset
        .pieces
        .iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, p)| p.clone())
        .collect();
    let retained = pieces.len();
    Ok((
        Dataset { pieces },
        ClusterReport {
            clusters: report_clusters,
            removed,
            retained,
        },
    ))
}
