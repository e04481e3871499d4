//! Dual emotion category labeling, contingency tables, the Pearson
//! chi-square independence test and row-normalized heatmap data.
//!
//! The publisher category of a piece is the argmax of its content
//! probability vector; the social category soft-votes by averaging all
//! comment probability vectors before taking the argmax. Categories pair up
//! with veracity labels in a contingency table whose independence is tested
//! with the uncorrected Pearson statistic against embedded 95%/99% critical
//! values (degrees of freedom 1 through 100).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

use crate::dataset::{Dataset, Label, NewsPiece};
use crate::features::{emotion_category, ClassifierAdapter, FeatureError};
use crate::resources::ResourceBundle;
use crate::textproc::{strip_emoticons, tokenize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEmotionCategory {
    pub publisher_label: String,
    pub social_label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    /// Critical values keyed by confidence level ("0.95", "0.99").
    pub critical_values: BTreeMap<String, f64>,
    pub reject_at: BTreeMap<String, bool>,
}

/// Row-normalized heatmap: every row with a nonzero total sums to 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapData {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Rows whose counts were all zero (emitted as zeros).
    pub zero_rows: Vec<bool>,
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("no labeled fake/real pieces to tabulate")]
    NoLabeledPieces,
    #[error("table needs at least 2 nonzero-margin rows and columns, has {rows}x{cols}")]
    DegenerateTable { rows: usize, cols: usize },
}

/// Argmax with ties broken by the lowest coordinate index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn category_probs(
    text: &str,
    precomputed: Option<&[f64]>,
    bundle: &ResourceBundle,
    adapter: &ClassifierAdapter,
) -> Result<Vec<f64>, FeatureError> {
    let cleaned = strip_emoticons(text, bundle);
    let tokens = tokenize(&cleaned, bundle.language, bundle);
    emotion_category(&tokens, bundle, adapter, precomputed)
}

/// Dual emotion category of one piece: publisher argmax plus soft-voted
/// social argmax over all comments. Zero comments map the social side to the
/// adapter's "none" category.
pub fn dual_emotion_category(
    piece: &NewsPiece,
    adapter: &ClassifierAdapter,
    bundle: &ResourceBundle,
) -> Result<DualEmotionCategory, AnalysisError> {
    let content_probs = category_probs(
        &piece.content,
        piece.publisher_emotion_probs.as_deref(),
        bundle,
        adapter,
    )?;
    let publisher_label = adapter.category_names[argmax(&content_probs)].clone();

    let social_label = if piece.comments.is_empty() {
        adapter.category_names[adapter.none_index()].clone()
    } else {
        let d_f = adapter.output_dim();
        let mut sum = vec![0.0; d_f];
        for (i, comment) in piece.comments.iter().enumerate() {
            let probs = piece
                .comment_emotion_probs
                .as_ref()
                .map(|p| p[i].as_slice());
            let v = category_probs(&comment.text, probs, bundle, adapter)?;
            for (s, x) in sum.iter_mut().zip(&v) {
                *s += x;
            }
        }
        let n = piece.comments.len() as f64;
        for s in sum.iter_mut() {
            *s /= n;
        }
        adapter.category_names[argmax(&sum)].clone()
    };

    Ok(DualEmotionCategory {
        publisher_label,
        social_label,
    })
}

fn name_order(adapter: &ClassifierAdapter) -> BTreeMap<&str, usize> {
    adapter
        .category_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect()
}

/// Veracity x dual-category contingency table over the labeled fake/real
/// pieces. An optional whitelist keeps only pieces whose publisher and
/// social categories both belong to it.
pub fn contingency_table(
    dataset: &Dataset,
    adapter: &ClassifierAdapter,
    bundle: &ResourceBundle,
    category_whitelist: Option<&HashSet<String>>,
) -> Result<ContingencyTable, AnalysisError> {
    let order = name_order(adapter);
    let mut cells: BTreeMap<(usize, (usize, usize)), u64> = BTreeMap::new();
    let mut any = false;
    for piece in &dataset.pieces {
        let row = match piece.label {
            Some(Label::Fake) => 0usize,
            Some(Label::Real) => 1,
            _ => continue,
        };
        let cat = dual_emotion_category(piece, adapter, bundle)?;
        if let Some(white) = category_whitelist {
            if !white.contains(&cat.publisher_label) || !white.contains(&cat.social_label) {
                continue;
            }
        }
        any = true;
        let key = (row, (order[cat.publisher_label.as_str()], order[cat.social_label.as_str()]));
        *cells.entry(key).or_insert(0) += 1;
    }
    if !any {
        return Err(AnalysisError::NoLabeledPieces);
    }

    let mut rows_present: Vec<usize> = cells.keys().map(|(r, _)| *r).collect();
    rows_present.sort();
    rows_present.dedup();
    let mut cols_present: Vec<(usize, usize)> = cells.keys().map(|(_, c)| *c).collect();
    cols_present.sort();
    cols_present.dedup();

    let row_names = ["fake", "real"];
    let counts = rows_present
        .iter()
        .map(|&r| {
            cols_present
                .iter()
                .map(|&c| cells.get(&(r, c)).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    Ok(ContingencyTable {
        row_labels: rows_present.iter().map(|&r| row_names[r].to_string()).collect(),
        col_labels: cols_present
            .iter()
            .map(|&(p, s)| format!("{}|{}", adapter.category_names[p], adapter.category_names[s]))
            .collect(),
        counts,
    })
}

/// Publisher-emotion x social-emotion table for the pieces of one veracity
/// class, the layout behind the distribution heatmaps. Rows and columns
/// follow adapter coordinate order, restricted to the whitelist when given.
pub fn heatmap_table(
    dataset: &Dataset,
    adapter: &ClassifierAdapter,
    bundle: &ResourceBundle,
    veracity: Label,
    category_whitelist: Option<&HashSet<String>>,
) -> Result<ContingencyTable, AnalysisError> {
    let names: Vec<String> = adapter
        .category_names
        .iter()
        .filter(|n| category_whitelist.is_none_or(|w| w.contains(*n)))
        .cloned()
        .collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

    let mut counts = vec![vec![0u64; names.len()]; names.len()];
    for piece in &dataset.pieces {
        if piece.label != Some(veracity) {
            continue;
        }
        let cat = dual_emotion_category(piece, adapter, bundle)?;
        if let (Some(&r), Some(&c)) = (
            index.get(cat.publisher_label.as_str()),
            index.get(cat.social_label.as_str()),
        ) {
            counts[r][c] += 1;
        }
    }
    Ok(ContingencyTable {
        row_labels: names.clone(),
        col_labels: names,
        counts,
    })
}

/// Pearson chi-square independence test. Zero-margin rows and columns are
/// dropped before expected counts; degrees of freedom are computed after
/// dropping. No Yates correction.
pub fn chi_square(table: &ContingencyTable) -> Result<ChiSquareResult, AnalysisError> {
    let row_keep: Vec<usize> = (0..table.counts.len())
        .filter(|&r| table.counts[r].iter().sum::<u64>() > 0)
        .collect();
    let n_cols = table.col_labels.len();
    let col_keep: Vec<usize> = (0..n_cols)
        .filter(|&c| table.counts.iter().map(|row| row[c]).sum::<u64>() > 0)
        .collect();
    if row_keep.len() < 2 || col_keep.len() < 2 {
        return Err(AnalysisError::DegenerateTable {
            rows: row_keep.len(),
            cols: col_keep.len(),
        });
    }

    let row_totals: Vec<f64> = row_keep
        .iter()
        .map(|&r| col_keep.iter().map(|&c| table.counts[r][c] as f64).sum())
        .collect();
    let col_totals: Vec<f64> = col_keep
        .iter()
        .map(|&c| row_keep.iter().map(|&r| table.counts[r][c] as f64).sum())
        .collect();
    let grand: f64 = row_totals.iter().sum();

    let mut statistic = 0.0;
    for (i, &r) in row_keep.iter().enumerate() {
        for (j, &c) in col_keep.iter().enumerate() {
            let expected = row_totals[i] * col_totals[j] / grand;
            let diff = table.counts[r][c] as f64 - expected;
            statistic += diff * diff / expected;
        }
    }

    let dof = (row_keep.len() - 1) * (col_keep.len() - 1);
    let mut critical_values = BTreeMap::new();
    let mut reject_at = BTreeMap::new();
    if (1..=100).contains(&dof) {
        let c95 = CHI2_CRITICAL_95[dof - 1];
        let c99 = CHI2_CRITICAL_99[dof - 1];
        critical_values.insert("0.95".to_string(), c95);
        critical_values.insert("0.99".to_string(), c99);
        reject_at.insert("0.95".to_string(), statistic > c95);
        reject_at.insert("0.99".to_string(), statistic > c99);
    }
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: dof,
        critical_values,
        reject_at,
    })
}

/// Rescale every row of a heatmap table to sum to 100; all-zero rows stay
/// zero and are flagged.
pub fn heatmap_rows(table: &ContingencyTable) -> HeatmapData {
    let mut rows = Vec::with_capacity(table.counts.len());
    let mut zero_rows = Vec::with_capacity(table.counts.len());
    for counts in &table.counts {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            rows.push(vec![0.0; counts.len()]);
            zero_rows.push(true);
        } else {
            rows.push(counts.iter().map(|&c| 100.0 * c as f64 / total as f64).collect());
            zero_rows.push(false);
        }
    }
    HeatmapData {
        row_labels: table.row_labels.clone(),
        col_labels: table.col_labels.clone(),
        rows,
        zero_rows,
    }
}

/// Upper critical values of the chi-square distribution at confidence 0.95,
/// degrees of freedom 1..=100.
pub const CHI2_CRITICAL_95: [f64; 100] = [
    3.841459, 5.991465, 7.814728, 9.487729, 11.070498,
    12.591587, 14.067140, 15.507313, 16.918978, 18.307038,
    19.675138, 21.026070, 22.362032, 23.684791, 24.995790,
    26.296228, 27.587112, 28.869299, 30.143527, 31.410433,
    32.670573, 33.924438, 35.172462, 36.415029, 37.652484,
    38.885139, 40.113272, 41.337138, 42.556968, 43.772972,
    44.985343, 46.194260, 47.399884, 48.602367, 49.801850,
    50.998460, 52.192320, 53.383541, 54.572228, 55.758479,
    56.942387, 58.124038, 59.303512, 60.480887, 61.656233,
    62.829620, 64.001112, 65.170769, 66.338649, 67.504807,
    68.669294, 69.832160, 70.993453, 72.153216, 73.311493,
    74.468324, 75.623748, 76.777803, 77.930524, 79.081944,
    80.232098, 81.381015, 82.528727, 83.675261, 84.820645,
    85.964907, 87.108072, 88.250164, 89.391208, 90.531225,
    91.670239, 92.808270, 93.945340, 95.081467, 96.216671,
    97.350970, 98.484383, 99.616927, 100.748619, 101.879474,
    103.009509, 104.138738, 105.267177, 106.394840, 107.521741,
    108.647893, 109.773309, 110.898003, 112.021986, 113.145270,
    114.267868, 115.389790, 116.511047, 117.631651, 118.751612,
    119.870939, 120.989644, 122.107735, 123.225221, 124.342113,
];

/// Upper critical values of the chi-square distribution at confidence 0.99,
/// degrees of freedom 1..=100.
pub const CHI2_CRITICAL_99: [f64; 100] = [
    6.634897, 9.210340, 11.344867, 13.276704, 15.086272,
    16.811894, 18.475307, 20.090235, 21.665994, 23.209251,
    24.724970, 26.216967, 27.688250, 29.141238, 30.577914,
    31.999927, 33.408664, 34.805306, 36.190869, 37.566235,
    38.932173, 40.289360, 41.638398, 42.979820, 44.314105,
    45.641683, 46.962942, 48.278236, 49.587884, 50.892181,
    52.191395, 53.485772, 54.775540, 56.060909, 57.342073,
    58.619215, 59.892500, 61.162087, 62.428121, 63.690740,
    64.950071, 66.206236, 67.459348, 68.709513, 69.956832,
    71.201400, 72.443307, 73.682639, 74.919474, 76.153891,
    77.385962, 78.615756, 79.843338, 81.068772, 82.292117,
    83.513430, 84.732766, 85.950176, 87.165711, 88.379419,
    89.591344, 90.801532, 92.010024, 93.216860, 94.422079,
    95.625719, 96.827816, 98.028403, 99.227515, 100.425184,
    101.621441, 102.816314, 104.009834, 105.202028, 106.392923,
    107.582545, 108.770919, 109.958069, 111.144019, 112.328793,
    113.512410, 114.694895, 115.876266, 117.056544, 118.235749,
    119.413900, 120.591015, 121.767111, 122.942207, 124.116319,
    125.289463, 126.461656, 127.632913, 128.803249, 129.972679,
    131.141217, 132.308877, 133.475672, 134.641617, 135.806723,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Comment;
    use crate::resources::{load_resources, Language};
    use proptest::prelude::*;
    use std::path::Path;

    fn en_bundle() -> ResourceBundle {
        load_resources(
            &Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/resources/en"),
            Language::En,
        )
        .unwrap()
    }

    fn appendix_adapter() -> ClassifierAdapter {
        ClassifierAdapter::precomputed(vec![
            "angry".into(),
            "disgusting".into(),
            "happy".into(),
            "none".into(),
        ])
    }

    fn piece_with_probs(
        content_probs: Vec<f64>,
        comment_probs: Vec<Vec<f64>>,
    ) -> NewsPiece {
        NewsPiece {
            id: "p".into(),
            content: "content".into(),
            language: Language::En,
            label: Some(Label::Fake),
            timestamp: 0,
            comments: (0..comment_probs.len())
                .map(|i| Comment {
                    text: format!("c{i}"),
                    timestamp: i as i64,
                })
                .collect(),
            publisher_emotion_probs: Some(content_probs),
            comment_emotion_probs: Some(comment_probs),
            detector_embedding: None,
        }
    }

    #[test]
    fn soft_voting_worked_example() {
        let bundle = en_bundle();
        let adapter = appendix_adapter();
        let piece = piece_with_probs(
            vec![0.3, 0.1, 0.0, 0.6],
            vec![vec![0.8, 0.1, 0.0, 0.1], vec![0.6, 0.3, 0.1, 0.0]],
        );
        let cat = dual_emotion_category(&piece, &adapter, &bundle).unwrap();
        assert_eq!(cat.publisher_label, "none");
        assert_eq!(cat.social_label, "angry");
    }

    #[test]
    fn single_comment_matching_content_resonates() {
        let bundle = en_bundle();
        let adapter = appendix_adapter();
        let piece = piece_with_probs(vec![0.3, 0.1, 0.0, 0.6], vec![vec![0.3, 0.1, 0.0, 0.6]]);
        let cat = dual_emotion_category(&piece, &adapter, &bundle).unwrap();
        assert_eq!(cat.publisher_label, cat.social_label);
    }

    #[test]
    fn zero_comments_vote_none() {
        let bundle = en_bundle();
        let adapter = appendix_adapter();
        let piece = piece_with_probs(vec![0.9, 0.1, 0.0, 0.0], vec![]);
        let cat = dual_emotion_category(&piece, &adapter, &bundle).unwrap();
        assert_eq!(cat.publisher_label, "angry");
        assert_eq!(cat.social_label, "none");
    }

    #[test]
    fn argmax_ties_take_lowest_index() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.4, 0.4, 0.1]), 1);
    }

    #[test]
    fn contingency_counts_by_hand() {
        let bundle = en_bundle();
        let adapter = appendix_adapter();
        let mut pieces = vec![
            piece_with_probs(vec![1.0, 0.0, 0.0, 0.0], vec![vec![1.0, 0.0, 0.0, 0.0]]),
            piece_with_probs(vec![1.0, 0.0, 0.0, 0.0], vec![vec![1.0, 0.0, 0.0, 0.0]]),
            piece_with_probs(vec![0.0, 0.0, 1.0, 0.0], vec![vec![1.0, 0.0, 0.0, 0.0]]),
            piece_with_probs(vec![0.0, 0.0, 1.0, 0.0], vec![vec![0.0, 0.0, 1.0, 0.0]]),
        ];
        pieces[2].label = Some(Label::Real);
        pieces[3].label = Some(Label::Real);
        for (i, p) in pieces.iter_mut().enumerate() {
            p.id = format!("p{i}");
        }
        let ds = Dataset { pieces };
        let table = contingency_table(&ds, &adapter, &bundle, None).unwrap();
        assert_eq!(table.row_labels, ["fake", "real"]);
        assert_eq!(table.col_labels, ["angry|angry", "happy|angry", "happy|happy"]);
        assert_eq!(table.counts, vec![vec![2, 0, 0], vec![0, 1, 1]]);
    }

    #[test]
    fn single_class_dataset_gives_single_row() {
        let bundle = en_bundle();
        let adapter = appendix_adapter();
        let mut p = piece_with_probs(vec![1.0, 0.0, 0.0, 0.0], vec![]);
        p.id = "only".into();
        let ds = Dataset { pieces: vec![p] };
        let table = contingency_table(&ds, &adapter, &bundle, None).unwrap();
        assert_eq!(table.row_labels, ["fake"]);
        assert_eq!(table.counts.len(), 1);
    }

    #[test]
    fn whitelist_restricts_pairs() {
        let bundle = en_bundle();
        let adapter = appendix_adapter();
        let mut pieces = vec![
            piece_with_probs(vec![1.0, 0.0, 0.0, 0.0], vec![vec![1.0, 0.0, 0.0, 0.0]]),
            piece_with_probs(vec![0.0, 1.0, 0.0, 0.0], vec![vec![1.0, 0.0, 0.0, 0.0]]),
            piece_with_probs(vec![0.0, 0.0, 0.0, 1.0], vec![]),
        ];
        pieces[1].label = Some(Label::Real);
        pieces[2].label = Some(Label::Real);
        for (i, p) in pieces.iter_mut().enumerate() {
            p.id = format!("p{i}");
        }
        let ds = Dataset { pieces };
        let white: HashSet<String> = ["angry".to_string(), "none".to_string()].into();
        let table = contingency_table(&ds, &adapter, &bundle, Some(&white)).unwrap();
        // the disgusting-publisher piece drops out
        assert_eq!(table.col_labels, ["angry|angry", "none|none"]);
        assert_eq!(table.total(), 2);
    }

    #[test]
    fn uniform_table_has_zero_statistic() {
        let table = ContingencyTable {
            row_labels: vec!["fake".into(), "real".into()],
            col_labels: vec!["a".into(), "b".into()],
            counts: vec![vec![5, 5], vec![5, 5]],
        };
        let r = chi_square(&table).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.degrees_of_freedom, 1);
        assert!(!r.reject_at["0.95"]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let table = ContingencyTable {
            row_labels: vec!["fake".into(), "real".into()],
            col_labels: vec!["a".into(), "b".into()],
            counts: vec![vec![10, 20], vec![20, 10]],
        };
        let r = chi_square(&table).unwrap();
        assert!((r.statistic - 20.0 / 3.0).abs() < 1e-9, "{}", r.statistic);
        assert_eq!(r.degrees_of_freedom, 1);
        assert_eq!(r.critical_values["0.95"], 3.841459);
        assert!(r.reject_at["0.95"]);
        assert!(r.reject_at["0.99"], "20/3 also clears 6.635");
    }

    #[test]
    fn zero_margins_are_dropped() {
        let table = ContingencyTable {
            row_labels: vec!["fake".into(), "real".into(), "ghost".into()],
            col_labels: vec!["a".into(), "b".into(), "empty".into()],
            counts: vec![vec![10, 20, 0], vec![20, 10, 0], vec![0, 0, 0]],
        };
        let r = chi_square(&table).unwrap();
        assert!((r.statistic - 20.0 / 3.0).abs() < 1e-9);
        assert_eq!(r.degrees_of_freedom, 1);
    }

    #[test]
    fn degenerate_table_errors() {
        let table = ContingencyTable {
            row_labels: vec!["fake".into()],
            col_labels: vec!["a".into(), "b".into()],
            counts: vec![vec![3, 4]],
        };
        assert!(matches!(
            chi_square(&table),
            Err(AnalysisError::DegenerateTable { .. })
        ));
    }

    #[test]
    fn heatmap_rows_rescale_to_hundred() {
        let table = ContingencyTable {
            row_labels: vec!["joyful".into(), "sad".into()],
            col_labels: vec!["joyful".into(), "sad".into()],
            counts: vec![vec![10, 30], vec![0, 0]],
        };
        let h = heatmap_rows(&table);
        assert_eq!(h.rows[0], vec![25.0, 75.0]);
        assert_eq!(h.rows[1], vec![0.0, 0.0]);
        assert_eq!(h.zero_rows, vec![false, true]);
    }

    proptest! {
        #[test]
        fn statistic_invariant_under_permutation(
            cells in proptest::collection::vec(1u64..40, 6),
        ) {
            let table = ContingencyTable {
                row_labels: vec!["r0".into(), "r1".into()],
                col_labels: vec!["c0".into(), "c1".into(), "c2".into()],
                counts: vec![cells[..3].to_vec(), cells[3..].to_vec()],
            };
            let base = chi_square(&table).unwrap();

            let permuted = ContingencyTable {
                row_labels: vec!["r1".into(), "r0".into()],
                col_labels: vec!["c2".into(), "c0".into(), "c1".into()],
                counts: vec![
                    vec![cells[5], cells[3], cells[4]],
                    vec![cells[2], cells[0], cells[1]],
                ],
            };
            let perm = chi_square(&permuted).unwrap();
            prop_assert!((base.statistic - perm.statistic).abs() < 1e-9);
            prop_assert_eq!(base.degrees_of_freedom, perm.degrees_of_freedom);
        }

        #[test]
        fn statistic_scales_linearly_with_k(
            cells in proptest::collection::vec(1u64..30, 4),
            k in 2u64..6,
        ) {
            let table = ContingencyTable {
                row_labels: vec!["r0".into(), "r1".into()],
                col_labels: vec!["c0".into(), "c1".into()],
                counts: vec![cells[..2].to_vec(), cells[2..].to_vec()],
            };
            let scaled = ContingencyTable {
                row_labels: table.row_labels.clone(),
                col_labels: table.col_labels.clone(),
                counts: table.counts.iter().map(|r| r.iter().map(|&c| c * k).collect()).collect(),
            };
            let a = chi_square(&table).unwrap();
            let b = chi_square(&scaled).unwrap();
            prop_assert!((b.statistic - k as f64 * a.statistic).abs() < 1e-7 * (1.0 + b.statistic));
        }

        #[test]
        fn category_invariant_under_rescaling(
            probs in proptest::collection::vec(0.01f64..1.0, 4),
            scale in 0.1f64..5.0,
        ) {
            let bundle = en_bundle();
            let adapter = appendix_adapter();
            let scaled: Vec<f64> = probs.iter().map(|p| p * scale).collect();
            let a = dual_emotion_category(&piece_with_probs(probs, vec![]), &adapter, &bundle).unwrap();
            let b = dual_emotion_category(&piece_with_probs(scaled, vec![]), &adapter, &bundle).unwrap();
            prop_assert_eq!(a.publisher_label, b.publisher_label);
        }

        #[test]
        fn heatmap_rows_sum_to_hundred(
            cells in proptest::collection::vec(0u64..50, 9),
        ) {
            let table = ContingencyTable {
                row_labels: vec!["a".into(), "b".into(), "c".into()],
                col_labels: vec!["a".into(), "b".into(), "c".into()],
                counts: vec![cells[..3].to_vec(), cells[3..6].to_vec(), cells[6..].to_vec()],
            };
            let h = heatmap_rows(&table);
            for (row, zero) in h.rows.iter().zip(&h.zero_rows) {
                let sum: f64 = row.iter().sum();
                if *zero {
                    prop_assert_eq!(sum, 0.0);
                } else {
                    prop_assert!((sum - 100.0).abs() < 1e-9);
                }
            }
        }
    }
}
