//! Python bindings exposing the dual emotion extractor, the soft-voted
//! category analysis and the chi-square test.

// the #[pymethods] expansion trips this lint on its own glue
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyAny, PyDict, PyList};
use std::collections::BTreeMap;
use std::path::PathBuf;

use dual_emotion::analysis;
use dual_emotion::analysis::ContingencyTable;
use dual_emotion::dataset::{Comment, Label, NewsPiece};
use dual_emotion::features::{
    dual_emotion_features, emocred_features, emoratio, publisher_emotion, ClassifierAdapter,
    ExtractConfig, FeatureDims, SentimentScorer,
};
use dual_emotion::resources::{load_resources, Language, ResourceBundle};
use dual_emotion::textproc::{strip_emoticons, tokenize};

fn parse_language(lang: &str) -> PyResult<Language> {
    Language::parse(lang).ok_or_else(|| PyValueError::new_err(format!("unknown language '{lang}'")))
}

/// Loaded emotion resources for one language.
#[pyclass(name = "EmotionResources")]
struct PyEmotionResources {
    bundle: ResourceBundle,
}

#[pymethods]
impl PyEmotionResources {
    #[new]
    fn new(dir: PathBuf, lang: &str) -> PyResult<Self> {
        let language = parse_language(lang)?;
        let bundle = load_resources(&dir, language).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(PyEmotionResources { bundle })
    }

    #[getter]
    fn language(&self) -> String {
        self.bundle.language.as_str().to_string()
    }

    #[getter]
    fn emotions(&self) -> Vec<String> {
        self.bundle.emotions.clone()
    }

    #[getter]
    fn emotion_count(&self) -> usize {
        self.bundle.emotion_count()
    }

    /// Tokenize after emoticon stripping, exactly as the extractor does.
    fn tokenize(&self, text: &str) -> Vec<String> {
        let cleaned = strip_emoticons(text, &self.bundle);
        tokenize(&cleaned, self.bundle.language, &self.bundle).tokens
    }

    fn __repr__(&self) -> String {
        format!(
            "EmotionResources(language='{}', emotions={})",
            self.bundle.language,
            self.bundle.emotion_count()
        )
    }
}

fn comment_from_any(obj: &Bound<'_, PyAny>) -> PyResult<Comment> {
    if let Ok(dict) = obj.downcast::<PyDict>() {
        let text: String = dict
            .get_item("text")?
            .ok_or_else(|| PyValueError::new_err("comment needs a 'text' key"))?
            .extract()?;
        let timestamp: i64 = match dict.get_item("timestamp")? {
            Some(v) => v.extract()?,
            None => 0,
        };
        return Ok(Comment { text, timestamp });
    }
    if let Ok((text, timestamp)) = obj.extract::<(String, i64)>() {
        return Ok(Comment { text, timestamp });
    }
    let text: String = obj.extract()?;
    Ok(Comment { text, timestamp: 0 })
}

fn piece_from_dict(dict: &Bound<'_, PyDict>, language: Language) -> PyResult<NewsPiece> {
    let content: String = dict
        .get_item("content")?
        .ok_or_else(|| PyValueError::new_err("piece needs a 'content' key"))?
        .extract()?;
    let id: String = match dict.get_item("id")? {
        Some(v) => v.extract()?,
        None => "piece".to_string(),
    };
    let timestamp: i64 = match dict.get_item("timestamp")? {
        Some(v) => v.extract()?,
        None => 0,
    };
    let label = match dict.get_item("label")? {
        Some(v) if !v.is_none() => {
            let s: String = v.extract()?;
            Some(Label::parse(&s).ok_or_else(|| PyValueError::new_err(format!("unknown label '{s}'")))?)
        }
        _ => None,
    };
    let comments = match dict.get_item("comments")? {
        Some(v) if !v.is_none() => {
            let list = v.downcast::<PyList>()?;
            list.iter().map(|item| comment_from_any(&item)).collect::<PyResult<Vec<_>>>()?
        }
        _ => Vec::new(),
    };
    let publisher_emotion_probs = match dict.get_item("publisher_emotion_probs")? {
        Some(v) if !v.is_none() => Some(v.extract::<Vec<f64>>()?),
        _ => None,
    };
    let comment_emotion_probs = match dict.get_item("comment_emotion_probs")? {
        Some(v) if !v.is_none() => Some(v.extract::<Vec<Vec<f64>>>()?),
        _ => None,
    };
    let detector_embedding = match dict.get_item("detector_embedding")? {
        Some(v) if !v.is_none() => Some(v.extract::<Vec<f64>>()?),
        _ => None,
    };
    Ok(NewsPiece {
        id,
        content,
        language,
        label,
        timestamp,
        comments,
        publisher_emotion_probs,
        comment_emotion_probs,
        detector_embedding,
    })
}

/// Dual emotion feature extractor bound to one resource bundle.
#[pyclass(name = "Extractor")]
struct PyExtractor {
    bundle: ResourceBundle,
    adapter: ClassifierAdapter,
    config: ExtractConfig,
}

#[pymethods]
impl PyExtractor {
    /// Args: resources; adapter "lexicon_vote" or "precomputed";
    /// category_names for the precomputed adapter; window, comments_limit;
    /// sentiment "lexicon" or "fourway" (defaults by language).
    #[new]
    #[pyo3(signature = (resources, adapter="lexicon_vote", category_names=None, window=2, comments_limit=100, sentiment=None))]
    fn new(
        resources: &PyEmotionResources,
        adapter: &str,
        category_names: Option<Vec<String>>,
        window: usize,
        comments_limit: usize,
        sentiment: Option<&str>,
    ) -> PyResult<Self> {
        let bundle = resources.bundle.clone();
        let adapter = match adapter {
            "lexicon_vote" => ClassifierAdapter::lexicon_vote(&bundle),
            "precomputed" => {
                let names = category_names
                    .ok_or_else(|| PyValueError::new_err("precomputed adapter needs category_names"))?;
                ClassifierAdapter::precomputed(names)
            }
            other => return Err(PyValueError::new_err(format!("unknown adapter '{other}'"))),
        };
        let mut config = ExtractConfig::for_language(bundle.language);
        config.window = window;
        config.comments_limit = comments_limit;
        if let Some(s) = sentiment {
            config.sentiment = SentimentScorer::parse(s)
                .ok_or_else(|| PyValueError::new_err(format!("unknown sentiment scorer '{s}'")))?;
        }
        Ok(PyExtractor {
            bundle,
            adapter,
            config,
        })
    }

    /// Publisher emotion dimension `d`.
    #[getter]
    fn dimension(&self) -> usize {
        FeatureDims::for_extraction(&self.bundle, &self.adapter, &self.config).d()
    }

    #[getter]
    fn category_names(&self) -> Vec<String> {
        self.adapter.category_names.clone()
    }

    /// Publisher emotion vector of a text.
    #[pyo3(signature = (text, probs=None))]
    fn publisher_emotion(&self, text: &str, probs: Option<Vec<f64>>) -> PyResult<Vec<f64>> {
        publisher_emotion(text, probs.as_deref(), &self.bundle, &self.adapter, &self.config)
            .map(|v| v.values)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Full dual emotion features of a piece dict with keys `content`,
    /// `comments` and optionally `publisher_emotion_probs`,
    /// `comment_emotion_probs`, `id`, `label`, `timestamp`.
    fn dual_features<'py>(&self, py: Python<'py>, piece: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyDict>> {
        let piece = piece_from_dict(piece, self.bundle.language)?;
        let dual = dual_emotion_features(&piece, &self.bundle, &self.adapter, &self.config)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        let d = dual.publisher.len();
        let out = PyDict::new_bound(py);
        out.set_item("dual", dual.flat())?;
        out.set_item("publisher", dual.publisher.values.clone())?;
        out.set_item("social_mean", dual.social.mean_pool.clone())?;
        out.set_item("social_max", dual.social.max_pool.clone())?;
        out.set_item("gap_mean", dual.gap[..d].to_vec())?;
        out.set_item("gap_max", dual.gap[d..].to_vec())?;
        Ok(out)
    }

    /// (publisher, social) soft-voted category labels of a piece dict.
    fn dual_emotion_category(&self, piece: &Bound<'_, PyDict>) -> PyResult<(String, String)> {
        let piece = piece_from_dict(piece, self.bundle.language)?;
        let cat = analysis::dual_emotion_category(&piece, &self.adapter, &self.bundle)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok((cat.publisher_label, cat.social_label))
    }

    /// Smoothed negative/positive sentiment word ratio of a text.
    fn emoratio(&self, text: &str) -> f64 {
        let cleaned = strip_emoticons(text, &self.bundle);
        let tokens = tokenize(&cleaned, self.bundle.language, &self.bundle);
        emoratio(&tokens, &self.bundle)
    }

    /// Modifier-free frequency and intensity-frequency features (length 2*d_e).
    fn emocred(&self, text: &str) -> Vec<f64> {
        let cleaned = strip_emoticons(text, &self.bundle);
        let tokens = tokenize(&cleaned, self.bundle.language, &self.bundle);
        emocred_features(&tokens, &self.bundle)
    }
}

/// Pearson chi-square independence test on a counts matrix.
///
/// Returns a dict with `statistic`, `dof`, `critical_values` and `reject_at`
/// (the latter two keyed by "0.95" and "0.99" for dof 1..=100).
#[pyfunction]
fn chi_square<'py>(py: Python<'py>, counts: Vec<Vec<u64>>) -> PyResult<Bound<'py, PyDict>> {
    if counts.is_empty() || counts.iter().any(|r| r.len() != counts[0].len()) {
        return Err(PyValueError::new_err("counts must be a nonempty rectangular matrix"));
    }
    let table = ContingencyTable {
        row_labels: (0..counts.len()).map(|i| format!("r{i}")).collect(),
        col_labels: (0..counts[0].len()).map(|i| format!("c{i}")).collect(),
        counts,
    };
    let result = analysis::chi_square(&table).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = PyDict::new_bound(py);
    out.set_item("statistic", result.statistic)?;
    out.set_item("dof", result.degrees_of_freedom)?;
    out.set_item("critical_values", result.critical_values.into_iter().collect::<BTreeMap<_, _>>())?;
    out.set_item("reject_at", result.reject_at.into_iter().collect::<BTreeMap<_, _>>())?;
    Ok(out)
}

#[pymodule]
fn dual_emotion_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEmotionResources>()?;
    m.add_class::<PyExtractor>()?;
    m.add_function(wrap_pyfunction!(chi_square, m)?)?;
    Ok(())
}
