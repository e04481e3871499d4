//! Command-line surface for the dual emotion toolkit: per-stage subcommands
//! plus a `pipeline` runner driven by a TOML config.

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;

use dual_emotion::analysis::{chi_square, contingency_table, heatmap_rows, heatmap_table};
use dual_emotion::classifier::{
    build_mlp, load_model, save_model, train, ClassWeightMode, TrainConfig,
};
use dual_emotion::dataset::{deduplicate, load_dataset, random_split, save_dataset, temporal_split, Dataset, DatasetSplit, Label};
use dual_emotion::features::ClassifierAdapter;
use dual_emotion::pipeline::{
    assemble_training_data, evaluate_split, extract_features, format_heatmap_csv, parse_ratios,
    read_feature_records, run_pipeline, write_feature_records, FeatureSelection, OptionsConfig,
    PipelineConfig,
};
use dual_emotion::resources::{load_resources, Language, ResourceBundle};
use dual_emotion::textproc::{strip_emoticons, tokenize};
use dual_emotion::features::{emocred_features, emoratio};

#[derive(Parser)]
#[command(name = "dual-emotion", version, about = "Dual emotion features for fake news detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// JSON Lines dataset, one news piece per line
    #[arg(long)]
    dataset: PathBuf,
    /// Per-language resource directory
    #[arg(long)]
    resources: PathBuf,
    /// Corpus language
    #[arg(long, value_parser = ["en", "zh"])]
    lang: String,
    /// Category adapter
    #[arg(long, default_value = "lexicon_vote", value_parser = ["lexicon_vote", "precomputed"])]
    adapter: String,
}

impl CorpusArgs {
    fn load(&self) -> Result<(Dataset, ResourceBundle, ClassifierAdapter, Language)> {
        let language = Language::parse(&self.lang).context("unknown language")?;
        let bundle = load_resources(&self.resources, language)?;
        let dataset = load_dataset(&self.dataset)?;
        let options = OptionsConfig {
            language: self.lang.clone(),
            seed: 42,
            window: 2,
            comments_limit: 100,
            adapter: self.adapter.clone(),
            category_names: None,
            sentiment: None,
        };
        let adapter = dual_emotion::pipeline::build_adapter(&options, &bundle, &dataset)?;
        Ok((dataset, bundle, adapter, language))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extract dual emotion features into a JSON Lines file
    Extract {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Output features file
        #[arg(long)]
        out: PathBuf,
        /// Left-context window for negation/degree modifiers
        #[arg(long, default_value_t = 2)]
        window: usize,
        /// Earliest-N comment cap
        #[arg(long, default_value_t = 100)]
        comments_limit: usize,
    },
    /// Chi-square test and dual-emotion-category heatmaps
    Analyze {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Output directory for chisq.json and heatmap_<class>.csv
        #[arg(long)]
        out: PathBuf,
        /// Restrict categories to this comma-separated list
        #[arg(long)]
        whitelist: Option<String>,
    },
    /// Produce a train/validation/test split
    Split {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "random", value_parser = ["random", "temporal"])]
        mode: String,
        #[arg(long, default_value = "3:1:1")]
        ratios: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Remove near-duplicate pieces of one label class
    Dedup {
        #[arg(long)]
        dataset: PathBuf,
        /// Deduplicated dataset output
        #[arg(long)]
        out: PathBuf,
        /// Cluster report JSON output
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        #[arg(long, default_value = "fake", value_parser = ["fake", "real", "unverified"])]
        label: String,
    },
    /// Train the feedforward classifier on extracted features
    Train {
        /// Features JSON Lines file from `extract`
        #[arg(long)]
        features_file: PathBuf,
        /// Split JSON from `split`
        #[arg(long)]
        split: PathBuf,
        /// Model output path
        #[arg(long)]
        out: PathBuf,
        /// Training history JSON output
        #[arg(long)]
        history: Option<PathBuf>,
        /// Feature subset to train on
        #[arg(long, default_value = "dual", value_parser = ["dual", "publisher", "social", "gap", "emoratio", "emocred"])]
        features: String,
        #[arg(long, default_value_t = 100)]
        epochs: usize,
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        #[arg(long, default_value_t = 32)]
        batch_size: usize,
        #[arg(long, default_value = "inverse", value_parser = ["none", "inverse"])]
        class_weights: String,
        #[arg(long, default_value_t = 10)]
        patience: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Hidden layer sizes, comma separated
        #[arg(long, default_value = "256,128,64,32")]
        hidden_dims: String,
    },
    /// Evaluate a trained model on the test portion of a split
    Eval {
        #[arg(long)]
        features_file: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Metrics JSON output
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "dual", value_parser = ["dual", "publisher", "social", "gap", "emoratio", "emocred"])]
        features: String,
    },
    /// Emit the Emoratio and EmoCred baseline features
    Baseline {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the configured stages end to end
    Pipeline {
        /// TOML pipeline config
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    match cli.command {
        Command::Extract {
            corpus,
            out,
            window,
            comments_limit,
        } => {
            let (dataset, bundle, adapter, language) = corpus.load()?;
            let mut config = dual_emotion::features::ExtractConfig::for_language(language);
            config.window = window;
            config.comments_limit = comments_limit;
            let records = extract_features(&dataset, &bundle, &adapter, &config)?;
            write_feature_records(&records, &out)?;
            println!("wrote {} feature records to {}", records.len(), out.display());
        }
        Command::Analyze {
            corpus,
            out,
            whitelist,
        } => {
            let (dataset, bundle, adapter, _) = corpus.load()?;
            let whitelist: Option<HashSet<String>> =
                whitelist.map(|w| w.split(',').map(|s| s.trim().to_string()).collect());
            fs::create_dir_all(&out)?;
            let table = contingency_table(&dataset, &adapter, &bundle, whitelist.as_ref())?;
            let result = chi_square(&table)?;
            fs::write(out.join("chisq.json"), serde_json::to_string_pretty(&result)?)?;
            println!(
                "chi-square statistic {:.3} at {} dof",
                result.statistic, result.degrees_of_freedom
            );
            for label in [Label::Fake, Label::Real] {
                let table = heatmap_table(&dataset, &adapter, &bundle, label, whitelist.as_ref())?;
                let heatmap = heatmap_rows(&table);
                fs::write(out.join(format!("heatmap_{label}.csv")), format_heatmap_csv(&heatmap))?;
            }
            println!("wrote chisq.json and heatmaps to {}", out.display());
        }
        Command::Split {
            dataset,
            out,
            mode,
            ratios,
            seed,
        } => {
            let ds = load_dataset(&dataset)?;
            let split = match mode.as_str() {
                "random" => random_split(&ds, parse_ratios(&ratios)?, seed)?,
                "temporal" => temporal_split(&ds)?,
                _ => unreachable!("clap validates"),
            };
            fs::write(&out, serde_json::to_string_pretty(&split)?)?;
            println!(
                "split {} pieces into {}/{}/{}",
                ds.len(),
                split.train.len(),
                split.validation.len(),
                split.test.len()
            );
        }
        Command::Dedup {
            dataset,
            out,
            report,
            threshold,
            label,
        } => {
            let ds = load_dataset(&dataset)?;
            let label = Label::parse(&label).context("unknown label")?;
            let (deduped, cluster_report) = deduplicate(&ds, label, threshold)?;
            save_dataset(&deduped, &out)?;
            if let Some(report_path) = report {
                fs::write(&report_path, serde_json::to_string_pretty(&cluster_report)?)?;
            }
            println!(
                "removed {} of {} pieces, retained {}",
                cluster_report.removed,
                ds.len(),
                cluster_report.retained
            );
        }
        Command::Train {
            features_file,
            split,
            out,
            history,
            features,
            epochs,
            lr,
            batch_size,
            class_weights,
            patience,
            seed,
            hidden_dims,
        } => {
            let records = read_feature_records(&features_file)?;
            let split: DatasetSplit = serde_json::from_str(&fs::read_to_string(&split)?)?;
            let selection = FeatureSelection::parse(&features).context("unknown feature selection")?;
            let hidden: Vec<usize> = hidden_dims
                .split(',')
                .map(|s| s.trim().parse::<usize>().context("bad hidden dimension"))
                .collect::<Result<_>>()?;
            let data = assemble_training_data(&records, &split, selection)?;
            let model = build_mlp(data.feature_spec, &hidden, data.classes, seed)?;
            let config = TrainConfig {
                epochs,
                learning_rate: lr,
                batch_size,
                class_weights: ClassWeightMode::parse(&class_weights).context("unknown class weights")?,
                patience,
                seed,
            };
            let [train_set, val_set, _] = &data.sets;
            let (model, train_history) = train(model, train_set, val_set, &config)?;
            save_model(&model, &out)?;
            if let Some(history_path) = history {
                fs::write(&history_path, serde_json::to_string_pretty(&train_history)?)?;
            }
            let last = train_history.last().context("no epochs ran")?;
            println!(
                "trained {} epochs, final loss {:.4}, model at {}",
                train_history.len(),
                last.train_loss,
                out.display()
            );
        }
        Command::Eval {
            features_file,
            split,
            model,
            out,
            features,
        } => {
            let records = read_feature_records(&features_file)?;
            let split: DatasetSplit = serde_json::from_str(&fs::read_to_string(&split)?)?;
            let model = load_model(&model)?;
            let selection = FeatureSelection::parse(&features).context("unknown feature selection")?;
            let metrics = evaluate_split(&model, &records, &split, selection)?;
            fs::write(&out, serde_json::to_string_pretty(&metrics)?)?;
            println!(
                "accuracy {:.4}, macro F1 {:.4}",
                metrics.accuracy, metrics.macro_f1
            );
        }
        Command::Baseline { corpus, out } => {
            let (dataset, bundle, _, language) = corpus.load()?;
            let mut lines = String::new();
            for piece in &dataset.pieces {
                let cleaned = strip_emoticons(&piece.content, &bundle);
                let tokens = tokenize(&cleaned, language, &bundle);
                let record = serde_json::json!({
                    "id": piece.id,
                    "label": piece.label,
                    "emoratio": emoratio(&tokens, &bundle),
                    "emocred": emocred_features(&tokens, &bundle),
                });
                lines.push_str(&serde_json::to_string(&record)?);
                lines.push('\n');
            }
            fs::write(&out, lines)?;
            println!("wrote baselines for {} pieces to {}", dataset.len(), out.display());
        }
        Command::Pipeline { config } => {
            let config = PipelineConfig::from_path(&config)?;
            let manifest = run_pipeline(&config)?;
            println!(
                "pipeline ran stages [{}] into {}",
                manifest.stages.join(", "),
                config.paths.out_dir.display()
            );
        }
    }
    Ok(())
}
