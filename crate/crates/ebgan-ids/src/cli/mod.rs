//! Command-line front end.
//!
//! Subcommands cover the full pipeline: `prepare` fits and persists
//! the encoding model, `train` runs one adversarial training per seed,
//! `evaluate` scores the test split and reports per-seed and mean
//! detection metrics, and `score` / `export-hist` / `export-recon`
//! emit the corresponding artifacts without metrics. Every output
//! lands under the configured output directory with a stable name, and
//! identical configurations produce byte-identical artifacts.

mod config;

pub use config::{RunConfig, ThresholdChoice};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::warn;
use ndarray::Array2;

use crate::dataset::{
    load_split, merge_rare_categories, AttackTaxonomy, MergedPartition, TrafficPartition,
};
use crate::detect::{
    evaluate, histogram, normalize_scores, score_batch, threshold_by_max_train,
    threshold_by_ratio, write_histogram_csv, write_reconstructions_csv, write_scores_csv,
    AnomalyScore, DetectionReport, Label, ThresholdMode,
};
use crate::ebgan::{save_discriminator, save_generator, train, Discriminator};
use crate::preprocess::{build_mask, fit_encoding_iter, EncodingModel};
use crate::{Error, Result};

pub const ENCODING_FILE: &str = "encoding.txt";
pub const PREPARE_SUMMARY_FILE: &str = "prepare_summary.txt";
pub const TRAIN_CONFIG_FILE: &str = "train_config.txt";
pub const REPORT_CSV_FILE: &str = "report.csv";
pub const REPORT_TXT_FILE: &str = "report.txt";

pub fn generator_file(seed: u64) -> String {
    format!("seed{seed}_generator.ckpt")
}
pub fn discriminator_file(seed: u64) -> String {
    format!("seed{seed}_discriminator.ckpt")
}
pub fn losses_file(seed: u64) -> String {
    format!("seed{seed}_losses.csv")
}
pub fn scores_file(seed: u64) -> String {
    format!("seed{seed}_scores.csv")
}
pub fn hist_file(seed: u64) -> String {
    format!("seed{seed}_hist.csv")
}
pub fn recon_file(seed: u64) -> String {
    format!("seed{seed}_recon.csv")
}

#[derive(Parser, Debug)]
#[command(
    name = "ebgan-ids",
    version,
    about = "Adversarially trained reconstruction-energy anomaly detector for NSL-KDD traffic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit the encoding model on the training data and persist it.
    Prepare(CommandArgs),
    /// Train one generator/discriminator pair per seed.
    Train(CommandArgs),
    /// Score the test data, threshold, and report per-seed and mean metrics.
    Evaluate(CommandArgs),
    /// Score the test data without thresholding.
    Score(CommandArgs),
    /// Export per-seed histograms of normalized test scores.
    ExportHist(CommandArgs),
    /// Export per-seed reconstructed records for external clustering.
    ExportRecon(CommandArgs),
}

/// Configuration sources shared by every subcommand: an optional
/// key=value file plus flag overrides mirroring its keys.
#[derive(Args, Debug, Default)]
pub struct CommandArgs {
    /// Key = value configuration file applied before flag overrides.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub train_data: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub test_data: Option<PathBuf>,
    /// Attack-name taxonomy file (defaults to the built-in table).
    #[arg(long, value_name = "FILE")]
    pub taxonomy: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    /// dos, probe, or u2r+r2l.
    #[arg(long, value_name = "CLASS")]
    pub attack_class: Option<String>,
    /// Comma-separated list, one training run per seed.
    #[arg(long, value_name = "LIST")]
    pub seeds: Option<String>,
    /// mse or l1.
    #[arg(long, value_name = "NAME")]
    pub criterion: Option<String>,
    /// ratio, max-train, or both.
    #[arg(long, value_name = "MODE")]
    pub threshold: Option<String>,
    /// c of the top-c% threshold, in percent.
    #[arg(long, value_name = "PERCENT")]
    pub ratio_percent: Option<f64>,
    /// Histogram bin count.
    #[arg(long, value_name = "N")]
    pub bins: Option<usize>,
    #[arg(long, value_name = "M")]
    pub margin: Option<f64>,
    #[arg(long, value_name = "WEIGHT")]
    pub lambda_pt: Option<f64>,
    #[arg(long, value_name = "LR")]
    pub learning_rate: Option<f64>,
    #[arg(long, value_name = "B1")]
    pub beta1: Option<f64>,
    #[arg(long, value_name = "B2")]
    pub beta2: Option<f64>,
    #[arg(long, value_name = "N")]
    pub batch_size: Option<usize>,
    #[arg(long, value_name = "N")]
    pub epochs: Option<usize>,
    #[arg(long, value_name = "N")]
    pub latent_dim: Option<usize>,
    /// Disable spectral normalization on the encoder (ablation).
    #[arg(long)]
    pub no_sn: bool,
    /// Feed the generator noise alone and rewrite whole records (ablation).
    #[arg(long)]
    pub noise_only_generator: bool,
    /// Comma-separated generator hidden widths.
    #[arg(long, value_name = "LIST")]
    pub gen_hidden: Option<String>,
    /// Comma-separated encoder hidden widths.
    #[arg(long, value_name = "LIST")]
    pub enc_hidden: Option<String>,
    #[arg(long, value_name = "N")]
    pub code_dim: Option<usize>,
    /// Comma-separated decoder hidden widths.
    #[arg(long, value_name = "LIST")]
    pub dec_hidden: Option<String>,
    #[arg(long, value_name = "SLOPE")]
    pub leaky_slope: Option<f64>,
}

impl CommandArgs {
    /// Defaults, then the config file, then flag overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        if let Some(v) = &self.train_data {
            config.train_data = v.clone();
        }
        if let Some(v) = &self.test_data {
            config.test_data = v.clone();
        }
        if let Some(v) = &self.taxonomy {
            config.taxonomy = Some(v.clone());
        }
        if let Some(v) = &self.output_dir {
            config.output_dir = v.clone();
        }
        // string-valued flags reuse the key=value parser so the file
        // format and the flags accept exactly the same spellings
        for (key, value) in [
            ("attack_class", &self.attack_class),
            ("seeds", &self.seeds),
            ("criterion", &self.criterion),
            ("threshold", &self.threshold),
            ("gen_hidden", &self.gen_hidden),
            ("enc_hidden", &self.enc_hidden),
            ("dec_hidden", &self.dec_hidden),
        ] {
            if let Some(v) = value {
                config.apply(key, v)?;
            }
        }
        if let Some(v) = self.ratio_percent {
            config.ratio_percent = v;
        }
        if let Some(v) = self.bins {
            config.bins = v;
        }
        if let Some(v) = self.margin {
            config.train.margin = v;
        }
        if let Some(v) = self.lambda_pt {
            config.train.lambda_pt = v;
        }
        if let Some(v) = self.learning_rate {
            config.train.learning_rate = v;
        }
        if let Some(v) = self.beta1 {
            config.train.beta1 = v;
        }
        if let Some(v) = self.beta2 {
            config.train.beta2 = v;
        }
        if let Some(v) = self.batch_size {
            config.train.batch_size = v;
        }
        if let Some(v) = self.epochs {
            config.train.epochs = v;
        }
        if let Some(v) = self.latent_dim {
            config.train.latent_dim = v;
        }
        if self.no_sn {
            config.train.sn_enabled = false;
        }
        if self.noise_only_generator {
            config.train.noise_only_generator = true;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Entry point used by the binary: resolve the configuration and
/// dispatch. Output goes to stdout; diagnostics go through `log`.
pub fn run(cli: &Cli) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    run_with_output(cli, &mut stdout)
}

/// [`run`] with a caller-supplied sink for printed output.
pub fn run_with_output(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Prepare(args) => cmd_prepare(&args.resolve()?, out),
        Command::Train(args) => cmd_train(&args.resolve()?, out),
        Command::Evaluate(args) => cmd_evaluate(&args.resolve()?, out),
        Command::Score(args) => cmd_score(&args.resolve()?, out),
        Command::ExportHist(args) => cmd_export_hist(&args.resolve()?, out),
        Command::ExportRecon(args) => cmd_export_recon(&args.resolve()?, out),
    }
}

fn load_taxonomy(config: &RunConfig) -> Result<AttackTaxonomy> {
    match &config.taxonomy {
        Some(path) => AttackTaxonomy::from_file(path),
        None => Ok(AttackTaxonomy::builtin()),
    }
}

fn encoding_path(config: &RunConfig) -> PathBuf {
    config.output_dir.join(ENCODING_FILE)
}

fn load_encoding_artifact(config: &RunConfig) -> Result<EncodingModel> {
    let path = encoding_path(config);
    if !path.exists() {
        return Err(Error::Artifact(format!(
            "missing encoding artifact {}; run `prepare` first",
            path.display()
        )));
    }
    EncodingModel::load(&path)
}

fn load_discriminator_for_seed(config: &RunConfig, seed: u64) -> Result<Discriminator> {
    let path = config.output_dir.join(discriminator_file(seed));
    if !path.exists() {
        return Err(Error::Artifact(format!(
            "missing checkpoint {}; run `train` first",
            path.display()
        )));
    }
    crate::ebgan::load_discriminator(&path)
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    body(&mut writer)?;
    writer.flush()?;
    Ok(())
}

/// Encoded test split: normal rows first, then the configured attack
/// class, with matching labels.
struct TestSet {
    x: Array2<f64>,
    labels: Vec<Label>,
}

fn load_test_set(
    config: &RunConfig,
    model: &EncodingModel,
    taxonomy: &AttackTaxonomy,
) -> Result<TestSet> {
    let partition = merge_rare_categories(load_split(config.require_test_data()?, taxonomy)?);
    let malicious = partition.bucket(config.attack_class);
    if partition.normal.is_empty() && malicious.is_empty() {
        return Err(Error::Parse(format!(
            "test data contains neither normal nor {} records",
            config.attack_class
        )));
    }
    if malicious.is_empty() {
        warn!(
            "test data contains no {} records; malicious metrics will be empty",
            config.attack_class
        );
    }
    let mut records = Vec::with_capacity(partition.normal.len() + malicious.len());
    let mut labels = Vec::with_capacity(records.capacity());
    for r in &partition.normal {
        records.push(r.clone());
        labels.push(Label::Normal);
    }
    for r in malicious {
        records.push(r.clone());
        labels.push(Label::Malicious);
    }
    Ok(TestSet {
        x: model.encode_batch(&records),
        labels,
    })
}

fn load_train_partition(config: &RunConfig, taxonomy: &AttackTaxonomy) -> Result<MergedPartition> {
    Ok(merge_rare_categories(load_split(
        config.require_train_data()?,
        taxonomy,
    )?))
}

fn cmd_prepare(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let taxonomy = load_taxonomy(config)?;
    let partition: TrafficPartition = load_split(config.require_train_data()?, &taxonomy)?;
    let model = fit_encoding_iter(&mut partition.iter_all())?;

    std::fs::create_dir_all(&config.output_dir)?;
    model.save(&encoding_path(config))?;

    let mut summary = String::new();
    summary.push_str(&format!("records {}\n", partition.total()));
    summary.push_str(&format!("encoded_dim {}\n", model.encoded_dim()));
    summary.push_str(&format!("normal {}\n", partition.normal.len()));
    for category in crate::dataset::AttackCategory::ATTACKS {
        summary.push_str(&format!(
            "{} {}\n",
            category.as_str(),
            partition.attacks[&category].len()
        ));
    }
    write_file(&config.output_dir.join(PREPARE_SUMMARY_FILE), |w| {
        w.write_all(summary.as_bytes())?;
        Ok(())
    })?;
    out.write_all(summary.as_bytes())?;

    if model.encoded_dim() != 121 {
        warn!(
            "encoded dimension {} differs from the reference value 121",
            model.encoded_dim()
        );
    }
    Ok(())
}

fn cmd_train(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let model = load_encoding_artifact(config)?;
    let taxonomy = load_taxonomy(config)?;
    let partition = load_train_partition(config, &taxonomy)?;
    if partition.normal.is_empty() {
        return Err(Error::Parse("training data contains no normal records".into()));
    }
    let malicious_records = partition.bucket(config.attack_class);
    if malicious_records.is_empty() {
        return Err(Error::Parse(format!(
            "training data contains no {} records",
            config.attack_class
        )));
    }
    let normal = model.encode_batch(&partition.normal);
    let malicious = model.encode_batch(malicious_records);
    let mask = build_mask(config.attack_class, &model);

    std::fs::create_dir_all(&config.output_dir)?;
    write_file(&config.output_dir.join(TRAIN_CONFIG_FILE), |w| {
        w.write_all(config.render().as_bytes())?;
        Ok(())
    })?;

    for &seed in &config.seeds {
        let mut train_config = config.train.clone();
        train_config.seed = seed;
        let outcome = train(&train_config, &normal, &malicious, &mask)?;
        save_generator(&outcome.generator, &config.output_dir.join(generator_file(seed)))?;
        save_discriminator(
            &outcome.discriminator,
            &config.output_dir.join(discriminator_file(seed)),
        )?;
        write_file(&config.output_dir.join(losses_file(seed)), |w| {
            writeln!(w, "epoch,batch,d_loss,g_loss")?;
            for record in &outcome.log {
                writeln!(
                    w,
                    "{},{},{},{}",
                    record.epoch, record.batch, record.d_loss, record.g_loss
                )?;
            }
            Ok(())
        })?;
        match outcome.log.last() {
            Some(last) => writeln!(
                out,
                "seed {seed}: {} batches, final d_loss {}, final g_loss {}",
                outcome.log.len(),
                last.d_loss,
                last.g_loss
            )?,
            None => writeln!(out, "seed {seed}: no batches (0 epochs)")?,
        }
    }
    Ok(())
}

/// The threshold selections a configuration asks for, in report order.
fn requested_modes(config: &RunConfig) -> Vec<ThresholdMode> {
    match config.threshold {
        ThresholdChoice::Ratio => vec![ThresholdMode::Ratio(config.ratio_percent)],
        ThresholdChoice::MaxTrain => vec![ThresholdMode::MaxTrain],
        ThresholdChoice::Both => vec![
            ThresholdMode::Ratio(config.ratio_percent),
            ThresholdMode::MaxTrain,
        ],
    }
}

fn score_values(
    disc: &Discriminator,
    x: &Array2<f64>,
    criterion: crate::detect::ScoreCriterion,
) -> Result<Vec<f64>> {
    let labels = vec![Label::Normal; x.nrows()];
    Ok(score_batch(disc, x, &labels, criterion)?
        .into_iter()
        .map(|s| s.score)
        .collect())
}

fn cmd_evaluate(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let model = load_encoding_artifact(config)?;
    let taxonomy = load_taxonomy(config)?;
    let test = load_test_set(config, &model, &taxonomy)?;
    let modes = requested_modes(config);

    // the max-train threshold needs training-normal scores per seed
    let train_normal: Option<Array2<f64>> = if modes.contains(&ThresholdMode::MaxTrain) {
        let partition = load_train_partition(config, &taxonomy)?;
        if partition.normal.is_empty() {
            return Err(Error::Parse(
                "training data contains no normal records for the max-train threshold".into(),
            ));
        }
        Some(model.encode_batch(&partition.normal))
    } else {
        None
    };

    // reports[mode index][seed index]
    let mut reports: Vec<Vec<(u64, DetectionReport)>> = vec![Vec::new(); modes.len()];
    for &seed in &config.seeds {
        let disc = load_discriminator_for_seed(config, seed)?;
        let scored = score_batch(&disc, &test.x, &test.labels, config.criterion)?;

        for (mode_index, &mode) in modes.iter().enumerate() {
            let mut with_predictions = scored.clone();
            let threshold = match mode {
                ThresholdMode::Ratio(c) => threshold_by_ratio(&mut with_predictions, c)?,
                ThresholdMode::MaxTrain => {
                    let normal_x = train_normal.as_ref().expect("loaded above");
                    let train_scores = score_values(&disc, normal_x, config.criterion)?;
                    threshold_by_max_train(&train_scores, &mut with_predictions)?
                }
            };
            let report = evaluate(&with_predictions, config.criterion, mode, threshold)?;
            reports[mode_index].push((seed, report));

            // the score table carries the first requested mode's verdicts
            if mode_index == 0 {
                write_file(&config.output_dir.join(scores_file(seed)), |w| {
                    write_scores_csv(w, &with_predictions)
                })?;
            }
        }

        let values: Vec<f64> = scored.iter().map(|s| s.score).collect();
        let normalized: Vec<AnomalyScore> = normalize_scores(&values)
            .into_iter()
            .zip(&scored)
            .map(|(value, s)| AnomalyScore {
                index: s.index,
                score: value,
                true_label: s.true_label,
                predicted: None,
            })
            .collect();
        write_file(&config.output_dir.join(hist_file(seed)), |w| {
            write_histogram_csv(w, &histogram(&normalized, config.bins))
        })?;
        write_file(&config.output_dir.join(recon_file(seed)), |w| {
            write_reconstructions_csv(w, &disc, &test.x, &test.labels)
        })?;
    }

    let mut report_txt = String::new();
    report_txt.push_str(&format!(
        "criterion {}\nattack_class {}\nseeds {}\n",
        config.criterion,
        config.attack_class,
        config
            .seeds
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    write_file(&config.output_dir.join(REPORT_CSV_FILE), |w| {
        writeln!(w, "seed,{}", DetectionReport::CSV_HEADER)?;
        for (mode_index, mode) in modes.iter().enumerate() {
            let seed_reports = &reports[mode_index];
            for (seed, report) in seed_reports {
                writeln!(w, "{seed},{}", report.csv_row())?;
            }
            let n = seed_reports.len() as f64;
            let mean = |f: &dyn Fn(&DetectionReport) -> f64| {
                seed_reports.iter().map(|(_, r)| f(r)).sum::<f64>() / n
            };
            let mean_threshold = mean(&|r| r.threshold);
            let mean_tp = mean(&|r| r.true_positives as f64);
            let mean_fp = mean(&|r| r.false_positives as f64);
            let mean_tn = mean(&|r| r.true_negatives as f64);
            let mean_fn = mean(&|r| r.false_negatives as f64);
            let mean_precision = mean(&|r| r.precision);
            let mean_recall = mean(&|r| r.recall);
            let mean_f1 = mean(&|r| r.f1);
            writeln!(
                w,
                "mean,{},{},{mean_threshold},{mean_tp},{mean_fp},{mean_tn},{mean_fn},{mean_precision},{mean_recall},{mean_f1}",
                config.criterion,
                mode.label()
            )?;

            report_txt.push_str(&format!("\nmode {}\n", mode.label()));
            for (seed, report) in seed_reports {
                report_txt.push_str(&format!(
                    "seed {seed}: threshold {} tp {} fp {} tn {} fn {} precision {} recall {} f1 {}{}\n",
                    report.threshold,
                    report.true_positives,
                    report.false_positives,
                    report.true_negatives,
                    report.false_negatives,
                    report.precision,
                    report.recall,
                    report.f1,
                    if report.zero_division { " (zero denominator)" } else { "" }
                ));
            }
            report_txt.push_str(&format!(
                "mean: precision {mean_precision} recall {mean_recall} f1 {mean_f1}\n"
            ));
        }
        Ok(())
    })?;
    write_file(&config.output_dir.join(REPORT_TXT_FILE), |w| {
        w.write_all(report_txt.as_bytes())?;
        Ok(())
    })?;
    out.write_all(report_txt.as_bytes())?;
    Ok(())
}

fn cmd_score(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let model = load_encoding_artifact(config)?;
    let taxonomy = load_taxonomy(config)?;
    let test = load_test_set(config, &model, &taxonomy)?;
    std::fs::create_dir_all(&config.output_dir)?;
    for &seed in &config.seeds {
        let disc = load_discriminator_for_seed(config, seed)?;
        let scored = score_batch(&disc, &test.x, &test.labels, config.criterion)?;
        let path = config.output_dir.join(scores_file(seed));
        write_file(&path, |w| write_scores_csv(w, &scored))?;
        writeln!(
            out,
            "seed {seed}: scored {} records -> {}",
            scored.len(),
            path.display()
        )?;
    }
    Ok(())
}

fn cmd_export_hist(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let model = load_encoding_artifact(config)?;
    let taxonomy = load_taxonomy(config)?;
    let test = load_test_set(config, &model, &taxonomy)?;
    std::fs::create_dir_all(&config.output_dir)?;
    for &seed in &config.seeds {
        let disc = load_discriminator_for_seed(config, seed)?;
        let scored = score_batch(&disc, &test.x, &test.labels, config.criterion)?;
        let values: Vec<f64> = scored.iter().map(|s| s.score).collect();
        let normalized: Vec<AnomalyScore> = normalize_scores(&values)
            .into_iter()
            .zip(&scored)
            .map(|(value, s)| AnomalyScore {
                index: s.index,
                score: value,
                true_label: s.true_label,
                predicted: None,
            })
            .collect();
        let path = config.output_dir.join(hist_file(seed));
        write_file(&path, |w| {
            write_histogram_csv(w, &histogram(&normalized, config.bins))
        })?;
        writeln!(out, "seed {seed}: wrote {}", path.display())?;
    }
    Ok(())
}

fn cmd_export_recon(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let model = load_encoding_artifact(config)?;
    let taxonomy = load_taxonomy(config)?;
    let test = load_test_set(config, &model, &taxonomy)?;
    std::fs::create_dir_all(&config.output_dir)?;
    for &seed in &config.seeds {
        let disc = load_discriminator_for_seed(config, seed)?;
        let path = config.output_dir.join(recon_file(seed));
        write_file(&path, |w| {
            write_reconstructions_csv(w, &disc, &test.x, &test.labels)
        })?;
        writeln!(out, "seed {seed}: wrote {}", path.display())?;
    }
    Ok(())
}
