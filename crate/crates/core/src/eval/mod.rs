//! Subject-level splits, leave-one-subject-out cross-validation, grid
//! search, metrics and the two statistical tests.
//!
//! Every fold trains with the configured seed unchanged, so folds whose
//! training pools hold identical data produce identical models.

mod metrics;
mod stats;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{ChannelKind, Epoch, StageLabel};
use crate::features::{FeatureConfig, FeatureError, FeatureExtractor, FeatureMatrix, Variant};
use crate::mlcore::RngStream;
use crate::models::{fit_cascade, fit_multiclass, level1_feature_config, ModelError, PipelineConfig, TrainedModel};
use crate::wavelet::WaveletFamily;

pub use metrics::{confusion, fscore, ConfusionMatrix, FScores};
pub use stats::{anova_oneway, beta_inc_reg, f_upper_tail, shapiro_wilk, TestResult, SHAPIRO_MAX_N};

/// Stream id for subject shuffling under the split seed.
pub const SPLIT_STREAM: u64 = 1 << 41;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.7;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("truth has {truth} labels but prediction has {pred}")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("label index {0} out of range")]
    LabelOutOfRange(usize),
    #[error("need at least {needed} subjects, found {found}")]
    TooFewSubjects { needed: usize, found: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("every fold was flagged; no score available")]
    NoValidFolds,
    #[error("subject {0} appears in both training and test data")]
    Overlap(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Multiclass,
    #[default]
    Cascade,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Multiclass => "multiclass",
            ModelKind::Cascade => "cascade",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "multiclass" | "rf" => Ok(ModelKind::Multiclass),
            "cascade" | "cm" => Ok(ModelKind::Cascade),
            _ => Err(format!("unknown model kind {s:?} (expected multiclass or cascade)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectScore {
    pub subject_id: String,
    pub confusion: ConfusionMatrix,
    pub fscores: FScores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config: PipelineConfig,
    pub kind: ModelKind,
    pub confusion: ConfusionMatrix,
    pub fscores: FScores,
    /// Sorted by subject id.
    pub per_subject: Vec<SubjectScore>,
}

impl EvalReport {
    pub fn macro_f(&self) -> f64 {
        self.fscores.macro_f
    }

    /// Build a report from truth/prediction pairs tagged by subject.
    pub fn from_predictions(
        config: &PipelineConfig,
        kind: ModelKind,
        subjects: &[String],
        truth: &[StageLabel],
        pred: &[StageLabel],
    ) -> Result<Self, EvalError> {
        if subjects.len() != truth.len() {
            return Err(EvalError::LengthMismatch {
                truth: truth.len(),
                pred: subjects.len(),
            });
        }
        let cm = confusion(truth, pred)?;
        let mut by_subject: BTreeMap<&str, (Vec<StageLabel>, Vec<StageLabel>)> = BTreeMap::new();
        for ((s, &t), &p) in subjects.iter().zip(truth).zip(pred) {
            let e = by_subject.entry(s).or_default();
            e.0.push(t);
            e.1.push(p);
        }
        let per_subject = by_subject
            .into_iter()
            .map(|(s, (t, p))| {
                let c = confusion(&t, &p)?;
                Ok(SubjectScore {
                    subject_id: s.to_string(),
                    fscores: fscore(&c),
                    confusion: c,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        Ok(Self {
            config: config.clone(),
            kind,
            fscores: fscore(&cm),
            confusion: cm,
            per_subject,
        })
    }
}

fn kind_of(model: &TrainedModel) -> ModelKind {
    match model.kind() {
        "cascade" => ModelKind::Cascade,
        _ => ModelKind::Multiclass,
    }
}

/// Score a trained model on labelled epochs.
pub fn evaluate(model: &TrainedModel, epochs: &[Epoch]) -> Result<EvalReport, EvalError> {
    let pred = model.predict(epochs)?;
    let truth: Vec<StageLabel> = epochs.iter().map(|e| e.label).collect();
    let subjects: Vec<String> = epochs.iter().map(|e| e.subject_id.clone()).collect();
    EvalReport::from_predictions(&model.config, kind_of(model), &subjects, &truth, &pred)
}

/// Score a trained model on precomputed raw feature matrices.
pub fn evaluate_features(model: &TrainedModel, main: &FeatureMatrix, level1: Option<&FeatureMatrix>) -> Result<EvalReport, EvalError> {
    let pred = model.predict_features(main, level1)?;
    let subjects: Vec<String> = main.row_meta.iter().map(|r| r.subject_id.clone()).collect();
    EvalReport::from_predictions(&model.config, kind_of(model), &subjects, &main.labels(), &pred)
}

/// Partition subjects into (train/val, test). Ids are deduplicated and
/// sorted before a seeded shuffle; the first `round(fraction · N)` go to
/// training, clamped so both sides are non-empty.
pub fn split_subjects(ids: &[String], train_fraction: f64, seed: u64) -> Result<(Vec<String>, Vec<String>), EvalError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(EvalError::Param(format!("train fraction {train_fraction} not in (0, 1)")));
    }
    let mut unique: Vec<String> = ids.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let n = unique.len();
    if n < 2 {
        return Err(EvalError::TooFewSubjects { needed: 2, found: n });
    }
    unique.shuffle(&mut RngStream::new(seed, SPLIT_STREAM).rng());
    let n_train = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let test = unique.split_off(n_train);
    unique.sort();
    let mut test = test;
    test.sort();
    Ok((unique, test))
}

/// Error if any subject id occurs in both sets.
pub fn assert_disjoint<'a>(
    train: impl IntoIterator<Item = &'a str>,
    test: impl IntoIterator<Item = &'a str>,
) -> Result<(), EvalError> {
    let train: BTreeSet<&str> = train.into_iter().collect();
    for t in test {
        if train.contains(t) {
            return Err(EvalError::Overlap(t.to_string()));
        }
    }
    Ok(())
}

/// Distinct subject ids of a feature matrix, sorted.
pub fn subjects_of(m: &FeatureMatrix) -> Vec<String> {
    m.row_meta
        .iter()
        .map(|r| r.subject_id.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub held_out: String,
    /// `None` when the fold was flagged.
    pub report: Option<EvalReport>,
    /// Reason the fold was excluded from the mean.
    pub flagged: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub config: PipelineConfig,
    pub kind: ModelKind,
    pub mean_macro_f: f64,
    /// Population standard deviation over scored folds.
    pub std_macro_f: f64,
    pub n_flagged: usize,
    pub folds: Vec<FoldResult>,
}

impl CvResult {
    /// Confusion matrix summed over scored folds.
    pub fn pooled_confusion(&self) -> ConfusionMatrix {
        let mut cm = ConfusionMatrix::zeros(crate::dataset::N_STAGES);
        for r in self.folds.iter().filter_map(|f| f.report.as_ref()) {
            cm.add(&r.confusion);
        }
        cm
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Raw feature matrices needed to train `cfg` as `kind`.
pub fn extract_for(cfg: &PipelineConfig, kind: ModelKind, epochs: &[Epoch]) -> Result<(FeatureMatrix, Option<FeatureMatrix>), EvalError> {
    let main = FeatureExtractor::new(&cfg.features)?.extract_matrix(epochs)?;
    let level1 = if needs_level1(cfg, kind) {
        Some(FeatureExtractor::new(&level1_feature_config(&cfg.features))?.extract_matrix(epochs)?)
    } else {
        None
    };
    Ok((main, level1))
}

/// Whether a cascade of `cfg` needs a separate SM matrix for its first level.
pub fn needs_level1(cfg: &PipelineConfig, kind: ModelKind) -> bool {
    kind == ModelKind::Cascade && cfg.features.variant != Variant::SM
}

/// Train `cfg` as `kind` on raw feature matrices.
pub fn fit_kind(cfg: &PipelineConfig, kind: ModelKind, main: &FeatureMatrix, level1: Option<&FeatureMatrix>) -> Result<TrainedModel, ModelError> {
    match kind {
        ModelKind::Multiclass => fit_multiclass(cfg, main),
        ModelKind::Cascade => fit_cascade(cfg, main, level1),
    }
}

/// Leave-one-subject-out CV over labelled epochs.
pub fn loso_cv(epochs: &[Epoch], cfg: &PipelineConfig, kind: ModelKind) -> Result<CvResult, EvalError> {
    cfg.validate()?;
    let (main, level1) = extract_for(cfg, kind, epochs)?;
    loso_cv_features(&main, level1.as_ref(), cfg, kind)
}

/// LOSO CV on precomputed raw features. Folds whose training pool lacks a
/// class are flagged and left out of the mean; other training errors abort.
pub fn loso_cv_features(
    main: &FeatureMatrix,
    level1: Option<&FeatureMatrix>,
    cfg: &PipelineConfig,
    kind: ModelKind,
) -> Result<CvResult, EvalError> {
    let subjects = subjects_of(main);
    if subjects.len() < 2 {
        return Err(EvalError::TooFewSubjects {
            needed: 2,
            found: subjects.len(),
        });
    }
    if let Some(l1) = level1 {
        if l1.rows() != main.rows() {
            return Err(ModelError::RowMismatch {
                expected: main.rows(),
                found: l1.rows(),
            }
            .into());
        }
    }
    let folds = subjects
        .par_iter()
        .map(|held| run_fold(main, level1, cfg, kind, held))
        .collect::<Result<Vec<_>, EvalError>>()?;
    let scores: Vec<f64> = folds.iter().filter_map(|f| f.report.as_ref().map(EvalReport::macro_f)).collect();
    if scores.is_empty() {
        return Err(EvalError::NoValidFolds);
    }
    let (mean, std) = mean_std(&scores);
    Ok(CvResult {
        config: cfg.clone(),
        kind,
        mean_macro_f: mean,
        std_macro_f: std,
        n_flagged: folds.len() - scores.len(),
        folds,
    })
}

fn run_fold(
    main: &FeatureMatrix,
    level1: Option<&FeatureMatrix>,
    cfg: &PipelineConfig,
    kind: ModelKind,
    held: &str,
) -> Result<FoldResult, EvalError> {
    let (train, test): (Vec<usize>, Vec<usize>) = (0..main.rows()).partition(|&r| main.row_meta[r].subject_id != held);
    let sub = |m: &FeatureMatrix, idx: &[usize]| m.select_rows(idx);
    let l1_train = level1.map(|m| sub(m, &train));
    let model = match fit_kind(cfg, kind, &sub(main, &train), l1_train.as_ref()) {
        Ok(m) => m,
        Err(e @ (ModelError::MissingClasses(_) | ModelError::EmptyGroup(_))) => {
            log::warn!("fold {held} flagged: {e}");
            return Ok(FoldResult {
                held_out: held.to_string(),
                report: None,
                flagged: Some(e.to_string()),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let l1_test = level1.map(|m| sub(m, &test));
    let report = evaluate_features(&model, &sub(main, &test), l1_test.as_ref())?;
    Ok(FoldResult {
        held_out: held.to_string(),
        report: Some(report),
        flagged: None,
    })
}

/// Hyperparameter axes. `pca_sizes` entries of `None` mean PCA off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub families: Vec<WaveletFamily>,
    pub rus_fractions: Vec<f64>,
    pub levels: Vec<usize>,
    pub pca_sizes: Vec<Option<usize>>,
    pub tree_counts: Vec<usize>,
}

impl Default for GridSpec {
    fn default() -> Self {
        use crate::wavelet::BiorPair;
        Self {
            families: vec![
                WaveletFamily::DiscreteMeyer,
                WaveletFamily::Coiflets(1),
                WaveletFamily::Daubechies(4),
                WaveletFamily::Haar,
                WaveletFamily::ReverseBiorthogonal(BiorPair::new(2, 2)),
                WaveletFamily::Symlets(4),
            ],
            rus_fractions: std::iter::once(0.01).chain((1..=20).map(|i| i as f64 * 0.05)).collect(),
            levels: (1..=5).collect(),
            pca_sizes: std::iter::once(None).chain((1..=8).map(|i| Some(i * 50))).collect(),
            tree_counts: (1..=10).map(|i| i * 50).collect(),
        }
    }
}

impl GridSpec {
    /// A grid holding exactly one pipeline config.
    pub fn singleton(cfg: &PipelineConfig) -> Self {
        Self {
            families: vec![cfg.features.family],
            rus_fractions: vec![cfg.rus_fraction],
            levels: vec![cfg.features.level],
            pca_sizes: vec![cfg.pca_k],
            tree_counts: vec![cfg.n_trees],
        }
    }

    pub fn count(&self) -> usize {
        self.families.len() * self.rus_fractions.len() * self.levels.len() * self.pca_sizes.len() * self.tree_counts.len()
    }

    /// Every problem with the grid, one message each.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let empty = [
            ("families", self.families.is_empty()),
            ("rus_fractions", self.rus_fractions.is_empty()),
            ("levels", self.levels.is_empty()),
            ("pca_sizes", self.pca_sizes.is_empty()),
            ("tree_counts", self.tree_counts.is_empty()),
        ];
        for (name, e) in empty {
            if e {
                out.push(format!("grid.{name} must not be empty"));
            }
        }
        for &r in &self.rus_fractions {
            if !(r > 0.0 && r <= 1.0) {
                out.push(format!("grid.rus_fractions: {r} not in (0, 1]"));
            }
        }
        for &l in &self.levels {
            if l == 0 {
                out.push("grid.levels: level must be at least 1".into());
            }
        }
        for p in self.pca_sizes.iter().flatten() {
            if *p == 0 {
                out.push("grid.pca_sizes: component count must be at least 1".into());
            }
        }
        for &t in &self.tree_counts {
            if t == 0 {
                out.push("grid.tree_counts: tree count must be at least 1".into());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(EvalError::Param(p.join("; ")))
        }
    }

    /// Cartesian product in a fixed order: family, level, rus, pca, trees.
    pub fn configs(&self, base: &PipelineConfig) -> Vec<PipelineConfig> {
        let mut out = Vec::with_capacity(self.count());
        for &family in &self.families {
            for &level in &self.levels {
                for &rus in &self.rus_fractions {
                    for &pca in &self.pca_sizes {
                        for &trees in &self.tree_counts {
                            let mut c = base.clone();
                            c.features.family = family;
                            c.features.level = level;
                            c.rus_fraction = rus;
                            c.pca_k = pca;
                            c.n_trees = trees;
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSummary {
    pub held_out: String,
    pub macro_f: Option<f64>,
    pub per_class: Option<Vec<f64>>,
    pub flagged: Option<String>,
}

impl From<&FoldResult> for FoldSummary {
    fn from(f: &FoldResult) -> Self {
        Self {
            held_out: f.held_out.clone(),
            macro_f: f.report.as_ref().map(EvalReport::macro_f),
            per_class: f.report.as_ref().map(|r| r.fscores.per_class.clone()),
            flagged: f.flagged.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub config: PipelineConfig,
    pub mean_macro_f: Option<f64>,
    pub std_macro_f: Option<f64>,
    pub n_flagged: usize,
    pub folds: Vec<FoldSummary>,
    /// Set when the whole config failed; the sweep continues.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub kind: ModelKind,
    pub n_configs: usize,
    /// Best first.
    pub entries: Vec<GridEntry>,
}

impl GridReport {
    pub fn best(&self) -> Option<&GridEntry> {
        self.entries.first().filter(|e| e.error.is_none())
    }
}

/// Ranking: scored before errored, mean macro F descending, then fewer
/// trees, then smaller PCA (off smallest), then label.
pub fn rank_entries(entries: &mut [GridEntry]) {
    entries.sort_by(|a, b| {
        let score = |e: &GridEntry| e.mean_macro_f.filter(|_| e.error.is_none());
        match (score(a), score(b)) {
            (Some(x), Some(y)) => y.total_cmp(&x),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
        .then(a.config.n_trees.cmp(&b.config.n_trees))
        .then(a.config.pca_k.cmp(&b.config.pca_k))
        .then_with(|| a.config.label().cmp(&b.config.label()))
    });
}

/// Evaluate every grid config by LOSO CV. Features are extracted once per
/// (family, level) pair and shared by the configs using them.
pub fn grid_search(grid: &GridSpec, base: &PipelineConfig, kind: ModelKind, epochs: &[Epoch]) -> Result<GridReport, EvalError> {
    grid_search_with(grid, base, kind, &|c| extract_for(c, kind, epochs))
}

/// Feature matrices for a config: the main matrix and, for cascades, the
/// level-1 matrix.
pub type Extracted = (FeatureMatrix, Option<FeatureMatrix>);

/// [`grid_search`] with a caller-supplied feature source, e.g. a cache. The
/// source is called once per distinct feature config.
pub fn grid_search_with(
    grid: &GridSpec,
    base: &PipelineConfig,
    kind: ModelKind,
    extract: &(dyn Fn(&PipelineConfig) -> Result<Extracted, EvalError> + Sync),
) -> Result<GridReport, EvalError> {
    grid.validate()?;
    let configs = grid.configs(base);
    let mut groups: Vec<(FeatureConfig, Vec<PipelineConfig>)> = Vec::new();
    let mut slot: HashMap<FeatureConfig, usize> = HashMap::new();
    for c in configs {
        let key = c.features.clone();
        let i = *slot.entry(key.clone()).or_insert_with(|| {
            groups.push((key, Vec::new()));
            groups.len() - 1
        });
        groups[i].1.push(c);
    }
    let mut entries = Vec::with_capacity(grid.count());
    for (fc, cfgs) in groups {
        log::info!("grid: {} configs on {fc}", cfgs.len());
        let probe = cfgs[0].clone();
        match extract(&probe) {
            Err(e) => entries.extend(cfgs.into_iter().map(|c| failed(c, &e))),
            Ok((main, level1)) => {
                let evaluated: Vec<GridEntry> = cfgs
                    .into_par_iter()
                    .map(|c| match c.validate().map_err(EvalError::from).and_then(|_| loso_cv_features(&main, level1.as_ref(), &c, kind)) {
                        Ok(cv) => GridEntry {
                            config: c,
                            mean_macro_f: Some(cv.mean_macro_f),
                            std_macro_f: Some(cv.std_macro_f),
                            n_flagged: cv.n_flagged,
                            folds: cv.folds.iter().map(FoldSummary::from).collect(),
                            error: None,
                        },
                        Err(e) => failed(c, &e),
                    })
                    .collect();
                entries.extend(evaluated);
            }
        }
    }
    rank_entries(&mut entries);
    Ok(GridReport {
        kind,
        n_configs: entries.len(),
        entries,
    })
}

fn failed(config: PipelineConfig, e: &EvalError) -> GridEntry {
    log::warn!("config {} failed: {e}", config.label());
    GridEntry {
        config,
        mean_macro_f: None,
        std_macro_f: None,
        n_flagged: 0,
        folds: Vec::new(),
        error: Some(e.to_string()),
    }
}

const CSV_HEADER: [&str; 12] = [
    "config", "kind", "fold", "held_out", "macro_f", "f_W", "f_S1", "f_S2", "f_SWS", "f_REM", "flagged", "error",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6}"))
}

fn csv_rows(kind: ModelKind, config: &PipelineConfig, folds: &[FoldSummary], error: Option<&str>, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
    let label = config.label();
    if folds.is_empty() {
        let mut row = vec![label, kind.to_string(), String::new(), String::new()];
        row.extend(std::iter::repeat(String::new()).take(7));
        row.push(error.unwrap_or_default().to_string());
        return w.write_record(&row);
    }
    for (i, f) in folds.iter().enumerate() {
        let mut row = vec![label.clone(), kind.to_string(), i.to_string(), f.held_out.clone(), fmt_opt(f.macro_f)];
        match &f.per_class {
            Some(pc) => row.extend(pc.iter().map(|v| format!("{v:.6}"))),
            None => row.extend(std::iter::repeat(String::new()).take(5)),
        }
        row.push(f.flagged.clone().unwrap_or_default());
        row.push(error.unwrap_or_default().to_string());
        w.write_record(&row)?;
    }
    Ok(())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

/// One row per config per fold.
pub fn grid_csv(report: &GridReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory csv");
    for e in &report.entries {
        csv_rows(report.kind, &e.config, &e.folds, e.error.as_deref(), &mut w).expect("in-memory csv");
    }
    finish_csv(w)
}

/// One row per fold.
pub fn cv_csv(cv: &CvResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory csv");
    let folds: Vec<FoldSummary> = cv.folds.iter().map(FoldSummary::from).collect();
    csv_rows(cv.kind, &cv.config, &folds, None, &mut w).expect("in-memory csv");
    finish_csv(w)
}

/// One row per subject plus a pooled `all` row.
pub fn eval_csv(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["subject", "n_epochs", "macro_f", "f_W", "f_S1", "f_S2", "f_SWS", "f_REM"]).expect("in-memory csv");
    let rows = report
        .per_subject
        .iter()
        .map(|s| (s.subject_id.as_str(), &s.confusion, &s.fscores))
        .chain(std::iter::once(("all", &report.confusion, &report.fscores)));
    for (id, cm, f) in rows {
        let mut row = vec![id.to_string(), cm.total().to_string(), format!("{:.6}", f.macro_f)];
        row.extend(
            f.per_class
                .iter()
                .zip(&f.included)
                .map(|(v, &inc)| if inc { format!("{v:.6}") } else { String::new() }),
        );
        w.write_record(&row).expect("in-memory csv");
    }
    finish_csv(w)
}

/// Channel sets accepted on the command line, e.g. `EEG+EOG`.
pub fn parse_channel_set(s: &str) -> Result<Vec<ChannelKind>, String> {
    s.split('+').map(|c| c.trim().parse::<ChannelKind>().map_err(|e| e.to_string())).collect()
}
