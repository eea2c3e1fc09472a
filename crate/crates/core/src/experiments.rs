//! The experiment matrix: channel sets, feature variants, cascade versus
//! SM, age-group and early/late cross-testing, and RF versus KNN.
//!
//! Every cell trains on one subject pool and tests on a disjoint one; the
//! disjointness is checked at runtime. Reports carry no timestamps, so
//! identical inputs give byte-identical JSON and CSV.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{assign_age_group, split_early_late, AgeGroup, ChannelKind, Epoch, SplitMode, StageLabel, N_STAGES};
use crate::eval::{
    assert_disjoint, confusion, evaluate, extract_for, fscore, loso_cv_features, split_subjects, ConfusionMatrix, EvalError,
    EvalReport, FScores, ModelKind, DEFAULT_TRAIN_FRACTION,
};
use crate::features::{FeatureConfig, Variant};
use crate::mlcore::{knn_predict, rus_wake, RngStream, DEFAULT_K};
use crate::models::{encode_model, train_cascade, train_multiclass, PipelineConfig, TrainedModel, RUS_STREAM};

/// Reference scores from the full-scale dataset, in percent unless noted.
/// Shipped for comparison in report footers; never asserted.
pub mod reference {
    pub const EEG_ONLY_WM_GLOBAL: f64 = 44.93;
    pub const THREE_CHANNEL_WM_GLOBAL: f64 = 45.76;
    pub const SM_GLOBAL: f64 = 58.22;
    pub const CM_GLOBAL: f64 = 59.21;
    pub const SM_S1: f64 = 14.31;
    pub const CM_S1: f64 = 19.08;
    /// Per-class F (fraction) in W, S1, S2, SWS, REM order.
    pub const RF_PER_CLASS: [f64; 5] = [0.78, 0.37, 0.84, 0.87, 0.77];
    pub const KNN_PER_CLASS: [f64; 5] = [0.71, 0.30, 0.80, 0.83, 0.71];
}

pub const SCORE_ROWS: [&str; 6] = ["Global", "W", "S1", "S2", "SWS", "REM"];
pub const SVM_NOTE: &str = "SVM: out of scope";

#[derive(Debug, Clone, PartialEq)]
pub struct SubjectData {
    pub id: String,
    pub age: Option<u32>,
    pub epochs: Vec<Epoch>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentData {
    /// Sorted by id.
    pub subjects: Vec<SubjectData>,
}

impl ExperimentData {
    pub fn new(mut subjects: Vec<SubjectData>) -> Self {
        subjects.sort_by(|a, b| a.id.cmp(&b.id));
        Self { subjects }
    }

    pub fn ids(&self) -> Vec<String> {
        self.subjects.iter().map(|s| s.id.clone()).collect()
    }

    pub fn epochs_of(&self, ids: &[String]) -> Vec<Epoch> {
        let want: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
        self.subjects
            .iter()
            .filter(|s| want.contains(s.id.as_str()))
            .flat_map(|s| s.epochs.iter().cloned())
            .collect()
    }

    pub fn all_epochs(&self) -> Vec<Epoch> {
        self.subjects.iter().flat_map(|s| s.epochs.iter().cloned()).collect()
    }

    /// SHA-256 over ids, ages, labels and samples in subject order.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for s in &self.subjects {
            h.update(s.id.as_bytes());
            h.update([0]);
            h.update(s.age.map_or(u32::MAX, |a| a).to_le_bytes());
            for e in &s.epochs {
                h.update((e.index as u64).to_le_bytes());
                h.update([e.label.index() as u8]);
                for v in e.eeg.iter().chain(&e.eog).chain(&e.emg) {
                    h.update(v.to_le_bytes());
                }
            }
        }
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Train on a seeded subject split, test on the rest.
    #[default]
    HoldOut,
    /// Leave-one-subject-out over all subjects; scores pool the folds.
    Loso,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentOptions {
    pub split_seed: u64,
    pub train_fraction: f64,
    pub protocol: Protocol,
    pub split_mode: SplitMode,
    /// Model kind for the age and early/late experiments.
    pub kind: ModelKind,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            split_seed: crate::mlcore::DEFAULT_SEED,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            protocol: Protocol::HoldOut,
            split_mode: SplitMode::Halves,
            kind: ModelKind::Cascade,
        }
    }
}

/// Global macro F plus per-class F; classes absent from a test set are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub global: f64,
    pub per_class: Vec<Option<f64>>,
}

impl ScoreRow {
    pub fn of(f: &FScores) -> Self {
        Self {
            global: f.macro_f,
            per_class: f.per_class.iter().zip(&f.included).map(|(&v, &i)| i.then_some(v)).collect(),
        }
    }

    /// Value for one of [`SCORE_ROWS`].
    pub fn get(&self, row: usize) -> Option<f64> {
        if row == 0 {
            Some(self.global)
        } else {
            self.per_class.get(row - 1).copied().flatten()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRef {
    /// File stem the CLI writes the model under.
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub trained_on: String,
    pub tested_on: String,
    /// `None` for cells that are deliberately not computed.
    pub scores: Option<ScoreRow>,
    pub n_test_epochs: usize,
    pub train_subjects: Vec<String>,
    pub test_subjects: Vec<String>,
    pub model: Option<ModelRef>,
    /// Mean and population std of fold macro F under LOSO.
    pub fold_mean_std: Option<(f64, f64)>,
    pub note: Option<String>,
    pub report: Option<EvalReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub seed: u64,
    pub config: PipelineConfig,
    pub options: ExperimentOptions,
    pub data_checksum: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub name: String,
    pub value: f64,
}

/// Best trained-on group per tested-on group and score row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestEntry {
    pub tested_on: String,
    pub score: String,
    pub best_trained_on: Option<String>,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub axes: [String; 2],
    pub cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub best: Vec<BestEntry>,
    pub references: Vec<Reference>,
    pub notes: Vec<String>,
    pub fingerprint: Fingerprint,
}

impl ExperimentReport {
    pub fn cell(&self, trained_on: &str, tested_on: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.trained_on == trained_on && c.tested_on == tested_on)
    }

    pub fn global(&self, trained_on: &str, tested_on: &str) -> Option<f64> {
        self.cell(trained_on, tested_on)?.scores.as_ref().map(|s| s.global)
    }
}

/// A report plus the models behind its cells, keyed by [`ModelRef::name`].
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub models: Vec<(String, TrainedModel)>,
}

fn model_ref(name: &str, m: &TrainedModel) -> ModelRef {
    ModelRef {
        name: name.to_string(),
        sha256: hex::encode(Sha256::digest(encode_model(m))),
    }
}

fn ids_of(epochs: &[Epoch]) -> Vec<String> {
    epochs.iter().map(|e| e.subject_id.clone()).collect::<BTreeSet<_>>().into_iter().collect()
}

fn train(cfg: &PipelineConfig, kind: ModelKind, epochs: &[Epoch]) -> Result<TrainedModel, EvalError> {
    Ok(match kind {
        ModelKind::Multiclass => train_multiclass(cfg, epochs)?,
        ModelKind::Cascade => train_cascade(cfg, epochs)?,
    })
}

/// Train on `train`, evaluate on `test`; subject pools must be disjoint.
fn holdout_cell(
    cfg: &PipelineConfig,
    kind: ModelKind,
    train_epochs: &[Epoch],
    test_epochs: &[Epoch],
    trained_on: &str,
    tested_on: &str,
    name: &str,
) -> Result<(Cell, TrainedModel), EvalError> {
    let (train_ids, test_ids) = (ids_of(train_epochs), ids_of(test_epochs));
    assert_disjoint(train_ids.iter().map(String::as_str), test_ids.iter().map(String::as_str))?;
    let model = train(cfg, kind, train_epochs)?;
    let report = evaluate(&model, test_epochs)?;
    Ok((
        Cell {
            trained_on: trained_on.into(),
            tested_on: tested_on.into(),
            scores: Some(ScoreRow::of(&report.fscores)),
            n_test_epochs: test_epochs.len(),
            train_subjects: train_ids,
            test_subjects: test_ids,
            model: Some(model_ref(name, &model)),
            fold_mean_std: None,
            note: None,
            report: Some(report),
        },
        model,
    ))
}

/// LOSO over all of `epochs`; the referenced model is fit on the whole pool.
fn loso_cell(cfg: &PipelineConfig, kind: ModelKind, epochs: &[Epoch], trained_on: &str, name: &str) -> Result<(Cell, TrainedModel), EvalError> {
    let (main, level1) = extract_for(cfg, kind, epochs)?;
    let cv = loso_cv_features(&main, level1.as_ref(), cfg, kind)?;
    let mut pooled = ConfusionMatrix::zeros(N_STAGES);
    let mut per_subject = Vec::new();
    let mut notes = Vec::new();
    for f in &cv.folds {
        match &f.report {
            Some(r) => {
                pooled.add(&r.confusion);
                per_subject.extend(r.per_subject.iter().cloned());
            }
            None => notes.push(format!("fold {} flagged: {}", f.held_out, f.flagged.as_deref().unwrap_or(""))),
        }
    }
    let fs = fscore(&pooled);
    let report = EvalReport {
        config: cfg.clone(),
        kind,
        confusion: pooled,
        fscores: fs.clone(),
        per_subject,
    };
    let model = train(cfg, kind, epochs)?;
    let ids = ids_of(epochs);
    Ok((
        Cell {
            trained_on: trained_on.into(),
            tested_on: "loso".into(),
            scores: Some(ScoreRow::of(&fs)),
            n_test_epochs: epochs.len(),
            train_subjects: ids.clone(),
            test_subjects: ids,
            model: Some(model_ref(name, &model)),
            fold_mean_std: Some((cv.mean_macro_f, cv.std_macro_f)),
            note: (!notes.is_empty()).then(|| notes.join("; ")),
            report: Some(report),
        },
        model,
    ))
}

struct Split {
    train: Vec<String>,
    test: Vec<String>,
}

fn split(data: &ExperimentData, opts: &ExperimentOptions) -> Result<Split, EvalError> {
    let (train, test) = split_subjects(&data.ids(), opts.train_fraction, opts.split_seed)?;
    Ok(Split { train, test })
}

fn fingerprint(cfg: &PipelineConfig, opts: &ExperimentOptions, data: &ExperimentData) -> Fingerprint {
    Fingerprint {
        seed: cfg.seed,
        config: cfg.clone(),
        options: opts.clone(),
        data_checksum: data.checksum(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn refs(pairs: &[(&str, f64)]) -> Vec<Reference> {
    pairs
        .iter()
        .map(|&(name, value)| Reference {
            name: name.into(),
            value,
        })
        .collect()
}

/// One cell per (label, config, kind) job under the chosen protocol.
fn run_jobs(
    jobs: Vec<(String, PipelineConfig, ModelKind)>,
    data: &ExperimentData,
    opts: &ExperimentOptions,
    name_prefix: &str,
) -> Result<(Vec<Cell>, Vec<(String, TrainedModel)>), EvalError> {
    let pools = match opts.protocol {
        Protocol::HoldOut => {
            let s = split(data, opts)?;
            Some((data.epochs_of(&s.train), data.epochs_of(&s.test)))
        }
        Protocol::Loso => None,
    };
    let all = data.all_epochs();
    let results: Vec<(Cell, TrainedModel, String)> = jobs
        .into_par_iter()
        .map(|(label, cfg, kind)| {
            let name = format!("{name_prefix}-{}", sanitize(&label));
            let (cell, model) = match &pools {
                Some((tr, te)) => holdout_cell(&cfg, kind, tr, te, &label, "test", &name)?,
                None => loso_cell(&cfg, kind, &all, &label, &name)?,
            };
            Ok((cell, model, name))
        })
        .collect::<Result<_, EvalError>>()?;
    let mut cells = Vec::new();
    let mut models = Vec::new();
    for (c, m, n) in results {
        cells.push(c);
        models.push((n, m));
    }
    Ok((cells, models))
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

pub fn channel_sets() -> Vec<Vec<ChannelKind>> {
    use ChannelKind::*;
    vec![vec![Eeg], vec![Eeg, Eog], vec![Eeg, Eog, Emg]]
}

fn channel_label(ch: &[ChannelKind]) -> String {
    ch.iter().map(|c| c.short_name()).collect::<Vec<_>>().join("+")
}

fn with_variant(base: &PipelineConfig, variant: Variant) -> PipelineConfig {
    let mut c = base.clone();
    c.features.variant = variant;
    c.pca_k = match variant {
        Variant::SM => None,
        _ => base.pca_k.or(Some(100)),
    };
    c
}

/// WM multi-class models on EEG, EEG+EOG and EEG+EOG+EMG.
pub fn run_channel_comparison(data: &ExperimentData, base: &PipelineConfig, opts: &ExperimentOptions) -> Result<ExperimentOutput, EvalError> {
    let wm = with_variant(base, Variant::WM);
    let jobs = channel_sets()
        .into_iter()
        .map(|ch| {
            let mut c = wm.clone();
            c.features.channels = ch.clone();
            (channel_label(&ch), c, ModelKind::Multiclass)
        })
        .collect();
    let (cells, models) = run_jobs(jobs, data, opts, "channels")?;
    Ok(ExperimentOutput {
        report: ExperimentReport {
            id: "channels".into(),
            axes: ["channels".into(), "tested_on".into()],
            cells,
            best: vec![],
            references: refs(&[
                ("eeg_only_wm_global_pct", reference::EEG_ONLY_WM_GLOBAL),
                ("three_channel_wm_global_pct", reference::THREE_CHANNEL_WM_GLOBAL),
            ]),
            notes: vec![],
            fingerprint: fingerprint(&wm, opts, data),
        },
        models,
    })
}

/// WM, SM and EM multi-class configs derived from `base`.
pub fn variant_configs(base: &PipelineConfig) -> Vec<PipelineConfig> {
    Variant::ALL.iter().map(|&v| with_variant(base, v)).collect()
}

/// Multi-class models per feature variant; per-subject scores and
/// confusion matrices are kept in each cell's report.
pub fn run_feature_comparison(data: &ExperimentData, cfgs: &[PipelineConfig], opts: &ExperimentOptions) -> Result<ExperimentOutput, EvalError> {
    let base = cfgs.first().ok_or_else(|| EvalError::Param("no feature configs given".into()))?;
    let jobs = cfgs
        .iter()
        .map(|c| (c.features.variant.to_string(), c.clone(), ModelKind::Multiclass))
        .collect();
    let (cells, models) = run_jobs(jobs, data, opts, "features")?;
    Ok(ExperimentOutput {
        report: ExperimentReport {
            id: "features".into(),
            axes: ["variant".into(), "tested_on".into()],
            cells,
            best: vec![],
            references: vec![],
            notes: vec![],
            fingerprint: fingerprint(base, opts, data),
        },
        models,
    })
}

/// SM multi-class versus the cascade on identical subject pools.
pub fn run_cascade_vs_sm(data: &ExperimentData, cfg: &PipelineConfig, opts: &ExperimentOptions) -> Result<ExperimentOutput, EvalError> {
    let jobs = vec![
        ("SM".to_string(), cfg.clone(), ModelKind::Multiclass),
        ("CM".to_string(), cfg.clone(), ModelKind::Cascade),
    ];
    let (cells, models) = run_jobs(jobs, data, opts, "cascade")?;
    Ok(ExperimentOutput {
        report: ExperimentReport {
            id: "cascade".into(),
            axes: ["model".into(), "tested_on".into()],
            cells,
            best: vec![],
            references: refs(&[
                ("sm_global_pct", reference::SM_GLOBAL),
                ("cm_global_pct", reference::CM_GLOBAL),
                ("sm_s1_pct", reference::SM_S1),
                ("cm_s1_pct", reference::CM_S1),
            ]),
            notes: vec![],
            fingerprint: fingerprint(cfg, opts, data),
        },
        models,
    })
}

/// For each tested-on label and score row, the trained-on label scoring best.
/// Ties go to the first trained-on label in `order`.
pub fn best_table(cells: &[Cell], order: &[String]) -> Vec<BestEntry> {
    let tested: Vec<String> = order.iter().filter(|t| cells.iter().any(|c| &c.tested_on == *t)).cloned().collect();
    let mut out = Vec::new();
    for t in &tested {
        for (r, name) in SCORE_ROWS.iter().enumerate() {
            let mut best: Option<(&str, f64)> = None;
            for tr in order {
                let v = cells
                    .iter()
                    .find(|c| &c.trained_on == tr && &c.tested_on == t)
                    .and_then(|c| c.scores.as_ref())
                    .and_then(|s| s.get(r));
                if let Some(v) = v {
                    if best.map_or(true, |(_, b)| v > b) {
                        best = Some((tr, v));
                    }
                }
            }
            out.push(BestEntry {
                tested_on: t.clone(),
                score: name.to_string(),
                best_trained_on: best.map(|b| b.0.to_string()),
                value: best.map(|b| b.1),
            });
        }
    }
    out
}

/// One model per age group, each tested on every group's held-out subjects.
/// Each group's subjects are split separately, so no subject is both
/// trained and tested on.
pub fn run_age_experiment(data: &ExperimentData, cfg: &PipelineConfig, opts: &ExperimentOptions) -> Result<ExperimentOutput, EvalError> {
    let mut groups: BTreeMap<AgeGroup, Vec<String>> = BTreeMap::new();
    let mut notes = Vec::new();
    for s in &data.subjects {
        match s.age.and_then(assign_age_group) {
            Some(g) => groups.entry(g).or_default().push(s.id.clone()),
            None => notes.push(format!("subject {} has no age group; excluded", s.id)),
        }
    }
    if groups.len() < 2 {
        return Err(EvalError::Param(format!("age experiment needs at least 2 age groups, found {}", groups.len())));
    }
    let mut pools = BTreeMap::new();
    for (&g, ids) in &groups {
        let (train, test) = split_subjects(ids, opts.train_fraction, opts.split_seed)?;
        if train.len() < 2 || test.len() < 2 {
            return Err(EvalError::Param(format!(
                "group {g}: need at least 2 train and 2 test subjects, got {} and {}",
                train.len(),
                test.len()
            )));
        }
        pools.insert(g, (train, test));
    }
    let all_train: Vec<&str> = pools.values().flat_map(|(tr, _)| tr.iter().map(String::as_str)).collect();
    let all_test: Vec<&str> = pools.values().flat_map(|(_, te)| te.iter().map(String::as_str)).collect();
    assert_disjoint(all_train, all_test)?;

    let models: Vec<(AgeGroup, String, TrainedModel)> = pools
        .par_iter()
        .map(|(&g, (train_ids, _))| {
            let name = format!("age-{g}");
            Ok((g, name, train(cfg, opts.kind, &data.epochs_of(train_ids))?))
        })
        .collect::<Result<_, EvalError>>()?;
    let tests: Vec<(AgeGroup, Vec<Epoch>)> = pools.iter().map(|(&g, (_, te))| (g, data.epochs_of(te))).collect();
    let jobs: Vec<(usize, usize)> = (0..models.len()).flat_map(|m| (0..tests.len()).map(move |t| (m, t))).collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(m, t)| {
            let (g, name, model) = &models[m];
            let (tg, test) = &tests[t];
            let train_ids = pools[g].0.clone();
            let test_ids = ids_of(test);
            assert_disjoint(train_ids.iter().map(String::as_str), test_ids.iter().map(String::as_str))?;
            let report = evaluate(model, test)?;
            Ok(Cell {
                trained_on: g.to_string(),
                tested_on: tg.to_string(),
                scores: Some(ScoreRow::of(&report.fscores)),
                n_test_epochs: test.len(),
                train_subjects: train_ids,
                test_subjects: test_ids,
                model: Some(model_ref(name, model)),
                fold_mean_std: None,
                note: None,
                report: Some(report),
            })
        })
        .collect::<Result<_, EvalError>>()?;
    let order: Vec<String> = pools.keys().map(|g| g.to_string()).collect();
    Ok(ExperimentOutput {
        report: ExperimentReport {
            id: "age".into(),
            axes: ["trained_on".into(), "tested_on".into()],
            best: best_table(&cells, &order),
            cells,
            references: vec![],
            notes,
            fingerprint: fingerprint(cfg, opts, data),
        },
        models: models.into_iter().map(|(_, n, m)| (n, m)).collect(),
    })
}

/// Early- and late-night models, each tested on both halves of the held-out
/// subjects. Cell labels are trained half then tested half: EE, EL, LE, LL.
pub fn run_early_late_experiment(data: &ExperimentData, cfg: &PipelineConfig, opts: &ExperimentOptions) -> Result<ExperimentOutput, EvalError> {
    let s = split(data, opts)?;
    let mut halves: BTreeMap<&str, (Vec<Epoch>, Vec<Epoch>)> = BTreeMap::new();
    for sub in &data.subjects {
        let mut epochs = sub.epochs.clone();
        epochs.sort_by_key(|e| e.index);
        let (early, late) = split_early_late(&epochs, opts.split_mode).map_err(|e| EvalError::Param(format!("subject {}: {e}", sub.id)))?;
        if early.is_empty() || late.is_empty() {
            return Err(EvalError::Param(format!("subject {} has an empty half", sub.id)));
        }
        halves.insert(&sub.id, (early, late));
    }
    let gather = |ids: &[String], late: bool| -> Vec<Epoch> {
        ids.iter()
            .flat_map(|id| {
                let (e, l) = &halves[id.as_str()];
                if late { l.clone() } else { e.clone() }
            })
            .collect()
    };
    let train_sets = [("E", gather(&s.train, false)), ("L", gather(&s.train, true))];
    let test_sets = [("E", gather(&s.test, false)), ("L", gather(&s.test, true))];
    let models: Vec<(String, String, TrainedModel)> = train_sets
        .par_iter()
        .map(|(h, ep)| Ok((h.to_string(), format!("earlylate-{h}"), train(cfg, opts.kind, ep)?)))
        .collect::<Result<_, EvalError>>()?;
    let mut cells = Vec::new();
    for (h, name, model) in &models {
        for (th, test) in &test_sets {
            let (train_ids, test_ids) = (s.train.clone(), ids_of(test));
            assert_disjoint(train_ids.iter().map(String::as_str), test_ids.iter().map(String::as_str))?;
            let report = evaluate(model, test)?;
            cells.push(Cell {
                trained_on: h.clone(),
                tested_on: th.to_string(),
                scores: Some(ScoreRow::of(&report.fscores)),
                n_test_epochs: test.len(),
                train_subjects: train_ids,
                test_subjects: test_ids,
                model: Some(model_ref(name, model)),
                fold_mean_std: None,
                note: Some(format!("{h}{th}")),
                report: Some(report),
            });
        }
    }
    let mut notes = Vec::new();
    if opts.split_mode == SplitMode::Fixed4h {
        notes.push("fixed_4h windows overlap for nights shorter than eight hours".into());
    }
    Ok(ExperimentOutput {
        report: ExperimentReport {
            id: "earlylate".into(),
            axes: ["trained_on".into(), "tested_on".into()],
            cells,
            best: vec![],
            references: vec![],
            notes,
            fingerprint: fingerprint(cfg, opts, data),
        },
        models: models.into_iter().map(|(_, n, m)| (n, m)).collect(),
    })
}

/// RF and KNN on three-channel SM features over one subject split. KNN uses
/// the RF model's standardizer and the same wake undersampling.
pub fn run_methodology_comparison(data: &ExperimentData, cfg: &PipelineConfig, opts: &ExperimentOptions) -> Result<ExperimentOutput, EvalError> {
    let mut sm = with_variant(cfg, Variant::SM);
    sm.features = FeatureConfig {
        channels: ChannelKind::ALL.to_vec(),
        ..sm.features
    };
    let s = split(data, opts)?;
    let (train_epochs, test_epochs) = (data.epochs_of(&s.train), data.epochs_of(&s.test));
    let (mut rf_cell, rf) = holdout_cell(&sm, ModelKind::Multiclass, &train_epochs, &test_epochs, "RF", "test", "methods-RF")?;
    rf_cell.report = None;

    let raw_train = rf.space.extract(&train_epochs)?;
    let raw_test = rf.space.extract(&test_epochs)?;
    let labels = raw_train.labels();
    let keep = rus_wake(&labels, sm.rus_fraction, &RngStream::new(sm.seed, RUS_STREAM)).map_err(crate::models::ModelError::from)?;
    let x_train = rf.space.transform(&raw_train.select_rows(&keep).values)?;
    let y: Vec<usize> = keep.iter().map(|&i| labels[i].index()).collect();
    let x_test = rf.space.transform(&raw_test.values)?;
    let pred = knn_predict(&x_train, &y, &x_test, DEFAULT_K, N_STAGES).map_err(crate::models::ModelError::from)?;
    let pred: Vec<StageLabel> = pred.into_iter().map(|c| StageLabel::from_index(c).expect("5 classes")).collect();
    let truth = raw_test.labels();
    let knn_f = fscore(&confusion(&truth, &pred)?);
    let subjects: Vec<String> = raw_test.row_meta.iter().map(|r| r.subject_id.clone()).collect();
    let knn_report = EvalReport::from_predictions(&sm, ModelKind::Multiclass, &subjects, &truth, &pred)?;

    let knn_cell = Cell {
        trained_on: "KNN".into(),
        tested_on: "test".into(),
        scores: Some(ScoreRow::of(&knn_f)),
        n_test_epochs: test_epochs.len(),
        train_subjects: rf_cell.train_subjects.clone(),
        test_subjects: rf_cell.test_subjects.clone(),
        model: None,
        fold_mean_std: None,
        note: Some(format!("k = {DEFAULT_K}, Euclidean, on the RF model's standardized features")),
        report: Some(knn_report),
    };
    let svm_cell = Cell {
        trained_on: "SVM".into(),
        tested_on: "test".into(),
        scores: None,
        n_test_epochs: 0,
        train_subjects: vec![],
        test_subjects: vec![],
        model: None,
        fold_mean_std: None,
        note: Some(SVM_NOTE.into()),
        report: None,
    };
    let rf_report = evaluate(&rf, &test_epochs)?;
    rf_cell.report = Some(rf_report);
    let mut references = Vec::new();
    for (i, class) in SCORE_ROWS[1..].iter().enumerate() {
        references.push(Reference {
            name: format!("rf_{class}"),
            value: reference::RF_PER_CLASS[i],
        });
        references.push(Reference {
            name: format!("knn_{class}"),
            value: reference::KNN_PER_CLASS[i],
        });
    }
    Ok(ExperimentOutput {
        report: ExperimentReport {
            id: "methods".into(),
            axes: ["method".into(), "tested_on".into()],
            cells: vec![rf_cell, knn_cell, svm_cell],
            best: vec![],
            references,
            notes: vec![SVM_NOTE.into()],
            fingerprint: fingerprint(&sm, opts, data),
        },
        models: vec![("methods-RF".into(), rf)],
    })
}

fn fmt_score(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6}"))
}

/// One row per cell.
pub fn report_csv(r: &ExperimentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["experiment", "trained_on", "tested_on"];
    header.extend(SCORE_ROWS);
    header.extend(["n_test_epochs", "model_sha256", "note"]);
    w.write_record(&header).expect("in-memory csv");
    for c in &r.cells {
        let mut row = vec![r.id.clone(), c.trained_on.clone(), c.tested_on.clone()];
        for i in 0..SCORE_ROWS.len() {
            row.push(fmt_score(c.scores.as_ref().and_then(|s| s.get(i))));
        }
        row.push(c.n_test_epochs.to_string());
        row.push(c.model.as_ref().map(|m| m.sha256.clone()).unwrap_or_default());
        row.push(c.note.clone().unwrap_or_default());
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// Per-subject per-class F values, one row per (cell, subject, score).
pub fn per_subject_csv(r: &ExperimentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["experiment", "trained_on", "tested_on", "subject", "score", "f"]).expect("in-memory csv");
    for c in &r.cells {
        let Some(rep) = &c.report else { continue };
        for s in &rep.per_subject {
            let row = ScoreRow::of(&s.fscores);
            for (i, name) in SCORE_ROWS.iter().enumerate() {
                w.write_record([&r.id, &c.trained_on, &c.tested_on, &s.subject_id, &name.to_string(), &fmt_score(row.get(i))])
                    .expect("in-memory csv");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::testutil::{sm_config, toy_epochs};

    fn data(subjects: usize, ages: &[u32]) -> ExperimentData {
        let epochs = toy_epochs(subjects, 3);
        let ids: BTreeSet<String> = epochs.iter().map(|e| e.subject_id.clone()).collect();
        ExperimentData::new(
            ids.into_iter()
                .enumerate()
                .map(|(i, id)| SubjectData {
                    age: ages.get(i).copied(),
                    epochs: epochs.iter().filter(|e| e.subject_id == id).cloned().collect(),
                    id,
                })
                .collect(),
        )
    }

    #[test]
    fn cascade_report_shape_and_determinism() {
        let d = data(4, &[]);
        let opts = ExperimentOptions::default();
        let a = run_cascade_vs_sm(&d, &sm_config(), &opts).unwrap();
        assert_eq!(a.report.cells.len(), 2);
        assert!(a.report.global("SM", "test").is_some() && a.report.global("CM", "test").is_some());
        assert_eq!(a.models.len(), 2);
        let b = run_cascade_vs_sm(&d, &sm_config(), &opts).unwrap();
        assert_eq!(serde_json::to_string(&a.report).unwrap(), serde_json::to_string(&b.report).unwrap());
        assert_eq!(report_csv(&a.report), report_csv(&b.report));
        for c in &a.report.cells {
            let train: BTreeSet<_> = c.train_subjects.iter().collect();
            assert!(c.test_subjects.iter().all(|t| !train.contains(t)));
        }
    }

    #[test]
    fn loso_protocol_cells() {
        let d = data(3, &[]);
        let opts = ExperimentOptions {
            protocol: Protocol::Loso,
            ..Default::default()
        };
        let r = run_cascade_vs_sm(&d, &sm_config(), &opts).unwrap().report;
        let c = r.cell("CM", "loso").unwrap();
        assert!(c.fold_mean_std.is_some());
        assert_eq!(c.report.as_ref().unwrap().per_subject.len(), 3);
    }

    #[test]
    fn channel_and_feature_shapes() {
        let d = data(4, &[]);
        let mut cfg = sm_config();
        cfg.pca_k = Some(5);
        let opts = ExperimentOptions::default();
        let r = run_channel_comparison(&d, &cfg, &opts).unwrap().report;
        let labels: Vec<&str> = r.cells.iter().map(|c| c.trained_on.as_str()).collect();
        assert_eq!(labels, ["EEG", "EEG+EOG", "EEG+EOG+EMG"]);
        assert!(r.cells.iter().all(|c| c.report.as_ref().unwrap().config.features.variant == Variant::WM));
        assert_eq!(report_csv(&r).lines().count(), 4);
        let r = run_feature_comparison(&d, &variant_configs(&cfg), &opts).unwrap().report;
        assert_eq!(r.cells.len(), 3);
        assert!(per_subject_csv(&r).lines().count() > 1);
    }

    #[test]
    fn methods_has_svm_placeholder() {
        let d = data(4, &[]);
        let r = run_methodology_comparison(&d, &sm_config(), &ExperimentOptions::default()).unwrap().report;
        let svm = r.cell("SVM", "test").unwrap();
        assert!(svm.scores.is_none());
        assert_eq!(svm.note.as_deref(), Some(SVM_NOTE));
        assert!(r.global("KNN", "test").is_some());
        assert!(report_csv(&r).contains(SVM_NOTE));
    }

    #[test]
    fn age_matrix_disjoint() {
        let d = data(8, &[30, 31, 32, 33, 90, 91, 92, 93]);
        let opts = ExperimentOptions {
            kind: ModelKind::Multiclass,
            train_fraction: 0.5,
            ..Default::default()
        };
        let r = run_age_experiment(&d, &sm_config(), &opts).unwrap().report;
        assert_eq!(r.cells.len(), 4);
        assert_eq!(r.best.len(), 2 * 6);
        for c in &r.cells {
            let train: BTreeSet<_> = c.train_subjects.iter().collect();
            assert!(c.test_subjects.iter().all(|t| !train.contains(t)));
        }
        let too_few = data(4, &[30, 31, 90, 91]);
        assert!(run_age_experiment(&too_few, &sm_config(), &opts).is_err());
    }

    #[test]
    fn early_late_cells() {
        let d = data(4, &[]);
        let opts = ExperimentOptions {
            kind: ModelKind::Multiclass,
            train_fraction: 0.5,
            ..Default::default()
        };
        let r = run_early_late_experiment(&d, &sm_config(), &opts);
        // toy nights have too few epochs per half to hold every class
        match r {
            Ok(out) => assert_eq!(out.report.cells.len(), 4),
            Err(e) => assert!(matches!(e, EvalError::Model(_)), "{e}"),
        }
    }

    #[test]
    fn best_table_picks_max() {
        let cell = |tr: &str, te: &str, g: f64| Cell {
            trained_on: tr.into(),
            tested_on: te.into(),
            scores: Some(ScoreRow {
                global: g,
                per_class: vec![Some(g); 5],
            }),
            n_test_epochs: 1,
            train_subjects: vec![],
            test_subjects: vec![],
            model: None,
            fold_mean_std: None,
            note: None,
            report: None,
        };
        let cells = vec![cell("A", "A", 0.9), cell("B", "A", 0.5), cell("A", "B", 0.4), cell("B", "B", 0.4)];
        let order = vec!["A".to_string(), "B".to_string()];
        let t = best_table(&cells, &order);
        assert_eq!(t[0].best_trained_on.as_deref(), Some("A"));
        // tie keeps the first
        assert_eq!(t[6].best_trained_on.as_deref(), Some("A"));
    }

    #[test]
    fn checksum_changes_with_data() {
        let d = data(2, &[]);
        let mut e = d.clone();
        e.subjects[0].epochs[0].eeg[0] += 1.0;
        assert_ne!(d.checksum(), e.checksum());
        assert_eq!(d.checksum(), data(2, &[]).checksum());
    }
}
