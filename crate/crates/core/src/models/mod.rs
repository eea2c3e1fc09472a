//! Trained pipelines: multi-class forests on WM/SM/EM features and the
//! two-level cascade.
//!
//! Training order is fixed: features, standardizer fit on all training rows,
//! wake undersampling, optional PCA fit on the retained rows, forest. Rows
//! are first put in canonical `(subject, index)` order so shuffled input
//! gives the same model.
//!
//! The cascade's first level always uses SM features (with the configured
//! channels, family and level) and separates {W, S1, REM} from {S2, SWS}.
//! Each group then has its own forest on the configured variant. When the
//! configured variant is SM both levels share one feature space.

mod format;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Epoch, StageLabel, N_STAGES};
use crate::features::{
    ColumnMeta, FeatureConfig, FeatureError, FeatureExtractor, FeatureMatrix, StandardizationStats, Variant,
};
use crate::mlcore::{forest_train, pca_fit, rus_wake, Forest, ForestParams, Matrix, MlError, PcaModel, RngStream};

pub use format::{decode_model, encode_model, load_model, save_model, FORMAT_VERSION, MAGIC};

/// Stream id reserved for wake undersampling under the master seed. Tree
/// streams use ids `0..n_trees`, far below this.
pub const RUS_STREAM: u64 = 1 << 40;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error("training data lacks classes: {}", names(.0))]
    MissingClasses(Vec<StageLabel>),
    #[error("cascade group {0} has no training epochs")]
    EmptyGroup(StageGroup),
    #[error("invalid pipeline config: {0}")]
    Config(String),
    #[error("level-1 feature rows ({found}) do not match main rows ({expected})")]
    RowMismatch { expected: usize, found: usize },
    #[error("model file: bad magic")]
    Magic,
    #[error("model file: unsupported format version {found} (this build reads {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("model file corrupt at byte {offset}: {message}")]
    Corrupt { offset: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: std::path::PathBuf, source: std::io::Error },
}

fn names(labels: &[StageLabel]) -> String {
    labels.iter().map(|l| l.name()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub features: FeatureConfig,
    /// Fraction of W training rows kept, in (0, 1].
    pub rus_fraction: f64,
    /// Number of principal components; `None` disables PCA.
    pub pca_k: Option<usize>,
    pub n_trees: usize,
    pub seed: u64,
    #[serde(default = "one")]
    pub min_leaf: usize,
}

fn one() -> usize {
    1
}

impl PipelineConfig {
    /// Defaults for a feature config: all W rows, 100 trees, seed 1234, PCA
    /// to 100 components for WM/EM and off for SM.
    pub fn new(features: FeatureConfig) -> Self {
        let pca_k = match features.variant {
            Variant::SM => None,
            Variant::WM | Variant::EM => Some(100),
        };
        Self {
            features,
            rus_fraction: 1.0,
            pca_k,
            n_trees: 100,
            seed: crate::mlcore::DEFAULT_SEED,
            min_leaf: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.features.validate()?;
        if !(self.rus_fraction > 0.0 && self.rus_fraction <= 1.0) {
            return Err(ModelError::Config(format!("rus_fraction {} not in (0, 1]", self.rus_fraction)));
        }
        if self.n_trees == 0 || self.min_leaf == 0 {
            return Err(ModelError::Config("n_trees and min_leaf must be at least 1".into()));
        }
        if self.pca_k == Some(0) {
            return Err(ModelError::Config("pca_k must be at least 1".into()));
        }
        Ok(())
    }

    /// Compact label like `SM/EEG+EOG+EMG/db4/L4/rus0.5/pca-/t100`.
    pub fn label(&self) -> String {
        let pca = self.pca_k.map_or("-".to_string(), |k| k.to_string());
        format!("{}/rus{}/pca{}/t{}", self.features, self.rus_fraction, pca, self.n_trees)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StageGroup {
    /// W, S1, REM.
    Group1,
    /// S2, SWS.
    Group2,
}

impl StageGroup {
    pub fn of(label: StageLabel) -> StageGroup {
        match label {
            StageLabel::W | StageLabel::S1 | StageLabel::Rem => StageGroup::Group1,
            StageLabel::S2 | StageLabel::Sws => StageGroup::Group2,
        }
    }

    /// Member classes in the order of the group forest's class indices.
    pub fn members(self) -> &'static [StageLabel] {
        match self {
            StageGroup::Group1 => &[StageLabel::W, StageLabel::S1, StageLabel::Rem],
            StageGroup::Group2 => &[StageLabel::S2, StageLabel::Sws],
        }
    }

    fn local_index(self, label: StageLabel) -> usize {
        self.members().iter().position(|&l| l == label).expect("label in group")
    }
}

impl std::fmt::Display for StageGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let members: Vec<&str> = self.members().iter().map(|l| l.name()).collect();
        write!(f, "{{{}}}", members.join(", "))
    }
}

/// Feature config plus the fitted standardizer and optional PCA.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    pub config: FeatureConfig,
    pub column_meta: Vec<ColumnMeta>,
    pub standardizer: StandardizationStats,
    pub pca: Option<PcaModel>,
}

impl FeatureSpace {
    /// Output dimension seen by the classifier.
    pub fn output_dim(&self) -> usize {
        self.pca.as_ref().map_or(self.standardizer.len(), |p| p.k())
    }

    /// Standardize (and project) a raw feature matrix.
    pub fn transform(&self, raw: &Matrix) -> Result<Matrix, ModelError> {
        let z = self.standardizer.apply(raw)?;
        Ok(match &self.pca {
            Some(p) => p.transform(&z)?,
            None => z,
        })
    }

    pub fn extract(&self, epochs: &[Epoch]) -> Result<FeatureMatrix, ModelError> {
        Ok(FeatureExtractor::new(&self.config)?.extract_matrix(epochs)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Multiclass(Forest),
    Cascade {
        /// `None` when level 1 shares the main feature space.
        level1_space: Option<FeatureSpace>,
        level1: Forest,
        group1: Forest,
        group2: Forest,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub config: PipelineConfig,
    pub space: FeatureSpace,
    pub classifier: Classifier,
    /// Training rows after undersampling (before any cascade routing).
    pub n_training_rows: usize,
}

impl TrainedModel {
    pub fn kind(&self) -> &'static str {
        match self.classifier {
            Classifier::Multiclass(_) => "multiclass",
            Classifier::Cascade { .. } => "cascade",
        }
    }

    /// SM config used by the cascade's first level, if separate.
    pub fn level1_config(&self) -> Option<&FeatureConfig> {
        match &self.classifier {
            Classifier::Cascade {
                level1_space: Some(s), ..
            } => Some(&s.config),
            _ => None,
        }
    }

    pub fn predict(&self, epochs: &[Epoch]) -> Result<Vec<StageLabel>, ModelError> {
        if epochs.is_empty() {
            return Ok(Vec::new());
        }
        let main = self.space.extract(epochs)?;
        let level1 = match &self.classifier {
            Classifier::Cascade {
                level1_space: Some(s), ..
            } => Some(s.extract(epochs)?),
            _ => None,
        };
        self.predict_features(&main, level1.as_ref())
    }

    /// Predict from raw (unstandardized) feature matrices. `level1` is the
    /// SM matrix for a cascade with a separate first-level space.
    pub fn predict_features(&self, main: &FeatureMatrix, level1: Option<&FeatureMatrix>) -> Result<Vec<StageLabel>, ModelError> {
        check_columns(&self.space, main)?;
        let x = self.space.transform(&main.values)?;
        match &self.classifier {
            Classifier::Multiclass(f) => Ok(f
                .predict(&x)?
                .labels
                .into_iter()
                .map(|c| StageLabel::from_index(c).expect("5-class forest"))
                .collect()),
            Classifier::Cascade {
                level1_space,
                level1: l1,
                group1,
                group2,
            } => {
                let x1 = match level1_space {
                    Some(space) => {
                        let m = level1.ok_or_else(|| ModelError::Config("cascade needs level-1 SM features".into()))?;
                        check_columns(space, m)?;
                        if m.rows() != main.rows() {
                            return Err(ModelError::RowMismatch {
                                expected: main.rows(),
                                found: m.rows(),
                            });
                        }
                        space.transform(&m.values)?
                    }
                    None => x.clone(),
                };
                let route = l1.predict(&x1)?.labels;
                let g1 = group1.predict(&x)?.labels;
                let g2 = group2.predict(&x)?.labels;
                Ok((0..main.rows())
                    .map(|r| {
                        if route[r] == 0 {
                            StageGroup::Group1.members()[g1[r]]
                        } else {
                            StageGroup::Group2.members()[g2[r]]
                        }
                    })
                    .collect())
            }
        }
    }
}

fn check_columns(space: &FeatureSpace, m: &FeatureMatrix) -> Result<(), ModelError> {
    if m.cols() != space.standardizer.len() {
        return Err(MlError::DimensionMismatch {
            expected: space.standardizer.len(),
            found: m.cols(),
        }
        .into());
    }
    Ok(())
}

/// Row indices in `(subject, index)` order, stable for duplicates.
fn canonical_order(m: &FeatureMatrix) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m.rows()).collect();
    idx.sort_by(|&a, &b| {
        let (ra, rb) = (&m.row_meta[a], &m.row_meta[b]);
        ra.subject_id.cmp(&rb.subject_id).then(ra.index.cmp(&rb.index))
    });
    idx
}

fn missing_classes(labels: &[StageLabel], required: &[StageLabel]) -> Vec<StageLabel> {
    required.iter().copied().filter(|c| !labels.contains(c)).collect()
}

/// Standardizer on `rows`, PCA on the retained subset.
fn fit_space(
    cfg: &FeatureConfig,
    raw: &FeatureMatrix,
    retained: &[usize],
    pca_k: Option<usize>,
) -> Result<(FeatureSpace, Matrix), ModelError> {
    let standardizer = StandardizationStats::fit(&raw.values)?;
    let z = standardizer.apply(&raw.values.select_rows(retained))?;
    let (pca, x) = match pca_k {
        None => (None, z),
        Some(k) => {
            let cap = z.cols().min(z.rows().saturating_sub(1));
            let k_eff = k.min(cap);
            if k_eff < k {
                log::warn!("pca_k {k} exceeds the fit cap {cap}; using {k_eff}");
            }
            if k_eff == 0 {
                return Err(MlError::PcaK { k, max: cap }.into());
            }
            let p = pca_fit(&z, k_eff)?;
            let x = p.transform(&z)?;
            (Some(p), x)
        }
    };
    Ok((
        FeatureSpace {
            config: cfg.canonical(),
            column_meta: raw.column_meta.clone(),
            standardizer,
            pca,
        },
        x,
    ))
}

fn forest_params(cfg: &PipelineConfig, seed: u64) -> ForestParams {
    ForestParams {
        n_trees: cfg.n_trees,
        min_leaf: cfg.min_leaf,
        max_features: None,
        seed,
    }
}

/// Multi-class model from a precomputed raw feature matrix.
pub fn fit_multiclass(cfg: &PipelineConfig, raw: &FeatureMatrix) -> Result<TrainedModel, ModelError> {
    cfg.validate()?;
    let order = canonical_order(raw);
    let raw = raw.select_rows(&order);
    let labels = raw.labels();
    let missing = missing_classes(&labels, &StageLabel::ALL);
    if !missing.is_empty() {
        return Err(ModelError::MissingClasses(missing));
    }
    let retained = rus_wake(&labels, cfg.rus_fraction, &RngStream::new(cfg.seed, RUS_STREAM))?;
    let (space, x) = fit_space(&cfg.features, &raw, &retained, cfg.pca_k)?;
    let y: Vec<usize> = retained.iter().map(|&i| labels[i].index()).collect();
    let forest = forest_train(&x, &y, N_STAGES, &forest_params(cfg, cfg.seed))?;
    Ok(TrainedModel {
        config: cfg.clone(),
        space,
        classifier: Classifier::Multiclass(forest),
        n_training_rows: retained.len(),
    })
}

/// SM config matching `cfg` in channels, family and level.
pub fn level1_feature_config(cfg: &FeatureConfig) -> FeatureConfig {
    FeatureConfig {
        variant: Variant::SM,
        ..cfg.canonical()
    }
}

/// Cascade from precomputed raw matrices. `level1` must hold SM features
/// for the same rows as `raw` when the configured variant is not SM; it is
/// ignored otherwise.
pub fn fit_cascade(cfg: &PipelineConfig, raw: &FeatureMatrix, level1: Option<&FeatureMatrix>) -> Result<TrainedModel, ModelError> {
    cfg.validate()?;
    let shared = cfg.features.variant == Variant::SM;
    let level1 = if shared {
        None
    } else {
        let m = level1.ok_or_else(|| ModelError::Config("cascade needs level-1 SM features".into()))?;
        if m.rows() != raw.rows() {
            return Err(ModelError::RowMismatch {
                expected: raw.rows(),
                found: m.rows(),
            });
        }
        Some(m)
    };
    let order = canonical_order(raw);
    let raw = raw.select_rows(&order);
    let labels = raw.labels();
    for group in [StageGroup::Group1, StageGroup::Group2] {
        if !labels.iter().any(|&l| StageGroup::of(l) == group) {
            return Err(ModelError::EmptyGroup(group));
        }
    }
    let missing = missing_classes(&labels, &StageLabel::ALL);
    if !missing.is_empty() {
        return Err(ModelError::MissingClasses(missing));
    }
    let retained = rus_wake(&labels, cfg.rus_fraction, &RngStream::new(cfg.seed, RUS_STREAM))?;
    let (space, x) = fit_space(&cfg.features, &raw, &retained, cfg.pca_k)?;
    let (level1_space, x1) = match level1 {
        None => (None, x.clone()),
        Some(m) => {
            let m = m.select_rows(&order);
            let (s, x1) = fit_space(&level1_feature_config(&cfg.features), &m, &retained, None)?;
            (Some(s), x1)
        }
    };
    let seed = |k: u64| RngStream::new(cfg.seed, k).derive_seed();
    let route: Vec<usize> = retained
        .iter()
        .map(|&i| match StageGroup::of(labels[i]) {
            StageGroup::Group1 => 0,
            StageGroup::Group2 => 1,
        })
        .collect();
    let level1_forest = forest_train(&x1, &route, 2, &forest_params(cfg, seed(0)))?;
    let group_forest = |group: StageGroup, stream: u64| -> Result<Forest, ModelError> {
        let rows: Vec<usize> = (0..retained.len())
            .filter(|&r| StageGroup::of(labels[retained[r]]) == group)
            .collect();
        let y: Vec<usize> = rows.iter().map(|&r| group.local_index(labels[retained[r]])).collect();
        Ok(forest_train(
            &x.select_rows(&rows),
            &y,
            group.members().len(),
            &forest_params(cfg, seed(stream)),
        )?)
    };
    let (group1, group2) = rayon::join(
        || group_forest(StageGroup::Group1, 1),
        || group_forest(StageGroup::Group2, 2),
    );
    Ok(TrainedModel {
        config: cfg.clone(),
        space,
        classifier: Classifier::Cascade {
            level1_space,
            level1: level1_forest,
            group1: group1?,
            group2: group2?,
        },
        n_training_rows: retained.len(),
    })
}

pub fn train_multiclass(cfg: &PipelineConfig, epochs: &[Epoch]) -> Result<TrainedModel, ModelError> {
    cfg.validate()?;
    let raw = FeatureExtractor::new(&cfg.features)?.extract_matrix(epochs)?;
    fit_multiclass(cfg, &raw)
}

pub fn train_cascade(cfg: &PipelineConfig, epochs: &[Epoch]) -> Result<TrainedModel, ModelError> {
    cfg.validate()?;
    let raw = FeatureExtractor::new(&cfg.features)?.extract_matrix(epochs)?;
    let level1 = if cfg.features.variant == Variant::SM {
        None
    } else {
        Some(FeatureExtractor::new(&level1_feature_config(&cfg.features))?.extract_matrix(epochs)?)
    };
    fit_cascade(cfg, &raw, level1.as_ref())
}

pub fn predict(m: &TrainedModel, epochs: &[Epoch]) -> Result<Vec<StageLabel>, ModelError> {
    m.predict(epochs)
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    fn accuracy(a: &[StageLabel], b: &[StageLabel]) -> f64 {
        a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / a.len() as f64
    }

    #[test]
    fn multiclass_fits_training_data() {
        let epochs = toy_epochs(2, 6);
        let m = train_multiclass(&sm_config(), &epochs).unwrap();
        assert_eq!(m.n_training_rows, epochs.len());
        let pred = m.predict(&epochs).unwrap();
        let truth: Vec<StageLabel> = epochs.iter().map(|e| e.label).collect();
        assert!(accuracy(&pred, &truth) >= 0.99);
        assert!(m.predict(&[]).unwrap().is_empty());
    }

    #[test]
    fn missing_class_listed() {
        let epochs: Vec<Epoch> = toy_epochs(1, 3).into_iter().filter(|e| e.label != StageLabel::S1).collect();
        let err = train_multiclass(&sm_config(), &epochs).unwrap_err();
        assert!(matches!(&err, ModelError::MissingClasses(v) if v == &vec![StageLabel::S1]), "{err}");
        assert!(err.to_string().contains("S1"));
    }

    #[test]
    fn shuffled_input_gives_same_model() {
        let epochs = toy_epochs(2, 4);
        let mut rev = epochs.clone();
        rev.reverse();
        let a = encode_model(&train_multiclass(&sm_config(), &epochs).unwrap());
        let b = encode_model(&train_multiclass(&sm_config(), &rev).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn rus_reduces_rows() {
        let epochs = toy_epochs(2, 10);
        let mut cfg = sm_config();
        cfg.rus_fraction = 0.5;
        let m = train_multiclass(&cfg, &epochs).unwrap();
        assert_eq!(m.n_training_rows, epochs.len() - 10);
    }

    #[test]
    fn cascade_routing_is_consistent() {
        let epochs = toy_epochs(2, 6);
        let m = train_cascade(&sm_config(), &epochs).unwrap();
        let pred = m.predict(&epochs).unwrap();
        let truth: Vec<StageLabel> = epochs.iter().map(|e| e.label).collect();
        assert!(accuracy(&pred, &truth) >= 0.99);
        // recompute the level-1 decision and check the final label agrees with it
        let Classifier::Cascade { level1, .. } = &m.classifier else { panic!() };
        let raw = m.space.extract(&epochs).unwrap();
        let route = level1.predict(&m.space.transform(&raw.values).unwrap()).unwrap().labels;
        for (r, p) in route.iter().zip(&pred) {
            let group = if *r == 0 { StageGroup::Group1 } else { StageGroup::Group2 };
            assert_eq!(StageGroup::of(*p), group);
        }
    }

    #[test]
    fn cascade_with_wm_uses_separate_level1() {
        let epochs = toy_epochs(1, 4);
        let mut cfg = sm_config();
        cfg.features.variant = Variant::WM;
        cfg.features.channels = vec![crate::dataset::ChannelKind::Emg];
        cfg.pca_k = Some(5);
        let m = train_cascade(&cfg, &epochs).unwrap();
        assert_eq!(m.level1_config().unwrap().variant, Variant::SM);
        assert_eq!(m.space.output_dim(), 5);
        assert_eq!(m.predict(&epochs).unwrap().len(), epochs.len());
    }

    #[test]
    fn cascade_needs_group_classes() {
        let epochs: Vec<Epoch> = toy_epochs(1, 3)
            .into_iter()
            .filter(|e| matches!(e.label, StageLabel::W | StageLabel::S2))
            .collect();
        assert!(train_cascade(&sm_config(), &epochs).is_err());
        let only_g2: Vec<Epoch> = toy_epochs(1, 3)
            .into_iter()
            .filter(|e| StageGroup::of(e.label) == StageGroup::Group2)
            .collect();
        assert!(matches!(
            train_cascade(&sm_config(), &only_g2),
            Err(ModelError::EmptyGroup(StageGroup::Group1))
        ));
    }

    #[test]
    fn channel_mismatch_is_error() {
        let epochs = toy_epochs(1, 3);
        let m = train_multiclass(&sm_config(), &epochs).unwrap();
        let mut bad = epochs[..2].to_vec();
        bad[0].eog.clear();
        assert!(m.predict(&bad).is_err());
    }

    #[test]
    fn groups_partition_classes() {
        let mut all: Vec<StageLabel> = [StageGroup::Group1, StageGroup::Group2]
            .iter()
            .flat_map(|g| g.members().iter().copied())
            .collect();
        all.sort();
        assert_eq!(all, StageLabel::ALL.to_vec());
    }
}
