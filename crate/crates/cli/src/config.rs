//! Run configuration: a single JSON document, validated strictly before any
//! work starts. Every problem is reported at once, each naming its key.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use sleepscore::dataset::{ChannelKind, SplitMode};
use sleepscore::eval::{GridSpec, ModelKind};
use sleepscore::experiments::{ExperimentOptions, Protocol};
use sleepscore::features::{FeatureConfig, Variant};
use sleepscore::models::PipelineConfig;
use sleepscore::wavelet::{max_level, WaveletFamily};

pub const DEFAULT_OUTPUT_DIR: &str = "runs";
pub const DEFAULT_NOTCH_HZ: f64 = 50.0;

const TOP_KEYS: [&str; 13] = [
    "data_dir",
    "output_dir",
    "features",
    "pipeline",
    "grid",
    "kind",
    "split_seed",
    "train_fraction",
    "protocol",
    "early_late_mode",
    "workers",
    "notch_hz",
    "gridsearch_report",
];
const FEATURE_KEYS: [&str; 4] = ["variant", "channels", "family", "level"];
const PIPELINE_KEYS: [&str; 5] = ["rus_fraction", "pca_k", "n_trees", "seed", "min_leaf"];
const GRID_KEYS: [&str; 5] = ["families", "rus_fractions", "levels", "pca_sizes", "tree_counts"];

/// Effective configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub features: FeatureConfig,
    pub pipeline: PipelineConfig,
    /// Whether `pipeline` was given explicitly rather than defaulted.
    pub pipeline_pinned: bool,
    pub grid: GridSpec,
    pub kind: ModelKind,
    pub split_seed: u64,
    pub train_fraction: f64,
    pub protocol: Protocol,
    pub early_late_mode: SplitMode,
    /// `None` means all available cores.
    pub workers: Option<usize>,
    /// Mains frequency to notch out; `None` disables the filter.
    pub notch_hz: Option<f64>,
    /// Grid-search report whose best config replaces unpinned hyperparameters.
    pub gridsearch_report: Option<PathBuf>,
    /// Accepted-but-adjusted settings, echoed into the run manifest.
    pub warnings: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {} problem(s):\n  {}", problems.len(), problems.join("\n  "))]
    Invalid { path: PathBuf, problems: Vec<String> },
}

pub fn default_features() -> FeatureConfig {
    FeatureConfig {
        variant: Variant::SM,
        channels: ChannelKind::ALL.to_vec(),
        family: WaveletFamily::Daubechies(4),
        level: 4,
    }
}

impl RunConfig {
    /// All defaults around a data directory.
    pub fn with_data(data_dir: PathBuf) -> Self {
        let features = default_features();
        Self {
            data_dir,
            output_dir: DEFAULT_OUTPUT_DIR.into(),
            pipeline: PipelineConfig::new(features.clone()),
            features,
            pipeline_pinned: false,
            grid: GridSpec::default(),
            kind: ModelKind::Cascade,
            split_seed: sleepscore::mlcore::DEFAULT_SEED,
            train_fraction: sleepscore::eval::DEFAULT_TRAIN_FRACTION,
            protocol: Protocol::HoldOut,
            early_late_mode: SplitMode::Halves,
            workers: None,
            notch_hz: Some(DEFAULT_NOTCH_HZ),
            gridsearch_report: None,
            warnings: Vec::new(),
        }
    }

    pub fn experiment_options(&self) -> ExperimentOptions {
        ExperimentOptions {
            split_seed: self.split_seed,
            train_fraction: self.train_fraction,
            protocol: self.protocol,
            split_mode: self.early_late_mode,
            kind: self.kind,
        }
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|source| ConfigError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&value).map_err(|problems| ConfigError::Invalid {
        path: path.to_path_buf(),
        problems,
    })
}

struct Fields<'a> {
    obj: &'a Map<String, Value>,
    prefix: &'a str,
    problems: &'a mut Vec<String>,
}

impl Fields<'_> {
    fn key(&self, k: &str) -> String {
        if self.prefix.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.prefix)
        }
    }

    fn unknown(&mut self, known: &[&str]) {
        for k in self.obj.keys() {
            if !known.contains(&k.as_str()) {
                let key = self.key(k);
                self.problems.push(format!("{key}: unknown key (expected one of {})", known.join(", ")));
            }
        }
    }

    /// `Ok(None)` when absent; type errors are recorded and yield `Err`.
    fn get<T: DeserializeOwned>(&mut self, k: &str) -> Result<Option<T>, ()> {
        let Some(v) = self.obj.get(k) else { return Ok(None) };
        match T::deserialize(v.clone()) {
            Ok(t) => Ok(Some(t)),
            Err(e) => {
                let key = self.key(k);
                self.problems.push(format!("{key}: {e}"));
                Err(())
            }
        }
    }

    fn object(&mut self, k: &str) -> Option<&Map<String, Value>> {
        match self.obj.get(k) {
            None => None,
            Some(Value::Object(m)) => Some(m),
            Some(_) => {
                let key = self.key(k);
                self.problems.push(format!("{key}: expected an object"));
                None
            }
        }
    }
}

/// Validate a parsed config document, returning every problem found.
pub fn parse_config(value: &Value) -> Result<RunConfig, Vec<String>> {
    let mut problems = Vec::new();
    let Value::Object(top) = value else {
        return Err(vec!["config: expected a JSON object".into()]);
    };
    let mut f = Fields {
        obj: top,
        prefix: "",
        problems: &mut problems,
    };
    f.unknown(&TOP_KEYS);
    let data_dir: Option<PathBuf> = f.get("data_dir").ok().flatten();
    if data_dir.is_none() && !top.contains_key("data_dir") {
        f.problems.push("data_dir: required key missing".into());
    }
    let mut cfg = RunConfig::with_data(data_dir.unwrap_or_default());
    macro_rules! set {
        ($fields:expr, $key:literal => $target:expr) => {
            if let Ok(Some(v)) = $fields.get($key) {
                $target = v;
            }
        };
    }
    set!(f, "output_dir" => cfg.output_dir);
    set!(f, "kind" => cfg.kind);
    set!(f, "split_seed" => cfg.split_seed);
    set!(f, "train_fraction" => cfg.train_fraction);
    set!(f, "protocol" => cfg.protocol);
    set!(f, "early_late_mode" => cfg.early_late_mode);
    set!(f, "workers" => cfg.workers);
    set!(f, "notch_hz" => cfg.notch_hz);
    set!(f, "gridsearch_report" => cfg.gridsearch_report);

    let features = f.object("features").cloned();
    let pipeline = f.object("pipeline").cloned();
    let grid = f.object("grid").cloned();
    if let Some(obj) = &features {
        let mut g = Fields {
            obj,
            prefix: "features",
            problems: &mut problems,
        };
        g.unknown(&FEATURE_KEYS);
        set!(g, "variant" => cfg.features.variant);
        set!(g, "channels" => cfg.features.channels);
        set!(g, "family" => cfg.features.family);
        set!(g, "level" => cfg.features.level);
    }
    cfg.pipeline = PipelineConfig::new(cfg.features.clone());
    if let Some(obj) = &pipeline {
        cfg.pipeline_pinned = true;
        let mut g = Fields {
            obj,
            prefix: "pipeline",
            problems: &mut problems,
        };
        g.unknown(&PIPELINE_KEYS);
        set!(g, "rus_fraction" => cfg.pipeline.rus_fraction);
        set!(g, "pca_k" => cfg.pipeline.pca_k);
        set!(g, "n_trees" => cfg.pipeline.n_trees);
        set!(g, "seed" => cfg.pipeline.seed);
        set!(g, "min_leaf" => cfg.pipeline.min_leaf);
    }
    if let Some(obj) = &grid {
        let mut g = Fields {
            obj,
            prefix: "grid",
            problems: &mut problems,
        };
        g.unknown(&GRID_KEYS);
        set!(g, "families" => cfg.grid.families);
        set!(g, "rus_fractions" => cfg.grid.rus_fractions);
        set!(g, "levels" => cfg.grid.levels);
        set!(g, "pca_sizes" => cfg.grid.pca_sizes);
        set!(g, "tree_counts" => cfg.grid.tree_counts);
    }

    range_checks(&cfg, &mut problems);
    if problems.is_empty() {
        let grid_levels = grid.as_ref().is_some_and(|g| g.contains_key("levels"));
        cfg.warnings = clamp_warnings(&cfg, grid_levels);
        Ok(cfg)
    } else {
        Err(problems)
    }
}

fn range_checks(cfg: &RunConfig, problems: &mut Vec<String>) {
    if cfg.features.channels.is_empty() {
        problems.push("features.channels: must name at least one channel".into());
    }
    if cfg.features.level == 0 {
        problems.push("features.level: must be at least 1".into());
    }
    let p = &cfg.pipeline;
    if !(p.rus_fraction > 0.0 && p.rus_fraction <= 1.0) {
        problems.push(format!("pipeline.rus_fraction: {} not in (0, 1]", p.rus_fraction));
    }
    if p.pca_k == Some(0) {
        problems.push("pipeline.pca_k: must be at least 1 or null".into());
    }
    if p.n_trees == 0 {
        problems.push("pipeline.n_trees: must be at least 1".into());
    }
    if p.min_leaf == 0 {
        problems.push("pipeline.min_leaf: must be at least 1".into());
    }
    problems.extend(cfg.grid.problems());
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        problems.push(format!("train_fraction: {} not in (0, 1)", cfg.train_fraction));
    }
    if cfg.workers == Some(0) {
        problems.push("workers: must be at least 1 or null".into());
    }
    if let Some(f0) = cfg.notch_hz {
        if !(f0 > 0.0 && f0.is_finite()) {
            problems.push(format!("notch_hz: {f0} must be a positive frequency or null"));
        }
    }
}

/// Levels deeper than a channel's cap are accepted and clamped; say so.
/// Grid levels are only checked when the config sets them.
pub fn clamp_warnings(cfg: &RunConfig, grid_levels: bool) -> Vec<String> {
    let mut out = Vec::new();
    let check = |key: &str, level: usize, channels: &[ChannelKind], out: &mut Vec<String>| {
        for &c in channels {
            let cap = max_level(c.epoch_samples());
            if level > cap {
                out.push(format!("{key}: level {level} exceeds the {c} cap of {cap}; {c} bands use level {cap}"));
            }
        }
    };
    let channels = cfg.features.canonical_channels();
    check("features.level", cfg.features.level, &channels, &mut out);
    if !grid_levels {
        return out;
    }
    let mut levels = cfg.grid.levels.clone();
    levels.sort_unstable();
    levels.dedup();
    for l in levels.into_iter().filter(|&l| l != cfg.features.level) {
        check("grid.levels", l, &channels, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(&json!({"data_dir": "data"})).unwrap();
        assert_eq!(cfg, RunConfig::with_data("data".into()));
        assert!(!cfg.pipeline_pinned);
        assert!(cfg.warnings.is_empty());
    }

    #[test]
    fn rus_out_of_range_is_rejected() {
        let err = parse_config(&json!({"data_dir": "d", "pipeline": {"rus_fraction": 1.5}})).unwrap_err();
        assert_eq!(err.len(), 1);
        assert!(err[0].starts_with("pipeline.rus_fraction"), "{err:?}");
    }

    #[test]
    fn deep_level_with_emg_warns() {
        let cfg = parse_config(&json!({"data_dir": "d", "features": {"level": 7, "channels": ["EEG", "EMG"]}})).unwrap();
        assert_eq!(cfg.features.level, 7);
        assert_eq!(cfg.warnings.len(), 1);
        assert!(cfg.warnings[0].contains("EMG cap of 4"), "{:?}", cfg.warnings);
    }

    #[test]
    fn every_problem_is_listed() {
        let err = parse_config(&json!({
            "output": "x",
            "features": {"family": "db99", "colour": 1},
            "pipeline": {"n_trees": "many"},
            "grid": {"rus_fractions": [2.0]},
            "train_fraction": 1.0
        }))
        .unwrap_err();
        let keys: Vec<&str> = err.iter().map(|p| p.split(':').next().unwrap()).collect();
        for want in ["output", "data_dir", "features.family", "features.colour", "pipeline.n_trees", "grid.rus_fractions", "train_fraction"] {
            assert!(keys.contains(&want), "{want} missing from {err:?}");
        }
    }

    #[test]
    fn pinned_pipeline_follows_features() {
        let cfg = parse_config(&json!({"data_dir": "d", "features": {"variant": "WM"}, "pipeline": {"n_trees": 20}})).unwrap();
        assert!(cfg.pipeline_pinned);
        assert_eq!(cfg.pipeline.features.variant, Variant::WM);
        assert_eq!(cfg.pipeline.pca_k, Some(100));
        assert_eq!(cfg.pipeline.n_trees, 20);
    }
}
