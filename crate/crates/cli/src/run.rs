//! Run directories, manifests, data loading and the feature cache.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use sleepscore::dataset::fetch::sha256_hex;
use sleepscore::dataset::{discover_subjects, load_subject, Epoch, HYPNOGRAM_SUFFIX, PSG_SUFFIX};
use sleepscore::eval::{needs_level1, EvalError, Extracted, ModelKind};
use sleepscore::experiments::{ExperimentData, SubjectData};
use sleepscore::features::{read_cache, write_cache, FeatureConfig, FeatureExtractor, FeatureMatrix, CACHE_VERSION};
use sleepscore::models::{level1_feature_config, PipelineConfig, FORMAT_VERSION};

use crate::config::RunConfig;
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const CACHE_ENV: &str = "SLEEPSCORE_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub sleepscore: &'static str,
    pub model_format: u32,
    pub feature_cache: u32,
}

/// Everything needed to reproduce a run. Carries no timestamps, so an
/// unchanged rerun writes an identical manifest.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperparameters: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_checksum: Option<String>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            versions: Versions {
                sleepscore: env!("CARGO_PKG_VERSION"),
                model_format: FORMAT_VERSION,
                feature_cache: CACHE_VERSION,
            },
            config: None,
            config_sha256: None,
            seed: None,
            hyperparameters: None,
            data_checksum: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn with_config(mut self, cfg: &RunConfig) -> Result<Self, CliError> {
        self.config_sha256 = Some(sha256_hex(&serde_json::to_vec(cfg)?));
        self.warnings.extend(cfg.warnings.iter().cloned());
        self.config = Some(cfg.clone());
        Ok(self)
    }
}

/// An output directory that records a digest of everything written to it.
pub struct RunDir {
    pub dir: PathBuf,
    outputs: BTreeMap<String, String>,
}

impl RunDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            outputs: BTreeMap::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::write(parent, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| CliError::write(&path, e))?;
        self.outputs.insert(name.to_string(), sha256_hex(bytes));
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, v: &T) -> Result<PathBuf, CliError> {
        let mut bytes = serde_json::to_vec_pretty(v)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    /// Record a file written by someone else, e.g. a cache writer.
    pub fn record(&mut self, name: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let bytes = std::fs::read(&path).map_err(|e| CliError::write(&path, e))?;
        self.outputs.insert(name.to_string(), sha256_hex(&bytes));
        Ok(())
    }

    /// Write the manifest last, listing every output.
    pub fn finish(self, mut manifest: RunManifest) -> Result<PathBuf, CliError> {
        manifest.outputs = self
            .outputs
            .iter()
            .map(|(path, sha256)| FileDigest {
                path: path.clone(),
                sha256: sha256.clone(),
            })
            .collect();
        let path = self.dir.join(MANIFEST_NAME);
        for w in &manifest.warnings {
            log::warn!("{w}");
        }
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        std::fs::write(&path, bytes).map_err(|e| CliError::write(&path, e))?;
        Ok(path)
    }
}

pub struct LoadedData {
    pub data: ExperimentData,
    pub inputs: Vec<FileDigest>,
    /// Per-subject notch reports.
    pub notch_skipped: BTreeMap<String, Vec<String>>,
}

/// Load, notch, epoch and trim every subject pair under `dir`.
pub fn load_data(dir: &Path, notch_hz: Option<f64>) -> Result<LoadedData, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Data(format!("data_dir {}: not a directory", dir.display())));
    }
    let files = discover_subjects(dir)?;
    if files.is_empty() {
        return Err(CliError::Data(format!(
            "data_dir {}: no <id>{PSG_SUFFIX} / <id>{HYPNOGRAM_SUFFIX} pairs found",
            dir.display()
        )));
    }
    let loaded: Vec<_> = files
        .par_iter()
        .map(|f| -> Result<_, CliError> {
            let s = load_subject(f, notch_hz)?;
            let digest = |p: &Path| std::fs::read(p).map(|b| FileDigest::of(p, &b)).map_err(|e| CliError::io(p, e));
            Ok((s, [digest(&f.psg)?, digest(&f.hypnogram)?]))
        })
        .collect::<Result<_, _>>()?;
    let mut inputs = Vec::new();
    let mut notch_skipped = BTreeMap::new();
    let mut subjects = Vec::new();
    for (s, digests) in loaded {
        inputs.extend(digests);
        if !s.notch_skipped.is_empty() {
            notch_skipped.insert(s.id.clone(), s.notch_skipped);
        }
        subjects.push(SubjectData {
            id: s.id,
            age: s.age,
            epochs: s.epochs,
        });
    }
    inputs.sort();
    log::info!("loaded {} subjects from {}", subjects.len(), dir.display());
    Ok(LoadedData {
        data: ExperimentData::new(subjects),
        inputs,
        notch_skipped,
    })
}

/// Feature matrices keyed by (data checksum, feature config). A disabled
/// cache just extracts.
pub struct FeatureCache {
    dir: Option<PathBuf>,
    checksum: String,
    pub hits: AtomicUsize,
    pub misses: AtomicUsize,
}

impl FeatureCache {
    pub fn new(dir: Option<PathBuf>, checksum: String) -> Self {
        Self {
            dir,
            checksum,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    /// Cache directory: `SLEEPSCORE_CACHE_DIR`, else `<output_dir>/cache`.
    pub fn default_dir(cfg: &RunConfig) -> PathBuf {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| cfg.output_dir.join("cache"))
    }

    pub fn key(&self, fc: &FeatureConfig) -> String {
        let cfg = serde_json::to_string(&fc.canonical()).expect("feature config serializes");
        sha256_hex(format!("{}\n{cfg}", self.checksum).as_bytes())
    }

    pub fn matrix(&self, fc: &FeatureConfig, epochs: &[Epoch]) -> Result<FeatureMatrix, EvalError> {
        let Some(dir) = &self.dir else {
            return Ok(FeatureExtractor::new(fc)?.extract_matrix(epochs)?);
        };
        let key = self.key(fc);
        let path = dir.join(format!("{key}.ssf"));
        if path.is_file() {
            match read_cache(&path) {
                Ok((m, stored)) if stored == key && m.rows() == epochs.len() => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(m);
                }
                Ok(_) => log::warn!("{}: cache key mismatch; re-extracting", path.display()),
                Err(e) => log::warn!("{}: unreadable cache entry ({e}); re-extracting", path.display()),
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let m = FeatureExtractor::new(fc)?.extract_matrix(epochs)?;
        if let Err(e) = write_cache(&path, &m, &key) {
            log::warn!("could not write feature cache: {e}");
        }
        Ok(m)
    }

    pub fn extracted(&self, cfg: &PipelineConfig, kind: ModelKind, epochs: &[Epoch]) -> Result<Extracted, EvalError> {
        let main = self.matrix(&cfg.features, epochs)?;
        let level1 = if needs_level1(cfg, kind) {
            Some(self.matrix(&level1_feature_config(&cfg.features), epochs)?)
        } else {
            None
        };
        Ok((main, level1))
    }
}
