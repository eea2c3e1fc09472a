//! Feature vectors for the three model variants.
//!
//! * WM: every wavelet coefficient of every selected channel.
//! * SM: five descriptors (mean, median, std, kurtosis, skewness) per band.
//! * EM: the WM block followed by the SM block.
//!
//! Channels are always taken in the canonical order EEG, EOG, EMG, and bands
//! in the order `[approx_L, detail_L, …, detail_1]`. Within a channel the
//! WM block comes first for EM; the layout is
//! `WM(EEG) WM(EOG) … SM(EEG) SM(EOG) …`.

mod cache;
mod standardize;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{ChannelKind, Epoch, Half, StageLabel};
use crate::mlcore::Matrix;
use crate::wavelet::{max_level, wavedec_with, wavelet_filters, FilterBank, WaveletError, WaveletFamily};

pub use cache::{decode_cache, encode_cache, read_cache, write_cache, CacheError, CACHE_VERSION};
pub use standardize::{apply_standardizer, fit_standardizer, StandardizationStats};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("descriptors need at least one coefficient")]
    EmptyInput,
    #[error("epoch {subject}#{index} has no samples for channel {channel}")]
    MissingChannel {
        subject: String,
        index: usize,
        channel: ChannelKind,
    },
    #[error("feature config selects no channels")]
    NoChannels,
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
    #[error("standardizer needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("column count mismatch: stats have {expected}, matrix has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite feature value in column {column} of row {row}")]
    NonFinite { row: usize, column: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    WM,
    SM,
    EM,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::WM, Variant::SM, Variant::EM];

    fn has_coefficients(self) -> bool {
        matches!(self, Variant::WM | Variant::EM)
    }

    fn has_descriptors(self) -> bool {
        matches!(self, Variant::SM | Variant::EM)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown variant {s:?}; expected WM, SM or EM"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub variant: Variant,
    pub channels: Vec<ChannelKind>,
    pub family: WaveletFamily,
    pub level: usize,
}

impl FeatureConfig {
    /// Selected channels, sorted into canonical order with duplicates removed.
    pub fn canonical_channels(&self) -> Vec<ChannelKind> {
        let mut c = self.channels.clone();
        c.sort();
        c.dedup();
        c
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.channels.is_empty() {
            return Err(FeatureError::NoChannels);
        }
        if self.level == 0 {
            return Err(WaveletError::ZeroLevel.into());
        }
        self.family.validate()?;
        Ok(())
    }

    /// Same config in canonical form, used as a cache and model key.
    pub fn canonical(&self) -> FeatureConfig {
        FeatureConfig {
            channels: self.canonical_channels(),
            ..self.clone()
        }
    }

    /// Level actually used for a channel's epoch length.
    pub fn effective_level(&self, kind: ChannelKind) -> usize {
        self.level.min(max_level(kind.epoch_samples()))
    }
}

impl fmt::Display for FeatureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch: Vec<&str> = self.canonical_channels().iter().map(|c| c.short_name()).collect();
        write!(f, "{}/{}/{}/L{}", self.variant, ch.join("+"), self.family, self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Descriptor {
    Mean,
    Median,
    Std,
    Kurtosis,
    Skewness,
}

impl Descriptor {
    pub const ALL: [Descriptor; 5] = [
        Descriptor::Mean,
        Descriptor::Median,
        Descriptor::Std,
        Descriptor::Kurtosis,
        Descriptor::Skewness,
    ];
}

/// Summary statistics of one coefficient band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptors {
    pub mean: f64,
    pub median: f64,
    /// Population (n-denominator) standard deviation.
    pub std: f64,
    /// Fisher excess kurtosis.
    pub kurtosis: f64,
    pub skewness: f64,
}

impl Descriptors {
    pub fn to_array(self) -> [f64; 5] {
        [self.mean, self.median, self.std, self.kurtosis, self.skewness]
    }
}

/// Constant input gives zero std, skewness and kurtosis.
pub fn descriptors(x: &[f64]) -> Result<Descriptors, FeatureError> {
    if x.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    if sorted[0] == sorted[sorted.len() - 1] {
        return Ok(Descriptors {
            mean: sorted[0],
            median,
            std: 0.0,
            kurtosis: 0.0,
            skewness: 0.0,
        });
    }
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 <= 0.0 {
        // distinct values whose spread underflows
        return Ok(Descriptors {
            mean,
            median,
            std: 0.0,
            kurtosis: 0.0,
            skewness: 0.0,
        });
    }
    Ok(Descriptors {
        mean,
        median,
        std: m2.sqrt(),
        kurtosis: m4 / (m2 * m2) - 3.0,
        skewness: m3 / m2.powf(1.5),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "level", rename_all = "lowercase")]
pub enum Band {
    Approx(usize),
    Detail(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    /// Position within the band.
    Coefficient(usize),
    Descriptor(Descriptor),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnMeta {
    pub channel: ChannelKind,
    pub family: WaveletFamily,
    /// Effective decomposition level for this channel.
    pub level: usize,
    pub band: Band,
    pub kind: FeatureKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowMeta {
    pub subject_id: String,
    pub index: usize,
    pub label: StageLabel,
    pub half: Option<Half>,
}

impl RowMeta {
    pub fn of(e: &Epoch) -> Self {
        Self {
            subject_id: e.subject_id.clone(),
            index: e.index,
            label: e.label,
            half: e.half,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub values: Matrix,
    pub column_meta: Vec<ColumnMeta>,
    pub row_meta: Vec<RowMeta>,
}

impl FeatureMatrix {
    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }

    pub fn labels(&self) -> Vec<StageLabel> {
        self.row_meta.iter().map(|r| r.label).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            values: self.values.select_rows(idx),
            column_meta: self.column_meta.clone(),
            row_meta: idx.iter().map(|&i| self.row_meta[i].clone()).collect(),
        }
    }

    pub fn check_finite(&self) -> Result<(), FeatureError> {
        for (row, r) in self.values.iter_rows().enumerate() {
            if let Some(column) = r.iter().position(|v| !v.is_finite()) {
                return Err(FeatureError::NonFinite { row, column });
            }
        }
        Ok(())
    }
}

/// Column layout for a config, independent of any epoch.
pub fn column_meta(cfg: &FeatureConfig) -> Vec<ColumnMeta> {
    let channels = cfg.canonical_channels();
    let bands = |kind: ChannelKind| {
        let level = cfg.effective_level(kind);
        let n = kind.epoch_samples();
        let mut out = vec![(Band::Approx(level), crate::wavelet::band_len(n, level))];
        out.extend((1..=level).rev().map(|l| (Band::Detail(l), crate::wavelet::band_len(n, l))));
        (level, out)
    };
    let mut meta = Vec::new();
    if cfg.variant.has_coefficients() {
        for &channel in &channels {
            let (level, bs) = bands(channel);
            for (band, len) in bs {
                meta.extend((0..len).map(|i| ColumnMeta {
                    channel,
                    family: cfg.family,
                    level,
                    band,
                    kind: FeatureKind::Coefficient(i),
                }));
            }
        }
    }
    if cfg.variant.has_descriptors() {
        for &channel in &channels {
            let (level, bs) = bands(channel);
            for (band, _) in bs {
                meta.extend(Descriptor::ALL.into_iter().map(|d| ColumnMeta {
                    channel,
                    family: cfg.family,
                    level,
                    band,
                    kind: FeatureKind::Descriptor(d),
                }));
            }
        }
    }
    meta
}

/// Reusable extractor with the filter bank resolved once.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    cfg: FeatureConfig,
    bank: FilterBank,
    channels: Vec<ChannelKind>,
    meta: Vec<ColumnMeta>,
}

impl FeatureExtractor {
    pub fn new(cfg: &FeatureConfig) -> Result<Self, FeatureError> {
        cfg.validate()?;
        let channels = cfg.canonical_channels();
        for &c in &channels {
            if cfg.effective_level(c) < cfg.level {
                log::warn!(
                    "level {} exceeds the cap for {c} epochs; using level {}",
                    cfg.level,
                    cfg.effective_level(c)
                );
            }
        }
        Ok(Self {
            cfg: cfg.canonical(),
            bank: wavelet_filters(cfg.family)?,
            channels,
            meta: column_meta(cfg),
        })
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.cfg
    }

    pub fn column_meta(&self) -> &[ColumnMeta] {
        &self.meta
    }

    pub fn n_features(&self) -> usize {
        self.meta.len()
    }

    pub fn extract(&self, epoch: &Epoch) -> Result<Vec<f64>, FeatureError> {
        let mut coeffs = Vec::new();
        let mut stats = Vec::new();
        for &channel in &self.channels {
            let signal = epoch.signal(channel);
            if signal.is_empty() {
                return Err(FeatureError::MissingChannel {
                    subject: epoch.subject_id.clone(),
                    index: epoch.index,
                    channel,
                });
            }
            let level = self.cfg.level.min(max_level(signal.len()));
            let dec = wavedec_with(signal, &self.bank, self.cfg.family, level)?;
            for band in dec.bands() {
                if self.cfg.variant.has_coefficients() {
                    coeffs.extend_from_slice(band);
                }
                if self.cfg.variant.has_descriptors() {
                    stats.extend(descriptors(band)?.to_array());
                }
            }
        }
        coeffs.extend(stats);
        if coeffs.len() != self.meta.len() {
            // epochs of non-standard length change band sizes
            return Err(FeatureError::DimensionMismatch {
                expected: self.meta.len(),
                found: coeffs.len(),
            });
        }
        Ok(coeffs)
    }

    /// Extract every epoch in parallel; row order follows `epochs`.
    pub fn extract_matrix(&self, epochs: &[Epoch]) -> Result<FeatureMatrix, FeatureError> {
        let rows: Vec<Vec<f64>> = epochs.par_iter().map(|e| self.extract(e)).collect::<Result<_, _>>()?;
        let mut data = Vec::with_capacity(rows.len() * self.n_features());
        for r in &rows {
            data.extend_from_slice(r);
        }
        let m = FeatureMatrix {
            values: Matrix::from_vec(rows.len(), self.n_features(), data),
            column_meta: self.meta.clone(),
            row_meta: epochs.iter().map(RowMeta::of).collect(),
        };
        m.check_finite()?;
        Ok(m)
    }
}

pub fn build_features(epoch: &Epoch, cfg: &FeatureConfig) -> Result<(Vec<f64>, Vec<ColumnMeta>), FeatureError> {
    let ex = FeatureExtractor::new(cfg)?;
    let v = ex.extract(epoch)?;
    Ok((v, ex.meta))
}

pub fn build_matrix(epochs: &[Epoch], cfg: &FeatureConfig) -> Result<FeatureMatrix, FeatureError> {
    FeatureExtractor::new(cfg)?.extract_matrix(epochs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn epoch() -> Epoch {
        let sig = |n: usize, f: f64| (0..n).map(|i| (i as f64 * f).sin() + 0.1 * (i % 7) as f64).collect();
        Epoch {
            subject_id: "S".into(),
            index: 3,
            label: StageLabel::S2,
            eeg: sig(3000, 0.11),
            eog: sig(3000, 0.03),
            emg: sig(30, 0.7),
            half: None,
        }
    }

    fn cfg(variant: Variant, channels: &[ChannelKind], level: usize) -> FeatureConfig {
        FeatureConfig {
            variant,
            channels: channels.to_vec(),
            family: WaveletFamily::Daubechies(4),
            level,
        }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-4
    }

    #[test]
    fn descriptors_of_one_to_five() {
        let d = descriptors(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(d.mean, 3.0);
        assert_eq!(d.median, 3.0);
        assert!((d.std - 2f64.sqrt()).abs() < 1e-12);
        assert!(d.skewness.abs() < 1e-12);
        assert!((d.kurtosis + 1.3).abs() < 1e-12);
    }

    #[test]
    fn descriptors_constant() {
        let d = descriptors(&[7.0, 7.0, 7.0]).unwrap();
        assert_eq!(d.to_array(), [7.0, 7.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn descriptors_skewed() {
        let d = descriptors(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(d.mean, 0.25);
        assert_eq!(d.median, 0.0);
        assert!(close(d.std, 0.43301));
        assert!(close(d.skewness, 1.1547));
        assert!(close(d.kurtosis, -0.6667));
    }

    #[test]
    fn descriptors_empty() {
        assert!(matches!(descriptors(&[]), Err(FeatureError::EmptyInput)));
    }

    #[test]
    fn sm_three_channels_level_four() {
        let (v, meta) = build_features(&epoch(), &cfg(Variant::SM, &ChannelKind::ALL, 4)).unwrap();
        assert_eq!(v.len(), 75);
        assert_eq!(meta.len(), 75);
        assert_eq!(meta[0].channel, ChannelKind::Eeg);
        assert_eq!(meta[0].band, Band::Approx(4));
        assert_eq!(meta[5].band, Band::Detail(4));
        assert_eq!(meta[74].channel, ChannelKind::Emg);
        assert_eq!(meta[74].band, Band::Detail(1));
        assert_eq!(meta[74].kind, FeatureKind::Descriptor(Descriptor::Skewness));
    }

    #[test]
    fn wm_eeg_level_four() {
        let (v, meta) = build_features(&epoch(), &cfg(Variant::WM, &[ChannelKind::Eeg], 4)).unwrap();
        assert_eq!(v.len(), 3001);
        assert_eq!(meta.len(), 3001);
    }

    #[test]
    fn em_is_wm_plus_sm() {
        let e = epoch();
        let ch = [ChannelKind::Eeg, ChannelKind::Emg];
        let wm = build_features(&e, &cfg(Variant::WM, &ch, 3)).unwrap().0;
        let sm = build_features(&e, &cfg(Variant::SM, &ch, 3)).unwrap().0;
        let em = build_features(&e, &cfg(Variant::EM, &ch, 3)).unwrap().0;
        assert_eq!(em.len(), wm.len() + sm.len());
        assert_eq!(&em[..wm.len()], &wm[..]);
        assert_eq!(&em[wm.len()..], &sm[..]);
    }

    #[test]
    fn emg_level_is_clamped() {
        let c = cfg(Variant::SM, &[ChannelKind::Emg], 5);
        let (v, meta) = build_features(&epoch(), &c).unwrap();
        assert_eq!(v.len(), 5 * 5);
        assert!(meta.iter().all(|m| m.level == 4));
        assert_eq!(meta[0].band, Band::Approx(4));
    }

    #[test]
    fn channel_order_is_canonical() {
        let e = epoch();
        let a = build_features(&e, &cfg(Variant::SM, &[ChannelKind::Emg, ChannelKind::Eeg], 2)).unwrap();
        let b = build_features(&e, &cfg(Variant::SM, &[ChannelKind::Eeg, ChannelKind::Emg], 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_channel_named() {
        let mut e = epoch();
        e.eog.clear();
        let err = build_features(&e, &cfg(Variant::SM, &ChannelKind::ALL, 2)).unwrap_err();
        assert!(err.to_string().contains("EOG"), "{err}");
    }

    #[test]
    fn matrix_rows_follow_epochs() {
        let mut e2 = epoch();
        e2.index = 9;
        e2.label = StageLabel::Rem;
        let m = build_matrix(&[epoch(), e2], &cfg(Variant::SM, &[ChannelKind::Eeg], 2)).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.labels(), vec![StageLabel::S2, StageLabel::Rem]);
        assert_eq!(m.row_meta[1].index, 9);
    }

    #[test]
    fn config_display_and_parse() {
        let c = cfg(Variant::EM, &[ChannelKind::Eog, ChannelKind::Eeg], 3);
        assert_eq!(c.to_string(), "EM/EEG+EOG/db4/L3");
        assert_eq!("sm".parse::<Variant>().unwrap(), Variant::SM);
        assert!(cfg(Variant::SM, &[], 3).validate().is_err());
    }
}
