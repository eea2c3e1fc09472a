//! Recording ingestion: EDF/EDF+ parsing, hypnogram decoding, epoching,
//! wake trimming, notch filtering, early/late splitting and age groups.

pub mod edf;
pub mod fetch;
mod load;
mod notch;
pub mod tal;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use edf::{parse_edf, EdfError, EdfFile, EdfHeader, SignalHeader};
pub use fetch::{fetch_dataset, FetchError, FetchOptions, Manifest, ManifestEntry, SubjectSpec};
pub use load::{discover_subjects, load_subject, LoadedSubject, SubjectFiles, HYPNOGRAM_SUFFIX, PSG_SUFFIX};
pub use notch::{notch_filter, NotchError, DEFAULT_NOTCH_Q};
pub use tal::parse_hypnogram;

/// Seconds per scored epoch.
pub const EPOCH_SECONDS: f64 = 30.0;
/// Wake epochs kept on each side of the sleep period (20 minutes).
pub const WAKE_MARGIN_EPOCHS: usize = 40;
/// Epochs in the `fixed_4h` early/late windows.
pub const FOUR_HOURS_EPOCHS: usize = 480;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Edf(#[from] EdfError),
    #[error("recording {subject:?} lacks required channel {channel:?}")]
    MissingChannel { subject: String, channel: &'static str },
    #[error("channel {channel:?} sampled at {found} Hz, expected {expected} Hz")]
    UnexpectedRate { channel: &'static str, found: f64, expected: f64 },
    #[error("annotation at onset {onset} s spans past the end of the signal ({signal_seconds} s)")]
    SpanExceedsSignal { onset: f64, signal_seconds: f64 },
    #[error("stage annotation at onset {onset} s has duration {duration} s, not a positive multiple of 30 s")]
    BadStageDuration { onset: f64, duration: f64 },
    #[error("stage annotation at onset {onset} s overlaps the previous one")]
    Overlap { onset: f64 },
    #[error("unknown annotation label {label:?} at onset {onset} s")]
    UnknownLabel { label: String, onset: f64 },
    #[error("no sleep epochs: cannot locate sleep onset")]
    NoSleep,
    #[error("sleep span is empty")]
    EmptySleepSpan,
    #[error("{path}: {source}")]
    Io { path: std::path::PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    File {
        path: std::path::PathBuf,
        source: Box<DatasetError>,
    },
}

/// Sleep stage after merging stages 3 and 4. The discriminant is the
/// canonical class index used for tie-breaking everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StageLabel {
    W = 0,
    S1 = 1,
    S2 = 2,
    #[serde(rename = "SWS")]
    Sws = 3,
    #[serde(rename = "REM")]
    Rem = 4,
}

pub const N_STAGES: usize = 5;

impl StageLabel {
    pub const ALL: [StageLabel; N_STAGES] = [
        StageLabel::W,
        StageLabel::S1,
        StageLabel::S2,
        StageLabel::Sws,
        StageLabel::Rem,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<StageLabel> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            StageLabel::W => "W",
            StageLabel::S1 => "S1",
            StageLabel::S2 => "S2",
            StageLabel::Sws => "SWS",
            StageLabel::Rem => "REM",
        }
    }
}

impl fmt::Display for StageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StageLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown stage {s:?}"))
    }
}

/// What a raw hypnogram label means for epoching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawStage {
    Stage(StageLabel),
    /// Movement time or unscored; dropped.
    Excluded,
    Unknown,
}

pub fn map_raw_label(raw: &str) -> RawStage {
    match raw.trim() {
        "Sleep stage W" => RawStage::Stage(StageLabel::W),
        "Sleep stage 1" => RawStage::Stage(StageLabel::S1),
        "Sleep stage 2" => RawStage::Stage(StageLabel::S2),
        "Sleep stage 3" | "Sleep stage 4" => RawStage::Stage(StageLabel::Sws),
        "Sleep stage R" => RawStage::Stage(StageLabel::Rem),
        "Movement time" | "Sleep stage ?" => RawStage::Excluded,
        _ => RawStage::Unknown,
    }
}

/// Hypnogram label written for a stage (stage 3 stands in for SWS).
pub fn raw_label_for(stage: StageLabel) -> &'static str {
    match stage {
        StageLabel::W => "Sleep stage W",
        StageLabel::S1 => "Sleep stage 1",
        StageLabel::S2 => "Sleep stage 2",
        StageLabel::Sws => "Sleep stage 3",
        StageLabel::Rem => "Sleep stage R",
    }
}

/// The three signals the pipeline consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelKind {
    #[serde(rename = "EEG")]
    Eeg,
    #[serde(rename = "EOG")]
    Eog,
    #[serde(rename = "EMG")]
    Emg,
}

impl ChannelKind {
    /// Canonical order: EEG, EOG, EMG.
    pub const ALL: [ChannelKind; 3] = [ChannelKind::Eeg, ChannelKind::Eog, ChannelKind::Emg];

    pub fn edf_label(self) -> &'static str {
        match self {
            ChannelKind::Eeg => "EEG Fpz-Cz",
            ChannelKind::Eog => "EOG horizontal",
            ChannelKind::Emg => "EMG submental",
        }
    }

    pub fn sampling_rate(self) -> f64 {
        match self {
            ChannelKind::Eeg | ChannelKind::Eog => 100.0,
            ChannelKind::Emg => 1.0,
        }
    }

    pub fn epoch_samples(self) -> usize {
        (self.sampling_rate() * EPOCH_SECONDS) as usize
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ChannelKind::Eeg => "EEG",
            ChannelKind::Eog => "EOG",
            ChannelKind::Emg => "EMG",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.short_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown channel {s:?}; expected EEG, EOG or EMG"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub name: String,
    pub sampling_rate: f64,
    /// Physical units.
    pub samples: Vec<f64>,
}

/// One subject-night.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub subject_id: String,
    pub age: Option<u32>,
    pub channels: Vec<Channel>,
    /// Seconds since 1970-01-01.
    pub start_time: f64,
}

impl Recording {
    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn channel_mut(&mut self, name: &str) -> Option<&mut Channel> {
        self.channels.iter_mut().find(|c| c.name == name)
    }

    /// The EEG/EOG/EMG channel, checked for its expected sampling rate.
    pub fn required(&self, kind: ChannelKind) -> Result<&Channel, DatasetError> {
        let ch = self.channel(kind.edf_label()).ok_or_else(|| DatasetError::MissingChannel {
            subject: self.subject_id.clone(),
            channel: kind.edf_label(),
        })?;
        if (ch.sampling_rate - kind.sampling_rate()).abs() > 1e-9 {
            return Err(DatasetError::UnexpectedRate {
                channel: kind.edf_label(),
                found: ch.sampling_rate,
                expected: kind.sampling_rate(),
            });
        }
        Ok(ch)
    }

    /// Encode as EDF with 30 s data records. Each channel is quantized to
    /// the full 16-bit range over its own physical span.
    pub fn to_edf(&self) -> Result<EdfFile, EdfError> {
        let mut signals = Vec::with_capacity(self.channels.len());
        let mut samples = Vec::with_capacity(self.channels.len());
        let mut n_records = None;
        for ch in &self.channels {
            let spr_f = ch.sampling_rate * EPOCH_SECONDS;
            let spr = spr_f.round() as usize;
            if (spr_f - spr as f64).abs() > 1e-9 || spr == 0 || ch.samples.len() % spr != 0 {
                return Err(EdfError::Encode(format!(
                    "channel {:?}: {} samples at {} Hz do not fill whole 30 s records",
                    ch.name,
                    ch.samples.len(),
                    ch.sampling_rate
                )));
            }
            let records = ch.samples.len() / spr;
            if *n_records.get_or_insert(records) != records {
                return Err(EdfError::Encode("channels have different durations".into()));
            }
            let (lo, hi) = ch
                .samples
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let (lo, hi) = if !lo.is_finite() || hi - lo < 1e-6 {
                (lo.min(0.0) - 1.0, hi.max(0.0) + 1.0)
            } else {
                (lo, hi)
            };
            // round the span outward so the 8-character header fields hold it
            let (pmin, pmax) = (round_out(lo, false), round_out(hi, true));
            let header = SignalHeader {
                label: ch.name.clone(),
                transducer: String::new(),
                physical_dimension: "uV".to_string(),
                physical_min: pmin,
                physical_max: pmax,
                digital_min: -32768,
                digital_max: 32767,
                prefilter: String::new(),
                samples_per_record: spr,
                reserved: String::new(),
            };
            let scale = 65535.0 / (pmax - pmin);
            samples.push(
                ch.samples
                    .iter()
                    .map(|&v| ((v - pmin) * scale - 32768.0).round().clamp(-32768.0, 32767.0) as i16)
                    .collect(),
            );
            signals.push(header);
        }
        let (date, time) = edf_start_fields(self.start_time);
        let age = self.age.map(|a| format!("_{a}yr")).unwrap_or_default();
        Ok(EdfFile {
            header: EdfHeader {
                version: "0".into(),
                patient: format!("{id} X X {id}{age}", id = self.subject_id),
                recording: format!("Startdate {date} X X X"),
                start_date: date,
                start_time: time,
                reserved: String::new(),
                n_records: n_records.unwrap_or(0),
                record_duration: EPOCH_SECONDS,
                signals,
            },
            samples,
        })
    }
}

fn round_out(v: f64, up: bool) -> f64 {
    // 3 decimals keeps |v| < 1e4 within 8 characters
    let scaled = v * 1000.0;
    (if up { scaled.ceil() } else { scaled.floor() }) / 1000.0
}

fn edf_start_fields(seconds: f64) -> (String, String) {
    let secs = seconds.max(0.0) as i64;
    let date = chrono::DateTime::from_timestamp(secs, 0)
        .unwrap_or_default()
        .naive_utc();
    (date.format("%d.%m.%y").to_string(), date.format("%H.%M.%S").to_string())
}

/// Encode annotations as a single-record EDF+ hypnogram.
pub fn hypnogram_to_edf(annotations: &[Annotation], subject_id: &str, start_time: f64) -> EdfFile {
    let mut payload = b"+0\x14\x14\x00".to_vec();
    payload.extend(tal::encode_tals(annotations));
    if payload.len() % 2 == 1 {
        payload.push(0);
    }
    let digital: Vec<i16> = payload.chunks_exact(2).map(|b| i16::from_le_bytes([b[0], b[1]])).collect();
    let (date, time) = edf_start_fields(start_time);
    EdfFile {
        header: EdfHeader {
            version: "0".into(),
            patient: format!("{subject_id} X X {subject_id}"),
            recording: format!("Startdate {date} X X X"),
            start_date: date,
            start_time: time,
            reserved: "EDF+C".into(),
            n_records: 1,
            record_duration: 0.0,
            signals: vec![SignalHeader {
                label: edf::ANNOTATION_LABEL.into(),
                transducer: String::new(),
                physical_dimension: String::new(),
                physical_min: -32768.0,
                physical_max: 32767.0,
                digital_min: -32768,
                digital_max: 32767,
                prefilter: String::new(),
                samples_per_record: digital.len(),
                reserved: String::new(),
            }],
        },
        samples: vec![digital],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub onset: f64,
    pub duration: f64,
    pub raw_label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Early,
    Late,
}

/// One labelled 30 s window.
#[derive(Debug, Clone, PartialEq)]
pub struct Epoch {
    pub subject_id: String,
    /// Ordinal of the 30 s slot from the start of the recording.
    pub index: usize,
    pub label: StageLabel,
    pub eeg: Vec<f64>,
    pub eog: Vec<f64>,
    pub emg: Vec<f64>,
    /// Set by [`split_early_late`].
    pub half: Option<Half>,
}

impl Epoch {
    pub fn signal(&self, kind: ChannelKind) -> &[f64] {
        match kind {
            ChannelKind::Eeg => &self.eeg,
            ChannelKind::Eog => &self.eog,
            ChannelKind::Emg => &self.emg,
        }
    }
}

/// Slice a recording into labelled epochs.
///
/// Stage annotations are cut into 30 s slices; stages 3 and 4 both map to
/// SWS. Movement time and unscored spans are dropped without a bounds
/// check (trailing unscored spans commonly run past the signal end).
pub fn segment_epochs(rec: &Recording, anns: &[Annotation]) -> Result<Vec<Epoch>, DatasetError> {
    let eeg = rec.required(ChannelKind::Eeg)?;
    let eog = rec.required(ChannelKind::Eog)?;
    let emg = rec.required(ChannelKind::Emg)?;
    let n_epochs = [eeg, eog, emg]
        .iter()
        .zip(ChannelKind::ALL)
        .map(|(ch, kind)| ch.samples.len() / kind.epoch_samples())
        .min()
        .unwrap_or(0);
    let signal_seconds = n_epochs as f64 * EPOCH_SECONDS;

    let mut sorted: Vec<&Annotation> = anns.iter().collect();
    sorted.sort_by(|a, b| a.onset.total_cmp(&b.onset));

    let mut out = Vec::new();
    let mut next_free = 0usize;
    for ann in sorted {
        let stage = match map_raw_label(&ann.raw_label) {
            RawStage::Stage(s) => s,
            RawStage::Excluded => continue,
            RawStage::Unknown => {
                return Err(DatasetError::UnknownLabel {
                    label: ann.raw_label.clone(),
                    onset: ann.onset,
                })
            }
        };
        let slices = ann.duration / EPOCH_SECONDS;
        if !(ann.duration > 0.0) || (slices - slices.round()).abs() > 1e-6 || ann.onset < 0.0 {
            return Err(DatasetError::BadStageDuration {
                onset: ann.onset,
                duration: ann.duration,
            });
        }
        if ann.onset + ann.duration > signal_seconds + 1e-6 {
            return Err(DatasetError::SpanExceedsSignal {
                onset: ann.onset,
                signal_seconds,
            });
        }
        let first = (ann.onset / EPOCH_SECONDS).round() as usize;
        if first < next_free {
            return Err(DatasetError::Overlap { onset: ann.onset });
        }
        for index in first..first + slices.round() as usize {
            let window = |ch: &Channel, kind: ChannelKind| {
                let n = kind.epoch_samples();
                ch.samples[index * n..(index + 1) * n].to_vec()
            };
            out.push(Epoch {
                subject_id: rec.subject_id.clone(),
                index,
                label: stage,
                eeg: window(eeg, ChannelKind::Eeg),
                eog: window(eog, ChannelKind::Eog),
                emg: window(emg, ChannelKind::Emg),
                half: None,
            });
            next_free = index + 1;
        }
    }
    Ok(out)
}

/// Drop daytime wake: W epochs survive only within 40 epochs of the sleep
/// period (first to last non-W epoch, by epoch index). Everything inside the
/// sleep period is kept.
pub fn trim_wake(epochs: Vec<Epoch>) -> Result<Vec<Epoch>, DatasetError> {
    let sleep = |e: &&Epoch| e.label != StageLabel::W;
    let onset = epochs.iter().find(sleep).ok_or(DatasetError::NoSleep)?.index;
    let offset = epochs.iter().rev().find(sleep).unwrap().index;
    let lo = onset.saturating_sub(WAKE_MARGIN_EPOCHS);
    let hi = offset + WAKE_MARGIN_EPOCHS;
    Ok(epochs
        .into_iter()
        .filter(|e| e.label != StageLabel::W || (lo..=hi).contains(&e.index))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Bisect the sleep period by epoch count; odd counts give early the extra epoch.
    #[default]
    Halves,
    /// First and last four hours of the sleep period.
    #[serde(rename = "fixed_4h")]
    Fixed4h,
}

/// Split the sleep period (first to last non-W epoch, by position) into early
/// and late parts, tagging each returned epoch's `half`. Epochs outside the
/// sleep period belong to neither list. In `fixed_4h` mode a period shorter
/// than eight hours yields overlapping windows.
pub fn split_early_late(epochs: &[Epoch], mode: SplitMode) -> Result<(Vec<Epoch>, Vec<Epoch>), DatasetError> {
    let first = epochs.iter().position(|e| e.label != StageLabel::W);
    let last = epochs.iter().rposition(|e| e.label != StageLabel::W);
    let (first, last) = match (first, last) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(DatasetError::EmptySleepSpan),
    };
    let span = &epochs[first..=last];
    let tag = |part: &[Epoch], half| {
        part.iter()
            .cloned()
            .map(|mut e| {
                e.half = Some(half);
                e
            })
            .collect::<Vec<_>>()
    };
    Ok(match mode {
        SplitMode::Halves => {
            let cut = span.len().div_ceil(2);
            (tag(&span[..cut], Half::Early), tag(&span[cut..], Half::Late))
        }
        SplitMode::Fixed4h => {
            let n = span.len().min(FOUR_HOURS_EPOCHS);
            (tag(&span[..n], Half::Early), tag(&span[span.len() - n..], Half::Late))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AgeGroup {
    G1,
    G2,
    G3,
    G4,
}

impl AgeGroup {
    pub const ALL: [AgeGroup; 4] = [AgeGroup::G1, AgeGroup::G2, AgeGroup::G3, AgeGroup::G4];

    /// Inclusive age range in years.
    pub fn range(self) -> (u32, u32) {
        match self {
            AgeGroup::G1 => (26, 35),
            AgeGroup::G2 => (50, 60),
            AgeGroup::G3 => (66, 75),
            AgeGroup::G4 => (85, 101),
        }
    }
}

impl fmt::Display for AgeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for AgeGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown age group {s:?}"))
    }
}

/// Ages outside every group yield `None`; such subjects are excluded.
pub fn assign_age_group(age: u32) -> Option<AgeGroup> {
    AgeGroup::ALL.into_iter().find(|g| {
        let (lo, hi) = g.range();
        (lo..=hi).contains(&age)
    })
}

/// Notch every channel whose sampling rate admits `f0`; channels where
/// `f0 >= fs/2` are left untouched and reported by name.
pub fn notch_recording(rec: &mut Recording, f0: f64, q: f64) -> Vec<String> {
    let mut skipped = Vec::new();
    for ch in &mut rec.channels {
        match notch_filter(&ch.samples, ch.sampling_rate, f0, q) {
            Ok(filtered) => ch.samples = filtered,
            Err(_) => skipped.push(ch.name.clone()),
        }
    }
    skipped
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn recording(seconds: usize) -> Recording {
        let mk = |kind: ChannelKind| Channel {
            name: kind.edf_label().into(),
            sampling_rate: kind.sampling_rate(),
            samples: (0..seconds * kind.sampling_rate() as usize).map(|i| i as f64).collect(),
        };
        Recording {
            subject_id: "S".into(),
            age: Some(30),
            channels: ChannelKind::ALL.into_iter().map(mk).collect(),
            start_time: 0.0,
        }
    }

    pub fn ann(onset: f64, duration: f64, label: &str) -> Annotation {
        Annotation {
            onset,
            duration,
            raw_label: label.into(),
        }
    }

    pub fn epochs(labels: &[StageLabel]) -> Vec<Epoch> {
        labels
            .iter()
            .enumerate()
            .map(|(index, &label)| Epoch {
                subject_id: "S".into(),
                index,
                label,
                eeg: vec![],
                eog: vec![],
                emg: vec![],
                half: None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use StageLabel::*;

    #[test]
    fn two_s2_epochs() {
        let rec = recording(60);
        let out = segment_epochs(&rec, &[ann(0.0, 60.0, "Sleep stage 2")]).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|e| e.label == S2 && e.eeg.len() == 3000 && e.emg.len() == 30));
        assert_eq!(out[1].eeg[0], 3000.0);
        assert_eq!(out[1].emg[0], 30.0);
    }

    #[test]
    fn stages_3_and_4_merge() {
        let rec = recording(120);
        let out = segment_epochs(&rec, &[ann(0.0, 60.0, "Sleep stage 3"), ann(60.0, 60.0, "Sleep stage 4")]).unwrap();
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(|e| e.label == Sws));
    }

    #[test]
    fn movement_time_is_dropped() {
        let rec = recording(150);
        let anns = [
            ann(0.0, 60.0, "Sleep stage 2"),
            ann(60.0, 30.0, "Movement time"),
            ann(90.0, 60.0, "Sleep stage 2"),
        ];
        let out = segment_epochs(&rec, &anns).unwrap();
        let idx: Vec<usize> = out.iter().map(|e| e.index).collect();
        assert_eq!(idx, vec![0, 1, 3, 4]);
    }

    #[test]
    fn unscored_dropped_even_past_end() {
        let rec = recording(60);
        let out = segment_epochs(&rec, &[ann(0.0, 60.0, "Sleep stage W"), ann(60.0, 3000.0, "Sleep stage ?")]).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn span_past_end_is_error() {
        let rec = recording(60);
        match segment_epochs(&rec, &[ann(30.0, 60.0, "Sleep stage 1")]) {
            Err(DatasetError::SpanExceedsSignal { onset, .. }) => assert_eq!(onset, 30.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_label_rejected() {
        let rec = recording(60);
        assert!(matches!(
            segment_epochs(&rec, &[ann(0.0, 30.0, "Lights off")]),
            Err(DatasetError::UnknownLabel { .. })
        ));
    }

    #[test]
    fn missing_channel() {
        let mut rec = recording(60);
        rec.channels.remove(1);
        let err = segment_epochs(&rec, &[]).unwrap_err();
        assert!(err.to_string().contains("EOG horizontal"), "{err}");
    }

    #[test]
    fn trim_keeps_last_40_wake() {
        let mut labels = vec![W; 120];
        labels.extend([S2; 10]);
        let out = trim_wake(epochs(&labels)).unwrap();
        assert_eq!(out.len(), 50);
        assert_eq!(out[0].index, 80);
    }

    #[test]
    fn trim_short_margins_and_identity() {
        let mut labels = vec![W; 10];
        labels.extend([S1, S2, W, Rem]);
        labels.extend([W; 50]);
        let out = trim_wake(epochs(&labels)).unwrap();
        assert_eq!(out.len(), 10 + 4 + 40);

        let labels = [S1, W, S2, Sws, Rem];
        let ep = epochs(&labels);
        assert_eq!(trim_wake(ep.clone()).unwrap(), ep);
    }

    #[test]
    fn trim_all_wake_is_error() {
        assert!(matches!(trim_wake(epochs(&[W; 5])), Err(DatasetError::NoSleep)));
    }

    #[test]
    fn halves_even_and_odd() {
        let (e, l) = split_early_late(&epochs(&[S2; 960]), SplitMode::Halves).unwrap();
        assert_eq!((e.len(), l.len()), (480, 480));
        let (e, l) = split_early_late(&epochs(&[S2; 961]), SplitMode::Halves).unwrap();
        assert_eq!((e.len(), l.len()), (481, 480));
        assert!(e.iter().all(|x| x.half == Some(Half::Early)));
        assert!(l.iter().all(|x| x.half == Some(Half::Late)));
    }

    #[test]
    fn fixed_four_hours() {
        let mut labels = vec![W; 5];
        labels.extend([S2; 1000]);
        labels.extend([W; 5]);
        let (e, l) = split_early_late(&epochs(&labels), SplitMode::Fixed4h).unwrap();
        assert_eq!(e.len(), 480);
        assert_eq!(l.len(), 480);
        assert_eq!(e.first().unwrap().index, 5);
        assert_eq!(e.last().unwrap().index, 5 + 479);
        assert_eq!(l.first().unwrap().index, 5 + 520);
        assert_eq!(l.last().unwrap().index, 5 + 999);
    }

    #[test]
    fn split_requires_sleep() {
        assert!(split_early_late(&epochs(&[W; 4]), SplitMode::Halves).is_err());
    }

    #[test]
    fn age_groups() {
        assert_eq!(assign_age_group(30), Some(AgeGroup::G1));
        assert_eq!(assign_age_group(55), Some(AgeGroup::G2));
        assert_eq!(assign_age_group(70), Some(AgeGroup::G3));
        assert_eq!(assign_age_group(90), Some(AgeGroup::G4));
        assert_eq!(assign_age_group(26), Some(AgeGroup::G1));
        assert_eq!(assign_age_group(35), Some(AgeGroup::G1));
        assert_eq!(assign_age_group(40), None);
        assert_eq!(assign_age_group(101), Some(AgeGroup::G4));
        assert_eq!(assign_age_group(102), None);
    }

    #[test]
    fn recording_edf_round_trip() {
        let mut rec = recording(90);
        rec.subject_id = "SYN01".into();
        rec.start_time = 599_697_000.0;
        let file = rec.to_edf().unwrap();
        let bytes = file.to_bytes().unwrap();
        let back = parse_edf(&bytes).unwrap();
        assert_eq!(back.subject_id, "SYN01");
        assert_eq!(back.age, Some(30));
        assert_eq!(back.start_time, rec.start_time);
        for (a, b) in rec.channels.iter().zip(&back.channels) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.sampling_rate, b.sampling_rate);
            let span = a.samples.iter().cloned().fold(0.0, f64::max) + 1.0;
            for (x, y) in a.samples.iter().zip(&b.samples) {
                assert!((x - y).abs() <= span / 65535.0 + 1e-3, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn hypnogram_round_trip() {
        let anns = vec![ann(30.0, 30.0, "Sleep stage 1"), ann(0.0, 30.0, "Sleep stage W")];
        let bytes = hypnogram_to_edf(&anns, "S", 0.0).to_bytes().unwrap();
        let back = parse_hypnogram(&bytes).unwrap();
        assert_eq!(back[0], anns[1]);
        assert_eq!(back[1], anns[0]);
    }
}
