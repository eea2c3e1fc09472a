//! Deterministic synthetic polysomnography.
//!
//! Each subject-night is a hypnogram drawn from a Markov chain over the five
//! stages plus per-epoch signals: EEG as a sum of band-limited noise
//! components, EOG as low-frequency noise with saccade-like deflections, and
//! EMG as a 1 Hz envelope. Output is a [`Recording`] plus stage
//! [`Annotation`]s, which round-trip through the EDF writer and parser.
//!
//! Age groups scale EEG amplitude and attenuate delta components. The two
//! halves of the night reweight the chain (SWS early, REM late) and scale
//! EEG amplitude.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{
    assign_age_group, hypnogram_to_edf, raw_label_for, segment_epochs, AgeGroup, Annotation, Channel, ChannelKind,
    DatasetError, EdfError, Epoch, Recording, StageLabel, SubjectSpec, EPOCH_SECONDS, N_STAGES,
};
use crate::mlcore::RngStream;

pub const MIN_EPOCHS: usize = 10;
/// Components centred at or below this frequency count as delta.
pub const DELTA_MAX_HZ: f64 = 4.0;
/// 2020-01-01 22:00:00 UTC.
pub const DEFAULT_START: f64 = 1_577_916_000.0;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("degenerate stage chain: {0}")]
    Degenerate(String),
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("need at least {MIN_EPOCHS} epochs, got {0}")]
    TooFewEpochs(usize),
    #[error("group {group} needs at least 2 subjects, got {found}")]
    TooFewSubjects { group: AgeGroup, found: usize },
    #[error(transparent)]
    Edf(#[from] EdfError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Band-limited noise with the given RMS. With `bursts_per_epoch > 0` the
/// component is gated into bursts of `burst_seconds` and the RMS holds
/// inside each burst.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub center: f64,
    pub bandwidth: f64,
    pub amplitude: f64,
    #[serde(default)]
    pub bursts_per_epoch: f64,
    #[serde(default = "default_burst")]
    pub burst_seconds: f64,
}

fn default_burst() -> f64 {
    1.5
}

impl Component {
    pub fn continuous(center: f64, bandwidth: f64, amplitude: f64) -> Self {
        Self {
            center,
            bandwidth,
            amplitude,
            bursts_per_epoch: 0.0,
            burst_seconds: default_burst(),
        }
    }

    pub fn bursty(center: f64, bandwidth: f64, amplitude: f64, bursts_per_epoch: f64) -> Self {
        Self {
            bursts_per_epoch,
            ..Self::continuous(center, bandwidth, amplitude)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRecipe {
    pub eeg: Vec<Component>,
    /// Mean number of eye-movement deflections per epoch.
    pub eog_events_per_epoch: f64,
    pub eog_event_amplitude: f64,
    pub emg_rms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgeModifier {
    /// Scale on every EEG component.
    pub eeg_gain: f64,
    /// Extra amplitude factor on delta components.
    pub delta_attenuation: f64,
}

impl AgeModifier {
    pub const NEUTRAL: AgeModifier = AgeModifier {
        eeg_gain: 1.0,
        delta_attenuation: 1.0,
    };

    /// Combined amplitude factor on delta components.
    pub fn delta_factor(&self) -> f64 {
        self.eeg_gain * self.delta_attenuation
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfModifier {
    /// Multipliers on chain transitions into each stage, first half of the night.
    pub early_weights: [f64; N_STAGES],
    pub late_weights: [f64; N_STAGES],
    pub early_gain: f64,
    pub late_gain: f64,
}

impl HalfModifier {
    pub fn neutral() -> Self {
        Self {
            early_weights: [1.0; N_STAGES],
            late_weights: [1.0; N_STAGES],
            early_gain: 1.0,
            late_gain: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthProfile {
    /// Indexed by [`StageLabel::index`].
    pub stages: Vec<StageRecipe>,
    /// Row-stochastic per-epoch transition matrix.
    pub transition: [[f64; N_STAGES]; N_STAGES],
    pub initial: StageLabel,
    /// White-noise RMS added to EEG and EOG.
    pub noise_floor: f64,
    /// Background EOG component.
    pub eog_background: Component,
    /// Relative sd of the per-epoch lognormal amplitude jitter.
    pub epoch_jitter: f64,
    /// Relative sd of the per-subject EEG gain.
    pub subject_jitter: f64,
    /// Indexed G1..G4.
    pub age: [AgeModifier; 4],
    pub half: HalfModifier,
}

impl Default for SynthProfile {
    fn default() -> Self {
        use Component as C;
        let stages = vec![
            // W
            StageRecipe {
                eeg: vec![C::continuous(10.0, 3.0, 22.0), C::continuous(20.0, 10.0, 6.0)],
                eog_events_per_epoch: 3.0,
                eog_event_amplitude: 60.0,
                emg_rms: 1.0,
            },
            // S1
            StageRecipe {
                eeg: vec![C::continuous(5.5, 3.0, 12.0), C::continuous(10.0, 3.0, 5.0)],
                eog_events_per_epoch: 0.5,
                eog_event_amplitude: 25.0,
                emg_rms: 0.5,
            },
            // S2
            StageRecipe {
                eeg: vec![
                    C::continuous(5.5, 3.0, 15.0),
                    C::bursty(13.0, 2.0, 35.0, 3.0),
                    C::continuous(1.25, 1.5, 12.0),
                ],
                eog_events_per_epoch: 0.0,
                eog_event_amplitude: 0.0,
                emg_rms: 0.4,
            },
            // SWS
            StageRecipe {
                eeg: vec![C::continuous(1.25, 1.5, 60.0), C::continuous(5.0, 3.0, 8.0)],
                eog_events_per_epoch: 0.0,
                eog_event_amplitude: 0.0,
                emg_rms: 0.35,
            },
            // REM
            StageRecipe {
                eeg: vec![C::continuous(5.5, 3.0, 13.0), C::continuous(2.5, 1.0, 6.0)],
                eog_events_per_epoch: 6.0,
                eog_event_amplitude: 80.0,
                emg_rms: 0.05,
            },
        ];
        Self {
            stages,
            transition: [
                [0.90, 0.05, 0.04, 0.00, 0.01],
                [0.10, 0.55, 0.30, 0.00, 0.05],
                [0.02, 0.02, 0.90, 0.04, 0.02],
                [0.01, 0.00, 0.07, 0.92, 0.00],
                [0.03, 0.02, 0.03, 0.00, 0.92],
            ],
            initial: StageLabel::W,
            noise_floor: 5.0,
            eog_background: C::continuous(1.5, 2.0, 6.0),
            epoch_jitter: 0.3,
            subject_jitter: 0.03,
            age: [
                AgeModifier::NEUTRAL,
                AgeModifier {
                    eeg_gain: 0.7,
                    delta_attenuation: 0.85,
                },
                AgeModifier {
                    eeg_gain: 0.49,
                    delta_attenuation: 0.72,
                },
                AgeModifier {
                    eeg_gain: 0.343,
                    delta_attenuation: 0.6,
                },
            ],
            half: HalfModifier {
                early_weights: [1.0, 1.0, 1.0, 2.0, 0.5],
                late_weights: [1.0, 1.0, 1.0, 0.5, 2.0],
                early_gain: 1.0,
                late_gain: 0.5,
            },
        }
    }
}

impl SynthProfile {
    pub fn age_modifier(&self, group: Option<AgeGroup>) -> AgeModifier {
        match group {
            Some(g) => self.age[g as usize],
            None => AgeModifier::NEUTRAL,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.stages.len() != N_STAGES {
            return Err(SynthError::Profile(format!("expected {N_STAGES} stage recipes, got {}", self.stages.len())));
        }
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        for (s, r) in self.stages.iter().enumerate() {
            let stage = StageLabel::from_index(s).expect("5 stages");
            for c in &r.eeg {
                if !(nonneg(c.amplitude) && c.bandwidth > 0.0 && c.center > 0.0 && nonneg(c.bursts_per_epoch) && c.burst_seconds > 0.0) {
                    return Err(SynthError::Profile(format!("{stage}: bad component {c:?}")));
                }
            }
            if !(nonneg(r.eog_events_per_epoch) && nonneg(r.eog_event_amplitude) && nonneg(r.emg_rms)) {
                return Err(SynthError::Profile(format!("{stage}: negative EOG/EMG parameter")));
            }
        }
        let mods = self.age.iter().flat_map(|a| [a.eeg_gain, a.delta_attenuation]);
        let half = self.half.early_weights.iter().chain(&self.half.late_weights).copied();
        if !mods
            .chain(half)
            .chain([self.half.early_gain, self.half.late_gain, self.noise_floor, self.epoch_jitter, self.subject_jitter])
            .all(nonneg)
        {
            return Err(SynthError::Profile("modifiers and noise levels must be non-negative".into()));
        }
        check_chain(&self.transition)?;
        for w in [&self.half.early_weights, &self.half.late_weights] {
            check_chain(&reweight(&self.transition, w))?;
        }
        Ok(())
    }
}

fn reweight(t: &[[f64; N_STAGES]; N_STAGES], w: &[f64; N_STAGES]) -> [[f64; N_STAGES]; N_STAGES] {
    let mut out = *t;
    for row in &mut out {
        for (v, wj) in row.iter_mut().zip(w) {
            *v *= wj;
        }
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        }
    }
    out
}

/// Rows must be stochastic and every stage reachable from every other.
pub fn check_chain(t: &[[f64; N_STAGES]; N_STAGES]) -> Result<(), SynthError> {
    for (i, row) in t.iter().enumerate() {
        if row.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(SynthError::Degenerate(format!("row {i} has a negative or non-finite entry")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(SynthError::Degenerate(format!("row {i} sums to {s}")));
        }
    }
    for start in 0..N_STAGES {
        let mut seen = [false; N_STAGES];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..N_STAGES {
                if t[i][j] > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        let n = seen.iter().filter(|&&s| s).count();
        if n < N_STAGES {
            let from = StageLabel::from_index(start).expect("5 stages");
            return Err(SynthError::Degenerate(format!("from {from} only {n} of {N_STAGES} stages are reachable")));
        }
    }
    Ok(())
}

/// Stationary distribution by power iteration.
pub fn stationary(t: &[[f64; N_STAGES]; N_STAGES]) -> [f64; N_STAGES] {
    let mut p = [1.0 / N_STAGES as f64; N_STAGES];
    for _ in 0..100_000 {
        let mut next = [0.0; N_STAGES];
        for i in 0..N_STAGES {
            for j in 0..N_STAGES {
                next[j] += p[i] * t[i][j];
            }
        }
        let delta: f64 = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if delta < 1e-15 {
            break;
        }
    }
    p
}

/// A generated subject-night.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSubject {
    pub recording: Recording,
    pub annotations: Vec<Annotation>,
    pub group: Option<AgeGroup>,
}

impl SynthSubject {
    pub fn id(&self) -> &str {
        &self.recording.subject_id
    }

    pub fn stages(&self) -> Vec<StageLabel> {
        let mut out = Vec::new();
        for a in &self.annotations {
            let stage = match crate::dataset::map_raw_label(&a.raw_label) {
                crate::dataset::RawStage::Stage(s) => s,
                _ => continue,
            };
            let n = (a.duration / EPOCH_SECONDS).round() as usize;
            out.extend(std::iter::repeat(stage).take(n));
        }
        out
    }

    pub fn epochs(&self) -> Result<Vec<Epoch>, SynthError> {
        Ok(segment_epochs(&self.recording, &self.annotations)?)
    }

    /// Write `<id>-PSG.edf` and `<id>-Hypnogram.edf` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), SynthError> {
        let spec = SubjectSpec::parse(self.id()).map_err(|e| SynthError::Profile(e.to_string()))?;
        let psg = dir.join(spec.psg_name());
        let hyp = dir.join(spec.hypnogram_name());
        let psg_bytes = self.recording.to_edf()?.to_bytes()?;
        let hyp_bytes = hypnogram_to_edf(&self.annotations, self.id(), self.recording.start_time).to_bytes()?;
        for (p, b) in [(&psg, psg_bytes), (&hyp, hyp_bytes)] {
            std::fs::write(p, b).map_err(|source| SynthError::Io { path: p.clone(), source })?;
        }
        Ok((psg, hyp))
    }
}

/// One subject from `seed` with no age group.
pub fn gen_subject(seed: u64, profile: &SynthProfile, n_epochs: usize) -> Result<SynthSubject, SynthError> {
    gen_subject_with(seed, profile, n_epochs, &format!("SYN{seed}"), None)
}

/// One subject with an explicit id and age; the age selects the group modifier.
pub fn gen_subject_with(
    seed: u64,
    profile: &SynthProfile,
    n_epochs: usize,
    subject_id: &str,
    age: Option<u32>,
) -> Result<SynthSubject, SynthError> {
    if n_epochs < MIN_EPOCHS {
        return Err(SynthError::TooFewEpochs(n_epochs));
    }
    profile.validate()?;
    let group = age.and_then(assign_age_group);
    let age_mod = profile.age_modifier(group);
    let mut rng = RngStream::new(seed, 0).rng();
    let subject_gain = lognormal(&mut rng, profile.subject_jitter);
    let stages = sample_hypnogram(&mut rng, profile, n_epochs);
    let mid = n_epochs / 2;

    let epochs: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = stages
        .par_iter()
        .enumerate()
        .map(|(i, &stage)| {
            let mut rng = RngStream::new(seed, 1 + i as u64).rng();
            let half_gain = if i < mid { profile.half.early_gain } else { profile.half.late_gain };
            gen_epoch(&mut rng, profile, stage, subject_gain * half_gain, &age_mod)
        })
        .collect();
    let mut eeg = Vec::with_capacity(n_epochs * ChannelKind::Eeg.epoch_samples());
    let mut eog = Vec::with_capacity(n_epochs * ChannelKind::Eog.epoch_samples());
    let mut emg = Vec::with_capacity(n_epochs * ChannelKind::Emg.epoch_samples());
    for (a, b, c) in epochs {
        eeg.extend(a);
        eog.extend(b);
        emg.extend(c);
    }
    let channel = |kind: ChannelKind, samples| Channel {
        name: kind.edf_label().into(),
        sampling_rate: kind.sampling_rate(),
        samples,
    };
    Ok(SynthSubject {
        recording: Recording {
            subject_id: subject_id.into(),
            age,
            channels: vec![
                channel(ChannelKind::Eeg, eeg),
                channel(ChannelKind::Eog, eog),
                channel(ChannelKind::Emg, emg),
            ],
            start_time: DEFAULT_START,
        },
        annotations: run_length(&stages),
        group,
    })
}

fn sample_hypnogram(rng: &mut impl Rng, profile: &SynthProfile, n: usize) -> Vec<StageLabel> {
    let early = reweight(&profile.transition, &profile.half.early_weights);
    let late = reweight(&profile.transition, &profile.half.late_weights);
    let mut out = Vec::with_capacity(n);
    let mut state = profile.initial.index();
    out.push(profile.initial);
    for i in 1..n {
        let t = if i < n / 2 { &early } else { &late };
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut next = N_STAGES - 1;
        for (j, &p) in t[state].iter().enumerate() {
            acc += p;
            if u < acc {
                next = j;
                break;
            }
        }
        // rounding can leave the cumulative sum just below 1; land on the last positive entry
        if u >= acc {
            next = t[state].iter().rposition(|&p| p > 0.0).unwrap_or(next);
        }
        state = next;
        out.push(StageLabel::from_index(state).expect("5 stages"));
    }
    out
}

fn run_length(stages: &[StageLabel]) -> Vec<Annotation> {
    let mut out: Vec<Annotation> = Vec::new();
    for (i, &s) in stages.iter().enumerate() {
        let label = raw_label_for(s);
        match out.last_mut() {
            Some(a) if a.raw_label == label => a.duration += EPOCH_SECONDS,
            _ => out.push(Annotation {
                onset: i as f64 * EPOCH_SECONDS,
                duration: EPOCH_SECONDS,
                raw_label: label.into(),
            }),
        }
    }
    out
}

fn lognormal(rng: &mut impl Rng, sd: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (sd * z).exp()
}

fn gen_epoch(
    rng: &mut impl Rng,
    profile: &SynthProfile,
    stage: StageLabel,
    gain: f64,
    age: &AgeModifier,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let recipe = &profile.stages[stage.index()];
    let fs = ChannelKind::Eeg.sampling_rate();
    let n = ChannelKind::Eeg.epoch_samples();
    let mut eeg = white(rng, n, profile.noise_floor);
    for c in &recipe.eeg {
        let delta = if c.center <= DELTA_MAX_HZ { age.delta_attenuation } else { 1.0 };
        let amp = c.amplitude * gain * age.eeg_gain * delta * lognormal(rng, profile.epoch_jitter);
        add(&mut eeg, &component(rng, c, amp, n, fs));
    }

    let fs_eog = ChannelKind::Eog.sampling_rate();
    let n_eog = ChannelKind::Eog.epoch_samples();
    let mut eog = white(rng, n_eog, profile.noise_floor);
    let bg = &profile.eog_background;
    add(&mut eog, &component(rng, bg, bg.amplitude, n_eog, fs_eog));
    let events = poisson(rng, recipe.eog_events_per_epoch);
    for _ in 0..events {
        let dur = rng.gen_range(0.3..1.0) * fs_eog;
        let start = rng.gen_range(0.0..(n_eog as f64 - dur));
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let amp = sign * recipe.eog_event_amplitude * lognormal(rng, profile.epoch_jitter);
        for (t, v) in eog.iter_mut().enumerate() {
            let x = (t as f64 - start) / dur;
            if (0.0..=1.0).contains(&x) {
                *v += amp * (std::f64::consts::PI * x).sin().powi(2);
            }
        }
    }

    let n_emg = ChannelKind::Emg.epoch_samples();
    let emg_level = recipe.emg_rms * lognormal(rng, profile.epoch_jitter);
    let emg = (0..n_emg)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            emg_level * (1.0 + 0.2 * z).abs()
        })
        .collect();
    (eeg, eog, emg)
}

fn white(rng: &mut impl Rng, n: usize, rms: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            rms * z
        })
        .collect()
}

fn add(dst: &mut [f64], src: &[f64]) {
    dst.iter_mut().zip(src).for_each(|(a, b)| *a += b);
}

fn poisson(rng: &mut impl Rng, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    // Knuth's method; means here are small
    let limit = (-mean).exp();
    let mut k = 0;
    let mut p: f64 = rng.gen();
    while p > limit {
        k += 1;
        p *= rng.gen::<f64>();
    }
    k
}

/// Band-limited Gaussian noise scaled to RMS `amp`, optionally burst-gated.
fn component(rng: &mut impl Rng, c: &Component, amp: f64, n: usize, fs: f64) -> Vec<f64> {
    let mut spec = vec![Complex::new(0.0, 0.0); n];
    let (lo, hi) = (c.center - c.bandwidth / 2.0, c.center + c.bandwidth / 2.0);
    for k in 1..=n / 2 {
        let f = k as f64 * fs / n as f64;
        if f >= lo && f <= hi {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            spec[k] = Complex::new(re, im);
            if k != n - k {
                spec[n - k] = Complex::new(re, -im);
            } else {
                spec[k].im = 0.0;
            }
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spec);
    let mut x: Vec<f64> = spec.iter().map(|v| v.re).collect();
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    if rms > 0.0 {
        x.iter_mut().for_each(|v| *v *= amp / rms);
    }
    if c.bursts_per_epoch > 0.0 {
        let mut env = vec![0.0; n];
        let len = ((c.burst_seconds * fs).round() as usize).clamp(2, n);
        for _ in 0..poisson(rng, c.bursts_per_epoch).max(1) {
            let start = rng.gen_range(0..=n - len);
            for t in 0..len {
                let w = (std::f64::consts::PI * t as f64 / (len - 1) as f64).sin().powi(2);
                env[start + t] = f64::max(env[start + t], w);
            }
        }
        x.iter_mut().zip(&env).for_each(|(v, e)| *v *= e);
    }
    x
}

/// Subjects per age group. Ids look like `SYN-G2-003`; ages are drawn
/// uniformly inside each group's range.
pub fn gen_cohort(
    request: &BTreeMap<AgeGroup, usize>,
    seed: u64,
    profile: &SynthProfile,
    n_epochs: usize,
) -> Result<Vec<SynthSubject>, SynthError> {
    for (&group, &found) in request {
        if found < 2 {
            return Err(SynthError::TooFewSubjects { group, found });
        }
    }
    let jobs: Vec<(AgeGroup, usize)> = request.iter().flat_map(|(&g, &n)| (0..n).map(move |k| (g, k))).collect();
    jobs.par_iter()
        .map(|&(group, k)| {
            let stream = RngStream::new(seed, (group as u64) << 32 | k as u64);
            let (lo, hi) = group.range();
            let age = stream.rng().gen_range(lo..=hi);
            gen_subject_with(stream.derive_seed(), profile, n_epochs, &format!("SYN-{group}-{k:03}"), Some(age))
        })
        .collect()
}

/// `n` subjects without an age group, ids `SYN-000` onward.
pub fn gen_subjects(n: usize, seed: u64, profile: &SynthProfile, n_epochs: usize) -> Result<Vec<SynthSubject>, SynthError> {
    (0..n)
        .into_par_iter()
        .map(|k| gen_subject_with(RngStream::new(seed, k as u64).derive_seed(), profile, n_epochs, &format!("SYN-{k:03}"), None))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_edf, parse_hypnogram, trim_wake};

    fn neutral() -> SynthProfile {
        SynthProfile {
            half: HalfModifier::neutral(),
            ..SynthProfile::default()
        }
    }

    /// Mean periodogram power density over `[lo, hi]` Hz.
    fn band_power(x: &[f64], fs: f64, lo: f64, hi: f64) -> f64 {
        let n = x.len();
        let mut spec: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut spec);
        let bins: Vec<f64> = (1..n / 2)
            .filter(|&k| {
                let f = k as f64 * fs / n as f64;
                f >= lo && f <= hi
            })
            .map(|k| spec[k].norm_sqr() / n as f64)
            .collect();
        bins.iter().sum::<f64>() / bins.len() as f64
    }

    #[test]
    fn deterministic() {
        let p = SynthProfile::default();
        let a = gen_subject(7, &p, 40).unwrap();
        let b = gen_subject(7, &p, 40).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_subject(8, &p, 40).unwrap());
    }

    #[test]
    fn stationary_histogram() {
        let p = neutral();
        let pi = stationary(&p.transition);
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pi[StageLabel::S1.index()] > 0.02 && pi[StageLabel::S1.index()] < 0.08, "{pi:?}");
        let mut rng = RngStream::new(3, 0).rng();
        let stages = sample_hypnogram(&mut rng, &p, 10_000);
        for s in StageLabel::ALL {
            let frac = stages.iter().filter(|&&x| x == s).count() as f64 / stages.len() as f64;
            assert!((frac - pi[s.index()]).abs() < 0.05, "{s}: {frac} vs {}", pi[s.index()]);
        }
    }

    #[test]
    fn degenerate_chain_rejected() {
        let mut p = SynthProfile::default();
        // SWS absorbing
        p.transition[3] = [0.0, 0.0, 0.0, 1.0, 0.0];
        assert!(matches!(gen_subject(1, &p, 20), Err(SynthError::Degenerate(_))));
        let mut p = SynthProfile::default();
        p.transition[0][0] = 0.5;
        assert!(matches!(gen_subject(1, &p, 20), Err(SynthError::Degenerate(_))));
        assert!(matches!(gen_subject(1, &SynthProfile::default(), 5), Err(SynthError::TooFewEpochs(5))));
    }

    #[test]
    fn spectral_signatures() {
        let p = neutral();
        let sub = gen_subject(11, &p, 400).unwrap();
        let epochs = sub.epochs().unwrap();
        let fs = ChannelKind::Eeg.sampling_rate();
        let mut n_sws = 0;
        let mut n_s2 = 0;
        for e in &epochs {
            match e.label {
                StageLabel::Sws => {
                    n_sws += 1;
                    let delta = band_power(&e.eeg, fs, 0.5, 2.0);
                    for (lo, hi) in [(3.0, 6.0), (8.0, 12.0), (12.0, 14.0), (20.0, 30.0)] {
                        assert!(delta > band_power(&e.eeg, fs, lo, hi));
                    }
                }
                StageLabel::S2 => {
                    n_s2 += 1;
                    let sigma = band_power(&e.eeg, fs, 12.2, 13.8);
                    assert!(sigma > band_power(&e.eeg, fs, 9.0, 11.0), "{}", e.index);
                    assert!(sigma > band_power(&e.eeg, fs, 15.0, 17.0), "{}", e.index);
                }
                _ => {}
            }
        }
        assert!(n_sws > 5 && n_s2 > 5);
    }

    #[test]
    fn edf_round_trip_and_trim() {
        let dir = tempfile::tempdir().unwrap();
        let sub = gen_subject(5, &SynthProfile::default(), 60).unwrap();
        let (psg, hyp) = sub.write(dir.path()).unwrap();
        let rec = parse_edf(&std::fs::read(psg).unwrap()).unwrap();
        let anns = parse_hypnogram(&std::fs::read(hyp).unwrap()).unwrap();
        assert_eq!(anns, sub.annotations);
        assert_eq!(rec.subject_id, sub.id());
        let epochs = segment_epochs(&rec, &anns).unwrap();
        assert_eq!(epochs.len(), 60);
        let labels: Vec<StageLabel> = epochs.iter().map(|e| e.label).collect();
        assert_eq!(labels, sub.stages());
        // quantization error stays below one digital step of the EEG range
        let eeg = &rec.channels[0].samples;
        let orig = &sub.recording.channels[0].samples;
        let span = orig.iter().cloned().fold(f64::MIN, f64::max) - orig.iter().cloned().fold(f64::MAX, f64::min);
        for (a, b) in eeg.iter().zip(orig) {
            assert!((a - b).abs() <= span / 65535.0);
        }
        assert!(trim_wake(epochs).is_ok());
    }

    #[test]
    fn cohort_groups_and_ages() {
        let p = SynthProfile::default();
        let req = BTreeMap::from([(AgeGroup::G1, 4), (AgeGroup::G4, 4)]);
        let cohort = gen_cohort(&req, 1, &p, 20).unwrap();
        assert_eq!(cohort.len(), 8);
        let in_range = |g: AgeGroup| {
            let (lo, hi) = g.range();
            cohort
                .iter()
                .filter(|s| s.group == Some(g))
                .filter(|s| (lo..=hi).contains(&s.recording.age.unwrap()))
                .count()
        };
        assert_eq!((in_range(AgeGroup::G1), in_range(AgeGroup::G4)), (4, 4));
        assert!(cohort.iter().all(|s| s.id().contains(&s.group.unwrap().to_string())));
        assert!(!cohort.iter().any(|s| s.group == Some(AgeGroup::G2)));
        assert!(gen_cohort(&BTreeMap::from([(AgeGroup::G2, 1)]), 1, &p, 20).is_err());
    }

    #[test]
    fn age_delta_attenuation() {
        let p = neutral();
        let req = BTreeMap::from([(AgeGroup::G1, 4), (AgeGroup::G4, 4)]);
        let cohort = gen_cohort(&req, 9, &p, 300).unwrap();
        let fs = ChannelKind::Eeg.sampling_rate();
        let mean_delta = |g: AgeGroup| {
            let v: Vec<f64> = cohort
                .iter()
                .filter(|s| s.group == Some(g))
                .flat_map(|s| s.epochs().unwrap())
                .filter(|e| e.label == StageLabel::Sws)
                .map(|e| band_power(&e.eeg, fs, 0.5, 2.0))
                .collect();
            v.iter().sum::<f64>() / v.len() as f64
        };
        let ratio = mean_delta(AgeGroup::G4) / mean_delta(AgeGroup::G1);
        let expected = (p.age[3].delta_factor() / p.age[0].delta_factor()).powi(2);
        assert!((ratio / expected - 1.0).abs() < 0.1, "{ratio} vs {expected}");
    }

    #[test]
    fn half_priors_shift_stages() {
        let p = SynthProfile::default();
        let subs = gen_subjects(6, 2, &p, 600).unwrap();
        let (mut early, mut late) = ([0usize; 5], [0usize; 5]);
        for s in &subs {
            for (i, st) in s.stages().into_iter().enumerate() {
                if i < 300 {
                    early[st.index()] += 1;
                } else {
                    late[st.index()] += 1;
                }
            }
        }
        assert!(early[StageLabel::Sws.index()] > late[StageLabel::Sws.index()]);
        assert!(late[StageLabel::Rem.index()] > early[StageLabel::Rem.index()]);
    }

    #[test]
    fn profile_json_round_trip() {
        let p = SynthProfile::default();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<SynthProfile>(&s).unwrap(), p);
    }
}
