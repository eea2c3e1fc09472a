//! Discrete wavelet transform.
//!
//! Filter banks for the Haar, Daubechies, Symlets, Coiflets, biorthogonal,
//! reverse biorthogonal and discrete Meyer families, and a periodized
//! multilevel decomposition.
//!
//! Filters are held in analysis orientation: one step computes
//!
//! ```text
//! approx[i] = Σ_k low[k]  · x[(2i + k) mod n]
//! detail[i] = Σ_k high[k] · x[(2i + k) mod n]
//! ```
//!
//! For the orthogonal families `high[k] = (-1)^k · low[len - 1 - k]`, so the
//! Haar bank is `low = [1/√2, 1/√2]`, `high = [1/√2, -1/√2]`. This orientation
//! is part of the serialized feature layout and must not change.
//!
//! Odd-length inputs are zero-padded by one sample before the step, which
//! gives `ceil(n / 2)` outputs per band and keeps orthogonal transforms
//! energy preserving at every level.

mod family;
mod tables;

pub use family::{BiorPair, WaveletFamily};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveletError {
    #[error("unsupported wavelet order {order} for {family}; supported: {supported}")]
    UnsupportedOrder {
        family: &'static str,
        order: u8,
        supported: String,
    },
    #[error("unknown wavelet name {0:?}")]
    UnknownName(String),
    #[error("empty signal")]
    EmptySignal,
    #[error("decomposition level {requested} too deep for a signal of length {len} (cap is {cap})")]
    LevelTooDeep { requested: usize, len: usize, cap: usize },
    #[error("decomposition level must be at least 1")]
    ZeroLevel,
}

/// Analysis filter pair for one family.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl FilterBank {
    pub fn len(&self) -> usize {
        self.low.len()
    }

    pub fn is_empty(&self) -> bool {
        self.low.is_empty()
    }
}

/// Resolve a family to its analysis filters.
pub fn wavelet_filters(family: WaveletFamily) -> Result<FilterBank, WaveletError> {
    family.validate()?;
    let qmf = |low: &[f64]| {
        let n = low.len();
        let high = (0..n)
            .map(|k| if k % 2 == 0 { low[n - 1 - k] } else { -low[n - 1 - k] })
            .collect();
        FilterBank {
            low: low.to_vec(),
            high,
        }
    };
    Ok(match family {
        WaveletFamily::Haar => qmf(tables::DAUBECHIES[0]),
        WaveletFamily::Daubechies(order) => qmf(tables::DAUBECHIES[order as usize - 1]),
        WaveletFamily::Symlets(order) => qmf(tables::SYMLETS[order as usize - 2]),
        WaveletFamily::Coiflets(order) => qmf(tables::COIFLETS[order as usize - 1]),
        WaveletFamily::DiscreteMeyer => qmf(tables::DMEY[0]),
        WaveletFamily::Biorthogonal(pair) => pair_bank(&tables::BIORTHOGONAL, pair),
        WaveletFamily::ReverseBiorthogonal(pair) => pair_bank(&tables::REVERSE_BIORTHOGONAL, pair),
    })
}

fn pair_bank(table: &[(u8, u8, &[f64], &[f64])], pair: BiorPair) -> FilterBank {
    // validate() has already checked membership
    let (_, _, low, high) = table
        .iter()
        .find(|(a, b, _, _)| *a == pair.decomposition && *b == pair.reconstruction)
        .expect("validated biorthogonal pair");
    FilterBank {
        low: low.to_vec(),
        high: high.to_vec(),
    }
}

/// One periodized analysis step: circular filtering and downsampling by 2.
pub fn dwt_step(signal: &[f64], bank: &FilterBank) -> Result<(Vec<f64>, Vec<f64>), WaveletError> {
    if signal.is_empty() {
        return Err(WaveletError::EmptySignal);
    }
    let n = signal.len() + signal.len() % 2;
    let half = n / 2;
    let at = |j: usize| if j < signal.len() { signal[j] } else { 0.0 };
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for i in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        let base = 2 * i;
        for (k, (&lo, &hi)) in bank.low.iter().zip(&bank.high).enumerate() {
            let x = at((base + k) % n);
            a += lo * x;
            d += hi * x;
        }
        approx.push(a);
        detail.push(d);
    }
    Ok((approx, detail))
}

/// Deepest level allowed for a signal of length `n`: `floor(log2(n))`.
pub fn max_level(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Length of the level-`k` band for an input of length `n`: `ceil(n / 2^k)`.
pub fn band_len(n: usize, level: usize) -> usize {
    let mut len = n;
    for _ in 0..level {
        len = len.div_ceil(2);
    }
    len
}

/// Multilevel decomposition result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwtCoefficients {
    /// Approximation at the deepest level.
    pub approx: Vec<f64>,
    /// Detail bands, deepest first (`details[0]` is level `level`).
    pub details: Vec<Vec<f64>>,
    pub family: WaveletFamily,
    pub level: usize,
}

impl DwtCoefficients {
    /// Bands in feature order: `[approx_L, detail_L, …, detail_1]`.
    pub fn bands(&self) -> impl Iterator<Item = &[f64]> {
        std::iter::once(self.approx.as_slice()).chain(self.details.iter().map(|d| d.as_slice()))
    }

    pub fn total_len(&self) -> usize {
        self.bands().map(<[f64]>::len).sum()
    }
}

pub fn wavedec(signal: &[f64], family: WaveletFamily, level: usize) -> Result<DwtCoefficients, WaveletError> {
    let bank = wavelet_filters(family)?;
    wavedec_with(signal, &bank, family, level)
}

/// [`wavedec`] with a pre-resolved filter bank.
pub fn wavedec_with(
    signal: &[f64],
    bank: &FilterBank,
    family: WaveletFamily,
    level: usize,
) -> Result<DwtCoefficients, WaveletError> {
    if signal.is_empty() {
        return Err(WaveletError::EmptySignal);
    }
    if level == 0 {
        return Err(WaveletError::ZeroLevel);
    }
    let cap = max_level(signal.len());
    if level > cap {
        return Err(WaveletError::LevelTooDeep {
            requested: level,
            len: signal.len(),
            cap,
        });
    }
    let mut details = Vec::with_capacity(level);
    let mut current = signal.to_vec();
    for _ in 0..level {
        let (a, d) = dwt_step(&current, bank)?;
        details.push(d);
        current = a;
    }
    details.reverse();
    Ok(DwtCoefficients {
        approx: current,
        details,
        family,
        level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn haar_bank() {
        let bank = wavelet_filters(WaveletFamily::Haar).unwrap();
        assert!((bank.low[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((bank.low[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((bank.high[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((bank.high[1] + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn db2_closed_form() {
        // (1 ± √3)/(4√2), (3 ± √3)/(4√2)
        let s3 = 3f64.sqrt();
        let d = 4.0 * 2f64.sqrt();
        let expected = [(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d];
        let bank = wavelet_filters(WaveletFamily::Daubechies(2)).unwrap();
        for (a, b) in bank.low.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let sum: f64 = bank.low.iter().sum();
        assert!((sum - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_lowpass_sums_to_sqrt2() {
        for family in WaveletFamily::all() {
            if !family.is_orthogonal() {
                continue;
            }
            let bank = wavelet_filters(family).unwrap();
            let sum: f64 = bank.low.iter().sum();
            assert!((sum - 2f64.sqrt()).abs() < 1e-10, "{family}: {sum}");
            let n = bank.len();
            for k in 0..n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(bank.high[k], sign * bank.low[n - 1 - k]);
            }
        }
    }

    #[test]
    fn unsupported_order() {
        let err = wavelet_filters(WaveletFamily::Daubechies(21)).unwrap_err();
        assert!(err.to_string().contains("1..=20"), "{err}");
        assert!(wavelet_filters(WaveletFamily::Symlets(1)).is_err());
        assert!(wavelet_filters(WaveletFamily::Coiflets(6)).is_err());
        assert!(wavelet_filters(WaveletFamily::Biorthogonal(BiorPair::new(2, 3))).is_err());
    }

    #[test]
    fn haar_step_examples() {
        let bank = wavelet_filters(WaveletFamily::Haar).unwrap();
        let (a, d) = dwt_step(&[1.0, 1.0, 1.0, 1.0], &bank).unwrap();
        assert!(a.iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-12));
        assert!(d.iter().all(|v| v.abs() < 1e-12));

        let (a, d) = dwt_step(&[4.0, 2.0], &bank).unwrap();
        assert!((a[0] - 6.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((d[0] - 2.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_input() {
        let bank = wavelet_filters(WaveletFamily::Haar).unwrap();
        assert_eq!(dwt_step(&[], &bank), Err(WaveletError::EmptySignal));
    }

    #[test]
    fn wavedec_3000_levels() {
        let x: Vec<f64> = (0..3000).map(|i| (i as f64 * 0.37).sin()).collect();
        let c = wavedec(&x, WaveletFamily::Haar, 4).unwrap();
        let lens: Vec<usize> = c.details.iter().map(Vec::len).collect();
        assert_eq!(lens, vec![188, 375, 750, 1500]);
        assert_eq!(c.approx.len(), 188);
        assert_eq!(c.total_len(), 3001);
    }

    #[test]
    fn level_one_is_a_step() {
        let x: Vec<f64> = (0..37).map(|i| (i * i % 11) as f64).collect();
        let fam = WaveletFamily::Symlets(4);
        let bank = wavelet_filters(fam).unwrap();
        let (a, d) = dwt_step(&x, &bank).unwrap();
        let c = wavedec(&x, fam, 1).unwrap();
        assert_eq!(c.approx, a);
        assert_eq!(c.details, vec![d]);
    }

    #[test]
    fn level_cap() {
        let x = vec![1.0; 30];
        assert_eq!(max_level(30), 4);
        assert_eq!(
            wavedec(&x, WaveletFamily::Haar, 5),
            Err(WaveletError::LevelTooDeep {
                requested: 5,
                len: 30,
                cap: 4
            })
        );
        assert!(wavedec(&x, WaveletFamily::Haar, 4).is_ok());
    }

    #[test]
    fn band_len_formula() {
        assert_eq!(band_len(3000, 4), 188);
        assert_eq!(band_len(30, 4), 2);
        assert_eq!(band_len(1, 3), 1);
    }
}
