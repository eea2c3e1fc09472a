//! Second-order IIR notch (RBJ biquad), single forward pass.

use thiserror::Error;

pub const DEFAULT_NOTCH_Q: f64 = 30.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NotchError {
    #[error("notch frequency {f0} Hz must lie strictly between 0 and fs/2 = {nyquist} Hz")]
    Frequency { f0: f64, nyquist: f64 },
    #[error("quality factor must be positive and finite, got {0}")]
    Quality(f64),
}

pub fn notch_filter(signal: &[f64], fs: f64, f0: f64, q: f64) -> Result<Vec<f64>, NotchError> {
    let nyquist = fs / 2.0;
    if !(f0 > 0.0 && f0 < nyquist) {
        return Err(NotchError::Frequency { f0, nyquist });
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(NotchError::Quality(q));
    }
    let w0 = 2.0 * std::f64::consts::PI * f0 / fs;
    let alpha = w0.sin() / (2.0 * q);
    let a0 = 1.0 + alpha;
    let b0 = 1.0 / a0;
    let b1 = -2.0 * w0.cos() / a0;
    let b2 = b0;
    let a1 = b1;
    let a2 = (1.0 - alpha) / a0;

    // direct form II transposed
    let (mut z1, mut z2) = (0.0, 0.0);
    Ok(signal
        .iter()
        .map(|&x| {
            let y = b0 * x + z1;
            z1 = b1 * x - a1 * y + z2;
            z2 = b2 * x - a2 * y;
            y
        })
        .collect())
}
