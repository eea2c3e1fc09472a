//! On-disk feature matrix cache: a columnar binary file plus a JSON sidecar.
//!
//! Binary layout (little-endian): `b"SSFM"`, `u32` version, `u64` rows,
//! `u64` cols, then `rows × cols` f64 values column by column. The sidecar
//! holds the same version, the dimensions and the column/row metadata.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ColumnMeta, FeatureMatrix, RowMeta};
use crate::mlcore::Matrix;

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"SSFM";
const HEADER_LEN: usize = 4 + 4 + 8 + 8;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("not a feature cache (bad magic)")]
    Magic,
    #[error("unsupported feature cache version {found} (this build reads {CACHE_VERSION})")]
    Version { found: u32 },
    #[error("feature cache truncated at byte {offset}: need {expected} bytes, have {available}")]
    Truncated { offset: usize, expected: usize, available: usize },
    #[error("feature cache has {extra} trailing bytes")]
    Trailing { extra: usize },
    #[error("sidecar: {0}")]
    Sidecar(#[from] serde_json::Error),
    #[error("sidecar does not match data: {0}")]
    Mismatch(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    version: u32,
    rows: usize,
    cols: usize,
    /// Free-form key of the producing configuration.
    key: String,
    column_meta: Vec<ColumnMeta>,
    row_meta: Vec<RowMeta>,
}

/// Encode to `(binary, sidecar json)`.
pub fn encode_cache(m: &FeatureMatrix, key: &str) -> (Vec<u8>, Vec<u8>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut bin = Vec::with_capacity(HEADER_LEN + rows * cols * 8);
    bin.extend_from_slice(MAGIC);
    bin.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    bin.extend_from_slice(&(rows as u64).to_le_bytes());
    bin.extend_from_slice(&(cols as u64).to_le_bytes());
    for c in 0..cols {
        for r in 0..rows {
            bin.extend_from_slice(&m.values.get(r, c).to_le_bytes());
        }
    }
    let sidecar = Sidecar {
        version: CACHE_VERSION,
        rows,
        cols,
        key: key.to_string(),
        column_meta: m.column_meta.clone(),
        row_meta: m.row_meta.clone(),
    };
    let json = serde_json::to_vec(&sidecar).expect("sidecar serializes");
    (bin, json)
}

/// Decode and cross-check a cache pair. Returns the matrix and its key.
pub fn decode_cache(bin: &[u8], sidecar: &[u8]) -> Result<(FeatureMatrix, String), CacheError> {
    let truncated = |offset, expected| CacheError::Truncated {
        offset,
        expected,
        available: bin.len(),
    };
    if bin.len() < 4 {
        return Err(truncated(0, HEADER_LEN));
    }
    if &bin[..4] != MAGIC {
        return Err(CacheError::Magic);
    }
    if bin.len() < HEADER_LEN {
        return Err(truncated(bin.len(), HEADER_LEN));
    }
    let version = u32::from_le_bytes(bin[4..8].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(CacheError::Version { found: version });
    }
    let rows = u64::from_le_bytes(bin[8..16].try_into().unwrap());
    let cols = u64::from_le_bytes(bin[16..24].try_into().unwrap());
    let payload = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| usize::try_from(n).ok())
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(|| CacheError::Mismatch(format!("dimensions {rows}×{cols} overflow")))?;
    if bin.len() < payload {
        return Err(truncated(bin.len(), payload));
    }
    if bin.len() > payload {
        return Err(CacheError::Trailing {
            extra: bin.len() - payload,
        });
    }
    let side: Sidecar = serde_json::from_slice(sidecar)?;
    if side.version != version {
        return Err(CacheError::Version { found: side.version });
    }
    let (rows, cols) = (rows as usize, cols as usize);
    if side.rows != rows || side.cols != cols || side.column_meta.len() != cols || side.row_meta.len() != rows {
        return Err(CacheError::Mismatch(format!(
            "binary is {rows}×{cols}, sidecar says {}×{} with {} column and {} row entries",
            side.rows,
            side.cols,
            side.column_meta.len(),
            side.row_meta.len()
        )));
    }
    let mut values = Matrix::zeros(rows, cols);
    for (i, chunk) in bin[HEADER_LEN..].chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        values.set(i % rows, i / rows, v);
    }
    Ok((
        FeatureMatrix {
            values,
            column_meta: side.column_meta,
            row_meta: side.row_meta,
        },
        side.key,
    ))
}

fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes `path` and `path.with_extension("json")`.
pub fn write_cache(path: &Path, m: &FeatureMatrix, key: &str) -> Result<(), CacheError> {
    let io = |p: &Path| {
        let path = p.to_path_buf();
        move |source| CacheError::Io { path, source }
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io(dir))?;
    }
    let (bin, json) = encode_cache(m, key);
    let side = sidecar_path(path);
    fs::write(&side, json).map_err(io(&side))?;
    fs::write(path, bin).map_err(io(path))?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<(FeatureMatrix, String), CacheError> {
    let io = |p: &Path| {
        let path = p.to_path_buf();
        move |source| CacheError::Io { path, source }
    };
    let bin = fs::read(path).map_err(io(path))?;
    let side = sidecar_path(path);
    let json = fs::read(&side).map_err(io(&side))?;
    decode_cache(&bin, &json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ChannelKind, Epoch, StageLabel};
    use crate::features::{build_matrix, FeatureConfig, Variant};
    use crate::wavelet::WaveletFamily;

    fn sample() -> FeatureMatrix {
        let epochs: Vec<Epoch> = (0..3)
            .map(|i| Epoch {
                subject_id: format!("S{i}"),
                index: i,
                label: StageLabel::from_index(i).unwrap(),
                eeg: (0..3000).map(|k| ((k * (i + 1)) as f64 * 0.01).cos()).collect(),
                eog: vec![0.0; 3000],
                emg: vec![1.0; 30],
                half: None,
            })
            .collect();
        let cfg = FeatureConfig {
            variant: Variant::SM,
            channels: vec![ChannelKind::Eeg, ChannelKind::Emg],
            family: WaveletFamily::Haar,
            level: 2,
        };
        build_matrix(&epochs, &cfg).unwrap()
    }

    #[test]
    fn round_trip() {
        let m = sample();
        let (bin, json) = encode_cache(&m, "k");
        let (back, key) = decode_cache(&bin, &json).unwrap();
        assert_eq!(back, m);
        assert_eq!(key, "k");
        let text: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(text["version"], CACHE_VERSION);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/f.ssfm");
        let m = sample();
        write_cache(&p, &m, "cfg").unwrap();
        assert!(p.with_extension("json").exists());
        assert_eq!(read_cache(&p).unwrap().0, m);
    }

    #[test]
    fn rejects_corruption() {
        let m = sample();
        let (mut bin, json) = encode_cache(&m, "k");
        assert!(matches!(decode_cache(&bin[..bin.len() - 3], &json), Err(CacheError::Truncated { .. })));
        assert!(matches!(decode_cache(&bin[..10], &json), Err(CacheError::Truncated { .. })));
        let mut longer = bin.clone();
        longer.push(0);
        assert!(matches!(decode_cache(&longer, &json), Err(CacheError::Trailing { extra: 1 })));
        bin[4] = 9;
        assert!(matches!(decode_cache(&bin, &json), Err(CacheError::Version { found: 9 })));
        bin[0] = b'X';
        assert!(matches!(decode_cache(&bin, &json), Err(CacheError::Magic)));
    }

    #[test]
    fn sidecar_must_agree() {
        let m = sample();
        let (bin, _) = encode_cache(&m, "k");
        let (_, other) = encode_cache(&m.select_rows(&[0, 1]), "k");
        assert!(matches!(decode_cache(&bin, &other), Err(CacheError::Mismatch(_))));
    }
}
