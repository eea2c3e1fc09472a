//! Subject discovery and loading from a data directory.

use std::path::{Path, PathBuf};

use super::{notch_recording, parse_edf, parse_hypnogram, segment_epochs, trim_wake, DatasetError, Epoch, DEFAULT_NOTCH_Q};

pub const PSG_SUFFIX: &str = "-PSG.edf";
pub const HYPNOGRAM_SUFFIX: &str = "-Hypnogram.edf";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubjectFiles {
    pub id: String,
    pub psg: PathBuf,
    pub hypnogram: PathBuf,
}

/// Pair `<id>-PSG.edf` with `<id>-Hypnogram.edf` in `dir`, sorted by id.
/// PSG files without a hypnogram are skipped with a warning.
pub fn discover_subjects(dir: &Path) -> Result<Vec<SubjectFiles>, DatasetError> {
    let io = |source| DatasetError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
        let Some(id) = name.strip_suffix(PSG_SUFFIX) else { continue };
        let hypnogram = dir.join(format!("{id}{HYPNOGRAM_SUFFIX}"));
        if hypnogram.is_file() {
            out.push(SubjectFiles {
                id: id.to_string(),
                psg: path.clone(),
                hypnogram,
            });
        } else {
            log::warn!("{}: no matching hypnogram; skipped", path.display());
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSubject {
    pub id: String,
    pub age: Option<u32>,
    /// Epoched and wake-trimmed.
    pub epochs: Vec<Epoch>,
    /// Channels the notch filter could not be applied to.
    pub notch_skipped: Vec<String>,
}

/// Parse, optionally notch at `notch_hz`, epoch and trim one subject. The
/// subject id is taken from the file name.
pub fn load_subject(files: &SubjectFiles, notch_hz: Option<f64>) -> Result<LoadedSubject, DatasetError> {
    let read = |p: &Path| std::fs::read(p).map_err(|source| DatasetError::Io { path: p.to_path_buf(), source });
    let mut rec = parse_edf(&read(&files.psg)?).map_err(|e| in_file(&files.psg, e.into()))?;
    rec.subject_id = files.id.clone();
    let anns = parse_hypnogram(&read(&files.hypnogram)?).map_err(|e| in_file(&files.hypnogram, e.into()))?;
    let notch_skipped = match notch_hz {
        Some(f0) => notch_recording(&mut rec, f0, DEFAULT_NOTCH_Q),
        None => Vec::new(),
    };
    let epochs = segment_epochs(&rec, &anns)
        .and_then(trim_wake)
        .map_err(|e| in_file(&files.psg, e))?;
    Ok(LoadedSubject {
        id: files.id.clone(),
        age: rec.age,
        epochs,
        notch_skipped,
    })
}

fn in_file(path: &Path, e: DatasetError) -> DatasetError {
    DatasetError::File {
        path: path.to_path_buf(),
        source: Box::new(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{gen_subject_with, SynthProfile};

    #[test]
    fn discover_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let sub = gen_subject_with(4, &SynthProfile::default(), 30, "AB01", Some(30)).unwrap();
        sub.write(dir.path()).unwrap();
        std::fs::write(dir.path().join("ZZ-PSG.edf"), b"").unwrap();
        let found = discover_subjects(dir.path()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].id, "AB01");
        let loaded = load_subject(&found[0], Some(50.0)).unwrap();
        assert_eq!(loaded.age, Some(30));
        assert!(!loaded.epochs.is_empty());
        // 100 Hz channels cannot take a 50 Hz notch
        assert_eq!(loaded.notch_skipped.len(), 3);
    }

    #[test]
    fn errors_name_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let sub = gen_subject_with(4, &SynthProfile::default(), 30, "AB01", None).unwrap();
        let (psg, _) = sub.write(dir.path()).unwrap();
        std::fs::write(&psg, b"garbage").unwrap();
        let err = load_subject(&discover_subjects(dir.path()).unwrap()[0], None).unwrap_err();
        assert!(err.to_string().contains("AB01-PSG.edf"), "{err}");
    }
}
