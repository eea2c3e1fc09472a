//! Download client for the public recordings.
//!
//! Files land as `<dest>/<id>-PSG.edf` and `<dest>/<id>-Hypnogram.edf`, with
//! a `manifest.json` listing every file and its SHA-256. A file already on
//! disk is kept when its hash matches either the expected checksum supplied
//! by the caller or the entry in the previous manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("GET {url} failed after {attempts} attempt(s): {message}")]
    Http { url: String, attempts: u32, message: String },
    #[error("checksum mismatch for {file}: expected {expected}, got {actual}")]
    Checksum { file: String, expected: String, actual: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad subject spec {0:?}; expected ID or ID=HYPNOGRAM_STEM")]
    BadSubject(String),
    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportError {
    /// HTTP status, if a response arrived.
    pub status: Option<u16>,
    pub message: String,
}

impl TransportError {
    fn retryable(&self) -> bool {
        match self.status {
            None => true,
            Some(s) => s >= 500 || s == 408 || s == 429,
        }
    }
}

/// Minimal GET interface so tests can substitute an in-memory server.
pub trait Transport: Sync {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError>;
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Result<Self, FetchError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| FetchError::Http {
                url: String::new(),
                attempts: 0,
                message: e.to_string(),
            })?;
        Ok(Self { client })
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
        let fail = |status: Option<u16>, e: &dyn std::fmt::Display| TransportError {
            status,
            message: e.to_string(),
        };
        let resp = self.client.get(url).send().map_err(|e| fail(e.status().map(|s| s.as_u16()), &e))?;
        let status = resp.status();
        if !status.is_success() {
            return Err(fail(Some(status.as_u16()), &status));
        }
        resp.bytes().map(|b| b.to_vec()).map_err(|e| fail(None, &e))
    }
}

#[derive(Debug, Clone)]
pub struct FetchOptions {
    /// Retries after the first attempt.
    pub retries: u32,
    /// Delay before the first retry; doubles each time.
    pub backoff: Duration,
    pub max_backoff: Duration,
    pub max_parallel: usize,
    pub timeout: Duration,
    /// Expected SHA-256 (hex) keyed by local file name.
    pub expected: BTreeMap<String, String>,
}

impl Default for FetchOptions {
    fn default() -> Self {
        Self {
            retries: 3,
            backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(8),
            max_parallel: 4,
            timeout: Duration::from_secs(300),
            expected: BTreeMap::new(),
        }
    }
}

/// A subject to fetch. Sleep-EDF names the hypnogram with a different stem
/// than the PSG (`SC4001E0-PSG.edf` vs `SC4001EC-Hypnogram.edf`), so the
/// hypnogram stem can be given explicitly as `ID=STEM`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectSpec {
    pub id: String,
    pub hypnogram_stem: String,
}

impl SubjectSpec {
    pub fn parse(spec: &str) -> Result<Self, FetchError> {
        let bad = || FetchError::BadSubject(spec.to_string());
        let ok = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-');
        let (id, stem) = spec.split_once('=').unwrap_or((spec, spec));
        if !ok(id) || !ok(stem) {
            return Err(bad());
        }
        Ok(Self {
            id: id.into(),
            hypnogram_stem: stem.into(),
        })
    }

    pub fn psg_name(&self) -> String {
        format!("{}-PSG.edf", self.id)
    }

    pub fn hypnogram_name(&self) -> String {
        format!("{}-Hypnogram.edf", self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path relative to the destination directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn load(dest: &Path) -> Option<Manifest> {
        let text = fs::read_to_string(dest.join(MANIFEST_NAME)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn lookup(&self, path: &str) -> Option<&ManifestEntry> {
        self.files.iter().find(|e| e.path == path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Fetch subjects over HTTP(S).
pub fn fetch_dataset(subjects: &[String], base_url: &str, dest: &Path, opts: &FetchOptions) -> Result<Manifest, FetchError> {
    let specs = subjects.iter().map(|s| SubjectSpec::parse(s)).collect::<Result<Vec<_>, _>>()?;
    if specs.is_empty() {
        return fetch_with(&NoTransport, &specs, base_url, dest, opts);
    }
    let transport = HttpTransport::new(opts.timeout)?;
    fetch_with(&transport, &specs, base_url, dest, opts)
}

struct NoTransport;

impl Transport for NoTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
        Err(TransportError {
            status: None,
            message: format!("no transport for {url}"),
        })
    }
}

struct Job {
    local: String,
    url: String,
}

/// Fetch through an arbitrary transport. Returns the manifest written to
/// `dest`.
pub fn fetch_with(
    transport: &dyn Transport,
    subjects: &[SubjectSpec],
    base_url: &str,
    dest: &Path,
    opts: &FetchOptions,
) -> Result<Manifest, FetchError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| FetchError::Io { path, source }
    };
    fs::create_dir_all(dest).map_err(io(dest))?;
    let previous = Manifest::load(dest).unwrap_or_default();
    let base = base_url.trim_end_matches('/');
    let jobs: Vec<Job> = subjects
        .iter()
        .flat_map(|s| {
            [
                Job {
                    local: s.psg_name(),
                    url: format!("{base}/{}-PSG.edf", s.id),
                },
                Job {
                    local: s.hypnogram_name(),
                    url: format!("{base}/{}-Hypnogram.edf", s.hypnogram_stem),
                },
            ]
        })
        .collect();

    let run = |job: &Job| -> Result<ManifestEntry, FetchError> {
        let path = dest.join(&job.local);
        let expected = opts.expected.get(&job.local);
        if let Ok(existing) = fs::read(&path) {
            let hash = sha256_hex(&existing);
            let reference = expected.or_else(|| previous.lookup(&job.local).map(|e| &e.sha256));
            if reference == Some(&hash) {
                log::debug!("{} up to date", job.local);
                return Ok(ManifestEntry {
                    path: job.local.clone(),
                    sha256: hash,
                    bytes: existing.len() as u64,
                });
            }
        }
        let body = get_with_retry(transport, &job.url, opts)?;
        let hash = sha256_hex(&body);
        if let Some(exp) = expected {
            if !exp.eq_ignore_ascii_case(&hash) {
                return Err(FetchError::Checksum {
                    file: job.local.clone(),
                    expected: exp.clone(),
                    actual: hash,
                });
            }
        }
        let tmp = dest.join(format!(".{}.partial", job.local));
        let mut f = fs::File::create(&tmp).map_err(io(&tmp))?;
        f.write_all(&body).map_err(io(&tmp))?;
        f.sync_all().map_err(io(&tmp))?;
        fs::rename(&tmp, &path).map_err(io(&path))?;
        log::info!("downloaded {} ({} bytes)", job.local, body.len());
        Ok(ManifestEntry {
            path: job.local.clone(),
            sha256: hash,
            bytes: body.len() as u64,
        })
    };

    let results: Vec<Result<ManifestEntry, FetchError>> = if jobs.len() > 1 && opts.max_parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.max_parallel)
            .build()
            .map_err(|e| FetchError::Http {
                url: base.into(),
                attempts: 0,
                message: e.to_string(),
            })?;
        pool.install(|| jobs.par_iter().map(run).collect())
    } else {
        jobs.iter().map(run).collect()
    };
    let mut files = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest { files };
    let path = dest.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&path, text).map_err(io(&path))?;
    Ok(manifest)
}

fn get_with_retry(transport: &dyn Transport, url: &str, opts: &FetchOptions) -> Result<Vec<u8>, FetchError> {
    let mut delay = opts.backoff;
    let mut attempts = 0;
    loop {
        attempts += 1;
        match transport.get(url) {
            Ok(body) => return Ok(body),
            Err(e) if e.retryable() && attempts <= opts.retries => {
                log::warn!("GET {url} failed ({}), retrying in {delay:?}", e.message);
                std::thread::sleep(delay);
                delay = (delay * 2).min(opts.max_backoff);
            }
            Err(e) => {
                return Err(FetchError::Http {
                    url: url.into(),
                    attempts,
                    message: e.message,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;

    #[derive(Default)]
    struct Mock {
        files: HashMap<String, Vec<u8>>,
        calls: AtomicUsize,
        failures_left: Mutex<usize>,
    }

    impl Transport for Mock {
        fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            let mut left = self.failures_left.lock().unwrap();
            if *left > 0 {
                *left -= 1;
                return Err(TransportError {
                    status: Some(503),
                    message: "busy".into(),
                });
            }
            self.files.get(url).cloned().ok_or(TransportError {
                status: Some(404),
                message: "not found".into(),
            })
        }
    }

    fn fast() -> FetchOptions {
        FetchOptions {
            backoff: Duration::from_millis(1),
            max_backoff: Duration::from_millis(2),
            retries: 2,
            ..FetchOptions::default()
        }
    }

    fn mock() -> Mock {
        let mut files = HashMap::new();
        files.insert("http://h/SC4001E0-PSG.edf".into(), b"psg".to_vec());
        files.insert("http://h/SC4001EC-Hypnogram.edf".into(), b"hyp".to_vec());
        Mock {
            files,
            ..Mock::default()
        }
    }

    fn subject() -> Vec<SubjectSpec> {
        vec![SubjectSpec::parse("SC4001E0=SC4001EC").unwrap()]
    }

    #[test]
    fn empty_list_makes_no_calls() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        let manifest = fetch_with(&m, &[], "http://h", dir.path(), &fast()).unwrap();
        assert!(manifest.files.is_empty());
        assert_eq!(m.calls.load(Ordering::SeqCst), 0);
        assert!(dir.path().join(MANIFEST_NAME).exists());
    }

    #[test]
    fn second_call_downloads_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        let first = fetch_with(&m, &subject(), "http://h/", dir.path(), &fast()).unwrap();
        assert_eq!(m.calls.load(Ordering::SeqCst), 2);
        assert_eq!(first.files[0].path, "SC4001E0-Hypnogram.edf");
        assert_eq!(fs::read(dir.path().join("SC4001E0-PSG.edf")).unwrap(), b"psg");
        let bytes_before = fs::read(dir.path().join(MANIFEST_NAME)).unwrap();
        let second = fetch_with(&m, &subject(), "http://h", dir.path(), &fast()).unwrap();
        assert_eq!(m.calls.load(Ordering::SeqCst), 2);
        assert_eq!(first, second);
        assert_eq!(fs::read(dir.path().join(MANIFEST_NAME)).unwrap(), bytes_before);
    }

    #[test]
    fn corrupted_file_is_refetched() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        fetch_with(&m, &subject(), "http://h", dir.path(), &fast()).unwrap();
        fs::write(dir.path().join("SC4001E0-PSG.edf"), b"junk").unwrap();
        fetch_with(&m, &subject(), "http://h", dir.path(), &fast()).unwrap();
        assert_eq!(m.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn retries_then_succeeds() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        *m.failures_left.lock().unwrap() = 2;
        let opts = FetchOptions {
            max_parallel: 1,
            ..fast()
        };
        fetch_with(&m, &subject(), "http://h", dir.path(), &opts).unwrap();
        assert_eq!(m.calls.load(Ordering::SeqCst), 4);
    }

    #[test]
    fn retry_budget_exhausted() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        *m.failures_left.lock().unwrap() = 100;
        let opts = FetchOptions {
            max_parallel: 1,
            ..fast()
        };
        match fetch_with(&m, &subject(), "http://h", dir.path(), &opts) {
            Err(FetchError::Http { attempts: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_found_is_not_retried() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        let specs = vec![SubjectSpec::parse("SC9999E0").unwrap()];
        let opts = FetchOptions {
            max_parallel: 1,
            ..fast()
        };
        match fetch_with(&m, &specs, "http://h", dir.path(), &opts) {
            Err(FetchError::Http { attempts: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn checksum_mismatch_names_file() {
        let dir = tempfile::tempdir().unwrap();
        let m = mock();
        let mut opts = fast();
        opts.expected.insert("SC4001E0-PSG.edf".into(), sha256_hex(b"other"));
        let err = fetch_with(&m, &subject(), "http://h", dir.path(), &opts).unwrap_err();
        assert!(err.to_string().contains("SC4001E0-PSG.edf"), "{err}");
    }

    #[test]
    fn unreachable_host() {
        let dir = tempfile::tempdir().unwrap();
        // bind then drop to obtain a port with nothing listening
        let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let opts = FetchOptions {
            max_parallel: 1,
            retries: 1,
            timeout: Duration::from_secs(2),
            ..fast()
        };
        let err = fetch_dataset(&["S1".into()], &format!("http://127.0.0.1:{port}"), dir.path(), &opts).unwrap_err();
        assert!(matches!(err, FetchError::Http { attempts: 2, .. }), "{err}");
    }

    #[test]
    fn real_http_round_trip() {
        use std::io::{Read, Write};
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let port = listener.local_addr().unwrap().port();
        let server = std::thread::spawn(move || {
            for stream in listener.incoming().take(2) {
                let mut stream = stream.unwrap();
                let mut buf = [0u8; 4096];
                let n = stream.read(&mut buf).unwrap();
                let req = String::from_utf8_lossy(&buf[..n]);
                let body: &[u8] = if req.contains("PSG") { b"psg-bytes" } else { b"hyp-bytes" };
                write!(stream, "HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n", body.len()).unwrap();
                stream.write_all(body).unwrap();
            }
        });
        let dir = tempfile::tempdir().unwrap();
        let opts = FetchOptions {
            max_parallel: 1,
            ..fast()
        };
        let manifest = fetch_dataset(&["S1".into()], &format!("http://127.0.0.1:{port}"), dir.path(), &opts).unwrap();
        server.join().unwrap();
        assert_eq!(manifest.files.len(), 2);
        assert_eq!(fs::read(dir.path().join("S1-PSG.edf")).unwrap(), b"psg-bytes");
        assert_eq!(manifest.files[1].sha256, sha256_hex(b"psg-bytes"));
    }

    #[test]
    fn subject_specs() {
        assert_eq!(SubjectSpec::parse("A").unwrap().hypnogram_stem, "A");
        assert!(SubjectSpec::parse("").is_err());
        assert!(SubjectSpec::parse("../x").is_err());
        assert!(SubjectSpec::parse("A=").is_err());
    }
}
