//! EDF / EDF+ container codec.
//!
//! Layout: a 256-byte fixed ASCII header, 256 more bytes per signal (stored
//! field-major: all labels, then all transducers, …), then data records of
//! 16-bit little-endian two's-complement samples, signal after signal.

use chrono::NaiveDate;
use thiserror::Error;

use super::{Channel, Recording};

pub const ANNOTATION_LABEL: &str = "EDF Annotations";

const FIXED_HEADER: usize = 256;
const PER_SIGNAL_HEADER: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EdfError {
    #[error("truncated {what} at byte {offset}: expected {expected} bytes, {available} available")]
    Truncated {
        what: &'static str,
        offset: usize,
        expected: usize,
        available: usize,
    },
    #[error("invalid header field `{field}` at byte {offset}: {value:?}")]
    Field {
        field: &'static str,
        offset: usize,
        value: String,
    },
    #[error("channel {channel:?} has digital max equal to digital min ({digital})")]
    Scaling { channel: String, digital: i32 },
    #[error("malformed annotation list in record {record}: {message}")]
    Tal { record: usize, message: String },
    #[error("file has no `EDF Annotations` signal")]
    NoAnnotationSignal,
    #[error("cannot encode: {0}")]
    Encode(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalHeader {
    pub label: String,
    pub transducer: String,
    pub physical_dimension: String,
    pub physical_min: f64,
    pub physical_max: f64,
    pub digital_min: i32,
    pub digital_max: i32,
    pub prefilter: String,
    pub samples_per_record: usize,
    pub reserved: String,
}

impl SignalHeader {
    pub fn is_annotation(&self) -> bool {
        self.label == ANNOTATION_LABEL
    }

    pub fn to_physical(&self, digital: i16) -> Result<f64, EdfError> {
        self.digital_to_physical(&[digital]).map(|v| v[0])
    }

    pub fn digital_to_physical(&self, digital: &[i16]) -> Result<Vec<f64>, EdfError> {
        if self.digital_max == self.digital_min {
            return Err(EdfError::Scaling {
                channel: self.label.clone(),
                digital: self.digital_max,
            });
        }
        let span = self.physical_max - self.physical_min;
        let dspan = f64::from(self.digital_max - self.digital_min);
        let dmin = f64::from(self.digital_min);
        Ok(digital
            .iter()
            .map(|&d| self.physical_min + (f64::from(d) - dmin) * span / dspan)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdfHeader {
    pub version: String,
    pub patient: String,
    pub recording: String,
    /// `dd.mm.yy`
    pub start_date: String,
    /// `hh.mm.ss`
    pub start_time: String,
    /// `EDF+C` / `EDF+D` for EDF+, blank for plain EDF.
    pub reserved: String,
    pub n_records: usize,
    pub record_duration: f64,
    pub signals: Vec<SignalHeader>,
}

impl EdfHeader {
    pub fn header_len(&self) -> usize {
        FIXED_HEADER + PER_SIGNAL_HEADER * self.signals.len()
    }

    fn record_len(&self) -> Option<usize> {
        self.signals
            .iter()
            .try_fold(0usize, |acc, s| acc.checked_add(s.samples_per_record.checked_mul(2)?))
    }

    /// Seconds since 1970-01-01 of the recording start; two-digit years
    /// 85–99 are 19xx, 00–84 are 20xx.
    pub fn start_seconds(&self) -> Result<f64, EdfError> {
        let bad_date = || EdfError::Field {
            field: "start date",
            offset: 168,
            value: self.start_date.clone(),
        };
        let bad_time = || EdfError::Field {
            field: "start time",
            offset: 176,
            value: self.start_time.clone(),
        };
        let parts = |s: &str| -> Option<[u32; 3]> {
            let mut it = s.split('.').map(|p| p.trim().parse::<u32>().ok());
            let v = [it.next()??, it.next()??, it.next()??];
            it.next().is_none().then_some(v)
        };
        let [dd, mm, yy] = parts(&self.start_date).ok_or_else(bad_date)?;
        let [h, m, s] = parts(&self.start_time).ok_or_else(bad_time)?;
        if yy > 99 || h > 23 || m > 59 || s > 59 {
            return Err(if yy > 99 { bad_date() } else { bad_time() });
        }
        let year = if yy >= 85 { 1900 + yy } else { 2000 + yy } as i32;
        let date = NaiveDate::from_ymd_opt(year, mm, dd).ok_or_else(bad_date)?;
        let days = date.signed_duration_since(NaiveDate::from_ymd_opt(1970, 1, 1).unwrap()).num_days();
        Ok(days as f64 * 86_400.0 + f64::from(h * 3600 + m * 60 + s))
    }
}

/// A decoded file with its digital samples, one vector per signal.
#[derive(Debug, Clone, PartialEq)]
pub struct EdfFile {
    pub header: EdfHeader,
    pub samples: Vec<Vec<i16>>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> &'a [u8] {
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        s
    }

    fn text(&mut self, n: usize) -> String {
        let raw = self.take(n);
        String::from_utf8_lossy(raw).trim().to_string()
    }

    fn number<T: std::str::FromStr>(&mut self, n: usize, field: &'static str) -> Result<T, EdfError> {
        let offset = self.pos;
        let s = self.text(n);
        s.parse().map_err(|_| EdfError::Field { field, offset, value: s })
    }
}

impl EdfFile {
    pub fn parse(bytes: &[u8]) -> Result<EdfFile, EdfError> {
        if bytes.len() < FIXED_HEADER {
            return Err(EdfError::Truncated {
                what: "fixed header",
                offset: 0,
                expected: FIXED_HEADER,
                available: bytes.len(),
            });
        }
        let mut c = Cursor { bytes, pos: 0 };
        let version = c.text(8);
        let patient = c.text(80);
        let recording = c.text(80);
        let start_date = c.text(8);
        let start_time = c.text(8);
        let _header_bytes: String = c.text(8);
        let reserved = c.text(44);
        let n_records_off = c.pos;
        let n_records: i64 = c.number(8, "number of records")?;
        let record_duration: f64 = c.number(8, "record duration")?;
        let ns_off = c.pos;
        let ns: usize = c.number(4, "number of signals")?;
        if !record_duration.is_finite() || record_duration < 0.0 {
            return Err(EdfError::Field {
                field: "record duration",
                offset: 244,
                value: record_duration.to_string(),
            });
        }
        let header_len = ns
            .checked_mul(PER_SIGNAL_HEADER)
            .and_then(|v| v.checked_add(FIXED_HEADER))
            .ok_or_else(|| EdfError::Field {
                field: "number of signals",
                offset: ns_off,
                value: ns.to_string(),
            })?;
        if bytes.len() < header_len {
            return Err(EdfError::Truncated {
                what: "signal headers",
                offset: FIXED_HEADER,
                expected: header_len,
                available: bytes.len(),
            });
        }

        let texts = |c: &mut Cursor, n| (0..ns).map(|_| c.text(n)).collect::<Vec<_>>();
        fn numbers<T: std::str::FromStr>(
            c: &mut Cursor,
            ns: usize,
            n: usize,
            field: &'static str,
        ) -> Result<Vec<T>, EdfError> {
            (0..ns).map(|_| c.number(n, field)).collect()
        }
        let labels = texts(&mut c, 16);
        let transducers = texts(&mut c, 80);
        let dims = texts(&mut c, 8);
        let pmins: Vec<f64> = numbers(&mut c, ns, 8, "physical minimum")?;
        let pmaxs: Vec<f64> = numbers(&mut c, ns, 8, "physical maximum")?;
        let dmins: Vec<i32> = numbers(&mut c, ns, 8, "digital minimum")?;
        let dmaxs: Vec<i32> = numbers(&mut c, ns, 8, "digital maximum")?;
        let prefilters = texts(&mut c, 80);
        let sprs: Vec<usize> = numbers(&mut c, ns, 8, "samples per record")?;
        let reserveds = texts(&mut c, 32);

        let signals: Vec<SignalHeader> = (0..ns)
            .map(|i| SignalHeader {
                label: labels[i].clone(),
                transducer: transducers[i].clone(),
                physical_dimension: dims[i].clone(),
                physical_min: pmins[i],
                physical_max: pmaxs[i],
                digital_min: dmins[i],
                digital_max: dmaxs[i],
                prefilter: prefilters[i].clone(),
                samples_per_record: sprs[i],
                reserved: reserveds[i].clone(),
            })
            .collect();

        let mut header = EdfHeader {
            version,
            patient,
            recording,
            start_date,
            start_time,
            reserved,
            n_records: 0,
            record_duration,
            signals,
        };
        let record_len = header.record_len().ok_or_else(|| EdfError::Field {
            field: "samples per record",
            offset: FIXED_HEADER + ns * 216,
            value: "overflow".into(),
        })?;
        let available = bytes.len() - header_len;
        let n_records = if n_records < 0 {
            // unknown count: infer from the payload size
            if record_len == 0 {
                0
            } else {
                if available % record_len != 0 {
                    let full = available / record_len;
                    return Err(EdfError::Truncated {
                        what: "data record",
                        offset: header_len + full * record_len,
                        expected: (full + 1) * record_len,
                        available,
                    });
                }
                available / record_len
            }
        } else {
            usize::try_from(n_records).map_err(|_| EdfError::Field {
                field: "number of records",
                offset: n_records_off,
                value: n_records.to_string(),
            })?
        };
        let expected = n_records.checked_mul(record_len).ok_or_else(|| EdfError::Field {
            field: "number of records",
            offset: n_records_off,
            value: n_records.to_string(),
        })?;
        if available < expected {
            let full = available / record_len.max(1);
            return Err(EdfError::Truncated {
                what: "data record",
                offset: header_len + full * record_len,
                expected,
                available,
            });
        }
        header.n_records = n_records;

        let mut samples: Vec<Vec<i16>> = header
            .signals
            .iter()
            .map(|s| Vec::with_capacity(s.samples_per_record * n_records))
            .collect();
        let data = &bytes[header_len..header_len + expected];
        let mut pos = 0;
        for _ in 0..n_records {
            for (sig, out) in header.signals.iter().zip(samples.iter_mut()) {
                let chunk = &data[pos..pos + 2 * sig.samples_per_record];
                out.extend(chunk.chunks_exact(2).map(|b| i16::from_le_bytes([b[0], b[1]])));
                pos += chunk.len();
            }
        }
        Ok(EdfFile { header, samples })
    }

    /// Encode back to the on-disk layout.
    pub fn to_bytes(&self) -> Result<Vec<u8>, EdfError> {
        let h = &self.header;
        if self.samples.len() != h.signals.len() {
            return Err(EdfError::Encode(format!(
                "{} sample vectors for {} signals",
                self.samples.len(),
                h.signals.len()
            )));
        }
        for (s, v) in h.signals.iter().zip(&self.samples) {
            if v.len() != s.samples_per_record * h.n_records {
                return Err(EdfError::Encode(format!(
                    "signal {:?}: {} samples, expected {}",
                    s.label,
                    v.len(),
                    s.samples_per_record * h.n_records
                )));
            }
        }
        let record_len = h.record_len().ok_or_else(|| EdfError::Encode("record too large".into()))?;
        let mut out = Vec::with_capacity(h.header_len() + record_len * h.n_records);
        put(&mut out, &h.version, 8)?;
        put(&mut out, &h.patient, 80)?;
        put(&mut out, &h.recording, 80)?;
        put(&mut out, &h.start_date, 8)?;
        put(&mut out, &h.start_time, 8)?;
        put(&mut out, &h.header_len().to_string(), 8)?;
        put(&mut out, &h.reserved, 44)?;
        put(&mut out, &h.n_records.to_string(), 8)?;
        put(&mut out, &fmt_real(h.record_duration, 8)?, 8)?;
        put(&mut out, &h.signals.len().to_string(), 4)?;
        let each = |out: &mut Vec<u8>, width, f: &dyn Fn(&SignalHeader) -> Result<String, EdfError>| {
            h.signals.iter().try_for_each(|s| put(out, &f(s)?, width))
        };
        each(&mut out, 16, &|s| Ok(s.label.clone()))?;
        each(&mut out, 80, &|s| Ok(s.transducer.clone()))?;
        each(&mut out, 8, &|s| Ok(s.physical_dimension.clone()))?;
        each(&mut out, 8, &|s| fmt_real(s.physical_min, 8))?;
        each(&mut out, 8, &|s| fmt_real(s.physical_max, 8))?;
        each(&mut out, 8, &|s| Ok(s.digital_min.to_string()))?;
        each(&mut out, 8, &|s| Ok(s.digital_max.to_string()))?;
        each(&mut out, 80, &|s| Ok(s.prefilter.clone()))?;
        each(&mut out, 8, &|s| Ok(s.samples_per_record.to_string()))?;
        each(&mut out, 32, &|s| Ok(s.reserved.clone()))?;
        for r in 0..h.n_records {
            for (s, v) in h.signals.iter().zip(&self.samples) {
                let spr = s.samples_per_record;
                for d in &v[r * spr..(r + 1) * spr] {
                    out.extend_from_slice(&d.to_le_bytes());
                }
            }
        }
        Ok(out)
    }

    pub fn to_recording(&self) -> Result<Recording, EdfError> {
        let h = &self.header;
        let mut channels = Vec::new();
        for (s, v) in h.signals.iter().zip(&self.samples) {
            if s.is_annotation() {
                continue;
            }
            let sampling_rate = if h.record_duration > 0.0 {
                s.samples_per_record as f64 / h.record_duration
            } else {
                0.0
            };
            channels.push(Channel {
                name: s.label.clone(),
                sampling_rate,
                samples: s.digital_to_physical(v)?,
            });
        }
        Ok(Recording {
            subject_id: subject_from_patient(&h.patient),
            age: age_from_patient(&h.patient),
            channels,
            start_time: h.start_seconds().unwrap_or(0.0),
        })
    }

    /// Raw bytes of the annotation signal, one slice per data record.
    pub fn annotation_records(&self) -> Result<Vec<Vec<u8>>, EdfError> {
        let idx = self
            .header
            .signals
            .iter()
            .position(SignalHeader::is_annotation)
            .ok_or(EdfError::NoAnnotationSignal)?;
        let spr = self.header.signals[idx].samples_per_record;
        Ok(self.samples[idx]
            .chunks(spr.max(1))
            .map(|chunk| chunk.iter().flat_map(|d| d.to_le_bytes()).collect())
            .collect())
    }
}

/// Decode a recording, mapping digital samples to physical units.
pub fn parse_edf(bytes: &[u8]) -> Result<Recording, EdfError> {
    EdfFile::parse(bytes)?.to_recording()
}

/// First token of the patient field, unless it is the anonymized `X`.
fn subject_from_patient(patient: &str) -> String {
    patient
        .split_whitespace()
        .next()
        .filter(|t| *t != "X")
        .unwrap_or("")
        .to_string()
}

/// Age from a `<name>_<N>yr` token, the convention used by Sleep-EDF exports.
pub fn age_from_patient(patient: &str) -> Option<u32> {
    patient.split_whitespace().find_map(|tok| {
        let stem = tok.strip_suffix("yr")?;
        let digits = stem.rsplit('_').next()?;
        digits.parse().ok()
    })
}

fn put(out: &mut Vec<u8>, s: &str, width: usize) -> Result<(), EdfError> {
    if !s.is_ascii() || s.len() > width {
        return Err(EdfError::Encode(format!("field {s:?} does not fit {width} ASCII bytes")));
    }
    out.extend_from_slice(s.as_bytes());
    out.extend(std::iter::repeat(b' ').take(width - s.len()));
    Ok(())
}

/// Shortest decimal rendering of `v` that fits `width` characters.
fn fmt_real(v: f64, width: usize) -> Result<String, EdfError> {
    if !v.is_finite() {
        return Err(EdfError::Encode(format!("non-finite header value {v}")));
    }
    let plain = format!("{v}");
    if plain.len() <= width {
        return Ok(plain);
    }
    for prec in (0..width).rev() {
        let s = format!("{v:.prec$}");
        if s.len() <= width {
            return Ok(s);
        }
    }
    Err(EdfError::Encode(format!("{v} does not fit {width} characters")))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn signal(label: &str, spr: usize, dmin: i32, dmax: i32, pmin: f64, pmax: f64) -> SignalHeader {
        SignalHeader {
            label: label.into(),
            transducer: String::new(),
            physical_dimension: "uV".into(),
            physical_min: pmin,
            physical_max: pmax,
            digital_min: dmin,
            digital_max: dmax,
            prefilter: String::new(),
            samples_per_record: spr,
            reserved: String::new(),
        }
    }

    fn header(signals: Vec<SignalHeader>, n_records: usize) -> EdfHeader {
        EdfHeader {
            version: "0".into(),
            patient: "S01 X X S01_30yr".into(),
            recording: "Startdate X".into(),
            start_date: "01.01.89".into(),
            start_time: "22.30.00".into(),
            reserved: String::new(),
            n_records,
            record_duration: 1.0,
            signals,
        }
    }

    #[test]
    fn identity_scaling() {
        let file = EdfFile {
            header: header(vec![signal("X", 2, -1, 1, -1.0, 1.0)], 1),
            samples: vec![vec![0, 1]],
        };
        let bytes = file.to_bytes().unwrap();
        let rec = parse_edf(&bytes).unwrap();
        assert_eq!(rec.channels[0].samples, vec![0.0, 1.0]);
        assert_eq!(rec.channels[0].name, "X");
        assert_eq!(rec.channels[0].sampling_rate, 2.0);
    }

    #[test]
    fn linear_scaling_by_hand() {
        let s = signal("EEG", 1, -2048, 2047, -100.0, 100.0);
        let v = s.to_physical(0).unwrap();
        // -100 + 2048 * 200 / 4095
        assert!((v - 0.024_420_024_420_024_42).abs() < 1e-12, "{v}");
    }

    #[test]
    fn degenerate_scaling_names_channel() {
        let file = EdfFile {
            header: header(vec![signal("EMG flat", 1, 5, 5, 0.0, 1.0)], 1),
            samples: vec![vec![5]],
        };
        let err = parse_edf(&file.to_bytes().unwrap()).unwrap_err();
        assert!(matches!(err, EdfError::Scaling { ref channel, .. } if channel == "EMG flat"), "{err}");
    }

    #[test]
    fn cut_mid_record() {
        let file = EdfFile {
            header: header(vec![signal("A", 4, -10, 10, -1.0, 1.0)], 3),
            samples: vec![vec![1; 12]],
        };
        let bytes = file.to_bytes().unwrap();
        let cut = &bytes[..bytes.len() - 3];
        match EdfFile::parse(cut).unwrap_err() {
            EdfError::Truncated {
                expected, available, offset, ..
            } => {
                assert_eq!(expected, 24);
                assert_eq!(available, 21);
                assert_eq!(offset, 512 + 16);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn short_header() {
        assert!(matches!(
            EdfFile::parse(&[b' '; 100]),
            Err(EdfError::Truncated { expected: 256, available: 100, .. })
        ));
    }

    #[test]
    fn header_fields_survive() {
        let file = EdfFile {
            header: header(
                vec![signal("EEG Fpz-Cz", 3, -32768, 32767, -192.5, 192.5), signal("EMG submental", 1, -2048, 2047, -5.0, 5.0)],
                2,
            ),
            samples: vec![vec![1, -2, 3, 4, 5, -32768], vec![7, 2047]],
        };
        let back = EdfFile::parse(&file.to_bytes().unwrap()).unwrap();
        assert_eq!(back, file);
        let rec = back.to_recording().unwrap();
        assert_eq!(rec.subject_id, "S01");
        assert_eq!(rec.age, Some(30));
        assert_eq!(rec.start_time, 599_697_000.0);
    }

    #[test]
    fn unknown_record_count_is_inferred() {
        let file = EdfFile {
            header: header(vec![signal("A", 2, -10, 10, -1.0, 1.0)], 2),
            samples: vec![vec![1, 2, 3, 4]],
        };
        let mut bytes = file.to_bytes().unwrap();
        bytes[236..244].copy_from_slice(b"-1      ");
        let back = EdfFile::parse(&bytes).unwrap();
        assert_eq!(back.header.n_records, 2);
        assert_eq!(back.samples, file.samples);
    }

    #[test]
    fn non_numeric_field_reports_offset() {
        let file = EdfFile {
            header: header(vec![signal("A", 2, -10, 10, -1.0, 1.0)], 1),
            samples: vec![vec![1, 2]],
        };
        let mut bytes = file.to_bytes().unwrap();
        bytes[252..256].copy_from_slice(b"abc ");
        assert!(matches!(
            EdfFile::parse(&bytes),
            Err(EdfError::Field { offset: 252, .. })
        ));
    }

    #[test]
    fn fmt_real_fits() {
        assert_eq!(fmt_real(-192.5, 8).unwrap(), "-192.5");
        assert_eq!(fmt_real(1.0 / 3.0, 8).unwrap(), "0.333333");
        assert!(fmt_real(1e300, 8).is_err());
    }

    #[test]
    fn age_token() {
        assert_eq!(age_from_patient("X F X Female_33yr"), Some(33));
        assert_eq!(age_from_patient("X M X"), None);
    }
}
