//! EDF+ time-stamped annotation lists (TALs).
//!
//! Each TAL is `±onset[\x15duration]\x14[text\x14]*\x00`. A data record's
//! annotation bytes hold one or more TALs followed by zero padding; the
//! first TAL of every record is a time-keeping entry with empty text.

use super::edf::{EdfError, EdfFile};
use super::Annotation;

const DURATION_SEP: u8 = 0x15;
const TEXT_SEP: u8 = 0x14;
const END: u8 = 0x00;

/// Decode the TALs of one data record. Empty annotation texts (time-keeping
/// entries) are skipped.
pub fn parse_tal_record(bytes: &[u8], record: usize) -> Result<Vec<Annotation>, EdfError> {
    let err = |message: String| EdfError::Tal { record, message };
    let mut out = Vec::new();
    let mut rest = bytes;
    loop {
        // skip padding between/after TALs
        let start = match rest.iter().position(|&b| b != END) {
            Some(p) => p,
            None => break,
        };
        rest = &rest[start..];
        let end = rest
            .iter()
            .position(|&b| b == END)
            .ok_or_else(|| err("TAL not terminated by 0x00".into()))?;
        let tal = &rest[..end];
        rest = &rest[end + 1..];

        let head_end = tal
            .iter()
            .position(|&b| b == TEXT_SEP)
            .ok_or_else(|| err("missing 0x14 after onset".into()))?;
        let head = &tal[..head_end];
        let (onset_raw, duration_raw) = match head.iter().position(|&b| b == DURATION_SEP) {
            Some(p) => (&head[..p], Some(&head[p + 1..])),
            None => (head, None),
        };
        let onset = parse_onset(onset_raw).ok_or_else(|| {
            err(format!("bad onset {:?}", String::from_utf8_lossy(onset_raw)))
        })?;
        let duration = match duration_raw {
            Some(raw) => parse_duration(raw).ok_or_else(|| {
                err(format!("bad duration {:?}", String::from_utf8_lossy(raw)))
            })?,
            None => 0.0,
        };
        let body = &tal[head_end + 1..];
        if !body.is_empty() && *body.last().unwrap() != TEXT_SEP {
            return Err(err("annotation text not terminated by 0x14".into()));
        }
        for text in body.split(|&b| b == TEXT_SEP) {
            if text.is_empty() {
                continue;
            }
            out.push(Annotation {
                onset,
                duration,
                raw_label: String::from_utf8_lossy(text).into_owned(),
            });
        }
    }
    Ok(out)
}

fn parse_onset(raw: &[u8]) -> Option<f64> {
    let s = std::str::from_utf8(raw).ok()?;
    let sign = s.as_bytes().first()?;
    if *sign != b'+' && *sign != b'-' {
        return None;
    }
    let v = parse_decimal(&s[1..])?;
    Some(if *sign == b'-' { -v } else { v })
}

fn parse_duration(raw: &[u8]) -> Option<f64> {
    parse_decimal(std::str::from_utf8(raw).ok()?)
}

/// Plain decimal: digits with an optional fractional part, no sign or exponent.
fn parse_decimal(s: &str) -> Option<f64> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() || !digits(int) || !digits(frac) {
        return None;
    }
    s.parse().ok()
}

/// Decode the annotations of an EDF+ hypnogram, sorted by onset.
pub fn parse_hypnogram(bytes: &[u8]) -> Result<Vec<Annotation>, EdfError> {
    let file = EdfFile::parse(bytes)?;
    let mut out = Vec::new();
    for (i, record) in file.annotation_records()?.iter().enumerate() {
        out.extend(parse_tal_record(record, i)?);
    }
    out.sort_by(|a, b| a.onset.total_cmp(&b.onset));
    Ok(out)
}

/// Encode annotations as TALs (no time-keeping entry).
pub fn encode_tals(annotations: &[Annotation]) -> Vec<u8> {
    let mut out = Vec::new();
    for a in annotations {
        out.extend_from_slice(format!("{:+}", a.onset).as_bytes());
        if a.duration > 0.0 {
            out.push(DURATION_SEP);
            out.extend_from_slice(format!("{}", a.duration).as_bytes());
        }
        out.push(TEXT_SEP);
        out.extend_from_slice(a.raw_label.as_bytes());
        out.push(TEXT_SEP);
        out.push(END);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tal() {
        let anns = parse_tal_record(b"+0\x1530\x14Sleep stage W\x14\x00", 0).unwrap();
        assert_eq!(
            anns,
            vec![Annotation {
                onset: 0.0,
                duration: 30.0,
                raw_label: "Sleep stage W".into()
            }]
        );
    }

    #[test]
    fn movement_time() {
        let anns = parse_tal_record(b"+3600\x1560\x14Movement time\x14\x00", 0).unwrap();
        assert_eq!(anns.len(), 1);
        assert_eq!(anns[0].raw_label, "Movement time");
        assert_eq!(anns[0].onset, 3600.0);
        assert_eq!(anns[0].duration, 60.0);
    }

    #[test]
    fn timekeeping_and_padding() {
        let bytes = b"+0\x14\x14\x00+30\x1530\x14Sleep stage 2\x14\x00\x00\x00\x00";
        let anns = parse_tal_record(bytes, 0).unwrap();
        assert_eq!(anns.len(), 1);
        assert_eq!(anns[0].raw_label, "Sleep stage 2");
    }

    #[test]
    fn several_texts_share_onset() {
        let anns = parse_tal_record(b"+12.5\x14A\x14B\x14\x00", 0).unwrap();
        assert_eq!(anns.len(), 2);
        assert!(anns.iter().all(|a| a.onset == 12.5 && a.duration == 0.0));
    }

    #[test]
    fn malformed_reports_record() {
        for bad in [
            &b"0\x14x\x14\x00"[..],
            b"+0\x1530",
            b"+0\x1530\x00",
            b"+abc\x14x\x14\x00",
            b"+0\x15-3\x14x\x14\x00",
            b"+0\x14text\x00",
        ] {
            match parse_tal_record(bad, 7) {
                Err(EdfError::Tal { record: 7, .. }) => {}
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn encode_decode() {
        let anns = vec![
            Annotation {
                onset: 0.0,
                duration: 90.0,
                raw_label: "Sleep stage W".into(),
            },
            Annotation {
                onset: 90.0,
                duration: 30.0,
                raw_label: "Sleep stage R".into(),
            },
        ];
        assert_eq!(parse_tal_record(&encode_tals(&anns), 0).unwrap(), anns);
    }
}
