#![no_main]

use libfuzzer_sys::fuzz_target;
use sleepscore::dataset::{parse_edf, EdfFile};

fuzz_target!(|data: &[u8]| {
    let _ = parse_edf(data);
    let Ok(file) = EdfFile::parse(data) else {
        return;
    };
    let _ = file.annotation_records();
    // Anything accepted re-encodes to a fixed point.
    let Ok(bytes) = file.to_bytes() else {
        return;
    };
    let again = EdfFile::parse(&bytes).expect("re-encoded file parses");
    assert_eq!(again.to_bytes().expect("re-encodes"), bytes);
});
