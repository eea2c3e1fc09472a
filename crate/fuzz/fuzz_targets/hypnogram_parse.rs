#![no_main]

use libfuzzer_sys::fuzz_target;
use sleepscore::dataset::parse_hypnogram;

fuzz_target!(|data: &[u8]| {
    let _ = parse_hypnogram(data);
});
