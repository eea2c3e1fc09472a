#![no_main]

use libfuzzer_sys::fuzz_target;
use sleepscore::dataset::tal::parse_tal_record;

fuzz_target!(|data: &[u8]| {
    let _ = parse_tal_record(data, 0);
});
