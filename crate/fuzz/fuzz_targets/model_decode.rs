#![no_main]

use libfuzzer_sys::fuzz_target;
use sleepscore::models::{decode_model, encode_model};

fuzz_target!(|data: &[u8]| {
    let Ok(model) = decode_model(data) else {
        return;
    };
    let bytes = encode_model(&model);
    let again = decode_model(&bytes).expect("re-encoded model decodes");
    assert_eq!(encode_model(&again), bytes);
});
