#![no_main]

use libfuzzer_sys::fuzz_target;
use sleepscore::features::{decode_cache, encode_cache};

// Input: u32 LE sidecar length, sidecar JSON, binary matrix.
fuzz_target!(|data: &[u8]| {
    if data.len() < 4 {
        return;
    }
    let (len, rest) = data.split_at(4);
    let len = (u32::from_le_bytes(len.try_into().unwrap()) as usize).min(rest.len());
    let (sidecar, bin) = rest.split_at(len);
    let Ok((m, key)) = decode_cache(bin, sidecar) else {
        return;
    };
    let (bin, sidecar) = encode_cache(&m, &key);
    let (again, key2) = decode_cache(&bin, &sidecar).expect("re-encoded cache decodes");
    assert_eq!(key2, key);
    assert_eq!(encode_cache(&again, &key).0, bin);
});
