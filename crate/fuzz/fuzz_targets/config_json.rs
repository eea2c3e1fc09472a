#![no_main]

use libfuzzer_sys::fuzz_target;
use sleepscore::dataset::SubjectSpec;
use sleepscore::eval::GridSpec;
use sleepscore::models::PipelineConfig;
use sleepscore::synth::SynthProfile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = SubjectSpec::parse(text);
    if let Ok(p) = serde_json::from_str::<PipelineConfig>(text) {
        let _ = p.validate();
    }
    if let Ok(g) = serde_json::from_str::<GridSpec>(text) {
        let _ = g.problems();
    }
    if let Ok(s) = serde_json::from_str::<SynthProfile>(text) {
        let _ = s.validate();
    }
});
