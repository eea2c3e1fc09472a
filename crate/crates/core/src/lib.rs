pub mod dataset;
pub mod eval;
pub mod experiments;
pub mod features;
pub mod mlcore;
pub mod models;
pub mod synth;
pub mod wavelet;
