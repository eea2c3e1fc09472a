//! Subcommand implementations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::Ordering;
use std::time::Duration;

use serde::Serialize;

use sleepscore::dataset::{assign_age_group, fetch_dataset, AgeGroup, FetchOptions, StageLabel};
use sleepscore::eval::{
    cv_csv, eval_csv, evaluate, fit_kind, grid_csv, grid_search_with, loso_cv_features, GridReport, ModelKind,
};
use sleepscore::experiments::{
    per_subject_csv, report_csv, run_age_experiment, run_cascade_vs_sm, run_channel_comparison, run_early_late_experiment,
    run_feature_comparison, run_methodology_comparison, variant_configs, ExperimentOutput,
};
use sleepscore::models::{encode_model, load_model, PipelineConfig};
use sleepscore::synth::{gen_cohort, gen_subjects, SynthProfile};

use crate::config::{load_config, RunConfig};
use crate::error::CliError;
use crate::run::{load_data, FeatureCache, FileDigest, LoadedData, RunDir, RunManifest};
use crate::svg::bar_chart;

/// Options shared by every data-driven command.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub no_cache: bool,
    pub workers: Option<usize>,
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Channels,
    Features,
    Cascade,
    Age,
    EarlyLate,
    Methods,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Channels => "channels",
            Experiment::Features => "features",
            Experiment::Cascade => "cascade",
            Experiment::Age => "age",
            Experiment::EarlyLate => "earlylate",
            Experiment::Methods => "methods",
        }
    }
}

/// A loaded config plus the input digests of the config file itself.
struct Setup {
    cfg: RunConfig,
    inputs: Vec<FileDigest>,
    run_dir: PathBuf,
}

fn setup(opts: &RunOptions, command: &str) -> Result<Setup, CliError> {
    let mut inputs = Vec::new();
    let mut cfg = match (&opts.config, &opts.data) {
        (Some(path), _) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            inputs.push(FileDigest::of(path, &bytes));
            load_config(path)?
        }
        (None, Some(data)) => RunConfig::with_data(data.clone()),
        (None, None) => return Err(CliError::Usage("either --config or --data is required".into())),
    };
    if let (Some(_), Some(data)) = (&opts.config, &opts.data) {
        cfg.data_dir = data.clone();
    }
    if opts.workers.is_some() {
        cfg.workers = opts.workers;
    }
    init_pool(cfg.workers)?;
    let run_dir = opts.out.clone().unwrap_or_else(|| cfg.output_dir.join(command));
    Ok(Setup { cfg, inputs, run_dir })
}

fn init_pool(workers: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        // a second call in the same process (tests) keeps the first pool
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::debug!("worker pool already initialised");
        }
    }
    Ok(())
}

fn manifest(command: &str, s: &Setup, data: Option<&LoadedData>) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new(command).with_config(&s.cfg)?;
    m.seed = Some(s.cfg.pipeline.seed);
    m.inputs = s.inputs.clone();
    if let Some(d) = data {
        m.inputs.extend(d.inputs.iter().cloned());
        m.data_checksum = Some(d.data.checksum());
        for (id, chans) in &d.notch_skipped {
            m.warnings.push(format!("{id}: notch skipped for {}", chans.join(", ")));
        }
    }
    Ok(m)
}

fn cache_for(s: &Setup, opts: &RunOptions, data: &LoadedData) -> FeatureCache {
    let dir = (!opts.no_cache).then(|| FeatureCache::default_dir(&s.cfg));
    FeatureCache::new(dir, data.data.checksum())
}

/// Pipeline config for a run and a note saying where it came from.
fn resolve_pipeline(cfg: &RunConfig) -> Result<(PipelineConfig, String), CliError> {
    if cfg.pipeline_pinned {
        return Ok((cfg.pipeline.clone(), "pinned in config".into()));
    }
    let Some(path) = &cfg.gridsearch_report else {
        return Ok((cfg.pipeline.clone(), "defaults".into()));
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("gridsearch_report {}: {e}", path.display())))?;
    let report: GridReport = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("gridsearch_report {}: {e}", path.display())))?;
    let best = report
        .best()
        .ok_or_else(|| CliError::Data(format!("gridsearch_report {}: no scored config", path.display())))?;
    let mut p = best.config.clone();
    p.features.variant = cfg.features.variant;
    p.features.channels = cfg.features.channels.clone();
    Ok((p, format!("best of gridsearch report {}", path.display())))
}

#[derive(Serialize)]
struct SubjectSummary {
    id: String,
    age: Option<u32>,
    age_group: Option<AgeGroup>,
    n_epochs: usize,
    stage_counts: BTreeMap<StageLabel, usize>,
    notch_skipped: Vec<String>,
}

#[derive(Serialize)]
struct PreprocessReport {
    data_checksum: String,
    n_subjects: usize,
    n_epochs: usize,
    subjects: Vec<SubjectSummary>,
}

pub fn preprocess(opts: &RunOptions) -> Result<(), CliError> {
    let s = setup(opts, "preprocess")?;
    let d = load_data(&s.cfg.data_dir, s.cfg.notch_hz)?;
    let subjects: Vec<SubjectSummary> = d
        .data
        .subjects
        .iter()
        .map(|sub| {
            let mut stage_counts: BTreeMap<StageLabel, usize> = StageLabel::ALL.iter().map(|&l| (l, 0)).collect();
            for e in &sub.epochs {
                *stage_counts.entry(e.label).or_default() += 1;
            }
            SubjectSummary {
                id: sub.id.clone(),
                age: sub.age,
                age_group: sub.age.and_then(assign_age_group),
                n_epochs: sub.epochs.len(),
                stage_counts,
                notch_skipped: d.notch_skipped.get(&sub.id).cloned().unwrap_or_default(),
            }
        })
        .collect();
    let mut csv = String::from("subject,age,age_group,n_epochs,W,S1,S2,SWS,REM\n");
    for sub in &subjects {
        let counts: Vec<String> = sub.stage_counts.values().map(usize::to_string).collect();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            sub.id,
            sub.age.map(|a| a.to_string()).unwrap_or_default(),
            sub.age_group.map(|g| g.to_string()).unwrap_or_default(),
            sub.n_epochs,
            counts.join(",")
        ));
    }
    let report = PreprocessReport {
        data_checksum: d.data.checksum(),
        n_subjects: subjects.len(),
        n_epochs: subjects.iter().map(|s| s.n_epochs).sum(),
        subjects,
    };
    let mut out = RunDir::create(&s.run_dir)?;
    out.write_json("report.json", &report)?;
    out.write("report.csv", csv.as_bytes())?;
    let m = manifest("preprocess", &s, Some(&d))?;
    finish(out, m)
}

pub fn extract(opts: &RunOptions) -> Result<(), CliError> {
    let s = setup(opts, "extract")?;
    let d = load_data(&s.cfg.data_dir, s.cfg.notch_hz)?;
    let cache = cache_for(&s, opts, &d);
    let (pipeline, source) = resolve_pipeline(&s.cfg)?;
    let epochs = d.data.all_epochs();
    let (main, level1) = cache.extracted(&pipeline, s.cfg.kind, &epochs)?;
    let mut out = RunDir::create(&s.run_dir)?;
    let mut write = |name: &str, m: &sleepscore::features::FeatureMatrix, fc: &sleepscore::features::FeatureConfig| -> Result<(), CliError> {
        sleepscore::features::write_cache(&out.dir.join(name), m, &cache.key(fc))?;
        out.record(name)?;
        out.record(&Path::new(name).with_extension("json").display().to_string())
    };
    write("features.ssf", &main, &pipeline.features)?;
    if let Some(l1) = &level1 {
        write("features-level1.ssf", l1, &sleepscore::models::level1_feature_config(&pipeline.features))?;
    }
    log::info!("extracted {} x {} features", main.rows(), main.cols());
    let mut m = manifest("extract", &s, Some(&d))?;
    m.hyperparameters = Some(source);
    finish(out, m)
}

pub fn gridsearch(opts: &RunOptions) -> Result<(), CliError> {
    let s = setup(opts, "gridsearch")?;
    let d = load_data(&s.cfg.data_dir, s.cfg.notch_hz)?;
    let cache = cache_for(&s, opts, &d);
    let epochs = d.data.all_epochs();
    let base = s.cfg.pipeline.clone();
    log::info!("grid search over {} configs", s.cfg.grid.count());
    let report = grid_search_with(&s.cfg.grid, &base, s.cfg.kind, &|c| cache.extracted(c, s.cfg.kind, &epochs))?;
    log::info!(
        "feature cache: {} hits, {} misses",
        cache.hits.load(Ordering::Relaxed),
        cache.misses.load(Ordering::Relaxed)
    );
    let mut out = RunDir::create(&s.run_dir)?;
    out.write_json("report.json", &report)?;
    out.write("report.csv", grid_csv(&report).as_bytes())?;
    if let Some(best) = report.best() {
        out.write_json("best.json", &best.config)?;
    }
    if opts.svg {
        let bars: Vec<(String, Option<f64>)> = report.entries.iter().take(20).map(|e| (e.config.label(), e.mean_macro_f)).collect();
        out.write("report.svg", bar_chart("grid search: top configs, LOSO mean macro F", &bars).as_bytes())?;
    }
    let m = manifest("gridsearch", &s, Some(&d))?;
    finish(out, m)
}

#[derive(Serialize)]
struct TrainReport {
    kind: ModelKind,
    config: PipelineConfig,
    hyperparameters: String,
    subjects: Vec<String>,
    n_epochs: usize,
    n_training_rows: usize,
    model_sha256: String,
}

pub fn train(opts: &RunOptions) -> Result<(), CliError> {
    let s = setup(opts, "train")?;
    let d = load_data(&s.cfg.data_dir, s.cfg.notch_hz)?;
    let cache = cache_for(&s, opts, &d);
    let (pipeline, source) = resolve_pipeline(&s.cfg)?;
    let epochs = d.data.all_epochs();
    let (main, level1) = cache.extracted(&pipeline, s.cfg.kind, &epochs)?;
    let model = fit_kind(&pipeline, s.cfg.kind, &main, level1.as_ref())?;
    let bytes = encode_model(&model);
    let mut out = RunDir::create(&s.run_dir)?;
    out.write("model.ssm", &bytes)?;
    out.write_json(
        "report.json",
        &TrainReport {
            kind: s.cfg.kind,
            config: pipeline,
            hyperparameters: source.clone(),
            subjects: d.data.ids(),
            n_epochs: epochs.len(),
            n_training_rows: model.n_training_rows,
            model_sha256: sleepscore::dataset::fetch::sha256_hex(&bytes),
        },
    )?;
    let mut m = manifest("train", &s, Some(&d))?;
    m.hyperparameters = Some(source);
    finish(out, m)
}

/// Score a saved model on the data, or run LOSO CV when no model is given.
pub fn evaluate_cmd(opts: &RunOptions, model_path: Option<&Path>) -> Result<(), CliError> {
    let s = setup(opts, "evaluate")?;
    let d = load_data(&s.cfg.data_dir, s.cfg.notch_hz)?;
    let epochs = d.data.all_epochs();
    let mut out = RunDir::create(&s.run_dir)?;
    let mut m = manifest("evaluate", &s, Some(&d))?;
    match model_path {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            m.inputs.push(FileDigest::of(path, &bytes));
            let model = load_model(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let report = evaluate(&model, &epochs)?;
            log::info!("macro F {:.4}", report.macro_f());
            out.write_json("report.json", &report)?;
            out.write("report.csv", eval_csv(&report).as_bytes())?;
            if opts.svg {
                let bars: Vec<(String, Option<f64>)> = report
                    .per_subject
                    .iter()
                    .map(|p| (p.subject_id.clone(), Some(p.fscores.macro_f)))
                    .chain(std::iter::once(("all".to_string(), Some(report.macro_f()))))
                    .collect();
                out.write("report.svg", bar_chart("macro F per subject", &bars).as_bytes())?;
            }
            m.seed = Some(model.config.seed);
        }
        None => {
            let cache = cache_for(&s, opts, &d);
            let (pipeline, source) = resolve_pipeline(&s.cfg)?;
            let (main, level1) = cache.extracted(&pipeline, s.cfg.kind, &epochs)?;
            let cv = loso_cv_features(&main, level1.as_ref(), &pipeline, s.cfg.kind)?;
            log::info!("LOSO mean macro F {:.4} (std {:.4})", cv.mean_macro_f, cv.std_macro_f);
            out.write_json("report.json", &cv)?;
            out.write("report.csv", cv_csv(&cv).as_bytes())?;
            if opts.svg {
                let bars: Vec<(String, Option<f64>)> = cv
                    .folds
                    .iter()
                    .map(|f| (f.held_out.clone(), f.report.as_ref().map(|r| r.macro_f())))
                    .collect();
                out.write("report.svg", bar_chart("LOSO macro F per held-out subject", &bars).as_bytes())?;
            }
            m.hyperparameters = Some(source);
        }
    }
    finish(out, m)
}

pub fn experiment(opts: &RunOptions, which: Experiment) -> Result<(), CliError> {
    let command = format!("experiment-{}", which.name());
    let s = setup(opts, &command)?;
    let d = load_data(&s.cfg.data_dir, s.cfg.notch_hz)?;
    let (pipeline, source) = resolve_pipeline(&s.cfg)?;
    let eo = s.cfg.experiment_options();
    let data = &d.data;
    let ExperimentOutput { mut report, models } = match which {
        Experiment::Channels => run_channel_comparison(data, &pipeline, &eo)?,
        Experiment::Features => run_feature_comparison(data, &variant_configs(&pipeline), &eo)?,
        Experiment::Cascade => run_cascade_vs_sm(data, &pipeline, &eo)?,
        Experiment::Age => run_age_experiment(data, &pipeline, &eo)?,
        Experiment::EarlyLate => run_early_late_experiment(data, &pipeline, &eo)?,
        Experiment::Methods => run_methodology_comparison(data, &pipeline, &eo)?,
    };
    report.notes.push(format!("hyperparameters: {source}"));
    let mut out = RunDir::create(&s.run_dir)?;
    out.write_json("report.json", &report)?;
    out.write("report.csv", report_csv(&report).as_bytes())?;
    out.write("per_subject.csv", per_subject_csv(&report).as_bytes())?;
    for (name, model) in &models {
        out.write(&format!("models/{name}.ssm"), &encode_model(model))?;
    }
    if opts.svg {
        let bars: Vec<(String, Option<f64>)> = report
            .cells
            .iter()
            .map(|c| (format!("{} / {}", c.trained_on, c.tested_on), c.scores.as_ref().map(|r| r.global)))
            .collect();
        out.write("report.svg", bar_chart(&format!("{}: global macro F", report.id), &bars).as_bytes())?;
    }
    let mut m = manifest(&command, &s, Some(&d))?;
    m.hyperparameters = Some(source);
    finish(out, m)
}

fn finish(out: RunDir, m: RunManifest) -> Result<(), CliError> {
    let path = out.finish(m)?;
    println!("{}", path.parent().unwrap_or(&path).display());
    Ok(())
}

pub struct SynthArgs {
    pub subjects: usize,
    pub groups: Option<BTreeMap<AgeGroup, usize>>,
    pub epochs: usize,
    pub seed: u64,
    pub profile: Option<PathBuf>,
    pub out: PathBuf,
}

pub fn parse_groups(s: &str) -> Result<BTreeMap<AgeGroup, usize>, String> {
    s.split(',')
        .map(|part| {
            let (g, n) = part.split_once('=').ok_or_else(|| format!("{part:?}: expected GROUP=COUNT"))?;
            let n = n.trim().parse::<usize>().map_err(|e| format!("{part:?}: {e}"))?;
            Ok((g.trim().parse::<AgeGroup>()?, n))
        })
        .collect()
}

pub fn synth(a: &SynthArgs) -> Result<(), CliError> {
    let mut inputs = Vec::new();
    let profile = match &a.profile {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            inputs.push(FileDigest::of(path, &bytes));
            let p: SynthProfile = serde_json::from_slice(&bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            p.validate().map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            p
        }
        None => SynthProfile::default(),
    };
    let subjects = match &a.groups {
        Some(g) => gen_cohort(g, a.seed, &profile, a.epochs)?,
        None => gen_subjects(a.subjects, a.seed, &profile, a.epochs)?,
    };
    let mut out = RunDir::create(&a.out)?;
    out.write_json("profile.json", &profile)?;
    for sub in &subjects {
        let (psg, hyp) = sub.write(&a.out)?;
        for p in [psg, hyp] {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            out.record(&name)?;
        }
    }
    let mut m = RunManifest::new("synth");
    m.seed = Some(a.seed);
    m.inputs = inputs;
    log::info!("wrote {} synthetic subjects to {}", subjects.len(), a.out.display());
    finish(out, m)
}

pub struct FetchArgs {
    pub subjects: Vec<String>,
    pub base_url: String,
    pub dest: PathBuf,
    pub retries: u32,
    pub parallel: usize,
    pub timeout_secs: u64,
}

pub fn fetch(a: &FetchArgs) -> Result<(), CliError> {
    if a.subjects.is_empty() {
        return Err(CliError::Usage("--subjects: at least one subject id is required".into()));
    }
    let opts = FetchOptions {
        retries: a.retries,
        max_parallel: a.parallel.max(1),
        timeout: Duration::from_secs(a.timeout_secs),
        ..FetchOptions::default()
    };
    let manifest = fetch_dataset(&a.subjects, &a.base_url, &a.dest, &opts)?;
    log::info!("{} files present in {}", manifest.files.len(), a.dest.display());
    println!("{}", a.dest.display());
    Ok(())
}
