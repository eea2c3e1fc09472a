//! Property tests over the public API.

use proptest::prelude::*;

use sleepscore::dataset::tal::{encode_tals, parse_tal_record};
use sleepscore::dataset::{Annotation, ChannelKind, EdfFile, Epoch, StageLabel};
use sleepscore::eval::split_subjects;
use sleepscore::features::{apply_standardizer, build_matrix, descriptors, fit_standardizer, FeatureConfig, Variant};
use sleepscore::mlcore::{forest_predict, forest_train, pca_fit, rus_wake, ForestParams, Matrix, RngStream};
use sleepscore::synth::{check_chain, stationary};
use sleepscore::wavelet::{band_len, dwt_step, wavedec, wavelet_filters, WaveletFamily};

fn family() -> impl Strategy<Value = WaveletFamily> {
    let all = WaveletFamily::all();
    (0..all.len()).prop_map(move |i| all[i])
}

fn orthogonal_family() -> impl Strategy<Value = WaveletFamily> {
    let all: Vec<_> = WaveletFamily::all().into_iter().filter(|f| f.is_orthogonal()).collect();
    (0..all.len()).prop_map(move |i| all[i])
}

fn signal(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3f64..1e3, 1..max)
}

fn stage() -> impl Strategy<Value = StageLabel> {
    (0..5usize).prop_map(|i| StageLabel::ALL[i])
}

fn epoch(seed: u64, label: StageLabel, index: usize) -> Epoch {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n: usize| (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect::<Vec<f64>>();
    Epoch {
        subject_id: format!("S{}", seed % 3),
        index,
        label,
        eeg: draw(ChannelKind::Eeg.epoch_samples()),
        eog: draw(ChannelKind::Eog.epoch_samples()),
        emg: draw(ChannelKind::Emg.epoch_samples()),
        half: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn band_lengths_follow_ceil_halving(x in signal(400), fam in family(), level in 1usize..6) {
        prop_assume!(level <= sleepscore::wavelet::max_level(x.len()));
        let c = wavedec(&x, fam, level).unwrap();
        prop_assert_eq!(c.approx.len(), band_len(x.len(), level));
        prop_assert_eq!(c.details.len(), level);
        for (i, d) in c.details.iter().enumerate() {
            prop_assert_eq!(d.len(), band_len(x.len(), level - i));
        }
        prop_assert_eq!(c.total_len(), c.bands().map(<[f64]>::len).sum::<usize>());
    }

    #[test]
    fn orthogonal_energy_is_preserved(x in prop::collection::vec(-1e3f64..1e3, 2..600), fam in orthogonal_family()) {
        let level = sleepscore::wavelet::max_level(x.len()).clamp(1, 4);
        let c = wavedec(&x, fam, level).unwrap();
        let e: f64 = x.iter().map(|v| v * v).sum();
        let ec: f64 = c.bands().flatten().map(|v| v * v).sum();
        prop_assert!((e - ec).abs() <= 1e-9 * e.max(1e-300));
    }

    #[test]
    fn decomposition_is_linear(
        xy in (2usize..300).prop_flat_map(|n| (prop::collection::vec(-10f64..10.0, n), prop::collection::vec(-10f64..10.0, n))),
        a in -5f64..5.0,
        b in -5f64..5.0,
        fam in family(),
    ) {
        let (x, y) = xy;
        let level = sleepscore::wavelet::max_level(x.len()).min(3);
        let z: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let (cx, cy, cz) = (wavedec(&x, fam, level).unwrap(), wavedec(&y, fam, level).unwrap(), wavedec(&z, fam, level).unwrap());
        for ((bx, by), bz) in cx.bands().zip(cy.bands()).zip(cz.bands()) {
            for ((u, v), w) in bx.iter().zip(by).zip(bz) {
                prop_assert!((a * u + b * v - w).abs() <= 1e-10 * (1.0 + w.abs()));
            }
        }
    }

    #[test]
    fn level_one_is_a_single_step(x in signal(200), fam in family()) {
        let c = wavedec(&x, fam, 1).unwrap();
        let (a, d) = dwt_step(&x, &wavelet_filters(fam).unwrap()).unwrap();
        prop_assert_eq!(c.approx, a);
        prop_assert_eq!(&c.details[0], &d);
    }

    #[test]
    fn descriptors_are_finite(x in signal(200), k in 1usize..4) {
        let rep: Vec<f64> = x.iter().flat_map(|&v| std::iter::repeat(v).take(k)).collect();
        let d = descriptors(&rep).unwrap();
        prop_assert!(d.to_array().iter().all(|v| v.is_finite()));
        prop_assert!(d.std >= 0.0);
    }

    #[test]
    fn standardizer_centres_training_columns(rows in prop::collection::vec(prop::collection::vec(-100f64..100.0, 4), 2..40)) {
        let fm = sleepscore::features::FeatureMatrix {
            values: Matrix::from_rows(&rows),
            column_meta: vec![],
            row_meta: vec![],
        };
        let stats = fit_standardizer(&fm).unwrap();
        prop_assert!(stats.scale.iter().all(|&s| s > 0.0));
        let z = apply_standardizer(&stats, &fm).unwrap();
        for c in 0..z.cols() {
            let col = z.values.column(c);
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((var - 1.0).abs() < 1e-9 || var < 1e-18);
        }
    }

    #[test]
    fn rus_keeps_non_wake_and_rounds(labels in prop::collection::vec(stage(), 0..200), p in 0.001f64..=1.0, seed in any::<u64>()) {
        let rng = RngStream::new(seed, 1 << 40);
        let idx = rus_wake(&labels, p, &rng).unwrap();
        let n_w = labels.iter().filter(|&&l| l == StageLabel::W).count();
        let kept_w = idx.iter().filter(|&&i| labels[i] == StageLabel::W).count();
        prop_assert_eq!(kept_w, (p * n_w as f64).round() as usize);
        prop_assert_eq!(idx.len() - kept_w, labels.len() - n_w);
        prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(idx, rus_wake(&labels, p, &rng).unwrap());
    }

    #[test]
    fn split_is_a_disjoint_partition(n in 2usize..40, frac in 0.05f64..0.95, seed in any::<u64>()) {
        let ids: Vec<String> = (0..n).map(|i| format!("P{i:02}")).collect();
        let (train, test) = split_subjects(&ids, frac, seed).unwrap();
        prop_assert!(!train.is_empty() && !test.is_empty());
        prop_assert_eq!(train.len() + test.len(), n);
        prop_assert!(train.iter().all(|t| !test.contains(t)));
    }

    #[test]
    fn stationary_is_a_distribution(rows in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 5), 5)) {
        let mut t = [[0.0; 5]; 5];
        for (i, r) in rows.iter().enumerate() {
            let s: f64 = r.iter().sum();
            for j in 0..5 {
                t[i][j] = r[j] / s;
            }
        }
        prop_assert!(check_chain(&t).is_ok());
        let pi = stationary(&t);
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for j in 0..5 {
            let next: f64 = (0..5).map(|i| pi[i] * t[i][j]).sum();
            prop_assert!((next - pi[j]).abs() < 1e-8);
        }
    }

    #[test]
    fn tals_round_trip(events in prop::collection::vec((0u32..100_000, 1u32..2000, "[A-Za-z0-9 ?]{1,20}"), 1..20)) {
        let anns: Vec<Annotation> = events
            .iter()
            .map(|(o, d, l)| Annotation { onset: *o as f64, duration: *d as f64, raw_label: l.trim().to_string() })
            .filter(|a| !a.raw_label.is_empty())
            .collect();
        let back = parse_tal_record(&encode_tals(&anns), 0).unwrap();
        prop_assert_eq!(back, anns);
    }

    #[test]
    fn truncated_edf_never_panics(cut in 0usize..2000, seed in any::<u64>()) {
        let sub = sleepscore::synth::gen_subject(seed % 4, &sleepscore::synth::SynthProfile::default(), 10).unwrap();
        let bytes = sub.recording.to_edf().unwrap().to_bytes().unwrap();
        let cut = cut.min(bytes.len());
        let _ = EdfFile::parse(&bytes[..cut]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn feature_extraction_is_deterministic_and_finite(seed in any::<u64>(), label in stage(), level in 1usize..6) {
        let epochs = vec![epoch(seed, label, 0), epoch(seed ^ 1, label, 1)];
        for variant in [Variant::WM, Variant::SM, Variant::EM] {
            let cfg = FeatureConfig { variant, channels: ChannelKind::ALL.to_vec(), family: WaveletFamily::Daubechies(2), level };
            let a = build_matrix(&epochs, &cfg).unwrap();
            prop_assert!(a.check_finite().is_ok());
            prop_assert_eq!(a.cols(), a.column_meta.len());
            prop_assert_eq!(&a, &build_matrix(&epochs, &cfg).unwrap());
            let reversed = FeatureConfig { channels: vec![ChannelKind::Emg, ChannelKind::Eog, ChannelKind::Eeg], ..cfg };
            prop_assert_eq!(&a, &build_matrix(&epochs, &reversed).unwrap());
        }
    }

    #[test]
    fn pca_scores_are_uncorrelated(data in prop::collection::vec(-10f64..10.0, 60..=60), k in 1usize..4) {
        let x = Matrix::from_vec(15, 4, data);
        let m = pca_fit(&x, k).unwrap();
        let z = m.transform(&x).unwrap();
        for a in 0..z.cols() {
            for b in 0..a {
                let cov: f64 = (0..z.rows()).map(|r| z.get(r, a) * z.get(r, b)).sum::<f64>() / z.rows() as f64;
                prop_assert!(cov.abs() < 1e-6);
            }
        }
    }

    #[test]
    fn forest_votes_sum_to_one(data in prop::collection::vec(-5f64..5.0, 90..=90), seed in any::<u64>()) {
        let x = Matrix::from_vec(30, 3, data);
        let y: Vec<usize> = (0..30).map(|i| usize::from(x.get(i, 0) > 0.0) + usize::from(x.get(i, 1) > 2.0)).collect();
        let params = ForestParams { n_trees: 7, seed, ..ForestParams::default() };
        let f = forest_train(&x, &y, 3, &params).unwrap();
        let p = forest_predict(&f, &x).unwrap();
        for r in 0..x.rows() {
            let row = p.probabilities.row(r);
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(p.labels[r], row.iter().position(|&v| v == best).unwrap());
        }
        prop_assert_eq!(f, forest_train(&x, &y, 3, &params).unwrap());
    }
}
