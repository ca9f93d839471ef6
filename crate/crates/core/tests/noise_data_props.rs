use chaosnet_core::data::sample_indices;
use chaosnet_core::noise::{noise_sweep, perturb_model, snr_db};
use chaosnet_core::{normalize, train, Hyperparams, LabeledDataset, MapKind, Matrix, TrainedModel};
use proptest::prelude::*;

fn dataset(rows: usize, classes: usize) -> LabeledDataset {
    let m: Vec<Vec<f64>> =
        (0..rows).map(|i| vec![(i % 7) as f64 * 0.1 + (i % classes) as f64, i as f64 * 0.01]).collect();
    let labels = (0..rows).map(|i| format!("k{}", i % classes)).collect();
    LabeledDataset::new(Matrix::from_rows(&m).unwrap(), labels).unwrap()
}

fn toy_model() -> (TrainedModel, Matrix, Vec<String>) {
    let d = dataset(30, 3);
    let (x, _) = normalize(d.features());
    let d = d.with_features(x).unwrap();
    let p = Hyperparams::new(0.37, 0.62, MapKind::SkewBinary, 0.01).unwrap();
    let m = train(&d.per_class(), &p).unwrap();
    (m, d.features().clone(), d.labels().to_vec())
}

proptest! {
    #[test]
    fn normalization_range(rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 1..10)) {
        let m = Matrix::from_rows(&rows).unwrap();
        let (n, e) = normalize(&m);
        prop_assert!(n.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
        if e.max > e.min {
            let idx_min = m.as_slice().iter().position(|&v| v == e.min).unwrap();
            let idx_max = m.as_slice().iter().position(|&v| v == e.max).unwrap();
            prop_assert_eq!(n.as_slice()[idx_min], 0.0);
            prop_assert_eq!(n.as_slice()[idx_max], 1.0);
        }
    }

    #[test]
    fn sampling_partitions(k in 1usize..5, seed in any::<u64>()) {
        let d = dataset(25, 4);
        let (train, rest) = sample_indices(&d, k, seed).unwrap();
        prop_assert_eq!(train.len() + rest.len(), d.len());
        prop_assert!(train.iter().all(|i| !rest.contains(i)));
        for c in d.classes() {
            prop_assert_eq!(train.iter().filter(|&&i| &d.labels()[i] == c).count(), k);
        }
        prop_assert_eq!(sample_indices(&d, k, seed).unwrap(), (train, rest));
    }

    #[test]
    fn snr_decreases_with_sigma(seed in any::<u64>(), s1 in 1e-4f64..0.1, factor in 1.01f64..10.0) {
        let (m, _, _) = toy_model();
        // same seed => same unit-noise direction, scaled by sigma
        let (_, n1) = perturb_model(&m, s1, seed).unwrap();
        let (_, n2) = perturb_model(&m, s1 * factor, seed).unwrap();
        prop_assert!(snr_db(&m, &n2).unwrap() < snr_db(&m, &n1).unwrap());
    }
}

#[test]
fn sweeps_are_reproducible() {
    let (m, x, y) = toy_model();
    let sigmas = [0.0, 0.001, 0.05];
    let a = noise_sweep(&m, &x, &y, true, &sigmas, 5, 9).unwrap();
    assert_eq!(a, noise_sweep(&m, &x, &y, true, &sigmas, 5, 9).unwrap());
    assert_eq!(a.len(), 15);
    assert!(a.windows(2).all(|w| w[0].sigma <= w[1].sigma));
}

#[test]
fn zero_sigma_keeps_clean_accuracy() {
    let (m, x, y) = toy_model();
    let clean = chaosnet_core::evaluate(&m, &x, &y, true).unwrap().accuracy;
    for t in noise_sweep(&m, &x, &y, true, &[0.0], 7, 1).unwrap() {
        assert_eq!(t.accuracy, clean);
        assert_eq!(t.snr_db, f64::INFINITY);
    }
}
