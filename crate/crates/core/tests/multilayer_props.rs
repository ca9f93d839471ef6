use chaosnet_core::classifier::train_layered;
use chaosnet_core::multilayer::{hidden_layer_series, input_layer_series, layered_features, paired_layer_spec};
use chaosnet_core::{GlsMap, HiddenNeuron, Hyperparams, LayerSpec, MapKind, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(rng: &mut ChaCha8Rng, inputs: usize, size: usize) -> LayerSpec {
    let kind = if rng.random::<bool>() { MapKind::SkewTent } else { MapKind::SkewBinary };
    let neurons = (0..size)
        .map(|_| {
            let k = rng.random_range(0..=inputs.min(4));
            let mut raw: Vec<f64> = (0..=k).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.iter_mut().for_each(|w| *w /= total);
            raw.pop();
            let gamma = 1.0 - raw.iter().sum::<f64>();
            let couplings = raw.into_iter().map(|w| (rng.random_range(0..inputs), w)).collect();
            HiddenNeuron { couplings, self_weight: gamma.max(0.0), initial_activity: rng.random_range(0.01..0.99) }
        })
        .collect();
    LayerSpec { neurons, map: GlsMap::new(kind, rng.random_range(0.05..0.95)).unwrap() }
}

#[test]
fn hidden_values_stay_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10_000 {
        let inputs = rng.random_range(1..6);
        let steps = rng.random_range(1..40);
        let data: Vec<f64> = (0..inputs * steps).map(|_| rng.random_range(0.0..1.0)).collect();
        let prev = Matrix::from_vec(inputs, steps, data).unwrap();
        let size = rng.random_range(1..5);
        let spec = random_spec(&mut rng, inputs, size);
        let h = hidden_layer_series(&spec, &prev).unwrap();
        assert!(h.values().as_slice().iter().all(|v| (0.0..1.0).contains(v)));
    }
}

#[test]
fn pass_through_reproduces_sources() {
    let p = Hyperparams::new(0.23, 0.56, MapKind::SkewTent, 0.01).unwrap();
    let input = input_layer_series(&p, &[0.2, 0.5, 0.1, 0.9]).unwrap();
    let spec = LayerSpec {
        neurons: (0..4)
            .rev()
            .map(|i| HiddenNeuron { couplings: vec![(i, 1.0)], self_weight: 0.0, initial_activity: 0.4 })
            .collect(),
        map: GlsMap::new(MapKind::SkewBinary, 0.3).unwrap(),
    };
    let h = hidden_layer_series(&spec, &input).unwrap();
    for j in 0..4 {
        assert_eq!(h.values().row(j), input.row(3 - j));
    }
}

#[test]
fn paired_layer_halves_dimension() {
    let p = Hyperparams::new(0.26242424242424245, 0.149, MapKind::SkewTent, 0.01).unwrap();
    let layer = paired_layer_spec(45, 0.4995, 0.001, 0.56, p.map()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rows: Vec<Vec<f64>> = (0..4).map(|_| (0..45).map(|_| rng.random_range(0.0..=1.0)).collect()).collect();
    let f = layered_features(&p, std::slice::from_ref(&layer), &rows[0]).unwrap();
    assert_eq!(f.len(), 23);
    let data = Matrix::from_rows(&rows).unwrap();
    let m = train_layered(&[("a".into(), data.clone()), ("b".into(), data)], &p, &[layer]).unwrap();
    assert!(m.mean_vectors.iter().all(|v| v.len() == 23));
    assert_eq!(m.input_dim(), Some(45));
}

#[test]
fn layered_pipeline_is_deterministic() {
    let p = Hyperparams::new(0.26, 0.149, MapKind::SkewTent, 0.01).unwrap();
    let l1 = paired_layer_spec(6, 0.4995, 0.001, 0.56, p.map()).unwrap();
    let l2 = paired_layer_spec(3, 0.25, 0.5, 0.41, GlsMap::new(MapKind::SkewBinary, 0.47).unwrap()).unwrap();
    let x = [0.1, 0.9, 0.33, 0.5, 0.72, 0.0];
    let a = layered_features(&p, &[l1.clone(), l2.clone()], &x).unwrap();
    assert_eq!(a.len(), 2);
    assert_eq!(a, layered_features(&p, &[l1, l2], &x).unwrap());
}
