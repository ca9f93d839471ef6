use chaosnet::config::build_layers;
use chaosnet::{Error, ExperimentConfig, LayerConfig, Normalization};

const BASE: &str = "[dataset]\npath = \"x.csv\"\n\n[model]\npreset = \"iris\"\n";

#[test]
fn defaults_and_presets() {
    let c = ExperimentConfig::parse(BASE).unwrap();
    assert_eq!(c.dataset.normalization, Normalization::Dataset);
    assert!(c.dataset.has_header);
    let p = c.model.hyperparams().unwrap();
    assert_eq!((p.q, p.b, p.epsilon), (0.6, 0.9867556, 0.01));
    assert_eq!(c.sampling.trials, 1);
}

#[test]
fn explicit_fields_override_preset() {
    let c = ExperimentConfig::parse(&format!("{BASE}epsilon = 0.001\nmap = \"skew-tent\"\n")).unwrap();
    let p = c.model.hyperparams().unwrap();
    assert_eq!(p.epsilon, 0.001);
    assert_eq!(p.map_kind.name(), "skew-tent");
}

#[test]
fn unknown_keys_are_errors() {
    for bad in [
        format!("{BASE}epsillon = 0.1\n"),
        format!("{BASE}[samplng]\nk = 1\n"),
        format!("{BASE}[[layers]]\nkind = \"paired\"\neta = 0.5\ngamma = 0.0\nq = 0.5\nmap = \"skew-tent\"\nskew = 0.3\nextra = 1\n"),
    ] {
        assert!(matches!(ExperimentConfig::parse(&bad), Err(Error::Toml(_))), "{bad}");
    }
}

#[test]
fn incomplete_model_rejected() {
    let c = ExperimentConfig::parse("[dataset]\npath = \"x.csv\"\n[model]\nq = 0.2\nb = 0.5\n").unwrap();
    assert!(matches!(c.model.hyperparams(), Err(Error::Config(_))));
}

#[test]
fn missing_dataset_fails_validation() {
    let c =
        ExperimentConfig::parse("[dataset]\npath = \"/nonexistent/data.csv\"\n[model]\npreset = \"iris\"\n").unwrap();
    assert!(matches!(c.validate(), Err(Error::Config(_))));
}

#[test]
fn layers_parse_and_build() {
    let text = format!(
        "{BASE}
[[layers]]
kind = \"paired\"
eta = 0.4995
gamma = 0.001
q = 0.56
map = \"skew-tent\"
skew = 0.149

[[layers]]
kind = \"dense\"
map = \"skew-binary\"
skew = 0.4
neurons = [
  {{ sources = [0, 1, 2], weights = [0.3, 0.3, 0.3], self_weight = 0.1, initial_activity = 0.5 }},
]
"
    );
    let c = ExperimentConfig::parse(&text).unwrap();
    assert!(matches!(c.layers[0], LayerConfig::Paired { .. }));
    let layers = build_layers(&c.layers, 5).unwrap();
    assert_eq!(layers.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![3, 1]);
    assert!(build_layers(&c.layers, 1).is_err());
}

#[test]
fn noise_grids() {
    let c = ExperimentConfig::parse(&format!("{BASE}[noise]\nsigma_start = 0.0\nsigma_stop = 0.1\nsigma_count = 3\n"))
        .unwrap();
    assert_eq!(c.noise.unwrap().grid().unwrap(), vec![0.0, 0.05, 0.1]);
    let c = ExperimentConfig::parse(&format!("{BASE}[noise]\nsigmas = [0.1, -1.0]\n")).unwrap();
    assert!(c.noise.unwrap().grid().is_err());
}
