#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ldfm_cli::ExperimentConfig;
use ldfm_core::{DatasetPair, DenseMatrix, MultiLabelDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Labels drawn with chained correlation; the first `informative` features
/// are noisy linear mixtures of the labels, the rest pure noise.
pub fn synthetic_set(
    rng: &mut ChaCha8Rng,
    n: usize,
    mixing: &DenseMatrix,
    noise_features: usize,
) -> (DenseMatrix, DenseMatrix) {
    let (informative, k) = mixing.shape();
    let mut data = vec![0.0; k * n];
    for i in 0..n {
        for j in 0..k {
            let copy = j > 0 && rng.random_bool(0.5);
            let positive = if copy {
                data[(j - 1) * n + i] == 1.0
            } else {
                rng.random_bool(0.3)
            };
            if positive {
                data[j * n + i] = 1.0;
            }
        }
    }
    let labels = DenseMatrix::new(k, n, data).unwrap();
    let d = informative + noise_features;
    let features = DenseMatrix::from_fn(d, n, |f, i| {
        let noise = rng.random_range(-1.0..1.0);
        if f < informative {
            (0..k).map(|j| mixing[(f, j)] * labels[(j, i)]).sum::<f64>() + 0.4 * noise
        } else {
            noise
        }
    });
    (features, labels)
}

pub fn synthetic_pair(
    seed: u64,
    n_train: usize,
    n_test: usize,
    informative: usize,
    noise: usize,
    k: usize,
) -> DatasetPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mixing = DenseMatrix::from_fn(informative, k, |_, _| rng.random_range(-2.0..2.0));
    let (xtr, ytr) = synthetic_set(&mut rng, n_train, &mixing, noise);
    let (xte, yte) = synthetic_set(&mut rng, n_test, &mixing, noise);
    let fnames: Vec<String> = (0..informative + noise).map(|f| format!("f{f}")).collect();
    let lnames: Vec<String> = (0..k).map(|j| format!("label{j}")).collect();
    DatasetPair::new(
        "synthetic",
        MultiLabelDataset::new(xtr, ytr, fnames.clone(), lnames.clone()).unwrap(),
        MultiLabelDataset::new(xte, yte, fnames, lnames).unwrap(),
    )
    .unwrap()
}

/// Writes `<name>-train.arff`, `<name>-test.arff` and `<name>.xml`.
pub fn write_pair(dir: &Path, name: &str, pair: &DatasetPair) -> (PathBuf, PathBuf, PathBuf) {
    let train = dir.join(format!("{name}-train.arff"));
    let test = dir.join(format!("{name}-test.arff"));
    let xml = dir.join(format!("{name}.xml"));
    std::fs::write(&train, pair.train.to_arff(name)).unwrap();
    std::fs::write(&test, pair.test.to_arff(name)).unwrap();
    let labels: String = pair
        .train
        .label_names()
        .iter()
        .map(|l| format!("  <label name=\"{l}\"></label>\n"))
        .collect();
    std::fs::write(
        &xml,
        format!("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n{labels}</labels>\n"),
    )
    .unwrap();
    (train, test, xml)
}

/// Config pointing at the Mulan files for `name` under `LDFM_DATA_DIR`, if
/// that variable is set and the files exist.
pub fn mulan_config(name: &str) -> Option<ExperimentConfig> {
    let dir = PathBuf::from(std::env::var_os("LDFM_DATA_DIR")?);
    let config = ExperimentConfig {
        train: dir.join(format!("{name}-train.arff")),
        test: dir.join(format!("{name}-test.arff")),
        labels_xml: dir.join(format!("{name}.xml")),
        ..ExperimentConfig::default()
    };
    [&config.train, &config.test, &config.labels_xml]
        .iter()
        .all(|p| p.is_file())
        .then_some(config)
}
