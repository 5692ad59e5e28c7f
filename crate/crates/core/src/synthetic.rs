//! Seeded sample generators and small synthetic datasets used by tests,
//! benchmarks and the examples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, StandardNormal};

use crate::dataset::{Dataset, VariableMeta};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws from uniform [0, 1).
pub fn uniform(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random::<f64>()).collect()
}

pub fn gaussian(n: usize, mean: f64, sd: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let dist = Normal::new(mean, sd).expect("finite positive sd");
    (0..n).map(|_| dist.sample(&mut r)).collect()
}

pub fn exponential(n: usize, mean: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let dist = Exp::new(1.0 / mean).expect("positive mean");
    (0..n).map(|_| dist.sample(&mut r)).collect()
}

/// Row-major standard Gaussian points in `dim` dimensions, shifted by
/// `shift` along every axis.
pub fn gaussian_cloud(n: usize, dim: usize, shift: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n * dim)
        .map(|_| StandardNormal.sample(&mut r))
        .map(|z: f64| z + shift)
        .collect()
}

fn with_class(names: &[&str], columns: Vec<Vec<f64>>, n_per_class: usize) -> Dataset {
    let mut metas: Vec<VariableMeta> = names
        .iter()
        .enumerate()
        .map(|(i, n)| VariableMeta::continuous(*n, i))
        .collect();
    metas.push(VariableMeta::categorical(
        "Flag",
        names.len(),
        vec!["0".into(), "1".into()],
    ));
    let mut columns = columns;
    columns.push(
        std::iter::repeat_n(0.0, n_per_class)
            .chain(std::iter::repeat_n(1.0, n_per_class))
            .collect(),
    );
    let class_index = Some(names.len());
    Dataset::new(metas, columns, class_index).expect("synthetic data is valid")
}

/// Two classes (`Flag` = 0 then 1) with an `informative` variable whose
/// class means differ by `separation` standard deviations and an independent
/// `noise` variable.
pub fn two_class_gaussian(n_per_class: usize, separation: f64, seed: u64) -> Dataset {
    let mut informative = gaussian(n_per_class, 0.0, 1.0, seed);
    informative.extend(gaussian(n_per_class, separation, 1.0, seed ^ 0x5eed_0001));
    let noise = gaussian(2 * n_per_class, 0.0, 1.0, seed ^ 0x5eed_0002);
    with_class(
        &["informative", "noise"],
        vec![informative, noise],
        n_per_class,
    )
}

/// Four variables: `informative` (2 sd class separation), `copy`
/// (informative plus half-unit Gaussian noise) and two pure-noise columns.
pub fn ranking_fixture(n_per_class: usize, seed: u64) -> Dataset {
    let mut informative = gaussian(n_per_class, 0.0, 1.0, seed);
    informative.extend(gaussian(n_per_class, 2.0, 1.0, seed ^ 0x5eed_0011));
    let jitter = gaussian(2 * n_per_class, 0.0, 0.5, seed ^ 0x5eed_0012);
    let copy = informative
        .iter()
        .zip(&jitter)
        .map(|(a, b)| a + b)
        .collect();
    let noise_a = gaussian(2 * n_per_class, 0.0, 1.0, seed ^ 0x5eed_0013);
    let noise_b = exponential(2 * n_per_class, 1.0, seed ^ 0x5eed_0014);
    with_class(
        &["informative", "copy", "noise_a", "noise_b"],
        vec![informative, copy, noise_a, noise_b],
        n_per_class,
    )
}
