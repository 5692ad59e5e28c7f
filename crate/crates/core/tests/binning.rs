use std::f64::consts::{E, PI};

use infoscope_core::binning::{default_m_grid, EULER_GAMMA};
use infoscope_core::synthetic::{exponential, gaussian, uniform};
use infoscope_core::{
    bin_width, build_histogram, cost_scan, differential_entropy, shimazaki_cost, Error,
};

/// Direct O(n^2) Kozachenko–Leonenko estimate.
fn brute_force_entropy(x: &[f64]) -> f64 {
    let n = x.len();
    let sum: f64 = x
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let d = x
                .iter()
                .enumerate()
                .filter(|&(j, &b)| j != i && b != a)
                .map(|(_, &b)| (a - b).abs())
                .fold(f64::INFINITY, f64::min);
            d.log2()
        })
        .sum();
    sum / n as f64 + (2.0 * (n as f64 - 1.0)).log2() + EULER_GAMMA / 2f64.ln()
}

fn mean_over_seeds(f: impl Fn(u64) -> f64) -> f64 {
    (0..5).map(&f).sum::<f64>() / 5.0
}

#[test]
fn entropy_matches_direct_evaluation() {
    for (seed, x) in [gaussian(400, 0.0, 1.0, 3), exponential(400, 2.0, 4)]
        .into_iter()
        .enumerate()
    {
        let fast = differential_entropy(&x).unwrap().h_bits;
        let slow = brute_force_entropy(&x);
        assert!((fast - slow).abs() < 1e-9, "seed {seed}: {fast} vs {slow}");
    }
    let with_ties = [0.0, 0.0, 1.0, 1.0, 1.0, 3.5, 7.0, 7.0];
    assert!(
        (differential_entropy(&with_ties).unwrap().h_bits - brute_force_entropy(&with_ties)).abs()
            < 1e-12
    );
}

type Sampler = fn(u64) -> Vec<f64>;

#[test]
fn entropy_closed_forms() {
    let cases: [(&str, f64, Sampler); 3] = [
        ("uniform", 0.0, |s| uniform(10_000, s)),
        ("gaussian", 0.5 * (2.0 * PI * E).log2(), |s| {
            gaussian(10_000, 0.0, 1.0, s)
        }),
        ("exponential", E.log2(), |s| exponential(10_000, 1.0, s)),
    ];
    for (name, truth, draw) in cases {
        let h = mean_over_seeds(|s| differential_entropy(&draw(s)).unwrap().h_bits);
        assert!((h - truth).abs() < 0.05, "{name}: {h} vs {truth}");
    }
}

#[test]
fn entropy_translation_is_exact_on_a_dyadic_grid() {
    let x: Vec<f64> = uniform(2000, 9)
        .iter()
        .map(|u| (u * 1024.0).floor() / 256.0)
        .collect();
    let shifted: Vec<f64> = x.iter().map(|v| v + 64.0).collect();
    assert_eq!(
        differential_entropy(&x).unwrap().h_bits,
        differential_entropy(&shifted).unwrap().h_bits
    );
}

#[test]
fn entropy_scale_equivariance() {
    let x = gaussian(5000, 0.0, 1.0, 11);
    let h = differential_entropy(&x).unwrap().h_bits;
    for c in [0.01, 3.0, 250.0] {
        let y: Vec<f64> = x.iter().map(|v| v * c).collect();
        let hy = differential_entropy(&y).unwrap().h_bits;
        assert!((hy - h - c.log2()).abs() < 1e-9, "c = {c}");
    }
}

#[test]
fn uniform_width_is_range_over_root_n() {
    for n in [1_000, 10_000] {
        let x = uniform(n, 21);
        let (lo, hi) = x
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        let expected = (hi - lo) / (n as f64).sqrt();
        let w = bin_width(&x, 2.0).unwrap();
        assert!(
            (w / expected - 1.0).abs() < 0.1,
            "n = {n}: {w} vs {expected}"
        );
    }
}

#[test]
fn gaussian_width_at_5000() {
    let expected = 2f64.powf(0.5 * (2.0 * PI * E).log2()) / 5000f64.sqrt();
    let w = bin_width(&gaussian(5000, 0.0, 1.0, 2), 2.0).unwrap();
    assert!((w / expected - 1.0).abs() < 0.1, "{w} vs {expected}");
}

#[test]
fn width_scales_with_data() {
    let x = exponential(3000, 1.0, 5);
    let w = bin_width(&x, 2.0).unwrap();
    let y: Vec<f64> = x.iter().map(|v| v * 8.0).collect();
    assert!((bin_width(&y, 2.0).unwrap() / (w * 8.0) - 1.0).abs() < 1e-12);
}

#[test]
fn histogram_information_content() {
    for (n, target) in [(1024, 5.0), (4096, 6.0), (16_384, 7.0)] {
        for x in [gaussian(n, 0.0, 1.0, 1), exponential(n, 1.0, 1)] {
            let h = build_histogram(&x, 2.0).unwrap();
            assert!(
                (h.discrete_entropy() - target).abs() < 0.3,
                "n = {n}: {}",
                h.discrete_entropy()
            );
        }
    }
    for n in [1_000, 4_000, 16_000] {
        let h = build_histogram(&gaussian(n, 0.0, 1.0, 8), 2.0).unwrap();
        assert!((h.discrete_entropy() - 0.5 * (n as f64).log2()).abs() < 0.3);
    }
}

#[test]
fn histogram_layout() {
    let x = gaussian(2000, 5.0, 2.0, 4);
    let h = build_histogram(&x, 2.0).unwrap();
    let (lo, hi) = x
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert_eq!(h.origin, lo);
    assert_eq!(h.n_bins(), (((hi - lo) / h.width).ceil() as usize).max(1));
    assert_eq!(h.counts.iter().sum::<u64>(), 2000);
    assert!(h.counts[0] > 0);
    assert_eq!(h.bin_of(hi), h.n_bins() - 1);
    assert_eq!(build_histogram(&x, 2.0).unwrap(), h);
}

#[test]
fn histogram_rejects_degenerate_input() {
    assert!(matches!(
        build_histogram(&[3.0; 50], 2.0),
        Err(Error::NoPositiveSpacing)
    ));
    assert!(matches!(
        build_histogram(&uniform(35, 0), 2.0),
        Err(Error::TooFewRows { .. })
    ));
    assert!(build_histogram(&uniform(36, 0), 2.0).is_ok());
    assert!(matches!(
        bin_width(&uniform(100, 0), 1.0),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn cost_of_flat_histogram() {
    // Three values per unit bin over [0, 4].
    let x: Vec<f64> = (0..12)
        .map(|i| (i / 3) as f64 + 0.25 * (i % 3) as f64 + 0.1)
        .collect();
    let lo = x[0];
    let shifted: Vec<f64> = x.iter().map(|v| v - lo).collect();
    let c = shimazaki_cost(&shifted, 1.0).unwrap();
    assert!((c - 6.0).abs() < 1e-12, "{c}");
    assert!(shimazaki_cost(&shifted, 0.0).is_err());
}

#[test]
fn cost_drops_from_m1_to_m2() {
    let x = gaussian(5000, 0.0, 1.0, 6);
    let scan = cost_scan(&x, &default_m_grid()).unwrap();
    assert!(scan[4].raw <= scan[0].raw);
    assert_eq!(scan[4].width, bin_width(&x, 2.0).unwrap());
}

#[test]
fn cost_scan_anchors() {
    let x = exponential(5000, 1.0, 3);
    let scan = cost_scan(&x, &default_m_grid()).unwrap();
    assert_eq!(scan.len(), 21);
    assert_eq!(scan[0].scaled, 1.0);
    assert_eq!(scan[4].m, 2.0);
    assert_eq!(scan[4].scaled, 0.0);
    assert!(cost_scan(&x, &[1.5, 2.0, 3.0]).is_err());
    assert!(cost_scan(&x, &[1.0, 3.0]).is_err());
}
