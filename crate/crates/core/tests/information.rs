use rand::seq::SliceRandom;
use rand::Rng;

use infoscope_core::synthetic::{gaussian, rng};
use infoscope_core::{
    discrete_entropy, interaction_information, joint_entropy, mutual_information, similarity_index,
    BinnedVariable, Error,
};

fn bits(n: usize, seed: u64) -> Vec<u32> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random_range(0..2)).collect()
}

fn var(name: &str, codes: Vec<u32>) -> BinnedVariable {
    BinnedVariable::from_codes(name, codes)
}

/// Plug-in entropy from a hand-rolled frequency table.
fn oracle_entropy(rows: &[Vec<u32>]) -> f64 {
    let mut counts = std::collections::BTreeMap::new();
    for r in rows {
        *counts.entry(r.clone()).or_insert(0usize) += 1;
    }
    let n = rows.len() as f64;
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[test]
fn entropy_of_counts() {
    assert_eq!(discrete_entropy(&[17]).unwrap(), 0.0);
    assert!((discrete_entropy(&[5; 8]).unwrap() - 3.0).abs() < 1e-12);
    assert!((discrete_entropy(&[1, 1, 2]).unwrap() - 1.5).abs() < 1e-12);
    assert!((discrete_entropy(&[0, 3, 0, 3]).unwrap() - 1.0).abs() < 1e-12);
    assert!(discrete_entropy(&[0, 0]).is_err());
    for k in [3u64, 7, 100, 1000] {
        let h = discrete_entropy(&vec![4; k as usize]).unwrap();
        assert!((h - (k as f64).log2()).abs() < 1e-12, "k = {k}");
    }
}

#[test]
fn joint_entropy_matches_frequency_table() {
    let a = bits(3000, 1);
    let b: Vec<u32> = {
        let mut r = rng(2);
        (0..3000).map(|_| r.random_range(0..5)).collect()
    };
    let c: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % 3).collect();
    let (va, vb, vc) = (
        var("a", a.clone()),
        var("b", b.clone()),
        var("c", c.clone()),
    );
    let rows: Vec<Vec<u32>> = (0..3000).map(|i| vec![a[i], b[i], c[i]]).collect();
    assert!((joint_entropy(&[&va, &vb, &vc]).unwrap() - oracle_entropy(&rows)).abs() < 1e-12);
    let pairs: Vec<Vec<u32>> = rows.iter().map(|r| vec![r[0], r[2]]).collect();
    assert!((joint_entropy(&[&va, &vc]).unwrap() - oracle_entropy(&pairs)).abs() < 1e-12);
}

#[test]
fn joint_entropy_identities() {
    let x = var("x", bits(5000, 3));
    assert_eq!(joint_entropy(&[&x, &x]).unwrap(), x.entropy());
    assert_eq!(joint_entropy(&[&x, &x, &x]).unwrap(), x.entropy());
    let y = var("y", bits(20_000, 4));
    let z = var("z", bits(20_000, 5));
    assert!((joint_entropy(&[&y, &z]).unwrap() - 2.0).abs() < 0.01);
    let short = var("s", vec![0, 1]);
    assert!(matches!(
        joint_entropy(&[&x, &short]),
        Err(Error::LengthMismatch(..))
    ));
}

#[test]
fn mutual_information_identities() {
    let x = var("x", bits(4000, 6));
    let mi = mutual_information(&x, &x).unwrap();
    assert_eq!(mi.bits, x.entropy());
    // A noiseless channel: y = x XOR 0 under a relabeling.
    let y = var("y", x.codes.iter().map(|c| 1 - c).collect());
    assert!((mutual_information(&x, &y).unwrap().bits - x.entropy()).abs() < 1e-12);
    assert_eq!(similarity_index(&x, &y).unwrap(), 1.0);
}

#[test]
fn independent_bits_match_permutation_null() {
    let x = var("x", bits(10_000, 7));
    let y = var("y", bits(10_000, 8));
    let observed = mutual_information(&x, &y).unwrap().raw;
    assert!(observed < 0.01);
    let mut r = rng(99);
    let mut null = Vec::new();
    for _ in 0..200 {
        let mut shuffled = y.codes.clone();
        shuffled.shuffle(&mut r);
        null.push(mutual_information(&x, &var("s", shuffled)).unwrap().raw);
    }
    null.sort_by(f64::total_cmp);
    assert!(
        observed <= null[199],
        "{observed} above every permuted value"
    );
}

#[test]
fn si_of_independent_bits() {
    let x = var("x", bits(10_000, 14));
    let y = var("y", bits(10_000, 15));
    let si = similarity_index(&x, &y).unwrap();
    assert!(si < 0.02, "{si}");
    assert_eq!(si, similarity_index(&y, &x).unwrap());
}

#[test]
fn si_of_independent_continuous_variables_matches_permutation_null() {
    let a = gaussian(10_000, 0.0, 1.0, 12);
    let b = gaussian(10_000, 3.0, 0.2, 13);
    let (x, _) = BinnedVariable::from_continuous("a", &a, 2.0).unwrap();
    let (y, _) = BinnedVariable::from_continuous("b", &b, 2.0).unwrap();
    let si = similarity_index(&x, &y).unwrap();
    assert_eq!(si, similarity_index(&y, &x).unwrap());
    assert_eq!(similarity_index(&x, &x).unwrap(), 1.0);
    let mut r = rng(77);
    let null: Vec<f64> = (0..100)
        .map(|_| {
            let mut codes = y.codes.clone();
            codes.shuffle(&mut r);
            similarity_index(&x, &var("s", codes)).unwrap()
        })
        .collect();
    let mean = null.iter().sum::<f64>() / 100.0;
    let sd = (null.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 99.0).sqrt();
    assert!((si - mean).abs() < 4.0 * sd, "{si} vs null {mean} +- {sd}");
}

#[test]
fn si_requires_entropy() {
    let x = var("x", bits(100, 1));
    let c = var("c", vec![0; 100]);
    assert!(matches!(
        similarity_index(&x, &c),
        Err(Error::ZeroEntropy(_))
    ));
}

#[test]
fn interaction_information_truth_tables() {
    let xor_a = var("a", vec![0, 0, 1, 1]);
    let xor_b = var("b", vec![0, 1, 0, 1]);
    let xor_c = var("c", vec![0, 1, 1, 0]);
    assert!((interaction_information(&xor_a, &xor_b, &xor_c).unwrap() + 1.0).abs() < 1e-12);
    let same = var("s", vec![0, 1, 0, 1]);
    assert!((interaction_information(&same, &same, &same).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn interaction_information_sampled() {
    let n = 10_000;
    let a = bits(n, 20);
    let b = bits(n, 21);
    let c: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
    let (va, vb, vc) = (var("a", a.clone()), var("b", b), var("c", c));
    assert!((interaction_information(&va, &vb, &vc).unwrap() + 1.0).abs() < 0.05);
    let vd = var("d", bits(n, 22));
    let ve = var("e", bits(n, 23));
    assert!(interaction_information(&va, &vd, &ve).unwrap().abs() < 0.02);
    let va2 = var("a2", a.clone());
    let va3 = var("a3", a);
    assert!((interaction_information(&va, &va2, &va3).unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn interaction_information_is_symmetric() {
    let n = 5000;
    let mut r = rng(30);
    let a: Vec<u32> = (0..n).map(|_| r.random_range(0..4)).collect();
    let b: Vec<u32> = a.iter().map(|x| (x + r.random_range(0..2)) % 5).collect();
    let c: Vec<u32> = (0..n)
        .map(|i| (a[i] * b[i] + r.random_range(0..3)) % 7)
        .collect();
    let vs = [var("a", a), var("b", b), var("c", c)];
    let reference = interaction_information(&vs[0], &vs[1], &vs[2]).unwrap();
    for [i, j, k] in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        assert_eq!(
            interaction_information(&vs[i], &vs[j], &vs[k]).unwrap(),
            reference
        );
    }
}
