use proptest::prelude::*;

use infoscope_core::{
    build_histogram, cdr, differential_entropy, interaction_information, mutual_information,
    similarity_index, standardize, BinnedVariable, Dataset, VariableMeta,
};

fn codes(n: usize, alphabet: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..alphabet, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_counts_cover_every_value(values in prop::collection::vec(-1e3f64..1e3, 36..400), m in 1.1f64..5.0) {
        prop_assume!(values.iter().any(|&v| v != values[0]));
        let h = build_histogram(&values, m).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<u64>(), values.len() as u64);
        prop_assert!(h.width > 0.0);
        for &v in &values {
            prop_assert!(h.bin_of(v) < h.n_bins());
        }
        prop_assert_eq!(build_histogram(&values, m).unwrap(), h);
    }

    #[test]
    fn entropy_is_finite(values in prop::collection::vec(-50f64..50.0, 2..200)) {
        prop_assume!(values.iter().any(|&v| v != values[0]));
        prop_assert!(differential_entropy(&values).unwrap().h_bits.is_finite());
    }

    #[test]
    fn mutual_information_symmetric_and_bounded(x in codes(300, 6), y in codes(300, 4)) {
        let (x, y) = (BinnedVariable::from_codes("x", x), BinnedVariable::from_codes("y", y));
        let xy = mutual_information(&x, &y).unwrap();
        prop_assert_eq!(xy, mutual_information(&y, &x).unwrap());
        prop_assert!(xy.bits >= 0.0);
        prop_assert!(xy.bits <= x.entropy().min(y.entropy()) + 1e-12);
        if x.entropy() > 0.0 && y.entropy() > 0.0 {
            let si = similarity_index(&x, &y).unwrap();
            prop_assert!((0.0..=1.0).contains(&si));
            prop_assert_eq!(si, similarity_index(&y, &x).unwrap());
        }
    }

    #[test]
    fn relabeling_codes_changes_nothing(x in codes(200, 5), y in codes(200, 5), z in codes(200, 3), shift in 1u32..5) {
        let relabel: Vec<u32> = x.iter().map(|c| (c + shift) % 5).collect();
        let (bx, by, bz) = (
            BinnedVariable::from_codes("x", x),
            BinnedVariable::from_codes("y", y),
            BinnedVariable::from_codes("z", z),
        );
        let br = BinnedVariable::from_codes("x", relabel);
        prop_assert_eq!(bx.entropy(), br.entropy());
        prop_assert_eq!(mutual_information(&bx, &by).unwrap(), mutual_information(&br, &by).unwrap());
        prop_assert_eq!(
            interaction_information(&bx, &by, &bz).unwrap(),
            interaction_information(&br, &by, &bz).unwrap()
        );
    }

    #[test]
    fn interaction_information_permutation_invariant(a in codes(150, 3), b in codes(150, 3), c in codes(150, 2)) {
        let v = [
            BinnedVariable::from_codes("a", a),
            BinnedVariable::from_codes("b", b),
            BinnedVariable::from_codes("c", c),
        ];
        let base = interaction_information(&v[0], &v[1], &v[2]).unwrap();
        for [i, j, k] in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            prop_assert_eq!(interaction_information(&v[i], &v[j], &v[k]).unwrap(), base);
        }
    }

    #[test]
    fn cdr_is_dominated(a in -5f64..50.0, b in -5f64..50.0) {
        let r = cdr(a, b);
        prop_assert_eq!(r, cdr(b, a));
        prop_assert!(r >= 0.0);
        if a > 0.0 && b > 0.0 {
            prop_assert!(r <= a.min(b));
            prop_assert!(r <= a.max(b) / 2.0);
        }
    }

    #[test]
    fn standardize_inverts(cols in prop::collection::vec(prop::collection::vec(-1e4f64..1e4, 10), 1..4)) {
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        prop_assume!(cols.iter().all(|c| c.iter().any(|&v| v != c[0])));
        let (z, t) = standardize(&refs).unwrap();
        for col in &z {
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((sd - 1.0).abs() < 1e-9);
        }
        for (orig, back) in cols.iter().zip(t.invert(&z)) {
            for (a, b) in orig.iter().zip(back) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn class_partition_counts_sum(labels in prop::collection::vec(0u8..3, 6..60)) {
        let metas = vec![
            VariableMeta::continuous("x", 0),
            VariableMeta::categorical("c", 1, vec!["a".into(), "b".into(), "c".into()]),
        ];
        let x: Vec<f64> = (0..labels.len()).map(|i| i as f64).collect();
        let c: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
        let d = Dataset::new(metas, vec![x, c], Some(1)).unwrap();
        if let Ok(p) = d.partition_by_class() {
            prop_assert_eq!(p.counts.iter().sum::<usize>(), labels.len());
        }
    }
}
