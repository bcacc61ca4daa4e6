use proptest::prelude::*;
use slanglex::stats::{normal_cdf, two_proportion_ztest, weighted_f1, ConfusionMatrix};
use statrs::distribution::{ContinuousCDF, Normal};

#[test]
fn normal_cdf_against_statrs() {
    let n = Normal::new(0.0, 1.0).unwrap();
    for i in -1000..=1000 {
        let x = i as f64 / 100.0;
        assert!((normal_cdf(x) - n.cdf(x)).abs() < 1e-7, "x = {x}");
    }
}

#[test]
fn worked_ztest() {
    let r = two_proportion_ztest(50, 100, 30, 100, 0.05, 8).unwrap();
    let z = 0.2 / (0.4f64 * 0.6 * 0.02).sqrt();
    let p = 2.0 * (1.0 - Normal::new(0.0, 1.0).unwrap().cdf(z));
    assert!((r.z - z).abs() < 1e-9);
    assert!((r.p_value - p).abs() < 1e-9);
    assert!(r.significant);
    assert!(two_proportion_ztest(0, 10, 0, 20, 0.05, 1).is_err());
}

proptest! {
    #[test]
    fn weighted_f1_ignores_instance_order(
        pairs in prop::collection::vec((0u8..4, 0u8..4), 1..40),
        seed in any::<u64>(),
    ) {
        let truth: Vec<u8> = pairs.iter().map(|p| p.0).collect();
        let pred: Vec<u8> = pairs.iter().map(|p| p.1).collect();
        let f = weighted_f1(&truth, &pred).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));

        let mut order: Vec<usize> = (0..pairs.len()).collect();
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let t2: Vec<u8> = order.iter().map(|&i| truth[i]).collect();
        let p2: Vec<u8> = order.iter().map(|&i| pred[i]).collect();
        prop_assert!((weighted_f1(&t2, &p2).unwrap() - f).abs() < 1e-12);
    }

    #[test]
    fn confusion_rows_are_supports(pairs in prop::collection::vec((0u8..4, 0u8..4), 1..40)) {
        let truth: Vec<u8> = pairs.iter().map(|p| p.0).collect();
        let pred: Vec<u8> = pairs.iter().map(|p| p.1).collect();
        let cm = ConfusionMatrix::from_pairs(&truth, &pred, &[0, 1, 2, 3]).unwrap();
        for (i, row) in cm.counts().iter().enumerate() {
            let support = truth.iter().filter(|&&t| t as usize == i).count() as u64;
            prop_assert_eq!(row.iter().sum::<u64>(), support);
        }
        prop_assert_eq!(cm.total(), pairs.len() as u64);
    }

    #[test]
    fn ztest_swap_negates_z(x1 in 0u64..50, e1 in 1u64..50, x2 in 0u64..50, e2 in 1u64..50) {
        let (n1, n2) = (x1 + e1, x2 + e2);
        prop_assume!(x1 + x2 > 0);
        let a = two_proportion_ztest(x1, n1, x2, n2, 0.05, 1).unwrap();
        let b = two_proportion_ztest(x2, n2, x1, n1, 0.05, 1).unwrap();
        prop_assert!((a.z + b.z).abs() < 1e-12);
        prop_assert!((a.p_value - b.p_value).abs() < 1e-12);
    }
}
