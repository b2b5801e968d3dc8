use edist_core::exact::{
    ed, edd, edd_banded, edd_certified, edd_via_lcs, extract_alignment, lcs, lcs_dp,
};
use proptest::prelude::*;

/// Full-table Levenshtein, written independently of the rolling-row version.
fn ed_table(x: &[u32], y: &[u32]) -> usize {
    let mut t = vec![vec![0usize; y.len() + 1]; x.len() + 1];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=y.len() {
        t[0][j] = j;
    }
    for i in 1..=x.len() {
        for j in 1..=y.len() {
            let sub = t[i - 1][j - 1] + usize::from(x[i - 1] != y[j - 1]);
            t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
        }
    }
    t[x.len()][y.len()]
}

/// Exponential LCS by recursion on prefixes; only for very short strings.
fn lcs_naive(x: &[u32], y: &[u32]) -> usize {
    match (x.split_last(), y.split_last()) {
        (Some((a, xs)), Some((b, ys))) => {
            if a == b {
                lcs_naive(xs, ys) + 1
            } else {
                lcs_naive(xs, y).max(lcs_naive(x, ys))
            }
        }
        _ => 0,
    }
}

fn text(max_len: usize, sigma: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..sigma, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn ed_matches_full_table(x in text(40, 4), y in text(40, 4)) {
        prop_assert_eq!(ed(&x, &y), ed_table(&x, &y));
    }

    #[test]
    fn lcs_forms_agree(x in text(150, 3), y in text(150, 3)) {
        let l = lcs_dp(&x, &y);
        prop_assert_eq!(lcs(&x, &y), l);
        prop_assert!(l <= x.len().min(y.len()));
    }

    #[test]
    fn lcs_matches_naive(x in text(9, 3), y in text(9, 3)) {
        prop_assert_eq!(lcs_dp(&x, &y), lcs_naive(&x, &y));
    }

    #[test]
    fn indel_identity_and_sandwich(x in text(60, 4), y in text(60, 4)) {
        let d = edd(&x, &y);
        prop_assert_eq!(d, x.len() + y.len() - 2 * lcs(&x, &y));
        prop_assert_eq!(d, edd_via_lcs(&x, &y));
        let e = ed(&x, &y);
        prop_assert!(e <= d && d <= 2 * e);
    }

    #[test]
    fn ed_metric(x in text(25, 3), y in text(25, 3), z in text(25, 3)) {
        prop_assert_eq!(ed(&x, &y), ed(&y, &x));
        prop_assert_eq!(ed(&x, &y) == 0, x == y);
        prop_assert!(ed(&x, &z) <= ed(&x, &y) + ed(&y, &z));
    }

    #[test]
    fn alignment_is_maximum_and_valid(x in text(50, 3), y in text(50, 3)) {
        let a = extract_alignment(&x, &y);
        prop_assert!(a.is_valid_for(&x, &y));
        prop_assert_eq!(a.len(), lcs(&x, &y));
    }

    #[test]
    fn banded_is_exact_when_certified(x in text(80, 2), y in text(80, 2), band in 0usize..40) {
        let d = edd(&x, &y);
        if let Some(v) = edd_banded(&x, &y, band) {
            prop_assert!(v >= d);
            if v <= band {
                prop_assert_eq!(v, d);
            }
        }
        prop_assert_eq!(edd_certified(&x, &y).0, d);
    }
}

#[test]
fn long_inputs_agree() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let x: Vec<u32> = (0..3000).map(|_| rng.gen_range(0..4)).collect();
    let mut y = x.clone();
    for _ in 0..200 {
        let i = rng.gen_range(0..y.len());
        y[i] = rng.gen_range(0..4);
    }
    y.drain(100..140);
    let d = edd(&x, &y);
    assert_eq!(d, edd_via_lcs(&x, &y));
    let (c, band) = edd_certified(&x, &y);
    assert_eq!(c, d);
    assert!(band < 3000);
}
