use edist_core::estimation::Constants;
use edist_core::etree::TreeParams;
use edist_core::rng;
use edist_core::sampling::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn uniform_sampler_is_an_approximator() {
    let s = UniformSampler { b: 1024, zeta: 1.0, eps: 0.5, delta: 0.05 };
    for w in [1.0, 4.0, 16.0] {
        let mut ok = 0;
        for seed in 0..300 {
            let mut r = rng::stream(seed, &[w as u64]);
            let a: Vec<f64> = (0..s.b).map(|_| r.gen_range(0.0..1.0 / s.b as f64)).collect();
            let sum: f64 = a.iter().sum();
            let kept = s.subsample(w, &mut r);
            let est = s.estimate(&a, w, &kept);
            let f = s.eps.exp();
            ok += usize::from(est >= sum / f - 1.0 / w && est <= f * sum + 1.0 / w);
        }
        assert!(ok >= 285, "w = {w}: {ok}/300");
    }
}

#[test]
fn full_probability_keeps_everything() {
    let s = UniformSampler { b: 8, zeta: 1.0, eps: 0.5, delta: 0.05 };
    assert_eq!(s.probability(100.0), 1.0);
    let kept = s.subsample(100.0, &mut rng::stream(1, &[]));
    assert_eq!(kept, (0..8).collect::<Vec<_>>());
}

#[test]
fn precision_mean_matches_monte_carlo() {
    let d = PrecisionDist::new(64.0, 1.0, 0.5, 0.05, 0.05).unwrap();
    let mut r = rng::stream(2, &[]);
    let m = 200_000;
    let draws: Vec<f64> = (0..m).map(|_| d.sample(&mut r)).collect();
    // heavy tail: compare medians of the exact CDF and the sample, and the mean loosely
    let mut sorted = draws.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[m / 2];
    assert!((d.single_cdf(median).powi(d.k as i32) - 0.5).abs() < 0.01);
    let mc = draws.iter().sum::<f64>() / m as f64;
    let exact = d.mean();
    assert!((mc / exact - 1.0).abs() < 0.25, "{mc} vs {exact}");
    assert!(draws.iter().all(|&w| (1.0..=d.upper()).contains(&w)));
}

#[test]
fn tree_is_deterministic_and_seed_sensitive() {
    let p = Constants::DESK.apply(TreeParams::new(4096, 16).unwrap()).with_beta(4.0);
    let a = build_sample_tree(&p.clone().with_seed(5)).unwrap();
    assert_eq!(a, build_sample_tree(&p.clone().with_seed(5)).unwrap());
    assert_ne!(a.query_set(), build_sample_tree(&p.with_seed(6)).unwrap().query_set());
}

#[test]
fn query_set_is_inside_range() {
    let p = Constants::DESK.apply(TreeParams::new(1 << 12, 8).unwrap()).with_beta(8.0).with_seed(3);
    let t = build_sample_tree(&p).unwrap();
    let q = t.query_set();
    assert_eq!(q.len(), t.query_count());
    assert!(q.windows(2).all(|w| w[0] < w[1]));
    assert!(q.iter().all(|&i| (1..=p.n).contains(&i)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn text_format_roundtrips(seed in any::<u64>(), beta in 2.0f64..64.0, b in prop::sample::select(vec![2usize, 4, 8])) {
        let p = Constants::DESK.apply(TreeParams::new(b.pow(4), b).unwrap()).with_beta(beta).with_seed(seed);
        let t = build_sample_tree(&p).unwrap();
        let back = SampleTree::from_text(t.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn quantile_is_monotone(u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let d = PrecisionDist::new(256.0, 1.0, 0.5, 0.01, 0.1).unwrap();
        let (lo, hi) = (u.min(v), u.max(v));
        prop_assert!(d.quantile(lo) <= d.quantile(hi));
    }
}
