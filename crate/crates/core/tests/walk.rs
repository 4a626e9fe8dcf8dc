use kcycle::characters::CharacterTable;
use kcycle::mixing::{coset_sign, exact_distribution, CosetUniform};
use kcycle::partitions::CycleType;
use kcycle::walk::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(n: usize, k: usize, t: usize, samples: u64, seed: u64, workers: usize) -> WalkConfig {
    WalkConfig { n, k, t, samples, seed, workers }
}

#[test]
fn empirical_law_converges_to_exact_law() {
    let table = CharacterTable::new(7).unwrap();
    let gen = CycleType::k_cycle(7, 3).unwrap();
    let exact = exact_distribution(&table, &gen, 3).unwrap();
    let mut tvs = Vec::new();
    for samples in [1_000u64, 10_000, 100_000, 1_000_000] {
        let hist = run_walk(&cfg(7, 3, 3, samples, 7, 4)).unwrap();
        assert_eq!(hist.total(), samples);
        assert_eq!(hist.parity_violations(), 0);
        tvs.push(empirical_tv(&hist, &exact).unwrap());
    }
    // noise shrinks like 1/sqrt(samples); allow slack between neighbours
    assert!(tvs[3] < tvs[0] / 4.0, "{tvs:?}");
    assert!(tvs[3] < 0.01, "{tvs:?}");
}

#[test]
fn mixed_and_unmixed_regimes() {
    let gen = CycleType::k_cycle(8, 3).unwrap();
    let late = run_walk(&cfg(8, 3, 11, 200_000, 3, 4)).unwrap();
    let u = CosetUniform::at_step(&gen, 11).as_distribution().unwrap();
    assert!(empirical_tv(&late, &u).unwrap() <= 0.1);

    let early = run_walk(&cfg(8, 3, 1, 200_000, 3, 4)).unwrap();
    let u = CosetUniform::at_step(&gen, 1).as_distribution().unwrap();
    assert!(empirical_tv(&early, &u).unwrap() >= 0.9);
}

#[test]
fn same_seed_and_workers_reproduce() {
    let a = run_walk(&cfg(9, 4, 5, 20_000, 42, 3)).unwrap();
    let b = run_walk(&cfg(9, 4, 5, 20_000, 42, 3)).unwrap();
    assert_eq!(a.entries(), b.entries());
    let c = run_walk(&cfg(9, 4, 5, 20_000, 43, 3)).unwrap();
    assert_ne!(a.entries(), c.entries());
}

#[test]
fn walk_stays_on_its_coset() {
    for k in 2..=6 {
        for t in 0..=4 {
            let hist = run_walk(&cfg(6, k, t, 2_000, 1, 2)).unwrap();
            let sign = coset_sign(&CycleType::k_cycle(6, k).unwrap(), t);
            assert_eq!(hist.parity_violations(), 0);
            for (c, _) in hist.entries() {
                assert_eq!(c.sign(), sign);
            }
        }
    }
}

#[test]
fn config_parses_from_toml_shape() {
    let cfg: WalkConfig = serde_json::from_str(r#"{"n": 8, "k": 3, "t": 4, "samples": 10, "workers": 1}"#).unwrap();
    assert_eq!(cfg.seed, 0);
    assert!(serde_json::from_str::<WalkConfig>(r#"{"n": 8, "k": 3, "t": 4, "samples": 10, "typo": 1}"#).is_err());
    assert!(WalkConfig { k: 1, ..cfg.clone() }.validate().is_err());
    assert!(WalkConfig { samples: 0, ..cfg.clone() }.validate().is_err());
    assert!(WalkConfig { workers: 0, ..cfg }.validate().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_cycles_have_the_right_type(n in 2usize..30, k_off in 0usize..30, seed in any::<u64>()) {
        let k = 2 + k_off % (n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = sample_k_cycle(n, k, &mut rng).unwrap();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        let mut seen = Vec::new();
        let mut cycles = cycle_type_of(&perm, &mut seen);
        cycles.sort_unstable();
        let mut expect = vec![1; n - k];
        expect.push(k);
        prop_assert_eq!(cycles, expect);
    }

    #[test]
    fn histogram_totals_add_up(samples in 1u64..500, workers in 1usize..6, t in 0usize..5) {
        let hist = run_walk(&cfg(6, 3, t, samples, 9, workers)).unwrap();
        prop_assert_eq!(hist.total(), samples);
        let sum: u64 = hist.entries().iter().map(|(_, c)| c).sum();
        prop_assert_eq!(sum, samples);
        let freq: f64 = hist.entries().iter().map(|(c, _)| hist.frequency(c)).sum();
        prop_assert!((freq - 1.0).abs() < 1e-9);
    }
}
