//! Named invariant suites, runnable from the command line.
//!
//! Each suite sweeps a small exhaustive grid and counts individual checks.
//! `n_max` overrides the suite's default size where one applies.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::asymptotics::{
    first_row_deficit, frobenius_power_sum, main_term_part_a, main_term_part_c, mt_bound_holds, mt_lemma_applies,
    part_b_applies, power_sum_bound, ratio_inequality_check, AsymptoticConfig, PowerSumBound,
};
use crate::characters::{
    char_general, char_ratio_kcycle, dimension, dimension_hook_oracle, small_char, CharacterTable, GeneralBudget,
    SmallRep,
};
use crate::error::{Error, Result};
use crate::mixing::{
    coset_sign, exact_distribution, exact_tv, fourier_coefficients, moments_fixed_points, moments_from_distribution,
    tv_lower_bound, tv_upper_bound_squared, CosetUniform,
};
use crate::partitions::{classes, factorial, partition_list, CycleType, Partition};
use crate::walk::{run_walk, WalkConfig};

/// Suite names accepted by [`run_suite`].
pub const SUITES: &[&str] = &[
    "partitions",
    "oracle-equivalence",
    "dimensions",
    "orthogonality",
    "small-characters",
    "part-a-exactness",
    "mt-bound",
    "power-sum",
    "part-b",
    "part-c",
    "ratio-inequality",
    "distribution",
    "tv-sandwich",
    "moments",
    "plancherel",
    "coset-fourier",
    "walk-parity",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: u64,
    pub failed: u64,
    /// The first few failing cases, for diagnosis.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), passed: 0, failed: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.passed += other.passed;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < 10 {
                self.failures.push(f);
            }
        }
    }
}

/// Runs the named suite. Unknown names are a [`Error::Parse`].
pub fn run_suite(name: &str, n_max: Option<usize>) -> Result<SuiteReport> {
    let cfg = AsymptoticConfig::default();
    match name {
        "partitions" => partitions_suite(n_max.unwrap_or(20)),
        "oracle-equivalence" => oracle_suite(n_max.unwrap_or(10)),
        "dimensions" => dimensions_suite(n_max.unwrap_or(14)),
        "orthogonality" => orthogonality_suite(n_max.unwrap_or(10)),
        "small-characters" => small_suite(n_max.unwrap_or(10)),
        "part-a-exactness" => part_a_suite(n_max.unwrap_or(12)),
        "mt-bound" => mt_suite(n_max.unwrap_or(14)),
        "power-sum" => power_sum_suite(n_max.unwrap_or(14)),
        "part-b" => part_b_suite(n_max.unwrap_or(14), &cfg),
        "part-c" => part_c_suite(&cfg),
        "ratio-inequality" => ratio_inequality_suite(n_max, &cfg),
        "distribution" => distribution_suite(n_max.unwrap_or(8)),
        "tv-sandwich" => tv_suite(n_max.unwrap_or(10)),
        "moments" => moments_suite(),
        "plancherel" => plancherel_suite(n_max.unwrap_or(8)),
        "coset-fourier" => coset_suite(n_max.unwrap_or(8)),
        "walk-parity" => walk_suite(),
        _ => Err(Error::Parse(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))),
    }
}

/// Partition counts by Euler's pentagonal recurrence.
pub fn partition_counts(max: usize) -> Vec<BigUint> {
    let mut p = vec![BigInt::zero(); max + 1];
    p[0] = BigInt::one();
    for m in 1..=max {
        let mut acc = BigInt::zero();
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += &p[m - g1] * sign;
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= m {
                acc += &p[m - g2] * sign;
            }
        }
        p[m] = acc;
    }
    p.into_iter().map(|x| x.to_biguint().expect("partition counts are positive")).collect()
}

fn is_one_dimensional(lambda: &Partition) -> bool {
    lambda.len() == 1 || lambda.first() == 1
}

fn partitions_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("partitions");
    let counts = partition_counts(n_max);
    for (n, count) in counts.iter().enumerate().skip(1) {
        let all = partition_list(n)?;
        rep.check(BigUint::from(all.len()) == *count, || format!("p({n})"));
        for lambda in &all {
            let fc = lambda.to_frobenius();
            rep.check(Partition::from_frobenius(&fc) == *lambda, || format!("frobenius round trip {lambda}"));
            rep.check(fc.mass() == n, || format!("Σa + Σb for {lambda}"));
            rep.check(fc.m() * fc.m() <= n, || format!("m <= √n for {lambda}"));
            rep.check(lambda.conjugate().conjugate() == *lambda, || format!("conjugate involution {lambda}"));
        }
        if n <= 12 {
            let total: BigUint = classes(n)?.iter().map(|c| c.class_size()).sum();
            rep.check(total == factorial(n), || format!("class sizes at n = {n}"));
        }
    }
    Ok(rep)
}

fn oracle_suite(n_max: usize) -> Result<SuiteReport> {
    let reports = (2..=n_max.max(2))
        .into_par_iter()
        .map(|n| {
            let mut rep = SuiteReport::new("oracle-equivalence");
            let table = CharacterTable::new(n)?;
            for (i, lambda) in table.irreps().iter().enumerate() {
                for (j, rho) in table.classes().iter().enumerate() {
                    let g = char_general(lambda, rho, GeneralBudget::default())?;
                    rep.check(&g == table.value(i, j), || format!("general vs MN at {lambda}, {rho}"));
                }
                for k in 2..=n {
                    let c = table.class_index(&CycleType::k_cycle(n, k)?).expect("k-cycle class");
                    let r = char_ratio_kcycle(lambda, k)?.into_inner()
                        * BigRational::from_integer(BigInt::from(table.dims()[i].clone()));
                    rep.check(r == BigRational::from_integer(table.value(i, c).clone()), || {
                        format!("residue vs MN at {lambda}, k = {k}")
                    });
                }
            }
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = SuiteReport::new("oracle-equivalence");
    reports.into_iter().for_each(|r| rep.absorb(r));
    Ok(rep)
}

fn dimensions_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("dimensions");
    for n in 1..=n_max {
        let mut total = BigUint::zero();
        for lambda in partition_list(n)? {
            let f = dimension(&lambda);
            rep.check(f == dimension_hook_oracle(&lambda), || format!("hook formula at {lambda}"));
            let r = n - lambda.first();
            let binom = factorial(n) / (factorial(r) * factorial(lambda.first()));
            rep.check(&f * &f <= &binom * &binom * factorial(r), || format!("Diaconis–Shahshahani at {lambda}"));
            total += &f * &f;
        }
        rep.check(total == factorial(n), || format!("Σ f² = n! at n = {n}"));
    }
    Ok(rep)
}

fn orthogonality_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("orthogonality");
    for n in 1..=n_max {
        let t = CharacterTable::new(n)?;
        let rows = t.irreps().len();
        let nfact = BigInt::from(factorial(n));
        for a in 0..rows {
            for b in a..rows {
                let s: BigInt = t
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| t.value(a, j) * t.value(b, j) * BigInt::from(c.class_size()))
                    .sum();
                let expect = if a == b { nfact.clone() } else { BigInt::zero() };
                rep.check(s == expect, || format!("row orthogonality n = {n}, rows {a}, {b}"));
            }
            let dual = t.irrep_index(&t.irreps()[a].conjugate()).expect("conjugate is a partition");
            let twisted = t.classes().iter().enumerate().all(|(j, c)| t.value(dual, j) == &(t.value(a, j) * c.sign()));
            rep.check(twisted, || format!("sign twist at {}", t.irreps()[a]));
        }
    }
    Ok(rep)
}

fn small_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("small-characters");
    for n in 5..=n_max {
        let t = CharacterTable::new(n)?;
        let row = |s: SmallRep| t.irrep_index(&s.partition(n).expect("n >= 5")).expect("in table");
        let (st, hook, two) = (row(SmallRep::Standard), row(SmallRep::HookTwo), row(SmallRep::TwoRow));
        for (j, rho) in t.classes().iter().enumerate() {
            for (s, i) in [(SmallRep::Standard, st), (SmallRep::HookTwo, hook), (SmallRep::TwoRow, two)] {
                rep.check(&small_char(s, rho)? == t.value(i, j), || format!("{s} at {rho}"));
            }
            let sq = t.value(st, j) * t.value(st, j);
            let sum = t.value(0, j) + t.value(st, j) + t.value(hook, j) + t.value(two, j);
            rep.check(sq == sum, || format!("tensor square at {rho}"));
        }
    }
    Ok(rep)
}

fn part_a_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("part-a-exactness");
    for n in 2..=n_max {
        for lambda in partition_list(n)? {
            let r = first_row_deficit(&lambda);
            for k in 2..=n {
                if r < k && mt_lemma_applies(n, k, r) {
                    let mt = main_term_part_a(&lambda, k)?;
                    rep.check(mt == char_ratio_kcycle(&lambda, k)?, || format!("MT = ratio at {lambda}, k = {k}"));
                }
            }
        }
    }
    Ok(rep)
}

fn mt_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("mt-bound");
    for n in 2..=n_max {
        for lambda in partition_list(n)? {
            let r = first_row_deficit(&lambda);
            for k in 2..=n {
                if mt_lemma_applies(n, k, r) {
                    rep.check(mt_bound_holds(&lambda, k)?, || format!("MT ≤ e^(-kr/n) at {lambda}, k = {k}"));
                }
            }
        }
    }
    Ok(rep)
}

fn power_sum_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("power-sum");
    for n in 2..=n_max {
        for lambda in partition_list(n)? {
            let fc = lambda.to_frobenius();
            if fc.a_doubled()[0] < fc.b_doubled()[0] {
                continue;
            }
            let r = first_row_deficit(&lambda);
            for k in 2..=n {
                let sum = frobenius_power_sum(&lambda, k);
                let sharp = power_sum_bound(n, k, r, PowerSumBound::Sharp)?.exp();
                rep.check(sum <= sharp * (1.0 + 1e-12), || format!("power sum at {lambda}, k = {k}"));
            }
        }
    }
    Ok(rep)
}

/// Part b's `k`-window is empty for `n ≤ 14`; the checks here use the
/// widened window `log n ≤ k ≤ 0.45 n`.
pub fn forced_part_b_config(cfg: &AsymptoticConfig) -> AsymptoticConfig {
    AsymptoticConfig { k_switch_factor: 1.0, delta: 0.45, ..cfg.clone() }
}

fn part_b_suite(n_max: usize, cfg: &AsymptoticConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("part-b");
    let forced = forced_part_b_config(cfg);
    for n in 2..=n_max {
        for lambda in partition_list(n)? {
            let fc = lambda.to_frobenius();
            for k in 2..=n {
                if part_b_applies(n, k, fc.a_doubled()[0], fc.b_doubled()[0], &forced) {
                    let r = char_ratio_kcycle(&lambda, k)?.ln_abs();
                    rep.check(r <= -(k as f64) / 2.0, || format!("|ratio| ≤ e^(-k/2) at {lambda}, k = {k}"));
                }
            }
        }
    }
    Ok(rep)
}

/// Relative error of part c's main term along `(n - 10, 10)`, `k = 2`.
pub fn part_c_relative_errors(sizes: &[usize], cfg: &AsymptoticConfig) -> Result<Vec<f64>> {
    sizes
        .iter()
        .map(|&n| {
            let lambda = Partition::new(vec![n - 10, 10])?;
            let est = main_term_part_c(&lambda, 2, cfg)?;
            let exact = char_ratio_kcycle(&lambda, 2)?.to_f64();
            Ok((est.estimate.main_term() - exact).abs() / exact.abs())
        })
        .collect()
}

fn part_c_suite(cfg: &AsymptoticConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("part-c");
    let errs = part_c_relative_errors(&[100, 200, 400], cfg)?;
    for w in errs.windows(2) {
        rep.check(w[1] < w[0], || format!("relative error {} then {}", w[0], w[1]));
    }
    rep.check(errs.iter().all(|e| e.is_finite()), || "finite relative errors".into());
    Ok(rep)
}

fn ratio_inequality_suite(n_max: Option<usize>, cfg: &AsymptoticConfig) -> Result<SuiteReport> {
    let sizes: Vec<usize> = match n_max {
        Some(m) => (4..=m).step_by(2).collect(),
        None => vec![8, 10, 12],
    };
    let mut rep = SuiteReport::new("ratio-inequality");
    for n in sizes {
        for lambda in partition_list(n)?.into_iter().filter(|l| !is_one_dimensional(l)) {
            for k in 2..n {
                let ok = ratio_inequality_check(&lambda, k, cfg.c1)?;
                rep.check(ok, || format!("ratio bound at {lambda}, k = {k}, c = {}", cfg.c1));
            }
        }
    }
    Ok(rep)
}

fn distribution_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("distribution");
    for n in 2..=n_max {
        let table = CharacterTable::new(n)?;
        for c in table.classes().iter().filter(|c| c.nontrivial_total() > 0) {
            for t in 0..=20 {
                let d = exact_distribution(&table, c, t)?;
                rep.check(d.is_probability(), || format!("sums to 1 at n = {n}, C = {c}, t = {t}"));
                rep.check(d.supported_on_sign(coset_sign(c, t)), || format!("coset support at {c}, t = {t}"));
            }
        }
    }
    Ok(rep)
}

fn tv_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tv-sandwich");
    for n in 2..=n_max {
        let table = CharacterTable::new(n)?;
        for k in 2..=n {
            let c = CycleType::k_cycle(n, k)?;
            let mut last: Option<BigRational> = None;
            for t in 0..=20 {
                let tv = exact_tv(&table, &c, t)?;
                let up_sq = tv_upper_bound_squared(&table, &c, t)?;
                rep.check(&tv * &tv <= up_sq, || format!("upper bound at n = {n}, k = {k}, t = {t}"));
                if n >= 5 {
                    let lo = tv_lower_bound(n, k, c.two_cycles(), t)?;
                    rep.check(lo <= arith::to_f64(&tv) + 1e-12, || format!("lower bound at n = {n}, k = {k}, t = {t}"));
                }
                if let Some(prev) = &last {
                    rep.check(&tv <= prev, || format!("contraction at n = {n}, k = {k}, t = {t}"));
                }
                last = Some(tv);
            }
        }
    }
    Ok(rep)
}

fn moments_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("moments");
    for n in [6usize, 8] {
        let table = CharacterTable::new(n)?;
        for c in table.classes().iter().filter(|c| [2, 3, 4].contains(&c.nontrivial_total())) {
            for t in 0..=6 {
                let formula = moments_fixed_points(n, c.nontrivial_total(), c.two_cycles(), t)?;
                let direct = moments_from_distribution(&exact_distribution(&table, c, t)?)?;
                rep.check(formula == direct, || format!("moments at n = {n}, C = {c}, t = {t}"));
            }
        }
    }
    Ok(rep)
}

fn plancherel_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("plancherel");
    for n in 1..=n_max {
        let table = CharacterTable::new(n)?;
        let nfact = BigRational::from_integer(BigInt::from(factorial(n)));
        for c in table.classes() {
            for t in 0..=4 {
                let coeffs = fourier_coefficients(&table, c, t)?;
                let lhs = coeffs.iter().fold(BigRational::zero(), |a, x| a + x * x);
                let d = exact_distribution(&table, c, t)?;
                let rhs = d
                    .classes()
                    .iter()
                    .zip(d.exact_probs().expect("exact"))
                    .map(|(rho, p)| p * p / BigRational::from_integer(BigInt::from(rho.class_size())))
                    .fold(BigRational::zero(), |a, b| a + b)
                    * &nfact;
                rep.check(lhs == rhs, || format!("Plancherel at n = {n}, C = {c}, t = {t}"));
            }
        }
    }
    Ok(rep)
}

fn coset_suite(n_max: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("coset-fourier");
    for n in 2..=n_max {
        let table = CharacterTable::new(n)?;
        let last = table.irreps().len() - 1;
        for s in [1, -1] {
            let u = CosetUniform::new(n, s)?;
            for i in 0..=last {
                let expect = match i {
                    0 => BigRational::one(),
                    i if i == last => BigRational::from_integer(BigInt::from(s)),
                    _ => BigRational::zero(),
                };
                rep.check(u.fourier_coefficient(&table, i) == expect, || format!("Û at n = {n}, row {i}, sign {s}"));
            }
        }
    }
    Ok(rep)
}

fn walk_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("walk-parity");
    for (n, k, t) in [(6, 2, 3), (7, 3, 4), (8, 4, 5), (9, 5, 2)] {
        let cfg = WalkConfig { n, k, t, samples: 20_000, seed: 9, workers: 2 };
        let h = run_walk(&cfg)?;
        rep.check(h.parity_violations() == 0, || format!("parity at n = {n}, k = {k}, t = {t}"));
        rep.check(h == run_walk(&cfg)?, || format!("reproducibility at n = {n}, k = {k}"));
    }
    Ok(rep)
}
