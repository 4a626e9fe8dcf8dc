//! Monte Carlo simulation of the random walk generated by the `k`-cycles.
//!
//! Each worker owns a `ChaCha8Rng` seeded with `seed` on stream `worker`, so
//! a fixed `(seed, workers)` pair always reproduces the same histogram.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::mixing::{coset_sign, ClassDistribution, CosetUniform};
use crate::partitions::{CycleType, Partition};

/// Environment variable read for the default worker count.
pub const WORKERS_ENV: &str = "KCYCLE_WORKERS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

/// `KCYCLE_WORKERS` if set and positive, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1))
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.k > self.n {
            return Err(Error::OutOfRange(format!("need 2 <= k <= n, got k = {}, n = {}", self.k, self.n)));
        }
        if self.samples == 0 {
            return Err(Error::OutOfRange("samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::OutOfRange("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn generator(&self) -> CycleType {
        CycleType::k_cycle(self.n, self.k).expect("validated")
    }
}

/// A uniform `k`-cycle of `S_n` as an image array.
///
/// An ordered `k`-subset is drawn by a Fisher–Yates prefix and closed into a
/// cycle. Each `k`-cycle arises from exactly `k` rotations of its tuple, so
/// every one has probability `k / n^{(k)}`.
pub fn sample_k_cycle<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Vec<usize>> {
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let xs = draw_prefix(&mut pool, k, rng);
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..k {
        perm[xs[j]] = xs[(j + 1) % k];
    }
    Ok(perm)
}

/// Moves a uniform ordered `k`-subset of `pool` to its front. The pool stays a
/// permutation of its contents, so it can be reused without resetting.
fn draw_prefix<'a, R: Rng + ?Sized>(pool: &'a mut [usize], k: usize, rng: &mut R) -> &'a [usize] {
    let n = pool.len();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    &pool[..k]
}

/// Cycle lengths of a permutation, sorted decreasingly.
pub fn cycle_type_of(perm: &[usize], seen: &mut Vec<bool>) -> Vec<usize> {
    seen.clear();
    seen.resize(perm.len(), false);
    let mut lens = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lens.push(len);
    }
    lens.sort_unstable_by(|a, b| b.cmp(a));
    lens
}

fn sign_of(cycles: &[usize]) -> i32 {
    let even_cycles = cycles.iter().filter(|&&c| c % 2 == 0).count();
    if even_cycles % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Counts of sampled cycle types.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClassHistogram {
    n: usize,
    counts: BTreeMap<Vec<usize>, u64>,
    total: u64,
    expected_sign: Option<i32>,
    parity_violations: u64,
}

impl ClassHistogram {
    pub fn new(n: usize) -> Self {
        Self { n, ..Self::default() }
    }

    /// A histogram that checks every sample against the sign `expected`.
    pub fn with_sign(n: usize, expected: i32) -> Self {
        Self { n, expected_sign: Some(expected), ..Self::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn parity_violations(&self) -> u64 {
        self.parity_violations
    }

    /// Records one sample given its cycle lengths in decreasing order.
    pub fn record(&mut self, cycles: Vec<usize>) {
        debug_assert_eq!(cycles.iter().sum::<usize>(), self.n);
        if let Some(s) = self.expected_sign {
            if sign_of(&cycles) != s {
                self.parity_violations += 1;
            }
        }
        *self.counts.entry(cycles).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &ClassHistogram) -> Result<()> {
        if other.n != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: other.n });
        }
        for (c, &v) in &other.counts {
            *self.counts.entry(c.clone()).or_insert(0) += v;
        }
        self.total += other.total;
        self.parity_violations += other.parity_violations;
        self.expected_sign = self.expected_sign.or(other.expected_sign);
        Ok(())
    }

    pub fn count(&self, class: &CycleType) -> u64 {
        self.counts.get(class.cycles().parts()).copied().unwrap_or(0)
    }

    pub fn frequency(&self, class: &CycleType) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(class) as f64 / self.total as f64
        }
    }

    /// Observed classes with their counts, in decreasing reverse-lex order.
    pub fn entries(&self) -> Vec<(CycleType, u64)> {
        self.counts
            .iter()
            .rev()
            .map(|(c, &v)| (CycleType::new(Partition::new(c.clone()).expect("sampled cycle type")), v))
            .collect()
    }

    /// The empirical law over every class of `S_n`.
    pub fn to_distribution(&self) -> Result<ClassDistribution> {
        let classes = crate::partitions::classes(self.n)?;
        let probs = classes.iter().map(|c| self.frequency(c)).collect();
        ClassDistribution::empirical(self.n, classes, probs)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Parse(format!("csv write failed: {e}"));
        w.write_record(["cycle_type", "count", "frequency"]).map_err(io)?;
        for (c, v) in self.entries() {
            let freq = v as f64 / self.total as f64;
            w.write_record([c.to_string(), v.to_string(), arith::format_sig6(freq)]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv flush failed: {e}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .entries()
            .into_iter()
            .map(|(c, v)| {
                serde_json::json!({
                    "cycle_type": c.to_string(),
                    "count": v,
                    "frequency": v as f64 / self.total as f64,
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "total": self.total,
            "parity_violations": self.parity_violations,
            "classes": rows,
        })
    }
}

/// `samples` independent walks of `t` steps from the identity, tallied by
/// cycle type. Worker `w` takes every sample index congruent to its share.
pub fn run_walk(cfg: &WalkConfig) -> Result<ClassHistogram> {
    cfg.validate()?;
    let sign = coset_sign(&cfg.generator(), cfg.t);
    let workers = cfg.workers.min(cfg.samples.try_into().unwrap_or(usize::MAX)).max(1);
    let base = cfg.samples / workers as u64;
    let extra = cfg.samples % workers as u64;

    let parts: Vec<ClassHistogram> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let share = base + u64::from((w as u64) < extra);
                scope.spawn(move || run_worker(cfg, w as u64, share, sign))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("walk worker panicked")).collect()
    });

    let mut hist = ClassHistogram::with_sign(cfg.n, sign);
    for part in &parts {
        hist.merge(part)?;
    }
    Ok(hist)
}

fn run_worker(cfg: &WalkConfig, stream: u64, samples: u64, sign: i32) -> ClassHistogram {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let (n, k) = (cfg.n, cfg.k);
    let mut hist = ClassHistogram::with_sign(n, sign);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut sigma: Vec<usize> = vec![0; n];
    let mut seen = Vec::with_capacity(n);
    for _ in 0..samples {
        for (i, s) in sigma.iter_mut().enumerate() {
            *s = i;
        }
        for _ in 0..cfg.t {
            // σ ← σ ∘ c for c = (x_0 x_1 ... x_{k-1}): only σ(x_j) change
            let xs = draw_prefix(&mut pool, k, &mut rng);
            let first = sigma[xs[0]];
            for j in 0..k - 1 {
                sigma[xs[j]] = sigma[xs[j + 1]];
            }
            sigma[xs[k - 1]] = first;
        }
        let cycles = cycle_type_of(&sigma, &mut seen);
        debug_assert_eq!(sign_of(&cycles), sign, "walk left its coset");
        hist.record(cycles);
    }
    hist
}

/// `½ Σ_ρ |ĥ(ρ) - p(ρ)|` between the class marginals; both laws are class
/// functions, so this is also the distance between the permutation laws.
pub fn empirical_tv(hist: &ClassHistogram, reference: &ClassDistribution) -> Result<f64> {
    if hist.n() != reference.n() {
        return Err(Error::SizeMismatch { expected: reference.n(), got: hist.n() });
    }
    let mut sum = 0.0;
    let mut covered = 0u64;
    for (i, c) in reference.classes().iter().enumerate() {
        let count = hist.count(c);
        covered += count;
        sum += (hist.frequency(c) - reference.prob_f64(i)).abs();
    }
    // mass on classes the reference does not list
    if hist.total() > 0 {
        sum += (hist.total() - covered) as f64 / hist.total() as f64;
    }
    Ok(sum / 2.0)
}

/// Distance from the histogram to `U_t`, touching only the observed classes:
/// unobserved classes contribute `U(ρ)` each, which sums to `1 - Σ_obs U(ρ)`.
pub fn empirical_tv_to_coset(hist: &ClassHistogram, u: &CosetUniform) -> Result<f64> {
    if hist.n() != u.n {
        return Err(Error::SizeMismatch { expected: u.n, got: hist.n() });
    }
    let mut sum = 0.0;
    let mut covered = 0.0;
    for (c, _) in hist.entries() {
        let p = arith::to_f64(&u.class_prob(&c));
        sum += (hist.frequency(&c) - p).abs();
        covered += p;
    }
    Ok((sum + (1.0 - covered).max(0.0)) / 2.0)
}
