//! Asymptotic main terms and bound regimes for `k`-cycle character ratios,
//! evaluated in log space with the sign carried separately.
//!
//! Every implicit `O(·)` constant is a field of [`AsymptoticConfig`]. Error
//! envelopes are reported next to the main term and never folded into it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{self, falling, Product};
use crate::characters::{char_ratio_kcycle, ln_dimension, ExactRatio};
use crate::error::{Error, Result};
use crate::partitions::{partitions, Partition};

/// Numeric stand-ins for the unnamed constants of the asymptotic estimates.
///
/// Deserializes from a partial table; missing fields keep their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoticConfig {
    /// `ε` of parts a and c, in `(0, 1/2)`.
    pub epsilon: f64,
    /// `θ > 2/3` of part b.
    pub theta: f64,
    /// Upper cutoff `k ≤ δn`, shared with part b's `ε(θ)`.
    pub delta: f64,
    /// `r ≤ c0·n` range of the small-`r` power-sum envelope.
    pub c0: f64,
    /// Constant `c` of the character-ratio criterion, calibrated by [`calibrate_c1`].
    pub c1: f64,
    /// Exponent constant of the dimension sum.
    pub c2: f64,
    /// Implied constant inside part a's `O(r^{-1/2})`.
    pub part_a_constant: f64,
    /// Implied constant of part c's relative errors.
    pub part_c_relative_constant: f64,
    /// Implied constant of part c's additive error.
    pub part_c_additive_constant: f64,
    /// Power `p` in the additive factor `(k log^p n / √n)^k`.
    pub part_c_log_power: i32,
    /// Small-`k` branch uses part a while `r ≤ n^{r_switch_exponent}`.
    pub r_switch_exponent: f64,
    /// `k ≥ k_switch_factor · log n` selects the large-`k` branch.
    pub k_switch_factor: f64,
    /// Large-`k` branch uses part b once `r > r_large_fraction · n`.
    pub r_large_fraction: f64,
    /// Below this size the dispatcher returns the exact ratio.
    pub exact_max_n: usize,
}

/// `c` for the character-ratio bound. [`calibrate_c1`] over n = 8, 10, 12
/// finds every `c ≥ -0.49` sufficient, so the smallest nonnegative value is kept.
pub const CALIBRATED_C1: f64 = 0.0;

/// Smallest integer `c2` at which the dimension sum stops growing over n = 10..=40.
pub const CALIBRATED_C2: f64 = 2.0;

impl Default for AsymptoticConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            theta: 0.67,
            delta: 0.05,
            c0: 0.5,
            c1: CALIBRATED_C1,
            c2: CALIBRATED_C2,
            part_a_constant: 1.0,
            part_c_relative_constant: 1.0,
            part_c_additive_constant: 1.0,
            part_c_log_power: 2,
            r_switch_exponent: 5.0 / 6.0,
            k_switch_factor: 6.0,
            r_large_fraction: 0.49,
            exact_max_n: 60,
        }
    }
}

impl AsymptoticConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epsilon", self.epsilon),
            ("theta", self.theta),
            ("delta", self.delta),
            ("c0", self.c0),
            ("part_a_constant", self.part_a_constant),
            ("part_c_relative_constant", self.part_c_relative_constant),
            ("part_c_additive_constant", self.part_c_additive_constant),
            ("r_switch_exponent", self.r_switch_exponent),
            ("k_switch_factor", self.k_switch_factor),
            ("r_large_fraction", self.r_large_fraction),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange(format!("{name} must be positive, got {v}")));
            }
        }
        if self.epsilon >= 0.5 {
            return Err(Error::OutOfRange(format!("epsilon must be below 1/2, got {}", self.epsilon)));
        }
        if self.theta <= 2.0 / 3.0 {
            return Err(Error::OutOfRange(format!("theta must exceed 2/3, got {}", self.theta)));
        }
        if self.c1 < 0.0 || self.c2 < 0.0 {
            return Err(Error::OutOfRange("c1 and c2 must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Which estimate produced a [`RatioEstimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PartA,
    PartB,
    PartC,
    Exact,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::PartA => "part_a",
            Regime::PartB => "part_b",
            Regime::PartC => "part_c",
            Regime::Exact => "exact",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "part_a" => Ok(Regime::PartA),
            "part_b" => Ok(Regime::PartB),
            "part_c" => Ok(Regime::PartC),
            "exact" => Ok(Regime::Exact),
            _ => Err(Error::Parse(format!("unknown regime {s:?}"))),
        }
    }
}

/// `ratio ≈ sign · exp(log_main_term)` with `|ratio - main| ≤ exp(log_error_bound)`.
///
/// A zero main term has `sign = 0` and `log_main_term = -inf`. An error bound
/// of `+inf` means the regime's hypotheses fail and no guarantee is given;
/// `-inf` means the main term is exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    #[serde(serialize_with = "ser_log")]
    pub log_main_term: f64,
    pub sign: i8,
    #[serde(serialize_with = "ser_log")]
    pub log_error_bound: f64,
    pub regime: Regime,
}

impl RatioEstimate {
    /// Main term as a float.
    pub fn main_term(&self) -> f64 {
        self.sign as f64 * self.log_main_term.exp()
    }

    /// Upper bound on `log |ratio|`: log of `|main| + error`.
    pub fn log_abs_upper(&self) -> f64 {
        log_add(self.log_main_term, self.log_error_bound)
    }

    pub fn has_guarantee(&self) -> bool {
        self.log_error_bound < f64::INFINITY
    }

    fn from_exact(q: &BigRational, regime: Regime, log_error_bound: f64) -> Self {
        let sign = if q.is_zero() {
            0
        } else if q.is_negative() {
            -1
        } else {
            1
        };
        Self { log_main_term: arith::ln_abs(q), sign, log_error_bound, regime }
    }

    fn flip(mut self) -> Self {
        self.sign = -self.sign;
        self
    }
}

fn ser_log<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if *x > 0.0 {
        s.serialize_str("+inf")
    } else if *x < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

/// `log(e^x + e^y)` without overflow.
fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi.is_infinite() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `r = n - λ_1`.
pub fn first_row_deficit(lambda: &Partition) -> usize {
    lambda.n() - lambda.first()
}

/// Part a's hypothesis `r + k + 1 < (1/2 - ε) n`.
pub fn part_a_regime_holds(n: usize, k: usize, r: usize, epsilon: f64) -> bool {
    ((r + k + 1) as f64) < (0.5 - epsilon) * n as f64
}

/// Part a's main term
///
/// `(a_1 - 1/2)^{(k)} / n^{(k)} · Π_{j≥2} (a_1 - a_j - k)/(a_1 - a_j) · Π_j (a_1 + b_j)/(a_1 + b_j - k)`
///
/// as an exact rational. The formula is evaluated wherever it is defined;
/// [`part_a_regime_holds`] decides whether it approximates the ratio.
pub fn main_term_part_a(lambda: &Partition, k: usize) -> Result<ExactRatio> {
    let n = lambda.n();
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let fc = lambda.to_frobenius();
    let a = fc.a_doubled();
    let b = fc.b_doubled();
    let (a1, k2) = (a[0] as i64, 2 * k as i64);

    let mut numer = Product::new();
    let mut denom = Product::new();
    for &aj in &a[1..] {
        numer.mul(a1 - aj as i64 - k2);
        denom.mul(a1 - aj as i64);
    }
    for &bj in b {
        let shifted = a1 + bj as i64 - k2;
        if shifted == 0 {
            return Err(Error::Singular(format!("a_1 + b_j = k for λ = {lambda}, k = {k}")));
        }
        numer.mul(a1 + bj as i64);
        denom.mul(shifted);
    }
    let lead = BigRational::new(falling(lambda.first() as i64 - 1, k), falling(n as i64, k));
    Ok(ExactRatio(lead * BigRational::new(numer.finish(), denom.finish())))
}

/// Same as [`main_term_part_a`], but refuses λ outside part a's regime.
pub fn main_term_part_a_checked(lambda: &Partition, k: usize, epsilon: f64) -> Result<ExactRatio> {
    let (n, r) = (lambda.n(), first_row_deficit(lambda));
    if !part_a_regime_holds(n, k, r, epsilon) {
        return Err(Error::RegimeViolated(format!(
            "part a needs r + k + 1 < (1/2 - ε) n, got r = {r}, k = {k}, n = {n}"
        )));
    }
    main_term_part_a(lambda, k)
}

/// Log of part a's error envelope
/// `k [log((1+ε)(k+1+r)/(n-k)) + O·r^{-1/2}]`, or `-inf` when `r < k`.
pub fn error_bound_part_a(n: usize, k: usize, r: usize, cfg: &AsymptoticConfig) -> Result<f64> {
    if !part_a_regime_holds(n, k, r, cfg.epsilon) {
        return Err(Error::RegimeViolated(format!(
            "part a needs r + k + 1 < (1/2 - ε) n, got r = {r}, k = {k}, n = {n}"
        )));
    }
    if r < k {
        return Ok(f64::NEG_INFINITY);
    }
    let inner = ((1.0 + cfg.epsilon) * (k + 1 + r) as f64 / (n - k) as f64).ln();
    Ok(k as f64 * (inner + cfg.part_a_constant / (r as f64).sqrt()))
}

/// Part b's hypotheses on `(n, k, a_1, b_1)`, with `a_1, b_1` as doubled integers.
pub fn part_b_applies(n: usize, k: usize, a1_doubled: usize, b1_doubled: usize, cfg: &AsymptoticConfig) -> bool {
    let (nf, kf) = (n as f64, k as f64);
    let k_ok = cfg.k_switch_factor * nf.ln() <= kf && kf <= cfg.delta * nf;
    k_ok && part_b_shape_holds(n, a1_doubled, b1_doubled, cfg.theta)
}

/// The shape half of part b's hypotheses: `b_1 ≤ a_1 ≤ e^{-θ} n`.
pub fn part_b_shape_holds(n: usize, a1_doubled: usize, b1_doubled: usize, theta: f64) -> bool {
    b1_doubled <= a1_doubled && (a1_doubled as f64) / 2.0 <= (-theta).exp() * n as f64
}

/// Part b: `log |ratio| ≤ -k/2` when its hypotheses hold.
pub fn bound_part_b(lambda: &Partition, k: usize, cfg: &AsymptoticConfig) -> Option<f64> {
    let fc = lambda.to_frobenius();
    part_b_applies(lambda.n(), k, fc.a_doubled()[0], fc.b_doubled()[0], cfg).then(|| -(k as f64) / 2.0)
}

/// Part c's main term and envelopes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartCEstimate {
    pub estimate: RatioEstimate,
    /// Log of `Σ |term_i| · O · k n^{3/4+ε} / x_i` over the surviving terms.
    #[serde(serialize_with = "ser_log")]
    pub log_relative_envelope: f64,
    /// Log of `O · n^{1/2} (log n)^2 (k (log n)^p / √n)^k`.
    #[serde(serialize_with = "ser_log")]
    pub log_additive_envelope: f64,
    /// Number of `a_i` and `b_i` above `k √n`.
    pub surviving_terms: usize,
}

/// Part c's hypothesis `k < n^{1/2 - ε}`.
pub fn part_c_regime_holds(n: usize, k: usize, epsilon: f64) -> bool {
    (k as f64) < (n as f64).powf(0.5 - epsilon)
}

/// Part c: `Σ_{a_i > k√n} (a_i/n)^k + (-1)^{k-1} Σ_{b_i > k√n} (b_i/n)^k`.
pub fn main_term_part_c(lambda: &Partition, k: usize, cfg: &AsymptoticConfig) -> Result<PartCEstimate> {
    let n = lambda.n();
    if k < 2 || !part_c_regime_holds(n, k, cfg.epsilon) {
        return Err(Error::RegimeViolated(format!("part c needs 2 <= k < n^(1/2 - ε), got k = {k}, n = {n}")));
    }
    Ok(part_c_unchecked(lambda, k, cfg))
}

fn part_c_unchecked(lambda: &Partition, k: usize, cfg: &AsymptoticConfig) -> PartCEstimate {
    let n = lambda.n();
    let (nf, kf) = (n as f64, k as f64);
    let cut = kf * nf.sqrt();
    let fc = lambda.to_frobenius();
    let b_sign = if k % 2 == 1 { 1.0 } else { -1.0 };

    let mut main = 0.0;
    let mut rel = 0.0;
    let mut surviving = 0;
    let xs = fc
        .a_doubled()
        .iter()
        .map(|&a| (a as f64 / 2.0, 1.0))
        .chain(fc.b_doubled().iter().map(|&b| (b as f64 / 2.0, b_sign)));
    let rel_scale = cfg.part_c_relative_constant * kf * nf.powf(0.75 + cfg.epsilon);
    for (x, s) in xs {
        if x > cut {
            let term = (x / nf).powi(k as i32);
            main += s * term;
            rel += term * rel_scale / x;
            surviving += 1;
        }
    }
    let ln_n = nf.ln();
    let log_additive = cfg.part_c_additive_constant.ln()
        + 0.5 * ln_n
        + 2.0 * ln_n.ln()
        + kf * (kf.ln() + cfg.part_c_log_power as f64 * ln_n.ln() - 0.5 * ln_n);
    let log_relative = if rel > 0.0 { rel.ln() } else { f64::NEG_INFINITY };
    let sign = if main > 0.0 {
        1
    } else if main < 0.0 {
        -1
    } else {
        0
    };
    let estimate = RatioEstimate {
        log_main_term: main.abs().ln(),
        sign,
        log_error_bound: log_add(log_relative, log_additive),
        regime: Regime::PartC,
    };
    PartCEstimate {
        estimate,
        log_relative_envelope: log_relative,
        log_additive_envelope: log_additive,
        surviving_terms: surviving,
    }
}

/// Whether the MT lemma's hypothesis `k + r + 1 < n/2` holds.
pub fn mt_lemma_applies(n: usize, k: usize, r: usize) -> bool {
    2 * (k + r + 1) < n
}

/// The MT lemma's bound `log MT ≤ -kr/n`.
pub fn mt_upper_bound(n: usize, k: usize, r: usize) -> f64 {
    -((k * r) as f64) / n as f64
}

/// The criterion lemma's right-hand side
/// `max(-kr/n + kr log r/(2n log n) + ckr/(n log n), -k/2 + ck/log n)`.
pub fn criterion_bound(n: usize, k: usize, r: usize, c: f64) -> Result<f64> {
    if n < 3 || r < 1 || r >= n {
        return Err(Error::OutOfRange(format!("need n >= 3 and 1 <= r <= n - 1, got n = {n}, r = {r}")));
    }
    let (nf, kf, rf) = (n as f64, k as f64, r as f64);
    let ln_n = nf.ln();
    let long = -kf * rf / nf + kf * rf * rf.ln() / (2.0 * nf * ln_n) + c * kf * rf / (nf * ln_n);
    let short = -kf / 2.0 + c * kf / ln_n;
    Ok(long.max(short))
}

/// Envelope for `Σ (a_i/n)^k + Σ (b_i/n)^k` at `δ = r/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerSumBound {
    /// `log(ℓ(1-δ)^k + (1-ℓ(1-δ))^k)`, `ℓ = floor(1/(1-δ))`.
    Sharp,
    /// `-kδ + kδ²`, valid for `δ ≤ c0`.
    SmallR,
    /// `-kδ/2`, valid for every `δ`.
    AllR,
}

impl FromStr for PowerSumBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sharp" => Ok(PowerSumBound::Sharp),
            "small_r" => Ok(PowerSumBound::SmallR),
            "all_r" => Ok(PowerSumBound::AllR),
            _ => Err(Error::Parse(format!("unknown power-sum bound {s:?}"))),
        }
    }
}

/// `r = n` is allowed and gives `-inf` for the sharp value.
pub fn power_sum_bound(n: usize, k: usize, r: usize, which: PowerSumBound) -> Result<f64> {
    if n == 0 || r > n {
        return Err(Error::OutOfRange(format!("need 0 <= r <= n, n >= 1, got r = {r}, n = {n}")));
    }
    let (nf, kf, rf) = (n as f64, k as f64, r as f64);
    let delta = rf / nf;
    Ok(match which {
        PowerSumBound::Sharp => {
            if r == n {
                return Ok(f64::NEG_INFINITY);
            }
            let ell = n / (n - r);
            let rest = (n - ell * (n - r)) as f64 / nf;
            let top = (1.0 - delta).powi(k as i32);
            (ell as f64 * top + rest.powi(k as i32)).ln()
        }
        PowerSumBound::SmallR => -kf * delta + kf * delta * delta,
        PowerSumBound::AllR => -kf * delta / 2.0,
    })
}

/// `Σ (a_i/n)^k + Σ (b_i/n)^k` over all Frobenius coordinates.
pub fn frobenius_power_sum(lambda: &Partition, k: usize) -> f64 {
    let fc = lambda.to_frobenius();
    let nf = lambda.n() as f64;
    fc.a_doubled().iter().chain(fc.b_doubled()).map(|&x| (x as f64 / (2.0 * nf)).powi(k as i32)).sum()
}

/// Margin `-log f - (n/k)(log n + c) log|ratio|`; the inequality holds iff it is `≥ 0`.
///
/// A vanishing ratio gives `+inf`.
pub fn ratio_inequality_margin(lambda: &Partition, k: usize, c: f64) -> Result<f64> {
    let n = lambda.n();
    let ratio = char_ratio_kcycle(lambda, k)?;
    let ln_ratio = ratio.ln_abs();
    if ln_ratio == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    let steps = n as f64 / k as f64 * ((n as f64).ln() + c);
    Ok(-ln_dimension(lambda) - steps * ln_ratio)
}

/// `|ratio|^{(n/k)(log n + c)} ≤ 1/f^λ`, from the exact ratio.
pub fn ratio_inequality_check(lambda: &Partition, k: usize, c: f64) -> Result<bool> {
    // one-dimensional representations satisfy it with equality
    if lambda.len() == 1 || lambda.first() == 1 {
        return Ok(true);
    }
    // tiny slack for the floating-point logs
    Ok(ratio_inequality_margin(lambda, k, c)? >= -1e-9)
}

/// Smallest `c` with `(n/k)(log n + c) log|ratio| ≤ -log f` for this `(λ, k)`.
///
/// `-inf` when every `c` works.
pub fn required_c(lambda: &Partition, k: usize) -> Result<f64> {
    if lambda.len() == 1 || lambda.first() == 1 {
        return Ok(f64::NEG_INFINITY);
    }
    let n = lambda.n() as f64;
    let ln_ratio = char_ratio_kcycle(lambda, k)?.ln_abs();
    if ln_ratio == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    if ln_ratio >= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((k as f64 / n) * ln_dimension(lambda) / (-ln_ratio) - n.ln())
}

/// Worst [`required_c`] over every nontrivial `λ ⊢ n` and `2 ≤ k ≤ n - 1`, for each `n`.
pub fn calibrate_c1(sizes: &[usize]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &n in sizes {
        let lambdas: Vec<Partition> = partitions(n)?.collect();
        let w = lambdas
            .par_iter()
            .map(|lambda| (2..n).try_fold(f64::NEG_INFINITY, |acc, k| required_c(lambda, k).map(|c| acc.max(c))))
            .try_reduce(|| f64::NEG_INFINITY, |x, y| Ok(x.max(y)))?;
        worst = worst.max(w);
    }
    Ok(worst)
}

pub const DEFAULT_DIMENSION_SUM_CAP: usize = 40;

/// `Σ_{λ ⊢ n} (f^λ)^{-c / log n}`, with `log f` from hook lengths.
pub fn dimension_sum(n: usize, c: f64) -> Result<f64> {
    dimension_sum_with_cap(n, c, DEFAULT_DIMENSION_SUM_CAP)
}

pub fn dimension_sum_with_cap(n: usize, c: f64, cap: usize) -> Result<f64> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n < 2 {
        return Err(Error::OutOfRange(format!("dimension sum needs n >= 2, got {n}")));
    }
    let scale = c / (n as f64).ln();
    Ok(partitions(n)?.map(|lambda| (-scale * ln_dimension(&lambda)).exp()).sum())
}

/// Combined estimate of `χ^λ(C)/f^λ` at a `k`-cycle.
///
/// Small `n` returns the exact ratio. Otherwise λ is folded to `a_1 ≥ b_1`
/// (conjugation multiplies the ratio by `(-1)^{k-1}`) and the regime follows
/// the case split of the character-ratio bound: part b for large `k` and
/// `r > r_large_fraction · n`, part a for large `k` with smaller `r` or for
/// small `k` with `r ≤ n^{r_switch_exponent}`, part c otherwise. A tie
/// `k = k_switch_factor · log n` counts as large `k`.
pub fn estimate_ratio(lambda: &Partition, k: usize, cfg: &AsymptoticConfig) -> Result<RatioEstimate> {
    let n = lambda.n();
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    if n <= cfg.exact_max_n {
        let q = char_ratio_kcycle(lambda, k)?;
        return Ok(RatioEstimate::from_exact(q.value(), Regime::Exact, f64::NEG_INFINITY));
    }

    let fc = lambda.to_frobenius();
    if fc.a_doubled()[0] < fc.b_doubled()[0] {
        let est = estimate_ratio(&lambda.conjugate(), k, cfg)?;
        return Ok(if k.is_multiple_of(2) { est.flip() } else { est });
    }

    let nf = n as f64;
    let r = first_row_deficit(lambda);
    let large_k = k as f64 >= cfg.k_switch_factor * nf.ln();
    let regime = if large_k {
        if r as f64 > cfg.r_large_fraction * nf {
            Regime::PartB
        } else {
            Regime::PartA
        }
    } else if r as f64 <= nf.powf(cfg.r_switch_exponent) {
        Regime::PartA
    } else {
        Regime::PartC
    };

    Ok(match regime {
        Regime::PartA => {
            let log_err = error_bound_part_a(n, k, r, cfg).unwrap_or(f64::INFINITY);
            match main_term_part_a(lambda, k) {
                Ok(mt) => RatioEstimate::from_exact(mt.value(), Regime::PartA, log_err),
                Err(Error::Singular(_)) => RatioEstimate {
                    log_main_term: f64::NEG_INFINITY,
                    sign: 0,
                    log_error_bound: f64::INFINITY,
                    regime: Regime::PartA,
                },
                Err(e) => return Err(e),
            }
        }
        Regime::PartB => RatioEstimate {
            log_main_term: f64::NEG_INFINITY,
            sign: 0,
            log_error_bound: bound_part_b(lambda, k, cfg).unwrap_or(f64::INFINITY),
            regime: Regime::PartB,
        },
        Regime::PartC => {
            let mut est = part_c_unchecked(lambda, k, cfg).estimate;
            if !part_c_regime_holds(n, k, cfg.epsilon) {
                est.log_error_bound = f64::INFINITY;
            }
            est
        }
        Regime::Exact => unreachable!(),
    })
}

/// Exact ratio wrapped as an estimate with zero error.
pub fn exact_estimate(lambda: &Partition, k: usize) -> Result<RatioEstimate> {
    let q = char_ratio_kcycle(lambda, k)?;
    Ok(RatioEstimate::from_exact(q.value(), Regime::Exact, f64::NEG_INFINITY))
}

/// The MT lemma for one λ: `MT ≤ exp(-kr/n)`.
///
/// Checked through the intermediate `MT ≤ (1 - r/n)^k` as exact rationals,
/// which implies the exponential form, with a float fallback on the latter.
pub fn mt_bound_holds(lambda: &Partition, k: usize) -> Result<bool> {
    let (n, r) = (lambda.n(), first_row_deficit(lambda));
    let mt = main_term_part_a(lambda, k)?.into_inner();
    if !mt.is_positive() {
        return Ok(true);
    }
    let base = BigRational::new(BigInt::from(n - r), BigInt::from(n));
    if mt <= pow(&base, k) {
        return Ok(true);
    }
    Ok(arith::ln_abs(&mt) <= mt_upper_bound(n, k, r))
}

fn pow(q: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn part_a_main_term_examples() {
        assert_eq!(main_term_part_a(&p("5,1"), 3).unwrap().into_inner(), q(2, 5));
        for n in [4usize, 9, 20] {
            for k in 2..n {
                assert!(main_term_part_a(&Partition::row(n).unwrap(), k).unwrap().value().is_one());
            }
        }
        let lambda = p("8,2");
        assert_eq!(main_term_part_a(&lambda, 5).unwrap(), char_ratio_kcycle(&lambda, 5).unwrap());
        // (5,1) at k = 3 sits outside the regime for n = 6
        assert!(matches!(main_term_part_a_checked(&p("5,1"), 3, 0.01), Err(Error::RegimeViolated(_))));
        assert!(main_term_part_a_checked(&p("18,2"), 2, 0.01).is_ok());
    }

    #[test]
    fn part_a_error_envelope() {
        let cfg = AsymptoticConfig::default();
        assert_eq!(error_bound_part_a(100, 5, 3, &cfg).unwrap(), f64::NEG_INFINITY);
        let v = error_bound_part_a(10_000, 10, 100, &cfg).unwrap();
        let expect = 10.0 * ((1.01f64 * 111.0 / 9990.0).ln() + 0.1);
        assert!((v - expect).abs() < 1e-12);
        assert!((v + 43.9).abs() < 0.1);
        let mut last = f64::NEG_INFINITY;
        for r in 10..200 {
            let v = error_bound_part_a(10_000, 10, r, &cfg).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(matches!(error_bound_part_a(10, 3, 3, &cfg), Err(Error::RegimeViolated(_))));
    }

    #[test]
    fn part_b_hypotheses() {
        let cfg = AsymptoticConfig::default();
        assert_eq!(bound_part_b(&Partition::row(500).unwrap(), 40, &cfg), None);
        // a_1 = 0.4 n and b_1 = 0.1 n at n = 10^6, given directly in doubled form
        assert!(part_b_applies(1_000_000, 100, 800_000, 200_000, &cfg));
        assert!(0.4 < (-cfg.theta).exp());
        let n = 1_000_000usize;
        let k = (5.0 * (n as f64).ln()) as usize;
        assert!(!part_b_applies(n, k, 800_000, 200_000, &cfg));
        // λ = (200, 200, ..., 200) of 10^3 rows: a_1 = 199.5, b_1 = 999.5 > a_1
        assert!(!part_b_applies(200_000, 100, 399, 1999, &cfg));
        let square = Partition::new(vec![40; 40]).unwrap();
        let mut wide = cfg.clone();
        wide.delta = 0.5;
        assert_eq!(bound_part_b(&square, 50, &wide), Some(-25.0));
    }

    #[test]
    fn part_c_examples() {
        let cfg = AsymptoticConfig::default();
        let est = main_term_part_c(&Partition::row(10_000).unwrap(), 2, &cfg).unwrap();
        assert!((est.estimate.main_term() - (9999.5f64 / 10_000.0).powi(2)).abs() < 1e-12);
        assert_eq!(est.surviving_terms, 1);

        let est = main_term_part_c(&Partition::column(10_000).unwrap(), 3, &cfg).unwrap();
        assert_eq!(est.estimate.sign, 1);
        assert!((est.estimate.main_term() - (9999.5f64 / 10_000.0).powi(3)).abs() < 1e-12);

        let lambda = Partition::new(vec![390, 10]).unwrap();
        let est = main_term_part_c(&lambda, 2, &cfg).unwrap();
        assert!((est.estimate.main_term() - (389.5f64 / 400.0).powi(2)).abs() < 1e-12);
        let exact = char_ratio_kcycle(&lambda, 2).unwrap().to_f64();
        assert!((est.estimate.main_term() - exact).abs() < 0.01);

        assert!(matches!(main_term_part_c(&Partition::row(100).unwrap(), 10, &cfg), Err(Error::RegimeViolated(_))));
    }

    #[test]
    fn mt_bound_examples() {
        assert_eq!(mt_upper_bound(50, 3, 0), 0.0);
        assert!((mt_upper_bound(100, 4, 10) + 0.4).abs() < 1e-15);
        assert!((mt_upper_bound(10, 2, 3) + 0.6).abs() < 1e-15);
        assert!(!mt_lemma_applies(10, 2, 3));
        assert!(mt_lemma_applies(100, 4, 10));
    }

    #[test]
    fn criterion_examples() {
        for n in [3usize, 10, 100] {
            for k in 2..n {
                let v = criterion_bound(n, k, 1, 0.0).unwrap();
                assert!((v - (-(k as f64) / n as f64)).abs() < 1e-12);
            }
        }
        let l100 = 100f64.ln();
        let long = -5.0 + 500.0 * 50f64.ln() / (200.0 * l100) + 500.0 / (100.0 * l100);
        let short = -5.0 + 10.0 / l100;
        let v = criterion_bound(100, 10, 50, 1.0).unwrap();
        assert!((v - long.max(short)).abs() < 1e-12);
        assert!((v + 1.790).abs() < 1e-3);
        let mut last = f64::NEG_INFINITY;
        for c in 0..20 {
            let v = criterion_bound(100, 10, 50, c as f64 * 0.5).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert!(criterion_bound(2, 2, 1, 0.0).is_err());
        assert!(criterion_bound(10, 2, 10, 0.0).is_err());
    }

    #[test]
    fn power_sum_examples() {
        let v = power_sum_bound(10, 2, 5, PowerSumBound::Sharp).unwrap();
        assert!((v - 0.5f64.ln()).abs() < 1e-12);
        for d in 1..100usize {
            for k in 2..=50 {
                let sharp = power_sum_bound(100, k, d, PowerSumBound::Sharp).unwrap();
                let all = power_sum_bound(100, k, d, PowerSumBound::AllR).unwrap();
                assert!((all + k as f64 * d as f64 / 200.0).abs() < 1e-12);
                assert!(sharp <= all + 1e-12, "δ = {d}/100, k = {k}");
            }
        }
        let tiny = power_sum_bound(1_000_000, 3, 1, PowerSumBound::Sharp).unwrap();
        assert!(tiny < 0.0 && tiny > -1e-5);
        assert_eq!(power_sum_bound(7, 3, 0, PowerSumBound::Sharp).unwrap(), 0.0);
        assert_eq!(power_sum_bound(7, 3, 7, PowerSumBound::Sharp).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn ratio_inequality_examples() {
        let lambda = p("9,1");
        assert_eq!(char_ratio_kcycle(&lambda, 2).unwrap().into_inner(), q(7, 9));
        assert!(ratio_inequality_check(&lambda, 2, 2.0).unwrap());
        assert!(ratio_inequality_check(&Partition::column(10).unwrap(), 3, 0.0).unwrap());
        assert!(ratio_inequality_check(&Partition::column(10).unwrap(), 4, 0.0).unwrap());
    }

    #[test]
    fn dimension_sum_examples() {
        for n in [2usize, 7, 15] {
            let count = crate::partitions::partition_list(n).unwrap().len();
            assert_eq!(dimension_sum(n, 0.0).unwrap(), count as f64);
        }
        let mut last = f64::INFINITY;
        for c in 0..10 {
            let v = dimension_sum(20, c as f64).unwrap();
            assert!(v < last);
            last = v;
        }
        assert_eq!(dimension_sum(41, 1.0).unwrap_err(), Error::CapExceeded { n: 41, cap: 40 });
    }

    #[test]
    fn dispatcher_routes_and_folds() {
        let cfg = AsymptoticConfig::default();
        let small = estimate_ratio(&p("4,1"), 2, &cfg).unwrap();
        assert_eq!(small.regime, Regime::Exact);
        assert!((small.main_term() - 0.5).abs() < 1e-12);

        let n = 400;
        let hook = Partition::new(vec![n - 3, 1, 1, 1]).unwrap();
        let est = estimate_ratio(&hook, 5, &cfg).unwrap();
        assert_eq!(est.regime, Regime::PartA);
        assert_eq!(est.log_error_bound, f64::NEG_INFINITY);
        let exact = char_ratio_kcycle(&hook, 5).unwrap().to_f64();
        assert!((est.main_term() - exact).abs() < 1e-12);

        // the conjugate picks up (-1)^{k-1}
        let dual = estimate_ratio(&hook.conjugate(), 4, &cfg).unwrap();
        let exact = char_ratio_kcycle(&hook.conjugate(), 4).unwrap().to_f64();
        assert!((dual.main_term() - exact).abs() < 1e-12);

        let mut wide = cfg.clone();
        wide.exact_max_n = 0;
        let square = Partition::new(vec![20; 20]).unwrap();
        let est = estimate_ratio(&square, 36, &wide).unwrap();
        assert_eq!(est.regime, Regime::PartB);
        let spread = Partition::new(vec![200, 150, 50]).unwrap();
        assert_eq!(estimate_ratio(&spread, 2, &wide).unwrap().regime, Regime::PartC);
    }

    #[test]
    fn tie_goes_to_large_k() {
        // k = 6 log n exactly at n = e^{k/6}; emulate with the factor
        let n = 400usize;
        let k = 12;
        let cfg =
            AsymptoticConfig { exact_max_n: 0, k_switch_factor: k as f64 / (n as f64).ln(), ..Default::default() };
        let lambda = Partition::new(vec![150, 130, 120]).unwrap();
        assert_eq!(estimate_ratio(&lambda, k, &cfg).unwrap().regime, Regime::PartB);
    }

    #[test]
    fn config_validation() {
        assert!(AsymptoticConfig::default().validate().is_ok());
        assert!(AsymptoticConfig { theta: 0.6, ..Default::default() }.validate().is_err());
        assert!(AsymptoticConfig { epsilon: 0.5, ..Default::default() }.validate().is_err());
    }
}
