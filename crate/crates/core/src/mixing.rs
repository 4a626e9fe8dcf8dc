//! Exact law of the class-generated walk, its distance to the coset-uniform
//! measure, and the two-sided bounds on that distance.

use std::io::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::asymptotics::{estimate_ratio, AsymptoticConfig};
use crate::characters::{ln_dimension, CharacterTable};
use crate::error::{Error, Result};
use crate::partitions::{factorial, partitions, CycleType};

fn big(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn pow(q: &BigRational, t: usize) -> BigRational {
    let mut out = BigRational::one();
    let mut base = q.clone();
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            out *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    out
}

/// `sgn(C)^t`.
pub fn coset_sign(class: &CycleType, t: usize) -> i32 {
    if class.sign() < 0 && t % 2 == 1 {
        -1
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Exact,
    Empirical,
}

#[derive(Clone, Debug, PartialEq)]
enum Probs {
    Exact(Vec<BigRational>),
    Empirical(Vec<f64>),
}

/// A probability vector over the conjugacy classes of `S_n`, in the order of
/// [`crate::partitions::classes`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClassDistribution {
    n: usize,
    classes: Vec<CycleType>,
    probs: Probs,
}

impl ClassDistribution {
    pub fn exact(n: usize, classes: Vec<CycleType>, probs: Vec<BigRational>) -> Result<Self> {
        if classes.len() != probs.len() {
            return Err(Error::SizeMismatch { expected: classes.len(), got: probs.len() });
        }
        Ok(Self { n, classes, probs: Probs::Exact(probs) })
    }

    pub fn empirical(n: usize, classes: Vec<CycleType>, probs: Vec<f64>) -> Result<Self> {
        if classes.len() != probs.len() {
            return Err(Error::SizeMismatch { expected: classes.len(), got: probs.len() });
        }
        Ok(Self { n, classes, probs: Probs::Empirical(probs) })
    }

    /// Point mass on a single class.
    pub fn point_mass(n: usize, at: &CycleType) -> Result<Self> {
        let classes = crate::partitions::classes(n)?;
        let probs = classes.iter().map(|c| if c == at { BigRational::one() } else { BigRational::zero() }).collect();
        Self::exact(n, classes, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> DistributionKind {
        match self.probs {
            Probs::Exact(_) => DistributionKind::Exact,
            Probs::Empirical(_) => DistributionKind::Empirical,
        }
    }

    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn exact_probs(&self) -> Option<&[BigRational]> {
        match &self.probs {
            Probs::Exact(p) => Some(p),
            Probs::Empirical(_) => None,
        }
    }

    pub fn prob_f64(&self, i: usize) -> f64 {
        match &self.probs {
            Probs::Exact(p) => arith::to_f64(&p[i]),
            Probs::Empirical(p) => p[i],
        }
    }

    pub fn index_of(&self, class: &CycleType) -> Option<usize> {
        self.classes.iter().position(|c| c == class)
    }

    /// Exact probability of a class; `None` for empirical data or unknown classes.
    pub fn prob_exact(&self, class: &CycleType) -> Option<&BigRational> {
        let i = self.index_of(class)?;
        self.exact_probs().map(|p| &p[i])
    }

    /// Nonnegative entries summing to one, exactly for exact data and to
    /// within `1e-9` otherwise.
    pub fn is_probability(&self) -> bool {
        match &self.probs {
            Probs::Exact(p) => {
                p.iter().all(|x| !x.is_negative()) && p.iter().fold(BigRational::zero(), |a, x| a + x).is_one()
            }
            Probs::Empirical(p) => p.iter().all(|&x| x >= 0.0) && (p.iter().sum::<f64>() - 1.0).abs() < 1e-9,
        }
    }

    /// Every class with positive mass has the given sign.
    pub fn supported_on_sign(&self, sign: i32) -> bool {
        (0..self.len()).all(|i| self.classes[i].sign() == sign || self.prob_f64(i) == 0.0)
    }

    /// `Σ_ρ P(ρ) g(ρ)` for an integer class function, exactly.
    pub fn expectation<F: Fn(&CycleType) -> BigInt>(&self, g: F) -> Option<BigRational> {
        let p = self.exact_probs()?;
        Some(self.classes.iter().zip(p).map(|(c, x)| x * rat(g(c))).fold(BigRational::zero(), |a, b| a + b))
    }

    /// Rows of `(class, probability)` with the probability as `p/q` (exact)
    /// or a float (empirical) plus a float column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Parse(format!("csv write failed: {e}"));
        w.write_record(["cycle_type", "probability", "probability_f64"]).map_err(io)?;
        for (i, c) in self.classes.iter().enumerate() {
            let exact = match &self.probs {
                Probs::Exact(p) => p[i].to_string(),
                Probs::Empirical(p) => p[i].to_string(),
            };
            w.write_record([c.to_string(), exact, arith::format_sig6(self.prob_f64(i))]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv flush failed: {e}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.len())
            .map(|i| {
                let mut row = serde_json::json!({
                    "cycle_type": self.classes[i].to_string(),
                    "probability_f64": self.prob_f64(i),
                });
                if let Probs::Exact(p) = &self.probs {
                    row["probability"] = p[i].to_string().into();
                }
                row
            })
            .collect();
        serde_json::json!({ "n": self.n, "kind": self.kind(), "classes": rows })
    }
}

/// The uniform measure on the coset of `A_n` where the walk lives at time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CosetUniform {
    pub n: usize,
    pub coset_sign: i32,
}

impl CosetUniform {
    pub fn new(n: usize, coset_sign: i32) -> Result<Self> {
        if coset_sign != 1 && coset_sign != -1 {
            return Err(Error::OutOfRange(format!("coset sign must be ±1, got {coset_sign}")));
        }
        Ok(Self { n, coset_sign })
    }

    pub fn at_step(class: &CycleType, t: usize) -> Self {
        Self { n: class.n(), coset_sign: coset_sign(class, t) }
    }

    /// `U_t(σ) = (1 + sgn σ · coset_sign) / n!`.
    pub fn density(&self, perm_sign: i32) -> BigRational {
        BigRational::new(BigInt::from(1 + perm_sign * self.coset_sign), big(&factorial(self.n)))
    }

    pub fn class_prob(&self, class: &CycleType) -> BigRational {
        self.density(class.sign()) * rat(big(&class.class_size()))
    }

    pub fn as_distribution(&self) -> Result<ClassDistribution> {
        let classes = crate::partitions::classes(self.n)?;
        let probs = classes.iter().map(|c| self.class_prob(c)).collect();
        ClassDistribution::exact(self.n, classes, probs)
    }

    /// `Û(χ^λ) = Σ_σ U(σ) χ^λ(σ)` for row `irrep` of the table.
    pub fn fourier_coefficient(&self, table: &CharacterTable, irrep: usize) -> BigRational {
        table
            .classes()
            .iter()
            .enumerate()
            .map(|(j, c)| self.class_prob(c) * rat(table.value(irrep, j).clone()))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// `E_{μ^{*t}}(χ^λ) = f^λ (χ^λ(C)/f^λ)^t` for every row.
pub fn fourier_coefficients(table: &CharacterTable, class: &CycleType, t: usize) -> Result<Vec<BigRational>> {
    let ratios = table.ratios_at(class)?;
    Ok(ratios.iter().zip(table.dims()).map(|(r, f)| pow(r, t) * rat(big(f))).collect())
}

/// `μ_C^{*t}(ρ) = |ρ|/n! · Σ_λ f^λ (χ^λ(C)/f^λ)^t χ^λ(ρ)`.
pub fn exact_distribution(table: &CharacterTable, class: &CycleType, t: usize) -> Result<ClassDistribution> {
    if class.n() != table.n() {
        return Err(Error::SizeMismatch { expected: table.n(), got: class.n() });
    }
    let coeffs = fourier_coefficients(table, class, t)?;
    let nfact = big(&factorial(table.n()));
    let probs = table
        .classes()
        .par_iter()
        .enumerate()
        .map(|(j, rho)| {
            let s = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| c * rat(table.value(i, j).clone()))
                .fold(BigRational::zero(), |a, b| a + b);
            s * BigRational::new(big(&rho.class_size()), nfact.clone())
        })
        .collect();
    ClassDistribution::exact(table.n(), table.classes().to_vec(), probs)
}

/// `½ Σ_ρ |μ(ρ) - U_t(ρ)|` over classes, with `U_t` at the coset of step `t`.
pub fn exact_tv(table: &CharacterTable, class: &CycleType, t: usize) -> Result<BigRational> {
    let dist = exact_distribution(table, class, t)?;
    tv_to_coset(&dist, &CosetUniform::at_step(class, t))
}

pub fn tv_to_coset(dist: &ClassDistribution, u: &CosetUniform) -> Result<BigRational> {
    let p = dist.exact_probs().ok_or_else(|| Error::OutOfRange("exact distribution required".into()))?;
    let total =
        dist.classes().iter().zip(p).map(|(c, x)| (x - u.class_prob(c)).abs()).fold(BigRational::zero(), |a, b| a + b);
    Ok(total / rat(BigInt::from(2)))
}

/// How the upper bound obtains its character ratios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperBoundMode {
    ExactRatios,
    BoundRegimes,
}

impl std::str::FromStr for UpperBoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_ratios" => Ok(UpperBoundMode::ExactRatios),
            "bound" | "bounds" | "bound_regimes" => Ok(UpperBoundMode::BoundRegimes),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// `¼ Σ_{λ ≠ (n), (1^n)} (f^λ)² (χ^λ(C)/f^λ)^{2t}`, the square of the L² bound, exactly.
pub fn tv_upper_bound_squared(table: &CharacterTable, class: &CycleType, t: usize) -> Result<BigRational> {
    let ratios = table.ratios_at(class)?;
    let n = table.n();
    let sum = table
        .irreps()
        .iter()
        .zip(&ratios)
        .zip(table.dims())
        .filter(|((lambda, _), _)| n == 1 || (lambda.len() != 1 && lambda.first() != 1))
        .map(|((_, r), f)| pow(r, 2 * t) * rat(big(f) * big(f)))
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(sum / rat(BigInt::from(4)))
}

/// `½ (Σ_{λ ≠ (n), (1^n)} (f^λ)² (χ^λ(C)/f^λ)^{2t})^{1/2}` from an exact table.
pub fn tv_upper_bound_exact(table: &CharacterTable, class: &CycleType, t: usize) -> Result<f64> {
    let sq = tv_upper_bound_squared(table, class, t)?;
    if sq.is_zero() {
        return Ok(0.0);
    }
    Ok((0.5 * arith::ln_abs(&sq)).exp())
}

pub const DEFAULT_BOUND_MODE_CAP: usize = 50;

/// The L² bound with `|ratio| ≤ min(1, exp(log_abs_upper))` from the regime
/// dispatcher. Accumulated in log space over every `λ ⊢ n`.
pub fn tv_upper_bound_regimes(n: usize, k: usize, t: usize, cfg: &AsymptoticConfig, cap: usize) -> Result<f64> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let lambdas: Vec<_> = partitions(n)?.filter(|l| l.len() != 1 && l.first() != 1).collect();
    let logs = lambdas
        .par_iter()
        .map(|lambda| {
            let est = estimate_ratio(lambda, k, cfg)?;
            let log_ratio = est.log_abs_upper().min(0.0);
            Ok(2.0 * ln_dimension(lambda) + 2.0 * t as f64 * log_ratio)
        })
        .collect::<Result<Vec<f64>>>()?;
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let log_sum = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    Ok((0.5 * log_sum).exp() / 2.0)
}

/// Dispatches between the exact-table and regime-bound forms of the L² bound.
pub fn tv_upper_bound(n: usize, k: usize, t: usize, mode: UpperBoundMode, cfg: &AsymptoticConfig) -> Result<f64> {
    match mode {
        UpperBoundMode::ExactRatios => {
            let table = CharacterTable::new(n)?;
            tv_upper_bound_exact(&table, &CycleType::k_cycle(n, k)?, t)
        }
        UpperBoundMode::BoundRegimes => tv_upper_bound_regimes(n, k, t, cfg, DEFAULT_BOUND_MODE_CAP),
    }
}

/// First two moments of `χ^{(n-1,1)} = #fixed points - 1` under `μ_C^{*t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
}

impl Serialize for MomentReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MomentReport", 6)?;
        st.serialize_field("mean", &self.mean.to_string())?;
        st.serialize_field("second_moment", &self.second_moment.to_string())?;
        st.serialize_field("variance", &self.variance.to_string())?;
        st.serialize_field("mean_f64", &arith::to_f64(&self.mean))?;
        st.serialize_field("second_moment_f64", &arith::to_f64(&self.second_moment))?;
        st.serialize_field("variance_f64", &arith::to_f64(&self.variance))?;
        st.end()
    }
}

/// Closed forms for the moments when `C` has `k` non-fixed points and `j`
/// two-cycles:
///
/// `E = (n-1)(1 - k/(n-1))^t` and
/// `E² = 1 + E + f_{hook} ρ_{hook}^t + f_{two} ρ_{two}^t` from `χ² = χ^n + χ^{n-1,1} + χ^{n-2,1,1} + χ^{n-2,2}`.
pub fn moments_fixed_points(n: usize, k: usize, j: usize, t: usize) -> Result<MomentReport> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("moment formulas need n >= 5, got {n}")));
    }
    if k > n || 2 * j > k || (k > 0 && k < 2) {
        return Err(Error::OutOfRange(format!("need 2j <= k <= n with k != 1, got n = {n}, k = {k}, j = {j}")));
    }
    let (n, k, j) = (n as i64, k as i64, j as i64);
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let one = BigRational::one();
    let mean = rat(BigInt::from(n - 1)) * pow(&q(n - 1 - k, n - 1), t);

    let pair = (n - 1 - k) * (n - 2 - k);
    let f_hook = (n - 1) * (n - 2);
    let f_two = (n - 1) * (n - 2) - 2;
    let hook = q(f_hook, 2) * pow(&q(pair - 2 * j, f_hook), t);
    let two = q(f_two, 2) * pow(&q(pair + 2 * j - 2, f_two), t);
    let second_moment = one + &mean + hook + two;
    let variance = &second_moment - &mean * &mean;
    Ok(MomentReport { mean, second_moment, variance })
}

/// The same moments read off an exact class distribution.
pub fn moments_from_distribution(dist: &ClassDistribution) -> Result<MomentReport> {
    let chi = |c: &CycleType| BigInt::from(c.fixed_points() as i64 - 1);
    let mean = dist.expectation(chi).ok_or_else(|| Error::OutOfRange("exact distribution required".into()))?;
    let second_moment = dist.expectation(|c| chi(c) * chi(c)).expect("exact checked above");
    let variance = &second_moment - &mean * &mean;
    Ok(MomentReport { mean, second_moment, variance })
}

/// Chebyshev lower bound `max(0, 1 - Var/(E - √E)² - 1/E)` on the distance to
/// `U_t`, from the test set `{χ^{(n-1,1)} > √E}`; zero when `E ≤ 1`.
pub fn tv_lower_bound(n: usize, k: usize, j: usize, t: usize) -> Result<f64> {
    let m = moments_fixed_points(n, k, j, t)?;
    Ok(chebyshev_bound(&m))
}

fn chebyshev_bound(m: &MomentReport) -> f64 {
    let e = arith::to_f64(&m.mean);
    if e <= 1.0 {
        return 0.0;
    }
    let var = arith::to_f64(&m.variance).max(0.0);
    let gap = e - e.sqrt();
    (1.0 - var / (gap * gap) - 1.0 / e).max(0.0)
}

/// One row of a cutoff scan.
#[derive(Clone, Debug, PartialEq)]
pub struct CutoffRow {
    pub t: usize,
    pub tv_exact: BigRational,
    pub tv_upper: f64,
    pub tv_lower: f64,
    pub coset_sign: i32,
}

impl Serialize for CutoffRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CutoffRow", 6)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("tv_exact", &self.tv_exact.to_string())?;
        st.serialize_field("tv_exact_f64", &arith::to_f64(&self.tv_exact))?;
        st.serialize_field("tv_upper", &self.tv_upper)?;
        st.serialize_field("tv_lower", &self.tv_lower)?;
        st.serialize_field("coset_sign", &self.coset_sign)?;
        st.end()
    }
}

/// Exact distance, L² upper bound and Chebyshev lower bound for each `t`.
/// The lower bound is reported as 0 when `n < 5`, where its moment formulas
/// do not apply.
pub fn cutoff_scan(
    table: &CharacterTable,
    class: &CycleType,
    ts: impl IntoIterator<Item = usize>,
) -> Result<Vec<CutoffRow>> {
    if class.n() != table.n() {
        return Err(Error::SizeMismatch { expected: table.n(), got: class.n() });
    }
    let ts: Vec<usize> = ts.into_iter().collect();
    let n = table.n();
    ts.par_iter()
        .map(|&t| {
            let tv_lower =
                if n >= 5 { tv_lower_bound(n, class.nontrivial_total(), class.two_cycles(), t)? } else { 0.0 };
            Ok(CutoffRow {
                t,
                tv_exact: exact_tv(table, class, t)?,
                tv_upper: tv_upper_bound_exact(table, class, t)?,
                tv_lower,
                coset_sign: coset_sign(class, t),
            })
        })
        .collect()
}

pub fn write_cutoff_csv<W: Write>(rows: &[CutoffRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("csv write failed: {e}"));
    w.write_record(["t", "tv_exact", "tv_exact_f64", "tv_upper", "tv_lower", "coset_sign"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            r.tv_exact.to_string(),
            arith::format_sig6(arith::to_f64(&r.tv_exact)),
            arith::format_sig6(r.tv_upper),
            arith::format_sig6(r.tv_lower),
            r.coset_sign.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv flush failed: {e}")))
}
