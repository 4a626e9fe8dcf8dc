//! Exact irreducible characters and dimensions of `S_n`.
//!
//! Three independent routes are provided:
//!
//! * [`char_ratio_kcycle`]: the residue sum for a single `k`-cycle,
//!   one product of linear-factor ratios per row of `μ = λ + (n-1, ..., 0)`;
//! * [`char_general`]: the tuple sum over placements of every nontrivial
//!   cycle of the class;
//! * [`char_mn`]: the Murnaghan–Nakayama border-strip recursion, used as the
//!   oracle for the other two.
//!
//! Everything in this module is exact; no floating point enters a character value.

mod general;
mod mn;
mod residue;
mod table;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::arith::{self, Product};
use crate::error::{Error, Result};
use crate::partitions::{factorial, CycleType, Partition};

pub use general::{char_general, GeneralBudget, DEFAULT_GENERAL_BUDGET};
pub use mn::{char_mn, MnOracle};
pub use residue::{char_ratio_kcycle, kcycle_residue_terms};
pub use table::{CharacterTable, DEFAULT_TABLE_CAP};

/// An exact character ratio `χ^λ(C) / f^λ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(pub BigRational);

impl ExactRatio {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        arith::to_f64(&self.0)
    }

    /// `ln |ratio|`, or `-inf` when the ratio vanishes.
    pub fn ln_abs(&self) -> f64 {
        arith::ln_abs(&self.0)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

/// `f^λ = n! / (μ_1! ... μ_n!) · Π_{i<j} (μ_i - μ_j)`.
pub fn dimension(lambda: &Partition) -> BigUint {
    let n = lambda.n();
    let mu = lambda.mu_vector(n).expect("mu vector of own size");
    let mut vandermonde = Product::new();
    for i in 0..n {
        for j in i + 1..n {
            vandermonde.mul((mu[i] - mu[j]) as i64);
        }
    }
    let denom = mu.iter().fold(BigUint::one(), |acc, &m| acc * factorial(m));
    let numer = factorial(n) * vandermonde.finish().to_biguint().expect("μ is strictly decreasing");
    numer / denom
}

/// Hook-length formula `n! / Π h(c)`; an independent code path for [`dimension`].
pub fn dimension_hook_oracle(lambda: &Partition) -> BigUint {
    let hooks = lambda.hook_lengths();
    let denom = hooks.iter().fold(BigUint::one(), |acc, &h| acc * BigUint::from(h));
    factorial(lambda.n()) / denom
}

/// `ln f^λ` from hook lengths, in floating point; usable far beyond exact caps.
pub fn ln_dimension(lambda: &Partition) -> f64 {
    arith::ln_factorial(lambda.n()) - lambda.hook_lengths().iter().map(|&h| (h as f64).ln()).sum::<f64>()
}

/// The three characters with closed forms in the fixed-point and 2-cycle counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmallRep {
    /// `(n-1, 1)`: `i_1 - 1`.
    Standard,
    /// `(n-2, 1, 1)`: `(i_1-1)(i_1-2)/2 - i_2`.
    HookTwo,
    /// `(n-2, 2)`: `(i_1-1)(i_1-2)/2 + i_2 - 1`.
    TwoRow,
}

impl SmallRep {
    pub fn partition(self, n: usize) -> Result<Partition> {
        let min = if self == SmallRep::Standard { 2 } else { 4 };
        if n < min {
            return Err(Error::OutOfRange(format!("{self} needs n >= {min}, got {n}")));
        }
        match self {
            SmallRep::Standard => Partition::new(vec![n - 1, 1]),
            SmallRep::HookTwo => Partition::new(vec![n - 2, 1, 1]),
            SmallRep::TwoRow => Partition::new(vec![n - 2, 2]),
        }
    }
}

impl fmt::Display for SmallRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SmallRep::Standard => "n-1_1",
            SmallRep::HookTwo => "n-2_1_1",
            SmallRep::TwoRow => "n-2_2",
        })
    }
}

impl FromStr for SmallRep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n-1_1" => Ok(SmallRep::Standard),
            "n-2_1_1" => Ok(SmallRep::HookTwo),
            "n-2_2" => Ok(SmallRep::TwoRow),
            _ => Err(Error::Parse(format!("unknown small representation {s:?}"))),
        }
    }
}

/// Closed-form value of a small character on the class `rho`.
pub fn small_char(which: SmallRep, rho: &CycleType) -> Result<BigInt> {
    which.partition(rho.n())?;
    let i1 = BigInt::from(rho.fixed_points());
    let i2 = BigInt::from(rho.two_cycles());
    let one = BigInt::one();
    let pair = (&i1 - &one) * (&i1 - 2) / 2;
    Ok(match which {
        SmallRep::Standard => i1 - one,
        SmallRep::HookTwo => pair - i2,
        SmallRep::TwoRow => pair + i2 - one,
    })
}

/// The Larsen–Shalev proxy `D(λ) = (n-1)! / Π a_i'! b_i'!` with
/// `a_i' = λ_i - i` and `b_i' = λ_i' - i` along the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionProxy {
    pub exact: BigRational,
    pub log: f64,
}

pub fn larsen_shalev_d(lambda: &Partition) -> DimensionProxy {
    let n = lambda.n();
    let conj = lambda.conjugate();
    let m = lambda.diagonal();
    let mut denom = BigUint::one();
    let mut log = arith::ln_factorial(n - 1);
    for i in 0..m {
        let a = lambda.part(i) - i - 1;
        let b = conj.part(i) - i - 1;
        denom *= factorial(a) * factorial(b);
        log -= arith::ln_factorial(a) + arith::ln_factorial(b);
    }
    let exact =
        BigRational::new(BigInt::from_biguint(Sign::Plus, factorial(n - 1)), BigInt::from_biguint(Sign::Plus, denom));
    DimensionProxy { exact, log }
}

/// `ln f^λ / ln D(λ)`, the quantity that tends to 1; `None` when `D(λ) = 1`.
pub fn larsen_shalev_diagnostic(lambda: &Partition) -> Option<f64> {
    let d = larsen_shalev_d(lambda);
    if d.exact.is_one() {
        return None;
    }
    let ln_f = dimension(lambda).to_f64().map(f64::ln).unwrap_or_else(|| ln_dimension(lambda));
    Some(ln_f / d.log)
}

pub(crate) fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

pub(crate) fn ratio_from_integer(chi: &BigInt, dim: &BigUint) -> BigRational {
    BigRational::new(chi.clone(), to_bigint(dim))
}
