//! Small exact-arithmetic helpers shared by the character engines.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_LIMIT: i128 = 1 << 100;

/// Running product of machine integers, spilling into a `BigInt` only when needed.
#[derive(Clone, Debug)]
pub(crate) struct Product {
    big: BigInt,
    small: i128,
}

impl Product {
    pub(crate) fn new() -> Self {
        Self { big: BigInt::one(), small: 1 }
    }

    pub(crate) fn mul(&mut self, x: i64) {
        match self.small.checked_mul(x as i128) {
            Some(v) if v.abs() < SMALL_LIMIT => self.small = v,
            _ => {
                self.big *= self.small;
                self.small = x as i128;
            }
        }
    }

    pub(crate) fn finish(self) -> BigInt {
        self.big * self.small
    }
}

/// `x (x-1) ... (x-k+1)`.
pub fn falling(x: i64, k: usize) -> BigInt {
    let mut p = Product::new();
    for i in 0..k as i64 {
        p.mul(x - i);
    }
    p.finish()
}

/// Natural log of `|q|` for a possibly huge rational; `-inf` for zero.
pub fn ln_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

pub(crate) fn ln_bigint(x: &BigInt) -> f64 {
    let x = x.abs();
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (&x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Float value of a rational that may have enormous numerator and denominator.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    match q.to_f64() {
        Some(v) if v.is_finite() && v != 0.0 => v,
        _ => sign * ln_abs(q).exp(),
    }
}

/// A float with six significant digits and trailing zeros dropped;
/// scientific notation outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `ln n!` by direct summation.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
