use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::ExactRatio;
use crate::arith::{falling, Product};
use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Nonzero terms of the residue sum
/// `(1/n^{(k)}) Σ_i μ_i^{(k)} Π_{j≠i} (μ_i - μ_j - k)/(μ_i - μ_j)`,
/// keyed by the row index `i` they come from.
///
/// A row with `μ_i < k` drops out through its falling factorial, and a row
/// whose shifted value `μ_i - k` lands on another `μ_j` drops out through the
/// vanishing numerator factor.
pub fn kcycle_residue_terms(lambda: &Partition, k: usize) -> Result<Vec<(usize, BigRational)>> {
    let n = lambda.n();
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("k-cycle needs 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let mu: Vec<i64> = lambda.mu_vector(n)?.into_iter().map(|m| m as i64).collect();
    let occupied: HashSet<i64> = mu.iter().copied().collect();
    let k = k as i64;
    let n_falling = falling(n as i64, k as usize);

    let mut terms = Vec::new();
    for (i, &mi) in mu.iter().enumerate() {
        if mi < k || occupied.contains(&(mi - k)) {
            continue;
        }
        let mut numer = Product::new();
        let mut denom = Product::new();
        for (j, &mj) in mu.iter().enumerate() {
            if j != i {
                numer.mul(mi - mj - k);
                denom.mul(mi - mj);
            }
        }
        let numer = numer.finish() * falling(mi, k as usize);
        let denom = denom.finish() * &n_falling;
        terms.push((i, BigRational::new(numer, denom)));
    }
    Ok(terms)
}

/// Exact character ratio `χ^λ(k, 1^{n-k}) / f^λ` by residue evaluation.
pub fn char_ratio_kcycle(lambda: &Partition, k: usize) -> Result<ExactRatio> {
    let sum = kcycle_residue_terms(lambda, k)?.into_iter().fold(BigRational::zero(), |acc, (_, t)| acc + t);
    Ok(ExactRatio(sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn trivial_representation_is_one() {
        for n in 2..14 {
            for k in 2..=n {
                let r = char_ratio_kcycle(&Partition::row(n).unwrap(), k).unwrap();
                assert!(r.value().is_one(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn standard_representation_examples() {
        let r = char_ratio_kcycle(&"4,1".parse().unwrap(), 2).unwrap();
        assert_eq!(r.value(), &q(1, 2));
        let r = char_ratio_kcycle(&"2,1".parse().unwrap(), 3).unwrap();
        assert_eq!(r.value(), &q(-1, 2));
    }

    #[test]
    fn rejects_bad_cycle_length() {
        let lambda: Partition = "3,2".parse().unwrap();
        assert!(char_ratio_kcycle(&lambda, 1).is_err());
        assert!(char_ratio_kcycle(&lambda, 6).is_err());
    }
}
