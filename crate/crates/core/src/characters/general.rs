use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{dimension, to_bigint};
use crate::arith::{falling, Product};
use crate::error::{Error, Result};
use crate::partitions::{CycleType, Partition};

/// Upper limit on `n^r`, the raw size of the tuple sum for `r` nontrivial cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneralBudget(pub u128);

pub const DEFAULT_GENERAL_BUDGET: GeneralBudget = GeneralBudget(100_000_000);

impl Default for GeneralBudget {
    fn default() -> Self {
        DEFAULT_GENERAL_BUDGET
    }
}

/// Exact `χ^λ(ρ)` from the tuple sum over placements `(i_1, ..., i_r)` of the
/// nontrivial cycles `k_1 >= ... >= k_r` of `ρ` onto rows of `μ`:
///
/// `χ^λ(ρ) / f^λ = (1/n^{(k)}) Σ μ^{(v)} Δ(μ - v) / Δ(μ)`, `v = Σ k_j e_{i_j}`.
///
/// Placements that would drive a coordinate negative are cut off as soon as
/// the offending cycle is placed. A complete placement whose shifted vector
/// has a repeated coordinate contributes zero. Cycles of equal length are
/// placed as multisets with the matching multinomial weight, since the term
/// only depends on `v`.
pub fn char_general(lambda: &Partition, rho: &CycleType, budget: GeneralBudget) -> Result<BigInt> {
    let n = lambda.n();
    if rho.n() != n {
        return Err(Error::SizeMismatch { expected: n, got: rho.n() });
    }
    let dim = dimension(lambda);
    let cycles = rho.nontrivial_cycles();
    if cycles.is_empty() {
        return Ok(to_bigint(&dim));
    }
    let cost = (n as u128).saturating_pow(cycles.len() as u32);
    if cost > budget.0 {
        return Err(Error::BudgetExceeded { cost, budget: budget.0 });
    }

    let mu: Vec<i64> = lambda.mu_vector(n)?.into_iter().map(|m| m as i64).collect();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &c in cycles {
        match groups.last_mut() {
            Some((len, mult)) if *len == c => *mult += 1,
            _ => groups.push((c, 1)),
        }
    }

    let mut walk = TupleWalk {
        mu: &mu,
        groups: &groups,
        shifted: mu.clone(),
        placed: Vec::with_capacity(cycles.len()),
        sum: BigRational::zero(),
    };
    walk.descend(0, 0, 0, 1);

    let k: usize = cycles.iter().sum();
    let ratio = walk.sum / BigRational::from_integer(falling(n as i64, k));
    let chi = ratio * BigRational::from_integer(to_bigint(&dim));
    debug_assert!(chi.is_integer(), "character value must be an integer");
    Ok(chi.to_integer())
}

struct TupleWalk<'a> {
    mu: &'a [i64],
    groups: &'a [(usize, usize)],
    /// `μ - v` for the cycles placed so far.
    shifted: Vec<i64>,
    /// (row, cycle length) in placement order.
    placed: Vec<(usize, usize)>,
    sum: BigRational,
}

impl TupleWalk<'_> {
    fn descend(&mut self, group: usize, filled: usize, min_row: usize, weight: u64) {
        if group == self.groups.len() {
            self.leaf(weight);
            return;
        }
        let (len, mult) = self.groups[group];
        if filled == mult {
            let weight = weight * multinomial_weight(&self.placed[self.placed.len() - mult..]);
            self.descend(group + 1, 0, 0, weight);
            return;
        }
        for row in min_row..self.mu.len() {
            if self.shifted[row] < len as i64 {
                continue;
            }
            self.shifted[row] -= len as i64;
            self.placed.push((row, len));
            self.descend(group, filled + 1, row, weight);
            self.placed.pop();
            self.shifted[row] += len as i64;
        }
    }

    fn leaf(&mut self, weight: u64) {
        let mut touched: Vec<usize> = self.placed.iter().map(|&(row, _)| row).collect();
        touched.sort_unstable();
        touched.dedup();

        let w = &self.shifted;
        for &t in &touched {
            if w.iter().enumerate().any(|(j, &wj)| j != t && wj == w[t]) {
                return;
            }
        }

        let mut numer = Product::new();
        numer.mul(weight as i64);
        let mut replay = self.mu.to_vec();
        for &(row, len) in &self.placed {
            for i in 0..len as i64 {
                numer.mul(replay[row] - i);
            }
            replay[row] -= len as i64;
        }
        let mut denom = Product::new();
        let is_touched = |i: usize| touched.binary_search(&i).is_ok();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if is_touched(i) || is_touched(j) {
                    numer.mul(w[i] - w[j]);
                    denom.mul(self.mu[i] - self.mu[j]);
                }
            }
        }
        self.sum += BigRational::new(numer.finish(), denom.finish());
    }
}

/// `m! / Π c_i!` for the run lengths `c_i` of a sorted placement block.
fn multinomial_weight(block: &[(usize, usize)]) -> u64 {
    let fact = |m: usize| (1..=m as u64).product::<u64>();
    let mut w = fact(block.len());
    let mut i = 0;
    while i < block.len() {
        let run = block[i..].iter().take_while(|b| b.0 == block[i].0).count();
        w /= fact(run);
        i += run;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_representation() {
        for rho in ["3,2,1", "2,2,2", "6"] {
            let chi = char_general(&Partition::row(6).unwrap(), &class(rho), GeneralBudget::default()).unwrap();
            assert_eq!(chi, BigInt::from(1));
        }
    }

    #[test]
    fn spot_values() {
        let b = GeneralBudget::default();
        assert_eq!(char_general(&"2,2".parse().unwrap(), &class("2,2"), b).unwrap(), BigInt::from(2));
        assert_eq!(char_general(&"3,1,1".parse().unwrap(), &class("2,2,1"), b).unwrap(), BigInt::from(-2));
        assert_eq!(char_general(&"2,1".parse().unwrap(), &class("1,1,1"), b).unwrap(), BigInt::from(2));
    }

    #[test]
    fn enforces_budget_and_size() {
        let lambda: Partition = "3,3".parse().unwrap();
        let err = char_general(&lambda, &class("2,2,2"), GeneralBudget(100)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { cost: 216, budget: 100 });
        assert!(char_general(&lambda, &class("2,2"), GeneralBudget::default()).is_err());
    }

    #[test]
    fn multinomial_weights() {
        assert_eq!(multinomial_weight(&[(0, 2), (0, 2), (3, 2)]), 3);
        assert_eq!(multinomial_weight(&[(1, 2), (2, 2), (3, 2)]), 6);
        assert_eq!(multinomial_weight(&[(1, 2), (1, 2)]), 1);
    }
}
