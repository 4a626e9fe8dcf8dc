use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{CycleType, Partition};

/// Murnaghan–Nakayama recursion with a memo on (remaining shape, remaining cycles).
///
/// Rim hooks of length `k` correspond to cells of hook length `k`; removing
/// the rim hook of cell `(i, j)` contributes `(-1)^{leg}`. One oracle per
/// worker; the memo is not shared.
#[derive(Debug, Default)]
pub struct MnOracle {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl MnOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn character(&mut self, lambda: &Partition, rho: &CycleType) -> Result<BigInt> {
        if lambda.n() != rho.n() {
            return Err(Error::SizeMismatch { expected: lambda.n(), got: rho.n() });
        }
        Ok(self.eval(lambda.parts().to_vec(), rho.cycles().parts().to_vec()))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn eval(&mut self, shape: Vec<usize>, cycles: Vec<usize>) -> BigInt {
        if cycles.is_empty() {
            return if shape.is_empty() { BigInt::one() } else { BigInt::zero() };
        }
        let key = (shape, cycles);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (shape, cycles) = key;
        let k = cycles[0];
        let rest = cycles[1..].to_vec();
        let mut total = BigInt::zero();
        for (smaller, leg) in remove_rim_hooks(&shape, k) {
            let chi = self.eval(smaller, rest.clone());
            if leg % 2 == 0 {
                total += chi;
            } else {
                total -= chi;
            }
        }
        self.memo.insert((shape, cycles), total.clone());
        total
    }
}

/// Every way to strip a rim hook of length `k`, with its leg length.
fn remove_rim_hooks(shape: &[usize], k: usize) -> Vec<(Vec<usize>, usize)> {
    let rows = shape.len();
    let col_len = |j: usize| shape.iter().take_while(|&&p| p > j).count();
    let mut out = Vec::new();
    for i in 0..rows {
        for j in 0..shape[i] {
            let arm = shape[i] - j - 1;
            let leg = col_len(j) - i - 1;
            if arm + leg + 1 != k {
                continue;
            }
            let mut next = shape.to_vec();
            for r in i..i + leg {
                next[r] = shape[r + 1] - 1;
            }
            next[i + leg] = j;
            while next.last() == Some(&0) {
                next.pop();
            }
            out.push((next, leg));
        }
    }
    out
}

/// One-shot Murnaghan–Nakayama evaluation of `χ^λ(ρ)`.
pub fn char_mn(lambda: &Partition, rho: &CycleType) -> Result<BigInt> {
    MnOracle::new().character(lambda, rho)
}
