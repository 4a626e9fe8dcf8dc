//! Character-free oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use kcycle::partitions::{classes, CycleType, Partition};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Every permutation of `0..n` as an image array, by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn cycle_type(perm: &[usize]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut lens = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            lens.push(len);
        }
    }
    CycleType::new(Partition::from_unsorted(lens).unwrap())
}

/// `(σ ∘ c)(x) = σ(c(x))`.
pub fn compose(sigma: &[usize], c: &[usize]) -> Vec<usize> {
    c.iter().map(|&x| sigma[x]).collect()
}

/// One representative permutation of a cycle type.
pub fn representative(class: &CycleType) -> Vec<usize> {
    let n = class.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for &len in class.cycles().parts() {
        for j in 0..len {
            perm[start + j] = start + (j + 1) % len;
        }
        start += len;
    }
    perm
}

/// Class-level walk built by brute force over the elements of `C`:
/// `M[ρ][ρ'] = #{c ∈ C : σ_ρ ∘ c ∈ ρ'}`, exact because both laws are class functions.
pub struct BruteWalk {
    pub classes: Vec<CycleType>,
    index: HashMap<CycleType, usize>,
    counts: Vec<Vec<u64>>,
    class_size: u64,
}

impl BruteWalk {
    pub fn new(generator: &CycleType) -> Self {
        let n = generator.n();
        let cls = classes(n).unwrap();
        let index: HashMap<CycleType, usize> = cls.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let elements: Vec<Vec<usize>> =
            all_permutations(n).into_iter().filter(|p| &cycle_type(p) == generator).collect();
        let counts = cls
            .iter()
            .map(|rho| {
                let sigma = representative(rho);
                let mut row = vec![0u64; cls.len()];
                for c in &elements {
                    row[index[&cycle_type(&compose(&sigma, c))]] += 1;
                }
                row
            })
            .collect();
        Self { classes: cls, index, counts, class_size: elements.len() as u64 }
    }

    pub fn class_size(&self) -> u64 {
        self.class_size
    }

    /// Exact law after `t` steps from the identity.
    pub fn distribution(&self, t: usize) -> Vec<BigRational> {
        let n = self.classes[0].n();
        let mut p = vec![BigRational::zero(); self.classes.len()];
        p[self.index[&CycleType::identity(n).unwrap()]] = BigRational::one();
        let step = BigRational::from_integer(BigInt::from(self.class_size));
        for _ in 0..t {
            let mut next = vec![BigRational::zero(); p.len()];
            for (i, pi) in p.iter().enumerate() {
                if pi.is_zero() {
                    continue;
                }
                for (j, &m) in self.counts[i].iter().enumerate() {
                    if m > 0 {
                        next[j] += pi * BigRational::from_integer(BigInt::from(m)) / &step;
                    }
                }
            }
            p = next;
        }
        p
    }

    pub fn prob(&self, dist: &[BigRational], class: &CycleType) -> BigRational {
        dist[self.index[class]].clone()
    }
}
