//! Integer partitions, Frobenius coordinates and cycle types of `S_n`.
//!
//! A [`Partition`] indexes both an irreducible representation and a conjugacy
//! class. Frobenius half-integers are stored doubled, so `5/2` is held as `5`
//! and every stored value is odd.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Weakly decreasing positive parts summing to `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("partition of 0 is not supported".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Builds a partition from parts in any order; zeros are dropped.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), with implicit trailing zeros.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> usize {
        self.parts[0]
    }

    /// Reflection of the Young diagram in its diagonal.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let conj = (1..=cols).map(|c| self.parts.iter().take_while(|&&p| p >= c).count()).collect();
        Partition { parts: conj }
    }

    /// Length of the main diagonal of the Young diagram.
    pub fn diagonal(&self) -> usize {
        self.parts.iter().enumerate().take_while(|(i, &p)| p > *i).count()
    }

    pub fn to_frobenius(&self) -> FrobeniusCoords {
        let m = self.diagonal();
        let conj = self.conjugate();
        // doubled a_i = 2(λ_i - i) + 1 with 0-based i
        let a2 = (0..m).map(|i| 2 * (self.parts[i] - i) - 1).collect();
        let b2 = (0..m).map(|i| 2 * (conj.parts[i] - i) - 1).collect();
        FrobeniusCoords { a2, b2 }
    }

    pub fn from_frobenius(fc: &FrobeniusCoords) -> Partition {
        let m = fc.m();
        // λ_i = a_i + i - 1/2 (1-based), likewise for the conjugate
        let rows: Vec<usize> = (0..m).map(|i| fc.a2[i].div_ceil(2) + i).collect();
        let cols: Vec<usize> = (0..m).map(|j| fc.b2[j].div_ceil(2) + j).collect();
        let mut parts = rows;
        let depth = cols[0];
        for i in m..depth {
            parts.push(cols.iter().take_while(|&&c| c > i).count());
        }
        Partition { parts }
    }

    /// `μ = λ + (n-1, n-2, ..., 0)` with λ padded by zeros to length `n`.
    pub fn mu_vector(&self, n: usize) -> Result<Vec<usize>> {
        if self.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: self.n() });
        }
        Ok((0..n).map(|i| self.part(i) + n - 1 - i).collect())
    }

    /// Boxes outside both the first row and the diagonal square.
    pub fn delta_statistic(&self) -> usize {
        let m = self.diagonal();
        self.n() - m * m - (self.parts[0] - m)
    }

    /// Row notation hook lengths, row by row.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.n());
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks.push(row - j - 1 + conj.parts[j] - i - 1 + 1);
            }
        }
        hooks
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition part {t:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Frobenius coordinates `(a_1, ..., a_m | b_1, ..., b_m)`, each stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusCoords {
    a2: Vec<usize>,
    b2: Vec<usize>,
}

impl FrobeniusCoords {
    /// Takes doubled coordinates; each list must be strictly decreasing and odd.
    pub fn new(a2: Vec<usize>, b2: Vec<usize>) -> Result<Self> {
        if a2.is_empty() || a2.len() != b2.len() {
            return Err(Error::InvalidFrobenius(format!(
                "arm and leg lists must be nonempty and of equal length, got {} and {}",
                a2.len(),
                b2.len()
            )));
        }
        for (name, v) in [("a", &a2), ("b", &b2)] {
            if let Some(x) = v.iter().find(|&&x| x % 2 == 0) {
                return Err(Error::InvalidFrobenius(format!("{name} coordinate {x}/2 is not a half-integer")));
            }
            if v.windows(2).any(|w| w[0] <= w[1]) {
                return Err(Error::InvalidFrobenius(format!("{name} coordinates are not strictly decreasing")));
            }
        }
        Ok(Self { a2, b2 })
    }

    pub fn m(&self) -> usize {
        self.a2.len()
    }

    /// Doubled arm coordinates `2 a_i`.
    pub fn a_doubled(&self) -> &[usize] {
        &self.a2
    }

    /// Doubled leg coordinates `2 b_i`.
    pub fn b_doubled(&self) -> &[usize] {
        &self.b2
    }

    pub fn a(&self, i: usize) -> f64 {
        self.a2[i] as f64 / 2.0
    }

    pub fn b(&self, i: usize) -> f64 {
        self.b2[i] as f64 / 2.0
    }

    /// `Σ a_i + Σ b_i`, the size of the partition.
    pub fn mass(&self) -> usize {
        (self.a2.iter().sum::<usize>() + self.b2.iter().sum::<usize>()) / 2
    }
}

impl fmt::Display for FrobeniusCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| format!("{x}/2")).collect::<Vec<_>>().join(",");
        write!(f, "a:{};b:{}", join(&self.a2), join(&self.b2))
    }
}

impl FromStr for FrobeniusCoords {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected \"a:<p/2,...>;b:<q/2,...>\", got {s:?}"));
        let (a, b) = s.split_once(';').ok_or_else(bad)?;
        let a = a.trim().strip_prefix("a:").ok_or_else(bad)?;
        let b = b.trim().strip_prefix("b:").ok_or_else(bad)?;
        let parse = |list: &str| -> Result<Vec<usize>> {
            list.split(',')
                .map(|t| {
                    let t = t.trim();
                    let num = t.strip_suffix("/2").ok_or_else(bad)?;
                    num.parse::<usize>().map_err(|_| bad())
                })
                .collect()
        };
        FrobeniusCoords::new(parse(a)?, parse(b)?)
    }
}

/// All partitions of `n` in reverse-lexicographic order, starting at `(n)`.
pub fn partitions(n: usize) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    Ok(Partitions { next: Some(vec![n]) })
}

/// Convenience wrapper collecting [`partitions`].
pub fn partition_list(n: usize) -> Result<Vec<Partition>> {
    Ok(partitions(n)?.collect())
}

#[derive(Clone, Debug)]
pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        if let Some(i) = current.iter().rposition(|&p| p > 1) {
            let mut parts = current[..=i].to_vec();
            let mut rest = current.len() - i;
            parts[i] -= 1;
            let v = parts[i];
            while rest > 0 {
                let take = rest.min(v);
                parts.push(take);
                rest -= take;
            }
            self.next = Some(parts);
        }
        Some(Partition { parts: current })
    }
}

/// A conjugacy class of `S_n`, given by its cycle structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType {
    cycles: Partition,
}

impl CycleType {
    pub fn new(cycles: Partition) -> Self {
        Self { cycles }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self::new(Partition::column(n)?))
    }

    /// The class `(k, 1^{n-k})` of a single `k`-cycle.
    pub fn k_cycle(n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::OutOfRange(format!("k-cycle needs 2 <= k <= n, got k = {k}, n = {n}")));
        }
        let mut parts = vec![k];
        parts.extend(std::iter::repeat_n(1, n - k));
        Ok(Self::new(Partition::new(parts)?))
    }

    pub fn cycles(&self) -> &Partition {
        &self.cycles
    }

    pub fn n(&self) -> usize {
        self.cycles.n()
    }

    pub fn fixed_points(&self) -> usize {
        self.cycles.parts().iter().filter(|&&p| p == 1).count()
    }

    pub fn two_cycles(&self) -> usize {
        self.cycles.parts().iter().filter(|&&p| p == 2).count()
    }

    /// `k = n - i_1`, the number of points moved.
    pub fn nontrivial_total(&self) -> usize {
        self.n() - self.fixed_points()
    }

    /// Cycle lengths greater than one, in decreasing order.
    pub fn nontrivial_cycles(&self) -> &[usize] {
        let r = self.cycles.parts().iter().take_while(|&&p| p > 1).count();
        &self.cycles.parts()[..r]
    }

    /// `(-1)^(n - number of cycles)`.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.cycles.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `n! / Π_j j^{m_j} m_j!`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.n()) / self.centralizer_order()
    }

    /// `Π_j j^{m_j} m_j!`, the order of the centralizer of any class element.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        let parts = self.cycles.parts();
        let mut i = 0;
        while i < parts.len() {
            let j = parts[i];
            let mult = parts[i..].iter().take_while(|&&p| p == j).count();
            z *= BigUint::from(j).pow(mult as u32) * factorial(mult);
            i += mult;
        }
        z
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cycles.fmt(f)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(CycleType::new(s.parse()?))
    }
}

/// All conjugacy classes of `S_n`, in reverse-lexicographic order.
pub fn classes(n: usize) -> Result<Vec<CycleType>> {
    Ok(partitions(n)?.map(CycleType::new).collect())
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}
