//! Integer partitions, used as keys for power-sum monomials and as Schur
//! function labels.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A weakly decreasing list of positive integers.
///
/// Partitions are ordered canonically: first by degree, then in descending
/// lexicographic order of their parts, so `[4] < [3,1] < [2,2] < [2,1,1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
    degree: u32,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from parts in any order; zero parts are dropped.
    pub fn from_parts_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let degree = parts.iter().sum();
        Self { parts, degree }
    }

    /// Validating constructor: parts must be positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        let degree = parts.iter().sum();
        Ok(Self { parts, degree })
    }

    /// `(part, multiplicity)` pairs; parts in decreasing order.
    pub fn from_multiplicities(mults: &[(u32, u32)]) -> Self {
        let mut parts = Vec::new();
        for &(part, m) in mults {
            parts.extend(std::iter::repeat(part).take(m as usize));
        }
        Self::from_parts_unsorted(parts)
    }

    /// The one-row partition `[n]`, or the empty partition when `n == 0`.
    pub fn row(n: u32) -> Self {
        Self::from_parts_unsorted(vec![n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(part, multiplicity)` pairs with parts in decreasing order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiset union of the parts (the key of `p_self * p_other`).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i] >= other.parts[j] {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.parts[i..]);
        parts.extend_from_slice(&other.parts[j..]);
        Partition { parts, degree: self.degree + other.degree }
    }

    /// Every part multiplied by `r`.
    pub fn scaled(&self, r: u32) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&p| p * r).collect(),
            degree: self.degree * r,
        }
    }

    /// The transpose: column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts: Vec<u32> = (1..=first)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count() as u32)
            .collect();
        Partition { parts, degree: self.degree }
    }

    /// True when every column of the Young diagram has even length.
    pub fn has_even_columns(&self) -> bool {
        self.multiplicities().iter().all(|&(_, m)| m % 2 == 0)
    }

    /// `z_λ = Π_i i^{m_i} m_i!`, the centralizer order of a permutation of
    /// cycle type λ.
    pub fn z_factor(&self) -> BigUint {
        let mut z = BigUint::one();
        for (part, m) in self.multiplicities() {
            for t in 1..=m {
                z *= BigUint::from(part) * BigUint::from(t);
            }
        }
        z
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// All partitions of `n` with parts at most `max_part` (unbounded when
/// `None`), in canonical descending-lexicographic order.
pub fn partitions_of(n: u32, max_part: Option<u32>) -> Vec<Partition> {
    let cap = max_part.unwrap_or(n).min(n);
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition::empty());
        return out;
    }
    if cap == 0 {
        return out;
    }
    let mut current = Vec::with_capacity(n as usize);
    fill(n, cap, &mut current, &mut out);
    out
}

fn fill(rest: u32, cap: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { degree: current.iter().sum(), parts: current.clone() });
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        current.push(p);
        fill(rest - p, p, current, out);
        current.pop();
    }
}

/// Number of partitions of `n`, via Euler's pentagonal recurrence.
pub fn partition_count(n: u32) -> u128 {
    let n = n as usize;
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc: i128 = 0;
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1] as i128;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2] as i128;
            }
        }
        p[m] = acc as u128;
    }
    p[n]
}
