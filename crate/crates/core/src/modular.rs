//! Multi-modular fast path for Sp-invariant pairings.
//!
//! A power-sum combination is reduced modulo two 61/62-bit primes. The
//! pairing `⟨G·H, B⟩` with the Littlewood series is accumulated directly as
//! `Σ_{λ,μ} G_λ H_μ ω(λ ∪ μ)` where `ω(ν) = Π_j a_j(m_j(ν))`, without ever
//! materializing `G·H`. The integer result is recovered by CRT and rejected
//! unless it is small and non-negative, which catches non-integral pairings
//! with overwhelming probability.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lie::littlewood_factor;
use crate::symfunc::SymmetricFunction;

pub const PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 62) - 57];

/// Results at or above this bound are treated as non-integral.
const RESULT_BOUND_BITS: u64 = 100;

/// Largest part size the packed key supports.
pub const MAX_PART: u32 = 255;

pub type Residues = [u64; 2];

#[inline(always)]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline(always)]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p { s - p } else { s }
}

#[inline(always)]
fn mul_res(a: Residues, b: Residues) -> Residues {
    [mul_mod(a[0], b[0], PRIMES[0]), mul_mod(a[1], b[1], PRIMES[1])]
}

#[inline(always)]
fn add_res(a: Residues, b: Residues) -> Residues {
    [add_mod(a[0], b[0], PRIMES[0]), add_mod(a[1], b[1], PRIMES[1])]
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "division by a multiple of the modulus");
    pow_mod(a, p - 2, p)
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = (n.magnitude() % BigUint::from(p)).to_u64().unwrap();
    if n.is_negative() && r != 0 { p - r } else { r }
}

pub fn reduce_rational(q: &BigRational) -> Residues {
    let mut out = [0; 2];
    for (slot, &p) in out.iter_mut().zip(PRIMES.iter()) {
        *slot = mul_mod(bigint_mod(q.numer(), p), inv_mod(bigint_mod(q.denom(), p), p), p);
    }
    out
}

/// Reconstructs the integer with the given residues, requiring
/// `0 <= value < 2^100`.
pub fn reconstruct_dimension(r: Residues, context: &str) -> Result<BigInt> {
    let (p1, p2) = (PRIMES[0] as u128, PRIMES[1] as u128);
    let inv = inv_mod(PRIMES[0] % PRIMES[1], PRIMES[1]) as u128;
    let diff = (r[1] as u128 + p2 - (r[0] as u128 % p2)) % p2;
    let t = (diff * inv) % p2;
    let value = r[0] as u128 + p1 * t;
    if value >> RESULT_BOUND_BITS != 0 {
        let modulus = p1 * p2;
        let shown = if modulus - value < 1 << RESULT_BOUND_BITS {
            format!("-{}", modulus - value)
        } else {
            format!("residues {r:?}")
        };
        return Err(Error::NonIntegerDimension { context: context.to_string(), value: shown });
    }
    Ok(BigInt::from(value))
}

/// Packed `(part << 8) | multiplicity` entries with parts increasing.
pub type PackedKey = SmallVec<[u16; 12]>;

#[inline(always)]
fn entry_part(e: u16) -> usize {
    (e >> 8) as usize
}

#[inline(always)]
fn entry_mult(e: u16) -> usize {
    (e & 0xff) as usize
}

/// Bit `(j − 1)/2` is set when odd part `j` has odd multiplicity; the
/// Littlewood weight of a monomial vanishes unless this mask is empty.
fn odd_mask(key: &[u16]) -> u128 {
    let mut mask = 0u128;
    for &e in key {
        let j = entry_part(e);
        if j % 2 == 1 && entry_mult(e) % 2 == 1 {
            mask |= 1u128 << ((j - 1) / 2);
        }
    }
    mask
}

fn merge_keys(a: &[u16], b: &[u16]) -> PackedKey {
    let mut out = PackedKey::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (pa, pb) = (entry_part(a[i]), entry_part(b[j]));
        if pa < pb {
            out.push(a[i]);
            i += 1;
        } else if pb < pa {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i] + entry_mult(b[j]) as u16);
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Table of `a_j(n) mod p` for `j, n <= max_degree`.
#[derive(Clone, Debug)]
pub struct WeightTable {
    stride: usize,
    values: Vec<Residues>,
}

impl WeightTable {
    pub fn new(max_degree: u32) -> Self {
        let stride = max_degree as usize + 1;
        let mut values = vec![[0; 2]; stride * stride];
        for j in 1..=max_degree {
            for n in 0..=max_degree / j {
                let a = littlewood_factor(j, n);
                values[j as usize * stride + n as usize] = [bigint_mod(&a, PRIMES[0]), bigint_mod(&a, PRIMES[1])];
            }
        }
        Self { stride, values }
    }

    pub fn max_degree(&self) -> u32 {
        self.stride as u32 - 1
    }

    #[inline(always)]
    fn factor(&self, j: usize, n: usize) -> Residues {
        self.values[j * self.stride + n]
    }

    #[inline(always)]
    fn weight(&self, key: &[u16]) -> Residues {
        let mut acc = [1, 1];
        for &e in key {
            acc = mul_res(acc, self.factor(entry_part(e), entry_mult(e)));
        }
        acc
    }

    /// Weight of the union of two keys, merging on the fly.
    #[inline(always)]
    fn weight_union(&self, a: &[u16], b: &[u16]) -> Residues {
        let mut acc = [1, 1];
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (pa, pb) = (entry_part(a[i]), entry_part(b[j]));
            let f = if pa < pb {
                i += 1;
                self.factor(pa, entry_mult(a[i - 1]))
            } else if pb < pa {
                j += 1;
                self.factor(pb, entry_mult(b[j - 1]))
            } else {
                i += 1;
                j += 1;
                self.factor(pa, entry_mult(a[i - 1]) + entry_mult(b[j - 1]))
            };
            acc = mul_res(acc, f);
        }
        for &e in a[i..].iter().chain(&b[j..]) {
            acc = mul_res(acc, self.factor(entry_part(e), entry_mult(e)));
        }
        acc
    }
}

/// A homogeneous power-sum combination reduced modulo [`PRIMES`], with terms
/// grouped by odd-parity mask.
#[derive(Clone, Debug, Default)]
pub struct ModPoly {
    degree: u32,
    keys: Vec<PackedKey>,
    coeffs: Vec<Residues>,
    masks: Vec<u128>,
    groups: FxHashMap<u128, (usize, usize)>,
}

impl ModPoly {
    pub fn from_symmetric_function(f: &SymmetricFunction) -> Result<Self> {
        let degree = f.homogeneous_degree()?;
        if degree > MAX_PART {
            return Err(Error::InvalidArgument(format!("degree {degree} exceeds the modular key range")));
        }
        let terms = f.iter().map(|(k, c)| {
            let mut key = PackedKey::new();
            for (part, m) in k.multiplicities().into_iter().rev() {
                key.push(((part as u16) << 8) | m as u16);
            }
            (key, reduce_rational(c))
        });
        Ok(Self::from_terms(degree, terms))
    }

    fn from_terms(degree: u32, terms: impl Iterator<Item = (PackedKey, Residues)>) -> Self {
        let mut entries: Vec<(u128, PackedKey, Residues)> = terms
            .filter(|(_, c)| *c != [0, 0])
            .map(|(k, c)| (odd_mask(&k), k, c))
            .collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let mut poly = ModPoly { degree, ..Default::default() };
        for (i, (mask, key, c)) in entries.into_iter().enumerate() {
            poly.groups.entry(mask).and_modify(|g| g.1 = i + 1).or_insert((i, i + 1));
            poly.keys.push(key);
            poly.coeffs.push(c);
            poly.masks.push(mask);
        }
        poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// The materialized product.
    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        let mut acc: FxHashMap<PackedKey, Residues> = FxHashMap::default();
        acc.reserve(self.len().max(other.len()));
        for (ka, &ca) in self.keys.iter().zip(&self.coeffs) {
            for (kb, &cb) in other.keys.iter().zip(&other.coeffs) {
                let slot = acc.entry(merge_keys(ka, kb)).or_insert([0, 0]);
                *slot = add_res(*slot, mul_res(ca, cb));
            }
        }
        ModPoly::from_terms(self.degree + other.degree, acc.into_iter())
    }

    /// `⟨self, B⟩` modulo the primes.
    pub fn pair(&self, table: &WeightTable) -> Residues {
        let mut acc = [0, 0];
        if let Some(&(lo, hi)) = self.groups.get(&0) {
            for i in lo..hi {
                acc = add_res(acc, mul_res(self.coeffs[i], table.weight(&self.keys[i])));
            }
        }
        acc
    }

    /// `⟨self · other, B⟩` modulo the primes, without forming the product.
    pub fn pair_product(&self, other: &ModPoly, table: &WeightTable) -> Residues {
        let (outer, inner) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = [0, 0];
        for (a, (ka, &ca)) in outer.keys.iter().zip(&outer.coeffs).enumerate() {
            let Some(&(lo, hi)) = inner.groups.get(&outer.masks[a]) else {
                continue;
            };
            let mut row = [0, 0];
            for b in lo..hi {
                row = add_res(row, mul_res(inner.coeffs[b], table.weight_union(ka, &inner.keys[b])));
            }
            acc = add_res(acc, mul_res(row, ca));
        }
        acc
    }
}

/// Stable Sp-invariant dimension of `Π factors` through the fused path: all
/// but the largest factor are multiplied out, the last product is paired
/// on the fly.
pub fn fused_invariant_dim(factors: &[&ModPoly], table: &WeightTable, context: &str) -> Result<BigInt> {
    let total: u32 = factors.iter().map(|f| f.degree()).sum();
    if total > table.max_degree() {
        return Err(Error::InvalidArgument(format!(
            "weight table covers degree {}, product has degree {total}",
            table.max_degree()
        )));
    }
    if total % 2 == 1 {
        return Ok(BigInt::from(0));
    }
    let residues = match factors {
        [] => [1, 1],
        [single] => single.pair(table),
        _ => {
            let mut order: Vec<&ModPoly> = factors.to_vec();
            order.sort_by_key(|f| f.len());
            let largest = order.pop().unwrap();
            let mut rest = order[0].clone();
            for f in &order[1..] {
                rest = rest.mul(f);
            }
            rest.pair_product(largest, table)
        }
    };
    reconstruct_dimension(residues, context)
}
