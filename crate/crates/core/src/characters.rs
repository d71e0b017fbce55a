//! Irreducible characters of the symmetric group via the Murnaghan–Nakayama
//! rule, and the Schur expansion of power-sum combinations built on them.
//!
//! This is the independent oracle path: nothing in the chain pipeline
//! depends on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::symfunc::SymmetricFunction;

/// Memo table for `χ^λ(μ)`, keyed by the remaining shape and the remaining
/// cycle type. One instance per worker; it is not shared between threads.
#[derive(Default)]
pub struct CharacterTable {
    memo: FxHashMap<Vec<u32>, i128>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `χ^λ(μ)` for `|λ| = |μ|`.
    pub fn value(&mut self, shape: &Partition, cycle_type: &Partition) -> Result<i128> {
        if shape.degree() != cycle_type.degree() {
            return Err(Error::SizeMismatch { shape: shape.degree(), cycle_type: cycle_type.degree() });
        }
        self.eval(shape.parts(), cycle_type.parts())
            .ok_or(Error::CharacterOverflow(shape.degree()))
    }

    fn eval(&mut self, shape: &[u32], cycles: &[u32]) -> Option<i128> {
        let Some((&r, rest)) = cycles.split_first() else {
            return Some(1);
        };
        if rest.is_empty() {
            // a single border strip of full size: shape must be a hook
            return Some(hook_sign(shape, r));
        }
        let mut key = Vec::with_capacity(shape.len() + cycles.len() + 1);
        key.extend_from_slice(shape);
        key.push(0);
        key.extend_from_slice(cycles);
        if let Some(&v) = self.memo.get(&key) {
            return Some(v);
        }
        let mut total: i128 = 0;
        for (sub, sign) in remove_border_strips(shape, r) {
            let v = self.eval(&sub, rest)?;
            total = total.checked_add(sign * v)?;
        }
        self.memo.insert(key, total);
        Some(total)
    }
}

/// Sign of the unique border strip filling `shape` when `shape` is a hook of
/// size `r`, else 0.
fn hook_sign(shape: &[u32], r: u32) -> i128 {
    if shape.iter().sum::<u32>() != r {
        return 0;
    }
    if shape.iter().skip(1).all(|&p| p == 1) {
        let height = shape.len() - 1;
        if height % 2 == 0 { 1 } else { -1 }
    } else {
        0
    }
}

/// All shapes obtained from `shape` by removing a border strip of size `r`,
/// with sign `(−1)^{height}`. Works on the beta-set of first-column hook
/// lengths: removing a strip moves one bead from `b` to `b − r`.
fn remove_border_strips(shape: &[u32], r: u32) -> Vec<(Vec<u32>, i128)> {
    let len = shape.len();
    let beta: Vec<u32> = shape.iter().enumerate().map(|(i, &p)| p + (len - 1 - i) as u32).collect();
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let crossed = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let n = nb.len();
        let parts: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(j, &c)| c - (n - 1 - j) as u32)
            .filter(|&p| p > 0)
            .collect();
        out.push((parts, if crossed % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// `χ^λ(μ)` with a fresh memo table.
pub fn character_value(shape: &Partition, cycle_type: &Partition) -> Result<i128> {
    CharacterTable::new().value(shape, cycle_type)
}

/// Schur coefficients `⟨f, s_λ⟩ = Σ_μ f_μ χ^λ(μ)` restricted to shapes
/// accepted by `filter`. Zero coefficients are omitted.
pub fn schur_expand_filtered<F>(
    f: &SymmetricFunction,
    table: &mut CharacterTable,
    filter: F,
) -> Result<BTreeMap<Partition, BigRational>>
where
    F: Fn(&Partition) -> bool,
{
    let d = f.homogeneous_degree()?;
    let terms = f.sorted_terms();
    let mut out = BTreeMap::new();
    for shape in partitions_of(d, None).into_iter().filter(|s| filter(s)) {
        let mut acc = BigRational::zero();
        for (mu, c) in &terms {
            let chi = table.value(&shape, mu)?;
            if chi != 0 {
                acc += *c * BigRational::from_integer(BigInt::from(chi));
            }
        }
        if !acc.is_zero() {
            out.insert(shape, acc);
        }
    }
    Ok(out)
}

/// Full Schur expansion of a homogeneous symmetric function.
pub fn schur_expand(f: &SymmetricFunction) -> Result<BTreeMap<Partition, BigRational>> {
    schur_expand_filtered(f, &mut CharacterTable::new(), |_| true)
}

/// True when every Schur coefficient is a non-negative integer.
pub fn is_schur_positive(expansion: &BTreeMap<Partition, BigRational>) -> bool {
    expansion.values().all(|c| c.is_integer() && *c >= BigRational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::exterior_plethysm;
    use crate::symfunc::test_util::q;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Number of standard Young tableaux by brute-force removal of corners.
    fn count_tableaux(shape: &[u32]) -> i128 {
        if shape.is_empty() {
            return 1;
        }
        let mut total = 0;
        for i in 0..shape.len() {
            let is_corner = i + 1 == shape.len() || shape[i + 1] < shape[i];
            if is_corner {
                let mut s = shape.to_vec();
                s[i] -= 1;
                if s[i] == 0 {
                    s.pop();
                }
                total += count_tableaux(&s);
            }
        }
        total
    }

    #[test]
    fn small_character_values() {
        for mu in partitions_of(5, None) {
            assert_eq!(character_value(&part(&[5]), &mu).unwrap(), 1);
        }
        assert_eq!(character_value(&part(&[1, 1]), &part(&[2])).unwrap(), -1);
        assert_eq!(character_value(&part(&[2, 1]), &part(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character_value(&part(&[2, 1]), &part(&[3])).unwrap(), -1);
        assert_eq!(character_value(&part(&[2, 1]), &part(&[2, 1])).unwrap(), 0);
        assert!(matches!(
            character_value(&part(&[2, 1]), &part(&[2])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn identity_column_matches_tableaux_count() {
        let mut table = CharacterTable::new();
        for n in 1..=9 {
            let ones = Partition::from_parts_unsorted(vec![1; n as usize]);
            for shape in partitions_of(n, None) {
                assert_eq!(table.value(&shape, &ones).unwrap(), count_tableaux(shape.parts()));
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        // Σ_λ χ^λ(μ) χ^λ(ν) = z_μ δ_{μν}
        let mut table = CharacterTable::new();
        let ps = partitions_of(7, None);
        for mu in &ps {
            for nu in &ps {
                let s: i128 = ps
                    .iter()
                    .map(|l| table.value(l, mu).unwrap() * table.value(l, nu).unwrap())
                    .sum();
                let expect: i128 = if mu == nu { mu.z_factor().try_into().unwrap() } else { 0 };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn schur_expansions() {
        let p1 = SymmetricFunction::power_sum(1);
        let sq = &p1 * &p1;
        let got = schur_expand(&sq).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[&part(&[2])], q(1, 1));
        assert_eq!(got[&part(&[1, 1])], q(1, 1));

        let e3 = exterior_plethysm(3, &p1).unwrap();
        let got = schur_expand(&(&e3 * &e3)).unwrap();
        let keys: Vec<_> = got.keys().cloned().collect();
        let mut expect = vec![part(&[1; 6]), part(&[2, 1, 1, 1, 1]), part(&[2, 2, 1, 1]), part(&[2, 2, 2])];
        expect.sort();
        assert_eq!(keys, expect);
        assert!(got.values().all(|c| *c == q(1, 1)));

        let e2 = exterior_plethysm(2, &p1).unwrap();
        let got = schur_expand(&exterior_plethysm(2, &e2).unwrap()).unwrap();
        assert_eq!(got.into_iter().collect::<Vec<_>>(), vec![(part(&[2, 1, 1]), q(1, 1))]);
    }

    #[test]
    fn elementary_functions_are_single_columns() {
        let p1 = SymmetricFunction::power_sum(1);
        for m in 1..=7 {
            let e = exterior_plethysm(m, &p1).unwrap();
            let got = schur_expand(&e).unwrap();
            assert_eq!(
                got.into_iter().collect::<Vec<_>>(),
                vec![(Partition::from_parts_unsorted(vec![1; m as usize]), q(1, 1))]
            );
        }
    }
}
