//! Sparse symmetric functions with exact rational coefficients, stored in
//! the power-sum basis.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A finite linear combination `Σ c_λ p_λ` of power-sum monomials.
///
/// No stored coefficient is ever zero.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SymmetricFunction {
    terms: FxHashMap<Partition, BigRational>,
}

impl SymmetricFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The degree-0 unit.
    pub fn one() -> Self {
        Self::monomial(Partition::empty(), BigRational::one())
    }

    /// The power sum `p_k`.
    pub fn power_sum(k: u32) -> Self {
        Self::monomial(Partition::row(k), BigRational::one())
    }

    pub fn monomial(key: Partition, coeff: BigRational) -> Self {
        let mut f = Self::zero();
        f.add_term(key, coeff);
        f
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Partition, BigRational)>,
    {
        let mut f = Self::zero();
        for (k, c) in terms {
            f.add_term(k, c);
        }
        f
    }

    /// Adds `coeff * p_key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: Partition, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &Partition) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Unordered iteration over `(λ, c_λ)`.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in canonical partition order.
    pub fn sorted_terms(&self) -> Vec<(&Partition, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_unstable_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// The set of degrees carrying a nonzero term.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Partition::degree).collect()
    }

    /// `Ok(d)` if every term has degree `d` (0 for the zero function).
    pub fn homogeneous_degree(&self) -> Result<u32> {
        let degs = self.degrees();
        match degs.len() {
            0 => Ok(0),
            1 => Ok(*degs.iter().next().unwrap()),
            _ => Err(Error::NonHomogeneous(degs.into_iter().collect())),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Plethysm with a power sum: `p_r[f]` replaces every part `i` by `r·i`.
    pub fn plethysm_power(&self, r: u32) -> Self {
        assert!(r >= 1, "plethysm_power needs r >= 1");
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.scaled(r), v.clone())).collect(),
        }
    }

    /// Principal specialization `p_i -> n` for every `i`.
    pub fn specialize_dimension(&self, n: u64) -> BigRational {
        let base = BigInt::from(n);
        self.terms
            .iter()
            .map(|(k, c)| c * BigRational::from_integer(num_traits::pow(base.clone(), k.len())))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `self += coeff · f · g`.
    pub fn add_product(&mut self, f: &SymmetricFunction, g: &SymmetricFunction, coeff: &BigRational) {
        for (a, ca) in &f.terms {
            let ca = ca * coeff;
            for (b, cb) in &g.terms {
                self.add_term(a.union(b), &ca * cb);
            }
        }
    }

    pub(crate) fn assert_normalized(&self) {
        debug_assert!(self.terms.values().all(|c| !c.is_zero()));
    }
}

impl fmt::Debug for SymmetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})p[{k}]")?;
        }
        Ok(())
    }
}

impl Add for &SymmetricFunction {
    type Output = SymmetricFunction;
    fn add(self, rhs: &SymmetricFunction) -> SymmetricFunction {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymmetricFunction {
    type Output = SymmetricFunction;
    fn sub(self, rhs: &SymmetricFunction) -> SymmetricFunction {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SymmetricFunction {
    type Output = SymmetricFunction;
    fn neg(self) -> SymmetricFunction {
        SymmetricFunction {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &SymmetricFunction {
    type Output = SymmetricFunction;
    fn mul(self, rhs: &SymmetricFunction) -> SymmetricFunction {
        sf_mul(self, rhs)
    }
}

/// Product in the power-sum basis: `p_λ · p_μ = p_{λ ∪ μ}`.
pub fn sf_mul(f: &SymmetricFunction, g: &SymmetricFunction) -> SymmetricFunction {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut out = SymmetricFunction::zero();
    out.terms.reserve(large.len());
    out.add_product(small, large, &BigRational::one());
    out.assert_normalized();
    out
}

/// Hall inner product: `Σ_λ f_λ g_λ z_λ`.
pub fn hall_inner(f: &SymmetricFunction, g: &SymmetricFunction) -> BigRational {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut acc = BigRational::zero();
    for (k, c) in &small.terms {
        if let Some(d) = large.terms.get(k) {
            acc += c * d * BigRational::from_integer(BigInt::from(k.z_factor()));
        }
    }
    acc
}

/// `e_0[f], e_1[f], …, e_m[f]` via the plethystic Newton identity
/// `j·e_j[f] = Σ_{r=1}^{j} (−1)^{r−1} p_r[f]·e_{j−r}[f]`.
///
/// `f` must be homogeneous of positive degree.
pub fn exterior_powers(f: &SymmetricFunction, m: u32) -> Result<Vec<SymmetricFunction>> {
    let d = f.homogeneous_degree()?;
    if d == 0 && !f.is_zero() {
        return Err(Error::InvalidArgument(
            "exterior plethysm needs a positive-degree argument".into(),
        ));
    }
    let mut out = Vec::with_capacity(m as usize + 1);
    out.push(SymmetricFunction::one());
    extend_exterior_powers(f, &mut out, m);
    Ok(out)
}

/// Extends `powers = [e_0[f], …, e_j[f]]` up to `e_m[f]`.
pub fn extend_exterior_powers<T>(f: &SymmetricFunction, powers: &mut Vec<T>, m: u32)
where
    T: std::borrow::Borrow<SymmetricFunction> + From<SymmetricFunction>,
{
    assert!(!powers.is_empty(), "powers must start with e_0");
    let adams: Vec<SymmetricFunction> = (1..=m).map(|r| f.plethysm_power(r)).collect();
    for j in powers.len() as u32..=m {
        let mut acc = SymmetricFunction::zero();
        for r in 1..=j {
            let sign = if r % 2 == 1 { BigRational::one() } else { -BigRational::one() };
            let coeff = sign / BigRational::from_integer(BigInt::from(j));
            acc.add_product(&adams[r as usize - 1], powers[(j - r) as usize].borrow(), &coeff);
        }
        powers.push(acc.into());
    }
}

/// The character of the `m`-th exterior power of a module with character
/// `f`, i.e. the plethysm `e_m[f]`.
pub fn exterior_plethysm(m: u32, f: &SymmetricFunction) -> Result<SymmetricFunction> {
    Ok(exterior_powers(f, m)?.pop().expect("e_0 always present"))
}

/// Converts an exact rational that must be an integer.
pub fn rational_to_integer(value: &BigRational, context: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::NonIntegerDimension { context: context.to_string(), value: value.to_string() })
    }
}

/// Like [`rational_to_integer`] but also rejects negative values.
pub fn rational_to_dimension(value: &BigRational, context: &str) -> Result<BigInt> {
    let n = rational_to_integer(value, context)?;
    if n.is_negative() {
        return Err(Error::NonIntegerDimension { context: context.to_string(), value: n.to_string() });
    }
    Ok(n)
}


#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;

    #[test]
    fn products() {
        let p1 = SymmetricFunction::power_sum(1);
        assert_eq!(&p1 * &p1, pm(&[1, 1], 1, 1));
        let e2 = sum(&[pm(&[1, 1], 1, 2), pm(&[2], -1, 2)]);
        assert_eq!(&e2 * &p1, sum(&[pm(&[1, 1, 1], 1, 2), pm(&[2, 1], -1, 2)]));
        assert_eq!(&e2 * &SymmetricFunction::one(), e2);
        assert!((&e2 - &e2).is_zero());
    }

    #[test]
    fn adams_operations() {
        let p1 = SymmetricFunction::power_sum(1);
        assert_eq!(p1.plethysm_power(2), SymmetricFunction::power_sum(2));
        let e2 = sum(&[pm(&[1, 1], 1, 2), pm(&[2], -1, 2)]);
        assert_eq!(e2.plethysm_power(2), sum(&[pm(&[2, 2], 1, 2), pm(&[4], -1, 2)]));
        let f = sum(&[pm(&[1], 1, 1), pm(&[2], 1, 1)]);
        assert_eq!(f.plethysm_power(3), sum(&[pm(&[3], 1, 1), pm(&[6], 1, 1)]));
    }

    #[test]
    fn exterior_powers_of_p1() {
        let p1 = SymmetricFunction::power_sum(1);
        assert_eq!(exterior_plethysm(0, &p1).unwrap(), SymmetricFunction::one());
        assert_eq!(exterior_plethysm(1, &p1).unwrap(), p1);
        assert_eq!(
            exterior_plethysm(2, &p1).unwrap(),
            sum(&[pm(&[1, 1], 1, 2), pm(&[2], -1, 2)])
        );
        let e3 = exterior_plethysm(3, &p1).unwrap();
        assert_eq!(e3, sum(&[pm(&[1, 1, 1], 1, 6), pm(&[2, 1], -1, 2), pm(&[3], 1, 3)]));
        for n in 3..=8u64 {
            let expect = BigRational::from_integer(BigInt::from(n * (n - 1) * (n - 2) / 6));
            assert_eq!(e3.specialize_dimension(n), expect);
        }
        assert_eq!(exterior_plethysm(2, &p1).unwrap().specialize_dimension(4), q(6, 1));
    }

    #[test]
    fn exterior_rejects_inhomogeneous() {
        let f = sum(&[pm(&[1], 1, 1), pm(&[2], 1, 1)]);
        assert!(matches!(exterior_plethysm(2, &f), Err(Error::NonHomogeneous(_))));
    }

    #[test]
    fn hall_inner_basics() {
        let p2 = SymmetricFunction::power_sum(2);
        assert_eq!(hall_inner(&p2, &p2), q(2, 1));
        assert_eq!(hall_inner(&pm(&[1, 1], 1, 1), &p2), q(0, 1));
        let e2 = exterior_plethysm(2, &SymmetricFunction::power_sum(1)).unwrap();
        assert_eq!(hall_inner(&e2, &e2), q(1, 1));
    }

    #[test]
    fn power_sums_are_orthogonal() {
        for n in 0..=10 {
            let ps = crate::partition::partitions_of(n, None);
            for a in &ps {
                for b in &ps {
                    let fa = SymmetricFunction::monomial(a.clone(), q(1, 1));
                    let fb = SymmetricFunction::monomial(b.clone(), q(1, 1));
                    let expect = if a == b {
                        BigRational::from_integer(BigInt::from(a.z_factor()))
                    } else {
                        BigRational::zero()
                    };
                    assert_eq!(hall_inner(&fa, &fb), expect);
                }
            }
        }
    }

    #[test]
    fn integer_conversion() {
        assert!(rational_to_integer(&q(3, 2), "x").is_err());
        assert_eq!(rational_to_integer(&q(-4, 2), "x").unwrap(), BigInt::from(-2));
        assert!(rational_to_dimension(&q(-4, 2), "x").is_err());
    }
}
