//! Characters of the free Lie algebra and of the symplectic derivation
//! modules, plus stable Sp-invariant dimensions.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::characters::{schur_expand_filtered, CharacterTable};
use crate::error::{Error, Result};
use crate::numtheory::{divisors, mobius};
use crate::partition::Partition;
use crate::symfunc::{hall_inner, rational_to_dimension, SymmetricFunction};

/// Character of `L_k(H)`, the degree-`k` part of the free Lie algebra.
#[derive(Clone, Debug)]
pub struct LieCharacter {
    pub k: u32,
    pub character: Arc<SymmetricFunction>,
}

/// Character of `h⁺(k) = Ker(H ⊗ L_{k+1}(H) → L_{k+2}(H))`, homogeneous of
/// degree `k + 2`.
#[derive(Clone, Debug)]
pub struct DerivationCharacter {
    pub k: u32,
    pub character: Arc<SymmetricFunction>,
}

/// Homogeneous parts `B_0, …, B_D` of the Littlewood series
/// `B = Σ_{λ with even columns} s_λ = exp(Σ_m (p_m² − p_{2m})/(2m))`.
#[derive(Clone, Debug)]
pub struct InvariantSeries {
    pub max_degree: u32,
    parts: Vec<Arc<SymmetricFunction>>,
}

impl InvariantSeries {
    pub fn part(&self, d: u32) -> &SymmetricFunction {
        &self.parts[d as usize]
    }

    /// All parts up to `max_degree` summed into one function.
    pub fn series(&self) -> SymmetricFunction {
        let mut out = SymmetricFunction::zero();
        for p in &self.parts {
            for (k, c) in p.iter() {
                out.add_term(k.clone(), c.clone());
            }
        }
        out
    }
}

type Memo = RwLock<FxHashMap<u32, Arc<SymmetricFunction>>>;

fn lie_memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(Default::default)
}

fn derivation_memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(Default::default)
}

fn memoized(memo: &Memo, k: u32, build: impl FnOnce() -> SymmetricFunction) -> Arc<SymmetricFunction> {
    if let Some(v) = memo.read().unwrap().get(&k) {
        return v.clone();
    }
    let value = Arc::new(build());
    memo.write().unwrap().entry(k).or_insert(value).clone()
}

/// Witt formula: `(1/k) Σ_{d|k} μ(d) p_d^{k/d}`.
pub fn lie_character_uncached(k: u32) -> SymmetricFunction {
    assert!(k >= 1);
    let mut f = SymmetricFunction::zero();
    for d in divisors(k) {
        let mu = mobius(d);
        if mu != 0 {
            let key = Partition::from_parts_unsorted(vec![d; (k / d) as usize]);
            f.add_term(key, BigRational::new(BigInt::from(mu), BigInt::from(k)));
        }
    }
    f
}

pub fn lie_character(k: u32) -> LieCharacter {
    LieCharacter { k, character: memoized(lie_memo(), k, || lie_character_uncached(k)) }
}

/// `p_1 · L_{k+1} − L_{k+2}`; the bracket `H ⊗ L_{k+1} → L_{k+2}` is onto.
pub fn derivation_character(k: u32) -> Result<DerivationCharacter> {
    if k == 0 {
        return Err(Error::InvalidArgument("h(0) = sp is not part of the positive-degree ideal".into()));
    }
    let character = memoized(derivation_memo(), k, || {
        let p1 = SymmetricFunction::power_sum(1);
        let tensor = &p1 * lie_character(k + 1).character.as_ref();
        &tensor - lie_character(k + 2).character.as_ref()
    });
    Ok(DerivationCharacter { k, character })
}

fn littlewood_memo() -> &'static RwLock<Vec<Arc<SymmetricFunction>>> {
    static M: OnceLock<RwLock<Vec<Arc<SymmetricFunction>>>> = OnceLock::new();
    M.get_or_init(|| RwLock::new(vec![Arc::new(SymmetricFunction::one())]))
}

/// Extends `parts` (holding `B_0..B_{len-1}`) through degree `max_degree`,
/// using `n·B_n = Σ_{k even} (p_{k/2}² − p_k)·B_{n−k}`.
fn extend_littlewood(parts: &mut Vec<Arc<SymmetricFunction>>, max_degree: u32) {
    for n in parts.len() as u32..=max_degree {
        let mut b = SymmetricFunction::zero();
        let inv = BigRational::new(BigInt::one(), BigInt::from(n));
        for k in (2..=n).step_by(2) {
            let mut step = SymmetricFunction::monomial(
                Partition::from_parts_unsorted(vec![k / 2, k / 2]),
                BigRational::one(),
            );
            step.add_term(Partition::row(k), -BigRational::one());
            b.add_product(&step, &parts[(n - k) as usize], &inv);
        }
        parts.push(Arc::new(b));
    }
}

/// The Littlewood series truncated at degree `max_degree`; memoized and
/// extended on demand.
pub fn littlewood_series(max_degree: u32) -> Result<InvariantSeries> {
    if max_degree < 2 || max_degree % 2 != 0 {
        return Err(Error::InvalidArgument(format!("littlewood degree bound {max_degree} must be even and >= 2")));
    }
    Ok(InvariantSeries { max_degree, parts: littlewood_parts(max_degree) })
}

fn littlewood_parts(max_degree: u32) -> Vec<Arc<SymmetricFunction>> {
    let memo = littlewood_memo();
    {
        let parts = memo.read().unwrap();
        if parts.len() > max_degree as usize {
            return parts[..=max_degree as usize].to_vec();
        }
    }
    let mut parts = memo.write().unwrap();
    extend_littlewood(&mut parts, max_degree);
    parts[..=max_degree as usize].to_vec()
}

/// The single homogeneous part `B_d`.
pub fn littlewood_part(d: u32) -> Arc<SymmetricFunction> {
    littlewood_parts(d).pop().expect("degree 0 always present")
}

/// `a_j(n) = Σ_r M(n, r) j^r (−ε_j)^{n−2r}` where `M(n, r)` counts matchings
/// with `r` pairs on `n` points and `ε_j = 1` for even `j`, else 0. This is
/// `z_{(j^n)}` times the coefficient of `p_j^n` in the Littlewood series.
pub fn littlewood_factor(j: u32, n: u32) -> BigInt {
    let even = j % 2 == 0;
    let mut total = BigInt::zero();
    for r in 0..=n / 2 {
        let unmatched = n - 2 * r;
        if !even && unmatched > 0 {
            continue;
        }
        // n! / (r! (n-2r)! 2^r)
        let mut m = BigInt::one();
        for t in (unmatched + 1)..=n {
            m *= t;
        }
        for t in 1..=r {
            m /= BigInt::from(2 * t);
        }
        let mut term = m * num_traits::pow(BigInt::from(j), r as usize);
        if unmatched % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    total
}

/// `⟨p_λ, B⟩ = Π_j a_j(m_j(λ))`, the stable number of Sp-invariants carried
/// by the power-sum monomial `p_λ`.
pub fn invariant_weight(key: &Partition) -> BigInt {
    key.multiplicities().into_iter().map(|(j, m)| littlewood_factor(j, m)).product()
}

/// Stable dimension of the Sp-invariants of a module with character `f`:
/// `⟨f, B_{deg f}⟩`.
pub fn sp_invariant_dim(f: &SymmetricFunction) -> Result<BigInt> {
    let d = f.homogeneous_degree()?;
    if d % 2 == 1 || f.is_zero() {
        return Ok(BigInt::zero());
    }
    let b = littlewood_part(d);
    rational_to_dimension(&hall_inner(f, &b), "Sp-invariant pairing")
}

/// Independent route: Schur-expand through Murnaghan–Nakayama and add the
/// coefficients of shapes whose columns all have even length.
pub fn sp_invariant_dim_oracle(f: &SymmetricFunction) -> Result<BigInt> {
    sp_invariant_dim_oracle_with(f, &mut CharacterTable::new())
}

pub fn sp_invariant_dim_oracle_with(f: &SymmetricFunction, table: &mut CharacterTable) -> Result<BigInt> {
    let expansion: BTreeMap<Partition, BigRational> =
        schur_expand_filtered(f, table, Partition::has_even_columns)?;
    let total = expansion.values().fold(BigRational::zero(), |a, b| a + b);
    rational_to_dimension(&total, "Schur oracle")
}
