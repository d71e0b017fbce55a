//! The weight-graded Sp-invariant chain complex of `h⁺`.
//!
//! At weight `w` the chains of homological degree `i` are
//! `⊕ (Λ^{m_1} h⁺(1) ⊗ Λ^{m_2} h⁺(2) ⊗ ⋯)^Sp` over multiplicity vectors with
//! `Σ k·m_k = w` and `Σ m_k = i`, i.e. over the partitions of `w`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::cache::{CacheKey, CacheRecord, DiskCache};
use crate::error::{Error, Result};
use crate::lie::{derivation_character, sp_invariant_dim};
use crate::modular::{fused_invariant_dim, ModPoly, WeightTable};
use crate::partition::{partitions_of, Partition};
use crate::symfunc::{exterior_plethysm, extend_exterior_powers, sf_mul, SymmetricFunction};

/// One direct summand: the multiplicities `m_k` of a partition of `w`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightPartition {
    weight: u32,
    /// `(k, m_k)` with `k` increasing and every `m_k >= 1`.
    factors: Vec<(u32, u32)>,
}

impl WeightPartition {
    pub fn from_partition(p: &Partition) -> Self {
        let mut factors = p.multiplicities();
        factors.reverse();
        Self { weight: p.degree(), factors }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn homological_degree(&self) -> u32 {
        self.factors.iter().map(|&(_, m)| m).sum()
    }

    /// Degree of the symmetric function `Π e_{m_k}[h(k)]`: `w + 2i`.
    pub fn sf_degree(&self) -> u32 {
        self.factors.iter().map(|&(k, m)| (k + 2) * m).sum()
    }

    pub fn partition(&self) -> Partition {
        let mults: Vec<(u32, u32)> = self.factors.iter().rev().copied().collect();
        Partition::from_multiplicities(&mults)
    }

    /// Stable identifier, e.g. `w6-1^2.4^1`.
    pub fn label(&self) -> String {
        let body: Vec<String> = self.factors.iter().map(|(k, m)| format!("{k}^{m}")).collect();
        format!("w{}-{}", self.weight, body.join("."))
    }
}

impl fmt::Debug for WeightPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All summands at weight `w`, ordered by homological degree and then by
/// canonical partition order.
pub fn weight_partitions(w: u32) -> Vec<WeightPartition> {
    let mut out: Vec<WeightPartition> = partitions_of(w, None).iter().map(WeightPartition::from_partition).collect();
    out.sort_by_key(|wp| wp.homological_degree());
    out
}

/// `dim C_i` for each homological degree `i` at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDimTable {
    pub weight: u32,
    pub dims: BTreeMap<u32, BigInt>,
    pub total: BigInt,
    pub euler: BigInt,
}

impl ChainDimTable {
    pub fn from_dims(weight: u32, dims: BTreeMap<u32, BigInt>) -> Self {
        let total = dims.values().sum();
        let euler = dims
            .iter()
            .map(|(&i, d)| if i % 2 == 0 { d.clone() } else { -d.clone() })
            .sum();
        Self { weight, dims, total, euler }
    }

    pub fn dim(&self, i: u32) -> BigInt {
        self.dims.get(&i).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// How chain summands are paired with the Littlewood series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingMode {
    /// Materialize the exact rational product and take the Hall pairing.
    Exact,
    /// Multi-modular pairing fused into the last multiplication.
    Fused,
    /// Run both and require agreement.
    Check,
}

#[derive(Clone, Debug)]
pub struct TermTiming {
    pub label: String,
    pub sf_degree: u32,
    pub elapsed: Duration,
    pub from_cache: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub plethysms_computed: u64,
    pub plethysms_loaded: u64,
    pub terms_computed: u64,
    pub terms_loaded: u64,
}

/// Owns the plethysm memo, the optional disk cache and the pairing mode.
/// Shared by all workers of a run.
pub struct Engine {
    mode: PairingMode,
    cache: Option<DiskCache>,
    powers: RwLock<FxHashMap<u32, Vec<Arc<SymmetricFunction>>>>,
    reduced: RwLock<FxHashMap<(u32, u32), Arc<ModPoly>>>,
    table: RwLock<Option<Arc<WeightTable>>>,
    stats: Mutex<EngineStats>,
    timings: Mutex<Vec<TermTiming>>,
}

impl Engine {
    pub fn new(mode: PairingMode) -> Self {
        Self {
            mode,
            cache: None,
            powers: RwLock::default(),
            reduced: RwLock::default(),
            table: RwLock::default(),
            stats: Mutex::default(),
            timings: Mutex::default(),
        }
    }

    pub fn with_cache(mut self, cache: DiskCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn mode(&self) -> PairingMode {
        self.mode
    }

    pub fn cache(&self) -> Option<&DiskCache> {
        self.cache.as_ref()
    }

    pub fn stats(&self) -> EngineStats {
        *self.stats.lock().unwrap()
    }

    /// Per-summand timings recorded so far, slowest first.
    pub fn timings(&self) -> Vec<TermTiming> {
        let mut t = self.timings.lock().unwrap().clone();
        t.sort_by(|a, b| b.elapsed.cmp(&a.elapsed).then_with(|| a.label.cmp(&b.label)));
        t
    }

    fn bump(&self, f: impl FnOnce(&mut EngineStats)) {
        f(&mut self.stats.lock().unwrap());
    }

    fn derivation(&self, k: u32) -> Result<Arc<SymmetricFunction>> {
        let key = CacheKey::derivation(k);
        if let Some(f) = self.cache.as_ref().and_then(|c| c.load_symfunc(&key)) {
            return Ok(Arc::new(f));
        }
        let f = derivation_character(k)?.character;
        if let Some(c) = &self.cache {
            c.store_symfunc(key, &f)?;
        }
        Ok(f)
    }

    /// Computes (or loads) `e_0[h(k)], …, e_m[h(k)]` without touching the
    /// shared memo.
    fn build_powers(&self, k: u32, m: u32, mut powers: Vec<Arc<SymmetricFunction>>) -> Result<Vec<Arc<SymmetricFunction>>> {
        if powers.is_empty() {
            powers.push(Arc::new(SymmetricFunction::one()));
        }
        if let Some(cache) = &self.cache {
            while (powers.len() as u32) <= m {
                let j = powers.len() as u32;
                match cache.load_symfunc(&CacheKey::ext_pleth(k, j)) {
                    Some(f) => {
                        powers.push(Arc::new(f));
                        self.bump(|s| s.plethysms_loaded += 1);
                    }
                    None => break,
                }
            }
        }
        let have = powers.len() as u32;
        if have <= m {
            let f = self.derivation(k)?;
            extend_exterior_powers(&f, &mut powers, m);
            self.bump(|s| s.plethysms_computed += (m + 1 - have) as u64);
            if let Some(cache) = &self.cache {
                for j in have..=m {
                    cache.store_symfunc(CacheKey::ext_pleth(k, j), &powers[j as usize])?;
                }
            }
        }
        Ok(powers)
    }

    /// `e_m[h(k)]`, memoized.
    pub fn exterior_power(&self, k: u32, m: u32) -> Result<Arc<SymmetricFunction>> {
        let existing = {
            let memo = self.powers.read().unwrap();
            match memo.get(&k) {
                Some(v) if v.len() > m as usize => return Ok(v[m as usize].clone()),
                Some(v) => v.clone(),
                None => Vec::new(),
            }
        };
        let built = self.build_powers(k, m, existing)?;
        let mut memo = self.powers.write().unwrap();
        let slot = memo.entry(k).or_default();
        if slot.len() < built.len() {
            *slot = built;
        }
        Ok(slot[m as usize].clone())
    }

    fn weight_table(&self, max_degree: u32) -> Arc<WeightTable> {
        if let Some(t) = self.table.read().unwrap().as_ref() {
            if t.max_degree() >= max_degree {
                return t.clone();
            }
        }
        let mut slot = self.table.write().unwrap();
        match slot.as_ref() {
            Some(t) if t.max_degree() >= max_degree => t.clone(),
            _ => {
                let t = Arc::new(WeightTable::new(max_degree));
                *slot = Some(t.clone());
                t
            }
        }
    }

    fn reduced_power(&self, k: u32, m: u32) -> Result<Arc<ModPoly>> {
        if let Some(p) = self.reduced.read().unwrap().get(&(k, m)) {
            return Ok(p.clone());
        }
        let p = Arc::new(ModPoly::from_symmetric_function(self.exterior_power(k, m)?.as_ref())?);
        Ok(self.reduced.write().unwrap().entry((k, m)).or_insert(p).clone())
    }

    /// Computes every `e_m[h(k)]` with `k·m <= w` up front, one `k` per
    /// worker, so the summand loop only reads shared state.
    pub fn prepare(&self, w: u32) -> Result<()> {
        self.prepare_for(&weight_partitions(w))
    }

    fn prepare_for(&self, summands: &[WeightPartition]) -> Result<()> {
        let mut top: FxHashMap<u32, u32> = FxHashMap::default();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut max_degree = 0;
        for wp in summands {
            max_degree = max_degree.max(wp.sf_degree());
            for &(k, m) in wp.factors() {
                let slot = top.entry(k).or_insert(0);
                *slot = (*slot).max(m);
                pairs.push((k, m));
            }
        }
        let mut top: Vec<(u32, u32)> = top.into_iter().collect();
        top.sort_unstable();
        top.into_par_iter().try_for_each(|(k, m)| self.exterior_power(k, m).map(|_| ()))?;
        if self.mode != PairingMode::Exact {
            self.weight_table(max_degree);
            pairs.sort_unstable();
            pairs.dedup();
            pairs.into_par_iter().try_for_each(|(k, m)| self.reduced_power(k, m).map(|_| ()))?;
        }
        Ok(())
    }

    fn term_exact(&self, wp: &WeightPartition) -> Result<BigInt> {
        let mut product = SymmetricFunction::one();
        for &(k, m) in wp.factors() {
            product = sf_mul(&product, self.exterior_power(k, m)?.as_ref());
        }
        sp_invariant_dim(&product)
    }

    fn term_fused(&self, wp: &WeightPartition) -> Result<BigInt> {
        let factors = wp
            .factors()
            .iter()
            .map(|&(k, m)| self.reduced_power(k, m))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&ModPoly> = factors.iter().map(Arc::as_ref).collect();
        let table = self.weight_table(wp.sf_degree());
        fused_invariant_dim(&refs, &table, &wp.label())
    }

    /// `dim (Λ^{m_1} h⁺(1) ⊗ Λ^{m_2} h⁺(2) ⊗ ⋯)^Sp`.
    pub fn chain_term_dim(&self, wp: &WeightPartition) -> Result<BigInt> {
        let start = Instant::now();
        let key = CacheKey::term(wp.label());
        let use_term_cache = self.mode != PairingMode::Check;
        if use_term_cache {
            if let Some(rec) = self.cache.as_ref().and_then(|c| c.load(&key)) {
                if let Ok(v) = rec.payload.trim_end().parse::<BigInt>() {
                    self.bump(|s| s.terms_loaded += 1);
                    self.record(wp, start.elapsed(), true);
                    return Ok(v);
                }
            }
        }
        let value = match self.mode {
            PairingMode::Exact => self.term_exact(wp)?,
            PairingMode::Fused => self.term_fused(wp)?,
            PairingMode::Check => {
                let exact = self.term_exact(wp)?;
                let fused = self.term_fused(wp)?;
                if exact != fused {
                    return Err(Error::PairingMismatch {
                        label: wp.label(),
                        exact: exact.to_string(),
                        fused: fused.to_string(),
                    });
                }
                exact
            }
        };
        if let Some(cache) = &self.cache {
            cache.store(&CacheRecord { key, payload: format!("{value}\n") })?;
        }
        self.bump(|s| s.terms_computed += 1);
        self.record(wp, start.elapsed(), false);
        Ok(value)
    }

    fn record(&self, wp: &WeightPartition, elapsed: Duration, from_cache: bool) {
        self.timings.lock().unwrap().push(TermTiming {
            label: wp.label(),
            sf_degree: wp.sf_degree(),
            elapsed,
            from_cache,
        });
    }

    /// Evaluates the given summands in parallel, longest (highest
    /// symmetric-function degree) first, and returns their values in input
    /// order.
    fn evaluate(&self, summands: &[WeightPartition]) -> Result<Vec<BigInt>> {
        self.prepare_for(summands)?;
        let mut order: Vec<usize> = (0..summands.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(summands[i].sf_degree()));
        let mut values: Vec<(usize, BigInt)> = order
            .into_par_iter()
            .with_max_len(1)
            .map(|i| self.chain_term_dim(&summands[i]).map(|v| (i, v)))
            .collect::<Result<Vec<_>>>()?;
        values.sort_by_key(|(i, _)| *i);
        Ok(values.into_iter().map(|(_, v)| v).collect())
    }

    /// Per-degree dimensions at weight `w`. The reduction runs in a fixed
    /// order, so the result does not depend on the worker count.
    pub fn chain_dims(&self, w: u32) -> Result<ChainDimTable> {
        if w == 0 {
            return Ok(ChainDimTable::from_dims(0, BTreeMap::from([(0, BigInt::one())])));
        }
        let summands = weight_partitions(w);
        let values = self.evaluate(&summands)?;
        let mut dims: BTreeMap<u32, BigInt> = (1..=w).map(|i| (i, BigInt::zero())).collect();
        for (wp, v) in summands.iter().zip(values) {
            *dims.get_mut(&wp.homological_degree()).unwrap() += v;
        }
        Ok(ChainDimTable::from_dims(w, dims))
    }

    /// `dim C_i` at weight `w` for the listed degrees only.
    pub fn chain_dims_for_degrees(&self, w: u32, degrees: &[u32]) -> Result<BTreeMap<u32, BigInt>> {
        let summands: Vec<WeightPartition> = weight_partitions(w)
            .into_iter()
            .filter(|wp| degrees.contains(&wp.homological_degree()))
            .collect();
        let values = self.evaluate(&summands)?;
        let mut dims: BTreeMap<u32, BigInt> = degrees.iter().map(|&i| (i, BigInt::zero())).collect();
        for (wp, v) in summands.iter().zip(values) {
            *dims.get_mut(&wp.homological_degree()).unwrap() += v;
        }
        Ok(dims)
    }

    /// `χ_w = Σ_i (−1)^i dim C_i` for even `w >= 2`.
    pub fn euler_char(&self, w: u32) -> Result<BigInt> {
        if w < 2 || w % 2 == 1 {
            return Err(Error::InvalidArgument(format!("weight {w} must be even and >= 2")));
        }
        Ok(self.chain_dims(w)?.euler)
    }

    /// Recomputes a deterministic sample of memoized plethysms from scratch
    /// and compares them with the memo. Only entries of degree at most
    /// `max_degree` are eligible. Returns the checked `(k, m)` pairs.
    pub fn spot_check_plethysms(&self, sample: usize, seed: u64, max_degree: u32) -> Result<Vec<(u32, u32)>> {
        let mut eligible: Vec<(u32, u32)> = {
            let memo = self.powers.read().unwrap();
            memo.iter()
                .flat_map(|(&k, v)| (1..v.len() as u32).map(move |m| (k, m)))
                .filter(|&(k, m)| (k + 2) * m <= max_degree)
                .collect()
        };
        eligible.sort_unstable();
        let mut state = seed;
        let mut picked = Vec::new();
        while picked.len() < sample && !eligible.is_empty() {
            // splitmix64
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            picked.push(eligible.swap_remove((z % eligible.len() as u64) as usize));
        }
        for &(k, m) in &picked {
            let fresh = exterior_plethysm(m, &derivation_character(k)?.character)?;
            if *self.exterior_power(k, m)? != fresh {
                return Err(Error::CacheCoherence { k, m });
            }
        }
        Ok(picked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::sp_invariant_dim_oracle;

    #[test]
    fn weight_two_summands() {
        let wps = weight_partitions(2);
        assert_eq!(wps.len(), 2);
        assert_eq!(wps[0].factors(), &[(2, 1)]);
        assert_eq!(wps[0].homological_degree(), 1);
        assert_eq!(wps[1].factors(), &[(1, 2)]);
        assert_eq!(wps[1].homological_degree(), 2);
        assert_eq!(weight_partitions(20).len(), 627);
        let ones = weight_partitions(3).into_iter().find(|w| w.factors() == [(1, 3)]).unwrap();
        assert_eq!((ones.homological_degree(), ones.sf_degree()), (3, 9));
        assert_eq!(ones.label(), "w3-1^3");
        assert_eq!(ones.partition(), Partition::new(vec![1, 1, 1]).unwrap());
    }

    #[test]
    fn sf_degree_bookkeeping() {
        for w in 1..=12 {
            for wp in weight_partitions(w) {
                let i = wp.homological_degree();
                assert!(i >= 1 && i <= w);
                assert_eq!(wp.sf_degree(), w + 2 * i);
                assert!(wp.sf_degree() <= 3 * w);
            }
        }
    }

    #[test]
    fn weight_two_dims() {
        let engine = Engine::new(PairingMode::Check);
        let t = engine.chain_dims(2).unwrap();
        assert_eq!(&t.dim(2) - &t.dim(1), BigInt::from(1));
        assert_eq!(t.euler, BigInt::from(1));
        // Λ²(Λ³H) carries one invariant, h(2) none.
        let e2e3 = exterior_plethysm(2, &derivation_character(1).unwrap().character).unwrap();
        assert_eq!(t.dim(2), sp_invariant_dim_oracle(&e2e3).unwrap());
    }

    #[test]
    fn zero_weight_convention() {
        let t = Engine::new(PairingMode::Fused).chain_dims(0).unwrap();
        assert_eq!(t.dims, BTreeMap::from([(0, BigInt::one())]));
        assert_eq!(t.euler, BigInt::one());
    }

    #[test]
    fn odd_weights_vanish() {
        let engine = Engine::new(PairingMode::Check);
        for w in [1, 3, 5] {
            let t = engine.chain_dims(w).unwrap();
            assert!(t.dims.values().all(Zero::is_zero), "w = {w}");
        }
        assert!(engine.euler_char(3).is_err());
    }

    #[test]
    fn small_weight_euler_characteristics() {
        let engine = Engine::new(PairingMode::Check);
        let got: Vec<BigInt> = [2, 4, 6, 8].iter().map(|&w| engine.euler_char(w).unwrap()).collect();
        assert_eq!(got, [1, 2, 4, 6].map(BigInt::from).to_vec());
    }

    #[test]
    fn first_degree_is_single_summand() {
        let engine = Engine::new(PairingMode::Fused);
        for w in (2..=10).step_by(2) {
            let t = engine.chain_dims(w).unwrap();
            let direct = sp_invariant_dim(&derivation_character(w).unwrap().character).unwrap();
            assert_eq!(t.dim(1), direct);
        }
    }

    #[test]
    fn disk_cache_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let cold = Engine::new(PairingMode::Fused).with_cache(DiskCache::open(dir.path()).unwrap());
        let first = cold.chain_dims(6).unwrap();
        assert!(cold.stats().plethysms_computed > 0);
        let warm = Engine::new(PairingMode::Fused).with_cache(DiskCache::open(dir.path()).unwrap());
        let second = warm.chain_dims(6).unwrap();
        assert_eq!(first, second);
        let s = warm.stats();
        assert_eq!((s.plethysms_computed, s.terms_computed), (0, 0));
        assert_eq!(s.terms_loaded, 11);
    }

    #[test]
    fn spot_check_passes() {
        let engine = Engine::new(PairingMode::Fused);
        engine.prepare(6).unwrap();
        let picked = engine.spot_check_plethysms(4, 7, 24).unwrap();
        assert_eq!(picked.len(), 4);
    }
}
