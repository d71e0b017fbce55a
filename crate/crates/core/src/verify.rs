//! Self-check suite: each check compares two independent routes to the same
//! quantity and reports the first counterexample it finds.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::chain::{weight_partitions, Engine, PairingMode};
use crate::characters::{is_schur_positive, schur_expand, CharacterTable};
use crate::euler::{expand_product, extract_out_euler, verify_congruence, ChiTable};
use crate::lie::{derivation_character, littlewood_part, sp_invariant_dim, sp_invariant_dim_oracle_with};
use crate::numtheory::{divisors, mobius};
use crate::partition::{partitions_of, Partition};
use crate::symfunc::{sf_mul, SymmetricFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(name: &'static str, r: std::result::Result<String, String>) -> Self {
        match r {
            Ok(detail) => Self { name, passed: true, detail },
            Err(detail) => Self { name, passed: false, detail },
        }
    }
}

#[derive(Clone, Copy)]
pub struct VerifyOptions {
    /// Largest weight whose chain pieces go through the oracle; symmetric
    /// function checks stay at or below this degree too.
    pub max_degree: u32,
    /// Möbius function used to build Lie characters (replaceable for fault
    /// injection).
    pub mobius: fn(u32) -> i32,
}

impl VerifyOptions {
    pub fn new(max_degree: u32) -> Self {
        Self { max_degree, mobius }
    }
}

pub fn run_suite(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    vec![
        CheckOutcome::from_result("witt-specialization", check_witt(opts)),
        CheckOutcome::from_result("derivation-h1-is-wedge3", check_h1()),
        CheckOutcome::from_result("derivation-schur-positivity", check_positivity(opts)),
        CheckOutcome::from_result("littlewood-even-columns", check_littlewood(opts)),
        CheckOutcome::from_result("oracle-equivalence", check_oracle_equivalence(opts)),
        CheckOutcome::from_result("odd-weight-vanishing", check_odd_vanishing()),
        CheckOutcome::from_result("out-euler-round-trip", check_euler_round_trip()),
    ]
}

/// Witt character built from the supplied Möbius function.
fn lie_character_with(k: u32, mu: fn(u32) -> i32) -> SymmetricFunction {
    let mut f = SymmetricFunction::zero();
    for d in divisors(k) {
        let key = Partition::from_parts_unsorted(vec![d; (k / d) as usize]);
        f.add_term(key, BigRational::new(BigInt::from(mu(d)), BigInt::from(k)));
    }
    f
}

/// Necklace numbers from `Σ_{d|k} d·L_d(N) = N^k`, with no Möbius function.
fn necklace_dimension(k: u32, n: u64, memo: &mut BTreeMap<(u32, u64), BigInt>) -> BigInt {
    if let Some(v) = memo.get(&(k, n)) {
        return v.clone();
    }
    let mut rest = num_traits::pow(BigInt::from(n), k as usize);
    for d in divisors(k).into_iter().filter(|&d| d < k) {
        rest -= BigInt::from(d) * necklace_dimension(d, n, memo);
    }
    let v = rest / BigInt::from(k);
    memo.insert((k, n), v.clone());
    v
}

fn check_witt(opts: &VerifyOptions) -> std::result::Result<String, String> {
    let mut memo = BTreeMap::new();
    let kmax = opts.max_degree.clamp(1, 12);
    for k in 1..=kmax {
        let ch = lie_character_with(k, opts.mobius);
        for n in 1..=6u64 {
            let got = ch.specialize_dimension(n);
            let expect = BigRational::from_integer(necklace_dimension(k, n, &mut memo));
            if got != expect {
                return Err(format!("L_{k} at N = {n}: character gives {got}, necklace count {expect}"));
            }
        }
    }
    Ok(format!("k <= {kmax}, N <= 6"))
}

fn check_h1() -> std::result::Result<String, String> {
    let h1 = derivation_character(1).map_err(|e| e.to_string())?;
    let sx = schur_expand(&h1.character).map_err(|e| e.to_string())?;
    let expect = BTreeMap::from([(Partition::from_parts_unsorted(vec![1, 1, 1]), BigRational::one())]);
    if sx == expect {
        Ok("h(1) = s_(1,1,1)".into())
    } else {
        Err(format!("h(1) Schur expansion {sx:?}"))
    }
}

fn check_positivity(opts: &VerifyOptions) -> std::result::Result<String, String> {
    let kmax = opts.max_degree.saturating_sub(2).min(8);
    for k in 1..=kmax {
        let h = derivation_character(k).map_err(|e| e.to_string())?;
        let sx = schur_expand(&h.character).map_err(|e| e.to_string())?;
        if !is_schur_positive(&sx) {
            return Err(format!("h({k}) is not Schur-positive"));
        }
    }
    Ok(format!("k <= {kmax}"))
}

fn check_littlewood(opts: &VerifyOptions) -> std::result::Result<String, String> {
    let dmax = opts.max_degree.min(12);
    for d in (2..=dmax).step_by(2) {
        let sx = schur_expand(&littlewood_part(d)).map_err(|e| e.to_string())?;
        for shape in partitions_of(d, None) {
            let expect = if shape.has_even_columns() { BigRational::one() } else { BigRational::zero() };
            if sx.get(&shape).cloned().unwrap_or_else(BigRational::zero) != expect {
                return Err(format!("coefficient of s_{shape:?} in B_{d}"));
            }
        }
    }
    Ok(format!("degrees <= {dmax}"))
}

/// Every chain summand at even weight `<= max_degree`: Hall pairing with the
/// Littlewood series, fused modular pairing, and the Murnaghan–Nakayama
/// even-column count must agree.
fn check_oracle_equivalence(opts: &VerifyOptions) -> std::result::Result<String, String> {
    let engine = Engine::new(PairingMode::Check);
    let summands: Vec<_> = (2..=opts.max_degree).step_by(2).flat_map(weight_partitions).collect();
    let count = summands.len();
    let failures: Vec<String> = summands
        .into_par_iter()
        .with_max_len(1)
        .map_init(CharacterTable::new, |table, wp| {
            let mut run = || -> crate::Result<Option<String>> {
                let mut product = SymmetricFunction::one();
                for &(k, m) in wp.factors() {
                    product = sf_mul(&product, engine.exterior_power(k, m)?.as_ref());
                }
                let littlewood = sp_invariant_dim(&product)?;
                let fused = engine.chain_term_dim(&wp)?;
                let oracle = sp_invariant_dim_oracle_with(&product, table)?;
                Ok((littlewood != oracle || fused != oracle).then(|| {
                    format!("{}: littlewood {littlewood}, fused {fused}, oracle {oracle}", wp.label())
                }))
            };
            match run() {
                Ok(v) => v,
                Err(e) => Some(format!("{}: {e}", wp.label())),
            }
        })
        .flatten()
        .collect();
    match failures.first() {
        None => Ok(format!("{count} summands, weights <= {}", opts.max_degree)),
        Some(f) => Err(f.clone()),
    }
}

fn check_odd_vanishing() -> std::result::Result<String, String> {
    let engine = Engine::new(PairingMode::Exact);
    let wmax = 9;
    for w in (1..=wmax).step_by(2) {
        let t = engine.chain_dims(w).map_err(|e| e.to_string())?;
        if let Some((i, d)) = t.dims.iter().find(|(_, d)| !d.is_zero()) {
            return Err(format!("w = {w}: dim C_{i} = {d}"));
        }
    }
    Ok(format!("odd w <= {wmax}"))
}

fn check_euler_round_trip() -> std::result::Result<String, String> {
    let mut tables = Vec::new();
    let mut state: i64 = 12345;
    for len in [1usize, 5, 10, 20] {
        let mut chi = ChiTable::new();
        for i in 0..len {
            state = (state * 1103515245 + 12345).rem_euclid(1 << 31);
            chi.insert(2 * (i as u32 + 1), BigInt::from(state % 2_000_001 - 1_000_000)).unwrap();
        }
        tables.push(chi);
    }
    for chi in &tables {
        let t = extract_out_euler(chi).map_err(|e| e.to_string())?;
        let c = verify_congruence(chi, &t);
        if !c.holds() {
            return Err(format!("mismatch at degree {:?}", c.first_mismatch));
        }
        if expand_product(&t.exponents(), chi.max_weight()) != chi.series(chi.max_weight()) {
            return Err("rebuilt series differs".into());
        }
    }
    Ok(format!("{} pseudo-random tables", tables.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_small_degree() {
        let out = run_suite(&VerifyOptions::new(6));
        for o in &out {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    fn broken_mobius(n: u32) -> i32 {
        if n == 2 { 1 } else { mobius(n) }
    }

    #[test]
    fn injected_mobius_fault_is_caught() {
        let opts = VerifyOptions { max_degree: 6, mobius: broken_mobius };
        let witt = check_witt(&opts).unwrap_err();
        assert!(witt.starts_with("L_2 at N = 1"), "{witt}");
    }
}
