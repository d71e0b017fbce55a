//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Built without the libtest harness so the lines are
//! always printed.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use spchain_core::chain::{weight_partitions, Engine, PairingMode};
use spchain_core::characters::{schur_expand, CharacterTable};
use spchain_core::euler::{expand_product, extract_out_euler, verify_congruence, ChiTable};
use spchain_core::lie::{derivation_character, lie_character, sp_invariant_dim, sp_invariant_dim_oracle_with};
use spchain_core::numtheory::witt_dimension;
use spchain_core::{sf_mul, Partition, SymmetricFunction};

type Outcome = Result<String, String>;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn within(what: &str, elapsed: Duration, budget: Duration) -> Result<(), String> {
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("{what} took {:.1}s, budget {:.0}s", elapsed.as_secs_f64(), budget.as_secs_f64()))
    }
}

fn spchain(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_spchain"))
        .args(args)
        .arg("--quiet")
        .output()
        .map_err(|e| format!("spawning spchain: {e}"))?;
    if !out.status.success() {
        return Err(format!("spchain {args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn chi_values(csv: &str) -> Result<Vec<BigInt>, String> {
    let table = ChiTable::from_csv(csv).map_err(|e| e.to_string())?;
    Ok(table.iter().map(|(_, c)| c.clone()).collect())
}

fn reference_chi() -> Result<ChiTable, String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/chi_w20.csv");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ChiTable::from_csv(&text).map_err(|e| e.to_string())
}

fn weight_chi() -> Outcome {
    let start = Instant::now();
    let csv = spchain(&["chi", "--max-weight", "14", "--format", "csv"])?;
    let elapsed = start.elapsed();
    expect_eq("chi for w = 2..14", chi_values(&csv)?, ints(&[1, 2, 4, 6, 10, 16, 23]))?;
    within("chi --max-weight 14", elapsed, Duration::from_secs(600))?;
    Ok(format!("1 2 4 6 10 16 23 in {:.1}s", elapsed.as_secs_f64()))
}

fn extended_weights() -> Outcome {
    let start = Instant::now();
    let engine = Engine::new(PairingMode::Fused);
    let c16 = engine.euler_char(16).map_err(|e| e.to_string())?;
    let c18 = engine.euler_char(18).map_err(|e| e.to_string())?;
    expect_eq("chi_16, chi_18", (c16, c18), (BigInt::from(13), BigInt::from(-96)))?;
    Ok(format!("chi_16 = 13, chi_18 = -96 in {:.1}s", start.elapsed().as_secs_f64()))
}

fn weight_20() -> Outcome {
    let engine = Engine::new(PairingMode::Fused);
    let start = Instant::now();
    let c1 = engine.chain_dims_for_degrees(20, &[1]).map_err(|e| e.to_string())?;
    let c1_time = start.elapsed();
    expect_eq("dim C_1 at w = 20", c1.get(&1).cloned(), Some(BigInt::from(29729988u64)))?;
    within("dim C_1", c1_time, Duration::from_secs(60))?;

    let table = engine.chain_dims(20).map_err(|e| e.to_string())?;
    let expected: [u64; 20] = [
        29729988,
        410769138,
        2864009351,
        13262053269,
        45353489325,
        120900142805,
        259222260499,
        455821729958,
        665350325867,
        811759271904,
        830129318093,
        711071098888,
        508080341074,
        300343387403,
        144874973588,
        55809757570,
        16607403485,
        3615255878,
        519201462,
        37584620,
    ];
    for (i, want) in (1u32..).zip(expected) {
        expect_eq(&format!("dim C_{i}"), table.dim(i), BigInt::from(want))?;
    }
    expect_eq("total", table.total.clone(), BigInt::from(4946062104165u64))?;
    expect_eq("chi_20", table.euler.clone(), BigInt::from(-1299))?;
    Ok(format!(
        "C_1 in {:.2}s; all 20 rows, total and chi = -1299 in {:.1}s",
        c1_time.as_secs_f64(),
        start.elapsed().as_secs_f64()
    ))
}

fn out_euler_extraction() -> Outcome {
    let start = Instant::now();
    let chi = reference_chi()?;
    let t = extract_out_euler(&chi).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let e: Vec<BigInt> = t.rows.iter().map(|r| r.e.clone()).collect();
    let lower: Vec<BigInt> = t.rows.iter().map(|r| r.lower.clone()).collect();
    let n: Vec<u32> = t.rows.iter().map(|r| r.n).collect();
    expect_eq("n", n, (2..=11).collect())?;
    expect_eq("e(Out F_n)", e, ints(&[1, 1, 2, 1, 2, 1, 1, -21, -124, -1202]))?;
    expect_eq("lower terms", lower, ints(&[0, 1, 2, 5, 8, 15, 22, 34, 28, -97]))?;
    within("extraction", elapsed, Duration::from_secs(1))?;
    Ok("e = 1 1 2 1 2 1 1 -21 -124 -1202; lower terms match".into())
}

fn congruence() -> Outcome {
    let e: BTreeMap<u32, BigInt> =
        (2u32..).zip(ints(&[1, 1, 2, 1, 2, 1, 1, -21, -124, -1202])).collect();
    let want = ints(&[1, 0, 1, 0, 2, 0, 4, 0, 6, 0, 10, 0, 16, 0, 23, 0, 13, 0, -96, 0, -1299]);
    expect_eq("rebuilt product", expand_product(&e, 20), want)?;

    let chi = reference_chi()?;
    let mut table = extract_out_euler(&chi).map_err(|e| e.to_string())?;
    expect_eq("congruence holds", verify_congruence(&chi, &table).first_mismatch, None)?;
    let last = table.rows.last_mut().expect("ten rows");
    last.e += 1;
    expect_eq("perturbed e_11", verify_congruence(&chi, &table).first_mismatch, Some(20))?;
    Ok("through t^20; perturbing e_11 fails first at degree 20".into())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let engine = Engine::new(PairingMode::Check);
    let summands: Vec<_> = (2..=12).step_by(2).flat_map(weight_partitions).collect();
    let count = summands.len();
    let failures: Vec<String> = summands
        .into_par_iter()
        .with_max_len(1)
        .map_init(CharacterTable::new, |table, wp| {
            let mut product = SymmetricFunction::one();
            for &(k, m) in wp.factors() {
                match engine.exterior_power(k, m) {
                    Ok(f) => product = sf_mul(&product, &f),
                    Err(e) => return Some(format!("{}: {e}", wp.label())),
                }
            }
            let pairing = sp_invariant_dim(&product);
            let oracle = sp_invariant_dim_oracle_with(&product, table);
            match (pairing, oracle) {
                (Ok(a), Ok(b)) if a == b => None,
                (a, b) => Some(format!("{}: pairing {a:?}, oracle {b:?}", wp.label())),
            }
        })
        .flatten()
        .collect();
    if let Some(f) = failures.first() {
        return Err(f.clone());
    }
    within("oracle equivalence", start.elapsed(), Duration::from_secs(1800))?;
    Ok(format!("{count} chain pieces, w <= 12, in {:.1}s", start.elapsed().as_secs_f64()))
}

fn witt() -> Outcome {
    for k in 1..=12u32 {
        let ch = lie_character(k);
        for n in 1..=6u64 {
            let got = ch.character.specialize_dimension(n);
            let want = BigRational::from_integer(BigInt::from(witt_dimension(k, n)));
            expect_eq(&format!("L_{k} at N = {n}"), got, want)?;
        }
    }
    let h1 = derivation_character(1).map_err(|e| e.to_string())?;
    let sx = schur_expand(&h1.character).map_err(|e| e.to_string())?;
    let want = BTreeMap::from([(Partition::from_parts_unsorted(vec![1, 1, 1]), BigRational::from_integer(1.into()))]);
    expect_eq("h(1)", sx, want)?;
    Ok("k <= 12, N <= 6; h(1) = s_(1,1,1)".into())
}

fn odd_vanishing() -> Outcome {
    let engine = Engine::new(PairingMode::Exact);
    for w in [3, 5, 7, 9] {
        let t = engine.chain_dims(w).map_err(|e| e.to_string())?;
        if let Some((i, d)) = t.dims.iter().find(|(_, d)| !d.is_zero()) {
            return Err(format!("w = {w}: dim C_{i} = {d}"));
        }
    }
    Ok("w = 3, 5, 7, 9 identically zero".into())
}

fn determinism() -> Outcome {
    let one = spchain(&["chi", "--max-weight", "14", "--format", "csv", "--threads", "1"])?;
    let eight = spchain(&["chi", "--max-weight", "14", "--format", "csv", "--threads", "8"])?;
    expect_eq("CSV bytes", one.as_bytes(), eight.as_bytes())?;
    Ok(format!("{} identical bytes", one.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 weight chi w <= 14", weight_chi),
        ("2 chi at w = 16, 18", extended_weights),
        ("3 weight 20 chain dimensions", weight_20),
        ("4 Out(F_n) extraction", out_euler_extraction),
        ("5 congruence mod t^21", congruence),
        ("6 oracle equivalence w <= 12", oracle_equivalence),
        ("7 Witt and h(1)", witt),
        ("8 odd weights vanish", odd_vanishing),
        ("9 thread determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name:<30} {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<30} {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
