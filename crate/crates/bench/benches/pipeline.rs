use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use spchain_bench::{exterior, exterior_mod, heaviest_summand};
use spchain_core::chain::{Engine, PairingMode};
use spchain_core::characters::CharacterTable;
use spchain_core::lie::{derivation_character, sp_invariant_dim, sp_invariant_dim_oracle_with};
use spchain_core::modular::{fused_invariant_dim, WeightTable};
use spchain_core::{exterior_plethysm, sf_mul};

fn plethysm(c: &mut Criterion) {
    let mut g = c.benchmark_group("exterior_plethysm");
    for (k, m) in [(1, 6), (2, 4), (4, 3)] {
        let h = derivation_character(k).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("e{m}[h{k}]")), &m, |b, &m| {
            b.iter(|| exterior_plethysm(m, black_box(&h.character)).unwrap())
        });
    }
    g.finish();
}

fn pairing(c: &mut Criterion) {
    let f = sf_mul(&exterior(1, 6), &exterior(2, 2));
    let mut g = c.benchmark_group("invariant_pairing");
    g.bench_function("littlewood", |b| b.iter(|| sp_invariant_dim(black_box(&f)).unwrap()));
    let a = exterior_mod(1, 6);
    let bb = exterior_mod(2, 2);
    let table = WeightTable::new(f.homogeneous_degree().unwrap());
    g.bench_function("fused", |b| b.iter(|| fused_invariant_dim(&[&a, &bb], &table, "bench").unwrap()));
    g.sample_size(10);
    g.bench_function("oracle", |b| {
        b.iter(|| sp_invariant_dim_oracle_with(black_box(&f), &mut CharacterTable::new()).unwrap())
    });
    g.finish();
}

fn chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("chain");
    g.sample_size(10);
    for w in [8, 10, 12] {
        g.bench_with_input(BenchmarkId::new("chain_dims", w), &w, |b, &w| {
            b.iter(|| Engine::new(PairingMode::Fused).chain_dims(w).unwrap())
        });
    }
    let engine = Engine::new(PairingMode::Fused);
    let wp = heaviest_summand(16);
    engine.prepare(16).unwrap();
    g.bench_function("term_w16_heaviest", |b| b.iter(|| engine.chain_term_dim(black_box(&wp)).unwrap()));
    g.finish();
}

criterion_group!(benches, plethysm, pairing, chain);
criterion_main!(benches);
