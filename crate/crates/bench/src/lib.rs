//! Fixtures shared by the criterion benches.

use spchain_core::chain::{weight_partitions, WeightPartition};
use spchain_core::lie::derivation_character;
use spchain_core::modular::ModPoly;
use spchain_core::{exterior_plethysm, SymmetricFunction};

/// `e_m[h(k)]`, exactly.
pub fn exterior(k: u32, m: u32) -> SymmetricFunction {
    let h = derivation_character(k).expect("k >= 1");
    exterior_plethysm(m, &h.character).expect("homogeneous")
}

/// Reduced form of `e_m[h(k)]`.
pub fn exterior_mod(k: u32, m: u32) -> ModPoly {
    ModPoly::from_symmetric_function(&exterior(k, m)).expect("parts fit")
}

/// Chain summand of weight `w` with the largest symmetric-function degree.
pub fn heaviest_summand(w: u32) -> WeightPartition {
    weight_partitions(w).into_iter().max_by_key(|wp| wp.sf_degree()).expect("w >= 1")
}
