//! Integral Euler characteristics of `Out(F_n)` from the per-weight Euler
//! characteristics `χ_w`, via
//! `1 + Σ_w χ_w t^w = Π_{n>=2} (1 − t^{2n−2})^{−e(Out F_n)}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `χ_w` keyed by even weight `w >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChiTable {
    entries: BTreeMap<u32, BigInt>,
}

impl ChiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, w: u32, chi: BigInt) -> Result<()> {
        if w < 2 || w % 2 == 1 {
            return Err(Error::InvalidArgument(format!("chi weight {w} must be even and >= 2")));
        }
        self.entries.insert(w, chi);
        Ok(())
    }

    pub fn get(&self, w: u32) -> Option<&BigInt> {
        self.entries.get(&w)
    }

    pub fn max_weight(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.entries.iter().map(|(&w, c)| (w, c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps weights `<= max_weight`.
    pub fn truncated(&self, max_weight: u32) -> Self {
        Self { entries: self.entries.range(..=max_weight).map(|(&w, c)| (w, c.clone())).collect() }
    }

    /// Even weights in `2..=max_weight` with no entry.
    pub fn missing_weights(&self, max_weight: u32) -> Vec<u32> {
        (2..=max_weight).step_by(2).filter(|w| !self.entries.contains_key(w)).collect()
    }

    /// Parses the `w,chi` CSV format: a header line, then one row per
    /// even weight.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == "w,chi" => {}
            _ => return Err(Error::Parse { line: 1, msg: "expected header 'w,chi'".into() }),
        }
        let mut table = Self::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let err = |msg: String| Error::Parse { line: lineno, msg };
            let (w, chi) = line.trim().split_once(',').ok_or_else(|| err("expected 'w,chi'".into()))?;
            let w: u32 = w.trim().parse().map_err(|_| err(format!("bad weight '{w}'")))?;
            let chi: BigInt = chi.trim().parse().map_err(|_| err(format!("bad chi '{chi}'")))?;
            if table.entries.contains_key(&w) {
                return Err(err(format!("duplicate weight {w}")));
            }
            table.insert(w, chi).map_err(|e| err(e.to_string()))?;
        }
        Ok(table)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,chi\n");
        for (w, c) in &self.entries {
            out.push_str(&format!("{w},{c}\n"));
        }
        out
    }

    /// `(1, 0, χ_2, 0, χ_4, …)` through degree `max_weight`; absent weights
    /// count as 0.
    pub fn series(&self, max_weight: u32) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); max_weight as usize + 1];
        s[0] = BigInt::one();
        for (&w, c) in self.entries.range(..=max_weight) {
            s[w as usize] = c.clone();
        }
        s
    }
}

/// One column of the new-generator table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerRow {
    pub n: u32,
    /// `2n − 2`.
    pub weight: u32,
    pub chi: BigInt,
    /// Coefficient of `t^w` in the product over strictly smaller `n`.
    pub lower: BigInt,
    /// `e(Out F_n) = χ_w − lower`.
    pub e: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EulerTable {
    pub rows: Vec<EulerRow>,
}

impl EulerTable {
    pub fn exponents(&self) -> BTreeMap<u32, BigInt> {
        self.rows.iter().map(|r| (r.n, r.e.clone())).collect()
    }

    pub fn max_weight(&self) -> u32 {
        self.rows.last().map(|r| r.weight).unwrap_or(0)
    }

    pub fn row(&self, n: u32) -> Option<&EulerRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Coefficients of `(1 − x)^{−e}` through `x^len−1`:
/// `c_j = c_{j−1}·(e + j − 1)/j`. For negative `e` this is the finite
/// binomial expansion of `(1 − x)^{|e|}`.
fn negative_binomial(e: &BigInt, len: usize) -> Vec<BigInt> {
    let mut c = Vec::with_capacity(len);
    let mut cur = BigInt::one();
    for j in 0..len {
        if j > 0 {
            cur = cur * (e + BigInt::from(j - 1)) / BigInt::from(j);
        }
        c.push(cur.clone());
    }
    c
}

/// `series *= (1 − t^step)^{−e}`, truncated to the series length.
fn multiply_factor(series: &mut [BigInt], step: usize, e: &BigInt) {
    if e.is_zero() {
        return;
    }
    let len = series.len();
    let coeffs = negative_binomial(e, (len - 1) / step + 1);
    for deg in (0..len).rev() {
        let mut acc = BigInt::zero();
        for (j, c) in coeffs.iter().enumerate().take(deg / step + 1) {
            if !c.is_zero() && !series[deg - j * step].is_zero() {
                acc += c * &series[deg - j * step];
            }
        }
        series[deg] = acc;
    }
}

/// Coefficients of `Π_n (1 − t^{2n−2})^{−e_n}` modulo `t^{max_weight+1}`.
pub fn expand_product(exponents: &BTreeMap<u32, BigInt>, max_weight: u32) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); max_weight as usize + 1];
    series[0] = BigInt::one();
    for (&n, e) in exponents {
        if n < 2 {
            continue;
        }
        let step = (2 * n - 2) as usize;
        if step <= max_weight as usize {
            multiply_factor(&mut series, step, e);
        }
    }
    series
}

/// Peels off one factor per even weight: `e_n = χ_{2n−2} − [t^{2n−2}] Π_{m<n}`.
pub fn extract_out_euler(chi: &ChiTable) -> Result<EulerTable> {
    let max_weight = chi.max_weight();
    let missing = chi.missing_weights(max_weight);
    if !missing.is_empty() {
        return Err(Error::MissingWeights(missing));
    }
    let mut series = vec![BigInt::zero(); max_weight as usize + 1];
    series[0] = BigInt::one();
    let mut rows = Vec::new();
    for w in (2..=max_weight).step_by(2) {
        let n = w / 2 + 1;
        let chi_w = chi.get(w).expect("gaps rejected above").clone();
        let lower = series[w as usize].clone();
        let e = &chi_w - &lower;
        multiply_factor(&mut series, w as usize, &e);
        rows.push(EulerRow { n, weight: w, chi: chi_w, lower, e });
    }
    Ok(EulerTable { rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub max_weight: u32,
    /// First degree where the rebuilt product differs from the χ series.
    pub first_mismatch: Option<u32>,
}

impl Congruence {
    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Checks `Π (1 − t^{2n−2})^{−e_n} ≡ 1 + Σ χ_w t^w (mod t^{W+1})` where `W` is
/// the larger of the two tables' weight ranges.
pub fn verify_congruence(chi: &ChiTable, table: &EulerTable) -> Congruence {
    let max_weight = chi.max_weight().max(table.max_weight());
    let rebuilt = expand_product(&table.exponents(), max_weight);
    let target = chi.series(max_weight);
    let first_mismatch = (0..=max_weight).find(|&d| rebuilt[d as usize] != target[d as usize]);
    Congruence { max_weight, first_mismatch }
}
