//! Small number-theoretic helpers.

/// The Möbius function.
pub fn mobius(n: u32) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `(1/k) Σ_{d|k} μ(d) N^{k/d}`: the dimension of the degree-`k` part of the
/// free Lie algebra on `N` generators.
pub fn witt_dimension(k: u32, n: u64) -> i128 {
    let total: i128 = divisors(k)
        .into_iter()
        .map(|d| mobius(d) as i128 * (n as i128).pow(k / d))
        .sum();
    assert_eq!(total % k as i128, 0);
    total / k as i128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(2), -1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(49), 0);
    }

    #[test]
    fn necklace_counts() {
        // binary Lyndon words: 2, 1, 2, 3, 6, 9, 18, 30
        let got: Vec<i128> = (1..=8).map(|k| witt_dimension(k, 2)).collect();
        assert_eq!(got, vec![2, 1, 2, 3, 6, 9, 18, 30]);
    }
}
