/// Exact binomial coefficient; `None` once it no longer fits.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1) at every step
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c)
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// Exact up to `n = 64`, log-space beyond.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if n <= 64 {
        binomial_u128(n, k).expect("fits for n <= 64") as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial_u128(0, 0), Some(1));
        assert_eq!(binomial_u128(5, 2), Some(10));
        assert_eq!(binomial_u128(3, 4), Some(0));
        assert_eq!(binomial_u128(64, 32), Some(1_832_624_140_942_590_534));
    }

    #[test]
    fn pascal_rule_to_64() {
        for n in 1..=64u64 {
            for k in 1..n {
                assert_eq!(
                    binomial_u128(n, k).unwrap(),
                    binomial_u128(n - 1, k - 1).unwrap() + binomial_u128(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn log_space_matches_exact() {
        let exact = binomial_u128(100, 30).unwrap() as f64;
        assert!((binomial_f64(100, 30) / exact - 1.0).abs() < 1e-10);
    }
}
