//! Subset enumeration guard shared by the exhaustive checks.

use crate::error::{Error, Result};

/// Largest number of subsets any exhaustive check will enumerate.
pub const SUBSET_LIMIT: u128 = 1_000_000;

/// `C(n, k)` in exact integer arithmetic (saturating at `u128::MAX`).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Errors with [`Error::TooLarge`] when `count` exceeds [`SUBSET_LIMIT`].
pub fn guard(count: u128) -> Result<()> {
    if count > SUBSET_LIMIT {
        return Err(Error::TooLarge { count, limit: SUBSET_LIMIT });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn guard_trips_above_the_limit() {
        assert!(guard(binomial(20, 10)).is_ok());
        assert!(matches!(guard(binomial(40, 10)), Err(Error::TooLarge { .. })));
    }
}
