use std::collections::BTreeSet;

use num_prime::nt_funcs::{factorize128, factorize64};

use super::{GfError, Result};

/// Distinct prime factors of `p^d - 1`, ascending.
///
/// `p^d - 1` is split algebraically as `(p^(d/2) - 1)(p^(d/2) + 1)` while `d`
/// is even so the pieces handed to the factorizer stay small.
pub(crate) fn prime_factors_of_pow_minus_one(p: u64, d: u32) -> Result<Vec<u128>> {
    let mut primes = BTreeSet::new();
    let mut pending = vec![(d, -1i8)];
    while let Some((e, sign)) = pending.pop() {
        let pe = (p as u128).checked_pow(e).ok_or(GfError::OrderOverflow)?;
        if sign < 0 && e % 2 == 0 {
            pending.push((e / 2, -1));
            pending.push((e / 2, 1));
            continue;
        }
        let n = if sign < 0 { pe - 1 } else { pe + 1 };
        collect_factors(n, &mut primes)?;
    }
    Ok(primes.into_iter().collect())
}

fn collect_factors(n: u128, out: &mut BTreeSet<u128>) -> Result<()> {
    if n <= 1 {
        return Ok(());
    }
    if n <= u64::MAX as u128 {
        out.extend(factorize64(n as u64).into_keys().map(u128::from));
        return Ok(());
    }
    let factors = factorize128(n);
    if factors.iter().map(|(p, e)| p.pow(*e as u32)).product::<u128>() != n {
        return Err(GfError::Factorization(n));
    }
    out.extend(factors.into_keys());
    Ok(())
}
