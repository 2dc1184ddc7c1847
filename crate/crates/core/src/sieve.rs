//! Segmented sieve of Eratosthenes with residue-class bookkeeping.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Default ceiling on the sieve limit (the prime list then takes ~1.6 GB).
pub const DEFAULT_SIEVE_LIMIT_CAP: u64 = 4_000_000_000;

const SEGMENT: u64 = 1 << 18;

/// All primes up to `limit`, with per-class lists mod `modulus`.
#[derive(Clone, Debug)]
pub struct SieveTable {
    limit: u64,
    modulus: u64,
    primes: Vec<u64>,
    by_class: BTreeMap<u64, Vec<u64>>,
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes `≤ limit` with their residues mod `q`.
pub fn sieve(limit: u64, q: u64) -> Result<SieveTable> {
    sieve_capped(limit, q, DEFAULT_SIEVE_LIMIT_CAP)
}

pub fn sieve_capped(limit: u64, q: u64, limit_cap: u64) -> Result<SieveTable> {
    if limit < 2 {
        return Err(Error::InvalidParameter(format!("sieve limit must be at least 2, got {limit}")));
    }
    if q == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    if limit > limit_cap {
        return Err(Error::CapExceeded { what: "sieve limit", needed: limit as u128, cap: limit_cap as u128 });
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = small_primes(root);
    let mut primes = Vec::new();
    let mut flags = vec![true; SEGMENT as usize];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + SEGMENT - 1).min(limit);
        let len = (high - low + 1) as usize;
        flags[..len].iter_mut().for_each(|f| *f = true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut start = low.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j <= high {
                flags[(j - low) as usize] = false;
                j += p;
            }
        }
        primes.extend((0..len).filter(|&i| flags[i]).map(|i| low + i as u64));
        low = high + 1;
    }
    let mut by_class: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &p in &primes {
        by_class.entry(p % q).or_default().push(p);
    }
    Ok(SieveTable { limit, modulus: q, primes, by_class })
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn class_of(&self, p: u64) -> u64 {
        p % self.modulus
    }

    /// Primes `≤ x` congruent to `class` mod `q`.
    pub fn class_primes(&self, class: u64) -> &[u64] {
        self.by_class.get(&class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `π(x)`; `x` must not exceed the limit.
    pub fn pi(&self, x: u64) -> u64 {
        self.primes.partition_point(|&p| p <= x) as u64
    }

    /// `π(x; q, class)`.
    pub fn pi_class(&self, x: u64, class: u64) -> u64 {
        self.class_primes(class).partition_point(|&p| p <= x) as u64
    }

    /// Prime counts per residue class up to `x`.
    pub fn per_class_counts(&self, x: u64) -> BTreeMap<u64, u64> {
        self.by_class.keys().map(|&c| (c, self.pi_class(x, c))).collect()
    }

    pub fn ensure_covers(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::SieveTooSmall { needed: x, have: self.limit })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let t = sieve(30, 9).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(t.class_primes(1), &[19]);
        assert_eq!(t.class_primes(4), &[13]);
        assert_eq!(t.class_primes(7), &[7]);
        assert_eq!(sieve(2, 9).unwrap().primes(), &[2]);
        assert!(sieve(1, 9).is_err());
        assert!(sieve_capped(1000, 9, 999).is_err());
    }

    #[test]
    fn crosses_segments() {
        let limit = 3 * SEGMENT + 17;
        let t = sieve(limit, 9).unwrap();
        assert_eq!(t.primes(), small_primes(limit).as_slice());
        let total: u64 = t.per_class_counts(limit).values().sum();
        assert_eq!(total, t.pi(limit));
    }
}
