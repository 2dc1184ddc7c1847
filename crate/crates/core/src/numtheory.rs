//! Small-integer helpers shared by the group and counting code.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a.lcm(&b)
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Residues in `[0, m)` coprime to `m`; for `m = 1` this is `[0]`.
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&a| gcd(a, m) == 1).collect()
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// A small generating set of `(Z/m)^*`, chosen greedily in increasing order.
pub fn unit_generators(m: u64) -> Vec<u64> {
    if m <= 2 {
        return Vec::new();
    }
    let mut in_sub = vec![false; m as usize];
    in_sub[1] = true;
    let mut members = vec![1u64];
    let mut gens = Vec::new();
    for a in units(m) {
        if in_sub[a as usize] {
            continue;
        }
        gens.push(a);
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in &gens {
                let y = mul_mod(x, g, m);
                if !in_sub[y as usize] {
                    in_sub[y as usize] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
    }
    gens
}

/// `p^k` exactly dividing `n`.
pub fn prime_power_part(n: u64, p: u64) -> u64 {
    let mut q = 1;
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
        q *= p;
    }
    q
}

/// The prime `p` if `n = p^k` with `k ≥ 1`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    match factorize(n).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

/// Solve `x ≡ a (mod m1)`, `x ≡ b (mod m2)` for coprime moduli.
pub fn crt_pair(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    (0..m2)
        .map(|k| a % m1 + k * m1)
        .find(|x| x % m2 == b % m2)
        .expect("coprime moduli")
        % m
}

/// `C(k, 2)`.
pub fn binomial2(k: u64) -> u64 {
    (k as u128 * k.saturating_sub(1) as u128 / 2) as u64
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn unit_generators_generate() {
        assert_eq!(unit_generators(9), vec![2]);
        assert_eq!(unit_generators(12), vec![5, 7]);
        assert!(unit_generators(2).is_empty());
        for m in 3..60u64 {
            let gens = unit_generators(m);
            let mut seen = std::collections::BTreeSet::from([1u64]);
            let mut frontier = vec![1u64];
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = mul_mod(x, g, m);
                    if seen.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            assert_eq!(seen.len() as u64, euler_phi(m), "m = {m}");
        }
    }

    #[test]
    fn crt_solves() {
        let x = crt_pair(1, 4, 2, 3);
        assert_eq!(x % 4, 1);
        assert_eq!(x % 3, 2);
        assert_eq!(prime_power_part(24, 2), 8);
        assert_eq!(prime_power_base(81), Some(3));
        assert_eq!(prime_power_base(24), None);
        assert!(is_prime(19) && !is_prime(21) && !is_prime(1));
    }
}
