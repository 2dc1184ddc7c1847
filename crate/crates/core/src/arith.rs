//! Exact counts for the conductor parametrization of `G_n`: multiplicative
//! functions over residue classes, hom and epi counts, and the dissection of
//! the tuple sum by trivial-entry sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{cap_check, Error, Result};
use crate::families::{build_gn, pi0};
use crate::group::{CocycleGroup, GroupElement};
use crate::sieve::{sieve, SieveTable};

/// Default bound on the number of tuples streamed.
pub const DEFAULT_TUPLE_CAP: u64 = 10_000_000;

/// Largest `X` accepted by the per-integer oracle.
pub const ORACLE_LIMIT: u64 = 1_000_000;

/// A multiplicative function supported on squarefree integers with `f(p)`
/// depending only on `p mod q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassFunctionSpec {
    modulus: u64,
    values: BTreeMap<u64, BigUint>,
}

impl ResidueClassFunctionSpec {
    pub fn new(modulus: u64, values: BTreeMap<u64, BigUint>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        if let Some(r) = values.keys().find(|&&r| r >= modulus) {
            return Err(Error::InvalidParameter(format!("residue {r} is not reduced mod {modulus}")));
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Self { modulus, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &BTreeMap<u64, BigUint> {
        &self.values
    }

    /// `f(p)` for a prime `p`.
    pub fn at_prime(&self, p: u64) -> BigUint {
        self.values.get(&(p % self.modulus)).cloned().unwrap_or_default()
    }

    fn is_supported(&self, p: u64) -> bool {
        self.values.contains_key(&(p % self.modulus))
    }

    /// `f(p) = N₃ + N₉` for `p ≡ 1 mod 9`, `N₃` for `p ≡ 4, 7 mod 9`: the number
    /// of ways to place a prime on one of `N₃` elements of order 3 and `N₉`
    /// elements of order 9.
    pub fn from_order_counts(order3: u64, order9: u64) -> Self {
        let values = BTreeMap::from([
            (1, BigUint::from(order3 + order9)),
            (4, BigUint::from(order3)),
            (7, BigUint::from(order3)),
        ]);
        Self::new(9, values).expect("residues are reduced")
    }
}

/// `f(p) = (9^n − 1)·1[p ≡ 4, 7 mod 9] + (27^n − 1)·1[p ≡ 1 mod 9]`.
pub fn f_spec_for_gn(n: usize) -> Result<ResidueClassFunctionSpec> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let one = BigUint::one();
    let b9 = num_traits::pow(BigUint::from(9u32), n) - &one;
    let b27 = num_traits::pow(BigUint::from(27u32), n) - &one;
    ResidueClassFunctionSpec::new(9, BTreeMap::from([(1, b27), (4, b9.clone()), (7, b9)]))
}

/// Support primes up to `x` with per-class running counts.
struct SupportIndex<'a> {
    spec: &'a ResidueClassFunctionSpec,
    primes: Vec<u64>,
    classes: Vec<(BigUint, Vec<u32>)>,
}

impl<'a> SupportIndex<'a> {
    fn new(spec: &'a ResidueClassFunctionSpec, x: u64, table: &SieveTable) -> Self {
        let end = table.primes().partition_point(|&p| p <= x);
        let primes: Vec<u64> = table.primes()[..end]
            .iter()
            .copied()
            .filter(|&p| spec.is_supported(p))
            .collect();
        let classes = spec
            .values
            .iter()
            .map(|(&r, v)| {
                let mut running = Vec::with_capacity(primes.len() + 1);
                let mut c = 0u32;
                running.push(0);
                for &p in &primes {
                    if p % spec.modulus == r {
                        c += 1;
                    }
                    running.push(c);
                }
                (v.clone(), running)
            })
            .collect();
        Self { spec, primes, classes }
    }

    /// `Σ_{i ≤ j < k} f(p_j)`.
    fn range_sum(&self, i: usize, k: usize) -> BigUint {
        self.classes
            .iter()
            .map(|(v, running)| v * BigUint::from(running[k] - running[i]))
            .sum()
    }

    /// `Σ` of `f` over squarefree `m' ≤ x` whose prime factors are all `> p_{start−1}`,
    /// each weighted by `f(m)` of the prefix already fixed.
    fn dfs(&self, start: usize, m: u64, x: u64, weight: &BigUint) -> BigUint {
        let mut total = weight.clone();
        let bound = x / m;
        let hi = self.primes.partition_point(|&p| p <= bound);
        let mut i = start;
        while i < hi {
            let p = self.primes[i];
            let next = m * p;
            let has_child = i + 1 < self.primes.len() && self.primes[i + 1] <= x / next;
            if !has_child {
                // no later prime has a child either
                total += weight * self.range_sum(i, hi);
                break;
            }
            total += self.dfs(i + 1, next, x, &(weight * self.spec.at_prime(p)));
            i += 1;
        }
        total
    }
}

/// `Σ_{m ≤ X} f(m)`, exactly.
///
/// Depth-first over squarefree products of support primes in increasing
/// order; a node whose children are all leaves is summed through per-class
/// prime counts instead of being expanded.
pub fn sum_multiplicative(spec: &ResidueClassFunctionSpec, x: u64, table: &SieveTable) -> Result<BigUint> {
    if x == 0 {
        return Err(Error::InvalidParameter("X must be at least 1".into()));
    }
    table.ensure_covers(x)?;
    let index = SupportIndex::new(spec, x, table);
    let one = BigUint::one();
    // first-prime branches with children run in parallel; the rest are leaves
    let leaves_from = index
        .primes
        .iter()
        .enumerate()
        .position(|(i, &p)| !(i + 1 < index.primes.len() && index.primes[i + 1] <= x / p))
        .unwrap_or(index.primes.len());
    let branches: BigUint = (0..leaves_from)
        .into_par_iter()
        .map(|i| {
            let p = index.primes[i];
            index.dfs(i + 1, p, x, &spec.at_prime(p))
        })
        .reduce(BigUint::zero, |a, b| a + b);
    Ok(one + branches + index.range_sum(leaves_from, index.primes.len()))
}

/// `Σ_{m ≤ X} f(m)` by factoring every `m` with a smallest-prime-factor table.
pub fn sum_multiplicative_oracle(spec: &ResidueClassFunctionSpec, x: u64) -> Result<BigUint> {
    if x == 0 {
        return Err(Error::InvalidParameter("X must be at least 1".into()));
    }
    cap_check("oracle X", x as u128, ORACLE_LIMIT as u128)?;
    let n = x as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut total = BigUint::one();
    'outer: for m in 2..=n {
        let mut rest = m;
        let mut value = BigUint::one();
        while rest > 1 {
            let p = spf[rest] as usize;
            rest /= p;
            if rest % p == 0 {
                continue 'outer;
            }
            let fp = spec.at_prime(p as u64);
            if fp.is_zero() {
                continue 'outer;
            }
            value *= fp;
        }
        total += value;
    }
    Ok(total)
}

/// `2·27^n`, the number of `g₀` with `π₀(q(g₀)) ≠ 0`.
fn g0_count(n: usize) -> BigUint {
    BigUint::from(2u32) * num_traits::pow(BigUint::from(27u32), n)
}

/// Number of tuples in the bad set with conductor `≤ X`:
/// `2·27^n·Σ_{m ≤ X/3} f(m)`, and `0` for `X < 3`.
pub fn hom_count(n: usize, x: u64, table: &SieveTable) -> Result<BigUint> {
    let spec = f_spec_for_gn(n)?;
    if x < 3 {
        return Ok(BigUint::zero());
    }
    Ok(g0_count(n) * sum_multiplicative(&spec, x / 3, table)?)
}

/// Sieve large enough for counts at conductor bound `x`.
pub fn sieve_for_conductor(x: u64) -> Result<SieveTable> {
    sieve((x / 3).max(2), 9)
}

/// The elements of `G_n` relevant to Definition-style tuples, with orders.
#[derive(Clone, Debug)]
pub struct TupleContext {
    n: usize,
    group: CocycleGroup,
    /// `T_n` as `(index, order)` in element order.
    tn: Vec<(u64, u64)>,
    /// Indices of `g` with `π₀(q(g)) ≠ 0`.
    g0s: Vec<u64>,
}

impl TupleContext {
    pub fn new(n: usize) -> Result<Self> {
        let group = build_gn(n)?;
        let mut tn = Vec::new();
        let mut g0s = Vec::new();
        for g in group.elements(crate::DEFAULT_ELEMENT_CAP)? {
            let i = group.index_of(&g);
            if group.is_identity(&g) {
                continue;
            }
            if pi0(&g) == 0 {
                tn.push((i, group.element_order_raw(&g)));
            } else {
                g0s.push(i);
            }
        }
        Ok(Self { n, group, tn, g0s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &CocycleGroup {
        &self.group
    }

    /// `T_n` indices in element order.
    pub fn tn(&self) -> impl Iterator<Item = u64> + '_ {
        self.tn.iter().map(|&(i, _)| i)
    }

    pub fn tn_len(&self) -> usize {
        self.tn.len()
    }

    pub fn g0_indices(&self) -> &[u64] {
        &self.g0s
    }

    pub fn order_of(&self, index: u64) -> u64 {
        self.group.element_order_raw(&self.group.element_at(index))
    }

    /// `T_n` elements that may carry `p`: `p ≡ 1 mod ord(g)`.
    fn allowed(&self, p: u64) -> Vec<u64> {
        self.tn.iter().filter(|&&(_, o)| p % o == 1).map(|&(i, _)| i).collect()
    }

    /// `(N₃, N₉)`: orders of the `T_n` elements not in `excluded`.
    fn order_counts_outside(&self, excluded: &BTreeSet<u64>) -> (u64, u64) {
        let mut n3 = 0;
        let mut n9 = 0;
        for &(i, o) in &self.tn {
            if excluded.contains(&i) {
                continue;
            }
            match o {
                3 => n3 += 1,
                9 => n9 += 1,
                _ => unreachable!("T_n has exponent 9"),
            }
        }
        (n3, n9)
    }

    fn check_subset(&self, s: &BTreeSet<u64>) -> Result<()> {
        let tn: BTreeSet<u64> = self.tn().collect();
        match s.iter().find(|i| !tn.contains(i)) {
            Some(i) => Err(Error::InvalidParameter(format!("element index {i} is not in T_n"))),
            None => Ok(()),
        }
    }
}

/// `(v_g)`, stored sparsely: entries equal to 1 are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationTuple {
    pub n: usize,
    pub assignments: BTreeMap<u64, u64>,
}

impl RamificationTuple {
    /// `Π v_g`.
    pub fn conductor(&self) -> u64 {
        self.assignments.values().product()
    }

    /// Indices with `v_g ≠ 1`.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.assignments.keys().copied()
    }

    /// The four membership conditions; returns the first one violated.
    pub fn check(&self, ctx: &TupleContext) -> std::result::Result<(), String> {
        let g = ctx.group();
        let values: Vec<u64> = self.assignments.values().copied().collect();
        for (&i, &v) in &self.assignments {
            if i >= g.order() || g.is_identity(&g.element_at(i)) {
                return Err(format!("index {i} is not a non-identity element"));
            }
            if v == 0 || crate::numtheory::factorize(v).iter().any(|&(_, e)| e > 1) {
                return Err(format!("v_{i} = {v} is not squarefree"));
            }
        }
        for (a, &x) in values.iter().enumerate() {
            for &y in &values[a + 1..] {
                if crate::numtheory::gcd(x, y) != 1 {
                    return Err(format!("{x} and {y} are not coprime"));
                }
            }
        }
        let mut wild = 1u64;
        for (&i, &v) in &self.assignments {
            let el: GroupElement = g.element_at(i);
            if pi0(&el) == 0 {
                let o = g.element_order_raw(&el);
                if let Some((p, _)) = crate::numtheory::factorize(v).into_iter().find(|&(p, _)| p % o != 1) {
                    return Err(format!("prime {p} on an element of order {o}"));
                }
            } else {
                wild *= v;
            }
        }
        if wild != 3 {
            return Err(format!("product over π₀ ≠ 0 is {wild}, not 3"));
        }
        Ok(())
    }
}

impl fmt::Display for RamificationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, v) in &self.assignments {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{i}:{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Squarefree products `≤ bound` of primes `≡ 1 mod 3`, as ascending prime
/// lists in depth-first order.
fn tame_products(bound: u64) -> Vec<Vec<u64>> {
    let primes: Vec<u64> = if bound >= 2 {
        sieve(bound, 3).map(|t| t.class_primes(1).to_vec()).unwrap_or_default()
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn walk(primes: &[u64], start: usize, m: u64, bound: u64, stack: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(stack.clone());
        for (i, &p) in primes.iter().enumerate().skip(start) {
            if m * p > bound {
                break;
            }
            stack.push(p);
            walk(primes, i + 1, m * p, bound, stack, out);
            stack.pop();
        }
    }
    walk(&primes, 0, 1, bound, &mut stack, &mut out);
    out
}

/// Lazy stream over the bad set with conductor `≤ X`: `g₀` outermost in
/// element order, then tame products in depth-first order, then an odometer
/// over the admissible element for each prime.
pub struct BadTupleIter<'a> {
    ctx: &'a TupleContext,
    products: Vec<Vec<u64>>,
    choices: Vec<Vec<Vec<u64>>>,
    g0_pos: usize,
    product_pos: usize,
    odometer: Vec<usize>,
    done: bool,
}

impl<'a> BadTupleIter<'a> {
    fn new(ctx: &'a TupleContext, x: u64) -> Self {
        let (products, done) = if x < 3 { (Vec::new(), true) } else { (tame_products(x / 3), false) };
        let choices: Vec<Vec<Vec<u64>>> = products
            .iter()
            .map(|ps| ps.iter().map(|&p| ctx.allowed(p)).collect())
            .collect();
        let mut it = Self {
            ctx,
            products,
            choices,
            g0_pos: 0,
            product_pos: 0,
            odometer: Vec::new(),
            done: done || ctx.g0s.is_empty(),
        };
        if !it.done {
            it.reset_odometer();
        }
        it
    }

    fn reset_odometer(&mut self) {
        self.odometer = vec![0; self.products[self.product_pos].len()];
    }

    fn current(&self) -> RamificationTuple {
        let mut assignments = BTreeMap::new();
        assignments.insert(self.ctx.g0s[self.g0_pos], 3);
        for ((&p, options), &k) in self.products[self.product_pos]
            .iter()
            .zip(&self.choices[self.product_pos])
            .zip(&self.odometer)
        {
            *assignments.entry(options[k]).or_insert(1) *= p;
        }
        RamificationTuple { n: self.ctx.n, assignments }
    }

    fn advance(&mut self) {
        let options = &self.choices[self.product_pos];
        for pos in (0..self.odometer.len()).rev() {
            self.odometer[pos] += 1;
            if self.odometer[pos] < options[pos].len() {
                return;
            }
            self.odometer[pos] = 0;
        }
        self.product_pos += 1;
        if self.product_pos == self.products.len() {
            self.product_pos = 0;
            self.g0_pos += 1;
            if self.g0_pos == self.ctx.g0s.len() {
                self.done = true;
                return;
            }
        }
        self.reset_odometer();
    }
}

impl Iterator for BadTupleIter<'_> {
    type Item = RamificationTuple;

    fn next(&mut self) -> Option<RamificationTuple> {
        if self.done {
            return None;
        }
        let t = self.current();
        self.advance();
        Some(t)
    }
}

/// Every tuple of the bad set with conductor `≤ X`, exactly once; refuses
/// when the exact count exceeds `cap`.
pub fn enumerate_bad_tuples(ctx: &TupleContext, x: u64, cap: u64) -> Result<BadTupleIter<'_>> {
    let count = hom_count(ctx.n, x, &sieve_for_conductor(x)?)?;
    let needed: u128 = count.try_into().unwrap_or(u128::MAX);
    cap_check("tuple enumeration", needed, cap as u128)?;
    Ok(BadTupleIter::new(ctx, x))
}

/// Whether the `q`-images of the support generate `A_n`.
pub fn is_surjective(ctx: &TupleContext, t: &RamificationTuple) -> bool {
    let g = ctx.group();
    let images: Vec<GroupElement> = t.support().map(|i| g.element_at(i)).collect();
    g.generates_abelianization(&images)
}

/// Subspaces of `F_3^k`, each as a membership table over `3^k` vectors
/// (mixed radix, first coordinate most significant).
fn subspaces_f3(k: usize) -> Vec<Vec<bool>> {
    let v = crate::group::AbelianSpec::new(vec![3; k]).expect("positive orders");
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut frontier = vec![Vec::<Vec<u32>>::new()];
    seen.insert(v.subgroup_closure(&[]));
    while let Some(gens) = frontier.pop() {
        let current = v.subgroup_closure(&gens);
        for x in v.elements() {
            if current[v.index_of(&x) as usize] {
                continue;
            }
            let mut next = gens.clone();
            next.push(x);
            let closure = v.subgroup_closure(&next);
            if seen.insert(closure) {
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// `epi` count by Möbius inversion over the subgroups `B ⊇ 3A_n`:
/// `Σ_B μ(B, A)·hom_B`, where `μ(B, A) = (−1)^k 3^{k(k−1)/2}` for
/// `A/B ≅ (Z/3)^k` and `hom_B` counts tuples with all support in `q⁻¹(B)`.
pub fn epi_count(ctx: &TupleContext, x: u64, table: &SieveTable) -> Result<BigInt> {
    if x < 3 {
        return Ok(BigInt::zero());
    }
    let g = ctx.group();
    let base = g.base();
    let rank = base.rank();
    let frattini = crate::group::AbelianSpec::new(vec![3; rank])?;
    let reduce = |el: &GroupElement| -> usize {
        let v: Vec<u32> = el.a().iter().map(|&c| c % 3).collect();
        frattini.index_of(&v) as usize
    };
    let g0_classes: Vec<usize> = ctx.g0s.iter().map(|&i| reduce(&g.element_at(i))).collect();
    let tn_classes: Vec<(usize, u64)> = ctx.tn.iter().map(|&(i, o)| (reduce(&g.element_at(i)), o)).collect();
    let mut total = BigInt::zero();
    for w in subspaces_f3(rank) {
        let dim = (w.iter().filter(|&&m| m).count() as f64).log(3.0).round() as u32;
        let k = rank as u32 - dim;
        let mu = BigInt::from(3u32).pow(k * k.saturating_sub(1) / 2);
        let mu = if k % 2 == 1 { -mu } else { mu };
        let g0 = g0_classes.iter().filter(|&&c| w[c]).count() as u64;
        if g0 == 0 {
            continue;
        }
        let n3 = tn_classes.iter().filter(|&&(c, o)| w[c] && o == 3).count() as u64;
        let n9 = tn_classes.iter().filter(|&&(c, o)| w[c] && o == 9).count() as u64;
        let spec = ResidueClassFunctionSpec::from_order_counts(n3, n9);
        let hom_b = BigUint::from(g0) * sum_multiplicative(&spec, x / 3, table)?;
        total += mu * BigInt::from(hom_b);
    }
    Ok(total)
}

/// `epi` count by filtering the tuple stream.
pub fn epi_count_direct(ctx: &TupleContext, x: u64, cap: u64) -> Result<u64> {
    Ok(enumerate_bad_tuples(ctx, x, cap)?.filter(|t| is_surjective(ctx, t)).count() as u64)
}

/// `N₂(X, S)` including the `2·27^n` choices of `g₀`: tuples with `v_g = 1`
/// for every `g ∈ S`.
pub fn n2_sum(ctx: &TupleContext, s: &BTreeSet<u64>, x: u64, table: &SieveTable) -> Result<BigUint> {
    ctx.check_subset(s)?;
    if x < 3 {
        return Ok(BigUint::zero());
    }
    let (n3, n9) = ctx.order_counts_outside(s);
    let spec = ResidueClassFunctionSpec::from_order_counts(n3, n9);
    Ok(g0_count(ctx.n) * sum_multiplicative(&spec, x / 3, table)?)
}

/// `N₁(X, S)` including the `g₀` factor: tuples with `v_g = 1 ⇔ g ∈ S` on `T_n`.
///
/// Evaluated as `Σ_{S' ⊇ S} (−1)^{|S'|−|S|} N₂(X, S')`, grouping `S'` by how
/// many elements of each order it adds; `N₂` depends on `S'` only through
/// those counts.
pub fn n1_sum(ctx: &TupleContext, s: &BTreeSet<u64>, x: u64, table: &SieveTable) -> Result<BigInt> {
    ctx.check_subset(s)?;
    if x < 3 {
        return Ok(BigInt::zero());
    }
    let (m3, m9) = ctx.order_counts_outside(s);
    let mut total = BigInt::zero();
    let mut cache: BTreeMap<(u64, u64), BigUint> = BTreeMap::new();
    for j3 in 0..=m3 {
        for j9 in 0..=m9 {
            let key = (m3 - j3, m9 - j9);
            let inner = match cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let spec = ResidueClassFunctionSpec::from_order_counts(key.0, key.1);
                    let v = sum_multiplicative(&spec, x / 3, table)?;
                    cache.insert(key, v.clone());
                    v
                }
            };
            if inner.is_zero() {
                continue;
            }
            let weight = num_integer::binomial(BigUint::from(m3), BigUint::from(j3))
                * num_integer::binomial(BigUint::from(m9), BigUint::from(j9));
            let term = BigInt::from(weight * inner);
            if (j3 + j9) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    Ok(total * BigInt::from(g0_count(ctx.n)))
}

/// Support of a tuple restricted to `T_n`.
pub fn tame_support(ctx: &TupleContext, t: &RamificationTuple) -> BTreeSet<u64> {
    let g = ctx.group();
    t.support().filter(|&i| pi0(&g.element_at(i)) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(x: u64) -> SieveTable {
        sieve(x.max(2), 9).unwrap()
    }

    #[test]
    fn f_values() {
        let f = f_spec_for_gn(1).unwrap();
        assert_eq!(f.at_prime(7), BigUint::from(8u32));
        assert_eq!(f.at_prime(19), BigUint::from(26u32));
        assert_eq!(f.at_prime(5), BigUint::zero());
        assert_eq!(f.at_prime(3), BigUint::zero());
        assert!(f_spec_for_gn(0).is_err());
        assert!(ResidueClassFunctionSpec::new(9, BTreeMap::from([(9, BigUint::one())])).is_err());
    }

    #[test]
    fn small_sums() {
        let f = f_spec_for_gn(1).unwrap();
        let t = table(100);
        assert_eq!(sum_multiplicative(&f, 1, &t).unwrap(), BigUint::one());
        assert_eq!(sum_multiplicative(&f, 30, &t).unwrap(), BigUint::from(43u32));
        assert_eq!(sum_multiplicative_oracle(&f, 30).unwrap(), BigUint::from(43u32));
        let zero = ResidueClassFunctionSpec::new(9, BTreeMap::new()).unwrap();
        assert_eq!(sum_multiplicative(&zero, 10_000, &table(10_000)).unwrap(), BigUint::one());
        assert!(matches!(sum_multiplicative(&f, 101, &t), Err(Error::SieveTooSmall { .. })));
        assert!(sum_multiplicative_oracle(&f, ORACLE_LIMIT + 1).is_err());
    }

    #[test]
    fn sums_match_oracle_small_range() {
        let t = table(5000);
        for n in 1..=2 {
            let f = f_spec_for_gn(n).unwrap();
            for x in [1, 2, 6, 7, 49, 91, 92, 500, 1000, 4999] {
                assert_eq!(sum_multiplicative(&f, x, &t).unwrap(), sum_multiplicative_oracle(&f, x).unwrap());
            }
        }
    }

    #[test]
    fn hom_values() {
        let t = table(100);
        assert_eq!(hom_count(1, 2, &t).unwrap(), BigUint::zero());
        assert_eq!(hom_count(1, 3, &t).unwrap(), BigUint::from(54u32));
        assert_eq!(hom_count(1, 90, &t).unwrap(), BigUint::from(2322u32));
    }

    #[test]
    fn tuple_stream_small() {
        let ctx = TupleContext::new(1).unwrap();
        assert_eq!(ctx.tn_len(), 26);
        assert_eq!(ctx.g0_indices().len(), 54);
        assert_eq!(enumerate_bad_tuples(&ctx, 2, DEFAULT_TUPLE_CAP).unwrap().count(), 0);
        let tuples: Vec<_> = enumerate_bad_tuples(&ctx, 90, DEFAULT_TUPLE_CAP).unwrap().collect();
        assert_eq!(tuples.len(), 2322);
        let distinct: BTreeSet<String> = tuples.iter().map(|t| t.to_string()).collect();
        assert_eq!(distinct.len(), 2322);
        for t in &tuples {
            t.check(&ctx).unwrap();
            assert!(t.conductor() <= 90);
        }
        assert!(enumerate_bad_tuples(&ctx, 90, 2321).is_err());
        let first = &tuples[0];
        assert_eq!(first.to_string(), format!("{}:3", ctx.g0_indices()[0]));
    }

    #[test]
    fn epi_small() {
        let ctx = TupleContext::new(1).unwrap();
        let t = table(1000);
        assert_eq!(epi_count(&ctx, 3, &t).unwrap(), BigInt::zero());
        assert_eq!(epi_count(&ctx, 2, &t).unwrap(), BigInt::zero());
        for x in [21, 90, 300] {
            let direct = epi_count_direct(&ctx, x, DEFAULT_TUPLE_CAP).unwrap();
            assert_eq!(epi_count(&ctx, x, &t).unwrap(), BigInt::from(direct));
        }
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(subspaces_f3(1).len(), 2);
        assert_eq!(subspaces_f3(2).len(), 6);
        assert_eq!(subspaces_f3(3).len(), 28);
    }

    #[test]
    fn n_sums_extremes() {
        let ctx = TupleContext::new(1).unwrap();
        let t = table(100);
        let all: BTreeSet<u64> = ctx.tn().collect();
        assert_eq!(n2_sum(&ctx, &all, 90, &t).unwrap(), BigUint::from(54u32));
        assert_eq!(n2_sum(&ctx, &BTreeSet::new(), 90, &t).unwrap(), hom_count(1, 90, &t).unwrap());
        assert_eq!(n1_sum(&ctx, &all, 90, &t).unwrap(), BigInt::from(54));
        let bogus = BTreeSet::from([ctx.g0_indices()[0]]);
        assert!(n2_sum(&ctx, &bogus, 90, &t).is_err());
    }
}
