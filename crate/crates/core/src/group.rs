//! Finite groups presented as central extensions `C ×_θ A` of abelian groups
//! by a bilinear 2-cocycle `θ: A × A → C`.
//!
//! Elements are pairs `(c, a)` of residue vectors with
//! `(c₁, a₁)·(c₂, a₂) = (c₁ + c₂ + θ(a₁, a₂), a₁ + a₂)`.
//! The subgroup `{(c, 0)}` is central, and the quotient map `q` is the
//! projection onto `a`.

use std::ops::Range;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{cap_check, Error, Result};
use crate::numtheory::{divisors, lcm, prime_power_base};

/// Finite abelian group `⊕ Z/oᵢ`, elements stored as residue vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianSpec {
    cyclic_orders: Vec<u32>,
}

impl AbelianSpec {
    pub fn new(cyclic_orders: Vec<u32>) -> Result<Self> {
        if cyclic_orders.contains(&0) {
            return Err(Error::InvalidParameter("cyclic orders must be positive".into()));
        }
        let spec = Self { cyclic_orders };
        if spec.order_u128() > u64::MAX as u128 {
            return Err(Error::InvalidParameter("group order overflows u64".into()));
        }
        Ok(spec)
    }

    pub fn trivial() -> Self {
        Self { cyclic_orders: Vec::new() }
    }

    pub fn cyclic_orders(&self) -> &[u32] {
        &self.cyclic_orders
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    fn order_u128(&self) -> u128 {
        self.cyclic_orders.iter().map(|&o| o as u128).product()
    }

    pub fn order(&self) -> u64 {
        self.order_u128() as u64
    }

    pub fn exponent(&self) -> u64 {
        self.cyclic_orders.iter().fold(1, |acc, &o| lcm(acc, o as u64))
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.rank()]
    }

    pub fn is_valid(&self, v: &[u32]) -> bool {
        v.len() == self.rank() && v.iter().zip(&self.cyclic_orders).all(|(&x, &o)| x < o)
    }

    pub fn is_zero(v: &[u32]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter()
            .zip(y)
            .zip(&self.cyclic_orders)
            .map(|((&a, &b), &o)| ((a as u64 + b as u64) % o as u64) as u32)
            .collect()
    }

    pub fn neg(&self, x: &[u32]) -> Vec<u32> {
        x.iter()
            .zip(&self.cyclic_orders)
            .map(|(&a, &o)| if a == 0 { 0 } else { o - a })
            .collect()
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &[u32], k: u64) -> Vec<u32> {
        x.iter()
            .zip(&self.cyclic_orders)
            .map(|(&a, &o)| ((a as u128 * (k % o as u64) as u128) % o as u128) as u32)
            .collect()
    }

    pub fn element_order(&self, x: &[u32]) -> u64 {
        x.iter().zip(&self.cyclic_orders).fold(1, |acc, (&a, &o)| {
            let o = o as u64;
            lcm(acc, o / crate::numtheory::gcd(a as u64, o))
        })
    }

    /// Mixed-radix index, first coordinate most significant.
    pub fn index_of(&self, v: &[u32]) -> u64 {
        v.iter()
            .zip(&self.cyclic_orders)
            .fold(0u64, |acc, (&x, &o)| acc * o as u64 + x as u64)
    }

    pub fn element_at(&self, mut index: u64) -> Vec<u32> {
        let mut v = vec![0; self.rank()];
        for (slot, &o) in v.iter_mut().zip(&self.cyclic_orders).rev() {
            *slot = (index % o as u64) as u32;
            index /= o as u64;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// Membership table (by index) of the subgroup generated by `gens`.
    pub fn subgroup_closure(&self, gens: &[Vec<u32>]) -> Vec<bool> {
        let mut member = vec![false; self.order() as usize];
        let zero = self.zero();
        member[self.index_of(&zero) as usize] = true;
        let mut queue = vec![zero];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = self.add(&x, g);
                let iy = self.index_of(&y) as usize;
                if !member[iy] {
                    member[iy] = true;
                    queue.push(y);
                }
            }
        }
        member
    }

    pub fn generates(&self, gens: &[Vec<u32>]) -> bool {
        self.subgroup_closure(gens).iter().all(|&m| m)
    }
}

/// One bilinear term `(L·a mod m)(R·b mod m)` landing in centre coordinate `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingSummand {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub target: usize,
    pub modulus: u32,
}

impl PairingSummand {
    fn functional(coeffs: &[u32], v: &[u32], m: u32) -> u64 {
        let m = m as u64;
        coeffs
            .iter()
            .zip(v)
            .fold(0u64, |acc, (&c, &x)| (acc + c as u64 * x as u64) % m)
    }
}

/// `θ(a, b)ᵢ = Σ_{summands with target i} (L·a mod m)(R·b mod m) mod m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CocyclePairing {
    summands: Vec<PairingSummand>,
}

impl CocyclePairing {
    pub fn new(summands: Vec<PairingSummand>) -> Self {
        Self { summands }
    }

    pub fn summands(&self) -> &[PairingSummand] {
        &self.summands
    }

    fn validate(&self, center: &AbelianSpec, base: &AbelianSpec) -> Result<()> {
        for (k, s) in self.summands.iter().enumerate() {
            if s.left.len() != base.rank() || s.right.len() != base.rank() {
                return Err(Error::ShapeMismatch(format!(
                    "pairing summand {k}: functionals must have length {}",
                    base.rank()
                )));
            }
            let Some(&target_order) = center.cyclic_orders().get(s.target) else {
                return Err(Error::ShapeMismatch(format!(
                    "pairing summand {k}: target {} out of range",
                    s.target
                )));
            };
            if s.modulus != target_order {
                return Err(Error::InvalidParameter(format!(
                    "pairing summand {k}: modulus {} differs from centre order {target_order}",
                    s.modulus
                )));
            }
            // Each functional must be well defined on Z/o_j.
            for (coeffs, side) in [(&s.left, "left"), (&s.right, "right")] {
                for (j, (&c, &o)) in coeffs.iter().zip(base.cyclic_orders()).enumerate() {
                    if !(c as u64 * o as u64).is_multiple_of(s.modulus as u64) {
                        return Err(Error::InvalidParameter(format!(
                            "pairing summand {k}: {side} coefficient {c} on Z/{o} (coordinate {j}) is not well defined mod {}",
                            s.modulus
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Adds `θ(a, b)` into `out` (a centre vector).
    pub fn accumulate(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        for s in &self.summands {
            let l = PairingSummand::functional(&s.left, a, s.modulus);
            if l == 0 {
                continue;
            }
            let r = PairingSummand::functional(&s.right, b, s.modulus);
            let m = s.modulus as u64;
            out[s.target] = ((out[s.target] as u64 + l * r) % m) as u32;
        }
    }

    pub fn eval(&self, center: &AbelianSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = center.zero();
        self.accumulate(a, b, &mut out);
        out
    }
}

/// An element `(c, a)`; derived ordering is lexicographic on `(c, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    c: Vec<u32>,
    a: Vec<u32>,
}

impl GroupElement {
    pub fn new(c: Vec<u32>, a: Vec<u32>) -> Self {
        Self { c, a }
    }

    /// Centre coordinates. `c()[i]` is the (non-homomorphic) projection `ρᵢ`.
    pub fn c(&self) -> &[u32] {
        &self.c
    }

    /// Image under the quotient map `q`.
    pub fn a(&self) -> &[u32] {
        &self.a
    }
}

/// The `p`-primary component of a group stored as a Sylow product.
#[derive(Clone, Debug)]
pub struct SylowPart {
    pub prime: u64,
    pub group: CocycleGroup,
    pub center_range: Range<usize>,
    pub base_range: Range<usize>,
}

#[derive(Clone, Debug)]
pub struct CocycleGroup {
    center: AbelianSpec,
    base: AbelianSpec,
    pairing: CocyclePairing,
    sylow: Vec<SylowPart>,
    exponent: OnceLock<u64>,
}

impl CocycleGroup {
    pub fn new(center: AbelianSpec, base: AbelianSpec, pairing: CocyclePairing) -> Result<Self> {
        pairing.validate(&center, &base)?;
        if center.order_u128() * base.order_u128() > u64::MAX as u128 {
            return Err(Error::InvalidParameter("group order overflows u64".into()));
        }
        Ok(Self {
            center,
            base,
            pairing,
            sylow: Vec::new(),
            exponent: OnceLock::new(),
        })
    }

    /// Abelian group `A` with trivial cocycle and trivial centre.
    pub fn abelian(base: AbelianSpec) -> Self {
        Self::new(AbelianSpec::trivial(), base, CocyclePairing::default())
            .expect("empty pairing is always valid")
    }

    /// Direct product of groups of pairwise distinct prime-power order.
    ///
    /// The result is flattened into a single cocycle group (coordinates of the
    /// components concatenated in increasing order of the prime) and remembers
    /// the component ranges.
    pub fn sylow_product(mut components: Vec<CocycleGroup>) -> Result<Self> {
        let mut primes = Vec::new();
        for g in &components {
            let p = prime_power_base(g.order()).ok_or_else(|| {
                Error::Sylow(format!("component of order {} is not a p-group", g.order()))
            })?;
            primes.push(p);
        }
        let mut order: Vec<usize> = (0..components.len()).collect();
        order.sort_by_key(|&i| primes[i]);
        if order.windows(2).any(|w| primes[w[0]] == primes[w[1]]) {
            return Err(Error::Sylow("components must have distinct primes".into()));
        }
        let mut slots: Vec<Option<CocycleGroup>> = components.drain(..).map(Some).collect();
        let sorted: Vec<(u64, CocycleGroup)> = order
            .iter()
            .map(|&i| (primes[i], slots[i].take().unwrap()))
            .collect();

        let total_base: usize = sorted.iter().map(|(_, g)| g.base.rank()).sum();
        let mut center_orders = Vec::new();
        let mut base_orders = Vec::new();
        let mut summands = Vec::new();
        let mut parts = Vec::new();
        for (p, g) in sorted {
            let c0 = center_orders.len();
            let b0 = base_orders.len();
            center_orders.extend_from_slice(g.center.cyclic_orders());
            base_orders.extend_from_slice(g.base.cyclic_orders());
            for s in g.pairing.summands() {
                let mut left = vec![0; total_base];
                let mut right = vec![0; total_base];
                left[b0..b0 + s.left.len()].copy_from_slice(&s.left);
                right[b0..b0 + s.right.len()].copy_from_slice(&s.right);
                summands.push(PairingSummand {
                    left,
                    right,
                    target: c0 + s.target,
                    modulus: s.modulus,
                });
            }
            let mut component = g;
            component.sylow.clear();
            parts.push(SylowPart {
                prime: p,
                center_range: c0..center_orders.len(),
                base_range: b0..base_orders.len(),
                group: component,
            });
        }
        let mut group = Self::new(
            AbelianSpec::new(center_orders)?,
            AbelianSpec::new(base_orders)?,
            CocyclePairing::new(summands),
        )?;
        group.sylow = parts;
        Ok(group)
    }

    pub fn center(&self) -> &AbelianSpec {
        &self.center
    }

    pub fn base(&self) -> &AbelianSpec {
        &self.base
    }

    pub fn pairing(&self) -> &CocyclePairing {
        &self.pairing
    }

    pub fn order(&self) -> u64 {
        self.center.order() * self.base.order()
    }

    pub fn is_sylow_product(&self) -> bool {
        !self.sylow.is_empty()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(self.center.zero(), self.base.zero())
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        AbelianSpec::is_zero(&g.c) && AbelianSpec::is_zero(&g.a)
    }

    pub fn is_valid(&self, g: &GroupElement) -> bool {
        self.center.is_valid(&g.c) && self.base.is_valid(&g.a)
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.is_valid(g) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "element {:?} does not belong to a group with centre {:?} and base {:?}",
                g, self.center.cyclic_orders, self.base.cyclic_orders
            )))
        }
    }

    pub(crate) fn mul_raw(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut c = self.center.add(&x.c, &y.c);
        self.pairing.accumulate(&x.a, &y.a, &mut c);
        GroupElement::new(c, self.base.add(&x.a, &y.a))
    }

    pub(crate) fn inverse_raw(&self, x: &GroupElement) -> GroupElement {
        let neg_a = self.base.neg(&x.a);
        let mut t = self.center.neg(&x.c);
        let theta = self.pairing.eval(&self.center, &x.a, &neg_a);
        t = self.center.sub(&t, &theta);
        GroupElement::new(t, neg_a)
    }

    pub(crate) fn pow_raw(&self, x: &GroupElement, mut k: u64) -> GroupElement {
        let mut result = self.identity();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul_raw(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        result
    }

    /// `h g h⁻¹`.
    pub(crate) fn conjugate_raw(&self, h: &GroupElement, g: &GroupElement) -> GroupElement {
        let hg = self.mul_raw(h, g);
        self.mul_raw(&hg, &self.inverse_raw(h))
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.inverse_raw(x))
    }

    pub fn pow(&self, x: &GroupElement, k: u64) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.pow_raw(x, k))
    }

    /// `h g h⁻¹`.
    pub fn conjugate(&self, h: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        self.check(h)?;
        self.check(g)?;
        Ok(self.conjugate_raw(h, g))
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let xy = self.mul(x, y)?;
        let yx = self.mul_raw(y, x);
        Ok(self.mul_raw(&xy, &self.inverse_raw(&yx)))
    }

    /// `gᵏ` from the closed form `(k c + C(k,2) θ(a,a), k a)`, valid because `θ` is bilinear.
    pub(crate) fn pow_bilinear(&self, g: &GroupElement, k: u64) -> GroupElement {
        let theta_aa = self.pairing.eval(&self.center, &g.a, &g.a);
        let binom = (k as u128 * k.saturating_sub(1) as u128 / 2) as u64;
        let c = self
            .center
            .add(&self.center.scale(&g.c, k), &self.center.scale(&theta_aa, binom));
        GroupElement::new(c, self.base.scale(&g.a, k))
    }

    /// `exp(A)·exp(C)`, a multiple of the exponent of the group.
    pub fn exponent_bound(&self) -> u64 {
        self.base.exponent() * self.center.exponent()
    }

    /// Least `m` with `gᵐ = 1` for every `g`.
    ///
    /// Computed as the least divisor `d` of `exp(A)·exp(C)` that is a multiple
    /// of `lcm(exp A, exp C)` with `(0, a)ᵈ = 1` for every `a`; central
    /// translates have the same `d`-th power.
    pub fn exponent(&self) -> u64 {
        *self.exponent.get_or_init(|| {
            let floor = lcm(self.base.exponent(), self.center.exponent());
            for d in divisors(self.exponent_bound()) {
                if d % floor != 0 {
                    continue;
                }
                let ok = self.base.elements().all(|a| {
                    let g = GroupElement::new(self.center.zero(), a);
                    self.is_identity(&self.pow_raw(&g, d))
                });
                if ok {
                    return d;
                }
            }
            self.exponent_bound()
        })
    }

    pub(crate) fn element_order_raw(&self, g: &GroupElement) -> u64 {
        let bound = self.exponent_bound();
        divisors(bound)
            .into_iter()
            .find(|&d| self.is_identity(&self.pow_raw(g, d)))
            .unwrap_or(bound)
    }

    /// Least `m ≥ 1` with `gᵐ = 1`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(self.element_order_raw(g))
    }

    /// Index in the lexicographic order on `(c, a)`.
    pub fn index_of(&self, g: &GroupElement) -> u64 {
        self.center.index_of(&g.c) * self.base.order() + self.base.index_of(&g.a)
    }

    pub fn element_at(&self, index: u64) -> GroupElement {
        let na = self.base.order();
        GroupElement::new(self.center.element_at(index / na), self.base.element_at(index % na))
    }

    /// Every element once, lexicographic on `(c, a)`.
    pub fn elements(&self, cap: u64) -> Result<impl Iterator<Item = GroupElement> + '_> {
        cap_check("element enumeration", self.order() as u128, cap as u128)?;
        Ok((0..self.order()).map(move |i| self.element_at(i)))
    }

    pub fn central(&self, c: Vec<u32>) -> GroupElement {
        GroupElement::new(c, self.base.zero())
    }

    /// The lift `(0, a)` of an element of `A`.
    pub fn lift(&self, a: Vec<u32>) -> GroupElement {
        GroupElement::new(self.center.zero(), a)
    }

    /// Lifts `(0, eⱼ)` of the standard basis of `A`, skipping trivial factors.
    pub fn base_lifts(&self) -> Vec<GroupElement> {
        (0..self.base.rank())
            .filter(|&j| self.base.cyclic_orders()[j] > 1)
            .map(|j| {
                let mut a = self.base.zero();
                a[j] = 1;
                self.lift(a)
            })
            .collect()
    }

    pub fn center_basis(&self) -> Vec<GroupElement> {
        (0..self.center.rank())
            .filter(|&i| self.center.cyclic_orders()[i] > 1)
            .map(|i| {
                let mut c = self.center.zero();
                c[i] = 1;
                self.central(c)
            })
            .collect()
    }

    /// Centre basis together with base lifts; these generate the group.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens = self.center_basis();
        gens.extend(self.base_lifts());
        gens
    }

    /// Whether `{q(s)}` generates `A`.
    ///
    /// For the nilpotent groups handled here this is equivalent to `S`
    /// generating the group once `A` is the abelianization.
    pub fn generates_abelianization(&self, set: &[GroupElement]) -> bool {
        let images: Vec<Vec<u32>> = set.iter().map(|g| g.a.clone()).collect();
        self.base.generates(&images)
    }

    /// Closure under right multiplication; `gens` must be elements of `self`.
    pub fn subgroup_generated(&self, gens: &[GroupElement], cap: u64) -> Result<Vec<GroupElement>> {
        cap_check("subgroup closure", self.order() as u128, cap as u128)?;
        let mut member = vec![false; self.order() as usize];
        let id = self.identity();
        member[self.index_of(&id) as usize] = true;
        let mut list = vec![id];
        let mut i = 0;
        while i < list.len() {
            for s in gens {
                let y = self.mul_raw(&list[i], s);
                let iy = self.index_of(&y) as usize;
                if !member[iy] {
                    member[iy] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort();
        Ok(list)
    }

    /// `[G, G]` by closing the set of all commutators `x y x⁻¹ y⁻¹`.
    pub fn commutator_subgroup(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let n = self.order() as u128;
        cap_check("commutator pairs", n * n, cap as u128)?;
        let mut seen = vec![false; self.order() as usize];
        let mut commutators = Vec::new();
        let all: Vec<GroupElement> = self.elements(cap)?.collect();
        for x in &all {
            for y in &all {
                let k = self.commutator(x, y)?;
                let ik = self.index_of(&k) as usize;
                if !seen[ik] {
                    seen[ik] = true;
                    commutators.push(k);
                }
            }
        }
        self.subgroup_generated(&commutators, cap)
    }

    /// Invariant factors `d₁ | d₂ | …` of `G / [G, G]`.
    pub fn abelianization_invariants(&self, cap: u64) -> Result<Vec<u64>> {
        let derived = self.commutator_subgroup(cap)?;
        let mut in_derived = vec![false; self.order() as usize];
        for k in &derived {
            in_derived[self.index_of(k) as usize] = true;
        }
        let index = self.order() / derived.len() as u64;
        let mut elementary: Vec<(u64, Vec<u64>)> = Vec::new();
        for (p, e) in crate::numtheory::factorize(index) {
            // N_k = #{x : x^{p^k} ∈ [G,G]} / |[G,G]| = Π p^{min(eᵢ, k)}.
            let mut counts_at_least = Vec::new();
            let mut prev = 1u64;
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                let hits = (0..self.order())
                    .filter(|&i| {
                        let x = self.element_at(i);
                        in_derived[self.index_of(&self.pow_raw(&x, pk)) as usize]
                    })
                    .count() as u64;
                let nk = hits / derived.len() as u64;
                let mut ratio = nk / prev;
                let mut r = 0;
                while ratio > 1 {
                    ratio /= p;
                    r += 1;
                }
                counts_at_least.push(r);
                prev = nk;
                if r == 0 {
                    break;
                }
            }
            // counts_at_least[k-1] = #{i : eᵢ ≥ k}
            let m = counts_at_least.first().copied().unwrap_or(0);
            let mut exps = Vec::new();
            for i in 0..m {
                let ei = counts_at_least.iter().filter(|&&c| c > i).count() as u32;
                exps.push(p.pow(ei));
            }
            elementary.push((p, exps));
        }
        let width = elementary.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (_, exps) in &elementary {
            for (slot, &q) in factors.iter_mut().zip(exps.iter()) {
                *slot *= q;
            }
        }
        factors.sort_unstable();
        Ok(factors)
    }

    /// The Sylow decomposition: stored components, or the whole group when
    /// its order is a prime power.
    pub fn sylow_parts(&self) -> Result<Vec<SylowPart>> {
        if !self.sylow.is_empty() {
            return Ok(self.sylow.clone());
        }
        if self.order() == 1 {
            return Ok(Vec::new());
        }
        match prime_power_base(self.order()) {
            Some(p) => {
                let mut whole = self.clone();
                whole.sylow.clear();
                Ok(vec![SylowPart {
                    prime: p,
                    center_range: 0..self.center.rank(),
                    base_range: 0..self.base.rank(),
                    group: whole,
                }])
            }
            None => Err(Error::Sylow(format!(
                "group of order {} was not built as a Sylow product",
                self.order()
            ))),
        }
    }

    pub fn to_descriptor(&self) -> GroupDescriptor {
        if self.sylow.is_empty() {
            GroupDescriptor {
                center_orders: self.center.cyclic_orders().to_vec(),
                base_orders: self.base.cyclic_orders().to_vec(),
                pairing: self.pairing.summands().to_vec(),
                sylow_components: Vec::new(),
            }
        } else {
            GroupDescriptor {
                sylow_components: self.sylow.iter().map(|p| p.group.to_descriptor()).collect(),
                ..GroupDescriptor::default()
            }
        }
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Result<Self> {
        if !d.sylow_components.is_empty() {
            if !d.center_orders.is_empty() || !d.base_orders.is_empty() || !d.pairing.is_empty() {
                return Err(Error::Descriptor(
                    "a Sylow-product descriptor carries only `sylow_components`".into(),
                ));
            }
            let parts = d
                .sylow_components
                .iter()
                .map(Self::from_descriptor)
                .collect::<Result<Vec<_>>>()?;
            return Self::sylow_product(parts);
        }
        Self::new(
            AbelianSpec::new(d.center_orders.clone())?,
            AbelianSpec::new(d.base_orders.clone())?,
            CocyclePairing::new(d.pairing.clone()),
        )
    }
}

/// Plain structured description of a cocycle group, loaded by the CLI.
///
/// ```json
/// {"center_orders": [3], "base_orders": [3, 9],
///  "pairing": [{"left": [1, 0], "right": [0, 1], "target": 0, "modulus": 3}]}
/// ```
///
/// A Sylow product lists only `sylow_components`, each itself a descriptor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    #[serde(default)]
    pub center_orders: Vec<u32>,
    #[serde(default)]
    pub base_orders: Vec<u32>,
    #[serde(default)]
    pub pairing: Vec<PairingSummand>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sylow_components: Vec<GroupDescriptor>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_gn, build_mixed_example, cyclic};
    use crate::DEFAULT_ELEMENT_CAP;

    fn el(c: &[u32], a: &[u32]) -> GroupElement {
        GroupElement::new(c.to_vec(), a.to_vec())
    }

    #[test]
    fn g1_products_match_hand_evaluation() {
        let g = build_gn(1).unwrap();
        // θ₁((1,0),(0,1)) = π₀(1,0)·π₁(0,1) = 1
        assert_eq!(g.mul(&el(&[0], &[1, 0]), &el(&[0], &[0, 1])).unwrap(), el(&[1], &[1, 1]));
        // θ₁((1,0),(2,0)) = 1·π₁(2,0) = 0
        assert_eq!(g.mul(&el(&[0], &[1, 0]), &el(&[0], &[2, 0])).unwrap(), g.identity());
        assert_eq!(g.inverse(&el(&[0], &[1, 0])).unwrap(), el(&[0], &[2, 0]));
        assert_eq!(g.inverse(&g.identity()).unwrap(), g.identity());
        // reversed order picks up θ((0,1),(1,0)) = 0
        assert_eq!(g.mul(&el(&[0], &[0, 1]), &el(&[0], &[1, 0])).unwrap(), el(&[0], &[1, 1]));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g = build_gn(1).unwrap();
        assert!(matches!(
            g.mul(&el(&[0, 0], &[1, 0]), &g.identity()),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(g.inverse(&el(&[0], &[3, 0])).is_err());
        assert!(g.element_order(&el(&[0], &[0])).is_err());
    }

    #[test]
    fn orders_in_g1() {
        let g = build_gn(1).unwrap();
        assert_eq!(g.element_order(&g.identity()).unwrap(), 1);
        assert_eq!(g.element_order(&el(&[1], &[0, 0])).unwrap(), 3);
        assert_eq!(g.element_order(&el(&[2], &[1, 3])).unwrap(), 3);
        assert_eq!(g.element_order(&el(&[0], &[1, 1])).unwrap(), 9);
        assert_eq!(g.exponent(), 9);
    }

    #[test]
    fn generation_of_abelianization() {
        let g = build_gn(1).unwrap();
        assert!(g.generates_abelianization(&[el(&[0], &[1, 0]), el(&[0], &[0, 1])]));
        assert!(!g.generates_abelianization(&[el(&[0], &[0, 3])]));
        for x in g.elements(DEFAULT_ELEMENT_CAP).unwrap() {
            assert!(!g.generates_abelianization(&[x]));
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let g = build_gn(1).unwrap();
        let all: Vec<_> = g.elements(DEFAULT_ELEMENT_CAP).unwrap().collect();
        assert_eq!(all.len(), 81);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, x) in all.iter().enumerate() {
            assert_eq!(g.index_of(x), i as u64);
        }
        assert!(matches!(g.elements(80), Err(Error::CapExceeded { .. })));
        let g2 = build_gn(2).unwrap();
        assert_eq!(g2.elements(DEFAULT_ELEMENT_CAP).unwrap().count(), 2187);
    }

    #[test]
    fn abelianization_of_g1_and_g2() {
        let g = build_gn(1).unwrap();
        assert_eq!(g.abelianization_invariants(u64::MAX).unwrap(), vec![3, 9]);
        let derived = g.commutator_subgroup(u64::MAX).unwrap();
        let centre: Vec<_> = g.center().elements().map(|c| g.central(c)).collect();
        assert_eq!(derived, centre);

        let g2 = build_gn(2).unwrap();
        let derived = g2.commutator_subgroup(u64::MAX).unwrap();
        assert_eq!(derived.len(), 9);
        assert!(derived.iter().all(|k| AbelianSpec::is_zero(k.a())));
        assert_eq!(g2.abelianization_invariants(u64::MAX).unwrap(), vec![3, 9, 9]);
    }

    #[test]
    fn abelian_invariants_of_mixed() {
        let g = cyclic(12);
        assert_eq!(g.abelianization_invariants(u64::MAX).unwrap(), vec![12]);
        let m = build_mixed_example(1).unwrap();
        // A = (Z/2)^2 × Z/3
        assert_eq!(m.abelianization_invariants(u64::MAX).unwrap(), vec![2, 6]);
    }

    #[test]
    fn bilinear_power_formula_agrees_with_repeated_products() {
        for g in [build_gn(1).unwrap(), build_mixed_example(1).unwrap()] {
            for x in g.elements(DEFAULT_ELEMENT_CAP).unwrap() {
                for k in 0..20 {
                    assert_eq!(g.pow_bilinear(&x, k), g.pow_raw(&x, k));
                }
            }
        }
    }

    #[test]
    fn sylow_product_layout() {
        let m = build_mixed_example(2).unwrap();
        assert_eq!(m.order(), 288);
        let parts = m.sylow_parts().unwrap();
        assert_eq!(parts.iter().map(|p| p.prime).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(parts[0].group.order(), 32);
        assert_eq!(parts[1].group.order(), 9);
        assert!(parts[1].group.pairing().summands().is_empty());
        assert_eq!(parts[1].base_range, 3..5);
        assert_eq!(m.exponent(), 12);
        assert!(cyclic(6).sylow_parts().is_err());
        assert_eq!(build_gn(1).unwrap().sylow_parts().unwrap().len(), 1);
    }

    #[test]
    fn descriptor_round_trip() {
        for g in [build_gn(2).unwrap(), build_mixed_example(2).unwrap()] {
            let d = g.to_descriptor();
            let json = serde_json::to_string(&d).unwrap();
            let back: GroupDescriptor = serde_json::from_str(&json).unwrap();
            let h = CocycleGroup::from_descriptor(&back).unwrap();
            assert_eq!(h.to_descriptor(), d);
            assert_eq!(h.order(), g.order());
            assert_eq!(h.center(), g.center());
            assert_eq!(h.base(), g.base());
            assert_eq!(h.pairing(), g.pairing());
        }
    }

    #[test]
    fn descriptor_validation() {
        let bad = GroupDescriptor {
            center_orders: vec![3],
            base_orders: vec![3, 9],
            pairing: vec![PairingSummand { left: vec![1, 0], right: vec![0, 1], target: 0, modulus: 9 }],
            sylow_components: vec![],
        };
        assert!(CocycleGroup::from_descriptor(&bad).is_err());
        // coefficient 1 on Z/2 is not well defined mod 3
        let bad = GroupDescriptor {
            center_orders: vec![3],
            base_orders: vec![3, 2],
            pairing: vec![PairingSummand { left: vec![1, 0], right: vec![0, 1], target: 0, modulus: 3 }],
            sylow_components: vec![],
        };
        assert!(CocycleGroup::from_descriptor(&bad).is_err());
        let json = r#"{"center_orders":[3],"base_orders":[3,9],"pairing":[{"left":[1,0],"right":[0,1],"target":0,"modulus":3}]}"#;
        let d: GroupDescriptor = serde_json::from_str(json).unwrap();
        assert_eq!(CocycleGroup::from_descriptor(&d).unwrap().order(), 81);
        assert!(serde_json::from_str::<GroupDescriptor>(r#"{"centre":[3]}"#).is_err());
    }
}
