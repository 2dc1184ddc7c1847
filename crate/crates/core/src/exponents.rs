//! Naive logarithmic exponents over `Q`: `S`-sets, the orbit count of
//! `G − {id}` under conjugation and cyclotomic powering, the class-sum
//! formula for the same number, and the closed forms for `G_n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{cap_check, Error, Result};
use crate::families::build_gn;
use crate::fibered::{fibered_b_orbit, FiberedDatum};
use crate::group::{AbelianSpec, CocycleGroup, GroupElement};
use crate::numtheory::{binomial2, divisors, euler_phi, gcd, unit_generators, units};
use crate::orbit::UnionFind;
use crate::rational::ExactRational;

/// `|S_{g,α}| = |{h ∈ G : h g h⁻¹ = g^α}|`.
///
/// Scans the lifts `(0, a)` of `A`; central translates of `h` conjugate
/// identically, so each hit accounts for `|C|` elements.
pub fn s_set_size(group: &CocycleGroup, g: &GroupElement, alpha: u64) -> Result<u64> {
    group.check(g)?;
    let ord = group.element_order_raw(g);
    if gcd(alpha % ord, ord) != 1 && ord != 1 {
        return Err(Error::NotCoprime { alpha, modulus: ord });
    }
    let target = group.pow_raw(g, alpha % ord);
    let hits = group
        .base()
        .elements()
        .filter(|a| group.conjugate_raw(&group.lift(a.clone()), g) == target)
        .count() as u64;
    Ok(hits * group.center().order())
}

/// `−1 + |(G − {id}) / ∼|`, where `∼` is generated by conjugation and
/// `g ↦ g^α` for units `α`.
pub fn naive_b_orbit(group: &CocycleGroup, cap: u64) -> Result<i64> {
    cap_check("orbit enumeration", group.order() as u128, cap as u128)?;
    let n = group.order() as usize;
    let mut uf = UnionFind::new(n);
    let conjugators = group.base_lifts();
    let powers = unit_generators(group.exponent());
    for i in 1..n as u64 {
        let g = group.element_at(i);
        for h in &conjugators {
            let y = group.conjugate_raw(h, &g);
            uf.union(i as u32, group.index_of(&y) as u32);
        }
        for &u in &powers {
            let y = group.pow_raw(&g, u);
            uf.union(i as u32, group.index_of(&y) as u32);
        }
    }
    let id = group.index_of(&group.identity()) as u32;
    let classes = uf.count_classes((0..n as u32).filter(|&i| i != id));
    Ok(classes as i64 - 1)
}

/// Image of `a ↦ θ(a, b) − θ(b, a)` in `C`, as a membership table by index.
///
/// This is `c(h g h⁻¹) − c(g)` for `q(h) = a`, `q(g) = b`.
fn commutator_image(group: &CocycleGroup, b: &[u32]) -> (Vec<bool>, u64) {
    let center = group.center();
    let gens: Vec<Vec<u32>> = (0..group.base().rank())
        .map(|j| {
            let mut e = group.base().zero();
            e[j] = 1;
            let left = group.pairing().eval(center, &e, b);
            let right = group.pairing().eval(center, b, &e);
            center.sub(&left, &right)
        })
        .collect();
    let member = center.subgroup_closure(&gens);
    let size = member.iter().filter(|&&m| m).count() as u64;
    (member, size)
}

/// `−1 + Σ_{g ≠ id} φ(ord g)⁻¹ Σ_{α ∈ (Z/ord g)^*} |S_{g,α}| / |G|`, exactly.
///
/// `|S_{g,α}|` is evaluated from the image `I_b` of the commutator map for
/// `b = q(g)`: it is `|C|·|A|/|I_b|` when `q(g^α) = b` and
/// `c(g^α) − c(g) ∈ I_b`, and zero otherwise.
pub fn naive_b_formula(group: &CocycleGroup, cap: u64) -> Result<ExactRational> {
    cap_check("class-sum enumeration", group.order() as u128, cap as u128)?;
    let center = group.center();
    let na = group.base().order();
    let nc = center.order();
    // φ(ord g) ↦ Σ |S_{g,α}| over g with that totient
    let mut by_phi: BTreeMap<u64, u128> = BTreeMap::new();
    let mut unit_cache: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for b in group.base().elements() {
        let (image, image_size) = commutator_image(group, &b);
        let s_size = nc as u128 * (na / image_size) as u128;
        for c in center.elements() {
            let g = GroupElement::new(c, b.clone());
            if group.is_identity(&g) {
                continue;
            }
            let ord = group.element_order_raw(&g);
            let us = unit_cache.entry(ord).or_insert_with(|| units(ord));
            let mut total = 0u128;
            for &alpha in us.iter() {
                let ga = group.pow_bilinear(&g, alpha);
                if ga.a() != b.as_slice() {
                    continue;
                }
                let delta = center.sub(ga.c(), g.c());
                if image[center.index_of(&delta) as usize] {
                    total += s_size;
                }
            }
            *by_phi.entry(euler_phi(ord)).or_default() += total;
        }
    }
    let order = BigInt::from(group.order());
    let mut sum = ExactRational::from_integer(-1);
    for (phi, s) in by_phi {
        sum = sum + ExactRational::new(BigInt::from(s), order.clone() * BigInt::from(phi))?;
    }
    Ok(sum)
}

fn pow_big(base: u32, n: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), n)
}

/// `b(G_n, Q)` from the four-piece class count.
pub fn closed_form_b_gn(n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let (t3, t9) = (pow_big(3, n), pow_big(9, n));
    let one = BigInt::one();
    let q = |num: BigInt, den: u32| ExactRational::new(num, den).expect("nonzero denominator");
    let total = q(&t3 - &one, 2)
        + q(BigInt::from(2) * (&t9 - &t3), 6)
        + ExactRational::from_integer(t3.clone())
        + q(&t3 * (&t3 - &one), 2)
        + q(&t3 * (&t9 - &t3), 18)
        - ExactRational::one();
    Ok(total.to_integer().expect("the class count is an integer"))
}

/// `(9^n − 1)/3 + (27^n − 1)/6`.
pub fn alpha_closed_form(n: usize) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let one = BigInt::one();
    Ok(ExactRational::new(pow_big(9, n) - &one, 3)? + ExactRational::new(pow_big(27, n) - &one, 6)?)
}

/// Element counts by order over `T_n = {g ≠ id : π₀(q(g)) = 0}`.
///
/// Every element is visited; the order of `(c, a)` is read off the power
/// formula `(d c + C(d,2) θ(a,a), d a)` at the divisors `d` of `exp(A)·exp(C)`.
pub fn order_counts_tn(n: usize) -> Result<BTreeMap<u64, u64>> {
    let group = build_gn(n)?;
    let center = group.center();
    let base = group.base();
    let c_orders: Vec<u64> = center.cyclic_orders().iter().map(|&o| o as u64).collect();
    let ds = divisors(group.exponent_bound());
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut a = base.zero();
    let mut c = vec![0u32; center.rank()];
    let mut local = vec![0u64; ds.len()];
    loop {
        let ord_a = base.element_order(&a);
        let theta = group.pairing().eval(center, &a, &a);
        let candidates: Vec<(usize, u64, u64)> = ds
            .iter()
            .enumerate()
            .filter(|(_, &d)| d % ord_a == 0)
            .map(|(k, &d)| (k, d, binomial2(d)))
            .collect();
        local.iter_mut().for_each(|x| *x = 0);
        c.iter_mut().for_each(|x| *x = 0);
        loop {
            for &(k, d, bin) in &candidates {
                let vanishes = c
                    .iter()
                    .zip(&theta)
                    .zip(&c_orders)
                    .all(|((&ci, &ti), &m)| (d * ci as u64 + bin * ti as u64).is_multiple_of(m));
                if vanishes {
                    local[k] += 1;
                    break;
                }
            }
            if !odometer(&mut c, center.cyclic_orders()) {
                break;
            }
        }
        for (k, &cnt) in local.iter().enumerate() {
            if cnt > 0 {
                *counts.entry(ds[k]).or_default() += cnt;
            }
        }
        // advance a over coordinates 1..=n, keeping π₀ = 0
        if !odometer(&mut a[1..], &base.cyclic_orders()[1..]) {
            break;
        }
    }
    if let Some(x) = counts.get_mut(&1) {
        *x -= 1;
        if *x == 0 {
            counts.remove(&1);
        }
    }
    Ok(counts)
}

/// Last coordinate fastest; returns `false` after wrapping to zero.
fn odometer(v: &mut [u32], orders: &[u32]) -> bool {
    for (x, &o) in v.iter_mut().zip(orders).rev() {
        *x += 1;
        if *x < o {
            return true;
        }
        *x = 0;
    }
    false
}

/// `Σ_{g ∈ T_n} 1/φ(ord g)` by enumeration, asserted equal to the closed form.
pub fn alpha_gn(n: usize) -> Result<ExactRational> {
    let counts = order_counts_tn(n)?;
    let mut sum = ExactRational::zero();
    for (d, cnt) in counts {
        sum = sum + ExactRational::new(cnt, euler_phi(d))?;
    }
    let closed = alpha_closed_form(n)?;
    assert_eq!(sum, closed, "enumerated alpha differs from the closed form at n = {n}");
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportMode {
    /// Enumerate the group (n ≤ 3).
    BruteForce,
    /// Closed forms only.
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub n: usize,
    #[serde(with = "crate::rational::decimal")]
    pub naive_b: BigInt,
    pub alpha: ExactRational,
    #[serde(with = "crate::rational::decimal")]
    pub fibered_b: BigInt,
    pub is_counterexample: bool,
    /// `α − 1 − b(G_n, Q)`.
    pub margin: ExactRational,
    pub mode: ReportMode,
}

/// Largest `n` for which the brute-force report is offered.
pub const MAX_BRUTE_FORCE_N: usize = 3;

/// Naive exponent, `α`, fibered exponent and the verdict `α − 1 > b(G_n, Q)`.
///
/// In closed-form mode the fibered exponent is taken to be `α`.
pub fn counterexample_report(n: usize, mode: ReportMode) -> Result<ExponentReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let (naive_b, alpha, fibered_b) = match mode {
        ReportMode::BruteForce => {
            if n > MAX_BRUTE_FORCE_N {
                return Err(Error::CapExceeded {
                    what: "brute-force report n",
                    needed: n as u128,
                    cap: MAX_BRUTE_FORCE_N as u128,
                });
            }
            let group = build_gn(n)?;
            let orbit = naive_b_orbit(&group, u64::MAX)?;
            let formula = naive_b_formula(&group, u64::MAX)?;
            let closed = closed_form_b_gn(n)?;
            if ExactRational::from_integer(orbit) != formula || BigInt::from(orbit) != closed {
                return Err(Error::Domain(format!(
                    "naive exponent routes disagree at n = {n}: orbit {orbit}, formula {formula}, closed form {closed}"
                )));
            }
            let datum = FiberedDatum::theorem(&group, 1)?;
            let fibered = fibered_b_orbit(&group, &datum)?;
            (closed, alpha_gn(n)?, BigInt::from(fibered))
        }
        ReportMode::ClosedForm => {
            let alpha = alpha_closed_form(n)?;
            let fibered = alpha.to_integer().expect("alpha is an integer");
            (closed_form_b_gn(n)?, alpha, fibered)
        }
    };
    let margin = &(&alpha - &ExactRational::one()) - &ExactRational::from_integer(naive_b.clone());
    Ok(ExponentReport {
        n,
        is_counterexample: margin.is_positive(),
        naive_b,
        alpha,
        fibered_b,
        margin,
        mode,
    })
}

/// Number of elements whose base coordinate 0 vanishes.
pub fn count_with_pi0_zero(group: &CocycleGroup) -> u64 {
    let base: &AbelianSpec = group.base();
    let zero_first = base.elements().filter(|a| a.first() == Some(&0)).count() as u64;
    zero_first * group.center().order()
}

/// `Σ_{g ∈ T_n} 1` from [`order_counts_tn`].
pub fn tn_size(n: usize) -> Result<u64> {
    Ok(order_counts_tn(n)?.values().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_mixed_example, cyclic, pi0, pi_i};
    use crate::DEFAULT_ELEMENT_CAP;

    #[test]
    fn cyclic_groups() {
        assert_eq!(naive_b_orbit(&cyclic(3), DEFAULT_ELEMENT_CAP).unwrap(), 0);
        assert_eq!(naive_b_formula(&cyclic(3), DEFAULT_ELEMENT_CAP).unwrap(), ExactRational::zero());
        // Z/9: orbits {order 3}, {order 9}
        assert_eq!(naive_b_orbit(&cyclic(9), DEFAULT_ELEMENT_CAP).unwrap(), 1);
        assert_eq!(naive_b_formula(&cyclic(9), DEFAULT_ELEMENT_CAP).unwrap(), ExactRational::one());
        assert_eq!(naive_b_orbit(&cyclic(1), DEFAULT_ELEMENT_CAP).unwrap(), -1);
    }

    #[test]
    fn g1_and_g2_naive() {
        for (n, want) in [(1, 9), (2, 108)] {
            let g = build_gn(n).unwrap();
            assert_eq!(naive_b_orbit(&g, DEFAULT_ELEMENT_CAP).unwrap(), want);
            assert_eq!(naive_b_formula(&g, DEFAULT_ELEMENT_CAP).unwrap(), ExactRational::from(want));
        }
    }

    #[test]
    fn mixed_naive_routes_agree() {
        for n in 1..=2 {
            let g = build_mixed_example(n).unwrap();
            let orbit = naive_b_orbit(&g, DEFAULT_ELEMENT_CAP).unwrap();
            assert_eq!(naive_b_formula(&g, DEFAULT_ELEMENT_CAP).unwrap(), ExactRational::from(orbit));
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_b_gn(1).unwrap(), BigInt::from(9));
        assert_eq!(closed_form_b_gn(2).unwrap(), BigInt::from(108));
        assert_eq!(closed_form_b_gn(3).unwrap(), BigInt::from(1677));
        assert!(closed_form_b_gn(0).is_err());
        assert_eq!(alpha_closed_form(3).unwrap(), ExactRational::from(3523));
    }

    #[test]
    fn alpha_small() {
        assert_eq!(alpha_gn(1).unwrap(), ExactRational::from(7));
        assert_eq!(alpha_gn(2).unwrap(), ExactRational::from(148));
        assert_eq!(tn_size(1).unwrap(), 26);
        assert_eq!(tn_size(2).unwrap(), 728);
    }

    #[test]
    fn s_sets_in_g1() {
        let g = build_gn(1).unwrap();
        let central = g.central(vec![1]);
        assert_eq!(s_set_size(&g, &central, 1).unwrap(), 81);
        assert_eq!(s_set_size(&g, &central, 4).unwrap(), 81);
        assert_eq!(s_set_size(&g, &central, 2).unwrap(), 0);
        assert!(matches!(s_set_size(&g, &central, 3), Err(Error::NotCoprime { .. })));
        let x = g.lift(vec![1, 0]);
        assert_eq!(pi0(&x), 1);
        assert_eq!(s_set_size(&g, &x, 1).unwrap(), 27);
        let y = g.lift(vec![0, 1]);
        assert_eq!(pi_i(&y, 1), 1);
        assert_eq!(s_set_size(&g, &y, 1).unwrap(), 27);
        assert_eq!(s_set_size(&g, &y, 2).unwrap(), 0);
        assert_eq!(s_set_size(&g, &g.lift(vec![0, 3]), 1).unwrap(), 81);
        assert_eq!(s_set_size(&g, &g.identity(), 5).unwrap(), 81);
    }

    #[test]
    fn reports() {
        let r1 = counterexample_report(1, ReportMode::BruteForce).unwrap();
        assert!(!r1.is_counterexample);
        assert_eq!(r1.margin, ExactRational::from(-3));
        let r2 = counterexample_report(2, ReportMode::BruteForce).unwrap();
        assert!(r2.is_counterexample);
        assert_eq!(r2.fibered_b, BigInt::from(148));
        let r3 = counterexample_report(3, ReportMode::ClosedForm).unwrap();
        assert_eq!(r3.margin, ExactRational::from(3522 - 1677));
        assert!(counterexample_report(4, ReportMode::BruteForce).is_err());
        assert!(counterexample_report(0, ReportMode::ClosedForm).is_err());
        let json = serde_json::to_string(&r2).unwrap();
        assert!(json.contains("\"naive_b\":\"108\""));
        assert!(json.contains("\"alpha\":\"148/1\""));
        let back: ExponentReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r2);
    }
}
