//! Log-gamma, truncated Euler products for the leading constants, the
//! main-term predictor, and the local factors of the mass heuristic.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::f_spec_for_gn;
use crate::error::{Error, Result};
use crate::exponents::alpha_closed_form;
use crate::families::build_gn;
use crate::fibered::{fibered_b_orbit, FiberedDatum, TwistedSSums};
use crate::group::{AbelianSpec, CocycleGroup, GroupElement};
use crate::numtheory::{crt_pair, euler_phi, gcd, prime_power_part, units};
use crate::rational::ExactRational;
use crate::sieve::SieveTable;
use crate::DEFAULT_ELEMENT_CAP;

/// Smallest truncation bound accepted for the Euler products.
pub const MIN_PRIME_BOUND: u64 = 100;

/// Multiplier in the tail heuristic.
const TAIL_C: f64 = 2.0;

/// `ln Γ(x)` for `x ≥ 1`: shift to `x ≥ 20`, Stirling series, undo the shift.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::Domain(format!("log_gamma needs a finite x ≥ 1, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 20.0 {
        shift += y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k} / (2k(2k−1) y^{2k−1}), k = 1..7
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let mut series = 0.0;
    for &c in COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    let main = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln();
    Ok(main + series - shift)
}

/// A truncated product with its heuristic tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerProductResult {
    pub value: f64,
    pub ln_value: f64,
    pub truncation_bound: u64,
    pub tail_estimate: f64,
    /// Modulus of the residue classes below.
    pub class_modulus: u64,
    pub per_class_prime_counts: BTreeMap<u64, u64>,
    pub status: ProductStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProductStatus {
    Ok,
    UnsupportedEvenOrder,
}

/// Neumaier-compensated running sum; order of additions is the prime order.
#[derive(Default)]
struct LogSum {
    sum: f64,
    comp: f64,
}

impl LogSum {
    fn add(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite log-factor {x}")));
        }
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        Ok(())
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `C·(Σ_c |v_c|·|π_c(P) − π*(P)/φ(q)| / P + b / (P ln P))`, where `π*` counts
/// primes coprime to `q` and `v_c` is the per-prime excess in class `c`.
fn tail_estimate(
    table: &SieveTable,
    bound: u64,
    q: u64,
    class_values: &BTreeMap<u64, f64>,
    b: f64,
) -> (f64, BTreeMap<u64, u64>) {
    let mut counts: BTreeMap<u64, u64> = units(q).into_iter().map(|c| (c, 0)).collect();
    let end = table.primes().partition_point(|&p| p <= bound);
    for &p in &table.primes()[..end] {
        if let Some(c) = counts.get_mut(&(p % q)) {
            *c += 1;
        }
    }
    let coprime: u64 = counts.values().sum();
    let expected = coprime as f64 / euler_phi(q) as f64;
    let p = bound as f64;
    let discrepancy: f64 = counts
        .iter()
        .map(|(c, &n)| class_values.get(c).copied().unwrap_or(0.0).abs() * (n as f64 - expected).abs())
        .sum();
    (TAIL_C * (discrepancy / p + b / (p * p.ln())), counts)
}

fn check_bound(table: &SieveTable, bound: u64) -> Result<()> {
    if bound < MIN_PRIME_BOUND {
        return Err(Error::InvalidParameter(format!(
            "prime bound must be at least {MIN_PRIME_BOUND}, got {bound}"
        )));
    }
    table.ensure_covers(bound)
}

/// `Π_{p ≤ P} (1 + f(p)/p)(1 − 1/p)^α` for the function `f` of `G_n`.
pub fn c0(n: usize, bound: u64, table: &SieveTable) -> Result<EulerProductResult> {
    check_bound(table, bound)?;
    let spec = f_spec_for_gn(n)?;
    let alpha = alpha_closed_form(n)?.to_f64();
    let fvals: BTreeMap<u64, f64> = spec
        .values()
        .iter()
        .map(|(&r, v)| (r, v.to_string().parse::<f64>().expect("decimal")))
        .collect();
    let mut acc = LogSum::default();
    let end = table.primes().partition_point(|&p| p <= bound);
    for &p in &table.primes()[..end] {
        let pf = p as f64;
        let f = fvals.get(&(p % spec.modulus())).copied().unwrap_or(0.0);
        acc.add((f / pf).ln_1p() + alpha * (-1.0 / pf).ln_1p())?;
    }
    let (tail, counts) = tail_estimate(table, bound, spec.modulus(), &fvals, alpha);
    let ln_value = acc.value();
    Ok(EulerProductResult {
        value: ln_value.exp(),
        ln_value,
        truncation_bound: bound,
        tail_estimate: tail,
        class_modulus: spec.modulus(),
        per_class_prime_counts: counts,
        status: ProductStatus::Ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub value: f64,
    pub ln_value: f64,
    pub alpha: ExactRational,
    pub c0: EulerProductResult,
}

/// `2·27^n · X (ln X)^{α−1} / (3 Γ(α)) · c₀`, assembled in log space.
pub fn predict_count(n: usize, x: f64, bound: u64, table: &SieveTable) -> Result<Prediction> {
    if !x.is_finite() || x <= std::f64::consts::E {
        return Err(Error::Domain(format!("X must exceed e, got {x}")));
    }
    let alpha = alpha_closed_form(n)?;
    let a = alpha.to_f64();
    let c = c0(n, bound, table)?;
    let ln_value = (2.0f64).ln() + n as f64 * (27.0f64).ln() + x.ln() + (a - 1.0) * x.ln().ln()
        - (3.0f64).ln()
        - log_gamma(a)?
        + c.ln_value;
    Ok(Prediction { value: ln_value.exp(), ln_value, alpha, c0: c })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalCase {
    /// `p | |G|` and `r` is ramified at `p`.
    Alpha1,
    /// `p | |G|`, `r` unramified at `p`.
    Alpha2,
    /// `p ∤ |G|`.
    Alpha3,
}

/// Sylow bookkeeping at a prime dividing `|G|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildLocalData {
    pub p: u64,
    /// `|ker φ(p)|` on the `p`-Sylow component.
    pub ker_phi_p_size: u64,
    pub ker_phi_nonp_size: u64,
    /// Generator of the image of inertia in `H(non-p)`.
    pub tau_p: Vec<u32>,
    /// Residue mod `L` congruent to 1 on the `p`-part and to `p` elsewhere.
    pub frobenius: u64,
    pub s_sum: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFactor {
    pub p: u64,
    pub case: LocalCase,
    /// The factor without the `(1 − 1/p)^b` normalization.
    pub exact: ExactRational,
    pub value: f64,
    pub wild: Option<WildLocalData>,
}

/// Local-factor evaluator for a fixed `(G, H, φ, r)`; tame `S`-sums are
/// cached per residue mod `L`.
pub struct LocalFactors<'a> {
    group: &'a CocycleGroup,
    datum: &'a FiberedDatum,
    sums: TwistedSSums<'a>,
    l: u64,
    tame_cache: std::cell::RefCell<BTreeMap<u64, u128>>,
}

impl<'a> LocalFactors<'a> {
    pub fn new(group: &'a CocycleGroup, datum: &'a FiberedDatum) -> Result<Self> {
        let sums = TwistedSSums::new(group, datum, DEFAULT_ELEMENT_CAP)?;
        Ok(Self {
            group,
            datum,
            sums,
            l: datum.acting_modulus(group),
            tame_cache: Default::default(),
        })
    }

    pub fn acting_modulus(&self) -> u64 {
        self.l
    }

    pub fn kernel_size(&self) -> u64 {
        self.sums.kernel_size()
    }

    /// `Σ_{g ∈ ker φ − {id}} |S_{(H,φ)}(g, α)|` for `α` a unit mod `L`.
    pub fn tame_s_sum(&self, alpha: u64) -> Result<u128> {
        let key = alpha % self.l;
        if gcd(key, self.l) != 1 && self.l != 1 {
            return Err(Error::NotCoprime { alpha, modulus: self.l });
        }
        if let Some(&v) = self.tame_cache.borrow().get(&key) {
            return Ok(v);
        }
        let v = self.sums.s_sum(key)?;
        self.tame_cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// `Σ|S_{(H,φ)}(g, p)| / |ker φ|` for a tame prime.
    pub fn tame_ratio(&self, p: u64) -> Result<ExactRational> {
        let s = self.tame_s_sum(p)?;
        ExactRational::new(BigInt::from(s), BigInt::from(self.kernel_size()))
    }

    pub fn factor(&self, p: u64) -> Result<LocalFactor> {
        if !crate::numtheory::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if !self.group.order().is_multiple_of(p) {
            let s = self.tame_s_sum(p)?;
            let exact = ExactRational::one()
                + ExactRational::new(BigInt::from(s), BigInt::from(self.kernel_size()) * BigInt::from(p))?;
            return Ok(LocalFactor { p, case: LocalCase::Alpha3, value: exact.to_f64(), exact, wild: None });
        }
        let wild = self.wild_data(p)?;
        let ramified = wild.1;
        let data = wild.0;
        let ratio = ExactRational::new(BigInt::from(data.s_sum), BigInt::from(data.ker_phi_nonp_size))?;
        let kp = ExactRational::from_integer(data.ker_phi_p_size);
        let pr = ExactRational::from_integer(p);
        let (case, exact) = if ramified {
            let v = ExactRational::new(BigInt::from(data.ker_phi_p_size), BigInt::from(p))? * ratio;
            (LocalCase::Alpha1, v)
        } else {
            let num = kp * ratio - ExactRational::one();
            let v = ExactRational::one()
                + ExactRational::from(num.as_big_rational() / pr.as_big_rational());
            (LocalCase::Alpha2, v)
        };
        Ok(LocalFactor { p, case, value: exact.to_f64(), exact, wild: Some(data) })
    }

    /// Coordinates of `H` whose order is a power of `p`.
    fn h_mask(&self, p: u64) -> Result<Vec<bool>> {
        self.datum
            .h()
            .cyclic_orders()
            .iter()
            .map(|&o| match o {
                1 => Ok(false),
                o => crate::numtheory::prime_power_base(o as u64)
                    .map(|q| q == p)
                    .ok_or_else(|| Error::Sylow(format!("H has a factor Z/{o} that is not of prime-power order"))),
            })
            .collect()
    }

    fn wild_data(&self, p: u64) -> Result<(WildLocalData, bool)> {
        let (group, datum, h) = (self.group, self.datum, self.datum.h());
        let parts = group.sylow_parts()?;
        let part = parts
            .iter()
            .find(|s| s.prime == p)
            .ok_or_else(|| Error::Sylow(format!("no {p}-Sylow component")))?;
        let mask_p = self.h_mask(p)?;
        let proj_nonp = |v: &[u32]| -> Vec<u32> {
            v.iter().zip(&mask_p).map(|(&x, &m)| if m { 0 } else { x }).collect()
        };
        let in_p_part = |g: &GroupElement| -> bool {
            g.c().iter().enumerate().all(|(i, &x)| x == 0 || part.center_range.contains(&i))
                && g.a().iter().enumerate().all(|(j, &x)| x == 0 || part.base_range.contains(&j))
        };
        let in_nonp_part = |g: &GroupElement| -> bool {
            part.center_range.clone().all(|i| g.c()[i] == 0) && part.base_range.clone().all(|j| g.a()[j] == 0)
        };
        let all: Vec<GroupElement> = group.elements(DEFAULT_ELEMENT_CAP)?.collect();
        let gp: Vec<&GroupElement> = all.iter().filter(|g| in_p_part(g)).collect();
        let gnp: Vec<&GroupElement> = all.iter().filter(|g| in_nonp_part(g)).collect();
        for g in &gp {
            if !AbelianSpec::is_zero(&proj_nonp(&datum.phi(g))) {
                return Err(Error::InconsistentDatum(format!(
                    "phi does not map the {p}-Sylow component into H({p})"
                )));
            }
        }
        for g in &gnp {
            let img = datum.phi(g);
            if img != proj_nonp(&img) {
                return Err(Error::InconsistentDatum(format!(
                    "phi does not map the non-{p} part into H(non-{p})"
                )));
            }
        }
        let ker_p = gp.iter().filter(|g| AbelianSpec::is_zero(&datum.phi(g))).count() as u64;
        let ker_np = gnp.iter().filter(|g| AbelianSpec::is_zero(&datum.phi(g))).count() as u64;

        let l = self.l;
        let pk = prime_power_part(l, p);
        let rest = l / pk;
        // inertia at p: units ≡ 1 mod the prime-to-p part of L
        let inertia: Vec<u64> = units(l).into_iter().filter(|&u| u % rest == 1 % rest).collect();
        let ramified = inertia.iter().any(|&u| datum.r(u).map(|v| !AbelianSpec::is_zero(&v)).unwrap_or(false));
        let image: Vec<Vec<u32>> = {
            let mut img: Vec<Vec<u32>> = Vec::new();
            for &u in &inertia {
                let v = proj_nonp(&datum.r(u)?);
                if !img.contains(&v) {
                    img.push(v);
                }
            }
            img.sort();
            img
        };
        let tau = image
            .iter()
            .find(|v| h.element_order(v) == image.len() as u64)
            .cloned()
            .ok_or_else(|| Error::InconsistentDatum("image of inertia is not cyclic".into()))?;
        let frobenius = if rest == 1 { 1 % l } else { crt_pair(1, pk, p % rest, rest) };
        let r_frob = proj_nonp(&datum.r(frobenius)?);
        let mut s_sum = 0u64;
        for g in gnp.iter().filter(|g| proj_nonp(&datum.phi(g)) == tau) {
            let target = group.pow_raw(g, frobenius);
            s_sum += gnp
                .iter()
                .filter(|hh| proj_nonp(&datum.phi(hh)) == r_frob && group.conjugate_raw(hh, g) == target)
                .count() as u64;
        }
        Ok((
            WildLocalData {
                p,
                ker_phi_p_size: ker_p,
                ker_phi_nonp_size: ker_np,
                tau_p: tau,
                frobenius,
                s_sum,
            },
            ramified,
        ))
    }
}

/// The local factor at `p` (without the `(1 − 1/p)^b` normalization).
pub fn mb_local_factor(group: &CocycleGroup, datum: &FiberedDatum, p: u64) -> Result<LocalFactor> {
    LocalFactors::new(group, datum)?.factor(p)
}

fn positive_ln(f: &LocalFactor) -> Result<f64> {
    if !f.exact.is_positive() {
        return Err(Error::Domain(format!("local factor at {} is {}, not positive", f.p, f.exact)));
    }
    Ok(f.value.ln())
}

fn tame_class_values(lf: &LocalFactors<'_>) -> Result<BTreeMap<u64, f64>> {
    let l = lf.acting_modulus();
    units(l)
        .into_iter()
        .map(|c| Ok((c, lf.tame_ratio(c)?.to_f64())))
        .collect()
}

/// `Γ(b)⁻¹ · Π_{p ≤ P} L_p (1 − 1/p)^b` with `b = b_{(H,φ)}(G)`.
///
/// Refuses groups of even order unless `allow_even` is set, in which case the
/// result is stamped [`ProductStatus::UnsupportedEvenOrder`].
pub fn mb_constant(
    group: &CocycleGroup,
    datum: &FiberedDatum,
    bound: u64,
    table: &SieveTable,
    allow_even: bool,
) -> Result<EulerProductResult> {
    let even = group.order().is_multiple_of(2);
    if even && !allow_even {
        return Err(Error::EvenOrder(group.order()));
    }
    check_bound(table, bound)?;
    let b = fibered_b_orbit(group, datum)?;
    if b == 0 {
        return Err(Error::NonPositiveExponent(0));
    }
    let bf = b as f64;
    let lf = LocalFactors::new(group, datum)?;
    let mut acc = LogSum::default();
    acc.add(-log_gamma(bf)?)?;
    let end = table.primes().partition_point(|&p| p <= bound);
    for &p in &table.primes()[..end] {
        let f = lf.factor(p)?;
        acc.add(positive_ln(&f)? + bf * (-1.0 / p as f64).ln_1p())?;
    }
    let (tail, counts) = tail_estimate(table, bound, lf.acting_modulus(), &tame_class_values(&lf)?, bf);
    let ln_value = acc.value();
    Ok(EulerProductResult {
        value: ln_value.exp(),
        ln_value,
        truncation_bound: bound,
        tail_estimate: tail,
        class_modulus: lf.acting_modulus(),
        per_class_prime_counts: counts,
        status: if even { ProductStatus::UnsupportedEvenOrder } else { ProductStatus::Ok },
    })
}

/// `Π_{p | |G|} (1 − 1/p)^b · Π_{p ∤ |G|, p ≤ P} (1 + Σ|S|/(|ker φ| p))(1 − 1/p)^b`.
pub fn tame_constant(
    group: &CocycleGroup,
    datum: &FiberedDatum,
    bound: u64,
    table: &SieveTable,
) -> Result<EulerProductResult> {
    check_bound(table, bound)?;
    let b = fibered_b_orbit(group, datum)?;
    let bf = b as f64;
    let lf = LocalFactors::new(group, datum)?;
    let mut acc = LogSum::default();
    let end = table.primes().partition_point(|&p| p <= bound);
    for &p in &table.primes()[..end] {
        let norm = bf * (-1.0 / p as f64).ln_1p();
        if group.order().is_multiple_of(p) {
            acc.add(norm)?;
        } else {
            let f = lf.factor(p)?;
            acc.add(positive_ln(&f)? + norm)?;
        }
    }
    let (tail, counts) = tail_estimate(table, bound, lf.acting_modulus(), &tame_class_values(&lf)?, bf);
    let ln_value = acc.value();
    Ok(EulerProductResult {
        value: ln_value.exp(),
        ln_value,
        truncation_bound: bound,
        tail_estimate: tail,
        class_modulus: lf.acting_modulus(),
        per_class_prime_counts: counts,
        status: ProductStatus::Ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckViolation {
    pub p: u64,
    pub group_side: ExactRational,
    #[serde(with = "crate::rational::decimal")]
    pub f_p: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub p_limit: u64,
    pub checked: Vec<u64>,
    pub violations: Vec<CrossCheckViolation>,
}

/// Largest `p_limit` accepted by [`local_factor_cross_check`].
pub const CROSS_CHECK_P_LIMIT: u64 = 10_000;

/// For every tame `p ≤ p_limit`, compares `Σ|S_{(H,φ)}(g, p)| / |ker φ|` on
/// `G_n` with the theorem datum against `f(p)`.
pub fn local_factor_cross_check(n: usize, p_limit: u64, table: &SieveTable) -> Result<CrossCheckReport> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidParameter(format!("cross-check supports n = 1, 2, got {n}")));
    }
    if p_limit > CROSS_CHECK_P_LIMIT {
        return Err(Error::CapExceeded {
            what: "cross-check prime limit",
            needed: p_limit as u128,
            cap: CROSS_CHECK_P_LIMIT as u128,
        });
    }
    table.ensure_covers(p_limit)?;
    let group = build_gn(n)?;
    let datum = FiberedDatum::theorem(&group, 1)?;
    let lf = LocalFactors::new(&group, &datum)?;
    let spec = f_spec_for_gn(n)?;
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    let end = table.primes().partition_point(|&p| p <= p_limit);
    for &p in &table.primes()[..end] {
        if group.order() % p == 0 {
            continue;
        }
        let group_side = lf.tame_ratio(p)?;
        let f_p = BigInt::from(spec.at_prime(p));
        if group_side != ExactRational::from_integer(f_p.clone()) {
            violations.push(CrossCheckViolation { p, group_side, f_p });
        }
        checked.push(p);
    }
    Ok(CrossCheckReport { n, p_limit, checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_mixed_example, cyclic};
    use crate::sieve::sieve;

    #[test]
    fn gamma_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(7.0).unwrap() - 720f64.ln()).abs() < 1e-12 * 720f64.ln());
        assert!((log_gamma(0.5 + 1.0).unwrap() - (PI.sqrt() / 2.0).ln()).abs() < 1e-13);
        assert!(log_gamma(0.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn wild_factor_at_three() {
        for n in 1..=2 {
            let g = build_gn(n).unwrap();
            let f = FiberedDatum::theorem(&g, 1).unwrap();
            let lf = mb_local_factor(&g, &f, 3).unwrap();
            assert_eq!(lf.case, LocalCase::Alpha1);
            let want = ExactRational::new(BigInt::from(27u64.pow(n as u32)), 3).unwrap();
            assert_eq!(lf.exact, want);
            assert_eq!(lf.wild.unwrap().s_sum, 1);
        }
    }

    #[test]
    fn tame_factors_g1() {
        let g = build_gn(1).unwrap();
        let f = FiberedDatum::theorem(&g, 1).unwrap();
        let lf = LocalFactors::new(&g, &f).unwrap();
        assert_eq!(lf.factor(19).unwrap().exact, ExactRational::new(19 + 26, 19).unwrap());
        assert_eq!(lf.factor(5).unwrap().exact, ExactRational::one());
        assert_eq!(lf.factor(13).unwrap().exact, ExactRational::new(13 + 8, 13).unwrap());
        assert!(lf.factor(15).is_err());
    }

    #[test]
    fn mixed_wild_cases() {
        let g = build_mixed_example(1).unwrap();
        let f = FiberedDatum::mixed(&g).unwrap();
        let lf = LocalFactors::new(&g, &f).unwrap();
        assert_eq!(lf.factor(2).unwrap().case, LocalCase::Alpha2);
        assert_eq!(lf.factor(3).unwrap().case, LocalCase::Alpha1);
        assert_eq!(lf.factor(5).unwrap().case, LocalCase::Alpha3);
        let t = sieve(1000, 9).unwrap();
        assert!(matches!(mb_constant(&g, &f, 1000, &t, false), Err(Error::EvenOrder(24))));
        let r = mb_constant(&g, &f, 1000, &t, true).unwrap();
        assert_eq!(r.status, ProductStatus::UnsupportedEvenOrder);
        assert!(tame_constant(&g, &f, 1000, &t).unwrap().value > 0.0);
    }

    #[test]
    fn trivial_exponent_rejected() {
        let z3 = cyclic(3);
        let f = FiberedDatum::trivial(&z3).unwrap();
        let t = sieve(1000, 9).unwrap();
        // b = 1 here, accepted
        assert!(mb_constant(&z3, &f, 1000, &t, false).is_ok());
        let one = cyclic(1);
        let f = FiberedDatum::trivial(&one).unwrap();
        assert!(matches!(mb_constant(&one, &f, 1000, &t, false), Err(Error::NonPositiveExponent(0))));
    }

    #[test]
    fn c0_factors_and_identity() {
        let t = sieve(10_000, 9).unwrap();
        let r = c0(1, 10_000, &t).unwrap();
        assert!(r.value > 0.0 && r.tail_estimate > 0.0);
        assert_eq!(r.per_class_prime_counts.values().sum::<u64>(), t.pi(10_000) - 1);
        let g = build_gn(1).unwrap();
        let f = FiberedDatum::theorem(&g, 1).unwrap();
        let mb = mb_constant(&g, &f, 10_000, &t, false).unwrap();
        let want = 54.0 * r.value / (3.0 * 720.0);
        assert!(((2.0 * mb.value - want) / want).abs() < 1e-9);
        let tame = tame_constant(&g, &f, 10_000, &t).unwrap();
        // full = tame · (27/3) / Γ(7)
        let ratio = mb.ln_value - tame.ln_value;
        assert!((ratio - (9.0f64.ln() - 720f64.ln())).abs() < 1e-9);
        assert!(c0(1, 99, &t).is_err());
        assert!(c0(1, 20_000, &t).is_err());
    }

    #[test]
    fn predictor_shape() {
        let t = sieve(1000, 9).unwrap();
        let a = predict_count(1, 1e6, 1000, &t).unwrap();
        let b = predict_count(1, 2e6, 1000, &t).unwrap();
        assert!(a.value.is_finite() && a.value > 0.0 && b.value > a.value);
        let want = 54.0 * a.c0.value * 1e6 * (1e6f64.ln()).powi(6) / (3.0 * 720.0);
        assert!(((a.value - want) / want).abs() < 1e-10);
        assert!(predict_count(1, 2.0, 1000, &t).is_err());
    }

    #[test]
    fn cross_check_small() {
        let t = sieve(500, 9).unwrap();
        let r = local_factor_cross_check(1, 500, &t).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.checked.contains(&19) && !r.checked.contains(&3));
        assert!(local_factor_cross_check(3, 500, &t).is_err());
    }
}
