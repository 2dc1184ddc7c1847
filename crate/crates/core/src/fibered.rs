//! Fibered exponents `b_{(H,φ)}(G)`: orbits of `ker φ − {id}` under the pairs
//! `(g, α)` with `φ(g) = r(α)`, acting by `n ↦ g n^α g⁻¹`.
//!
//! Units act on `ker φ` through `α mod exp(G)` and `r` factors through
//! `(Z/M_eff)^*`, so every computation runs over `(Z/L)^*` with
//! `L = lcm(exp G, M_eff)`, a quotient of `(Z/|G|)^*`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{cap_check, Error, Result};
use crate::exponents::naive_b_orbit;
use crate::families::build_mixed_example;
use crate::group::{AbelianSpec, CocycleGroup, GroupElement};
use crate::numtheory::{euler_phi, lcm, mul_mod, unit_generators, units};
use crate::orbit::UnionFind;
use crate::rational::ExactRational;
use crate::DEFAULT_ELEMENT_CAP;

/// Default bound on `|ker φ|·φ(L)·|A|` for the Burnside sum.
pub const DEFAULT_BURNSIDE_WORK_CAP: u64 = 100_000_000;

/// `(H, φ, r)` together with `M = |G|` and the reduced modulus `M_eff`.
///
/// `φ(c, a) = Σ cᵢ·φ(eᵢ, 0) + Σ aⱼ·φ(0, eⱼ)`; this form is a homomorphism
/// exactly when `φ∘θ` vanishes, which is checked on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberedDatum {
    modulus: u64,
    h: AbelianSpec,
    phi_center: Vec<Vec<u32>>,
    phi_base: Vec<Vec<u32>>,
    m_eff: u64,
    r: BTreeMap<u64, Vec<u32>>,
}

impl FiberedDatum {
    pub fn new(
        group: &CocycleGroup,
        h: AbelianSpec,
        phi_center: Vec<Vec<u32>>,
        phi_base: Vec<Vec<u32>>,
        m_eff: u64,
        r: BTreeMap<u64, Vec<u32>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InconsistentDatum(msg));
        let modulus = group.order();
        if phi_center.len() != group.center().rank() || phi_base.len() != group.base().rank() {
            return bad("phi needs one image per centre and base coordinate".into());
        }
        for (img, ord) in phi_center
            .iter()
            .zip(group.center().cyclic_orders())
            .chain(phi_base.iter().zip(group.base().cyclic_orders()))
        {
            if !h.is_valid(img) {
                return bad(format!("phi image {img:?} is not an element of H"));
            }
            if !AbelianSpec::is_zero(&h.scale(img, *ord as u64)) {
                return bad(format!("phi image {img:?} of a Z/{ord} generator has the wrong order"));
            }
        }
        if m_eff == 0 || !modulus.is_multiple_of(m_eff) {
            return bad(format!("M_eff = {m_eff} must divide |G| = {modulus}"));
        }
        let expected: Vec<u64> = units(m_eff);
        if r.keys().copied().collect::<Vec<_>>() != expected {
            return bad(format!("r must be tabulated exactly on the units mod {m_eff}"));
        }
        if r.values().any(|v| !h.is_valid(v)) {
            return bad("r takes a value outside H".into());
        }
        let datum = Self { modulus, h, phi_center, phi_base, m_eff, r };
        datum.check_homomorphisms(group)?;
        Ok(datum)
    }

    fn check_homomorphisms(&self, group: &CocycleGroup) -> Result<()> {
        let h = &self.h;
        // φ∘θ on basis pairs
        let rank = group.base().rank();
        for i in 0..rank {
            for j in 0..rank {
                let mut ei = group.base().zero();
                let mut ej = group.base().zero();
                ei[i] = 1;
                ej[j] = 1;
                let t = group.pairing().eval(group.center(), &ei, &ej);
                if !AbelianSpec::is_zero(&self.phi_center_part(&t)) {
                    return Err(Error::InconsistentDatum(
                        "phi does not vanish on the image of the cocycle".into(),
                    ));
                }
            }
        }
        let images: Vec<Vec<u32>> = self.phi_center.iter().chain(&self.phi_base).cloned().collect();
        if !h.generates(&images) {
            return Err(Error::InconsistentDatum("phi is not surjective".into()));
        }
        for (&u, ru) in &self.r {
            for (&v, rv) in &self.r {
                let uv = if self.m_eff == 1 { 0 } else { mul_mod(u, v, self.m_eff) };
                if self.r[&uv] != h.add(ru, rv) {
                    return Err(Error::InconsistentDatum(format!("r({u}·{v}) ≠ r({u}) + r({v})")));
                }
            }
        }
        let values: Vec<Vec<u32>> = self.r.values().cloned().collect();
        if !h.generates(&values) {
            return Err(Error::InconsistentDatum("r is not surjective".into()));
        }
        Ok(())
    }

    /// `H` trivial: the fibered exponent becomes the naive orbit count.
    pub fn trivial(group: &CocycleGroup) -> Result<Self> {
        let h = AbelianSpec::trivial();
        Self::new(
            group,
            h,
            vec![Vec::new(); group.center().rank()],
            vec![Vec::new(); group.base().rank()],
            1,
            BTreeMap::from([(0, Vec::new())]),
        )
    }

    /// The datum for `G_n`: `H = Z/3` the quotient of `(Z/9)^*` with
    /// `r(2^k) = k`, and `φ = ι·π₀∘q` for the identification `ι ∈ {1, 2}`.
    pub fn theorem(group: &CocycleGroup, identification: u32) -> Result<Self> {
        if identification != 1 && identification != 2 {
            return Err(Error::InvalidParameter(format!(
                "identification must be 1 or 2, got {identification}"
            )));
        }
        if group.base().cyclic_orders().first() != Some(&3) {
            return Err(Error::InconsistentDatum("base coordinate 0 must be Z/3".into()));
        }
        let mut phi_base = vec![vec![0]; group.base().rank()];
        phi_base[0] = vec![identification];
        let mut r = BTreeMap::new();
        let mut x = 1u64;
        for k in 0..6u32 {
            r.insert(x, vec![k % 3]);
            x = x * 2 % 9;
        }
        Self::new(
            group,
            AbelianSpec::new(vec![3])?,
            vec![vec![0]; group.center().rank()],
            phi_base,
            9,
            r,
        )
    }

    /// The mixed-order datum: `H = Z/2`, `φ = π₀`, `ker r = {1 mod 3}`.
    pub fn mixed(group: &CocycleGroup) -> Result<Self> {
        if group.base().cyclic_orders().first() != Some(&2) {
            return Err(Error::InconsistentDatum("base coordinate 0 must be Z/2".into()));
        }
        let mut phi_base = vec![vec![0]; group.base().rank()];
        phi_base[0] = vec![1];
        Self::new(
            group,
            AbelianSpec::new(vec![2])?,
            vec![vec![0]; group.center().rank()],
            phi_base,
            3,
            BTreeMap::from([(1, vec![0]), (2, vec![1])]),
        )
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn h(&self) -> &AbelianSpec {
        &self.h
    }

    pub fn m_eff(&self) -> u64 {
        self.m_eff
    }

    pub fn r_table(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.r
    }

    fn phi_center_part(&self, c: &[u32]) -> Vec<u32> {
        let mut out = self.h.zero();
        for (img, &x) in self.phi_center.iter().zip(c) {
            out = self.h.add(&out, &self.h.scale(img, x as u64));
        }
        out
    }

    pub(crate) fn phi_base_part(&self, a: &[u32]) -> Vec<u32> {
        let mut out = self.h.zero();
        for (img, &x) in self.phi_base.iter().zip(a) {
            out = self.h.add(&out, &self.h.scale(img, x as u64));
        }
        out
    }

    pub fn phi(&self, g: &GroupElement) -> Vec<u32> {
        self.h.add(&self.phi_center_part(g.c()), &self.phi_base_part(g.a()))
    }

    /// `r(α mod M_eff)`; `α` must be coprime to `M_eff`.
    pub fn r(&self, alpha: u64) -> Result<Vec<u32>> {
        let key = alpha % self.m_eff;
        self.r
            .get(&key)
            .cloned()
            .ok_or(Error::NotCoprime { alpha, modulus: self.m_eff })
    }

    /// `L = lcm(exp G, M_eff)`.
    pub fn acting_modulus(&self, group: &CocycleGroup) -> u64 {
        lcm(group.exponent(), self.m_eff)
    }

    /// `ker φ` in element order.
    pub fn kernel(&self, group: &CocycleGroup, cap: u64) -> Result<Vec<GroupElement>> {
        Ok(group
            .elements(cap)?
            .filter(|g| AbelianSpec::is_zero(&self.phi(g)))
            .collect())
    }
}

/// Conjugators whose `q`-images generate `q(ker φ)`; conjugation by `ker φ`
/// factors through these since `(c, 0)` is central.
fn kernel_conjugators(group: &CocycleGroup, kernel: &[GroupElement]) -> Vec<GroupElement> {
    let base = group.base();
    let mut chosen = Vec::new();
    let mut images: Vec<Vec<u32>> = Vec::new();
    let mut member = base.subgroup_closure(&images);
    for k in kernel {
        if !member[base.index_of(k.a()) as usize] {
            images.push(k.a().to_vec());
            chosen.push(k.clone());
            member = base.subgroup_closure(&images);
        }
    }
    chosen
}

/// `(h_u, u)` for generators `u` of `(Z/L)^*`, with `h_u` the first element
/// satisfying `φ(h_u) = r(u)`.
fn unit_lifts(group: &CocycleGroup, datum: &FiberedDatum, cap: u64) -> Result<Vec<(GroupElement, u64)>> {
    let l = datum.acting_modulus(group);
    let mut out = Vec::new();
    for u in unit_generators(l) {
        let target = datum.r(u)?;
        let h = group
            .elements(cap)?
            .find(|g| datum.phi(g) == target)
            .expect("phi is surjective");
        out.push((h, u));
    }
    Ok(out)
}

/// `b_{(H,φ)}(G)`: orbit count by closure under a generating set of the
/// fibered product.
pub fn fibered_b_orbit(group: &CocycleGroup, datum: &FiberedDatum) -> Result<u64> {
    fibered_b_orbit_capped(group, datum, DEFAULT_ELEMENT_CAP)
}

pub fn fibered_b_orbit_capped(group: &CocycleGroup, datum: &FiberedDatum, cap: u64) -> Result<u64> {
    if datum.modulus() != group.order() {
        return Err(Error::InconsistentDatum("datum was built for another group".into()));
    }
    let kernel = datum.kernel(group, cap)?;
    let conjugators = kernel_conjugators(group, &kernel);
    let lifts = unit_lifts(group, datum, cap)?;
    let mut uf = UnionFind::new(group.order() as usize);
    for n in &kernel {
        if group.is_identity(n) {
            continue;
        }
        let i = group.index_of(n) as u32;
        for h in &conjugators {
            let y = group.conjugate_raw(h, n);
            uf.union(i, group.index_of(&y) as u32);
        }
        for (h, u) in &lifts {
            let y = group.conjugate_raw(h, &group.pow_raw(n, *u));
            uf.union(i, group.index_of(&y) as u32);
        }
    }
    let members = kernel
        .iter()
        .filter(|n| !group.is_identity(n))
        .map(|n| group.index_of(n) as u32);
    Ok(uf.count_classes(members))
}

/// Evaluates `Σ_{n ∈ ker φ − {id}} |S_{(H,φ)}(n, α)|` with
/// `S_{(H,φ)}(n, α) = {h : h n h⁻¹ = n^α, φ(h) = r(α)}`.
///
/// Conjugation depends only on `q(h)`, so `h` runs over `A` weighted by the
/// number of centre elements completing it to the required `φ`-value.
pub struct TwistedSSums<'a> {
    group: &'a CocycleGroup,
    datum: &'a FiberedDatum,
    kernel: Vec<GroupElement>,
    hist: Vec<u64>,
    base_elems: Vec<Vec<u32>>,
    phi_a: Vec<Vec<u32>>,
}

impl<'a> TwistedSSums<'a> {
    pub fn new(group: &'a CocycleGroup, datum: &'a FiberedDatum, cap: u64) -> Result<Self> {
        if datum.modulus() != group.order() {
            return Err(Error::InconsistentDatum("datum was built for another group".into()));
        }
        let kernel = datum.kernel(group, cap)?;
        let h = datum.h();
        let mut hist = vec![0u64; h.order() as usize];
        for c in group.center().elements() {
            hist[h.index_of(&datum.phi_center_part(&c)) as usize] += 1;
        }
        let base_elems: Vec<Vec<u32>> = group.base().elements().collect();
        let phi_a = base_elems.iter().map(|a| datum.phi_base_part(a)).collect();
        Ok(Self { group, datum, kernel, hist, base_elems, phi_a })
    }

    pub fn kernel_size(&self) -> u64 {
        self.kernel.len() as u64
    }

    /// `α` must be a unit mod `L`.
    pub fn s_sum(&self, alpha: u64) -> Result<u128> {
        let (group, h) = (self.group, self.datum.h());
        let r_alpha = self.datum.r(alpha)?;
        let weight: Vec<u64> = self
            .phi_a
            .iter()
            .map(|pa| self.hist[h.index_of(&h.sub(&r_alpha, pa)) as usize])
            .collect();
        let mut total: u128 = 0;
        for n in &self.kernel {
            if group.is_identity(n) {
                continue;
            }
            let na = group.pow_raw(n, alpha);
            if na.a() != n.a() {
                continue;
            }
            for (ah, &w) in self.base_elems.iter().zip(&weight) {
                if w != 0 && group.conjugate_raw(&group.lift(ah.clone()), n) == na {
                    total += w as u128;
                }
            }
        }
        Ok(total)
    }
}

/// Burnside average
/// `|F|⁻¹ Σ_{(h,α) ∈ F} |{n ∈ ker φ − {id} : h n h⁻¹ = n^α}|` over
/// `F = G ×_H (Z/L)^*`, exactly.
pub fn fibered_b_burnside(group: &CocycleGroup, datum: &FiberedDatum, work_cap: u64) -> Result<ExactRational> {
    let sums = TwistedSSums::new(group, datum, DEFAULT_ELEMENT_CAP)?;
    let l = datum.acting_modulus(group);
    cap_check(
        "Burnside work",
        sums.kernel_size() as u128 * euler_phi(l) as u128 * group.base().order() as u128,
        work_cap as u128,
    )?;
    let mut total: u128 = 0;
    for alpha in units(l) {
        total += sums.s_sum(alpha)?;
    }
    let size = sums.kernel_size() as u128 * euler_phi(l) as u128;
    ExactRational::new(num_bigint::BigInt::from(total), num_bigint::BigInt::from(size))
}

/// `|G ×_H (Z/L)^*| = |ker φ|·φ(L)`, counted pair by pair.
pub fn fibered_product_size(group: &CocycleGroup, datum: &FiberedDatum) -> Result<u64> {
    let l = datum.acting_modulus(group);
    let mut count = 0u64;
    let elems: Vec<GroupElement> = group.elements(DEFAULT_ELEMENT_CAP)?.collect();
    let phis: Vec<Vec<u32>> = elems.iter().map(|g| datum.phi(g)).collect();
    for alpha in units(l) {
        let ra = datum.r(alpha)?;
        count += phis.iter().filter(|p| **p == ra).count() as u64;
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedRow {
    pub n: usize,
    pub order: u64,
    pub naive_b: i64,
    pub fibered_b: u64,
    /// `fibered_b / (12^n / 2)`.
    pub ratio: f64,
    /// `5·K·2^{−n}`.
    pub envelope: f64,
    pub within_envelope: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedProbe {
    pub rows: Vec<MixedRow>,
    /// `K = |ratio_2 − 1|·4`, so the envelope at `n = 2` is five times the observed deviation.
    pub k_calibration: f64,
    /// Rows outside the envelope; drift is reported, not treated as failure.
    pub flagged: Vec<usize>,
    /// Least `n` with `b_{(H,φ)} > b(G, Q)` read literally (orbit count against naive exponent).
    pub minimal_n_fibered_exceeds_naive: Option<usize>,
    /// Least `n` with `b_{(H,φ)} − 1 > b(G, Q)`, comparing logarithmic exponents.
    pub minimal_n_exponent_exceeds_naive: Option<usize>,
}

/// Exact `b(G, Q)` and `b_{(H,φ)}(G)` for the mixed family, `n = 1..=max_n`.
pub fn mixed_family_probe(max_n: usize) -> Result<MixedProbe> {
    if max_n < 2 {
        return Err(Error::InvalidParameter("the probe calibrates at n = 2; need max_n ≥ 2".into()));
    }
    let mut raw = Vec::new();
    for n in 1..=max_n {
        let group = build_mixed_example(n)?;
        let datum = FiberedDatum::mixed(&group)?;
        let naive = naive_b_orbit(&group, DEFAULT_ELEMENT_CAP)?;
        let fibered = fibered_b_orbit(&group, &datum)?;
        let ratio = 2.0 * fibered as f64 / 12f64.powi(n as i32);
        raw.push((n, group.order(), naive, fibered, ratio));
    }
    let k = 4.0 * (raw[1].4 - 1.0).abs();
    let mut rows = Vec::new();
    let mut flagged = Vec::new();
    for (n, order, naive_b, fibered_b, ratio) in raw {
        let envelope = 5.0 * k * 0.5f64.powi(n as i32);
        let within = (ratio - 1.0).abs() <= envelope;
        if n >= 2 && !within {
            flagged.push(n);
        }
        rows.push(MixedRow { n, order, naive_b, fibered_b, ratio, envelope, within_envelope: within });
    }
    let minimal_n_fibered_exceeds_naive = rows.iter().find(|r| r.fibered_b as i64 > r.naive_b).map(|r| r.n);
    let minimal_n_exponent_exceeds_naive =
        rows.iter().find(|r| r.fibered_b as i64 - 1 > r.naive_b).map(|r| r.n);
    Ok(MixedProbe {
        rows,
        k_calibration: k,
        flagged,
        minimal_n_fibered_exceeds_naive,
        minimal_n_exponent_exceeds_naive,
    })
}
