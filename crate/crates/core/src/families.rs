//! The two explicit families: `G_n` and the mixed-order example.

use crate::error::{Error, Result};
use crate::group::{AbelianSpec, CocycleGroup, CocyclePairing, GroupElement, PairingSummand};

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `θᵢ(σ, τ) = π₀(σ)·πᵢ(τ) mod m` for `i = 1..n`, on a base of rank `n + 1`.
fn theta_pi0_pi(n: usize, m: u32) -> CocyclePairing {
    let summands = (1..=n)
        .map(|i| {
            let mut left = vec![0; n + 1];
            let mut right = vec![0; n + 1];
            left[0] = 1;
            right[i] = 1;
            PairingSummand { left, right, target: i - 1, modulus: m }
        })
        .collect();
    CocyclePairing::new(summands)
}

/// `G_n = (Z/3)^n ×_θ (Z/3 ⊕ (Z/9)^n)` with `θᵢ = π₀·πᵢ`.
///
/// Base coordinate 0 is the `Z/3` factor, coordinates `1..=n` the `Z/9` factors.
pub fn build_gn(n: usize) -> Result<CocycleGroup> {
    check_n(n)?;
    let center = AbelianSpec::new(vec![3; n])?;
    let mut base = vec![3];
    base.extend(std::iter::repeat_n(9, n));
    CocycleGroup::new(center, AbelianSpec::new(base)?, theta_pi0_pi(n, 3))
}

/// `(Z/2)^n ×_θ ((Z/2)^{n+1} × (Z/3)^n)`, stored as the product of its
/// 2-Sylow cocycle group and the elementary abelian 3-Sylow.
pub fn build_mixed_example(n: usize) -> Result<CocycleGroup> {
    check_n(n)?;
    let two = CocycleGroup::new(
        AbelianSpec::new(vec![2; n])?,
        AbelianSpec::new(vec![2; n + 1])?,
        theta_pi0_pi(n, 2),
    )?;
    let three = CocycleGroup::abelian(AbelianSpec::new(vec![3; n])?);
    CocycleGroup::sylow_product(vec![two, three])
}

/// The cyclic group `Z/m` as an abelian cocycle group.
pub fn cyclic(m: u32) -> CocycleGroup {
    CocycleGroup::abelian(AbelianSpec::new(vec![m]).expect("positive order"))
}

/// `π₀(q(g))`, the `Z/3` coordinate of the image in `A_n`.
pub fn pi0(g: &GroupElement) -> u32 {
    g.a()[0]
}

/// `πᵢ(q(g))` reduced mod 3, for `i` in `1..=n`.
pub fn pi_i(g: &GroupElement, i: usize) -> u32 {
    g.a()[i] % 3
}
