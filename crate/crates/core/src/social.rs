//! System-optimal steadfast share and the selfish/optimal delay gap.

use crate::error::{Error, Result};
use crate::model::{social_cost, social_quadratic, RampConfig};
use crate::scalar::Scalar;
use crate::wardrop::{phi, solve_hdv};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocialOptimum<T> {
    pub x1s_so: T,
    pub j_opt: T,
    /// Whether the unconstrained minimiser lies strictly inside `(0, 1)`.
    pub interior: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UeSoGap<T> {
    pub j_ue: T,
    pub j_so: T,
    pub gap: T,
}

/// Vertex of the social-cost quadratic, unclamped.
pub fn gamma<T: Scalar>(cfg: &RampConfig<T>) -> Result<T> {
    let k = cfg.affine();
    let n = cfg.flows();
    let denom = T::two() * (k.k1s + k.k1b);
    if denom == T::zero() {
        return Err(Error::DegenerateCosts);
    }
    let numer = T::two() * k.k1b + k.b1b - k.b1s - n.n2_exit() * k.k2exit
        - n.n0_enter() * k.k0enter
        + n.n2_s() * k.k2s;
    Ok(numer / denom)
}

/// Minimises total delay over `x1s in [0, 1]`.
///
/// A configuration with all-zero Lane-1 slopes has no vertex; every share is
/// optimal and `x1s_so = 0` is reported.
pub fn solve_social_optimum<T: Scalar>(cfg: &RampConfig<T>) -> Result<SocialOptimum<T>> {
    let (x1s_so, interior) = match gamma(cfg) {
        Ok(g) => (g.clamp_to(T::zero(), T::one()), g > T::zero() && g < T::one()),
        Err(Error::DegenerateCosts) if social_quadratic(cfg).b == T::zero() => (T::zero(), false),
        Err(e) => return Err(e),
    };
    Ok(SocialOptimum {
        x1s_so,
        j_opt: social_cost(cfg, x1s_so)?,
        interior,
    })
}

/// Total delay under selfish equilibrium versus the optimum.
pub fn ue_so_gap<T: Scalar>(cfg: &RampConfig<T>) -> Result<UeSoGap<T>> {
    let ue = solve_hdv(cfg)?;
    let j_ue = social_cost(cfg, ue.x1s_star)?;
    let j_so = solve_social_optimum(cfg)?.j_opt;
    Ok(UeSoGap {
        j_ue,
        j_so,
        gap: j_ue - j_so,
    })
}

/// `0 < phi < gamma < 1`, evaluated on the unclamped roots.
pub fn admissible<T: Scalar>(cfg: &RampConfig<T>) -> bool {
    match (phi(cfg), gamma(cfg)) {
        (Ok(p), Ok(g)) => T::zero() < p && p < g && g < T::one(),
        _ => false,
    }
}
