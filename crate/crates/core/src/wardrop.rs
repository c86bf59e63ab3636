//! Selfish lane-choice equilibrium of human-driven vehicles.
//!
//! Both Lane-1 costs are affine in the steadfast share, one increasing and
//! one decreasing, so the equilibrium is the root of their difference clamped
//! to `[0, 1]`.

use crate::error::{Error, Result};
use crate::model::{eval_costs, FlowDistribution, RampConfig};
use crate::scalar::Scalar;

/// Which of the three equilibrium shapes applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumCase {
    /// Bypassing is never costlier than staying; everyone bypasses.
    AllBypass,
    /// Both strategies are used and their costs are equal.
    Interior,
    /// Staying is never costlier than bypassing; everyone stays.
    AllSteadfast,
}

impl EquilibriumCase {
    pub fn label(&self) -> &'static str {
        match self {
            EquilibriumCase::AllBypass => "all_bypass",
            EquilibriumCase::Interior => "interior",
            EquilibriumCase::AllSteadfast => "all_steadfast",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HdvEquilibrium<T> {
    pub x1s_star: T,
    pub case: EquilibriumCase,
    pub j1s: T,
    pub j1b: T,
}

/// Root of `J1s - J1b`, unclamped. Values outside `[0, 1]` signal a boundary
/// equilibrium.
pub fn phi<T: Scalar>(cfg: &RampConfig<T>) -> Result<T> {
    let k = cfg.affine();
    let denom = k.k1s + k.k1b;
    if denom == T::zero() {
        return Err(Error::DegenerateCosts);
    }
    Ok((k.k1b + k.b1b - k.b1s) / denom)
}

/// Unique HDV-only equilibrium.
///
/// `phi <= 0` is reported as [`EquilibriumCase::AllBypass`] and `phi >= 1` as
/// [`EquilibriumCase::AllSteadfast`], matching the weak inequalities of the
/// equilibrium conditions.
pub fn solve_hdv<T: Scalar>(cfg: &RampConfig<T>) -> Result<HdvEquilibrium<T>> {
    let root = phi(cfg)?;
    let (x1s_star, case) = if root <= T::zero() {
        (T::zero(), EquilibriumCase::AllBypass)
    } else if root >= T::one() {
        (T::one(), EquilibriumCase::AllSteadfast)
    } else {
        (root, EquilibriumCase::Interior)
    };
    let costs = eval_costs(&cfg.affine(), x1s_star)?;
    Ok(HdvEquilibrium {
        x1s_star,
        case,
        j1s: costs.j1s,
        j1b: costs.j1b,
    })
}

/// Checks the HDV complementarity conditions of `x` with tolerance `tol`.
///
/// Costs are evaluated at the total steadfast share (CAV plus HDV); only the
/// HDV components are tested.
pub fn check_wardrop<T: Scalar>(cfg: &RampConfig<T>, x: &FlowDistribution<T>, tol: T) -> bool {
    let x1s = x.x1s().clamp_to(T::zero(), T::one());
    let Ok(costs) = eval_costs(&cfg.affine(), x1s) else {
        return false;
    };
    let gap = costs.j1s - costs.j1b;
    x.x1s_hdv * gap <= tol && x.x1b_hdv * (-gap) <= tol
}
