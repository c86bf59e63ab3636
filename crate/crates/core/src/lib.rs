//! Lane-choice equilibria, system optima and CAV control at a two-lane
//! weaving ramp.
//!
//! Every solver is generic over [`Scalar`], so the same code runs on `f32`,
//! `f64` and exact rationals. The aliases at the crate root fix `f64`; the
//! [`exact`] module fixes [`Rational`].

// `!(a < b)` rejects NaN where `a >= b` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod error;
pub mod model;
mod optim;
pub mod scalar;
pub mod social;
pub mod stackelberg;
pub mod svo;
pub mod sweep;
pub mod wardrop;

pub use calibration::{
    calibrate, count_satisfied, equilibrium_residual, mper, normalize, CalibrationOptions,
    CalibrationResult,
};
pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub use model::{
    affine_reduce, eval_costs, social_cost, social_quadratic, validate_flow_config,
};
pub use social::{admissible, gamma, solve_social_optimum, ue_so_gap};
pub use stackelberg::{
    follower_residuals, hdv_best_response, penetration_thresholds, solve_closed, solve_numeric,
    sweep_penetration, Regime,
};
pub use svo::{
    check_heterogeneous, chi, plateau_free, plateau_intervals, population_shares,
    solve_heterogeneous, svo_transform, sweep_heterogeneous, thresholds, VehicleClass,
};
pub use sweep::{penetration_grid, validate_grid};
pub use wardrop::{check_wardrop, phi, solve_hdv, EquilibriumCase};

/// Exact rational scalar.
pub type Rational = num_rational::Ratio<i128>;

pub type CostCoefficients = model::CostCoefficients<f64>;
pub type FlowConfig = model::FlowConfig<f64>;
pub type RampConfig = model::RampConfig<f64>;
pub type FlowDistribution = model::FlowDistribution<f64>;
pub type AffineCoefficients = model::AffineCoefficients<f64>;
pub type LaneCosts = model::LaneCosts<f64>;
pub type SocialQuadratic = model::SocialQuadratic<f64>;
pub type HdvEquilibrium = wardrop::HdvEquilibrium<f64>;
pub type SocialOptimum = social::SocialOptimum<f64>;
pub type UeSoGap = social::UeSoGap<f64>;
pub type Thresholds = stackelberg::Thresholds<f64>;
pub type StackelbergSolution = stackelberg::StackelbergSolution<f64>;
pub type StackelbergPoint = stackelberg::StackelbergPoint<f64>;
pub type Orientation = svo::Orientation<f64>;
pub type VehicleType = svo::VehicleType<f64>;
pub type Population = svo::Population<f64>;
pub type TypedAffine = svo::TypedAffine<f64>;
pub type HeteroEquilibrium = svo::HeteroEquilibrium<f64>;
pub type PlateauInterval = svo::PlateauInterval<f64>;
pub type RawFlows = calibration::RawFlows<f64>;
pub type Observation = calibration::Observation<f64>;

/// The same types over [`Rational`].
pub mod exact {
    use super::Rational;
    use crate::{model, social, stackelberg, svo, wardrop};

    pub type CostCoefficients = model::CostCoefficients<Rational>;
    pub type FlowConfig = model::FlowConfig<Rational>;
    pub type RampConfig = model::RampConfig<Rational>;
    pub type FlowDistribution = model::FlowDistribution<Rational>;
    pub type HdvEquilibrium = wardrop::HdvEquilibrium<Rational>;
    pub type SocialOptimum = social::SocialOptimum<Rational>;
    pub type Thresholds = stackelberg::Thresholds<Rational>;
    pub type StackelbergSolution = stackelberg::StackelbergSolution<Rational>;
    pub type Orientation = svo::Orientation<Rational>;
    pub type VehicleType = svo::VehicleType<Rational>;
    pub type Population = svo::Population<Rational>;
    pub type HeteroEquilibrium = svo::HeteroEquilibrium<Rational>;
    pub type PlateauInterval = svo::PlateauInterval<Rational>;
}
