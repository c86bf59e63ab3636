//! Domain types and the five behaviour-cost functions of a two-lane weaving
//! ramp, together with their slope/intercept reduction and the quadratic form
//! of the total system delay.
//!
//! Notation follows the usual lane numbering: Lane 0 is the on-ramp, Lane 1
//! the outer mainline lane whose through vehicles choose between staying
//! (*steadfast*) and changing to Lane 2 (*bypass*), Lane 2 the inner lane.
//! All delays are dimensionless model units.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Calibratable cost coefficients: unit traversing/merging costs per lane and
/// the six interaction weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostCoefficients<T> {
    pub c1_t: T,
    pub c2_t: T,
    pub c1_m: T,
    pub c2_m: T,
    pub alpha: T,
    pub beta: T,
    pub omega: T,
    pub gamma: T,
    pub rho: T,
    pub delta: T,
}

impl<T: Scalar> CostCoefficients<T> {
    pub const FIELD_NAMES: [&'static str; 10] = [
        "c1_t", "c2_t", "c1_m", "c2_m", "alpha", "beta", "omega", "gamma", "rho", "delta",
    ];

    /// Coefficients fitted to the reference simulation data: unit costs of 1
    /// and weights alpha = 1.255, beta = 1.138, omega = 1, gamma = 2.384,
    /// rho = 1, delta = 3.094.
    pub fn calibrated() -> Self {
        let one = T::one();
        CostCoefficients {
            c1_t: one,
            c2_t: one,
            c1_m: one,
            c2_m: one,
            alpha: T::lit(1.255),
            beta: T::lit(1.138),
            omega: one,
            gamma: T::lit(2.384),
            rho: one,
            delta: T::lit(3.094),
        }
    }

    pub fn zero() -> Self {
        Self::from_array([T::zero(); 10])
    }

    pub fn to_array(&self) -> [T; 10] {
        [
            self.c1_t, self.c2_t, self.c1_m, self.c2_m, self.alpha, self.beta, self.omega,
            self.gamma, self.rho, self.delta,
        ]
    }

    pub fn from_array(v: [T; 10]) -> Self {
        CostCoefficients {
            c1_t: v[0],
            c2_t: v[1],
            c1_m: v[2],
            c2_m: v[3],
            alpha: v[4],
            beta: v[5],
            omega: v[6],
            gamma: v[7],
            rho: v[8],
            delta: v[9],
        }
    }

    /// Multiplies the four unit costs by `factor`. Every delay term carries
    /// exactly one unit cost, so all delays scale by `factor`.
    pub fn with_unit_costs_scaled(&self, factor: T) -> Self {
        CostCoefficients {
            c1_t: self.c1_t * factor,
            c2_t: self.c2_t * factor,
            c1_m: self.c1_m * factor,
            c2_m: self.c2_m * factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in Self::FIELD_NAMES.iter().zip(self.to_array()) {
            if !value.is_finite_value() || value < T::zero() {
                return Err(Error::InvalidCoefficient {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Default for CostCoefficients<T> {
    fn default() -> Self {
        Self::calibrated()
    }
}

/// Exogenous normalized flows `(n0_enter, n2_exit, n2_s)` on the simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig<T> {
    n0_enter: T,
    n2_exit: T,
    n2_s: T,
}

impl<T: Scalar> FlowConfig<T> {
    /// Validates and wraps the three ratios. Values are stored as given;
    /// near-simplex input is rejected, never rescaled.
    pub fn new(n0_enter: T, n2_exit: T, n2_s: T) -> Result<Self> {
        let named = [("n0_enter", n0_enter), ("n2_exit", n2_exit), ("n2_s", n2_s)];
        for (name, value) in named {
            if !value.is_finite_value() {
                return Err(Error::NonFinite(name));
            }
        }
        for (name, value) in named {
            if value < T::zero() {
                return Err(Error::NegativeFlow {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        let sum = n0_enter + n2_exit + n2_s;
        if (sum - T::one()).abs() > T::tolerance(1e-9) {
            return Err(Error::SimplexViolation { sum: sum.as_f64() });
        }
        Ok(FlowConfig {
            n0_enter,
            n2_exit,
            n2_s,
        })
    }

    pub fn n0_enter(&self) -> T {
        self.n0_enter
    }

    pub fn n2_exit(&self) -> T {
        self.n2_exit
    }

    pub fn n2_s(&self) -> T {
        self.n2_s
    }
}

/// Validates raw exogenous ratios into a [`FlowConfig`].
pub fn validate_flow_config<T: Scalar>(n0_enter: T, n2_exit: T, n2_s: T) -> Result<FlowConfig<T>> {
    FlowConfig::new(n0_enter, n2_exit, n2_s)
}

/// A weaving ramp: exogenous flows plus cost coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampConfig<T> {
    flows: FlowConfig<T>,
    coeffs: CostCoefficients<T>,
}

impl<T: Scalar> RampConfig<T> {
    pub fn new(flows: FlowConfig<T>, coeffs: CostCoefficients<T>) -> Result<Self> {
        coeffs.validate()?;
        Ok(RampConfig { flows, coeffs })
    }

    /// Flows with the calibrated coefficients.
    pub fn calibrated(flows: FlowConfig<T>) -> Self {
        RampConfig {
            flows,
            coeffs: CostCoefficients::calibrated(),
        }
    }

    pub fn flows(&self) -> &FlowConfig<T> {
        &self.flows
    }

    pub fn coeffs(&self) -> &CostCoefficients<T> {
        &self.coeffs
    }

    pub fn with_coeffs(&self, coeffs: CostCoefficients<T>) -> Result<Self> {
        Self::new(self.flows, coeffs)
    }

    pub fn affine(&self) -> AffineCoefficients<T> {
        affine_reduce(self)
    }
}

/// Lane-1 through-flow split into CAV and HDV parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowDistribution<T> {
    pub x1s_cav: T,
    pub x1b_cav: T,
    pub x1s_hdv: T,
    pub x1b_hdv: T,
}

impl<T: Scalar> FlowDistribution<T> {
    pub fn new(x1s_cav: T, x1b_cav: T, x1s_hdv: T, x1b_hdv: T) -> Result<Self> {
        let parts = [
            ("x1s_cav", x1s_cav),
            ("x1b_cav", x1b_cav),
            ("x1s_hdv", x1s_hdv),
            ("x1b_hdv", x1b_hdv),
        ];
        for (what, value) in parts {
            if !value.is_finite_value() {
                return Err(Error::NonFinite(what));
            }
            if value < T::zero() || value > T::one() {
                return Err(Error::DomainError {
                    what,
                    value: value.as_f64(),
                });
            }
        }
        let total = x1s_cav + x1b_cav + x1s_hdv + x1b_hdv;
        if (total - T::one()).abs() > T::tolerance(1e-9) {
            return Err(Error::DomainError {
                what: "total Lane-1 through share",
                value: total.as_f64(),
            });
        }
        Ok(FlowDistribution {
            x1s_cav,
            x1b_cav,
            x1s_hdv,
            x1b_hdv,
        })
    }

    /// HDV-only distribution (`p = 0`) with steadfast share `x1s`.
    pub fn hdv_only(x1s: T) -> Result<Self> {
        Self::new(T::zero(), T::zero(), x1s, T::one() - x1s)
    }

    /// CAV penetration rate.
    pub fn p(&self) -> T {
        self.x1s_cav + self.x1b_cav
    }

    pub fn x1s(&self) -> T {
        self.x1s_cav + self.x1s_hdv
    }

    pub fn x1b(&self) -> T {
        T::one() - self.x1s()
    }
}

/// Slope/intercept form of the five behaviour costs.
///
/// `J1s`, `J2exit` and `J0enter` are affine in `x1s`; `J1b` and `J2s` are
/// affine in `x1b = 1 - x1s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCoefficients<T> {
    pub k1s: T,
    pub b1s: T,
    pub k1b: T,
    pub b1b: T,
    pub k2s: T,
    pub b2s: T,
    pub k2exit: T,
    pub b2exit: T,
    pub k0enter: T,
    pub b0enter: T,
}

/// Delays of the five behaviours at one flow state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaneCosts<T> {
    pub j1s: T,
    pub j1b: T,
    pub j2s: T,
    pub j2exit: T,
    pub j0enter: T,
}

/// Collects every cost into slope/intercept form.
///
/// Each cost is transcribed term by term: the Lane-1 steadfast cost carries
/// a bare `n0_enter` traversing term while the exiting and entering costs
/// carry `omega * n0_enter`. The `delta` merge term of the exiting cost is
/// written in `x1b`, so it contributes `-c2_m * delta * n2_exit` to the slope
/// in `x1s` and `+c2_m * delta * n2_exit` to the intercept.
pub fn affine_reduce<T: Scalar>(cfg: &RampConfig<T>) -> AffineCoefficients<T> {
    let c = cfg.coeffs;
    let n0 = cfg.flows.n0_enter;
    let ne = cfg.flows.n2_exit;
    let ns = cfg.flows.n2_s;

    let lane1_traverse = c.c1_t * c.alpha + c.c1_m * (n0 + ne);
    let lane1_base = c.c1_t * (c.beta * ne + c.omega * n0);
    let delta_merge = c.c2_m * c.delta * ne;

    AffineCoefficients {
        k1s: c.c1_t * c.alpha + c.c1_m * (c.omega * ne + n0),
        b1s: c.c1_t * (c.beta * ne + n0),
        k1b: c.c2_t * c.gamma + c.c2_m * (c.rho * ns + c.delta * ne),
        b1b: c.c2_t * ns,
        k2s: c.c2_t * c.gamma + c.c2_m * ns,
        b2s: c.c2_t * ns,
        k2exit: lane1_traverse - delta_merge,
        b2exit: lane1_base + delta_merge,
        k0enter: lane1_traverse,
        b0enter: lane1_base,
    }
}

fn check_share<T: Scalar>(what: &'static str, x: T) -> Result<()> {
    if !x.is_finite_value() || x < T::zero() || x > T::one() {
        return Err(Error::DomainError {
            what,
            value: x.as_f64(),
        });
    }
    Ok(())
}

impl<T: Scalar> AffineCoefficients<T> {
    /// Lane-1 steadfast minus bypass cost at `x1s`; no domain check.
    pub fn lane1_gap(&self, x1s: T) -> T {
        self.k1s * x1s + self.b1s - self.k1b * (T::one() - x1s) - self.b1b
    }

    fn costs_unchecked(&self, x1s: T) -> LaneCosts<T> {
        let x1b = T::one() - x1s;
        LaneCosts {
            j1s: self.k1s * x1s + self.b1s,
            j1b: self.k1b * x1b + self.b1b,
            j2s: self.k2s * x1b + self.b2s,
            j2exit: self.k2exit * x1s + self.b2exit,
            j0enter: self.k0enter * x1s + self.b0enter,
        }
    }
}

/// Evaluates the five behaviour costs at total steadfast share `x1s`.
pub fn eval_costs<T: Scalar>(aff: &AffineCoefficients<T>, x1s: T) -> Result<LaneCosts<T>> {
    check_share("x1s", x1s)?;
    Ok(aff.costs_unchecked(x1s))
}

/// Total delay of all vehicles in the weaving section at steadfast share `x1s`.
pub fn social_cost<T: Scalar>(cfg: &RampConfig<T>, x1s: T) -> Result<T> {
    let costs = eval_costs(&cfg.affine(), x1s)?;
    let n = cfg.flows;
    Ok(x1s * costs.j1s
        + (T::one() - x1s) * costs.j1b
        + n.n2_s * costs.j2s
        + n.n2_exit * costs.j2exit
        + n.n0_enter * costs.j0enter)
}

/// `J_soc(x1s) = a x1s^2 + b x1s + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocialQuadratic<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> SocialQuadratic<T> {
    pub fn eval(&self, x: T) -> T {
        (self.a * x + self.b) * x + self.c
    }

    /// `eval(x) - eval(y)` in factored form, free of cancellation near the
    /// vertex.
    pub fn difference(&self, x: T, y: T) -> T {
        (x - y) * (self.a * (x + y) + self.b)
    }

    /// Derivative `2 a x + b`.
    pub fn slope(&self, x: T) -> T {
        T::two() * self.a * x + self.b
    }

    /// Unconstrained minimiser `-b / (2a)`; `None` when `a` is not positive.
    pub fn vertex(&self) -> Option<T> {
        if self.a > T::zero() {
            Some(-self.b / (T::two() * self.a))
        } else {
            None
        }
    }
}

/// Collects powers of `x1s` in the total delay.
///
/// The constant term holds `B_soc = n2_s b2s + n2_exit b2exit + n0_enter b0enter`,
/// the intercepts of the three exogenous costs.
pub fn social_quadratic<T: Scalar>(cfg: &RampConfig<T>) -> SocialQuadratic<T> {
    let k = cfg.affine();
    let n = cfg.flows;
    let b_soc = n.n2_s * k.b2s + n.n2_exit * k.b2exit + n.n0_enter * k.b0enter;
    SocialQuadratic {
        a: k.k1s + k.k1b,
        b: -T::two() * k.k1b + n.n2_exit * k.k2exit + n.n0_enter * k.k0enter + k.b1s
            - n.n2_s * k.k2s
            - k.b1b,
        c: k.k1b + n.n2_s * k.k2s + k.b1b + b_soc,
    }
}
