//! Scenario files: TOML with `[flows]`, `[coefficients]`, `[[population]]`
//! and `[sweep]` sections.

use serde::{Deserialize, Serialize};
use weave_core::{
    penetration_grid, CostCoefficients, FlowConfig, Orientation, Population, RampConfig,
    VehicleClass, VehicleType,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flows: Option<Flows>,
    #[serde(default)]
    pub coefficients: Coefficients,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub population: Vec<TypeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flows {
    pub n0_enter: f64,
    pub n2_exit: f64,
    pub n2_s: f64,
}

/// Any subset of the ten coefficients; the rest take calibrated values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl Coefficients {
    fn fields(&self) -> [Option<f64>; 10] {
        [
            self.c1_t, self.c2_t, self.c1_m, self.c2_m, self.alpha, self.beta, self.omega,
            self.gamma, self.rho, self.delta,
        ]
    }

    pub fn resolve(&self) -> CostCoefficients {
        let defaults = CostCoefficients::calibrated().to_array();
        let mut out = defaults;
        for (o, v) in out.iter_mut().zip(self.fields()) {
            if let Some(v) = v {
                *o = v;
            }
        }
        CostCoefficients::from_array(out)
    }

    /// Every field set explicitly.
    pub fn explicit(c: &CostCoefficients) -> Self {
        let v = c.to_array().map(Some);
        Coefficients {
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
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "HDV", alias = "hdv")]
    Hdv,
    #[serde(rename = "CAV", alias = "cav")]
    Cav,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeEntry {
    pub class: Class,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_degrees: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_radians: Option<f64>,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl TypeEntry {
    pub fn theta(&self, index: usize) -> Result<f64, CliError> {
        match (self.theta_degrees, self.theta_radians) {
            (Some(d), None) => Ok(d.to_radians()),
            (None, Some(r)) => Ok(r),
            _ => Err(CliError::input(format!(
                "population entry {index}: give exactly one of theta_degrees, theta_radians"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            start: 0.0,
            stop: 1.0,
            step: 0.01,
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::input(format!("invalid scenario: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn ramp(&self) -> Result<RampConfig, CliError> {
        let f = self
            .flows
            .ok_or_else(|| CliError::missing("scenario has no [flows] section"))?;
        let flows = FlowConfig::new(f.n0_enter, f.n2_exit, f.n2_s).map_err(CliError::from_input)?;
        RampConfig::new(flows, self.coefficients.resolve()).map_err(CliError::from_input)
    }

    pub fn population(&self) -> Result<Population, CliError> {
        if self.population.is_empty() {
            return Err(CliError::missing("scenario has no [[population]] entries"));
        }
        let types = self
            .population
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let class = match e.class {
                    Class::Hdv => VehicleClass::Hdv,
                    Class::Cav => VehicleClass::Cav,
                };
                let t = VehicleType::new(class, Orientation::from_angle(e.theta(i)?), e.weight)
                    .map_err(CliError::from_input)?;
                Ok(match &e.name {
                    Some(n) => t.named(n.clone()),
                    None => t,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Population::new(types).map_err(CliError::from_input)
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let s = self.sweep.unwrap_or_default();
        penetration_grid(s.start, s.stop, s.step).map_err(CliError::from_input)
    }
}
