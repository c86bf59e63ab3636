//! Fitting cost coefficients to observed lane-choice equilibria.
//!
//! The objective is the sum of squared equilibrium residuals over the
//! dataset. Under the calibrated cost form `omega`, `beta` and `delta` enter
//! the equilibrium condition only through `omega + delta` and
//! `beta - delta`, so at most two of them are identifiable; the default
//! options pin `omega` along with the four unit costs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{eval_costs, CostCoefficients, FlowConfig, RampConfig};
use crate::optim::NelderMead;
use crate::scalar::Scalar;
use crate::wardrop::solve_hdv;

/// Raw flow counts (vehicles per hour).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawFlows<T> {
    pub f0_enter: T,
    pub f2_exit: T,
    pub f2_s: T,
    pub f1_s: T,
    pub f1_b: T,
}

/// One equilibrium sample: exogenous ratios and the observed steadfast share.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<T> {
    pub flows: FlowConfig<T>,
    pub x1s_observed: T,
    pub source: Option<String>,
}

impl<T: Scalar> Observation<T> {
    pub fn new(flows: FlowConfig<T>, x1s_observed: T) -> Result<Self> {
        if !x1s_observed.is_finite_value() || x1s_observed < T::zero() || x1s_observed > T::one() {
            return Err(Error::DomainError {
                what: "x1s_observed",
                value: x1s_observed.as_f64(),
            });
        }
        Ok(Observation {
            flows,
            x1s_observed,
            source: None,
        })
    }

    pub fn from_raw(raw: &RawFlows<T>) -> Result<Self> {
        let (flows, x1s) = normalize(raw)?;
        Self::new(flows, x1s)
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }
}

/// Exogenous ratios over `f0_enter + f2_exit + f2_s` and the steadfast share
/// `f1_s / (f1_s + f1_b)`.
pub fn normalize<T: Scalar>(raw: &RawFlows<T>) -> Result<(FlowConfig<T>, T)> {
    let named = [
        ("f0_enter", raw.f0_enter),
        ("f2_exit", raw.f2_exit),
        ("f2_s", raw.f2_s),
        ("f1_s", raw.f1_s),
        ("f1_b", raw.f1_b),
    ];
    for (name, value) in named {
        if !value.is_finite_value() {
            return Err(Error::NonFinite(name));
        }
        if value < T::zero() {
            return Err(Error::NegativeFlow {
                name,
                value: value.as_f64(),
            });
        }
    }
    let exo = raw.f0_enter + raw.f2_exit + raw.f2_s;
    if exo == T::zero() {
        return Err(Error::ZeroDenominator("f0_enter + f2_exit + f2_s"));
    }
    let through = raw.f1_s + raw.f1_b;
    if through == T::zero() {
        return Err(Error::ZeroDenominator("f1_s + f1_b"));
    }
    let flows = FlowConfig::new(raw.f0_enter / exo, raw.f2_exit / exo, raw.f2_s / exo)?;
    Ok((flows, raw.f1_s / through))
}

/// `x1s max(0, J1s - J1b) + (1 - x1s) max(0, J1b - J1s)`; zero exactly at
/// an HDV equilibrium.
pub fn equilibrium_residual<T: Scalar>(cfg: &RampConfig<T>, x1s: T) -> Result<T> {
    let c = eval_costs(&cfg.affine(), x1s)?;
    let gap = c.j1s - c.j1b;
    Ok(x1s * gap.max_of(T::zero()) + (T::one() - x1s) * (-gap).max_of(T::zero()))
}

/// Mean absolute relative error between observed and predicted steadfast
/// shares, in percent.
pub fn mper<T: Scalar>(dataset: &[Observation<T>], coeffs: &CostCoefficients<T>) -> Result<T> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut total = T::zero();
    for (index, obs) in dataset.iter().enumerate() {
        if obs.x1s_observed == T::zero() {
            return Err(Error::ZeroObservedShare { index });
        }
        let cfg = RampConfig::new(obs.flows, *coeffs)?;
        let predicted = solve_hdv(&cfg)?.x1s_star;
        total = total + ((obs.x1s_observed - predicted) / obs.x1s_observed).abs();
    }
    Ok(total / T::from_usize_lossy(dataset.len()) * T::lit(100.0))
}

/// Number of observations whose residual is at most `tol`.
pub fn count_satisfied<T: Scalar>(dataset: &[Observation<T>], coeffs: &CostCoefficients<T>, tol: T) -> Result<usize> {
    let mut n = 0;
    for obs in dataset {
        let cfg = RampConfig::new(obs.flows, *coeffs)?;
        if equilibrium_residual(&cfg, obs.x1s_observed)? <= tol {
            n += 1;
        }
    }
    Ok(n)
}

/// Sum of squared residuals.
pub fn objective<T: Scalar>(dataset: &[Observation<T>], coeffs: &CostCoefficients<T>) -> Result<T> {
    let mut total = T::zero();
    for obs in dataset {
        let cfg = RampConfig::new(obs.flows, *coeffs)?;
        let r = equilibrium_residual(&cfg, obs.x1s_observed)?;
        total = total + r * r;
    }
    Ok(total)
}

/// Search settings. Field order of `bounds` and `free` follows
/// [`CostCoefficients::FIELD_NAMES`].
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOptions {
    pub bounds: [(f64, f64); 10],
    pub free: [bool; 10],
    /// Maximum objective evaluations over all restarts.
    pub budget: usize,
    /// Local searches per restart cycle; at least 3.
    pub restarts: usize,
    pub seed: u64,
    /// Residual bound for the counting score.
    pub count_tol: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        let mut free = [false; 10];
        // alpha, beta, gamma, rho, delta.
        for i in [4, 5, 7, 8, 9] {
            free[i] = true;
        }
        CalibrationOptions {
            bounds: [(0.0, 10.0); 10],
            free,
            budget: 40_000,
            restarts: 3,
            seed: 0,
            count_tol: 1e-6,
        }
    }
}

impl CalibrationOptions {
    /// Also frees the four unit costs. The fit is then only determined up to
    /// a common scale.
    pub fn with_free_unit_costs(mut self) -> Self {
        for i in 0..4 {
            self.free[i] = true;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub coeffs: CostCoefficients<f64>,
    pub objective: f64,
    /// `None` when some observed share is zero.
    pub mper: Option<f64>,
    pub count_score: usize,
    /// Objective evaluations spent.
    pub iterations: usize,
    pub converged: bool,
}

const CYCLE_IMPROVEMENT: f64 = 1e-10;

/// Minimises the squared-residual objective over the free coefficients.
///
/// Each restart cycle runs one local search from the incumbent and
/// `restarts - 1` from jittered copies of it. The search is converged once
/// a full cycle improves the incumbent by less than `1e-10`. Deterministic
/// for a fixed `seed`.
pub fn calibrate(
    dataset: &[Observation<f64>],
    initial: &CostCoefficients<f64>,
    options: &CalibrationOptions,
) -> Result<CalibrationResult> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let names = CostCoefficients::<f64>::FIELD_NAMES;
    for (i, &(lo, hi)) in options.bounds.iter().enumerate() {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || lo > hi {
            return Err(Error::BoundsInfeasible { name: names[i], lo, hi });
        }
    }
    initial.validate()?;

    let free: Vec<usize> = (0..10).filter(|&i| options.free[i]).collect();
    let lo: Vec<f64> = free.iter().map(|&i| options.bounds[i].0).collect();
    let hi: Vec<f64> = free.iter().map(|&i| options.bounds[i].1).collect();
    let base = initial.to_array();
    let assemble = |x: &[f64]| {
        let mut full = base;
        for (&i, &v) in free.iter().zip(x) {
            full[i] = v;
        }
        CostCoefficients::from_array(full)
    };
    let mut f = |x: &[f64]| objective(dataset, &assemble(x)).unwrap_or(f64::INFINITY);

    let mut best_x: Vec<f64> = free
        .iter()
        .enumerate()
        .map(|(j, &i)| base[i].clamp(lo[j], hi[j]))
        .collect();
    let mut best_f = f(&best_x);
    let mut evals = 1;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let restarts = options.restarts.max(3);
    let mut converged = false;

    while evals < options.budget {
        let before = best_f;
        for r in 0..restarts {
            let start: Vec<f64> = if r == 0 {
                best_x.clone()
            } else {
                best_x
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let jittered = v * (1.0 + rng.gen_range(-0.25..0.25)) + rng.gen_range(0.0..0.05);
                        jittered.clamp(lo[j], hi[j])
                    })
                    .collect()
            };
            let nm = NelderMead {
                lo: &lo,
                hi: &hi,
                max_evals: options.budget.saturating_sub(evals),
                x_tol: 1e-10,
                f_tol: 1e-20,
            };
            let m = nm.minimize(&mut f, &start);
            evals += m.evals;
            if m.f < best_f {
                best_f = m.f;
                best_x = m.x;
            }
            if evals >= options.budget {
                break;
            }
        }
        if before - best_f < CYCLE_IMPROVEMENT {
            converged = true;
            break;
        }
    }

    let coeffs = assemble(&best_x);
    let mper = match mper(dataset, &coeffs) {
        Ok(m) => Some(m),
        Err(Error::ZeroObservedShare { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CalibrationResult {
        coeffs,
        objective: best_f,
        mper,
        count_score: count_satisfied(dataset, &coeffs, options.count_tol)?,
        iterations: evals,
        converged,
    })
}
