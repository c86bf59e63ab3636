//! Leader–follower control by dedicated altruistic CAVs.
//!
//! The CAV fleet (a share `p` of Lane-1 through traffic) commits to a
//! steadfast proportion `q_s`; HDVs then settle into their selfish
//! equilibrium. Because the follower response is a scalar clamp, the bilevel
//! problem collapses to a one-dimensional search over `q_s`.
//!
//! Two solvers are provided. [`solve_closed`] uses the regime structure
//! directly: total delay is flat while `p <= p1`, falls while `p1 < p < p2`,
//! and sits at the optimum once `p >= p2`. [`solve_numeric`] searches over
//! `q_s` with the follower's residuals as the certificate and serves as an
//! independent check.

use crate::error::{Error, Result};
use crate::model::{eval_costs, social_cost, social_quadratic, FlowDistribution, RampConfig};
use crate::scalar::{Real, Scalar};
use crate::social::gamma;
use crate::sweep::validate_grid;
use crate::wardrop::phi;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Total delay equals the HDV-only reference.
    Plateau,
    /// Total delay strictly below the reference but above the optimum.
    Improving,
    /// Total delay at the system optimum.
    Optimal,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Plateau => "plateau",
            Regime::Improving => "improving",
            Regime::Optimal => "optimal",
        }
    }
}

/// Efficiency threshold `p1` and saturation threshold `p2`.
///
/// `p2` may exceed 1, in which case the optimum is out of reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<T> {
    pub p1: T,
    pub p2: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackelbergSolution<T> {
    pub p: T,
    pub q_s_star: T,
    pub x1s_hdv: T,
    pub x1s_total: T,
    pub j_soc: T,
    pub regime: Regime,
}

impl<T: Scalar> StackelbergSolution<T> {
    pub fn distribution(&self) -> Result<FlowDistribution<T>> {
        let x1s_cav = self.p * self.q_s_star;
        FlowDistribution::new(
            x1s_cav,
            self.p - x1s_cav,
            self.x1s_hdv,
            T::one() - self.p - self.x1s_hdv,
        )
    }

    /// Aggregate CAV delay `p (J1s x1s + J1b x1b)` at the solution.
    pub fn j_cav(&self, cfg: &RampConfig<T>) -> Result<T> {
        let x = self.x1s_total;
        let costs = eval_costs(&cfg.affine(), x)?;
        Ok(self.p * (costs.j1s * x + costs.j1b * (T::one() - x)))
    }
}

/// Follower residuals `h1 = x1s_hdv max(0, J1s - J1b)` and
/// `h2 = x1b_hdv max(0, J1b - J1s)` at the total steadfast share.
pub fn follower_residuals<T: Scalar>(cfg: &RampConfig<T>, p: T, x1s_hdv: T, x1s_total: T) -> Result<(T, T)> {
    let costs = eval_costs(&cfg.affine(), x1s_total)?;
    let gap = costs.j1s - costs.j1b;
    let x1b_hdv = T::one() - p - x1s_hdv;
    Ok((
        x1s_hdv * gap.max_of(T::zero()),
        x1b_hdv * (-gap).max_of(T::zero()),
    ))
}

fn check_unit<T: Scalar>(what: &'static str, v: T) -> Result<()> {
    if !v.is_finite_value() || v < T::zero() || v > T::one() {
        return Err(Error::DomainError {
            what,
            value: v.as_f64(),
        });
    }
    Ok(())
}

/// Both thresholds, for configurations with `0 < phi < 1` and `phi < gamma`.
///
/// This accepts `gamma >= 1` so that ramps whose optimum is unreachable still
/// get a plateau/improving split; [`crate::social::admissible`] is the strict
/// predicate.
pub fn penetration_thresholds<T: Scalar>(cfg: &RampConfig<T>) -> Result<Thresholds<T>> {
    let p1 = phi(cfg)?;
    let p2 = gamma(cfg)?;
    if !(T::zero() < p1 && p1 < T::one() && p1 < p2) {
        return Err(Error::NotAdmissible {
            phi: p1.as_f64(),
            gamma: p2.as_f64(),
        });
    }
    Ok(Thresholds { p1, p2 })
}

/// HDV steadfast share given the CAV allocation: `clamp(phi - p q_s, 0, 1 - p)`.
pub fn hdv_best_response<T: Scalar>(cfg: &RampConfig<T>, p: T, q_s: T) -> Result<T> {
    check_unit("p", p)?;
    check_unit("q_s", q_s)?;
    Ok(best_response_with(phi(cfg)?, p, q_s))
}

fn best_response_with<T: Scalar>(root: T, p: T, q_s: T) -> T {
    (root - p * q_s).clamp_to(T::zero(), T::one() - p)
}

/// Closed-form leader optimum at penetration rate `p`.
///
/// On the plateau (`p <= p1`) every `q_s` with `p q_s <= phi` is optimal; the
/// steadfast-leaning choice `min(1, phi / p)` is reported, and `q_s = 1` at
/// `p = 0`. The boundary point `p = p2` is labelled [`Regime::Optimal`].
pub fn solve_closed<T: Scalar>(cfg: &RampConfig<T>, p: T) -> Result<StackelbergSolution<T>> {
    check_unit("p", p)?;
    let Thresholds { p1, p2 } = penetration_thresholds(cfg)?;
    let (x1s_total, q_s_star, regime) = if p <= p1 {
        let q = if p == T::zero() {
            T::one()
        } else {
            (p1 / p).min_of(T::one())
        };
        (p1, q, Regime::Plateau)
    } else if p < p2 {
        (p, T::one(), Regime::Improving)
    } else {
        (p2, p2 / p, Regime::Optimal)
    };
    let x1s_hdv = (x1s_total - p * q_s_star).clamp_to(T::zero(), T::one() - p);
    Ok(StackelbergSolution {
        p,
        q_s_star,
        x1s_hdv,
        x1s_total,
        j_soc: social_cost(cfg, x1s_total)?,
        regime,
    })
}

const COARSE_POINTS: usize = 64;

/// Golden-section search for a minimiser of a quasiconvex objective on
/// `[lo, hi]`. `worse(a, b)` is true when the objective at `a` exceeds that
/// at `b`. Ties keep the right part, so flat stretches resolve to their
/// right end.
fn golden_section<T: Real>(worse: impl Fn(T, T) -> bool, mut lo: T, mut hi: T, tol: T) -> T {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    while hi - lo > tol {
        if !worse(x2, x1) {
            lo = x1;
            x1 = x2;
            x2 = lo + inv_phi * (hi - lo);
        } else {
            hi = x2;
            x2 = x1;
            x1 = hi - inv_phi * (hi - lo);
        }
    }
    (lo + hi) / T::two()
}

/// Leader optimum by direct search over `q_s`.
///
/// The total share `clamp(phi, p q_s, p q_s + 1 - p)` is nondecreasing in
/// `q_s` and total delay is convex in it, so the objective is quasiconvex:
/// flat where the follower absorbs the leader's move, quadratic elsewhere.
/// The total share is formed by the clamp rather than as a sum so that flat
/// stretches are exactly flat. Objective values are
/// compared through the factored quadratic difference so that the search
/// resolves `q_s` below the square root of machine epsilon. A 64-point scan
/// brackets the minimiser, golden-section refines it to `tol` in `q_s`, and
/// the grid winner and both endpoints are kept as fallbacks. Ties go to the
/// larger `q_s`. Works on any configuration, admissible or not.
pub fn solve_numeric<T: Real>(cfg: &RampConfig<T>, p: T, tol: T) -> Result<StackelbergSolution<T>> {
    check_unit("p", p)?;
    if !(tol > T::zero()) {
        return Err(Error::DomainError {
            what: "tol",
            value: tol.as_f64(),
        });
    }
    let root = phi(cfg)?;
    let quad = social_quadratic(cfg);
    let total = |q: T| root.clamp_to(p * q, p * q + T::one() - p);
    let worse = |a: T, b: T| quad.difference(total(a), total(b)) > T::zero();

    let q_s_star = if p == T::zero() {
        T::one()
    } else {
        let last = T::from_usize_lossy(COARSE_POINTS - 1);
        let grid: Vec<T> = (0..COARSE_POINTS)
            .map(|i| T::from_usize_lossy(i) / last)
            .collect();
        let mut best = 0;
        for (i, &q) in grid.iter().enumerate() {
            if !worse(q, grid[best]) {
                best = i;
            }
        }
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(COARSE_POINTS - 1)];
        let refined = golden_section(worse, lo, hi, tol);

        let mut candidates = [refined, grid[best], T::zero(), T::one()];
        candidates.sort_by(|a, b| b.partial_cmp(a).expect("finite candidates"));
        let mut chosen = candidates[0];
        for &q in &candidates[1..] {
            if worse(chosen, q) {
                chosen = q;
            }
        }
        chosen
    };

    let x1s_total = total(q_s_star).clamp_to(T::zero(), T::one());
    let x1s_hdv = (x1s_total - p * q_s_star).clamp_to(T::zero(), T::one() - p);
    let (h1, h2) = follower_residuals(cfg, p, x1s_hdv, x1s_total)?;
    let bound = T::tolerance(1e-8);
    if h1 > bound || h2 > bound {
        return Err(Error::ToleranceNotMet {
            h1: h1.as_f64(),
            h2: h2.as_f64(),
        });
    }

    let near = T::tolerance(1e-9);
    let unit = |v: T| v.clamp_to(T::zero(), T::one());
    let regime = if (x1s_total - unit(root)).abs() <= near {
        Regime::Plateau
    } else if (x1s_total - unit(gamma(cfg)?)).abs() <= near {
        Regime::Optimal
    } else {
        Regime::Improving
    };
    Ok(StackelbergSolution {
        p,
        q_s_star,
        x1s_hdv,
        x1s_total,
        j_soc: social_cost(cfg, x1s_total)?,
        regime,
    })
}

/// One sweep sample: the closed-form solution plus the CAV delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackelbergPoint<T> {
    pub solution: StackelbergSolution<T>,
    pub j_cav: T,
}

/// Closed-form solutions over a strictly ascending grid in `[0, 1]`.
pub fn sweep_penetration<T: Scalar>(cfg: &RampConfig<T>, p_grid: &[T]) -> Result<Vec<StackelbergPoint<T>>> {
    validate_grid(p_grid)?;
    p_grid
        .iter()
        .map(|&p| {
            let solution = solve_closed(cfg, p)?;
            Ok(StackelbergPoint {
                j_cav: solution.j_cav(cfg)?,
                solution,
            })
        })
        .collect()
}
