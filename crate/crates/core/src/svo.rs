//! Heterogeneous populations with social value orientation (SVO).
//!
//! A type with orientation angle `theta` minimises
//! `cos(theta) * own delay + sin(theta) * marginal social delay`. Each typed
//! Lane-1 cost stays affine in `x1s`, so every type has a single threshold
//! `chi` at which it is indifferent. Types with `chi > x1s` stay, types with
//! `chi < x1s` bypass and at most one type mixes.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{social_cost, RampConfig};
use crate::scalar::{Real, Scalar};
use crate::sweep::validate_grid;

const DISTINCT_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VehicleClass {
    Hdv,
    Cav,
}

impl VehicleClass {
    pub fn label(&self) -> &'static str {
        match self {
            VehicleClass::Hdv => "HDV",
            VehicleClass::Cav => "CAV",
        }
    }
}

/// Orientation as its `(cos, sin)` pair.
///
/// Only the direction matters; `(2, 2)` and `(1, 1)` give the same
/// threshold. Exact scalars have no trigonometry and use [`Orientation::from_weights`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation<T> {
    pub cos: T,
    pub sin: T,
}

impl<T: Scalar> Orientation<T> {
    pub fn from_weights(cos: T, sin: T) -> Self {
        Orientation { cos, sin }
    }

    /// `theta = 0`: own delay only.
    pub fn selfish() -> Self {
        Self::from_weights(T::one(), T::zero())
    }

    /// `theta = pi/2`: marginal social delay only.
    pub fn prosocial() -> Self {
        Self::from_weights(T::zero(), T::one())
    }

    /// `cos + 2 sin`, the common factor of both typed slopes.
    pub fn slope_factor(&self) -> T {
        self.cos + T::two() * self.sin
    }

    pub fn validate(&self, class: VehicleClass) -> Result<()> {
        let err = || Error::AngleOutOfRange {
            class: class.label(),
            cos: self.cos.as_f64(),
            sin: self.sin.as_f64(),
        };
        if !self.cos.is_finite_value() || !self.sin.is_finite_value() {
            return Err(err());
        }
        if !(self.slope_factor() > T::zero()) {
            return Err(err());
        }
        if class == VehicleClass::Cav && (self.cos < T::zero() || self.sin < T::zero()) {
            return Err(err());
        }
        Ok(())
    }
}

impl<T: Real> Orientation<T> {
    pub fn from_angle(theta: T) -> Self {
        Self::from_weights(theta.cos(), theta.sin())
    }

    pub fn angle(&self) -> T {
        self.sin.atan2(self.cos)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleType<T> {
    pub class: VehicleClass,
    pub orientation: Orientation<T>,
    /// Share within its class.
    pub weight: T,
    pub name: Option<String>,
}

impl<T: Scalar> VehicleType<T> {
    pub fn new(class: VehicleClass, orientation: Orientation<T>, weight: T) -> Result<Self> {
        orientation.validate(class)?;
        if !weight.is_finite_value() || !(weight > T::zero()) || weight > T::one() {
            return Err(Error::InvalidWeight(weight.as_f64()));
        }
        Ok(VehicleType {
            class,
            orientation,
            weight,
            name: None,
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The name if set, otherwise `HDV0`, `CAV2` and so on.
    pub fn display_name(&self, index_in_class: usize) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("{}{}", self.class.label(), index_in_class),
        }
    }
}

/// HDV and CAV types. Global type indices run over the HDV list first, then
/// the CAV list.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    hdv: Vec<VehicleType<T>>,
    cav: Vec<VehicleType<T>>,
}

impl<T: Scalar> Population<T> {
    /// Splits `types` by class and validates weights and orientations.
    ///
    /// Threshold distinctness depends on the ramp, so it is checked by the
    /// solvers instead.
    pub fn new(types: Vec<VehicleType<T>>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let (hdv, cav): (Vec<_>, Vec<_>) =
            types.into_iter().partition(|t| t.class == VehicleClass::Hdv);
        for t in hdv.iter().chain(&cav) {
            t.orientation.validate(t.class)?;
            if !t.weight.is_finite_value() || !(t.weight > T::zero()) || t.weight > T::one() {
                return Err(Error::InvalidWeight(t.weight.as_f64()));
            }
        }
        for (class, list) in [(VehicleClass::Hdv, &hdv), (VehicleClass::Cav, &cav)] {
            if list.is_empty() {
                continue;
            }
            let sum = list.iter().fold(T::zero(), |s, t| s + t.weight);
            if (sum - T::one()).abs() > T::tolerance(1e-12) {
                return Err(Error::WeightSum {
                    class: class.label(),
                    sum: sum.as_f64(),
                });
            }
        }
        Ok(Population { hdv, cav })
    }

    pub fn hdv_types(&self) -> &[VehicleType<T>] {
        &self.hdv
    }

    pub fn cav_types(&self) -> &[VehicleType<T>] {
        &self.cav
    }

    pub fn len(&self) -> usize {
        self.hdv.len() + self.cav.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn types(&self) -> impl Iterator<Item = &VehicleType<T>> {
        self.hdv.iter().chain(&self.cav)
    }

    pub fn get(&self, k: usize) -> Option<&VehicleType<T>> {
        self.types().nth(k)
    }

    /// Display name of global type `k`.
    pub fn type_name(&self, k: usize) -> String {
        if k < self.hdv.len() {
            self.hdv[k].display_name(k)
        } else {
            let j = k - self.hdv.len();
            self.cav[j].display_name(j)
        }
    }
}

/// Slope/intercept form of one type's SVO-weighted Lane-1 costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypedAffine<T> {
    pub k1js: T,
    pub b1js: T,
    pub k1jb: T,
    pub b1jb: T,
}

impl<T: Scalar> TypedAffine<T> {
    /// Typed steadfast minus bypass cost at `x1s`.
    pub fn gap(&self, x1s: T) -> T {
        self.k1js * x1s + self.b1js - self.k1jb * (T::one() - x1s) - self.b1jb
    }
}

/// SVO-weighted costs of a type with the given orientation.
pub fn svo_transform<T: Scalar>(cfg: &RampConfig<T>, orientation: Orientation<T>) -> Result<TypedAffine<T>> {
    if !(orientation.slope_factor() > T::zero()) {
        return Err(Error::AngleOutOfRange {
            class: "any",
            cos: orientation.cos.as_f64(),
            sin: orientation.sin.as_f64(),
        });
    }
    let k = cfg.affine();
    let n = cfg.flows();
    let Orientation { cos, sin } = orientation;
    let f = orientation.slope_factor();
    Ok(TypedAffine {
        k1js: f * k.k1s,
        b1js: cos * k.b1s + sin * (k.b1s + n.n2_exit() * k.k2exit + n.n0_enter() * k.k0enter),
        k1jb: f * k.k1b,
        b1jb: cos * k.b1b + sin * (k.b1b + n.n2_s() * k.k2s),
    })
}

/// Indifference threshold of a type, unclamped.
pub fn chi<T: Scalar>(cfg: &RampConfig<T>, orientation: Orientation<T>) -> Result<T> {
    let t = svo_transform(cfg, orientation)?;
    let denom = t.k1js + t.k1jb;
    if denom == T::zero() {
        return Err(Error::DegenerateCosts);
    }
    Ok((t.b1jb + t.k1jb - t.b1js) / denom)
}

/// Population shares `(1 - p) w_h` for HDV types and `p w_c` for CAV types,
/// in global type order.
pub fn population_shares<T: Scalar>(pop: &Population<T>, p: T) -> Vec<T> {
    let hdv = pop.hdv.iter().map(|t| (T::one() - p) * t.weight);
    let cav = pop.cav.iter().map(|t| p * t.weight);
    hdv.chain(cav).collect()
}

/// Thresholds of every type in global order, checked pairwise distinct.
pub fn thresholds<T: Scalar>(cfg: &RampConfig<T>, pop: &Population<T>) -> Result<Vec<T>> {
    let chis = pop
        .types()
        .map(|t| chi(cfg, t.orientation))
        .collect::<Result<Vec<_>>>()?;
    let order = descending(&chis);
    for w in order.windows(2) {
        let gap = chis[w[0]] - chis[w[1]];
        if gap < T::lit(DISTINCT_GAP) {
            return Err(Error::DistinctnessViolated {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
                gap: gap.as_f64(),
            });
        }
    }
    Ok(chis)
}

fn descending<T: Scalar>(chis: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..chis.len()).collect();
    order.sort_by(|&a, &b| chis[b].partial_cmp(&chis[a]).unwrap_or(Ordering::Equal));
    order
}

fn check_rate<T: Scalar>(p: T) -> Result<()> {
    if !p.is_finite_value() || p < T::zero() || p > T::one() {
        return Err(Error::DomainError {
            what: "p",
            value: p.as_f64(),
        });
    }
    Ok(())
}

fn check_classes<T: Scalar>(pop: &Population<T>, p: T) -> Result<()> {
    if pop.cav.is_empty() && p > T::zero() {
        return Err(Error::MissingClass {
            class: "CAV",
            p: p.as_f64(),
        });
    }
    if pop.hdv.is_empty() && p < T::one() {
        return Err(Error::MissingClass {
            class: "HDV",
            p: p.as_f64(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeteroEquilibrium<T> {
    pub p: T,
    pub x1s_star: T,
    /// `w_j(p)` per type, global order.
    pub shares: Vec<T>,
    /// Steadfast share `x1js` per type, global order.
    pub allocations: Vec<T>,
    /// The type playing a mixed strategy, if any.
    pub active_type: Option<usize>,
    pub j_soc: T,
}

/// Unique heterogeneous equilibrium at penetration rate `p`.
///
/// Types are filled in descending threshold order. With `W` the steadfast
/// mass placed so far, a type with `chi <= W` and every later type bypass; a
/// type with `W < chi < W + w` mixes and pins `x1s = chi`; otherwise it is
/// fully steadfast. `chi = W` therefore counts as bypass.
pub fn solve_heterogeneous<T: Scalar>(cfg: &RampConfig<T>, pop: &Population<T>, p: T) -> Result<HeteroEquilibrium<T>> {
    check_rate(p)?;
    check_classes(pop, p)?;
    let chis = thresholds(cfg, pop)?;
    let shares = population_shares(pop, p);
    let mut allocations = vec![T::zero(); shares.len()];
    let mut filled = T::zero();
    let mut x1s_star = None;
    let mut active_type = None;
    for k in descending(&chis) {
        let (c, w) = (chis[k], shares[k]);
        if c <= filled {
            x1s_star = Some(filled);
            break;
        }
        if c < filled + w {
            allocations[k] = c - filled;
            x1s_star = Some(c);
            active_type = Some(k);
            break;
        }
        allocations[k] = w;
        filled = filled + w;
    }
    let x1s_star = x1s_star.unwrap_or(filled).clamp_to(T::zero(), T::one());
    Ok(HeteroEquilibrium {
        p,
        x1s_star,
        shares,
        allocations,
        active_type,
        j_soc: social_cost(cfg, x1s_star)?,
    })
}

/// Complementarity check for a per-type steadfast allocation.
///
/// True iff each allocation lies in `[0, w_j]` and both products
/// `x1js * gap_j` and `(w_j - x1js) * (-gap_j)` are at most `tol`, with typed
/// costs evaluated at the aggregate steadfast share.
pub fn check_heterogeneous<T: Scalar>(
    cfg: &RampConfig<T>,
    pop: &Population<T>,
    p: T,
    allocation: &[T],
    tol: T,
) -> bool {
    if allocation.len() != pop.len() || check_rate(p).is_err() {
        return false;
    }
    let shares = population_shares(pop, p);
    let x1s = allocation.iter().fold(T::zero(), |s, &a| s + a);
    if x1s < -tol || x1s > T::one() + tol {
        return false;
    }
    let x1s = x1s.clamp_to(T::zero(), T::one());
    pop.types().zip(allocation).zip(&shares).all(|((t, &a), &w)| {
        let Ok(typed) = svo_transform(cfg, t.orientation) else {
            return false;
        };
        let gap = typed.gap(x1s);
        a >= -tol && a <= w + tol && a * gap <= tol && (w - a) * (-gap) <= tol
    })
}

/// Range of penetration rates on which type `k` is the mixed type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauInterval<T> {
    pub k: usize,
    pub chi: T,
    pub p_lo: T,
    pub p_hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T: Scalar> PlateauInterval<T> {
    pub fn contains(&self, p: T) -> bool {
        let above = if self.lo_closed { p >= self.p_lo } else { p > self.p_lo };
        let below = if self.hi_closed { p <= self.p_hi } else { p < self.p_hi };
        above && below
    }

    /// Intersection with the closed range `[lo, hi]`, if nonempty.
    pub fn clip(&self, lo: T, hi: T) -> Option<Self> {
        let (p_lo, lo_closed) = if lo > self.p_lo {
            (lo, true)
        } else {
            (self.p_lo, self.lo_closed)
        };
        let (p_hi, hi_closed) = if hi < self.p_hi {
            (hi, true)
        } else {
            (self.p_hi, self.hi_closed)
        };
        let nonempty = p_lo < p_hi || (p_lo == p_hi && lo_closed && hi_closed);
        nonempty.then_some(PlateauInterval {
            p_lo,
            p_hi,
            lo_closed,
            hi_closed,
            ..*self
        })
    }
}

/// Strict half-line `u + v p > 0` as a bound on `p`.
enum HalfLine<T> {
    All,
    Empty,
    Above(T),
    Below(T),
}

fn half_line<T: Scalar>(u: T, v: T) -> HalfLine<T> {
    if v == T::zero() {
        if u > T::zero() {
            HalfLine::All
        } else {
            HalfLine::Empty
        }
    } else if v > T::zero() {
        HalfLine::Above(-u / v)
    } else {
        HalfLine::Below(-u / v)
    }
}

/// Plateau intervals `{p in [0, 1] : 0 < chi_k - W_k(p) < w_k(p)}`, one per
/// type whose set is nonempty, sorted by `p_lo`.
///
/// `W_k(p) = H_k (1 - p) + C_k p`, where `H_k` and `C_k` are the HDV and CAV
/// weights of types with a larger threshold. Both constraints are affine in
/// `p`, so each is a strict half-line and the interval is their intersection
/// with `[0, 1]`. Ends at 0 or 1 are closed; interior ends are open.
pub fn plateau_intervals<T: Scalar>(cfg: &RampConfig<T>, pop: &Population<T>) -> Result<Vec<PlateauInterval<T>>> {
    let chis = thresholds(cfg, pop)?;
    let types: Vec<&VehicleType<T>> = pop.types().collect();
    let mut out = Vec::new();
    for (k, t) in types.iter().enumerate() {
        let c = chis[k];
        let (mut h, mut cav) = (T::zero(), T::zero());
        for (j, other) in types.iter().enumerate() {
            if chis[j] > c {
                match other.class {
                    VehicleClass::Hdv => h = h + other.weight,
                    VehicleClass::Cav => cav = cav + other.weight,
                }
            }
        }
        // chi - W > 0 and W + w - chi > 0.
        let lower = half_line(c - h, h - cav);
        let upper = match t.class {
            VehicleClass::Hdv => half_line(h + t.weight - c, cav - h - t.weight),
            VehicleClass::Cav => half_line(h - c, cav + t.weight - h),
        };
        let (mut p_lo, mut lo_closed) = (T::zero(), true);
        let (mut p_hi, mut hi_closed) = (T::one(), true);
        let mut empty = false;
        for bound in [lower, upper] {
            match bound {
                HalfLine::All => {}
                HalfLine::Empty => empty = true,
                HalfLine::Above(b) => {
                    if b >= p_lo {
                        p_lo = b;
                        lo_closed = false;
                    }
                }
                HalfLine::Below(b) => {
                    if b <= p_hi {
                        p_hi = b;
                        hi_closed = false;
                    }
                }
            }
        }
        if !empty && p_lo < p_hi {
            out.push(PlateauInterval {
                k,
                chi: c,
                p_lo,
                p_hi,
                lo_closed,
                hi_closed,
            });
        }
    }
    out.sort_by(|a, b| a.p_lo.partial_cmp(&b.p_lo).unwrap_or(Ordering::Equal));
    Ok(out)
}

/// Whether `[p_lo, p_hi]` avoids every plateau; otherwise the overlapping
/// pieces.
pub fn plateau_free<T: Scalar>(
    cfg: &RampConfig<T>,
    pop: &Population<T>,
    p_lo: T,
    p_hi: T,
) -> Result<(bool, Vec<PlateauInterval<T>>)> {
    check_rate(p_lo)?;
    check_rate(p_hi)?;
    if !(p_lo < p_hi) {
        return Err(Error::DomainError {
            what: "p_hi - p_lo",
            value: (p_hi - p_lo).as_f64(),
        });
    }
    let blocking: Vec<_> = plateau_intervals(cfg, pop)?
        .iter()
        .filter_map(|i| i.clip(p_lo, p_hi))
        .collect();
    Ok((blocking.is_empty(), blocking))
}

/// Heterogeneous equilibria over a strictly ascending grid in `[0, 1]`.
pub fn sweep_heterogeneous<T: Scalar>(
    cfg: &RampConfig<T>,
    pop: &Population<T>,
    p_grid: &[T],
) -> Result<Vec<HeteroEquilibrium<T>>> {
    validate_grid(p_grid)?;
    p_grid
        .iter()
        .map(|&p| solve_heterogeneous(cfg, pop, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FlowConfig;
    use crate::social::gamma;
    use crate::stackelberg::solve_closed;
    use crate::wardrop::{phi, solve_hdv};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn third() -> RampConfig<f64> {
        let t = 1.0 / 3.0;
        RampConfig::calibrated(FlowConfig::new(t, t, t).unwrap())
    }

    fn ty(class: VehicleClass, theta: f64, w: f64) -> VehicleType<f64> {
        VehicleType::new(class, Orientation::from_angle(theta), w).unwrap()
    }

    fn two_type() -> Population<f64> {
        Population::new(vec![
            ty(VehicleClass::Hdv, 0.0, 1.0),
            ty(VehicleClass::Cav, FRAC_PI_2, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn angle_premise() {
        let o = Orientation::from_angle(-0.3_f64);
        assert!(o.validate(VehicleClass::Hdv).is_ok());
        assert!(o.validate(VehicleClass::Cav).is_err());
        let bad = Orientation::from_angle(-1.0_f64);
        assert!(bad.slope_factor() < 0.0);
        assert!(matches!(
            VehicleType::new(VehicleClass::Hdv, bad, 1.0),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(svo_transform(&third(), bad).is_err());
        assert!(VehicleType::new(VehicleClass::Cav, Orientation::from_angle(2.0), 1.0).is_err());
    }

    #[test]
    fn population_validation() {
        assert_eq!(Population::<f64>::new(vec![]), Err(Error::EmptyPopulation));
        let r = Population::new(vec![
            ty(VehicleClass::Hdv, 0.0, 0.5),
            ty(VehicleClass::Hdv, 0.3, 0.4),
        ]);
        assert!(matches!(r, Err(Error::WeightSum { class: "HDV", .. })));
        assert!(VehicleType::new(VehicleClass::Hdv, Orientation::selfish(), 0.0).is_err());
        assert!(VehicleType::new(VehicleClass::Hdv, Orientation::selfish(), 1.5).is_err());
    }

    #[test]
    fn transform_at_zero_is_base() {
        let cfg = third();
        let t = svo_transform(&cfg, Orientation::selfish()).unwrap();
        let k = cfg.affine();
        assert_eq!((t.k1js, t.b1js, t.k1jb, t.b1jb), (k.k1s, k.b1s, k.k1b, k.b1b));
    }

    #[test]
    fn transform_at_right_angle_doubles_slope() {
        let cfg = third();
        let t = svo_transform(&cfg, Orientation::prosocial()).unwrap();
        assert!((t.k1js - 3.843_333_333).abs() < 1e-8);
        assert!((t.k1js - 2.0 * cfg.affine().k1s).abs() < 1e-15);
    }

    #[test]
    fn thresholds_at_endpoints() {
        let cfg = third();
        assert!((chi(&cfg, Orientation::selfish()).unwrap() - phi(&cfg).unwrap()).abs() < 1e-15);
        let g = chi(&cfg, Orientation::from_angle(FRAC_PI_2)).unwrap();
        assert!((g - gamma(&cfg).unwrap()).abs() < 1e-12);
        let mid = chi(&cfg, Orientation::from_angle(FRAC_PI_4)).unwrap();
        assert!(phi(&cfg).unwrap() < mid && mid < g);
    }

    #[test]
    fn shares_examples() {
        let pop = Population::new(vec![
            ty(VehicleClass::Hdv, 0.0, 1.0),
            ty(VehicleClass::Cav, 0.2, 0.1),
            ty(VehicleClass::Cav, 0.4, 0.2),
            ty(VehicleClass::Cav, 0.6, 0.3),
            ty(VehicleClass::Cav, 0.8, 0.4),
        ])
        .unwrap();
        let s = population_shares(&pop, 0.4);
        let expect = [0.6, 0.04, 0.08, 0.12, 0.16];
        for (a, b) in s.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(population_shares(&pop, 0.0)[1..].iter().all(|&w| w == 0.0));
        assert_eq!(population_shares(&pop, 1.0)[0], 0.0);
    }

    #[test]
    fn two_type_matches_stackelberg() {
        let cfg = third();
        let pop = two_type();
        let e = solve_heterogeneous(&cfg, &pop, 0.3).unwrap();
        assert_eq!(e.active_type, Some(0));
        assert!((e.x1s_star - 0.594_203_750_5).abs() < 1e-9);
        let e = solve_heterogeneous(&cfg, &pop, 0.61).unwrap();
        assert_eq!(e.active_type, None);
        assert!((e.x1s_star - 0.61).abs() < 1e-15);
        let e = solve_heterogeneous(&cfg, &pop, 0.8).unwrap();
        assert_eq!(e.active_type, Some(1));
        assert!((e.x1s_star - 0.624_870_182).abs() < 1e-9);
        for p in [0.0, 0.3, 0.61, 0.8, 1.0] {
            let e = solve_heterogeneous(&cfg, &pop, p).unwrap();
            let s = solve_closed(&cfg, p).unwrap();
            assert!((e.j_soc - s.j_soc).abs() < 1e-9);
            assert!(check_heterogeneous(&cfg, &pop, p, &e.allocations, 1e-9));
        }
    }

    #[test]
    fn single_selfish_type_is_hdv_equilibrium() {
        let cfg = third();
        let pop = Population::new(vec![ty(VehicleClass::Hdv, 0.0, 1.0)]).unwrap();
        let e = solve_heterogeneous(&cfg, &pop, 0.0).unwrap();
        assert_eq!(e.x1s_star, solve_hdv(&cfg).unwrap().x1s_star);
        assert!(matches!(
            solve_heterogeneous(&cfg, &pop, 0.2),
            Err(Error::MissingClass { class: "CAV", .. })
        ));
    }

    #[test]
    fn colliding_thresholds_rejected() {
        let pop = Population::new(vec![
            ty(VehicleClass::Hdv, 0.0, 1.0),
            ty(VehicleClass::Cav, 0.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            solve_heterogeneous(&third(), &pop, 0.5),
            Err(Error::DistinctnessViolated { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn check_detects_perturbation() {
        let cfg = third();
        let pop = two_type();
        let e = solve_heterogeneous(&cfg, &pop, 0.3).unwrap();
        let mut a = e.allocations.clone();
        a[0] -= 0.05;
        assert!(!check_heterogeneous(&cfg, &pop, 0.3, &a, 1e-9));
        // Everyone steadfast although the selfish threshold sits below x1s = 1.
        assert!(!check_heterogeneous(&cfg, &pop, 0.3, &e.shares, 1e-9));
        assert!(!check_heterogeneous(&cfg, &pop, 0.3, &a[..1], 1e-9));
    }

    #[test]
    fn two_type_intervals() {
        let cfg = third();
        let iv = plateau_intervals(&cfg, &two_type()).unwrap();
        assert_eq!(iv.len(), 2);
        let (h, c) = (iv[0], iv[1]);
        assert_eq!((h.k, h.p_lo, h.lo_closed, h.hi_closed), (0, 0.0, true, false));
        assert!((h.p_hi - phi(&cfg).unwrap()).abs() < 1e-15);
        assert_eq!((c.k, c.p_hi, c.lo_closed, c.hi_closed), (1, 1.0, false, true));
        assert!((c.p_lo - gamma(&cfg).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn free_ranges() {
        let cfg = third();
        let pop = two_type();
        let (free, blocking) = plateau_free(&cfg, &pop, 0.595, 0.624).unwrap();
        assert!(free && blocking.is_empty());
        let (free, blocking) = plateau_free(&cfg, &pop, 0.5, 0.7).unwrap();
        assert!(!free);
        assert_eq!(blocking.len(), 2);
        assert_eq!(blocking[0].p_lo, 0.5);
        assert_eq!(blocking[1].p_hi, 0.7);
        assert!(plateau_free(&cfg, &pop, 0.7, 0.5).is_err());
    }

    #[test]
    fn balanced_tails_give_one_sided_interval() {
        // For the CAV type at 0.3 rad the stronger-threshold mass is split
        // evenly, so W_k does not depend on p.
        let cfg = third();
        let pop = Population::new(vec![
            ty(VehicleClass::Hdv, 0.0, 0.5),
            ty(VehicleClass::Hdv, 1.2, 0.5),
            ty(VehicleClass::Cav, FRAC_PI_2, 0.5),
            ty(VehicleClass::Cav, 0.3, 0.5),
        ])
        .unwrap();
        let chis = thresholds(&cfg, &pop).unwrap();
        let iv = plateau_intervals(&cfg, &pop).unwrap();
        let k = iv.iter().find(|i| i.k == 3).unwrap();
        assert_eq!((k.p_hi, k.hi_closed, k.lo_closed), (1.0, true, false));
        assert!((k.p_lo - 2.0 * (chis[3] - 0.5)).abs() < 1e-12);
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            let e = solve_heterogeneous(&cfg, &pop, p).unwrap();
            if (p - k.p_lo).abs() > 1e-12 {
                assert_eq!(e.active_type == Some(3), k.contains(p), "p = {p}");
            }
        }
    }

    #[test]
    fn exact_two_type_intervals() {
        use num_rational::Ratio;
        type Q = Ratio<i128>;
        let t = Q::new(1, 3);
        let cfg = RampConfig::<Q>::calibrated(FlowConfig::new(t, t, t).unwrap());
        let pop = Population::new(vec![
            VehicleType::new(VehicleClass::Hdv, Orientation::selfish(), Q::from_integer(1)).unwrap(),
            VehicleType::new(VehicleClass::Cav, Orientation::prosocial(), Q::from_integer(1)).unwrap(),
        ])
        .unwrap();
        let iv = plateau_intervals(&cfg, &pop).unwrap();
        assert_eq!(iv[0].p_hi, phi(&cfg).unwrap());
        assert_eq!(iv[1].p_lo, gamma(&cfg).unwrap());
        let e = solve_heterogeneous(&cfg, &pop, Q::new(9, 10)).unwrap();
        assert_eq!(e.x1s_star, gamma(&cfg).unwrap());
    }
}
