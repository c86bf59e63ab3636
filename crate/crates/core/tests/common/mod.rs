//! Reference implementations written straight from the cost definitions,
//! sharing no code with the library's affine reduction.

#![allow(dead_code)]

use rand::Rng;
use weave_core::{CostCoefficients, FlowConfig, RampConfig};

pub struct Literal {
    pub c: CostCoefficients,
    pub n0: f64,
    pub ne: f64,
    pub ns: f64,
}

impl Literal {
    pub fn new(cfg: &RampConfig) -> Self {
        let n = cfg.flows();
        Literal {
            c: *cfg.coeffs(),
            n0: n.n0_enter(),
            ne: n.n2_exit(),
            ns: n.n2_s(),
        }
    }

    pub fn j1s(&self, x: f64) -> f64 {
        let c = &self.c;
        c.c1_t * (c.alpha * x + c.beta * self.ne + self.n0)
            + c.c1_m * (c.omega * x * self.ne + x * self.n0)
    }

    pub fn j1b(&self, x: f64) -> f64 {
        let c = &self.c;
        let xb = 1.0 - x;
        c.c2_t * (c.gamma * xb + self.ns) + c.c2_m * (c.rho * xb * self.ns + c.delta * xb * self.ne)
    }

    pub fn j2s(&self, x: f64) -> f64 {
        let c = &self.c;
        let xb = 1.0 - x;
        c.c2_t * (c.gamma * xb + self.ns) + c.c2_m * xb * self.ns
    }

    pub fn j2exit(&self, x: f64) -> f64 {
        let c = &self.c;
        let xb = 1.0 - x;
        c.c1_t * (c.alpha * x + c.beta * self.ne + c.omega * self.n0)
            + c.c1_m * (x * self.n0 + x * self.ne)
            + c.c2_m * c.delta * xb * self.ne
    }

    pub fn j0enter(&self, x: f64) -> f64 {
        let c = &self.c;
        c.c1_t * (c.alpha * x + c.beta * self.ne + c.omega * self.n0) + c.c1_m * (x * self.n0 + x * self.ne)
    }

    pub fn j_soc(&self, x: f64) -> f64 {
        x * self.j1s(x)
            + (1.0 - x) * self.j1b(x)
            + self.ns * self.j2s(x)
            + self.ne * self.j2exit(x)
            + self.n0 * self.j0enter(x)
    }

    /// Central difference of the total delay.
    pub fn marginal(&self, x: f64, h: f64) -> f64 {
        (self.j_soc(x + h) - self.j_soc(x - h)) / (2.0 * h)
    }
}

/// Root of `f` on `[lo, hi]` for increasing `f`, clamped when no sign
/// change exists.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if f(lo) >= 0.0 {
        return lo;
    }
    if f(hi) <= 0.0 {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// Selfish HDV equilibrium share by bisection on `J1s - J1b`.
pub fn hdv_bisection(cfg: &RampConfig) -> f64 {
    let l = Literal::new(cfg);
    bisect_increasing(|x| l.j1s(x) - l.j1b(x), 0.0, 1.0)
}

/// Minimiser of the total delay on a uniform grid of the given step.
pub fn social_grid_argmin(cfg: &RampConfig, step: f64) -> f64 {
    let l = Literal::new(cfg);
    let n = (1.0 / step).round() as usize;
    let mut best = (0.0, l.j_soc(0.0));
    for i in 1..=n {
        let x = i as f64 / n as f64;
        let j = l.j_soc(x);
        if j < best.1 {
            best = (x, j);
        }
    }
    best.0
}

/// HDV share given CAV steadfast mass `m` and penetration `p`, by bisection.
pub fn follower_bisection(cfg: &RampConfig, p: f64, m: f64) -> f64 {
    let l = Literal::new(cfg);
    bisect_increasing(|y| l.j1s(m + y) - l.j1b(m + y), 0.0, 1.0 - p)
}

/// Best total delay over a `q_s` grid, each follower response by bisection.
pub fn leader_grid_min(cfg: &RampConfig, p: f64, steps: usize) -> f64 {
    let l = Literal::new(cfg);
    (0..=steps)
        .map(|i| {
            let q = i as f64 / steps as f64;
            let m = p * q;
            l.j_soc((m + follower_bisection(cfg, p, m)).min(1.0))
        })
        .fold(f64::INFINITY, f64::min)
}

/// SVO-weighted steadfast minus bypass cost, with the marginal social term
/// taken by central differences.
pub fn typed_gap(l: &Literal, theta: f64, x: f64) -> f64 {
    let h = 1e-6;
    let x = x.clamp(h, 1.0 - h);
    theta.cos() * (l.j1s(x) - l.j1b(x)) + theta.sin() * l.marginal(x, h)
}

/// Aggregate heterogeneous equilibrium share by scanning a grid for the
/// first point where the mass of types preferring to stay no longer
/// exceeds it. `types` holds `(theta, population share)`.
pub fn hetero_scan(cfg: &RampConfig, types: &[(f64, f64)], step: f64) -> f64 {
    let l = Literal::new(cfg);
    let n = (1.0 / step).round() as usize;
    for i in 0..=n {
        let x = i as f64 / n as f64;
        let staying: f64 = types
            .iter()
            .filter(|(theta, _)| typed_gap(&l, *theta, x) < 0.0)
            .map(|(_, w)| w)
            .sum();
        if staying <= x + 1e-12 {
            return x;
        }
    }
    1.0
}

/// Uniform point on the probability simplex.
pub fn random_flows(rng: &mut impl Rng) -> FlowConfig {
    let (a, b): (f64, f64) = (rng.gen(), rng.gen());
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let n0 = lo;
    let ne = hi - lo;
    FlowConfig::new(n0, ne, 1.0 - n0 - ne).unwrap()
}

/// Flows uniform on the simplex, coefficients uniform in `[0.1, 5]`.
pub fn random_config(rng: &mut impl Rng) -> RampConfig {
    let coeffs = CostCoefficients::from_array(std::array::from_fn(|_| rng.gen_range(0.1..5.0)));
    RampConfig::new(random_flows(rng), coeffs).unwrap()
}

/// Random configuration with `0 < phi < gamma < 1`.
pub fn random_admissible(rng: &mut impl Rng) -> RampConfig {
    loop {
        let cfg = random_config(rng);
        if weave_core::admissible(&cfg) {
            return cfg;
        }
    }
}

/// Population of the four-CAV-type experiment over a selfish HDV base, as
/// `(class, theta, weight)`.
pub const FOUR_CAV_MIX: [(bool, f64, f64); 5] = [
    (false, 0.0, 1.0),
    (true, std::f64::consts::PI / 5.0, 0.1),
    (true, std::f64::consts::PI / 4.0, 0.2),
    (true, std::f64::consts::PI / 3.0, 0.3),
    (true, std::f64::consts::PI / 2.0, 0.4),
];

pub fn population(spec: &[(bool, f64, f64)]) -> weave_core::Population {
    use weave_core::{Orientation, Population, VehicleClass, VehicleType};
    let types = spec
        .iter()
        .map(|&(cav, theta, w)| {
            let class = if cav { VehicleClass::Cav } else { VehicleClass::Hdv };
            VehicleType::new(class, Orientation::from_angle(theta), w).unwrap()
        })
        .collect();
    Population::new(types).unwrap()
}

/// Demand of the four-CAV-type experiment: 30 entering, 10 exiting from
/// Lane 2 and the 50 through vehicles split evenly, giving 25 on Lane 2.
pub fn four_cav_flows() -> FlowConfig {
    let total = 30.0 + 10.0 + 25.0;
    FlowConfig::new(30.0 / total, 10.0 / total, 25.0 / total).unwrap()
}
