//! Box-constrained Nelder–Mead.

/// Outcome of one local search.
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

pub(crate) struct NelderMead<'a> {
    pub lo: &'a [f64],
    pub hi: &'a [f64],
    pub max_evals: usize,
    pub x_tol: f64,
    pub f_tol: f64,
}

impl NelderMead<'_> {
    fn project(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lo[i], self.hi[i]);
        }
    }

    /// Minimises `f` from `start`. Trial points are projected onto the box
    /// before evaluation, so every evaluated point is feasible.
    pub fn minimize(&self, f: &mut impl FnMut(&[f64]) -> f64, start: &[f64]) -> Minimum {
        let d = start.len();
        let mut evals = 0;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            f(x)
        };
        let mut x0 = start.to_vec();
        self.project(&mut x0);
        if d == 0 {
            let f0 = eval(&x0, &mut evals);
            return Minimum { x: x0, f: f0, evals };
        }

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
        let f0 = eval(&x0, &mut evals);
        simplex.push((x0.clone(), f0));
        for i in 0..d {
            let mut v = x0.clone();
            let step = if x0[i].abs() > 1e-8 { 0.1 * x0[i].abs() } else { 0.05 };
            v[i] += step;
            if v[i] > self.hi[i] {
                v[i] = x0[i] - step;
            }
            self.project(&mut v);
            let fv = eval(&v, &mut evals);
            simplex.push((v, fv));
        }

        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let f_best = simplex[0].1;
            let f_worst = simplex[d].1;
            let diameter = simplex[1..]
                .iter()
                .map(|(v, _)| {
                    v.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if diameter < self.x_tol || f_worst - f_best <= self.f_tol {
                break;
            }

            let mut centroid = vec![0.0; d];
            for (v, _) in &simplex[..d] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / d as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[d].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect();
                self.project(&mut p);
                p
            };

            let xr = along(1.0);
            let fr = eval(&xr, &mut evals);
            if fr < f_best {
                let xe = along(2.0);
                let fe = eval(&xe, &mut evals);
                simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[d - 1].1 {
                simplex[d] = (xr, fr);
            } else {
                let (xc, fc) = if fr < f_worst {
                    let xc = along(0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(-0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < fr.min(f_worst) {
                    simplex[d] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for (v, fv) in simplex[1..].iter_mut() {
                        for (x, b) in v.iter_mut().zip(&best) {
                            *x = b + 0.5 * (*x - b);
                        }
                        *fv = eval(v, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, f) = simplex.swap_remove(0);
        Minimum { x, f, evals }
    }
}
