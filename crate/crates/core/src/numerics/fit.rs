//! Least-squares fit of `(D, a, r_e)` to observed vibrational levels.
//!
//! Nelder–Mead simplex descent in `ln D, ln a, ln r_e` (keeps every trial
//! point in the domain), restarted around the best vertex until a restart no
//! longer improves the residual.

use serde::{Deserialize, Serialize};

use crate::error::{GmpError, Result};
use crate::model::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservedLevel {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Cap on simplex iterations summed over all restarts.
    pub max_iterations: usize,
    pub max_restarts: usize,
    /// Simplex diameter (in log-parameter space) that ends a descent.
    pub x_tol: f64,
    /// Edge of the initial simplex in log-parameter space.
    pub initial_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 20_000,
            max_restarts: 8,
            x_tol: 1e-11,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: PhysicalParams,
    pub residual_rms: f64,
    pub n_iterations: usize,
    pub converged: bool,
}

struct Objective<'a> {
    observed: &'a [ObservedLevel],
    mu: f64,
    hbar: f64,
}

impl Objective<'_> {
    fn params(&self, p: &[f64; 3]) -> Option<PhysicalParams> {
        PhysicalParams::with_units(p[0].exp(), p[1].exp(), p[2].exp(), self.mu, self.hbar).ok()
    }

    /// Sum of squared residuals. Past the binding threshold (`alpha_n <= 0`)
    /// the level energy is continued as `k - alpha_n |alpha_n|`, so the
    /// surface stays smooth while a trial point unbinds an observed level.
    fn sum_sq(&self, p: &[f64; 3]) -> f64 {
        let Some(params) = self.params(p) else {
            return f64::INFINITY;
        };
        let Ok(model) = params.reduce() else {
            return f64::INFINITY;
        };
        let scale = params.energy_scale();
        self.observed
            .iter()
            .map(|obs| {
                let alpha = model.alpha_at(obs.n as f64);
                let eps = model.k() - alpha * alpha.abs();
                (obs.energy - scale * eps).powi(2)
            })
            .sum()
    }
}

struct Descent {
    best: [f64; 3],
    f_best: f64,
    iterations: usize,
    shrunk_to_tol: bool,
}

fn nelder_mead(obj: &Objective, start: [f64; 3], step: f64, x_tol: f64, budget: usize) -> Descent {
    let mut simplex: Vec<([f64; 3], f64)> = (0..4)
        .map(|i| {
            let mut v = start;
            if i > 0 {
                v[i - 1] += step;
            }
            (v, obj.sum_sq(&v))
        })
        .collect();
    let mut iterations = 0;
    let mut shrunk_to_tol = false;
    while iterations < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let anchor = simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| (0..3).map(move |j| (v[j] - anchor[j]).abs()))
            .fold(0.0, f64::max);
        if diameter <= x_tol || simplex[0].1 == 0.0 {
            shrunk_to_tol = true;
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; 3];
        for (v, _) in &simplex[..3] {
            for j in 0..3 {
                centroid[j] += v[j] / 3.0;
            }
        }
        let worst = simplex[3];
        let along = |t: f64| -> [f64; 3] {
            let mut p = [0.0; 3];
            for j in 0..3 {
                p[j] = centroid[j] + t * (worst.0[j] - centroid[j]);
            }
            p
        };

        let reflected = along(-1.0);
        let f_r = obj.sum_sq(&reflected);
        if f_r < simplex[0].1 {
            let expanded = along(-2.0);
            let f_e = obj.sum_sq(&expanded);
            simplex[3] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
            continue;
        }
        if f_r < simplex[2].1 {
            simplex[3] = (reflected, f_r);
            continue;
        }
        let (contracted, f_c) = if f_r < worst.1 {
            let c = along(-0.5);
            (c, obj.sum_sq(&c))
        } else {
            let c = along(0.5);
            (c, obj.sum_sq(&c))
        };
        if f_c < worst.1.min(f_r) {
            simplex[3] = (contracted, f_c);
            continue;
        }
        let best = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            for j in 0..3 {
                vertex.0[j] = best[j] + 0.5 * (vertex.0[j] - best[j]);
            }
            vertex.1 = obj.sum_sq(&vertex.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Descent {
        best: simplex[0].0,
        f_best: simplex[0].1,
        iterations,
        shrunk_to_tol,
    }
}

/// Fits `(D, a, r_e)` with `mu` and `hbar` taken from `initial`.
///
/// Running out of iterations is reported through `converged = false`, not
/// as an error.
pub fn fit_levels(
    observed: &[ObservedLevel],
    initial: &PhysicalParams,
    opts: &FitOptions,
) -> Result<FitResult> {
    if observed.len() < 3 {
        return Err(GmpError::Precondition(format!(
            "fitting three parameters needs at least 3 levels, got {}",
            observed.len()
        )));
    }
    if observed.iter().any(|o| !o.energy.is_finite()) {
        return Err(GmpError::Precondition(
            "observed energies must be finite".into(),
        ));
    }
    initial.validate()?;
    let obj = Objective {
        observed,
        mu: initial.mu,
        hbar: initial.hbar,
    };
    let mut best = [initial.depth.ln(), initial.a.ln(), initial.r_e.ln()];
    let mut f_best = obj.sum_sq(&best);
    let energy_scale = observed
        .iter()
        .map(|o| o.energy.abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    // residuals at the level of rounding in the energies themselves
    let floor = (observed.len() as f64) * (1e-15 * energy_scale).powi(2);

    let mut iterations = 0;
    let mut converged = f_best <= floor;
    let mut restarts = 0;
    while !converged && restarts <= opts.max_restarts && iterations < opts.max_iterations {
        let run = nelder_mead(
            &obj,
            best,
            opts.initial_step,
            opts.x_tol,
            opts.max_iterations - iterations,
        );
        iterations += run.iterations;
        let improved = run.f_best < f_best;
        let stalled = !improved || f_best - run.f_best <= 1e-10 * f_best;
        if improved {
            best = run.best;
            f_best = run.f_best;
        }
        converged = run.shrunk_to_tol && (stalled || f_best <= floor);
        restarts += 1;
    }

    let params = obj
        .params(&best)
        .ok_or_else(|| GmpError::Precondition("fit left the parameter domain".into()))?;
    Ok(FitResult {
        params,
        residual_rms: (f_best / observed.len() as f64).sqrt(),
        n_iterations: iterations,
        converged,
    })
}

/// Synthetic observations: every bound level of `params`.
pub fn synthetic_levels(params: &PhysicalParams) -> Result<Vec<ObservedLevel>> {
    let model = params.reduce()?;
    let scale = params.energy_scale();
    Ok(model
        .levels()
        .into_iter()
        .map(|rec| ObservedLevel {
            n: rec.n,
            energy: scale * rec.eps,
        })
        .collect())
}
