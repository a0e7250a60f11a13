//! Supersymmetric factorization and shape invariance.
//!
//! `h = A+ A- + eps_0` with `A+- = -+ d/dx + W(x)` and
//! `W = -(ln psi_0)' = (alpha_0 e^x - beta_0) / (e^x - 1) = alpha_0 - l y`.
//! The partner `v1 = v + 2 W'` is again a generalized Morse potential with
//! `l -> l + 1`, shifted by a constant.

use serde::{Deserialize, Serialize};

use crate::error::{GmpError, Result};
use crate::model::GmpModel;
use crate::special::ln_gamma;
use crate::wavefunction::BoundState;

const PARTNER_GUARD: f64 = 1e-12;

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(GmpError::Domain {
            name: "x",
            value: x,
            reason: "must be > 0",
        })
    }
}

fn ground(model: &GmpModel) -> Result<(f64, f64)> {
    let rec = model.level(0)?;
    Ok((rec.alpha, rec.beta))
}

/// `W(x) = (alpha_0 e^x - beta_0) / (e^x - 1)`.
pub fn superpotential(model: &GmpModel, x: f64) -> Result<f64> {
    check_x(x)?;
    let (alpha0, _) = ground(model)?;
    // beta_0 - alpha_0 = l
    Ok(alpha0 - model.l() / x.exp_m1())
}

/// `W'(x) = l e^x / (e^x - 1)^2`.
pub fn superpotential_derivative(model: &GmpModel, x: f64) -> Result<f64> {
    check_x(x)?;
    let y = x.exp_m1().recip();
    Ok(model.l() * y * (1.0 + y))
}

/// Sign of the factorization operator `A+-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Raising,
    Lowering,
}

/// `A+- psi = -+ psi' + W psi` on an interior grid.
pub fn apply_a(state: &BoundState, factor: Factor, xs: &[f64]) -> Result<Vec<f64>> {
    let model = state.model();
    let (alpha0, _) = ground(model)?;
    xs.iter()
        .map(|&x| {
            check_x(x)?;
            let w = alpha0 - model.l() / x.exp_m1();
            let d = state.dpsi_dx_unchecked(x);
            let v = state.psi_unchecked(x);
            Ok(match factor {
                Factor::Raising => -d + w * v,
                Factor::Lowering => d + w * v,
            })
        })
        .collect()
}

/// The shape-invariant superpartner `v1(x) = k' (1 - b' / (e^x - 1))^2 + R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartnerModel {
    pub k_prime: f64,
    pub b_prime: f64,
    /// Constant shift `R = k - k'`.
    pub r: f64,
    pub l_prime: f64,
}

impl PartnerModel {
    /// The partner as a plain generalized Morse potential (without `R`).
    pub fn as_gmp(&self) -> Result<GmpModel> {
        GmpModel::new(self.k_prime, self.b_prime)
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.k_prime * (1.0 - self.b_prime / x.exp_m1()).powi(2) + self.r
    }

    /// Partner level `n`: same energy as level `n + 1` of the original.
    pub fn eps(&self, n: usize) -> Result<f64> {
        Ok(self.as_gmp()?.level(n)?.eps + self.r)
    }
}

/// `k' = (kb - l)^2 / (kb^2 + 2l)`, `b' = (kb^2 + 2l) / (kb - l)`,
/// `R = (k'b' - 1 + l')^2 / (k'b'^2 + 2 - 2l') - k'`.
pub fn partner(model: &GmpModel) -> Result<PartnerModel> {
    let (k, b, l) = (model.k(), model.b(), model.l());
    let kb_l = k * b - l;
    if kb_l.abs() < PARTNER_GUARD * l {
        return Err(GmpError::Singular(kb_l));
    }
    let q = k * b * b + 2.0 * l;
    let k_prime = kb_l * kb_l / q;
    let b_prime = q / kb_l;
    if b_prime <= 0.0 {
        return Err(GmpError::Domain {
            name: "b'",
            value: b_prime,
            reason: "partner needs kb > l",
        });
    }
    let (l_prime, _) = crate::model::shape_constants(k_prime, b_prime);
    let lp = l + 1.0;
    let k_of_primed =
        (k_prime * b_prime - 1.0 + lp).powi(2) / (k_prime * b_prime * b_prime + 2.0 - 2.0 * lp);
    Ok(PartnerModel {
        k_prime,
        b_prime,
        r: k_of_primed - k_prime,
        l_prime,
    })
}

/// `v(x) + 2 W'(x)`, the partner potential from its definition.
pub fn partner_potential_from_superpotential(model: &GmpModel, x: f64) -> Result<f64> {
    Ok(model.potential(x) + 2.0 * superpotential_derivative(model, x)?)
}

/// Repeated partners: `[model, partner, partner of partner, ...]`, `depth + 1`
/// entries. Stops early if a partner is singular.
pub fn partner_chain(model: &GmpModel, depth: usize) -> Result<Vec<GmpModel>> {
    let mut out = vec![*model];
    for _ in 0..depth {
        let next = partner(out.last().expect("non-empty"))?.as_gmp()?;
        out.push(next);
    }
    Ok(out)
}

/// `ln N_0 = (ln G(2 alpha_0 + 2l + 1) - ln G(2 alpha_0) - ln G(2l + 1)) / 2`.
fn ln_ground_norm(model: &GmpModel) -> Result<f64> {
    let (a0, _) = ground(model)?;
    let l = model.l();
    Ok(0.5 * (ln_gamma(2.0 * a0 + 2.0 * l + 1.0) - ln_gamma(2.0 * a0) - ln_gamma(2.0 * l + 1.0)))
}

/// `ln N_n` from the recursion
/// `N_n = sqrt((n + 2l)(2 alpha_n + n) / (n (2 alpha_n + n + 2l))) N'_{n-1}`
/// down the explicit chain of superpartners, seeded by the ground-state value.
pub fn ln_normalization_recursion(model: &GmpModel, n: usize) -> Result<f64> {
    let mut current = *model;
    let mut level = n;
    let mut acc = 0.0;
    // validate upfront so errors name the caller's level
    model.level(n)?;
    while level > 0 {
        let a = current.level(level)?.alpha;
        let (l, nf) = (current.l(), level as f64);
        acc += 0.5 * (((nf + 2.0 * l) * (2.0 * a + nf)) / (nf * (2.0 * a + nf + 2.0 * l))).ln();
        current = partner(&current)?.as_gmp()?;
        level -= 1;
    }
    Ok(acc + ln_ground_norm(&current)?)
}

pub fn normalization_recursion(model: &GmpModel, n: usize) -> Result<f64> {
    let ln_n = ln_normalization_recursion(model, n)?;
    if ln_n > 709.0 {
        return Err(GmpError::Overflow(ln_n));
    }
    Ok(ln_n.exp())
}

/// `(eps_n - eps_0)^{-1/2} A- psi_n` sampled on `xs`: the normalized partner
/// state of level `n - 1`.
pub fn intertwined(state: &BoundState, xs: &[f64]) -> Result<Vec<f64>> {
    if state.n() == 0 {
        return Err(GmpError::Precondition(
            "A- annihilates the ground state; intertwining needs n >= 1".into(),
        ));
    }
    let (a0, _) = ground(state.model())?;
    let scale = (a0 * a0 - state.alpha() * state.alpha()).sqrt();
    Ok(apply_a(state, Factor::Lowering, xs)?
        .into_iter()
        .map(|v| v / scale)
        .collect())
}

/// Flips `values` so the first interior local maximum of `|v|` (ignoring
/// dust below `1e-3` of the peak) is positive.
pub fn align_sign(values: &mut [f64]) {
    let peak = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = 1e-3 * peak;
    let first = (1..values.len().saturating_sub(1))
        .find(|&i| {
            let a = values[i].abs();
            a > floor && a >= values[i - 1].abs() && a >= values[i + 1].abs()
        })
        .or_else(|| values.iter().position(|v| v.abs() == peak));
    if let Some(i) = first {
        if values[i] < 0.0 {
            values.iter_mut().for_each(|v| *v = -*v);
        }
    }
}
