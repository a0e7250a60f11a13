//! Potential parameters, the dimensionless reduction and the closed-form
//! bound-state spectrum.
//!
//! All internal math runs on the dimensionless pair `(k, b)`:
//!
//! ```text
//! v(x) = k (1 - b / (e^x - 1))^2,   x = a r,   k = 2 mu D / (a hbar)^2
//! ```
//!
//! Physical energies are `eps * a^2 hbar^2 / (2 mu)`.

use serde::{Deserialize, Serialize};

use crate::error::{positive, GmpError, Result};

const ADMISSION_GUARD: f64 = 1e-12;

/// A generalized Morse potential in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Well depth `D`.
    #[serde(rename = "D")]
    pub depth: f64,
    /// Inverse range `a`.
    pub a: f64,
    /// Equilibrium separation `r_e`.
    #[serde(rename = "re")]
    pub r_e: f64,
    pub mu: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    /// Parameters with `mu = hbar = 1`.
    pub fn new(depth: f64, a: f64, r_e: f64) -> Result<Self> {
        Self::with_units(depth, a, r_e, 1.0, 1.0)
    }

    pub fn with_units(depth: f64, a: f64, r_e: f64, mu: f64, hbar: f64) -> Result<Self> {
        let p = Self {
            depth,
            a,
            r_e,
            mu,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        positive("D", self.depth)?;
        positive("a", self.a)?;
        positive("r_e", self.r_e)?;
        positive("mu", self.mu)?;
        positive("hbar", self.hbar)?;
        Ok(())
    }

    /// `a^2 hbar^2 / (2 mu)`: converts dimensionless energies to physical ones.
    pub fn energy_scale(&self) -> f64 {
        (self.a * self.hbar).powi(2) / (2.0 * self.mu)
    }

    /// The dimensionless model `(k, b)` of these parameters.
    pub fn reduce(&self) -> Result<GmpModel> {
        self.validate()?;
        let k = self.depth / self.energy_scale();
        let b = (self.a * self.r_e).exp_m1();
        GmpModel::new(k, b)
    }

    /// Inverse of [`reduce`](Self::reduce) for a given range and unit system.
    pub fn from_model(model: &GmpModel, a: f64, mu: f64, hbar: f64) -> Result<Self> {
        let scale = (a * hbar).powi(2) / (2.0 * mu);
        Self::with_units(model.k() * scale, a, model.b().ln_1p() / a, mu, hbar)
    }

    /// `V(r) = D (1 - b / (e^{a r} - 1))^2`.
    pub fn potential(&self, r: f64) -> f64 {
        let b = (self.a * self.r_e).exp_m1();
        self.depth * (1.0 - b / (self.a * r).exp_m1()).powi(2)
    }

    /// Level `n` with the physical energy filled in.
    pub fn level(&self, n: usize) -> Result<LevelRecord> {
        let model = self.reduce()?;
        let mut rec = model.level(n)?;
        rec.energy = Some(self.energy_direct(&model, n));
        Ok(rec)
    }

    /// `E_n = D - (a^2 hbar^2 / 8 mu) (n + l - b (b+2) k / (n + l))^2`.
    pub fn energy_direct(&self, model: &GmpModel, n: usize) -> f64 {
        let u = n as f64 + model.l();
        let t = u - model.b() * (model.b() + 2.0) * model.k() / u;
        self.depth - (self.a * self.hbar).powi(2) / (8.0 * self.mu) * t * t
    }

    /// Conserved satellite combination `D b^2 / a^2`.
    pub fn satellite_invariant(&self) -> f64 {
        let b = (self.a * self.r_e).exp_m1();
        self.depth * b * b / (self.a * self.a)
    }
}

/// One bound level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Dimensionless energy `k - alpha^2`.
    pub eps: f64,
    /// Physical energy, present only when built from [`PhysicalParams`].
    pub energy: Option<f64>,
}

/// `(l, C)` for a dimensionless model: `C = -k b^2`, `l = (1 + sqrt(1 - 4C)) / 2`.
pub fn shape_constants(k: f64, b: f64) -> (f64, f64) {
    let c = -k * b * b;
    let l = 0.5 * (1.0 + (1.0 - 4.0 * c).sqrt());
    (l, c)
}

/// Dimensionless generalized Morse potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmpModel {
    k: f64,
    b: f64,
    l: f64,
    #[serde(rename = "C")]
    c: f64,
    n_max: i64,
}

impl GmpModel {
    pub fn new(k: f64, b: f64) -> Result<Self> {
        positive("k", k)?;
        positive("b", b)?;
        let (l, c) = shape_constants(k, b);
        let mut m = Self {
            k,
            b,
            l,
            c,
            n_max: -1,
        };
        m.n_max = m.compute_n_max();
        Ok(m)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// `C = -k b^2`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Highest bound index; `-1` when the well holds no bound state.
    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn level_count(&self) -> usize {
        (self.n_max + 1) as usize
    }

    /// `k b (b + 2)`, the constant difference `beta_n^2 - alpha_n^2`.
    pub fn beta_alpha_gap(&self) -> f64 {
        self.k * self.b * (self.b + 2.0)
    }

    /// Position of the potential minimum, `ln(1 + b)`.
    pub fn well_position(&self) -> f64 {
        self.b.ln_1p()
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.k * (1.0 - self.b / x.exp_m1()).powi(2)
    }

    /// `alpha` as a smooth function of the (real) level index.
    ///
    /// Uses `l (l - 1) = k b^2` to write the numerator
    /// `k b (b + 2) - (n + l)^2` as `2 k b - (2n + 1) l - n^2`, which avoids
    /// cancelling two numbers of size `k b^2` in deep wells.
    pub fn alpha_at(&self, n: f64) -> f64 {
        let u = n + self.l;
        (2.0 * self.k * self.b - (2.0 * n + 1.0) * self.l - n * n) / (2.0 * u)
    }

    // alpha_n = 0 (integer sqrt(k b (b+2)) - l) is not normalizable; values
    // within rounding of zero count as that boundary case.
    fn admits(&self, n: i64) -> bool {
        let u = n as f64 + self.l;
        self.alpha_at(n as f64) > ADMISSION_GUARD * u
    }

    fn compute_n_max(&self) -> i64 {
        let mut n = ((self.beta_alpha_gap().sqrt() - self.l).floor() as i64).max(-1);
        while n >= 0 && !self.admits(n) {
            n -= 1;
        }
        while self.admits(n + 1) {
            n += 1;
        }
        n
    }

    /// Bound level `n`. Admission is strict: `alpha_n > 0`.
    pub fn level(&self, n: usize) -> Result<LevelRecord> {
        if n as i64 > self.n_max {
            return Err(GmpError::NotBound {
                n: n as i64,
                n_max: self.n_max,
            });
        }
        let alpha = self.alpha_at(n as f64);
        let beta = alpha + n as f64 + self.l;
        Ok(LevelRecord {
            n,
            alpha,
            beta,
            eps: self.k - alpha * alpha,
            energy: None,
        })
    }

    pub fn levels(&self) -> Vec<LevelRecord> {
        (0..self.level_count())
            .map(|n| self.level(n).expect("n <= n_max"))
            .collect()
    }

    /// Dimensionless energy evaluated straight from the squared-bracket form,
    /// `k - (n + l - k b (b+2) / (n + l))^2 / 4`.
    pub fn energy_direct(&self, n: f64) -> f64 {
        let u = n + self.l;
        let t = u - self.beta_alpha_gap() / u;
        self.k - 0.25 * t * t
    }

    /// Taylor coefficients of the level energy in `nu = n + 1/2` about
    /// `nu = 0`, reported as `[eps(0), eps(1), ..., eps(order)]` with the
    /// Dunham signs `E = eps(0) + eps(1) nu - eps(2) nu^2 + eps(3) nu^3 - ...`.
    pub fn dunham_coefficients(&self, order: usize) -> Vec<f64> {
        // f(nu) = u0 + nu - S / (u0 + nu), energy = k - f^2 / 4.
        let s = self.beta_alpha_gap();
        let u0 = self.l - 0.5;
        let f: Vec<f64> = (0..=order)
            .map(|j| match j {
                0 => u0 - s / u0,
                1 => 1.0 + s / (u0 * u0),
                _ => -s / u0 * (-1.0 / u0).powi(j as i32),
            })
            .collect();
        taylor_to_dunham(self.k, &f)
    }

    /// Same coefficients from central differences of the energy curve with
    /// one Richardson step. Independent of the series route above.
    pub fn dunham_coefficients_numeric(&self, order: usize, h: f64) -> Vec<f64> {
        let energy = |nu: f64| self.energy_direct(nu - 0.5);
        let raw: Vec<f64> = (0..=order)
            .map(|j| {
                let d1 = central_derivative(&energy, j, h);
                let d2 = central_derivative(&energy, j, 0.5 * h);
                (4.0 * d2 - d1) / 3.0 / factorial(j)
            })
            .collect();
        raw.iter()
            .enumerate()
            .map(|(j, c)| dunham_sign(j) * c)
            .collect()
    }
}

fn dunham_sign(j: usize) -> f64 {
    if j == 0 || j % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

fn taylor_to_dunham(k: f64, f: &[f64]) -> Vec<f64> {
    (0..f.len())
        .map(|j| {
            let sq: f64 = (0..=j).map(|i| f[i] * f[j - i]).sum();
            let c = if j == 0 { k - 0.25 * sq } else { -0.25 * sq };
            dunham_sign(j) * c
        })
        .collect()
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

// j-th central difference at 0 with spacing h, O(h^2).
fn central_derivative<F: Fn(f64) -> f64>(f: &F, j: usize, h: f64) -> f64 {
    if j == 0 {
        return f(0.0);
    }
    let mut sum = 0.0;
    let mut binom = 1.0;
    for i in 0..=j {
        let offset = (j as f64 / 2.0 - i as f64) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * f(offset);
        binom = binom * (j - i) as f64 / (i + 1) as f64;
    }
    sum / h.powi(j as i32)
}

/// Morse level `sqrt(2D/mu) a hbar (n + 1/2) - (a^2 hbar^2 / 2 mu)(n + 1/2)^2`.
pub fn morse_energy(p: &PhysicalParams, n: usize) -> f64 {
    let nu = n as f64 + 0.5;
    (2.0 * p.depth / p.mu).sqrt() * p.a * p.hbar * nu - p.energy_scale() * nu * nu
}

/// Dimensionless Morse level `2 sqrt(k) (n + 1/2) - (n + 1/2)^2`.
pub fn morse_energy_dimensionless(k: f64, n: usize) -> f64 {
    let nu = n as f64 + 0.5;
    2.0 * k.sqrt() * nu - nu * nu
}
