//! Normalized bound-state eigenfunctions.
//!
//! In the mapped coordinate `y = 1 / (e^x - 1)` a bound state reads
//!
//! ```text
//! Phi_n(y) = N_n y^{alpha_n} (1 + y)^{-beta_n} 2F1(-n, -n + 1 - 2l; 2 alpha_n + 1; -y)
//! ```
//!
//! and `psi_n(x) = Phi_n(y(x))`. The canonical normalization is
//! `int_0^inf |psi_n|^2 dx = 1` (range `a = 1`), which in `y` is the measure
//! `dy / (y (1 + y))`. Physical wave functions carry an extra `sqrt(a)`.

use crate::algebra::AlgebraLabel;
use crate::error::{GmpError, Result};
use crate::model::{GmpModel, LevelRecord};
use crate::special::{hyp2f1_poly_in_y, ln_gamma, poly_eval};

/// Largest `ln N` that still exponentiates to a finite double.
const LN_MAX: f64 = 709.0;

/// A point of the radial axis in both coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    /// `x = a r > 0`.
    pub x: f64,
    /// `y = 1 / (e^x - 1) > 0`.
    pub y: f64,
}

impl RadialPoint {
    pub fn from_x(x: f64) -> Result<Self> {
        check_arg("x", x)?;
        Ok(Self {
            x,
            y: x.exp_m1().recip(),
        })
    }

    pub fn from_y(y: f64) -> Result<Self> {
        check_arg("y", y)?;
        Ok(Self {
            x: y.recip().ln_1p(),
            y,
        })
    }
}

fn check_arg(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(GmpError::Domain {
            name,
            value: v,
            reason: "radial argument must be > 0",
        })
    }
}

/// `ln(e^x - 1)` without overflow for large `x`.
fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// `ln N_n` from the closed form, entirely in log-gamma space.
pub fn ln_normalization(model: &GmpModel, n: usize) -> Result<f64> {
    let rec = model.level(n)?;
    let (a, l, nf) = (rec.alpha, model.l(), n as f64);
    let ln_sq = (a + nf + l).ln() + ln_gamma(2.0 * a + nf + 1.0) + ln_gamma(2.0 * a + nf + 2.0 * l)
        - ln_gamma(nf + 1.0)
        - (nf + l).ln()
        - ln_gamma(2.0 * a)
        - ln_gamma(2.0 * a + 1.0)
        - ln_gamma(nf + 2.0 * l);
    Ok(0.5 * ln_sq)
}

/// Closed-form normalization coefficient (dimensionless convention `a = 1`).
pub fn normalization(model: &GmpModel, n: usize) -> Result<f64> {
    let ln_n = ln_normalization(model, n)?;
    if ln_n > LN_MAX || !ln_n.is_finite() {
        return Err(GmpError::Overflow(ln_n));
    }
    Ok(ln_n.exp())
}

/// A normalized bound eigenstate. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    model: GmpModel,
    level: LevelRecord,
    norm: f64,
    ln_norm: f64,
    poly: Vec<f64>,
}

impl BoundState {
    pub fn new(model: &GmpModel, n: usize) -> Result<Self> {
        let level = model.level(n)?;
        let ln_norm = ln_normalization(model, n)?;
        let norm = normalization(model, n)?;
        let poly = hyp2f1_poly_in_y(n, 1.0 - n as f64 - 2.0 * model.l(), 2.0 * level.alpha + 1.0)?;
        Ok(Self {
            model: *model,
            level,
            norm,
            ln_norm,
            poly,
        })
    }

    /// Every bound state of `model`, ground state first.
    pub fn all(model: &GmpModel) -> Result<Vec<Self>> {
        (0..model.level_count())
            .map(|n| Self::new(model, n))
            .collect()
    }

    pub fn model(&self) -> &GmpModel {
        &self.model
    }

    pub fn level(&self) -> &LevelRecord {
        &self.level
    }

    pub fn n(&self) -> usize {
        self.level.n
    }

    pub fn alpha(&self) -> f64 {
        self.level.alpha
    }

    pub fn beta(&self) -> f64 {
        self.level.beta
    }

    pub fn eps(&self) -> f64 {
        self.level.eps
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Coefficients of the hypergeometric factor in powers of `y`.
    pub fn poly(&self) -> &[f64] {
        &self.poly
    }

    /// The `(l, m, g)` label of this state, `m = alpha + beta`, `g = alpha - beta`.
    pub fn label(&self) -> AlgebraLabel {
        AlgebraLabel {
            l: self.model.l(),
            m: self.level.alpha + self.level.beta,
            g: -(self.level.n as f64 + self.model.l()),
        }
    }

    // ln of the prefactor N y^alpha (1+y)^-beta given ln y and ln(1+y).
    fn ln_prefactor(&self, ln_y: f64, ln_1py: f64) -> f64 {
        self.ln_norm + self.level.alpha * ln_y - self.level.beta * ln_1py
    }

    pub(crate) fn phi_unchecked(&self, y: f64) -> f64 {
        let (p, _) = poly_eval(&self.poly, y);
        self.ln_prefactor(y.ln(), y.ln_1p()).exp() * p
    }

    pub(crate) fn dphi_dy_unchecked(&self, y: f64) -> f64 {
        let (p, dp) = poly_eval(&self.poly, y);
        let pre = self.ln_prefactor(y.ln(), y.ln_1p()).exp();
        let log_deriv = self.level.alpha / y - self.level.beta / (1.0 + y);
        pre * (p * log_deriv + dp)
    }

    pub(crate) fn psi_unchecked(&self, x: f64) -> f64 {
        let ln_y = -ln_expm1(x);
        let y = ln_y.exp();
        // 1 + y = e^x y
        let (p, _) = poly_eval(&self.poly, y);
        self.ln_prefactor(ln_y, x + ln_y).exp() * p
    }

    pub(crate) fn dpsi_dx_unchecked(&self, x: f64) -> f64 {
        let y = x.exp_m1().recip();
        if y == 0.0 {
            return 0.0;
        }
        -y * (1.0 + y) * self.dphi_dy_unchecked(y)
    }

    /// `Phi_n(y)`.
    pub fn phi(&self, y: f64) -> Result<f64> {
        check_arg("y", y)?;
        Ok(self.phi_unchecked(y))
    }

    /// `d Phi_n / dy`, analytic.
    pub fn dphi_dy(&self, y: f64) -> Result<f64> {
        check_arg("y", y)?;
        Ok(self.dphi_dy_unchecked(y))
    }

    /// `psi_n(x) = Phi_n(y(x))`.
    pub fn psi(&self, x: f64) -> Result<f64> {
        check_arg("x", x)?;
        Ok(self.psi_unchecked(x))
    }

    /// `d psi_n / dx = -y (1 + y) d Phi_n / dy`.
    pub fn dpsi_dx(&self, x: f64) -> Result<f64> {
        check_arg("x", x)?;
        Ok(self.dpsi_dx_unchecked(x))
    }

    /// `x` beyond which `N e^{-alpha x} < tail`; `psi` is bounded by that there.
    pub fn tail_cutoff(&self, tail: f64) -> f64 {
        let x = (self.ln_norm - tail.ln()) / self.level.alpha;
        x.max(self.model.well_position() + 1.0)
    }
}

/// Reconstructs the bound state carrying the label `(l, m, g)`.
///
/// `alpha = (m + g) / 2`, `n = -l - g`, and the model follows from
/// `C = -l (l - 1)` and `m = C (b + 2) / (g b)`.
pub fn state_from_label(l: f64, m: f64, g: f64) -> Result<BoundState> {
    if !(l > 1.0) {
        return Err(GmpError::Label(format!("l = {l} must exceed 1")));
    }
    let n_real = -l - g;
    let n = n_real.round();
    if n < 0.0 || (n_real - n).abs() > 1e-9 * l.max(1.0) {
        return Err(GmpError::Label(format!(
            "n = -l - g = {n_real} is not a non-negative integer"
        )));
    }
    if !(m + g > 0.0) {
        return Err(GmpError::Label(format!(
            "alpha = (m + g)/2 = {} <= 0",
            0.5 * (m + g)
        )));
    }
    let c = -l * (l - 1.0);
    let den = m * g - c;
    if den == 0.0 {
        return Err(GmpError::Label("m g = C has no finite b".into()));
    }
    let b = 2.0 * c / den;
    if !(b > 0.0) {
        return Err(GmpError::Label(format!("implied b = {b} is not positive")));
    }
    let k = -c / (b * b);
    let model = GmpModel::new(k, b)?;
    BoundState::new(&model, n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small() -> GmpModel {
        GmpModel::new(4.0, 2.0).unwrap()
    }

    #[test]
    fn normalization_reference_values() {
        let m = small();
        assert_relative_eq!(
            normalization(&m, 0).unwrap(),
            17.442034410082553246,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            normalization(&m, 1).unwrap(),
            0.80131411545195959363,
            max_relative = 1e-12
        );
        let fig1 = GmpModel::new(20.0, 2.5f64.exp_m1()).unwrap();
        let want = [
            1436388.45671169138,
            183089.7152615897684,
            8665.1139591743202497,
            112.30406853860146591,
        ];
        for (n, w) in want.iter().enumerate() {
            assert_relative_eq!(normalization(&fig1, n).unwrap(), *w, max_relative = 1e-11);
        }
    }

    #[test]
    fn ground_state_normalization_reduces_to_beta_form() {
        for (k, b) in [(4.0, 2.0), (20.0, 2.5f64.exp_m1()), (7.5, 0.9)] {
            let m = GmpModel::new(k, b).unwrap();
            let a0 = m.level(0).unwrap().alpha;
            let l = m.l();
            let ln = 0.5
                * (ln_gamma(2.0 * a0 + 2.0 * l + 1.0)
                    - ln_gamma(2.0 * a0)
                    - ln_gamma(2.0 * l + 1.0));
            assert_relative_eq!(ln_normalization(&m, 0).unwrap(), ln, max_relative = 1e-13);
        }
    }

    #[test]
    fn normalization_overflow_is_reported() {
        // Extremely deep well: N_0 exceeds the double range.
        let m = GmpModel::new(1e7, 1e4).unwrap();
        assert!(matches!(normalization(&m, 0), Err(GmpError::Overflow(_))));
        assert!(ln_normalization(&m, 0).unwrap().is_finite());
    }

    #[test]
    fn polynomial_starts_at_one() {
        let m = GmpModel::new(20.0, 2.5f64.exp_m1()).unwrap();
        for s in BoundState::all(&m).unwrap() {
            assert_eq!(s.poly()[0], 1.0);
            assert_eq!(s.poly().len(), s.n() + 1);
            assert!(s.norm() > 0.0);
        }
    }

    #[test]
    fn phi_vanishes_at_origin_of_y() {
        let m = small();
        for s in BoundState::all(&m).unwrap() {
            assert!(s.phi(1e-300).unwrap().abs() < 1e-30);
        }
    }

    #[test]
    fn psi_equals_phi_of_y() {
        let s = BoundState::new(&small(), 1).unwrap();
        for x in [0.05, 0.7, 1.1, 3.0, 12.0, 45.0] {
            let p = RadialPoint::from_x(x).unwrap();
            assert_relative_eq!(s.psi(x).unwrap(), s.phi(p.y).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn radial_point_round_trip() {
        let p = RadialPoint::from_x(0.8).unwrap();
        let q = RadialPoint::from_y(p.y).unwrap();
        assert_relative_eq!(q.x, 0.8, max_relative = 1e-14);
        let a = RadialPoint::from_x(0.5).unwrap();
        let b = RadialPoint::from_x(0.6).unwrap();
        assert!(a.y > b.y);
    }

    #[test]
    fn rejects_non_positive_arguments() {
        let s = BoundState::new(&small(), 0).unwrap();
        assert!(s.phi(0.0).is_err());
        assert!(s.phi(-1.0).is_err());
        assert!(s.psi(0.0).is_err());
        assert!(s.dphi_dy(0.0).is_err());
        assert!(s.dpsi_dx(-2.0).is_err());
        assert!(RadialPoint::from_x(0.0).is_err());
    }

    #[test]
    fn ground_state_log_derivative() {
        let s = BoundState::new(&small(), 0).unwrap();
        for y in [0.01, 0.3, 2.0, 50.0] {
            let want = s.phi(y).unwrap() * (s.alpha() / y - s.beta() / (1.0 + y));
            assert_relative_eq!(s.dphi_dy(y).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let m = GmpModel::new(20.0, 2.5f64.exp_m1()).unwrap();
        for s in BoundState::all(&m).unwrap() {
            for i in 1..40 {
                let y = 0.002 * 1.25f64.powi(i);
                let h = 1e-5 * y;
                let fd = (s.phi(y + h).unwrap() - s.phi(y - h).unwrap()) / (2.0 * h);
                let an = s.dphi_dy(y).unwrap();
                let scale = an.abs().max(1e-8 * s.norm());
                assert!(
                    (fd - an).abs() <= 1e-6 * scale,
                    "n={} y={y}: {fd} vs {an}",
                    s.n()
                );
            }
        }
    }

    #[test]
    fn ground_state_maximum_is_a_critical_point() {
        let s = BoundState::new(&small(), 0).unwrap();
        // dPhi/dy changes sign at y* = alpha / (beta - alpha); bisect on it.
        let (mut lo, mut hi) = (1e-3f64, 1e3);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if s.dphi_dy(mid).unwrap() > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(s.dphi_dy(lo).unwrap().abs() < 1e-8);
        assert_relative_eq!(lo, s.alpha() / (s.beta() - s.alpha()), max_relative = 1e-10);
    }

    #[test]
    fn label_round_trip() {
        for (k, b) in [(4.0, 2.0), (20.0, 2.5f64.exp_m1())] {
            let m = GmpModel::new(k, b).unwrap();
            for s in BoundState::all(&m).unwrap() {
                let lab = s.label();
                let back = state_from_label(lab.l, lab.m, lab.g).unwrap();
                assert_eq!(back.n(), s.n());
                assert_relative_eq!(back.model().k(), k, max_relative = 1e-10);
                assert_relative_eq!(back.model().b(), b, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn ground_state_from_label() {
        let m = small();
        let l0 = m.level(0).unwrap();
        let l = (1.0 + 65f64.sqrt()) / 2.0;
        let s = state_from_label(l, l0.alpha + l0.beta, -l).unwrap();
        assert_eq!(s.n(), 0);
        assert_relative_eq!(s.model().k(), 4.0, max_relative = 1e-12);
        assert_relative_eq!(s.model().b(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn bad_labels() {
        assert!(matches!(
            state_from_label(4.5, 12.0, -4.7),
            Err(GmpError::Label(_))
        ));
        assert!(matches!(
            state_from_label(4.5, 3.0, -4.5),
            Err(GmpError::Label(_))
        ));
        assert!(state_from_label(0.9, 3.0, -0.9).is_err());
    }
}
