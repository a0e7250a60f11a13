//! `so(2,2) = su(1,1) + su(1,1)` acting on generalized Morse eigenfunctions.
//!
//! A bound state carries the label `(l, m, g)` with `m = alpha + beta` and
//! `g = alpha - beta = -(n + l)`. The `G` family moves `g -> g +- 1` at fixed
//! `m` (changing `n` and `b`); the `M` family moves `m -> m +- 1` at fixed `g`
//! (changing `b` only). Both keep `l`, hence `k b^2` and `D b^2 / a^2`, fixed:
//! they connect *satellite* potentials rather than levels of one potential.
//!
//! The extended functions `e^{i m xi} Phi(y) e^{i g eta}` are handled through
//! their radial parts: `d/dxi -> i m`, `d/deta -> i g`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GmpError, Result};
use crate::model::{GmpModel, PhysicalParams};
use crate::special::{hyp2f1_poly_in_y, poly_eval};
use crate::wavefunction::BoundState;

/// Radicands in `[-RADICAND_DUST, 0)` are rounding noise at annihilation points.
pub const RADICAND_DUST: f64 = 1e-12;

const DENOMINATOR_GUARD: f64 = 1e-14;

/// `(l, m, g)` indexing an extended wave function of one irrep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraLabel {
    pub l: f64,
    pub m: f64,
    pub g: f64,
}

impl AlgebraLabel {
    pub fn alpha(&self) -> f64 {
        0.5 * (self.m + self.g)
    }

    pub fn beta(&self) -> f64 {
        0.5 * (self.m - self.g)
    }

    /// `n = -l - g`, as a real number.
    pub fn level_index(&self) -> f64 {
        -self.l - self.g
    }

    /// Label reached by a ladder step.
    pub fn shifted(&self, dir: Direction) -> Self {
        let mut out = *self;
        match dir {
            Direction::GPlus => out.g += 1.0,
            Direction::GMinus => out.g -= 1.0,
            Direction::MPlus => out.m += 1.0,
            Direction::MMinus => out.m -= 1.0,
        }
        out
    }
}

/// The four ladder generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "g+")]
    GPlus,
    #[serde(rename = "g-")]
    GMinus,
    #[serde(rename = "m+")]
    MPlus,
    #[serde(rename = "m-")]
    MMinus,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::GPlus,
        Direction::GMinus,
        Direction::MPlus,
        Direction::MMinus,
    ];

    pub fn inverse(self) -> Self {
        match self {
            Direction::GPlus => Direction::GMinus,
            Direction::GMinus => Direction::GPlus,
            Direction::MPlus => Direction::MMinus,
            Direction::MMinus => Direction::MPlus,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Direction::GPlus | Direction::MPlus => 1.0,
            Direction::GMinus | Direction::MMinus => -1.0,
        }
    }

    pub fn is_g(self) -> bool {
        matches!(self, Direction::GPlus | Direction::GMinus)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::GPlus => "g+",
            Direction::GMinus => "g-",
            Direction::MPlus => "m+",
            Direction::MMinus => "m-",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g+" => Ok(Direction::GPlus),
            "g-" => Ok(Direction::GMinus),
            "m+" => Ok(Direction::MPlus),
            "m-" => Ok(Direction::MMinus),
            other => Err(format!(
                "unknown direction {other:?} (expected g+, g-, m+, m-)"
            )),
        }
    }
}

/// Diagonal generators `G_3` and `M_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    G3,
    M3,
}

fn guarded_ratio(num: f64, den: f64, what: &str) -> Result<f64> {
    if den.abs() < DENOMINATOR_GUARD {
        return Err(GmpError::Label(format!(
            "{what}: denominator {den:e} vanishes"
        )));
    }
    Ok(num / den)
}

/// Radicand of the normalized ladder coefficient for `dir` acting on `label`.
pub fn ladder_radicand(label: &AlgebraLabel, dir: Direction) -> Result<f64> {
    let AlgebraLabel { l, m, g } = *label;
    match dir {
        Direction::GPlus => guarded_ratio(
            (g + 1.0) * (m - g) * (m + g) * (g + l) * (g - l + 1.0),
            g * (m - g - 1.0) * (m + g + 1.0),
            "G+",
        ),
        Direction::GMinus => guarded_ratio(
            (g - 1.0) * (m - g) * (m + g) * (g - l) * (g + l - 1.0),
            g * (m - g + 1.0) * (m + g - 1.0),
            "G-",
        ),
        Direction::MPlus => guarded_ratio(
            (m - g) * (m + g) * (m + l) * (m - l + 1.0),
            (m - g + 1.0) * (m + g + 1.0),
            "M+",
        ),
        Direction::MMinus => guarded_ratio(
            (m - g) * (m + g) * (m - l) * (m + l - 1.0),
            (m - g - 1.0) * (m + g - 1.0),
            "M-",
        ),
    }
}

/// Coefficient `c` in `X Phi_{m,g} = c Phi_{target}` for the normalized
/// extended functions. `G+-` carry an overall minus sign, `M+-` do not.
pub fn ladder_coeff(label: &AlgebraLabel, dir: Direction) -> Result<f64> {
    let r = ladder_radicand(label, dir)?;
    if r < -RADICAND_DUST {
        return Err(GmpError::Domain {
            name: "ladder radicand",
            value: r,
            reason: "target label outside the bound-state region",
        });
    }
    let root = r.max(0.0).sqrt();
    Ok(if dir.is_g() { -root } else { root })
}

/// Anything with a radial profile in `y` and its derivative.
pub trait RadialFunction {
    fn value(&self, y: f64) -> f64;
    fn deriv(&self, y: f64) -> f64;
}

impl RadialFunction for BoundState {
    fn value(&self, y: f64) -> f64 {
        self.phi_unchecked(y)
    }

    fn deriv(&self, y: f64) -> f64 {
        self.dphi_dy_unchecked(y)
    }
}

/// Unnormalized radial function of an arbitrary label,
/// `y^{(m+g)/2} (1+y)^{(g-m)/2} 2F1(g + l, g + 1 - l; m + g + 1; -y)`.
///
/// Needed where the label is not a normalizable state (e.g. `m = l`).
#[derive(Debug, Clone, PartialEq)]
pub struct LabelFunction {
    label: AlgebraLabel,
    poly: Vec<f64>,
}

impl LabelFunction {
    pub fn new(label: AlgebraLabel) -> Result<Self> {
        let n_real = label.level_index();
        let n = n_real.round();
        if n < 0.0 || (n_real - n).abs() > 1e-9 * label.l.max(1.0) {
            return Err(GmpError::Label(format!(
                "n = -l - g = {n_real} is not a non-negative integer"
            )));
        }
        let poly = hyp2f1_poly_in_y(n as usize, label.g + 1.0 - label.l, label.m + label.g + 1.0)?;
        Ok(Self { label, poly })
    }
}

impl RadialFunction for LabelFunction {
    fn value(&self, y: f64) -> f64 {
        let (p, _) = poly_eval(&self.poly, y);
        (self.label.alpha() * y.ln() - self.label.beta() * y.ln_1p()).exp() * p
    }

    fn deriv(&self, y: f64) -> f64 {
        let (p, dp) = poly_eval(&self.poly, y);
        let pre = (self.label.alpha() * y.ln() - self.label.beta() * y.ln_1p()).exp();
        pre * (p * (self.label.alpha() / y - self.label.beta() / (1.0 + y)) + dp)
    }
}

fn check_grid(y_grid: &[f64]) -> Result<()> {
    match y_grid.iter().find(|&&y| !(y > 0.0 && y.is_finite())) {
        Some(&y) => Err(GmpError::Domain {
            name: "y",
            value: y,
            reason: "ladder grid must be interior (y > 0)",
        }),
        None => Ok(()),
    }
}

/// Radial part of `X (e^{i m xi} f(y) e^{i g eta})` for a ladder generator.
///
/// ```text
/// G+- f = -1/2 [ -+2 sqrt(y(1+y)) f' + sqrt((1+y)/y) (m+g) f - sqrt(y/(1+y)) (m-g) f ]
/// M+- f =  1/2 [ -+2 sqrt(y(1+y)) f' + sqrt((1+y)/y) (m+g) f + sqrt(y/(1+y)) (m-g) f ]
/// ```
pub fn ladder_apply_radial<F: RadialFunction + ?Sized>(
    f: &F,
    label: &AlgebraLabel,
    dir: Direction,
    y_grid: &[f64],
) -> Result<Vec<f64>> {
    check_grid(y_grid)?;
    let (m, g) = (label.m, label.g);
    let s = dir.sign();
    Ok(y_grid
        .iter()
        .map(|&y| {
            let v = f.value(y);
            let dv = f.deriv(y);
            let outer = (y * (1.0 + y)).sqrt();
            let inner = ((1.0 + y) / y).sqrt();
            let ratio = (y / (1.0 + y)).sqrt();
            let diff = -s * 2.0 * outer * dv + inner * (m + g) * v;
            if dir.is_g() {
                -0.5 * (diff - ratio * (m - g) * v)
            } else {
                0.5 * (diff + ratio * (m - g) * v)
            }
        })
        .collect())
}

/// Reduced ladder action on a bound state sampled at `y_grid`.
pub fn reduced_ladder_apply(
    state: &BoundState,
    dir: Direction,
    y_grid: &[f64],
) -> Result<Vec<f64>> {
    ladder_apply_radial(state, &state.label(), dir, y_grid)
}

/// `G_3` multiplies by `g`, `M_3` by `m`.
pub fn reduced_weight_apply(state: &BoundState, w: Weight, y_grid: &[f64]) -> Result<Vec<f64>> {
    check_grid(y_grid)?;
    let lab = state.label();
    let factor = match w {
        Weight::G3 => lab.g,
        Weight::M3 => lab.m,
    };
    Ok(y_grid
        .iter()
        .map(|&y| factor * state.phi_unchecked(y))
        .collect())
}

/// One end of a satellite step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatelliteEnd {
    pub k: f64,
    pub b: f64,
    pub n: usize,
    pub label: AlgebraLabel,
}

/// One ladder step between satellite potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatelliteStep {
    pub direction: Direction,
    pub coeff: f64,
    pub source: SatelliteEnd,
    pub target: SatelliteEnd,
}

impl SatelliteStep {
    pub fn target_model(&self) -> Result<GmpModel> {
        GmpModel::new(self.target.k, self.target.b)
    }

    pub fn target_state(&self) -> Result<BoundState> {
        BoundState::new(&self.target_model()?, self.target.n)
    }
}

/// Parameters of the satellite reached from level `n` of `model` by `dir`.
///
/// `G+-`: `b' = 2 g b / (2g +- b +- 2)`, `n' = n -+ 1`.
/// `M+-`: `b' = 2 C b / (2C +- g b)`, `n' = n`.
/// In both cases `k' = k b^2 / b'^2`.
pub fn satellite_step(model: &GmpModel, n: usize, dir: Direction) -> Result<SatelliteStep> {
    let state_level = model.level(n)?;
    let label = AlgebraLabel {
        l: model.l(),
        m: state_level.alpha + state_level.beta,
        g: -(n as f64 + model.l()),
    };
    let (b, g, c, s) = (model.b(), label.g, model.c(), dir.sign());
    let (num, den, n_target) = match dir {
        Direction::GPlus | Direction::GMinus => {
            let nt = n as i64 - s as i64;
            (2.0 * g * b, 2.0 * g + s * (b + 2.0), nt)
        }
        Direction::MPlus | Direction::MMinus => (2.0 * c * b, 2.0 * c + s * g * b, n as i64),
    };
    if den.abs() < DENOMINATOR_GUARD {
        return Err(GmpError::Step(format!(
            "{dir}: denominator {den:e} vanishes"
        )));
    }
    let b_target = num / den;
    if !(b_target > 0.0 && b_target.is_finite()) {
        return Err(GmpError::Step(format!(
            "{dir}: b' = {b_target} is not positive"
        )));
    }
    if n_target < 0 {
        return Err(GmpError::Step(format!(
            "{dir}: target level n' = {n_target} < 0"
        )));
    }
    let k_target = model.k() * b * b / (b_target * b_target);
    let target_model = GmpModel::new(k_target, b_target)?;
    if n_target > target_model.n_max() {
        return Err(GmpError::Step(format!(
            "{dir}: level {n_target} is not bound in the satellite (n_max = {})",
            target_model.n_max()
        )));
    }
    let coeff = ladder_coeff(&label, dir)?;
    let t_level = target_model.level(n_target as usize)?;
    Ok(SatelliteStep {
        direction: dir,
        coeff,
        source: SatelliteEnd {
            k: model.k(),
            b,
            n,
            label,
        },
        target: SatelliteEnd {
            k: k_target,
            b: b_target,
            n: n_target as usize,
            label: AlgebraLabel {
                l: target_model.l(),
                m: t_level.alpha + t_level.beta,
                g: -(n_target as f64 + target_model.l()),
            },
        },
    })
}

/// Physical-unit view of a satellite step: `a`, `mu`, `hbar` are held fixed so
/// only `D` and `r_e` move, and `D b^2 / a^2` is conserved.
pub fn satellite_params(p: &PhysicalParams, step: &SatelliteStep) -> Result<PhysicalParams> {
    let model = GmpModel::new(step.target.k, step.target.b)?;
    PhysicalParams::from_model(&model, p.a, p.mu, p.hbar)
}

/// Walks a sequence of directions starting from level `n` of `model`.
pub fn satellite_chain(
    model: &GmpModel,
    n: usize,
    dirs: &[Direction],
) -> Result<Vec<SatelliteStep>> {
    let mut out = Vec::with_capacity(dirs.len());
    let (mut current, mut level) = (*model, n);
    for &dir in dirs {
        let step = satellite_step(&current, level, dir)?;
        current = step.target_model()?;
        level = step.target.n;
        out.push(step);
    }
    Ok(out)
}

fn product_or_fallback(
    label: &AlgebraLabel,
    down: Direction,
    up: Direction,
    weight: f64,
) -> Result<f64> {
    // -X+ X- + W^2 - W, with -X- X+ + W^2 + W when X- leaves the bound region.
    let via_down = ladder_coeff(label, down).and_then(|c_down| {
        let back = ladder_coeff(&label.shifted(down), up)?;
        Ok(-c_down * back + weight * weight - weight)
    });
    match via_down {
        Ok(v) => Ok(v),
        Err(_) => {
            let c_up = ladder_coeff(label, up)?;
            let back = ladder_coeff(&label.shifted(up), down)?;
            Ok(-c_up * back + weight * weight + weight)
        }
    }
}

/// Eigenvalue of `-G+ G- + G3^2 - G3` on `label`, assembled from the ladder
/// coefficients. Equals `l (l - 1) = k b^2`.
pub fn casimir_check(label: &AlgebraLabel) -> Result<f64> {
    product_or_fallback(label, Direction::GMinus, Direction::GPlus, label.g)
}

/// Same for the second factor, `-M+ M- + M3^2 - M3`.
pub fn casimir_check_m(label: &AlgebraLabel) -> Result<f64> {
    product_or_fallback(label, Direction::MMinus, Direction::MPlus, label.m)
}

/// Pöschl–Teller image of a bound level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtpImage {
    /// `|m1| = 2 beta_n`.
    pub m1_abs: f64,
    /// `|m2| = 2 alpha_n`.
    pub m2_abs: f64,
    /// `4C - 1 = -(2l - 1)^2`.
    pub eps_bar: f64,
}

pub fn ptp_map(model: &GmpModel, n: usize) -> Result<PtpImage> {
    let rec = model.level(n)?;
    let l = model.l();
    Ok(PtpImage {
        m1_abs: 2.0 * rec.beta,
        m2_abs: 2.0 * rec.alpha,
        eps_bar: -(2.0 * l - 1.0).powi(2),
    })
}

/// Both sides of `(2l - 1)^2 = [2 (beta_n - alpha_n) - 1 - 2n]^2`.
pub fn ptp_consistency(model: &GmpModel, n: usize) -> Result<(f64, f64)> {
    let rec = model.level(n)?;
    let lhs = (2.0 * model.l() - 1.0).powi(2);
    let rhs = (2.0 * (rec.beta - rec.alpha) - 1.0 - 2.0 * n as f64).powi(2);
    Ok((lhs, rhs))
}

/// Number of Pöschl–Teller bound states for fixed `|m1|`, `|m2|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtpCount {
    pub count: u64,
    /// False when `|m1|` or `|m2|` is not an integer; the count then
    /// enumerates `L = L_max, L_max - 2, ... >= 0` with real `L_max`.
    pub integer_inputs: bool,
}

pub fn ptp_bound_count(m1_abs: f64, m2_abs: f64) -> Result<PtpCount> {
    for (name, v) in [("|m1|", m1_abs), ("|m2|", m2_abs)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(GmpError::Domain {
                name,
                value: v,
                reason: "must be finite and >= 0",
            });
        }
    }
    let integer_inputs = m1_abs.fract() == 0.0 && m2_abs.fract() == 0.0;
    if m2_abs - m1_abs >= -1.0 {
        return Ok(PtpCount {
            count: 0,
            integer_inputs,
        });
    }
    let l_max = m1_abs - m2_abs - 2.0;
    let count = if l_max < 0.0 {
        0
    } else {
        (l_max / 2.0).floor() as u64 + 1
    };
    Ok(PtpCount {
        count,
        integer_inputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small() -> GmpModel {
        GmpModel::new(4.0, 2.0).unwrap()
    }

    #[test]
    fn highest_weight_annihilated_by_g_plus() {
        let s = BoundState::new(&small(), 0).unwrap();
        assert_eq!(ladder_coeff(&s.label(), Direction::GPlus).unwrap(), 0.0);
    }

    #[test]
    fn lowest_weight_annihilated_by_m_minus() {
        let lab = AlgebraLabel {
            l: 2.5,
            m: 2.5,
            g: -3.5,
        };
        assert_eq!(ladder_coeff(&lab, Direction::MMinus).unwrap(), 0.0);
    }

    #[test]
    fn radicand_out_of_region_is_an_error() {
        // n = 1 of (4, 2) has alpha < 1/2: M- would need alpha' < 0.
        let s = BoundState::new(&small(), 1).unwrap();
        assert!(ladder_coeff(&s.label(), Direction::MMinus).is_err());
    }

    #[test]
    fn g_minus_step_from_ground_state() {
        let step = satellite_step(&small(), 0, Direction::GMinus).unwrap();
        let l = (1.0 + 65f64.sqrt()) / 2.0;
        let g = -l;
        let want = 2.0 * g * 2.0 / (2.0 * g - 2.0 - 2.0);
        assert_relative_eq!(step.target.b, want, max_relative = 1e-14);
        assert_relative_eq!(step.target.b, 1.3875484503402900695, max_relative = 1e-12);
        assert_eq!(step.target.n, 1);
        assert_relative_eq!(
            step.target.k * step.target.b.powi(2),
            16.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            step.target.label.m,
            step.source.label.m,
            max_relative = 1e-12
        );
    }

    #[test]
    fn m_steps_are_mutually_inverse() {
        let m = small();
        let up = satellite_step(&m, 0, Direction::MPlus).unwrap();
        let back = satellite_step(&up.target_model().unwrap(), 0, Direction::MMinus).unwrap();
        assert_relative_eq!(back.target.k, 4.0, max_relative = 1e-12);
        assert_relative_eq!(back.target.b, 2.0, max_relative = 1e-12);
        assert_relative_eq!(up.target.label.g, up.source.label.g, max_relative = 1e-12);
    }

    #[test]
    fn step_errors() {
        let m = small();
        assert!(matches!(
            satellite_step(&m, 0, Direction::GPlus),
            Err(GmpError::Step(_))
        ));
        assert!(satellite_step(&m, 1, Direction::MMinus).is_err());
        assert!(satellite_step(&m, 2, Direction::MPlus).is_err());
    }

    #[test]
    fn casimir_examples() {
        for s in BoundState::all(&small()).unwrap() {
            let lab = s.label();
            assert_relative_eq!(casimir_check(&lab).unwrap(), 16.0, max_relative = 1e-10);
            assert_relative_eq!(casimir_check_m(&lab).unwrap(), 16.0, max_relative = 1e-10);
        }
        // l = 3/2 gives l (l - 1) = 3/4; pick a bound label of that irrep.
        let m = GmpModel::new(3.0, 0.5).unwrap();
        assert_eq!(m.l(), 1.5);
        if m.level_count() > 0 {
            let s = BoundState::new(&m, 0).unwrap();
            assert_relative_eq!(
                casimir_check(&s.label()).unwrap(),
                0.75,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn g3_multiplies_by_g() {
        let s = BoundState::new(&small(), 1).unwrap();
        let ys = [0.1, 1.0, 4.0];
        let out = reduced_weight_apply(&s, Weight::G3, &ys).unwrap();
        for (y, v) in ys.iter().zip(out) {
            assert_relative_eq!(v, s.label().g * s.phi(*y).unwrap(), max_relative = 1e-15);
        }
    }

    #[test]
    fn ground_state_g_plus_action_vanishes() {
        let s = BoundState::new(&small(), 0).unwrap();
        let ys: Vec<f64> = (1..200).map(|i| 1e-3 * 1.06f64.powi(i)).collect();
        let out = reduced_ladder_apply(&s, Direction::GPlus, &ys).unwrap();
        let peak = ys
            .iter()
            .map(|&y| s.phi(y).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(out.iter().all(|v| v.abs() <= 1e-10 * peak));
    }

    #[test]
    fn m_minus_action_vanishes_at_m_equal_l() {
        let lab = AlgebraLabel {
            l: 3.25,
            m: 3.25,
            g: -3.25,
        };
        let f = LabelFunction::new(lab).unwrap();
        let ys: Vec<f64> = (1..100).map(|i| 0.01 * i as f64).collect();
        let out = ladder_apply_radial(&f, &lab, Direction::MMinus, &ys).unwrap();
        let peak = ys.iter().map(|&y| f.value(y).abs()).fold(0.0, f64::max);
        assert!(out.iter().all(|v| v.abs() <= 1e-10 * peak));
    }

    #[test]
    fn ladder_grid_must_be_interior() {
        let s = BoundState::new(&small(), 0).unwrap();
        assert!(reduced_ladder_apply(&s, Direction::GMinus, &[0.5, 0.0]).is_err());
    }

    #[test]
    fn ptp_examples() {
        let m = small();
        let img = ptp_map(&m, 0).unwrap();
        assert_eq!(img.eps_bar + (2.0 * m.l() - 1.0).powi(2), 0.0);
        assert_relative_eq!(img.m1_abs - img.m2_abs, 2.0 * m.l(), max_relative = 1e-13);
        let (lhs, rhs) = ptp_consistency(&m, 1).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn ptp_count_examples() {
        assert_eq!(ptp_bound_count(3.0, 2.0).unwrap().count, 0);
        assert_eq!(ptp_bound_count(6.0, 2.0).unwrap().count, 2);
        assert_eq!(ptp_bound_count(5.0, 5.0).unwrap().count, 0);
        // L_max = 3 (odd): L in {3, 1}
        assert_eq!(ptp_bound_count(7.0, 2.0).unwrap().count, 2);
        let c = ptp_bound_count(6.5, 2.0).unwrap();
        assert!(!c.integer_inputs);
        assert!(ptp_bound_count(-1.0, 0.0).is_err());
        // L = 0 level sits at eps_bar = -1
        assert_eq!(-(0.0f64 + 1.0).powi(2), -1.0);
    }

    #[test]
    fn direction_parsing() {
        for d in Direction::ALL {
            assert_eq!(d.to_string().parse::<Direction>().unwrap(), d);
            assert_eq!(d.inverse().inverse(), d);
        }
        assert!("x+".parse::<Direction>().is_err());
    }
}
