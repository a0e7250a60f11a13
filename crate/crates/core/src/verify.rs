//! Invariant suite: every closed-form result checked against an independent
//! route (a second formula, quadrature, or the Numerov oracle).
//!
//! Each check reports a measured deviation and the tolerance it is held to.
//! Boolean properties report `0` (holds) or `1` (violated) against `0`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{
    casimir_check, casimir_check_m, ladder_apply_radial, ladder_coeff, ptp_bound_count,
    ptp_consistency, reduced_ladder_apply, satellite_params, satellite_step, Direction,
    LabelFunction, RadialFunction, SatelliteStep,
};
use crate::error::{GmpError, Result};
use crate::model::{morse_energy_dimensionless, GmpModel, PhysicalParams};
use crate::numerics::{
    count_nodes, fit_levels, franck_condon, gmp_levels, inner_product, integrate_with,
    numerov_eigenvalue, numerov_eigenvalue_with, synthetic_levels, FitOptions, GridSpec,
    OriginBehavior, QuadratureOptions,
};
use crate::par::{self, Execution};
use crate::susyqm::{
    intertwined, ln_normalization_recursion, partner, partner_potential_from_superpotential,
};
use crate::wavefunction::{ln_normalization, BoundState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Wavefunction,
    Algebra,
    Susyqm,
    Numerics,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [
        Suite::Core,
        Suite::Wavefunction,
        Suite::Algebra,
        Suite::Susyqm,
        Suite::Numerics,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Core => "core",
            Suite::Wavefunction => "wavefunction",
            Suite::Algebra => "algebra",
            Suite::Susyqm => "susyqm",
            Suite::Numerics => "numerics",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = GmpError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "core" => Ok(Suite::Core),
            "wavefunction" => Ok(Suite::Wavefunction),
            "algebra" => Ok(Suite::Algebra),
            "susyqm" | "susy" => Ok(Suite::Susyqm),
            "numerics" => Ok(Suite::Numerics),
            "all" => Ok(Suite::All),
            other => Err(GmpError::Precondition(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Error message when the check could not be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn within(suite: Suite, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail: None,
        }
    }

    fn flag(suite: Suite, name: impl Into<String>, holds: bool) -> Self {
        Self::within(suite, name, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    fn eval(
        suite: Suite,
        name: impl Into<String>,
        tolerance: f64,
        f: impl FnOnce() -> Result<f64>,
    ) -> Self {
        match f() {
            Ok(measured) => Self::within(suite, name, measured, tolerance),
            Err(e) => Self {
                suite,
                name: name.into(),
                measured: f64::NAN,
                tolerance,
                passed: false,
                detail: Some(e.to_string()),
            },
        }
    }

    fn eval_flag(suite: Suite, name: impl Into<String>, f: impl FnOnce() -> Result<bool>) -> Self {
        Self::eval(suite, name, 0.0, || {
            f().map(|ok| if ok { 0.0 } else { 1.0 })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            write!(
                f,
                "{:<4} {:<12} {:<width$}  {:>11.3e} <= {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.measured,
                c.tolerance,
            )?;
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Runs one module suite, or all of them.
pub fn run(suite: Suite, exec: Execution) -> Report {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::MODULES.to_vec(),
        s => vec![s],
    };
    let checks = par::map(exec, &suites, |&s| match s {
        Suite::Core => core_checks(),
        Suite::Wavefunction => wavefunction_checks(),
        Suite::Algebra => algebra_checks(),
        Suite::Susyqm => susyqm_checks(exec),
        Suite::Numerics => numerics_checks(exec),
        Suite::All => unreachable!("expanded above"),
    });
    Report {
        checks: checks.into_iter().flatten().collect(),
    }
}

/// The two reference models: `(k, b) = (4, 2)` and `D = 10, a = 1, r_e = 2.5`
/// with `mu = hbar = 1`.
pub fn reference_models() -> [(&'static str, GmpModel); 2] {
    [
        ("(4,2)", GmpModel::new(4.0, 2.0).expect("valid model")),
        (
            "D=10,a=1,re=2.5",
            GmpModel::new(20.0, 2.5f64.exp_m1()).expect("valid model"),
        ),
    ]
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |acc, v| if v.is_nan() { f64::NAN } else { acc.max(v) })
}

fn try_max<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Result<f64>) -> Result<f64> {
    let mut acc = 0.0f64;
    for item in items {
        let v = f(item)?;
        acc = if v.is_nan() { f64::NAN } else { acc.max(v) };
    }
    Ok(acc)
}

fn core_checks() -> Vec<Check> {
    let s = Suite::Core;
    let mut out = Vec::new();
    for ((name, m), want_n_max) in reference_models().into_iter().zip([1, 3]) {
        let levels = m.levels();
        let kb2 = m.k() * m.b() * m.b();
        out.push(Check::within(
            s,
            format!("{name}: l(l-1) = kb^2"),
            rel(m.l() * (m.l() - 1.0), kb2),
            1e-14,
        ));
        out.push(Check::flag(
            s,
            format!("{name}: n_max = {want_n_max}"),
            m.n_max() == want_n_max,
        ));
        out.push(Check::within(
            s,
            format!("{name}: beta - alpha = n + l"),
            max_of(
                levels
                    .iter()
                    .map(|r| rel(r.beta - r.alpha, r.n as f64 + m.l())),
            ),
            1e-12,
        ));
        out.push(Check::within(
            s,
            format!("{name}: beta^2 - alpha^2 = kb(b+2)"),
            max_of(
                levels
                    .iter()
                    .map(|r| rel(r.beta * r.beta - r.alpha * r.alpha, m.beta_alpha_gap())),
            ),
            1e-12,
        ));
        out.push(Check::flag(
            s,
            format!("{name}: 0 < eps_n < k, increasing"),
            levels
                .iter()
                .all(|r| r.eps > 0.0 && r.eps < m.k() && r.alpha > 0.0 && r.alpha < r.beta)
                && levels.windows(2).all(|w| w[1].eps > w[0].eps),
        ));
        out.push(Check::within(
            s,
            format!("{name}: eps_n two closed forms"),
            max_of(
                levels
                    .iter()
                    .map(|r| rel(m.energy_direct(r.n as f64), r.eps)),
            ),
            1e-12,
        ));
    }
    out.push(Check::eval(
        s,
        "Dunham series vs finite differences",
        1e-5,
        || {
            try_max([2.0, 10.0, 100.0], |b| {
                let m = GmpModel::new(20.0, b)?;
                let series = m.dunham_coefficients(3);
                let fd = m.dunham_coefficients_numeric(3, 0.1);
                Ok(max_of(series.iter().zip(&fd).map(|(a, b)| rel(*a, *b))))
            })
        },
    ));
    out.push(Check::eval_flag(
        s,
        "Morse limit: gap shrinks like 1/b",
        morse_limit_holds,
    ));
    out.push(Check::eval_flag(
        s,
        "Dunham |eps(3)| decreases with b",
        || {
            let e3: Vec<f64> = [10.0, 100.0, 1000.0]
                .into_iter()
                .map(|b| GmpModel::new(20.0, b).map(|m| m.dunham_coefficients(3)[3].abs()))
                .collect::<Result<_>>()?;
            Ok(e3.windows(2).all(|w| w[1] < w[0]))
        },
    ));
    out
}

/// For `k = 20`, `n = 0, 1, 2`: the gap to the Morse level strictly decreases
/// over `b = 1e2, 1e3, 1e4` and `b * gap` stays within a factor of 4.
pub fn morse_limit_holds() -> Result<bool> {
    let k = 20.0;
    for n in 0..3 {
        let gaps: Vec<f64> = [1e2, 1e3, 1e4]
            .into_iter()
            .map(|b| Ok(GmpModel::new(k, b)?.level(n)?.eps - morse_energy_dimensionless(k, n)))
            .map(|r: Result<f64>| r.map(f64::abs))
            .collect::<Result<_>>()?;
        let scaled: Vec<f64> = gaps
            .iter()
            .zip([1e2, 1e3, 1e4])
            .map(|(g, b)| g * b)
            .collect();
        let spread =
            max_of(scaled.iter().copied()) / scaled.iter().copied().fold(f64::INFINITY, f64::min);
        if !(gaps.windows(2).all(|w| w[1] < w[0]) && spread < 4.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

const QUAD_TOL: f64 = 1e-11;

fn wavefunction_checks() -> Vec<Check> {
    let s = Suite::Wavefunction;
    let mut out = Vec::new();
    for (name, m) in reference_models() {
        out.push(Check::eval(
            s,
            format!("{name}: N_n closed form vs recursion"),
            1e-10,
            || {
                try_max(0..m.level_count(), |n| {
                    Ok(rel(
                        ln_normalization_recursion(&m, n)?.exp(),
                        ln_normalization(&m, n)?.exp(),
                    ))
                })
            },
        ));
        let states = match BoundState::all(&m) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::eval(s, format!("{name}: bound states"), 0.0, || {
                    Err(e)
                }));
                continue;
            }
        };
        out.push(Check::eval(
            s,
            format!("{name}: |int psi_n^2 dx - 1|"),
            1e-8,
            || {
                try_max(
                    &states,
                    |a| Ok((inner_product(a, a, QUAD_TOL)? - 1.0).abs()),
                )
            },
        ));
        out.push(Check::eval(
            s,
            format!("{name}: |<psi_n|psi_m>|, n != m"),
            1e-8,
            || {
                try_max(&states, |a| {
                    try_max(states.iter().filter(|b| b.n() != a.n()), |b| {
                        Ok(inner_product(a, b, QUAD_TOL)?.abs())
                    })
                })
            },
        ));
        out.push(Check::eval_flag(
            s,
            format!("{name}: psi_n has n nodes"),
            || {
                let grid = GridSpec::for_model(&m, GridSpec::DEFAULT_POINTS)?;
                Ok(states.iter().all(|st| {
                    let values: Vec<f64> = grid
                        .points()
                        .iter()
                        .map(|&x| st.psi(x).unwrap_or(0.0))
                        .collect();
                    count_nodes(&values) == st.n()
                }))
            },
        ));
        out.push(Check::flag(
            s,
            format!("{name}: polynomial starts at 1"),
            states.iter().all(|st| st.poly()[0] == 1.0),
        ));
    }
    out
}

/// Interior `y` samples covering `x` in `[0.02, 25]`.
pub fn ladder_grid() -> Vec<f64> {
    (0..400)
        .map(|i| {
            let x = 0.02 * (25.0f64 / 0.02).powf(i as f64 / 399.0);
            x.exp_m1().recip()
        })
        .collect()
}

/// `sup |L f - c f'| / sup |L f|` for one admissible ladder step.
pub fn ladder_mismatch(state: &BoundState, step: &SatelliteStep, ys: &[f64]) -> Result<f64> {
    let applied = reduced_ladder_apply(state, step.direction, ys)?;
    let target = step.target_state()?;
    let mut diff = 0.0f64;
    let mut peak = 0.0f64;
    for (&y, &v) in ys.iter().zip(&applied) {
        diff = diff.max((v - step.coeff * target.phi(y)?).abs());
        peak = peak.max(v.abs());
    }
    Ok(diff / peak)
}

/// A deterministic in-domain walk: at each step the first direction (from a
/// rotating preference list) that stays bound and does not undo the last step.
pub fn in_domain_walk(model: &GmpModel, n: usize, length: usize) -> Result<Vec<SatelliteStep>> {
    let prefs = [
        Direction::GMinus,
        Direction::MPlus,
        Direction::GPlus,
        Direction::MMinus,
    ];
    let mut out: Vec<SatelliteStep> = Vec::with_capacity(length);
    let (mut current, mut level) = (*model, n);
    for i in 0..length {
        let last = out.last().map(|s| s.direction);
        let step = (0..4)
            .map(|j| prefs[(i + j) % 4])
            .filter(|d| Some(d.inverse()) != last)
            .find_map(|d| satellite_step(&current, level, d).ok())
            .ok_or_else(|| GmpError::Step(format!("no admissible step after {i} steps")))?;
        current = step.target_model()?;
        level = step.target.n;
        out.push(step);
    }
    Ok(out)
}

/// Largest relative drift of `k b^2` and `D b^2 / a^2` along a walk, and the
/// largest change of `m` under G-steps or of `g` under M-steps.
pub fn walk_drift(model: &GmpModel, walk: &[SatelliteStep]) -> Result<(f64, f64)> {
    let kb2 = model.k() * model.b() * model.b();
    let p0 = PhysicalParams::from_model(model, 0.7, 1.3, 0.9)?;
    let f0 = p0.satellite_invariant();
    let mut conserved = 0.0f64;
    let mut label = 0.0f64;
    for step in walk {
        let t = step.target;
        conserved = conserved.max(rel(t.k * t.b * t.b, kb2));
        conserved = conserved.max(rel(satellite_params(&p0, step)?.satellite_invariant(), f0));
        let (src, dst) = (step.source.label, t.label);
        label = label.max(if step.direction.is_g() {
            rel(dst.m, src.m)
        } else {
            rel(dst.g, src.g)
        });
    }
    Ok((conserved, label))
}

fn algebra_checks() -> Vec<Check> {
    let s = Suite::Algebra;
    let mut out = Vec::new();
    let (_, small) = reference_models()[0];
    let ys = ladder_grid();

    out.push(Check::eval(
        s,
        "(4,2): ladder action = coeff x satellite state",
        1e-8,
        || {
            let mut worst = 0.0f64;
            let mut pairs = 0;
            for n in 0..small.level_count() {
                let state = BoundState::new(&small, n)?;
                for dir in Direction::ALL {
                    let Ok(step) = satellite_step(&small, n, dir) else {
                        continue;
                    };
                    worst = worst.max(ladder_mismatch(&state, &step, &ys)?);
                    pairs += 1;
                }
            }
            if pairs == 0 {
                return Err(GmpError::Precondition("no admissible ladder pair".into()));
            }
            Ok(worst)
        },
    ));
    out.push(Check::eval(
        s,
        "(4,2): G+ annihilates g = -l",
        1e-10,
        || {
            let ground = BoundState::new(&small, 0)?;
            let applied = reduced_ladder_apply(&ground, Direction::GPlus, &ys)?;
            let peak = max_of(
                ys.iter()
                    .map(|&y| ground.phi(y).map(f64::abs).unwrap_or(0.0)),
            );
            Ok(max_of(applied.iter().map(|v| v.abs())) / peak)
        },
    ));
    out.push(Check::eval(s, "(4,2): M- annihilates m = l", 1e-10, || {
        let l = small.l();
        let label = crate::algebra::AlgebraLabel { l, m: l, g: -l };
        let f = LabelFunction::new(label)?;
        let applied = ladder_apply_radial(&f, &label, Direction::MMinus, &ys)?;
        let coeff = ladder_coeff(&label, Direction::MMinus)?.abs();
        let peak = max_of(ys.iter().map(|&y| f.value(y).abs()));
        Ok((max_of(applied.iter().map(|v| v.abs())) / peak).max(coeff))
    }));
    for (name, m) in reference_models() {
        let want = m.k() * m.b() * m.b();
        out.push(Check::eval(
            s,
            format!("{name}: Casimir = l(l-1) = kb^2"),
            1e-8,
            || {
                try_max(0..m.level_count(), |n| {
                    let label = BoundState::new(&m, n)?.label();
                    Ok(rel(casimir_check(&label)?, want).max(rel(casimir_check_m(&label)?, want)))
                })
            },
        ));
        let walk = in_domain_walk(&m, 0, 5);
        out.push(Check::eval(
            s,
            format!("{name}: 5-step walk conserves kb^2, Db^2/a^2"),
            1e-12,
            || Ok(walk_drift(&m, walk.as_ref().map_err(Clone::clone)?)?.0),
        ));
        out.push(Check::eval(
            s,
            format!("{name}: m fixed by G, g fixed by M"),
            1e-12,
            || Ok(walk_drift(&m, walk.as_ref().map_err(Clone::clone)?)?.1),
        ));
        out.push(Check::eval(
            s,
            format!("{name}: PTP (2l-1)^2 consistency"),
            1e-12,
            || {
                try_max(0..m.level_count(), |n| {
                    let (lhs, rhs) = ptp_consistency(&m, n)?;
                    Ok(rel(rhs, lhs))
                })
            },
        ));
    }
    out.push(Check::eval_flag(
        s,
        "PTP count is 0 when |m2| - |m1| >= -1",
        || {
            let mut ok = true;
            for i in 0..40 {
                let m1 = 0.37 * i as f64;
                for dm in [-1.0, -0.5, 0.0, 0.25, 3.0] {
                    let m2 = m1 + dm;
                    if m2 >= 0.0 {
                        ok &= ptp_bound_count(m1, m2)?.count == 0;
                    }
                }
            }
            Ok(ok)
        },
    ));
    out
}

fn susyqm_checks(exec: Execution) -> Vec<Check> {
    let s = Suite::Susyqm;
    let mut out = Vec::new();
    for (name, m) in reference_models() {
        let p = partner(&m);
        let pm = || p.clone();
        out.push(Check::eval(s, format!("{name}: l' = l + 1"), 1e-12, || {
            Ok(rel(pm()?.l_prime, m.l() + 1.0))
        }));
        out.push(Check::eval(
            s,
            format!("{name}: alpha'_n = alpha_(n+1), beta'_n = beta_(n+1)"),
            1e-12,
            || {
                let pg = pm()?.as_gmp()?;
                if pg.n_max() != m.n_max() - 1 {
                    return Ok(f64::INFINITY);
                }
                try_max(0..pg.level_count(), |n| {
                    let (a, b) = (pg.level(n)?, m.level(n + 1)?);
                    Ok(rel(a.alpha, b.alpha).max(rel(a.beta, b.beta)))
                })
            },
        ));
        out.push(Check::eval(s, format!("{name}: R = k - k'"), 1e-12, || {
            let pm = pm()?;
            Ok(rel(pm.r, m.k() - pm.k_prime))
        }));
        out.push(Check::eval(
            s,
            format!("{name}: v1 = v + 2W' pointwise"),
            1e-10,
            || {
                let pm = pm()?;
                try_max((1..200).map(|i| 0.05 * i as f64), |x| {
                    let direct = partner_potential_from_superpotential(&m, x)?;
                    Ok((pm.potential(x) - direct).abs() / direct.abs().max(1.0))
                })
            },
        ));
        out.push(Check::eval(
            s,
            format!("{name}: Numerov on v1 gives eps_(n+1)"),
            1e-6,
            || {
                let pm = pm()?;
                let pg = pm.as_gmp()?;
                let grid = GridSpec::for_model(&pg, GridSpec::DEFAULT_POINTS)?;
                let errs = par::map_range(exec, pg.level_count(), |n| {
                    let e = numerov_eigenvalue_with(
                        |x| pm.potential(x),
                        n,
                        &grid,
                        1e-13,
                        OriginBehavior::PowerLaw(pg.l()),
                    )?;
                    Ok(rel(e, m.level(n + 1)?.eps))
                });
                try_max(errs, |r: Result<f64>| r)
            },
        ));
        out.push(Check::eval(
            s,
            format!("{name}: A- psi_n = c psi'_(n-1)"),
            1e-8,
            || {
                let pg = pm()?.as_gmp()?;
                let xs: Vec<f64> = (1..=400).map(|i| 0.05 * i as f64).collect();
                try_max(1..m.level_count(), |n| {
                    let lhs = intertwined(&BoundState::new(&m, n)?, &xs)?;
                    let target = BoundState::new(&pg, n - 1)?;
                    let rhs: Vec<f64> = xs.iter().map(|&x| target.psi(x)).collect::<Result<_>>()?;
                    let dot: f64 = lhs.iter().zip(&rhs).map(|(a, b)| a * b).sum();
                    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
                    let peak = max_of(rhs.iter().map(|v| v.abs()));
                    Ok(max_of(lhs.iter().zip(&rhs).map(|(a, b)| (a - sign * b).abs())) / peak)
                })
            },
        ));
    }
    out
}

fn numerics_checks(exec: Execution) -> Vec<Check> {
    let s = Suite::Numerics;
    let mut out = Vec::new();
    for ((name, m), tol) in reference_models().into_iter().zip([1e-6, 1e-5]) {
        let grid = GridSpec::for_model(&m, GridSpec::DEFAULT_POINTS);
        let oracle = grid
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|g| gmp_levels(&m, g, 1e-13, exec));
        out.push(Check::eval(
            s,
            format!("{name}: Numerov matches eps_n"),
            tol,
            || {
                let levels = oracle.as_ref().map_err(Clone::clone)?;
                try_max(levels.iter().enumerate(), |(n, e)| {
                    Ok(rel(*e, m.level(n)?.eps))
                })
            },
        ));
        out.push(Check::eval_flag(
            s,
            format!("{name}: oracle finds n_max + 1 levels"),
            || Ok(oracle.as_ref().map_err(Clone::clone)?.len() == m.level_count()),
        ));
    }
    out.push(Check::eval(
        s,
        "grid convergence: |err(h)/err(h/2) - 16| / 16",
        0.5,
        || {
            let (_, m) = reference_models()[1];
            let coarse = GridSpec::for_model(&m, 5000)?;
            let fine = coarse.refined();
            let ratios = par::map(exec, &[coarse, fine], |g| {
                gmp_levels(&m, g, 1e-14, Execution::Sequential)
            });
            let [c, f] = [&ratios[0], &ratios[1]].map(|r| r.as_ref().map_err(Clone::clone));
            let (c, f) = (c?, f?);
            try_max(0..m.level_count(), |n| {
                let exact = m.level(n)?.eps;
                let ratio = (c[n] - exact).abs() / (f[n] - exact).abs();
                Ok((ratio - 16.0).abs() / 16.0)
            })
        },
    ));
    out.push(Check::eval(
        s,
        "harmonic self-test levels 1, 3, 5",
        1e-6,
        || {
            let grid = GridSpec::new(1e-4, 20.0, GridSpec::DEFAULT_POINTS)?;
            try_max(0..3, |n| {
                let e = numerov_eigenvalue(|x| (x - 10.0).powi(2), n, &grid, 1e-13)?;
                Ok(rel(e, 2.0 * n as f64 + 1.0))
            })
        },
    ));
    out.push(Check::eval(
        s,
        "quadrature: halving every panel moves the norm",
        QUAD_TOL,
        || {
            let (_, m) = reference_models()[1];
            try_max(BoundState::all(&m)?, |st| {
                let cutoff = st.tail_cutoff(1e-12);
                let f = |x: f64| st.psi(x).map(|v| v * v).unwrap_or(0.0);
                let coarse: Vec<f64> = (0..=16).map(|i| cutoff * i as f64 / 16.0).collect();
                let fine: Vec<f64> = (0..=32).map(|i| cutoff * i as f64 / 32.0).collect();
                let opts = QuadratureOptions {
                    abs_tol: 0.1 * QUAD_TOL,
                    ..QuadratureOptions::default()
                };
                Ok((integrate_with(f, &coarse, opts)?.value
                    - integrate_with(f, &fine, opts)?.value)
                    .abs())
            })
        },
    ));
    out.push(Check::eval_flag(
        s,
        "(4,2): G- satellite overlap in (0, 1)",
        || {
            let (_, small) = reference_models()[0];
            let step = satellite_step(&small, 0, Direction::GMinus)?;
            let fc = franck_condon(
                &BoundState::new(&small, 0)?,
                &step.target_state()?,
                QUAD_TOL,
            )?;
            Ok(fc.overlap.abs() > 0.0 && fc.overlap.abs() < 1.0)
        },
    ));
    out.push(Check::eval(
        s,
        "fit round trip from a 20% offset guess",
        1e-4,
        || {
            let draws = [(10.0, 1.0, 2.5), (30.0, 0.8, 1.7), (45.0, 1.4, 3.2)];
            try_max(draws, |(d, a, re)| {
                let truth = PhysicalParams::new(d, a, re)?;
                let obs = synthetic_levels(&truth)?;
                let guess = PhysicalParams::new(1.2 * d, 1.2 * a, 1.2 * re)?;
                let fit = fit_levels(&obs, &guess, &FitOptions::default())?;
                if !fit.converged {
                    return Ok(f64::INFINITY);
                }
                Ok(rel(fit.params.depth, d)
                    .max(rel(fit.params.a, a))
                    .max(rel(fit.params.r_e, re)))
            })
        },
    ));
    out
}
