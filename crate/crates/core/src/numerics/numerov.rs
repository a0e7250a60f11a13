//! Numerov shooting for `-psi'' + v(x) psi = eps psi` on a uniform grid.
//!
//! Levels are bracketed by the node count of the outward solution, then
//! refined by bisecting on the Wronskian mismatch between an outward and an
//! inward solution at the potential minimum. Both branches are rescaled
//! whenever they grow past `RESCALE`.

use crate::error::{GmpError, Result};
use crate::model::GmpModel;
use crate::par::{self, Execution};

use super::grid::GridSpec;

const RESCALE: f64 = 1e100;
// Numerov weights 1 - h^2 (v - e)/12 must stay well away from zero.
const STABLE_WEIGHT: f64 = 0.25;
// Largest h^2 (v_edge - v_min) for which the well is still resolved.
const MAX_WELL_PHASE: f64 = 1.0;
const MAX_BISECTIONS: usize = 300;

/// Boundary behaviour imposed at the left end of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginBehavior {
    /// `psi = 0` at the first usable grid point.
    Dirichlet,
    /// `psi ~ x^p` near the origin (centrifugal-type `1/x^2` walls).
    PowerLaw(f64),
}

fn check_resolution(grid: &GridSpec, depth: f64) -> Result<()> {
    if grid.step().powi(2) * depth > MAX_WELL_PHASE {
        return Err(GmpError::Precondition(format!(
            "grid step {:.3e} is too coarse for a well of depth {depth:.3e}; \
             need step <= {:.3e} (use more points or a shorter grid)",
            grid.step(),
            (MAX_WELL_PHASE / depth).sqrt()
        )));
    }
    Ok(())
}

struct Problem {
    grid: GridSpec,
    h2: f64,
    v: Vec<f64>,
    start: usize,
    matching: usize,
    origin: OriginBehavior,
}

struct Outward {
    nodes: usize,
    pair: (f64, f64),
}

impl Problem {
    fn new<F: Fn(f64) -> f64>(
        potential: F,
        grid: &GridSpec,
        origin: OriginBehavior,
    ) -> Result<Self> {
        let v: Vec<f64> = grid.points().into_iter().map(&potential).collect();
        if v.iter().any(|x| x.is_nan()) {
            return Err(GmpError::Precondition(
                "potential is NaN on the grid".into(),
            ));
        }
        let h2 = grid.step().powi(2);
        let (matching, v_min) =
            v.iter().enumerate().fold(
                (0, f64::INFINITY),
                |acc, (i, &x)| if x < acc.1 { (i, x) } else { acc },
            );
        let start = v
            .iter()
            .position(|&x| h2 * (x - v_min) / 12.0 < STABLE_WEIGHT)
            .unwrap_or(0);
        let n = v.len();
        check_resolution(grid, v[n - 1] - v_min)?;
        let matching = matching.clamp(start + 2, n - 3);
        Ok(Self {
            grid: *grid,
            h2,
            v,
            start,
            matching,
            origin,
        })
    }

    fn v_min(&self) -> f64 {
        self.v[self.matching.min(self.v.len() - 1)].min(
            self.v[self.start..]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
        )
    }

    fn v_edge(&self) -> f64 {
        *self.v.last().expect("grid has points")
    }

    fn weight(&self, i: usize, e: f64) -> f64 {
        1.0 - self.h2 * (self.v[i] - e) / 12.0
    }

    fn outward_start(&self) -> (f64, f64) {
        match self.origin {
            OriginBehavior::Dirichlet => (0.0, 1.0),
            OriginBehavior::PowerLaw(p) => {
                let x0 = self.grid.x(self.start);
                let x1 = self.grid.x(self.start + 1);
                (1.0, (x1 / x0).powf(p).min(RESCALE))
            }
        }
    }

    fn step(&self, i: usize, e: f64, prev: f64, cur: f64, next_index: usize) -> f64 {
        let w_prev = self.weight(if next_index > i { i - 1 } else { i + 1 }, e);
        ((12.0 - 10.0 * self.weight(i, e)) * cur - w_prev * prev) / self.weight(next_index, e)
    }

    /// Outward sweep over the whole grid: node count and the pair at `matching`.
    fn outward(&self, e: f64, mut store: Option<&mut [f64]>) -> Outward {
        let (mut prev, mut cur) = self.outward_start();
        let mut nodes = 0;
        let mut last_sign = 0.0f64;
        let mut pair = (0.0, 0.0);
        let n = self.v.len();
        if let Some(s) = store.as_deref_mut() {
            s[self.start] = prev;
            s[self.start + 1] = cur;
        }
        for sgn in [prev, cur] {
            if sgn != 0.0 {
                last_sign = sgn.signum();
            }
        }
        for i in (self.start + 1)..(n - 1) {
            if i == self.matching {
                pair = (cur, 0.0);
            }
            let next = self.step(i, e, prev, cur, i + 1);
            if i == self.matching {
                pair.1 = next;
            }
            if next != 0.0 {
                if last_sign != 0.0 && next.signum() != last_sign {
                    nodes += 1;
                }
                last_sign = next.signum();
            }
            prev = cur;
            cur = next;
            if let Some(s) = store.as_deref_mut() {
                s[i + 1] = cur;
                if cur.abs() > RESCALE {
                    s[self.start..=i + 1].iter_mut().for_each(|x| *x /= RESCALE);
                }
            }
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
            }
        }
        Outward { nodes, pair }
    }

    /// Inward sweep from the right edge down to `matching`.
    fn inward(&self, e: f64, mut store: Option<&mut [f64]>) -> (f64, f64) {
        let n = self.v.len();
        let kappa = (self.v_edge() - e).max(0.0).sqrt();
        let mut prev = 1.0;
        let mut cur = (kappa * self.grid.step()).exp();
        if let Some(s) = store.as_deref_mut() {
            s[n - 1] = prev;
            s[n - 2] = cur;
        }
        let mut i = n - 2;
        while i > self.matching {
            let next = self.step(i, e, prev, cur, i - 1);
            prev = cur;
            cur = next;
            i -= 1;
            if let Some(s) = store.as_deref_mut() {
                s[i] = cur;
                if cur.abs() > RESCALE {
                    s[i..].iter_mut().for_each(|x| *x /= RESCALE);
                }
            }
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
            }
        }
        // (psi[matching], psi[matching + 1])
        (cur, prev)
    }

    /// Normalized Wronskian mismatch; continuous in `e`, zero at eigenvalues.
    fn mismatch(&self, e: f64) -> f64 {
        let (a0, a1) = self.outward(e, None).pair;
        let (b0, b1) = self.inward(e, None);
        let na = a0.hypot(a1);
        let nb = b0.hypot(b1);
        (a1 * b0 - a0 * b1) / (na * nb)
    }

    fn nodes(&self, e: f64) -> usize {
        self.outward(e, None).nodes
    }

    fn eigenvalue(&self, n: usize, tol: f64) -> Result<f64> {
        let mut lo = self.v_min();
        let mut hi = self.v_edge() - 1e-12 * self.v_edge().abs().max(1.0);
        if hi <= lo {
            return Err(GmpError::NoEigenvalue {
                n,
                reason: "potential has no well on the grid".into(),
            });
        }
        let top = self.nodes(hi);
        if top < n + 1 {
            return Err(GmpError::NoEigenvalue {
                n,
                reason: format!("only {top} levels below the asymptote on this grid"),
            });
        }
        let scale = hi.abs().max(lo.abs()).max(1e-300);
        let mut iterations = 0;
        // isolate level n by node count
        while !(self.nodes(lo) == n && self.nodes(hi) == n + 1) {
            let mid = 0.5 * (lo + hi);
            if self.nodes(mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
            if hi - lo <= tol * scale || iterations > MAX_BISECTIONS {
                return Ok(0.5 * (lo + hi));
            }
        }
        let mut f_lo = self.mismatch(lo);
        let f_hi = self.mismatch(hi);
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_lo.signum() == f_hi.signum() {
            // no clean sign change: finish on node count alone
            for _ in 0..MAX_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if self.nodes(mid) > n {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= tol * mid.abs().max(1e-300) {
                    break;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= tol * mid.abs().max(1e-300) {
                break;
            }
            let f_mid = self.mismatch(mid);
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn solution(&self, e: f64) -> Vec<f64> {
        let n = self.v.len();
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        self.outward(e, Some(&mut left));
        self.inward(e, Some(&mut right));
        let m = self.matching;
        let scale = if right[m] != 0.0 {
            left[m] / right[m]
        } else {
            1.0
        };
        let mut psi: Vec<f64> = (0..n)
            .map(|i| if i <= m { left[i] } else { right[i] * scale })
            .collect();
        let h = self.grid.step();
        let norm = (psi.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
        if norm > 0.0 {
            psi.iter_mut().for_each(|x| *x /= norm);
        }
        psi
    }
}

/// The `n`-th eigenvalue with a Dirichlet start at the left edge.
pub fn numerov_eigenvalue<F: Fn(f64) -> f64>(
    potential: F,
    n: usize,
    grid: &GridSpec,
    tol: f64,
) -> Result<f64> {
    numerov_eigenvalue_with(potential, n, grid, tol, OriginBehavior::Dirichlet)
}

/// The `n`-th eigenvalue with an explicit left-edge behaviour. `tol` is the
/// relative width of the final energy bracket; the discretization error of
/// the grid comes on top.
pub fn numerov_eigenvalue_with<F: Fn(f64) -> f64>(
    potential: F,
    n: usize,
    grid: &GridSpec,
    tol: f64,
    origin: OriginBehavior,
) -> Result<f64> {
    Problem::new(potential, grid, origin)?.eigenvalue(n, tol)
}

/// Number of levels strictly below `e_top` (node count of the outward solution).
pub fn count_levels_below<F: Fn(f64) -> f64>(
    potential: F,
    grid: &GridSpec,
    e_top: f64,
    origin: OriginBehavior,
) -> Result<usize> {
    Ok(Problem::new(potential, grid, origin)?.nodes(e_top))
}

/// Matched Numerov solution at energy `e`, unit-normalized on the grid.
pub fn numerov_solution<F: Fn(f64) -> f64>(
    potential: F,
    e: f64,
    grid: &GridSpec,
    origin: OriginBehavior,
) -> Result<Vec<f64>> {
    Ok(Problem::new(potential, grid, origin)?.solution(e))
}

/// Every level of a generalized Morse potential below its asymptote `k`,
/// computed by the oracle with the `x^l` wall behaviour.
pub fn gmp_levels(
    model: &GmpModel,
    grid: &GridSpec,
    tol: f64,
    exec: Execution,
) -> Result<Vec<f64>> {
    // the sampled minimum can miss a narrow well entirely; the depth is known
    check_resolution(grid, model.k())?;
    let origin = OriginBehavior::PowerLaw(model.l());
    let problem = Problem::new(|x| model.potential(x), grid, origin)?;
    let found = problem.nodes(model.k() * (1.0 - 1e-12));
    let levels = par::map_range(exec, found, |n| problem.eigenvalue(n, tol));
    levels.into_iter().collect()
}

/// Strict sign changes, ignoring entries with `|v| < 1e-13 max|v|`.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = 1e-13 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn oscillator_grid() -> GridSpec {
        GridSpec::new(1e-4, 20.0, 20_000).unwrap()
    }

    #[test]
    fn harmonic_oscillator_levels() {
        let v = |x: f64| (x - 10.0).powi(2);
        for n in 0..5 {
            let e = numerov_eigenvalue(v, n, &oscillator_grid(), 1e-12).unwrap();
            assert_relative_eq!(e, 2.0 * n as f64 + 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn oscillator_solution_nodes() {
        let v = |x: f64| (x - 10.0).powi(2);
        let g = oscillator_grid();
        for n in 0..4 {
            let e = numerov_eigenvalue(v, n, &g, 1e-12).unwrap();
            let psi = numerov_solution(v, e, &g, OriginBehavior::Dirichlet).unwrap();
            assert_eq!(count_nodes(&psi), n);
        }
    }

    #[test]
    fn count_nodes_ignores_dust() {
        assert_eq!(count_nodes(&[1.0, 2.0, 1.0]), 0);
        assert_eq!(count_nodes(&[1.0, -1.0]), 1);
        assert_eq!(count_nodes(&[1.0, 1e-15, -1e-15, 1.0]), 0);
        assert_eq!(count_nodes(&[0.0, 1.0, 0.0, -1.0, 0.0, 2.0]), 2);
        assert_eq!(count_nodes(&[]), 0);
    }

    #[test]
    fn too_few_levels_is_an_error() {
        let v = |x: f64| (x - 10.0).powi(2);
        let g = GridSpec::new(8.0, 12.0, 2000).unwrap();
        // v(edge) = 4: only levels 1 and 3 fit
        assert!(matches!(
            numerov_eigenvalue(v, 2, &g, 1e-10),
            Err(GmpError::NoEigenvalue { .. })
        ));
    }
}
