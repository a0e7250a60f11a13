//! Overlap integrals between bound states, possibly of different potentials.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::wavefunction::BoundState;

use super::grid::TAIL;
use super::quadrature::{integrate_with, QuadratureOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FranckCondon {
    pub overlap: f64,
    pub factor: f64,
}

// Panels clustered around both wells, then doubling out to the tail cutoff,
// so narrow peaks far from the origin are never straddled by one panel.
fn breakpoints(a: &BoundState, b: &BoundState) -> Vec<f64> {
    let cutoff = a.tail_cutoff(TAIL).max(b.tail_cutoff(TAIL));
    let mut pts = vec![0.0, cutoff];
    for s in [a, b] {
        let xe = s.model().well_position();
        for f in [0.125, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0] {
            pts.push(f * xe);
        }
        let mut step = 1.0;
        while xe + step < cutoff {
            pts.push(xe + step);
            step *= 2.0;
        }
    }
    pts.retain(|&x| (0.0..=cutoff).contains(&x));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|p, q| (*p - *q).abs() <= 1e-12 * cutoff);
    pts
}

/// `int_0^inf psi_a psi_b dx` to absolute tolerance `tol`.
pub fn inner_product(a: &BoundState, b: &BoundState, tol: f64) -> Result<f64> {
    let pts = breakpoints(a, b);
    let q = integrate_with(
        |x| {
            if x <= 0.0 {
                0.0
            } else {
                a.psi_unchecked(x) * b.psi_unchecked(x)
            }
        },
        &pts,
        QuadratureOptions {
            abs_tol: tol,
            ..QuadratureOptions::default()
        },
    )?;
    Ok(q.value)
}

/// `int_0^inf psi^2 dx`.
pub fn norm_integral(state: &BoundState, tol: f64) -> Result<f64> {
    inner_product(state, state, tol)
}

/// Overlap and its square between levels of two (generally different) wells.
pub fn franck_condon(a: &BoundState, b: &BoundState, tol: f64) -> Result<FranckCondon> {
    let overlap = inner_product(a, b, tol)?;
    Ok(FranckCondon {
        overlap,
        factor: overlap * overlap,
    })
}
