//! Independent numerical machinery: the eigenvalue oracle, quadrature, and
//! the applied pieces built on them (overlaps, level fitting).

mod fit;
mod grid;
mod numerov;
mod overlap;
mod quadrature;

pub use fit::{fit_levels, synthetic_levels, FitOptions, FitResult, ObservedLevel};
pub use grid::GridSpec;
pub use numerov::{
    count_levels_below, count_nodes, gmp_levels, numerov_eigenvalue, numerov_eigenvalue_with,
    numerov_solution, OriginBehavior,
};
pub use overlap::{franck_condon, inner_product, norm_integral, FranckCondon};
pub use quadrature::{integrate, integrate_with, Quadrature, QuadratureOptions};
