//! Analytic solution of the generalized Morse potential
//!
//! ```text
//! V(r) = D [1 - b / (e^{a r} - 1)]^2,   b = e^{a r_e} - 1
//! ```
//!
//! with an independent numerical oracle for every closed-form result.
//!
//! * [`model`]: parameters, dimensionless reduction, spectrum, Dunham series.
//! * [`wavefunction`]: normalized hypergeometric eigenfunctions.
//! * [`algebra`]: `so(2,2) = su(1,1) + su(1,1)` ladders, satellite potentials,
//!   Casimirs and the Pöschl–Teller correspondence.
//! * [`susyqm`]: factorization, shape-invariant partner, intertwining and the
//!   normalization recursion.
//! * [`numerics`]: Numerov shooting, adaptive quadrature, Franck–Condon
//!   overlaps and level fitting.
//! * [`verify`]: the invariant suite behind `gmp verify`.

pub mod algebra;
pub mod error;
pub mod model;
pub mod numerics;
pub mod par;
pub mod special;
pub mod susyqm;
pub mod verify;
pub mod wavefunction;

pub use algebra::{AlgebraLabel, Direction, SatelliteStep};
pub use error::{GmpError, Result};
pub use model::{GmpModel, LevelRecord, PhysicalParams};
pub use par::Execution;
pub use wavefunction::BoundState;
