//! Concrete physical set-ups: Gaussian wave packets, a symmetric double
//! well, spin-differentiated electrons and the singlet.

mod double_well;
mod gaussian;
mod spin;
pub mod tridiagonal;

pub use double_well::{
    box_first_gap, localized_states, solve_double_well, DoubleWell, LocalizedStates, WellPreset,
    WellReport, WellSpec, EIGEN_RESIDUAL_TOL, MIN_GRID_POINTS,
};
pub use gaussian::{gaussian_amplitude, gaussian_overlap, overlap_quadrature, GaussianSpec};
pub use spin::{singlet, spin_differentiating, spin_down, spin_overlap, spin_up, SpinOverlapReport};
