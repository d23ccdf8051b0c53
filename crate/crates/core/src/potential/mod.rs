//! Conjugated Dirichlet solves on the fixed templates, interface gradient
//! ratios, and walk-on-spheres estimates of harmonic measure.

mod grid;
mod logh;
mod pcg;
mod ratio;
mod solve;
mod wos;

pub use grid::{Cut, Grid, Template};
pub use pcg::{pcg, CsrMatrix, PcgReport};
pub use solve::{
    solve_conjugated, solve_with_guess, BoundaryData, GridSolution, SolveSpec, MASK_ACTIVE, MASK_DIRICHLET,
    MASK_EXTERIOR,
};
pub use logh::{log_h_profile, symmetric_patch_check, LogHEstimate, LogHRow, SymmetryCheck};
pub use ratio::{cone_samples, interface_gradient_ratio, max_log_ratio, max_log_ratio_against, plane_samples, RatioSample};
pub use wos::{half_space_disc_measure, wos_sample, MeasureHistogram, PatchPartition, WosOptions, BATCHES};
