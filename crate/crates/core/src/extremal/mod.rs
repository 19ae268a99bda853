//! Elliptic kernel, the two-slit candidate map and the sharpness sweep.

mod elliptic;
mod families;
mod slit;
pub mod theta;

pub use elliptic::{weierstrass_p, EllipticParams, Q_MAX};
pub use families::{
    condition_residual, joukowski_family, joukowski_gauss, mobius_family, mobius_gauss,
    FamilyMember,
};
pub use slit::{
    calibrate_candidate, conjecture_row, conjecture_sweep, slit_annulus_map, symmetric_scale,
    Calibration, SlitMapCandidate, SweepRow, SweepTable,
};
