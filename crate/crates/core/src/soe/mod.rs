//! Sparsity order estimation: blocking the measurement vector, building
//! sensing matrices whose block matrix has rank equal to the sparsity, and
//! estimating that rank in noise.

mod blocking;
mod design;
mod mos;

pub use blocking::{blocking_for, blocking_params, extract_blocks, BlockingScheme, Overlap};
pub use design::{
    build_nonoverlap_design, build_overlap_design, noise_gram_check, verify_design,
    verify_design_with, DesignKind, DesignReport, MeasurementDesign,
};
pub use mos::{
    calibrate_mos, calibrate_mos_for_scheme, estimate_order, estimate_order_noiseless,
    MosCalibration, OrderEstimator, RankEstimator, MIN_CALIBRATION_TRIALS,
};
