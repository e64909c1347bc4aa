//! Grid realization of the emergent picture: a transverse electric field
//! plus the Coulomb correction of a charge density, the Gauss-law residual
//! of the sum, and the induced current that restores continuity.

mod fields;
mod grid;
pub mod io;
mod ops;
mod poisson;
mod study;

pub use fields::{
    continuity_residual, coulomb_correction, emergent_current, emergent_current_with_sign, emergent_fields,
    gauss_residual, gauss_residual_of, make_transverse_field, ChargeSeries, CurrentSign, EmergentFields,
    GaussianBlob, TransverseModes, CHARGE_CLEARANCE, FIELD_CHECK_WIDTH_FRACTION, STUDY_WIDTH_FRACTION,
};
pub use grid::{GridSpec, ScalarGrid, VectorGrid};
pub use ops::{curl, divergence, gradient, interior_rms, interior_rms_vector, NORM_MARGIN};
pub use poisson::{direct_potential, self_cell_integral, CoulombSolver};
pub use study::{
    blob_field_error, continuity_study, curl_study, gauss_study, EmergentReport, RefinementStudy,
    STUDY_SIZES,
};
