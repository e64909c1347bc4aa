//! Refinement studies on a Gaussian blob in the unit box.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fields::{
    continuity_residual, emergent_current, gauss_residual_of, make_transverse_field, ChargeSeries, GaussianBlob,
    FIELD_CHECK_WIDTH_FRACTION, STUDY_WIDTH_FRACTION,
};
use super::grid::GridSpec;
use super::ops::{curl, interior_rms_vector};
use super::poisson::CoulombSolver;
use crate::kinematics::ModelParams;
use crate::quadrature::convergence_slope;
use crate::{Result, Vec3};

pub const STUDY_SIZES: [usize; 3] = [32, 48, 64];
const BOX: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub sizes: Vec<usize>,
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares log-log slope; absent when an error is exactly zero.
    pub order: Option<f64>,
}

impl RefinementStudy {
    fn new(sizes: &[usize], spacings: Vec<f64>, errors: Vec<f64>) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = spacings.iter().copied().zip(errors.iter().copied()).collect();
        let order = if errors.iter().all(|&e| e > 0.0) { Some(convergence_slope(&pairs)?) } else { None };
        Ok(RefinementStudy { sizes: sizes.to_vec(), spacings, errors, order })
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().fold(0.0, |m, &e| m.max(e))
    }
}

fn study_blob() -> GaussianBlob {
    GaussianBlob { center: Vec3::ZERO, width: BOX * STUDY_WIDTH_FRACTION, charge: 1.0 }
}

/// Gauss-law residual of `E' + coulomb_correction(j0)` for a random
/// transverse `E'` and the study blob.
pub fn gauss_study(sizes: &[usize], seed: u64, p: &ModelParams) -> Result<RefinementStudy> {
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for &n in sizes {
        let spec = GridSpec::centered(n, BOX)?;
        let j0 = study_blob().sample(spec);
        let ec = CoulombSolver::new(spec).coulomb_correction(&j0, p)?;
        let e2 = make_transverse_field(seed, spec).axpy(1.0, &ec)?;
        hs.push(spec.h);
        errors.push(gauss_residual_of(&e2, &j0, p)?);
    }
    RefinementStudy::new(sizes, hs, errors)
}

/// `|| curl E_c || / || E_c ||` for the Coulomb correction of the study blob.
pub fn curl_study(sizes: &[usize], p: &ModelParams) -> Result<RefinementStudy> {
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for &n in sizes {
        let spec = GridSpec::centered(n, BOX)?;
        let ec = CoulombSolver::new(spec).coulomb_correction(&study_blob().sample(spec), p)?;
        hs.push(spec.h);
        errors.push(interior_rms_vector(&curl(&ec)) / interior_rms_vector(&ec));
    }
    RefinementStudy::new(sizes, hs, errors)
}

/// Largest relative deviation of the grid Coulomb correction from the
/// closed-form field of a blob of width `L/10`, over grid points with
/// `4h <= r <= L/4`.
pub fn blob_field_error(n: usize, p: &ModelParams) -> Result<f64> {
    let spec = GridSpec::centered(n, BOX)?;
    let blob = GaussianBlob { width: BOX * FIELD_CHECK_WIDTH_FRACTION, ..study_blob() };
    let ec = CoulombSolver::new(spec).coulomb_correction(&blob.sample(spec), p)?;
    let mut worst: f64 = 0.0;
    for (idx, got) in ec.values.iter().enumerate() {
        let x = spec.point_at(idx);
        let r = (x - blob.center).norm();
        if r < 4.0 * spec.h || r > 0.25 * spec.length() {
            continue;
        }
        let want = blob.analytic_field(x, p);
        worst = worst.max((*got - want).norm() / want.norm());
    }
    Ok(worst)
}

/// Continuity residual for a blob whose amplitude oscillates in time, with
/// the time step refined together with the grid spacing.
pub fn continuity_study(sizes: &[usize], p: &ModelParams) -> Result<RefinementStudy> {
    let blob = study_blob();
    let period = 4.0 * BOX / p.c;
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for &n in sizes {
        let spec = GridSpec::centered(n, BOX)?;
        let dt = 0.5 * spec.h / p.c;
        let t0 = 0.1 * period;
        let series = ChargeSeries::sample(spec, dt, 3, |x, t| {
            (1.0 + 0.5 * (2.0 * PI * (t0 + t) / period).sin()) * blob.density(x)
        })?;
        let j = emergent_current(&series, p)?;
        hs.push(spec.h);
        errors.push(continuity_residual(&series, &j, p)?);
    }
    RefinementStudy::new(sizes, hs, errors)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmergentReport {
    pub gauss: RefinementStudy,
    pub curl: RefinementStudy,
    pub continuity: RefinementStudy,
    pub blob_field_error: f64,
}

impl EmergentReport {
    pub fn run(sizes: &[usize], seed: u64, p: &ModelParams) -> Result<Self> {
        let finest = sizes.iter().copied().max().unwrap_or(STUDY_SIZES[2]);
        Ok(EmergentReport {
            gauss: gauss_study(sizes, seed, p)?,
            curl: curl_study(sizes, p)?,
            continuity: continuity_study(sizes, p)?,
            blob_field_error: blob_field_error(finest, p)?,
        })
    }

    pub fn gauss_order_ok(&self) -> bool {
        self.gauss.order.is_some_and(|o| (o - 2.0).abs() <= 0.3)
    }

    /// The central-difference curl of a central-difference gradient cancels
    /// identically, so the check is that it stays at roundoff.
    pub fn curl_free(&self) -> bool {
        self.curl.max_error() <= 1e-10
    }

    pub fn continuity_order_ok(&self) -> bool {
        self.continuity.order.is_some_and(|o| (o - 2.0).abs() <= 0.3)
    }

    pub fn blob_field_ok(&self) -> bool {
        self.blob_field_error < 0.01
    }

    pub fn passes(&self) -> bool {
        self.gauss_order_ok() && self.curl_free() && self.continuity_order_ok() && self.blob_field_ok()
    }
}
