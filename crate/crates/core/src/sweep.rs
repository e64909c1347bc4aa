//! Radial sweep of the reduced interaction density against the photon cost.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::kinematics::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::variational::{lemma_bound, tau_specific, w_specific, z_ph, SAMPLE_DIRECTION};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub kph_min: f64,
    pub kph_max: f64,
    pub steps: usize,
}

impl Default for SweepRange {
    fn default() -> Self {
        SweepRange { kph_min: 0.01, kph_max: 2.0, steps: 40 }
    }
}

impl SweepRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.kph_min > 0.0 && self.kph_min.is_finite()) {
            return Err(Error::InvalidParams(format!("kph_min must be > 0, got {}", self.kph_min)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParams("sweep needs at least one step".into()));
        }
        if !(self.kph_max.is_finite() && (self.kph_max > self.kph_min || self.steps == 1)) {
            return Err(Error::InvalidParams(format!(
                "kph_max must exceed kph_min, got {} <= {}",
                self.kph_max, self.kph_min
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.kph_min];
        }
        let span = self.kph_max - self.kph_min;
        (0..self.steps).map(|i| self.kph_min + span * i as f64 / (self.steps - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k_ph_abs: f64,
    pub w: f64,
    /// `hbar c |k_ph| Z^ph(k_ph)`
    pub photon_cost: f64,
    pub integrand: f64,
    /// Absent outside `|k_ph| < kappa`.
    pub lemma_bound: Option<f64>,
}

fn row(r: f64, p: &ModelParams, spec: &QuadratureSpec) -> Result<SweepRow> {
    let k_ph = SAMPLE_DIRECTION * r;
    let w = w_specific(k_ph, p, spec)?;
    let photon_cost = p.hbar * p.c * r * z_ph(&tau_specific(), k_ph, p, spec)?;
    let lemma_bound = if r < p.kappa { Some(lemma_bound(k_ph, p)?) } else { None };
    Ok(SweepRow { k_ph_abs: r, w, photon_cost, integrand: w - photon_cost, lemma_bound })
}

/// Evaluates the sweep on `threads` workers (0 picks the default). Rows
/// come back in sweep order, and each row is computed by one worker, so
/// the output does not depend on the thread count.
pub fn sweep_w(range: &SweepRange, p: &ModelParams, spec: &QuadratureSpec, threads: usize) -> Result<Vec<SweepRow>> {
    range.validate()?;
    p.validate()?;
    spec.validate()?;
    let points = range.points();
    run_points(&points, p, spec, threads)
}

#[cfg(feature = "parallel")]
fn run_points(points: &[f64], p: &ModelParams, spec: &QuadratureSpec, threads: usize) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| points.par_iter().map(|&r| row(r, p, spec)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_points(points: &[f64], p: &ModelParams, spec: &QuadratureSpec, _threads: usize) -> Result<Vec<SweepRow>> {
    points.iter().map(|&r| row(r, p, spec)).collect()
}

pub const CSV_HEADER: &str = "k_ph_abs,w,hbar_c_kph_zph,w_minus_hbar_c_kph_zph,lemma_bound";

/// CSV with 17 significant digits per value; `nan` marks a missing bound.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let bound = r.lemma_bound.map_or_else(|| "nan".to_string(), |b| format!("{b:.16e}"));
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{}", r.k_ph_abs, r.w, r.photon_cost, r.integrand, bound);
    }
    out
}

/// First sweep radius at which the integrand is no longer positive.
pub fn crossover(rows: &[SweepRow]) -> Option<f64> {
    rows.iter().find(|r| r.integrand <= 0.0).map(|r| r.k_ph_abs)
}
