use serde::{Deserialize, Serialize};

use super::energy::{
    electron_energy_density, energy_breakdown, EnergyBreakdown, EnergyQuadrature, InteractionRoute,
    PhotonProfile,
};
use super::interaction::{w_general, w_specific, z_ph};
use super::lemma::{epsilon_lemma, solve_delta};
use super::tau::tau_specific;
use crate::kinematics::{omega, rho_el, ModelParams};
use crate::quadrature::QuadratureSpec;
use crate::{Result, Vec3};

/// Direction along which the radial integrand is sampled.
pub const SAMPLE_DIRECTION: Vec3 = Vec3::new(1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSample {
    pub k_ph_abs: f64,
    pub w: f64,
    pub photon_cost: f64,
    pub integrand: f64,
    /// `w` from the general double sum at the same photon.
    pub w_general: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub epsilon: f64,
    pub delta: f64,
    pub amplitude: f64,
    pub rho_el0_requested: f64,
    pub rho_el0_used: f64,
    pub clamped: bool,
    pub normalization: f64,
    /// Energies with `w` from the reduced half-space form.
    pub energies: EnergyBreakdown,
    /// Energies with `w` from the general double sum for the same table.
    pub energies_general: EnergyBreakdown,
    pub binding_negative: bool,
    pub samples: Vec<IntegrandSample>,
    pub integrand_positive: bool,
    /// Largest relative deviation of the per-k electron energy from
    /// `rho_el(k) hbar w(k)`.
    pub electron_density_error: f64,
}

impl TheoremReport {
    pub fn passes(&self) -> bool {
        self.binding_negative && self.integrand_positive && self.electron_density_error < 1e-10
    }
}

/// Builds the explicit trial state (specific table, uniform photon ball of
/// radius `delta`, peak density clamped to `(4 pi / 3) delta^3 ell^3`) and
/// evaluates its energies.
pub fn theorem_check(p: &ModelParams, quad: &EnergyQuadrature) -> Result<TheoremReport> {
    p.validate()?;
    let epsilon = epsilon_lemma(p)?;
    let delta = solve_delta(p)?;
    let cap = 4.0 * std::f64::consts::PI / 3.0 * delta.powi(3) * p.ell.powi(3);
    let rho_el0_used = p.rho_el0.min(cap);
    let params = p.with_rho_el0(rho_el0_used);
    let prof = PhotonProfile::uniform(delta, p.ell)?;
    let tau = tau_specific();

    let energies = energy_breakdown(&tau, &prof, &params, quad, InteractionRoute::SpecificReduction)?;
    let energies_general = energy_breakdown(&tau, &prof, &params, quad, InteractionRoute::General)?;

    let n_samples = 16;
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let r = delta * (i as f64 + 0.5) / n_samples as f64;
        let k_ph = SAMPLE_DIRECTION * r;
        let w = w_specific(k_ph, &params, &quad.inner)?;
        let photon_cost = params.hbar * params.c * r * z_ph(&tau, k_ph, &params, &quad.inner)?;
        samples.push(IntegrandSample {
            k_ph_abs: r,
            w,
            photon_cost,
            integrand: w - photon_cost,
            w_general: w_general(&tau, k_ph, &params, &quad.inner)?,
        });
    }

    let density_spec = QuadratureSpec::fixed(4, 4);
    let mut electron_density_error: f64 = 0.0;
    for k in [Vec3::ZERO, Vec3::new(0.3, -0.2, 0.1), Vec3::new(-1.1, 0.4, 0.9), Vec3::new(0.0, 2.5, 0.0)] {
        let got = electron_energy_density(k, &tau, &prof, &params, &density_spec)?;
        let want = rho_el(k, &params) * params.hbar * omega(k, &params);
        electron_density_error = electron_density_error.max((got - want).abs() / want);
    }

    Ok(TheoremReport {
        epsilon,
        delta,
        amplitude: prof.amplitude,
        rho_el0_requested: p.rho_el0,
        rho_el0_used,
        clamped: rho_el0_used < p.rho_el0,
        normalization: prof.normalization(p.ell, &QuadratureSpec::fixed(4, 2))?,
        binding_negative: energies.binding < 0.0,
        energies,
        energies_general,
        integrand_positive: samples.iter().all(|s| s.integrand > 0.0),
        samples,
        electron_density_error,
    })
}
