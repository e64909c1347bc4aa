use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::interaction::{w_general, w_specific, z_ph};
use super::tau::{PhotonFrame, TauTable};
use crate::kinematics::{omega, rho_el, ModelParams};
use crate::quadrature::{ball_nodes, integrate_ball, integrate_full_space_gaussian, QuadratureSpec};
use crate::{Error, Result, Vec3};

/// Uniform photon density on the ball `|k_ph| < delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonProfile {
    pub delta: f64,
    pub amplitude: f64,
}

impl PhotonProfile {
    /// Amplitude `3 / (4 pi delta^3 ell^3)`, which normalizes the profile.
    pub fn uniform(delta: f64, ell: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("profile radius must be > 0, got {delta}")));
        }
        Ok(PhotonProfile { delta, amplitude: 3.0 / (4.0 * PI * delta.powi(3) * ell.powi(3)) })
    }

    pub fn density(&self, k_ph: Vec3) -> f64 {
        if k_ph.norm() < self.delta {
            self.amplitude
        } else {
            0.0
        }
    }

    /// `ell^3 int rho(k_ph) dk_ph`, which must equal one.
    pub fn normalization(&self, ell: f64, spec: &QuadratureSpec) -> Result<f64> {
        let amp = self.amplitude;
        Ok(ell.powi(3) * integrate_ball(|_| amp, self.delta, spec)?)
    }

    /// Pointwise constraint `rho(k_ph) rho_el(k) <= 1`; the Gaussian profile
    /// peaks at `k = 0`.
    pub fn respects_pointwise_bound(&self, p: &ModelParams) -> bool {
        self.amplitude * p.rho_el0 <= 1.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PhotonProfile { delta: self.delta, amplitude: self.amplitude * factor }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub e_ph: f64,
    pub e_el: f64,
    pub e_int: f64,
    pub binding: f64,
}

impl EnergyBreakdown {
    pub fn new(e_ph: f64, e_el: f64, e_int: f64) -> Self {
        EnergyBreakdown { e_ph, e_el, e_int, binding: e_ph + e_int }
    }

    pub fn total(&self) -> f64 {
        self.binding + self.e_el
    }
}

/// Which expression supplies `w(k_ph)` in the interaction energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InteractionRoute {
    /// [`w_general`] with the table passed to [`energy_breakdown`].
    General,
    /// [`w_specific`], the reduced half-space form; the table argument only
    /// feeds `Z^ph`.
    SpecificReduction,
}

/// Quadrature settings for the nested integrals of [`energy_breakdown`]:
/// `outer` for the photon ball, `inner` for every k-space integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyQuadrature {
    pub outer: QuadratureSpec,
    pub inner: QuadratureSpec,
}

impl Default for EnergyQuadrature {
    fn default() -> Self {
        EnergyQuadrature {
            outer: QuadratureSpec { radial_order: 6, angular_order: 4, max_refinements: 0, ..Default::default() },
            inner: QuadratureSpec { radial_order: 32, angular_order: 16, max_refinements: 2, ..Default::default() },
        }
    }
}

/// `Z^ph(k_ph)` and `w(k_ph)` at one photon node.
fn photon_node(
    tau: &TauTable,
    k_ph: Vec3,
    p: &ModelParams,
    inner: &QuadratureSpec,
    route: InteractionRoute,
) -> Result<(f64, f64)> {
    let z = z_ph(tau, k_ph, p, inner)?;
    let w = match route {
        InteractionRoute::General => w_general(tau, k_ph, p, inner)?,
        InteractionRoute::SpecificReduction => w_specific(k_ph, p, inner)?,
    };
    Ok((z, w))
}

#[cfg(feature = "parallel")]
fn map_nodes<T, F>(nodes: &[(Vec3, f64)], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Vec3) -> T + Sync,
{
    use rayon::prelude::*;
    nodes.par_iter().map(|&(k, _)| f(k)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_nodes<T, F>(nodes: &[(Vec3, f64)], f: F) -> Vec<T>
where
    F: Fn(Vec3) -> T,
{
    nodes.iter().map(|&(k, _)| f(k)).collect()
}

// (e_ph, e_int) on one outer rule; the reduction runs in node order.
fn photon_energies(
    tau: &TauTable,
    prof: &PhotonProfile,
    p: &ModelParams,
    quad: &EnergyQuadrature,
    route: InteractionRoute,
    orders: (usize, usize),
) -> Result<(f64, f64)> {
    let nodes = ball_nodes(prof.delta, orders.0, orders.1);
    let values = map_nodes(&nodes, |k| photon_node(tau, k, p, &quad.inner, route));
    let (mut e_ph, mut e_int) = (0.0, 0.0);
    for (&(k, weight), value) in nodes.iter().zip(values) {
        let (z, w) = value?;
        let rho = prof.density(k);
        e_ph += weight * p.hbar * p.c * k.norm() * rho * z;
        e_int -= weight * rho * w;
    }
    let l3 = p.ell.powi(3);
    Ok((l3 * e_ph, l3 * e_int))
}

/// `ell^3 int hbar w(k) rho_el(k) dk`.
pub fn electron_kinetic_energy(p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let integral = integrate_full_space_gaussian(|k| p.hbar * omega(k, p) * rho_el(k, p), Vec3::Z, p.sigma, spec)?;
    Ok(p.ell.powi(3) * integral)
}

/// Photon, electron and interaction expectations of the trial state.
pub fn energy_breakdown(
    tau: &TauTable,
    prof: &PhotonProfile,
    p: &ModelParams,
    quad: &EnergyQuadrature,
    route: InteractionRoute,
) -> Result<EnergyBreakdown> {
    p.validate()?;
    quad.outer.validate()?;
    let e_el = electron_kinetic_energy(p, &quad.inner)?;
    let mut orders = (quad.outer.radial_order, quad.outer.angular_order);
    let (mut e_ph, mut e_int) = photon_energies(tau, prof, p, quad, route, orders)?;
    if quad.outer.max_refinements > 0 {
        let mut converged = false;
        let mut previous = e_int;
        for _ in 0..quad.outer.max_refinements {
            orders = (2 * orders.0, 2 * orders.1);
            let (ph, int) = photon_energies(tau, prof, p, quad, route, orders)?;
            converged = close(ph, e_ph, &quad.outer) && close(int, e_int, &quad.outer);
            previous = e_int;
            e_ph = ph;
            e_int = int;
            if converged {
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { last: e_int, previous });
        }
    }
    Ok(EnergyBreakdown::new(e_ph, e_el, e_int))
}

fn close(a: f64, b: f64, spec: &QuadratureSpec) -> bool {
    let d = (a - b).abs();
    d <= spec.abs_tol || d <= spec.rel_tol * a.abs()
}

/// `ell^3 int dk_ph <psi| H^el psi>_{k_ph, k}`: the electron kinetic energy
/// density at one electron momentum, summed over the photon sector.
pub fn electron_energy_density(
    k: Vec3,
    tau: &TauTable,
    prof: &PhotonProfile,
    p: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let energy = p.hbar * omega(k, p);
    let occupation = rho_el(k, p);
    let integrand = |k_ph: Vec3| {
        let Ok(frame) = PhotonFrame::new(k_ph) else {
            return 0.0;
        };
        let z = tau.z_el(&frame, k);
        let dressed: f64 = tau
            .entries
            .iter()
            .filter(|(_, r)| r.contains(&frame, k))
            .map(|(&(m, n), _)| 1.0 / (super::tau::factorial(m) * super::tau::factorial(n)))
            .sum();
        prof.density(k_ph) * occupation * energy * dressed / z
    };
    Ok(p.ell.powi(3) * integrate_ball(integrand, prof.delta, spec)?)
}

#[cfg(test)]
mod tests {
    use super::super::tau::tau_specific;
    use super::*;

    fn quick() -> EnergyQuadrature {
        EnergyQuadrature {
            outer: QuadratureSpec::fixed(4, 2),
            inner: QuadratureSpec::fixed(24, 12),
        }
    }

    #[test]
    fn uniform_profile_is_normalized() {
        for (delta, ell) in [(0.01, 1.0), (0.3, 1.5), (2.0, 0.7)] {
            let prof = PhotonProfile::uniform(delta, ell).unwrap();
            let n = prof.normalization(ell, &QuadratureSpec::fixed(4, 2)).unwrap();
            assert!((n - 1.0).abs() < 1e-10, "{n}");
        }
        assert!(PhotonProfile::uniform(0.0, 1.0).is_err());
    }

    #[test]
    fn binding_is_sum_and_energies_scale_with_amplitude() {
        let p = ModelParams { rho_el0: 0.05, ..Default::default() };
        let prof = PhotonProfile::uniform(0.2, 1.0).unwrap();
        let a = energy_breakdown(&tau_specific(), &prof, &p, &quick(), InteractionRoute::SpecificReduction).unwrap();
        assert_eq!(a.binding, a.e_ph + a.e_int);
        let b = energy_breakdown(&tau_specific(), &prof.scaled(1e-3), &p, &quick(), InteractionRoute::SpecificReduction)
            .unwrap();
        assert!((b.e_ph - 1e-3 * a.e_ph).abs() < 1e-12 * a.e_ph.abs());
        assert!((b.e_int - 1e-3 * a.e_int).abs() < 1e-12 * a.e_int.abs());
        let c = energy_breakdown(&tau_specific(), &prof.scaled(0.0), &p, &quick(), InteractionRoute::SpecificReduction)
            .unwrap();
        assert_eq!((c.e_ph, c.e_int), (0.0, 0.0));
    }

    #[test]
    fn electron_energy_nonrelativistic_limit() {
        // narrow profile: w(k) ~ c kappa, so E_el ~ c kappa rho0 (2 pi)^{3/2} sigma^3
        let p = ModelParams { sigma: 0.1, rho_el0: 0.5, ..Default::default() };
        let e = electron_kinetic_energy(&p, &QuadratureSpec::default()).unwrap();
        let lead = p.rho_el0 * (2.0 * PI).powf(1.5) * p.sigma.powi(3);
        assert!((e / lead - 1.0).abs() < 2.0 * p.sigma * p.sigma, "{}", e / lead);
        // sqrt(1 + k^2) ~ 1 + k^2/2 - k^4/8 with <k^2> = 3 s^2, <k^4> = 15 s^4
        let s2 = p.sigma * p.sigma;
        let series = 1.0 + 1.5 * s2 - 15.0 / 8.0 * s2 * s2;
        assert!((e / lead - series).abs() < 2e-5, "{}", e / lead - series);
    }

    #[test]
    fn electron_density_sums_to_rho_times_energy() {
        let p = ModelParams::default();
        let prof = PhotonProfile::uniform(0.05, 1.0).unwrap();
        for k in [Vec3::new(0.1, 0.3, -0.2), Vec3::new(-1.0, 0.0, 0.5)] {
            let d = electron_energy_density(k, &tau_specific(), &prof, &p, &QuadratureSpec::fixed(4, 4)).unwrap();
            let expected = rho_el(k, &p) * p.hbar * omega(k, &p);
            assert!((d - expected).abs() < 1e-10 * expected);
        }
    }
}
