//! Interaction-energy density `w(k_ph)` along three independent routes:
//!
//! * [`w_general`]: the double sum over `tau` pairs written with `U^(H)` and
//!   `U^(V)` after the `k -> -k` rewriting;
//! * [`w_oracle`]: the same quantity before that rewriting, with both
//!   momentum-conserving branches `k' = k +- k_ph` contracted directly
//!   against the bilinear;
//! * [`w_specific`]: the half-space integral obtained by reducing the sum
//!   for [`tau_specific`](super::tau_specific).

use serde::{Deserialize, Serialize};

use super::tau::{factorial, PhotonFrame, TauTable};
use crate::kinematics::{rho_el, ModelParams};
use crate::matrix_elements::{bilinear_vec, u_coupling_in, Polarization};
use crate::quadrature::{integrate_full_space_gaussian_framed, integrate_halfspace_gaussian, QuadratureSpec};
use crate::{Result, Vec3};

/// Sign in front of the mirrored (`-k`) term of the V block.
///
/// `Derived` is what the branch contraction gives once
/// `eps_v(-k_ph) = -eps_v(k_ph)` is used; `AsPrinted` keeps the `+` sign of
/// the published form. The two coincide whenever the table is symmetric
/// under reflection through the plane orthogonal to `eps_v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VBlockSign {
    Derived,
    AsPrinted,
}

impl VBlockSign {
    fn factor(self) -> f64 {
        match self {
            VBlockSign::Derived => -1.0,
            VBlockSign::AsPrinted => 1.0,
        }
    }
}

// sum over (m, n) of tau_{m,n}(a) tau_{partner}(b) / (m! n! sqrt(Z(a) Z(b)))
fn pair_sum(
    tau: &TauTable,
    frame: &PhotonFrame,
    a: Vec3,
    b: Vec3,
    raise: fn(usize, usize) -> (usize, usize),
) -> f64 {
    let mut total = 0.0;
    let mut z = None;
    for (&(m, n), region) in &tau.entries {
        let (pm, pn) = raise(m, n);
        let Some(partner) = tau.entries.get(&(pm, pn)) else {
            continue;
        };
        if region.contains(frame, a) && partner.contains(frame, b) {
            let (za, zb) = *z.get_or_insert_with(|| (tau.z_el(frame, a), tau.z_el(frame, b)));
            total += 1.0 / (factorial(m) * factorial(n) * (za * zb).sqrt());
        }
    }
    total
}

fn raise_m(m: usize, n: usize) -> (usize, usize) {
    (m + 1, n)
}

fn raise_n(m: usize, n: usize) -> (usize, usize) {
    (m, n + 1)
}

/// `w(k_ph)` from the general double-sum expression.
pub fn w_general(tau: &TauTable, k_ph: Vec3, p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    w_general_with_sign(tau, k_ph, p, spec, VBlockSign::Derived)
}

pub fn w_general_with_sign(
    tau: &TauTable,
    k_ph: Vec3,
    p: &ModelParams,
    spec: &QuadratureSpec,
    v_sign: VBlockSign,
) -> Result<f64> {
    let frame = PhotonFrame::new(k_ph)?;
    let sv = v_sign.factor();
    let integrand = |k: Vec3| {
        let h = pair_sum(tau, &frame, k, k + k_ph, raise_m)
            - pair_sum(tau, &frame, -k, -k - k_ph, raise_m);
        let v = pair_sum(tau, &frame, k, k + k_ph, raise_n)
            + sv * pair_sum(tau, &frame, -k, -k - k_ph, raise_n);
        let mut acc = 0.0;
        if h != 0.0 {
            acc += h * u_coupling_in(Polarization::H, &frame.basis, k_ph, k, p);
        }
        if v != 0.0 {
            acc += v * u_coupling_in(Polarization::V, &frame.basis, k_ph, k, p);
        }
        acc
    };
    let integral = integrate_full_space_gaussian_framed(integrand, frame.basis.eps_h, frame.basis.eps_v, p.sigma, spec)?;
    Ok(-p.ell.powi(3) * integral)
}

/// `w(k_ph)` from the branch-contracted form. Uses the bilinear directly and
/// never calls the coupling functions, so it checks their algebra.
pub fn w_oracle(tau: &TauTable, k_ph: Vec3, p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let frame = PhotonFrame::new(k_ph)?;
    let eps_h = frame.basis.eps_h;
    let eps_v = frame.basis.eps_v;
    let integrand = |k: Vec3| {
        let mut acc = 0.0;
        for k_out in [k + k_ph, k - k_ph] {
            let h = pair_sum(tau, &frame, k, k_out, raise_m);
            let v = pair_sum(tau, &frame, k, k_out, raise_n);
            if h == 0.0 && v == 0.0 {
                continue;
            }
            // Re <u(k')| gamma^0 gamma^alpha u(k)>
            let b = bilinear_vec(k, k_out - k, p);
            let overlap = (rho_el(k, p) * rho_el(k_out, p)).sqrt();
            acc += 0.5 * p.qc_lambda() * overlap * (h * eps_h.dot(b) + v * eps_v.dot(b));
        }
        acc
    };
    let integral = integrate_full_space_gaussian_framed(integrand, eps_h, eps_v, p.sigma, spec)?;
    Ok(-p.ell.powi(3) * integral)
}

/// `w(k_ph) = ell^3 int dk U^(H)(k_ph, -k) Theta(k . eps_h(k_ph))`.
pub fn w_specific(k_ph: Vec3, p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let frame = PhotonFrame::new(k_ph)?;
    let integrand = |k: Vec3| u_coupling_in(Polarization::H, &frame.basis, k_ph, -k, p);
    let integral = integrate_halfspace_gaussian(integrand, frame.basis.eps_h, p.sigma, spec)?;
    Ok(p.ell.powi(3) * integral)
}

/// `Z^ph(k_ph) = ell^3 int dk rho_el(k) / Z^el(k) sum (m + n) tau / (m! n!)`.
pub fn z_ph(tau: &TauTable, k_ph: Vec3, p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let frame = PhotonFrame::new(k_ph)?;
    let integrand = |k: Vec3| {
        let weight = tau.photon_number_weight(&frame, k);
        if weight == 0.0 {
            return 0.0;
        }
        rho_el(k, p) * weight / tau.z_el(&frame, k)
    };
    let integral = integrate_full_space_gaussian_framed(integrand, frame.basis.eps_h, frame.basis.eps_v, p.sigma, spec)?;
    Ok(p.ell.powi(3) * integral)
}

#[cfg(test)]
mod tests {
    use super::super::tau::{random_small_table, tau_specific, Direction, Region};
    use super::*;
    use std::f64::consts::PI;

    fn small_spec() -> QuadratureSpec {
        QuadratureSpec::fixed(24, 12)
    }

    #[test]
    fn vacuum_only_table_has_no_interaction_and_no_photons() {
        let t = TauTable::new().with(0, 0, Region::All);
        let p = ModelParams::default();
        let kph = Vec3::new(0.1, 0.2, -0.1);
        assert_eq!(w_general(&t, kph, &p, &small_spec()).unwrap(), 0.0);
        assert_eq!(w_oracle(&t, kph, &p, &small_spec()).unwrap(), 0.0);
        assert_eq!(z_ph(&t, kph, &p, &small_spec()).unwrap(), 0.0);
        let empty = TauTable::new();
        assert_eq!(w_oracle(&empty, kph, &p, &small_spec()).unwrap(), 0.0);
    }

    #[test]
    fn z_ph_of_specific_table_is_half_gaussian() {
        let p = ModelParams { sigma: 0.8, rho_el0: 0.3, ell: 1.2, ..Default::default() };
        let spec = QuadratureSpec::default();
        let expected = p.ell.powi(3) * p.rho_el0 * 0.5 * (2.0 * PI).powf(1.5) * p.sigma.powi(3);
        for kph in [Vec3::new(0.0, 0.0, 0.2), Vec3::new(0.3, -0.1, 0.05)] {
            let z = z_ph(&tau_specific(), kph, &p, &spec).unwrap();
            assert!((z - expected).abs() < 1e-9 * expected, "{z} vs {expected}");
        }
    }

    #[test]
    fn w_specific_positive_and_even() {
        let p = ModelParams { rho_el0: 0.1, ..Default::default() };
        let spec = QuadratureSpec::default();
        let kph = Vec3::new(0.0, 0.06, 0.08);
        let w = w_specific(kph, &p, &spec).unwrap();
        assert!(w > 0.0);
        let wm = w_specific(-kph, &p, &spec).unwrap();
        assert!((w - wm).abs() < 1e-10 * w, "{w} vs {wm}");
    }

    #[test]
    fn w_specific_linear_in_peak_density() {
        let spec = QuadratureSpec::default();
        let kph = Vec3::new(0.2, 0.0, 0.1);
        let a = w_specific(kph, &ModelParams { rho_el0: 0.1, ..Default::default() }, &spec).unwrap();
        let b = w_specific(kph, &ModelParams { rho_el0: 0.3, ..Default::default() }, &spec).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn general_and_oracle_agree_on_random_tables() {
        let p = ModelParams { rho_el0: 0.2, ..Default::default() };
        let kph = Vec3::new(0.25, -0.1, 0.3);
        for seed in 0..3 {
            let t = random_small_table(seed);
            let g = w_general(&t, kph, &p, &small_spec()).unwrap();
            let o = w_oracle(&t, kph, &p, &small_spec()).unwrap();
            assert!((g - o).abs() <= 1e-10 * g.abs().max(o.abs()).max(1e-300), "seed {seed}: {g} vs {o}");
        }
    }

    #[test]
    fn v_block_sign_matters_only_without_mirror_symmetry() {
        let p = ModelParams { rho_el0: 0.2, ..Default::default() };
        let kph = Vec3::new(0.2, 0.1, 0.3);
        // radial tests are mirror symmetric: both signs agree
        let sym = TauTable::new().with(0, 0, Region::All).with(0, 1, Region::Ball(1.0));
        let a = w_general_with_sign(&sym, kph, &p, &small_spec(), VBlockSign::Derived).unwrap();
        let b = w_general_with_sign(&sym, kph, &p, &small_spec(), VBlockSign::AsPrinted).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        let skew = TauTable::new()
            .with(0, 0, Region::All)
            .with(0, 1, Region::HalfSpace(Direction::Fixed(Vec3::new(0.6, 0.0, 0.8))));
        let d = w_general_with_sign(&skew, kph, &p, &small_spec(), VBlockSign::Derived).unwrap();
        let q = w_general_with_sign(&skew, kph, &p, &small_spec(), VBlockSign::AsPrinted).unwrap();
        let o = w_oracle(&skew, kph, &p, &small_spec()).unwrap();
        assert!((d - o).abs() < 1e-10 * o.abs());
        assert!((q - o).abs() > 1e-3 * o.abs());
    }
}
