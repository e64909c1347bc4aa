//! Spin-up Dirac bilinear and the photon coupling functions `U^(H)`, `U^(V)`.
//!
//! Everything here is real: the bilinear closed form carries no imaginary
//! part, so only its real part ever enters the energy.

use serde::{Deserialize, Serialize};

use crate::kinematics::{omega, polarization_basis, rho_el, ModelParams, PolarizationBasis};
use crate::{Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn vector(self, basis: &PolarizationBasis) -> Vec3 {
        match self {
            Polarization::H => basis.eps_h,
            Polarization::V => basis.eps_v,
        }
    }
}

/// One evaluated coupling value, as written by sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSample {
    pub k_ph: Vec3,
    pub k: Vec3,
    pub pol: Polarization,
    pub value: f64,
}

// sqrt(w (w + c kappa)) at k
fn spinor_norm(k: Vec3, p: &ModelParams) -> f64 {
    let w = omega(k, p);
    (w * (w + p.c * p.kappa)).sqrt()
}

/// `<u(k + k_ph)| gamma^0 gamma^alpha u(k)>` for the spin-up positive-energy
/// spinor, component `alpha` in `0..3`.
pub fn bilinear(k: Vec3, k_ph: Vec3, alpha: usize, p: &ModelParams) -> f64 {
    let kp = k + k_ph;
    let ck = p.c * p.kappa;
    let num = k.component(alpha) * (omega(kp, p) + ck) + kp.component(alpha) * (omega(k, p) + ck);
    -p.c * num / (spinor_norm(kp, p) * spinor_norm(k, p))
}

/// All three components of [`bilinear`].
pub fn bilinear_vec(k: Vec3, k_ph: Vec3, p: &ModelParams) -> Vec3 {
    Vec3::new(
        bilinear(k, k_ph, 0, p),
        bilinear(k, k_ph, 1, p),
        bilinear(k, k_ph, 2, p),
    )
}

pub fn coeff_a(k: Vec3, k_ph: Vec3, p: &ModelParams) -> f64 {
    let kp = k + k_ph;
    let ck = p.c * p.kappa;
    p.c * (omega(k, p) + omega(kp, p) + 2.0 * ck) / (spinor_norm(kp, p) * spinor_norm(k, p))
}

pub fn coeff_b(k: Vec3, k_ph: Vec3, p: &ModelParams) -> f64 {
    let kp = k + k_ph;
    p.c * (omega(k, p) + p.c * p.kappa) / (spinor_norm(kp, p) * spinor_norm(k, p))
}

/// Coupling function with the basis already resolved. Hot loops use this to
/// avoid rebuilding the triad for every `k`.
pub fn u_coupling_in(
    pol: Polarization,
    basis: &PolarizationBasis,
    k_ph: Vec3,
    k: Vec3,
    p: &ModelParams,
) -> f64 {
    let eps = pol.vector(basis);
    let overlap = (rho_el(k, p) * rho_el(k + k_ph, p)).sqrt();
    -0.5 * p.qc_lambda() * overlap * coeff_a(k, k_ph, p) * eps.dot(k)
}

/// `U^(pol)(k_ph, k) = -(1/2) q c lambda sqrt(rho(k) rho(k + k_ph)) A (eps . k)`.
pub fn u_coupling(pol: Polarization, k_ph: Vec3, k: Vec3, p: &ModelParams) -> Result<f64> {
    let basis = polarization_basis(k_ph)?;
    Ok(u_coupling_in(pol, &basis, k_ph, k, p))
}

/// Coupling function contracted directly from the bilinear,
/// `(1/2) q c lambda sqrt(rho rho') sum_alpha eps_alpha Re<u(k+k_ph)|..|u(k)>`,
/// with an explicit polarization vector. Independent of [`coeff_a`].
pub fn u_from_bilinear(eps: Vec3, k_ph: Vec3, k: Vec3, p: &ModelParams) -> f64 {
    let overlap = (rho_el(k, p) * rho_el(k + k_ph, p)).sqrt();
    0.5 * p.qc_lambda() * overlap * eps.dot(bilinear_vec(k, k_ph, p))
}

/// First-order long-wavelength form of [`coeff_a`]:
/// `(2c / w(k)) [1 - (1/2) k.k_ph / (kappa^2 + |k|^2)]`.
pub fn a_long_wavelength(k: Vec3, k_ph: Vec3, p: &ModelParams) -> f64 {
    a_long_wavelength_with(k, k_ph, p, 2.0 * p.c, -0.5)
}

/// The expansion as it is usually written,
/// `(2 / w(k)) [1 + (1/2) k.k_ph / (kappa^2 + |k|^2)]`. The leading factor
/// misses a `c` and the first-order term has the wrong sign.
pub fn a_long_wavelength_printed(k: Vec3, k_ph: Vec3, p: &ModelParams) -> f64 {
    a_long_wavelength_with(k, k_ph, p, 2.0, 0.5)
}

/// `(lead / w(k)) [1 + first k.k_ph / (kappa^2 + |k|^2)]`.
pub fn a_long_wavelength_with(k: Vec3, k_ph: Vec3, p: &ModelParams, lead: f64, first: f64) -> f64 {
    let k2 = p.kappa * p.kappa + k.norm_sq();
    lead / omega(k, p) * (1.0 + first * k.dot(k_ph) / k2)
}

/// First-order form of `rho_el(k + k_ph) / rho_el(k)`.
pub fn rho_ratio_long_wavelength(k: Vec3, k_ph: Vec3, p: &ModelParams) -> f64 {
    1.0 - k.dot(k_ph) / (p.sigma * p.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, scale: f64) -> Vec3 {
        Vec3::new(
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
        )
    }

    #[test]
    fn bilinear_reference_values() {
        let p = ModelParams::default();
        for a in 0..3 {
            assert_eq!(bilinear(Vec3::ZERO, Vec3::ZERO, a, &p), 0.0);
        }
        // at k_ph = 0 the bilinear reduces to -2 c k_alpha / w(k)
        let v = bilinear(Vec3::X, Vec3::ZERO, 0, &p);
        assert!((v + 2f64.sqrt()).abs() < 1e-14, "{v}");
    }

    #[test]
    fn bilinear_odd_under_joint_inversion() {
        let p = ModelParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let k = random_vec(&mut rng, 2.0);
            let q = random_vec(&mut rng, 2.0);
            for a in 0..3 {
                let lhs = bilinear(-k, -q, a, &p);
                let rhs = -bilinear(k, q, a, &p);
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coefficient_reference_values() {
        let p = ModelParams::default();
        assert!((coeff_a(Vec3::ZERO, Vec3::ZERO, &p) - 2.0).abs() < 1e-15);
        assert!((coeff_b(Vec3::ZERO, Vec3::ZERO, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn a_exchange_symmetry_and_b_below_a() {
        let p = ModelParams { c: 1.7, kappa: 0.8, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let k = random_vec(&mut rng, 2.0);
            let q = random_vec(&mut rng, 2.0);
            let a = coeff_a(k, q, &p);
            assert!((a - coeff_a(k + q, -q, &p)).abs() <= 1e-14 * a);
            assert!(coeff_b(k, q, &p) < a);
            assert!(a > 0.0);
        }
    }

    #[test]
    fn bilinear_splits_into_a_and_b() {
        let p = ModelParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let k = random_vec(&mut rng, 2.0);
            let q = random_vec(&mut rng, 2.0);
            let split = -(k * coeff_a(k, q, &p) + q * coeff_b(k, q, &p));
            assert!((bilinear_vec(k, q, &p) - split).norm() < 1e-13);
            // transversality kills the B term
            let basis = polarization_basis(q).unwrap();
            for pol in Polarization::BOTH {
                let e = pol.vector(&basis);
                let lhs = e.dot(k * coeff_a(k, q, &p) + q * coeff_b(k, q, &p));
                assert!((lhs - coeff_a(k, q, &p) * e.dot(k)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn u_matches_direct_bilinear_contraction() {
        let p = ModelParams { sigma: 0.8, rho_el0: 0.4, coupling: 1.3, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = random_vec(&mut rng, 2.0);
            let q = random_vec(&mut rng, 2.0);
            let basis = polarization_basis(q).unwrap();
            for pol in Polarization::BOTH {
                let u = u_coupling(pol, q, k, &p).unwrap();
                let direct = u_from_bilinear(pol.vector(&basis), q, k, &p);
                assert!((u - direct).abs() < 1e-14, "{u} vs {direct}");
            }
        }
    }

    #[test]
    fn u_vanishes_for_perpendicular_k_and_needs_nonzero_photon() {
        let p = ModelParams::default();
        let q = Vec3::new(0.0, 0.0, 0.3);
        let basis = polarization_basis(q).unwrap();
        let k = basis.eps_v * 0.7 + basis.khat * 0.2;
        assert_eq!(u_coupling(Polarization::H, q, k, &p).unwrap(), 0.0);
        assert!(u_coupling(Polarization::H, Vec3::ZERO, k, &p).is_err());
    }

    #[test]
    fn expansion_at_zero_photon_is_exact_limit() {
        let p = ModelParams { c: 2.5, ..Default::default() };
        let k = Vec3::new(0.3, -0.2, 0.9);
        let exact = coeff_a(k, Vec3::ZERO, &p);
        assert!((a_long_wavelength(k, Vec3::ZERO, &p) - exact).abs() < 1e-14);
        assert!((a_long_wavelength(k, Vec3::ZERO, &p) - 2.0 * p.c / omega(k, &p)).abs() < 1e-15);
    }

    #[test]
    fn expansion_slope_matches_finite_difference() {
        let p = ModelParams { c: 1.7, kappa: 0.8, ..Default::default() };
        let k = Vec3::new(0.3, -0.2, 0.9);
        let h = 1e-5;
        for dir in [Vec3::X, Vec3::Y, Vec3::Z] {
            let fd = (coeff_a(k, dir * h, &p) - coeff_a(k, dir * -h, &p)) / (2.0 * h);
            let lin = (a_long_wavelength(k, dir * h, &p) - a_long_wavelength(k, dir * -h, &p)) / (2.0 * h);
            assert!((fd - lin).abs() < 1e-8, "{fd} vs {lin}");
            let printed = (a_long_wavelength_printed(k, dir * h, &p) - a_long_wavelength_printed(k, dir * -h, &p)) / (2.0 * h);
            if k.dot(dir) != 0.0 {
                assert!(printed * fd < 0.0);
            }
        }
    }
}
