//! Physical constants, the electron dispersion relation, the Gaussian
//! momentum profile and the photon polarization triad.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Model constants in a nondimensional convention: wavenumbers in units of
/// `kappa`, and `hbar = c = ell = mu0 = 1` unless overridden.
///
/// `coupling` stands for the product of the charge unit and the photon field
/// amplitude; every formula uses it in the combination `coupling * c`
/// or `coupling` alone, never the two factors separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub kappa: f64,
    pub sigma: f64,
    pub coupling: f64,
    pub rho_el0: f64,
    pub ell: f64,
    pub c: f64,
    pub hbar: f64,
    pub mu0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            kappa: 1.0,
            sigma: 1.0,
            coupling: 1.0,
            rho_el0: 0.1,
            ell: 1.0,
            c: 1.0,
            hbar: 1.0,
            mu0: 1.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kappa", self.kappa),
            ("sigma", self.sigma),
            ("coupling", self.coupling),
            ("rho_el0", self.rho_el0),
            ("ell", self.ell),
            ("c", self.c),
            ("hbar", self.hbar),
            ("mu0", self.mu0),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and > 0, got {value}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_rho_el0(mut self, rho_el0: f64) -> Self {
        self.rho_el0 = rho_el0;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// `q c lambda`, the prefactor of every coupling function.
    pub fn qc_lambda(&self) -> f64 {
        self.coupling * self.c
    }
}

/// Electron dispersion `c * sqrt(kappa^2 + |k|^2)`.
pub fn omega(k: Vec3, p: &ModelParams) -> f64 {
    p.c * (p.kappa * p.kappa + k.norm_sq()).sqrt()
}

/// Gaussian momentum density `rho_el(0) * exp(-|k|^2 / 2 sigma^2)`.
pub fn rho_el(k: Vec3, p: &ModelParams) -> f64 {
    p.rho_el0 * (-k.norm_sq() / (2.0 * p.sigma * p.sigma)).exp()
}

/// Orthonormal right-handed triad `(eps_h, eps_v, khat)` attached to a photon
/// wave vector.
///
/// Under `k_ph -> -k_ph` the horizontal vector is unchanged and the vertical
/// vector flips sign; both rules hold exactly, not to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationBasis {
    pub eps_h: Vec3,
    pub eps_v: Vec3,
    pub khat: Vec3,
}

impl PolarizationBasis {
    pub fn max_orthonormality_defect(&self) -> f64 {
        let vs = [self.eps_h, self.eps_v, self.khat];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((vs[i].dot(vs[j]) - target).abs());
            }
        }
        worst.max((self.eps_h.cross(self.eps_v) - self.khat).norm())
    }
}

// Canonical half of direction space; the other half is defined by parity.
fn in_canonical_hemisphere(u: Vec3) -> bool {
    if u.z != 0.0 {
        u.z > 0.0
    } else if u.y != 0.0 {
        u.y > 0.0
    } else {
        u.x > 0.0
    }
}

fn canonical_basis(khat: Vec3) -> PolarizationBasis {
    let rho = (khat.x * khat.x + khat.y * khat.y).sqrt();
    // azimuthal direction, x-hat on the polar axis
    let eps_h = if rho == 0.0 {
        Vec3::X
    } else {
        Vec3::new(-khat.y / rho, khat.x / rho, 0.0)
    };
    let eps_v = khat.cross(eps_h);
    PolarizationBasis { eps_h, eps_v, khat }
}

/// Polarization triad for a nonzero photon wave vector.
pub fn polarization_basis(k_ph: Vec3) -> Result<PolarizationBasis> {
    let khat = k_ph
        .normalized()
        .ok_or_else(|| Error::domain("polarization basis undefined for k_ph = 0"))?;
    if in_canonical_hemisphere(khat) {
        Ok(canonical_basis(khat))
    } else {
        let mirror = canonical_basis(-khat);
        Ok(PolarizationBasis {
            eps_h: mirror.eps_h,
            eps_v: -mirror.eps_v,
            khat,
        })
    }
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
    fn omega_rest_value_and_evenness() {
        let p = ModelParams::default();
        assert_eq!(omega(Vec3::ZERO, &p), 1.0);
        assert!((omega(Vec3::X, &p) - 2f64.sqrt()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let k = random_vec(&mut rng, 3.0);
            assert_eq!(omega(k, &p), omega(-k, &p));
            assert!(omega(k, &p) > p.c * p.kappa);
        }
    }

    #[test]
    fn rho_el_values() {
        let p = ModelParams { sigma: 0.7, rho_el0: 0.3, ..Default::default() };
        assert_eq!(rho_el(Vec3::ZERO, &p), 0.3);
        let k = Vec3::new(0.0, p.sigma * 2f64.sqrt(), 0.0);
        assert!((rho_el(k, &p) - 0.3 * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_photon_vector_rejected() {
        assert!(matches!(polarization_basis(Vec3::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn pole_convention() {
        let b = polarization_basis(Vec3::Z).unwrap();
        assert_eq!(b.eps_h, Vec3::X);
        assert_eq!(b.eps_v, Vec3::Y);
        let b = polarization_basis(-Vec3::Z * 2.0).unwrap();
        assert_eq!(b.eps_h, Vec3::X);
        assert_eq!(b.eps_v, -Vec3::Y);
        assert_eq!(b.eps_h.dot(Vec3::Z), 0.0);
        assert_eq!(b.eps_v.dot(Vec3::Z), 0.0);
    }

    #[test]
    fn parity_and_orthonormality_on_random_and_near_polar_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut inputs: Vec<Vec3> = (0..100).map(|_| random_vec(&mut rng, 2.0)).collect();
        inputs.extend([
            Vec3::new(1e-14, 0.0, 1.0),
            Vec3::new(0.0, -1e-300, -1.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(-3.0, 0.0, 0.0),
        ]);
        for k in inputs {
            let b = polarization_basis(k).unwrap();
            let m = polarization_basis(-k).unwrap();
            assert!(b.max_orthonormality_defect() < 1e-12, "{k:?}");
            assert_eq!(m.eps_h, b.eps_h);
            assert_eq!(m.eps_v, -b.eps_v);
            assert_eq!(b, polarization_basis(k).unwrap());
        }
    }

    #[test]
    fn validate_rejects_nonpositive() {
        let p = ModelParams { sigma: 0.0, ..Default::default() };
        assert!(p.validate().is_err());
        assert!(ModelParams::default().validate().is_ok());
    }
}
