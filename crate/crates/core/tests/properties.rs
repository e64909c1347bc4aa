use proptest::prelude::*;

use transverse_qed::{coeff_a, polarization_basis, rho_el, u_coupling, ModelParams, Polarization, Vec3};

fn vec3(radius: f64) -> impl Strategy<Value = Vec3> {
    (-radius..radius, -radius..radius, -radius..radius).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn photon() -> impl Strategy<Value = Vec3> {
    vec3(1.0).prop_filter("nonzero photon", |v| v.norm() > 1e-6)
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.3..3.0f64, 0.3..3.0f64, 0.5..2.0f64).prop_map(|(kappa, sigma, c)| ModelParams {
        kappa,
        sigma,
        c,
        ..ModelParams::default()
    })
}

proptest! {
    #[test]
    fn basis_parity(kph in photon()) {
        let b = polarization_basis(kph).unwrap();
        let m = polarization_basis(-kph).unwrap();
        prop_assert_eq!(m.eps_h, b.eps_h);
        prop_assert_eq!(m.eps_v, -b.eps_v);
        prop_assert!(b.max_orthonormality_defect() < 1e-14);
    }

    #[test]
    fn reflection_identities(kph in photon(), k in vec3(2.0), p in params()) {
        use Polarization::{H, V};
        let u = |pol, a: Vec3, b: Vec3| u_coupling(pol, a, b, &p).unwrap();
        let scale = 1e-12 * (1.0 + u(H, kph, k).abs() + u(V, kph, k).abs());
        prop_assert!((u(H, -kph, -k) + u(H, kph, k)).abs() <= scale);
        prop_assert!((u(V, -kph, -k) - u(V, kph, k)).abs() <= scale);
        prop_assert!((u(H, -kph, k) - u(H, kph, k - kph)).abs() <= scale);
        prop_assert!((u(V, -kph, k) + u(V, kph, k - kph)).abs() <= scale);
    }

    #[test]
    fn a_is_symmetric_in_its_two_momenta(kph in vec3(1.0), k in vec3(2.0), p in params()) {
        let a = coeff_a(k, kph, &p);
        let b = coeff_a(k + kph, -kph, &p);
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn coupling_sign(kph in photon(), k in vec3(2.0), p in params()) {
        let basis = polarization_basis(kph).unwrap();
        for (pol, eps) in [(Polarization::H, basis.eps_h), (Polarization::V, basis.eps_v)] {
            let u = u_coupling(pol, kph, k, &p).unwrap();
            let ek = eps.dot(k);
            prop_assert_eq!(u.partial_cmp(&0.0), 0.0f64.partial_cmp(&ek));
        }
    }

    #[test]
    fn density_is_even_and_bounded(k in vec3(5.0), p in params()) {
        prop_assert_eq!(rho_el(k, &p), rho_el(-k, &p));
        prop_assert!(rho_el(k, &p) <= p.rho_el0);
    }
}
