// Native calls only; the error paths build JS values and need a wasm host.

use transverse_qed_web::{coulomb_profile, coupling_slice, sweep_curve};

#[test]
fn sweep_rows_are_flat_quadruples() {
    let v = sweep_curve(1.0, 1.0, 0.1, 1.5, 4).unwrap();
    assert_eq!(v.len(), 16);
    assert!(v[3] > 0.0);
    assert!(v[15] < 0.0);
}

#[test]
fn horizontal_slice_is_odd_in_k() {
    let n = 9;
    // photon along z: U_H(k_ph, -k) = -U_H(k_ph, k) in the plane k_z = 0
    let v = coupling_slice(1.0, 1.0, 0.0, 0.0, 0.5, false, 2.0, n).unwrap();
    assert_eq!(v.len(), n * n);
    for idx in 0..n * n {
        assert!((v[idx] + v[n * n - 1 - idx]).abs() < 1e-14);
    }
}

#[test]
fn coulomb_profile_tracks_the_closed_form() {
    let v = coulomb_profile(48, 0.1).unwrap();
    assert_eq!(v.len(), 3 * 48);
    let worst = v
        .chunks(3)
        .filter(|r| (0.4..0.8).contains(&r[0].abs()))
        .map(|r| (r[1] - r[2]).abs() / r[2].abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.05, "{worst}");
}
