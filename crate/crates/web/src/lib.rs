//! Browser bindings: a sweep of the interaction density, a slice of the
//! coupling function, and the Coulomb field of a charge blob on a grid.
//! Every function returns a flat `Float64Array`.

use wasm_bindgen::prelude::*;

use transverse_qed::emergent::{CoulombSolver, GaussianBlob, GridSpec};
use transverse_qed::sweep::{sweep_w, SweepRange};
use transverse_qed::{u_coupling, ModelParams, Polarization, QuadratureSpec, Vec3};

// coarse enough to stay interactive, fine enough for a smooth curve
const DEMO_QUAD: QuadratureSpec = QuadratureSpec {
    radial_order: 24,
    angular_order: 12,
    rel_tol: 1e-8,
    abs_tol: 1e-14,
    max_refinements: 0,
};

fn params(kappa: f64, sigma: f64) -> Result<ModelParams, JsError> {
    let p = ModelParams { kappa, sigma, ..ModelParams::default() };
    p.validate().map_err(|e| JsError::new(&e.to_string()))?;
    Ok(p)
}

/// Rows of `(|k_ph|, w, photon cost, w - photon cost)` for `steps` photon
/// momenta in `[kph_min, kph_max]`.
#[wasm_bindgen]
pub fn sweep_curve(kappa: f64, sigma: f64, kph_min: f64, kph_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    let p = params(kappa, sigma)?;
    let range = SweepRange { kph_min, kph_max, steps };
    let rows = sweep_w(&range, &p, &DEMO_QUAD, 1).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(rows.iter().flat_map(|r| [r.k_ph_abs, r.w, r.photon_cost, r.integrand]).collect())
}

/// `U(k_ph, k)` on an `n x n` grid of `k = (kx, ky, 0)` covering
/// `[-extent, extent]^2`, row-major with `ky` outer. `vertical` picks the
/// polarization.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn coupling_slice(
    kappa: f64,
    sigma: f64,
    kph_x: f64,
    kph_y: f64,
    kph_z: f64,
    vertical: bool,
    extent: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    let p = params(kappa, sigma)?;
    let kph = Vec3::new(kph_x, kph_y, kph_z);
    let pol = if vertical { Polarization::V } else { Polarization::H };
    let n = n.max(2);
    let step = 2.0 * extent / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let k = Vec3::new(-extent + i as f64 * step, -extent + j as f64 * step, 0.0);
            out.push(u_coupling(pol, kph, k, &p).map_err(|e| JsError::new(&e.to_string()))?);
        }
    }
    Ok(out)
}

/// Box edge in blob widths; wide enough that the charge vanishes near the walls.
const BOX_WIDTHS: f64 = 24.0;

fn profile(n: usize, width: f64) -> transverse_qed::Result<Vec<f64>> {
    let p = ModelParams::default();
    let spec = GridSpec::centered(n, BOX_WIDTHS * width)?;
    let blob = GaussianBlob { center: Vec3::ZERO, width, charge: 1.0 };
    let field = CoulombSolver::new(spec).coulomb_correction(&blob.sample(spec), &p)?;
    let (j, k) = (n / 2, n / 2);
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let x = spec.point(i, j, k);
        out.extend([x.x, field.get(i, j, k).x, blob.analytic_field(x, &p).x]);
    }
    Ok(out)
}

/// Field of a Gaussian charge blob on an `n^3` grid whose box spans 24 blob
/// widths: rows of `(x, grid E_x, closed-form E_x)` along the axis through
/// the blob center.
#[wasm_bindgen]
pub fn coulomb_profile(n: usize, width: f64) -> Result<Vec<f64>, JsError> {
    profile(n, width).map_err(|e| JsError::new(&e.to_string()))
}
