//! Deterministic product quadrature over the three shapes the energy
//! integrals need: a half-space, the full space split into two half-spaces,
//! and a ball.
//!
//! Radial nodes are Gauss-Legendre on `[0, 10 sigma]` for Gaussian-weighted
//! integrands (the tail beyond is below `1e-20` of the peak). Polar nodes are
//! Gauss-Legendre in `cos(theta)`, azimuthal nodes are the midpoint rule with
//! `2 * angular_order` points, which is spectrally accurate for periodic
//! integrands. Every rule is refined by doubling both orders until two
//! successive estimates agree.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

const GAUSSIAN_CUTOFF_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub radial_order: usize,
    pub angular_order: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Number of order doublings allowed. Zero evaluates the base rule once
    /// and skips the convergence test.
    pub max_refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_order: 64,
            angular_order: 32,
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_refinements: 2,
        }
    }
}

impl QuadratureSpec {
    pub fn fixed(radial_order: usize, angular_order: usize) -> Self {
        QuadratureSpec {
            radial_order,
            angular_order,
            max_refinements: 0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_order < 2 || self.angular_order < 2 {
            return Err(Error::InvalidParams(format!(
                "quadrature orders must be >= 2, got radial {} angular {}",
                self.radial_order, self.angular_order
            )));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParams("quadrature tolerances must be > 0".into()));
        }
        Ok(())
    }

    fn converged(&self, previous: f64, last: f64) -> bool {
        let diff = (last - previous).abs();
        diff <= self.abs_tol || diff <= self.rel_tol * last.abs()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-order Gauss-Legendre integral over `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Orthonormal frame `(normal, e1, e2)` with a fixed, deterministic choice of
/// the in-plane pair.
pub fn frame_for(normal: Vec3) -> (Vec3, Vec3) {
    let helper = if normal.x.abs() <= normal.y.abs() && normal.x.abs() <= normal.z.abs() {
        Vec3::X
    } else if normal.y.abs() <= normal.z.abs() {
        Vec3::Y
    } else {
        Vec3::Z
    };
    let e1 = (helper - normal * helper.dot(normal)).normalized().expect("helper not parallel");
    let e2 = normal.cross(e1);
    (e1, e2)
}

fn check_unit(normal: Vec3) -> Result<()> {
    if (normal.norm() - 1.0).abs() > 1e-12 || !normal.is_finite() {
        return Err(Error::domain(format!("expected a unit normal, got {normal:?}")));
    }
    Ok(())
}

// Directions and solid-angle weights for the cap cos(theta) in (0, 1] about
// `axis`, using the in-plane frame (e1, e2).
fn hemisphere_directions(axis: Vec3, e1: Vec3, e2: Vec3, angular: usize) -> Vec<(Vec3, f64)> {
    let (x, w) = gauss_legendre(angular);
    let n_phi = 2 * angular;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut dirs = Vec::with_capacity(angular * n_phi);
    for (xi, wi) in x.iter().zip(&w) {
        let ct = 0.5 * (xi + 1.0);
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        for j in 0..n_phi {
            let phi = (j as f64 + 0.5) * dphi;
            let d = axis * ct + (e1 * phi.cos() + e2 * phi.sin()) * st;
            dirs.push((d, 0.5 * wi * dphi));
        }
    }
    dirs
}

fn radial_rule(rmax: f64, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| {
            let r = 0.5 * rmax * (xi + 1.0);
            (r, 0.5 * rmax * wi * r * r)
        })
        .collect()
}

fn sum_over<F: Fn(Vec3) -> f64>(f: &F, radial: &[(f64, f64)], dirs: &[(Vec3, f64)]) -> f64 {
    let mut total = 0.0;
    for &(r, wr) in radial {
        let mut shell = 0.0;
        for &(d, wd) in dirs {
            shell += wd * f(d * r);
        }
        total += wr * shell;
    }
    total
}

fn refine<E: FnMut(usize, usize) -> f64>(spec: &QuadratureSpec, mut estimate: E) -> Result<f64> {
    spec.validate()?;
    let (mut nr, mut na) = (spec.radial_order, spec.angular_order);
    let mut previous = estimate(nr, na);
    if spec.max_refinements == 0 {
        return Ok(previous);
    }
    let mut last = previous;
    for _ in 0..spec.max_refinements {
        nr *= 2;
        na *= 2;
        previous = last;
        last = estimate(nr, na);
        if spec.converged(previous, last) {
            return Ok(last);
        }
    }
    Err(Error::Convergence { last, previous })
}

/// Integral of `f` over the half-space `{k . normal > 0}`.
pub fn integrate_halfspace_gaussian<F: Fn(Vec3) -> f64>(
    f: F,
    normal: Vec3,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_unit(normal)?;
    let (e1, e2) = frame_for(normal);
    let rmax = GAUSSIAN_CUTOFF_SIGMAS * sigma;
    refine(spec, |nr, na| {
        sum_over(&f, &radial_rule(rmax, nr), &hemisphere_directions(normal, e1, e2, na))
    })
}

/// Integral of `f` over all of k-space, split at the plane orthogonal to
/// `axis` so that a discontinuity across that plane is resolved exactly.
///
/// The node set is closed under `k -> -k` with equal weights.
pub fn integrate_full_space_gaussian<F: Fn(Vec3) -> f64>(
    f: F,
    axis: Vec3,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_unit(axis)?;
    let (e1, _) = frame_for(axis);
    integrate_full_space_gaussian_framed(f, axis, e1, sigma, spec)
}

/// As [`integrate_full_space_gaussian`] with the azimuth measured from the
/// unit vector `e1` orthogonal to `axis`. The node set is then also closed
/// under reflection through the plane orthogonal to `e1`.
pub fn integrate_full_space_gaussian_framed<F: Fn(Vec3) -> f64>(
    f: F,
    axis: Vec3,
    e1: Vec3,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_unit(axis)?;
    check_unit(e1)?;
    if e1.dot(axis).abs() > 1e-12 {
        return Err(Error::domain("azimuth reference must be orthogonal to the axis"));
    }
    let e2 = axis.cross(e1);
    let rmax = GAUSSIAN_CUTOFF_SIGMAS * sigma;
    refine(spec, |nr, na| {
        let radial = radial_rule(rmax, nr);
        sum_over(&f, &radial, &hemisphere_directions(axis, e1, e2, na))
            + sum_over(&f, &radial, &hemisphere_directions(-axis, e1, e2, na))
    })
}

/// Nodes of the ball rule: `(point, weight)` pairs.
pub fn ball_nodes(radius: f64, radial_order: usize, angular_order: usize) -> Vec<(Vec3, f64)> {
    let radial = radial_rule(radius, radial_order);
    let (x, w) = gauss_legendre(angular_order);
    let n_phi = 2 * angular_order;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut out = Vec::with_capacity(radial.len() * x.len() * n_phi);
    for &(r, wr) in &radial {
        for (ct, wt) in x.iter().zip(&w) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let phi = (j as f64 + 0.5) * dphi;
                let d = Vec3::new(st * phi.cos(), st * phi.sin(), *ct);
                out.push((d * r, wr * wt * dphi));
            }
        }
    }
    out
}

/// Integral of `f` over the ball `|k| < radius`.
pub fn integrate_ball<F: Fn(Vec3) -> f64>(f: F, radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(format!("ball radius must be > 0, got {radius}")));
    }
    refine(spec, |nr, na| {
        ball_nodes(radius, nr, na).iter().map(|&(k, w)| w * f(k)).sum()
    })
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn convergence_slope(values: &[(f64, f64)]) -> Result<f64> {
    if values.len() < 3 {
        return Err(Error::domain("convergence slope needs at least 3 points"));
    }
    for w in values.windows(2) {
        if !(w[1].0 < w[0].0) {
            return Err(Error::domain("step sizes must be strictly decreasing"));
        }
    }
    if values.iter().any(|&(h, e)| !(h > 0.0 && e > 0.0)) {
        return Err(Error::domain("step sizes and errors must be positive"));
    }
    let n = values.len() as f64;
    let xs: Vec<f64> = values.iter().map(|v| v.0.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
