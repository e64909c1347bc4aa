//! Second-order finite differences. Interior points use the central stencil;
//! the outermost layer uses one-sided three-point stencils so that every
//! output cell is defined, but norms skip [`NORM_MARGIN`] layers.

use super::grid::{fill, GridSpec, ScalarGrid, VectorGrid};
use crate::Vec3;

/// Layers next to each face left out of residual norms.
pub const NORM_MARGIN: usize = 2;

fn stride(spec: &GridSpec, axis: usize) -> usize {
    match axis {
        0 => spec.n * spec.n,
        1 => spec.n,
        _ => 1,
    }
}

fn partial<T, F>(spec: &GridSpec, idx: usize, axis: usize, at: F) -> T
where
    T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(usize) -> T,
{
    let c = spec.coords(idx)[axis];
    let s = stride(spec, axis);
    let inv = 0.5 / spec.h;
    if c == 0 {
        (at(idx + s) * 4.0 - at(idx) * 3.0 - at(idx + 2 * s)) * inv
    } else if c == spec.n - 1 {
        (at(idx) * 3.0 - at(idx - s) * 4.0 + at(idx - 2 * s)) * inv
    } else {
        (at(idx + s) - at(idx - s)) * inv
    }
}

pub fn gradient(f: &ScalarGrid) -> VectorGrid {
    let spec = f.spec;
    let at = |i: usize| f.values[i];
    let values = fill(spec.len(), |idx| {
        Vec3::new(partial(&spec, idx, 0, at), partial(&spec, idx, 1, at), partial(&spec, idx, 2, at))
    });
    VectorGrid { spec, values }
}

pub fn divergence(v: &VectorGrid) -> ScalarGrid {
    let spec = v.spec;
    let values = fill(spec.len(), |idx| {
        (0..3).map(|a| partial(&spec, idx, a, |i| v.values[i].component(a))).sum()
    });
    ScalarGrid { spec, values }
}

pub fn curl(v: &VectorGrid) -> VectorGrid {
    let spec = v.spec;
    let values = fill(spec.len(), |idx| {
        let d = |axis: usize, comp: usize| partial(&spec, idx, axis, |i| v.values[i].component(comp));
        Vec3::new(d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0))
    });
    VectorGrid { spec, values }
}

fn interior(spec: &GridSpec) -> impl Iterator<Item = usize> + '_ {
    (0..spec.len()).filter(move |&idx| spec.boundary_distance(idx) >= NORM_MARGIN)
}

/// Root-mean-square over cells at least [`NORM_MARGIN`] away from every face.
pub fn interior_rms(f: &ScalarGrid) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for idx in interior(&f.spec) {
        sum += f.values[idx] * f.values[idx];
        count += 1;
    }
    (sum / count as f64).sqrt()
}

pub fn interior_rms_vector(v: &VectorGrid) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for idx in interior(&v.spec) {
        sum += v.values[idx].norm_sq();
        count += 1;
    }
    (sum / count as f64).sqrt()
}
