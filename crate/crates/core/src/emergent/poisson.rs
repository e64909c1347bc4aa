//! Free-space Newtonian potential `sum_y K(x - y) q(y) h^3` with the 1/r
//! kernel. The sum is evaluated exactly (up to roundoff) by zero-padded FFT
//! convolution on a doubled grid; [`direct_potential`] keeps the O(N^2)
//! loop for cross-checks.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::grid::{fill, GridSpec, ScalarGrid};

/// Cell average of `1/r` over a unit cube centred on the singularity.
pub fn self_cell_integral() -> f64 {
    3.0 * (2.0 + 3f64.sqrt()).ln() - std::f64::consts::FRAC_PI_2
}

fn kernel(d: [i64; 3], h: f64) -> f64 {
    let r2 = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) as f64;
    if r2 == 0.0 {
        h * h * self_cell_integral()
    } else {
        h * h / r2.sqrt()
    }
}

/// O(N^2) reference: `sum_y K(x - y) q(y) h^3`.
pub fn direct_potential(q: &ScalarGrid) -> ScalarGrid {
    let spec = q.spec;
    let sources: Vec<([i64; 3], f64)> = q
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(idx, &v)| (spec.coords(idx).map(|c| c as i64), v))
        .collect();
    let values = fill(spec.len(), |idx| {
        let x = spec.coords(idx).map(|c| c as i64);
        sources.iter().map(|(y, v)| v * kernel([x[0] - y[0], x[1] - y[1], x[2] - y[2]], spec.h)).sum()
    });
    ScalarGrid { spec, values }
}

/// Reusable convolution plan for one grid.
pub struct CoulombSolver {
    spec: GridSpec,
    m: usize,
    kernel_hat: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CoulombSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoulombSolver").field("spec", &self.spec).field("padded", &self.m).finish()
    }
}

impl CoulombSolver {
    pub fn new(spec: GridSpec) -> Self {
        let n = spec.n;
        let m = 2 * n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let wrap = |i: usize| if i < n { i as i64 } else { i as i64 - m as i64 };
        let mut kernel_hat: Vec<Complex<f64>> = (0..m * m * m)
            .map(|idx| {
                let (i, j, k) = (idx / (m * m), (idx / m) % m, idx % m);
                if i == n || j == n || k == n {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::new(kernel([wrap(i), wrap(j), wrap(k)], spec.h), 0.0)
                }
            })
            .collect();
        fft3(&mut kernel_hat, m, forward.as_ref());
        CoulombSolver { spec, m, kernel_hat, forward, inverse }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// `sum_y K(x - y) q(y) h^3` on the solver's grid.
    pub fn potential(&self, q: &ScalarGrid) -> crate::Result<ScalarGrid> {
        self.spec.require_same(&q.spec)?;
        let (n, m) = (self.spec.n, self.m);
        let mut buf = vec![Complex::new(0.0, 0.0); m * m * m];
        for (idx, &v) in q.values.iter().enumerate() {
            let [i, j, k] = self.spec.coords(idx);
            buf[(i * m + j) * m + k] = Complex::new(v, 0.0);
        }
        fft3(&mut buf, m, self.forward.as_ref());
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        fft3(&mut buf, m, self.inverse.as_ref());
        let scale = 1.0 / (m * m * m) as f64;
        let values = (0..n * n * n)
            .map(|idx| {
                let [i, j, k] = self.spec.coords(idx);
                buf[(i * m + j) * m + k].re * scale
            })
            .collect();
        Ok(ScalarGrid { spec: self.spec, values })
    }
}

// In-place 3-D transform of an m^3 row-major buffer, one axis at a time.
fn fft3(buf: &mut [Complex<f64>], m: usize, fft: &dyn Fft<f64>) {
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for chunk in buf.chunks_exact_mut(m) {
        fft.process_with_scratch(chunk, &mut scratch);
    }
    let mut line = vec![Complex::new(0.0, 0.0); m];
    // middle axis: stride m; leading axis: stride m^2
    for stride in [m, m * m] {
        for a in 0..m {
            for b in 0..m {
                let base = if stride == m { a * m * m + b } else { a * m + b };
                for (t, l) in line.iter_mut().enumerate() {
                    *l = buf[base + t * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (t, l) in line.iter().enumerate() {
                    buf[base + t * stride] = *l;
                }
            }
        }
    }
}
