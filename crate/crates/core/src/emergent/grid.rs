use crate::{Error, Result, Vec3};

/// Cubic grid of `n^3` points `origin + h * (i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub h: f64,
    pub origin: Vec3,
}

impl GridSpec {
    pub fn new(n: usize, h: f64, origin: Vec3) -> Result<Self> {
        let spec = GridSpec { n, h, origin };
        spec.validate()?;
        Ok(spec)
    }

    /// Cell-centred grid covering the cube `[-length/2, length/2]^3`.
    pub fn centered(n: usize, length: f64) -> Result<Self> {
        let h = length / n as f64;
        let o = -0.5 * length + 0.5 * h;
        GridSpec::new(n, h, Vec3::new(o, o, o))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::InvalidParams(format!("grid needs n >= 8, got {}", self.n)));
        }
        if !(self.h > 0.0 && self.h.is_finite()) || !self.origin.is_finite() {
            return Err(Error::InvalidParams(format!("bad grid spacing or origin: h = {}", self.h)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Edge length `n h` of the sampled cube.
    pub fn length(&self) -> f64 {
        self.n as f64 * self.h
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.origin + Vec3::new(i as f64, j as f64, k as f64) * self.h
    }

    pub fn point_at(&self, idx: usize) -> Vec3 {
        let [i, j, k] = self.coords(idx);
        self.point(i, j, k)
    }

    /// Distance in cells to the nearest face.
    pub fn boundary_distance(&self, idx: usize) -> usize {
        let last = self.n - 1;
        self.coords(idx).iter().map(|&c| c.min(last - c)).min().unwrap_or(0)
    }

    pub(crate) fn require_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::domain(format!("grid mismatch: {self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Evaluates `f` on every cell index, in parallel when enabled.
#[cfg(feature = "parallel")]
pub(crate) fn fill<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fill<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn zeros(spec: GridSpec) -> Self {
        ScalarGrid { spec, values: vec![0.0; spec.len()] }
    }

    pub fn from_fn<F: Fn(Vec3) -> f64 + Sync + Send>(spec: GridSpec, f: F) -> Self {
        ScalarGrid { spec, values: fill(spec.len(), |idx| f(spec.point_at(idx))) }
    }

    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::domain(format!("expected {} values, got {}", spec.len(), values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("grid values must be finite"));
        }
        Ok(ScalarGrid { spec, values })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.spec.index(i, j, k)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ScalarGrid { spec: self.spec, values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &ScalarGrid) -> Result<Self> {
        self.spec.require_same(&other.spec)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + factor * b).collect();
        Ok(ScalarGrid { spec: self.spec, values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorGrid {
    pub spec: GridSpec,
    pub values: Vec<Vec3>,
}

impl VectorGrid {
    pub fn zeros(spec: GridSpec) -> Self {
        VectorGrid { spec, values: vec![Vec3::ZERO; spec.len()] }
    }

    pub fn from_fn<F: Fn(Vec3) -> Vec3 + Sync + Send>(spec: GridSpec, f: F) -> Self {
        VectorGrid { spec, values: fill(spec.len(), |idx| f(spec.point_at(idx))) }
    }

    pub fn new(spec: GridSpec, values: Vec<Vec3>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::domain(format!("expected {} values, got {}", spec.len(), values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("grid values must be finite"));
        }
        Ok(VectorGrid { spec, values })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.values[self.spec.index(i, j, k)]
    }

    pub fn component(&self, axis: usize) -> ScalarGrid {
        ScalarGrid { spec: self.spec, values: self.values.iter().map(|v| v.component(axis)).collect() }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        VectorGrid { spec: self.spec, values: self.values.iter().map(|&v| v * factor).collect() }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &VectorGrid) -> Result<Self> {
        self.spec.require_same(&other.spec)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b * factor).collect();
        Ok(VectorGrid { spec: self.spec, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let s = GridSpec::new(9, 0.5, Vec3::new(-1.0, 0.0, 2.0)).unwrap();
        for idx in [0, 1, 17, 80, 728] {
            let [i, j, k] = s.coords(idx);
            assert_eq!(s.index(i, j, k), idx);
        }
        assert_eq!(s.point(1, 2, 3), Vec3::new(-0.5, 1.0, 3.5));
        assert_eq!(s.boundary_distance(s.index(4, 4, 4)), 4);
        assert_eq!(s.boundary_distance(s.index(4, 8, 4)), 0);
    }

    #[test]
    fn centered_grid_is_symmetric() {
        let s = GridSpec::centered(16, 2.0).unwrap();
        let a = s.point(0, 0, 0);
        let b = s.point(15, 15, 15);
        assert!((a + b).norm() < 1e-15);
        assert_eq!(s.h, 0.125);
    }

    #[test]
    fn rejects_bad_specs_and_data() {
        assert!(GridSpec::new(7, 1.0, Vec3::ZERO).is_err());
        assert!(GridSpec::new(8, 0.0, Vec3::ZERO).is_err());
        let s = GridSpec::new(8, 1.0, Vec3::ZERO).unwrap();
        assert!(ScalarGrid::new(s, vec![0.0; 10]).is_err());
        let mut v = vec![0.0; 512];
        v[3] = f64::NAN;
        assert!(ScalarGrid::new(s, v).is_err());
        let other = GridSpec::new(8, 2.0, Vec3::ZERO).unwrap();
        assert!(ScalarGrid::zeros(s).axpy(1.0, &ScalarGrid::zeros(other)).is_err());
    }
}
