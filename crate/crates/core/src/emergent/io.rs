//! Flat binary layout: `n` as little-endian u64, `h` and the three origin
//! coordinates as little-endian f64, then the samples as little-endian f64
//! in row-major order (last index fastest). Vector grids store the three
//! components of each sample consecutively.

use std::io::{Read, Write};

use super::grid::{GridSpec, ScalarGrid, VectorGrid};
use crate::{Error, Result, Vec3};

fn write_header<W: Write>(w: &mut W, spec: &GridSpec) -> Result<()> {
    w.write_all(&(spec.n as u64).to_le_bytes())?;
    for v in [spec.h, spec.origin.x, spec.origin.y, spec.origin.z] {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn read_header<R: Read>(r: &mut R) -> Result<GridSpec> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b);
    if n > 4096 {
        return Err(Error::Io(format!("implausible grid size {n}")));
    }
    let h = read_f64(r)?;
    let origin = Vec3::new(read_f64(r)?, read_f64(r)?, read_f64(r)?);
    GridSpec::new(n as usize, h, origin)
}

pub fn write_scalar_binary<W: Write>(w: &mut W, g: &ScalarGrid) -> Result<()> {
    write_header(w, &g.spec)?;
    for v in &g.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_scalar_binary<R: Read>(r: &mut R) -> Result<ScalarGrid> {
    let spec = read_header(r)?;
    let values = (0..spec.len()).map(|_| read_f64(r)).collect::<Result<Vec<_>>>()?;
    ScalarGrid::new(spec, values)
}

pub fn write_vector_binary<W: Write>(w: &mut W, g: &VectorGrid) -> Result<()> {
    write_header(w, &g.spec)?;
    for v in &g.values {
        for c in v.to_array() {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_vector_binary<R: Read>(r: &mut R) -> Result<VectorGrid> {
    let spec = read_header(r)?;
    let values = (0..spec.len())
        .map(|_| Ok(Vec3::new(read_f64(r)?, read_f64(r)?, read_f64(r)?)))
        .collect::<Result<Vec<_>>>()?;
    VectorGrid::new(spec, values)
}

pub fn write_scalar_csv<W: Write>(w: &mut W, g: &ScalarGrid) -> Result<()> {
    writeln!(w, "x,y,z,value")?;
    for (idx, v) in g.values.iter().enumerate() {
        let x = g.spec.point_at(idx);
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", x.x, x.y, x.z, v)?;
    }
    Ok(())
}

pub fn write_vector_csv<W: Write>(w: &mut W, g: &VectorGrid) -> Result<()> {
    writeln!(w, "x,y,z,vx,vy,vz")?;
    for (idx, v) in g.values.iter().enumerate() {
        let x = g.spec.point_at(idx);
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", x.x, x.y, x.z, v.x, v.y, v.z)?;
    }
    Ok(())
}
