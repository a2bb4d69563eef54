use super::system::{EMState, MaxwellParams};
use crate::error::{FvcError, Result};
use crate::fracvec3d::{BoxDomain, ScalarField3D, VectorField3D};
use crate::grid::{FracOrder, Interval};
use ndarray::Array3;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

const MAGIC: &str = "fracvec-snapshot 1";
const END: &str = "END_HEADER";

/// Writes one frame: a text header (domain, resolution, t, couplings,
/// orders) closed by `END_HEADER`, then little-endian f64 arrays for
/// `E_x, E_y, E_z, B_x, B_y, B_z, ρ, j_x, j_y, j_z` in row-major order.
pub fn write_snapshot<W: Write>(mut w: W, s: &EMState, p: &MaxwellParams) -> Result<()> {
    let d = s.domain();
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "t {:e}", s.t)?;
    let b: Vec<String> = d.bounds.iter().map(|i| format!("{:e} {:e}", i.a, i.b)).collect();
    writeln!(w, "bounds {}", b.join(" "))?;
    writeln!(w, "resolution {} {} {}", d.resolution[0], d.resolution[1], d.resolution[2])?;
    writeln!(w, "g {:e} {:e} {:e}", p.g1, p.g2, p.g3)?;
    let a: Vec<String> = p.orders.iter().map(|o| format!("{:e}", o.alpha())).collect();
    writeln!(w, "alpha {}", a.join(" "))?;
    writeln!(w, "{END}")?;
    let fields = s.e.components().iter().chain(s.b.components()).chain(std::iter::once(&s.rho)).chain(s.j.components());
    let mut buf = Vec::with_capacity(8 * d.resolution.iter().product::<usize>());
    for f in fields {
        buf.clear();
        for v in f.values().iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn save_snapshot(path: &Path, s: &EMState, p: &MaxwellParams) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_snapshot(&mut f, s, p)?;
    f.flush()?;
    Ok(())
}

fn bad(msg: &str) -> FvcError {
    FvcError::Io(format!("malformed snapshot: {msg}"))
}

fn numbers(line: &str, key: &str, n: usize) -> Result<Vec<f64>> {
    let rest = line.trim_end().strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| bad(key))?;
    let v: Vec<f64> = rest.split_whitespace().map(|t| t.parse::<f64>().map_err(|_| bad(key))).collect::<Result<_>>()?;
    if v.len() != n {
        return Err(bad(key));
    }
    Ok(v)
}

/// Reads a frame written by [`write_snapshot`].
pub fn read_snapshot<R: Read>(r: R) -> Result<(EMState, MaxwellParams)> {
    let mut r = BufReader::new(r);
    let mut lines = Vec::new();
    loop {
        let mut line = String::new();
        if r.read_line(&mut line)? == 0 {
            return Err(bad("missing END_HEADER"));
        }
        if line.trim_end() == END {
            break;
        }
        lines.push(line);
    }
    if lines.len() != 6 || lines[0].trim_end() != MAGIC {
        return Err(bad("header"));
    }
    let t = numbers(&lines[1], "t", 1)?[0];
    let b = numbers(&lines[2], "bounds", 6)?;
    let m = numbers(&lines[3], "resolution", 3)?;
    let g = numbers(&lines[4], "g", 3)?;
    let a = numbers(&lines[5], "alpha", 4)?;
    let bounds = [Interval::new(b[0], b[1])?, Interval::new(b[2], b[3])?, Interval::new(b[4], b[5])?];
    let res = [m[0] as usize, m[1] as usize, m[2] as usize];
    let d = BoxDomain::new(bounds, res)?;
    let p = MaxwellParams::new(
        [g[0], g[1], g[2]],
        [FracOrder::new(a[0])?, FracOrder::new(a[1])?, FracOrder::new(a[2])?, FracOrder::new(a[3])?],
    )?;
    let n = res.iter().product::<usize>();
    let mut bytes = vec![0u8; 8 * n];
    let mut next = || -> Result<ScalarField3D> {
        r.read_exact(&mut bytes).map_err(|_| bad("truncated data"))?;
        let v: Vec<f64> =
            bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
        ScalarField3D::new(d, Array3::from_shape_vec(res, v).expect("length checked"))
    };
    let vector = |next: &mut dyn FnMut() -> Result<ScalarField3D>| -> Result<VectorField3D> {
        VectorField3D::new(next()?, next()?, next()?)
    };
    let e = vector(&mut next)?;
    let bf = vector(&mut next)?;
    let rho = next()?;
    let j = vector(&mut next)?;
    Ok((EMState::new(e, bf, rho, j, t)?, p))
}

pub fn load_snapshot(path: &Path) -> Result<(EMState, MaxwellParams)> {
    read_snapshot(std::fs::File::open(path)?)
}
