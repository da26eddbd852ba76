//! Wavefront OBJ export of a parameter grid.

use std::fmt::Write;

use crosscap::surface::SurfaceMap;

use crate::CliError;

/// `(n+1)²` vertices, row-major with `v` rows and `u` columns, and two
/// triangles per grid cell.
pub fn obj(f: &SurfaceMap<f64>, n: usize) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--resolution must be at least 1".into()));
    }
    let d = f.domain();
    let lerp = |(a, b): (f64, f64), i: usize| a + (b - a) * i as f64 / n as f64;
    let mut out = String::new();
    writeln!(out, "# crosscap mesh {n}x{n}").unwrap();
    for i in 0..=n {
        let v = lerp(d.v, i);
        for j in 0..=n {
            let u = lerp(d.u, j);
            let p = f.point(u, v);
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(CliError::Math(format!(
                    "surface is not finite at (u, v) = ({u}, {v})"
                )));
            }
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z).unwrap();
        }
    }
    let idx = |i: usize, j: usize| i * (n + 1) + j + 1;
    for i in 0..n {
        for j in 0..n {
            let (a, b, c, d) = (idx(i, j), idx(i, j + 1), idx(i + 1, j + 1), idx(i + 1, j));
            writeln!(out, "f {a} {b} {c}").unwrap();
            writeln!(out, "f {a} {c} {d}").unwrap();
        }
    }
    Ok(out)
}
