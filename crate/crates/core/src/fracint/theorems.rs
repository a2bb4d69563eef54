use super::integrals::{plane_flux, rect_double_integral, volume_alpha};
use crate::error::{FvcError, Result};
use crate::frac1d::{caputo_slice, rl_integral_end_slice};
use crate::fracvec3d::{classical, curl_alpha, div_alpha, BoxDomain, ScalarFieldSpec, VectorField3D};
use crate::grid::{FracOrder, Interval, MIN_NODES};
use ndarray::{Array2, Axis, Zip};
use serde::{Deserialize, Serialize};

/// The rectangle `[a,b]×[c,d]` with `(mx, my)` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectRegion2D {
    pub bounds: [Interval; 2],
    pub resolution: [usize; 2],
}

impl RectRegion2D {
    pub fn new(bounds: [Interval; 2], resolution: [usize; 2]) -> Result<Self> {
        for &m in &resolution {
            if m < MIN_NODES {
                return Err(FvcError::GridTooSmall { got: m, min: MIN_NODES });
            }
        }
        Ok(RectRegion2D { bounds, resolution })
    }

    pub fn unit_square(m: usize) -> Result<Self> {
        Self::new([Interval::unit(); 2], [m; 2])
    }

    pub fn step(&self, axis: usize) -> f64 {
        self.bounds[axis].step(self.resolution[axis])
    }

    pub fn node(&self, axis: usize, i: usize) -> f64 {
        self.bounds[axis].node(self.resolution[axis], i)
    }

    fn sample<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> Array2<f64> {
        let xs: Vec<f64> = (0..self.resolution[0]).map(|i| self.node(0, i)).collect();
        let ys: Vec<f64> = (0..self.resolution[1]).map(|j| self.node(1, j)).collect();
        let mut out = Array2::zeros((xs.len(), ys.len()));
        Zip::indexed(&mut out).par_for_each(|(i, j), v| *v = f(xs[i], ys[j]));
        out
    }
}

/// A planar vector field `(F_x, F_y)` sampled on a [`RectRegion2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub region: RectRegion2D,
    pub x: Array2<f64>,
    pub y: Array2<f64>,
}

impl VectorField2D {
    pub fn from_fn<F: Fn(f64, f64) -> [f64; 2] + Sync>(region: RectRegion2D, f: F) -> Result<Self> {
        let x = region.sample(|x, y| f(x, y)[0]);
        let y = region.sample(|x, y| f(x, y)[1]);
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(FvcError::Parameter("non-finite field sample".into()));
        }
        Ok(VectorField2D { region, x, y })
    }

    /// Registry components evaluated in the plane `z = 0`.
    pub fn from_specs(region: RectRegion2D, fx: &ScalarFieldSpec, fy: &ScalarFieldSpec) -> Result<Self> {
        Self::from_fn(region, |x, y| [fx.eval(x, y, 0.0), fy.eval(x, y, 0.0)])
    }
}

/// Both sides of a theorem and their gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub alpha: f64,
    pub grid: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl TheoremReport {
    pub const CSV_HEADER: &'static str = "alpha,grid,lhs,rhs,residual";

    pub fn new(ord: FracOrder, grid: &[usize], lhs: f64, rhs: f64) -> Self {
        TheoremReport { alpha: ord.alpha(), grid: grid.to_vec(), lhs, rhs, residual: (lhs - rhs).abs() }
    }

    /// Grid sizes joined by `x`, e.g. `24x24x24`.
    pub fn grid_label(&self) -> String {
        self.grid.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("x")
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.12e},{:.12e},{:.12e}", self.alpha, self.grid_label(), self.lhs, self.rhs, self.residual)
    }
}

// Caputo derivative along rows (axis 0) or columns (axis 1) of a 2-D array.
fn caputo_2d(values: &Array2<f64>, axis: usize, h: f64, ord: FracOrder) -> Result<Array2<f64>> {
    let mut out = Array2::zeros(values.raw_dim());
    for (src, mut dst) in values.lanes(Axis(axis)).into_iter().zip(out.lanes_mut(Axis(axis))) {
        let s = src.to_vec();
        let mut buf = vec![0.0; s.len()];
        caputo_slice(&s, h, ord, &mut buf)?;
        dst.assign(&ndarray::ArrayView1::from(&buf[..]));
    }
    Ok(out)
}

fn end_integral(line: Vec<f64>, h: f64, ord: FracOrder) -> f64 {
    rl_integral_end_slice(&line, h, ord.alpha())
}

fn green_sides(px: &Array2<f64>, py: &Array2<f64>, steps: [f64; 2], ord: FracOrder) -> Result<(f64, f64)> {
    let (mx, my) = px.dim();
    let bottom = px.index_axis(Axis(1), 0);
    let top = px.index_axis(Axis(1), my - 1);
    let left = py.index_axis(Axis(0), 0);
    let right = py.index_axis(Axis(0), mx - 1);
    let lhs =
        end_integral((&top - &bottom).to_vec(), steps[0], ord) + end_integral((&left - &right).to_vec(), steps[1], ord);
    let integrand = caputo_2d(px, 1, steps[1], ord)? - caputo_2d(py, 0, steps[0], ord)?;
    Ok((lhs, rect_double_integral(&integrand, steps, ord)))
}

/// Fractional Green's theorem on a rectangle, boundary terms grouped as
/// `I_x[F_x(x,d) - F_x(x,c)](b) + I_y[F_y(a,y) - F_y(b,y)](d)` against
/// `I_x I_y (^CD_y F_x - ^CD_x F_y)`.
pub fn green_residual(field: &VectorField2D, ord: FracOrder) -> Result<TheoremReport> {
    ord.require(0.0, 1.0, "(0, 1]")?;
    let r = field.region;
    let (lhs, rhs) = green_sides(&field.x, &field.y, [r.step(0), r.step(1)], ord)?;
    Ok(TheoremReport::new(ord, &r.resolution, lhs, rhs))
}

/// A plane `normal · r = level` cut to the box. Only coordinate planes
/// through grid nodes are supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub normal: [f64; 3],
    pub level: f64,
}

impl Surface {
    /// The face `x_axis = level` with normal `+e_axis`.
    pub fn coordinate_plane(axis: usize, level: f64) -> Self {
        let mut normal = [0.0; 3];
        normal[axis] = 1.0;
        Surface { normal, level }
    }

    // (normal axis, node index, orientation sign)
    fn resolve(&self, domain: &BoxDomain) -> Result<(usize, usize, f64)> {
        let nz: Vec<usize> = (0..3).filter(|&l| self.normal[l] != 0.0).collect();
        let [k] = nz[..] else {
            return Err(FvcError::UnsupportedSurface);
        };
        let s = self.normal[k].signum();
        let idx = domain.node_index(k, self.level * s / self.normal[k].abs()).ok_or(FvcError::UnsupportedSurface)?;
        Ok((k, idx, s))
    }
}

/// Fractional Stokes theorem on a coordinate-plane rectangle spanning the
/// box. With in-plane axes `(u, v)` cyclic after the normal, the
/// counterclockwise boundary terms are
/// `I_u[F_u(u,v_lo) - F_u(u,v_hi)] + I_v[F_v(u_hi,v) - F_v(u_lo,v)]`, and the
/// right side is the flux of `Curl^α F`. Both flip sign with the normal.
pub fn stokes_residual(field: &VectorField3D, surface: &Surface, ord: FracOrder) -> Result<TheoremReport> {
    ord.require(0.0, 1.0, "(0, 1]")?;
    let d = *field.domain();
    let (k, idx, s) = surface.resolve(&d)?;
    let (u, v) = ((k + 1) % 3, (k + 2) % 3);
    let fu = field.component(u).values().index_axis(Axis(k), idx).to_owned();
    let fv = field.component(v).values().index_axis(Axis(k), idx).to_owned();
    // plane arrays are indexed by the remaining axes in increasing order
    let (fu, fv) = if u < v { (fu, fv) } else { (fu.reversed_axes(), fv.reversed_axes()) };
    let (mu, mv) = fu.dim();
    let lhs = end_integral((&fu.index_axis(Axis(1), 0) - &fu.index_axis(Axis(1), mv - 1)).to_vec(), d.step(u), ord)
        + end_integral((&fv.index_axis(Axis(0), mu - 1) - &fv.index_axis(Axis(0), 0)).to_vec(), d.step(v), ord);
    let curl = curl_alpha(field, ord)?;
    let rhs = plane_flux(curl.component(k), k, idx, ord);
    Ok(TheoremReport::new(ord, &d.resolution, s * lhs, s * rhs))
}

fn gauss_lhs(field: &VectorField3D, ord: FracOrder) -> f64 {
    let d = field.domain();
    (0..3)
        .map(|l| {
            let c = field.component(l);
            plane_flux(c, l, d.resolution[l] - 1, ord) - plane_flux(c, l, 0, ord)
        })
        .sum()
}

/// Fractional Gauss theorem on the box: face differences
/// `Σ_l I I [F_l(upper) - F_l(lower)]` against `volume_alpha(Div^α F)`.
pub fn gauss_residual(field: &VectorField3D, ord: FracOrder) -> Result<TheoremReport> {
    ord.require(0.0, 1.0, "(0, 1]")?;
    let rhs = volume_alpha(&div_alpha(field, ord)?, ord);
    Ok(TheoremReport::new(ord, &field.domain().resolution, gauss_lhs(field, ord), rhs))
}

// Classical α = 1 counterparts: trapezoid sums and finite differences.

fn trapezoid(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    h * (v[1..n - 1].iter().sum::<f64>() + 0.5 * (v[0] + v[n - 1]))
}

fn central(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

fn trapezoid_2d(v: &Array2<f64>, hx: f64, hy: f64) -> f64 {
    let rows: Vec<f64> = v.axis_iter(Axis(0)).map(|r| trapezoid(&r.to_vec(), hy)).collect();
    trapezoid(&rows, hx)
}

/// Classical Green residual: trapezoid line and area integrals of
/// central-difference derivatives, same boundary grouping as [`green_residual`].
pub fn green_residual_classical(field: &VectorField2D) -> TheoremReport {
    let r = field.region;
    let (hx, hy) = (r.step(0), r.step(1));
    let (mx, my) = field.x.dim();
    let line_x: Vec<f64> = (0..mx).map(|i| field.x[[i, my - 1]] - field.x[[i, 0]]).collect();
    let line_y: Vec<f64> = (0..my).map(|j| field.y[[0, j]] - field.y[[mx - 1, j]]).collect();
    let lhs = trapezoid(&line_x, hx) + trapezoid(&line_y, hy);
    let mut integrand = Array2::zeros((mx, my));
    for i in 0..mx {
        let dy = central(&field.x.row(i).to_vec(), hy);
        for j in 0..my {
            integrand[[i, j]] += dy[j];
        }
    }
    for j in 0..my {
        let dx = central(&field.y.column(j).to_vec(), hx);
        for i in 0..mx {
            integrand[[i, j]] -= dx[i];
        }
    }
    let ord = FracOrder::new(1.0).expect("valid order");
    TheoremReport::new(ord, &r.resolution, lhs, trapezoid_2d(&integrand, hx, hy))
}

/// Classical Gauss residual on the box.
pub fn gauss_residual_classical(field: &VectorField3D) -> Result<TheoremReport> {
    let d = *field.domain();
    let ord = FracOrder::new(1.0)?;
    let h = [d.step(0), d.step(1), d.step(2)];
    let mut lhs = 0.0;
    for l in 0..3 {
        let (u, v) = match l {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let vals = field.component(l).values();
        let hi = vals.index_axis(Axis(l), d.resolution[l] - 1).to_owned();
        let lo = vals.index_axis(Axis(l), 0).to_owned();
        lhs += trapezoid_2d(&(hi - lo), h[u], h[v]);
    }
    let div = classical::div(field)?;
    let planes: Vec<f64> = div.values().axis_iter(Axis(0)).map(|p| trapezoid_2d(&p.to_owned(), h[1], h[2])).collect();
    Ok(TheoremReport::new(ord, &d.resolution, lhs, trapezoid(&planes, h[0])))
}

/// Classical Stokes residual on a coordinate plane.
pub fn stokes_residual_classical(field: &VectorField3D, surface: &Surface) -> Result<TheoremReport> {
    let d = *field.domain();
    let ord = FracOrder::new(1.0)?;
    let (k, idx, s) = surface.resolve(&d)?;
    let (u, v) = ((k + 1) % 3, (k + 2) % 3);
    let fu = field.component(u).values().index_axis(Axis(k), idx).to_owned();
    let fv = field.component(v).values().index_axis(Axis(k), idx).to_owned();
    let (fu, fv) = if u < v { (fu, fv) } else { (fu.reversed_axes(), fv.reversed_axes()) };
    let (mu, mv) = fu.dim();
    let lhs = trapezoid(&(&fu.index_axis(Axis(1), 0) - &fu.index_axis(Axis(1), mv - 1)).to_vec(), d.step(u))
        + trapezoid(&(&fv.index_axis(Axis(0), mu - 1) - &fv.index_axis(Axis(0), 0)).to_vec(), d.step(v));
    let curl = classical::curl(field)?;
    let plane = curl.component(k).values().index_axis(Axis(k), idx).to_owned();
    let (a, b) = (u.min(v), u.max(v));
    let rhs = trapezoid_2d(&plane, d.step(a), d.step(b));
    Ok(TheoremReport::new(ord, &d.resolution, s * lhs, s * rhs))
}
