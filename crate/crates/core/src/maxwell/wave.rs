use super::system::MaxwellParams;
use crate::error::{FvcError, Result};
use crate::fracvec3d::{nabla_square, VectorField3D};
use crate::grid::{FracOrder, UniformGrid1D};
use crate::special::{gamma, MLParams, MittagLeffler, Wright, WrightParams};
use num_complex::Complex64;

/// Max-norm over interior frames of `∂²t B - v² (^CD^α_W)² B`, with `∂²t`
/// the central second difference of frames spaced `dt` apart. The spatial
/// operator is applied twice, so nodes within two of a face are skipped.
pub fn wave_residual(frames: &[VectorField3D], dt: f64, p: &MaxwellParams) -> Result<f64> {
    if frames.len() < 3 {
        return Err(FvcError::InsufficientFrames { got: frames.len(), min: 3 });
    }
    if !(dt > 0.0) {
        return Err(FvcError::Parameter(format!("frame spacing must be positive, got {dt}")));
    }
    let ord = p.orders[1];
    if p.orders[2] != ord || p.orders[3] != ord {
        return Err(FvcError::Precondition("wave equation needs alpha2 = alpha3 = alpha4".into()));
    }
    let v2 = p.g2 * p.g3;
    let mut worst: f64 = 0.0;
    for w in frames.windows(3) {
        let btt = w[2].sub(&w[1].scale(2.0))?.add(&w[0])?.scale(1.0 / (dt * dt));
        let r = btt.sub(&nabla_square(&w[1], ord)?.scale(v2))?;
        worst = worst.max(r.margin_max_abs(2));
    }
    Ok(worst)
}

/// `E_{α,1}(∓ i v ω x^α)` at each of `x_nodes`; `sign = +1` picks the
/// minus branch. Multiplied by `e^{-iωt}` this gives one frequency of the
/// split solutions.
pub fn dalembert_mode(omega: f64, sign: i8, ord: FracOrder, v: f64, x_nodes: &[f64]) -> Result<Vec<Complex64>> {
    if sign != 1 && sign != -1 {
        return Err(FvcError::Parameter(format!("sign must be +1 or -1, got {sign}")));
    }
    if x_nodes.iter().any(|&x| !(x >= 0.0)) {
        return Err(FvcError::Parameter("mode nodes must be non-negative".into()));
    }
    let alpha = ord.alpha();
    let arg = |x: f64| Complex64::new(0.0, -(sign as f64) * v * omega * x.powf(alpha));
    let zmax = x_nodes.iter().map(|&x| arg(x).norm()).fold(0.0, f64::max);
    let ml = MittagLeffler::new(MLParams::new(alpha, 1.0)?, zmax)?;
    x_nodes.iter().map(|&x| ml.eval(arg(x))).collect()
}

/// Kernel index `k`: 0 for `α <= 1/2`, 1 above.
pub fn wright_kernel_index(ord: FracOrder) -> usize {
    usize::from(ord.alpha() > 0.5)
}

fn wave_order(ord: FracOrder) -> Result<f64> {
    ord.require(0.0, 1.0, "(0, 1)")?;
    if ord.alpha() == 1.0 {
        return Err(FvcError::OrderOutOfRange { alpha: 1.0, range: "(0, 1)" });
    }
    Ok(ord.alpha())
}

/// `G_k(x, τ) = ½ v x^{k-α} φ(-α, k+1-α; -v|τ| x^{-α})` for a batch of lags.
/// Its Fourier transform in `τ` is `x^k E_{2α,k+1}(-ω² x^{2α} / v²)`.
pub fn wright_kernel(ord: FracOrder, v: f64, x: f64, lags: &[f64]) -> Result<Vec<f64>> {
    let alpha = wave_order(ord)?;
    if !(x > 0.0) {
        return Err(FvcError::Domain { modulus: x, cap: 0.0 });
    }
    let k = wright_kernel_index(ord) as f64;
    let scale = v * x.powf(-alpha);
    let zmax = lags.iter().map(|t| scale * t.abs()).fold(0.0, f64::max);
    let phi = Wright::new(WrightParams::new(-alpha, k + 1.0 - alpha)?, zmax)?;
    let pre = 0.5 * v * x.powf(k - alpha);
    lags.iter().map(|t| Ok(pre * phi.eval(-scale * t.abs())?)).collect()
}

/// `u(x, t) = ∫ G_k(x, t - s) f_k(s) ds` by the trapezoid rule over the
/// nodes of `f_k`. Solves `^CD^{2α}_x u = v^{-2} ∂²t u` with boundary data
/// `f_0 = u(0, ·)` (and `f_1 = ∂x u(0, ·)` when `α > 1/2`).
pub fn wave_1d_wright_solution(f: &UniformGrid1D, ord: FracOrder, v: f64, x: f64, t: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(FvcError::Domain { modulus: x, cap: 0.0 });
    }
    if !(v > 0.0) {
        return Err(FvcError::Parameter(format!("wave speed must be positive, got {v}")));
    }
    let h = f.h();
    let active: Vec<(usize, f64)> = f.values().iter().copied().enumerate().filter(|&(_, y)| y != 0.0).collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    let lags: Vec<f64> = active.iter().map(|&(i, _)| t - f.x(i)).collect();
    let g = wright_kernel(ord, v, x, &lags)?;
    let last = f.m() - 1;
    Ok(active.iter().zip(&g).map(|(&(i, y), gi)| if i == 0 || i == last { 0.5 } else { 1.0 } * h * y * gi).sum())
}

fn solve_tridiagonal(diag: f64, off: f64, rhs: &mut [f64], scratch: &mut [f64]) {
    // constant symmetric tridiagonal matrix, Thomas algorithm
    let n = rhs.len();
    scratch[0] = off / diag;
    rhs[0] /= diag;
    for i in 1..n {
        let d = diag - off * scratch[i - 1];
        scratch[i] = off / d;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

/// Independent solve of `^CD^{2α}_x u = v^{-2} ∂²t u` for `2α <= 1` by
/// marching in `x` with an implicit L1 step and a second difference in `t`
/// (zero at both ends of the time grid of `f`). Returns `u(x, ·)` on that
/// time grid, using `nx` steps from `0` to `x`.
pub fn wave_1d_marching(f: &UniformGrid1D, ord: FracOrder, v: f64, x: f64, nx: usize) -> Result<UniformGrid1D> {
    let alpha = wave_order(ord)?;
    if alpha > 0.5 {
        return Err(FvcError::Precondition("x-marching needs 2 alpha <= 1".into()));
    }
    if !(x > 0.0) || nx < 2 {
        return Err(FvcError::Parameter(format!("need x > 0 and nx >= 2, got x = {x}, nx = {nx}")));
    }
    let beta = 2.0 * alpha;
    let hx = x / nx as f64;
    let c = hx.powf(-beta) / gamma(2.0 - beta)?;
    // b_0 = 1 for every beta; powf would give 0^0 = 1 at beta = 1
    let b: Vec<f64> = (0..=nx)
        .map(|k| if k == 0 { 1.0 } else { ((k + 1) as f64).powf(1.0 - beta) - (k as f64).powf(1.0 - beta) })
        .collect();
    let ht = f.h();
    let nt = f.m();
    let inner = nt - 2;
    let lap = 1.0 / (v * v * ht * ht);
    let mut u: Vec<Vec<f64>> = vec![f.values()[1..nt - 1].to_vec()];
    let mut scratch = vec![0.0; inner];
    for n in 1..=nx {
        let mut rhs: Vec<f64> = u[n - 1].iter().map(|&y| c * b[0] * y).collect();
        for k in 1..n {
            let (hi, lo) = (&u[n - k], &u[n - k - 1]);
            for (r, (a, z)) in rhs.iter_mut().zip(hi.iter().zip(lo)) {
                *r -= c * b[k] * (a - z);
            }
        }
        solve_tridiagonal(c * b[0] + 2.0 * lap, -lap, &mut rhs, &mut scratch);
        u.push(rhs);
    }
    let mut out = vec![0.0; nt];
    out[1..nt - 1].copy_from_slice(&u[nx]);
    Ok(f.with_values(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracvec3d::BoxDomain;
    use crate::grid::Interval;
    use std::f64::consts::PI;

    fn ord(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn too_few_frames() {
        let d = BoxDomain::unit_cube(8).unwrap();
        let p = MaxwellParams::uniform(0.5).unwrap();
        let f = vec![VectorField3D::zeros(d); 2];
        assert_eq!(wave_residual(&f, 0.1, &p), Err(FvcError::InsufficientFrames { got: 2, min: 3 }));
    }

    #[test]
    fn static_field_without_curvature() {
        let d = BoxDomain::unit_cube(12).unwrap();
        let p = MaxwellParams::uniform(0.6).unwrap();
        let b = VectorField3D::from_fn(d, |_, _, _| [1.0, -2.0, 0.5]).unwrap();
        assert!(wave_residual(&vec![b; 4], 0.1, &p).unwrap() < 1e-10);
    }

    fn frames<F: Fn(f64, f64) -> f64 + Sync>(m: usize, dt: f64, n: usize, g: F) -> Vec<VectorField3D> {
        let d = BoxDomain::unit_cube(m).unwrap();
        (0..n).map(|s| VectorField3D::from_fn(d, |x, _, _| [0.0, 0.0, g(x, s as f64 * dt)]).unwrap()).collect()
    }

    #[test]
    fn classical_travelling_wave_converges() {
        let p = MaxwellParams::uniform(1.0).unwrap();
        let g = |x: f64, t: f64| (3.0 * (x - t)).sin();
        let r: Vec<f64> = [17, 33, 65]
            .iter()
            .map(|&m| {
                let h = 1.0 / (m - 1) as f64;
                wave_residual(&frames(m, h, 3, g), h, &p).unwrap()
            })
            .collect();
        assert!(r[1] < r[0] / 3.0 && r[2] < r[1] / 3.0, "{r:?}");
    }

    fn mode_frames(m: usize, a: f64, omega: f64, dt: f64) -> Vec<VectorField3D> {
        let d = BoxDomain::unit_cube(m).unwrap();
        let mode = dalembert_mode(omega, 1, ord(a), 1.0, &d.nodes(0)).unwrap();
        (0..3)
            .map(|s| {
                let ph = Complex64::from_polar(1.0, -omega * s as f64 * dt);
                VectorField3D::from_fn(d, |x, _, _| [0.0, (mode[d.node_index(0, x).unwrap()] * ph).re, 0.0]).unwrap()
            })
            .collect()
    }

    #[test]
    fn mittag_leffler_mode_time_part() {
        // ∂²t of the mode is -ω² times the mode, up to the O(dt²) difference error
        let (a, omega) = (0.7, 2.0);
        let errs: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&dt| {
                let f = mode_frames(17, a, omega, dt);
                let btt = f[2].sub(&f[1].scale(2.0)).unwrap().add(&f[0]).unwrap().scale(1.0 / (dt * dt));
                btt.add(&f[1].scale(omega * omega)).unwrap().max_abs()
            })
            .collect();
        assert!(errs[1] < errs[0] / 3.5 && errs[2] < errs[1] / 3.5, "{errs:?}");
    }

    #[test]
    fn mittag_leffler_mode_spatial_residual_stalls() {
        // L1 returns 0 at the lower face where the exact derivative of
        // E_α(λx^α) is λ, so the composed discrete operator does not converge
        let p = MaxwellParams::uniform(0.7).unwrap();
        let r: Vec<f64> =
            [17, 33].iter().map(|&m| wave_residual(&mode_frames(m, 0.7, 2.0, 1e-3), 1e-3, &p).unwrap()).collect();
        assert!(r[1] > 0.5 * r[0] && r[0] > 0.1, "{r:?}");
    }

    #[test]
    fn mode_reductions() {
        let xs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.5).collect();
        for s in [1i8, -1] {
            let m = dalembert_mode(1.0, s, ord(1.0), 1.0, &xs).unwrap();
            for (x, z) in xs.iter().zip(&m) {
                let want = Complex64::new(0.0, -(s as f64) * x).exp();
                assert!((z - want).norm() < 1e-9, "{x}: {z} vs {want}");
            }
        }
        let m = dalembert_mode(3.0, 1, ord(0.3), 2.0, &[0.0]).unwrap();
        assert_eq!(m[0], Complex64::new(1.0, 0.0));
        // E_{1/2,1}(-i), 30-digit series, equal to exp(z²) erfc(-z)
        let m = dalembert_mode(1.0, 1, ord(0.5), 1.0, &[1.0]).unwrap();
        assert!((m[0] - Complex64::new(0.36787944117144232, -0.60715770584139373)).norm() < 1e-13, "{}", m[0]);
    }

    #[test]
    fn half_order_kernel_is_gaussian() {
        let (v, x) = (1.5, 0.4);
        let lags = [0.0, 0.1, -0.3, 0.7];
        let g = wright_kernel(ord(0.5), v, x, &lags).unwrap();
        for (t, gi) in lags.iter().zip(&g) {
            let want = v / (2.0 * (PI * x).sqrt()) * (-v * v * t * t / (4.0 * x)).exp();
            assert!((gi - want).abs() < 1e-12 * want.max(1.0), "{t}: {gi} vs {want}");
        }
    }

    #[test]
    fn zero_data_and_bad_position() {
        let f = UniformGrid1D::from_fn(Interval::new(-1.0, 1.0).unwrap(), 41, |_| 0.0).unwrap();
        assert_eq!(wave_1d_wright_solution(&f, ord(0.4), 1.0, 0.5, 0.2).unwrap(), 0.0);
        assert!(matches!(wave_1d_wright_solution(&f, ord(0.4), 1.0, 0.0, 0.2), Err(FvcError::Domain { .. })));
    }

    #[test]
    fn wright_solution_matches_marching() {
        let a = ord(0.4);
        let pulse = |t: f64| (-(t - 0.8).powi(2) / 0.02).exp();
        let f = UniformGrid1D::from_fn(Interval::new(-3.0, 5.0).unwrap(), 1601, pulse).unwrap();
        let u = wave_1d_wright_solution(&f, a, 1.0, 0.5, 1.0).unwrap();
        let march = wave_1d_marching(&f, a, 1.0, 0.5, 400).unwrap();
        let i = ((1.0 - f.a()) / f.h()).round() as usize;
        let w = march.values()[i];
        assert!((u - w).abs() <= 5e-2 * w.abs().max(1e-3), "{u} vs {w}");
    }

    #[test]
    fn marching_at_first_order_limit() {
        // 2 alpha = 1: the L1 step is a backward difference with weight 1
        let a = ord(0.5);
        let pulse = |t: f64| (-(t - 0.8).powi(2) / 0.02).exp();
        let f = UniformGrid1D::from_fn(Interval::new(-3.0, 5.0).unwrap(), 1601, pulse).unwrap();
        let u = wave_1d_wright_solution(&f, a, 1.0, 0.5, 1.0).unwrap();
        let march = wave_1d_marching(&f, a, 1.0, 0.5, 400).unwrap();
        let w = march.values()[((1.0 - f.a()) / f.h()).round() as usize];
        assert!(w > 0.0 && (u - w).abs() <= 5e-2 * w, "{u} vs {w}");
    }
}
