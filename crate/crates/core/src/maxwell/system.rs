use crate::error::{FvcError, Result};
use crate::fracint::{flux_alpha, volume_alpha, Face, Side};
use crate::fracvec3d::{curl_alpha, div_alpha, BoxDomain, ScalarField3D, VectorField3D};
use crate::grid::FracOrder;
use serde::{Deserialize, Serialize};

/// Couplings `g1, g2, g3 > 0` and orders `α1..α4 ∈ (0, 1]` of
/// `Div^α1 E = g1 ρ`, `Curl^α2 E = -∂t B`, `Div^α3 B = 0`,
/// `Curl^α4 B = g2 j + (1 / g3) ∂t E` (up to the `g2` scaling of the last).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellParams {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub orders: [FracOrder; 4],
}

impl MaxwellParams {
    pub fn new(g: [f64; 3], orders: [FracOrder; 4]) -> Result<Self> {
        if g.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(FvcError::Parameter(format!("couplings must be positive, got {g:?}")));
        }
        for o in &orders {
            o.require(0.0, 1.0, "(0, 1]")?;
        }
        Ok(MaxwellParams { g1: g[0], g2: g[1], g3: g[2], orders })
    }

    /// Unit couplings with every order equal to `alpha`.
    pub fn uniform(alpha: f64) -> Result<Self> {
        let o = FracOrder::new(alpha)?;
        Self::new([1.0; 3], [o; 4])
    }

    /// Wave speed `sqrt(g2 g3)`.
    pub fn v(&self) -> f64 {
        (self.g2 * self.g3).sqrt()
    }

    fn alpha(&self, i: usize) -> FracOrder {
        self.orders[i - 1]
    }
}

/// Fields and sources at time `t` on one box.
#[derive(Debug, Clone, PartialEq)]
pub struct EMState {
    pub e: VectorField3D,
    pub b: VectorField3D,
    pub rho: ScalarField3D,
    pub j: VectorField3D,
    pub t: f64,
}

impl EMState {
    pub fn new(e: VectorField3D, b: VectorField3D, rho: ScalarField3D, j: VectorField3D, t: f64) -> Result<Self> {
        let d = e.domain();
        if b.domain() != d || rho.domain() != d || j.domain() != d {
            return Err(FvcError::DomainMismatch);
        }
        if !t.is_finite() {
            return Err(FvcError::Parameter("non-finite time".into()));
        }
        Ok(EMState { e, b, rho, j, t })
    }

    /// All fields and sources zero.
    pub fn zeros(domain: BoxDomain) -> Self {
        let z = VectorField3D::zeros(domain);
        EMState { e: z.clone(), b: z.clone(), rho: ScalarField3D::zeros(domain), j: z, t: 0.0 }
    }

    pub fn domain(&self) -> &BoxDomain {
        self.e.domain()
    }

    /// `sqrt(Σ|E|^2 + Σ|B|^2)` over all nodes.
    pub fn field_norm(&self) -> f64 {
        (self.e.sum_squares() + self.b.sum_squares()).sqrt()
    }

    fn max_abs(&self) -> f64 {
        self.e.max_abs().max(self.b.max_abs())
    }
}

/// `(∂t E, ∂t B) = (g3 (g2 Curl^α4 B - j), -Curl^α2 E)`.
pub fn maxwell_rhs(s: &EMState, p: &MaxwellParams) -> Result<(VectorField3D, VectorField3D)> {
    let de = curl_alpha(&s.b, p.alpha(4))?.scale(p.g2).sub(&s.j)?.scale(p.g3);
    let db = curl_alpha(&s.e, p.alpha(2))?.scale(-1.0);
    Ok((de, db))
}

// Growth factor of the max-norm over one step that counts as a blow-up.
const GROWTH_LIMIT: f64 = 10.0;

fn held_rhs(s: &EMState, p: &MaxwellParams) -> Result<(VectorField3D, VectorField3D)> {
    let (mut de, mut db) = maxwell_rhs(s, p)?;
    de.zero_faces();
    db.zero_faces();
    Ok((de, db))
}

fn shifted(s: &EMState, k: &(VectorField3D, VectorField3D), c: f64) -> Result<EMState> {
    Ok(EMState { e: s.e.axpy(c, &k.0)?, b: s.b.axpy(c, &k.1)?, rho: s.rho.clone(), j: s.j.clone(), t: s.t + c })
}

/// One classical RK4 step of `(E, B)`. Face values are held fixed and
/// sources are frozen over the step. A max-norm growth above 10x aborts
/// with [`FvcError::Instability`].
pub fn maxwell_step(s: &EMState, p: &MaxwellParams, dt: f64) -> Result<EMState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(FvcError::Parameter(format!("time step must be positive, got {dt}")));
    }
    let k1 = held_rhs(s, p)?;
    let k2 = held_rhs(&shifted(s, &k1, 0.5 * dt)?, p)?;
    let k3 = held_rhs(&shifted(s, &k2, 0.5 * dt)?, p)?;
    let k4 = held_rhs(&shifted(s, &k3, dt)?, p)?;
    let w = dt / 6.0;
    let e = s.e.axpy(w, &k1.0)?.axpy(2.0 * w, &k2.0)?.axpy(2.0 * w, &k3.0)?.axpy(w, &k4.0)?;
    let b = s.b.axpy(w, &k1.1)?.axpy(2.0 * w, &k2.1)?.axpy(2.0 * w, &k3.1)?.axpy(w, &k4.1)?;
    let next = EMState { e, b, rho: s.rho.clone(), j: s.j.clone(), t: s.t + dt };
    let (before, after) = (s.max_abs(), next.max_abs());
    if !after.is_finite() || (before > 0.0 && after > GROWTH_LIMIT * before) {
        return Err(FvcError::Instability { before, after });
    }
    Ok(next)
}

/// Outcome of [`calibrate_dt`]: the largest probed step that passed and,
/// for every probed step, the relative gap between the norms reached with
/// `dt` and with `dt / 2` over the same time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtCalibration {
    pub dt_max: f64,
    pub probes: Vec<(f64, f64)>,
}

// Relative norm gap between the dt and dt/2 runs that still counts as stable.
const PROBE_TOL: f64 = 1e-2;

fn run(s: &EMState, p: &MaxwellParams, dt: f64, steps: usize) -> Result<Option<f64>> {
    let mut cur = s.clone();
    for _ in 0..steps {
        match maxwell_step(&cur, p, dt) {
            Ok(next) => cur = next,
            Err(FvcError::Instability { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(cur.field_norm()))
}

/// Doubling probe for the stable step. Starting from `1e-3 h_min`, each
/// trial `dt` runs `steps` steps and is checked against `2 steps` steps of
/// `dt / 2`; doubling stops once the norms differ by more than 1% or the
/// step detector fires. The semi-discrete fractional system can grow on
/// its own, so the probe compares runs instead of bounding the norm.
pub fn calibrate_dt(s: &EMState, p: &MaxwellParams, steps: usize) -> Result<DtCalibration> {
    let d = s.domain();
    let h = (0..3).map(|l| d.step(l)).fold(f64::INFINITY, f64::min);
    if s.field_norm() == 0.0 || steps == 0 {
        return Err(FvcError::Precondition("calibration needs a nonzero state and steps > 0".into()));
    }
    let mut dt = 1e-3 * h;
    let mut best = None;
    let mut probes = Vec::new();
    for _ in 0..40 {
        let gap = match (run(s, p, dt, steps)?, run(s, p, 0.5 * dt, 2 * steps)?) {
            (Some(a), Some(b)) => (a - b).abs() / b.max(f64::MIN_POSITIVE),
            _ => f64::INFINITY,
        };
        probes.push((dt, gap));
        if !(gap <= PROBE_TOL) {
            break;
        }
        best = Some(dt);
        dt *= 2.0;
    }
    let dt_max = best.ok_or_else(|| FvcError::Precondition("no stable step found".into()))?;
    Ok(DtCalibration { dt_max, probes })
}

/// Interior max-norms of `Div^α1 E - g1 ρ` and `Div^α3 B`.
pub fn gauss_constraint_residuals(s: &EMState, p: &MaxwellParams) -> Result<(f64, f64)> {
    let re = div_alpha(&s.e, p.alpha(1))?.sub(&s.rho.scale(p.g1))?;
    let rb = div_alpha(&s.b, p.alpha(3))?;
    Ok((re.interior_max_abs(), rb.interior_max_abs()))
}

fn require_same(p: &MaxwellParams) -> Result<()> {
    if p.alpha(1) != p.alpha(4) {
        return Err(FvcError::Precondition(format!(
            "charge conservation needs alpha1 = alpha4, got {} and {}",
            p.alpha(1).alpha(),
            p.alpha(4).alpha()
        )));
    }
    Ok(())
}

/// Interior max-norm of `g1 ∂t ρ + g3 Div^α1 j`.
pub fn charge_conservation_residual(s: &EMState, drho_dt: &ScalarField3D, p: &MaxwellParams) -> Result<f64> {
    require_same(p)?;
    Ok(drho_dt.scale(p.g1).add(&div_alpha(&s.j, p.alpha(1))?.scale(p.g3))?.interior_max_abs())
}

/// `(dQ/dt, J)` between two states: the difference quotient of
/// `Q = volume_alpha(g1 ρ)` and `J = g3 Σ (outward face fluxes of j)` with
/// `j` averaged over the two states. Conservation means `dQ/dt + J ≈ 0`.
pub fn integral_charge_balance(earlier: &EMState, later: &EMState, p: &MaxwellParams) -> Result<(f64, f64)> {
    require_same(p)?;
    if earlier.domain() != later.domain() {
        return Err(FvcError::DomainMismatch);
    }
    let dt = later.t - earlier.t;
    if !(dt > 0.0) {
        return Err(FvcError::Precondition("states must be in increasing time order".into()));
    }
    let ord = p.alpha(1);
    let q = |s: &EMState| volume_alpha(&s.rho.scale(p.g1), ord);
    let dq = (q(later) - q(earlier)) / dt;
    let j = earlier.j.add(&later.j)?.scale(0.5);
    let mut flux = 0.0;
    for axis in 0..3 {
        for side in [Side::Lower, Side::Upper] {
            flux += flux_alpha(&j, Face::outward(axis, side), ord)?;
        }
    }
    Ok((dq, p.g3 * flux))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracvec3d::{ScalarFieldSpec, VectorFieldSpec};
    use crate::special::{gamma, gamma_ratio};

    fn ord(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn zero_state_is_stationary() {
        let d = BoxDomain::unit_cube(10).unwrap();
        let s = EMState::zeros(d);
        let p = MaxwellParams::uniform(0.7).unwrap();
        let (de, db) = maxwell_rhs(&s, &p).unwrap();
        assert_eq!(de.max_abs() + db.max_abs(), 0.0);
        assert_eq!(maxwell_step(&s, &p, 0.01).unwrap().field_norm(), 0.0);
    }

    #[test]
    fn rhs_of_square_profile() {
        let d = BoxDomain::unit_cube(129).unwrap();
        let mut s = EMState::zeros(d);
        s.e = VectorField3D::from_fn(d, |x, _, _| [0.0, x * x, 0.0]).unwrap();
        let p = MaxwellParams::uniform(0.5).unwrap();
        let (_, db) = maxwell_rhs(&s, &p).unwrap();
        let c = gamma_ratio(3.0, 2.5).unwrap();
        let x = d.node(0, 100);
        assert!((db.component(2).values()[[100, 3, 3]] + c * x.powf(1.5)).abs() < 2e-3);
        assert_eq!(db.component(0).max_abs() + db.component(1).max_abs(), 0.0);
    }

    #[test]
    fn plane_wave_converges_at_alpha_one() {
        // E_y = sin(k(x - vt)), B_z = E_y / v with v = 1
        let k = 2.0;
        let p = MaxwellParams::uniform(1.0).unwrap();
        let mut errs = Vec::new();
        for m in [17, 33, 65] {
            let d = BoxDomain::unit_cube(m).unwrap();
            let mut s = EMState::zeros(d);
            s.e = VectorField3D::from_fn(d, |x, _, _| [0.0, (k * x).sin(), 0.0]).unwrap();
            s.b = VectorField3D::from_fn(d, |x, _, _| [0.0, 0.0, (k * x).sin()]).unwrap();
            let dt = 0.25 * d.step(0);
            let steps = ((0.1 / dt).round()) as usize;
            for _ in 0..steps {
                s = maxwell_step(&s, &p, dt).unwrap();
            }
            let c = (m - 1) / 2;
            let want = (k * (0.5 - s.t)).sin();
            errs.push((s.e.component(1).values()[[c, c, c]] - want).abs());
        }
        assert!(errs[1] < errs[0] / 3.0 && errs[2] < errs[1] / 3.0, "{errs:?}");
    }

    fn pulse_state(m: usize, p: &MaxwellParams) -> EMState {
        let d = BoxDomain::unit_cube(m).unwrap();
        let pulse =
            |x: f64, y: f64, z: f64| (-((x - 0.5).powi(2) + (y - 0.5).powi(2) + (z - 0.5).powi(2)) / 0.01).exp();
        let mut s = EMState::zeros(d);
        s.e = VectorField3D::from_fn(d, |x, y, z| [0.0, pulse(x, y, z), 0.0]).unwrap();
        s.rho = div_alpha(&s.e, p.orders[0]).unwrap().scale(1.0 / p.g1);
        s
    }

    fn advance(s: &EMState, p: &MaxwellParams, dt: f64, n: usize) -> EMState {
        (0..n).fold(s.clone(), |cur, _| maxwell_step(&cur, p, dt).unwrap())
    }

    #[test]
    fn pulse_run_is_resolved_at_half_the_bound() {
        let p = MaxwellParams::uniform(0.8).unwrap();
        let s = pulse_state(12, &p);
        let cal = calibrate_dt(&s, &p, 10).unwrap();
        assert!(cal.probes.len() >= 2 && cal.probes.last().unwrap().1 > 1e-2);
        let dt = 0.5 * cal.dt_max;
        let coarse = advance(&s, &p, dt, 100);
        let fine = advance(&s, &p, 0.5 * dt, 200);
        // the fractional system grows on its own; the step must not add to it
        let gap = (coarse.field_norm() - fine.field_norm()).abs() / fine.field_norm();
        assert!(gap < 5e-2, "{gap}");
    }

    #[test]
    fn classical_constraints_do_not_drift() {
        let p = MaxwellParams::uniform(1.0).unwrap();
        let mut s = pulse_state(16, &p);
        let cal = calibrate_dt(&s, &p, 10).unwrap();
        let (r0e, r0b) = gauss_constraint_residuals(&s, &p).unwrap();
        let n0 = s.field_norm();
        s = advance(&s, &p, 0.5 * cal.dt_max, 100);
        assert!(s.field_norm() < 1.01 * n0);
        let (re, rb) = gauss_constraint_residuals(&s, &p).unwrap();
        assert!(re <= 3.0 * r0e + 1e-8 && rb <= 3.0 * r0b + 1e-8, "{re} {rb} vs {r0e} {r0b}");
    }

    #[test]
    fn fractional_constraints_drift_relative_to_norm() {
        let p = MaxwellParams::uniform(0.8).unwrap();
        let mut s = pulse_state(12, &p);
        s = advance(&s, &p, 0.005, 100);
        let (re, rb) = gauss_constraint_residuals(&s, &p).unwrap();
        assert!((re + rb) / s.field_norm() < 1e-9, "{re} {rb}");
    }

    #[test]
    fn gauss_constraint_examples() {
        let d = BoxDomain::unit_cube(33).unwrap();
        let p = MaxwellParams::new([2.0, 1.0, 1.0], [ord(0.5), ord(0.5), ord(0.5), ord(0.5)]).unwrap();
        let g15 = gamma(1.5).unwrap();
        let mut s = EMState::zeros(d);
        s.e = VectorField3D::from_fn(d, |x, _, _| [x, 0.0, 0.0]).unwrap();
        s.rho = ScalarField3D::from_fn(d, |x, _, _| x.sqrt() / g15 / 2.0).unwrap();
        let (re, rb) = gauss_constraint_residuals(&s, &p).unwrap();
        assert!(re < 1e-12 && rb == 0.0, "{re}");
        let p1 = MaxwellParams::new([2.0, 1.0, 1.0], [ord(1.0); 4]).unwrap();
        s.e = VectorField3D::from_fn(d, |x, y, z| [x, y, z]).unwrap();
        s.rho = ScalarField3D::from_fn(d, |_, _, _| 1.5).unwrap();
        assert!(gauss_constraint_residuals(&s, &p1).unwrap().0 < 1e-12);
    }

    #[test]
    fn charge_conservation_examples() {
        let d = BoxDomain::unit_cube(24).unwrap();
        let (g1, g3) = (2.0, 3.0);
        let p = MaxwellParams::new([g1, 1.0, g3], [ord(0.5); 4]).unwrap();
        let g15 = gamma(1.5).unwrap();
        let mut s = EMState::zeros(d);
        assert_eq!(charge_conservation_residual(&s, &ScalarField3D::zeros(d), &p).unwrap(), 0.0);
        s.j = VectorField3D::from_fn(d, |x, _, _| [x, 0.0, 0.0]).unwrap();
        let drho = ScalarField3D::from_fn(d, |x, _, _| -(g3 / g1) * x.sqrt() / g15).unwrap();
        assert!(charge_conservation_residual(&s, &drho, &p).unwrap() < 1e-12);
        let bad = MaxwellParams::new([1.0; 3], [ord(0.5), ord(0.5), ord(0.5), ord(0.7)]).unwrap();
        assert!(matches!(charge_conservation_residual(&s, &drho, &bad), Err(FvcError::Precondition(_))));
    }

    #[test]
    fn manufactured_charge_balance() {
        // j from the registry, ρ(t) = ρ0 - t (g3/g1) Div^α j taken exactly
        let d = BoxDomain::unit_cube(24).unwrap();
        let (g1, g3) = (1.5, 0.5);
        for a in [0.5, 1.0] {
            let p = MaxwellParams::new([g1, 1.0, g3], [ord(a); 4]).unwrap();
            let jspec: VectorFieldSpec = "x=sin*y=poly:1,1; y=exp*z=poly:0,0,1; x=poly:0,1*z=sin".parse().unwrap();
            let j = jspec.sample(d).unwrap();
            let div = jspec.div_exact(d, ord(a)).unwrap();
            let rho0: ScalarFieldSpec = "x=poly:1,1".parse().unwrap();
            let rho0 = rho0.sample(d).unwrap();
            let drho = div.scale(-g3 / g1);
            let mk = |t: f64| {
                EMState::new(
                    VectorField3D::zeros(d),
                    VectorField3D::zeros(d),
                    rho0.add(&drho.scale(t)).unwrap(),
                    j.clone(),
                    t,
                )
                .unwrap()
            };
            let (s0, s1) = (mk(0.0), mk(0.1));
            let (dq, flux) = integral_charge_balance(&s0, &s1, &p).unwrap();
            assert!((dq + flux).abs() < 5e-3 * flux.abs().max(1.0), "alpha {a}: {dq} {flux}");
            let still = |t: f64| {
                EMState::new(VectorField3D::zeros(d), VectorField3D::zeros(d), rho0.clone(), VectorField3D::zeros(d), t)
                    .unwrap()
            };
            assert_eq!(integral_charge_balance(&still(0.0), &still(0.2), &p).unwrap(), (0.0, 0.0));
        }
    }
}
