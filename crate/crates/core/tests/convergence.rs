use fracvec::frac1d::{ftfc_left_inverse_residual, power_rule_integral, rl_integral, Func1D, PowerFunction};
use fracvec::fracint::{
    gauss_residual, gauss_residual_classical, green_residual, green_residual_classical, stokes_residual,
    stokes_residual_classical, RectRegion2D, Surface, VectorField2D,
};
use fracvec::fracvec3d::{
    curl_alpha, curl_grad_semidiscrete, div_alpha, div_curl_semidiscrete, BoxDomain, ScalarFieldSpec, VectorFieldSpec,
};
use fracvec::maxwell::{charge_conservation_residual, convolution_gap, EMState, KernelSpec, MaxwellParams};
use fracvec::table::fitted_order;
use fracvec::{FracOrder, Interval, UniformGrid1D};

fn ord(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn steps(sizes: &[usize]) -> Vec<f64> {
    sizes.iter().map(|&m| 1.0 / (m - 1) as f64).collect()
}

fn decreasing(r: &[f64]) -> bool {
    r.windows(2).all(|w| w[1] < w[0])
}

// residuals already at rounding level carry no refinement information
fn converging(r: &[f64]) -> bool {
    r.iter().all(|&v| v < 1e-12) || decreasing(r)
}

#[test]
fn rl_integral_power_rule_order() {
    let sizes = [64usize, 128, 256, 512, 1024];
    for a in [0.3, 0.5, 0.8] {
        for beta in [1.5, 2.0, 3.0] {
            let p = PowerFunction::new(0.0, beta, 1.0).unwrap();
            let err: Vec<f64> = sizes
                .iter()
                .map(|&m| {
                    let f = UniformGrid1D::from_fn(Interval::unit(), m, |x| p.eval(x)).unwrap();
                    let i = rl_integral(&f, ord(a)).unwrap();
                    (0..m)
                        .map(|k| (i.values()[k] - power_rule_integral(&p, ord(a), f.x(k)).unwrap()).abs())
                        .fold(0.0, f64::max)
                })
                .collect();
            let q = fitted_order(&steps(&sizes), &err).unwrap();
            assert!(q >= 1.5, "alpha {a} beta {beta}: order {q} {err:?}");
        }
    }
    // piecewise-linear data is integrated exactly
    let f = UniformGrid1D::from_fn(Interval::unit(), 100, |x| 2.0 * x).unwrap();
    let i = rl_integral(&f, ord(0.5)).unwrap();
    let p = PowerFunction::new(0.0, 1.0, 2.0).unwrap();
    assert!((0..100).all(|k| (i.values()[k] - power_rule_integral(&p, ord(0.5), f.x(k)).unwrap()).abs() < 1e-13));
}

fn left_inverse(f: &Func1D, a: f64, m: usize) -> f64 {
    ftfc_left_inverse_residual(&f.sample(Interval::unit(), m).unwrap(), ord(a)).unwrap()
}

#[test]
fn left_inverse_residual_decreases_when_f_vanishes_at_a() {
    for f in [Func1D::Sin, Func1D::poly(&[0.0, -1.0, 2.0]), Func1D::poly(&[0.0, 0.0, 0.0, 1.0])] {
        for a in [0.3, 0.5, 0.8] {
            let r: Vec<f64> = [64, 128, 256, 512].iter().map(|&m| left_inverse(&f, a, m)).collect();
            assert!(decreasing(&r), "{f} alpha {a}: {r:?}");
        }
    }
}

#[test]
fn left_inverse_stalls_at_first_node_when_f_nonzero_at_a() {
    // I^a f ~ f(a) x^a / G(1+a) near a; L1 at the first node returns f(a) / (G(1+a) G(2-a))
    for a in [0.3, 0.5, 0.8] {
        let limit = (1.0 - (std::f64::consts::PI * a).sin() / (std::f64::consts::PI * a * (1.0 - a))).abs();
        let r = left_inverse(&Func1D::Exp, a, 1024);
        assert!((r - limit).abs() < 5e-3, "alpha {a}: {r} vs {limit}");
    }
}

#[test]
fn curl_grad_vanishes_under_refinement() {
    let sizes = [12usize, 24, 48];
    for spec in ["x=sin*y=exp*z=poly:1,1", "x=poly:0,0,1*y=poly:1,0,1*z=sin", "x=exp*y=exp*z=exp"] {
        let s: ScalarFieldSpec = spec.parse().unwrap();
        for a in [0.3, 0.5, 0.7, 1.0] {
            let r: Vec<f64> = sizes
                .iter()
                .map(|&m| curl_grad_semidiscrete(&s, BoxDomain::unit_cube(m).unwrap(), ord(a)).unwrap())
                .collect();
            assert!(converging(&r), "{spec} alpha {a}: {r:?}");
        }
    }
}

#[test]
fn div_curl_vanishes_under_refinement() {
    let v: VectorFieldSpec =
        "x=poly:0,0,1*y=sin*z=exp; x=poly:1,1*y=exp*z=poly:0,1; x=sin*y=poly:0,0,1*z=exp".parse().unwrap();
    for a in [0.3, 0.5, 0.7, 1.0] {
        let r: Vec<f64> = [12, 24, 48]
            .iter()
            .map(|&m| div_curl_semidiscrete(&v, BoxDomain::unit_cube(m).unwrap(), ord(a)).unwrap())
            .collect();
        assert!(decreasing(&r), "alpha {a}: {r:?}");
    }
}

#[test]
fn theorem_residuals_converge_for_all_orders() {
    let fx: ScalarFieldSpec = "x=poly:0,1*y=poly:0,0,1".parse().unwrap();
    let fy: ScalarFieldSpec = "x=sin*y=exp".parse().unwrap();
    let f3: VectorFieldSpec = "x=poly:0,0,1*y=poly:0,1; y=sin*z=poly:1,0,1; x=exp*z=poly:0,1".parse().unwrap();
    let (s2, s3) = ([16usize, 32, 64, 128], [12usize, 24, 48]);
    let plane = Surface::coordinate_plane(2, 1.0);
    for a in [0.3, 0.5, 0.8, 1.0] {
        let green: Vec<f64> = s2
            .iter()
            .map(|&m| {
                green_residual(
                    &VectorField2D::from_specs(RectRegion2D::unit_square(m).unwrap(), &fx, &fy).unwrap(),
                    ord(a),
                )
                .unwrap()
                .residual
            })
            .collect();
        let (mut stokes, mut gauss) = (Vec::new(), Vec::new());
        for &m in &s3 {
            let field = f3.sample(BoxDomain::unit_cube(m).unwrap()).unwrap();
            stokes.push(stokes_residual(&field, &plane, ord(a)).unwrap().residual);
            gauss.push(gauss_residual(&field, ord(a)).unwrap().residual);
        }
        for (name, r, sizes) in [("green", &green, &s2[..]), ("stokes", &stokes, &s3[..]), ("gauss", &gauss, &s3[..])] {
            assert!(converging(r), "{name} alpha {a}: {r:?}");
            if r[0] > 1e-12 {
                let q = fitted_order(&steps(sizes), r).unwrap();
                assert!(q >= 0.8, "{name} alpha {a}: order {q}");
            }
        }
    }
}

#[test]
fn alpha_one_theorems_match_classical() {
    let fx: ScalarFieldSpec = "x=poly:0,1*y=poly:0,0,1".parse().unwrap();
    let fy: ScalarFieldSpec = "x=sin*y=exp".parse().unwrap();
    let f3: VectorFieldSpec = "x=poly:0,0,1*y=poly:0,1; y=sin*z=poly:1,0,1; x=exp*z=poly:0,1".parse().unwrap();
    let within = |a: f64, b: f64| a <= 2.0 * b && b <= 2.0 * a;
    let f2 = VectorField2D::from_specs(RectRegion2D::unit_square(64).unwrap(), &fx, &fy).unwrap();
    let (g, gc) = (green_residual(&f2, ord(1.0)).unwrap(), green_residual_classical(&f2));
    assert!(within(g.residual, gc.residual), "{} vs {}", g.residual, gc.residual);
    let field = f3.sample(BoxDomain::unit_cube(24).unwrap()).unwrap();
    let (s, sc) = (
        stokes_residual(&field, &Surface::coordinate_plane(2, 1.0), ord(1.0)).unwrap(),
        stokes_residual_classical(&field, &Surface::coordinate_plane(2, 1.0)).unwrap(),
    );
    assert!(within(s.residual, sc.residual), "{} vs {}", s.residual, sc.residual);
    let (v, vc) = (gauss_residual(&field, ord(1.0)).unwrap(), gauss_residual_classical(&field).unwrap());
    assert!(within(v.residual, vc.residual), "{} vs {}", v.residual, vc.residual);
}

#[test]
fn manufactured_charge_conservation_within_scheme_error() {
    let (g1, g3) = (1.0, 2.0);
    let jspec: VectorFieldSpec = "x=sin*y=poly:1,1; y=exp*z=poly:0,0,1; x=poly:0,1*z=sin".parse().unwrap();
    for a in [0.5, 0.8, 1.0] {
        let p = MaxwellParams::new([g1, 1.0, g3], [ord(a); 4]).unwrap();
        let d = BoxDomain::unit_cube(24).unwrap();
        let mut s = EMState::zeros(d);
        s.j = jspec.sample(d).unwrap();
        let exact = jspec.div_exact(d, ord(a)).unwrap();
        let drho = exact.scale(-g3 / g1);
        let r = charge_conservation_residual(&s, &drho, &p).unwrap();
        let scheme = div_alpha(&s.j, ord(a)).unwrap().sub(&exact).unwrap().interior_max_abs();
        assert!(r <= 10.0 * g3 * scheme + 1e-14, "alpha {a}: {r} vs {scheme}");
    }
}

#[test]
fn curl_contribution_to_charge_is_rounding() {
    // j = Curl B carries no charge: Div Curl vanishes for the discrete operators
    let d = BoxDomain::unit_cube(16).unwrap();
    let b: VectorFieldSpec =
        "x=poly:0,0,1*y=sin*z=exp; x=poly:1,1*y=exp*z=poly:0,1; x=sin*y=poly:0,0,1*z=exp".parse().unwrap();
    for a in [0.5, 1.0] {
        let p = MaxwellParams::uniform(a).unwrap();
        let mut s = EMState::zeros(d);
        s.j = curl_alpha(&b.sample(d).unwrap(), ord(a)).unwrap();
        let r = charge_conservation_residual(&s, &s.rho.clone(), &p).unwrap();
        assert!(r < 1e-11, "alpha {a}: {r}");
    }
}

#[test]
fn convolution_gap_shrinks() {
    let k = KernelSpec::new(ord(0.5)).unwrap();
    let gaps: Vec<f64> = [128, 256, 512, 1024]
        .iter()
        .map(|&m| convolution_gap(&UniformGrid1D::from_fn(Interval::unit(), m, |x| x * x).unwrap(), k).unwrap())
        .collect();
    assert!(decreasing(&gaps), "{gaps:?}");
}
