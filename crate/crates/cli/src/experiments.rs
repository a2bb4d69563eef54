//! Row runners: one module operation per `(alpha, grid)` pair.

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use fracvec::frac1d::{
    caputo_semigroup_counterexample, ftfc_higher_residual, ftfc_left_inverse_residual, integral_semigroup_residual,
    leibniz_series, newton_leibniz_residual, rl_derivative, rl_newton_leibniz_correction,
    rl_newton_leibniz_lower_limit_rhs, Func1D,
};
use fracvec::fracint::{
    elementary_region_integral, gauss_residual, gauss_residual_classical, green_residual, green_residual_classical,
    indicator_embedding, stokes_residual, stokes_residual_classical, ElementaryRegion2D, RectRegion2D, Surface,
    TheoremReport, VectorField2D,
};
use fracvec::fracvec3d::{
    caputo_square_vs_double_order, classical, curl_grad_residual, curl_grad_semidiscrete, div_curl_residual,
    div_curl_semidiscrete, double_curl_residual, double_curl_semidiscrete, leibniz_violation_gap, BoxDomain,
    ScalarFieldSpec, VectorFieldSpec,
};
use fracvec::maxwell::{
    calibrate_dt, caputo_from_convolution, charge_conservation_residual, convolution_gap, dalembert_mode,
    gauss_constraint_residuals, integral_charge_balance, maxwell_step, save_snapshot, wave_1d_marching,
    wave_1d_wright_solution, wave_residual, EMState, KernelSpec, MaxwellParams,
};
use fracvec::{convergence_order, Cell, FracOrder, Interval, Result, ResultTable, UniformGrid1D};
use log::{debug, info};
use rayon::prelude::*;
use std::path::PathBuf;

/// Named cells of one row plus the value compared against the tolerance.
struct Row {
    cells: Vec<(&'static str, Cell)>,
    residual: f64,
}

type RowFn = fn(&ExperimentConfig, f64, usize) -> Result<Row>;

fn blank() -> Cell {
    Cell::Text(String::new())
}

fn interior_gap(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len();
    (1..n.saturating_sub(1)).map(|i| (p[i] - q[i]).abs()).filter(|v| v.is_finite()).fold(0.0, f64::max)
}

fn ftfc(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let o = FracOrder::new(alpha)?;
    let f = cfg.function().parse::<Func1D>()?.sample(cfg.bounds(), m)?;
    let left = ftfc_left_inverse_residual(&f, o)?;
    let nl = if alpha <= 1.0 { newton_leibniz_residual(&f, o)? } else { ftfc_higher_residual(&f, o)? };
    let (lhs, rhs, lower) = if alpha < 1.0 {
        let (l, r) = rl_newton_leibniz_correction(&f, o)?;
        (l.into(), r.into(), rl_newton_leibniz_lower_limit_rhs(&f, o)?.into())
    } else {
        (blank(), blank(), blank())
    };
    Ok(Row {
        cells: vec![
            ("left_inverse", left.into()),
            ("newton_leibniz", nl.into()),
            ("rl_lhs", lhs),
            ("rl_rhs", rhs),
            ("rl_lower_limit_rhs", lower),
        ],
        residual: left.max(nl),
    })
}

fn semigroup(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let o = FracOrder::new(alpha)?;
    let (f, g): (Func1D, Func1D) = (cfg.function().parse()?, cfg.field().parse()?);
    let (fs, gs) = (f.sample(cfg.bounds(), m)?, g.sample(cfg.bounds(), m)?);
    let integral = integral_semigroup_residual(&fs, o, o)?;
    let (twice, double) = caputo_square_vs_double_order(&f, o, m)?;
    let square_gap = interior_gap(twice.values(), double.values());
    let (twice, double) = caputo_semigroup_counterexample(o, m)?;
    let mid = ((m - 1) as f64 * 0.5).round() as usize;
    let counter = (twice.values()[mid] - double.values()[mid]).abs();
    // stencil derivatives of order j amplify rounding like h^-j, so keep the series short
    let series = leibniz_series(&fs, &gs, o, g.degree().unwrap_or(3))?;
    let direct = rl_derivative(&fs.zip_with(&gs, |a, b| a * b)?, o)?;
    let leibniz = interior_gap(series.values.values(), direct.values());
    Ok(Row {
        cells: vec![
            ("integral_semigroup", integral.into()),
            ("caputo_square_gap", square_gap.into()),
            ("counterexample_gap", counter.into()),
            ("leibniz_series", leibniz.into()),
            ("leibniz_truncated", series.truncated.to_string().into()),
        ],
        residual: integral.max(leibniz),
    })
}

fn cube(cfg: &ExperimentConfig, m: usize) -> Result<BoxDomain> {
    BoxDomain::new([cfg.bounds(); 3], [m; 3])
}

fn identities(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let o = FracOrder::new(alpha)?;
    let (s, v): (ScalarFieldSpec, VectorFieldSpec) = (cfg.function().parse()?, cfg.field().parse()?);
    let d = cube(cfg, m)?;
    let (sf, vf) = (s.sample(d)?, v.sample(d)?);
    let cg = curl_grad_semidiscrete(&s, d, o)?;
    let dc = div_curl_semidiscrete(&v, d, o)?;
    let cc = double_curl_semidiscrete(&v, d, o)?;
    Ok(Row {
        cells: vec![
            ("curl_grad", cg.into()),
            ("div_curl", dc.into()),
            ("double_curl", cc.into()),
            ("discrete_curl_grad", curl_grad_residual(&sf, o)?.into()),
            ("discrete_div_curl", div_curl_residual(&vf, o)?.into()),
            ("discrete_double_curl", double_curl_residual(&vf, o)?.into()),
            ("classical_curl_grad", classical::curl_grad_semidiscrete(&s, d)?.into()),
            ("classical_div_curl", classical::div_curl_semidiscrete(&v, d)?.into()),
            ("classical_double_curl", classical::double_curl_semidiscrete(&v, d)?.into()),
            ("leibniz_gap", leibniz_violation_gap(&sf, &sf, o)?.into()),
        ],
        residual: cg.max(dc).max(cc),
    })
}

fn theorem_row(rep: TheoremReport, classical: TheoremReport) -> Row {
    Row {
        cells: vec![
            ("lhs", rep.lhs.into()),
            ("rhs", rep.rhs.into()),
            ("classical_residual", classical.residual.into()),
        ],
        residual: rep.residual,
    }
}

fn green(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let (fx, fy): (ScalarFieldSpec, ScalarFieldSpec) = (cfg.function().parse()?, cfg.field().parse()?);
    let f = VectorField2D::from_specs(RectRegion2D::new([cfg.bounds(); 2], [m; 2])?, &fx, &fy)?;
    Ok(theorem_row(green_residual(&f, FracOrder::new(alpha)?)?, green_residual_classical(&f)))
}

fn stokes(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let f = cfg.function().parse::<VectorFieldSpec>()?.sample(cube(cfg, m)?)?;
    // top face z = b, normal +z
    let plane = Surface::coordinate_plane(2, cfg.bounds().b);
    Ok(theorem_row(stokes_residual(&f, &plane, FracOrder::new(alpha)?)?, stokes_residual_classical(&f, &plane)?))
}

fn gauss(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let f = cfg.function().parse::<VectorFieldSpec>()?.sample(cube(cfg, m)?)?;
    Ok(theorem_row(gauss_residual(&f, FracOrder::new(alpha)?)?, gauss_residual_classical(&f)?))
}

fn region(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let o = FracOrder::new(alpha)?;
    let f: ScalarFieldSpec = cfg.function().parse()?;
    let (lo, hi): (Func1D, Func1D) = (cfg.lower.parse()?, cfg.upper.parse()?);
    let at = |m: usize| {
        elementary_region_integral(&f, &ElementaryRegion2D::new(cfg.bounds(), lo.clone(), hi.clone(), m)?, o)
    };
    let (coarse, fine) = (at(m)?, at(2 * m - 1)?);
    let xs = (0..m).map(|i| cfg.bounds().node(m, i));
    let ymin = xs.clone().map(|x| lo.eval(x)).fold(f64::INFINITY, f64::min);
    let ymax = xs.map(|x| hi.eval(x)).fold(f64::NEG_INFINITY, f64::max);
    let rect = RectRegion2D::new([cfg.bounds(), Interval::new(ymin, ymax)?], [m; 2])?;
    let slack = 1e-12 * (1.0 + ymax.abs().max(ymin.abs()));
    let embedded = indicator_embedding(&f, &rect, |x, y| y >= lo.eval(x) - slack && y <= hi.eval(x) + slack, o)?;
    Ok(Row {
        cells: vec![("integral", coarse.into()), ("refined", fine.into()), ("indicator_embedding", embedded.into())],
        residual: (fine - coarse).abs(),
    })
}

fn snapshot_path(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Option<PathBuf> {
    let out = cfg.out.as_ref()?;
    let stem = out.file_stem().map_or("run".into(), |s| s.to_string_lossy().into_owned());
    Some(out.with_file_name(format!("{stem}_alpha{alpha}_grid{m}.snap")))
}

fn maxwell(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let o = FracOrder::new(alpha)?;
    let p = MaxwellParams::new(cfg.g, [o; 4])?;
    let d = cube(cfg, m)?;
    let mut s = EMState::zeros(d);
    s.e = cfg.function().parse::<VectorFieldSpec>()?.sample(d)?;
    s.b = cfg.field().parse::<VectorFieldSpec>()?.sample(d)?;

    let cal = calibrate_dt(&s, &p, cfg.steps)?;
    debug!("alpha={alpha} grid={m}: dt probes {:?}", cal.probes);
    let dt = 0.5 * cal.dt_max;
    let mut cur = s.clone();
    let mut frames = vec![cur.b.clone()];
    for _ in 0..cfg.steps {
        cur = maxwell_step(&cur, &p, dt)?;
        frames.push(cur.b.clone());
    }
    let mut fine = s;
    for _ in 0..2 * cfg.steps {
        fine = maxwell_step(&fine, &p, 0.5 * dt)?;
    }
    let gap = (cur.field_norm() - fine.field_norm()).abs() / fine.field_norm().max(f64::MIN_POSITIVE);
    let (ge, gb) = gauss_constraint_residuals(&cur, &p)?;
    let wave = wave_residual(&frames, dt, &p)?;

    // manufactured charge: rho_t = -(g3/g1) Div J with the exact divergence
    let j: VectorFieldSpec = cfg.current.parse()?;
    let mut c0 = EMState::zeros(d);
    c0.j = j.sample(d)?;
    let drho = j.div_exact(d, o)?.scale(-p.g3 / p.g1);
    let charge = charge_conservation_residual(&c0, &drho, &p)?;
    let mut c1 = c0.clone();
    c1.rho = c1.rho.add(&drho.scale(0.1))?;
    c1.t = 0.1;
    let (dq, flux) = integral_charge_balance(&c0, &c1, &p)?;

    if let Some(path) = snapshot_path(cfg, alpha, m) {
        save_snapshot(&path, &cur, &p)?;
        info!("snapshot {}", path.display());
    }
    Ok(Row {
        cells: vec![
            ("dt_max", cal.dt_max.into()),
            ("probes", Cell::Int(cal.probes.len() as i64)),
            ("dt", dt.into()),
            ("steps", Cell::Int(cfg.steps as i64)),
            ("t", cur.t.into()),
            ("field_norm", cur.field_norm().into()),
            ("gauss_e", ge.into()),
            ("gauss_b", gb.into()),
            ("wave_residual", wave.into()),
            ("charge_residual", charge.into()),
            ("charge_balance", (dq + flux).abs().into()),
        ],
        residual: gap,
    })
}

fn wave1d(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let o = FracOrder::new(alpha)?;
    let [x, t] = cfg.probe;
    let [centre, width] = cfg.pulse;
    let v = (cfg.g[1] * cfg.g[2]).sqrt();
    let f = UniformGrid1D::from_fn(cfg.bounds(), m, |s| (-(s - centre).powi(2) / width).exp())?;
    let wright = wave_1d_wright_solution(&f, o, v, x, t)?;
    let march = wave_1d_marching(&f, o, v, x, (m / 4).max(8))?;
    let k = ((t - f.a()) / f.h()).round() as usize;
    let oracle = *march
        .values()
        .get(k)
        .ok_or_else(|| fracvec::FvcError::Parameter(format!("probe time {t} lies outside the boundary window")))?;
    let mode = dalembert_mode(1.0, 1, o, v, &[x])?[0];
    Ok(Row {
        cells: vec![
            ("x", x.into()),
            ("t", t.into()),
            ("wright", wright.into()),
            ("marching", oracle.into()),
            ("mode_re", mode.re.into()),
            ("mode_im", mode.im.into()),
        ],
        residual: (wright - oracle).abs(),
    })
}

fn convolution(cfg: &ExperimentConfig, alpha: f64, m: usize) -> Result<Row> {
    let e = cfg.function().parse::<Func1D>()?.sample(cfg.bounds(), m)?;
    let k = KernelSpec::new(FracOrder::new(alpha)?)?;
    let (conv, caputo) = caputo_from_convolution(&e, k)?;
    let gap = convolution_gap(&e, k)?;
    Ok(Row {
        cells: vec![("convolution_at_b", conv.last().into()), ("caputo_at_b", caputo.last().into())],
        residual: gap,
    })
}

fn row_fn(e: Experiment) -> RowFn {
    match e {
        Experiment::Ftfc => ftfc,
        Experiment::Semigroup => semigroup,
        Experiment::Identities => identities,
        Experiment::Green => green,
        Experiment::Stokes => stokes,
        Experiment::Gauss => gauss,
        Experiment::Region => region,
        Experiment::Maxwell => maxwell,
        Experiment::Wave1d => wave1d,
        Experiment::Convolution => convolution,
        Experiment::Convergence => unreachable!("convergence is not a row experiment"),
    }
}

fn status(pass: bool) -> Cell {
    Cell::Text(if pass { "ok" } else { "fail" }.into())
}

/// `alpha × grid`, sorted by `(alpha, grid)` with duplicates removed.
fn combinations(cfg: &ExperimentConfig) -> Vec<(f64, usize)> {
    let mut c: Vec<(f64, usize)> = cfg.alpha.iter().flat_map(|&a| cfg.grid.iter().map(move |&m| (a, m))).collect();
    c.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    c.dedup();
    c
}

fn grid_rows(cfg: &ExperimentConfig) -> std::result::Result<ResultTable, CliError> {
    let f = row_fn(cfg.experiment);
    let combos = combinations(cfg);
    let results: Vec<Result<Row>> = combos.par_iter().map(|&(a, m)| f(cfg, a, m)).collect();
    let mut table: Option<ResultTable> = None;
    for (&(alpha, grid), r) in combos.iter().zip(results) {
        let row = r.map_err(|source| CliError::Row { alpha, grid, source })?;
        info!("{} alpha={alpha} grid={grid} residual={:.3e}", cfg.experiment, row.residual);
        let t = match &mut table {
            Some(t) => t,
            None => {
                let mut names = vec!["alpha", "grid"];
                names.extend(row.cells.iter().map(|(n, _)| *n));
                names.extend(["residual", "status"]);
                table.insert(ResultTable::new(names)?)
            }
        };
        let mut cells: Vec<Cell> = vec![alpha.into(), Cell::Int(grid as i64)];
        cells.extend(row.cells.into_iter().map(|(_, c)| c));
        cells.push(row.residual.into());
        cells.push(status(row.residual <= cfg.tolerance));
        t.push_row(cells)?;
    }
    Ok(table.expect("validated config has at least one row"))
}

fn convergence(cfg: &ExperimentConfig) -> std::result::Result<ResultTable, CliError> {
    let mut alphas = cfg.alpha.clone();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let mut grids = cfg.grid.clone();
    grids.sort_unstable();
    grids.dedup();
    let label = grids.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(";");
    let mut table = ResultTable::new(["alpha", "study", "grids", "order", "status"])?;
    for a in alphas {
        let mut sub = ExperimentConfig { experiment: cfg.study, alpha: vec![a], grid: grids.clone(), ..cfg.clone() };
        // snapshots belong to direct maxwell runs
        sub.out = None;
        let rows = grid_rows(&sub)?;
        let order = convergence_order(&rows).map_err(|source| CliError::Row { alpha: a, grid: grids[0], source })?;
        info!("convergence {} alpha={a}: order {order:.3}", cfg.study);
        table.push_row(vec![
            a.into(),
            cfg.study.name().into(),
            label.clone().into(),
            order.into(),
            status(order >= cfg.tolerance),
        ])?;
    }
    Ok(table)
}

/// Runs every `(alpha, grid)` row of the configured experiment. Rows are
/// computed in parallel and emitted in `(alpha, grid)` order, so the table
/// depends only on `cfg`. A `status` column records whether each row met
/// the tolerance.
pub fn run_experiment(cfg: &ExperimentConfig) -> std::result::Result<ResultTable, CliError> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::Convergence => convergence(cfg),
        _ => grid_rows(cfg),
    }
}

fn describe(table: &ResultTable, i: usize) -> String {
    let show = |name: &str| match table.get(i, name) {
        Some(Cell::Real(v)) => Some(format!("{name}={v:.6e}")),
        Some(Cell::Int(v)) => Some(format!("{name}={v}")),
        Some(Cell::Text(s)) => Some(format!("{name}={s}")),
        None => None,
    };
    ["alpha", "grid", "study", "grids", "residual", "order"]
        .iter()
        .filter_map(|n| show(n))
        .collect::<Vec<_>>()
        .join(" ")
}

/// One line per row whose `status` is `fail`.
pub fn failures(table: &ResultTable) -> Vec<String> {
    (0..table.len())
        .filter(|&i| matches!(table.get(i, "status"), Some(Cell::Text(s)) if s == "fail"))
        .map(|i| describe(table, i))
        .collect()
}
