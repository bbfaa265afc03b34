use std::f64::consts::PI;

use anyhow::{ensure, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use starsdym::chiral::{
    bessel_identity_check, convergence_study, fourier_expansion_theta, pauli_closed_form, residual_chiral, ChiralField,
    IdentityVariant,
};
use starsdym::fd::{convergence_order, ResidualField};
use starsdym::fourier::project_function;
use starsdym::heavenly::{cartan_first, curvature_fd, dotted_connection_check, weyl_c1, ExampleTetrad, Point4};
use starsdym::matrix::{anti_hermitian_defect, matrix_to_json, max_abs_diff};
use starsdym::me_solver::{
    deformation_frequency, example_cauchy_data, example_solution, kowalewska_series, residual_hp_classical,
    residual_moyal_hp, TorusSampling,
};
use starsdym::sine_basis::verify_basis_properties;
use starsdym::{
    chi_project, eval_on_torus, moyal_bracket, poisson_bracket, star_product, Bracket, CMatrix, Complex64,
    FourierField, Hbar, ModeVector, SpacetimeGrid, UniformAxis,
};

use crate::args::*;
use crate::output::{Cell, Format, Output, Table};

/// A finished run: what to emit and which numerical contracts failed.
pub struct Outcome {
    pub output: Output,
    pub violations: Vec<String>,
}

impl Outcome {
    fn new(table: Option<Table>, json: Value, default_format: Format) -> Self {
        Self {
            output: Output {
                table,
                json,
                default_format,
            },
            violations: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Star(a) => star(a),
        Command::Basis(a) => basis(a),
        Command::Project(a) => project(a),
        Command::Solve(a) => solve(a),
        Command::VerifyMe(a) => verify_me(a),
        Command::VerifyChiral(a) => verify_chiral(a),
        Command::Curvature(a) => curvature(a),
        Command::Converge(a) => converge(a),
        Command::BesselCheck(a) => bessel_check(a),
        Command::Chiral(a) => chiral(a),
    }
}

/// Parses `[[m1, m2, re, im], ...]`.
pub fn parse_modes(text: &str) -> Result<FourierField> {
    let entries: Vec<[f64; 4]> =
        serde_json::from_str(text).with_context(|| format!("modes must be [[m1, m2, re, im], ...], got `{text}`"))?;
    let mut pairs = Vec::with_capacity(entries.len());
    for [m1, m2, re, im] in entries {
        ensure!(
            m1.fract() == 0.0 && m2.fract() == 0.0,
            "mode indices must be integers, got ({m1}, {m2})"
        );
        ensure!(re.is_finite() && im.is_finite(), "coefficients must be finite");
        pairs.push((ModeVector::new(m1 as i64, m2 as i64), Complex64::new(re, im)));
    }
    Ok(FourierField::from_modes(pairs))
}

fn dimension(n: usize) -> Result<usize> {
    ensure!(n >= 2, "--n must be at least 2, got {n}");
    Ok(n)
}

fn positive(name: &str, x: f64) -> Result<f64> {
    ensure!(x.is_finite() && x > 0.0, "--{name} must be positive, got {x}");
    Ok(x)
}

fn resolve_hbar(args: &HbarArgs) -> Result<f64> {
    match (args.hbar, args.n) {
        (Some(h), _) => {
            ensure!(
                h.is_finite() && h >= 0.0,
                "--hbar must be finite and non-negative, got {h}"
            );
            Ok(h)
        }
        (None, Some(n)) => Ok(2.0 * PI / dimension(n)? as f64),
        (None, None) => Ok(2.0 * PI / 5.0),
    }
}

/// Uniform axis over `extent` with spacing `h`, which must divide its length.
fn axis(extent: Extent, h: f64, name: &str) -> Result<UniformAxis> {
    let steps = (extent.end - extent.start) / h;
    let rounded = steps.round();
    ensure!(
        rounded >= 1.0 && (steps - rounded).abs() <= 1e-9 * rounded,
        "--h {h} does not divide the {name} extent [{}, {}]",
        extent.start,
        extent.end
    );
    Ok(UniformAxis::spanning(extent.start, extent.end, rounded as usize + 1)?)
}

fn plane(grid: &GridArgs, h: f64) -> Result<SpacetimeGrid> {
    positive("h", h)?;
    Ok(SpacetimeGrid::plane(
        axis(grid.grid_w, h, "w")?,
        axis(grid.grid_z, h, "z")?,
    ))
}

fn field_table(f: &FourierField) -> Table {
    let mut t = Table::new(["m1", "m2", "re", "im"]);
    for (m, c) in f.iter() {
        t.push(vec![m.m1.into(), m.m2.into(), c.re.into(), c.im.into()]);
    }
    t
}

fn matrix_table(m: &CMatrix) -> Table {
    let mut t = Table::new(["row", "col", "re", "im"]);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            t.push(vec![i.into(), j.into(), m[(i, j)].re.into(), m[(i, j)].im.into()]);
        }
    }
    t
}

fn residual_table(r: &ResidualField) -> Table {
    let mut t = Table::new(["w", "z", "residual"]);
    for (&i, &v) in r.points().iter().zip(r.values()) {
        let x = r.grid().coords(i);
        t.push(vec![x[0].into(), x[1].into(), v.into()]);
    }
    t
}

fn star(a: &StarArgs) -> Result<Outcome> {
    let f = parse_modes(&a.f)?;
    let g = parse_modes(&a.g)?;
    let result = match a.op {
        StarOp::Poisson => poisson_bracket(&f, &g),
        StarOp::Star => star_product(&f, &g, Hbar::new(a.hbar)?),
        StarOp::Moyal => moyal_bracket(&f, &g, Hbar::new(a.hbar)?),
    };
    Ok(Outcome::new(Some(field_table(&result)), result.to_json(), Format::Json))
}

fn basis(a: &BasisArgs) -> Result<Outcome> {
    let report = verify_basis_properties(dimension(a.n)?)?;
    let mut map = Map::new();
    map.insert("n".into(), json!(report.n));
    let checks = report.properties().into_iter().chain([
        ("determinant_corrected", &report.determinant_corrected),
        ("structure_constants", &report.structure_constants),
    ]);
    for (name, check) in checks {
        map.insert(name.into(), json!(check.passed));
        map.insert(format!("{name}_max_deviation"), json!(check.max_deviation));
    }
    map.insert("all_passed".into(), json!(report.all_passed()));
    let mut out = Outcome::new(None, Value::Object(map), Format::Json);
    for (name, check) in report
        .properties()
        .into_iter()
        .chain([("structure_constants", &report.structure_constants)])
    {
        out.check(check.passed, || {
            format!(
                "{name}: deviation {:e} exceeds {:e}",
                check.max_deviation, check.tolerance
            )
        });
    }
    Ok(out)
}

fn project(a: &ProjectArgs) -> Result<Outcome> {
    let f = parse_modes(&a.modes)?;
    let folded = chi_project(&f, dimension(a.n)?)?;
    Ok(Outcome::new(
        Some(matrix_table(&folded.matrix)),
        matrix_to_json(&folded.matrix),
        Format::Json,
    ))
}

/// `d^j/dp^j cos p`.
fn cos_derivative(j: usize, p: f64) -> f64 {
    match j % 4 {
        0 => p.cos(),
        1 => -p.sin(),
        2 => -p.cos(),
        _ => p.sin(),
    }
}

fn solve(a: &SolveArgs) -> Result<Outcome> {
    let hbar = resolve_hbar(&a.hbar)?;
    positive("tol", a.tol)?;
    let (c0, c1) = example_cauchy_data();
    let series = kowalewska_series(c0, c1, Bracket::for_hbar(hbar)?, a.k)?;
    let exact = example_solution(hbar)?;
    let lambda = deformation_frequency(hbar);

    let samples = 32;
    let mut series_deviation: f64 = 0.0;
    let field = series.evaluate(a.w, a.z);
    for i in 0..samples {
        for j in 0..samples {
            let (p, q) = (
                2.0 * PI * i as f64 / samples as f64,
                2.0 * PI * j as f64 / samples as f64,
            );
            let got = eval_on_torus(&field, p, q).re;
            series_deviation = series_deviation.max((got - exact.evaluate(a.w, a.z, p, q)).abs());
        }
    }

    let mut map = Map::new();
    let mut printed: f64 = 0.0;
    for k in 2..=a.k.min(6) {
        let want = project_function(64, 20, |p, q| {
            Complex64::new(
                -lambda.powi(k as i32 - 1) * q.cos().powi(k as i32 - 1) * cos_derivative(k - 2, p),
                0.0,
            )
        })?;
        let coeffs = series.order(k).coeffs();
        let head = coeffs.first().cloned().unwrap_or_default();
        let rest = coeffs.iter().skip(1).map(FourierField::max_abs).fold(0.0, f64::max);
        let dev = head.max_abs_diff(&want).max(rest);
        map.insert(format!("printed_order_deviation_k{k}"), json!(dev));
        printed = printed.max(dev);
    }
    map.insert("printed_order_deviation".into(), json!(printed));
    map.insert("series_deviation".into(), json!(series_deviation));
    map.insert("hbar".into(), json!(hbar));
    map.insert("lambda".into(), json!(lambda));
    map.insert("k".into(), json!(a.k));
    map.insert("w".into(), json!(a.w));
    map.insert("z".into(), json!(a.z));

    let mut out = Outcome::new(None, Value::Object(map), Format::Json);
    out.check(series_deviation <= a.tol, || {
        format!(
            "truncated series deviates from the closed form by {series_deviation:e} > {:e}",
            a.tol
        )
    });
    out.check(printed <= 1e-12, || {
        format!("recursion orders deviate from the displayed formula by {printed:e}")
    });
    Ok(out)
}

fn verify_me(a: &VerifyMeArgs) -> Result<Outcome> {
    let hbar = resolve_hbar(&a.hbar)?;
    ensure!(a.band_limit >= 1, "--band-limit must be at least 1");
    let sampling = TorusSampling {
        resolution: a.torus,
        band_limit: a.band_limit,
    };
    let exact = example_solution(hbar)?;
    let residual = |h: f64| -> Result<ResidualField> {
        let field = exact.gridded(plane(&a.grid, h)?, sampling)?;
        Ok(if hbar == 0.0 {
            residual_hp_classical(&field)?
        } else {
            residual_moyal_hp(&field)?
        })
    };
    let coarse = residual(2.0 * a.h)?;
    let fine = residual(a.h)?;
    let report = convergence_order(&coarse, &fine);
    let json = json!({
        "sup_norm": fine.sup_norm(),
        "l2_norm": fine.l2_norm(),
        "h": a.h,
        "richardson_order": report.order,
        "hbar": hbar,
        "coarse_sup_norm": coarse.sup_norm(),
    });
    let mut out = Outcome::new(Some(residual_table(&fine)), json, Format::Csv);
    out.check((report.order - 2.0).abs() <= a.order_tol, || {
        format!(
            "residual converges at order {:.4}, expected 2 ± {}",
            report.order, a.order_tol
        )
    });
    Ok(out)
}

fn verify_chiral(a: &VerifyChiralArgs) -> Result<Outcome> {
    let n = dimension(a.n)?;
    let coarse_field = ChiralField::sample(n, plane(&a.grid, 2.0 * a.h)?)?;
    let field = ChiralField::sample(n, plane(&a.grid, a.h)?)?;
    let coarse = residual_chiral(&coarse_field)?;
    let fine = residual_chiral(&field)?;
    let order = convergence_order(&coarse, &fine).order;
    let anti = field.anti_hermitian_defect();
    let trace = field.trace_defect();
    let pauli = (n == 2).then(|| {
        field
            .values()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let x = field.grid().coords(i);
                max_abs_diff(m, &pauli_closed_form(x[0], x[1]))
            })
            .fold(0.0, f64::max)
    });

    let mut table = Table::new([
        "n",
        "h",
        "points",
        "sup_residual",
        "l2_residual",
        "richardson_order",
        "anti_hermitian_defect",
        "trace_defect",
        "pauli_deviation",
    ]);
    table.push(vec![
        n.into(),
        a.h.into(),
        field.grid().len().into(),
        fine.sup_norm().into(),
        fine.l2_norm().into(),
        order.into(),
        anti.into(),
        trace.into(),
        pauli.into(),
    ]);
    let json = json!({
        "n": n,
        "h": a.h,
        "points": field.grid().len(),
        "sup_residual": fine.sup_norm(),
        "l2_residual": fine.l2_norm(),
        "richardson_order": order,
        "anti_hermitian_defect": anti,
        "trace_defect": trace,
        "pauli_deviation": pauli,
    });
    let mut out = Outcome::new(Some(table), json, Format::Csv);
    out.check((order - 2.0).abs() <= a.order_tol, || {
        format!(
            "chiral residual converges at order {order:.4}, expected 2 ± {}",
            a.order_tol
        )
    });
    out.check(anti <= a.algebra_tol && trace <= a.algebra_tol, || {
        format!("field leaves su({n}): anti-hermitian defect {anti:e}, trace defect {trace:e}")
    });
    if let Some(dev) = pauli {
        out.check(dev <= a.closed_form_tol, || {
            format!("N = 2 field deviates from the Pauli closed form by {dev:e}")
        });
    }
    Ok(out)
}

/// Points with `|cos q|` and `|cos(z cos q + p)|` above `margin`.
fn admissible_points(seed: u64, count: usize, range: f64, margin: f64) -> Vec<Point4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let x: Point4 = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-range..range),
            rng.random_range(-range..range),
        ];
        if x[3].cos().abs() > margin && (x[1] * x[3].cos() + x[2]).cos().abs() > margin {
            points.push(x);
        }
    }
    points
}

fn curvature(a: &CurvatureArgs) -> Result<Outcome> {
    ensure!(a.points >= 1, "--points must be at least 1");
    positive("range", a.range)?;
    positive("h", a.h)?;
    positive("h-connection", a.h_connection)?;
    positive("tol", a.tol)?;
    ensure!(
        a.margin > 0.0 && a.margin < 1.0,
        "--margin must lie in (0, 1), got {}",
        a.margin
    );
    let mut table = Table::new([
        "w",
        "z",
        "p",
        "q",
        "C1_re",
        "C1_im",
        "dotted_norm",
        "structure_residual",
    ]);
    let (mut worst_c1, mut worst_dotted, mut worst_structure): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut type_n = true;
    for x in admissible_points(a.seed, a.points, a.range, a.margin) {
        let report = curvature_fd(&ExampleTetrad, &x, a.h)?;
        let exact = weyl_c1(&x)?;
        let first = cartan_first(&ExampleTetrad, &x, a.h_connection)?;
        let dotted = dotted_connection_check(&first.connection);
        let rel = (report.c1_fd - exact.re).abs() / exact.norm();
        worst_c1 = worst_c1.max(rel);
        worst_dotted = worst_dotted.max(dotted / first.connection.max_abs().max(1.0));
        worst_structure = worst_structure.max(first.structure_residual);
        type_n &= report.is_type_n_times_zero(a.tol * exact.norm().max(1.0));
        table.push(vec![
            x[0].into(),
            x[1].into(),
            x[2].into(),
            x[3].into(),
            report.c1_fd.into(),
            0.0.into(),
            dotted.into(),
            first.structure_residual.into(),
        ]);
    }
    let json = json!({
        "points": a.points,
        "seed": a.seed,
        "max_c1_relative_error": worst_c1,
        "max_dotted_norm_relative": worst_dotted,
        "max_structure_residual": worst_structure,
        "type_n_times_zero": type_n,
    });
    let mut out = Outcome::new(Some(table), json, Format::Csv);
    out.check(worst_c1 <= a.tol, || {
        format!("FD C1 deviates from the closed form by relative {worst_c1:e}")
    });
    out.check(type_n, || "curvature is not of type [4] x [-] at every point".into());
    out.check(worst_dotted <= 1e-7, || {
        format!("dotted connection reaches relative {worst_dotted:e}")
    });
    Ok(out)
}

fn converge(a: &ConvergeArgs) -> Result<Outcome> {
    let grid = plane(&a.grid, a.h)?;
    let table = convergence_study(&a.n_list.0, &grid, a.band_limit)?;
    let mut csv = Table::new(["n", "d", "fitted_exponent"]);
    for row in &table.rows {
        csv.push(vec![row.n.into(), row.distance.into(), table.fitted_exponent.into()]);
    }
    let json = json!({
        "n": table.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
        "d": table.rows.iter().map(|r| r.distance).collect::<Vec<_>>(),
        "fitted_exponent": table.fitted_exponent,
        "strictly_decreasing": table.strictly_decreasing(),
    });
    let mut out = Outcome::new(Some(csv), json, Format::Csv);
    out.check(table.strictly_decreasing(), || "d(N) is not strictly decreasing".into());
    out.check((table.fitted_exponent - 2.0).abs() <= a.exponent_tol, || {
        format!(
            "fitted decay exponent {:.4}, expected 2 ± {}",
            table.fitted_exponent, a.exponent_tol
        )
    });
    Ok(out)
}

fn bessel_check(a: &BesselCheckArgs) -> Result<Outcome> {
    positive("z-max", a.z_max)?;
    positive("tol", a.tol)?;
    let report = bessel_identity_check(a.z_max, a.terms)?;
    let json = serde_json::to_value(&report)?;
    let mut out = Outcome::new(None, json, Format::Json);
    out.check(report.second_deviation <= a.tol, || {
        format!("second identity deviates by {:e}", report.second_deviation)
    });
    out.check(report.first_standard_deviation <= a.tol, || {
        format!(
            "standard first identity deviates by {:e}",
            report.first_standard_deviation
        )
    });
    out.check(report.matching_variant == Some(IdentityVariant::Standard), || {
        format!("N = 2 arbiter selected {:?}", report.matching_variant)
    });
    Ok(out)
}

fn chiral(a: &ChiralArgs) -> Result<Outcome> {
    let n = dimension(a.n)?;
    let field = ChiralField::sample(n, plane(&a.grid, a.h)?)?;
    let residual = residual_chiral(&field)?;
    let hbar = 2.0 * PI / n as f64;
    let mut header = vec![
        "w".to_string(),
        "z".into(),
        "residual".into(),
        "fold_project_deviation".into(),
    ];
    for i in 0..n {
        for j in 0..n {
            header.push(format!("m{i}{j}_re"));
            header.push(format!("m{i}{j}_im"));
        }
    }
    let mut table = Table::new(header);
    let mut worst_fold: f64 = 0.0;
    for (&i, &r) in residual.points().iter().zip(residual.values()) {
        let x = field.grid().coords(i);
        let m = &field.values()[i];
        let folded = chi_project(&fourier_expansion_theta(hbar, x[0], x[1], a.band_limit)?, n)?.matrix;
        let fold = max_abs_diff(m, &folded);
        worst_fold = worst_fold.max(fold);
        let mut row: Vec<Cell> = vec![x[0].into(), x[1].into(), r.into(), fold.into()];
        for i in 0..n {
            for j in 0..n {
                row.push(m[(i, j)].re.into());
                row.push(m[(i, j)].im.into());
            }
        }
        table.push(row);
    }
    let defect = field.values().iter().map(anti_hermitian_defect).fold(0.0, f64::max);
    let json = json!({
        "n": n,
        "h": a.h,
        "band_limit": a.band_limit,
        "points": residual.points().len(),
        "sup_residual": residual.sup_norm(),
        "l2_residual": residual.l2_norm(),
        "max_fold_project_deviation": worst_fold,
        "anti_hermitian_defect": defect,
    });
    let mut out = Outcome::new(Some(table), json, Format::Csv);
    out.check(worst_fold <= 1e-7, || {
        format!("parity display and fold-project differ by {worst_fold:e}")
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_parse() {
        let f = parse_modes("[[1, -2, 0.5, 0], [0, 0, 1, 1]]").unwrap();
        assert_eq!(f.coeff(ModeVector::new(1, -2)), Complex64::new(0.5, 0.0));
        assert_eq!(f.len(), 2);
        assert!(parse_modes("[[1.5, 0, 1, 0]]").is_err());
        assert!(parse_modes("[[1, 0, 1]]").is_err());
        assert!(parse_modes("nonsense").is_err());
    }

    #[test]
    fn grid_from_spacing() {
        let g = GridArgs {
            grid_w: "-1,1".parse().unwrap(),
            grid_z: "0,0.5".parse().unwrap(),
        };
        let grid = plane(&g, 0.125).unwrap();
        assert_eq!(grid.axis(0).len(), 17);
        assert_eq!(grid.axis(1).len(), 5);
        assert!(plane(&g, 0.3).is_err());
        assert!(plane(&g, -0.1).is_err());
    }

    #[test]
    fn hbar_resolution() {
        assert_eq!(
            resolve_hbar(&HbarArgs {
                hbar: Some(0.0),
                n: None
            })
            .unwrap(),
            0.0
        );
        assert_eq!(resolve_hbar(&HbarArgs { hbar: None, n: Some(4) }).unwrap(), PI / 2.0);
        assert!(resolve_hbar(&HbarArgs { hbar: None, n: Some(1) }).is_err());
        assert!(resolve_hbar(&HbarArgs {
            hbar: Some(-1.0),
            n: None
        })
        .is_err());
    }

    #[test]
    fn cos_derivatives_cycle() {
        let p = 0.3;
        assert_eq!(cos_derivative(0, p), p.cos());
        assert_eq!(cos_derivative(5, p), -p.sin());
        assert_eq!(cos_derivative(6, p), -p.cos());
    }
}
