use std::f64::consts::PI;

use starsdym::chiral::{
    bessel_identity_check, chiral_field, chiral_system_check, convergence_study, fourier_expansion_theta, pauli,
    pauli_closed_form, residual_chiral, ChiralField, IdentityVariant,
};
use starsdym::fd::convergence_order;
use starsdym::grid::{SpacetimeGrid, UniformAxis};
use starsdym::matrix::{anti_hermitian_defect, max_abs_diff};
use starsdym::me_solver::{example_solution, residual_hp_classical, sample_on_grid, TorusSampling};
use starsdym::{chi_project, chi_project_gridded, Complex64, ModeVector, SineBasis};

/// Square grid of `n` points per axis with spacing `h`, centred at `(w, z)`.
fn patch(w: f64, z: f64, h: f64, n: usize) -> SpacetimeGrid {
    let half = h * (n - 1) as f64 / 2.0;
    SpacetimeGrid::plane(
        UniformAxis::new(w - half, h, n).unwrap(),
        UniformAxis::new(z - half, h, n).unwrap(),
    )
}

#[test]
fn expansion_matches_fft_of_closed_form() {
    let hbar = 2.0 * PI / 5.0;
    let sampling = TorusSampling {
        resolution: 128,
        band_limit: 40,
    };
    let fft = example_solution(hbar)
        .unwrap()
        .fourier_field(0.3, 0.7, sampling)
        .unwrap();
    let series = fourier_expansion_theta(hbar, 0.3, 0.7, 40).unwrap();
    let diff = series.sub(&fft).iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-8, "{diff}");
    assert!(series.is_real(1e-15));
}

#[test]
fn expansion_at_z_zero_is_cauchy_data() {
    let f = fourier_expansion_theta(1.3, -0.6, 0.0, 10).unwrap();
    let mut modes: Vec<_> = f.iter().map(|(m, _)| (m.m1, m.m2)).collect();
    modes.sort();
    assert_eq!(modes, vec![(-1, -1), (0, -1), (0, 1), (1, 1)]);
    assert_eq!(starsdym::eval_on_torus(&f, 0.0, 0.0).re, PI / 2.0);
}

#[test]
fn pauli_closed_form_for_n_two() {
    for &(w, z) in &[(0.0, 0.0), (0.4, 0.6), (-1.0, 1.9), (0.7, -1.3)] {
        let got = chiral_field(2, w, z).unwrap();
        assert!(max_abs_diff(&got, &pauli_closed_form(w, z)) <= 1e-9);
    }
    let [s1, s2, s3] = pauli();
    let i = Complex64::new(0.0, 1.0);
    let b = SineBasis::new(2).unwrap();
    assert!(
        max_abs_diff(
            &(b.window(ModeVector::new(1, 1)) * Complex64::new(PI, 0.0)),
            &(&s1 * -i)
        ) < 1e-15
    );
    assert!(max_abs_diff(&(b.window(ModeVector::new(0, 1)) * (PI / i)), &(&s2 * i)) < 1e-15);
    assert!(max_abs_diff(&(b.window(ModeVector::new(1, 0)) * (PI / i)), &(&s3 * i)) < 1e-15);
}

#[test]
fn origin_value_per_parity() {
    for n in 2..=8 {
        let b = SineBasis::new(n).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let top = n as i64 - 1;
        let want = (b.window(ModeVector::new(1, 1)) + b.window(ModeVector::new(top, top)) * Complex64::new(sign, 0.0))
            * Complex64::new(PI / 4.0, 0.0);
        assert!(max_abs_diff(&chiral_field(n, 0.0, 0.0).unwrap(), &want) <= 1e-14);
    }
}

#[test]
fn parity_display_equals_fold_then_project() {
    for n in [3, 4, 5] {
        let hbar = 2.0 * PI / n as f64;
        let folded = chi_project(&fourier_expansion_theta(hbar, 0.4, 0.6, 60).unwrap(), n).unwrap();
        let display = chiral_field(n, 0.4, 0.6).unwrap();
        let diff = max_abs_diff(&display, &folded.matrix);
        assert!(diff <= 1e-7, "N = {n}: {diff}");
    }
}

#[test]
fn fold_then_project_wider_range() {
    for n in [2, 6, 7, 8] {
        let hbar = 2.0 * PI / n as f64;
        for &(w, z) in &[(-0.5, 1.5), (0.9, -1.1)] {
            let folded = chi_project(&fourier_expansion_theta(hbar, w, z, 60).unwrap(), n).unwrap();
            assert!(max_abs_diff(&chiral_field(n, w, z).unwrap(), &folded.matrix) <= 1e-7);
        }
    }
}

#[test]
fn fields_lie_in_su_n() {
    let grid = patch(0.0, 0.0, 0.5, 5);
    for n in 2..=8 {
        let field = ChiralField::sample(n, grid.clone()).unwrap();
        assert!(field.anti_hermitian_defect() <= 1e-11);
        assert!(field.trace_defect() <= 1e-11);
    }
}

#[test]
fn pauli_residual_is_second_order() {
    let sample = |h: f64, n: usize| ChiralField::from_fn(2, patch(0.2, 0.4, h, n), pauli_closed_form).unwrap();
    let coarse = residual_chiral(&sample(1.0 / 64.0, 9)).unwrap();
    let fine = residual_chiral(&sample(1.0 / 128.0, 17)).unwrap();
    let report = convergence_order(&coarse, &fine);
    assert!((report.order - 2.0).abs() < 0.1, "{report:?}");
    assert!(fine.sup_norm() <= 1e-3);
}

#[test]
fn chiral_residual_vanishes_under_refinement() {
    for n in 2..=6 {
        let coarse = residual_chiral(&ChiralField::sample(n, patch(0.3, 0.5, 1.0 / 16.0, 9)).unwrap()).unwrap();
        let fine = residual_chiral(&ChiralField::sample(n, patch(0.3, 0.5, 1.0 / 32.0, 17)).unwrap()).unwrap();
        let report = convergence_order(&coarse, &fine);
        assert!((report.order - 2.0).abs() < 0.3, "N = {n}: {report:?}");
    }
}

#[test]
fn first_order_system() {
    let run = |h: f64, n: usize| {
        let f = ChiralField::from_fn(2, patch(-0.1, 0.3, h, n), pauli_closed_form).unwrap();
        chiral_system_check(&f).unwrap()
    };
    let (curl_c, div_c) = run(1.0 / 32.0, 9);
    let (curl_f, div_f) = run(1.0 / 64.0, 17);
    assert!((convergence_order(&curl_c, &curl_f).order - 2.0).abs() < 0.2);
    assert!(div_c.sup_norm() <= 1e-11 && div_f.sup_norm() <= 1e-11);
}

#[test]
fn non_solution_is_detected() {
    let [s1, s2, _] = pauli();
    let i = Complex64::new(0.0, 1.0);
    let field = ChiralField::from_fn(2, patch(0.0, 0.5, 1.0 / 32.0, 9), |w, z| {
        &s1 * (i * w) + &s2 * (i * z * z)
    })
    .unwrap();
    assert!(anti_hermitian_defect(&field.values()[0]) < 1e-15);
    let (curl, _) = chiral_system_check(&field).unwrap();
    assert!(curl.values().iter().all(|&r| r > 0.5));
    assert!(residual_chiral(&field).unwrap().values().iter().all(|&r| r > 0.5));
}

#[test]
fn convergence_to_classical_limit() {
    let grid = patch(0.2, 0.5, 0.5, 3);
    let table = convergence_study(&[2, 4, 8, 16, 32], &grid, 24).unwrap();
    assert!(table.strictly_decreasing(), "{table:?}");
    assert!((table.fitted_exponent - 2.0).abs() < 0.2, "{table:?}");
    assert!(convergence_study(&[4, 2], &grid, 24).is_err());
}

#[test]
fn mode_one_one_at_z_zero() {
    for n in [2, 8, 64, 1024] {
        let f = fourier_expansion_theta(2.0 * PI / n as f64, 0.1, 0.0, 8).unwrap();
        assert_eq!(f.coeff(ModeVector::new(1, 1)), Complex64::new(PI / 4.0, 0.0));
    }
}

#[test]
fn bessel_identities_and_n_two_arbiter() {
    let report = bessel_identity_check(4.0, 30).unwrap();
    assert!(report.second_deviation <= 1e-12);
    assert!(report.first_standard_deviation <= 1e-12);
    assert!((report.first_printed_deviation_at_zero - 1.0).abs() <= 1e-15);
    assert!(report.first_printed_deviation > 0.5);
    assert!(report.pauli_standard_deviation <= 1e-12);
    assert!(report.pauli_printed_deviation > 1e-2);
    assert!(report.chiral_field_deviation <= 1e-9);
    assert_eq!(report.matching_variant, Some(IdentityVariant::Standard));
}

#[test]
fn limits_commute_on_the_example() {
    let n = 3;
    let sampling = TorusSampling {
        resolution: 64,
        band_limit: 24,
    };
    let quantum = |h: f64, k: usize| {
        let grid = patch(0.2, 0.3, h, k);
        let theta = example_solution(2.0 * PI / n as f64)
            .unwrap()
            .gridded(grid, sampling)
            .unwrap();
        let algebra = chi_project_gridded(&theta, n).unwrap();
        let field = ChiralField::new(n, algebra.grid().clone(), algebra.values().to_vec()).unwrap();
        residual_chiral(&field).unwrap()
    };
    let (coarse, fine) = (quantum(1.0 / 16.0, 5), quantum(1.0 / 32.0, 9));
    assert!((convergence_order(&coarse, &fine).order - 2.0).abs() < 0.3);

    let classical = example_solution(0.0).unwrap();
    let leg = |h: f64, k: usize| {
        let sampled = sample_on_grid(patch(0.2, 0.3, h, k), 0.0, sampling, |x, p, q| {
            classical.evaluate_classical(x[0], x[1], p, q)
        })
        .unwrap();
        residual_hp_classical(&sampled).unwrap()
    };
    let (coarse, fine) = (leg(1.0 / 16.0, 5), leg(1.0 / 32.0, 9));
    assert!((convergence_order(&coarse, &fine).order - 2.0).abs() < 0.3);
}
