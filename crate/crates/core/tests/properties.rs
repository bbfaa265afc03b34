use std::f64::consts::PI;

use proptest::prelude::*;
use starsdym::chiral::chiral_field;
use starsdym::fourier::FourierField;
use starsdym::matrix::{anti_hermitian_defect, commutator, max_abs_diff};
use starsdym::sine_basis::fold_mode;
use starsdym::{
    chi_project, moyal_bracket, poisson_bracket, star_product, Bracket, CMatrix, Complex64, Hbar, ModeVector, SineBasis,
};

fn mode(reach: i64) -> impl Strategy<Value = ModeVector> {
    (-reach..=reach, -reach..=reach).prop_map(|(a, b)| ModeVector::new(a, b))
}

fn coefficient() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn field(reach: i64, max_modes: usize) -> impl Strategy<Value = FourierField> {
    prop::collection::vec((mode(reach), coefficient()), 1..=max_modes).prop_map(FourierField::from_modes)
}

fn real_field(reach: i64, max_modes: usize) -> impl Strategy<Value = FourierField> {
    prop::collection::vec((mode(reach), coefficient()), 1..=max_modes)
        .prop_map(|pairs| FourierField::from_modes(pairs.into_iter().flat_map(|(m, c)| [(m, c), (-m, c.conj())])))
}

fn scale(fields: &[&FourierField]) -> f64 {
    fields.iter().map(|f| f.l1_norm()).product::<f64>().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cross_product_is_antisymmetric(m in mode(1000), n in mode(1000)) {
        prop_assert_eq!(m.cross(n), -n.cross(m));
    }

    #[test]
    fn moyal_bracket_is_antisymmetric(f in field(5, 6), g in field(5, 6), hbar in 0.01..6.0f64) {
        let h = Hbar::new(hbar).unwrap();
        let fg = moyal_bracket(&f, &g, h);
        let gf = moyal_bracket(&g, &f, h);
        prop_assert_eq!(fg, gf.scale_real(-1.0));
    }

    #[test]
    fn jacobi_identity(f in field(5, 4), g in field(5, 4), h in field(5, 4), hbar in 0.1..3.0f64) {
        let b = Bracket::moyal(hbar).unwrap();
        let sum = FourierField::linear_combination(&[
            (1.0, &b.apply(&f, &b.apply(&g, &h))),
            (1.0, &b.apply(&g, &b.apply(&h, &f))),
            (1.0, &b.apply(&h, &b.apply(&f, &g))),
        ]);
        prop_assert!(sum.max_abs() <= 1e-12 * scale(&[&f, &g, &h]));
    }

    #[test]
    fn star_product_is_associative(f in field(4, 5), g in field(4, 5), h in field(4, 5), hbar in 0.01..6.0f64) {
        let hb = Hbar::new(hbar).unwrap();
        let left = star_product(&star_product(&f, &g, hb), &h, hb);
        let right = star_product(&f, &star_product(&g, &h, hb), hb);
        prop_assert!(left.max_abs_diff(&right) <= 1e-12 * scale(&[&f, &g, &h]));
    }

    #[test]
    fn bracket_is_commutator_of_star(f in field(4, 5), g in field(4, 5), hbar in 0.05..6.0f64) {
        let hb = Hbar::new(hbar).unwrap();
        let comm = star_product(&f, &g, hb).sub(&star_product(&g, &f, hb)).scale(Complex64::new(0.0, -1.0 / hbar));
        prop_assert!(moyal_bracket(&f, &g, hb).max_abs_diff(&comm) <= 1e-12 * scale(&[&f, &g]) / hbar);
    }

    #[test]
    fn moyal_tends_to_poisson_quadratically(f in field(3, 4), g in field(3, 4), hbar in 0.002..0.01f64) {
        let poisson = poisson_bracket(&f, &g);
        let err = |h: f64| moyal_bracket(&f, &g, Hbar::new(h).unwrap()).max_abs_diff(&poisson);
        let (coarse, fine) = (err(hbar), err(hbar / 2.0));
        prop_assume!(coarse > 1e-9);
        let ratio = coarse / fine;
        prop_assert!((ratio - 4.0).abs() < 0.1, "ratio {}", ratio);
    }

    #[test]
    fn brackets_of_real_fields_are_real(f in real_field(5, 4), g in real_field(5, 4), hbar in 0.01..6.0f64) {
        let b = moyal_bracket(&f, &g, Hbar::new(hbar).unwrap());
        prop_assert!(b.is_real(1e-13 * scale(&[&f, &g])));
        prop_assert!(poisson_bracket(&f, &g).is_real(1e-13 * scale(&[&f, &g])));
    }

    #[test]
    fn chi_is_a_homomorphism(f in real_field(4, 4), g in real_field(4, 4), n in 2usize..=7) {
        let hbar = Hbar::for_dimension(n).unwrap();
        let lhs = chi_project(&moyal_bracket(&f, &g, hbar), n).unwrap().matrix;
        let rhs = commutator(&chi_project(&f, n).unwrap().matrix, &chi_project(&g, n).unwrap().matrix);
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-10 * scale(&[&f, &g]));
    }

    #[test]
    fn chi_is_linear(f in field(6, 6), g in field(6, 6), a in -2.0..2.0f64, b in -2.0..2.0f64, n in 2usize..=8) {
        let combo = FourierField::linear_combination(&[(a, &f), (b, &g)]);
        let lhs = chi_project(&combo, n).unwrap().matrix;
        let rhs = chi_project(&f, n).unwrap().matrix * Complex64::new(a, 0.0)
            + chi_project(&g, n).unwrap().matrix * Complex64::new(b, 0.0);
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-13 * scale(&[&f, &g]));
    }

    #[test]
    fn chi_images_are_traceless(f in field(9, 8), n in 2usize..=8) {
        let m = chi_project(&f, n).unwrap().matrix;
        prop_assert!(m.trace().norm() <= 1e-12 * f.l1_norm().max(1.0));
    }

    #[test]
    fn chi_kernel_is_the_lattice(r1 in -2i64..=2, r2 in -2i64..=2, n in 2usize..=8) {
        let f = FourierField::mode(ModeVector::new(n as i64 * r1, n as i64 * r2), Complex64::new(1.0, 0.0));
        prop_assert_eq!(chi_project(&f, n).unwrap().matrix, CMatrix::zeros(n, n));
    }

    #[test]
    fn folding_lands_in_window(m in mode(50), n in 2usize..=9) {
        let (mu, sign) = fold_mode(n, m);
        prop_assert!((0..n as i64).contains(&mu.m1) && (0..n as i64).contains(&mu.m2));
        prop_assert!(sign == 1.0 || sign == -1.0);
        prop_assert_eq!((m.m1 - mu.m1).rem_euclid(n as i64), 0);
        prop_assert_eq!((m.m2 - mu.m2).rem_euclid(n as i64), 0);
    }

    #[test]
    fn structure_constants(n in 2usize..=7, a in 0i64..7, b in 0i64..7, c in 0i64..7, d in 0i64..7) {
        let n_i = n as i64;
        let (mu, nu) = (ModeVector::new(a % n_i, b % n_i), ModeVector::new(c % n_i, d % n_i));
        let basis = SineBasis::new(n).unwrap();
        let comm = commutator(basis.window(mu), basis.window(nu));
        let coeff = n as f64 / PI * (PI / n as f64 * mu.cross(nu) as f64).sin();
        let moyal = Bracket::Moyal { hbar: Hbar::for_dimension(n).unwrap() }.structure_constant(mu.cross(nu));
        prop_assert!((coeff - moyal).abs() <= 1e-14 * coeff.abs().max(1.0));
        let want = basis.get(mu + nu) * Complex64::new(coeff, 0.0);
        prop_assert!(max_abs_diff(&comm, &want) <= 1e-11);
    }

    #[test]
    fn chiral_fields_lie_in_su_n(n in 2usize..=8, w in -1.5..1.5f64, z in -2.0..2.0f64) {
        let m = chiral_field(n, w, z).unwrap();
        prop_assert!(anti_hermitian_defect(&m) <= 1e-11);
        prop_assert!(m.trace().norm() <= 1e-11);
    }
}
