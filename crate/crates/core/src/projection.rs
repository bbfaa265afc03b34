//! The homomorphism `χ_N` from torus Fourier series with the Moyal bracket at
//! `ħ = 2π/N` onto `sl(N, C)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{FourierField, ModeVector};
use crate::grid::{GriddedFourierField, SpacetimeGrid};
use crate::matrix::CMatrix;
use crate::sine_basis::{fold_mode, SineBasis};

/// Image of a Fourier field under `χ_N`.
#[derive(Clone, Debug)]
pub struct FoldedMatrixField {
    pub n_dim: usize,
    pub matrix: CMatrix,
    /// Band limit of the field that was projected.
    pub source_band_limit: u32,
}

/// `χ_N` applied pointwise over a spacetime grid.
#[derive(Clone, Debug)]
pub struct AlgebraField {
    n_dim: usize,
    grid: SpacetimeGrid,
    values: Vec<CMatrix>,
}

impl AlgebraField {
    pub fn new(n_dim: usize, grid: SpacetimeGrid, values: Vec<CMatrix>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridShapeMismatch {
                points: grid.len(),
                values: values.len(),
            });
        }
        Ok(Self { n_dim, grid, values })
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }
}

/// Sums `f_m` per fundamental-window index after folding, dropping `μ = 0`.
pub fn folded_coefficients(f: &FourierField, n: usize) -> Vec<(ModeVector, Complex64)> {
    let mut acc = vec![Complex64::default(); n * n];
    for (m, c) in f.iter() {
        let (mu, sign) = fold_mode(n, m);
        acc[mu.m1 as usize * n + mu.m2 as usize] += c * sign;
    }
    acc.into_iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| *c != Complex64::default())
        .map(|(k, c)| (ModeVector::new((k / n) as i64, (k % n) as i64), c))
        .collect()
}

/// `χ_N(f)` using a precomputed basis.
pub fn chi_project_with(basis: &SineBasis, f: &FourierField) -> CMatrix {
    let n = basis.dim();
    let mut out = CMatrix::zeros(n, n);
    for (mu, c) in folded_coefficients(f, n) {
        out += basis.window(mu) * c;
    }
    out
}

/// `χ_N(f) = Σ_m f_m (±) L_μ`, with `E_{Nr} ↦ 0`.
pub fn chi_project(f: &FourierField, n: usize) -> Result<FoldedMatrixField> {
    let basis = SineBasis::new(n)?;
    Ok(FoldedMatrixField {
        n_dim: n,
        matrix: chi_project_with(&basis, f),
        source_band_limit: f.band_limit(),
    })
}

/// Pointwise `χ_N` of a gridded field whose deformation must be `2π/N`.
pub fn chi_project_gridded(field: &GriddedFourierField, n: usize) -> Result<AlgebraField> {
    let basis = SineBasis::new(n)?;
    let expected = 2.0 * std::f64::consts::PI / n as f64;
    if (field.hbar() - expected).abs() > 1e-14 {
        return Err(Error::HbarMismatch {
            n,
            expected,
            found: field.hbar(),
        });
    }
    let values = field.values().par_iter().map(|f| chi_project_with(&basis, f)).collect();
    AlgebraField::new(n, field.grid().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{moyal_bracket, Hbar};
    use crate::grid::UniformAxis;
    use crate::matrix::{commutator, max_abs, max_abs_diff, traceless_part};
    use crate::sine_basis::basis_matrix;

    fn l(n: usize, a: i64, b: i64) -> CMatrix {
        basis_matrix(n, ModeVector::new(a, b)).unwrap()
    }

    /// Independent route: traceless part of `Σ f_m L_m` with unreduced indices.
    fn unfolded_oracle(f: &FourierField, n: usize) -> CMatrix {
        let mut sum = CMatrix::zeros(n, n);
        for (m, c) in f.iter() {
            sum += l(n, m.m1, m.m2) * c;
        }
        traceless_part(&sum)
    }

    #[test]
    fn cos_p_plus_q() {
        let f = FourierField::real_harmonic(ModeVector::new(1, 1), 1.0, 0.0);
        for n in 2..=7 {
            let got = chi_project(&f, n).unwrap().matrix;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let ni = n as i64;
            let want = (l(n, 1, 1) + l(n, ni - 1, ni - 1) * Complex64::new(sign, 0.0)) * Complex64::new(0.5, 0.0);
            assert!(max_abs_diff(&got, &want) < 1e-14, "n={n}");
        }
    }

    #[test]
    fn sin_p() {
        let f = FourierField::real_harmonic(ModeVector::new(1, 0), 0.0, 1.0);
        for n in 2..=7 {
            let got = chi_project(&f, n).unwrap().matrix;
            let want = (l(n, 1, 0) - l(n, -1, 0)) * Complex64::new(0.0, -0.5);
            let want_window = (l(n, 1, 0) + l(n, n as i64 - 1, 0)) * Complex64::new(0.0, -0.5);
            assert!(max_abs_diff(&got, &want) < 1e-14);
            assert!(max_abs_diff(&got, &want_window) < 1e-14);
        }
    }

    #[test]
    fn constants_and_lattice_modes_vanish() {
        for n in 2..=6 {
            let ni = n as i64;
            assert!(chi_project(&FourierField::constant(Complex64::new(3.0, 1.0)), n)
                .unwrap()
                .matrix
                .iter()
                .all(|c| *c == Complex64::default()));
            for a in -2..=2 {
                for b in -2..=2 {
                    let f = FourierField::mode(ModeVector::new(ni * a, ni * b), Complex64::new(1.0, 0.0));
                    assert_eq!(max_abs(&chi_project(&f, n).unwrap().matrix), 0.0);
                }
            }
        }
    }

    #[test]
    fn matches_traceless_unfolded_sum() {
        let f = FourierField::from_modes(
            (-5i64..=5)
                .flat_map(|a| (-5i64..=5).map(move |b| (a, b)))
                .map(|(a, b)| {
                    let c = Complex64::new(((a * 7 + b * 3) % 5) as f64 * 0.1, ((a - 2 * b) % 3) as f64 * 0.07);
                    (ModeVector::new(a, b), c)
                }),
        );
        for n in 2..=6 {
            let got = chi_project(&f, n).unwrap().matrix;
            assert!(max_abs_diff(&got, &unfolded_oracle(&f, n)) < 1e-12, "n={n}");
            assert!(got.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn homomorphism_on_basis_pairs() {
        for n in 2..=5 {
            let h = Hbar::for_dimension(n).unwrap();
            for (a, b) in [((1, 0), (0, 1)), ((2, -1), (-3, 2)), ((1, 1), (4, -3))] {
                let f = FourierField::mode(ModeVector::new(a.0, a.1), Complex64::new(1.0, 0.0));
                let g = FourierField::mode(ModeVector::new(b.0, b.1), Complex64::new(1.0, 0.0));
                let lhs = chi_project(&moyal_bracket(&f, &g, h), n).unwrap().matrix;
                let rhs = commutator(&chi_project(&f, n).unwrap().matrix, &chi_project(&g, n).unwrap().matrix);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn gridded_projection_checks_hbar() {
        let grid = SpacetimeGrid::plane(
            UniformAxis::spanning(0.0, 1.0, 3).unwrap(),
            UniformAxis::spanning(0.0, 1.0, 3).unwrap(),
        );
        let e10 = FourierField::mode(ModeVector::new(1, 0), Complex64::new(1.0, 0.0));
        let g = |x: &[f64]| e10.scale_real(x[0] + 2.0 * x[1]);
        let n = 4;
        let field = GriddedFourierField::sample(grid.clone(), Hbar::for_dimension(n).unwrap().value(), g).unwrap();
        let image = chi_project_gridded(&field, n).unwrap();
        for (i, m) in image.values().iter().enumerate() {
            let x = grid.coords(i);
            let want = l(n, 1, 0) * Complex64::new(x[0] + 2.0 * x[1], 0.0);
            assert!(max_abs_diff(m, &want) < 1e-15);
        }
        assert!(matches!(
            chi_project_gridded(&field, 5),
            Err(Error::HbarMismatch { .. })
        ));
    }
}
