//! Fourier-mode algebra on the 2-torus with coordinates `(p, q)`.

mod field;
mod mode;
mod product;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

pub use field::FourierField;
pub use mode::ModeVector;
pub use product::{
    moyal_bracket, poisson_bracket, star_product, star_product_with_prune, Bracket, Hbar, DEFAULT_PRUNE,
};

use crate::error::{Error, Result};

/// Ordinary pointwise product of two fields.
pub fn pointwise_product(f: &FourierField, g: &FourierField) -> FourierField {
    let mut out = Vec::with_capacity(f.len() * g.len());
    for &(m, a) in f.modes() {
        for &(n, b) in g.modes() {
            out.push((m + n, a * b));
        }
    }
    FourierField::from_modes(out).with_band_limit(f.band_limit() + g.band_limit())
}

/// Evaluates `Σ f_m exp(i(m1 p + m2 q))`.
pub fn eval_on_torus(f: &FourierField, p: f64, q: f64) -> Complex64 {
    f.iter()
        .map(|(m, c)| c * Complex64::from_polar(1.0, m.m1 as f64 * p + m.m2 as f64 * q))
        .sum()
}

/// Samples `f` on the uniform `rows × cols` torus grid `p_j = 2πj/rows`, `q_k = 2πk/cols`.
pub fn sample_torus(f: &FourierField, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |j, k| {
        eval_on_torus(f, torus_coord(j, rows), torus_coord(k, cols))
    })
}

/// Samples a closure on the uniform torus grid.
pub fn sample_function(rows: usize, cols: usize, f: impl Fn(f64, f64) -> Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |j, k| f(torus_coord(j, rows), torus_coord(k, cols)))
}

pub(crate) fn torus_coord(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

/// Discrete Fourier projection of torus samples onto modes with `|m_i| ≤ band_limit`.
///
/// `samples[(j, k)]` is the value at `p = 2πj/rows`, `q = 2πk/cols`. Each axis
/// needs at least `2 band_limit + 1` samples.
pub fn fft_project(samples: &DMatrix<Complex64>, band_limit: u32) -> Result<FourierField> {
    let (rows, cols) = samples.shape();
    let needed = 2 * band_limit as usize + 1;
    if rows < needed || cols < needed {
        return Err(Error::TorusGridTooSmall {
            rows,
            cols,
            band_limit,
            needed,
        });
    }
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(cols);
    let col_fft = planner.plan_fft_forward(rows);

    let mut grid: Vec<Vec<Complex64>> = (0..rows).map(|j| samples.row(j).iter().copied().collect()).collect();
    for row in &mut grid {
        row_fft.process(row);
    }
    let mut column = vec![Complex64::default(); rows];
    let norm = 1.0 / (rows * cols) as f64;
    let r = band_limit as i64;
    let mut modes = Vec::new();
    let mut spectrum = vec![vec![Complex64::default(); cols]; rows];
    for k in 0..cols {
        for j in 0..rows {
            column[j] = grid[j][k];
        }
        col_fft.process(&mut column);
        for j in 0..rows {
            spectrum[j][k] = column[j] * norm;
        }
    }
    for m1 in -r..=r {
        for m2 in -r..=r {
            let j = m1.rem_euclid(rows as i64) as usize;
            let k = m2.rem_euclid(cols as i64) as usize;
            modes.push((ModeVector::new(m1, m2), spectrum[j][k]));
        }
    }
    Ok(FourierField::from_modes(modes)
        .prune(DEFAULT_PRUNE)
        .with_band_limit(band_limit))
}

/// Projects a function of `(p, q)` onto modes of max-norm at most `band_limit`.
pub fn project_function(resolution: usize, band_limit: u32, f: impl Fn(f64, f64) -> Complex64) -> Result<FourierField> {
    fft_project(&sample_function(resolution, resolution, f), band_limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_recovers_single_mode() {
        let m = ModeVector::new(3, -2);
        let f = FourierField::mode(m, Complex64::new(1.0, 0.0));
        let got = fft_project(&sample_torus(&f, 16, 16), 5).unwrap();
        assert!((got.coeff(m) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!(got.restrict(|k| k != m).max_abs() < 1e-13);
    }

    #[test]
    fn fft_zero_samples_give_empty_field() {
        let zero = DMatrix::from_element(9, 9, Complex64::default());
        assert!(fft_project(&zero, 4).unwrap().is_empty());
    }

    #[test]
    fn fft_rejects_coarse_grid() {
        let zero = DMatrix::from_element(8, 9, Complex64::default());
        assert!(matches!(
            fft_project(&zero, 4),
            Err(Error::TorusGridTooSmall { needed: 9, .. })
        ));
    }

    #[test]
    fn fft_on_rectangular_grid() {
        let f = FourierField::real_harmonic(ModeVector::new(1, 4), 0.5, 2.0);
        let got = fft_project(&sample_torus(&f, 9, 11), 4).unwrap();
        assert!(got.max_abs_diff(&f) < 1e-14);
    }

    #[test]
    fn eval_of_real_harmonic() {
        let f = FourierField::real_harmonic(ModeVector::new(1, -1), 2.0, 3.0);
        let (p, q): (f64, f64) = (0.4, 1.3);
        let want = 2.0 * (p - q).cos() + 3.0 * (p - q).sin();
        let got = eval_on_torus(&f, p, q);
        assert!((got.re - want).abs() < 1e-15 && got.im.abs() < 1e-15);
    }

    #[test]
    fn pointwise_product_of_cosines() {
        let c1 = FourierField::real_harmonic(ModeVector::new(1, 0), 1.0, 0.0);
        let sq = pointwise_product(&c1, &c1);
        // cos² p = ½ + ½ cos 2p
        let want = FourierField::linear_combination(&[
            (0.5, &FourierField::constant(Complex64::new(1.0, 0.0))),
            (0.5, &FourierField::real_harmonic(ModeVector::new(2, 0), 1.0, 0.0)),
        ]);
        assert!(sq.max_abs_diff(&want) < 1e-16);
    }
}
