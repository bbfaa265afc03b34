use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{project_function, FourierField};
use crate::grid::{GriddedFourierField, SpacetimeGrid};
use crate::special::gauss_legendre_16;

/// `λ(ħ) = (2/ħ) sin(ħ/2)`, with `λ(0) = 1`.
pub fn deformation_frequency(hbar: f64) -> f64 {
    if hbar.abs() < 1e-4 {
        let h2 = hbar * hbar;
        1.0 - h2 / 24.0 + h2 * h2 / 1920.0
    } else {
        (2.0 / hbar) * (0.5 * hbar).sin()
    }
}

/// Below this `|λ cos q|` the correction term switches to its integral form.
const REMOVABLE_CUTOFF: f64 = 1e-6;

/// Torus resolution and band limit used to turn point evaluations into
/// Fourier fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusSampling {
    pub resolution: usize,
    pub band_limit: u32,
}

impl Default for TorusSampling {
    fn default() -> Self {
        Self {
            resolution: 128,
            band_limit: 48,
        }
    }
}

/// The deformed Husain-Park solution
/// `Θ = (π/2) cos(p+q) − w sin q + [cos(λ z cos q + p) − cos p] / (λ cos q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormSolution {
    hbar: f64,
    lambda: f64,
}

/// The closed-form solution at `ħ ≥ 0`; `ħ = 0` gives the classical `θ`.
pub fn example_solution(hbar: f64) -> Result<ClosedFormSolution> {
    if !(hbar.is_finite() && hbar >= 0.0) {
        return Err(Error::InvalidHbar(hbar));
    }
    Ok(ClosedFormSolution {
        hbar,
        lambda: deformation_frequency(hbar),
    })
}

impl ClosedFormSolution {
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `λ = (2/ħ) sin(ħ/2)`.
    pub fn frequency(&self) -> f64 {
        self.lambda
    }

    pub fn evaluate(&self, w: f64, z: f64, p: f64, q: f64) -> f64 {
        evaluate_with(self.lambda, w, z, p, q)
    }

    /// The `ħ → 0` limit `θ`.
    pub fn evaluate_classical(&self, w: f64, z: f64, p: f64, q: f64) -> f64 {
        evaluate_with(1.0, w, z, p, q)
    }

    /// `∂_w Θ = −sin q`.
    pub fn d_w(&self, _w: f64, _z: f64, _p: f64, q: f64) -> f64 {
        -q.sin()
    }

    /// `∂_z Θ = −sin(λ z cos q + p)`.
    pub fn d_z(&self, _w: f64, z: f64, p: f64, q: f64) -> f64 {
        -(self.lambda * z * q.cos() + p).sin()
    }

    /// Fourier coefficients of `Θ(w, z, ·, ·)`.
    pub fn fourier_field(&self, w: f64, z: f64, sampling: TorusSampling) -> Result<FourierField> {
        project_function(sampling.resolution, sampling.band_limit, |p, q| {
            Complex64::new(self.evaluate(w, z, p, q), 0.0)
        })
    }

    /// `Θ` sampled on a `(w, z)` grid.
    pub fn gridded(&self, grid: SpacetimeGrid, sampling: TorusSampling) -> Result<GriddedFourierField> {
        sample_on_grid(grid, self.hbar, sampling, |x, p, q| self.evaluate(x[0], x[1], p, q))
    }
}

fn evaluate_with(lambda: f64, w: f64, z: f64, p: f64, q: f64) -> f64 {
    let a = lambda * q.cos();
    let correction = if a.abs() < REMOVABLE_CUTOFF {
        -gauss_legendre_16(|zeta| (zeta * a + p).sin(), 0.0, z)
    } else {
        ((a * z + p).cos() - p.cos()) / a
    };
    FRAC_PI_2 * (p + q).cos() - w * q.sin() + correction
}

/// Samples a real function of `(spacetime coords, p, q)` into a gridded
/// Fourier field, one torus projection per grid point.
pub fn sample_on_grid(
    grid: SpacetimeGrid,
    hbar: f64,
    sampling: TorusSampling,
    f: impl Fn(&[f64], f64, f64) -> f64 + Sync,
) -> Result<GriddedFourierField> {
    use rayon::prelude::*;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.coords(i);
            project_function(sampling.resolution, sampling.band_limit, |p, q| {
                Complex64::new(f(&x, p, q), 0.0)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GriddedFourierField::new(grid, values, hbar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_series_matches_closed_form_near_cutoff() {
        let h: f64 = 1e-4;
        let direct = (2.0 / h) * (0.5 * h).sin();
        assert!((deformation_frequency(0.99e-4) - (2.0 / 0.99e-4) * (0.5 * 0.99e-4f64).sin()).abs() < 1e-15);
        assert!((deformation_frequency(h) - direct).abs() < 1e-15);
        assert_eq!(deformation_frequency(0.0), 1.0);
        let h = std::f64::consts::PI;
        assert!((deformation_frequency(h) - 2.0 / h).abs() < 1e-15);
    }

    #[test]
    fn origin_value() {
        for h in [0.0, 1e-6, 0.5, 2.0] {
            let s = example_solution(h).unwrap();
            assert_eq!(s.evaluate(0.0, 0.0, 0.0, 0.0), FRAC_PI_2);
        }
        assert!(example_solution(-1.0).is_err());
    }

    #[test]
    fn removable_point_is_continuous() {
        let s = example_solution(0.7).unwrap();
        let (w, z, p) = (0.3, 0.8, 1.1);
        let at = s.evaluate(w, z, p, FRAC_PI_2);
        let near = s.evaluate(w, z, p, FRAC_PI_2 - 1e-5);
        assert!((at - near).abs() < 1e-4);
        // At cos q = 0 the correction is exactly −z sin p.
        let want = FRAC_PI_2 * (p + FRAC_PI_2).cos() - w - z * p.sin();
        assert!((at - want).abs() < 1e-14);
    }

    #[test]
    fn classical_limit() {
        let s = example_solution(1e-6).unwrap();
        for &(w, z, p, q) in &[(0.1, -0.4, 0.3, 2.0), (-0.7, 0.9, 4.0, 0.2), (0.0, 1.0, 1.0, 1.0)] {
            assert!((s.evaluate(w, z, p, q) - s.evaluate_classical(w, z, p, q)).abs() < 1e-9);
        }
    }

    #[test]
    fn z_derivative_at_origin_is_minus_sin_p() {
        let s = example_solution(0.9).unwrap();
        let h = 1e-4;
        for &(p, q) in &[(0.3, 1.2), (2.5, -0.7), (5.0, 3.0)] {
            let fd = (s.evaluate(0.2, h, p, q) - s.evaluate(0.2, -h, p, q)) / (2.0 * h);
            assert!((fd + f64::sin(p)).abs() < 1e-8);
        }
    }
}
