use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::expansion::fourier_expansion_theta;
use super::field::{chiral_field, pauli, pauli_closed_form};
use crate::error::{Error, Result};
use crate::grid::SpacetimeGrid;
use crate::matrix::max_abs_diff;
use crate::special::{bessel_integral, bessel_j_sequence, integrate_gk};

/// `ħ` standing in for the classical limit.
pub const CLASSICAL_HBAR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `p` in the least-squares fit `d(N) ≈ C N^{−p}`.
    pub fitted_exponent: f64,
}

impl ConvergenceTable {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].distance < w[0].distance)
    }
}

/// Least-squares slope of `log y` against `log x`, negated.
pub fn fitted_decay_exponent(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let (mx, my) = logs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / k, b + y / k));
    let (sxy, sxx) = logs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    -sxy / sxx
}

/// `d(N) = sup_grid max_m |Θ̂_m(2π/N) − Θ̂_m(ħ → 0)|` over the modes `|m_i| ≤ band_limit`.
pub fn convergence_study(n_list: &[usize], grid: &SpacetimeGrid, band_limit: u32) -> Result<ConvergenceTable> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(format!(
            "N list must be nonempty and strictly increasing, got {n_list:?}"
        )));
    }
    if let Some(&n) = n_list.iter().find(|&&n| n < 2) {
        return Err(Error::DimensionTooSmall(n));
    }
    if grid.dim() != 2 {
        return Err(Error::InvalidGrid(format!(
            "expected a (w, z) grid, got {} axes",
            grid.dim()
        )));
    }
    let classical: Vec<_> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.coords(i);
            fourier_expansion_theta(CLASSICAL_HBAR, x[0], x[1], band_limit)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let hbar = 2.0 * PI / n as f64;
        let distances: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let x = grid.coords(i);
                let f = fourier_expansion_theta(hbar, x[0], x[1], band_limit)?;
                Ok(f.sub(&classical[i]).iter().map(|(_, c)| c.norm()).fold(0.0, f64::max))
            })
            .collect::<Result<_>>()?;
        rows.push(ConvergenceRow {
            n,
            distance: distances.into_iter().fold(0.0, f64::max),
        });
    }
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.distance > 0.0)
        .map(|r| (r.n as f64, r.distance))
        .collect();
    let fitted_exponent = if fit.len() >= 2 {
        fitted_decay_exponent(&fit)
    } else {
        f64::NAN
    };
    Ok(ConvergenceTable { rows, fitted_exponent })
}

/// Which reading of the odd-order Bessel summation the `N = 2` reduction needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityVariant {
    /// `Σ_{k≥1} (−1)^k J_{2k+1}(ζ) = sin ζ / ζ`.
    Printed,
    /// `2 Σ_{k≥0} (−1)^k J_{2k+1}(ζ) = sin ζ`.
    Standard,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselIdentityReport {
    pub z_max: f64,
    pub terms: usize,
    pub samples: usize,
    pub tail_bound: f64,
    /// `max |Σ_{k≥1} (−1)^k J_{2k+1} − sin ζ/ζ|`, with `sin 0 / 0 = 1`.
    pub first_printed_deviation: f64,
    /// The same deviation at `ζ = 0`.
    pub first_printed_deviation_at_zero: f64,
    /// `max |2 Σ_{k≥0} (−1)^k J_{2k+1} − sin ζ|`.
    pub first_standard_deviation: f64,
    /// `max |2 Σ_{k≥1} (−1)^k J_{2k} + J_0 − cos ζ|`.
    pub second_deviation: f64,
    /// `σ₁`-coefficient of `ϑ_2` built with each variant, against the Pauli form.
    pub pauli_printed_deviation: f64,
    pub pauli_standard_deviation: f64,
    /// `max ‖chiral_field(2) − Pauli form‖` over the same `z` samples.
    pub chiral_field_deviation: f64,
    pub matching_variant: Option<IdentityVariant>,
}

const IDENTITY_SAMPLES: usize = 401;
const MATCH_TOL: f64 = 1e-9;

/// `Σ_{n ≥ start, step 2} |J_n(ζ)|` bound for `ζ ≤ z_max`.
fn series_tail(start: usize, z_max: f64) -> f64 {
    (start..start + 128)
        .step_by(2)
        .map(|n| {
            let mut t = 1.0;
            for k in 1..=n {
                t *= 0.5 * z_max / k as f64;
            }
            2.0 * t
        })
        .sum()
}

/// Evaluates both Bessel summation identities on `[0, z_max]` and decides,
/// through the `N = 2` reduction, which reading of the first one holds.
pub fn bessel_identity_check(z_max: f64, terms: usize) -> Result<BesselIdentityReport> {
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "z_max must be finite and positive, got {z_max}"
        )));
    }
    let tail_bound = series_tail(2 * terms, z_max);
    if tail_bound >= 1e-12 {
        return Err(Error::InvalidInput(format!(
            "{terms} terms leave a tail bound of {tail_bound:e} on [0, {z_max}]"
        )));
    }
    let alt = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let zetas: Vec<f64> = (0..IDENTITY_SAMPLES)
        .map(|i| z_max * i as f64 / (IDENTITY_SAMPLES - 1) as f64)
        .collect();
    let mut first_printed: f64 = 0.0;
    let mut first_printed_zero = 0.0;
    let mut first_standard: f64 = 0.0;
    let mut second: f64 = 0.0;
    for &zeta in &zetas {
        let j = bessel_j_sequence(2 * terms + 1, zeta);
        let odd_from_one: f64 = (1..terms).map(|k| alt(k) * j[2 * k + 1]).sum();
        let sinc = if zeta == 0.0 { 1.0 } else { zeta.sin() / zeta };
        let dev = (odd_from_one - sinc).abs();
        if zeta == 0.0 {
            first_printed_zero = dev;
        }
        first_printed = first_printed.max(dev);
        first_standard = first_standard.max((2.0 * (j[1] + odd_from_one) - zeta.sin()).abs());
        let even: f64 = (1..=terms).map(|k| alt(k) * j[2 * k]).sum();
        second = second.max((2.0 * even + j[0] - zeta.cos()).abs());
    }

    // ϑ_2 has σ₁-coefficient (−i/π)(π/2 + 2a₁), a₁ = −(π/2) Σ_{r≥0} (−1)^r ∫_0^x J_{2r+1}, x = 2z/π.
    let sigma1 = |a1: f64| Complex64::new(0.0, -1.0 / PI) * (PI / 2.0 + 2.0 * a1);
    let pauli_sigma1 = |z: f64| Complex64::new(0.0, -0.5) * (2.0 * z / PI).cos();
    let si = |x: f64| integrate_gk(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, 1e-14);
    let mut pauli_printed: f64 = 0.0;
    let mut pauli_standard: f64 = 0.0;
    let mut field_dev: f64 = 0.0;
    let [s1, ..] = pauli();
    for &z in &zetas {
        let x = 2.0 * z / PI;
        let printed_integral = 1.0 - bessel_integral(0, x) + si(x);
        let standard_integral = 0.5 * (1.0 - x.cos());
        let want = pauli_sigma1(z);
        pauli_printed = pauli_printed.max((sigma1(-PI / 2.0 * printed_integral) - want).norm());
        pauli_standard = pauli_standard.max((sigma1(-PI / 2.0 * standard_integral) - want).norm());
        let got = chiral_field(2, 0.0, z)?;
        let got_sigma1 = (&s1 * &got).trace() * 0.5;
        field_dev = field_dev.max((got_sigma1 - want).norm());
        let full = max_abs_diff(&got, &pauli_closed_form(0.0, z));
        field_dev = field_dev.max(full);
    }
    let matching_variant = if pauli_standard <= MATCH_TOL && pauli_printed > MATCH_TOL {
        Some(IdentityVariant::Standard)
    } else if pauli_printed <= MATCH_TOL && pauli_standard > MATCH_TOL {
        Some(IdentityVariant::Printed)
    } else {
        None
    };
    Ok(BesselIdentityReport {
        z_max,
        terms,
        samples: IDENTITY_SAMPLES,
        tail_bound,
        first_printed_deviation: first_printed,
        first_printed_deviation_at_zero: first_printed_zero,
        first_standard_deviation: first_standard,
        second_deviation: second,
        pauli_printed_deviation: pauli_printed,
        pauli_standard_deviation: pauli_standard,
        chiral_field_deviation: field_dev,
        matching_variant,
    })
}
