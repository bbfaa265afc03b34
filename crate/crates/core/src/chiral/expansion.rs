use std::f64::consts::PI;

use num_complex::Complex64;

use super::coefficients::integral_bound;
use crate::error::{Error, Result};
use crate::fourier::{FourierField, ModeVector};
use crate::me_solver::deformation_frequency;
use crate::special::bessel_integrals;

fn validate(hbar: f64, band_limit: u32) -> Result<f64> {
    if band_limit < 2 {
        return Err(Error::InvalidInput(format!(
            "band limit must be at least 2, got {band_limit}"
        )));
    }
    if !(hbar.is_finite() && (0.0..2.0 * PI).contains(&hbar)) {
        return Err(Error::InvalidHbar(hbar));
    }
    Ok(deformation_frequency(hbar))
}

/// `A_ℓ = ±(1/λ) ∫_0^{zλ} J_ℓ`, with `(−1)^m` for `ℓ = 2m − 1` and
/// `(−1)^{m+1}` for `ℓ = 2m`, for `ℓ = 0..=top`.
fn amplitudes(lambda: f64, z: f64, top: usize) -> Vec<f64> {
    let integrals = bessel_integrals(top, z * lambda);
    integrals
        .iter()
        .enumerate()
        .map(|(l, i)| {
            let m = l.div_ceil(2);
            let sign = if l % 2 == 1 {
                if m % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else if m % 2 == 0 {
                -1.0
            } else {
                1.0
            };
            sign * i / lambda
        })
        .collect()
}

/// Fourier modes of `Θ(ħ, w, z, ·, ·)` from its Bessel-integral expansion:
///
/// `Θ = (π/4)(E_{(1,1)} + E_{(−1,−1)}) − (w/2i)(E_{(0,1)} − E_{(0,−1)})
///  + Σ_m A_{2m−1} ½[E_{(1,2m−1)} + E_{(−1,−(2m−1))} + E_{(−1,2m−1)} + E_{(1,−(2m−1))}]
///  + Σ_m A_{2m} (1/2i)[E_{(1,2m)} − E_{(−1,−2m)} − E_{(−1,2m)} + E_{(1,−2m)}]
///  + A_0 (1/2i)[E_{(1,0)} − E_{(−1,0)}]`,
///
/// keeping `|m₂| ≤ band_limit`.
pub fn fourier_expansion_theta(hbar: f64, w: f64, z: f64, band_limit: u32) -> Result<FourierField> {
    let lambda = validate(hbar, band_limit)?;
    let top = band_limit as usize;
    let a = amplitudes(lambda, z, top);
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5);
    let mv = |m1: i64, m2: i64| ModeVector::new(m1, m2);
    let mut modes = vec![
        (mv(1, 1), Complex64::new(PI / 4.0, 0.0)),
        (mv(-1, -1), Complex64::new(PI / 4.0, 0.0)),
        (mv(0, 1), -w * half_i),
        (mv(0, -1), w * half_i),
        (mv(1, 0), a[0] * half_i),
        (mv(-1, 0), -a[0] * half_i),
    ];
    for (l, &amp) in a.iter().enumerate().skip(1) {
        let l = l as i64;
        if l % 2 == 1 {
            let c = amp * half;
            modes.extend([(mv(1, l), c), (mv(-1, -l), c), (mv(-1, l), c), (mv(1, -l), c)]);
        } else {
            let c = amp * half_i;
            modes.extend([(mv(1, l), c), (mv(-1, -l), -c), (mv(-1, l), -c), (mv(1, -l), c)]);
        }
    }
    Ok(FourierField::from_modes(modes).with_band_limit(band_limit))
}

/// Bound on the sup-norm contribution of the modes dropped by
/// [`fourier_expansion_theta`] for `|m₂| > band_limit`.
pub fn expansion_tail_bound(hbar: f64, z: f64, band_limit: u32) -> Result<f64> {
    let lambda = validate(hbar, band_limit)?;
    let x = z * lambda;
    Ok((band_limit as usize + 1..band_limit as usize + 64)
        .map(|l| 2.0 * integral_bound(l, x) / lambda.abs())
        .sum())
}
