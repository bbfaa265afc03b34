use nalgebra::Matrix4;

use super::forms::Point4;
use super::metric::example_metric;
use crate::error::{Error, Result};

/// Closest admissible approach of `|cos q|`, `|cos ψ|` to zero.
pub const BRANCH_MARGIN: f64 = 1e-4;

/// `ds² = −dw du + dv dz − (du² + dv²)/√((1−u²)(1−v²))` in coordinates
/// `(w, u, v, z)`.
pub fn pp_wave_metric(u: f64, v: f64) -> Matrix4<f64> {
    let f = 1.0 / ((1.0 - u * u) * (1.0 - v * v)).sqrt();
    Matrix4::new(
        0.0, -0.5, 0.0, 0.0, //
        -0.5, -f, 0.0, 0.0, //
        0.0, 0.0, -f, 0.5, //
        0.0, 0.0, 0.5, 0.0,
    )
}

/// Pull-back of the pp-wave form through `u = sin q`, `v = sin(z cos q + p)`
/// to the chart `(w, z, p, q)`.
pub fn pp_wave_pullback(x: &Point4) -> Result<Matrix4<f64>> {
    let [_, z, p, q] = *x;
    let (cq, sq) = (q.cos(), q.sin());
    let psi = z * cq + p;
    let cpsi = psi.cos();
    let margin = cq.abs().min(cpsi.abs());
    if margin < BRANCH_MARGIN {
        return Err(Error::BranchPoint { point: *x, margin });
    }
    // Rows (w, u, v, z), columns (w, z, p, q).
    let jac = Matrix4::new(
        1.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        0.0,
        0.0,
        cq, //
        0.0,
        cpsi * cq,
        cpsi,
        -cpsi * z * sq, //
        0.0,
        1.0,
        0.0,
        0.0,
    );
    Ok(jac.transpose() * pp_wave_metric(sq, psi.sin()) * jac)
}

/// Largest componentwise difference between the pulled-back pp-wave and the
/// example metric.
pub fn pp_wave_check(x: &Point4) -> Result<f64> {
    Ok((pp_wave_pullback(x)? - example_metric(x)?).amax())
}
