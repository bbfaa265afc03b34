use rayon::prelude::*;

use super::kahler::{KahlerBackground, KahlerPoint};
use crate::error::{Error, Result};
use crate::fd::{d1, d2, d_mixed, ResidualField};
use crate::fourier::{Bracket, FourierField};
use crate::grid::GriddedFourierField;

fn require_dim(field: &GriddedFourierField, dim: usize) -> Result<()> {
    if field.grid().dim() != dim {
        return Err(Error::InvalidGrid(format!(
            "expected a {dim}-dimensional grid, got {}",
            field.grid().dim()
        )));
    }
    field.grid().require_stencil(3)
}

/// Evaluates `residual` at every interior point, reporting `Σ|R_m|`.
fn sweep(field: &GriddedFourierField, residual: impl Fn(usize) -> FourierField + Sync) -> ResidualField {
    let points = field.grid().interior(1);
    let values = points.par_iter().map(|&p| residual(p).l1_norm()).collect();
    ResidualField::new(field.grid().clone(), points, values)
}

fn hp_residual(field: &GriddedFourierField, bracket: Bracket) -> ResidualField {
    let (g, v) = (field.grid(), field.values());
    sweep(field, |p| {
        let tw = d1(g, v, p, 0);
        let tz = d1(g, v, p, 1);
        let b = bracket.apply(&tw, &tz);
        FourierField::linear_combination(&[(1.0, &d2(g, v, p, 0)), (1.0, &d2(g, v, p, 1)), (1.0, &b)])
    })
}

/// `∂²_w Θ + ∂²_z Θ + {∂_w Θ, ∂_z Θ}_ħ` on a `(w, z)` grid.
pub fn residual_moyal_hp(field: &GriddedFourierField) -> Result<ResidualField> {
    require_dim(field, 2)?;
    let hbar = field.moyal_hbar()?;
    Ok(hp_residual(field, Bracket::Moyal { hbar }))
}

/// `∂²_w θ + ∂²_z θ + {∂_w θ, ∂_z θ}` with the Poisson bracket.
pub fn residual_hp_classical(field: &GriddedFourierField) -> Result<ResidualField> {
    require_dim(field, 2)?;
    Ok(hp_residual(field, Bracket::Poisson))
}

/// `∂_w ∂_w̃ Θ + ∂_z ∂_z̃ Θ + {∂_w Θ, ∂_z Θ}` on a `(w, z, w̃, z̃)` grid; a
/// field with `ħ = 0` uses the Poisson bracket.
pub fn residual_me_flat(field: &GriddedFourierField) -> Result<ResidualField> {
    require_dim(field, 4)?;
    let bracket = Bracket::for_hbar(field.hbar())?;
    let (g, v) = (field.grid(), field.values());
    Ok(sweep(field, |p| {
        let b = bracket.apply(&d1(g, v, p, 0), &d1(g, v, p, 1));
        FourierField::linear_combination(&[
            (1.0, &d_mixed(g, v, p, 0, 2)),
            (1.0, &d_mixed(g, v, p, 1, 3)),
            (1.0, &b),
        ])
    }))
}

/// Pointwise coefficients of the master equation in `(y, ỹ, z, z̃)`.
#[derive(Clone, Copy, Debug)]
struct KahlerCoefficients {
    /// `1 / g^{w̃w}`.
    inv_ww: f64,
    zz: f64,
    zw: f64,
    wz: f64,
    /// `1 / (G g^{w̃w})`.
    bracket: f64,
}

fn kahler_coefficients(bg: &KahlerBackground, y: &[f64]) -> Result<KahlerCoefficients> {
    let (w, wt) = (0.5 * (y[0] + y[1]), 0.5 * (y[0] - y[1]));
    let x: KahlerPoint = [w, y[2], wt, y[3]];
    let inv = bg.inverse_metric_at(&x)?;
    let g_ww = inv[(0, 0)];
    if g_ww.abs() < 1e-12 {
        return Err(Error::SingularMetric {
            point: x,
            reason: "g^{w̃w} vanishes".into(),
        });
    }
    let big_g = bg.g_factor(w, y[2]);
    if big_g == 0.0 || !big_g.is_finite() {
        return Err(Error::SingularMetric {
            point: x,
            reason: format!("G(w, z) = {big_g}"),
        });
    }
    Ok(KahlerCoefficients {
        inv_ww: 1.0 / g_ww,
        zz: inv[(1, 1)],
        zw: inv[(1, 0)],
        wz: inv[(0, 1)],
        bracket: 1.0 / (big_g * g_ww),
    })
}

/// Master-equation residual on a Kähler background in the coordinates
/// `y = w + w̃`, `ỹ = w − w̃`, grid axes ordered `(y, ỹ, z, z̃)`:
///
/// `Θ_yy − Θ_ỹỹ + (g^{z̃z} Θ_zz̃ + g^{z̃w}(Θ_yz̃ + Θ_ỹz̃) + g^{w̃z}(Θ_zy − Θ_zỹ)) / g^{w̃w}
///  + {Θ_y + Θ_ỹ, Θ_z} / (G g^{w̃w})`.
pub fn residual_me_kahler(field: &GriddedFourierField, bg: &KahlerBackground) -> Result<ResidualField> {
    require_dim(field, 4)?;
    let bracket = Bracket::for_hbar(field.hbar())?;
    let (g, v) = (field.grid(), field.values());
    let points = g.interior(1);
    let coeffs = points
        .iter()
        .map(|&p| kahler_coefficients(bg, &g.coords(p)))
        .collect::<Result<Vec<_>>>()?;
    let values = points
        .par_iter()
        .zip(&coeffs)
        .map(|(&p, c)| {
            let ty = d1(g, v, p, 0);
            let tyt = d1(g, v, p, 1);
            let tz = d1(g, v, p, 2);
            let sum = FourierField::linear_combination(&[(1.0, &ty), (1.0, &tyt)]);
            let b = bracket.apply(&sum, &tz);
            FourierField::linear_combination(&[
                (1.0, &d2(g, v, p, 0)),
                (-1.0, &d2(g, v, p, 1)),
                (c.inv_ww * c.zz, &d_mixed(g, v, p, 2, 3)),
                (c.inv_ww * c.zw, &d_mixed(g, v, p, 0, 3)),
                (c.inv_ww * c.zw, &d_mixed(g, v, p, 1, 3)),
                (c.inv_ww * c.wz, &d_mixed(g, v, p, 2, 0)),
                (-c.inv_ww * c.wz, &d_mixed(g, v, p, 2, 1)),
                (c.bracket, &b),
            ])
            .l1_norm()
        })
        .collect();
    Ok(ResidualField::new(g.clone(), points, values))
}
