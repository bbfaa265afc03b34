use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::coefficients::{ChiralCoefficients, CoefficientKind, DEFAULT_Z_RANGE};
use crate::error::{Error, Result};
use crate::fd::{d1, d2, ResidualField};
use crate::fourier::ModeVector;
use crate::grid::SpacetimeGrid;
use crate::matrix::{anti_hermitian_defect, commutator, CMatrix};
use crate::sine_basis::SineBasis;

/// Parity-resolved evaluation of `ϑ_N(w, z)`.
#[derive(Clone, Debug)]
pub struct ChiralEvaluator {
    basis: SineBasis,
    coefficients: ChiralCoefficients,
}

impl ChiralEvaluator {
    /// Evaluator with truncations certified for `|z| ≤ z_range`.
    pub fn new(n: usize, z_range: f64) -> Result<Self> {
        Ok(Self {
            basis: SineBasis::new(n)?,
            coefficients: ChiralCoefficients::new(n, z_range.abs().max(DEFAULT_Z_RANGE))?,
        })
    }

    pub fn n(&self) -> usize {
        self.basis.dim()
    }

    pub fn coefficients(&self) -> &ChiralCoefficients {
        &self.coefficients
    }

    fn l(&self, a: usize, b: usize) -> &CMatrix {
        self.basis.window(ModeVector::new(a as i64, b as i64))
    }

    /// `½(L_x + s L_y)`.
    fn cos_pair(&self, x: (usize, usize), s: f64, y: (usize, usize)) -> CMatrix {
        (self.l(x.0, x.1) + self.l(y.0, y.1) * Complex64::new(s, 0.0)) * Complex64::new(0.5, 0.0)
    }

    /// `(1/2i)(L_x + s L_y)`.
    fn sin_pair(&self, x: (usize, usize), s: f64, y: (usize, usize)) -> CMatrix {
        (self.l(x.0, x.1) + self.l(y.0, y.1) * Complex64::new(s, 0.0)) * Complex64::new(0.0, -0.5)
    }

    /// `ϑ_N(w, z)`.
    pub fn evaluate(&self, w: f64, z: f64) -> CMatrix {
        let n = self.n();
        let top = n - 1;
        let values = self.coefficients.values(z);
        let coeff = |kind: CoefficientKind, nu: usize| {
            values
                .iter()
                .find(|&&(k, v, _)| k == kind && v == nu)
                .map(|&(_, _, c)| c)
                .expect("coefficient table covers the display")
        };
        let c = |x: f64| Complex64::new(x, 0.0);
        let even = n % 2 == 0;
        let mut out = self.cos_pair((1, 1), if even { 1.0 } else { -1.0 }, (top, top)) * c(PI / 2.0)
            - self.sin_pair((0, 1), 1.0, (0, top)) * c(w);
        if even {
            for nu in 1..=n / 2 {
                let m = 2 * nu - 1;
                let term = self.cos_pair((1, m), 1.0, (top, n - m)) + self.cos_pair((top, m), 1.0, (1, n - m));
                out += term * c(coeff(CoefficientKind::AOdd, nu));
            }
            for nu in 1..n / 2 {
                let m = 2 * nu;
                let term = self.sin_pair((1, m), 1.0, (top, n - m)) + self.sin_pair((top, m), 1.0, (1, n - m));
                out += term * c(coeff(CoefficientKind::AEven, nu));
            }
            out += self.sin_pair((1, 0), 1.0, (top, 0)) * c(coeff(CoefficientKind::A0, 0));
        } else {
            for nu in 1..=(n - 1) / 2 {
                let (mo, me) = (2 * nu - 1, 2 * nu);
                let a_odd = self.cos_pair((1, mo), -1.0, (top, n - mo)) + self.cos_pair((top, mo), 1.0, (1, n - mo));
                let a_even = self.cos_pair((1, me), 1.0, (top, n - me)) + self.cos_pair((1, n - me), -1.0, (top, me));
                let b_odd = self.sin_pair((1, mo), 1.0, (top, n - mo)) + self.sin_pair((1, n - mo), -1.0, (top, mo));
                let b_even = self.sin_pair((1, me), -1.0, (top, n - me)) + self.sin_pair((top, me), 1.0, (1, n - me));
                out += a_odd * c(coeff(CoefficientKind::AOdd, nu))
                    + a_even * c(coeff(CoefficientKind::AEven, nu))
                    + b_odd * c(coeff(CoefficientKind::BOdd, nu))
                    + b_even * c(coeff(CoefficientKind::BEven, nu));
            }
            out += self.cos_pair((1, 0), -1.0, (top, 0)) * c(2.0 * coeff(CoefficientKind::A0, 0))
                + self.sin_pair((1, 0), 1.0, (top, 0)) * c(coeff(CoefficientKind::B0, 0));
        }
        out
    }
}

/// `ϑ_N(w, z)` from the parity-resolved display.
pub fn chiral_field(n: usize, w: f64, z: f64) -> Result<CMatrix> {
    Ok(ChiralEvaluator::new(n, z)?.evaluate(w, z))
}

/// Pauli matrices `σ₁, σ₂, σ₃`.
pub fn pauli() -> [CMatrix; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ]
}

/// `ϑ = (1/2i) cos(2z/π) σ₁ + (w/πi) σ₂ + (1/2i) sin(2z/π) σ₃`.
pub fn pauli_closed_form(w: f64, z: f64) -> CMatrix {
    let [s1, s2, s3] = pauli();
    let x = 2.0 * z / PI;
    let inv_i = Complex64::new(0.0, -1.0);
    s1 * (inv_i * 0.5 * x.cos()) + s2 * (inv_i * (w / PI)) + s3 * (inv_i * 0.5 * x.sin())
}

/// Matrix values of a chiral field on a `(w, z)` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralField {
    n: usize,
    grid: SpacetimeGrid,
    values: Vec<CMatrix>,
}

impl ChiralField {
    pub fn new(n: usize, grid: SpacetimeGrid, values: Vec<CMatrix>) -> Result<Self> {
        if grid.dim() != 2 {
            return Err(Error::InvalidGrid(format!(
                "chiral fields live on a (w, z) plane, got {} axes",
                grid.dim()
            )));
        }
        if values.len() != grid.len() {
            return Err(Error::GridShapeMismatch {
                points: grid.len(),
                values: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| v.nrows() != n || v.ncols() != n) {
            return Err(Error::InvalidInput(format!(
                "expected {n}x{n} matrices, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        Ok(Self { n, grid, values })
    }

    /// Samples `f(w, z)` at every grid point.
    pub fn from_fn(n: usize, grid: SpacetimeGrid, f: impl Fn(f64, f64) -> CMatrix + Sync) -> Result<Self> {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let x = grid.coords(i);
                f(x[0], x[1])
            })
            .collect();
        Self::new(n, grid, values)
    }

    /// `ϑ_N` from [`chiral_field`] at every grid point.
    pub fn sample(n: usize, grid: SpacetimeGrid) -> Result<Self> {
        let z_range = grid.axis(1).start().abs().max(grid.axis(1).end().abs());
        let eval = ChiralEvaluator::new(n, z_range)?;
        Self::from_fn(n, grid, |w, z| eval.evaluate(w, z))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    /// `max ‖ϑ + ϑ†‖_max` over the grid.
    pub fn anti_hermitian_defect(&self) -> f64 {
        self.values.iter().map(anti_hermitian_defect).fold(0.0, f64::max)
    }

    /// `max |tr ϑ|` over the grid.
    pub fn trace_defect(&self) -> f64 {
        self.values.iter().map(|v| v.trace().norm()).fold(0.0, f64::max)
    }
}

fn require_plane(field: &ChiralField, stencil: usize) -> Result<()> {
    field.grid.require_stencil(stencil)
}

/// `‖∂²_w ϑ + ∂²_z ϑ + [∂_w ϑ, ∂_z ϑ]‖_F` at every interior point.
pub fn residual_chiral(field: &ChiralField) -> Result<ResidualField> {
    require_plane(field, 3)?;
    let (g, v) = (&field.grid, &field.values);
    let points = g.interior(1);
    let values = points
        .par_iter()
        .map(|&p| {
            let r = d2(g, v, p, 0) + d2(g, v, p, 1) + commutator(&d1(g, v, p, 0), &d1(g, v, p, 1));
            r.norm()
        })
        .collect();
    Ok(ResidualField::new(g.clone(), points, values))
}

/// Residuals of the first-order system with `A_w = −∂_z ϑ`, `A_z = ∂_w ϑ`:
/// `∂_w A_z − ∂_z A_w + [A_w, A_z]` and `∂_w A_w + ∂_z A_z`, each by nested
/// central differences.
pub fn chiral_system_check(field: &ChiralField) -> Result<(ResidualField, ResidualField)> {
    require_plane(field, 5)?;
    let (g, v) = (&field.grid, &field.values);
    let zero = CMatrix::zeros(field.n, field.n);
    let inner = g.interior(1);
    let mut a_w = vec![zero.clone(); g.len()];
    let mut a_z = vec![zero; g.len()];
    let derived: Vec<(usize, CMatrix, CMatrix)> = inner
        .par_iter()
        .map(|&p| (p, -d1(g, v, p, 1), d1(g, v, p, 0)))
        .collect();
    for (p, aw, az) in derived {
        a_w[p] = aw;
        a_z[p] = az;
    }
    let points = g.interior(2);
    let (first, second): (Vec<f64>, Vec<f64>) = points
        .par_iter()
        .map(|&p| {
            let curl = d1(g, &a_z, p, 0) - d1(g, &a_w, p, 1) + commutator(&a_w[p], &a_z[p]);
            let div = d1(g, &a_w, p, 0) + d1(g, &a_z, p, 1);
            (curl.norm(), div.norm())
        })
        .unzip();
    Ok((
        ResidualField::new(g.clone(), points.clone(), first),
        ResidualField::new(g.clone(), points, second),
    ))
}
