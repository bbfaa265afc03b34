//! Second-order central finite differences on spacetime grids, and the
//! residual summaries built from them.

use serde::Serialize;

use crate::fourier::FourierField;
use crate::grid::SpacetimeGrid;
use crate::matrix::CMatrix;

/// Values that finite-difference stencils can combine linearly.
pub trait GridValue: Sized {
    fn combine(terms: &[(f64, &Self)]) -> Self;
}

impl GridValue for f64 {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        terms.iter().map(|&(a, x)| a * x).sum()
    }
}

impl GridValue for FourierField {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        FourierField::linear_combination(terms)
    }
}

impl GridValue for CMatrix {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let (first, rest) = terms.split_first().expect("empty stencil");
        let mut acc = first.1 * num_complex::Complex64::new(first.0, 0.0);
        for &(a, x) in rest {
            acc += x * num_complex::Complex64::new(a, 0.0);
        }
        acc
    }
}

fn shifted(grid: &SpacetimeGrid, flat: usize, axis: usize, offset: isize) -> usize {
    let stride = grid.stride(axis) as isize;
    (flat as isize + offset * stride) as usize
}

/// `∂_axis` at an interior point.
pub fn d1<T: GridValue>(grid: &SpacetimeGrid, values: &[T], flat: usize, axis: usize) -> T {
    let h = grid.axis(axis).step();
    let up = &values[shifted(grid, flat, axis, 1)];
    let dn = &values[shifted(grid, flat, axis, -1)];
    T::combine(&[(0.5 / h, up), (-0.5 / h, dn)])
}

/// `∂²_axis` at an interior point.
pub fn d2<T: GridValue>(grid: &SpacetimeGrid, values: &[T], flat: usize, axis: usize) -> T {
    let h = grid.axis(axis).step();
    let up = &values[shifted(grid, flat, axis, 1)];
    let dn = &values[shifted(grid, flat, axis, -1)];
    let inv = 1.0 / (h * h);
    T::combine(&[(inv, up), (-2.0 * inv, &values[flat]), (inv, dn)])
}

/// `∂_a ∂_b` with the four-point stencil; falls back to [`d2`] when `a == b`.
pub fn d_mixed<T: GridValue>(grid: &SpacetimeGrid, values: &[T], flat: usize, a: usize, b: usize) -> T {
    if a == b {
        return d2(grid, values, flat, a);
    }
    let s = 0.25 / (grid.axis(a).step() * grid.axis(b).step());
    let at = |da: isize, db: isize| &values[shifted(grid, shifted(grid, flat, a, da), b, db)];
    T::combine(&[(s, at(1, 1)), (-s, at(1, -1)), (-s, at(-1, 1)), (s, at(-1, -1))])
}

/// Scalar residual magnitudes at the interior points of a grid.
#[derive(Clone, Debug)]
pub struct ResidualField {
    grid: SpacetimeGrid,
    points: Vec<usize>,
    values: Vec<f64>,
}

impl ResidualField {
    pub fn new(grid: SpacetimeGrid, points: Vec<usize>, values: Vec<f64>) -> Self {
        assert_eq!(points.len(), values.len());
        Self { grid, points, values }
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    /// Flat grid indices the residual was evaluated at.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Discrete `L²` norm `sqrt(Σ r² ΔV)`.
    pub fn l2_norm(&self) -> f64 {
        let cell: f64 = self.grid.axes().iter().map(|a| a.step()).product();
        (self.values.iter().map(|r| r * r).sum::<f64>() * cell).sqrt()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    /// Residual at the point with these coordinates, if it was evaluated there.
    pub fn value_at(&self, coords: &[f64]) -> Option<f64> {
        let flat = self.grid.locate(coords)?;
        self.points.binary_search(&flat).ok().map(|i| self.values[i])
    }

    /// Residual restricted to the points another grid's residual was evaluated at.
    pub fn restricted_to(&self, other: &ResidualField) -> ResidualField {
        let mut points = Vec::new();
        let mut values = Vec::new();
        for &p in &other.points {
            if let Some(v) = self.value_at(&other.grid.coords(p)) {
                points.push(p);
                values.push(v);
            }
        }
        ResidualField::new(other.grid.clone(), points, values)
    }

    pub fn summary(&self) -> ResidualSummary {
        ResidualSummary {
            sup_norm: self.sup_norm(),
            l2_norm: self.l2_norm(),
            h: self.spacing(),
            richardson_order: None,
        }
    }
}

/// Serializable residual summary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub sup_norm: f64,
    pub l2_norm: f64,
    pub h: f64,
    pub richardson_order: Option<f64>,
}

/// Observed order of a refinement pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub coarse: ResidualSummary,
    pub fine: ResidualSummary,
    /// `log2(sup_h / sup_{h/2})` over the coarse interior points.
    pub order: f64,
    /// `C` in `sup_h ≈ C h^2`.
    pub error_constant: f64,
}

/// Compares a residual with its `h/2` refinement on the coarse interior points.
pub fn convergence_order(coarse: &ResidualField, fine: &ResidualField) -> ConvergenceReport {
    let common = fine.restricted_to(coarse);
    let sup_c = coarse.sup_norm();
    let sup_f = common.sup_norm();
    let order = (sup_c / sup_f).log2();
    let h = coarse.spacing();
    ConvergenceReport {
        coarse: ResidualSummary {
            richardson_order: Some(order),
            ..coarse.summary()
        },
        fine: ResidualSummary {
            richardson_order: Some(order),
            ..fine.summary()
        },
        order,
        error_constant: sup_c / (h * h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformAxis;

    fn grid(n: usize, h: f64) -> SpacetimeGrid {
        SpacetimeGrid::plane(
            UniformAxis::new(0.1, h, n).unwrap(),
            UniformAxis::new(-0.2, h, n).unwrap(),
        )
    }

    fn sample(g: &SpacetimeGrid, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..g.len())
            .map(|i| {
                let c = g.coords(i);
                f(c[0], c[1])
            })
            .collect()
    }

    #[test]
    fn stencils_exact_on_quadratics() {
        let g = grid(5, 0.3);
        let v = sample(&g, |x, y| 1.0 + 2.0 * x - y + 3.0 * x * x - 0.5 * x * y + y * y);
        let p = g.flat_index(&[2, 2]);
        let (x, y) = (g.coords(p)[0], g.coords(p)[1]);
        assert!((d1(&g, &v, p, 0) - (2.0 + 6.0 * x - 0.5 * y)).abs() < 1e-13);
        assert!((d1(&g, &v, p, 1) - (-1.0 - 0.5 * x + 2.0 * y)).abs() < 1e-13);
        assert!((d2(&g, &v, p, 0) - 6.0).abs() < 1e-12);
        assert!((d2(&g, &v, p, 1) - 2.0).abs() < 1e-12);
        assert!((d_mixed(&g, &v, p, 0, 1) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn second_order_convergence_of_sine() {
        let err = |h: f64| {
            let g = SpacetimeGrid::plane(
                UniformAxis::new(0.3 - 2.0 * h, h, 5).unwrap(),
                UniformAxis::new(0.4 - 2.0 * h, h, 5).unwrap(),
            );
            let v = sample(&g, |x, y| (x + 2.0 * y).sin());
            let p = g.flat_index(&[2, 2]);
            let c = g.coords(p);
            (d2(&g, &v, p, 1) + 4.0 * (c[0] + 2.0 * c[1]).sin()).abs()
        };
        let order = (err(0.02) / err(0.01)).log2();
        assert!((order - 2.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn matrix_values_combine() {
        let a = CMatrix::identity(2, 2);
        let b = CMatrix::identity(2, 2) * num_complex::Complex64::new(0.0, 1.0);
        let c = CMatrix::combine(&[(2.0, &a), (-1.0, &b)]);
        assert_eq!(c[(0, 0)], num_complex::Complex64::new(2.0, -1.0));
    }

    #[test]
    fn convergence_order_of_synthetic_residual() {
        let g = grid(9, 0.1);
        let fine_g = g.refined();
        let mk = |g: &SpacetimeGrid| {
            let pts = g.interior(1);
            let h = g.spacing();
            let vals = pts.iter().map(|&p| h * h * (1.0 + g.coords(p)[0])).collect();
            ResidualField::new(g.clone(), pts, vals)
        };
        let report = convergence_order(&mk(&g), &mk(&fine_g));
        assert!((report.order - 2.0).abs() < 1e-12);
        assert!((report.error_constant - (1.0 + 0.1 + 0.7)).abs() < 1e-12);
    }
}
