use nalgebra::Matrix4;
use rayon::prelude::*;

use super::forms::{symmetric_product, OneForm, Point4};
use crate::error::{Error, Result};

/// Smallest admissible `|{θ_w, θ_z}|` and `|det g|`.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// The mixed second derivatives entering the heavenly metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HpDerivatives {
    pub wp: f64,
    pub wq: f64,
    pub zp: f64,
    pub zq: f64,
}

impl HpDerivatives {
    /// `{θ_w, θ_z} = θ_wq θ_zp − θ_wp θ_zq`.
    pub fn poisson_bracket(&self) -> f64 {
        self.wq * self.zp - self.wp * self.zq
    }
}

/// A classical Husain-Park potential `θ(w, z, p, q)`.
pub trait HpPotential: Sync {
    fn value(&self, x: &Point4) -> f64;

    /// Step of the fallback finite differences.
    fn fd_step(&self) -> f64 {
        1e-4
    }

    /// Mixed derivatives; by default 4-point central differences of
    /// [`value`](Self::value).
    fn derivatives(&self, x: &Point4) -> HpDerivatives {
        let h = self.fd_step();
        let mixed = |a: usize, b: usize| {
            let at = |sa: f64, sb: f64| {
                let mut y = *x;
                y[a] += sa * h;
                y[b] += sb * h;
                self.value(&y)
            };
            (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h)
        };
        HpDerivatives {
            wp: mixed(0, 2),
            wq: mixed(0, 3),
            zp: mixed(1, 2),
            zq: mixed(1, 3),
        }
    }
}

impl<F: Fn(&Point4) -> f64 + Sync> HpPotential for F {
    fn value(&self, x: &Point4) -> f64 {
        self(x)
    }
}

/// The classical limit of the example solution,
/// `θ = (π/2) cos(p+q) − w sin q + (cos(z cos q + p) − cos p) / cos q`,
/// with closed-form derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExampleTheta;

impl HpPotential for ExampleTheta {
    fn value(&self, x: &Point4) -> f64 {
        crate::me_solver::example_solution(0.0)
            .expect("the classical example is always defined")
            .evaluate_classical(x[0], x[1], x[2], x[3])
    }

    fn derivatives(&self, x: &Point4) -> HpDerivatives {
        let [_, z, p, q] = *x;
        let cos_psi = (z * q.cos() + p).cos();
        HpDerivatives {
            wp: 0.0,
            wq: -q.cos(),
            zp: -cos_psi,
            zq: z * q.sin() * cos_psi,
        }
    }
}

/// `ds² = dw·A + dz·C − (A² + C²) / {θ_w, θ_z}` with
/// `A = θ_pw dp + θ_qw dq` and `C = θ_pz dp + θ_qz dq`.
pub fn hp_metric(theta: &impl HpPotential, x: &Point4) -> Result<Matrix4<f64>> {
    let d = theta.derivatives(x);
    let bracket = d.poisson_bracket();
    if bracket.abs() <= DEGENERACY_TOL || bracket.is_nan() {
        return Err(Error::DegenerateMetric {
            point: *x,
            reason: format!("{{θ_w, θ_z}} = {bracket:e}"),
        });
    }
    let a = OneForm::new([0.0, 0.0, d.wp, d.wq]);
    let c = OneForm::new([0.0, 0.0, d.zp, d.zq]);
    let g = symmetric_product(&OneForm::basis(0), &a) + symmetric_product(&OneForm::basis(1), &c)
        - (symmetric_product(&a, &a) + symmetric_product(&c, &c)) / bracket;
    check_nondegenerate(g, x)
}

fn check_nondegenerate(g: Matrix4<f64>, x: &Point4) -> Result<Matrix4<f64>> {
    let det = g.determinant();
    if det.abs() <= DEGENERACY_TOL || det.is_nan() {
        return Err(Error::DegenerateMetric {
            point: *x,
            reason: format!("det g = {det:e}"),
        });
    }
    Ok(g)
}

/// The line element of the example heavenly space,
/// `−cos q dw dq + cos ψ (z sin q dq − dp) dz
///  − [cos² q dq² + cos² ψ (z sin q dq − dp)²] / (cos q cos ψ)`, `ψ = z cos q + p`.
pub fn example_metric(x: &Point4) -> Result<Matrix4<f64>> {
    let [_, z, p, q] = *x;
    let cq = q.cos();
    let cpsi = (z * cq + p).cos();
    let denom = cq * cpsi;
    if denom.abs() <= DEGENERACY_TOL || denom.is_nan() {
        return Err(Error::DegenerateMetric {
            point: *x,
            reason: format!("cos q cos ψ = {denom:e}"),
        });
    }
    let dq = OneForm::basis(3);
    let s = OneForm::new([0.0, 0.0, -1.0, z * q.sin()]);
    let g = -cq * symmetric_product(&OneForm::basis(0), &dq) + cpsi * symmetric_product(&s, &OneForm::basis(1))
        - (cq * cq * symmetric_product(&dq, &dq) + cpsi * cpsi * symmetric_product(&s, &s)) / denom;
    check_nondegenerate(g, x)
}

/// A heavenly metric sampled at a list of points.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    points: Vec<Point4>,
    components: Vec<Matrix4<f64>>,
}

impl MetricField {
    /// Evaluates [`hp_metric`] at every point; the first degenerate point in
    /// input order is reported.
    pub fn sample(theta: &impl HpPotential, points: Vec<Point4>) -> Result<Self> {
        let components = points
            .par_iter()
            .map(|x| hp_metric(theta, x))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { points, components })
    }

    pub fn points(&self) -> &[Point4] {
        &self.points
    }

    pub fn components(&self) -> &[Matrix4<f64>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GENERIC: Point4 = [0.3, 0.2, 0.1, 0.4];

    #[test]
    fn example_metric_from_potential() {
        let g = hp_metric(&ExampleTheta, &GENERIC).unwrap();
        assert_eq!(g, g.transpose());
        assert!((g - example_metric(&GENERIC).unwrap()).amax() < 1e-12);
    }

    #[test]
    fn finite_difference_fallback_agrees() {
        let theta = |x: &Point4| ExampleTheta.value(x);
        let fd = hp_metric(&theta, &GENERIC).unwrap();
        assert!((fd - example_metric(&GENERIC).unwrap()).amax() < 1e-6);
    }

    #[test]
    fn degenerate_denominator_is_reported() {
        let x = [0.0, 0.1, 0.2, std::f64::consts::FRAC_PI_2];
        assert!(matches!(
            hp_metric(&ExampleTheta, &x),
            Err(Error::DegenerateMetric { .. })
        ));
        assert!(matches!(example_metric(&x), Err(Error::DegenerateMetric { .. })));
    }

    #[test]
    fn metric_field_reports_first_bad_point() {
        let bad = [0.0, 0.0, 0.0, std::f64::consts::FRAC_PI_2];
        let err = MetricField::sample(&ExampleTheta, vec![GENERIC, bad, bad]).unwrap_err();
        assert!(matches!(err, Error::DegenerateMetric { point, .. } if point == bad));
        let ok = MetricField::sample(&ExampleTheta, vec![GENERIC; 3]).unwrap();
        assert_eq!(ok.len(), 3);
    }
}
