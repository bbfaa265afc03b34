use num_complex::Complex64;
use serde::Serialize;

use super::connection::{cartan_first, example_connection, ConnectionForms};
use super::forms::{exterior_derivative, Point4, TwoForm};
use super::tetrad::{FrameField, SINGULAR_MARGIN};
use crate::error::{Error, Result};

/// Coefficients of a frame 2-form on the self-dual basis
/// `e⁴∧e²`, `½(e¹∧e² + e³∧e⁴)`, `e³∧e¹`.
pub fn undotted_coefficients(f: &TwoForm) -> [f64; 3] {
    let c = |a: usize, b: usize| f.component(a - 1, b - 1);
    [-c(2, 4), c(1, 2) + c(3, 4), -c(1, 3)]
}

/// Coefficients on the anti-self-dual basis
/// `e⁴∧e¹`, `½(−e¹∧e² + e³∧e⁴)`, `e³∧e²`.
pub fn dotted_coefficients(f: &TwoForm) -> [f64; 3] {
    let c = |a: usize, b: usize| f.component(a - 1, b - 1);
    [-c(1, 4), c(3, 4) - c(1, 2), -c(2, 3)]
}

/// Curvature 2-forms `Ω_{ab} = dΓ_{ab} + Γ_{ac} ∧ Γ^c_b`, in frame
/// components, indexed by 0-based `(a, b)`.
pub type Curvature = [[TwoForm; 4]; 4];

/// `Ω_{ab}` from a connection field, `dΓ` by central differences of step `h`.
pub fn curvature_from_connection(
    connection: impl Fn(&Point4) -> Result<ConnectionForms>,
    x: &Point4,
    h: f64,
) -> Result<Curvature> {
    let here = connection(x)?;
    let duals = *here.frame().dual_vectors();
    let mut omega = [[TwoForm::zero(); 4]; 4];
    for a in 1..=4 {
        for b in (a + 1)..=4 {
            let mut f = exterior_derivative(|y| connection(y).map(|c| c.gamma_form(a, b)), x, h)?;
            for c in 1..=4 {
                f = f + here.gamma_form(a, c).wedge(&here.frame().from_frame(&here.mixed(c, b)));
            }
            let f = f.in_basis(&duals);
            omega[a - 1][b - 1] = f;
            omega[b - 1][a - 1] = -1.0 * f;
        }
    }
    Ok(omega)
}

/// Spinor decomposition of the curvature of a heavenly tetrad.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    /// Twice the `e³∧e¹` coefficient of `Ω₃₁`.
    pub c1_fd: f64,
    /// Largest self-dual coefficient of the undotted curvature other than the
    /// one carrying `C⁽¹⁾`.
    pub undotted_other_max: f64,
    /// Largest anti-self-dual coefficient of the undotted curvature (the
    /// traceless Ricci part).
    pub ricci_max: f64,
    /// Largest coefficient of the dotted curvature.
    pub dotted_max: f64,
}

impl CurvatureReport {
    pub fn from_curvature(omega: &Curvature) -> Self {
        let at = |a: usize, b: usize| omega[a - 1][b - 1];
        let undotted = [at(4, 2), 0.5 * (at(1, 2) + at(3, 4)), at(3, 1)];
        let dotted = [at(4, 1), 0.5 * (at(3, 4) - at(1, 2)), at(3, 2)];
        let max = |it: &mut dyn Iterator<Item = f64>| it.map(f64::abs).fold(0.0, f64::max);
        let self_dual: Vec<[f64; 3]> = undotted.iter().map(undotted_coefficients).collect();
        let c1_fd = 2.0 * self_dual[2][2];
        let undotted_other_max = max(&mut self_dual.iter().enumerate().flat_map(|(i, c)| {
            c.iter()
                .enumerate()
                .filter(move |&(j, _)| (i, j) != (2, 2))
                .map(|(_, v)| *v)
        }));
        let ricci_max = max(&mut undotted.iter().flat_map(dotted_coefficients));
        let dotted_max = max(&mut dotted
            .iter()
            .flat_map(|f| undotted_coefficients(f).into_iter().chain(dotted_coefficients(f))));
        Self {
            c1_fd,
            undotted_other_max,
            ricci_max,
            dotted_max,
        }
    }

    /// Type `[4] × [−]`: `C⁽¹⁾` is the only component above `tol`.
    pub fn is_type_n_times_zero(&self, tol: f64) -> bool {
        self.c1_fd.abs() > tol && self.undotted_other_max <= tol && self.ricci_max <= tol && self.dotted_max <= tol
    }
}

/// Curvature of a tetrad field, connection and its derivative both by FD of
/// step `h`.
pub fn curvature_fd(field: &impl FrameField, x: &Point4, h: f64) -> Result<CurvatureReport> {
    let omega = curvature_from_connection(|y| cartan_first(field, y, h).map(|c| c.connection), x, h)?;
    Ok(CurvatureReport::from_curvature(&omega))
}

/// Curvature of the example from its closed-form connection.
pub fn example_curvature(x: &Point4, h: f64) -> Result<CurvatureReport> {
    Ok(CurvatureReport::from_curvature(&curvature_from_connection(
        example_connection,
        x,
        h,
    )?))
}

/// `C⁽¹⁾ = 4Φ[(1 + 2 sin² q)/cos² q + (1 + 2 sin² ψ)/cos² ψ · Φ²]`,
/// `ψ = z cos q + p`.
pub fn weyl_c1(x: &Point4) -> Result<Complex64> {
    let [_, z, p, q] = *x;
    let cq = q.cos();
    let psi = z * cq + p;
    let cpsi = psi.cos();
    if cq.abs() <= SINGULAR_MARGIN || cpsi.abs() <= SINGULAR_MARGIN {
        return Err(Error::SingularFrame { point: *x });
    }
    let phi = cq / cpsi;
    let sq2 = q.sin().powi(2);
    let spsi2 = psi.sin().powi(2);
    let c1 = 4.0 * phi * ((1.0 + 2.0 * sq2) / (cq * cq) + (1.0 + 2.0 * spsi2) / (cpsi * cpsi) * phi * phi);
    Ok(Complex64::new(c1, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heavenly::tetrad::{ConstantFrame, ExampleTetrad};

    #[test]
    fn origin_value() {
        assert_eq!(weyl_c1(&[0.0; 4]).unwrap(), Complex64::new(8.0, 0.0));
    }

    #[test]
    fn flat_frame_is_flat() {
        let r = curvature_fd(&ConstantFrame::coordinate(), &[0.1, 0.2, 0.3, 0.4], 1e-3).unwrap();
        assert_eq!(r.c1_fd, 0.0);
        assert!(!r.is_type_n_times_zero(1e-6));
    }

    #[test]
    fn closed_form_connection_curvature() {
        let x = [0.3, 0.2, 0.1, 0.4];
        let r = example_curvature(&x, 1e-4).unwrap();
        let c1 = weyl_c1(&x).unwrap().re;
        assert!((r.c1_fd - c1).abs() <= 1e-6 * c1, "{} vs {c1}", r.c1_fd);
        assert!(r.is_type_n_times_zero(1e-6), "{r:?}");
    }

    #[test]
    fn fd_connection_curvature() {
        let x = [-0.2, 0.5, 0.3, -0.6];
        let r = curvature_fd(&ExampleTetrad, &x, 1e-3).unwrap();
        let c1 = weyl_c1(&x).unwrap().re;
        assert!((r.c1_fd - c1).abs() <= 1e-4 * c1.abs());
    }
}
