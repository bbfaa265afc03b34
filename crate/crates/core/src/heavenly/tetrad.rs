use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix4, Vector4};

use super::forms::{symmetric_product, OneForm, Point4};
use crate::error::{Error, Result};

/// Frame metric `η_{12} = η_{34} = 1`, so that `ds² = 2e¹e² + 2e³e⁴`.
pub fn frame_metric() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, 1.0, 0.0,
    )
}

/// A null tetrad `e¹..e⁴` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetradFrame {
    /// Row `a` holds the coordinate components of `e^{a+1}`.
    forms: Matrix4<f64>,
    /// Columns are the dual frame vectors.
    duals: Matrix4<f64>,
    phi: Option<f64>,
}

impl TetradFrame {
    pub fn new(e: [OneForm; 4], point: &Point4) -> Result<Self> {
        let forms = Matrix4::from_rows(&e.map(|f| f.0.transpose()));
        let scale = forms.amax().max(1.0);
        if forms.determinant().abs() <= 1e-12 * scale.powi(4) {
            return Err(Error::SingularFrame { point: *point });
        }
        let duals = forms.try_inverse().ok_or(Error::SingularFrame { point: *point })?;
        Ok(Self {
            forms,
            duals,
            phi: None,
        })
    }

    fn with_phi(mut self, phi: f64) -> Self {
        self.phi = Some(phi);
        self
    }

    /// `e^a` for `a ∈ 1..=4`.
    pub fn e(&self, a: usize) -> OneForm {
        OneForm(self.forms.row(a - 1).transpose())
    }

    /// `Φ = cos q / cos(z cos q + p)` for the example tetrad.
    pub fn phi(&self) -> Option<f64> {
        self.phi
    }

    /// Rows are `e^a` in coordinate components.
    pub fn forms(&self) -> &Matrix4<f64> {
        &self.forms
    }

    /// Columns are the vectors dual to `e^a`.
    pub fn dual_vectors(&self) -> &Matrix4<f64> {
        &self.duals
    }

    /// Row `i` expresses `dx^i = Σ_a c_{ia} e^a`, coordinates ordered `(w, z, p, q)`.
    pub fn coordinate_differentials(&self) -> &Matrix4<f64> {
        &self.duals
    }

    /// `2 e¹⊙e² + 2 e³⊙e⁴`.
    pub fn metric(&self) -> Matrix4<f64> {
        (symmetric_product(&self.e(1), &self.e(2)) + symmetric_product(&self.e(3), &self.e(4))) * 2.0
    }

    /// Frame components `α_a = α(X_a)`.
    pub fn to_frame(&self, alpha: &OneForm) -> Vector4<f64> {
        self.duals.transpose() * alpha.0
    }

    /// Coordinate components of `Σ_a c_a e^a`.
    pub fn from_frame(&self, c: &Vector4<f64>) -> OneForm {
        OneForm(self.forms.transpose() * c)
    }
}

/// A tetrad depending on the point.
pub trait FrameField: Sync {
    fn frame(&self, x: &Point4) -> Result<TetradFrame>;
}

impl<F: Fn(&Point4) -> Result<TetradFrame> + Sync> FrameField for F {
    fn frame(&self, x: &Point4) -> Result<TetradFrame> {
        self(x)
    }
}

/// A tetrad with constant coordinate components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantFrame(pub [OneForm; 4]);

impl ConstantFrame {
    /// `e^a = dx^a`.
    pub fn coordinate() -> Self {
        Self([0, 1, 2, 3].map(OneForm::basis))
    }
}

impl FrameField for ConstantFrame {
    fn frame(&self, x: &Point4) -> Result<TetradFrame> {
        TetradFrame::new(self.0, x)
    }
}

/// Distance from the singular loci `cos q = 0` and `cos(z cos q + p) = 0`
/// below which the example tetrad is rejected.
pub const SINGULAR_MARGIN: f64 = 1e-12;

/// The null tetrad of the example heavenly metric.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExampleTetrad;

impl FrameField for ExampleTetrad {
    fn frame(&self, x: &Point4) -> Result<TetradFrame> {
        example_tetrad(x)
    }
}

/// `e¹ = Φ⁻¹[cos q dz − (z sin q dq − dp)]/√2`, `e² = (z sin q dq − dp)/√2`,
/// `e³ = −dq/√2`, `e⁴ = [cos q dw + Φ dq]/√2`.
pub fn example_tetrad(x: &Point4) -> Result<TetradFrame> {
    let [_, z, p, q] = *x;
    let (cq, sq) = (q.cos(), q.sin());
    let cpsi = (z * cq + p).cos();
    if cq.abs() <= SINGULAR_MARGIN || cpsi.abs() <= SINGULAR_MARGIN {
        return Err(Error::SingularFrame { point: *x });
    }
    let phi = cq / cpsi;
    let s = FRAC_1_SQRT_2;
    let e = [
        OneForm::new([0.0, s * cq / phi, s / phi, -s * z * sq / phi]),
        OneForm::new([0.0, 0.0, -s, s * z * sq]),
        OneForm::new([0.0, 0.0, 0.0, -s]),
        OneForm::new([s * cq, 0.0, 0.0, s * phi]),
    ];
    Ok(TetradFrame::new(e, x)?.with_phi(phi))
}
