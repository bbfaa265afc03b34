use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};

/// A point `(w, z, p, q)` of the single chart.
pub type Point4 = [f64; 4];

/// Chart labels in component order.
pub const COORDINATES: [&str; 4] = ["w", "z", "p", "q"];

/// A 1-form `α = α_i dx^i`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OneForm(pub Vector4<f64>);

impl OneForm {
    pub fn new(components: [f64; 4]) -> Self {
        Self(Vector4::from(components))
    }

    pub fn zero() -> Self {
        Self(Vector4::zeros())
    }

    /// `dx^i`.
    pub fn basis(i: usize) -> Self {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        Self(v)
    }

    pub fn components(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// `(α ∧ β)_{ij} = α_i β_j − α_j β_i`.
    pub fn wedge(&self, other: &Self) -> TwoForm {
        let outer = self.0 * other.0.transpose();
        TwoForm(outer - outer.transpose())
    }
}

impl Add for OneForm {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for OneForm {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for OneForm {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<OneForm> for f64 {
    type Output = OneForm;
    fn mul(self, rhs: OneForm) -> OneForm {
        OneForm(rhs.0 * self)
    }
}

/// A 2-form `F = ½ F_{ij} dx^i ∧ dx^j` stored as its antisymmetric
/// component matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TwoForm(pub Matrix4<f64>);

impl TwoForm {
    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    pub fn components(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// Components in another basis `θ^c` whose dual vectors are the columns
    /// of `vectors`.
    pub fn in_basis(&self, vectors: &Matrix4<f64>) -> Self {
        Self(vectors.transpose() * self.0 * vectors)
    }
}

impl Add for TwoForm {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for TwoForm {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul<TwoForm> for f64 {
    type Output = TwoForm;
    fn mul(self, rhs: TwoForm) -> TwoForm {
        TwoForm(rhs.0 * self)
    }
}

/// `dα` by central differences of step `h`:
/// `(dα)_{ij} = ∂_i α_j − ∂_j α_i`.
pub fn exterior_derivative<E>(alpha: impl Fn(&Point4) -> Result<OneForm, E>, x: &Point4, h: f64) -> Result<TwoForm, E> {
    let mut grad = Matrix4::zeros();
    for i in 0..4 {
        let (mut xp, mut xm) = (*x, *x);
        xp[i] += h;
        xm[i] -= h;
        let d = (alpha(&xp)?.0 - alpha(&xm)?.0) / (2.0 * h);
        grad.set_row(i, &d.transpose());
    }
    Ok(TwoForm(grad - grad.transpose()))
}

/// Components of a symmetric tensor `sym(α ⊗ β) = ½(α ⊗ β + β ⊗ α)`.
pub fn symmetric_product(a: &OneForm, b: &OneForm) -> Matrix4<f64> {
    let outer = a.0 * b.0.transpose();
    (outer + outer.transpose()) * 0.5
}
