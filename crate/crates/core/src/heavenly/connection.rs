use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Vector4};

use super::forms::{exterior_derivative, OneForm, Point4, TwoForm};
use super::tetrad::{example_tetrad, FrameField, TetradFrame};
use crate::error::{Error, Result};

/// Index pairs `a < b` (0-based) carrying the independent `Γ_{ab}`.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `η^{ab}` pairs `1 ↔ 2`, `3 ↔ 4`.
fn partner(a: usize) -> usize {
    a ^ 1
}

/// Connection 1-forms `Γ_{ab} = −Γ_{ba}` (indices lowered with the frame
/// metric), stored by frame components `Γ_{ab} = Γ_{abc} e^c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionForms {
    frame: TetradFrame,
    gamma: [Vector4<f64>; 6],
}

impl ConnectionForms {
    /// `Γ_{ab}` for `a < b` (1-based) in frame components; the rest follow
    /// by antisymmetry.
    pub fn from_pairs(frame: TetradFrame, entries: &[((usize, usize), Vector4<f64>)]) -> Self {
        let mut gamma = [Vector4::zeros(); 6];
        for &((a, b), v) in entries {
            match pair_index(a - 1, b - 1) {
                Some((k, s)) => gamma[k] = v * s,
                None => assert!(v.amax() == 0.0, "Γ_{a}{a} must vanish"),
            }
        }
        Self { frame, gamma }
    }

    pub fn zero(frame: TetradFrame) -> Self {
        Self {
            frame,
            gamma: [Vector4::zeros(); 6],
        }
    }

    pub fn frame(&self) -> &TetradFrame {
        &self.frame
    }

    /// Frame components of `Γ_{ab}`, `a, b ∈ 1..=4`.
    pub fn gamma(&self, a: usize, b: usize) -> Vector4<f64> {
        match pair_index(a - 1, b - 1) {
            Some((k, s)) => self.gamma[k] * s,
            None => Vector4::zeros(),
        }
    }

    /// Coordinate components of `Γ_{ab}`.
    pub fn gamma_form(&self, a: usize, b: usize) -> OneForm {
        self.frame.from_frame(&self.gamma(a, b))
    }

    /// `Γ^a_b = η^{ac} Γ_{cb}` in frame components.
    pub fn mixed(&self, a: usize, b: usize) -> Vector4<f64> {
        self.gamma(partner(a - 1) + 1, b)
    }

    /// Largest frame component over all `Γ_{ab}`.
    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    /// Largest frame-component difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.gamma
            .iter()
            .zip(&other.gamma)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
    }
}

fn pair_index(a: usize, b: usize) -> Option<(usize, f64)> {
    if a == b {
        return None;
    }
    let (lo, hi, s) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    PAIRS.iter().position(|&p| p == (lo, hi)).map(|k| (k, s))
}

/// Frame components of `de^a` and the connection solving
/// `de^a = −Γ^a_b ∧ e^b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartanFirst {
    /// `de^a` in frame components, `F = ½ F_{cd} e^c ∧ e^d`.
    pub de: [TwoForm; 4],
    pub connection: ConnectionForms,
    /// `max |de^a + Γ^a_b ∧ e^b|` for the extracted connection.
    pub structure_residual: f64,
}

impl CartanFirst {
    /// `de^a` for `a ∈ 1..=4`.
    pub fn de(&self, a: usize) -> &TwoForm {
        &self.de[a - 1]
    }
}

/// Unknown `Γ_{pair, c}` sits at column `4·pair + c`; row `6a + k` is the
/// `k`-th pair `(c, d)` of the equation for `de^a`:
/// `Γ^a_{cd} − Γ^a_{dc} = (de^a)_{cd}`.
fn extraction_system() -> &'static nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn> {
    static LU: OnceLock<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>> = OnceLock::new();
    LU.get_or_init(|| {
        let mut m = DMatrix::zeros(24, 24);
        for a in 0..4 {
            let up = partner(a);
            for (k, &(c, d)) in PAIRS.iter().enumerate() {
                let row = 6 * a + k;
                if let Some((pc, s)) = pair_index(up, c) {
                    m[(row, 4 * pc + d)] += s;
                }
                if let Some((pd, s)) = pair_index(up, d) {
                    m[(row, 4 * pd + c)] -= s;
                }
            }
        }
        m.lu()
    })
}

/// `max_a |de^a + Γ^a_b ∧ e^b|` in frame components.
pub fn structure_residual_of(de: &[TwoForm; 4], conn: &ConnectionForms) -> f64 {
    (1..=4)
        .map(|a| {
            let mut r = de[a - 1];
            for b in 1..=4 {
                let mut eb = Vector4::zeros();
                eb[b - 1] = 1.0;
                r = r + OneForm(conn.mixed(a, b)).wedge(&OneForm(eb));
            }
            r.max_abs()
        })
        .fold(0.0, f64::max)
}

/// Frame components of `de^a` by central differences of step `h`.
pub fn frame_derivatives(field: &impl FrameField, x: &Point4, h: f64) -> Result<(TetradFrame, [TwoForm; 4])> {
    let frame = field.frame(x)?;
    let mut de = [TwoForm::zero(); 4];
    for (a, slot) in de.iter_mut().enumerate() {
        let d = exterior_derivative(|y| field.frame(y).map(|f| f.e(a + 1)), x, h)?;
        *slot = d.in_basis(frame.dual_vectors());
    }
    Ok((frame, de))
}

/// First Cartan structure equations: FD exterior derivatives of the frame and
/// the unique antisymmetric connection reproducing them.
pub fn cartan_first(field: &impl FrameField, x: &Point4, h: f64) -> Result<CartanFirst> {
    let (frame, de) = frame_derivatives(field, x, h)?;
    let mut rhs = DVector::zeros(24);
    for a in 0..4 {
        for (k, &(c, d)) in PAIRS.iter().enumerate() {
            rhs[6 * a + k] = de[a].component(c, d);
        }
    }
    let sol = extraction_system()
        .solve(&rhs)
        .ok_or(Error::SingularExtraction { point: *x })?;
    let mut gamma = [Vector4::zeros(); 6];
    for (k, g) in gamma.iter_mut().enumerate() {
        *g = Vector4::new(sol[4 * k], sol[4 * k + 1], sol[4 * k + 2], sol[4 * k + 3]);
    }
    let connection = ConnectionForms { frame, gamma };
    let structure_residual = structure_residual_of(&de, &connection);
    Ok(CartanFirst {
        de,
        connection,
        structure_residual,
    })
}

/// `max_a |de^a + Γ^a_b ∧ e^b|` with FD frame derivatives and a given
/// connection.
pub fn structure_residual(field: &impl FrameField, conn: &ConnectionForms, x: &Point4, h: f64) -> Result<f64> {
    let (_, de) = frame_derivatives(field, x, h)?;
    Ok(structure_residual_of(&de, conn))
}

/// The connection of the example tetrad:
/// `Γ₁₂ = Γ₃₄ = −√2 tan q e³`, `Γ₃₁ = −√2 Φ [tan q e¹ + Φ tan ψ e³]`.
pub fn example_connection(x: &Point4) -> Result<ConnectionForms> {
    let frame = example_tetrad(x)?;
    let phi = frame.phi().expect("example tetrad carries Φ");
    let [_, z, p, q] = *x;
    let (tq, tpsi) = (q.tan(), (z * q.cos() + p).tan());
    let g12 = Vector4::new(0.0, 0.0, -SQRT_2 * tq, 0.0);
    let g31 = Vector4::new(-SQRT_2 * phi * tq, 0.0, -SQRT_2 * phi * phi * tpsi, 0.0);
    Ok(ConnectionForms::from_pairs(
        frame,
        &[((1, 2), g12), ((3, 4), g12), ((1, 3), -g31)],
    ))
}

/// Largest frame component of the dotted spinor connection
/// `Γ₄₁`, `½(−Γ₁₂ + Γ₃₄)`, `Γ₃₂`.
pub fn dotted_connection_check(conn: &ConnectionForms) -> f64 {
    let half = (conn.gamma(3, 4) - conn.gamma(1, 2)) * 0.5;
    [conn.gamma(4, 1), half, conn.gamma(3, 2)]
        .iter()
        .map(|v| v.amax())
        .fold(0.0, f64::max)
}
