use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{FourierField, ModeVector};
use crate::error::{Error, Result};

/// Coefficients below this modulus are dropped after products and brackets.
pub const DEFAULT_PRUNE: f64 = 1e-15;

/// Dense accumulation is used while the output box stays below this size.
const DENSE_LIMIT: usize = 1 << 22;

/// Validated deformation parameter `ħ > 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Hbar(f64);

impl Hbar {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidHbar(value))
        }
    }

    /// `ħ = 2π/N`, the value at which `χ_N` is a homomorphism.
    pub fn for_dimension(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(Self(2.0 * PI / n as f64))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which Lie bracket of functions on the torus to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bracket {
    Poisson,
    Moyal { hbar: Hbar },
}

impl Bracket {
    pub fn moyal(hbar: f64) -> Result<Self> {
        Ok(Self::Moyal { hbar: Hbar::new(hbar)? })
    }

    /// Poisson for `ħ = 0`, Moyal otherwise.
    pub fn for_hbar(hbar: f64) -> Result<Self> {
        if hbar == 0.0 {
            Ok(Self::Poisson)
        } else {
            Self::moyal(hbar)
        }
    }

    /// Structure constant multiplying `E_{m+n}` in `{E_m, E_n}`.
    pub fn structure_constant(self, cross: i64) -> f64 {
        match self {
            Self::Poisson => cross as f64,
            Self::Moyal { hbar } => {
                let h = hbar.value();
                (2.0 / h) * (0.5 * h * cross as f64).sin()
            }
        }
    }

    pub fn apply(self, f: &FourierField, g: &FourierField) -> FourierField {
        self.apply_with_prune(f, g, DEFAULT_PRUNE)
    }

    /// `{f, g}` computed as `½(P(f, g) − P(g, f))` so that antisymmetry holds
    /// exactly in floating point.
    pub fn apply_with_prune(self, f: &FourierField, g: &FourierField, prune: f64) -> FourierField {
        let weight = |cross: i64| Complex64::new(self.structure_constant(cross), 0.0);
        let fg = twisted_product(f, g, weight);
        let gf = twisted_product(g, f, weight);
        FourierField::linear_combination(&[(0.5, &fg), (-0.5, &gf)]).prune(prune)
    }
}

/// Moyal star product `E_m ⋆ E_n = exp(iħ/2 m×n) E_{m+n}`.
pub fn star_product(f: &FourierField, g: &FourierField, hbar: Hbar) -> FourierField {
    star_product_with_prune(f, g, hbar, DEFAULT_PRUNE)
}

pub fn star_product_with_prune(f: &FourierField, g: &FourierField, hbar: Hbar, prune: f64) -> FourierField {
    let half = 0.5 * hbar.value();
    twisted_product(f, g, |cross| Complex64::from_polar(1.0, half * cross as f64)).prune(prune)
}

/// Moyal bracket with structure constants `(2/ħ) sin(ħ/2 m×n)`.
pub fn moyal_bracket(f: &FourierField, g: &FourierField, hbar: Hbar) -> FourierField {
    Bracket::Moyal { hbar }.apply(f, g)
}

/// Poisson bracket `{f, g} = ∂_q f ∂_p g − ∂_p f ∂_q g`, i.e. `{E_m, E_n} = (m×n) E_{m+n}`.
pub fn poisson_bracket(f: &FourierField, g: &FourierField) -> FourierField {
    Bracket::Poisson.apply(f, g)
}

/// `Σ_{m,n} w(m×n) f_m g_n E_{m+n}`, accumulated in a fixed pair order.
fn twisted_product(f: &FourierField, g: &FourierField, weight: impl Fn(i64) -> Complex64) -> FourierField {
    let band_limit = f.band_limit() + g.band_limit();
    if f.is_empty() || g.is_empty() {
        return FourierField::zero().with_band_limit(band_limit);
    }
    let (lo_f, hi_f) = bounds(f);
    let (lo_g, hi_g) = bounds(g);
    let lo = lo_f + lo_g;
    let hi = hi_f + hi_g;
    let rows = (hi.m1 - lo.m1 + 1) as usize;
    let cols = (hi.m2 - lo.m2 + 1) as usize;

    let product = if rows.saturating_mul(cols) <= DENSE_LIMIT {
        let mut acc = vec![Complex64::default(); rows * cols];
        for &(m, a) in f.modes() {
            for &(n, b) in g.modes() {
                let k = m + n - lo;
                acc[k.m1 as usize * cols + k.m2 as usize] += weight(m.cross(n)) * a * b;
            }
        }
        let modes = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != Complex64::default())
            .map(|(idx, c)| {
                let m = ModeVector::new((idx / cols) as i64, (idx % cols) as i64) + lo;
                (m, c)
            })
            .collect();
        FourierField::from_sorted_unchecked(modes)
    } else {
        let mut acc: BTreeMap<ModeVector, Complex64> = BTreeMap::new();
        for &(m, a) in f.modes() {
            for &(n, b) in g.modes() {
                *acc.entry(m + n).or_default() += weight(m.cross(n)) * a * b;
            }
        }
        FourierField::from_sorted_unchecked(acc.into_iter().filter(|(_, c)| *c != Complex64::default()).collect())
    };
    product.with_band_limit(band_limit)
}

fn bounds(f: &FourierField) -> (ModeVector, ModeVector) {
    let modes = f.modes();
    let m1_lo = modes.first().map_or(0, |p| p.0.m1);
    let m1_hi = modes.last().map_or(0, |p| p.0.m1);
    let m2_lo = modes.iter().map(|p| p.0.m2).min().unwrap_or(0);
    let m2_hi = modes.iter().map(|p| p.0.m2).max().unwrap_or(0);
    (ModeVector::new(m1_lo, m2_lo), ModeVector::new(m1_hi, m2_hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m1: i64, m2: i64) -> FourierField {
        FourierField::mode(ModeVector::new(m1, m2), Complex64::new(1.0, 0.0))
    }

    #[test]
    fn hbar_validation() {
        assert!(Hbar::new(0.0).is_err());
        assert!(Hbar::new(-1.0).is_err());
        assert!(Hbar::new(f64::NAN).is_err());
        assert!(Hbar::for_dimension(1).is_err());
        assert_eq!(Hbar::for_dimension(4).unwrap().value(), PI / 2.0);
    }

    #[test]
    fn star_of_basis_elements_has_phase() {
        let h = Hbar::new(0.3).unwrap();
        let p = star_product(&e(1, 0), &e(0, 1), h);
        assert_eq!(p.len(), 1);
        let c = p.coeff(ModeVector::new(1, 1));
        assert!((c - Complex64::from_polar(1.0, 0.15)).norm() < 1e-16);
    }

    #[test]
    fn star_with_constant_is_scaling() {
        let h = Hbar::new(0.7).unwrap();
        let f = FourierField::real_harmonic(ModeVector::new(2, 3), 1.0, -0.5);
        let two = FourierField::constant(Complex64::new(2.0, 0.0));
        assert_eq!(star_product(&two, &f, h), f.scale_real(2.0));
        assert!(star_product(&FourierField::zero(), &f, h).is_empty());
    }

    #[test]
    fn poisson_of_coordinates_modes() {
        // {sin p, sin q} = ∂_q sin p ∂_p sin q − cos p cos q = −cos p cos q
        let sp = FourierField::real_harmonic(ModeVector::new(1, 0), 0.0, 1.0);
        let sq = FourierField::real_harmonic(ModeVector::new(0, 1), 0.0, 1.0);
        let got = poisson_bracket(&sp, &sq);
        let cp = FourierField::real_harmonic(ModeVector::new(1, 0), 1.0, 0.0);
        let cq = FourierField::real_harmonic(ModeVector::new(0, 1), 1.0, 0.0);
        let want = crate::fourier::pointwise_product(&cp, &cq).scale_real(-1.0);
        assert!(got.max_abs_diff(&want) < 1e-16);
    }

    #[test]
    fn moyal_structure_constant() {
        let b = Bracket::moyal(0.5).unwrap();
        let got = b.apply(&e(2, 1), &e(-1, 3));
        let want = 4.0 * (0.25f64 * 7.0).sin();
        assert!((got.coeff(ModeVector::new(1, 4)).re - want).abs() < 1e-15);
    }

    #[test]
    fn sparse_fallback_matches_dense() {
        let far = FourierField::from_modes([
            (ModeVector::new(-1500, 2), Complex64::new(1.0, 0.5)),
            (ModeVector::new(1500, -1), Complex64::new(-0.3, 0.2)),
        ]);
        let near = FourierField::from_modes([
            (ModeVector::new(0, 1500), Complex64::new(0.25, 0.0)),
            (ModeVector::new(1, -1500), Complex64::new(0.0, 1.0)),
        ]);
        let h = Hbar::new(0.1).unwrap();
        let p = star_product(&far, &near, h);
        assert_eq!(p.len(), 4);
        let c = p.coeff(ModeVector::new(-1500, 1502));
        let phase = Complex64::from_polar(1.0, 0.05 * (-1500.0 * 1500.0 - 2.0 * 0.0));
        assert!((c - Complex64::new(1.0, 0.5) * 0.25 * phase).norm() < 1e-14);
    }
}
