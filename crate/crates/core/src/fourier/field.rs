use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::ModeVector;
use crate::error::{Error, Result};

/// Finite Fourier series `Σ_m f_m E_m` on the 2-torus.
///
/// Modes are stored sorted lexicographically with no duplicates and no exact
/// zeros. The band limit is at least the max-norm of every stored mode.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierField {
    band_limit: u32,
    modes: Vec<(ModeVector, Complex64)>,
}

impl FourierField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_modes([(ModeVector::ZERO, c)])
    }

    /// A single harmonic `c E_m`.
    pub fn mode(m: ModeVector, c: Complex64) -> Self {
        Self::from_modes([(m, c)])
    }

    /// Real field `a cos(m·x) + b sin(m·x)`.
    pub fn real_harmonic(m: ModeVector, cos_coeff: f64, sin_coeff: f64) -> Self {
        if m.is_zero() {
            return Self::constant(Complex64::new(cos_coeff, 0.0));
        }
        let c = Complex64::new(cos_coeff, -sin_coeff) * 0.5;
        Self::from_modes([(m, c), (-m, c.conj())])
    }

    /// Builds a field from `(mode, coefficient)` pairs, summing duplicates.
    pub fn from_modes(pairs: impl IntoIterator<Item = (ModeVector, Complex64)>) -> Self {
        let mut map: BTreeMap<ModeVector, Complex64> = BTreeMap::new();
        for (m, c) in pairs {
            *map.entry(m).or_default() += c;
        }
        Self::from_sorted_unchecked(map.into_iter().filter(|(_, c)| *c != Complex64::default()).collect())
    }

    pub(crate) fn from_sorted_unchecked(modes: Vec<(ModeVector, Complex64)>) -> Self {
        let band_limit = modes
            .iter()
            .map(|(m, _)| m.norm_inf())
            .max()
            .unwrap_or(0)
            .try_into()
            .expect("mode index exceeds u32 band limit");
        Self { band_limit, modes }
    }

    /// Raises the declared band limit; it never drops below the modes present.
    pub fn with_band_limit(mut self, band_limit: u32) -> Self {
        self.band_limit = self.band_limit.max(band_limit);
        self
    }

    pub fn band_limit(&self) -> u32 {
        self.band_limit
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[(ModeVector, Complex64)] {
        &self.modes
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeVector, Complex64)> + '_ {
        self.modes.iter().copied()
    }

    pub fn coeff(&self, m: ModeVector) -> Complex64 {
        self.modes
            .binary_search_by(|(k, _)| k.cmp(&m))
            .map(|i| self.modes[i].1)
            .unwrap_or_default()
    }

    /// True when `f_{-m} = conj(f_m)` for every mode, up to `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.modes
            .iter()
            .all(|&(m, c)| (self.coeff(-m) - c.conj()).norm() <= tol)
    }

    /// Coefficient-wise complex conjugate of the function, `f̄ = Σ conj(f_m) E_{-m}`.
    pub fn conj(&self) -> Self {
        let mut modes: Vec<_> = self.modes.iter().map(|&(m, c)| (-m, c.conj())).collect();
        modes.reverse();
        Self {
            band_limit: self.band_limit,
            modes,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::default() {
            return Self::zero().with_band_limit(self.band_limit);
        }
        Self {
            band_limit: self.band_limit,
            modes: self.modes.iter().map(|&(m, c)| (m, c * s)).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Linear combination `Σ a_i f_i`, merged in one sorted pass.
    pub fn linear_combination(terms: &[(f64, &FourierField)]) -> Self {
        let band_limit = terms.iter().map(|(_, f)| f.band_limit).max().unwrap_or(0);
        let mut map: BTreeMap<ModeVector, Complex64> = BTreeMap::new();
        for &(a, f) in terms {
            for &(m, c) in &f.modes {
                *map.entry(m).or_default() += c * a;
            }
        }
        Self::from_sorted_unchecked(map.into_iter().filter(|(_, c)| *c != Complex64::default()).collect())
            .with_band_limit(band_limit)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::linear_combination(&[(1.0, self), (1.0, other)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::linear_combination(&[(1.0, self), (-1.0, other)])
    }

    /// Drops coefficients with modulus below `threshold`.
    pub fn prune(mut self, threshold: f64) -> Self {
        self.modes
            .retain(|(_, c)| c.norm() >= threshold && *c != Complex64::default());
        self
    }

    /// Keeps only the modes accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(ModeVector) -> bool) -> Self {
        Self {
            band_limit: self.band_limit,
            modes: self.modes.iter().copied().filter(|&(m, _)| keep(m)).collect(),
        }
    }

    /// `∂_p`, i.e. multiplication of `f_m` by `i m1`.
    pub fn d_p(&self) -> Self {
        self.derivative(|m| m.m1)
    }

    /// `∂_q`, i.e. multiplication of `f_m` by `i m2`.
    pub fn d_q(&self) -> Self {
        self.derivative(|m| m.m2)
    }

    fn derivative(&self, factor: impl Fn(ModeVector) -> i64) -> Self {
        Self {
            band_limit: self.band_limit,
            modes: self
                .modes
                .iter()
                .filter_map(|&(m, c)| {
                    let k = factor(m);
                    (k != 0).then(|| (m, c * Complex64::new(0.0, k as f64)))
                })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.modes.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ |f_m|`, an upper bound on the sup-norm over the torus.
    pub fn l1_norm(&self) -> f64 {
        self.modes.iter().map(|(_, c)| c.norm()).sum()
    }

    /// `max_m |f_m − g_m|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.modes, &other.modes);
        let mut worst: f64 = 0.0;
        while i < a.len() || j < b.len() {
            let d = match (a.get(i), b.get(j)) {
                (Some(&(m, x)), Some(&(n, y))) if m == n => {
                    i += 1;
                    j += 1;
                    (x - y).norm()
                }
                (Some(&(m, x)), Some(&(n, _))) if m < n => {
                    i += 1;
                    x.norm()
                }
                (Some(&(_, x)), None) => {
                    i += 1;
                    x.norm()
                }
                (_, Some(&(_, y))) => {
                    j += 1;
                    y.norm()
                }
                (None, None) => unreachable!(),
            };
            worst = worst.max(d);
        }
        worst
    }

    /// Serialises as `{"band_limit": R, "modes": [[m1, m2, re, im], ...]}`.
    pub fn to_json(&self) -> Value {
        let modes: Vec<Value> = self
            .modes
            .iter()
            .map(|(m, c)| json!([m.m1, m.m2, c.re, c.im]))
            .collect();
        json!({ "band_limit": self.band_limit, "modes": modes })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Format(msg.to_string());
        let band_limit = value
            .get("band_limit")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer `band_limit`"))?;
        let band_limit = u32::try_from(band_limit).map_err(|_| bad("`band_limit` too large"))?;
        let entries = value
            .get("modes")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array `modes`"))?;
        let mut pairs = Vec::with_capacity(entries.len());
        for entry in entries {
            let e = entry
                .as_array()
                .filter(|e| e.len() == 4)
                .ok_or_else(|| bad("mode entries must be [m1, m2, re, im]"))?;
            let m1 = e[0].as_i64().ok_or_else(|| bad("m1 must be an integer"))?;
            let m2 = e[1].as_i64().ok_or_else(|| bad("m2 must be an integer"))?;
            let re = e[2].as_f64().ok_or_else(|| bad("re must be a number"))?;
            let im = e[3].as_f64().ok_or_else(|| bad("im must be a number"))?;
            pairs.push((ModeVector::new(m1, m2), Complex64::new(re, im)));
        }
        let field = Self::from_modes(pairs);
        if field.band_limit > band_limit {
            return Err(Error::Format(format!(
                "mode with max-norm {} exceeds band_limit {band_limit}",
                field.band_limit
            )));
        }
        Ok(field.with_band_limit(band_limit))
    }
}
