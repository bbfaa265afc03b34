use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::fourier::{eval_on_torus, Bracket, FourierField, ModeVector};

/// A polynomial `Σ_j c_j w^j` with Fourier-field coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WPolynomial {
    coeffs: Vec<FourierField>,
}

impl WPolynomial {
    pub fn new(coeffs: Vec<FourierField>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(f: FourierField) -> Self {
        Self::new(vec![f])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FourierField::is_empty) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[FourierField] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, w: f64) -> FourierField {
        let mut acc = FourierField::zero();
        for c in self.coeffs.iter().rev() {
            acc = FourierField::linear_combination(&[(w, &acc), (1.0, c)]);
        }
        acc
    }

    pub fn d_w(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale_real(j as f64))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale_real(s)).collect())
    }

    /// `Σ a_i p_i`.
    pub fn linear_combination(terms: &[(f64, &WPolynomial)]) -> Self {
        let degree = terms.iter().map(|(_, p)| p.coeffs.len()).max().unwrap_or(0);
        let empty = FourierField::zero();
        Self::new(
            (0..degree)
                .map(|j| {
                    let parts: Vec<(f64, &FourierField)> = terms
                        .iter()
                        .map(|(a, p)| (*a, p.coeffs.get(j).unwrap_or(&empty)))
                        .collect();
                    FourierField::linear_combination(&parts)
                })
                .collect(),
        )
    }

    /// `{p, q}` expanded as a polynomial product.
    pub fn bracket(&self, other: &Self, bracket: Bracket) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FourierField::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&bracket.apply(a, b));
            }
        }
        Self::new(out)
    }
}

/// Truncated Taylor series `Θ = Σ_{k ≤ K} D_k(w) z^k / k!` in `z`.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    orders: Vec<WPolynomial>,
    bracket: Bracket,
}

impl SeriesSolution {
    pub fn truncation(&self) -> usize {
        self.orders.len() - 1
    }

    /// `∂_z^k Θ |_{z=0}` as a polynomial in `w`.
    pub fn order(&self, k: usize) -> &WPolynomial {
        &self.orders[k]
    }

    pub fn orders(&self) -> &[WPolynomial] {
        &self.orders
    }

    /// The Cauchy data `(Θ|_{z=0}, ∂_zΘ|_{z=0})`.
    pub fn cauchy_data(&self) -> (&WPolynomial, &WPolynomial) {
        (&self.orders[0], &self.orders[1])
    }

    pub fn bracket(&self) -> Bracket {
        self.bracket
    }

    /// Partial sum at `(w, z)`.
    pub fn evaluate(&self, w: f64, z: f64) -> FourierField {
        let mut terms = Vec::with_capacity(self.orders.len());
        let mut weight = 1.0;
        for (k, d) in self.orders.iter().enumerate() {
            if k > 0 {
                weight *= z / k as f64;
            }
            terms.push((weight, d.eval(w)));
        }
        let refs: Vec<(f64, &FourierField)> = terms.iter().map(|(a, f)| (*a, f)).collect();
        FourierField::linear_combination(&refs)
    }

    /// Real value of the partial sum at `(w, z, p, q)`.
    pub fn evaluate_at(&self, w: f64, z: f64, p: f64, q: f64) -> f64 {
        eval_on_torus(&self.evaluate(w, z), p, q).re
    }
}

/// Cauchy-Kowalewska recursion for `∂²_z Θ = −∂²_w Θ − {∂_w Θ, ∂_z Θ}`:
///
/// `D_{k+2} = −∂²_w D_k − Σ_j C(k, j) {∂_w D_j, D_{k−j+1}}`.
pub fn kowalewska_series(
    cauchy0: WPolynomial,
    cauchy1: WPolynomial,
    bracket: Bracket,
    truncation: usize,
) -> Result<SeriesSolution> {
    if truncation < 2 {
        return Err(Error::TruncationTooSmall(truncation));
    }
    let mut orders = vec![cauchy0, cauchy1];
    let mut dw: Vec<WPolynomial> = orders.iter().map(WPolynomial::d_w).collect();
    for k in 0..=truncation - 2 {
        let mut terms = vec![orders[k].d_w().d_w().scale(-1.0)];
        let mut binom = 1.0;
        for j in 0..=k {
            terms.push(dw[j].bracket(&orders[k - j + 1], bracket).scale(-binom));
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        let refs: Vec<(f64, &WPolynomial)> = terms.iter().map(|t| (1.0, t)).collect();
        let next = WPolynomial::linear_combination(&refs);
        dw.push(next.d_w());
        orders.push(next);
    }
    Ok(SeriesSolution { orders, bracket })
}

/// Cauchy data of the closed-form example:
/// `Θ|_{z=0} = (π/2) cos(p+q) − w sin q`, `∂_z Θ|_{z=0} = −sin p`.
pub fn example_cauchy_data() -> (WPolynomial, WPolynomial) {
    let c0 = FourierField::real_harmonic(ModeVector::new(1, 1), FRAC_PI_2, 0.0);
    let c1 = FourierField::real_harmonic(ModeVector::new(0, 1), 0.0, -1.0);
    let d1 = FourierField::real_harmonic(ModeVector::new(1, 0), 0.0, -1.0);
    (WPolynomial::new(vec![c0, c1]), WPolynomial::constant(d1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn polynomial_evaluation_and_derivative() {
        let one = FourierField::constant(Complex64::new(1.0, 0.0));
        let p = WPolynomial::new(vec![
            one.clone(),
            one.scale_real(2.0),
            one.scale_real(3.0),
            FourierField::zero(),
        ]);
        assert_eq!(p.coeffs().len(), 3);
        assert_eq!(p.eval(2.0).coeff(ModeVector::ZERO).re, 1.0 + 4.0 + 12.0);
        assert_eq!(p.d_w().eval(2.0).coeff(ModeVector::ZERO).re, 2.0 + 12.0);
    }

    #[test]
    fn truncation_is_validated() {
        let (a, b) = example_cauchy_data();
        assert_eq!(
            kowalewska_series(a, b, Bracket::Poisson, 1).unwrap_err(),
            Error::TruncationTooSmall(1)
        );
    }

    #[test]
    fn zero_data_stays_zero() {
        let s = kowalewska_series(
            WPolynomial::zero(),
            WPolynomial::zero(),
            Bracket::moyal(0.5).unwrap(),
            8,
        )
        .unwrap();
        assert!(s.orders().iter().all(WPolynomial::is_zero));
    }

    #[test]
    fn cauchy_data_are_kept() {
        let (a, b) = example_cauchy_data();
        let s = kowalewska_series(a.clone(), b.clone(), Bracket::Poisson, 4).unwrap();
        assert_eq!(s.cauchy_data(), (&a, &b));
        assert_eq!(s.truncation(), 4);
    }
}
