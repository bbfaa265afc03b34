//! The trigonometric basis `L_m = (iN/2π) ω^{m1 m2/2} S^{m1} T^{m2}` of
//! `sl(N, C)` built from the clock matrix `S` and shift matrix `T`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::ModeVector;
use crate::matrix::{anti_hermitian_defect, commutator, max_abs, max_abs_diff, CMatrix};

/// Entrywise tolerance for the algebraic property checks.
pub const PROPERTY_TOL: f64 = 1e-11;
/// Relative tolerance for the determinant checks.
pub const DETERMINANT_TOL: f64 = 1e-10;

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}

/// `exp(iπ k / N)`, reduced mod `2N` so equal phases are bitwise equal.
fn half_root(n: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(2 * n as i64);
    Complex64::from_polar(1.0, PI * k as f64 / n as f64)
}

/// Prefactor `iN/2π`.
pub fn normalization(n: usize) -> Complex64 {
    Complex64::new(0.0, n as f64 / (2.0 * PI))
}

/// `S = √ω diag(1, ω, …, ω^{N−1})` with `√ω = exp(iπ/N)`.
pub fn clock_matrix(n: usize) -> Result<CMatrix> {
    check_dimension(n)?;
    Ok(clock_power(n, 1))
}

/// `T` with ones on the superdiagonal and `−1` in the bottom-left corner.
pub fn shift_matrix(n: usize) -> Result<CMatrix> {
    check_dimension(n)?;
    Ok(shift_power(n, 1))
}

/// `S^m`; negative powers are adjoints of positive ones.
pub fn clock_power(n: usize, m: i64) -> CMatrix {
    if m < 0 {
        return clock_power(n, -m).adjoint();
    }
    let diag: Vec<Complex64> = (0..n).map(|j| half_root(n, m * (2 * j as i64 + 1))).collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// `T^m`: row `i` holds `(−1)^{⌊(i+m)/N⌋}` in column `(i+m) mod N`.
pub fn shift_power(n: usize, m: i64) -> CMatrix {
    if m < 0 {
        return shift_power(n, -m).adjoint();
    }
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        let target = i as i64 + m;
        let wraps = target.div_euclid(n as i64);
        let sign = if wraps % 2 == 0 { 1.0 } else { -1.0 };
        t[(i, target.rem_euclid(n as i64) as usize)] = Complex64::new(sign, 0.0);
    }
    t
}

/// `L_m` for any integer mode.
pub fn basis_matrix(n: usize, m: ModeVector) -> Result<CMatrix> {
    check_dimension(n)?;
    Ok(build_basis_matrix(n, m))
}

fn build_basis_matrix(n: usize, m: ModeVector) -> CMatrix {
    let prefactor = normalization(n) * half_root(n, m.m1 * m.m2);
    (clock_power(n, m.m1) * shift_power(n, m.m2)) * prefactor
}

/// Writes `m = μ + N r` with `μ ∈ [0, N−1]²` and returns `μ` with the sign
/// `(−1)^{(μ1+1) r2 + (μ2+1) r1 + N r1 r2}` relating `L_m` to `L_μ`.
pub fn fold_mode(n: usize, m: ModeVector) -> (ModeVector, f64) {
    let n_i = n as i64;
    let mu = ModeVector::new(m.m1.rem_euclid(n_i), m.m2.rem_euclid(n_i));
    let r1 = m.m1.div_euclid(n_i);
    let r2 = m.m2.div_euclid(n_i);
    let exponent = (mu.m1 + 1) * r2 + (mu.m2 + 1) * r1 + n_i * r1 * r2;
    let sign = if exponent.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (mu, sign)
}

/// All `L_μ` on the fundamental window `[0, N−1]²`, cached for reuse.
#[derive(Clone, Debug)]
pub struct SineBasis {
    n: usize,
    window: Vec<CMatrix>,
}

impl SineBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let window = (0..n * n)
            .map(|k| build_basis_matrix(n, ModeVector::new((k / n) as i64, (k % n) as i64)))
            .collect();
        Ok(Self { n, window })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `L_μ` for `μ` in the fundamental window (including `(0, 0)`).
    pub fn window(&self, mu: ModeVector) -> &CMatrix {
        let n = self.n as i64;
        assert!(
            (0..n).contains(&mu.m1) && (0..n).contains(&mu.m2),
            "{mu} outside window"
        );
        &self.window[(mu.m1 * n + mu.m2) as usize]
    }

    /// `L_m` for any mode, via the periodicity sign rule.
    pub fn get(&self, m: ModeVector) -> CMatrix {
        let (mu, sign) = fold_mode(self.n, m);
        self.window(mu) * Complex64::new(sign, 0.0)
    }

    /// Fundamental-window indices `μ ≠ (0, 0)` in lexicographic order.
    pub fn window_modes(&self) -> impl Iterator<Item = ModeVector> + '_ {
        let n = self.n as i64;
        (0..n)
            .flat_map(move |a| (0..n).map(move |b| ModeVector::new(a, b)))
            .filter(|m| !m.is_zero())
    }
}

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl PropertyCheck {
    fn new(max_deviation: f64, tolerance: f64) -> Self {
        Self {
            passed: max_deviation <= tolerance,
            max_deviation,
            tolerance,
        }
    }
}

/// The basis properties, each with its worst deviation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisReport {
    pub n: usize,
    /// (1) `L_{m+Nr} = (−1)^{(m1+1) r2 + (m2+1) r1 + N r1 r2} L_m`.
    pub periodicity: PropertyCheck,
    /// (2) `Tr L_m = 0` for `m ≢ 0 mod N`.
    pub trace_zero: PropertyCheck,
    /// (3) `Tr L_{Nr} = (−1)^{r1+r2+N r1 r2} iN²/2π`.
    pub trace_lattice: PropertyCheck,
    /// (4) `L_m L_n = (iN/2π) ω^{(n×m)/2} L_{m+n}`.
    pub product_rule: PropertyCheck,
    /// (5a) `L_m† = −L_{−m}`.
    pub adjoint_negative: PropertyCheck,
    /// (5b) `−L_{−m} = (N/2π)² L_m^{−1}`.
    pub adjoint_inverse: PropertyCheck,
    /// (6) `det L_m = (−1)^{N(m1+m2+m1 m2)} (iN/2π)^N`, relative deviation.
    pub determinant: PropertyCheck,
    /// `det L_m = (−1)^{m1 m2 + N(m1+m2)} (iN/2π)^N`, which differs from (6)
    /// for even `N` and odd `m1 m2`.
    pub determinant_corrected: PropertyCheck,
    /// `[L_μ, L_ν] = (N/π) sin(π μ×ν/N) L_{μ+ν}` over the window.
    pub structure_constants: PropertyCheck,
}

impl BasisReport {
    /// The six stated properties (the two halves of (5) counted together).
    pub fn properties(&self) -> [(&'static str, &PropertyCheck); 7] {
        [
            ("periodicity", &self.periodicity),
            ("trace_zero", &self.trace_zero),
            ("trace_lattice", &self.trace_lattice),
            ("product_rule", &self.product_rule),
            ("adjoint_negative", &self.adjoint_negative),
            ("adjoint_inverse", &self.adjoint_inverse),
            ("determinant", &self.determinant),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.properties().iter().all(|(_, c)| c.passed) && self.structure_constants.passed
    }
}

fn shifts() -> impl Iterator<Item = ModeVector> {
    (-2..=2).flat_map(|a| (-2..=2).map(move |b| ModeVector::new(a, b)))
}

fn parity_sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn relative_deviation(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

/// Checks the basis properties by brute-force matrix arithmetic.
pub fn verify_basis_properties(n: usize) -> Result<BasisReport> {
    let basis = SineBasis::new(n)?;
    let n_i = n as i64;
    let c = normalization(n);
    let window: Vec<ModeVector> = basis.window_modes().collect();
    let l = |m: ModeVector| build_basis_matrix(n, m);

    let mut periodicity: f64 = 0.0;
    let mut trace_zero: f64 = 0.0;
    for &mu in &window {
        let base = l(mu);
        for r in shifts() {
            let m = mu + n_i * r;
            let sign = parity_sign((mu.m1 + 1) * r.m2 + (mu.m2 + 1) * r.m1 + n_i * r.m1 * r.m2);
            let shifted = l(m);
            periodicity = periodicity.max(max_abs_diff(&shifted, &(&base * Complex64::new(sign, 0.0))));
            trace_zero = trace_zero.max(shifted.trace().norm());
        }
    }

    let mut trace_lattice: f64 = 0.0;
    for r in shifts() {
        let want = c * (n as f64) * parity_sign(r.m1 + r.m2 + n_i * r.m1 * r.m2);
        trace_lattice = trace_lattice.max((l(n_i * r).trace() - want).norm());
    }

    let mut product_rule: f64 = 0.0;
    let mut structure: f64 = 0.0;
    let product_shifts = [ModeVector::ZERO, ModeVector::new(1, -2), ModeVector::new(-1, 1)];
    for &mu in &window {
        for &nu in &window {
            let lnu = basis.window(nu);
            for &r in &product_shifts {
                let m = mu + n_i * r;
                let lhs = l(m) * lnu;
                let rhs = l(m + nu) * (c * half_root(n, nu.cross(m)));
                product_rule = product_rule.max(max_abs_diff(&lhs, &rhs));
            }
            let lmu = basis.window(mu);
            let k = (n as f64 / PI) * (PI * mu.cross(nu) as f64 / n as f64).sin();
            let rhs = basis.get(mu + nu) * Complex64::new(k, 0.0);
            structure = structure.max(max_abs_diff(&commutator(lmu, lnu), &rhs));
        }
    }

    let mut adjoint_negative: f64 = 0.0;
    let mut adjoint_inverse: f64 = 0.0;
    let mut determinant: f64 = 0.0;
    let mut determinant_corrected: f64 = 0.0;
    let scale = (n as f64 / (2.0 * PI)).powi(2);
    let det_unit = c.powu(n as u32);
    for &mu in &window {
        for r in [ModeVector::ZERO, ModeVector::new(1, -1), ModeVector::new(-2, 1)] {
            let m = mu + n_i * r;
            let lm = l(m);
            let neg = -l(-m);
            adjoint_negative = adjoint_negative.max(max_abs_diff(&lm.adjoint(), &neg));
            let inv = lm.clone().try_inverse().ok_or(Error::RankDeficient {
                rank: n - 1,
                expected: n,
            })?;
            adjoint_inverse = adjoint_inverse.max(max_abs_diff(&neg, &(inv * Complex64::new(scale, 0.0))));
            let det = lm.determinant();
            let printed = det_unit * parity_sign(n_i * (m.m1 + m.m2 + m.m1 * m.m2));
            let corrected = det_unit * parity_sign(m.m1 * m.m2 + n_i * (m.m1 + m.m2));
            determinant = determinant.max(relative_deviation(det, printed));
            determinant_corrected = determinant_corrected.max(relative_deviation(det, corrected));
        }
    }

    Ok(BasisReport {
        n,
        periodicity: PropertyCheck::new(periodicity, PROPERTY_TOL),
        trace_zero: PropertyCheck::new(trace_zero, PROPERTY_TOL),
        trace_lattice: PropertyCheck::new(trace_lattice, PROPERTY_TOL),
        product_rule: PropertyCheck::new(product_rule, PROPERTY_TOL),
        adjoint_negative: PropertyCheck::new(adjoint_negative, PROPERTY_TOL),
        adjoint_inverse: PropertyCheck::new(adjoint_inverse, PROPERTY_TOL),
        determinant: PropertyCheck::new(determinant, DETERMINANT_TOL),
        determinant_corrected: PropertyCheck::new(determinant_corrected, DETERMINANT_TOL),
        structure_constants: PropertyCheck::new(structure, PROPERTY_TOL),
    })
}

/// Which anti-hermitian combination an `su(N)` element is.
///
/// `partner` is `μ' ≡ −μ mod N` and `sign` is `s` in `L_{−μ} = s L_{μ'}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SuNLabel {
    /// `½(L_μ + s L_μ')`.
    Cosine {
        mu: ModeVector,
        partner: ModeVector,
        sign: i8,
    },
    /// `(1/2i)(L_μ − s L_μ')`.
    Sine {
        mu: ModeVector,
        partner: ModeVector,
        sign: i8,
    },
    /// `L_μ` when `s = 1`, `i L_μ` when `s = −1`, for `μ' = μ`.
    SelfPaired { mu: ModeVector, sign: i8 },
}

impl fmt::Display for SuNLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = |s: i8, plus: bool| if (s > 0) == plus { '+' } else { '-' };
        match *self {
            Self::Cosine { mu, partner, sign } => {
                write!(f, "1/2(L{mu} {} L{partner})", op(sign, true))
            }
            Self::Sine { mu, partner, sign } => {
                write!(f, "1/2i(L{mu} {} L{partner})", op(sign, false))
            }
            Self::SelfPaired { mu, sign } if sign > 0 => write!(f, "L{mu}"),
            Self::SelfPaired { mu, .. } => write!(f, "iL{mu}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuNBasisElement {
    pub n_dim: usize,
    pub label: SuNLabel,
    pub entries: CMatrix,
}

/// The `N² − 1` anti-hermitian combinations of the `L_μ`, verified
/// anti-hermitian and linearly independent.
pub fn su_n_basis(n: usize) -> Result<Vec<SuNBasisElement>> {
    let basis = SineBasis::new(n)?;
    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5);
    let mut out = Vec::with_capacity(n * n - 1);
    for mu in basis.window_modes() {
        let (partner, s) = fold_mode(n, -mu);
        let sign = s as i8;
        if partner < mu {
            continue;
        }
        let lmu = basis.window(mu);
        if partner == mu {
            let entries = if sign > 0 { lmu.clone() } else { lmu * Complex64::i() };
            out.push(SuNBasisElement {
                n_dim: n,
                label: SuNLabel::SelfPaired { mu, sign },
                entries,
            });
            continue;
        }
        let lp = basis.window(partner) * Complex64::new(s, 0.0);
        out.push(SuNBasisElement {
            n_dim: n,
            label: SuNLabel::Cosine { mu, partner, sign },
            entries: (lmu + &lp) * half,
        });
        out.push(SuNBasisElement {
            n_dim: n,
            label: SuNLabel::Sine { mu, partner, sign },
            entries: (lmu - &lp) * half_over_i,
        });
    }
    for x in &out {
        let defect = anti_hermitian_defect(&x.entries);
        if defect > 1e-13 * max_abs(&x.entries).max(1.0) {
            return Err(Error::Format(format!("{} is not anti-hermitian ({defect:e})", x.label)));
        }
    }
    let expected = n * n - 1;
    let rank = real_rank(out.iter().map(|x| &x.entries), 1e-8);
    if rank != expected || out.len() != expected {
        return Err(Error::RankDeficient { rank, expected });
    }
    Ok(out)
}

/// Numerical rank of a stack of complex matrices viewed as real vectors.
pub fn real_rank<'a>(mats: impl Iterator<Item = &'a CMatrix>, threshold: f64) -> usize {
    let rows: Vec<Vec<f64>> = mats.map(|m| m.iter().flat_map(|c| [c.re, c.im]).collect()).collect();
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let a = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    a.singular_values().iter().filter(|&&s| s > threshold).count()
}
