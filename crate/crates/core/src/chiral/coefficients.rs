use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::bessel_integrals;

/// Target truncation error of every coefficient.
pub const TRUNCATION_TOL: f64 = 1e-12;
/// Default `|z|` range over which truncations are certified.
pub const DEFAULT_Z_RANGE: f64 = 2.0;

/// `(N/π) sin(π/N)`, the frequency `(2/ħ) sin(ħ/2)` at `ħ = 2π/N`.
pub fn frequency(n: usize) -> f64 {
    let n = n as f64;
    n / PI * (PI / n).sin()
}

/// `|∫_0^x J_n| ≤ 2 (|x|/2)^{n+1} / (n+1)!`, from `|J_n(t)| ≤ (|t|/2)^n / n!`.
pub fn integral_bound(n: usize, x: f64) -> f64 {
    let half = 0.5 * x.abs();
    let mut term = 2.0;
    for k in 1..=n + 1 {
        term *= half / k as f64;
    }
    term
}

/// Which coefficient of the parity-resolved chiral field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    /// `a_{2ν−1}`.
    AOdd,
    /// `a_{2ν}`.
    AEven,
    /// `b_{2ν−1}` (odd `N` only).
    BOdd,
    /// `b_{2ν}` (odd `N` only).
    BEven,
    /// `a_0`.
    A0,
    /// `b_0` (odd `N` only).
    B0,
}

/// `c(z) = (sign / s) [Σ_{t ≥ t₀} w_t ∫_0^{zs} J_{base + step·t} + j0 ∫_0^{zs} J_0]`
/// with `s = (N/π) sin(π/N)`, truncated where the tail drops below
/// [`TRUNCATION_TOL`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselCoefficient {
    kind: CoefficientKind,
    nu: usize,
    n: usize,
    sign: f64,
    base: usize,
    step: usize,
    first: usize,
    alternating: bool,
    weight: f64,
    j0: f64,
    truncation: usize,
    tail_bound: f64,
}

impl BesselCoefficient {
    /// Coefficient certified for `|z| ≤ DEFAULT_Z_RANGE`.
    pub fn new(kind: CoefficientKind, nu: usize, n: usize) -> Result<Self> {
        Self::with_range(kind, nu, n, DEFAULT_Z_RANGE)
    }

    pub fn with_range(kind: CoefficientKind, nu: usize, n: usize, z_range: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let even = n % 2 == 0;
        let half = n / 2;
        let parity = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        let bad = || Error::InvalidInput(format!("{kind:?} with ν = {nu} does not occur for N = {n}"));
        let odd_top = (n - 1) / 2;
        // (sign, base, step, first, alternating, weight, j0)
        let layout = match (kind, even) {
            (CoefficientKind::AOdd, true) if (1..=half).contains(&nu) => {
                (parity(nu), 2 * nu - 1, n, 0, half % 2 == 1, 1.0, 0.0)
            }
            (CoefficientKind::AEven, true) if nu >= 1 && nu < half => {
                (parity(nu + 1), 2 * nu, n, 0, half % 2 == 1, 1.0, 0.0)
            }
            (CoefficientKind::A0, true) if nu == 0 => (-1.0, 0, n, 1, half % 2 == 1, 2.0, 1.0),
            (CoefficientKind::AOdd, false) if (1..=odd_top).contains(&nu) => {
                (parity(nu), 2 * nu - 1, 2 * n, 0, true, 1.0, 0.0)
            }
            (CoefficientKind::AEven, false) if (1..=odd_top).contains(&nu) => {
                (parity(nu + n.div_ceil(2)), 2 * nu + n, 2 * n, 0, true, 1.0, 0.0)
            }
            (CoefficientKind::A0, false) if nu == 0 => (parity(n.div_ceil(2)), n, 2 * n, 0, true, 1.0, 0.0),
            (CoefficientKind::BOdd, false) if (1..=odd_top).contains(&nu) => {
                (parity(nu + n.div_ceil(2)), 2 * nu - 1 + n, 2 * n, 0, true, 1.0, 0.0)
            }
            (CoefficientKind::BEven, false) if (1..=odd_top).contains(&nu) => {
                (parity(nu + 1), 2 * nu, 2 * n, 0, true, 1.0, 0.0)
            }
            (CoefficientKind::B0, false) if nu == 0 => (-1.0, 0, 2 * n, 1, true, 2.0, 1.0),
            _ => return Err(bad()),
        };
        let (sign, base, step, first, alternating, weight, j0) = layout;
        let mut c = Self {
            kind,
            nu,
            n,
            sign,
            base,
            step,
            first,
            alternating,
            weight,
            j0,
            truncation: 0,
            tail_bound: 0.0,
        };
        c.certify(z_range);
        Ok(c)
    }

    fn certify(&mut self, z_range: f64) {
        let s = frequency(self.n);
        let x = z_range.abs() * s;
        let scale = self.weight / s;
        let tail = |from: usize| -> f64 {
            (from..from + 64)
                .map(|t| scale * integral_bound(self.order(t), x))
                .sum()
        };
        let mut count = 0;
        while tail(self.first + count) >= TRUNCATION_TOL {
            count += 1;
        }
        let bound = tail(self.first + count);
        self.truncation = count;
        self.tail_bound = bound;
    }

    fn order(&self, t: usize) -> usize {
        self.base + self.step * t
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of retained terms of the infinite sum.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Bound on the dropped terms over the certified `z` range.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Highest Bessel order used.
    pub fn max_order(&self) -> usize {
        if self.truncation == 0 {
            0
        } else {
            self.order(self.first + self.truncation - 1)
        }
    }

    /// Value from precomputed `∫_0^{zs} J_ℓ`, `ℓ = 0..`.
    pub fn value_from(&self, integrals: &[f64]) -> f64 {
        let mut sum = self.j0 * integrals[0];
        for t in self.first..self.first + self.truncation {
            let sign = if self.alternating && t % 2 == 1 { -1.0 } else { 1.0 };
            sum += self.weight * sign * integrals[self.order(t)];
        }
        self.sign * sum / frequency(self.n)
    }

    /// `c(z)`.
    pub fn value(&self, z: f64) -> f64 {
        let integrals = bessel_integrals(self.max_order(), z * frequency(self.n));
        self.value_from(&integrals)
    }
}

/// Every coefficient entering `ϑ_N`, sharing one table of Bessel integrals.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralCoefficients {
    n: usize,
    coefficients: Vec<BesselCoefficient>,
}

impl ChiralCoefficients {
    pub fn new(n: usize, z_range: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let mut coefficients = Vec::new();
        let mut push = |kind, nu| -> Result<()> {
            coefficients.push(BesselCoefficient::with_range(kind, nu, n, z_range)?);
            Ok(())
        };
        if n % 2 == 0 {
            for nu in 1..=n / 2 {
                push(CoefficientKind::AOdd, nu)?;
            }
            for nu in 1..n / 2 {
                push(CoefficientKind::AEven, nu)?;
            }
            push(CoefficientKind::A0, 0)?;
        } else {
            for nu in 1..=(n - 1) / 2 {
                push(CoefficientKind::AOdd, nu)?;
                push(CoefficientKind::AEven, nu)?;
                push(CoefficientKind::BOdd, nu)?;
                push(CoefficientKind::BEven, nu)?;
            }
            push(CoefficientKind::A0, 0)?;
            push(CoefficientKind::B0, 0)?;
        }
        Ok(Self { n, coefficients })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[BesselCoefficient] {
        &self.coefficients
    }

    /// Largest tail bound over all coefficients.
    pub fn tail_bound(&self) -> f64 {
        self.coefficients.iter().map(|c| c.tail_bound).fold(0.0, f64::max)
    }

    /// All values at `z`, in the order of [`coefficients`](Self::coefficients).
    pub fn values(&self, z: f64) -> Vec<(CoefficientKind, usize, f64)> {
        let top = self
            .coefficients
            .iter()
            .map(BesselCoefficient::max_order)
            .max()
            .unwrap_or(0);
        let integrals = bessel_integrals(top, z * frequency(self.n));
        self.coefficients
            .iter()
            .map(|c| (c.kind, c.nu, c.value_from(&integrals)))
            .collect()
    }
}
