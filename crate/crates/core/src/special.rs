//! Bessel functions of integer order and quadrature rules.

use std::sync::OnceLock;

/// `J_0(x), …, J_{n_max}(x)` by Miller's downward recurrence, normalised with
/// `J_0 + 2 Σ_k J_{2k} = 1`.
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    if x < 0.0 {
        let mut out = bessel_j_sequence(n_max, -x);
        for v in out.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
        return out;
    }
    if x < 1e-6 {
        return (0..=n_max).map(|n| small_argument(n, x)).collect();
    }
    let top = n_max.max(x.ceil() as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;

    let mut out = vec![0.0; n_max + 1];
    let (mut above, mut current) = (0.0_f64, 1e-30_f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        let order = k - 1;
        if order <= n_max {
            out[order] = current;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            const SHRINK: f64 = 1e-250;
            above *= SHRINK;
            current *= SHRINK;
            norm *= SHRINK;
            for v in out.iter_mut() {
                *v *= SHRINK;
            }
        }
    }
    norm += current;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

fn small_argument(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (1..=n).fold(1.0, |acc, k| acc * half / k as f64);
    lead * (1.0 - half * half / (n + 1) as f64)
}

/// `J_n(x)` for any integer order.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let order = n.unsigned_abs() as usize;
    let v = bessel_j_sequence(order, x)[order];
    if n < 0 && order % 2 == 1 {
        -v
    } else {
        v
    }
}

#[allow(clippy::excessive_precision)]
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 40;

/// Adaptive Gauss-Kronrod (7/15) quadrature of a vector-valued integrand;
/// intervals are bisected until every component's error estimate is below
/// `tol` scaled by the interval's share of `[a, b]`.
pub fn integrate_gk_vec(f: &impl Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64) -> Vec<f64> {
    if a == b {
        return vec![0.0; f(a).len()];
    }
    let mut out = Vec::new();
    gk_recurse(f, a, b, tol, (b - a).abs(), 0, &mut out);
    out
}

fn gk_recurse(f: &impl Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64, total: f64, depth: u32, acc: &mut Vec<f64>) {
    let (kronrod, gauss) = gk_panel(f, a, b);
    let error = kronrod
        .iter()
        .zip(&gauss)
        .map(|(k, g)| (k - g).abs())
        .fold(0.0, f64::max);
    let budget = tol * (b - a).abs() / total;
    if error <= budget.max(f64::EPSILON * 16.0 * max_abs(&kronrod)) || depth >= MAX_DEPTH {
        if acc.is_empty() {
            *acc = kronrod;
        } else {
            for (s, k) in acc.iter_mut().zip(kronrod) {
                *s += k;
            }
        }
        return;
    }
    let mid = 0.5 * (a + b);
    gk_recurse(f, a, mid, tol, total, depth + 1, acc);
    gk_recurse(f, mid, b, tol, total, depth + 1, acc);
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn gk_panel(f: &impl Fn(f64) -> Vec<f64>, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mid = f(center);
    let mut kronrod: Vec<f64> = mid.iter().map(|v| v * KRONROD_WEIGHTS[7]).collect();
    let mut gauss: Vec<f64> = mid.iter().map(|v| v * GAUSS_WEIGHTS[3]).collect();
    for (i, (&x, &wk)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).take(7).enumerate() {
        let lo = f(center - half * x);
        let hi = f(center + half * x);
        for c in 0..kronrod.len() {
            let pair = lo[c] + hi[c];
            kronrod[c] += wk * pair;
            if i % 2 == 1 {
                gauss[c] += GAUSS_WEIGHTS[i / 2] * pair;
            }
        }
    }
    for v in kronrod.iter_mut().chain(gauss.iter_mut()) {
        *v *= half;
    }
    (kronrod, gauss)
}

/// Scalar adaptive Gauss-Kronrod quadrature.
pub fn integrate_gk(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    integrate_gk_vec(&|x| vec![f(x)], a, b, tol)[0]
}

/// Absolute tolerance used for Bessel integrals.
pub const BESSEL_INTEGRAL_TOL: f64 = 1e-13;

/// `∫_0^x J_ℓ(t) dt` for `ℓ = 0..=n_max`.
pub fn bessel_integrals(n_max: usize, x: f64) -> Vec<f64> {
    integrate_gk_vec(&|t| bessel_j_sequence(n_max, t), 0.0, x, BESSEL_INTEGRAL_TOL)
}

/// `∫_0^x J_ℓ(t) dt`.
pub fn bessel_integral(order: i64, x: f64) -> f64 {
    integrate_gk(|t| bessel_j(order, t), 0.0, x, BESSEL_INTEGRAL_TOL)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[−1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss_legendre_16_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(16))
}

/// Fixed 16-point Gauss-Legendre quadrature of `f` over `[a, b]`.
pub fn gauss_legendre_16(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre_16_rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * nodes.iter().zip(weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series `Σ (−1)^k (x/2)^{2k+n} / (k! (k+n)!)`.
    fn series(n: u32, x: f64) -> f64 {
        let half = 0.5 * x;
        let mut term = (1..=n).fold(1.0, |t, k| t * half / k as f64);
        let mut sum = term;
        for k in 1..80 {
            term *= -half * half / (k as f64 * (k + n) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    }

    #[test]
    fn reference_values() {
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
    }

    #[test]
    fn matches_power_series() {
        for n in 0..30u32 {
            for &x in &[1e-7, 0.01, 0.3, 1.0, 2.5, 4.0, 7.0] {
                let got = bessel_j(n as i64, x);
                let want = series(n, x);
                // The series itself cancels badly once x exceeds a few units.
                let tol = if x <= 3.0 { 2e-15 * want.abs() } else { 1e-14 };
                assert!((got - want).abs() <= tol, "J_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn parity_relations() {
        for n in -6i64..=6 {
            for &x in &[0.2, 1.7, 3.3] {
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                assert_eq!(bessel_j(n, -x), sign * bessel_j(n, x));
                assert_eq!(bessel_j(-n, x), sign * bessel_j(n, x));
            }
        }
    }

    #[test]
    fn large_argument_recurrence_rescales() {
        let seq = bessel_j_sequence(5, 60.0);
        let sum: f64 = seq[0] + 2.0 * bessel_j_sequence(200, 60.0).iter().skip(2).step_by(2).sum::<f64>();
        assert!((sum - 1.0).abs() < 1e-13);
        assert!((seq[0] + 0.091_471_804_089_061_89).abs() < 1e-13);
    }

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = KRONROD_WEIGHTS[7] + 2.0 * KRONROD_WEIGHTS[..7].iter().sum::<f64>();
        let g: f64 = GAUSS_WEIGHTS[3] + 2.0 * GAUSS_WEIGHTS[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_kronrod_integrates_smooth_functions() {
        let v = integrate_gk(f64::sin, 0.0, std::f64::consts::PI, 1e-14);
        assert!((v - 2.0).abs() < 1e-14);
        let v = integrate_gk(|x| x.powi(9), -1.0, 2.0, 1e-13);
        assert!((v - (1024.0 - 1.0) / 10.0).abs() < 1e-11);
        assert_eq!(integrate_gk(f64::exp, 1.0, 1.0, 1e-13), 0.0);
        let v = integrate_gk(f64::cos, 1.0, 0.0, 1e-14);
        assert!((v + 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn bessel_integrals_match_neumann_series() {
        for &x in &[-1.3, 0.5, 2.0, 3.7] {
            let ints = bessel_integrals(12, x);
            let seq = bessel_j_sequence(80, x);
            for (nu, got) in ints.iter().enumerate() {
                let want: f64 = 2.0 * (0..25).map(|k| seq[nu + 2 * k + 1]).sum::<f64>();
                assert!((got - want).abs() < 1e-13, "ν={nu} x={x}");
            }
            assert!((bessel_integral(3, x) - ints[3]).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_legendre_exact_on_degree_31() {
        let (nodes, weights) = gauss_legendre_rule(16);
        assert!((weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let v = gauss_legendre_16(|x| x.powi(30) + x.powi(31), 0.0, 1.0);
        assert!((v - (1.0 / 31.0 + 1.0 / 32.0)).abs() < 1e-14);
    }
}
