use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// A point `(w, z, w̃, z̃)`.
pub type KahlerPoint = [f64; 4];

pub type PotentialFn = Arc<dyn Fn(&KahlerPoint) -> f64 + Send + Sync>;
/// Closed-form `g_{αβ̃}` with rows `α ∈ {w, z}` and columns `β̃ ∈ {w̃, z̃}`.
pub type MetricFn = Arc<dyn Fn(&KahlerPoint) -> Matrix2<f64> + Send + Sync>;
pub type GFactorFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A Kähler background `g_{αβ̃} = ∂_α ∂_β̃ 𝒦` with `det g = G(w, z) G̃(w̃, z̃)`.
#[derive(Clone)]
pub struct KahlerBackground {
    potential: PotentialFn,
    metric: Option<MetricFn>,
    g_factor: GFactorFn,
    fd_step: f64,
}

impl fmt::Debug for KahlerBackground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KahlerBackground")
            .field("closed_form_metric", &self.metric.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl KahlerBackground {
    /// Background from a potential and the holomorphic factor `G` of `det g`;
    /// the metric is taken by central differences of the potential.
    pub fn new(potential: PotentialFn, g_factor: GFactorFn) -> Self {
        Self {
            potential,
            metric: None,
            g_factor,
            fd_step: 1e-3,
        }
    }

    /// `𝒦 = w w̃ + z z̃`, `g = I`, `G = 1`.
    pub fn flat() -> Self {
        Self::new(
            Arc::new(|x: &KahlerPoint| x[0] * x[2] + x[1] * x[3]),
            Arc::new(|_, _| 1.0),
        )
        .with_metric(Arc::new(|_: &KahlerPoint| Matrix2::identity()))
    }

    pub fn with_metric(mut self, metric: MetricFn) -> Self {
        self.metric = Some(metric);
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn potential(&self, x: &KahlerPoint) -> f64 {
        (self.potential)(x)
    }

    pub fn g_factor(&self, w: f64, z: f64) -> f64 {
        (self.g_factor)(w, z)
    }

    /// `g_{αβ̃}` at `x`.
    pub fn metric_at(&self, x: &KahlerPoint) -> Matrix2<f64> {
        if let Some(m) = &self.metric {
            return m(x);
        }
        let h = self.fd_step;
        let k = |da: usize, sa: f64, db: usize, sb: f64| {
            let mut y = *x;
            y[da] += sa * h;
            y[db] += sb * h;
            self.potential(&y)
        };
        Matrix2::from_fn(|alpha, beta| {
            let b = beta + 2;
            (k(alpha, 1.0, b, 1.0) - k(alpha, 1.0, b, -1.0) - k(alpha, -1.0, b, 1.0) + k(alpha, -1.0, b, -1.0))
                / (4.0 * h * h)
        })
    }

    /// `g^{β̃α}`: rows `β̃ ∈ {w̃, z̃}`, columns `α ∈ {w, z}`.
    pub fn inverse_metric_at(&self, x: &KahlerPoint) -> Result<Matrix2<f64>> {
        let g = self.metric_at(x);
        let scale = g.abs().max().max(1.0);
        if g.determinant().abs() <= 1e-12 * scale * scale {
            return Err(Error::SingularMetric {
                point: *x,
                reason: format!("det g = {:e}", g.determinant()),
            });
        }
        g.try_inverse().ok_or_else(|| Error::SingularMetric {
            point: *x,
            reason: "metric is not invertible".into(),
        })
    }

    /// `ε^{αβ}` with `ε^{wz} = 1`.
    pub fn epsilon() -> Matrix2<f64> {
        Matrix2::new(0.0, 1.0, -1.0, 0.0)
    }

    /// `max |g_{αβ̃} − g_{βα̃}|`, which vanishes for a real potential on the
    /// real slice.
    pub fn hermiticity_defect(&self, x: &KahlerPoint) -> f64 {
        let g = self.metric_at(x);
        (g - g.transpose()).abs().max()
    }
}
