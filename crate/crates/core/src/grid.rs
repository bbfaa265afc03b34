//! Uniform tensor-product spacetime grids.

use crate::error::{Error, Result};
use crate::fourier::{FourierField, Hbar};

/// Uniformly spaced, strictly increasing samples `start + i·step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformAxis {
    start: f64,
    step: f64,
    len: usize,
}

impl UniformAxis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "axis needs a finite start and positive step, got start={start}, step={step}"
            )));
        }
        if len == 0 {
            return Err(Error::InvalidGrid("axis must have at least one sample".into()));
        }
        Ok(Self { start, step, len })
    }

    /// `len` samples from `start` to `end` inclusive.
    pub fn spanning(start: f64, end: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidGrid("a spanning axis needs at least two samples".into()));
        }
        Self::new(start, (end - start) / (len - 1) as f64, len)
    }

    /// Same interval with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            start: self.start,
            step: 0.5 * self.step,
            len: 2 * self.len - 1,
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.coord(self.len - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index of the sample at `x`, if `x` lies on the axis within `tol·step`.
    pub fn index_of(&self, x: f64, tol: f64) -> Option<usize> {
        let t = (x - self.start) / self.step;
        let i = t.round();
        ((t - i).abs() <= tol && i >= 0.0 && (i as usize) < self.len).then_some(i as usize)
    }
}

/// Tensor product of uniform axes; flat indices are row-major with the last
/// axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeGrid {
    axes: Vec<UniformAxis>,
}

impl SpacetimeGrid {
    pub fn new(axes: Vec<UniformAxis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one axis".into()));
        }
        Ok(Self { axes })
    }

    /// The `(w, z)` plane.
    pub fn plane(w: UniformAxis, z: UniformAxis) -> Self {
        Self { axes: vec![w, z] }
    }

    pub fn refined(&self) -> Self {
        Self {
            axes: self.axes.iter().map(UniformAxis::refined).collect(),
        }
    }

    pub fn axes(&self) -> &[UniformAxis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &UniformAxis {
        &self.axes[k]
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(UniformAxis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest step over all axes.
    pub fn spacing(&self) -> f64 {
        self.axes.iter().map(UniformAxis::step).fold(0.0, f64::max)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(UniformAxis::len).product()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| acc * a.len() + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            idx[k] = flat % a.len();
            flat /= a.len();
        }
        idx
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.coord(i))
            .collect()
    }

    /// Flat index of the point at `coords`, if it is a grid point.
    pub fn locate(&self, coords: &[f64]) -> Option<usize> {
        let idx: Option<Vec<usize>> = coords
            .iter()
            .zip(&self.axes)
            .map(|(&x, a)| a.index_of(x, 1e-9))
            .collect();
        idx.map(|i| self.flat_index(&i))
    }

    /// Points at least `margin` samples away from every boundary, in flat order.
    pub fn interior(&self, margin: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&f| {
                self.multi_index(f)
                    .iter()
                    .zip(&self.axes)
                    .all(|(&i, a)| i >= margin && i + margin < a.len())
            })
            .collect()
    }

    pub fn require_stencil(&self, needed: usize) -> Result<()> {
        for (axis, a) in self.axes.iter().enumerate() {
            if a.len() < needed {
                return Err(Error::GridTooSmall {
                    axis,
                    len: a.len(),
                    needed,
                });
            }
        }
        Ok(())
    }
}

/// A field on the torus sampled at every point of a spacetime grid.
#[derive(Clone, Debug)]
pub struct GriddedFourierField {
    grid: SpacetimeGrid,
    values: Vec<FourierField>,
    hbar: f64,
}

impl GriddedFourierField {
    /// `hbar` records the deformation the samples belong to; zero marks a
    /// classical field.
    pub fn new(grid: SpacetimeGrid, values: Vec<FourierField>, hbar: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridShapeMismatch {
                points: grid.len(),
                values: values.len(),
            });
        }
        if !(hbar.is_finite() && hbar >= 0.0) {
            return Err(Error::InvalidHbar(hbar));
        }
        Ok(Self { grid, values, hbar })
    }

    /// Samples `f(coords)` at every grid point.
    pub fn sample(grid: SpacetimeGrid, hbar: f64, f: impl Fn(&[f64]) -> FourierField + Sync) -> Result<Self> {
        use rayon::prelude::*;
        let values = (0..grid.len()).into_par_iter().map(|i| f(&grid.coords(i))).collect();
        Self::new(grid, values, hbar)
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[FourierField] {
        &self.values
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn moyal_hbar(&self) -> Result<Hbar> {
        Hbar::new(self.hbar)
    }

    pub fn band_limit(&self) -> u32 {
        self.values.iter().map(FourierField::band_limit).max().unwrap_or(0)
    }
}
