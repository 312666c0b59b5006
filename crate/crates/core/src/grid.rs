//! Sampling grids and quadrature weights: uniform axes, Cartesian products,
//! direction sets on the unit circle/sphere, geometric scale grids, and the
//! product grid over direction x location x scale with its standard measure
//! `du db da / a^n`.

use ndarray::ArrayView3;
use num_complex::Complex64;

use crate::error::{Result, TransformError};
use crate::numeric::{trapezoid_weights, KahanComplex};

/// A uniform one-dimensional axis with `count` nodes from `min` to `max`
/// inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    min: f64,
    max: f64,
    count: usize,
}

impl Axis {
    /// Build a uniform axis. Requires `min < max`, `count >= 2`, finite ends.
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(TransformError::AxisInvalid(format!(
                "non-finite endpoints ({min}, {max})"
            )));
        }
        if min >= max {
            return Err(TransformError::AxisInvalid(format!(
                "min {min} must be below max {max}"
            )));
        }
        if count < 2 {
            return Err(TransformError::AxisInvalid(format!(
                "need at least 2 nodes, got {count}"
            )));
        }
        Ok(Self { min, max, count })
    }

    /// Axis symmetric about zero: `[-halfwidth, halfwidth]`.
    pub fn symmetric(halfwidth: f64, count: usize) -> Result<Self> {
        if !(halfwidth > 0.0) {
            return Err(TransformError::AxisInvalid(format!(
                "halfwidth must be positive, got {halfwidth}"
            )));
        }
        Self::new(-halfwidth, halfwidth, count)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count as f64 - 1.0)
    }

    pub fn value(&self, index: usize) -> f64 {
        self.min + index as f64 * self.spacing()
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    /// True when the axis is mirror-symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        (self.min + self.max).abs() <= 1e-12 * (self.max - self.min)
    }

    /// Index of the node closest to zero, if zero lies inside the range.
    pub fn index_of_zero(&self) -> Option<usize> {
        if self.min > 0.0 || self.max < 0.0 {
            return None;
        }
        let i = (-self.min / self.spacing()).round() as usize;
        Some(i.min(self.count - 1))
    }

    /// True when some node coincides with zero (to within rounding).
    pub fn contains_zero_node(&self) -> bool {
        match self.index_of_zero() {
            Some(i) => self.value(i).abs() <= 1e-12 * self.spacing().max(1.0),
            None => false,
        }
    }

    /// Trapezoid quadrature weights over this axis (endpoints halved).
    pub fn quadrature_weights(&self) -> Vec<f64> {
        trapezoid_weights(self.count, self.spacing())
    }
}

/// A uniform Cartesian grid in dimension 2 or 3.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGrid {
    axes: Vec<Axis>,
}

impl CartesianGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        let n = axes.len();
        if n != 2 && n != 3 {
            return Err(TransformError::UnsupportedDimension(n));
        }
        Ok(Self { axes })
    }

    /// Square (or cubic) grid symmetric about the origin.
    pub fn centered(dim: usize, halfwidth: f64, count: usize) -> Result<Self> {
        let axis = Axis::symmetric(halfwidth, count)?;
        Self::new(vec![axis; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, d: usize) -> &Axis {
        &self.axes[d]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count()).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    /// Coordinates of the node at `indices` (zero-padded to length 3).
    pub fn point(&self, indices: &[usize]) -> [f64; 3] {
        debug_assert_eq!(indices.len(), self.dim());
        let mut p = [0.0; 3];
        for (d, &i) in indices.iter().enumerate() {
            p[d] = self.axes[d].value(i);
        }
        p
    }

    /// Radius of the largest coordinate box corner, an upper bound for
    /// `|x . u|` over all grid points and unit directions.
    pub fn corner_radius(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.min().abs().max(a.max().abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Quadrature nodes on the unit circle (n=2) or unit sphere (n=3).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dim: usize,
    directions: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl DirectionSet {
    /// Equidistributed directions: uniform angles on the circle, a Fibonacci
    /// lattice on the sphere. `count >= 4` in both cases.
    pub fn equidistributed(dim: usize, count: usize) -> Result<Self> {
        match dim {
            2 => Self::uniform_circle(count),
            3 => Self::fibonacci_sphere(count),
            other => Err(TransformError::UnsupportedDimension(other)),
        }
    }

    /// Uniformly spaced angles `theta_k = 2 pi k / count` with equal weights
    /// summing to the circle length `2 pi`.
    pub fn uniform_circle(count: usize) -> Result<Self> {
        if count < 4 {
            return Err(TransformError::AxisInvalid(format!(
                "need at least 4 directions, got {count}"
            )));
        }
        let w = 2.0 * std::f64::consts::PI / count as f64;
        let mut directions = Vec::with_capacity(count);
        for k in 0..count {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            directions.push([theta.cos(), theta.sin(), 0.0]);
        }
        Ok(Self {
            dim: 2,
            directions,
            weights: vec![w; count],
        })
    }

    /// Fibonacci-lattice points on the sphere with equal weights summing to
    /// the sphere area `4 pi`.
    pub fn fibonacci_sphere(count: usize) -> Result<Self> {
        if count < 4 {
            return Err(TransformError::AxisInvalid(format!(
                "need at least 4 directions, got {count}"
            )));
        }
        let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let w = 4.0 * std::f64::consts::PI / count as f64;
        let mut directions = Vec::with_capacity(count);
        for k in 0..count {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * std::f64::consts::PI * (k as f64 / golden).fract();
            directions.push([r * phi.cos(), r * phi.sin(), z]);
        }
        Ok(Self {
            dim: 3,
            directions,
            weights: vec![w; count],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// The k-th unit direction as a slice of length `dim`.
    pub fn direction(&self, k: usize) -> &[f64] {
        &self.directions[k][..self.dim]
    }

    /// The k-th direction zero-padded to length 3 (handy for dot products
    /// against padded grid points).
    pub fn direction_padded(&self, k: usize) -> [f64; 3] {
        self.directions[k]
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Index of the antipode of direction `k`, when the set is closed under
    /// the antipodal map (uniform circle with even count).
    pub fn antipodal_index(&self, k: usize) -> Option<usize> {
        if self.dim == 2 && self.len() % 2 == 0 {
            Some((k + self.len() / 2) % self.len())
        } else {
            None
        }
    }
}

/// Geometrically spaced scale nodes `a_j = a_min * exp(j * log_step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleGrid {
    a_min: f64,
    a_max: f64,
    count: usize,
    log_step: f64,
    values: Vec<f64>,
}

impl ScaleGrid {
    pub fn new(a_min: f64, a_max: f64, count: usize) -> Result<Self> {
        if !(a_min > 0.0) || !a_min.is_finite() || !a_max.is_finite() {
            return Err(TransformError::AxisInvalid(format!(
                "scale bounds must be positive and finite, got ({a_min}, {a_max})"
            )));
        }
        if a_min >= a_max {
            return Err(TransformError::AxisInvalid(format!(
                "scale min {a_min} must be below max {a_max}"
            )));
        }
        if count < 2 {
            return Err(TransformError::AxisInvalid(format!(
                "need at least 2 scale nodes, got {count}"
            )));
        }
        let log_step = (a_max / a_min).ln() / (count as f64 - 1.0);
        let values = (0..count)
            .map(|j| a_min * (j as f64 * log_step).exp())
            .collect();
        Ok(Self {
            a_min,
            a_max,
            count,
            log_step,
            values,
        })
    }

    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    pub fn a_max(&self) -> f64 {
        self.a_max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Product grid over direction x location x scale, carrying the quadrature
/// for the measure `du db da / a^n` (trapezoid in `log a`, endpoint halving
/// on both the location axis and the scale axis).
#[derive(Debug, Clone, PartialEq)]
pub struct YGrid {
    directions: DirectionSet,
    b_axis: Axis,
    scales: ScaleGrid,
    b_weights: Vec<f64>,
    scale_weights: Vec<f64>,
}

impl YGrid {
    pub fn new(directions: DirectionSet, b_axis: Axis, scales: ScaleGrid) -> Self {
        let n = directions.dim() as i32;
        let b_weights = b_axis.quadrature_weights();
        let count = scales.count();
        let mut scale_weights = Vec::with_capacity(count);
        for j in 0..count {
            let halve = if j == 0 || j == count - 1 { 0.5 } else { 1.0 };
            // da / a^n = a^{1-n} d(log a)
            scale_weights.push(halve * scales.log_step() * scales.value(j).powi(1 - n));
        }
        Self {
            directions,
            b_axis,
            scales,
            b_weights,
            scale_weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn b_axis(&self) -> &Axis {
        &self.b_axis
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    /// (direction count, location count, scale count)
    pub fn shape(&self) -> (usize, usize, usize) {
        (
            self.directions.len(),
            self.b_axis.count(),
            self.scales.count(),
        )
    }

    /// Quadrature weight of the node `(u_k, b_i, a_j)`.
    pub fn node_weight(&self, k: usize, i: usize, j: usize) -> f64 {
        self.directions.weight(k) * self.b_weights[i] * self.scale_weights[j]
    }

    pub fn b_weights(&self) -> &[f64] {
        &self.b_weights
    }

    pub fn scale_weights(&self) -> &[f64] {
        &self.scale_weights
    }

    fn check_shape(&self, shape: &[usize]) -> Result<()> {
        let want = self.shape();
        if shape != [want.0, want.1, want.2] {
            return Err(TransformError::ShapeMismatch {
                expected: format!("{:?}", [want.0, want.1, want.2]),
                found: format!("{shape:?}"),
            });
        }
        Ok(())
    }

    /// Discretization of the integral of `F` over the product space with the
    /// standard measure: a deterministic compensated sum over (direction,
    /// location, scale) in index order.
    pub fn integrate(&self, values: ArrayView3<'_, Complex64>) -> Result<Complex64> {
        self.check_shape(values.shape())?;
        let (nk, ni, nj) = self.shape();
        let mut acc = KahanComplex::new();
        for k in 0..nk {
            let wk = self.directions.weight(k);
            for i in 0..ni {
                let wki = wk * self.b_weights[i];
                for j in 0..nj {
                    acc.add(values[[k, i, j]] * (wki * self.scale_weights[j]));
                }
            }
        }
        Ok(acc.value())
    }

    /// Integral of the pointwise product of two fields over the grid, with
    /// the same deterministic summation order as [`YGrid::integrate`].
    pub fn integrate_product(
        &self,
        a: ArrayView3<'_, Complex64>,
        b: ArrayView3<'_, Complex64>,
    ) -> Result<Complex64> {
        self.check_shape(a.shape())?;
        self.check_shape(b.shape())?;
        let (nk, ni, nj) = self.shape();
        let mut acc = KahanComplex::new();
        for k in 0..nk {
            let wk = self.directions.weight(k);
            for i in 0..ni {
                let wki = wk * self.b_weights[i];
                for j in 0..nj {
                    acc.add(a[[k, i, j]] * b[[k, i, j]] * (wki * self.scale_weights[j]));
                }
            }
        }
        Ok(acc.value())
    }
}
