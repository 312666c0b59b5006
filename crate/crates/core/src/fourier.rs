//! Fourier analysis under the convention `f_hat(w) = int f(x) e^{-i x.w} dx`:
//! n-D FFT of sampled fields with grid-offset phase correction, nonuniform
//! evaluation of spectra along polar rays `f_hat(w u)`, and polar Fourier
//! inversion.

use ndarray::{Array2, ArrayD, IxDyn};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::activation::ActivationFunction;
use crate::error::{Result, TransformError};
use crate::grid::{Axis, CartesianGrid, DirectionSet};
use crate::numeric::{simpson_coefficients, KahanComplex};

/// Complex values of a function on a uniform Cartesian grid.
#[derive(Debug, Clone)]
pub struct SampledField {
    grid: CartesianGrid,
    values: ArrayD<Complex64>,
}

impl SampledField {
    pub fn new(grid: CartesianGrid, values: ArrayD<Complex64>) -> Result<Self> {
        if values.shape() != grid.shape().as_slice() {
            return Err(TransformError::ShapeMismatch {
                expected: format!("{:?}", grid.shape()),
                found: format!("{:?}", values.shape()),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: CartesianGrid) -> Self {
        let shape = grid.shape();
        Self {
            grid,
            values: ArrayD::zeros(IxDyn(&shape)),
        }
    }

    /// Sample a function of the (zero-padded) grid point coordinates.
    pub fn from_fn<F>(grid: CartesianGrid, f: F) -> Self
    where
        F: Fn(&[f64; 3]) -> Complex64,
    {
        let shape = grid.shape();
        let values = ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
            let mut p = [0.0; 3];
            for d in 0..grid.dim() {
                p[d] = grid.axis(d).value(idx[d]);
            }
            f(&p)
        });
        Self { grid, values }
    }

    pub fn from_source(grid: CartesianGrid, source: &SourceFunction) -> Self {
        Self::from_fn(grid, |p| source.value_padded(p))
    }

    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.values
    }

    /// Riemann integral over the grid: compensated sum times cell volume.
    pub fn integral(&self) -> Complex64 {
        let mut acc = KahanComplex::new();
        for v in self.values.iter() {
            acc.add(*v);
        }
        acc.value() * self.grid.cell_volume()
    }

    /// Integral of the pointwise product `f.g` (no conjugation).
    pub fn inner(&self, other: &SampledField) -> Result<Complex64> {
        if self.values.shape() != other.values.shape() {
            return Err(TransformError::ShapeMismatch {
                expected: format!("{:?}", self.values.shape()),
                found: format!("{:?}", other.values.shape()),
            });
        }
        let mut acc = KahanComplex::new();
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            acc.add(a * b);
        }
        Ok(acc.value() * self.grid.cell_volume())
    }

    /// Discrete L2 norm: sqrt of the Riemann integral of `|f|^2`.
    pub fn norm_l2(&self) -> f64 {
        let mut acc = crate::numeric::KahanSum::new();
        for v in self.values.iter() {
            acc.add(v.norm_sqr());
        }
        (acc.value() * self.grid.cell_volume()).sqrt()
    }

    /// Relative L2 error of `self` against `reference` on the shared grid.
    pub fn rel_l2_error(&self, reference: &SampledField) -> Result<f64> {
        if self.values.shape() != reference.values.shape() {
            return Err(TransformError::ShapeMismatch {
                expected: format!("{:?}", reference.values.shape()),
                found: format!("{:?}", self.values.shape()),
            });
        }
        let mut num = crate::numeric::KahanSum::new();
        let mut den = crate::numeric::KahanSum::new();
        for (a, b) in self.values.iter().zip(reference.values.iter()) {
            num.add((a - b).norm_sqr());
            den.add(b.norm_sqr());
        }
        Ok((num.value() / den.value().max(f64::MIN_POSITIVE)).sqrt())
    }
}

/// Analytic source functions with closed-form spectra.
#[derive(Debug, Clone)]
enum SourceKind {
    /// Sum of unit-width Gaussian bumps `sum_i c_i e^{-|x - y_i|^2}`.
    GaussianSum(Vec<(Complex64, [f64; 3])>),
    /// Separable product of flat-spectrum profiles, one per coordinate:
    /// every moment vanishes, so the function lies in the Lizorkin class.
    LizorkinProduct(ActivationFunction),
}

/// An analytic source in dimension 2 or 3 with exact values and spectrum.
#[derive(Debug, Clone)]
pub struct SourceFunction {
    dim: usize,
    kind: SourceKind,
}

impl SourceFunction {
    /// The unit Gaussian `e^{-|x|^2}`.
    pub fn gaussian(dim: usize) -> Result<Self> {
        Self::gaussian_at(dim, &[0.0; 3])
    }

    /// A shifted Gaussian `e^{-|x - center|^2}`.
    pub fn gaussian_at(dim: usize, center: &[f64]) -> Result<Self> {
        Self::gaussian_sum(dim, vec![(Complex64::new(1.0, 0.0), pad(center))])
    }

    /// A weighted sum of shifted Gaussians.
    pub fn gaussian_sum(dim: usize, terms: Vec<(Complex64, [f64; 3])>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(TransformError::UnsupportedDimension(dim));
        }
        Ok(Self {
            dim,
            kind: SourceKind::GaussianSum(terms),
        })
    }

    /// The separable Lizorkin-class bump (product of flat-spectrum profiles).
    pub fn lizorkin_product(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(TransformError::UnsupportedDimension(dim));
        }
        Ok(Self {
            dim,
            kind: SourceKind::LizorkinProduct(ActivationFunction::lizorkin_bump()),
        })
    }

    /// Parse a catalog name: `gaussian`, `gaussian(cx,cy[,cz])`, or
    /// `lizorkin` / `lizorkin_product`.
    pub fn parse(name: &str, dim: usize) -> Result<Self> {
        let trimmed = name.trim();
        match trimmed {
            "gaussian" | "gauss" => return Self::gaussian(dim),
            "lizorkin" | "lizorkin_product" => return Self::lizorkin_product(dim),
            _ => {}
        }
        if let Some(args) = trimmed
            .strip_prefix("gaussian(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if parts.len() != dim {
                return Err(TransformError::UnknownCatalogEntry(format!(
                    "{trimmed}: expected {dim} center coordinates"
                )));
            }
            let mut center = [0.0; 3];
            for (d, part) in parts.iter().enumerate() {
                center[d] = part
                    .parse::<f64>()
                    .map_err(|_| TransformError::UnknownCatalogEntry(trimmed.to_string()))?;
            }
            return Self::gaussian_at(dim, &center);
        }
        Err(TransformError::UnknownCatalogEntry(trimmed.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Point value; `x` must have at least `dim` coordinates.
    pub fn value(&self, x: &[f64]) -> Complex64 {
        let mut p = [0.0; 3];
        p[..self.dim].copy_from_slice(&x[..self.dim]);
        self.value_padded(&p)
    }

    fn value_padded(&self, x: &[f64; 3]) -> Complex64 {
        match &self.kind {
            SourceKind::GaussianSum(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, y) in terms {
                    let mut r2 = 0.0;
                    for d in 0..self.dim {
                        let t = x[d] - y[d];
                        r2 += t * t;
                    }
                    acc += c * (-r2).exp();
                }
                acc
            }
            SourceKind::LizorkinProduct(profile) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for d in 0..self.dim {
                    acc *= profile.psi(x[d]);
                }
                acc
            }
        }
    }

    /// Closed-form spectrum at `w` (at least `dim` coordinates used).
    pub fn spectrum(&self, w: &[f64]) -> Complex64 {
        match &self.kind {
            SourceKind::GaussianSum(terms) => {
                let mut w2 = 0.0;
                for wd in w.iter().take(self.dim) {
                    w2 += wd * wd;
                }
                let envelope = PI.powf(self.dim as f64 / 2.0) * (-w2 / 4.0).exp();
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, y) in terms {
                    let mut dot = 0.0;
                    for d in 0..self.dim {
                        dot += y[d] * w[d];
                    }
                    acc += c * Complex64::new(0.0, -dot).exp();
                }
                acc * envelope
            }
            SourceKind::LizorkinProduct(profile) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for wd in w.iter().take(self.dim) {
                    acc *= profile.psi_hat(*wd);
                }
                acc
            }
        }
    }

    /// Spectrum on the polar ray: `f_hat(omega * u)`.
    pub fn slice_spectrum(&self, u: &[f64], omega: f64) -> Complex64 {
        let mut w = [0.0; 3];
        for d in 0..self.dim {
            w[d] = omega * u[d];
        }
        self.spectrum(&w[..self.dim])
    }

    /// Radius beyond which the source is negligible.
    pub fn support_radius(&self) -> f64 {
        match &self.kind {
            SourceKind::GaussianSum(terms) => {
                let far = terms
                    .iter()
                    .map(|(_, y)| (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt())
                    .fold(0.0, f64::max);
                far + 9.0
            }
            SourceKind::LizorkinProduct(profile) => {
                profile.space_support() * (self.dim as f64).sqrt()
            }
        }
    }
}

fn pad(x: &[f64]) -> [f64; 3] {
    let mut p = [0.0; 3];
    p[..x.len().min(3)].copy_from_slice(&x[..x.len().min(3)]);
    p
}

/// Input to slice-based transforms: either samples on a grid or an analytic
/// source with a closed-form spectrum.
#[derive(Debug, Clone, Copy)]
pub enum SliceSource<'a> {
    Sampled(&'a SampledField),
    Analytic(&'a SourceFunction),
}

impl<'a> SliceSource<'a> {
    pub fn dim(&self) -> usize {
        match self {
            SliceSource::Sampled(field) => field.grid().dim(),
            SliceSource::Analytic(source) => source.dim(),
        }
    }

    /// The source sampled on `grid`. An already-sampled source must live on
    /// that same grid.
    pub fn sample(&self, grid: &CartesianGrid) -> Result<SampledField> {
        match self {
            SliceSource::Sampled(field) => {
                if field.grid() != grid {
                    return Err(TransformError::ShapeMismatch {
                        expected: format!("{:?}", grid.shape()),
                        found: format!("{:?}", field.grid().shape()),
                    });
                }
                Ok((*field).clone())
            }
            SliceSource::Analytic(source) => Ok(SampledField::from_source(grid.clone(), source)),
        }
    }
}

/// Spectrum values on the dual grid of a Cartesian grid, with per-axis
/// frequency vectors in FFT order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: CartesianGrid,
    freqs: Vec<Vec<f64>>,
    values: ArrayD<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    /// Frequency of index `m` along axis `d` (FFT ordering: nonnegative
    /// frequencies first, then negative).
    pub fn frequency(&self, d: usize, m: usize) -> f64 {
        self.freqs[d][m]
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    /// Index of the frequency `-w` when `w` has index `m` along an axis.
    pub fn mirror_index(&self, d: usize, m: usize) -> usize {
        let n = self.freqs[d].len();
        (n - m) % n
    }
}

/// Discrete approximation of `int f(x) e^{-i x.w} dx` on the dual grid:
/// an FFT per axis, scaled by the cell volume, with the phase correction for
/// the grid starting away from the origin.
pub fn forward_fourier(field: &SampledField) -> Spectrum {
    let grid = field.grid().clone();
    let mut values = field.values().clone();
    let mut planner = FftPlanner::new();
    for d in 0..grid.dim() {
        let fft = planner.plan_fft_forward(grid.axis(d).count());
        let mut scratch = vec![Complex64::new(0.0, 0.0); grid.axis(d).count()];
        for mut lane in values.lanes_mut(ndarray::Axis(d)) {
            for (s, v) in scratch.iter_mut().zip(lane.iter()) {
                *s = *v;
            }
            fft.process(&mut scratch);
            for (v, s) in lane.iter_mut().zip(scratch.iter()) {
                *v = *s;
            }
        }
    }
    // FFT-order frequencies per axis.
    let freqs: Vec<Vec<f64>> = (0..grid.dim())
        .map(|d| {
            let n = grid.axis(d).count();
            let step = 2.0 * PI / (n as f64 * grid.axis(d).spacing());
            (0..n)
                .map(|m| {
                    let k = if m <= (n - 1) / 2 {
                        m as isize
                    } else {
                        m as isize - n as isize
                    };
                    k as f64 * step
                })
                .collect()
        })
        .collect();
    let cell = grid.cell_volume();
    let mins: Vec<f64> = (0..grid.dim()).map(|d| grid.axis(d).min()).collect();
    for (idx, v) in values.indexed_iter_mut() {
        let mut phase = 0.0;
        for d in 0..grid.dim() {
            phase += mins[d] * freqs[d][idx[d]];
        }
        *v *= Complex64::new(0.0, -phase).exp() * cell;
    }
    Spectrum {
        grid,
        freqs,
        values,
    }
}

/// Spectrum values along polar rays: `values[k][m] = f_hat(omega_m u_k)`.
#[derive(Debug, Clone)]
pub struct SpectralSlices {
    directions: DirectionSet,
    omega: Axis,
    values: Array2<Complex64>,
}

impl SpectralSlices {
    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn omega(&self) -> &Axis {
        &self.omega
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn value(&self, k: usize, m: usize) -> Complex64 {
        self.values[[k, m]]
    }
}

/// Evaluate the spectrum on polar rays. Analytic sources use their closed
/// form; sampled sources use the exact-rule nonuniform DFT
/// `sum_j f(x_j) e^{-i omega u.x_j} cell_volume`, data-parallel over
/// directions with a deterministic per-direction summation order.
pub fn spectral_slices(
    source: &SliceSource<'_>,
    directions: &DirectionSet,
    omega: &Axis,
) -> Result<SpectralSlices> {
    if !omega.is_symmetric() {
        return Err(TransformError::AxisInvalid(format!(
            "frequency axis [{}, {}] must be symmetric about 0",
            omega.min(),
            omega.max()
        )));
    }
    if source.dim() != directions.dim() {
        return Err(TransformError::ShapeMismatch {
            expected: format!("dimension {}", directions.dim()),
            found: format!("dimension {}", source.dim()),
        });
    }
    let nk = directions.len();
    let nm = omega.count();
    let mut values = Array2::zeros((nk, nm));
    match source {
        SliceSource::Analytic(src) => {
            let rows: Vec<Vec<Complex64>> = (0..nk)
                .into_par_iter()
                .map(|k| {
                    let u = directions.direction(k);
                    (0..nm)
                        .map(|m| src.slice_spectrum(u, omega.value(m)))
                        .collect()
                })
                .collect();
            for (k, row) in rows.into_iter().enumerate() {
                for (m, v) in row.into_iter().enumerate() {
                    values[[k, m]] = v;
                }
            }
        }
        SliceSource::Sampled(field) => {
            let grid = field.grid();
            let cell = grid.cell_volume();
            let flat: Vec<Complex64> = field.values().iter().copied().collect();
            // Grid point coordinates in row-major order.
            let shape = grid.shape();
            let points: Vec<[f64; 3]> = (0..flat.len())
                .map(|p| {
                    let mut rem = p;
                    let mut idx = [0usize; 3];
                    for d in (0..shape.len()).rev() {
                        idx[d] = rem % shape[d];
                        rem /= shape[d];
                    }
                    let mut x = [0.0; 3];
                    for d in 0..shape.len() {
                        x[d] = grid.axis(d).value(idx[d]);
                    }
                    x
                })
                .collect();
            let omega0 = omega.value(0);
            let d_omega = omega.spacing();
            let rows: Vec<Vec<Complex64>> = (0..nk)
                .into_par_iter()
                .map(|k| {
                    let u = directions.direction_padded(k);
                    // Phase recurrence over m for every grid point.
                    let mut cur: Vec<Complex64> = Vec::with_capacity(flat.len());
                    let mut step: Vec<Complex64> = Vec::with_capacity(flat.len());
                    for x in &points {
                        let t = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
                        cur.push(Complex64::new(0.0, -omega0 * t).exp());
                        step.push(Complex64::new(0.0, -d_omega * t).exp());
                    }
                    let mut row = Vec::with_capacity(nm);
                    for _ in 0..nm {
                        let mut acc = KahanComplex::new();
                        for (f, c) in flat.iter().zip(cur.iter()) {
                            acc.add(f * c);
                        }
                        row.push(acc.value() * cell);
                        for (c, s) in cur.iter_mut().zip(step.iter()) {
                            *c *= *s;
                        }
                    }
                    row
                })
                .collect();
            for (k, row) in rows.into_iter().enumerate() {
                for (m, v) in row.into_iter().enumerate() {
                    values[[k, m]] = v;
                }
            }
        }
    }
    Ok(SpectralSlices {
        directions: directions.clone(),
        omega: omega.clone(),
        values,
    })
}

/// Polar Fourier inversion:
/// `f(x) = (2 pi)^{-n} int_{S^{n-1}} int_0^inf e^{i w u.x} w^{n-1} f_hat(w u) dw du`.
///
/// The radial quadrature over the nonnegative frequency nodes uses composite
/// Simpson when their count is odd and the trapezoid rule otherwise.
pub fn polar_inverse(slices: &SpectralSlices, grid: &CartesianGrid) -> Result<SampledField> {
    let n = grid.dim();
    if slices.directions().dim() != n {
        return Err(TransformError::ShapeMismatch {
            expected: format!("dimension {n}"),
            found: format!("dimension {}", slices.directions().dim()),
        });
    }
    let omega = slices.omega();
    // Nonnegative radial nodes (uniformly spaced by construction).
    let radial: Vec<usize> = (0..omega.count())
        .filter(|m| omega.value(*m) >= -1e-12 * omega.spacing())
        .collect();
    let radial_values: Vec<f64> = radial.iter().map(|m| omega.value(*m)).collect();
    let step = omega.spacing();
    let mut rule: Vec<f64> = if let Some(coeffs) = simpson_coefficients(radial.len()) {
        coeffs.iter().map(|c| c * step).collect()
    } else if radial.len() >= 4 {
        // Even node count: composite Simpson on all but the last node plus a
        // single trapezoid panel at the far end, where spectra have decayed.
        let mut w: Vec<f64> = simpson_coefficients(radial.len() - 1)
            .expect("count - 1 is odd and >= 3")
            .iter()
            .map(|c| c * step)
            .collect();
        w.push(0.0);
        let last = w.len() - 1;
        w[last - 1] += step / 2.0;
        w[last] += step / 2.0;
        w
    } else {
        crate::numeric::trapezoid_weights(radial.len(), step)
    };
    // Without a zero node the rule covers [omega_1, max] only. The integrand
    // carries omega^{n-1} with n >= 2, so it vanishes at 0 and the missing
    // head [0, omega_1] is a half-triangle on the first node.
    if radial_values[0] > 1e-12 * step {
        rule[0] += radial_values[0] / 2.0;
    }
    let directions = slices.directions();
    let nk = directions.len();
    // Fold direction weight, radial weight, Jacobian, and normalization into
    // per-(direction, radial-node) coefficients.
    let norm = (2.0 * PI).powi(n as i32);
    let mut coeffs = Array2::<Complex64>::zeros((nk, radial.len()));
    for k in 0..nk {
        for (r, m) in radial.iter().enumerate() {
            let w = radial_values[r];
            coeffs[[k, r]] = slices.value(k, *m)
                * (directions.weight(k) * rule[r] * w.powi(n as i32 - 1) / norm);
        }
    }
    let shape = grid.shape();
    let total: usize = shape.iter().product();
    let omega_start = radial_values[0];
    let out: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|p| {
            let mut rem = p;
            let mut idx = [0usize; 3];
            for d in (0..shape.len()).rev() {
                idx[d] = rem % shape[d];
                rem /= shape[d];
            }
            let mut x = [0.0; 3];
            for d in 0..shape.len() {
                x[d] = grid.axis(d).value(idx[d]);
            }
            let mut acc = KahanComplex::new();
            for k in 0..nk {
                let u = directions.direction_padded(k);
                let t = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
                let mut cur = Complex64::new(0.0, omega_start * t).exp();
                let step_phase = Complex64::new(0.0, step * t).exp();
                let mut dir_acc = Complex64::new(0.0, 0.0);
                for r in 0..radial_values.len() {
                    dir_acc += coeffs[[k, r]] * cur;
                    cur *= step_phase;
                }
                acc.add(dir_acc);
            }
            acc.value()
        })
        .collect();
    let values = ArrayD::from_shape_vec(IxDyn(&shape), out).expect("shape product matches");
    SampledField::new(grid.clone(), values)
}

/// Precomputed phase matrix `e^{i b_i omega_m}` shared by the transforms
/// that synthesize functions of a location coordinate from frequency data.
#[derive(Debug, Clone)]
pub(crate) struct PhaseTable {
    rows: usize,
    cols: usize,
    values: Vec<Complex64>,
}

impl PhaseTable {
    pub(crate) fn new(b_axis: &Axis, omega: &Axis) -> Self {
        let rows = b_axis.count();
        let cols = omega.count();
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let b = b_axis.value(i);
            for m in 0..cols {
                values.push(Complex64::new(0.0, b * omega.value(m)).exp());
            }
        }
        Self { rows, cols, values }
    }

    pub(crate) fn row(&self, i: usize) -> &[Complex64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    /// `out[i] = sum_m row_i[m] coeffs[m]` for every row.
    pub(crate) fn apply(&self, coeffs: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(coeffs.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (i, slot) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (r, c) in row.iter().zip(coeffs.iter()) {
                acc += r * c;
            }
            *slot = acc;
        }
    }
}
