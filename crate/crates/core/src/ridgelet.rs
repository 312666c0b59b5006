//! Ridgelet transform (spectral path and direct quadrature oracle), ridgelet
//! synthesis, and the identity checks built on them: reconstruction,
//! Parseval pairing, transpose duality, factorization through the Radon
//! transform, Radon recovery from ridgelet coefficients, point-mass
//! consistency, desingularized pairing, and scale-decay probes.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::activation::{ActivationFunction, ReconstructionPair};
use crate::error::{Result, TransformError};
use crate::fourier::{
    spectral_slices, PhaseTable, SampledField, SliceSource, SourceFunction,
};
use crate::grid::{Axis, CartesianGrid, DirectionSet, ScaleGrid, YGrid};
use crate::numeric::{
    adaptive_simpson, cubic_interp_uniform, fit_slope, trapezoid_weights, KahanComplex,
    KahanSum,
};
use crate::radon::{radon, SinogramField};
use crate::wavelet::{cwt_sinogram, sinogram_synthesis};
use crate::IdentityCheck;

/// Complex values over direction x location x scale nodes.
#[derive(Debug, Clone)]
pub struct RidgeletField {
    directions: DirectionSet,
    b_axis: Axis,
    scales: ScaleGrid,
    values: Array3<Complex64>,
}

impl RidgeletField {
    pub fn new(
        directions: DirectionSet,
        b_axis: Axis,
        scales: ScaleGrid,
        values: Array3<Complex64>,
    ) -> Result<Self> {
        if values.dim() != (directions.len(), b_axis.count(), scales.count()) {
            return Err(TransformError::ShapeMismatch {
                expected: format!(
                    "({}, {}, {})",
                    directions.len(),
                    b_axis.count(),
                    scales.count()
                ),
                found: format!("{:?}", values.dim()),
            });
        }
        Ok(Self {
            directions,
            b_axis,
            scales,
            values,
        })
    }

    /// Evaluate a function of (direction, location, scale) on every node.
    pub fn from_fn<F>(ygrid: &YGrid, f: F) -> Self
    where
        F: Fn(&[f64], f64, f64) -> Complex64,
    {
        let (nk, ni, nj) = ygrid.shape();
        let values = Array3::from_shape_fn((nk, ni, nj), |(k, i, j)| {
            f(
                ygrid.directions().direction(k),
                ygrid.b_axis().value(i),
                ygrid.scales().value(j),
            )
        });
        Self {
            directions: ygrid.directions().clone(),
            b_axis: ygrid.b_axis().clone(),
            scales: ygrid.scales().clone(),
            values,
        }
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

    pub fn values(&self) -> &Array3<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array3<Complex64> {
        &mut self.values
    }

    pub fn value(&self, k: usize, i: usize, j: usize) -> Complex64 {
        self.values[[k, i, j]]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// The parameter-space quadrature grid these nodes live on.
    pub fn y_grid(&self) -> YGrid {
        YGrid::new(
            self.directions.clone(),
            self.b_axis.clone(),
            self.scales.clone(),
        )
    }
}

/// A weighted point mass: the only distribution-level input, with a
/// closed-form ridgelet transform.
#[derive(Debug, Clone, Copy)]
pub struct PointMass {
    pub location: [f64; 3],
    pub weight: Complex64,
}

impl PointMass {
    pub fn new(location: &[f64], weight: Complex64) -> Self {
        let mut padded = [0.0; 3];
        padded[..location.len().min(3)].copy_from_slice(&location[..location.len().min(3)]);
        Self {
            location: padded,
            weight,
        }
    }
}

/// Ridgelet transform in spectral form:
/// `R f(u, b, a) = (1/2 pi) int f_hat(w u) conj(psi_hat(a w)) e^{i b w} dw`,
/// evaluated per (direction, scale) pair onto the whole location axis.
pub fn ridgelet(
    source: &SliceSource<'_>,
    psi: &ActivationFunction,
    ygrid: &YGrid,
    omega: &Axis,
) -> Result<RidgeletField> {
    let directions = ygrid.directions();
    let slices = spectral_slices(source, directions, omega)?;
    let b_axis = ygrid.b_axis();
    let scales = ygrid.scales();
    let table = PhaseTable::new(b_axis, omega);
    let tw = trapezoid_weights(omega.count(), omega.spacing());
    // conj(psi_hat(a_j w_m)) tw_m / (2 pi), shared across directions.
    let mut kernel = Array2::<Complex64>::zeros((scales.count(), omega.count()));
    for j in 0..scales.count() {
        let a = scales.value(j);
        for m in 0..omega.count() {
            kernel[[j, m]] = psi.psi_hat(a * omega.value(m)).conj() * (tw[m] / (2.0 * PI));
        }
    }
    let (nk, ni, nj) = ygrid.shape();
    let planes: Vec<Vec<Complex64>> = (0..nk * nj)
        .into_par_iter()
        .map(|kj| {
            let k = kj / nj;
            let j = kj % nj;
            let coeffs: Vec<Complex64> = (0..omega.count())
                .map(|m| slices.value(k, m) * kernel[[j, m]])
                .collect();
            let mut out = vec![Complex64::new(0.0, 0.0); ni];
            table.apply(&coeffs, &mut out);
            out
        })
        .collect();
    let mut values = Array3::zeros((nk, ni, nj));
    for (kj, column) in planes.into_iter().enumerate() {
        let k = kj / nj;
        let j = kj % nj;
        for (i, v) in column.into_iter().enumerate() {
            values[[k, i, j]] = v;
        }
    }
    RidgeletField::new(
        directions.clone(),
        b_axis.clone(),
        scales.clone(),
        values,
    )
}

/// Direct quadrature oracle for `ridgelet`:
/// `int f(x) conj((1/a) psi((x . u - b)/a)) dx` by grid summation for sampled
/// sources and nested adaptive quadrature for analytic ones.
pub fn ridgelet_direct(
    source: &SliceSource<'_>,
    psi: &ActivationFunction,
    u: &[f64],
    b: f64,
    a: f64,
) -> Result<Complex64> {
    match source {
        SliceSource::Sampled(field) => {
            let grid = field.grid();
            let n = grid.dim();
            let shape = grid.shape();
            let mut acc = KahanComplex::new();
            for (idx, v) in field.values().indexed_iter() {
                let mut t = 0.0;
                for d in 0..n {
                    t += grid.axis(d).value(idx[d]) * u[d];
                }
                acc.add(v * psi.psi((t - b) / a).conj() / a);
            }
            let _ = shape;
            Ok(acc.value() * grid.cell_volume())
        }
        SliceSource::Analytic(src) => {
            let n = src.dim();
            let radius = src.support_radius();
            match n {
                2 => {
                    let integrand = |x: f64, y: f64| {
                        src.value(&[x, y]) * psi.psi((x * u[0] + y * u[1] - b) / a).conj() / a
                    };
                    for (ex, ey) in [
                        (-radius, 0.0),
                        (radius, 0.0),
                        (0.0, -radius),
                        (0.0, radius),
                    ] {
                        let edge = integrand(ex, ey).norm();
                        if edge > 1e-6 {
                            return Err(TransformError::QuadratureTail(format!(
                                "integrand magnitude {edge:.3e} at the truncation boundary"
                            )));
                        }
                    }
                    let outer = |x: f64| {
                        adaptive_simpson(&|y| integrand(x, y), -radius, radius, 1e-12)
                    };
                    Ok(adaptive_simpson(&outer, -radius, radius, 1e-10))
                }
                3 => {
                    let integrand = |x: f64, y: f64, z: f64| {
                        src.value(&[x, y, z])
                            * psi
                                .psi((x * u[0] + y * u[1] + z * u[2] - b) / a)
                                .conj()
                            / a
                    };
                    let middle = |x: f64, y: f64| {
                        adaptive_simpson(&|z| integrand(x, y, z), -radius, radius, 1e-12)
                    };
                    let outer = |x: f64| {
                        adaptive_simpson(&|y| middle(x, y), -radius, radius, 1e-10)
                    };
                    Ok(adaptive_simpson(&outer, -radius, radius, 1e-8))
                }
                other => Err(TransformError::UnsupportedDimension(other)),
            }
        }
    }
}

/// Closed-form ridgelet transform of a point mass:
/// `weight (1/a) conj(psi((x0 . u - b)/a))` at every node.
pub fn ridgelet_point_mass(
    delta: &PointMass,
    psi: &ActivationFunction,
    ygrid: &YGrid,
) -> RidgeletField {
    let (nk, ni, nj) = ygrid.shape();
    let planes: Vec<Array2<Complex64>> = (0..nk)
        .into_par_iter()
        .map(|k| {
            let u = ygrid.directions().direction_padded(k);
            let t = u[0] * delta.location[0]
                + u[1] * delta.location[1]
                + u[2] * delta.location[2];
            let mut plane = Array2::zeros((ni, nj));
            for i in 0..ni {
                let b = ygrid.b_axis().value(i);
                for j in 0..nj {
                    let a = ygrid.scales().value(j);
                    plane[[i, j]] = delta.weight * psi.psi((t - b) / a).conj() / a;
                }
            }
            plane
        })
        .collect();
    let mut values = Array3::zeros((nk, ni, nj));
    for (k, plane) in planes.into_iter().enumerate() {
        for i in 0..ni {
            for j in 0..nj {
                values[[k, i, j]] = plane[[i, j]];
            }
        }
    }
    RidgeletField {
        directions: ygrid.directions().clone(),
        b_axis: ygrid.b_axis().clone(),
        scales: ygrid.scales().clone(),
        values,
    }
}

/// Ridgelet synthesis
/// `Rt Phi(x) = int Phi(u, b, a) (1/a) psi((x . u - b)/a) db da/a^n du`
/// over the field's quadrature grid.
///
/// Evaluated per direction: the (b, a) sums collapse to one ridge profile
/// whose spectrum lives on `omega`; the profile is synthesized on a fine
/// uniform table and read at `x . u` by cubic interpolation. The window
/// `omega` should match the axis used for analysis.
pub fn synthesis(
    field: &RidgeletField,
    psi: &ActivationFunction,
    grid: &CartesianGrid,
    omega: &Axis,
) -> Result<SampledField> {
    let n = grid.dim();
    if field.directions().dim() != n {
        return Err(TransformError::ShapeMismatch {
            expected: format!("dimension {n}"),
            found: format!("dimension {}", field.directions().dim()),
        });
    }
    if !omega.is_symmetric() {
        return Err(TransformError::AxisInvalid(format!(
            "frequency axis [{}, {}] must be symmetric about 0",
            omega.min(),
            omega.max()
        )));
    }
    let ygrid = field.y_grid();
    let b_axis = field.b_axis();
    let scales = field.scales();
    let directions = field.directions();
    let nk = directions.len();
    let (ni, nj) = (b_axis.count(), scales.count());
    let b_weights = ygrid.b_weights().to_vec();
    let scale_weights = ygrid.scale_weights().to_vec(); // includes da/a^n
    let tw = trapezoid_weights(omega.count(), omega.spacing());
    // psi_hat(a_j w_m), shared across directions.
    let mut kernel_hat = Array2::<Complex64>::zeros((nj, omega.count()));
    for j in 0..nj {
        let a = scales.value(j);
        for m in 0..omega.count() {
            kernel_hat[[j, m]] = psi.psi_hat(a * omega.value(m));
        }
    }
    let b_table = PhaseTable::new(b_axis, omega);
    // Fine ridge-profile axis covering every x . u, with spacing tuned so
    // cubic interpolation of an omega-band-limited profile stays below 1e-6.
    let t_half = grid.corner_radius() * (1.0 + 1e-12) + 0.1;
    let t_step = 0.08 / omega.max().max(1.0);
    let t_count = 2 * (t_half / t_step).ceil() as usize + 1;
    let t_axis = Axis::symmetric(t_half, t_count)?;
    let t_table = PhaseTable::new(&t_axis, omega);
    let profiles: Vec<Vec<Complex64>> = (0..nk)
        .into_par_iter()
        .map(|k| {
            // Spectrum of the direction's ridge profile:
            // G_hat(w_m) = sum_j sw_j psi_hat(a_j w_m)
            //              sum_i Phi[k,i,j] bw_i e^{-i b_i w_m}.
            let mut ghat = vec![Complex64::new(0.0, 0.0); omega.count()];
            for j in 0..nj {
                let mut b_sum = vec![Complex64::new(0.0, 0.0); omega.count()];
                for i in 0..ni {
                    let w = field.value(k, i, j) * b_weights[i];
                    if w.norm_sqr() == 0.0 {
                        continue;
                    }
                    let row = b_table.row(i);
                    for (s, r) in b_sum.iter_mut().zip(row.iter()) {
                        *s += w * r.conj();
                    }
                }
                let sw = scale_weights[j];
                for (g, (s, kh)) in ghat
                    .iter_mut()
                    .zip(b_sum.iter().zip(kernel_hat.row(j).iter()))
                {
                    *g += s * kh * sw;
                }
            }
            // Back to the ridge coordinate through the shared window.
            let coeffs: Vec<Complex64> = ghat
                .iter()
                .enumerate()
                .map(|(m, g)| g * (tw[m] / (2.0 * PI)))
                .collect();
            let mut profile = vec![Complex64::new(0.0, 0.0); t_axis.count()];
            t_table.apply(&coeffs, &mut profile);
            profile
        })
        .collect();
    // Gather: out(x) = sum_k w_k G_k(x . u_k).
    let shape = grid.shape();
    let total: usize = shape.iter().product();
    let t0 = t_axis.min();
    let dt = t_axis.spacing();
    let out: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
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
                let v = cubic_interp_uniform(&profiles[k], t0, dt, t);
                acc.add(v * directions.weight(k));
            }
            acc.value()
        })
        .collect();
    SampledField::new(
        grid.clone(),
        ndarray::ArrayD::from_shape_vec(ndarray::IxDyn(&shape), out)
            .expect("shape product matches"),
    )
}

/// Point evaluation of the synthesis integral by the direct quadrature sum
/// over every node. Definitional and slow; used for spot checks.
pub fn synthesis_at(field: &RidgeletField, psi: &ActivationFunction, x: &[f64]) -> Complex64 {
    let ygrid = field.y_grid();
    let (nk, ni, nj) = ygrid.shape();
    let mut padded = [0.0; 3];
    padded[..x.len().min(3)].copy_from_slice(&x[..x.len().min(3)]);
    let mut acc = KahanComplex::new();
    for k in 0..nk {
        let u = ygrid.directions().direction_padded(k);
        let t = u[0] * padded[0] + u[1] * padded[1] + u[2] * padded[2];
        for i in 0..ni {
            let b = ygrid.b_axis().value(i);
            for j in 0..nj {
                let a = ygrid.scales().value(j);
                let kernel = psi.psi((t - b) / a) / a;
                acc.add(field.value(k, i, j) * kernel * ygrid.node_weight(k, i, j));
            }
        }
    }
    acc.value()
}

/// Reconstruction `(1/K) Rt_eta (R_psi f)`: returns the reconstruction and
/// its relative L2 error against the source sampled on `grid`.
pub fn reconstruct(
    source: &SliceSource<'_>,
    pair: &ReconstructionPair,
    ygrid: &YGrid,
    grid: &CartesianGrid,
    omega: &Axis,
) -> Result<(SampledField, f64)> {
    let field = ridgelet(source, pair.psi(), ygrid, omega)?;
    let mut rec = synthesis(&field, pair.eta(), grid, omega)?;
    let scale = pair.k().inv();
    rec.values_mut().mapv_inplace(|v| v * scale);
    let reference = source.sample(grid)?;
    let err = rec.rel_l2_error(&reference)?;
    Ok((rec, err))
}

/// Parseval pairing: `int f g dx` against
/// `(1/K) int_Y R_psi f(y) R_conj(eta) g(y) dmu(y)`.
pub fn parseval_check(
    f: &SliceSource<'_>,
    g: &SliceSource<'_>,
    pair: &ReconstructionPair,
    ygrid: &YGrid,
    omega: &Axis,
    grid: &CartesianGrid,
) -> Result<IdentityCheck> {
    let lhs = f.sample(grid)?.inner(&g.sample(grid)?)?;
    let left_field = ridgelet(f, pair.psi(), ygrid, omega)?;
    let right_field = ridgelet(g, &pair.eta().conjugate(), ygrid, omega)?;
    let pairing =
        ygrid.integrate_product(left_field.values().view(), right_field.values().view())?;
    let rhs = pairing * pair.k().inv();
    Ok(IdentityCheck { lhs, rhs })
}

/// Transpose duality: `int f Rt_psi(Phi) dx` against
/// `int_Y R_conj(psi) f(y) Phi(y) dmu(y)` for a caller-supplied field.
pub fn transpose_check<F>(
    source: &SliceSource<'_>,
    phi: F,
    psi: &ActivationFunction,
    ygrid: &YGrid,
    omega: &Axis,
    grid: &CartesianGrid,
) -> Result<IdentityCheck>
where
    F: Fn(&[f64], f64, f64) -> Complex64,
{
    let phi_field = RidgeletField::from_fn(ygrid, phi);
    let back = synthesis(&phi_field, psi, grid, omega)?;
    let lhs = source.sample(grid)?.inner(&back)?;
    let analyzed = ridgelet(source, &psi.conjugate(), ygrid, omega)?;
    let rhs = ygrid.integrate_product(analyzed.values().view(), phi_field.values().view())?;
    Ok(IdentityCheck { lhs, rhs })
}

/// Factorization through the Radon domain: the ridgelet transform against
/// the slice-wise wavelet transform of the sinogram, node-wise. Returns the
/// maximum absolute deviation relative to the field's own peak magnitude.
pub fn factorization_check(
    source: &SliceSource<'_>,
    psi: &ActivationFunction,
    ygrid: &YGrid,
    p_axis: &Axis,
    omega: &Axis,
) -> Result<f64> {
    let direct = ridgelet(source, psi, ygrid, omega)?;
    let sino = radon(source, ygrid.directions(), p_axis, omega)?;
    let factored = cwt_sinogram(&sino, psi, ygrid.b_axis(), ygrid.scales(), omega)?;
    let mut worst = 0.0f64;
    for (a, b) in direct.values().iter().zip(factored.values().iter()) {
        worst = worst.max((a - b).norm());
    }
    let scale = direct.max_abs();
    if scale == 0.0 {
        return Ok(if worst == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(worst / scale)
}

/// Radon transform recovered from ridgelet coefficients: the slice-wise
/// wavelet synthesis of `R_psi f` divided by the pair constant c.
pub fn radon_via_ridgelet(
    source: &SliceSource<'_>,
    pair: &ReconstructionPair,
    ygrid: &YGrid,
    p_axis: &Axis,
    omega: &Axis,
) -> Result<SinogramField> {
    let field = ridgelet(source, pair.psi(), ygrid, omega)?;
    let mut sino = sinogram_synthesis(&field, pair.eta(), p_axis)?;
    let scale = pair.c().inv();
    sino.values_mut().mapv_inplace(|v| v * scale);
    Ok(sino)
}

/// Desingularized pairing: `int f phi dx` against
/// `(1/K) int_Y W_psi(R f) R_conj(eta) phi dmu`, the wavelet factor computed
/// through the sinogram rather than directly.
#[allow(clippy::too_many_arguments)]
pub fn desingularization_check(
    f: &SliceSource<'_>,
    phi: &SliceSource<'_>,
    pair: &ReconstructionPair,
    ygrid: &YGrid,
    p_axis: &Axis,
    omega: &Axis,
    grid: &CartesianGrid,
) -> Result<IdentityCheck> {
    let lhs = f.sample(grid)?.inner(&phi.sample(grid)?)?;
    let sino = radon(f, ygrid.directions(), p_axis, omega)?;
    let w_field = cwt_sinogram(&sino, pair.psi(), ygrid.b_axis(), ygrid.scales(), omega)?;
    let phi_field = ridgelet(phi, &pair.eta().conjugate(), ygrid, omega)?;
    let pairing =
        ygrid.integrate_product(w_field.values().view(), phi_field.values().view())?;
    let rhs = pairing * pair.k().inv();
    Ok(IdentityCheck { lhs, rhs })
}

/// Desingularized pairing with a point mass standing in for the
/// distribution: `weight phi(x0)` against
/// `(1/K) int_Y R_psi(delta) R_conj(eta) phi dmu`.
pub fn desingularization_point_mass(
    delta: &PointMass,
    phi: &SourceFunction,
    pair: &ReconstructionPair,
    ygrid: &YGrid,
    omega: &Axis,
) -> Result<IdentityCheck> {
    let lhs = delta.weight * phi.value(&delta.location[..phi.dim()]);
    let mass_field = ridgelet_point_mass(delta, pair.psi(), ygrid);
    let phi_field = ridgelet(
        &SliceSource::Analytic(phi),
        &pair.eta().conjugate(),
        ygrid,
        omega,
    )?;
    let pairing =
        ygrid.integrate_product(mass_field.values().view(), phi_field.values().view())?;
    let rhs = pairing * pair.k().inv();
    Ok(IdentityCheck { lhs, rhs })
}

/// Grid supremum of `(a^s + a^{-s}) (1 + b^2)^{r/2} |Phi|`.
pub fn decay_probe(field: &RidgeletField, s: i32, r: i32) -> f64 {
    let mut sup = 0.0f64;
    for ((_, i, j), v) in field.values().indexed_iter() {
        let a = field.scales().value(j);
        let b = field.b_axis().value(i);
        let factor = (a.powi(s) + a.powi(-s)) * (1.0 + b * b).powf(r as f64 / 2.0);
        sup = sup.max(factor * v.norm());
    }
    sup
}

/// Supremum of `|Phi|` over directions and locations, per scale node.
pub fn scale_supremum_profile(field: &RidgeletField) -> Vec<f64> {
    let (nk, ni, nj) = (
        field.directions().len(),
        field.b_axis().count(),
        field.scales().count(),
    );
    let mut sup = vec![0.0f64; nj];
    for j in 0..nj {
        for k in 0..nk {
            for i in 0..ni {
                sup[j] = sup[j].max(field.value(k, i, j).norm());
            }
        }
    }
    sup
}

/// Least-squares slope of `log sup|Phi|` against `log a` over the scale
/// window `[a_lo, a_hi]`; `None` when fewer than two usable nodes fall in
/// the window.
pub fn decay_slope(field: &RidgeletField, a_lo: f64, a_hi: f64) -> Option<f64> {
    let sup = scale_supremum_profile(field);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (j, s) in sup.iter().enumerate() {
        let a = field.scales().value(j);
        if a >= a_lo && a <= a_hi && *s > 0.0 {
            xs.push(a.ln());
            ys.push(s.ln());
        }
    }
    if xs.len() < 2 {
        return None;
    }
    Some(fit_slope(&xs, &ys))
}

/// Relative L2 distance between two sinograms under the sinogram measure.
pub fn sinogram_rel_l2(got: &SinogramField, want: &SinogramField) -> Result<f64> {
    if got.values().dim() != want.values().dim() {
        return Err(TransformError::ShapeMismatch {
            expected: format!("{:?}", want.values().dim()),
            found: format!("{:?}", got.values().dim()),
        });
    }
    let p_weights = trapezoid_weights(want.p_axis().count(), want.p_axis().spacing());
    let mut num = KahanSum::new();
    let mut den = KahanSum::new();
    for k in 0..want.directions().len() {
        let wk = want.directions().weight(k);
        for i in 0..want.p_axis().count() {
            let w = wk * p_weights[i];
            num.add((got.value(k, i) - want.value(k, i)).norm_sqr() * w);
            den.add(want.value(k, i).norm_sqr() * w);
        }
    }
    Ok((num.value() / den.value().max(f64::MIN_POSITIVE)).sqrt())
}
