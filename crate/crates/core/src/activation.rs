//! Catalog of neuronal activation profiles: evaluators for the profile and
//! its spectrum, moments, vanishing order at zero frequency, admissibility,
//! and the two normalizing constants attached to a reconstruction pair.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Result, TransformError};
use crate::grid::Axis;
use crate::numeric::{
    adaptive_simpson, adaptive_simpson_real, cubic_interp_uniform, hermite, integrate_samples,
};

/// Order of the zero of the spectrum at frequency zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingOrder {
    Finite(u32),
    Infinite,
}

impl VanishingOrder {
    /// True when the order is at least `k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            VanishingOrder::Finite(v) => v >= k,
            VanishingOrder::Infinite => true,
        }
    }

    /// Order of the product profile: sum of orders, infinity absorbing.
    pub fn combine(self, other: Self) -> Self {
        match (self, other) {
            (VanishingOrder::Finite(a), VanishingOrder::Finite(b)) => {
                VanishingOrder::Finite(a.saturating_add(b))
            }
            _ => VanishingOrder::Infinite,
        }
    }

    pub fn as_finite(self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(v) => Some(v),
            VanishingOrder::Infinite => None,
        }
    }
}

impl std::fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VanishingOrder::Finite(v) => write!(f, "{v}"),
            VanishingOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Catalog tag plus parameters for one activation profile.
#[derive(Debug, Clone)]
pub enum ActivationKind {
    /// `psi(x) = e^{-x^2}`
    Gaussian,
    /// `psi_hat(w) = w^m e^{-w^2/4}`
    HermiteSpectral(u32),
    /// `psi_hat(w) = 2 pi^{1-n/2} w^{2n} e^{-w^2/4}`, the admissible profile
    /// used by the scale-decay demo in dimension `n`.
    Remark43(u32),
    /// `psi_hat(w) = e^{-w^2 - 1/w^2}`, extended by 0 at w=0. All moments
    /// vanish, so the profile lies in the Lizorkin class.
    LizorkinBump,
    /// Spectrum sampled on a uniform symmetric axis, evaluated by cubic
    /// interpolation and zero outside the table.
    Table {
        omega: Axis,
        values: Arc<Vec<Complex64>>,
        declared_order: u32,
    },
}

/// Uniform sample table of a profile over `[x0, x0 + (len-1) dx]`.
#[derive(Debug)]
struct ProfileTable {
    x0: f64,
    dx: f64,
    values: Vec<Complex64>,
}

impl ProfileTable {
    /// Cubic interpolation inside the table, zero outside.
    fn eval(&self, x: f64) -> Complex64 {
        let x_last = self.x0 + (self.values.len() - 1) as f64 * self.dx;
        if x < self.x0 || x > x_last {
            return Complex64::new(0.0, 0.0);
        }
        cubic_interp_uniform(&self.values, self.x0, self.dx, x)
    }
}

/// One activation profile from the catalog, with cached evaluation tables.
///
/// Cloning is cheap and shares the caches.
#[derive(Clone)]
pub struct ActivationFunction {
    kind: ActivationKind,
    conjugated: bool,
    name: String,
    band: f64,
    space: Arc<OnceLock<ProfileTable>>,
}

impl std::fmt::Debug for ActivationFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActivationFunction")
            .field("name", &self.name)
            .field("conjugated", &self.conjugated)
            .field("band", &self.band)
            .finish()
    }
}

/// Half-width of the dense sample table for closed-form profiles.
const CLOSED_FORM_RANGE: f64 = 16.0;
/// Half-width of the sample table for spectrum-native profiles.
const SPECTRUM_NATIVE_RANGE: f64 = 256.0;

impl ActivationFunction {
    pub fn new(kind: ActivationKind) -> Result<Self> {
        if let ActivationKind::HermiteSpectral(m) = kind {
            if m > 10 {
                return Err(TransformError::MomentOrderUnsupported {
                    requested: m as usize,
                    limit: 10,
                });
            }
        }
        if let ActivationKind::Remark43(n) = kind {
            if n == 0 || n > 4 {
                return Err(TransformError::AxisInvalid(format!(
                    "remark43 parameter must be in 1..=4, got {n}"
                )));
            }
        }
        if let ActivationKind::Table { ref omega, ref values, .. } = kind {
            if values.len() != omega.count() {
                return Err(TransformError::ShapeMismatch {
                    expected: format!("{} spectrum samples", omega.count()),
                    found: format!("{}", values.len()),
                });
            }
            if !omega.is_symmetric() {
                return Err(TransformError::AxisInvalid(
                    "table spectrum axis must be symmetric about 0".into(),
                ));
            }
        }
        let name = Self::canonical_name(&kind);
        let band = Self::scan_band(&kind);
        Ok(Self {
            kind,
            conjugated: false,
            name,
            band,
            space: Arc::new(OnceLock::new()),
        })
    }

    pub fn gaussian() -> Self {
        Self::new(ActivationKind::Gaussian).expect("gaussian profile is always valid")
    }

    pub fn hermite_spectral(m: u32) -> Result<Self> {
        Self::new(ActivationKind::HermiteSpectral(m))
    }

    pub fn remark43(n: u32) -> Result<Self> {
        Self::new(ActivationKind::Remark43(n))
    }

    pub fn lizorkin_bump() -> Self {
        Self::new(ActivationKind::LizorkinBump).expect("lizorkin profile is always valid")
    }

    pub fn table(omega: Axis, values: Vec<Complex64>, declared_order: u32) -> Result<Self> {
        Self::new(ActivationKind::Table {
            omega,
            values: Arc::new(values),
            declared_order,
        })
    }

    /// Parse a catalog name such as `gaussian`, `hermite_spectral(2)`, `h2`,
    /// `remark43(2)`, `lizorkin_bump`, or `conj(<name>)`.
    pub fn parse(name: &str) -> Result<Self> {
        let trimmed = name.trim();
        if let Some(inner) = trimmed
            .strip_prefix("conj(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            return Ok(Self::parse(inner)?.conjugate());
        }
        match trimmed {
            "gaussian" | "gauss" => return Ok(Self::gaussian()),
            "lizorkin_bump" | "lizorkin" => return Ok(Self::lizorkin_bump()),
            _ => {}
        }
        if let Some(rest) = trimmed.strip_prefix('h') {
            if let Ok(m) = rest.parse::<u32>() {
                return Self::hermite_spectral(m);
            }
        }
        if let Some(arg) = parse_call(trimmed, "hermite_spectral") {
            let m = arg
                .parse::<u32>()
                .map_err(|_| TransformError::UnknownCatalogEntry(trimmed.to_string()))?;
            return Self::hermite_spectral(m);
        }
        if let Some(arg) = parse_call(trimmed, "remark43") {
            let n = arg
                .parse::<u32>()
                .map_err(|_| TransformError::UnknownCatalogEntry(trimmed.to_string()))?;
            return Self::remark43(n);
        }
        Err(TransformError::UnknownCatalogEntry(trimmed.to_string()))
    }

    fn canonical_name(kind: &ActivationKind) -> String {
        match kind {
            ActivationKind::Gaussian => "gaussian".into(),
            ActivationKind::HermiteSpectral(m) => format!("hermite_spectral({m})"),
            ActivationKind::Remark43(n) => format!("remark43({n})"),
            ActivationKind::LizorkinBump => "lizorkin_bump".into(),
            ActivationKind::Table { .. } => "table".into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ActivationKind {
        &self.kind
    }

    pub fn is_conjugated(&self) -> bool {
        self.conjugated
    }

    /// The profile with complex-conjugated values: `x -> conj(psi(x))`,
    /// whose spectrum is `w -> conj(psi_hat(-w))`.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        out.conjugated = !self.conjugated;
        out.name = if self.conjugated {
            self.name
                .strip_prefix("conj(")
                .and_then(|rest| rest.strip_suffix(')'))
                .unwrap_or(&self.name)
                .to_string()
        } else {
            format!("conj({})", self.name)
        };
        out
    }

    /// Order of the zero of the spectrum at frequency zero.
    pub fn vanishing_order(&self) -> VanishingOrder {
        match &self.kind {
            ActivationKind::Gaussian => VanishingOrder::Finite(0),
            ActivationKind::HermiteSpectral(m) => VanishingOrder::Finite(*m),
            ActivationKind::Remark43(n) => VanishingOrder::Finite(2 * n),
            ActivationKind::LizorkinBump => VanishingOrder::Infinite,
            ActivationKind::Table { declared_order, .. } => VanishingOrder::Finite(*declared_order),
        }
    }

    /// Effective spectral half-band: `|psi_hat|` is negligible beyond it.
    pub fn band(&self) -> f64 {
        self.band
    }

    /// Half-width of the effective support of `psi` in space.
    pub fn space_support(&self) -> f64 {
        match &self.kind {
            ActivationKind::Gaussian
            | ActivationKind::HermiteSpectral(_)
            | ActivationKind::Remark43(_) => CLOSED_FORM_RANGE,
            ActivationKind::LizorkinBump | ActivationKind::Table { .. } => SPECTRUM_NATIVE_RANGE,
        }
    }

    /// Spectrum evaluator under the convention
    /// `psi_hat(w) = int psi(x) e^{-i x w} dx`.
    pub fn psi_hat(&self, omega: f64) -> Complex64 {
        if self.conjugated {
            self.base_psi_hat(-omega).conj()
        } else {
            self.base_psi_hat(omega)
        }
    }

    fn base_psi_hat(&self, omega: f64) -> Complex64 {
        match &self.kind {
            ActivationKind::Gaussian => {
                Complex64::new(PI.sqrt() * (-omega * omega / 4.0).exp(), 0.0)
            }
            ActivationKind::HermiteSpectral(m) => Complex64::new(
                omega.powi(*m as i32) * (-omega * omega / 4.0).exp(),
                0.0,
            ),
            ActivationKind::Remark43(n) => {
                let amp = 2.0 * PI.powf(1.0 - *n as f64 / 2.0);
                Complex64::new(
                    amp * omega.powi(2 * *n as i32) * (-omega * omega / 4.0).exp(),
                    0.0,
                )
            }
            ActivationKind::LizorkinBump => {
                if omega.abs() < 1e-150 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((-omega * omega - 1.0 / (omega * omega)).exp(), 0.0)
                }
            }
            ActivationKind::Table { omega: axis, values, .. } => {
                if omega < axis.min() || omega > axis.max() {
                    Complex64::new(0.0, 0.0)
                } else {
                    cubic_interp_uniform(values, axis.min(), axis.spacing(), omega)
                }
            }
        }
    }

    /// Profile evaluator. Closed-form kinds are exact; spectrum-native kinds
    /// use a precomputed inverse-transform table.
    pub fn psi(&self, x: f64) -> Complex64 {
        let value = self.base_psi(x);
        if self.conjugated {
            value.conj()
        } else {
            value
        }
    }

    fn base_psi(&self, x: f64) -> Complex64 {
        match &self.kind {
            ActivationKind::Gaussian => Complex64::new((-x * x).exp(), 0.0),
            ActivationKind::HermiteSpectral(m) => {
                // psi_hat = w^m e^{-w^2/4} inverts to i^m H_m(x) e^{-x^2} / sqrt(pi)
                // with H_m the physicists' Hermite polynomial.
                let magnitude = hermite(*m as usize, x) * (-x * x).exp() / PI.sqrt();
                i_power(*m) * magnitude
            }
            ActivationKind::Remark43(n) => {
                let amp = 2.0 * PI.powf(1.0 - *n as f64 / 2.0);
                let magnitude = hermite(2 * *n as usize, x) * (-x * x).exp() / PI.sqrt();
                i_power(2 * n) * amp * magnitude
            }
            ActivationKind::LizorkinBump | ActivationKind::Table { .. } => {
                self.space_table().eval(x)
            }
        }
    }

    /// Fast table-backed evaluation of `psi` for hot kernel loops: identical
    /// to [`ActivationFunction::psi`] up to interpolation error around 1e-12,
    /// and exactly zero outside the effective support.
    pub fn kernel(&self, z: f64) -> Complex64 {
        let value = self.space_table().eval(z);
        if self.conjugated {
            value.conj()
        } else {
            value
        }
    }

    fn space_table(&self) -> &ProfileTable {
        self.space.get_or_init(|| match &self.kind {
            ActivationKind::Gaussian
            | ActivationKind::HermiteSpectral(_)
            | ActivationKind::Remark43(_) => {
                // Dense direct sampling of the closed form.
                let dx = 1.0 / 512.0;
                let count = (2.0 * CLOSED_FORM_RANGE / dx) as usize + 1;
                let x0 = -CLOSED_FORM_RANGE;
                let values = (0..count)
                    .map(|i| self.base_psi(x0 + i as f64 * dx))
                    .collect();
                ProfileTable { x0, dx, values }
            }
            ActivationKind::LizorkinBump | ActivationKind::Table { .. } => {
                invert_spectrum_to_table(|w| self.base_psi_hat(w), self.band)
            }
        })
    }

    fn scan_band(kind: &ActivationKind) -> f64 {
        if let ActivationKind::Table { omega, .. } = kind {
            return omega.max().abs().max(omega.min().abs());
        }
        // Probe the closed forms directly (self not built yet).
        let eval = |w: f64| -> f64 {
            match kind {
                ActivationKind::Gaussian => PI.sqrt() * (-w * w / 4.0).exp(),
                ActivationKind::HermiteSpectral(m) => {
                    w.abs().powi(*m as i32) * (-w * w / 4.0).exp()
                }
                ActivationKind::Remark43(n) => {
                    2.0 * PI.powf(1.0 - *n as f64 / 2.0)
                        * w.abs().powi(2 * *n as i32)
                        * (-w * w / 4.0).exp()
                }
                ActivationKind::LizorkinBump => {
                    if w.abs() < 1e-150 {
                        0.0
                    } else {
                        (-w * w - 1.0 / (w * w)).exp()
                    }
                }
                ActivationKind::Table { .. } => unreachable!(),
            }
        };
        let step = 1.0 / 64.0;
        let mut peak = 0.0f64;
        let mut last = 0.0f64;
        for i in 0..(64 * 64) {
            let w = i as f64 * step;
            let v = eval(w);
            if v > peak {
                peak = v;
            }
            if v > 1e-16 * peak.max(f64::MIN_POSITIVE) {
                last = w;
            }
        }
        last + 1.0
    }
}

/// `i^m` for integer `m`.
fn i_power(m: u32) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn parse_call<'a>(text: &'a str, callee: &str) -> Option<&'a str> {
    text.strip_prefix(callee)
        .and_then(|rest| rest.strip_prefix('('))
        .and_then(|rest| rest.strip_suffix(')'))
        .map(str::trim)
}

/// Build a dense space-domain table of a profile from its spectrum by one
/// inverse FFT: the trapezoid discretization of `(1/2pi) int psi_hat e^{ixw} dw`
/// with spacing `2 pi / X` is exact up to images at distance `X`, which are
/// negligible for rapidly decaying profiles.
fn invert_spectrum_to_table<F>(psi_hat: F, band: f64) -> ProfileTable
where
    F: Fn(f64) -> Complex64,
{
    let x_range = SPECTRUM_NATIVE_RANGE; // table spans [-x_range, x_range)
    let x_span = 2.0 * x_range;
    let d_omega = 2.0 * PI / x_span;
    // Fixed 2^18 samples: spacing 1/512 in space keeps the cubic
    // interpolation error of oscillatory profiles near machine precision,
    // and the frequency window [-1608, 1608] covers every allowed band.
    let n = 1usize << 18;
    let half_span = n as f64 * d_omega / 2.0;
    debug_assert!(half_span > band + 2.0, "spectral band {band} too wide");
    let dx = x_span / n as f64;

    let mut buffer: Vec<Complex64> = (0..n)
        .map(|m| {
            let w = -half_span + m as f64 * d_omega;
            // Phase centers the output window on [-x_range, x_range).
            let phase = Complex64::new(0.0, -(-x_range) * w).exp();
            psi_hat(w) * phase
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    fft.process(&mut buffer);
    let scale = d_omega / (2.0 * PI);
    let values: Vec<Complex64> = buffer
        .iter()
        .enumerate()
        .map(|(j, v)| {
            // Alternating sign from the frequency window being centered.
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            v * sign * scale
        })
        .collect();
    ProfileTable {
        x0: -x_range,
        dx,
        values,
    }
}

/// Moments `m_k = int x^k psi(x) dx` for `k = 0..=k_max`.
///
/// Closed-form profiles integrate in space on the effective support.
/// Spectrum-native profiles use the derivative identity
/// `m_k = i^k (d/dw)^k psi_hat(0)`: an infinite-order zero makes every moment
/// exactly zero, and table-backed spectra are differentiated numerically,
/// which is refused above order 8.
pub fn moments(psi: &ActivationFunction, k_max: usize) -> Result<Vec<Complex64>> {
    if k_max > 12 {
        return Err(TransformError::MomentOrderUnsupported {
            requested: k_max,
            limit: 12,
        });
    }
    match (&psi.kind, psi.vanishing_order()) {
        (_, VanishingOrder::Infinite) => Ok(vec![Complex64::new(0.0, 0.0); k_max + 1]),
        (ActivationKind::Table { .. }, _) => {
            if k_max > 8 {
                return Err(TransformError::MomentOrderUnsupported {
                    requested: k_max,
                    limit: 8,
                });
            }
            table_moments(psi, k_max)
        }
        _ => space_moments(psi, k_max),
    }
}

fn space_moments(psi: &ActivationFunction, k_max: usize) -> Result<Vec<Complex64>> {
    let support = psi.space_support().min(14.0);
    let count = 16385usize;
    let step = 2.0 * support / (count as f64 - 1.0);
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let samples: Vec<Complex64> = (0..count)
            .map(|i| {
                let x = -support + i as f64 * step;
                psi.psi(x) * x.powi(k as i32)
            })
            .collect();
        let value = integrate_samples(&samples, step);
        // Tail estimate: boundary magnitude times a unit width on each side.
        let tail = samples[0].norm() + samples[count - 1].norm();
        if tail > 1e-10 * (1.0 + value.norm()) {
            return Err(TransformError::QuadratureTail(format!(
                "moment {k} boundary magnitude {tail:.3e} at |x| = {support}"
            )));
        }
        out.push(value);
    }
    Ok(out)
}

/// Moments of a table-backed profile by quadrature over its dense inverse
/// transform: high-order finite differences of the interpolated spectrum are
/// ill-conditioned, while the space-domain sum stays stable.
fn table_moments(psi: &ActivationFunction, k_max: usize) -> Result<Vec<Complex64>> {
    let table = psi.space_table();
    let count = table.values.len();
    // Inverse-transform tables carry a tiny broadband noise floor; x^k would
    // amplify it into garbage, so integrate only over the effective support
    // where the profile rises above that floor, padded by one unit.
    let peak = table.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); k_max + 1]);
    }
    let floor = 1e-6 * peak;
    let first = table.values.iter().position(|v| v.norm() >= floor).unwrap();
    let last = table.values.iter().rposition(|v| v.norm() >= floor).unwrap();
    let pad = (3.0 / table.dx) as usize;
    let lo = first.saturating_sub(pad);
    let hi = (last + pad).min(count - 1);
    let window = ((hi - lo) / 20).max(1); // outer 5% of the active range
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = crate::numeric::KahanComplex::new();
        let mut left_fringe = crate::numeric::KahanComplex::new();
        let mut right_fringe = crate::numeric::KahanComplex::new();
        for i in lo..=hi {
            let x = table.x0 + i as f64 * table.dx;
            let v = table.values[i];
            let value = if psi.conjugated { v.conj() } else { v };
            let term = value * x.powi(k as i32) * table.dx;
            if i < lo + window {
                left_fringe.add(term);
            } else if i + window > hi {
                right_fringe.add(term);
            }
            acc.add(term);
        }
        let value = acc.value();
        // The integrated fringe contribution estimates the truncated tail;
        // a profile that has not decayed by the window edge is refused.
        let fringe = left_fringe.value().norm() + right_fringe.value().norm();
        if fringe > 1e-5 * (1.0 + value.norm()) {
            return Err(TransformError::QuadratureTail(format!(
                "moment {k} fringe contribution {fringe:.3e} at the support edge"
            )));
        }
        out.push(value);
    }
    Ok(out)
}

/// One moment through `m_k = i^k (d/dw)^k psi_hat(0)` by central finite
/// differences with a stencil wide enough for O(h^8) accuracy. Used to
/// cross-check the quadrature moments.
#[cfg(test)]
fn spectral_moment(psi: &ActivationFunction, k: usize) -> Complex64 {
    use crate::numeric::difference_weights;
    let half = k / 2 + 4;
    let h = 0.05;
    let offsets: Vec<f64> = (-(half as i32)..=half as i32)
        .map(|i| i as f64 * h)
        .collect();
    let weights = difference_weights(k, &offsets);
    let mut derivative = Complex64::new(0.0, 0.0);
    for (x, w) in offsets.iter().zip(weights.iter()) {
        derivative += psi.psi_hat(*x) * *w;
    }
    i_power((k % 4) as u32) * derivative
}

/// Result of the admissibility test: whether the weighted spectral energy
/// `int |psi_hat(w)|^2 / |w|^n dw` is finite, and its value when it is.
#[derive(Debug, Clone, Copy)]
pub struct Admissibility {
    pub admissible: bool,
    pub value: Option<f64>,
}

/// Decide admissibility in dimension `n` from the vanishing order (finite
/// iff `2 v - n > -1`) and evaluate the integral when finite, using a
/// symmetric hole around zero with Richardson extrapolation of the hole
/// radius toward zero.
pub fn is_admissible(psi: &ActivationFunction, n: usize) -> Result<Admissibility> {
    if n != 2 && n != 3 {
        return Err(TransformError::UnsupportedDimension(n));
    }
    let finite = match psi.vanishing_order() {
        VanishingOrder::Infinite => true,
        VanishingOrder::Finite(v) => 2.0 * v as f64 - n as f64 > -1.0,
    };
    if !finite {
        return Ok(Admissibility {
            admissible: false,
            value: None,
        });
    }
    let integrand = |w: f64| -> f64 {
        let v = psi.psi_hat(w).norm_sqr();
        v / w.abs().powi(n as i32)
    };
    let upper = psi.band();
    let tol = 1e-13;
    let one_sided = |eps: f64| -> f64 {
        adaptive_simpson_real(&integrand, eps, upper, tol)
            + adaptive_simpson_real(&integrand, -upper, -eps, tol)
    };
    let value = match psi.vanishing_order() {
        VanishingOrder::Infinite => one_sided(1e-3),
        VanishingOrder::Finite(v) => {
            // Hole content behaves like eps^(2v - n + 1).
            let p = 2.0 * v as f64 - n as f64 + 1.0;
            let eps = 0.05;
            let coarse = one_sided(eps);
            let fine = one_sided(0.5 * eps);
            fine + (fine - coarse) / (2.0f64.powf(p) - 1.0)
        }
    };
    Ok(Admissibility {
        admissible: true,
        value: Some(value),
    })
}

/// Shared hole-extrapolated quadrature of `g(w)` over both half-lines,
/// where `g` behaves like `w^p_hole` near zero.
fn hole_quadrature<G>(g: &G, upper: f64, order: VanishingOrder, hole_power_shift: f64) -> Complex64
where
    G: Fn(f64) -> Complex64,
{
    let tol = 1e-13;
    let one_sided = |eps: f64| -> Complex64 {
        adaptive_simpson(g, eps, upper, tol) + adaptive_simpson(g, -upper, -eps, tol)
    };
    match order {
        VanishingOrder::Infinite => one_sided(1e-3),
        VanishingOrder::Finite(v) => {
            let p = (v as f64 + hole_power_shift).max(1.0);
            let eps = 0.05;
            let coarse = one_sided(eps);
            let fine = one_sided(0.5 * eps);
            fine + (fine - coarse) / (2.0f64.powf(p) - 1.0)
        }
    }
}

/// The reconstruction constant
/// `K = (2 pi)^{n-1} int conj(psi_hat(w)) eta_hat(w) / |w|^n dw`.
///
/// Divergence is decided from the combined vanishing order (needs to exceed
/// `n - 1`); a value indistinguishable from zero against the absolute-value
/// integral of the same integrand is reported as `ZeroConstant`.
pub fn k_constant(
    psi: &ActivationFunction,
    eta: &ActivationFunction,
    n: usize,
) -> Result<Complex64> {
    if n != 2 && n != 3 {
        return Err(TransformError::UnsupportedDimension(n));
    }
    let combined = psi.vanishing_order().combine(eta.vanishing_order());
    if let VanishingOrder::Finite(v) = combined {
        if v as f64 <= n as f64 - 1.0 {
            return Err(TransformError::DivergentConstant(format!(
                "combined vanishing order {v} of ({}, {}) does not exceed n-1 = {}",
                psi.name(),
                eta.name(),
                n - 1
            )));
        }
    }
    let upper = psi.band().min(eta.band());
    let weighted = |w: f64| -> Complex64 {
        psi.psi_hat(w).conj() * eta.psi_hat(w) / w.abs().powi(n as i32)
    };
    let prefactor = (2.0 * PI).powi(n as i32 - 1);
    // Hole content of the signed integrand behaves like eps^(combined - n + 1).
    let raw = hole_quadrature(&weighted, upper, combined, 1.0 - n as f64);
    let value = prefactor * raw;
    // Scale for the zero test: same integrand in absolute value.
    let absolute = |w: f64| -> Complex64 {
        Complex64::new(
            (psi.psi_hat(w).conj() * eta.psi_hat(w)).norm() / w.abs().powi(n as i32),
            0.0,
        )
    };
    let scale = prefactor * hole_quadrature(&absolute, upper, combined, 1.0 - n as f64).re;
    if value.norm() < 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(TransformError::ZeroConstant(format!(
            "K of ({}, {}) vanishes against its absolute scale {scale:.6e}",
            psi.name(),
            eta.name()
        )));
    }
    Ok(value)
}

/// The factorization constant `c = int_0^inf conj(psi_hat) eta_hat dw / w`.
///
/// The same integral over the negative half-line (with `|w|` in the
/// denominator) must agree within 1e-8 relative, else `HalfLineMismatch`.
pub fn c_constant(psi: &ActivationFunction, eta: &ActivationFunction) -> Result<Complex64> {
    let combined = psi.vanishing_order().combine(eta.vanishing_order());
    if let VanishingOrder::Finite(v) = combined {
        if v < 1 {
            return Err(TransformError::DivergentConstant(format!(
                "combined vanishing order {v} of ({}, {}) is below 1",
                psi.name(),
                eta.name()
            )));
        }
    }
    let upper = psi.band().min(eta.band());
    let tol = 1e-13;
    let integrand = |w: f64| -> Complex64 { psi.psi_hat(w).conj() * eta.psi_hat(w) / w.abs() };
    let one_sided = |eps: f64| -> (Complex64, Complex64) {
        (
            adaptive_simpson(&integrand, eps, upper, tol),
            adaptive_simpson(&integrand, -upper, -eps, tol),
        )
    };
    let (pos, neg) = match combined {
        VanishingOrder::Infinite => one_sided(1e-3),
        VanishingOrder::Finite(v) => {
            // Hole content behaves like eps^combined.
            let p = v as f64;
            let eps = 0.05;
            let (pos_c, neg_c) = one_sided(eps);
            let (pos_f, neg_f) = one_sided(0.5 * eps);
            let factor = 2.0f64.powf(p) - 1.0;
            (
                pos_f + (pos_f - pos_c) / factor,
                neg_f + (neg_f - neg_c) / factor,
            )
        }
    };
    let scale_abs = adaptive_simpson_real(
        &|w: f64| (psi.psi_hat(w).conj() * eta.psi_hat(w)).norm() / w.abs(),
        0.05,
        upper,
        tol,
    ) + adaptive_simpson_real(
        &|w: f64| (psi.psi_hat(w).conj() * eta.psi_hat(w)).norm() / w.abs(),
        -upper,
        -0.05,
        tol,
    );
    let reference = pos.norm().max(neg.norm()).max(1e-14 * scale_abs.abs());
    if (pos - neg).norm() > 1e-8 * reference.max(f64::MIN_POSITIVE) {
        return Err(TransformError::HalfLineMismatch {
            positive: (pos.re, pos.im),
            negative: (neg.re, neg.im),
        });
    }
    if pos.norm() < 1e-12 * scale_abs.max(f64::MIN_POSITIVE) {
        return Err(TransformError::ZeroConstant(format!(
            "c of ({}, {}) vanishes against its absolute scale {scale_abs:.6e}",
            psi.name(),
            eta.name()
        )));
    }
    Ok(pos)
}

/// A certified pair of profiles with both normalizing constants.
#[derive(Debug, Clone)]
pub struct ReconstructionPair {
    psi: ActivationFunction,
    eta: ActivationFunction,
    dim: usize,
    k: Complex64,
    c: Complex64,
}

impl ReconstructionPair {
    /// Bundle the two constants; any failure in either propagates.
    pub fn new(psi: ActivationFunction, eta: ActivationFunction, dim: usize) -> Result<Self> {
        let k = k_constant(&psi, &eta, dim)?;
        let c = c_constant(&psi, &eta)?;
        Ok(Self {
            psi,
            eta,
            dim,
            k,
            c,
        })
    }

    pub fn psi(&self) -> &ActivationFunction {
        &self.psi
    }

    pub fn eta(&self) -> &ActivationFunction {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }
}
