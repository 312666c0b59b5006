//! Small numerical building blocks: compensated summation, quadrature rules,
//! uniform-grid interpolation, orthogonal-polynomial recurrences, and
//! finite-difference weights.
//!
//! Everything here is deterministic: summation orders are fixed by the caller
//! and no rule depends on thread count.

use num_complex::Complex64;

/// Compensated (Kahan) accumulator for `f64`.
///
/// Keeps a running error term so that long sums of mixed-magnitude values
/// lose far less precision than naive accumulation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Compensated accumulator for complex values (per-component Kahan).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Trapezoid quadrature weights for a uniform grid of `count` nodes with
/// spacing `step`: interior nodes get `step`, endpoints `step / 2`.
pub fn trapezoid_weights(count: usize, step: f64) -> Vec<f64> {
    let mut w = vec![step; count];
    if count >= 2 {
        w[0] = 0.5 * step;
        w[count - 1] = 0.5 * step;
    }
    w
}

/// Composite-Simpson quadrature weights (without the spacing factor) for an
/// odd number of nodes: `1, 4, 2, 4, ..., 4, 1` scaled by `1/3`.
/// Returns `None` when the node count is even or below 3.
pub fn simpson_coefficients(count: usize) -> Option<Vec<f64>> {
    if count < 3 || count % 2 == 0 {
        return None;
    }
    let mut w = vec![0.0; count];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == count - 1 {
            1.0 / 3.0
        } else if i % 2 == 1 {
            4.0 / 3.0
        } else {
            2.0 / 3.0
        };
    }
    Some(w)
}

/// Composite Simpson rule over uniformly spaced complex samples.
/// Falls back to the trapezoid rule when the node count is even.
pub fn integrate_samples(values: &[Complex64], step: f64) -> Complex64 {
    match simpson_coefficients(values.len()) {
        Some(coeffs) => {
            let mut acc = KahanComplex::new();
            for (v, c) in values.iter().zip(coeffs.iter()) {
                acc.add(v * (c * step));
            }
            acc.value()
        }
        None => {
            let w = trapezoid_weights(values.len(), step);
            let mut acc = KahanComplex::new();
            for (v, wi) in values.iter().zip(w.iter()) {
                acc.add(v * *wi);
            }
            acc.value()
        }
    }
}

const MAX_DEPTH: u32 = 48;
const MIN_DEPTH: u32 = 7;

/// Adaptive Simpson quadrature for a complex-valued integrand.
///
/// Splits intervals until the local Richardson estimate meets `tol`
/// (absolute, distributed over subintervals) or the depth limit is hit.
/// The first [`MIN_DEPTH`] levels always split.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    fn recurse<F>(
        f: &F,
        a: f64,
        fa: Complex64,
        b: f64,
        fb: Complex64,
        m: f64,
        fm: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let h = b - a;
        let left = (h / 12.0) * (fa + 4.0 * flm + fm);
        let right = (h / 12.0) * (fm + 4.0 * frm + fb);
        let refined = left + right;
        let err = refined - whole;
        // The first few levels always split: sparse probes of an oscillatory
        // or sharply localized integrand can spuriously agree.
        let may_stop = depth <= MAX_DEPTH - MIN_DEPTH;
        if depth == 0 || (may_stop && err.norm() <= 15.0 * tol) {
            return refined + err / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }

    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fm = f(m);
    let whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, MAX_DEPTH)
}

/// Adaptive Simpson quadrature for a real integrand.
pub fn adaptive_simpson_real<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson(&|x| Complex64::new(f(x), 0.0), a, b, tol).re
}

/// Cubic Lagrange interpolation on a uniform grid.
///
/// `values[i]` is the sample at `x0 + i * dx`. The four-point stencil is
/// clamped to stay inside the table, and query points outside the table are
/// clamped to its ends, so callers that need "zero outside" semantics must
/// test the range themselves.
pub fn cubic_interp_uniform(values: &[Complex64], x0: f64, dx: f64, x: f64) -> Complex64 {
    let n = values.len();
    assert!(n >= 2, "interpolation table needs at least two samples");
    assert!(dx > 0.0, "interpolation spacing must be positive");
    if n < 4 {
        // Linear fallback for tiny tables.
        let t = ((x - x0) / dx).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let frac = t - i as f64;
        return values[i] * (1.0 - frac) + values[i + 1] * frac;
    }
    let t = ((x - x0) / dx).clamp(0.0, (n - 1) as f64);
    // Stencil start so that the query sits between the middle two nodes.
    let i = (t.floor() as usize).saturating_sub(1).min(n - 4);
    let s = t - i as f64;
    // Lagrange basis on offsets 0, 1, 2, 3.
    let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    values[i] * w0 + values[i + 1] * w1 + values[i + 2] * w2 + values[i + 3] * w3
}

/// Physicists' Hermite polynomial `H_m(x)` by the three-term recurrence.
pub fn hermite(m: usize, x: f64) -> f64 {
    let mut h0 = 1.0;
    if m == 0 {
        return h0;
    }
    let mut h1 = 2.0 * x;
    for k in 1..m {
        let h2 = 2.0 * x * h1 - 2.0 * (k as f64) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "slope fit needs at least two points");
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    num / den
}

/// Finite-difference weights for the `order`-th derivative at 0 on the given
/// node offsets (Fornberg's recurrence). `offsets` must be distinct.
pub fn difference_weights(order: usize, offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    assert!(n > order, "need more nodes than the derivative order");
    // delta[m][j] holds the weight of node j for the m-th derivative.
    let mut delta = vec![vec![0.0; n]; order + 1];
    delta[0][0] = 1.0;
    let mut c1 = 1.0;
    for j in 1..n {
        let mut c2 = 1.0;
        let upper = order.min(j);
        // Values of the previous column before this iteration updates it;
        // the new-node formula needs them untouched.
        let prev_col: Vec<f64> = (0..=order).map(|m| delta[m][j - 1]).collect();
        for k in 0..j {
            let c3 = offsets[j] - offsets[k];
            c2 *= c3;
            for m in (0..=upper).rev() {
                let prev = delta[m][k];
                let lower = if m > 0 { delta[m - 1][k] } else { 0.0 };
                delta[m][k] = (offsets[j] * prev - m as f64 * lower) / c3;
            }
        }
        for m in (0..=upper).rev() {
            let lower = if m > 0 { prev_col[m - 1] } else { 0.0 };
            delta[m][j] = c1 / c2 * (m as f64 * lower - offsets[j - 1] * prev_col[m]);
        }
        c1 = c2;
    }
    delta[order].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kahan_beats_naive_on_mixed_magnitudes() {
        // 1 followed by many tiny values that naive summation drops.
        let tiny = 1e-16;
        let count = 10_000_000usize;
        let mut kahan = KahanSum::new();
        kahan.add(1.0);
        let mut naive = 1.0f64;
        for _ in 0..count {
            kahan.add(tiny);
            naive += tiny;
        }
        let exact = 1.0 + tiny * count as f64;
        assert_relative_eq!(kahan.value(), exact, max_relative = 1e-15);
        // The naive sum loses every tiny contribution here.
        assert!((naive - exact).abs() > 0.5 * tiny * count as f64);
    }

    #[test]
    fn trapezoid_weights_sum_to_span() {
        let w = trapezoid_weights(11, 0.5);
        assert_relative_eq!(w.iter().sum::<f64>(), 5.0, max_relative = 1e-15);
        assert_relative_eq!(w[0], 0.25);
        assert_relative_eq!(w[5], 0.5);
    }

    #[test]
    fn simpson_exact_on_cubics() {
        // Simpson integrates cubics exactly: int_0^2 x^3 dx = 4.
        let n = 21;
        let h = 2.0 / (n as f64 - 1.0);
        let samples: Vec<Complex64> = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                Complex64::new(x * x * x, 0.0)
            })
            .collect();
        let got = integrate_samples(&samples, h);
        assert_relative_eq!(got.re, 4.0, max_relative = 1e-13);
        assert_relative_eq!(got.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn integrate_samples_falls_back_to_trapezoid_for_even_counts() {
        let n = 10;
        let h = 1.0 / (n as f64 - 1.0);
        let samples: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(i as f64 * h, 0.0))
            .collect();
        let got = integrate_samples(&samples, h);
        // Trapezoid is exact on linear functions.
        assert_relative_eq!(got.re, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_simpson_gaussian_integral() {
        let sqrt_pi = 1.772_453_850_905_515_9;
        let got = adaptive_simpson_real(&|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-12);
        assert_relative_eq!(got, sqrt_pi, max_relative = 1e-11);
    }

    #[test]
    fn adaptive_simpson_oscillatory_complex() {
        // int_0^1 e^{i 5 x} dx = (e^{i5} - 1) / (i 5)
        let got = adaptive_simpson(
            &|x: f64| Complex64::new(0.0, 5.0 * x).exp(),
            0.0,
            1.0,
            1e-12,
        );
        let expected = (Complex64::new(0.0, 5.0).exp() - 1.0) / Complex64::new(0.0, 5.0);
        assert!((got - expected).norm() < 1e-11);
    }

    #[test]
    fn cubic_interp_reproduces_cubics() {
        // p(x) = 2x^3 - x + 1 sampled on a uniform grid.
        let x0 = -2.0;
        let dx = 0.25;
        let table: Vec<Complex64> = (0..33)
            .map(|i| {
                let x = x0 + i as f64 * dx;
                Complex64::new(2.0 * x * x * x - x + 1.0, 0.0)
            })
            .collect();
        for &x in &[-1.93_f64, -0.5, 0.0, 0.37, 1.99, 5.99] {
            let x_clamped = x.min(x0 + 32.0 * dx);
            let want = 2.0 * x_clamped.powi(3) - x_clamped + 1.0;
            let got = cubic_interp_uniform(&table, x0, dx, x);
            assert_relative_eq!(got.re, want, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn hermite_low_orders() {
        for &x in &[-1.7, 0.0, 0.4, 2.3] {
            assert_relative_eq!(hermite(0, x), 1.0);
            assert_relative_eq!(hermite(1, x), 2.0 * x);
            assert_relative_eq!(hermite(2, x), 4.0 * x * x - 2.0, max_relative = 1e-14);
            assert_relative_eq!(
                hermite(3, x),
                8.0 * x * x * x - 12.0 * x,
                max_relative = 1e-13,
                epsilon = 1e-13
            );
            assert_relative_eq!(
                hermite(4, x),
                16.0 * x.powi(4) - 48.0 * x * x + 12.0,
                max_relative = 1e-13,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn slope_fit_recovers_line() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -1.75 * x + 0.4).collect();
        assert_relative_eq!(fit_slope(&xs, &ys), -1.75, max_relative = 1e-13);
    }

    #[test]
    fn difference_weights_second_derivative() {
        let w = difference_weights(2, &[-1.0, 0.0, 1.0]);
        assert_relative_eq!(w[0], 1.0, max_relative = 1e-13);
        assert_relative_eq!(w[1], -2.0, max_relative = 1e-13);
        assert_relative_eq!(w[2], 1.0, max_relative = 1e-13);
    }

    #[test]
    fn difference_weights_fourth_derivative_on_gaussian() {
        // d^4/dw^4 e^{-w^2/4} at 0 is 3/4.
        let h = 0.05;
        let offsets: Vec<f64> = (-4..=4).map(|i| i as f64 * h).collect();
        let w = difference_weights(4, &offsets);
        let got: f64 = offsets
            .iter()
            .zip(w.iter())
            .map(|(x, c)| c * (-x * x / 4.0).exp())
            .sum();
        assert_relative_eq!(got, 0.75, max_relative = 1e-8);
    }
}
