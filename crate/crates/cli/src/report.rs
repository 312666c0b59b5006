//! Check-report rows and their CSV rendering.

use num_complex::Complex64;
use ridgelet_core::IdentityCheck;

/// One line of a check report.
///
/// Scalar identities carry their two sides in `lhs`/`rhs` and
/// `gap = |lhs - rhs| / max(|lhs|, |rhs|, 1e-300)`. Field comparisons put the
/// relative L2 (or peak-relative) distance in `gap` directly and report the
/// distance in `lhs` with `rhs = 0`.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub check: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn scalar(check: &str, identity: IdentityCheck, tol: f64) -> Self {
        let gap = identity.gap();
        Self {
            check: check.to_string(),
            lhs: identity.lhs,
            rhs: identity.rhs,
            gap,
            tol,
            pass: gap <= tol,
        }
    }

    pub fn deviation(check: &str, gap: f64, tol: f64) -> Self {
        Self {
            check: check.to_string(),
            lhs: Complex64::new(gap, 0.0),
            rhs: Complex64::new(0.0, 0.0),
            gap,
            tol,
            pass: gap <= tol,
        }
    }

    pub const CSV_HEADER: &'static str = "check,lhs_re,lhs_im,rhs_re,rhs_im,gap,tol,pass";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.9e},{:.9e},{:.9e},{:.9e},{:.3e},{:.1e},{}",
            self.check,
            self.lhs.re,
            self.lhs.im,
            self.rhs.re,
            self.rhs.im,
            self.gap,
            self.tol,
            if self.pass { "pass" } else { "fail" }
        )
    }
}
