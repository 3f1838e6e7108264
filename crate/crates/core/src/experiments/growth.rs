//! Power-law fits to ball counts.

use serde::{Deserialize, Serialize};

use super::report::CountReport;
use crate::error::{Error, Result};

/// Share of the grid, taken from the top, that the fit uses.
pub const DEFAULT_TOP_FRACTION: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub exponent: f64,
    /// Half-width of the 95% interval from the residual standard error.
    pub half_width: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Unweighted least squares of `log y` on `log x` over the last
/// `max(3, ceil(top_fraction * n))` points.
pub fn fit_loglog(points: &[(f64, f64)], top_fraction: f64) -> Result<GrowthFit> {
    if points.len() < 3 {
        return Err(Error::invalid("a log-log fit needs at least three points"));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::invalid("log-log fit needs positive values"));
    }
    let k = ((top_fraction * points.len() as f64).ceil() as usize).clamp(3, points.len());
    let pts: Vec<(f64, f64)> = points[points.len() - k..].iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = k as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("log-log fit needs distinct x values"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let se = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(GrowthFit { exponent: slope, half_width: 1.96 * se, intercept, points: k })
}

/// Growth exponent of the total counts of a complete report with at least
/// four rows.
pub fn growth_exponent(report: &CountReport, top_fraction: f64) -> Result<GrowthFit> {
    if report.rows.len() < 4 {
        return Err(Error::invalid("growth exponent needs at least four grid points"));
    }
    if !report.complete() {
        return Err(Error::Budget("refusing to fit incomplete counts".into()));
    }
    let pts: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.l as f64, r.total as f64)).collect();
    fit_loglog(&pts, top_fraction)
}
