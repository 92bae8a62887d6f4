//! Executable renderings of the operators' limiting and interpolation
//! behavior: alpha sweeps, inequality ratio audits, and the strict
//! inclusion demonstration. Every verdict is a pure function of the
//! computed rows and a frozen tolerance, so reruns reproduce reports
//! bit for bit.

pub mod audits;
pub mod counterexample;
pub mod limits;
pub mod suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// One measured row of a sweep: the swept parameter, the measured value,
/// and two check-specific auxiliaries.
#[derive(Debug, Clone, Copy)]
pub struct ReportRow {
    pub param: f64,
    pub value: f64,
    pub aux1: f64,
    pub aux2: f64,
}

/// Parameter sweep with a limit verdict.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub check_id: String,
    pub rows: Vec<ReportRow>,
    pub fitted_slope: Option<f64>,
    pub limit_estimate: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
}

/// One inequality audit: lhs vs rhs with their ratio.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    pub anchor: String,
}

impl CheckResult {
    pub fn new(
        check_id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        verdict: Verdict,
        anchor: impl Into<String>,
    ) -> Self {
        // Degenerate 0/0 counts as the trivial ratio 1 so reports stay finite.
        let ratio = if rhs != 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            1.0
        } else {
            f64::MAX
        };
        CheckResult {
            check_id: check_id.into(),
            lhs,
            rhs,
            ratio,
            verdict,
            anchor: anchor.into(),
        }
    }
}

/// Uniform record the suite writes to CSV.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub check_id: String,
    pub rows: Vec<ReportRow>,
    pub verdict: Verdict,
}

impl From<ConvergenceReport> for CheckRecord {
    fn from(r: ConvergenceReport) -> Self {
        CheckRecord {
            check_id: r.check_id,
            rows: r.rows,
            verdict: r.verdict,
        }
    }
}

impl From<CheckResult> for CheckRecord {
    fn from(r: CheckResult) -> Self {
        CheckRecord {
            check_id: r.check_id,
            rows: vec![ReportRow {
                param: 0.0,
                value: r.ratio,
                aux1: r.lhs,
                aux2: r.rhs,
            }],
            verdict: r.verdict,
        }
    }
}

/// Least-squares slope of already-transformed (x, y) pairs.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Least-squares log-log slope of positive (x, y) pairs.
pub fn fit_loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let logged: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    fit_slope(&logged)
}

/// Values decrease along the list, allowing `jitter` relative slack per
/// step.
pub fn monotone_decreasing_with_jitter(values: &[f64], jitter: f64) -> bool {
    values
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + jitter) + 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_fit_exact_on_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(-0.7)))
            .collect();
        let s = fit_loglog_slope(&pts);
        assert!((s + 0.7).abs() < 1e-12);
    }

    #[test]
    fn monotone_jitter() {
        assert!(monotone_decreasing_with_jitter(&[1.0, 0.9, 0.91, 0.5], 0.05));
        assert!(!monotone_decreasing_with_jitter(&[1.0, 0.5, 0.9], 0.05));
    }
}
