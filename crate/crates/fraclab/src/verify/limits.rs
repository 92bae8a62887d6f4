//! Limit sweeps: the alpha -> 0+ and alpha -> 1- strong limits, the
//! rescaled energy limit and its truncated variant, the small-order
//! Laplacian identity, order continuity, lower semicontinuity, and the
//! uniform sup-norm bound.

use super::{
    fit_slope, monotone_decreasing_with_jitter, CheckResult, ConvergenceReport, ReportRow, Verdict,
};
use crate::backend::Backend;
use crate::constants;
use crate::error::{FraclabError, Result};
use crate::exterior::exterior_integral;
use crate::fields::ScalarField;
use crate::norms::{holder_seminorm, lp_norm, lp_norm_vec, sup_norm_vec};
use crate::quadrature::{quad_sharp_tail, QuadratureConfig};
use crate::spectral::MEAN_THRESHOLD;

fn relative_mean(f: &ScalarField) -> f64 {
    let l1 = lp_norm(f, 1.0).unwrap_or(0.0);
    if l1 == 0.0 {
        0.0
    } else {
        f.integral().abs() / l1
    }
}

fn require_zero_mean(f: &ScalarField, what: &str) -> Result<()> {
    if relative_mean(f) > MEAN_THRESHOLD {
        return Err(FraclabError::hypothesis(format!(
            "{what} requires a zero-mean field; relative mean is {:.2e}",
            relative_mean(f)
        )));
    }
    Ok(())
}

fn check_descending(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(FraclabError::domain("empty alpha list"));
    }
    if !alphas.windows(2).all(|w| w[1] < w[0]) {
        return Err(FraclabError::domain("alpha list must be descending"));
    }
    Ok(())
}

/// || nabla^alpha f - R f ||_p over a descending alpha list. For p = 1 the
/// field must be zero-mean; without that the L1 limit fails and the sweep
/// is refused.
pub fn sweep_limit_zero(
    f: &ScalarField,
    p: f64,
    alphas: &[f64],
    backend: &Backend,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    check_descending(alphas)?;
    if p < 1.0 {
        return Err(FraclabError::domain("p must be >= 1"));
    }
    if p == 1.0 {
        require_zero_mean(f, "the L1 limit toward the Riesz transform")?;
    }
    let riesz = backend.riesz(f)?;
    let scale = lp_norm_vec(&riesz, p)?;
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let grad = backend.nabla(f, alpha)?;
        let err = lp_norm_vec(&grad.sub(&riesz)?, p)?;
        rows.push(ReportRow {
            param: alpha,
            value: err,
            aux1: scale,
            aux2: 0.0,
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let final_ok = values.last().copied().unwrap_or(f64::MAX) <= tolerance * scale;
    let verdict = Verdict::from_bool(final_ok && monotone_decreasing_with_jitter(&values, 0.05));
    Ok(ConvergenceReport {
        check_id: format!("limit_zero_p{p}_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: values.last().copied().unwrap_or(f64::NAN),
        verdict,
        tolerance,
    })
}

/// || nabla^alpha f - grad f ||_p over an ascending alpha list ending near
/// one; the reference gradient is spectral.
pub fn sweep_limit_one(
    f: &ScalarField,
    p: f64,
    alphas: &[f64],
    backend: &Backend,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if alphas.is_empty() || !alphas.windows(2).all(|w| w[1] > w[0]) {
        return Err(FraclabError::domain("alpha list must be ascending"));
    }
    let spectral = Backend::default();
    let grad = spectral.nabla(f, 1.0)?;
    let scale = lp_norm_vec(&grad, p)?;
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let ga = backend.nabla(f, alpha)?;
        let err = lp_norm_vec(&ga.sub(&grad)?, p)?;
        rows.push(ReportRow {
            param: alpha,
            value: err,
            aux1: scale,
            aux2: 0.0,
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let verdict = Verdict::from_bool(
        scale == 0.0 || values.last().copied().unwrap_or(f64::MAX) <= tolerance * scale,
    );
    Ok(ConvergenceReport {
        check_id: format!("limit_one_p{p}_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: values.last().copied().unwrap_or(f64::NAN),
        verdict,
        tolerance,
    })
}

/// Exterior completion of the L1 norm of nabla^alpha f: beyond the box
/// the gradient follows its leading far-field law mu |int f| |x|^(-n-alpha),
/// whose box-complement integral is exact.
fn energy_row(f: &ScalarField, alpha: f64, backend: &Backend) -> Result<(f64, f64)> {
    let g = f.grid();
    let n = g.dim();
    let grad = backend.nabla(f, alpha)?;
    let in_box = lp_norm_vec(&grad, 1.0)?;
    let origin = [0.0; 2];
    let complement = exterior_integral(n, g.half_width(), &origin[..n], n as f64 + alpha);
    let far = constants::mu(n, alpha)? * f.integral().abs() * complement;
    Ok((alpha * (in_box + far), in_box))
}

/// Rescaled energy alpha * || nabla^alpha f ||_1 over descending alphas;
/// the limit is n omega_n mu_{n,0} |int f|.
pub fn energy_limit(
    f: &ScalarField,
    alphas: &[f64],
    backend: &Backend,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    check_descending(alphas)?;
    let n = f.grid().dim();
    let table = constants::ConstantsTable::new(n)?;
    let target = table.energy_limit_factor() * f.integral().abs();
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let (value, in_box) = energy_row(f, alpha, backend)?;
        rows.push(ReportRow {
            param: alpha,
            value,
            aux1: target,
            aux2: in_box,
        });
    }
    let final_value = rows.last().map(|r| r.value).unwrap_or(f64::NAN);
    let verdict = if target > 1e-12 {
        Verdict::from_bool((final_value - target).abs() <= tolerance * target)
    } else {
        // Zero-mean limit: compare against the Riesz transform scale.
        let scale = lp_norm_vec(&backend.riesz(f)?, 1.0)?;
        Verdict::from_bool(final_value <= tolerance * scale)
    };
    Ok(ConvergenceReport {
        check_id: format!("energy_n{n}_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: final_value,
        verdict,
        tolerance,
    })
}

/// Largest radius at which the field is nonzero.
fn support_radius(f: &ScalarField) -> f64 {
    let g = f.grid();
    let mut r: f64 = 0.0;
    for (i, v) in f.values().iter().enumerate() {
        if *v != 0.0 {
            r = r.max(g.node_radius(i));
        }
    }
    r
}

/// Truncated-lemma variant: alpha mu_{n,alpha} L1-norm of the sharp-tail
/// integral over {|y| > eps}, for compactly supported f and eps beyond
/// the support.
pub fn energy_limit_truncated(
    f: &ScalarField,
    eps: f64,
    alphas: &[f64],
    tolerance: f64,
) -> Result<ConvergenceReport> {
    check_descending(alphas)?;
    let r_supp = support_radius(f);
    if eps <= r_supp {
        return Err(FraclabError::hypothesis(format!(
            "truncation radius eps = {eps} must exceed the support radius {r_supp:.3}"
        )));
    }
    let g = f.grid();
    let n = g.dim();
    let table = constants::ConstantsTable::new(n)?;
    let target = table.energy_limit_factor() * f.integral().abs();
    let cfg = QuadratureConfig::default();
    let origin = [0.0; 2];
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let tail = quad_sharp_tail(f, alpha, eps, &cfg)?;
        let in_box = lp_norm_vec(&tail, 1.0)?;
        let complement = exterior_integral(n, g.half_width(), &origin[..n], n as f64 + alpha);
        let mu = constants::mu(n, alpha)?;
        let value = alpha * mu * (in_box + f.integral().abs() * complement);
        rows.push(ReportRow {
            param: alpha,
            value,
            aux1: target,
            aux2: in_box,
        });
    }
    let final_value = rows.last().map(|r| r.value).unwrap_or(f64::NAN);
    let verdict = if target > 1e-12 {
        Verdict::from_bool((final_value - target).abs() <= tolerance * target)
    } else {
        let scale = table.energy_limit_factor() * lp_norm(f, 1.0)?;
        Verdict::from_bool(final_value <= tolerance * scale)
    };
    Ok(ConvergenceReport {
        check_id: format!("energy_truncated_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: final_value,
        verdict,
        tolerance,
    })
}

/// || (-Delta)^{alpha/2} f - f ||_p -> 0 for fields with all low moments
/// vanishing; nonzero-mean fields are refused.
pub fn laplacian_identity_sweep(
    f: &ScalarField,
    p: f64,
    alphas: &[f64],
    backend: &Backend,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    check_descending(alphas)?;
    require_zero_mean(f, "the small-order Laplacian identity")?;
    let scale = lp_norm(f, p)?;
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let lap = backend.frac_laplacian(f, alpha)?;
        let err = lp_norm(&lap.sub(f)?, p)?;
        rows.push(ReportRow {
            param: alpha,
            value: err,
            aux1: scale,
            aux2: 0.0,
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let verdict =
        Verdict::from_bool(values.last().copied().unwrap_or(f64::MAX) <= tolerance * scale);
    Ok(ConvergenceReport {
        check_id: format!("laplacian_identity_p{p}_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: values.last().copied().unwrap_or(f64::NAN),
        verdict,
        tolerance,
    })
}

/// || nabla^{alpha0 + delta} f - nabla^{alpha0} f ||_p -> 0 as delta -> 0.
pub fn alpha_continuity_sweep(
    f: &ScalarField,
    p: f64,
    alpha0: f64,
    deltas: &[f64],
    backend: &Backend,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if !(alpha0 > 0.0 && alpha0 < 1.0) {
        return Err(FraclabError::domain("alpha0 must lie in (0,1)"));
    }
    check_descending(deltas)?;
    for &d in deltas {
        if !(0.0..=1.0).contains(&(alpha0 + d)) {
            return Err(FraclabError::domain(format!(
                "alpha0 + delta = {} leaves [0,1]",
                alpha0 + d
            )));
        }
    }
    let base = backend.nabla(f, alpha0)?;
    let scale = lp_norm_vec(&base, p)?;
    let mut rows = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let moved = backend.nabla(f, alpha0 + d)?;
        let err = lp_norm_vec(&moved.sub(&base)?, p)?;
        rows.push(ReportRow {
            param: d,
            value: err,
            aux1: scale,
            aux2: 0.0,
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let verdict = Verdict::from_bool(
        scale == 0.0 || values.last().copied().unwrap_or(f64::MAX) <= tolerance * scale,
    );
    Ok(ConvergenceReport {
        check_id: format!("alpha_continuity_p{p}_a{alpha0}_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: values.last().copied().unwrap_or(f64::NAN),
        verdict,
        tolerance,
    })
}

/// Lower semicontinuity probe: || R f ||_1 <= min over the alpha list of
/// || nabla^alpha f ||_1, with 2% slack, for zero-mean fields.
pub fn lower_semicontinuity_probe(
    f: &ScalarField,
    alphas: &[f64],
    backend: &Backend,
) -> Result<CheckResult> {
    if alphas.is_empty() {
        return Err(FraclabError::domain("empty alpha list"));
    }
    require_zero_mean(f, "the lower-semicontinuity probe")?;
    let lhs = lp_norm_vec(&backend.riesz(f)?, 1.0)?;
    let mut min_rhs = f64::MAX;
    for &alpha in alphas {
        min_rhs = min_rhs.min(lp_norm_vec(&backend.nabla(f, alpha)?, 1.0)?);
    }
    let verdict = Verdict::from_bool(lhs <= min_rhs * 1.02);
    Ok(CheckResult::new(
        format!("lower_semicontinuity_{}", f.tag()),
        lhs,
        min_rhs,
        verdict,
        "variation at order zero below the liminf of small-order variations",
    ))
}

/// Explicit constant of the sup-norm bound.
fn baramba_constant(n: usize, p: f64) -> Result<f64> {
    let nw = n as f64 * constants::omega(n)?;
    Ok(if p == 1.0 {
        nw.max(1.0)
    } else if p.is_finite() {
        let e = 1.0 - 1.0 / p;
        nw.max(nw.powf(e) * e.powf(e))
    } else {
        nw
    })
}

/// Audit of the explicit sup-norm bound on nabla^beta in terms of the
/// Hoelder seminorm and the Lp norm, plus the uniform-convergence
/// diagnostic toward the order-zero operator over a beta sweep.
pub fn uniform_bound_audit(
    f: &ScalarField,
    alpha: f64,
    beta: f64,
    p: f64,
    backend: &Backend,
) -> Result<(CheckResult, ConvergenceReport)> {
    if !(beta < alpha && beta >= 0.0 && alpha <= 1.0) {
        return Err(FraclabError::domain(format!(
            "need 0 <= beta < alpha <= 1, got ({alpha}, {beta})"
        )));
    }
    let n = f.grid().dim();
    let nf = n as f64;
    let mu_beta = constants::mu(n, beta)?;
    let holder = holder_seminorm(f, alpha, None)?;
    let lp = lp_norm(f, p)?;
    let c = baramba_constant(n, p)?;
    let denom = (alpha - beta) * (beta * p + nf);
    let rhs = c
        * mu_beta
        * ((alpha * p + nf) / denom)
        * (nf / p + beta).powf((alpha - beta) / (alpha * p + nf))
        * lp.powf(p * (alpha - beta) / (alpha * p + nf))
        * holder.powf((beta * p + nf) / (alpha * p + nf));
    let lhs = sup_norm_vec(&backend.nabla(f, beta)?);
    let bound = CheckResult::new(
        format!("uniform_bound_p{p}_b{beta}_{}", f.tag()),
        lhs,
        rhs,
        Verdict::from_bool(lhs <= rhs),
        "sup-norm of the fractional gradient under the explicit Hoelder/Lp bound",
    );

    // Uniform convergence toward the order-zero operator.
    let riesz = backend.riesz(f)?;
    let scale = sup_norm_vec(&riesz);
    let betas = [0.4, 0.2, 0.1, 0.05, 0.02];
    let mut rows = Vec::new();
    for &b in &betas {
        let g = backend.nabla(f, b)?;
        rows.push(ReportRow {
            param: b,
            value: sup_norm_vec(&g.sub(&riesz)?),
            aux1: scale,
            aux2: 0.0,
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let diag_verdict = Verdict::from_bool(
        monotone_decreasing_with_jitter(&values, 0.05)
            && values.last().copied().unwrap_or(f64::MAX) <= 0.05 * scale,
    );
    let diag = ConvergenceReport {
        check_id: format!("uniform_convergence_{}", f.tag()),
        rows,
        fitted_slope: None,
        limit_estimate: values.last().copied().unwrap_or(f64::NAN),
        verdict: diag_verdict,
        tolerance: 0.05,
    };
    Ok((bound, diag))
}

/// Log-log slope of || tail_R nabla^beta f ||_1 against R; scales like
/// R^(-beta).
pub fn tail_scaling_check(
    f: &ScalarField,
    beta: f64,
    radii: &[f64],
    slope_tolerance: f64,
) -> Result<ConvergenceReport> {
    if radii.len() < 2 {
        return Err(FraclabError::domain("need at least two radii"));
    }
    let cfg = QuadratureConfig::default();
    let mut rows = Vec::with_capacity(radii.len());
    let mut pts = Vec::with_capacity(radii.len());
    for &r in radii {
        let t = crate::quadrature::quad_tail_op(f, beta, r, &cfg)?;
        let v = lp_norm_vec(&t, 1.0)?;
        rows.push(ReportRow {
            param: r,
            value: v,
            aux1: 0.0,
            aux2: 0.0,
        });
        pts.push((r.ln(), v.ln()));
    }
    let slope = fit_slope(&pts);
    let verdict = Verdict::from_bool((slope + beta).abs() <= slope_tolerance);
    Ok(ConvergenceReport {
        check_id: format!("tail_scaling_b{beta}_{}", f.tag()),
        rows,
        fitted_slope: Some(slope),
        limit_estimate: slope,
        verdict,
        tolerance: slope_tolerance,
    })
}
