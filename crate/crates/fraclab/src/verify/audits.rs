//! Inequality ratio audits and the cross-backend certification checks.

use super::{fit_slope, CheckResult, ConvergenceReport, ReportRow, Verdict};
use crate::backend::Backend;
use crate::constants;
use crate::error::{FraclabError, Result};
use crate::fields::{sample, Grid, ScalarField, TestFunction, VectorField};
use crate::norms::{gagliardo_seminorm, hardy_norm, lp_norm, lp_norm_vec, sup_norm, sup_norm_vec};
use crate::quadrature::{
    quad_dee_alpha, quad_div, quad_frac_laplacian, quad_nabla, quad_riesz_at_origin,
    quad_riesz_potential, QuadratureConfig,
};
use crate::spectral::{self, mihlin_norm_estimate, Multiplier, MEAN_THRESHOLD};

/// Frozen boundedness threshold for interpolation ratio audits. The
/// inequalities hold with dimensional constants that are not pinned
/// numerically; uniform boundedness in the order is the testable content.
pub const RATIO_BOUND: f64 = 10.0;

/// Lp interpolation ratios
/// || nabla^beta f ||_p / (base^((alpha-beta)/(alpha-gamma)) top^((beta-gamma)/(alpha-gamma)))
/// with base = || f ||_p when gamma = 0 and || nabla^gamma f ||_p
/// otherwise. Ratios must stay below RATIO_BOUND and must not blow up as
/// beta -> 0.
pub fn interpolation_audit(
    f: &ScalarField,
    p: f64,
    alpha: f64,
    betas: &[f64],
    gamma: f64,
    backend: &Backend,
) -> Result<Vec<CheckResult>> {
    if !(p > 1.0) {
        return Err(FraclabError::domain(
            "the Lp interpolation audit needs p > 1",
        ));
    }
    if !(0.0..=1.0).contains(&alpha) || gamma < 0.0 {
        return Err(FraclabError::domain("need 0 <= gamma <= alpha <= 1"));
    }
    for &b in betas {
        if b < gamma || b > alpha {
            return Err(FraclabError::domain(format!(
                "beta = {b} outside [gamma, alpha] = [{gamma}, {alpha}]"
            )));
        }
    }
    let base = if gamma == 0.0 {
        lp_norm(f, p)?
    } else {
        lp_norm_vec(&backend.nabla(f, gamma)?, p)?
    };
    let top = lp_norm_vec(&backend.nabla(f, alpha)?, p)?;
    let mut out = Vec::with_capacity(betas.len() + 1);
    let mut ratios = Vec::with_capacity(betas.len());
    for &beta in betas {
        let num = if beta == alpha {
            top
        } else if beta == gamma && gamma > 0.0 {
            base
        } else {
            lp_norm_vec(&backend.nabla(f, beta)?, p)?
        };
        let e_base = (alpha - beta) / (alpha - gamma);
        let e_top = (beta - gamma) / (alpha - gamma);
        let denom = base.powf(e_base) * top.powf(e_top);
        let ratio = num / denom;
        ratios.push((beta, ratio));
        out.push(CheckResult::new(
            format!("interp_p{p}_g{gamma}_b{beta}_{}", f.tag()),
            num,
            denom * RATIO_BOUND,
            Verdict::from_bool(ratio <= RATIO_BOUND),
            "interpolated norm within the uniform-ratio bound",
        ));
    }
    // No blow-up toward beta = 0: the smallest-beta ratio stays within a
    // factor 2 of a mid-range one.
    if ratios.len() >= 2 {
        let (_, r_small) = ratios[0];
        let mid = ratios[ratios.len() / 2].1;
        out.push(CheckResult::new(
            format!("interp_no_blowup_p{p}_g{gamma}_{}", f.tag()),
            r_small,
            2.0 * mid,
            Verdict::from_bool(r_small <= 2.0 * mid),
            "ratio stays flat as the order goes to zero",
        ));
    }
    Ok(out)
}

/// Hardy-variation interpolation ratios on zero-mean fields, paired with
/// the Gagliardo contrast: the plain seminorm blows up like 1/beta while
/// the Hardy-interpolated gradient ratio stays bounded.
pub fn h1_bv_interpolation_audit(
    f: &ScalarField,
    alpha: f64,
    betas: &[f64],
    backend: &Backend,
) -> Result<Vec<CheckResult>> {
    let l1 = lp_norm(f, 1.0)?;
    if l1 > 0.0 && f.integral().abs() / l1 > MEAN_THRESHOLD {
        return Err(FraclabError::hypothesis(
            "the Hardy-variation audit requires a zero-mean field".to_string(),
        ));
    }
    if betas.is_empty() {
        return Err(FraclabError::domain("empty beta list"));
    }
    let hardy = hardy_norm(f, backend)?.value;
    let top = lp_norm_vec(&backend.nabla(f, alpha)?, 1.0)?;
    let mut out = Vec::new();
    for &beta in betas {
        if !(0.0..=alpha).contains(&beta) {
            return Err(FraclabError::domain(format!(
                "beta = {beta} outside [0, alpha]"
            )));
        }
        let num = if beta == alpha {
            top
        } else {
            lp_norm_vec(&backend.nabla(f, beta)?, 1.0)?
        };
        let denom = hardy.powf((alpha - beta) / alpha) * top.powf(beta / alpha);
        let ratio = num / denom;
        out.push(CheckResult::new(
            format!("h1bv_b{beta}_{}", f.tag()),
            num,
            denom * RATIO_BOUND,
            Verdict::from_bool(ratio <= RATIO_BOUND),
            "Hardy-interpolated variation ratio bounded uniformly in the order",
        ));
    }

    // Contrast series: beta * Gagliardo stays order one while the
    // seminorm itself grows like 1/beta.
    let mut scaled = Vec::new();
    let mut small = Vec::new();
    for &beta in betas {
        if beta <= 0.0 {
            continue;
        }
        let gag = gagliardo_seminorm(f, beta, 1.0)?;
        scaled.push(beta * gag);
        if beta <= 0.11 {
            small.push((beta.ln(), gag.ln()));
        }
    }
    if !scaled.is_empty() {
        let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
        let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
        out.push(CheckResult::new(
            format!("h1bv_gagliardo_order1_{}", f.tag()),
            max,
            3.0 * min,
            Verdict::from_bool(max <= 3.0 * min),
            "beta-rescaled Gagliardo seminorm stays order one",
        ));
    }
    if small.len() >= 2 {
        let slope = fit_slope(&small);
        out.push(CheckResult::new(
            format!("h1bv_gagliardo_blowup_{}", f.tag()),
            slope,
            -1.0,
            Verdict::from_bool((slope + 1.0).abs() <= 0.15),
            "Gagliardo seminorm grows like one over the order",
        ));
    }
    Ok(out)
}

/// Splitting inequality: gag_beta <= R^(alpha-beta) gag_alpha
/// + c R^(-beta)/beta ||f||_1 with c <= 2 n omega_n, and the measured
/// minimal feasible c.
pub fn splitting_inequality_audit(
    f: &ScalarField,
    alpha: f64,
    beta: f64,
    radii: &[f64],
) -> Result<Vec<CheckResult>> {
    if !(0.0 < beta && beta < alpha && alpha < 1.0) {
        return Err(FraclabError::domain(format!(
            "need 0 < beta < alpha < 1, got ({alpha}, {beta})"
        )));
    }
    if radii.is_empty() {
        return Err(FraclabError::domain("empty radius list"));
    }
    let n = f.grid().dim();
    let c_ref = 2.0 * n as f64 * constants::omega(n)?;
    let gag_a = gagliardo_seminorm(f, alpha, 1.0)?;
    let gag_b = gagliardo_seminorm(f, beta, 1.0)?;
    let l1 = lp_norm(f, 1.0)?;
    let mut out = Vec::new();
    let mut worst_c: f64 = 0.0;
    for &r in radii {
        if !(r > 0.0) {
            return Err(FraclabError::domain("radii must be positive"));
        }
        let rhs = r.powf(alpha - beta) * gag_a + c_ref * r.powf(-beta) / beta * l1;
        let c_min = if l1 > 0.0 {
            ((gag_b - r.powf(alpha - beta) * gag_a) * beta * r.powf(beta) / l1).max(0.0)
        } else {
            0.0
        };
        worst_c = worst_c.max(c_min);
        out.push(CheckResult::new(
            format!("splitting_R{r}_{}", f.tag()),
            gag_b,
            rhs,
            Verdict::from_bool(gag_b <= rhs),
            "seminorm splitting into near and far parts",
        ));
    }
    out.push(CheckResult::new(
        format!("splitting_cmin_{}", f.tag()),
        worst_c,
        c_ref,
        Verdict::from_bool(worst_c <= c_ref),
        "minimal feasible splitting constant below twice the sphere measure",
    ));
    Ok(out)
}

/// Constants certification: the order-zero gradient constant equals the
/// Riesz transform prefactor, and the near-one rescaling approaches one.
pub fn constants_check() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for n in [1usize, 2] {
        let mu0 = constants::mu(n, 0.0)?;
        let riesz = constants::riesz_norm_const(n)?;
        out.push(CheckResult::new(
            format!("constants_mu0_n{n}"),
            mu0,
            riesz,
            Verdict::from_bool((mu0 - riesz).abs() <= 1e-12 * riesz),
            "order-zero gradient constant equals the Riesz prefactor",
        ));
        let ratio = constants::mu_near_one_ratio(n, 0.999)?;
        out.push(CheckResult::new(
            format!("constants_mu_near_one_n{n}"),
            ratio,
            1.0,
            Verdict::from_bool((ratio - 1.0).abs() <= 0.01),
            "rescaled gradient constant approaches one at the order-one end",
        ));
    }
    let mu_pi = constants::mu(1, 0.0)? * std::f64::consts::PI;
    out.push(CheckResult::new(
        "constants_mu0_pi",
        mu_pi,
        1.0,
        Verdict::from_bool((mu_pi - 1.0).abs() <= 1e-12),
        "one-dimensional order-zero constant times pi is one",
    ));
    Ok(out)
}

/// Cross-backend agreement of the fractional gradient on a Gaussian, with
/// a refinement ratio check.
pub fn backend_agreement_check(
    n: usize,
    coarse: Grid,
    fine: Grid,
    alphas: &[f64],
    tolerance: f64,
) -> Result<Vec<CheckResult>> {
    let cfg = QuadratureConfig::default();
    let spectral = Backend::default();
    let mut out = Vec::new();
    for &alpha in alphas {
        let mut errs = Vec::new();
        for g in [&coarse, &fine] {
            let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, g)?;
            let q = quad_nabla(&f, alpha, &cfg)?;
            let s = spectral.nabla(&f, alpha)?;
            errs.push(sup_norm_vec(&q.sub(&s)?) / sup_norm_vec(&s));
        }
        out.push(CheckResult::new(
            format!("backend_agree_n{n}_a{alpha}"),
            errs[1],
            tolerance,
            Verdict::from_bool(errs[1] <= tolerance),
            "spectral and quadrature gradients agree in sup norm",
        ));
        out.push(CheckResult::new(
            format!("backend_refine_n{n}_a{alpha}"),
            errs[0],
            1.5 * errs[1],
            Verdict::from_bool(errs[0] >= 1.5 * errs[1]),
            "halving the spacing improves backend agreement",
        ));
    }
    Ok(out)
}

/// Sign certification: the transform of x exp(-x^2) at the origin is
/// +1/sqrt(pi) in quadrature, and the spectral symbol reproduces the same
/// field.
pub fn riesz_sign_check(grid: Grid) -> Result<Vec<CheckResult>> {
    let odd = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &grid)?.scale(-0.5);
    let cfg = QuadratureConfig::default();
    let at0 = quad_riesz_at_origin(&odd, &cfg)?[0];
    let expect = 1.0 / std::f64::consts::PI.sqrt();
    let mut out = vec![CheckResult::new(
        "riesz_sign_origin",
        at0,
        expect,
        Verdict::from_bool((at0 - expect).abs() <= 1e-3),
        "principal-value transform of the odd Gaussian at the origin",
    )];
    let q = crate::quadrature::quad_riesz(&odd, &cfg)?;
    let s = spectral::spectral_riesz(&odd, 4)?;
    let rel = sup_norm_vec(&q.sub(&s)?) / sup_norm_vec(&s);
    out.push(CheckResult::new(
        "riesz_sign_backends",
        rel,
        1e-2,
        Verdict::from_bool(rel <= 1e-2),
        "spectral symbol sign matches the real-space transform",
    ));
    Ok(out)
}

/// Duality residual |int f div phi + int grad f . phi| over pairs of test
/// fields and orders.
pub fn duality_check(
    pairs: &[(ScalarField, VectorField)],
    alphas: &[f64],
    tolerance: f64,
) -> Result<Vec<CheckResult>> {
    let cfg = QuadratureConfig::default();
    let mut out = Vec::new();
    for (idx, (f, phi)) in pairs.iter().enumerate() {
        let hn = f.grid().cell_measure();
        for &alpha in alphas {
            let div = quad_div(phi, alpha, &cfg)?;
            let grad = quad_nabla(f, alpha, &cfg)?;
            let a: f64 = f
                .values()
                .iter()
                .zip(div.values())
                .map(|(x, y)| x * y)
                .sum::<f64>()
                * hn;
            let mut b = 0.0;
            for (axis, comp) in grad.components().iter().enumerate() {
                b += comp
                    .values()
                    .iter()
                    .zip(phi.component(axis).values())
                    .map(|(x, y)| x * y)
                    .sum::<f64>()
                    * hn;
            }
            let bound = tolerance * lp_norm(f, 2.0)? * lp_norm_vec(phi, 2.0)?;
            out.push(CheckResult::new(
                format!("duality_pair{idx}_a{alpha}"),
                (a + b).abs(),
                bound,
                Verdict::from_bool((a + b).abs() <= bound),
                "gradient and divergence are integration-by-parts duals",
            ));
        }
    }
    Ok(out)
}

/// Semigroup and representation identities on both backends.
pub fn semigroup_representation_check(grid: Grid) -> Result<Vec<CheckResult>> {
    let f = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &grid)?;
    let mut out = Vec::new();

    // Spectral semigroup: I_{0.3} I_{0.4} = I_{0.7}.
    let s03 = spectral::apply_multiplier(&f, &Multiplier::RieszPotential { alpha: 0.3 }, 4)?;
    let s034 = spectral::apply_multiplier(&s03, &Multiplier::RieszPotential { alpha: 0.4 }, 4)?;
    let s07 = spectral::apply_multiplier(&f, &Multiplier::RieszPotential { alpha: 0.7 }, 4)?;
    let rel = lp_norm(&s034.sub(&s07)?, 2.0)? / lp_norm(&s07, 2.0)?;
    out.push(CheckResult::new(
        "semigroup_spectral",
        rel,
        1e-8,
        Verdict::from_bool(rel <= 1e-8),
        "potential orders compose additively (spectral)",
    ));

    // Quadrature semigroup at the same orders.
    let cfg = QuadratureConfig::default();
    let q03 = quad_riesz_potential(&f, 0.3, &cfg)?;
    let q034 = quad_riesz_potential(&q03, 0.4, &cfg)?;
    let q07 = quad_riesz_potential(&f, 0.7, &cfg)?;
    let relq = lp_norm(&q034.sub(&q07)?, 2.0)? / lp_norm(&q07, 2.0)?;
    out.push(CheckResult::new(
        "semigroup_quadrature",
        relq,
        3e-2,
        Verdict::from_bool(relq <= 3e-2),
        "potential orders compose additively (quadrature)",
    ));

    // Representation: nabla^beta = I_{alpha-beta} nabla^alpha.
    let gauss = sample(&TestFunction::Gaussian { sigma: 1.0 }, &grid)?;
    let (alpha, beta) = (0.7, 0.3);
    let na = spectral::spectral_nabla(&gauss, alpha, 4)?;
    let nb = spectral::spectral_nabla(&gauss, beta, 4)?;
    let mut worst: f64 = 0.0;
    for axis in 0..grid.dim() {
        let via = spectral::apply_multiplier(
            na.component(axis),
            &Multiplier::RieszPotential { alpha: alpha - beta },
            4,
        )?;
        let d = lp_norm(&via.sub(nb.component(axis))?, 2.0)? / lp_norm(nb.component(axis), 2.0)?;
        worst = worst.max(d);
    }
    out.push(CheckResult::new(
        "representation_formula",
        worst,
        1e-8,
        Verdict::from_bool(worst <= 1e-8),
        "lower-order gradient recovered through the potential of the higher one",
    ));
    Ok(out)
}

/// The absolute-difference operator obeys its explicit Lp bound and
/// pointwise dominates the fractional Laplacian.
pub fn dee_bound_check(grid: Grid, alphas: &[f64], ps: &[f64]) -> Result<Vec<CheckResult>> {
    let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &grid)?;
    let cfg = QuadratureConfig::default();
    let n = grid.dim();
    let nw = 2.0 * n as f64 * constants::omega(n)?;
    let spectral = Backend::default();
    let gradient = spectral.nabla(&f, 1.0)?;
    let mut out = Vec::new();
    for &alpha in alphas {
        let dee = quad_dee_alpha(&f, alpha, &cfg)?;
        for &p in ps {
            let lhs = lp_norm(&dee, p)?;
            let rhs = nw / (alpha * (1.0 - alpha))
                * lp_norm(&f, p)?.powf(alpha)
                * lp_norm_vec(&gradient, p)?.powf(1.0 - alpha);
            out.push(CheckResult::new(
                format!("dee_lp_bound_a{alpha}_p{p}"),
                lhs,
                rhs,
                Verdict::from_bool(lhs <= rhs),
                "absolute-difference operator within its explicit Lp bound",
            ));
        }
        let lap = quad_frac_laplacian(&f, alpha, &cfg)?;
        let nu = constants::nu(n, alpha)?.abs();
        let mut ok = true;
        let mut worst = 0.0f64;
        for (l, d) in lap.values().iter().zip(dee.values()) {
            let bound = nu * d * (1.0 + 1e-12) + 1e-300;
            if l.abs() > bound {
                ok = false;
            }
            worst = worst.max(l.abs() - nu * d);
        }
        out.push(CheckResult::new(
            format!("dee_pointwise_a{alpha}"),
            worst.max(0.0),
            0.0,
            Verdict::from_bool(ok),
            "Laplacian magnitude pointwise below the scaled difference operator",
        ));
    }
    Ok(out)
}

/// Multiplier-norm uniformity across an (alpha, beta) grid, with a
/// refinement stability row.
pub fn mihlin_uniformity_check(n: usize) -> Result<Vec<CheckResult>> {
    let xi = spectral::log_spaced(1e-4, 1e4, 200);
    let xi_fine = spectral::log_spaced(1e-4, 1e4, 400);
    let mut values = Vec::new();
    for i in 0..11 {
        let alpha = i as f64 / 10.0;
        for j in 0..=i {
            let beta = j as f64 / 10.0;
            values.push(mihlin_norm_estimate(n, alpha, beta, &xi, 1e-4)?);
        }
    }
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let mut out = vec![CheckResult::new(
        format!("mihlin_uniform_n{n}"),
        max,
        2.0 * min,
        Verdict::from_bool(max.is_finite() && min > 0.0 && max <= 2.0 * min),
        "multiplier norms uniformly comparable across the order grid",
    )];
    let a = mihlin_norm_estimate(n, 0.5, 0.25, &xi, 1e-4)?;
    let b = mihlin_norm_estimate(n, 0.5, 0.25, &xi_fine, 1e-4)?;
    out.push(CheckResult::new(
        format!("mihlin_refine_n{n}"),
        (a - b).abs(),
        0.05 * b,
        Verdict::from_bool((a - b).abs() <= 0.05 * b),
        "multiplier-norm estimate stable under frequency-grid refinement",
    ));
    Ok(out)
}

/// Shape comparison between the gradient sweep and the Laplacian sweep:
/// the order-zero symbol has modulus one, so the gradient error never
/// exceeds the Laplacian identity error in L2.
pub fn sweep_shape_check(f: &ScalarField, alphas: &[f64]) -> Result<Vec<CheckResult>> {
    let backend = Backend::default();
    let riesz = backend.riesz(f)?;
    let mut out = Vec::new();
    for &alpha in alphas {
        let grad_err = lp_norm_vec(&backend.nabla(f, alpha)?.sub(&riesz)?, 2.0)?;
        let lap_err = lp_norm(&backend.frac_laplacian(f, alpha)?.sub(f)?, 2.0)?;
        out.push(CheckResult::new(
            format!("sweep_shape_a{alpha}_{}", f.tag()),
            grad_err,
            lap_err * (1.0 + 1e-6),
            Verdict::from_bool(grad_err <= lap_err * (1.0 + 1e-6)),
            "gradient sweep bounded by the Laplacian sweep in L2",
        ));
    }
    Ok(out)
}

/// Decomposition identity through the bounded multiplier.
pub fn decomposition_check(grid: Grid) -> Result<CheckResult> {
    let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &grid)?;
    let (alpha, beta) = (0.8, 0.4);
    let step = spectral::apply_multiplier(&f, &Multiplier::IdentityPlusFracLaplacian { alpha }, 4)?;
    let lhs = spectral::apply_multiplier(&step, &Multiplier::BesselRatio { alpha, beta }, 4)?;
    let rhs = spectral::apply_multiplier(&f, &Multiplier::FracLaplacian { alpha: beta }, 4)?;
    let rel = lp_norm(&lhs.sub(&rhs)?, 2.0)? / lp_norm(&rhs, 2.0)?;
    Ok(CheckResult::new(
        "decomposition_identity",
        rel,
        1e-10,
        Verdict::from_bool(rel <= 1e-10),
        "bounded multiplier recovers the lower-order Laplacian",
    ))
}

/// Riesz involution sum over components.
pub fn involution_check(f: &ScalarField) -> Result<CheckResult> {
    let n = f.grid().dim();
    let mut acc = ScalarField::zero(*f.grid());
    for axis in 0..n {
        let once = spectral::apply_multiplier(f, &Multiplier::RieszComponent { axis }, 4)?;
        let twice = spectral::apply_multiplier(&once, &Multiplier::RieszComponent { axis }, 4)?;
        for (a, b) in acc.values_mut().iter_mut().zip(twice.values()) {
            *a += b;
        }
    }
    let rel = lp_norm(&acc.sub(&f.scale(-1.0))?, 2.0)? / lp_norm(f, 2.0)?;
    Ok(CheckResult::new(
        format!("riesz_involution_{}", f.tag()),
        rel,
        1e-8,
        Verdict::from_bool(rel <= 1e-8),
        "squared transform components sum to minus the identity",
    ))
}

/// Reassembly of the gradient from its near and tail parts.
pub fn reassembly_check(f: &ScalarField, beta: f64, radius: f64) -> Result<CheckResult> {
    let cfg = QuadratureConfig::default();
    let near = crate::quadrature::quad_near_op(f, beta, radius, &cfg)?;
    let tail = crate::quadrature::quad_tail_op(f, beta, radius, &cfg)?;
    let full = quad_nabla(f, beta, &cfg)?;
    let mut worst: f64 = 0.0;
    let scale = sup_norm_vec(&full).max(1e-300);
    for axis in 0..f.grid().dim() {
        for ((a, b), c) in near
            .component(axis)
            .values()
            .iter()
            .zip(tail.component(axis).values())
            .zip(full.component(axis).values())
        {
            worst = worst.max((a + b - c).abs() / scale);
        }
    }
    Ok(CheckResult::new(
        format!("reassembly_b{beta}_{}", f.tag()),
        worst,
        1e-8,
        Verdict::from_bool(worst <= 1e-8),
        "windowed near part plus smooth tail equals the full gradient",
    ))
}

/// Laplacian self-adjointness residual in quadrature.
pub fn self_adjoint_check(grid: Grid, alpha: f64) -> Result<CheckResult> {
    let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &grid)?;
    let w = sample(&TestFunction::GaussianDilated { lambda: 0.8 }, &grid)?;
    let cfg = QuadratureConfig::default();
    let lf = quad_frac_laplacian(&f, alpha, &cfg)?;
    let lw = quad_frac_laplacian(&w, alpha, &cfg)?;
    let hn = grid.cell_measure();
    let a: f64 = f.values().iter().zip(lw.values()).map(|(x, y)| x * y).sum::<f64>() * hn;
    let b: f64 = w.values().iter().zip(lf.values()).map(|(x, y)| x * y).sum::<f64>() * hn;
    let bound = 1e-6 * lp_norm(&f, 2.0)? * lp_norm(&w, 2.0)?;
    Ok(CheckResult::new(
        format!("self_adjoint_a{alpha}"),
        (a - b).abs(),
        bound,
        Verdict::from_bool((a - b).abs() <= bound),
        "Laplacian is symmetric against smooth pairs",
    ))
}

/// Pointwise maximum helper used by suite assembly.
pub fn sup_of(field: &ScalarField) -> f64 {
    sup_norm(field)
}

/// MS-contrast composite: the rescaled indicator seminorm lands on its
/// analytic value while the Hardy-interpolated ratios stay bounded.
pub fn ms_contrast_check(
    grid: Grid,
    beta: f64,
    tolerance: f64,
) -> Result<(CheckResult, ConvergenceReport)> {
    let ind = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &grid)?;
    let expect = 4.0 / (1.0 - beta);
    let got = beta * gagliardo_seminorm(&ind, beta, 1.0)?;
    let check = CheckResult::new(
        format!("ms_contrast_b{beta}"),
        got,
        expect,
        Verdict::from_bool((got - expect).abs() <= tolerance * expect),
        "rescaled indicator seminorm at its analytic small-order value",
    );
    // Companion rows over a few orders for the report file.
    let mut rows = Vec::new();
    for &b in &[0.1, 0.05, beta] {
        let v = b * gagliardo_seminorm(&ind, b, 1.0)?;
        rows.push(ReportRow {
            param: b,
            value: v,
            aux1: 4.0 / (1.0 - b),
            aux2: 0.0,
        });
    }
    let report = ConvergenceReport {
        check_id: "ms_contrast_series".into(),
        rows,
        fitted_slope: None,
        limit_estimate: got,
        verdict: check.verdict,
        tolerance,
    };
    Ok((check, report))
}
