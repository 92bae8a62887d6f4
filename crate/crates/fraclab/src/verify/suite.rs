//! Suite orchestration: run the named check groups on a configuration,
//! collect uniform records, and emit the CSV reports. Check order is
//! fixed and every value prints with 17 significant digits, so two runs
//! of the same configuration produce byte-identical files.

use super::{audits, counterexample, limits, CheckRecord, CheckResult, ReportRow, Verdict};
use crate::config::RunConfig;
use crate::error::{FraclabError, Result};
use crate::fields::{io::format_f64, sample, ScalarField, TestFunction, VectorField};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Limits,
    Interpolation,
    Counterexample,
    Backends,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Suite::All),
            "limits" => Ok(Suite::Limits),
            "interpolation" => Ok(Suite::Interpolation),
            "counterexample" => Ok(Suite::Counterexample),
            "backends" => Ok(Suite::Backends),
            other => Err(FraclabError::Config(format!("unknown suite `{other}`"))),
        }
    }
}

/// Wrap one check so a crash inside it becomes a failing diagnostic row
/// instead of aborting the whole run.
fn guarded<F>(name: &str, records: &mut Vec<CheckRecord>, f: F)
where
    F: FnOnce() -> Result<Vec<CheckRecord>>,
{
    let diagnostic = |suffix: &str| CheckRecord {
        check_id: format!("{name}_{suffix}"),
        rows: vec![ReportRow {
            param: 0.0,
            value: f64::NAN,
            aux1: 0.0,
            aux2: 0.0,
        }],
        verdict: Verdict::Fail,
    };
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(mut rs)) => records.append(&mut rs),
        Ok(Err(e)) => {
            eprintln!("check {name} errored: {e}");
            records.push(diagnostic("error"));
        }
        Err(_) => {
            eprintln!("check {name} crashed");
            records.push(diagnostic("crash"));
        }
    }
}

fn recs_from_results(results: Vec<CheckResult>) -> Vec<CheckRecord> {
    results.into_iter().map(CheckRecord::from).collect()
}

fn unit_gaussian(cfg: &RunConfig, n: usize) -> Result<ScalarField> {
    let g = cfg.grid(n)?;
    sample(&TestFunction::Gaussian { sigma: 1.0 }, &g)?.normalize_mass()
}

fn run_limits(cfg: &RunConfig, records: &mut Vec<CheckRecord>) -> Result<()> {
    let backend = cfg.backend();
    let g1 = cfg.grid(1)?;
    let gauss = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g1)?;
    let gd = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g1)?;
    let annulus = sample(
        &TestFunction::AnnulusSpectrum {
            xi_min: 0.5,
            xi_max: 1.5,
        },
        &g1,
    )?;

    guarded("limit_zero_p1", records, || {
        Ok(vec![limits::sweep_limit_zero(
            &gd,
            1.0,
            &cfg.alphas_limit_zero,
            &backend,
            cfg.tolerance("limit_zero", 0.05),
        )?
        .into()])
    });
    guarded("limit_zero_p2", records, || {
        Ok(vec![limits::sweep_limit_zero(
            &gauss,
            2.0,
            &cfg.alphas_limit_zero,
            &backend,
            cfg.tolerance("limit_zero", 0.05),
        )?
        .into()])
    });
    for p in [1.0, 2.0] {
        guarded("limit_one", records, || {
            Ok(vec![limits::sweep_limit_one(
                &gauss,
                p,
                &cfg.alphas_limit_one,
                &backend,
                cfg.tolerance("limit_one", 0.02),
            )?
            .into()])
        });
    }

    let unit1 = unit_gaussian(cfg, 1)?;
    guarded("energy_gaussian_n1", records, || {
        Ok(vec![limits::energy_limit(
            &unit1,
            &cfg.alphas_energy,
            &backend,
            cfg.tolerance("energy", 0.05),
        )?
        .into()])
    });
    guarded("energy_zero_mean", records, || {
        Ok(vec![limits::energy_limit(
            &gd,
            &cfg.alphas_energy,
            &backend,
            cfg.tolerance("energy", 0.05),
        )?
        .into()])
    });
    let eta_unit = sample(&TestFunction::CutoffEta { radius: 1.0 }, &g1)?.normalize_mass()?;
    guarded("energy_smoothed_indicator", records, || {
        Ok(vec![limits::energy_limit(
            &eta_unit,
            &cfg.alphas_energy,
            &backend,
            cfg.tolerance("energy_rough", 0.07),
        )?
        .into()])
    });
    if cfg.has_dim(2) {
        let unit2 = unit_gaussian(cfg, 2)?;
        guarded("energy_gaussian_n2", records, || {
            Ok(vec![limits::energy_limit(
                &unit2,
                &cfg.alphas_energy,
                &backend,
                cfg.tolerance("energy", 0.05),
            )?
            .into()])
        });
    }
    guarded("energy_truncated", records, || {
        Ok(vec![limits::energy_limit_truncated(
            &eta_unit,
            2.0,
            &cfg.alphas_energy,
            cfg.tolerance("energy_truncated", 0.05),
        )?
        .into()])
    });

    for (f, p) in [(&gd, 1.0), (&gd, 2.0), (&annulus, 1.0)] {
        guarded("laplacian_identity", records, || {
            Ok(vec![limits::laplacian_identity_sweep(
                f,
                p,
                &cfg.alphas_laplacian,
                &backend,
                cfg.tolerance("laplacian_identity", 0.03),
            )?
            .into()])
        });
    }

    guarded("alpha_continuity_p2", records, || {
        Ok(vec![limits::alpha_continuity_sweep(
            &gauss,
            2.0,
            0.5,
            &[0.2, 0.1, 0.05, 0.01],
            &backend,
            cfg.tolerance("alpha_continuity", 0.01),
        )?
        .into()])
    });
    guarded("alpha_continuity_p1", records, || {
        Ok(vec![limits::alpha_continuity_sweep(
            &gd,
            1.0,
            0.3,
            &[0.2, 0.1, 0.05, 0.01],
            &backend,
            cfg.tolerance("alpha_continuity", 0.01),
        )?
        .into()])
    });

    for f in [&gd, &annulus] {
        guarded("lower_semicontinuity", records, || {
            Ok(vec![limits::lower_semicontinuity_probe(
                f,
                &cfg.alphas_limit_zero,
                &backend,
            )?
            .into()])
        });
    }

    for (beta, p) in [(0.5, 1.0), (0.1, 2.0)] {
        guarded("uniform_bound", records, || {
            let (bound, diag) = limits::uniform_bound_audit(&gauss, 1.0, beta, p, &backend)?;
            Ok(vec![bound.into(), diag.into()])
        });
    }

    guarded("sweep_shape", records, || {
        Ok(recs_from_results(audits::sweep_shape_check(
            &gd,
            &cfg.alphas_limit_zero,
        )?))
    });
    Ok(())
}

fn run_interpolation(cfg: &RunConfig, records: &mut Vec<CheckRecord>) -> Result<()> {
    let backend = cfg.backend();
    let g1 = cfg.grid(1)?;
    let gauss = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g1)?;
    let gd = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g1)?;

    guarded("interpolation_g0", records, || {
        let mut betas = cfg.betas_interpolation.clone();
        betas.push(0.8);
        Ok(recs_from_results(audits::interpolation_audit(
            &gauss, 2.0, 0.8, &betas, 0.0, &backend,
        )?))
    });
    guarded("interpolation_g02", records, || {
        let betas: Vec<f64> = cfg
            .betas_interpolation
            .iter()
            .copied()
            .filter(|b| *b >= 0.2)
            .chain([0.2, 0.8])
            .collect();
        let mut betas = betas;
        betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        betas.dedup();
        Ok(recs_from_results(audits::interpolation_audit(
            &gauss, 2.0, 0.8, &betas, 0.2, &backend,
        )?))
    });
    guarded("h1bv", records, || {
        Ok(recs_from_results(audits::h1_bv_interpolation_audit(
            &gd,
            0.8,
            &cfg.betas_h1bv,
            &backend,
        )?))
    });
    guarded("splitting", records, || {
        let g = cfg.grid(1)?;
        let ind = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g)?;
        Ok(recs_from_results(audits::splitting_inequality_audit(
            &ind,
            0.6,
            0.3,
            &[0.5, 1.0, 2.0],
        )?))
    });
    for &n in &cfg.dims {
        guarded("mihlin", records, || {
            Ok(recs_from_results(audits::mihlin_uniformity_check(n)?))
        });
    }
    guarded("ms_contrast", records, || {
        let (check, series) =
            audits::ms_contrast_check(g1, 0.02, cfg.tolerance("ms_contrast", 0.05))?;
        Ok(vec![check.into(), series.into()])
    });
    Ok(())
}

fn run_counterexample(cfg: &RunConfig, records: &mut Vec<CheckRecord>) -> Result<()> {
    if !cfg.has_dim(2) {
        return Err(FraclabError::Config(
            "the counterexample suite requires an n = 2 grid (dims must include 2)".to_string(),
        ));
    }
    for &alpha in &cfg.counterexample_alphas {
        guarded("besov_demo", records, || {
            Ok(recs_from_results(counterexample::besov_strict_inclusion_demo(
                alpha,
                cfg.counterexample_half_width,
                cfg.counterexample_points,
                2 * cfg.counterexample_points,
            )?))
        });
    }
    Ok(())
}

fn run_backends(cfg: &RunConfig, records: &mut Vec<CheckRecord>) -> Result<()> {
    guarded("constants", records, || {
        Ok(recs_from_results(audits::constants_check()?))
    });

    for &n in &cfg.dims {
        guarded("backend_agreement", records, || {
            let fine = cfg.grid(n)?;
            let coarse = crate::fields::Grid::new(
                n,
                fine.half_width(),
                fine.points_per_axis() / 2,
            )?;
            Ok(recs_from_results(audits::backend_agreement_check(
                n,
                coarse,
                fine,
                &cfg.alphas_backend,
                cfg.tolerance("backend_agreement", 1e-2),
            )?))
        });
    }

    guarded("riesz_sign", records, || {
        Ok(recs_from_results(audits::riesz_sign_check(cfg.grid(1)?)?))
    });

    guarded("duality", records, || {
        let g = crate::fields::Grid::new(1, cfg.grid1.half_width, cfg.grid1.points.min(512))?;
        let gauss = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g)?;
        let gd = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g)?;
        let eta = sample(&TestFunction::CutoffEta { radius: 1.0 }, &g)?;
        let dil = sample(&TestFunction::GaussianDilated { lambda: 0.7 }, &g)?;
        let pairs = vec![
            (gauss.clone(), VectorField::from_scalar(dil)),
            (gd, VectorField::from_scalar(gauss.clone())),
            (eta, VectorField::from_scalar(gauss)),
        ];
        Ok(recs_from_results(audits::duality_check(
            &pairs,
            &cfg.alphas_backend,
            cfg.tolerance("duality", 1e-3),
        )?))
    });

    guarded("semigroup", records, || {
        let g = crate::fields::Grid::new(1, cfg.grid1.half_width, cfg.grid1.points.min(512))?;
        Ok(recs_from_results(audits::semigroup_representation_check(g)?))
    });

    guarded("dee_bounds", records, || {
        Ok(recs_from_results(audits::dee_bound_check(
            cfg.grid(1)?,
            &cfg.alphas_backend,
            &[1.0, 2.0],
        )?))
    });

    guarded("tail_scaling", records, || {
        let g = cfg.grid(1)?;
        let gd = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g)?;
        let mut out = Vec::new();
        for beta in [0.3, 0.6] {
            out.push(
                limits::tail_scaling_check(
                    &gd,
                    beta,
                    &cfg.tail_radii,
                    cfg.tolerance("tail_scaling", 0.05),
                )?
                .into(),
            );
        }
        Ok(out)
    });

    guarded("decomposition", records, || {
        let g = crate::fields::Grid::new(1, cfg.grid1.half_width, cfg.grid1.points.min(512))?;
        Ok(vec![audits::decomposition_check(g)?.into()])
    });
    guarded("involution", records, || {
        let g = crate::fields::Grid::new(1, cfg.grid1.half_width, cfg.grid1.points.min(512))?;
        let gd = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g)?;
        Ok(vec![audits::involution_check(&gd)?.into()])
    });
    guarded("reassembly", records, || {
        let g = crate::fields::Grid::new(1, cfg.grid1.half_width, cfg.grid1.points.min(512))?;
        let gauss = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g)?;
        Ok(vec![audits::reassembly_check(&gauss, 0.4, 2.0)?.into()])
    });
    guarded("self_adjoint", records, || {
        let g = crate::fields::Grid::new(1, cfg.grid1.half_width, cfg.grid1.points.min(512))?;
        Ok(vec![audits::self_adjoint_check(g, 0.5)?.into()])
    });
    Ok(())
}

/// Run a suite and return its records in a fixed order.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    match suite {
        Suite::Limits => run_limits(cfg, &mut records)?,
        Suite::Interpolation => run_interpolation(cfg, &mut records)?,
        Suite::Counterexample => run_counterexample(cfg, &mut records)?,
        Suite::Backends => run_backends(cfg, &mut records)?,
        Suite::All => {
            run_backends(cfg, &mut records)?;
            run_limits(cfg, &mut records)?;
            run_interpolation(cfg, &mut records)?;
            run_counterexample(cfg, &mut records)?;
        }
    }
    Ok(records)
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Write one CSV per record and a summary file ending in `SUITE,p/t`.
pub fn write_reports(records: &[CheckRecord], out_dir: &Path) -> Result<(usize, usize)> {
    std::fs::create_dir_all(out_dir)?;
    let header = "check_id,param,value,aux1,aux2,verdict";
    for rec in records {
        let path = out_dir.join(format!("{}.csv", sanitize(&rec.check_id)));
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(file, "{header}")?;
        for row in &rec.rows {
            writeln!(
                file,
                "{},{},{},{},{},{}",
                rec.check_id,
                format_f64(row.param),
                format_f64(row.value),
                format_f64(row.aux1),
                format_f64(row.aux2),
                rec.verdict.as_str()
            )?;
        }
    }
    let passed = records.iter().filter(|r| r.verdict.passed()).count();
    let total = records.len();
    let mut summary = std::io::BufWriter::new(std::fs::File::create(out_dir.join("summary.csv"))?);
    writeln!(summary, "{header}")?;
    for rec in records {
        let last = rec.rows.last();
        writeln!(
            summary,
            "{},{},{},{},{},{}",
            rec.check_id,
            format_f64(last.map(|r| r.param).unwrap_or(0.0)),
            format_f64(last.map(|r| r.value).unwrap_or(0.0)),
            format_f64(last.map(|r| r.aux1).unwrap_or(0.0)),
            format_f64(last.map(|r| r.aux2).unwrap_or(0.0)),
            rec.verdict.as_str()
        )?;
    }
    writeln!(summary, "SUITE,{passed}/{total}")?;
    Ok((passed, total))
}
