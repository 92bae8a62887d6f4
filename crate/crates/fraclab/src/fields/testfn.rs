//! Catalog of analytic test functions.
//!
//! The families cover the hypotheses the verification checks need:
//! rapidly decaying smooth fields, zero-integral fields (first-moment
//! class), spectrally band-limited fields whose discrete moments all
//! vanish, rough indicator profiles, the radial cutoff, and the
//! singular field showing the Besov/variation gap.

use super::{Grid, ScalarField};
use crate::error::{FraclabError, Result};
use crate::fft_util::{fft_nd, signed_freq_index};
use num_complex::Complex;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// exp(-|x|^2 / sigma^2)
    Gaussian { sigma: f64 },
    /// d/dx_1 exp(-|x|^2 / sigma^2); zero integral by oddness.
    GaussianDerivative { sigma: f64 },
    /// Mass-preserving dilation lambda^n exp(-|lambda x|^2).
    GaussianDilated { lambda: f64 },
    /// Real field synthesized from a smooth radial spectrum supported in
    /// {xi_min <= |xi| <= xi_max}; all discrete moments vanish.
    AnnulusSpectrum { xi_min: f64, xi_max: f64 },
    /// Indicator of [a, b] (n = 1 only).
    IndicatorInterval { a: f64, b: f64 },
    /// Radial cutoff eta(|x|/R).
    CutoffEta { radius: f64 },
    /// eta_1(x) |x|^(alpha - 2) (n = 2 only); singular at the origin.
    BesovCounterexample { alpha: f64 },
}

impl TestFunction {
    pub fn label(&self) -> String {
        match self {
            TestFunction::Gaussian { sigma } => format!("gaussian:{sigma}"),
            TestFunction::GaussianDerivative { sigma } => format!("gaussian_derivative:{sigma}"),
            TestFunction::GaussianDilated { lambda } => format!("gaussian_dilated:{lambda}"),
            TestFunction::AnnulusSpectrum { xi_min, xi_max } => {
                format!("annulus_spectrum:{xi_min},{xi_max}")
            }
            TestFunction::IndicatorInterval { a, b } => format!("indicator_interval:{a},{b}"),
            TestFunction::CutoffEta { radius } => format!("cutoff_eta:{radius}"),
            TestFunction::BesovCounterexample { alpha } => format!("besov_counterexample:{alpha}"),
        }
    }
}

/// The 1D cutoff profile: 1 on [-1/2, 1/2], cubic smoothstep down to 0
/// on 1/2 <= |t| <= 1, zero outside [-1, 1]. Its Lipschitz constant is
/// exactly 3, attained mid-transition.
pub fn eta_profile(t: f64) -> f64 {
    let a = t.abs();
    if a <= 0.5 {
        1.0
    } else if a >= 1.0 {
        0.0
    } else {
        let u = 2.0 * a - 1.0;
        1.0 - u * u * (3.0 - 2.0 * u)
    }
}

/// Sample eta_R(x) = eta(|x|/R) on a grid.
pub fn cutoff_eta(radius: f64, grid: &Grid) -> Result<ScalarField> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(FraclabError::domain(format!(
            "cutoff radius must be positive, got {radius}"
        )));
    }
    let values = (0..grid.num_nodes())
        .map(|i| eta_profile(grid.node_radius(i) / radius))
        .collect();
    ScalarField::new(
        *grid,
        values,
        TestFunction::CutoffEta { radius }.label(),
    )
}

/// Sample eta_1(x) |x|^(alpha - n) on an n = 2 grid. Cell-centering keeps
/// every sample finite; the field is tagged singular.
pub fn besov_counterexample(alpha: f64, grid: &Grid) -> Result<ScalarField> {
    if grid.dim() != 2 {
        return Err(FraclabError::domain(
            "besov counterexample requires n = 2".to_string(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FraclabError::domain(format!(
            "besov counterexample requires alpha in (0,1), got {alpha}"
        )));
    }
    let values = (0..grid.num_nodes())
        .map(|i| {
            let r = grid.node_radius(i);
            eta_profile(r) * r.powf(alpha - 2.0)
        })
        .collect();
    ScalarField::new_singular(
        *grid,
        values,
        TestFunction::BesovCounterexample { alpha }.label(),
    )
}

fn smooth_bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

fn annulus_field(xi_min: f64, xi_max: f64, grid: &Grid) -> Result<ScalarField> {
    let nyquist = 0.5 / grid.spacing();
    if !(xi_min > 0.0 && xi_min < xi_max && xi_max < nyquist) {
        return Err(FraclabError::domain(format!(
            "annulus spectrum needs 0 < xi_min < xi_max < {nyquist}, got [{xi_min}, {xi_max}]"
        )));
    }
    let nn = grid.points_per_axis();
    let h = grid.spacing();
    let center = (xi_min + xi_max) / 2.0;
    let half = (xi_max - xi_min) / 2.0;
    let mut spec = vec![Complex::new(0.0, 0.0); grid.num_nodes()];
    // Half-cell phase per axis so the synthesized samples live on the
    // cell-centered nodes x_k = (k + 1/2 - N/2) h. The phase is not
    // N-periodic, so it must be taken at the signed frequency to keep the
    // spectrum Hermitian.
    let phase: Vec<Complex<f64>> = (0..nn)
        .map(|m| {
            let s = signed_freq_index(m, nn) as f64;
            Complex::from_polar(1.0, 2.0 * PI * (0.5 - nn as f64 / 2.0) * s / nn as f64)
        })
        .collect();
    match grid.dim() {
        1 => {
            for (m, s) in spec.iter_mut().enumerate() {
                let xi = signed_freq_index(m, nn) as f64 / (nn as f64 * h);
                *s = phase[m] * smooth_bump((xi.abs() - center) / half);
            }
        }
        _ => {
            for mi in 0..nn {
                let xi_i = signed_freq_index(mi, nn) as f64 / (nn as f64 * h);
                for mj in 0..nn {
                    let xi_j = signed_freq_index(mj, nn) as f64 / (nn as f64 * h);
                    let r = (xi_i * xi_i + xi_j * xi_j).sqrt();
                    spec[mi * nn + mj] =
                        phase[mi] * phase[mj] * smooth_bump((r - center) / half);
                }
            }
        }
    }
    fft_nd(&mut spec, grid.dim(), nn, true);
    let scale = 1.0 / grid.cell_measure();
    let values = spec.iter().map(|c| c.re * scale).collect();
    ScalarField::new(
        *grid,
        values,
        TestFunction::AnnulusSpectrum { xi_min, xi_max }.label(),
    )
}

/// Sample a test-function family on a grid.
pub fn sample(spec: &TestFunction, grid: &Grid) -> Result<ScalarField> {
    let tag = spec.label();
    match *spec {
        TestFunction::Gaussian { sigma } => {
            if !(sigma > 0.0) {
                return Err(FraclabError::domain("gaussian sigma must be > 0"));
            }
            let s2 = sigma * sigma;
            let values = (0..grid.num_nodes())
                .map(|i| {
                    let c = grid.node_coords(i);
                    (-(c[0] * c[0] + c[1] * c[1]) / s2).exp()
                })
                .collect();
            ScalarField::new(*grid, values, tag)
        }
        TestFunction::GaussianDerivative { sigma } => {
            if !(sigma > 0.0) {
                return Err(FraclabError::domain("gaussian sigma must be > 0"));
            }
            let s2 = sigma * sigma;
            let values = (0..grid.num_nodes())
                .map(|i| {
                    let c = grid.node_coords(i);
                    -(2.0 * c[0] / s2) * (-(c[0] * c[0] + c[1] * c[1]) / s2).exp()
                })
                .collect();
            ScalarField::new(*grid, values, tag)
        }
        TestFunction::GaussianDilated { lambda } => {
            if !(lambda > 0.0) {
                return Err(FraclabError::domain("dilation lambda must be > 0"));
            }
            let amp = lambda.powi(grid.dim() as i32);
            let l2 = lambda * lambda;
            let values = (0..grid.num_nodes())
                .map(|i| {
                    let c = grid.node_coords(i);
                    amp * (-l2 * (c[0] * c[0] + c[1] * c[1])).exp()
                })
                .collect();
            ScalarField::new(*grid, values, tag)
        }
        TestFunction::AnnulusSpectrum { xi_min, xi_max } => annulus_field(xi_min, xi_max, grid),
        TestFunction::IndicatorInterval { a, b } => {
            if grid.dim() != 1 {
                return Err(FraclabError::domain(
                    "indicator interval is defined for n = 1".to_string(),
                ));
            }
            if !(a < b) {
                return Err(FraclabError::domain(format!(
                    "indicator needs a < b, got [{a}, {b}]"
                )));
            }
            let values = (0..grid.num_nodes())
                .map(|i| {
                    let x = grid.axis_coord(i);
                    if (a..=b).contains(&x) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            ScalarField::new(*grid, values, tag)
        }
        TestFunction::CutoffEta { radius } => cutoff_eta(radius, grid),
        TestFunction::BesovCounterexample { alpha } => besov_counterexample(alpha, grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_samples_formula() {
        let g = Grid::new(1, 6.0, 128).unwrap();
        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        for k in 0..128 {
            let x = g.axis_coord(k);
            assert!((f.values()[k] - (-x * x).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_derivative_zero_integral() {
        let g = Grid::new(1, 10.0, 512).unwrap();
        let f = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g).unwrap();
        let l1: f64 = f.values().iter().map(|v| v.abs()).sum::<f64>() * g.cell_measure();
        assert!(f.integral().abs() <= 1e-10 * l1.max(1e-30));
    }

    #[test]
    fn indicator_values_binary() {
        let g = Grid::new(1, 2.0, 64).unwrap();
        let f = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g).unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0 || v == 1.0));
        assert!(f.values().iter().any(|&v| v == 1.0));
        let g2 = Grid::new(2, 2.0, 16).unwrap();
        assert!(sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g2).is_err());
    }

    #[test]
    fn eta_profile_shape() {
        assert_eq!(eta_profile(0.25), 1.0);
        assert_eq!(eta_profile(-0.5), 1.0);
        assert_eq!(eta_profile(1.1), 0.0);
        assert_eq!(eta_profile(1.0), 0.0);
        let mid = eta_profile(0.75);
        assert!(mid > 0.0 && mid < 1.0);
        assert!((mid - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eta_max_slope_is_three() {
        // Sampled finite-difference slope approaches the analytic Lipschitz
        // constant 3 from below.
        let g = Grid::new(1, 2.0, 4096).unwrap();
        let f = cutoff_eta(1.0, &g).unwrap();
        let h = g.spacing();
        let mut max_slope: f64 = 0.0;
        for k in 1..g.num_nodes() {
            max_slope = max_slope.max((f.values()[k] - f.values()[k - 1]).abs() / h);
        }
        assert!(max_slope <= 3.0 + 10.0 * h, "max slope {max_slope}");
        assert!(max_slope > 2.9, "max slope {max_slope}");
    }

    #[test]
    fn besov_counterexample_values() {
        let g = Grid::new(2, 2.0, 256).unwrap();
        let f = besov_counterexample(0.5, &g).unwrap();
        assert!(f.is_singular());
        // At |x| = 0.25 the cutoff is 1, so f = 0.25^{-1.5} = 8; probe the
        // node closest to (0.25, 0) on the lattice.
        let h = g.spacing();
        let i = ((0.25 + g.half_width()) / h - 0.5).round() as usize;
        let j = ((0.0 + g.half_width()) / h - 0.5).round() as usize;
        let idx = g.flat_index([i, j]);
        let r = g.node_radius(idx);
        assert!((f.values()[idx] - r.powf(-1.5)).abs() < 1e-12);
        // Outside the cutoff support the field vanishes.
        let far = g.flat_index([g.points_per_axis() - 1, j]);
        assert_eq!(f.values()[far], 0.0);
        let g1 = Grid::new(1, 2.0, 64).unwrap();
        assert!(besov_counterexample(0.5, &g1).is_err());
    }

    #[test]
    fn annulus_moments_vanish() {
        for (n, nn, l) in [(1usize, 256usize, 8.0), (2, 64, 8.0)] {
            let g = Grid::new(n, l, nn).unwrap();
            let f = sample(
                &TestFunction::AnnulusSpectrum {
                    xi_min: 0.5,
                    xi_max: 1.5,
                },
                &g,
            )
            .unwrap();
            let l1: f64 = f.values().iter().map(|v| v.abs()).sum::<f64>() * g.cell_measure();
            assert!(l1 > 0.0);
            assert!(
                f.integral().abs() <= 1e-8 * l1,
                "n = {n}: integral {} vs l1 {l1}",
                f.integral()
            );
            for axis in 0..n {
                assert!(
                    f.first_moment(axis).abs() <= 1e-6 * l * l1,
                    "n = {n}, axis {axis}: moment {}",
                    f.first_moment(axis)
                );
            }
        }
    }

    #[test]
    fn annulus_respects_nyquist() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        // Nyquist is 2.0 here.
        assert!(sample(
            &TestFunction::AnnulusSpectrum {
                xi_min: 0.5,
                xi_max: 2.5
            },
            &g
        )
        .is_err());
    }
}
