//! Discrete norms and seminorms: Lebesgue, Gagliardo, Hardy, Besov,
//! fractional variation, Hoelder.
//!
//! Fields are zero outside their box by construction; the Gagliardo
//! double sum therefore carries an exterior completion term
//! 2 sum_x |f(x)|^p E(x) h^n with E the closed-form box-complement
//! kernel integral, without which the seminorm misses almost all of its
//! long-range mass at small alpha.

use crate::backend::Backend;
use crate::error::{FraclabError, Result};
use crate::exterior::exterior_integral;
use crate::fields::{translate_cells, ScalarField, VectorField};
use rayon::prelude::*;

/// Norm/seminorm selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    Lp(f64),
    Gagliardo { alpha: f64, p: f64 },
    Hardy1,
    BesovSup { alpha: f64 },
    FracVariation { alpha: f64 },
    Holder { alpha: f64 },
    Sup,
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(FraclabError::domain(format!("p must be >= 1, got {p}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FraclabError::domain(format!(
            "alpha must lie in (0,1), got {alpha}"
        )))
    }
}

/// (sum |f|^p h^n)^(1/p).
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    check_p(p)?;
    let s: f64 = f.values().iter().map(|v| v.abs().powf(p)).sum();
    Ok((s * f.grid().cell_measure()).powf(1.0 / p))
}

pub fn sup_norm(f: &ScalarField) -> f64 {
    f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Lp norm of a vector field using the pointwise Euclidean magnitude.
pub fn lp_norm_vec(phi: &VectorField, p: f64) -> Result<f64> {
    lp_norm(&phi.magnitude(), p)
}

pub fn sup_norm_vec(phi: &VectorField) -> f64 {
    sup_norm(&phi.magnitude())
}

/// Gagliardo seminorm: double sum over node pairs x != y of
/// |f(x)-f(y)|^p / |x-y|^(n+p alpha) h^(2n), diagonal excluded, plus the
/// zero-extension exterior term.
pub fn gagliardo_seminorm(f: &ScalarField, alpha: f64, p: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_p(p)?;
    let g = *f.grid();
    let n = g.dim();
    let q = n as f64 + p * alpha;
    let h = g.spacing();
    let hn = g.cell_measure();
    let vals = f.values();
    let nn = g.points_per_axis();

    let interior: f64 = match n {
        1 => {
            let rows: Vec<f64> = (0..nn)
                .into_par_iter()
                .map(|i| {
                    let mut acc = 0.0;
                    for j in i + 1..nn {
                        let d = (vals[i] - vals[j]).abs();
                        if d != 0.0 {
                            let r = (j - i) as f64 * h;
                            acc += d.powf(p) * r.powf(-q);
                        }
                    }
                    acc
                })
                .collect();
            2.0 * rows.iter().sum::<f64>() * hn * hn
        }
        _ => {
            let total = nn * nn;
            let rows: Vec<f64> = (0..total)
                .into_par_iter()
                .map(|a| {
                    let (ai, aj) = (a / nn, a % nn);
                    let fa = vals[a];
                    let mut acc = 0.0;
                    for b in a + 1..total {
                        let d = (fa - vals[b]).abs();
                        if d != 0.0 {
                            let (bi, bj) = (b / nn, b % nn);
                            let di = bi as f64 - ai as f64;
                            let dj = bj as f64 - aj as f64;
                            let r = (di * di + dj * dj).sqrt() * h;
                            acc += d.powf(p) * r.powf(-q);
                        }
                    }
                    acc
                })
                .collect();
            2.0 * rows.iter().sum::<f64>() * hn * hn
        }
    };

    let exterior: f64 = {
        let terms: Vec<f64> = (0..g.num_nodes())
            .into_par_iter()
            .map(|i| {
                let v = vals[i].abs();
                if v == 0.0 {
                    0.0
                } else {
                    let c = g.node_coords(i);
                    v.powf(p) * exterior_integral(n, g.half_width(), &c[..n.min(2)], q)
                }
            })
            .collect();
        2.0 * terms.iter().sum::<f64>() * hn
    };

    Ok((interior + exterior).powf(1.0 / p))
}

/// Hardy-norm evaluation together with its box-doubling diagnostic; the
/// Riesz transform of a nonzero-mean field is not integrable, which shows
/// up as growth of the doubled-box value.
#[derive(Debug, Clone, Copy)]
pub struct HardyNormReport {
    pub value: f64,
    pub value_box_doubled: f64,
}

impl HardyNormReport {
    pub fn relative_growth(&self) -> f64 {
        (self.value_box_doubled - self.value) / self.value.max(1e-300)
    }
}

/// || f ||_1 + || Rf ||_1 with R from the chosen backend, evaluated on the
/// field's own box and on a zero-fill doubled box.
pub fn hardy_norm(f: &ScalarField, backend: &Backend) -> Result<HardyNormReport> {
    let value = lp_norm(f, 1.0)? + lp_norm_vec(&backend.riesz(f)?, 1.0)?;
    let big = f.grid().doubled_box();
    let fe = f.embed(&big)?;
    let value_box_doubled = lp_norm(&fe, 1.0)? + lp_norm_vec(&backend.riesz(&fe)?, 1.0)?;
    Ok(HardyNormReport {
        value,
        value_box_doubled,
    })
}

/// Frozen lattice shift set for the Besov seminorm: 48 log-spaced targets
/// from h to L/4 snapped to whole cells, deduplicated.
pub fn besov_shift_cells(grid: &crate::fields::Grid) -> Vec<i64> {
    let h = grid.spacing();
    let lo = h;
    let hi = grid.half_width() / 4.0;
    let mut cells: Vec<i64> = crate::spectral::log_spaced(lo, hi, 48)
        .into_iter()
        .map(|t| (t / h).round().max(1.0) as i64)
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells
}

/// Besov-type seminorm against an explicit shift list (cells along the
/// first axis): max over shifts of ||f(.+y) - f||_1 / |y|^alpha.
pub fn besov_sup_with_shifts(f: &ScalarField, alpha: f64, shifts: &[i64]) -> Result<f64> {
    check_alpha(alpha)?;
    if shifts.is_empty() {
        return Err(FraclabError::domain("empty shift set"));
    }
    let g = f.grid();
    let h = g.spacing();
    let mut sup: f64 = 0.0;
    for &cells in shifts {
        let mut shift = vec![0i64; g.dim()];
        shift[0] = cells;
        let moved = translate_cells(f, &shift)?;
        let diff = moved.sub(f)?;
        let y = cells as f64 * h;
        sup = sup.max(lp_norm(&diff, 1.0)? / y.abs().powf(alpha));
    }
    Ok(sup)
}

/// Besov-type seminorm over the frozen default shift set.
pub fn besov_sup_seminorm(f: &ScalarField, alpha: f64) -> Result<f64> {
    besov_sup_with_shifts(f, alpha, &besov_shift_cells(f.grid()))
}

/// Total fractional variation computed as || nabla^alpha f ||_1, valid
/// for the smooth decaying families.
pub fn frac_variation(f: &ScalarField, alpha: f64, backend: &Backend) -> Result<f64> {
    if f.is_singular() {
        return Err(FraclabError::hypothesis(
            "fractional variation via nabla is not meaningful for singular fields".to_string(),
        ));
    }
    lp_norm_vec(&backend.nabla(f, alpha)?, 1.0)
}

/// Axis-aligned evaluation window for the Hoelder seminorm.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Window {
    pub fn full(grid: &crate::fields::Grid) -> Self {
        let l = grid.half_width();
        Window {
            lo: [-l, -l],
            hi: [l, l],
        }
    }

    fn contains(&self, c: &[f64; 2], n: usize) -> bool {
        (0..n).all(|a| c[a] >= self.lo[a] && c[a] <= self.hi[a])
    }
}

/// max over node pairs in the window of |f(x) - f(y)| / |x - y|^alpha;
/// alpha = 1 gives the Lipschitz constant.
pub fn holder_seminorm(f: &ScalarField, alpha: f64, window: Option<Window>) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(FraclabError::domain(format!(
            "holder exponent must lie in (0,1], got {alpha}"
        )));
    }
    let g = *f.grid();
    let n = g.dim();
    let w = window.unwrap_or_else(|| Window::full(&g));
    let idx: Vec<usize> = (0..g.num_nodes())
        .filter(|&i| w.contains(&g.node_coords(i), n))
        .collect();
    if idx.is_empty() {
        return Err(FraclabError::domain("empty holder window"));
    }
    let vals = f.values();
    let sup = idx
        .par_iter()
        .enumerate()
        .map(|(pos, &i)| {
            let ci = g.node_coords(i);
            let mut m: f64 = 0.0;
            for &j in &idx[pos + 1..] {
                let cj = g.node_coords(j);
                let dx = ci[0] - cj[0];
                let dy = ci[1] - cj[1];
                let r = (dx * dx + dy * dy).sqrt();
                m = m.max((vals[i] - vals[j]).abs() / r.powf(alpha));
            }
            m
        })
        .reduce(|| 0.0, f64::max);
    Ok(sup)
}

/// Evaluate a norm by kind.
pub fn norm(f: &ScalarField, kind: &NormKind, backend: &Backend) -> Result<f64> {
    match *kind {
        NormKind::Lp(p) => lp_norm(f, p),
        NormKind::Sup => Ok(sup_norm(f)),
        NormKind::Gagliardo { alpha, p } => gagliardo_seminorm(f, alpha, p),
        NormKind::Hardy1 => Ok(hardy_norm(f, backend)?.value),
        NormKind::BesovSup { alpha } => besov_sup_seminorm(f, alpha),
        NormKind::FracVariation { alpha } => frac_variation(f, alpha, backend),
        NormKind::Holder { alpha } => holder_seminorm(f, alpha, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::fields::{sample, Grid, TestFunction};
    use std::f64::consts::PI;

    fn grid1(nn: usize, l: f64) -> Grid {
        Grid::new(1, l, nn).unwrap()
    }

    #[test]
    fn lp_known_values() {
        let g = grid1(2400, 12.0);
        let ind = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g).unwrap();
        let v = lp_norm(&ind, 1.0).unwrap();
        assert!((v - 1.0).abs() <= g.spacing() + 1e-12, "got {v}");

        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        // || e^{-x^2} ||_2 = (pi/2)^{1/4}
        let l2 = lp_norm(&f, 2.0).unwrap();
        assert!((l2 - (PI / 2.0).powf(0.25)).abs() < 1e-6, "got {l2}");

        let z = ScalarField::zero(g);
        assert_eq!(lp_norm(&z, 1.0).unwrap(), 0.0);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn gagliardo_indicator_analytic() {
        // [chi_{[0,1]}]_{W^{alpha,1}} = 4 / (alpha (1 - alpha)).
        let g = grid1(1024, 12.0);
        let ind = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g).unwrap();
        let v = gagliardo_seminorm(&ind, 0.5, 1.0).unwrap();
        let expect = 4.0 / (0.5 * 0.5);
        assert!(
            (v - expect).abs() / expect < 0.05,
            "got {v}, expected {expect}"
        );
        let z = ScalarField::zero(g);
        assert_eq!(gagliardo_seminorm(&z, 0.5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn gagliardo_ms_limit_shape() {
        // alpha * [chi]_{W^{alpha,1}} ~ 4 / (1 - alpha) at small alpha.
        let g = grid1(1024, 12.0);
        let ind = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g).unwrap();
        let alpha = 0.02;
        let v = alpha * gagliardo_seminorm(&ind, alpha, 1.0).unwrap();
        let expect = 4.0 / (1.0 - alpha);
        assert!(
            (v - expect).abs() / expect < 0.05,
            "got {v}, expected {expect}"
        );
    }

    #[test]
    fn hardy_norm_diagnostics() {
        let backend = Backend::default();
        let g = grid1(1024, 12.0);
        let zm = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g).unwrap();
        let rep = hardy_norm(&zm, &backend).unwrap();
        assert!(rep.value.is_finite() && rep.value > 0.0);
        assert!(
            rep.relative_growth().abs() <= 0.05,
            "zero-mean field should be box-stable, grew {:.3}",
            rep.relative_growth()
        );

        let gauss = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        let rep = hardy_norm(&gauss, &backend).unwrap();
        assert!(
            rep.relative_growth() >= 0.10,
            "nonzero-mean field should grow >= 10%, grew {:.3}",
            rep.relative_growth()
        );

        let z = ScalarField::zero(g);
        assert_eq!(hardy_norm(&z, &backend).unwrap().value, 0.0);
    }

    #[test]
    fn besov_indicator_analytic() {
        // sup_y 2 min(|y|,1)/|y|^{1/2} = 2 at |y| = 1.
        let g = grid1(1024, 12.0);
        let ind = sample(&TestFunction::IndicatorInterval { a: 0.0, b: 1.0 }, &g).unwrap();
        let v = besov_sup_seminorm(&ind, 0.5).unwrap();
        assert!((v - 2.0).abs() / 2.0 < 0.05, "got {v}");
        let z = ScalarField::zero(g);
        assert_eq!(besov_sup_seminorm(&z, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn frac_variation_limits() {
        let backend = Backend::default();
        let g = grid1(1024, 12.0);
        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        // near alpha = 1 the variation approaches || f' ||_1 = 2.
        let v = frac_variation(&f, 0.999, &backend).unwrap();
        assert!((v - 2.0).abs() / 2.0 < 0.02, "got {v}");
        // Gagliardo comparison: |D^alpha f| <= mu [f]_{W^alpha,1}.
        let alpha = 0.5;
        let lhs = frac_variation(&f, alpha, &backend).unwrap();
        let rhs = constants::mu(1, alpha).unwrap() * gagliardo_seminorm(&f, alpha, 1.0).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-6), "{lhs} vs {rhs}");

        let g2 = Grid::new(2, 2.0, 32).unwrap();
        let sing = crate::fields::besov_counterexample(0.5, &g2).unwrap();
        assert!(frac_variation(&sing, 0.5, &backend).is_err());
    }

    #[test]
    fn holder_basics() {
        let g = grid1(512, 2.0);
        // |x| has Lipschitz constant 1.
        let vals: Vec<f64> = (0..512).map(|k| g.axis_coord(k).abs()).collect();
        let f = ScalarField::new(g, vals, "absx").unwrap();
        let v = holder_seminorm(&f, 1.0, None).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "got {v}");

        let c = ScalarField::new(g, vec![4.2; 512], "const").unwrap();
        assert_eq!(holder_seminorm(&c, 0.5, None).unwrap(), 0.0);

        let w = Window {
            lo: [5.0, 0.0],
            hi: [6.0, 0.0],
        };
        assert!(holder_seminorm(&f, 0.5, Some(w)).is_err());
    }

    #[test]
    fn translation_lower_slope_bound() {
        // log-log slope of ||f(.+y) - f||_1 in |y| is >= alpha - 0.05 for
        // the smooth Gaussian at every alpha in (0,1); the smooth rate is 1.
        let g = grid1(1024, 12.0);
        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        let h = g.spacing();
        let mut pts = Vec::new();
        for cells in [1i64, 2, 4, 8] {
            let moved = translate_cells(&f, &[cells]).unwrap();
            let d = lp_norm(&moved.sub(&f).unwrap(), 1.0).unwrap();
            pts.push(((cells as f64 * h).ln(), d.ln()));
        }
        let slope = crate::verify::fit_slope(&pts);
        for alpha in [0.25, 0.5, 0.75] {
            assert!(slope >= alpha - 0.05, "slope {slope} vs alpha {alpha}");
        }
    }

    #[test]
    fn norms_absolutely_homogeneous() {
        let backend = Backend::default();
        let g = grid1(256, 10.0);
        let f = sample(&TestFunction::GaussianDerivative { sigma: 1.0 }, &g).unwrap();
        let c = -2.5f64;
        let fc = f.scale(c);
        for kind in [
            NormKind::Lp(1.0),
            NormKind::Lp(2.0),
            NormKind::Sup,
            NormKind::Gagliardo { alpha: 0.5, p: 1.0 },
            NormKind::Hardy1,
            NormKind::BesovSup { alpha: 0.5 },
            NormKind::FracVariation { alpha: 0.5 },
            NormKind::Holder { alpha: 0.5 },
        ] {
            let a = norm(&fc, &kind, &backend).unwrap();
            let b = norm(&f, &kind, &backend).unwrap();
            assert!(
                (a - c.abs() * b).abs() <= 1e-12 * a.max(1.0),
                "{kind:?}: {a} vs {}",
                c.abs() * b
            );
            assert!(b > 0.0, "{kind:?} vanished on a nonzero field");
        }
    }

    #[test]
    fn triangle_inequality_sampled() {
        use rand::{Rng, SeedableRng};
        let backend = Backend::default();
        let g = grid1(128, 8.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let kinds = [
            NormKind::Lp(1.0),
            NormKind::Lp(2.0),
            NormKind::Sup,
            NormKind::Gagliardo { alpha: 0.4, p: 1.0 },
            NormKind::BesovSup { alpha: 0.4 },
            NormKind::Holder { alpha: 0.4 },
        ];
        for _ in 0..20 {
            // Random smooth decaying fields: Gaussian envelope times a
            // low-order polynomial.
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let (a, b, c): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
                let vals: Vec<f64> = (0..g.num_nodes())
                    .map(|i| {
                        let x = g.axis_coord(i);
                        (a - 0.5 + (b - 0.5) * x + (c - 0.5) * x * x) * (-x * x).exp()
                    })
                    .collect();
                ScalarField::new(g, vals, "rand").unwrap()
            };
            let f = mk(&mut rng);
            let w = mk(&mut rng);
            let sum = {
                let vals: Vec<f64> = f
                    .values()
                    .iter()
                    .zip(w.values())
                    .map(|(x, y)| x + y)
                    .collect();
                ScalarField::new(g, vals, "rand").unwrap()
            };
            for kind in &kinds {
                let ns = norm(&sum, kind, &backend).unwrap();
                let nf = norm(&f, kind, &backend).unwrap();
                let nw = norm(&w, kind, &backend).unwrap();
                assert!(
                    ns <= nf + nw + 1e-10 * (nf + nw),
                    "{kind:?}: {ns} > {nf} + {nw}"
                );
            }
        }
    }
}
