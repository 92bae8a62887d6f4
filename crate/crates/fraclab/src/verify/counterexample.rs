//! The strict-inclusion demonstration: the cutoff power field has a
//! translation seminorm that is stable under refinement while its
//! critical Lebesgue norm diverges, so it lies in the translation class
//! but not in the variation class.

use super::{CheckResult, Verdict};
use crate::error::{FraclabError, Result};
use crate::fields::{besov_counterexample, Grid};
use crate::norms::{besov_shift_cells, besov_sup_with_shifts, lp_norm};

/// Run the demonstration at one order on an N-refinement pair of n = 2
/// grids. The shift set is frozen from the coarse grid so both
/// resolutions measure the same physical translations.
pub fn besov_strict_inclusion_demo(
    alpha: f64,
    half_width: f64,
    n_coarse: usize,
    n_fine: usize,
) -> Result<Vec<CheckResult>> {
    if n_fine != 2 * n_coarse {
        return Err(FraclabError::domain(
            "the refinement pair must halve the spacing",
        ));
    }
    let coarse = Grid::new(2, half_width, n_coarse)?;
    let fine = Grid::new(2, half_width, n_fine)?;
    let shifts_coarse = besov_shift_cells(&coarse);
    // The same physical shifts on the fine grid are twice as many cells.
    let shifts_fine: Vec<i64> = shifts_coarse.iter().map(|c| 2 * c).collect();

    let f_coarse = besov_counterexample(alpha, &coarse)?;
    let f_fine = besov_counterexample(alpha, &fine)?;

    let b_coarse = besov_sup_with_shifts(&f_coarse, alpha, &shifts_coarse)?;
    let b_fine = besov_sup_with_shifts(&f_fine, alpha, &shifts_fine)?;
    let besov_change = (b_fine - b_coarse).abs() / b_coarse;

    let q = 2.0 / (2.0 - alpha);
    let lq_coarse = lp_norm(&f_coarse, q)?;
    let lq_fine = lp_norm(&f_fine, q)?;
    let growth = (lq_fine - lq_coarse) / lq_coarse;

    Ok(vec![
        CheckResult::new(
            format!("besov_stable_a{alpha}"),
            besov_change,
            0.10,
            Verdict::from_bool(besov_change <= 0.10),
            "translation seminorm stable under grid refinement",
        ),
        CheckResult::new(
            format!("lq_diverges_a{alpha}"),
            growth,
            0.20,
            Verdict::from_bool(growth > 0.20),
            "critical Lebesgue norm keeps growing under refinement",
        ),
    ])
}
