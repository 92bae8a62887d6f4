//! Normalization constants for the fractional operators.
//!
//! Everything here reduces to evaluations of the Euler Gamma function:
//! the fractional-gradient constant `mu`, the fractional-Laplacian
//! constant `nu`, the Riesz transform and Riesz potential prefactors,
//! and the unit-ball volume `omega`.

use crate::error::{FraclabError, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;

// Lanczos coefficients (g = 7, 9 terms), as tabulated in the GNU
// Scientific Library.
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma for any non-pole real argument. Negative arguments go through
/// the reflection formula, which `nu` needs for Gamma(-alpha/2).
fn gamma_any(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        PI / ((PI * x).sin() * gamma_any(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Euler Gamma function on the positive half-line.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(FraclabError::domain(format!(
            "gamma_fn requires x > 0, got {x}"
        )));
    }
    Ok(gamma_any(x))
}

fn check_dim(n: usize) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(FraclabError::domain(format!(
            "dimension n = {n} unsupported (only 1 and 2)"
        )))
    }
}

/// Volume of the unit ball, pi^(n/2) / Gamma((n+2)/2).
pub fn omega(n: usize) -> Result<f64> {
    check_dim(n)?;
    Ok(PI.powf(n as f64 / 2.0) / gamma_any((n as f64 + 2.0) / 2.0))
}

/// Fractional-gradient constant
/// mu_{n,alpha} = 2^alpha pi^(-n/2) Gamma((n+alpha+1)/2) / Gamma((1-alpha)/2),
/// extended to alpha = 1 by continuity of 1/Gamma (mu_{n,1} = 0).
pub fn mu(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(FraclabError::domain(format!(
            "mu requires alpha in [0,1], got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    Ok(2f64.powf(alpha) * PI.powf(-nf / 2.0) * gamma_any((nf + alpha + 1.0) / 2.0)
        / gamma_any((1.0 - alpha) / 2.0))
}

/// Fractional-Laplacian constant
/// nu_{n,alpha} = 2^alpha pi^(-n/2) Gamma((n+alpha)/2) / Gamma(-alpha/2).
/// Negative on (0,1) since Gamma is negative on (-1,0).
pub fn nu(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FraclabError::domain(format!(
            "nu requires alpha in (0,1), got {alpha}"
        )));
    }
    let nf = n as f64;
    Ok(2f64.powf(alpha) * PI.powf(-nf / 2.0) * gamma_any((nf + alpha) / 2.0)
        / gamma_any(-alpha / 2.0))
}

/// mu_{n,alpha} * omega_n / (1 - alpha); tends to 1 as alpha -> 1^-.
pub fn mu_near_one_ratio(n: usize, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FraclabError::domain(format!(
            "mu_near_one_ratio requires alpha in (0,1), got {alpha}"
        )));
    }
    Ok(mu(n, alpha)? * omega(n)? / (1.0 - alpha))
}

/// Riesz transform prefactor pi^(-(n+1)/2) Gamma((n+1)/2).
pub fn riesz_norm_const(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    Ok(PI.powf(-(nf + 1.0) / 2.0) * gamma_any((nf + 1.0) / 2.0))
}

/// Riesz potential prefactor 2^(-alpha) pi^(-n/2) Gamma((n-alpha)/2) / Gamma(alpha/2),
/// for alpha in (0, n).
pub fn riesz_potential_const(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha > 0.0 && alpha < n as f64) {
        return Err(FraclabError::domain(format!(
            "riesz_potential_const requires alpha in (0,{n}), got {alpha}"
        )));
    }
    let nf = n as f64;
    Ok(2f64.powf(-alpha) * PI.powf(-nf / 2.0) * gamma_any((nf - alpha) / 2.0)
        / gamma_any(alpha / 2.0))
}

/// Cached per-dimension constants.
#[derive(Debug, Clone, Copy)]
pub struct ConstantsTable {
    pub n: usize,
    pub omega: f64,
    pub mu_zero: f64,
    pub riesz_norm_const: f64,
}

impl ConstantsTable {
    pub fn new(n: usize) -> Result<Self> {
        Ok(ConstantsTable {
            n,
            omega: omega(n)?,
            mu_zero: mu(n, 0.0)?,
            riesz_norm_const: riesz_norm_const(n)?,
        })
    }

    /// n * omega_n * mu_{n,0}, the constant in the rescaled-energy limit.
    pub fn energy_limit_factor(&self) -> f64 {
        self.n as f64 * self.omega * self.mu_zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.7724538509055160273;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-13);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-13);
        // Gamma(1/2) = sqrt(pi), cross-checked against an independently
        // computed square root.
        assert!(rel(gamma_fn(0.5).unwrap(), SQRT_PI) < 1e-13);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-13);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.3).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence_on_grid() {
        // |Gamma(x+1) - x Gamma(x)| / Gamma(x+1) <= 1e-12 on x in {0.1,...,10}.
        let mut x = 0.1;
        while x <= 10.0 + 1e-9 {
            let g = gamma_fn(x).unwrap();
            let g1 = gamma_fn(x + 1.0).unwrap();
            assert!(
                (g1 - x * g).abs() / g1 <= 1e-12,
                "recurrence failed at x = {x}"
            );
            x += 0.1;
        }
    }

    #[test]
    fn omega_values() {
        assert!(rel(omega(1).unwrap(), 2.0) < 1e-14);
        assert!(rel(omega(2).unwrap(), PI) < 1e-14);
        assert!(omega(3).is_err());
        assert!(omega(0).is_err());
    }

    #[test]
    fn mu_at_zero() {
        // mu_{1,0} = 1/pi: Gamma(1)/Gamma(1/2) * pi^{-1/2} = 1/pi.
        assert!(rel(mu(1, 0.0).unwrap(), 1.0 / PI) < 1e-13);
        // mu_{2,0} = Gamma(3/2)/Gamma(1/2) / pi = 1/(2 pi).
        assert!(rel(mu(2, 0.0).unwrap(), 1.0 / (2.0 * PI)) < 1e-13);
    }

    #[test]
    fn mu_equals_riesz_prefactor_at_zero() {
        for n in [1, 2] {
            let lhs = mu(n, 0.0).unwrap();
            let rhs = riesz_norm_const(n).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "n = {n}: {lhs} vs {rhs}");
            assert!(rel(lhs * PI.powf((n as f64 + 1.0) / 2.0), gamma_fn((n as f64 + 1.0) / 2.0).unwrap()) < 1e-12);
        }
        assert!((mu(1, 0.0).unwrap() * PI - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mu_at_one_and_domain() {
        assert_eq!(mu(1, 1.0).unwrap(), 0.0);
        assert_eq!(mu(2, 1.0).unwrap(), 0.0);
        assert!(mu(1, -0.1).is_err());
        assert!(mu(1, 1.1).is_err());
    }

    #[test]
    fn mu_is_continuous_in_alpha() {
        for n in [1, 2] {
            for &alpha in &[0.0, 0.3, 0.7, 0.95] {
                let base = mu(n, alpha).unwrap();
                let mut prev = (mu(n, alpha + 0.04).unwrap() - base).abs();
                for &delta in &[0.02, 0.01, 0.005] {
                    let d = (mu(n, alpha + delta).unwrap() - base).abs();
                    assert!(d <= prev + 1e-15);
                    prev = d;
                }
            }
        }
    }

    #[test]
    fn nu_sign_and_domain() {
        assert!(nu(1, 0.5).unwrap() < 0.0);
        assert!(nu(2, 0.5).unwrap() < 0.0);
        assert!(nu(1, 1.0).is_err());
        assert!(nu(1, 0.0).is_err());
    }

    #[test]
    fn nu_ratio_small_alpha() {
        // nu_{n,alpha}/alpha -> -1/(n omega_n) as alpha -> 0+.
        for n in [1usize, 2] {
            let alpha = 1e-4;
            let ratio = nu(n, alpha).unwrap() / alpha;
            let limit = -1.0 / (n as f64 * omega(n).unwrap());
            assert!(
                rel(ratio, limit) < 1e-3,
                "n = {n}: ratio {ratio} vs limit {limit}"
            );
        }
    }

    #[test]
    fn mu_near_one_ratio_approaches_one() {
        let r999 = mu_near_one_ratio(1, 0.999).unwrap();
        assert!((r999 - 1.0).abs() < 0.01);
        let r9999 = mu_near_one_ratio(1, 0.9999).unwrap();
        assert!((r9999 - 1.0).abs() < (r999 - 1.0).abs());
        let mid = mu_near_one_ratio(2, 0.5).unwrap();
        assert!(mid.is_finite() && mid > 0.0);
    }

    #[test]
    fn constants_table() {
        let table = ConstantsTable::new(1).unwrap();
        assert!(rel(table.energy_limit_factor(), 2.0 / PI) < 1e-13);
        let table2 = ConstantsTable::new(2).unwrap();
        assert!(rel(table2.energy_limit_factor(), 1.0) < 1e-13);
        assert!(ConstantsTable::new(4).is_err());
    }
}
