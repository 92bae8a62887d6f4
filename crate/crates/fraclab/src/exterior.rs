//! Exact integrals of the radial kernel |x - y|^(-q) over the exterior
//! of the grid box. Sums over node pairs only see the box; these
//! integrals supply the zero-extension contribution outside it, which
//! for slowly decaying kernels carries most of the mass.

use std::f64::consts::PI;

/// Composite Simpson rule on [a, b]; `panels` is rounded up to even.
pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let m = if panels % 2 == 0 { panels } else { panels + 1 };
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// integral over {y1 > d} of |y|^(-q) dy in R^2, d > 0, q > 2.
fn half_plane(d: f64, q: f64) -> f64 {
    // inner integral over y2 gives B(q) u^(1-q) with
    // B(q) = int (1+t^2)^(-q/2) dt = sqrt(pi) Gamma((q-1)/2) / Gamma(q/2).
    let b = PI.sqrt() * crate::constants::gamma_fn((q - 1.0) / 2.0).unwrap()
        / crate::constants::gamma_fn(q / 2.0).unwrap();
    b * d.powf(2.0 - q) / (q - 2.0)
}

/// integral over {u1 > a, u2 > b} of |u|^(-q) du in R^2, a,b > 0, q > 2.
fn corner(a: f64, b: f64, q: f64) -> f64 {
    // Polar form: int_0^{pi/2} r_min(theta)^(2-q) / (q-2) dtheta with
    // r_min = max(a/cos, b/sin); split at the switch angle.
    let split = b.atan2(a);
    let f1 = |theta: f64| (b / theta.sin().max(1e-300)).powf(2.0 - q);
    let f2 = |theta: f64| (a / theta.cos().max(1e-300)).powf(2.0 - q);
    (simpson(f1, 0.0, split, 128) + simpson(f2, split, PI / 2.0, 128)) / (q - 2.0)
}

/// integral over R^n minus the box [-L, L]^n of |x - y|^(-q) dy, for a
/// point x strictly inside the box and q > n.
pub fn exterior_integral(n: usize, half_width: f64, x: &[f64], q: f64) -> f64 {
    let l = half_width;
    match n {
        1 => {
            let dp = l - x[0];
            let dm = l + x[0];
            (dp.powf(1.0 - q) + dm.powf(1.0 - q)) / (q - 1.0)
        }
        2 => {
            let d = [l - x[0], l + x[0], l - x[1], l + x[1]];
            let hp: f64 = d.iter().map(|&di| half_plane(di, q)).sum();
            let cw = corner(d[0], d[2], q)
                + corner(d[0], d[3], q)
                + corner(d[1], d[2], q)
                + corner(d[1], d[3], q);
            hp - cw
        }
        _ => unreachable!("exterior_integral supports n in {{1,2}}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_matches_closed_form() {
        // q = 1.5, L = 2, x = 0.5: ((1.5)^-0.5 + (2.5)^-0.5) / 0.5
        let v = exterior_integral(1, 2.0, &[0.5], 1.5);
        let expect = ((1.5f64).powf(-0.5) + (2.5f64).powf(-0.5)) / 0.5;
        assert!((v - expect).abs() < 1e-14);
    }

    #[test]
    fn centered_square_matches_brute_force() {
        // Brute-force the 2D exterior integral over a disk window, with the
        // exact radially symmetric remainder beyond it.
        let q = 2.5;
        let l = 1.0;
        let exact = exterior_integral(2, l, &[0.0, 0.0], q);
        let mut brute = 0.0;
        let step = 0.02f64;
        let far = 60.0f64;
        let mut y1 = -far + step / 2.0;
        while y1 < far {
            let mut y2 = -far + step / 2.0;
            while y2 < far {
                let r2 = y1 * y1 + y2 * y2;
                if (y1.abs() > l || y2.abs() > l) && r2 <= far * far {
                    brute += r2.powf(-q / 2.0) * step * step;
                }
                y2 += step;
            }
            y1 += step;
        }
        let tail = 2.0 * PI * far.powf(2.0 - q) / (q - 2.0);
        assert!(
            (exact - brute - tail).abs() / exact < 3e-3,
            "exact {exact} vs brute {}",
            brute + tail
        );
    }

    #[test]
    fn corner_matches_brute_force() {
        let q = 2.5;
        let cw = corner(1.0, 1.0, q);
        let mut brute = 0.0;
        let step = 0.005f64;
        let far = 200.0f64;
        let mut u1 = 1.0 + step / 2.0;
        while u1 < far {
            let mut u2 = 1.0 + step / 2.0;
            while u2 < far {
                brute += (u1 * u1 + u2 * u2).powf(-q / 2.0) * step * step;
                u2 += step;
            }
            u1 += step;
        }
        // Window remainder: two strips plus their overlap, leading order.
        let b_half = PI.sqrt() * crate::constants::gamma_fn((q - 1.0) / 2.0).unwrap()
            / crate::constants::gamma_fn(q / 2.0).unwrap()
            / 2.0;
        let strips = 2.0 * b_half * far.powf(2.0 - q) / (q - 2.0) - corner(far, far, q);
        assert!(
            (cw - brute - strips).abs() / cw < 2e-2,
            "corner {cw} vs brute {}",
            brute + strips
        );
    }

    #[test]
    fn off_center_larger_towards_near_wall() {
        let q = 2.7;
        let center = exterior_integral(2, 2.0, &[0.0, 0.0], q);
        let near = exterior_integral(2, 2.0, &[1.5, 0.0], q);
        assert!(near > center);
    }
}
