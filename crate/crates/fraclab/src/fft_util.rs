//! Shared complex-FFT plumbing on top of rustfft, with the index/frequency
//! conventions used throughout the crate: row-major data, signed bin
//! frequency xi_m = m/(N h) for m in [-N/2, N/2).

use num_complex::Complex;
use rustfft::FftPlanner;
use std::sync::Mutex;
use std::sync::OnceLock;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn fft_1d_batch(data: &mut [Complex<f64>], len: usize, inverse: bool) {
    let fft = {
        let mut p = planner().lock().unwrap();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    };
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    for chunk in data.chunks_exact_mut(len) {
        fft.process_with_scratch(chunk, &mut scratch);
    }
}

fn transpose(data: &[Complex<f64>], rows: usize, cols: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::default(); data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

/// In-place n-dimensional FFT (n = 1 or 2, square shape for n = 2).
/// The inverse transform applies 1/len normalization per axis so that
/// inverse(forward(x)) == x.
pub fn fft_nd(data: &mut Vec<Complex<f64>>, n: usize, len_per_axis: usize, inverse: bool) {
    assert_eq!(data.len(), len_per_axis.pow(n as u32));
    match n {
        1 => fft_1d_batch(data, len_per_axis, inverse),
        2 => {
            fft_1d_batch(data, len_per_axis, inverse);
            let mut t = transpose(data, len_per_axis, len_per_axis);
            fft_1d_batch(&mut t, len_per_axis, inverse);
            *data = transpose(&t, len_per_axis, len_per_axis);
        }
        _ => unreachable!("fft_nd supports n in {{1,2}}"),
    }
    if inverse {
        let scale = 1.0 / (len_per_axis as f64).powi(n as i32);
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Signed bin index for FFT output position m of an axis of length len.
pub fn signed_freq_index(m: usize, len: usize) -> i64 {
    if m < len / 2 {
        m as i64
    } else {
        m as i64 - len as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_1d() {
        let n = 64;
        let orig: Vec<Complex<f64>> = (0..n)
            .map(|k| Complex::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        fft_nd(&mut data, 1, n, false);
        fft_nd(&mut data, 1, n, true);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn roundtrip_2d() {
        let n = 16;
        let orig: Vec<Complex<f64>> = (0..n * n)
            .map(|k| Complex::new((k as f64 * 0.21).sin(), 0.0))
            .collect();
        let mut data = orig.clone();
        fft_nd(&mut data, 2, n, false);
        fft_nd(&mut data, 2, n, true);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn signed_freqs() {
        assert_eq!(signed_freq_index(0, 8), 0);
        assert_eq!(signed_freq_index(3, 8), 3);
        assert_eq!(signed_freq_index(4, 8), -4);
        assert_eq!(signed_freq_index(7, 8), -1);
    }
}
