//! Spectral transforms with explicitly fixed scaling conventions.
//!
//! The DFT pair is scaled so that modulation followed by demodulation
//! preserves symbol amplitudes exactly: [`inverse_dft`] carries the 1/M
//! factor and [`forward_dft`] is unscaled. Under this pair
//! `forward_dft(inverse_dft(x)) == x` and Parseval reads
//! `Σ|time|² = (1/M)·Σ|freq|²`. A symmetric √(1/M) split or a factor on both
//! directions would not round-trip to identity, and the hard-decision
//! thresholds downstream assume preserved amplitudes.
//!
//! The cosine pair [`dct2`]/[`idct2`] is the orthonormal DCT-II and its
//! transpose, used as the half-spacing one-dimensional modulation basis:
//! real symbols on cosine carriers stay exactly orthogonal, which a complex
//! exponential bank at half spacing does not under real correlation.
//!
//! All power-of-two transforms run on a radix-2 decimation-in-time kernel;
//! [`dft_direct`] is the O(M²) defining sum for the odd-length interpolation
//! paths (PAPR oversampling), not for modem use.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::{Error, Result};

fn ensure_pow2(len: usize) -> Result<()> {
    if len >= 2 && len.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(len))
    }
}

/// In-place radix-2 decimation-in-time kernel, no scaling.
/// `sign` is −1 for the forward exponent convention, +1 for the inverse.
fn fft_radix2(x: &mut [Complex64], sign: f64) {
    let m = x.len();
    debug_assert!(m >= 2 && m.is_power_of_two());
    let bits = usize::BITS - m.trailing_zeros();
    for i in 0..m {
        let j = i.reverse_bits() >> bits;
        if j > i {
            x.swap(i, j);
        }
    }
    // Twiddles from_polar per index: accurate enough for the 1e-12
    // round-trip contract up to length 4096 (recurrences are not).
    let w: Vec<Complex64> = (0..m / 2)
        .map(|k| Complex64::from_polar(1.0, sign * TAU * k as f64 / m as f64))
        .collect();
    let mut len = 2;
    while len <= m {
        let stride = m / len;
        for block in (0..m).step_by(len) {
            for k in 0..len / 2 {
                let lo = block + k;
                let hi = lo + len / 2;
                let t = x[hi] * w[k * stride];
                x[hi] = x[lo] - t;
                x[lo] += t;
            }
        }
        len <<= 1;
    }
}

/// Forward DFT, unit scaling: `Y[k] = Σ_m time[m]·e^{−j2πkm/M}`.
pub fn forward_dft(time: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_pow2(time.len())?;
    let mut y = time.to_vec();
    fft_radix2(&mut y, -1.0);
    Ok(y)
}

/// Inverse DFT with the 1/M factor: `x[k] = (1/M)·Σ_m freq[m]·e^{j2πkm/M}`.
pub fn inverse_dft(freq: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_pow2(freq.len())?;
    let mut x = freq.to_vec();
    fft_radix2(&mut x, 1.0);
    let scale = 1.0 / x.len() as f64;
    for v in &mut x {
        *v *= scale;
    }
    Ok(x)
}

/// Orthonormal DCT-II: `X[k] = s_k·Σ_n x[n]·cos(πk(2n+1)/(2M))` with
/// `s_0 = √(1/M)`, `s_k = √(2/M)`. Computed through one M-point FFT on the
/// even/odd-reordered input.
pub fn dct2(x: &[f64]) -> Result<Vec<f64>> {
    let m = x.len();
    ensure_pow2(m)?;
    // v = [x0, x2, x4, …, x5, x3, x1]
    let mut v = vec![Complex64::ZERO; m];
    for n in 0..m / 2 {
        v[n] = Complex64::new(x[2 * n], 0.0);
        v[m - 1 - n] = Complex64::new(x[2 * n + 1], 0.0);
    }
    fft_radix2(&mut v, -1.0);
    let s0 = (1.0 / m as f64).sqrt();
    let sk = (2.0 / m as f64).sqrt();
    Ok((0..m)
        .map(|k| {
            let rot = Complex64::from_polar(1.0, -PI * k as f64 / (2.0 * m as f64));
            let c = (rot * v[k]).re;
            c * if k == 0 { s0 } else { sk }
        })
        .collect())
}

/// Inverse of [`dct2`] (the orthonormal DCT-III), via the mirrored FFT route.
pub fn idct2(x: &[f64]) -> Result<Vec<f64>> {
    let m = x.len();
    ensure_pow2(m)?;
    let s0 = (1.0 / m as f64).sqrt();
    let sk = (2.0 / m as f64).sqrt();
    // Undo the orthonormal scale, rebuild the FFT spectrum of the reordered
    // sequence: V[k] = e^{jπk/(2M)}·(C[k] − j·C[M−k]), V[0] = C[0].
    let c: Vec<f64> = (0..m)
        .map(|k| x[k] / if k == 0 { s0 } else { sk })
        .collect();
    let mut v = vec![Complex64::ZERO; m];
    v[0] = Complex64::new(c[0], 0.0);
    for k in 1..m {
        let rot = Complex64::from_polar(1.0, PI * k as f64 / (2.0 * m as f64));
        v[k] = rot * Complex64::new(c[k], -c[m - k]);
    }
    fft_radix2(&mut v, 1.0);
    let scale = 1.0 / m as f64;
    let mut out = vec![0.0; m];
    for n in 0..m / 2 {
        out[2 * n] = v[n].re * scale;
        out[2 * n + 1] = v[m - 1 - n].re * scale;
    }
    Ok(out)
}

/// Defining-sum DFT for arbitrary lengths (O(M²)); `inverse` selects the
/// +j exponent and the 1/M factor, matching the radix-2 pair's conventions.
/// Used by the spectral-interpolation path where frame lengths include the
/// cyclic prefix and are not powers of two.
pub fn dft_direct(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let m = x.len();
    if m == 0 {
        return Vec::new();
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = if inverse { 1.0 / m as f64 } else { 1.0 };
    (0..m)
        .map(|k| {
            let mut acc = Complex64::ZERO;
            for (n, &xn) in x.iter().enumerate() {
                let ang = sign * TAU * (k as f64) * (n as f64) / m as f64;
                acc += xn * Complex64::from_polar(1.0, ang);
            }
            acc * scale
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent O(M²) oracle for the DFT pair, straight from the sums.
    fn naive_dft(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let m = x.len();
        let sign = if inverse { 1.0 } else { -1.0 };
        let scale = if inverse { 1.0 / m as f64 } else { 1.0 };
        (0..m)
            .map(|k| {
                let mut acc = Complex64::ZERO;
                for (n, &xn) in x.iter().enumerate() {
                    let ang = sign * TAU * (k * n) as f64 / m as f64;
                    acc += xn * Complex64::from_polar(1.0, ang);
                }
                acc * scale
            })
            .collect()
    }

    /// Independent oracle for the orthonormal DCT-II defining sum.
    fn naive_dct2(x: &[f64]) -> Vec<f64> {
        let m = x.len();
        (0..m)
            .map(|k| {
                let s = if k == 0 {
                    (1.0 / m as f64).sqrt()
                } else {
                    (2.0 / m as f64).sqrt()
                };
                s * x
                    .iter()
                    .enumerate()
                    .map(|(n, &xn)| {
                        xn * (PI * k as f64 * (2 * n + 1) as f64 / (2.0 * m as f64)).cos()
                    })
                    .sum::<f64>()
            })
            .collect()
    }

    fn random_complex(rng: &mut impl Rng, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn inverse_dft_length_two_by_hand() {
        let x = inverse_dft(&[Complex64::new(1.0, 0.0), Complex64::ZERO]).unwrap();
        assert!((x[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((x[1] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn forward_dft_length_two_by_hand() {
        let y = forward_dft(&[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)]).unwrap();
        assert!((y[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(y[1].norm() < 1e-15);
    }

    #[test]
    fn zero_input_stays_zero() {
        let x = inverse_dft(&[Complex64::ZERO; 4]).unwrap();
        assert!(x.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn constant_vector_is_dc_only() {
        let c = Complex64::new(0.7, -0.3);
        let y = forward_dft(&[c; 8]).unwrap();
        assert!((y[0] - c * 8.0).norm() < 1e-14);
        for v in &y[1..] {
            assert!(v.norm() < 1e-13, "non-DC bin leaked: {v}");
        }
    }

    #[test]
    fn round_trip_identity_all_pow2_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut m = 2;
        while m <= 4096 {
            let x = random_complex(&mut rng, m);
            let back = inverse_dft(&forward_dft(&x).unwrap()).unwrap();
            let err = max_err(&x, &back);
            assert!(err < 1e-12, "round trip error {err} at length {m}");
            m *= 2;
        }
    }

    #[test]
    fn parseval_under_declared_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &m in &[16usize, 128, 1024] {
            let x = random_complex(&mut rng, m);
            let y = forward_dft(&x).unwrap();
            let te: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            let fe: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>() / m as f64;
            assert!((te - fe).abs() / te < 1e-12, "Parseval broke at {m}");
        }
    }

    #[test]
    fn linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 64;
        let x = random_complex(&mut rng, m);
        let y = random_complex(&mut rng, m);
        let (a, b) = (Complex64::new(1.3, -0.2), Complex64::new(-0.4, 2.1));
        let combo: Vec<Complex64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let lhs = forward_dft(&combo).unwrap();
        let fx = forward_dft(&x).unwrap();
        let fy = forward_dft(&y).unwrap();
        let rhs: Vec<Complex64> = fx.iter().zip(&fy).map(|(u, v)| a * u + b * v).collect();
        assert!(max_err(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn matches_naive_dft_small_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut m = 2;
        while m <= 64 {
            let x = random_complex(&mut rng, m);
            assert!(max_err(&forward_dft(&x).unwrap(), &naive_dft(&x, false)) < 1e-10);
            assert!(max_err(&inverse_dft(&x).unwrap(), &naive_dft(&x, true)) < 1e-10);
            m *= 2;
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(
            forward_dft(&[Complex64::ZERO; 3]),
            Err(Error::NotPowerOfTwo(3))
        ));
        assert!(matches!(
            inverse_dft(&[Complex64::ZERO; 1]),
            Err(Error::NotPowerOfTwo(1))
        ));
        assert!(dct2(&[0.0; 12]).is_err());
    }

    #[test]
    fn dct_zero_vector() {
        assert!(dct2(&[0.0; 16]).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dct_basis_vector_is_first_column_unit_norm() {
        let mut e0 = vec![0.0; 16];
        e0[0] = 1.0;
        let x = dct2(&e0).unwrap();
        let oracle = naive_dct2(&e0);
        let norm: f64 = x.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12, "column norm {norm}");
        for (a, b) in x.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dct_matches_naive_small_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut m = 2;
        while m <= 64 {
            let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let fast = dct2(&x).unwrap();
            let slow = naive_dct2(&x);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-10, "dct mismatch at length {m}");
            }
            m *= 2;
        }
    }

    #[test]
    fn dct_round_trip_all_pow2_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut m = 2;
        while m <= 4096 {
            let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let back = idct2(&dct2(&x).unwrap()).unwrap();
            let err = x
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "dct round trip error {err} at length {m}");
            m *= 2;
        }
    }

    #[test]
    fn dct_preserves_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f64> = (0..128).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y = dct2(&x).unwrap();
        let ex: f64 = x.iter().map(|v| v * v).sum();
        let ey: f64 = y.iter().map(|v| v * v).sum();
        assert!((ex - ey).abs() / ex < 1e-12);
    }

    #[test]
    fn dft_direct_agrees_with_radix2_and_round_trips_odd_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_complex(&mut rng, 32);
        assert!(max_err(&dft_direct(&x, false), &forward_dft(&x).unwrap()) < 1e-10);
        let odd = random_complex(&mut rng, 160);
        let back = dft_direct(&dft_direct(&odd, false), true);
        assert!(max_err(&odd, &back) < 1e-9);
    }
}
