//! μ-law envelope compander: logarithmic compression of sample magnitudes
//! before the channel, exact expansion after.
//!
//! Compression enlarges small magnitudes while the frame peak V maps to
//! itself, so PAPR drops purely by raising the average power. The price is
//! paid at the receiver: expansion amplifies noise on small samples, which
//! is the BER degradation the trade-off experiments measure. The reference
//! V is the peak magnitude of the uncompanded frame and travels as frame
//! metadata (ideal side information).

use num_complex::Complex64;

/// Compress magnitudes: r → V·ln(1 + μr/V)/ln(1 + μ), phase preserved.
///
/// Returns the companded samples and the reference V (the input peak).
/// μ = 0 is the identity; an all-zero frame has no usable peak, so the
/// identity is applied with V = 1 recorded.
pub fn compress(samples: &[Complex64], mu: f64) -> (Vec<Complex64>, f64) {
    debug_assert!(mu >= 0.0);
    let v = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    if mu == 0.0 || v == 0.0 {
        return (samples.to_vec(), if v == 0.0 { 1.0 } else { v });
    }
    let out = samples
        .iter()
        .map(|&s| {
            let r = s.norm();
            if r == 0.0 {
                s
            } else {
                s * (compress_mag(r, mu, v) / r)
            }
        })
        .collect();
    (out, v)
}

/// Expand magnitudes: r' → (V/μ)·(e^{r'·ln(1+μ)/V} − 1), phase preserved.
///
/// Exact algebraic inverse of [`compress`] for the same (μ, V); total over
/// all magnitudes, so received values pushed above V by noise expand
/// smoothly without saturation.
pub fn expand(samples: &[Complex64], mu: f64, v: f64) -> Vec<Complex64> {
    debug_assert!(mu >= 0.0 && v > 0.0);
    if mu == 0.0 {
        return samples.to_vec();
    }
    samples
        .iter()
        .map(|&s| {
            let r = s.norm();
            if r == 0.0 {
                s
            } else {
                s * (expand_mag(r, mu, v) / r)
            }
        })
        .collect()
}

/// Scalar compression law on a magnitude.
pub fn compress_mag(r: f64, mu: f64, v: f64) -> f64 {
    v * (mu * r / v).ln_1p() / mu.ln_1p()
}

/// Scalar expansion law on a magnitude.
pub fn expand_mag(r: f64, mu: f64, v: f64) -> f64 {
    v / mu * (r * mu.ln_1p() / v).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_frame(seed: u64, n: usize) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn mu_zero_is_identity() {
        let frame = random_frame(1, 64);
        let (out, _) = compress(&frame, 0.0);
        assert_eq!(out, frame);
        assert_eq!(expand(&frame, 0.0, 1.0), frame);
    }

    #[test]
    fn peak_is_fixed_point() {
        let frame = random_frame(2, 64);
        let (out, v) = compress(&frame, 1.0);
        let peak_in = frame.iter().map(|s| s.norm()).fold(0.0, f64::max);
        let peak_out = out.iter().map(|s| s.norm()).fold(0.0, f64::max);
        assert!((peak_in - v).abs() < 1e-15);
        assert!((peak_out - v).abs() < 1e-12);
    }

    #[test]
    fn known_value_mu_255_half_peak() {
        // r = V/2, μ = 255 → V·ln(128.5)/ln(256) ≈ 0.8757·V
        let r = compress_mag(0.5, 255.0, 1.0);
        let want = 128.5f64.ln() / 256f64.ln();
        assert!((r - want).abs() < 1e-15, "got {r}, want {want}");
        assert!((want - 0.8757).abs() < 1e-4);
    }

    #[test]
    fn round_trip_exact_across_mu() {
        let frame = random_frame(3, 256);
        for mu in [1.0, 4.0, 10.0, 100.0] {
            let (comp, v) = compress(&frame, mu);
            let back = expand(&comp, mu, v);
            for (a, b) in frame.iter().zip(&back) {
                let rel = (a - b).norm() / a.norm().max(1e-30);
                assert!(rel < 1e-12, "mu={mu} rel err {rel}");
            }
        }
    }

    #[test]
    fn all_zero_frame_records_unit_reference() {
        let frame = vec![Complex64::ZERO; 16];
        let (out, v) = compress(&frame, 10.0);
        assert_eq!(out, frame);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn compression_is_strictly_monotone_in_magnitude() {
        for mu in [1.0, 4.0, 10.0, 100.0, 255.0] {
            let mut prev = 0.0;
            for i in 1..=1000 {
                let r = i as f64 / 1000.0;
                let c = compress_mag(r, mu, 1.0);
                assert!(c > prev, "not increasing at r={r}, mu={mu}");
                prev = c;
            }
        }
    }

    #[test]
    fn small_magnitudes_amplified_peak_preserved() {
        for mu in [1.0, 10.0, 100.0] {
            for i in 1..100 {
                let r = i as f64 / 100.0;
                let c = compress_mag(r, mu, 1.0);
                assert!(c >= r - 1e-15, "compression shrank r={r} at mu={mu}");
            }
            assert!((compress_mag(1.0, mu, 1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn papr_never_increases_under_compression() {
        for seed in 0..20 {
            let frame = random_frame(seed, 160);
            let (comp, _) = compress(&frame, 4.0);
            let papr = |f: &[Complex64]| {
                let peak = f.iter().map(|s| s.norm_sqr()).fold(0.0, f64::max);
                let mean = f.iter().map(|s| s.norm_sqr()).sum::<f64>() / f.len() as f64;
                peak / mean
            };
            assert!(papr(&comp) <= papr(&frame) + 1e-12);
        }
    }

    #[test]
    fn expansion_of_compressed_impulse_restores_it() {
        let mut frame = vec![Complex64::ZERO; 8];
        frame[3] = Complex64::new(0.0, 0.7);
        let (comp, v) = compress(&frame, 100.0);
        let back = expand(&comp, 100.0, v);
        for (a, b) in frame.iter().zip(&back) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
