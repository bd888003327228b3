//! Measurement machinery: PAPR and its CCDF, exact BER counting with
//! confidence intervals, Welch PSD estimation with occupied-bandwidth
//! extraction, the theoretical BPSK error-rate oracle, and closed-form
//! operation counts for the scheme complexity table.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::transforms;
use crate::{Error, Result};

/// Peak-to-average power ratio of a frame in dB:
/// `10·log10(max|y|² / mean|y|²)` over the full frame, CP included.
///
/// `oversample = 1` evaluates the raw samples (the convention of the
/// reference measurement loops); larger factors interpolate by spectral
/// zero-padding before taking the peak, which preserves the mean power
/// exactly and can only raise the peak.
pub fn papr_db(samples: &[Complex64], oversample: usize) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidConfig("papr of an empty frame".into()));
    }
    if oversample == 0 {
        return Err(Error::NonPositive {
            name: "oversample",
            value: 0.0,
        });
    }
    let interpolated;
    let frame: &[Complex64] = if oversample == 1 {
        samples
    } else {
        let m = samples.len();
        let spec = transforms::dft_direct(samples, false);
        let big = m * oversample;
        let half = m.div_ceil(2);
        let mut padded = vec![Complex64::ZERO; big];
        padded[..half].copy_from_slice(&spec[..half]);
        padded[big - (m - half)..].copy_from_slice(&spec[half..]);
        interpolated = transforms::dft_direct(&padded, true)
            .into_iter()
            .map(|s| s * oversample as f64)
            .collect::<Vec<_>>();
        &interpolated
    };
    let peak = frame.iter().map(|s| s.norm_sqr()).fold(0.0, f64::max);
    let mean = frame.iter().map(|s| s.norm_sqr()).sum::<f64>() / frame.len() as f64;
    Ok(10.0 * (peak / mean).log10())
}

/// Empirical CCDF `Pr(PAPR > γ)` on a 0.1 dB threshold grid spanning the
/// sample range. Returns (threshold_db, exceedance) pairs.
pub fn ccdf(papr_samples: &[f64]) -> Vec<(f64, f64)> {
    if papr_samples.is_empty() {
        return Vec::new();
    }
    let mut sorted = papr_samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let lo = (sorted[0] * 10.0).floor() as i64;
    let hi = (sorted[sorted.len() - 1] * 10.0).ceil() as i64;
    (lo..=hi)
        .map(|g| {
            let gamma = g as f64 / 10.0;
            let above = sorted.len() - sorted.partition_point(|&v| v <= gamma);
            (gamma, above as f64 / n)
        })
        .collect()
}

/// Threshold at which the CCDF crosses probability `p`: the empirical
/// `1 − p` quantile with linear interpolation between order statistics.
/// Needs on the order of `1/p` samples to be meaningful.
pub fn ccdf_crossing(papr_samples: &[f64], p: f64) -> Option<f64> {
    if papr_samples.is_empty() || !(p > 0.0 && p < 1.0) {
        return None;
    }
    let mut sorted = papr_samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = (sorted.len() - 1) as f64 * (1.0 - p);
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    Some(if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    })
}

/// Exact error count between two bit streams, with the measured rate and a
/// Wilson 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerCount {
    pub errors: u64,
    pub total: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn ber_count(sent: &[u8], received: &[u8]) -> Result<BerCount> {
    if sent.len() != received.len() {
        return Err(Error::LengthMismatch(sent.len(), received.len()));
    }
    let errors = sent.iter().zip(received).filter(|(a, b)| a != b).count() as u64;
    let total = sent.len() as u64;
    let (ci_low, ci_high) = wilson_interval(errors, total, 1.959963984540054);
    Ok(BerCount {
        errors,
        total,
        ber: if total == 0 {
            0.0
        } else {
            errors as f64 / total as f64
        },
        ci_low,
        ci_high,
    })
}

/// Wilson score interval for a binomial proportion at critical value `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) + z2 / (4.0 * n)) / n).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// One-sigma binomial standard error of a proportion `p` over `n` trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Theoretical BPSK bit error probability over AWGN:
/// `Q(√(2·Eb/N0)) = erfc(√(Eb/N0))/2`.
pub fn theoretical_ber_bpsk(ebn0_db: f64) -> f64 {
    let gamma = 10f64.powf(ebn0_db / 10.0);
    0.5 * libm::erfc(gamma.sqrt())
}

/// Averaged-periodogram spectral estimate on a uniform, zero-centered
/// frequency grid.
#[derive(Debug, Clone)]
pub struct PsdEstimate {
    pub freqs: Vec<f64>,
    pub power_db: Vec<f64>,
    pub resolution_bw: f64,
}

impl PsdEstimate {
    /// Linear power per bin (density × resolution bandwidth integrates to
    /// total power).
    pub fn linear_power(&self) -> Vec<f64> {
        self.power_db
            .iter()
            .map(|&db| 10f64.powf(db / 10.0))
            .collect()
    }
}

/// Welch PSD estimate: Hann-windowed segments of power-of-two length with
/// the given overlap, periodograms averaged, density normalized so that
/// `Σ power · resolution_bw` matches the time-domain mean power within 1%.
pub fn psd_welch(
    samples: &[Complex64],
    f_s: f64,
    segment_len: usize,
    overlap: usize,
) -> Result<PsdEstimate> {
    if !(segment_len >= 2 && segment_len.is_power_of_two()) {
        return Err(Error::NotPowerOfTwo(segment_len));
    }
    if samples.len() < segment_len {
        return Err(Error::InvalidConfig(format!(
            "{} samples are fewer than one {segment_len}-sample segment",
            samples.len()
        )));
    }
    if overlap >= segment_len {
        return Err(Error::InvalidConfig(format!(
            "overlap {overlap} must be below the segment length {segment_len}"
        )));
    }
    if !(f_s > 0.0) {
        return Err(Error::NonPositive {
            name: "f_s",
            value: f_s,
        });
    }
    let l = segment_len;
    // Periodic Hann window; U = Σw² gives the density normalization.
    let window: Vec<f64> = (0..l)
        .map(|n| 0.5 * (1.0 - (TAU * n as f64 / l as f64).cos()))
        .collect();
    let u: f64 = window.iter().map(|w| w * w).sum();
    let step = l - overlap;
    let mut acc = vec![0.0f64; l];
    let mut nseg = 0usize;
    let mut start = 0;
    while start + l <= samples.len() {
        let seg: Vec<Complex64> = samples[start..start + l]
            .iter()
            .zip(&window)
            .map(|(s, w)| s * *w)
            .collect();
        let spec = transforms::forward_dft(&seg)?;
        for (a, s) in acc.iter_mut().zip(&spec) {
            *a += s.norm_sqr();
        }
        nseg += 1;
        start += step;
    }
    let scale = 1.0 / (nseg as f64 * f_s * u);
    let rbw = f_s / l as f64;
    // fftshift to a zero-centered axis.
    let half = l / 2;
    let mut freqs = Vec::with_capacity(l);
    let mut power_db = Vec::with_capacity(l);
    for i in 0..l {
        let k = (i + half) % l;
        freqs.push((i as f64 - half as f64) * rbw);
        // Density per Hz; bins can be exactly zero for pure tones, floor
        // them rather than emitting -inf dB.
        power_db.push(10.0 * (acc[k] * scale).max(1e-300).log10());
    }
    Ok(PsdEstimate {
        freqs,
        power_db,
        resolution_bw: rbw,
    })
}

/// Width of the smallest centered band containing `fraction` of the total
/// power: bins are taken in order of distance from the spectral centroid
/// until the fraction is reached.
pub fn occupied_bandwidth(psd: &PsdEstimate, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::NonPositive {
            name: "fraction (must be in (0,1))",
            value: fraction,
        });
    }
    let p = psd.linear_power();
    let total: f64 = p.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidConfig("spectrum holds no power".into()));
    }
    let centroid: f64 = psd.freqs.iter().zip(&p).map(|(f, w)| f * w).sum::<f64>() / total;
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        (psd.freqs[a] - centroid)
            .abs()
            .total_cmp(&(psd.freqs[b] - centroid).abs())
    });
    let target = fraction * total;
    let mut cum = 0.0;
    let mut max_dist = 0.0f64;
    for idx in order {
        cum += p[idx];
        max_dist = max_dist.max((psd.freqs[idx] - centroid).abs());
        if cum >= target {
            break;
        }
    }
    Ok(2.0 * max_dist + psd.resolution_bw)
}

/// Rows of the scheme complexity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityRow {
    Ofdm,
    FastOfdm,
    StcOfdm,
    DualStc,
    DualStcMuLaw,
}

impl ComplexityRow {
    pub const ALL: [ComplexityRow; 5] = [
        ComplexityRow::Ofdm,
        ComplexityRow::FastOfdm,
        ComplexityRow::StcOfdm,
        ComplexityRow::DualStc,
        ComplexityRow::DualStcMuLaw,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ComplexityRow::Ofdm => "ofdm",
            ComplexityRow::FastOfdm => "fast_ofdm",
            ComplexityRow::StcOfdm => "stc_ofdm",
            ComplexityRow::DualStc => "dual_stc",
            ComplexityRow::DualStcMuLaw => "dual_stc_mu_law",
        }
    }
}

/// Exact operation counts for one table row at transform size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    pub scheme: &'static str,
    pub n: usize,
    pub multiplications: u64,
    pub additions: u64,
}

/// Closed-form complexity counts per scheme:
///
/// * OFDM, Fast-OFDM, dual-STC: mult `2N·log2 N − 2N`, add `3N·log2 N − N`
/// * STC-OFDM (half-size transform): mult `N·log2(N/2) − N`,
///   add `(3N·log2(N/2) − N)/2`
/// * dual-STC + μ-law: mult `2N·log2 N − N`, add `3N·log2 N + 3N`
pub fn complexity_counts(row: ComplexityRow, n: usize) -> Result<ComplexityReport> {
    if !(n >= 4 && n.is_power_of_two()) {
        return Err(Error::NotPowerOfTwo(n));
    }
    let nn = n as u64;
    let log2n = nn.trailing_zeros() as u64;
    let (multiplications, additions) = match row {
        ComplexityRow::Ofdm | ComplexityRow::FastOfdm | ComplexityRow::DualStc => {
            (2 * nn * log2n - 2 * nn, 3 * nn * log2n - nn)
        }
        ComplexityRow::StcOfdm => {
            let l = log2n - 1;
            (nn * l - nn, (3 * nn * l - nn) / 2)
        }
        ComplexityRow::DualStcMuLaw => (2 * nn * log2n - nn, 3 * nn * log2n + 3 * nn),
    };
    Ok(ComplexityReport {
        scheme: row.tag(),
        n,
        multiplications,
        additions,
    })
}
