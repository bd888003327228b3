//! Transmit/receive chains for the four waveform schemes, with cyclic
//! prefix handling and the compander hook.
//!
//! Frame accounting under the default parameters:
//!
//! | scheme    | transform | CP | samples/frame | bits/frame |
//! |-----------|-----------|----|---------------|------------|
//! | OFDM      | 128 IDFT  | 32 | 160           | 128        |
//! | Fast-OFDM | 128 IDCT  | 32 | 160           | 128        |
//! | STC-OFDM  | 64 IDFT   | 16 | 80            | 128        |
//! | dual-STC  | 2×64 IDFT | 2×16 | 160         | 256        |
//!
//! STC-OFDM carries one OFDM payload in half the time; dual-STC fills the
//! original time slot with two independent STC sub-frames, doubling the bits
//! at unchanged occupied bandwidth. When a scheme config sets μ > 0 the
//! complete frame is compressed as the last transmit step and expanded as
//! the first receive step, the reference V riding along as frame metadata.

use num_complex::Complex64;

use crate::compander;
use crate::stc_codec;
use crate::transforms;
use crate::{Error, Result};

/// Waveform scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ofdm,
    FastOfdm,
    StcOfdm,
    DualStc,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Ofdm,
        Scheme::FastOfdm,
        Scheme::StcOfdm,
        Scheme::DualStc,
    ];

    /// Canonical tag used in CSV output and CLI arguments.
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Ofdm => "ofdm",
            Scheme::FastOfdm => "fast_ofdm",
            Scheme::StcOfdm => "stc_ofdm",
            Scheme::DualStc => "dual_stc",
        }
    }

    /// Accepts the canonical tags plus short aliases (`fast`, `stc`, `dual`).
    pub fn parse(s: &str) -> Option<Scheme> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ofdm" => Some(Scheme::Ofdm),
            "fast" | "fast_ofdm" | "fast-ofdm" => Some(Scheme::FastOfdm),
            "stc" | "stc_ofdm" | "stc-ofdm" => Some(Scheme::StcOfdm),
            "dual" | "dual_stc" | "dual-stc" => Some(Scheme::DualStc),
            _ => None,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Physical parameters of one waveform scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Transform size per symbol (per sub-frame for dual-STC).
    pub fft_size: usize,
    /// Cyclic prefix samples per symbol (per sub-frame for dual-STC).
    pub cp_len: usize,
    /// Sub-carrier spacing Δf in Hz.
    pub subcarrier_spacing: f64,
    /// μ-law parameter; 0 disables the compander.
    pub mu: f64,
}

impl SchemeConfig {
    /// Default parameter sets: OFDM (N=128, CP=32, Δf=15 kHz), Fast-OFDM
    /// (N=128, CP=32, Δf=7.5 kHz), STC-OFDM (N=64, CP=16, Δf=15 kHz),
    /// dual-STC (two STC sub-frames).
    pub fn defaults(scheme: Scheme) -> Self {
        let (fft_size, cp_len, spacing) = match scheme {
            Scheme::Ofdm => (128, 32, 15_000.0),
            Scheme::FastOfdm => (128, 32, 7_500.0),
            Scheme::StcOfdm | Scheme::DualStc => (64, 16, 15_000.0),
        };
        SchemeConfig {
            scheme,
            fft_size,
            cp_len,
            subcarrier_spacing: spacing,
            mu: 0.0,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fft_size >= 2 && self.fft_size.is_power_of_two()) {
            return Err(Error::NotPowerOfTwo(self.fft_size));
        }
        if self.cp_len >= self.fft_size {
            return Err(Error::CpTooLong {
                cp: self.cp_len,
                n: self.fft_size,
            });
        }
        if !(self.subcarrier_spacing > 0.0) {
            return Err(Error::NonPositive {
                name: "subcarrier_spacing",
                value: self.subcarrier_spacing,
            });
        }
        if self.mu < 0.0 {
            return Err(Error::NonPositive {
                name: "mu",
                value: self.mu,
            });
        }
        Ok(())
    }

    /// Baseband sampling rate. Single-symbol schemes span `fft_size` bins;
    /// a dual-STC frame spans two sub-frame bands side by side in time,
    /// occupying the full conventional band, so its rate matches OFDM's.
    pub fn sampling_rate(&self) -> f64 {
        let n = match self.scheme {
            Scheme::DualStc => 2 * self.fft_size,
            _ => self.fft_size,
        };
        n as f64 * self.subcarrier_spacing
    }

    /// Payload bits carried by one frame.
    pub fn bits_per_frame(&self) -> usize {
        match self.scheme {
            Scheme::Ofdm | Scheme::FastOfdm => self.fft_size,
            Scheme::StcOfdm => 2 * self.fft_size,
            Scheme::DualStc => 4 * self.fft_size,
        }
    }

    /// Total samples per frame, cyclic prefix included.
    pub fn samples_per_frame(&self) -> usize {
        match self.scheme {
            Scheme::DualStc => 2 * (self.fft_size + self.cp_len),
            _ => self.fft_size + self.cp_len,
        }
    }

    /// Symbol-body samples (the Eb-bearing part; excludes the CP).
    pub fn useful_samples(&self) -> usize {
        match self.scheme {
            Scheme::DualStc => 2 * self.fft_size,
            _ => self.fft_size,
        }
    }
}

/// One transmitted unit: complex baseband samples plus scheme metadata.
#[derive(Debug, Clone)]
pub struct TimeFrame {
    pub samples: Vec<Complex64>,
    pub scheme: Scheme,
    /// Zero bits appended by the framer to fill the payload; stripped after
    /// decode. Always 0 for frames built directly from full payloads.
    pub pad_bits: usize,
    /// Compander reference V when μ > 0 was applied.
    pub compander_ref: Option<f64>,
}

impl TimeFrame {
    /// Mean power per symbol-body sample — the Eb-bearing power measured on
    /// the frame as it will be transmitted (post-compander).
    pub fn body_power(&self, cfg: &SchemeConfig) -> f64 {
        let (n, cp) = (cfg.fft_size, cfg.cp_len);
        let body_energy: f64 = match self.scheme {
            Scheme::DualStc => {
                let half = n + cp;
                self.samples[cp..half]
                    .iter()
                    .chain(&self.samples[half + cp..])
                    .map(|s| s.norm_sqr())
                    .sum()
            }
            _ => self.samples[cp..].iter().map(|s| s.norm_sqr()).sum(),
        };
        body_energy / cfg.useful_samples() as f64
    }
}

/// Prepend the last `cp_len` samples of the symbol as a cyclic prefix.
pub fn add_cp(symbol: &[Complex64], cp_len: usize) -> Result<Vec<Complex64>> {
    if cp_len >= symbol.len() {
        return Err(Error::CpTooLong {
            cp: cp_len,
            n: symbol.len(),
        });
    }
    let mut out = Vec::with_capacity(symbol.len() + cp_len);
    out.extend_from_slice(&symbol[symbol.len() - cp_len..]);
    out.extend_from_slice(symbol);
    Ok(out)
}

/// Drop the cyclic prefix, returning the symbol body.
pub fn remove_cp(frame: &[Complex64], cp_len: usize) -> Result<Vec<Complex64>> {
    if cp_len >= frame.len() {
        return Err(Error::CpTooLong {
            cp: cp_len,
            n: frame.len(),
        });
    }
    Ok(frame[cp_len..].to_vec())
}

fn check_payload(bits: &[u8], want: usize) -> Result<()> {
    if bits.len() != want {
        return Err(Error::PayloadSize {
            want,
            got: bits.len(),
        });
    }
    Ok(())
}

fn finish_tx(mut samples: Vec<Complex64>, cfg: &SchemeConfig) -> TimeFrame {
    let mut compander_ref = None;
    if cfg.mu > 0.0 {
        let (companded, v) = compander::compress(&samples, cfg.mu);
        samples = companded;
        compander_ref = Some(v);
    }
    TimeFrame {
        samples,
        scheme: cfg.scheme,
        pad_bits: 0,
        compander_ref,
    }
}

fn start_rx(frame: &TimeFrame, cfg: &SchemeConfig) -> Result<Vec<Complex64>> {
    if frame.samples.len() != cfg.samples_per_frame() {
        return Err(Error::FrameSize {
            want: cfg.samples_per_frame(),
            got: frame.samples.len(),
        });
    }
    if cfg.mu > 0.0 {
        let v = frame.compander_ref.ok_or_else(|| {
            Error::InvalidConfig("mu > 0 but the frame carries no compander reference".into())
        })?;
        Ok(compander::expand(&frame.samples, cfg.mu, v))
    } else {
        Ok(frame.samples.clone())
    }
}

/// Conventional OFDM transmit: BPSK on N sub-carriers, IDFT, CP.
pub fn ofdm_tx(bits: &[u8], cfg: &SchemeConfig) -> Result<TimeFrame> {
    check_payload(bits, cfg.fft_size)?;
    let freq: Vec<Complex64> = stc_codec::polar_map(bits)
        .iter()
        .map(|&p| Complex64::new(p, 0.0))
        .collect();
    let body = transforms::inverse_dft(&freq)?;
    Ok(finish_tx(add_cp(&body, cfg.cp_len)?, cfg))
}

/// Conventional OFDM receive: CP off, DFT, sign threshold on the real part.
pub fn ofdm_rx(frame: &TimeFrame, cfg: &SchemeConfig) -> Result<Vec<u8>> {
    let samples = start_rx(frame, cfg)?;
    let body = remove_cp(&samples, cfg.cp_len)?;
    let freq = transforms::forward_dft(&body)?;
    Ok(freq.iter().map(|y| u8::from(y.re > 0.0)).collect())
}

/// Fast-OFDM transmit: polar symbols on the half-spacing cosine basis.
pub fn fast_ofdm_tx(bits: &[u8], cfg: &SchemeConfig) -> Result<TimeFrame> {
    check_payload(bits, cfg.fft_size)?;
    let body_real = transforms::idct2(&stc_codec::polar_map(bits))?;
    let body: Vec<Complex64> = body_real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(finish_tx(add_cp(&body, cfg.cp_len)?, cfg))
}

/// Fast-OFDM receive: the modulation is one-dimensional, so only the real
/// part carries signal; the imaginary noise dimension is discarded.
pub fn fast_ofdm_rx(frame: &TimeFrame, cfg: &SchemeConfig) -> Result<Vec<u8>> {
    let samples = start_rx(frame, cfg)?;
    let body = remove_cp(&samples, cfg.cp_len)?;
    let real: Vec<f64> = body.iter().map(|s| s.re).collect();
    let soft = transforms::dct2(&real)?;
    Ok(soft.iter().map(|&v| u8::from(v > 0.0)).collect())
}

/// STC-OFDM transmit: 2N bits → N spread symbols → N-point IDFT → CP.
pub fn stc_ofdm_tx(bits: &[u8], cfg: &SchemeConfig) -> Result<TimeFrame> {
    check_payload(bits, 2 * cfg.fft_size)?;
    let symbols = stc_codec::stc_encode(bits)?;
    let body = transforms::inverse_dft(&symbols)?;
    Ok(finish_tx(add_cp(&body, cfg.cp_len)?, cfg))
}

/// STC-OFDM receive: CP off, DFT, de-spread.
pub fn stc_ofdm_rx(frame: &TimeFrame, cfg: &SchemeConfig) -> Result<Vec<u8>> {
    let samples = start_rx(frame, cfg)?;
    let body = remove_cp(&samples, cfg.cp_len)?;
    let freq = transforms::forward_dft(&body)?;
    Ok(stc_codec::ste_decode(&freq))
}

fn stc_subframe(bits: &[u8], cfg: &SchemeConfig) -> Result<Vec<Complex64>> {
    let symbols = stc_codec::stc_encode(bits)?;
    let body = transforms::inverse_dft(&symbols)?;
    add_cp(&body, cfg.cp_len)
}

/// Dual-STC transmit: each source's 2N bits become one STC sub-frame; the
/// two sub-frames are concatenated in time and companded as one unit.
pub fn dual_stc_tx(bits_a: &[u8], bits_b: &[u8], cfg: &SchemeConfig) -> Result<TimeFrame> {
    if bits_a.len() != bits_b.len() {
        return Err(Error::LengthMismatch(bits_a.len(), bits_b.len()));
    }
    check_payload(bits_a, 2 * cfg.fft_size)?;
    let mut samples = stc_subframe(bits_a, cfg)?;
    samples.extend(stc_subframe(bits_b, cfg)?);
    Ok(finish_tx(samples, cfg))
}

/// Dual-STC receive: expand, split at the midpoint, decode each half as
/// STC-OFDM; returns the two source payloads.
pub fn dual_stc_rx(frame: &TimeFrame, cfg: &SchemeConfig) -> Result<(Vec<u8>, Vec<u8>)> {
    let samples = start_rx(frame, cfg)?;
    let half = samples.len() / 2;
    let mut out = Vec::with_capacity(2);
    for part in [&samples[..half], &samples[half..]] {
        let body = remove_cp(part, cfg.cp_len)?;
        let freq = transforms::forward_dft(&body)?;
        out.push(stc_codec::ste_decode(&freq));
    }
    let b = out.pop().expect("two halves");
    let a = out.pop().expect("two halves");
    Ok((a, b))
}

/// Scheme-dispatching transmit over one flat payload of
/// [`SchemeConfig::bits_per_frame`] bits; dual-STC takes source A in the
/// first half and source B in the second.
pub fn transmit(bits: &[u8], cfg: &SchemeConfig) -> Result<TimeFrame> {
    match cfg.scheme {
        Scheme::Ofdm => ofdm_tx(bits, cfg),
        Scheme::FastOfdm => fast_ofdm_tx(bits, cfg),
        Scheme::StcOfdm => stc_ofdm_tx(bits, cfg),
        Scheme::DualStc => {
            check_payload(bits, cfg.bits_per_frame())?;
            let half = bits.len() / 2;
            dual_stc_tx(&bits[..half], &bits[half..], cfg)
        }
    }
}

/// Scheme-dispatching receive; inverse of [`transmit`]'s payload layout.
pub fn receive(frame: &TimeFrame, cfg: &SchemeConfig) -> Result<Vec<u8>> {
    match cfg.scheme {
        Scheme::Ofdm => ofdm_rx(frame, cfg),
        Scheme::FastOfdm => fast_ofdm_rx(frame, cfg),
        Scheme::StcOfdm => stc_ofdm_rx(frame, cfg),
        Scheme::DualStc => {
            let (mut a, b) = dual_stc_rx(frame, cfg)?;
            a.extend(b);
            Ok(a)
        }
    }
}
