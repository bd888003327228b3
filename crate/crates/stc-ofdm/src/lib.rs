//! Baseband physical-layer simulation of four OFDM-family waveforms:
//!
//! * **OFDM** — conventional BPSK on N = 128 sub-carriers at 15 kHz spacing;
//! * **Fast-OFDM** — half sub-carrier spacing, realized on an orthonormal
//!   DCT-II basis (real one-dimensional modulation);
//! * **STC-OFDM** — symbol-time compression: two bits Walsh-spread and
//!   combined into one complex sub-carrier symbol, halving the FFT size (and
//!   symbol time) at unchanged spacing;
//! * **dual-STC** — two STC sub-frames back to back in the time slot of one
//!   OFDM symbol, carrying twice the bits in the same bandwidth.
//!
//! Around the modems sit a μ-law compander (PAPR reduction traded against
//! noise expansion), a calibrated AWGN channel parameterized by Eb/N0, and
//! measurement machinery: exact BER counting with confidence intervals, PAPR
//! CCDFs, Welch PSD estimation with occupied-bandwidth extraction, and
//! closed-form complexity counts. The [`harness`] module runs the Monte Carlo
//! experiments behind the `stc-ofdm` command-line tool; everything is
//! deterministic given a seed, regardless of worker count.

// Validation guards are written `!(x > 0.0)` on purpose: the negation is
// what rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod compander;
pub mod harness;
pub mod metrics;
pub mod modem;
pub mod stc_codec;
pub mod transforms;

/// Errors for operations with rejectable inputs. Pure numeric kernels that
/// accept any input (decoders, companders, CCDFs) return plain values.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("payload is {got} bits, this scheme carries {want} bits per frame")]
    PayloadSize { want: usize, got: usize },
    #[error("bit count {0} is odd; pad to an even length before encoding")]
    OddBitCount(usize),
    #[error("cyclic prefix of {cp} samples must be shorter than the {n}-sample symbol")]
    CpTooLong { cp: usize, n: usize },
    #[error("frame is {got} samples, expected {want}")]
    FrameSize { want: usize, got: usize },
    #[error("bit streams differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{0}")]
    InvalidConfig(String),
    #[error("i/o on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
