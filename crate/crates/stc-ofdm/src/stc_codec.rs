//! Symbol-time-compression codec: two bits in, one complex sub-carrier
//! symbol out, and the matching de-spreading decoder.
//!
//! Each bit of a pair is spread over two chips by one of a pair of
//! orthogonal Walsh codes, the two spread streams are summed, and the
//! resulting chip pair (normalized by 2, each chip in {−1, 0, +1}) rides the
//! sub-carrier as real and imaginary parts. For BPSK input the constellation
//! closes over {+1, −1, +j, −j} with unit energy — exactly a QPSK mapper in
//! disguise, which is why the scheme gives up no BER against plain OFDM.
//!
//! The decoder correlates against each Walsh code: `v1 = Re + Im`,
//! `v2 = Re − Im` recover the two polar bits; the chip sum over the pair is
//! the discrete form of integrating over the bit period.

use num_complex::Complex64;

use crate::{Error, Result};

/// Walsh spreading code for the first bit of a pair.
pub const WALSH_C0: [f64; 2] = [1.0, 1.0];
/// Walsh spreading code for the second bit of a pair; orthogonal to [`WALSH_C0`].
pub const WALSH_C1: [f64; 2] = [1.0, -1.0];

/// 0 → −1, 1 → +1.
pub fn polar_map(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| {
            debug_assert!(b <= 1, "bit out of range: {b}");
            if b == 0 {
                -1.0
            } else {
                1.0
            }
        })
        .collect()
}

/// Encode an even-length bit stream into `bits.len()/2` complex symbols.
///
/// For a pair with polar values (p1, p2) the combined, normalized chips are
/// `[(p1 + p2)/2, (p1 − p2)/2]`, mapped to `chip0 + j·chip1`.
pub fn stc_encode(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::OddBitCount(bits.len()));
    }
    let polar = polar_map(bits);
    Ok(polar
        .chunks_exact(2)
        .map(|p| {
            let chip0 = (p[0] * WALSH_C0[0] + p[1] * WALSH_C1[0]) / 2.0;
            let chip1 = (p[0] * WALSH_C0[1] + p[1] * WALSH_C1[1]) / 2.0;
            Complex64::new(chip0, chip1)
        })
        .collect())
}

/// Soft de-spreading correlations for one received symbol: the chip pair
/// (Re, Im) correlated against each Walsh code.
pub fn ste_soft(symbol: Complex64) -> (f64, f64) {
    let v1 = symbol.re * WALSH_C0[0] + symbol.im * WALSH_C0[1];
    let v2 = symbol.re * WALSH_C1[0] + symbol.im * WALSH_C1[1];
    (v1, v2)
}

/// Hard-decision decode of noisy symbols back to bits (2 per symbol).
///
/// The decision is a sign test on the soft value — equivalent to shifting by
/// (v+1)/2 and thresholding at 0.5 — with the exact tie v = 0 resolved to
/// bit 0 for determinism.
pub fn ste_decode(symbols: &[Complex64]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(symbols.len() * 2);
    for &s in symbols {
        let (v1, v2) = ste_soft(s);
        bits.push(u8::from(v1 > 0.0));
        bits.push(u8::from(v2 > 0.0));
    }
    bits
}
