//! Monte Carlo experiment drivers: BER sweeps against the matched-filter
//! bound, PAPR statistics, spectral measurements, the companding trade-off
//! study, operation-count tables, and end-to-end file transfer.
//!
//! Determinism contract: every random stream is seeded through
//! [`derive_seed`] from (base seed, experiment/scheme stream id, grid point,
//! loop index), and cross-loop reduction uses exact integer sums, so a run
//! with a given seed produces byte-identical records regardless of thread
//! count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::channel;
use crate::metrics;
use crate::modem::{self, Scheme, SchemeConfig};
use crate::{Error, Result};

/// z for a two-sided 95% interval.
const Z95: f64 = 1.959963984540054;

// Stream-id tags keeping experiment noise streams disjoint per scheme.
const EXP_BER: u64 = 1;
const EXP_PAPR: u64 = 2;
const EXP_PSD: u64 = 3;
const EXP_FILE: u64 = 4;

/// Shared knobs for the sweep drivers. `n_loops × n_symbols` frames are
/// simulated per grid point; loops are the unit of parallelism.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub schemes: Vec<Scheme>,
    pub ebn0_db: Vec<f64>,
    pub n_loops: usize,
    pub n_symbols: usize,
    /// Compander strength applied inside each scheme (0 disables).
    pub mu: f64,
    /// Grid for the companding trade-off study.
    pub mu_values: Vec<f64>,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            schemes: Scheme::ALL.to_vec(),
            ebn0_db: ebn0_grid(0.0, 1.0, 12.0),
            n_loops: 100,
            n_symbols: 1000,
            mu: 0.0,
            mu_values: vec![0.0, 1.0, 4.0, 10.0, 100.0],
            seed: 42,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::InvalidConfig("no schemes selected".into()));
        }
        if self.ebn0_db.is_empty() {
            return Err(Error::InvalidConfig("empty Eb/N0 grid".into()));
        }
        for &e in &self.ebn0_db {
            if !e.is_finite() {
                return Err(Error::InvalidConfig(format!("non-finite Eb/N0 {e}")));
            }
        }
        if self.n_loops == 0 || self.n_symbols == 0 {
            return Err(Error::InvalidConfig(
                "n_loops and n_symbols must be at least 1".into(),
            ));
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::NonPositive {
                name: "mu",
                value: self.mu,
            });
        }
        for &m in &self.mu_values {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(Error::NonPositive {
                    name: "mu_values entry",
                    value: m,
                });
            }
        }
        Ok(())
    }

    /// Scheme defaults with this sweep's compander setting applied.
    pub fn scheme_config(&self, scheme: Scheme) -> SchemeConfig {
        SchemeConfig::defaults(scheme).with_mu(self.mu)
    }
}

/// Inclusive `start..=stop` grid with the given step (tolerant of float
/// accumulation at the endpoint).
pub fn ebn0_grid(start: f64, step: f64, stop: f64) -> Vec<f64> {
    if step <= 0.0 || stop < start {
        return vec![start];
    }
    let n = ((stop - start) / step + 1.0 + 1e-9).floor() as usize;
    (0..n).map(|i| start + i as f64 * step).collect()
}

/// One measured point of any experiment, in the shape the CSV files use.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub experiment: String,
    pub scheme: String,
    /// Sweep variable: Eb/N0 in dB, PAPR threshold in dB, μ, or transform
    /// size, depending on the experiment.
    pub abscissa: f64,
    pub value: f64,
    pub trials: u64,
    pub errors: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl MetricRecord {
    pub const CSV_HEADER: &'static str =
        "experiment,scheme,abscissa,value,trials,errors,ci_low,ci_high";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.experiment,
            self.scheme,
            self.abscissa,
            self.value,
            self.trials,
            self.errors,
            self.ci_low,
            self.ci_high
        )
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable seed for the (stream, point, loop) cell of an experiment: a
/// SplitMix64 chain over the components, so any change in any coordinate
/// decorrelates the stream.
pub fn derive_seed(base: u64, stream: u64, point: u64, lane: u64) -> u64 {
    let mut s = splitmix64(base);
    s = splitmix64(s ^ stream);
    s = splitmix64(s ^ point);
    s = splitmix64(s ^ lane);
    s
}

fn stream_id(experiment: u64, cfg: &SchemeConfig) -> u64 {
    ((experiment << 8) | cfg.scheme as u64) ^ cfg.mu.to_bits().rotate_left(16)
}

/// "ofdm", or "ofdm+mu4" when a compander is active.
pub fn scheme_label(cfg: &SchemeConfig) -> String {
    if cfg.mu > 0.0 {
        format!("{}+mu{}", cfg.scheme.tag(), cfg.mu)
    } else {
        cfg.scheme.tag().to_string()
    }
}

fn random_payload(rng: &mut impl Rng, bits: usize) -> Vec<u8> {
    (0..bits).map(|_| rng.random_range(0..=1u8)).collect()
}

/// Measure BER at one Eb/N0 point: `n_loops × frames_per_loop` frames, each
/// with an independent payload and noise realization, loops fanned out in
/// parallel and reduced by exact error counts.
pub fn ber_point(
    cfg: &SchemeConfig,
    ebn0_db: f64,
    n_loops: usize,
    frames_per_loop: usize,
    base_seed: u64,
    point_idx: u64,
) -> Result<MetricRecord> {
    cfg.validate()?;
    if n_loops == 0 || frames_per_loop == 0 {
        return Err(Error::InvalidConfig(
            "n_loops and frames_per_loop must be at least 1".into(),
        ));
    }
    let sid = stream_id(EXP_BER, cfg);
    let bits_per_frame = cfg.bits_per_frame();
    let (errors, bits) = (0..n_loops as u64)
        .into_par_iter()
        .map(|lane| -> Result<(u64, u64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(base_seed, sid, point_idx, lane));
            let mut errors = 0u64;
            for _ in 0..frames_per_loop {
                let payload = random_payload(&mut rng, bits_per_frame);
                let mut frame = modem::transmit(&payload, cfg)?;
                // Eb is taken from the frame actually transmitted (after
                // any companding), CP excluded.
                let sigma = channel::noise_sigma(
                    ebn0_db,
                    frame.body_power(cfg),
                    payload.len(),
                    cfg.useful_samples(),
                )?;
                channel::awgn_in_place(&mut frame.samples, sigma, &mut rng);
                let decoded = modem::receive(&frame, cfg)?;
                errors += payload.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64;
            }
            Ok((errors, (bits_per_frame * frames_per_loop) as u64))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let ber = errors as f64 / bits as f64;
    let (ci_low, ci_high) = metrics::wilson_interval(errors, bits, Z95);
    Ok(MetricRecord {
        experiment: "ber".into(),
        scheme: scheme_label(cfg),
        abscissa: ebn0_db,
        value: ber,
        trials: bits,
        errors,
        ci_low,
        ci_high,
    })
}

/// BER sweep over `cfg.schemes × cfg.ebn0_db`. `on_point` is invoked as soon
/// as each record exists (the CLI uses it to flush the CSV per point, so a
/// long sweep is inspectable while running).
pub fn run_ber_sweep_with<F>(cfg: &SweepConfig, mut on_point: F) -> Result<Vec<MetricRecord>>
where
    F: FnMut(&MetricRecord) -> Result<()>,
{
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.schemes.len() * cfg.ebn0_db.len());
    for &scheme in &cfg.schemes {
        let scfg = cfg.scheme_config(scheme);
        for (pi, &ebn0) in cfg.ebn0_db.iter().enumerate() {
            let rec = ber_point(&scfg, ebn0, cfg.n_loops, cfg.n_symbols, cfg.seed, pi as u64)?;
            on_point(&rec)?;
            records.push(rec);
        }
    }
    Ok(records)
}

pub fn run_ber_sweep(cfg: &SweepConfig) -> Result<Vec<MetricRecord>> {
    run_ber_sweep_with(cfg, |_| Ok(()))
}

/// Per-frame PAPR samples (`n_loops × frames_per_loop` frames, raw sample
/// grid, CP included) for one scheme.
pub fn papr_samples(
    cfg: &SchemeConfig,
    n_loops: usize,
    frames_per_loop: usize,
    base_seed: u64,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let sid = stream_id(EXP_PAPR, cfg);
    let bits_per_frame = cfg.bits_per_frame();
    let per_loop: Vec<Vec<f64>> = (0..n_loops as u64)
        .into_par_iter()
        .map(|lane| -> Result<Vec<f64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(base_seed, sid, 0, lane));
            (0..frames_per_loop)
                .map(|_| {
                    let payload = random_payload(&mut rng, bits_per_frame);
                    let frame = modem::transmit(&payload, cfg)?;
                    metrics::papr_db(&frame.samples, 1)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_loop.concat())
}

/// PAPR experiment: CCDF curve plus the 1e-3 crossing per scheme.
pub fn run_papr_experiment(cfg: &SweepConfig) -> Result<Vec<MetricRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &scheme in &cfg.schemes {
        let scfg = cfg.scheme_config(scheme);
        let label = scheme_label(&scfg);
        let samples = papr_samples(&scfg, cfg.n_loops, cfg.n_symbols, cfg.seed)?;
        let n = samples.len() as u64;
        for (gamma, p) in metrics::ccdf(&samples) {
            records.push(MetricRecord {
                experiment: "papr_ccdf".into(),
                scheme: label.clone(),
                abscissa: gamma,
                value: p,
                trials: n,
                errors: 0,
                ci_low: 0.0,
                ci_high: 0.0,
            });
        }
        let crossing = metrics::ccdf_crossing(&samples, 1e-3).unwrap_or(f64::NAN);
        records.push(MetricRecord {
            experiment: "papr_crossing_1e3".into(),
            scheme: label,
            abscissa: -3.0,
            value: crossing,
            trials: n,
            errors: 0,
            ci_low: 0.0,
            ci_high: 0.0,
        });
    }
    Ok(records)
}

/// Samples to feed the spectral estimate with (enough for a few thousand
/// Welch segments at the default segment length).
const PSD_MIN_SAMPLES: usize = 1_200_000;

/// One estimated spectrum per scheme, in sweep order.
pub type SchemeSpectra = Vec<(Scheme, metrics::PsdEstimate)>;

/// Welch spectrum and 99%-power occupied bandwidth per scheme, from a long
/// concatenation of random frames.
pub fn run_psd_experiment(cfg: &SweepConfig) -> Result<(Vec<MetricRecord>, SchemeSpectra)> {
    cfg.validate()?;
    let mut records = Vec::new();
    let mut spectra = Vec::new();
    for &scheme in &cfg.schemes {
        let scfg = cfg.scheme_config(scheme);
        let spf = scfg.samples_per_frame();
        let n_frames = PSD_MIN_SAMPLES.div_ceil(spf);
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, stream_id(EXP_PSD, &scfg), 0, 0));
        let mut signal = Vec::with_capacity(n_frames * spf);
        for _ in 0..n_frames {
            let payload = random_payload(&mut rng, scfg.bits_per_frame());
            signal.extend_from_slice(&modem::transmit(&payload, &scfg)?.samples);
        }
        let psd = metrics::psd_welch(&signal, scfg.sampling_rate(), 1024, 512)?;
        let bw = metrics::occupied_bandwidth(&psd, 0.99)?;
        records.push(MetricRecord {
            experiment: "psd_occupied_bw".into(),
            scheme: scheme_label(&scfg),
            abscissa: 0.99,
            value: bw,
            trials: n_frames as u64,
            errors: 0,
            ci_low: 0.0,
            ci_high: 0.0,
        });
        spectra.push((scheme, psd));
    }
    Ok((records, spectra))
}

/// Abscissa where a decreasing curve crosses `target`, interpolating
/// linearly in log10 of the ordinate between the bracketing grid points.
pub fn log_crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    for w in points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if y0 >= target && target >= y1 && y1 > 0.0 {
            if y0 == y1 {
                return Some(x0);
            }
            let t = (y0.log10() - target.log10()) / (y0.log10() - y1.log10());
            return Some(x0 + t * (x1 - x0));
        }
    }
    None
}

/// Eb/N0 grid bracketing the 1e-4 BER crossing for a given compander
/// strength (wide fallback for strengths outside the studied set).
fn mulaw_grid(mu: f64) -> Vec<f64> {
    let (lo, hi) = if mu == 0.0 {
        (7.0, 9.5)
    } else if mu <= 1.0 {
        (7.0, 10.0)
    } else if mu <= 4.0 {
        (8.5, 11.5)
    } else if mu <= 10.0 {
        (10.5, 13.5)
    } else if mu <= 100.0 {
        (15.0, 19.0)
    } else {
        (6.0, 24.0)
    };
    ebn0_grid(lo, 0.5, hi)
}

/// Companding trade-off on the double-rate scheme: for each μ, the 1e-3
/// PAPR crossing, its improvement over the uncompanded baseline, and the
/// Eb/N0 needed for BER 1e-4 with the matching degradation.
pub fn run_mulaw_tradeoff(cfg: &SweepConfig) -> Result<Vec<MetricRecord>> {
    cfg.validate()?;
    let scheme = Scheme::DualStc;
    let at = |mu: f64| SchemeConfig::defaults(scheme).with_mu(mu);

    let papr_crossing = |scfg: &SchemeConfig| -> Result<(f64, u64)> {
        let samples = papr_samples(scfg, cfg.n_loops, cfg.n_symbols, cfg.seed)?;
        Ok((
            metrics::ccdf_crossing(&samples, 1e-3).unwrap_or(f64::NAN),
            samples.len() as u64,
        ))
    };
    let ber_crossing = |scfg: &SchemeConfig| -> Result<(f64, u64)> {
        let mut points = Vec::new();
        let mut bits = 0;
        for (pi, &ebn0) in mulaw_grid(scfg.mu).iter().enumerate() {
            let rec = ber_point(scfg, ebn0, cfg.n_loops, cfg.n_symbols, cfg.seed, pi as u64)?;
            bits += rec.trials;
            points.push((rec.abscissa, rec.value));
        }
        Ok((log_crossing(&points, 1e-4).unwrap_or(f64::NAN), bits))
    };

    let baseline = at(0.0);
    let (papr0, papr0_n) = papr_crossing(&baseline)?;
    let (ber0, ber0_n) = ber_crossing(&baseline)?;

    let mut records = Vec::new();
    for &mu in &cfg.mu_values {
        let scfg = at(mu);
        let label = scheme_label(&scfg);
        let (papr, papr_n) = if mu == 0.0 {
            (papr0, papr0_n)
        } else {
            papr_crossing(&scfg)?
        };
        let (ber, ber_n) = if mu == 0.0 {
            (ber0, ber0_n)
        } else {
            ber_crossing(&scfg)?
        };
        let blank = MetricRecord {
            experiment: String::new(),
            scheme: label,
            abscissa: mu,
            value: 0.0,
            trials: 0,
            errors: 0,
            ci_low: 0.0,
            ci_high: 0.0,
        };
        records.push(MetricRecord {
            experiment: "mulaw_papr".into(),
            value: papr,
            trials: papr_n,
            ..blank.clone()
        });
        records.push(MetricRecord {
            experiment: "mulaw_improvement".into(),
            value: papr0 - papr,
            trials: papr_n,
            ..blank.clone()
        });
        records.push(MetricRecord {
            experiment: "mulaw_ber_crossing".into(),
            value: ber,
            trials: ber_n,
            ..blank.clone()
        });
        records.push(MetricRecord {
            experiment: "mulaw_ber_degradation".into(),
            value: ber - ber0,
            trials: ber_n,
            ..blank
        });
    }
    Ok(records)
}

/// Operation counts for every scheme row at the given transform sizes.
pub fn emit_complexity_table(sizes: &[usize]) -> Result<Vec<MetricRecord>> {
    let mut records = Vec::new();
    for &n in sizes {
        for row in metrics::ComplexityRow::ALL {
            let report = metrics::complexity_counts(row, n)?;
            for (experiment, value) in [
                ("complexity_mult", report.multiplications),
                ("complexity_add", report.additions),
            ] {
                records.push(MetricRecord {
                    experiment: experiment.into(),
                    scheme: report.scheme.into(),
                    abscissa: n as f64,
                    value: value as f64,
                    trials: 0,
                    errors: 0,
                    ci_low: 0.0,
                    ci_high: 0.0,
                });
            }
        }
    }
    Ok(records)
}

/// MSB-first bit unpacking.
pub fn bytes_to_bits(data: &[u8]) -> Vec<u8> {
    data.iter()
        .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1))
        .collect()
}

/// Inverse of [`bytes_to_bits`]; the length must be a whole number of bytes.
pub fn bits_to_bytes(bits: &[u8]) -> Result<Vec<u8>> {
    if !bits.len().is_multiple_of(8) {
        return Err(Error::InvalidConfig(format!(
            "{} bits is not a whole number of bytes",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(8)
        .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1)))
        .collect())
}

/// Result of pushing one byte stream through a noisy link.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferOutcome {
    pub decoded: Vec<u8>,
    pub bit_errors: u64,
    /// Payload bits, excluding the zero pad of the final frame.
    pub total_bits: u64,
    pub frames: u64,
    pub byte_exact: bool,
}

/// Frame up `data`, push every frame through AWGN at the given Eb/N0, and
/// demodulate. The final frame is zero-padded; the pad is stripped before
/// comparison, so error figures cover real payload bits only.
pub fn send_bytes(
    cfg: &SchemeConfig,
    ebn0_db: f64,
    base_seed: u64,
    data: &[u8],
) -> Result<TransferOutcome> {
    cfg.validate()?;
    let sent_bits = bytes_to_bits(data);
    let bpf = cfg.bits_per_frame();
    let n_frames = sent_bits.len().div_ceil(bpf);
    let decoded_bits = transfer_frames(cfg, ebn0_db, base_seed, n_frames, |f| {
        let start = f * bpf;
        let mut payload = vec![0u8; bpf];
        let take = (sent_bits.len() - start).min(bpf);
        payload[..take].copy_from_slice(&sent_bits[start..start + take]);
        payload
    })?;
    let received = &decoded_bits[..sent_bits.len()];
    let bit_errors = count_diffs(&sent_bits, received);
    let decoded = bits_to_bytes(received)?;
    Ok(TransferOutcome {
        byte_exact: decoded == data,
        decoded,
        bit_errors,
        total_bits: sent_bits.len() as u64,
        frames: n_frames as u64,
    })
}

/// Carry two independent byte streams on the double-rate scheme, one per
/// half-frame. The shorter stream is zero-padded to the common frame count;
/// each outcome reports only its own stream's bits.
pub fn send_bytes_pair(
    cfg: &SchemeConfig,
    ebn0_db: f64,
    base_seed: u64,
    first: &[u8],
    second: &[u8],
) -> Result<(TransferOutcome, TransferOutcome)> {
    cfg.validate()?;
    if cfg.scheme != Scheme::DualStc {
        return Err(Error::InvalidConfig(format!(
            "paired transfer needs the double-rate scheme, got {}",
            cfg.scheme
        )));
    }
    let half = cfg.bits_per_frame() / 2;
    let bits_a = bytes_to_bits(first);
    let bits_b = bytes_to_bits(second);
    let n_frames = bits_a.len().max(bits_b.len()).div_ceil(half);
    let chunk = |bits: &[u8], f: usize| {
        let start = f * half;
        let mut out = vec![0u8; half];
        if start < bits.len() {
            let take = (bits.len() - start).min(half);
            out[..take].copy_from_slice(&bits[start..start + take]);
        }
        out
    };
    let decoded_bits = transfer_frames(cfg, ebn0_db, base_seed, n_frames, |f| {
        let mut payload = chunk(&bits_a, f);
        payload.extend_from_slice(&chunk(&bits_b, f));
        payload
    })?;
    // De-interleave the half-frames back into the two streams.
    let mut recv_a = Vec::with_capacity(n_frames * half);
    let mut recv_b = Vec::with_capacity(n_frames * half);
    for frame in decoded_bits.chunks_exact(2 * half) {
        recv_a.extend_from_slice(&frame[..half]);
        recv_b.extend_from_slice(&frame[half..]);
    }
    let outcome = |sent: &[u8], recv: &[u8], original: &[u8]| -> Result<TransferOutcome> {
        let recv = &recv[..sent.len()];
        let decoded = bits_to_bytes(recv)?;
        Ok(TransferOutcome {
            byte_exact: decoded == original,
            decoded,
            bit_errors: count_diffs(sent, recv),
            total_bits: sent.len() as u64,
            frames: n_frames as u64,
        })
    };
    Ok((
        outcome(&bits_a, &recv_a, first)?,
        outcome(&bits_b, &recv_b, second)?,
    ))
}

fn count_diffs(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Transmit `n_frames` payloads produced by `payload_for` over AWGN and
/// concatenate the decoded bits, one derived seed per frame.
fn transfer_frames(
    cfg: &SchemeConfig,
    ebn0_db: f64,
    base_seed: u64,
    n_frames: usize,
    payload_for: impl Fn(usize) -> Vec<u8> + Sync,
) -> Result<Vec<u8>> {
    let sid = stream_id(EXP_FILE, cfg);
    let per_frame: Vec<Vec<u8>> = (0..n_frames)
        .into_par_iter()
        .map(|f| -> Result<Vec<u8>> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(base_seed, sid, f as u64, 0));
            let payload = payload_for(f);
            let mut frame = modem::transmit(&payload, cfg)?;
            let sigma = channel::noise_sigma(
                ebn0_db,
                frame.body_power(cfg),
                payload.len(),
                cfg.useful_samples(),
            )?;
            channel::awgn_in_place(&mut frame.samples, sigma, &mut rng);
            modem::receive(&frame, cfg)
        })
        .collect::<Result<_>>()?;
    Ok(per_frame.concat())
}

/// Write records as CSV with the canonical header.
pub fn write_records_csv(path: &Path, records: &[MetricRecord]) -> Result<()> {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(MetricRecord::CSV_HEADER);
    out.push('\n');
    for rec in records {
        let _ = writeln!(out, "{}", rec.csv_line());
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write a PSD curve as `freq_hz,power_db` CSV.
pub fn write_psd_csv(path: &Path, psd: &metrics::PsdEstimate) -> Result<()> {
    let mut out = String::with_capacity(32 * (psd.freqs.len() + 1));
    out.push_str("freq_hz,power_db\n");
    for (f, db) in psd.freqs.iter().zip(&psd.power_db) {
        let _ = writeln!(out, "{f},{db}");
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write a `key = value` run manifest so a results directory is
/// reproducible from its own description.
pub fn write_manifest(path: &Path, entries: &[(&str, String)]) -> Result<()> {
    let mut out = String::new();
    for (key, value) in entries {
        let _ = writeln!(out, "{key} = {value}");
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_separate_all_coordinates() {
        let base = derive_seed(42, 1, 2, 3);
        assert_eq!(base, derive_seed(42, 1, 2, 3));
        for other in [
            derive_seed(43, 1, 2, 3),
            derive_seed(42, 2, 2, 3),
            derive_seed(42, 1, 3, 3),
            derive_seed(42, 1, 2, 4),
        ] {
            assert_ne!(base, other);
        }
    }

    #[test]
    fn ebn0_grid_is_inclusive() {
        let g = ebn0_grid(0.0, 1.0, 12.0);
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[12], 12.0);
        let h = ebn0_grid(7.0, 0.5, 9.5);
        assert_eq!(h.len(), 6);
        assert!((h[5] - 9.5).abs() < 1e-12);
    }

    #[test]
    fn log_crossing_interpolates_in_decades() {
        let pts = [(8.0, 1e-3), (9.0, 1e-5)];
        let c = log_crossing(&pts, 1e-4).unwrap();
        assert!((c - 8.5).abs() < 1e-12, "got {c}");
        assert!(log_crossing(&pts, 1e-7).is_none());
    }

    #[test]
    fn bits_round_trip_msb_first() {
        assert_eq!(bytes_to_bits(&[0xA5]), vec![1, 0, 1, 0, 0, 1, 0, 1]);
        let data = b"framing check \x00\xff";
        assert_eq!(bits_to_bytes(&bytes_to_bits(data)).unwrap(), data);
        assert!(bits_to_bytes(&[1, 0, 1]).is_err());
    }

    #[test]
    fn ber_point_is_deterministic_and_clean_at_high_snr() {
        let cfg = SchemeConfig::defaults(Scheme::StcOfdm);
        let a = ber_point(&cfg, 30.0, 4, 25, 7, 0).unwrap();
        let b = ber_point(&cfg, 30.0, 4, 25, 7, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.errors, 0);
        assert_eq!(a.trials, 4 * 25 * 128);
    }

    #[test]
    fn ber_point_tracks_theory_at_low_snr() {
        let cfg = SchemeConfig::defaults(Scheme::Ofdm);
        let rec = ber_point(&cfg, 4.0, 8, 100, 11, 0).unwrap();
        let want = metrics::theoretical_ber_bpsk(4.0);
        let sigma = metrics::binomial_sigma(want, rec.trials);
        assert!(
            (rec.value - want).abs() < 4.0 * sigma,
            "measured {} vs theory {want}",
            rec.value
        );
    }

    #[test]
    fn sweep_covers_grid_and_reports_order() {
        let cfg = SweepConfig {
            schemes: vec![Scheme::Ofdm, Scheme::DualStc],
            ebn0_db: vec![0.0, 2.0],
            n_loops: 2,
            n_symbols: 5,
            ..SweepConfig::default()
        };
        let recs = run_ber_sweep(&cfg).unwrap();
        let got: Vec<(String, f64)> = recs
            .iter()
            .map(|r| (r.scheme.clone(), r.abscissa))
            .collect();
        assert_eq!(
            got,
            vec![
                ("ofdm".into(), 0.0),
                ("ofdm".into(), 2.0),
                ("dual_stc".into(), 0.0),
                ("dual_stc".into(), 2.0),
            ]
        );
    }

    #[test]
    fn file_transfer_is_exact_in_clean_channel() {
        let cfg = SchemeConfig::defaults(Scheme::Ofdm);
        let data: Vec<u8> = (0..777).map(|i| (i * 37 % 256) as u8).collect();
        let out = send_bytes(&cfg, 30.0, 5, &data).unwrap();
        assert!(out.byte_exact);
        assert_eq!(out.decoded, data);
        assert_eq!(out.bit_errors, 0);
        assert_eq!(out.frames, (777u64 * 8).div_ceil(128));
    }

    #[test]
    fn paired_transfer_keeps_streams_apart() {
        let cfg = SchemeConfig::defaults(Scheme::DualStc);
        let a: Vec<u8> = (0..500).map(|i| (i % 251) as u8).collect();
        let b: Vec<u8> = (0..321).map(|i| (i * 7 % 256) as u8).collect();
        let (ra, rb) = send_bytes_pair(&cfg, 30.0, 9, &a, &b).unwrap();
        assert!(ra.byte_exact && rb.byte_exact);
        assert_eq!(ra.decoded, a);
        assert_eq!(rb.decoded, b);
        assert_eq!(ra.frames, rb.frames);
        // Both streams ride the same frames even with unequal lengths.
        assert_eq!(ra.frames, (500u64 * 8).div_ceil(128));
    }

    #[test]
    fn paired_transfer_rejects_single_rate_schemes() {
        let cfg = SchemeConfig::defaults(Scheme::Ofdm);
        assert!(send_bytes_pair(&cfg, 30.0, 1, b"a", b"b").is_err());
    }

    #[test]
    fn csv_format_is_stable() {
        let rec = MetricRecord {
            experiment: "ber".into(),
            scheme: "ofdm".into(),
            abscissa: 4.0,
            value: 0.0125,
            trials: 1000,
            errors: 125,
            ci_low: 0.01,
            ci_high: 0.015,
        };
        assert_eq!(rec.csv_line(), "ber,ofdm,4,0.0125,1000,125,0.01,0.015");
        assert_eq!(
            MetricRecord::CSV_HEADER,
            "experiment,scheme,abscissa,value,trials,errors,ci_low,ci_high"
        );
    }

    #[test]
    fn complexity_table_emits_all_rows() {
        let recs = emit_complexity_table(&[64, 128, 256]).unwrap();
        assert_eq!(recs.len(), 3 * 5 * 2);
        let stc_mult = recs
            .iter()
            .find(|r| {
                r.experiment == "complexity_mult" && r.scheme == "stc_ofdm" && r.abscissa == 128.0
            })
            .unwrap();
        assert_eq!(stc_mult.value, 640.0);
    }
}
