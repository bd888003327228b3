//! Experiment runner for the stc-ofdm library.
//!
//! Every subcommand writes CSV records plus a manifest of the resolved
//! settings into the output directory, so a results directory describes
//! how to reproduce itself. Settings resolve as: flags over config file
//! over defaults.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use stc_ofdm::harness::{self, MetricRecord, SweepConfig};
use stc_ofdm::modem::{Scheme, SchemeConfig};

#[derive(Parser)]
#[command(
    name = "stc-ofdm",
    version,
    about = "Monte Carlo experiments for the symbol-time-compression OFDM toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BER sweep over Eb/N0, flushed to CSV per point
    Ber(BerArgs),
    /// Per-frame PAPR statistics and CCDF per scheme
    Papr(SweepArgs),
    /// Welch spectra and 99%-power occupied bandwidth per scheme
    Psd(SweepArgs),
    /// Companding trade-off on the double-rate scheme across mu values
    Mulaw(SweepArgs),
    /// Closed-form operation counts per scheme and transform size
    Complexity(ComplexityArgs),
    /// Push one or two files through the simulated link
    Sendfile(SendfileArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// key=value config file; explicit flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated scheme tags: ofdm, fast_ofdm, stc_ofdm, dual_stc
    /// (aliases fast, stc, dual)
    #[arg(long)]
    schemes: Option<String>,
    /// Eb/N0 grid as start:step:stop in dB (e.g. 0:1:12) or a comma list
    #[arg(long)]
    ebn0_range: Option<String>,
    /// Simulation loops per grid point
    #[arg(long)]
    n_loops: Option<usize>,
    /// Frames per loop
    #[arg(long)]
    n_symbols: Option<usize>,
    /// Compander strength applied inside each scheme (0 = off)
    #[arg(long)]
    mu: Option<f64>,
    /// Comma-separated compander strengths for the mulaw study
    #[arg(long)]
    mu_values: Option<String>,
    /// Base seed; reruns with the same seed are byte-identical
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BerArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Append a ~1e8-bit confirmation point at 10.5 dB on the baseline
    #[arg(long)]
    deep: bool,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Comma-separated transform sizes
    #[arg(long, default_value = "64,128,256")]
    sizes: String,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct SendfileArgs {
    /// One input file (single-stream schemes) or two (dual_stc)
    #[arg(required = true, num_args = 1..=2)]
    inputs: Vec<PathBuf>,
    /// Scheme tag carrying the transfer
    #[arg(long, default_value = "ofdm")]
    scheme: String,
    /// Channel Eb/N0 in dB
    #[arg(long, default_value_t = 30.0)]
    ebn0: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory for the received files and report
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Ber(args) => run_ber(args),
        Command::Papr(args) => run_papr(args),
        Command::Psd(args) => run_psd(args),
        Command::Mulaw(args) => run_mulaw(args),
        Command::Complexity(args) => run_complexity(args),
        Command::Sendfile(args) => run_sendfile(args),
    }
}

/// Settings after flag/config/default resolution.
struct Resolved {
    sweep: SweepConfig,
    out: PathBuf,
}

const CONFIG_KEYS: [&str; 8] = [
    "schemes",
    "ebn0-range",
    "n-loops",
    "n-symbols",
    "mu",
    "mu-values",
    "seed",
    "out",
];

fn load_config(path: &Path) -> Result<HashMap<String, String>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').with_context(|| {
            format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                idx + 1
            )
        })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            bail!(
                "{}:{}: unknown key {key:?} (known: {})",
                path.display(),
                idx + 1,
                CONFIG_KEYS.join(", ")
            );
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_schemes(text: &str) -> Result<Vec<Scheme>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tag| {
            Scheme::parse(tag).with_context(|| {
                format!("unknown scheme {tag:?} (use ofdm, fast_ofdm, stc_ofdm, dual_stc)")
            })
        })
        .collect()
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("grid {text:?} must be start:step:stop");
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad number {p:?}"))
            })
            .collect::<Result<_>>()?;
        Ok(harness::ebn0_grid(nums[0], nums[1], nums[2]))
    } else {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .with_context(|| format!("bad number {t:?}"))
            })
            .collect()
    }
}

fn parse_mu_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad mu value {t:?}"))
        })
        .collect()
}

fn resolve(args: &SweepArgs) -> Result<Resolved> {
    let file = args
        .config
        .as_deref()
        .map(load_config)
        .transpose()?
        .unwrap_or_default();
    let mut sweep = SweepConfig::default();

    if let Some(text) = args
        .schemes
        .clone()
        .or_else(|| file.get("schemes").cloned())
    {
        sweep.schemes = parse_schemes(&text)?;
    }
    if let Some(text) = args
        .ebn0_range
        .clone()
        .or_else(|| file.get("ebn0-range").cloned())
    {
        sweep.ebn0_db = parse_grid(&text)?;
    }
    if let Some(n) = args.n_loops {
        sweep.n_loops = n;
    } else if let Some(text) = file.get("n-loops") {
        sweep.n_loops = text
            .parse()
            .with_context(|| format!("bad n-loops {text:?}"))?;
    }
    if let Some(n) = args.n_symbols {
        sweep.n_symbols = n;
    } else if let Some(text) = file.get("n-symbols") {
        sweep.n_symbols = text
            .parse()
            .with_context(|| format!("bad n-symbols {text:?}"))?;
    }
    if let Some(mu) = args.mu {
        sweep.mu = mu;
    } else if let Some(text) = file.get("mu") {
        sweep.mu = text.parse().with_context(|| format!("bad mu {text:?}"))?;
    }
    if let Some(text) = args
        .mu_values
        .clone()
        .or_else(|| file.get("mu-values").cloned())
    {
        sweep.mu_values = parse_mu_values(&text)?;
    }
    if let Some(seed) = args.seed {
        sweep.seed = seed;
    } else if let Some(text) = file.get("seed") {
        sweep.seed = text.parse().with_context(|| format!("bad seed {text:?}"))?;
    }
    sweep.validate()?;

    let out = args
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    fs::create_dir_all(&out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    Ok(Resolved { sweep, out })
}

fn fmt_f64s(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn manifest_entries(command: &str, r: &Resolved) -> Vec<(&'static str, String)> {
    vec![
        ("command", command.to_string()),
        (
            "schemes",
            r.sweep
                .schemes
                .iter()
                .map(|s| s.tag().to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("ebn0-range", fmt_f64s(&r.sweep.ebn0_db)),
        ("n-loops", r.sweep.n_loops.to_string()),
        ("n-symbols", r.sweep.n_symbols.to_string()),
        ("mu", r.sweep.mu.to_string()),
        ("mu-values", fmt_f64s(&r.sweep.mu_values)),
        ("seed", r.sweep.seed.to_string()),
        ("out", r.out.display().to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
    ]
}

fn write_manifest(command: &str, r: &Resolved, extra: &[(&'static str, String)]) -> Result<()> {
    let mut entries = manifest_entries(command, r);
    entries.extend_from_slice(extra);
    let path = r.out.join(format!("{command}_manifest.txt"));
    harness::write_manifest(&path, &entries)?;
    Ok(())
}

fn run_ber(args: BerArgs) -> Result<()> {
    let r = resolve(&args.sweep)?;
    write_manifest("ber", &r, &[("deep", args.deep.to_string())])?;
    let csv_path = r.out.join("ber.csv");
    let mut csv =
        fs::File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    writeln!(csv, "{}", MetricRecord::CSV_HEADER)?;

    // Partial results survive an interrupted sweep: flush per point.
    let mut on_point = |rec: &MetricRecord| -> stc_ofdm::Result<()> {
        println!(
            "[ber] {} {:>5.1} dB: {:.4e} ({} errors / {} bits)",
            rec.scheme, rec.abscissa, rec.value, rec.errors, rec.trials
        );
        let line = rec.csv_line();
        let io_err = |source: std::io::Error| stc_ofdm::Error::Io {
            path: csv_path.clone(),
            source,
        };
        writeln!(csv, "{line}").map_err(io_err)?;
        csv.flush().map_err(io_err)
    };
    harness::run_ber_sweep_with(&r.sweep, &mut on_point)?;

    if args.deep {
        let cfg = SchemeConfig::defaults(Scheme::Ofdm).with_mu(r.sweep.mu);
        let bits_per_loop = r.sweep.n_symbols * cfg.bits_per_frame();
        let loops = 100_000_000usize.div_ceil(bits_per_loop);
        println!("[ber] deep confirmation: {loops} loops at 10.5 dB on the baseline scheme");
        let mut rec =
            harness::ber_point(&cfg, 10.5, loops, r.sweep.n_symbols, r.sweep.seed, 1 << 32)?;
        rec.experiment = "ber_deep".into();
        on_point(&rec)?;
    }
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn run_papr(args: SweepArgs) -> Result<()> {
    let r = resolve(&args)?;
    write_manifest("papr", &r, &[])?;
    let records = harness::run_papr_experiment(&r.sweep)?;
    for rec in records
        .iter()
        .filter(|r| r.experiment == "papr_crossing_1e3")
    {
        println!(
            "[papr] {}: 1e-3 crossing {:.3} dB over {} frames",
            rec.scheme, rec.value, rec.trials
        );
    }
    let path = r.out.join("papr.csv");
    harness::write_records_csv(&path, &records)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_psd(args: SweepArgs) -> Result<()> {
    let r = resolve(&args)?;
    write_manifest("psd", &r, &[])?;
    let (records, spectra) = harness::run_psd_experiment(&r.sweep)?;
    for rec in &records {
        println!(
            "[psd] {}: 99%-power occupied bandwidth {:.1} kHz",
            rec.scheme,
            rec.value / 1e3
        );
    }
    for (scheme, psd) in &spectra {
        let path = r.out.join(format!("psd_{}.csv", scheme.tag()));
        harness::write_psd_csv(&path, psd)?;
        println!("wrote {}", path.display());
    }
    let path = r.out.join("psd.csv");
    harness::write_records_csv(&path, &records)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_mulaw(args: SweepArgs) -> Result<()> {
    let r = resolve(&args)?;
    write_manifest("mulaw", &r, &[])?;
    let records = harness::run_mulaw_tradeoff(&r.sweep)?;
    for mu in &r.sweep.mu_values {
        let find = |experiment: &str| {
            records
                .iter()
                .find(|rec| rec.experiment == experiment && rec.abscissa == *mu)
                .map(|rec| rec.value)
                .unwrap_or(f64::NAN)
        };
        println!(
            "[mulaw] mu={mu}: papr crossing {:.3} dB (improvement {:.3} dB), \
             1e-4 ber crossing {:.3} dB (degradation {:.3} dB)",
            find("mulaw_papr"),
            find("mulaw_improvement"),
            find("mulaw_ber_crossing"),
            find("mulaw_ber_degradation"),
        );
    }
    let path = r.out.join("mulaw.csv");
    harness::write_records_csv(&path, &records)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_complexity(args: ComplexityArgs) -> Result<()> {
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .with_context(|| format!("bad size {t:?}"))
        })
        .collect::<Result<_>>()?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    let records = harness::emit_complexity_table(&sizes)?;
    println!(
        "{:>16} {:>6} {:>16} {:>12}",
        "scheme", "n", "multiplications", "additions"
    );
    for pair in records.chunks_exact(2) {
        println!(
            "{:>16} {:>6} {:>16} {:>12}",
            pair[0].scheme, pair[0].abscissa as usize, pair[0].value as u64, pair[1].value as u64
        );
    }
    let path = args.out.join("complexity.csv");
    harness::write_records_csv(&path, &records)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn received_name(input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "received".into());
    match input.extension() {
        Some(ext) => PathBuf::from(format!("{stem}_received.{}", ext.to_string_lossy())),
        None => PathBuf::from(format!("{stem}_received")),
    }
}

fn run_sendfile(args: SendfileArgs) -> Result<()> {
    let scheme = Scheme::parse(&args.scheme).with_context(|| {
        format!(
            "unknown scheme {:?} (use ofdm, fast_ofdm, stc_ofdm, dual_stc)",
            args.scheme
        )
    })?;
    let cfg = SchemeConfig::defaults(scheme);
    let want_inputs = if scheme == Scheme::DualStc { 2 } else { 1 };
    if args.inputs.len() != want_inputs {
        bail!(
            "{} carries {} input file(s); got {}",
            scheme.tag(),
            want_inputs,
            args.inputs.len()
        );
    }
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    let read = |path: &Path| -> Result<Vec<u8>> {
        fs::read(path).with_context(|| format!("reading input {}", path.display()))
    };

    let mut report = String::new();
    let mut describe =
        |input: &Path, outcome: &harness::TransferOutcome, out_path: &Path| -> Result<()> {
            let line = format!(
                "{}: {} bits in {} frames, {} bit errors (ber {:.3e}), byte-exact {} -> {}",
                input.display(),
                outcome.total_bits,
                outcome.frames,
                outcome.bit_errors,
                outcome.bit_errors as f64 / outcome.total_bits.max(1) as f64,
                outcome.byte_exact,
                out_path.display()
            );
            println!("[sendfile] {line}");
            report.push_str(&line);
            report.push('\n');
            fs::write(out_path, &outcome.decoded)
                .with_context(|| format!("writing {}", out_path.display()))?;
            Ok(())
        };

    if scheme == Scheme::DualStc {
        let (a, b) = (read(&args.inputs[0])?, read(&args.inputs[1])?);
        if a.len() != b.len() {
            println!(
                "[sendfile] note: inputs differ in size ({} vs {} bytes); the shorter stream is zero-padded to share {} frames",
                a.len(),
                b.len(),
                a.len().max(b.len()).div_ceil(cfg.bits_per_frame() / 16)
            );
        }
        let (ra, rb) = harness::send_bytes_pair(&cfg, args.ebn0, args.seed, &a, &b)?;
        describe(
            &args.inputs[0],
            &ra,
            &args.out.join(received_name(&args.inputs[0])),
        )?;
        describe(
            &args.inputs[1],
            &rb,
            &args.out.join(received_name(&args.inputs[1])),
        )?;
    } else {
        let data = read(&args.inputs[0])?;
        let outcome = harness::send_bytes(&cfg, args.ebn0, args.seed, &data)?;
        describe(
            &args.inputs[0],
            &outcome,
            &args.out.join(received_name(&args.inputs[0])),
        )?;
    }

    let report_path = args.out.join("sendfile_report.txt");
    fs::write(&report_path, report)
        .with_context(|| format!("writing {}", report_path.display()))?;
    println!("wrote {}", report_path.display());
    Ok(())
}
