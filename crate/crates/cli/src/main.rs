//! `sfc`: batch conversion of WAV clips into space-filling-curve images, plus
//! reports on curve locality and convolution shift equivariance.

mod encode;
mod manifest;
mod mixup;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sfc_core::curves::{build_curve, CurveKind, CurveOrder};
use sfc_core::equivariance::{sweep_lemma, ValueKind, WITNESS_CSV_HEADER};
use sfc_core::imaging::{decode, import_raw, MixupParams};
use sfc_core::locality::{to_csv, to_text, worst_case_profile};
use sfc_core::signal::{save_wav, CenterParams};

use encode::{EncodeJob, OutputFormat, ShiftSpec};
use mixup::MixupJob;

const EXIT_INPUT: u8 = 1;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(name = "sfc", version, about = "Space-filling-curve audio images")]
struct Cli {
    /// Worker threads for directory conversion.
    #[arg(long, global = true, env = "SFC_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a WAV file, or every WAV in a directory, into curve images.
    Encode(EncodeArgs),
    /// Turn an .sfci image back into a 16-bit WAV.
    Decode {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mix the images listed in a manifest with seeded random partners.
    Mixup(MixupArgs),
    /// Dump the index-to-point table of a curve.
    CurveTable {
        #[arg(long, default_value = "z")]
        curve: CurveKind,
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Print the index grid instead of the table.
        #[arg(long)]
        grid: bool,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case and mean grid distance between indices a fixed gap apart.
    Locality {
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,4,16,64,256")]
        gaps: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "all")]
        curves: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check shift equivariance of strided convolution through each curve.
    /// Exits 3 unless the Z curve passes every check.
    VerifyLemma(LemmaArgs),
}

#[derive(Args)]
struct EncodeArgs {
    /// A .wav file or a directory of them.
    input: PathBuf,
    #[arg(long, default_value = "z")]
    curve: CurveKind,
    #[arg(long, default_value_t = 7)]
    order: u32,
    /// Center on the active region: window, sigma, threshold.
    #[arg(long, num_args = 0..=3, value_names = ["W", "SIGMA", "TH"])]
    center: Option<Vec<f64>>,
    /// Random shift: MAX samples (default a quarter of the clip) and SEED.
    #[arg(long, num_args = 0..=2, value_names = ["MAX", "SEED"])]
    shift: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Sfci)]
    format: OutputFormat,
    /// Output directory; the manifest is written here.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MixupArgs {
    manifest: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed mixing weight instead of a Beta(alpha, alpha) draw.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, value_delimiter = ',', default_value = "all")]
    curves: Vec<String>,
    #[arg(long, default_value = "2-4")]
    k_range: String,
    #[arg(long, default_value = "1-2")]
    l_range: String,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Real-valued inputs, compared with a relative tolerance.
    #[arg(long)]
    real: bool,
    /// Per-trial witness rows as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `"3"` or `"2-4"`, inclusive.
fn parse_range(s: &str) -> Result<Vec<u32>> {
    let (lo, hi) = match s.split_once('-') {
        Some((a, b)) => (a.trim().parse::<u32>()?, b.trim().parse::<u32>()?),
        None => {
            let v = s.trim().parse::<u32>()?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range {s}");
    }
    Ok((lo..=hi).collect())
}

fn parse_curves(names: &[String]) -> Result<Vec<CurveKind>> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(CurveKind::ALL.to_vec());
    }
    let mut kinds = Vec::new();
    for n in names {
        let k: CurveKind = n.parse()?;
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    Ok(kinds)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn center_params(values: &[f64]) -> Result<CenterParams> {
    match *values {
        [] => Ok(CenterParams::default()),
        [w, sigma, th] => {
            if w < 1.0 || w.fract() != 0.0 {
                bail!("center window must be a positive integer, got {w}");
            }
            Ok(CenterParams::new(w as usize, sigma, th)?)
        }
        _ => bail!("--center takes either no values or W SIGMA TH"),
    }
}

fn shift_spec(values: &[u64]) -> ShiftSpec {
    match *values {
        [] => ShiftSpec {
            max_shift: None,
            seed: 0,
        },
        [max] => ShiftSpec {
            max_shift: Some(max as usize),
            seed: 0,
        },
        [max, seed, ..] => ShiftSpec {
            max_shift: Some(max as usize),
            seed,
        },
    }
}

fn cmd_encode(args: EncodeArgs) -> Result<ExitCode> {
    let order = CurveOrder::new(args.order)?;
    let inputs = if args.input.is_dir() {
        encode::list_wavs(&args.input)?
    } else if args.input.is_file() {
        vec![args.input.clone()]
    } else {
        bail!("{} does not exist", args.input.display());
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut job = EncodeJob::new(args.curve, order, args.format, args.out.clone());
    job.center = args.center.as_deref().map(center_params).transpose()?;
    job.shift = args.shift.as_deref().map(shift_spec);

    let rows = job.run(&inputs);
    manifest::write(&args.out.join(manifest::FILE_NAME), &rows)?;
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    log::info!("encoded {} of {} files", rows.len() - failed, rows.len());
    if failed > 0 {
        eprintln!("{failed} of {} files failed; see the manifest", rows.len());
        return Ok(ExitCode::from(EXIT_INPUT));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode(input: &Path, out: &Path) -> Result<ExitCode> {
    let image = import_raw(input)?;
    save_wav(&decode(&image)?, out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mixup(args: MixupArgs) -> Result<ExitCode> {
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let job = MixupJob {
        params: MixupParams {
            alpha: args.alpha,
            seed: args.seed,
        },
        lambda: args.lambda,
        out_dir: args.out.clone(),
    };
    let rows = job.run(&args.manifest)?;
    manifest::write(&args.out.join(manifest::FILE_NAME), &rows)?;
    if rows.iter().any(|r| !r.is_ok()) {
        return Ok(ExitCode::from(EXIT_INPUT));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_curve_table(
    curve: CurveKind,
    order: u32,
    grid: bool,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let map = build_curve(curve, CurveOrder::new(order)?);
    if grid {
        print!("{}", map.render_indices());
    } else {
        for (t, p) in map.forward().iter().enumerate() {
            println!("{t} {} {}", p.x, p.y);
        }
    }
    if let Some(path) = out {
        let mut csv = String::from("t,x,y\n");
        for (t, p) in map.forward().iter().enumerate() {
            let _ = writeln!(csv, "{t},{},{}", p.x, p.y);
        }
        write_file(path, &csv)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_locality(
    order: u32,
    gaps: &[usize],
    curves: &[String],
    out: Option<&Path>,
) -> Result<ExitCode> {
    let order = CurveOrder::new(order)?;
    let reports = parse_curves(curves)?
        .into_iter()
        .map(|kind| worst_case_profile(&build_curve(kind, order), gaps))
        .collect::<Result<Vec<_>, _>>()?;
    if reports.iter().any(|r| !r.exhaustive) {
        println!("(pairs subsampled for k = {order})");
    }
    print!("{}", to_text(&reports));
    if let Some(path) = out {
        write_file(path, &to_csv(&reports))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_lemma(args: LemmaArgs) -> Result<ExitCode> {
    let mut kinds = parse_curves(&args.curves)?;
    // the exit status is decided by Z, so it always runs
    if !kinds.contains(&CurveKind::Z) {
        kinds.insert(0, CurveKind::Z);
    }
    let ks = parse_range(&args.k_range)?;
    let ls = parse_range(&args.l_range)?;
    if !ks.iter().any(|&k| ls.iter().any(|&l| l >= 1 && l < k)) {
        bail!(
            "no (k, l) pair with 1 <= l < k in {} x {}",
            args.k_range,
            args.l_range
        );
    }
    let values = if args.real {
        ValueKind::Real
    } else {
        ValueKind::Integer
    };
    let mut csv = format!("{WITNESS_CSV_HEADER}\n");
    let mut z_holds = true;
    for kind in kinds {
        let summary = sweep_lemma(kind, &ks, &ls, args.trials, args.seed, values)?;
        print!("{}", summary.to_text());
        if let Some(w) = summary.first_failure() {
            println!("  first witness: {}", w.csv_row());
        }
        if kind == CurveKind::Z {
            z_holds = summary.all_hold();
        }
        csv.extend(summary.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
    }
    if let Some(path) = &args.out {
        write_file(path, &csv)?;
    }
    if z_holds {
        println!("z: equivariant in every trial");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("z: equivariance FAILED");
        Ok(ExitCode::from(EXIT_VERIFICATION))
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Decode { input, out } => cmd_decode(&input, &out),
        Command::Mixup(args) => cmd_mixup(args),
        Command::CurveTable {
            curve,
            order,
            grid,
            out,
        } => cmd_curve_table(curve, order, grid, out.as_deref()),
        Command::Locality {
            order,
            gaps,
            curves,
            out,
        } => cmd_locality(order, &gaps, &curves, out.as_deref()),
        Command::VerifyLemma(args) => cmd_verify_lemma(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
