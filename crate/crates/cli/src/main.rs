use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use display_aging::aging::{age_image, build_operator, load_measurements, AgingMode, LuminanceDecayCurve, MeasurementSeries};
use display_aging::analysis::{aging_curve, delta_e_map, delta_e_stats, lifetime, render_heatmap, DeltaEStats};
use display_aging::readerstats::{analyze_study, load_scores};
use display_aging::{DriftSpec, SrgbImage};

#[derive(Parser)]
#[command(name = "display-aging", version, about = "Simulate display aging on sRGB images and analyze its effect")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render an image as an aged display would show it.
    Age(AgeArgs),
    /// Per-pixel CIEDE2000 map, heatmap and statistics between two images.
    Diff(DiffArgs),
    /// Hours until mean/max ΔE2000 reaches each tolerance.
    Lifetime(LifetimeArgs),
    /// Percent agreement, Wilson intervals and t-tests from reader scores.
    ReaderStats(ReaderStatsArgs),
    /// Write a synthetic measurement CSV.
    GenMeasurements(GenArgs),
}

#[derive(Args)]
struct DecayArg {
    /// Luminance decay anchors, one `hours fraction` pair per line
    /// [default: 0 1.0, 10000 0.67, 18000 0.40]
    #[arg(long, value_name = "FILE")]
    decay: Option<PathBuf>,
}

#[derive(Args)]
struct AgeArgs {
    /// Input PNG.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_name = "CSV")]
    measurements: PathBuf,
    #[arg(long, value_parser = parse_mode)]
    mode: AgingMode,
    #[arg(long)]
    hours: f64,
    #[command(flatten)]
    decay: DecayArg,
    /// Output PNG.
    #[arg(long, short)]
    out: PathBuf,
    /// Worker threads [default: all cores].
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct DiffArgs {
    /// Non-aged PNG.
    #[arg(long)]
    original: PathBuf,
    /// Aged PNG.
    #[arg(long)]
    aged: PathBuf,
    /// Output ΔE map in DEM1 format.
    #[arg(long, short)]
    out: PathBuf,
    /// Heatmap PNG [default: <out> with .png extension].
    #[arg(long)]
    heatmap: Option<PathBuf>,
    /// Statistics CSV [default: <out> with .csv extension].
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct LifetimeArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_name = "CSV")]
    measurements: PathBuf,
    #[command(flatten)]
    decay: DecayArg,
    /// ΔE2000 tolerances.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3.0, 5.0])]
    tolerances: Vec<f64>,
    /// Aging modes to evaluate.
    #[arg(long, value_delimiter = ',', value_parser = parse_mode, default_values = ["chroma", "chroma_luma"])]
    modes: Vec<AgingMode>,
    /// Explicit sample hours; overrides --step.
    #[arg(long, value_delimiter = ',')]
    sample_hours: Vec<f64>,
    /// Spacing of the sample grid over the measured range.
    #[arg(long, default_value_t = 250.0)]
    step: f64,
    /// Lifetime CSV [default: standard output].
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write the sampled aging curves as CSV.
    #[arg(long)]
    curve_out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ReaderStatsArgs {
    #[arg(long, value_name = "CSV")]
    scores: PathBuf,
    /// Significance level used to label test outcomes.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Report CSV; the text report always goes to standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 31)]
    count: usize,
    #[arg(long, default_value_t = 18_000.0)]
    duration: f64,
    #[arg(long, default_value_t = 350.0)]
    white_luminance: f64,
    /// Keep every chromaticity constant.
    #[arg(long)]
    zero_drift: bool,
    /// Half-width of uniform chromaticity jitter.
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: PathBuf,
}

fn parse_mode(s: &str) -> Result<AgingMode, String> {
    s.parse().map_err(|e: display_aging::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Age(a) => cmd_age(a),
        Command::Diff(a) => cmd_diff(a),
        Command::Lifetime(a) => cmd_lifetime(a),
        Command::ReaderStats(a) => cmd_reader_stats(a),
        Command::GenMeasurements(a) => cmd_gen_measurements(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read_series(path: &Path) -> Result<MeasurementSeries> {
    let file = fs::File::open(path).with_context(|| format!("--measurements {}", path.display()))?;
    Ok(load_measurements(file, &path.display().to_string())?)
}

fn read_decay(arg: &DecayArg) -> Result<LuminanceDecayCurve> {
    match &arg.decay {
        None => Ok(LuminanceDecayCurve::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("--decay {}", p.display()))?;
            Ok(LuminanceDecayCurve::parse(&text, &p.display().to_string())?)
        }
    }
}

fn read_image(flag: &str, path: &Path) -> Result<SrgbImage> {
    SrgbImage::load_png(path).with_context(|| format!("{flag} {}", path.display()))
}

fn write_file(flag: &str, path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("{flag} {}: cannot write", path.display()))
}

fn cmd_age(a: AgeArgs) -> Result<()> {
    if !(a.hours >= 0.0 && a.hours.is_finite()) {
        bail!("--hours must be a non-negative number, got {}", a.hours);
    }
    let img = read_image("--input", &a.input)?;
    let series = read_series(&a.measurements)?;
    let curve = read_decay(&a.decay)?;
    if a.mode == AgingMode::None {
        fs::copy(&a.input, &a.out).with_context(|| format!("--out {}: cannot write", a.out.display()))?;
        return Ok(());
    }
    let op = build_operator(&series, a.hours, &curve, a.mode).context("building the aging operator")?;
    let aged = age_image(&img, &op, a.workers)?;
    write_file("--out", &a.out, &aged.encode_png()?)
}

fn cmd_diff(a: DiffArgs) -> Result<()> {
    let original = read_image("--original", &a.original)?;
    let aged = read_image("--aged", &a.aged)?;
    let map = delta_e_map(&original, &aged, a.workers)
        .with_context(|| format!("comparing {} with {}", a.original.display(), a.aged.display()))?
        .to_f32_precision();
    let stats = delta_e_stats(&map)?;

    let heatmap = a.heatmap.unwrap_or_else(|| a.out.with_extension("png"));
    let stats_path = a.stats.unwrap_or_else(|| a.out.with_extension("csv"));
    write_file("--out", &a.out, &map.to_dem1_bytes())?;
    write_file("--heatmap", &heatmap, &render_heatmap(&map).encode_png()?)?;
    let csv = format!("{}\n{}\n", DeltaEStats::CSV_HEADER, stats.to_csv_row());
    write_file("--stats", &stats_path, csv.as_bytes())?;
    print!("{csv}");
    Ok(())
}

fn sample_grid(series: &MeasurementSeries, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        bail!("--step must be positive, got {step}");
    }
    let (first, last) = (series.first_hours(), series.last_hours());
    let n = ((last - first) / step).ceil() as usize;
    let mut grid: Vec<f64> = (0..n).map(|k| first + step * k as f64).collect();
    grid.push(last);
    Ok(grid)
}

fn cmd_lifetime(a: LifetimeArgs) -> Result<()> {
    if let Some(t) = a.tolerances.iter().find(|t| !(**t > 0.0)) {
        bail!("--tolerances must all be positive, got {t}");
    }
    let img = read_image("--input", &a.input)?;
    let series = read_series(&a.measurements)?;
    let curve = read_decay(&a.decay)?;
    let hours = if a.sample_hours.is_empty() {
        sample_grid(&series, a.step)?
    } else {
        a.sample_hours.clone()
    };

    let mut report = String::from("mode,statistic,tolerance,lifetime_hours\n");
    let mut curves = String::from("mode,hours,mean,std,max,min,ci_low,ci_high\n");
    for &mode in &a.modes {
        let c = aging_curve(&img, &series, &curve, mode, &hours, a.workers)
            .with_context(|| format!("--sample-hours / mode {mode}"))?;
        for (h, s) in c.samples() {
            curves.push_str(&format!("{mode},{h},{}\n", s.to_csv_row()));
        }
        for e in lifetime(&c, &a.tolerances).entries {
            report.push_str(&format!("{mode},{},{},{}\n", e.statistic, e.tolerance, e.lifetime));
        }
    }
    if let Some(p) = &a.curve_out {
        write_file("--curve-out", p, curves.as_bytes())?;
    }
    match &a.out {
        Some(p) => write_file("--out", p, report.as_bytes()),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn cmd_reader_stats(a: ReaderStatsArgs) -> Result<()> {
    let file = fs::File::open(&a.scores).with_context(|| format!("--scores {}", a.scores.display()))?;
    let records = load_scores(file, &a.scores.display().to_string())?;
    let report = analyze_study(&records, a.alpha)?;
    if let Some(p) = &a.out {
        write_file("--out", p, report.to_csv().as_bytes())?;
    }
    print!("{}", report.to_text());
    Ok(())
}

fn cmd_gen_measurements(a: GenArgs) -> Result<()> {
    let base = if a.zero_drift { DriftSpec::zero_drift() } else { DriftSpec::default() };
    let spec = DriftSpec {
        count: a.count,
        duration_hours: a.duration,
        white_luminance: a.white_luminance,
        jitter: a.jitter,
        seed: a.seed,
        ..base
    };
    let series = spec.generate().context("invalid drift spec (--count/--duration/--jitter)")?;
    write_file("--out", &a.out, series.to_csv().as_bytes())
}
