use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use haarcorner::{NoiseModel, ThresholdMode};

#[derive(Debug, Parser)]
#[command(
    name = "haarcorner",
    version,
    about = "Haar/BayesShrink denoising and Moravec/Harris corner detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Add noise, denoise, write noisy.png, denoised.png and diagnostics.json.
    Denoise(DenoiseArgs),
    /// Detect corners, write corners.csv and overlay.png.
    Detect(DetectArgs),
    /// Run the noise x levels grid with both detectors, write results.csv/json.
    Compare(CompareArgs),
    /// Dump every wavelet band as a normalized PGM.
    Bands(BandsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Moravec,
    Harris,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Window {
    Box,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input image (binary PGM or 8-bit PNG).
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Directory for output files [default: .]
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// key = value file; flags given on the command line win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

pub fn parse_levels(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("levels must be >= 1".into()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("'{s}' is not a positive integer")),
    }
}

fn parse_noise(s: &str) -> Result<NoiseModel, String> {
    s.parse().map_err(|e: haarcorner::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<ThresholdMode, String> {
    s.parse().map_err(|e: haarcorner::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    #[command(flatten)]
    pub common: Common,
    /// Noise model, e.g. gaussian:mean=0,var=0.01 [default: gaussian]
    #[arg(long, value_parser = parse_noise)]
    pub noise: Option<NoiseModel>,
    /// Noise seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Decomposition depth [default: 2]
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<usize>,
    /// hard or soft [default: soft]
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<ThresholdMode>,
    /// Also write the noisy image's bands as normalized PGMs here.
    #[arg(long, value_name = "DIR")]
    pub dump_bands: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Half-width of the summation window [default: 1 moravec, 2 harris]
    #[arg(long)]
    pub window_radius: Option<usize>,
    /// Half-width of the suppression neighborhood [default: 1]
    #[arg(long)]
    pub nms_radius: Option<usize>,
    /// Fraction of the response maximum [default: 0.05 moravec, 0.01 harris]
    #[arg(long)]
    pub threshold_rel: Option<f64>,
    /// Absolute cornerness cut-off (moravec only)
    #[arg(long)]
    pub threshold_abs: Option<f64>,
    /// Harris sensitivity [default: 0.04]
    #[arg(long)]
    pub k: Option<f64>,
    /// Harris window weighting [default: gaussian]
    #[arg(long, value_enum)]
    pub window: Option<Window>,
    /// Harris Gaussian window sigma [default: 1]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Write the response map as response.pgm.
    #[arg(long)]
    pub dump_response: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Noise model; repeat for a grid [default: gaussian]
    #[arg(long, value_parser = parse_noise)]
    pub noise: Vec<NoiseModel>,
    /// Decomposition depth; repeat for a grid [default: 1 and 2]
    #[arg(long, value_parser = parse_levels)]
    pub levels: Vec<usize>,
    /// Noise seed, shared by every cell [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// hard or soft [default: soft]
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<ThresholdMode>,
    #[arg(long)]
    pub moravec_window_radius: Option<usize>,
    #[arg(long)]
    pub moravec_nms_radius: Option<usize>,
    #[arg(long)]
    pub moravec_threshold_rel: Option<f64>,
    #[arg(long)]
    pub moravec_threshold_abs: Option<f64>,
    #[arg(long)]
    pub harris_window_radius: Option<usize>,
    #[arg(long)]
    pub harris_nms_radius: Option<usize>,
    #[arg(long)]
    pub harris_threshold_rel: Option<f64>,
    #[arg(long)]
    pub harris_k: Option<f64>,
    #[arg(long, value_enum)]
    pub harris_window: Option<Window>,
    #[arg(long)]
    pub harris_sigma: Option<f64>,
    /// Result tables to write [default: both]
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Decomposition depth [default: 2]
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<usize>,
    /// Add noise before decomposing.
    #[arg(long, value_parser = parse_noise)]
    pub noise: Option<NoiseModel>,
    #[arg(long)]
    pub seed: Option<u64>,
}
