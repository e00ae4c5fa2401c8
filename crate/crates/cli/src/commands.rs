use std::path::{Path, PathBuf};

use haarcorner::bayes_shrink::{BandRecord, DEFAULT_LEVELS};
use haarcorner::harris::{DEFAULT_K, DEFAULT_RELATIVE_THRESHOLD as HARRIS_REL};
use haarcorner::metrics::quality;
use haarcorner::moravec::DEFAULT_RELATIVE_THRESHOLD as MORAVEC_REL;
use haarcorner::{
    decompose, denoise, detect_harris, detect_moravec, load_image, overlay_corners, CornerSet,
    CornerThreshold, Diagnostics, HarrisParams, Image, MoravecParams, NoiseModel, ThresholdMode,
    WindowKind,
};
use serde::Serialize;

use crate::args::{BandsArgs, Common, CompareArgs, DenoiseArgs, DetectArgs, Emit, Method, Window};
use crate::config::{enum_value, from_str, FileConfig};
use crate::error::{CliError, Context};
use crate::output::{dump_bands, ensure_dir, write_atomic, write_json, write_png_file, write_view};
use crate::record::{finite, write_csv, RunRecord};

const DEFAULT_SEED: u64 = 0;
const DEFAULT_COMPARE_LEVELS: [usize; 2] = [1, 2];

struct Paths {
    input: PathBuf,
    out_dir: PathBuf,
}

fn paths(common: &Common, file: &FileConfig) -> Result<Paths, CliError> {
    let input = file
        .pick_path(common.input.clone(), "in")?
        .ok_or_else(|| CliError::Usage("missing --in".into()))?;
    let out_dir = file
        .pick_path(common.out_dir.clone(), "out-dir")?
        .unwrap_or_else(|| PathBuf::from("."));
    Ok(Paths { input, out_dir })
}

fn load(path: &Path) -> Result<Image, CliError> {
    load_image(path).context(|| format!("loading {}", path.display()))
}

fn db(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4}")
    } else {
        "inf".into()
    }
}

/// Noise is added on the unit scale; the result is stored as 8-bit, and the
/// 8-bit version is what every later stage sees.
pub fn make_noisy(clean: &Image, model: &NoiseModel, seed: u64) -> Result<Image, CliError> {
    Ok(model
        .apply(&clean.to_unit_scale(), seed)
        .context(|| format!("adding {model}"))?
        .from_unit_scale()
        .quantized())
}

/// Denoises on the unit scale and returns the 8-bit result.
pub fn restore(
    noisy: &Image,
    levels: usize,
    mode: ThresholdMode,
) -> Result<(Image, Diagnostics), CliError> {
    let (out, diag) = denoise(&noisy.to_unit_scale(), levels, mode)
        .context(|| format!("denoising at {levels} levels"))?;
    Ok((out.from_unit_scale().quantized(), diag))
}

fn usage(e: haarcorner::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn moravec_params(
    window_radius: Option<usize>,
    nms_radius: Option<usize>,
    rel: Option<f64>,
    abs: Option<f64>,
) -> Result<MoravecParams<f64>, CliError> {
    let threshold = match (rel, abs) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "relative and absolute moravec thresholds are exclusive".into(),
            ))
        }
        (_, Some(a)) => CornerThreshold::Absolute(a),
        (r, None) => CornerThreshold::Relative(r.unwrap_or(MORAVEC_REL)),
    };
    let defaults = MoravecParams::<f64>::default();
    let p = MoravecParams {
        window_radius: window_radius.unwrap_or(defaults.window_radius),
        threshold,
        nms_radius: nms_radius.unwrap_or(defaults.nms_radius),
    };
    p.validate().map_err(usage)?;
    Ok(p)
}

fn harris_params(
    window_radius: Option<usize>,
    nms_radius: Option<usize>,
    rel: Option<f64>,
    k: Option<f64>,
    window: Option<Window>,
    sigma: Option<f64>,
) -> Result<HarrisParams<f64>, CliError> {
    let defaults = HarrisParams::<f64>::default();
    let window = match (window.unwrap_or(Window::Gaussian), sigma) {
        (Window::Box, Some(_)) => {
            return Err(CliError::Usage(
                "sigma only applies to the gaussian window".into(),
            ))
        }
        (Window::Box, None) => WindowKind::Box,
        (Window::Gaussian, s) => WindowKind::Gaussian {
            sigma: s.unwrap_or(1.0),
        },
    };
    let p = HarrisParams {
        k: k.unwrap_or(DEFAULT_K),
        window_radius: window_radius.unwrap_or(defaults.window_radius),
        window,
        rel_threshold: rel.unwrap_or(HARRIS_REL),
        nms_radius: nms_radius.unwrap_or(defaults.nms_radius),
    };
    p.validate().map_err(usage)?;
    Ok(p)
}

#[derive(Debug, Serialize)]
struct DenoiseReport<'a> {
    noise: String,
    seed: u64,
    levels: usize,
    mode: ThresholdMode,
    mse_noisy: f64,
    mse_denoised: f64,
    psnr_noisy: Option<f64>,
    psnr_denoised: Option<f64>,
    sigma_hat: f64,
    bands: &'a [BandRecord<f64>],
}

pub fn denoise_cmd(args: DenoiseArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let paths = paths(&args.common, &file)?;
    let model = file
        .pick(args.noise, "noise", from_str)?
        .unwrap_or_else(NoiseModel::gaussian);
    let seed = file
        .pick(args.seed, "seed", from_str)?
        .unwrap_or(DEFAULT_SEED);
    let levels = file
        .pick(args.levels, "levels", crate::args::parse_levels)?
        .unwrap_or(DEFAULT_LEVELS);
    let mode = file.pick(args.mode, "mode", from_str)?.unwrap_or_default();
    let dump = file.pick_path(args.dump_bands, "dump-bands")?;

    let clean = load(&paths.input)?;
    let noisy = make_noisy(&clean, &model, seed)?;
    let (restored, diag) = restore(&noisy, levels, mode)?;
    let q_noisy = quality(&clean, &noisy).context(|| "scoring noisy image".into())?;
    let q_denoised = quality(&clean, &restored).context(|| "scoring denoised image".into())?;

    ensure_dir(&paths.out_dir)?;
    write_png_file(&paths.out_dir.join("noisy.png"), &noisy)?;
    write_png_file(&paths.out_dir.join("denoised.png"), &restored)?;
    let report = DenoiseReport {
        noise: model.to_string(),
        seed,
        levels,
        mode,
        mse_noisy: q_noisy.mse,
        mse_denoised: q_denoised.mse,
        psnr_noisy: finite(q_noisy.psnr_db),
        psnr_denoised: finite(q_denoised.psnr_db),
        sigma_hat: diag.sigma_noise,
        bands: &diag.bands,
    };
    write_json(&paths.out_dir.join("diagnostics.json"), &report)?;
    if let Some(dir) = dump {
        let pyr = decompose(noisy.to_unit_scale().matrix(), levels)
            .context(|| "decomposing noisy image".into())?;
        dump_bands(&dir, &pyr)?;
    }
    println!(
        "psnr_noisy {} dB  psnr_denoised {} dB",
        db(q_noisy.psnr_db),
        db(q_denoised.psnr_db)
    );
    Ok(())
}

pub fn detect_cmd(args: DetectArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let paths = paths(&args.common, &file)?;
    let method = file
        .pick(args.method, "method", enum_value::<Method>)?
        .ok_or_else(|| CliError::Usage("missing --method (moravec or harris)".into()))?;
    let window_radius = file.pick(args.window_radius, "window-radius", from_str)?;
    let nms_radius = file.pick(args.nms_radius, "nms-radius", from_str)?;
    let rel = file.pick(args.threshold_rel, "threshold-rel", from_str)?;
    let abs = file.pick(args.threshold_abs, "threshold-abs", from_str)?;
    let k = file.pick(args.k, "k", from_str)?;
    let window = file.pick(args.window, "window", enum_value::<Window>)?;
    let sigma = file.pick(args.sigma, "sigma", from_str)?;
    let dump_response = file.pick_flag(args.dump_response, "dump-response")?;

    let img = load(&paths.input)?;
    let (corners, response) = match method {
        Method::Moravec => {
            if k.is_some() || window.is_some() || sigma.is_some() {
                return Err(CliError::Usage(
                    "k, window and sigma apply to harris only".into(),
                ));
            }
            let p = moravec_params(window_radius, nms_radius, rel, abs)?;
            detect_moravec(&img, &p).context(|| "moravec".into())?
        }
        Method::Harris => {
            if abs.is_some() {
                return Err(CliError::Usage(
                    "absolute threshold applies to moravec only".into(),
                ));
            }
            let p = harris_params(window_radius, nms_radius, rel, k, window, sigma)?;
            detect_harris(&img, &p).context(|| "harris".into())?
        }
    };

    ensure_dir(&paths.out_dir)?;
    write_atomic(
        &paths.out_dir.join("corners.csv"),
        corners.to_csv().as_bytes(),
    )?;
    write_png_file(
        &paths.out_dir.join("overlay.png"),
        &overlay_corners(&img, &corners),
    )?;
    if dump_response {
        write_view(&paths.out_dir.join("response.pgm"), &response.values)?;
    }
    println!("{} corners: {}", corners.source(), corners.len());
    Ok(())
}

pub fn bands_cmd(args: BandsArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let paths = paths(&args.common, &file)?;
    let levels = file
        .pick(args.levels, "levels", crate::args::parse_levels)?
        .unwrap_or(DEFAULT_LEVELS);
    let noise = file.pick(args.noise, "noise", from_str::<NoiseModel>)?;
    let seed = file
        .pick(args.seed, "seed", from_str)?
        .unwrap_or(DEFAULT_SEED);

    let mut img = load(&paths.input)?;
    if let Some(model) = noise {
        img = make_noisy(&img, &model, seed)?;
    }
    let pyr = decompose(img.to_unit_scale().matrix(), levels)
        .context(|| format!("decomposing at {levels} levels"))?;
    let written = dump_bands(&paths.out_dir, &pyr)?;
    println!(
        "{} bands written to {}",
        written.len(),
        paths.out_dir.display()
    );
    Ok(())
}

struct Detectors {
    moravec: MoravecParams<f64>,
    harris: HarrisParams<f64>,
}

impl Detectors {
    /// Runs both detectors and writes their overlays as `{stem}_moravec.png`
    /// and `{stem}_harris.png`.
    fn run(&self, img: &Image, dir: &Path, stem: &str) -> Result<(CornerSet, CornerSet), CliError> {
        let (m, _) = detect_moravec(img, &self.moravec).context(|| format!("moravec on {stem}"))?;
        let (h, _) = detect_harris(img, &self.harris).context(|| format!("harris on {stem}"))?;
        write_png_file(
            &dir.join(format!("{stem}_moravec.png")),
            &overlay_corners(img, &m),
        )?;
        write_png_file(
            &dir.join(format!("{stem}_harris.png")),
            &overlay_corners(img, &h),
        )?;
        Ok((m, h))
    }
}

fn noise_kind(model: &NoiseModel) -> &'static str {
    match model {
        NoiseModel::Gaussian { .. } => "gaussian",
        NoiseModel::SaltPepper { .. } => "saltpepper",
        NoiseModel::Speckle { .. } => "speckle",
    }
}

fn reject_duplicates<T: PartialEq + std::fmt::Display>(
    items: &[T],
    what: &str,
) -> Result<(), CliError> {
    for (i, a) in items.iter().enumerate() {
        if items[..i].contains(a) {
            return Err(CliError::Usage(format!("{what} {a} listed twice")));
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct CompareReport<'a> {
    input: String,
    seed: u64,
    mode: ThresholdMode,
    records: &'a [RunRecord],
}

pub fn compare_cmd(args: CompareArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let paths = paths(&args.common, &file)?;
    let mut noises = file.pick_list(args.noise, "noise", from_str::<NoiseModel>)?;
    if noises.is_empty() {
        noises.push(NoiseModel::gaussian());
    }
    let mut levels = file.pick_list(args.levels, "levels", crate::args::parse_levels)?;
    if levels.is_empty() {
        levels.extend(DEFAULT_COMPARE_LEVELS);
    }
    reject_duplicates(&noises, "noise")?;
    reject_duplicates(&levels, "levels")?;
    let seed = file
        .pick(args.seed, "seed", from_str)?
        .unwrap_or(DEFAULT_SEED);
    let mode = file.pick(args.mode, "mode", from_str)?.unwrap_or_default();
    let emit = file
        .pick(args.emit, "emit", enum_value::<Emit>)?
        .unwrap_or(Emit::Both);
    let detectors = Detectors {
        moravec: moravec_params(
            file.pick(
                args.moravec_window_radius,
                "moravec-window-radius",
                from_str,
            )?,
            file.pick(args.moravec_nms_radius, "moravec-nms-radius", from_str)?,
            file.pick(
                args.moravec_threshold_rel,
                "moravec-threshold-rel",
                from_str,
            )?,
            file.pick(
                args.moravec_threshold_abs,
                "moravec-threshold-abs",
                from_str,
            )?,
        )?,
        harris: harris_params(
            file.pick(args.harris_window_radius, "harris-window-radius", from_str)?,
            file.pick(args.harris_nms_radius, "harris-nms-radius", from_str)?,
            file.pick(args.harris_threshold_rel, "harris-threshold-rel", from_str)?,
            file.pick(args.harris_k, "harris-k", from_str)?,
            file.pick(args.harris_window, "harris-window", enum_value::<Window>)?,
            file.pick(args.harris_sigma, "harris-sigma", from_str)?,
        )?,
    };

    let clean = load(&paths.input)?;
    ensure_dir(&paths.out_dir)?;
    let (m_clean, h_clean) = detectors.run(&clean, &paths.out_dir, "clean")?;

    let mut records = Vec::with_capacity(noises.len() * levels.len());
    for (i, model) in noises.iter().enumerate() {
        let cell_dir = paths
            .out_dir
            .join(format!("{:02}_{}", i + 1, noise_kind(model)));
        ensure_dir(&cell_dir)?;
        let noisy = make_noisy(&clean, model, seed)?;
        write_png_file(&cell_dir.join("noisy.png"), &noisy)?;
        let q_noisy = quality(&clean, &noisy).context(|| format!("scoring {model}"))?;
        let (m_noisy, h_noisy) = detectors.run(&noisy, &cell_dir, "noisy")?;
        for &n in &levels {
            let level_dir = cell_dir.join(format!("L{n}"));
            ensure_dir(&level_dir)?;
            let (restored, diag) = restore(&noisy, n, mode)?;
            write_png_file(&level_dir.join("denoised.png"), &restored)?;
            write_json(&level_dir.join("diagnostics.json"), &diag)?;
            let q =
                quality(&clean, &restored).context(|| format!("scoring {model} at {n} levels"))?;
            let (m_den, h_den) = detectors.run(&restored, &level_dir, "denoised")?;
            let r = RunRecord {
                noise: model.to_string(),
                seed,
                levels: n,
                mode,
                mse_noisy: q_noisy.mse,
                mse_denoised: q.mse,
                psnr_noisy: finite(q_noisy.psnr_db),
                psnr_denoised: finite(q.psnr_db),
                moravec_clean: m_clean.len(),
                moravec_noisy: m_noisy.len(),
                moravec_denoised: m_den.len(),
                harris_clean: h_clean.len(),
                harris_noisy: h_noisy.len(),
                harris_denoised: h_den.len(),
                sigma_hat: diag.sigma_noise,
            };
            println!(
                "{} L{}: psnr {} -> {} dB, moravec {}/{}/{}, harris {}/{}/{}",
                r.noise,
                n,
                db(q_noisy.psnr_db),
                db(q.psnr_db),
                r.moravec_clean,
                r.moravec_noisy,
                r.moravec_denoised,
                r.harris_clean,
                r.harris_noisy,
                r.harris_denoised
            );
            records.push(r);
        }
    }

    if matches!(emit, Emit::Csv | Emit::Both) {
        write_csv(&paths.out_dir.join("results.csv"), &records)?;
    }
    if matches!(emit, Emit::Json | Emit::Both) {
        let report = CompareReport {
            input: paths.input.display().to_string(),
            seed,
            mode,
            records: &records,
        };
        write_json(&paths.out_dir.join("results.json"), &report)?;
    }
    Ok(())
}
