use std::fs;
use std::path::{Path, PathBuf};

use haarcorner::image::{normalized_view, write_pgm, write_png};
use haarcorner::matrix::Matrix;
use haarcorner::{wavelet::Pyramid, Image};

use crate::error::{CliError, Context};

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes through a sibling temp file and a rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Output(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_png_file(path: &Path, img: &Image) -> Result<(), CliError> {
    let bytes = write_png(img).context(|| format!("encoding {}", path.display()))?;
    write_atomic(path, &bytes)
}

pub fn write_view(path: &Path, m: &Matrix<f64>) -> Result<(), CliError> {
    let view = normalized_view(m).context(|| format!("normalizing {}", path.display()))?;
    let bytes = write_pgm(&view).context(|| format!("encoding {}", path.display()))?;
    write_atomic(path, &bytes)
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// One normalized PGM per band: `L{level}_{LH,HL,HH}.pgm` and `L{N}_LL.pgm`.
pub fn dump_bands(dir: &Path, pyr: &Pyramid<f64>) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(dir)?;
    let mut written = Vec::with_capacity(pyr.band_count());
    for (level, o, band) in pyr.detail_bands() {
        let path = dir.join(format!("L{level}_{o}.pgm"));
        write_view(&path, band)?;
        written.push(path);
    }
    let path = dir.join(format!("L{}_LL.pgm", pyr.levels()));
    write_view(&path, &pyr.ll_top)?;
    written.push(path);
    Ok(written)
}
