use std::path::Path;

use haarcorner::ThresholdMode;
use serde::Serialize;

use crate::error::CliError;
use crate::output::write_atomic;

pub const CSV_HEADER: [&str; 11] = [
    "noise",
    "levels",
    "psnr_noisy",
    "psnr_denoised",
    "moravec_clean",
    "moravec_noisy",
    "moravec_denoised",
    "harris_clean",
    "harris_noisy",
    "harris_denoised",
    "sigma_hat",
];

/// One cell of the noise x levels grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub noise: String,
    pub seed: u64,
    pub levels: usize,
    pub mode: ThresholdMode,
    pub mse_noisy: f64,
    pub mse_denoised: f64,
    /// `None` (JSON `null`) when the images are identical.
    pub psnr_noisy: Option<f64>,
    pub psnr_denoised: Option<f64>,
    pub moravec_clean: usize,
    pub moravec_noisy: usize,
    pub moravec_denoised: usize,
    pub harris_clean: usize,
    pub harris_noisy: usize,
    pub harris_denoised: usize,
    pub sigma_hat: f64,
}

pub fn finite(db: f64) -> Option<f64> {
    db.is_finite().then_some(db)
}

fn db_text(db: Option<f64>) -> String {
    db.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

impl RunRecord {
    fn csv_fields(&self) -> [String; 11] {
        [
            self.noise.clone(),
            self.levels.to_string(),
            db_text(self.psnr_noisy),
            db_text(self.psnr_denoised),
            self.moravec_clean.to_string(),
            self.moravec_noisy.to_string(),
            self.moravec_denoised.to_string(),
            self.harris_clean.to_string(),
            self.harris_noisy.to_string(),
            self.harris_denoised.to_string(),
            self.sigma_hat.to_string(),
        ]
    }
}

pub fn write_csv(path: &Path, records: &[RunRecord]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in records {
        w.write_record(r.csv_fields()).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    write_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> RunRecord {
        RunRecord {
            noise: "gaussian:mean=0,var=0.01".into(),
            seed: 7,
            levels: 2,
            mode: ThresholdMode::Soft,
            mse_noisy: 1.0,
            mse_denoised: 0.0,
            psnr_noisy: finite(48.13),
            psnr_denoised: finite(f64::INFINITY),
            moravec_clean: 1,
            moravec_noisy: 2,
            moravec_denoised: 3,
            harris_clean: 4,
            harris_noisy: 5,
            harris_denoised: 6,
            sigma_hat: 0.1,
        }
    }

    #[test]
    fn csv_quotes_noise_and_spells_inf() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_csv(&path, &[record()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "\"gaussian:mean=0,var=0.01\",2,48.13,inf,1,2,3,4,5,6,0.1"
        );
        assert!(lines.next().is_none());
    }

    #[test]
    fn json_uses_null_for_infinite_psnr() {
        let v = serde_json::to_value(record()).unwrap();
        assert!(v["psnr_denoised"].is_null());
        assert_eq!(v["psnr_noisy"], 48.13);
        assert_eq!(v["mode"], "soft");
    }
}
