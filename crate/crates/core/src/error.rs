use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the thermodynamics, sweep and magnetometry layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coupling J/k_B = {value} K is not finite or exceeds the cap of {cap} K")]
    CouplingOutOfRange { value: f64, cap: f64 },

    #[error("temperature must be finite and strictly positive, got {0} K")]
    InvalidTemperature(f64),

    #[error("Lande g-factor must be finite and strictly positive, got {0}")]
    InvalidGFactor(f64),

    #[error("|J/(k_B T)| = {ratio} exceeds the overflow cap of {cap}")]
    OverflowCap { ratio: f64, cap: f64 },

    #[error("t_hot must exceed t_cold (t_hot = {t_hot} K, t_cold = {t_cold} K)")]
    TemperatureOrder { t_hot: f64, t_cold: f64 },

    #[error("zero-width cycle: j_a and j_b are both {0} K")]
    ZeroWidthCycle(f64),

    #[error("efficiency is only defined in heat-engine mode (cycle runs as {0})")]
    NotHeatEngine(crate::cycle::OperationMode),

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),

    #[error("bridging angle {theta} deg outside the window ({min}, {max})")]
    AngleOutOfRange { theta: f64, min: f64, max: f64 },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("duplicate temperature {temperature} K (line {line})")]
    DuplicateTemperature { temperature: f64, line: u64 },

    #[error("dataset has {0} valid points, at least 5 are required")]
    DatasetTooSmall(usize),

    #[error("nothing to export: cell list is empty")]
    EmptyExport,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
