use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasemap::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SusceptibilityPoint {
    /// Kelvin.
    pub temperature: f64,
    /// Molar susceptibility, emu/mol.
    pub chi: f64,
}

/// A chi(T) series sorted by strictly increasing temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusceptibilityDataset {
    points: Vec<SusceptibilityPoint>,
    pressure_gpa: Option<f64>,
    label: String,
}

pub const MIN_POINTS: usize = 5;

impl SusceptibilityDataset {
    pub fn new(
        points: Vec<SusceptibilityPoint>,
        pressure_gpa: Option<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let lined = points
            .into_iter()
            .enumerate()
            .map(|(k, p)| (k as u64 + 1, p))
            .collect();
        Self::from_lined(lined, pressure_gpa, label.into())
    }

    fn from_lined(
        mut lined: Vec<(u64, SusceptibilityPoint)>,
        pressure_gpa: Option<f64>,
        label: String,
    ) -> Result<Self> {
        for (line, p) in &lined {
            check_point(*line, p)?;
        }
        lined.sort_by(|a, b| a.1.temperature.total_cmp(&b.1.temperature));
        for w in lined.windows(2) {
            if w[0].1.temperature == w[1].1.temperature {
                return Err(Error::DuplicateTemperature {
                    temperature: w[1].1.temperature,
                    line: w[0].0.max(w[1].0),
                });
            }
        }
        if lined.len() < MIN_POINTS {
            return Err(Error::DatasetTooSmall(lined.len()));
        }
        Ok(SusceptibilityDataset {
            points: lined.into_iter().map(|(_, p)| p).collect(),
            pressure_gpa,
            label,
        })
    }

    pub fn points(&self) -> &[SusceptibilityPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pressure_gpa(&self) -> Option<f64> {
        self.pressure_gpa
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same temperatures with every chi multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| SusceptibilityPoint {
                temperature: p.temperature,
                chi: p.chi * factor,
            })
            .collect();
        Self::new(points, self.pressure_gpa, self.label.clone())
    }

    /// Writes the dataset in the format accepted by [`ingest_csv`].
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        if !self.label.is_empty() {
            writeln!(out, "# label: {}", self.label)?;
        }
        if let Some(p) = self.pressure_gpa {
            writeln!(out, "# pressure_GPa: {p}")?;
        }
        writeln!(out, "T_K,chi_emu_mol")?;
        for p in &self.points {
            writeln!(out, "{},{}", fmt_f64(p.temperature), fmt_f64(p.chi))?;
        }
        Ok(())
    }
}

fn check_point(line: u64, p: &SusceptibilityPoint) -> Result<()> {
    if !(p.temperature.is_finite() && p.temperature > 0.0) {
        return Err(Error::Parse {
            line,
            message: format!("temperature must be positive, got {}", p.temperature),
        });
    }
    if !(p.chi.is_finite() && p.chi > 0.0) {
        return Err(Error::Parse {
            line,
            message: format!("chi must be positive, got {}", p.chi),
        });
    }
    Ok(())
}

/// Reads a `T_K,chi_emu_mol` CSV. Extra columns are ignored; `#` lines carry
/// `key: value` metadata (`pressure_GPa`, `label`).
pub fn ingest_csv<R: Read>(mut input: R) -> Result<SusceptibilityDataset> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|source| Error::Io {
        path: "<input>".into(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;

    let mut pressure_gpa = None;
    let mut label = String::new();
    for (k, raw) in text.lines().enumerate() {
        let Some(meta) = raw.trim_start().strip_prefix('#') else {
            continue;
        };
        let Some((key, value)) = meta.split_once(':').or_else(|| meta.split_once('=')) else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "pressure_GPa" | "pressure_gpa" => {
                pressure_gpa = Some(value.parse::<f64>().map_err(|e| Error::Parse {
                    line: k as u64 + 1,
                    message: format!("bad pressure_GPa `{value}`: {e}"),
                })?);
            }
            "label" => label = value.to_string(),
            _ => {}
        }
    }

    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let header_line = rdr.position().line().max(1);
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(t_col), Some(chi_col)) = (col("T_K"), col("chi_emu_mol")) else {
        return Err(Error::Parse {
            line: header_line,
            message: "expected header with columns `T_K,chi_emu_mol`".into(),
        });
    };

    let mut lined = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |k: usize, name: &str| -> Result<f64> {
            let raw = rec.get(k).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing column {name}"),
            })?;
            raw.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("cannot parse {name} value `{raw}`"),
            })
        };
        let point = SusceptibilityPoint {
            temperature: field(t_col, "T_K")?,
            chi: field(chi_col, "chi_emu_mol")?,
        };
        lined.push((line, point));
    }
    SusceptibilityDataset::from_lined(lined, pressure_gpa, label)
}
