use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::constants::kelvin_to_ev;
use crate::cycle::{
    assemble_ledger, carnot_efficiency, mode_of, CycleSpec, OperationMode, StrokeLedger,
};
use crate::error::{Error, Result};
use crate::phasemap::{fmt_f64, linspace};
use crate::substance::Coupling;

/// One hot-bath temperature on an engine curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnginePoint {
    pub t_hot: f64,
    pub ledger: StrokeLedger,
    pub mode: OperationMode,
    /// `W / Q_in`; absent outside heat-engine mode.
    pub eta: Option<f64>,
    pub eta_carnot: f64,
}

pub const ENGINE_CURVE_COLUMNS: [&str; 9] = [
    "T_h_K",
    "Q_AB_eV",
    "Q_BC_eV",
    "Q_CD_eV",
    "Q_DA_eV",
    "W_eV",
    "eta",
    "eta_carnot",
    "mode",
];

/// `steps` hot temperatures evenly spaced over `[th_min, th_max]`.
pub fn hot_axis(th_min: f64, th_max: f64, steps: usize) -> Vec<f64> {
    linspace(th_min, th_max, steps)
}

pub fn engine_curve(
    j_a: Coupling,
    j_b: Coupling,
    t_cold: f64,
    t_hot_axis: &[f64],
) -> Result<Vec<EnginePoint>> {
    t_hot_axis
        .iter()
        .map(|&t_hot| {
            let spec = CycleSpec::new(j_a, j_b, t_hot, t_cold)?;
            let ledger = assemble_ledger(&spec);
            let mode = mode_of(&ledger);
            let eta = (mode == OperationMode::HeatEngine).then(|| ledger.work / ledger.q_in);
            Ok(EnginePoint {
                t_hot,
                ledger,
                mode,
                eta,
                eta_carnot: carnot_efficiency(t_hot, t_cold)?,
            })
        })
        .collect()
}

/// Energies converted to eV; `eta` is left empty outside heat-engine mode.
pub fn write_engine_curve_csv<W: Write>(points: &[EnginePoint], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(ENGINE_CURVE_COLUMNS)?;
    for p in points {
        let l = &p.ledger;
        let ev = |v: f64| fmt_f64(kelvin_to_ev(v));
        w.write_record([
            fmt_f64(p.t_hot),
            ev(l.q_ab),
            ev(l.q_bc),
            ev(l.q_cd),
            ev(l.q_da),
            ev(l.work),
            p.eta.map(fmt_f64).unwrap_or_default(),
            fmt_f64(p.eta_carnot),
            p.mode.token().to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))
}
