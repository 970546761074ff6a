//! WebAssembly bindings behind the static demo in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function of the same
//! name prefixed with `compute_`, so the numerics can be tested natively.
//! Results cross the boundary as flat `Float64Array`/`Uint8Array` buffers.

use spin_stirling::constants::kelvin_to_ev;
use spin_stirling::magnetometry::{bleaney_bowers, engine_curve, hot_axis};
use spin_stirling::phasemap::{sweep_serial, Anchor, SweepGrid};
use spin_stirling::{
    assemble_ledger, carnot_efficiency, mode_of, Branch, Coupling, CycleSpec, OperationMode, Result,
};
use wasm_bindgen::prelude::*;

fn js(err: spin_stirling::Error) -> JsError {
    JsError::new(&err.to_string())
}

fn branch_of(negative: bool) -> Branch {
    if negative {
        Branch::BNegative
    } else {
        Branch::BPositive
    }
}

fn grid(
    negative: bool,
    jb_abs: f64,
    t_cold: f64,
    ratio: (f64, f64, usize),
    temp: (f64, usize),
) -> Result<SweepGrid> {
    let branch = branch_of(negative);
    let anchor = Anchor {
        j_b: Coupling::new(branch.sign() * jb_abs)?,
        t_cold,
    };
    SweepGrid::uniform(branch, anchor, ratio, temp)
}

/// Mode codes (see [`mode_token`]) row-major with the temperature ratio
/// outer, the first row at the smallest `T_h/T_c`.
pub fn compute_mode_map(
    negative: bool,
    jb_abs: f64,
    t_cold: f64,
    ratio: (f64, f64, usize),
    temp: (f64, usize),
) -> Result<Vec<u8>> {
    let grid = grid(negative, jb_abs, t_cold, ratio, temp)?;
    Ok(sweep_serial(&grid).iter().map(|c| c.mode.code()).collect())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn mode_map(
    negative: bool,
    jb_abs: f64,
    t_cold: f64,
    ratio_min: f64,
    ratio_max: f64,
    ratio_steps: usize,
    temp_ratio_max: f64,
    temp_steps: usize,
) -> std::result::Result<Vec<u8>, JsError> {
    compute_mode_map(
        negative,
        jb_abs,
        t_cold,
        (ratio_min, ratio_max, ratio_steps),
        (temp_ratio_max, temp_steps),
    )
    .map_err(js)
}

#[wasm_bindgen]
pub fn mode_token(code: u8) -> String {
    OperationMode::ALL
        .iter()
        .find(|m| m.code() == code)
        .map_or("unknown", |m| m.token())
        .to_string()
}

/// One cycle, as `[Q_AB, Q_BC, Q_CD, Q_DA, W, Q_in, Q_out]` in eV followed by
/// the mode code, `eta` (NaN outside heat-engine mode) and the Carnot bound.
pub fn compute_cycle(j_a: f64, j_b: f64, t_hot: f64, t_cold: f64) -> Result<Vec<f64>> {
    summary(&CycleSpec::from_kelvin(j_a, j_b, t_hot, t_cold)?)
}

fn summary(spec: &CycleSpec) -> Result<Vec<f64>> {
    let l = assemble_ledger(spec);
    let mode = mode_of(&l);
    let eta = if mode == OperationMode::HeatEngine {
        l.work / l.q_in
    } else {
        f64::NAN
    };
    let mut out: Vec<f64> = [l.q_ab, l.q_bc, l.q_cd, l.q_da, l.work, l.q_in, l.q_out]
        .into_iter()
        .map(kelvin_to_ev)
        .collect();
    out.extend([
        f64::from(mode.code()),
        eta,
        carnot_efficiency(spec.t_hot(), spec.t_cold())?,
    ]);
    Ok(out)
}

#[wasm_bindgen]
pub fn cycle(
    j_a: f64,
    j_b: f64,
    t_hot: f64,
    t_cold: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    compute_cycle(j_a, j_b, t_hot, t_cold).map_err(js)
}

/// Map cell lookup for click-to-inspect, same layout as [`compute_cycle`].
/// The zero-width cycle `J_A = J_B` moves no heat and reports zeros.
pub fn compute_cell(
    negative: bool,
    jb_abs: f64,
    t_cold: f64,
    coupling_ratio: f64,
    temp_ratio: f64,
) -> Result<Vec<f64>> {
    let single = grid(
        negative,
        jb_abs,
        t_cold,
        (coupling_ratio, coupling_ratio, 1),
        (temp_ratio, 1),
    )?;
    match single.cycle_at(coupling_ratio, temp_ratio) {
        Some(spec) => summary(&spec),
        None => {
            let mut zeros = vec![0.0; 7];
            let eta_c = carnot_efficiency(temp_ratio * t_cold, t_cold)?;
            zeros.extend([
                f64::from(OperationMode::CarnotDegenerate.code()),
                f64::NAN,
                eta_c,
            ]);
            Ok(zeros)
        }
    }
}

#[wasm_bindgen]
pub fn cell(
    negative: bool,
    jb_abs: f64,
    t_cold: f64,
    coupling_ratio: f64,
    temp_ratio: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    compute_cell(negative, jb_abs, t_cold, coupling_ratio, temp_ratio).map_err(js)
}

/// Engine curve flattened to rows of `[T_h, W_eV, Q_in_eV, eta, eta_C]`;
/// `eta` is NaN where the cycle is not a heat engine.
pub fn compute_engine_curve(
    j_a: f64,
    j_b: f64,
    t_cold: f64,
    th_min: f64,
    th_max: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    let points = engine_curve(
        Coupling::new(j_a)?,
        Coupling::new(j_b)?,
        t_cold,
        &hot_axis(th_min, th_max, steps),
    )?;
    Ok(points
        .iter()
        .flat_map(|p| {
            [
                p.t_hot,
                kelvin_to_ev(p.ledger.work),
                kelvin_to_ev(p.ledger.q_in),
                p.eta.unwrap_or(f64::NAN),
                p.eta_carnot,
            ]
        })
        .collect())
}

#[wasm_bindgen(js_name = engineCurve)]
pub fn engine_curve_js(
    j_a: f64,
    j_b: f64,
    t_cold: f64,
    th_min: f64,
    th_max: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    compute_engine_curve(j_a, j_b, t_cold, th_min, th_max, steps).map_err(js)
}

/// Bleaney-Bowers `chi(T)` in emu/mol on an even temperature grid, as rows of
/// `[T, chi, chi*T]`.
pub fn compute_susceptibility(
    j: f64,
    g: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    Coupling::new(j)?;
    if !(g.is_finite() && g > 0.0) {
        return Err(spin_stirling::Error::InvalidGFactor(g));
    }
    if !(t_min.is_finite() && t_min > 0.0) {
        return Err(spin_stirling::Error::InvalidTemperature(t_min));
    }
    if !(t_max.is_finite() && t_max >= t_min) {
        return Err(spin_stirling::Error::InvalidTemperature(t_max));
    }
    Ok(hot_axis(t_min, t_max, steps)
        .into_iter()
        .flat_map(|t| {
            let chi = bleaney_bowers(j, g, t);
            [t, chi, chi * t]
        })
        .collect())
}

#[wasm_bindgen]
pub fn susceptibility(
    j: f64,
    g: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    compute_susceptibility(j, g, t_min, t_max, steps).map_err(js)
}
