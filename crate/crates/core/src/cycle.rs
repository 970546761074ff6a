//! Four-stroke quantum Stirling cycle: A -> B isothermal at `T_h` (J_A -> J_B),
//! B -> C isochoric cooling at J_B, C -> D isothermal at `T_c` (J_B -> J_A),
//! D -> A isochoric heating at J_A.
//!
//! Sign convention: a heat is positive when absorbed by the working substance
//! and work is positive when done by it, so a closed cycle obeys `W = sum Q`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::OVERFLOW_CAP;
use crate::error::{Error, Result};
use crate::substance::{
    dimensionless_susceptibility, entropy, entropy_difference, log_partition_difference_excess,
    occupation_difference, Coupling, ThermalPoint,
};

/// Couplings and bath temperatures of one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    j_a: Coupling,
    j_b: Coupling,
    t_hot: f64,
    t_cold: f64,
}

impl CycleSpec {
    /// Requires `t_hot > t_cold > 0` and `j_a != j_b`.
    pub fn new(j_a: Coupling, j_b: Coupling, t_hot: f64, t_cold: f64) -> Result<Self> {
        let spec = Self::new_limit(j_a, j_b, t_hot, t_cold)?;
        if t_hot <= t_cold {
            return Err(Error::TemperatureOrder { t_hot, t_cold });
        }
        if j_a == j_b {
            return Err(Error::ZeroWidthCycle(j_a.kelvin()));
        }
        Ok(spec)
    }

    pub fn from_kelvin(j_a: f64, j_b: f64, t_hot: f64, t_cold: f64) -> Result<Self> {
        Self::new(Coupling::new(j_a)?, Coupling::new(j_b)?, t_hot, t_cold)
    }

    /// Relaxed constructor for limit analysis: admits the Carnot point
    /// `t_hot == t_cold` and zero-width cycles `j_a == j_b`.
    pub fn new_limit(j_a: Coupling, j_b: Coupling, t_hot: f64, t_cold: f64) -> Result<Self> {
        for t in [t_hot, t_cold] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidTemperature(t));
            }
        }
        if t_hot < t_cold {
            return Err(Error::TemperatureOrder { t_hot, t_cold });
        }
        Ok(CycleSpec {
            j_a,
            j_b,
            t_hot,
            t_cold,
        })
    }

    pub fn j_a(&self) -> Coupling {
        self.j_a
    }

    pub fn j_b(&self) -> Coupling {
        self.j_b
    }

    pub fn t_hot(&self) -> f64 {
        self.t_hot
    }

    pub fn t_cold(&self) -> f64 {
        self.t_cold
    }

    pub fn swapped_couplings(&self) -> CycleSpec {
        CycleSpec {
            j_a: self.j_b,
            j_b: self.j_a,
            ..*self
        }
    }

    fn point(&self, j: Coupling, t: f64) -> ThermalPoint {
        // temperatures were validated at construction
        ThermalPoint::new(j, t).expect("validated temperature")
    }

    /// Stroke endpoints where `k_B T > |J|`, i.e. outside the low-temperature
    /// regime where the ground level dominates. The math stays valid there.
    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let corners = [
            ('A', self.j_a, self.t_hot),
            ('B', self.j_b, self.t_hot),
            ('C', self.j_b, self.t_cold),
            ('D', self.j_a, self.t_cold),
        ];
        corners
            .into_iter()
            .filter(|(_, j, t)| *t > j.kelvin().abs())
            .map(|(corner, j, t)| RegimeWarning {
                corner,
                j_over_kb: j.kelvin(),
                temperature: t,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeWarning {
    pub corner: char,
    pub j_over_kb: f64,
    pub temperature: f64,
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "corner {}: T = {} K exceeds |J|/k_B = {} K (paramagnetic regime)",
            self.corner,
            self.temperature,
            self.j_over_kb.abs()
        )
    }
}

/// Heats of the four strokes and their aggregates, all as E/k_B in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeLedger {
    pub q_ab: f64,
    pub q_bc: f64,
    pub q_cd: f64,
    pub q_da: f64,
    pub work: f64,
    pub q_in: f64,
    pub q_out: f64,
}

impl StrokeLedger {
    pub fn max_stroke_magnitude(&self) -> f64 {
        [self.q_ab, self.q_bc, self.q_cd, self.q_da]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    pub fn heat_sum(&self) -> f64 {
        self.q_ab + self.q_bc + self.q_cd + self.q_da
    }

    /// `1e-12 * max(|q_ab|, |q_bc|, |q_cd|, |q_da|, 1e-30)`.
    pub fn default_tolerance(&self) -> f64 {
        1e-12 * self.max_stroke_magnitude().max(1e-30)
    }
}

/// Operating regime of a cycle, from the signs of `(W, Q_in, Q_out)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperationMode {
    HeatEngine,
    Refrigerator,
    Accelerator,
    Heater,
    #[serde(rename = "carnot")]
    CarnotDegenerate,
    /// A sign pattern the second law rules out; only reachable through a bug
    /// or out-of-domain input.
    Forbidden,
}

impl OperationMode {
    pub const ALL: [OperationMode; 6] = [
        OperationMode::HeatEngine,
        OperationMode::Refrigerator,
        OperationMode::Accelerator,
        OperationMode::Heater,
        OperationMode::CarnotDegenerate,
        OperationMode::Forbidden,
    ];

    pub fn token(self) -> &'static str {
        match self {
            OperationMode::HeatEngine => "heat_engine",
            OperationMode::Refrigerator => "refrigerator",
            OperationMode::Accelerator => "accelerator",
            OperationMode::Heater => "heater",
            OperationMode::CarnotDegenerate => "carnot",
            OperationMode::Forbidden => "forbidden",
        }
    }

    /// Small integer code, stable across releases. Used by the web demo.
    pub fn code(self) -> u8 {
        match self {
            OperationMode::HeatEngine => 0,
            OperationMode::Refrigerator => 1,
            OperationMode::Accelerator => 2,
            OperationMode::Heater => 3,
            OperationMode::CarnotDegenerate => 4,
            OperationMode::Forbidden => 5,
        }
    }
}

impl fmt::Display for OperationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for OperationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        OperationMode::ALL
            .into_iter()
            .find(|m| m.token() == s)
            .ok_or_else(|| format!("unknown operation mode `{s}`"))
    }
}

/// `Q_AB = T_h [S(J_B, T_h) - S(J_A, T_h)]`.
pub fn heat_isothermal_expansion(spec: &CycleSpec) -> f64 {
    let th = spec.t_hot;
    th * entropy_difference(spec.j_b.kelvin() / th, spec.j_a.kelvin() / th)
}

/// `Q_BC = U(J_B, T_c) - U(J_B, T_h)`; negative for every `T_h > T_c`, `J_B != 0`.
pub fn heat_isochoric_cooling(spec: &CycleSpec) -> f64 {
    let jb = spec.j_b.kelvin();
    3.0 * jb * occupation_difference(jb / spec.t_cold, jb / spec.t_hot)
}

/// `Q_CD = T_c [S(J_A, T_c) - S(J_B, T_c)]`.
pub fn heat_isothermal_compression(spec: &CycleSpec) -> f64 {
    let tc = spec.t_cold;
    tc * entropy_difference(spec.j_a.kelvin() / tc, spec.j_b.kelvin() / tc)
}

/// `Q_DA = U(J_A, T_h) - U(J_A, T_c)`; positive for every `T_h > T_c`, `J_A != 0`.
pub fn heat_isochoric_heating(spec: &CycleSpec) -> f64 {
    let ja = spec.j_a.kelvin();
    3.0 * ja * occupation_difference(ja / spec.t_hot, ja / spec.t_cold)
}

/// Net work per cycle from the closed free-energy expression
///
/// `W = T_h ln[e^{(J_A-J_B)/4T_h} F(J_A,T_h)/F(J_B,T_h)]
///    + T_c ln[e^{(J_B-J_A)/4T_c} F(J_B,T_c)/F(J_A,T_c)]`.
///
/// The `J/4` exponents cancel between the two baths, leaving
/// `W = -T_h [L(J_A,T_h) - L(J_B,T_h)] + T_c [L(J_A,T_c) - L(J_B,T_c)]` with
/// `L = ln(3 + e^{J/T})`; any slope `J_A - J_B` shared by both brackets is
/// dropped before subtracting. Computed independently of the stroke heats;
/// the first law ties the two.
pub fn total_work(spec: &CycleSpec) -> f64 {
    let (ja, jb) = (spec.j_a.kelvin(), spec.j_b.kelvin());
    let (th, tc) = (spec.t_hot, spec.t_cold);
    let bracket = |t: f64| log_partition_difference_excess(ja / t, jb / t);
    tc * bracket(tc) - th * bracket(th)
}

pub fn assemble_ledger(spec: &CycleSpec) -> StrokeLedger {
    let q_ab = heat_isothermal_expansion(spec);
    let q_bc = heat_isochoric_cooling(spec);
    let q_cd = heat_isothermal_compression(spec);
    let q_da = heat_isochoric_heating(spec);
    StrokeLedger {
        q_ab,
        q_bc,
        q_cd,
        q_da,
        work: total_work(spec),
        q_in: q_ab + q_da,
        q_out: q_bc + q_cd,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
    Zero,
}

fn sign_of(v: f64, tol: f64) -> Sign {
    if v > tol {
        Sign::Pos
    } else if v < -tol {
        Sign::Neg
    } else {
        Sign::Zero
    }
}

/// Maps the sign triple `(W, Q_in, Q_out)` onto the allowed regimes:
///
/// | mode         | W | Q_in | Q_out |
/// |--------------|---|------|-------|
/// | heat engine  | + | +    | -     |
/// | refrigerator | - | -    | +     |
/// | accelerator  | - | +    | -     |
/// | heater       | - | -    | -     |
///
/// Values within `tolerance` of zero sit on a region boundary and match either
/// sign, except that a heat engine needs strictly positive `W` and `Q_in`. All
/// three within tolerance is a Carnot point.
pub fn classify_mode(ledger: &StrokeLedger, tolerance: f64) -> OperationMode {
    use Sign::*;
    let tol = tolerance.max(0.0);
    let w = sign_of(ledger.work, tol);
    let qi = sign_of(ledger.q_in, tol);
    let qo = sign_of(ledger.q_out, tol);

    if (w, qi, qo) == (Zero, Zero, Zero) {
        return OperationMode::CarnotDegenerate;
    }
    let fits = |s: Sign, want: Sign| s == want || s == Zero;
    if w == Pos && qi == Pos && fits(qo, Neg) {
        OperationMode::HeatEngine
    } else if fits(w, Neg) && fits(qi, Neg) && fits(qo, Pos) {
        OperationMode::Refrigerator
    } else if fits(w, Neg) && fits(qi, Pos) && fits(qo, Neg) {
        OperationMode::Accelerator
    } else if fits(w, Neg) && fits(qi, Neg) && fits(qo, Neg) {
        OperationMode::Heater
    } else {
        OperationMode::Forbidden
    }
}

/// [`classify_mode`] with [`StrokeLedger::default_tolerance`].
pub fn mode_of(ledger: &StrokeLedger) -> OperationMode {
    classify_mode(ledger, ledger.default_tolerance())
}

/// `eta = W / Q_in`, defined only in heat-engine mode.
pub fn efficiency(spec: &CycleSpec) -> Result<f64> {
    let ledger = assemble_ledger(spec);
    match mode_of(&ledger) {
        OperationMode::HeatEngine => Ok(ledger.work / ledger.q_in),
        other => Err(Error::NotHeatEngine(other)),
    }
}

fn capped_exp(arg: f64) -> Result<f64> {
    if arg.abs() > OVERFLOW_CAP {
        return Err(Error::OverflowCap {
            ratio: arg.abs(),
            cap: OVERFLOW_CAP,
        });
    }
    Ok(arg.exp())
}

/// The efficiency written out in terms of `F`, `S` and raw exponentials:
///
/// `eta = { ln[e^{(J_A-J_B)/4T_h} F_Ah/F_Bh] + (T_c/T_h) ln[e^{(J_B-J_A)/4T_c} F_Bc/F_Ac] }
///      / { [S_Bh - S_Ah] + 3 (J_A/T_h) [F_Ah - F_Ac] }`.
///
/// Evaluated without regard to the operating mode. Exponentials are taken
/// directly, so every reduced coupling must respect the overflow cap.
pub fn efficiency_expanded(spec: &CycleSpec) -> Result<f64> {
    let (ja, jb) = (spec.j_a.kelvin(), spec.j_b.kelvin());
    let (th, tc) = (spec.t_hot, spec.t_cold);
    let f_raw = |j: f64, t: f64| -> Result<f64> { Ok(1.0 / (3.0 + capped_exp(j / t)?)) };
    let (f_ah, f_bh, f_ac, f_bc) = (
        f_raw(ja, th)?,
        f_raw(jb, th)?,
        f_raw(ja, tc)?,
        f_raw(jb, tc)?,
    );
    let numerator = (capped_exp((ja - jb) / (4.0 * th))? * f_ah / f_bh).ln()
        + tc / th * (capped_exp((jb - ja) / (4.0 * tc))? * f_bc / f_ac).ln();
    let s = |j: Coupling, t: f64| entropy(spec.point(j, t));
    let denominator = (s(spec.j_b, th) - s(spec.j_a, th)) + 3.0 * ja / th * (f_ah - f_ac);
    Ok(numerator / denominator)
}

/// `eta_C = 1 - T_c / T_h`.
pub fn carnot_efficiency(t_hot: f64, t_cold: f64) -> Result<f64> {
    for t in [t_hot, t_cold] {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidTemperature(t));
        }
    }
    if t_hot < t_cold {
        return Err(Error::TemperatureOrder { t_hot, t_cold });
    }
    Ok(1.0 - t_cold / t_hot)
}

/// Dimensionless susceptibility at each corner `[A, B, C, D]` of the cycle.
pub fn corner_susceptibilities(spec: &CycleSpec) -> [f64; 4] {
    [
        dimensionless_susceptibility(spec.point(spec.j_a, spec.t_hot)),
        dimensionless_susceptibility(spec.point(spec.j_b, spec.t_hot)),
        dimensionless_susceptibility(spec.point(spec.j_b, spec.t_cold)),
        dimensionless_susceptibility(spec.point(spec.j_a, spec.t_cold)),
    ]
}
