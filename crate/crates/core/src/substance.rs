//! Equilibrium state functions of the spin-1/2 Heisenberg dimer `H = J S1.S2`.
//!
//! The triplet (`E = J/4`, threefold) and the singlet (`E = -3J/4`) are the only
//! levels, so every thermodynamic quantity is a function of the reduced
//! coupling `x = J / (k_B T)` through the dimensionless susceptibility
//! `F = 1 / (3 + e^x)`. All evaluations below go through `ln(3 + e^x)` computed
//! by log-sum-exp, so no path exponentiates a positive argument.

use serde::{Deserialize, Serialize};

use crate::constants::{CURIE_PREFACTOR, DEFAULT_COUPLING_CAP_K};
use crate::error::{Error, Result};

/// Exchange constant expressed as `J/k_B` in kelvin.
///
/// Positive values give a singlet (entangled) ground state, negative values a
/// triplet ground subspace.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Coupling(f64);

impl Coupling {
    pub const ZERO: Coupling = Coupling(0.0);

    pub fn new(j_over_kb: f64) -> Result<Self> {
        Self::with_cap(j_over_kb, DEFAULT_COUPLING_CAP_K)
    }

    /// Like [`Coupling::new`] with a caller-chosen magnitude cap.
    pub fn with_cap(j_over_kb: f64, cap: f64) -> Result<Self> {
        if !j_over_kb.is_finite() || j_over_kb.abs() > cap {
            return Err(Error::CouplingOutOfRange {
                value: j_over_kb,
                cap,
            });
        }
        Ok(Coupling(j_over_kb))
    }

    #[inline]
    pub fn kelvin(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Coupling {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Coupling::new(value)
    }
}

impl From<Coupling> for f64 {
    fn from(c: Coupling) -> f64 {
        c.0
    }
}

/// A coupling held at a bath temperature; one corner of the cycle diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    coupling: Coupling,
    temperature: f64,
}

impl ThermalPoint {
    pub fn new(coupling: Coupling, temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidTemperature(temperature));
        }
        Ok(ThermalPoint {
            coupling,
            temperature,
        })
    }

    /// Shorthand for building a point from raw kelvin values.
    pub fn from_kelvin(j_over_kb: f64, temperature: f64) -> Result<Self> {
        Self::new(Coupling::new(j_over_kb)?, temperature)
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `J / (k_B T)`.
    #[inline]
    pub fn reduced_coupling(&self) -> f64 {
        self.coupling.0 / self.temperature
    }
}

/// Thermal occupations in the coupled basis: three triplet states, then the
/// singlet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationVector([f64; 4]);

impl PopulationVector {
    pub(crate) fn from_array(p: [f64; 4]) -> Self {
        PopulationVector(p)
    }

    /// Occupation shared by each of the three triplet states.
    pub fn triplet(&self) -> f64 {
        self.0[0]
    }

    pub fn singlet(&self) -> f64 {
        self.0[3]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `ln(3 + e^x)` and `ln(3 + e^x) - x`, i.e. `-ln F` and `-ln(1 - 3F)`.
///
/// Both are non-negative and finite for every finite `x`.
#[inline]
pub(crate) fn neg_log_populations(x: f64) -> (f64, f64) {
    let ln3 = 3f64.ln();
    if x > ln3 {
        let tail = (3.0 * (-x).exp()).ln_1p();
        (x + tail, tail)
    } else {
        // exact ln 4 at x = 0
        let l = 4f64.ln() + (x.exp_m1() / 4.0).ln_1p();
        (l, l - x)
    }
}

/// Triplet and singlet occupations `(F, 1 - 3F)` for reduced coupling `x`.
#[inline]
pub(crate) fn occupations(x: f64) -> (f64, f64) {
    if x > 0.0 {
        let e = (-x).exp();
        let d = 1.0 + 3.0 * e;
        (e / d, 1.0 / d)
    } else {
        let e = x.exp();
        let d = 3.0 + e;
        (1.0 / d, e / d)
    }
}

/// Shannon entropy of the occupations at reduced coupling `x`, in units of k_B.
#[inline]
pub(crate) fn entropy_reduced(x: f64) -> f64 {
    let (f, singlet) = occupations(x);
    let (neg_ln_f, neg_ln_singlet) = neg_log_populations(x);
    if x <= 0.0 {
        // S = L - (1 - 3F) x, both terms non-negative here
        neg_ln_f - singlet * x
    } else {
        3.0 * f * neg_ln_f + singlet * neg_ln_singlet
    }
}

// Differences of state functions between two reduced couplings. In the frozen
// limits |x| >> 1 the state functions approach constants (ln 3, 1/3, ...), so
// subtracting evaluated values would cancel to noise; these keep relative
// precision instead.

/// `F(a) - F(b) = -F(a) (1 - 3F(b)) expm1(a - b)`.
#[inline]
pub(crate) fn occupation_difference(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() > 700.0 {
        return occupations(a).0 - occupations(b).0;
    }
    -occupations(a).0 * occupations(b).1 * d.exp_m1()
}

/// `ln(1 + m)` unless `m` is so close to `-1` that it has lost its digits.
#[inline]
fn ln1p_or(m: f64, fallback: impl FnOnce() -> f64) -> f64 {
    if m.is_finite() && m > -0.5 {
        m.ln_1p()
    } else {
        fallback()
    }
}

/// `ln(3 + e^a) - ln(3 + e^b) = ln(1 + (1 - 3F(b)) expm1(a - b))`.
#[inline]
pub(crate) fn log_partition_difference(a: f64, b: f64) -> f64 {
    ln1p_or(occupations(b).1 * (a - b).exp_m1(), || {
        neg_log_populations(a).0 - neg_log_populations(b).0
    })
}

/// [`log_partition_difference`] with the slope `a - b` removed when both are
/// positive: `[ln(3 + e^a) - a] - [ln(3 + e^b) - b] = ln(1 + 3F(b) expm1(b - a))`.
#[inline]
pub(crate) fn log_partition_difference_excess(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        ln1p_or(3.0 * occupations(b).0 * (b - a).exp_m1(), || {
            neg_log_populations(a).1 - neg_log_populations(b).1
        })
    } else {
        log_partition_difference(a, b)
    }
}

/// `S(a) - S(b)` in units of k_B.
#[inline]
pub(crate) fn entropy_difference(a: f64, b: f64) -> f64 {
    // evaluate in one fixed order so that swapping the arguments flips the sign exactly
    if a > b {
        return -entropy_difference(b, a);
    }
    if a > 1.0 {
        // singlet-frozen side: S itself is small and accurate
        entropy_reduced(a) - entropy_reduced(b)
    } else {
        // S = ln(3 + e^x) - x (1 - 3F)
        log_partition_difference(a, b) - (a * occupations(a).1 - b * occupations(b).1)
    }
}

/// `F(J, T) = 1 / (3 + e^{J/k_B T})`, the dimensionless susceptibility.
///
/// Lies in `(0, 1/3)`; reaches `0` only by underflow in the deep singlet limit.
pub fn dimensionless_susceptibility(point: ThermalPoint) -> f64 {
    occupations(point.reduced_coupling()).0
}

/// Bleaney-Bowers molar susceptibility in emu/mol.
pub fn molar_susceptibility(point: ThermalPoint, g: f64) -> Result<f64> {
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::InvalidGFactor(g));
    }
    let t = point.temperature();
    Ok(2.0 * CURIE_PREFACTOR * g * g / t * dimensionless_susceptibility(point))
}

/// Inverts [`molar_susceptibility`] back to `F = k_B T chi / (2 N_A (g mu_B)^2)`.
pub fn dimensionless_from_molar(chi: f64, temperature: f64, g: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidTemperature(temperature));
    }
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::InvalidGFactor(g));
    }
    Ok(chi * temperature / (2.0 * CURIE_PREFACTOR * g * g))
}

pub fn populations(point: ThermalPoint) -> PopulationVector {
    let (f, singlet) = occupations(point.reduced_coupling());
    PopulationVector([f, f, f, singlet])
}

/// Von Neumann entropy of the Gibbs state, in units of k_B.
pub fn entropy(point: ThermalPoint) -> f64 {
    entropy_reduced(point.reduced_coupling())
}

/// `U = Tr(rho H) = 3J (F - 1/4)`, as `U/k_B` in kelvin.
pub fn internal_energy(point: ThermalPoint) -> f64 {
    let j = point.coupling().kelvin();
    3.0 * j * (dimensionless_susceptibility(point) - 0.25)
}
