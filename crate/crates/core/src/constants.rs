//! Physical constants. Energies are carried as J/k_B in kelvin throughout the
//! crate; these are only needed for cgs magnetometry and eV reporting.

/// Avogadro constant, mol^-1 (exact, SI 2019).
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// Boltzmann constant in erg/K (exact, SI 2019).
pub const BOLTZMANN_ERG_PER_K: f64 = 1.380_649e-16;

/// Bohr magneton in erg/G (CODATA 2018).
pub const BOHR_MAGNETON_ERG_PER_G: f64 = 9.274_010_078_3e-21;

/// Boltzmann constant in eV/K (CODATA 2018).
pub const BOLTZMANN_EV_PER_K: f64 = 8.617_333_262e-5;

/// `N_A mu_B^2 / k_B` in emu K / mol, about 0.3751481 from CODATA 2018 inputs.
pub const CURIE_PREFACTOR: f64 =
    AVOGADRO * BOHR_MAGNETON_ERG_PER_G * BOHR_MAGNETON_ERG_PER_G / BOLTZMANN_ERG_PER_K;

/// Default cap on |J/k_B| accepted by [`crate::Coupling::new`].
pub const DEFAULT_COUPLING_CAP_K: f64 = 1.0e4;

/// Largest |J/(k_B T)| accepted by evaluation paths that exponentiate the
/// reduced coupling directly (the Gibbs oracle and the expanded efficiency).
pub const OVERFLOW_CAP: f64 = 700.0;

/// Converts an energy expressed as E/k_B in kelvin to electronvolts.
pub fn kelvin_to_ev(energy_k: f64) -> f64 {
    energy_k * BOLTZMANN_EV_PER_K
}
