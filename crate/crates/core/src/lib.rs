//! Quantum Stirling cycle with a spin-1/2 dinuclear metal complex as the
//! working substance.
//!
//! * [`substance`]: closed-form state functions of the Heisenberg dimer.
//! * [`gibbs`]: brute-force 4x4 Gibbs state used to cross-check them.
//! * [`cycle`]: stroke heats, work, operating modes and efficiency.
//! * [`phasemap`]: mode maps over coupling and temperature ratios.
//! * [`magnetometry`]: susceptibility datasets, Bleaney-Bowers fits and
//!   engine curves driven by fitted couplings.
//!
//! Energies are carried as `E/k_B` in kelvin; see [`constants::kelvin_to_ev`].

pub mod constants;
pub mod cycle;
pub mod error;
pub mod gibbs;
pub mod magnetometry;
pub mod phasemap;
pub mod substance;

pub use cycle::{
    assemble_ledger, carnot_efficiency, classify_mode, efficiency, efficiency_expanded,
    heat_isochoric_cooling, heat_isochoric_heating, heat_isothermal_compression,
    heat_isothermal_expansion, mode_of, total_work, CycleSpec, OperationMode, StrokeLedger,
};
pub use error::{Error, Result};
pub use gibbs::{gibbs_oracle, GibbsOracleResult};
pub use phasemap::{sweep, trace_zero_work_boundary, Anchor, Branch, ModeCell, SweepGrid};
pub use substance::{
    dimensionless_susceptibility, entropy, internal_energy, molar_susceptibility, populations,
    Coupling, PopulationVector, ThermalPoint,
};
