//! Brute-force Gibbs state of the dimer.
//!
//! Builds `J S1.S2` as a 4x4 Hermitian matrix in the product basis
//! `{|uu>, |ud>, |du>, |dd>}` from Pauli matrices, diagonalizes it numerically
//! and forms Boltzmann weights. Shares no code with [`crate::substance`]; it
//! exists to cross-check the closed forms.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

use crate::constants::OVERFLOW_CAP;
use crate::error::{Error, Result};
use crate::substance::{PopulationVector, ThermalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsOracleResult {
    /// Three triplet states first, then the singlet.
    pub populations: PopulationVector,
    /// Eigenvalues in the same order as `populations`, as E/k_B in kelvin.
    pub eigenvalues: [f64; 4],
    pub entropy: f64,
    pub internal_energy: f64,
}

type C64 = Complex<f64>;

fn pauli() -> [Matrix2<C64>; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(z, one, one, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(one, z, z, -one),
    ]
}

/// `J S1.S2` with `S = sigma / 2`.
pub fn heisenberg_hamiltonian(j_over_kb: f64) -> Matrix4<C64> {
    let mut h = Matrix4::<C64>::zeros();
    for s in pauli() {
        h += s.kronecker(&s);
    }
    h * C64::new(0.25 * j_over_kb, 0.0)
}

pub fn gibbs_oracle(point: ThermalPoint) -> Result<GibbsOracleResult> {
    let j = point.coupling().kelvin();
    let t = point.temperature();
    let ratio = (j / t).abs();
    if ratio > OVERFLOW_CAP {
        return Err(Error::OverflowCap {
            ratio,
            cap: OVERFLOW_CAP,
        });
    }

    let eig = SymmetricEigen::new(heisenberg_hamiltonian(j));
    let energies: Vec<f64> = eig.eigenvalues.iter().copied().collect();

    // Singlet (|ud> - |du>)/sqrt(2) goes last.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = Vector4::new(
        C64::new(0.0, 0.0),
        C64::new(h, 0.0),
        C64::new(-h, 0.0),
        C64::new(0.0, 0.0),
    );
    let overlap = |k: usize| eig.eigenvectors.column(k).dotc(&singlet).norm_sqr();
    let singlet_idx = (0..4)
        .max_by(|&a, &b| overlap(a).total_cmp(&overlap(b)))
        .unwrap_or(3);
    let mut order: Vec<usize> = (0..4).filter(|&k| k != singlet_idx).collect();
    order.push(singlet_idx);

    let eigenvalues = [
        energies[order[0]],
        energies[order[1]],
        energies[order[2]],
        energies[order[3]],
    ];

    let e_min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let boltzmann: Vec<f64> = eigenvalues.iter().map(|e| -(e - e_min) / t).collect();
    let ln_z = boltzmann.iter().map(|b| b.exp()).sum::<f64>().ln();

    let mut pops = [0.0; 4];
    let mut entropy = 0.0;
    let mut energy = 0.0;
    for k in 0..4 {
        let ln_p = boltzmann[k] - ln_z;
        let p = ln_p.exp();
        pops[k] = p;
        entropy -= p * ln_p;
        energy += p * eigenvalues[k];
    }

    Ok(GibbsOracleResult {
        populations: PopulationVector::from_array(pops),
        eigenvalues,
        entropy,
        internal_energy: energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substance::{dimensionless_susceptibility, entropy, internal_energy};

    #[test]
    fn hamiltonian_is_hermitian_and_block_diagonal() {
        let h = heisenberg_hamiltonian(4.0);
        assert_eq!(h, h.adjoint());
        // |uu> and |dd> are eigenstates with J/4
        assert!((h[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((h[(3, 3)].re - 1.0).abs() < 1e-15);
        assert!((h[(1, 2)].re - 2.0).abs() < 1e-15);
        assert!((h[(1, 1)].re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_are_triplet_then_singlet() {
        for j in [-32.0, 7.5, 100.0] {
            let r = gibbs_oracle(ThermalPoint::from_kelvin(j, 10.0).unwrap()).unwrap();
            for e in &r.eigenvalues[..3] {
                assert!((e - j / 4.0).abs() < 1e-12, "{e}");
            }
            assert!((r.eigenvalues[3] + 0.75 * j).abs() < 1e-12);
        }
    }

    #[test]
    fn uncoupled_entropy_is_ln4() {
        let r = gibbs_oracle(ThermalPoint::from_kelvin(0.0, 1.0).unwrap()).unwrap();
        assert!((r.entropy - 4f64.ln()).abs() < 1e-15);
        assert!(r.internal_energy.abs() < 1e-15);
    }

    #[test]
    fn matches_closed_forms_at_reference_point() {
        let p = ThermalPoint::from_kelvin(-32.0, 20.0).unwrap();
        let r = gibbs_oracle(p).unwrap();
        let f = dimensionless_susceptibility(p);
        for k in 0..3 {
            assert!((r.populations.as_array()[k] - f).abs() < 1e-12);
        }
        assert!((r.populations.singlet() - (1.0 - 3.0 * f)).abs() < 1e-12);
        assert!((r.entropy - entropy(p)).abs() < 1e-12);
        assert!((r.internal_energy - internal_energy(p)).abs() < 1e-12);
    }

    #[test]
    fn rejects_beyond_overflow_cap() {
        let p = ThermalPoint::from_kelvin(800.0, 1.0).unwrap();
        assert!(matches!(gibbs_oracle(p), Err(Error::OverflowCap { .. })));
        let p = ThermalPoint::from_kelvin(-700.0, 1.0).unwrap();
        assert!(gibbs_oracle(p).is_ok());
    }
}
