//! Dense-diagonalization oracle for the full Dicke sector.
//!
//! The Hamiltonian is assembled directly from angular-momentum matrix
//! elements in the product basis `|s⟩ ⊗ |j,m⟩` and diagonalized as a dense
//! symmetric matrix. It shares no code with the block formulas in
//! [`crate::model`] and serves as their independent check.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Largest N accepted by the dense routines unless a cap is given explicitly.
pub const DENSE_CAP: u32 = 4096;

/// Position of `|s, m⟩` in the product basis. `up` selects the central spin
/// state and `k = m + j ∈ [0, N]` counts bath excitations.
pub fn basis_index(n_spins: u32, up: bool, k: u32) -> usize {
    let offset = if up { 0 } else { n_spins as usize + 1 };
    offset + k as usize
}

pub fn dense_hamiltonian(params: &ModelParams) -> DMatrix<f64> {
    let n = params.n_spins();
    let dim = 2 * (n as usize + 1);
    let mut h = DMatrix::zeros(dim, dim);
    let (omega0, omega, a, delta) = (params.omega0(), params.omega(), params.coupling(), params.delta());

    for k in 0..=n {
        // 2m = 2k − N
        let m = (2 * k as i64 - n as i64) as f64 / 2.0;
        for (up, sz) in [(true, 0.5), (false, -0.5)] {
            let i = basis_index(n, up, k);
            h[(i, i)] = omega0 * sz + omega * m + 2.0 * delta * m * sz;
        }
        if k < n {
            // J₊|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩; in doubled integers
            // 4[j(j+1) − m(m+1)] = N(N+2) − 2m(2m+2).
            let two_m = 2 * k as i64 - n as i64;
            let four_c2 = (n as i64) * (n as i64 + 2) - two_m * (two_m + 2);
            let elem = a * (four_c2 as f64).sqrt() / 2.0;
            // J₊S₋ couples |↑,m⟩ to |↓,m+1⟩.
            let up_m = basis_index(n, true, k);
            let down_m1 = basis_index(n, false, k + 1);
            h[(down_m1, up_m)] = elem;
            h[(up_m, down_m1)] = elem;
        }
    }
    h
}

fn check_cap(params: &ModelParams, cap: u32) -> Result<()> {
    if params.n_spins() > cap {
        return Err(Error::Resource {
            n: params.n_spins(),
            cap,
        });
    }
    Ok(())
}

/// Full spectrum (2(N+1) energies, ascending) by dense eigensolve.
pub fn dense_oracle_spectrum(params: &ModelParams) -> Result<Vec<f64>> {
    dense_oracle_spectrum_capped(params, DENSE_CAP)
}

pub fn dense_oracle_spectrum_capped(params: &ModelParams, cap: u32) -> Result<Vec<f64>> {
    check_cap(params, cap)?;
    let h = dense_hamiltonian(params);
    let mut energies: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    energies.sort_by(f64::total_cmp);
    Ok(energies)
}

/// Lowest eigenvalue and its unit eigenvector (sign arbitrary).
pub fn dense_ground_state(params: &ModelParams) -> Result<(f64, DVector<f64>)> {
    check_cap(params, DENSE_CAP)?;
    let eig = SymmetricEigen::new(dense_hamiltonian(params));
    let (idx, energy) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty spectrum");
    Ok((energy, eig.eigenvectors.column(idx).into_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bath_spin_uncoupled() {
        let params = ModelParams::new(1.0, 1.0, 0.0, 0.0, 1).unwrap();
        let spec = dense_oracle_spectrum(&params).unwrap();
        assert_eq!(spec.len(), 4);
        for (e, want) in spec.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((e - want).abs() < 1e-14);
        }
    }

    #[test]
    fn hamiltonian_is_symmetric_and_sized() {
        let params = ModelParams::new(3.0, 0.7, 0.2, -0.4, 7).unwrap();
        let h = dense_hamiltonian(&params);
        assert_eq!(h.nrows(), 16);
        assert_eq!(h.clone(), h.transpose());
    }

    #[test]
    fn cap_is_enforced() {
        let params = ModelParams::new(1.0, 1.0, 0.1, 0.0, 20).unwrap();
        assert!(matches!(
            dense_oracle_spectrum_capped(&params, 10),
            Err(Error::Resource { n: 20, cap: 10 })
        ));
        let big = ModelParams::new(1.0, 1.0, 0.1, 0.0, DENSE_CAP + 1).unwrap();
        assert!(dense_oracle_spectrum(&big).is_err());
    }

    #[test]
    fn spectrum_invariant_under_coupling_sign_flip() {
        // ModelParams forbids A < 0, so flip the sign on the assembled matrix.
        let params = ModelParams::new(5.0, 0.6, 0.3, 0.2, 9).unwrap();
        let h = dense_hamiltonian(&params);
        let mut flipped = h.clone();
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                if i != j {
                    flipped[(i, j)] = -h[(i, j)];
                }
            }
        }
        let mut a: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        let mut b: Vec<f64> = flipped.symmetric_eigenvalues().iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    mod props {
        use proptest::prelude::*;

        use super::*;
        use crate::check::multiset_distance;
        use crate::ground_state::find_ground_state;
        use crate::model::analytic_spectrum;

        fn params() -> impl Strategy<Value = ModelParams> {
            (2u32..=64, 0.05f64..5.0, 0.0f64..3.0, -2.0f64..=2.0, 0.0f64..3.0).prop_map(
                |(n, omega, log_eta, delta_ratio, coupling_ratio)| {
                    let omega0 = omega * 10f64.powf(log_eta);
                    let a = coupling_ratio * (omega * omega0 / n as f64).sqrt();
                    ModelParams::new(omega0, omega, a, delta_ratio * omega, n).unwrap()
                },
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn analytic_spectrum_matches_dense(p in params()) {
                let dense = dense_oracle_spectrum(&p).unwrap();
                let scale = dense.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
                prop_assert!(multiset_distance(&analytic_spectrum(&p), &dense) <= 1e-10 * scale);
            }

            #[test]
            fn ground_state_matches_dense(p in params()) {
                let report = find_ground_state(&p);
                let (e, v) = dense_ground_state(&p).unwrap();
                let scale = e.abs().max(1.0);
                prop_assert!((report.energy - e).abs() <= 1e-10 * scale);
                // Overlap only makes sense away from degeneracies.
                let mut spectrum = analytic_spectrum(&p);
                spectrum.sort_by(f64::total_cmp);
                if spectrum[1] - spectrum[0] > 1e-6 * scale {
                    let overlap = report.to_dense(p.n_spins()).dot(&v).abs();
                    prop_assert!((overlap - 1.0).abs() <= 1e-9);
                }
            }
        }
    }
}
