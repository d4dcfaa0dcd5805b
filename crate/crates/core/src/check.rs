//! Quick built-in self-test: analytic spectrum against dense diagonalization
//! and the vanishing linear terms of the superradiant frame.

use crate::effective::superradiant_frame;
use crate::model::{analytic_spectrum, ModelParams, ModelTemplate};
use crate::oracle::dense_oracle_spectrum;

pub const CHECK_N: u32 = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Largest error relative to the case tolerance scale.
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.worst <= self.tolerance
    }
}

/// Max |a_i − b_i| over sorted copies, or infinity on a length mismatch.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn oracle_equivalence() -> CheckOutcome {
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for omega0 in [1.0, 7.3, 120.0, 1000.0] {
        for delta_ratio in [-1.9, -0.6, 0.0, 0.35, 1.2, 2.0] {
            for coupling in [0.0, 0.05, 0.7, 3.0] {
                let omega = 1.0;
                let Ok(params) = ModelParams::new(omega0, omega, coupling, delta_ratio * omega, CHECK_N) else {
                    continue;
                };
                let analytic = analytic_spectrum(&params);
                let Ok(dense) = dense_oracle_spectrum(&params) else {
                    continue;
                };
                let scale = dense.iter().fold(0.0_f64, |m, e| m.max(e.abs())).max(1.0);
                worst = worst.max(multiset_distance(&analytic, &dense) / scale);
                cases += 1;
            }
        }
    }
    CheckOutcome {
        name: "oracle equivalence (N = 10)",
        cases,
        worst,
        tolerance: 1e-10,
    }
}

fn kappa_identity() -> CheckOutcome {
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for (omega0, omega) in [(100.0, 0.5), (1000.0, 0.1), (50.0, 1.0)] {
        for delta_ratio in [-0.9, -0.3, 0.0, 0.4, 0.8] {
            for g in [1.05, 1.3, 1.7, 2.0] {
                let template = ModelTemplate::new(omega0, omega, delta_ratio * omega, 4000);
                let Ok(params) = template.at_g_tilde(g) else { continue };
                let Ok(frame) = superradiant_frame(&params) else { continue };
                let scale = params.omega().abs() + params.lambda().abs();
                worst = worst.max(frame.kappa1.abs().max(frame.kappa2.abs()) / scale);
                cases += 1;
            }
        }
    }
    CheckOutcome {
        name: "kappa1 = kappa2 = 0",
        cases,
        worst,
        tolerance: 1e-9,
    }
}

pub fn self_check() -> Vec<CheckOutcome> {
    vec![oracle_equivalence(), kappa_identity()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_check_passes() {
        for outcome in self_check() {
            assert!(outcome.passed(), "{outcome:?}");
            assert!(outcome.cases >= 40, "{outcome:?}");
        }
    }

    #[test]
    fn multiset_distance_basics() {
        assert_eq!(multiset_distance(&[3.0, 1.0], &[1.0, 3.0]), 0.0);
        assert_eq!(multiset_distance(&[1.0], &[1.0, 2.0]), f64::INFINITY);
        assert_eq!(multiset_distance(&[1.0, 2.5], &[1.0, 2.0]), 0.5);
    }
}
