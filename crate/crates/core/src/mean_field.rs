//! Closed-form mean-field results for the bosonized bath.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Below this |Δ|/ω the Δ = 0 limit form is used for n_g.
pub const DELTA_ZERO_SWITCH: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Normal,
    Superradiant,
    /// |Δ| ≥ ω, or g̃ undefined.
    Inadmissible,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanFieldSolution {
    /// Continuum excitation number; NaN when inadmissible.
    pub n_g: f64,
    pub energy: f64,
    /// ⟨a⟩ = √n_g.
    pub coherence: f64,
    pub phase: Phase,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanFieldEnergyPoint {
    pub n: f64,
    pub energy: f64,
    /// ω̄₀(n) = √(4λ²n + 4n²Δ² + 4nΔω̃₀ + ω̃₀²).
    pub omega_bar_0: f64,
}

fn omega_bar_0_generic(params: &ModelParams, n: f64) -> f64 {
    let lambda = params.lambda();
    // Completed square: (2nΔ + ω̃₀)² + 4λ²n ≥ 0 for n ≥ 0.
    let shifted = 2.0 * n * params.delta() + params.omega0_tilde();
    (shifted * shifted + 4.0 * lambda * lambda * n).sqrt()
}

/// Mean-field energy E₋(n) = ω(n − j) − ω̄₀(n)/2.
pub fn mf_energy(params: &ModelParams, n: f64) -> Result<MeanFieldEnergyPoint> {
    if !(n >= 0.0) {
        return Err(Error::domain(format!("n must be >= 0, got {n}")));
    }
    let omega_bar_0 = omega_bar_0_generic(params, n);
    Ok(MeanFieldEnergyPoint {
        n,
        energy: params.omega() * (n - params.j()) - omega_bar_0 / 2.0,
        omega_bar_0,
    })
}

fn check_admissible(params: &ModelParams) -> Result<f64> {
    if params.delta().abs() >= params.omega() {
        return Err(Error::inadmissible(format!(
            "|delta| = {} >= omega = {}",
            params.delta().abs(),
            params.omega()
        )));
    }
    params
        .derive()
        .g_tilde
        .ok_or_else(|| Error::inadmissible("g~ undefined: omega0 - N delta <= 0"))
}

fn check_superradiant(params: &ModelParams) -> Result<()> {
    let g_tilde = check_admissible(params)?;
    if g_tilde <= 1.0 {
        return Err(Error::domain(format!("g~ = {g_tilde} is not in the superradiant phase")));
    }
    Ok(())
}

/// n_g in the direct form with Δ² denominators. Loses precision as Δ → 0.
pub fn ng_direct(params: &ModelParams) -> Result<f64> {
    check_superradiant(params)?;
    let (lambda, omega, delta, w0t) = (params.lambda(), params.omega(), params.delta(), params.omega0_tilde());
    if delta == 0.0 {
        return Err(Error::domain("direct form is singular at delta = 0"));
    }
    let l2 = lambda * lambda;
    let d2 = delta * delta;
    let root = ((l2 + 2.0 * delta * w0t) / (omega * omega - d2)).sqrt();
    Ok(-(l2 + delta * w0t) / (2.0 * d2) + lambda * omega / (2.0 * d2) * root)
}

/// n_g in the rationalized form, regular at Δ = 0.
pub fn ng_rewritten(params: &ModelParams) -> Result<f64> {
    check_superradiant(params)?;
    Ok(ng_rationalized(params))
}

fn ng_rationalized(params: &ModelParams) -> f64 {
    let (lambda, omega, delta, w0t) = (params.lambda(), params.omega(), params.delta(), params.omega0_tilde());
    let l2 = lambda * lambda;
    let s = omega * omega - delta * delta;
    let num = l2 * (l2 + 2.0 * delta * w0t) - s * w0t * w0t;
    let den = 2.0 * s * (l2 + delta * w0t) + 2.0 * lambda * omega * (s * (l2 + 2.0 * delta * w0t)).sqrt();
    num / den
}

/// Δ = 0 form n_g = (η/4)(g² − g⁻²), with g = g̃.
fn ng_delta_zero(params: &ModelParams, g_tilde: f64) -> f64 {
    let eta = params.omega0() / params.omega();
    eta / 4.0 * (g_tilde * g_tilde - 1.0 / (g_tilde * g_tilde))
}

/// Near-resonance limit ω̃ → 0: n_g = ω̃₀(g̃ω − Δ)/(2Δ²).
pub fn ng_near_resonance(params: &ModelParams) -> Result<f64> {
    let (omega, delta) = (params.omega(), params.delta());
    if !(delta > 0.0 && delta < omega) {
        return Err(Error::domain(format!("near-resonance form needs 0 < delta < omega, got {delta}")));
    }
    let g_tilde = check_admissible(params)?;
    if g_tilde * omega < delta {
        return Err(Error::domain(format!("near-resonance form needs g~ omega >= delta, got {}", g_tilde * omega)));
    }
    Ok(params.omega0_tilde() / (2.0 * delta * delta) * (g_tilde * omega - delta))
}

/// ω̄₀ at the mean-field minimizer, √((λ⁴ + 2Δλ²ω̃₀)/(ω² − Δ²)).
pub fn omega_bar_0_at_minimum(params: &ModelParams) -> f64 {
    let (lambda, omega, delta) = (params.lambda(), params.omega(), params.delta());
    let l2 = lambda * lambda;
    ((l2 * l2 + 2.0 * delta * l2 * params.omega0_tilde()) / (omega * omega - delta * delta)).sqrt()
}

fn inadmissible_solution() -> MeanFieldSolution {
    MeanFieldSolution {
        n_g: f64::NAN,
        energy: f64::NAN,
        coherence: f64::NAN,
        phase: Phase::Inadmissible,
    }
}

/// Mean-field ground state. Phase is decided by g̃ against 1.
pub fn mf_excitation(params: &ModelParams) -> MeanFieldSolution {
    let Ok(g_tilde) = check_admissible(params) else {
        return inadmissible_solution();
    };
    if g_tilde <= 1.0 {
        let energy = -params.omega() * params.j() - params.omega0_tilde() / 2.0;
        return MeanFieldSolution {
            n_g: 0.0,
            energy,
            coherence: 0.0,
            phase: Phase::Normal,
        };
    }
    let n_g = if params.delta().abs() < DELTA_ZERO_SWITCH * params.omega() {
        ng_delta_zero(params, g_tilde)
    } else {
        ng_rationalized(params)
    }
    .max(0.0);
    let omega_bar_0 = omega_bar_0_at_minimum(params);
    debug_assert!(
        (omega_bar_0 - omega_bar_0_generic(params, n_g)).abs() <= 1e-6 * omega_bar_0.max(params.omega()),
        "omega_bar_0 mismatch"
    );
    MeanFieldSolution {
        n_g,
        energy: params.omega() * (n_g - params.j()) - omega_bar_0 / 2.0,
        coherence: n_g.sqrt(),
        phase: Phase::Superradiant,
    }
}

/// Δ = 0 harmonic expansion of the lower branch,
/// `E = −ω₀/2 − ωj + (1 − g² + g²(n−1)/(2j)) n ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicLevel {
    pub energy: f64,
    /// Set when η < [`HARMONIC_MIN_ETA`], where the expansion is poor.
    pub low_eta_warning: bool,
}

pub const HARMONIC_MIN_ETA: f64 = 100.0;

pub fn harmonic_spectrum_delta0(params: &ModelParams, n: u32) -> Result<HarmonicLevel> {
    if params.delta() != 0.0 {
        return Err(Error::domain("harmonic expansion requires delta = 0"));
    }
    let d = params.derive();
    let (omega, n) = (params.omega(), n as f64);
    let g2 = d.g * d.g;
    let energy =
        -params.omega0() / 2.0 - omega * d.j + (1.0 - g2 + g2 * (n - 1.0) / (2.0 * d.j)) * n * omega;
    Ok(HarmonicLevel {
        energy,
        low_eta_warning: d.eta < HARMONIC_MIN_ETA,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at(omega0: f64, omega: f64, delta: f64, n: u32, g: f64) -> ModelParams {
        ModelParams::from_g_tilde(omega0, omega, delta, n, g).unwrap()
    }

    #[test]
    fn energy_at_zero_excitation() {
        let params = ModelParams::new(100.0, 0.5, 0.3, 0.1, 200).unwrap();
        let p = mf_energy(&params, 0.0).unwrap();
        assert!((p.energy - (-0.5 * 100.0 - 80.0 / 2.0)).abs() < 1e-12);
        assert!((p.omega_bar_0 - 80.0).abs() < 1e-12);
        assert!(mf_energy(&params, -1.0).is_err());
    }

    #[test]
    fn energy_radicand_example() {
        let params = ModelParams::new(100.0, 0.5, 7.0 / 200f64.sqrt(), 0.0, 200).unwrap();
        let p = mf_energy(&params, 10.0).unwrap();
        assert!((p.omega_bar_0 - (4.0 * 49.0 * 10.0 + 1e4f64).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn energy_matches_small_n_expansion() {
        let (omega0, omega, n_spins) = (1e4, 1.0, 100_000);
        let eta = omega0 / omega;
        for g in [0.5, 1.0, 1.5] {
            let params = ModelParams::new(omega0, omega, g * (omega0 * omega / n_spins as f64).sqrt(), 0.0, n_spins).unwrap();
            for n in [0.0, 1.0, 5.0, 20.0] {
                let e = mf_energy(&params, n).unwrap().energy;
                let j = n_spins as f64 / 2.0;
                let series = -(omega0 / 2.0) * (1.0 + 4.0 * g * g * n / eta).sqrt() + omega0 * (n - j - 1.0) / eta;
                assert!((e - series).abs() <= 2.0 * omega0 / eta, "g={g} n={n}");
            }
        }
    }

    #[test]
    fn critical_point_is_continuous() {
        let params = at(100.0, 0.5, 0.1, 200, 1.0);
        let sol = mf_excitation(&params);
        assert_eq!(sol.n_g, 0.0);
        assert_eq!(sol.phase, Phase::Normal);
        // Rationalized numerator vanishes at λ = λ_c.
        assert!(ng_rationalized(&params).abs() < 1e-9);

        let eta = 200.0;
        let sol = mf_excitation(&at(100.0, 0.5, 0.1, 200, 1.0 + 1e-4));
        assert_eq!(sol.phase, Phase::Superradiant);
        assert!(sol.n_g <= 1e-2 * eta);
    }

    #[test]
    fn delta_zero_limit_value() {
        // η = 100, g = √2.
        let params = at(100.0, 1.0, 0.0, 1000, 2f64.sqrt());
        let sol = mf_excitation(&params);
        assert!((sol.n_g - 37.5).abs() < 1e-9);
        assert!((ng_rewritten(&params).unwrap() - 37.5).abs() < 1e-9);
        assert!((sol.coherence * sol.coherence - sol.n_g).abs() <= 1e-12 * sol.n_g);
    }

    #[test]
    fn tiny_delta_matches_limit() {
        let base = mf_excitation(&at(100.0, 1.0, 0.0, 1000, 2f64.sqrt())).n_g;
        let sol = mf_excitation(&at(100.0, 1.0, 1e-6, 1000, 2f64.sqrt()));
        assert!((sol.n_g - base).abs() <= 1e-3 * base);
    }

    #[test]
    fn switch_point_branches_agree() {
        let omega = 0.7;
        let delta = DELTA_ZERO_SWITCH * omega;
        let params = at(70.0, omega, delta, 100, 1.4);
        let g_tilde = params.derive().g_tilde.unwrap();
        let limit = ng_delta_zero(&params, g_tilde);
        let rational = ng_rationalized(&params);
        assert!((limit - rational).abs() <= 1e-6 * rational);
    }

    #[test]
    fn inadmissible_phase() {
        for delta in [0.5, -0.5, 0.8] {
            let params = ModelParams::new(100.0, 0.5, 0.1, delta, 10).unwrap();
            let sol = mf_excitation(&params);
            assert_eq!(sol.phase, Phase::Inadmissible);
            assert!(sol.n_g.is_nan());
            assert!(matches!(ng_rewritten(&params), Err(Error::Inadmissible(_))));
        }
    }

    #[test]
    fn negative_delta_grows_excitation() {
        let g = 1.3;
        let base = mf_excitation(&at(100.0, 0.5, 0.0, 100, g)).n_g;
        let mut prev = base;
        for delta in [-0.1, -0.25, -0.4, -0.49] {
            let n = ng_rewritten(&at(100.0, 0.5, delta, 100, g)).unwrap();
            assert!(n > prev, "delta {delta}");
            prev = n;
        }
    }

    #[test]
    fn near_resonance_limit() {
        let omega = 0.5;
        let delta = omega * (1.0 - 1e-4);
        let params = at(50.0, omega, delta, 50, 1.2);
        let limit = ng_near_resonance(&params).unwrap();
        let full = ng_direct(&params).unwrap();
        assert!((limit - full).abs() <= 0.01 * full, "{limit} vs {full}");
    }

    #[test]
    fn near_resonance_boundary_and_trend() {
        // g̃ω = Δ → 0.
        let params = at(50.0, 0.5, 0.3, 50, 0.6);
        assert!(ng_near_resonance(&params).unwrap().abs() < 1e-12);
        assert!(ng_near_resonance(&at(50.0, 0.5, 0.3, 50, 0.5)).is_err());
        assert!(ng_near_resonance(&at(50.0, 0.5, -0.1, 50, 1.3)).is_err());

        let mut prev = f64::INFINITY;
        for delta in [0.3, 0.35, 0.4, 0.45, 0.49] {
            let n = ng_near_resonance(&at(50.0, 0.5, delta, 50, 1.3)).unwrap();
            assert!(n < prev);
            prev = n;
        }
    }

    #[test]
    fn harmonic_levels() {
        let params = ModelParams::new(100.0, 0.5, 0.2, 0.0, 100).unwrap();
        let level = harmonic_spectrum_delta0(&params, 0).unwrap();
        assert!((level.energy - (-50.0 - 25.0)).abs() < 1e-12);
        assert!(!level.low_eta_warning);
        assert!(harmonic_spectrum_delta0(&ModelParams::new(100.0, 0.5, 0.2, 0.1, 100).unwrap(), 0).is_err());
        assert!(harmonic_spectrum_delta0(&ModelParams::new(1.0, 0.5, 0.2, 0.0, 100).unwrap(), 0).unwrap().low_eta_warning);
    }

    #[test]
    fn harmonic_degeneracy_at_unit_coupling() {
        let n_spins = 1_000_000;
        let omega = 0.5;
        let params = ModelParams::new(100.0, omega, (100.0 * omega / n_spins as f64).sqrt(), 0.0, n_spins).unwrap();
        let e: Vec<f64> = (0..3).map(|n| harmonic_spectrum_delta0(&params, n).unwrap().energy).collect();
        for pair in e.windows(2) {
            assert!((pair[1] - pair[0]).abs() <= 1e-4 * omega);
        }
    }

    #[test]
    fn harmonic_instability_above_unit_coupling() {
        let n_spins = 1_000_000;
        let params =
            ModelParams::new(100.0, 0.5, 1.2 * (100.0 * 0.5 / n_spins as f64).sqrt(), 0.0, n_spins).unwrap();
        let e: Vec<f64> = (0..20).map(|n| harmonic_spectrum_delta0(&params, n).unwrap().energy).collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
    }

    fn superradiant_params() -> impl Strategy<Value = ModelParams> {
        (1.0f64..1e3, 0.1f64..2.0, -0.95f64..0.95, 2u32..200, 1.0001f64..2.0).prop_filter_map(
            "g~ defined",
            |(eta, omega, ratio, n, g)| ModelParams::from_g_tilde(eta * omega, omega, ratio * omega, n, g).ok(),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn rationalized_equals_direct(params in superradiant_params()) {
            prop_assume!(params.delta().abs() > 1e-3 * params.omega());
            let a = ng_rewritten(&params).unwrap();
            let b = ng_direct(&params).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "{} vs {}", a, b);
        }

        #[test]
        fn coherence_squares_to_excitation(params in superradiant_params()) {
            let sol = mf_excitation(&params);
            prop_assert_eq!(sol.phase, Phase::Superradiant);
            prop_assert!((sol.coherence * sol.coherence - sol.n_g).abs() <= 1e-12 * sol.n_g.max(1.0));
            prop_assert!(sol.n_g > 0.0);
        }

        #[test]
        fn admissibility_radicand_positive(params in superradiant_params()) {
            let (l, d, w) = (params.lambda(), params.delta(), params.omega());
            let radicand = (l * l + 2.0 * d * params.omega0_tilde()) / (w * w - d * d);
            prop_assert!(radicand > 0.0);
        }

        #[test]
        fn minimizer_closed_form_matches_generic(params in superradiant_params()) {
            let sol = mf_excitation(&params);
            let generic = mf_energy(&params, sol.n_g).unwrap();
            let scale = generic.energy.abs().max(1.0);
            prop_assert!((generic.energy - sol.energy).abs() <= 1e-8 * scale);
        }

        #[test]
        fn minimizer_is_a_minimum(params in superradiant_params()) {
            let sol = mf_excitation(&params);
            let e = |n: f64| mf_energy(&params, n).unwrap().energy;
            let step = 1e-3 * sol.n_g.max(1.0);
            let tol = 1e-10 * sol.energy.abs().max(1.0);
            prop_assert!(e(sol.n_g) <= e(sol.n_g + step) + tol);
            prop_assert!(e(sol.n_g) <= e((sol.n_g - step).max(0.0)) + tol);
        }
    }
}
