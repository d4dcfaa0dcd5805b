//! Low-energy effective Hamiltonians on either side of the transition.

use crate::error::{Error, Result};
use crate::mean_field::{mf_excitation, omega_bar_0_at_minimum, Phase};
use crate::model::ModelParams;

#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
    /// `(λ² + 2Δω̃₀)/(ω² − Δ²)`; `None` when |Δ| = ω.
    pub radicand: Option<f64>,
}

/// A superradiant transition needs |Δ| < ω.
pub fn qpt_admissible(params: &ModelParams) -> Admissibility {
    let (omega, delta, lambda) = (params.omega(), params.delta(), params.lambda());
    let denom = omega * omega - delta * delta;
    let radicand = (denom != 0.0).then(|| (lambda * lambda + 2.0 * delta * params.omega0_tilde()) / denom);
    let (admissible, reason) = if delta >= omega {
        (false, format!("delta = {delta} >= omega = {omega}"))
    } else if delta <= -omega {
        (false, format!("delta = {delta} <= -omega = {}", -omega))
    } else {
        (true, format!("|delta| = {} < omega = {omega}", delta.abs()))
    };
    Admissibility {
        admissible,
        reason,
        radicand,
    }
}

fn require_admissible(params: &ModelParams) -> Result<f64> {
    let adm = qpt_admissible(params);
    if !adm.admissible {
        return Err(Error::inadmissible(adm.reason));
    }
    params
        .derive()
        .g_tilde
        .ok_or_else(|| Error::inadmissible("g~ undefined: omega0 - N delta <= 0"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalPhaseEffective {
    /// −ω̃₀/2 − ωj
    pub constant: f64,
    /// ω̃(1 − g̃²)
    pub gap: f64,
    /// λ/ω̃₀, amplitude of the generator.
    pub sw_coefficient: f64,
}

pub fn normal_effective(params: &ModelParams) -> Result<NormalPhaseEffective> {
    let g_tilde = require_admissible(params)?;
    Ok(NormalPhaseEffective {
        constant: -params.omega0_tilde() / 2.0 - params.omega() * params.j(),
        gap: params.omega_tilde() * (1.0 - g_tilde * g_tilde),
        sw_coefficient: params.lambda() / params.omega0_tilde(),
    })
}

/// Displaced-frame parameters in the superradiant phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperradiantFrame {
    /// Real, nonnegative displacement; α² = n_g.
    pub alpha: f64,
    pub theta: f64,
    pub omega_bar0: f64,
    /// Coefficient of x²; positive, equal to λ²/(4ω̄₀) at the minimizer.
    pub kappa0: f64,
    /// The opposite-sign convention for κ₀, kept for reference.
    pub kappa0_negated: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// ωα² − ω̄₀/2 − ωj
    pub ground_energy: f64,
}

impl SuperradiantFrame {
    /// `ωω̄₀ − (2Δ²α² + λ² + Δω̃₀)`, zero at the mean-field minimizer.
    pub fn relation_residual(&self, params: &ModelParams) -> f64 {
        let (omega, delta, lambda) = (params.omega(), params.delta(), params.lambda());
        omega * self.omega_bar0
            - (2.0 * delta * delta * self.alpha * self.alpha + lambda * lambda + delta * params.omega0_tilde())
    }
}

pub fn superradiant_frame(params: &ModelParams) -> Result<SuperradiantFrame> {
    let g_tilde = require_admissible(params)?;
    let sol = mf_excitation(params);
    if g_tilde <= 1.0 || sol.phase != Phase::Superradiant {
        return Err(Error::domain(format!("g~ = {g_tilde} is in the normal phase")));
    }
    let (omega, delta, lambda, w0t) = (params.omega(), params.delta(), params.lambda(), params.omega0_tilde());
    let alpha = sol.coherence;
    let a2 = alpha * alpha;
    let omega_bar0 = omega_bar_0_at_minimum(params);
    let theta = 0.5 * (2.0 * alpha * lambda).atan2(2.0 * a2 * delta + w0t);

    let kappa0 = omega / 4.0 - (2.0 * a2 * delta * delta + delta * w0t) / (4.0 * omega_bar0);
    let kappa1 = omega * alpha - (lambda * lambda * alpha + 2.0 * a2 * alpha * delta * delta + delta * alpha * w0t) / omega_bar0;
    let kappa2 = omega / 4.0 - (2.0 * a2 * delta * delta + delta * w0t + lambda * lambda) / (4.0 * omega_bar0);

    Ok(SuperradiantFrame {
        alpha,
        theta,
        omega_bar0,
        kappa0,
        kappa0_negated: -kappa0,
        kappa1,
        kappa2,
        ground_energy: omega * a2 - omega_bar0 / 2.0 - omega * params.j(),
    })
}
