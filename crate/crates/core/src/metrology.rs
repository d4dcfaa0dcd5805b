//! Fidelity, quantum Fisher information and central-spin dynamics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ground_state::{find_ground_state, GroundBranch, GroundStateReport};
use crate::model::ModelTemplate;

pub const DEFAULT_QFI_STEP: f64 = 1e-5;

/// Truncation loss above which a result is flagged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-8;

/// |⟨σx⟩| within this of 1 makes the inverse variance undefined.
pub const UNDEFINED_MARGIN: f64 = 1e-12;

/// Per-point annotations carried through sweeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointFlags {
    pub undefined: bool,
    pub sector_crossing: bool,
    pub truncation_warning: bool,
}

impl PointFlags {
    pub const UNDEFINED: PointFlags = PointFlags {
        undefined: true,
        sector_crossing: false,
        truncation_warning: false,
    };

    pub fn is_empty(&self) -> bool {
        !(self.undefined || self.sector_crossing || self.truncation_warning)
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.undefined {
            out.push("undefined");
        }
        if self.sector_crossing {
            out.push("sector_crossing");
        }
        if self.truncation_warning {
            out.push("truncation_warning");
        }
        out
    }

    pub fn union(self, other: PointFlags) -> PointFlags {
        PointFlags {
            undefined: self.undefined || other.undefined,
            sector_crossing: self.sector_crossing || other.sector_crossing,
            truncation_warning: self.truncation_warning || other.truncation_warning,
        }
    }
}

/// Sampled QFI or inverse variance over a coupling grid. `None` marks an
/// undefined point.
#[derive(Clone, Debug, PartialEq)]
pub struct SensitivityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub flags: Vec<PointFlags>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityPoint {
    pub fidelity: f64,
    /// 1 − f, computed without cancellation.
    pub infidelity: f64,
    /// The two ground states live in different U(1) sectors.
    pub sector_crossing: bool,
}

fn fidelity_between(a: &GroundStateReport, b: &GroundStateReport) -> FidelityPoint {
    if a.branch != b.branch || a.n_g != b.n_g {
        return FidelityPoint {
            fidelity: 0.0,
            infidelity: 1.0,
            sector_crossing: true,
        };
    }
    if a.branch != GroundBranch::BlockMinus {
        return FidelityPoint {
            fidelity: 1.0,
            infidelity: 0.0,
            sector_crossing: false,
        };
    }
    let cos = (a.c_up * b.c_up + a.c_down * b.c_down).abs().min(1.0);
    let sin = a.c_up * b.c_down - a.c_down * b.c_up;
    let infidelity = sin * sin / (1.0 + cos);
    FidelityPoint {
        fidelity: 1.0 - infidelity,
        infidelity,
        sector_crossing: false,
    }
}

/// `|⟨ψ(g̃)|ψ(g̃+δg̃)⟩|` for exact ground states.
pub fn ground_fidelity(template: &ModelTemplate, g_tilde: f64, step: f64) -> Result<FidelityPoint> {
    let a = find_ground_state(&template.at_g_tilde(g_tilde)?);
    let b = find_ground_state(&template.at_g_tilde(g_tilde + step)?);
    Ok(fidelity_between(&a, &b))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiPoint {
    pub value: f64,
    pub sector_crossing: bool,
}

/// `F_q ≈ 8(1 − f)/δg̃²`.
pub fn qfi(template: &ModelTemplate, g_tilde: f64, step: f64) -> Result<QfiPoint> {
    if !(step > 0.0) {
        return Err(Error::domain(format!("fidelity step must be > 0, got {step}")));
    }
    let f = ground_fidelity(template, g_tilde, step)?;
    Ok(QfiPoint {
        value: 8.0 * f.infidelity / (step * step),
        sector_crossing: f.sector_crossing,
    })
}

pub fn qfi_sweep(template: &ModelTemplate, grid: &[f64], step: f64) -> Result<SensitivityCurve> {
    check_grid(grid)?;
    let points: Vec<(Option<f64>, PointFlags)> = grid
        .par_iter()
        .map(|&g| match qfi(template, g, step) {
            Ok(q) => (
                Some(q.value),
                PointFlags {
                    sector_crossing: q.sector_crossing,
                    ..PointFlags::default()
                },
            ),
            Err(_) => (None, PointFlags::UNDEFINED),
        })
        .collect();
    let (values, flags) = points.into_iter().unzip();
    Ok(SensitivityCurve {
        grid: grid.to_vec(),
        values,
        flags,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// Poisson weights of a bosonic coherent state.
    #[default]
    BosonicCoherent,
    /// Binomial weights over Dicke levels with mean α².
    SpinCoherent,
}

/// Probe state `(b↑|↑⟩ + b↓|↓⟩) ⊗ Σ d_n |n⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState {
    b_up: Complex64,
    b_down: Complex64,
    alpha_probe: f64,
    weight_kind: WeightKind,
    truncation: Option<u32>,
}

impl InitialState {
    pub fn new(b_up: Complex64, b_down: Complex64, alpha_probe: f64, weight_kind: WeightKind) -> Result<Self> {
        let norm = b_up.norm_sqr() + b_down.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("|b_up|^2 + |b_down|^2 = {norm}, expected 1")));
        }
        if !(alpha_probe >= 0.0 && alpha_probe.is_finite()) {
            return Err(Error::domain(format!("probe amplitude must be >= 0, got {alpha_probe}")));
        }
        Ok(Self {
            b_up,
            b_down,
            alpha_probe,
            weight_kind,
            truncation: None,
        })
    }

    /// b↑ = b↓ = 1/√2 with bosonic weights.
    pub fn equal_superposition(alpha_probe: f64) -> Result<Self> {
        let b = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(b, b, alpha_probe, WeightKind::BosonicCoherent)
    }

    pub fn with_weight_kind(self, weight_kind: WeightKind) -> Self {
        Self { weight_kind, ..self }
    }

    /// Explicit cutoff n_max; clipped to 2j when weights are built.
    pub fn with_truncation(self, n_max: u32) -> Self {
        Self {
            truncation: Some(n_max),
            ..self
        }
    }

    pub fn b_up(&self) -> Complex64 {
        self.b_up
    }

    pub fn b_down(&self) -> Complex64 {
        self.b_down
    }

    pub fn alpha_probe(&self) -> f64 {
        self.alpha_probe
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight_kind
    }

    pub fn truncation(&self, n_spins: u32) -> u32 {
        self.truncation
            .unwrap_or_else(|| default_truncation(self.alpha_probe))
            .min(n_spins)
    }

    pub fn weights(&self, n_spins: u32) -> Result<ProbeWeights> {
        let n_max = self.truncation(n_spins);
        let alpha = self.alpha_probe;
        let log_p: Vec<f64> = match self.weight_kind {
            WeightKind::BosonicCoherent => {
                let mut out = Vec::with_capacity(n_max as usize + 1);
                let mut lp = -alpha * alpha;
                out.push(lp);
                for n in 1..=n_max {
                    lp += 2.0 * alpha.ln() - (n as f64).ln();
                    out.push(lp);
                }
                out
            }
            WeightKind::SpinCoherent => {
                let total = n_spins as f64;
                let q = alpha * alpha / total;
                if q >= 1.0 {
                    return Err(Error::domain(format!("spin-coherent probe needs alpha^2 < N, got {}", alpha * alpha)));
                }
                let mut out = Vec::with_capacity(n_max as usize + 1);
                let mut lp = total * (-q).ln_1p();
                out.push(lp);
                for n in 1..=n_max {
                    lp += ((total - n as f64 + 1.0) / n as f64).ln() + q.ln() - (-q).ln_1p();
                    out.push(lp);
                }
                out
            }
        };
        let mut probabilities: Vec<f64> = log_p.iter().map(|lp| lp.exp()).collect();
        if alpha == 0.0 {
            probabilities.iter_mut().skip(1).for_each(|p| *p = 0.0);
            probabilities[0] = 1.0;
        }
        let kept: f64 = probabilities.iter().sum();
        let truncation_loss = (1.0 - kept).max(0.0);
        probabilities.iter_mut().for_each(|p| *p /= kept);
        Ok(ProbeWeights {
            probabilities,
            truncation_loss,
            truncation_warning: truncation_loss > TRUNCATION_TOLERANCE,
        })
    }
}

/// `⌈α² + 10α + 20⌉`.
pub fn default_truncation(alpha: f64) -> u32 {
    (alpha * alpha + 10.0 * alpha + 20.0).ceil() as u32
}

/// Renormalized |d_n|², n = 0..=n_max.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeWeights {
    pub probabilities: Vec<f64>,
    pub truncation_loss: f64,
    pub truncation_warning: bool,
}

/// ω̃g̃² + Δ; the phase of level n is `2 (ω̃g̃² + Δ) n t`.
fn frequency(template: &ModelTemplate, g_tilde: f64) -> f64 {
    template.omega_tilde() * g_tilde * g_tilde + template.delta
}

/// Period T = π/(ω̃g̃² + Δ) of ⟨σx(t)⟩.
pub fn sigma_x_period(template: &ModelTemplate, g_tilde: f64) -> f64 {
    PI / frequency(template, g_tilde)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaX {
    pub value: f64,
    pub truncation_warning: bool,
}

struct Signal {
    value: f64,
    derivative: f64,
}

fn signal(template: &ModelTemplate, state: &InitialState, weights: &ProbeWeights, t: f64, g_tilde: f64) -> Signal {
    let rate = 2.0 * frequency(template, g_tilde) * t;
    let slope = 4.0 * template.omega_tilde() * g_tilde * t;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for (n, &p) in weights.probabilities.iter().enumerate() {
        let n = n as f64;
        let term = Complex64::from_polar(p, rate * n);
        sum += term;
        dsum += term * Complex64::new(0.0, slope * n);
    }
    let coherence = state.b_up.conj() * state.b_down;
    Signal {
        value: (2.0 * (coherence * sum).re).clamp(-1.0, 1.0),
        derivative: 2.0 * (coherence * dsum).re,
    }
}

/// ⟨σx(t)⟩ = 2 Re{b↑* b↓ Σ_n |d_n|² e^{i 2(ω̃g̃²+Δ) n t}}.
pub fn sigma_x_expectation(template: &ModelTemplate, state: &InitialState, t: f64, g_tilde: f64) -> Result<SigmaX> {
    let weights = state.weights(template.n_spins)?;
    Ok(SigmaX {
        value: signal(template, state, &weights, t, g_tilde).value,
        truncation_warning: weights.truncation_warning,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DerivativeMode {
    #[default]
    Analytic,
    /// Five-point central difference in g̃; diagnostic only.
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseVariancePoint {
    /// `None` when |⟨σx⟩| is 1 to within [`UNDEFINED_MARGIN`].
    pub value: Option<f64>,
    pub sigma_x: f64,
    pub derivative: f64,
    pub truncation_warning: bool,
}

/// `F_g̃ = (∂⟨σx⟩/∂g̃)² / (1 − ⟨σx⟩²)` with the probe held fixed.
pub fn inverse_variance(
    template: &ModelTemplate,
    state: &InitialState,
    t: f64,
    g_tilde: f64,
    mode: DerivativeMode,
) -> Result<InverseVariancePoint> {
    let weights = state.weights(template.n_spins)?;
    let s = signal(template, state, &weights, t, g_tilde);
    let derivative = match mode {
        DerivativeMode::Analytic => s.derivative,
        DerivativeMode::FiniteDifference => {
            let n_max = (weights.probabilities.len() - 1) as f64;
            let scale = (t * 4.0 * template.omega_tilde() * g_tilde * n_max).abs();
            let h = 1e-3 / (1.0 + scale);
            let at = |k: f64| signal(template, state, &weights, t, g_tilde + k * h).value;
            (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h)
        }
    };
    let value = (1.0 - s.value.abs() >= UNDEFINED_MARGIN).then(|| derivative * derivative / (1.0 - s.value * s.value));
    Ok(InverseVariancePoint {
        value,
        sigma_x: s.value,
        derivative,
        truncation_warning: weights.truncation_warning,
    })
}

pub fn inverse_variance_sweep(
    template: &ModelTemplate,
    state: &InitialState,
    t: f64,
    grid: &[f64],
    mode: DerivativeMode,
) -> Result<SensitivityCurve> {
    check_grid(grid)?;
    state.weights(template.n_spins)?;
    let points: Vec<(Option<f64>, PointFlags)> = grid
        .par_iter()
        .map(|&g| {
            let p = inverse_variance(template, state, t, g, mode).expect("weights validated above");
            let flags = PointFlags {
                undefined: p.value.is_none(),
                truncation_warning: p.truncation_warning,
                ..PointFlags::default()
            };
            (p.value, flags)
        })
        .collect();
    let (values, flags) = points.into_iter().unzip();
    Ok(SensitivityCurve {
        grid: grid.to_vec(),
        values,
        flags,
    })
}

/// Local maxima whose height is at least `min_fraction` of the curve maximum.
/// Undefined points count as zero.
pub fn count_peaks(values: &[Option<f64>], min_fraction: f64) -> usize {
    let v: Vec<f64> = values.iter().map(|x| x.unwrap_or(0.0)).collect();
    let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(top > 0.0) {
        return 0;
    }
    v.windows(3)
        .filter(|w| w[1] > w[0] && w[1] >= w[2] && w[1] >= min_fraction * top)
        .count()
}
