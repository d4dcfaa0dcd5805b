use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ground_state::{EnergyRoute, DEFAULT_FD_STEP};
use crate::metrology::{InitialState, WeightKind, DEFAULT_QFI_STEP};
use crate::model::{CouplingAxis, ModelTemplate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    GTilde,
    Delta,
    Eta,
    Time,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::GTilde => "g_tilde",
            SweepAxis::Delta => "delta",
            SweepAxis::Eta => "eta",
            SweepAxis::Time => "time",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Exact ground energy.
    Energy,
    /// Mean-field ground energy.
    EnergyMf,
    D2Energy,
    NGExact,
    NGMf,
    Coherence,
    Qfi,
    InverseVariance,
    SigmaX,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Energy,
        Quantity::EnergyMf,
        Quantity::D2Energy,
        Quantity::NGExact,
        Quantity::NGMf,
        Quantity::Coherence,
        Quantity::Qfi,
        Quantity::InverseVariance,
        Quantity::SigmaX,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Energy => "energy",
            Quantity::EnergyMf => "energy_mf",
            Quantity::D2Energy => "d2_energy",
            Quantity::NGExact => "n_g_exact",
            Quantity::NGMf => "n_g_mf",
            Quantity::Coherence => "coherence",
            Quantity::Qfi => "qfi",
            Quantity::InverseVariance => "inverse_variance",
            Quantity::SigmaX => "sigma_x",
        }
    }

    pub fn is_dynamics(&self) -> bool {
        matches!(self, Quantity::InverseVariance | Quantity::SigmaX)
    }

    /// Needs an exact ground state per point.
    pub fn is_exact(&self) -> bool {
        matches!(self, Quantity::Energy | Quantity::D2Energy | Quantity::NGExact | Quantity::Qfi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Steps {
    pub h_fd: f64,
    pub delta_g_qfi: f64,
    pub energy_route: EnergyRoute,
}

impl Default for Steps {
    fn default() -> Self {
        Self {
            h_fd: DEFAULT_FD_STEP,
            delta_g_qfi: DEFAULT_QFI_STEP,
            energy_route: EnergyRoute::Continuum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeSettings {
    pub b_up: Complex64,
    pub b_down: Complex64,
    pub alpha: f64,
    pub weights: WeightKind,
    pub truncation: Option<u32>,
}

impl ProbeSettings {
    pub fn equal_superposition(alpha: f64) -> Self {
        let b = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            b_up: b,
            b_down: b,
            alpha,
            weights: WeightKind::BosonicCoherent,
            truncation: None,
        }
    }

    pub fn state(&self) -> Result<InitialState> {
        let state = InitialState::new(self.b_up, self.b_down, self.alpha, self.weights)?;
        Ok(match self.truncation {
            Some(n) => state.with_truncation(n),
            None => state,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSettings {
    pub omega0: f64,
    pub omega: f64,
    pub delta: f64,
    /// `None` selects N automatically.
    pub n_spins: Option<u32>,
    /// Fixed coupling for sweeps along other axes.
    pub g_tilde: Option<f64>,
    /// Evolution time for dynamics quantities.
    pub time: Option<f64>,
    pub coupling_axis: CouplingAxis,
}

impl ModelSettings {
    pub fn new(omega0: f64, omega: f64, delta: f64) -> Self {
        Self {
            omega0,
            omega,
            delta,
            n_spins: None,
            g_tilde: None,
            time: None,
            coupling_axis: CouplingAxis::Reduced,
        }
    }

    pub fn template(&self, n_spins: u32) -> ModelTemplate {
        ModelTemplate::new(self.omega0, self.omega, self.delta, n_spins).with_axis(self.coupling_axis)
    }
}

/// A single curve: one quantity along one axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub model: ModelSettings,
    pub axis: SweepAxis,
    pub grid: Grid,
    pub quantity: Quantity,
    pub output: Option<PathBuf>,
    pub plot: bool,
    pub probe: Option<ProbeSettings>,
    pub steps: Steps,
    pub preset: Option<String>,
    /// Short tag distinguishing curves of a preset.
    pub label: Option<String>,
    /// Values chosen by us where the source setup is silent.
    pub reproduction_choices: Vec<String>,
}

impl SweepConfig {
    pub fn new(model: ModelSettings, axis: SweepAxis, grid: Grid, quantity: Quantity) -> Self {
        Self {
            model,
            axis,
            grid,
            quantity,
            output: None,
            plot: false,
            probe: None,
            steps: Steps::default(),
            preset: None,
            label: None,
            reproduction_choices: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let g = &self.grid;
        if g.points < 2 {
            return bad(format!("grid.points must be >= 2, got {}", g.points));
        }
        if !(g.start.is_finite() && g.stop.is_finite() && g.start < g.stop) {
            return bad(format!("grid needs start < stop, got [{}, {}]", g.start, g.stop));
        }
        let m = &self.model;
        if !(m.omega0 > 0.0 && m.omega > 0.0 && m.delta.is_finite()) {
            return bad("model needs omega0 > 0, omega > 0 and finite delta".into());
        }
        if m.n_spins == Some(0) {
            return bad("model.n_spins must be >= 1".into());
        }
        match self.axis {
            SweepAxis::GTilde if g.start < 0.0 => return bad("g_tilde grid must be >= 0".into()),
            SweepAxis::Eta if g.start <= 0.0 => return bad("eta grid must be > 0".into()),
            SweepAxis::Time if !self.quantity.is_dynamics() => {
                return bad(format!("axis time needs a dynamics quantity, got {}", self.quantity.name()))
            }
            _ => {}
        }
        if self.axis != SweepAxis::GTilde && m.g_tilde.is_none() {
            return bad(format!("axis {} needs model.g_tilde", self.axis.name()));
        }
        if self.quantity.is_dynamics() {
            let Some(probe) = &self.probe else {
                return bad(format!("quantity {} needs a [probe] table", self.quantity.name()));
            };
            probe.state()?;
            if self.axis != SweepAxis::Time && m.time.is_none() {
                return bad(format!("quantity {} needs model.time", self.quantity.name()));
            }
        }
        if !(self.steps.h_fd > 0.0) {
            return bad("steps.h_fd must be > 0".into());
        }
        if !(self.steps.delta_g_qfi > 0.0) {
            return bad("steps.delta_g_qfi must be > 0".into());
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let config = raw.resolve()?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}

impl FromStr for SweepConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_toml_str(s)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    quantity: Quantity,
    #[serde(default = "default_axis")]
    axis: SweepAxis,
    output: Option<PathBuf>,
    #[serde(default)]
    plot: bool,
    model: RawModel,
    grid: RawGrid,
    #[serde(default)]
    steps: RawSteps,
    probe: Option<RawProbe>,
}

fn default_axis() -> SweepAxis {
    SweepAxis::GTilde
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    omega0: Option<f64>,
    eta: Option<f64>,
    omega: f64,
    #[serde(default)]
    delta: f64,
    n_spins: Option<u32>,
    g_tilde: Option<f64>,
    time: Option<f64>,
    #[serde(default)]
    coupling_axis: RawCouplingAxis,
}

#[derive(Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawCouplingAxis {
    #[default]
    Reduced,
    Nominal,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    start: f64,
    stop: f64,
    points: usize,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSteps {
    h_fd: Option<f64>,
    delta_g_qfi: Option<f64>,
    energy_route: Option<RawRoute>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawRoute {
    Integer,
    Continuum,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawWeights {
    BosonicCoherent,
    SpinCoherent,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProbe {
    /// `[re, im]`
    b_up: Option<[f64; 2]>,
    b_down: Option<[f64; 2]>,
    alpha: f64,
    weights: Option<RawWeights>,
    truncation: Option<u32>,
}

impl RawConfig {
    fn resolve(self) -> Result<SweepConfig> {
        let m = self.model;
        let omega0 = match (m.omega0, m.eta) {
            (Some(w0), None) => w0,
            (None, Some(eta)) => eta * m.omega,
            (Some(_), Some(_)) => return Err(Error::Config("give model.omega0 or model.eta, not both".into())),
            (None, None) => return Err(Error::Config("model.omega0 or model.eta is required".into())),
        };
        let model = ModelSettings {
            omega0,
            omega: m.omega,
            delta: m.delta,
            n_spins: m.n_spins,
            g_tilde: m.g_tilde,
            time: m.time,
            coupling_axis: match m.coupling_axis {
                RawCouplingAxis::Reduced => CouplingAxis::Reduced,
                RawCouplingAxis::Nominal => CouplingAxis::Nominal,
            },
        };
        let defaults = Steps::default();
        let steps = Steps {
            h_fd: self.steps.h_fd.unwrap_or(defaults.h_fd),
            delta_g_qfi: self.steps.delta_g_qfi.unwrap_or(defaults.delta_g_qfi),
            energy_route: match self.steps.energy_route {
                Some(RawRoute::Integer) => EnergyRoute::Integer,
                Some(RawRoute::Continuum) => EnergyRoute::Continuum,
                None => defaults.energy_route,
            },
        };
        let probe = self.probe.map(|p| {
            let half = std::f64::consts::FRAC_1_SQRT_2;
            let c = |v: Option<[f64; 2]>| v.map_or(Complex64::new(half, 0.0), |[re, im]| Complex64::new(re, im));
            ProbeSettings {
                b_up: c(p.b_up),
                b_down: c(p.b_down),
                alpha: p.alpha,
                weights: match p.weights {
                    Some(RawWeights::SpinCoherent) => WeightKind::SpinCoherent,
                    _ => WeightKind::BosonicCoherent,
                },
                truncation: p.truncation,
            }
        });
        let mut config = SweepConfig::new(
            model,
            self.axis,
            Grid {
                start: self.grid.start,
                stop: self.grid.stop,
                points: self.grid.points,
            },
            self.quantity,
        );
        config.output = self.output;
        config.plot = self.plot;
        config.probe = probe;
        config.steps = steps;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
quantity = "n_g_exact"

[model]
eta = 100
omega = 0.5
delta = 0.0

[grid]
start = 0.0
stop = 1.0
points = 50
"#;

    #[test]
    fn parses_minimal_config() {
        let c: SweepConfig = BASIC.parse().unwrap();
        assert_eq!(c.quantity, Quantity::NGExact);
        assert_eq!(c.axis, SweepAxis::GTilde);
        assert_eq!(c.model.omega0, 50.0);
        assert_eq!(c.model.n_spins, None);
        assert_eq!(c.steps, Steps::default());
        let grid = c.grid.values();
        assert_eq!(grid.len(), 50);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[49], 1.0);
    }

    #[test]
    fn rejects_bad_grid() {
        let text = BASIC.replace("points = 50", "points = 1");
        assert!(matches!(text.parse::<SweepConfig>(), Err(Error::Config(_))));
        let text = BASIC.replace("stop = 1.0", "stop = -1.0");
        assert!(text.parse::<SweepConfig>().is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = BASIC.replace("delta = 0.0", "delta = 0.0\nfoo = 1");
        assert!(matches!(text.parse::<SweepConfig>(), Err(Error::Config(_))));
    }

    #[test]
    fn dynamics_need_probe_and_time() {
        let text = BASIC.replace("n_g_exact", "sigma_x");
        assert!(text.parse::<SweepConfig>().is_err());
        let text = format!("{}\n[probe]\nalpha = 2.0\n", BASIC.replace("n_g_exact", "sigma_x"));
        assert!(text.parse::<SweepConfig>().is_err());
        let text = format!(
            "{}\n[probe]\nalpha = 2.0\n",
            BASIC.replace("n_g_exact", "sigma_x").replace("delta = 0.0", "delta = 0.0\ntime = 3.0")
        );
        let c: SweepConfig = text.parse().unwrap();
        assert_eq!(c.probe.unwrap().alpha, 2.0);
    }

    #[test]
    fn non_coupling_axis_needs_fixed_coupling() {
        let text = format!("axis = \"delta\"\n{BASIC}");
        assert!(text.parse::<SweepConfig>().is_err());
        let text = format!("axis = \"delta\"\n{}", BASIC.replace("delta = 0.0", "g_tilde = 1.2"));
        assert_eq!(text.parse::<SweepConfig>().unwrap().axis, SweepAxis::Delta);
    }

    #[test]
    fn omega0_and_eta_are_exclusive() {
        let text = BASIC.replace("eta = 100", "eta = 100\nomega0 = 50");
        assert!(text.parse::<SweepConfig>().is_err());
    }
}
