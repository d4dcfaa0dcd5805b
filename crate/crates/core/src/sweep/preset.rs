//! Curve families behind the reference figures.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::CouplingAxis;

use super::config::{Grid, ModelSettings, ProbeSettings, Quantity, SweepAxis, SweepConfig};
use super::emit::emit;
use super::run::{run_sweep, run_sweep_with_threads};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5a,
        Preset::Fig5b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3 => "fig3",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
        }
    }

    /// One config per curve.
    pub fn configs(&self) -> Vec<SweepConfig> {
        match self {
            Preset::Fig1a => FIG1_DELTAS
                .iter()
                .map(|&d| {
                    let mut c = curve(*self, ModelSettings::new(100.0, 0.5, d), grid(0.5, 1.5, 400), Quantity::D2Energy);
                    c.reproduction_choices.push("delta family {-0.25, -0.1, 0.1, 0.25} shared with fig1b".into());
                    c.reproduction_choices.push("second derivative on the continuum ground-energy route, h = 1e-3".into());
                    c
                })
                .collect(),
            Preset::Fig1b => FIG1_DELTAS
                .iter()
                .flat_map(|&d| {
                    [Quantity::Energy, Quantity::EnergyMf]
                        .map(|q| curve(*self, ModelSettings::new(100.0, 0.5, d), grid(0.0, 1.5, 151), q))
                })
                .collect(),
            Preset::Fig2a => n_g_family(*self, &[0.0, -0.1, -0.25, -0.4]),
            Preset::Fig2b => {
                let mut configs = n_g_family(*self, &[0.1, 0.25, 0.4]);
                for c in &mut configs {
                    c.reproduction_choices.push("delta family {0.1, 0.25, 0.4}".into());
                }
                configs
            }
            Preset::Fig3 => [0.0, -0.1, -0.25, -0.4, 0.1, 0.25, 0.4]
                .iter()
                .map(|&d| curve(*self, ModelSettings::new(50.0, 0.5, d), grid(0.0, 2.0, 201), Quantity::Coherence))
                .collect(),
            Preset::Fig4a => [1e2, 1e3, 1e4]
                .iter()
                .map(|&eta| {
                    let mut c = curve(*self, ModelSettings::new(eta * 0.1, 0.1, 0.0), grid(0.5, 1.5, 201), Quantity::Qfi);
                    c.label = Some(format!("qfi_eta{eta}"));
                    c.reproduction_choices.push("delta = 0".into());
                    c
                })
                .collect(),
            Preset::Fig4b => [-0.15, -0.05, 0.05, 0.15]
                .iter()
                .map(|&d| {
                    let mut model = ModelSettings::new(1000.0, 0.1, d);
                    model.n_spins = Some(FIG4B_N);
                    model.coupling_axis = CouplingAxis::Nominal;
                    let mut c = curve(*self, model, grid(0.5, 1.5, 201), Quantity::Qfi);
                    c.reproduction_choices.push("delta family {-0.15, -0.05, 0.05, 0.15}".into());
                    c.reproduction_choices.push(format!("N = {FIG4B_N} for every curve"));
                    c.reproduction_choices
                        .push("coupling axis uses sqrt(|omega~ omega0~| / N) where omega~ omega0~ < 0".into());
                    c
                })
                .collect(),
            Preset::Fig5a => dynamics_family(*self, 1.0),
            Preset::Fig5b => dynamics_family(*self, 2.0),
        }
    }
}

/// Runs every curve of `preset` and writes `<dir>/<name>_<label>.csv` (plus
/// SVGs with `plot`). `threads = None` uses the global pool.
pub fn emit_preset(preset: Preset, dir: &Path, plot: bool, threads: Option<usize>) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for config in preset.configs() {
        let result = match threads {
            Some(t) => run_sweep_with_threads(&config, t)?,
            None => run_sweep(&config)?,
        };
        let label = config.label.as_deref().unwrap_or("curve");
        let path = dir.join(format!("{}_{label}.csv", preset.name()));
        written.extend(emit(&result, &path, plot)?);
    }
    Ok(written)
}

const FIG1_DELTAS: [f64; 4] = [-0.25, -0.1, 0.1, 0.25];
const FIG4B_N: u32 = 2000;
const FIG5_ALPHA: f64 = 2.0;

fn grid(start: f64, stop: f64, points: usize) -> Grid {
    Grid { start, stop, points }
}

fn curve(preset: Preset, model: ModelSettings, grid: Grid, quantity: Quantity) -> SweepConfig {
    let label = format!("{}_delta{}", quantity.name(), model.delta);
    let mut c = SweepConfig::new(model, SweepAxis::GTilde, grid, quantity);
    c.preset = Some(preset.name().into());
    c.label = Some(label);
    c.reproduction_choices.push(format!(
        "g_tilde grid [{}, {}] with {} points",
        grid.start, grid.stop, grid.points
    ));
    if model.n_spins.is_none() {
        c.reproduction_choices
            .push("N from the automatic ladder 16*2^(k/4) with n_g_mf <= N/10".into());
    }
    c
}

fn n_g_family(preset: Preset, deltas: &[f64]) -> Vec<SweepConfig> {
    deltas
        .iter()
        .flat_map(|&d| {
            [Quantity::NGExact, Quantity::NGMf]
                .map(|q| curve(preset, ModelSettings::new(50.0, 0.5, d), grid(0.0, 2.0, 201), q))
        })
        .collect()
}

/// `periods` counts units of 2π/ω̃ in the evolution time.
fn dynamics_family(preset: Preset, periods: f64) -> Vec<SweepConfig> {
    [-0.02, 0.0, 0.02]
        .iter()
        .map(|&d| {
            let mut model = ModelSettings::new(1000.0, 0.1, d);
            model.time = Some(periods * 2.0 * PI / (model.omega - d));
            let mut c = curve(preset, model, grid(0.8, 1.0, 2001), Quantity::InverseVariance);
            c.probe = Some(ProbeSettings::equal_superposition(FIG5_ALPHA));
            c.reproduction_choices.push(format!("probe alpha = {FIG5_ALPHA}, bosonic coherent weights"));
            c.reproduction_choices.push("omega = 0.1, eta = 1e4".into());
            c.reproduction_choices.push("delta family {-0.02, 0, 0.02}".into());
            c
        })
        .collect()
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
            Error::Config(format!("unknown preset {s:?}; known presets: {}", names.join(", ")))
        })
    }
}
