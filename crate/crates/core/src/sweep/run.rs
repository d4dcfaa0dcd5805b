use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ground_state::{find_ground_state, ground_energy};
use crate::mean_field::{mf_excitation, Phase};
use crate::metrology::{
    inverse_variance, qfi, sigma_x_expectation, DerivativeMode, InitialState, PointFlags,
};
use crate::model::ModelTemplate;

use super::config::{Quantity, SweepAxis, SweepConfig};

/// Largest N the automatic policy will pick.
pub const N_CAP: u32 = 65_536;
const N_FLOOR: u32 = 16;
/// Target bound n_g ≤ N · N_RATIO.
const N_RATIO: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NPolicy {
    Fixed,
    /// Chosen from the ladder; `bound_met` is false when no rung satisfies
    /// n_g ≤ N/10.
    Auto { bound_met: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NResolution {
    pub n_spins: u32,
    pub policy: NPolicy,
}

/// Rungs `16 · 2^(k/4)` up to [`N_CAP`], then the small values below 16.
fn ladder() -> Vec<u32> {
    let mut rungs: Vec<u32> = (0..)
        .map(|k| (N_FLOOR as f64 * 2f64.powf(k as f64 / 4.0)).round() as u32)
        .take_while(|&n| n <= N_CAP)
        .collect();
    rungs.dedup();
    rungs.extend((1..N_FLOOR).rev());
    rungs
}

/// (template, coupling) pairs at which the bound is checked.
fn probe_points(config: &SweepConfig, n_spins: u32) -> Vec<(ModelTemplate, f64)> {
    let base = config.model.template(n_spins);
    let g = config.model.g_tilde.unwrap_or(config.grid.stop);
    let ends = [config.grid.start, config.grid.stop];
    match config.axis {
        SweepAxis::GTilde => vec![(base, config.grid.stop)],
        SweepAxis::Time => vec![(base, g)],
        SweepAxis::Delta => ends.iter().map(|&d| (base.with_delta(d), g)).collect(),
        SweepAxis::Eta => ends
            .iter()
            .map(|&eta| {
                let mut t = base;
                t.omega0 = eta * t.omega;
                (t, g)
            })
            .collect(),
    }
}

/// Worst n_g/N over the check points, or `None` if some point has ω̃₀ ≤ 0.
fn excitation_ratio(config: &SweepConfig, n_spins: u32) -> Option<f64> {
    let mut worst: f64 = 0.0;
    for (template, g) in probe_points(config, n_spins) {
        if template.omega0_tilde() <= 0.0 {
            return None;
        }
        if let Ok(params) = template.at_g_tilde(g) {
            let sol = mf_excitation(&params);
            if sol.phase != Phase::Inadmissible {
                worst = worst.max(sol.n_g / n_spins as f64);
            }
        }
    }
    Some(worst)
}

pub fn resolve_n_spins(config: &SweepConfig) -> Result<NResolution> {
    if let Some(n) = config.model.n_spins {
        return Ok(NResolution {
            n_spins: n,
            policy: NPolicy::Fixed,
        });
    }
    let min_n = match (&config.probe, config.quantity.is_dynamics()) {
        (Some(p), true) => 10 * p.state()?.truncation(u32::MAX),
        _ => 1,
    };
    let mut fallback: Option<(f64, u32)> = None;
    for n in ladder() {
        let Some(ratio) = excitation_ratio(config, n) else { continue };
        if n >= min_n && ratio <= N_RATIO {
            return Ok(NResolution {
                n_spins: n,
                policy: NPolicy::Auto { bound_met: true },
            });
        }
        if n >= min_n && fallback.map_or(true, |(r, _)| ratio < r) {
            fallback = Some((ratio, n));
        }
    }
    fallback
        .map(|(_, n)| NResolution {
            n_spins: n,
            policy: NPolicy::Auto { bound_met: false },
        })
        .ok_or_else(|| Error::Config("no N on the ladder keeps omega0 - N delta > 0".into()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub axis: f64,
    /// `None` for undefined points.
    pub value: Option<f64>,
    pub flags: PointFlags,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Input config with N filled in.
    pub config: SweepConfig,
    pub n: NResolution,
    pub rows: Vec<Row>,
}

struct Point {
    template: ModelTemplate,
    g_tilde: f64,
    time: f64,
}

fn point_at(config: &SweepConfig, base: &ModelTemplate, x: f64) -> Point {
    let g_tilde = config.model.g_tilde.unwrap_or(0.0);
    let time = config.model.time.unwrap_or(0.0);
    match config.axis {
        SweepAxis::GTilde => Point {
            template: *base,
            g_tilde: x,
            time,
        },
        SweepAxis::Delta => Point {
            template: base.with_delta(x),
            g_tilde,
            time,
        },
        SweepAxis::Eta => {
            let mut template = *base;
            template.omega0 = x * template.omega;
            Point {
                template,
                g_tilde,
                time,
            }
        }
        SweepAxis::Time => Point {
            template: *base,
            g_tilde,
            time: x,
        },
    }
}

fn defined(value: f64) -> (Option<f64>, PointFlags) {
    if value.is_finite() {
        (Some(value), PointFlags::default())
    } else {
        (None, PointFlags::UNDEFINED)
    }
}

fn evaluate(config: &SweepConfig, probe: Option<&InitialState>, p: &Point) -> Result<(Option<f64>, PointFlags)> {
    let q = config.quantity;
    if q.is_dynamics() {
        let state = probe.expect("validated probe");
        return Ok(match q {
            Quantity::SigmaX => {
                let sx = sigma_x_expectation(&p.template, state, p.time, p.g_tilde)?;
                (
                    Some(sx.value),
                    PointFlags {
                        truncation_warning: sx.truncation_warning,
                        ..PointFlags::default()
                    },
                )
            }
            _ => {
                let iv = inverse_variance(&p.template, state, p.time, p.g_tilde, DerivativeMode::Analytic)?;
                (
                    iv.value,
                    PointFlags {
                        undefined: iv.value.is_none(),
                        truncation_warning: iv.truncation_warning,
                        ..PointFlags::default()
                    },
                )
            }
        });
    }
    if q == Quantity::Qfi {
        let point = qfi(&p.template, p.g_tilde, config.steps.delta_g_qfi)?;
        return Ok((
            Some(point.value),
            PointFlags {
                sector_crossing: point.sector_crossing,
                ..PointFlags::default()
            },
        ));
    }
    if q == Quantity::D2Energy {
        let h = config.steps.h_fd;
        if p.g_tilde - h < 0.0 {
            return Ok((None, PointFlags::UNDEFINED));
        }
        let e = |g: f64| p.template.at_g_tilde(g).map(|params| ground_energy(&params, config.steps.energy_route));
        let (lo, mid, hi) = (e(p.g_tilde - h)?, e(p.g_tilde)?, e(p.g_tilde + h)?);
        return Ok(defined((hi - 2.0 * mid + lo) / (h * h)));
    }
    let params = p.template.at_g_tilde(p.g_tilde)?;
    Ok(match q {
        Quantity::Energy => defined(find_ground_state(&params).energy),
        Quantity::NGExact => defined(find_ground_state(&params).n_g as f64),
        Quantity::EnergyMf => defined(mf_excitation(&params).energy),
        Quantity::NGMf => defined(mf_excitation(&params).n_g),
        Quantity::Coherence => defined(mf_excitation(&params).coherence),
        _ => unreachable!("handled above"),
    })
}

/// Evaluates every grid point. Points where the quantity does not exist are
/// kept as undefined rows.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let n = resolve_n_spins(config)?;
    let mut resolved = config.clone();
    resolved.model.n_spins = Some(n.n_spins);
    let base = resolved.model.template(n.n_spins);
    let probe = resolved.probe.as_ref().map(|p| p.state()).transpose()?;
    if let Some(state) = &probe {
        state.weights(n.n_spins)?;
    }
    let rows = resolved
        .grid
        .values()
        .par_iter()
        .map(|&x| {
            let (value, flags) = evaluate(&resolved, probe.as_ref(), &point_at(&resolved, &base, x))
                .unwrap_or((None, PointFlags::UNDEFINED));
            Row { axis: x, value, flags }
        })
        .collect();
    Ok(SweepResult {
        config: resolved,
        n,
        rows,
    })
}

/// [`run_sweep`] on a dedicated pool; `threads = 1` runs serially.
pub fn run_sweep_with_threads(config: &SweepConfig, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(config))
}
