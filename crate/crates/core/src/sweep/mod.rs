//! Parameter sweeps, reference presets and CSV/SVG output.

mod config;
mod emit;
mod plot;
mod preset;
mod run;

pub use config::{Grid, ModelSettings, ProbeSettings, Quantity, Steps, SweepAxis, SweepConfig};
pub use emit::{emit, COLUMNS, parse_sweep_csv, read_sweep_csv, render_csv, SweepTable, TOOL_NAME, TOOL_VERSION};
pub use plot::render_svg;
pub use preset::{emit_preset, Preset};
pub use run::{resolve_n_spins, run_sweep, run_sweep_with_threads, NPolicy, NResolution, Row, SweepResult, N_CAP};
