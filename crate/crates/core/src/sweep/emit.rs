use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ground_state::EnergyRoute;
use crate::metrology::{PointFlags, WeightKind};
use crate::model::CouplingAxis;

use super::plot::render_svg;
use super::run::{NPolicy, Row, SweepResult};

pub const TOOL_NAME: &str = "spinqpt";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const COLUMNS: [&str; 3] = ["axis", "value", "flags"];

fn header_lines(result: &SweepResult) -> Vec<String> {
    let c = &result.config;
    let m = &c.model;
    let mut lines = vec![format!("{TOOL_NAME} {TOOL_VERSION}")];
    let mut kv = |k: &str, v: String| lines.push(format!("{k} = {v}"));
    if let Some(p) = &c.preset {
        kv("preset", p.clone());
    }
    if let Some(l) = &c.label {
        kv("label", l.clone());
    }
    kv("quantity", c.quantity.name().into());
    kv("axis", c.axis.name().into());
    kv("grid.start", c.grid.start.to_string());
    kv("grid.stop", c.grid.stop.to_string());
    kv("grid.points", c.grid.points.to_string());
    kv("omega0", m.omega0.to_string());
    kv("omega", m.omega.to_string());
    kv("delta", m.delta.to_string());
    kv("n_spins", result.n.n_spins.to_string());
    match result.n.policy {
        NPolicy::Fixed => kv("n_policy", "fixed".into()),
        NPolicy::Auto { bound_met } => {
            kv("n_policy", "auto (n_g_mf <= N/10)".into());
            kv("n_bound_met", bound_met.to_string());
        }
    }
    kv(
        "coupling_axis",
        match m.coupling_axis {
            CouplingAxis::Reduced => "reduced",
            CouplingAxis::Nominal => "nominal",
        }
        .into(),
    );
    if let Some(g) = m.g_tilde {
        kv("g_tilde", g.to_string());
    }
    if let Some(t) = m.time {
        kv("time", t.to_string());
    }
    kv("steps.h_fd", c.steps.h_fd.to_string());
    kv("steps.delta_g_qfi", c.steps.delta_g_qfi.to_string());
    kv(
        "steps.energy_route",
        match c.steps.energy_route {
            EnergyRoute::Integer => "integer",
            EnergyRoute::Continuum => "continuum",
        }
        .into(),
    );
    if let Some(p) = &c.probe {
        kv("probe.b_up", format!("{} {}", p.b_up.re, p.b_up.im));
        kv("probe.b_down", format!("{} {}", p.b_down.re, p.b_down.im));
        kv("probe.alpha", p.alpha.to_string());
        kv(
            "probe.weights",
            match p.weights {
                WeightKind::BosonicCoherent => "bosonic_coherent",
                WeightKind::SpinCoherent => "spin_coherent",
            }
            .into(),
        );
        if let Ok(state) = p.state() {
            kv("probe.truncation", state.truncation(result.n.n_spins).to_string());
        }
    }
    let template = m.template(result.n.n_spins);
    kv("derived.eta", (m.omega0 / m.omega).to_string());
    kv("derived.omega_tilde", template.omega_tilde().to_string());
    kv("derived.omega0_tilde", template.omega0_tilde().to_string());
    let product = template.omega_tilde() * template.omega0_tilde();
    kv(
        "derived.lambda_c",
        if product > 0.0 { product.sqrt().to_string() } else { "undefined".into() },
    );
    for note in &c.reproduction_choices {
        lines.push(format!("reproduction-choice: {note}"));
    }
    lines
}

fn flags_field(flags: &PointFlags) -> String {
    flags.labels().join(";")
}

fn parse_flags(field: &str) -> Result<PointFlags> {
    let mut flags = PointFlags::default();
    for label in field.split(';').filter(|s| !s.is_empty()) {
        match label {
            "undefined" => flags.undefined = true,
            "sector_crossing" => flags.sector_crossing = true,
            "truncation_warning" => flags.truncation_warning = true,
            other => return Err(Error::Config(format!("unknown flag {other:?}"))),
        }
    }
    Ok(flags)
}

/// CSV text: `#` header block, column row, one row per grid point.
pub fn render_csv(result: &SweepResult) -> Result<String> {
    let mut out = String::new();
    for line in header_lines(result) {
        writeln!(out, "# {line}").expect("write to string");
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    writer.write_record(COLUMNS).map_err(csv_err)?;
    for row in &result.rows {
        let value = row.value.map(|v| v.to_string()).unwrap_or_default();
        writer
            .write_record([row.axis.to_string(), value, flags_field(&row.flags)])
            .map_err(csv_err)?;
    }
    let body = writer.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
    Ok(out)
}

/// Writes the CSV to `path` and, with `plot`, an SVG next to it. Returns the
/// files written.
pub fn emit(result: &SweepResult, path: &Path, plot: bool) -> Result<Vec<PathBuf>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, render_csv(result)?).map_err(|e| Error::io(path, e))?;
    let mut written = vec![path.to_path_buf()];
    if plot {
        let svg_path = path.with_extension("svg");
        fs::write(&svg_path, render_svg(result)).map_err(|e| Error::io(&svg_path, e))?;
        written.push(svg_path);
    }
    Ok(written)
}

/// A CSV read back from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    /// Header lines without the leading `# `.
    pub header: Vec<String>,
    pub rows: Vec<Row>,
}

impl SweepTable {
    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header.iter().find_map(|line| {
            let (k, v) = line.split_once(" = ")?;
            (k == key).then_some(v)
        })
    }
}

pub fn parse_sweep_csv(text: &str) -> Result<SweepTable> {
    let header = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_start().to_string())
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    let columns = reader.headers().map_err(csv_err)?.clone();
    if columns.iter().ne(COLUMNS) {
        return Err(Error::Config(format!("expected columns axis,value,flags, got {columns:?}")));
    }
    let number = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("bad number {s:?}: {e}")));
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let value = match &record[1] {
            "" => None,
            v => Some(number(v)?),
        };
        rows.push(Row {
            axis: number(&record[0])?,
            value,
            flags: parse_flags(&record[2])?,
        });
    }
    Ok(SweepTable { header, rows })
}

pub fn read_sweep_csv(path: &Path) -> Result<SweepTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sweep_csv(&text)
}
