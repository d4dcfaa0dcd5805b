//! Exact ground state by scanning the U(1) sectors.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{block_eigensystem, edge_state_energies, BlockIndex, ModelParams, ModelTemplate};
use crate::oracle::basis_index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroundBranch {
    EdgeDownZero,
    BlockMinus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundStateReport {
    /// Bath excitation number of the ground sector.
    pub n_g: u32,
    pub energy: f64,
    pub branch: GroundBranch,
    /// Amplitude on `|↑,n_g−1⟩`; zero for edge branches.
    pub c_up: f64,
    /// Amplitude on `|↓,n_g⟩`; zero for edge branches.
    pub c_down: f64,
}

impl GroundStateReport {
    /// The ground state as a vector in the 2(N+1)-dimensional product basis
    /// of [`crate::oracle`].
    pub fn to_dense(&self, n_spins: u32) -> DVector<f64> {
        let mut v = DVector::zeros(2 * (n_spins as usize + 1));
        match self.branch {
            GroundBranch::EdgeDownZero => v[basis_index(n_spins, false, 0)] = 1.0,
            GroundBranch::BlockMinus => {
                v[basis_index(n_spins, true, self.n_g - 1)] = self.c_up;
                v[basis_index(n_spins, false, self.n_g)] = self.c_down;
            }
        }
        v
    }

    /// `|⟨self|other⟩|` for two ground states of the same N. States in
    /// different sectors share no basis state and overlap exactly zero.
    pub fn overlap(&self, other: &GroundStateReport) -> f64 {
        if self.branch != other.branch || self.n_g != other.n_g {
            return 0.0;
        }
        match self.branch {
            GroundBranch::BlockMinus => (self.c_up * other.c_up + self.c_down * other.c_down).abs(),
            _ => 1.0,
        }
    }
}

/// Global minimum over `|↓,0⟩` and the lower branch of every block. Ties
/// resolve to the smallest excitation number. `|↑,2j⟩` never competes: it
/// lies ω₀ + Nω above `|↓,0⟩`.
pub fn find_ground_state(params: &ModelParams) -> GroundStateReport {
    let (down, _) = edge_state_energies(params);
    let mut best = GroundStateReport {
        n_g: 0,
        energy: down.energy,
        branch: GroundBranch::EdgeDownZero,
        c_up: 0.0,
        c_down: 0.0,
    };
    for n in 1..=params.n_spins() {
        let bs = block_eigensystem(params, BlockIndex::new(params.n_spins(), n).expect("n in range"));
        if bs.e_minus < best.energy {
            best = GroundStateReport {
                n_g: n,
                energy: bs.e_minus,
                branch: GroundBranch::BlockMinus,
                c_up: bs.minus[0],
                c_down: bs.minus[1],
            };
        }
    }
    best
}

/// Minimizer of the lower-branch energy with the excitation number treated
/// as a real variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuumGround {
    pub n: f64,
    pub energy: f64,
}

/// Ground energy with n relaxed to a real number in `[0, 2j]`.
///
/// The search is seeded by the integer argmin and refined by golden section
/// on the two neighbouring unit intervals; `|↓,0⟩` stays a candidate.
/// The segment `x ∈ (0, 1)` is only used when the continued branch connects
/// to `|↓,0⟩` (Ω₂ ≥ 0 at x = 0).
pub fn continuum_ground_state(params: &ModelParams) -> ContinuumGround {
    let n_max = params.n_spins() as f64;
    let (down, _) = edge_state_energies(params);
    let omega2_at_zero = params.omega0() - params.omega() - (n_max + 1.0) * params.delta();
    let lo = if omega2_at_zero >= 0.0 { 0 } else { 1 };

    let energy_at = |x: f64| params.lower_branch_continuous(x);
    let (seed, _) = (lo..=params.n_spins())
        .map(|n| (n, energy_at(n as f64)))
        .fold((lo, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });

    let a = (seed.saturating_sub(1)).max(lo) as f64;
    let b = (seed + 1).min(params.n_spins()) as f64;
    let (x_min, e_min) = golden_section(energy_at, a, b);

    let mut best = ContinuumGround {
        n: 0.0,
        energy: down.energy,
    };
    for (x, e) in [(a, energy_at(a)), (b, energy_at(b)), (x_min, e_min)] {
        if e < best.energy {
            best = ContinuumGround { n: x, energy: e };
        }
    }
    best
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// How the ground energy is evaluated along a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EnergyRoute {
    /// Minimum over integer sectors ([`find_ground_state`]).
    Integer,
    /// Minimum over real n ([`continuum_ground_state`]).
    #[default]
    Continuum,
}

pub fn ground_energy(params: &ModelParams, route: EnergyRoute) -> f64 {
    match route {
        EnergyRoute::Integer => find_ground_state(params).energy,
        EnergyRoute::Continuum => continuum_ground_state(params).energy,
    }
}

/// Exact n_g at each g̃; grid points where g̃ is undefined yield an error
/// entry and the sweep continues.
pub fn excitation_sweep(template: &ModelTemplate, grid: &[f64]) -> Vec<(f64, Result<u32>)> {
    grid.par_iter()
        .map(|&g| (g, template.at_g_tilde(g).map(|p| find_ground_state(&p).n_g)))
        .collect()
}

/// Ground energy and its finite-difference second derivative in g̃.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyCurve {
    pub grid: Vec<f64>,
    pub energy: Vec<f64>,
    pub d2: Vec<f64>,
}

pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// `d2[i] = (E(g̃+h) − 2E(g̃) + E(g̃−h)) / h²`.
pub fn energy_second_derivative(
    template: &ModelTemplate,
    grid: &[f64],
    h: f64,
    route: EnergyRoute,
) -> Result<EnergyCurve> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("finite-difference step must be > 0, got {h}")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    if let Some(&g0) = grid.first() {
        if g0 - h < 0.0 {
            return Err(Error::domain(format!("g~ = {g0} does not admit g~ - h >= 0")));
        }
    }
    let rows: Result<Vec<(f64, f64)>> = grid
        .par_iter()
        .map(|&g| {
            let e = |x: f64| template.at_g_tilde(x).map(|p| ground_energy(&p, route));
            let (lo, mid, hi) = (e(g - h)?, e(g)?, e(g + h)?);
            Ok((mid, (hi - 2.0 * mid + lo) / (h * h)))
        })
        .collect();
    let (energy, d2) = rows?.into_iter().unzip();
    Ok(EnergyCurve {
        grid: grid.to_vec(),
        energy,
        d2,
    })
}
