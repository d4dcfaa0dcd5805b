//! Parameters of the uniform XXZ central spin Hamiltonian
//!
//! ```text
//! H = ω₀ S_z + ω J_z + A (J₊ S₋ + J₋ S₊) + 2Δ J_z S_z
//! ```
//!
//! and its exact U(1) block decomposition. The total excitation number is
//! conserved, so apart from the two unpaired states `|↓,0⟩` and `|↑,2j⟩` the
//! Dicke sector splits into 2×2 blocks spanned by `|↑,n−1⟩` and `|↓,n⟩`,
//! `n = 1..=2j`. All energies are in units with ħ = 1.

use crate::error::{Error, Result};

/// The five physical inputs of the uniform model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    omega0: f64,
    omega: f64,
    coupling: f64,
    delta: f64,
    n_spins: u32,
}

impl ModelParams {
    /// `omega0` central-spin frequency, `omega` bath frequency, `coupling` the
    /// transverse coupling A per bath spin, `delta` the longitudinal coupling,
    /// `n_spins` the number of bath spins N.
    pub fn new(omega0: f64, omega: f64, coupling: f64, delta: f64, n_spins: u32) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::domain(format!("omega0 must be > 0, got {omega0}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::domain(format!("omega must be > 0, got {omega}")));
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::domain(format!("A must be >= 0, got {coupling}")));
        }
        if !delta.is_finite() {
            return Err(Error::domain("delta must be finite"));
        }
        if n_spins == 0 {
            return Err(Error::domain("N must be >= 1"));
        }
        Ok(Self {
            omega0,
            omega,
            coupling,
            delta,
            n_spins,
        })
    }

    /// Builds parameters from the reduced coupling g̃ by back-solving
    /// `A = g̃ √(ω̃ ω̃₀ / N)`. Fails when g̃ is undefined (ω̃ ω̃₀ ≤ 0).
    pub fn from_g_tilde(omega0: f64, omega: f64, delta: f64, n_spins: u32, g_tilde: f64) -> Result<Self> {
        let scale = (omega - delta) * (omega0 - n_spins as f64 * delta);
        if !(scale > 0.0) {
            return Err(Error::inadmissible(format!(
                "g~ undefined: (omega - delta)(omega0 - N delta) = {scale} <= 0"
            )));
        }
        if g_tilde < 0.0 {
            return Err(Error::domain(format!("g~ must be >= 0, got {g_tilde}")));
        }
        Self::new(omega0, omega, g_tilde * (scale / n_spins as f64).sqrt(), delta, n_spins)
    }

    /// Like [`ModelParams::from_g_tilde`], but when ω̃ ω̃₀ < 0 the nominal
    /// scale √|ω̃ ω̃₀| is used so that sweeps past |Δ| = ω keep a coupling axis.
    pub fn from_nominal_g_tilde(
        omega0: f64,
        omega: f64,
        delta: f64,
        n_spins: u32,
        g_tilde: f64,
    ) -> Result<Self> {
        let scale = ((omega - delta) * (omega0 - n_spins as f64 * delta)).abs();
        if scale == 0.0 {
            return Err(Error::inadmissible("g~ undefined: omega~ omega0~ = 0"));
        }
        if g_tilde < 0.0 {
            return Err(Error::domain(format!("g~ must be >= 0, got {g_tilde}")));
        }
        Self::new(omega0, omega, g_tilde * (scale / n_spins as f64).sqrt(), delta, n_spins)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Transverse coupling A.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    /// Bath spin j = N/2.
    pub fn j(&self) -> f64 {
        self.n_spins as f64 / 2.0
    }

    /// Collective coupling λ = A√N.
    pub fn lambda(&self) -> f64 {
        self.coupling * (self.n_spins as f64).sqrt()
    }

    /// ω̃ = ω − Δ.
    pub fn omega_tilde(&self) -> f64 {
        self.omega - self.delta
    }

    /// ω̃₀ = ω₀ − NΔ.
    pub fn omega0_tilde(&self) -> f64 {
        self.omega0 - self.n_spins as f64 * self.delta
    }

    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(self.omega0, self.omega, coupling, self.delta, self.n_spins)
    }

    pub fn derive(&self) -> DerivedParams {
        derive(self)
    }

    /// Validated index of the 2×2 block with excitation number `n`.
    pub fn block(&self, n: u32) -> Result<BlockIndex> {
        BlockIndex::new(self.n_spins, n)
    }

    /// Lower-branch energy E₋ of the block formula continued to real `x`
    /// in `[0, 2j]`. At integer `x = n ≥ 1` it equals `block_eigensystem(n).e_minus`;
    /// at `x = 0` it equals `E↓,0` whenever `ω̃₀ > ω + Δ`.
    pub fn lower_branch_continuous(&self, x: f64) -> f64 {
        let n = self.n_spins as f64;
        let two_m_plus_one = 2.0 * x - 1.0 - n;
        let k = (n - x + 1.0) * x;
        let o1 = 2.0 * self.coupling * k.max(0.0).sqrt();
        let o2 = two_m_plus_one * self.delta - self.omega + self.omega0;
        let o3 = self.delta - two_m_plus_one * self.omega;
        0.5 * (-o3 - o1.hypot(o2))
    }
}

/// How a sweep coordinate is turned into the coupling A.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CouplingAxis {
    /// A = g̃ √(ω̃ω̃₀/N); undefined when ω̃ω̃₀ ≤ 0.
    #[default]
    Reduced,
    /// A = g̃ √(|ω̃ω̃₀|/N), defined past |Δ| = ω.
    Nominal,
}

/// Everything but the coupling: sweeps fill in A from the reduced coupling g̃.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelTemplate {
    pub omega0: f64,
    pub omega: f64,
    pub delta: f64,
    pub n_spins: u32,
    pub axis: CouplingAxis,
}

impl ModelTemplate {
    pub fn new(omega0: f64, omega: f64, delta: f64, n_spins: u32) -> Self {
        Self {
            omega0,
            omega,
            delta,
            n_spins,
            axis: CouplingAxis::Reduced,
        }
    }

    pub fn with_axis(self, axis: CouplingAxis) -> Self {
        Self { axis, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_n_spins(self, n_spins: u32) -> Self {
        Self { n_spins, ..self }
    }

    /// Parameters at coupling coordinate `g_tilde` on this template's axis.
    pub fn at_g_tilde(&self, g_tilde: f64) -> Result<ModelParams> {
        match self.axis {
            CouplingAxis::Reduced => self.at_reduced_g_tilde(g_tilde),
            CouplingAxis::Nominal => self.at_nominal_g_tilde(g_tilde),
        }
    }

    pub fn at_reduced_g_tilde(&self, g_tilde: f64) -> Result<ModelParams> {
        ModelParams::from_g_tilde(self.omega0, self.omega, self.delta, self.n_spins, g_tilde)
    }

    pub fn at_nominal_g_tilde(&self, g_tilde: f64) -> Result<ModelParams> {
        ModelParams::from_nominal_g_tilde(self.omega0, self.omega, self.delta, self.n_spins, g_tilde)
    }

    /// ω̃ = ω − Δ.
    pub fn omega_tilde(&self) -> f64 {
        self.omega - self.delta
    }

    /// ω̃₀ = ω₀ − NΔ.
    pub fn omega0_tilde(&self) -> f64 {
        self.omega0 - self.n_spins as f64 * self.delta
    }
}

/// Frequencies and couplings derived from [`ModelParams`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedParams {
    pub j: f64,
    pub lambda: f64,
    pub eta: f64,
    pub omega_tilde: f64,
    pub omega0_tilde: f64,
    pub g: f64,
    /// `None` when ω̃ ω̃₀ ≤ 0.
    pub g_tilde: Option<f64>,
    /// `None` when ω̃ ω̃₀ ≤ 0.
    pub lambda_c: Option<f64>,
}

pub fn derive(params: &ModelParams) -> DerivedParams {
    let lambda = params.lambda();
    let omega_tilde = params.omega_tilde();
    let omega0_tilde = params.omega0_tilde();
    let product = omega_tilde * omega0_tilde;
    let lambda_c = (product > 0.0).then(|| product.sqrt());
    DerivedParams {
        j: params.j(),
        lambda,
        eta: params.omega0 / params.omega,
        omega_tilde,
        omega0_tilde,
        g: lambda / (params.omega0 * params.omega).sqrt(),
        g_tilde: lambda_c.map(|lc| lambda / lc),
        lambda_c,
    }
}

/// Excitation-number sector `n ∈ [1, 2j]`, with `m = n − 1 − j` kept as the
/// exact integer `2m` so that odd N carries no rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockIndex {
    n: u32,
    two_m: i64,
    k_n: u64,
}

impl BlockIndex {
    pub fn new(n_spins: u32, n: u32) -> Result<Self> {
        if n < 1 || n > n_spins {
            return Err(Error::domain(format!("block index n = {n} outside [1, {n_spins}]")));
        }
        let two_m = 2 * n as i64 - 2 - n_spins as i64;
        let k_n = (n_spins as u64 - n as u64 + 1) * n as u64;
        Ok(Self { n, two_m, k_n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// m = n − 1 − j.
    pub fn m(&self) -> f64 {
        self.two_m as f64 / 2.0
    }

    /// Twice m; exact.
    pub fn two_m(&self) -> i64 {
        self.two_m
    }

    /// k_n = (2j − n + 1) n.
    pub fn k_n(&self) -> u64 {
        self.k_n
    }
}

/// Real symmetric 2×2 matrix `[[a, b], [b, d]]` in the basis `(|↑,n−1⟩, |↓,n⟩)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockMatrix {
    pub up_up: f64,
    pub down_down: f64,
    pub off_diag: f64,
}

pub fn block_matrix(params: &ModelParams, index: BlockIndex) -> BlockMatrix {
    let m = index.m();
    BlockMatrix {
        up_up: params.omega0 / 2.0 + (params.omega + params.delta) * m,
        down_down: -params.omega0 / 2.0 + (params.omega - params.delta) * (m + 1.0),
        off_diag: params.coupling * (index.k_n as f64).sqrt(),
    }
}

/// Exact eigensystem of one 2×2 block. Amplitudes are `[c_up, c_down]`,
/// the coefficients of `|↑,n−1⟩` and `|↓,n⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockSpectrum {
    pub index: BlockIndex,
    pub e_minus: f64,
    pub e_plus: f64,
    pub minus: [f64; 2],
    pub plus: [f64; 2],
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

pub fn block_eigensystem(params: &ModelParams, index: BlockIndex) -> BlockSpectrum {
    let two_m_plus_one = (index.two_m + 1) as f64;
    let omega1 = 2.0 * params.coupling * (index.k_n as f64).sqrt();
    let omega2 = two_m_plus_one * params.delta - params.omega + params.omega0;
    let omega3 = params.delta - two_m_plus_one * params.omega;
    let radius = omega1.hypot(omega2);

    let (minus, plus) = if omega1 == 0.0 {
        // Bare basis ordered by diagonal energy; fixed order when fully degenerate.
        if omega2 > 0.0 {
            ([0.0, 1.0], [1.0, 0.0])
        } else {
            ([1.0, 0.0], [0.0, 1.0])
        }
    } else {
        // Mixing angle φ = atan2(Ω₁, Ω₂): |+⟩ = (cos φ/2, sin φ/2), |−⟩ = (−sin φ/2, cos φ/2).
        let half = 0.5 * omega1.atan2(omega2);
        let (s, c) = half.sin_cos();
        ([-s, c], [c, s])
    };

    BlockSpectrum {
        index,
        e_minus: 0.5 * (-omega3 - radius),
        e_plus: 0.5 * (-omega3 + radius),
        minus,
        plus,
        omega1,
        omega2,
        omega3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// `|↓,0⟩`
    DownZero,
    /// `|↑,2j⟩`
    UpFull,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeState {
    pub label: EdgeLabel,
    pub energy: f64,
}

/// The two unpaired Dicke-sector states, `(|↓,0⟩, |↑,2j⟩)`.
pub fn edge_state_energies(params: &ModelParams) -> (EdgeState, EdgeState) {
    let j = params.j();
    (
        EdgeState {
            label: EdgeLabel::DownZero,
            energy: -params.omega0 / 2.0 - (params.omega - params.delta) * j,
        },
        EdgeState {
            label: EdgeLabel::UpFull,
            energy: params.omega0 / 2.0 + (params.omega + params.delta) * j,
        },
    )
}

/// All 2(N+1) energies from the block formulas and edge states, ascending.
pub fn analytic_spectrum(params: &ModelParams) -> Vec<f64> {
    let (down, up) = edge_state_energies(params);
    let mut energies = Vec::with_capacity(2 * params.n_spins as usize + 2);
    energies.push(down.energy);
    energies.push(up.energy);
    for n in 1..=params.n_spins {
        let bs = block_eigensystem(params, BlockIndex::new(params.n_spins, n).expect("n in range"));
        energies.push(bs.e_minus);
        energies.push(bs.e_plus);
    }
    energies.sort_by(f64::total_cmp);
    energies
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(omega0: f64, omega: f64, a: f64, delta: f64, n: u32) -> ModelParams {
        ModelParams::new(omega0, omega, a, delta, n).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(0.0, 1.0, 0.0, 0.0, 1).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.0, 0.0, 1).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 0.0, 1).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, 0.0, 0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, f64::NAN, 3).is_err());
    }

    #[test]
    fn derive_critical_coupling() {
        let d = p(100.0, 0.5, 0.3, 0.0, 200).derive();
        assert_eq!(d.omega0_tilde, 100.0);
        assert_eq!(d.omega_tilde, 0.5);
        assert!((d.lambda_c.unwrap() - 50f64.sqrt()).abs() < 1e-12);
        assert!((d.lambda_c.unwrap() - 7.0711).abs() < 1e-4);

        let d = p(100.0, 0.5, 0.3, -0.25, 200).derive();
        assert_eq!(d.omega0_tilde, 150.0);
        assert_eq!(d.omega_tilde, 0.75);
        assert!((d.lambda_c.unwrap() - 10.6066).abs() < 1e-4);
        assert!((d.g_tilde.unwrap() * d.lambda_c.unwrap() - d.lambda).abs() < 1e-12);
        assert!((d.lambda - 0.3 * 200f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.eta, 200.0);
    }

    #[test]
    fn derive_marks_undefined_g_tilde() {
        let d = p(1.0, 1.0, 0.5, 1.0, 1).derive();
        assert_eq!(d.omega_tilde, 0.0);
        assert!(d.g_tilde.is_none());
        assert!(d.lambda_c.is_none());
        assert!(ModelParams::from_g_tilde(1.0, 1.0, 1.0, 1, 0.5).is_err());
    }

    #[test]
    fn g_tilde_back_solve_round_trips() {
        let params = ModelParams::from_g_tilde(100.0, 0.5, 0.1, 200, 1.3).unwrap();
        assert!((params.derive().g_tilde.unwrap() - 1.3).abs() < 1e-12);
    }

    #[test]
    fn block_matrix_entries() {
        let params = p(1.0, 1.0, 0.0, 0.0, 4);
        let b = block_matrix(&params, params.block(1).unwrap());
        assert_eq!((b.up_up, b.down_down, b.off_diag), (-1.5, -1.5, 0.0));

        let params = p(100.0, 0.5, 0.2, 0.1, 20);
        let b = block_matrix(&params, params.block(3).unwrap());
        assert!((b.off_diag - 0.2 * 54f64.sqrt()).abs() < 1e-14);

        let params = p(3.0, 0.7, 0.25, -0.1, 9);
        let top = params.block(9).unwrap();
        assert_eq!(top.k_n(), 9);
        assert!((block_matrix(&params, top).off_diag - params.lambda()).abs() < 1e-14);
    }

    #[test]
    fn block_index_out_of_range() {
        assert!(BlockIndex::new(4, 0).is_err());
        assert!(BlockIndex::new(4, 5).is_err());
        let b = BlockIndex::new(5, 2).unwrap();
        assert_eq!(b.two_m(), -3);
        assert_eq!(b.m(), -1.5);
        assert_eq!(b.k_n(), 8);
    }

    #[test]
    fn degenerate_block_uses_fixed_order() {
        let params = p(1.0, 1.0, 0.0, 0.0, 4);
        let bs = block_eigensystem(&params, params.block(1).unwrap());
        assert_eq!(bs.e_minus, -1.5);
        assert_eq!(bs.e_plus, -1.5);
        assert_eq!(bs.minus, [1.0, 0.0]);
        assert_eq!(bs.plus, [0.0, 1.0]);
    }

    #[test]
    fn uncoupled_block_orders_bare_states() {
        // Ω₂ > 0: |↑,n−1⟩ is the upper state.
        let params = p(100.0, 0.5, 0.0, 0.0, 6);
        let bs = block_eigensystem(&params, params.block(2).unwrap());
        assert_eq!(bs.minus, [0.0, 1.0]);
        assert_eq!(bs.plus, [1.0, 0.0]);
        let b = block_matrix(&params, params.block(2).unwrap());
        assert_eq!(bs.e_minus, b.down_down);
        assert_eq!(bs.e_plus, b.up_up);
    }

    #[test]
    fn closed_form_matches_matrix_eigenvalues() {
        let params = p(100.0, 0.5, 0.2, 0.1, 20);
        let index = params.block(3).unwrap();
        let b = block_matrix(&params, index);
        let bs = block_eigensystem(&params, index);
        // Independent route: trace/determinant quadratic.
        let tr = b.up_up + b.down_down;
        let det = b.up_up * b.down_down - b.off_diag * b.off_diag;
        let disc = (tr * tr / 4.0 - det).sqrt();
        let scale = b.up_up.abs().max(b.down_down.abs());
        assert!((bs.e_minus - (tr / 2.0 - disc)).abs() <= 1e-12 * scale);
        assert!((bs.e_plus - (tr / 2.0 + disc)).abs() <= 1e-12 * scale);
    }

    /// Literal quotient form of the eigenvector amplitudes, well conditioned for |Ω̃| ~ 1.
    fn quotient_amplitudes(omega1: f64, omega2: f64) -> ([f64; 2], [f64; 2]) {
        let r = omega2 / omega1;
        let s = (1.0 + r * r).sqrt();
        let plus_norm = (2.0 * (1.0 + r * r) + 2.0 * r * s).sqrt();
        let minus_norm = (2.0 * (1.0 + r * r) - 2.0 * r * s).sqrt();
        ([(r - s) / minus_norm, 1.0 / minus_norm], [(r + s) / plus_norm, 1.0 / plus_norm])
    }

    #[test]
    fn eigenvectors_match_quotient_form() {
        let params = p(2.0, 1.0, 0.4, 0.3, 8);
        for n in 1..=8 {
            let bs = block_eigensystem(&params, params.block(n).unwrap());
            let (minus, plus) = quotient_amplitudes(bs.omega1, bs.omega2);
            for i in 0..2 {
                assert!((bs.minus[i] - minus[i]).abs() < 1e-12, "n={n}");
                assert!((bs.plus[i] - plus[i]).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal_eigenvectors() {
        let params = p(1000.0, 0.1, 0.05, -0.03, 50);
        for n in 1..=50 {
            let index = params.block(n).unwrap();
            let bs = block_eigensystem(&params, index);
            let b = block_matrix(&params, index);
            for (v, e) in [(bs.minus, bs.e_minus), (bs.plus, bs.e_plus)] {
                assert!((v[0] * v[0] + v[1] * v[1] - 1.0).abs() < 1e-12);
                let scale = b.up_up.abs().max(b.down_down.abs());
                assert!((b.up_up * v[0] + b.off_diag * v[1] - e * v[0]).abs() < 1e-12 * scale);
                assert!((b.off_diag * v[0] + b.down_down * v[1] - e * v[1]).abs() < 1e-12 * scale);
            }
            let dot = bs.minus[0] * bs.plus[0] + bs.minus[1] * bs.plus[1];
            assert!(dot.abs() < 1e-12);
            assert!(bs.e_minus <= bs.e_plus);
        }
    }

    #[test]
    fn edge_energies() {
        let (down, _) = edge_state_energies(&p(100.0, 0.5, 0.3, 0.1, 10));
        assert!((down.energy - -52.0).abs() < 1e-12);

        let (down, up) = edge_state_energies(&p(1.0, 1.0, 0.0, 0.0, 2));
        assert_eq!(down.energy, -1.5);
        assert_eq!(up.energy, 1.5);
        assert_eq!(down.label, EdgeLabel::DownZero);
        assert_eq!(up.label, EdgeLabel::UpFull);

        for n in [1, 7, 100] {
            let (down, _) = edge_state_energies(&p(3.0, 0.8, 0.2, 0.8, n));
            assert_eq!(down.energy, -1.5);
        }
    }

    #[test]
    fn continuous_branch_agrees_at_integers_and_zero() {
        let params = p(100.0, 0.5, 0.11, 0.1, 40);
        for n in 1..=40 {
            let bs = block_eigensystem(&params, params.block(n).unwrap());
            let cont = params.lower_branch_continuous(n as f64);
            assert!((cont - bs.e_minus).abs() < 1e-12 * bs.e_minus.abs().max(1.0));
        }
        let (down, _) = edge_state_energies(&params);
        assert!((params.lower_branch_continuous(0.0) - down.energy).abs() < 1e-12 * down.energy.abs());
    }
}
