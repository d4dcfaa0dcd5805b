//! Exact and mean-field numerics for a central spin coupled to a uniform
//! XXZ spin bath.

pub mod check;
pub mod effective;
pub mod error;
pub mod ground_state;
pub mod mean_field;
pub mod metrology;
pub mod model;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};
pub use ground_state::{find_ground_state, EnergyCurve, EnergyRoute, GroundBranch, GroundStateReport};
pub use mean_field::{mf_excitation, MeanFieldSolution, Phase};
pub use metrology::{InitialState, PointFlags, SensitivityCurve, WeightKind};
pub use model::{BlockIndex, BlockSpectrum, CouplingAxis, DerivedParams, EdgeState, ModelParams, ModelTemplate};
