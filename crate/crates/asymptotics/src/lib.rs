//! Finite estimates of joint spreading models.
//!
//! Norm tables are stabilized over gated strict plegma families, compared
//! against `ℓ_p`, and probed for suppression unconditionality. The James
//! tree part builds level block families and checks the square-function
//! bounds they satisfy.

pub mod error;
pub mod estimate;
pub mod generator;
pub mod levelblock;
pub mod net;
pub mod norm;
pub mod schedule;
pub mod suppression;

pub use error::AsymError;
pub use estimate::{equivalence_constant, jsm_estimate, standard_nets, Equivalence, JsmEstimate, KTable, Outcome, TableRow, DEFAULT_BUDGET};
pub use generator::SequenceGenerator;
pub use levelblock::{build_level_block_family, check_hypotheses, level_block_check, sign_vectors, LevelBlockFamily, LevelCheck};
pub use net::CoeffNet;
pub use norm::{Ambient, NormValue, Ratio};
pub use schedule::StabilizationSchedule;
pub use suppression::{suppression_constant, Suppression};
