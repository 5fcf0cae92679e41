//! Brute-force group cohomology over F_p for groups given by multiplication
//! tables, in degrees ≤ 2: cocycles, cup products, the truncated modules
//! Ω/Iⁿ⊗T, generalized Bockstein maps and their equivariance, Shapiro and
//! corestriction checks, and ε-idempotents.

pub mod bockstein;
pub mod cochain;
pub mod cohomology;
pub mod epsilon;
pub mod equivariance;
pub mod filtration;
pub mod group;
pub mod io;
pub mod module;
pub mod omega;
pub mod shapiro;

pub use bockstein::{bockstein_direct, bockstein_formula, binomial_chi, Bockstein};
pub use cochain::{cup, cup_scalar, d0, d1, d2, Cochain1, Cochain2};
pub use cohomology::{Budget, Cohomology};
pub use epsilon::{epsilon_idempotent, IdempotentEpsilon};
pub use equivariance::equivariance_check;
pub use group::FiniteGroup;
pub use io::load_group_module;
pub use module::{CharacterChi, FpModule};
pub use omega::OmegaModule;
pub use shapiro::{corestriction, norm_image_check, shapiro_check};
