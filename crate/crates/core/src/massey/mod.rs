//! Defining systems and Massey products over F_p: unipotent matrices,
//! proper defining systems built from a binomial staircase in χ, the Massey
//! 2-cocycle and its vanishing, lifting, block composition, and the groups
//! M_n ⊂ U_{n+2}(F_p).
//!
//! Coefficients in the last column carry a genuine G-action and the law is
//! ρ̄(gh) = ρ̄(g)·gρ̄(h). "Vanishes" always means relative to the given
//! defining system.

pub mod mn;
pub mod system;
pub mod unipotent;

pub use mn::{build_mn, MnGroup};
pub use system::{
    block_compose, extend_proper, lift_search, massey_value, proper_system, DefiningSystem, Lift, MasseyResult,
};
pub use unipotent::UnipotentMatrix;
